//! Simulation configuration.

use std::path::PathBuf;

use crate::adversary::AttackModel;
use crate::error::ConfigError;
use crate::protocol::Secret;

/// How each trial's secret pair is produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecretMode {
    /// The same explicit pair every trial.
    Explicit { a: Secret, b: Secret },
    /// Two independent uniform secrets per trial.
    Random,
    /// One uniform secret, compared against itself.
    EqualPair,
    /// Secrets whose first difference sits at bit `j` (1-based): bits below
    /// `j` agree, bit `j` differs, later bits are independent.
    DifferAt(usize),
}

/// Output encodings of the report emitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Json,
    Tsv,
}

/// A full Monte Carlo batch description.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub length: usize,
    pub secret_mode: SecretMode,
    pub decoys_per_channel: usize,
    pub threshold: f64,
    pub attack: AttackModel,
    pub trials: usize,
    pub master_seed: u64,
    pub format: OutputFormat,
    /// When set, every trial's transcript is appended here, separated by
    /// `# trial N` comment lines.
    pub dump_transcript: Option<PathBuf>,
}

impl SimConfig {
    /// Sensible defaults for a batch: decoys per channel equal to the
    /// secret length, zero threshold, no attack.
    pub fn new(length: usize, trials: usize, master_seed: u64) -> Self {
        SimConfig {
            length,
            secret_mode: SecretMode::Random,
            decoys_per_channel: length.max(1),
            threshold: 0.0,
            attack: AttackModel::None,
            trials,
            master_seed,
            format: OutputFormat::Human,
            dump_transcript: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.length == 0 {
            return Err(ConfigError::ZeroLength);
        }
        if self.trials == 0 {
            return Err(ConfigError::ZeroTrials);
        }
        if self.decoys_per_channel == 0 {
            return Err(ConfigError::ZeroDecoys);
        }
        if !(0.0..=1.0).contains(&self.threshold) || self.threshold.is_nan() {
            return Err(ConfigError::ThresholdOutOfRange(self.threshold));
        }
        match &self.secret_mode {
            SecretMode::Explicit { a, b } => {
                if a.len() != self.length {
                    return Err(ConfigError::SecretLengthMismatch {
                        expected: self.length,
                        got: a.len(),
                    });
                }
                if b.len() != self.length {
                    return Err(ConfigError::SecretLengthMismatch {
                        expected: self.length,
                        got: b.len(),
                    });
                }
            }
            SecretMode::DifferAt(j) => {
                if *j == 0 || *j > self.length {
                    return Err(ConfigError::DifferAtOutOfRange {
                        j: *j,
                        length: self.length,
                    });
                }
            }
            SecretMode::Random | SecretMode::EqualPair => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_catches_bad_fields() {
        let mut config = SimConfig::new(4, 10, 1);
        config.validate().unwrap();

        config.trials = 0;
        assert_eq!(config.validate().unwrap_err(), ConfigError::ZeroTrials);
        config.trials = 10;

        config.threshold = 1.5;
        assert!(matches!(
            config.validate().unwrap_err(),
            ConfigError::ThresholdOutOfRange(_)
        ));
        config.threshold = 0.0;

        config.secret_mode = SecretMode::DifferAt(5);
        assert!(matches!(
            config.validate().unwrap_err(),
            ConfigError::DifferAtOutOfRange { j: 5, length: 4 }
        ));

        config.secret_mode = SecretMode::Explicit {
            a: Secret::from_bit_str("010").unwrap(),
            b: Secret::from_bit_str("0101").unwrap(),
        };
        assert!(matches!(
            config.validate().unwrap_err(),
            ConfigError::SecretLengthMismatch { expected: 4, got: 3 }
        ));
    }
}
