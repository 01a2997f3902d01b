//! Exhaustive verification of the round arithmetic.
//!
//! For each of the four initial states the evolved superposition has
//! exactly two computational-basis branches, each of weight 1/2 and of the
//! initial state's parity. Crossing those 8 (state, branch) cases with the
//! 4 secret-bit pairs and the 4 key pairs gives 128 configurations; in
//! every one the users' decoded bit must equal the XOR of the secret bits.
//! The chain is enumerated directly from the unitary's amplitudes, with no
//! sampling, independent of the protocol engine's measurement path.

use serde::{Deserialize, Serialize};

use crate::protocol::{decode_result, parity_code, tp_combine};
use crate::quantum::{cavity_unitary, ProductLabel, AMP_THRESHOLD, NORM_TOLERANCE};

/// One failed configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Violation {
    pub initial: String,
    pub branch: String,
    pub secret_a: u8,
    pub secret_b: u8,
    pub key_a: u8,
    pub key_b: u8,
    pub reason: String,
}

/// Machine-readable outcome of the exhaustive check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Certificate {
    /// Number of (initial, branch, secrets, keys) configurations checked.
    pub total_configurations: usize,
    pub passed: bool,
    pub violations: Vec<Table1Violation>,
}

fn label_name(label: ProductLabel) -> &'static str {
    match label {
        ProductLabel::GG => "gg",
        ProductLabel::GE => "ge",
        ProductLabel::EG => "eg",
        ProductLabel::EE => "ee",
    }
}

/// Enumerate all 128 configurations and check the decoded bit against the
/// secret-bit XOR, along with the structural facts the chain rests on.
pub fn verify_table1() -> Table1Certificate {
    let unitary = cavity_unitary();
    let mut total_configurations = 0usize;
    let mut violations = Vec::new();

    for initial in ProductLabel::ALL {
        let column = unitary.column(initial.index());
        let branches: Vec<usize> = (0..4)
            .filter(|&k| column[k].norm() > AMP_THRESHOLD)
            .collect();

        if branches.len() != 2 {
            violations.push(Table1Violation {
                initial: label_name(initial).into(),
                branch: "-".into(),
                secret_a: 0,
                secret_b: 0,
                key_a: 0,
                key_b: 0,
                reason: format!("expected 2 branches, found {}", branches.len()),
            });
            continue;
        }

        for &branch in &branches {
            let branch_label = ProductLabel::from_index(branch).expect("index < 4");
            let weight = column[branch].norm_sqr();
            if (weight - 0.5).abs() > NORM_TOLERANCE {
                violations.push(Table1Violation {
                    initial: label_name(initial).into(),
                    branch: label_name(branch_label).into(),
                    secret_a: 0,
                    secret_b: 0,
                    key_a: 0,
                    key_b: 0,
                    reason: format!("branch weight {weight} is not 1/2"),
                });
            }

            let measured_a = (branch >> 1) as u8;
            let measured_b = (branch & 1) as u8;
            let tp_parity = parity_code(initial);
            if measured_a ^ measured_b != tp_parity {
                violations.push(Table1Violation {
                    initial: label_name(initial).into(),
                    branch: label_name(branch_label).into(),
                    secret_a: 0,
                    secret_b: 0,
                    key_a: 0,
                    key_b: 0,
                    reason: "branch parity differs from the initial state's".into(),
                });
            }

            for secret_a in 0..=1u8 {
                for secret_b in 0..=1u8 {
                    for key_a in 0..=1u8 {
                        for key_b in 0..=1u8 {
                            total_configurations += 1;
                            let masked_a = secret_a ^ measured_a ^ key_a;
                            let masked_b = secret_b ^ measured_b ^ key_b;
                            let combined = tp_combine(masked_a, masked_b, initial);
                            let decoded = decode_result(combined, key_a, key_b);
                            if decoded != secret_a ^ secret_b {
                                violations.push(Table1Violation {
                                    initial: label_name(initial).into(),
                                    branch: label_name(branch_label).into(),
                                    secret_a,
                                    secret_b,
                                    key_a,
                                    key_b,
                                    reason: format!(
                                        "decoded {decoded}, expected {}",
                                        secret_a ^ secret_b
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    Table1Certificate {
        total_configurations,
        passed: violations.is_empty(),
        violations,
    }
}
