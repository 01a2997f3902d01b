//! The public classical record of a protocol run.
//!
//! Every event here is information an outside observer of the classical
//! channel would see. Secret bits, key bits, measurement codes, and the
//! initial-state labels never appear; announcements carry only the masked
//! values the parties actually publish.
//!
//! The wire form is line-delimited text, one event per line: an event kind
//! followed by tab-separated `key=value` fields. Blank lines and lines
//! starting with `#` are ignored when parsing.

use std::fmt;

use super::engine::Verdict;
use crate::error::ProtocolError;
use crate::quantum::Basis;

/// Which quantum channel: `A` carries atoms to Alice, `B` to Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    A,
    B,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::A => "a",
            Channel::B => "b",
        }
    }

    fn parse(text: &str) -> Option<Channel> {
        match text {
            "a" => Some(Channel::A),
            "b" => Some(Channel::B),
            _ => None,
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Who published a classical announcement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Announcer {
    Alice,
    Bob,
    Tp,
}

impl Announcer {
    pub fn name(self) -> &'static str {
        match self {
            Announcer::Alice => "alice",
            Announcer::Bob => "bob",
            Announcer::Tp => "tp",
        }
    }

    fn parse(text: &str) -> Option<Announcer> {
        match text {
            "alice" => Some(Announcer::Alice),
            "bob" => Some(Announcer::Bob),
            "tp" => Some(Announcer::Tp),
            _ => None,
        }
    }
}

/// One public event.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    /// An atom left TP on the given channel at the given sequence position.
    QuantumSend { channel: Channel, position: usize },
    /// TP revealed where the decoys sit and in which basis to measure them.
    DecoyDisclosure {
        channel: Channel,
        positions: Vec<usize>,
        bases: Vec<Basis>,
    },
    /// Result of the channel check; the rate is `errors / total`.
    SecurityCheckResult {
        channel: Channel,
        errors: usize,
        total: usize,
        pass: bool,
    },
    /// A masked round value published by a user or by TP.
    Announce {
        round: usize,
        source: Announcer,
        bit: u8,
    },
    /// The run's final verdict.
    Verdict(Verdict),
}

fn basis_name(basis: Basis) -> &'static str {
    match basis {
        Basis::Z => "z",
        Basis::X => "x",
    }
}

fn parse_basis(text: &str) -> Option<Basis> {
    match text {
        "z" => Some(Basis::Z),
        "x" => Some(Basis::X),
        _ => None,
    }
}

impl Event {
    fn to_line(&self) -> String {
        match self {
            Event::QuantumSend { channel, position } => {
                format!("quantum-send\tchannel={channel}\tposition={position}")
            }
            Event::DecoyDisclosure {
                channel,
                positions,
                bases,
            } => {
                let positions = positions
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let bases = bases
                    .iter()
                    .map(|b| basis_name(*b))
                    .collect::<Vec<_>>()
                    .join(",");
                format!("decoy-disclosure\tchannel={channel}\tpositions={positions}\tbases={bases}")
            }
            Event::SecurityCheckResult {
                channel,
                errors,
                total,
                pass,
            } => {
                let rate = if *total == 0 {
                    0.0
                } else {
                    *errors as f64 / *total as f64
                };
                format!(
                    "security-check\tchannel={channel}\terrors={errors}\ttotal={total}\trate={rate:.6}\tpass={pass}"
                )
            }
            Event::Announce { round, source, bit } => {
                format!("announce\tround={round}\tsource={}\tbit={bit}", source.name())
            }
            Event::Verdict(verdict) => match verdict {
                Verdict::Equal => "verdict\tkind=equal".to_string(),
                Verdict::NotEqualAtRound(round) => {
                    format!("verdict\tkind=not-equal\tround={round}")
                }
                Verdict::AbortedSecurityCheck(channel) => {
                    format!("verdict\tkind=aborted\tchannel={channel}")
                }
            },
        }
    }
}

/// Ordered log of all public events of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn new() -> Self {
        Transcript::default()
    }

    pub fn push(&mut self, event: Event) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The TP announcement for each round, in round order.
    pub fn tp_announcements(&self) -> Vec<(usize, u8)> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Announce {
                    round,
                    source: Announcer::Tp,
                    bit,
                } => Some((*round, *bit)),
                _ => None,
            })
            .collect()
    }

    pub fn verdict(&self) -> Option<Verdict> {
        self.events.iter().rev().find_map(|e| match e {
            Event::Verdict(v) => Some(*v),
            _ => None,
        })
    }

    /// Serialize as line-delimited text, one event per line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&event.to_line());
            out.push('\n');
        }
        out
    }

    /// Parse the line-delimited form back into a transcript.
    pub fn parse(text: &str) -> Result<Transcript, ProtocolError> {
        let mut events = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            events.push(parse_line(line, line_no)?);
        }
        Ok(Transcript { events })
    }
}

fn parse_error(line: usize, reason: impl Into<String>) -> ProtocolError {
    ProtocolError::TranscriptParse {
        line,
        reason: reason.into(),
    }
}

struct Fields<'a> {
    line: usize,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Fields<'a> {
    fn get(&self, key: &str) -> Result<&'a str, ProtocolError> {
        self.pairs
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| parse_error(self.line, format!("missing field '{key}'")))
    }

    fn usize(&self, key: &str) -> Result<usize, ProtocolError> {
        self.get(key)?
            .parse()
            .map_err(|_| parse_error(self.line, format!("field '{key}' is not an integer")))
    }

    fn bit(&self, key: &str) -> Result<u8, ProtocolError> {
        match self.get(key)? {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(parse_error(self.line, format!("field '{key}' is not a bit"))),
        }
    }

    fn channel(&self) -> Result<Channel, ProtocolError> {
        Channel::parse(self.get("channel")?)
            .ok_or_else(|| parse_error(self.line, "unknown channel"))
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<Event, ProtocolError> {
    let mut parts = line.split('\t');
    let kind = parts.next().unwrap_or_default();
    let pairs = parts
        .map(|p| {
            p.split_once('=')
                .ok_or_else(|| parse_error(line_no, format!("malformed field '{p}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fields = Fields {
        line: line_no,
        pairs,
    };

    match kind {
        "quantum-send" => Ok(Event::QuantumSend {
            channel: fields.channel()?,
            position: fields.usize("position")?,
        }),
        "decoy-disclosure" => {
            let positions = split_list(fields.get("positions")?)
                .map(|p| {
                    p.parse()
                        .map_err(|_| parse_error(line_no, "bad position list"))
                })
                .collect::<Result<Vec<usize>, _>>()?;
            let bases = split_list(fields.get("bases")?)
                .map(|b| parse_basis(b).ok_or_else(|| parse_error(line_no, "bad basis list")))
                .collect::<Result<Vec<Basis>, _>>()?;
            if positions.len() != bases.len() {
                return Err(parse_error(line_no, "positions/bases length mismatch"));
            }
            Ok(Event::DecoyDisclosure {
                channel: fields.channel()?,
                positions,
                bases,
            })
        }
        "security-check" => Ok(Event::SecurityCheckResult {
            channel: fields.channel()?,
            errors: fields.usize("errors")?,
            total: fields.usize("total")?,
            pass: match fields.get("pass")? {
                "true" => true,
                "false" => false,
                _ => return Err(parse_error(line_no, "field 'pass' is not a bool")),
            },
        }),
        "announce" => Ok(Event::Announce {
            round: fields.usize("round")?,
            source: Announcer::parse(fields.get("source")?)
                .ok_or_else(|| parse_error(line_no, "unknown announcer"))?,
            bit: fields.bit("bit")?,
        }),
        "verdict" => match fields.get("kind")? {
            "equal" => Ok(Event::Verdict(Verdict::Equal)),
            "not-equal" => Ok(Event::Verdict(Verdict::NotEqualAtRound(
                fields.usize("round")?,
            ))),
            "aborted" => Ok(Event::Verdict(Verdict::AbortedSecurityCheck(
                fields.channel()?,
            ))),
            other => Err(parse_error(line_no, format!("unknown verdict kind '{other}'"))),
        },
        other => Err(parse_error(line_no, format!("unknown event kind '{other}'"))),
    }
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').filter(|s| !s.is_empty())
}
