//! Line-oriented text form of a sequence, angles in units of π.
//!
//! ```text
//! name length2
//! echo XZ
//! zx 0.25 +
//! echo XZ
//! zx 0.25 +
//! ```
//!
//! Other element lines are `x <qubit> <angle>` and `vz <qubit> <angle>`.
//! Blank lines and `#` comments are ignored.

use std::f64::consts::PI;
use std::fmt::Write;

use super::{CompositeSequence, Qubit, SequenceElement};
use crate::cr_model::DriveSign;
use crate::{Error, Result};

pub fn format_sequence(seq: &CompositeSequence) -> String {
    let mut out = String::new();
    if !seq.name().is_empty() {
        let _ = writeln!(out, "name {}", seq.name());
    }
    for e in seq.elements() {
        let _ = match e {
            SequenceElement::Entangling { theta, drive_sign } => {
                let s = if *drive_sign == DriveSign::Positive {
                    '+'
                } else {
                    '-'
                };
                writeln!(out, "zx {} {s}", theta / PI)
            }
            SequenceElement::Echo { pauli } => writeln!(out, "echo {pauli}"),
            SequenceElement::LocalX { qubit, angle } => {
                writeln!(out, "x {} {}", qubit.index() + 1, angle / PI)
            }
            SequenceElement::VirtualZ { qubit, angle } => {
                writeln!(out, "vz {} {}", qubit.index() + 1, angle / PI)
            }
        };
    }
    out
}

pub fn parse_sequence(text: &str) -> Result<CompositeSequence> {
    let mut name = String::from("custom");
    let mut elements = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("line {}: {msg}: `{}`", lineno + 1, raw.trim()));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let angle = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map(|x| x * PI)
                .map_err(|_| err("bad angle"))
        };
        let qubit = |s: &str| -> Result<Qubit> {
            match s {
                "1" => Ok(Qubit::One),
                "2" => Ok(Qubit::Two),
                _ => Err(err("qubit must be 1 or 2")),
            }
        };
        let element = match fields.as_slice() {
            ["name", rest @ ..] if !rest.is_empty() => {
                name = rest.join(" ");
                continue;
            }
            ["echo", p] => SequenceElement::Echo {
                pauli: p.parse().map_err(|_| err("bad Pauli label"))?,
            },
            ["zx", a] | ["zx", a, "+"] => SequenceElement::Entangling {
                theta: angle(a)?,
                drive_sign: DriveSign::Positive,
            },
            ["zx", a, "-"] => SequenceElement::Entangling {
                theta: angle(a)?,
                drive_sign: DriveSign::Negative,
            },
            ["x", q, a] => SequenceElement::LocalX {
                qubit: qubit(q)?,
                angle: angle(a)?,
            },
            ["vz", q, a] => SequenceElement::VirtualZ {
                qubit: qubit(q)?,
                angle: angle(a)?,
            },
            _ => return Err(err("unrecognized element")),
        };
        elements.push(element);
    }
    if elements.is_empty() {
        return Err(Error::Parse("sequence has no elements".into()));
    }
    CompositeSequence::new(name, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{clifford_generator_default, ecr, length2_default};

    #[test]
    fn roundtrip() {
        for seq in [length2_default(), ecr(), clifford_generator_default()] {
            let text = format_sequence(&seq);
            let back = parse_sequence(&text).unwrap();
            assert_eq!(back.name(), seq.name());
            assert_eq!(back.elements().len(), seq.elements().len());
            assert!(back.ideal_target().distance_up_to_phase(seq.ideal_target()) < 1e-12);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_sequence("zx abc"), Err(Error::Parse(m)) if m.contains("line 1")));
        assert!(parse_sequence("x 3 0.5").is_err());
        assert!(parse_sequence("# only a comment").is_err());
        assert!(parse_sequence("zx -0.25").is_err());
    }
}
