//! Text literals for states: `vacuum`, `fock:n1,n2`, `coherent:re,im;re,im`,
//! `superpose:re,im@<state>|re,im@<state>` and `file:<path.json>`.

use std::path::PathBuf;
use std::str::FromStr;

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{auto_cutoff, coherent_state, FockState};

/// Per-mode truncation: automatic or a fixed uniform level count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutoffChoice {
    #[default]
    Auto,
    Fixed(usize),
}

impl FromStr for CutoffChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(CutoffChoice::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(CutoffChoice::Fixed(n)),
            _ => Err(Error::InvalidParameter(format!(
                "cutoff must be `auto` or a positive integer, got `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateLiteral {
    Vacuum,
    Fock(Vec<usize>),
    Coherent(Vec<Complex64>),
    Superpose(Vec<(Complex64, StateLiteral)>),
    File(PathBuf),
}

/// Context for turning a [`StateLiteral`] into a vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRequest {
    /// Mode count for literals that do not fix one (`vacuum`).
    pub default_modes: usize,
    pub cutoff: CutoffChoice,
    pub hbar: f64,
    /// Extra levels added to automatic cutoffs.
    pub margin: usize,
}

fn literal_error(literal: &str, reason: impl Into<String>) -> Error {
    Error::StateLiteral {
        literal: literal.to_string(),
        reason: reason.into(),
    }
}

fn parse_complex(literal: &str, text: &str) -> Result<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let number = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| literal_error(literal, format!("`{s}` is not a number")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(number(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(number(re)?, number(im)?)),
        _ => Err(literal_error(literal, format!("expected `re,im`, got `{text}`"))),
    }
}

impl FromStr for StateLiteral {
    type Err = Error;

    fn from_str(literal: &str) -> Result<Self> {
        let literal = literal.trim();
        if literal == "vacuum" {
            return Ok(StateLiteral::Vacuum);
        }
        let (kind, body) = literal
            .split_once(':')
            .ok_or_else(|| literal_error(literal, "expected vacuum, fock:, coherent:, superpose: or file:"))?;
        match kind {
            "fock" => body
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| literal_error(literal, format!("`{s}` is not a level")))
                })
                .collect::<Result<Vec<_>>>()
                .map(StateLiteral::Fock),
            "coherent" => body
                .split(';')
                .map(|s| parse_complex(literal, s))
                .collect::<Result<Vec<_>>>()
                .map(StateLiteral::Coherent),
            "superpose" => body
                .split('|')
                .map(|part| {
                    let (weight, state) = part
                        .split_once('@')
                        .ok_or_else(|| literal_error(literal, format!("`{part}` lacks `weight@state`")))?;
                    let inner: StateLiteral = state.parse()?;
                    if matches!(inner, StateLiteral::Superpose(_)) {
                        return Err(literal_error(literal, "nested superpositions are not supported"));
                    }
                    Ok((parse_complex(literal, weight)?, inner))
                })
                .collect::<Result<Vec<_>>>()
                .map(StateLiteral::Superpose),
            "file" if !body.is_empty() => Ok(StateLiteral::File(PathBuf::from(body))),
            _ => Err(literal_error(literal, format!("unknown state kind `{kind}`"))),
        }
    }
}

impl StateLiteral {
    /// Mode count fixed by the literal, if any.
    fn fixed_modes(&self) -> Result<Option<usize>> {
        Ok(match self {
            StateLiteral::Vacuum => None,
            StateLiteral::Fock(levels) => Some(levels.len()),
            StateLiteral::Coherent(alpha) => Some(alpha.len()),
            StateLiteral::File(path) => Some(load_file(path)?.mode_count()),
            StateLiteral::Superpose(parts) => {
                let mut modes = None;
                for (_, part) in parts {
                    if let Some(m) = part.fixed_modes()? {
                        if modes.is_some_and(|prev| prev != m) {
                            return Err(Error::ModeMismatch {
                                left: modes.unwrap_or(m),
                                right: m,
                            });
                        }
                        modes = Some(m);
                    }
                }
                modes
            }
        })
    }

    /// Smallest automatic cutoffs, before the margin.
    fn auto_levels(&self, modes: usize) -> Result<Vec<usize>> {
        Ok(match self {
            StateLiteral::Vacuum => vec![1; modes],
            StateLiteral::Fock(levels) => levels.iter().map(|l| l + 1).collect(),
            StateLiteral::Coherent(alpha) => auto_cutoff(std::slice::from_ref(alpha), modes, 0),
            StateLiteral::File(path) => load_file(path)?.cutoffs().to_vec(),
            StateLiteral::Superpose(parts) => {
                let mut out = vec![1; modes];
                for (_, part) in parts {
                    for (o, l) in out.iter_mut().zip(part.auto_levels(modes)?) {
                        *o = (*o).max(l);
                    }
                }
                out
            }
        })
    }

    pub fn build(&self, request: &StateRequest) -> Result<FockState> {
        let modes = self.fixed_modes()?.unwrap_or(request.default_modes);
        if modes == 0 {
            return Err(Error::InvalidParameter("a state needs at least one mode".into()));
        }
        let cutoffs = match request.cutoff {
            CutoffChoice::Fixed(n) => vec![n; modes],
            CutoffChoice::Auto => self
                .auto_levels(modes)?
                .into_iter()
                .map(|l| l + request.margin)
                .collect(),
        };
        self.build_at(&cutoffs, request.hbar)?.normalized()
    }

    fn build_at(&self, cutoffs: &[usize], hbar: f64) -> Result<FockState> {
        match self {
            StateLiteral::Vacuum => FockState::vacuum(cutoffs, hbar),
            StateLiteral::Fock(levels) => FockState::number_state(levels, cutoffs, hbar),
            StateLiteral::Coherent(alpha) => coherent_state(alpha, cutoffs, hbar),
            StateLiteral::File(path) => {
                let state = load_file(path)?.with_hbar(hbar)?;
                if cutoffs.iter().zip(state.cutoffs()).any(|(c, s)| c < s) {
                    return Err(Error::InvalidParameter(format!(
                        "state file {} needs cutoffs {:?}",
                        path.display(),
                        state.cutoffs()
                    )));
                }
                state.padded(cutoffs)
            }
            StateLiteral::Superpose(parts) => {
                let mut acc = FockState::new(cutoffs, vec![Complex64::new(0.0, 0.0); cutoffs.iter().product()], hbar)?;
                for (weight, part) in parts {
                    let component = part.build_at(cutoffs, hbar)?;
                    let sum = acc
                        .coefficients()
                        .iter()
                        .zip(component.coefficients())
                        .map(|(a, b)| a + weight * b)
                        .collect();
                    acc = FockState::new(cutoffs, sum, hbar)?;
                }
                Ok(acc)
            }
        }
    }
}

fn load_file(path: &PathBuf) -> Result<FockState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| literal_error(&format!("file:{}", path.display()), e.to_string()))?;
    FockState::from_json(&text)
}

/// Parses and builds a state in one step.
pub fn parse_state(literal: &str, request: &StateRequest) -> Result<FockState> {
    literal.parse::<StateLiteral>()?.build(request)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(cutoff: CutoffChoice) -> StateRequest {
        StateRequest {
            default_modes: 1,
            cutoff,
            hbar: 1.0,
            margin: 0,
        }
    }

    #[test]
    fn basic_literals() {
        let v = parse_state("vacuum", &req(CutoffChoice::Auto)).unwrap();
        assert_eq!(v.cutoffs(), &[1]);
        let f = parse_state("fock:1,2", &req(CutoffChoice::Auto)).unwrap();
        assert_eq!(f.cutoffs(), &[2, 3]);
        assert!(parse_state("fock:3", &req(CutoffChoice::Fixed(3))).is_err());
        let c = parse_state("coherent:1,0", &req(CutoffChoice::Auto)).unwrap();
        assert!(c.is_normalized());
        assert!(matches!(
            parse_state("coherent:3,0", &req(CutoffChoice::Fixed(5))),
            Err(Error::InadequateCutoff { .. })
        ));
    }

    #[test]
    fn superposition_normalizes() {
        let s = parse_state("superpose:1,0@fock:0|0,1@fock:2", &req(CutoffChoice::Auto)).unwrap();
        assert_eq!(s.cutoffs(), &[3]);
        let h = 0.5f64.sqrt();
        assert!((s.coefficients()[0] - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((s.coefficients()[2] - Complex64::new(0.0, h)).norm() < 1e-15);
        assert!(parse_state("superpose:1@fock:0|1@fock:0,1", &req(CutoffChoice::Auto)).is_err());
    }

    #[test]
    fn malformed_literals() {
        for bad in ["", "fock:", "fock:x", "coherent:1,2,3", "superpose:1@superpose:1@vacuum", "thermal:1", "file:"] {
            assert!(bad.parse::<StateLiteral>().is_err(), "{bad}");
        }
        assert!("0".parse::<CutoffChoice>().is_err());
        assert_eq!("12".parse::<CutoffChoice>().unwrap(), CutoffChoice::Fixed(12));
    }

    #[test]
    fn margin_extends_auto_cutoff() {
        let mut r = req(CutoffChoice::Auto);
        r.margin = 4;
        r.default_modes = 2;
        assert_eq!(parse_state("vacuum", &r).unwrap().cutoffs(), &[5, 5]);
    }
}
