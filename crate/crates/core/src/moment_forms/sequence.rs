use std::path::Path;

use serde::{Deserialize, Serialize};

use super::scalar::MomentScalar;
use crate::error::{Error, Result};
use crate::exact_poly::{format_rational, parse_rational, Rational};

/// Moments `m_0 = 1, m_1, ..., m_n` of a random variable.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence<S> {
    moments: Vec<S>,
}

pub type ExactMoments = MomentSequence<Rational>;
pub type FloatMoments = MomentSequence<f64>;

impl<S: MomentScalar> MomentSequence<S> {
    /// Requires `m_0 = 1`.
    pub fn new(moments: Vec<S>) -> Result<Self> {
        match moments.first() {
            None => Err(Error::domain("empty moment sequence")),
            Some(m0) if !S::zero_within(&(m0.clone() - S::one()), &S::one()) => {
                Err(Error::domain(format!("m_0 must be 1, got {m0:?}")))
            }
            Some(_) => Ok(Self { moments }),
        }
    }

    pub fn as_slice(&self) -> &[S] {
        &self.moments
    }

    /// Highest moment order present.
    pub fn max_order(&self) -> usize {
        self.moments.len() - 1
    }

    /// Largest `k` for which `M_k` can be built (needs `m_{2k}`).
    pub fn max_matrix_order(&self) -> usize {
        self.max_order() / 2
    }

    pub fn get(&self, j: usize) -> Option<&S> {
        self.moments.get(j)
    }

    /// `m_j`, or a domain error naming `what` needed it.
    pub fn require(&self, j: usize, what: &str) -> Result<&S> {
        self.moments.get(j).ok_or_else(|| {
            Error::domain(format!(
                "{what} needs moments through order {j}, sequence stops at {}",
                self.max_order()
            ))
        })
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        self.require(order, "truncation")?;
        Ok(Self {
            moments: self.moments[..=order].to_vec(),
        })
    }

    pub fn to_float(&self) -> FloatMoments {
        MomentSequence {
            moments: self.moments.iter().map(MomentScalar::to_f64).collect(),
        }
    }
}

impl<S: MomentScalar> std::ops::Index<usize> for MomentSequence<S> {
    type Output = S;

    fn index(&self, j: usize) -> &S {
        &self.as_slice()[j]
    }
}

#[derive(Serialize, Deserialize)]
struct MomentsRepr {
    moments: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MomentsInput {
    Object(MomentsRepr),
    List(Vec<serde_json::Value>),
}

impl Serialize for ExactMoments {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        MomentsRepr {
            moments: self.moments.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

/// One value per line, line index = moment order. Blank lines and lines
/// starting with `#` are skipped. Multi-column lines (`order,value`) are
/// rejected rather than guessed at.
pub fn parse_moments_csv(text: &str) -> Result<ExactMoments> {
    let values = text
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .enumerate()
        .map(|(i, line)| {
            if line.contains(',') {
                return Err(Error::parse(format!(
                    "line {} has more than one column; expected one value per line",
                    i + 1
                )));
            }
            parse_rational(line).map_err(|e| Error::parse(format!("moment {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ExactMoments::new(values)
}

/// `{"moments": ["1", "0", "1/2", ...]}` or a bare array of strings/numbers.
///
/// JSON numbers are read through their decimal text, so `0.1` is exactly `1/10`.
pub fn parse_moments_json(text: &str) -> Result<ExactMoments> {
    let input: MomentsInput =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("moment JSON: {e}")))?;
    let values = match input {
        MomentsInput::Object(repr) => repr
            .moments
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?,
        MomentsInput::List(items) => items
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                other => Err(Error::parse(format!("not a moment value: {other}"))),
            })
            .collect::<Result<Vec<_>>>()?,
    };
    ExactMoments::new(values)
}

/// Dispatches on the extension: `.json` is JSON, anything else is CSV.
pub fn read_moments_file(path: &Path) -> Result<ExactMoments> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => parse_moments_json(&text),
        _ => parse_moments_csv(&text),
    }
}
