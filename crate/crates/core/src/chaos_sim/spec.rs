use std::path::Path;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::oracle::{
    hermite_combo_exact_moments, mixture_moments, second_chaos_moments, OracleMoments,
    DEFAULT_TERM_BOUND,
};
use crate::error::{Error, Result};
use crate::exact_poly::{format_rational, frac, int, parse_rational, rational_to_f64, Rational};

/// `sqrt(scale_sq) · Σ λ_i (ξ_i² - 1)` with i.i.d. standard normal `ξ_i`.
///
/// `scale_sq` lets irrational normalizations such as `λ_i = 1/√(2d)` stay
/// exact: even moments scale by a rational power of `scale_sq`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondChaos {
    pub lambdas: Vec<Rational>,
    pub scale_sq: Rational,
}

/// `Π_i H_{index_i}(ξ_i)` weighted by `coeff`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteTerm {
    pub coeff: Rational,
    pub index: Vec<usize>,
}

impl HermiteTerm {
    pub fn degree(&self) -> usize {
        self.index.iter().sum()
    }
}

/// `sqrt(scale_sq) · Σ_t c_t Π_i H_{a_{t,i}}(ξ_i)`, all terms of one total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteCombo {
    pub terms: Vec<HermiteTerm>,
    pub scale_sq: Rational,
}

impl HermiteCombo {
    pub fn chaos_order(&self) -> usize {
        self.terms.first().map_or(0, HermiteTerm::degree)
    }

    pub fn num_coordinates(&self) -> usize {
        self.terms.iter().map(|t| t.index.len()).max().unwrap_or(0)
    }
}

/// A concrete random variable to simulate or to feed to the exact oracles.
#[derive(Clone, Debug, PartialEq)]
pub enum ChaosSpec {
    SecondChaos(SecondChaos),
    HermiteCombo(HermiteCombo),
    /// `N(0,1)` with probability `gaussian_weight`, else `δ_0`.
    Mixture { gaussian_weight: Rational },
}

impl ChaosSpec {
    pub fn second_chaos(lambdas: Vec<Rational>) -> Result<Self> {
        Self::scaled_second_chaos(lambdas, Rational::one())
    }

    pub fn scaled_second_chaos(lambdas: Vec<Rational>, scale_sq: Rational) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::domain("second-chaos spec needs at least one eigenvalue"));
        }
        check_scale(&scale_sq)?;
        Ok(ChaosSpec::SecondChaos(SecondChaos { lambdas, scale_sq }))
    }

    pub fn hermite_combo(terms: Vec<HermiteTerm>) -> Result<Self> {
        Self::scaled_hermite_combo(terms, Rational::one())
    }

    pub fn scaled_hermite_combo(terms: Vec<HermiteTerm>, scale_sq: Rational) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::domain("Hermite combination needs at least one term"));
        };
        let order = first.degree();
        if let Some(bad) = terms.iter().find(|t| t.degree() != order) {
            return Err(Error::domain(format!(
                "all terms must share one chaos order: {:?} has degree {}, expected {order}",
                bad.index,
                bad.degree()
            )));
        }
        check_scale(&scale_sq)?;
        Ok(ChaosSpec::HermiteCombo(HermiteCombo { terms, scale_sq }))
    }

    pub fn mixture(gaussian_weight: Rational) -> Result<Self> {
        if gaussian_weight.is_negative() || gaussian_weight > Rational::one() {
            return Err(Error::domain(format!(
                "mixture weight must lie in [0, 1], got {gaussian_weight}"
            )));
        }
        Ok(ChaosSpec::Mixture { gaussian_weight })
    }

    /// `(χ²_d - d)/√(2d)`: all `d` eigenvalues equal to `1/√(2d)`, unit variance.
    pub fn clt_family(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("CLT family needs d ≥ 1"));
        }
        Self::scaled_second_chaos(vec![Rational::one(); d], frac(1, 2 * d as i64))
    }

    /// `ξ² - 1`
    pub fn centered_gamma() -> Self {
        ChaosSpec::SecondChaos(SecondChaos {
            lambdas: vec![Rational::one()],
            scale_sq: Rational::one(),
        })
    }

    /// `N_1 N_2 = H_1(ξ_1) H_1(ξ_2)`
    pub fn product_n1n2() -> Self {
        ChaosSpec::HermiteCombo(HermiteCombo {
            terms: vec![HermiteTerm {
                coeff: Rational::one(),
                index: vec![1, 1],
            }],
            scale_sq: Rational::one(),
        })
    }

    /// Order of the Wiener chaos the element lives in (`1` for the mixture,
    /// which is a first-order eigenfunction of a non-Gaussian generator).
    pub fn chaos_order(&self) -> usize {
        match self {
            ChaosSpec::SecondChaos(_) => 2,
            ChaosSpec::HermiteCombo(c) => c.chaos_order(),
            ChaosSpec::Mixture { .. } => 1,
        }
    }

    /// Exact moments through `up_to`, with the default expansion budget.
    pub fn oracle_moments(&self, up_to: usize) -> Result<OracleMoments> {
        self.oracle_moments_bounded(up_to, DEFAULT_TERM_BOUND)
    }

    pub fn oracle_moments_bounded(&self, up_to: usize, term_bound: usize) -> Result<OracleMoments> {
        match self {
            ChaosSpec::SecondChaos(s) => Ok(OracleMoments::new(
                second_chaos_moments(&s.lambdas, up_to)?,
                s.scale_sq.clone(),
            )),
            ChaosSpec::HermiteCombo(c) => Ok(OracleMoments::new(
                hermite_combo_exact_moments(&c.terms, up_to, term_bound)?,
                c.scale_sq.clone(),
            )),
            ChaosSpec::Mixture { gaussian_weight } => Ok(OracleMoments::new(
                mixture_moments(gaussian_weight, up_to)?,
                Rational::one(),
            )),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: SpecRepr =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("chaos spec: {e}")))?;
        repr.try_into()
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SpecRepr::from(self)).expect("spec serializes")
    }

    /// Short human label.
    pub fn describe(&self) -> String {
        match self {
            ChaosSpec::SecondChaos(s) => {
                let scale = if s.scale_sq.is_one() {
                    String::new()
                } else {
                    format!(" scaled by sqrt({})", s.scale_sq)
                };
                if s.lambdas.iter().all(|l| l == &s.lambdas[0]) && s.lambdas.len() > 3 {
                    format!("second chaos, {} × λ={}{scale}", s.lambdas.len(), s.lambdas[0])
                } else {
                    let ls: Vec<_> = s.lambdas.iter().map(format_rational).collect();
                    format!("second chaos, λ=({}){scale}", ls.join(", "))
                }
            }
            ChaosSpec::HermiteCombo(c) => format!(
                "Hermite combination of order {}, {} term(s)",
                c.chaos_order(),
                c.terms.len()
            ),
            ChaosSpec::Mixture { gaussian_weight } => {
                format!("{gaussian_weight}·N(0,1) + (1-{gaussian_weight})·δ0")
            }
        }
    }

    pub(crate) fn scale_f64(&self) -> f64 {
        match self {
            ChaosSpec::SecondChaos(s) => rational_to_f64(&s.scale_sq).sqrt(),
            ChaosSpec::HermiteCombo(c) => rational_to_f64(&c.scale_sq).sqrt(),
            ChaosSpec::Mixture { .. } => 1.0,
        }
    }
}

fn check_scale(scale_sq: &Rational) -> Result<()> {
    if !scale_sq.is_positive() {
        return Err(Error::domain(format!("scale_sq must be positive, got {scale_sq}")));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    index: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum SpecRepr {
    SecondChaos {
        lambdas: Vec<String>,
        /// Repeats the eigenvalue list this many times.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        repeat: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale_sq: Option<String>,
    },
    HermiteCombo {
        terms: Vec<TermRepr>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale_sq: Option<String>,
    },
    Mixture {
        weight: String,
    },
}

fn parse_scale(s: Option<String>) -> Result<Rational> {
    s.map_or_else(|| Ok(Rational::one()), |s| parse_rational(&s))
}

fn scale_repr(r: &Rational) -> Option<String> {
    (!r.is_one()).then(|| format_rational(r))
}

impl TryFrom<SpecRepr> for ChaosSpec {
    type Error = Error;

    fn try_from(repr: SpecRepr) -> Result<Self> {
        match repr {
            SpecRepr::SecondChaos {
                lambdas,
                repeat,
                scale_sq,
            } => {
                let base = lambdas
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()?;
                let times = repeat.unwrap_or(1);
                if times == 0 {
                    return Err(Error::domain("repeat must be at least 1"));
                }
                let lambdas = (0..times).flat_map(|_| base.iter().cloned()).collect();
                ChaosSpec::scaled_second_chaos(lambdas, parse_scale(scale_sq)?)
            }
            SpecRepr::HermiteCombo { terms, scale_sq } => {
                let terms = terms
                    .into_iter()
                    .map(|t| {
                        Ok(HermiteTerm {
                            coeff: parse_rational(&t.coeff)?,
                            index: t.index,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ChaosSpec::scaled_hermite_combo(terms, parse_scale(scale_sq)?)
            }
            SpecRepr::Mixture { weight } => ChaosSpec::mixture(parse_rational(&weight)?),
        }
    }
}

impl From<&ChaosSpec> for SpecRepr {
    fn from(spec: &ChaosSpec) -> Self {
        match spec {
            ChaosSpec::SecondChaos(s) => SpecRepr::SecondChaos {
                lambdas: s.lambdas.iter().map(format_rational).collect(),
                repeat: None,
                scale_sq: scale_repr(&s.scale_sq),
            },
            ChaosSpec::HermiteCombo(c) => SpecRepr::HermiteCombo {
                terms: c
                    .terms
                    .iter()
                    .map(|t| TermRepr {
                        coeff: format_rational(&t.coeff),
                        index: t.index.clone(),
                    })
                    .collect(),
                scale_sq: scale_repr(&c.scale_sq),
            },
            ChaosSpec::Mixture { gaussian_weight } => SpecRepr::Mixture {
                weight: format_rational(gaussian_weight),
            },
        }
    }
}

/// Convenience for tests and examples: `λ` list from `(num, den)` pairs.
pub fn lambdas(pairs: &[(i64, i64)]) -> Vec<Rational> {
    pairs
        .iter()
        .map(|&(n, d)| if d == 1 { int(n) } else { frac(n, d) })
        .collect()
}
