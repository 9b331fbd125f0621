use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::spec::HermiteTerm;
use crate::error::{Error, Result};
use crate::exact_poly::{
    big, binomial, factorial, odd_double_factorial, rational_sqrt, rational_to_f64, Rational,
};
use crate::hermite::linearization_terms;
use crate::moment_forms::ExactMoments;
use crate::wfamily::stein_constant;

/// Default cap on distinct product-Hermite monomials held during expansion.
pub const DEFAULT_TERM_BOUND: usize = 1_000_000;

/// `κ_r = 2^{r-1} (r-1)! Σ λ_i^r` for `Σ λ_i (ξ_i² - 1)`, `r ≥ 2`; `κ_1 = 0`.
pub fn second_chaos_cumulant(lambdas: &[Rational], r: usize) -> Rational {
    if r < 2 {
        return Rational::zero();
    }
    let power_sum = lambdas
        .iter()
        .fold(Rational::zero(), |acc, l| acc + num_traits::pow(l.clone(), r));
    big(BigInt::from(2).pow((r - 1) as u32) * factorial((r - 1) as u64)) * power_sum
}

/// `m_n = Σ_{j=1}^n C(n-1, j-1) κ_j m_{n-j}`; `kappas[j-1] = κ_j`.
pub fn cumulants_to_moments(kappas: &[Rational]) -> ExactMoments {
    let mut m = vec![Rational::one()];
    for n in 1..=kappas.len() {
        let value = (1..=n).fold(Rational::zero(), |acc, j| {
            acc + big(binomial((n - 1) as u64, (j - 1) as u64)) * &kappas[j - 1] * &m[n - j]
        });
        m.push(value);
    }
    ExactMoments::new(m).expect("m_0 = 1")
}

/// Exact `m_0..=m_{up_to}` of `Σ λ_i (ξ_i² - 1)` via cumulants.
pub fn second_chaos_moments(lambdas: &[Rational], up_to: usize) -> Result<ExactMoments> {
    if lambdas.is_empty() {
        return Err(Error::domain("second-chaos moments need at least one eigenvalue"));
    }
    let kappas: Vec<_> = (1..=up_to).map(|r| second_chaos_cumulant(lambdas, r)).collect();
    Ok(cumulants_to_moments(&kappas))
}

/// `m_j` of `α N(0,1) + (1-α) δ_0`: `α (j-1)!!` for even `j ≥ 2`, zero for odd.
pub fn mixture_moments(alpha: &Rational, up_to: usize) -> Result<ExactMoments> {
    if alpha.is_negative() || alpha > &Rational::one() {
        return Err(Error::domain(format!("mixture weight must lie in [0, 1], got {alpha}")));
    }
    let m = (0..=up_to)
        .map(|j| match j {
            0 => Rational::one(),
            j if j % 2 == 1 => Rational::zero(),
            j => alpha * big(odd_double_factorial((j / 2) as u64)),
        })
        .collect();
    ExactMoments::new(m)
}

/// Sparse element of the product Hermite basis `Π_i H_{a_i}(ξ_i)`.
type ProductPoly = BTreeMap<Vec<usize>, Rational>;

fn product_mul(a: &ProductPoly, b: &ProductPoly, width: usize, bound: usize) -> Result<ProductPoly> {
    let mut out = ProductPoly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let factors: Vec<Vec<(usize, BigInt)>> = (0..width)
                .map(|i| linearization_terms(ka[i], kb[i]))
                .collect();
            let base = ca * cb;
            // odometer over one linearization term per coordinate
            let mut pick = vec![0usize; width];
            loop {
                let mut key = Vec::with_capacity(width);
                let mut weight = BigInt::one();
                for (i, f) in factors.iter().enumerate() {
                    let (deg, ref c) = f[pick[i]];
                    key.push(deg);
                    weight *= c;
                }
                let entry = out.entry(key).or_insert_with(Rational::zero);
                *entry += &base * big(weight);
                if out.len() > bound {
                    return Err(Error::Resource(format!(
                        "Hermite expansion exceeded {bound} terms; raise --term-bound or lower the moment order"
                    )));
                }
                let mut i = 0;
                while i < width {
                    pick[i] += 1;
                    if pick[i] < factors[i].len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
                if i == width {
                    break;
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// `E[P Q] = Σ_α p_α q_α Π_i α_i!` by orthogonality of the product basis.
fn product_pairing(p: &ProductPoly, q: &ProductPoly) -> Rational {
    let (small, large) = if p.len() <= q.len() { (p, q) } else { (q, p) };
    small.iter().fold(Rational::zero(), |acc, (key, c)| match large.get(key) {
        Some(d) => {
            let norm = key.iter().fold(BigInt::one(), |n, &a| n * factorial(a as u64));
            acc + c * d * big(norm)
        }
        None => acc,
    })
}

/// Exact `m_0..=m_{up_to}` of `Σ_t c_t Π_i H_{a_{t,i}}(ξ_i)`.
///
/// Powers `X^a` are expanded in the product Hermite basis up to `a = ⌈up_to/2⌉`;
/// then `m_{2a} = E[X^a X^a]` and `m_{2a+1} = E[X^a X^{a+1}]`.
/// Fails with [`Error::Resource`] once an expansion holds more than
/// `term_bound` distinct monomials.
pub fn hermite_combo_exact_moments(
    terms: &[HermiteTerm],
    up_to: usize,
    term_bound: usize,
) -> Result<ExactMoments> {
    if terms.is_empty() {
        return Err(Error::domain("Hermite combination needs at least one term"));
    }
    let width = terms.iter().map(|t| t.index.len()).max().unwrap_or(0);
    let mut x = ProductPoly::new();
    for t in terms {
        let mut key = t.index.clone();
        key.resize(width, 0);
        *x.entry(key).or_insert_with(Rational::zero) += &t.coeff;
    }
    x.retain(|_, c| !c.is_zero());

    let top = up_to.div_ceil(2);
    let mut powers: Vec<ProductPoly> = Vec::with_capacity(top + 1);
    powers.push(ProductPoly::from([(vec![0; width], Rational::one())]));
    for a in 1..=top {
        let next = product_mul(&powers[a - 1], &x, width, term_bound)?;
        powers.push(next);
    }
    let m = (0..=up_to)
        .map(|j| product_pairing(&powers[j / 2], &powers[j - j / 2]))
        .collect();
    ExactMoments::new(m)
}

/// Exact base moments `b_j` of `Y` together with `s = scale_sq`, describing
/// `X = √s · Y` whose moments are `s^{j/2} b_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleMoments {
    base: ExactMoments,
    scale_sq: Rational,
}

impl OracleMoments {
    pub fn new(base: ExactMoments, scale_sq: Rational) -> Self {
        Self { base, scale_sq }
    }

    pub fn max_order(&self) -> usize {
        self.base.max_order()
    }

    pub fn scale_sq(&self) -> &Rational {
        &self.scale_sq
    }

    /// Exact `m_j` when it is rational: always for even `j` or vanishing
    /// base moments, otherwise only if `√scale_sq` is rational.
    pub fn exact(&self, j: usize) -> Option<Rational> {
        let b = self.base.get(j)?;
        let half = num_traits::pow(self.scale_sq.clone(), j / 2);
        if j % 2 == 0 || b.is_zero() {
            return Some(half * b);
        }
        rational_sqrt(&self.scale_sq).map(|root| half * root * b)
    }

    pub fn float(&self, j: usize) -> Option<f64> {
        let b = self.base.get(j)?;
        let half = num_traits::pow(self.scale_sq.clone(), j / 2);
        let v = rational_to_f64(&(half * b));
        Some(if j % 2 == 0 {
            v
        } else {
            v * rational_to_f64(&self.scale_sq).sqrt()
        })
    }

    /// All moments exactly, if every one is rational.
    pub fn exact_sequence(&self) -> Option<ExactMoments> {
        let m = (0..=self.max_order())
            .map(|j| self.exact(j))
            .collect::<Option<Vec<_>>>()?;
        ExactMoments::new(m).ok()
    }

    /// All moments in `f64`; usable even when odd moments are irrational.
    pub fn float_sequence(&self) -> crate::moment_forms::FloatMoments {
        let m = (0..=self.max_order()).map(|j| self.float(j).expect("in range")).collect();
        crate::moment_forms::FloatMoments::new(m).expect("m_0 = 1")
    }

    /// `m_{2k} / m_2^k`, the scale-free even moment.
    pub fn normalized_even(&self, k: usize) -> Option<Rational> {
        let m2 = self.exact(2)?;
        if m2.is_zero() {
            return None;
        }
        Some(self.exact(2 * k)? / num_traits::pow(m2, k))
    }

    /// `C_k √(m_{2k}/((2k-1)!! m2^k) - 1)`, the total-variation bound for the
    /// normalized variable; the radicand is exact.
    pub fn tv_bound(&self, k: usize) -> Result<f64> {
        let ratio = self.normalized_even(k).ok_or_else(|| {
            Error::domain(format!("bound for k={k} needs exact m2 > 0 and m{}", 2 * k))
        })?;
        let excess = ratio / big(odd_double_factorial(k as u64)) - Rational::one();
        Ok(stein_constant(k)?.c_k * rational_to_f64(&excess).max(0.0).sqrt())
    }
}
