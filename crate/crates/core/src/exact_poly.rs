//! Exact rational scalars and dense univariate polynomials.
//!
//! Every symbolic object in the crate (Hermite polynomials, the W-family,
//! moment-matrix entries) is built on [`Rational`] and [`DensePolynomial`].
//! Arithmetic is arbitrary precision; nothing here touches floating point
//! except the explicit `to_f64` renderings.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` as an exact rational. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Renders as `"num/den"`, or `"num"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // Ratio::to_f64 handles huge numerators/denominators without overflowing
    // to inf/inf.
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"a/b"`, integers, and decimals (`"-1.25"`, `"3e-2"`) exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty rational"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::parse(format!("not a rational or decimal: {s:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fraction) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(fraction.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{fraction}");
    let mut value = big(all_digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - fraction.len() as i32;
    let ten = big(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `(2k-1)!! = 1·3·5···(2k-1)`, with `(-1)!! = 1` at `k = 0`.
///
/// This is `E[N^{2k}]` for a standard Gaussian `N`.
pub fn odd_double_factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * (2 * i - 1))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Dense univariate polynomial over the rationals, coefficients in ascending degree.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector and [`degree`](Self::degree) returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DensePolynomial {
    coeffs: Vec<Rational>,
}

impl DensePolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^degree`
    pub fn monomial(degree: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// True when every odd-degree coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    /// Antiderivative vanishing at zero.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / int(i as i64 + 1));
        }
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// `∫_a^b P(t) dt`
    pub fn definite_integral(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.integrate();
        anti.eval(b) - anti.eval(a)
    }

    /// `P(x) ↦ x · P(x)`
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Composition `P(Q(x))` by Horner's scheme.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// `E[P(N)]` for a standard Gaussian `N`: `Σ_m c_{2m} (2m-1)!!`.
    pub fn gaussian_expectation(&self) -> Rational {
        self.coeffs
            .iter()
            .step_by(2)
            .enumerate()
            .fold(Rational::zero(), |acc, (m, c)| {
                acc + c * big(odd_double_factorial(m as u64))
            })
    }

    /// Pairs the coefficients with a moment sequence: `Σ_j c_j m_j`.
    ///
    /// Returns `None` if the sequence is too short.
    pub fn expectation_with_moments(&self, moments: &[Rational]) -> Option<Rational> {
        if self.coeffs.len() > moments.len() {
            return None;
        }
        Some(
            self.coeffs
                .iter()
                .zip(moments)
                .fold(Rational::zero(), |acc, (c, m)| acc + c * m),
        )
    }
}

/// See [`gaussian_expectation`](DensePolynomial::gaussian_expectation).
pub fn gaussian_expectation(p: &DensePolynomial) -> Rational {
    p.gaussian_expectation()
}

impl Add for &DensePolynomial {
    type Output = DensePolynomial;

    fn add(self, rhs: &DensePolynomial) -> DensePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &DensePolynomial {
    type Output = DensePolynomial;

    fn sub(self, rhs: &DensePolynomial) -> DensePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &DensePolynomial {
    type Output = DensePolynomial;

    fn mul(self, rhs: &DensePolynomial) -> DensePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return DensePolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DensePolynomial::new(out)
    }
}

impl Neg for &DensePolynomial {
    type Output = DensePolynomial;

    fn neg(self) -> DensePolynomial {
        DensePolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for DensePolynomial {
            type Output = DensePolynomial;
            fn $method(self, rhs: DensePolynomial) -> DensePolynomial {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            match (show_mag, i) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}·x")?,
                (false, 1) => write!(f, "x")?,
                (true, _) => write!(f, "{mag}·x^{i}")?,
                (false, _) => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensePolynomial({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<String>,
}

impl Serialize for DensePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensePolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(DensePolynomial::new(coeffs))
    }
}

/// Serde adapter for a single rational as a `"num/den"` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Exact square root of a rational if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_is_linear() {
        let x = DensePolynomial::x();
        assert_eq!(&x + &x, DensePolynomial::from_ints(&[0, 2]));
    }

    #[test]
    fn square_expands() {
        let p = DensePolynomial::from_ints(&[-1, 0, 1]);
        assert_eq!(&p * &p, DensePolynomial::from_ints(&[1, 0, -2, 0, 1]));
    }

    #[test]
    fn zero_absorbs() {
        let p = DensePolynomial::from_ints(&[3, 1, 4]);
        let z = &p * &DensePolynomial::zero();
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(DensePolynomial::from_ints(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn integrate_power_rule() {
        assert_eq!(DensePolynomial::one().integrate(), DensePolynomial::x());
        let h3 = DensePolynomial::from_ints(&[0, -3, 0, 1]);
        let expected = DensePolynomial::new(vec![int(0), int(0), frac(-3, 2), int(0), frac(1, 4)]);
        assert_eq!(h3.integrate(), expected);
        assert!(DensePolynomial::zero().integrate().is_zero());
    }

    #[test]
    fn horner_eval() {
        let h2 = DensePolynomial::from_ints(&[-1, 0, 1]);
        assert_eq!(h2.eval(&int(0)), int(-1));
        let w2 = DensePolynomial::from_ints(&[3, 0, -6, 0, 1]);
        assert_eq!(w2.eval(&int(1)), int(-2));
        let w3 = DensePolynomial::from_ints(&[0, 0, 15, 0, -10, 0, 1]);
        assert_eq!(w3.eval(&int(0)), int(0));
    }

    #[test]
    fn gaussian_moments() {
        assert_eq!(DensePolynomial::monomial(2, int(1)).gaussian_expectation(), int(1));
        assert_eq!(DensePolynomial::monomial(4, int(1)).gaussian_expectation(), int(3));
        assert_eq!(DensePolynomial::monomial(6, int(1)).gaussian_expectation(), int(15));
        assert_eq!(DensePolynomial::monomial(5, int(7)).gaussian_expectation(), int(0));
        let w2 = DensePolynomial::from_ints(&[3, 0, -6, 0, 1]);
        assert_eq!(w2.gaussian_expectation(), int(0));
    }

    #[test]
    fn double_factorial_convention() {
        assert_eq!(odd_double_factorial(0), BigInt::from(1));
        assert_eq!(odd_double_factorial(3), BigInt::from(15));
        // 23!! = 316234143225 > 2^32; 35!! overflows i64
        assert_eq!(odd_double_factorial(12).to_string(), "316234143225");
        assert!(odd_double_factorial(20) > BigInt::from(i64::MAX));
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("5/2").unwrap(), frac(5, 2));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), frac(-3, 20));
        assert_eq!(parse_rational("2E3").unwrap(), int(2000));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn json_is_exact_strings() {
        let p = DensePolynomial::new(vec![frac(15, 2), int(0), frac(-15, 2), int(0), int(0), int(0), int(1)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"coeffs":["15/2","0","-15/2","0","0","0","1"]}"#);
        let back: DensePolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display_reads_naturally() {
        let w2 = DensePolynomial::from_ints(&[3, 0, -6, 0, 1]);
        assert_eq!(w2.to_string(), "x^4 - 6·x^2 + 3");
        assert_eq!(DensePolynomial::zero().to_string(), "0");
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(rational_sqrt(&frac(1, 2)), None);
        assert_eq!(rational_sqrt(&int(-4)), None);
    }
}
