use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Fewer samples than this make the histogram estimate meaningless.
pub const MIN_DTV_SAMPLES: usize = 10_000;

/// `bins` equal cells on `[-range, range)` plus one tail cell on each side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BinSpec {
    pub bins: usize,
    pub range: f64,
}

impl Default for BinSpec {
    fn default() -> Self {
        Self {
            bins: 200,
            range: 6.0,
        }
    }
}

impl BinSpec {
    pub fn new(bins: usize, range: f64) -> Result<Self> {
        if bins == 0 {
            return Err(Error::domain("need at least one bin"));
        }
        if !(range.is_finite() && range > 0.0) {
            return Err(Error::domain(format!("bin range must be positive, got {range}")));
        }
        Ok(Self { bins, range })
    }

    fn width(&self) -> f64 {
        2.0 * self.range / self.bins as f64
    }

    /// Cell index in `0..bins+2`; `0` and `bins+1` are the tails.
    fn cell(&self, x: f64) -> usize {
        if x < -self.range {
            0
        } else if x >= self.range {
            self.bins + 1
        } else {
            1 + (((x + self.range) / self.width()) as usize).min(self.bins - 1)
        }
    }

    /// Standard normal mass of every cell, tails included; sums to one.
    pub fn gaussian_masses(&self) -> Vec<f64> {
        let cdf = |x: f64| 0.5 * erfc(-x / std::f64::consts::SQRT_2);
        let edges: Vec<f64> = (0..=self.bins)
            .map(|i| -self.range + i as f64 * self.width())
            .collect();
        let mut masses = Vec::with_capacity(self.bins + 2);
        masses.push(cdf(edges[0]));
        // upper-tail form keeps precision on the right
        masses.extend(edges.windows(2).map(|w| {
            if w[0] >= 0.0 {
                cdf(-w[0]) - cdf(-w[1])
            } else {
                cdf(w[1]) - cdf(w[0])
            }
        }));
        masses.push(cdf(-edges[self.bins]));
        masses
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DtvEstimate {
    /// `½ Σ_cells |p̂ - q|` against `N(0,1)`.
    pub estimate: f64,
    pub n: usize,
    pub bins: BinSpec,
}

/// Histogram estimate of `d_TV(law of samples, N(0,1))`.
///
/// Only binned mass is compared, so the estimate is a lower bound on the
/// true distance up to sampling noise of order `Σ √(q/n)`.
pub fn dtv_estimate(samples: &[f64], bins: &BinSpec) -> Result<DtvEstimate> {
    if samples.len() < MIN_DTV_SAMPLES {
        return Err(Error::domain(format!(
            "total-variation estimate needs at least {MIN_DTV_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let bins = BinSpec::new(bins.bins, bins.range)?;
    let mut counts = vec![0u64; bins.bins + 2];
    for &x in samples {
        if x.is_nan() {
            return Err(Error::domain("NaN sample"));
        }
        counts[bins.cell(x)] += 1;
    }
    let n = samples.len() as f64;
    let estimate = 0.5
        * counts
            .iter()
            .zip(bins.gaussian_masses())
            .map(|(&c, q)| (c as f64 / n - q).abs())
            .sum::<f64>();
    Ok(DtvEstimate {
        estimate,
        n: samples.len(),
        bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses_sum_to_one() {
        let b = BinSpec::default();
        let total: f64 = b.gaussian_masses().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let masses = b.gaussian_masses();
        assert!((masses[0] - masses[b.bins + 1]).abs() < 1e-15);
    }

    #[test]
    fn cells_cover_the_line() {
        let b = BinSpec::new(4, 2.0).unwrap();
        assert_eq!(b.cell(-2.5), 0);
        assert_eq!(b.cell(-2.0), 1);
        assert_eq!(b.cell(-0.01), 2);
        assert_eq!(b.cell(0.0), 3);
        assert_eq!(b.cell(1.999), 4);
        assert_eq!(b.cell(2.0), 5);
    }

    #[test]
    fn point_mass_is_far_from_gaussian() {
        let samples = vec![0.0; MIN_DTV_SAMPLES];
        let d = dtv_estimate(&samples, &BinSpec::default()).unwrap();
        let center = BinSpec::default().gaussian_masses()[101];
        assert!((d.estimate - (1.0 - center)).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_or_bad_input() {
        assert!(dtv_estimate(&[0.0; 10], &BinSpec::default()).is_err());
        assert!(BinSpec::new(0, 1.0).is_err());
        assert!(BinSpec::new(10, -1.0).is_err());
    }
}
