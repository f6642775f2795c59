//! Flexible ramping requirements from net-load forecast-error samples.
//!
//! Requirements come from raw empirical quantiles with the `h = (n−1)·p`
//! linear-interpolation rule. The histogram is a presentation artifact only;
//! it never feeds the requirement.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market::FrpRequirement;

pub const FRU_QUANTILE: f64 = 0.975;
pub const FRD_QUANTILE: f64 = 0.025;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrpError {
    #[error("sample set is empty")]
    EmptySamples,
    #[error("quantile probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("bin width {0} must be positive and finite")]
    InvalidBinWidth(f64),
    #[error("sample set contains a non-finite value")]
    NonFinite,
}

/// Net-load forecast-error samples (MW) for one dispatch mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<f64>,
    pub label: String,
}

impl SampleSet {
    pub fn new(label: impl Into<String>, samples: Vec<f64>) -> Self {
        SampleSet {
            samples,
            label: label.into(),
        }
    }

    fn sorted(&self) -> Result<Vec<f64>, FrpError> {
        if self.samples.is_empty() {
            return Err(FrpError::EmptySamples);
        }
        if self.samples.iter().any(|v| !v.is_finite()) {
            return Err(FrpError::NonFinite);
        }
        let mut s = self.samples.clone();
        s.sort_by(f64::total_cmp);
        Ok(s)
    }
}

/// Order-statistic quantile with linear interpolation between the ranks
/// bracketing `h = (n−1)·p`.
pub fn empirical_quantile(samples: &SampleSet, p: f64) -> Result<f64, FrpError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(FrpError::InvalidProbability(p));
    }
    let sorted = samples.sorted()?;
    Ok(quantile_sorted(&sorted, p))
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    if lo == hi || frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Upward requirement from the 97.5% quantile, downward from the 2.5%
/// quantile; both clamped at zero. Positive samples mean net load rose when
/// the advisory interval became binding.
pub fn requirements_from_samples(samples: &SampleSet) -> Result<FrpRequirement, FrpError> {
    let sorted = samples.sorted()?;
    let upper = quantile_sorted(&sorted, FRU_QUANTILE);
    let lower = quantile_sorted(&sorted, FRD_QUANTILE);
    Ok(FrpRequirement {
        fru: upper.max(0.0),
        frd: (-lower).max(0.0),
    })
}

/// Frequency histogram with half-open bins `[edge, edge + width)` whose edges
/// are integer multiples of the width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    /// `counts.len() + 1` ascending edges (empty when there are no samples).
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(bin_start, bin_end, count)` triples.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(b, &c)| (self.bin_edges[b], self.bin_edges[b + 1], c))
    }
}

pub fn build_histogram(samples: &SampleSet, bin_width: f64) -> Result<Histogram, FrpError> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(FrpError::InvalidBinWidth(bin_width));
    }
    if samples.samples.iter().any(|v| !v.is_finite()) {
        return Err(FrpError::NonFinite);
    }
    let index = |x: f64| (x / bin_width).floor() as i64;
    let Some(first) = samples.samples.iter().map(|&x| index(x)).min() else {
        return Ok(Histogram {
            bin_width,
            bin_edges: Vec::new(),
            counts: Vec::new(),
        });
    };
    let last = samples.samples.iter().map(|&x| index(x)).max().unwrap_or(first);
    let mut counts = vec![0u64; (last - first + 1) as usize];
    for &x in &samples.samples {
        counts[(index(x) - first) as usize] += 1;
    }
    let bin_edges = (first..=last + 1).map(|i| i as f64 * bin_width).collect();
    Ok(Histogram {
        bin_width,
        bin_edges,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[f64]) -> SampleSet {
        SampleSet::new("t", v.to_vec())
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(empirical_quantile(&set(&[1.0, 2.0, 3.0, 4.0, 5.0]), 0.5).unwrap(), 3.0);
        assert_eq!(empirical_quantile(&set(&[0.0, 10.0]), 0.25).unwrap(), 2.5);
        assert_eq!(empirical_quantile(&set(&[5.0, 1.0, 3.0]), 1.0).unwrap(), 5.0);
        assert_eq!(empirical_quantile(&set(&[5.0, 1.0, 3.0]), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn quantile_errors() {
        assert_eq!(empirical_quantile(&set(&[]), 0.5), Err(FrpError::EmptySamples));
        assert_eq!(
            empirical_quantile(&set(&[1.0]), 1.5),
            Err(FrpError::InvalidProbability(1.5))
        );
        assert_eq!(requirements_from_samples(&set(&[])), Err(FrpError::EmptySamples));
    }

    #[test]
    fn histogram_examples() {
        let h = build_histogram(&set(&[0.1, 0.2, 0.6]), 0.5).unwrap();
        assert_eq!(h.bin_edges, vec![0.0, 0.5, 1.0]);
        assert_eq!(h.counts, vec![2, 1]);

        let empty = build_histogram(&set(&[]), 0.5).unwrap();
        assert!(empty.counts.is_empty() && empty.bin_edges.is_empty());

        let neg = build_histogram(&set(&[-0.5, -0.1, 1.0]), 0.5).unwrap();
        assert_eq!(neg.bin_edges, vec![-0.5, 0.0, 0.5, 1.0, 1.5]);
        assert_eq!(neg.counts, vec![2, 0, 0, 1]);
        assert!(build_histogram(&set(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn requirement_examples() {
        assert_eq!(
            requirements_from_samples(&set(&[0.0; 7])).unwrap(),
            FrpRequirement::ZERO
        );
        let one_sided = requirements_from_samples(&set(&[0.0, 0.5, 2.0, 3.0])).unwrap();
        assert_eq!(one_sided.frd, 0.0);
        assert!(one_sided.fru > 0.0);
        // a single sample is its own quantile at every level
        assert_eq!(
            requirements_from_samples(&set(&[-2.0])).unwrap(),
            FrpRequirement::new(0.0, 2.0)
        );
        assert_eq!(
            requirements_from_samples(&set(&[3.0])).unwrap(),
            FrpRequirement::new(3.0, 0.0)
        );
    }

    proptest! {
        #[test]
        fn quantile_monotone_in_p(
            xs in prop::collection::vec(-50.0f64..50.0, 1..60),
            p in 0.0f64..=1.0, q in 0.0f64..=1.0,
        ) {
            let s = set(&xs);
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            prop_assert!(empirical_quantile(&s, lo).unwrap() <= empirical_quantile(&s, hi).unwrap());
        }

        #[test]
        fn quantile_shift_equivariant(
            xs in prop::collection::vec(-50.0f64..50.0, 1..60),
            p in 0.0f64..=1.0, c in -20.0f64..20.0,
        ) {
            let shifted: Vec<f64> = xs.iter().map(|x| x + c).collect();
            let a = empirical_quantile(&set(&xs), p).unwrap() + c;
            let b = empirical_quantile(&set(&shifted), p).unwrap();
            prop_assert!((a - b).abs() <= 1e-9);
        }

        #[test]
        fn histogram_conserves_mass(
            xs in prop::collection::vec(-20.0f64..20.0, 0..200),
            w in 0.05f64..3.0,
        ) {
            let h = build_histogram(&set(&xs), w).unwrap();
            prop_assert_eq!(h.total(), xs.len() as u64);
            for (start, end, _) in h.bins() {
                prop_assert!(end > start);
            }
            for &x in &xs {
                let bin = h.bins().position(|(s, e, _)| x >= s && x < e);
                prop_assert!(bin.is_some());
            }
        }
    }
}
