//! The p^(3/2) fluctuation of the second moment for `y^2 = x^3 + Tx^2 + 1`.
//!
//! The second moment at p is `p^2 - n32 p - 1 + p S(p)` with
//! `S(p) = sum_x chi(4x^3 + 1)`, and S(p) is (minus) the trace of the CM
//! curve `y^2 = x^3 + 16`. At split primes (p = 1 mod 3) the normalized
//! fluctuation `S(p)/sqrt(p)` spreads over [-2, 2]; at inert primes it
//! vanishes. The sweep here samples that spread and bins it.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::curve_counts::{theta_angle, trace_a_with, CurveModP};
use crate::legendre_sums::brute_char_sum_with;
use crate::modarith::{cube_root_count, OddPrime, QrTable};
use crate::primes;

/// Per-prime sharpness data.
///
/// `fluct = p S(p)` is exactly `A2 - (p^2 - n32 p - 1)`; `normalized` divides
/// by p^(3/2); `theta` is the Sato-Tate angle of `y^2 = x^3 + 16` at p.
#[derive(Clone, Copy, Debug)]
pub struct FluctuationRecord {
    pub p: u64,
    pub n32: u32,
    pub fluct: i64,
    pub normalized: f64,
    pub theta: f64,
}

/// Compute one record in O(p) via the inner character sum, never the O(p^2)
/// moment.
pub fn fluctuation_record(p: OddPrime) -> FluctuationRecord {
    let m = p.get();
    let table = QrTable::new(p);
    let s = brute_char_sum_with(&table, &[1, 0, 0, 4]);
    let trace = trace_a_with(&table, &CurveModP::new(p, 0, 0, 16));
    // substituting x -> 4x identifies the two sums
    debug_assert_eq!(trace, -s);
    FluctuationRecord {
        p: m,
        n32: cube_root_count(2, p).expect("p is odd, so p does not divide 2"),
        fluct: m as i64 * s,
        normalized: s as f64 / (m as f64).sqrt(),
        theta: theta_angle(trace, p).expect("y^2 = x^3 + 16 satisfies Hasse for p > 3"),
    }
}

/// Records for every odd prime up to `p_max`, ascending. The per-prime work
/// runs in parallel; the output order is fixed regardless of thread count.
pub fn sweep_records(p_max: u64) -> Vec<FluctuationRecord> {
    primes::odd_primes_up_to(p_max)
        .par_iter()
        .map(|&q| fluctuation_record(OddPrime::new(q).expect("sieve output is prime")))
        .collect()
}

/// Interval-coverage histogram over the split primes p = 1 mod 3: counts of
/// the normalized fluctuation in bins of [-2, 2], and of theta in equally
/// many bins of [0, pi] (uniform in the limit for a CM curve).
#[derive(Clone, Debug)]
pub struct HistogramReport {
    pub p_max: u64,
    pub bin_width: f64,
    pub fluct_bins: Vec<u64>,
    pub theta_bins: Vec<u64>,
    pub split_primes: u64,
}

impl HistogramReport {
    pub fn bins(&self) -> usize {
        self.fluct_bins.len()
    }

    /// [lo, hi) edges of fluctuation bin i.
    pub fn fluct_bin_edges(&self, i: usize) -> (f64, f64) {
        let lo = -2.0 + i as f64 * self.bin_width;
        (lo, (lo + self.bin_width).min(2.0))
    }

    /// [lo, hi) edges of theta bin i.
    pub fn theta_bin_edges(&self, i: usize) -> (f64, f64) {
        let w = PI / self.bins() as f64;
        (i as f64 * w, (i as f64 + 1.0) * w)
    }

    /// Fraction of split primes whose theta landed in bin i.
    pub fn theta_fraction(&self, i: usize) -> f64 {
        if self.split_primes == 0 {
            0.0
        } else {
            self.theta_bins[i] as f64 / self.split_primes as f64
        }
    }
}

/// Bin existing records; `bin_width` must lie in (0, 4].
pub fn histogram_from_records(
    records: &[FluctuationRecord],
    p_max: u64,
    bin_width: f64,
) -> HistogramReport {
    assert!(
        bin_width > 0.0 && bin_width <= 4.0,
        "bin width must lie in (0, 4]"
    );
    let nbins = (4.0 / bin_width).ceil() as usize;
    let theta_width = PI / nbins as f64;
    let mut fluct_bins = vec![0u64; nbins];
    let mut theta_bins = vec![0u64; nbins];
    let mut split_primes = 0;
    for r in records.iter().filter(|r| r.p % 3 == 1) {
        split_primes += 1;
        let i = (((r.normalized + 2.0) / bin_width) as usize).min(nbins - 1);
        fluct_bins[i] += 1;
        let j = ((r.theta / theta_width) as usize).min(nbins - 1);
        theta_bins[j] += 1;
    }
    HistogramReport { p_max, bin_width, fluct_bins, theta_bins, split_primes }
}

/// Sweep and bin in one step.
pub fn interval_hit_report(p_max: u64, bin_width: f64) -> HistogramReport {
    histogram_from_records(&sweep_records(p_max), p_max, bin_width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family_moments::{second_moment, CatalogId};

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    #[test]
    fn record_examples() {
        let r = fluctuation_record(p(5));
        assert_eq!((r.fluct, r.n32), (0, 1));
        assert_eq!(r.normalized, 0.0);

        let r = fluctuation_record(p(7));
        assert_eq!((r.fluct, r.n32), (7, 0));
        assert!((r.normalized - 7.0 / 7f64.powf(1.5)).abs() < 1e-12);
        assert!((r.theta - 1.760922).abs() < 1e-6);

        let r = fluctuation_record(p(11));
        assert_eq!((r.fluct, r.n32), (0, 1));
    }

    #[test]
    fn fluctuation_matches_second_moment_to_300() {
        let main = CatalogId::MainTheorem.family().unwrap();
        for q in primes::odd_primes_up_to(300) {
            let q = p(q);
            let m = q.get() as i64;
            let r = fluctuation_record(q);
            let a2 = second_moment(&main, q);
            assert_eq!(r.fluct, a2 - (m * m - r.n32 as i64 * m - 1), "p = {q}");
        }
    }

    #[test]
    fn inert_primes_have_zero_fluctuation() {
        for r in sweep_records(2000) {
            if r.p % 3 == 2 {
                assert_eq!(r.fluct, 0, "p = {}", r.p);
                assert_eq!(r.n32, 1);
            }
            assert!(r.normalized.abs() <= 2.0);
            assert!((0.0..=PI).contains(&r.theta));
        }
    }

    #[test]
    fn coarse_bins_fill_quickly() {
        let report = interval_hit_report(1000, 2.0);
        assert_eq!(report.bins(), 2);
        assert!(report.fluct_bins.iter().all(|&c| c > 0));
        // about half of the 168 primes below 1000 are split
        assert_eq!(report.split_primes, 80);
        assert_eq!(
            report.fluct_bins.iter().sum::<u64>(),
            report.split_primes
        );
    }

    #[test]
    fn microscopic_bins_stay_empty() {
        let report = interval_hit_report(1000, 0.001);
        assert_eq!(report.bins(), 4000);
        assert!(report.fluct_bins.iter().filter(|&&c| c == 0).count() > 0);
    }

    #[test]
    fn bin_edges_cover_the_interval() {
        let report = interval_hit_report(500, 0.5);
        assert_eq!(report.bins(), 8);
        assert_eq!(report.fluct_bin_edges(0), (-2.0, -1.5));
        assert_eq!(report.fluct_bin_edges(7), (1.5, 2.0));
        let (lo, hi) = report.theta_bin_edges(7);
        assert!((hi - PI).abs() < 1e-12 && lo < hi);
        let total: f64 = (0..8).map(|i| report.theta_fraction(i)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
