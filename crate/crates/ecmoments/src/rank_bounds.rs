//! Numeric machinery for the average-rank upper bound
//!
//! ```text
//! ave rank <= 1/sigma + r + 1/2 + (k1/sigma - k2/(sigma^2 log R)) m_E / log R
//! ```
//!
//! where `k1 = 2 sum_p log p / p^2` and `k2 = 4 sum_p (log p)^2 / p^2` come
//! from evaluating the second-moment prime sum S2 against the sin^2 Fourier
//! test-function pair. The correction term is what a `p^2 - m_E p + O(1)`
//! second moment contributes at finite conductor; it vanishes as sigma grows.
//!
//! Both routes to S2 are exposed: the direct prime sum and the two-term
//! closed form. Their difference is reported rather than hidden.

use std::f64::consts::{PI, TAU};

use crate::primes;

/// `2 sum_p log p / p^2`, rounded to three digits.
pub const PAPER_K1: f64 = 0.986;
/// `4 sum_p (log p)^2 / p^2`, rounded to three digits.
pub const PAPER_K2: f64 = 2.966;
/// Sieve cutoff for recomputing the constants and for the direct S2 sum.
pub const CONSTANTS_CUTOFF: u64 = 10_000_000;

/// The Fourier pair `phi(x) = sin^2(pi sigma x) / (2 pi x)^2` with
/// `phi_hat(u) = (sigma - |u|)/4` supported on |u| <= sigma.
#[derive(Clone, Copy, Debug)]
pub struct TestFunction {
    sigma: f64,
}

impl TestFunction {
    pub fn new(sigma: f64) -> Self {
        assert!(sigma > 0.0, "sigma must be positive");
        TestFunction { sigma }
    }

    pub fn sigma(self) -> f64 {
        self.sigma
    }

    /// `phi(0) = sigma^2 / 4` at the removable singularity.
    pub fn phi(self, x: f64) -> f64 {
        if x == 0.0 {
            return self.sigma * self.sigma / 4.0;
        }
        let s = (PI * self.sigma * x).sin();
        (s * s) / (TAU * x * (TAU * x))
    }

    /// `phi_hat(0) = sigma / 4 = phi(0) / sigma`.
    pub fn phi_hat(self, u: f64) -> f64 {
        if u.abs() <= self.sigma {
            (self.sigma - u.abs()) / 4.0
        } else {
            0.0
        }
    }
}

/// Sieved values of `C1 = sum_{p <= cut} log p / p^2` and
/// `C2 = sum_{p <= cut} (log p)^2 / p^2`, with integral bounds on the
/// discarded tails.
#[derive(Clone, Copy, Debug)]
pub struct PrimeSumConstants {
    pub c1: f64,
    pub c2: f64,
    pub p_cut: u64,
    /// `int_X^inf log x / x^2 dx = (log X + 1)/X`, an upper bound on the C1 tail.
    pub c1_tail: f64,
    /// `int_X^inf (log x)^2 / x^2 dx`, an upper bound on the C2 tail.
    pub c2_tail: f64,
}

/// Sieve the two prime-sum constants up to `p_cut` (at least 10^6 so the
/// printed three-digit values are stable).
pub fn prime_sum_constants(p_cut: u64) -> PrimeSumConstants {
    assert!(p_cut >= 1_000_000, "cutoff too small for stable constants");
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    for p in primes::primes_up_to(p_cut) {
        let p = p as f64;
        let lp = p.ln();
        let w = lp / (p * p);
        c1 += w;
        c2 += w * lp;
    }
    let x = p_cut as f64;
    let lx = x.ln();
    PrimeSumConstants {
        c1,
        c2,
        p_cut,
        c1_tail: (lx + 1.0) / x,
        c2_tail: (lx * lx + 2.0 * lx + 2.0) / x,
    }
}

/// Direct evaluation of
/// `S2 = (2 m_E / log R) sum_p phi_hat(2 log p / log R) log p / p^2`
/// over the support `2 log p / log R < sigma`.
///
/// The sieve stops at [`CONSTANTS_CUTOFF`] when the support reaches further;
/// the discarded tail is below `(sigma/4)(log X + 1)/X ~ 1e-6` there, far
/// inside every tolerance used against this sum.
pub fn s2_direct(sigma: f64, log_r: f64, m_e: f64) -> f64 {
    assert!(sigma > 0.0 && log_r > 0.0 && m_e >= 0.0);
    if m_e == 0.0 {
        return 0.0;
    }
    let tf = TestFunction::new(sigma);
    let support = (sigma * log_r / 2.0).exp();
    let cutoff = if support.is_finite() && support < CONSTANTS_CUTOFF as f64 {
        support as u64
    } else {
        CONSTANTS_CUTOFF
    };
    let mut sum = 0.0;
    for p in primes::primes_up_to(cutoff) {
        let p = p as f64;
        let lp = p.ln();
        let u = 2.0 * lp / log_r;
        if u < sigma {
            sum += tf.phi_hat(u) * lp / (p * p);
        }
    }
    2.0 * m_e / log_r * sum
}

/// Two-term closed form
/// `S2 = (k1/sigma - k2/(sigma^2 log R)) (m_E / log R) phi(0)`
/// with the rounded constants.
pub fn s2_asymptotic(sigma: f64, log_r: f64, m_e: f64) -> f64 {
    s2_asymptotic_with(PAPER_K1, PAPER_K2, sigma, log_r, m_e)
}

/// [`s2_asymptotic`] with caller-supplied constants (e.g. freshly sieved).
pub fn s2_asymptotic_with(k1: f64, k2: f64, sigma: f64, log_r: f64, m_e: f64) -> f64 {
    assert!(sigma > 0.0 && log_r > 0.0 && m_e >= 0.0);
    (k1 / sigma - k2 / (sigma * sigma * log_r)) * (m_e / log_r) * (sigma * sigma / 4.0)
}

/// Decomposition of the average-rank upper bound.
///
/// `bound = one_over_sigma + r + 1/2 + correction` where
/// `correction = (k1/sigma - k2/(sigma^2 log R)) m_E / log R`. The dropped
/// error terms of size O(log log R / log R) are documented by the consumers,
/// not folded in.
#[derive(Clone, Copy, Debug)]
pub struct RankBoundReport {
    pub sigma: f64,
    pub log_r: f64,
    pub m_e: f64,
    pub r: u32,
    /// Constants actually used for the correction.
    pub k1: f64,
    pub k2: f64,
    pub one_over_sigma: f64,
    pub correction: f64,
    pub bound: f64,
}

/// The bound with the rounded constants.
pub fn average_rank_bound(r: u32, sigma: f64, log_r: f64, m_e: f64) -> RankBoundReport {
    average_rank_bound_with(PAPER_K1, PAPER_K2, r, sigma, log_r, m_e)
}

/// The bound with caller-supplied prime-sum constants.
pub fn average_rank_bound_with(
    k1: f64,
    k2: f64,
    r: u32,
    sigma: f64,
    log_r: f64,
    m_e: f64,
) -> RankBoundReport {
    assert!(sigma > 0.0 && log_r > 0.0 && m_e >= 0.0);
    let one_over_sigma = 1.0 / sigma;
    let correction = (k1 / sigma - k2 / (sigma * sigma * log_r)) * m_e / log_r;
    RankBoundReport {
        sigma,
        log_r,
        m_e,
        r,
        k1,
        k2,
        one_over_sigma,
        correction,
        bound: one_over_sigma + r as f64 + 0.5 + correction,
    }
}
