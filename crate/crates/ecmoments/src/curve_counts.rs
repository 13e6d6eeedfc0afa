//! Point counting for a single short Weierstrass curve mod p and Sato-Tate
//! angle extraction.

use crate::modarith::{OddPrime, QrTable, Residue};
use crate::{Error, Result};

/// A curve `y^2 = x^3 + a2 x^2 + a4 x + a6` with coefficients reduced mod a
/// common odd prime. Only the short form (a1 = a3 = 0) is representable.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CurveModP {
    p: OddPrime,
    a2: u64,
    a4: u64,
    a6: u64,
}

impl CurveModP {
    pub fn new(p: OddPrime, a2: i64, a4: i64, a6: i64) -> Self {
        let m = p.get() as i64;
        CurveModP {
            p,
            a2: a2.rem_euclid(m) as u64,
            a4: a4.rem_euclid(m) as u64,
            a6: a6.rem_euclid(m) as u64,
        }
    }

    /// Errors when the residues do not share a modulus.
    pub fn from_residues(a2: Residue, a4: Residue, a6: Residue) -> Result<Self> {
        if a2.modulus() != a4.modulus() || a4.modulus() != a6.modulus() {
            return Err(Error::MixedModuli);
        }
        Ok(CurveModP {
            p: a2.modulus(),
            a2: a2.value(),
            a4: a4.value(),
            a6: a6.value(),
        })
    }

    pub fn prime(self) -> OddPrime {
        self.p
    }

    pub fn coefficients(self) -> (u64, u64, u64) {
        (self.a2, self.a4, self.a6)
    }

    /// True when the cubic has a repeated root mod p, i.e. the discriminant
    /// 18 a2 a4 a6 - 4 a2^3 a6 + a2^2 a4^2 - 4 a4^3 - 27 a6^2 vanishes.
    pub fn is_singular(self) -> bool {
        let m = self.p.get() as u128;
        let (a2, a4, a6) = (self.a2 as u128, self.a4 as u128, self.a6 as u128);
        let pos = (18 * a2 % m * a4 % m * a6 + a2 * a2 % m * (a4 * a4 % m)) % m;
        let neg = (4 * a2 % m * a2 % m * a2 % m * a6
            + 4 * a4 % m * a4 % m * a4
            + 27 * a6 % m * a6)
            % m;
        (pos + m - neg % m).is_multiple_of(m)
    }
}

/// The deviation `a(E) = -sum_x chi(x^3 + a2 x^2 + a4 x + a6)`; equal to
/// p - #E(F_p) counted affinely. Builds a fresh character table, O(p).
pub fn trace_a(curve: &CurveModP) -> i64 {
    trace_a_with(&QrTable::new(curve.p), curve)
}

/// [`trace_a`] with a shared per-prime table, so a t-sweep costs O(p) per
/// curve after one O(p) table construction.
pub fn trace_a_with(table: &QrTable, curve: &CurveModP) -> i64 {
    debug_assert_eq!(table.prime(), curve.p.get());
    let m = curve.p.get();
    let mut sum = 0i64;
    for x in 0..m {
        // all operands are below 2^31, so the products stay inside u64
        let v = (((x + curve.a2) % m * x + curve.a4) % m * x + curve.a6) % m;
        sum += table.chi_reduced(v) as i64;
    }
    -sum
}

/// Number of affine points of `y^2 = f(x)` over F_p, via [`trace_a`].
pub fn point_count(curve: &CurveModP) -> u64 {
    (curve.p.get() as i64 - trace_a(curve)) as u64
}

/// Independent O(p^2) oracle for [`point_count`]: enumerate every pair
/// (x, y) directly, with no character-sum shortcut.
pub fn point_count_enumerated(curve: &CurveModP) -> u64 {
    let m = curve.p.get();
    let mut count = 0;
    for x in 0..m {
        let fx = (((x + curve.a2) % m * x + curve.a4) % m * x + curve.a6) % m;
        for y in 0..m {
            if y * y % m == fx {
                count += 1;
            }
        }
    }
    count
}

/// The Sato-Tate angle theta in [0, pi] defined by `a = 2 sqrt(p) cos theta`.
/// Errors when |a| exceeds the Hasse bound (an upstream bug or a singular
/// curve).
pub fn theta_angle(a: i64, p: OddPrime) -> Result<f64> {
    let m = p.get();
    if (a as i128) * (a as i128) > 4 * m as i128 {
        return Err(Error::HasseViolation { a, p: m });
    }
    Ok((a as f64 / (2.0 * (m as f64).sqrt())).acos())
}
