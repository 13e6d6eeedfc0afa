//! Polynomial character sums: a brute-force oracle plus the closed forms for
//! shifted-product and quadratic Legendre sums.

use crate::modarith::{legendre_symbol, mul_mod, OddPrime, QrTable};
use crate::{Error, Result};

/// Degree cap for the brute oracle. Every sum evaluated here has degree at
/// most 3 per variable, so anything larger is a caller bug.
pub const MAX_BRUTE_DEGREE: usize = 6;

/// `sum_{t mod p} chi(f(t))` by direct Horner evaluation; exact, in [-p, p].
///
/// `coeffs` lists f ascending by degree. Panics if the degree exceeds
/// [`MAX_BRUTE_DEGREE`].
pub fn brute_char_sum(coeffs: &[i64], p: OddPrime) -> i64 {
    brute_char_sum_with(&QrTable::new(p), coeffs)
}

/// [`brute_char_sum`] with a caller-provided character table, so sweeps can
/// reuse one table per prime.
pub fn brute_char_sum_with(table: &QrTable, coeffs: &[i64]) -> i64 {
    assert!(
        coeffs.len() <= MAX_BRUTE_DEGREE + 1,
        "polynomial degree exceeds {MAX_BRUTE_DEGREE}"
    );
    let m = table.prime();
    let reduced: Vec<u64> = coeffs
        .iter()
        .map(|&c| c.rem_euclid(m as i64) as u64)
        .collect();
    let mut sum = 0i64;
    for t in 0..m {
        let mut v: u64 = 0;
        for &c in reduced.iter().rev() {
            // v, t < p <= 2^31 keeps v * t + c inside u64
            v = (v * t + c) % m;
        }
        sum += table.chi_reduced(v) as i64;
    }
    sum
}

/// `sum_{x mod p} chi(n1 + x) chi(n2 + x)` in closed form: `p - 1` when
/// `p | n1 - n2`, and `-1` otherwise.
pub fn shifted_product_sum(n1: i64, n2: i64, p: OddPrime) -> i64 {
    let m = p.get() as i128;
    if (n1 as i128 - n2 as i128).rem_euclid(m) == 0 {
        m as i64 - 1
    } else {
        -1
    }
}

/// `sum_{t mod p} chi(a t^2 + b t + c)` in closed form: `(p-1) chi(a)` when
/// `p | b^2 - 4ac`, else `-chi(a)`.
///
/// When `p | a` but not `b` the sum is linear in t and vanishes, so 0 is
/// returned. Errors when a and b both vanish mod p (the sum degenerates to
/// `p chi(c)`, which callers must handle themselves).
pub fn quadratic_char_sum(a: i64, b: i64, c: i64, p: OddPrime) -> Result<i64> {
    let m = p.get();
    let ar = a.rem_euclid(m as i64) as u64;
    let br = b.rem_euclid(m as i64) as u64;
    if ar == 0 && br == 0 {
        return Err(Error::ConstantQuadratic { p: m });
    }
    if ar == 0 {
        return Ok(0);
    }
    let cr = c.rem_euclid(m as i64) as u64;
    let disc = (mul_mod(br, br, m) + m - mul_mod(mul_mod(4 % m, ar, m), cr, m)) % m;
    let chi_a = legendre_symbol(ar as i64, p) as i64;
    Ok(if disc == 0 {
        (m as i64 - 1) * chi_a
    } else {
        -chi_a
    })
}
