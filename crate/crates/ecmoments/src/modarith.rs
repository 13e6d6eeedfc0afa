//! Exact modular arithmetic over odd prime moduli: Legendre symbols,
//! inverses, square roots, Gauss sums, cube-root counts and quadratic roots.
//!
//! Moduli are capped at 2^31 so that any single product of two residues fits
//! comfortably in 64 bits; [`mul_mod`] still widens to 128 bits so it is safe
//! for arbitrary `u64` operands.

use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest modulus accepted by [`OddPrime::new`].
pub const MAX_PRIME: u64 = 1 << 31;

/// An odd prime in (2, 2^31], validated at construction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OddPrime(u64);

impl OddPrime {
    /// Primality is checked with a Miller-Rabin base set ({2, 7, 61}) that is
    /// deterministic for everything below 4.7e9, well past the 2^31 cap.
    pub fn new(value: u64) -> Result<Self> {
        if value <= 2 || value > MAX_PRIME || value.is_multiple_of(2) || !miller_rabin(value) {
            return Err(Error::NotOddPrime(value));
        }
        Ok(OddPrime(value))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        OddPrime::new(value)
    }
}

/// An integer reduced to `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Residue {
    value: u64,
    modulus: OddPrime,
}

impl Residue {
    pub fn new(value: i64, modulus: OddPrime) -> Self {
        Residue {
            value: value.rem_euclid(modulus.get() as i64) as u64,
            modulus,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> OddPrime {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// `(a * b) mod m` without overflow for any `u64` operands.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by binary exponentiation.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 11, 13] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2, 7, 61] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The Legendre symbol (a/p) in {-1, 0, 1}: 0 iff p | a, 1 iff a is a
/// non-zero square mod p.
///
/// Computed by the binary reciprocity algorithm; debug builds cross-check
/// the result against Euler's criterion.
pub fn legendre_symbol(a: i64, p: OddPrime) -> i32 {
    let m = p.get();
    let sym = jacobi(a.rem_euclid(m as i64) as u64, m);
    debug_assert_eq!(
        sym,
        euler_criterion(a, p),
        "reciprocity and Euler's criterion disagree for ({a}/{m})"
    );
    sym
}

/// Binary Jacobi symbol; for a prime modulus this is the Legendre symbol.
fn jacobi(mut a: u64, mut n: u64) -> i32 {
    if a == 0 {
        return 0;
    }
    let mut sign = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

fn euler_criterion(a: i64, p: OddPrime) -> i32 {
    let m = p.get();
    match pow_mod(a.rem_euclid(m as i64) as u64, (m - 1) / 2, m) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Multiplicative inverse mod p. Errors when p | a.
pub fn mod_inverse(a: i64, p: OddPrime) -> Result<Residue> {
    let m = p.get();
    let a = a.rem_euclid(m as i64) as u64;
    if a == 0 {
        return Err(Error::DivisionByZero { p: m });
    }
    let inv = pow_mod(a, m - 2, m);
    debug_assert_eq!(mul_mod(a, inv, m), 1);
    Ok(Residue { value: inv, modulus: p })
}

/// Square roots of `a` mod p, sorted ascending: two roots for a non-zero
/// square, the single root 0 for `a = 0`, empty for a non-residue.
///
/// Uses Tonelli-Shanks for p = 1 mod 4; every root is verified by squaring.
pub fn sqrt_mod(a: i64, p: OddPrime) -> Vec<Residue> {
    let m = p.get();
    let a = a.rem_euclid(m as i64) as u64;
    if a == 0 {
        return vec![Residue { value: 0, modulus: p }];
    }
    if legendre_symbol(a as i64, p) != 1 {
        return Vec::new();
    }
    let r = tonelli_shanks(a, m);
    assert_eq!(mul_mod(r, r, m), a, "sqrt_mod self-check failed for {a} mod {m}");
    let s = m - r;
    vec![
        Residue { value: r.min(s), modulus: p },
        Residue { value: r.max(s), modulus: p },
    ]
}

/// One square root of the quadratic residue `a` mod the odd prime `p`.
fn tonelli_shanks(a: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| jacobi(z, p) == -1).expect("non-residue exists");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let i = (1..m)
            .find(|&i| pow_mod(t, 1 << i, p) == 1)
            .expect("order of t divides 2^(m-1)");
        let b = pow_mod(c, 1 << (m - 1 - i), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// The Gauss sum `G_p = sum_{a mod p} (a/p) e^{2 pi i a / p}` in floating
/// point. Equals `sqrt(p)` for p = 1 mod 4 and `i sqrt(p)` for p = 3 mod 4;
/// verification only, no exact computation depends on it.
pub fn gauss_sum(p: OddPrime) -> Complex64 {
    let m = p.get();
    let table = QrTable::new(p);
    let mut sum = Complex64::new(0.0, 0.0);
    for a in 1..m {
        let chi = table.chi_reduced(a) as f64;
        let angle = std::f64::consts::TAU * a as f64 / m as f64;
        sum += Complex64::new(chi * angle.cos(), chi * angle.sin());
    }
    sum
}

/// Number of cube roots of `a` mod p, always 0, 1 or 3. Errors when p | a.
///
/// When 3 does not divide p - 1 cubing is an automorphism of the units, so
/// the count is 1; otherwise `a` is a cube iff `a^((p-1)/3) = 1`, giving 3.
pub fn cube_root_count(a: i64, p: OddPrime) -> Result<u32> {
    let m = p.get();
    let a = a.rem_euclid(m as i64) as u64;
    if a == 0 {
        return Err(Error::DivisionByZero { p: m });
    }
    if m % 3 != 1 {
        return Ok(1);
    }
    Ok(if pow_mod(a, (m - 1) / 3, m) == 1 { 3 } else { 0 })
}

/// All roots of `a y^2 + b y + c = 0` mod p, sorted ascending. The count is
/// `1 + ((b^2 - 4ac)/p)` when that is non-negative and 0 otherwise. Errors
/// when p | a.
pub fn quadratic_roots(a: i64, b: i64, c: i64, p: OddPrime) -> Result<Vec<Residue>> {
    let m = p.get();
    let ar = a.rem_euclid(m as i64) as u64;
    if ar == 0 {
        return Err(Error::DegenerateQuadratic { p: m });
    }
    let br = b.rem_euclid(m as i64) as u64;
    let cr = c.rem_euclid(m as i64) as u64;
    let disc = (mul_mod(br, br, m) + m - mul_mod(mul_mod(4 % m, ar, m), cr, m)) % m;
    let inv_2a = mod_inverse(2 * ar as i64, p)?.value();
    let neg_b = (m - br) % m;
    let mut roots: Vec<u64> = sqrt_mod(disc as i64, p)
        .into_iter()
        .map(|r| mul_mod((neg_b + r.value()) % m, inv_2a, m))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots
        .into_iter()
        .map(|value| Residue { value, modulus: p })
        .collect())
}

/// Evaluate an integer polynomial, ascending coefficients, at `t` mod p.
pub fn poly_eval_mod(coeffs: &[i64], t: i64, p: OddPrime) -> u64 {
    let m = p.get();
    let t = t.rem_euclid(m as i64) as u64;
    let mut v: u64 = 0;
    for &c in coeffs.iter().rev() {
        // v, t < p <= 2^31, so v * t fits in 64 bits
        v = (v * t + c.rem_euclid(m as i64) as u64) % m;
    }
    v
}

/// Quadratic-character lookup table for one prime: chi(r) for every r in
/// [0, p), built in O(p) by marking the squares.
pub struct QrTable {
    p: u64,
    chi: Vec<i8>,
}

impl QrTable {
    pub fn new(p: OddPrime) -> Self {
        let m = p.get();
        let mut chi = vec![-1i8; m as usize];
        chi[0] = 0;
        for x in 1..=(m / 2) {
            chi[(x * x % m) as usize] = 1;
        }
        QrTable { p: m, chi }
    }

    #[inline]
    pub fn prime(&self) -> u64 {
        self.p
    }

    /// chi of a value already reduced to [0, p).
    #[inline]
    pub fn chi_reduced(&self, r: u64) -> i32 {
        self.chi[r as usize] as i32
    }

    #[inline]
    pub fn chi(&self, v: i64) -> i32 {
        self.chi_reduced(v.rem_euclid(self.p as i64) as u64)
    }
}
