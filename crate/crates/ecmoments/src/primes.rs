//! Prime generation by a segmented sieve of Eratosthenes.
//!
//! Sweeps over primes stream blocks of 64K so that memory stays flat even at
//! the 10^7 cutoff used by the prime-sum constants.

const SEGMENT: u64 = 1 << 16;

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    primes_in_range(2, limit)
}

/// Odd primes `<= limit`, ascending (2 excluded).
pub fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    primes_in_range(3, limit)
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if hi < lo {
        return Vec::new();
    }
    let base = simple_sieve(hi.isqrt());
    let mut out = Vec::new();
    let mut buf = vec![true; SEGMENT as usize];
    let mut seg_lo = lo;
    while seg_lo <= hi {
        let seg_hi = hi.min(seg_lo + SEGMENT - 1);
        let len = (seg_hi - seg_lo + 1) as usize;
        buf[..len].fill(true);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let mut j = seg_lo.div_ceil(p).max(p) * p;
            while j <= seg_hi {
                buf[(j - seg_lo) as usize] = false;
                j += p;
            }
        }
        for (i, &is_prime) in buf[..len].iter().enumerate() {
            if is_prime {
                out.push(seg_lo + i as u64);
            }
        }
        seg_lo = seg_hi + 1;
    }
    out
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (2..=n as u64).filter(|&v| sieve[v as usize]).collect()
}
