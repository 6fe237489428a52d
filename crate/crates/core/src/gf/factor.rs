//! Factoring `q^l − 1` for primitive-element certification.
//!
//! `q^l − 1 = ∏_{d | l} Φ_d(q)`, so each cyclotomic value is factored on its
//! own. Pieces are small at the sizes this crate targets (the largest piece
//! for `3^64 − 1` is `3^32 + 1 ≈ 1.9·10^15`), which keeps trial division plus
//! Pollard–Brent rho over `u64` sufficient.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::GfError;

const TRIAL_LIMIT: u64 = 1 << 12;

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases cover all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
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

/// Brent's variant of Pollard rho on `x ↦ x² + c`. Returns a nontrivial
/// factor or `None` if this `c` cycles without finding one.
fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut prod = 1u64;
    let mut x;
    let mut ys;
    let mut g;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                prod = mul_mod(prod, x.abs_diff(y), n);
            }
            g = prod.gcd(&n);
            k += BATCH;
            if k >= r || g != 1 {
                break;
            }
        }
        r *= 2;
        if g != 1 {
            break;
        }
    }
    if g == n {
        // backtrack one step at a time from the last saved state
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g != 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_composite(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let factor = (1..)
        .find_map(|c| pollard_brent(n, c))
        .expect("rho yields a factor for some increment");
    split_composite(factor, out);
    split_composite(n / factor, out);
}

/// Prime factorization of a `u64`, ascending, with multiplicity.
pub fn factor_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2;
    while p <= TRIAL_LIMIT && p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    split_composite(n, &mut out);
    out.sort_unstable();
    out
}

fn moebius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `Φ_d(q) = ∏_{e | d} (q^e − 1)^{μ(d/e)}`.
pub fn cyclotomic_value(d: u64, q: u64) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in (1..=d).filter(|e| d % e == 0) {
        let term = BigUint::from(q).pow(e as u32) - 1u32;
        match moebius(d / e) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    debug_assert!((&num % &den) == BigUint::from(0u32));
    num / den
}

/// Prime factors of `q^l − 1` with multiplicity, ascending.
pub fn factor_field_order(q: u32, l: usize) -> Result<Vec<u64>, GfError> {
    let mut out = Vec::new();
    for d in (1..=l as u64).filter(|d| l as u64 % d == 0) {
        let piece = cyclotomic_value(d, q as u64);
        let small = piece.to_u64().ok_or(GfError::OrderTooLarge { q, l })?;
        out.extend(factor_u64(small));
    }
    out.sort_unstable();
    Ok(out)
}
