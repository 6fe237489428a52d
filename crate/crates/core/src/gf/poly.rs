//! Dense polynomials over the prime field GF(q), stored low-degree first.
//!
//! Only what the extension-field code needs: reduction, multiplication
//! modulo a fixed polynomial, gcd, extended gcd for inversion, and the
//! irreducibility test used to pick the field modulus.

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Inverse in GF(q) by Fermat. `a` must be nonzero mod `q`.
pub(crate) fn mod_inv(a: u32, q: u32) -> u32 {
    debug_assert!(a % q != 0);
    mod_pow(a as u64, q as u64 - 2, q as u64) as u32
}

pub(crate) fn trim(p: &mut Vec<u32>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[u32]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out: Vec<u32> = (0..len)
        .map(|i| {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            ((x as u64 + q as u64 - y as u64) % q as u64) as u32
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let q64 = q as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % q64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a / m`. `m` must be nonzero.
pub(crate) fn div_rem(a: &[u32], m: &[u32], q: u32) -> (Vec<u32>, Vec<u32>) {
    let dm = degree(m).expect("division by the zero polynomial");
    let q64 = q as u64;
    let lead_inv = mod_inv(m[dm], q) as u64;
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut quot = vec![0u32; r.len() - dm];
    for i in (dm..r.len()).rev() {
        let c = r[i] as u64 * lead_inv % q64;
        if c == 0 {
            continue;
        }
        quot[i - dm] = c as u32;
        for (j, &mj) in m[..=dm].iter().enumerate() {
            let idx = i - dm + j;
            r[idx] = ((r[idx] as u64 + q64 - c * mj as u64 % q64) % q64) as u32;
        }
    }
    trim(&mut r);
    trim(&mut quot);
    (quot, r)
}

pub(crate) fn rem(a: &[u32], m: &[u32], q: u32) -> Vec<u32> {
    div_rem(a, m, q).1
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], q: u32) -> Vec<u32> {
    rem(&mul(a, b, q), m, q)
}

pub(crate) fn pow_mod(base: &[u32], mut exp: u64, m: &[u32], q: u32) -> Vec<u32> {
    let mut acc = rem(&[1], m, q);
    let mut b = rem(base, m, q);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, m, q);
        }
        b = mul_mod(&b, &b, m, q);
        exp >>= 1;
    }
    acc
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, q);
        x = y;
        y = r;
    }
    make_monic(&mut x, q);
    x
}

fn make_monic(p: &mut [u32], q: u32) {
    if let Some(d) = degree(p) {
        let inv = mod_inv(p[d], q) as u64;
        for c in p.iter_mut() {
            *c = (*c as u64 * inv % q as u64) as u32;
        }
    }
}

/// Inverse of `a` modulo the irreducible `m` by the extended Euclidean
/// algorithm. Returns `None` when `a ≡ 0`.
pub(crate) fn inv_mod(a: &[u32], m: &[u32], q: u32) -> Option<Vec<u32>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, q);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<u32> = Vec::new();
    let mut s1: Vec<u32> = vec![1];
    while !r1.is_empty() {
        let (quot, r) = div_rem(&r0, &r1, q);
        let s = sub(&s0, &mul(&quot, &s1, q), q);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant since m is irreducible
    let d = degree(&r0)?;
    if d != 0 {
        return None;
    }
    let c = mod_inv(r0[0], q) as u64;
    let mut out: Vec<u32> = s0.iter().map(|&x| (x as u64 * c % q as u64) as u32).collect();
    out = rem(&out, m, q);
    Some(out)
}

fn proper_divisors(l: usize) -> Vec<usize> {
    (1..l).filter(|d| l % d == 0).collect()
}

/// Irreducibility of a monic polynomial of degree `l ≥ 1` over GF(q):
/// `x^(q^l) ≡ x (mod f)` and `gcd(x^(q^d) − x, f) = 1` for every proper
/// divisor `d` of `l`.
pub(crate) fn is_irreducible(f: &[u32], q: u32) -> bool {
    let Some(l) = degree(f) else { return false };
    if l == 0 {
        return false;
    }
    if l == 1 {
        return true;
    }
    let x = vec![0, 1];
    let divisors = proper_divisors(l);
    // frob holds x^(q^d) mod f
    let mut frob = rem(&x, f, q);
    for d in 1..=l {
        frob = pow_mod(&frob, q as u64, f, q);
        if divisors.contains(&d) {
            let g = gcd(&sub(&frob, &x, q), f, q);
            if degree(&g) != Some(0) {
                return false;
            }
        }
    }
    sub(&frob, &x, q).is_empty()
}

/// First monic irreducible polynomial of degree `l` in the enumeration that
/// reads the non-leading coefficients as a base-`q` integer, constant term
/// least significant, counting up from zero.
pub(crate) fn find_irreducible(q: u32, l: usize) -> Vec<u32> {
    assert!(l >= 1);
    let mut lower = vec![0u32; l];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(&f, q) {
            return f;
        }
        // increment the base-q counter
        let mut carry = true;
        for c in lower.iter_mut() {
            if !carry {
                break;
            }
            *c += 1;
            if *c == q {
                *c = 0;
            } else {
                carry = false;
            }
        }
        assert!(!carry, "no irreducible polynomial of degree {l} over GF({q})");
    }
}
