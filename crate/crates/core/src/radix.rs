//! Mixed-radix digit systems.
//!
//! A [`RadixSystem`] with radices `(ρ_1, …, ρ_N)` writes every integer in
//! `[0, ∏ρ_i)` uniquely as `Σ t_i·w_i` with `w_1 = 1`, `w_{i+1} = w_i·ρ_i` and
//! `t_i ∈ [0, ρ_i)`. Positions are 1-based throughout.
//!
//! Two instances matter for the codes in this crate: the uniform `r̄`-ary
//! system of length `n̄` and the multi-base system whose radices are the prime
//! factors of `r̄` repeated block by block. In the latter the weight at flat
//! position `wm + y` is `d_{w,y} = r̄^w·p_1⋯p_{y−1}`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RadixError {
    #[error("radix {0} is below 2")]
    BadRadix(u64),
    #[error("capacity overflows u64")]
    Overflow,
    #[error("{value} is outside [0, {capacity})")]
    OutOfRange { value: u64, capacity: u64 },
    #[error("digit {digit} at position {position} exceeds radix {radix}")]
    DigitOutOfBounds { position: usize, digit: u64, radix: u64 },
    #[error("expected {expected} digits, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("invalid index-set parameters: {0}")]
    BadParameters(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadixSystem {
    radices: Vec<u64>,
    weights: Vec<u64>,
    capacity: u64,
}

/// Digits `(t_1, …, t_N)` of a value in some [`RadixSystem`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    digits: Vec<u64>,
}

impl DigitVector {
    pub fn new(digits: Vec<u64>) -> Self {
        Self { digits }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at 1-based `position`.
    pub fn digit(&self, position: usize) -> u64 {
        self.digits[position - 1]
    }
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl RadixSystem {
    pub fn new(radices: Vec<u64>) -> Result<Self, RadixError> {
        let mut weights = Vec::with_capacity(radices.len());
        let mut acc = 1u64;
        for &r in &radices {
            if r < 2 {
                return Err(RadixError::BadRadix(r));
            }
            weights.push(acc);
            acc = acc.checked_mul(r).ok_or(RadixError::Overflow)?;
        }
        Ok(Self { radices, weights, capacity: acc })
    }

    /// `len` positions of radix `radix` (the ordinary base-`radix` expansion).
    pub fn uniform(radix: u64, len: usize) -> Result<Self, RadixError> {
        Self::new(vec![radix; len])
    }

    /// `(p_1, …, p_m)` repeated `⌊n̄/m⌋` times, followed by `(p_1, …, p_h)`
    /// with `h = n̄ mod m`: one position per rack.
    pub fn multi_base(primes: &[u64], n_bar: usize) -> Result<Self, RadixError> {
        if primes.is_empty() {
            return Err(RadixError::BadParameters("empty prime list".into()));
        }
        let m = primes.len();
        Self::new((0..n_bar).map(|pos| primes[pos % m]).collect())
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    pub fn len(&self) -> usize {
        self.radices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radices.is_empty()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    /// Weight of the 1-based `position`.
    pub fn weight(&self, position: usize) -> u64 {
        self.weights[position - 1]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn encode(&self, value: u64) -> Result<DigitVector, RadixError> {
        if value >= self.capacity {
            return Err(RadixError::OutOfRange { value, capacity: self.capacity });
        }
        let mut rest = value;
        let digits = self
            .radices
            .iter()
            .map(|&r| {
                let d = rest % r;
                rest /= r;
                d
            })
            .collect();
        Ok(DigitVector { digits })
    }

    pub fn decode(&self, digits: &DigitVector) -> Result<u64, RadixError> {
        if digits.digits.len() != self.radices.len() {
            return Err(RadixError::WrongLength {
                expected: self.radices.len(),
                got: digits.digits.len(),
            });
        }
        let mut value = 0u64;
        for (i, ((&d, &r), &w)) in
            digits.digits.iter().zip(&self.radices).zip(&self.weights).enumerate()
        {
            if d >= r {
                return Err(RadixError::DigitOutOfBounds { position: i + 1, digit: d, radix: r });
            }
            value += d * w;
        }
        Ok(value)
    }

    /// Digit of `value` at 1-based `position` without building the full vector.
    pub fn digit_of(&self, value: u64, position: usize) -> u64 {
        (value / self.weights[position - 1]) % self.radices[position - 1]
    }

    /// Values in `[0, capacity)` whose digits vanish at every listed position.
    pub fn zero_digit_set(&self, positions: &[usize]) -> Vec<u64> {
        (0..self.capacity)
            .filter(|&t| positions.iter().all(|&p| self.digit_of(t, p) == 0))
            .collect()
    }
}

/// `d_{w,y} = r̄^w·∏_{j=0}^{y−1} p_j` with `p_0 = 1` and `r̄ = ∏ p_j`.
pub fn weight_dwy(w: u32, y: usize, primes: &[u64]) -> u64 {
    assert!(y >= 1 && y <= primes.len(), "y = {y} outside [1, {}]", primes.len());
    let r_bar: u64 = primes.iter().product();
    r_bar.pow(w) * primes[..y - 1].iter().product::<u64>()
}

/// `T_i = {t ∈ [0, r̄^n̄) : t_i = 0}` for the `r̄`-ary system.
pub fn index_set_c1(i: usize, n_bar: usize, r_bar: u64) -> Result<Vec<u64>, RadixError> {
    if i == 0 || i > n_bar {
        return Err(RadixError::BadParameters(format!("rack {i} outside [1, {n_bar}]")));
    }
    let sys = RadixSystem::uniform(r_bar, n_bar)?;
    Ok(sys.zero_digit_set(&[i]))
}

/// The `m` digit positions zeroed by `T_{w,y}` in the multi-base system with
/// `n̄` positions: `wm + y + y'` for `y' ∈ [0, m−1]`, where a position past
/// `n̄` wraps to the position of the first block carrying the same prime.
///
/// With `m | n̄` this is exactly the rule "`(n'−1)m + y + y'` if `y + y' ≤ m`,
/// else `(y + y') mod m`" for the last block. With `h = n̄ mod m ≠ 0` the same
/// rule is applied over the transformed expansion, and the partial block
/// `w = ⌊n̄/m⌋` admits `y ∈ [1, h]`.
pub fn window_positions_c2(
    w: usize,
    y: usize,
    m: usize,
    n_bar: usize,
) -> Result<Vec<usize>, RadixError> {
    if m == 0 {
        return Err(RadixError::BadParameters("m must be positive".into()));
    }
    let n_prime = n_bar / m;
    let h = n_bar % m;
    if n_prime < 2 {
        return Err(RadixError::BadParameters(format!(
            "n' = ⌊{n_bar}/{m}⌋ = {n_prime} is below 2"
        )));
    }
    let valid = (1..=m).contains(&y) && (w < n_prime || (w == n_prime && y <= h));
    if !valid {
        return Err(RadixError::BadParameters(format!(
            "rack (w={w}, y={y}) does not exist for n̄={n_bar}, m={m}"
        )));
    }
    let start = w * m + y;
    Ok((0..m)
        .map(|offset| {
            let pos = start + offset;
            if pos <= n_bar {
                pos
            } else {
                (pos - 1) % m + 1
            }
        })
        .collect())
}

/// `T_{w,y}`: values whose digits vanish on [`window_positions_c2`].
pub fn index_set_c2(
    w: usize,
    y: usize,
    primes: &[u64],
    n_bar: usize,
) -> Result<Vec<u64>, RadixError> {
    let positions = window_positions_c2(w, y, primes.len(), n_bar)?;
    let sys = RadixSystem::multi_base(primes, n_bar)?;
    Ok(sys.zero_digit_set(&positions))
}
