//! Interval exchange transformations.
//!
//! Intervals are indexed `1..=n` and are left-closed right-open,
//! `I_k = [beta_{k-1}, beta_k)`. The permutation sends interval `k` to
//! position `perm.image(k)` after the exchange.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{ratio, Rational, Scalar};

/// Default iterate budget for orbit searches.
pub const DEFAULT_ITERATE_CAP: u64 = 10_000_000;

/// Permutation of `1..=n`, stored by images `(pi(1), ..., pi(n))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut inverse = vec![0usize; n];
        for (i, &v) in images.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!("image {v} not in 1..={n}")));
            }
            if inverse[v - 1] != 0 {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
            inverse[v - 1] = i + 1;
        }
        Ok(Self { images, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self::new((1..=n).collect()).expect("identity is a permutation")
    }

    /// The reversal `(n n-1 ... 1)`, irreducible for every `n >= 2`.
    pub fn reversal(n: usize) -> Self {
        Self::new((1..=n).rev().collect()).expect("reversal is a permutation")
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `pi(k)` for `k` in `1..=n`.
    pub fn image(&self, k: usize) -> usize {
        self.images[k - 1]
    }

    /// `pi^{-1}(v)` for `v` in `1..=n`.
    pub fn preimage(&self, v: usize) -> usize {
        self.inverse[v - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        Self { images: self.inverse.clone(), inverse: self.images.clone() }
    }

    /// Smallest `k < n` with `pi{1..k} = {1..k}`, if any.
    pub fn reducing_prefix(&self) -> Option<usize> {
        let mut max = 0;
        for k in 1..self.n() {
            max = max.max(self.image(k));
            if max == k {
                return Some(k);
            }
        }
        None
    }

    pub fn is_irreducible(&self) -> bool {
        self.reducing_prefix().is_none()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `2,1`, `2 1` or `(2 1)`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let images = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<usize>().map_err(|_| Error::Parse(format!("bad permutation entry '{p}'"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

/// An interval exchange transformation `(lambda, pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Iet<S: Scalar> {
    lengths: Vec<S>,
    perm: Permutation,
    cuts: Vec<S>,
    offsets: Vec<S>,
}

/// Result of a brute-force first return search.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstReturn<S> {
    pub point: S,
    pub time: u64,
    /// Interval indices of `x, Tx, ..., T^{time-1} x`.
    pub word: Vec<usize>,
}

impl<S: Scalar> Iet<S> {
    pub fn new(lengths: Vec<S>, perm: Permutation) -> Result<Self> {
        let n = perm.n();
        if lengths.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: lengths.len() });
        }
        if n < 2 {
            return Err(Error::TooFewIntervals(n));
        }
        for (i, l) in lengths.iter().enumerate() {
            if *l <= S::zero() {
                return Err(Error::NonPositiveLength { index: i + 1, value: l.to_string() });
            }
        }
        if let Some(k) = perm.reducing_prefix() {
            return Err(Error::ReduciblePermutation { perm: perm.to_string(), k });
        }
        let mut cuts = Vec::with_capacity(n + 1);
        cuts.push(S::zero());
        for k in 1..=n {
            cuts.push(S::sum_all(&lengths[..k]));
        }
        // omega_k = sum_{pi(j) < pi(k)} lambda_j - beta_{k-1}
        let offsets = (1..=n)
            .map(|k| {
                let before = (1..=n).filter(|&j| perm.image(j) < perm.image(k)).map(|j| &lengths[j - 1]);
                S::sum_all(before) - cuts[k - 1].clone()
            })
            .collect();
        Ok(Self { lengths, perm, cuts, offsets })
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    pub fn lengths(&self) -> &[S] {
        &self.lengths
    }

    /// `lambda_k` for `k` in `1..=n`.
    pub fn length(&self, k: usize) -> &S {
        &self.lengths[k - 1]
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// `beta_0, ..., beta_n`.
    pub fn cuts(&self) -> &[S] {
        &self.cuts
    }

    pub fn offsets(&self) -> &[S] {
        &self.offsets
    }

    /// `|lambda|`.
    pub fn total(&self) -> &S {
        &self.cuts[self.n()]
    }

    fn check_domain(&self, x: &S) -> Result<()> {
        if *x < S::zero() || x >= self.total() {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        Ok(())
    }

    /// The `k` with `beta_{k-1} <= x < beta_k`.
    pub fn interval_index(&self, x: &S) -> Result<usize> {
        self.check_domain(x)?;
        Ok(self.index_unchecked(x))
    }

    fn index_unchecked(&self, x: &S) -> usize {
        self.cuts[1..self.n()].partition_point(|c| c <= x) + 1
    }

    pub fn apply(&self, x: &S) -> Result<S> {
        self.check_domain(x)?;
        Ok(self.apply_unchecked(x))
    }

    fn apply_unchecked(&self, x: &S) -> S {
        let k = self.index_unchecked(x);
        let y = x.clone() + self.offsets[k - 1].clone();
        if S::is_exact() {
            return y;
        }
        // keep float orbits inside [0, |lambda|)
        self.clamp_float(y)
    }

    fn clamp_float(&self, y: S) -> S {
        if y < S::zero() {
            S::zero()
        } else if &y >= self.total() {
            // rounded up onto |lambda|: take the largest float below it
            let t = self.total().as_f64();
            S::from_f64(f64::from_bits(t.to_bits() - 1)).unwrap_or_else(S::zero)
        } else {
            y
        }
    }

    /// Applies `T` and also reports the interval index of the input.
    pub fn step(&self, x: &S) -> Result<(usize, S)> {
        self.check_domain(x)?;
        Ok((self.index_unchecked(x), self.apply_unchecked(x)))
    }

    /// `w_1 ... w_k` with `w_j` the index of `T^{j-1} x`.
    pub fn coding_word(&self, x: &S, k: usize) -> Result<Vec<usize>> {
        self.check_domain(x)?;
        let mut word = Vec::with_capacity(k);
        let mut y = x.clone();
        for _ in 0..k {
            word.push(self.index_unchecked(&y));
            y = self.apply_unchecked(&y);
        }
        Ok(word)
    }

    /// Orbit `x, Tx, ..., T^{k-1} x`.
    pub fn orbit(&self, x: &S, k: usize) -> Result<Vec<S>> {
        self.check_domain(x)?;
        let mut out = Vec::with_capacity(k);
        let mut y = x.clone();
        for _ in 0..k {
            let next = self.apply_unchecked(&y);
            out.push(y);
            y = next;
        }
        Ok(out)
    }

    /// Brute-force first return of `x` into `[0, len)`.
    pub fn first_return(&self, x: &S, len: &S, cap: u64) -> Result<FirstReturn<S>> {
        if *len <= S::zero() || len > self.total() {
            return Err(Error::OutOfDomain(format!("return interval length {len}")));
        }
        if *x < S::zero() || x >= len {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let mut word = vec![self.index_unchecked(x)];
        let mut y = self.apply_unchecked(x);
        let mut time = 1u64;
        while &y >= len {
            if time >= cap {
                return Err(Error::IterateCapExceeded(cap));
            }
            word.push(self.index_unchecked(&y));
            y = self.apply_unchecked(&y);
            time += 1;
        }
        Ok(FirstReturn { point: y, time, word })
    }

    /// The inverse exchange: lengths in image order, permutation `pi^{-1}`.
    pub fn inverse(&self) -> Self {
        let inv = self.perm.inverse();
        let lengths = (1..=self.n()).map(|p| self.lengths[inv.image(p) - 1].clone()).collect();
        Iet::new(lengths, inv).expect("inverse of an irreducible IET is irreducible")
    }

    /// Same permutation, lengths scaled to `|lambda| = 1`.
    pub fn normalized(&self) -> Self {
        let total = self.total().clone();
        let lengths = self.lengths.iter().map(|l| l.clone() / total.clone()).collect();
        Iet::new(lengths, self.perm.clone()).expect("scaling preserves validity")
    }

    /// Lengths divided by `|lambda|` as floats.
    pub fn normalized_lengths_f64(&self) -> Vec<f64> {
        let total = self.total().as_f64();
        self.lengths.iter().map(|l| l.as_f64() / total).collect()
    }

    /// Converts to a float-mode exchange.
    pub fn to_float(&self) -> Iet<f64> {
        Iet::new(self.lengths.iter().map(Scalar::as_f64).collect(), self.perm.clone())
            .expect("positive lengths stay positive")
    }
}

/// Uniformly random irreducible permutation of `1..=n` (rejection sampling).
pub fn random_irreducible_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Permutation> {
    if n < 2 {
        return Err(Error::TooFewIntervals(n));
    }
    let mut images: Vec<usize> = (1..=n).collect();
    loop {
        images.shuffle(rng);
        let p = Permutation::new(images.clone())?;
        if p.is_irreducible() {
            return Ok(p);
        }
    }
}

/// Random exact lengths `u_k / sum u` with `u_k` uniform in `1..=2^30`.
pub fn random_exact_lengths<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Rational> {
    let u: Vec<i64> = (0..n).map(|_| rng.random_range(1..=1i64 << 30)).collect();
    let total: i64 = u.iter().sum();
    u.into_iter().map(|v| ratio(v, total)).collect()
}

/// Random exact exchange on `n` intervals with an irreducible permutation.
pub fn random_exact_iet<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Iet<Rational>> {
    let perm = random_irreducible_permutation(n, rng)?;
    Iet::new(random_exact_lengths(n, rng), perm)
}

/// Golden rotation lengths `(phi - 1, 2 - phi)`.
pub fn golden_lengths() -> Vec<f64> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    vec![phi - 1.0, 2.0 - phi]
}

/// Exact Fibonacci approximant `(F_{k+1}, F_k) / F_{k+2}` of the golden
/// lengths. Its Rauzy path alternates `A, B, ...` for `k - 1` steps.
pub fn golden_approximant(k: usize) -> Vec<Rational> {
    let (mut a, mut b) = (num_bigint::BigInt::from(0), num_bigint::BigInt::from(1));
    for _ in 0..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    // a = F_k, b = F_{k+1}
    let total = &a + &b;
    vec![Rational::new(b, total.clone()), Rational::new(a, total)]
}
