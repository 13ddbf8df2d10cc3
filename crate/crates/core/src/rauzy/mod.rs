//! Rauzy-Veech induction and its extension to group-valued tuples.
//!
//! One induction step cuts the domain `[0, |lambda|)` down to the first
//! return domain and replaces the exchange by its first return map. The
//! same step acts on a tuple `(g_1, ..., g_n)` by the Rauzy maps A and B;
//! both are driven by the rule, which depends only on `(lambda, pi)`.

mod path;
mod veech;

pub use path::{renormalize, zorich_step, RenormPath, StepRecord, ZorichStep};
pub use veech::{check_p1, check_p2, veech_flags, veech_set, P1Report};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::groups::GroupOp;
use crate::iet::{Iet, Permutation};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RauzyRule {
    /// `lambda_n < lambda_{pi^{-1}(n)}`: the last interval is cut away.
    A,
    /// `lambda_n > lambda_{pi^{-1}(n)}`: the interval landing last is cut away.
    B,
}

impl fmt::Display for RauzyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RauzyRule::A => write!(f, "A"),
            RauzyRule::B => write!(f, "B"),
        }
    }
}

/// Nonnegative integer matrix with `lambda_old = M * lambda_new`.
///
/// Entry `(i, j)` counts the visits of the induced interval `j` to the
/// original interval `i` before its first return, so column sums are return
/// times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitMatrix {
    n: usize,
    entries: Vec<BigUint>,
}

impl VisitMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigUint::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigUint::one();
        }
        Self { n, entries }
    }

    pub fn from_substitution(sub: &Substitution) -> Self {
        let n = sub.n();
        let mut entries = vec![BigUint::zero(); n * n];
        for j in 1..=n {
            for &i in sub.word(j) {
                entries[(i - 1) * n + (j - 1)] += 1u32;
            }
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn mul(&self, rhs: &VisitMatrix) -> VisitMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut entries = vec![BigUint::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        VisitMatrix { n, entries }
    }

    /// Column sums, i.e. first return times of the induced intervals.
    pub fn column_sums(&self) -> Vec<BigUint> {
        (1..=self.n).map(|j| (1..=self.n).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn apply_exact(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n);
        (1..=self.n)
            .map(|i| {
                (1..=self.n).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(BigInt::from(self.get(i, j).clone())) * v[j - 1].clone()
                })
            })
            .collect()
    }

    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut m: Vec<BigRational> =
            self.entries.iter().map(|e| BigRational::from_integer(BigInt::from(e.clone()))).collect();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return BigInt::zero();
            };
            if pivot != col {
                for c in 0..n {
                    m.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = m[col * n + col].clone();
            det *= p.clone();
            for r in col + 1..n {
                let factor = m[r * n + col].clone() / p.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let delta = factor.clone() * m[col * n + c].clone();
                    m[r * n + c] -= delta;
                }
            }
        }
        det.to_integer()
    }

    /// Largest entry, as `u128` when it fits.
    pub fn max_entry(&self) -> Option<u128> {
        self.entries.iter().max().and_then(|e| e.to_u128())
    }
}

/// Words over old interval indices, one per new interval, in visiting order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    words: Vec<Vec<usize>>,
}

impl Substitution {
    pub fn new(words: Vec<Vec<usize>>) -> Self {
        Self { words }
    }

    pub fn identity(n: usize) -> Self {
        Self { words: (1..=n).map(|j| vec![j]).collect() }
    }

    pub fn n(&self) -> usize {
        self.words.len()
    }

    /// Word of the new interval `j`, 1-based.
    pub fn word(&self, j: usize) -> &[usize] {
        &self.words[j - 1]
    }

    /// Substitutes every letter of `word` by its image word.
    pub fn expand(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&l| self.word(l).iter().copied()).collect()
    }
}

/// One induction step.
#[derive(Debug, Clone, PartialEq)]
pub struct RauzyStep<S: Scalar> {
    pub rule: RauzyRule,
    pub iet: Iet<S>,
    pub matrix: VisitMatrix,
    pub substitution: Substitution,
}

/// The rule that applies to `iet`, or `DegenerateLengths` on a tie.
pub fn rauzy_rule<S: Scalar>(iet: &Iet<S>) -> Result<RauzyRule> {
    let n = iet.n();
    let k = iet.perm().preimage(n);
    let (last, landing) = (iet.length(n), iet.length(k));
    if S::ties(last, landing, iet.total()) {
        return Err(Error::DegenerateLengths(k));
    }
    Ok(if last < landing { RauzyRule::A } else { RauzyRule::B })
}

/// Permutation after one step of the given rule.
pub fn rauzy_permutation(rule: RauzyRule, perm: &Permutation) -> Permutation {
    let n = perm.n();
    let k = perm.preimage(n);
    let images = match rule {
        RauzyRule::A => (1..=n)
            .map(|j| match j {
                j if j < k => perm.image(j),
                j if j == k => n,
                j if j == k + 1 => perm.image(n),
                j => perm.image(j - 1),
            })
            .collect(),
        RauzyRule::B => {
            let last = perm.image(n);
            (1..=n)
                .map(|j| match j {
                    j if j == n => last,
                    j if j == k => last + 1,
                    j if perm.image(j) < last => perm.image(j),
                    j => perm.image(j) + 1,
                })
                .collect()
        }
    };
    Permutation::new(images).expect("Rauzy moves map permutations to permutations")
}

/// Return words of one step of the given rule.
pub fn rauzy_substitution(rule: RauzyRule, perm: &Permutation) -> Substitution {
    let n = perm.n();
    let k = perm.preimage(n);
    let words = match rule {
        RauzyRule::A => (1..=n)
            .map(|j| match j {
                j if j <= k => vec![j],
                j if j == k + 1 => vec![k, n],
                j => vec![j - 1],
            })
            .collect(),
        RauzyRule::B => (1..=n).map(|j| if j == k { vec![k, n] } else { vec![j] }).collect(),
    };
    Substitution::new(words)
}

/// One Rauzy-Veech induction step, without rescaling.
pub fn rauzy_step<S: Scalar>(iet: &Iet<S>) -> Result<RauzyStep<S>> {
    let rule = rauzy_rule(iet)?;
    let n = iet.n();
    let perm = iet.perm();
    let k = perm.preimage(n);
    let lam = |j: usize| iet.length(j).clone();
    let lengths: Vec<S> = match rule {
        RauzyRule::A => (1..=n)
            .map(|j| match j {
                j if j < k => lam(j),
                j if j == k => lam(k) - lam(n),
                j if j == k + 1 => lam(n),
                j => lam(j - 1),
            })
            .collect(),
        RauzyRule::B => (1..=n).map(|j| if j == n { lam(n) - lam(k) } else { lam(j) }).collect(),
    };
    let substitution = rauzy_substitution(rule, perm);
    let next = Iet::new(lengths, rauzy_permutation(rule, perm))?;
    Ok(RauzyStep { rule, iet: next, matrix: VisitMatrix::from_substitution(&substitution), substitution })
}

/// The Rauzy map A or B on `G^n`; `perm` is the permutation before the step.
pub fn gamma_apply<E: GroupOp>(rule: RauzyRule, perm: &Permutation, tuple: &[E]) -> Result<Vec<E>> {
    let n = perm.n();
    if tuple.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: tuple.len() });
    }
    let k = perm.preimage(n);
    let g = |j: usize| &tuple[j - 1];
    let out = match rule {
        RauzyRule::A => (1..=n)
            .map(|j| match j {
                j if j <= k => g(j).clone(),
                j if j == k + 1 => g(n).op(g(k)),
                j => g(j - 1).clone(),
            })
            .collect(),
        RauzyRule::B => (1..=n).map(|j| if j == k { g(n).op(g(k)) } else { g(j).clone() }).collect(),
    };
    Ok(out)
}

/// `g_{w_L} ... g_{w_2} g_{w_1}`: the first letter is the rightmost factor.
pub fn ordered_product<E: GroupOp>(word: &[usize], tuple: &[E]) -> E {
    let (first, rest) = word.split_first().expect("return words are nonempty");
    rest.iter().fold(tuple[first - 1].clone(), |acc, &l| tuple[l - 1].op(&acc))
}

/// An exchange together with a tuple in `G^n`: the point moved by the
/// extended renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedState<S: Scalar, E> {
    iet: Iet<S>,
    tuple: Vec<E>,
}

impl<S: Scalar, E: GroupOp> ExtendedState<S, E> {
    pub fn new(iet: Iet<S>, tuple: Vec<E>) -> Result<Self> {
        if tuple.len() != iet.n() {
            return Err(Error::LengthMismatch { expected: iet.n(), got: tuple.len() });
        }
        Ok(Self { iet, tuple })
    }

    pub fn iet(&self) -> &Iet<S> {
        &self.iet
    }

    pub fn tuple(&self) -> &[E] {
        &self.tuple
    }

    pub fn into_parts(self) -> (Iet<S>, Vec<E>) {
        (self.iet, self.tuple)
    }
}

/// One step of the extended renormalization: Rauzy step on the exchange and
/// the matching Rauzy map on the tuple.
pub fn extended_step<S: Scalar, E: GroupOp>(state: &ExtendedState<S, E>) -> Result<(RauzyRule, ExtendedState<S, E>)> {
    let step = rauzy_step(&state.iet)?;
    let tuple = gamma_apply(step.rule, state.iet.perm(), &state.tuple)?;
    Ok((step.rule, ExtendedState { iet: step.iet, tuple }))
}
