use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{gamma_apply, rauzy_rule, rauzy_step, ExtendedState, RauzyRule, Substitution, VisitMatrix};
use crate::error::{Error, Result};
use crate::groups::GroupOp;
use crate::iet::{Iet, Permutation, DEFAULT_ITERATE_CAP};
use crate::scalar::Scalar;

/// Explicit return words longer than this are refused.
pub const MAX_EXPLICIT_WORD: u64 = 1_000_000;

/// State after one step of a renormalization path.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord<S: Scalar, E> {
    pub rule: RauzyRule,
    /// `(lambda^m, pi^m)`, rescaled to `|lambda^m| = 1` on normalized float paths.
    pub iet: Iet<S>,
    /// `M_1 ... M_m`.
    pub cumulative: VisitMatrix,
    pub substitution: Substitution,
    /// `g^m`.
    pub tuple: Vec<E>,
}

/// Iterates of the extended renormalization from an initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct RenormPath<S: Scalar, E> {
    initial: ExtendedState<S, E>,
    normalized: bool,
    records: Vec<StepRecord<S, E>>,
    stop: Option<Error>,
}

/// Runs up to `steps` extended renormalization steps.
///
/// Float paths with `normalize` rescale the lengths to total 1 after every
/// step; exact paths are never rescaled. A tie ends the path early and is
/// kept in [`RenormPath::stop`].
pub fn renormalize<S: Scalar, E: GroupOp>(state: &ExtendedState<S, E>, steps: usize, normalize: bool) -> RenormPath<S, E> {
    let normalized = normalize && !S::is_exact();
    let n = state.iet().n();
    let mut records: Vec<StepRecord<S, E>> = Vec::with_capacity(steps);
    let mut stop = None;
    for _ in 0..steps {
        let (iet, tuple, cumulative) = match records.last() {
            Some(r) => (&r.iet, r.tuple.as_slice(), Some(&r.cumulative)),
            None => (state.iet(), state.tuple(), None),
        };
        let step = match rauzy_step(iet) {
            Ok(s) => s,
            Err(e) => {
                stop = Some(e);
                break;
            }
        };
        let tuple = gamma_apply(step.rule, iet.perm(), tuple).expect("tuple length checked at construction");
        let cumulative = match cumulative {
            Some(c) => c.mul(&step.matrix),
            None => step.matrix.clone(),
        };
        let next = if normalized { step.iet.normalized() } else { step.iet };
        records.push(StepRecord { rule: step.rule, iet: next, cumulative, substitution: step.substitution, tuple });
    }
    debug_assert!(records.iter().all(|r| r.iet.n() == n));
    RenormPath { initial: state.clone(), normalized, records, stop }
}

impl<S: Scalar, E: GroupOp> RenormPath<S, E> {
    pub fn initial(&self) -> &ExtendedState<S, E> {
        &self.initial
    }

    pub fn records(&self) -> &[StepRecord<S, E>] {
        &self.records
    }

    /// Number of completed steps `m`.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Set when the path stopped before the requested step count.
    pub fn stop(&self) -> Option<&Error> {
        self.stop.as_ref()
    }

    pub fn rules(&self) -> Vec<RauzyRule> {
        self.records.iter().map(|r| r.rule).collect()
    }

    /// Exchange after `m` steps (`m = 0` is the initial exchange).
    pub fn iet_at(&self, m: usize) -> &Iet<S> {
        if m == 0 {
            self.initial.iet()
        } else {
            &self.records[m - 1].iet
        }
    }

    /// Tuple after `m` steps.
    pub fn tuple_at(&self, m: usize) -> &[E] {
        if m == 0 {
            self.initial.tuple()
        } else {
            &self.records[m - 1].tuple
        }
    }

    /// `(rule, permutation before the step)` for each step.
    pub fn moves(&self) -> impl Iterator<Item = (RauzyRule, &Permutation)> + '_ {
        self.records.iter().enumerate().map(|(i, r)| (r.rule, self.iet_at(i).perm()))
    }

    /// Applies the path's rule sequence to another tuple over the same base.
    /// Element `m` of the result is the transported tuple after `m` steps.
    pub fn transport<F: GroupOp>(&self, tuple: &[F]) -> Result<Vec<Vec<F>>> {
        let mut out = vec![tuple.to_vec()];
        for (rule, perm) in self.moves() {
            let next = gamma_apply(rule, perm, out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// First return times `l_1^m, ..., l_n^m` of the induced intervals.
    pub fn return_times(&self) -> Vec<BigUint> {
        match self.records.last() {
            Some(r) => r.cumulative.column_sums(),
            None => vec![BigUint::from(1u32); self.initial.iet().n()],
        }
    }

    /// Sequence of original intervals visited by the induced interval `j`
    /// before its first return.
    pub fn return_word(&self, j: usize) -> Result<Vec<usize>> {
        let n = self.initial.iet().n();
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        let len = &self.return_times()[j - 1];
        if len.to_u64().is_none_or(|l| l > MAX_EXPLICIT_WORD) {
            return Err(Error::WordTooLong(len.to_u128().unwrap_or(u128::MAX)));
        }
        let word = self.records.iter().rev().fold(vec![j], |w, r| r.substitution.expand(&w));
        Ok(word)
    }

    /// Replays the recorded rules from the initial state and compares.
    pub fn replay_matches(&self) -> bool
    where
        E: PartialEq,
    {
        let again = renormalize(&self.initial, self.records.len(), self.normalized);
        again.records == self.records
    }
}

/// A maximal run of equal rules.
#[derive(Debug, Clone, PartialEq)]
pub struct ZorichStep<S: Scalar> {
    pub rule: RauzyRule,
    pub count: u64,
    pub iet: Iet<S>,
    pub matrix: VisitMatrix,
}

/// Applies Rauzy steps while the rule stays the same. The run ends at the
/// first change of rule or at a tie after at least one step.
pub fn zorich_step<S: Scalar>(iet: &Iet<S>) -> Result<ZorichStep<S>> {
    let first = rauzy_step(iet)?;
    let rule = first.rule;
    let mut current = first.iet;
    let mut matrix = first.matrix;
    let mut count = 1u64;
    while let Ok(r) = rauzy_rule(&current) {
        if r != rule {
            break;
        }
        if count >= DEFAULT_ITERATE_CAP {
            return Err(Error::IterateCapExceeded(DEFAULT_ITERATE_CAP));
        }
        let step = rauzy_step(&current)?;
        matrix = matrix.mul(&step.matrix);
        current = step.iet;
        count += 1;
    }
    Ok(ZorichStep { rule, count, iet: current, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    #[derive(Debug, Clone, PartialEq)]
    struct Word(Vec<usize>);

    impl GroupOp for Word {
        fn op(&self, rhs: &Self) -> Self {
            Word(self.0.iter().chain(rhs.0.iter()).copied().collect())
        }
    }

    fn letters(n: usize) -> Vec<Word> {
        (1..=n).map(|j| Word(vec![j])).collect()
    }

    fn rotation(a: i64, b: i64) -> Iet<Rational> {
        Iet::new(vec![ratio(a, a + b), ratio(b, a + b)], Permutation::reversal(2)).unwrap()
    }

    #[test]
    fn fibonacci_approximant_alternates() {
        let k = 20;
        let t = Iet::new(crate::iet::golden_approximant(k), Permutation::reversal(2)).unwrap();
        let path = renormalize(&ExtendedState::new(t, vec![Word(vec![1]), Word(vec![2])]).unwrap(), 100, false);
        assert_eq!(path.len(), k - 1);
        assert!(matches!(path.stop(), Some(Error::DegenerateLengths(_))));
        for (i, r) in path.rules().iter().enumerate() {
            assert_eq!(*r, if i % 2 == 0 { RauzyRule::A } else { RauzyRule::B });
        }
    }

    #[test]
    fn euclid_terminates_on_rationals() {
        let state = ExtendedState::new(rotation(5, 3), letters(2)).unwrap();
        let path = renormalize(&state, 100, false);
        assert!(path.len() < 100);
        assert!(matches!(path.stop(), Some(Error::DegenerateLengths(_))));
        assert!(path.replay_matches());
    }

    #[test]
    fn zero_step_word() {
        let state = ExtendedState::new(rotation(5, 3), letters(2)).unwrap();
        let path = renormalize(&state, 0, false);
        assert_eq!(path.return_word(2).unwrap(), vec![2]);
        assert!(matches!(path.return_word(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn words_are_tuple_products() {
        // free words as tuple entries: g^m_j is literally the reversed return word
        let t = Iet::new(vec![ratio(13, 40), ratio(7, 40), ratio(11, 40), ratio(9, 40)], Permutation::reversal(4)).unwrap();
        let path = renormalize(&ExtendedState::new(t, letters(4)).unwrap(), 6, false);
        for j in 1..=4 {
            let mut word = path.return_word(j).unwrap();
            word.reverse();
            assert_eq!(path.tuple_at(path.len())[j - 1], Word(word));
        }
    }

    #[test]
    fn zorich_counts() {
        let z = zorich_step(&Iet::new(vec![0.9, 0.1], Permutation::reversal(2)).unwrap()).unwrap();
        assert_eq!((z.rule, z.count), (RauzyRule::A, 8));
        let z = zorich_step(&rotation(9, 1)).unwrap();
        assert_eq!((z.rule, z.count), (RauzyRule::A, 8));

        let t = rotation(2, 7);
        let z = zorich_step(&t).unwrap();
        let mut composed = VisitMatrix::identity(2);
        let mut cur = t;
        for _ in 0..z.count {
            let s = rauzy_step(&cur).unwrap();
            composed = composed.mul(&s.matrix);
            cur = s.iet;
        }
        assert_eq!(composed, z.matrix);
        assert_eq!(cur, z.iet);
    }
}
