//! Veech recurrence properties of the induced intervals `I^m`.

use super::rauzy_step;
use crate::error::{Error, Result};
use crate::iet::{Iet, DEFAULT_ITERATE_CAP};
use crate::scalar::{Scalar, FLOAT_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub struct P1Report {
    pub holds: bool,
    /// Largest `b` such that `T^k I^m` has no cut point in its interior for
    /// all `0 <= k < b`.
    pub b_max: u64,
    /// `eps * |lambda| / |lambda^m|`.
    pub threshold: f64,
}

/// `|lambda^m|` after `m` unnormalized steps.
fn induced_total<S: Scalar>(iet: &Iet<S>, m: usize) -> Result<S> {
    let mut cur = iet.clone();
    for _ in 0..m {
        cur = rauzy_step(&cur)?.iet;
    }
    Ok(cur.total().clone())
}

/// Property P1 at level `m`.
///
/// For `m = 0` the interval `I^0` is the whole domain, which contains every
/// cut point, so `b_max = 0` and the property holds only for `eps <= 0`.
pub fn check_p1<S: Scalar>(iet: &Iet<S>, m: usize, eps: f64) -> Result<P1Report> {
    p1_for_length(iet, &induced_total(iet, m)?, eps)
}

fn p1_for_length<S: Scalar>(iet: &Iet<S>, len: &S, eps: f64) -> Result<P1Report> {
    let threshold = eps * iet.total().as_f64() / len.as_f64();
    let slack = if S::is_exact() {
        S::zero()
    } else {
        S::from_f64(FLOAT_TOLERANCE * iet.total().as_f64()).unwrap_or_else(S::zero)
    };
    let inner = &iet.cuts()[1..iet.n()];
    let mut left = S::zero();
    let mut b = 0u64;
    loop {
        let lo = left.clone() + slack.clone();
        let hi = left.clone() + len.clone() - slack.clone();
        if inner.iter().any(|c| &lo < c && c < &hi) {
            break;
        }
        b += 1;
        if b >= DEFAULT_ITERATE_CAP {
            return Err(Error::IterateCapExceeded(DEFAULT_ITERATE_CAP));
        }
        // the whole image interval lies in one I_j, so its left end moves with it
        left = iet.apply(&left)?;
    }
    Ok(P1Report { holds: b as f64 >= threshold, b_max: b, threshold })
}

/// `(P1, P2)` at each of `levels` (ascending), computed along one path.
/// Stops at the first degenerate level; the result may then be shorter.
pub fn veech_flags<S: Scalar>(iet: &Iet<S>, levels: &[usize], eps: f64) -> Result<Vec<(bool, bool)>> {
    let mut out = Vec::with_capacity(levels.len());
    let mut cur = iet.clone();
    let mut at = 0;
    for &m in levels {
        while at < m {
            cur = match rauzy_step(&cur) {
                Ok(s) => s.iet,
                Err(Error::DegenerateLengths(_)) => return Ok(out),
                Err(e) => return Err(e),
            };
            at += 1;
        }
        let p1 = p1_for_length(iet, cur.total(), eps)?.holds;
        let p2 = cur.normalized_lengths_f64().iter().all(|&l| l >= eps);
        out.push((p1, p2));
    }
    Ok(out)
}

/// Property P2 at level `m`: every `lambda_i^m >= eps |lambda^m|`.
pub fn check_p2<S: Scalar>(iet: &Iet<S>, m: usize, eps: f64) -> Result<bool> {
    let mut cur = iet.clone();
    for _ in 0..m {
        cur = rauzy_step(&cur)?.iet;
    }
    Ok(cur.normalized_lengths_f64().iter().all(|&l| l >= eps))
}

/// Levels `m <= max_m` at which both P1 and P2 hold.
pub fn veech_set<S: Scalar>(iet: &Iet<S>, max_m: usize, eps: f64) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for m in 0..=max_m {
        match (check_p1(iet, m, eps), check_p2(iet, m, eps)) {
            (Ok(p1), Ok(true)) if p1.holds => out.push(m),
            (Err(Error::DegenerateLengths(_)), _) => break,
            (Err(e), _) | (_, Err(e)) => return Err(e),
            _ => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iet::Permutation;

    #[test]
    fn level_zero_contains_cuts() {
        let t = Iet::new(vec![0.618, 0.382], Permutation::reversal(2)).unwrap();
        let r = check_p1(&t, 0, 0.2).unwrap();
        assert_eq!(r.b_max, 0);
        assert!(!r.holds);
        assert!(check_p1(&t, 0, 0.0).unwrap().holds);
    }

    #[test]
    fn p2_bounds() {
        let t = Iet::new(vec![0.31, 0.23, 0.46], Permutation::reversal(3)).unwrap();
        for m in 0..4 {
            assert!(check_p2(&t, m, 0.0).unwrap());
            assert!(!check_p2(&t, m, 1.0).unwrap());
        }
    }

    #[test]
    fn flags_match_single_checks() {
        let t = Iet::new(vec![0.31, 0.23, 0.46], Permutation::new(vec![3, 1, 2]).unwrap()).unwrap();
        let levels = [0, 1, 2, 4, 6];
        let flags = veech_flags(&t, &levels, 0.1).unwrap();
        for (m, (p1, p2)) in levels.iter().zip(flags) {
            assert_eq!(check_p1(&t, *m, 0.1).unwrap().holds, p1);
            assert_eq!(check_p2(&t, *m, 0.1).unwrap(), p2);
        }
    }
}
