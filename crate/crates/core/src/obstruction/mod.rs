//! Rigidity functionals tracked along renormalization.
//!
//! The fixed-vector functional `ob` vanishes exactly on tuples whose images
//! under a representation share a fixed unit vector; the conjugacy
//! functional compares first components up to conjugation.

mod eigen;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

pub use eigen::{jacobi_eigen, smallest_eigenpair, smallest_eigenpair_2x2, JACOBI_TOLERANCE};

use crate::error::{Error, Result};
use crate::groups::{conj_min_distance, rep_matrix, GTuple, GroupDescriptor, GroupElement, Representation};
use crate::iet::{random_exact_iet, Permutation};
use crate::rauzy::{renormalize, ExtendedState, RauzyRule};
use crate::scalar::Scalar;
use crate::seed::child_rng;

/// Fixed-vector functional of one tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedVectorReport {
    pub m: usize,
    /// Rule of the step that produced this tuple (`None` at `m = 0`).
    pub rule: Option<RauzyRule>,
    /// Smallest eigenvalue of `M = sum_k (rho(g_k) - I)^* (rho(g_k) - I)`.
    pub lambda_min: f64,
    /// `sqrt(max(lambda_min, 0))`.
    pub surrogate: f64,
    /// Unit eigenvector for `lambda_min`.
    pub witness: DVector<Complex64>,
    /// `max_k |rho(g_k) w - w|` at the witness.
    pub ob: f64,
}

/// Conjugacy functional at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjReport {
    pub m: usize,
    pub rule: Option<RauzyRule>,
    pub value: f64,
}

/// Rows sampled along a path. A degenerate step ends the path early and is
/// kept in `stop`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    pub rows: Vec<T>,
    pub stop: Option<Error>,
}

impl<T> Series<T> {
    pub fn is_truncated(&self) -> bool {
        self.stop.is_some()
    }
}

/// `M = sum_k (rho(g_k) - I)^* (rho(g_k) - I)` and the matrices `rho(g_k)`.
pub fn fixed_vector_matrix(tuple: &[GroupElement], rep: &Representation) -> Result<(DMatrix<Complex64>, Vec<DMatrix<Complex64>>)> {
    if tuple.is_empty() {
        return Err(Error::InvalidArgument("empty tuple".into()));
    }
    let d = rep.dimension();
    let id = DMatrix::<Complex64>::identity(d, d);
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    let mut images = Vec::with_capacity(tuple.len());
    for g in tuple {
        let r = rep_matrix(rep, g)?;
        let a = &r - &id;
        m += a.adjoint() * &a;
        images.push(r);
    }
    // symmetrize away rounding so the solvers see an exactly Hermitian input
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok((m, images))
}

/// Smallest-eigenvalue witness of the fixed-vector functional.
pub fn fixed_vector_obstruction(tuple: &[GroupElement], rep: &Representation) -> Result<FixedVectorReport> {
    let (m, images) = fixed_vector_matrix(tuple, rep)?;
    let (lambda_min, witness) = smallest_eigenpair(&m);
    let ob = images.iter().map(|r| (r * &witness - &witness).norm()).fold(0.0, f64::max);
    Ok(FixedVectorReport { m: 0, rule: None, lambda_min, surrogate: lambda_min.max(0.0).sqrt(), witness, ob })
}

fn check_stride(stride: usize) -> Result<()> {
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be positive".into()));
    }
    Ok(())
}

/// `ob(g^m)` at every `stride`-th level `m = 0, stride, 2 stride, ...`.
pub fn track_fixed_vector<S: Scalar>(
    state: &ExtendedState<S, GroupElement>,
    rep: &Representation,
    steps: usize,
    stride: usize,
) -> Result<Series<FixedVectorReport>> {
    check_stride(stride)?;
    let path = renormalize(state, steps, true);
    let mut rows = Vec::new();
    for m in (0..=path.len()).step_by(stride) {
        let mut r = fixed_vector_obstruction(path.tuple_at(m), rep)?;
        r.m = m;
        r.rule = (m > 0).then(|| path.records()[m - 1].rule);
        rows.push(r);
    }
    Ok(Series { rows, stop: path.stop().cloned() })
}

fn same_base<S: Scalar>(g: &ExtendedState<S, GroupElement>, h: &ExtendedState<S, GroupElement>) -> Result<()> {
    if g.iet() != h.iet() {
        return Err(Error::MismatchedBase);
    }
    let (dg, dh) = (g.tuple()[0].descriptor(), h.tuple()[0].descriptor());
    if dg != dh {
        return Err(Error::DescriptorMismatch(format!("{dg} vs {dh}")));
    }
    Ok(())
}

fn track_conj_with<S: Scalar>(
    g: &ExtendedState<S, GroupElement>,
    h: &ExtendedState<S, GroupElement>,
    steps: usize,
    stride: usize,
    value: impl Fn(&[GroupElement], &[GroupElement]) -> Result<f64>,
) -> Result<Series<ConjReport>> {
    check_stride(stride)?;
    same_base(g, h)?;
    let path = renormalize(g, steps, true);
    let hs = path.transport(h.tuple())?;
    let mut rows = Vec::new();
    for m in (0..=path.len()).step_by(stride) {
        let rule = (m > 0).then(|| path.records()[m - 1].rule);
        rows.push(ConjReport { m, rule, value: value(path.tuple_at(m), &hs[m])? });
    }
    Ok(Series { rows, stop: path.stop().cloned() })
}

/// `c_m = min_a d(a g_1^m a^{-1}, h_1^m)`, both tuples renormalized with
/// the rule sequence of their common base.
pub fn track_conjugacy<S: Scalar>(
    g: &ExtendedState<S, GroupElement>,
    h: &ExtendedState<S, GroupElement>,
    steps: usize,
    stride: usize,
) -> Result<Series<ConjReport>> {
    track_conj_with(g, h, steps, stride, |a, b| conj_min_distance(&a[0], &b[0]))
}

/// Like [`track_conjugacy`] but reports `max_k min_a d(a g_k^m a^{-1}, h_k^m)`,
/// a lower bound for simultaneous conjugacy of the whole tuple.
pub fn track_conjugacy_all<S: Scalar>(
    g: &ExtendedState<S, GroupElement>,
    h: &ExtendedState<S, GroupElement>,
    steps: usize,
    stride: usize,
) -> Result<Series<ConjReport>> {
    track_conj_with(g, h, steps, stride, |a, b| {
        a.iter().zip(b).try_fold(0.0, |acc, (x, y)| conj_min_distance(x, y).map(|c| f64::max(acc, c)))
    })
}

/// Calibration threshold for the rigidity batches: a run whose series ends
/// below this value after a nonincreasing tail counts as decayed.
pub const FLAKE_THRESHOLD: f64 = 1e-6;
/// Tail length inspected by [`terminal_monotone_decay`].
pub const DECAY_WINDOW: usize = 5;

/// Last value below `threshold` and the final `window` values nonincreasing.
pub fn terminal_monotone_decay(values: &[f64], threshold: f64, window: usize) -> bool {
    let Some(&last) = values.last() else { return false };
    let tail = &values[values.len().saturating_sub(window.max(1))..];
    last < threshold && tail.windows(2).all(|w| w[1] <= w[0])
}

/// One run of a rigidity batch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchRun {
    pub index: usize,
    pub perm: Permutation,
    pub series: Vec<f64>,
    pub min: f64,
    pub terminal: f64,
    pub decayed: bool,
    pub truncated: bool,
}

/// Distribution of a rigidity batch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub label: String,
    pub steps: usize,
    pub threshold: f64,
    pub runs: Vec<BatchRun>,
}

impl BatchSummary {
    pub fn decayed(&self) -> usize {
        self.runs.iter().filter(|r| r.decayed).count()
    }

    pub fn truncated(&self) -> usize {
        self.runs.iter().filter(|r| r.truncated).count()
    }

    /// No run decayed below the threshold.
    pub fn passes(&self) -> bool {
        self.decayed() == 0
    }

    /// `(min, median, max)` of the per-run series minima.
    pub fn min_quantiles(&self) -> (f64, f64, f64) {
        quantiles(self.runs.iter().map(|r| r.min).collect())
    }

    /// `(min, median, max)` of the terminal values.
    pub fn terminal_quantiles(&self) -> (f64, f64, f64) {
        quantiles(self.runs.iter().map(|r| r.terminal).collect())
    }

    /// One-line summary.
    pub fn describe(&self) -> String {
        let (lo, med, hi) = self.min_quantiles();
        let (tlo, tmed, thi) = self.terminal_quantiles();
        format!(
            "{}: runs={} steps={} decayed={} truncated={} threshold={:e} (calibration) series-min [min {:.3e}, median {:.3e}, max {:.3e}] terminal [min {:.3e}, median {:.3e}, max {:.3e}]",
            self.label,
            self.runs.len(),
            self.steps,
            self.decayed(),
            self.truncated(),
            self.threshold,
            lo,
            med,
            hi,
            tlo,
            tmed,
            thi
        )
    }
}

fn quantiles(mut v: Vec<f64>) -> (f64, f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    v.sort_by(f64::total_cmp);
    (v[0], v[v.len() / 2], v[v.len() - 1])
}

fn batch<F>(label: &str, seed: u64, runs: usize, steps: usize, run: F) -> Result<BatchSummary>
where
    F: Fn(&mut crate::seed::SeededRng) -> Result<(Permutation, Series<f64>)> + Sync,
{
    let results: Vec<Result<BatchRun>> = (0..runs)
        .into_par_iter()
        .map(|index| {
            let mut rng = child_rng(seed, label, index as u64);
            let (perm, series) = run(&mut rng)?;
            let min = series.rows.iter().copied().fold(f64::INFINITY, f64::min);
            let terminal = series.rows.last().copied().unwrap_or(f64::NAN);
            let decayed = terminal_monotone_decay(&series.rows, FLAKE_THRESHOLD, DECAY_WINDOW);
            Ok(BatchRun { index, perm, min, terminal, decayed, truncated: series.is_truncated(), series: series.rows })
        })
        .collect();
    Ok(BatchSummary { label: label.to_string(), steps, threshold: FLAKE_THRESHOLD, runs: results.into_iter().collect::<Result<_>>()? })
}

/// `ob` series over random exact 3-IETs with Haar-random SU(2) tuples.
pub fn fixed_vector_batch(seed: u64, runs: usize, steps: usize, rep: &Representation) -> Result<BatchSummary> {
    let label = format!("fixed-vector {rep}");
    batch(&label, seed, runs, steps, |rng| {
        let iet = random_exact_iet(3, rng)?;
        let perm = iet.perm().clone();
        let tuple = GTuple::haar(&GroupDescriptor::Su2, 3, rng).into_elements();
        let s = track_fixed_vector(&ExtendedState::new(iet, tuple)?, rep, steps, 1)?;
        Ok((perm, Series { rows: s.rows.iter().map(|r| r.ob).collect(), stop: s.stop }))
    })
}

/// `c_m` series for independent Haar-random SU(2) tuples over random exact
/// 3-IETs.
pub fn conjugacy_batch(seed: u64, runs: usize, steps: usize) -> Result<BatchSummary> {
    batch("conjugacy su2", seed, runs, steps, |rng| {
        let iet = random_exact_iet(3, rng)?;
        let perm = iet.perm().clone();
        let g = GTuple::haar(&GroupDescriptor::Su2, 3, rng).into_elements();
        let h = GTuple::haar(&GroupDescriptor::Su2, 3, rng).into_elements();
        let gs = ExtendedState::new(iet.clone(), g)?;
        let hs = ExtendedState::new(iet, h)?;
        let s = track_conjugacy(&gs, &hs, steps, 1)?;
        Ok((perm, Series { rows: s.rows.iter().map(|r| r.value).collect(), stop: s.stop }))
    })
}
