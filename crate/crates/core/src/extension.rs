//! Skew products `T_phi(x, y) = (Tx, phi(x) y)` over interval exchanges,
//! the orbit random walk `a_x^k = g_{w_k} ... g_{w_1}` and the Weyl-sum,
//! ergodic-average and correlation diagnostics built on them.
//!
//! Group multiplication is always on the left, in the order written above.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{character, haar_sample, rep_matrix, GroupElement, GroupOp, Representation};
use crate::iet::Iet;
use crate::scalar::Scalar;
use crate::seed;

/// `phi(x) = g_k` for `x` in `I_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction<E> {
    values: Vec<E>,
}

impl<E: GroupOp> SimpleFunction<E> {
    pub fn new(values: Vec<E>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    pub fn eval<S: Scalar>(&self, iet: &Iet<S>, x: &S) -> Result<&E> {
        self.check(iet)?;
        Ok(&self.values[iet.interval_index(x)? - 1])
    }

    fn check<S: Scalar>(&self, iet: &Iet<S>) -> Result<()> {
        if self.values.len() != iet.n() {
            return Err(Error::LengthMismatch { expected: iet.n(), got: self.values.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewPoint<S, E = GroupElement> {
    pub x: S,
    pub y: E,
}

/// `(x, y) -> (Tx, phi(x) y)`.
pub fn skew_apply<S: Scalar, E: GroupOp>(iet: &Iet<S>, phi: &SimpleFunction<E>, p: &SkewPoint<S, E>) -> Result<SkewPoint<S, E>> {
    phi.check(iet)?;
    let (k, x) = iet.step(&p.x)?;
    Ok(SkewPoint { x, y: phi.values[k - 1].op(&p.y) })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WalkOptions {
    /// Keep every `s`-th atom `a_x^{s}, a_x^{2s}, ...`.
    pub atom_stride: Option<u64>,
    /// Record the running Weyl sums every `s` steps (and at the last step).
    pub trace_stride: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSnapshot {
    pub k: u64,
    /// `S_k` per representation.
    pub weyl: Vec<Complex64>,
}

/// Streaming summary of the walk `a_x^1, ..., a_x^K`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkRecord {
    pub k: u64,
    pub reps: Vec<Representation>,
    /// `sum_{j <= k} chi(a_x^j)` per representation.
    pub sums: Vec<Complex64>,
    pub atoms: Vec<GroupElement>,
    pub trace: Vec<WalkSnapshot>,
    pub last: GroupElement,
}

impl WalkRecord {
    /// `S_k = sums / k`, the empirical measure tested against each character.
    pub fn weyl_sums(&self) -> Vec<Complex64> {
        self.sums.iter().map(|s| s / self.k as f64).collect()
    }

    /// True when every `|S_k|` sits at the representation dimension, i.e.
    /// the walk never left the kernel of the tested characters.
    pub fn is_degenerate(&self) -> bool {
        self.weyl_sums().iter().zip(&self.reps).all(|(s, r)| (s.norm() - r.dimension() as f64).abs() < 1e-9)
    }
}

/// Runs the walk along the orbit of `x` for `steps` steps.
pub fn walk<S: Scalar>(
    iet: &Iet<S>,
    tuple: &[GroupElement],
    x: &S,
    steps: u64,
    reps: &[Representation],
    options: &WalkOptions,
) -> Result<WalkRecord> {
    if steps == 0 {
        return Err(Error::InvalidArgument("walk needs at least one step".into()));
    }
    if tuple.len() != iet.n() {
        return Err(Error::LengthMismatch { expected: iet.n(), got: tuple.len() });
    }
    let desc = tuple[0].descriptor();
    if let Some(r) = reps.iter().find(|r| !r.fits(&desc)) {
        return Err(Error::DescriptorMismatch(format!("representation {r} on {desc}")));
    }
    let mut a = GroupElement::identity(&desc);
    let mut point = x.clone();
    let mut sums = vec![Complex64::new(0.0, 0.0); reps.len()];
    let mut atoms = Vec::new();
    let mut trace = Vec::new();
    for k in 1..=steps {
        let (w, next) = iet.step(&point)?;
        a = tuple[w - 1].op(&a);
        point = next;
        for (s, r) in sums.iter_mut().zip(reps) {
            *s += character(r, &a)?;
        }
        if options.atom_stride.is_some_and(|s| k % s == 0) {
            atoms.push(a.clone());
        }
        if let Some(s) = options.trace_stride {
            if k % s == 0 || k == steps {
                trace.push(WalkSnapshot { k, weyl: sums.iter().map(|v| v / k as f64).collect() });
            }
        }
    }
    Ok(WalkRecord { k: steps, reps: reps.to_vec(), sums, atoms, trace, last: a })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableMode {
    Character,
    /// Matrix coefficient `(p, q)`, 0-based.
    Entry(usize, usize),
}

/// Test function `e^{2 pi i l x / |lambda|} * f(y)` with `f` a character or
/// a matrix coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub frequency: i64,
    pub rep: Representation,
    pub mode: ObservableMode,
}

impl Observable {
    pub fn character(frequency: i64, rep: Representation) -> Self {
        Self { frequency, rep, mode: ObservableMode::Character }
    }

    /// `x_fraction` is `x / |lambda|`.
    pub fn eval(&self, x_fraction: f64, y: &GroupElement) -> Result<Complex64> {
        let base = if self.frequency == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, TAU * self.frequency as f64 * x_fraction)
        };
        let fiber = match self.mode {
            ObservableMode::Character => character(&self.rep, y)?,
            ObservableMode::Entry(p, q) => {
                let m = rep_matrix(&self.rep, y)?;
                if p >= m.nrows() || q >= m.ncols() {
                    return Err(Error::IndexOutOfRange { index: p.max(q) + 1, n: m.nrows() });
                }
                m[(p, q)]
            }
        };
        Ok(base * fiber)
    }

    fn at<S: Scalar>(&self, iet: &Iet<S>, p: &SkewPoint<S>) -> Result<Complex64> {
        self.eval(p.x.as_f64() / iet.total().as_f64(), &p.y)
    }
}

/// `(1/N) sum_{j < N} obs(T_phi^j p0)`.
pub fn birkhoff_average<S: Scalar>(
    iet: &Iet<S>,
    phi: &SimpleFunction<GroupElement>,
    obs: &Observable,
    p0: &SkewPoint<S>,
    n: u64,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("average needs at least one point".into()));
    }
    let mut p = p0.clone();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        acc += obs.at(iet, &p)?;
        if j + 1 < n {
            p = skew_apply(iet, phi, &p)?;
        }
    }
    Ok(acc / n as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    /// `|corr_j|` for `j = 1..=N`.
    pub correlations: Vec<f64>,
    /// Cesaro means `C_j = (1/j) sum_{i <= j} |corr_i|`.
    pub cesaro: Vec<f64>,
    /// Monte Carlo error scale `3 / sqrt(M)`.
    pub noise_bound: f64,
    pub mean: Complex64,
}

impl CorrelationReport {
    pub fn final_cesaro(&self) -> f64 {
        *self.cesaro.last().expect("at least one lag")
    }
}

const CORRELATION_CHUNK: usize = 64;

/// Monte Carlo correlations of `obs` under `T_phi` over `samples` initial
/// points (`x` uniform, `y` Haar), lags `1..=lags`.
pub fn correlation_cesaro<S: Scalar, R: Rng + ?Sized>(
    iet: &Iet<S>,
    phi: &SimpleFunction<GroupElement>,
    obs: &Observable,
    lags: usize,
    samples: usize,
    rng: &mut R,
) -> Result<CorrelationReport> {
    if lags == 0 || samples == 0 {
        return Err(Error::InvalidArgument("correlation needs lags >= 1 and samples >= 1".into()));
    }
    phi.check(iet)?;
    let desc = phi.values()[0].descriptor();
    let total = iet.total().as_f64();
    let base: u64 = rng.random();
    let points: Vec<SkewPoint<S>> = (0..samples)
        .map(|i| {
            let mut r = seed::child_rng(base, "correlation", i as u64);
            let x = S::from_f64(r.random::<f64>() * total).unwrap_or_else(S::zero);
            let x = if &x >= iet.total() { S::zero() } else { x };
            SkewPoint { x, y: haar_sample(&desc, &mut r) }
        })
        .collect();

    // per-chunk partial sums, merged in chunk order for reproducibility
    let partials: Vec<Result<(Complex64, Vec<Complex64>)>> = points
        .par_chunks(CORRELATION_CHUNK)
        .map(|chunk| {
            let mut mean = Complex64::new(0.0, 0.0);
            let mut acc = vec![Complex64::new(0.0, 0.0); lags];
            for p0 in chunk {
                let f0 = obs.at(iet, p0)?;
                mean += f0;
                let mut p = p0.clone();
                for slot in acc.iter_mut() {
                    p = skew_apply(iet, phi, &p)?;
                    *slot += obs.at(iet, &p)? * f0.conj();
                }
            }
            Ok((mean, acc))
        })
        .collect();
    let mut mean = Complex64::new(0.0, 0.0);
    let mut acc = vec![Complex64::new(0.0, 0.0); lags];
    for part in partials {
        let (m, a) = part?;
        mean += m;
        for (s, v) in acc.iter_mut().zip(a) {
            *s += v;
        }
    }
    let m = samples as f64;
    let mean = mean / m;
    let correlations: Vec<f64> = acc.iter().map(|s| (s / m - mean.norm_sqr()).norm()).collect();
    let mut cesaro = Vec::with_capacity(lags);
    let mut running = 0.0;
    for (j, c) in correlations.iter().enumerate() {
        running += c;
        cesaro.push(running / (j + 1) as f64);
    }
    Ok(CorrelationReport { correlations, cesaro, noise_bound: 3.0 / m.sqrt(), mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Angle, GroupDescriptor, GTuple, Quat};
    use crate::iet::Permutation;
    use crate::scalar::{ratio, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn golden() -> Iet<f64> {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        Iet::new(vec![phi - 1.0, 2.0 - phi], Permutation::reversal(2)).unwrap()
    }

    #[test]
    fn identity_fiber_is_frozen() {
        let t = golden();
        let phi = SimpleFunction::new(GTuple::identity(&GroupDescriptor::Su2, 2).into_elements());
        let y = GroupElement::Su2(Quat::new(0.5, 0.5, 0.5, 0.5));
        let mut p = SkewPoint { x: 0.3, y: y.clone() };
        for _ in 0..100 {
            p = skew_apply(&t, &phi, &p).unwrap();
            assert_eq!(p.y, y);
        }
    }

    #[test]
    fn left_multiplication_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = GTuple::haar(&GroupDescriptor::Su2, 2, &mut rng).into_elements();
        let t = golden();
        let phi = SimpleFunction::new(g.clone());
        let y = haar_sample(&GroupDescriptor::Su2, &mut rng);
        let p = skew_apply(&t, &phi, &SkewPoint { x: 0.1, y: y.clone() }).unwrap();
        assert_eq!(p.y, g[0].op(&y));
        assert_ne!(p.y, y.op(&g[0]));
    }

    #[test]
    fn walk_recursion_matches_direct_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = Iet::new(vec![ratio(3, 11), ratio(5, 11), ratio(3, 11)], Permutation::new(vec![3, 1, 2]).unwrap()).unwrap();
        let g = GTuple::haar(&GroupDescriptor::Su2, 3, &mut rng).into_elements();
        let x = ratio(1, 7);
        let word = t.coding_word(&x, 1000).unwrap();
        let rec = walk(&t, &g, &x, 1000, &[Representation::spin_half()], &WalkOptions { atom_stride: Some(1), trace_stride: None }).unwrap();
        let e = GroupElement::identity(&GroupDescriptor::Su2);
        for k in [1usize, 2, 10, 500, 1000] {
            let direct = word[..k].iter().fold(e.clone(), |acc, &w| g[w - 1].op(&acc));
            assert!(direct.distance(&rec.atoms[k - 1]).unwrap() < 1e-12);
        }
        assert!(rec.weyl_sums()[0].norm() <= 2.0);
    }

    #[test]
    fn identity_walk_is_degenerate() {
        let t = golden();
        let g = GTuple::identity(&GroupDescriptor::U1, 2).into_elements();
        let rec = walk(&t, &g, &0.2, 50, &[Representation::U1(1)], &WalkOptions::default()).unwrap();
        assert_eq!(rec.weyl_sums()[0], Complex64::new(1.0, 0.0));
        assert!(rec.is_degenerate());
    }

    #[test]
    fn constant_tuple_walk_is_a_rotation() {
        // a_x^k = c^k, |S_k| <= 2 / (k |1 - e^{2 pi i beta}|)
        let beta = 0.3271;
        let c = GroupElement::U1(Angle::from_turns(beta));
        let t = golden();
        let k = 5000u64;
        let rec = walk(&t, &[c.clone(), c], &0.0, k, &[Representation::U1(1)], &WalkOptions::default()).unwrap();
        let bound = 2.0 / (k as f64 * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, TAU * beta)).norm());
        assert!(rec.weyl_sums()[0].norm() <= bound + 1e-12);
    }

    #[test]
    fn birkhoff_trivial_cases() {
        let t = golden();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = GTuple::haar(&GroupDescriptor::U1, 2, &mut rng).into_elements();
        let p0 = SkewPoint { x: 0.25, y: haar_sample(&GroupDescriptor::U1, &mut rng) };
        let one = Observable::character(0, Representation::U1(0));
        let avg = birkhoff_average(&t, &SimpleFunction::new(g), &one, &p0, 1000).unwrap();
        assert_eq!(avg, Complex64::new(1.0, 0.0));

        let frozen = SimpleFunction::new(GTuple::identity(&GroupDescriptor::U1, 2).into_elements());
        let chi = Observable::character(0, Representation::U1(1));
        let avg = birkhoff_average(&t, &frozen, &chi, &p0, 1000).unwrap();
        assert!((avg - character(&Representation::U1(1), &p0.y).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn static_fiber_correlation_is_one() {
        let t = golden();
        let frozen = SimpleFunction::new(GTuple::identity(&GroupDescriptor::U1, 2).into_elements());
        let chi = Observable::character(0, Representation::U1(1));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rep = correlation_cesaro(&t, &frozen, &chi, 20, 500, &mut rng).unwrap();
        // corr_j = 1 - |mean|^2 with mean ~ 0
        assert!(rep.correlations.iter().all(|c| (c - 1.0).abs() < rep.noise_bound));
        assert!((rep.final_cesaro() - 1.0).abs() < rep.noise_bound);
    }

    #[test]
    fn skew_product_preserves_product_measure() {
        let t = Iet::new(vec![0.31, 0.27, 0.42], Permutation::new(vec![3, 1, 2]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phi = SimpleFunction::new(GTuple::haar(&GroupDescriptor::Su2, 3, &mut rng).into_elements());
        let n = 10_000;
        let obs = [
            Observable::character(1, Representation::Su2 { two_j: 0 }),
            Observable::character(0, Representation::spin_half()),
            Observable::character(2, Representation::spin_one()),
        ];
        let mut sums = [Complex64::new(0.0, 0.0); 3];
        for _ in 0..n {
            let p = SkewPoint { x: rng.random::<f64>(), y: haar_sample(&GroupDescriptor::Su2, &mut rng) };
            let q = skew_apply(&t, &phi, &p).unwrap();
            for (s, o) in sums.iter_mut().zip(&obs) {
                *s += o.at(&t, &q).unwrap();
            }
        }
        for s in sums {
            assert!((s / n as f64).norm() <= 5.0 / (n as f64).sqrt());
        }
    }

    #[test]
    fn exact_skew_orbits() {
        let t = Iet::new(vec![ratio(1, 3), ratio(2, 3)], Permutation::reversal(2)).unwrap();
        let phi = SimpleFunction::new(vec![GroupElement::U1(Angle::from_fraction(1, 8)), GroupElement::U1(Angle::from_fraction(3, 8))]);
        let mut p = SkewPoint { x: Rational::from_integer(0.into()), y: GroupElement::U1(Angle::ZERO) };
        for _ in 0..3 {
            p = skew_apply(&t, &phi, &p).unwrap();
        }
        // period-3 orbit visits I_1 once and I_2 twice
        assert_eq!(p.x, Rational::from_integer(0.into()));
        assert_eq!(p.y, GroupElement::U1(Angle::from_fraction(7, 8)));
    }
}
