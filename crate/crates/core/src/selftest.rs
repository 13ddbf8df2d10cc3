//! Oracle suites run by `gext selftest`.
//!
//! Each check returns its raw statistics; [`run_suites`] turns them into
//! pass/fail lines at fixed sizes and tolerances.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::{
    character, conj_min_distance, conj_min_distance_sampled, haar_sample, nielsen_alpha, nielsen_beta, rep_matrix, GTuple,
    GroupDescriptor, GroupElement, Quat, Representation,
};
use crate::iet::{random_exact_iet, Iet, Permutation};
use crate::obstruction::{
    conjugacy_batch, fixed_vector_batch, fixed_vector_matrix, fixed_vector_obstruction, track_conjugacy, BatchSummary,
};
use crate::rauzy::{gamma_apply, ordered_product, rauzy_step, renormalize, ExtendedState, RauzyRule, RauzyStep};
use crate::scalar::{ratio, Rational};
use crate::seed::child_rng;

/// One Rauzy step on an exact exchange; injectable so that the first-return
/// oracle can be run against deliberately broken steps.
pub type StepFn = dyn Fn(&Iet<Rational>) -> Result<RauzyStep<Rational>> + Sync;

/// The library's own step.
pub fn library_step(iet: &Iet<Rational>) -> Result<RauzyStep<Rational>> {
    rauzy_step(iet)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstReturnStats {
    pub iets: usize,
    pub points: usize,
    /// Points whose return point, time or word disagreed.
    pub mismatches: usize,
    /// Draws discarded because the step was degenerate.
    pub ties: usize,
}

/// Steps `iets` random exact exchanges (`n` in `2..=5`) once and compares the
/// induced map with brute-force first return at `points` exact points each.
pub fn first_return_check(seed: u64, iets: usize, points: usize, step: &StepFn) -> Result<FirstReturnStats> {
    let mut stats = FirstReturnStats { iets: 0, points: 0, mismatches: 0, ties: 0 };
    let mut index = 0u64;
    while stats.iets < iets {
        let mut rng = child_rng(seed, "first-return", index);
        index += 1;
        let n = rng.random_range(2..=5);
        let iet = random_exact_iet(n, &mut rng)?;
        let stepped = match step(&iet) {
            Ok(s) => s,
            Err(Error::DegenerateLengths(_)) => {
                stats.ties += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        stats.iets += 1;
        let len = stepped.iet.total().clone();
        let times = stepped.matrix.column_sums();
        for _ in 0..points {
            let u: i64 = rng.random_range(0..1 << 20);
            let x = len.clone() * ratio(u, 1 << 20);
            stats.points += 1;
            let brute = iet.first_return(&x, &len, 1_000)?;
            let j = stepped.iet.interval_index(&x)?;
            let ok = stepped.iet.apply(&x)? == brute.point
                && times[j - 1] == brute.time.into()
                && stepped.substitution.word(j) == brute.word.as_slice();
            if !ok {
                stats.mismatches += 1;
            }
        }
    }
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocycleStats {
    pub states: usize,
    pub components: usize,
    /// Torus components whose tracked value differs from the word product.
    pub torus_mismatches: usize,
    /// Largest Frobenius error of the spin-1/2 matrices on SU(2) components.
    pub su2_max_error: f64,
    /// Paths that ended early on a tie.
    pub truncated: usize,
}

/// Random extended states (half SU(2), half `T^2`), `steps` steps each:
/// every tracked `g_k^m` is compared with the product along `return_word(k)`.
pub fn cocycle_check(seed: u64, states: usize, steps: usize) -> Result<CocycleStats> {
    let mut stats = CocycleStats { states, components: 0, torus_mismatches: 0, su2_max_error: 0.0, truncated: 0 };
    let spin_half = Representation::spin_half();
    for i in 0..states {
        let mut rng = child_rng(seed, "cocycle", i as u64);
        let desc = if i % 2 == 0 { GroupDescriptor::Su2 } else { GroupDescriptor::Torus(2) };
        let n = rng.random_range(2..=5);
        let iet = random_exact_iet(n, &mut rng)?;
        let tuple = GTuple::haar(&desc, n, &mut rng).into_elements();
        let path = renormalize(&ExtendedState::new(iet, tuple.clone())?, steps, false);
        if path.stop().is_some() {
            stats.truncated += 1;
        }
        let tracked = path.tuple_at(path.len());
        for k in 1..=n {
            let direct = ordered_product(&path.return_word(k)?, &tuple);
            stats.components += 1;
            if desc == GroupDescriptor::Su2 {
                let err = (rep_matrix(&spin_half, &direct)? - rep_matrix(&spin_half, &tracked[k - 1])?).norm();
                stats.su2_max_error = stats.su2_max_error.max(err);
            } else if direct != tracked[k - 1] {
                stats.torus_mismatches += 1;
            }
        }
    }
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarStats {
    pub samples: usize,
    pub tests: usize,
    pub max_deviation: f64,
    /// `5 / sqrt(samples)`.
    pub bound: f64,
    pub worst: String,
}

type TupleMap = Box<dyn Fn(&[GroupElement]) -> Result<Vec<GroupElement>>>;

fn tuple_maps() -> Vec<(String, TupleMap)> {
    let mut maps: Vec<(String, TupleMap)> = vec![
        ("alpha(1,2)".into(), Box::new(|t: &[GroupElement]| nielsen_alpha(t, 1, 2))),
        ("alpha(1,3)".into(), Box::new(|t: &[GroupElement]| nielsen_alpha(t, 1, 3))),
        ("alpha(2,3)".into(), Box::new(|t: &[GroupElement]| nielsen_alpha(t, 2, 3))),
        ("beta".into(), Box::new(|t: &[GroupElement]| nielsen_beta(t))),
    ];
    for images in [[3, 1, 2], [2, 3, 1], [3, 2, 1]] {
        let perm = Permutation::new(images.to_vec()).expect("valid permutation");
        for rule in [RauzyRule::A, RauzyRule::B] {
            let p = perm.clone();
            maps.push((format!("{rule}{perm}"), Box::new(move |t: &[GroupElement]| gamma_apply(rule, &p, t))));
        }
    }
    maps
}

fn test_reps(desc: &GroupDescriptor) -> Vec<Representation> {
    match desc {
        GroupDescriptor::Su2 => (1..=3).map(|two_j| Representation::Su2 { two_j }).collect(),
        GroupDescriptor::U1 => (1..=3).map(Representation::U1).collect(),
        _ => vec![Representation::Torus(vec![1, 0]), Representation::Torus(vec![0, 1]), Representation::Torus(vec![1, -1])],
    }
}

/// Pushes `samples` Haar triples in `G^3` through each Nielsen map and each
/// of `A`, `B`; tests the means of nontrivial characters of single
/// components and of component pairs.
pub fn haar_check(seed: u64, samples: usize) -> Result<HaarStats> {
    let maps = tuple_maps();
    let mut stats = HaarStats { samples, tests: 0, max_deviation: 0.0, bound: 5.0 / (samples as f64).sqrt(), worst: String::new() };
    for desc in [GroupDescriptor::Su2, GroupDescriptor::U1, GroupDescriptor::Torus(2)] {
        let reps = test_reps(&desc);
        let mut rng = child_rng(seed, &format!("haar {desc}"), 0);
        let inputs: Vec<Vec<GroupElement>> = (0..samples).map(|_| GTuple::haar(&desc, 3, &mut rng).into_elements()).collect();
        for (name, map) in &maps {
            // (label, running sum)
            let mut sums: Vec<(String, num_complex::Complex64)> = Vec::new();
            for t in &inputs {
                let h = map(t)?;
                let mut slot = 0;
                let mut push = |label: &dyn Fn() -> String, v: num_complex::Complex64| {
                    if sums.len() <= slot {
                        sums.push((label(), v));
                    } else {
                        sums[slot].1 += v;
                    }
                    slot += 1;
                };
                for (k, hk) in h.iter().enumerate() {
                    for r in &reps {
                        push(&|| format!("chi_{r}(h_{})", k + 1), character(r, hk)?);
                    }
                }
                for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                    let r = &reps[0];
                    push(&|| format!("chi_{r}(h_{}) chi_{r}(h_{})", a + 1, b + 1), character(r, &h[a])? * character(r, &h[b])?);
                }
            }
            for (label, s) in sums {
                stats.tests += 1;
                let dev = (s / samples as f64).norm();
                if dev > stats.max_deviation {
                    stats.max_deviation = dev;
                    stats.worst = format!("{desc} {name} {label}");
                }
            }
        }
    }
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionStats {
    pub identity_max_ob: f64,
    pub shared_axis_max_ob: f64,
    pub haar_draws: usize,
    pub haar_above: usize,
    pub haar_min_ob: f64,
    /// Largest gap between the closed-form `lambda_min` and the sphere grid.
    pub grid_max_gap: f64,
    /// Largest gap between the closed-form conjugacy distance and sampling.
    pub conj_max_gap: f64,
    pub conj_self_max: f64,
    pub conj_global_max: f64,
}

fn fibonacci_bloch_grid(points: usize) -> Vec<nalgebra::DVector<num_complex::Complex64>> {
    use num_complex::Complex64;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..points)
        .map(|i| {
            let theta = (1.0 - 2.0 * (i as f64 + 0.5) / points as f64).acos();
            let phi = golden * i as f64;
            nalgebra::DVector::from_vec(vec![
                Complex64::new((theta / 2.0).cos(), 0.0),
                Complex64::from_polar((theta / 2.0).sin(), phi),
            ])
        })
        .collect()
}

/// Cross-checks of both functionals: `draws` random cases per check, grid
/// and sampling oracles with `oracle_points` points.
pub fn obstruction_check(seed: u64, draws: usize, oracle_points: usize, steps: usize) -> Result<ObstructionStats> {
    let su2 = GroupDescriptor::Su2;
    let (half, one) = (Representation::spin_half(), Representation::spin_one());
    let u1_su2 = GroupDescriptor::Product(vec![GroupDescriptor::U1, GroupDescriptor::Su2]);
    let twisted_rep = Representation::Product(vec![Representation::U1(1), half.clone()]);
    let mut rng = child_rng(seed, "obstruction", 0);
    let mut s = ObstructionStats {
        identity_max_ob: 0.0,
        shared_axis_max_ob: 0.0,
        haar_draws: draws,
        haar_above: 0,
        haar_min_ob: f64::INFINITY,
        grid_max_gap: 0.0,
        conj_max_gap: 0.0,
        conj_self_max: 0.0,
        conj_global_max: 0.0,
    };
    for n in 1..=5 {
        for rep in [&half, &one] {
            let ob = fixed_vector_obstruction(&vec![GroupElement::identity(&su2); n], rep)?.ob;
            s.identity_max_ob = s.identity_max_ob.max(ob);
        }
    }
    let grid = fibonacci_bloch_grid(oracle_points);
    for _ in 0..draws {
        let axis = match haar_sample(&su2, &mut rng) {
            GroupElement::Su2(q) => [q.x, q.y, q.z],
            _ => unreachable!("su2 sample"),
        };
        let shared: Vec<GroupElement> =
            (0..3).map(|_| GroupElement::Su2(Quat::from_axis_half_angle(axis, rng.random_range(0.0..std::f64::consts::PI)))).collect();
        s.shared_axis_max_ob = s.shared_axis_max_ob.max(fixed_vector_obstruction(&shared, &one)?.ob);

        let pair = GTuple::haar(&su2, 2, &mut rng).into_elements();
        let r = fixed_vector_obstruction(&pair, &half)?;
        s.haar_min_ob = s.haar_min_ob.min(r.ob);
        if r.ob > 1e-3 {
            s.haar_above += 1;
        }
        // on SU(2) itself M is scalar; the U(1) x SU(2) pair has a genuine eigenvector
        let twisted = GTuple::haar(&u1_su2, 2, &mut rng).into_elements();
        for (tuple, rep) in [(&pair, &half), (&twisted, &twisted_rep)] {
            let (m, _) = fixed_vector_matrix(tuple, rep)?;
            let grid_min = grid.iter().map(|w| (w.adjoint() * &m * w)[(0, 0)].re).fold(f64::INFINITY, f64::min);
            let lambda = fixed_vector_obstruction(tuple, rep)?.lambda_min;
            s.grid_max_gap = s.grid_max_gap.max((grid_min - lambda).abs());
        }

        let (a, b) = (haar_sample(&su2, &mut rng), haar_sample(&su2, &mut rng));
        let sampled = conj_min_distance_sampled(&a, &b, oracle_points, &mut rng)?;
        s.conj_max_gap = s.conj_max_gap.max((sampled - conj_min_distance(&a, &b)?).abs());
    }
    for i in 0..draws.min(20) {
        let mut r = child_rng(seed, "conjugacy tracking", i as u64);
        let iet = random_exact_iet(3, &mut r)?;
        let g = GTuple::haar(&su2, 3, &mut r);
        let a = haar_sample(&su2, &mut r);
        let gs = ExtendedState::new(iet.clone(), g.elements().to_vec())?;
        let hs = ExtendedState::new(iet, g.conjugated_by(&a)?.into_elements())?;
        let same = track_conjugacy(&gs, &gs, steps, 1)?;
        s.conj_self_max = same.rows.iter().map(|c| c.value).fold(s.conj_self_max, f64::max);
        let conj = track_conjugacy(&gs, &hs, steps, 1)?;
        s.conj_global_max = conj.rows.iter().map(|c| c.value).fold(s.conj_global_max, f64::max);
    }
    Ok(s)
}

/// The three rigidity batches: `ob` for spin 1/2 and spin 1, then `c_m`.
pub fn rigidity_batches(seed: u64, runs: usize, steps: usize) -> Result<Vec<BatchSummary>> {
    Ok(vec![
        fixed_vector_batch(seed, runs, steps, &Representation::spin_half())?,
        fixed_vector_batch(seed, runs, steps, &Representation::spin_one())?,
        conjugacy_batch(seed, runs, steps)?,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl SuiteReport {
    /// `PASS name: detail`, without timing so output is reproducible.
    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn timed(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> SuiteReport {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    SuiteReport { name, passed, detail, elapsed: start.elapsed() }
}

/// First-return suite alone, with an injectable step.
pub fn first_return_suite(seed: u64, step: &StepFn) -> SuiteReport {
    timed("first-return", || {
        let s = first_return_check(seed, 200, 100, step)?;
        Ok((s.mismatches == 0, format!("{} exchanges, {} points, {} mismatches, {} ties redrawn", s.iets, s.points, s.mismatches, s.ties)))
    })
}

/// All oracle suites at their standard sizes.
pub fn run_suites(seed: u64) -> Vec<SuiteReport> {
    let mut out = vec![first_return_suite(seed, &library_step)];
    out.push(timed("cocycle", || {
        let s = cocycle_check(seed, 100, 10)?;
        Ok((
            s.torus_mismatches == 0 && s.su2_max_error < 1e-9,
            format!(
                "{} states, {} components, torus mismatches {}, su2 max Frobenius error {:.3e}, {} truncated",
                s.states, s.components, s.torus_mismatches, s.su2_max_error, s.truncated
            ),
        ))
    }));
    out.push(timed("haar-preservation", || {
        let s = haar_check(seed, 100_000)?;
        Ok((
            s.max_deviation < s.bound,
            format!("{} character means over {} samples, max |mean| {:.4} (bound {:.4}) at {}", s.tests, s.samples, s.max_deviation, s.bound, s.worst),
        ))
    }));
    out.push(timed("obstruction", || {
        let s = obstruction_check(seed, 100, 10_000, 30)?;
        let passed = s.identity_max_ob == 0.0
            && s.shared_axis_max_ob <= 1e-12
            && s.haar_above == s.haar_draws
            && s.grid_max_gap < 1e-3
            && s.conj_max_gap < 1e-3
            && s.conj_self_max == 0.0
            && s.conj_global_max <= 1e-10;
        Ok((
            passed,
            format!(
                "identity ob {:e}, shared-axis ob {:.2e}, haar ob>1e-3 {}/{} (min {:.3e}), grid gap {:.2e}, conj gap {:.2e}, self c_m {:e}, conjugated c_m {:.2e}",
                s.identity_max_ob,
                s.shared_axis_max_ob,
                s.haar_above,
                s.haar_draws,
                s.haar_min_ob,
                s.grid_max_gap,
                s.conj_max_gap,
                s.conj_self_max,
                s.conj_global_max
            ),
        ))
    }));
    let start = Instant::now();
    let names = ["rigidity fixed-vector 1/2", "rigidity fixed-vector 1", "rigidity conjugacy"];
    match rigidity_batches(seed, 50, 30) {
        Ok(batches) => {
            let elapsed = start.elapsed() / 3;
            for (name, b) in names.into_iter().zip(&batches) {
                out.push(SuiteReport { name, passed: b.passes(), detail: b.describe(), elapsed });
            }
        }
        Err(e) => {
            out.push(SuiteReport { name: "rigidity", passed: false, detail: format!("error: {e}"), elapsed: start.elapsed() })
        }
    }
    out
}
