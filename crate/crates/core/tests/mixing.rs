use gext::extension::{birkhoff_average, correlation_cesaro, Observable, SimpleFunction, SkewPoint};
use gext::groups::GroupElement;
use gext::iet::{golden_lengths, random_exact_lengths};
use gext::seed::child_rng;
use gext::{GTuple, GroupDescriptor, Iet, Permutation, Representation};

fn golden() -> Iet<f64> {
    Iet::new(golden_lengths(), Permutation::reversal(2)).unwrap()
}

#[test]
fn golden_u1_birkhoff_averages_vanish() {
    let t = golden();
    let obs = Observable::character(1, Representation::U1(1));
    let mut small = 0;
    for seed in 0..10 {
        let mut r = child_rng(seed, "birkhoff", 0);
        let phi = SimpleFunction::new(GTuple::haar(&GroupDescriptor::U1, 2, &mut r).into_elements());
        let p0 = SkewPoint { x: 0.0, y: GroupElement::identity(&GroupDescriptor::U1) };
        let avg = birkhoff_average(&t, &phi, &obs, &p0, 100_000).unwrap();
        small += usize::from(avg.norm() < 0.05);
    }
    assert!(small >= 9, "{small}/10 seeds below 0.05");
}

/// Over a rotation a two-valued step cocycle is cohomologous to a constant,
/// so the skew product is a product of rotations and correlations persist.
#[test]
fn golden_u1_skew_product_is_not_weakly_mixing() {
    let t = golden();
    let mut r = child_rng(1, "mixing", 0);
    let phi = SimpleFunction::new(GTuple::haar(&GroupDescriptor::U1, 2, &mut r).into_elements());
    let obs = Observable::character(1, Representation::U1(1));
    let report = correlation_cesaro(&t, &phi, &obs, 2000, 2000, &mut r).unwrap();
    assert!(report.final_cesaro() > 0.5, "C_N = {}", report.final_cesaro());
}

/// Cesaro means keep falling as the lag window grows.
#[test]
fn genus_two_su2_extension_has_decaying_cesaro_correlations() {
    for seed in 0..5 {
        let mut r = child_rng(seed, "mixing", 0);
        let t = Iet::new(random_exact_lengths(4, &mut r), Permutation::reversal(4)).unwrap().to_float();
        let phi = SimpleFunction::new(GTuple::haar(&GroupDescriptor::Su2, 4, &mut r).into_elements());
        let obs = Observable::character(0, Representation::spin_half());
        let report = correlation_cesaro(&t, &phi, &obs, 8000, 2000, &mut r).unwrap();
        let (early, last) = (report.cesaro[1999], report.final_cesaro());
        assert!(last < 0.1 && last < early, "seed {seed}: C_2000 = {early}, C_8000 = {last}");
    }
}

#[test]
fn identity_extension_does_not_mix_in_the_fiber() {
    let t = golden();
    let phi = SimpleFunction::new(GTuple::identity(&GroupDescriptor::U1, 2).into_elements());
    let obs = Observable::character(0, Representation::U1(1));
    let report = correlation_cesaro(&t, &phi, &obs, 50, 500, &mut child_rng(2, "mixing", 0)).unwrap();
    assert!(report.final_cesaro() > 0.99);
}
