//! Rauzy-Veech induction: rules, visit matrices, return times and words,
//! Zorich acceleration and the Veech properties.

use gext::groups::GTuple;
use gext::iet::random_exact_iet;
use gext::rauzy::{check_p1, rauzy_step, renormalize, veech_flags, zorich_step};
use gext::scalar::format_rational;
use gext::seed::rng;
use gext::{ExtendedState, GroupDescriptor};

fn main() -> gext::Result<()> {
    let mut r = rng(3);
    let iet = random_exact_iet(4, &mut r)?;
    println!("pi = {}, lambda = [{}]", iet.perm(), iet.lengths().iter().map(format_rational).collect::<Vec<_>>().join(", "));

    let step = rauzy_step(&iet)?;
    println!("first rule {} -> pi' = {}", step.rule, step.iet.perm());

    let state = ExtendedState::new(iet.clone(), GTuple::identity(&GroupDescriptor::U1, 4).into_elements())?;
    let path = renormalize(&state, 12, false);
    let rules: String = path.rules().iter().map(ToString::to_string).collect();
    println!("rules       : {rules}");
    println!("return times: {:?}", path.return_times().iter().map(ToString::to_string).collect::<Vec<_>>());
    for j in 1..=4 {
        println!("word {j}      : {:?}", path.return_word(j)?);
    }
    let m = &path.records().last().expect("at least one step").cumulative;
    println!("det(M_1...M_m) = {}", m.determinant());
    // the induced lengths map back onto the original ones
    let back = m.apply_exact(path.iet_at(path.len()).lengths());
    println!("M lambda^m == lambda: {}", back == iet.lengths());

    let z = zorich_step(&iet)?;
    println!("zorich: rule {} repeated {} times", z.rule, z.count);

    let p1 = check_p1(&iet, 6, 0.1)?;
    println!("P1 at m=6: holds={} b_max={} threshold={:.3}", p1.holds, p1.b_max, p1.threshold);
    let flags = veech_flags(&iet, &[0, 2, 4, 6, 8], 0.1)?;
    println!("(P1, P2) at m = 0, 2, 4, 6, 8: {flags:?}");
    Ok(())
}
