//! The golden rotation: alternating Rauzy rules, exactly on a Fibonacci
//! approximant and approximately in floating point.

use gext::groups::GTuple;
use gext::iet::{golden_approximant, golden_lengths};
use gext::rauzy::renormalize;
use gext::{ExtendedState, GroupDescriptor, Iet, Permutation};

fn main() -> gext::Result<()> {
    let e = GTuple::identity(&GroupDescriptor::U1, 2).into_elements();

    // (F_91, F_90) / F_92 follows the golden path for 89 steps
    let exact = Iet::new(golden_approximant(90), Permutation::reversal(2))?;
    let path = renormalize(&ExtendedState::new(exact, e.clone())?, 50, false);
    println!("exact  : {}", path.rules().iter().map(ToString::to_string).collect::<String>());
    for m in [0, 10, 20, 30] {
        let l = path.iet_at(m).normalized_lengths_f64();
        println!("  m={m:>2} normalized lengths {:.9} {:.9}", l[0], l[1]);
    }

    // rounding grows by about phi^2 per step, so the float path drifts off
    let float = Iet::new(golden_lengths(), Permutation::reversal(2))?;
    let path = renormalize(&ExtendedState::new(float, e)?, 60, true);
    let rules = path.rules();
    let drift = rules.iter().enumerate().position(|(i, r)| r.to_string() != if i % 2 == 0 { "A" } else { "B" });
    println!("float  : {}", rules.iter().map(ToString::to_string).collect::<String>());
    match drift {
        Some(i) => println!("  first deviation from ABAB... at step {}", i + 1),
        None => println!("  alternates for all {} steps", rules.len()),
    }
    Ok(())
}
