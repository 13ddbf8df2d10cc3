//! The group walk along an orbit, with Weyl sums for several
//! representations and a degenerate identity-tuple control.

use gext::extension::{walk, WalkOptions};
use gext::iet::golden_lengths;
use gext::seed::rng;
use gext::{GTuple, GroupDescriptor, Iet, Permutation, Representation};

fn main() -> gext::Result<()> {
    let golden = Iet::new(golden_lengths(), Permutation::reversal(2))?;
    let reps = vec![Representation::spin_half(), Representation::spin_one()];
    let options = WalkOptions { trace_stride: Some(20_000), ..Default::default() };

    let tuple = GTuple::haar(&GroupDescriptor::Su2, 2, &mut rng(7)).into_elements();
    let record = walk(&golden, &tuple, &0.1, 100_000, &reps, &options)?;
    for snap in &record.trace {
        let abs: Vec<String> = snap.weyl.iter().map(|s| format!("{:.4}", s.norm())).collect();
        println!("k={:>6} |S_k| = {}", snap.k, abs.join(" "));
    }

    let identity = GTuple::identity(&GroupDescriptor::Su2, 2).into_elements();
    let control = walk(&golden, &identity, &0.1, 1_000, &reps, &WalkOptions::default())?;
    println!("identity tuple degenerate: {} (|S_K| = dim)", control.is_degenerate());
    Ok(())
}
