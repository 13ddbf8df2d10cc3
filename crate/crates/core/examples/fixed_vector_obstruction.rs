//! The fixed-vector functional along renormalization, and a seeded batch
//! of runs summarizing its decay.

use gext::groups::GTuple;
use gext::iet::random_exact_iet;
use gext::obstruction::{fixed_vector_batch, fixed_vector_obstruction, track_fixed_vector};
use gext::seed::rng;
use gext::{ExtendedState, GroupDescriptor, Representation};

fn main() -> gext::Result<()> {
    let mut r = rng(21);
    let rep = Representation::spin_one();

    let identity = GTuple::identity(&GroupDescriptor::Su2, 3).into_elements();
    println!("identity tuple ob = {}", fixed_vector_obstruction(&identity, &rep)?.ob);

    let iet = random_exact_iet(3, &mut r)?.to_float();
    let tuple = GTuple::haar(&GroupDescriptor::Su2, 3, &mut r).into_elements();
    let series = track_fixed_vector(&ExtendedState::new(iet, tuple)?, &rep, 20, 4)?;
    for row in &series.rows {
        println!(
            "m={:>2} rule {} lambda_min {:.3e} surrogate {:.4} ob {:.4}",
            row.m,
            row.rule.map_or("-".to_string(), |r| r.to_string()),
            row.lambda_min,
            row.surrogate,
            row.ob
        );
    }

    let batch = fixed_vector_batch(21, 20, 30, &rep)?;
    println!("{}", batch.describe());
    Ok(())
}
