//! The conjugacy functional between two SU(2) extensions over the same
//! base, for independent and for conjugated tuples.

use gext::groups::{haar_sample, GTuple};
use gext::iet::random_exact_iet;
use gext::obstruction::{conjugacy_batch, track_conjugacy, track_conjugacy_all};
use gext::seed::rng;
use gext::{ExtendedState, GroupDescriptor};

fn main() -> gext::Result<()> {
    let mut r = rng(4);
    let iet = random_exact_iet(3, &mut r)?.to_float();
    let g = GTuple::haar(&GroupDescriptor::Su2, 3, &mut r);
    let h = GTuple::haar(&GroupDescriptor::Su2, 3, &mut r);
    let a = haar_sample(&GroupDescriptor::Su2, &mut r);
    let conjugated = g.conjugated_by(&a)?;

    let gs = ExtendedState::new(iet.clone(), g.into_elements())?;
    let hs = ExtendedState::new(iet.clone(), h.into_elements())?;
    let cs = ExtendedState::new(iet, conjugated.into_elements())?;

    let independent = track_conjugacy(&gs, &hs, 20, 5)?;
    let all = track_conjugacy_all(&gs, &hs, 20, 5)?;
    let control = track_conjugacy(&gs, &cs, 20, 5)?;
    for ((x, y), z) in independent.rows.iter().zip(&all.rows).zip(&control.rows) {
        println!("m={:>2} c_m {:.4}  all components {:.4}  conjugated {:.1e}", x.m, x.value, y.value, z.value);
    }

    println!("{}", conjugacy_batch(4, 20, 30)?.describe());
    Ok(())
}
