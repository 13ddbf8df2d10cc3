//! Monte Carlo correlations of skew products and their Cesaro means: a
//! rotation base keeps its correlations, a genus-two base loses them.

use gext::extension::{correlation_cesaro, Observable, SimpleFunction};
use gext::iet::{golden_lengths, random_exact_lengths};
use gext::seed::child_rng;
use gext::{GTuple, GroupDescriptor, Iet, Permutation, Representation};

fn main() -> gext::Result<()> {
    let mut r = child_rng(9, "mixing", 0);

    let golden = Iet::new(golden_lengths(), Permutation::reversal(2))?;
    let phi = SimpleFunction::new(GTuple::haar(&GroupDescriptor::U1, 2, &mut r).into_elements());
    let obs = Observable::character(1, Representation::U1(1));
    let rotation = correlation_cesaro(&golden, &phi, &obs, 2000, 1000, &mut r)?;

    let genus_two = Iet::new(random_exact_lengths(4, &mut r), Permutation::reversal(4))?.to_float();
    let phi = SimpleFunction::new(GTuple::haar(&GroupDescriptor::Su2, 4, &mut r).into_elements());
    let obs = Observable::character(0, Representation::spin_half());
    let mixing = correlation_cesaro(&genus_two, &phi, &obs, 2000, 1000, &mut r)?;

    println!("{:>5} {:>18} {:>18}", "lag", "golden x U(1)", "(4 3 2 1) x SU(2)");
    for j in [1, 10, 100, 500, 1000, 2000] {
        println!("{j:>5} {:>18.4} {:>18.4}", rotation.cesaro[j - 1], mixing.cesaro[j - 1]);
    }
    println!("noise scale 3/sqrt(M) = {:.4}", mixing.noise_bound);
    Ok(())
}
