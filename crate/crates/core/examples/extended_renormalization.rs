//! Renormalizing an interval exchange together with a tuple of SU(2)
//! elements, and checking the tuple against products along return words.

use gext::groups::GTuple;
use gext::iet::random_exact_iet;
use gext::rauzy::{ordered_product, renormalize};
use gext::seed::child_rng;
use gext::{ExtendedState, GroupDescriptor};

fn main() -> gext::Result<()> {
    let mut r = child_rng(5, "example", 0);
    let iet = random_exact_iet(4, &mut r)?;
    let g = GTuple::haar(&GroupDescriptor::Su2, 4, &mut r).into_elements();
    let path = renormalize(&ExtendedState::new(iet, g.clone())?, 15, false);
    println!("{} steps, rules {}", path.len(), path.rules().iter().map(ToString::to_string).collect::<String>());

    let gm = path.tuple_at(path.len());
    let mut worst: f64 = 0.0;
    for j in 1..=4 {
        let word = path.return_word(j)?;
        let direct = ordered_product(&word, &g);
        let d = direct.distance(&gm[j - 1])?;
        worst = worst.max(d);
        println!("g^m_{j}: return word of length {:>4}, |renormalized - product| = {d:.2e}", word.len());
    }
    println!("worst discrepancy {worst:.2e}, replay reproduces path: {}", path.replay_matches());
    Ok(())
}
