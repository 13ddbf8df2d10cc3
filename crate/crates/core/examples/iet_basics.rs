//! Exact interval exchanges: evaluation, orbits, coding and first returns.

use gext::scalar::{format_rational, ratio};
use gext::{Iet, Permutation, Rational};

fn show(xs: &[Rational]) -> String {
    xs.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

fn main() -> gext::Result<()> {
    // a rotation by 3/10 written as a two-interval exchange
    let rotation = Iet::new(vec![ratio(7, 10), ratio(3, 10)], Permutation::reversal(2))?;
    let x = ratio(1, 2);
    println!("orbit of 1/2: {}", show(&rotation.orbit(&x, 5)?));
    println!("coding word : {:?}", rotation.coding_word(&x, 10)?);

    // a four-interval exchange and its inverse
    let perm = Permutation::new(vec![3, 1, 4, 2])?;
    let t = Iet::new(vec![ratio(1, 5), ratio(3, 10), ratio(1, 4), ratio(1, 4)], perm)?;
    println!("cuts        : {}", show(t.cuts()));
    println!("offsets     : {}", show(t.offsets()));
    let y = ratio(2, 7);
    let ty = t.apply(&y)?;
    println!("T(2/7) = {}, T^-1(T(2/7)) = {}", format_rational(&ty), format_rational(&t.inverse().apply(&ty)?));

    // first return to [0, 1/3) by brute force
    let r = t.first_return(&y, &ratio(1, 3), 1_000)?;
    println!("first return of 2/7 to [0, 1/3): {} after {} steps, word {:?}", format_rational(&r.point), r.time, r.word);

    // reducible permutations are rejected with the invariant block
    match Permutation::new(vec![2, 1, 3]).and_then(|p| Iet::new(vec![ratio(1, 3); 3], p)) {
        Ok(_) => println!("unexpected: (2 1 3) accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
