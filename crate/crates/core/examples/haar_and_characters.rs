//! Groups, Haar sampling, characters, representation matrices and the
//! Nielsen moves that generate the Rauzy maps on tuples.

use gext::groups::{character, haar_sample, nielsen_alpha, nielsen_beta, rep_matrix, serialize_tuple};
use gext::seed::rng;
use gext::{GTuple, GroupDescriptor, Representation};

fn main() -> gext::Result<()> {
    let mut r = rng(11);
    let su2 = GroupDescriptor::Su2;
    let spin_half = Representation::spin_half();
    let spin_one = Representation::spin_one();

    let n = 50_000;
    let (mut m_half, mut m_one) = (0.0, 0.0);
    for _ in 0..n {
        let g = haar_sample(&su2, &mut r);
        m_half += character(&spin_half, &g)?.re;
        m_one += character(&spin_one, &g)?.re;
    }
    println!("Haar means over {n} samples: chi_1/2 {:.4}, chi_1 {:.4}", m_half / n as f64, m_one / n as f64);

    let g = haar_sample(&su2, &mut r);
    let m = rep_matrix(&spin_one, &g)?;
    let unitarity = (m.adjoint() * &m - nalgebra::DMatrix::identity(3, 3)).norm();
    println!("spin-1 matrix trace {:.6} vs character {:.6}, |U*U - I| = {unitarity:.1e}", m.trace().re, character(&spin_one, &g)?.re);

    let product: GroupDescriptor = "u1*su2".parse()?;
    let rep = Representation::parse(&product, "2*1/2")?;
    let x = haar_sample(&product, &mut r);
    println!("{product} element {} has chi_{rep} = {:.4}", x.serialize(), character(&rep, &x)?);

    let tuple = GTuple::haar(&GroupDescriptor::U1, 3, &mut r);
    println!("tuple          {}", tuple.serialize());
    println!("alpha(1,2)     {}", serialize_tuple(&nielsen_alpha(tuple.elements(), 1, 2)?));
    println!("beta           {}", serialize_tuple(&nielsen_beta(tuple.elements())?));
    Ok(())
}
