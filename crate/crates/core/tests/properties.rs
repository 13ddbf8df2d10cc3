use gext::groups::{nielsen_alpha, nielsen_beta, Angle, GroupElement, Quat};
use gext::rauzy::{gamma_apply, ordered_product, rauzy_permutation, rauzy_step, renormalize};
use gext::scalar::ratio;
use gext::{ExtendedState, Iet, Permutation, Rational};
use proptest::prelude::*;

fn irreducible(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).expect("a shuffle is a permutation"))
        .prop_filter("irreducible", Permutation::is_irreducible)
}

fn exchange() -> impl Strategy<Value = Iet<Rational>> {
    (2usize..=6).prop_flat_map(|n| {
        (prop::collection::vec(1i64..1_000_000, n), irreducible(n))
            .prop_map(|(l, p)| Iet::new(l.into_iter().map(|v| ratio(v, 1_000_000)).collect(), p).expect("valid exchange"))
    })
}

fn torus_tuple(n: usize) -> impl Strategy<Value = Vec<GroupElement>> {
    prop::collection::vec(prop::collection::vec(any::<u64>(), 2), n)
        .prop_map(|v| v.into_iter().map(|a| GroupElement::Torus(a.into_iter().map(Angle::from_raw).collect())).collect())
}

fn unit_quat() -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-1.0f64..1.0).prop_filter("away from zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2).prop_map(|[w, x, y, z]| Quat::new(w, x, y, z))
}

fn exchange_with_tuple() -> impl Strategy<Value = (Iet<Rational>, Vec<GroupElement>)> {
    exchange().prop_flat_map(|t| {
        let n = t.n();
        (Just(t), torus_tuple(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exchange_is_a_bijection(t in exchange(), p in 0i64..999_999) {
        let x = ratio(p, 1_000_000) * t.total().clone();
        let y = t.apply(&x).unwrap();
        prop_assert!(y >= ratio(0, 1) && &y < t.total());
        prop_assert_eq!(t.inverse().apply(&y).unwrap(), x);
    }

    #[test]
    fn rauzy_step_keeps_irreducibility_and_lengths(t in exchange()) {
        if let Ok(step) = rauzy_step(&t) {
            prop_assert!(step.iet.perm().is_irreducible());
            prop_assert_eq!(step.iet.perm(), &rauzy_permutation(step.rule, t.perm()));
            prop_assert!(step.iet.total() < t.total());
            prop_assert_eq!(step.matrix.apply_exact(step.iet.lengths()), t.lengths().to_vec());
            prop_assert_eq!(step.matrix.determinant().magnitude().to_string(), "1");
        }
    }

    #[test]
    fn induced_map_is_the_first_return(t in exchange(), p in 0i64..999_999) {
        if let Ok(step) = rauzy_step(&t) {
            let len = step.iet.total().clone();
            let x = ratio(p, 1_000_000) * len.clone();
            let r = t.first_return(&x, &len, 1_000_000).unwrap();
            prop_assert_eq!(step.iet.apply(&x).unwrap(), r.point);
        }
    }

    #[test]
    fn renormalized_tuple_is_product_along_return_words((t, g) in exchange_with_tuple(), steps in 1usize..12) {
        let path = renormalize(&ExtendedState::new(t, g.clone()).unwrap(), steps, false);
        let gm = path.tuple_at(path.len());
        for j in 1..=g.len() {
            let word = path.return_word(j).unwrap();
            prop_assert_eq!(&ordered_product(&word, &g), &gm[j - 1]);
        }
    }

    #[test]
    fn gamma_is_equivariant_under_conjugation(t in exchange(), q in prop::collection::vec(unit_quat(), 7)) {
        let g: Vec<GroupElement> = q[..t.n()].iter().map(|x| GroupElement::Su2(*x)).collect();
        let c = GroupElement::Su2(q[6]);
        if let Ok(step) = rauzy_step(&t) {
            let conj: Vec<GroupElement> = g.iter().map(|x| x.conjugated_by(&c).unwrap()).collect();
            let a = gamma_apply(step.rule, t.perm(), &conj).unwrap();
            let b = gamma_apply(step.rule, t.perm(), &g).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!(x.distance(&y.conjugated_by(&c).unwrap()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn nielsen_moves_are_invertible(g in torus_tuple(4), i in 1usize..=4, j in 1usize..=4) {
        prop_assume!(i < j);
        let twice = nielsen_alpha(&nielsen_alpha(&g, i, j).unwrap(), i, j).unwrap();
        prop_assert_eq!(twice, g.clone());
        let b = nielsen_beta(&g).unwrap();
        prop_assert_eq!(&b[1..], &g[1..]);
    }

    #[test]
    fn angle_arithmetic_is_a_group(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (Angle::from_raw(a), Angle::from_raw(b), Angle::from_raw(c));
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a + -a, Angle::ZERO);
        prop_assert_eq!(a + b, b + a);
        prop_assert!(a.distance(b) <= std::f64::consts::PI);
        prop_assert_eq!(a.distance(b), b.distance(a));
    }
}
