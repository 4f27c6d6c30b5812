use matchkit::linear::rational::q;
use matchkit::linear::scaling::{random_automorphism, random_nonzero_q};
use matchkit::linear::strong::{product_span_meets, random_ordered_basis};
use matchkit::linear::subspace::{random_q, random_subspace};
use matchkit::linear::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t(k: i64) -> AlgebraElement {
    AlgebraElement::monomial(q(1), k)
}

fn laurent(rng: &mut ChaCha8Rng, n: usize, lo: i64) -> Subspace {
    let width = rng.gen_range(n..=n + 2) as i64;
    let sparse = rng.gen_bool(0.5);
    random_subspace(rng, &Ambient::laurent(lo, lo + width - 1).unwrap(), n, sparse).unwrap()
}

fn scalar(rng: &mut ChaCha8Rng) -> AlgebraElement {
    loop {
        let lo = rng.gen_range(-2..=2);
        let terms: Vec<(i64, Q)> = (lo..lo + rng.gen_range(1..=3)).map(|k| (k, random_q(rng, 5))).collect();
        let alpha = AlgebraElement::laurent(&terms);
        if !alpha.is_zero() {
            return alpha;
        }
    }
}

/// A random element of `s`.
fn member(rng: &mut ChaCha8Rng, s: &Subspace) -> AlgebraElement {
    let coords: Vec<Q> = (0..s.dim()).map(|_| random_q(rng, 5)).collect();
    s.element(&coords)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = laurent(&mut rng, n, 0);
        let alpha = scalar(&mut rng);
        let b = a.scaled_by(&alpha).unwrap();
        let found = find_scaling(&a, &b).unwrap().expect("a scaling exists");
        prop_assert_eq!(a.scaled_by(&found).unwrap(), b.clone());
        let w = LinearIso::multiplication(&found, &a, &b).unwrap();
        prop_assert_eq!(w.inverse().compose(&w).unwrap(), LinearIso::identity(&a, &a).unwrap());
    }

    #[test]
    fn matched_basis_from_dual_functionals(seed in any::<u64>(), n in 1usize..=3, shift in -2i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = laurent(&mut rng, n, 0);
        let b = laurent(&mut rng, n, shift);
        prop_assume!(!b.contains_unity().unwrap());
        let basis = random_ordered_basis(&mut rng, &a).unwrap();
        match match_basis(&basis, &b, 16, &mut rng).unwrap() {
            BasisMatch::Matched(m) => {
                prop_assert!(is_matched_basis(&basis, &m).unwrap());
                prop_assert_eq!(m.span(), &b);
            }
            BasisMatch::Blocked(v) => prop_assert!(v.v_dim < v.indices.len()),
        }
    }

    #[test]
    fn blocked_witness_lands_in_a(seed in any::<u64>(), n in 1usize..=3, shift in -2i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = laurent(&mut rng, n, 0);
        let b = laurent(&mut rng, n, shift);
        if let StrongVerdict::Blocked { a: x, b: y } = strong_matching(&a, &b).unwrap() {
            prop_assert!(a.contains(&x).unwrap() && !x.is_zero());
            prop_assert!(b.contains(&y).unwrap() && !y.is_zero());
            prop_assert!(a.contains(&x.mul(&y).unwrap()).unwrap());
            prop_assert!(product_span_meets(&a, &b).unwrap());
        }
    }
}

#[test]
fn polarized_equivalence_matches_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..60 {
        let n = rng.gen_range(1..=3);
        let a = laurent(&mut rng, n, 0);
        let b = laurent(&mut rng, n, 1);
        let (f, g, phi) = if i % 3 == 2 {
            let f = LinearIso::random(&mut rng, &a, &b).unwrap();
            let g = LinearIso::random(&mut rng, &a, &b).unwrap();
            (f, g, random_automorphism(&mut rng, &a).unwrap())
        } else if i % 3 == 1 {
            let t = EquivalentTriple::scaling(&scalar(&mut rng), &random_automorphism(&mut rng, &a).unwrap()).unwrap();
            (t.f, t.g, t.phi)
        } else {
            let f = LinearIso::random(&mut rng, &a, &b).unwrap();
            let t = EquivalentTriple::scalar(&f, &random_nonzero_q(&mut rng)).unwrap();
            (t.f, t.g, t.phi)
        };
        let direct = (0..8).all(|_| {
            let x = member(&mut rng, f.domain());
            let px = phi.apply(&x).unwrap();
            x.mul(&f.apply(&x).unwrap()).unwrap() == px.mul(&g.apply(&px).unwrap()).unwrap()
        });
        assert_eq!(is_equivalent(&f, &g, &phi).unwrap(), direct, "case {i}");
        if direct {
            assert!(classify_equivalent_pair(&f, &g, &phi).is_ok());
        }
    }
}

#[test]
fn product_span_can_meet_a_without_a_product_in_a() {
    let a = Subspace::span(&[t(0), t(1).add(&t(2)).unwrap()]).unwrap();
    let b = Subspace::span(&[t(1), t(3)]).unwrap();
    assert!(product_span_meets(&a, &b).unwrap());
    assert_eq!(strong_matching(&a, &b).unwrap(), StrongVerdict::Exists);
}

#[test]
fn shifted_window_matches_and_unity_is_rejected() {
    let m = Subspace::span(&[t(0)]).unwrap();
    assert!(contains_translate(&m, &m).unwrap().is_none());
    let a = OrderedBasis::new(vec![t(0), t(1)]).unwrap();
    let b = Subspace::span(&[t(1), t(2)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(matches!(match_basis(&a, &b, 8, &mut rng).unwrap(), BasisMatch::Matched(_)));
    let unity = Subspace::span(&[t(0), t(1)]).unwrap();
    assert!(match_basis(&a, &unity, 8, &mut rng).is_err());
}
