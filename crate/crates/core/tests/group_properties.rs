use std::collections::{BTreeMap, HashSet};

use matchkit::criteria::is_coset_free;
use matchkit::primes::{fixed_point_audit, multiplicative_order, quadratic_residues};
use matchkit::relative::{verify_hom_transfer, TupleOfElements};
use matchkit::{Group, Homomorphism, SubsetPair};
use proptest::prelude::*;

/// `(A, B)` in `Z/n` with `|A| = |B|` and `0 ∉ B`.
fn pair_in(n: usize, max: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1..=max.min(n - 1)).prop_flat_map(move |k| {
        (
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k),
            proptest::sample::subsequence((1..n).collect::<Vec<_>>(), k),
        )
    })
}

fn cyclic_pair() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    (3usize..=9).prop_flat_map(|n| pair_in(n, 5).prop_map(move |(a, b)| (n, a, b)))
}

fn all_matchings(n: usize, a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    let set: HashSet<usize> = a.iter().copied().collect();
    let mut out = Vec::new();
    let mut sigma: Vec<usize> = (0..a.len()).collect();
    permute(&mut sigma, 0, &mut |s| {
        if s.iter().enumerate().all(|(i, &j)| !set.contains(&((a[i] + b[j]) % n))) {
            out.push(s.to_vec());
        }
    });
    out
}

fn permute(v: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}

fn products(n: usize, a: &[usize], b: &[usize], s: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for (i, &j) in s.iter().enumerate() {
        *m.entry((a[i] + b[j]) % n).or_insert(0) += 1;
    }
    m
}

proptest! {
    #[test]
    fn matchability_agrees_with_permutation_search((n, a, b) in cyclic_pair()) {
        let pair = SubsetPair::new(Group::cyclic(n).unwrap(), a.clone(), b.clone()).unwrap();
        let brute = all_matchings(n, &a, &b);
        match pair.find_matching() {
            Some(m) => {
                prop_assert!(pair.matching(m.sigma().to_vec()).is_ok());
                prop_assert!(brute.contains(&m.sigma().to_vec()));
            }
            None => {
                prop_assert!(brute.is_empty());
                let v = pair.hall_violator().unwrap();
                prop_assert!(v.neighbourhood.len() < v.subset.len());
                prop_assert!(pair.verifies_violator(&v));
            }
        }
    }

    #[test]
    fn census_agrees_with_multiplicity_classes((n, a, b) in cyclic_pair()) {
        let pair = SubsetPair::new(Group::cyclic(n).unwrap(), a.clone(), b.clone()).unwrap();
        let brute = all_matchings(n, &a, &b);
        let mut classes: BTreeMap<BTreeMap<usize, usize>, usize> = BTreeMap::new();
        for s in &brute {
            *classes.entry(products(n, &a, &b, s)).or_insert(0) += 1;
        }
        let census = pair.multiplicity_census(10_000).unwrap();
        prop_assert_eq!(census.matchings, brute.len());
        prop_assert_eq!(census.classes, classes.len());
        for s in &brute {
            let m = pair.matching(s.clone()).unwrap();
            prop_assert_eq!(pair.is_acyclic(&m).unwrap(), classes[&products(n, &a, &b, s)] == 1);
            prop_assert_eq!(pair.multiplicity(&m).total(), a.len());
        }
    }

    #[test]
    fn inverse_undoes_sigma((n, a, b) in cyclic_pair()) {
        let pair = SubsetPair::new(Group::cyclic(n).unwrap(), a, b).unwrap();
        if let Some(m) = pair.find_matching() {
            let inv = m.inverse();
            for (i, &j) in m.sigma().iter().enumerate() {
                prop_assert_eq!(inv[j], i);
            }
        }
    }

    #[test]
    fn coset_free_sets_match((a, b) in pair_in(12, 6)) {
        let g = Group::cyclic(12).unwrap();
        if is_coset_free(&g, &a).unwrap().coset_free {
            prop_assert!(SubsetPair::new(g, a, b).unwrap().find_matching().is_some());
        }
    }

    #[test]
    fn transfer_along_reduction(
        k in prop::sample::select(vec![2usize, 3, 4, 6]),
        a in prop::collection::vec(0usize..12, 1..=5),
        seed in prop::collection::vec(0usize..12, 5),
    ) {
        let h = Homomorphism::reduction(12, k).unwrap();
        let b: Vec<usize> = seed[..a.len()].to_vec();
        let ta = TupleOfElements::new(h.source().clone(), a).unwrap();
        let tb = TupleOfElements::new(h.source().clone(), b).unwrap();
        let check = verify_hom_transfer(&h, &ta, &tb).unwrap();
        prop_assert!(check.holds());
        prop_assert!(check.permutations_transfer(&h, &ta, &tb).unwrap());
    }
}

#[test]
fn blocked_pair_in_z6() {
    let pair = SubsetPair::new(Group::cyclic(6).unwrap(), vec![1, 4], vec![3, 2]).unwrap();
    assert!(pair.find_matching().is_none());
    let v = pair.hall_violator().unwrap();
    assert_eq!(v.subset, vec![0, 1]);
    assert!(pair.verifies_violator(&v));
}

#[test]
fn residues_and_orders_match_direct_computation() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let mut squares: Vec<usize> = (1..p).map(|x| (x * x % p) as usize).collect();
        squares.sort_unstable();
        squares.dedup();
        assert_eq!(quadratic_residues(p).unwrap(), squares);
        for a in 1..p {
            let order = (1..p).find(|&k| (0..k).fold(1, |acc, _| acc * a % p) == 1).unwrap();
            assert_eq!(multiplicative_order(a, p).unwrap(), order);
        }
    }
}

#[test]
fn audit_finds_fixed_points_for_odd_sets() {
    let g = Group::cyclic(9).unwrap();
    for a in [vec![1, 2, 4], vec![1, 3, 5, 7, 8], vec![4]] {
        let audit = fixed_point_audit(&g, &a).unwrap();
        assert!(audit.holds());
        for m in &audit.acyclic {
            assert!(m.sigma().iter().enumerate().any(|(i, &j)| i == j));
        }
    }
}
