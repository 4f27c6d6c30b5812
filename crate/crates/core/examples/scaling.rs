//! Scalings between subspaces of Q(t) and acyclic linear matchings.

use matchkit::linear::rational::q;
use matchkit::linear::scaling::random_automorphism;
use matchkit::linear::{
    classify_equivalent_pair, find_acyclic_linear_matching, find_scaling, AlgebraElement, EquivalentTriple, Subspace,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> matchkit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let a = Subspace::span(&[AlgebraElement::laurent(&[(0, q(1)), (1, q(2))]), AlgebraElement::laurent(&[(2, q(1))])])?;
    let alpha = AlgebraElement::laurent(&[(-1, q(3)), (0, q(-1))]);
    let b = a.scaled_by(&alpha)?;

    let found = find_scaling(&a, &b)?;
    println!("B = alpha·A with alpha = {}", found.as_ref().map_or("none".into(), ToString::to_string));

    let m = find_acyclic_linear_matching(&a, &b)?;
    println!("{}", m.to_json());

    let phi = random_automorphism(&mut rng, &a)?;
    let triple = EquivalentTriple::scaling(&alpha, &phi)?;
    let branch = classify_equivalent_pair(&triple.f, &triple.g, &triple.phi)?;
    println!("equivalent pair classified as {}", branch.to_json());
    Ok(())
}
