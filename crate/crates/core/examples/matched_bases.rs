//! Matched bases in Q(t) and the obstruction inside Q(2^(1/4)).

use std::sync::Arc;

use matchkit::linear::ambient::StructureAlgebra;
use matchkit::linear::rational::{q, unit_vec};
use matchkit::linear::{contains_translate, match_basis, AlgebraElement, BasisMatch, OrderedBasis, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn t(k: i64) -> AlgebraElement {
    AlgebraElement::monomial(q(1), k)
}

fn main() -> matchkit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    let a = OrderedBasis::new(vec![t(0), t(1), t(2)])?;
    let b = Subspace::span(&[t(3), t(4), t(5)])?;
    match match_basis(&a, &b, 32, &mut rng)? {
        BasisMatch::Matched(m) => {
            println!("matched basis of B: {:?}", m.vectors().iter().map(ToString::to_string).collect::<Vec<_>>())
        }
        BasisMatch::Blocked(v) => println!("blocked by {:?}", v.indices),
    }

    let alg = Arc::new(StructureAlgebra::fourth_root_of_two());
    let x = |i| AlgebraElement::in_algebra(&alg, unit_vec(4, i));
    let m = Subspace::span(&[x(0)?, x(2)?])?;
    if let Some(w) = contains_translate(&m, &m)? {
        println!("the subfield Q(sqrt 2) contains the translate {}·M", w.translate);
    }
    let a = OrderedBasis::new(vec![x(0)?, x(2)?])?;
    let b = Subspace::span(&[x(1)?, x(2)?])?;
    if let BasisMatch::Blocked(v) = match_basis(&a, &b, 32, &mut rng)? {
        let basis: Vec<String> = v.v_basis.iter().map(ToString::to_string).collect();
        println!("no matched basis: indices {:?} span V of dim {} = {basis:?}", v.indices, v.v_dim);
    }
    Ok(())
}
