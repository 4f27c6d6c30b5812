//! Strong matchings in Q(t) and a basis that breaks a non-strong isomorphism.

use matchkit::linear::rational::q;
use matchkit::linear::strong::find_violating_basis;
use matchkit::linear::{strong_matching, AlgebraElement, LinearIso, StrongVerdict, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn t(k: i64) -> AlgebraElement {
    AlgebraElement::monomial(q(1), k)
}

fn main() -> matchkit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs = [(vec![t(0), t(1)], vec![t(3), t(4).add(&t(5))?]), (vec![t(0), t(1)], vec![t(1), t(2)])];
    for (a, b) in pairs {
        let (a, b) = (Subspace::span(&a)?, Subspace::span(&b)?);
        let verdict = strong_matching(&a, &b)?;
        println!("{}", verdict.to_json());
        if let StrongVerdict::Blocked { a: x, b: y } = verdict {
            let f = LinearIso::random(&mut rng, &a, &b)?;
            if let Some((basis, trials)) = find_violating_basis(&f, Some((&x, &y)), 1000, &mut rng)? {
                let shown: Vec<String> = basis.vectors().iter().map(ToString::to_string).collect();
                println!("  a random isomorphism fails on the basis {shown:?} (trial {trials})");
            }
        }
    }
    Ok(())
}
