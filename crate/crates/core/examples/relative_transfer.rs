//! Relative matchings along the reduction Z/12 → Z/4.

use matchkit::relative::{find_relative_matching, push_forward, verify_hom_transfer, TupleOfElements};
use matchkit::Homomorphism;

fn main() -> matchkit::Result<()> {
    let h = Homomorphism::reduction(12, 4)?;
    let g = h.source().clone();
    let a = TupleOfElements::new(g.clone(), vec![1, 5, 2, 2])?;
    let b = TupleOfElements::new(g, vec![3, 4, 8, 11])?;

    let rel = find_relative_matching(&a, &b, h.kernel())?;
    println!("kernel {:?}", h.kernel().elements());
    println!("matching relative to the kernel: {:?}", rel.map(|m| m.sigma));

    let (ia, ib) = (push_forward(&h, &a)?, push_forward(&h, &b)?);
    println!("images {:?} and {:?}", ia.entries(), ib.entries());

    let check = verify_hom_transfer(&h, &a, &b)?;
    println!(
        "both sides agree: {}, permutations transfer: {}",
        check.holds(),
        check.permutations_transfer(&h, &a, &b)?
    );
    Ok(())
}
