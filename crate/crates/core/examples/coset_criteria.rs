//! Coset-based sufficient conditions and the obstruction built from a coset.

use matchkit::criteria::{counterexample_pair, cyclic_coset_condition, is_coset_free};
use matchkit::Group;

fn main() -> matchkit::Result<()> {
    let g = Group::cyclic(12)?;

    for a in [vec![1, 2, 5], vec![0, 4, 8, 1]] {
        let c = is_coset_free(&g, &a)?;
        match c.witness {
            Some(w) => println!("A={a:?} contains the coset {}+{:?}", w.translate, w.subgroup.elements()),
            None => println!("A={a:?} is coset-free, so every admissible B is matchable"),
        }
    }

    let (a, b) = (vec![0, 3, 6, 9, 1], vec![2, 4, 5, 7, 8]);
    let c = cyclic_coset_condition(&g, &a, &b)?;
    println!("cyclic coset condition for A={a:?}, B={b:?}: {}", c.holds);

    let h = g.generated_subgroup(&[4])?;
    let pair = counterexample_pair(&g, &h, 1, 2)?;
    println!(
        "obstruction from H={:?}: A={:?} B={:?}, matchable: {}",
        h.elements(),
        pair.a(),
        pair.b(),
        pair.find_matching().is_some()
    );
    Ok(())
}
