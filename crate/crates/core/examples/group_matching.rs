//! Matchings in Z/6: a matchable pair, a blocked pair with its Hall violator,
//! and the multiplicity census of a matchable pair.

use matchkit::matching::Matchability;
use matchkit::{Group, SubsetPair};

fn main() -> matchkit::Result<()> {
    let g = Group::cyclic(6)?;

    let pair = SubsetPair::new(g.clone(), vec![1, 2, 4], vec![1, 3, 5])?;
    match pair.matchability() {
        Matchability::Matched(m) => {
            println!("A={:?} B={:?} matched by sigma={:?}", pair.a(), pair.b(), m.sigma());
            println!("  products {:?}", pair.products_of(&m));
        }
        Matchability::Blocked(v) => println!("blocked: {v:?}"),
    }

    let blocked = SubsetPair::new(g, vec![1, 4], vec![3, 2])?;
    let v = blocked.hall_violator()?;
    println!(
        "A={:?} B={:?} has no matching; subset {:?} only reaches {:?} (verified: {})",
        blocked.a(),
        blocked.b(),
        v.subset,
        v.neighbourhood,
        blocked.verifies_violator(&v)
    );

    let census = pair.multiplicity_census(1000)?;
    println!(
        "census of the first pair: {} matchings, {} multiplicity classes, {} acyclic",
        census.matchings,
        census.classes,
        census.acyclic.len()
    );
    Ok(())
}
