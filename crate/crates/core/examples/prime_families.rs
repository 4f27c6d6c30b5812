//! Primes whose squares or powers of two admit no acyclic matching.

use matchkit::primes::{family_table, ExhaustiveOptions, Family};

fn main() -> matchkit::Result<()> {
    for family in [Family::QuadraticResidues, Family::PowersOfTwo] {
        println!("{family:?}");
        for v in family_table(family, 100, ExhaustiveOptions::default())? {
            let exhaustive = match &v.exhaustive {
                Some(e) => format!("{} matchings, {} acyclic", e.matchings, e.acyclic),
                None => "not enumerated".to_string(),
            };
            println!("  p={:>3} |A|={:>2} certificate={} {exhaustive}", v.p, v.subset.len(), v.certificate.holds());
        }
    }
    Ok(())
}
