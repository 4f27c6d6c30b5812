//! Budgeted search for pairs in Z/p with no acyclic matching.

use matchkit::primes::{acyclic_property_scan, ScanConfig};

fn main() -> matchkit::Result<()> {
    for p in [5, 7, 11] {
        let report = acyclic_property_scan(&ScanConfig::new(p, 4, 200_000, 0), None)?;
        println!(
            "p={p}: {} pairs scanned, {} with an acyclic matching, complete={}",
            report.pairs_scanned, report.acyclic_found, report.complete
        );
        if let Some(w) = report.witness {
            println!("  no acyclic matching for A={:?} B={:?}", w.a, w.b);
        }
    }
    Ok(())
}
