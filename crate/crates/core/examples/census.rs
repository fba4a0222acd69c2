//! Run with: cargo run --release --example census
//!
//! Classifies all 128 sub-arrangements of F_2^3 and the orbits of those in
//! F_3^3, then prints the tally of every check.

use freearr::harness::census::{run_census, CensusMode, CensusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p, mode) in [(2, CensusMode::Exhaustive), (3, CensusMode::OrbitReduced)] {
        let report = run_census(&CensusSpec::new(p, 1, 3, mode))?;
        let s = &report.summary;
        println!(
            "q={p} {}: {} records covering {} arrangements",
            s.mode, s.records, s.weighted_records
        );
        for (claim, t) in &s.checks {
            println!(
                "  {claim:<32} {:>6} checked, {} violations",
                t.checked, t.violations
            );
        }
        println!("  verdicts {:?}", s.verdicts);
        let free: Vec<String> = s
            .free_by_size
            .iter()
            .map(|(n, t)| format!("{n}:{}/{}", t.free, t.total))
            .collect();
        println!("  free by size {}", free.join(" "));
    }
    Ok(())
}
