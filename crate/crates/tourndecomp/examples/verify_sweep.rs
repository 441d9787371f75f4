//! Exhaustive verification of all tournaments on 5 vertices, written to a temporary report.

use tourndecomp::verify::{run_verify, Selection, Strategy, VerifyConfig};

fn main() -> tourndecomp::Result<()> {
    let out = std::env::temp_dir().join("tourndecomp-n5.jsonl");
    let cfg = VerifyConfig::new(5, Selection::All, Strategy::Both, &out);
    let s = run_verify(&cfg)?;
    println!("{} records, {} with violations", s.records, s.violations);
    println!("gap histogram by class: {:?}", s.gap_by_class);
    println!("pipeline finished without fallback on {} of {}", s.pipeline_without_fallback, s.pipeline_runs);
    println!("report: {}", out.display());
    Ok(())
}
