//! Runs every built-in example with small trial counts.

use minproj::catalog::{list, run_example};
use serde_json::json;

fn main() -> minproj::Result<()> {
    for entry in list() {
        let r = run_example(entry.name, &json!({"trials": 3}))?;
        println!(
            "{:<20} {:?} unique={} violations={} {} ms",
            entry.name,
            r.status,
            r.certificate.unique_commuting(),
            r.certificate.violations(),
            r.runtime_ms
        );
    }
    Ok(())
}
