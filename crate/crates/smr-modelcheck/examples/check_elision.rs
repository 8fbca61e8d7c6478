//! Checks the elision-support properties of an SMR specification.
//!
//! Usage: cargo run --release --example check_elision [spec-name] [bound]

use smr_modelcheck::observer::{check_elision_support, elision_universe, spec_by_name};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "hp".to_owned());
    let bound: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let obs = spec_by_name(&name).expect("known spec");
    let start = std::time::Instant::now();
    let report = check_elision_support(&obs, &elision_universe(), bound).expect("well-formed");
    println!(
        "{name} at bound {bound}: {} ({} histories, {:?})",
        if report.supported() { "supports elision" } else { "counterexample found" },
        report.histories_explored,
        start.elapsed()
    );
    for r in &report.results {
        match &r.counterexample {
            None => println!("  {}: holds to bound {bound}", r.property.label()),
            Some(c) => {
                println!("  {}: counterexample", r.property.label());
                println!("    h1 = {}", c.history1);
                println!("    h2 = {}", c.history2);
                println!("    address = {}", c.address);
                if let Some(cont) = &c.continuation {
                    println!("    distinguishing continuation = {cont}");
                }
            }
        }
    }
}
