//! The randomized self-check: random small sites and precosheaves checked
//! against independent oracles.

use cosheaf::io::{canonical_string, report_json};
use cosheaf::oracle::oracle_suite;

fn main() -> cosheaf::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let cases: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(25);
    let report = oracle_suite(seed, cases, 6)?;
    print!("{}", canonical_string(&report_json(&report)));
    Ok(())
}
