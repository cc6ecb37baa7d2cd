//! Genera, eigenspace dimensions and the (A)/(B)/(B1)/(B2) verdicts of one datum.
//!
//! ```bash
//! cargo run --example analyze_datum
//! cargo run --example analyze_datum -- "N=4; A=1,1,3,3; H=2"
//! ```

use abelian_prym::conditions::full_report;
use abelian_prym::coverdata::parse_data;
use abelian_prym::forms::DEFAULT_TRIALS;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "N=6; A=1,1,1,1,2; H=2".to_string());
    for spec in parse_data(&text)? {
        let prym = spec.build()?;
        let datum = prym.datum();
        println!("{prym}");
        println!(
            "G~ = {}, |H| = {}, g~ = {}, g = {}, p = {}",
            datum.group().label(),
            prym.subgroup().order(),
            datum.genus_total(),
            prym.genus_quotient()?,
            prym.prym_dimension()?
        );
        let local: Vec<u64> = (0..datum.branch_count()).map(|j| datum.local_order(j)).collect();
        println!("local monodromy orders {local:?}");
        for e in prym.eigenspace_table().entries() {
            let mark = if e.anti_invariant { "-" } else { "+" };
            println!("  {mark} d{} = {}", e.character, e.dim);
        }
        let report = full_report(&prym, DEFAULT_TRIALS, 0, None)?;
        println!("{}", serde_json::to_string_pretty(&report)?);
    }
    Ok(())
}
