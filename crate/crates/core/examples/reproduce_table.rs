//! Runs the desk-scale search and matches the bundled reference table against it.
//!
//! ```bash
//! cargo run --release --example reproduce_table
//! ```

use std::time::Instant;

use abelian_prym::search::{run_search, SearchSpec};
use abelian_prym::table::{compare, read_import, split_scope, TableRow};

const SPEC: &str = include_str!("../data/desk_scale.spec");
const REFERENCE: &[u8] = include_bytes!("../data/reference_table.csv");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SearchSpec::parse(SPEC)?;
    let start = Instant::now();
    let rows = run_search(&spec)?;
    let computed: Vec<TableRow> = rows.iter().map(TableRow::from_search_row).collect();
    println!("{} computed rows in {:.2?}", computed.len(), start.elapsed());

    let (imported, skipped) = read_import(REFERENCE)?;
    let (imported, outside) = split_scope(&spec, imported);
    let cmp = compare(&computed, &imported, skipped);
    println!(
        "reference rows in scope {}, outside {}; matched {}, weaker flags {}, unmatched {}",
        imported.len(),
        outside.len(),
        cmp.matched.len(),
        cmp.weaker_flags.len(),
        cmp.unmatched_imported.len()
    );
    for m in cmp.weaker_flags.iter().chain(&cmp.unmatched_imported) {
        println!("  line {}: {:?}", m.line, m.imported);
    }
    let self_paired = computed.iter().filter(|r| r.b1 == abelian_prym::table::Flag::YesSelfPaired).count();
    println!("{self_paired} computed rows rely on the self-paired reading of (B1)");
    Ok(())
}
