//! Enumerates cyclic covers with four and five branch points and prints the table.
//!
//! ```bash
//! cargo run --release --example search_cyclic -- 10
//! ```

use abelian_prym::search::{run_search, SearchSpec};
use abelian_prym::table::{to_csv_string, TableRow};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_n: u64 = std::env::args().nth(1).map_or(Ok(8), |a| a.parse())?;
    let spec = SearchSpec::parse(&format!("N = 2..{max_n}\ns = 4,5"))?;
    let rows = run_search(&spec)?;
    let table: Vec<TableRow> = rows.iter().map(TableRow::from_search_row).collect();
    print!("{}", to_csv_string(&table));
    let b2 = table.iter().filter(|r| r.b2.is_set()).count();
    eprintln!("{} classes, {b2} with (B2) established", table.len());
    Ok(())
}
