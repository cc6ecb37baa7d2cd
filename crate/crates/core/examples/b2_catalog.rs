//! Certifying (B2) from a catalog of known special families when the
//! built-in sufficient criterion does not apply.

use abelian_prym::conditions::{cond_b2_lite, Catalog};
use abelian_prym::coverdata::parse_data;

const CATALOG: &str = "\
group_order,s,local_orders,label
9,5,3-3-3-3-3,Z3 x Z3 five points
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let prym = parse_data("N=3; A=1,0,1,2,2; 0,2,2,0,2; H=0,1")?[0].build()?;
    println!("without catalog: {:?}", cond_b2_lite(&prym, 5, 0, None)?);
    let catalog = Catalog::from_reader(CATALOG.as_bytes())?;
    println!("with catalog:    {:?}", cond_b2_lite(&prym, 5, 0, Some(&catalog))?);
    Ok(())
}
