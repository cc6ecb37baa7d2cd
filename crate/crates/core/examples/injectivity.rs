//! Rank of the multiplication map on the invariant quadratic products over
//! several branch tuples, and how the verdict depends on the trial count.

use abelian_prym::coverdata::parse_data;
use abelian_prym::forms::{branch_tuples, injectivity_check, product_rank, sym2_invariant_basis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["N=3; A=1,0,1,2,2; 0,2,2,0,2; H=0,1", "N=2; A=0,0,1,1,0,0; 0,1,1,1,0,1; 1,1,1,1,1,1; H=1,0,0; 0,1,0"] {
        let prym = parse_data(text)?[0].build()?;
        let datum = prym.datum();
        let basis = sym2_invariant_basis(&prym);
        println!("{prym}: {} invariant products, s - 3 = {}", basis.len(), datum.branch_count() - 3);
        for tuple in branch_tuples(datum.branch_count(), 4, 7) {
            println!("  rank {} at {:?}", product_rank(datum, &basis, &tuple)?, tuple);
        }
        println!("  verdict: {:?}", injectivity_check(&prym, 5, 0)?);
    }
    Ok(())
}
