//! Two presentations of the same cover get the same canonical key: permuting
//! branch points, changing generators of the group, or embedding it in a
//! larger ambient exponent.

use abelian_prym::coverdata::parse_data;
use abelian_prym::search::canonical_key;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let presentations = [
        "N=6; A=1,1,1,1,2; H=2",
        "N=6; A=2,1,1,1,1; H=4",
        "N=6; A=5,5,5,5,4; H=2",
        "N=12; A=2,2,2,2,4; H=4",
    ];
    for text in presentations {
        let prym = parse_data(text)?[0].build()?;
        println!("{text:<26} -> {}", canonical_key(&prym)?);
    }
    Ok(())
}
