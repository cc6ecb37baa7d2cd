//! Holomorphic forms of each eigenspace and the quadratic differentials obtained
//! by multiplying invariant pairs, at the branch points 0, 1, ..., s-1.

use abelian_prym::coverdata::parse_data;
use abelian_prym::exactalg::Rational;
use abelian_prym::forms::{form_basis, multiply, sym2_invariant_basis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let prym = parse_data("N=6; A=1,1,1,1,2; H=2")?[0].build()?;
    let datum = prym.datum();

    for ch in datum.characters() {
        let basis = form_basis(datum, ch);
        if basis.is_empty() {
            continue;
        }
        println!("character {ch}:");
        for f in &basis {
            println!("  nu = {}, w^{:?}, z-exponents {:?}", f.nu, f.w_exponents, f.z_exponents);
        }
    }

    let points: Vec<Rational> = (0..datum.branch_count() as i64).map(|t| Rational::from_integer(t.into())).collect();
    println!("\ninvariant products at z = 0..{}:", datum.branch_count() - 1);
    for (a, b) in &sym2_invariant_basis(&prym).pairs {
        let q = multiply(datum, (a, b), &points)?;
        let coeffs: Vec<String> = q.poly_coeffs.iter().map(ToString::to_string).collect();
        println!("  {} * {} = {}   coefficients [{}]", a.character, b.character, q, coeffs.join(", "));
    }
    Ok(())
}
