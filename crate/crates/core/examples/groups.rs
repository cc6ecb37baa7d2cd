//! Subgroups, quotients and automorphisms of a finite abelian group given by
//! generators in (Z/N)^m.

use abelian_prym::abgroup::{automorphisms, subgroups, GroupElement, SubgroupSpan, DEFAULT_AUTOMORPHISM_BOUND};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Z/2 x Z/4 inside (Z/4)^2
    let g = SubgroupSpan::span(4, 2, &[GroupElement::new(4, &[2, 0]), GroupElement::new(4, &[0, 1])])?;
    println!("G = {} of order {}", g.label(), g.order());
    for h in subgroups(&g, 1000)? {
        let gens: Vec<String> = h.generators().iter().map(|x| format!("{:?}", x.coords())).collect();
        println!(
            "  H = {:<8} generated by {:<20} G/H = {:?}",
            h.label(),
            gens.join(" "),
            g.quotient_factors(&h)
        );
    }
    println!("|Aut G| = {}", automorphisms(&g, DEFAULT_AUTOMORPHISM_BOUND)?.len());
    Ok(())
}
