//! Howell normal forms over Z/N decide equality of row spans; fraction-free
//! elimination gives exact ranks over Q.

use abelian_prym::exactalg::{howell_form, rank_exact, ModMatrix, Rational};

fn main() {
    let a = ModMatrix::from_rows(6, &[vec![1, 3, 4, 4], vec![2, 0, 2, 2]]);
    let b = ModMatrix::from_rows(6, &[vec![1, 3, 4, 4], vec![0, 0, 0, 0], vec![3, 3, 0, 0]]);
    println!("howell(a) = {}", howell_form(&a));
    println!("howell(b) = {}", howell_form(&b));
    println!("same span: {}", howell_form(&a) == howell_form(&b));

    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let rows = vec![
        vec![q(1, 2), q(1, 3), q(0, 1)],
        vec![q(1, 1), q(2, 3), q(0, 1)],
        vec![q(0, 1), q(0, 1), q(5, 7)],
    ];
    println!("rank = {}", rank_exact(&rows));
}
