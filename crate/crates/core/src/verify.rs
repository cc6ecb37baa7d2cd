//! Replays the worked examples against expected values.

use serde::Serialize;

use crate::abgroup::GroupElement;
use crate::conditions::{cond_b, cond_b1, dim_pg};
use crate::coverdata::{parse_data, PrymDatum};
use crate::forms::{form_basis, injectivity_check, multiply, DEFAULT_TRIALS};
use crate::exactalg::Rational;

/// A product `omega_{a,nu} . omega_{b,mu}` and its expected display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedProduct {
    pub left: (Vec<i64>, u64),
    pub right: (Vec<i64>, u64),
    pub display: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkedExample {
    pub name: &'static str,
    pub datum: &'static str,
    pub g_tilde: u64,
    pub g: u64,
    pub p: u64,
    pub ram_br: (u64, u64),
    /// Dimensions of the anti-invariant eigenspaces, by exponent vector.
    pub anti_dims: Vec<(Vec<i64>, u64)>,
    pub dim_pg: u64,
    pub cond_b1: bool,
    pub cond_b: bool,
    pub products: Vec<ExpectedProduct>,
    pub injective: bool,
}

fn product(left: (&[i64], u64), right: (&[i64], u64), display: &str) -> ExpectedProduct {
    ExpectedProduct {
        left: (left.0.to_vec(), left.1),
        right: (right.0.to_vec(), right.1),
        display: display.to_string(),
    }
}

pub fn worked_examples() -> Vec<WorkedExample> {
    vec![
        WorkedExample {
            name: "cyclic sextic, four points",
            datum: "N=6; A=1,3,4,4; H=2",
            g_tilde: 3,
            g: 0,
            p: 3,
            ram_br: (5, 5),
            // with the opposite sign convention for characters d_2 and d_4 trade places
            anti_dims: vec![(vec![1], 1), (vec![2], 1), (vec![4], 0), (vec![5], 1)],
            dim_pg: 1,
            cond_b1: true,
            cond_b: true,
            products: vec![product(
                (&[1], 0),
                (&[5], 0),
                "(dz)^2 / ((z - z_1)(z - z_2)(z - z_3)(z - z_4))",
            )],
            injective: true,
        },
        WorkedExample {
            name: "Z3 x Z3, four points",
            datum: "N=3; A=1,1,1,0;0,0,2,1; H=0,1",
            g_tilde: 4,
            g: 1,
            p: 3,
            ram_br: (3, 3),
            anti_dims: vec![
                (vec![0, 1], 0),
                (vec![0, 2], 0),
                (vec![1, 1], 1),
                (vec![1, 2], 1),
                (vec![2, 1], 1),
                (vec![2, 2], 0),
            ],
            dim_pg: 1,
            cond_b1: true,
            cond_b: true,
            products: vec![product(
                (&[1, 2], 0),
                (&[2, 1], 0),
                "(dz)^2 / ((z - z_1)(z - z_2)(z - z_3)(z - z_4))",
            )],
            injective: true,
        },
        WorkedExample {
            name: "cyclic sextic, five points",
            datum: "N=6; A=1,1,1,1,2; H=2",
            g_tilde: 7,
            g: 1,
            p: 6,
            ram_br: (6, 6),
            anti_dims: vec![(vec![1], 3), (vec![2], 2), (vec![4], 1), (vec![5], 0)],
            dim_pg: 2,
            cond_b1: true,
            cond_b: true,
            products: vec![
                product(
                    (&[2], 0),
                    (&[4], 0),
                    "(dz)^2 / ((z - z_1)(z - z_2)(z - z_3)(z - z_4)(z - z_5))",
                ),
                product(
                    (&[2], 1),
                    (&[4], 0),
                    "z (dz)^2 / ((z - z_1)(z - z_2)(z - z_3)(z - z_4)(z - z_5))",
                ),
            ],
            injective: true,
        },
        WorkedExample {
            name: "Z3 x Z3, five points",
            datum: "N=3; A=1,0,1,2,2;0,2,2,0,2; H=0,1",
            g_tilde: 7,
            g: 2,
            p: 5,
            ram_br: (3, 3),
            anti_dims: vec![
                (vec![0, 1], 0),
                (vec![0, 2], 1),
                (vec![1, 1], 1),
                (vec![1, 2], 1),
                (vec![2, 1], 1),
                (vec![2, 2], 1),
            ],
            dim_pg: 2,
            cond_b1: false,
            cond_b: true,
            products: vec![
                product(
                    (&[1, 1], 0),
                    (&[2, 2], 0),
                    "(dz)^2 / ((z - z_1)(z - z_2)(z - z_4)(z - z_5))",
                ),
                product(
                    (&[1, 2], 0),
                    (&[2, 1], 0),
                    "(dz)^2 / ((z - z_1)(z - z_2)(z - z_3)(z - z_4))",
                ),
            ],
            injective: true,
        },
        WorkedExample {
            name: "Z2 x Z2 x Z2, six points",
            datum: "N=2; A=0,0,1,1,0,0;0,1,1,1,0,1;1,1,1,1,1,1; H=1,0,0;0,1,0",
            g_tilde: 5,
            g: 2,
            p: 3,
            ram_br: (0, 0),
            anti_dims: vec![
                (vec![0, 1, 0], 1),
                (vec![0, 1, 1], 0),
                (vec![1, 0, 0], 0),
                (vec![1, 0, 1], 1),
                (vec![1, 1, 0], 0),
                (vec![1, 1, 1], 1),
            ],
            dim_pg: 3,
            cond_b1: false,
            cond_b: true,
            products: vec![
                product(
                    (&[0, 1, 0], 0),
                    (&[0, 1, 0], 0),
                    "(dz)^2 / ((z - z_2)(z - z_3)(z - z_4)(z - z_6))",
                ),
                product(
                    (&[1, 0, 1], 0),
                    (&[1, 0, 1], 0),
                    "(dz)^2 / ((z - z_1)(z - z_2)(z - z_5)(z - z_6))",
                ),
                product(
                    (&[1, 1, 1], 0),
                    (&[1, 1, 1], 0),
                    "(dz)^2 / ((z - z_1)(z - z_3)(z - z_4)(z - z_5))",
                ),
            ],
            injective: true,
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleOutcome {
    pub name: String,
    pub datum: String,
    pub passed: bool,
    /// One line per disagreement: `field: expected X, got Y`.
    pub mismatches: Vec<String>,
}

fn check<T: PartialEq + std::fmt::Debug>(out: &mut Vec<String>, field: &str, expected: T, got: T) {
    if expected != got {
        out.push(format!("{field}: expected {expected:?}, got {got:?}"));
    }
}

pub fn run_example(ex: &WorkedExample) -> ExampleOutcome {
    let mut mismatches = Vec::new();
    let prym: PrymDatum = match parse_data(ex.datum)
        .map_err(|e| e.to_string())
        .and_then(|specs| specs[0].build().map_err(|e| e.to_string()))
    {
        Ok(p) => p,
        Err(e) => {
            return ExampleOutcome {
                name: ex.name.into(),
                datum: ex.datum.into(),
                passed: false,
                mismatches: vec![format!("datum rejected: {e}")],
            }
        }
    };
    let datum = prym.datum();
    let n = datum.modulus();
    check(&mut mismatches, "g~", ex.g_tilde, datum.genus_total());
    match prym.genus_quotient() {
        Ok(g) => {
            check(&mut mismatches, "g", ex.g, g);
            check(&mut mismatches, "p", ex.p, datum.genus_total().saturating_sub(g));
        }
        Err(e) => mismatches.push(format!("g: {e}")),
    }
    let rb = prym.ram_branch_counts();
    check(&mut mismatches, "(ram, br)", ex.ram_br, (rb.ramification_points, rb.branch_points));
    let table = prym.eigenspace_table();
    let anti: Vec<(Vec<i64>, u64)> = table
        .entries()
        .iter()
        .filter(|e| e.anti_invariant)
        .map(|e| {
            let c = e.character.exponents().coords().iter().map(|&x| x as i64).collect();
            (c, e.dim)
        })
        .collect();
    check(&mut mismatches, "anti-invariant dims", ex.anti_dims.clone(), anti);
    check(&mut mismatches, "dim P", ex.dim_pg, dim_pg(&prym));
    check(&mut mismatches, "(B1)", ex.cond_b1, cond_b1(&prym));
    let points: Vec<Rational> = (0..datum.branch_count() as i64)
        .map(|t| Rational::from_integer(t.into()))
        .collect();
    for (i, pr) in ex.products.iter().enumerate() {
        let form = |(c, nu): &(Vec<i64>, u64)| {
            let chi = datum.character(&GroupElement::new(n, c));
            form_basis(datum, &chi).into_iter().nth(*nu as usize)
        };
        let field = format!("product {}", i + 1);
        match (form(&pr.left), form(&pr.right)) {
            (Some(a), Some(b)) => match multiply(datum, (&a, &b), &points) {
                Ok(q) => check(&mut mismatches, &field, pr.display.clone(), q.to_string()),
                Err(e) => mismatches.push(format!("{field}: {e}")),
            },
            _ => mismatches.push(format!("{field}: form not in the basis")),
        }
    }
    match injectivity_check(&prym, DEFAULT_TRIALS, 0) {
        Ok(r) => check(&mut mismatches, "injective", ex.injective, r.is_injective()),
        Err(e) => mismatches.push(format!("injective: {e}")),
    }
    match cond_b(&prym, DEFAULT_TRIALS, 0) {
        Ok(v) => check(&mut mismatches, "(B)", ex.cond_b, v.is_established()),
        Err(e) => mismatches.push(format!("(B): {e}")),
    }
    ExampleOutcome {
        name: ex.name.into(),
        datum: ex.datum.into(),
        passed: mismatches.is_empty(),
        mismatches,
    }
}

pub fn run_examples(examples: &[WorkedExample]) -> Vec<ExampleOutcome> {
    examples.iter().map(run_example).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_worked_examples_pass() {
        for o in run_examples(&worked_examples()) {
            assert!(o.passed, "{}: {:?}", o.name, o.mismatches);
        }
    }

    #[test]
    fn perturbed_expectation_names_the_example() {
        let mut exs = worked_examples();
        exs[2].dim_pg = 3;
        let out = run_examples(&exs);
        assert!(!out[2].passed);
        assert_eq!(out[2].name, "cyclic sextic, five points");
        assert_eq!(out[2].mismatches, vec!["dim P: expected 3, got 2"]);
        assert!(out.iter().enumerate().all(|(i, o)| i == 2 || o.passed));
    }
}
