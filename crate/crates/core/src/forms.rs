//! Holomorphic 1-forms `omega_{n,nu}` as exponent vectors, their products in the
//! invariant quadratic differentials, and the exact injectivity test.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coverdata::{AbelianCoverDatum, Character, PrymDatum};
use crate::exactalg::{rank_exact, Rational};

/// Branch tuples after the first are drawn from `[-BRANCH_RANGE, BRANCH_RANGE]`.
pub const BRANCH_RANGE: i64 = 1000;
pub const DEFAULT_TRIALS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    #[error("characters {0} and {1} are not inverse to each other")]
    CharactersDoNotCancel(String, String),
    #[error("branch points must be pairwise distinct")]
    DuplicateBranchPoints,
    #[error("expected {expected} branch points, got {found}")]
    WrongBranchCount { expected: usize, found: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

/// `omega_{n,nu} = z^nu w_1^{n_1} ... w_m^{n_m} prod_j (z - z_j)^{e_j} dz`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormExponent {
    pub character: Character,
    pub nu: u64,
    pub w_exponents: Vec<u64>,
    pub z_exponents: Vec<i64>,
    alpha_tilde: Vec<i64>,
}

impl fmt::Display for FormExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "omega[{}; {}]", self.character, self.nu)
    }
}

/// The `d_n` forms of the `n`-eigenspace; empty for the trivial character.
pub fn form_basis(datum: &AbelianCoverDatum, n: &Character) -> Vec<FormExponent> {
    if n.is_trivial() {
        return Vec::new();
    }
    let (_, alpha_tilde) = datum.alpha_vector(n.exponents());
    let nm = datum.modulus() as i64;
    let z_exponents: Vec<i64> = alpha_tilde.iter().map(|&a| (-a).div_euclid(nm)).collect();
    (0..datum.eigenspace_dim(n.exponents()))
        .map(|nu| FormExponent {
            character: n.clone(),
            nu,
            w_exponents: n.exponents().coords().to_vec(),
            z_exponents: z_exponents.clone(),
            alpha_tilde: alpha_tilde.clone(),
        })
        .collect()
}

/// `z^a (dz)^2 / prod_{j: pole_j = 1} (z - z_j)`.
///
/// `poly_coeffs` holds the numerator over the full product `prod_j (z - z_j)`,
/// expanded at concrete branch points, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadDifferential {
    pub z_power: u64,
    pub pole_orders: Vec<u8>,
    pub poly_coeffs: Vec<Rational>,
}

impl QuadDifferential {
    pub fn numerator_degree(&self) -> usize {
        self.z_power as usize + self.pole_orders.iter().filter(|&&p| p == 0).count()
    }
}

impl fmt::Display for QuadDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = |j: usize| format!("(z - z_{})", j + 1);
        let mut num = Vec::new();
        match self.z_power {
            0 => {}
            1 => num.push("z".to_string()),
            k => num.push(format!("z^{k}")),
        }
        let mut den = String::new();
        for (j, &p) in self.pole_orders.iter().enumerate() {
            if p == 1 {
                den.push_str(&factor(j));
            }
        }
        num.push("(dz)^2".into());
        write!(f, "{}", num.join(" "))?;
        if !den.is_empty() {
            write!(f, " / ({den})")?;
        }
        Ok(())
    }
}

/// A basis of the invariant part of `Sym^2` of the chosen eigenspaces:
/// unordered pairs of forms with inverse characters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SymBasis {
    pub pairs: Vec<(FormExponent, FormExponent)>,
}

impl SymBasis {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Pairs `omega_{n,nu} . omega_{-n,mu}` over the anti-invariant characters.
pub fn sym2_invariant_basis(prym: &PrymDatum) -> SymBasis {
    let h = prym.subgroup();
    sym2_basis_where(prym.datum(), |c| !c.is_trivial_on(h))
}

/// Pairs of forms with inverse characters, both satisfying `keep`. `keep` must
/// be closed under inversion. For self-inverse characters the pairs `nu <= mu`
/// are taken.
pub fn sym2_basis_where(datum: &AbelianCoverDatum, keep: impl Fn(&Character) -> bool) -> SymBasis {
    let nm = datum.modulus();
    let chars = datum.characters();
    let mut pairs = Vec::new();
    for (i, c) in chars.iter().enumerate() {
        if c.is_trivial() || !keep(c) {
            continue;
        }
        let neg: Vec<u64> = c.values().iter().map(|&v| (nm - v) % nm).collect();
        let j = chars
            .iter()
            .position(|d| d.values() == neg.as_slice())
            .expect("characters form a group");
        if j < i {
            continue;
        }
        let left = form_basis(datum, c);
        let right = form_basis(datum, &chars[j]);
        for a in &left {
            for b in &right {
                if i == j && b.nu < a.nu {
                    continue;
                }
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    SymBasis { pairs }
}

/// The product `m(a . b)` evaluated at the given branch points.
///
/// With `E_j = e_j + e'_j + (alpha~_j + alpha~'_j)/N` the product is
/// `z^{nu+nu'} prod_j (z - z_j)^{E_j} (dz)^2`; the `w`-monomials cancel up to a
/// constant because the characters are inverse.
pub fn multiply(
    datum: &AbelianCoverDatum,
    pair: (&FormExponent, &FormExponent),
    branch_points: &[Rational],
) -> Result<QuadDifferential, FormsError> {
    let (a, b) = pair;
    let s = datum.branch_count();
    let nm = datum.modulus();
    if branch_points.len() != s {
        return Err(FormsError::WrongBranchCount {
            expected: s,
            found: branch_points.len(),
        });
    }
    for (i, p) in branch_points.iter().enumerate() {
        if branch_points[..i].contains(p) {
            return Err(FormsError::DuplicateBranchPoints);
        }
    }
    let cancel = a
        .character
        .values()
        .iter()
        .zip(b.character.values())
        .all(|(x, y)| (x + y) % nm == 0);
    if !cancel {
        return Err(FormsError::CharactersDoNotCancel(
            a.character.to_string(),
            b.character.to_string(),
        ));
    }
    let mut pole_orders = Vec::with_capacity(s);
    for j in 0..s {
        let carry = a.alpha_tilde[j] + b.alpha_tilde[j];
        debug_assert_eq!(carry % nm as i64, 0);
        let e = a.z_exponents[j] + b.z_exponents[j] + carry / nm as i64;
        match e {
            0 => pole_orders.push(0),
            -1 => pole_orders.push(1),
            _ => {
                return Err(FormsError::InvariantViolation(format!(
                    "exponent {e} at branch point {}",
                    j + 1
                )))
            }
        }
    }
    let z_power = a.nu + b.nu;
    let mut q = QuadDifferential {
        z_power,
        pole_orders,
        poly_coeffs: Vec::new(),
    };
    if q.numerator_degree() + 4 > s {
        return Err(FormsError::InvariantViolation(format!(
            "numerator degree {} exceeds {}",
            q.numerator_degree(),
            s as i64 - 4
        )));
    }
    let mut poly = vec![Rational::zero(); z_power as usize];
    poly.push(Rational::from_integer(1.into()));
    for (j, &p) in q.pole_orders.iter().enumerate() {
        if p == 0 {
            poly = times_linear(&poly, &branch_points[j]);
        }
    }
    poly.resize(s - 3, Rational::zero());
    q.poly_coeffs = poly;
    Ok(q)
}

/// `poly * (z - root)`.
fn times_linear(poly: &[Rational], root: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); poly.len() + 1];
    for (k, c) in poly.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * root;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Injectivity {
    Injective { tuple: Vec<i64>, rank: usize },
    NotInjectiveAtAllTried { tuples: Vec<Vec<i64>>, ranks: Vec<usize> },
}

impl Injectivity {
    pub fn is_injective(&self) -> bool {
        matches!(self, Injectivity::Injective { .. })
    }
}

/// Branch tuples tried by [`injectivity_check`]: `(0, 1, ..., s-1)` followed by
/// `trials - 1` tuples of distinct integers determined by `seed`.
pub fn branch_tuples(s: usize, trials: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![(0..s as i64).collect::<Vec<_>>()];
    let width = (2 * BRANCH_RANGE + 1) as usize;
    for _ in 1..trials.max(1) {
        out.push(
            sample(&mut rng, width, s)
                .into_iter()
                .map(|k| k as i64 - BRANCH_RANGE)
                .collect(),
        );
    }
    out
}

/// Rank of the products of `basis` in the coefficients of `z^0 .. z^{s-4}`.
pub fn product_rank(
    datum: &AbelianCoverDatum,
    basis: &SymBasis,
    tuple: &[i64],
) -> Result<usize, FormsError> {
    let points: Vec<Rational> = tuple
        .iter()
        .map(|&t| Rational::from_integer(BigInt::from(t)))
        .collect();
    let rows = basis
        .pairs
        .iter()
        .map(|(a, b)| multiply(datum, (a, b), &points).map(|q| q.poly_coeffs))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rank_exact(&rows))
}

/// Tests whether the multiplication map on `basis` is injective at one of the
/// tried branch tuples. The first witness in tuple order is reported.
pub fn injectivity_check_basis(
    datum: &AbelianCoverDatum,
    basis: &SymBasis,
    trials: usize,
    seed: u64,
) -> Result<Injectivity, FormsError> {
    let tuples = branch_tuples(datum.branch_count(), trials, seed);
    let mut ranks = Vec::new();
    for t in &tuples {
        let rank = product_rank(datum, basis, t)?;
        if rank == basis.len() {
            return Ok(Injectivity::Injective {
                tuple: t.clone(),
                rank,
            });
        }
        ranks.push(rank);
    }
    Ok(Injectivity::NotInjectiveAtAllTried { tuples, ranks })
}

pub fn injectivity_check(prym: &PrymDatum, trials: usize, seed: u64) -> Result<Injectivity, FormsError> {
    injectivity_check_basis(prym.datum(), &sym2_invariant_basis(prym), trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::GroupElement;
    use crate::coverdata::parse_data;

    fn prym(text: &str) -> PrymDatum {
        parse_data(text).unwrap()[0].build().unwrap()
    }

    fn chi(p: &PrymDatum, c: &[i64]) -> Character {
        p.datum().character(&GroupElement::new(p.datum().modulus(), c))
    }

    fn points(t: &[i64]) -> Vec<Rational> {
        t.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn form_bases_of_the_sextic() {
        let p = prym("N=6; A=1,1,1,1,2; H=2");
        let d = p.datum();
        let f2 = form_basis(d, &chi(&p, &[2]));
        assert_eq!(f2.len(), 2);
        assert!(f2.iter().all(|f| f.z_exponents == vec![-1; 5]));
        assert_eq!(f2.iter().map(|f| f.nu).collect::<Vec<_>>(), vec![0, 1]);
        let f4 = form_basis(d, &chi(&p, &[4]));
        assert_eq!(f4.len(), 1);
        assert_eq!(f4[0].z_exponents, vec![-1, -1, -1, -1, -2]);
        assert!(form_basis(d, &chi(&p, &[5])).is_empty());
        assert!(form_basis(d, &chi(&p, &[0])).is_empty());
    }

    #[test]
    fn sym_bases() {
        let p = prym("N=6; A=1,1,1,1,2; H=2");
        let b = sym2_invariant_basis(&p);
        assert_eq!(b.len(), 2);
        assert!(b.pairs.iter().all(|(x, y)| {
            x.character.exponents().coords() == [2] && y.character.exponents().coords() == [4]
        }));

        let p = prym("N=3; A=1,0,1,2,2;0,2,2,0,2; H=0,1");
        let b = sym2_invariant_basis(&p);
        let chars: Vec<(Vec<u64>, Vec<u64>)> = b
            .pairs
            .iter()
            .map(|(x, y)| {
                (
                    x.character.exponents().coords().to_vec(),
                    y.character.exponents().coords().to_vec(),
                )
            })
            .collect();
        assert_eq!(chars, vec![(vec![1, 1], vec![2, 2]), (vec![1, 2], vec![2, 1])]);

        assert!(sym2_invariant_basis(&prym("N=6; A=1,1,1,1,2; H=0")).is_empty());
    }

    #[test]
    fn products_of_the_sextic() {
        let p = prym("N=6; A=1,1,1,1,2; H=2");
        let d = p.datum();
        let beta = &form_basis(d, &chi(&p, &[4]))[0];
        let alpha = form_basis(d, &chi(&p, &[2]));
        let pts = points(&[0, 1, 2, 3, 4]);
        let q = multiply(d, (&alpha[0], beta), &pts).unwrap();
        assert_eq!(q.to_string(), "(dz)^2 / ((z - z_1)(z - z_2)(z - z_3)(z - z_4)(z - z_5))");
        assert_eq!(q.pole_orders, vec![1; 5]);
        let q = multiply(d, (&alpha[1], beta), &pts).unwrap();
        assert_eq!(q.to_string(), "z (dz)^2 / ((z - z_1)(z - z_2)(z - z_3)(z - z_4)(z - z_5))");
        assert_eq!(q.poly_coeffs, points(&[0, 1]));
    }

    #[test]
    fn products_of_the_z2_cube_example() {
        let p = prym("N=2; A=0,0,1,1,0,0;0,1,1,1,0,1;1,1,1,1,1,1; H=1,0,0;0,1,0");
        let d = p.datum();
        let w1 = &form_basis(d, &chi(&p, &[0, 1, 0]))[0];
        let q = multiply(d, (w1, w1), &points(&[0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(q.to_string(), "(dz)^2 / ((z - z_2)(z - z_3)(z - z_4)(z - z_6))");
        // over the full product the numerator is (z - z_1)(z - z_5) = z (z - 4)
        assert_eq!(q.poly_coeffs, points(&[0, -4, 1]));
    }

    #[test]
    fn hyperelliptic_square() {
        let d = AbelianCoverDatum::validate(2, &[vec![1; 6]]).unwrap();
        let f = &form_basis(&d, &d.characters()[1])[0];
        let q = multiply(&d, (f, f), &points(&[0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(q.to_string(), "(dz)^2 / ((z - z_1)(z - z_2)(z - z_3)(z - z_4)(z - z_5)(z - z_6))");
    }

    #[test]
    fn multiply_errors() {
        let p = prym("N=6; A=1,1,1,1,2; H=2");
        let d = p.datum();
        let a = &form_basis(d, &chi(&p, &[2]))[0];
        let b = &form_basis(d, &chi(&p, &[1]))[0];
        assert!(matches!(
            multiply(d, (a, b), &points(&[0, 1, 2, 3, 4])),
            Err(FormsError::CharactersDoNotCancel(..))
        ));
        let c = &form_basis(d, &chi(&p, &[4]))[0];
        assert_eq!(
            multiply(d, (a, c), &points(&[0, 1, 2, 3, 3])),
            Err(FormsError::DuplicateBranchPoints)
        );
    }

    #[test]
    fn golden_injectivity() {
        for text in [
            "N=6; A=1,1,1,1,2; H=2",
            "N=3; A=1,0,1,2,2;0,2,2,0,2; H=0,1",
            "N=2; A=0,0,1,1,0,0;0,1,1,1,0,1;1,1,1,1,1,1; H=1,0,0;0,1,0",
        ] {
            let r = injectivity_check(&prym(text), DEFAULT_TRIALS, 0).unwrap();
            assert_eq!(
                r,
                Injectivity::Injective {
                    tuple: (0..prym(text).datum().branch_count() as i64).collect(),
                    rank: sym2_invariant_basis(&prym(text)).len(),
                }
            );
        }
    }

    #[test]
    fn tuples_are_deterministic_and_distinct() {
        let a = branch_tuples(6, 5, 7);
        assert_eq!(a, branch_tuples(6, 5, 7));
        assert_eq!(a[0], vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(a.len(), 5);
        for t in &a {
            let mut u = t.clone();
            u.sort();
            u.dedup();
            assert_eq!(u.len(), 6);
            assert!(t.iter().all(|x| x.abs() <= BRANCH_RANGE));
        }
    }
}
