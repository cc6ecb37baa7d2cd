mod common;

use abelian_prym::abgroup::{automorphisms, pairing, GroupElement, SubgroupSpan};
use abelian_prym::coverdata::{AbelianCoverDatum, PrymDatum};
use abelian_prym::conditions::dim_pg;
use abelian_prym::exactalg::Rational;
use abelian_prym::forms::{branch_tuples, multiply, product_rank, sym2_invariant_basis};
use abelian_prym::search::canonical_key;
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prym_from_seed(seed: u64) -> (PrymDatum, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_prym(&mut rng), rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn eigenspace_dimensions_sum_to_genus(seed in any::<u64>()) {
        let (prym, _) = prym_from_seed(seed);
        let datum = prym.datum();
        let oracle = genus_oracle(datum);
        prop_assert_eq!(datum.genus_total() as i64, oracle);
        prop_assert_eq!(prym.eigenspace_table().total() as i64, oracle);
    }

    #[test]
    fn quotient_genus_agrees_with_oracle(seed in any::<u64>()) {
        let (prym, _) = prym_from_seed(seed);
        let g = prym.genus_quotient().unwrap();
        prop_assert_eq!(g as i64, quotient_genus_oracle(&prym));
        let invariant: u64 = prym.eigenspace_table().entries().iter()
            .filter(|e| !e.anti_invariant).map(|e| e.dim).sum();
        prop_assert_eq!(g, invariant);
    }

    #[test]
    fn ramification_matches_orbit_count(seed in any::<u64>()) {
        let (prym, _) = prym_from_seed(seed);
        let rb = prym.ram_branch_counts();
        prop_assert_eq!((rb.ramification_points, rb.branch_points), ram_branch_oracle(&prym));
    }

    #[test]
    fn invariant_basis_has_dim_pg_elements(seed in any::<u64>()) {
        let (prym, _) = prym_from_seed(seed);
        let oracle = dim_pg_oracle(&prym);
        prop_assert_eq!(dim_pg(&prym), oracle);
        prop_assert_eq!(sym2_invariant_basis(&prym).len() as u64, oracle);
    }

    #[test]
    fn products_respect_pole_and_degree_bounds(seed in any::<u64>()) {
        let (prym, _) = prym_from_seed(seed);
        let datum = prym.datum();
        let s = datum.branch_count();
        let tuple = &branch_tuples(s, 2, seed)[1];
        let points: Vec<Rational> = tuple.iter().map(|&t| Rational::from_integer(t.into())).collect();
        for (a, b) in &sym2_invariant_basis(&prym).pairs {
            let q = multiply(datum, (a, b), &points).unwrap();
            prop_assert!(q.pole_orders.iter().all(|&p| p <= 1));
            prop_assert!(q.numerator_degree() + 4 <= s);
            prop_assert_eq!(q.poly_coeffs.len(), s - 3);
            let swapped = multiply(datum, (b, a), &points).unwrap();
            prop_assert_eq!(&q, &swapped);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonical_key_survives_relabeling(seed in any::<u64>()) {
        let (prym, mut rng) = prym_from_seed(seed);
        let key = canonical_key(&prym).unwrap();
        let auts = if prym.datum().group().order() <= 16 {
            automorphisms(prym.datum().group(), 10_000).unwrap()
        } else {
            Vec::new()
        };
        for _ in 0..20 {
            let other = random_presentation(&prym, &mut rng, &auts);
            prop_assert_eq!(&canonical_key(&other).unwrap(), &key);
        }
    }

    #[test]
    fn rank_is_the_same_for_generic_tuples(seed in any::<u64>()) {
        let (prym, _) = prym_from_seed(seed);
        let basis = sym2_invariant_basis(&prym);
        let datum = prym.datum();
        let ranks: Vec<usize> = (0..20u64)
            .map(|k| product_rank(datum, &basis, &branch_tuples(datum.branch_count(), 2, k)[1]).unwrap())
            .collect();
        prop_assert!(ranks.iter().all(|&r| r == ranks[0]), "ranks {:?}", ranks);
    }

    #[test]
    fn pairing_is_bilinear(n in 2u64..13, m in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = || {
            let c: Vec<i64> = (0..m).map(|_| rng.gen_range(0..n as i64)).collect();
            GroupElement::new(n, &c)
        };
        let (a, b, x, y) = (v(), v(), v(), v());
        let p = |u: &GroupElement, w: &GroupElement| pairing(u, w).unwrap().value();
        prop_assert_eq!(p(&a, &x.add(&y)), (p(&a, &x) + p(&a, &y)) % n);
        prop_assert_eq!(p(&a.add(&b), &x), (p(&a, &x) + p(&b, &x)) % n);
        prop_assert_eq!(p(&a.neg(), &x), (n - p(&a, &x)) % n);
    }
}

#[test]
fn genus_oracle_is_not_vacuous() {
    // hyperelliptic genus 2: six branch points of order 2
    let d = AbelianCoverDatum::validate(2, &[vec![1; 6]]).unwrap();
    assert_eq!(genus_oracle(&d), 2);
    let g = SubgroupSpan::standard(&[2, 4]);
    assert_eq!(closure(4, 2, g.generators()).len(), 8);
}

#[test]
fn one_random_datum_per_seed_is_deterministic() {
    let a: Vec<String> = (0..20).map(|s| prym_from_seed(s).0.to_string()).collect();
    let b: Vec<String> = (0..20).map(|s| prym_from_seed(s).0.to_string()).collect();
    assert_eq!(a, b);
}

#[test]
fn generator_covers_the_space() {
    let data: Vec<PrymDatum> = (0..500).map(|s| prym_from_seed(s).0).collect();
    let count = |f: &dyn Fn(&PrymDatum) -> bool| data.iter().filter(|p| f(p)).count();
    assert!(count(&|p| p.subgroup().is_trivial()) > 20);
    assert!(count(&|p| !p.subgroup().is_trivial() && p.subgroup().order() < p.datum().group().order()) > 100);
    assert!(count(&|p| p.datum().group().invariant_factors().len() >= 2) > 50);
    assert!(count(&|p| p.datum().group().order() > 16) > 20);
    assert!(count(&|p| dim_pg(p) > 0) > 100);
    assert!(count(&|p| p.ram_branch_counts().ramification_points > 0) > 100);
    assert!(count(&|p| p.datum().branch_count() == 7) > 30);
}
