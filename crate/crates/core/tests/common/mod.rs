//! Random data and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use abelian_prym::abgroup::GroupElement;
use abelian_prym::coverdata::{AbelianCoverDatum, PrymDatum};
use abelian_prym::exactalg::gcd;
use abelian_prym::abgroup::Automorphism;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const MAX_N: u64 = 12;
pub const MAX_RANK: usize = 3;
pub const MAX_S: usize = 7;
pub const MAX_ORDER: usize = 64;

fn random_vector(rng: &mut ChaCha8Rng, n: u64, m: usize) -> Vec<i64> {
    (0..m).map(|_| rng.gen_range(0..n as i64)).collect()
}

/// A valid datum with `N <= 12`, `m <= 3`, `3 <= s <= 7`, `|G~| <= 64` and a
/// subgroup spanned by up to two random elements of `G~`.
pub fn random_prym(rng: &mut ChaCha8Rng) -> PrymDatum {
    loop {
        let n = rng.gen_range(2..=MAX_N);
        let m = rng.gen_range(1..=MAX_RANK);
        let s = rng.gen_range(3..=MAX_S);
        let mut cols: Vec<Vec<i64>> = Vec::with_capacity(s);
        while cols.len() < s - 1 {
            let v = random_vector(rng, n, m);
            if v.iter().any(|&x| x != 0) {
                cols.push(v);
            }
        }
        let last: Vec<i64> = (0..m)
            .map(|i| (-cols.iter().map(|c| c[i]).sum::<i64>()).rem_euclid(n as i64))
            .collect();
        if last.iter().all(|&x| x == 0) {
            continue;
        }
        cols.push(last);
        let elems: Vec<GroupElement> = cols.iter().map(|c| GroupElement::new(n, c)).collect();
        let Ok(datum) = AbelianCoverDatum::from_columns(n, &elems) else {
            continue;
        };
        if datum.group().order() > MAX_ORDER {
            continue;
        }
        let k = rng.gen_range(0..=2);
        let gens: Vec<GroupElement> = (0..k)
            .map(|_| {
                let e = datum.group().elements();
                e[rng.gen_range(0..e.len())].clone()
            })
            .collect();
        return PrymDatum::new(datum, &gens).expect("generators lie in the group");
    }
}

pub fn order_of(x: &GroupElement) -> u64 {
    let mut k = 1;
    let mut y = x.clone();
    while !y.is_zero() {
        y = y.add(x);
        k += 1;
    }
    k
}

/// Every element of the span of `gens`, by closure under addition.
pub fn closure(n: u64, m: usize, gens: &[GroupElement]) -> BTreeSet<Vec<u64>> {
    let mut set = BTreeSet::new();
    set.insert(vec![0; m]);
    let mut frontier = vec![GroupElement::zero(n, m)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.add(g);
            if set.insert(y.coords().to_vec()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Riemann-Hurwitz for `C~ -> P^1` with element orders found by repeated addition.
pub fn genus_oracle(datum: &AbelianCoverDatum) -> i64 {
    let order = datum.group().order() as i64;
    // 2g - 2 = |G| (-2 + sum (1 - 1/o_j)), scaled by lcm of the o_j
    let orders: Vec<i64> = datum.columns().iter().map(|l| order_of(l) as i64).collect();
    let l = orders.iter().fold(1i64, |a, &b| a / gcd(a as u64, b as u64) as i64 * b);
    let sum: i64 = -2 * l + orders.iter().map(|&o| l - l / o).sum::<i64>();
    let twice = order * sum;
    assert_eq!(twice % l, 0);
    (twice / l + 2) / 2
}

/// Genus of `C~/H` by Riemann-Hurwitz on the quotient group, orders of images
/// found through coset sets.
pub fn quotient_genus_oracle(prym: &PrymDatum) -> i64 {
    let datum = prym.datum();
    let (n, m) = (datum.modulus(), datum.rank());
    let h = closure(n, m, prym.subgroup().generators());
    let q = (datum.group().order() / h.len()) as i64;
    let mut num = -2i64 * 720720;
    for l in datum.columns() {
        let mut k = 1i64;
        let mut y = l.clone();
        while !h.contains(y.coords()) {
            y = y.add(l);
            k += 1;
        }
        num += 720720 - 720720 / k;
    }
    let twice = q * num;
    assert_eq!(twice % 720720, 0);
    (twice / 720720 + 2) / 2
}

/// `(ram, br)` of `C~ -> C~/H`: over `z_j` the fibre of `C~` has `|G~|/o_j`
/// points with stabilizer `<l_j>`, and those are ramified iff `<l_j> meets H`.
pub fn ram_branch_oracle(prym: &PrymDatum) -> (u64, u64) {
    let datum = prym.datum();
    let (n, m) = (datum.modulus(), datum.rank());
    let g = datum.group().order() as u64;
    let h = closure(n, m, prym.subgroup().generators());
    let (mut ram, mut br) = (0, 0);
    for l in datum.columns() {
        let stab = closure(n, m, std::slice::from_ref(l));
        if stab.iter().any(|x| x.iter().any(|&c| c != 0) && h.contains(x)) {
            let mut gens = prym.subgroup().generators().to_vec();
            gens.push(l.clone());
            let joined = closure(n, m, &gens).len() as u64;
            ram += g / stab.len() as u64;
            br += g / joined;
        }
    }
    (ram, br)
}

/// `dim (Sym^2 V_-)^G~` from the eigenspace dimensions alone.
pub fn dim_pg_oracle(prym: &PrymDatum) -> u64 {
    let table = prym.eigenspace_table();
    let entries = table.entries();
    let mut total = 0;
    for (i, e) in entries.iter().enumerate() {
        if !e.anti_invariant {
            continue;
        }
        let j = entries
            .iter()
            .position(|f| f.character.exponents() == &e.character.exponents().neg())
            .or_else(|| {
                // characters are identified by their values; match those
                let neg: Vec<u64> = e
                    .character
                    .values()
                    .iter()
                    .map(|&v| (prym.datum().modulus() - v) % prym.datum().modulus())
                    .collect();
                entries.iter().position(|f| f.character.values() == neg.as_slice())
            })
            .expect("negative character present");
        if i < j {
            total += e.dim * entries[j].dim;
        } else if i == j {
            total += e.dim * (e.dim + 1) / 2;
        }
    }
    total
}

/// A random invertible `m x m` matrix over `Z/N`, as its columns.
fn random_gl(rng: &mut ChaCha8Rng, n: u64, m: usize) -> Vec<Vec<i64>> {
    loop {
        let a: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(0..n as i64)).collect())
            .collect();
        let det = match m {
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            _ => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
        };
        if gcd(det.rem_euclid(n as i64) as u64, n) == 1 {
            return a;
        }
    }
}

fn apply_matrix(a: &[Vec<i64>], x: &GroupElement) -> GroupElement {
    let c: Vec<i64> = (0..a.len())
        .map(|i| (0..a.len()).map(|k| a[i][k] * x.coords()[k] as i64).sum())
        .collect();
    GroupElement::new(x.modulus(), &c)
}

/// Permutes the branch points and relabels the group, either through an
/// automorphism of `G~` (small groups) or a change of coordinates of `(Z/N)^m`.
pub fn random_presentation(prym: &PrymDatum, rng: &mut ChaCha8Rng, auts: &[Automorphism]) -> PrymDatum {
    let datum = prym.datum();
    let (n, m) = (datum.modulus(), datum.rank());
    let mut cols = datum.columns().to_vec();
    cols.shuffle(rng);
    let mut gens = prym.subgroup().generators().to_vec();
    let group = datum.group();
    if !auts.is_empty() && rng.gen_bool(0.5) {
        let f = &auts[rng.gen_range(0..auts.len())];
        cols = cols.iter().map(|x| f.apply(group, x).unwrap()).collect();
        gens = gens.iter().map(|x| f.apply(group, x).unwrap()).collect();
    } else {
        let a = random_gl(rng, n, m);
        cols = cols.iter().map(|x| apply_matrix(&a, x)).collect();
        gens = gens.iter().map(|x| apply_matrix(&a, x)).collect();
    }
    let d = AbelianCoverDatum::from_columns(n, &cols).unwrap();
    PrymDatum::new(d, &gens).unwrap()
}
