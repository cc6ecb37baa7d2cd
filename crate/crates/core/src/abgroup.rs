//! Finite abelian groups realized inside `(Z/N)^m`.
//!
//! Characters are never materialized as a separate dual group: a vector
//! `n in (Z/N)^m` acts on `g` through [`pairing`], `chi_n(g) = exp(2 pi i (n.g) / N)`.
//! Every subgroup of an abelian group is normal, so no normality check exists.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{gcd, Residue};

pub const DEFAULT_SUBGROUP_BOUND: usize = 256;
/// Bound on the search space `prod_i #{x : ord(x) = d_i}` of an automorphism enumeration.
pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("elements live in different ambient groups: (Z/{0})^{1} vs (Z/{2})^{3}")]
    MixedAmbient(u64, usize, u64, usize),
    #[error("{what} has size {size}, above the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
}

/// A vector of `m` residues mod `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    modulus: u64,
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(modulus: u64, coords: &[i64]) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        GroupElement {
            modulus,
            coords: coords
                .iter()
                .map(|&c| c.rem_euclid(modulus as i64) as u64)
                .collect(),
        }
    }

    pub fn from_reduced(modulus: u64, coords: Vec<u64>) -> Self {
        debug_assert!(coords.iter().all(|&c| c < modulus));
        GroupElement { modulus, coords }
    }

    pub fn zero(modulus: u64, rank: usize) -> Self {
        GroupElement {
            modulus,
            coords: vec![0; rank],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn same_ambient(&self, other: &GroupElement) -> Result<(), GroupError> {
        if self.modulus != other.modulus || self.rank() != other.rank() {
            return Err(GroupError::MixedAmbient(
                self.modulus,
                self.rank(),
                other.modulus,
                other.rank(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        debug_assert!(self.same_ambient(other).is_ok());
        let n = self.modulus;
        GroupElement {
            modulus: n,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (a + b) % n)
                .collect(),
        }
    }

    pub fn neg(&self) -> GroupElement {
        let n = self.modulus;
        GroupElement {
            modulus: n,
            coords: self.coords.iter().map(|&a| (n - a) % n).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        let n = self.modulus as i64;
        let k = k.rem_euclid(n) as u64;
        GroupElement {
            modulus: self.modulus,
            coords: self.coords.iter().map(|&a| (a * k) % self.modulus).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        element_order(self)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `n . g mod N`; zero iff the character `chi_n` is trivial at `g`.
pub fn pairing(n: &GroupElement, g: &GroupElement) -> Result<Residue, GroupError> {
    n.same_ambient(g)?;
    let m = n.modulus;
    let s = n
        .coords
        .iter()
        .zip(&g.coords)
        .fold(0u64, |acc, (a, b)| (acc + a * b) % m);
    Ok(Residue::from_u64(s, m))
}

/// Least `k >= 1` with `k g = 0`.
pub fn element_order(g: &GroupElement) -> u64 {
    let n = g.modulus;
    g.coords.iter().fold(1u64, |acc, &c| {
        let o = n / gcd(c, n);
        acc / gcd(acc, o) * o
    })
}

/// A subgroup of `(Z/N)^m` with its elements materialized in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpan {
    modulus: u64,
    rank: usize,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
}

impl SubgroupSpan {
    /// Additive closure of `generators` inside `(Z/modulus)^rank`.
    pub fn span(
        modulus: u64,
        rank: usize,
        generators: &[GroupElement],
    ) -> Result<SubgroupSpan, GroupError> {
        let zero = GroupElement::zero(modulus, rank);
        for g in generators {
            zero.same_ambient(g)?;
        }
        let mut set: BTreeSet<GroupElement> = BTreeSet::from([zero]);
        for g in generators {
            if set.contains(g) {
                continue;
            }
            let current: Vec<GroupElement> = set.iter().cloned().collect();
            let mut multiple = g.clone();
            while !multiple.is_zero() {
                for x in &current {
                    set.insert(x.add(&multiple));
                }
                multiple = multiple.add(g);
            }
        }
        Ok(SubgroupSpan {
            modulus,
            rank,
            generators: generators.to_vec(),
            elements: set.into_iter().collect(),
        })
    }

    pub fn trivial(modulus: u64, rank: usize) -> SubgroupSpan {
        SubgroupSpan {
            modulus,
            rank,
            generators: Vec::new(),
            elements: vec![GroupElement::zero(modulus, rank)],
        }
    }

    /// The standard copy of `Z/d_1 x ... x Z/d_k` in `(Z/d_k)^k`, coordinate `i`
    /// running over the multiples of `d_k / d_i`. `factors` must form a divisor chain.
    pub fn standard(factors: &[u64]) -> SubgroupSpan {
        assert!(!factors.is_empty(), "standard group needs at least one factor");
        assert!(
            factors.windows(2).all(|w| w[1] % w[0] == 0) && factors[0] >= 2,
            "invariant factors must form a divisor chain"
        );
        let n = *factors.last().unwrap();
        let k = factors.len();
        let gens: Vec<GroupElement> = factors
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut c = vec![0i64; k];
                c[i] = (n / d) as i64;
                GroupElement::new(n, &c)
            })
            .collect();
        SubgroupSpan::span(n, k, &gens).expect("same ambient by construction")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn nonzero_elements(&self) -> &[GroupElement] {
        // zero is the smallest element in sorted order
        &self.elements[1..]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index_of(g).is_some()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupSpan) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn exponent(&self) -> u64 {
        self.elements
            .iter()
            .fold(1, |acc, e| {
                let o = element_order(e);
                acc / gcd(acc, o) * o
            })
    }

    /// Invariant factors `d_1 | d_2 | ... | d_k`; empty for the trivial group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors_from_orders(self.elements.iter().map(element_order))
    }

    /// Invariant factors of `self / h`; `h` must be a subgroup.
    pub fn quotient_factors(&self, h: &SubgroupSpan) -> Vec<u64> {
        let mut covered = vec![false; self.order()];
        let mut orders = Vec::new();
        for (i, x) in self.elements.iter().enumerate() {
            if covered[i] {
                continue;
            }
            for y in &h.elements {
                covered[self.index_of(&x.add(y)).expect("h lies in self")] = true;
            }
            let mut k = 1;
            let mut m = x.clone();
            while !h.contains(&m) {
                m = m.add(x);
                k += 1;
            }
            orders.push(k);
        }
        invariant_factors_from_orders(orders.into_iter())
    }

    /// Cyclic-factor label such as `C6` or `C2xC4`; `C1` for the trivial group.
    pub fn label(&self) -> String {
        label_from_factors(&self.invariant_factors())
    }

    /// A basis `x_1, ..., x_k` with `ord(x_i) = d_i` (the invariant factors), so
    /// that `(a_i) -> sum a_i x_i` is an isomorphism from `Z/d_1 x ... x Z/d_k`.
    pub fn standard_basis(&self) -> Vec<GroupElement> {
        let factors = self.invariant_factors();
        let table = CayleyTable::new(self);
        let mut chosen = Vec::new();
        let found = basis_search(&table, &factors, factors.len(), &mut vec![0], &mut chosen, |_| {
            true
        });
        assert!(found, "every finite abelian group has a basis along its invariant factors");
        // chosen was filled from the largest factor down
        chosen.reverse();
        chosen.into_iter().map(|i| self.elements[i].clone()).collect()
    }

    /// Isomorphism onto [`SubgroupSpan::standard`] for the same invariant factors,
    /// as a map from element indices of `self` to element indices of the standard group.
    pub fn standard_form(&self) -> Option<(SubgroupSpan, Vec<usize>)> {
        let factors = self.invariant_factors();
        if factors.is_empty() {
            return None;
        }
        let basis = self.standard_basis();
        let std = SubgroupSpan::standard(&factors);
        let n = std.modulus;
        let mut map = vec![usize::MAX; self.order()];
        for a in coefficient_tuples(&factors) {
            let mut x = GroupElement::zero(self.modulus, self.rank);
            for (ai, b) in a.iter().zip(&basis) {
                x = x.add(&b.scale(*ai as i64));
            }
            let y: Vec<u64> = a
                .iter()
                .zip(&factors)
                .map(|(&ai, &d)| ai * (n / d) % n)
                .collect();
            let yi = std
                .index_of(&GroupElement::from_reduced(n, y))
                .expect("standard coordinates");
            map[self.index_of(&x).expect("basis combination")] = yi;
        }
        Some((std, map))
    }
}

fn invariant_factors_from_orders(orders: impl Iterator<Item = u64>) -> Vec<u64> {
    let orders: Vec<u64> = orders.collect();
    let size = orders.len() as u64;
    // count of elements killed by q
    let killed = |q: u64| orders.iter().filter(|&&o| q.is_multiple_of(o)).count() as u64;
    let mut primes = Vec::new();
    let mut rest = size;
    let mut p = 2;
    while rest > 1 {
        if rest.is_multiple_of(p) {
            primes.push(p);
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    // exponents of the p-primary cyclic factors, largest first
    let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut ranks = Vec::new(); // ranks[j-1] = #factors of order >= p^j
        let mut prev = 1u64;
        let mut pj = p;
        loop {
            let c = killed(pj);
            if c == prev {
                break;
            }
            let mut ratio = c / prev;
            let mut r = 0;
            while ratio > 1 {
                ratio /= p;
                r += 1;
            }
            ranks.push(r);
            prev = c;
            pj *= p;
        }
        let mut exps = Vec::new();
        for (j, &r) in ranks.iter().enumerate() {
            let next = ranks.get(j + 1).copied().unwrap_or(0);
            for _ in 0..(r - next) {
                exps.push(j as u32 + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        primary.push((p, exps));
    }
    let k = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..k)
        .map(|i| {
            primary
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&x| p.pow(x)))
                .product()
        })
        .collect();
    factors.reverse();
    factors
}

pub fn label_from_factors(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "C1".to_string();
    }
    factors
        .iter()
        .map(|d| format!("C{d}"))
        .collect::<Vec<_>>()
        .join("x")
}

/// All tuples `(a_1, ..., a_k)` with `0 <= a_i < d_i`, in lexicographic order.
fn coefficient_tuples(factors: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &d in factors {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Addition and order tables over the element indices of a subgroup.
pub struct CayleyTable {
    n: usize,
    add: Vec<usize>,
    orders: Vec<u64>,
}

impl CayleyTable {
    pub fn new(g: &SubgroupSpan) -> Self {
        let n = g.order();
        let mut add = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let s = g
                    .index_of(&g.elements[i].add(&g.elements[j]))
                    .expect("closed under addition");
                add[i * n + j] = s;
                add[j * n + i] = s;
            }
        }
        CayleyTable {
            n,
            add,
            orders: g.elements.iter().map(element_order).collect(),
        }
    }

    pub fn sum(&self, i: usize, j: usize) -> usize {
        self.add[i * self.n + j]
    }

    /// Closure of `set` (a subgroup, as a membership mask) with `x` adjoined.
    fn join(&self, set: &[usize], x: usize) -> Vec<usize> {
        let mut mask = vec![false; self.n];
        for &s in set {
            mask[s] = true;
        }
        let mut m = x;
        while !mask[m] {
            for &s in set {
                mask[self.sum(s, m)] = true;
            }
            m = self.sum(m, x);
        }
        (0..self.n).filter(|&i| mask[i]).collect()
    }
}

/// Backtracking search for independent elements of orders `factors[k-1], ..., factors[0]`.
fn basis_search(
    table: &CayleyTable,
    factors: &[u64],
    k: usize,
    span: &mut Vec<usize>,
    chosen: &mut Vec<usize>,
    mut accept: impl FnMut(&[usize]) -> bool + Copy,
) -> bool {
    if k == 0 {
        return accept(chosen);
    }
    let d = factors[k - 1];
    for x in 0..table.n {
        if table.orders[x] != d || span.contains(&x) {
            continue;
        }
        let joined = table.join(span, x);
        if joined.len() != span.len() * d as usize {
            continue;
        }
        chosen.push(x);
        let mut next = joined;
        if basis_search(table, factors, k - 1, &mut next, chosen, accept) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// All subgroups of `g`, deduplicated, sorted by `(order, element list)`.
pub fn subgroups(g: &SubgroupSpan, bound: usize) -> Result<Vec<SubgroupSpan>, GroupError> {
    if g.order() > bound {
        return Err(GroupError::BoundExceeded {
            what: "subgroup enumeration",
            size: g.order(),
            bound,
        });
    }
    let table = CayleyTable::new(g);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![vec![0usize]];
    seen.insert(vec![0]);
    while let Some(s) = frontier.pop() {
        for x in 0..table.n {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            let j = table.join(&s, x);
            if seen.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut out: Vec<SubgroupSpan> = seen
        .into_iter()
        .map(|idx| {
            let elements: Vec<GroupElement> = idx.iter().map(|&i| g.elements[i].clone()).collect();
            let mut generators = Vec::new();
            let mut current = vec![0usize];
            for &i in &idx {
                if current.binary_search(&i).is_err() {
                    generators.push(g.elements[i].clone());
                    current = table.join(&current, i);
                }
            }
            SubgroupSpan {
                modulus: g.modulus,
                rank: g.rank,
                generators,
                elements,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    Ok(out)
}

/// A group automorphism as a permutation of the element indices of its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    images: Vec<usize>,
}

impl Automorphism {
    pub fn identity(order: usize) -> Self {
        Automorphism {
            images: (0..order).collect(),
        }
    }

    pub fn image_index(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, group: &SubgroupSpan, x: &GroupElement) -> Option<GroupElement> {
        group
            .index_of(x)
            .map(|i| group.elements[self.images[i]].clone())
    }

    /// `self after other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Automorphism { images }
    }
}

/// Every automorphism of `g`, found by brute force over images of a basis.
pub fn automorphisms(g: &SubgroupSpan, bound: usize) -> Result<Vec<Automorphism>, GroupError> {
    check_automorphism_bound(&g.invariant_factors(), g.elements.iter().map(element_order), bound)?;
    Ok(automorphisms_unbounded(g))
}

fn check_automorphism_bound(
    factors: &[u64],
    orders: impl Iterator<Item = u64>,
    bound: usize,
) -> Result<(), GroupError> {
    let orders: Vec<u64> = orders.collect();
    let mut size: usize = 1;
    for d in factors {
        let choices = orders.iter().filter(|&&o| o == *d).count();
        size = size.saturating_mul(choices);
    }
    if size > bound {
        return Err(GroupError::BoundExceeded {
            what: "automorphism enumeration",
            size,
            bound,
        });
    }
    Ok(())
}

pub(crate) fn automorphisms_unbounded(g: &SubgroupSpan) -> Vec<Automorphism> {
    let factors = g.invariant_factors();
    if factors.is_empty() {
        return vec![Automorphism::identity(1)];
    }
    let table = CayleyTable::new(g);
    let basis: Vec<usize> = g
        .standard_basis()
        .iter()
        .map(|b| g.index_of(b).unwrap())
        .collect();
    // coordinates of every element with respect to the basis
    let mut coords: Vec<Vec<u64>> = vec![Vec::new(); g.order()];
    for a in coefficient_tuples(&factors) {
        let idx = combine(&table, &basis, &a);
        coords[idx] = a;
    }
    let mut out = Vec::new();
    let mut images_rev = Vec::new();
    collect_automorphisms(&table, &factors, factors.len(), &mut vec![0], &mut images_rev, &mut |chosen| {
        let imgs: Vec<usize> = chosen.iter().rev().copied().collect();
        let images = coords.iter().map(|a| combine(&table, &imgs, a)).collect();
        out.push(Automorphism { images });
    });
    out.sort();
    out
}

fn combine(table: &CayleyTable, basis: &[usize], a: &[u64]) -> usize {
    let mut acc = 0usize;
    for (&b, &ai) in basis.iter().zip(a) {
        for _ in 0..ai {
            acc = table.sum(acc, b);
        }
    }
    acc
}

fn collect_automorphisms(
    table: &CayleyTable,
    factors: &[u64],
    k: usize,
    span: &mut Vec<usize>,
    chosen: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if k == 0 {
        emit(chosen);
        return;
    }
    let d = factors[k - 1];
    for x in 0..table.n {
        if table.orders[x] != d || span.contains(&x) {
            continue;
        }
        let joined = table.join(span, x);
        if joined.len() != span.len() * d as usize {
            continue;
        }
        chosen.push(x);
        let mut next = joined;
        collect_automorphisms(table, factors, k - 1, &mut next, chosen, emit);
        chosen.pop();
    }
}

/// Automorphisms of [`SubgroupSpan::standard`], cached by invariant factors.
pub fn standard_automorphisms(
    factors: &[u64],
    bound: usize,
) -> Result<std::sync::Arc<Vec<Automorphism>>, GroupError> {
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<Vec<u64>, Arc<Vec<Automorphism>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(a) = cache.lock().unwrap().get(factors) {
        return Ok(a.clone());
    }
    let std = SubgroupSpan::standard(factors);
    check_automorphism_bound(factors, std.elements.iter().map(element_order), bound)?;
    let auts = Arc::new(automorphisms_unbounded(&std));
    Ok(cache
        .lock()
        .unwrap()
        .entry(factors.to_vec())
        .or_insert(auts)
        .clone())
}
