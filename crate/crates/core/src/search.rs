//! Enumeration of abelian Prym data up to equivalence and the classification loop.
//!
//! Two data are equivalent when one is obtained from the other by row operations
//! preserving the row span, by permuting branch points, or by an automorphism of
//! the Galois group applied to the columns and `H` together. Every group is
//! moved to the standard copy of `Z/d_1 x ... x Z/d_k` inside `(Z/d_k)^k`, so the
//! modulus of an emitted datum is the exponent of its group.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::abgroup::{
    standard_automorphisms, subgroups, Automorphism, CayleyTable, GroupElement, GroupError,
    SubgroupSpan, DEFAULT_AUTOMORPHISM_BOUND, DEFAULT_SUBGROUP_BOUND,
};
use crate::conditions::{full_report, Catalog, ConditionReport};
use crate::coverdata::{AbelianCoverDatum, DatumError, PrymDatum};
use crate::exactalg::{howell_form, ModMatrix};
use crate::forms::{FormsError, DEFAULT_TRIALS};

pub const DEFAULT_MAX_GROUP: usize = 64;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("line {line}: {message}")]
    Spec { line: usize, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Forms(#[from] FormsError),
}

fn spec_error(line: usize, message: impl Into<String>) -> SearchError {
    SearchError::Spec {
        line,
        message: message.into(),
    }
}

/// Canonical representative of an equivalence class of Prym data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalKey {
    /// Invariant factors of the Galois group.
    pub factors: Vec<u64>,
    /// Sorted element indices of the columns in the standard group.
    pub columns: Vec<usize>,
    /// Sorted element indices of `H` in the standard group.
    pub subgroup: Vec<usize>,
    /// Howell form of the canonical column matrix.
    pub row_span: ModMatrix,
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let factors: Vec<String> = self.factors.iter().map(u64::to_string).collect();
        write!(
            f,
            "[{}] cols {} H {}",
            factors.join(","),
            join(&self.columns),
            join(&self.subgroup)
        )
    }
}

fn sorted_images(aut: &Automorphism, idx: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = idx.iter().map(|&i| aut.image_index(i)).collect();
    v.sort_unstable();
    v
}

fn column_matrix(std: &SubgroupSpan, columns: &[usize]) -> ModMatrix {
    let cols: Vec<Vec<u64>> = columns
        .iter()
        .map(|&i| std.elements()[i].coords().to_vec())
        .collect();
    ModMatrix::from_columns(std.modulus(), std.rank(), &cols)
}

pub fn canonical_key(prym: &PrymDatum) -> Result<CanonicalKey, SearchError> {
    let datum = prym.datum();
    let (std, map) = datum
        .group()
        .standard_form()
        .expect("the Galois group of a valid datum is nontrivial");
    let factors = datum.group().invariant_factors();
    let index = |g: &GroupElement| map[datum.group().index_of(g).expect("element of the group")];
    let columns: Vec<usize> = datum.columns().iter().map(index).collect();
    let subgroup: Vec<usize> = prym.subgroup().elements().iter().map(index).collect();
    let auts = standard_automorphisms(&factors, DEFAULT_AUTOMORPHISM_BOUND)?;
    let (columns, subgroup) = auts
        .iter()
        .map(|a| (sorted_images(a, &columns), sorted_images(a, &subgroup)))
        .min()
        .expect("the identity is an automorphism");
    let row_span = howell_form(&column_matrix(&std, &columns));
    Ok(CanonicalKey {
        factors,
        columns,
        subgroup,
        row_span,
    })
}

/// Parameters of a search, read from `key=value` lines.
///
/// `N` ranges over group exponents and `m` over numbers of invariant factors;
/// `group` instead fixes explicit groups such as `C2xC4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSpec {
    pub exponents: Vec<u64>,
    pub ranks: Vec<usize>,
    pub groups: Option<Vec<Vec<u64>>>,
    pub branch_counts: Vec<usize>,
    pub max_group: usize,
    pub h_order: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            exponents: Vec::new(),
            ranks: vec![1],
            groups: None,
            branch_counts: vec![4],
            max_group: DEFAULT_MAX_GROUP,
            h_order: None,
            trials: DEFAULT_TRIALS,
            seed: 0,
            threads: None,
        }
    }
}

fn parse_list<T: FromStr + Copy + Into<u64> + TryFrom<u64>>(value: &str) -> Option<Vec<T>> {
    let mut out = Vec::new();
    for part in value.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.parse().ok()?;
            let b: u64 = b.parse().ok()?;
            if a > b {
                return None;
            }
            for x in a..=b {
                out.push(T::try_from(x).ok()?);
            }
        } else {
            out.push(part.parse().ok()?);
        }
    }
    Some(out)
}

/// Parses `C2xC4` (or `C2 x C4`, `Z6`) into invariant factors; the factors are
/// normalized, so `C2xC3` gives `[6]`.
pub fn parse_group_label(label: &str) -> Option<Vec<u64>> {
    let mut orders = Vec::new();
    for part in label.split(['x', 'X', '×']) {
        let part = part.trim();
        let digits = part.strip_prefix(['C', 'Z'])?;
        let d: u64 = digits.parse().ok()?;
        if d < 1 {
            return None;
        }
        if d > 1 {
            orders.push(d);
        }
    }
    if orders.is_empty() {
        return None;
    }
    let gens: Vec<Vec<u64>> = (0..orders.len())
        .map(|i| {
            let mut v = vec![0; orders.len()];
            v[i] = 1;
            v
        })
        .collect();
    // Z/d_1 x ... x Z/d_k as the columns of a diagonal embedding into (Z/L)^k
    let l = orders.iter().fold(1, |a, &b| a / crate::exactalg::gcd(a, b) * b);
    let elems: Vec<GroupElement> = gens
        .iter()
        .zip(&orders)
        .map(|(g, &d)| {
            let c: Vec<i64> = g.iter().map(|&x| (x * (l / d)) as i64).collect();
            GroupElement::new(l, &c)
        })
        .collect();
    let g = SubgroupSpan::span(l, orders.len(), &elems).ok()?;
    Some(g.invariant_factors())
}

impl SearchSpec {
    pub fn parse(text: &str) -> Result<Self, SearchError> {
        let mut spec = SearchSpec::default();
        let mut seen_n = false;
        let mut seen_m = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            for piece in content.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                let (key, value) = piece
                    .split_once('=')
                    .ok_or_else(|| spec_error(line, format!("expected key=value, got `{piece}`")))?;
                let key = key.trim();
                let value: String = value.chars().filter(|c| !c.is_whitespace()).collect();
                let bad = || spec_error(line, format!("invalid value `{value}` for `{key}`"));
                match key {
                    "N" => {
                        spec.exponents = parse_list::<u64>(&value).ok_or_else(bad)?;
                        if spec.exponents.iter().any(|&n| n < 2) {
                            return Err(spec_error(line, "exponents must be at least 2"));
                        }
                        seen_n = true;
                    }
                    "m" => {
                        spec.ranks = parse_list::<u64>(&value)
                            .ok_or_else(bad)?
                            .into_iter()
                            .map(|x| x as usize)
                            .collect();
                        if spec.ranks.contains(&0) {
                            return Err(spec_error(line, "m must be at least 1"));
                        }
                        seen_m = true;
                    }
                    "s" | "r" => {
                        spec.branch_counts = parse_list::<u64>(&value)
                            .ok_or_else(bad)?
                            .into_iter()
                            .map(|x| x as usize)
                            .collect();
                        if spec.branch_counts.iter().any(|&s| s < 4) {
                            return Err(spec_error(
                                line,
                                "s must be at least 4: three branch points give no moduli",
                            ));
                        }
                    }
                    "group" => {
                        let labels: Vec<Vec<u64>> = value
                            .split(',')
                            .map(parse_group_label)
                            .collect::<Option<_>>()
                            .ok_or_else(bad)?;
                        spec.groups = Some(labels);
                    }
                    "max_group" => spec.max_group = value.parse().map_err(|_| bad())?,
                    "H_order" => spec.h_order = Some(value.parse().map_err(|_| bad())?),
                    "trials" => {
                        spec.trials = value.parse().map_err(|_| bad())?;
                        if spec.trials == 0 {
                            return Err(spec_error(line, "trials must be at least 1"));
                        }
                    }
                    "seed" => spec.seed = value.parse().map_err(|_| bad())?,
                    "threads" => spec.threads = Some(value.parse().map_err(|_| bad())?),
                    other => return Err(spec_error(line, format!("unknown key `{other}`"))),
                }
            }
        }
        if spec.groups.is_some() && (seen_n || seen_m) {
            return Err(spec_error(0, "`group` cannot be combined with `N` or `m`"));
        }
        if spec.groups.is_none() && !seen_n {
            return Err(spec_error(0, "missing `N` (or `group`)"));
        }
        spec.branch_counts.sort_unstable();
        spec.branch_counts.dedup();
        Ok(spec)
    }

    /// Invariant factor lists of the groups searched, in increasing order.
    pub fn shapes(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = match &self.groups {
            Some(g) => g.clone(),
            None => {
                let mut v = Vec::new();
                for &n in &self.exponents {
                    for &m in &self.ranks {
                        divisor_chains(n, m, &mut Vec::new(), &mut v);
                    }
                }
                v
            }
        };
        out.retain(|f| f.iter().product::<u64>() as usize <= self.max_group);
        out.sort_by_key(|f| (f.iter().product::<u64>(), f.clone()));
        out.dedup();
        out
    }
}

/// Chains `d_1 | ... | d_m = n` with `d_1 >= 2`.
fn divisor_chains(n: u64, m: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if prefix.len() + 1 == m {
        if prefix.last().is_none_or(|&d| n.is_multiple_of(d)) {
            let mut f = prefix.clone();
            f.push(n);
            out.push(f);
        }
        return;
    }
    let lo = prefix.last().copied().unwrap_or(1);
    for d in lo.max(2)..=n {
        if n.is_multiple_of(d) && d % lo == 0 {
            prefix.push(d);
            divisor_chains(n, m, prefix, out);
            prefix.pop();
        }
    }
}

/// One class representative per canonical key for a single group and branch count.
fn enumerate_shape(
    factors: &[u64],
    s: usize,
    h_order: Option<usize>,
) -> Result<Vec<(PrymDatum, CanonicalKey)>, SearchError> {
    let std = SubgroupSpan::standard(factors);
    let table = CayleyTable::new(&std);
    let order = std.order();
    let auts = standard_automorphisms(factors, DEFAULT_AUTOMORPHISM_BOUND)?;
    let subs: Vec<SubgroupSpan> = subgroups(&std, DEFAULT_SUBGROUP_BOUND)?
        .into_iter()
        .filter(|h| !h.is_trivial() && h_order.is_none_or(|o| h.order() == o))
        .collect();
    if subs.is_empty() {
        return Ok(Vec::new());
    }
    let sub_indices: Vec<Vec<usize>> = subs
        .iter()
        .map(|h| h.elements().iter().map(|e| std.index_of(e).unwrap()).collect())
        .collect();
    let mut out = Vec::new();
    let mut cols = Vec::with_capacity(s);
    let mut visit = |cols: &[usize]| -> Result<(), SearchError> {
        if auts.iter().any(|a| sorted_images(a, cols).as_slice() < cols) {
            return Ok(());
        }
        let elements: Vec<GroupElement> = cols.iter().map(|&i| std.elements()[i].clone()).collect();
        if SubgroupSpan::span(std.modulus(), std.rank(), &elements)?.order() != order {
            return Ok(());
        }
        let stabilizer: Vec<&Automorphism> = auts
            .iter()
            .filter(|a| sorted_images(a, cols).as_slice() == cols)
            .collect();
        let datum = AbelianCoverDatum::from_columns(std.modulus(), &elements)?;
        let row_span = howell_form(&column_matrix(&std, cols));
        for (h, idx) in subs.iter().zip(&sub_indices) {
            if stabilizer.iter().any(|a| sorted_images(a, idx) < *idx) {
                continue;
            }
            let prym = PrymDatum::from_subgroup(datum.clone(), h.clone())?;
            let key = CanonicalKey {
                factors: factors.to_vec(),
                columns: cols.to_vec(),
                subgroup: idx.clone(),
                row_span: row_span.clone(),
            };
            out.push((prym, key));
        }
        Ok(())
    };
    multisets(&table, order, s, 1, 0, &mut cols, &mut visit)?;
    Ok(out)
}

/// Nondecreasing tuples of nonzero element indices summing to zero; the last
/// entry is forced by the sum.
fn multisets(
    table: &CayleyTable,
    order: usize,
    s: usize,
    start: usize,
    sum: usize,
    cols: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Result<(), SearchError>,
) -> Result<(), SearchError> {
    if cols.len() + 1 == s {
        let last = (0..order)
            .find(|&x| table.sum(sum, x) == 0)
            .expect("every element has an inverse");
        if last >= start {
            cols.push(last);
            visit(cols)?;
            cols.pop();
        }
        return Ok(());
    }
    for x in start..order {
        cols.push(x);
        multisets(table, order, s, x, table.sum(sum, x), cols, visit)?;
        cols.pop();
    }
    Ok(())
}

/// Class representatives for every shape and branch count of `spec`, one chunk
/// per `(group, s)` generated on demand.
pub fn enumerate(
    spec: &SearchSpec,
) -> impl Iterator<Item = Result<(PrymDatum, CanonicalKey), SearchError>> + '_ {
    spec.shapes().into_iter().flat_map(move |factors| {
        spec.branch_counts.iter().flat_map(move |&s| {
            match enumerate_shape(&factors, s, spec.h_order) {
                Ok(v) => v.into_iter().map(Ok).collect::<Vec<_>>(),
                Err(e) => vec![Err(e)],
            }
        })
    })
}

#[derive(Clone, Debug)]
pub struct SearchRow {
    pub prym: PrymDatum,
    pub key: CanonicalKey,
    pub genus_total: u64,
    pub genus_quotient: u64,
    pub report: ConditionReport,
}

/// Runs [`full_report`] on every enumerated datum, in parallel on `spec.threads`
/// threads (all cores when unset). Rows are sorted by `(s, g~, g, key)`, so the
/// output does not depend on the thread count.
pub fn run_search(spec: &SearchSpec) -> Result<Vec<SearchRow>, SearchError> {
    run_search_with(spec, None)
}

/// [`run_search`] with a catalog of special quotient families for (B2).
pub fn run_search_with(
    spec: &SearchSpec,
    catalog: Option<&Catalog>,
) -> Result<Vec<SearchRow>, SearchError> {
    let data: Vec<(PrymDatum, CanonicalKey)> = enumerate(spec).collect::<Result<_, _>>()?;
    let work = || -> Result<Vec<SearchRow>, SearchError> {
        data.into_par_iter()
            .map(|(prym, key)| {
                let report = full_report(&prym, spec.trials, spec.seed, catalog)?;
                Ok(SearchRow {
                    genus_total: prym.datum().genus_total(),
                    genus_quotient: prym.genus_quotient()?,
                    prym,
                    key,
                    report,
                })
            })
            .collect()
    };
    let mut rows = match spec.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(work)?,
        None => work()?,
    };
    rows.sort_by(|a, b| {
        let k = |r: &SearchRow| (r.prym.datum().branch_count(), r.genus_total, r.genus_quotient);
        k(a).cmp(&k(b)).then_with(|| a.key.cmp(&b.key))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverdata::parse_data;

    fn prym(text: &str) -> PrymDatum {
        parse_data(text).unwrap()[0].build().unwrap()
    }

    fn key(text: &str) -> CanonicalKey {
        canonical_key(&prym(text)).unwrap()
    }

    #[test]
    fn keys_ignore_relabelings() {
        assert_eq!(key("N=6; A=1,3,4,4; H=2"), key("N=6; A=5,3,2,2; H=2"));
        assert_eq!(key("N=6; A=1,3,4,4; H=2"), key("N=6; A=3,1,4,4; H=2"));
        assert_ne!(key("N=6; A=1,3,4,4; H=2"), key("N=6; A=1,3,4,4; H=3"));
        assert_eq!(
            key("N=3; A=1,1,1,0;0,0,2,1; H=0,1"),
            key("N=3; A=1,1,0,1;0,0,2,1; H=0,1")
        );
        // N doubled
        assert_eq!(key("N=6; A=1,3,4,4; H=2"), key("N=12; A=2,6,8,8; H=4"));
    }

    #[test]
    fn spec_parsing() {
        let s = SearchSpec::parse("N=2..4,6\nm=1\ns=4..5\nH_order=3 # comment\n").unwrap();
        assert_eq!(s.exponents, vec![2, 3, 4, 6]);
        assert_eq!(s.branch_counts, vec![4, 5]);
        assert_eq!(s.h_order, Some(3));
        let s = SearchSpec::parse("group=C2xC4,C3xC3; s=4").unwrap();
        assert_eq!(s.shapes(), vec![vec![2, 4], vec![3, 3]]);
        assert!(SearchSpec::parse("N=6\ns=3").is_err());
        assert!(matches!(
            SearchSpec::parse("N=6\nfoo=1"),
            Err(SearchError::Spec { line: 2, .. })
        ));
        assert!(SearchSpec::parse("group=C6\nN=6").is_err());
    }

    #[test]
    fn group_labels() {
        assert_eq!(parse_group_label("C2xC4"), Some(vec![2, 4]));
        assert_eq!(parse_group_label("C2xC3"), Some(vec![6]));
        assert_eq!(parse_group_label("C2xC2xC2"), Some(vec![2, 2, 2]));
        assert_eq!(parse_group_label("D4"), None);
    }

    #[test]
    fn shapes_from_exponent_and_rank() {
        let s = SearchSpec::parse("N=4,6\nm=2").unwrap();
        assert_eq!(s.shapes(), vec![vec![2, 4], vec![2, 6], vec![4, 4], vec![3, 6], vec![6, 6]]);
    }

    #[test]
    fn the_double_cover_family_is_unique() {
        let spec = SearchSpec::parse("N=2; m=1; s=4").unwrap();
        let data: Vec<_> = enumerate(&spec).collect::<Result<_, _>>().unwrap();
        assert_eq!(data.len(), 1);
        assert_eq!(data[0].0.to_string(), "N=2; A=1,1,1,1; H=1");
    }

    #[test]
    fn enumeration_contains_worked_examples() {
        let spec = SearchSpec::parse("N=6; m=1; s=4; H_order=3").unwrap();
        let keys: Vec<CanonicalKey> = enumerate(&spec).map(|r| r.unwrap().1).collect();
        assert!(keys.contains(&key("N=6; A=1,3,4,4; H=2")));
        let spec = SearchSpec::parse("N=3; m=2; s=4; H_order=3").unwrap();
        let keys: Vec<CanonicalKey> = enumerate(&spec).map(|r| r.unwrap().1).collect();
        assert!(keys.contains(&key("N=3; A=1,1,1,0;0,0,2,1; H=0,1")));
    }

    #[test]
    fn enumerated_keys_are_canonical_and_unique() {
        let spec = SearchSpec::parse("group=C6,C2xC2,C2xC4; s=4..5").unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for r in enumerate(&spec) {
            let (p, k) = r.unwrap();
            assert_eq!(canonical_key(&p).unwrap(), k);
            assert!(seen.insert(k));
        }
    }

    #[test]
    fn empty_search_space() {
        let spec = SearchSpec::parse("N=2; m=1; s=4; H_order=3").unwrap();
        assert!(run_search(&spec).unwrap().is_empty());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut spec = SearchSpec::parse("N=6; m=1; s=4..5").unwrap();
        spec.threads = Some(1);
        let a: Vec<String> = run_search(&spec).unwrap().iter().map(|r| r.prym.to_string()).collect();
        spec.threads = Some(4);
        let b: Vec<String> = run_search(&spec).unwrap().iter().map(|r| r.prym.to_string()).collect();
        assert_eq!(a, b);
    }
}
