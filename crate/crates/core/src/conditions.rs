//! Conditions (A), (B1), (B) and a sufficient mechanization of (B2).

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::{subgroups, SubgroupSpan, DEFAULT_SUBGROUP_BOUND};
use crate::coverdata::{EigenspaceTable, PrymDatum};
use crate::forms::{
    injectivity_check, injectivity_check_basis, sym2_basis_where, FormsError, Injectivity,
};

/// One summand `V_n (x) V_{-n}` (or `Sym^2 V_n` when `2n = 0`) of the invariant part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub characters: (String, String),
    pub dims: (u64, u64),
    pub self_paired: bool,
    pub dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum Witness {
    Tuple(Vec<i64>),
    /// (B1) holds, which implies (B) without a separate rank computation.
    ImpliedByB1,
    Catalog(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum Verdict {
    Established { witness: Witness },
    NotEstablished { reason: String },
}

impl Verdict {
    pub fn is_established(&self) -> bool {
        matches!(self, Verdict::Established { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum B2Verdict {
    Established { subgroup: Vec<String>, witness: Witness },
    NotEstablished { reason: String },
}

impl B2Verdict {
    pub fn is_established(&self) -> bool {
        matches!(self, B2Verdict::Established { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub dim_pg: u64,
    pub s_minus_3: u64,
    pub cond_a: bool,
    pub cond_b1: bool,
    /// (B1) fired through a single self-paired summand of dimension 1.
    pub b1_self_paired: bool,
    pub cond_b: Verdict,
    pub cond_b2: B2Verdict,
    pub summand_profile: Vec<Summand>,
}

/// The invariant summands of `Sym^2 V_-`, one per unordered pair `{n, -n}` of
/// anti-invariant characters, in character order.
pub fn summand_profile(prym: &PrymDatum) -> Vec<Summand> {
    profile_of(&prym.eigenspace_table())
}

fn profile_of(table: &EigenspaceTable) -> Vec<Summand> {
    let mut out = Vec::new();
    for (i, e) in table.entries().iter().enumerate() {
        if !e.anti_invariant {
            continue;
        }
        let j = table.negative_index(i);
        if j < i {
            continue;
        }
        let f = &table.entries()[j];
        let dim = if i == j {
            e.dim * (e.dim + 1) / 2
        } else {
            e.dim * f.dim
        };
        out.push(Summand {
            characters: (e.character.to_string(), f.character.to_string()),
            dims: (e.dim, f.dim),
            self_paired: i == j,
            dim,
        });
    }
    out
}

/// `sum_{2n != 0} d_n d_{-n} + sum_{2n = 0} d_n (d_n + 1) / 2` over anti-invariant
/// characters, each pair `{n, -n}` counted once.
pub fn dim_pg(prym: &PrymDatum) -> u64 {
    summand_profile(prym).iter().map(|s| s.dim).sum()
}

fn s_minus_3(prym: &PrymDatum) -> u64 {
    prym.datum().branch_count() as u64 - 3
}

pub fn cond_a(prym: &PrymDatum) -> bool {
    dim_pg(prym) == s_minus_3(prym)
}

/// `(holds, through_self_paired_summand)`.
pub fn cond_b1_detail(prym: &PrymDatum) -> (bool, bool) {
    let target = s_minus_3(prym);
    let nonzero: Vec<Summand> = summand_profile(prym)
        .into_iter()
        .filter(|s| s.dim > 0)
        .collect();
    let [only] = nonzero.as_slice() else {
        return (false, false);
    };
    if only.self_paired {
        let fires = only.dims.0 == 1 && target == 1;
        (fires, fires)
    } else {
        let (a, b) = only.dims;
        ((a == 1 && b == target) || (b == 1 && a == target), false)
    }
}

pub fn cond_b1(prym: &PrymDatum) -> bool {
    cond_b1_detail(prym).0
}

pub fn cond_b(prym: &PrymDatum, trials: usize, seed: u64) -> Result<Verdict, FormsError> {
    if !cond_a(prym) {
        return Ok(Verdict::NotEstablished {
            reason: "condition (A) fails".into(),
        });
    }
    if cond_b1(prym) {
        return Ok(Verdict::Established {
            witness: Witness::ImpliedByB1,
        });
    }
    Ok(match injectivity_check(prym, trials, seed)? {
        Injectivity::Injective { tuple, .. } => Verdict::Established {
            witness: Witness::Tuple(tuple),
        },
        Injectivity::NotInjectiveAtAllTried { tuples, .. } => Verdict::NotEstablished {
            reason: format!("multiplication map not injective at {} tried tuples", tuples.len()),
        },
    })
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed catalog: {0}")]
    Csv(#[from] csv::Error),
    #[error("catalog line {line}: invalid local orders `{value}`")]
    LocalOrders { line: usize, value: String },
}

/// A quotient family known to be special, identified by its numerical type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub group_order: u64,
    pub s: usize,
    /// Sorted ascending.
    pub local_orders: Vec<u64>,
    pub label: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

#[derive(Deserialize)]
struct CatalogRecord {
    group_order: u64,
    s: usize,
    local_orders: String,
    label: String,
}

impl Catalog {
    /// Reads CSV with header `group_order,s,local_orders,label`, local orders
    /// written dash-separated (`2-2-2-2`).
    pub fn from_reader(reader: impl std::io::Read) -> Result<Self, CatalogError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut entries = Vec::new();
        for (i, rec) in rdr.deserialize::<CatalogRecord>().enumerate() {
            let rec = rec?;
            let mut local_orders = rec
                .local_orders
                .split('-')
                .map(|x| x.parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CatalogError::LocalOrders {
                    line: i + 2,
                    value: rec.local_orders.clone(),
                })?;
            local_orders.sort_unstable();
            entries.push(CatalogEntry {
                group_order: rec.group_order,
                s: rec.s,
                local_orders,
                label: rec.label,
            });
        }
        Ok(Catalog { entries })
    }

    pub fn from_path(path: &Path) -> Result<Self, CatalogError> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn lookup(&self, group_order: u64, local_orders: &[u64]) -> Option<&CatalogEntry> {
        let mut sorted = local_orders.to_vec();
        sorted.sort_unstable();
        self.entries.iter().find(|e| {
            e.group_order == group_order && e.s == sorted.len() && e.local_orders == sorted
        })
    }
}

/// Sufficient check for (B2): the first subgroup `K` (by order, then elements) with
///
/// 1. every nonzero invariant summand built from characters trivial on `K`,
/// 2. the family `C' = C~/K` has invariant `Sym^2` of dimension `s - 3` with an
///    injective multiplication map at some tried tuple, or matches the catalog,
/// 3. no local monodromy in `K`, so `C' -> P^1` keeps all `s` branch points.
///
/// Requires (A).
pub fn cond_b2_lite(
    prym: &PrymDatum,
    trials: usize,
    seed: u64,
    catalog: Option<&Catalog>,
) -> Result<B2Verdict, FormsError> {
    if !cond_a(prym) {
        return Ok(B2Verdict::NotEstablished {
            reason: "condition (A) fails".into(),
        });
    }
    let datum = prym.datum();
    let group = datum.group();
    let candidates = match subgroups(group, DEFAULT_SUBGROUP_BOUND) {
        Ok(c) => c,
        Err(e) => return Ok(B2Verdict::NotEstablished { reason: e.to_string() }),
    };
    let table = prym.eigenspace_table();
    let target = s_minus_3(prym) as usize;
    let moving: Vec<usize> = table
        .entries()
        .iter()
        .enumerate()
        .filter(|(i, e)| {
            e.anti_invariant && e.dim > 0 && table.entries()[table.negative_index(*i)].dim > 0
        })
        .map(|(i, _)| i)
        .collect();
    for k in &candidates {
        if datum.columns().iter().any(|l| k.contains(l)) {
            continue;
        }
        if !moving
            .iter()
            .all(|&i| table.entries()[i].character.is_trivial_on(k))
        {
            continue;
        }
        if let Some(entry) = catalog.and_then(|c| c.lookup((group.order() / k.order()) as u64, &local_orders_mod(prym, k))) {
            return Ok(B2Verdict::Established {
                subgroup: elements_of(k),
                witness: Witness::Catalog(entry.label.clone()),
            });
        }
        let basis = sym2_basis_where(datum, |c| c.is_trivial_on(k));
        if basis.len() != target {
            continue;
        }
        if let Injectivity::Injective { tuple, .. } = injectivity_check_basis(datum, &basis, trials, seed)? {
            return Ok(B2Verdict::Established {
                subgroup: elements_of(k),
                witness: Witness::Tuple(tuple),
            });
        }
    }
    Ok(B2Verdict::NotEstablished {
        reason: format!("none of {} subgroups qualifies", candidates.len()),
    })
}

fn local_orders_mod(prym: &PrymDatum, k: &SubgroupSpan) -> Vec<u64> {
    prym.datum()
        .columns()
        .iter()
        .map(|l| {
            let mut n = 1;
            let mut y = l.clone();
            while !k.contains(&y) {
                y = y.add(l);
                n += 1;
            }
            n
        })
        .collect()
}

fn elements_of(k: &SubgroupSpan) -> Vec<String> {
    k.elements().iter().map(ToString::to_string).collect()
}

pub fn full_report(
    prym: &PrymDatum,
    trials: usize,
    seed: u64,
    catalog: Option<&Catalog>,
) -> Result<ConditionReport, FormsError> {
    let summand_profile = summand_profile(prym);
    let dim_pg = summand_profile.iter().map(|s| s.dim).sum();
    let (cond_b1, b1_self_paired) = cond_b1_detail(prym);
    Ok(ConditionReport {
        dim_pg,
        s_minus_3: s_minus_3(prym),
        cond_a: dim_pg == s_minus_3(prym),
        cond_b1,
        b1_self_paired,
        cond_b: cond_b(prym, trials, seed)?,
        cond_b2: cond_b2_lite(prym, trials, seed, catalog)?,
        summand_profile,
    })
}
