//! Classification tables: CSV/JSON rows and comparison against imported rows.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::label_from_factors;
use crate::conditions::ConditionReport;
use crate::search::{parse_group_label, SearchRow, SearchSpec};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// `Y` established, `Y*` established through the self-paired reading of (B1),
/// `-` not established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Flag {
    #[serde(rename = "Y")]
    Yes,
    #[serde(rename = "Y*")]
    YesSelfPaired,
    #[serde(rename = "-")]
    No,
}

impl Flag {
    pub fn is_set(self) -> bool {
        self != Flag::No
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Flag::Yes
        } else {
            Flag::No
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Imported,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableRow {
    pub r: usize,
    pub g_tilde: u64,
    pub g: u64,
    pub p: u64,
    pub group: String,
    pub subgroup: String,
    pub ram: u64,
    pub br: u64,
    pub quotient: String,
    pub b1: Flag,
    pub b2: Flag,
    pub b: Flag,
    #[serde(default = "imported")]
    pub provenance: Provenance,
}

fn imported() -> Provenance {
    Provenance::Imported
}

/// The numerical type used to match rows: `(s, g~, g, p, |G~|, |H|, ram, br, |G|)`.
pub type InvariantTuple = (usize, u64, u64, u64, u64, u64, u64, u64, u64);

impl TableRow {
    pub fn from_search_row(row: &SearchRow) -> Self {
        let datum = row.prym.datum();
        let rb = row.prym.ram_branch_counts();
        let report = &row.report;
        TableRow {
            r: datum.branch_count(),
            g_tilde: row.genus_total,
            g: row.genus_quotient,
            p: row.genus_total - row.genus_quotient,
            group: datum.group().label(),
            subgroup: row.prym.subgroup().label(),
            ram: rb.ramification_points,
            br: rb.branch_points,
            quotient: label_from_factors(&datum.group().quotient_factors(row.prym.subgroup())),
            b1: match (report.cond_b1, report.b1_self_paired) {
                (true, true) => Flag::YesSelfPaired,
                (b, _) => Flag::from_bool(b),
            },
            b2: Flag::from_bool(report.cond_b2.is_established()),
            b: Flag::from_bool(report.cond_b.is_established()),
            provenance: Provenance::Computed,
        }
    }

    /// `None` when a group label is not understood.
    pub fn invariant_tuple(&self) -> Option<InvariantTuple> {
        Some((
            self.r,
            self.g_tilde,
            self.g,
            self.p,
            group_order(&self.group)?,
            group_order(&self.subgroup)?,
            self.ram,
            self.br,
            group_order(&self.quotient)?,
        ))
    }

    /// Every flag set here is also set in `other`.
    pub fn flags_covered_by(&self, other: &TableRow) -> bool {
        [(self.b1, other.b1), (self.b2, other.b2), (self.b, other.b)]
            .iter()
            .all(|(a, b)| !a.is_set() || b.is_set())
    }
}

/// Order of a group given by a label such as `C2xC4`, `D4` (order 8), `S3`, `A4`,
/// `Q8`, `C3:S3` (semidirect product) or `C4wrC2`.
pub fn group_order(label: &str) -> Option<u64> {
    if let Some(factors) = parse_group_label(label) {
        return Some(factors.iter().product());
    }
    if let Some((a, b)) = label.split_once("wr") {
        let base = group_order(a)?;
        let k = group_order(b)?;
        return Some(base.pow(k as u32) * k);
    }
    let parts: Vec<&str> = label.split(['x', ':', '.']).collect();
    if parts.len() > 1 {
        return parts.iter().map(|p| group_order(p)).product();
    }
    let (kind, n) = label.split_at(1);
    let n: u64 = n.parse().ok()?;
    match kind {
        "C" | "Z" => Some(n),
        "D" => Some(2 * n),
        "Q" => Some(n),
        "S" => Some((1..=n).product()),
        "A" if n >= 2 => Some((1..=n).product::<u64>() / 2),
        _ => None,
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_csv<W: Write>(rows: &[TableRow], w: W) -> Result<(), TableError> {
    let mut wtr = csv_writer(w);
    if rows.is_empty() {
        wtr.write_record(HEADER)?;
    }
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub const HEADER: [&str; 13] = [
    "r", "g_tilde", "g", "p", "group", "subgroup", "ram", "br", "quotient", "b1", "b2", "b",
    "provenance",
];

pub fn to_csv_string(rows: &[TableRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<TableRow>, TableError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    Ok(rdr.deserialize().collect::<Result<_, _>>()?)
}

/// A table row together with the datum and the full condition report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonRow {
    #[serde(flatten)]
    pub row: TableRow,
    pub datum: String,
    pub key: String,
    pub report: serde_json::Value,
}

pub fn json_rows(rows: &[SearchRow]) -> Vec<JsonRow> {
    rows.iter()
        .map(|r| JsonRow {
            row: TableRow::from_search_row(r),
            datum: r.prym.to_string(),
            key: r.key.to_string(),
            report: report_value(&r.report),
        })
        .collect()
}

pub fn report_value(report: &ConditionReport) -> serde_json::Value {
    serde_json::to_value(report).expect("reports serialize")
}

pub fn to_json_string(rows: &[JsonRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn read_json(text: &str) -> Result<Vec<JsonRow>, TableError> {
    Ok(serde_json::from_str(text)?)
}

/// An imported row that could not be used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub line: u64,
    pub reason: String,
}

/// Reads rows leniently: malformed records are reported, not fatal.
pub fn read_import<R: Read>(r: R) -> Result<(Vec<(u64, TableRow)>, Vec<Skipped>), TableError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r);
    let headers = rdr.headers()?.clone();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        match rec.deserialize::<TableRow>(Some(&headers)) {
            Ok(row) => rows.push((
                line,
                TableRow {
                    provenance: Provenance::Imported,
                    ..row
                },
            )),
            Err(e) => skipped.push(Skipped {
                line,
                reason: format!("malformed row: {e}"),
            }),
        }
    }
    Ok((rows, skipped))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowMatch {
    pub line: u64,
    pub imported: TableRow,
    /// Computed rows with the same invariant tuple.
    pub candidates: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Comparison {
    /// Same invariant tuple and at least the imported flags.
    pub matched: Vec<RowMatch>,
    /// Same invariant tuple, but no candidate carries all imported flags.
    pub weaker_flags: Vec<RowMatch>,
    /// No computed row with the invariant tuple.
    pub unmatched_imported: Vec<RowMatch>,
    /// Computed rows not matched by any imported row.
    pub unmatched_computed: Vec<TableRow>,
    pub skipped: Vec<Skipped>,
}

impl Comparison {
    /// Weaker-flag rows in which an imported (B1) mark is not reproduced.
    pub fn b1_disagreements(&self) -> Vec<&RowMatch> {
        self.weaker_flags
            .iter()
            .filter(|m| m.imported.b1.is_set())
            .collect()
    }
}

/// Matches imported rows against computed ones by [`InvariantTuple`]. Imported
/// rows with `p != g~ - g` or unknown labels are skipped.
pub fn compare(
    computed: &[TableRow],
    imported: &[(u64, TableRow)],
    mut skipped: Vec<Skipped>,
) -> Comparison {
    let mut cmp = Comparison::default();
    let tuples: Vec<Option<InvariantTuple>> = computed.iter().map(TableRow::invariant_tuple).collect();
    let mut used = vec![false; computed.len()];
    for (line, row) in imported {
        if row.g > row.g_tilde || row.p != row.g_tilde - row.g {
            skipped.push(Skipped {
                line: *line,
                reason: format!("inconsistent: p = {} but g~ - g = {}", row.p, row.g_tilde as i64 - row.g as i64),
            });
            continue;
        }
        let Some(t) = row.invariant_tuple() else {
            skipped.push(Skipped {
                line: *line,
                reason: "unrecognized group label".into(),
            });
            continue;
        };
        let candidates: Vec<usize> = (0..computed.len())
            .filter(|&i| tuples[i] == Some(t))
            .collect();
        let m = RowMatch {
            line: *line,
            imported: row.clone(),
            candidates: candidates.len(),
        };
        for &i in &candidates {
            used[i] = true;
        }
        if candidates.is_empty() {
            cmp.unmatched_imported.push(m);
        } else if candidates.iter().any(|&i| row.flags_covered_by(&computed[i])) {
            cmp.matched.push(m);
        } else {
            cmp.weaker_flags.push(m);
        }
    }
    cmp.unmatched_computed = computed
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(r, _)| r.clone())
        .collect();
    cmp.skipped = skipped;
    cmp
}

/// Whether a search with `spec` could produce `row`: an abelian group it
/// enumerates, a branch count it covers and, if fixed, the right `|H|`.
pub fn in_scope(spec: &SearchSpec, row: &TableRow) -> bool {
    let Some(factors) = parse_group_label(&row.group) else {
        return false;
    };
    spec.shapes().contains(&factors)
        && spec.branch_counts.contains(&row.r)
        && spec
            .h_order
            .is_none_or(|h| group_order(&row.subgroup) == Some(h as u64))
}

/// Splits imported rows into those inside and outside the scope of `spec`.
pub fn split_scope(
    spec: &SearchSpec,
    imported: Vec<(u64, TableRow)>,
) -> (Vec<(u64, TableRow)>, Vec<(u64, TableRow)>) {
    imported.into_iter().partition(|(_, r)| in_scope(spec, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(r: usize, g_tilde: u64, g: u64, p: u64, group: &str, h: &str, ram: u64, br: u64, q: &str) -> TableRow {
        TableRow {
            r,
            g_tilde,
            g,
            p,
            group: group.into(),
            subgroup: h.into(),
            ram,
            br,
            quotient: q.into(),
            b1: Flag::Yes,
            b2: Flag::No,
            b: Flag::Yes,
            provenance: Provenance::Imported,
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order("C2xC4"), Some(8));
        assert_eq!(group_order("D4"), Some(8));
        assert_eq!(group_order("D6"), Some(12));
        assert_eq!(group_order("S4"), Some(24));
        assert_eq!(group_order("A4"), Some(12));
        assert_eq!(group_order("Q8"), Some(8));
        assert_eq!(group_order("C3xC3:S3"), Some(54));
        assert_eq!(group_order("C4wrC2"), Some(32));
        assert_eq!(group_order("C4.C2xC2xC2"), Some(32));
        assert_eq!(group_order("C1"), Some(1));
        assert_eq!(group_order("K7"), None);
    }

    #[test]
    fn csv_round_trip() {
        let mut a = row(4, 3, 0, 3, "C6", "C3", 5, 5, "C2");
        a.b1 = Flag::YesSelfPaired;
        let rows = vec![a, row(5, 4, 1, 3, "C2xC4", "C4", 3, 3, "C2")];
        let s = to_csv_string(&rows);
        assert!(s.starts_with("r,g_tilde,g,p,group,subgroup,ram,br,quotient,b1,b2,b,provenance\n"));
        assert!(s.contains(",Y*,-,Y,imported\n"));
        let back = read_csv(s.as_bytes()).unwrap();
        assert_eq!(back, rows);
        assert_eq!(to_csv_string(&back), s);
    }

    #[test]
    fn empty_table_still_has_a_header() {
        assert_eq!(to_csv_string(&[]), format!("{}\n", HEADER.join(",")));
    }

    #[test]
    fn comparison_by_invariant_tuple() {
        let mut computed = vec![row(4, 3, 0, 3, "C6", "C3", 5, 5, "C2"), row(4, 3, 1, 2, "C6", "C3", 2, 2, "C2")];
        computed[1].b1 = Flag::No;
        for r in &mut computed {
            r.provenance = Provenance::Computed;
        }
        let imported = vec![
            (2, row(4, 3, 0, 3, "C6", "C3", 5, 5, "C2")),
            (3, row(4, 3, 1, 2, "C6", "C3", 2, 2, "C2")),
            (4, row(4, 9, 1, 8, "C10", "C5", 4, 4, "C2")),
            (5, row(4, 9, 1, 7, "C10", "C5", 4, 4, "C2")),
            (6, row(4, 9, 1, 8, "K10", "C5", 4, 4, "C2")),
        ];
        let c = compare(&computed, &imported, Vec::new());
        assert_eq!(c.matched.len(), 1);
        assert_eq!(c.weaker_flags.len(), 1);
        assert_eq!(c.b1_disagreements().len(), 1);
        assert_eq!(c.unmatched_imported.len(), 1);
        assert_eq!(c.skipped.iter().map(|s| s.line).collect::<Vec<_>>(), vec![5, 6]);
        assert!(c.skipped[0].reason.contains("inconsistent"));
        assert!(c.unmatched_computed.is_empty());
    }

    #[test]
    fn lenient_import() {
        let text = "r,g_tilde,g,p,group,subgroup,ram,br,quotient,b1,b2,b,provenance\n\
                    4,3,0,3,C6,C3,5,5,C2,Y,Y,Y,imported\n\
                    4,x,0,3,C6,C3,5,5,C2,Y,Y,Y,imported\n";
        let (rows, skipped) = read_import(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].0, 2);
        assert_eq!(skipped.len(), 1);
        assert_eq!(skipped[0].line, 3);
    }

    #[test]
    fn reference_table_parses() {
        let (rows, skipped) = read_import(&include_bytes!("../data/reference_table.csv")[..]).unwrap();
        assert!(skipped.is_empty());
        assert_eq!(rows.len(), 152);
        assert!(rows.iter().all(|(_, r)| r.invariant_tuple().is_some()));
    }
}
