//! Abelian cover data `w_i^N = prod_j (z - z_j)^{r_ij}` and their numerical invariants.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::abgroup::{element_order, pairing, GroupElement, GroupError, SubgroupSpan};
use crate::exactalg::{frac_part, gcd, ModMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("monodromy matrix is empty")]
    EmptyMatrix,
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("column {0} is zero: every branch point needs nontrivial local monodromy")]
    ZeroColumn(usize),
    #[error("columns sum to {0} instead of zero, so the cover would branch over infinity")]
    ColumnSumNonzero(GroupElement),
    #[error("{0} branch points given, at least 3 are required")]
    TooFewPoints(usize),
    #[error("subgroup generator {0} does not lie in the monodromy group")]
    NotInGroup(GroupElement),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("genus formula produced the non-integer value {0}")]
    NonIntegralGenus(String),
    #[error("quotient genus {riemann_hurwitz} from Riemann-Hurwitz disagrees with the invariant eigenspace sum {character_sum}")]
    InconsistentGenus {
        riemann_hurwitz: i64,
        character_sum: u64,
    },
}

/// A character of the monodromy group, realized by an exponent vector `n` in
/// `(Z/N)^m`. Two vectors give the same character exactly when they produce
/// the same values `alpha = n A` on the columns, so `values` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    n: GroupElement,
    values: Vec<u64>,
}

impl Character {
    pub fn exponents(&self) -> &GroupElement {
        &self.n
    }

    /// `alpha_j = n . l_j mod N`.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Whether `chi(h) = 1` for every `h` in `subgroup`.
    pub fn is_trivial_on(&self, subgroup: &SubgroupSpan) -> bool {
        subgroup
            .generators()
            .iter()
            .all(|h| pairing(&self.n, h).map(|r| r.is_zero()).unwrap_or(false))
    }

    fn negated_values(&self, modulus: u64) -> Vec<u64> {
        self.values.iter().map(|&v| (modulus - v) % modulus).collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// The monodromy matrix `A` over `Z/N`, one column per branch point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCoverDatum {
    matrix: ModMatrix,
    columns: Vec<GroupElement>,
    group: SubgroupSpan,
    characters: Vec<Character>,
}

impl AbelianCoverDatum {
    /// Validates the matrix given as integer rows (reduced mod `modulus`).
    pub fn validate(modulus: u64, rows: &[Vec<i64>]) -> Result<Self, DatumError> {
        if modulus < 2 {
            return Err(DatumError::BadModulus(modulus));
        }
        let Some(first) = rows.first() else {
            return Err(DatumError::EmptyMatrix);
        };
        if first.is_empty() {
            return Err(DatumError::EmptyMatrix);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != first.len() {
                return Err(DatumError::RaggedRows {
                    row: i + 1,
                    found: row.len(),
                    expected: first.len(),
                });
            }
        }
        Self::from_matrix(ModMatrix::from_rows(modulus, rows))
    }

    pub fn from_columns(modulus: u64, columns: &[GroupElement]) -> Result<Self, DatumError> {
        if modulus < 2 {
            return Err(DatumError::BadModulus(modulus));
        }
        let Some(first) = columns.first() else {
            return Err(DatumError::EmptyMatrix);
        };
        let cols: Vec<Vec<u64>> = columns.iter().map(|c| c.coords().to_vec()).collect();
        Self::from_matrix(ModMatrix::from_columns(modulus, first.rank(), &cols))
    }

    fn from_matrix(matrix: ModMatrix) -> Result<Self, DatumError> {
        let n = matrix.modulus();
        let m = matrix.rows();
        let s = matrix.cols();
        if m == 0 || s == 0 {
            return Err(DatumError::EmptyMatrix);
        }
        let columns: Vec<GroupElement> = (0..s)
            .map(|j| GroupElement::from_reduced(n, matrix.column(j)))
            .collect();
        if let Some(j) = columns.iter().position(GroupElement::is_zero) {
            return Err(DatumError::ZeroColumn(j + 1));
        }
        let total = columns
            .iter()
            .fold(GroupElement::zero(n, m), |acc, c| acc.add(c));
        if !total.is_zero() {
            return Err(DatumError::ColumnSumNonzero(total));
        }
        if s < 3 {
            return Err(DatumError::TooFewPoints(s));
        }
        let group = SubgroupSpan::span(n, m, &columns)?;
        let characters = enumerate_characters(&matrix);
        Ok(AbelianCoverDatum {
            matrix,
            columns,
            group,
            characters,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.matrix.modulus()
    }

    /// Number of rows `m`.
    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of branch points `s`.
    pub fn branch_count(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.matrix
    }

    /// Local monodromies `l_j` (0-based).
    pub fn columns(&self) -> &[GroupElement] {
        &self.columns
    }

    /// The Galois group, the column span of `A`.
    pub fn group(&self) -> &SubgroupSpan {
        &self.group
    }

    /// All characters of the group, one representative exponent vector each,
    /// sorted by exponent vector. The trivial character comes first.
    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn character(&self, n: &GroupElement) -> Character {
        let (values, _) = self.alpha_vector(n);
        Character {
            n: n.clone(),
            values,
        }
    }

    /// `(alpha, alpha_tilde)`: `alpha = n A` reduced into `[0, N)` and the integer
    /// sums `alpha_tilde_j = sum_i n_i r_ij` with both factors lifted to `[0, N)`.
    pub fn alpha_vector(&self, n: &GroupElement) -> (Vec<u64>, Vec<i64>) {
        assert_eq!(n.rank(), self.rank(), "exponent vector has the wrong length");
        let nm = self.modulus();
        let tilde: Vec<i64> = (0..self.branch_count())
            .map(|j| {
                n.coords()
                    .iter()
                    .enumerate()
                    .map(|(i, &ni)| (ni * self.matrix.get(i, j)) as i64)
                    .sum()
            })
            .collect();
        let alpha = tilde.iter().map(|&t| t as u64 % nm).collect();
        (alpha, tilde)
    }

    /// Genus of the total curve:
    /// `1 + d((s - 2)/2 - (1/2N) sum_j gcd(N, r_1j, ..., r_mj))` with `d = |G|`.
    pub fn genus_total(&self) -> u64 {
        let n = self.modulus() as i64;
        let d = self.group.order() as i64;
        let s = self.branch_count() as i64;
        let gcd_sum: i64 = (0..self.branch_count())
            .map(|j| {
                self.matrix
                    .column(j)
                    .iter()
                    .fold(self.modulus(), |g, &x| gcd(g, x)) as i64
            })
            .sum();
        let g = Rational::from_integer(1.into())
            + Rational::from_integer(d.into())
                * (Rational::new((s - 2).into(), 2.into())
                    - Rational::new(gcd_sum.into(), (2 * n).into()));
        expect_natural(&g)
    }

    /// Ramification order `N / gcd(N, r_1j, ..., r_mj)` over branch point `j` (0-based).
    pub fn local_order(&self, j: usize) -> u64 {
        let g = self
            .matrix
            .column(j)
            .iter()
            .fold(self.modulus(), |g, &x| gcd(g, x));
        self.modulus() / g
    }

    /// `d_n = -1 + sum_j <-alpha_j / N>` for a nontrivial character, `0` for the trivial one.
    pub fn eigenspace_dim(&self, n: &GroupElement) -> u64 {
        let (alpha, _) = self.alpha_vector(n);
        self.eigenspace_dim_of_values(&alpha)
    }

    pub(crate) fn eigenspace_dim_of_values(&self, alpha: &[u64]) -> u64 {
        if alpha.iter().all(|&a| a == 0) {
            return 0;
        }
        let nm = BigInt::from(self.modulus());
        let total = alpha.iter().fold(Rational::zero(), |acc, &a| {
            acc + frac_part(&Rational::new(-BigInt::from(a), nm.clone()))
        }) - Rational::from_integer(1.into());
        expect_natural(&total)
    }
}

fn expect_natural(q: &Rational) -> u64 {
    assert!(
        q.is_integer() && *q >= Rational::zero(),
        "invariant violated: expected a nonnegative integer, got {q}"
    );
    q.to_integer().to_u64().expect("fits in u64")
}

/// Breadth-first search over exponent vectors, keeping one per distinct `n A`.
fn enumerate_characters(matrix: &ModMatrix) -> Vec<Character> {
    let n = matrix.modulus();
    let m = matrix.rows();
    let s = matrix.cols();
    let zero = GroupElement::zero(n, m);
    let mut seen: HashMap<Vec<u64>, GroupElement> = HashMap::new();
    seen.insert(vec![0; s], zero.clone());
    let mut queue = VecDeque::from([(zero, vec![0u64; s])]);
    while let Some((vec, values)) = queue.pop_front() {
        for i in 0..m {
            let mut c = vec.coords().to_vec();
            c[i] = (c[i] + 1) % n;
            let next_values: Vec<u64> = values
                .iter()
                .zip(matrix.row(i))
                .map(|(a, b)| (a + b) % n)
                .collect();
            if !seen.contains_key(&next_values) {
                let e = GroupElement::from_reduced(n, c);
                seen.insert(next_values.clone(), e.clone());
                queue.push_back((e, next_values));
            }
        }
    }
    let mut chars: Vec<Character> = seen
        .into_iter()
        .map(|(values, n)| Character { n, values })
        .collect();
    chars.sort_by(|a, b| a.n.cmp(&b.n));
    chars
}

/// One row of an [`EigenspaceTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenEntry {
    pub character: Character,
    pub dim: u64,
    pub anti_invariant: bool,
}

/// Eigenspace dimensions `d_n` of holomorphic 1-forms, with the anti-invariance
/// flag relative to the subgroup `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenspaceTable {
    modulus: u64,
    entries: Vec<EigenEntry>,
}

impl EigenspaceTable {
    pub fn entries(&self) -> &[EigenEntry] {
        &self.entries
    }

    pub fn get(&self, character: &Character) -> Option<&EigenEntry> {
        self.position(character.values()).map(|i| &self.entries[i])
    }

    pub fn dim_of(&self, n: &GroupElement) -> Option<u64> {
        self.entries
            .iter()
            .find(|e| e.character.exponents() == n)
            .map(|e| e.dim)
    }

    fn position(&self, values: &[u64]) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.character.values() == values)
    }

    /// Index of the entry for the inverse character.
    pub fn negative_index(&self, i: usize) -> usize {
        let neg = self.entries[i].character.negated_values(self.modulus);
        self.position(&neg).expect("characters form a group")
    }

    /// Whether `2 chi = 0`.
    pub fn is_self_paired(&self, i: usize) -> bool {
        self.negative_index(i) == i
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.dim).sum()
    }

    pub fn anti_invariant_total(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.anti_invariant)
            .map(|e| e.dim)
            .sum()
    }
}

/// Counts for the intermediate cover `C~ -> C = C~/H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RamBranch {
    pub ramification_points: u64,
    pub branch_points: u64,
}

/// A cover datum together with the subgroup `H` defining `C = C~/H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrymDatum {
    datum: AbelianCoverDatum,
    subgroup: SubgroupSpan,
}

impl PrymDatum {
    /// `H` is the span of `generators`, each of which must lie in the monodromy group.
    pub fn new(datum: AbelianCoverDatum, generators: &[GroupElement]) -> Result<Self, DatumError> {
        for g in generators {
            datum.group.elements()[0].same_ambient(g)?;
            if !datum.group.contains(g) {
                return Err(DatumError::NotInGroup(g.clone()));
            }
        }
        let subgroup = SubgroupSpan::span(datum.modulus(), datum.rank(), generators)?;
        Ok(PrymDatum { datum, subgroup })
    }

    pub fn from_subgroup(datum: AbelianCoverDatum, subgroup: SubgroupSpan) -> Result<Self, DatumError> {
        let gens = subgroup.generators().to_vec();
        let p = Self::new(datum, &gens)?;
        debug_assert_eq!(p.subgroup.elements(), subgroup.elements());
        Ok(p)
    }

    pub fn datum(&self) -> &AbelianCoverDatum {
        &self.datum
    }

    pub fn subgroup(&self) -> &SubgroupSpan {
        &self.subgroup
    }

    /// `|G~/H|`.
    pub fn quotient_order(&self) -> usize {
        self.datum.group.order() / self.subgroup.order()
    }

    /// Order of the image of `x` in `G~/H`.
    pub fn quotient_element_order(&self, x: &GroupElement) -> u64 {
        let mut k = 1;
        let mut y = x.clone();
        while !self.subgroup.contains(&y) {
            y = y.add(x);
            k += 1;
        }
        k
    }

    pub fn eigenspace_table(&self) -> EigenspaceTable {
        let entries = self
            .datum
            .characters
            .iter()
            .map(|c| EigenEntry {
                character: c.clone(),
                dim: self.datum.eigenspace_dim_of_values(c.values()),
                anti_invariant: !c.is_trivial_on(&self.subgroup),
            })
            .collect();
        EigenspaceTable {
            modulus: self.datum.modulus(),
            entries,
        }
    }

    /// Genus of `C = C~/H` by Riemann-Hurwitz for `C -> P^1` with group `G~/H`,
    /// cross-checked against the sum of `d_n` over characters trivial on `H`.
    pub fn genus_quotient(&self) -> Result<u64, DatumError> {
        let order = self.quotient_order() as i64;
        let mut sum = Rational::from_integer((-2).into());
        for l in &self.datum.columns {
            let o = self.quotient_element_order(l) as i64;
            sum += Rational::new((o - 1).into(), o.into());
        }
        let two_g_minus_two = Rational::from_integer(order.into()) * sum;
        let g = (two_g_minus_two + Rational::from_integer(2.into())) / Rational::from_integer(2.into());
        if !g.is_integer() {
            return Err(DatumError::NonIntegralGenus(g.to_string()));
        }
        let rh = g.to_integer().to_i64().expect("small genus");
        let table = self.eigenspace_table();
        let invariant: u64 = table
            .entries
            .iter()
            .filter(|e| !e.anti_invariant)
            .map(|e| e.dim)
            .sum();
        if rh < 0 || rh as u64 != invariant {
            return Err(DatumError::InconsistentGenus {
                riemann_hurwitz: rh,
                character_sum: invariant,
            });
        }
        Ok(invariant)
    }

    /// Ramification points on `C~` and branch points on `C` of `C~ -> C`.
    ///
    /// Over `z_j` the inertia of `C~ -> C` is `<l_j> ∩ H`; when it is nontrivial,
    /// all `|G~|/ord(l_j)` points above `z_j` ramify and they map to
    /// `|G|/ord_G(l_j)` points of `C`.
    pub fn ram_branch_counts(&self) -> RamBranch {
        let full = self.datum.group.order() as u64;
        let quotient = self.quotient_order() as u64;
        let mut counts = RamBranch {
            ramification_points: 0,
            branch_points: 0,
        };
        for l in &self.datum.columns {
            let ord = element_order(l);
            let ord_q = self.quotient_element_order(l);
            if ord / ord_q > 1 {
                counts.ramification_points += full / ord;
                counts.branch_points += quotient / ord_q;
            }
        }
        counts
    }

    pub fn prym_dimension(&self) -> Result<u64, DatumError> {
        Ok(self.datum.genus_total() - self.genus_quotient()?)
    }

    /// Polarization type `(1, ..., 1, |H|, ..., |H|)` of length `p`: the 1 occurs
    /// `g - 1` times for an unramified `C~ -> C` and `g` times otherwise.
    pub fn polarization_type(&self) -> Result<Vec<u64>, DatumError> {
        let p = self.prym_dimension()? as usize;
        let g = self.genus_quotient()? as usize;
        let ones = if self.ram_branch_counts().ramification_points == 0 {
            g.saturating_sub(1)
        } else {
            g
        }
        .min(p);
        let h = self.subgroup.order() as u64;
        Ok(std::iter::repeat_n(1, ones)
            .chain(std::iter::repeat_n(h, p - ones))
            .collect())
    }
}

impl fmt::Display for PrymDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self
            .subgroup
            .generators()
            .iter()
            .map(|g| {
                g.coords()
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        let h = if h.is_empty() { "0".to_string() } else { h.join(";") };
        write!(f, "N={}; A={}; H={}", self.datum.modulus(), self.datum.matrix, h)
    }
}

/// A datum block as read from text, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatumSpec {
    pub line: usize,
    pub modulus: u64,
    pub rows: Vec<Vec<i64>>,
    pub subgroup_generators: Vec<Vec<i64>>,
}

impl DatumSpec {
    pub fn build(&self) -> Result<PrymDatum, DatumError> {
        let datum = AbelianCoverDatum::validate(self.modulus, &self.rows)?;
        let m = datum.rank();
        let mut gens = Vec::new();
        for g in &self.subgroup_generators {
            if g.len() != m {
                return Err(DatumError::Group(GroupError::MixedAmbient(
                    self.modulus,
                    m,
                    self.modulus,
                    g.len(),
                )));
            }
            gens.push(GroupElement::new(self.modulus, g));
        }
        PrymDatum::new(datum, &gens)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Parses datum blocks such as `N=6; A=1,1,1,1,2; H=2`.
///
/// Fields are separated by `;` or newlines; a piece without `=` continues the
/// previous `A` or `H` field as another row or generator. Blocks are separated
/// by blank lines and `#` starts a comment.
pub fn parse_data(text: &str) -> Result<Vec<DatumSpec>, ParseError> {
    let mut blocks: Vec<Vec<(usize, String)>> = Vec::new();
    let mut current: Vec<(usize, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        for piece in line.split(';') {
            let piece: String = piece.chars().filter(|c| !c.is_whitespace()).collect();
            if !piece.is_empty() {
                current.push((idx + 1, piece));
            }
        }
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    blocks.iter().map(|b| parse_block(b)).collect()
}

fn parse_block(pieces: &[(usize, String)]) -> Result<DatumSpec, ParseError> {
    let start = pieces[0].0;
    let mut modulus: Option<u64> = None;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut gens: Vec<Vec<i64>> = Vec::new();
    let mut seen_h = false;
    let mut key = String::new();
    for (line, piece) in pieces {
        let err = |message: String| ParseError {
            line: *line,
            message,
        };
        let value = if let Some((k, v)) = piece.split_once('=') {
            key = k.to_ascii_uppercase();
            v
        } else {
            if key == "N" {
                return Err(err(format!("value `{piece}` after N; matrix rows need `A=`")));
            }
            piece.as_str()
        };
        match key.as_str() {
            "N" => {
                if modulus.is_some() {
                    return Err(err("N given twice".into()));
                }
                let n: u64 = value
                    .parse()
                    .map_err(|_| err(format!("invalid modulus `{value}`")))?;
                if n < 2 {
                    return Err(err(format!("modulus must be at least 2, got {n}")));
                }
                modulus = Some(n);
            }
            "A" => rows.push(parse_vector(value).map_err(err)?),
            "H" => {
                seen_h = true;
                if !value.is_empty() {
                    gens.push(parse_vector(value).map_err(err)?);
                }
            }
            "" => return Err(err(format!("value `{value}` before any key"))),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let modulus = modulus.ok_or(ParseError {
        line: start,
        message: "missing N".into(),
    })?;
    if rows.is_empty() {
        return Err(ParseError {
            line: start,
            message: "missing A".into(),
        });
    }
    if !seen_h {
        return Err(ParseError {
            line: start,
            message: "missing H".into(),
        });
    }
    Ok(DatumSpec {
        line: start,
        modulus,
        rows,
        subgroup_generators: gens,
    })
}

fn parse_vector(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.parse::<i64>().map_err(|_| format!("invalid integer `{x}`")))
        .collect()
}
