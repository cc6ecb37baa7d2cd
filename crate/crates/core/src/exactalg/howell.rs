use std::fmt;

use serde::{Deserialize, Serialize};

use super::residue::{gcd, gcd_ext, Residue};

/// A dense matrix over `Z/N`, entries stored reduced into `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    /// Builds a matrix from integer rows, reducing every entry mod `modulus`.
    ///
    /// Panics on ragged rows or `modulus < 2`.
    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            entries.extend(row.iter().map(|&x| x.rem_euclid(modulus as i64) as u64));
        }
        ModMatrix {
            modulus,
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_columns(modulus: u64, rank: usize, columns: &[Vec<u64>]) -> Self {
        let rows: Vec<Vec<i64>> = (0..rank)
            .map(|i| columns.iter().map(|c| c[i] as i64).collect())
            .collect();
        let mut m = ModMatrix::from_rows(modulus, &rows);
        m.cols = columns.len();
        m
    }

    pub fn zero(modulus: u64, rows: usize, cols: usize) -> Self {
        ModMatrix {
            modulus,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn residue(&self, i: usize, j: usize) -> Residue {
        Residue::from_u64(self.get(i, j), self.modulus)
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Smallest unit `u` of `Z/n` with `u * a == gcd(a, n) (mod n)`.
fn normalizing_unit(a: i64, n: i64) -> i64 {
    let g = gcd(a as u64, n as u64) as i64;
    let m = n / g;
    let mut u = if m == 1 {
        1
    } else {
        gcd_ext(a / g, m).1.rem_euclid(m)
    };
    while gcd(u as u64, n as u64) != 1 {
        u += m;
    }
    u
}

/// Howell normal form: the unique canonical generating matrix of the row span.
///
/// Two matrices over the same `Z/N` with the same number of columns have equal
/// row spans iff their Howell forms are identical. Zero rows are dropped, so the
/// zero matrix maps to a matrix with no rows.
pub fn howell_form(m: &ModMatrix) -> ModMatrix {
    let n = m.modulus as i64;
    let cols = m.cols;
    let mut a: Vec<Vec<i64>> = (0..m.rows)
        .map(|i| m.row(i).iter().map(|&x| x as i64).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r >= a.len() {
            break;
        }
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (x, y) = (a[r][c], a[i][c]);
            let (g, s, t) = gcd_ext(x, y);
            let (u, v) = (-y / g, x / g);
            for k in c..cols {
                let (p, q) = (a[r][k], a[i][k]);
                a[r][k] = (s * p + t * q).rem_euclid(n);
                a[i][k] = (u * p + v * q).rem_euclid(n);
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        let unit = normalizing_unit(a[r][c], n);
        for k in c..cols {
            a[r][k] = (a[r][k] * unit).rem_euclid(n);
        }
        let pivot = a[r][c];
        for i in 0..r {
            let q = a[i][c] / pivot;
            if q != 0 {
                for k in c..cols {
                    a[i][k] = (a[i][k] - q * a[r][k]).rem_euclid(n);
                }
            }
        }
        // Howell closure: the multiple of the pivot row that kills the pivot
        // still lies in the span and must be generated by rows below.
        let factor = n / pivot;
        let ann: Vec<i64> = a[r].iter().map(|&x| (x * factor).rem_euclid(n)).collect();
        if ann.iter().any(|&x| x != 0) {
            a.push(ann);
        }
        r += 1;
    }
    a.truncate(r);
    let rows: Vec<Vec<i64>> = a;
    let mut out = ModMatrix::from_rows(m.modulus, &rows);
    out.cols = cols;
    out
}
