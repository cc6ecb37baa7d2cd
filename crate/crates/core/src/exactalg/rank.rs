use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;

/// Rank over `Q` of a rational matrix, computed exactly.
///
/// Each row is scaled to integers by the lcm of its denominators, then
/// fraction-free (Bareiss) elimination is applied.
pub fn rank_exact(rows: &[Vec<Rational>]) -> usize {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    rank_integer(int_rows)
}

/// Bareiss fraction-free elimination; every division is exact.
pub fn rank_integer(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut k = 0;
    for col in 0..ncols {
        if k == nrows {
            break;
        }
        let Some(p) = (k..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(k, p);
        for i in k + 1..nrows {
            for j in col + 1..ncols {
                let v = &a[k][col] * &a[i][j] - &a[i][col] * &a[k][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[k][col].clone();
        k += 1;
    }
    k
}
