//! Exact rank.
//!
//! [`rank`] scales each row to integers and eliminates without fractions,
//! choosing pivots by the Markowitz count `(r - 1)(c - 1)` and dividing
//! every updated row by its content to keep entries small. Ties are
//! broken by position, so the pivot sequence and the result are
//! reproducible. [`dense_rank`] is the textbook rational elimination used
//! as an oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::sparse::SparseMatrix;
use crate::Q;

type Row = BTreeMap<usize, BigInt>;

fn integer_rows(m: &SparseMatrix) -> Vec<Row> {
    let mut rows: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); m.rows];
    for (r, c, v) in m.entries() {
        rows[r].insert(c, v.clone());
    }
    rows.into_iter()
        .map(|row| {
            let l = row.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.into_iter().map(|(c, v)| (c, (v * Q::from_integer(l.clone())).to_integer())).collect()
        })
        .collect()
}

fn content_reduce(row: &mut Row) {
    let g = row.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g > BigInt::one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

/// Exact rank of `m`.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut rows = integer_rows(m);
    for r in rows.iter_mut() {
        content_reduce(r);
    }
    let mut active: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
    let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &rows {
        for &c in r.keys() {
            *col_count.entry(c).or_default() += 1;
        }
    }
    let mut rank = 0;
    loop {
        // Markowitz pivot search; smaller magnitude breaks cost ties
        let mut best: Option<(usize, u64, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !active[i] {
                continue;
            }
            let rc = row.len() - 1;
            for (&c, v) in row {
                let cost = rc * (col_count[&c] - 1);
                let bits = v.bits();
                let key = (cost, bits, i, c);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, _, p, c)) = best else { break };
        rank += 1;
        active[p] = false;
        let prow = std::mem::take(&mut rows[p]);
        for &k in prow.keys() {
            *col_count.get_mut(&k).unwrap() -= 1;
        }
        let a = prow[&c].clone();
        for i in 0..rows.len() {
            if !active[i] {
                continue;
            }
            let Some(b) = rows[i].get(&c).cloned() else { continue };
            let old: Vec<usize> = rows[i].keys().copied().collect();
            let mut next = Row::new();
            for (&k, v) in &rows[i] {
                next.insert(k, v * &a);
            }
            for (&k, v) in &prow {
                let e = next.entry(k).or_insert_with(BigInt::zero);
                *e -= v * &b;
            }
            next.retain(|_, v| !v.is_zero());
            content_reduce(&mut next);
            for k in old {
                *col_count.get_mut(&k).unwrap() -= 1;
            }
            for &k in next.keys() {
                *col_count.entry(k).or_default() += 1;
            }
            if next.is_empty() {
                active[i] = false;
            }
            rows[i] = next;
        }
    }
    rank
}

/// Rank by plain Gaussian elimination over the rationals.
pub fn dense_rank(m: &SparseMatrix) -> usize {
    let mut a = m.to_dense();
    let (nr, nc) = (m.rows, m.cols);
    let mut r = 0;
    for c in 0..nc {
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..nr {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..nc {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
        if r == nr {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64) -> Q {
        Q::from_integer(p.into())
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(rank(&SparseMatrix::zeros(4, 3)), 0);
        assert_eq!(rank(&SparseMatrix::identity(5)), 5);
        assert_eq!(dense_rank(&SparseMatrix::identity(5)), 5);
    }

    #[test]
    fn dependent_rows() {
        let m = SparseMatrix::from_triplets(
            3,
            3,
            vec![(0, 0, q(1)), (0, 1, q(2)), (1, 0, q(2)), (1, 1, q(4)), (2, 2, Q::new(1.into(), 3.into()))],
        )
        .unwrap();
        assert_eq!(rank(&m), 2);
        assert_eq!(dense_rank(&m), 2);
    }

    #[test]
    fn random_sparse_agrees_with_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (nr, nc) = (rng.gen_range(1..20), rng.gen_range(1..20));
            let mut t = Vec::new();
            for r in 0..nr {
                for c in 0..nc {
                    if rng.gen_bool(0.2) {
                        t.push((r, c, q(if rng.gen_bool(0.5) { 1 } else { -1 })));
                    }
                }
            }
            let m = SparseMatrix::from_triplets(nr, nc, t).unwrap();
            assert_eq!(rank(&m), dense_rank(&m));
            assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }

    #[test]
    fn rank_ignores_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = 12;
            let mut t = Vec::new();
            for r in 0..n {
                for c in 0..n {
                    if rng.gen_bool(0.25) {
                        t.push((r, c, q(rng.gen_range(-3..4))));
                    }
                }
            }
            let m = SparseMatrix::from_triplets(n, n, t).unwrap();
            let mut rp: Vec<usize> = (0..n).collect();
            let mut cp: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                rp.swap(i, rng.gen_range(0..=i));
                cp.swap(i, rng.gen_range(0..=i));
            }
            assert_eq!(rank(&m), rank(&m.permuted(&rp, &cp)));
        }
    }
}
