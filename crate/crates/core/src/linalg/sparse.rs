//! Sparse rational matrices and their plain-text file format.
//!
//! The format is a header line `rows cols nnz` followed by one
//! `row col p/q` triplet per line, 0-indexed and sorted by (row, col).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Q;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::from_integer(1.into()));
        }
        m
    }

    /// Builds from triplets, summing duplicates and dropping zeros.
    pub fn from_triplets(rows: usize, cols: usize, t: impl IntoIterator<Item = (usize, usize, Q)>) -> Result<Self> {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in t {
            if r >= rows || c >= cols {
                return Err(Error::Invalid(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            m.add(r, c, v);
        }
        Ok(m)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add(&mut self, r: usize, c: usize, v: Q) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            m.entries.insert((c, r), v.clone());
        }
        m
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
        for (r, c, v) in other.entries() {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, k, a) in self.entries() {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add(i, j, a * b);
                }
            }
        }
        Ok(out)
    }

    /// Applies a row permutation (`perm[i]` = new index of row `i`) and a
    /// column permutation.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            m.entries.insert((row_perm[r], col_perm[c]), v.clone());
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut d = vec![vec![Q::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.entries() {
            writeln!(s, "{r} {c} {}/{}", v.numer(), v.denom()).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let nums = parse_usizes(header, hl + 1)?;
        if nums.len() != 3 {
            return Err(Error::Parse { line: hl + 1, msg: "header must be `rows cols nnz`".into() });
        }
        let (rows, cols, nnz) = (nums[0], nums[1], nums[2]);
        let mut m = Self::zeros(rows, cols);
        let mut count = 0;
        for (i, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| Error::Parse { line: i + 1, msg: msg.into() };
            if parts.len() != 3 {
                return Err(err("expected `row col p/q`"));
            }
            let r: usize = parts[0].parse().map_err(|_| err("bad row index"))?;
            let c: usize = parts[1].parse().map_err(|_| err("bad column index"))?;
            let v = parse_rational(parts[2]).ok_or_else(|| err("bad rational"))?;
            if r >= rows || c >= cols {
                return Err(err("index out of range"));
            }
            if m.entries.contains_key(&(r, c)) {
                return Err(err("duplicate entry"));
            }
            if v.is_zero() {
                return Err(err("explicit zero entry"));
            }
            m.entries.insert((r, c), v);
            count += 1;
        }
        if count != nnz {
            return Err(Error::Parse { line: hl + 1, msg: format!("header says {nnz} entries, found {count}") });
        }
        Ok(m)
    }
}

fn parse_usizes(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line, msg: format!("bad integer `{t}`") }))
        .collect()
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.parse().ok()?, q.parse().ok()?),
        None => (s.parse().ok()?, 1.into()),
    };
    let q: num_bigint::BigInt = q;
    if q.is_zero() {
        return None;
    }
    Some(Q::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Q {
        Q::new(p.into(), d.into())
    }

    #[test]
    fn text_round_trip() {
        let m = SparseMatrix::from_triplets(3, 2, vec![(0, 1, q(1, 2)), (2, 0, q(-3, 1))]).unwrap();
        let t = m.to_text();
        assert_eq!(t, "3 2 2\n0 1 1/2\n2 0 -3/1\n");
        assert_eq!(SparseMatrix::parse(&t).unwrap(), m);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let e = SparseMatrix::parse("2 2 1\n0 5 1/1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = SparseMatrix::parse("2 2 2\n0 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        assert!(SparseMatrix::parse("2 2 1\n0 0 1/0\n").is_err());
    }

    #[test]
    fn product_and_duplicates() {
        let a = SparseMatrix::from_triplets(1, 2, vec![(0, 0, q(1, 1)), (0, 0, q(1, 1)), (0, 1, q(1, 1))]).unwrap();
        assert_eq!(a.get(0, 0), q(2, 1));
        let b = a.transpose();
        assert_eq!(a.mul(&b).unwrap().get(0, 0), q(5, 1));
        assert!(a.mul(&a).is_err());
    }
}
