//! Cohomology of finite windows of graded complexes.
//!
//! A window is described by a [`Window`]: the complex splits into
//! sectors preserved by the differential, and each sector into finite
//! slices indexed by degree. Only slices inside the truncation are part
//! of the window. A degree is trusted when, for every sector with a slice
//! in that degree, both neighbouring slices of the same sector are inside
//! the window too, or are probed and found empty. Untrusted numbers may
//! be artifacts of cutting the complex off.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::rank::{dense_rank, rank};
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::graph::{Graph, Parity, ValencePolicy};
use crate::kontsevich::d_contract;
use crate::linalg::enumerate::{enumerate_cell, Cell};
use crate::lincombo::LinCombo;
use crate::Q;

/// A graded complex split into finite sector slices.
pub trait Window: Sync {
    /// Sectors to examine.
    fn sectors(&self) -> Vec<i64>;
    /// Degrees at which `sector` may be nonzero, in any order.
    fn degrees(&self, sector: i64) -> Vec<i32>;
    fn in_window(&self, sector: i64, degree: i32) -> bool;
    /// The full slice, sorted; also called to probe slices outside the window.
    fn basis(&self, sector: i64, degree: i32) -> Vec<Graph>;
    fn d(&self, g: &Graph) -> LinCombo;
    /// Degree change of the differential, `+1` or `-1`.
    fn step(&self) -> i32;
}

/// One basis slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexSlice {
    pub sector: i64,
    pub degree: i32,
    pub basis: Vec<Graph>,
    pub closed_under_d: bool,
}

/// Column `j` holds the coordinates of `d(src[j])` in `dst`.
pub fn boundary_matrix(src: &[Graph], dst: &[Graph], d: impl Fn(&Graph) -> LinCombo + Sync) -> Result<SparseMatrix> {
    let index: BTreeMap<&Graph, usize> = dst.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let cols: Vec<Result<Vec<(usize, usize, Q)>>> = src
        .par_iter()
        .enumerate()
        .map(|(j, g)| {
            let mut out = Vec::new();
            for (h, c) in d(g).iter() {
                let &i = index
                    .get(h)
                    .ok_or_else(|| Error::Closure(format!("{h} (image of {g}) is missing from the target slice")))?;
                out.push((i, j, c.clone()));
            }
            Ok(out)
        })
        .collect();
    let mut triplets = Vec::new();
    for c in cols {
        triplets.extend(c?);
    }
    SparseMatrix::from_triplets(dst.len(), src.len(), triplets)
}

/// Dimension and trust flag of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeEntry {
    pub dim: usize,
    pub trusted: bool,
    /// `(sector, dim, trusted)` for every contributing sector.
    pub sectors: Vec<(i64, usize, bool)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CohomologyTable {
    pub degrees: BTreeMap<i32, DegreeEntry>,
}

impl CohomologyTable {
    pub fn dim(&self, degree: i32) -> Option<usize> {
        self.degrees.get(&degree).map(|e| e.dim)
    }

    pub fn trusted_dim(&self, degree: i32) -> Option<usize> {
        self.degrees.get(&degree).filter(|e| e.trusted).map(|e| e.dim)
    }

    /// Plain-text table, one line per degree.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (d, e) in &self.degrees {
            let flag = if e.trusted { "trusted" } else { "untrusted" };
            s.push_str(&format!("degree {d}: dim {} ({flag})\n", e.dim));
        }
        s
    }
}

/// Which rank routine to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RankMethod {
    #[default]
    Sparse,
    Dense,
}

fn rank_with(m: &SparseMatrix, method: RankMethod) -> usize {
    match method {
        RankMethod::Sparse => rank(m),
        RankMethod::Dense => dense_rank(m),
    }
}

/// Computes the cohomology of the window.
pub fn cohomology(w: &dyn Window, method: RankMethod) -> Result<CohomologyTable> {
    let mut table = CohomologyTable::default();
    let step = w.step();
    for s in w.sectors() {
        let mut degs: Vec<i32> = w.degrees(s).into_iter().filter(|&k| w.in_window(s, k)).collect();
        degs.sort_unstable();
        degs.dedup();
        if degs.is_empty() {
            continue;
        }
        let mut slices: BTreeMap<i32, Vec<Graph>> = BTreeMap::new();
        let mut probed_empty: BTreeMap<i32, bool> = BTreeMap::new();
        let possible: Vec<i32> = w.degrees(s);
        for &k in &degs {
            slices.insert(k, w.basis(s, k));
        }
        for &k in &degs {
            for nb in [k - step, k + step] {
                if slices.contains_key(&nb) || probed_empty.contains_key(&nb) {
                    continue;
                }
                let empty = !possible.contains(&nb) || w.basis(s, nb).is_empty();
                probed_empty.insert(nb, empty);
            }
        }
        let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
        for &k in &degs {
            if let Some(dst) = slices.get(&(k + step)) {
                let m = boundary_matrix(&slices[&k], dst, |g| w.d(g))?;
                ranks.insert(k, rank_with(&m, method));
            } else if probed_empty.get(&(k + step)) == Some(&true) {
                ranks.insert(k, 0);
            }
        }
        for &k in &degs {
            let out = ranks.get(&k).copied();
            let inc = if slices.contains_key(&(k - step)) {
                ranks.get(&(k - step)).copied()
            } else if probed_empty.get(&(k - step)) == Some(&true) {
                Some(0)
            } else {
                None
            };
            let trusted = out.is_some() && inc.is_some();
            let dim = slices[&k].len() - out.unwrap_or(0) - inc.unwrap_or(0);
            let e = table.degrees.entry(k).or_insert(DegreeEntry { dim: 0, trusted: true, sectors: vec![] });
            e.dim += dim;
            e.trusted &= trusted;
            e.sectors.push((s, dim, trusted));
        }
    }
    Ok(table)
}

/// All slices of the window with their closure flags.
pub fn slices(w: &dyn Window) -> Vec<ComplexSlice> {
    let mut out = Vec::new();
    for s in w.sectors() {
        let mut degs: Vec<i32> = w.degrees(s).into_iter().filter(|&k| w.in_window(s, k)).collect();
        degs.sort_unstable();
        degs.dedup();
        for k in degs {
            let closed = w.in_window(s, k + w.step());
            out.push(ComplexSlice { sector: s, degree: k, basis: w.basis(s, k), closed_under_d: closed });
        }
    }
    out
}

/// `Graphs_n(r)` with the contraction differential, truncated by the
/// number of internal vertices and edges. The sector of a graph is
/// `edges - internal vertices`; within sector `s` the degree is
/// `(n - 1) s - V` and admissibility forces `V <= 2 s`.
#[derive(Clone, Debug)]
pub struct KontsevichWindow {
    pub n: i32,
    pub r: usize,
    pub max_internal: usize,
    pub max_edges: usize,
    pub policy: ValencePolicy,
}

impl KontsevichWindow {
    pub fn new(n: i32, r: usize, max_internal: usize, max_edges: usize) -> Self {
        KontsevichWindow { n, r, max_internal, max_edges, policy: ValencePolicy::default() }
    }

    fn vertices(&self, s: i64, degree: i32) -> Option<(usize, usize)> {
        let v = (self.n as i64 - 1) * s - degree as i64;
        if v < 0 || v > 2 * s {
            return None;
        }
        Some((v as usize, (s + v) as usize))
    }
}

impl Window for KontsevichWindow {
    fn sectors(&self) -> Vec<i64> {
        (0..=self.max_edges as i64).collect()
    }

    fn degrees(&self, s: i64) -> Vec<i32> {
        (0..=2 * s).map(|v| ((self.n as i64 - 1) * s - v) as i32).collect()
    }

    fn in_window(&self, s: i64, degree: i32) -> bool {
        match self.vertices(s, degree) {
            Some((v, e)) => v <= self.max_internal && e <= self.max_edges,
            None => false,
        }
    }

    fn basis(&self, s: i64, degree: i32) -> Vec<Graph> {
        match self.vertices(s, degree) {
            Some((v, e)) => {
                let mut c = Cell::kontsevich(Parity::of(self.n), self.r, v, e);
                c.policy = self.policy;
                enumerate_cell(&c)
            }
            None => Vec::new(),
        }
    }

    fn d(&self, g: &Graph) -> LinCombo {
        d_contract(g).expect("kontsevich graph")
    }

    fn step(&self) -> i32 {
        1
    }
}

/// A window with the zero differential over an explicit graded basis.
pub struct ZeroWindow {
    pub slices: BTreeMap<i32, Vec<Graph>>,
}

impl Window for ZeroWindow {
    fn sectors(&self) -> Vec<i64> {
        vec![0]
    }
    fn degrees(&self, _: i64) -> Vec<i32> {
        self.slices.keys().copied().collect()
    }
    fn in_window(&self, _: i64, degree: i32) -> bool {
        self.slices.contains_key(&degree)
    }
    fn basis(&self, _: i64, degree: i32) -> Vec<Graph> {
        self.slices.get(&degree).cloned().unwrap_or_default()
    }
    fn d(&self, _: &Graph) -> LinCombo {
        LinCombo::new()
    }
    fn step(&self) -> i32 {
        1
    }
}

/// Every canonical basis graph of `Graphs_n(r)` of the given degree
/// inside the bounds, sorted.
pub fn enumerate_basis(n: i32, r: usize, degree: i32, max_internal: usize, max_edges: usize) -> Vec<Graph> {
    let w = KontsevichWindow::new(n, r, max_internal, max_edges);
    let mut out: Vec<Graph> = w
        .sectors()
        .into_iter()
        .filter(|&s| w.in_window(s, degree))
        .flat_map(|s| w.basis(s, degree))
        .collect();
    out.sort();
    out
}

/// Checks `d ∘ d = 0` as a product of boundary matrices on consecutive
/// closed slices; returns the number of products checked.
pub fn composite_boundaries_vanish(w: &dyn Window) -> Result<usize> {
    let step = w.step();
    let mut checked = 0;
    for s in w.sectors() {
        for k in w.degrees(s) {
            if !(w.in_window(s, k) && w.in_window(s, k + step) && w.in_window(s, k + 2 * step)) {
                continue;
            }
            let (a, b, c) = (w.basis(s, k), w.basis(s, k + step), w.basis(s, k + 2 * step));
            let d1 = boundary_matrix(&a, &b, |g| w.d(g))?;
            let d2 = boundary_matrix(&b, &c, |g| w.d(g))?;
            if !d2.mul(&d1)?.is_zero() {
                return Err(Error::Invalid(format!("d∘d is nonzero in sector {s}, degree {k}")));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Classical Poincaré polynomial coefficients of the configuration space
/// of `r` points in `R^n`: `prod_{j<r} (1 + j t^{n-1})`.
pub fn configuration_space_betti(n: i32, r: usize) -> BTreeMap<i32, u64> {
    let mut poly: BTreeMap<i32, u64> = BTreeMap::from([(0, 1)]);
    for j in 1..r as u64 {
        let mut next = BTreeMap::new();
        for (&d, &c) in &poly {
            *next.entry(d).or_insert(0) += c;
            *next.entry(d + n - 1).or_insert(0) += c * j;
        }
        poly = next;
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betti_oracle() {
        assert_eq!(configuration_space_betti(3, 2), BTreeMap::from([(0, 1), (2, 1)]));
        assert_eq!(configuration_space_betti(3, 3), BTreeMap::from([(0, 1), (2, 3), (4, 2)]));
    }

    #[test]
    fn degree_zero_of_two_points() {
        let b = enumerate_basis(3, 2, 0, 3, 6);
        assert_eq!(b, vec![Graph::kontsevich(Parity::Odd, 2, 0)]);
        let b2 = enumerate_basis(3, 2, 2, 3, 6);
        assert!(b2.contains(&Graph::kontsevich(Parity::Odd, 2, 0).with_edge(0, 1)));
        assert!(enumerate_basis(3, 2, -1, 3, 6).is_empty());
    }

    #[test]
    fn zero_differential_gives_slice_sizes() {
        let g = Graph::kontsevich(Parity::Odd, 2, 0);
        let w = ZeroWindow { slices: BTreeMap::from([(0, vec![g.clone()]), (2, vec![g.clone().with_edge(0, 1)])]) };
        let t = cohomology(&w, RankMethod::Sparse).unwrap();
        assert_eq!(t.dim(0), Some(1));
        assert_eq!(t.dim(2), Some(1));
        assert!(boundary_matrix(&[g.clone()], &[g], |_| LinCombo::new()).unwrap().is_zero());
    }

    #[test]
    fn two_points_in_three_space() {
        let t = cohomology(&KontsevichWindow::new(3, 2, 3, 6), RankMethod::Sparse).unwrap();
        assert_eq!(t.trusted_dim(0), Some(1));
        assert_eq!(t.trusted_dim(1), Some(0));
        assert_eq!(t.trusted_dim(2), Some(1));
    }
}
