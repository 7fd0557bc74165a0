//! Exhaustive enumeration of canonical graphs in a single cell
//! `(externals, internal vertices, edges, decorations)`.
//!
//! Graphs are grown one edge at a time from edgeless seeds. Every level is
//! deduplicated by canonical form, so each isomorphism class is visited
//! once. Levels are expanded in parallel and merged into ordered sets,
//! which keeps the output independent of the thread count.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::algebra::Sym;
use crate::canon::{canonicalize, has_intrinsic_symmetry};
use crate::graph::{Graph, Mode, Parity, ValencePolicy};

/// One enumeration cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub mode: Mode,
    pub parity: Parity,
    /// Numbered externals (kontsevich) or hairs (hairy).
    pub n_ext: usize,
    pub n_int: usize,
    pub n_edges: usize,
    /// Decoration symbols available, and how many decorations to place.
    pub deco_syms: Vec<Sym>,
    pub n_decos: usize,
    /// Hair labels available (hairy mode only).
    pub hair_syms: Vec<Sym>,
    pub policy: ValencePolicy,
}

impl Cell {
    pub fn kontsevich(parity: Parity, r: usize, n_int: usize, n_edges: usize) -> Self {
        Cell {
            mode: Mode::Kontsevich,
            parity,
            n_ext: r,
            n_int,
            n_edges,
            deco_syms: Vec::new(),
            n_decos: 0,
            hair_syms: Vec::new(),
            policy: ValencePolicy::default(),
        }
    }

    /// Hairy cell; `n_edges` counts hair edges too.
    pub fn hairy(
        parity: Parity,
        hairs: usize,
        n_int: usize,
        n_edges: usize,
        hair_syms: Vec<Sym>,
        deco_syms: Vec<Sym>,
        n_decos: usize,
    ) -> Self {
        Cell {
            mode: Mode::Hairy,
            parity,
            n_ext: hairs,
            n_int,
            n_edges,
            deco_syms,
            n_decos,
            hair_syms,
            policy: ValencePolicy::default(),
        }
    }
}

/// Every admissible, sign-nonzero canonical graph in the cell, sorted.
pub fn enumerate_cell(cell: &Cell) -> Vec<Graph> {
    let mut level: BTreeSet<Graph> = seeds(cell).into_iter().filter(|g| viable(cell, g, cell.n_edges)).collect();
    for k in 0..cell.n_edges {
        let remaining = cell.n_edges - k - 1;
        let items: Vec<&Graph> = level.iter().collect();
        let children: Vec<Vec<Graph>> = items.par_iter().map(|g| extend(cell, g, remaining)).collect();
        level = children.into_iter().flatten().collect();
    }
    level
        .into_iter()
        .filter(|g| g.is_admissible(cell.policy))
        .filter(|g| canonicalize(g).map(|(_, s)| s != 0).unwrap_or(false))
        .collect()
}

fn seeds(cell: &Cell) -> Vec<Graph> {
    let base = match cell.mode {
        Mode::Kontsevich => vec![Graph::kontsevich(cell.parity, cell.n_ext, cell.n_int)],
        Mode::Hairy => multisets(&cell.hair_syms, cell.n_ext)
            .into_iter()
            .map(|labels| Graph::hairy(cell.parity, labels, cell.n_int))
            .collect(),
    };
    if cell.n_decos == 0 {
        return base;
    }
    let n_vert = cell.n_ext + cell.n_int;
    let sites: Vec<usize> = match cell.mode {
        Mode::Kontsevich => (0..n_vert).collect(),
        Mode::Hairy => (cell.n_ext..n_vert).collect(),
    };
    let slots: Vec<(usize, Sym)> = sites
        .iter()
        .flat_map(|&v| cell.deco_syms.iter().map(move |&s| (v, s)))
        .collect();
    let mut out = BTreeSet::new();
    for g in &base {
        for choice in multisets(&slots, cell.n_decos) {
            let mut h = g.clone();
            h.decos = choice;
            if has_intrinsic_symmetry(&h) {
                continue;
            }
            if let Ok((c, _)) = canonicalize(&h) {
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

/// All size-`k` multisets drawn from `items`, as sorted vectors.
pub(crate) fn multisets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Lower bound on the edges still needed to satisfy the valence policy
/// and, in hairy mode, to give every hair its edge.
fn viable(cell: &Cell, g: &Graph, remaining: usize) -> bool {
    let mut deficit = 0;
    for v in g.n_ext..g.n_vertices() {
        deficit += cell.policy.min_valence.saturating_sub(g.valence(v));
    }
    if cell.mode == Mode::Hairy {
        for x in 0..g.n_ext {
            deficit += 1usize.saturating_sub(g.edge_valence(x));
        }
    }
    deficit <= 2 * remaining
}

fn extend(cell: &Cell, g: &Graph, remaining: usize) -> Vec<Graph> {
    let nv = g.n_vertices();
    let mut out = Vec::new();
    for a in 0..nv {
        for b in a..nv {
            if cell.mode == Mode::Hairy {
                let ext_a = a < g.n_ext;
                let ext_b = b < g.n_ext;
                if (ext_a && g.edge_valence(a) > 0) || (ext_b && g.edge_valence(b) > 0) {
                    continue;
                }
                if ext_a && ext_b && (a == b || g.n_int > 0 || g.n_ext != 2) {
                    continue;
                }
            }
            let h = g.clone().with_edge(a, b);
            if has_intrinsic_symmetry(&h) || !viable(cell, &h, remaining) {
                continue;
            }
            if let Ok((c, _)) = canonicalize(&h) {
                out.push(c);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_two_graph() {
        let c = Cell::kontsevich(Parity::Odd, 2, 0, 0);
        assert_eq!(enumerate_cell(&c), vec![Graph::kontsevich(Parity::Odd, 2, 0)]);
    }

    #[test]
    fn single_edge_cells() {
        // odd: only e(1,2); even: e(1,2) and the two tadpoles
        assert_eq!(enumerate_cell(&Cell::kontsevich(Parity::Odd, 2, 0, 1)).len(), 1);
        assert_eq!(enumerate_cell(&Cell::kontsevich(Parity::Even, 2, 0, 1)).len(), 3);
    }

    #[test]
    fn tripod() {
        let c = Cell::kontsevich(Parity::Odd, 3, 1, 3);
        let gs = enumerate_cell(&c);
        assert!(gs.iter().any(|g| (0..3).all(|x| g.edge_valence(x) == 1)));
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(&[1, 2, 3], 2).len(), 6);
        assert_eq!(multisets::<u8>(&[], 0).len(), 1);
    }
}
