//! Reduction of tree spaces by the relations coming from splitting a
//! single four-valent vertex.

use std::collections::BTreeSet;

use super::cohomology::boundary_matrix;
use super::enumerate::{enumerate_cell, Cell};
use super::rank::rank;
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::graph::{Graph, Mode};
use crate::hairy::{delta_split, HairyCtx};
use crate::Q;

#[derive(Clone, Debug)]
pub struct IhxReduction {
    /// Graphs of the slice that stay independent modulo the relators,
    /// chosen greedily in slice order.
    pub survivors: Vec<Graph>,
    /// Trees with one four-valent vertex whose splittings are the relators.
    pub predecessors: Vec<Graph>,
    /// Column `j` is the relator of `predecessors[j]` in slice coordinates.
    pub relators: SparseMatrix,
}

/// Hair and decoration labels of a graph as sorted lists.
fn signature(g: &Graph) -> (Vec<u16>, Vec<u16>) {
    let mut h: Vec<u16> = g.hair_labels.iter().map(|s| s.id).collect();
    let mut d: Vec<u16> = g.decos.iter().map(|(_, s)| s.id).collect();
    h.sort_unstable();
    d.sort_unstable();
    (h, d)
}

fn is_tree(g: &Graph) -> bool {
    g.is_connected() && g.loop_order() == 0
}

fn one_four_valent(g: &Graph) -> bool {
    let vals: Vec<usize> = (g.n_ext..g.n_vertices()).map(|v| g.valence(v)).collect();
    vals.iter().filter(|&&x| x == 4).count() == 1 && vals.iter().all(|&x| x == 3 || x == 4)
}

/// Quotients the span of `slice` by the splitting images of trees with
/// one edge fewer and exactly one four-valent vertex. Predecessors are
/// restricted to the hair and decoration labels occurring in the slice,
/// so their images stay inside it.
pub fn ihx_reduce(ctx: &HairyCtx, slice: &[Graph]) -> Result<IhxReduction> {
    for g in slice {
        if g.mode != Mode::Hairy || !is_tree(g) {
            return Err(Error::Invalid(format!("{g} is not a hairy tree")));
        }
    }
    let mut sorted = slice.to_vec();
    sorted.sort();
    sorted.dedup();
    let hair_syms: Vec<_> = ctx.hair_alg.symbols().collect();
    let deco_syms: Vec<_> = ctx.deco_alg.as_ref().map(|a| a.reduced_symbols().collect()).unwrap_or_default();
    let shapes: BTreeSet<(usize, usize, usize, usize)> =
        sorted.iter().filter(|g| g.n_int >= 2).map(|g| (g.n_ext, g.n_int - 1, g.n_edges() - 1, g.decos.len())).collect();
    let signatures: BTreeSet<_> = sorted.iter().map(signature).collect();
    let mut preds = Vec::new();
    for (h, v, e, nd) in shapes {
        let mut cell = Cell::hairy(ctx.parity(), h, v, e, hair_syms.clone(), deco_syms.clone(), nd);
        cell.policy = ctx.policy;
        preds.extend(enumerate_cell(&cell).into_iter().filter(|g| is_tree(g) && one_four_valent(g) && signatures.contains(&signature(g))));
    }
    preds.sort();
    let relators = boundary_matrix(&preds, &sorted, |g| delta_split(ctx, g).expect("hairy tree"))?;
    let mut survivors = Vec::new();
    let mut current = relators.clone();
    let mut r = rank(&current);
    for (i, g) in sorted.iter().enumerate() {
        let mut trial = SparseMatrix::zeros(current.rows, current.cols + 1);
        for (a, b, c) in current.entries() {
            trial.set(a, b, c.clone());
        }
        trial.set(i, current.cols, Q::from_integer(1.into()));
        let r2 = rank(&trial);
        if r2 > r {
            survivors.push(g.clone());
            current = trial;
            r = r2;
        }
    }
    Ok(IhxReduction { survivors, predecessors: preds, relators })
}
