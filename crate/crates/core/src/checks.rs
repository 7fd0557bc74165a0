//! Exhaustive identity checks over finite windows.
//!
//! Every checker evaluates its inputs in parallel and collects results in
//! input order, so summaries do not depend on the thread count.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{Graph, Parity};
use crate::hairy::{twisted_d, twisted_d_combo, HairyCtx};
use crate::kontsevich::{d_contract, d_contract_combo};
use crate::linalg::enumerate::{enumerate_cell, Cell};
use crate::lincombo::LinCombo;
use crate::linf::{linf_relation_check, TruncationParams};

/// Every admissible graph of `Graphs(r)` for `1 <= r <= max_r`.
pub fn kontsevich_window(parity: Parity, max_r: usize, max_internal: usize, max_edges: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        for v in 0..=max_internal {
            for e in 0..=max_edges {
                out.extend(enumerate_cell(&Cell::kontsevich(parity, r, v, e)));
            }
        }
    }
    out
}

/// Bounds for hairy enumeration; hair edges count as edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HairyWindow {
    pub max_edges: usize,
    pub max_internal: usize,
    pub max_hairs: usize,
    pub max_decorations: usize,
}

/// Every admissible hairy graph of the window, with hair labels from
/// `ctx.hair_alg` and decorations from the reduced part of `ctx.deco_alg`.
pub fn hairy_window(ctx: &HairyCtx, w: HairyWindow) -> Vec<Graph> {
    let hs: Vec<_> = ctx.hair_alg.symbols().collect();
    let ds: Vec<_> = ctx.deco_alg.as_ref().map(|a| a.reduced_symbols().collect()).unwrap_or_default();
    let max_d = if ds.is_empty() { 0 } else { w.max_decorations };
    let mut out = Vec::new();
    for v in 0..=w.max_internal {
        for e in 0..=w.max_edges {
            for h in 0..=w.max_hairs.min(e) {
                for nd in 0..=max_d {
                    let mut c = Cell::hairy(ctx.parity(), h, v, e, hs.clone(), ds.clone(), nd);
                    c.policy = ctx.policy;
                    out.extend(enumerate_cell(&c).into_iter().filter(|g| ctx.tadpoles || !g.has_tadpole()));
                }
            }
        }
    }
    out
}

/// Inputs on which an identity failed, with the nonzero residual.
#[derive(Clone, Debug)]
pub struct Failure {
    pub input: Vec<Graph>,
    pub residual: LinCombo,
}

#[derive(Clone, Debug, Default)]
pub struct CheckSummary {
    pub checked: usize,
    /// Inputs left out because they fall outside the stated window.
    pub skipped: usize,
    pub failures: Vec<Failure>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self, what: &str) -> String {
        let mut s = format!("{what}: {} checked, {} skipped, {} failures\n", self.checked, self.skipped, self.failures.len());
        for f in self.failures.iter().take(10) {
            let args: Vec<String> = f.input.iter().map(|g| g.to_string()).collect();
            writeln!(s, "  {} -> {}", args.join(" | "), f.residual).unwrap();
        }
        s
    }

    fn from_results(results: Vec<Option<(Vec<Graph>, LinCombo)>>) -> Self {
        let mut out = CheckSummary::default();
        for r in results {
            match r {
                None => out.skipped += 1,
                Some((input, residual)) => {
                    out.checked += 1;
                    if !residual.is_zero() {
                        out.failures.push(Failure { input, residual });
                    }
                }
            }
        }
        out
    }
}

/// Squares the contraction differential on every graph.
pub fn contraction_square(graphs: &[Graph]) -> Result<CheckSummary> {
    let results: Vec<Result<_>> =
        graphs.par_iter().map(|g| Ok(Some((vec![g.clone()], d_contract_combo(&d_contract(g)?))))).collect();
    Ok(CheckSummary::from_results(results.into_iter().collect::<Result<_>>()?))
}

fn fits(x: &LinCombo, max_edges: usize, max_internal: usize) -> bool {
    x.graphs().all(|h| h.n_edges() <= max_edges && h.n_int <= max_internal)
}

/// Squares the hairy differential of `ctx` on every graph whose image and
/// second image stay within `max_edges` and `max_internal`; other graphs
/// are counted as skipped.
pub fn hairy_square(ctx: &HairyCtx, graphs: &[Graph], max_edges: usize, max_internal: usize) -> Result<CheckSummary> {
    let results: Vec<Result<_>> = graphs
        .par_iter()
        .map(|g| {
            let once = twisted_d(ctx, g)?;
            if !fits(&once, max_edges, max_internal) {
                return Ok(None);
            }
            let twice = twisted_d_combo(ctx, &once);
            if !fits(&twice, max_edges, max_internal) {
                return Ok(None);
            }
            Ok(Some((vec![g.clone()], twice)))
        })
        .collect();
    Ok(CheckSummary::from_results(results.into_iter().collect::<Result<_>>()?))
}

/// Nondecreasing index tuples of length `k` below `n`.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// The L∞ relation of the given order on every multiset of `graphs`.
/// The relation is graded symmetric in its arguments, so one ordering of
/// each multiset suffices.
pub fn linf_relations(ctx: &HairyCtx, graphs: &[Graph], order: usize, t: &TruncationParams) -> Result<CheckSummary> {
    let tuples = multisets(graphs.len(), order);
    let results: Vec<Result<_>> = tuples
        .par_iter()
        .map(|ix| {
            let args: Vec<Graph> = ix.iter().map(|&i| graphs[i].clone()).collect();
            let r = linf_relation_check(ctx, &args, t)?;
            Ok(Some((args, r)))
        })
        .collect();
    Ok(CheckSummary::from_results(results.into_iter().collect::<Result<_>>()?))
}
