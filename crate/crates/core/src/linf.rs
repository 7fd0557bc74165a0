//! Higher brackets on hairy graphs, curvature and Maurer–Cartan checks.
//!
//! The twisted differential of [`crate::hairy`] is defined on disjoint
//! unions of graphs. On a union it acts as a coderivation of the
//! symmetric coalgebra spanned by unions, and its components are the
//! brackets: `l_k(x1, ..., xk)` is the connected part of the differential
//! applied to `x1 ∪ ... ∪ xk`. The higher Jacobi identities are then the
//! statement that the square of the differential vanishes on unions, which
//! is what [`linf_relation_check`] evaluates.
//!
//! Union signs follow the orientation tokens, so an element whose degree
//! is odd squares to zero under union.

use std::collections::BTreeMap;

use num_traits::One;

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::graph::{Graph, Mode};
use crate::hairy::{self, HairyCtx, MCElement};
use crate::lincombo::LinCombo;
use crate::Q;

/// Bounds on which graphs are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationParams {
    pub max_edges: usize,
    pub max_internal_vertices: usize,
    pub max_hairs: usize,
    pub max_total_decoration_degree: i32,
    pub max_loop_order: usize,
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams {
            max_edges: usize::MAX,
            max_internal_vertices: usize::MAX,
            max_hairs: usize::MAX,
            max_total_decoration_degree: i32::MAX,
            max_loop_order: usize::MAX,
        }
    }
}

impl TruncationParams {
    pub fn new(max_edges: usize, max_internal_vertices: usize) -> Self {
        TruncationParams { max_edges, max_internal_vertices, ..Default::default() }
    }

    pub fn with_hairs(mut self, h: usize) -> Self {
        self.max_hairs = h;
        self
    }

    pub fn with_loops(mut self, l: usize) -> Self {
        self.max_loop_order = l;
        self
    }

    pub fn with_decoration_degree(mut self, d: i32) -> Self {
        self.max_total_decoration_degree = d;
        self
    }

    pub fn contains(&self, g: &Graph, deco_alg: Option<&GradedAlgebra>) -> bool {
        if g.n_edges() > self.max_edges
            || g.n_int > self.max_internal_vertices
            || g.n_hairs() > self.max_hairs
            || g.loop_order() > self.max_loop_order
        {
            return false;
        }
        if self.max_total_decoration_degree == i32::MAX {
            return true;
        }
        let total: i32 = match deco_alg {
            Some(a) => g.decos.iter().map(|(_, s)| a.degree(s.id)).sum(),
            None => 0,
        };
        total <= self.max_total_decoration_degree
    }

    pub fn truncate(&self, x: &LinCombo, deco_alg: Option<&GradedAlgebra>) -> LinCombo {
        let mut y = x.clone();
        y.retain(|g| self.contains(g, deco_alg));
        y
    }
}

/// Disjoint union of the arguments, in order.
pub fn union_all(gs: &[Graph]) -> LinCombo {
    let Some((first, rest)) = gs.split_first() else {
        return LinCombo::new();
    };
    let mut acc = LinCombo::single(first).expect("valid graph");
    for g in rest {
        let mut next = LinCombo::new();
        for (u, c) in acc.iter() {
            next.add_scaled(&hairy::union(u, g), c);
        }
        acc = next;
    }
    acc
}

fn connected_part(mut x: LinCombo) -> LinCombo {
    x.retain(|g| g.is_connected());
    x
}

fn check_args(gs: &[Graph]) -> Result<()> {
    if gs.is_empty() {
        return Err(Error::Arity { expected: 1, got: 0 });
    }
    for g in gs {
        if g.mode != Mode::Hairy {
            return Err(Error::Mode("brackets act on hairy graphs".into()));
        }
        if !g.is_connected() {
            return Err(Error::Invalid("bracket arguments must be connected".into()));
        }
    }
    Ok(())
}

/// `l_k` for `k = gs.len()`, including the twisting contribution of `ctx.z`.
pub fn l_k(ctx: &HairyCtx, gs: &[Graph]) -> Result<LinCombo> {
    check_args(gs)?;
    Ok(connected_part(hairy::twisted_d_combo(ctx, &union_all(gs))))
}

/// The untwisted part of `l_k`: joins and, for a single argument, splits.
pub fn l_k_std(ctx: &HairyCtx, gs: &[Graph]) -> Result<LinCombo> {
    let mut plain = ctx.clone();
    plain.z = None;
    l_k(&plain, gs)
}

/// The part of `l_k` in which the twisting element takes part.
pub fn l_k_z(ctx: &HairyCtx, gs: &[Graph]) -> Result<LinCombo> {
    check_args(gs)?;
    let u = union_all(gs);
    Ok(connected_part(u.map(|g| hairy::delta_z(ctx, g).expect("valid graph"))))
}

/// All `k`-fold products of members of `x`, weighted by coefficients.
fn power(x: &LinCombo, k: usize) -> LinCombo {
    let mut acc = LinCombo::new();
    let members: Vec<(&Graph, &Q)> = x.iter().collect();
    let mut idx = vec![0usize; k];
    if members.is_empty() || k == 0 {
        return acc;
    }
    loop {
        let gs: Vec<Graph> = idx.iter().map(|&i| members[i].0.clone()).collect();
        let c = idx.iter().fold(Q::one(), |a, &i| a * members[i].1);
        acc.add_scaled(&union_all(&gs), &c);
        let mut p = 0;
        loop {
            if p == k {
                return acc;
            }
            idx[p] += 1;
            if idx[p] < members.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |a, i| a * Q::from_integer((i as i64).into()))
}

/// `sum_k l_k(x, ..., x) / k!`, keeping only terms inside `t`.
///
/// Every part of the differential adds at least one edge to a union, so
/// only powers whose inputs fit in `t` can contribute.
pub fn curvature(ctx: &HairyCtx, x: &LinCombo, t: &TruncationParams) -> LinCombo {
    let mut out = LinCombo::new();
    let min_edges = x.graphs().map(|g| g.n_edges()).min().unwrap_or(0).max(1);
    let mut k = 1;
    while k * min_edges < t.max_edges.saturating_add(1) && k <= x.len().max(1) * 8 {
        let p = power(x, k);
        if p.is_zero() && k > 1 {
            break;
        }
        let q = connected_part(hairy::twisted_d_combo(ctx, &p));
        out.add_scaled(&q, &(Q::one() / factorial(k)));
        k += 1;
    }
    t.truncate(&out, ctx.deco_alg.as_ref())
}

/// Curvature split by degree; an empty report means the element is
/// Maurer–Cartan through the window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct McReport {
    pub residual: BTreeMap<i32, LinCombo>,
}

impl McReport {
    pub fn is_empty(&self) -> bool {
        self.residual.values().all(|x| x.is_zero())
    }

    /// One line per degree: `degree <d>: <terms> terms, norm <sum |c|>`.
    pub fn lines(&self) -> Vec<String> {
        self.residual
            .iter()
            .map(|(d, x)| format!("degree {d}: {} terms, norm {}", x.len(), x.norm()))
            .collect()
    }
}

/// Checks `z` against the brackets of the complex its hairs live in,
/// which is undecorated and untwisted.
pub fn mc_check(z: &MCElement, t: &TruncationParams) -> McReport {
    let ctx = HairyCtx::new(z.n, z.algebra.clone());
    mc_check_in(&ctx, &z.value, t)
}

/// Checks an arbitrary element against the brackets of `ctx`.
pub fn mc_check_in(ctx: &HairyCtx, x: &LinCombo, t: &TruncationParams) -> McReport {
    let mut residual: BTreeMap<i32, LinCombo> = BTreeMap::new();
    for (g, c) in curvature(ctx, x, t).iter() {
        let d = ctx.degree(g).expect("degree of a generated graph");
        residual.entry(d).or_default().add_canonical(g.clone(), c.clone());
    }
    residual.retain(|_, x| !x.is_zero());
    McReport { residual }
}

/// The generalized Jacobi identity of order `xs.len()`: the connected part
/// of the differential applied twice to the union of the arguments.
pub fn linf_relation_check(ctx: &HairyCtx, xs: &[Graph], t: &TruncationParams) -> Result<LinCombo> {
    check_args(xs)?;
    let once = hairy::twisted_d_combo(ctx, &union_all(xs));
    let twice = hairy::twisted_d_combo(ctx, &once);
    Ok(t.truncate(&connected_part(twice), ctx.deco_alg.as_ref()))
}

/// The same relation expanded as `sum_I ± l(l(x_I), x_rest)` over
/// nonempty subsets `I`, with the unshuffle signs written out. Agreement
/// with [`linf_relation_check`] cross-checks the union bookkeeping.
pub fn linf_relation_by_brackets(ctx: &HairyCtx, xs: &[Graph], t: &TruncationParams) -> Result<LinCombo> {
    check_args(xs)?;
    let m = xs.len();
    let mut out = LinCombo::new();
    // inner bracket on a nonempty subset I, outer on the result plus the rest
    for mask in 1u32..(1u32 << m) {
        let inner: Vec<Graph> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| xs[i].clone()).collect();
        let rest: Vec<Graph> = (0..m).filter(|i| mask & (1 << i) == 0).map(|i| xs[i].clone()).collect();
        let sign = unshuffle_sign(xs, mask);
        if sign == 0 {
            continue;
        }
        let b = l_k(ctx, &inner)?;
        for (g, c) in b.iter() {
            let mut args = vec![g.clone()];
            args.extend(rest.iter().cloned());
            let outer = l_k(ctx, &args)?;
            out.add_scaled(&outer, &(c * Q::from_integer(sign.into())));
        }
    }
    Ok(t.truncate(&out, ctx.deco_alg.as_ref()))
}

/// Sign of moving the arguments selected by `mask` to the front, keeping
/// relative order, with parities taken from orientation tokens.
fn unshuffle_sign(xs: &[Graph], mask: u32) -> i64 {
    let mut sign = 1i64;
    let mut passed_odd = 0usize;
    for (i, g) in xs.iter().enumerate() {
        let odd = g.is_odd();
        if mask & (1 << i) != 0 {
            if odd && passed_odd % 2 == 1 {
                sign = -sign;
            }
        } else if odd {
            passed_odd += 1;
        }
    }
    sign
}

/// Graded symmetry defect of `l_2`: `l_2(a, b) - (-1)^{|a||b|} l_2(b, a)`.
pub fn l2_symmetry_defect(ctx: &HairyCtx, a: &Graph, b: &Graph) -> Result<LinCombo> {
    let ab = l_k(ctx, &[a.clone(), b.clone()])?;
    let ba = l_k(ctx, &[b.clone(), a.clone()])?;
    let s = if a.is_odd() && b.is_odd() { -Q::one() } else { Q::one() };
    Ok(ab.sub(&ba.scaled(&s)))
}

/// Returns `true` when every term of `x` has at least `min` edges.
pub fn all_terms_have_edges(x: &LinCombo, min: usize) -> bool {
    x.graphs().all(|g| g.n_edges() >= min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Parity;

    fn s3() -> HairyCtx {
        HairyCtx::new(3, GradedAlgebra::sphere(3))
    }

    fn corolla(ctx: &HairyCtx, labels: &[&str]) -> Graph {
        let syms: Vec<_> = labels.iter().map(|l| ctx.hair_alg.sym(l).unwrap()).collect();
        let h = syms.len();
        let mut g = Graph::hairy(ctx.parity(), syms, 1);
        for i in 0..h {
            g = g.with_edge(i, h);
        }
        g
    }

    #[test]
    fn union_of_odd_element_with_itself_vanishes() {
        let z = hairy::z_sphere(3);
        assert!(power(&z.value, 2).is_zero());
    }

    #[test]
    fn bracket_of_two_corollas() {
        let ctx = s3();
        let a = corolla(&ctx, &["1", "1", "w"]);
        let b = corolla(&ctx, &["1", "1", "1"]);
        let l = l_k(&ctx, &[a.clone(), b.clone()]).unwrap();
        assert!(!l.is_zero());
        for g in l.graphs() {
            assert_eq!(g.n_int, 3);
            assert_eq!(g.n_edges(), a.n_edges() + b.n_edges() + 1);
        }
    }

    #[test]
    fn hairless_argument_kills_untwisted_brackets() {
        let ctx = s3();
        let a = corolla(&ctx, &["1", "1", "w"]);
        let theta = Graph::hairy(Parity::Odd, vec![], 2).with_edge(0, 1).with_edge(0, 1).with_edge(0, 1);
        assert!(l_k(&ctx, &[a, theta]).unwrap().is_zero());
    }

    #[test]
    fn zero_element_has_empty_report() {
        let ctx = s3();
        let r = mc_check_in(&ctx, &LinCombo::new(), &TruncationParams::new(4, 3));
        assert!(r.is_empty());
        assert!(r.lines().is_empty());
    }

    #[test]
    fn truncation_drops_large_terms() {
        let ctx = s3();
        let g = corolla(&ctx, &["1", "1", "1", "1"]);
        let x = LinCombo::single(&g).unwrap();
        assert!(TruncationParams::new(3, 3).truncate(&x, None).is_zero());
        assert_eq!(TruncationParams::new(4, 1).truncate(&x, None), x);
        assert!(TruncationParams::new(4, 1).with_hairs(3).truncate(&x, None).is_zero());
    }
}
