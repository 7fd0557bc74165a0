//! The graph cooperad and its decorated comodule: contraction
//! differential, product, symmetric-group and Λ actions, cocomposition,
//! coaction and the internally connected factorisation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, Mode};
use crate::lincombo::LinCombo;
use crate::work::{Tok, VKind, Work};
use crate::Q;

fn require_kontsevich(g: &Graph) -> Result<()> {
    if g.mode != Mode::Kontsevich {
        return Err(Error::Mode("expected a graph with numbered externals".into()));
    }
    g.check_structure()
}

/// Sum over edges between distinct vertices, at least one internal, of the
/// contracted graph.
pub fn d_contract(g: &Graph) -> Result<LinCombo> {
    require_kontsevich(g)?;
    let mut out = LinCombo::new();
    let one = Q::one();
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        if a == b || (!g.is_internal(a) && !g.is_internal(b)) {
            continue;
        }
        let (keep, gone) = if g.is_internal(b) { (a, b) } else { (b, a) };
        let mut w = Work::from_graph(g);
        let mut toks = match g.parity {
            crate::graph::Parity::Even => vec![Tok::Edge(e)],
            crate::graph::Parity::Odd => vec![w.half_at(e, keep), w.half_at(e, gone)],
        };
        toks.extend(w.vert_toks(gone));
        w.consume(&toks);
        w.kill_edge(e);
        w.redirect(gone, keep);
        w.kill_vertex(gone);
        out.add_work(&w, &one);
    }
    Ok(out)
}

/// Linear extension of [`d_contract`].
pub fn d_contract_combo(x: &LinCombo) -> LinCombo {
    x.map(|g| d_contract(g).expect("basis graphs are valid"))
}

/// Gluing along the external vertices; orientation is `g1`'s followed by
/// `g2`'s.
pub fn graph_product(g1: &Graph, g2: &Graph) -> Result<LinCombo> {
    require_kontsevich(g1)?;
    require_kontsevich(g2)?;
    if g1.n_ext != g2.n_ext {
        return Err(Error::Arity { expected: g1.n_ext, got: g2.n_ext });
    }
    let mut w = Work::from_graph(g1);
    let map = w.union(&Work::from_graph(g2));
    for x in 0..g2.n_ext {
        w.redirect(map.voff + x, x);
        w.kill_vertex(map.voff + x);
    }
    let mut out = LinCombo::new();
    out.add_work(&w, &Q::one());
    Ok(out)
}

pub fn product_combo(x: &LinCombo, y: &LinCombo) -> LinCombo {
    let mut out = LinCombo::new();
    for (g, c) in x.iter() {
        for (h, d) in y.iter() {
            out.add_scaled(&graph_product(g, h).expect("matching arity"), &(c * d));
        }
    }
    out
}

/// Renumbers external `i` as `perm[i]` (0-based).
pub fn permute_externals(g: &Graph, perm: &[usize]) -> Result<LinCombo> {
    require_kontsevich(g)?;
    if perm.len() != g.n_ext {
        return Err(Error::Arity { expected: g.n_ext, got: perm.len() });
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::Invalid("not a permutation".into()));
        }
        seen[p] = true;
    }
    let mut w = Work::from_graph(g);
    for (x, &p) in perm.iter().enumerate() {
        w.verts[x] = VKind::Ext { num: p, label: None };
    }
    let mut out = LinCombo::new();
    out.add_work(&w, &Q::one());
    Ok(out)
}

/// Adds an isolated external vertex numbered `r + 1`.
pub fn add_external(g: &Graph) -> Result<Graph> {
    require_kontsevich(g)?;
    let shift = |v: usize| if v >= g.n_ext { v + 1 } else { v };
    Ok(Graph {
        n_ext: g.n_ext + 1,
        edges: g.edges.iter().map(|&(a, b)| (shift(a), shift(b))).collect(),
        decos: g.decos.iter().map(|&(v, s)| (shift(v), s)).collect(),
        ..g.clone()
    })
}

/// One summand `coefficient * quotient ⊗ subgraph`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocompositionTerm {
    pub quotient: Graph,
    pub subgraph: Graph,
    pub coefficient: Q,
}

/// Rational combination of tensor products of canonical graphs.
pub type TensorCombo = BTreeMap<(Graph, Graph), Q>;

pub(crate) fn add_tensor(t: &mut TensorCombo, a: Graph, b: Graph, c: Q) {
    if c.is_zero() {
        return;
    }
    *t.entry((a, b)).or_insert_with(Q::zero) += c;
}

pub(crate) fn prune(t: &mut TensorCombo) {
    t.retain(|_, c| !c.is_zero());
}

pub fn terms_to_tensor(terms: &[CocompositionTerm]) -> TensorCombo {
    let mut t = TensorCombo::new();
    for term in terms {
        add_tensor(&mut t, term.quotient.clone(), term.subgraph.clone(), term.coefficient.clone());
    }
    prune(&mut t);
    t
}

fn tensor_to_terms(t: TensorCombo) -> Vec<CocompositionTerm> {
    t.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((quotient, subgraph), coefficient)| CocompositionTerm { quotient, subgraph, coefficient })
        .collect()
}

/// Reduced cocomposition for the externals `1..=s`.
pub fn cocompose(g: &Graph, s: usize) -> Result<Vec<CocompositionTerm>> {
    require_kontsevich(g)?;
    if s == 0 || s > g.n_ext {
        return Err(Error::Invalid(format!("s = {s} out of range 1..={}", g.n_ext)));
    }
    subgraph_terms(g, s)
}

/// Comodule coaction: as [`cocompose`], with decorations of the contracted
/// subgraph multiplied onto the new external vertex and the right factor
/// undecorated.
pub fn coaction(g: &Graph, s: usize) -> Result<Vec<CocompositionTerm>> {
    cocompose(g, s)
}

fn subgraph_terms(g: &Graph, s: usize) -> Result<Vec<CocompositionTerm>> {
    let mut acc = TensorCombo::new();
    let ints: Vec<usize> = (g.n_ext..g.n_vertices()).collect();
    for mask in 0u32..(1u32 << ints.len()) {
        let mut inside = vec![false; g.n_vertices()];
        for x in 0..s {
            inside[x] = true;
        }
        for (k, &v) in ints.iter().enumerate() {
            if mask & (1 << k) != 0 {
                inside[v] = true;
            }
        }
        let candidates: Vec<usize> = g
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| inside[a] && inside[b])
            .map(|(i, _)| i)
            .collect();
        for emask in 0u32..(1u32 << candidates.len()) {
            let chosen: Vec<usize> = candidates
                .iter()
                .enumerate()
                .filter(|(k, _)| emask & (1 << k) != 0)
                .map(|(_, &e)| e)
                .collect();
            if let Some((q, sub, c)) = split_off(g, s, &inside, &chosen) {
                add_tensor(&mut acc, q, sub, c);
            }
        }
    }
    prune(&mut acc);
    Ok(tensor_to_terms(acc))
}

fn split_off(g: &Graph, s: usize, inside: &[bool], chosen: &[usize]) -> Option<(Graph, Graph, Q)> {
    // the subgraph must itself be admissible
    let mut sub = Graph::kontsevich(g.parity, s, 0);
    let mut sub_id = vec![usize::MAX; g.n_vertices()];
    for x in 0..s {
        sub_id[x] = x;
    }
    let mut k = 0;
    for v in g.n_ext..g.n_vertices() {
        if inside[v] {
            sub_id[v] = s + k;
            k += 1;
        }
    }
    sub.n_int = k;
    for &e in chosen {
        let (a, b) = g.edges[e];
        sub.edges.push((sub_id[a], sub_id[b]));
    }
    if !sub.is_admissible(crate::graph::ValencePolicy::default()) {
        return None;
    }

    let mut w = Work::from_graph(g);
    let mut gamma_toks: Vec<Tok> = Vec::new();
    for &e in chosen {
        gamma_toks.extend(w.edge_toks(e));
    }
    for v in g.n_ext..g.n_vertices() {
        if inside[v] {
            gamma_toks.extend(w.vert_toks(v));
        }
    }
    w.move_to_back(&gamma_toks);
    let split = w.tokens.len() - gamma_toks.len();

    // quotient: contract the subgraph into external 1
    let mut q = w.clone();
    q.tokens.truncate(split);
    q.sign = 1;
    for &e in chosen {
        q.kill_edge(e);
    }
    for v in 1..g.n_vertices() {
        if inside[v] {
            q.redirect(v, 0);
            q.kill_vertex(v);
        }
    }
    for x in s..g.n_ext {
        q.verts[x] = VKind::Ext { num: x - s + 1, label: None };
    }

    // subgraph factor with its own token order
    let mut gw = w.clone();
    gw.tokens = w.tokens[split..].to_vec();
    gw.sign = 1;
    let keep: Vec<bool> = (0..g.edges.len()).map(|e| chosen.contains(&e)).collect();
    for (e, k) in keep.iter().enumerate() {
        if !k {
            gw.kill_edge(e);
        }
    }
    for v in 0..g.n_vertices() {
        if !inside[v] {
            gw.kill_vertex(v);
        }
    }
    for d in 0..gw.decos.len() {
        gw.kill_deco(d);
    }

    let (qc, qs) = q.finish()?;
    let (gc, gs) = gw.finish()?;
    let sign = w.sign * qs * gs;
    Some((qc, gc, if sign < 0 { -Q::one() } else { Q::one() }))
}

/// Factors a graph into internally connected pieces: one per connected
/// component of the internal part, one per edge joining two externals and
/// one per decoration sitting on an external vertex.
pub fn ic_factorize(g: &Graph) -> Result<Vec<Graph>> {
    require_kontsevich(g)?;
    let nv = g.n_vertices();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in &g.edges {
        if g.is_internal(a) && g.is_internal(b) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in g.n_ext..nv {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let mut factors = Vec::new();
    for verts in groups.values() {
        let mut id = vec![usize::MAX; nv];
        for x in 0..g.n_ext {
            id[x] = x;
        }
        for (k, &v) in verts.iter().enumerate() {
            id[v] = g.n_ext + k;
        }
        let mut f = Graph::kontsevich(g.parity, g.n_ext, verts.len());
        for &(a, b) in &g.edges {
            if verts.contains(&a) || verts.contains(&b) {
                f.edges.push((id[a], id[b]));
            }
        }
        for &(v, s) in &g.decos {
            if verts.contains(&v) {
                f.decos.push((id[v], s));
            }
        }
        factors.push(crate::canon::canonicalize(&f)?.0);
    }
    for &(a, b) in &g.edges {
        if !g.is_internal(a) && !g.is_internal(b) {
            let f = Graph::kontsevich(g.parity, g.n_ext, 0).with_edge(a, b);
            factors.push(crate::canon::canonicalize(&f)?.0);
        }
    }
    for &(v, s) in &g.decos {
        if !g.is_internal(v) {
            factors.push(Graph::kontsevich(g.parity, g.n_ext, 0).with_deco(v, s));
        }
    }
    factors.sort();
    Ok(factors)
}

/// Applies `f ⊗ id + (-1)^{|left|} id ⊗ f` to a tensor combination.
pub fn tensor_derivation<F>(t: &TensorCombo, mut f: F) -> TensorCombo
where
    F: FnMut(&Graph) -> LinCombo,
{
    let mut out = TensorCombo::new();
    for ((a, b), c) in t {
        for (da, k) in f(a).iter() {
            add_tensor(&mut out, da.clone(), b.clone(), c * k);
        }
        let sign = if a.is_odd() { -Q::one() } else { Q::one() };
        for (db, k) in f(b).iter() {
            add_tensor(&mut out, a.clone(), db.clone(), c * k * &sign);
        }
    }
    prune(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::graph::Parity;

    fn e12(p: Parity) -> Graph {
        Graph::kontsevich(p, 2, 0).with_edge(0, 1)
    }

    #[test]
    fn contraction_figures() {
        // external i joined to an internal vertex, both carrying two more edges
        for p in [Parity::Even, Parity::Odd] {
            let g = Graph::kontsevich(p, 5, 1)
                .with_edge(0, 5)
                .with_edge(0, 1)
                .with_edge(0, 2)
                .with_edge(5, 3)
                .with_edge(5, 4);
            // the three edges at the internal vertex each contract
            let d = d_contract(&g).unwrap();
            assert_eq!(d.len(), 3);
            assert!(d.graphs().any(|h| h.n_int == 0 && h.edge_valence(0) == 4));
        }
        // two internal vertices joined by an edge
        for p in [Parity::Even, Parity::Odd] {
            let g = Graph::kontsevich(p, 4, 2)
                .with_edge(4, 5)
                .with_edge(4, 0)
                .with_edge(4, 1)
                .with_edge(5, 2)
                .with_edge(5, 3);
            let d = d_contract(&g).unwrap();
            assert_eq!(d.len(), 5);
            assert!(d.graphs().any(|h| h.n_int == 1 && h.edge_valence(4) == 4));
        }
    }

    #[test]
    fn edge_between_externals_is_closed() {
        assert!(d_contract(&e12(Parity::Even)).unwrap().is_zero());
    }

    #[test]
    fn product_with_unit_and_square() {
        for p in [Parity::Even, Parity::Odd] {
            let unit = Graph::kontsevich(p, 2, 0);
            let x = graph_product(&e12(p), &unit).unwrap();
            assert_eq!(x, LinCombo::single(&e12(p)).unwrap());
        }
        assert!(graph_product(&e12(Parity::Even), &e12(Parity::Even)).unwrap().is_zero());
        assert!(!graph_product(&e12(Parity::Odd), &e12(Parity::Odd)).unwrap().is_zero());
    }

    #[test]
    fn product_figure() {
        let p = Parity::Even;
        let g1 = Graph::kontsevich(p, 3, 2)
            .with_edge(0, 3)
            .with_edge(3, 4)
            .with_edge(3, 1)
            .with_edge(4, 1)
            .with_edge(4, 2);
        let g2 = Graph::kontsevich(p, 3, 0).with_edge(1, 2);
        let prod = graph_product(&g1, &g2).unwrap();
        let mut expect = g1.clone();
        expect.edges.push((1, 2));
        assert_eq!(prod.len(), 1);
        assert_eq!(prod.graphs().next().unwrap(), &crate::canon::canonicalize(&expect).unwrap().0);
        assert!(graph_product(&g1, &e12(p)).is_err());
    }

    #[test]
    fn swap_on_edge_graph() {
        let g = e12(Parity::Even);
        let x = permute_externals(&g, &[1, 0]).unwrap();
        assert_eq!(x, LinCombo::single(&g).unwrap());
        let id = permute_externals(&g, &[0, 1]).unwrap();
        assert_eq!(id, LinCombo::single(&g).unwrap());
        assert!(permute_externals(&g, &[0]).is_err());
    }

    #[test]
    fn adding_an_external() {
        let g = add_external(&e12(Parity::Even)).unwrap();
        assert_eq!(g.n_ext, 3);
        assert_eq!(g.edges, vec![(0, 1)]);
        let empty = add_external(&Graph::kontsevich(Parity::Odd, 1, 0)).unwrap();
        assert_eq!(empty, Graph::kontsevich(Parity::Odd, 2, 0));
    }

    #[test]
    fn cocompose_edge_graph() {
        let p = Parity::Odd;
        // the tadpole term vanishes for odd n
        let terms = cocompose(&e12(p), 2).unwrap();
        assert_eq!(terms.len(), 1);
        let even = cocompose(&e12(Parity::Even), 2).unwrap();
        assert_eq!(even.len(), 2);
        assert!(even.iter().any(|t| t.quotient.edges == vec![(0, 0)] && t.subgraph.edges.is_empty()));
        assert!(even.iter().any(|t| t.quotient.edges.is_empty() && t.subgraph.edges == vec![(0, 1)]));
        assert!(cocompose(&e12(p), 3).is_err());
    }

    #[test]
    fn coaction_figure() {
        let v = GradedAlgebra::sphere(2);
        let w = v.sym("w").unwrap();
        let p = Parity::Even;
        let g = Graph::kontsevich(p, 3, 0).with_edge(0, 1).with_edge(1, 2).with_deco(0, w).with_deco(1, w);
        let terms = coaction(&g, 2).unwrap();
        assert_eq!(terms.len(), 2);
        for t in &terms {
            assert_eq!(t.quotient.decos.len(), 2);
            assert!(t.quotient.decos.iter().all(|(x, _)| *x == 0));
            assert!(t.subgraph.decos.is_empty());
        }
    }

    #[test]
    fn factorisation_of_product() {
        let p = Parity::Even;
        let g1 = Graph::kontsevich(p, 3, 2)
            .with_edge(0, 3)
            .with_edge(3, 4)
            .with_edge(3, 1)
            .with_edge(4, 1)
            .with_edge(4, 2);
        let g2 = Graph::kontsevich(p, 3, 0).with_edge(1, 2);
        let prod = graph_product(&g1, &g2).unwrap();
        let g = prod.graphs().next().unwrap();
        let f = ic_factorize(g).unwrap();
        assert_eq!(f.len(), 2);
        let mut back = LinCombo::single(&f[0]).unwrap();
        for h in &f[1..] {
            back = product_combo(&back, &LinCombo::single(h).unwrap());
        }
        assert_eq!(back.len(), 1);
        assert_eq!(back.graphs().next().unwrap(), g);
        assert!(ic_factorize(&Graph::kontsevich(p, 2, 0)).unwrap().is_empty());
    }
}
