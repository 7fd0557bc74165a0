//! Hairy graph complexes and their twisted differential.
//!
//! Every part of the differential is written as an operation on a
//! [`Work`], which may hold a disjoint union of graphs. Acting on unions
//! is what turns the differential into the coderivation whose connected
//! components are the higher brackets (see [`crate::linf`]).
//!
//! Hairs carry labels from the source algebra `hair_alg`. Internal
//! vertices carry decorations from the reduced part of the target algebra
//! `deco_alg`. A twisting element `Z` is a combination of hairy graphs
//! whose hairs are labelled by the target algebra: a hair with a non-unit
//! label `s` pairs off against an `s`-decoration of an internal vertex
//! (removing it), and a unit-labelled hair either lands on an internal
//! vertex or survives as a hair labelled by the source unit.

use num_traits::One;

use crate::algebra::{GradedAlgebra, Sym};
use crate::error::{Error, Result};
use crate::graph::{degree, Graph, Mode, Parity, ValencePolicy};
use crate::lincombo::LinCombo;
use crate::work::{Tok, VKind, Work};
use crate::Q;

/// A twisting element together with the algebra labelling its hairs.
#[derive(Clone, Debug)]
pub struct MCElement {
    pub value: LinCombo,
    /// Degree of every member plus one.
    pub shifted_degree: i32,
    pub algebra: GradedAlgebra,
    pub n: i32,
}

impl MCElement {
    /// Checks that every member is a hairy graph over `algebra` and that
    /// all members share one degree.
    pub fn new(value: LinCombo, algebra: GradedAlgebra, n: i32) -> Result<Self> {
        let mut deg = None;
        for g in value.graphs() {
            if g.mode != Mode::Hairy {
                return Err(Error::Mode("twisting elements are hairy graphs".into()));
            }
            let d = degree(g, n, None, Some(&algebra))?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Invalid(format!("inhomogeneous element: degrees {e} and {d}")))
                }
                _ => {}
            }
        }
        Ok(MCElement { value, shifted_degree: deg.unwrap_or(0) + 1, algebra, n })
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// The line graph joining two hairs with the given labels.
pub fn line_graph(parity: Parity, a: Sym, b: Sym) -> Graph {
    Graph::hairy(parity, vec![a, b], 0).with_edge(0, 1)
}

/// `2 (w - 1)` over the cohomology of the `n`-sphere.
pub fn z_sphere(n: i32) -> MCElement {
    let alg = GradedAlgebra::sphere(n);
    let w = alg.sym("w").expect("sphere class");
    let g = line_graph(Parity::of(n), w, alg.unit_sym());
    let value = LinCombo::from_graph(&g, Q::from_integer(2.into())).expect("valid graph");
    MCElement::new(value, alg, n).expect("homogeneous")
}

/// `w1 - w2` over the cohomology of `S^d x S^d` minus a point, in `n = 2d`.
pub fn z_punctured_product(d: i32) -> MCElement {
    let alg = GradedAlgebra::punctured_sphere_product(d);
    let (w1, w2) = (alg.sym("w1").unwrap(), alg.sym("w2").unwrap());
    let g = line_graph(Parity::of(2 * d), w1, w2);
    MCElement::new(LinCombo::single(&g).expect("valid graph"), alg, 2 * d).expect("homogeneous")
}

/// Which attachments of the twisting element to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZPart {
    All,
    /// Unit hairs of `Z` all stay hairs.
    Hair,
    /// At least one unit hair of `Z` lands on an internal vertex.
    Edge,
}

/// Everything the differential depends on.
#[derive(Clone, Debug)]
pub struct HairyCtx {
    pub n: i32,
    pub hair_alg: GradedAlgebra,
    pub deco_alg: Option<GradedAlgebra>,
    pub policy: ValencePolicy,
    /// Smallest hair subset joined by the join part.
    pub join_min: usize,
    pub z: Option<MCElement>,
    /// When false, the differential acts on the quotient by graphs with a
    /// tadpole. Tadpole graphs span a subcomplex; for even `n` the line
    /// element `w - 1` is only Maurer–Cartan modulo it, because joining its
    /// two hairs leaves a tadpole.
    pub tadpoles: bool,
}

impl HairyCtx {
    pub fn new(n: i32, hair_alg: GradedAlgebra) -> Self {
        HairyCtx { n, hair_alg, deco_alg: None, policy: ValencePolicy::default(), join_min: 2, z: None, tadpoles: true }
    }

    pub fn with_decorations(mut self, alg: GradedAlgebra) -> Self {
        self.deco_alg = Some(alg);
        self
    }

    pub fn with_policy(mut self, policy: ValencePolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn without_tadpoles(mut self) -> Self {
        self.tadpoles = false;
        self
    }

    /// Twists by `z`; its hair labels must live in the decoration algebra.
    pub fn with_z(mut self, z: MCElement) -> Self {
        if self.deco_alg.is_none() {
            self.deco_alg = Some(z.algebra.clone());
        }
        self.z = Some(z);
        self
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    pub fn degree(&self, g: &Graph) -> Result<i32> {
        degree(g, self.n, self.deco_alg.as_ref(), Some(&self.hair_alg))
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if g.mode != Mode::Hairy {
            return Err(Error::Mode("expected a hairy graph".into()));
        }
        if g.parity != self.parity() {
            return Err(Error::Invalid("graph parity does not match n".into()));
        }
        g.check_structure()?;
        for s in &g.hair_labels {
            if s.id as usize >= self.hair_alg.dim() {
                return Err(Error::UnknownSymbol(format!("hair label #{}", s.id)));
            }
        }
        if !g.decos.is_empty() {
            let alg = self.deco_alg.as_ref().ok_or_else(|| Error::UnknownSymbol("no decoration algebra".into()))?;
            for (_, s) in &g.decos {
                if s.id as usize >= alg.dim() || s.id == alg.unit() {
                    return Err(Error::UnknownSymbol(format!("decoration #{}", s.id)));
                }
            }
        }
        Ok(())
    }
}

pub(crate) type Terms = Vec<(Work, Q)>;

fn new_edge_toks(w: &Work, e: usize) -> Vec<Tok> {
    w.edge_toks(e)
}

/// Vertex splitting on every internal vertex of `w`.
pub(crate) fn split_terms(ctx: &HairyCtx, w: &Work, out: &mut Terms) {
    #[derive(Clone, Copy)]
    enum Item {
        Half(usize, u8),
        Deco(usize),
    }
    for v in w.internal_vertices() {
        let mut items = Vec::new();
        for (e, (a, b)) in w.live_edges() {
            if a == v {
                items.push(Item::Half(e, 0));
            }
            if b == v {
                items.push(Item::Half(e, 1));
            }
        }
        for (d, (x, _)) in w.live_decos() {
            if x == v {
                items.push(Item::Deco(d));
            }
        }
        let m = items.len();
        if m < 2 {
            continue;
        }
        // the first item always stays, so each unordered split is seen once
        for mask in 1u32..(1u32 << (m - 1)) {
            let nb = mask.count_ones() as usize;
            let na = m - nb;
            if na + 1 < ctx.policy.min_valence || nb + 1 < ctx.policy.min_valence {
                continue;
            }
            let mut t = w.clone();
            let v2 = t.add_int();
            for (k, item) in items[1..].iter().enumerate() {
                if mask & (1 << k) == 0 {
                    continue;
                }
                match *item {
                    Item::Half(e, 0) => t.edges[e].as_mut().unwrap().0 = v2,
                    Item::Half(e, _) => t.edges[e].as_mut().unwrap().1 = v2,
                    Item::Deco(d) => t.decos[d].as_mut().unwrap().0 = v2,
                }
            }
            let e = t.add_edge(v, v2);
            let mut toks = t.vert_toks(v2);
            toks.extend(new_edge_toks(&t, e));
            t.prepend(&toks);
            out.push((t, Q::one()));
        }
    }
}

fn next_num(w: &Work) -> usize {
    w.verts
        .iter()
        .filter_map(|k| match k {
            VKind::Ext { num, .. } => Some(num + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Joins every hair subset of size at least `join_min` at a new vertex
/// carrying one new hair labelled by the product.
pub(crate) fn join_terms(ctx: &HairyCtx, w: &Work, out: &mut Terms) {
    let hairs = w.ext_vertices();
    let h = hairs.len();
    for mask in 1u64..(1u64 << h) {
        if (mask.count_ones() as usize) < ctx.join_min.max(1) {
            continue;
        }
        let chosen: Vec<usize> = (0..h).filter(|k| mask & (1 << k) != 0).map(|k| hairs[k]).collect();
        let ids: Vec<u16> = chosen.iter().map(|&x| w.label(x).expect("hair label").id).collect();
        for (t_id, c) in ctx.hair_alg.product(&ids) {
            let mut t = w.clone();
            let mut gone = Vec::new();
            for &x in &chosen {
                gone.extend(t.label_toks(x));
            }
            t.consume(&gone);
            let v = t.add_int();
            for &x in &chosen {
                t.redirect(x, v);
                t.kill_vertex(x);
            }
            let sym = ctx.hair_alg.sym_of(t_id);
            let num = next_num(&t);
            let hx = t.add_ext(num, Some(sym));
            let e = t.add_edge(hx, v);
            let mut toks = t.vert_toks(v);
            toks.extend(new_edge_toks(&t, e));
            toks.extend(t.label_toks(hx));
            t.prepend(&toks);
            out.push((t, c));
        }
    }
}

/// Applies the source algebra differential to one hair label at a time.
pub(crate) fn algebra_terms(ctx: &HairyCtx, w: &Work, out: &mut Terms) {
    if !ctx.hair_alg.has_differential() {
        return;
    }
    for x in w.ext_vertices() {
        let s = w.label(x).expect("hair label");
        for (t_id, c) in ctx.hair_alg.differential(s.id) {
            let mut t = w.clone();
            let gone = t.label_toks(x);
            t.consume(&gone);
            if let VKind::Ext { num, .. } = t.verts[x] {
                t.verts[x] = VKind::Ext { num, label: Some(ctx.hair_alg.sym_of(*t_id)) };
            }
            let new = t.label_toks(x);
            t.prepend(&new);
            out.push((t, c.clone()));
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Fate {
    Stay,
    Attach(usize),
    Pair(usize),
}

/// All ways of hooking the members of `Z` onto `w`.
pub(crate) fn z_terms(ctx: &HairyCtx, w: &Work, part: ZPart, out: &mut Terms) {
    let Some(z) = &ctx.z else { return };
    let target = &z.algebra;
    for (zg, zc) in z.value.iter() {
        let mut base = Work::from_graph(zg);
        let map = base.union(w);
        let zhairs: Vec<usize> = (0..zg.n_ext).collect();
        let targets: Vec<usize> = w.internal_vertices().into_iter().map(|v| v + map.voff).collect();
        let decos: Vec<(usize, usize, u16)> = w
            .live_decos()
            .map(|(d, (v, s))| (d + map.doff, v + map.voff, s.id))
            .collect();
        let mut fates = Vec::with_capacity(zhairs.len());
        let mut used = vec![false; decos.len()];
        enumerate_fates(
            &zhairs,
            zg,
            target,
            &targets,
            &decos,
            &mut used,
            &mut fates,
            &mut |fates: &[Fate]| {
                let attached = fates.iter().filter(|f| !matches!(f, Fate::Stay)).count();
                if attached == 0 {
                    return;
                }
                let unit_landed = fates.iter().any(|f| matches!(f, Fate::Attach(_)));
                match part {
                    ZPart::Hair if unit_landed => return,
                    ZPart::Edge if !unit_landed => return,
                    _ => {}
                }
                let mut t = base.clone();
                let mut gone = Vec::new();
                for (i, f) in fates.iter().enumerate() {
                    if let Fate::Pair(k) = f {
                        gone.extend(t.label_toks(zhairs[i]));
                        gone.extend(t.deco_toks(decos[*k].0));
                    }
                }
                t.consume(&gone);
                for (i, f) in fates.iter().enumerate() {
                    let x = zhairs[i];
                    match *f {
                        Fate::Stay => {
                            if let VKind::Ext { num, .. } = t.verts[x] {
                                t.verts[x] = VKind::Ext { num, label: Some(ctx.hair_alg.unit_sym()) };
                            }
                        }
                        Fate::Attach(u) => {
                            t.redirect(x, u);
                            t.kill_vertex(x);
                        }
                        Fate::Pair(k) => {
                            let (d, v, _) = decos[k];
                            t.kill_deco(d);
                            t.redirect(x, v);
                            t.kill_vertex(x);
                        }
                    }
                }
                out.push((t, zc.clone()));
            },
        );
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_fates(
    zhairs: &[usize],
    zg: &Graph,
    target: &GradedAlgebra,
    targets: &[usize],
    decos: &[(usize, usize, u16)],
    used: &mut [bool],
    fates: &mut Vec<Fate>,
    emit: &mut dyn FnMut(&[Fate]),
) {
    let i = fates.len();
    if i == zhairs.len() {
        emit(fates);
        return;
    }
    let label = zg.hair_labels[i];
    if label.id == target.unit() {
        fates.push(Fate::Stay);
        enumerate_fates(zhairs, zg, target, targets, decos, used, fates, emit);
        fates.pop();
        for &u in targets {
            fates.push(Fate::Attach(u));
            enumerate_fates(zhairs, zg, target, targets, decos, used, fates, emit);
            fates.pop();
        }
    } else {
        for k in 0..decos.len() {
            if used[k] || decos[k].2 != label.id {
                continue;
            }
            used[k] = true;
            fates.push(Fate::Pair(k));
            enumerate_fates(zhairs, zg, target, targets, decos, used, fates, emit);
            fates.pop();
            used[k] = false;
        }
    }
}

/// Every part of the twisted differential applied to `w`.
pub(crate) fn q_terms(ctx: &HairyCtx, w: &Work) -> Terms {
    let mut out = Vec::new();
    algebra_terms(ctx, w, &mut out);
    split_terms(ctx, w, &mut out);
    join_terms(ctx, w, &mut out);
    z_terms(ctx, w, ZPart::All, &mut out);
    out
}

fn collect(ctx: &HairyCtx, terms: Terms) -> LinCombo {
    let mut l = LinCombo::new();
    for (w, c) in terms {
        l.add_work(&w, &c);
    }
    if !ctx.tadpoles {
        l.retain(|g| !g.has_tadpole());
    }
    l
}

fn single(ctx: &HairyCtx, g: &Graph, f: impl Fn(&HairyCtx, &Work, &mut Terms)) -> Result<LinCombo> {
    ctx.check(g)?;
    if !ctx.tadpoles && g.has_tadpole() {
        return Ok(LinCombo::new());
    }
    let mut out = Vec::new();
    f(ctx, &Work::from_graph(g), &mut out);
    Ok(collect(ctx, out))
}

pub fn delta_split(ctx: &HairyCtx, g: &Graph) -> Result<LinCombo> {
    single(ctx, g, split_terms)
}

pub fn delta_join(ctx: &HairyCtx, g: &Graph) -> Result<LinCombo> {
    single(ctx, g, join_terms)
}

pub fn delta_algebra(ctx: &HairyCtx, g: &Graph) -> Result<LinCombo> {
    single(ctx, g, algebra_terms)
}

pub fn delta_z(ctx: &HairyCtx, g: &Graph) -> Result<LinCombo> {
    single(ctx, g, |c, w, o| z_terms(c, w, ZPart::All, o))
}

/// The full differential. Also accepts disjoint unions, on which it acts
/// as the coderivation assembled from all brackets.
pub fn twisted_d(ctx: &HairyCtx, g: &Graph) -> Result<LinCombo> {
    ctx.check(g)?;
    if !ctx.tadpoles && g.has_tadpole() {
        return Ok(LinCombo::new());
    }
    Ok(collect(ctx, q_terms(ctx, &Work::from_graph(g))))
}

pub fn twisted_d_combo(ctx: &HairyCtx, x: &LinCombo) -> LinCombo {
    x.map(|g| twisted_d(ctx, g).expect("valid hairy graph"))
}

/// The two pieces of the twisting term for a single-hair-pairing `Z`:
/// the part leaving a unit hair behind and the part adding an internal
/// edge.
pub fn z_parts(ctx: &HairyCtx, g: &Graph) -> Result<(LinCombo, LinCombo)> {
    let z = ctx.z.as_ref().ok_or_else(|| Error::Invalid("no twisting element".into()))?;
    for m in z.value.graphs() {
        let units = m.hair_labels.iter().filter(|s| s.id == z.algebra.unit()).count();
        if m.n_int != 0 || m.n_ext != 2 || units != 1 {
            return Err(Error::Invalid("expected a line graph with exactly one unit hair".into()));
        }
    }
    let hair = single(ctx, g, |c, w, o| z_terms(c, w, ZPart::Hair, o))?;
    let edge = single(ctx, g, |c, w, o| z_terms(c, w, ZPart::Edge, o))?;
    Ok((hair, edge))
}

/// Disjoint union; the orientation of `a` comes first.
pub fn union(a: &Graph, b: &Graph) -> LinCombo {
    let mut w = Work::from_graph(a);
    w.union(&Work::from_graph(b));
    let mut l = LinCombo::new();
    l.add_work(&w, &Q::one());
    l
}

pub fn union_combo(x: &LinCombo, y: &LinCombo) -> LinCombo {
    let mut out = LinCombo::new();
    for (g, c) in x.iter() {
        for (h, d) in y.iter() {
            out.add_scaled(&union(g, h), &(c * d));
        }
    }
    out
}

/// Algebra of labels used by [`strip_to_hairy`]: the unit and one odd
/// symbol `h` of degree `-1`, so that a hair weighs exactly what the
/// decoration it replaces weighed.
pub fn strip_algebra() -> GradedAlgebra {
    GradedAlgebra::new("strip", &[("1", 0), ("h", -1)], "1", &[], &[]).expect("static algebra")
}

/// Replaces every decoration of a hairless graph by a hair labelled `h`.
/// Each decoration token is traded for the label and half-edge tokens of
/// the new hair, in place.
pub fn strip_to_hairy(g: &Graph) -> Result<(Graph, i32)> {
    if g.mode != Mode::Hairy {
        return Err(Error::Mode("expected a hairy graph".into()));
    }
    if g.n_ext != 0 {
        return Err(Error::Invalid("input already has hairs".into()));
    }
    if g.decos.is_empty() {
        return Err(Error::Invalid("input has no decorations".into()));
    }
    let h = strip_algebra().sym("h")?;
    let mut w = Work::from_graph(g);
    let mut hairs = Vec::new();
    for (d, (v, _)) in g.decos.iter().enumerate() {
        let x = w.add_ext(d, Some(h));
        let e = w.add_edge(*v, x);
        w.kill_deco(d);
        hairs.push((d, x, e));
    }
    let mut toks = Vec::with_capacity(w.tokens.len() + 3 * hairs.len());
    for t in &w.tokens {
        match *t {
            Tok::Deco(d) => {
                let (_, x, e) = hairs[d];
                toks.push(Tok::Label(x));
                toks.extend(w.edge_toks(e));
            }
            other => toks.push(other),
        }
    }
    if g.decos.iter().any(|(_, s)| !s.odd) {
        // even decorations carry no token: append the hair tokens
        for &(d, x, e) in &hairs {
            if !g.decos[d].1.odd {
                toks.push(Tok::Label(x));
                toks.extend(w.edge_toks(e));
            }
        }
    }
    w.tokens = toks;
    w.finish().ok_or_else(|| Error::Invalid("image vanishes".into()))
}

/// Lands one `h`-labelled hair on an internal vertex, scaled by `c`.
pub fn attach_hair(g: &Graph, c: &Q) -> LinCombo {
    let w = Work::from_graph(g);
    let mut out = LinCombo::new();
    for x in w.ext_vertices() {
        for u in w.internal_vertices() {
            let mut t = w.clone();
            let gone = t.label_toks(x);
            t.consume(&gone);
            t.redirect(x, u);
            t.kill_vertex(x);
            out.add_work(&t, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3ctx() -> HairyCtx {
        HairyCtx::new(3, GradedAlgebra::sphere(3)).with_z(z_sphere(3))
    }

    #[test]
    fn join_two_hairs() {
        let ctx = HairyCtx::new(3, GradedAlgebra::sphere(3));
        let one = ctx.hair_alg.unit_sym();
        let a = ctx.hair_alg.sym("w").unwrap();
        // internal vertex with two hairs and a third edge into a triangle
        let g = Graph::hairy(Parity::Odd, vec![one, a, a], 1).with_edge(0, 3).with_edge(1, 3).with_edge(2, 3);
        let j = delta_join(&ctx, &g).unwrap();
        // {1,a} twice up to symmetry gives label a; {a,a} and the triple vanish
        assert!(j.graphs().all(|h| h.n_int == 2));
        let single = Graph::hairy(Parity::Odd, vec![a], 1).with_edge(0, 1).with_edge(1, 1);
        assert!(delta_join(&ctx, &single).unwrap().is_zero());
    }

    #[test]
    fn join_product_vanishes_for_top_classes() {
        let ctx = HairyCtx::new(2, GradedAlgebra::sphere(2));
        let a = ctx.hair_alg.sym("w").unwrap();
        let one = ctx.hair_alg.unit_sym();
        let g = Graph::hairy(Parity::Even, vec![a, a, one], 1).with_edge(0, 3).with_edge(1, 3).with_edge(2, 3);
        for (h, _) in delta_join(&ctx, &g).unwrap().iter() {
            // only subsets containing at most one w survive
            assert!(h.hair_labels.iter().filter(|s| s.id == a.id).count() <= 2);
        }
    }

    #[test]
    fn z_pieces_on_decorated_loop() {
        let ctx = s3ctx();
        let w = ctx.deco_alg.as_ref().unwrap().sym("w").unwrap();
        // two internal vertices on a double edge, one carrying w
        let g = Graph::hairy(Parity::Odd, vec![], 2).with_edge(0, 1).with_edge(0, 1).with_edge(0, 1).with_deco(0, w);
        let (hair, edge) = z_parts(&ctx, &g).unwrap();
        assert_eq!(hair.len(), 1);
        let (h, _) = hair.iter().next().unwrap();
        assert_eq!(h.n_hairs(), 1);
        assert!(h.decos.is_empty());
        // landing the unit end on the far vertex gives four parallel edges,
        // which the vertex swap kills
        assert!(edge.is_zero());
        let mut sum = hair.clone();
        sum.add(&edge);
        assert_eq!(sum, delta_z(&ctx, &g).unwrap());
        let plain = Graph::hairy(Parity::Odd, vec![], 2).with_edge(0, 1).with_edge(0, 1).with_edge(0, 1);
        assert!(z_parts(&ctx, &plain).unwrap().0.is_zero());
    }

    #[test]
    fn no_internal_vertices_means_no_split() {
        let ctx = s3ctx();
        let one = ctx.hair_alg.unit_sym();
        let g = line_graph(Parity::Odd, one, one);
        assert!(delta_split(&ctx, &g).unwrap().is_zero());
        assert!(delta_z(&ctx, &g).unwrap().is_zero());
    }

    #[test]
    fn algebra_differential_on_a_hair() {
        let ctx = HairyCtx::new(3, GradedAlgebra::koszul_pair());
        let x = ctx.hair_alg.sym("x").unwrap();
        let y = ctx.hair_alg.sym("y").unwrap();
        let g = Graph::hairy(Parity::Odd, vec![x], 2).with_edge(0, 1).with_edge(1, 2).with_edge(1, 2).with_edge(1, 2);
        let d = delta_algebra(&ctx, &g).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.graphs().next().unwrap().hair_labels, vec![y]);
        assert!(delta_algebra(&s3ctx(), &Graph::hairy(Parity::Odd, vec![], 0)).unwrap().is_zero());
    }

    #[test]
    fn twisting_elements_are_homogeneous() {
        let z = z_sphere(3);
        assert_eq!(z.shifted_degree, 0);
        let z = z_punctured_product(3);
        assert_eq!(z.shifted_degree, 0);
    }
}
