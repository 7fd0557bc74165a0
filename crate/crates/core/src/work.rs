//! Mutable graph with an explicit orientation token list.
//!
//! All graph operations are written against this type. New tokens are
//! prepended; consumed tokens are first moved to the front in the order
//! given by the operation and then deleted. An operation written this way
//! is automatically well defined on oriented graphs.

use crate::algebra::Sym;
use crate::canon::{canonicalize, permutation_is_odd};
use crate::graph::{Graph, Mode, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Edge(usize),
    Half(usize, u8),
    Vert(usize),
    Deco(usize),
    Label(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum VKind {
    /// External vertex; `num` orders externals in Kontsevich mode.
    Ext { num: usize, label: Option<Sym> },
    Int,
    Dead,
}

#[derive(Clone, Debug)]
pub(crate) struct Work {
    pub mode: Mode,
    pub parity: Parity,
    pub verts: Vec<VKind>,
    pub edges: Vec<Option<(usize, usize)>>,
    pub decos: Vec<Option<(usize, Sym)>>,
    pub tokens: Vec<Tok>,
    pub sign: i32,
}

impl Work {
    pub fn from_graph(g: &Graph) -> Self {
        let mut verts = Vec::with_capacity(g.n_vertices());
        for x in 0..g.n_ext {
            verts.push(VKind::Ext { num: x, label: g.hair_labels.get(x).copied() });
        }
        verts.extend(std::iter::repeat(VKind::Int).take(g.n_int));
        let mut w = Work {
            mode: g.mode,
            parity: g.parity,
            verts,
            edges: g.edges.iter().map(|&e| Some(e)).collect(),
            decos: g.decos.iter().map(|&d| Some(d)).collect(),
            tokens: Vec::new(),
            sign: 1,
        };
        let mut toks = Vec::new();
        match g.parity {
            Parity::Even => toks.extend((0..g.edges.len()).map(Tok::Edge)),
            Parity::Odd => {
                for e in 0..g.edges.len() {
                    toks.push(Tok::Half(e, 0));
                    toks.push(Tok::Half(e, 1));
                }
                toks.extend((g.n_ext..g.n_vertices()).map(Tok::Vert));
            }
        }
        for (i, (_, s)) in g.decos.iter().enumerate() {
            if s.odd {
                toks.push(Tok::Deco(i));
            }
        }
        for (x, s) in g.hair_labels.iter().enumerate() {
            if s.odd {
                toks.push(Tok::Label(x));
            }
        }
        w.tokens = toks;
        w
    }

    /// Disjoint union; tokens of `self` come first.
    pub fn union(&mut self, other: &Work) -> UnionMap {
        let voff = self.verts.len();
        let eoff = self.edges.len();
        let doff = self.decos.len();
        let ext_base = self
            .verts
            .iter()
            .filter_map(|v| match v {
                VKind::Ext { num, .. } => Some(*num + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        for v in &other.verts {
            self.verts.push(match *v {
                VKind::Ext { num, label } => VKind::Ext { num: num + ext_base, label },
                k => k,
            });
        }
        self.edges
            .extend(other.edges.iter().map(|e| e.map(|(a, b)| (a + voff, b + voff))));
        self.decos.extend(other.decos.iter().map(|d| d.map(|(v, s)| (v + voff, s))));
        for t in &other.tokens {
            self.tokens.push(match *t {
                Tok::Edge(e) => Tok::Edge(e + eoff),
                Tok::Half(e, s) => Tok::Half(e + eoff, s),
                Tok::Vert(v) => Tok::Vert(v + voff),
                Tok::Deco(d) => Tok::Deco(d + doff),
                Tok::Label(x) => Tok::Label(x + voff),
            });
        }
        self.sign *= other.sign;
        UnionMap { voff, doff }
    }

    pub fn is_ext(&self, v: usize) -> bool {
        matches!(self.verts[v], VKind::Ext { .. })
    }

    pub fn is_int(&self, v: usize) -> bool {
        matches!(self.verts[v], VKind::Int)
    }

    pub fn label(&self, v: usize) -> Option<Sym> {
        match self.verts[v] {
            VKind::Ext { label, .. } => label,
            _ => None,
        }
    }

    pub fn internal_vertices(&self) -> Vec<usize> {
        (0..self.verts.len()).filter(|&v| self.is_int(v)).collect()
    }

    pub fn ext_vertices(&self) -> Vec<usize> {
        (0..self.verts.len()).filter(|&v| self.is_ext(v)).collect()
    }

    pub fn live_edges(&self) -> impl Iterator<Item = (usize, (usize, usize))> + '_ {
        self.edges.iter().enumerate().filter_map(|(i, e)| e.map(|e| (i, e)))
    }

    pub fn live_decos(&self) -> impl Iterator<Item = (usize, (usize, Sym))> + '_ {
        self.decos.iter().enumerate().filter_map(|(i, d)| d.map(|d| (i, d)))
    }

    pub fn add_int(&mut self) -> usize {
        self.verts.push(VKind::Int);
        self.verts.len() - 1
    }

    pub fn add_ext(&mut self, num: usize, label: Option<Sym>) -> usize {
        self.verts.push(VKind::Ext { num, label });
        self.verts.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> usize {
        self.edges.push(Some((a, b)));
        self.edges.len() - 1
    }

    /// Tokens owned by an edge, in orientation order.
    pub fn edge_toks(&self, e: usize) -> Vec<Tok> {
        match self.parity {
            Parity::Even => vec![Tok::Edge(e)],
            Parity::Odd => vec![Tok::Half(e, 0), Tok::Half(e, 1)],
        }
    }

    /// The half-edge token of edge `e` at its endpoint `v` (odd parity).
    pub fn half_at(&self, e: usize, v: usize) -> Tok {
        let (a, _) = self.edges[e].expect("live edge");
        Tok::Half(e, if a == v { 0 } else { 1 })
    }

    pub fn vert_toks(&self, v: usize) -> Vec<Tok> {
        match (self.parity, self.verts[v]) {
            (Parity::Odd, VKind::Int) => vec![Tok::Vert(v)],
            _ => vec![],
        }
    }

    pub fn deco_toks(&self, d: usize) -> Vec<Tok> {
        match self.decos[d] {
            Some((_, s)) if s.odd => vec![Tok::Deco(d)],
            _ => vec![],
        }
    }

    pub fn label_toks(&self, x: usize) -> Vec<Tok> {
        match self.label(x) {
            Some(s) if s.odd => vec![Tok::Label(x)],
            _ => vec![],
        }
    }

    pub fn prepend(&mut self, toks: &[Tok]) {
        let mut t = toks.to_vec();
        t.extend_from_slice(&self.tokens);
        self.tokens = t;
    }

    /// Moves `toks` (in this order) to the front and deletes them.
    pub fn consume(&mut self, toks: &[Tok]) {
        for t in toks {
            let p = self
                .tokens
                .iter()
                .position(|x| x == t)
                .unwrap_or_else(|| panic!("token {t:?} not present"));
            if p % 2 == 1 {
                self.sign = -self.sign;
            }
            self.tokens.remove(p);
        }
    }

    /// Moves every token mentioned in `toks` to the back, keeping their
    /// relative order given by `toks`.
    pub fn move_to_back(&mut self, toks: &[Tok]) {
        let n = self.tokens.len();
        let mut rest: Vec<Tok> = Vec::with_capacity(n);
        let mut perm_src: Vec<usize> = Vec::with_capacity(n);
        for (i, t) in self.tokens.iter().enumerate() {
            if !toks.contains(t) {
                rest.push(*t);
                perm_src.push(i);
            }
        }
        for t in toks {
            if let Some(i) = self.tokens.iter().position(|x| x == t) {
                rest.push(*t);
                perm_src.push(i);
            }
        }
        if permutation_is_odd(&perm_src) {
            self.sign = -self.sign;
        }
        self.tokens = rest;
    }

    pub fn kill_edge(&mut self, e: usize) {
        self.edges[e] = None;
    }

    pub fn kill_vertex(&mut self, v: usize) {
        self.verts[v] = VKind::Dead;
    }

    pub fn kill_deco(&mut self, d: usize) {
        self.decos[d] = None;
    }

    /// Replaces endpoint `from` by `to` on every live edge and decoration.
    pub fn redirect(&mut self, from: usize, to: usize) {
        for e in self.edges.iter_mut().flatten() {
            if e.0 == from {
                e.0 = to;
            }
            if e.1 == from {
                e.1 = to;
            }
        }
        for d in self.decos.iter_mut().flatten() {
            if d.0 == from {
                d.0 = to;
            }
        }
    }

    /// Compacts into a [`Graph`] (not canonicalised); returns the graph and
    /// the sign relating the explicit token list to the graph's implicit
    /// orientation.
    pub fn to_graph(&self) -> (Graph, i32) {
        let mut exts: Vec<(usize, usize)> = self
            .verts
            .iter()
            .enumerate()
            .filter_map(|(v, k)| match k {
                VKind::Ext { num, .. } => Some((*num, v)),
                _ => None,
            })
            .collect();
        exts.sort_unstable();
        let ints: Vec<usize> = self.internal_vertices();
        let mut newid = vec![usize::MAX; self.verts.len()];
        for (i, &(_, v)) in exts.iter().enumerate() {
            newid[v] = i;
        }
        for (j, &v) in ints.iter().enumerate() {
            newid[v] = exts.len() + j;
        }
        let mut eid = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (i, (a, b)) in self.live_edges() {
            eid[i] = edges.len();
            edges.push((newid[a], newid[b]));
        }
        let mut did = vec![usize::MAX; self.decos.len()];
        let mut decos = Vec::new();
        let mut odd_rank = 0;
        for (i, (v, s)) in self.live_decos() {
            decos.push((newid[v], s));
            if s.odd {
                did[i] = odd_rank;
                odd_rank += 1;
            }
        }
        let hair_labels: Vec<Sym> = match self.mode {
            Mode::Hairy => exts
                .iter()
                .map(|&(_, v)| self.label(v).expect("hair without label"))
                .collect(),
            Mode::Kontsevich => Vec::new(),
        };
        let g = Graph {
            mode: self.mode,
            parity: self.parity,
            n_ext: exts.len(),
            n_int: ints.len(),
            edges,
            decos,
            hair_labels,
        };
        let ne = g.edges.len();
        let vbase = match self.parity {
            Parity::Even => ne,
            Parity::Odd => 2 * ne + g.n_int,
        };
        let lbase = vbase + odd_rank;
        let mut label_rank = vec![usize::MAX; g.n_ext];
        let mut r = 0;
        for x in 0..g.n_ext {
            if g.hair_labels.get(x).map_or(false, |s| s.odd) {
                label_rank[x] = r;
                r += 1;
            }
        }
        let perm: Vec<usize> = self
            .tokens
            .iter()
            .map(|t| match *t {
                Tok::Edge(e) => eid[e],
                Tok::Half(e, s) => 2 * eid[e] + s as usize,
                Tok::Vert(v) => 2 * ne + newid[v] - g.n_ext,
                Tok::Deco(d) => vbase + did[d],
                Tok::Label(x) => lbase + label_rank[newid[x]],
            })
            .collect();
        debug_assert_eq!(perm.len(), g.token_count(), "token bookkeeping out of sync");
        let sign = if permutation_is_odd(&perm) { -self.sign } else { self.sign };
        (g, sign)
    }

    /// Canonical form and total sign; `None` when the result vanishes.
    pub fn finish(&self) -> Option<(Graph, i32)> {
        let (g, s) = self.to_graph();
        let (c, t) = canonicalize(&g).expect("work graphs are structurally valid");
        if t == 0 {
            None
        } else {
            Some((c, s * t))
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct UnionMap {
    pub voff: usize,
    pub doff: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_has_sign_one() {
        let g = Graph::kontsevich(Parity::Odd, 2, 1).with_edge(0, 2).with_edge(2, 1).with_edge(1, 2);
        let w = Work::from_graph(&g);
        let (h, s) = w.to_graph();
        assert_eq!(h, g);
        assert_eq!(s, 1);
    }

    #[test]
    fn consume_tracks_position_parity() {
        let g = Graph::kontsevich(Parity::Even, 3, 0).with_edge(0, 1).with_edge(1, 2);
        let mut w = Work::from_graph(&g);
        w.consume(&[Tok::Edge(1)]);
        assert_eq!(w.sign, -1);
    }
}
