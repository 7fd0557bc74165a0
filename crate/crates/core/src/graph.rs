//! Decorated graphs with orientation data.
//!
//! A [`Graph`] stores vertices as `0..n_ext` (external) followed by
//! `n_ext..n_ext + n_int` (internal). Its orientation is implicit in the
//! field order: the odd "tokens" of a graph are listed as
//!
//! * even parity: one token per edge, in edge order;
//! * odd parity: two tokens per edge (source half, target half), then one
//!   token per internal vertex;
//!
//! followed by every odd decoration in `decos` order and every odd hair
//! label in external-vertex order. Reordering tokens by an odd permutation
//! negates the graph.

use std::fmt;

use crate::algebra::{GradedAlgebra, Sym};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Numbered external vertices of arbitrary valence.
    Kontsevich,
    /// Unordered external vertices of valence one (hairs).
    Hairy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i32) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Minimum valence of internal vertices; decorations count one each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ValencePolicy {
    pub min_valence: usize,
}

impl Default for ValencePolicy {
    fn default() -> Self {
        ValencePolicy { min_valence: 3 }
    }
}

impl ValencePolicy {
    pub fn new(min_valence: usize) -> Self {
        ValencePolicy { min_valence }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    pub mode: Mode,
    pub parity: Parity,
    pub n_ext: usize,
    pub n_int: usize,
    /// Directed in odd parity (source half-edge first); tadpoles allowed.
    pub edges: Vec<(usize, usize)>,
    /// Decorations as `(vertex, symbol)` of the decoration algebra.
    pub decos: Vec<(usize, Sym)>,
    /// One label per external vertex in hairy mode, empty otherwise.
    pub hair_labels: Vec<Sym>,
}

impl Graph {
    pub fn kontsevich(parity: Parity, n_ext: usize, n_int: usize) -> Self {
        Graph {
            mode: Mode::Kontsevich,
            parity,
            n_ext,
            n_int,
            edges: Vec::new(),
            decos: Vec::new(),
            hair_labels: Vec::new(),
        }
    }

    /// A hairy graph with the given hair labels and no edges yet.
    pub fn hairy(parity: Parity, hair_labels: Vec<Sym>, n_int: usize) -> Self {
        Graph {
            mode: Mode::Hairy,
            parity,
            n_ext: hair_labels.len(),
            n_int,
            edges: Vec::new(),
            decos: Vec::new(),
            hair_labels,
        }
    }

    pub fn with_edge(mut self, a: usize, b: usize) -> Self {
        self.edges.push((a, b));
        self
    }

    pub fn with_deco(mut self, v: usize, s: Sym) -> Self {
        self.decos.push((v, s));
        self
    }

    /// Vertex id of the `j`-th internal vertex.
    pub fn int(&self, j: usize) -> usize {
        self.n_ext + j
    }

    pub fn n_vertices(&self) -> usize {
        self.n_ext + self.n_int
    }

    pub fn is_internal(&self, v: usize) -> bool {
        v >= self.n_ext
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_hairs(&self) -> usize {
        match self.mode {
            Mode::Hairy => self.n_ext,
            Mode::Kontsevich => 0,
        }
    }

    /// Edges with both endpoints internal.
    pub fn n_internal_edges(&self) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| self.is_internal(*a) && self.is_internal(*b))
            .count()
    }

    pub fn check_structure(&self) -> Result<()> {
        let nv = self.n_vertices();
        for &(a, b) in &self.edges {
            if a >= nv || b >= nv {
                return Err(Error::Structure(format!("edge ({a},{b}) out of range")));
            }
        }
        for &(v, _) in &self.decos {
            if v >= nv {
                return Err(Error::Structure(format!("decoration on missing vertex {v}")));
            }
        }
        match self.mode {
            Mode::Hairy if self.hair_labels.len() != self.n_ext => {
                Err(Error::Structure("hair label count differs from hair count".into()))
            }
            Mode::Kontsevich if !self.hair_labels.is_empty() => {
                Err(Error::Structure("hair labels on a non-hairy graph".into()))
            }
            _ => Ok(()),
        }
    }

    /// Number of half-edges at `v` (a tadpole counts twice).
    pub fn edge_valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn deco_count(&self, v: usize) -> usize {
        self.decos.iter().filter(|(w, _)| *w == v).count()
    }

    /// Valence with each decoration counting one.
    pub fn valence(&self, v: usize) -> usize {
        self.edge_valence(v) + self.deco_count(v)
    }

    /// Connected components as lists of vertices (vertices sorted).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let nv = self.n_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..nv {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    /// First Betti number of the underlying graph.
    pub fn loop_order(&self) -> usize {
        let c = self.components().len();
        self.n_edges() + c - self.n_vertices()
    }

    /// Total number of odd tokens in the orientation.
    pub fn token_count(&self) -> usize {
        let base = match self.parity {
            Parity::Even => self.edges.len(),
            Parity::Odd => 2 * self.edges.len() + self.n_int,
        };
        base + self.decos.iter().filter(|(_, s)| s.odd).count()
            + self.hair_labels.iter().filter(|s| s.odd).count()
    }

    /// Parity of the element: the number of odd tokens mod 2. This agrees
    /// with the parity of [`degree`].
    pub fn is_odd(&self) -> bool {
        self.token_count() % 2 == 1
    }

    pub fn is_admissible(&self, policy: ValencePolicy) -> bool {
        if self.check_structure().is_err() {
            return false;
        }
        for v in self.n_ext..self.n_vertices() {
            if self.valence(v) < policy.min_valence {
                return false;
            }
        }
        match self.mode {
            Mode::Kontsevich => self
                .components()
                .iter()
                .all(|c| c.iter().any(|&v| v < self.n_ext)),
            Mode::Hairy => {
                (0..self.n_ext).all(|x| self.edge_valence(x) == 1 && self.deco_count(x) == 0)
                    && self.is_connected()
            }
        }
    }
}

/// Cohomological degree
/// `(n-1)E - n V_int + sum deg(decorations) - sum deg(hair labels)`,
/// where hair edges count in `E`.
pub fn degree(
    g: &Graph,
    n: i32,
    deco_alg: Option<&GradedAlgebra>,
    hair_alg: Option<&GradedAlgebra>,
) -> Result<i32> {
    let mut d = (n - 1) * g.n_edges() as i32 - n * g.n_int as i32;
    if !g.decos.is_empty() {
        let alg = deco_alg.ok_or_else(|| Error::UnknownSymbol("decoration algebra missing".into()))?;
        for (_, s) in &g.decos {
            if s.id as usize >= alg.dim() {
                return Err(Error::UnknownSymbol(format!("#{}", s.id)));
            }
            d += alg.degree(s.id);
        }
    }
    if !g.hair_labels.is_empty() {
        let alg = hair_alg.ok_or_else(|| Error::UnknownSymbol("hair algebra missing".into()))?;
        for s in &g.hair_labels {
            if s.id as usize >= alg.dim() {
                return Err(Error::UnknownSymbol(format!("#{}", s.id)));
            }
            d -= alg.degree(s.id);
        }
    }
    Ok(d)
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: usize| -> String {
            if v < self.n_ext {
                format!("e{}", v + 1)
            } else {
                format!("i{}", v - self.n_ext + 1)
            }
        };
        write!(f, "[")?;
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}-{}", name(a), name(b))?;
        }
        for (v, s) in &self.decos {
            write!(f, " {}:d{}", name(*v), s.id)?;
        }
        for (x, s) in self.hair_labels.iter().enumerate() {
            write!(f, " {}:h{}", name(x), s.id)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_example(parity: Parity) -> Graph {
        // five externals, two internals; double edge 1-2 drawn as an arc plus
        // a tadpole at external 5 and one at the first internal vertex
        let g = Graph::kontsevich(parity, 5, 2);
        let (w1, w2) = (g.int(0), g.int(1));
        g.with_edge(0, 1)
            .with_edge(0, w1)
            .with_edge(1, w1)
            .with_edge(1, w2)
            .with_edge(2, w1)
            .with_edge(2, w2)
            .with_edge(3, w2)
            .with_edge(w1, w2)
            .with_edge(4, 4)
            .with_edge(w1, w1)
    }

    #[test]
    fn example_degree_and_admissibility() {
        let g = worked_example(Parity::Odd);
        assert_eq!(g.n_edges(), 10);
        assert_eq!(degree(&g, 3, None, None).unwrap(), 14);
        assert!(g.is_admissible(ValencePolicy::default()));
    }

    #[test]
    fn edge_degree() {
        let g = Graph::kontsevich(Parity::Even, 2, 0).with_edge(0, 1);
        for n in 2..6 {
            assert_eq!(degree(&g, n, None, None).unwrap(), n - 1);
        }
    }

    #[test]
    fn low_valence_rejected_unless_decorated() {
        let s = GradedAlgebra::sphere(2);
        let w = s.sym("w").unwrap();
        let g = Graph::kontsevich(Parity::Even, 1, 1).with_edge(0, 1);
        assert!(!g.is_admissible(ValencePolicy::new(3)));
        let dec = g.clone().with_deco(1, w);
        assert!(dec.is_admissible(ValencePolicy::new(2)));
        assert!(!dec.is_admissible(ValencePolicy::new(3)));
    }

    #[test]
    fn component_without_external_is_inadmissible() {
        let g = Graph::kontsevich(Parity::Even, 1, 2);
        let g = g.with_edge(1, 2).with_edge(1, 2).with_edge(1, 2);
        assert!(!g.is_admissible(ValencePolicy::default()));
    }

    #[test]
    fn structure_errors() {
        let g = Graph::kontsevich(Parity::Even, 1, 0).with_edge(0, 3);
        assert!(matches!(g.check_structure(), Err(Error::Structure(_))));
    }

    #[test]
    fn token_parity_matches_degree_parity() {
        for parity in [Parity::Even, Parity::Odd] {
            let n = if parity == Parity::Even { 2 } else { 3 };
            let g = worked_example(parity);
            let d = degree(&g, n, None, None).unwrap();
            assert_eq!(g.is_odd(), d.rem_euclid(2) == 1);
        }
    }
}
