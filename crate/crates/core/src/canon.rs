//! Canonical labelling with orientation signs.
//!
//! Colour refinement followed by an exhaustive individualisation search.
//! Every leaf of the search is a relabelling; the lexicographically least
//! relabelled graph is the canonical form. Leaves that reproduce the
//! canonical form differ by automorphisms, so if two of them carry
//! different orientation signs the graph has an odd automorphism and is
//! zero.

use crate::error::Result;
use crate::graph::{Graph, Mode, Parity};

/// Canonical representative of `g` and the sign relating `g`'s orientation
/// to the canonical one. Sign 0 means `g = -g`.
pub fn canonicalize(g: &Graph) -> Result<(Graph, i32)> {
    g.check_structure()?;
    let mut c = Canon::new(g);
    let start = c.refine(c.initial_colors());
    c.search(start);
    let (best, sign) = c.best.expect("search visits at least one leaf");
    if c.conflict || has_intrinsic_symmetry(g) {
        Ok((best, 0))
    } else {
        Ok((best, sign))
    }
}

/// Symmetries that fix every vertex but act oddly on the tokens:
/// swapping parallel edges (even), reversing a tadpole (odd), or swapping
/// two equal odd decorations on one vertex.
pub(crate) fn has_intrinsic_symmetry(g: &Graph) -> bool {
    match g.parity {
        Parity::Even => {
            let mut keys: Vec<(usize, usize)> =
                g.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            keys.sort_unstable();
            if keys.windows(2).any(|w| w[0] == w[1]) {
                return true;
            }
        }
        Parity::Odd => {
            if g.edges.iter().any(|&(a, b)| a == b) {
                return true;
            }
        }
    }
    let mut odd: Vec<_> = g.decos.iter().filter(|(_, s)| s.odd).collect();
    odd.sort_unstable();
    odd.windows(2).any(|w| w[0] == w[1])
}

/// Relabels vertices by `p` (old -> new), normalises field order and
/// returns the sign of the induced token permutation.
pub(crate) fn relabel(g: &Graph, p: &[usize]) -> (Graph, i32) {
    let ne = g.edges.len();
    let mut keyed: Vec<(usize, usize, usize, bool)> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let (x, y) = (p[a], p[b]);
            (x.min(y), x.max(y), i, x > y)
        })
        .collect();
    keyed.sort_unstable();
    let mut pos = vec![0usize; ne];
    let mut rev = vec![false; ne];
    let edges: Vec<(usize, usize)> = keyed
        .iter()
        .enumerate()
        .map(|(k, &(x, y, i, r))| {
            pos[i] = k;
            rev[i] = r;
            (x, y)
        })
        .collect();

    let mut dkeyed: Vec<(usize, crate::algebra::Sym, usize)> =
        g.decos.iter().enumerate().map(|(i, &(v, s))| (p[v], s, i)).collect();
    dkeyed.sort_unstable();
    let decos: Vec<_> = dkeyed.iter().map(|&(v, s, _)| (v, s)).collect();

    let mut hair_labels = g.hair_labels.clone();
    for (x, s) in g.hair_labels.iter().enumerate() {
        hair_labels[p[x]] = *s;
    }

    // old token index -> new token index
    let mut perm: Vec<usize> = Vec::with_capacity(g.token_count());
    let mut sign = 1;
    match g.parity {
        Parity::Even => perm.extend((0..ne).map(|i| pos[i])),
        Parity::Odd => {
            for i in 0..ne {
                let (h0, h1) = if rev[i] { (1, 0) } else { (0, 1) };
                perm.push(2 * pos[i] + h0);
                perm.push(2 * pos[i] + h1);
            }
            for j in 0..g.n_int {
                perm.push(2 * ne + p[g.n_ext + j] - g.n_ext);
            }
        }
    }
    let base = perm.len();
    let mut new_rank = vec![usize::MAX; g.decos.len()];
    let mut r = 0;
    for &(_, s, i) in &dkeyed {
        if s.odd {
            new_rank[i] = r;
            r += 1;
        }
    }
    for (i, (_, s)) in g.decos.iter().enumerate() {
        if s.odd {
            perm.push(base + new_rank[i]);
        }
    }
    let base = base + r;
    // odd labels, new order is by new external index
    let mut order: Vec<(usize, usize)> = g
        .hair_labels
        .iter()
        .enumerate()
        .filter(|(_, s)| s.odd)
        .map(|(x, _)| (p[x], x))
        .collect();
    order.sort_unstable();
    let mut lrank = vec![usize::MAX; g.n_ext];
    for (k, &(_, x)) in order.iter().enumerate() {
        lrank[x] = k;
    }
    for (x, s) in g.hair_labels.iter().enumerate() {
        if s.odd {
            perm.push(base + lrank[x]);
        }
    }
    if permutation_is_odd(&perm) {
        sign = -1;
    }
    (
        Graph {
            mode: g.mode,
            parity: g.parity,
            n_ext: g.n_ext,
            n_int: g.n_int,
            edges,
            decos,
            hair_labels,
        },
        sign,
    )
}

pub(crate) fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

struct Canon<'a> {
    g: &'a Graph,
    adj: Vec<Vec<(usize, usize)>>,
    best: Option<(Graph, i32)>,
    conflict: bool,
}

impl<'a> Canon<'a> {
    fn new(g: &'a Graph) -> Self {
        let nv = g.n_vertices();
        let mut m = vec![std::collections::BTreeMap::<usize, usize>::new(); nv];
        for &(a, b) in &g.edges {
            if a != b {
                *m[a].entry(b).or_default() += 1;
                *m[b].entry(a).or_default() += 1;
            }
        }
        let adj = m.into_iter().map(|x| x.into_iter().collect()).collect();
        Canon { g, adj, best: None, conflict: false }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let g = self.g;
        let sigs: Vec<Vec<u64>> = (0..g.n_vertices())
            .map(|v| {
                let mut s = Vec::new();
                if v < g.n_ext {
                    match g.mode {
                        Mode::Kontsevich => s.extend([0, v as u64]),
                        Mode::Hairy => s.extend([1, g.hair_labels[v].id as u64]),
                    }
                } else {
                    s.extend([2, 0]);
                }
                let loops = g.edges.iter().filter(|&&(a, b)| a == v && b == v).count();
                s.push(loops as u64);
                s.push(g.edge_valence(v) as u64);
                let mut d: Vec<u64> =
                    g.decos.iter().filter(|(w, _)| *w == v).map(|(_, x)| x.id as u64).collect();
                d.sort_unstable();
                s.push(d.len() as u64);
                s.extend(d);
                s
            })
            .collect();
        rank(&sigs)
    }

    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut count = distinct(&colors);
        loop {
            let sigs: Vec<Vec<u64>> = (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<(u64, u64)> = self.adj[v]
                        .iter()
                        .map(|&(u, m)| (colors[u] as u64, m as u64))
                        .collect();
                    nb.sort_unstable();
                    let mut s = vec![colors[v] as u64];
                    for (c, m) in nb {
                        s.push(c);
                        s.push(m);
                    }
                    s
                })
                .collect();
            colors = rank(&sigs);
            let c = distinct(&colors);
            if c == count {
                return colors;
            }
            count = c;
        }
    }

    fn search(&mut self, colors: Vec<u32>) {
        let n = colors.len();
        if distinct(&colors) == n {
            let p: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let (cg, s) = relabel(self.g, &p);
            match &self.best {
                None => self.best = Some((cg, s)),
                Some((b, bs)) => {
                    if cg < *b {
                        self.best = Some((cg, s));
                        self.conflict = false;
                    } else if cg == *b && s != *bs {
                        self.conflict = true;
                    }
                }
            }
            return;
        }
        // first non-singleton cell (smallest colour value)
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = (0..n).find(|&c| sizes[c] > 1).unwrap() as u32;
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        for v in members {
            let ind: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + (u != v) as u32)
                .collect();
            let next = self.refine(rank_u32(&ind));
            self.search(next);
        }
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn rank(sigs: &[Vec<u64>]) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u64>> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    // colour = number of vertices with strictly smaller signature, so that a
    // discrete colouring is a permutation
    let mut counts: Vec<usize> = vec![0; sorted.len()];
    for s in sigs {
        counts[sorted.binary_search(&s).unwrap()] += 1;
    }
    let mut offset = vec![0usize; sorted.len()];
    for i in 1..sorted.len() {
        offset[i] = offset[i - 1] + counts[i - 1];
    }
    sigs.iter()
        .map(|s| offset[sorted.binary_search(&s).unwrap()] as u32)
        .collect()
}

fn rank_u32(c: &[u32]) -> Vec<u32> {
    let sigs: Vec<Vec<u64>> = c.iter().map(|&x| vec![x as u64]).collect();
    rank(&sigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;

    #[test]
    fn single_external_is_fixed() {
        for parity in [Parity::Even, Parity::Odd] {
            let g = Graph::kontsevich(parity, 1, 0);
            let (c, s) = canonicalize(&g).unwrap();
            assert_eq!(c, g);
            assert_eq!(s, 1);
        }
    }

    #[test]
    fn double_edge_even_is_zero() {
        let g = Graph::kontsevich(Parity::Even, 2, 0).with_edge(0, 1).with_edge(0, 1);
        assert_eq!(canonicalize(&g).unwrap().1, 0);
        let g = Graph::kontsevich(Parity::Odd, 2, 0).with_edge(0, 1).with_edge(0, 1);
        assert_ne!(canonicalize(&g).unwrap().1, 0);
    }

    #[test]
    fn tadpole_odd_is_zero() {
        let g = Graph::kontsevich(Parity::Odd, 1, 1).with_edge(1, 1).with_edge(0, 1);
        assert_eq!(canonicalize(&g).unwrap().1, 0);
        let g = Graph::kontsevich(Parity::Even, 1, 1).with_edge(1, 1).with_edge(0, 1);
        assert_ne!(canonicalize(&g).unwrap().1, 0);
    }

    #[test]
    fn reversing_an_edge_in_odd_parity_negates() {
        let a = Graph::kontsevich(Parity::Odd, 2, 0).with_edge(0, 1);
        let b = Graph::kontsevich(Parity::Odd, 2, 0).with_edge(1, 0);
        let (ca, sa) = canonicalize(&a).unwrap();
        let (cb, sb) = canonicalize(&b).unwrap();
        assert_eq!(ca, cb);
        assert_eq!(sa, -sb);
    }

    #[test]
    fn theta_like_odd_automorphism_even_parity() {
        // two hairs on one vertex with equal odd labels: swapping them is odd
        let u = GradedAlgebra::sphere(3);
        let w = u.sym("w").unwrap();
        let mut g = Graph::hairy(Parity::Even, vec![w, w], 1);
        let c = g.int(0);
        g = g.with_edge(0, c).with_edge(1, c);
        let v = GradedAlgebra::sphere(4);
        g = g.with_deco(c, v.sym("w").unwrap());
        // tokens: e0 e1 l0 l1; swapping hairs swaps (e0 e1)(l0 l1): even
        assert_ne!(canonicalize(&g).unwrap().1, 0);
    }

    #[test]
    fn idempotent() {
        let g = Graph::kontsevich(Parity::Odd, 3, 2)
            .with_edge(3, 0)
            .with_edge(4, 3)
            .with_edge(1, 4)
            .with_edge(2, 4)
            .with_edge(3, 1);
        let (c, s) = canonicalize(&g).unwrap();
        assert_ne!(s, 0);
        let (c2, s2) = canonicalize(&c).unwrap();
        assert_eq!(c, c2);
        assert_eq!(s2, 1);
    }

    #[test]
    fn permutation_parity() {
        assert!(!permutation_is_odd(&[0, 1, 2]));
        assert!(permutation_is_odd(&[1, 0, 2]));
        assert!(!permutation_is_odd(&[1, 2, 0]));
    }
}
