//! The two worked pipelines: the sphere comparison and the enumeration
//! of low-degree trees for embeddings into a punctured product of spheres.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algebra::{GradedAlgebra, Sym};
use crate::error::Result;
use crate::graph::{Graph, Parity};
use crate::hairy::{attach_hair, delta_split, strip_algebra, strip_to_hairy, z_parts, z_sphere, HairyCtx};
use crate::linalg::cohomology::{cohomology, CohomologyTable, RankMethod, Window};
use crate::linalg::enumerate::{enumerate_cell, Cell};
use crate::linalg::ihx::ihx_reduce;
use crate::lincombo::LinCombo;
use crate::linf::{mc_check_in, McReport, TruncationParams};
use crate::Q;

/// Which side of the comparison a [`SphereWindow`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereSide {
    /// Hairless graphs with at least one `w` decoration.
    Decorated,
    /// Undecorated graphs whose hairs are all labelled `h`.
    Haired,
}

/// Both complexes of the sphere comparison, cut off by loop order,
/// internal vertices and edges (hair edges included).
///
/// Write `m` for the number of decorations (or hairs), `V` for internal
/// vertices and `E` for edges not ending in a hair. The sector is
/// `G = E - V + m`, the loop order after trading decorations for hairs.
/// Inside a sector the degree is `(n - 1) G - (V - m)` and trivalence
/// forces `V <= 2G - m`; the slice of a degree is the sum over `m >= 1`.
#[derive(Clone, Debug)]
pub struct SphereWindow {
    pub n: i32,
    pub side: SphereSide,
    pub trunc: TruncationParams,
    ctx: HairyCtx,
}

impl SphereWindow {
    pub fn new(n: i32, k: i32, side: SphereSide, trunc: TruncationParams) -> Self {
        let mut ctx = match side {
            SphereSide::Decorated => HairyCtx::new(n, GradedAlgebra::sphere(k)).with_z(z_sphere(n)),
            SphereSide::Haired => HairyCtx::new(n, strip_algebra()),
        };
        if Parity::of(n) == Parity::Even {
            ctx = ctx.without_tadpoles();
        }
        SphereWindow { n, side, trunc, ctx }
    }

    /// `(m, V, E)` for every cell of the slice that can be nonempty.
    fn cells(&self, sector: i64, degree: i32) -> Vec<(usize, usize, usize)> {
        let t = (self.n as i64 - 1) * sector - degree as i64;
        let mut out = Vec::new();
        for m in 1..=(2 * sector).max(0) {
            let (v, e) = (m + t, sector + t);
            if v < 1 || e < 0 || v > 2 * sector - m {
                continue;
            }
            out.push((m as usize, v as usize, e as usize));
        }
        out
    }

    fn cell(&self, m: usize, v: usize, e: usize) -> Cell {
        let parity = Parity::of(self.n);
        match self.side {
            SphereSide::Decorated => {
                let w = z_sphere(self.n).algebra.sym("w").expect("sphere class");
                Cell::hairy(parity, 0, v, e, vec![], vec![w], m)
            }
            SphereSide::Haired => {
                let h = strip_algebra().sym("h").expect("strip label");
                Cell::hairy(parity, m, v, e + m, vec![h], vec![], 0)
            }
        }
    }
}

impl Window for SphereWindow {
    fn sectors(&self) -> Vec<i64> {
        (1..=self.trunc.max_loop_order.min(64) as i64).collect()
    }

    fn degrees(&self, sector: i64) -> Vec<i32> {
        // t = V - m runs over 1 - (2G - 1) ..= 2G - 2
        let top = (self.n as i64 - 1) * sector;
        ((2 - 2 * sector)..=(2 * sector - 2)).map(|t| (top - t) as i32).collect()
    }

    fn in_window(&self, sector: i64, degree: i32) -> bool {
        let cells = self.cells(sector, degree);
        !cells.is_empty()
            && cells
                .iter()
                .all(|&(m, v, e)| v <= self.trunc.max_internal_vertices && e + m <= self.trunc.max_edges)
    }

    fn basis(&self, sector: i64, degree: i32) -> Vec<Graph> {
        let mut out: Vec<Graph> = self
            .cells(sector, degree)
            .into_iter()
            .flat_map(|(m, v, e)| enumerate_cell(&self.cell(m, v, e)))
            .filter(|g| self.ctx.tadpoles || !g.has_tadpole())
            .collect();
        out.sort();
        out
    }

    fn d(&self, g: &Graph) -> LinCombo {
        let mut out = delta_split(&self.ctx, g).expect("hairy graph");
        match self.side {
            SphereSide::Decorated => {
                let (_, edge) = z_parts(&self.ctx, g).expect("line-graph twisting element");
                out.add(&edge);
                out.retain(|h| !h.decos.is_empty());
            }
            SphereSide::Haired => {
                out.add(&attach_hair(g, &Q::from_integer(2.into())));
                out.retain(|h| h.n_ext > 0 && (self.ctx.tadpoles || !h.has_tadpole()));
            }
        }
        out
    }

    fn step(&self) -> i32 {
        -1
    }
}

/// Applies [`strip_to_hairy`] termwise.
pub fn strip_combo(x: &LinCombo) -> Result<LinCombo> {
    let mut out = LinCombo::new();
    for (g, c) in x.iter() {
        let (h, s) = strip_to_hairy(g)?;
        out.add_graph(&h, if s < 0 { -c.clone() } else { c.clone() })?;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct S51Report {
    pub n: i32,
    pub k: i32,
    pub trunc: TruncationParams,
    pub mc: McReport,
    pub graphs_checked: usize,
    /// Graphs on which stripping fails to commute with the differentials.
    pub chain_map_failures: Vec<Graph>,
    /// Slices where the stripped basis differs from the haired enumeration.
    pub bijection_failures: Vec<(i64, i32)>,
    pub decorated: CohomologyTable,
    pub haired: CohomologyTable,
    pub warnings: Vec<String>,
}

impl S51Report {
    pub fn chain_isomorphism(&self) -> bool {
        self.chain_map_failures.is_empty() && self.bijection_failures.is_empty()
    }

    /// Whether every trusted degree has dimension zero.
    pub fn vanishes_where_trusted(&self) -> bool {
        self.decorated.degrees.values().all(|e| e.sectors.iter().all(|&(_, d, t)| !t || d == 0))
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "sphere comparison n={} k={} loops<={} internal<={} edges<={}",
            self.n, self.k, self.trunc.max_loop_order, self.trunc.max_internal_vertices, self.trunc.max_edges
        )
        .unwrap();
        for w in &self.warnings {
            writeln!(s, "warning: {w}").unwrap();
        }
        if self.mc.is_empty() {
            writeln!(s, "mc residual: none").unwrap();
        } else {
            for l in self.mc.lines() {
                writeln!(s, "mc residual {l}").unwrap();
            }
        }
        writeln!(
            s,
            "strip: {} graphs checked, {} chain-map failures, {} slice mismatches",
            self.graphs_checked,
            self.chain_map_failures.len(),
            self.bijection_failures.len()
        )
        .unwrap();
        for g in &self.chain_map_failures {
            writeln!(s, "  fails on {g}").unwrap();
        }
        s.push_str("decorated complex (sector, degree, dim, trust):\n");
        render_sectors(&mut s, &self.decorated);
        s.push_str("haired complex (sector, degree, dim, trust):\n");
        render_sectors(&mut s, &self.haired);
        writeln!(s, "vanishes where trusted: {}", self.vanishes_where_trusted()).unwrap();
        s
    }
}

fn render_sectors(s: &mut String, t: &CohomologyTable) {
    for (d, e) in &t.degrees {
        for &(sec, dim, trusted) in &e.sectors {
            let flag = if trusted { "trusted" } else { "untrusted" };
            writeln!(s, "  {sec} {d} {dim} {flag}").unwrap();
        }
    }
}

/// Compares hairless `w`-decorated graphs with undecorated hairy graphs
/// through [`strip_to_hairy`] and computes both cohomologies in the window.
pub fn sphere_comparison(n: i32, k: i32, trunc: TruncationParams) -> Result<S51Report> {
    let mut warnings = Vec::new();
    if n - k < 3 {
        warnings.push(format!("n - k = {} is below 3", n - k));
    }
    let z = z_sphere(n);
    // for even n the element is Maurer–Cartan only modulo tadpole graphs
    let mut mc_ctx = HairyCtx::new(n, z.algebra.clone());
    if Parity::of(n) == Parity::Even {
        mc_ctx = mc_ctx.without_tadpoles();
        warnings.push("even n: computed modulo graphs with a tadpole".into());
    }
    let mc = mc_check_in(&mc_ctx, &z.value, &trunc);
    let dec = SphereWindow::new(n, k, SphereSide::Decorated, trunc.clone());
    let hair = SphereWindow::new(n, k, SphereSide::Haired, trunc.clone());
    let mut graphs_checked = 0;
    let mut chain_map_failures = Vec::new();
    let mut bijection_failures = Vec::new();
    for s in dec.sectors() {
        for k in dec.degrees(s) {
            if !dec.in_window(s, k) {
                continue;
            }
            let basis = dec.basis(s, k);
            let mut stripped = BTreeSet::new();
            for g in &basis {
                graphs_checked += 1;
                let (h, _) = strip_to_hairy(g)?;
                stripped.insert(h.clone());
                let lhs = strip_combo(&dec.d(g))?;
                let rhs = strip_combo(&LinCombo::single(g)?)?;
                let rhs = rhs.map(|h| hair.d(h));
                if !lhs.sub(&rhs).is_zero() {
                    chain_map_failures.push(g.clone());
                }
            }
            let other: BTreeSet<Graph> = hair.basis(s, k).into_iter().collect();
            if stripped != other || stripped.len() != basis.len() {
                bijection_failures.push((s, k));
            }
        }
    }
    let decorated = cohomology(&dec, RankMethod::Sparse)?;
    let haired = cohomology(&hair, RankMethod::Sparse)?;
    if decorated.degrees.values().any(|e| !e.trusted) {
        warnings.push("some degrees are cut off by the window".into());
    }
    Ok(S51Report {
        n,
        k,
        trunc,
        mc,
        graphs_checked,
        chain_map_failures,
        bijection_failures,
        decorated,
        haired,
        warnings,
    })
}

/// Bounds for the tree enumeration; hair edges count as edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeWindow {
    pub max_edges: usize,
    pub max_internal: usize,
    pub max_decorations: usize,
}

impl Default for TreeWindow {
    fn default() -> Self {
        TreeWindow { max_edges: 4, max_internal: 2, max_decorations: 2 }
    }
}

/// A candidate with its degree after the `+1` shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub graph: Graph,
    pub shifted_degree: i32,
}

/// One filter of the constraint chain.
#[derive(Clone, Debug)]
pub struct FilterStep {
    pub name: &'static str,
    /// The inequality behind the filter, with the parameters substituted.
    pub rule: String,
    /// Removed graphs with the value the rule predicts for each.
    pub removed: Vec<(Candidate, String)>,
    pub kept: usize,
    /// Every removed graph satisfies the bound of `rule`.
    pub sound: bool,
}

#[derive(Clone, Debug)]
pub struct S52Report {
    pub d: i32,
    pub k: i32,
    pub window: TreeWindow,
    pub candidates: Vec<Candidate>,
    /// Candidates checked against the general lower bound, and those
    /// violating it.
    pub minimal_degree_checked: usize,
    pub minimal_degree_violations: Vec<Candidate>,
    pub steps: Vec<FilterStep>,
    pub ihx_relators: usize,
    pub ihx_removed: Vec<Candidate>,
    pub shapes: Vec<Candidate>,
    pub notes: Vec<String>,
}

impl S52Report {
    pub fn shape_graphs(&self) -> BTreeSet<Graph> {
        self.shapes.iter().map(|c| c.graph.clone()).collect()
    }

    pub fn render(&self, alg_u: &GradedAlgebra, alg_v: &GradedAlgebra) -> String {
        let mut s = String::new();
        let w = &self.window;
        writeln!(
            s,
            "punctured product enumeration d={} k={} edges<={} internal<={} decorations<={}",
            self.d, self.k, w.max_edges, w.max_internal, w.max_decorations
        )
        .unwrap();
        writeln!(s, "candidates: {}", self.candidates.len()).unwrap();
        writeln!(
            s,
            "minimal degree bound checked on {} graphs, {} violations",
            self.minimal_degree_checked,
            self.minimal_degree_violations.len()
        )
        .unwrap();
        for st in &self.steps {
            writeln!(s, "filter {}: {}", st.name, st.rule).unwrap();
            writeln!(s, "  removed {}, kept {}, sound {}", st.removed.len(), st.kept, st.sound).unwrap();
            for (c, why) in &st.removed {
                writeln!(s, "  - {} degree {} ({why})", describe(&c.graph, alg_u, alg_v), c.shifted_degree).unwrap();
            }
        }
        writeln!(s, "ihx: {} relators, {} trees removed", self.ihx_relators, self.ihx_removed.len()).unwrap();
        for c in &self.ihx_removed {
            writeln!(s, "  - {} degree {}", describe(&c.graph, alg_u, alg_v), c.shifted_degree).unwrap();
        }
        writeln!(s, "shapes: {}", self.shapes.len()).unwrap();
        for c in &self.shapes {
            writeln!(s, "  {} degree {}", describe(&c.graph, alg_u, alg_v), c.shifted_degree).unwrap();
        }
        for n in &self.notes {
            writeln!(s, "note: {n}").unwrap();
        }
        s
    }
}

/// Short human-readable summary of a tree.
pub fn describe(g: &Graph, alg_u: &GradedAlgebra, alg_v: &GradedAlgebra) -> String {
    let hairs: Vec<&str> = g.hair_labels.iter().map(|s| alg_u.symbol_name(s.id)).collect();
    let decos: Vec<&str> = g.decos.iter().map(|(_, s)| alg_v.symbol_name(s.id)).collect();
    format!("{} internal, hairs [{}], decorations [{}] {g}", g.n_int, hairs.join(" "), decos.join(" "))
}

fn unit_hairs(g: &Graph, unit: u16) -> usize {
    g.hair_labels.iter().filter(|s| s.id == unit).count()
}

/// Sum over internal vertices of `valence - 3`.
fn valence_excess(g: &Graph) -> usize {
    (g.n_ext..g.n_vertices()).map(|v| g.valence(v).saturating_sub(3)).sum()
}

/// Runs the constraint chain for trees with hairs labelled by the
/// cohomology of the `k`-sphere and internal decorations `w1`, `w2` of
/// degree `d`, in `n = 2d`.
pub fn product_sphere_enumerate(d: i32, k: i32, window: TreeWindow) -> Result<S52Report> {
    let n = 2 * d;
    let alg_u = GradedAlgebra::sphere(k);
    let alg_v = GradedAlgebra::punctured_sphere_product(d);
    let ctx = HairyCtx::new(n, alg_u.clone()).with_decorations(alg_v.clone());
    let unit = alg_u.unit();
    let dim_a = k;
    let mut notes = Vec::new();
    if 2 * d - k < 3 {
        notes.push(format!("codimension 2d - k = {} is below 3", 2 * d - k));
    }

    let hair_syms: Vec<Sym> = alg_u.symbols().collect();
    let deco_syms: Vec<Sym> = alg_v.reduced_symbols().collect();
    let mut graphs = Vec::new();
    for v in 1..=window.max_internal {
        for e in v..=window.max_edges {
            for h in 1..=e {
                for m in 0..=window.max_decorations {
                    let cell = Cell::hairy(Parity::of(n), h, v, e, hair_syms.clone(), deco_syms.clone(), m);
                    graphs.extend(enumerate_cell(&cell));
                }
            }
        }
    }
    graphs.sort();
    let shifted = |g: &Graph| ctx.degree(g).map(|x| x + 1);
    let candidates: Vec<Candidate> =
        graphs.iter().map(|g| Ok(Candidate { graph: g.clone(), shifted_degree: shifted(g)? })).collect::<Result<_>>()?;

    // general lower bound, attained by trees with top-class hairs and no decorations
    let minimal = |g: &Graph| {
        let (e, v, h) = (g.n_edges() as i32, g.n_int as i32, g.n_ext as i32);
        -(2 * d - 3) + (2 * e - 3 * v) + (2 * d - dim_a - 3) * h + 1
    };
    let minimal_degree_violations: Vec<Candidate> =
        candidates.iter().filter(|c| c.shifted_degree < minimal(&c.graph)).cloned().collect();

    let mut steps = Vec::new();
    let mut current = candidates.clone();
    let mut run = |name: &'static str,
                   rule: String,
                   current: &mut Vec<Candidate>,
                   drop: &dyn Fn(&Graph) -> bool,
                   check: &dyn Fn(&Candidate) -> (bool, String)| {
        let (removed, kept): (Vec<Candidate>, Vec<Candidate>) = current.drain(..).partition(|c| drop(&c.graph));
        let mut sound = true;
        let removed = removed
            .into_iter()
            .map(|c| {
                let (ok, why) = check(&c);
                sound &= ok;
                (c, why)
            })
            .collect();
        steps.push(FilterStep { name, rule, removed, kept: kept.len(), sound });
        *current = kept;
    };

    run(
        "tree-only",
        format!("each loop raises the degree by 2d - 3 = {} over the tree bound", 2 * d - 3),
        &mut current,
        &|g| g.loop_order() > 0,
        &|c| {
            let excess = (2 * d - 3) * c.graph.loop_order() as i32;
            let b = minimal(&c.graph);
            (c.shifted_degree >= b, format!("loops {}, bound {b}, loop surplus {excess}", c.graph.loop_order()))
        },
    );
    let one_hair = -(2 * d - 3) + dim_a + 1;
    run(
        "no 1-hairs",
        format!("(2d-1)e - 2dv - dim(A)(h-1) + 1 > -(2d-3) + dim(A) + 1 = {one_hair}"),
        &mut current,
        &|g| unit_hairs(g, unit) > 0,
        &|c| {
            let g = &c.graph;
            let (e, v, h) = (g.n_edges() as i32, g.n_int as i32, g.n_ext as i32);
            let b = (2 * d - 1) * e - 2 * d * v - dim_a * (h - 1) + 1;
            // decorations only raise the degree; the display leaves them out
            let decos: i32 = g.decos.iter().map(|(_, s)| alg_v.degree(s.id)).sum();
            let bd = b + decos;
            (c.shifted_degree >= bd && bd > one_hair, format!("bound {b}, with decorations {bd}"))
        },
    );
    let two_decos = |v: i32| (2 * d - dim_a - 2) * v + 2;
    run(
        "at most one decoration",
        format!(
            "a decoration adds at least dim(A) - d + 1 = {}; two give (2d - dim(A) - 2)v + 2 = {}v + 2",
            dim_a - d + 1,
            2 * d - dim_a - 2
        ),
        &mut current,
        &|g| g.decos.len() > 1,
        &|c| {
            let b = two_decos(c.graph.n_int as i32);
            (c.shifted_degree >= b, format!("bound {b}"))
        },
    );
    run(
        "unitrivalent",
        "merging two trivalent vertices raises the degree by 1; excess counts the merges".into(),
        &mut current,
        &|g| valence_excess(g) > 0,
        &|c| {
            let g = &c.graph;
            let excess = valence_excess(g) as i32;
            // the unitrivalent tree with the same hairs and decorations
            let v0 = g.n_int as i32 + excess;
            let e0 = g.n_edges() as i32 + excess;
            let labels: i32 = g.hair_labels.iter().map(|s| alg_u.degree(s.id)).sum();
            let decos: i32 = g.decos.iter().map(|(_, s)| alg_v.degree(s.id)).sum();
            let base = (2 * d - 1) * e0 - 2 * d * v0 - labels + decos + 1;
            (c.shifted_degree == base + excess, format!("excess {excess}, unitrivalent degree {base}"))
        },
    );

    let slice: Vec<Graph> = current.iter().map(|c| c.graph.clone()).collect();
    let red = ihx_reduce(&ctx, &slice)?;
    let survivors: BTreeSet<&Graph> = red.survivors.iter().collect();
    let (shapes, ihx_removed): (Vec<Candidate>, Vec<Candidate>) =
        current.into_iter().partition(|c| survivors.contains(&c.graph));

    let decorated = 3 * d - 2 * k - 1;
    let trivalent = 4 * d - 3 * k - 2;
    notes.push(format!(
        "two-hair decorated stars have shifted degree 3d - 2k - 1 = {decorated}, the three-hair star 4d - 3k - 2 = {trivalent}"
    ));
    let exact: Vec<usize> = (0..shapes.len()).filter(|&i| shapes[i].shifted_degree == 1).collect();
    notes.push(format!(
        "reading by constraints: {} shapes; reading by exact shifted degree 1: {} shapes",
        shapes.len(),
        exact.len()
    ));

    Ok(S52Report {
        d,
        k,
        window,
        minimal_degree_checked: candidates.len(),
        candidates,
        minimal_degree_violations,
        steps,
        ihx_relators: red.predecessors.len(),
        ihx_removed,
        shapes,
        notes,
    })
}

/// The three expected shapes in canonical form: the two-hair stars
/// decorated by `w1` and by `w2`, and the three-hair star.
pub fn expected_product_shapes(d: i32, k: i32) -> BTreeSet<Graph> {
    let alg_u = GradedAlgebra::sphere(k);
    let alg_v = GradedAlgebra::punctured_sphere_product(d);
    let p = Parity::of(2 * d);
    let w = alg_u.sym("w").unwrap();
    let mut out = BTreeSet::new();
    let canon = |g: Graph| LinCombo::single(&g).unwrap().graphs().next().cloned().expect("nonzero shape");
    for name in ["w1", "w2"] {
        let g = Graph::hairy(p, vec![w, w], 1).with_edge(0, 2).with_edge(1, 2).with_deco(2, alg_v.sym(name).unwrap());
        out.insert(canon(g));
    }
    out.insert(canon(Graph::hairy(p, vec![w, w, w], 1).with_edge(0, 3).with_edge(1, 3).with_edge(2, 3)));
    out
}
