use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use graphcx::algebra::GradedAlgebra;
use graphcx::checks::{contraction_square, hairy_square, hairy_window, linf_relations, HairyWindow};
use graphcx::examples::{
    expected_product_shapes, product_sphere_enumerate, sphere_comparison, SphereSide, SphereWindow, TreeWindow,
};
use graphcx::format::{parse_mc, write_basis, write_mc, AlgebraRegistry};
use graphcx::hairy::{z_punctured_product, z_sphere, HairyCtx, MCElement};
use graphcx::linalg::cohomology::{
    boundary_matrix, cohomology as compute_cohomology, composite_boundaries_vanish, configuration_space_betti,
    slices, CohomologyTable, KontsevichWindow, RankMethod, Window,
};
use graphcx::linalg::enumerate::{enumerate_cell, Cell};
use graphcx::linalg::rank::rank;
use graphcx::linf::{l_k, linf_relation_by_brackets, mc_check_in, TruncationParams};
use graphcx::{Error, Graph, LinCombo, Parity, Q};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{HairyArgs, Mode, Resolved, Run, Status};

type Outcome = Result<Status, Error>;

/// Prints the report and copies it to `<out>/<name>` when an output
/// directory is configured.
fn emit(run: &Run, name: &str, report: &str) -> Result<(), Error> {
    print!("{report}");
    if let Some(dir) = &run.out {
        save(&dir.join(name), report)?;
    }
    Ok(())
}

fn save(path: &Path, text: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::Invalid(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn load_z(reg: &AlgebraRegistry, path: &Path) -> Result<MCElement, Error> {
    parse_mc(&read(path)?, reg).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn hairy_ctx(reg: &AlgebraRegistry, n: i32, h: &HairyArgs) -> Result<HairyCtx, Error> {
    let mut ctx = HairyCtx::new(n, reg.get(&h.hair_alg)?);
    if let Some(name) = &h.deco_alg {
        ctx = ctx.with_decorations(reg.get(name)?);
    }
    if let Some(path) = &h.z {
        let z = load_z(reg, path)?;
        if z.n != n {
            return Err(Error::Invalid(format!("{} is an element for n = {}, not {n}", path.display(), z.n)));
        }
        ctx = ctx.with_z(z);
    }
    Ok(ctx)
}

fn kontsevich_graphs(parity: Parity, r: usize, max_internal: usize, max_edges: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for v in 0..=max_internal {
        for e in 0..=max_edges {
            out.extend(enumerate_cell(&Cell::kontsevich(parity, r, v, e)));
        }
    }
    out
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Verification
    }
}

#[allow(clippy::too_many_arguments)]
pub fn basis(
    run: &Run,
    reg: &AlgebraRegistry,
    mode: Mode,
    n: i32,
    externals: usize,
    degree: Option<i32>,
    b: Resolved,
    h: &HairyArgs,
    output: Option<PathBuf>,
) -> Outcome {
    let (max_edges, max_internal) = (b.max_edges.unwrap_or(6), b.max_internal.unwrap_or(3));
    let (graphs, deco, hair) = match mode {
        Mode::Kontsevich => {
            let gs = kontsevich_graphs(Parity::of(n), externals, max_internal, max_edges);
            let gs: Vec<Graph> = match degree {
                None => gs,
                Some(k) => gs
                    .into_iter()
                    .filter(|g| graphcx::graph::degree(g, n, None, None).is_ok_and(|d| d == k))
                    .collect(),
            };
            (gs, None, None)
        }
        Mode::Hairy => {
            let ctx = hairy_ctx(reg, n, h)?;
            let w = HairyWindow {
                max_edges,
                max_internal,
                max_hairs: b.max_hairs.unwrap_or(max_edges),
                max_decorations: b.max_decorations.unwrap_or(2),
            };
            let mut gs = Vec::new();
            for g in hairy_window(&ctx, w) {
                if degree.is_none() || Some(ctx.degree(&g)?) == degree {
                    gs.push(g);
                }
            }
            (gs, ctx.deco_alg.clone(), Some(ctx.hair_alg.clone()))
        }
    };
    let text = write_basis(&graphs, deco.as_ref(), hair.as_ref())?;
    match output {
        Some(p) => {
            save(&p, &text)?;
            eprintln!("{} graphs written to {}", graphs.len(), p.display());
        }
        None => print!("{text}"),
    }
    if let Some(dir) = &run.out {
        save(&dir.join("basis.txt"), &text)?;
    }
    Ok(Status::Ok)
}

pub fn dsq(run: &Run, reg: &AlgebraRegistry, mode: Mode, n: i32, externals: usize, b: Resolved, h: &HairyArgs) -> Outcome {
    let (max_edges, max_internal) = (b.max_edges.unwrap_or(6), b.max_internal.unwrap_or(3));
    let mut report = String::new();
    let mut ok;
    match mode {
        Mode::Kontsevich => {
            let gs = kontsevich_graphs(Parity::of(n), externals, max_internal, max_edges);
            let s = contraction_square(&gs)?;
            ok = s.passed();
            report += &s.render(&format!("d^2, n={n} r={externals} internal<={max_internal} edges<={max_edges}"));
            if run.oracle {
                // the same identity as a product of boundary matrices, slice by slice
                let w = KontsevichWindow::new(n, externals, max_internal, max_edges);
                match composite_boundaries_vanish(&w) {
                    Ok(k) => writeln!(report, "oracle: {k} composite boundary matrices vanish").unwrap(),
                    Err(e) => {
                        ok = false;
                        writeln!(report, "ORACLE MISMATCH: {e}").unwrap();
                    }
                }
            }
        }
        Mode::Hairy => {
            let ctx = hairy_ctx(reg, n, h)?;
            let w = HairyWindow {
                max_edges,
                max_internal,
                max_hairs: b.max_hairs.unwrap_or(max_edges),
                max_decorations: b.max_decorations.unwrap_or(2),
            };
            // every part of the differential adds an edge, so larger inputs cannot qualify
            let gs = hairy_window(&ctx, HairyWindow { max_edges: max_edges.saturating_sub(2), ..w });
            let s = hairy_square(&ctx, &gs, max_edges, max_internal)?;
            ok = s.passed();
            report += &s.render(&format!("hairy d^2, n={n} internal<={max_internal} edges<={max_edges}"));
        }
    }
    emit(run, "dsq.txt", &report)?;
    Ok(verdict(ok))
}

fn trusted_everywhere(t: &CohomologyTable) -> bool {
    t.degrees.values().all(|e| e.trusted)
}

/// Boundary ranks are unchanged when rows and columns are listed in a
/// random order.
fn permutation_check(w: &dyn Window, seed: u64) -> Result<Vec<String>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let all = slices(w);
    for s in &all {
        let Some(dst) = all.iter().find(|t| t.sector == s.sector && t.degree == s.degree + w.step()) else {
            continue;
        };
        let m = boundary_matrix(&s.basis, &dst.basis, |g| w.d(g))?;
        let mut rows: Vec<usize> = (0..dst.basis.len()).collect();
        let mut cols: Vec<usize> = (0..s.basis.len()).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        if rank(&m) != rank(&m.permuted(&rows, &cols)) {
            bad.push(format!("sector {} degree {}", s.sector, s.degree));
        }
    }
    Ok(bad)
}

pub fn cohomology(run: &Run, n: i32, r: usize, b: Resolved) -> Outcome {
    let w = KontsevichWindow::new(n, r, b.max_internal.unwrap_or(3), b.max_edges.unwrap_or(6));
    let table = compute_cohomology(&w, RankMethod::Sparse)?;
    let mut report = format!(
        "cohomology of Graphs_{n}({r}), internal<={} edges<={}\n{}",
        w.max_internal,
        w.max_edges,
        table.render()
    );
    let mut ok = true;
    if run.oracle {
        let dense = compute_cohomology(&w, RankMethod::Dense)?;
        if dense != table {
            ok = false;
            report += "ORACLE MISMATCH: dense elimination disagrees\n";
        }
        let betti = configuration_space_betti(n, r);
        for (&k, e) in &table.degrees {
            let want = betti.get(&k).copied().unwrap_or(0) as usize;
            if e.trusted && e.dim != want {
                ok = false;
                writeln!(report, "ORACLE MISMATCH: degree {k} has dimension {}, Betti number {want}", e.dim).unwrap();
            }
        }
        let bad = permutation_check(&w, run.seed)?;
        for b in &bad {
            writeln!(report, "ORACLE MISMATCH: rank changes under permutation at {b}").unwrap();
        }
        ok &= bad.is_empty();
        if ok {
            writeln!(report, "oracle: dense ranks, Betti numbers and permuted ranks (seed {}) agree", run.seed).unwrap();
        }
    }
    emit(run, "cohomology.txt", &report)?;
    if !ok {
        return Ok(Status::Verification);
    }
    if run.strict && !trusted_everywhere(&table) {
        eprintln!("strict: some degrees touch the truncation frontier");
        return Ok(Status::Trust);
    }
    Ok(Status::Ok)
}

/// `sum_k l_k(z, ..., z) / k!` expanded over ordered tuples of members,
/// one bracket call per tuple.
fn curvature_by_tuples(ctx: &HairyCtx, z: &LinCombo, t: &TruncationParams) -> Result<BTreeMap<i32, LinCombo>, Error> {
    let members: Vec<(&Graph, &Q)> = z.iter().collect();
    let min_edges = members.iter().map(|(g, _)| g.n_edges()).min().unwrap_or(1).max(1);
    let mut total = LinCombo::new();
    let mut fact = Q::from_integer(1.into());
    let mut k = 1;
    while !members.is_empty() && k * min_edges <= t.max_edges {
        fact *= Q::from_integer((k as i64).into());
        let mut idx = vec![0usize; k];
        'tuples: loop {
            let gs: Vec<Graph> = idx.iter().map(|&i| members[i].0.clone()).collect();
            let c = idx.iter().fold(Q::from_integer(1.into()), |a, &i| a * members[i].1) / &fact;
            total.add_scaled(&l_k(ctx, &gs)?, &c);
            for p in 0..k {
                idx[p] += 1;
                if idx[p] < members.len() {
                    continue 'tuples;
                }
                idx[p] = 0;
            }
            break;
        }
        k += 1;
    }
    let mut out: BTreeMap<i32, LinCombo> = BTreeMap::new();
    for (g, c) in t.truncate(&total, ctx.deco_alg.as_ref()).iter() {
        out.entry(ctx.degree(g)?).or_default().add_scaled(&LinCombo::single(g)?, c);
    }
    out.retain(|_, x| !x.is_zero());
    Ok(out)
}

pub fn mc_check(run: &Run, reg: &AlgebraRegistry, path: &Path, b: Resolved) -> Outcome {
    let z = load_z(reg, path)?;
    let mut t = TruncationParams::new(b.max_edges.unwrap_or(4), b.max_internal.unwrap_or(3));
    if let Some(h) = b.max_hairs {
        t = t.with_hairs(h);
    }
    let ctx = HairyCtx::new(z.n, z.algebra.clone());
    let r = mc_check_in(&ctx, &z.value, &t);
    let mut report = format!("mc-check {} (n={}, shifted degree {})\n", path.display(), z.n, z.shifted_degree);
    for l in r.lines() {
        writeln!(report, "{l}").unwrap();
    }
    let mut ok = r.is_empty();
    writeln!(report, "{}", if ok { "curvature vanishes in the window" } else { "nonzero curvature" }).unwrap();
    if run.oracle {
        let mut nonzero = r.residual.clone();
        nonzero.retain(|_, x| !x.is_zero());
        if curvature_by_tuples(&ctx, &z.value, &t)? == nonzero {
            report += "oracle: tuple-by-tuple expansion agrees\n";
        } else {
            ok = false;
            report += "ORACLE MISMATCH: tuple-by-tuple expansion disagrees\n";
        }
    }
    emit(run, "mc-check.txt", &report)?;
    Ok(verdict(ok))
}

pub fn linf_check(run: &Run, reg: &AlgebraRegistry, n: i32, order: usize, b: Resolved, h: &HairyArgs) -> Outcome {
    let ctx = hairy_ctx(reg, n, h)?;
    let w = HairyWindow {
        max_edges: b.max_edges.unwrap_or(4),
        max_internal: b.max_internal.unwrap_or(2),
        max_hairs: b.max_hairs.unwrap_or(2),
        max_decorations: b.max_decorations.unwrap_or(0),
    };
    let gs = hairy_window(&ctx, w);
    let t = TruncationParams::default();
    let mut report = String::new();
    let mut ok = true;
    for k in 1..=order {
        let s = linf_relations(&ctx, &gs, k, &t)?;
        ok &= s.passed();
        report += &s.render(&format!("order {k} over {} graphs", gs.len()));
        if run.oracle {
            let mismatches: usize = graphcx::checks::multisets(gs.len(), k)
                .iter()
                .map(|ix| {
                    let args: Vec<Graph> = ix.iter().map(|&i| gs[i].clone()).collect();
                    let a = graphcx::linf::linf_relation_check(&ctx, &args, &t)?;
                    let b = linf_relation_by_brackets(&ctx, &args, &t)?;
                    Ok(usize::from(a != b))
                })
                .sum::<Result<usize, Error>>()?;
            if mismatches > 0 {
                ok = false;
                writeln!(report, "ORACLE MISMATCH: {mismatches} tuples disagree with the bracket expansion").unwrap();
            } else {
                writeln!(report, "oracle: bracket expansion agrees at order {k}").unwrap();
            }
        }
    }
    emit(run, "linf-check.txt", &report)?;
    Ok(verdict(ok))
}

pub fn s51(run: &Run, n: i32, k: i32, loops: usize, b: Resolved) -> Outcome {
    let t = TruncationParams::new(b.max_edges.unwrap_or(6), b.max_internal.unwrap_or(4)).with_loops(loops);
    let r = sphere_comparison(n, k, t)?;
    let mut report = r.render();
    let mut ok = r.chain_isomorphism() && r.vanishes_where_trusted() && r.mc.is_empty();
    if run.oracle {
        let dec = compute_cohomology(&SphereWindow::new(n, k, SphereSide::Decorated, t), RankMethod::Dense)?;
        let hai = compute_cohomology(&SphereWindow::new(n, k, SphereSide::Haired, t), RankMethod::Dense)?;
        if dec == r.decorated && hai == r.haired {
            report += "oracle: dense elimination agrees on both sides\n";
        } else {
            ok = false;
            report += "ORACLE MISMATCH: dense elimination disagrees\n";
        }
    }
    emit(run, "s51.txt", &report)?;
    if let Some(dir) = &run.out {
        save(&dir.join("z51.hg"), &write_mc(&z_sphere(n))?)?;
    }
    if !ok {
        return Ok(Status::Verification);
    }
    if run.strict && (!r.warnings.is_empty() || !trusted_everywhere(&r.decorated)) {
        eprintln!("strict: warnings or untrusted degrees in the report");
        return Ok(Status::Trust);
    }
    Ok(Status::Ok)
}

pub fn s52(run: &Run, d: i32, k: i32, b: Resolved) -> Outcome {
    let mut w = TreeWindow::default();
    w.max_edges = b.max_edges.unwrap_or(w.max_edges);
    w.max_internal = b.max_internal.unwrap_or(w.max_internal);
    w.max_decorations = b.max_decorations.unwrap_or(w.max_decorations);
    let r = product_sphere_enumerate(d, k, w)?;
    let mut report = r.render(&GradedAlgebra::sphere(k), &GradedAlgebra::punctured_sphere_product(d));
    let mut ok = r.minimal_degree_violations.is_empty() && r.steps.iter().all(|s| s.sound);
    if run.oracle {
        if r.shape_graphs() == expected_product_shapes(d, k) {
            report += "oracle: shapes match the hand-built list\n";
        } else {
            ok = false;
            report += "ORACLE MISMATCH: shapes differ from the hand-built list\n";
        }
    }
    emit(run, "s52.txt", &report)?;
    if let Some(dir) = &run.out {
        save(&dir.join("z52.hg"), &write_mc(&z_punctured_product(d))?)?;
    }
    Ok(verdict(ok))
}
