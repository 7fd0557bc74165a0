//! Identities of the hairy differential and its brackets on exhaustive
//! small windows, plus relabelling invariance on random inputs.

use graphcx::algebra::GradedAlgebra;
use graphcx::checks::{hairy_window, multisets, HairyWindow};
use graphcx::hairy::{
    delta_algebra, delta_join, delta_split, twisted_d, twisted_d_combo, z_punctured_product, z_sphere, HairyCtx,
};
use graphcx::linf::{l2_symmetry_defect, l_k_std, linf_relation_by_brackets, linf_relation_check, TruncationParams};
use graphcx::{Graph, LinCombo, Q};
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Without decorations the window must be larger to hold enough graphs.
fn plain() -> HairyWindow {
    HairyWindow { max_edges: 7, max_internal: 4, max_hairs: 5, max_decorations: 0 }
}

fn small() -> HairyWindow {
    HairyWindow { max_edges: 5, max_internal: 3, max_hairs: 4, max_decorations: 2 }
}

fn square(gs: &[Graph], d: impl Fn(&Graph) -> LinCombo) -> usize {
    for g in gs {
        let twice = d(g).map(|h| d(h));
        assert!(twice.is_zero(), "{g} -> {twice}");
    }
    gs.len()
}

#[test]
fn split_alone_squares_to_zero() {
    let ctx = HairyCtx::new(3, GradedAlgebra::sphere(3));
    let gs = hairy_window(&ctx, plain());
    assert!(square(&gs, |g| delta_split(&ctx, g).unwrap()) > 50);
}

#[test]
fn split_plus_join_squares_to_zero() {
    for n in [3, 4] {
        let ctx = HairyCtx::new(n, GradedAlgebra::sphere(3));
        let gs = hairy_window(&ctx, plain());
        let d = |g: &Graph| {
            let mut x = delta_split(&ctx, g).unwrap();
            x.add(&delta_join(&ctx, g).unwrap());
            x
        };
        assert!(square(&gs, d) > 50);
    }
}

#[test]
fn algebra_differential_enters_the_square() {
    let ctx = HairyCtx::new(3, GradedAlgebra::koszul_pair());
    let gs = hairy_window(&ctx, HairyWindow { max_decorations: 0, ..small() });
    assert!(gs.iter().any(|g| !delta_algebra(&ctx, g).unwrap().is_zero()));
    assert!(square(&gs, |g| twisted_d(&ctx, g).unwrap()) > 20);
}

#[test]
fn product_twist_squares_to_zero() {
    let ctx = HairyCtx::new(6, GradedAlgebra::sphere(3)).with_z(z_punctured_product(3));
    let gs = hairy_window(&ctx, HairyWindow { max_edges: 4, max_internal: 2, max_hairs: 3, max_decorations: 2 });
    assert!(square(&gs, |g| twisted_d(&ctx, g).unwrap()) > 20);
}

#[test]
fn even_sphere_twist_squares_to_zero_modulo_tadpoles() {
    for n in [4, 6] {
        let ctx = HairyCtx::new(n, GradedAlgebra::sphere(3)).with_z(z_sphere(n)).without_tadpoles();
        let gs = hairy_window(&ctx, HairyWindow { max_decorations: 3, ..small() });
        assert!(gs.iter().all(|g| !g.has_tadpole()));
        assert!(square(&gs, |g| twisted_d(&ctx, g).unwrap()) > 150);
    }
}

#[test]
fn brackets_agree_with_their_expansion() {
    let ctx = HairyCtx::new(3, GradedAlgebra::sphere(3)).with_z(z_sphere(3));
    let w = HairyWindow { max_edges: 4, max_internal: 2, max_hairs: 2, max_decorations: 1 };
    let gs = hairy_window(&ctx, w);
    let t = TruncationParams::default();
    for k in 1..=3 {
        for ix in multisets(gs.len(), k) {
            let args: Vec<Graph> = ix.iter().map(|&i| gs[i].clone()).collect();
            let a = linf_relation_check(&ctx, &args, &t).unwrap();
            let b = linf_relation_by_brackets(&ctx, &args, &t).unwrap();
            assert_eq!(a, b, "{args:?}");
            assert!(a.is_zero());
        }
    }
}

#[test]
fn two_brackets_are_graded_symmetric() {
    let ctx = HairyCtx::new(3, GradedAlgebra::sphere(3)).with_z(z_sphere(3));
    let gs = hairy_window(&ctx, HairyWindow { max_edges: 4, max_internal: 2, max_hairs: 3, max_decorations: 1 });
    for (i, a) in gs.iter().enumerate() {
        for b in &gs[i..] {
            assert!(l2_symmetry_defect(&ctx, a, b).unwrap().is_zero(), "{a} {b}");
        }
    }
}

#[test]
fn untwisted_brackets_add_exactly_one_edge() {
    let ctx = HairyCtx::new(3, GradedAlgebra::sphere(3));
    let gs = hairy_window(&ctx, HairyWindow { max_edges: 3, max_internal: 1, max_hairs: 3, max_decorations: 0 });
    let mut nonzero = 0;
    for k in 1..=3 {
        for ix in multisets(gs.len(), k) {
            let args: Vec<Graph> = ix.iter().map(|&i| gs[i].clone()).collect();
            let edges: usize = args.iter().map(|g| g.n_edges()).sum();
            let l = l_k_std(&ctx, &args).unwrap();
            nonzero += usize::from(!l.is_zero());
            assert!(l.graphs().all(|h| h.n_edges() == edges + 1), "{args:?}");
        }
    }
    assert!(nonzero > 0);
}

/// The same graph with internal vertices and hairs renamed, edges listed
/// in another order and, in odd parity, some edges reversed.
fn relabel(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let mut hairs: Vec<usize> = (0..g.n_ext).collect();
    let mut ints: Vec<usize> = (g.n_ext..g.n_vertices()).collect();
    hairs.shuffle(rng);
    ints.shuffle(rng);
    let perm: Vec<usize> = hairs.into_iter().chain(ints).collect();
    let mut labels = vec![g.hair_labels[0]; g.n_ext];
    for (old, &l) in g.hair_labels.iter().enumerate() {
        labels[perm[old]] = l;
    }
    let mut out = Graph::hairy(g.parity, labels, g.n_int);
    let mut edges: Vec<(usize, usize)> = g.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    edges.shuffle(rng);
    for (a, b) in edges {
        out = if rng.gen_bool(0.5) { out.with_edge(b, a) } else { out.with_edge(a, b) };
    }
    let mut decos: Vec<_> = g.decos.iter().map(|&(v, s)| (perm[v], s)).collect();
    decos.shuffle(rng);
    for (v, s) in decos {
        out = out.with_deco(v, s);
    }
    out
}

fn ratio(x: &LinCombo, y: &LinCombo) -> Option<Q> {
    let (g, c) = y.iter().next()?;
    Some(x.coeff(g) / c)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn differential_commutes_with_relabelling(pick in 0usize..10_000, seed in any::<u64>()) {
        let ctx = HairyCtx::new(3, GradedAlgebra::sphere(3)).with_z(z_sphere(3));
        let gs = hairy_window(&ctx, HairyWindow { max_edges: 4, max_internal: 2, max_hairs: 3, max_decorations: 2 });
        let gs: Vec<&Graph> = gs.iter().filter(|g| g.n_ext > 0).collect();
        let g = gs[pick % gs.len()];
        let h = relabel(g, &mut ChaCha8Rng::seed_from_u64(seed));
        let (xg, xh) = (LinCombo::single(g).unwrap(), LinCombo::single(&h).unwrap());
        let s = ratio(&xh, &xg).unwrap();
        prop_assert!(s == Q::from_integer(1.into()) || s == Q::from_integer((-1).into()));
        prop_assert_eq!(xh, xg.scaled(&s));
        let dg = twisted_d(&ctx, g).unwrap();
        let dh = twisted_d(&ctx, &h).unwrap();
        prop_assert_eq!(dh, dg.scaled(&s));
    }

    #[test]
    fn differential_lowers_degree_by_one(pick in 0usize..10_000) {
        let ctx = HairyCtx::new(3, GradedAlgebra::sphere(3)).with_z(z_sphere(3));
        let gs = hairy_window(&ctx, small());
        let g = &gs[pick % gs.len()];
        let k = ctx.degree(g).unwrap();
        let d = twisted_d_combo(&ctx, &LinCombo::single(g).unwrap());
        for (h, c) in d.iter() {
            prop_assert!(!c.is_zero());
            prop_assert_eq!(ctx.degree(h).unwrap(), k - 1);
        }
    }
}
