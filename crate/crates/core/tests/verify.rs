use spiralforge_core::bent::BentSurface;
use spiralforge_core::grid::CylinderGrid;
use spiralforge_core::helicoid::{kernel_fn, Which};
use spiralforge_core::verify::*;
use spiralforge_core::{Mat3, SpiralSpec, Vec3};

fn surface(delta: f64, ell: f64, n_s: usize, n_theta: usize) -> BentSurface {
    let spec = SpiralSpec::frenet(1.0, 0.0, delta, 1.0).unwrap();
    BentSurface::new(&spec, ell, n_s, n_theta).unwrap()
}

#[test]
fn exact_surface_is_self_similar() {
    let surf = surface(1e-2, 32.0, 64, 16);
    let zero = vec![0.0; surf.grid.len()];
    assert!(check_self_similarity(&surf, &zero, SimilarityAxis::Spiral).unwrap() <= 1e-10);
    let f = surf.grid.sample(|s, t| 0.01 * s.tanh() * (1.0 + t.cos()));
    assert!(check_self_similarity(&surf, &f, SimilarityAxis::Spiral).unwrap() <= 1e-10);
}

#[test]
fn misaligned_similarity_is_detected() {
    let surf = surface(1e-2, 32.0, 64, 16);
    let zero = vec![0.0; surf.grid.len()];
    assert!(check_self_similarity(&surf, &zero, SimilarityAxis::LiteralZ).unwrap() > 1e-2);
}

#[test]
fn non_frenet_generator_still_has_its_own_similarity() {
    let r = Mat3::cross_matrix(Vec3::new(0.3, -0.8, 0.5));
    let spec = SpiralSpec::new(r, 1e-2, 0.6).unwrap();
    let surf = BentSurface::new(&spec, 20.0, 32, 8).unwrap();
    let zero = vec![0.0; surf.grid.len()];
    assert!(check_self_similarity(&surf, &zero, SimilarityAxis::Spiral).unwrap() <= 1e-10);
    assert!(check_self_similarity(&surf, &zero, SimilarityAxis::LiteralZ).unwrap() > 1e-2);
}

#[test]
fn figure_eight_cylinder_is_flagged() {
    let pts = figure_eight_points(24, 32);
    let rep = sampled_collisions(&pts, 24, 32, true, 4096, 10_000, 0);
    let ((r1, c1), (r2, c2)) = rep.counterexample.expect("crossing must be found");
    assert!((pts[r1 * 32 + c1] - pts[r2 * 32 + c2]).norm() < 1e-9 + 0.5 * (2.0 / 23.0));
    assert!(rep.min_ratio < COLLISION_FRACTION);
}

#[test]
fn round_cylinder_has_no_collision() {
    let (rows, cols) = (24, 32);
    let mut pts = vec![];
    for r in 0..rows {
        for c in 0..cols {
            let t = 2.0 * std::f64::consts::PI * c as f64 / cols as f64;
            pts.push(Vec3::new(t.cos(), t.sin(), r as f64 * 0.2));
        }
    }
    let rep = sampled_collisions(&pts, rows, cols, true, 4096, 10_000, 3);
    assert!(rep.counterexample.is_none());
    assert!(rep.pairs_tested > 10_000);
}

#[test]
fn embedded_verdicts_follow_the_bound() {
    // inside the analytic bound
    let surf = surface(1e-2, 32.0, 64, 16);
    let zero = vec![0.0; surf.grid.len()];
    let chk = check_embedded(&surf, &zero, true, 10_000, 3, 0).unwrap();
    assert!(chk.max_embed_ell.unwrap() > 32.0);
    assert_eq!(chk.verdict, EmbedVerdict::Certified);
    assert!(chk.sampled.counterexample.is_none());
    // an unconverged solve is never certified by the formula alone
    assert_eq!(check_embedded(&surf, &zero, false, 1000, 1, 0).unwrap().verdict, EmbedVerdict::SampledOk);

    // twice the bound: no certificate
    let bound = chk.max_embed_ell.unwrap();
    let big = surface(1e-2, 2.0 * bound, 64, 16);
    let zero = vec![0.0; big.grid.len()];
    let chk = check_embedded(&big, &zero, true, 10_000, 3, 0).unwrap();
    assert_ne!(chk.verdict, EmbedVerdict::Certified);
}

#[test]
fn weighted_norm_examples() {
    let g = CylinderGrid::new(6.0, 512, 16).unwrap();
    let u = g.sample(|s, _| s.cosh().powf(0.75));
    assert!((weighted_norm(&g, &u, 0.75, 0).unwrap() - 1.0).abs() < 1e-12);
    let kx = g.sample(|s, t| kernel_fn(Which::X, s, t));
    assert!((weighted_norm(&g, &kx, 0.75, 0).unwrap() - 1.0).abs() < 1e-12);
    let n0 = weighted_norm(&g, &kx, 0.75, 0).unwrap();
    let n1 = weighted_norm(&g, &kx, 0.75, 1).unwrap();
    let n2 = weighted_norm(&g, &kx, 0.75, 2).unwrap();
    assert!(n0 <= n1 && n1 <= n2);
    assert!(weighted_norm(&g, &kx, 0.75, 3).is_err());
}

#[test]
fn interpolant_reproduces_grid_values() {
    let g = CylinderGrid::new(3.0, 64, 16).unwrap();
    let u = g.sample(|s, t| s.sin() * (1.0 + (3.0 * t).cos()));
    let it = GridInterpolant::new(&g, &u).unwrap();
    for j in [0usize, 1, 31, 32, 63, 64] {
        for k in [0usize, 5, 15] {
            assert!((it.eval(g.s[j], g.theta[k]) - u[g.idx(j, k)]).abs() < 1e-13);
        }
    }
    // off-node accuracy of the cubic/trigonometric interpolant
    let exact = |s: f64, t: f64| s.sin() * (1.0 + (3.0 * t).cos());
    assert!((it.eval(0.123, 0.777) - exact(0.123, 0.777)).abs() < 1e-5);
}

#[test]
fn mesh_counts_orientation_and_curvature_column() {
    let surf = surface(1e-2, 32.0, 64, 16);
    let f = surf.u0_grid();
    let q = surf.q_total(&f).unwrap();
    let mesh = build_mesh(&surf, &f, &q, 64, 64, 0, 1).unwrap();
    assert_eq!(mesh.vertices.len(), 4096);
    assert_eq!(mesh.faces.len(), 2 * 63 * 63);
    assert!(mesh.faces.iter().flatten().all(|&i| i < mesh.vertices.len()));
    // every interior edge is shared by exactly two faces with opposite direction
    let mut edges = std::collections::HashMap::new();
    for f in &mesh.faces {
        for e in 0..3 {
            *edges.entry((f[e], f[(e + 1) % 3])).or_insert(0) += 1;
        }
    }
    assert!(edges.values().all(|&c| c == 1));
    let interior = edges.keys().filter(|(a, b)| edges.contains_key(&(*b, *a))).count();
    assert!(interior > 0);

    // at grid resolution the |H| column equals |Q|/(e^{δξθ}cosh²s)
    let g = &surf.grid;
    let mesh = build_mesh(&surf, &f, &q, g.rows(), g.n_theta + 1, 0, 1).unwrap();
    let dxi = surf.delta_xi;
    for j in 0..g.rows() {
        for k in 0..g.n_theta {
            let v = j * (g.n_theta + 1) + k;
            let expect = q[g.idx(j, k)].abs() / ((dxi * g.theta[k]).exp() * g.s[j].cosh().powi(2));
            assert!((mesh.h_abs[v] - expect).abs() <= 1e-12 * expect.max(1.0));
            assert!((mesh.u[v] - f[g.idx(j, k)]).abs() < 1e-13);
        }
    }
}

#[test]
fn two_period_mesh_is_the_similarity_image_of_the_first() {
    let surf = surface(1e-2, 32.0, 64, 16);
    let spec = surf.spec.clone().unwrap();
    let f = surf.u0_grid();
    let q = surf.q_total(&f).unwrap();
    let mesh = build_mesh(&surf, &f, &q, 20, 21, 0, 2).unwrap();
    let n = 20 * 21;
    let rot = spec.similarity_rotation();
    let dil = (2.0 * std::f64::consts::PI * spec.delta * spec.xi).exp();
    for i in 0..n {
        let img = rot.apply(mesh.vertices[i]).scale(dil);
        assert!((mesh.vertices[n + i] - img).norm() <= 1e-9 * img.norm().max(1.0));
    }
}
