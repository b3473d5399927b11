use robin_core::ball_spectrum::{lambda1_ball, lambda2_ball, BallSpec, RobinParameter};
use robin_core::fem::{
    antisymmetry_defect, assemble, lambda2_cluster, solve_lowest, Axis, DiscreteOperator, ElementOrder, SpectrumResult,
    DENSE_LIMIT,
};
use robin_core::geometry::{make_star_domain, triangulate, ModeMap, StarDomain2D, TriMesh};
use robin_core::quadrature::{fixed, gauss_legendre};

fn disk_mesh(h: f64) -> TriMesh {
    triangulate(&StarDomain2D::disk(1.0).unwrap(), h).unwrap()
}

fn cos4_mesh(eps: f64, h: f64) -> TriMesh {
    triangulate(&make_star_domain(1.0, eps, &ModeMap::from([(4, 1.0)]), true).unwrap(), h).unwrap()
}

fn odd_mesh(h: f64) -> TriMesh {
    let d = StarDomain2D::new(1.0, 0.08, ModeMap::from([(3, 1.0), (4, 0.5)]), ModeMap::from([(5, 0.4)]), false).unwrap();
    triangulate(&d, h).unwrap()
}

fn lowest(op: &DiscreteOperator, m: usize) -> SpectrumResult {
    solve_lowest(op, m, 1e-8).unwrap()
}

/// Length of the boundary made of quadratic edges through the stored midpoints.
fn curved_perimeter(mesh: &TriMesh) -> f64 {
    let rule = gauss_legendre(20);
    mesh.boundary_edges
        .iter()
        .zip(&mesh.boundary_midpoints)
        .map(|(&[a, b], &m)| {
            let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
            let speed = |s: f64| {
                let d = |k: usize| pa[k] * (4.0 * s - 3.0) + 4.0 * m[k] * (1.0 - 2.0 * s) + pb[k] * (4.0 * s - 1.0);
                d(0).hypot(d(1))
            };
            fixed(&speed, 0.0, 1.0, &rule)
        })
        .sum()
}

#[test]
fn constant_function_quadratic_forms() {
    let alpha = -0.37;
    for mesh in [cos4_mesh(0.1, 0.1), odd_mesh(0.1)] {
        let lin = assemble(&mesh, RobinParameter(alpha), ElementOrder::Linear).unwrap();
        let one = vec![1.0; lin.dof_count];
        assert!((lin.a.bilinear(&one, &one) - alpha * mesh.perimeter()).abs() <= 1e-12);
        assert!((lin.m.bilinear(&one, &one) - mesh.polygon_area()).abs() <= 1e-12);

        let quad = assemble(&mesh, RobinParameter(alpha), ElementOrder::Quadratic).unwrap();
        let one = vec![1.0; quad.dof_count];
        assert!((quad.a.bilinear(&one, &one) - alpha * curved_perimeter(&mesh)).abs() <= 1e-12);
        assert!((quad.m.bilinear(&one, &one) - mesh.curved_area()).abs() <= 1e-12);
        assert!(quad.stiffness().mul_vec(&one).iter().all(|x| x.abs() < 1e-12));
    }
}

#[test]
fn operators_are_exactly_symmetric() {
    for order in [ElementOrder::Linear, ElementOrder::Quadratic] {
        let op = assemble(&odd_mesh(0.1), RobinParameter(-0.5), order).unwrap();
        assert_eq!(op.a.asymmetry(), 0.0);
        assert_eq!(op.m.asymmetry(), 0.0);
    }
}

#[test]
fn neumann_kernel() {
    for order in [ElementOrder::Linear, ElementOrder::Quadratic] {
        let op = assemble(&cos4_mesh(0.1, 0.1), RobinParameter(0.0), order).unwrap();
        let res = lowest(&op, 3);
        assert!(res.eigenvalues[0].abs() <= 1e-9, "{order:?}: {}", res.eigenvalues[0]);
        assert!(res.eigenvalues[1] > 1.0);
    }
}

#[test]
fn disk_spectrum_structure() {
    let alpha = RobinParameter(-0.5);
    let unit = BallSpec::unit(2).unwrap();
    for (h, order) in [(0.1, ElementOrder::Quadratic), (0.05, ElementOrder::Quadratic), (0.05, ElementOrder::Linear)] {
        let op = assemble(&disk_mesh(h), alpha, order).unwrap();
        let res = lowest(&op, 4);
        let ev = &res.eigenvalues;
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        assert!(ev[0] < 0.0 && ev[1] > 0.0);
        assert!((ev[2] - ev[1]) / ev[1] <= 1e-3);
        assert_eq!(lambda2_cluster(ev).unwrap(), 1..3);
        assert!(res.residuals.iter().all(|&r| r <= 1e-8));
        for i in 0..4 {
            for j in 0..4 {
                let g = op.m.bilinear(&res.eigenvectors[i], &res.eigenvectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() <= 1e-8, "M-Gram ({i}, {j}) = {g}");
            }
        }
        let l1 = lambda1_ball(unit, alpha).unwrap();
        let l2 = lambda2_ball(unit, alpha).unwrap();
        let tol = if order == ElementOrder::Linear { 2e-3 } else { 1e-5 };
        assert!((ev[0] - l1).abs() / l1.abs() <= tol && (ev[1] - l2).abs() / l2 <= tol);
    }
}

#[test]
fn both_solver_paths_agree() {
    // the same P1 problem just below and above the dense limit
    let small = disk_mesh(0.1);
    let op = assemble(&small, RobinParameter(-0.5), ElementOrder::Linear).unwrap();
    assert!(op.dof_count <= DENSE_LIMIT);
    let quad = assemble(&small, RobinParameter(-0.5), ElementOrder::Quadratic).unwrap();
    assert!(quad.dof_count > DENSE_LIMIT);
    let exact = lambda2_ball(BallSpec::unit(2).unwrap(), RobinParameter(-0.5)).unwrap();
    let d = lowest(&op, 4).eigenvalues[1];
    let k = lowest(&quad, 4).eigenvalues[1];
    assert!((d - exact).abs() / exact < 1e-2);
    assert!((k - exact).abs() / exact < 1e-5);
}

#[test]
fn scaling_by_two() {
    let mesh = odd_mesh(0.08);
    for order in [ElementOrder::Linear, ElementOrder::Quadratic] {
        let base = solve_lowest(&assemble(&mesh, RobinParameter(-0.6), order).unwrap(), 3, 1e-10).unwrap();
        let big = solve_lowest(&assemble(&mesh.scaled(2.0), RobinParameter(-0.3), order).unwrap(), 3, 1e-10).unwrap();
        for k in 0..3 {
            let rel = (big.eigenvalues[k] - base.eigenvalues[k] / 4.0).abs() / base.eigenvalues[k].abs();
            assert!(rel <= 1e-6, "{order:?} k {k}: {rel}");
        }
    }
}

#[test]
fn p1_refinement_is_monotone() {
    let alpha = RobinParameter(-0.5);
    let values: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&h| lowest(&assemble(&disk_mesh(h), alpha, ElementOrder::Linear).unwrap(), 3).eigenvalues[1])
        .collect();
    for w in values.windows(2) {
        assert!(w[1] <= w[0] + 1e-10, "{values:?}");
    }
}

#[test]
fn convergence_orders() {
    let alpha = RobinParameter(-0.5);
    let exact = lambda2_ball(BallSpec::unit(2).unwrap(), alpha).unwrap();
    let orders = |order: ElementOrder, hs: &[f64]| -> Vec<f64> {
        let err: Vec<f64> = hs
            .iter()
            .map(|&h| (lowest(&assemble(&disk_mesh(h), alpha, order).unwrap(), 3).eigenvalues[1] - exact).abs())
            .collect();
        err.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
    };
    for p in orders(ElementOrder::Linear, &[0.08, 0.04, 0.02, 0.01]) {
        assert!((1.7..=2.3).contains(&p), "P1 order {p}");
    }
    for p in orders(ElementOrder::Quadratic, &[0.2, 0.1, 0.05, 0.025]) {
        assert!((3.4..=4.6).contains(&p), "P2 order {p}");
    }
}

#[test]
fn antisymmetry_of_disk_and_symmetric_domain() {
    for mesh in [disk_mesh(0.08), cos4_mesh(0.05, 0.08)] {
        let op = assemble(&mesh, RobinParameter(-0.5), ElementOrder::Quadratic).unwrap();
        let res = solve_lowest(&op, 5, 1e-9).unwrap();
        let dx = antisymmetry_defect(&res, &op, Axis::X).unwrap();
        let dy = antisymmetry_defect(&res, &op, Axis::Y).unwrap();
        assert!(dx.min(dy) <= 1e-4, "defects {dx} {dy}");
    }
    let op = assemble(&disk_mesh(0.08), RobinParameter(-0.5), ElementOrder::Quadratic).unwrap();
    let res = solve_lowest(&op, 5, 1e-9).unwrap();
    assert!(antisymmetry_defect(&res, &op, Axis::X).unwrap() <= 1e-6);
    assert!(antisymmetry_defect(&res, &op, Axis::Y).unwrap() <= 1e-6);
}

#[test]
fn even_vector_has_defect_two() {
    let op = assemble(&disk_mesh(0.1), RobinParameter(-0.5), ElementOrder::Linear).unwrap();
    let res = lowest(&op, 4);
    let perm = &op.reflections().unwrap().flip_x;
    let v = &res.eigenvectors[1];
    let mut even: Vec<f64> = (0..v.len()).map(|i| 0.5 * (v[i] + v[perm[i]])).collect();
    if op.m.bilinear(&even, &even) < 1e-6 {
        let w = &res.eigenvectors[2];
        even = (0..w.len()).map(|i| 0.5 * (w[i] + w[perm[i]])).collect();
    }
    let norm = op.m.bilinear(&even, &even).sqrt();
    even.iter_mut().for_each(|x| *x /= norm);
    let fake = SpectrumResult {
        eigenvalues: vec![res.eigenvalues[0], res.eigenvalues[1], 2.0 * res.eigenvalues[3]],
        eigenvectors: vec![res.eigenvectors[0].clone(), even, res.eigenvectors[3].clone()],
        residuals: vec![0.0; 3],
    };
    let d = antisymmetry_defect(&fake, &op, Axis::X).unwrap();
    assert!((d - 2.0).abs() <= 1e-10, "{d}");
}

#[test]
fn defect_requires_symmetric_mesh_and_clear_cluster() {
    let op = assemble(&odd_mesh(0.1), RobinParameter(-0.5), ElementOrder::Linear).unwrap();
    let res = lowest(&op, 4);
    assert!(antisymmetry_defect(&res, &op, Axis::X).is_err());
    assert!(lambda2_cluster(&[1.0, 1.0000001, 2.0]).is_err());
    assert!(lambda2_cluster(&[0.0, 1.0, 1.0000001]).is_err());
    assert_eq!(lambda2_cluster(&[-1.0, 1.0, 1.0000001, 3.0]).unwrap(), 1..3);
}

#[test]
fn solver_arguments_and_determinism() {
    let op = assemble(&cos4_mesh(0.1, 0.05), RobinParameter(-0.5), ElementOrder::Quadratic).unwrap();
    assert!(op.dof_count > DENSE_LIMIT);
    assert!(solve_lowest(&op, 0, 1e-8).is_err());
    assert!(solve_lowest(&op, op.dof_count + 1, 1e-8).is_err());
    assert!(solve_lowest(&op, 3, 0.0).is_err());
    let a = lowest(&op, 4);
    let b = lowest(&op, 4);
    assert_eq!(a, b);
    assert!(ElementOrder::try_from(3u8).is_err());
    assert_eq!(ElementOrder::try_from(2u8).unwrap(), ElementOrder::Quadratic);
}
