use ippmm::kkt::{assemble, factorize, factorize_with, pcg_normal, LdlBackend, PivotRule};
use ippmm::{CscMatrix, StandardQP};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_sparse(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-2.0..2.0) } else { 0.0 })
                .collect()
        })
        .collect()
}

/// PSD `Q = M^T M` with a random sparsity pattern in `M`.
fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> CscMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| if rng.gen_bool(0.3) { rng.gen_range(-1.0..1.0) } else { 0.0 });
    let q = m.transpose() * m;
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| q[(i, j)]).collect()).collect();
    CscMatrix::from_dense_rows(&rows)
}

struct Case {
    qp: StandardQP,
    x: Vec<f64>,
    z: Vec<f64>,
}

fn random_case(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Case {
    random_case_spread(rng, n, m, 2.5)
}

/// `x` and `z` entries are drawn log-uniformly from `10^[-spread, spread]`.
fn random_case_spread(rng: &mut ChaCha8Rng, n: usize, m: usize, spread: f64) -> Case {
    let a = CscMatrix::from_dense_rows(&random_sparse(rng, m, n, 0.5));
    let q = if rng.gen_bool(0.5) { random_psd(rng, n) } else { CscMatrix::zeros(n, n) };
    let free: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.2)).collect();
    let qp = StandardQP::new(a, q, vec![0.0; m], vec![0.0; n], free).unwrap();
    let x = (0..n).map(|_| 10f64.powf(rng.gen_range(-spread..spread))).collect();
    let z = (0..n).map(|_| 10f64.powf(rng.gen_range(-spread..spread))).collect();
    Case { qp, x, z }
}

fn dense(rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

#[test]
fn inertia_matches_dense_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..60 {
        let (n, m) = if trial == 0 { (5, 3) } else { (rng.gen_range(1..12), rng.gen_range(1..8)) };
        let case = random_case(&mut rng, n, m);
        let reg = if trial % 2 == 0 { 1e-8 } else { 1e-2 };
        let sys = assemble(&case.qp, &case.x, &case.z, reg, reg).unwrap();
        let f = factorize(&sys, PivotRule::regularized(reg)).unwrap();
        let eig = dense(&sys.to_dense()).symmetric_eigenvalues();
        let pos = eig.iter().filter(|&&v| v > 0.0).count();
        let neg = eig.iter().filter(|&&v| v < 0.0).count();
        let inertia = f.inertia();
        assert_eq!((inertia.positive, inertia.negative, inertia.zero), (pos, neg, 0), "trial {trial}");
        assert_eq!((pos, neg), (m, n), "trial {trial}");
    }
}

#[test]
fn factors_reconstruct_the_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..40 {
        let (n, m) = (rng.gen_range(1..10), rng.gen_range(1..6));
        let case = random_case(&mut rng, n, m);
        let sys = assemble(&case.qp, &case.x, &case.z, 1e-6, 1e-6).unwrap();
        for backend in [LdlBackend::Sparse, LdlBackend::Dense] {
            let f = factorize_with(&sys, PivotRule::regularized(1e-6), backend).unwrap();
            let dim = sys.dim();
            let l = DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { f.l_entry(i, j) });
            let d = DMatrix::from_diagonal(&DVector::from_column_slice(f.d()));
            let ldl = &l * d * l.transpose();
            let k = dense(&sys.to_dense());
            let perm = f.perm();
            let mut err = 0.0f64;
            for i in 0..dim {
                for j in 0..dim {
                    err = err.max((ldl[(i, j)] - k[(perm[i], perm[j])]).abs());
                }
            }
            assert!(err <= 1e-10 * sys.max_abs().max(1.0), "trial {trial} {backend:?}: {err:e}");
        }
    }
}

#[test]
fn solve_residual_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..100 {
        let (n, m) = (rng.gen_range(1..15), rng.gen_range(1..10));
        // Keeps cond(K) within what refinement in double precision can fix.
        let case = random_case_spread(&mut rng, n, m, 1.5);
        let reg = 10f64.powf(rng.gen_range(-8.0..0.0));
        let sys = assemble(&case.qp, &case.x, &case.z, reg, reg).unwrap();
        let f = factorize(&sys, PivotRule::regularized(reg)).unwrap();
        let rhs: Vec<f64> = (0..sys.dim()).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let u = f.solve(&rhs);
        let ku = sys.mul_vec(&u);
        let res: f64 = ku.iter().zip(&rhs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(res <= 1e-8 * (1.0 + rhs_norm), "trial {trial}: {res:e}");
    }
}

#[test]
fn sparse_and_dense_backends_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let (n, m) = (rng.gen_range(2..12), rng.gen_range(1..8));
        let case = random_case(&mut rng, n, m);
        let sys = assemble(&case.qp, &case.x, &case.z, 1e-4, 1e-4).unwrap();
        let rhs: Vec<f64> = (0..sys.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = factorize_with(&sys, PivotRule::regularized(1e-4), LdlBackend::Sparse).unwrap().solve(&rhs);
        let b = factorize_with(&sys, PivotRule::regularized(1e-4), LdlBackend::Dense).unwrap().solve(&rhs);
        let scale = a.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() <= 1e-8 * scale, "{u} vs {v}");
        }
    }
}

#[test]
fn pcg_matches_dense_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for trial in 0..60 {
        let (m, n) = if trial == 0 { (5, 8) } else { (rng.gen_range(1..50), rng.gen_range(1..50)) };
        let rows = random_sparse(&mut rng, m, n, 0.3);
        let a = CscMatrix::from_dense_rows(&rows);
        let rhs: Vec<f64> = (0..m).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let out = pcg_normal(&a, 8.0, &rhs, 1e-10, 10 * m + 10);
        assert!(out.converged, "trial {trial}");

        let ad = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
        let normal = &ad * ad.transpose() + DMatrix::identity(m, m) * 8.0;
        let w = normal.lu().solve(&DVector::from_vec(rhs.clone())).unwrap();
        let err = (DVector::from_vec(out.solution) - &w).norm();
        assert!(err <= 1e-8 * w.norm().max(1.0), "trial {trial}: {err:e}");
    }
}
