//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semicontract::graphs::Graph;
use semicontract::saddle::SaddleProblem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| uniform(rng, lo, hi))
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| uniform(rng, lo, hi))
}

/// Cyclic Jacobi eigenvalue iteration for symmetric matrices, ascending.
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = (m + m.transpose()) * 0.5;
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off.sqrt() <= 1e-15 * a.norm().max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Primal part of the minimum-norm solution of
/// `[H Aᵀ; A 0][x; λ] = [−g; b]`, unique when `H ≻ 0` and `b ∈ img(A)`.
pub fn kkt_primal(h: &DMatrix<f64>, g: &DVector<f64>, a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let (n, m) = (h.nrows(), a.nrows());
    let mut k = DMatrix::zeros(n + m, n + m);
    k.view_mut((0, 0), (n, n)).copy_from(h);
    k.view_mut((0, n), (n, m)).copy_from(&a.transpose());
    k.view_mut((n, 0), (m, n)).copy_from(a);
    let mut rhs = DVector::zeros(n + m);
    rhs.rows_mut(0, n).copy_from(&(-g));
    rhs.rows_mut(n, m).copy_from(b);
    let svd = k.svd(true, true);
    let tol = 1e-10 * svd.singular_values.max();
    let sol = svd.solve(&rhs, tol).expect("svd has both factors");
    sol.rows(0, n).into_owned()
}

/// `n × n` matrix with `λ_min((Q+Qᵀ)/2) ≥ floor`: a random SPD part plus
/// a random skew part.
pub fn strongly_monotone(rng: &mut ChaCha8Rng, n: usize, floor: f64, skew: f64) -> DMatrix<f64> {
    let b = random_matrix(rng, n, n, -1.0, 1.0);
    let spd = &b * b.transpose() + DMatrix::identity(n, n) * floor;
    let w = random_matrix(rng, n, n, -skew, skew);
    spd + (&w - w.transpose()) * 0.5
}

/// `m × n` matrix of rank at most `r`.
pub fn low_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> DMatrix<f64> {
    random_matrix(rng, m, r, -1.0, 1.0) * random_matrix(rng, r, n, -1.0, 1.0)
}

/// `m × n` matrix of rank `r` with nonzero singular values in `[lo, hi]`.
pub fn conditioned(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    let u = random_matrix(rng, m, r, -1.0, 1.0).qr().q();
    let v = random_matrix(rng, n, r, -1.0, 1.0).qr().q();
    let sigma = DMatrix::from_diagonal(&random_vector(rng, r, lo, hi));
    u * sigma * v.transpose()
}

/// Random saddle problem of the shape used by the certificate property
/// suites; roughly a third of the constraint matrices are rank deficient.
pub fn random_saddle(rng: &mut ChaCha8Rng) -> SaddleProblem {
    let n = rng.random_range(2..=12);
    let m = rng.random_range(1..=12);
    let skew = rng.random_range(0.0..3.0);
    let q = strongly_monotone(rng, n, 0.1, skew);
    let full = m.min(n);
    let a = match rng.random_range(0..3) {
        0 if full > 1 => {
            let r = rng.random_range(1..full);
            low_rank(rng, m, n, r)
        }
        1 if m > 1 => {
            let mut a = random_matrix(rng, m, n, -2.0, 2.0);
            let row = a.row(0).into_owned();
            a.set_row(m - 1, &(row * 2.0));
            a
        }
        _ => random_matrix(rng, m, n, -2.0, 2.0),
    };
    let tau = [0.01, 0.1, 1.0, 10.0][rng.random_range(0..4)];
    SaddleProblem::new(q, a, tau).expect("generated problem is valid")
}

/// G(n, p) without connectivity enforcement.
pub fn raw_gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Greedily pairs each eigenvalue of `a` with its nearest
/// unused counterpart; returns the largest pairing distance.
pub fn multiset_distance(a: &[nalgebra::Complex<f64>], b: &[nalgebra::Complex<f64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|l, r| l.1.total_cmp(&r.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}
