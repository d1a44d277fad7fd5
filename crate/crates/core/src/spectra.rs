//! Dense eigencomputations and the matrix predicates every other module
//! builds on: eigenvalue extremes of symmetric matrices, spectral abscissa,
//! weighted log seminorms, LMI residual checks, Hurwitz/Schur/Metzler tests
//! and diagonal Lyapunov weights for Metzler matrices.

use nalgebra::{Complex, DMatrix, DVector, Schur, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative threshold below which an eigenvalue counts as zero.
pub const RANK_TOL: f64 = 1e-10;
/// Relative slack for positive-semidefiniteness and LMI checks.
pub const TOL_PSD: f64 = 1e-8;
/// Relative slack for symmetry of weight matrices.
pub const TOL_SYM: f64 = 1e-8;
/// Relative slack for kernel invariance `‖P·A·v‖ ≤ tol·‖P‖·‖A‖·‖v‖`.
pub const TOL_INV: f64 = 1e-8;
/// Margin for the strict Hurwitz/Schur predicates.
pub const TOL_STRICT: f64 = 0.0;

const EIG_EPS: f64 = f64::EPSILON;
const EIG_MAX_ITER: usize = 100_000;

/// Eigenvalue extremes of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Smallest eigenvalue strictly above `rank_tol·max(1, λ_max)`. Equal to
    /// `lambda_max` when no eigenvalue clears the threshold.
    pub lambda_min_nonzero: f64,
    /// Number of eigenvalues with magnitude at or below the rank threshold.
    pub nullity: usize,
}

/// Ascending eigen-decomposition of a symmetrized matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: DVector<f64>,
    /// Orthonormal eigenvectors, one column per entry of `values`.
    pub vectors: DMatrix<f64>,
}

pub(crate) fn ensure_finite(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} has non-finite entries")))
    }
}

pub(crate) fn ensure_square(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// `(M + Mᵀ)/2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Eigen-decomposition of `(M + Mᵀ)/2`, sorted ascending.
pub fn sym_eigen(m: &DMatrix<f64>) -> Result<SymEigen> {
    ensure_square(m, "matrix")?;
    ensure_finite(m, "matrix")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(SymEigen {
            values: DVector::zeros(0),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(symmetrize(m), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::Computation("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok(SymEigen { values, vectors })
}

fn zero_threshold(values: &DVector<f64>, rank_tol: f64) -> f64 {
    let scale = values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    rank_tol * scale
}

/// Eigenvalue extremes of the symmetrized input.
///
/// `lambda_min_nonzero` is the smallest eigenvalue strictly above
/// `rank_tol·max(1, max|λ|)`; for positive-semidefinite input the scale is
/// `max(1, λ_max)`.
pub fn sym_eigen_bounds(m: &DMatrix<f64>, rank_tol: f64) -> Result<SymBounds> {
    let eig = sym_eigen(m)?;
    let values = &eig.values;
    if values.is_empty() {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let thr = zero_threshold(values, rank_tol);
    let lambda_min = values[0];
    let lambda_max = values[values.len() - 1];
    let lambda_min_nonzero = values.iter().cloned().find(|&v| v > thr).unwrap_or(lambda_max);
    let nullity = values.iter().filter(|v| v.abs() <= thr).count();
    Ok(SymBounds {
        lambda_min,
        lambda_max,
        lambda_min_nonzero,
        nullity,
    })
}

/// Orthonormal basis of `range(A)` together with the nonzero eigenvalues of
/// `AAᵀ` (ascending).
#[derive(Debug, Clone)]
pub struct RangeBasis {
    /// `m × r` with orthonormal columns.
    pub basis: DMatrix<f64>,
    /// The `r` eigenvalues of `AAᵀ` above the rank threshold.
    pub gram_eigenvalues: Vec<f64>,
}

impl RangeBasis {
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthogonal projector `V·Vᵀ` onto the range.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }
}

/// Range basis of an `m × n` matrix from the smaller of its two Gram matrices.
///
/// When `m ≤ n` the basis is the eigenvectors of `AAᵀ` above the rank
/// threshold; otherwise it is `A·w/√λ` for eigenpairs of `AᵀA`,
/// re-orthonormalized by a thin QR.
pub fn range_basis(a: &DMatrix<f64>, rank_tol: f64) -> Result<RangeBasis> {
    ensure_finite(a, "constraint matrix")?;
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("constraint matrix is empty".into()));
    }
    if m <= n {
        let eig = sym_eigen(&(a * a.transpose()))?;
        let thr = zero_threshold(&eig.values, rank_tol);
        let keep: Vec<usize> = (0..m).filter(|&i| eig.values[i] > thr).collect();
        let mut basis = DMatrix::zeros(m, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            basis.set_column(k, &eig.vectors.column(i));
        }
        let gram_eigenvalues = keep.iter().map(|&i| eig.values[i]).collect();
        Ok(RangeBasis {
            basis,
            gram_eigenvalues,
        })
    } else {
        let eig = sym_eigen(&(a.transpose() * a))?;
        let thr = zero_threshold(&eig.values, rank_tol);
        let keep: Vec<usize> = (0..n).filter(|&i| eig.values[i] > thr).collect();
        let mut raw = DMatrix::zeros(m, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            let col = a * eig.vectors.column(i) / eig.values[i].sqrt();
            raw.set_column(k, &col);
        }
        let basis = if keep.is_empty() {
            raw
        } else {
            raw.qr().q()
        };
        let gram_eigenvalues = keep.iter().map(|&i| eig.values[i]).collect();
        Ok(RangeBasis {
            basis,
            gram_eigenvalues,
        })
    }
}

/// All eigenvalues of a general square matrix, from a real Schur form.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    ensure_square(m, "matrix")?;
    ensure_finite(m, "matrix")?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::Computation("Schur decomposition did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().cloned().collect())
}

/// Largest real part over the spectrum.
pub fn spectral_abscissa(m: &DMatrix<f64>) -> Result<f64> {
    let ev = eigenvalues(m)?;
    ev.iter()
        .map(|z| z.re)
        .reduce(f64::max)
        .ok_or_else(|| Error::InvalidInput("empty matrix".into()))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    let ev = eigenvalues(m)?;
    ev.iter()
        .map(|z| z.norm())
        .reduce(f64::max)
        .ok_or_else(|| Error::InvalidInput("empty matrix".into()))
}

/// `α(M) < −TOL_STRICT`.
pub fn is_hurwitz(m: &DMatrix<f64>) -> Result<bool> {
    Ok(spectral_abscissa(m)? < -TOL_STRICT)
}

/// `ρ(M) < 1 − TOL_STRICT`.
pub fn is_schur(m: &DMatrix<f64>) -> Result<bool> {
    Ok(spectral_radius(m)? < 1.0 - TOL_STRICT)
}

/// All off-diagonal entries are nonnegative.
pub fn is_metzler(m: &DMatrix<f64>) -> bool {
    m.is_square()
        && (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] >= 0.0))
}

/// Euclidean seminorm `‖R·x‖` with weight `P = RᵀR ⪰ 0`.
#[derive(Debug, Clone)]
pub struct WeightedSeminorm {
    weight: DMatrix<f64>,
    root: DMatrix<f64>,
    kernel_basis: DMatrix<f64>,
    range_basis: DMatrix<f64>,
    range_eigenvalues: DVector<f64>,
}

impl WeightedSeminorm {
    /// Validates symmetry and positive semidefiniteness of `weight` and
    /// splits its eigenspaces into range and kernel.
    pub fn new(weight: DMatrix<f64>) -> Result<Self> {
        ensure_square(&weight, "weight")?;
        ensure_finite(&weight, "weight")?;
        let d = weight.nrows();
        if d == 0 {
            return Err(Error::InvalidInput("weight matrix is empty".into()));
        }
        let scale = spectral_norm(&weight).max(1.0);
        let asym = (&weight - weight.transpose()).amax();
        if asym > TOL_SYM * scale {
            return Err(Error::InvalidInput(format!(
                "weight is not symmetric (max asymmetry {asym:e})"
            )));
        }
        let eig = sym_eigen(&weight)?;
        if eig.values[0] < -TOL_PSD * scale {
            return Err(Error::InvalidInput(format!(
                "weight is not positive semidefinite (λ_min = {:e})",
                eig.values[0]
            )));
        }
        let thr = zero_threshold(&eig.values, RANK_TOL);
        let kernel: Vec<usize> = (0..d).filter(|&i| eig.values[i] <= thr).collect();
        let range: Vec<usize> = (0..d).filter(|&i| eig.values[i] > thr).collect();

        let mut kernel_basis = DMatrix::zeros(d, kernel.len());
        for (k, &i) in kernel.iter().enumerate() {
            kernel_basis.set_column(k, &eig.vectors.column(i));
        }
        let mut range_basis = DMatrix::zeros(d, range.len());
        let mut root = DMatrix::zeros(range.len(), d);
        for (k, &i) in range.iter().enumerate() {
            let v = eig.vectors.column(i);
            range_basis.set_column(k, &v);
            root.set_row(k, &(v.transpose() * eig.values[i].sqrt()));
        }
        let range_eigenvalues = DVector::from_iterator(range.len(), range.iter().map(|&i| eig.values[i]));
        Ok(Self {
            weight: symmetrize(&weight),
            root,
            kernel_basis,
            range_basis,
            range_eigenvalues,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(DMatrix::identity(d, d)).expect("identity is a valid weight")
    }

    pub fn weight(&self) -> &DMatrix<f64> {
        &self.weight
    }

    /// `R` with `P = RᵀR`; its rows span `range(P)`.
    pub fn root(&self) -> &DMatrix<f64> {
        &self.root
    }

    /// Orthonormal basis of `ker(P)`, one column per kernel direction.
    pub fn kernel_basis(&self) -> &DMatrix<f64> {
        &self.kernel_basis
    }

    /// Orthonormal basis of `range(P)`.
    pub fn range_basis(&self) -> &DMatrix<f64> {
        &self.range_basis
    }

    pub fn dim(&self) -> usize {
        self.weight.nrows()
    }

    pub fn rank(&self) -> usize {
        self.range_basis.ncols()
    }

    pub fn norm(&self, v: &DVector<f64>) -> f64 {
        (&self.root * v).norm()
    }

    pub fn distance(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.norm(&(x - y))
    }

    /// Largest relative residual `‖P·A·v‖ / (‖P‖·‖A‖)` over the kernel basis.
    pub fn kernel_invariance_residual(&self, a: &DMatrix<f64>) -> f64 {
        let scale = (spectral_norm(&self.weight) * spectral_norm(a)).max(f64::MIN_POSITIVE);
        self.kernel_basis
            .column_iter()
            .map(|v| (&self.weight * (a * v)).norm() / (scale * v.norm()))
            .fold(0.0, f64::max)
    }
}

/// Log seminorm `μ_{2,R}(A)`: the smallest `c` with `PA + AᵀP ⪯ 2cP` on
/// `range(P)`, computed as half the top eigenvalue of the whitened pencil
/// `(Vᵀ(PA + AᵀP)V, VᵀPV)`.
pub fn log_seminorm_weighted(a: &DMatrix<f64>, sn: &WeightedSeminorm) -> Result<f64> {
    ensure_square(a, "matrix")?;
    ensure_finite(a, "matrix")?;
    if a.nrows() != sn.dim() {
        return Err(Error::InvalidInput(format!(
            "matrix is {}x{} but seminorm acts on dimension {}",
            a.nrows(),
            a.ncols(),
            sn.dim()
        )));
    }
    let residual = sn.kernel_invariance_residual(a);
    if residual > TOL_INV {
        return Err(Error::Precondition(format!(
            "kernel of the weight is not invariant (relative residual {residual:e})"
        )));
    }
    if sn.rank() == 0 {
        return Err(Error::Computation("weight has trivial range; pencil is singular".into()));
    }
    let p = sn.weight();
    let v = sn.range_basis();
    let sym = p * a + a.transpose() * p;
    let lhs = v.transpose() * sym * v;
    let inv_sqrt: DVector<f64> = sn.range_eigenvalues.map(|x| 1.0 / x.sqrt());
    let whitened = DMatrix::from_fn(lhs.nrows(), lhs.ncols(), |i, j| {
        lhs[(i, j)] * inv_sqrt[i] * inv_sqrt[j]
    });
    let eig = sym_eigen(&whitened)?;
    Ok(0.5 * eig.values[eig.values.len() - 1])
}

/// Result of an LMI residual check `SᵀP + PS + 2cP ⪯ tol·scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmiCheck {
    pub holds: bool,
    /// Largest eigenvalue of `SᵀP + PS + 2cP`.
    pub worst_eigenvalue: f64,
    /// `max(1, ‖P‖·‖S‖)`.
    pub scale: f64,
}

pub fn check_lmi(s: &DMatrix<f64>, sn: &WeightedSeminorm, c: f64, tol: f64) -> Result<LmiCheck> {
    ensure_square(s, "matrix")?;
    if s.nrows() != sn.dim() {
        return Err(Error::InvalidInput(format!(
            "matrix dimension {} does not match weight dimension {}",
            s.nrows(),
            sn.dim()
        )));
    }
    let p = sn.weight();
    let residual = s.transpose() * p + p * s + p * (2.0 * c);
    let eig = sym_eigen(&residual)?;
    let worst = eig.values[eig.values.len() - 1];
    let scale = (spectral_norm(p) * spectral_norm(s)).max(1.0);
    Ok(LmiCheck {
        holds: worst <= tol * scale,
        worst_eigenvalue: worst,
        scale,
    })
}

/// `λ_max(Mᵀ·diag(p) + diag(p)·M)`.
pub fn lyapunov_residual_max(m: &DMatrix<f64>, p: &DVector<f64>) -> Result<f64> {
    ensure_square(m, "matrix")?;
    if p.len() != m.nrows() {
        return Err(Error::InvalidInput("weight length does not match matrix".into()));
    }
    let dp = DMatrix::from_diagonal(p);
    let eig = sym_eigen(&(m.transpose() * &dp + &dp * m))?;
    Ok(eig.values[eig.values.len() - 1])
}

/// Positive diagonal weights `p` making `Mᵀ·diag(p) + diag(p)·M` negative
/// definite, for a Metzler Hurwitz `M`.
///
/// With `ξ = −M⁻¹·1` and `η = −M⁻ᵀ·1` (both strictly positive because
/// `−M⁻¹` is nonnegative and nonsingular) the weights are `p_i = η_i/ξ_i`,
/// normalized to `max p = 1`. The result is checked before it is returned.
pub fn diagonal_lyapunov_weights(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    ensure_square(m, "matrix")?;
    ensure_finite(m, "matrix")?;
    if !is_metzler(m) {
        return Err(Error::Precondition("matrix is not Metzler".into()));
    }
    if !is_hurwitz(m)? {
        return Err(Error::Precondition("matrix is not Hurwitz".into()));
    }
    let n = m.nrows();
    let rhs = DVector::from_element(n, -1.0);
    let right = m
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Computation("Metzler matrix is singular".into()))?;
    let left = m
        .transpose()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Computation("Metzler matrix is singular".into()))?;
    if right.iter().chain(left.iter()).any(|&x| !(x > 0.0)) {
        return Err(Error::Computation(
            "Perron-type vectors lost positivity; matrix too close to the stability boundary".into(),
        ));
    }
    let mut p = left.component_div(&right);
    let pmax = p.max();
    p /= pmax;
    let worst = lyapunov_residual_max(m, &p)?;
    if !(worst < 0.0) {
        return Err(Error::Computation(format!(
            "diagonal Lyapunov residual is not negative definite (λ_max = {worst:e})"
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn bounds_of_identity_and_rank_one() {
        let b = sym_eigen_bounds(&DMatrix::identity(2, 2), 1e-10).unwrap();
        assert_eq!((b.lambda_min, b.lambda_max, b.lambda_min_nonzero), (1.0, 1.0, 1.0));
        let b = sym_eigen_bounds(&dmatrix![1.0, 1.0; 1.0, 1.0], 1e-10).unwrap();
        assert!(b.lambda_min.abs() < 1e-14);
        assert!((b.lambda_max - 2.0).abs() < 1e-14);
        assert!((b.lambda_min_nonzero - 2.0).abs() < 1e-14);
        assert_eq!(b.nullity, 1);
    }

    #[test]
    fn bounds_of_path_laplacian() {
        let l = dmatrix![1.0, -1.0, 0.0; -1.0, 2.0, -1.0; 0.0, -1.0, 1.0];
        let b = sym_eigen_bounds(&l, 1e-10).unwrap();
        assert!(b.lambda_min.abs() < 1e-12);
        assert!((b.lambda_max - 3.0).abs() < 1e-12);
        assert!((b.lambda_min_nonzero - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let m = dmatrix![1.0, f64::NAN; 0.0, 1.0];
        assert!(matches!(sym_eigen_bounds(&m, 1e-10), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn abscissa_examples() {
        assert!((spectral_abscissa(&(-DMatrix::identity(2, 2))).unwrap() + 1.0).abs() < 1e-14);
        assert!(spectral_abscissa(&dmatrix![0.0, 1.0; -1.0, 0.0]).unwrap().abs() < 1e-14);
        assert!((spectral_abscissa(&dmatrix![-1.0, -1.0; 1.0, 0.0]).unwrap() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn log_seminorm_examples() {
        let id = WeightedSeminorm::identity(2);
        let v = log_seminorm_weighted(&(-DMatrix::identity(2, 2)), &id).unwrap();
        assert!((v + 1.0).abs() < 1e-14);
        let skew = dmatrix![0.0, 2.0; -2.0, 0.0];
        assert!(log_seminorm_weighted(&skew, &id).unwrap().abs() < 1e-14);

        let sn = WeightedSeminorm::new(dmatrix![1.0, 0.0; 0.0, 0.0]).unwrap();
        assert_eq!(sn.rank(), 1);
        let v = log_seminorm_weighted(&dmatrix![-1.0, 0.0; 0.0, -3.0], &sn).unwrap();
        assert!((v + 1.0).abs() < 1e-14);
    }

    #[test]
    fn log_seminorm_rejects_non_invariant_kernel() {
        let sn = WeightedSeminorm::new(dmatrix![1.0, 0.0; 0.0, 0.0]).unwrap();
        // Maps the kernel direction e2 onto e1.
        let a = dmatrix![-1.0, 1.0; 0.0, -1.0];
        assert!(matches!(log_seminorm_weighted(&a, &sn), Err(Error::Precondition(_))));
    }

    #[test]
    fn weight_must_be_psd_and_symmetric() {
        assert!(WeightedSeminorm::new(dmatrix![1.0, 0.0; 0.0, -1.0]).is_err());
        assert!(WeightedSeminorm::new(dmatrix![1.0, 0.5; 0.0, 1.0]).is_err());
    }

    #[test]
    fn lmi_equality_and_violation() {
        let s = -DMatrix::identity(2, 2);
        let id = WeightedSeminorm::identity(2);
        let ok = check_lmi(&s, &id, 1.0, TOL_PSD).unwrap();
        assert!(ok.holds);
        assert!(ok.worst_eigenvalue.abs() < 1e-15);
        assert!(!check_lmi(&s, &id, 1.5, TOL_PSD).unwrap().holds);
    }

    #[test]
    fn matrix_class_predicates() {
        assert!(is_hurwitz(&dmatrix![-1.0, 0.5; 0.5, -1.0]).unwrap());
        assert!(is_schur(&dmatrix![0.0, 0.5; 0.5, 0.0]).unwrap());
        assert!(!is_metzler(&dmatrix![-1.0, -0.1; 0.2, -1.0]));
        assert!(is_metzler(&dmatrix![-1.0, 0.0; 0.2, -1.0]));
        assert!(!is_hurwitz(&dmatrix![0.0, 1.0; -1.0, 0.0]).unwrap());
    }

    #[test]
    fn lyapunov_weight_examples() {
        for m in [
            -DMatrix::identity(2, 2),
            dmatrix![-1.0, 0.5; 0.5, -1.0],
            dmatrix![-2.0, 1.0; 0.5, -1.0],
        ] {
            let p = diagonal_lyapunov_weights(&m).unwrap();
            assert!(p.iter().all(|&x| x > 0.0));
            assert!(lyapunov_residual_max(&m, &p).unwrap() < 0.0);
        }
        let p = diagonal_lyapunov_weights(&dmatrix![-1.0, 0.5; 0.5, -1.0]).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-14 && (p[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lyapunov_weights_check_preconditions() {
        let not_metzler = dmatrix![-1.0, -0.1; 0.2, -1.0];
        assert!(matches!(diagonal_lyapunov_weights(&not_metzler), Err(Error::Precondition(_))));
        let unstable = dmatrix![-1.0, 2.0; 2.0, -1.0];
        assert!(matches!(diagonal_lyapunov_weights(&unstable), Err(Error::Precondition(_))));
    }

    #[test]
    fn range_basis_via_either_gram() {
        let tall = dmatrix![1.0, 0.0; 1.0, 0.0; 0.0, 2.0; 0.0, 0.0];
        let rb = range_basis(&tall, RANK_TOL).unwrap();
        assert_eq!(rb.rank(), 2);
        let vtv = rb.basis.transpose() * &rb.basis;
        assert!((vtv - DMatrix::identity(2, 2)).amax() < 1e-14);
        let proj = rb.projector();
        assert!((&proj * &tall - &tall).amax() < 1e-13);

        let wide = tall.transpose();
        let rb = range_basis(&wide, RANK_TOL).unwrap();
        assert_eq!(rb.rank(), 2);
        assert!((rb.gram_eigenvalues[0] - 2.0).abs() < 1e-13);
        assert!((rb.gram_eigenvalues[1] - 4.0).abs() < 1e-13);
    }
}
