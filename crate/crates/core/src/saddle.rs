//! Saddle matrices `S = [-Q, -Aᵀ; τ⁻¹A, 0]` and their semicontraction
//! certificates.
//!
//! Every certificate uses the weight
//!
//! ```text
//!     P = [ I_n   αAᵀ  ]
//!         [ αA    τΠ_A ]
//! ```
//!
//! where `Π_A` projects onto `img(A)`, and the rate `c = ½·τ⁻¹·α·a_min`. The
//! three constructions differ only in how `α` is chosen. `P` is singular
//! exactly when `A` has dependent rows (redundant constraints); its kernel is
//! `{(0, y) : Aᵀy = 0}` and `S` maps it to zero.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::{
    check_lmi, ensure_finite, ensure_square, range_basis, spectral_abscissa, spectral_norm,
    sym_eigen, RangeBasis, WeightedSeminorm, RANK_TOL, TOL_PSD,
};

/// The data `(Q, A, τ)` of a saddle matrix.
#[derive(Debug, Clone)]
pub struct SaddleProblem {
    q: DMatrix<f64>,
    a: DMatrix<f64>,
    tau: f64,
}

impl SaddleProblem {
    /// Requires `Q` square with `λ_min((Q+Qᵀ)/2) > 0`, `A` nonzero with as many
    /// columns as `Q`, and `τ > 0`.
    pub fn new(q: DMatrix<f64>, a: DMatrix<f64>, tau: f64) -> Result<Self> {
        ensure_square(&q, "Q")?;
        ensure_finite(&q, "Q")?;
        ensure_finite(&a, "A")?;
        if q.nrows() == 0 || a.nrows() == 0 {
            return Err(Error::InvalidInput("Q and A must be nonempty".into()));
        }
        if a.ncols() != q.nrows() {
            return Err(Error::InvalidInput(format!(
                "A has {} columns but Q is {}x{}",
                a.ncols(),
                q.nrows(),
                q.nrows()
            )));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidInput(format!("tau must be positive, got {tau}")));
        }
        if a.amax() == 0.0 {
            return Err(Error::InvalidInput("A must be nonzero".into()));
        }
        let q_min = sym_eigen(&q)?.values[0];
        if !(q_min > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Q not strongly monotone: λ_min((Q+Qᵀ)/2) = {q_min:e}"
            )));
        }
        Ok(Self { q, a, tau })
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn primal_dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn dual_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn dim(&self) -> usize {
        self.primal_dim() + self.dual_dim()
    }

    /// `[-Q, -Aᵀ; τ⁻¹A, 0]`.
    pub fn saddle_matrix(&self) -> DMatrix<f64> {
        let (n, m) = (self.primal_dim(), self.dual_dim());
        let mut s = DMatrix::zeros(n + m, n + m);
        s.view_mut((0, 0), (n, n)).copy_from(&(-&self.q));
        s.view_mut((0, n), (n, m)).copy_from(&(-self.a.transpose()));
        s.view_mut((n, 0), (m, n)).copy_from(&(&self.a / self.tau));
        s
    }

    pub fn spectral_bounds(&self) -> Result<SpectralBounds> {
        SpectralBounds::of(self)
    }

    /// Saddle matrix restricted to the complement of its structural kernel:
    /// `[-Q, -AᵀV; τ⁻¹VᵀA, 0]` with `V` an orthonormal basis of `img(A)`.
    pub fn deflated_matrix(&self) -> Result<DMatrix<f64>> {
        let range = range_basis(&self.a, RANK_TOL)?;
        Ok(self.deflated_with(&range))
    }

    fn deflated_with(&self, range: &RangeBasis) -> DMatrix<f64> {
        let n = self.primal_dim();
        let r = range.rank();
        let va = range.basis.transpose() * &self.a;
        let mut s = DMatrix::zeros(n + r, n + r);
        s.view_mut((0, 0), (n, n)).copy_from(&(-&self.q));
        s.view_mut((0, n), (n, r)).copy_from(&(-va.transpose()));
        s.view_mut((n, 0), (r, n)).copy_from(&(va / self.tau));
        s
    }

    /// Spectral abscissa of [`Self::deflated_matrix`]: the dominant
    /// eigenvalue once the `m − rank(A)` structural zero modes are removed.
    pub fn deflated_abscissa(&self) -> Result<f64> {
        spectral_abscissa(&self.deflated_matrix()?)
    }
}

/// Curvature and constraint bounds extracted from a [`SaddleProblem`].
#[derive(Debug, Clone)]
pub struct SpectralBounds {
    /// `λ_min((Q+Qᵀ)/2)`.
    pub q_min: f64,
    /// `σ_max(Q)²/q_min`.
    pub q_max: f64,
    /// Smallest nonzero eigenvalue of `AAᵀ`.
    pub a_min: f64,
    /// Largest eigenvalue of `AAᵀ`.
    pub a_max: f64,
    /// Orthogonal projector onto `img(A)`.
    pub pi_a: DMatrix<f64>,
    pub range: RangeBasis,
}

impl SpectralBounds {
    pub fn of(prob: &SaddleProblem) -> Result<Self> {
        let q_min = sym_eigen(&prob.q)?.values[0];
        if !(q_min > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Q not strongly monotone: λ_min((Q+Qᵀ)/2) = {q_min:e}"
            )));
        }
        let sigma = spectral_norm(&prob.q);
        let range = range_basis(&prob.a, RANK_TOL)?;
        let (a_min, a_max) = match (range.gram_eigenvalues.first(), range.gram_eigenvalues.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Err(Error::InvalidInput("A has numerically zero rank".into())),
        };
        Ok(Self {
            q_min,
            q_max: sigma * sigma / q_min,
            a_min,
            a_max,
            pi_a: range.projector(),
            range,
        })
    }

    /// Same bounds with the curvature constants replaced. Valid whenever
    /// `q_min·I ⪯ (Q+Qᵀ)/2` and `QᵀQ ⪯ q_max·(Q+Qᵀ)/2`; for a symmetric
    /// Hessian with `μI ⪯ Q ⪯ ℓI` that is `(μ, ℓ)`, sharper than
    /// `σ_max²/q_min`.
    pub fn with_curvature(mut self, q_min: f64, q_max: f64) -> Self {
        self.q_min = q_min;
        self.q_max = q_max;
        self
    }
}

/// Which rule produced the coupling `α` of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "variant")]
pub enum CertificateVariant {
    /// `α = ½ min{1/q_max, τ q_min/a_max}`.
    QuarterRate,
    /// `α = min{ε/q_max, (2−ε)/3 · τ q_min/a_max}` with `0 < ε < 2`.
    SmallTau { epsilon: f64 },
    /// `α = min{β₁, τ q_min/a_min}` with `β₁` the smaller root of
    /// `2 − α(q_max + 3τ⁻¹a_max/q_min) + τ⁻¹α²a_min = 0`.
    SharpRate,
}

impl fmt::Display for CertificateVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateVariant::QuarterRate => write!(f, "quarter-rate"),
            CertificateVariant::SmallTau { epsilon } => write!(f, "small-tau (eps = {epsilon})"),
            CertificateVariant::SharpRate => write!(f, "sharp-rate"),
        }
    }
}

/// A weight `P`, coupling `α` and rate `c` with `SᵀP + PS ⪯ −2cP`.
#[derive(Debug, Clone)]
pub struct ContractionCertificate {
    pub weight: WeightedSeminorm,
    pub alpha: f64,
    pub rate: f64,
    pub variant: CertificateVariant,
}

/// Numerical checks of a certificate against its problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lmi_ok: bool,
    pub psd_ok: bool,
    pub kernel_invariant_ok: bool,
    /// `λ_max(SᵀP + PS + 2cP)`.
    pub lmi_worst_eigenvalue: f64,
    /// `max(1, ‖P‖·‖S‖)`, the scale the LMI tolerance is relative to.
    pub lmi_scale: f64,
    /// `λ_min(P)`.
    pub weight_min_eigenvalue: f64,
    /// Relative residual `max ‖P·S·v‖/(‖P‖‖S‖)` over the kernel basis.
    pub kernel_residual: f64,
    pub kernel_dim: usize,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.lmi_ok && self.psd_ok && self.kernel_invariant_ok
    }
}

/// `[I_n, αAᵀ; αA, τΠ_A]`.
pub fn weight_matrix(prob: &SaddleProblem, bounds: &SpectralBounds, alpha: f64) -> DMatrix<f64> {
    let (n, m) = (prob.primal_dim(), prob.dual_dim());
    let mut p = DMatrix::zeros(n + m, n + m);
    p.view_mut((0, 0), (n, n)).fill_with_identity();
    p.view_mut((0, n), (n, m)).copy_from(&(prob.a.transpose() * alpha));
    p.view_mut((n, 0), (m, n)).copy_from(&(&prob.a * alpha));
    p.view_mut((n, n), (m, m)).copy_from(&(&bounds.pi_a * prob.tau));
    p
}

pub fn quarter_rate_alpha(bounds: &SpectralBounds, tau: f64) -> f64 {
    0.5 * f64::min(1.0 / bounds.q_max, tau * bounds.q_min / bounds.a_max)
}

/// The `ε` that balances both arguments of the small-τ minimum, which
/// maximizes `α`.
pub fn default_small_tau_epsilon(bounds: &SpectralBounds, tau: f64) -> f64 {
    let qq = tau * bounds.q_min * bounds.q_max;
    2.0 * qq / (3.0 * bounds.a_max + qq)
}

pub fn small_tau_alpha(bounds: &SpectralBounds, tau: f64, epsilon: f64) -> f64 {
    f64::min(
        epsilon / bounds.q_max,
        (2.0 - epsilon) / 3.0 * tau * bounds.q_min / bounds.a_max,
    )
}

/// Both roots `β₁ < β₂` of `τ⁻¹a_min·α² − (q_max + 3τ⁻¹a_max/q_min)·α + 2 = 0`.
pub fn sharp_rate_roots(bounds: &SpectralBounds, tau: f64) -> Result<(f64, f64)> {
    let quad = bounds.a_min / tau;
    let lin = -(bounds.q_max + 3.0 * bounds.a_max / (tau * bounds.q_min));
    let constant = 2.0;
    let disc = lin * lin - 4.0 * quad * constant;
    if !(disc >= 0.0) {
        return Err(Error::Verification(format!(
            "sharp-rate quadratic has negative discriminant {disc:e}"
        )));
    }
    // lin < 0, so this is the cancellation-free combination.
    let q = -0.5 * (lin - disc.sqrt());
    let (r1, r2) = (q / quad, constant / q);
    Ok((r1.min(r2), r1.max(r2)))
}

pub fn sharp_rate_alpha(bounds: &SpectralBounds, tau: f64) -> Result<f64> {
    let (beta1, _) = sharp_rate_roots(bounds, tau)?;
    Ok(f64::min(beta1, tau * bounds.q_min / bounds.a_min))
}

/// Builds the certificate for a given `α` and checks it before returning.
pub fn certificate_from_alpha(
    prob: &SaddleProblem,
    bounds: &SpectralBounds,
    alpha: f64,
    variant: CertificateVariant,
) -> Result<ContractionCertificate> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Verification(format!("coupling α = {alpha} is not positive")));
    }
    let weight = WeightedSeminorm::new(weight_matrix(prob, bounds, alpha))
        .map_err(|e| Error::Verification(format!("{variant} weight rejected: {e}")))?;
    let cert = ContractionCertificate {
        weight,
        alpha,
        rate: 0.5 * alpha * bounds.a_min / prob.tau,
        variant,
    };
    let report = verify_certificate(prob, &cert, TOL_PSD)?;
    if !report.all_ok() {
        return Err(Error::Verification(format!(
            "{variant} certificate failed its checks: {report:?}"
        )));
    }
    Ok(cert)
}

pub fn quarter_rate_certificate(prob: &SaddleProblem) -> Result<ContractionCertificate> {
    let bounds = prob.spectral_bounds()?;
    quarter_rate_certificate_with(prob, &bounds)
}

pub fn quarter_rate_certificate_with(
    prob: &SaddleProblem,
    bounds: &SpectralBounds,
) -> Result<ContractionCertificate> {
    let alpha = quarter_rate_alpha(bounds, prob.tau);
    certificate_from_alpha(prob, bounds, alpha, CertificateVariant::QuarterRate)
}

/// Small-τ certificate; `epsilon = None` selects [`default_small_tau_epsilon`].
pub fn small_tau_certificate(
    prob: &SaddleProblem,
    epsilon: Option<f64>,
) -> Result<ContractionCertificate> {
    let bounds = prob.spectral_bounds()?;
    small_tau_certificate_with(prob, &bounds, epsilon)
}

pub fn small_tau_certificate_with(
    prob: &SaddleProblem,
    bounds: &SpectralBounds,
    epsilon: Option<f64>,
) -> Result<ContractionCertificate> {
    let epsilon = epsilon.unwrap_or_else(|| default_small_tau_epsilon(bounds, prob.tau));
    if !(epsilon > 0.0 && epsilon < 2.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 2), got {epsilon}")));
    }
    let alpha = small_tau_alpha(bounds, prob.tau, epsilon);
    certificate_from_alpha(prob, bounds, alpha, CertificateVariant::SmallTau { epsilon })
}

pub fn sharp_rate_certificate(prob: &SaddleProblem) -> Result<ContractionCertificate> {
    let bounds = prob.spectral_bounds()?;
    sharp_rate_certificate_with(prob, &bounds)
}

pub fn sharp_rate_certificate_with(
    prob: &SaddleProblem,
    bounds: &SpectralBounds,
) -> Result<ContractionCertificate> {
    let alpha = sharp_rate_alpha(bounds, prob.tau)?;
    certificate_from_alpha(prob, bounds, alpha, CertificateVariant::SharpRate)
}

/// Runs the LMI, positive-semidefiniteness and kernel-invariance checks.
pub fn verify_certificate(
    prob: &SaddleProblem,
    cert: &ContractionCertificate,
    tol: f64,
) -> Result<VerificationReport> {
    if cert.weight.dim() != prob.dim() {
        return Err(Error::InvalidInput(format!(
            "certificate dimension {} does not match problem dimension {}",
            cert.weight.dim(),
            prob.dim()
        )));
    }
    let s = prob.saddle_matrix();
    let lmi = check_lmi(&s, &cert.weight, cert.rate, tol)?;
    let p = cert.weight.weight();
    let p_min = sym_eigen(p)?.values[0];
    let p_scale = spectral_norm(p).max(1.0);
    let kernel_residual = cert.weight.kernel_invariance_residual(&s);
    Ok(VerificationReport {
        lmi_ok: lmi.holds,
        psd_ok: p_min >= -tol * p_scale,
        kernel_invariant_ok: kernel_residual <= tol,
        lmi_worst_eigenvalue: lmi.worst_eigenvalue,
        lmi_scale: lmi.scale,
        weight_min_eigenvalue: p_min,
        kernel_residual,
        kernel_dim: cert.weight.kernel_basis().ncols(),
    })
}

/// All three certificates for one problem.
#[derive(Debug, Clone)]
pub struct CertificateSet {
    pub quarter: ContractionCertificate,
    pub small_tau: ContractionCertificate,
    pub sharp: ContractionCertificate,
}

impl CertificateSet {
    pub fn iter(&self) -> impl Iterator<Item = &ContractionCertificate> {
        [&self.quarter, &self.small_tau, &self.sharp].into_iter()
    }
}

pub fn all_certificates(prob: &SaddleProblem) -> Result<CertificateSet> {
    let bounds = prob.spectral_bounds()?;
    Ok(CertificateSet {
        quarter: quarter_rate_certificate_with(prob, &bounds)?,
        small_tau: small_tau_certificate_with(prob, &bounds, None)?,
        sharp: sharp_rate_certificate_with(prob, &bounds)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn prob(q: DMatrix<f64>, a: DMatrix<f64>, tau: f64) -> SaddleProblem {
        SaddleProblem::new(q, a, tau).unwrap()
    }

    #[test]
    fn assembles_block_matrix() {
        let s = prob(dmatrix![1.0], dmatrix![1.0], 1.0).saddle_matrix();
        assert_eq!(s, dmatrix![-1.0, -1.0; 1.0, 0.0]);
        let s = prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0], 2.0).saddle_matrix();
        assert_eq!(s, dmatrix![-1.0, 0.0, -1.0; 0.0, -1.0, 0.0; 0.5, 0.0, 0.0]);
        let s = prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0; 1.0, 0.0], 1.0).saddle_matrix();
        assert_eq!(s.shape(), (4, 4));
        assert_eq!(s.row(2), s.row(3));
    }

    #[test]
    fn rejects_bad_problems() {
        assert!(SaddleProblem::new(dmatrix![1.0], dmatrix![0.0], 1.0).is_err());
        assert!(SaddleProblem::new(dmatrix![1.0], dmatrix![1.0], 0.0).is_err());
        assert!(SaddleProblem::new(dmatrix![-1.0], dmatrix![1.0], 1.0).is_err());
        assert!(SaddleProblem::new(dmatrix![0.0, 1.0; -1.0, 0.0], dmatrix![1.0, 0.0], 1.0).is_err());
        assert!(SaddleProblem::new(dmatrix![1.0], dmatrix![1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn spectral_bounds_examples() {
        let b = prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0], 1.0).spectral_bounds().unwrap();
        assert!((b.q_min - 1.0).abs() < 1e-14 && (b.q_max - 1.0).abs() < 1e-14);
        assert!((b.a_min - 1.0).abs() < 1e-14 && (b.a_max - 1.0).abs() < 1e-14);
        assert!((b.pi_a[(0, 0)] - 1.0).abs() < 1e-14);

        let b = prob(dmatrix![1.0, 0.0; 0.0, 4.0], dmatrix![1.0, 0.0; 1.0, 0.0], 1.0)
            .spectral_bounds()
            .unwrap();
        assert!((b.q_min - 1.0).abs() < 1e-13);
        assert!((b.q_max - 16.0).abs() < 1e-12);
        assert!((b.a_min - 2.0).abs() < 1e-13 && (b.a_max - 2.0).abs() < 1e-13);
        assert!((&b.pi_a - dmatrix![0.5, 0.5; 0.5, 0.5]).amax() < 1e-13);

        // σ_max of [[1,1],[0,1]] is the golden ratio φ.
        let b = prob(dmatrix![1.0, 1.0; 0.0, 1.0], dmatrix![1.0, 0.0], 1.0)
            .spectral_bounds()
            .unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((b.q_min - 0.5).abs() < 1e-13);
        assert!((b.q_max - phi * phi / 0.5).abs() < 1e-12);
    }

    #[test]
    fn quarter_rate_examples() {
        let c = quarter_rate_certificate(&prob(dmatrix![1.0], dmatrix![1.0], 1.0)).unwrap();
        assert!((c.alpha - 0.5).abs() < 1e-14 && (c.rate - 0.25).abs() < 1e-14);

        let c = quarter_rate_certificate(&prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0; 1.0, 0.0], 1.0))
            .unwrap();
        assert!((c.alpha - 0.25).abs() < 1e-13 && (c.rate - 0.25).abs() < 1e-13);

        let c = quarter_rate_certificate(&prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0], 4.0)).unwrap();
        assert!((c.alpha - 0.5).abs() < 1e-14 && (c.rate - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn quarter_rate_lmi_on_small_example() {
        let p = prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0], 1.0);
        let c = quarter_rate_certificate(&p).unwrap();
        let lmi = check_lmi(&p.saddle_matrix(), &c.weight, 0.25, TOL_PSD).unwrap();
        assert!(lmi.holds);
    }

    #[test]
    fn small_tau_examples() {
        let c = small_tau_certificate(&prob(dmatrix![1.0], dmatrix![1.0], 1.0), Some(1.0)).unwrap();
        assert!((c.alpha - 1.0 / 3.0).abs() < 1e-14 && (c.rate - 1.0 / 6.0).abs() < 1e-14);

        let c = small_tau_certificate(&prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0], 1.0), Some(0.5))
            .unwrap();
        assert!((c.alpha - 0.5).abs() < 1e-14 && (c.rate - 0.25).abs() < 1e-14);

        let p = prob(dmatrix![1.0], dmatrix![1.0], 1.0);
        for eps in [0.0, 2.0, -1.0, 3.0] {
            assert!(matches!(small_tau_certificate(&p, Some(eps)), Err(Error::InvalidInput(_))));
        }
    }

    #[test]
    fn small_tau_limit_approaches_one_third() {
        let c = small_tau_certificate(&prob(dmatrix![1.0], dmatrix![1.0], 1e-4), None).unwrap();
        assert!((c.rate - 1.0 / 3.0).abs() < 0.01 / 3.0);
    }

    /// Textbook quadratic formula; independent of the cancellation-free route.
    fn naive_smaller_root(a: f64, b: f64, c: f64) -> f64 {
        (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a)
    }

    #[test]
    fn sharp_rate_examples() {
        let c = sharp_rate_certificate(&prob(dmatrix![1.0], dmatrix![1.0], 1.0)).unwrap();
        let beta1 = naive_smaller_root(1.0, -4.0, 2.0);
        assert!((beta1 - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((c.alpha - beta1).abs() < 1e-14);
        assert!((c.rate - beta1 / 2.0).abs() < 1e-14);

        // q_max = 1, a_min = a_max = 2, τ = 1: 2α² − 7α + 2 = 0.
        let p = prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0; 1.0, 0.0], 1.0);
        let c = sharp_rate_certificate(&p).unwrap();
        let beta1 = naive_smaller_root(2.0, -7.0, 2.0);
        assert!((c.alpha - beta1.min(0.5)).abs() < 1e-13);
        assert!((c.rate - 0.5 * c.alpha * 2.0).abs() < 1e-13);
    }

    #[test]
    fn sharp_root_lies_below_positivity_limit() {
        for (q, a, tau) in [
            (dmatrix![1.0], dmatrix![1.0], 1.0),
            (dmatrix![3.0, 1.0; -1.0, 2.0], dmatrix![1.0, 2.0; 2.0, 4.0], 0.01),
            (dmatrix![0.2, 0.0; 0.0, 5.0], dmatrix![10.0, 0.0], 10.0),
        ] {
            let p = prob(q, a, tau);
            let b = p.spectral_bounds().unwrap();
            let (beta1, beta2) = sharp_rate_roots(&b, tau).unwrap();
            assert!(beta1 > 0.0 && beta1 < (tau / b.a_max).sqrt());
            assert!(beta1 <= beta2);
        }
    }

    #[test]
    fn verification_flags_excess_rate() {
        let p = prob(dmatrix![1.0], dmatrix![1.0], 1.0);
        let mut c = quarter_rate_certificate(&p).unwrap();
        let report = verify_certificate(&p, &c, TOL_PSD).unwrap();
        assert!(report.all_ok());
        assert_eq!(report.kernel_dim, 0);
        // The quarter weight certifies exactly 0.5 here; 0.75 must fail.
        c.rate *= 3.0;
        let report = verify_certificate(&p, &c, TOL_PSD).unwrap();
        assert!(!report.lmi_ok);
        assert!(report.psd_ok && report.kernel_invariant_ok);
    }

    #[test]
    fn redundant_rows_give_nontrivial_kernel() {
        let p = prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0; 1.0, 0.0], 1.0);
        let c = quarter_rate_certificate(&p).unwrap();
        let report = verify_certificate(&p, &c, TOL_PSD).unwrap();
        assert_eq!(report.kernel_dim, 1);
        let k = c.weight.kernel_basis().column(0).into_owned();
        // Kernel is (0, y) with Aᵀy = 0, i.e. y ∝ (1, −1).
        assert!(k.rows(0, 2).norm() < 1e-12);
        assert!((k[2] + k[3]).abs() < 1e-12);
        assert!((p.saddle_matrix() * &k).norm() < 1e-12);
    }

    #[test]
    fn deflated_abscissa_examples() {
        let p = prob(dmatrix![1.0], dmatrix![1.0], 1.0);
        assert!((p.deflated_abscissa().unwrap() + 0.5).abs() < 1e-13);

        let p = prob(DMatrix::identity(2, 2), dmatrix![1.0, 0.0; 1.0, 0.0], 1.0);
        let d = p.deflated_matrix().unwrap();
        assert_eq!(d.shape(), (3, 3));
        let c = quarter_rate_certificate(&p).unwrap();
        assert!(p.deflated_abscissa().unwrap() <= -c.rate + 1e-8);
    }
}
