//! Gain matrices of Nash-equilibrium seeking dynamics and their stability
//! classification.
//!
//! For a game with per-player strong convexity `μ_i` and cross-player
//! Lipschitz constants `ℓ_ij`, pseudogradient play is contracting when
//! `Γ_PseudoG = [−μ_i on the diagonal, ℓ_ij off it]` is Hurwitz, and best
//! response play when `Γ_BR = −I + Γ_BR,d` is. Both are Metzler, so a
//! Hurwitz gain admits a diagonal Lyapunov weight; that weight defines the
//! concrete norm used here for contraction checks.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flows::{integrate_partial, LinearField, Trajectory};
use crate::spectra::{is_hurwitz, is_schur, spectral_abscissa};

/// Per-player strong convexity `mu` and interaction constants `ell`
/// (`ell[(i, i)]` is ignored).
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    mu: DVector<f64>,
    ell: DMatrix<f64>,
}

impl GameSpec {
    pub fn new(mu: DVector<f64>, ell: DMatrix<f64>) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(Error::InvalidInput("game needs at least one player".into()));
        }
        if ell.shape() != (n, n) {
            return Err(Error::InvalidInput(format!(
                "ell must be {n}x{n}, got {}x{}",
                ell.nrows(),
                ell.ncols()
            )));
        }
        if mu.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidInput("mu must be positive and finite".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = ell[(i, j)];
                if i != j && !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "ell[{i}][{j}] = {v} must be nonnegative and finite"
                    )));
                }
            }
        }
        Ok(Self { mu, ell })
    }

    pub fn players(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn ell(&self) -> &DMatrix<f64> {
        &self.ell
    }
}

/// `Γ_PseudoG`: diagonal `−μ_i`, off-diagonal `ℓ_ij`.
pub fn gain_pseudogradient(spec: &GameSpec) -> DMatrix<f64> {
    let n = spec.players();
    DMatrix::from_fn(n, n, |i, j| if i == j { -spec.mu[i] } else { spec.ell[(i, j)] })
}

/// `Γ_BR,d`: zero diagonal, off-diagonal `ℓ_ij/μ_i`.
pub fn gain_best_response_discrete(spec: &GameSpec) -> DMatrix<f64> {
    let n = spec.players();
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { spec.ell[(i, j)] / spec.mu[i] })
}

/// `Γ_BR = −I + Γ_BR,d`.
pub fn gain_best_response(spec: &GameSpec) -> DMatrix<f64> {
    let n = spec.players();
    gain_best_response_discrete(spec) - DMatrix::<f64>::identity(n, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub pseudo_hurwitz: bool,
    pub br_hurwitz: bool,
    pub brd_schur: bool,
    /// All three predicates agree.
    pub consistent: bool,
}

/// Evaluates the three stability predicates independently: the spectral
/// abscissa of `Γ_PseudoG` and `Γ_BR`, and the spectral radius of the
/// nonnegative `Γ_BR,d` (whose Perron root is that radius).
pub fn equivalence_check(spec: &GameSpec) -> Result<EquivalenceReport> {
    let pseudo_hurwitz = is_hurwitz(&gain_pseudogradient(spec))?;
    let br_hurwitz = is_hurwitz(&gain_best_response(spec))?;
    let brd_schur = is_schur(&gain_best_response_discrete(spec))?;
    Ok(EquivalenceReport {
        pseudo_hurwitz,
        br_hurwitz,
        brd_schur,
        consistent: pseudo_hurwitz == br_hurwitz && br_hurwitz == brd_schur,
    })
}

/// Gain matrix of an aggregative game and its two stability tests.
#[derive(Debug, Clone)]
pub struct AggregativeGain {
    pub gamma: DMatrix<f64>,
    /// `Some(true)` when every row sum `ℓ_i − μ_i` is negative, which is
    /// sufficient for Hurwitz; `None` when the test is inconclusive.
    pub row_sum_test: Option<bool>,
    /// Hurwitz according to the spectral abscissa.
    pub hurwitz: bool,
}

impl AggregativeGain {
    /// The row-sum test, when it fires, agrees with the spectral test.
    pub fn consistent(&self) -> bool {
        self.row_sum_test.is_none_or(|r| r == self.hurwitz)
    }
}

/// `(Γ_Agg)_ij = −μ_i + ℓ_i/n` on the diagonal and `ℓ_i/n` off it, with
/// `n` the number of players.
pub fn gain_aggregative(mu: &DVector<f64>, ell_agg: &DVector<f64>) -> Result<AggregativeGain> {
    let n = mu.len();
    if n == 0 || ell_agg.len() != n {
        return Err(Error::InvalidInput("mu and ell must have the same nonzero length".into()));
    }
    if mu.iter().any(|&m| !(m > 0.0)) || ell_agg.iter().any(|&l| !(l >= 0.0)) {
        return Err(Error::InvalidInput("need mu > 0 and ell >= 0 elementwise".into()));
    }
    let nf = n as f64;
    let gamma = DMatrix::from_fn(n, n, |i, j| {
        let coupling = ell_agg[i] / nf;
        if i == j {
            -mu[i] + coupling
        } else {
            coupling
        }
    });
    let row_sums_negative = gamma.row_iter().all(|r| r.sum() < 0.0);
    let row_sum_test = row_sums_negative.then_some(true);
    let hurwitz = is_hurwitz(&gamma)?;
    Ok(AggregativeGain {
        gamma,
        row_sum_test,
        hurwitz,
    })
}

/// Default `ε` for [`interconnection_rate`]: `1e−3·|α(Γ)|`.
pub const DEFAULT_EPSILON_FRACTION: f64 = 1e-3;

/// `|α(Γ) + ε|` for Hurwitz `Γ` and `0 < ε < −α(Γ)`; `None` picks
/// `ε = 1e−3·|α(Γ)|`.
pub fn interconnection_rate(gamma: &DMatrix<f64>, epsilon: Option<f64>) -> Result<f64> {
    let abscissa = spectral_abscissa(gamma)?;
    if !(abscissa < 0.0) {
        return Err(Error::Precondition(format!(
            "gain matrix is not Hurwitz (α = {abscissa})"
        )));
    }
    let eps = epsilon.unwrap_or(DEFAULT_EPSILON_FRACTION * abscissa.abs());
    if !(eps > 0.0 && eps < -abscissa) {
        return Err(Error::InvalidInput(format!(
            "epsilon must lie in (0, {}), got {eps}",
            -abscissa
        )));
    }
    Ok((abscissa + eps).abs())
}

/// Scalar-action quadratic game with costs
/// `J_i = ½μ_i x_i² + x_i(Σ_{j≠i} K_ij x_j + b_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticGame {
    mu: DVector<f64>,
    k: DMatrix<f64>,
    b: DVector<f64>,
}

impl QuadraticGame {
    /// The diagonal of `k` is ignored and stored as zero.
    pub fn new(mu: DVector<f64>, mut k: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let n = mu.len();
        if n == 0 || k.shape() != (n, n) || b.len() != n {
            return Err(Error::InvalidInput("mu, K and b sizes disagree".into()));
        }
        if mu.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidInput("mu must be positive and finite".into()));
        }
        if k.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("K and b must be finite".into()));
        }
        k.fill_diagonal(0.0);
        Ok(Self { mu, k, b })
    }

    pub fn players(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn k(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    /// `ℓ_ij = |K_ij|`.
    pub fn spec(&self) -> GameSpec {
        GameSpec::new(self.mu.clone(), self.k.abs()).expect("quadratic game induces a valid spec")
    }

    /// `diag(μ) + K`, the Jacobian of the pseudogradient.
    pub fn pseudogradient_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.mu) + &self.k
    }

    /// `BR_i(x_{−i}) = −(Σ_j K_ij x_j + b_i)/μ_i`.
    pub fn best_response(&self, x: &DVector<f64>) -> DVector<f64> {
        -(&self.k * x + &self.b).component_div(&self.mu)
    }

    /// Solves `(diag(μ) + K)x = −b`.
    pub fn nash_equilibrium(&self) -> Result<DVector<f64>> {
        self.pseudogradient_matrix()
            .lu()
            .solve(&(-&self.b))
            .ok_or_else(|| Error::Precondition("diag(μ) + K is singular; no unique equilibrium".into()))
    }

    /// `ẋ = −(diag(μ) + K)x − b`.
    pub fn pseudogradient_field(&self) -> LinearField {
        LinearField {
            matrix: -self.pseudogradient_matrix(),
            offset: -&self.b,
        }
    }

    /// `ẋ = BR(x) − x = −(I + diag(μ)⁻¹K)x − diag(μ)⁻¹b`.
    pub fn best_response_field(&self) -> LinearField {
        let n = self.players();
        let scaled = DMatrix::from_fn(n, n, |i, j| self.k[(i, j)] / self.mu[i]);
        LinearField {
            matrix: -(DMatrix::identity(n, n) + scaled),
            offset: -self.b.component_div(&self.mu),
        }
    }
}

/// Result of simulating a game; divergence is reported, not raised.
#[derive(Debug, Clone)]
pub struct PlayOutcome {
    pub trajectory: Trajectory,
    /// Time of the first non-finite state, if the play blew up.
    pub diverged_at: Option<f64>,
}

impl PlayOutcome {
    pub fn final_state(&self) -> DVector<f64> {
        self.trajectory.final_state()
    }
}

pub fn simulate_pseudogradient(
    game: &QuadraticGame,
    x0: &DVector<f64>,
    t_end: f64,
    dt: f64,
) -> Result<PlayOutcome> {
    let (trajectory, diverged_at) = integrate_partial(&game.pseudogradient_field(), x0, t_end, dt)?;
    Ok(PlayOutcome {
        trajectory,
        diverged_at,
    })
}

pub fn simulate_best_response(
    game: &QuadraticGame,
    x0: &DVector<f64>,
    t_end: f64,
    dt: f64,
) -> Result<PlayOutcome> {
    let (trajectory, diverged_at) = integrate_partial(&game.best_response_field(), x0, t_end, dt)?;
    Ok(PlayOutcome {
        trajectory,
        diverged_at,
    })
}
