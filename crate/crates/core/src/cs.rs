//! Complex scaling in a Laguerre basis.
//!
//! The `V0 csch²` singularity is absorbed into an effective angular momentum
//! `ℓ̃`, and the remainder `Ṽ = V − V0/(λr)²` is treated numerically. With the
//! basis
//!
//! ```text
//! χ_n(r) = (γr)^{ℓ̃+1} e^{−γr/2} L_n^{2ℓ̃+1}(γr),   γ = ρ e^{−iθ}
//! ```
//!
//! the kinetic and overlap matrices are tridiagonal in closed form, and the
//! potential matrix is a generalized Gauss–Laguerre sum along the rotated
//! ray. The generalized eigenvalues are the Harris eigenvalues: bound states
//! and resonances stay put as `(ρ, θ)` vary, while the discretized continuum
//! swings with the scaling angle.
//!
//! All matrices share one overall factor of `γ` relative to the integrals in
//! `r`; it cancels in the generalized problem.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::eigen::{eig_gen_complex, SymTridiag};
use crate::error::{Error, Result};
use crate::orthopoly::{gauss_rule, node_eigenvector, QuadratureKind};
use crate::potential::{effective_ell, eval_regularized, PotentialParams};

/// Default stable-root tolerance, relative to `1 + |E|`.
pub const DEFAULT_TOL: f64 = 1e-4;
/// Default imaginary-part threshold for bound states, relative to `1 + |E|`.
pub const DEFAULT_TOL_BOUND: f64 = 1e-8;

/// Basis and scaling parameters of one complex-scaling run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsConfig {
    pub ell: u32,
    pub ell_eff: f64,
    /// Length-scale modulus, in units of `λ`.
    pub rho: f64,
    /// Scaling angle in radians.
    pub theta: f64,
    pub n: usize,
    pub k_quad: usize,
}

impl CsConfig {
    /// `k_quad` defaults to `N + 20` when `None`.
    pub fn new(
        u0: f64,
        ell: u32,
        rho: f64,
        theta: f64,
        n: usize,
        k_quad: Option<usize>,
    ) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::domain(
                "CsConfig",
                format!("ρ = {rho} must be positive"),
            ));
        }
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::domain(
                "CsConfig",
                format!("θ = {theta} must lie in [0, π/2)"),
            ));
        }
        if n == 0 {
            return Err(Error::domain("CsConfig", "basis size must be ≥ 1"));
        }
        let k_quad = k_quad.unwrap_or(n + 20);
        if k_quad < n + 10 {
            return Err(Error::domain(
                "CsConfig",
                format!("K_quad = {k_quad} must be at least N + 10 = {}", n + 10),
            ));
        }
        Ok(Self {
            ell,
            ell_eff: effective_ell(u0, ell)?,
            rho,
            theta,
            n,
            k_quad,
        })
    }

    pub fn gamma(&self) -> Complex64 {
        Complex64::from_polar(self.rho, -self.theta)
    }

    /// Override the quadrature order, allowing anything down to `K_quad = N`.
    ///
    /// Below `N + 10` the potential matrix is no longer converged in the
    /// quadrature; Harris eigenvalues then depend on `K_quad` in the
    /// fourth to sixth digit. Useful only for matching results that were
    /// computed with such a rule.
    pub fn with_quadrature_order(self, k_quad: usize) -> Result<Self> {
        if k_quad < self.n {
            return Err(Error::domain(
                "CsConfig",
                format!("K_quad = {k_quad} must be at least N = {}", self.n),
            ));
        }
        Ok(Self { k_quad, ..self })
    }

    /// The same configuration at another `(ρ, θ)`.
    pub fn with_scaling(&self, rho: f64, theta: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) || !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::domain(
                "CsConfig",
                format!("scaling (ρ, θ) = ({rho}, {theta}) out of range"),
            ));
        }
        Ok(Self {
            rho,
            theta,
            ..*self
        })
    }
}

/// Kinetic-energy matrix: diagonal `(γ²/4)(n+ℓ̃+1)`, off-diagonal
/// `(γ²/8)√((n+1)(n+2ℓ̃+2))`.
pub fn cs_kinetic(cfg: &CsConfig) -> SymTridiag<Complex64> {
    let g2 = cfg.gamma() * cfg.gamma();
    let l = cfg.ell_eff;
    let diag = (0..cfg.n)
        .map(|k| g2 * (0.25 * (k as f64 + l + 1.0)))
        .collect();
    let sub = (0..cfg.n.saturating_sub(1))
        .map(|k| {
            let kf = k as f64;
            g2 * (0.125 * ((kf + 1.0) * (kf + 2.0 * l + 2.0)).sqrt())
        })
        .collect();
    SymTridiag { diag, sub }
}

/// Overlap matrix: diagonal `2(n+ℓ̃+1)`, off-diagonal `−√((n+1)(n+2ℓ̃+2))`.
pub fn cs_overlap(cfg: &CsConfig) -> SymTridiag {
    let l = cfg.ell_eff;
    let diag = (0..cfg.n).map(|k| 2.0 * (k as f64 + l + 1.0)).collect();
    let sub = (0..cfg.n.saturating_sub(1))
        .map(|k| {
            let kf = k as f64;
            -((kf + 1.0) * (kf + 2.0 * l + 2.0)).sqrt()
        })
        .collect();
    SymTridiag { diag, sub }
}

/// Matrix of `Ṽ` in the scaled basis, by a `K_quad`-point generalized
/// Gauss–Laguerre rule with parameter `2ℓ̃+1`.
///
/// `p` is taken in `λ = 1` units (see [`PotentialParams::unit_scale`]).
pub fn cs_potential_matrix(p: &PotentialParams, cfg: &CsConfig) -> Result<DMatrix<Complex64>> {
    let p = p.unit_scale();
    let kind = QuadratureKind::GaussLaguerre {
        alpha: 2.0 * cfg.ell_eff + 1.0,
    };
    let rule = gauss_rule(kind, cfg.k_quad)?;
    let jm = kind.jacobi_matrix(cfg.k_quad);
    let gamma = cfg.gamma();
    let n = cfg.n;
    let mut v = DMatrix::<Complex64>::zeros(n, n);
    for &y in &rule.nodes {
        let comp = node_eigenvector(&jm, y);
        let vt = eval_regularized(&p, Complex64::new(y, 0.0) / gamma)? * y;
        // the orthonormal recurrence carries the sign (−1)^n relative to L_n
        let c: Vec<f64> = comp[..n]
            .iter()
            .enumerate()
            .map(|(k, &x)| if k % 2 == 1 { -x } else { x })
            .collect();
        for i in 0..n {
            let vi = vt * c[i];
            for j in 0..=i {
                v[(i, j)] += vi * c[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            v[(j, i)] = v[(i, j)];
        }
    }
    Ok(v)
}

/// Generalized eigenvalues of one run, in units of `λ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarrisSet {
    pub eigenvalues: Vec<Complex64>,
    pub config: CsConfig,
}

/// `H f = E Ω f` with `H` the kinetic plus potential matrices.
pub fn harris_eigenvalues(p: &PotentialParams, cfg: &CsConfig) -> Result<HarrisSet> {
    let mut h = cs_potential_matrix(p, cfg)?;
    let t = cs_kinetic(cfg);
    h += t.to_dense();
    let omega = cs_overlap(cfg).to_dense();
    let eig = eig_gen_complex(&h, &omega, false)?;
    let scale = p.lambda * p.lambda;
    let mut eigenvalues: Vec<Complex64> = eig.values.into_iter().map(|e| e * scale).collect();
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(HarrisSet {
        eigenvalues,
        config: *cfg,
    })
}

/// Negative real eigenvalues (|Im E| ≤ `tol_bound`·(1+|E|)), ascending.
///
/// Intended for `θ = 0`, where the problem is real symmetric.
pub fn bound_levels(set: &HarrisSet, tol_bound: f64) -> Vec<f64> {
    let mut out: Vec<f64> = set
        .eigenvalues
        .iter()
        .filter(|e| e.re < 0.0 && e.im.abs() <= tol_bound * (1.0 + e.norm()))
        .map(|e| e.re)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Why an eigenvalue was not classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnstableReason {
    /// The matched partner moved by more than the tolerance, or no partner was left.
    Drift,
    /// Stable, but neither on the negative real axis nor inside the wedge.
    OutsideWedge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnstableEigenvalue {
    pub energy: Complex64,
    /// Distance to the matched eigenvalue of the second run (infinite if unmatched).
    pub drift: f64,
    pub reason: UnstableReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StableEigenvalue {
    pub energy: Complex64,
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedSpectrum {
    /// Ascending.
    pub bound: Vec<StableEigenvalue>,
    /// Ascending in `|Im E|`.
    pub resonances: Vec<StableEigenvalue>,
    pub unstable: Vec<UnstableEigenvalue>,
}

impl ClassifiedSpectrum {
    pub fn bound_energies(&self) -> Vec<f64> {
        self.bound.iter().map(|b| b.energy.re).collect()
    }

    pub fn resonance_energies(&self) -> Vec<Complex64> {
        self.resonances.iter().map(|r| r.energy).collect()
    }
}

/// Globally greedy nearest-neighbour matching: all cross pairs are sorted by
/// distance and accepted when both members are still free.
fn match_sets(a: &[Complex64], b: &[Complex64]) -> Vec<Option<(usize, f64)>> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut out = vec![None; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut left = a.len().min(b.len());
    for (d, i, j) in pairs {
        if left == 0 {
            break;
        }
        if out[i].is_none() && !used_b[j] {
            out[i] = Some((j, d));
            used_b[j] = true;
            left -= 1;
        }
    }
    out
}

/// Split the eigenvalues of `run_a` into bound states, resonances and
/// unstable entries by comparison with the perturbed `run_b`.
pub fn classify_eigenvalues(run_a: &HarrisSet, run_b: &HarrisSet, tol: f64) -> ClassifiedSpectrum {
    classify_eigenvalues_with(run_a, run_b, tol, DEFAULT_TOL_BOUND)
}

pub fn classify_eigenvalues_with(
    run_a: &HarrisSet,
    run_b: &HarrisSet,
    tol: f64,
    tol_bound: f64,
) -> ClassifiedSpectrum {
    let theta = run_a.config.theta;
    let matches = match_sets(&run_a.eigenvalues, &run_b.eigenvalues);
    let mut out = ClassifiedSpectrum {
        bound: Vec::new(),
        resonances: Vec::new(),
        unstable: Vec::new(),
    };
    for (e, m) in run_a.eigenvalues.iter().zip(matches) {
        let scale = 1.0 + e.norm();
        let drift = m.map_or(f64::INFINITY, |(_, d)| d);
        if drift > tol * scale {
            out.unstable.push(UnstableEigenvalue {
                energy: *e,
                drift,
                reason: UnstableReason::Drift,
            });
            continue;
        }
        let arg = e.arg();
        if e.re < 0.0 && e.im.abs() <= tol_bound * scale {
            out.bound.push(StableEigenvalue { energy: *e, drift });
        } else if e.im < 0.0 && arg > -2.0 * theta {
            out.resonances.push(StableEigenvalue { energy: *e, drift });
        } else {
            out.unstable.push(UnstableEigenvalue {
                energy: *e,
                drift,
                reason: UnstableReason::OutsideWedge,
            });
        }
    }
    out.bound
        .sort_by(|a, b| a.energy.re.total_cmp(&b.energy.re));
    out.resonances
        .sort_by(|a, b| a.energy.im.abs().total_cmp(&b.energy.im.abs()));
    out
}

/// Perturbation and tolerances of the two-run stability test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityOptions {
    /// Relative change of `ρ` for the second run.
    pub drho: f64,
    /// Absolute change of `θ` for the second run.
    pub dtheta: f64,
    pub tol: f64,
    pub tol_bound: f64,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        Self {
            drho: 0.05,
            dtheta: 0.05,
            tol: DEFAULT_TOL,
            tol_bound: DEFAULT_TOL_BOUND,
        }
    }
}

impl StabilityOptions {
    /// Scaling of the second run. The angle step is reversed when it would
    /// leave `[0, π/2)`.
    pub fn perturbed(&self, cfg: &CsConfig) -> Result<CsConfig> {
        let mut theta = cfg.theta + self.dtheta;
        if theta >= FRAC_PI_2 {
            theta = cfg.theta - self.dtheta;
        }
        cfg.with_scaling(cfg.rho * (1.0 + self.drho), theta.max(0.0))
    }
}

/// Both runs of the stability test plus their classification.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRun {
    pub primary: HarrisSet,
    pub perturbed: HarrisSet,
    pub classified: ClassifiedSpectrum,
}

/// Run the primary and perturbed configurations and classify.
pub fn classify_run(
    p: &PotentialParams,
    cfg: &CsConfig,
    opts: &StabilityOptions,
) -> Result<StabilityRun> {
    let other = opts.perturbed(cfg)?;
    let (a, b) = rayon::join(
        || harris_eigenvalues(p, cfg),
        || harris_eigenvalues(p, &other),
    );
    let (primary, perturbed) = (a?, b?);
    let classified = classify_eigenvalues_with(&primary, &perturbed, opts.tol, opts.tol_bound);
    Ok(StabilityRun {
        primary,
        perturbed,
        classified,
    })
}

/// One frame of a `V1` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFrame {
    /// Physical `V1`.
    pub v1: f64,
    pub result: Result<ClassifiedSpectrum>,
}

/// Classified spectra along a grid of `V1` values (physical units), in grid order.
pub fn sweep_v1(
    p_base: &PotentialParams,
    v1_grid: &[f64],
    cfg: &CsConfig,
    opts: &StabilityOptions,
) -> Vec<SweepFrame> {
    v1_grid
        .par_iter()
        .map(|&v1| {
            let result = if v1.is_finite() {
                let p = PotentialParams { v1, ..*p_base };
                classify_run(&p, cfg, opts).map(|r| r.classified)
            } else {
                Err(Error::domain(
                    "sweep_v1",
                    format!("V1 = {v1} is not finite"),
                ))
            };
            SweepFrame { v1, result }
        })
        .collect()
}

/// Score of one `ρ` in a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoScore {
    pub rho: f64,
    pub stable: usize,
    pub total_drift: f64,
}

/// Evaluate the stability test over `rhos` and return the scores with the
/// index of the preferred `ρ`: most classified eigenvalues, ties broken by the
/// smallest summed drift.
pub fn rho_scan(
    p: &PotentialParams,
    cfg: &CsConfig,
    rhos: &[f64],
    opts: &StabilityOptions,
) -> Result<(Vec<RhoScore>, usize)> {
    if rhos.is_empty() {
        return Err(Error::domain("rho_scan", "no ρ values given"));
    }
    let scores = rhos
        .par_iter()
        .map(|&rho| {
            let c = cfg.with_scaling(rho, cfg.theta)?;
            let run = classify_run(p, &c, opts)?.classified;
            let total_drift = run
                .bound
                .iter()
                .chain(&run.resonances)
                .map(|s| s.drift)
                .sum();
            Ok(RhoScore {
                rho,
                stable: run.bound.len() + run.resonances.len(),
                total_drift,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = (0..scores.len())
        .max_by(|&i, &j| {
            scores[i]
                .stable
                .cmp(&scores[j].stable)
                .then(scores[j].total_drift.total_cmp(&scores[i].total_drift))
        })
        .expect("non-empty");
    Ok((scores, best))
}
