//! Potential-parameter spectrum.
//!
//! At fixed negative energy `ε` and fixed `(u0, u2)`, the eigenvalues `η_m(ε)`
//! of the recursion matrix `Σ(μ(ε))` are the values `¼ − 2u1` for which `ε`
//! is an eigen-energy. Sampling them over a grid of energies traces the
//! curves `u1 = (¼ − η_m(ε))/2`; a horizontal line `u1 = w` cuts those
//! curves at the bound-state energies of the potential with `u1 = w`.
//!
//! Each curve is fitted with a Thiele continued fraction, which provides the
//! bracket and starting guess. The root is then polished against a fresh
//! eigen-solve at every step, so the final energies do not depend on the
//! quality of the fit.

use log::warn;
use rayon::prelude::*;

use crate::eigen::eig_sym_tridiag;
use crate::error::{Error, Result};
use crate::orthopoly::JacobiBasisSpec;
use crate::roots::brent;
use crate::thiele::ThieleInterpolant;
use crate::tra::{basis_params, build_sigma, eval_p};

/// Upper end of the default energy grid.
pub const DEFAULT_EPS_MAX: f64 = -1e-6;
/// Samples per curve in the default grid.
pub const DEFAULT_GRID: usize = 64;
/// Fit-guess vs polished-root disagreement that gets flagged.
pub const FIT_DISAGREEMENT: f64 = 1e-6;

/// `n` Chebyshev–Gauss–Lobatto points on `[lo, hi]`, ascending.
pub fn chebyshev_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|k| {
            let c = (std::f64::consts::PI * k as f64 / (n - 1) as f64).cos();
            0.5 * (lo + hi) - 0.5 * (hi - lo) * c
        })
        .collect()
}

/// Default lower energy bound `−(|u0| + |u1| + |u2| + 1)`.
pub fn default_eps_min(u0: f64, u1: f64, u2: f64) -> f64 {
    -(u0.abs() + u1.abs() + u2.abs() + 1.0)
}

/// Ascending eigenvalues of `Σ` at energy `eps`.
pub fn sigma_eigenvalues(eps: f64, u0: f64, u2: f64, n: usize) -> Result<Vec<f64>> {
    let b = basis_params(eps, u0)?;
    Ok(eig_sym_tridiag(&build_sigma(b.mu, b.nu, u2, n), false)?.values)
}

/// `η_m(ε)`, the `m`-th smallest eigenvalue of `Σ`.
pub fn sigma_eigenvalue(eps: f64, u0: f64, u2: f64, n: usize, m: usize) -> Result<f64> {
    let v = sigma_eigenvalues(eps, u0, u2, n)?;
    v.get(m).copied().ok_or_else(|| {
        Error::domain(
            "sigma_eigenvalue",
            format!("curve {m} needs basis size > {m}"),
        )
    })
}

/// `u1 = (¼ − η)/2`.
pub fn u1_from_eta(eta: f64) -> f64 {
    (0.25 - eta) / 2.0
}

/// One sampled curve `ε ↦ u1`, with its rational interpolant.
#[derive(Debug, Clone)]
pub struct ParameterCurve {
    pub index: usize,
    /// `(ε, u1)` pairs, ascending in `ε`.
    pub samples: Vec<(f64, f64)>,
    pub interpolant: ThieleInterpolant,
}

impl ParameterCurve {
    pub fn eval(&self, eps: f64) -> f64 {
        self.interpolant.eval(eps)
    }
}

#[derive(Debug, Clone)]
pub struct CurveSet {
    pub curves: Vec<ParameterCurve>,
    /// Skipped grid points and near-degeneracies.
    pub warnings: Vec<String>,
}

struct GridScan {
    eps: Vec<f64>,
    /// `etas[i]` are the ascending eigenvalues at `eps[i]`.
    etas: Vec<Vec<f64>>,
    warnings: Vec<String>,
}

fn scan_grid(u0: f64, u2: f64, n: usize, eps_grid: &[f64]) -> Result<GridScan> {
    if let Some(bad) = eps_grid.iter().find(|e| !(**e < 0.0)) {
        return Err(Error::domain(
            "parameter_curves",
            format!("grid energy {bad} is not negative"),
        ));
    }
    let solved: Vec<(f64, std::result::Result<Vec<f64>, Error>)> = eps_grid
        .par_iter()
        .map(|&e| (e, sigma_eigenvalues(e, u0, u2, n)))
        .collect();
    let mut scan = GridScan {
        eps: Vec::new(),
        etas: Vec::new(),
        warnings: Vec::new(),
    };
    let mut ordered = solved;
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (e, res) in ordered {
        match res {
            Ok(v) => {
                for (m, w) in v.windows(2).enumerate() {
                    if (w[1] - w[0]).abs() <= 1e-10 * (1.0 + w[0].abs()) {
                        scan.warnings.push(format!(
                            "curves {m} and {} nearly touch at ε = {e}; ordering may swap",
                            m + 1
                        ));
                    }
                }
                scan.eps.push(e);
                scan.etas.push(v);
            }
            Err(err) => {
                warn!("skipping ε = {e}: {err}");
                scan.warnings.push(format!("skipped ε = {e}: {err}"));
            }
        }
    }
    Ok(scan)
}

fn fit_curve(scan: &GridScan, m: usize) -> Result<ParameterCurve> {
    let samples: Vec<(f64, f64)> = scan
        .eps
        .iter()
        .zip(&scan.etas)
        .filter_map(|(&e, v)| v.get(m).map(|&eta| (e, u1_from_eta(eta))))
        .filter(|(_, u)| u.is_finite())
        .collect();
    if samples.len() < 4 {
        return Err(Error::SparseCurve {
            curve: m,
            points: samples.len(),
        });
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let interpolant = ThieleInterpolant::fit(&xs, &ys)?;
    Ok(ParameterCurve {
        index: m,
        samples,
        interpolant,
    })
}

/// Sample and fit the lowest `count` curves over `eps_grid`.
pub fn parameter_curves(
    u0: f64,
    u2: f64,
    n: usize,
    eps_grid: &[f64],
    count: usize,
) -> Result<CurveSet> {
    if count > n {
        return Err(Error::domain(
            "parameter_curves",
            format!("{count} curves requested from a basis of size {n}"),
        ));
    }
    let scan = scan_grid(u0, u2, n, eps_grid)?;
    let curves = (0..count)
        .map(|m| fit_curve(&scan, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveSet {
        curves,
        warnings: scan.warnings,
    })
}

/// Settings of the spectrum search.
#[derive(Debug, Clone, PartialEq)]
pub struct PpsOptions {
    /// Lower end of the energy window; `None` uses [`default_eps_min`].
    pub eps_min: Option<f64>,
    pub eps_max: f64,
    pub grid_size: usize,
    /// Cap on the number of curves examined; `None` examines all `N`.
    pub curves: Option<usize>,
    /// Absolute tolerance on the polished energies.
    pub eps_tol: f64,
}

impl Default for PpsOptions {
    fn default() -> Self {
        Self {
            eps_min: None,
            eps_max: DEFAULT_EPS_MAX,
            grid_size: DEFAULT_GRID,
            curves: None,
            eps_tol: 1e-13,
        }
    }
}

/// One bound level found on curve `curve`.
#[derive(Debug, Clone, PartialEq)]
pub struct PpsLevel {
    pub eps: f64,
    pub curve: usize,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Root of the fitted curve, when the fit produced a usable bracket.
    pub fit_guess: Option<f64>,
    /// `|η_m(ε) − (¼ − 2u1)|` from a fresh eigen-solve.
    pub residual: f64,
    /// Set when the fit guess and the polished root disagree by more than
    /// [`FIT_DISAGREEMENT`].
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PpsSpectrum {
    /// Deepest level first.
    pub levels: Vec<PpsLevel>,
    pub diagnostics: Vec<String>,
}

impl PpsSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.eps).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Bracket a sign change of `fit − target` by scanning the interpolant
/// between consecutive samples.
fn fit_bracket(curve: &ParameterCurve, target: f64) -> Option<(f64, f64)> {
    const SUBDIVISIONS: usize = 4;
    let mut prev: Option<(f64, f64)> = None;
    for w in curve.samples.windows(2) {
        for k in 0..SUBDIVISIONS {
            let e = w[0].0 + (w[1].0 - w[0].0) * k as f64 / SUBDIVISIONS as f64;
            let g = curve.eval(e) - target;
            if !g.is_finite() {
                prev = None;
                continue;
            }
            if let Some((pe, pg)) = prev {
                if pg.signum() != g.signum() || g == 0.0 {
                    return Some((pe, e));
                }
            }
            prev = Some((e, g));
        }
    }
    let (e, u) = *curve.samples.last()?;
    let g = u - target;
    match prev {
        Some((pe, pg)) if pg.signum() != g.signum() => Some((pe, e)),
        _ => None,
    }
}

fn bisect_fit(curve: &ParameterCurve, target: f64, (mut lo, mut hi): (f64, f64)) -> f64 {
    let glo = curve.eval(lo) - target;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = curve.eval(mid) - target;
        if g.signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * lo.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Bound-state energies (in units of λ²) for `(u0, u1, u2)` from an `N`-term basis.
pub fn pps_spectrum(u0: f64, u1: f64, u2: f64, n: usize, opts: &PpsOptions) -> Result<PpsSpectrum> {
    if n == 0 {
        return Err(Error::domain("pps_spectrum", "basis size must be ≥ 1"));
    }
    let eps_min = opts.eps_min.unwrap_or_else(|| default_eps_min(u0, u1, u2));
    if !(eps_min < opts.eps_max && opts.eps_max < 0.0) {
        return Err(Error::domain(
            "pps_spectrum",
            format!(
                "energy window ({eps_min}, {}) must be ordered and negative",
                opts.eps_max
            ),
        ));
    }
    let grid = chebyshev_grid(eps_min, opts.eps_max, opts.grid_size.max(4));
    let scan = scan_grid(u0, u2, n, &grid)?;
    let mut diagnostics = scan.warnings.clone();
    let target_eta = 0.25 - 2.0 * u1;
    let curve_cap = opts.curves.unwrap_or(n).min(n);

    let exact =
        |e: f64, m: usize| -> Result<f64> { Ok(sigma_eigenvalue(e, u0, u2, n, m)? - target_eta) };

    let mut levels = Vec::new();
    for m in 0..curve_cap {
        let (Some(first), Some(last)) = (scan.etas.first(), scan.etas.last()) else {
            break;
        };
        // η_m decreases toward ε → 0⁻; a level exists when the line lies between the ends.
        let g_lo = first[m] - target_eta;
        let g_hi = last[m] - target_eta;
        if g_hi > 0.0 {
            // this curve and all above it stay below the line
            break;
        }
        if g_lo < 0.0 {
            diagnostics.push(format!(
                "curve {m} crosses the line below ε_min = {eps_min}; widen the energy window"
            ));
            continue;
        }

        let curve = match fit_curve(&scan, m) {
            Ok(c) => Some(c),
            Err(e) => {
                diagnostics.push(format!(
                    "curve {m}: fit failed ({e}); using sample brackets"
                ));
                None
            }
        };
        let target_u1 = u1;
        let mut fit_guess = None;
        let mut bracket = None;
        if let Some(curve) = &curve {
            if let Some(b) = fit_bracket(curve, target_u1) {
                let (ga, gb) = (exact(b.0, m)?, exact(b.1, m)?);
                if ga.signum() != gb.signum() || ga == 0.0 || gb == 0.0 {
                    bracket = Some(b);
                    fit_guess = Some(bisect_fit(curve, target_u1, b));
                } else {
                    diagnostics.push(format!(
                        "curve {m}: fitted bracket {b:?} rejected by exact check"
                    ));
                }
            }
        }
        let bracket = match bracket {
            Some(b) => b,
            None => {
                let idx = scan
                    .etas
                    .windows(2)
                    .position(|w| {
                        (w[0][m] - target_eta).signum() != (w[1][m] - target_eta).signum()
                    })
                    .expect("end values bracket the line");
                (scan.eps[idx], scan.eps[idx + 1])
            }
        };

        let root =
            brent(|e| exact(e, m), bracket.0, bracket.1, opts.eps_tol, 200)?.ok_or_else(|| {
                Error::domain(
                    "pps_spectrum",
                    format!("curve {m}: bracket lost its sign change"),
                )
            })?;
        let residual = exact(root.x, m)?.abs();
        let flagged = fit_guess.is_some_and(|g| (g - root.x).abs() > FIT_DISAGREEMENT);
        if flagged {
            diagnostics.push(format!(
                "curve {m}: fit guess {:?} differs from polished root {}",
                fit_guess, root.x
            ));
        }
        levels.push(PpsLevel {
            eps: root.x,
            curve: m,
            bracket,
            iterations: root.iterations,
            fit_guess,
            residual,
            flagged,
        });
    }
    Ok(PpsSpectrum {
        levels,
        diagnostics,
    })
}

/// Change in the partial sums as terms are added, and the detected windows.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// `(N, sup|ψ_N − ψ_{N−1}|, sup|ψ_N|)` for `N = 2 … N_scan`.
    pub deltas: Vec<(usize, f64, f64)>,
    /// Term count with the smallest relative change.
    pub best_terms: usize,
    /// Inclusive range of term counts forming the stable plateau.
    pub plateau: (usize, usize),
    /// First term count past the plateau whose change exceeds ten times the
    /// plateau median.
    pub critical_terms: Option<usize>,
}

/// Plateau threshold on `sup|ψ_N − ψ_{N−1}| / sup|ψ_N|`.
pub const PLATEAU_REL_CHANGE: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub r: Vec<f64>,
    /// Partial sum with `n_terms` terms, scaled to unit maximum modulus.
    pub psi: Vec<f64>,
    pub n_terms: usize,
    pub stability: StabilityReport,
}

impl Wavefunction {
    /// Sign changes of `psi`, ignoring samples below `floor` (relative).
    pub fn nodes(&self, floor: f64) -> usize {
        count_nodes(&self.psi, floor)
    }
}

/// Interior sign changes of `values`, skipping entries with
/// `|v| < floor · max|v|`.
pub fn count_nodes(values: &[f64], floor: f64) -> usize {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v.abs() < floor * max {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

fn partial_sums(coeffs: &[f64], spec: &JacobiBasisSpec, r_grid: &[f64]) -> Vec<Vec<f64>> {
    // sums[k][i] = Σ_{n ≤ k} P_n φ_n(r_i)
    let count = coeffs.len();
    let mut sums = vec![vec![0.0; r_grid.len()]; count];
    for (i, &r) in r_grid.iter().enumerate() {
        let phi = spec.eval_all(count, r);
        let mut acc = 0.0;
        for k in 0..count {
            acc += coeffs[k] * phi[k];
            sums[k][i] = acc;
        }
    }
    sums
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Stability analysis of the partial sums `Σ_{n<N} P_n(ε) φ_n(r)`.
pub fn stability_scan(sums: &[Vec<f64>]) -> StabilityReport {
    let deltas: Vec<(usize, f64, f64)> = (1..sums.len())
        .map(|k| {
            let d = sums[k]
                .iter()
                .zip(&sums[k - 1])
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            (k + 1, d, sup(&sums[k]))
        })
        .collect();
    let rel = |i: usize| {
        let (_, d, s) = deltas[i];
        if s > 0.0 {
            d / s
        } else {
            f64::INFINITY
        }
    };
    let best = (0..deltas.len())
        .min_by(|&a, &b| rel(a).total_cmp(&rel(b)))
        .unwrap_or(0);
    let mut lo = best;
    while lo > 0 && rel(lo - 1) <= PLATEAU_REL_CHANGE {
        lo -= 1;
    }
    let mut hi = best;
    while hi + 1 < deltas.len() && rel(hi + 1) <= PLATEAU_REL_CHANGE {
        hi += 1;
    }
    let plateau_median = median(deltas[lo..=hi].iter().map(|d| d.1).collect());
    let critical_terms = deltas[best + 1..]
        .iter()
        .find(|d| d.1 > 10.0 * plateau_median)
        .map(|d| d.0);
    StabilityReport {
        best_terms: deltas.get(best).map_or(1, |d| d.0),
        plateau: (
            deltas.get(lo).map_or(1, |d| d.0),
            deltas.get(hi).map_or(1, |d| d.0),
        ),
        deltas,
        critical_terms,
    }
}

/// Bound-state wavefunction at level energy `eps_m` from the first `n_terms`
/// recursion coefficients, with a stability scan over `2 … n_scan` terms.
pub fn reconstruct_wavefunction(
    eps_m: f64,
    u0: f64,
    u1: f64,
    u2: f64,
    r_grid: &[f64],
    n_terms: usize,
    n_scan: usize,
) -> Result<Wavefunction> {
    if n_terms < 2 {
        return Err(Error::domain(
            "reconstruct_wavefunction",
            "need at least 2 terms",
        ));
    }
    let count = n_terms.max(n_scan).max(3);
    let state = eval_p(eps_m, u0, u1, u2, count)?;
    let spec = JacobiBasisSpec::new(state.basis.mu, state.basis.nu, 1.0)?;
    let sums = partial_sums(&state.values, &spec, r_grid);
    let stability = stability_scan(&sums[..n_scan.max(3).min(count)]);
    let raw = &sums[n_terms - 1];
    let scale = sup(raw);
    let psi = if scale > 0.0 {
        raw.iter().map(|v| v / scale).collect()
    } else {
        raw.clone()
    };
    Ok(Wavefunction {
        r: r_grid.to_vec(),
        psi,
        n_terms,
        stability,
    })
}
