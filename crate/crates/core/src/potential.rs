//! The four-parameter hyperbolic potential
//!
//! ```text
//! V(r) = [V0 + V1 tanh²(λr) + V2 tanh⁴(λr)] / sinh²(λr)
//! ```
//!
//! and the quantities derived from it: the non-singular remainder
//! `Ṽ(r) = V(r) − u0 λ²/r²`, the small-`r` expansion, the effective angular
//! momentum that absorbs the inverse-square part, and the shape
//! classification (barrier + valley, inflection, monotone, single valley).
//!
//! In the variable `t = tanh²(λr) ∈ (0, 1)` the potential is rational:
//!
//! ```text
//! V / λ² = (1 − t)(u0 + u1 t + u2 t²) / t,      u_i = V_i / λ².
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `|sinh(λr)|` (or `|cosh(λr)|`) below this is treated as a pole.
pub const POLE_THRESHOLD: f64 = 1e-12;

/// Below this `|λr|` the regularized potential is summed from its Taylor series.
pub const SERIES_SWITCH: f64 = 0.05;

// Taylor coefficients (in powers of x², starting at x⁰) of
// csch²x − 1/x², sech²x and tanh²x·sech²x.
const CSCH2_REG: [f64; 10] = [
    -1.0 / 3.0,
    1.0 / 15.0,
    -2.0 / 189.0,
    1.0 / 675.0,
    -2.0 / 10395.0,
    1382.0 / 58046625.0,
    -4.0 / 1403325.0,
    3617.0 / 10854718875.0,
    -87734.0 / 2292899734125.0,
    349222.0 / 80596287646875.0,
];
const SECH2: [f64; 10] = [
    1.0,
    -1.0,
    2.0 / 3.0,
    -17.0 / 45.0,
    62.0 / 315.0,
    -1382.0 / 14175.0,
    21844.0 / 467775.0,
    -929569.0 / 42567525.0,
    6404582.0 / 638512875.0,
    -443861162.0 / 97692469875.0,
];
const TANH2_SECH2: [f64; 10] = [
    0.0,
    1.0,
    -5.0 / 3.0,
    77.0 / 45.0,
    -88.0 / 63.0,
    14102.0 / 14175.0,
    -1729.0 / 2673.0,
    16769029.0 / 42567525.0,
    -2651252.0 / 11609325.0,
    161615026.0 / 1268733375.0,
];

/// Physical parameters `(λ, V0, V1, V2)`.
///
/// `v2 = 0` is accepted: it is the hyperbolic Pöschl–Teller limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub lambda: f64,
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
}

impl PotentialParams {
    pub fn new(lambda: f64, v0: f64, v1: f64, v2: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain(
                "PotentialParams",
                format!("lambda must be > 0, got {lambda}"),
            ));
        }
        if !(v0 > 0.0) {
            return Err(Error::domain(
                "PotentialParams",
                format!("v0 must be > 0, got {v0}"),
            ));
        }
        if !v1.is_finite() || !v2.is_finite() || !v0.is_finite() {
            return Err(Error::domain("PotentialParams", "non-finite coupling"));
        }
        Ok(Self { lambda, v0, v1, v2 })
    }

    /// Build from dimensionless couplings `u_i = V_i / λ²`.
    pub fn from_reduced(lambda: f64, u: [f64; 3]) -> Result<Self> {
        let l2 = lambda * lambda;
        Self::new(lambda, u[0] * l2, u[1] * l2, u[2] * l2)
    }

    /// The dimensionless couplings `(u0, u1, u2)`.
    pub fn reduced(&self) -> [f64; 3] {
        let l2 = self.lambda * self.lambda;
        [self.v0 / l2, self.v1 / l2, self.v2 / l2]
    }

    /// Same couplings with `λ = 1`.
    pub fn unit_scale(&self) -> Self {
        let [u0, u1, u2] = self.reduced();
        Self {
            lambda: 1.0,
            v0: u0,
            v1: u1,
            v2: u2,
        }
    }
}

/// Shape class of the potential, from its critical points in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigKind {
    /// Local minimum above zero behind a barrier.
    ResonancesOnly,
    /// Local minimum below zero behind a barrier.
    BoundAndResonances,
    /// The two extrema merge into an inflection point.
    Inflection,
    /// No extrema.
    Monotone,
    /// A single valley with no barrier.
    BoundOnly,
}

impl ConfigKind {
    /// Panel label of the usual five-panel sketch of the configurations.
    pub fn figure_panel(&self) -> &'static str {
        match self {
            ConfigKind::ResonancesOnly => "1a",
            ConfigKind::BoundAndResonances => "1b",
            ConfigKind::Inflection => "1c",
            ConfigKind::Monotone => "1d",
            ConfigKind::BoundOnly => "1e",
        }
    }
}

impl std::fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ConfigKind::ResonancesOnly => "ResonancesOnly",
            ConfigKind::BoundAndResonances => "BoundAndResonances",
            ConfigKind::Inflection => "Inflection",
            ConfigKind::Monotone => "Monotone",
            ConfigKind::BoundOnly => "BoundOnly",
        };
        f.write_str(name)
    }
}

/// A critical point at `t = tanh²(λr)` with the potential value there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub t: f64,
    pub value: f64,
}

impl CriticalPoint {
    /// Radius of the critical point.
    pub fn radius(&self, lambda: f64) -> f64 {
        self.t.sqrt().atanh() / lambda
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigClass {
    pub kind: ConfigKind,
    pub critical_points: Vec<CriticalPoint>,
}

fn check_pole(op: &'static str, x: Complex64) -> Result<()> {
    let s = x.sinh();
    if s.norm() < POLE_THRESHOLD {
        return Err(Error::domain(
            op,
            format!("λr = {x} is at a pole of 1/sinh²"),
        ));
    }
    if x.cosh().norm() < POLE_THRESHOLD {
        return Err(Error::domain(
            op,
            format!("λr = {x} is at a pole of 1/cosh²"),
        ));
    }
    Ok(())
}

/// `(csch²x, sech²x, tanh²x·sech²x)`, switching to `q = e^{−2x}` far out.
fn hyperbolic_parts(x: Complex64) -> (Complex64, Complex64, Complex64) {
    if x.re > 10.0 {
        let q = (-2.0 * x).exp();
        let one = Complex64::new(1.0, 0.0);
        let m = one - q;
        let p = one + q;
        let csch2 = 4.0 * q / (m * m);
        let sech2 = 4.0 * q / (p * p);
        let t2s2 = 4.0 * q * m * m / (p * p * p * p);
        (csch2, sech2, t2s2)
    } else {
        let s = x.sinh();
        let c = x.cosh();
        let s2 = s * s;
        let c2 = c * c;
        (s2.inv(), c2.inv(), s2 / (c2 * c2))
    }
}

/// `V(r)` for complex `r`.
pub fn eval_potential(p: &PotentialParams, r: Complex64) -> Result<Complex64> {
    if r.norm() == 0.0 {
        return Err(Error::domain("eval_potential", "r = 0 is singular"));
    }
    let x = r * p.lambda;
    check_pole("eval_potential", x)?;
    let (csch2, sech2, t2s2) = hyperbolic_parts(x);
    Ok(csch2 * p.v0 + sech2 * p.v1 + t2s2 * p.v2)
}

/// `V(r)` for real `r > 0`.
pub fn eval_potential_real(p: &PotentialParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(
            "eval_potential",
            format!("r must be > 0, got {r}"),
        ));
    }
    eval_potential(p, Complex64::new(r, 0.0)).map(|v| v.re)
}

/// `V` expressed through `t = tanh²(λr)`.
pub fn eval_rational(p: &PotentialParams, t: f64) -> f64 {
    let [u0, u1, u2] = p.reduced();
    p.lambda * p.lambda * (1.0 - t) * (u0 + u1 * t + u2 * t * t) / t
}

fn regularized_series(p: &PotentialParams, x: Complex64) -> Complex64 {
    let x2 = x * x;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (0..CSCH2_REG.len()).rev() {
        let c = p.v0 * CSCH2_REG[k] + p.v1 * SECH2[k] + p.v2 * TANH2_SECH2[k];
        acc = acc * x2 + c;
    }
    acc
}

/// The truncated small-`r` series of `Ṽ(r)`, whatever the size of `λr`.
pub fn eval_regularized_series(p: &PotentialParams, r: Complex64) -> Complex64 {
    regularized_series(p, r * p.lambda)
}

/// `Ṽ(r) = V(r) − V0/(λr)²`, finite at the origin.
pub fn eval_regularized(p: &PotentialParams, r: Complex64) -> Result<Complex64> {
    let x = r * p.lambda;
    if x.norm() < SERIES_SWITCH {
        return Ok(regularized_series(p, x));
    }
    check_pole("eval_regularized", x)?;
    let (csch2, sech2, t2s2) = hyperbolic_parts(x);
    let csch2_reg = csch2 - (x * x).inv();
    Ok(csch2_reg * p.v0 + sech2 * p.v1 + t2s2 * p.v2)
}

/// Coefficients of `V ≈ c_sing/r² + c0 + (λr)² c2` near the origin.
pub fn near_origin_coeffs(p: &PotentialParams) -> (f64, f64, f64) {
    let c_sing = p.v0 / (p.lambda * p.lambda);
    let c0 = p.v1 - p.v0 / 3.0;
    let c2 = p.v2 - p.v1 + p.v0 / 15.0;
    (c_sing, c0, c2)
}

/// `ℓ̃ = −½ + √((ℓ+½)² + 2u0)`.
pub fn effective_ell(u0: f64, ell: u32) -> Result<f64> {
    let half = ell as f64 + 0.5;
    let radicand = half * half + 2.0 * u0;
    if !(radicand > 0.0) {
        return Err(Error::domain(
            "effective_ell",
            format!("(ℓ+½)² + 2u0 = {radicand} is not positive"),
        ));
    }
    Ok(radicand.sqrt() - 0.5)
}

/// Real roots of `c3 t³ + c2 t² + c1 t + c0` with the discriminant of the
/// monic cubic. Double roots (|Δ| ≤ `double_tol`) are reported once with
/// `true` in the second slot.
pub(crate) fn real_cubic_roots(
    c3: f64,
    c2: f64,
    c1: f64,
    c0: f64,
    double_tol: f64,
) -> Vec<(f64, bool)> {
    let scale = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if c3.abs() <= 1e-14 * scale {
        return real_quadratic_roots(c2, c1, c0, double_tol);
    }
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    let disc =
        18.0 * a * b * c - 4.0 * a.powi(3) * c + a * a * b * b - 4.0 * b.powi(3) - 27.0 * c * c;
    let polish = |t: f64| -> f64 {
        let mut t = t;
        for _ in 0..4 {
            let f = ((t + a) * t + b) * t + c;
            let df = (3.0 * t + 2.0 * a) * t + b;
            if df == 0.0 {
                break;
            }
            let step = f / df;
            t -= step;
            if step.abs() <= 1e-16 * t.abs().max(1.0) {
                break;
            }
        }
        t
    };
    // depressed cubic s³ + ps + q with t = s − a/3
    let p = b - a * a / 3.0;
    let q = 2.0 * a.powi(3) / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    if disc.abs() <= double_tol {
        if p.abs() <= 1e-14 * (1.0 + a * a) {
            return vec![(shift, true)];
        }
        let single = 3.0 * q / p;
        let double = -3.0 * q / (2.0 * p);
        return vec![(polish(single + shift), false), (double + shift, true)];
    }
    if disc > 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| {
                let s = m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
                (polish(s + shift), false)
            })
            .collect()
    } else {
        let d = (q * q / 4.0 + p.powi(3) / 27.0).sqrt();
        let s = (-q / 2.0 + d).cbrt() + (-q / 2.0 - d).cbrt();
        vec![(polish(s + shift), false)]
    }
}

fn real_quadratic_roots(a: f64, b: f64, c: f64, double_tol: f64) -> Vec<(f64, bool)> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if a.abs() <= 1e-14 * scale {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![(-c / b, false)];
    }
    let disc = (b * b - 4.0 * a * c) / (a * a);
    if disc.abs() <= double_tol {
        return vec![(-b / (2.0 * a), true)];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = (b * b - 4.0 * a * c).sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = vec![(q / a, false)];
    if q != 0.0 {
        roots.push((c / q, false));
    }
    roots
}

/// Classify the potential by its critical points in `t ∈ (0, 1)`.
///
/// Critical points solve `−2u2 t³ + (u2 − u1) t² − u0 = 0`.
pub fn classify_configuration(p: &PotentialParams) -> ConfigClass {
    let [u0, u1, u2] = p.reduced();
    let roots = real_cubic_roots(-2.0 * u2, u2 - u1, 0.0, -u0, 1e-9);
    let inside: Vec<(f64, bool)> = roots
        .into_iter()
        .filter(|&(t, _)| t > 0.0 && t < 1.0)
        .collect();
    let mut points: Vec<CriticalPoint> = inside
        .iter()
        .map(|&(t, _)| CriticalPoint {
            t,
            value: eval_rational(p, t),
        })
        .collect();
    points.sort_by(|a, b| a.t.total_cmp(&b.t));

    let kind = if inside.iter().any(|&(_, double)| double) {
        ConfigKind::Inflection
    } else {
        match points.len() {
            0 => ConfigKind::Monotone,
            1 => ConfigKind::BoundOnly,
            _ => {
                // dV/dt → −∞ as t → 0⁺, so the first root is the minimum.
                if points[0].value < 0.0 {
                    ConfigKind::BoundAndResonances
                } else {
                    ConfigKind::ResonancesOnly
                }
            }
        }
    };
    ConfigClass {
        kind,
        critical_points: points,
    }
}
