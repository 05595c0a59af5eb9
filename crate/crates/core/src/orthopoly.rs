//! Jacobi and Laguerre polynomials, the Jacobi basis functions in the
//! `x = 2tanh²(λr) − 1` coordinate, and Gauss rules built by Golub–Welsch.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::eigen::{eig_sym_tridiag, SymTridiag};
use crate::error::{Error, Result};

/// Highest polynomial degree accepted by the recurrences.
pub const MAX_DEGREE: usize = 2000;

fn check_degree(op: &'static str, n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::domain(
            op,
            format!("degree {n} exceeds the cap of {MAX_DEGREE}"),
        ));
    }
    Ok(())
}

fn check_exponent(op: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v > -1.0) {
        return Err(Error::domain(op, format!("{name} must be > −1, got {v}")));
    }
    Ok(())
}

/// `P_n^{(μ,ν)}(x)` by forward recurrence.
pub fn jacobi_eval(n: usize, mu: f64, nu: f64, x: f64) -> Result<f64> {
    check_exponent("jacobi_eval", "mu", mu)?;
    check_exponent("jacobi_eval", "nu", nu)?;
    check_degree("jacobi_eval", n)?;
    Ok(jacobi_all(n, mu, nu, x)[n])
}

/// `P_0 … P_n` at `x`; exponents are not validated.
pub(crate) fn jacobi_all(n: usize, a: f64, b: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(0.5 * (a + b + 2.0) * x + 0.5 * (a - b));
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        let c2 = (s + 1.0) * (a * a - b * b);
        let c3 = s * (s + 1.0) * (s + 2.0);
        let c4 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let i = out.len();
        let next = ((c2 + c3 * x) * out[i - 1] - c4 * out[i - 2]) / c1;
        out.push(next);
    }
    out
}

/// `L_n^α(y)` by forward recurrence; complex `y` accepted.
pub fn laguerre_eval(n: usize, alpha: f64, y: Complex64) -> Result<Complex64> {
    check_exponent("laguerre_eval", "alpha", alpha)?;
    check_degree("laguerre_eval", n)?;
    let one = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(one);
    }
    let mut prev = one;
    let mut cur = one * (1.0 + alpha) - y;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - y) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Weight family of a Gauss rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureKind {
    /// `(1 − x)^α (1 + x)^β` on `[−1, 1]`.
    GaussJacobi { alpha: f64, beta: f64 },
    /// `y^α e^{−y}` on `[0, ∞)`.
    GaussLaguerre { alpha: f64 },
}

impl QuadratureKind {
    /// `∫ w`.
    pub fn total_mass(&self) -> f64 {
        match *self {
            QuadratureKind::GaussJacobi { alpha, beta } => ((alpha + beta + 1.0)
                * std::f64::consts::LN_2
                + ln_gamma(alpha + 1.0)
                + ln_gamma(beta + 1.0)
                - ln_gamma(alpha + beta + 2.0))
            .exp(),
            QuadratureKind::GaussLaguerre { alpha } => ln_gamma(alpha + 1.0).exp(),
        }
    }

    /// Recurrence (Jacobi) matrix of the orthonormal polynomials of order `k`.
    pub fn jacobi_matrix(&self, k: usize) -> SymTridiag {
        let mut diag = Vec::with_capacity(k);
        let mut sub = Vec::with_capacity(k.saturating_sub(1));
        match *self {
            QuadratureKind::GaussJacobi { alpha: a, beta: b } => {
                for n in 0..k {
                    let nf = n as f64;
                    let s = 2.0 * nf + a + b;
                    let d = if n == 0 {
                        (b - a) / (a + b + 2.0)
                    } else {
                        (b * b - a * a) / (s * (s + 2.0))
                    };
                    diag.push(d);
                    if n + 1 < k {
                        let m = nf + 1.0;
                        let s = 2.0 * m + a + b;
                        let b2 = if n == 0 {
                            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
                        } else {
                            4.0 * m * (m + a) * (m + b) * (m + a + b)
                                / (s * s * (s + 1.0) * (s - 1.0))
                        };
                        sub.push(b2.sqrt());
                    }
                }
            }
            QuadratureKind::GaussLaguerre { alpha } => {
                for n in 0..k {
                    let nf = n as f64;
                    diag.push(2.0 * nf + alpha + 1.0);
                    if n + 1 < k {
                        sub.push(((nf + 1.0) * (nf + 1.0 + alpha)).sqrt());
                    }
                }
            }
        }
        SymTridiag { diag, sub }
    }
}

/// Nodes and weights of a Gauss rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Orthonormal polynomial values `q_0(x) … q_{k−1}(x)` for the weight whose
/// recurrence matrix is `jm`, rescaled so that `q_0 = 1`, together with
/// `ln` of the rescaling applied to keep the numbers finite.
fn orthonormal_values(jm: &SymTridiag, x: f64, count: usize) -> (Vec<f64>, f64) {
    let mut q = Vec::with_capacity(count);
    let mut log_scale = 0.0;
    q.push(1.0);
    if count > 1 {
        q.push((x - jm.diag[0]) / jm.sub[0]);
    }
    for n in 1..count.saturating_sub(1) {
        let next = ((x - jm.diag[n]) * q[n] - jm.sub[n - 1] * q[n - 1]) / jm.sub[n];
        q.push(next);
        if next.abs() > 1e150 {
            for v in q.iter_mut() {
                *v *= 1e-150;
            }
            log_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    (q, log_scale)
}

/// The normalized eigenvector of the recurrence matrix at node `x`:
/// component `n` is `√w · q_n(x)` with `q_n` orthonormal for the weight.
pub(crate) fn node_eigenvector(jm: &SymTridiag, x: f64) -> Vec<f64> {
    let (q, _) = orthonormal_values(jm, x, jm.len());
    let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    q.into_iter().map(|v| v / norm).collect()
}

/// Gauss rule of order `k` by Golub–Welsch.
///
/// Nodes are the eigenvalues of the recurrence matrix. The first component
/// of each normalized eigenvector is formed from the orthonormal recurrence
/// at the node, which keeps tiny weights (far Laguerre nodes) accurate to
/// full relative precision.
pub fn gauss_rule(kind: QuadratureKind, k: usize) -> Result<QuadratureRule> {
    if k == 0 {
        return Err(Error::domain("gauss_rule", "order must be ≥ 1"));
    }
    match kind {
        QuadratureKind::GaussJacobi { alpha, beta } => {
            check_exponent("gauss_rule", "alpha", alpha)?;
            check_exponent("gauss_rule", "beta", beta)?;
        }
        QuadratureKind::GaussLaguerre { alpha } => check_exponent("gauss_rule", "alpha", alpha)?,
    }
    let jm = kind.jacobi_matrix(k);
    let nodes = eig_sym_tridiag(&jm, false)?.values;
    let mass = kind.total_mass();
    let weights = nodes
        .iter()
        .map(|&x| {
            let (q, log_scale) = orthonormal_values(&jm, x, k);
            let sum: f64 = q.iter().map(|v| v * v).sum();
            mass * (-(sum.ln() + 2.0 * log_scale)).exp()
        })
        .collect();
    Ok(QuadratureRule {
        kind,
        nodes,
        weights,
    })
}

/// Jacobi basis `φ_n(x) = A_n (1−x)^{μ/2} (1+x)^{ν/2+¼} P_n^{(μ,ν)}(x)` in the
/// coordinate `x(r) = 2tanh²(λr) − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiBasisSpec {
    pub mu: f64,
    pub nu: f64,
    pub lambda: f64,
}

impl JacobiBasisSpec {
    pub fn new(mu: f64, nu: f64, lambda: f64) -> Result<Self> {
        check_exponent("JacobiBasisSpec", "mu", mu)?;
        check_exponent("JacobiBasisSpec", "nu", nu)?;
        if !(lambda > 0.0) {
            return Err(Error::domain("JacobiBasisSpec", "lambda must be > 0"));
        }
        Ok(Self { mu, nu, lambda })
    }

    /// Exponent of `(1 − x)`.
    pub fn alpha(&self) -> f64 {
        self.mu / 2.0
    }

    /// Exponent of `(1 + x)`.
    pub fn beta(&self) -> f64 {
        self.nu / 2.0 + 0.25
    }

    /// Normalization `A_n`.
    pub fn norm_const(&self, n: usize) -> f64 {
        let (mu, nu) = (self.mu, self.nu);
        let nf = n as f64;
        let log = (2.0 * nf + mu + nu + 1.0).ln() - (mu + nu + 0.5) * std::f64::consts::LN_2
            + ln_gamma(nf + 1.0)
            + ln_gamma(nf + mu + nu + 1.0)
            - ln_gamma(nf + nu + 1.0)
            - ln_gamma(nf + mu + 1.0);
        (0.5 * log).exp()
    }

    /// `(1 − x, 1 + x)` at radius `r`, each without cancellation.
    pub fn coordinate(&self, r: f64) -> (f64, f64) {
        let z = self.lambda * r;
        let one_minus = 2.0 / z.cosh().powi(2);
        let one_plus = 2.0 * z.tanh().powi(2);
        (one_minus, one_plus)
    }

    /// `φ_0(r) … φ_{count−1}(r)`.
    pub fn eval_all(&self, count: usize, r: f64) -> Vec<f64> {
        if count == 0 {
            return Vec::new();
        }
        let (om, op) = self.coordinate(r);
        let envelope = om.powf(self.alpha()) * op.powf(self.beta());
        let x = op - 1.0;
        jacobi_all(count - 1, self.mu, self.nu, x)
            .into_iter()
            .enumerate()
            .map(|(n, p)| self.norm_const(n) * envelope * p)
            .collect()
    }
}

/// `φ_n(r)`.
pub fn jacobi_basis_eval(spec: &JacobiBasisSpec, n: usize, r: f64) -> Result<f64> {
    check_degree("jacobi_basis_eval", n)?;
    if !(r >= 0.0) {
        return Err(Error::domain(
            "jacobi_basis_eval",
            format!("r must be ≥ 0, got {r}"),
        ));
    }
    Ok(spec.eval_all(n + 1, r)[n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jacobi_low_degrees() {
        assert_eq!(jacobi_eval(0, 0.3, 1.7, 0.2).unwrap(), 1.0);
        let (mu, nu, x) = (0.3, 1.7, 0.2);
        let p1 = jacobi_eval(1, mu, nu, x).unwrap();
        assert_relative_eq!(
            p1,
            (mu + nu + 2.0) * x / 2.0 + (mu - nu) / 2.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(jacobi_eval(3, 0.0, 0.0, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        // endpoint value binom(n+μ, n)
        assert_relative_eq!(
            jacobi_eval(4, 2.0, 0.5, 1.0).unwrap(),
            15.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn jacobi_domain_checks() {
        assert!(jacobi_eval(2, -1.0, 0.0, 0.0).is_err());
        assert!(jacobi_eval(2, 0.0, -1.5, 0.0).is_err());
        assert!(jacobi_eval(MAX_DEGREE + 1, 0.0, 0.0, 0.0).is_err());
        assert!(jacobi_eval(MAX_DEGREE, 0.0, 0.0, 0.3).unwrap().is_finite());
    }

    #[test]
    fn jacobi_differential_equation() {
        // d/dx P_n^{(a,b)} = (n+a+b+1)/2 · P_{n−1}^{(a+1,b+1)}
        let deriv = |n: usize, a: f64, b: f64, x: f64| -> f64 {
            if n == 0 {
                0.0
            } else {
                (n as f64 + a + b + 1.0) / 2.0 * jacobi_eval(n - 1, a + 1.0, b + 1.0, x).unwrap()
            }
        };
        for &(n, mu, nu) in &[
            (3usize, 0.5, 1.5),
            (7, 2.0, 1.5),
            (12, 0.0, 3.2),
            (40, 1.3, 0.7),
        ] {
            for &x in &[-0.7, -0.2, 0.1, 0.55, 0.8] {
                let p = jacobi_eval(n, mu, nu, x).unwrap();
                let d1 = deriv(n, mu, nu, x);
                let d2 = if n < 2 {
                    0.0
                } else {
                    (n as f64 + mu + nu + 1.0) / 2.0 * deriv(n - 1, mu + 1.0, nu + 1.0, x)
                };
                let nf = n as f64;
                let res = (1.0 - x * x) * d2
                    + (nu - mu - (mu + nu + 2.0) * x) * d1
                    + nf * (nf + mu + nu + 1.0) * p;
                let scale = (1.0 - x * x) * d2.abs()
                    + (mu + nu + 2.0) * d1.abs()
                    + nf * (nf + mu + nu + 1.0) * p.abs();
                assert!(res.abs() <= 1e-12 * scale, "n={n} x={x} res={res}");
            }
        }
    }

    #[test]
    fn laguerre_low_degrees() {
        let y = Complex64::new(0.7, -0.3);
        assert_eq!(laguerre_eval(0, 1.2, y).unwrap(), Complex64::new(1.0, 0.0));
        let l1 = laguerre_eval(1, 1.2, y).unwrap();
        assert!((l1 - (Complex64::new(2.2, 0.0) - y)).norm() < 1e-15);
        let l2 = laguerre_eval(2, 0.0, Complex64::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(l2.re, -0.5, epsilon = 1e-15);
        assert!(laguerre_eval(2, -1.0, y).is_err());
    }

    #[test]
    fn laguerre_rules_small_orders() {
        let r = gauss_rule(QuadratureKind::GaussLaguerre { alpha: 0.0 }, 1).unwrap();
        assert_relative_eq!(r.nodes[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(r.weights[0], 1.0, epsilon = 1e-15);
        let r = gauss_rule(QuadratureKind::GaussLaguerre { alpha: 0.0 }, 2).unwrap();
        assert_relative_eq!(r.nodes[0], 2.0 - 2f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(r.nodes[1], 2.0 + 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn weights_sum_to_mass() {
        for &alpha in &[0.0, 0.5, 2.3, 7.1] {
            let r = gauss_rule(QuadratureKind::GaussLaguerre { alpha }, 30).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert_relative_eq!(total, ln_gamma(alpha + 1.0).exp(), max_relative = 1e-12);
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
        }
        let kind = QuadratureKind::GaussJacobi {
            alpha: -0.5,
            beta: 1.5,
        };
        let r = gauss_rule(kind, 25).unwrap();
        assert_relative_eq!(
            r.weights.iter().sum::<f64>(),
            kind.total_mass(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(gauss_rule(QuadratureKind::GaussLaguerre { alpha: 0.0 }, 0).is_err());
        assert!(gauss_rule(
            QuadratureKind::GaussJacobi {
                alpha: -1.0,
                beta: 0.0
            },
            3
        )
        .is_err());
    }

    #[test]
    fn basis_boundary_values() {
        let spec = JacobiBasisSpec::new(2.0, 1.5, 1.0).unwrap();
        for n in 0..6 {
            assert_eq!(jacobi_basis_eval(&spec, n, 0.0).unwrap(), 0.0);
            assert!(jacobi_basis_eval(&spec, n, 30.0).unwrap().abs() < 1e-20);
        }
    }
}
