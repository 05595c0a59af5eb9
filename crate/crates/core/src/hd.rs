//! Hamiltonian diagonalization in the energy-independent Jacobi basis.
//!
//! Setting `μ = 0` removes the energy from the basis. The tridiagonal matrix
//! at that boundary point is the Hamiltonian matrix `H`, and the spectrum
//! follows from `H f = ε Ω f` with the basis overlap `Ω`.
//!
//! At `μ = 0` the overlap integral
//!
//! ```text
//! Ω_nm = (A_n A_m / √2) ∫ (1−x)^{−1} (1+x)^ν P_n P_m dx
//! ```
//!
//! diverges logarithmically at `x = 1`, so it is only defined through the
//! finite quadrature used to evaluate it. The quadrature order is therefore a
//! parameter of the method, defaulting to the basis size.

use nalgebra::DMatrix;

use crate::eigen::{eig_gen_sym, SymTridiag};
use crate::error::{Error, Result};
use crate::orthopoly::{gauss_rule, jacobi_all, JacobiBasisSpec, QuadratureKind};
use crate::tra::{build_j_with, BasisParams};

fn overlap_from_rule(
    spec: &JacobiBasisSpec,
    n: usize,
    rule_nodes: &[f64],
    weights: impl Fn(usize, f64) -> f64,
) -> DMatrix<f64> {
    let norms: Vec<f64> = (0..n).map(|k| spec.norm_const(k)).collect();
    let mut omega = DMatrix::zeros(n, n);
    for (k, &x) in rule_nodes.iter().enumerate() {
        let p = jacobi_all(n - 1, spec.mu, spec.nu, x);
        let w = weights(k, x);
        for i in 0..n {
            let wi = w * norms[i] * p[i];
            for j in 0..=i {
                omega[(i, j)] += wi * norms[j] * p[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            omega[(i, j)] /= std::f64::consts::SQRT_2;
            omega[(j, i)] = omega[(i, j)];
        }
        omega[(i, i)] /= std::f64::consts::SQRT_2;
    }
    omega
}

/// Overlap matrix of the `μ = 0` basis from a `k_quad`-point Gauss–Jacobi rule
/// of weight `(1+x)^ν`, applied to `P_n P_m / (1−x)`.
pub fn hd_overlap(nu: f64, n: usize, k_quad: usize) -> Result<DMatrix<f64>> {
    if !(nu > 0.0) {
        return Err(Error::domain("hd_overlap", format!("ν = {nu} must be > 0")));
    }
    if n == 0 || k_quad < n {
        return Err(Error::domain(
            "hd_overlap",
            format!("need 1 ≤ N ≤ K_quad, got N = {n}, K_quad = {k_quad}"),
        ));
    }
    let rule = gauss_rule(
        QuadratureKind::GaussJacobi {
            alpha: 0.0,
            beta: nu,
        },
        k_quad,
    )?;
    let spec = JacobiBasisSpec::new(0.0, nu, 1.0)?;
    Ok(overlap_from_rule(&spec, n, &rule.nodes, |k, x| {
        rule.weights[k] / (1.0 - x)
    }))
}

/// Overlap matrix of the basis with a regularizing `μ = mu_reg > 0`.
///
/// The weight `(1−x)^{μ−1}(1+x)^ν` is absorbed into the rule, so the result
/// is exact once `k_quad ≥ N`.
pub fn hd_overlap_regularized(
    nu: f64,
    mu_reg: f64,
    n: usize,
    k_quad: usize,
) -> Result<DMatrix<f64>> {
    if !(mu_reg > 0.0) {
        return Err(Error::domain(
            "hd_overlap_regularized",
            format!("μ_reg = {mu_reg} must be > 0"),
        ));
    }
    if !(nu > 0.0) {
        return Err(Error::domain(
            "hd_overlap_regularized",
            format!("ν = {nu} must be > 0"),
        ));
    }
    if n == 0 || k_quad < n {
        return Err(Error::domain(
            "hd_overlap_regularized",
            format!("need 1 ≤ N ≤ K_quad, got N = {n}, K_quad = {k_quad}"),
        ));
    }
    let rule = gauss_rule(
        QuadratureKind::GaussJacobi {
            alpha: mu_reg - 1.0,
            beta: nu,
        },
        k_quad,
    )?;
    let spec = JacobiBasisSpec::new(mu_reg, nu, 1.0)?;
    Ok(overlap_from_rule(&spec, n, &rule.nodes, |k, _| {
        rule.weights[k]
    }))
}

/// The generalized problem `H f = ε Ω f`.
#[derive(Debug, Clone, PartialEq)]
pub struct HdProblem {
    pub h: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub n: usize,
    pub k_quad: usize,
}

impl HdProblem {
    pub fn new(u0: f64, u1: f64, u2: f64, n: usize, k_quad: usize) -> Result<Self> {
        let basis = BasisParams::zero_energy(u0)?;
        let h = Self::hamiltonian(basis, u1, u2, n).to_dense();
        let omega = hd_overlap(basis.nu, n, k_quad)?;
        Ok(Self {
            h,
            omega,
            n,
            k_quad,
        })
    }

    /// The tridiagonal Hamiltonian at `μ = 0`.
    pub fn hamiltonian(basis: BasisParams, u1: f64, u2: f64, n: usize) -> SymTridiag {
        build_j_with(basis, u1, u2, n)
    }

    /// All generalized eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        match eig_gen_sym(&self.h, &self.omega) {
            Ok(e) => Ok(e.values),
            Err(Error::NotPositiveDefinite { pivot, value }) => Err(Error::domain(
                "hd_spectrum",
                format!(
                    "overlap is not positive definite at pivot {pivot} (value {value:e}); \
                     use a smaller N or a larger K_quad (N = {}, K_quad = {})",
                    self.n, self.k_quad
                ),
            )),
            Err(e) => Err(e),
        }
    }

    /// Negative eigenvalues, ascending (deepest first).
    pub fn bound_levels(&self) -> Result<Vec<f64>> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .filter(|&e| e < 0.0)
            .collect())
    }
}

/// Bound levels with `K_quad = N`.
pub fn hd_spectrum(u0: f64, u1: f64, u2: f64, n: usize) -> Result<Vec<f64>> {
    hd_spectrum_with(u0, u1, u2, n, n)
}

pub fn hd_spectrum_with(u0: f64, u1: f64, u2: f64, n: usize, k_quad: usize) -> Result<Vec<f64>> {
    HdProblem::new(u0, u1, u2, n, k_quad)?.bound_levels()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tra::build_sigma;
    use statrs::function::gamma::ln_gamma;

    fn ln_binom(a: f64, k: usize) -> (f64, f64) {
        // ln|C(a, k)| and its sign for real a
        let mut sign = 1.0;
        let mut log = 0.0;
        for i in 0..k {
            let t = (a - i as f64) / (i as f64 + 1.0);
            if t < 0.0 {
                sign = -sign;
            }
            log += t.abs().ln();
        }
        (log, sign)
    }

    /// Explicit sum `P_n^{(a,b)}(x) = Σ_s C(n+a, n−s) C(n+b, s) ((x−1)/2)^s ((x+1)/2)^{n−s}`
    /// integrated term by term against `(1−x)^{c}(1+x)^{d}`.
    fn closed_form_overlap(a: f64, b: f64, c: f64, d: f64, n: usize, m: usize) -> f64 {
        let coeffs = |deg: usize| -> Vec<(f64, f64, usize)> {
            (0..=deg)
                .map(|s| {
                    let (l1, s1) = ln_binom(deg as f64 + a, deg - s);
                    let (l2, s2) = ln_binom(deg as f64 + b, s);
                    let sign = s1 * s2 * if s % 2 == 1 { -1.0 } else { 1.0 };
                    (l1 + l2 - deg as f64 * std::f64::consts::LN_2, sign, s)
                })
                .collect()
        };
        let (cn, cm) = (coeffs(n), coeffs(m));
        let mut total = 0.0;
        for &(la, sa, s) in &cn {
            for &(lb, sb, t) in &cm {
                let p = c + (s + t) as f64;
                let q = d + (n - s + m - t) as f64;
                let beta =
                    (p + q + 1.0) * std::f64::consts::LN_2 + ln_gamma(p + 1.0) + ln_gamma(q + 1.0)
                        - ln_gamma(p + q + 2.0);
                total += sa * sb * (la + lb + beta).exp();
            }
        }
        total
    }

    #[test]
    fn overlap_is_symmetric_with_positive_diagonal() {
        let om = hd_overlap(1.5, 20, 20).unwrap();
        for i in 0..20 {
            assert!(om[(i, i)] > 0.0);
            for j in 0..20 {
                assert_eq!(om[(i, j)], om[(j, i)]);
            }
        }
    }

    #[test]
    fn unregularized_overlap_keeps_growing() {
        let a = hd_overlap(1.5, 5, 50).unwrap()[(0, 0)];
        let b = hd_overlap(1.5, 5, 100).unwrap()[(0, 0)];
        assert!(b > a);
    }

    #[test]
    fn regularized_overlap_matches_closed_form() {
        let (mu, nu, n) = (0.5, 1.5, 6);
        let om = hd_overlap_regularized(nu, mu, n, n + 4).unwrap();
        let spec = JacobiBasisSpec::new(mu, nu, 1.0).unwrap();
        for i in 0..n {
            for j in 0..n {
                let exact = spec.norm_const(i) * spec.norm_const(j) / std::f64::consts::SQRT_2
                    * closed_form_overlap(mu, nu, mu - 1.0, nu, i, j);
                assert!(
                    (om[(i, j)] - exact).abs() <= 1e-8 * (1.0 + exact.abs()),
                    "({i},{j})"
                );
            }
        }
    }

    #[test]
    fn hamiltonian_is_sigma_at_zero_energy() {
        let basis = BasisParams::zero_energy(1.0).unwrap();
        let h = HdProblem::hamiltonian(basis, -50.0, 2.0, 10);
        let s = build_sigma(0.0, basis.nu, 2.0, 10);
        for k in 0..10 {
            assert!((4.0 * h.diag[k] + 0.25 + 100.0 - s.diag[k]).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_short_rule() {
        assert!(hd_overlap(1.5, 10, 9).is_err());
        assert!(hd_overlap(0.0, 10, 10).is_err());
    }
}
