//! Tridiagonal representation of the wave operator in the Jacobi basis.
//!
//! Choosing `μ² = −2ε` and `ν² = 2u0 + ¼` removes the two non-linear terms of
//! the wave operator, so that `J/λ²` is symmetric tridiagonal:
//!
//! ```text
//! J_nn   = (n + (μ+ν+1)/2)² − 1/16 + u1/2 + (u2/4)(1 + C_n)
//! J_n,n+1 = (u2/4) D_n
//! ```
//!
//! `J f = 0` is then a three-term recursion for the expansion coefficients,
//! equivalently the eigenproblem `Σ P = (¼ − 2u1) P` with `Σ = 4J/λ² + (¼ − 2u1)I`.
//! Everything here works in `λ = 1` units.

use crate::eigen::SymTridiag;
use crate::error::{Error, Result};

/// Hard cap on the number of recursion terms.
pub const MAX_RECURSION_TERMS: usize = 200;

/// Jacobi exponents `(μ, ν)` of the basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    pub mu: f64,
    pub nu: f64,
}

fn nu_of(u0: f64) -> Result<f64> {
    let r = 2.0 * u0 + 0.25;
    if !(r > 0.0) {
        return Err(Error::domain(
            "basis_params",
            format!("u0 = {u0} must exceed −1/8"),
        ));
    }
    Ok(r.sqrt())
}

/// `(μ, ν) = (√(−2ε), √(2u0 + ¼))` for a strictly negative energy.
pub fn basis_params(eps: f64, u0: f64) -> Result<BasisParams> {
    if !(eps < 0.0) {
        return Err(Error::domain(
            "basis_params",
            format!("energy ε = {eps} must be negative"),
        ));
    }
    Ok(BasisParams {
        mu: (-2.0 * eps).sqrt(),
        nu: nu_of(u0)?,
    })
}

impl BasisParams {
    /// The zero-energy boundary case `μ = 0`, used by Hamiltonian
    /// diagonalization where the basis no longer depends on the energy.
    pub fn zero_energy(u0: f64) -> Result<Self> {
        Ok(Self {
            mu: 0.0,
            nu: nu_of(u0)?,
        })
    }
}

/// `(C_n, D_n)`.
pub fn recursion_coeffs(n: usize, mu: f64, nu: f64) -> (f64, f64) {
    let nf = n as f64;
    let s = 2.0 * nf + mu + nu;
    let c = if s == 0.0 {
        0.0
    } else {
        (nu * nu - mu * mu) / (s * (s + 2.0))
    };
    let d = 2.0 / (s + 2.0)
        * ((nf + 1.0) * (nf + mu + 1.0) * (nf + nu + 1.0) * (nf + mu + nu + 1.0)
            / ((s + 1.0) * (s + 3.0)))
            .sqrt();
    (c, d)
}

/// `J/λ²` in the basis fixed by `(μ, ν)`.
pub fn build_j_with(basis: BasisParams, u1: f64, u2: f64, n: usize) -> SymTridiag {
    let BasisParams { mu, nu } = basis;
    let diag = (0..n)
        .map(|k| {
            let (c, _) = recursion_coeffs(k, mu, nu);
            let a = k as f64 + (mu + nu + 1.0) / 2.0;
            a * a - 1.0 / 16.0 + u1 / 2.0 + u2 / 4.0 * (1.0 + c)
        })
        .collect();
    let sub = (0..n.saturating_sub(1))
        .map(|k| u2 / 4.0 * recursion_coeffs(k, mu, nu).1)
        .collect();
    SymTridiag { diag, sub }
}

/// `J/λ²` at dimensionless energy `eps < 0`.
pub fn build_j(eps: f64, u0: f64, u1: f64, u2: f64, n: usize) -> Result<SymTridiag> {
    if n == 0 {
        return Err(Error::domain("build_J", "basis size must be ≥ 1"));
    }
    Ok(build_j_with(basis_params(eps, u0)?, u1, u2, n))
}

/// The recursion matrix `Σ`, whose eigenvalues are the admissible `¼ − 2u1`.
pub fn build_sigma(mu: f64, nu: f64, u2: f64, n: usize) -> SymTridiag {
    let diag = (0..n)
        .map(|k| {
            let (c, _) = recursion_coeffs(k, mu, nu);
            let a = 2.0 * k as f64 + mu + nu + 1.0;
            a * a + u2 * (1.0 + c)
        })
        .collect();
    let sub = (0..n.saturating_sub(1))
        .map(|k| u2 * recursion_coeffs(k, mu, nu).1)
        .collect();
    SymTridiag { diag, sub }
}

/// Values `P_0 … P_{N−1}` of the recursion polynomials at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionState {
    pub basis: BasisParams,
    pub values: Vec<f64>,
}

/// Forward recursion `P_{n+1} = [(¼−2u1 − Σ_nn) P_n − u2 D_{n−1} P_{n−1}] / (u2 D_n)`.
pub fn eval_p(eps: f64, u0: f64, u1: f64, u2: f64, count: usize) -> Result<RecursionState> {
    if u2 == 0.0 {
        return Err(Error::DegenerateRecursion);
    }
    if count == 0 || count > MAX_RECURSION_TERMS {
        return Err(Error::domain(
            "eval_P",
            format!("term count {count} outside 1..={MAX_RECURSION_TERMS}"),
        ));
    }
    let basis = basis_params(eps, u0)?;
    let values = recursion_values(basis, u1, u2, count);
    if let Some(n) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain(
            "eval_P",
            format!("recursion overflowed at term {n} of {count}"),
        ));
    }
    Ok(RecursionState { basis, values })
}

pub(crate) fn recursion_values(basis: BasisParams, u1: f64, u2: f64, count: usize) -> Vec<f64> {
    let BasisParams { mu, nu } = basis;
    let target = 0.25 - 2.0 * u1;
    let mut p = Vec::with_capacity(count);
    p.push(1.0);
    if count == 1 {
        return p;
    }
    let (_, d0) = recursion_coeffs(0, mu, nu);
    let p1 = -1.0 / (u2 * d0)
        * (2.0 * u1 + 2.0 * u2 * (nu + 1.0) / (mu + nu + 2.0) + (mu + nu + 1.0).powi(2) - 0.25);
    p.push(p1);
    for n in 1..count - 1 {
        let (c, d) = recursion_coeffs(n, mu, nu);
        let (_, d_prev) = recursion_coeffs(n - 1, mu, nu);
        let a = 2.0 * n as f64 + mu + nu + 1.0;
        let diag = a * a + u2 * (1.0 + c);
        let next = ((target - diag) * p[n] - u2 * d_prev * p[n - 1]) / (u2 * d);
        p.push(next);
    }
    p
}

/// Closed-form spectrum of the `u2 = 0` (Pöschl–Teller) limit.
///
/// `ε_n = −½ (2n + 1 + √(¼+2u0) − √(¼−2u1))²` for the levels with a negative
/// argument, ascending (deepest first).
pub fn pt_spectrum(u0: f64, u1: f64) -> Result<Vec<f64>> {
    let a = 0.25 + 2.0 * u0;
    let b = 0.25 - 2.0 * u1;
    if !(a > 0.0) {
        return Err(Error::domain(
            "pt_spectrum",
            format!("u0 = {u0} must exceed −1/8"),
        ));
    }
    if !(b >= 0.0) {
        return Err(Error::domain(
            "pt_spectrum",
            format!("u1 = {u1} must not exceed 1/8"),
        ));
    }
    let shift = 1.0 + a.sqrt() - b.sqrt();
    let n_max = (0.5 * shift.abs()).floor() as usize;
    Ok((0..=n_max)
        .map(|n| 2.0 * n as f64 + shift)
        .take_while(|&arg| arg < 0.0)
        .map(|arg| -0.5 * arg * arg)
        .collect())
}
