//! Eigenvalue kernels.
//!
//! * [`eig_sym_tridiag`]: implicit QL with Wilkinson shifts on a symmetric
//!   tridiagonal matrix, optionally accumulating eigenvectors.
//! * [`eig_gen_sym`]: `A f = E B f` with `A` symmetric and `B` positive
//!   definite, reduced by Cholesky to a standard symmetric problem.
//! * [`eig_gen_complex`]: the same reduction for a complex (non-Hermitian)
//!   `A`, followed by a complex Schur decomposition.
//!
//! Dense decompositions are delegated to `nalgebra`; the tridiagonal solver
//! and the Cholesky factorization are local so that failures carry the
//! pivot index.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix stored as its diagonal and first subdiagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag<T = f64> {
    pub diag: Vec<T>,
    pub sub: Vec<T>,
}

impl<T: Copy + Default + std::ops::Neg<Output = T>> SymTridiag<T> {
    pub fn new(diag: Vec<T>, sub: Vec<T>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Dimension(
                "tridiagonal matrix must have N ≥ 1".into(),
            ));
        }
        if sub.len() + 1 != diag.len() {
            return Err(Error::Dimension(format!(
                "diagonal has {} entries but subdiagonal has {}",
                diag.len(),
                sub.len()
            )));
        }
        Ok(Self { diag, sub })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> T {
        if i == j {
            self.diag[i]
        } else if i + 1 == j {
            self.sub[i]
        } else if j + 1 == i {
            self.sub[j]
        } else {
            T::default()
        }
    }
}

impl<T> SymTridiag<T>
where
    T: nalgebra::Scalar + Copy + Default + std::ops::Neg<Output = T>,
{
    pub fn to_dense(&self) -> DMatrix<T> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| self.get(i, j))
    }
}

impl SymTridiag<f64> {
    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|x| x * x).sum();
        let s: f64 = self.sub.iter().map(|x| x * x).sum();
        (d + 2.0 * s).sqrt()
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.sub[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }
}

/// Eigen-decomposition of a real symmetric matrix; vectors are columns.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Option<DMatrix<f64>>,
}

const QL_MAX_SWEEPS: usize = 60;

/// All eigenvalues (ascending) of a symmetric tridiagonal matrix, plus the
/// orthonormal eigenvectors when `want_vectors` is set.
pub fn eig_sym_tridiag(m: &SymTridiag<f64>, want_vectors: bool) -> Result<SymEigen> {
    let n = m.len();
    let mut d = m.diag.clone();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&m.sub);
    let mut z = want_vectors.then(|| DMatrix::<f64>::identity(n, n));

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut mm = l;
        while mm < n {
            if e[mm].abs() <= f64::EPSILON * tst1 {
                break;
            }
            mm += 1;
        }
        if mm > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        solver: "tridiagonal QL",
                        iterations: QL_MAX_SWEEPS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[mm];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..mm).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_mut() {
                        for k in 0..n {
                            let zk1 = z[(k, i + 1)];
                            let zk = z[(k, i)];
                            z[(k, i + 1)] = s * zk + c * zk1;
                            z[(k, i)] = c * zk - s * zk1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= f64::EPSILON * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = z.map(|z| DMatrix::from_fn(n, n, |r, c| z[(r, order[c])]));
    Ok(SymEigen { values, vectors })
}

/// Lower Cholesky factor `L` with `B = L Lᵀ`.
pub fn cholesky(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::Dimension(format!(
            "{}x{} matrix is not square",
            n,
            b.ncols()
        )));
    }
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut s = b[(j, j)];
        for k in 0..j {
            s -= l[(j, k)] * l[(j, k)];
        }
        if !(s > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: s });
        }
        let ljj = s.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = b[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

fn check_pair(a_rows: usize, a_cols: usize, b: &DMatrix<f64>) -> Result<()> {
    if a_rows != a_cols || b.nrows() != b.ncols() || a_rows != b.nrows() {
        return Err(Error::Dimension(format!(
            "A is {}x{}, B is {}x{}",
            a_rows,
            a_cols,
            b.nrows(),
            b.ncols()
        )));
    }
    if a_rows == 0 {
        return Err(Error::Dimension("empty matrices".into()));
    }
    Ok(())
}

/// `L⁻¹ A L⁻ᵀ` for lower-triangular `L`.
fn congruence<T>(l: &DMatrix<T>, a: &DMatrix<T>) -> DMatrix<T>
where
    T: nalgebra::ComplexField + Copy,
{
    let x = l
        .solve_lower_triangular(a)
        .expect("Cholesky factor has a positive diagonal");
    let xt = x.transpose();
    l.solve_lower_triangular(&xt)
        .expect("Cholesky factor has a positive diagonal")
        .transpose()
}

/// Generalized symmetric-definite eigenpairs, ascending.
#[derive(Debug, Clone)]
pub struct GenSymEigen {
    pub values: Vec<f64>,
    /// `B`-orthonormal eigenvectors as columns.
    pub vectors: DMatrix<f64>,
}

/// Solve `A f = E B f` for symmetric `A` and symmetric positive definite `B`.
pub fn eig_gen_sym(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<GenSymEigen> {
    check_pair(a.nrows(), a.ncols(), b)?;
    let n = a.nrows();
    let l = cholesky(b)?;
    let mut c = congruence(&l, a);
    // symmetrize away rounding from the two triangular solves
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = avg;
            c[(j, i)] = avg;
        }
    }
    let eig = SymmetricEigen::try_new(c, f64::EPSILON, 1000 * n).ok_or(Error::NoConvergence {
        solver: "dense symmetric eigen",
        iterations: 1000 * n,
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let y = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let vectors = l
        .transpose()
        .solve_upper_triangular(&y)
        .expect("Cholesky factor has a positive diagonal");
    Ok(GenSymEigen { values, vectors })
}

/// Eigenvalues of a complex pencil, unordered, with a backward-error probe
/// for each.
#[derive(Debug, Clone)]
pub struct ComplexEigen {
    pub values: Vec<Complex64>,
    /// `‖(A − E B) v‖ / ((‖A‖ + |E|‖B‖)‖v‖)` for an inverse-iteration vector `v`,
    /// empty when the probe was not requested.
    pub residuals: Vec<f64>,
}

impl ComplexEigen {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Solve `A f = E B f` for complex `A` and real symmetric positive definite `B`.
///
/// With `probe_residuals` set, one step of inverse iteration from a fixed
/// pseudo-random start vector is run for every eigenvalue and the relative
/// residual is recorded.
pub fn eig_gen_complex(
    a: &DMatrix<Complex64>,
    b: &DMatrix<f64>,
    probe_residuals: bool,
) -> Result<ComplexEigen> {
    check_pair(a.nrows(), a.ncols(), b)?;
    let n = a.nrows();
    let l = cholesky(b)?;
    let lc: DMatrix<Complex64> = l.map(|x| Complex64::new(x, 0.0));
    let c = congruence(&lc, a);
    let max_iter = 1000 * n;
    let schur = Schur::try_new(c, f64::EPSILON, max_iter).ok_or(Error::NoConvergence {
        solver: "complex Schur",
        iterations: max_iter,
    })?;
    let values: Vec<Complex64> = schur
        .eigenvalues()
        .ok_or(Error::NoConvergence {
            solver: "complex Schur",
            iterations: max_iter,
        })?
        .iter()
        .copied()
        .collect();

    let residuals = if probe_residuals {
        let bc: DMatrix<Complex64> = b.map(|x| Complex64::new(x, 0.0));
        let a_norm = a.norm();
        let b_norm = b.norm();
        values
            .iter()
            .enumerate()
            .map(|(k, &e)| probe_residual(a, &bc, e, a_norm, b_norm, k as u64))
            .collect()
    } else {
        Vec::new()
    };
    Ok(ComplexEigen { values, residuals })
}

fn probe_vector(n: usize, seed: u64) -> DVector<Complex64> {
    let mut state = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(0x2545_F491_4F6C_DD1D);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    DVector::from_fn(n, |_, _| Complex64::new(next(), next()))
}

fn probe_residual(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    e: Complex64,
    a_norm: f64,
    b_norm: f64,
    seed: u64,
) -> f64 {
    let m = a - b * e;
    let probe = probe_vector(a.nrows(), seed);
    let scale = a_norm + e.norm() * b_norm;
    match m.clone().lu().solve(&probe) {
        Some(v) => {
            let vn = v.norm();
            if vn == 0.0 || !vn.is_finite() {
                return 0.0;
            }
            (&m * &v).norm() / (scale * vn)
        }
        // exactly singular: E is an exact eigenvalue of the pencil
        None => 0.0,
    }
}
