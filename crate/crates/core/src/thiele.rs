//! Thiele continued-fraction interpolation.
//!
//! ```text
//! f(x) = a0 + (x − x0) / (a1 + (x − x1) / (a2 + … + (x − x_{n−2}) / a_{n−1}))
//! ```
//!
//! The `a_k` are reciprocal (inverse) differences of the samples. The
//! interpolant is rational and passes through every sample.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ThieleInterpolant {
    nodes: Vec<f64>,
    coeffs: Vec<f64>,
}

impl ThieleInterpolant {
    /// Fit through `(xs[i], ys[i])`; nodes must be distinct.
    pub fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() || xs.is_empty() {
            return Err(Error::Dimension(format!(
                "{} abscissae for {} ordinates",
                xs.len(),
                ys.len()
            )));
        }
        let n = xs.len();
        let mut phi = ys.to_vec();
        let mut coeffs = Vec::with_capacity(n);
        coeffs.push(phi[0]);
        for k in 1..n {
            let pivot = phi[k - 1];
            for i in k..n {
                let den = phi[i] - pivot;
                if den == 0.0 || !den.is_finite() {
                    return Err(Error::DegenerateInterpolant(k));
                }
                phi[i] = (xs[i] - xs[k - 1]) / den;
            }
            coeffs.push(phi[k]);
        }
        Ok(Self {
            nodes: xs.to_vec(),
            coeffs,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.coeffs.len();
        let mut v = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            let num = x - self.nodes[k];
            v = if num == 0.0 {
                self.coeffs[k]
            } else {
                self.coeffs[k] + num / v
            };
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_rational_function() {
        let f = |x: f64| (1.0 + 2.0 * x) / (3.0 + x * x);
        let xs: Vec<f64> = (0..7).map(|i| i as f64 * 0.37 - 1.1).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let t = ThieleInterpolant::fit(&xs, &ys).unwrap();
        for &x in &[-0.77, 0.1, 1.3, 2.9] {
            assert!((t.eval(x) - f(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn single_point_is_constant() {
        let t = ThieleInterpolant::fit(&[2.0], &[5.0]).unwrap();
        assert_eq!(t.eval(-3.0), 5.0);
    }

    #[test]
    fn repeated_values_are_degenerate() {
        assert!(matches!(
            ThieleInterpolant::fit(&[0.0, 1.0, 2.0], &[1.0, 1.0, 3.0]),
            Err(Error::DegenerateInterpolant(1))
        ));
    }

    proptest! {
        #[test]
        fn interpolates_samples(seed in 0u64..1000, n in 2usize..12) {
            let xs: Vec<f64> = (0..n).map(|i| i as f64 + 0.1 * ((seed + i as u64) % 7) as f64).collect();
            let ys: Vec<f64> = xs.iter().map(|&x| (0.3 * x + seed as f64 * 1e-3).sin() + 2.0).collect();
            if let Ok(t) = ThieleInterpolant::fit(&xs, &ys) {
                for (x, y) in xs.iter().zip(&ys) {
                    prop_assert!((t.eval(*x) - y).abs() <= 1e-9 * y.abs().max(1.0));
                }
            }
        }
    }
}
