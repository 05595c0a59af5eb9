//! Spectra of the radial potential
//!
//! ```text
//! V(r) = V0 csch²(λr) + V1 sech²(λr) + V2 tanh²(λr) sech²(λr)
//! ```
//!
//! by three independent routes:
//!
//! * [`pps`]: the tridiagonal (Jacobi-basis) representation, solved as a
//!   potential-parameter spectrum. Exact to the truncation of the basis.
//! * [`hd`]: plain Hamiltonian diagonalization in the same basis at zero energy.
//! * [`cs`]: complex scaling in a Laguerre basis, which also yields resonances.
//!
//! Dimensionless couplings are `u_i = V_i/λ²` and energies are `ε = E/λ²`
//! unless stated otherwise. Units follow `ħ = m = 1`.
//!
//! ```
//! use tra_spectrum::pps::{pps_spectrum, PpsOptions};
//!
//! let levels = pps_spectrum(1.0, -50.0, 2.0, 50, &PpsOptions::default()).unwrap();
//! assert_eq!(levels.len(), 4);
//! assert!((levels.energies()[0] + 27.878950096074).abs() < 1e-10);
//! ```

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cs;
pub mod eigen;
pub mod error;
pub mod hd;
pub mod orthopoly;
pub mod potential;
pub mod pps;
pub mod roots;
pub mod thiele;
pub mod tra;

pub use error::{Error, Result};
pub use potential::{ConfigKind, PotentialParams};
