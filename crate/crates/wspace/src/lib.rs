//! Numerical toolkit for quantum mechanics in a monotone polynomial coordinate.
//!
//! Given an admissible polynomial `W(x)` — odd leading and trailing powers,
//! non-negative coefficients, each even coefficient dominated by the next lower
//! odd one — the map `u = W(x)` is a monotone bijection of the real line. This
//! crate builds the numerical machinery that lives naturally in that
//! coordinate:
//!
//! * [`superpotential`] — validation, evaluation, inversion, and the
//!   associated ground-state / partner-potential profiles;
//! * [`grids`] — quadrature grids in the `x` and `u = W(x)` domains, sampled
//!   signals, measure-aware inner products, and resampling between domains;
//! * [`operators`] — the one-parameter family of discretized momentum
//!   operators conjugate to `W`, their adjointness defects, the similarity
//!   transform connecting family members, and canonical commutator checks;
//! * [`bases`] — mutually unbiased position / momentum / chirp bases, the
//!   biorthogonal eigenstate family, and the `W`-deformed oscillator basis;
//! * [`wtransform`] — the generalized Fourier transform with direct quadrature
//!   and FFT-accelerated paths, plus windowed (spectrogram) analysis;
//! * [`phase_space`] — ladder algebra on oscillator coefficients, coherent
//!   states, Wigner distributions, and uncertainty products;
//! * [`io`] — CSV/JSON readers and writers for signals, spectra, and reports;
//! * [`verify`] — the end-to-end verification suite used by both the
//!   integration tests and the command-line `verify` subcommand.
//!
//! Everything is dimensionless with `hbar = 1`.
//!
//! # Quick start
//!
//! ```
//! use wspace::{Superpotential, Grid};
//!
//! // W(x) = x + x^3, strictly monotone.
//! let w = Superpotential::validate(&[1.0, 0.0, 1.0]).unwrap();
//! assert!(w.is_strictly_monotone());
//!
//! // Uniform position grid and the image coordinate u = W(x).
//! let grid = Grid::uniform_x(-8.0, 8.0, 256).unwrap();
//! let u = grid.u_coords(&w);
//! assert!(u[0] < u[255]);
//!
//! // Round-trip through the inverse map.
//! let x = w.invert(u[17]).unwrap();
//! assert!((x - grid.nodes()[17]).abs() < 1e-10);
//! ```

pub mod bases;
pub mod grids;
pub mod io;
pub mod operators;
pub mod phase_space;
pub mod superpotential;
pub mod verify;
pub mod wtransform;

pub use grids::{Grid, MeasureTag, Representation, SampledSignal};
pub use superpotential::{MonotonicityClass, Superpotential};

#[cfg(test)]
pub(crate) mod test_support;
