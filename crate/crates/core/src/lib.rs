//! Finite-truncation laboratory for L^p spectral triples.
//!
//! The crate realizes two families of L^p spectral triples on finite
//! coordinate truncations and measures the quantities their theory is
//! about:
//!
//! * [`pspace`]: weighted finite L^p spaces and certified p→p operator norms,
//! * [`tensor`]: spatial tensor products (Kronecker products with a fixed
//!   flattening convention),
//! * [`group`]: reduced group algebras with length-function Dirac operators,
//! * [`uhf`]: L^p UHF algebras of tensor product type with the projection
//!   tower `ι_n, π_n, P_n, Q_n` and the Dirac operator `Σ α_n Q_n`,
//! * [`qmetric`]: states, the spectral (Connes–Rieffel) distance between
//!   states, seminorm-equivalence constants and degeneracy probes,
//! * [`io`]: the text file formats used by the command-line driver.
//!
//! Every operator is a dense complex matrix tagged with its domain and
//! codomain measure spaces ([`pspace::OperatorMatrix`]).

pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod pspace;
pub mod qmetric;
pub mod tensor;
pub mod uhf;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Dense complex matrix used for every operator in the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;
