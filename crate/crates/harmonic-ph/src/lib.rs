//! Harmonic homology and harmonic persistent homology of filtered simplicial
//! complexes.
//!
//! Homology classes are represented by their harmonic representatives, the
//! cycles orthogonal to all boundaries, so every homology group becomes a
//! concrete subspace `Z_p ∩ B_p^perp` of the chain space of one ambient
//! complex. Bars of a filtration then carry subspaces too, and subspaces can
//! be compared with principal angles and the Grassmann distance.
//!
//! ```
//! use harmonic_ph::{barcode, Death, Filtration};
//!
//! // a hollow triangle that gets filled one step later
//! let f = Filtration::from_steps(&[
//!     vec![vec![0], vec![1], vec![2]],
//!     vec![vec![0, 1], vec![1, 2], vec![0, 2]],
//!     vec![vec![0, 1, 2]],
//! ])
//! .unwrap();
//! let bars = barcode::<f64>(&f, 1, 1e-9).unwrap();
//! assert_eq!(bars.len(), 1);
//! assert_eq!((bars[0].bar.s, bars[0].bar.t), (1, Death::Finite(2)));
//! ```

pub mod complex;
pub mod error;
pub mod essential;
pub mod harmonic;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod persistence;
pub mod random;
pub mod scalar;
pub mod stability;
pub mod subspace;

pub use complex::{Chain, Simplex, SimplicialComplex, Subcomplex};
pub use error::{Error, Result};
pub use essential::{content, essential_report, sample_representatives, EssentialReport};
pub use harmonic::{harmonic_basis, laplacian, HarmonicSpace};
pub use persistence::{
    barcode, filtration_from_function, persistent_harmonic_space, terminal_subspace, AdmissibleFunction, Bar, Death,
    Filtration, HarmonicBar, HarmonicPersistence,
};
pub use scalar::Real;
pub use stability::{StabilityReport, StepSubspaceFunction};
pub use subspace::{grassmann_distance, principal_angles, PrincipalAngles, Subspace, DEFAULT_TOL};

pub use oracle::Rational;

pub type Subspace64 = Subspace<f64>;
pub type Subspace32 = Subspace<f32>;
pub type Chain64 = Chain<f64>;
