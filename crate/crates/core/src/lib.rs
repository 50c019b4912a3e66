//! Helmholtzian (Hodge 1-Laplacian) matrices of simple graphs: construction,
//! exact characteristic polynomials, spectra, nullity, coefficient formulas
//! and closed-form spectra of named graph families.

pub mod combinatorics;
pub mod corpus;
pub mod error;
pub mod families;
pub mod graph;
pub mod helmholtzian;
pub mod incidence;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Graph, Triangle};
pub use helmholtzian::{HelmholtzianMatrix, Provenance, SignedLoopGraph};
pub use incidence::{canonical_orientation, Orientation};
pub use matrix::IntMatrix;
pub use poly::CharPoly;
pub use spectral::{Spectrum, SpectrumKind};
