//! Algebraic core for equivariant oriented cohomology of flag varieties:
//! formal group laws over the Lazard ring, root data, GKM graphs, Demazure
//! and Bott-Samelson classes, and wonderful compactifications of symmetric
//! spaces of minimal rank.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod fgl;
pub mod gkm;
pub mod lattice;
pub mod lazard;
pub mod linalg;
pub mod mono;
pub mod roots;
pub mod scalar;
pub mod schubert;
pub mod series;
pub mod symmetric;

pub use fgl::{FglContext, FglError, LawSpec};
pub use gkm::{flag_gkm, GkmClass, GkmEdge, GkmError, GkmGraph, TensorClass};
pub use lattice::IntMatrix;
pub use linalg::CoeffMode;
pub use lazard::LazardElement;
pub use mono::Mono;
pub use roots::{RootDatum, RootError, RootType, WeylElement};
pub use scalar::Scalar;
pub use series::{GradedSeries, SeriesError};
pub use symmetric::{verify_esph, EsphReport, ProjectiveModel, SymmetricDatum, SymmetricError, WonderfulGraph};
