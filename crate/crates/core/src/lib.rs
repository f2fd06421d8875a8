//! Anyon algebra, puncture-pair codes and a toric-code stabilizer engine,
//! with verification suites over all of them.

pub mod anyon;
pub mod lattice;
pub mod linalg;
pub mod masking;
pub mod noise;
pub mod puncture;
pub mod suite;

pub use anyon::{AnyonError, AnyonLabel, AnyonModel, ModelId, Phase};
pub use lattice::{Defect, DefectKind, Lattice, LatticeError, PauliString, StabilizerTableau};
pub use masking::{MaskError, MaskInput};
pub use noise::{ChannelKind, CollectiveChannel, NoiseError};
pub use puncture::{PunctureState, StateError, Subspace};
