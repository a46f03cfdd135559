//! Output-mode coherence, entanglement and steering for a pulsed
//! optomechanical system of two coupled cavities sharing one mechanical
//! mode.

pub mod coherence;
pub mod entanglement;
pub mod error;
pub mod kernels;
pub mod model;
pub mod moments;
pub mod oracle;
pub mod noise;
pub mod params;
pub mod quadrature;
pub mod scan;
pub mod steady;
pub mod steering;

pub use error::{Error, Result};
pub use params::{Basis, DriveSpec, Mode, SystemParams};
