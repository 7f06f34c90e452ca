//! Asymmetric Pauli and Heisenberg cloning machines.
//!
//! States, channels and machines are represented exactly as dense complex
//! arrays. Every analytic channel formula has a brute-force partial-trace
//! counterpart used for cross-checking.

pub mod channels;
pub mod cli;
pub mod error;
pub mod hcm;
pub mod linalg;
pub mod me_states;
pub mod pcm;
pub mod sampling;
pub mod uncertainty;
pub mod verify;

pub use channels::{ChannelDistribution, DepolarizingFraction, NamedChannel, PauliDecomposition};
pub use error::{Error, Result};
pub use hcm::{AmplitudeGrid, FrontierPoint, IsotropicHcm, OutputChannels};
pub use linalg::{DensityMatrix, ProbDist, QuantumState, StateVector, C64};
pub use me_states::{MeDecomposition, MeIndex};
pub use pcm::{CapacityBound, CapacityRegion, DoubleBellAmplitudes, Partition};
pub use uncertainty::{RobertsonVariant, UncertaintyReport};
