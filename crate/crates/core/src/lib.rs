//! Polarization optics for the classical optical Zeno effect.
//!
//! A linearly polarized beam passing through a stack of Faraday rotators
//! turns smoothly from one axis to the orthogonal one. Placing an ideal
//! polarizer after every rotator repeatedly projects the beam back onto its
//! starting axis, and the transmitted intensity tends to the input intensity
//! as the number of rotator/polarizer stages grows.
//!
//! The crate is organised bottom-up:
//!
//! * [`polarization`]: Jones vectors and matrices, Stokes vectors and Mueller
//!   matrices.
//! * [`elements`]: optical elements, element chains, the two bench setups
//!   (free rotation and rotation with measurements) and chain propagation.
//! * [`zeno`]: closed-form intensity laws, trace sampling and the
//!   stage-count sweep.
//! * [`stochastic`]: photon-ensemble Monte Carlo and rotation-angle jitter.
//! * [`io`]: angle parsing, CSV/JSON emission, SVG line charts and run
//!   manifests used by the command-line tool.

pub mod elements;
mod error;
pub mod io;
pub mod polarization;
pub mod stochastic;
mod trig;
pub mod zeno;

pub use error::{Error, Result};
pub use polarization::{JonesMatrix, JonesVector, MuellerMatrix, StokesVector};
