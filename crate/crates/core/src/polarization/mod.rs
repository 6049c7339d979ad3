//! Polarization states and their transfer matrices.
//!
//! Fully polarized light is carried as a [`JonesVector`] (two complex field
//! amplitudes) and transformed by 2×2 complex [`JonesMatrix`] values.
//! Partially polarized light uses the real four-component [`StokesVector`]
//! and 4×4 [`MuellerMatrix`].
//!
//! Conventions used throughout:
//!
//! * Intensity is the squared amplitude sum, `|ex|² + |ey|²`.
//! * Angles are radians measured from +x toward +y. A positive rotation moves
//!   the polarization plane from +x toward +y, so rotating ŷ by `α` leaves a
//!   y-amplitude of `cos α`.
//! * Stokes parameters: `s1 = |ex|² − |ey|²`, `s2 = 2·Re(ex*·ey)`,
//!   `s3 = 2·Im(ex*·ey)`.
//! * Global phase is carried, never normalised away.

mod jones;
mod stokes;

pub use jones::{compose, JonesMatrix, JonesVector};
pub use stokes::{MuellerMatrix, StokesVector};
