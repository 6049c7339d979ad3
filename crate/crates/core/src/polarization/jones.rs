use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_in_range, Error, Result};
use crate::trig;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Transverse field amplitudes of a fully polarized beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JonesVector {
    pub ex: Complex64,
    pub ey: Complex64,
}

impl JonesVector {
    pub const fn new(ex: Complex64, ey: Complex64) -> Self {
        Self { ex, ey }
    }

    pub fn from_real(ex: f64, ey: f64) -> Self {
        Self::new(Complex64::new(ex, 0.0), Complex64::new(ey, 0.0))
    }

    /// Linear polarization of the given intensity along `axis` (radians from +x).
    pub fn linear_polarized(intensity: f64, axis: f64) -> Result<Self> {
        let intensity = ensure_in_range("intensity", intensity, 0.0, f64::INFINITY)?;
        let axis = ensure_finite("axis", axis)?;
        let amplitude = intensity.sqrt();
        let (s, c) = trig::sin_cos(axis);
        Ok(Self::from_real(amplitude * c, amplitude * s))
    }

    pub fn intensity(&self) -> f64 {
        self.ex.norm_sqr() + self.ey.norm_sqr()
    }

    /// Intensity of the component along a linear axis at `theta`, i.e. what
    /// an ideal polarizer at `theta` would transmit.
    pub fn intensity_along(&self, theta: f64) -> f64 {
        let (s, c) = trig::sin_cos(theta);
        (self.ex * c + self.ey * s).norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.ex.is_finite() && self.ey.is_finite()
    }

    /// Distance between two states that ignores a common global phase:
    /// `sqrt(|a|² + |b|² − 2|⟨a,b⟩|)`.
    pub fn phase_invariant_distance(&self, other: &Self) -> f64 {
        let overlap = (self.ex.conj() * other.ex + self.ey.conj() * other.ey).norm();
        (self.intensity() + other.intensity() - 2.0 * overlap).max(0.0).sqrt()
    }
}

/// A 2×2 complex transfer matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JonesMatrix {
    pub m: [[Complex64; 2]; 2],
}

impl JonesMatrix {
    pub const IDENTITY: Self = Self {
        m: [[ONE, ZERO], [ZERO, ONE]],
    };

    pub const fn new(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn diagonal(a: Complex64, b: Complex64) -> Self {
        Self::new([[a, ZERO], [ZERO, b]])
    }

    /// Pure rotation of the polarization plane by `alpha`; `[[c, −s], [s, c]]`.
    pub fn rotator(alpha: f64) -> Result<Self> {
        let alpha = ensure_finite("alpha", alpha)?;
        let (s, c) = trig::sin_cos(alpha);
        Ok(Self::from_real([[c, -s], [s, c]]))
    }

    /// Ideal linear polarizer with its transmission axis at `theta`.
    pub fn polarizer(theta: f64) -> Result<Self> {
        Self::leaky_polarizer(theta, 0.0)
    }

    /// Linear polarizer whose blocked axis leaks `extinction` of the intensity
    /// (amplitude `√extinction`). `extinction = 0` is the ideal projector.
    pub fn leaky_polarizer(theta: f64, extinction: f64) -> Result<Self> {
        let theta = ensure_finite("theta", theta)?;
        if !(0.0..1.0).contains(&extinction) {
            return Err(Error::Domain {
                name: "extinction",
                value: extinction,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let (s, c) = trig::sin_cos(theta);
        let leak = extinction.sqrt();
        // R(θ)·diag(1, leak)·R(−θ)
        Ok(Self::from_real([
            [c * c + leak * s * s, (1.0 - leak) * c * s],
            [(1.0 - leak) * c * s, s * s + leak * c * c],
        ]))
    }

    /// Linear retarder: the fast axis at `fast_axis` is left unchanged and the
    /// slow axis picks up a phase of `retardance`.
    pub fn waveplate(retardance: f64, fast_axis: f64) -> Result<Self> {
        let retardance = ensure_finite("retardance", retardance)?;
        let fast_axis = ensure_finite("fast_axis", fast_axis)?;
        let (s, c) = trig::sin_cos(fast_axis);
        let (ds, dc) = trig::sin_cos(retardance);
        let slow = Complex64::new(dc, ds);
        let rot = Self::from_real([[c, -s], [s, c]]);
        Ok(rot * Self::diagonal(ONE, slow) * rot.transpose())
    }

    /// Neutral attenuator transmitting the fraction `transmittance` of intensity.
    pub fn attenuator(transmittance: f64) -> Result<Self> {
        let t = ensure_in_range("transmittance", transmittance, 0.0, 1.0)?;
        let a = Complex64::new(t.sqrt(), 0.0);
        Ok(Self::diagonal(a, a))
    }

    pub fn apply(&self, v: &JonesVector) -> JonesVector {
        let m = &self.m;
        JonesVector::new(m[0][0] * v.ex + m[0][1] * v.ey, m[1][0] * v.ex + m[1][1] * v.ey)
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self::new([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Largest element-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.is_finite())
    }
}

impl Mul for JonesMatrix {
    type Output = JonesMatrix;

    fn mul(self, rhs: JonesMatrix) -> JonesMatrix {
        let (a, b) = (&self.m, &rhs.m);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        JonesMatrix::new(out)
    }
}

impl Mul<JonesVector> for JonesMatrix {
    type Output = JonesVector;

    fn mul(self, rhs: JonesVector) -> JonesVector {
        self.apply(&rhs)
    }
}

/// Collapses a sequence of elements into a single transfer matrix.
///
/// **Order:** `ms[0]` is the first element the beam meets, so the result is
/// `ms[k-1] · … · ms[1] · ms[0]`.
pub fn compose(ms: &[JonesMatrix]) -> Result<JonesMatrix> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| Error::invalid("ms", "cannot compose an empty element list"))?;
    Ok(rest.iter().fold(*first, |acc, m| *m * acc))
}
