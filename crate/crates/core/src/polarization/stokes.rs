use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jones::{JonesMatrix, JonesVector};
use crate::error::{ensure_in_range, Result};

/// Intensity-space polarization state `(s0, s1, s2, s3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesVector {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub const fn new(s0: f64, s1: f64, s2: f64, s3: f64) -> Self {
        Self { s0, s1, s2, s3 }
    }

    pub const fn unpolarized(intensity: f64) -> Self {
        Self::new(intensity, 0.0, 0.0, 0.0)
    }

    pub fn from_jones(v: &JonesVector) -> Self {
        let ix = v.ex.norm_sqr();
        let iy = v.ey.norm_sqr();
        let cross = v.ex.conj() * v.ey;
        Self::new(ix + iy, ix - iy, 2.0 * cross.re, 2.0 * cross.im)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.s0, self.s1, self.s2, self.s3]
    }

    pub fn from_array(s: [f64; 4]) -> Self {
        Self::new(s[0], s[1], s[2], s[3])
    }

    pub fn intensity(&self) -> f64 {
        self.s0
    }

    pub fn polarized_intensity(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }

    /// Degree of polarization; 0 for a dark beam.
    pub fn degree_of_polarization(&self) -> f64 {
        if self.s0 > 0.0 {
            self.polarized_intensity() / self.s0
        } else {
            0.0
        }
    }

    /// `s0 ≥ 0` and `s0 ≥ |s⃗|` up to a relative tolerance of 1e-12.
    pub fn is_physical(&self) -> bool {
        self.s0 >= 0.0 && self.polarized_intensity() <= self.s0 * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }

    /// Intensity an ideal linear polarizer at `theta` would transmit.
    pub fn intensity_along(&self, theta: f64) -> f64 {
        let (s, c) = (2.0 * theta).sin_cos();
        0.5 * (self.s0 + c * self.s1 + s * self.s2)
    }
}

/// Real 4×4 transfer matrix acting on Stokes vectors, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuellerMatrix {
    pub m: [[f64; 4]; 4],
}

/// Pauli basis in Stokes order: s0 ↔ I, s1 ↔ σz, s2 ↔ σx, s3 ↔ σy.
fn stokes_basis() -> [JonesMatrix; 4] {
    let c = Complex64::new;
    let z = c(0.0, 0.0);
    [
        JonesMatrix::new([[c(1.0, 0.0), z], [z, c(1.0, 0.0)]]),
        JonesMatrix::new([[c(1.0, 0.0), z], [z, c(-1.0, 0.0)]]),
        JonesMatrix::new([[z, c(1.0, 0.0)], [c(1.0, 0.0), z]]),
        JonesMatrix::new([[z, c(0.0, -1.0)], [c(0.0, 1.0), z]]),
    ]
}

impl MuellerMatrix {
    pub const IDENTITY: Self = Self {
        m: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    };

    pub const fn new(m: [[f64; 4]; 4]) -> Self {
        Self { m }
    }

    /// Lifts a Jones matrix to intensity space: `M_ij = ½·tr(σ_i J σ_j J†)`.
    pub fn from_jones(j: &JonesMatrix) -> Self {
        let basis = stokes_basis();
        let jd = j.adjoint();
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (k, cell) in row.iter_mut().enumerate() {
                *cell = 0.5 * (basis[i] * *j * basis[k] * jd).trace().re;
            }
        }
        Self { m }
    }

    /// Scalar depolarizer `diag(1, p, p, p)`: keeps the fraction `p` of the
    /// polarized part and the full intensity.
    pub fn depolarizer(p: f64) -> Result<Self> {
        let p = ensure_in_range("p", p, 0.0, 1.0)?;
        let mut m = Self::IDENTITY.m;
        for (k, row) in m.iter_mut().enumerate().skip(1) {
            row[k] = p;
        }
        Ok(Self { m })
    }

    pub fn apply(&self, s: &StokesVector) -> StokesVector {
        let v = s.as_array();
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.m) {
            *o = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        StokesVector::from_array(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for MuellerMatrix {
    type Output = MuellerMatrix;

    fn mul(self, rhs: MuellerMatrix) -> MuellerMatrix {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        MuellerMatrix::new(out)
    }
}

impl Mul<StokesVector> for MuellerMatrix {
    type Output = StokesVector;

    fn mul(self, rhs: StokesVector) -> StokesVector {
        self.apply(&rhs)
    }
}

impl From<&JonesMatrix> for MuellerMatrix {
    fn from(j: &JonesMatrix) -> Self {
        Self::from_jones(j)
    }
}

impl From<&JonesVector> for StokesVector {
    fn from(v: &JonesVector) -> Self {
        Self::from_jones(v)
    }
}
