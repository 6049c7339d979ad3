//! Optical elements, element chains and chain propagation.
//!
//! Chains are ordered first-to-last along the beam. Only Faraday rotators
//! occupy space; polarizers and the other elements are zero-length planes.

mod schema;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_in_range, Error, Result};
use crate::polarization::{JonesMatrix, JonesVector, MuellerMatrix, StokesVector};

pub use schema::{parse_chain, ChainDescription, ElementDescription, InputDescription};

/// One physical element on the bench.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OpticalElement {
    /// Magneto-optic medium rotating the polarization plane by `angle` over `length` meters.
    FaradayRotator {
        angle: f64,
        length: f64,
    },
    /// Linear polarizer; `extinction` is the intensity leaked on the blocked axis.
    LinearPolarizer {
        axis: f64,
        extinction: f64,
    },
    Waveplate {
        retardance: f64,
        fast_axis: f64,
    },
    Attenuator {
        transmittance: f64,
    },
    /// Keeps the fraction `p` of the polarized part of the beam.
    Depolarizer {
        p: f64,
    },
}

impl OpticalElement {
    pub fn faraday(angle: f64, length: f64) -> Self {
        Self::FaradayRotator { angle, length }
    }

    pub fn ideal_polarizer(axis: f64) -> Self {
        Self::LinearPolarizer { axis, extinction: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::FaradayRotator { angle, length } => {
                ensure_finite("angle", angle)?;
                ensure_in_range("length", length, 0.0, f64::MAX)?;
            }
            Self::LinearPolarizer { axis, extinction } => {
                ensure_finite("axis", axis)?;
                if !(0.0..1.0).contains(&extinction) {
                    return Err(Error::Domain {
                        name: "extinction",
                        value: extinction,
                        lo: 0.0,
                        hi: 1.0,
                    });
                }
            }
            Self::Waveplate { retardance, fast_axis } => {
                ensure_finite("retardance", retardance)?;
                ensure_finite("fast_axis", fast_axis)?;
            }
            Self::Attenuator { transmittance } => {
                ensure_in_range("transmittance", transmittance, 0.0, 1.0)?;
            }
            Self::Depolarizer { p } => {
                ensure_in_range("p", p, 0.0, 1.0)?;
            }
        }
        Ok(())
    }

    /// Geometric length along the beam; zero for everything but rotators.
    pub fn length(&self) -> f64 {
        match *self {
            Self::FaradayRotator { length, .. } => length,
            _ => 0.0,
        }
    }

    /// Jones matrix, or `None` for elements that need the Mueller picture.
    pub fn jones(&self) -> Result<Option<JonesMatrix>> {
        let m = match *self {
            Self::FaradayRotator { angle, .. } => JonesMatrix::rotator(angle)?,
            Self::LinearPolarizer { axis, extinction } => JonesMatrix::leaky_polarizer(axis, extinction)?,
            Self::Waveplate { retardance, fast_axis } => JonesMatrix::waveplate(retardance, fast_axis)?,
            Self::Attenuator { transmittance } => JonesMatrix::attenuator(transmittance)?,
            Self::Depolarizer { .. } => return Ok(None),
        };
        Ok(Some(m))
    }

    pub fn mueller(&self) -> Result<MuellerMatrix> {
        match (*self, self.jones()?) {
            (Self::Depolarizer { p }, _) => MuellerMatrix::depolarizer(p),
            (_, Some(j)) => Ok(MuellerMatrix::from_jones(&j)),
            (_, None) => unreachable!("only depolarizers lack a Jones matrix"),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::FaradayRotator { .. } => "faraday",
            Self::LinearPolarizer { .. } => "polarizer",
            Self::Waveplate { .. } => "waveplate",
            Self::Attenuator { .. } => "attenuator",
            Self::Depolarizer { .. } => "depolarizer",
        }
    }
}

/// An ordered bench: the input beam followed by its elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementChain {
    pub elements: Vec<OpticalElement>,
    pub input: JonesVector,
    pub label: String,
}

impl ElementChain {
    pub fn new(input: JonesVector, elements: Vec<OpticalElement>, label: impl Into<String>) -> Self {
        Self {
            elements,
            input,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.elements.iter().map(OpticalElement::length).sum()
    }

    pub fn requires_mueller(&self) -> bool {
        self.elements
            .iter()
            .any(|e| matches!(e, OpticalElement::Depolarizer { .. }))
    }

    /// Jones matrices of every element, in beam order. Fails if a depolarizer is present.
    pub fn jones_matrices(&self) -> Result<Vec<JonesMatrix>> {
        self.elements
            .iter()
            .enumerate()
            .map(|(index, e)| {
                e.jones()?.ok_or_else(|| Error::Element {
                    index,
                    message: "depolarizers have no Jones matrix".into(),
                })
            })
            .collect()
    }
}

/// Index `i ≥ 1` of the Faraday medium containing a point of the bench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SegmentIndex(usize);

impl SegmentIndex {
    pub fn new(i: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::invalid("i", "segment indices start at 1"));
        }
        Ok(Self(i))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

fn check_geometry(n: usize, total_angle: f64, total_length: f64, i0: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "at least one Faraday medium is required"));
    }
    ensure_finite("total_angle", total_angle)?;
    if !(total_length.is_finite() && total_length > 0.0) {
        return Err(Error::invalid(
            "total_length",
            format!("must be positive and finite, got {total_length}"),
        ));
    }
    ensure_in_range("i0", i0, 0.0, f64::MAX)?;
    Ok(())
}

/// `n` identical Faraday media sharing `total_angle` of rotation over `total_length`,
/// fed with y-polarized light of intensity `i0`.
pub fn build_unmeasured_chain(n: usize, total_angle: f64, total_length: f64, i0: f64) -> Result<ElementChain> {
    check_geometry(n, total_angle, total_length, i0)?;
    let rotator = OpticalElement::faraday(total_angle / n as f64, total_length / n as f64);
    Ok(ElementChain::new(
        y_polarized(i0)?,
        vec![rotator; n],
        format!("free rotation, N={n}"),
    ))
}

/// As [`build_unmeasured_chain`], with an ideal polarizer at `measure_axis`
/// after every medium.
pub fn build_measured_chain(
    n: usize,
    total_angle: f64,
    total_length: f64,
    i0: f64,
    measure_axis: f64,
) -> Result<ElementChain> {
    check_geometry(n, total_angle, total_length, i0)?;
    ensure_finite("measure_axis", measure_axis)?;
    let rotator = OpticalElement::faraday(total_angle / n as f64, total_length / n as f64);
    let polarizer = OpticalElement::ideal_polarizer(measure_axis);
    let elements = std::iter::repeat([rotator, polarizer]).take(n).flatten().collect();
    Ok(ElementChain::new(
        y_polarized(i0)?,
        elements,
        format!("measured rotation, N={n}"),
    ))
}

fn y_polarized(i0: f64) -> Result<JonesVector> {
    JonesVector::linear_polarized(i0, std::f64::consts::FRAC_PI_2)
}

/// A beam state in whichever representation the propagation used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "representation", rename_all = "snake_case")]
pub enum PolarizationState {
    Jones(JonesVector),
    Stokes(StokesVector),
}

impl PolarizationState {
    pub fn intensity(&self) -> f64 {
        match self {
            Self::Jones(v) => v.intensity(),
            Self::Stokes(s) => s.intensity(),
        }
    }

    pub fn intensity_along(&self, theta: f64) -> f64 {
        match self {
            Self::Jones(v) => v.intensity_along(theta),
            Self::Stokes(s) => s.intensity_along(theta),
        }
    }

    pub fn to_stokes(&self) -> StokesVector {
        match self {
            Self::Jones(v) => StokesVector::from_jones(v),
            Self::Stokes(s) => *s,
        }
    }

    pub fn as_jones(&self) -> Option<&JonesVector> {
        match self {
            Self::Jones(v) => Some(v),
            Self::Stokes(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Propagation {
    pub output: PolarizationState,
    /// `states[k]` is the beam immediately after element `k`.
    pub states: Vec<PolarizationState>,
}

/// Pushes the chain's input beam through every element.
///
/// Chains containing a depolarizer run entirely in the Stokes/Mueller
/// picture; all others stay in Jones form.
pub fn propagate(chain: &ElementChain) -> Result<Propagation> {
    if chain.is_empty() {
        return Err(Error::invalid("chain", "cannot propagate through an empty chain"));
    }
    for (index, e) in chain.elements.iter().enumerate() {
        e.validate().map_err(|err| Error::Element {
            index,
            message: err.to_string(),
        })?;
    }

    let states: Vec<PolarizationState> = if chain.requires_mueller() {
        let mut s = StokesVector::from_jones(&chain.input);
        chain
            .elements
            .iter()
            .map(|e| {
                s = e.mueller()?.apply(&s);
                Ok(PolarizationState::Stokes(s))
            })
            .collect::<Result<_>>()?
    } else {
        let mut v = chain.input;
        chain
            .jones_matrices()?
            .iter()
            .map(|m| {
                v = m.apply(&v);
                PolarizationState::Jones(v)
            })
            .collect()
    };

    let output = *states.last().expect("chain is non-empty");
    Ok(Propagation { output, states })
}
