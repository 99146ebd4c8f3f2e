//! Numerical laboratory for the imaging theorem.
//!
//! A fragment released from a microscopic reaction zone with momentum-space
//! wavefunction `Ψ̃(p)` arrives at a macroscopically distant detector with a
//! position-space density that, along classical trajectories, is `Ψ̃(p_i)`
//! scaled by the classical density `dp_i/dz_f`. This crate evaluates the
//! exact quantum evolution of harmonic-oscillator momentum states (free,
//! centre-of-mass boosted and under a constant extraction force), the
//! semiclassical imaging limit, the inversion of detector time spectra back
//! to initial momentum distributions, and a seeded Monte Carlo emulation of a
//! time-of-flight experiment.
//!
//! All quantities are in atomic units with `ħ = 1`; laboratory units only
//! appear through [`units`].

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extraction;
pub mod imaging;
pub mod montecarlo;
pub mod propagation;
pub mod quadrature;
pub mod states;
pub mod units;

pub use error::{Error, Result};
pub use extraction::{MomentumDistribution, MomentumSample, TimeSpectrum};
pub use montecarlo::{EventList, Histogram, PiecewiseLinearDensity, SamplingWindow};
pub use propagation::{DetectionConfig, EvolutionTimes, Mode};
pub use states::{ComplexAmplitude, OscillatorSpec};
