//! Harmonic-oscillator vibrational states of the fragment relative motion,
//! in momentum and position representation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::simpson;
use crate::units::HBAR;

/// Complex wavefunction value.
pub type ComplexAmplitude = Complex64;

/// Largest quantum number handled by the double-precision Hermite recurrence.
pub const N_MAX: u32 = 30;

/// Reduced mass of H + H⁺ in electron masses (half a proton mass, rounded).
pub const DEFAULT_MU: f64 = 918.0;
/// Effective vibrational frequency of H₂⁺ in atomic units.
pub const DEFAULT_OMEGA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    n: u32,
    mu: f64,
    omega: f64,
}

impl OscillatorSpec {
    pub fn new(n: u32, mu: f64, omega: f64) -> Result<Self> {
        if n > N_MAX {
            return Err(Error::Domain(format!(
                "quantum number {n} exceeds supported maximum {N_MAX}"
            )));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidInput(format!(
                "reduced mass must be positive, got {mu}"
            )));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidInput(format!(
                "frequency must be positive, got {omega}"
            )));
        }
        Ok(Self { n, mu, omega })
    }

    /// H₂⁺ parameters `μ = 918`, `ω = 0.01` for vibrational level `n`.
    pub fn h2_plus(n: u32) -> Result<Self> {
        Self::new(n, DEFAULT_MU, DEFAULT_OMEGA)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `√(μħω)`, the natural momentum scale of the state.
    pub fn momentum_scale(&self) -> f64 {
        (self.mu * HBAR * self.omega).sqrt()
    }

    /// `√(ħ/(μω))`, the natural length scale of the state.
    pub fn length_scale(&self) -> f64 {
        (HBAR / (self.mu * self.omega)).sqrt()
    }

    /// `(2ⁿ n!)^(-1/2)`
    pub(crate) fn hermite_norm(&self) -> f64 {
        let mut v = 1.0;
        for k in 1..=self.n {
            v /= (2.0 * k as f64).sqrt();
        }
        v
    }

    /// Momentum beyond which `|Ψ̃ₙ|²` is negligible (below ~1e-25 of its peak).
    pub fn momentum_support(&self) -> f64 {
        self.momentum_scale() * ((2.0 * self.n as f64 + 1.0).sqrt() + 8.0)
    }
}

impl Default for OscillatorSpec {
    fn default() -> Self {
        Self {
            n: 0,
            mu: DEFAULT_MU,
            omega: DEFAULT_OMEGA,
        }
    }
}

/// Physicists' Hermite polynomial `Hₙ(x)`.
pub fn hermite(n: u32, x: f64) -> Result<f64> {
    if n > N_MAX {
        return Err(Error::Domain(format!(
            "Hermite order {n} exceeds supported maximum {N_MAX}"
        )));
    }
    Ok(hermite_unchecked(n, x))
}

pub(crate) fn hermite_unchecked(n: u32, x: f64) -> f64 {
    hermite_pair(n, x).0
}

/// `(Hₙ(x), Hₙ₋₁(x))`, with `H₋₁ = 0`.
pub(crate) fn hermite_pair(n: u32, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 1..=n {
        let next = 2.0 * x * cur - 2.0 * (k - 1) as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `i^(-n)`, evaluated exactly.
pub(crate) fn inverse_i_power(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `Ψ̃ₙ(p) = i⁻ⁿ (2ⁿn!)^(-1/2) (πμħω)^(-1/4) exp(-p²/(2μħω)) Hₙ(p/√(μħω))`
pub fn momentum_wavefunction(spec: &OscillatorSpec, p: f64) -> ComplexAmplitude {
    inverse_i_power(spec.n) * momentum_envelope(spec, p)
}

/// Real factor of `Ψ̃ₙ(p)` without the `i⁻ⁿ` phase.
pub(crate) fn momentum_envelope(spec: &OscillatorSpec, p: f64) -> f64 {
    let a = spec.mu * HBAR * spec.omega;
    spec.hermite_norm()
        * (PI * a).powf(-0.25)
        * (-p * p / (2.0 * a)).exp()
        * hermite_unchecked(spec.n, p / a.sqrt())
}

/// `|Ψ̃ₙ(p)|²`
pub fn momentum_density(spec: &OscillatorSpec, p: f64) -> f64 {
    momentum_envelope(spec, p).powi(2)
}

/// Oscillator eigenfunction in position space; the `t = 0` value of the
/// free evolution, real-valued.
pub fn position_wavefunction(spec: &OscillatorSpec, z: f64) -> ComplexAmplitude {
    let b = spec.mu * spec.omega / HBAR;
    let v = spec.hermite_norm()
        * (b / PI).powf(0.25)
        * (-0.5 * b * z * z).exp()
        * hermite_unchecked(spec.n, b.sqrt() * z);
    Complex64::new(v, 0.0)
}

/// Standard deviation of `|Ψ̃ₙ(p)|²` by quadrature.
pub fn momentum_width(spec: &OscillatorSpec) -> f64 {
    let lim = spec.momentum_support();
    let steps = 4000;
    let norm = simpson(|p| momentum_density(spec, p), -lim, lim, steps);
    let second = simpson(|p| p * p * momentum_density(spec, p), -lim, lim, steps);
    // mean is zero by parity
    (second / norm).sqrt()
}
