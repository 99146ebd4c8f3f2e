//! Exact time evolution of the oscillator momentum states.
//!
//! The free evolution is the closed form obtained by completing the square
//! in the Fourier integral. A centre-of-mass boost and a constant extraction
//! force are both Galilean-like transforms of it: a unimodular phase times
//! the free wavefunction at a shifted position. [`fourier_oracle`] and
//! [`fourier_oracle_field`] evaluate the defining Fourier integrals by direct
//! quadrature and serve as independent checks on the closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::imaging::action_field_mixed;
use crate::quadrature::simpson;
use crate::states::{hermite_pair, momentum_wavefunction, ComplexAmplitude, OscillatorSpec};
use crate::units::HBAR;

/// How fragments are steered onto the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Field-free flight.
    Free,
    /// Centre-of-mass boost `p_c` along `+z`; the fragment gains `p_c/2`.
    Boost { p_c: f64 },
    /// Constant force `F` toward the detector.
    Field { force: f64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Free => "free",
            Mode::Boost { .. } => "boost",
            Mode::Field { .. } => "field",
        }
    }

    /// Momentum added to each fragment by the boost, `p₀ = p_c/2`.
    pub fn boost_momentum(&self) -> f64 {
        match *self {
            Mode::Boost { p_c } => 0.5 * p_c,
            _ => 0.0,
        }
    }

    pub fn force(&self) -> f64 {
        match *self {
            Mode::Field { force } => force,
            _ => 0.0,
        }
    }
}

/// Detector position and extraction mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionConfig {
    z_f: f64,
    mode: Mode,
}

impl DetectionConfig {
    pub fn new(z_f: f64, mode: Mode) -> Result<Self> {
        if !(z_f.is_finite() && z_f > 0.0) {
            return Err(Error::InvalidInput(format!(
                "detector position must be positive, got {z_f}"
            )));
        }
        match mode {
            Mode::Free => {}
            Mode::Boost { p_c } if p_c.is_finite() && p_c >= 0.0 => {}
            Mode::Field { force } if force.is_finite() && force > 0.0 => {}
            Mode::Boost { p_c } => {
                return Err(Error::InvalidInput(format!(
                    "boost momentum must be non-negative, got {p_c}"
                )))
            }
            Mode::Field { force } => {
                return Err(Error::InvalidInput(format!(
                    "extraction force must be positive, got {force}"
                )))
            }
        }
        Ok(Self { z_f, mode })
    }

    pub fn free(z_f: f64) -> Result<Self> {
        Self::new(z_f, Mode::Free)
    }

    pub fn boost(z_f: f64, p_c: f64) -> Result<Self> {
        Self::new(z_f, Mode::Boost { p_c })
    }

    pub fn field(z_f: f64, force: f64) -> Result<Self> {
        Self::new(z_f, Mode::Field { force })
    }

    pub fn z_f(&self) -> f64 {
        self.z_f
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
}

/// Release and detection instants. Only the elapsed time enters any formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionTimes {
    pub t_i: f64,
    pub t_f: f64,
}

impl EvolutionTimes {
    pub fn new(t_i: f64, t_f: f64) -> Result<Self> {
        if !(t_i.is_finite() && t_f.is_finite()) || t_f < t_i {
            return Err(Error::InvalidInput(format!(
                "need t_f ≥ t_i, got t_i={t_i}, t_f={t_f}"
            )));
        }
        Ok(Self { t_i, t_f })
    }

    /// Release at `t_i = 0`.
    pub fn elapsed(t: f64) -> Result<Self> {
        Self::new(0.0, t)
    }

    pub fn t(&self) -> f64 {
        self.t_f - self.t_i
    }
}

/// Free evolution and its spatial derivative at `(z, t)`.
fn free_with_gradient(spec: &OscillatorSpec, z: f64, t: f64) -> (Complex64, Complex64) {
    let (mu, omega, n) = (spec.mu(), spec.omega(), spec.n());
    let wt = omega * t;
    let b = mu * omega / HBAR;
    let c = Complex64::new(1.0, wt);
    // i⁻ⁿ · ((−1+iωt)/(1+iωt))^(n/2) on the branch continuous from t = 0,
    // where the ratio's argument is π − 2·atan(ωt); the product collapses
    // to exp(−i n atan ωt), exactly 1 at t = 0.
    let phase = Complex64::from_polar(1.0, -(n as f64) * wt.atan());
    let alpha = (b / (1.0 + wt * wt)).sqrt();
    let (h, h_prev) = hermite_pair(n, alpha * z);
    let dh = 2.0 * n as f64 * h_prev * alpha;
    let gauss = (Complex64::new(-0.5 * b * z * z, 0.0) / c).exp() / c.sqrt();
    let pre = phase * spec.hermite_norm() * (b / PI).powf(0.25);
    let psi = pre * gauss * h;
    let dgauss = gauss * Complex64::new(-b * z, 0.0) / c;
    let dpsi = pre * (dgauss * h + gauss * dh);
    (psi, dpsi)
}

/// `|Ψₙ(z, t)|²` for free flight, without forming the oscillating phases.
fn free_density(spec: &OscillatorSpec, z: f64, t: f64) -> f64 {
    let wt = spec.omega() * t;
    let b = spec.mu() * spec.omega() / HBAR;
    let s = 1.0 + wt * wt;
    let h = hermite_pair(spec.n(), (b / s).sqrt() * z).0;
    spec.hermite_norm().powi(2) * (b / PI).sqrt() * (-b * z * z / s).exp() / s.sqrt() * h * h
}

/// Exact free evolution `Ψₙ(z_f, t)` of the momentum state, `t` elapsed.
pub fn evolve_free_exact(spec: &OscillatorSpec, z_f: f64, t: f64) -> ComplexAmplitude {
    free_with_gradient(spec, z_f, t).0
}

/// Evolution of the state released with an extra momentum `p_c/2`.
pub fn evolve_boosted(spec: &OscillatorSpec, z_f: f64, t: f64, p_c: f64) -> ComplexAmplitude {
    boosted_with_gradient(spec, z_f, t, p_c).0
}

fn boosted_with_gradient(
    spec: &OscillatorSpec,
    z: f64,
    t: f64,
    p_c: f64,
) -> (Complex64, Complex64) {
    let p0 = 0.5 * p_c;
    let (psi, dpsi) = free_with_gradient(spec, z - p0 * t / spec.mu(), t);
    let phase = Complex64::from_polar(1.0, (p0 * z - p0 * p0 * t / (2.0 * spec.mu())) / HBAR);
    let k = Complex64::new(0.0, p0 / HBAR);
    (phase * psi, phase * (k * psi + dpsi))
}

/// Evolution under a constant force `F` along `+z`.
pub fn evolve_field(spec: &OscillatorSpec, z_f: f64, t: f64, force: f64) -> ComplexAmplitude {
    field_with_gradient(spec, z_f, t, force).0
}

fn field_with_gradient(
    spec: &OscillatorSpec,
    z: f64,
    t: f64,
    force: f64,
) -> (Complex64, Complex64) {
    let mu = spec.mu();
    let (psi, dpsi) = free_with_gradient(spec, z - force * t * t / (2.0 * mu), t);
    let phase = Complex64::from_polar(
        1.0,
        (force * t * z - force * force * t.powi(3) / (6.0 * mu)) / HBAR,
    );
    let k = Complex64::new(0.0, force * t / HBAR);
    (phase * psi, phase * (k * psi + dpsi))
}

/// Position of the free wavefunction that the mode's transform maps onto `z`.
fn comoving_position(spec: &OscillatorSpec, mode: Mode, z: f64, t: f64) -> f64 {
    z - mode_drift(spec, mode, t)
}

/// Displacement of the packet centre at elapsed time `t`.
pub fn mode_drift(spec: &OscillatorSpec, mode: Mode, t: f64) -> f64 {
    match mode {
        Mode::Free => 0.0,
        Mode::Boost { p_c } => 0.5 * p_c * t / spec.mu(),
        Mode::Field { force } => force * t * t / (2.0 * spec.mu()),
    }
}

/// Exact wavefunction at position `z` for the given mode.
pub fn evolve_at(spec: &OscillatorSpec, mode: Mode, z: f64, t: f64) -> ComplexAmplitude {
    evolve_with_gradient_at(spec, mode, z, t).0
}

/// Exact wavefunction and `∂Ψ/∂z` at position `z` for the given mode.
pub fn evolve_with_gradient_at(
    spec: &OscillatorSpec,
    mode: Mode,
    z: f64,
    t: f64,
) -> (ComplexAmplitude, ComplexAmplitude) {
    match mode {
        Mode::Free => free_with_gradient(spec, z, t),
        Mode::Boost { p_c } => boosted_with_gradient(spec, z, t, p_c),
        Mode::Field { force } => field_with_gradient(spec, z, t, force),
    }
}

/// Exact wavefunction at the detector.
pub fn evolve(spec: &OscillatorSpec, config: &DetectionConfig, t: f64) -> ComplexAmplitude {
    evolve_at(spec, config.mode(), config.z_f(), t)
}

/// Exact density `|Ψ(z, t)|²` at position `z`. The transforms only add
/// unimodular phases, so this never forms them; it stays accurate at
/// macroscopic `z` and `t` where those phases reach 10⁹ radians or more.
pub fn density_at(spec: &OscillatorSpec, mode: Mode, z: f64, t: f64) -> f64 {
    free_density(spec, comoving_position(spec, mode, z, t), t)
}

/// Exact density at the detector.
pub fn density(spec: &OscillatorSpec, config: &DetectionConfig, t: f64) -> f64 {
    density_at(spec, config.mode(), config.z_f(), t)
}

/// Largest number of quadrature nodes the oracle will use.
pub const ORACLE_MAX_POINTS: f64 = 2e7;

/// Direct quadrature of
/// `Ψ(z_f,t) = (2πħ)^(-1/2) ∫dp exp(i p z_f/ħ − i p² t/(2μħ)) Ψ̃ₙ(p − p_shift)`.
///
/// The grid spans `|p| ≤ P` with `P` the state's momentum support plus
/// `|p_shift|`, and its step keeps the kernel phase advance below `π/8`.
/// Times needing more than [`ORACLE_MAX_POINTS`] nodes are refused.
pub fn fourier_oracle(
    spec: &OscillatorSpec,
    z_f: f64,
    t: f64,
    p_shift: f64,
) -> Result<ComplexAmplitude> {
    let mu = spec.mu();
    let half = spec.momentum_support() + p_shift.abs();
    let slope = z_f.abs() + half * t.abs() / mu;
    oracle_integral(spec, -half, half, slope, |p| {
        let phase = (p * z_f - p * p * t / (2.0 * mu)) / HBAR;
        (phase, momentum_wavefunction(spec, p - p_shift))
    })
}

/// Direct quadrature of the constant-force evolution, integrating the
/// mixed-representation kernel `exp(i S̃_F(z_f, p, t)/ħ)` against `Ψ̃ₙ(p)`.
pub fn fourier_oracle_field(
    spec: &OscillatorSpec,
    z_f: f64,
    t: f64,
    force: f64,
) -> Result<ComplexAmplitude> {
    let mu = spec.mu();
    let half = spec.momentum_support();
    let slope = (z_f - force * t * t / (2.0 * mu)).abs() + half * t.abs() / mu;
    oracle_integral(spec, -half, half, slope, |p| {
        let phase = action_field_mixed(z_f, p, t, mu, force).0 / HBAR;
        (phase, momentum_wavefunction(spec, p))
    })
}

fn oracle_integral<K>(
    spec: &OscillatorSpec,
    lo: f64,
    hi: f64,
    slope: f64,
    kernel: K,
) -> Result<Complex64>
where
    K: Fn(f64) -> (f64, Complex64),
{
    let by_phase = if slope > 0.0 {
        (PI / 8.0) * HBAR / slope
    } else {
        f64::INFINITY
    };
    let by_envelope = spec.momentum_scale() / 16.0;
    let step = by_phase.min(by_envelope);
    let required = (hi - lo) / step;
    if !(required <= ORACLE_MAX_POINTS) {
        return Err(Error::OracleRefused {
            required,
            limit: ORACLE_MAX_POINTS,
        });
    }
    let intervals = required.ceil() as usize;
    let re = simpson(
        |p| {
            let (ph, a) = kernel(p);
            (Complex64::from_polar(1.0, ph) * a).re
        },
        lo,
        hi,
        intervals,
    );
    let im = simpson(
        |p| {
            let (ph, a) = kernel(p);
            (Complex64::from_polar(1.0, ph) * a).im
        },
        lo,
        hi,
        intervals,
    );
    Ok(Complex64::new(re, im) / (2.0 * PI * HBAR).sqrt())
}

/// Norm, mean and standard deviation of `|Ψ(z, t)|²` over `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionMoments {
    pub norm: f64,
    pub mean: f64,
    pub std_dev: f64,
}

/// Moments of the spatial density by Simpson quadrature over
/// `centre ± 12σ`, with `σ` the analytic width of the spreading state.
pub fn position_moments(spec: &OscillatorSpec, mode: Mode, t: f64) -> PositionMoments {
    let wt = spec.omega() * t;
    let sigma = spec.length_scale() * (spec.n() as f64 + 0.5).sqrt() * (1.0 + wt * wt).sqrt();
    let centre = mode_drift(spec, mode, t);
    let (lo, hi) = (centre - 12.0 * sigma, centre + 12.0 * sigma);
    let steps = 4000 + 400 * spec.n() as usize;
    // moments about the expected centre keep the integrands well scaled
    let dens = |z: f64| density_at(spec, mode, z, t);
    let norm = simpson(dens, lo, hi, steps);
    let m1 = simpson(|z| (z - centre) * dens(z), lo, hi, steps) / norm;
    let m2 = simpson(|z| (z - centre).powi(2) * dens(z), lo, hi, steps) / norm;
    PositionMoments {
        norm,
        mean: centre + m1,
        std_dev: (m2 - m1 * m1).max(0.0).sqrt(),
    }
}

/// Standard deviation of the freely evolving `|Ψₙ(z, t)|²`.
pub fn spatial_width(spec: &OscillatorSpec, t: f64) -> f64 {
    position_moments(spec, Mode::Free, t).std_dev
}
