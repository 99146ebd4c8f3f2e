//! Classical actions, stationary-phase momenta and the asymptotic imaging
//! wavefunctions for free flight, boosted flight and constant-force
//! extraction.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::propagation::{DetectionConfig, Mode};
use crate::states::{momentum_wavefunction, ComplexAmplitude, OscillatorSpec};
use crate::units::HBAR;

/// A classical action in units of `ħ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ActionValue(pub f64);

fn require_positive_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "elapsed time must be positive, got {t}"
        )))
    }
}

/// Free action between fixed endpoints, `m(z_f − z_i)²/(2t)`.
pub fn action_free_position(z_f: f64, z_i: f64, t: f64, mu: f64) -> Result<ActionValue> {
    require_positive_time(t)?;
    Ok(ActionValue(mu * (z_f - z_i).powi(2) / (2.0 * t)))
}

/// Mixed position-momentum free action, `p z_f − p²t/(2m)`.
pub fn action_free_mixed(z_f: f64, p: f64, t: f64, mu: f64) -> ActionValue {
    ActionValue(p * z_f - p * p * t / (2.0 * mu))
}

/// Action between fixed endpoints under a constant force `F`:
/// `F t z_f − F²t³/(6m) + (m/2t)[z_f − z_i − F t²/(2m)]²`.
pub fn action_field_position(
    z_f: f64,
    z_i: f64,
    t: f64,
    mu: f64,
    force: f64,
) -> Result<ActionValue> {
    require_positive_time(t)?;
    let gap = z_f - z_i - force * t * t / (2.0 * mu);
    Ok(ActionValue(
        force * t * z_f - force * force * t.powi(3) / (6.0 * mu) + mu / (2.0 * t) * gap * gap,
    ))
}

/// Mixed action under a constant force, the Legendre transform of
/// [`action_field_position`] with `z_i` taken from the trajectory:
/// `(p + F t)(z_f − F t²/(2m)) + F²t³/(3m) − p²t/(2m)`.
pub fn action_field_mixed(z_f: f64, p: f64, t: f64, mu: f64, force: f64) -> ActionValue {
    ActionValue(
        (p + force * t) * (z_f - force * t * t / (2.0 * mu))
            + force * force * t.powi(3) / (3.0 * mu)
            - p * p * t / (2.0 * mu),
    )
}

/// `∂S̃_F/∂p = z_f − p t/m − F t²/(2m)`, the trajectory's initial position.
pub fn action_field_mixed_slope(z_f: f64, p: f64, t: f64, mu: f64, force: f64) -> f64 {
    z_f - p * t / mu - force * t * t / (2.0 * mu)
}

fn check_single_mode(force: f64, p_c: f64) -> Result<()> {
    if force != 0.0 && p_c != 0.0 {
        return Err(Error::UnsupportedMode(
            "boost and extraction force cannot be combined".into(),
        ));
    }
    Ok(())
}

/// Initial momentum of the classical trajectory from the origin that
/// reaches `z_f` after elapsed time `t`.
pub fn stationary_momentum(z_f: f64, t: f64, mu: f64, force: f64, p_c: f64) -> Result<f64> {
    require_positive_time(t)?;
    check_single_mode(force, p_c)?;
    Ok(mu / t * (z_f - force * t * t / (2.0 * mu)) - 0.5 * p_c)
}

/// Position at time `t` of the trajectory leaving the origin with relative
/// momentum `p_i`.
pub fn trajectory_position(p_i: f64, t: f64, mu: f64, force: f64, p_c: f64) -> Result<f64> {
    check_single_mode(force, p_c)?;
    Ok((p_i + 0.5 * p_c) * t / mu + force * t * t / (2.0 * mu))
}

/// `(F, p_c)` for a mode.
pub(crate) fn mode_parameters(mode: Mode) -> (f64, f64) {
    match mode {
        Mode::Free => (0.0, 0.0),
        Mode::Boost { p_c } => (0.0, p_c),
        Mode::Field { force } => (force, 0.0),
    }
}

/// A classical fragment trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    pub p_i: f64,
    pub z_i: f64,
    pub mode: Mode,
}

impl Trajectory {
    pub fn from_origin(p_i: f64, mode: Mode) -> Self {
        Self {
            p_i,
            z_i: 0.0,
            mode,
        }
    }

    pub fn position(&self, t: f64, mu: f64) -> f64 {
        let (force, p_c) = mode_parameters(self.mode);
        self.z_i + (self.p_i + 0.5 * p_c) * t / mu + force * t * t / (2.0 * mu)
    }

    /// Laboratory momentum `p_f = μ v_f` at time `t`.
    pub fn final_momentum(&self, t: f64) -> f64 {
        let (force, p_c) = mode_parameters(self.mode);
        self.p_i + 0.5 * p_c + force * t
    }
}

/// Stationary momentum for a detection configuration.
pub fn config_momentum(config: &DetectionConfig, t: f64, mu: f64) -> Result<f64> {
    let (force, p_c) = mode_parameters(config.mode());
    stationary_momentum(config.z_f(), t, mu, force, p_c)
}

/// Asymptotic imaging wavefunction at the detector:
/// `√(μ/(i t)) · e^{iφ} · Ψ̃ₙ(p_i)` with `p_i` the stationary momentum and
/// `φ` the mode's classical phase.
pub fn it_wavefunction(
    spec: &OscillatorSpec,
    config: &DetectionConfig,
    t: f64,
) -> Result<ComplexAmplitude> {
    let mu = spec.mu();
    let p_i = config_momentum(config, t, mu)?;
    let z = config.z_f();
    // the boost's extra phases cancel against the shifted free phase
    let mut phase = mu * z * z / (2.0 * HBAR * t);
    if let Mode::Field { force } = config.mode() {
        phase += force * t * z / (2.0 * HBAR) - force * force * t.powi(3) / (24.0 * mu * HBAR);
    }
    let prefactor = Complex64::from_polar((mu / t).sqrt(), -FRAC_PI_4);
    Ok(prefactor * Complex64::from_polar(1.0, phase) * momentum_wavefunction(spec, p_i))
}

/// Imaging-limit density `(μ/t)|Ψ̃ₙ(p_i)|²` at the detector.
pub fn it_density(spec: &OscillatorSpec, config: &DetectionConfig, t: f64) -> Result<f64> {
    let p_i = config_momentum(config, t, spec.mu())?;
    Ok(spec.mu() / t * crate::states::momentum_density(spec, p_i))
}

/// Classical arrival velocity `v_f` at the detector.
pub fn arrival_velocity(config: &DetectionConfig, t: f64, mu: f64) -> f64 {
    let z = config.z_f();
    match config.mode() {
        Mode::Free | Mode::Boost { .. } => z / t,
        Mode::Field { force } => z / t + force * t / (2.0 * mu),
    }
}

/// Closed form of `j / (|Ψ|² v_f)` at the detector, the same for every `n`.
///
/// Free: `ω²t²/(1+ω²t²)`. Boost: `(p₀/p_f + ω²t²)/(1+ω²t²)`.
/// Field: `1 − (p_i/p_f)/(1+ω²t²)`, which reduces to the free ratio at
/// `F = 0` where `p_i = p_f`.
pub fn current_ratio(omega: f64, mu: f64, config: &DetectionConfig, t: f64) -> Result<f64> {
    require_positive_time(t)?;
    let wt2 = (omega * t).powi(2);
    let p_f = mu * arrival_velocity(config, t, mu);
    if p_f == 0.0 {
        return Err(Error::SingularRatio);
    }
    Ok(match config.mode() {
        Mode::Free => wt2 / (1.0 + wt2),
        Mode::Boost { p_c } => (0.5 * p_c / p_f + wt2) / (1.0 + wt2),
        Mode::Field { force } => {
            let p_i = mu * config.z_f() / t - 0.5 * force * t;
            1.0 - (p_i / p_f) / (1.0 + wt2)
        }
    })
}
