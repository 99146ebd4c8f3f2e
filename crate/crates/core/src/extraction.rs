//! Inversion of detector time spectra into initial momentum distributions,
//! and the probability current at the detector.
//!
//! A particle leaving the origin with momentum `p_i` reaches `z_f` at a
//! unique time `t(p_i)`; dividing the spectrum by the classical density
//! `dp_i/dz_f = μ/t` and evaluating it at that time recovers `|Ψ̃(p_i)|²`.

use crate::error::{Error, Result};
use crate::propagation::{evolve_with_gradient_at, DetectionConfig, Mode};
use crate::quadrature::{simpson, trapezoid};
use crate::states::OscillatorSpec;
use crate::units::HBAR;

/// Detector density `|Ψ(z_f, t)|²` sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSpectrum {
    pub z_f: f64,
    pub mode: Mode,
    samples: Vec<(f64, f64)>,
}

impl TimeSpectrum {
    pub fn new(z_f: f64, mode: Mode, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidInput(
                "time samples must be strictly increasing".into(),
            ));
        }
        if samples.iter().any(|&(_, d)| !(d >= 0.0)) {
            return Err(Error::InvalidInput(
                "spectrum densities must be non-negative".into(),
            ));
        }
        Ok(Self { z_f, mode, samples })
    }

    /// Samples `density(t)` on `times`.
    pub fn tabulate<F: Fn(f64) -> f64>(
        config: &DetectionConfig,
        times: &[f64],
        density: F,
    ) -> Result<Self> {
        let samples = times.iter().map(|&t| (t, density(t))).collect();
        Self::new(config.z_f(), config.mode(), samples)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumSample {
    pub p: f64,
    /// `None` where no particle with this momentum reaches the detector.
    pub density: Option<f64>,
}

/// Momentum density on a grid. Points the detector cannot see stay
/// explicitly uncovered rather than zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumDistribution {
    samples: Vec<MomentumSample>,
    normalization: f64,
}

impl MomentumDistribution {
    pub fn new(samples: Vec<MomentumSample>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].p > w[0].p)) {
            return Err(Error::InvalidInput(
                "momentum grid must be strictly increasing".into(),
            ));
        }
        if samples
            .iter()
            .any(|s| s.density.is_some_and(|d| !(d >= 0.0)))
        {
            return Err(Error::InvalidInput(
                "momentum densities must be non-negative".into(),
            ));
        }
        let normalization = covered_integral(&samples);
        Ok(Self {
            samples,
            normalization,
        })
    }

    pub fn samples(&self) -> &[MomentumSample] {
        &self.samples
    }

    /// Integrated probability over the covered range.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `(p, density)` for covered points only.
    pub fn covered(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples
            .iter()
            .filter_map(|s| s.density.map(|d| (s.p, d)))
    }

    /// Multiplies every covered density by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let samples = self
            .samples
            .iter()
            .map(|s| MomentumSample {
                p: s.p,
                density: s.density.map(|d| d * factor),
            })
            .collect();
        Self::new(samples)
    }
}

/// Trapezoid integral over each contiguous run of covered points.
fn covered_integral(samples: &[MomentumSample]) -> f64 {
    samples
        .split(|s| s.density.is_none())
        .map(|run| {
            let xs: Vec<f64> = run.iter().map(|s| s.p).collect();
            let ys: Vec<f64> = run.iter().map(|s| s.density.unwrap_or(0.0)).collect();
            trapezoid(&xs, &ys)
        })
        .sum()
}

/// Classical arrival time at the detector of a fragment with initial
/// relative momentum `p_i`.
pub fn arrival_time(p_i: f64, config: &DetectionConfig, mu: f64) -> Result<f64> {
    let z = config.z_f();
    let t = match config.mode() {
        Mode::Free | Mode::Boost { .. } => {
            let p = p_i + config.mode().boost_momentum();
            if !(p > 0.0) {
                return Err(Error::NoArrival(format!(
                    "effective momentum {p} does not point at the detector"
                )));
            }
            mu * z / p
        }
        Mode::Field { force } => {
            let disc = p_i * p_i + 2.0 * mu * force * z;
            if !(disc >= 0.0) {
                return Err(Error::NoArrival(format!(
                    "momentum {p_i} turns back before the detector"
                )));
            }
            let root = disc.sqrt();
            // rationalised form avoids cancellation for p_i ≫ √(2μFz)
            if p_i >= 0.0 {
                2.0 * mu * z / (p_i + root)
            } else {
                (root - p_i) / force
            }
        }
    };
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::NoArrival(format!(
            "momentum {p_i} gives arrival time {t}"
        )));
    }
    Ok(t)
}

/// Classical trajectory density `dp_i/dz_f = μ/t`, the same in all modes.
pub fn classical_density(t: f64, mu: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "elapsed time must be positive, got {t}"
        )));
    }
    Ok(mu / t)
}

/// `|Ψ̃(p_i)|² ≈ (t/μ)·|Ψ(z_f, t)|²` evaluated at `t = t(p_i)` for each grid
/// point. `source` returns the detector density at elapsed time `t`.
pub fn extract_momentum_density<F>(
    source: F,
    config: &DetectionConfig,
    mu: f64,
    p_grid: &[f64],
) -> Result<MomentumDistribution>
where
    F: Fn(f64) -> f64,
{
    let samples = p_grid
        .iter()
        .map(|&p| {
            let density = arrival_time(p, config, mu).ok().map(|t| t / mu * source(t));
            MomentumSample { p, density }
        })
        .collect();
    MomentumDistribution::new(samples)
}

/// Probability current `j = Re{Ψ* (−iħ/μ) ∂_z Ψ}` at the detector, from the
/// analytic gradient of the exact wavefunction.
pub fn current_density(spec: &OscillatorSpec, config: &DetectionConfig, t: f64) -> f64 {
    let (psi, dpsi) = evolve_with_gradient_at(spec, config.mode(), config.z_f(), t);
    HBAR / spec.mu() * (psi.conj() * dpsi).im
}

/// `∫₀^∞ j(z_f, t) dt`, the fraction of all fragments that ever cross the
/// detector plane.
///
/// Integrated over the initial momentum `q` through the arrival map
/// `t = t(q)`, which turns the slowly decaying large-`t` tail into a finite
/// neighbourhood of the slowest detectable momentum.
pub fn integrated_current(spec: &OscillatorSpec, config: &DetectionConfig) -> f64 {
    let mu = spec.mu();
    let z = config.z_f();
    let support = spec.momentum_support();
    let floor = match config.mode() {
        Mode::Free | Mode::Boost { .. } => -config.mode().boost_momentum(),
        Mode::Field { .. } => f64::NEG_INFINITY,
    };
    let lo = floor.max(-support);
    let hi = support;
    if !(hi > lo) {
        return 0.0;
    }
    let lo = if floor > -support {
        lo + 1e-9 * support
    } else {
        lo
    };
    let jacobian = |q: f64, t: f64| match config.mode() {
        Mode::Free | Mode::Boost { .. } => t * t / (mu * z),
        Mode::Field { force } => (1.0 - q / (q * q + 2.0 * mu * force * z).sqrt()) / force,
    };
    simpson(
        |q| match arrival_time(q, config, mu) {
            Ok(t) => current_density(spec, config, t) * jacobian(q, t),
            Err(_) => 0.0,
        },
        lo,
        hi,
        40_000,
    )
}
