//! Subcommand implementations. Each builds plot-ready datasets; writing
//! them out is left to the caller.

use itlab::extraction::{arrival_time, classical_density, extract_momentum_density};
use itlab::imaging::{it_density, stationary_momentum, Trajectory};
use itlab::montecarlo::{
    build_histogram, default_window, reconstruct_momentum, sample_arrival_times,
};
use itlab::propagation::{density, DetectionConfig, Mode};
use itlab::quadrature::linspace;
use itlab::states::{momentum_density, OscillatorSpec};
use itlab::units::{time_au_to_us, us_to_time_au};

use crate::args::{
    ModeArgs, MomentumArgs, MomentumGrid, SimulateArgs, StateArgs, TimeSpectrumArgs, TrajectoryArgs,
};
use crate::dataset::{Cell, Dataset};
use crate::error::CliError;
use crate::quantity::{self, Quantity};

/// Ordered `(flag, value)` pairs from which the provenance header and the
/// equivalent command line are built.
struct Provenance {
    subcommand: &'static str,
    params: Vec<(&'static str, String)>,
}

impl Provenance {
    fn new(subcommand: &'static str) -> Self {
        Self {
            subcommand,
            params: Vec::new(),
        }
    }

    fn with(mut self, flag: &'static str, value: impl ToString) -> Self {
        self.params.push((flag, value.to_string()));
        self
    }

    fn header(&self, artifact: &str) -> Vec<(String, String)> {
        let mut command = format!("itlab {}", self.subcommand);
        for (flag, value) in &self.params {
            command.push_str(&format!(" --{flag}={value}"));
        }
        let mut lines = vec![
            ("artifact".to_string(), artifact.to_string()),
            (
                "version".to_string(),
                format!("itlab {}", env!("CARGO_PKG_VERSION")),
            ),
            ("command".to_string(), command),
        ];
        lines.extend(self.params.iter().map(|(k, v)| (k.to_string(), v.clone())));
        lines
    }
}

fn spec(state: &StateArgs, default_n: u32) -> Result<OscillatorSpec, CliError> {
    Ok(OscillatorSpec::new(
        state.n.unwrap_or(default_n),
        state.mu,
        state.omega,
    )?)
}

fn state_provenance(p: Provenance, spec: &OscillatorSpec) -> Provenance {
    p.with("n", spec.n())
        .with("mu", spec.mu())
        .with("omega", spec.omega())
}

/// The mode flag and its value as given, for the provenance header.
type ModeTag = Option<(&'static str, String)>;

/// A zero field or zero boost is free flight.
fn detection(
    z_f: &Quantity,
    mode: &ModeArgs,
    default_field: Option<&str>,
) -> Result<(DetectionConfig, ModeTag), CliError> {
    let default = default_field
        .map(|d| quantity::force(d).map_err(CliError::Usage))
        .transpose()?;
    let (mode, tag) = match (&mode.field, &mode.boost) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--field and --boost are mutually exclusive".into(),
            ))
        }
        (None, Some(q)) if q.au == 0.0 => (Mode::Free, Some(("boost", q.text.clone()))),
        (None, Some(q)) => (Mode::Boost { p_c: q.au }, Some(("boost", q.text.clone()))),
        (field, None) => match field.as_ref().or(default.as_ref()) {
            Some(q) if q.au == 0.0 => (Mode::Free, Some(("field", q.text.clone()))),
            Some(q) => (Mode::Field { force: q.au }, Some(("field", q.text.clone()))),
            None => (Mode::Free, None),
        },
    };
    Ok((DetectionConfig::new(z_f.au, mode)?, tag))
}

/// Free-flight spectra are shown at 2 a₀; boosted ones at 5 a₀, where the
/// n=2 nodes are better separated.
fn default_distance(zf: &Option<Quantity>, mode: &ModeArgs) -> Result<Quantity, CliError> {
    match zf {
        Some(q) => Ok(q.clone()),
        None => quantity::length(if mode.boost.is_some() { "5a0" } else { "2a0" })
            .map_err(CliError::Usage),
    }
}

fn with_mode(p: Provenance, tag: ModeTag) -> Provenance {
    match tag {
        Some((flag, value)) => p.with(flag, value),
        None => p,
    }
}

fn grid(lo: &Quantity, hi: &Quantity, points: usize, what: &str) -> Result<Vec<f64>, CliError> {
    if points < 2 || !(hi.au > lo.au) {
        return Err(CliError::Usage(format!(
            "{what} grid needs at least 2 points and max > min"
        )));
    }
    Ok(linspace(lo.au, hi.au, points))
}

fn momentum_grid(g: &MomentumGrid) -> Result<Vec<f64>, CliError> {
    grid(&g.p_min, &g.p_max, g.p_points, "momentum")
}

fn grid_provenance(p: Provenance, g: &MomentumGrid) -> Provenance {
    p.with("p-min", &g.p_min)
        .with("p-max", &g.p_max)
        .with("p-points", g.p_points)
}

pub fn timespectrum(args: &TimeSpectrumArgs) -> Result<Dataset, CliError> {
    let spec = spec(&args.state, 0)?;
    let zf = default_distance(&args.zf, &args.mode)?;
    let (config, tag) = detection(&zf, &args.mode, None)?;
    if args.t_min.au < 0.0 {
        return Err(CliError::Usage("--t-min must not be negative".into()));
    }
    let times = grid(&args.t_min, &args.t_max, args.t_points, "time")?;
    let prov = with_mode(
        state_provenance(Provenance::new("timespectrum"), &spec).with("zf", &zf),
        tag,
    )
    .with("t-min", &args.t_min)
    .with("t-max", &args.t_max)
    .with("t-points", args.t_points);
    let mut data = Dataset::new(
        prov.header("time spectrum"),
        vec!["t_au", "exact_density", "it_density", "classical_density"],
    );
    let mu = spec.mu();
    for t in times {
        data.push(vec![
            t.into(),
            density(&spec, &config, t).into(),
            it_density(&spec, &config, t).ok().into(),
            classical_density(t, mu).ok().into(),
        ]);
    }
    Ok(data)
}

pub fn momentum(args: &MomentumArgs) -> Result<Dataset, CliError> {
    let spec = spec(&args.state, 0)?;
    let zf = default_distance(&args.zf, &args.mode)?;
    let (config, tag) = detection(&zf, &args.mode, None)?;
    let ps = momentum_grid(&args.grid)?;
    let prov = grid_provenance(
        with_mode(
            state_provenance(Provenance::new("momentum"), &spec).with("zf", &zf),
            tag,
        ),
        &args.grid,
    );
    let extracted =
        extract_momentum_density(|t| density(&spec, &config, t), &config, spec.mu(), &ps)?;
    let mut data = Dataset::new(
        prov.header("extracted momentum distribution"),
        vec!["p_au", "exact_density", "extracted_density", "covered_flag"],
    );
    for s in extracted.samples() {
        data.push(vec![
            s.p.into(),
            momentum_density(&spec, s.p).into(),
            s.density.into(),
            Cell::Flag(s.density.is_some()),
        ]);
    }
    Ok(data)
}

/// Events, histogram and reconstruction sharing one provenance header.
pub fn simulate(args: &SimulateArgs) -> Result<[(&'static str, Dataset); 3], CliError> {
    let spec = spec(&args.state, 2)?;
    let default_field = if args.mode.boost.is_none() {
        Some("1eV/cm")
    } else {
        None
    };
    let (config, tag) = detection(&args.zf, &args.mode, default_field)?;
    let bins = match &args.bins {
        Some(q) => q.clone(),
        None => {
            let text = if matches!(config.mode(), Mode::Field { .. }) {
                "0.01us"
            } else {
                "1us"
            };
            quantity::time(text).map_err(CliError::Usage)?
        }
    };
    let ps = momentum_grid(&args.grid)?;
    let prov = with_mode(
        state_provenance(Provenance::new("simulate"), &spec).with("zf", &args.zf),
        tag,
    )
    .with("count", args.count)
    .with("seed", args.seed)
    .with("bins", &bins);
    let prov = grid_provenance(prov, &args.grid);

    let window = default_window(&spec, &config)?;
    let events = sample_arrival_times(&spec, &config, args.count, args.seed, window)?;
    let hist = build_histogram(&events, bins.au)?;
    let recon = reconstruct_momentum(&hist, &spec, &config, &ps)?;

    let mut ev = Dataset::new(prov.header("simulated arrival events"), vec!["t_us"]);
    for &t in &events.times {
        ev.push(vec![time_au_to_us(t).into()]);
    }
    let mut hi = Dataset::new(
        prov.header("arrival-time histogram"),
        vec![
            "t_lo_au",
            "t_hi_au",
            "t_center_us",
            "count",
            "density_per_au",
            "density_per_us",
        ],
    );
    let per_us = us_to_time_au(1.0);
    for (k, &c) in hist.counts.iter().enumerate() {
        let (a, b) = (hist.bin_edges[k], hist.bin_edges[k + 1]);
        let d = hist.normalized_density[k];
        hi.push(vec![
            a.into(),
            b.into(),
            time_au_to_us(0.5 * (a + b)).into(),
            Cell::Int(c),
            d.into(),
            (d * per_us).into(),
        ]);
    }
    let mut re = Dataset::new(
        prov.header("reconstructed momentum distribution"),
        vec![
            "p_au",
            "exact_density",
            "reconstructed_density",
            "covered_flag",
        ],
    );
    for s in recon.samples() {
        re.push(vec![
            s.p.into(),
            momentum_density(&spec, s.p).into(),
            s.density.into(),
            Cell::Flag(s.density.is_some()),
        ]);
    }
    Ok([("events", ev), ("histogram", hi), ("reconstruction", re)])
}

pub fn trajectories(args: &TrajectoryArgs) -> Result<Dataset, CliError> {
    let (config, tag) = detection(&args.zf, &args.mode, None)?;
    let mode = config.mode();
    let mu = args.mu;
    let t_end = args.t.au;
    if !(t_end > 0.0) || args.t_points < 2 || args.curves == 0 {
        return Err(CliError::Usage(
            "--t must be positive, with at least 2 time points and 1 curve".into(),
        ));
    }
    if !(args.dz.au > 0.0 && args.dz.au < 2.0 * args.zf.au) {
        return Err(CliError::Usage(
            "--dz must be positive and smaller than twice --zf".into(),
        ));
    }
    let prov = with_mode(
        Provenance::new("trajectories")
            .with("mu", mu)
            .with("p-i", &args.p_i)
            .with("p-spread", &args.p_spread)
            .with("zf", &args.zf)
            .with("z-spread", &args.z_spread),
        tag,
    )
    .with("curves", args.curves)
    .with("t", &args.t)
    .with("t-points", args.t_points)
    .with("dz", &args.dz);

    let fan = |centre: f64, spread: f64| -> Vec<f64> {
        if args.curves == 1 {
            vec![centre]
        } else {
            linspace(centre - spread, centre + spread, args.curves)
        }
    };
    let times = linspace(0.0, t_end, args.t_points);
    let (force, p_c) = (mode.force(), mode.boost_momentum() * 2.0);
    let p_at = |z: f64, t: f64| stationary_momentum(z, t, mu, force, p_c).ok();

    let mut data = Dataset::new(
        prov.header("classical trajectories"),
        vec!["curve", "parameter_au", "t_au", "z_au", "p_i_au"],
    );
    for p in fan(args.p_i.au, args.p_spread.au) {
        let traj = Trajectory::from_origin(p, mode);
        for &t in &times {
            data.push(vec![
                Cell::Text("z_fan"),
                p.into(),
                t.into(),
                traj.position(t, mu).into(),
                p.into(),
            ]);
        }
    }
    for z in fan(args.zf.au, args.z_spread.au) {
        for &t in &times {
            data.push(vec![
                Cell::Text("p_fan"),
                z.into(),
                t.into(),
                z.into(),
                p_at(z, t).into(),
            ]);
        }
    }
    // corners of the δz × δp_i cell mapped by the trajectories at t
    let (z_lo, z_hi) = (args.zf.au - 0.5 * args.dz.au, args.zf.au + 0.5 * args.dz.au);
    let (p_lo, p_hi) = (p_at(z_lo, t_end), p_at(z_hi, t_end));
    let jacobian = match (p_lo, p_hi) {
        (Some(a), Some(b)) => Some((b - a) / (z_hi - z_lo)),
        _ => None,
    };
    for (z, p) in [(z_lo, p_lo), (z_hi, p_lo), (z_hi, p_hi), (z_lo, p_hi)] {
        data.push(vec![
            Cell::Text("rectangle"),
            jacobian.into(),
            t_end.into(),
            z.into(),
            p.into(),
        ]);
    }
    Ok(data)
}

/// A named pass/fail check with its measured discrepancy.
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.value <= self.tolerance
    }
}

pub fn selfcheck() -> Result<Vec<Check>, CliError> {
    use itlab::extraction::{current_density, integrated_current};
    use itlab::imaging::{arrival_velocity, config_momentum, current_ratio};
    use itlab::propagation::{
        evolve_boosted, evolve_field, evolve_free_exact, fourier_oracle, fourier_oracle_field,
        spatial_width,
    };
    use itlab::quadrature::simpson;
    use itlab::states::momentum_width;

    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let spec = OscillatorSpec::h2_plus(2)?;
    let (z, t) = (2.0, 2000.0);
    let mut checks = Vec::new();

    let exact = evolve_free_exact(&spec, z, t).norm_sqr();
    let oracle = fourier_oracle(&spec, z, t, 0.0)?.norm_sqr();
    checks.push(Check {
        name: "free evolution matches Fourier quadrature",
        value: rel(exact, oracle),
        tolerance: 1e-6,
    });
    let exact = evolve_boosted(&spec, z, t, 1.0).norm_sqr();
    let oracle = fourier_oracle(&spec, z, t, 0.5)?.norm_sqr();
    checks.push(Check {
        name: "boosted evolution matches Fourier quadrature",
        value: rel(exact, oracle),
        tolerance: 1e-6,
    });
    let exact = evolve_field(&spec, z, t, 1e-4).norm_sqr();
    let oracle = fourier_oracle_field(&spec, z, t, 1e-4)?.norm_sqr();
    checks.push(Check {
        name: "field evolution matches Fourier quadrature",
        value: rel(exact, oracle),
        tolerance: 1e-6,
    });

    let s = spec.momentum_support();
    let norm = simpson(|p| momentum_density(&spec, p), -s, s, 20_000);
    checks.push(Check {
        name: "momentum state is normalized",
        value: (norm - 1.0).abs(),
        tolerance: 1e-8,
    });

    let free = DetectionConfig::free(z)?;
    let t_far = 5000.0;
    let p = config_momentum(&free, t_far, spec.mu())?;
    let locus = it_density(&spec, &free, t_far)? * t_far / spec.mu();
    checks.push(Check {
        name: "imaging density lies on the momentum locus",
        value: rel(locus, momentum_density(&spec, p)),
        tolerance: 1e-12,
    });

    let t5 = 5.0 / spec.omega();
    let measured = current_density(&spec, &free, t5)
        / (density(&spec, &free, t5) * arrival_velocity(&free, t5, spec.mu()));
    let closed = current_ratio(spec.omega(), spec.mu(), &free, t5)?;
    checks.push(Check {
        name: "free current ratio closed form",
        value: (measured - closed).abs(),
        tolerance: 1e-6,
    });
    checks.push(Check {
        name: "free flight delivers half the fragments",
        value: (integrated_current(&spec, &free) - 0.5).abs(),
        tolerance: 1e-3,
    });

    let ground = OscillatorSpec::h2_plus(0)?;
    let t_w = 1000.0;
    let product = spatial_width(&ground, t_w) * momentum_width(&ground);
    let expected = 0.5 * (1.0 + (ground.omega() * t_w).powi(2)).sqrt();
    checks.push(Check {
        name: "ground-state width product growth",
        value: rel(product, expected),
        tolerance: 1e-4,
    });

    let lab = DetectionConfig::field(
        itlab::units::length_cm_to_au(20.0),
        itlab::units::field_ev_per_cm_to_au(1.0),
    )?;
    let window = default_window(&spec, &lab)?;
    let a = sample_arrival_times(&spec, &lab, 2048, 42, window)?;
    let b = sample_arrival_times(&spec, &lab, 2048, 42, window)?;
    checks.push(Check {
        name: "seeded sampling is reproducible",
        value: if a == b { 0.0 } else { 1.0 },
        tolerance: 0.0,
    });
    let earliest = arrival_time(spec.momentum_support(), &lab, spec.mu())?;
    let us = time_au_to_us(earliest);
    checks.push(Check {
        name: "laboratory arrivals are microseconds",
        value: if (1.0..30.0).contains(&us) { 0.0 } else { us },
        tolerance: 0.0,
    });
    Ok(checks)
}
