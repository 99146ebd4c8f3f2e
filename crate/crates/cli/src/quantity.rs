//! Unit-tagged command-line quantities such as `20cm`, `1eV/cm` or `25au`.
//!
//! Every dimensioned input must carry a tag; the original text is kept so
//! provenance headers echo exactly what was typed.

use std::fmt;

use itlab::units;

type Conversion = (&'static str, fn(f64) -> f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Force,
    Momentum,
}

impl Dimension {
    fn name(self) -> &'static str {
        match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Force => "force",
            Dimension::Momentum => "momentum",
        }
    }

    /// Accepted tags with their conversion to atomic units, longest first
    /// so that `us` wins over `s` and `cm` over `m`.
    fn tags(self) -> &'static [Conversion] {
        match self {
            Dimension::Length => &[
                ("a0", |x| x),
                ("au", |x| x),
                ("nm", |x| units::length_cm_to_au(x * 1e-7)),
                ("mm", |x| units::length_cm_to_au(x * 0.1)),
                ("cm", units::length_cm_to_au),
                ("m", |x| units::length_cm_to_au(x * 100.0)),
            ],
            Dimension::Time => &[
                ("au", |x| x),
                ("ns", |x| units::seconds_to_time_au(x * 1e-9)),
                ("us", units::us_to_time_au),
                ("µs", units::us_to_time_au),
                ("ms", |x| units::seconds_to_time_au(x * 1e-3)),
                ("s", units::seconds_to_time_au),
            ],
            Dimension::Force => &[("eV/cm", units::field_ev_per_cm_to_au), ("au", |x| x)],
            Dimension::Momentum => &[("au", |x| x)],
        }
    }
}

/// A parsed quantity: its value in atomic units and the text it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub au: f64,
    pub text: String,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub fn parse(dimension: Dimension, raw: &str) -> Result<Quantity, String> {
    let text = raw.trim();
    let mut tags: Vec<_> = dimension.tags().to_vec();
    tags.sort_by_key(|(tag, _)| std::cmp::Reverse(tag.len()));
    for (tag, to_au) in tags {
        if let Some(number) = text.strip_suffix(tag) {
            let number = number.trim_end();
            let value: f64 = number
                .parse()
                .map_err(|_| format!("'{raw}': '{number}' is not a number"))?;
            if !value.is_finite() {
                return Err(format!("'{raw}': value must be finite"));
            }
            return Ok(Quantity {
                au: to_au(value),
                text: text.to_string(),
            });
        }
    }
    let accepted: Vec<&str> = dimension.tags().iter().map(|(t, _)| *t).collect();
    let hint = if dimension == Dimension::Momentum && text.ends_with("v0") {
        "; a velocity tag is ambiguous for a momentum, give the momentum in au".to_string()
    } else if text.parse::<f64>().is_ok() {
        "; bare numbers are not accepted for dimensioned quantities".to_string()
    } else {
        String::new()
    };
    Err(format!(
        "'{raw}' is not a {} (expected a number followed by one of {}){hint}",
        dimension.name(),
        accepted.join(", ")
    ))
}

pub fn length(raw: &str) -> Result<Quantity, String> {
    parse(Dimension::Length, raw)
}

pub fn time(raw: &str) -> Result<Quantity, String> {
    parse(Dimension::Time, raw)
}

pub fn force(raw: &str) -> Result<Quantity, String> {
    parse(Dimension::Force, raw)
}

pub fn momentum(raw: &str) -> Result<Quantity, String> {
    parse(Dimension::Momentum, raw)
}

/// Mass and frequency are model parameters already in atomic units; an
/// optional `au` tag is accepted.
pub fn atomic(raw: &str) -> Result<f64, String> {
    let number = raw
        .trim()
        .strip_suffix("au")
        .unwrap_or(raw.trim())
        .trim_end();
    let value: f64 = number
        .parse()
        .map_err(|_| format!("'{raw}' is not a number"))?;
    if !(value.is_finite() && value > 0.0) {
        return Err(format!("'{raw}' must be positive"));
    }
    Ok(value)
}
