//! Scenario configuration: a flat key-value text format with sections.
//! The format round-trips losslessly (f64 values are written in Rust's
//! shortest exact decimal form) and parse errors carry line numbers and
//! the offending key.
//!
//! ```text
//! [scenario]
//! name = superior-baseline   # optional preset base
//! out = runs/demo            # optional output directory
//!
//! [params]
//! d1 = 1    d2 = 1    a1 = 3    a2 = 1   ... mu = 8   h0 = 0.8   dim = 1
//!
//! [initial]
//! u0 = quadratic 1.5         # quadratic <amplitude>
//! v0 = constant 1            # constant <value>
//!
//! [grid]
//! m_u = 256  m_v = 700  l_v = 70  dt = 0.001  t_end = 20  output_stride = 20
//! ```
//!
//! (One key per line in actual files; see docs/config.md for the schema.)

use fbcomp_core::fbsolver::GridSpec;
use fbcomp_core::model::{InitialData, ModelParams, RadialProfile};
use fbcomp_core::presets;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "config line {}: {}", self.line, self.message)
        } else {
            write!(f, "config: {}", self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Preset the scenario was based on, if any.
    pub name: Option<String>,
    /// Output directory (CLI --out overrides).
    pub out: Option<PathBuf>,
    pub params: ModelParams,
    pub initial: InitialData,
    pub grid: GridSpec,
}

impl Scenario {
    /// The implicit base every config starts from.
    pub fn base() -> Self {
        Scenario::from_preset("superior-baseline").unwrap()
    }

    pub fn from_preset(name: &str) -> Option<Self> {
        let preset = presets::by_name(name)?;
        Some(Scenario {
            name: Some(name.to_string()),
            out: None,
            params: preset.params,
            initial: preset.initial,
            grid: preset.grid,
        })
    }

    /// Parse a config file. Keys override the named preset (or the
    /// superior baseline when no name is given).
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        // first pass: pick the base so later keys override it
        let mut base_name = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if let Some((key, value)) = split_key_value(line) {
                if key == "name" {
                    base_name = Some((idx + 1, value.to_string()));
                }
            }
        }
        let mut scenario = match &base_name {
            Some((line_no, name)) => Scenario::from_preset(name)
                .ok_or_else(|| err(*line_no, format!("unknown scenario name `{name}` (expected one of {:?})", presets::NAMES)))?,
            None => {
                let mut s = Scenario::base();
                s.name = None;
                s
            }
        };

        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                match name {
                    "scenario" | "params" | "initial" | "grid" => section = name.to_string(),
                    other => return Err(err(line_no, format!("unknown section `[{other}]`"))),
                }
                continue;
            }
            let (key, value) = split_key_value(line)
                .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{line}`")))?;
            scenario.apply(&section, key, value, line_no)?;
        }
        scenario.validate().map_err(|e| err(0, e.to_string()))?;
        Ok(scenario)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str, line_no: usize) -> Result<(), ConfigError> {
        let f = |v: &str| -> Result<f64, ConfigError> {
            v.parse::<f64>().map_err(|_| err(line_no, format!("key `{key}`: `{v}` is not a number")))
        };
        let n = |v: &str| -> Result<usize, ConfigError> {
            v.parse::<usize>().map_err(|_| err(line_no, format!("key `{key}`: `{v}` is not an integer")))
        };
        match (section, key) {
            ("scenario", "name") => {} // consumed in the first pass
            ("scenario", "out") => self.out = Some(PathBuf::from(value)),
            ("params", "d1") => self.params.d1 = f(value)?,
            ("params", "d2") => self.params.d2 = f(value)?,
            ("params", "a1") => self.params.a1 = f(value)?,
            ("params", "a2") => self.params.a2 = f(value)?,
            ("params", "b1") => self.params.b1 = f(value)?,
            ("params", "b2") => self.params.b2 = f(value)?,
            ("params", "c1") => self.params.c1 = f(value)?,
            ("params", "c2") => self.params.c2 = f(value)?,
            ("params", "mu") => self.params.mu = f(value)?,
            ("params", "h0") => self.params.h0 = f(value)?,
            ("params", "dim") => {
                self.params.dim = value.parse::<u32>()
                    .map_err(|_| err(line_no, format!("key `dim`: `{value}` is not an integer")))?;
            }
            ("initial", "u0") => self.initial.u0 = parse_profile(value, line_no)?,
            ("initial", "v0") => self.initial.v0 = parse_profile(value, line_no)?,
            ("grid", "m_u") => self.grid.m_u = n(value)?,
            ("grid", "m_v") => self.grid.m_v = n(value)?,
            ("grid", "l_v") => self.grid.l_v = f(value)?,
            ("grid", "dt") => self.grid.dt = f(value)?,
            ("grid", "t_end") => self.grid.t_end = f(value)?,
            ("grid", "output_stride") => self.grid.output_stride = n(value)?,
            ("", key) => return Err(err(line_no, format!("key `{key}` appears before any section"))),
            (section, key) => {
                return Err(err(line_no, format!("unknown key `{key}` in section [{section}]")))
            }
        }
        Ok(())
    }

    /// Full parameter/grid validation via the core types.
    pub fn validate(&self) -> fbcomp_core::Result<()> {
        self.params.validate()?;
        self.initial.validate()?;
        self.grid.validate(&self.params)
    }

    /// Canonical form: parsing the output reproduces the scenario exactly.
    pub fn to_config_string(&self) -> String {
        let mut s = String::from("[scenario]\n");
        if let Some(name) = &self.name {
            s.push_str(&format!("name = {name}\n"));
        }
        if let Some(out) = &self.out {
            s.push_str(&format!("out = {}\n", out.display()));
        }
        let p = &self.params;
        s.push_str(&format!(
            "\n[params]\nd1 = {}\nd2 = {}\na1 = {}\na2 = {}\nb1 = {}\nb2 = {}\nc1 = {}\nc2 = {}\nmu = {}\nh0 = {}\ndim = {}\n",
            p.d1, p.d2, p.a1, p.a2, p.b1, p.b2, p.c1, p.c2, p.mu, p.h0, p.dim
        ));
        s.push_str(&format!(
            "\n[initial]\nu0 = {}\nv0 = {}\n",
            format_profile(&self.initial.u0),
            format_profile(&self.initial.v0)
        ));
        let g = &self.grid;
        s.push_str(&format!(
            "\n[grid]\nm_u = {}\nm_v = {}\nl_v = {}\ndt = {}\nt_end = {}\noutput_stride = {}\n",
            g.m_u, g.m_v, g.l_v, g.dt, g.t_end, g.output_stride
        ));
        s
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

fn split_key_value(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim(), v.trim()))
}

fn parse_profile(value: &str, line_no: usize) -> Result<RadialProfile, ConfigError> {
    let mut it = value.split_whitespace();
    let kind = it.next().unwrap_or("");
    let arg = it.next();
    if it.next().is_some() {
        return Err(err(line_no, format!("profile `{value}` has trailing tokens")));
    }
    let num = |a: Option<&str>| -> Result<f64, ConfigError> {
        a.ok_or_else(|| err(line_no, format!("profile `{kind}` needs a numeric argument")))?
            .parse::<f64>()
            .map_err(|_| err(line_no, format!("profile `{value}`: bad number")))
    };
    match kind {
        "quadratic" => Ok(RadialProfile::QuadraticBump { amplitude: num(arg)? }),
        "constant" => Ok(RadialProfile::Constant { value: num(arg)? }),
        other => Err(err(
            line_no,
            format!("unknown profile `{other}` (expected `quadratic <amp>` or `constant <value>`)"),
        )),
    }
}

fn format_profile(p: &RadialProfile) -> String {
    match p {
        RadialProfile::QuadraticBump { amplitude } => format!("quadratic {amplitude}"),
        RadialProfile::Constant { value } => format!("constant {value}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_preset_with_overrides() {
        let text = "\
[scenario]
name = superior-baseline

[params]
mu = 2.5
h0 = 0.6

[grid]
t_end = 5
";
        let s = Scenario::parse(text).unwrap();
        assert_eq!(s.params.mu, 2.5);
        assert_eq!(s.params.h0, 0.6);
        assert_eq!(s.params.a1, 3.0);
        assert_eq!(s.grid.t_end, 5.0);
        assert_eq!(s.grid.m_u, 256);
    }

    #[test]
    fn unknown_key_names_the_offender() {
        let e = Scenario::parse("[params]\nd3 = 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("`d3`"), "{e}");
    }

    #[test]
    fn bad_number_reports_line() {
        let e = Scenario::parse("[params]\nmu = fast\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("`mu`"));
    }

    #[test]
    fn key_outside_section_rejected() {
        let e = Scenario::parse("mu = 1\n").unwrap_err();
        assert!(e.message.contains("before any section"));
    }

    #[test]
    fn invalid_resolved_scenario_rejected() {
        let e = Scenario::parse("[params]\nmu = -1\n").unwrap_err();
        assert!(e.message.contains("mu"));
    }

    #[test]
    fn canonical_round_trip() {
        for name in presets::NAMES {
            let mut s = Scenario::from_preset(name).unwrap();
            s.out = Some(PathBuf::from("runs/demo"));
            let back = Scenario::parse(&s.to_config_string()).unwrap();
            assert_eq!(s, back);
        }
    }

    proptest! {
        // parse(write(s)) == s for arbitrary valid float overrides,
        // including values with no short decimal form
        #[test]
        fn round_trip_lossless(
            mu in 0.0..50.0f64,
            h0 in 0.05..2.0f64,
            a1 in prop::num::f64::POSITIVE.prop_filter("finite", |x| x.is_finite() && *x > 1e-3 && *x < 1e3),
            dt_scale in 1e-4..1.0f64,
        ) {
            let mut s = Scenario::base();
            s.params.mu = mu;
            s.params.h0 = h0;
            s.params.a1 = a1;
            s.grid.dt = (0.09 / s.params.a1.max(s.params.a2)) * dt_scale;
            s.grid.l_v = 5.0 * h0.max(1.0) + 0.1;
            prop_assume!(s.validate().is_ok());
            let back = Scenario::parse(&s.to_config_string()).unwrap();
            prop_assert_eq!(s, back);
        }
    }
}
