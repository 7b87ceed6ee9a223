use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use logsing::{
    build_amplitude_damping, build_erasure, build_generalized_erasure, build_pedagogic,
    build_qubit_family, build_qutrit, Isometry,
};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    Pedagogic,
    Qubit,
    AmpDamping,
    Qutrit,
    GenErasure,
    Erasure,
}

/// A named channel pair with its parameters, or an isometry read from JSON.
#[derive(Debug, Clone, Args)]
pub struct ChannelSpec {
    #[arg(
        long,
        value_enum,
        required_unless_present = "isometry_file",
        conflicts_with = "isometry_file"
    )]
    pub channel: Option<ChannelKind>,
    /// Isometry JSON with fields d_a, d_b, d_c and row-major [re, im] entries.
    #[arg(long)]
    pub isometry_file: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Exchange the roles of the two outputs.
    #[arg(long)]
    pub complement: bool,
}

fn need(value: Option<f64>, flag: &str, kind: ChannelKind) -> Result<f64> {
    value.with_context(|| format!("--{flag} is required for --channel {}", kind.name()))
}

impl ChannelKind {
    fn name(self) -> &'static str {
        match self {
            ChannelKind::Pedagogic => "pedagogic",
            ChannelKind::Qubit => "qubit",
            ChannelKind::AmpDamping => "amp-damping",
            ChannelKind::Qutrit => "qutrit",
            ChannelKind::GenErasure => "gen-erasure",
            ChannelKind::Erasure => "erasure",
        }
    }
}

impl ChannelSpec {
    pub fn build(&self) -> Result<Isometry> {
        let j = match (self.channel, &self.isometry_file) {
            (_, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Isometry::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            (Some(kind), None) => {
                let j = match kind {
                    ChannelKind::Pedagogic => build_pedagogic(need(self.p, "p", kind)?),
                    ChannelKind::Qubit => {
                        build_qubit_family(need(self.m, "m", kind)?, need(self.p, "p", kind)?)
                    }
                    ChannelKind::AmpDamping => build_amplitude_damping(need(self.p, "p", kind)?),
                    ChannelKind::Qutrit => build_qutrit(need(self.s, "s", kind)?),
                    ChannelKind::GenErasure => {
                        let inner =
                            build_qubit_family(need(self.m, "m", kind)?, need(self.p, "p", kind)?)?;
                        build_generalized_erasure(&inner, need(self.lambda, "lambda", kind)?)
                    }
                    ChannelKind::Erasure => build_erasure(need(self.lambda, "lambda", kind)?),
                };
                j.with_context(|| format!("building --channel {}", kind.name()))?
            }
            (None, None) => bail!("either --channel or --isometry-file is required"),
        };
        Ok(if self.complement { j.swapped() } else { j })
    }

    /// Parameters as recorded in output metadata.
    pub fn describe(&self) -> Value {
        let mut map = Map::new();
        if let Some(kind) = self.channel {
            map.insert("channel".into(), json!(kind.name()));
        }
        if let Some(path) = &self.isometry_file {
            map.insert("isometry_file".into(), json!(path.display().to_string()));
        }
        for (key, value) in [
            ("p", self.p),
            ("m", self.m),
            ("s", self.s),
            ("lambda", self.lambda),
        ] {
            if let Some(v) = value {
                map.insert(key.into(), json!(v));
            }
        }
        map.insert("complement".into(), json!(self.complement));
        Value::Object(map)
    }
}
