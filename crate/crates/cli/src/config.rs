//! TOML run configuration merged with command-line flags.
//!
//! ```toml
//! [model]
//! kind = "dss"
//! m = 1.0
//! c = 0.0
//!
//! [run]
//! interval = [1.1, 4.0]
//! points = 200
//! ```

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use warpstab_core::warping::{ResolvedInterval, SampledProfile};
use warpstab_core::{Interval, WarpingModel};

use crate::args::ModelArgs;
use crate::error::{CliError, Result};

pub const CAP_ENV: &str = "WARPSTAB_CAP";
pub const DEFAULT_POINTS: usize = 200;
pub const DEFAULT_ORDER: usize = 16;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: String,
    pub m: Option<f64>,
    pub c: Option<f64>,
    pub q: Option<f64>,
    pub b: Option<f64>,
    /// Sampled profile abscissae and values for `kind = "profile"`.
    pub s: Option<Vec<f64>>,
    pub u: Option<Vec<f64>>,
    pub cap: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub interval: Option<[f64; 2]>,
    pub points: Option<usize>,
    pub order: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config { path: path.into(), msg: e.to_string() })?;
        toml::from_str(&text).map_err(|e| CliError::Config { path: path.into(), msg: e.to_string() })
    }
}

/// Fully resolved options for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Option<WarpingModel>,
    pub interval: Option<Interval>,
    pub points: usize,
    pub order: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

fn need(v: Option<f64>, name: &str, kind: &str) -> Result<f64> {
    v.ok_or_else(|| CliError::Usage(format!("model {kind} needs --{name}")))
}

pub fn build_model(spec: &ModelSpec, env_cap: Option<f64>) -> Result<WarpingModel> {
    let k = spec.kind.as_str();
    let model = match k {
        "space_form" => WarpingModel::space_form(need(spec.c, "c", k)?)?,
        "dss" => WarpingModel::dss(need(spec.m, "m", k)?, spec.c.unwrap_or(0.0))?,
        "rn" => WarpingModel::rn(need(spec.m, "m", k)?, need(spec.q, "q", k)?)?,
        "ellipsoid" => WarpingModel::ellipsoid(need(spec.b, "b", k)?)?,
        "hyperboloid" => WarpingModel::hyperboloid(need(spec.b, "b", k)?)?,
        "profile" => {
            let (s, u) = match (&spec.s, &spec.u) {
                (Some(s), Some(u)) => (s, u),
                _ => return Err(CliError::Usage("model profile needs sample arrays s and u".into())),
            };
            WarpingModel::profile(Arc::new(SampledProfile::new(s, u)?))?
        }
        other => return Err(CliError::Usage(format!("unknown model kind '{other}'"))),
    };
    match spec.cap.or(env_cap) {
        Some(cap) => Ok(model.with_cap(cap)?),
        None => Ok(model),
    }
}

fn env_cap() -> Result<Option<f64>> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{CAP_ENV}='{v}' is not a number"))),
        Err(_) => Ok(None),
    }
}

impl RunConfig {
    pub fn resolve(file: &FileConfig, args: &ModelArgs) -> Result<Self> {
        let mut spec = file.model.clone();
        if let Some(kind) = &args.model {
            let keep = spec.as_ref().is_some_and(|s| &s.kind == kind);
            if !keep {
                spec = Some(ModelSpec { kind: kind.clone(), ..ModelSpec::default() });
            }
        }
        if let Some(spec) = spec.as_mut() {
            spec.m = args.m.or(spec.m);
            spec.c = args.c.or(spec.c);
            spec.q = args.q.or(spec.q);
            spec.b = args.b.or(spec.b);
        } else if args.m.is_some() || args.c.is_some() || args.q.is_some() || args.b.is_some() {
            return Err(CliError::Usage("model parameters given without --model".into()));
        }
        let model = spec.as_ref().map(|s| build_model(s, env_cap()?)).transpose()?;

        let interval = match (&args.interval, file.run.interval) {
            (Some(v), _) => Some(Interval::new(v[0], v[1])),
            (None, Some([a, b])) => Some(Interval::new(a, b)),
            _ => None,
        };
        let cfg = RunConfig {
            model,
            interval,
            points: args.points.or(file.run.points).unwrap_or(DEFAULT_POINTS),
            order: args.order.or(file.run.order).unwrap_or(DEFAULT_ORDER),
            tol: args.tol.or(file.run.tol).unwrap_or(DEFAULT_TOL),
            out: args.out.clone().or_else(|| file.run.out.clone()),
            svg: args.svg.clone().or_else(|| file.run.svg.clone()),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive (got {})", self.tol)));
        }
        if self.points < 2 {
            return Err(CliError::Usage("need at least 2 points".into()));
        }
        if self.order < 2 {
            return Err(CliError::Usage("quadrature order must be at least 2".into()));
        }
        if let (Some(m), Some(iv)) = (&self.model, self.interval) {
            m.resolve(iv)?;
        }
        Ok(())
    }

    pub fn model(&self) -> Result<&WarpingModel> {
        self.model
            .as_ref()
            .ok_or_else(|| CliError::Usage("no model given (use --model or a [model] table)".into()))
    }

    /// The requested interval, or a default window inside the domain that
    /// stops short of horizons, poles and distant caps.
    pub fn interval(&self) -> Result<ResolvedInterval> {
        let m = self.model()?;
        if let Some(iv) = self.interval {
            return Ok(m.resolve(iv)?);
        }
        let d = m.domain();
        let lo = if d.lo_capped {
            -5.0
        } else if d.lo_closed {
            d.lo
        } else if d.hi_capped {
            d.lo + 0.05
        } else {
            d.lo + 0.02 * (d.hi - d.lo)
        };
        let hi = if d.hi_capped && d.lo_capped {
            5.0
        } else if d.hi_capped {
            lo + 4.0 * (1.0 + lo.abs())
        } else {
            d.hi - 0.02 * (d.hi - d.lo)
        };
        Ok(ResolvedInterval { lo, hi: hi.min(d.hi), lo_capped: false, hi_capped: false })
    }

    /// Evaluation grid over [`RunConfig::interval`].
    pub fn grid(&self) -> Result<Vec<f64>> {
        Ok(self.interval()?.grid(self.points))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str(
            "[model]\nkind = \"dss\"\nm = 1.0\nc = 0.0\n[run]\ninterval = [1.1, 4.0]\npoints = 50\n",
        )
        .unwrap();
        let args = ModelArgs { c: Some(-1.0), points: Some(7), ..ModelArgs::default() };
        let cfg = RunConfig::resolve(&file, &args).unwrap();
        assert_eq!(cfg.points, 7);
        assert_eq!(cfg.model().unwrap().label(), "dss(m=1,c=-1)");
        assert_eq!(cfg.interval, Some(Interval::new(1.1, 4.0)));
    }

    #[test]
    fn rejects_bad_input() {
        let file = FileConfig::default();
        let args = ModelArgs { model: Some("torus".into()), ..ModelArgs::default() };
        assert_eq!(RunConfig::resolve(&file, &args).unwrap_err().exit_code(), 1);
        let args = ModelArgs { model: Some("dss".into()), m: Some(1.0), tol: Some(0.0), ..ModelArgs::default() };
        assert_eq!(RunConfig::resolve(&file, &args).unwrap_err().exit_code(), 1);
        let args = ModelArgs { model: Some("dss".into()), m: Some(1.0), interval: Some(vec![0.5, 2.0]), ..ModelArgs::default() };
        assert_eq!(RunConfig::resolve(&file, &args).unwrap_err().exit_code(), 5);
        assert!(toml::from_str::<FileConfig>("[model]\nkind = \"dss\"\nmass = 1\n").is_err());
    }

    #[test]
    fn default_window_is_finite() {
        let args = ModelArgs { model: Some("rn".into()), m: Some(2.0), q: Some(0.5), ..ModelArgs::default() };
        let cfg = RunConfig::resolve(&FileConfig::default(), &args).unwrap();
        let iv = cfg.interval().unwrap();
        assert!(iv.hi.is_finite() && iv.hi > iv.lo);
        let args = ModelArgs { model: Some("hyperboloid".into()), b: Some(1.0), ..ModelArgs::default() };
        let cfg = RunConfig::resolve(&FileConfig::default(), &args).unwrap();
        let iv = cfg.interval().unwrap();
        assert_eq!((iv.lo, iv.hi), (-5.0, 5.0));
    }
}
