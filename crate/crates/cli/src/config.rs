//! Run configuration: a TOML file merged with command-line flags, filled
//! with defaults and validated into a [`RunConfig`].
//!
//! ```toml
//! output_dir = "nrt-output/singular"
//! formats = ["dat", "gnuplot"]
//!
//! [model]
//! q = 2.0
//! hbar = 1.0
//! m = 1.0
//! spring = 1.0        # K of V(x) = Kx²/2, harmonic runs only
//!
//! [family]
//! kind = "singular"   # free | plane-wave | pulsating-q3 | frozen | singular | harmonic | gaussian
//! b_c = 1.0           # complex values: a number or [re, im]
//! t0 = 1.0
//!
//! [grid]
//! x_min = -10.0
//! x_max = 10.0
//! nx = 801
//! t = "0:9:10"        # start:stop:count, or an explicit list
//!
//! [tolerances]
//! quadrature = 1e-8
//! residual = 1e-8
//! pde = 1e-3
//!
//! [pde]
//! boundary = "one-sided"   # or "pinned"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use nrt_core::solutions::{ModelParams, PacketConstants, SolutionFamily};
use nrt_core::NrtError;

use crate::CliError;

/// A complex number written as `[re, im]`; a bare number is read as real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "CxRepr", into = "[f64; 2]")]
pub struct Cx(pub f64, pub f64);

#[derive(Deserialize)]
#[serde(untagged)]
enum CxRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<CxRepr> for Cx {
    fn from(r: CxRepr) -> Self {
        match r {
            CxRepr::Real(v) => Cx(v, 0.0),
            CxRepr::Pair([a, b]) => Cx(a, b),
        }
    }
}

impl From<Cx> for [f64; 2] {
    fn from(c: Cx) -> Self {
        [c.0, c.1]
    }
}

impl From<Cx> for Complex64 {
    fn from(c: Cx) -> Self {
        Complex64::new(c.0, c.1)
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 == 0.0 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{}{:+}i", self.0, self.1)
        }
    }
}

/// Parses `re` or `re,im`.
pub fn parse_cx(s: &str) -> Result<Cx, String> {
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    match s.split_once(',') {
        Some((a, b)) => Ok(Cx(num(a)?, num(b)?)),
        None => Ok(Cx(num(s)?, 0.0)),
    }
}

/// Parses `start:stop:count` (inclusive, evenly spaced) or `t1,t2,...`.
pub fn parse_times(s: &str) -> Result<Vec<f64>, String> {
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad time {p:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let (a, b) = (num(start)?, num(stop)?);
            let n: usize = count.trim().parse().map_err(|e| format!("bad count {count:?}: {e}"))?;
            match n {
                0 => Err("time range needs a count ≥ 1".into()),
                1 => Ok(vec![a]),
                _ => Ok((0..n)
                    .map(|j| if j + 1 == n { b } else { a + (b - a) * j as f64 / (n - 1) as f64 })
                    .collect()),
            }
        }
        [_] => s.split(',').map(num).collect(),
        _ => Err(format!("time value {s:?} is neither start:stop:count nor a list")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Free,
    PlaneWave,
    PulsatingQ3,
    Frozen,
    Singular,
    Harmonic,
    Gaussian,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        Self::Free,
        Self::PlaneWave,
        Self::PulsatingQ3,
        Self::Frozen,
        Self::Singular,
        Self::Harmonic,
        Self::Gaussian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Free => "free",
            Self::PlaneWave => "plane-wave",
            Self::PulsatingQ3 => "pulsating-q3",
            Self::Frozen => "frozen",
            Self::Singular => "singular",
            Self::Harmonic => "harmonic",
            Self::Gaussian => "gaussian",
        }
    }

    fn default_q(self) -> f64 {
        match self {
            Self::Gaussian => 1.0,
            Self::PulsatingQ3 | Self::Frozen => 3.0,
            _ => 2.0,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|k| k.as_str()).collect();
            format!("unknown family {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// Fully specified family parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyConfig {
    Free { alpha: Cx, beta: Cx, gamma: Cx },
    PlaneWave { k: f64 },
    PulsatingQ3 { a_c: Cx, b_c: Cx, c_1: Cx },
    Frozen { b: f64, c: f64 },
    Singular { b_c: f64, t0: f64 },
    Harmonic,
    Gaussian { k0: f64, alpha: f64 },
}

impl FamilyConfig {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Self::Free { .. } => FamilyKind::Free,
            Self::PlaneWave { .. } => FamilyKind::PlaneWave,
            Self::PulsatingQ3 { .. } => FamilyKind::PulsatingQ3,
            Self::Frozen { .. } => FamilyKind::Frozen,
            Self::Singular { .. } => FamilyKind::Singular,
            Self::Harmonic => FamilyKind::Harmonic,
            Self::Gaussian { .. } => FamilyKind::Gaussian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub q: f64,
    pub hbar: f64,
    pub m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spring: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance of norm quadratures.
    pub quadrature: f64,
    /// Bound on the analytic equation residual.
    pub residual: f64,
    /// Bound on the relative L2 error of PDE cross-checks.
    pub pde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    OneSided,
    Pinned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdeConfig {
    pub boundary: BoundaryKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// One profile file per time.
    Dat,
    /// A gnuplot script plotting the profiles.
    Gnuplot,
}

/// A validated run configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    pub model: ModelConfig,
    pub family: FamilyConfig,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub pde: PdeConfig,
}

impl RunConfig {
    pub fn params(&self) -> ModelParams {
        ModelParams { q: self.model.q, hbar: self.model.hbar, m: self.model.m, k: self.model.spring }
    }

    /// The solution family, with `q` replaced by the family's own `q` where
    /// it solves a different equation.
    pub fn solution_family(&self) -> Result<SolutionFamily, NrtError> {
        let params = self.params();
        Ok(match self.family {
            FamilyConfig::Free { alpha, beta, gamma } => SolutionFamily::FreeQGaussian {
                constants: PacketConstants { alpha: alpha.into(), beta: beta.into(), gamma: gamma.into() },
            },
            FamilyConfig::PlaneWave { k } => SolutionFamily::plane_wave(k, &params),
            FamilyConfig::PulsatingQ3 { a_c, b_c, c_1 } => {
                SolutionFamily::PulsatingQ3 { a_c: a_c.into(), b_c: b_c.into(), c_1: c_1.into() }
            }
            FamilyConfig::Frozen { b, c } => SolutionFamily::Frozen { b, c },
            FamilyConfig::Singular { b_c, t0 } => SolutionFamily::SingularPacket { b_c, t0 },
            FamilyConfig::Harmonic => SolutionFamily::harmonic(&params)?,
            FamilyConfig::Gaussian { k0, alpha } => SolutionFamily::GaussianLimit { k0, alpha },
        })
    }

    /// The configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration serializes")
    }
}

/// The subcommands, with the flags that only one of them takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    EvolveFree,
    EvolveHarmonic,
    PlaneWave { check_dispersion: bool },
    PulsatingQ3,
    Frozen,
    Singular,
    NormScan,
    GenfamilyCheck,
    PdeCrosscheck,
    ReproduceFig1,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::EvolveFree => "evolve-free",
            Self::EvolveHarmonic => "evolve-harmonic",
            Self::PlaneWave { .. } => "plane-wave",
            Self::PulsatingQ3 => "pulsating-q3",
            Self::Frozen => "frozen",
            Self::Singular => "singular",
            Self::NormScan => "norm-scan",
            Self::GenfamilyCheck => "genfamily-check",
            Self::PdeCrosscheck => "pde-crosscheck",
            Self::ReproduceFig1 => "reproduce-fig1",
        }
    }

    /// The family a subcommand is tied to; `None` if any family is accepted.
    pub fn fixed_family(&self) -> Option<FamilyKind> {
        match self {
            Self::EvolveFree | Self::ReproduceFig1 => Some(FamilyKind::Free),
            Self::EvolveHarmonic => Some(FamilyKind::Harmonic),
            Self::PlaneWave { .. } | Self::GenfamilyCheck => Some(FamilyKind::PlaneWave),
            Self::PulsatingQ3 => Some(FamilyKind::PulsatingQ3),
            Self::Frozen => Some(FamilyKind::Frozen),
            Self::Singular => Some(FamilyKind::Singular),
            Self::NormScan | Self::PdeCrosscheck => None,
        }
    }

    fn default_family(&self) -> FamilyKind {
        match self {
            Self::NormScan => FamilyKind::Singular,
            Self::PdeCrosscheck => FamilyKind::Free,
            _ => self.fixed_family().expect("fixed family"),
        }
    }

    fn default_grid(&self, family: FamilyKind) -> (f64, f64, usize, Vec<f64>) {
        let range = |a: f64, b: f64, n: usize| parse_times(&format!("{a}:{b}:{n}")).expect("valid range");
        match self {
            Self::PdeCrosscheck => (-15.0, 15.0, 601, vec![0.1]),
            Self::EvolveFree | Self::ReproduceFig1 => (-10.0, 10.0, 801, range(0.0, 2.0, 9)),
            Self::EvolveHarmonic => (-5.0, 5.0, 801, range(0.0, 2.0, 5)),
            Self::PulsatingQ3 => (-10.0, 10.0, 801, range(0.0, 3.0, 7)),
            Self::Singular | Self::NormScan if family == FamilyKind::Singular => {
                (-10.0, 10.0, 801, range(0.0, 9.0, 10))
            }
            _ => (-10.0, 10.0, 801, range(0.0, 1.0, 3)),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    output_dir: Option<PathBuf>,
    formats: Option<Vec<Format>>,
    #[serde(default)]
    model: RawModel,
    #[serde(default)]
    family: RawFamily,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    tolerances: RawTolerances,
    #[serde(default)]
    pde: RawPde,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    q: Option<f64>,
    hbar: Option<f64>,
    m: Option<f64>,
    spring: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    kind: Option<FamilyKind>,
    alpha: Option<Cx>,
    beta: Option<Cx>,
    gamma: Option<Cx>,
    k: Option<f64>,
    a_c: Option<Cx>,
    b_c: Option<Cx>,
    c_1: Option<Cx>,
    b: Option<f64>,
    c: Option<f64>,
    t0: Option<f64>,
    k0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum RawTimes {
    List(Vec<f64>),
    Range(String),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_min: Option<f64>,
    x_max: Option<f64>,
    nx: Option<i64>,
    t: Option<RawTimes>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    quadrature: Option<f64>,
    residual: Option<f64>,
    pde: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPde {
    boundary: Option<BoundaryKind>,
}

/// Values given on the command line; each overrides the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub q: Option<f64>,
    pub hbar: Option<f64>,
    pub m: Option<f64>,
    pub spring: Option<f64>,
    pub family: Option<FamilyKind>,
    pub alpha: Option<Cx>,
    pub beta: Option<Cx>,
    pub gamma: Option<Cx>,
    pub k: Option<f64>,
    pub a_c: Option<Cx>,
    pub b_c: Option<Cx>,
    pub c_1: Option<Cx>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub t0: Option<f64>,
    pub k0: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub nx: Option<usize>,
    pub t: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub residual_tol: Option<f64>,
    pub pde_tol: Option<f64>,
    pub boundary: Option<BoundaryKind>,
}

/// Where a configuration comes from. Precedence, lowest first: built-in
/// defaults, the file, `NRT_OUTPUT_DIR` (output directory only), flags.
#[derive(Debug, Clone, Default)]
pub struct ConfigSources {
    pub file: Option<PathBuf>,
    pub flags: Overrides,
    pub env_output_dir: Option<PathBuf>,
}

fn config_err(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config { key: key.to_string(), message: message.into() }
}

fn read_file(path: &Path) -> Result<RawConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err("config", format!("cannot read {}: {e}", path.display())))?;
    parse_raw(&text)
}

fn parse_raw(text: &str) -> Result<RawConfig, CliError> {
    toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        // the toml error names unknown keys and type mismatches in its message
        config_err("config", message)
    })
}

/// Reads, merges, fills and validates a configuration for `command`.
pub fn parse_config(command: Command, sources: &ConfigSources) -> Result<RunConfig, CliError> {
    let raw = match &sources.file {
        Some(path) => read_file(path)?,
        None => RawConfig::default(),
    };
    build(command, raw, sources)
}

/// Like [`parse_config`] with the file contents given as a string.
pub fn parse_config_str(
    command: Command,
    text: &str,
    sources: &ConfigSources,
) -> Result<RunConfig, CliError> {
    build(command, parse_raw(text)?, sources)
}

fn real_part(key: &str, v: Cx) -> Result<f64, CliError> {
    if v.1 != 0.0 {
        return Err(config_err(key, format!("must be real, got {v}")));
    }
    Ok(v.0)
}

fn build(command: Command, raw: RawConfig, sources: &ConfigSources) -> Result<RunConfig, CliError> {
    let o = &sources.flags;
    let rf = &raw.family;

    let kind = o.family.or(rf.kind).unwrap_or_else(|| command.default_family());
    if let Some(fixed) = command.fixed_family() {
        if kind != fixed {
            return Err(config_err(
                "family.kind",
                format!("`{command}` runs the {fixed} family, got {kind}"),
            ));
        }
    }

    let cx = |flag: Option<Cx>, file: Option<Cx>, default: Cx| flag.or(file).unwrap_or(default);
    let real = |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
    let one = Cx(1.0, 0.0);
    let family = match kind {
        FamilyKind::Free => FamilyConfig::Free {
            alpha: cx(o.alpha, rf.alpha, one),
            beta: cx(o.beta, rf.beta, one),
            gamma: cx(o.gamma, rf.gamma, one),
        },
        FamilyKind::PlaneWave => FamilyConfig::PlaneWave { k: real(o.k, rf.k, 1.0) },
        FamilyKind::PulsatingQ3 => FamilyConfig::PulsatingQ3 {
            a_c: cx(o.a_c, rf.a_c, one),
            b_c: cx(o.b_c, rf.b_c, Cx(0.0, 2.0)),
            c_1: cx(o.c_1, rf.c_1, Cx(0.5, 0.0)),
        },
        FamilyKind::Frozen => FamilyConfig::Frozen { b: real(o.b, rf.b, 1.0), c: real(o.c, rf.c, 1.0) },
        FamilyKind::Singular => FamilyConfig::Singular {
            b_c: real_part("family.b_c", cx(o.b_c, rf.b_c, one))?,
            t0: real(o.t0, rf.t0, 1.0),
        },
        FamilyKind::Harmonic => FamilyConfig::Harmonic,
        FamilyKind::Gaussian => FamilyConfig::Gaussian {
            k0: real(o.k0, rf.k0, 0.5),
            alpha: real_part("family.alpha", cx(o.alpha, rf.alpha, one))?,
        },
    };

    let spring = o.spring.or(raw.model.spring).or((kind == FamilyKind::Harmonic).then_some(1.0));
    let model = ModelConfig {
        q: real(o.q, raw.model.q, kind.default_q()),
        hbar: real(o.hbar, raw.model.hbar, 1.0),
        m: real(o.m, raw.model.m, 1.0),
        spring,
    };

    let (dx_min, dx_max, dnx, dt) = command.default_grid(kind);
    let nx = match (o.nx, raw.grid.nx) {
        (Some(n), _) => n,
        (None, Some(n)) => {
            usize::try_from(n).map_err(|_| config_err("grid.nx", format!("must be ≥ 5, got {n}")))?
        }
        (None, None) => dnx,
    };
    let t = match (&o.t, &raw.grid.t) {
        (Some(t), _) => t.clone(),
        (None, Some(RawTimes::List(t))) => t.clone(),
        (None, Some(RawTimes::Range(s))) => parse_times(s).map_err(|e| config_err("grid.t", e))?,
        (None, None) => dt,
    };
    let grid = GridConfig {
        x_min: real(o.x_min, raw.grid.x_min, dx_min),
        x_max: real(o.x_max, raw.grid.x_max, dx_max),
        nx,
        t,
    };

    let tolerances = Tolerances {
        quadrature: real(o.tol, raw.tolerances.quadrature, 1e-8),
        residual: real(o.residual_tol, raw.tolerances.residual, 1e-8),
        pde: real(o.pde_tol, raw.tolerances.pde, 1e-3),
    };
    let pde = PdeConfig { boundary: o.boundary.or(raw.pde.boundary).unwrap_or(BoundaryKind::OneSided) };

    let output_dir = o
        .output_dir
        .clone()
        .or_else(|| sources.env_output_dir.clone())
        .or(raw.output_dir)
        .unwrap_or_else(|| PathBuf::from("nrt-output").join(command.name()));
    let formats = raw.formats.unwrap_or_else(|| vec![Format::Dat, Format::Gnuplot]);

    let cfg = RunConfig { output_dir, formats, model, family, grid, tolerances, pde };
    validate(command, &cfg)?;
    Ok(cfg)
}

fn finite(key: &str, v: f64) -> Result<(), CliError> {
    if !v.is_finite() {
        return Err(config_err(key, format!("must be finite, got {v}")));
    }
    Ok(())
}

fn positive(key: &str, v: f64) -> Result<(), CliError> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(config_err(key, format!("must be > 0, got {v}")));
    }
    Ok(())
}

/// Checks every invariant of a filled configuration.
pub fn validate(command: Command, cfg: &RunConfig) -> Result<(), CliError> {
    let ModelConfig { q, hbar, m, spring } = cfg.model;
    finite("model.q", q)?;
    positive("model.hbar", hbar)?;
    positive("model.m", m)?;
    if let Some(k) = spring {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(config_err("model.spring", format!("must be ≥ 0, got {k}")));
        }
    }

    let g = &cfg.grid;
    finite("grid.x_min", g.x_min)?;
    finite("grid.x_max", g.x_max)?;
    if !(g.x_max > g.x_min) {
        return Err(config_err("grid.x_max", format!("must exceed grid.x_min = {}", g.x_min)));
    }
    let min_nx = if command == Command::PdeCrosscheck { 6 } else { 5 };
    if g.nx < min_nx {
        return Err(config_err("grid.nx", format!("must be ≥ {min_nx}, got {}", g.nx)));
    }
    if g.t.is_empty() {
        return Err(config_err("grid.t", "needs at least one time"));
    }
    for &t in &g.t {
        finite("grid.t", t)?;
    }
    if command == Command::PdeCrosscheck {
        if g.t.iter().any(|&t| !(t > 0.0)) {
            return Err(config_err(
                "grid.t",
                "PDE cross-checks evolve forward from t = 0; times must be > 0",
            ));
        }
        if g.t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(config_err("grid.t", "PDE cross-check times must be strictly increasing"));
        }
    }

    positive("tolerances.quadrature", cfg.tolerances.quadrature)?;
    positive("tolerances.residual", cfg.tolerances.residual)?;
    positive("tolerances.pde", cfg.tolerances.pde)?;
    if cfg.formats.is_empty() {
        return Err(config_err("formats", "needs at least one format"));
    }

    validate_family(cfg)
}

fn validate_family(cfg: &RunConfig) -> Result<(), CliError> {
    let q = cfg.model.q;
    let near = |target: f64| (q - target).abs() < nrt_core::qcalc::Q_ONE_EPS;
    match cfg.family {
        FamilyConfig::Free { alpha, beta, gamma } => {
            for (key, v) in [("family.alpha", alpha), ("family.beta", beta), ("family.gamma", gamma)] {
                finite(key, v.0)?;
                finite(key, v.1)?;
            }
            if near(3.0) {
                return Err(config_err(
                    "model.q",
                    "the free q-Gaussian family has no generic solution at q = 3; use the `pulsating-q3` subcommand",
                ));
            }
        }
        FamilyConfig::PlaneWave { k } => finite("family.k", k)?,
        FamilyConfig::PulsatingQ3 { a_c, b_c, c_1 } => {
            for (key, v) in [("family.a_c", a_c), ("family.b_c", b_c), ("family.c_1", c_1)] {
                finite(key, v.0)?;
                finite(key, v.1)?;
            }
            if !near(3.0) {
                return Err(config_err("model.q", format!("the pulsating family needs q = 3, got {q}")));
            }
        }
        FamilyConfig::Frozen { b, c } => {
            finite("family.b", b)?;
            finite("family.c", c)?;
        }
        FamilyConfig::Singular { b_c, t0 } => {
            finite("family.b_c", b_c)?;
            finite("family.t0", t0)?;
        }
        FamilyConfig::Harmonic => {
            if !cfg.model.spring.is_some_and(|k| k > 0.0) {
                return Err(config_err("model.spring", "the harmonic family needs a spring constant > 0"));
            }
        }
        FamilyConfig::Gaussian { k0, alpha } => {
            finite("family.k0", k0)?;
            positive("family.alpha", alpha)?;
            if !near(1.0) {
                return Err(config_err(
                    "model.q",
                    format!("the gaussian family solves the linear equation; set q = 1, got {q}"),
                ));
            }
        }
    }
    let family = cfg.solution_family().map_err(|e| config_err("family", e.to_string()))?;
    family.validate(&cfg.params()).map_err(|e| config_err(family_key(&e), e.to_string()))
}

fn family_key(e: &NrtError) -> &'static str {
    match e {
        NrtError::InvalidParams(_) | NrtError::Domain(_) => "model.q",
        _ => "family",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_specs() {
        assert_eq!(parse_times("0:9:10").unwrap(), (0..10).map(f64::from).collect::<Vec<_>>());
        assert_eq!(parse_times("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_times("0, 1,2.5").unwrap(), vec![0.0, 1.0, 2.5]);
        assert_eq!(parse_times("3:4:1").unwrap(), vec![3.0]);
        assert!(parse_times("0:1:0").is_err());
        assert!(parse_times("0:1").is_err());
        assert!(parse_times("a,b").is_err());
    }

    #[test]
    fn complex_specs() {
        assert_eq!(parse_cx("1.5").unwrap(), Cx(1.5, 0.0));
        assert_eq!(parse_cx("0,-2").unwrap(), Cx(0.0, -2.0));
        assert!(parse_cx("1,2,3").is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.as_str().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("gauss".parse::<FamilyKind>().is_err());
    }
}
