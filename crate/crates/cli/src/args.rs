//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_cx, parse_times, BoundaryKind, Command, ConfigSources, Cx, FamilyKind, Overrides};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "nrt",
    version,
    about = "Exact solutions of the NRT nonlinear Schrödinger equation, with numerical cross-checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Free q-Gaussian packet: profiles, residual, ODE check, norms, peaks.
    EvolveFree(Common),
    /// Quasi-stationary packet in V = Kx²/2.
    EvolveHarmonic(Common),
    /// q-plane wave.
    PlaneWave {
        #[command(flatten)]
        common: Common,
        /// Measure w from ψ_t/ψ^q and compare it with ħk²/2m.
        #[arg(long)]
        check_dispersion: bool,
    },
    /// The q = 3 pulsating packet, with its period check.
    PulsatingQ3(Common),
    /// The time-independent solution (bx + ic)^{1/(2−q)}.
    Frozen(Common),
    /// The a = 0 packet with b = b_c real, whose norm decays.
    Singular(Common),
    /// Norm table over the requested times with log-log slopes.
    NormScan(Common),
    /// (L, F) pair relations, generalized plane waves and the uniqueness fit.
    GenfamilyCheck(Common),
    /// Method-of-lines evolution from the t = 0 slice against the analytic solution.
    PdeCrosscheck(Common),
    /// The q = 2 packet with α = β = γ = 1: one peak splitting into two.
    ReproduceFig1(Common),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,

    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Spring constant K of V(x) = Kx²/2.
    #[arg(long, allow_hyphen_values = true)]
    pub spring: Option<f64>,

    /// free, plane-wave, pulsating-q3, frozen, singular, harmonic or gaussian.
    #[arg(long)]
    pub family: Option<FamilyKind>,
    /// Complex values are written `re` or `re,im`.
    #[arg(long, value_parser = parse_cx, allow_hyphen_values = true)]
    pub alpha: Option<Cx>,
    #[arg(long, value_parser = parse_cx, allow_hyphen_values = true)]
    pub beta: Option<Cx>,
    #[arg(long, value_parser = parse_cx, allow_hyphen_values = true)]
    pub gamma: Option<Cx>,
    /// Plane-wave wavenumber.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, value_parser = parse_cx, allow_hyphen_values = true)]
    pub a_c: Option<Cx>,
    #[arg(long, value_parser = parse_cx, allow_hyphen_values = true)]
    pub b_c: Option<Cx>,
    #[arg(long = "c-1", value_parser = parse_cx, allow_hyphen_values = true)]
    pub c_1: Option<Cx>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    /// Mean wavenumber of the Gaussian packet.
    #[arg(long, allow_hyphen_values = true)]
    pub k0: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    /// Times as start:stop:count or t1,t2,...
    #[arg(long, value_parser = parse_time_list, allow_hyphen_values = true)]
    pub t: Option<TimeList>,

    /// Absolute quadrature tolerance.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub residual_tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pde_tol: Option<f64>,
    /// one-sided or pinned.
    #[arg(long, value_parser = parse_boundary)]
    pub boundary: Option<BoundaryKind>,
}

/// A parsed `--t` value; a newtype so clap treats it as a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeList(pub Vec<f64>);

fn parse_time_list(s: &str) -> Result<TimeList, String> {
    parse_times(s).map(TimeList)
}

fn parse_boundary(s: &str) -> Result<BoundaryKind, String> {
    match s {
        "one-sided" => Ok(BoundaryKind::OneSided),
        "pinned" => Ok(BoundaryKind::Pinned),
        _ => Err(format!("unknown boundary {s:?}; expected one-sided or pinned")),
    }
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            output_dir: self.output_dir.clone(),
            q: self.q,
            hbar: self.hbar,
            m: self.m,
            spring: self.spring,
            family: self.family,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            k: self.k,
            a_c: self.a_c,
            b_c: self.b_c,
            c_1: self.c_1,
            b: self.b,
            c: self.c,
            t0: self.t0,
            k0: self.k0,
            x_min: self.x_min,
            x_max: self.x_max,
            nx: self.nx,
            t: self.t.clone().map(|t| t.0),
            tol: self.tol,
            residual_tol: self.residual_tol,
            pde_tol: self.pde_tol,
            boundary: self.boundary,
        }
    }
}

impl Cli {
    /// The command and the configuration sources named by the flags. The
    /// environment is not consulted here.
    pub fn into_parts(self) -> Result<(Command, ConfigSources), CliError> {
        let (command, common) = match self.command {
            Sub::EvolveFree(c) => (Command::EvolveFree, c),
            Sub::EvolveHarmonic(c) => (Command::EvolveHarmonic, c),
            Sub::PlaneWave { common, check_dispersion } => (Command::PlaneWave { check_dispersion }, common),
            Sub::PulsatingQ3(c) => (Command::PulsatingQ3, c),
            Sub::Frozen(c) => (Command::Frozen, c),
            Sub::Singular(c) => (Command::Singular, c),
            Sub::NormScan(c) => (Command::NormScan, c),
            Sub::GenfamilyCheck(c) => (Command::GenfamilyCheck, c),
            Sub::PdeCrosscheck(c) => (Command::PdeCrosscheck, c),
            Sub::ReproduceFig1(c) => (Command::ReproduceFig1, c),
        };
        if let Some(path) = &common.config {
            if !path.is_file() {
                return Err(CliError::Config {
                    key: "config".into(),
                    message: format!("{} is not a readable file", path.display()),
                });
            }
        }
        let sources =
            ConfigSources { file: common.config.clone(), flags: common.overrides(), env_output_dir: None };
        Ok((command, sources))
    }
}
