//! What each subcommand computes, checks and reports.

use num_complex::Complex64;

use nrt_core::dynamics::{
    evolve_pde, integrate_coeffs, nrt_residual, relative_l2, Boundary, FieldState, PdeOptions,
};
use nrt_core::genfamily::{
    general_plane_wave, generalized_residual, nrt_pair, plane_wave_residual, sinh_pair, uniqueness_residual,
    verify_pair_relation,
};
use nrt_core::observables::{
    abs2_profile, find_peaks, harmonic_norm_rate, norm, norm_closed_form_singular, normalizable,
    uniform_grid, GridProfile, PeakSet,
};
use nrt_core::qcalc::{self, is_q_one};
use nrt_core::solutions::{ModelParams, SolutionFamily};
use nrt_core::NrtError;

use crate::config::{BoundaryKind, Command, FamilyConfig, Format, RunConfig};
use crate::output::{
    consistency_gap, format_profile, gnuplot_script, profile_file_name, sci, Report, CONSISTENCY_TOL,
};
use crate::CliError;

/// Tolerance of the coefficient ODE integrations used as cross-checks.
pub const ODE_TOL: f64 = 1e-10;
/// Largest accepted gap between closed-form and integrated coefficients.
pub const ODE_AGREEMENT: f64 = 1e-8;
/// Relative agreement required between quadrature and closed-form norms.
pub const NORM_AGREEMENT: f64 = 1e-6;
/// Allowed deviation of a fitted log-log slope from the scaling exponent.
pub const SLOPE_AGREEMENT: f64 = 1e-3;
/// `|ψ(t)|²` against `|ψ(t + T)|²` for the pulsating family.
pub const PERIOD_AGREEMENT: f64 = 1e-10;
/// Bound on pair relations and generalized plane-wave residuals.
pub const PAIR_AGREEMENT: f64 = 1e-6;
/// A 1% error in `w` must raise the generalized residual above this.
pub const DETUNED_FLOOR: f64 = 1e-3;
/// Bounds on the uniqueness fit: exact for NRT pairs, visibly off for sinh.
pub const UNIQUENESS_EXACT: f64 = 1e-8;
pub const UNIQUENESS_GAP: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// One row of a norm table.
#[derive(Debug, Clone, PartialEq)]
pub struct NormRow {
    pub t: f64,
    pub value: Option<f64>,
    pub abs_error: f64,
    pub converged: bool,
    pub closed_form: Option<f64>,
    pub note: String,
}

/// Everything a run produced, before it is written to disk.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: Command,
    pub profiles: Vec<GridProfile>,
    pub peaks: Vec<PeakSet>,
    pub norms: Vec<NormRow>,
    pub checks: Vec<Check>,
    pub report: String,
    /// `(file name, contents)`, report included.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn numerical(check: &str, e: NrtError) -> CliError {
    CliError::Numerical { check: check.to_string(), message: e.to_string() }
}

struct Run<'a> {
    cfg: &'a RunConfig,
    params: ModelParams,
    family: SolutionFamily,
    report: Report,
    checks: Vec<Check>,
    profiles: Vec<GridProfile>,
    peaks: Vec<PeakSet>,
    norms: Vec<NormRow>,
    files: Vec<(String, String)>,
}

impl<'a> Run<'a> {
    fn new(command: Command, cfg: &'a RunConfig) -> Result<Self, CliError> {
        let family = cfg.solution_family().map_err(|e| numerical("family", e))?;
        let params = ModelParams { q: family.effective_q(&cfg.params()), ..cfg.params() };
        let mut report = Report::default();
        report.section("run");
        report.line(format!("command = {}", command.name()));
        report.line(format!("family = {}", family.name()));
        report.line(format!("q = {}, hbar = {}, m = {}", params.q, params.hbar, params.m));
        if let Some(k) = params.k {
            report.line(format!("spring K = {k}"));
        }
        report.line(format!("parameters = {}", describe_family(&cfg.family)));
        let g = &cfg.grid;
        report.line(format!("grid = [{}, {}] with {} nodes", g.x_min, g.x_max, g.nx));
        report.line(format!("times = {}", g.t.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")));
        Ok(Self {
            cfg,
            params,
            family,
            report,
            checks: Vec::new(),
            profiles: Vec::new(),
            peaks: Vec::new(),
            norms: Vec::new(),
            files: Vec::new(),
        })
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    fn grid(&self) -> Vec<f64> {
        uniform_grid(self.cfg.grid.x_min, self.cfg.grid.x_max, self.cfg.grid.nx)
    }

    /// Profiles of the analytic family at every requested time.
    fn family_profiles(&mut self) -> Result<(), CliError> {
        let grid = self.grid();
        for &t in &self.cfg.grid.t {
            let p = abs2_profile(&self.family, &self.params, t, &grid)
                .map_err(|e| numerical(&format!("profile at t = {t}"), e))?;
            self.profiles.push(p);
        }
        Ok(())
    }

    fn emit_profiles(&mut self, title: &str) {
        let worst = self.profiles.iter().map(consistency_gap).fold(0.0, f64::max);
        self.check(
            "profile-consistency",
            worst <= CONSISTENCY_TOL,
            format!("max relative |abs2 − (re² + im²)| = {worst:.3e}"),
        );
        let mut listed = Vec::new();
        if self.cfg.formats.contains(&Format::Dat) {
            for (i, p) in self.profiles.iter().enumerate() {
                let name = profile_file_name(i);
                self.files.push((name.clone(), format_profile(p)));
                listed.push((name, p.t));
            }
        }
        if self.cfg.formats.contains(&Format::Gnuplot) && !listed.is_empty() {
            self.files.push(("plot.gp".into(), gnuplot_script(title, &listed)));
        }
    }

    fn residuals(&mut self) -> Result<(), CliError> {
        let grid = self.grid();
        let potential = self.family.potential(&self.params);
        let mut rows = Vec::new();
        let mut worst = 0.0f64;
        for &t in &self.cfg.grid.t {
            let mut max = 0.0f64;
            for &x in &grid {
                let r = nrt_residual(&self.family, &self.params, potential, x, t)
                    .map_err(|e| numerical(&format!("residual at x = {x}, t = {t}"), e))?;
                max = max.max(r);
            }
            worst = worst.max(max);
            rows.push(vec![t.to_string(), sci(max)]);
        }
        self.report.section("residual");
        self.report.line("max over the grid of |LHS − RHS| with analytic derivatives");
        self.report.table(&["t", "max_residual"], &rows);
        let tol = self.cfg.tolerances.residual;
        self.check("residual", worst < tol, format!("max residual {worst:.3e} (bound {tol:e})"));
        Ok(())
    }

    fn ode_crosscheck(&mut self) -> Result<(), CliError> {
        let Some(start) = self.family.coefficients(0.0, &self.params).map_err(|e| numerical("ode", e))?
        else {
            return Ok(());
        };
        let potential = self.family.potential(&self.params);
        let mut rows = Vec::new();
        let mut worst = 0.0f64;
        for &t in &self.cfg.grid.t {
            let traj = integrate_coeffs(&start, t, &self.params, potential, ODE_TOL)
                .map_err(|e| numerical(&format!("coefficient ODE to t = {t}"), e))?;
            let end = traj.last();
            let exact = self
                .family
                .coefficients(t, &self.params)
                .map_err(|e| numerical("ode", e))?
                .expect("coefficient family");
            let gap = [(end.a, exact.a), (end.b, exact.b), (end.c, exact.c)]
                .iter()
                .map(|(u, v)| (u - v).norm() / v.norm().max(1.0))
                .fold(0.0, f64::max);
            worst = worst.max(gap);
            rows.push(vec![t.to_string(), sci(gap), traj.steps.to_string()]);
        }
        self.report.section("coefficient ODE");
        self.report
            .line(format!("adaptive integration from t = 0 at tol {ODE_TOL:e} against the closed form"));
        self.report.table(&["t", "max_gap", "steps"], &rows);
        self.check("ode", worst <= ODE_AGREEMENT, format!("max gap {worst:.3e} (bound {ODE_AGREEMENT:e})"));
        Ok(())
    }

    fn norm_rows(&mut self) {
        let tol = self.cfg.tolerances.quadrature;
        for &t in &self.cfg.grid.t {
            let verdict = normalizable(&self.family, &self.params, t);
            let closed_form = match self.cfg.family {
                FamilyConfig::Singular { b_c, t0 } => {
                    norm_closed_form_singular(b_c, t0, t, &self.params).ok()
                }
                _ => None,
            };
            let row = if verdict.normalizable {
                match norm(&self.family, &self.params, t, tol) {
                    Ok(r) => NormRow {
                        t,
                        value: Some(r.value),
                        abs_error: r.abs_error_estimate,
                        converged: r.converged,
                        closed_form,
                        note: verdict.reason,
                    },
                    Err(e) => NormRow {
                        t,
                        value: None,
                        abs_error: f64::NAN,
                        converged: false,
                        closed_form,
                        note: e.to_string(),
                    },
                }
            } else {
                NormRow {
                    t,
                    value: None,
                    abs_error: f64::NAN,
                    converged: true,
                    closed_form,
                    note: verdict.reason,
                }
            };
            self.norms.push(row);
        }
    }

    fn norms(&mut self, with_rate: bool) {
        self.norm_rows();
        let harmonic_rate = with_rate && self.params.q > 1.0 && self.params.q < 3.0;
        let tol = self.cfg.tolerances.quadrature;
        let mut rows = Vec::new();
        for row in &self.norms {
            let mut cells = vec![
                row.t.to_string(),
                row.value.map_or("-".into(), sci),
                if row.value.is_some() { format!("{:.2e}", row.abs_error) } else { "-".into() },
            ];
            if let Some(c) = row.closed_form {
                cells.push(sci(c));
            } else if matches!(self.cfg.family, FamilyConfig::Singular { .. }) {
                cells.push("-".into());
            }
            if harmonic_rate {
                cells.push(match harmonic_norm_rate(&self.params, row.t, tol) {
                    Ok(r) => sci(r.value),
                    Err(_) => "-".into(),
                });
            }
            cells.push(row.note.clone());
            rows.push(cells);
        }
        let mut header = vec!["t", "norm", "abs_err"];
        if matches!(self.cfg.family, FamilyConfig::Singular { .. }) {
            header.push("closed_form");
        }
        if harmonic_rate {
            header.push("dN/dt");
        }
        header.push("classifier");
        self.report.section("norm");
        self.report.table(&header, &rows);
        let bad: Vec<String> = self.norms.iter().filter(|r| !r.converged).map(|r| r.t.to_string()).collect();
        self.check(
            "norm",
            bad.is_empty(),
            if bad.is_empty() {
                "every normalizable slice converged".to_string()
            } else {
                format!("quadrature failed at t = {}", bad.join(", "))
            },
        );
        self.closed_form_agreement();
    }

    fn closed_form_agreement(&mut self) {
        let pairs: Vec<(f64, f64, f64)> =
            self.norms.iter().filter_map(|r| Some((r.t, r.value?, r.closed_form?))).collect();
        if pairs.is_empty() {
            return;
        }
        let worst = pairs.iter().map(|(_, n, c)| ((n - c) / c).abs()).fold(0.0, f64::max);
        self.check(
            "norm-closed-form",
            worst <= NORM_AGREEMENT,
            format!("max relative gap {worst:.3e} over {} times (bound {NORM_AGREEMENT:e})", pairs.len()),
        );
    }

    fn peaks(&mut self) {
        let mut rows = Vec::new();
        for p in &self.profiles {
            let set = find_peaks(p);
            let positions: Vec<String> = set.peaks.iter().map(|pk| format!("{:.6}", pk.x)).collect();
            rows.push(vec![
                p.t.to_string(),
                set.len().to_string(),
                if positions.is_empty() { "-".into() } else { positions.join(",") },
                set.separation().map_or("-".into(), |s| format!("{s:.6}")),
            ]);
            self.peaks.push(set);
        }
        self.report.section("peaks");
        self.report.table(&["t", "count", "positions", "separation"], &rows);
    }

    fn finish(mut self, command: Command) -> Outcome {
        self.report.section("checks");
        for c in &self.checks {
            self.report.line(format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        let report = self.report.into_string();
        self.files.push(("report.txt".into(), report.clone()));
        Outcome {
            command,
            profiles: self.profiles,
            peaks: self.peaks,
            norms: self.norms,
            checks: self.checks,
            report,
            files: self.files,
        }
    }
}

fn describe_family(f: &FamilyConfig) -> String {
    match *f {
        FamilyConfig::Free { alpha, beta, gamma } => {
            format!("alpha = {alpha}, beta = {beta}, gamma = {gamma}")
        }
        FamilyConfig::PlaneWave { k } => format!("k = {k}"),
        FamilyConfig::PulsatingQ3 { a_c, b_c, c_1 } => format!("a_c = {a_c}, b_c = {b_c}, c_1 = {c_1}"),
        FamilyConfig::Frozen { b, c } => format!("b = {b}, c = {c}"),
        FamilyConfig::Singular { b_c, t0 } => format!("b_c = {b_c}, t0 = {t0}"),
        FamilyConfig::Harmonic => "a_c at the fixed point".into(),
        FamilyConfig::Gaussian { k0, alpha } => format!("k0 = {k0}, alpha = {alpha}"),
    }
}

/// First time from which every profile has two peaks moving apart, provided
/// the first profile has exactly one.
pub fn split_time(ts: &[f64], peaks: &[PeakSet]) -> Option<f64> {
    if peaks.first()?.len() != 1 {
        return None;
    }
    let mut start = peaks.len();
    while start > 0 && peaks[start - 1].len() == 2 {
        start -= 1;
    }
    if start == peaks.len() {
        return None;
    }
    let seps: Vec<f64> = peaks[start..].iter().filter_map(PeakSet::separation).collect();
    seps.windows(2).all(|w| w[1] > w[0]).then_some(ts[start])
}

/// Computes a run without touching the filesystem.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::GenfamilyCheck => return genfamily_check(command, cfg),
        Command::PdeCrosscheck => return pde_crosscheck(command, cfg),
        _ => {}
    }
    let mut run = Run::new(command, cfg)?;
    run.family_profiles()?;
    match command {
        Command::NormScan => {
            run.norms(false);
            norm_slopes(&mut run);
        }
        _ => {
            run.residuals()?;
            run.ode_crosscheck()?;
            run.norms(command == Command::EvolveHarmonic);
            run.peaks();
        }
    }
    match command {
        Command::ReproduceFig1 => {
            let t_star = split_time(&cfg.grid.t, &run.peaks);
            let t_end = cfg.grid.t.last().copied().unwrap_or(0.0);
            let ok = t_star.is_some_and(|s| s > cfg.grid.t[0] && s < t_end.max(cfg.grid.t[0]) + f64::EPSILON);
            run.check(
                "peak-split",
                ok,
                match t_star {
                    Some(s) => {
                        format!("one peak at t = {}, two separating peaks from t = {s}", cfg.grid.t[0])
                    }
                    None => "no transition from one peak to two separating peaks".into(),
                },
            );
        }
        Command::PlaneWave { check_dispersion: true } => dispersion(&mut run)?,
        Command::PulsatingQ3 => pulsation(&mut run)?,
        _ => {}
    }
    let title = format!("{} |psi|^2", run.family.name());
    run.emit_profiles(&title);
    Ok(run.finish(command))
}

fn norm_slopes(run: &mut Run<'_>) {
    let t0 = match run.cfg.family {
        FamilyConfig::Singular { t0, .. } => t0,
        _ => 0.0,
    };
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for row in &run.norms {
        let s = row.t + t0;
        let point = row.value.filter(|&n| n > 0.0 && s > 0.0).map(|n| (s.ln(), n.ln()));
        let slope = match (prev, point) {
            (Some((x0, y0)), Some((x1, y1))) if x1 != x0 => Some((y1 - y0) / (x1 - x0)),
            _ => None,
        };
        if let Some(v) = slope {
            slopes.push(v);
        }
        prev = point;
        rows.push(vec![
            row.t.to_string(),
            row.value.map_or("-".into(), sci),
            row.closed_form.map_or("-".into(), sci),
            slope.map_or("-".into(), |v| format!("{v:.6}")),
        ]);
    }
    run.report.section("norm scan");
    run.report.line(format!("slope = d log N / d log(t + t0), t0 = {t0}"));
    run.report.table(&["t", "norm", "closed_form", "slope"], &rows);
    let q = run.params.q;
    if let FamilyConfig::Singular { .. } = run.cfg.family {
        if q > 1.0 && q < 3.0 {
            let expected = 1.0 + 2.0 / (1.0 - q);
            let worst = slopes.iter().map(|s| (s - expected).abs()).fold(0.0, f64::max);
            run.report.line(format!("expected slope 1 + 2/(1 − q) = {expected:.6}"));
            run.check(
                "norm-slope",
                !slopes.is_empty() && worst <= SLOPE_AGREEMENT,
                format!("{} slopes, max deviation {worst:.3e} from {expected}", slopes.len()),
            );
        }
    }
}

fn dispersion(run: &mut Run<'_>) -> Result<(), CliError> {
    let FamilyConfig::PlaneWave { k } = run.cfg.family else {
        return Ok(());
    };
    let p = run.params;
    let expected = p.hbar * k * k / (2.0 * p.m);
    let SolutionFamily::QPlaneWave { mode } = run.family else {
        unreachable!("plane-wave config builds a q-plane wave");
    };
    // ψ_t = −iw ψ^q, so w = iψ_t/ψ^q at any node
    let h = 1e-4;
    let measure = || -> Result<f64, NrtError> {
        let mut worst = 0.0f64;
        for &t in &run.cfg.grid.t {
            for &x in &[run.cfg.grid.x_min, 0.0, run.cfg.grid.x_max] {
                let psi = |s: f64| run.family.psi(x, s, &p);
                let dt = (psi(t - 2.0 * h)? - 8.0 * psi(t - h)? + 8.0 * psi(t + h)? - psi(t + 2.0 * h)?)
                    / (12.0 * h);
                let psi_q = qcalc::checked_exp(p.q * run.family.log_psi(x, t, &p)?)?;
                let w = Complex64::i() * dt / psi_q;
                worst = worst.max((w - expected).norm());
            }
        }
        Ok(worst)
    };
    let worst = measure().map_err(|e| numerical("dispersion", e))?;
    run.report.section("dispersion");
    run.report.line(format!("w (mode) = {}", sci(mode.w)));
    run.report.line(format!("hbar k^2 / 2m = {}", sci(expected)));
    run.report.line(format!("E = hbar w = {}, p = hbar k = {}", sci(mode.energy), sci(mode.momentum)));
    run.report.line(format!("w measured as i psi_t / psi^q: max deviation {worst:.3e}"));
    let exact = (mode.w - expected).abs() <= 1e-15 * expected.max(1.0);
    run.check(
        "dispersion",
        exact && worst < 1e-6,
        format!("|w − ħk²/2m| = {:.3e}, measured deviation {worst:.3e}", (mode.w - expected).abs()),
    );
    Ok(())
}

fn pulsation(run: &mut Run<'_>) -> Result<(), CliError> {
    let FamilyConfig::PulsatingQ3 { a_c, c_1, .. } = run.cfg.family else {
        return Ok(());
    };
    let p = run.params;
    let grid = run.grid();
    let abs2 = |x: f64, t: f64| run.family.psi(x, t, &p).map(|z| z.norm_sqr());
    run.report.section("pulsation");
    if c_1.0 == 0.0 && c_1.1 == 0.0 {
        let mut worst = 0.0f64;
        for &t in &run.cfg.grid.t {
            for &x in &grid {
                let (u, v) = (
                    abs2(x, t).map_err(|e| numerical("pulsation", e))?,
                    abs2(x, 0.0).map_err(|e| numerical("pulsation", e))?,
                );
                worst = worst.max((u - v).abs() / v.max(1.0));
            }
        }
        run.report.line(format!("c_1 = 0: max change of |psi|^2 from t = 0 is {worst:.3e}"));
        run.check("stationary", worst <= PERIOD_AGREEMENT, format!("max change {worst:.3e}"));
        return Ok(());
    }
    if a_c.1 != 0.0 || a_c.0 <= 0.0 {
        run.report.line("a_c is not real and positive: no period");
        return Ok(());
    }
    let period = std::f64::consts::PI * p.m / (p.hbar * a_c.0);
    let mut worst = 0.0f64;
    for &t in &run.cfg.grid.t {
        for &x in &grid {
            let u = abs2(x, t).map_err(|e| numerical("pulsation", e))?;
            let v = abs2(x, t + period).map_err(|e| numerical("pulsation", e))?;
            worst = worst.max((u - v).abs() / u.max(1.0));
        }
    }
    run.report.line(format!("period T = pi m / (hbar a_c) = {}", sci(period)));
    run.report.line(format!("max | |psi(t)|^2 − |psi(t + T)|^2 | = {worst:.3e}"));
    run.check(
        "period",
        worst <= PERIOD_AGREEMENT,
        format!("max gap {worst:.3e} (bound {PERIOD_AGREEMENT:e})"),
    );
    Ok(())
}

fn window(q: f64) -> Vec<f64> {
    let span = if is_q_one(q) { 0.4 } else { 0.4f64.min(0.5 / (1.0 - q).abs()) };
    (0..=40).map(|j| span * (j as f64 / 20.0 - 1.0)).collect()
}

fn genfamily_check(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut run = Run::new(command, cfg)?;
    let FamilyConfig::PlaneWave { k } = cfg.family else {
        unreachable!("genfamily-check is tied to plane-wave parameters");
    };
    let p = run.params;
    let q = p.q;
    let err = |what: &str| {
        let what = what.to_string();
        move |e: NrtError| numerical(&what, e)
    };
    let nrt = nrt_pair(q).map_err(err("nrt pair"))?;
    let sinh = sinh_pair().map_err(err("sinh pair"))?;
    let sinh_window: Vec<f64> = (0..=80).map(|j| -2.0 + 0.05 * j as f64).collect();

    let nrt_rel = verify_pair_relation(&nrt, &window(q)).map_err(err("nrt pair"))?;
    let sinh_rel = verify_pair_relation(&sinh, &sinh_window).map_err(err("sinh pair"))?;
    run.report.section("pair relation");
    run.report.line("max |d²L(F(u))/du² − F′(u)| over real u");
    run.report.table(
        &["pair", "window", "max_gap"],
        &[
            vec![nrt.name.clone(), "|u| ≤ min(0.4, 0.5/|1−q|)".into(), sci(nrt_rel)],
            vec![sinh.name.clone(), "[-2, 2]".into(), sci(sinh_rel)],
        ],
    );
    run.check(
        "pair-relation",
        nrt_rel < PAIR_AGREEMENT && sinh_rel < PAIR_AGREEMENT,
        format!("nrt {nrt_rel:.3e}, sinh {sinh_rel:.3e}"),
    );

    // sinh plane waves, on nodes where cos(kx − wt) > 0.2
    let w = p.hbar * k * k / (2.0 * p.m);
    let grid = run.grid();
    let mut on = 0.0f64;
    let mut off = 0.0f64;
    let mut used = 0usize;
    for &t in &cfg.grid.t {
        let mut profile = GridProfile { t, x: Vec::new(), re: Vec::new(), im: Vec::new(), abs2: Vec::new() };
        for &x in &grid {
            let phi = general_plane_wave(&sinh, k, &p, t, x).map_err(err("sinh wave"))?;
            profile.x.push(x);
            profile.re.push(phi.re);
            profile.im.push(phi.im);
            profile.abs2.push(phi.norm_sqr());
            if (k * x - w * t).cos() > 0.2 {
                used += 1;
                on = on.max(plane_wave_residual(&sinh, k, &p, x, t).map_err(err("sinh residual"))?);
                off = off
                    .max(generalized_residual(&sinh, k, 1.01 * w, &p, x, t).map_err(err("sinh residual"))?);
            }
        }
        run.profiles.push(profile);
    }
    run.report.section("generalized plane wave");
    run.report.line(format!("sinh pair, k = {k}, w = hbar k^2 / 2m = {}", sci(w)));
    run.report.line(format!("nodes with cos(kx − wt) > 0.2: {used}"));
    run.report.line(format!("max residual at w: {}", sci(on)));
    run.report.line(format!("max residual at 1.01 w: {}", sci(off)));
    run.check(
        "sinh-wave",
        used > 0 && on < PAIR_AGREEMENT,
        format!("max residual {on:.3e} over {used} nodes"),
    );
    run.check(
        "sinh-detuned",
        used > 0 && off > DETUNED_FLOOR,
        format!("max residual {off:.3e} with w × 1.01"),
    );

    let nrt_wave = SolutionFamily::plane_wave(k, &p);
    let mut gap = 0.0f64;
    for &t in &cfg.grid.t {
        for &x in &grid {
            let a = general_plane_wave(&nrt, k, &p, t, x).map_err(err("nrt wave"))?;
            let b = nrt_wave.psi(x, t, &p).map_err(err("nrt wave"))?;
            gap = gap.max((a - b).norm());
        }
    }
    run.report.line(format!("nrt pair against the q-plane wave: max gap {}", sci(gap)));
    run.check("nrt-wave", gap <= 1e-12, format!("max gap {gap:.3e}"));

    let fit_nrt = uniqueness_residual(&nrt, &window(q)).map_err(err("uniqueness"))?;
    let fit_sinh = uniqueness_residual(&sinh, &sinh_window).map_err(err("uniqueness"))?;
    run.report.section("uniqueness");
    run.report.line("least-squares fit of d L(F(u))/du = (r1 + r2 u) F′(u)");
    let row = |name: &str, f: &nrt_core::genfamily::UniquenessProbe| {
        vec![
            name.to_string(),
            format!("{:.10}", f.r1),
            format!("{:.10}", f.r2),
            sci(f.residual),
            sci(f.lower_bound),
        ]
    };
    run.report.table(
        &["pair", "r1", "r2", "max_residual", "rms_bound"],
        &[row(&nrt.name, &fit_nrt), row(&sinh.name, &fit_sinh)],
    );
    let r2_gap = (fit_nrt.r2 - (1.0 - q)).abs();
    run.check(
        "uniqueness-nrt",
        fit_nrt.residual < UNIQUENESS_EXACT && r2_gap < UNIQUENESS_EXACT,
        format!("residual {:.3e}, |r2 − (1−q)| = {r2_gap:.3e}", fit_nrt.residual),
    );
    run.check(
        "uniqueness-sinh",
        fit_sinh.lower_bound > UNIQUENESS_GAP,
        format!("every (r1, r2) leaves a residual ≥ {:.3e}", fit_sinh.lower_bound),
    );
    run.emit_profiles("sinh plane wave |Phi|^2");
    Ok(run.finish(command))
}

fn pde_crosscheck(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut run = Run::new(command, cfg)?;
    let p = run.params;
    let family = run.family;
    let potential = family.potential(&p);
    let g = &cfg.grid;
    let initial = FieldState::from_fn(g.x_min, g.x_max, g.nx, 0.0, |x| family.psi(x, 0.0, &p))
        .map_err(|e| numerical("initial slice", e))?;
    let opts = PdeOptions {
        boundary: match cfg.pde.boundary {
            BoundaryKind::OneSided => Boundary::OneSided,
            BoundaryKind::Pinned => Boundary::Pinned,
        },
        ..PdeOptions::default()
    };
    let mut state = initial;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for &t in &g.t {
        state = evolve_pde(&state, &p, potential, t, &opts)
            .map_err(|e| numerical(&format!("pde to t = {t}"), e))?;
        let xs = state.xs();
        let exact = xs
            .iter()
            .map(|&x| family.psi(x, t, &p))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| numerical("analytic slice", e))?;
        let e = relative_l2(&state.psi, &exact);
        worst = worst.max(e);
        rows.push(vec![t.to_string(), sci(e)]);
        run.profiles.push(GridProfile {
            t,
            re: state.psi.iter().map(|z| z.re).collect(),
            im: state.psi.iter().map(|z| z.im).collect(),
            abs2: state.psi.iter().map(|z| z.norm_sqr()).collect(),
            x: xs,
        });
    }
    run.report.section("pde");
    run.report.line(format!("method of lines, RK4, h = {}, boundary = {:?}", sci(state.h), cfg.pde.boundary));
    run.report.table(&["t", "relative_l2"], &rows);
    let tol = cfg.tolerances.pde;
    run.check("pde", worst < tol, format!("max relative L2 error {worst:.3e} (bound {tol:e})"));
    run.emit_profiles("method-of-lines |psi|^2");
    Ok(run.finish(command))
}
