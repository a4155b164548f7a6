//! Data files, gnuplot scripts and report text.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nrt_core::observables::GridProfile;

use crate::CliError;

pub const PROFILE_HEADER: &str = "# t x re_psi im_psi abs2";

/// Largest relative gap allowed between the `abs2` column and `re² + im²`.
pub const CONSISTENCY_TOL: f64 = 1e-12;

/// Formats with 17 significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn profile_file_name(index: usize) -> String {
    format!("profile_{index:03}.dat")
}

/// Largest `|abs2 − (re² + im²)| / max(abs2, re² + im²)` over the nodes.
pub fn consistency_gap(p: &GridProfile) -> f64 {
    p.re.iter()
        .zip(&p.im)
        .zip(&p.abs2)
        .map(|((re, im), a)| {
            let direct = re * re + im * im;
            let scale = a.abs().max(direct);
            if scale == 0.0 {
                0.0
            } else {
                (a - direct).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

pub fn format_profile(p: &GridProfile) -> String {
    let mut out = String::with_capacity(100 * (p.x.len() + 1));
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for j in 0..p.x.len() {
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            sci(p.t),
            sci(p.x[j]),
            sci(p.re[j]),
            sci(p.im[j]),
            sci(p.abs2[j])
        );
    }
    out
}

/// A gnuplot script drawing `|ψ|²` from each data file.
pub fn gnuplot_script(title: &str, files: &[(String, f64)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# gnuplot -persist plot.gp");
    let _ = writeln!(out, "# set terminal pngcairo size 900,600; set output 'profiles.png'");
    let _ = writeln!(out, "set title \"{title}\"");
    let _ = writeln!(out, "set xlabel \"x\"");
    let _ = writeln!(out, "set ylabel \"|psi|^2\"");
    let _ = writeln!(out, "set key outside right");
    let plots: Vec<String> =
        files.iter().map(|(name, t)| format!("\"{name}\" using 2:5 with lines title \"t = {t}\"")).collect();
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}

/// Plain-text report assembled section by section.
#[derive(Debug, Default, Clone)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn section(&mut self, title: &str) {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        self.line(format!("[{title}]"));
    }

    /// A table with left-aligned first column and right-aligned others.
    pub fn table(&mut self, header: &[&str], rows: &[Vec<String>]) {
        let cols = header.len();
        let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in rows {
            for (j, cell) in row.iter().enumerate().take(cols) {
                width[j] = width[j].max(cell.chars().count());
            }
        }
        let render = |cells: Vec<&str>| {
            let mut s = String::new();
            for (j, cell) in cells.iter().enumerate() {
                let pad = width[j] - cell.chars().count();
                if j > 0 {
                    s.push_str("  ");
                }
                if j == 0 {
                    s.push_str(cell);
                    s.push_str(&" ".repeat(pad));
                } else {
                    s.push_str(&" ".repeat(pad));
                    s.push_str(cell);
                }
            }
            s.trim_end().to_string()
        };
        self.line(render(header.to_vec()));
        for row in rows {
            self.line(render(row.iter().map(String::as_str).collect()));
        }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Writes `(name, contents)` pairs under `dir`, creating it if needed.
pub fn write_all(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    files
        .iter()
        .map(|(name, contents)| {
            let path = dir.join(name);
            std::fs::write(&path, contents)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(path)
        })
        .collect()
}
