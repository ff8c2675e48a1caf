//! The `verify`, `gallery`, `integrate` and `export` commands.

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use zmcrot_core::catalog::{self, CatalogEntry};
use zmcrot_core::ode_integrate::{integrate_profile, unit_speed_start, Trajectory, DEFAULT_TOLERANCE};
use zmcrot_core::profiles::{regular_signs, regularity_scan, RegularPiece};
use zmcrot_core::zmc_analysis::{closed_form_membership, verify, CausalLabel, Verdict, VerificationReport};
use zmcrot_core::{Error as CoreError, Sign, SurfaceFamily, SurfaceKind};

use crate::config::{launch_profile, Coord, Format, Interval, Resolved, RunConfig};
use crate::error::{CliError, Result};
use crate::export::{build_grid, write_csv, write_json, write_obj, Grid};

pub const REPORT_SCHEMA: &str = "zmcrot/verification-report/v1";
pub const GALLERY_SCHEMA: &str = "zmcrot/gallery-summary/v1";
pub const INTEGRATE_SCHEMA: &str = "zmcrot/integrate-report/v1";

/// Membership residual below which an integrated curve counts as lying on
/// its family.
pub const MEMBERSHIP_THRESHOLD: f64 = 1e-5;

/// Nodes per axis of the meshes written by `gallery`.
pub const GALLERY_GRID: usize = 32;

/// Scan resolution used to find regular subintervals for meshes and launches.
const SCAN_POINTS: usize = 2000;

/// Relative margin kept from the singular ends by default export grids.
const EXPORT_MARGIN: f64 = 1e-2;

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

fn write_versioned<T: Serialize>(schema: &'static str, body: &T, out: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, &Versioned { schema, body })?;
    writeln!(out)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Runs `body` against `path`, or against `stdout` when there is no path.
fn with_output(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = create(p)?;
            body(&mut f).and_then(|_| f.flush()).map_err(|e| CliError::io(p, e))
        }
        None => body(stdout).map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn verify_report(cfg: &RunConfig) -> Result<VerificationReport> {
    let resolved = cfg.resolve()?;
    Ok(verify(&resolved.id, &resolved.surface, &cfg.verify_config()?)?)
}

/// Writes the verification report; a failing verdict is an error after the
/// report has been written.
pub fn cmd_verify(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<VerificationReport> {
    let report = verify_report(cfg)?;
    with_output(cfg.out.as_deref(), stdout, |w| write_versioned(REPORT_SCHEMA, &report, w))?;
    if report.verdict == Verdict::Fail {
        return Err(CliError::Failed(format!("{}: {}", report.surface_id, report.failures.join("; "))));
    }
    Ok(report)
}

/// One regular subinterval of one catalog surface.
#[derive(Clone, Debug, Serialize)]
pub struct GalleryRow {
    pub name: String,
    pub kind: SurfaceKind,
    pub b: f64,
    pub start: f64,
    pub end: f64,
    /// mean normalized first integral on the subinterval (`None` for b = 1)
    pub first_integral: Option<f64>,
    pub eps: Sign,
    pub eps_star: Sign,
    pub causal: CausalLabel,
    /// classification known for this part of the surface, if any
    pub expected: Option<CausalLabel>,
    pub max_mean_curvature: f64,
    pub verdict: Verdict,
}

impl GalleryRow {
    pub fn matches(&self) -> bool {
        self.expected.is_none_or(|e| e == self.causal)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GallerySummary {
    pub rows: Vec<GalleryRow>,
    pub all_pass: bool,
}

fn expected_label(entry: &CatalogEntry, start: f64, end: f64) -> Option<CausalLabel> {
    let mid = 0.5 * (start + end);
    entry.labels.iter().find(|l| l.start < mid && mid < l.end).map(|l| l.label)
}

pub fn gallery_rows(entry: &CatalogEntry, report: &VerificationReport) -> Vec<GalleryRow> {
    report
        .causal
        .iter()
        .map(|c| GalleryRow {
            name: entry.name.clone(),
            kind: entry.kind,
            b: entry.b,
            start: c.start,
            end: c.end,
            first_integral: c.first_integral_mean,
            eps: c.eps,
            eps_star: c.eps_star,
            causal: c.label,
            expected: expected_label(entry, c.start, c.end),
            max_mean_curvature: c.max_mean_curvature,
            verdict: report.verdict,
        })
        .collect()
}

pub fn format_table(rows: &[GalleryRow]) -> String {
    let mut s = String::new();
    s.push_str("| surface | kind | b | subinterval | a0 | ε | ε* | causal | expected | max |H| | verdict |\n");
    s.push_str("|---|---|---|---|---|---|---|---|---|---|---|\n");
    for r in rows {
        let a0 = r.first_integral.map_or("-".to_string(), |f| format!("{f:.6}"));
        let expected = match r.expected {
            Some(e) if e == r.causal => "match".to_string(),
            Some(e) => format!("MISMATCH ({e})"),
            None => "-".to_string(),
        };
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        };
        s.push_str(&format!(
            "| {} | {} | {} | ({:.6}, {:.6}) | {a0} | {} | {} | {} | {expected} | {:.2e} | {verdict} |\n",
            r.name, r.kind, r.b, r.start, r.end, r.eps, r.eps_star, r.causal, r.max_mean_curvature
        ));
    }
    s
}

/// Longest regular subinterval of the surface's domain, shrunk by `margin`.
pub fn default_u_range(surface: &SurfaceFamily, margin: f64) -> Result<Interval> {
    let piece = longest_piece(surface)?;
    Interval::new(piece.start + margin * piece.len(), piece.end - margin * piece.len()).map_err(CliError::Config)
}

fn longest_piece(surface: &SurfaceFamily) -> Result<RegularPiece> {
    regularity_scan(surface, surface.profile.domain(), SCAN_POINTS)
        .into_iter()
        .max_by(|a, b| a.len().total_cmp(&b.len()))
        .ok_or_else(|| CliError::Domain(CoreError::BadParameter("the profile has no regular subinterval".into())))
}

/// File-name form of a catalog name: `vranceanu(1,0)` becomes `vranceanu_1_0`.
pub fn file_stem(name: &str) -> String {
    let mapped: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect();
    mapped.trim_end_matches('_').to_string()
}

fn full_turn() -> Interval {
    Interval { start: 0.0, end: 2.0 * PI }
}

fn write_grid(
    grid: &Grid,
    format: Format,
    drop: Coord,
    id: &str,
    surface: &SurfaceFamily,
    w: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(grid, w),
        Format::Obj => write_obj(grid, drop, w),
        Format::Json => write_json(grid, id, surface, w),
    }
}

/// Verifies every catalog surface and writes `<name>.json`, a mesh
/// `<name>.<format>` (names passed through [`file_stem`]), `summary.json`
/// and `summary.md` into `cfg.out` (default `gallery`).
pub fn cmd_gallery(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<GallerySummary> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("gallery"));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let vcfg = cfg.verify_config()?;
    let format = cfg.format.unwrap_or(Format::Obj);
    let drop = cfg.drop_coord.unwrap_or(Coord::X3);

    let mut rows = Vec::new();
    for entry in catalog::all() {
        let surface = entry.surface()?;
        let report = verify(&entry.name, &surface, &vcfg)?;
        let stem = file_stem(&entry.name);
        with_output(Some(&dir.join(format!("{stem}.json"))), stdout, |w| write_versioned(REPORT_SCHEMA, &report, w))?;
        let grid =
            build_grid(&surface, default_u_range(&surface, EXPORT_MARGIN)?, full_turn(), GALLERY_GRID, GALLERY_GRID)?;
        let mesh = dir.join(format!("{stem}.{}", format.extension()));
        with_output(Some(&mesh), stdout, |w| write_grid(&grid, format, drop, &entry.name, &surface, w))?;
        rows.extend(gallery_rows(&entry, &report));
    }
    let all_pass = rows.iter().all(|r| r.verdict == Verdict::Pass && r.matches());
    let summary = GallerySummary { rows, all_pass };
    let table = format_table(&summary.rows);
    with_output(Some(&dir.join("summary.json")), stdout, |w| write_versioned(GALLERY_SCHEMA, &summary, w))?;
    with_output(Some(&dir.join("summary.md")), stdout, |w| w.write_all(table.as_bytes()))?;
    stdout.write_all(table.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
    if !summary.all_pass {
        return Err(CliError::Failed("gallery has failing or mismatched rows".into()));
    }
    Ok(summary)
}

#[derive(Clone, Debug, Serialize)]
pub struct StartReport {
    pub u0: f64,
    pub p: f64,
    pub s: f64,
    pub dp: f64,
    pub ds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrateReport {
    pub surface: String,
    pub kind: SurfaceKind,
    pub b: f64,
    pub start: StartReport,
    pub direction: Sign,
    pub length: f64,
    pub tol: f64,
    /// `completed` or the reason the run stopped early
    pub stop: String,
    pub states: usize,
    pub arclength_domain: (f64, f64),
    pub max_speed_drift: f64,
    pub max_first_integral_drift: f64,
    pub membership_residual: Option<f64>,
    pub membership_error: Option<String>,
    pub membership_threshold: f64,
    pub verdict: Verdict,
}

fn write_trajectory(t: &Trajectory, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "t,p,s,dp,ds,ddp,dds,speed_drift,first_integral_drift")?;
    for s in &t.states {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            s.u, s.p, s.s, s.dp, s.ds, s.ddp, s.dds, s.speed_drift, s.first_integral_drift
        )?;
    }
    Ok(())
}

/// Launch parameter: `--u0`, else the catalog launch, else the middle of the
/// longest regular subinterval.
fn launch_point(cfg: &RunConfig, resolved: &Resolved) -> Result<(f64, Sign)> {
    let launch = resolved.entry.as_ref().and_then(|e| e.launch);
    let u0 = match (cfg.u0, launch) {
        (Some(u), _) => u,
        (None, Some(l)) => l.u,
        (None, None) => {
            let piece = longest_piece(&resolved.surface)?;
            0.5 * (piece.start + piece.end)
        }
    };
    let direction = cfg.direction.or(launch.map(|l| l.direction)).unwrap_or(Sign::Plus);
    Ok((u0, direction))
}

/// Integrates the profile equation from a point of the configured profile,
/// writing `curve.csv` and `integrate.json` into `cfg.out` (default
/// `integrate`). Failures of the family construction or the integrator
/// are reported with exit code 1.
pub fn cmd_integrate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<IntegrateReport> {
    let as_integration = |e: CliError| match e {
        CliError::Domain(e) => CliError::Integration(e),
        other => other,
    };
    let resolved = cfg.resolve().map_err(as_integration)?;
    let (u0, direction) = launch_point(cfg, &resolved)?;
    let profile = launch_profile(&resolved)?;
    let probe = SurfaceFamily::new(resolved.surface.kind, resolved.surface.b, profile.clone())?;
    if !profile.contains(u0) {
        return Err(CliError::Config(format!("--u0 {u0} lies outside the profile domain {:?}", profile.domain())));
    }
    if regular_signs(&probe, u0).is_none() {
        return Err(CliError::Integration(CoreError::SingularStart(format!(
            "u0 = {u0} lies on the singular locus of the surface"
        ))));
    }
    let start = unit_speed_start(&profile, u0).map_err(CliError::Integration)?;
    let length = cfg.length.unwrap_or(1.0);
    let tol = cfg.tol.unwrap_or(DEFAULT_TOLERANCE);
    let (kind, b) = (resolved.surface.kind, resolved.surface.b);

    let (trajectory, stop, failure) = match integrate_profile(kind, b, start, direction, length, tol) {
        Ok(t) => (t, "completed".to_string(), None),
        Err(CoreError::HitSingularity { boundary, partial }) => {
            let e = CoreError::HitSingularity { boundary, partial: partial.clone() };
            (*partial, format!("singular locus at arclength {boundary}"), Some(e))
        }
        Err(e) => return Err(CliError::Integration(e)),
    };

    let (membership_residual, membership_error) = match (&resolved.family, trajectory.curve()) {
        (None, _) => (None, Some("the profile has no implicit family".to_string())),
        (Some(_), Err(e)) => (None, Some(e.to_string())),
        (Some(f), Ok(curve)) => match closed_form_membership(kind, &curve, f) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        },
    };
    let passes = failure.is_none() && membership_residual.is_none_or(|r| r < MEMBERSHIP_THRESHOLD);
    let report = IntegrateReport {
        surface: resolved.id.clone(),
        kind,
        b,
        start: StartReport { u0, p: start.p, s: start.s, dp: start.dp, ds: start.ds },
        direction,
        length,
        tol,
        stop,
        states: trajectory.states.len(),
        arclength_domain: trajectory.domain(),
        max_speed_drift: trajectory.max_speed_drift(),
        max_first_integral_drift: trajectory.max_first_integral_drift(),
        membership_residual,
        membership_error,
        membership_threshold: MEMBERSHIP_THRESHOLD,
        verdict: if passes { Verdict::Pass } else { Verdict::Fail },
    };

    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("integrate"));
    with_output(Some(&dir.join("curve.csv")), stdout, |w| write_trajectory(&trajectory, w))?;
    with_output(Some(&dir.join("integrate.json")), stdout, |w| write_versioned(INTEGRATE_SCHEMA, &report, w))?;
    if let Some(e) = failure {
        return Err(CliError::Integration(e));
    }
    if report.verdict == Verdict::Fail {
        return Err(CliError::Failed(format!(
            "membership residual {:?} is not below {MEMBERSHIP_THRESHOLD:e}",
            report.membership_residual
        )));
    }
    Ok(report)
}

/// Samples the surface on a `samples × samples` grid (default 32) and writes
/// it to `cfg.out` or standard output. Without `--domain` the grid covers the
/// longest regular subinterval minus a 1% margin at each end.
pub fn cmd_export(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Grid> {
    let resolved = cfg.resolve()?;
    let surface = &resolved.surface;
    let u_range = match cfg.domain {
        Some(d) => d,
        None => default_u_range(surface, EXPORT_MARGIN)?,
    };
    let n = cfg.samples.unwrap_or(GALLERY_GRID);
    let grid = build_grid(surface, u_range, cfg.v_domain.unwrap_or_else(full_turn), n, n)?;
    let format = cfg.format.unwrap_or(Format::Csv);
    let drop = cfg.drop_coord.unwrap_or(Coord::X3);
    with_output(cfg.out.as_deref(), stdout, |w| write_grid(&grid, format, drop, &resolved.id, surface, w))?;
    Ok(grid)
}
