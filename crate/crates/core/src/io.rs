//! Text formats: pattern CSV and sweep/comparison plot CSV.
//!
//! Pattern files are UTF-8 with `# key: value` metadata lines, a column
//! header `theta_deg,phi_deg,eirp_theta_dbm,eirp_phi_dbm`, and one row per
//! measured node in θ-major, φ-ascending order. Powers are dBm with twelve
//! significant digits; `-inf` encodes zero linear power. Nodes without a row
//! are unmeasured.
//!
//! ```text
//! # format_version: cvrp-pattern/1
//! # frequency_hz: 28000000000
//! # convention: standard
//! # dtheta_deg: 1.5
//! # dphi_deg: 1.5
//! # label: cosine 2x8 scan 0 all-on
//! theta_deg,phi_deg,eirp_theta_dbm,eirp_phi_dbm
//! 0,0,17.4563284407,-inf
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::array::ElementModel;
use crate::diagnostics::{dbm_to_mw, PlotRow, PlotSource, SweepComparison, POWER_FLOOR_DBM};
use crate::error::{Error, Result};
use crate::grid::{AngularGrid, Convention};
use crate::metrics::CvrpSweep;
use crate::pattern::PolarizedPattern;
use crate::scalar::Scalar;

pub const FORMAT_VERSION: &str = "cvrp-pattern/1";
pub const PATTERN_COLUMNS: &str = "theta_deg,phi_deg,eirp_theta_dbm,eirp_phi_dbm";
pub const SWEEP_COLUMNS: &str = "fov_deg,cvrp_dbm";
pub const COMPARISON_COLUMNS: &str = "fov_deg,ref_dbm,test_dbm,delta_db,flagged";

/// Synthesis parameters recorded alongside generated patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisMetadata {
    pub element: ElementModel,
    pub scan_deg: f64,
    pub failed_elements: Vec<usize>,
    pub reference_trp_dbm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternFileHeader {
    pub format_version: String,
    pub frequency_hz: f64,
    pub convention: Convention,
    pub dtheta_deg: f64,
    pub dphi_deg: f64,
    pub label: String,
    pub synthesis: Option<SynthesisMetadata>,
}

/// Formats with 12 significant digits, trailing zeros trimmed.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn power_text<T: Scalar>(mw: T) -> String {
    let mw = mw.to_f64_lossy();
    if mw > 0.0 {
        format_number(10.0 * mw.log10())
    } else {
        "-inf".into()
    }
}

/// `"<dBm> dBm (<mW> mW)"` with four decimals, as printed by the CLI.
pub fn format_power(mw: f64) -> String {
    if mw > 0.0 {
        let dbm = format!("{:.4}", 10.0 * mw.log10());
        let dbm = if dbm == "-0.0000" { "0.0000" } else { &dbm };
        format!("{dbm} dBm ({mw:.4} mW)")
    } else {
        format!("-inf dBm ({:.4} mW)", 0.0)
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_pattern_to<T: Scalar, W: Write>(
    p: &PolarizedPattern<T>,
    synthesis: Option<&SynthesisMetadata>,
    mut w: W,
) -> std::io::Result<()> {
    let g = p.grid();
    writeln!(w, "# format_version: {FORMAT_VERSION}")?;
    writeln!(w, "# frequency_hz: {}", format_number(p.frequency_hz))?;
    writeln!(w, "# convention: {}", g.convention().name())?;
    writeln!(w, "# dtheta_deg: {}", format_number(g.dtheta_deg().to_f64_lossy()))?;
    writeln!(w, "# dphi_deg: {}", format_number(g.dphi_deg().to_f64_lossy()))?;
    writeln!(w, "# label: {}", one_line(&p.label))?;
    if let Some(s) = synthesis {
        writeln!(w, "# element: {}", s.element)?;
        writeln!(w, "# scan_deg: {}", format_number(s.scan_deg))?;
        let failed: Vec<String> = s.failed_elements.iter().map(|e| e.to_string()).collect();
        writeln!(w, "# failed_elements: {}", failed.join(","))?;
        writeln!(w, "# reference_trp_dbm: {}", format_number(s.reference_trp_dbm))?;
    }
    writeln!(w, "{PATTERN_COLUMNS}")?;
    for (i, &theta) in g.theta_deg().iter().enumerate() {
        let theta = format_number(theta.to_f64_lossy());
        for (j, &phi) in g.phi_deg().iter().enumerate() {
            let k = g.index(i, j);
            if !p.measured()[k] {
                continue;
            }
            writeln!(
                w,
                "{theta},{},{},{}",
                format_number(phi.to_f64_lossy()),
                power_text(p.eirp_theta_mw()[k]),
                power_text(p.eirp_phi_mw()[k])
            )?;
        }
    }
    w.flush()
}

pub fn write_pattern<T: Scalar>(p: &PolarizedPattern<T>, path: impl AsRef<Path>) -> Result<()> {
    write_pattern_with(p, None, path)
}

pub fn write_pattern_with<T: Scalar>(
    p: &PolarizedPattern<T>,
    synthesis: Option<&SynthesisMetadata>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(io_err(path))?;
    write_pattern_to(p, synthesis, BufWriter::new(file)).map_err(io_err(path))
}

fn parse_f64(path: &Path, line: usize, what: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::parse(path, line, format!("{what}: expected a finite number, got {text:?}")))
}

fn parse_dbm(path: &Path, line: usize, what: &str, text: &str) -> Result<f64> {
    if text.trim() == "-inf" {
        return Ok(0.0);
    }
    Ok(dbm_to_mw(parse_f64(path, line, what, text)?))
}

fn split_meta(line: &str) -> Option<(&str, &str)> {
    let body = line.strip_prefix('#')?;
    let (k, v) = body.split_once(':')?;
    Some((k.trim(), v.trim()))
}

#[derive(Default)]
struct RawHeader {
    version: Option<String>,
    frequency_hz: Option<f64>,
    convention: Option<Convention>,
    dtheta: Option<f64>,
    dphi: Option<f64>,
    label: String,
    element: Option<ElementModel>,
    scan_deg: Option<f64>,
    failed: Vec<usize>,
    reference_trp_dbm: Option<f64>,
}

impl RawHeader {
    fn absorb(&mut self, path: &Path, line: usize, key: &str, value: &str) -> Result<()> {
        match key {
            "format_version" => {
                if value != FORMAT_VERSION {
                    return Err(Error::parse(path, line, format!("unknown format version {value:?}")));
                }
                self.version = Some(value.to_string());
            }
            "frequency_hz" => self.frequency_hz = Some(parse_f64(path, line, key, value)?),
            "convention" => {
                self.convention = Some(
                    Convention::from_name(value)
                        .ok_or_else(|| Error::parse(path, line, format!("unknown convention {value:?}")))?,
                )
            }
            "dtheta_deg" => self.dtheta = Some(parse_f64(path, line, key, value)?),
            "dphi_deg" => self.dphi = Some(parse_f64(path, line, key, value)?),
            "label" => self.label = value.to_string(),
            "element" => {
                self.element = Some(
                    ElementModel::from_name(value)
                        .ok_or_else(|| Error::parse(path, line, format!("unknown element model {value:?}")))?,
                )
            }
            "scan_deg" => self.scan_deg = Some(parse_f64(path, line, key, value)?),
            "failed_elements" => {
                self.failed = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|_| Error::parse(path, line, format!("bad element index {s:?}")))
                    })
                    .collect::<Result<_>>()?
            }
            "reference_trp_dbm" => self.reference_trp_dbm = Some(parse_f64(path, line, key, value)?),
            _ => {}
        }
        Ok(())
    }

    fn finish(self, path: &Path, line: usize) -> Result<PatternFileHeader> {
        let missing = |k: &str| Error::parse(path, line, format!("missing `# {k}:` header line"));
        if self.version.is_none() {
            return Err(missing("format_version"));
        }
        let synthesis = match (self.element, self.scan_deg, self.reference_trp_dbm) {
            (Some(element), Some(scan_deg), Some(reference_trp_dbm)) => Some(SynthesisMetadata {
                element,
                scan_deg,
                failed_elements: self.failed,
                reference_trp_dbm,
            }),
            _ => None,
        };
        Ok(PatternFileHeader {
            format_version: FORMAT_VERSION.to_string(),
            frequency_hz: self.frequency_hz.ok_or_else(|| missing("frequency_hz"))?,
            convention: self.convention.ok_or_else(|| missing("convention"))?,
            dtheta_deg: self.dtheta.ok_or_else(|| missing("dtheta_deg"))?,
            dphi_deg: self.dphi.ok_or_else(|| missing("dphi_deg"))?,
            label: self.label,
            synthesis,
        })
    }
}

/// Parses a pattern from any reader; `path` is only used in error messages.
pub fn read_pattern_from<T: Scalar, R: BufRead>(
    reader: R,
    path: &Path,
) -> Result<(PatternFileHeader, PolarizedPattern<T>)> {
    let mut raw = RawHeader::default();
    let mut state: Option<(PatternFileHeader, AngularGrid<T>, Vec<T>, Vec<T>, Vec<bool>)> = None;
    let mut line_no = 0;
    for line in reader.lines() {
        line_no += 1;
        let line = line.map_err(io_err(path))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if state.is_some() {
                continue;
            }
            if let Some((k, v)) = split_meta(line) {
                raw.absorb(path, line_no, k, v)?;
            }
            continue;
        }
        let Some((header, grid, et, ep, measured)) = state.as_mut() else {
            if line.trim() != PATTERN_COLUMNS {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("expected column header {PATTERN_COLUMNS:?}, got {line:?}"),
                ));
            }
            let header = std::mem::take(&mut raw).finish(path, line_no)?;
            let grid = AngularGrid::<T>::full(header.convention, header.dtheta_deg, header.dphi_deg)
                .map_err(|e| Error::parse(path, line_no, format!("inconsistent step: {e}")))?;
            let n = grid.len();
            state = Some((header, grid, vec![T::zero(); n], vec![T::zero(); n], vec![false; n]));
            continue;
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::parse(path, line_no, format!("expected 4 fields, got {}", fields.len())));
        }
        let theta = parse_f64(path, line_no, "theta_deg", fields[0])?;
        let phi = parse_f64(path, line_no, "phi_deg", fields[1])?;
        let a = parse_dbm(path, line_no, "eirp_theta_dbm", fields[2])?;
        let b = parse_dbm(path, line_no, "eirp_phi_dbm", fields[3])?;
        let bad_angle = |what: &str, v: f64| {
            Error::parse(
                path,
                line_no,
                format!(
                    "inconsistent step: {what} {v} is not a node of the {} grid",
                    header.convention.name()
                ),
            )
        };
        let i = grid.theta_index(T::lit(theta)).ok_or_else(|| bad_angle("theta", theta))?;
        let j = grid.phi_index(T::lit(phi)).ok_or_else(|| bad_angle("phi", phi))?;
        let k = grid.index(i, j);
        if measured[k] {
            return Err(Error::parse(path, line_no, format!("duplicate row for theta={theta}, phi={phi}")));
        }
        et[k] = T::lit(a);
        ep[k] = T::lit(b);
        measured[k] = true;
    }
    let Some((header, grid, et, ep, measured)) = state else {
        return Err(Error::parse(path, line_no, format!("missing column header {PATTERN_COLUMNS:?}")));
    };
    let pattern = PolarizedPattern::with_coverage(grid, et, ep, measured, header.frequency_hz, header.label.clone())?;
    Ok((header, pattern))
}

pub fn read_pattern_with_header<T: Scalar>(path: impl AsRef<Path>) -> Result<(PatternFileHeader, PolarizedPattern<T>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_err(path))?;
    read_pattern_from(BufReader::new(file), path)
}

pub fn read_pattern<T: Scalar>(path: impl AsRef<Path>) -> Result<PolarizedPattern<T>> {
    Ok(read_pattern_with_header(path)?.1)
}

/// Writes plot rows under `# key: value` metadata lines. All rows must be of
/// the same kind; an empty table gets the single-sweep header.
pub fn write_plot_csv_to<T: Scalar, W: Write>(rows: &[PlotRow<T>], metadata: &[(&str, String)], mut w: W) -> Result<()> {
    let comparison = matches!(rows.first(), Some(PlotRow::Comparison { .. }));
    if rows.iter().any(|r| matches!(r, PlotRow::Comparison { .. }) != comparison) {
        return Err(Error::ShapeMismatch("plot rows mix sweep and comparison kinds".into()));
    }
    let mut out = String::new();
    for (k, v) in metadata {
        out.push_str(&format!("# {k}: {}\n", one_line(v)));
    }
    out.push_str(if comparison { COMPARISON_COLUMNS } else { SWEEP_COLUMNS });
    out.push('\n');
    let num = |v: T| format_number(v.to_f64_lossy());
    for row in rows {
        match *row {
            PlotRow::Sweep { fov_deg, cvrp_dbm } => {
                out.push_str(&format!("{},{}\n", num(fov_deg), num(cvrp_dbm)));
            }
            PlotRow::Comparison {
                fov_deg,
                ref_dbm,
                test_dbm,
                delta_db,
                flagged,
            } => {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    num(fov_deg),
                    num(ref_dbm),
                    num(test_dbm),
                    num(delta_db),
                    flagged
                ));
            }
        }
    }
    w.write_all(out.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| Error::Io {
            path: "<writer>".into(),
            source,
        })
}

pub fn write_sweep_csv<T: Scalar>(rows: &[PlotRow<T>], metadata: &[(&str, String)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(io_err(path))?;
    write_plot_csv_to(rows, metadata, BufWriter::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub fn sweep_metadata<T: Scalar>(s: &CvrpSweep<T>) -> Vec<(&'static str, String)> {
    vec![("label", s.pattern_label.clone())]
}

pub fn comparison_metadata<T: Scalar>(c: &SweepComparison<T>) -> Vec<(&'static str, String)> {
    vec![
        ("ref_label", c.ref_label.clone()),
        ("test_label", c.test_label.clone()),
        ("threshold_db", format_number(c.threshold_db.to_f64_lossy())),
        ("flagged", c.flagged.to_string()),
        (
            "divergence_fov_deg",
            c.divergence_fov_deg
                .map(|f| format_number(f.to_f64_lossy()))
                .unwrap_or_else(|| "none".into()),
        ),
    ]
}

pub fn write_sweep<T: Scalar>(s: &CvrpSweep<T>, path: impl AsRef<Path>) -> Result<()> {
    write_sweep_csv(&s.plot_rows(), &sweep_metadata(s), path)
}

pub fn write_comparison<T: Scalar>(c: &SweepComparison<T>, path: impl AsRef<Path>) -> Result<()> {
    write_sweep_csv(&c.plot_rows(), &comparison_metadata(c), path)
}

/// Reads a single-sweep CSV (`fov_deg,cvrp_dbm`). Values at or below the
/// -200 dBm floor read back as zero power.
pub fn read_sweep_from<T: Scalar, R: BufRead>(reader: R, path: &Path) -> Result<CvrpSweep<T>> {
    let mut label = String::new();
    let mut seen_header = false;
    let mut entries = Vec::new();
    let mut line_no = 0;
    for line in reader.lines() {
        line_no += 1;
        let line = line.map_err(io_err(path))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some(("label", v)) = split_meta(line) {
                label = v.to_string();
            }
            continue;
        }
        if !seen_header {
            if line.trim() != SWEEP_COLUMNS {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("expected column header {SWEEP_COLUMNS:?}, got {line:?}"),
                ));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::parse(path, line_no, format!("expected 2 fields, got {}", fields.len())));
        }
        let fov = parse_f64(path, line_no, "fov_deg", fields[0])?;
        let mw = if fields[1].trim() == "-inf" {
            0.0
        } else {
            let dbm = parse_f64(path, line_no, "cvrp_dbm", fields[1])?;
            if dbm <= POWER_FLOOR_DBM {
                0.0
            } else {
                dbm_to_mw(dbm)
            }
        };
        entries.push((T::lit(fov), T::lit(mw)));
    }
    if !seen_header {
        return Err(Error::parse(path, line_no, format!("missing column header {SWEEP_COLUMNS:?}")));
    }
    CvrpSweep::new(entries, label).map_err(|e| Error::parse(path, line_no, e.to_string()))
}

pub fn read_sweep<T: Scalar>(path: impl AsRef<Path>) -> Result<CvrpSweep<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_err(path))?;
    read_sweep_from(BufReader::new(file), path)
}
