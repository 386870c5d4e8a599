use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use cvrp::array::{synthesize_eirp, ArraySpec, ElementModel};
use cvrp::diagnostics::{compare_sweeps, DEFAULT_THRESHOLD_DB};
use cvrp::io::{self, format_number, format_power, SynthesisMetadata};
use cvrp::mask::SphericalMask;
use cvrp::metrics::{self, PrpPreset};
use cvrp::pipeline::{aligned_sweep, fault_study, REFERENCE_SCANS_DEG};
use cvrp::remap::{remap_to_distributed, remap_to_standard};
use cvrp::rotate::rotate_about_y;
use cvrp::{Direction, Pattern, Result};

#[derive(Parser)]
#[command(name = "cvrp", version, about = "Radiated-power metrics for polarized EIRP patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a planar array and write its EIRP pattern.
    Synth(SynthArgs),
    /// Convert between distributed-axes and standard grids.
    Remap {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Standard)]
        to: Target,
    },
    /// Fill unmeasured cells with a constant power.
    Fill {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Fill value in dBm; `-inf` writes zero power.
        #[arg(long, default_value = "-inf", allow_hyphen_values = true, value_parser = parse_dbm)]
        fill_dbm: f64,
    },
    /// Rotate a pattern about the y axis.
    Rotate {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        about_y: f64,
    },
    /// Total radiated power.
    Trp { input: PathBuf },
    /// Partial radiated power over a θ band.
    #[command(group(ArgGroup::new("band").required(true).args(["theta1", "preset"])))]
    Prp {
        input: PathBuf,
        #[arg(long, requires = "theta2")]
        theta1: Option<f64>,
        #[arg(long, requires = "theta1")]
        theta2: Option<f64>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
    },
    /// Constrained-view radiated power for one mask.
    #[command(group(ArgGroup::new("mask").required(true).args(["cap", "window", "point"])))]
    Cvrp {
        input: PathBuf,
        /// Cap half-angle in degrees.
        #[arg(long)]
        cap: Option<f64>,
        /// Cap center θ,φ in degrees.
        #[arg(long, default_value = "0,0", value_parser = parse_direction, requires = "cap")]
        center: Direction,
        /// θmin,θmax,φmin,φmax in degrees.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<[f64; 4]>,
        /// θ,φ in degrees.
        #[arg(long, value_parser = parse_direction)]
        point: Option<Direction>,
    },
    /// CVRP over a list of cap half-angles.
    Sweep {
        input: PathBuf,
        #[arg(long, value_parser = parse_direction)]
        center: Direction,
        /// Decreasing half-angles in degrees; defaults to the standard 16-entry list.
        #[arg(long, value_delimiter = ',')]
        fovs: Option<Vec<f64>>,
        /// Sweep CSV destination; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare a test sweep against a reference sweep.
    Diagnose {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_DB)]
        threshold_db: f64,
        /// Comparison CSV destination.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Aligned CVRP sweeps of both element models at scans -45, -4.5 and 0.
    ReproFig5 {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        trp_dbm: f64,
    },
    /// All-on versus faulty sweeps at one scan and their comparison.
    ReproFig6 {
        #[arg(long, allow_negative_numbers = true)]
        scan: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        fe: Vec<usize>,
        #[arg(long, value_parser = parse_element, default_value = "huygens")]
        element: ElementModel,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        trp_dbm: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_DB)]
        threshold_db: f64,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("steer").args(["scan", "beam"])))]
struct SynthArgs {
    #[arg(long, value_parser = parse_element)]
    element: ElementModel,
    /// Scan angle in degrees, within [-45, 45].
    #[arg(long, allow_negative_numbers = true)]
    scan: Option<f64>,
    /// Beam index 1..=21 (beam 1 is -45 degrees).
    #[arg(long)]
    beam: Option<usize>,
    /// Failed elements, 1-based row-major.
    #[arg(long, value_delimiter = ',')]
    fe: Vec<usize>,
    /// Reference TRP in dBm.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    trp_dbm: f64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Standard,
    Distributed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Uhrp,
    N75prp,
    Nhprp,
}

impl From<Preset> for PrpPreset {
    fn from(p: Preset) -> Self {
        match p {
            Preset::Uhrp => PrpPreset::Uhrp,
            Preset::N75prp => PrpPreset::N75prp,
            Preset::Nhprp => PrpPreset::Nhprp,
        }
    }
}

fn parse_numbers<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("{part:?} is not a finite number"))?;
    }
    Ok(out)
}

fn parse_direction(s: &str) -> std::result::Result<Direction, String> {
    let [theta, phi] = parse_numbers::<2>(s)?;
    if !(0.0..=180.0).contains(&theta) {
        return Err(format!("theta {theta} outside [0, 180]"));
    }
    Ok(Direction::new(theta, phi))
}

fn parse_window(s: &str) -> std::result::Result<[f64; 4], String> {
    parse_numbers::<4>(s)
}

fn parse_element(s: &str) -> std::result::Result<ElementModel, String> {
    ElementModel::from_name(s).ok_or_else(|| format!("unknown element model {s:?} (cosine or huygens)"))
}

fn parse_dbm(s: &str) -> std::result::Result<f64, String> {
    if s.trim() == "-inf" {
        return Ok(f64::NEG_INFINITY);
    }
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("{s:?} is not a dBm value"))
}

fn dbm_to_mw(dbm: f64) -> f64 {
    if dbm == f64::NEG_INFINITY {
        0.0
    } else {
        10f64.powf(dbm / 10.0)
    }
}

fn read(path: &Path) -> Result<Pattern> {
    io::read_pattern(path)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| cvrp::Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(a) => {
            let mut spec = ArraySpec::reference(a.element).with_failed(a.fe.iter().copied());
            spec = match (a.scan, a.beam) {
                (Some(scan), _) => spec.with_scan(scan),
                (None, Some(beam)) => spec.with_beam(beam)?,
                (None, None) => spec,
            };
            let synth = synthesize_eirp(&spec, dbm_to_mw(a.trp_dbm))?;
            let meta = SynthesisMetadata {
                element: a.element,
                scan_deg: spec.scan_angle_deg,
                failed_elements: spec.failed_elements.iter().copied().collect(),
                reference_trp_dbm: a.trp_dbm,
            };
            io::write_pattern_with(&synth.pattern, Some(&meta), &a.output)?;
            let (dir, peak) = synth.pattern.peak();
            println!(
                "{}: peak {} at theta {} phi {}",
                spec.describe(),
                format_power(peak),
                format_number(dir.theta_deg),
                format_number(dir.phi_deg)
            );
        }
        Command::Remap { input, output, to } => {
            let p = read(&input)?;
            let out = match to {
                Target::Standard => remap_to_standard(&p)?,
                Target::Distributed => remap_to_distributed(&p)?,
            };
            io::write_pattern(&out, &output)?;
            let unmeasured = out.measured().iter().filter(|&&m| !m).count();
            println!("{} cells, {unmeasured} unmeasured", out.grid().len());
        }
        Command::Fill {
            input,
            output,
            fill_dbm,
        } => {
            let p = read(&input)?;
            let filled_cells = p.measured().iter().filter(|&&m| !m).count();
            io::write_pattern(&p.fill_unmeasured(dbm_to_mw(fill_dbm))?, &output)?;
            println!("filled {filled_cells} cells");
        }
        Command::Rotate {
            input,
            output,
            about_y,
        } => {
            io::write_pattern(&rotate_about_y(&read(&input)?, about_y)?, &output)?;
        }
        Command::Trp { input } => {
            println!("{}", format_power(metrics::trp(&read(&input)?)?));
        }
        Command::Prp {
            input,
            theta1,
            theta2,
            preset,
        } => {
            let p = read(&input)?;
            let v = match (preset, theta1, theta2) {
                (Some(preset), _, _) => metrics::prp_preset(&p, preset.into())?,
                (None, Some(t1), Some(t2)) => metrics::prp(&p, t1, t2)?,
                _ => unreachable!("clap enforces the band group"),
            };
            println!("{}", format_power(v));
        }
        Command::Cvrp {
            input,
            cap,
            center,
            window,
            point,
        } => {
            let p = read(&input)?;
            let mask = match (cap, window, point) {
                (Some(beta), _, _) => SphericalMask::cap(center, beta)?,
                (None, Some([a, b, c, d]), _) => SphericalMask::window(a, b, c, d)?,
                (None, None, Some(d)) => SphericalMask::point(d),
                _ => unreachable!("clap enforces the mask group"),
            };
            println!("{}", format_power(metrics::cvrp_any(&p, &mask)?));
        }
        Command::Sweep {
            input,
            center,
            fovs,
            output,
        } => {
            let p = read(&input)?;
            let fovs = fovs.unwrap_or_else(metrics::default_fovs);
            let sweep = metrics::cvrp_sweep(&p, center, &fovs)?;
            match output {
                Some(path) => io::write_sweep(&sweep, path)?,
                None => {
                    use cvrp::diagnostics::PlotSource;
                    io::write_plot_csv_to(&sweep.plot_rows(), &io::sweep_metadata(&sweep), std::io::stdout().lock())?
                }
            }
        }
        Command::Diagnose {
            reference,
            test,
            threshold_db,
            output,
        } => {
            let r = io::read_sweep(&reference)?;
            let t = io::read_sweep(&test)?;
            let c = compare_sweeps(&r, &t, threshold_db)?;
            if let Some(path) = output {
                io::write_comparison(&c, path)?;
            }
            print_comparison(&c);
        }
        Command::ReproFig5 { out_dir, trp_dbm } => {
            create_dir(&out_dir)?;
            let fovs = metrics::default_fovs();
            for element in [ElementModel::Cosine, ElementModel::Huygens] {
                for scan in REFERENCE_SCANS_DEG {
                    let spec = ArraySpec::reference(element).with_scan(scan);
                    let sweep = aligned_sweep(&spec, dbm_to_mw(trp_dbm), &fovs)?;
                    let path = out_dir.join(format!("fig5_{element}_scan{}.csv", format_number(scan)));
                    io::write_sweep(&sweep, &path)?;
                    println!("{}", path.display());
                }
            }
        }
        Command::ReproFig6 {
            scan,
            fe,
            element,
            out_dir,
            trp_dbm,
            threshold_db,
        } => {
            create_dir(&out_dir)?;
            let fovs = metrics::default_fovs();
            let study = fault_study(element, scan, &fe, dbm_to_mw(trp_dbm), &fovs, threshold_db)?;
            let mut fe_sorted = fe.clone();
            fe_sorted.sort_unstable();
            fe_sorted.dedup();
            let tag: Vec<String> = fe_sorted.iter().map(|e| e.to_string()).collect();
            let stem = format!("fig6_{element}_scan{}", format_number(scan));
            let ref_path = out_dir.join(format!("{stem}_all-on.csv"));
            let test_path = out_dir.join(format!("{stem}_fe{}.csv", tag.join("-")));
            let cmp_path = out_dir.join(format!("{stem}_comparison.csv"));
            io::write_sweep(&study.reference, &ref_path)?;
            io::write_sweep(&study.faulty, &test_path)?;
            io::write_comparison(&study.comparison, &cmp_path)?;
            for p in [&ref_path, &test_path, &cmp_path] {
                println!("{}", p.display());
            }
            print_comparison(&study.comparison);
        }
    }
    Ok(())
}

fn print_comparison(c: &cvrp::Comparison) {
    println!("max |delta|: {:.4} dB", c.max_abs_delta_db);
    match c.divergence_fov_deg {
        Some(f) => println!("flagged: yes (|delta| > {} dB up to FoV {} deg)", c.threshold_db, format_number(f)),
        None => println!("flagged: no (threshold {} dB)", c.threshold_db),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
