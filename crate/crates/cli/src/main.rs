//! `formfactor` — command-line front end for the form-factor toolkit.
//!
//! Subcommands evaluate geometry-pair documents (exactly for box
//! unions, by sampling otherwise), run the built-in parameter studies,
//! and audit geometries against the 2π supremum.
//!
//! Exit codes: 0 success, 1 audit bound violation, 2 invalid geometry
//! or numeric domain, 3 usage or document-parse error.

mod records;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use formfactor::analytic::{comb_integrals, comb_lambda, lambda_box_union, lattice_sum, toy_lambda};
use formfactor::document::{is_box_union_pair, parse_pair_document};
use formfactor::montecarlo::mc_lambda;
use formfactor::studies::{
    bound_audit, comb_convergence, cylinder_sweep, default_audit_corpus, slab_limit_scan,
    sphere_curve, Method, DEFAULT_CYLINDER_GAP_FRACTIONS, DEFAULT_CYLINDER_HEIGHTS,
    DEFAULT_CYLINDER_RADII, DEFAULT_CYLINDER_SAMPLES, DEFAULT_SLAB_HEIGHTS,
    DEFAULT_SPHERE_RATIOS,
};
use formfactor::{Axis, CombParams, Error, GeometryPair};
use records::{AuditRecord, CombRecord, EvalRecord, LatticeRecord, TableRecord};

#[derive(Parser)]
#[command(
    name = "formfactor",
    version,
    about = "Gravitational form factors of oscillating geometry pairs",
    long_about = "Computes the dimensionless form factor of a pair of equal-volume \
                  uniform bodies oscillating along a common direction: exactly for \
                  axis-aligned box unions (combs included), by Monte Carlo sampling \
                  for spheres and cylinders. Also runs the built-in limit studies \
                  and audits results against the 2π supremum."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Omit the timestamp so identical runs emit byte-identical output.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the form factor of a geometry-pair document.
    Eval {
        /// JSON geometry document ({"A": ..., "B": ..., "direction": [...]}).
        #[arg(long, value_name = "FILE")]
        pair: PathBuf,

        /// Evaluation route; auto picks analytic for box-union pairs
        /// oscillating along a coordinate axis, Monte Carlo otherwise.
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,

        /// Sample count for the Monte Carlo route.
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..))]
        samples: u64,

        /// Random seed for the Monte Carlo route.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Evaluate an interleaved comb pair in closed form.
    Comb {
        /// Tooth height H.
        #[arg(long = "H", value_name = "H")]
        tooth_height: f64,

        /// Base/cap slab thickness h.
        #[arg(
            long = "h",
            value_name = "h",
            required_unless_present = "grid",
            conflicts_with = "grid"
        )]
        slab_thickness: Option<f64>,

        /// Teeth per side N.
        #[arg(
            long = "N",
            value_name = "N",
            required_unless_present = "grid",
            conflicts_with = "grid"
        )]
        teeth: Option<u32>,

        /// Convergence scan instead of a single point: slab thicknesses
        /// and tooth counts as two ';'-separated comma lists.
        #[arg(long, value_name = "h,..;N,..")]
        grid: Option<String>,
    },

    /// Scan ideal slabs: form factor and its fraction of 2π per height.
    SlabLimit {
        /// Comma-separated slab heights (default 0.1,0.05,0.01,1e-3,1e-4).
        #[arg(long = "H-list", value_delimiter = ',', value_name = "H1,H2,...")]
        heights: Option<Vec<f64>>,
    },

    /// Alternating point-mass lattice: partial sum and toy form factor.
    Lattice {
        /// Lattice cutoff (terms with max(|i|,|j|) ≤ cutoff).
        #[arg(long, default_value_t = 2000)]
        cutoff: u32,
    },

    /// Closed-form sphere-pair curve over center distances d/R.
    SphereCurve {
        /// Comma-separated d/R values ≥ 2 (default 2,2.25,...,10).
        #[arg(long, value_delimiter = ',', value_name = "D1,D2,...")]
        grid: Option<Vec<f64>>,
    },

    /// Monte Carlo sweep over coaxial equal-cylinder pairs.
    CylinderSweep {
        /// Grid as three ';'-separated comma lists: radii;heights;gap fractions.
        #[arg(long, value_name = "R,..;H,..;G,..")]
        grid: Option<String>,

        /// Samples per grid point.
        #[arg(long, default_value_t = DEFAULT_CYLINDER_SAMPLES, value_parser = clap::value_parser!(u64).range(2..))]
        samples: u64,

        /// Base random seed (each grid point derives its own).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Audit geometries against the 2π supremum; exits 1 on violation.
    Audit {
        /// Audit this document instead of the built-in corpus.
        #[arg(long, value_name = "FILE")]
        pair: Option<PathBuf>,

        /// Samples per Monte Carlo audit entry.
        #[arg(long, default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(2..))]
        samples: u64,

        /// Random seed for Monte Carlo audit entries.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Closed-form corner sums (box-union pairs on a coordinate axis).
    Analytic,
    /// Monte Carlo sampling (any pair).
    Mc,
    /// Analytic where exact evaluation applies, Monte Carlo otherwise.
    Auto,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// CLI failures carrying their exit code class: usage problems exit 3,
/// core errors exit 3 for document parse failures and 2 otherwise.
enum Failure {
    Usage(String),
    Core(Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 3,
            Failure::Core(Error::Document(_)) => 3,
            Failure::Core(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here too and must exit 0.
            let usage = !matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if usage { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let timestamp = if cli.no_timestamp {
        None
    } else {
        Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    };
    let render = |json: String, csv: String| match cli.format {
        Format::Json => json,
        Format::Csv => csv,
    };

    let (text, code) = match cli.command {
        Command::Eval {
            pair,
            method,
            samples,
            seed,
        } => {
            let parsed = load_pair(&pair)?;
            let record = evaluate(&parsed, method, samples, seed)?;
            (render(record.json(timestamp), record.csv(timestamp)), 0)
        }
        Command::Comb {
            tooth_height,
            slab_thickness,
            teeth,
            grid,
        } => {
            if let Some(spec) = &grid {
                let (thicknesses, teeth_counts) = parse_comb_grid(spec)?;
                let rows = comb_convergence(tooth_height, &thicknesses, &teeth_counts)?;
                let record = TableRecord::closed_form(rows);
                (render(record.json(timestamp), record.csv(timestamp)), 0)
            } else {
                // clap guarantees both are present without --grid.
                let slab_thickness = slab_thickness.expect("required by clap");
                let teeth = teeth.expect("required by clap");
                let p = CombParams::new(tooth_height, slab_thickness, teeth)?;
                let parts = comb_integrals(p)?;
                let record = CombRecord {
                    tooth_height,
                    slab_thickness,
                    teeth,
                    i1: parts.i1,
                    i2: parts.i2,
                    i3: parts.i3,
                    i4: parts.i4,
                    lambda: comb_lambda(p)?,
                    method: Method::Analytic.as_str(),
                };
                (render(record.json(timestamp), record.csv(timestamp)), 0)
            }
        }
        Command::SlabLimit { heights } => {
            let heights = heights.unwrap_or_else(|| DEFAULT_SLAB_HEIGHTS.to_vec());
            let record = TableRecord::closed_form(slab_limit_scan(&heights)?);
            (render(record.json(timestamp), record.csv(timestamp)), 0)
        }
        Command::Lattice { cutoff } => {
            let record = LatticeRecord {
                cutoff,
                sum: lattice_sum(cutoff)?,
                toy_lambda: toy_lambda(cutoff)?,
                method: Method::ClosedForm.as_str(),
            };
            (render(record.json(timestamp), record.csv(timestamp)), 0)
        }
        Command::SphereCurve { grid } => {
            let ratios = grid.unwrap_or_else(|| DEFAULT_SPHERE_RATIOS.to_vec());
            let record = TableRecord::closed_form(sphere_curve(&ratios)?);
            (render(record.json(timestamp), record.csv(timestamp)), 0)
        }
        Command::CylinderSweep {
            grid,
            samples,
            seed,
        } => {
            let (radii, heights, gaps) = match &grid {
                Some(spec) => parse_sweep_grid(spec)?,
                None => (
                    DEFAULT_CYLINDER_RADII.to_vec(),
                    DEFAULT_CYLINDER_HEIGHTS.to_vec(),
                    DEFAULT_CYLINDER_GAP_FRACTIONS.to_vec(),
                ),
            };
            let (best, rows) = cylinder_sweep(&radii, &heights, &gaps, samples, seed)?;
            let record = TableRecord {
                rows,
                best: Some(best),
                samples: Some(samples),
                seed: Some(seed),
            };
            (render(record.json(timestamp), record.csv(timestamp)), 0)
        }
        Command::Audit {
            pair,
            samples,
            seed,
        } => {
            let corpus = match &pair {
                Some(path) => {
                    let parsed = load_pair(path)?;
                    let name = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "document".to_string());
                    vec![(name, Ok(parsed))]
                }
                None => default_audit_corpus(),
            };
            let report = bound_audit(corpus, samples, seed);
            let clean = report.all_pass && report.invalid.is_empty();
            let record = AuditRecord {
                report,
                samples,
                seed,
            };
            (
                render(record.json(timestamp), record.csv(timestamp)),
                if clean { 0 } else { 1 },
            )
        }
    };

    write_output(&text, cli.out.as_deref())?;
    Ok(code)
}

fn load_pair(path: &Path) -> Result<GeometryPair, Failure> {
    let json = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_pair_document(&json)?)
}

fn evaluate(
    pair: &GeometryPair,
    method: MethodArg,
    samples: u64,
    seed: u64,
) -> Result<EvalRecord, Failure> {
    let direction = pair.direction();
    let axis = Axis::of_direction(direction);
    let analytic_capable = is_box_union_pair(pair) && axis.is_some();
    let use_analytic = match method {
        MethodArg::Analytic => true,
        MethodArg::Mc => false,
        MethodArg::Auto => analytic_capable,
    };
    let record = if use_analytic {
        let axis = axis.ok_or_else(|| {
            Failure::Core(Error::Domain {
                op: "eval",
                message: "analytic method requires a coordinate-axis direction".to_string(),
            })
        })?;
        EvalRecord {
            lambda: lambda_box_union(pair, axis)?,
            std_error: None,
            method: Method::Analytic.as_str(),
            seed: None,
            samples: None,
            redraws: None,
            direction: [direction.x, direction.y, direction.z],
            volume: pair.volume(),
        }
    } else {
        let est = mc_lambda(pair, samples, seed)?;
        EvalRecord {
            lambda: est.value,
            std_error: Some(est.std_error),
            method: Method::MonteCarlo.as_str(),
            seed: Some(seed),
            samples: Some(est.samples),
            redraws: Some(est.redraws),
            direction: [direction.x, direction.y, direction.z],
            volume: pair.volume(),
        }
    };
    Ok(record)
}

fn parse_grid_list<T: std::str::FromStr>(part: &str, what: &str) -> Result<Vec<T>, Failure> {
    let values: Vec<T> = part
        .split(',')
        .map(|tok| {
            tok.trim().parse::<T>().map_err(|_| {
                Failure::Usage(format!("--grid {what} list: `{tok}` is not a valid value"))
            })
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(Failure::Usage(format!("--grid {what} list is empty")));
    }
    Ok(values)
}

fn split_grid<'s, const N: usize>(spec: &'s str, shape: &str) -> Result<[&'s str; N], Failure> {
    let parts: Vec<&str> = spec.split(';').collect();
    parts.try_into().map_err(|_| {
        Failure::Usage(format!(
            "--grid needs {shape} ({N} ';'-separated lists)"
        ))
    })
}

fn parse_comb_grid(spec: &str) -> Result<(Vec<f64>, Vec<u32>), Failure> {
    let [thicknesses, teeth] = split_grid(spec, "thicknesses;teeth-counts")?;
    Ok((
        parse_grid_list(thicknesses, "slab-thickness")?,
        parse_grid_list(teeth, "teeth-count")?,
    ))
}

fn parse_sweep_grid(spec: &str) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), Failure> {
    let [radii, heights, gaps] = split_grid(spec, "radii;heights;gap-fractions")?;
    Ok((
        parse_grid_list(radii, "radius")?,
        parse_grid_list(heights, "height")?,
        parse_grid_list(gaps, "gap-fraction")?,
    ))
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
