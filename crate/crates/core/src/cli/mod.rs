//! The `shadowlab` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable or invalid
//! input), 3 numerical contract violation.

pub mod io;
pub mod registry;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dynamics::{self, Period, TimeConvention};
use crate::error::{Error, Result};
use crate::normalize::{natural_rescale, normalization_constants};
use crate::randshadow::{self, ks_test, phase_to_unit};
use crate::range::{self, boundary, flat_parts, radius_bound};
use crate::sampling::PureState;
use crate::shadow::{self, cross_section_from_strip, GridSpec, Line, ShadowHistogram, Source};
use crate::{Matrix, C64};

use io::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "shadowlab", version, about = "Numerical ranges and numerical shadows of complex matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct MatrixArg {
    /// Matrix file ({"n": N, "rows": [[[re, im], ...], ...]}).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Registered matrix name (see `selftest --list`).
    #[arg(long)]
    builtin: Option<String>,
}

impl MatrixArg {
    fn load(&self) -> Result<Matrix> {
        match (&self.matrix, &self.builtin) {
            (Some(p), _) => io::read_matrix_file(p),
            (None, Some(name)) => {
                registry::builtin(name).ok_or_else(|| Error::Parse(format!("unknown builtin matrix '{name}'")))
            }
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Pgm,
    Json,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Histogram bins as RExIM, e.g. 256x256.
    #[arg(long, default_value = "256x256", value_parser = parse_bins)]
    bins: (usize, usize),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker streams; results depend on (seed, threads) only.
    #[arg(long, env = "SHADOWLAB_THREADS")]
    threads: Option<usize>,
    /// Output prefix for PREFIX.csv, PREFIX.pgm and PREFIX.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Files to write (JSON metadata is always written with --out).
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
    /// Cross-section "x0,y0,dx,dy,halfwidth" written to PREFIX.section.csv.
    #[arg(long, value_parser = parse_section)]
    section: Option<(C64, C64, f64)>,
    #[arg(long, default_value_t = 100)]
    section_bins: usize,
    /// Log-scaled PGM.
    #[arg(long)]
    log: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Density,
    Unitary,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boundary of the numerical range: CSV "theta,h,re,im" and a JSON summary.
    Range {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, default_value_t = range::DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pure-state numerical shadow histogram.
    Shadow {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Shadow over the induced measure with ancilla dimension K.
    MixedShadow {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        ancilla: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Normalization constants and the natural-size form.
    Normalize {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Write the frame matrices to PREFIX.v1.json and PREFIX.v2.json.
        #[arg(long)]
        frame: Option<PathBuf>,
    },
    /// Trajectory z(t) under exp(-iHt): CSV "t,re,im".
    Dynamics {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Builtin name or matrix file.
        #[arg(long, default_value = "H21")]
        hamiltonian: String,
        /// Initial state as "re,im,re,im,..." (normalized on input); default |0>.
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Use exp(-iHt) A exp(iHt) instead of exp(iHt) A exp(-iHt).
        #[arg(long)]
        reversed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimensions of X_A and H_A.
    Spaces {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Include the basis matrices.
        #[arg(long)]
        basis: bool,
    },
    /// Monte Carlo check of a random-matrix shadow law.
    RandLaw {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "SHADOWLAB_THREADS")]
        threads: Option<usize>,
    },
    /// Fast invariant checks.
    Selftest {
        /// Print the registered matrix names and exit.
        #[arg(long)]
        list: bool,
    },
}

fn parse_bins(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected RExIM, got '{s}'"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("bad bin count '{a}': {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("bad bin count '{b}': {e}"))?;
    if a == 0 || b == 0 {
        return Err("bin counts must be positive".into());
    }
    Ok((a, b))
}

fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad number '{x}': {e}"))).collect()
}

fn parse_section(s: &str) -> std::result::Result<(C64, C64, f64), String> {
    let v = parse_floats(s)?;
    let [x0, y0, dx, dy, hw] = v[..] else {
        return Err(format!("expected x0,y0,dx,dy,halfwidth, got '{s}'"));
    };
    if hw.is_nan() || hw <= 0.0 || (dx == 0.0 && dy == 0.0) {
        return Err("section needs a nonzero direction and positive half-width".into());
    }
    Ok((C64::new(x0, y0), C64::new(dx, dy), hw))
}

fn parse_state(s: &str, n: usize) -> Result<PureState<f64>> {
    let v = parse_floats(s).map_err(Error::Parse)?;
    if v.len() != 2 * n {
        return Err(Error::dim(format!("state needs {} numbers (re,im pairs), got {}", 2 * n, v.len())));
    }
    PureState::new(v.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
}

fn thread_count(requested: Option<usize>) -> usize {
    requested.filter(|&t| t > 0).unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(a: &Matrix) -> Value {
    serde_json::from_str(&io::matrix_to_json(a)).expect("valid JSON")
}

struct Context {
    args: Vec<String>,
    subcommand: &'static str,
}

impl Context {
    fn manifest(&self, seed: Option<u64>, threads: usize, matrix: Option<&Matrix>) -> RunManifest {
        RunManifest {
            subcommand: self.subcommand.to_string(),
            args: self.args.clone(),
            seed,
            threads,
            matrix_sha256: matrix.map(io::matrix_hash),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(Error::from)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes") + "\n"
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    let result = dispatch(cli.command, args, out);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Contract(_) => EXIT_CONTRACT,
                _ => EXIT_DATA,
            }
        }
    }
}

fn dispatch(cmd: Command, args: Vec<String>, out: &mut dyn Write) -> Result<i32> {
    let sub = match &cmd {
        Command::Range { .. } => "range",
        Command::Shadow { .. } => "shadow",
        Command::MixedShadow { .. } => "mixed-shadow",
        Command::Normalize { .. } => "normalize",
        Command::Dynamics { .. } => "dynamics",
        Command::Spaces { .. } => "spaces",
        Command::RandLaw { .. } => "rand-law",
        Command::Selftest { .. } => "selftest",
    };
    let ctx = Context { args, subcommand: sub };
    match cmd {
        Command::Range { matrix, resolution, out: prefix } => cmd_range(&ctx, &matrix.load()?, resolution, prefix, out),
        Command::Shadow { matrix, sampling } => cmd_shadow(&ctx, &matrix.load()?, None, &sampling, out),
        Command::MixedShadow { matrix, ancilla, sampling } => {
            if ancilla == 0 {
                return Err(Error::Domain("--ancilla must be at least 1".into()));
            }
            cmd_shadow(&ctx, &matrix.load()?, Some(ancilla), &sampling, out)
        }
        Command::Normalize { matrix, frame } => cmd_normalize(&ctx, &matrix.load()?, frame, out),
        Command::Dynamics { matrix, hamiltonian, state, tmax, steps, reversed, out: prefix } => {
            let a = matrix.load()?;
            let h = io::parse_matrix(&hamiltonian)?;
            let psi = match state {
                Some(s) => parse_state(&s, a.order())?,
                None => PureState::basis(a.order(), 0)?,
            };
            let conv = if reversed { TimeConvention::Reversed } else { TimeConvention::Forward };
            cmd_dynamics(&ctx, &a, &h, &psi, tmax, steps, conv, prefix, out)
        }
        Command::Spaces { matrix, basis } => cmd_spaces(&ctx, &matrix.load()?, basis, out),
        Command::RandLaw { which, n, k, samples, seed, threads } => {
            cmd_rand_law(&ctx, which, n, k, samples, seed, thread_count(threads), out)
        }
        Command::Selftest { list } => {
            if list {
                for n in registry::names() {
                    writeln!(out, "{n}")?;
                }
                return Ok(EXIT_OK);
            }
            selftest(out)
        }
    }
}

fn cmd_range(ctx: &Context, a: &Matrix, m: usize, prefix: Option<PathBuf>, out: &mut dyn Write) -> Result<i32> {
    let b = boundary(a, m)?;
    let flats = flat_parts(a, &b);
    let n = a.order();
    let bary = a.trace() / n as f64;
    let summary = json!({
        "flat_parts": flats.len(),
        "flats": flats.iter().map(|f| json!({
            "normal_angle": f.normal_angle,
            "start": complex_json(f.start),
            "end": complex_json(f.end),
        })).collect::<Vec<_>>(),
        "barycenter": complex_json(bary),
        "radius_bound": radius_bound(n),
        "max_radius": b.max_distance_from(bary),
        "resolution": m,
        "manifest": ctx.manifest(None, 1, Some(a)),
    });
    let mut csv = String::from("theta,h,re,im\n");
    for k in 0..b.len() {
        csv += &format!("{},{},{},{}\n", b.angles[k], b.support_values[k], b.points[k].re, b.points[k].im);
    }
    match prefix {
        Some(p) => {
            write_file(&with_suffix(&p, "csv"), csv.as_bytes())?;
            write_file(&with_suffix(&p, "json"), pretty(&summary).as_bytes())?;
            out.write_all(pretty(&summary).as_bytes())?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn histogram_json(h: &ShadowHistogram) -> Value {
    let cov = h.moments.covariance();
    json!({
        "box": [h.re_min, h.re_max, h.im_min, h.im_max],
        "bins": [h.bins_re, h.bins_im],
        "samples": h.samples,
        "outside": h.outside,
        "segment": h.segment.map(|(s, e)| json!([complex_json(s), complex_json(e)])),
        "moments": {
            "mean": complex_json(h.moments.mean()),
            "covariance": cov,
        },
    })
}

fn cmd_shadow(ctx: &Context, a: &Matrix, ancilla: Option<usize>, s: &SamplingArgs, out: &mut dyn Write) -> Result<i32> {
    let threads = thread_count(s.threads);
    let grid = GridSpec { bins_re: s.bins.0, bins_im: s.bins.1, bounds: None };
    let h = match ancilla {
        None => shadow::pure_shadow(a, s.samples, &grid, s.seed, threads)?,
        Some(k) => shadow::mixed_shadow(a, k, s.samples, &grid, s.seed, threads)?,
    };
    let b = boundary(a, range::DEFAULT_RESOLUTION)?;
    let contract = h.check_support(&b, 1e-8);

    let mut meta = histogram_json(&h);
    meta["seed"] = json!(s.seed);
    meta["threads"] = json!(threads);
    meta["matrix_sha256"] = json!(io::matrix_hash(a));
    if let Some(k) = ancilla {
        meta["ancilla"] = json!(k);
    }
    meta["support_check"] = json!(contract.is_ok());
    meta["manifest"] = serde_json::to_value(ctx.manifest(Some(s.seed), threads, Some(a))).expect("manifest serializes");

    let section = match s.section {
        Some((p, d, hw)) => {
            let line = Line::new(p, d)?;
            let source = match ancilla {
                None => Source::Pure(a),
                Some(k) => Source::Mixed(a, k),
            };
            let coords = shadow::sample_strip(source, &line, hw, s.samples, s.seed, threads)?;
            let cs = cross_section_from_strip(&coords, s.samples as u64, &line, hw, s.section_bins, None)?;
            meta["section"] = json!({
                "point": complex_json(p),
                "direction": complex_json(line.direction),
                "half_width": hw,
                "strip_samples": cs.strip_samples(),
                "bins": s.section_bins,
            });
            Some(cs)
        }
        None => None,
    };

    match &s.out {
        Some(prefix) => {
            let formats =
                if s.format.is_empty() { vec![Format::Csv, Format::Pgm, Format::Json] } else { s.format.clone() };
            if formats.contains(&Format::Csv) {
                write_file(&with_suffix(prefix, "csv"), io::histogram_csv(&h).as_bytes())?;
            }
            if formats.contains(&Format::Pgm) {
                write_file(&with_suffix(prefix, "pgm"), &io::histogram_pgm(&h, s.log))?;
            }
            if let Some(cs) = &section {
                write_file(&with_suffix(prefix, "section.csv"), io::section_csv(cs).as_bytes())?;
            }
            write_file(&with_suffix(prefix, "json"), pretty(&meta).as_bytes())?;
        }
        None => out.write_all(pretty(&meta).as_bytes())?,
    }
    contract?;
    Ok(EXIT_OK)
}

fn cmd_normalize(ctx: &Context, a: &Matrix, frame: Option<PathBuf>, out: &mut dyn Write) -> Result<i32> {
    let f = normalization_constants(a)?;
    let natural = natural_rescale(a)?;
    let mut v = serde_json::to_value(f.constants()).expect("constants serialize");
    v["trace_over_n"] = complex_json(f.shift);
    v["frame_residual"] = json!(crate::normalize::frame_residual(&f));
    v["natural"] = matrix_json(&natural);
    v["natural_alpha"] = json!(normalization_constants(&natural)?.alpha);
    v["manifest"] = serde_json::to_value(ctx.manifest(None, 1, Some(a))).expect("manifest serializes");
    if let Some(p) = frame {
        write_file(&with_suffix(&p, "v1.json"), io::matrix_to_json(&f.v1).as_bytes())?;
        write_file(&with_suffix(&p, "v2.json"), io::matrix_to_json(&f.v2).as_bytes())?;
    }
    out.write_all(pretty(&v).as_bytes())?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_dynamics(
    ctx: &Context,
    a: &Matrix,
    h: &Matrix,
    psi: &PureState<f64>,
    tmax: f64,
    steps: usize,
    conv: TimeConvention,
    prefix: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    if !h.is_hermitian(1e-12) {
        return Err(Error::Domain("Hamiltonian is not Hermitian".into()));
    }
    let times = dynamics::time_grid(tmax, steps);
    let tr = dynamics::trajectory_with(a, h, psi, &times, conv)?;
    let b = boundary(a, range::DEFAULT_RESOLUTION)?;
    if let Some(z) = tr.points.iter().find(|&&z| !range::contains(&b, z, 1e-8)) {
        return Err(Error::Contract(format!("trajectory point {z} lies outside W(A)")));
    }
    let mut csv = String::from("t,re,im\n");
    for (t, z) in tr.times.iter().zip(&tr.points) {
        csv += &format!("{t},{},{}\n", z.re, z.im);
    }
    match prefix {
        Some(p) => {
            let period = match dynamics::period(h, 1e-9)? {
                Period::Constant => json!("constant"),
                Period::Periodic(t) => json!(t),
                Period::Aperiodic => json!("aperiodic"),
            };
            let meta = json!({
                "period": period,
                "convention": if conv == TimeConvention::Forward { "forward" } else { "reversed" },
                "hamiltonian_sha256": io::matrix_hash(h),
                "manifest": ctx.manifest(None, 1, Some(a)),
            });
            write_file(&with_suffix(&p, "csv"), csv.as_bytes())?;
            write_file(&with_suffix(&p, "json"), pretty(&meta).as_bytes())?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_spaces(ctx: &Context, a: &Matrix, basis: bool, out: &mut dyn Write) -> Result<i32> {
    let s = dynamics::trajectory_spaces(a);
    let mut v = json!({
        "dim_xa": s.dim_xa,
        "dim_ha": s.dim_ha,
        "d_a": s.d_a,
        "manifest": ctx.manifest(None, 1, Some(a)),
    });
    if basis {
        v["xa_basis"] = json!(s.xa_basis.iter().map(matrix_json).collect::<Vec<_>>());
        v["ha_basis"] = json!(s.ha_basis.iter().map(matrix_json).collect::<Vec<_>>());
    }
    out.write_all(pretty(&v).as_bytes())?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_rand_law(
    ctx: &Context,
    which: Which,
    n: usize,
    k: usize,
    samples: usize,
    seed: u64,
    threads: usize,
    out: &mut dyn Write,
) -> Result<i32> {
    if samples < 10 {
        return Err(Error::Domain("rand-law needs at least 10 samples".into()));
    }
    let (law, draws, phase_ks) = match which {
        Which::Density => {
            let law = randshadow::density_diag_law(n, k)?;
            (law, randshadow::sample_density_diag(n, k, samples, seed, threads)?, None)
        }
        Which::Unitary => {
            let law = randshadow::unitary_overlap_law(n)?;
            let corner = randshadow::sample_unitary_corner(n, samples, seed, threads)?;
            let phases: Vec<f64> = corner.iter().map(|&z| phase_to_unit(z)).collect();
            let pk = ks_test(&phases, |x| x.clamp(0.0, 1.0))?.statistic;
            (law, corner.iter().map(|z| z.norm_sqr()).collect(), Some(pk))
        }
    };
    let ks = ks_test(&draws, |r| law.cdf(r.clamp(0.0, 1.0)).unwrap_or(f64::NAN))?.statistic;
    let threshold = randshadow::ks_threshold(samples);
    let pass = ks < threshold && phase_ks.is_none_or(|p| p < threshold);
    let v = json!({
        "law": law,
        "ks_statistic": ks,
        "phase_ks_statistic": phase_ks,
        "threshold": threshold,
        "pass": pass,
        "manifest": ctx.manifest(Some(seed), threads, None),
    });
    out.write_all(pretty(&v).as_bytes())?;
    Ok(if pass { EXIT_OK } else { EXIT_CONTRACT })
}

/// Fast invariant suite; one line per check.
fn selftest(out: &mut dyn Write) -> Result<i32> {
    let mut failed = 0;
    let mut report = |name: &str, ok: bool, detail: String| -> Result<()> {
        if !ok {
            failed += 1;
        }
        writeln!(out, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" })?;
        Ok(())
    };

    let worst_alpha = registry::natural_size_names()
        .iter()
        .map(|n| normalization_constants(&registry::builtin(n).expect("registered")).map(|f| (f.alpha - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report("natural size", worst_alpha < 1e-12, format!("max |alpha - 1| = {worst_alpha:.3e}"))?;

    let counts: Vec<usize> = (0..4)
        .map(|k| {
            let a = registry::builtin(&format!("A3_{k}")).expect("registered");
            boundary(&a, 2048).map(|b| flat_parts(&a, &b).len())
        })
        .collect::<Result<_>>()?;
    report("qutrit flat parts", counts == [0, 1, 2, 3], format!("{counts:?}"))?;

    let a20 = registry::builtin("A2_0").expect("registered");
    let e = range::ellipse_2x2(&a20)?;
    let hd = boundary(&a20, 1024)?.support_distance(|t| e.support(t));
    report(
        "qubit ellipse",
        hd < 1e-8 && (0.5 * e.major_axis - 0.5f64.sqrt()).abs() < 1e-10,
        format!("support distance {hd:.3e}, semi-major {}", 0.5 * e.major_axis),
    )?;

    let a30 = registry::builtin("A3_0").expect("registered");
    let xs = shadow::shadow_samples(Source::Pure(&a30), 20_000, 1, 2)?;
    let b = boundary(&a30, 720)?;
    let inside = xs.iter().all(|&z| range::contains(&b, z, 1e-8));
    report("shadow support", inside, format!("{} samples", xs.len()))?;

    let d = Matrix::from_real_diag(&[0.0, 1.0]);
    let xs = shadow::shadow_samples(Source::Pure(&d), 100_000, 2, 2)?;
    let ks = ks_test(&xs.iter().map(|z| z.re).collect::<Vec<_>>(), |x| x.clamp(0.0, 1.0))?.statistic;
    report("uniform interval", ks < 0.01, format!("KS {ks:.4}"))?;

    let law = randshadow::density_diag_law(3, 3)?;
    let draws = randshadow::sample_density_diag(3, 3, 50_000, 3, 2)?;
    let ks = ks_test(&draws, |r| law.cdf(r.clamp(0.0, 1.0)).unwrap_or(f64::NAN))?.statistic;
    report("induced diagonal law", ks < randshadow::ks_threshold(50_000), format!("KS {ks:.4}"))?;

    let s = dynamics::trajectory_spaces(&a30);
    report("generic X_A dimension", s.dim_xa == 6, format!("dim X_A = {}", s.dim_xa))?;

    let p = dynamics::period(&Matrix::from_real_diag(&[0.0, 2.0, 6.0]), 1e-9)?;
    report("period", matches!(p, Period::Periodic(t) if (t - std::f64::consts::PI).abs() < 1e-12), format!("{p:?}"))?;

    Ok(if failed == 0 { EXIT_OK } else { EXIT_CONTRACT })
}
