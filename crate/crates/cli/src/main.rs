//! `fracspec`: command-line access to the spectral toolkit.
//!
//! Data goes to stdout or, with `--output`, to a file written atomically.
//! Failures print one JSON object on stderr. Exit codes: 0 ok, 2 usage, 3 numerical.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use fracspec::crossover::crossover_experiment;
use fracspec::grid::GridSpec;
use fracspec::oscillation_fit::{fit_log_periodic, FitOptions};
use fracspec::series::{read_trace_csv, write_table, write_trace_csv};
use fracspec::thermo::{thermo_sweep, HIGH_TEMPERATURE_RATIO};
use fracspec::traces::{
    heat_trace_asymptotic_diamond, heat_trace_series, poisson_trace_series, weierstrass_direct_tail, weierstrass_s,
    PoissonMethod, WeierstrassMode,
};
use fracspec::zeta::{find_poles, trace_from_poles, zeta_eval, zeta_from_trace};
use fracspec::{Error, SpectralModel, SpectrumStream, Strip, TraceMethod, TraceSeries};

#[derive(Parser)]
#[command(name = "fracspec", version, about = "Spectral functions of diamond fractals and reference spectra")]
struct Cli {
    /// Absolute tolerance for series truncation and quadrature.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Output format; tables default to csv, records to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PoissonArg {
    Direct,
    Transform,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZetaArg {
    Closed,
    Mellin,
}

#[derive(Subcommand)]
enum Command {
    /// Hausdorff, walk and spectral dimensions.
    Dims {
        #[arg(long)]
        model: SpectralModel,
    },
    /// The first eigenvalue families of a model.
    Spectrum {
        #[arg(long)]
        model: SpectralModel,
        #[arg(long, default_value_t = 10)]
        families: usize,
    },
    /// Heat-kernel trace K(t) on a grid.
    HeatTrace {
        #[arg(long)]
        model: SpectralModel,
        #[arg(long)]
        t_grid: GridSpec,
        /// exact | asymptotic(M)
        #[arg(long, default_value = "exact")]
        method: TraceMethod,
    },
    /// Poisson-kernel trace P(t) on a grid.
    PoissonTrace {
        #[arg(long)]
        model: SpectralModel,
        #[arg(long)]
        t_grid: GridSpec,
        #[arg(long, value_enum, default_value = "direct")]
        method: PoissonArg,
    },
    /// Weierstrass sum S(t) = sum a^n cos(b^n t).
    Weierstrass {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        t_grid: GridSpec,
        /// direct(N) | expansion(K)
        #[arg(long, default_value = "direct(60)")]
        method: TraceMethod,
    },
    /// Spectral zeta function at one point.
    ZetaEval {
        #[arg(long)]
        model: SpectralModel,
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
        #[arg(long, value_enum, default_value = "closed")]
        method: ZetaArg,
    },
    /// Poles and residues inside a strip re_min:re_max:im_min:im_max.
    Poles {
        #[arg(long)]
        model: SpectralModel,
        #[arg(long, allow_hyphen_values = true)]
        strip: Strip,
    },
    /// Log-periodic fit of a trace CSV.
    FitOsc {
        #[arg(long)]
        input: PathBuf,
        /// Spectral dimension; defaults to the model's when --model is given.
        #[arg(long)]
        d_s: Option<f64>,
        /// Supplies d_s and the frequency hint.
        #[arg(long)]
        model: Option<SpectralModel>,
        #[arg(long)]
        omega_hint: Option<f64>,
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// High-temperature thermodynamics over ratios L_s/L_beta.
    Thermo {
        #[arg(long)]
        model: SpectralModel,
        /// Single ratios; may be repeated.
        #[arg(long)]
        ratio: Vec<f64>,
        /// Grid of ratios.
        #[arg(long)]
        grid: Option<GridSpec>,
    },
    /// Finite-iteration diamonds across the fractal and 1D regimes.
    Crossover {
        /// diamond:m,l
        #[arg(long)]
        model: SpectralModel,
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<u32>,
        #[arg(long)]
        t_grid: GridSpec,
    },
}

struct Context {
    tol: f64,
    format: Option<Format>,
}

impl Context {
    fn tabular(&self) -> bool {
        self.format != Some(Format::Json)
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Error> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    buf.push(b'\n');
    Ok(buf)
}

fn series_output(ctx: &Context, series: &TraceSeries) -> Result<Vec<u8>, Error> {
    if ctx.tabular() {
        let mut buf = Vec::new();
        write_trace_csv(series, &mut buf)?;
        Ok(buf)
    } else {
        #[derive(Serialize)]
        struct Row {
            t: f64,
            value: f64,
            method: String,
            tail_bound: f64,
        }
        let method = series.method.to_string();
        let rows: Vec<Row> = (0..series.len())
            .map(|i| Row { t: series.t[i], value: series.values[i], method: method.clone(), tail_bound: series.tail_bound[i] })
            .collect();
        json(&rows)
    }
}

fn table_output(ctx: &Context, header: &[&str], rows: &[Vec<f64>]) -> Result<Vec<u8>, Error> {
    if ctx.tabular() {
        let mut buf = Vec::new();
        write_table(header, rows, &mut buf)?;
        Ok(buf)
    } else {
        let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
            .iter()
            .map(|row| header.iter().zip(row).map(|(h, v)| (h.to_string(), serde_json::json!(v))).collect())
            .collect();
        json(&objects)
    }
}

fn heat_trace(ctx: &Context, model: SpectralModel, grid: &GridSpec, method: TraceMethod) -> Result<Vec<u8>, Error> {
    let spec = SpectrumStream::new(model)?;
    let t = grid.points();
    let series = match method {
        TraceMethod::Exact => heat_trace_series(&spec, &t, ctx.tol)?,
        TraceMethod::Asymptotic(m) => {
            let values = t
                .iter()
                .map(|&t| match model {
                    SpectralModel::Diamond(p) => heat_trace_asymptotic_diamond(p, t, m),
                    _ => trace_from_poles(&model, t, m),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let n = t.len();
            TraceSeries::new(t, values, method, vec![0.0; n])?
        }
        other => return Err(Error::Parse(format!("heat-trace supports exact and asymptotic(M), not {other}"))),
    };
    series_output(ctx, &series)
}

fn weierstrass(ctx: &Context, a: f64, b: f64, grid: &GridSpec, method: TraceMethod) -> Result<Vec<u8>, Error> {
    let (mode, bound) = match method {
        TraceMethod::Direct(n) => (WeierstrassMode::Direct(n), weierstrass_direct_tail(a, n)),
        TraceMethod::Expansion(k) => (WeierstrassMode::Expansion(k), 0.0),
        other => return Err(Error::Parse(format!("weierstrass supports direct(N) and expansion(K), not {other}"))),
    };
    let t = grid.points();
    let values = t.iter().map(|&t| weierstrass_s(a, b, t, mode)).collect::<Result<Vec<_>, _>>()?;
    let n = t.len();
    series_output(ctx, &TraceSeries::new(t, values, method, vec![bound; n])?)
}

fn poles(model: SpectralModel, strip: &Strip) -> Result<Vec<u8>, Error> {
    #[derive(Serialize)]
    struct PoleRecord {
        re: f64,
        im: f64,
        residue_re: f64,
        residue_im: f64,
        tower_index: i64,
        source: String,
    }
    let records: Vec<PoleRecord> = find_poles(&model, strip)?
        .into_iter()
        .map(|p| PoleRecord {
            re: p.location.re,
            im: p.location.im,
            residue_re: p.residue.re,
            residue_im: p.residue.im,
            tower_index: p.tower_index,
            source: p.source.to_string(),
        })
        .collect();
    json(&records)
}

fn zeta(ctx: &Context, model: SpectralModel, s: Complex64, method: ZetaArg) -> Result<Vec<u8>, Error> {
    let value = match method {
        ZetaArg::Closed => zeta_eval(&model, s)?,
        ZetaArg::Mellin => zeta_from_trace(&SpectrumStream::new(model)?, s, ctx.tol)?,
    };
    json(&serde_json::json!({ "model": model.to_string(), "s_re": s.re, "s_im": s.im, "re": value.re, "im": value.im }))
}

#[allow(clippy::too_many_arguments)]
fn fit_osc(
    input: &Path,
    d_s: Option<f64>,
    model: Option<SpectralModel>,
    omega_hint: Option<f64>,
    t_min: Option<f64>,
    t_max: Option<f64>,
) -> Result<Vec<u8>, Error> {
    let series = read_trace_csv(BufReader::new(File::open(input).map_err(|e| {
        Error::Io(format!("{}: {e}", input.display()))
    })?))?;
    let d_s = d_s
        .or(model.map(|m| m.spectral_dimension()))
        .ok_or_else(|| Error::Parse("fit-osc needs --d-s or --model".into()))?;
    let omega_hint = omega_hint.or(model.and_then(|m| m.log_frequency()));
    let window = match (t_min, t_max) {
        (None, None) => None,
        (lo, hi) => Some((lo.unwrap_or(0.0), hi.unwrap_or(f64::INFINITY))),
    };
    json(&fit_log_periodic(&series, d_s, FitOptions { omega_hint, window })?)
}

fn thermo(ctx: &Context, model: SpectralModel, ratio: &[f64], grid: Option<GridSpec>) -> Result<Vec<u8>, Error> {
    let mut ratios = ratio.to_vec();
    if let Some(g) = grid {
        ratios.extend(g.points());
    }
    if ratios.is_empty() {
        return Err(Error::Parse("thermo needs --ratio or --grid".into()));
    }
    let spec = SpectrumStream::new(model)?;
    let states = thermo_sweep(&spec, &ratios, ctx.tol)?;
    for s in states.iter().filter(|s| s.ratio() < HIGH_TEMPERATURE_RATIO) {
        let warning = Error::RegimeWarning { ratio: s.ratio(), defect: s.eos_defect };
        eprintln!(
            "{}",
            serde_json::json!({ "warning": warning.kind(), "message": warning.to_string(), "ratio": s.ratio(), "defect": s.eos_defect })
        );
    }
    let rows: Vec<Vec<f64>> = states.iter().map(|s| vec![s.ratio(), s.ln_z_thermal, s.u, s.p, s.v_s, s.eos_defect]).collect();
    table_output(ctx, &["ratio", "lnZ", "U", "P", "V_s", "eos_defect"], &rows)
}

fn crossover(ctx: &Context, model: SpectralModel, levels: &[u32], grid: &GridSpec) -> Result<Vec<u8>, Error> {
    let SpectralModel::Diamond(p) = model else {
        return Err(Error::Parse(format!("crossover needs an infinite diamond model, got {model}")));
    };
    let runs = crossover_experiment(p, levels, &grid.points(), ctx.tol.max(1e-10))?;
    if !ctx.tabular() {
        return json(&runs);
    }
    let mut rows = Vec::new();
    for run in &runs {
        for i in 0..run.t.len() {
            rows.push(vec![
                f64::from(run.iterations),
                run.t[i],
                run.trace[i],
                run.fractal_ratio[i],
                run.one_d_ratio[i],
                run.t_c,
            ]);
        }
    }
    table_output(ctx, &["N", "t", "K_N", "ratio_fractal", "ratio_1d", "t_c"], &rows)
}

fn execute(cli: &Cli) -> Result<Vec<u8>, Error> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(Error::Parse(format!("--tol must lie in (0, 1), got {}", cli.tol)));
    }
    let ctx = Context { tol: cli.tol, format: cli.format };
    match &cli.command {
        Command::Dims { model } => {
            model.validate()?;
            json(&model.dimensions())
        }
        Command::Spectrum { model, families } => {
            let spec = SpectrumStream::new(*model)?;
            let rows: Vec<Vec<f64>> = spec
                .families()
                .take(*families)
                .map(|f| vec![f.index() as f64, f.lowest(), f.degeneracy, if f.harmonic { 1.0 } else { 0.0 }])
                .collect();
            table_output(&ctx, &["index", "lowest_eigenvalue", "degeneracy", "harmonic"], &rows)
        }
        Command::HeatTrace { model, t_grid, method } => heat_trace(&ctx, *model, t_grid, *method),
        Command::PoissonTrace { model, t_grid, method } => {
            let method = match method {
                PoissonArg::Direct => PoissonMethod::Direct,
                PoissonArg::Transform => PoissonMethod::Transform,
            };
            let series = poisson_trace_series(&SpectrumStream::new(*model)?, &t_grid.points(), method, ctx.tol)?;
            series_output(&ctx, &series)
        }
        Command::Weierstrass { a, b, t_grid, method } => weierstrass(&ctx, *a, *b, t_grid, *method),
        Command::ZetaEval { model, re, im, method } => zeta(&ctx, *model, Complex64::new(*re, *im), *method),
        Command::Poles { model, strip } => poles(*model, strip),
        Command::FitOsc { input, d_s, model, omega_hint, t_min, t_max } => {
            fit_osc(input, *d_s, *model, *omega_hint, *t_min, *t_max)
        }
        Command::Thermo { model, ratio, grid } => thermo(&ctx, *model, ratio, *grid),
        Command::Crossover { model, levels, t_grid } => crossover(&ctx, *model, levels, t_grid),
    }
}

/// Writes next to the target and renames, so readers never see a partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": kind, "message": message, "exit_code": code }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return fail("UsageError", first, 2);
        }
    };
    let result = execute(&cli).and_then(|bytes| match &cli.output {
        Some(path) => write_atomic(path, &bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => io::stdout().lock().write_all(&bytes).map_err(Error::from),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = if e.is_usage() || matches!(e, Error::Io(_)) { 2 } else { 3 };
            fail(e.kind(), &e.to_string(), code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracspec::series::format_float;

    #[test]
    fn float_format_is_fixed() {
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["fracspec", "poles", "--model", "diamond:4,2", "--strip", "0:3:-10:10"]).unwrap();
        assert!(matches!(cli.command, Command::Poles { .. }));
        assert!(Cli::try_parse_from(["fracspec", "dims", "--model", "diamond:1,2"]).is_err());
        assert!(Cli::try_parse_from(["fracspec", "heat-trace", "--model", "interval:dirichlet", "--t-grid", "log:1:0:3"]).is_err());
    }
}
