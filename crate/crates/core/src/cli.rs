//! Command-line front end. Exit codes: 0 success, 1 failed verification,
//! 2 mathematical, domain or usage error, 3 IO error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coupling::{g_from_s, CouplingParam};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernel::{Kernel, TabulatedKernel};
use crate::lab::{energy_scale, run_sip_oscillator, run_spectrum, SpectralRun, DEFAULT_POINTS};
use crate::output::{
    pair_csv, spectrum_csv, svg_plot, to_json, write_file, Figure, Metadata, Tolerances,
};
use crate::spectral::{default_e_max, Intertwined, SusyStatus};
use crate::susy::{build_pair, duality_residual, harmonic_sip_pair, partner_pair, PartnerBuilder, PotentialPair};
use crate::verify::{self, oscillator_grid, VerifyContext};

#[derive(Debug, Parser)]
#[command(name = "susy-lab", version, about = "Dual SUSY partner Hamiltonians from an even kernel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partner potentials at s and -s, plus the duality residual.
    DualPair(PairArgs),
    /// Bound states of both sectors and their pairing.
    Spectrum(SpectrumArgs),
    /// Run invariant checks; exit 1 if any fails.
    Verify(VerifyArgs),
    /// Curves, levels and an SVG plot for a preset figure (A1 or A2).
    Figure(FigureArgs),
    /// Per-coupling summary over a list or range of s.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Constant,
    NegConstant,
    Harmonic,
    Poly,
    Table,
    SipOscillator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    #[value(name = "A1")]
    A1,
    #[value(name = "A2")]
    A2,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, value_enum)]
    pub kernel: Option<KernelKind>,
    /// Frequency of the constant and harmonic kernels.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Coefficients of x^0, x^2, x^4, ... for the polynomial kernel.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<f64>,
    /// CSV with header `x,k` for the tabulated kernel.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct CouplingArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Box half-width.
    #[arg(long = "L")]
    pub half_extent: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Energy cut; levels above it are not reported.
    #[arg(long, allow_hyphen_values = true)]
    pub emax: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[group(id = "which", required = true, multiple = false)]
pub struct Which {
    #[arg(long)]
    pub all: bool,
    /// One of the named checks.
    #[arg(long)]
    pub check: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub which: Which,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub coupling: CouplingArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub name: FigureName,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Explicit couplings.
    #[arg(long = "s-values", value_delimiter = ',', allow_hyphen_values = true)]
    pub s_values: Vec<f64>,
    /// `FROM,TO,N`: N evenly spaced couplings, endpoints included.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub range: Vec<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(args, partner_pair, &mut out, &mut err)
}

/// [`run`] with a replaceable partner-potential construction and explicit
/// output streams.
pub fn run_with<I, T>(
    args: I,
    builder: PartnerBuilder,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, builder, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, builder: PartnerBuilder, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::DualPair(a) => cmd_dual_pair(&a, out),
        Command::Spectrum(a) => cmd_spectrum(&a, out),
        Command::Verify(a) => cmd_verify(&a, builder, out),
        Command::Figure(a) => cmd_figure(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
    }?;
    Ok(0)
}

impl KernelArgs {
    fn kind(&self) -> KernelKind {
        self.kernel.unwrap_or(KernelKind::Constant)
    }

    /// `None` for the oscillator, which has no kernel.
    fn build(&self) -> Result<Option<Kernel>> {
        Ok(Some(match self.kind() {
            KernelKind::Constant => Kernel::constant(self.omega)?,
            KernelKind::NegConstant => Kernel::neg_constant(self.omega)?,
            KernelKind::Harmonic => Kernel::harmonic(self.omega)?,
            KernelKind::Poly => {
                if self.coeffs.is_empty() {
                    return Err(Error::Usage("--kernel poly needs --coeffs".into()));
                }
                Kernel::even_polynomial(self.coeffs.clone())?
            }
            KernelKind::Table => {
                let path = self
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::Usage("--kernel table needs --table PATH".into()))?;
                Kernel::EvenTabulated(TabulatedKernel::from_csv_path(path)?)
            }
            KernelKind::SipOscillator => return Ok(None),
        }))
    }

    fn require(&self) -> Result<Kernel> {
        self.build()?.ok_or_else(|| {
            Error::Usage("sip-oscillator has no kernel; use it with `spectrum` only".into())
        })
    }
}

impl CouplingArgs {
    fn param(&self) -> Result<CouplingParam> {
        match (self.g, self.s) {
            (Some(g), None) => CouplingParam::from_g(g),
            (None, Some(s)) => CouplingParam::from_s(s),
            _ => Err(Error::Usage("exactly one of --g or --s is required".into())),
        }
    }
}

impl GridArgs {
    fn resolve(&self, default_l: f64) -> Result<Grid> {
        Grid::new(
            self.half_extent.unwrap_or(default_l),
            self.points.unwrap_or(DEFAULT_POINTS),
        )
    }
}

fn metadata(kernel: String, s: Option<f64>, grid: &Grid, scale: f64) -> Result<Metadata> {
    let g = s.map(g_from_s).transpose()?;
    Ok(Metadata {
        kernel,
        g,
        s,
        half_extent: grid.half_extent(),
        points: grid.points(),
        h: grid.step(),
        tolerances: Tolerances::for_energy_scale(scale),
        version: crate::VERSION,
    })
}

#[derive(Serialize)]
struct PairJson<'a> {
    meta: &'a Metadata,
    x: &'a [f64],
    #[serde(rename = "V_minus")]
    v_minus: &'a [f64],
    #[serde(rename = "V_plus")]
    v_plus: &'a [f64],
    #[serde(rename = "W")]
    w: &'a [f64],
}

#[derive(Serialize)]
struct DualMeta<'a> {
    meta: &'a Metadata,
    dual: &'a Metadata,
    files: [String; 2],
    duality_residual: f64,
    duality_scale: f64,
    duality_within_tolerance: bool,
}

fn cmd_dual_pair(a: &PairArgs, out: &mut dyn Write) -> Result<()> {
    let kernel = a.kernel.require()?;
    let param = a.coupling.param()?;
    let s = param.require_nondegenerate()?;
    let grid = a.grid.resolve(kernel.default_half_extent(s))?;
    let scale = energy_scale(&kernel);
    let ext = match a.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut names = Vec::new();
    let mut metas = Vec::new();
    for (tag, sv) in [("s", s), ("dual", -s)] {
        let pair = build_pair(&kernel, sv, &grid)?;
        let meta = metadata(kernel.label(), Some(sv), &grid, scale)?;
        let name = format!("pair_{tag}.{ext}");
        let body = match a.format {
            Format::Csv => pair_csv(&pair)?,
            Format::Json => to_json(&pair_json(&pair, &meta))?,
        };
        write_file(&a.out.join(&name), &body)?;
        names.push(name);
        metas.push(meta);
    }
    let r = duality_residual(&kernel, s, &grid)?;
    let meta_path = a.out.join("pair_meta.json");
    write_file(
        &meta_path,
        &to_json(&DualMeta {
            meta: &metas[0],
            dual: &metas[1],
            files: [names[0].clone(), names[1].clone()],
            duality_residual: r.max_abs,
            duality_scale: r.scale,
            duality_within_tolerance: r.within_contract(),
        })?,
    )?;
    writeln!(
        out,
        "s = {s}, g = {}: duality residual {:.3e} (scale {:.3e}), wrote {}",
        param.g(),
        r.max_abs,
        r.scale,
        a.out.display()
    )
    .map_err(|e| Error::io("<stdout>", e))
}

fn pair_json<'a>(pair: &'a PotentialPair, meta: &'a Metadata) -> PairJson<'a> {
    PairJson {
        meta,
        x: &pair.x,
        v_minus: &pair.v_minus,
        v_plus: &pair.v_plus,
        w: &pair.w,
    }
}

#[derive(Serialize)]
struct IntertwineJson {
    /// Residual of the image of the first excited state, if computed.
    residual: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    meta: &'a Metadata,
    minus: &'a crate::spectral::SpectrumReport,
    plus: &'a crate::spectral::SpectrumReport,
    pairing: &'a crate::spectral::PairingReport,
    normalizability: SusyStatus,
    first_excited_intertwine: IntertwineJson,
}

fn spectrum_run(a: &SpectrumArgs) -> Result<(SpectralRun, Metadata)> {
    match a.kernel.build()? {
        Some(kernel) => {
            let s = a.coupling.param()?.require_nondegenerate()?;
            let grid = a.grid.resolve(kernel.default_half_extent(s))?;
            let run = run_spectrum(&kernel, s, &grid, a.emax)?;
            let meta = metadata(kernel.label(), Some(s), &grid, energy_scale(&kernel))?;
            Ok((run, meta))
        }
        None => {
            if a.coupling.g.is_some() || a.coupling.s.is_some() {
                return Err(Error::Usage("sip-oscillator takes no coupling".into()));
            }
            let omega = a.kernel.omega;
            if !(omega > 0.0 && omega.is_finite()) {
                return Err(Error::Domain(format!("omega must be positive, got {omega}")));
            }
            let default = oscillator_grid(omega)?;
            let grid = a.grid.resolve(default.half_extent())?;
            let e_max = match a.emax {
                Some(e) => e,
                None => {
                    let osc = harmonic_sip_pair(omega, &grid.xs())?;
                    default_e_max(&osc.v_minus, &grid, 0.02 * omega)
                }
            };
            let run = run_sip_oscillator(omega, &grid, e_max)?;
            let meta = metadata(run.pair.kernel.clone(), None, &grid, omega)?;
            Ok((run, meta))
        }
    }
}

fn cmd_spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> Result<()> {
    let (run, meta) = spectrum_run(a)?;
    let body = match a.format {
        Format::Json => {
            let residual = if run.pair.s.is_nan() {
                None
            } else {
                match run.first_excited_intertwine()? {
                    Some(Intertwined::Residual(r)) => Some(r),
                    _ => None,
                }
            };
            to_json(&SpectrumJson {
                meta: &meta,
                minus: &run.minus,
                plus: &run.plus,
                pairing: &run.pairing,
                normalizability: run.normalizability,
                first_excited_intertwine: IntertwineJson { residual },
            })?
        }
        Format::Csv => spectrum_csv(&[&run.minus, &run.plus])?,
    };
    emit(a.out.as_deref(), &body, out)?;
    if let (Format::Csv, Some(path)) = (a.format, &a.out) {
        write_file(&sidecar(path), &to_json(&meta)?)?;
    }
    Ok(())
}

/// `<path>.meta.json` next to a CSV.
fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn emit(path: Option<&Path>, body: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => write_file(p, body),
        None => out
            .write_all(body.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn cmd_verify(a: &VerifyArgs, builder: PartnerBuilder, out: &mut dyn Write) -> Result<()> {
    let kernel = match a.kernel.kernel {
        Some(_) => Some(a.kernel.require()?),
        None => None,
    };
    let s = match (a.coupling.g, a.coupling.s) {
        (None, None) => None,
        _ => Some(a.coupling.param()?.require_nondegenerate()?),
    };
    let ctx = VerifyContext { kernel, s, builder };
    let report = match &a.which.check {
        Some(name) => verify::run(&[name.as_str()], &ctx)?,
        None => verify::run_all(&ctx)?,
    };
    write!(out, "{}", report.table()).map_err(|e| Error::io("<stdout>", e))?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Error::Verification {
            failed: report.failures().count(),
        })
    }
}

/// Settings of a reproducible figure.
#[derive(Debug, Clone, Copy)]
pub struct FigurePreset {
    pub kernel: KernelKind,
    pub omega: f64,
    pub s: f64,
    /// Plotted window `|x| <= x_window`.
    pub x_window: f64,
    pub y_range: (f64, f64),
}

impl FigureName {
    pub fn preset(self) -> FigurePreset {
        match self {
            FigureName::A1 => FigurePreset {
                kernel: KernelKind::Constant,
                omega: 2.0,
                s: -0.25,
                x_window: 8.0,
                y_range: (-1.5, 5.0),
            },
            FigureName::A2 => FigurePreset {
                kernel: KernelKind::Harmonic,
                omega: 1.0,
                s: -1.0 / 3.0,
                x_window: 3.0,
                y_range: (-1.0, 4.0),
            },
        }
    }

    fn tag(self) -> &'static str {
        match self {
            FigureName::A1 => "A1",
            FigureName::A2 => "A2",
        }
    }
}

/// Restriction of a pair to `|x| <= window`.
fn windowed(pair: &PotentialPair, window: f64) -> PotentialPair {
    let keep: Vec<usize> = (0..pair.x.len())
        .filter(|&i| pair.x[i].abs() <= window + 1e-12)
        .collect();
    let pick = |v: &[f64]| keep.iter().map(|&i| v[i]).collect::<Vec<_>>();
    PotentialPair {
        s: pair.s,
        kernel: pair.kernel.clone(),
        x: pick(&pair.x),
        v_minus: pick(&pair.v_minus),
        v_plus: pick(&pair.v_plus),
        w: pick(&pair.w),
    }
}

fn cmd_figure(a: &FigureArgs, out: &mut dyn Write) -> Result<()> {
    let preset = a.name.preset();
    let kernel = match preset.kernel {
        KernelKind::Harmonic => Kernel::harmonic(preset.omega)?,
        _ => Kernel::constant(preset.omega)?,
    };
    let grid = a.grid.resolve(kernel.default_half_extent(preset.s))?;
    let run = run_spectrum(&kernel, preset.s, &grid, None)?;
    let meta = metadata(kernel.label(), Some(preset.s), &grid, energy_scale(&kernel))?;
    let shown = windowed(&run.pair, preset.x_window);
    let levels: Vec<(f64, bool)> = run
        .minus
        .eigenvalues
        .iter()
        .copied()
        .zip(run.minus.threshold_flags.iter().copied())
        .collect();
    let tag = a.name.tag();
    let title = format!("{tag}: {kernel}, s = {:.4}", preset.s);
    let svg = svg_plot(&Figure {
        title,
        pair: &shown,
        levels,
        y_range: preset.y_range,
        meta: &meta,
    })?;
    write_file(&a.out.join(format!("figure_{tag}.csv")), &pair_csv(&shown)?)?;
    write_file(
        &a.out.join(format!("figure_{tag}_levels.csv")),
        &spectrum_csv(&[&run.minus, &run.plus])?,
    )?;
    write_file(&a.out.join(format!("figure_{tag}.svg")), &svg)?;
    write_file(&a.out.join(format!("figure_{tag}.meta.json")), &to_json(&meta)?)?;
    writeln!(
        out,
        "{tag}: {} H- levels, {} H+ levels, wrote {}",
        run.minus.len(),
        run.plus.len(),
        a.out.display()
    )
    .map_err(|e| Error::io("<stdout>", e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub s: f64,
    pub g: f64,
    pub status: SusyStatus,
    /// Levels in the sector carrying the zero mode (the minus sector when
    /// there is none).
    pub bound_state_count: usize,
    pub ground_energy: Option<f64>,
    pub minus_count: usize,
    pub plus_count: usize,
    pub duality_residual: f64,
    #[serde(rename = "L")]
    pub half_extent: f64,
    pub points: usize,
}

#[derive(Serialize)]
struct SweepJson<'a> {
    meta: &'a Metadata,
    rows: &'a [SweepRow],
}

/// Couplings from `--s-values` and `--range`, sorted and deduplicated.
fn sweep_couplings(a: &SweepArgs) -> Result<Vec<f64>> {
    let mut s = a.s_values.clone();
    if !a.range.is_empty() {
        if a.range.len() != 3 {
            return Err(Error::Usage(format!("--range takes FROM,TO,N, got {} value(s)", a.range.len())));
        }
        let (lo, hi, n) = (a.range[0], a.range[1], a.range[2]);
        if n < 1.0 || n.fract() != 0.0 {
            return Err(Error::Usage(format!("range count must be a positive integer, got {n}")));
        }
        let n = n as usize;
        for i in 0..n {
            let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            s.push(lo + t * (hi - lo));
        }
    }
    if s.is_empty() {
        return Err(Error::Usage("sweep needs --s-values or --range".into()));
    }
    s.sort_by(f64::total_cmp);
    s.dedup();
    Ok(s)
}

fn sweep_row(kernel: &Kernel, s: f64, grid_args: &GridArgs) -> Result<SweepRow> {
    let param = CouplingParam::from_s(s)?;
    let s = param.require_nondegenerate()?;
    let grid = grid_args.resolve(kernel.default_half_extent(s))?;
    let run = run_spectrum(kernel, s, &grid, None)?;
    let sector = run.pairing.status.zero_mode_sector();
    let report = match sector {
        Some(sec) => run.sector(sec),
        None => &run.minus,
    };
    Ok(SweepRow {
        s,
        g: param.g(),
        status: run.pairing.status,
        bound_state_count: report.len(),
        ground_energy: report.ground(),
        minus_count: run.minus.len(),
        plus_count: run.plus.len(),
        duality_residual: duality_residual(kernel, s, &grid)?.max_abs,
        half_extent: grid.half_extent(),
        points: grid.points(),
    })
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let kernel = a.kernel.require()?;
    let couplings = sweep_couplings(a)?;
    // entries are independent; collect in input (sorted) order
    let rows: Vec<Result<SweepRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = couplings
            .iter()
            .map(|&s| {
                let kernel = &kernel;
                let grid = &a.grid;
                scope.spawn(move || sweep_row(kernel, s, grid))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    // grid varies per row; the metadata records the first row's grid and
    // each row carries its own L and points
    let first = a.grid.resolve(kernel.default_half_extent(couplings[0]))?;
    let meta = Metadata {
        s: None,
        g: None,
        ..metadata(kernel.label(), None, &first, energy_scale(&kernel))?
    };
    emit(
        a.out.as_deref(),
        &to_json(&SweepJson { meta: &meta, rows: &rows })?,
        out,
    )
}
