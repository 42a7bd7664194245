//! `regimefit`: generate, fit, segment, and check growth-decay yearly series.

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use serde::Deserialize;

use regimefit_cli::error::{CliError, EXIT_NONCONVERGED, EXIT_USAGE};
use regimefit_cli::{csv, emit_plot_data, report::FitReport, report::SegmentReport};
use regimefit_core::{
    boundary_search, expenses_partition, fit_loglinear_trend, fit_partition, income_partition,
    progression_check, semiperiod_sum_check, synth, visual_partition, CompositeParams,
    ExpensesFit, FitConfig, NoiseSpec, Partition, PartitionMode, RegimeSpec, SpikeEvent,
};

#[derive(Parser)]
#[command(name = "regimefit", version, about = "Growth-decay regime modeling of yearly series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic CSV from a named preset or a JSON config file.
    #[command(group(ArgGroup::new("source").required(true).args(["preset", "config"])))]
    Generate {
        /// paper-income or paper-expenses-R/S/T/U
        #[arg(long)]
        preset: Option<String>,
        /// JSON file with regimes, parameters, noise, and spikes
        #[arg(long)]
        config: Option<PathBuf>,
        /// Lognormal log-scale sigma; 0 disables noise
        #[arg(long, default_value_t = 0.0)]
        noise_sigma: f64,
        #[arg(long, env = "REGIMEFIT_SEED", default_value_t = 42)]
        seed: u64,
        /// `preset` or `YEAR:MULT[,YEAR:MULT...]`
        #[arg(long)]
        spikes: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the composite model independently on each regime of a partition.
    Fit {
        input: PathBuf,
        /// income, expenses, visual, or a JSON partition file
        #[arg(long, default_value = "income")]
        partition: String,
        #[arg(long, default_value_t = 128)]
        starts: usize,
        #[arg(long, env = "REGIMEFIT_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
        /// Round the semi-period to whole years and refit
        #[arg(long)]
        integer_polish: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Prefix for <prefix>.observed.csv and <prefix>.fitted.csv
        #[arg(long)]
        plot_out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.25)]
        plot_step: f64,
    },
    /// Exhaustive regime-boundary search minimizing total SSE.
    Segment {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        regimes: usize,
        #[arg(long, default_value_t = 10)]
        min_width: i32,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long, env = "REGIMEFIT_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 80)]
        max_iterations: usize,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Fit the log-linear exponential trend and print A and alpha.
    Trend { input: PathBuf },
    /// Verify the built-in structural identities; exit 0 iff all hold.
    Check,
    /// Render a JSON fit or segment report as a text table.
    Report { report: PathBuf },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Generate { preset, config, noise_sigma, seed, spikes, out } => {
            generate_cmd(preset, config, noise_sigma, seed, spikes, &out)
        }
        Command::Fit {
            input,
            partition,
            starts,
            seed,
            max_iterations,
            integer_polish,
            json_out,
            plot_out,
            plot_step,
        } => fit_cmd(
            &input,
            &partition,
            starts,
            seed,
            max_iterations,
            integer_polish,
            json_out.as_deref(),
            plot_out.as_deref(),
            plot_step,
        ),
        Command::Segment { input, regimes, min_width, starts, seed, max_iterations, json_out } => {
            segment_cmd(&input, regimes, min_width, starts, seed, max_iterations, json_out.as_deref())
        }
        Command::Trend { input } => trend_cmd(&input),
        Command::Check => Ok(check_cmd()),
        Command::Report { report } => report_cmd(&report),
    }
}

/// Custom generation config: ordered regimes with their parameters, an
/// optional year range (defaults to the partition span), noise, and spikes.
#[derive(Deserialize)]
struct GenerateConfig {
    label: Option<String>,
    regimes: Vec<GenerateRegime>,
    years: Option<[i32; 2]>,
    noise: Option<NoiseSpec>,
    spikes: Option<Vec<SpikeEvent>>,
}

#[derive(Deserialize)]
struct GenerateRegime {
    start_year: i32,
    end_year: i32,
    params: CompositeParams,
}

fn parse_spikes(text: &str) -> Result<Vec<SpikeEvent>, CliError> {
    if text == "preset" {
        return Ok(synth::default_spikes());
    }
    text.split(',')
        .map(|item| {
            let (year, mult) = item
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("bad spike `{item}`, want YEAR:MULT")))?;
            let year = year
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad spike year `{year}`")))?;
            let multiplier = mult
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad spike multiplier `{mult}`")))?;
            Ok(SpikeEvent { year, multiplier })
        })
        .collect()
}

fn preset_series(name: &str) -> Result<(Partition, Vec<CompositeParams>, String), CliError> {
    let lower = name.to_ascii_lowercase();
    if lower == "paper-income" {
        return Ok((income_partition(), synth::income_params(), "income".into()));
    }
    if let Some(label) = lower.strip_prefix("paper-expenses-") {
        if let Some(fit) = ExpensesFit::from_label(label) {
            return Ok((
                expenses_partition(),
                synth::expenses_params(fit),
                format!("expenses-{}", fit.label()),
            ));
        }
    }
    Err(CliError::Usage(format!(
        "unknown preset `{name}` (expected paper-income or paper-expenses-R/S/T/U)"
    )))
}

fn generate_cmd(
    preset: Option<String>,
    config: Option<PathBuf>,
    noise_sigma: f64,
    seed: u64,
    spikes_flag: Option<String>,
    out: &Path,
) -> Result<i32, CliError> {
    let (partition, params, label, mut noise, mut spikes, span_override) = match (preset, config) {
        (Some(name), None) => {
            let (partition, params, label) = preset_series(&name)?;
            (partition, params, label, NoiseSpec::None, Vec::new(), None)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let cfg: GenerateConfig = serde_json::from_str(&text)
                .map_err(|e| CliError::Json { path: path.clone(), source: e })?;
            let regimes: Vec<RegimeSpec> = cfg
                .regimes
                .iter()
                .enumerate()
                .map(|(i, r)| RegimeSpec::new(i + 1, r.start_year, r.end_year))
                .collect::<Result<_, _>>()?;
            let partition = Partition::new(regimes, PartitionMode::Custom)?;
            let params = cfg.regimes.iter().map(|r| r.params).collect();
            (
                partition,
                params,
                cfg.label.unwrap_or_else(|| "custom".into()),
                cfg.noise.unwrap_or(NoiseSpec::None),
                cfg.spikes.unwrap_or_default(),
                cfg.years,
            )
        }
        _ => unreachable!("clap group enforces exactly one source"),
    };
    if noise_sigma > 0.0 {
        noise = NoiseSpec::lognormal(noise_sigma, seed);
    }
    if let Some(text) = spikes_flag {
        spikes = parse_spikes(&text)?;
    }
    let (first, last) = span_override.map(|[a, b]| (a, b)).unwrap_or_else(|| partition.span());
    let years: Vec<i32> = (first..=last).collect();
    let series = synth::generate(&partition, &params, &years, &noise, &spikes)?.relabel(label);
    csv::write_csv(out, &series)?;
    println!("wrote {} points to {}", series.len(), out.display());
    Ok(0)
}

fn resolve_partition(name: &str) -> Result<(Partition, PartitionMode), CliError> {
    match name {
        "income" => Ok((income_partition(), PartitionMode::Income)),
        "expenses" => Ok((expenses_partition(), PartitionMode::Expenses)),
        "visual" => Ok((visual_partition(), PartitionMode::Visual)),
        _ => {
            let path = Path::new(name);
            if !path.exists() {
                return Err(CliError::Usage(format!(
                    "unknown partition `{name}` (expected income, expenses, visual, or a JSON file)"
                )));
            }
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            #[derive(Deserialize)]
            struct PartitionFile {
                regimes: Vec<RegimeSpec>,
            }
            let file: PartitionFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Json { path: path.into(), source: e })?;
            Ok((Partition::new(file.regimes, PartitionMode::Custom)?, PartitionMode::Custom))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn fit_cmd(
    input: &Path,
    partition_name: &str,
    starts: usize,
    seed: u64,
    max_iterations: usize,
    integer_polish: bool,
    json_out: Option<&Path>,
    plot_out: Option<&Path>,
    plot_step: f64,
) -> Result<i32, CliError> {
    let data = csv::load_csv(input)?;
    let (partition, mode) = resolve_partition(partition_name)?;
    let mut config = FitConfig::composite();
    config.n_starts = starts;
    config.rng_seed = seed;
    config.max_iterations = max_iterations;
    let fits = fit_partition(&data, &partition, &config, integer_polish)?;
    let report =
        FitReport::build(&input.display().to_string(), &data, mode, &config, integer_polish, &fits);
    print!("{}", report.render_text());
    if let Some(path) = json_out {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        csv::write_atomic(path, &(json + "\n"))?;
    }
    if let Some(prefix) = plot_out {
        let curve: Vec<(RegimeSpec, CompositeParams)> = fits
            .iter()
            .map(|f| (f.regime, CompositeParams::from_slice(&f.result.params)))
            .collect();
        let plot = emit_plot_data(&data, &curve, plot_step)?;
        csv::write_atomic(&with_suffix(prefix, ".observed.csv"), &plot.observed_csv)?;
        csv::write_atomic(&with_suffix(prefix, ".fitted.csv"), &plot.fitted_csv)?;
    }
    if report.totals.all_converged {
        Ok(0)
    } else {
        eprintln!("warning: at least one regime fit did not converge");
        Ok(EXIT_NONCONVERGED)
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn segment_cmd(
    input: &Path,
    regimes: usize,
    min_width: i32,
    starts: usize,
    seed: u64,
    max_iterations: usize,
    json_out: Option<&Path>,
) -> Result<i32, CliError> {
    let data = csv::load_csv(input)?;
    let mut config = FitConfig::composite();
    config.n_starts = starts;
    config.rng_seed = seed;
    config.max_iterations = max_iterations;
    let search = boundary_search(&data, regimes, min_width, &config)?;
    let report =
        SegmentReport::build(&input.display().to_string(), &config, regimes, min_width, &search);
    print!("{}", report.render_text());
    if let Some(path) = json_out {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        csv::write_atomic(path, &(json + "\n"))?;
    }
    Ok(0)
}

fn trend_cmd(input: &Path) -> Result<i32, CliError> {
    let data = csv::load_csv(input)?;
    let trend = fit_loglinear_trend(&data)?;
    println!(
        "trend of {} [{}]: A = {} at first data year, alpha = {:.6} per year",
        data.label(),
        data.unit(),
        csv::format_bef(trend.amplitude),
        trend.rate,
    );
    Ok(0)
}

fn check_cmd() -> i32 {
    let mut all = true;

    let sum = semiperiod_sum_check(&[38, 54, 68], 80);
    println!(
        "semi-period sum: 38+54+68 = {} vs 2*80 = {} ... {}",
        sum.window_sum,
        sum.doubled_span,
        if sum.matches() { "PASS" } else { "FAIL" }
    );
    all &= sum.matches();

    let report = progression_check(&visual_partition());
    for row in &report.rows {
        println!(
            "width progression regime {}: expected {} = 10+9*{}, actual {} ... {}",
            row.index,
            row.expected_width,
            row.index,
            row.actual_width,
            if row.matches() { "PASS" } else { "FAIL" }
        );
        all &= row.matches();
    }

    if all {
        println!("all structural checks pass");
        0
    } else {
        println!("structural checks FAILED");
        1
    }
}

fn report_cmd(path: &Path) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if let Ok(report) = serde_json::from_str::<FitReport>(&text) {
        print!("{}", report.render_text());
        return Ok(0);
    }
    let report: SegmentReport = serde_json::from_str(&text)
        .map_err(|e| CliError::Json { path: path.into(), source: e })?;
    print!("{}", report.render_text());
    Ok(0)
}
