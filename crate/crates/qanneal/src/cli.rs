//! Subcommands of the `qanneal` binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qanneal_core::ilp::BitRole;
use qanneal_core::ising::split_field_groups;
use qanneal_core::mds::{linear_graph, mds_to_ilp};
use qanneal_core::oracle::{enumerate_qubo, DEFAULT_BIT_CAP};
use qanneal_core::qubo::mask_to_bits;
use qanneal_core::schedule::{assign_offsets, OffsetMode};
use qanneal_core::sim::{run, sweep_jobs, AnnealSpec, RunOptions, RunReport};
use qanneal_core::verify::{self, Channel, CheckOutcome};
use serde::Serialize;

use crate::config::{delay, read_text, Compiled, DecoherenceSpec, InitialName, LocalFieldName, ProblemSource, SimulationSpec, SweepConfig};
use crate::csvio::{write_energy_table, write_sweep, write_trajectory};
use crate::error::CliError;
use crate::formats::{to_json, Exact, FinalDistribution, IsingFile, OffsetsFile, QuboFile, SpectrumFile, FORMAT_VERSION};
use crate::manifest::Outputs;
use crate::parallel::{parallel_sweep, worker_count};
use crate::random::random_programs;

#[derive(Debug, Parser)]
#[command(name = "qanneal", version, about = "Compile integer programs to QUBO/Ising form and simulate annealing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile an ILP or graph into qubo.json and ising.json.
    Compile(CompileArgs),
    /// Brute-force spectrum of a QUBO, Ising model or ILP.
    SolveExact(SolveArgs),
    /// Simulate one anneal.
    Anneal(AnnealArgs),
    /// Run an offset sweep from a config file or preset.
    Sweep(SweepArgs),
    /// Run the built-in correctness checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// ILP, graph, QUBO or Ising JSON document.
    #[arg(required_unless_present = "linear", conflicts_with = "linear")]
    pub input: Option<PathBuf>,
    /// Use the path graph on N vertices instead of a file.
    #[arg(long, value_name = "N")]
    pub linear: Option<usize>,
    /// Penalty strength (exact decimal or p/q); defaults to the penalty floor.
    #[arg(long, value_parser = parse_exact)]
    pub penalty: Option<Exact>,
}

impl ProblemArgs {
    fn source(&self) -> ProblemSource {
        match (&self.input, self.linear) {
            (Some(path), _) => ProblemSource::File { path: path.clone(), penalty: self.penalty },
            (None, n) => ProblemSource::Linear { n: n.unwrap_or(0), penalty: self.penalty },
        }
    }
}

fn parse_exact(text: &str) -> Result<Exact, String> {
    qanneal_core::scalar::parse_rational(text).map(Exact).ok_or_else(|| format!("not an exact number: {text}"))
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Largest number of bits to enumerate.
    #[arg(long, default_value_t = DEFAULT_BIT_CAP)]
    pub cap: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    S,
    W,
    None,
}

impl ModeArg {
    fn mode(self) -> OffsetMode {
        match self {
            ModeArg::S => OffsetMode::StrongDelay,
            ModeArg::W => OffsetMode::WeakDelay,
            ModeArg::None => OffsetMode::None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TempPreset {
    Paper,
    Custom,
}

#[derive(Debug, Args)]
pub struct AnnealArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// `linear` or an `s,A,B` CSV file.
    #[arg(long, default_value = "linear")]
    pub schedule: String,
    /// Peak amplitude of the linear schedule, rad/ns.
    #[arg(long, default_value_t = qanneal_core::schedule::DEFAULT_AMPLITUDE)]
    pub amplitude: f64,
    /// ns
    #[arg(long, default_value_t = qanneal_core::sim::preset::ANNEAL_TIME)]
    pub anneal_time: f64,
    #[arg(long, value_enum, default_value = "none")]
    pub offset_mode: ModeArg,
    /// Size of the delay given to the chosen group.
    #[arg(long, default_value_t = 0.0)]
    pub offset_magnitude: f64,
    #[arg(long, value_enum, default_value = "paper")]
    pub temp_preset: TempPreset,
    #[arg(long)]
    pub temperature_mk: Option<f64>,
    /// Inverse temperature in ns.
    #[arg(long)]
    pub beta: Option<f64>,
    /// ns
    #[arg(long)]
    pub t_fc: Option<f64>,
    /// ns
    #[arg(long)]
    pub t_loc: Option<f64>,
    /// Pad the schedule at both ends (default fraction 0.1).
    #[arg(long, num_args = 0..=1, default_missing_value = "0.1", value_name = "FRACTION")]
    pub extended: Option<f64>,
    #[arg(long, value_enum, default_value = "on")]
    pub fc: Switch,
    #[arg(long, value_enum, default_value = "on")]
    pub loc: Switch,
    #[arg(long, value_enum, default_value = "bare")]
    pub local_field: LocalFieldArg,
    #[arg(long, value_enum, default_value = "gibbs")]
    pub initial: InitialArg,
    #[arg(long)]
    pub steps: Option<usize>,
    /// ns
    #[arg(long, default_value_t = crate::config::DEFAULT_TIME_STEP)]
    pub time_step: f64,
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Populations at or below this are left out of final.json.
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LocalFieldArg {
    Bare,
    Scheduled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    Gibbs,
    Ground,
}

impl AnnealArgs {
    fn simulation(&self) -> SimulationSpec {
        SimulationSpec {
            schedule: self.schedule.clone(),
            amplitude: self.amplitude,
            anneal_time: self.anneal_time,
            extension: self.extended,
            time_step: self.time_step,
            steps: self.steps,
            initial: match self.initial {
                InitialArg::Gibbs => InitialName::Gibbs,
                InitialArg::Ground => InitialName::Ground,
            },
            record_every: self.record_every,
            decoherence: DecoherenceSpec {
                preset: match self.temp_preset {
                    TempPreset::Paper => "paper".into(),
                    TempPreset::Custom => "custom".into(),
                },
                temperature_mk: self.temperature_mk,
                beta: self.beta,
                t_fc: self.t_fc,
                t_loc: self.t_loc,
                fc: self.fc.on(),
                loc: self.loc.on(),
                local_field: match self.local_field {
                    LocalFieldArg::Bare => LocalFieldName::Bare,
                    LocalFieldArg::Scheduled => LocalFieldName::Scheduled,
                },
                tolerance: None,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep config JSON.
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Run a shipped config instead.
    #[arg(long, value_enum)]
    pub preset: Option<SweepPreset>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads; defaults to the environment or the core count.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepPreset {
    Paper,
    PaperExtended,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Scale the upward Boltzmann factors by `1 + F` in the detailed-balance checks.
    #[arg(long, default_value_t = 0.0, value_name = "F")]
    pub perturb_boltzmann: f64,
    /// Largest path graph in the equivalence suite.
    #[arg(long, default_value_t = 9)]
    pub max_linear: usize,
    /// Number of random integer programs in the equivalence suite.
    #[arg(long, default_value_t = 50)]
    pub random: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Runs a parsed command line; returns the text to print on success.
pub fn execute(cli: &Cli, argv: Vec<String>) -> Result<String, CliError> {
    match &cli.command {
        Command::Compile(args) => compile(args, argv),
        Command::SolveExact(args) => solve_exact(args, argv),
        Command::Anneal(args) => anneal(args, argv),
        Command::Sweep(args) => sweep(args, argv),
        Command::Verify(args) => verify_all(args),
    }
}

fn config_value<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("serializable config")
}

fn compile(args: &CompileArgs, argv: Vec<String>) -> Result<String, CliError> {
    let source = args.problem.source();
    let compiled = source.load(Path::new("."))?;
    let mut out = Outputs::new(&args.out);
    out.add("qubo.json", to_json(&QuboFile::from_qubo(&compiled.qubo)));
    out.add("ising.json", to_json(&IsingFile::from_model(&compiled.ising, &compiled.labels)));
    let written = out.write(argv, &source.inputs(Path::new(".")), config_value(&source))?;
    Ok(format!("{} bits\n{}", compiled.qubo.num_bits(), list(&written)))
}

fn list(paths: &[PathBuf]) -> String {
    paths.iter().map(|p| format!("wrote {}\n", p.display())).collect()
}

/// Decision values of the ground states, read off the bit labels.
fn decode_by_labels(compiled: &Compiled, masks: &[u64]) -> Option<Vec<Vec<i128>>> {
    let vars = compiled
        .labels
        .iter()
        .filter(|l| l.role == BitRole::Decision)
        .map(|l| l.owner + 1)
        .max()?;
    let mut decoded: Vec<Vec<i128>> = masks
        .iter()
        .map(|&m| {
            let bits = mask_to_bits(m, compiled.labels.len());
            let mut x = vec![0i128; vars];
            for (label, bit) in compiled.labels.iter().zip(bits) {
                if label.role == BitRole::Decision && bit == 1 {
                    x[label.owner] += 1i128 << label.position;
                }
            }
            x
        })
        .collect();
    decoded.sort();
    decoded.dedup();
    Some(decoded)
}

fn solve_exact(args: &SolveArgs, argv: Vec<String>) -> Result<String, CliError> {
    let source = args.problem.source();
    let compiled = source.load(Path::new("."))?;
    let report = enumerate_qubo(&compiled.qubo, args.cap)?;
    let decoded = decode_by_labels(&compiled, &report.ground_configs);
    let mut out = Outputs::new(&args.out);
    out.add("spectrum.json", to_json(&SpectrumFile::from_report(&report, decoded)));
    out.add("energies.csv", write_energy_table(&report));
    let written = out.write(argv, &source.inputs(Path::new(".")), config_value(&source))?;
    Ok(format!(
        "ground energy {} with degeneracy {}\n{}",
        Exact(report.ground_energy()),
        report.ground_degeneracy(),
        list(&written)
    ))
}

/// The run as executed, recorded next to its outputs.
#[derive(Serialize)]
struct ResolvedRun<'a> {
    format_version: u32,
    problem: &'a ProblemSource,
    simulation: &'a SimulationSpec,
    offset_mode: &'static str,
    offset_delay: f64,
    beta: f64,
    fc_rate: f64,
    local_rate: f64,
    steps: usize,
    time_step: f64,
    total_time: f64,
}

pub fn run_options(spec: &AnnealSpec, sim: &SimulationSpec) -> RunOptions {
    let mut options = match sim.steps {
        Some(steps) => RunOptions::new(steps),
        None => RunOptions::with_time_step(spec, sim.time_step),
    };
    if let Some(stride) = sim.record_every {
        options = options.record_every(stride);
    }
    options.initial(sim.initial.state())
}

fn anneal(args: &AnnealArgs, argv: Vec<String>) -> Result<String, CliError> {
    let base = Path::new(".");
    let source = args.problem.source();
    let sim = args.simulation();
    sim.check()?;
    let deco = sim.decoherence.resolve()?;
    let compiled = source.load(base)?;
    let model = compiled.ising.to_f64();
    let n = model.num_spins();
    let mode = args.offset_mode.mode();
    let offset = if mode == OffsetMode::None { 0.0 } else { delay(args.offset_magnitude) };
    let offsets = assign_offsets(&split_field_groups(&model), offset, mode, false)?;
    let spec = AnnealSpec::new(model, sim.schedule_table(base)?, offsets, sim.anneal_time)?;
    let options = run_options(&spec, &sim);
    let report = run(&spec, &deco, &options, &mut [])?;

    let resolved = ResolvedRun {
        format_version: FORMAT_VERSION,
        problem: &source,
        simulation: &sim,
        offset_mode: mode.tag(),
        offset_delay: offset,
        beta: deco.beta,
        fc_rate: deco.fc_rate,
        local_rate: deco.local_rate,
        steps: options.steps,
        time_step: report.diagnostics.time_step,
        total_time: spec.total_time(),
    };
    let mut out = Outputs::new(&args.out);
    out.add("trajectory.csv", write_trajectory(&report.trajectory));
    out.add("final.json", to_json(&FinalDistribution::from_report(&report, n, args.threshold)));
    out.add("offsets.json", to_json(&OffsetsFile::from_assignment(spec.offsets())));
    out.add("run.json", to_json(&resolved));
    let mut inputs = source.inputs(base);
    inputs.extend(sim.inputs(base));
    let written = out.write(argv, &inputs, config_value(&resolved))?;
    Ok(format!("{}{}", summary(&report), list(&written)))
}

fn summary(report: &RunReport) -> String {
    format!(
        "p_ground {:.6} (rank {}), p_solution {:.6}, max trace drift {:.1e}, min eigenvalue {:.1e}\n",
        report.p_ground,
        report.ground_rank,
        report.p_solution,
        report.diagnostics.max_trace_drift,
        report.diagnostics.min_eigenvalue
    )
}

fn sweep(args: &SweepArgs, argv: Vec<String>) -> Result<String, CliError> {
    let (cfg, base, inputs) = match (&args.config, args.preset) {
        (Some(path), _) => {
            let cfg = SweepConfig::parse(&read_text(path)?, &path.display().to_string())?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (cfg, base, vec![path.clone()])
        }
        (None, Some(SweepPreset::PaperExtended)) => (SweepConfig::paper_extended(), PathBuf::new(), Vec::new()),
        (None, _) => (SweepConfig::paper(), PathBuf::new(), Vec::new()),
    };
    cfg.simulation.check()?;
    let modes = cfg
        .modes
        .iter()
        .map(|t| OffsetMode::from_tag(t).ok_or_else(|| CliError::Input(format!("unknown offset mode {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let deco = cfg.simulation.decoherence.resolve()?;
    let compiled = cfg.problem.load(&base)?;
    let model = compiled.ising.to_f64();
    let n = model.num_spins();
    let zeros = qanneal_core::schedule::OffsetAssignment::zeros(n);
    let template = AnnealSpec::new(model, cfg.simulation.schedule_table(&base)?, zeros, cfg.simulation.anneal_time)?;
    let magnitudes: Vec<f64> = cfg.magnitudes.iter().map(|&m| delay(m)).collect();
    let jobs = sweep_jobs(&magnitudes, &modes);
    // Reject out-of-range offsets before any run starts.
    for job in &jobs {
        template.with_offsets(qanneal_core::sim::offsets_for(&template, job)?)?;
    }
    let options = run_options(&template, &cfg.simulation);
    let workers = args.workers.unwrap_or_else(worker_count);
    let rows = parallel_sweep(&template, &jobs, &deco, &options, workers)?;

    let mut out = Outputs::new(&args.out);
    out.add("sweep.csv", write_sweep(&rows, n, cfg.ground_measure, cfg.state_threshold));
    let mut all_inputs = inputs;
    all_inputs.extend(cfg.problem.inputs(&base));
    all_inputs.extend(cfg.simulation.inputs(&base));
    let written = out.write(argv, &all_inputs, config_value(&cfg))?;
    Ok(format!("{} runs\n{}", rows.len(), list(&written)))
}

/// Path graphs `2..=max_linear` followed by seeded random programs.
pub fn equivalence_programs(max_linear: usize, random: usize, seed: u64) -> Vec<qanneal_core::ilp::IntegerLinearProgram> {
    let mut programs: Vec<_> = (2..=max_linear).map(|n| mds_to_ilp(&linear_graph(n))).collect();
    programs.extend(random_programs(random, 14, seed));
    programs
}

/// Enough bits for the largest path graph of the suite.
pub fn equivalence_cap(max_linear: usize) -> usize {
    qanneal_core::mds::qubit_count(&linear_graph(max_linear.max(2))).max(DEFAULT_BIT_CAP)
}

pub fn verify_checks(args: &VerifyArgs) -> Vec<CheckOutcome> {
    let programs = equivalence_programs(args.max_linear, args.random, args.seed);
    let bias = 1.0 + args.perturb_boltzmann;
    vec![
        verify::transverse_oscillation(),
        verify::gibbs_distribution(),
        verify::offset_lifting(),
        verify::compiler_equivalence(&programs, equivalence_cap(args.max_linear)),
        verify::detailed_balance(Channel::FullCounting, bias),
        verify::detailed_balance(Channel::Local, bias),
    ]
}

fn verify_all(args: &VerifyArgs) -> Result<String, CliError> {
    let outcomes = verify_checks(args);
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&format!("{} {}: {}\n", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Check(format!("{failed} of {} checks failed", outcomes.len())))
    }
}

