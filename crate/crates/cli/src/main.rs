mod designs;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qca_core::adders::AdderForm;
use qca_core::fault::{sweep, FaultSweepConfig};
use qca_core::layout::{layout_metrics, CircuitKind, Direction, Layout};
use qca_core::reversible::{collision_report, garbage_lower_bound, reversibilize, TieBreak};
use qca_core::sim::{
    clock_cycles, decode, simulate, verify_trace, ClockScheme, LayoutVerdict, SimConfig, SimTrace, Stimulus,
    MIN_SAMPLES_PER_CYCLE,
};
use qca_core::truth::{assignment_index, TruthSpec};

use designs::Design;

const DEFAULT_SEED: u64 = 20240;
/// Inputs up to this count are simulated exhaustively.
const EXHAUSTIVE_INPUTS: usize = 10;
const SAMPLED_VECTORS: usize = 1000;
/// Longer traces are summarized in `readout.csv` unless `--full-waveform`.
const WAVEFORM_SAMPLE_CAP: usize = 200_000;

#[derive(Parser)]
#[command(name = "qca-forge", version, about = "Majority-logic synthesis, QCA layout and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Clock {
    Landauer,
    Bennett,
}

impl From<Clock> for ClockScheme {
    fn from(c: Clock) -> Self {
        match c {
            Clock::Landauer => ClockScheme::Landauer,
            Clock::Bennett => ClockScheme::Bennett,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Lowest,
    Highest,
}

#[derive(clap::Args)]
struct SimArgs {
    #[arg(long, value_enum, default_value = "landauer")]
    clock: Clock,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Sample size when the input count rules out an exhaustive sweep.
    #[arg(long, default_value_t = SAMPLED_VECTORS)]
    vectors: usize,
    /// Write every sample even for long runs.
    #[arg(long)]
    full_waveform: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build the majority network of a circuit.
    Synth {
        #[arg(long)]
        circuit: CircuitKind,
        #[arg(long)]
        form: Option<AdderForm>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Append input columns as garbage outputs until the spec is injective.
    Reversibilize {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "lowest")]
        policy: Policy,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Generate the cell layout of a circuit.
    Layout {
        #[arg(long)]
        circuit: CircuitKind,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Simulate a layout and check it against a truth table.
    Sim {
        #[arg(long)]
        layout: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Displace one labelled cell step by step and record where it breaks.
    FaultSweep {
        #[arg(long)]
        layout: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        cell: String,
        #[arg(long, default_value = "NSEW")]
        dirs: String,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = 20.0)]
        max: f64,
        #[arg(long, value_enum, default_value = "landauer")]
        clock: Clock,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Metric table for the named designs.
    Report {
        targets: Vec<CircuitKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize, check, lay out, simulate and verify one circuit.
    Pipeline {
        #[arg(long)]
        circuit: CircuitKind,
        #[arg(long)]
        form: Option<AdderForm>,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn read_spec(path: &Path) -> Result<TruthSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    TruthSpec::from_json(&text).with_context(|| format!("parsing truth table {}", path.display()))
}

fn read_layout(path: &Path) -> Result<Layout> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let layout = Layout::from_json(&text).with_context(|| format!("parsing layout {}", path.display()))?;
    layout.validate()?;
    Ok(layout)
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

/// Every row when the inputs are few, otherwise a seeded random sample.
fn stimulus(inputs: &[String], args: &SimArgs) -> Stimulus {
    if inputs.len() <= EXHAUSTIVE_INPUTS {
        return Stimulus::exhaustive(inputs);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let vectors = (0..args.vectors).map(|_| inputs.iter().map(|_| rng.gen::<bool>()).collect()).collect();
    Stimulus::new(inputs.to_vec(), vectors)
}

struct SimOutcome {
    verdict: LayoutVerdict,
    files: Vec<PathBuf>,
    samples: usize,
}

fn run_sim(layout: &Layout, spec: &TruthSpec, args: &SimArgs, out: &Path) -> Result<SimOutcome> {
    let stim = stimulus(spec.input_names(), args);
    if stim.vectors.is_empty() {
        bail!("--vectors must be at least 1");
    }
    let scheme: ClockScheme = args.clock.into();
    let cycles = clock_cycles(layout, stim.vectors.len(), scheme)?;
    let defaults = SimConfig::default();
    let config = SimConfig { samples: defaults.samples.max(cycles * MIN_SAMPLES_PER_CYCLE), ..defaults };
    let trace: SimTrace<f64> = simulate(layout, &stim, &config, scheme)?;
    let expected: Vec<u64> = stim.vectors.iter().map(|v| spec.row(assignment_index(v))).collect();
    let verdict = verify_trace(&trace, spec.output_names(), &expected)?;

    let mut files = vec![write(out, "verdict.json", &verdict.to_json()?)?];
    let decoded = decode(&trace)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["vector".to_string()];
    header.extend(decoded.input_labels.iter().cloned());
    header.extend(decoded.output_labels.iter().cloned());
    w.write_record(&header)?;
    for (v, bits) in decoded.vectors.iter().enumerate() {
        let mut rec = vec![v.to_string()];
        rec.extend(bits.iter().map(|&b| (b as u8).to_string()));
        rec.extend(decoded.levels[v].iter().map(|p| format!("{p:.6}")));
        w.write_record(&rec)?;
    }
    files.push(write(out, "readout.csv", &String::from_utf8(w.into_inner()?)?)?);
    if args.full_waveform || trace.len() <= WAVEFORM_SAMPLE_CAP {
        files.push(write(out, "waveform.csv", &trace.waveform_csv())?);
    }
    Ok(SimOutcome { verdict, files, samples: trace.len() })
}

fn report_verdict(v: &LayoutVerdict) -> Result<()> {
    println!(
        "{} over {} vectors, margin {:.3}, {} mismatches, {} weak, {} unclocked",
        if v.passed { "pass" } else { "FAIL" },
        v.vectors,
        v.min_margin,
        v.mismatches.len(),
        v.weak.len(),
        v.unclocked.len()
    );
    if !v.passed {
        bail!("layout does not compute the truth table");
    }
    Ok(())
}

fn synth(circuit: CircuitKind, form: Option<AdderForm>, out: &Path) -> Result<()> {
    let design = Design::new(circuit, form);
    let net = design.network()?;
    let m = net.metrics();
    write(out, "network.json", &net.to_json()?)?;
    write(out, "spec.json", &net.to_truth_spec()?.to_json()?)?;
    write(out, "logic_metrics.json", &pretty(&serde_json::to_value(m)?)?)?;
    println!(
        "{circuit} ({}): {} majority, {} NOT, {} garbage, {} constant inputs, depth {}",
        design.form,
        m.majority_count(),
        m.not_count,
        m.garbage_output_count,
        m.constant_input_count,
        m.logic_depth
    );
    Ok(())
}

fn reversibilize_cmd(spec: &Path, policy: Policy, out: &Path) -> Result<()> {
    let spec = read_spec(spec)?;
    let tie = match policy {
        Policy::Lowest => TieBreak::Lowest,
        Policy::Highest => TieBreak::Highest,
    };
    let before = collision_report(&spec);
    let r = reversibilize(&spec, tie)?;
    write(out, "reversible.json", &r.augmented.to_json()?)?;
    write(out, "steps.csv", &r.step_log_csv())?;
    let names: Vec<&str> = r.garbage_sources.iter().map(|&c| spec.input_names()[c].as_str()).collect();
    println!(
        "{} colliding pairs, lower bound {}, {} garbage outputs [{}]",
        before.colliding_pair_count,
        garbage_lower_bound(&spec),
        r.garbage_sources.len(),
        names.join(", ")
    );
    Ok(())
}

fn layout_cmd(circuit: CircuitKind, out: &Path) -> Result<()> {
    let layout = Design::new(circuit, None).layout()?;
    let m = layout_metrics(&layout)?;
    write(out, "layout.json", &layout.to_json()?)?;
    write(out, "layout_metrics.json", &pretty(&serde_json::to_value(m)?)?)?;
    println!(
        "{circuit}: {} cells, {:.4} um2, {} clock zones, {} layers",
        m.cell_count, m.area_um2, m.delay_zones, m.layer_count
    );
    Ok(())
}

fn sim_cmd(layout: &Path, spec: &Path, args: &SimArgs, out: &Path) -> Result<()> {
    let layout = read_layout(layout)?;
    let spec = read_spec(spec)?;
    let outcome = run_sim(&layout, &spec, args, out)?;
    report_verdict(&outcome.verdict)
}

#[allow(clippy::too_many_arguments)]
fn fault_cmd(
    layout: &Path,
    spec: &Path,
    cell: &str,
    dirs: &str,
    step: f64,
    max: f64,
    clock: Clock,
    out: &Path,
) -> Result<()> {
    let layout = read_layout(layout)?;
    let spec = read_spec(spec)?;
    let directions = dirs
        .chars()
        .map(|c| Direction::from_char(c).with_context(|| format!("unknown direction `{c}` (use N, S, E, W)")))
        .collect::<Result<Vec<_>>>()?;
    let config = FaultSweepConfig {
        directions,
        step_nm: step,
        max_nm: max,
        scheme: clock.into(),
        ..FaultSweepConfig::new(cell, spec)
    };
    let r = sweep::<f64>(&layout, &config)?;
    write(out, &format!("fault_{cell}.csv"), &r.to_csv())?;
    write(out, &format!("fault_{cell}.json"), &r.summary_json()?)?;
    for d in &r.directions {
        let tail = if d.not_possible { ", then blocked" } else { "" };
        println!("{cell} {}: normal up to {} nm{tail}", d.direction.as_char(), d.max_normal_nm);
    }
    Ok(())
}

fn report_cmd(targets: &[CircuitKind], out: Option<&Path>) -> Result<()> {
    let rows = targets.iter().map(|&k| report::row(Design::new(k, None))).collect::<Result<Vec<_>>>()?;
    print!("{}", report::to_text(&rows));
    if let Some(dir) = out {
        write(dir, "report.csv", &report::to_csv(&rows)?)?;
        write(dir, "report.txt", &report::to_text(&rows))?;
    }
    Ok(())
}

fn stage<T>(name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    f().with_context(|| format!("pipeline stage `{name}` failed"))
}

fn pipeline(circuit: CircuitKind, form: Option<AdderForm>, args: &SimArgs, out: &Path) -> Result<()> {
    let design = Design::new(circuit, form);
    let (net, spec) = stage("synth", || {
        let net = design.network()?;
        let spec = net.to_truth_spec()?;
        write(out, "network.json", &net.to_json()?)?;
        write(out, "spec.json", &spec.to_json()?)?;
        Ok((net, spec))
    })?;
    stage("logic-check", || design.check_logic(&net))?;
    let layout = stage("layout", || {
        let layout = design.layout()?;
        layout.validate()?;
        write(out, "layout.json", &layout.to_json()?)?;
        Ok(layout)
    })?;
    let geo = layout_metrics(&layout)?;
    let outcome = stage("sim", || run_sim(&layout, &spec, args, out))?;
    let logic = net.metrics();
    let summary = json!({
        "circuit": circuit.name(),
        "form": design.form.name(),
        "seed": args.seed,
        "clock": ClockScheme::from(args.clock),
        "logic": logic,
        "layout": geo,
        "logic_check": "exhaustive",
        "vectors_simulated": outcome.verdict.vectors,
        "samples": outcome.samples,
        "passed": outcome.verdict.passed,
        "files": outcome.files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
    });
    write(out, "summary.json", &pretty(&summary)?)?;
    println!(
        "{circuit}: logic exhaustive ok; layout {} cells, {:.4} um2, {} zones, {} layers",
        geo.cell_count, geo.area_um2, geo.delay_zones, geo.layer_count
    );
    stage("verify", || report_verdict(&outcome.verdict))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Synth { circuit, form, out } => synth(circuit, form, &out),
        Command::Reversibilize { spec, policy, out } => reversibilize_cmd(&spec, policy, &out),
        Command::Layout { circuit, out } => layout_cmd(circuit, &out),
        Command::Sim { layout, spec, sim, out } => sim_cmd(&layout, &spec, &sim, &out),
        Command::FaultSweep { layout, spec, cell, dirs, step, max, clock, out } => {
            fault_cmd(&layout, &spec, &cell, &dirs, step, max, clock, &out)
        }
        Command::Report { targets, out } => report_cmd(&targets, out.as_deref()),
        Command::Pipeline { circuit, form, sim, out } => pipeline(circuit, form, &sim, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
