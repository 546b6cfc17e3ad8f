//! Subcommands and pipelines behind the `annhard` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use annhard_core::ann_harness::{make_plan, partitioned_closest_pair, AnnOracle, ExactOracle, SamplingOracle};
use annhard_core::bits::BitVector;
use annhard_core::cp_reduction::{choose_t, hardness_report, reduce_with, Caps, Metric};
use annhard_core::edit_reduction::{
    concentration_report, default_k, measure_lambda, measure_lcs_fraction, reduce_hamming_to_edit, EmbedConfig,
    GadgetMode,
};
use annhard_core::formats;
use annhard_core::instances::{gen_ov, Force, OvGenConfig};
use annhard_core::protocol::{self, CodeChoice, FieldPolicy, MeasureConfig, ProtocolParams, SubsetSource};
use annhard_core::seed::{stage, sub_seed};
use annhard_core::solvers::{closest_pair, solve_ov};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "annhard", version, about = "OV to closest-pair reductions, protocols and oracles")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads; 0 uses every core. Never changes outputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Kv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an Orthogonal Vectors instance.
    GenOv(GenOvArgs),
    /// Reduce an OV instance to a Hamming closest-pair instance.
    ReduceCp(ReduceCpArgs),
    /// Embed a Hamming instance into edit distance.
    ReduceEdit(ReduceEditArgs),
    /// Run and measure the set disjointness protocols.
    Protocol(ProtocolArgs),
    /// Brute-force closest pair.
    Solve(SolveArgs),
    /// Closest pair through a nearest-neighbour oracle.
    AnnHarness(AnnArgs),
    /// Random string statistics.
    Stats(StatsArgs),
    /// gen-ov, reduce-cp, optional reduce-edit, solve and verify.
    Pipeline(PipelineArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GenOvArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long = "na")]
    pub n_a: usize,
    #[arg(long = "nb")]
    pub n_b: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value = "any")]
    pub force: String,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Rs,
    Hermitian,
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    #[arg(long, value_enum, default_value_t = BackendArg::Rs)]
    pub backend: BackendArg,
    /// Characteristic for the Reed–Solomon field; smallest admissible when
    /// omitted.
    #[arg(long = "char")]
    pub characteristic: Option<u32>,
    /// q for the Hermitian backend.
    #[arg(long, default_value_t = 3)]
    pub q: u32,
    /// Seed repetitions; least r reaching soundness 1/2 when omitted.
    #[arg(long)]
    pub reps: Option<usize>,
}

impl CodeArgs {
    fn choice(&self) -> CodeChoice {
        match self.backend {
            BackendArg::Hermitian => CodeChoice::Hermitian { q: self.q },
            BackendArg::Rs => CodeChoice::ReedSolomon(match self.characteristic {
                Some(p) => FieldPolicy::Characteristic(p),
                None => FieldPolicy::Smallest,
            }),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CapArgs {
    #[arg(long, default_value_t = 100_000)]
    pub max_merlin: u128,
    #[arg(long, default_value_t = 10_000)]
    pub max_seeds: u128,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_bob: u128,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            merlin: self.max_merlin,
            seeds: self.max_seeds,
            bob: self.max_bob,
            ..Caps::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ReduceCpArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Target gap parameter; picks the smallest T with 1/(T′−1) ≤ ε.
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Fix T instead of deriving it from ε.
    #[arg(long = "T")]
    pub t: Option<usize>,
    #[command(flatten)]
    pub code: CodeArgs,
    #[command(flatten)]
    pub caps: CapArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Uniform,
    Kwise,
}

#[derive(Args, Debug, Clone)]
pub struct EditArgs {
    #[arg(long)]
    pub dprime: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Uniform)]
    pub mode: ModeArg,
    /// Independence for kwise mode; ⌈log₂log₂ N⌉ (at least 4) when omitted.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.15)]
    pub tau: f64,
    /// Samples for the λ̂ measurement.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

impl EditArgs {
    fn config(&self, n: usize, seed: u64) -> EmbedConfig {
        let mode = match self.mode {
            ModeArg::Uniform => GadgetMode::Uniform,
            ModeArg::Kwise => GadgetMode::KWise(self.k.unwrap_or_else(|| default_k(n))),
        };
        EmbedConfig {
            d_prime: self.dprime,
            mode,
            seed,
            tau: self.tau,
            lambda_samples: self.samples,
            ..EmbedConfig::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ReduceEditArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub edit: EditArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Ma,
    Ama,
}

#[derive(Args, Debug, Clone)]
pub struct ProtocolArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Ma)]
    pub variant: VariantArg,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
    #[arg(long = "T", default_value_t = 2)]
    pub t: usize,
    #[command(flatten)]
    pub code: CodeArgs,
    /// AMA: family size (8m when omitted); `--uniform` draws subsets directly.
    #[arg(long)]
    pub family_size: Option<usize>,
    #[arg(long)]
    pub uniform: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Overrides the metric recorded in the file.
    #[arg(long)]
    pub metric: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Exact,
    Sampling,
}

#[derive(Args, Debug, Clone)]
pub struct AnnArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleArg::Exact)]
    pub oracle: OracleArg,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Slack of the sampling oracle.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Lambda,
    Lcs,
    Concentration,
}

#[derive(Args, Debug, Clone)]
pub struct StatsArgs {
    #[arg(long, value_enum)]
    pub what: StatArg,
    /// String length.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Comma-separated t grid for the concentration table.
    #[arg(long, default_value = "8,16,32,64")]
    pub t: String,
}

#[derive(Args, Debug, Clone)]
pub struct PipelineArgs {
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long = "na", default_value_t = 4)]
    pub n_a: usize,
    #[arg(long = "nb", default_value_t = 4)]
    pub n_b: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value = "any")]
    pub force: String,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long = "T")]
    pub t: Option<usize>,
    #[command(flatten)]
    pub code: CodeArgs,
    #[command(flatten)]
    pub caps: CapArgs,
    /// Also run the edit embedding on the reduced instance.
    #[arg(long)]
    pub edit: bool,
    #[command(flatten)]
    pub edit_args: EditArgs,
    #[arg(long)]
    pub dir: PathBuf,
}

/// Ordered key/value output plus an optional verdict line.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub fields: Vec<(String, String)>,
    pub verdict: Option<String>,
    pub mismatch: bool,
}

impl Output {
    fn put(&mut self, k: &str, v: impl ToString) {
        self.fields.push((k.to_string(), v.to_string()));
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut s = String::new();
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            let _ = match format {
                OutputFormat::Kv => writeln!(s, "{k}={v}"),
                OutputFormat::Text => writeln!(s, "{k:<width$}  {v}"),
            };
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(s, "{v}");
        }
        s
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn protocol_params(m: usize, t: Option<usize>, epsilon: f64, code: &CodeArgs, caps: &Caps) -> Result<ProtocolParams> {
    Ok(match t {
        Some(t) => ProtocolParams::ma(m, t, &code.choice(), code.reps)?,
        None => {
            let (_, _, p) = choose_t(epsilon, m, &code.choice(), caps)?;
            match code.reps {
                Some(r) => ProtocolParams::ma(m, p.blocks(), &code.choice(), Some(r))?,
                None => p,
            }
        }
    })
}

fn cmd_gen_ov(a: &GenOvArgs, seed: u64, out: &mut Output) -> Result<()> {
    let force: Force = a.force.parse()?;
    let cfg = OvGenConfig {
        density: a.density,
        budget: a.budget,
        ..OvGenConfig::new(a.m, a.n_a, a.n_b, force, seed)
    };
    let ov = gen_ov(&cfg)?;
    write(&a.out, &formats::write_ov(&ov))?;
    out.put("m", ov.m);
    out.put("nA", ov.a.len());
    out.put("nB", ov.b.len());
    out.put("force", force);
    out.put("orthogonal", solve_ov(&ov).is_some());
    out.put("out", a.out.display());
    Ok(())
}

fn cert_fields(out: &mut Output, cert: &annhard_core::cp_reduction::ReductionCert) {
    out.put("T", cert.t);
    out.put("Tprime", cert.t_prime);
    out.put("R", cert.seeds);
    out.put("r", cert.reps);
    out.put("M", cert.merlin);
    out.put("field", format!("GF({}^{})", cert.p, cert.e));
    out.put("D_yes", cert.d_yes);
    out.put("D_no", cert.d_no);
    out.put("gap", format!("{}/{}", cert.gap.numer(), cert.gap.denom()));
    out.put("d", cert.dimension);
}

fn cmd_reduce_cp(a: &ReduceCpArgs, seed: u64, out: &mut Output) -> Result<()> {
    let ov = formats::read_ov(&read(&a.input)?).context("parsing OV instance")?;
    let caps = a.caps.caps();
    let params = protocol_params(ov.m, a.t, a.epsilon, &a.code, &caps)?;
    let (cp, cert) = reduce_with(&ov, &params, &caps, seed)?;
    write(&a.out, &formats::write_cp(&cp))?;
    write(&a.cert, &formats::write_cert(&cert))?;
    cert_fields(out, &cert);
    let h = hardness_report(&cert, ov.a.len() + ov.b.len());
    out.put("blowup", h.blowup);
    out.put("n_cp", h.n_cp);
    out.put("delta", format!("{:.6}+{:.6}*delta_OV", h.delta_const, h.delta_ov_coeff));
    Ok(())
}

fn cmd_reduce_edit(a: &ReduceEditArgs, seed: u64, out: &mut Output) -> Result<()> {
    let cp = formats::read_cp(&read(&a.input)?).context("parsing CP instance")?;
    let cfg = a.edit.config(cp.a.len() + cp.b.len(), seed);
    let (edit, rep) = reduce_hamming_to_edit(&cp, &cfg)?;
    write(&a.out, &formats::write_cp(&edit))?;
    write(&a.report, &formats::write_embedding_report(&rep))?;
    embedding_fields(out, &rep);
    Ok(())
}

fn embedding_fields(out: &mut Output, rep: &annhard_core::edit_reduction::EmbeddingReport) {
    out.put("d_prime", rep.d_prime);
    out.put("edit_d", rep.d);
    out.put("mode", rep.mode.tag());
    out.put("lambda_hat", format!("{:.4}", rep.lambda_hat));
    out.put("lambda_stderr", format!("{:.4}", rep.lambda_stderr));
    out.put("tau", rep.tau);
    out.put("tau_hat", format!("{:.4}", rep.tau_hat));
    out.put("violations", rep.violations.len());
    out.put("flagged", rep.flagged());
    out.put("upper_bound_ok", rep.upper_bound_ok);
    out.put("ordering_qualifies", rep.ordering.qualifies);
    out.put("ordering_observed_holds", format!("{:?}", rep.ordering_observed.holds));
}

fn cmd_protocol(a: &ProtocolArgs, seed: u64, out: &mut Output) -> Result<()> {
    let alpha = BitVector::parse(&a.alpha)?;
    let beta = BitVector::parse(&a.beta)?;
    if alpha.len() != beta.len() {
        bail!("α has {} bits, β has {}", alpha.len(), beta.len());
    }
    let m = alpha.len();
    let code = a.code.choice();
    let params = match a.variant {
        VariantArg::Ma => ProtocolParams::ma(m, a.t, &code, a.code.reps)?,
        VariantArg::Ama => {
            let source = if a.uniform {
                SubsetSource::Uniform
            } else {
                let fseed = sub_seed(seed, 100);
                SubsetSource::Family {
                    seed: fseed,
                    members: protocol::newman_family(m, a.t, a.family_size, fseed),
                }
            };
            ProtocolParams::ama(m, a.t, &code, a.code.reps, source)?
        }
    };
    out.put("variant", params.variant().tag());
    out.put("m", m);
    out.put("T", params.blocks());
    out.put("mB", params.block_size());
    out.put("field", format!("GF({}^{})", params.field().characteristic(), params.field().degree()));
    out.put("backend", params.backend().tag());
    out.put("n", params.n());
    out.put("r", params.reps());
    out.put("merlin_bits", params.merlin_bits());
    out.put("bob_bits", params.bob_bits());
    out.put("seed_bits", params.seed_bits());
    out.put("disjoint", alpha.is_orthogonal(&beta));
    let run_seed = sub_seed(seed, stage::PROTOCOL);
    let tr = match a.variant {
        VariantArg::Ma => protocol::ma_run(&params, &alpha, &beta, run_seed)?,
        VariantArg::Ama => protocol::ama_run(&params, &alpha, &beta, run_seed)?,
    };
    out.put("run_seed", format!("{:?}", tr.seed));
    out.put("run_verdict", format!("{:?}", tr.verdict));
    match a.variant {
        VariantArg::Ma => {
            let mu = protocol::honest_merlin(&params, &alpha, &beta)?;
            let acc = protocol::accept_probability(&params, &alpha, &beta, &mu, &MeasureConfig::default())?;
            out.put("honest_accept", format!("{:.6}", acc.value()));
            let (s, _) = protocol::soundness_exhaustive(&params, &alpha, &beta)?;
            out.put("best_merlin_accept", format!("{}/{}", s.numer(), s.denom()));
        }
        VariantArg::Ama => {
            let f = protocol::step1_fraction(&params, &alpha, &beta)?;
            out.put("step1_fraction", format!("{}/{}", f.numer(), f.denom()));
            let s = protocol::ama_soundness_exhaustive(&params, &alpha, &beta, 100_000_000)?;
            out.put("best_merlin_accept", format!("{}/{}", s.numer(), s.denom()));
        }
    }
    Ok(())
}

fn cmd_solve(a: &SolveArgs, out: &mut Output) -> Result<()> {
    let mut cp = formats::read_cp(&read(&a.input)?).context("parsing CP instance")?;
    if let Some(m) = &a.metric {
        cp.metric = m.parse::<Metric>()?;
    }
    let res = closest_pair(&cp)?;
    for line in formats::write_solve(&res).lines() {
        let (k, v) = line.split_once('=').expect("key=value");
        out.put(k, v);
    }
    Ok(())
}

fn cmd_ann(a: &AnnArgs, seed: u64, out: &mut Output) -> Result<()> {
    let cp = formats::read_cp(&read(&a.input)?).context("parsing CP instance")?;
    let plan = make_plan(cp.a.len(), a.c)?;
    let sampling = SamplingOracle {
        epsilon: a.epsilon,
        seed: sub_seed(seed, stage::ANN),
    };
    let oracle: &dyn AnnOracle = match a.oracle {
        OracleArg::Exact => &ExactOracle,
        OracleArg::Sampling => &sampling,
    };
    let (res, ledger) = partitioned_closest_pair(&cp, oracle, &plan)?;
    out.put("oracle", ledger.oracle);
    out.put("gamma", plan.gamma);
    out.put("part_size", plan.part_size);
    out.put("parts", ledger.parts);
    out.put("queries", ledger.queries);
    out.put("preprocessing_units", ledger.preprocessing_units);
    out.put("query_units", ledger.query_units);
    out.put("preprocessing_exponent", ledger.preprocessing_exponent);
    out.put("query_exponent", ledger.query_exponent);
    out.put("value", res.value);
    out.put("a", res.a);
    out.put("b", res.b);
    Ok(())
}

fn cmd_stats(a: &StatsArgs, seed: u64, out: &mut Output) -> Result<()> {
    let s = sub_seed(seed, stage::STATS);
    match a.what {
        StatArg::Lambda => {
            let e = measure_lambda(a.n, a.samples, s)?;
            out.put("d_prime", a.n);
            out.put("lambda_hat", e.mean);
            out.put("stderr", e.stderr);
            out.put("ratio", e.mean / a.n as f64);
        }
        StatArg::Lcs => {
            let e = measure_lcs_fraction(a.n, a.samples, s)?;
            out.put("n", a.n);
            out.put("lcs_fraction", e.mean);
            out.put("stderr", e.stderr);
        }
        StatArg::Concentration => {
            let grid: Vec<f64> = a
                .t
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| anyhow!("bad t value {x:?}")))
                .collect::<Result<_>>()?;
            let rep = concentration_report(a.n, None, a.samples, &grid, s)?;
            out.put("d_prime", a.n);
            out.put("mean", rep.mean);
            for row in &rep.rows {
                out.put(
                    &format!("t={}", row.t),
                    format!("empirical={} bound={} sigma={} ok={}", row.empirical, row.bound, row.sigma, row.dominated()),
                );
            }
        }
    }
    Ok(())
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.with_context(|| format!("stage {name} failed"))
}

/// Compares the closest-pair value against the OV ground truth.
pub fn verdict(orthogonal: bool, value: u128, d_yes: u128, d_no: u128) -> std::result::Result<String, String> {
    match orthogonal {
        true if value == d_yes => Ok("VERIFIED dist=R(T'-1)".to_string()),
        false if value >= d_no => Ok("VERIFIED dist>=R*T'".to_string()),
        true => Err(format!("MISMATCH yes-instance dist={value} expected D_yes={d_yes}")),
        false => Err(format!("MISMATCH no-instance dist={value} below D_no={d_no}")),
    }
}

fn cmd_pipeline(a: &PipelineArgs, seed: u64, out: &mut Output) -> Result<()> {
    let dir = &a.dir;
    let force: Force = a.force.parse()?;
    let ov = stage(
        "gen-ov",
        gen_ov(&OvGenConfig {
            density: a.density,
            ..OvGenConfig::new(a.m, a.n_a, a.n_b, force, sub_seed(seed, stage::GEN_OV))
        })
        .map_err(Into::into),
    )?;
    write(&dir.join("ov.txt"), &formats::write_ov(&ov))?;
    let caps = a.caps.caps();
    let (cp, cert) = stage(
        "reduce-cp",
        protocol_params(ov.m, a.t, a.epsilon, &a.code, &caps)
            .and_then(|p| Ok(reduce_with(&ov, &p, &caps, sub_seed(seed, stage::REDUCE_CP))?)),
    )?;
    write(&dir.join("cp.txt"), &formats::write_cp(&cp))?;
    write(&dir.join("cert.txt"), &formats::write_cert(&cert))?;
    cert_fields(out, &cert);
    if a.edit {
        let cfg = a.edit_args.config(cp.a.len() + cp.b.len(), sub_seed(seed, stage::REDUCE_EDIT));
        let (edit, rep) = stage("reduce-edit", reduce_hamming_to_edit(&cp, &cfg).map_err(Into::into))?;
        write(&dir.join("edit.txt"), &formats::write_cp(&edit))?;
        write(&dir.join("embedding.txt"), &formats::write_embedding_report(&rep))?;
        embedding_fields(out, &rep);
    }
    let res = stage("solve", closest_pair(&cp).map_err(Into::into))?;
    write(&dir.join("solve.txt"), &formats::write_solve(&res))?;
    let truth = solve_ov(&ov).is_some();
    out.put("ov_orthogonal", truth);
    out.put("closest", res.value);
    out.put("witness", format!("{},{}", res.a, res.b));
    let line = match verdict(truth, res.value as u128, cert.d_yes, cert.d_no) {
        Ok(v) => v,
        Err(v) => {
            out.mismatch = true;
            v
        }
    };
    let mut report = out.render(OutputFormat::Kv);
    report.push_str(&line);
    report.push('\n');
    write(&dir.join("report.txt"), &report)?;
    out.verdict = Some(line);
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut Output) -> Result<()> {
    out.put("seed", cli.seed);
    match &cli.command {
        Command::GenOv(a) => cmd_gen_ov(a, cli.seed, out),
        Command::ReduceCp(a) => cmd_reduce_cp(a, cli.seed, out),
        Command::ReduceEdit(a) => cmd_reduce_edit(a, cli.seed, out),
        Command::Protocol(a) => cmd_protocol(a, cli.seed, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::AnnHarness(a) => cmd_ann(a, cli.seed, out),
        Command::Stats(a) => cmd_stats(a, cli.seed, out),
        Command::Pipeline(a) => cmd_pipeline(a, cli.seed, out),
    }
}

/// Exit code for an error chain: 3 if any cause is a cap overflow.
pub fn error_code(err: &anyhow::Error) -> i32 {
    let cap = err
        .chain()
        .any(|e| e.downcast_ref::<annhard_core::Error>().is_some_and(|e| e.is_cap_exceeded()));
    if cap {
        EXIT_CAP
    } else {
        EXIT_USAGE
    }
}

/// Runs a parsed command; returns (exit code, stdout, stderr).
pub fn run(cli: &Cli) -> (i32, String, String) {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => return (EXIT_USAGE, String::new(), format!("error: {e}\n")),
    };
    let mut out = Output::default();
    match pool.install(|| dispatch(cli, &mut out)) {
        Ok(()) => {
            let code = if out.mismatch { EXIT_MISMATCH } else { EXIT_OK };
            (code, out.render(cli.format), String::new())
        }
        Err(e) => (error_code(&e), String::new(), format!("error: {e:#}\n")),
    }
}

/// Parses `args` (without the program name) and runs them.
pub fn run_args<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("annhard")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                (code, String::new(), text)
            } else {
                (code, text, String::new())
            }
        }
    }
}
