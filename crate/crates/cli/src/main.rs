use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use factlab::arith::{self, gen_balanced_semiprime, iroot, parse_bigint, parse_rational};
use factlab::census::{count_balanced, CSV_HEADER};
use factlab::fermat::{fermat_factor, shifted_fermat, triangular_fermat, SearchOutcome};
use factlab::lattice::{default_delta, lll_reduce, Basis};
use factlab::smallroots::{factor_known_low_bits, factor_shifted_center, Recovery};
use factlab::trivariate::{run_algorithm_one, AlgorithmConfig, ExperimentRecord, Preset};
use num_bigint::{BigInt, RandBigInt};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

fn big_arg(s: &str) -> Result<BigInt, String> {
    parse_bigint(s).map_err(|e| e.to_string())
}

fn rat_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "factlab",
    version,
    about = "Factoring experiments on balanced semiprimes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor one N with the chosen method.
    Factor(FactorArgs),
    /// Generate a balanced semiprime.
    Gen(GenArgs),
    /// Count balanced semiprimes up to x.
    Census(CensusArgs),
    /// LLL-reduce a basis file.
    Lll(LllArgs),
    /// Run an experiment harness.
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
    /// Time a factoring method over generated instances.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorMethod {
    Fermat,
    Triangular,
    Shifted,
    Lowbits,
    ShiftedCenter,
}

#[derive(Args)]
struct FactorArgs {
    #[arg(long, value_enum)]
    method: FactorMethod,
    #[arg(long, value_parser = big_arg)]
    n: BigInt,
    #[arg(long, value_parser = rat_arg)]
    gamma: Option<BigRational>,
    #[arg(long, value_parser = rat_arg)]
    alpha: Option<BigRational>,
    #[arg(long, value_parser = rat_arg)]
    beta: Option<BigRational>,
    /// Offset bounds for shifted-center; default N^(1/4).
    #[arg(long, value_parser = big_arg)]
    x_bound: Option<BigInt>,
    #[arg(long, value_parser = big_arg)]
    y_bound: Option<BigInt>,
    #[arg(long, value_parser = big_arg)]
    plow: Option<BigInt>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: u64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    bits: u32,
    #[arg(long, value_parser = rat_arg)]
    ratio: BigRational,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    x: u64,
    #[arg(long, value_parser = rat_arg)]
    ratio: BigRational,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct LllArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = rat_arg)]
    delta: Option<BigRational>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Experiment {
    /// Trivariate factoring trials, one JSONL record each.
    Trivariate(TrivariateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    PaperExact,
    Scaled,
}

#[derive(Args)]
struct TrivariateArgs {
    #[arg(long)]
    bits: u32,
    #[arg(long)]
    trials: u64,
    #[arg(long, value_parser = rat_arg)]
    tau: Option<BigRational>,
    #[arg(long, value_parser = rat_arg)]
    beta: Option<BigRational>,
    #[arg(long, value_parser = rat_arg)]
    eps: Option<BigRational>,
    #[arg(long, value_enum, default_value = "paper-exact")]
    preset: PresetArg,
    /// Plant centers within 2^k of the true factors, with a box of that size.
    #[arg(long)]
    planted_bits: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchMethod {
    Fermat,
    Triangular,
    Lowbits,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    method: BenchMethod,
    #[arg(long)]
    bits: u32,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, value_parser = rat_arg, default_value = "2")]
    ratio: BigRational,
    /// Known low bits for lowbits; default ceil(bits / 2.5).
    #[arg(long)]
    t: Option<u32>,
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Exit status of a command that ran without a usage error.
enum Status {
    Ok,
    Failed,
}

type CmdResult = Result<Status, String>;

/// `FACTLAB_SEED` wins over `--seed`.
fn effective_seed(flag: u64) -> Result<u64, String> {
    match std::env::var("FACTLAB_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("FACTLAB_SEED is not an integer: {v}")),
        Err(_) => Ok(flag),
    }
}

fn rat_str(r: &BigRational) -> String {
    arith::format_rational(r)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn verified(n: &BigInt, p: &BigInt, q: &BigInt) -> bool {
    p > &BigInt::one() && q > &BigInt::one() && &(p * q) == n
}

fn factor(a: FactorArgs) -> CmdResult {
    let n = &a.n;
    let mut out = json!({ "n": n.to_string() });
    let found: Option<(BigInt, BigInt)> = match a.method {
        FactorMethod::Fermat | FactorMethod::Triangular | FactorMethod::Shifted => {
            let res = match a.method {
                FactorMethod::Fermat => fermat_factor(n, a.max_steps),
                FactorMethod::Triangular => triangular_fermat(n, a.max_steps),
                _ => {
                    let gamma = a
                        .gamma
                        .clone()
                        .ok_or("--gamma is required for --method shifted")?;
                    out["gamma"] = json!(rat_str(&gamma));
                    shifted_fermat(n, &gamma, a.max_steps)
                }
            }
            .map_err(|e| e.to_string())?;
            match res {
                SearchOutcome::Found(r) => {
                    if let Value::Object(fields) = serde_json::to_value(&r).expect("serializable") {
                        out.as_object_mut().expect("object").extend(fields);
                    }
                    (!r.trivial).then(|| (r.p.clone(), r.q.clone()))
                }
                SearchOutcome::Exhausted { steps } => {
                    out["status"] = json!("exhausted");
                    out["steps"] = json!(steps);
                    None
                }
            }
        }
        FactorMethod::Lowbits => {
            let plow = a
                .plow
                .clone()
                .ok_or("--plow is required for --method lowbits")?;
            let t = a.t.ok_or("--t is required for --method lowbits")?;
            out["plow"] = json!(plow.to_string());
            out["t"] = json!(t);
            recovery(
                &mut out,
                factor_known_low_bits(n, &plow, t).map_err(|e| e.to_string())?,
            )
        }
        FactorMethod::ShiftedCenter => {
            let alpha = a
                .alpha
                .clone()
                .ok_or("--alpha is required for --method shifted-center")?;
            let beta = a
                .beta
                .clone()
                .ok_or("--beta is required for --method shifted-center")?;
            let n4 = iroot(n, 4).map_err(|e| e.to_string())?;
            let xb = a.x_bound.clone().unwrap_or_else(|| n4.clone());
            let yb = a.y_bound.clone().unwrap_or(n4);
            out["alpha"] = json!(rat_str(&alpha));
            out["beta"] = json!(rat_str(&beta));
            out["x_bound"] = json!(xb.to_string());
            out["y_bound"] = json!(yb.to_string());
            recovery(
                &mut out,
                factor_shifted_center(n, &alpha, &beta, &xb, &yb).map_err(|e| e.to_string())?,
            )
        }
    };
    match found {
        Some((p, q)) if verified(n, &p, &q) => {
            out["p"] = json!(p.to_string());
            out["q"] = json!(q.to_string());
            out["verified"] = json!(true);
            print_json(&out);
            Ok(Status::Ok)
        }
        _ => {
            if let Some(obj) = out.as_object_mut() {
                obj.remove("p");
                obj.remove("q");
            }
            out["verified"] = json!(false);
            print_json(&out);
            Ok(Status::Failed)
        }
    }
}

fn recovery(out: &mut Value, r: Recovery) -> Option<(BigInt, BigInt)> {
    out["lattice_calls"] = json!(r.lattice_calls());
    match r.factors() {
        Some(f) => {
            out["status"] = json!("found");
            out["x0"] = json!(f.x0.to_string());
            out["y0"] = json!(f.y0.to_string());
            Some((f.p.clone(), f.q.clone()))
        }
        None => {
            out["status"] = json!("not-found");
            None
        }
    }
}

fn generate(a: GenArgs) -> CmdResult {
    let seed = effective_seed(a.seed)?;
    let sp = gen_balanced_semiprime(a.bits, &a.ratio, seed).map_err(|e| e.to_string())?;
    let mut v = serde_json::to_value(&sp).expect("serializable");
    v["bits"] = json!(a.bits);
    v["seed"] = json!(seed);
    print_json(&v);
    Ok(Status::Ok)
}

fn census(a: CensusArgs) -> CmdResult {
    let row = count_balanced(a.x, &a.ratio).map_err(|e| e.to_string())?;
    match a.format {
        Format::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", row.to_csv());
        }
        Format::Json => print_json(&serde_json::to_value(&row).expect("serializable")),
        Format::Text => println!(
            "x={} c={} count={} model={} ratio={}",
            row.x,
            rat_str(&row.c),
            row.exact_count,
            row.model,
            row.ratio
        ),
    }
    Ok(Status::Ok)
}

fn lll(a: LllArgs) -> CmdResult {
    let text = fs::read_to_string(&a.input).map_err(|e| format!("{}: {e}", a.input.display()))?;
    let basis = Basis::from_text(&text).map_err(|e| e.to_string())?;
    let delta = a.delta.clone().unwrap_or_else(default_delta);
    let (reduced, report) = lll_reduce(&basis, &delta).map_err(|e| e.to_string())?;
    let mut v = json!({ "input": a.input.display().to_string(), "delta": rat_str(&delta), "report": report });
    match &a.out {
        Some(path) => {
            fs::write(path, reduced.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
            v["out"] = json!(path.display().to_string());
        }
        None => {
            let rows: Vec<Vec<String>> = reduced
                .rows()
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect())
                .collect();
            v["basis"] = json!(rows);
        }
    }
    print_json(&v);
    Ok(Status::Ok)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())
}

fn trivariate_trial(a: &TrivariateArgs, seed: u64, i: u64) -> Result<ExperimentRecord, String> {
    let two = BigRational::from_integer(BigInt::from(2));
    let trial_seed = seed.wrapping_add(i);
    let sp = gen_balanced_semiprime(a.bits, &two, trial_seed).map_err(|e| e.to_string())?;
    let mut cfg = AlgorithmConfig {
        preset: match a.preset {
            PresetArg::PaperExact => Preset::PaperExact,
            PresetArg::Scaled => Preset::Scaled,
        },
        ..AlgorithmConfig::default()
    };
    if let Some(t) = &a.tau {
        cfg.tau = t.clone();
    }
    if let Some(b) = &a.beta {
        cfg.beta = b.clone();
    }
    if let Some(e) = &a.eps {
        cfg.eps = e.clone();
    }
    if let Some(k) = a.planted_bits {
        let mut rng = rand_chacha_rng(trial_seed);
        let r = BigInt::one() << k;
        let x0 = rng.gen_bigint_range(&-&r, &(&r + 1u32));
        let y0 = rng.gen_bigint_range(&-&r, &(&r + 1u32));
        cfg.p0 = Some(&sp.p - x0);
        cfg.q0 = Some(&sp.q - y0);
        let z = arith::ceil_sqrt(&sp.n).map_err(|e| e.to_string())? * 3u32;
        cfg.bounds = Some([r.clone(), r, z]);
    }
    let mut rec = run_algorithm_one(&sp.n, &cfg).map_err(|e| e.to_string())?;
    rec.seed = Some(trial_seed);
    if let (Some(p), Some(q)) = (&rec.p, &rec.q) {
        if !verified(&sp.n, p, q) {
            return Err("internal error: unverified factors".into());
        }
    }
    Ok(rec)
}

fn rand_chacha_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15)
}

fn experiment(which: Experiment) -> CmdResult {
    let Experiment::Trivariate(a) = which;
    let seed = effective_seed(a.seed)?;
    let records: Vec<Result<ExperimentRecord, String>> = pool(a.jobs)?.install(|| {
        (0..a.trials)
            .into_par_iter()
            .map(|i| trivariate_trial(&a, seed, i))
            .collect()
    });
    let mut file = fs::File::create(&a.out).map_err(|e| format!("{}: {e}", a.out.display()))?;
    let mut counts = serde_json::Map::new();
    for r in records {
        let rec = r?;
        let line = serde_json::to_string(&rec).expect("serializable");
        writeln!(file, "{line}").map_err(|e| e.to_string())?;
        let key = serde_json::to_value(rec.outcome)
            .expect("serializable")
            .as_str()
            .unwrap_or("?")
            .to_string();
        let c = counts.entry(key).or_insert(json!(0));
        *c = json!(c.as_u64().unwrap_or(0) + 1);
    }
    print_json(&json!({
        "experiment": "trivariate",
        "bits": a.bits,
        "trials": a.trials,
        "seed": seed,
        "preset": match a.preset { PresetArg::PaperExact => "paper-exact", PresetArg::Scaled => "scaled" },
        "planted_bits": a.planted_bits,
        "outcomes": counts,
        "out": a.out.display().to_string(),
    }));
    Ok(Status::Ok)
}

fn bench_one(a: &BenchArgs, seed: u64) -> Result<Value, String> {
    let sp = gen_balanced_semiprime(a.bits, &a.ratio, seed).map_err(|e| e.to_string())?;
    let start = std::time::Instant::now();
    let mut v = json!({ "n": sp.n.to_string(), "bits": a.bits, "seed": seed });
    let found = match a.method {
        BenchMethod::Fermat | BenchMethod::Triangular => {
            let res = match a.method {
                BenchMethod::Fermat => fermat_factor(&sp.n, a.max_steps),
                _ => triangular_fermat(&sp.n, a.max_steps),
            }
            .map_err(|e| e.to_string())?;
            v["steps"] = json!(res.steps());
            res.found()
                .filter(|r| !r.trivial)
                .map(|r| (r.p.clone(), r.q.clone()))
        }
        BenchMethod::Lowbits => {
            let t = a.t.unwrap_or((a.bits * 2).div_ceil(5));
            let plow = &sp.p % (BigInt::one() << t);
            v["t"] = json!(t);
            recovery(
                &mut v,
                factor_known_low_bits(&sp.n, &plow, t).map_err(|e| e.to_string())?,
            )
        }
    };
    let ok = found.is_some_and(|(p, q)| verified(&sp.n, &p, &q));
    v["found"] = json!(ok);
    v["wall_ms"] = json!(start.elapsed().as_millis() as u64);
    Ok(v)
}

fn bench(a: BenchArgs) -> CmdResult {
    let seed = effective_seed(a.seed)?;
    let rows: Vec<Result<Value, String>> = pool(a.jobs)?.install(|| {
        (0..a.trials)
            .into_par_iter()
            .map(|i| bench_one(&a, seed.wrapping_add(i)))
            .collect()
    });
    for r in rows {
        print_json(&r?);
    }
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Factor(a) => factor(a),
        Command::Gen(a) => generate(a),
        Command::Census(a) => census(a),
        Command::Lll(a) => lll(a),
        Command::Experiment { which } => experiment(which),
        Command::Bench(a) => bench(a),
    };
    match res {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
