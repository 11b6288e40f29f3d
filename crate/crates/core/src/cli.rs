//! Command-line front end.
//!
//! Exit codes: `0` success, `1` usage, input or I/O error, `2` a checked
//! inequality failed (a witness file is written).

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};

use crate::asymptotics::{self, ResidualRow};
use crate::dist::{format_rational, parse_rational, Dist, LatticePoint, Rational};
use crate::error::Error;
use crate::families::{self, AlphaParam, BernoulliParam};
use crate::par::ExecMode;
use crate::random;
use crate::reduction::{self, Decomposition};
use crate::search::{self, Target};
use crate::transforms::{self, IndexedSeq};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "anticonc", version, about = "Exact anti-concentration computations on integer lattices")]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Where to write the counterexample when a check fails.
    #[arg(long, global = true, default_value = "witness.json")]
    witness: PathBuf,
    /// Evaluate scans on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Operations on distributions read from JSON files.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Named families.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Rearrangements of a finite nonnegative sequence centred at 0.
    #[command(subcommand)]
    Rearrange(RearrangeCmd),
    /// Verify an inequality on given or random instances.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Split a measure with concentration at most alpha into extreme parts.
    Decompose {
        #[command(flatten)]
        input: Inputs,
        #[arg(long, value_parser = rational)]
        alpha: Rational,
    },
    /// Exact values against asymptotic expansions.
    ///
    /// With --format csv the row commands print the columns
    /// n,p,exact,asym,residual,scaled_residual.
    #[command(subcommand)]
    Asym(AsymCmd),
    /// Exhaustive scans.
    #[command(subcommand)]
    Scan(ScanCmd),
}

#[derive(Args, Debug, Clone)]
struct Inputs {
    /// JSON file holding one distribution or an array of them; repeatable.
    #[arg(long = "in", value_name = "FILE")]
    inputs: Vec<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Random {
    /// Random instances to generate when no input is given.
    #[arg(long, default_value_t = 500)]
    count: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum DistCmd {
    /// Law of the sum of all inputs.
    Conv(Inputs),
    /// Mass at a point.
    Atom {
        #[command(flatten)]
        input: Inputs,
        #[arg(long, value_parser = point)]
        x: LatticePoint,
    },
    /// Concentration `max_x P(X = x)` and its smallest maximizer.
    Q(Inputs),
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    Ualpha {
        #[arg(long, value_parser = rational)]
        alpha: Rational,
    },
    Binom {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        p: Rational,
    },
    /// Alternating sum of n iid Bernoulli(p) variables, p ≤ 1/2.
    Tn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        p: Rational,
    },
}

#[derive(Args, Debug)]
struct SeqArg {
    /// Comma-separated values at positions -r..=r.
    #[arg(long, value_parser = rational, value_delimiter = ',', allow_hyphen_values = true)]
    seq: Vec<Rational>,
}

#[derive(Subcommand, Debug)]
enum RearrangeCmd {
    Left(SeqArg),
    Right(SeqArg),
    Sym(SeqArg),
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Rearrangement inequality for sums over r + s + t + ... = 0.
    Gabriel {
        /// JSON file: array of sequences, each an array of rationals.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// First position (0-based) replaced by its symmetric rearrangement.
        #[arg(long, default_value_t = 2)]
        star_from: usize,
        #[command(flatten)]
        random: Random,
    },
    /// Interval probabilities of X+Y against X+Y' with Y' more peaked.
    Birnbaum {
        /// Three distributions X, Y, Y' in that order.
        #[command(flatten)]
        input: Inputs,
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        random: Random,
    },
    /// Balancing bound for an even number of summands.
    Balancing {
        #[command(flatten)]
        input: Inputs,
        #[arg(long, value_parser = point)]
        x: Option<LatticePoint>,
        #[command(flatten)]
        random: Random,
    },
    /// Point probabilities of sums of measures with concentration at most alpha.
    Theorem2 {
        #[command(flatten)]
        input: Inputs,
        #[arg(long, value_parser = rational)]
        alpha: Option<Rational>,
        #[arg(long, value_parser = point)]
        x: Option<LatticePoint>,
        #[command(flatten)]
        random: Random,
    },
    /// Concentration of partial sums never increases.
    Monotone {
        #[command(flatten)]
        input: Inputs,
        #[command(flatten)]
        random: Random,
    },
}

#[derive(Subcommand, Debug)]
enum AsymCmd {
    /// Upper bound on point probabilities for n summands of concentration at most alpha.
    Corollary2 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        alpha: Rational,
    },
    /// P(T_n = k) / P(T_n = 0) for even n.
    Smalldev {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_parser = rational)]
        p: Rational,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// P(T_n = 0).
    Tnzero {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_parser = rational)]
        p: Rational,
    },
    /// Central coefficient of (x^2 + b x + c)^n.
    Wagner {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        b: Rational,
        #[arg(long, value_parser = rational)]
        c: Rational,
    },
    /// Odd alternating sums with an extra summand, for each m.
    Largeodd {
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long, value_parser = rational)]
        p: Rational,
    },
}

#[derive(Subcommand, Debug)]
enum ScanCmd {
    /// Optimal number of negative signs for each p in (0, 1/2].
    ///
    /// With --format csv prints n,p_num,p_den,best_k_set,best_value, where
    /// best_k_set is `;`-separated and best_value is num/den.
    Kphase {
        #[arg(long)]
        n: usize,
        /// Number of grid points i/(2·grid), i = 1..=grid.
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Best ±1 weighting of n iid copies of the input.
    Signs {
        #[command(flatten)]
        input: Inputs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = point)]
        x: Option<LatticePoint>,
    },
    /// Best weighting from a finite grid, compared with the best sign pattern.
    Weights {
        #[command(flatten)]
        input: Inputs,
        #[arg(long)]
        n: usize,
        /// Comma-separated nonzero weights.
        #[arg(long, value_parser = rational, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<Rational>,
        #[arg(long, default_value_t = search::DEFAULT_WEIGHT_CAP)]
        cap: u128,
    },
    /// n iid copies of the input against the best sign pattern of iid U^alpha.
    Bounded {
        #[command(flatten)]
        input: Inputs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        alpha: Rational,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<LatticePoint, String> {
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| format!("invalid coordinate {c:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    LatticePoint::new(coords).map_err(|e| e.to_string())
}

/// A run either produces output or stops on a failed check.
enum Outcome {
    Ok(String),
    Violated { message: String, witness: Value },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

fn read_dists(input: &Inputs) -> Res<Vec<Dist>> {
    let mut out = Vec::new();
    for path in &input.inputs {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        match v {
            Value::Array(items) => {
                for item in &items {
                    out.push(Dist::from_json_value(item)?);
                }
            }
            other => out.push(Dist::from_json_value(&other)?),
        }
    }
    Ok(out)
}

fn one_dist(input: &Inputs) -> Res<Dist> {
    let ds = read_dists(input)?;
    match ds.len() {
        1 => Ok(ds.into_iter().next().expect("length checked")),
        0 => usage("expected one distribution, got none (use --in)"),
        k => usage(format!("expected one distribution, got {k}")),
    }
}

fn dists_json(ds: &[Dist]) -> Value {
    Value::Array(ds.iter().map(Dist::to_json_value).collect())
}

fn r(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn seq_json(s: &IndexedSeq) -> Value {
    Value::Array(s.values().iter().map(r).collect())
}

fn point_json(x: &LatticePoint) -> Value {
    json!(x.coords())
}

fn emit(v: Value) -> String {
    let mut s = serde_json::to_string(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn rows_output(rows: &[ResidualRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from(ResidualRow::CSV_HEADER);
            s.push('\n');
            for row in rows {
                s.push_str(&row.csv());
                s.push('\n');
            }
            s
        }
        Format::Json => emit(serde_json::to_value(rows).expect("rows serialize")),
    }
}

fn json_only(format: Format) -> Res<()> {
    if format == Format::Csv {
        return usage("this command only supports --format json");
    }
    Ok(())
}

fn exec_mode(cli: &Cli) -> ExecMode {
    if cli.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    }
}

fn execute(cli: &Cli) -> Res<Outcome> {
    let format = cli.format;
    if !matches!(cli.cmd, Cmd::Asym(_) | Cmd::Scan(ScanCmd::Kphase { .. })) {
        json_only(format)?;
    }
    let out = match &cli.cmd {
        Cmd::Dist(c) => dist_cmd(c)?,
        Cmd::Family(c) => family_cmd(c)?,
        Cmd::Rearrange(c) => rearrange_cmd(c)?,
        Cmd::Check(c) => return check_cmd(c),
        Cmd::Decompose { input, alpha } => {
            let mu = one_dist(input)?;
            let alpha = AlphaParam::new(alpha.clone())?;
            emit(decomposition_json(&reduction::extreme_decompose(&mu, &alpha)?))
        }
        Cmd::Asym(c) => asym_cmd(c, format)?,
        Cmd::Scan(c) => return scan_cmd(c, format, exec_mode(cli)),
    };
    Ok(Outcome::Ok(out))
}

fn dist_cmd(c: &DistCmd) -> Res<String> {
    Ok(match c {
        DistCmd::Conv(input) => {
            let ds = read_dists(input)?;
            if ds.is_empty() {
                return usage("no distributions given (use --in)");
            }
            emit(Dist::convolve_all(&ds)?.to_json_value())
        }
        DistCmd::Atom { input, x } => {
            let d = one_dist(input)?;
            if x.dim() != d.dim() {
                return Err(Error::DimensionMismatch { expected: d.dim(), found: x.dim() }.into());
            }
            emit(json!({ "x": point_json(x), "mass": r(&d.atom(x)) }))
        }
        DistCmd::Q(input) => {
            let (q, x) = one_dist(input)?.concentration();
            emit(json!({ "q": r(&q), "argmax": point_json(&x) }))
        }
    })
}

fn family_cmd(c: &FamilyCmd) -> Res<String> {
    let d = match c {
        FamilyCmd::Ualpha { alpha } => families::u_alpha(&AlphaParam::new(alpha.clone())?),
        FamilyCmd::Binom { n, p } => families::binomial(*n, &BernoulliParam::new(p.clone())?),
        FamilyCmd::Tn { n, p } => families::t_n(*n, &BernoulliParam::new(p.clone())?)?,
    };
    Ok(emit(d.to_json_value()))
}

fn rearrange_cmd(c: &RearrangeCmd) -> Res<String> {
    let (arg, f): (&SeqArg, fn(&IndexedSeq) -> crate::Result<IndexedSeq>) = match c {
        RearrangeCmd::Left(a) => (a, |s| Ok(transforms::rearrange_plus_left(s))),
        RearrangeCmd::Right(a) => (a, |s| Ok(transforms::rearrange_plus_right(s))),
        RearrangeCmd::Sym(a) => (a, transforms::rearrange_sym),
    };
    let seq = IndexedSeq::new(arg.seq.clone())?;
    Ok(emit(seq_json(&f(&seq)?)))
}

fn decomposition_json(d: &Decomposition) -> Value {
    match d {
        Decomposition::Extremal { a, y } => json!({
            "kind": "extremal",
            "a": a.iter().map(point_json).collect::<Vec<_>>(),
            "y": y.as_ref().map(point_json),
        }),
        Decomposition::Mixture { p, epsilon, mu1, mu2 } => json!({
            "kind": "mixture",
            "p": r(p),
            "epsilon": r(epsilon),
            "mu1": mu1.to_json_value(),
            "mu2": mu2.to_json_value(),
        }),
    }
}

fn violated(message: impl Into<String>, witness: Value) -> Res<Outcome> {
    Ok(Outcome::Violated { message: message.into(), witness })
}

fn summary(kind: &str, seed: Option<u64>, checked: usize, tight: usize, extra: Value) -> Outcome {
    let mut v = json!({ "check": kind, "instances": checked, "equalities": tight, "violations": 0 });
    if let Some(s) = seed {
        v["seed"] = json!(s);
    }
    if let Value::Object(m) = extra {
        for (k, x) in m {
            v[k] = x;
        }
    }
    Outcome::Ok(emit(v))
}

fn check_cmd(c: &CheckCmd) -> Res<Outcome> {
    match c {
        CheckCmd::Gabriel { input, star_from, random: rnd } => {
            let instances: Vec<Vec<IndexedSeq>> = match input {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let raw: Vec<Vec<String>> =
                        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let seqs = raw
                        .iter()
                        .map(|vals| IndexedSeq::new(vals.iter().map(|v| parse_rational(v)).collect::<crate::Result<_>>()?))
                        .collect::<crate::Result<Vec<_>>>()?;
                    vec![seqs]
                }
                None => {
                    let mut g = random::rng(rnd.seed);
                    (0..rnd.count)
                        .map(|_| {
                            let extra = g.gen_range(0..=2);
                            random::random_gabriel(&mut g, extra, 3)
                        })
                        .collect()
                }
            };
            let mut tight = 0;
            for seqs in &instances {
                let star = if input.is_some() { *star_from } else { 2.min(seqs.len()) };
                let (lhs, rhs) = transforms::gabriel_lhs_rhs(seqs, star)?;
                if lhs > rhs {
                    return violated(
                        format!("rearranged sum {rhs} is below the original {lhs}"),
                        json!({ "check": "gabriel", "star_from": star, "seqs": seqs.iter().map(seq_json).collect::<Vec<_>>(), "lhs": r(&lhs), "rhs": r(&rhs) }),
                    );
                }
                tight += usize::from(lhs == rhs);
            }
            Ok(summary("gabriel", input.is_none().then_some(rnd.seed), instances.len(), tight, json!({})))
        }
        CheckCmd::Birnbaum { input, k, random: rnd } => {
            let mut instances = Vec::new();
            if input.inputs.is_empty() {
                let mut g = random::rng(rnd.seed);
                for _ in 0..rnd.count {
                    let (x, y, yp) = random::random_birnbaum(&mut g, 3);
                    let k = k.unwrap_or_else(|| g.gen_range(0..=4));
                    instances.push((x, y, yp, k));
                }
            } else {
                let ds = read_dists(input)?;
                let [x, y, yp]: [Dist; 3] = ds.try_into().map_err(|_| Failure::Usage("birnbaum needs exactly three distributions".into()))?;
                let k = match k {
                    Some(k) => *k,
                    None => return usage("--k is required with --in"),
                };
                instances.push((x, y, yp, k));
            }
            let mut tight = 0;
            for (x, y, yp, k) in &instances {
                let (lhs, rhs) = transforms::birnbaum_check(x, y, yp, *k)?;
                if lhs > rhs {
                    return violated(
                        format!("P(X+Y in [-{k},{k}]) = {lhs} exceeds P(X+Y' in [-{k},{k}]) = {rhs}"),
                        json!({ "check": "birnbaum", "k": k, "dists": dists_json(&[x.clone(), y.clone(), yp.clone()]), "lhs": r(&lhs), "rhs": r(&rhs) }),
                    );
                }
                tight += usize::from(lhs == rhs);
            }
            Ok(summary("birnbaum", input.inputs.is_empty().then_some(rnd.seed), instances.len(), tight, json!({})))
        }
        CheckCmd::Balancing { input, x, random: rnd } => {
            if !input.inputs.is_empty() {
                let ds = read_dists(input)?;
                let dim = ds.first().map_or(1, Dist::dim);
                let x = x.clone().unwrap_or_else(|| LatticePoint::zero(dim));
                let b = reduction::balancing_bound(&ds, &x)?;
                let report = json!({
                    "j": b.j + 1,
                    "lhs": r(&b.lhs),
                    "rhs": r(&b.rhs),
                    "strict": b.strict,
                    "equality_witness": b.equality_witness.map(|i| i + 1),
                });
                if !b.holds() {
                    return violated("balancing bound fails", json!({ "check": "balancing", "x": point_json(&x), "dists": dists_json(&ds), "report": report }));
                }
                return Ok(Outcome::Ok(emit(report)));
            }
            let mut g = random::rng(rnd.seed);
            let mut tight = 0;
            for _ in 0..rnd.count {
                let (ds, x) = random_balancing(&mut g);
                let b = reduction::balancing_bound(&ds, &x)?;
                if !b.holds() {
                    return violated("balancing bound fails", json!({ "check": "balancing", "x": point_json(&x), "dists": dists_json(&ds), "lhs": r(&b.lhs), "rhs": r(&b.rhs) }));
                }
                tight += usize::from(!b.strict);
            }
            Ok(summary("balancing", Some(rnd.seed), rnd.count, tight, json!({})))
        }
        CheckCmd::Theorem2 { input, alpha, x, random: rnd } => {
            if !input.inputs.is_empty() {
                let Some(alpha) = alpha else { return usage("--alpha is required with --in") };
                let alpha = AlphaParam::new(alpha.clone())?;
                let ds = read_dists(input)?;
                let dim = ds.first().map_or(1, Dist::dim);
                let x = x.clone().unwrap_or_else(|| LatticePoint::zero(dim));
                let (lhs, rhs) = search::theorem2_check(&ds, &alpha, &x)?;
                let report = json!({ "lhs": r(&lhs), "rhs": r(&rhs), "tight": lhs == rhs });
                if lhs > rhs {
                    return violated("bounded-concentration bound fails", json!({ "check": "theorem2", "alpha": r(alpha.value()), "x": point_json(&x), "dists": dists_json(&ds), "report": report }));
                }
                return Ok(Outcome::Ok(emit(report)));
            }
            let mut g = random::rng(rnd.seed);
            let mut tight = 0;
            for _ in 0..rnd.count {
                let (ds, alpha, x) = random_bounded_instance(&mut g);
                let (lhs, rhs) = search::theorem2_check(&ds, &alpha, &x)?;
                if lhs > rhs {
                    return violated("bounded-concentration bound fails", json!({ "check": "theorem2", "alpha": r(alpha.value()), "x": point_json(&x), "dists": dists_json(&ds), "lhs": r(&lhs), "rhs": r(&rhs) }));
                }
                tight += usize::from(lhs == rhs);
            }
            Ok(summary("theorem2", Some(rnd.seed), rnd.count, tight, json!({})))
        }
        CheckCmd::Monotone { input, random: rnd } => {
            let lists: Vec<Vec<Dist>> = if input.inputs.is_empty() {
                let mut g = random::rng(rnd.seed);
                (0..rnd.count)
                    .map(|_| {
                        let len = g.gen_range(1..=8);
                        (0..len).map(|_| random::random_small_scalar(&mut g, 4)).collect()
                    })
                    .collect()
            } else {
                vec![read_dists(input)?]
            };
            let mut last = Vec::new();
            for ds in &lists {
                if ds.is_empty() {
                    return usage("no distributions given");
                }
                let qs = search::monotonicity_check(ds)?;
                if !search::is_non_increasing(&qs) {
                    return violated("concentration increased along partial sums", json!({ "check": "monotone", "dists": dists_json(ds), "q": qs.iter().map(r).collect::<Vec<_>>() }));
                }
                last = qs;
            }
            if input.inputs.is_empty() {
                Ok(summary("monotone", Some(rnd.seed), lists.len(), 0, json!({})))
            } else {
                Ok(Outcome::Ok(emit(json!({ "q": last.iter().map(r).collect::<Vec<_>>(), "non_increasing": true }))))
            }
        }
    }
}

/// Random balancing instance: 2, 4 or 6 summands in dimension 1 or 2, with
/// the target at the mode of the sum, where the bound is hardest to meet.
pub fn random_balancing(g: &mut rand_chacha::ChaCha8Rng) -> (Vec<Dist>, LatticePoint) {
    let n = 2 * g.gen_range(1..=3);
    let dim = g.gen_range(1..=2);
    let ds: Vec<Dist> = (0..n).map(|_| random::random_dist(g, dim, 4, 2)).collect();
    let x = Dist::convolve_all(&ds).expect("same dimension").concentration().1;
    (ds, x)
}

/// Random instance for the bounded-concentration bound. Every fifth instance
/// pairs `U^α` with a reflected shifted copy, where equality holds.
pub fn random_bounded_instance(g: &mut rand_chacha::ChaCha8Rng) -> (Vec<Dist>, AlphaParam, LatticePoint) {
    let alpha = random::random_alpha(g);
    if g.gen_ratio(1, 5) {
        let u = families::u_alpha(&alpha);
        let s = g.gen_range(-5..=5);
        let v = u.negate().shift(&LatticePoint::scalar(s)).expect("small shift");
        return (vec![u, v], alpha, LatticePoint::scalar(s));
    }
    let n = 2 * g.gen_range(1..=2);
    let dim = g.gen_range(1..=2);
    let ds: Vec<Dist> = (0..n).map(|_| random::random_bounded(g, &alpha, dim, 5)).collect();
    let x = Dist::convolve_all(&ds).expect("same dimension").concentration().1;
    (ds, alpha, x)
}

fn asym_cmd(c: &AsymCmd, format: Format) -> Res<String> {
    Ok(match c {
        AsymCmd::Corollary2 { n, alpha } => {
            json_only(format)?;
            let alpha = AlphaParam::new(alpha.clone())?;
            let bound = asymptotics::corollary2_bound(*n, &alpha)?;
            emit(json!({ "n": n, "alpha": r(alpha.value()), "bound": bound }))
        }
        AsymCmd::Smalldev { n, p, k } => rows_output(&asymptotics::smalldev_rows(n, p, *k)?, format),
        AsymCmd::Tnzero { n, p } => rows_output(&asymptotics::tn_zero_rows(n, p)?, format),
        AsymCmd::Wagner { n, b, c } => rows_output(&asymptotics::wagner_rows(n, b, c)?, format),
        AsymCmd::Largeodd { m, p } => {
            json_only(format)?;
            let rows = m.iter().map(|m| asymptotics::large_odd_ratios(*m, p)).collect::<crate::Result<Vec<_>>>()?;
            emit(serde_json::to_value(rows).expect("rows serialize"))
        }
    })
}

fn scan_cmd(c: &ScanCmd, format: Format, mode: ExecMode) -> Res<Outcome> {
    Ok(Outcome::Ok(match c {
        ScanCmd::Kphase { n, grid } => {
            if *grid == 0 {
                return usage("--grid must be positive");
            }
            let d = search::k_phase_scan_with(*n, &search::default_grid(*grid), mode)?;
            if !d.darroch_holds() {
                let bad: Vec<String> = d.cells.iter().filter(|c| !c.darroch_ok).map(|c| format_rational(&c.p)).collect();
                return violated("a maximizing point left the mode window", json!({ "check": "kphase", "n": n, "p": bad }));
            }
            match format {
                Format::Csv => d.to_csv(),
                Format::Json => emit(serde_json::to_value(&d).expect("diagram serializes")),
            }
        }
        ScanCmd::Signs { input, n, x } => {
            let d = one_dist(input)?;
            let target = x.clone().map_or(Target::All, Target::At);
            emit(serde_json::to_value(search::sign_vector_max(&d, *n, &target)?).expect("serializes"))
        }
        ScanCmd::Weights { input, n, values, cap } => {
            let d = one_dist(input)?;
            let res = search::weight_grid_search_with(&d, *n, values, *cap, mode)?;
            let out = serde_json::to_value(&res).expect("serializes");
            if res.exceeds {
                return violated("a grid weighting beats every sign pattern", json!({ "check": "weights", "dist": d.to_json_value(), "n": n, "result": out }));
            }
            emit(out)
        }
        ScanCmd::Bounded { input, n, alpha } => {
            let d = one_dist(input)?;
            let alpha = AlphaParam::new(alpha.clone())?;
            let res = search::u_alpha_sign_probe(&d, *n, &alpha)?;
            let out = serde_json::to_value(&res).expect("serializes");
            if res.exceeds {
                return violated("iid sum beats every sign pattern of U^alpha", json!({ "check": "bounded", "dist": d.to_json_value(), "n": n, "alpha": r(alpha.value()), "result": out }));
            }
            emit(out)
        }
    }))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    finish(execute(&cli), &cli, stdout, stderr)
}

fn finish(result: Res<Outcome>, cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match result {
        Ok(Outcome::Ok(text)) => match &cli.out {
            Some(path) => match fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {}: {e}", path.display());
                    1
                }
            },
            None => {
                let _ = stdout.write_all(text.as_bytes());
                0
            }
        },
        Ok(Outcome::Violated { message, witness }) => {
            let _ = writeln!(stderr, "check failed: {message}");
            match fs::write(&cli.witness, emit(witness)) {
                Ok(()) => {
                    let _ = writeln!(stderr, "witness written to {}", cli.witness.display());
                }
                Err(e) => {
                    let _ = writeln!(stderr, "could not write witness {}: {e}", cli.witness.display());
                }
            }
            2
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// Entry point for the binary: real arguments, real streams.
pub fn main_exit() -> i32 {
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run(std::env::args_os(), &mut out, &mut err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn violations_exit_2_and_write_a_replayable_witness() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        let cli = Cli::try_parse_from(["anticonc", "check", "monotone", "--witness", path.to_str().unwrap()]).unwrap();
        let d = Dist::uniform_range(0, 1).unwrap();
        let witness = json!({ "check": "monotone", "dists": dists_json(std::slice::from_ref(&d)) });
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = finish(violated("synthetic", witness), &cli, &mut out, &mut err);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(String::from_utf8(err).unwrap().contains("check failed: synthetic"));

        let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(Dist::from_json_value(&v["dists"][0]).unwrap(), d);
    }
}
