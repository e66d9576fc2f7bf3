//! Command line front end. Every subcommand prints a single report: a JSON
//! object under `--json`, a plain table otherwise. Reports echo the command
//! and the bounds in effect; JSON output carries no timing and is
//! byte-identical across repeated runs with identical flags.
//!
//! Exit codes: 0 when the report status is pass, 1 for a mathematical
//! failure or an inconclusive verdict, 2 for usage errors (including
//! unreadable or malformed input files).

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lieder::bridge::{
    embed, ihara_takao, r0, r1, rinf, strictness_check, BridgeError, DEFAULT_TRUNCATION,
};
use lieder::depth::{
    convolution_check, depth_basis_at_with_bound, depth_basis_x_with_bound,
    depth_membership_with_bound, DEFAULT_DEGREE_BOUND,
};
use lieder::derivation::{ad_pow, epsilon_check, epsilon_std, is_der0, sl2_triple, w_pollack};
use lieder::freelie::{
    lyndon_words, parse_lie_expr, witt_dim_total, Alphabet, MultiDegree, MAX_WORD_LEN,
};
use lieder::periodpoly::{
    cuspidal_cocycles, even_cuspidal_families, frobenius_split, relation_coeffs,
};
use lieder::relations::{
    arithmetic_head, arithmetic_head_m2_display, delta_cubic_verify, depth_kernel_matches_cocycles,
    monodromy_image, pollack_depth_kernel, pollack_quadratic_kernel, w_bold,
};
use lieder::scalar::{dim_cusp_forms, factorial, Rat};
use lieder::verify::{all_checks, NO_CAP};
use lieder::wtfilt::{
    relative_candidate, weight_filtration, Filtration, LinearMap, RelativeOutcome,
};

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}

#[derive(Parser)]
#[command(
    name = "lieder",
    version,
    about = "Exact computations in the derivation algebra of a free Lie algebra on two letters",
    after_help = "The LIEDER_CACHE_CAP environment variable caps the in-process basis caches."
)]
struct Cli {
    /// Emit the report as a single JSON object instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Free Lie algebra queries on the Lyndon basis.
    Lie {
        #[command(subcommand)]
        cmd: LieCmd,
    },
    /// The derivation family epsilon_2n and its sl2 transport.
    Epsilon {
        #[command(subcommand)]
        cmd: EpsilonCmd,
    },
    /// Depth filtration bases, membership and dimension identities.
    Depth {
        #[command(subcommand)]
        cmd: DepthCmd,
    },
    /// The genus-zero bridge into the completed algebra.
    Bridge {
        #[command(subcommand)]
        cmd: BridgeCmd,
    },
    /// Cuspidal cocycle bases and their Frobenius split.
    Cocycles(CocyclesArgs),
    /// Relation families in the derivation algebra.
    Relations {
        #[command(subcommand)]
        cmd: RelationsCmd,
    },
    /// Weight filtrations of nilpotent rational matrices.
    Wtfilt(WtfiltArgs),
    /// Run the whole verification suite, ordered by check name.
    VerifyAll(VerifyAllArgs),
}

#[derive(Subcommand)]
enum LieCmd {
    /// Compare Lyndon word counts against Witt dimensions per degree.
    Count {
        #[arg(long, default_value_t = 14)]
        max_degree: usize,
    },
    /// Bracket two elements given as expressions like "[T,[T,A]] - 2*A".
    Bracket {
        x: String,
        y: String,
        #[arg(long, value_enum, default_value_t = AlphabetArg::At)]
        alphabet: AlphabetArg,
    },
}

#[derive(Subcommand)]
enum EpsilonCmd {
    /// Generator images of epsilon at one even weight.
    Show {
        #[arg(long)]
        weight: usize,
    },
    /// Check that every epsilon up to the weight bound annihilates [T,A].
    Theta {
        #[arg(long, default_value_t = 20)]
        max_weight: usize,
    },
    /// Lowering transport onto the lowest-weight partners, with scalars.
    Transport {
        #[arg(long, default_value_t = 16)]
        max_weight: usize,
    },
}

#[derive(Subcommand)]
enum DepthCmd {
    /// Dimension of D^d inside one multidegree piece.
    Basis {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n0: usize,
        #[arg(long)]
        n1: usize,
        #[arg(long, value_enum, default_value_t = AlphabetArg::At)]
        alphabet: AlphabetArg,
        /// Degree bound guarding the recursion.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Membership of an expression in D^d.
    Member {
        expr: String,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = AlphabetArg::At)]
        alphabet: AlphabetArg,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Convolution dimension identity up to a W-weight bound.
    Convolution {
        #[arg(long, default_value_t = 10)]
        max_weight: usize,
    },
}

#[derive(Subcommand)]
enum BridgeCmd {
    /// Check R0 + R1 + Rinf = 0 coefficientwise at the truncation.
    Sections {
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// Embed an element of L(X0,X1), listing components by degree.
    Embed {
        expr: String,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// Depth strictness of the embedding at one multidegree.
    Strictness {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n0: usize,
        #[arg(long)]
        n1: usize,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// The mod-depth-3 congruence for the cuspidal families of a weight.
    IharaTakao {
        #[arg(long, default_value_t = 12)]
        weight: usize,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
}

#[derive(clap::Args)]
struct CocyclesArgs {
    /// Modular weight; the cocycles are polynomials of degree weight - 2.
    #[arg(long)]
    weight: usize,
    /// Restrict to the plus part of the Frobenius split.
    #[arg(long, conflicts_with = "minus")]
    plus: bool,
    /// Restrict to the minus part of the Frobenius split.
    #[arg(long)]
    minus: bool,
}

#[derive(Subcommand)]
enum RelationsCmd {
    /// Evaluate the two printed weight-12 cubic combinations.
    DeltaCubic,
    /// Kernel of the quadratic relation map at one weight.
    Quadratic {
        #[arg(long)]
        weight: usize,
    },
    /// Kernel of the depth-d relation map at one weight.
    Depth {
        #[arg(long)]
        weight: usize,
        #[arg(long)]
        d: usize,
    },
    /// The two printed presentations of an arithmetic head.
    ArithmeticHead {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// The abstract bracket dictionary against the derivation algebra.
    Dictionary {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
}

#[derive(clap::Args)]
struct WtfiltArgs {
    /// JSON file holding a square matrix of rational strings.
    #[arg(long)]
    matrix: PathBuf,
    /// Search for the relative weight filtration over a background.
    #[arg(long, requires = "w")]
    relative: bool,
    /// JSON file holding the background filtration steps.
    #[arg(long, requires = "relative")]
    w: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyAllArgs {
    /// Cap the modular weights the suite ranges over.
    #[arg(long)]
    max_weight: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphabetArg {
    At,
    X01,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Alphabet {
        match a {
            AlphabetArg::At => Alphabet::AT,
            AlphabetArg::X01 => Alphabet::X01,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    fn text(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

struct Outcome {
    status: Status,
    payload: Value,
    /// Custom human rendering replacing the generic payload table.
    human: Option<Vec<String>>,
}

impl Outcome {
    fn pass(payload: Value) -> Outcome {
        Outcome {
            status: Status::Pass,
            payload,
            human: None,
        }
    }

    fn check(ok: bool, payload: Value) -> Outcome {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            payload,
            human: None,
        }
    }
}

enum Failure {
    /// Bad invocation or unreadable/malformed input artifacts.
    Usage(String),
    /// The requested computation reports a violation.
    Math(String),
}

fn math<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Math(e.to_string())
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    status: &'static str,
    payload: &'a Value,
}

fn run(argv: Vec<OsString>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let command = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let start = Instant::now();
    match dispatch(&cli.cmd) {
        Ok(outcome) => emit(&command, &outcome, start.elapsed(), cli.json),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Math(msg)) => {
            let outcome = Outcome {
                status: Status::Fail,
                payload: json!({ "error": msg }),
                human: None,
            };
            emit(&command, &outcome, start.elapsed(), cli.json)
        }
    }
}

fn emit(command: &str, outcome: &Outcome, elapsed: Duration, as_json: bool) -> i32 {
    if as_json {
        let report = Report {
            command,
            status: outcome.status.text(),
            payload: &outcome.payload,
        };
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        let mut rows = vec![
            ("command".to_string(), command.to_string()),
            ("status".to_string(), outcome.status.text().to_string()),
            ("elapsed".to_string(), format!("{elapsed:.2?}")),
        ];
        match &outcome.human {
            Some(lines) => {
                render_rows(&rows);
                for line in lines {
                    println!("{line}");
                }
            }
            None => {
                flatten("payload", &outcome.payload, &mut rows);
                render_rows(&rows);
            }
        }
    }
    match outcome.status {
        Status::Pass => 0,
        _ => 1,
    }
}

fn render_rows(rows: &[(String, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

/// Flattens a JSON value into dotted-path rows for the table renderer.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, rows);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                rows.push((prefix.to_string(), "[]".to_string()));
            } else {
                for (i, x) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), x, rows);
                }
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn even_weight(weight: usize) -> Result<usize, Failure> {
    if weight % 2 != 0 {
        return Err(Failure::Usage(format!(
            "--weight must be even, got {weight}"
        )));
    }
    Ok(weight)
}

fn dispatch(cmd: &Cmd) -> Result<Outcome, Failure> {
    match cmd {
        Cmd::Lie { cmd } => match cmd {
            LieCmd::Count { max_degree } => lie_count(*max_degree),
            LieCmd::Bracket { x, y, alphabet } => lie_bracket(x, y, (*alphabet).into()),
        },
        Cmd::Epsilon { cmd } => match cmd {
            EpsilonCmd::Show { weight } => epsilon_show(*weight),
            EpsilonCmd::Theta { max_weight } => epsilon_theta(*max_weight),
            EpsilonCmd::Transport { max_weight } => epsilon_transport(*max_weight),
        },
        Cmd::Depth { cmd } => match cmd {
            DepthCmd::Basis {
                d,
                n0,
                n1,
                alphabet,
                max_degree,
            } => depth_basis(*d, MultiDegree(*n0, *n1), (*alphabet).into(), *max_degree),
            DepthCmd::Member {
                expr,
                d,
                alphabet,
                max_degree,
            } => depth_member(expr, *d, (*alphabet).into(), *max_degree),
            DepthCmd::Convolution { max_weight } => depth_convolution(*max_weight),
        },
        Cmd::Bridge { cmd } => match cmd {
            BridgeCmd::Sections { truncation } => bridge_sections(*truncation),
            BridgeCmd::Embed { expr, truncation } => bridge_embed(expr, *truncation),
            BridgeCmd::Strictness {
                d,
                n0,
                n1,
                truncation,
            } => bridge_strictness(*d, MultiDegree(*n0, *n1), *truncation),
            BridgeCmd::IharaTakao { weight, truncation } => bridge_ihara(*weight, *truncation),
        },
        Cmd::Cocycles(args) => cocycles(args),
        Cmd::Relations { cmd } => match cmd {
            RelationsCmd::DeltaCubic => relations_delta_cubic(),
            RelationsCmd::Quadratic { weight } => relations_quadratic(*weight),
            RelationsCmd::Depth { weight, d } => relations_depth(*weight, *d),
            RelationsCmd::ArithmeticHead { m, n } => relations_head(*m, *n),
            RelationsCmd::Dictionary { d, a, b } => relations_dictionary(*d, *a, *b),
        },
        Cmd::Wtfilt(args) => wtfilt(args),
        Cmd::VerifyAll(args) => verify_all(args),
    }
}

fn lie_count(max_degree: usize) -> Result<Outcome, Failure> {
    if max_degree == 0 || max_degree > MAX_WORD_LEN {
        return Err(Failure::Usage(format!(
            "--max-degree must be between 1 and {MAX_WORD_LEN}"
        )));
    }
    let mut degrees = Vec::new();
    let mut all = true;
    for total in 1..=max_degree {
        let mut lyndon = 0u64;
        for n0 in 0..=total {
            lyndon += lyndon_words(MultiDegree(n0, total - n0)).len() as u64;
        }
        let witt = witt_dim_total(total);
        all &= lyndon == witt;
        degrees.push(json!({ "degree": total, "lyndon": lyndon, "witt": witt }));
    }
    Ok(Outcome::check(
        all,
        json!({ "max_degree": max_degree, "degrees": degrees }),
    ))
}

fn lie_bracket(x: &str, y: &str, alphabet: Alphabet) -> Result<Outcome, Failure> {
    let a = parse_lie_expr(alphabet, x).map_err(usage)?;
    let b = parse_lie_expr(alphabet, y).map_err(usage)?;
    let bracket = a.bracket(&b).map_err(math)?;
    Ok(Outcome::pass(json!({
        "x": a.to_string(),
        "y": b.to_string(),
        "bracket": bracket.to_string(),
    })))
}

fn epsilon_show(weight: usize) -> Result<Outcome, Failure> {
    let eps = epsilon_std(even_weight(weight)?).map_err(math)?;
    let bidegree = eps
        .bidegree()
        .map(|(m, w)| json!({ "m": m, "w": w }))
        .unwrap_or(Value::Null);
    Ok(Outcome::pass(json!({
        "weight": weight,
        "bidegree": bidegree,
        "image_of_a": eps.image_of_a().to_string(),
        "image_of_t": eps.image_of_t().to_string(),
    })))
}

fn epsilon_theta(max_weight: usize) -> Result<Outcome, Failure> {
    let mut all = true;
    let mut checked = 0usize;
    for two_n in (0..=max_weight).step_by(2) {
        all &= is_der0(&epsilon_std(two_n).map_err(math)?);
        checked += 1;
    }
    Ok(Outcome::check(
        all,
        json!({ "max_weight": max_weight, "checked": checked, "all_annihilate": all }),
    ))
}

fn epsilon_transport(max_weight: usize) -> Result<Outcome, Failure> {
    let lowering = sl2_triple().lowering;
    let mut all = true;
    let mut weights = Vec::new();
    for n in 1..=max_weight / 2 {
        let eps = epsilon_std(2 * n).map_err(math)?;
        let kills = ad_pow(&lowering, 2 * n - 1, &eps).is_zero();
        let scalar = -Rat::from_int(factorial(2 * n as u64 - 2));
        let lands = ad_pow(&lowering, 2 * n - 2, &eps)
            == epsilon_check(2 * n).map_err(math)?.scale(&scalar);
        all &= kills && lands;
        weights.push(json!({
            "weight": 2 * n,
            "kills_at_step": 2 * n - 1,
            "scalar": scalar.to_string(),
            "holds": kills && lands,
        }));
    }
    Ok(Outcome::check(
        all,
        json!({ "max_weight": max_weight, "weights": weights }),
    ))
}

fn depth_basis(
    d: usize,
    mu: MultiDegree,
    alphabet: Alphabet,
    max_degree: Option<usize>,
) -> Result<Outcome, Failure> {
    let bound = max_degree.unwrap_or(DEFAULT_DEGREE_BOUND.max(mu.total()));
    let basis = match alphabet {
        Alphabet::AT => depth_basis_at_with_bound(d, mu, bound).map_err(math)?,
        Alphabet::X01 => depth_basis_x_with_bound(d, mu, bound).map_err(math)?,
    };
    Ok(Outcome::pass(json!({
        "alphabet": alphabet.name(),
        "d": d,
        "n0": mu.0,
        "n1": mu.1,
        "max_degree": bound,
        "ambient_dim": basis.ambient_dim(),
        "dim": basis.dim(),
    })))
}

fn depth_member(
    expr: &str,
    d: usize,
    alphabet: Alphabet,
    max_degree: Option<usize>,
) -> Result<Outcome, Failure> {
    let x = parse_lie_expr(alphabet, expr).map_err(usage)?;
    let bound = max_degree.unwrap_or(DEFAULT_DEGREE_BOUND.max(x.max_total_degree()));
    let member = depth_membership_with_bound(&x, d, bound).map_err(math)?;
    Ok(Outcome::pass(json!({
        "element": x.to_string(),
        "d": d,
        "max_degree": bound,
        "member": member,
    })))
}

fn depth_convolution(max_weight: usize) -> Result<Outcome, Failure> {
    let mut all = true;
    for m in 1..=max_weight {
        all &= convolution_check(m).map_err(math)?;
    }
    Ok(Outcome::check(
        all,
        json!({ "max_weight": max_weight, "holds": all }),
    ))
}

fn bridge_sections(truncation: usize) -> Result<Outcome, Failure> {
    let sum = r0(truncation)
        .map_err(math)?
        .add(&r1())
        .add(&rinf(truncation).map_err(math)?);
    Ok(Outcome::check(
        sum.is_zero(),
        json!({ "truncation": truncation, "sum_is_zero": sum.is_zero() }),
    ))
}

fn truncation_usage(e: BridgeError) -> Failure {
    match e {
        BridgeError::TruncationTooSmall { .. } => usage(e),
        other => math(other),
    }
}

fn bridge_embed(expr: &str, truncation: usize) -> Result<Outcome, Failure> {
    let x = parse_lie_expr(Alphabet::X01, expr).map_err(usage)?;
    let series = embed(&x, truncation).map_err(truncation_usage)?;
    let components: Vec<Value> = series
        .components()
        .map(|(deg, comp)| json!({ "degree": deg, "element": comp.to_string() }))
        .collect();
    Ok(Outcome::pass(json!({
        "element": x.to_string(),
        "truncation": truncation,
        "components": components,
    })))
}

fn bridge_strictness(d: usize, mu: MultiDegree, truncation: usize) -> Result<Outcome, Failure> {
    match strictness_check(d, mu, truncation) {
        Ok(strict) => Ok(Outcome::check(
            strict,
            json!({
                "d": d, "n0": mu.0, "n1": mu.1,
                "truncation": truncation, "strict": strict,
            }),
        )),
        Err(e @ BridgeError::InconclusiveNegative { .. }) => Ok(Outcome {
            status: Status::Inconclusive,
            payload: json!({
                "d": d, "n0": mu.0, "n1": mu.1,
                "truncation": truncation, "detail": e.to_string(),
            }),
            human: None,
        }),
        Err(e) => Err(truncation_usage(e)),
    }
}

fn bridge_ihara(weight: usize, truncation: usize) -> Result<Outcome, Failure> {
    let two_n = even_weight(weight)?
        .checked_sub(2)
        .ok_or_else(|| Failure::Usage("--weight must be at least 2".to_string()))?;
    let lines = even_cuspidal_families(two_n).map_err(math)?;
    let mut families = Vec::new();
    let mut all = true;
    for line in &lines {
        let family = relation_coeffs(two_n, 2, line).map_err(math)?;
        let passes = ihara_takao(weight, &family, truncation).map_err(math)?;
        all &= passes;
        families.push(json!({ "c": rats(&family.c), "passes": passes }));
    }
    Ok(Outcome::check(
        all,
        json!({
            "weight": weight,
            "truncation": truncation,
            "families": families,
        }),
    ))
}

fn cocycles(args: &CocyclesArgs) -> Result<Outcome, Failure> {
    let two_n = even_weight(args.weight)?
        .checked_sub(2)
        .ok_or_else(|| Failure::Usage("--weight must be at least 2".to_string()))?;
    let z = cuspidal_cocycles(two_n).map_err(math)?;
    let (part, basis) = if args.plus || args.minus {
        let (plus, minus) = frobenius_split(&z).map_err(math)?;
        if args.plus {
            ("plus", plus)
        } else {
            ("minus", minus)
        }
    } else {
        ("full", z)
    };
    Ok(Outcome::pass(json!({
        "weight": args.weight,
        "degree": two_n,
        "part": part,
        "dim": basis.len(),
        "basis": basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })))
}

fn relations_delta_cubic() -> Result<Outcome, Failure> {
    let report = delta_cubic_verify().map_err(math)?;
    let ok = report.passes();
    Ok(Outcome::check(
        ok,
        serde_json::to_value(&report).expect("serializable"),
    ))
}

fn relations_quadratic(weight: usize) -> Result<Outcome, Failure> {
    let families = pollack_quadratic_kernel(even_weight(weight)?).map_err(math)?;
    let cusp = dim_cusp_forms(weight as u64).map_err(math)? as usize;
    let payload = json!({
        "weight": weight,
        "dim": families.len(),
        "cusp_form_count": cusp,
        "families": families.iter().map(|f| json!(rats(&f.c))).collect::<Vec<_>>(),
    });
    Ok(Outcome::check(families.len() == cusp, payload))
}

fn relations_depth(weight: usize, d: usize) -> Result<Outcome, Failure> {
    let kernel = pollack_depth_kernel(even_weight(weight)?, d).map_err(math)?;
    let matches = depth_kernel_matches_cocycles(weight, d).map_err(math)?;
    let payload = json!({
        "weight": weight,
        "d": d,
        "raw_dim": kernel.raw_dim,
        "reduced_dim": kernel.reduced_dim,
        "families": kernel.families.iter().map(|f| json!(rats(&f.c))).collect::<Vec<_>>(),
        "matches_cocycles": matches,
    });
    Ok(Outcome::check(matches, payload))
}

fn relations_head(m: usize, n: usize) -> Result<Outcome, Failure> {
    if m == 0 || n == 0 {
        return Err(Failure::Usage("--m and --n must be positive".to_string()));
    }
    let head = arithmetic_head(m, n).map_err(math)?;
    let mut payload = json!({
        "m": m,
        "n": n,
        "scalar": head.scalar.to_string(),
        "head": head.head.to_string(),
    });
    let mut ok = true;
    if m == 2 {
        let display = arithmetic_head_m2_display(n);
        ok = display == head.scalar;
        payload["display_scalar"] = Value::String(display.to_string());
    }
    Ok(Outcome::check(ok, payload))
}

fn relations_dictionary(d: usize, a: usize, b: usize) -> Result<Outcome, Failure> {
    if a * b != 0 && (d < 2 || d - 2 > 2 * a.min(b)) {
        return Err(Failure::Usage(format!(
            "requires 2 <= d and d - 2 <= 2 min(a, b); got d = {d}, a = {a}, b = {b}"
        )));
    }
    let expr = w_bold(d, a, b);
    let through_dictionary = monodromy_image(&expr).map_err(math)?;
    let direct = w_pollack(d, a, b).map_err(math)?;
    let matches = through_dictionary == direct;
    Ok(Outcome::check(
        matches,
        json!({
            "d": d, "a": a, "b": b,
            "expression": expr.to_string(),
            "matches": matches,
        }),
    ))
}

fn wtfilt(args: &WtfiltArgs) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(&args.matrix)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.matrix.display())))?;
    let n: LinearMap = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.matrix.display())))?;
    if args.relative {
        let path = args.w.as_ref().expect("clap enforces --w with --relative");
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let w: Filtration = serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return match relative_candidate(&w, &n).map_err(math)? {
            RelativeOutcome::Found(m) => Ok(Outcome::pass(json!({
                "outcome": "found",
                "filtration": serde_json::to_value(&m).expect("serializable"),
                "jumps": jumps(&m),
            }))),
            RelativeOutcome::NotFound {
                certified_nonexistence,
                summary,
            } => {
                let payload = json!({
                    "outcome": if certified_nonexistence { "nonexistent" } else { "undetermined" },
                    "search": serde_json::to_value(&summary).expect("serializable"),
                });
                Ok(Outcome {
                    status: if certified_nonexistence {
                        Status::Pass
                    } else {
                        Status::Inconclusive
                    },
                    payload,
                    human: None,
                })
            }
        };
    }
    let f = weight_filtration(&n).map_err(math)?;
    Ok(Outcome::pass(json!({
        "dim": n.dim(),
        "filtration": serde_json::to_value(&f).expect("serializable"),
        "jumps": jumps(&f),
    })))
}

fn jumps(f: &Filtration) -> Vec<Value> {
    f.jump_dims()
        .into_iter()
        .map(|(k, dim)| json!({ "index": k, "dim": dim }))
        .collect()
}

fn verify_all(args: &VerifyAllArgs) -> Result<Outcome, Failure> {
    let cap = args.max_weight.unwrap_or(NO_CAP);
    let mut checks = Vec::new();
    let mut human = Vec::new();
    let mut all = true;
    for check in all_checks() {
        let start = Instant::now();
        let result = check(cap);
        let elapsed = start.elapsed();
        human.push(format!(
            "{:<28} {:<6} {elapsed:.2?}",
            result.name,
            if result.passed { "pass" } else { "FAIL" },
        ));
        for line in &result.lines {
            human.push(format!("    {line}"));
        }
        all &= result.passed;
        let failed = !result.passed;
        checks.push(serde_json::to_value(&result).expect("serializable"));
        if failed {
            // Fail fast: the counterexample is already in the lines.
            break;
        }
    }
    let payload = json!({
        "max_weight": args.max_weight,
        "checks": checks,
    });
    Ok(Outcome {
        status: if all { Status::Pass } else { Status::Fail },
        payload,
        human: Some(human),
    })
}
