//! Command-line front end for `gct-core`.
//!
//! [`dispatch`] parses an argument vector, runs the command on a dedicated
//! worker pool and returns the exit code with the result text. The binary is
//! a thin wrapper around it.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gct_core::caps::Caps;
use gct_core::kronecker::{
    kron, kron_rect, obstruction_search, stretch_probe, ObstructionSearch, TripleQuery,
    DEFAULT_STRETCH_MAX,
};
use gct_core::latin::alon_tarsi_statistic;
use gct_core::polynomials::{
    grenet_literal_matrix, grenet_matrix, hessian, matrix_vars, mignon_ressayre_certificate,
    determinant_sym, permanent_sym, rank_at, verify_representation, VerifyMode, MODULUS,
};
use gct_core::symfun::{parse_rational, pleth};
use gct_core::tomography::{count_pyramids_p, count_relations_t, is_simplex_like};
use gct_core::{Error, Partition};
use num_rational::BigRational;
use serde_json::{json, Value};

/// Environment variable holding default cap overrides.
pub const CAPS_ENV: &str = "GCT_CAPS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const AFTER_HELP: &str = "\
Exit codes: 0 success, 1 domain error, 2 resource-cap refusal, 64 usage error.

Resource caps default to symbolic=8, det-nodes=50000000, tomography=10,
latin=5, obstruct=5000. Override them with --caps or the GCT_CAPS
environment variable, e.g. GCT_CAPS=latin=6,tomography=12.";

#[derive(Parser, Debug)]
#[command(
    name = "gct",
    version,
    about = "Exact computations around permanent versus determinant",
    after_help = AFTER_HELP
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Seed for randomized identity tests
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: one per core)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cap overrides as key=value pairs, e.g. latin=6,tomography=12
    #[arg(long, global = true, env = CAPS_ENV)]
    pub caps: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyKind {
    Symbolic,
    Modular,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyKind {
    Per,
    Det,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kronecker coefficient k(λ,μ,ν): multiplicity of the trivial module in [λ]⊗[μ]⊗[ν]
    Kron {
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu: Partition,
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
    },
    /// Rectangular Kronecker coefficient k_n(λ) = k(λ, n×d rectangle, n×d rectangle)
    KronRect {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
    },
    /// Plethysm coefficient pleth_n(λ): multiplicity of the Schur functor S_λ in Sym^d Sym^n
    Pleth {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        /// Number of variables; partitions longer than this give 0 (default n²)
        #[arg(long)]
        vars: Option<u32>,
    },
    /// Occurrence-obstruction search: λ ⊢ dn with k_n(λ) = 0 and pleth_n(λ) > 0
    Obstruct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        /// Keep only λ with ℓ(λ) ≤ m²+1 and λ₁ ≥ dn(1 − m/n)
        #[arg(long)]
        strict_shape: bool,
        /// Override the length bound on candidates
        #[arg(long)]
        max_length: Option<u32>,
        /// Report at most this many obstructions
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Grenet's determinantal representation of the permanent per_m, of size 2^m − 1
    Grenet {
        #[arg(long, required_unless_present = "literal")]
        m: Option<u32>,
        /// Flip one row sign so that det equals per_m exactly
        #[arg(long)]
        normalize: bool,
        /// Use the explicit 7×7 matrix for per_3 instead of the construction
        #[arg(long, conflicts_with_all = ["m", "normalize"])]
        literal: bool,
        /// How to compare det with per_m (default: symbolic for m ≤ 4)
        #[arg(long, value_enum)]
        verify: Option<VerifyKind>,
        /// Random points for modular verification
        #[arg(long, default_value_t = 10)]
        trials: u32,
        /// Include the matrix entries in the output
        #[arg(long)]
        print_matrix: bool,
    },
    /// Mignon–Ressayre certificate: Hessian rank of per_m at a zero, giving dc(m) ≥ m²/2
    MrBound {
        #[arg(long)]
        m: u32,
    },
    /// Rank of the Hessian of per_n or det_n at a point read from a JSON n×n matrix
    HessianRank {
        #[arg(long, value_enum)]
        poly: PolyKind,
        #[arg(long)]
        n: usize,
        /// JSON array of rows; entries are integers or "p/q" strings
        #[arg(long)]
        point: PathBuf,
    },
    /// Discrete-tomography counts t(λ,μ,ν) and p(λ,μ,ν) of 3D relations and pyramids with marginals (λ',μ',ν')
    Tomo {
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu: Partition,
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        /// Also compute the Kronecker coefficient sandwiched between p and t
        #[arg(long)]
        with_k: bool,
    },
    /// Alon–Tarsi statistic: column-even minus column-odd Latin squares of order n
    Latin {
        #[arg(long)]
        n: u32,
    },
    /// Stretching probe: least s ≤ smax with k_n(sλ) > 0, bearing on saturation of the rectangular Kronecker monoid
    Stretch {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        #[arg(long, default_value_t = DEFAULT_STRETCH_MAX)]
        smax: u32,
    },
}

fn parse_partition(s: &str) -> std::result::Result<Partition, String> {
    Partition::parse(s).map_err(|e| e.to_string())
}

/// Exit code and the two output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A command's result in both output formats.
struct Report {
    text: String,
    json: Value,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> Outcome {
    let caps = match Caps::default().with_overrides(cli.config.caps.as_deref().unwrap_or("")) {
        Ok(c) => c,
        Err(e) => return failure(EXIT_USAGE, &e.to_string()),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.config.threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return failure(EXIT_USAGE, &e.to_string()),
    };
    let config = cli.config.clone();
    let result = pool.install(|| execute(&cli.command, &config, &caps));
    match result {
        Ok(report) => {
            let mut stdout = match config.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string(&report.json).expect("serializable"),
            };
            stdout.push('\n');
            Outcome {
                code: EXIT_OK,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let code = if e.is_resource_cap() { EXIT_CAP } else { EXIT_DOMAIN };
            failure(code, &e.to_string())
        }
    }
}

fn failure(code: i32, msg: &str) -> Outcome {
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn execute(cmd: &Command, config: &RunConfig, caps: &Caps) -> gct_core::Result<Report> {
    match cmd {
        Command::Kron { lambda, mu, nu } => {
            let q = TripleQuery::new(lambda.clone(), mu.clone(), nu.clone())?;
            let k = kron(&q)?;
            Ok(Report {
                text: format!("k({lambda}, {mu}, {nu}) = {k}"),
                json: json!({"lambda": lambda, "mu": mu, "nu": nu, "kron": k.to_string()}),
            })
        }
        Command::KronRect { n, lambda } => {
            let k = kron_rect(*n, lambda)?;
            Ok(Report {
                text: format!("k_{n}({lambda}) = {k}"),
                json: json!({"n": n, "lambda": lambda, "kron": k.to_string()}),
            })
        }
        Command::Pleth { n, d, lambda, vars } => {
            if lambda.size() != n * d {
                return Err(Error::SizeMismatch(format!(
                    "|λ| = {} but d·n = {}",
                    lambda.size(),
                    n * d
                )));
            }
            let vars = vars.unwrap_or(n * n);
            let p = pleth(*n, *d, lambda, vars)?;
            Ok(Report {
                text: format!("pleth_{n}({lambda}) = {p} (Sym^{d} Sym^{n}, {vars} variables)"),
                json: json!({"n": n, "d": d, "lambda": lambda, "vars": vars, "pleth": p.to_string()}),
            })
        }
        Command::Obstruct {
            n,
            d,
            m,
            strict_shape,
            max_length,
            limit,
        } => {
            let mut params = ObstructionSearch::new(*n, *d, *m);
            params.enforce_shape = *strict_shape;
            params.max_length = *max_length;
            params.candidate_cap = caps.obstruction_candidates;
            let candidates = params.candidates()?.len();
            eprintln!("obstruct: scanning {candidates} candidates");
            let mut found = obstruction_search(&params)?;
            let total = found.len();
            if let Some(l) = limit {
                found.truncate(*l);
            }
            let mut text = format!(
                "n = {n}, d = {d}, m = {m}: {candidates} candidates, {total} obstructions"
            );
            for r in &found {
                text.push_str(&format!(
                    "\n  {}  pleth = {}  k = {}  length_ok = {}  first_row_ok = {}",
                    r.lambda, r.pleth, r.kron, r.shape_ok.length, r.shape_ok.first_row
                ));
            }
            let list: Vec<Value> = found
                .iter()
                .map(|r| {
                    json!({
                        "lambda": r.lambda,
                        "pleth": r.pleth.to_string(),
                        "kron": r.kron.to_string(),
                        "shape_ok": r.shape_ok,
                    })
                })
                .collect();
            Ok(Report {
                text,
                json: json!({
                    "n": n, "d": d, "m": m,
                    "strict_shape": strict_shape,
                    "candidates": candidates,
                    "total": total,
                    "obstructions": list,
                }),
            })
        }
        Command::Grenet {
            m,
            normalize,
            literal,
            verify,
            trials,
            print_matrix,
        } => {
            let (m, a) = if *literal {
                (3, grenet_literal_matrix())
            } else {
                let m = m.expect("required unless --literal");
                (m, grenet_matrix(m, *normalize)?)
            };
            let per = permanent_sym(m, caps)?;
            let kind = verify.unwrap_or(if m <= 4 {
                VerifyKind::Symbolic
            } else {
                VerifyKind::Modular
            });
            let mode = match kind {
                VerifyKind::Symbolic => VerifyMode::Symbolic,
                VerifyKind::Modular => VerifyMode::Modular {
                    trials: *trials,
                    seed: config.seed,
                },
            };
            let v = verify_representation(&a, &per, mode, caps)?;
            let mut text = format!("size {}, det == per_{m}: {}", a.size(), v.equal);
            if v.mode == "modular" {
                text.push_str(&format!(
                    "\nmodular check at {} points mod {MODULUS}, failure probability ≤ {:e}",
                    v.trials, v.failure_bound
                ));
            }
            let mut out = json!({
                "m": m,
                "size": a.size(),
                "normalized": normalize | literal,
                "literal": literal,
                "verification": v,
            });
            if *print_matrix {
                text.push_str(&format!("\n{}", render_matrix(&a)));
                out["matrix"] = serde_json::to_value(&a).expect("serializable");
            }
            Ok(Report { text, json: out })
        }
        Command::MrBound { m } => {
            let r = mignon_ressayre_certificate(*m, caps)?;
            let text = format!(
                "m = {m}: per(M) = {}, rank H_per(M) = {}, dc({m}) ≥ {}",
                r.permanent, r.hessian_rank, r.implied_bound
            );
            let json = json!({
                "m": r.m,
                "matrix": r.matrix,
                "permanent": r.permanent.to_string(),
                "hessian_rank": r.hessian_rank,
                "implied_bound": r.implied_bound,
            });
            Ok(Report { text, json })
        }
        Command::HessianRank { poly, n, point } => {
            let values = read_point(point, *n)?;
            let f = match poly {
                PolyKind::Per => permanent_sym(*n as u32, caps)?,
                PolyKind::Det => determinant_sym(*n as u32, caps)?,
            };
            let rank = rank_at(&hessian(&f, &matrix_vars(*n)), &values)?;
            let name = match poly {
                PolyKind::Per => "per",
                PolyKind::Det => "det",
            };
            Ok(Report {
                text: format!("rank H_{name}{n} = {rank} (of {})", n * n),
                json: json!({"poly": name, "n": n, "rank": rank, "size": n * n}),
            })
        }
        Command::Tomo {
            lambda,
            mu,
            nu,
            with_k,
        } => {
            let t = count_relations_t(lambda, mu, nu, caps)?;
            let p = count_pyramids_p(lambda, mu, nu, caps)?;
            let simplex_like = is_simplex_like(lambda, mu, nu)?;
            let mut text = format!("t = {t}, p = {p}, simplex-like: {simplex_like}");
            let mut out = json!({
                "lambda": lambda, "mu": mu, "nu": nu,
                "t": t.to_string(),
                "p": p.to_string(),
                "simplex_like": simplex_like,
            });
            if *with_k {
                let q = TripleQuery::new(lambda.clone(), mu.clone(), nu.clone())?;
                let k = kron(&q)?;
                text.push_str(&format!(", k = {k}"));
                out["k"] = json!(k.to_string());
            }
            Ok(Report { text, json: out })
        }
        Command::Latin { n } => {
            let r = alon_tarsi_statistic(*n, caps)?;
            Ok(Report {
                text: format!(
                    "order {}: even {}, odd {}, difference {}",
                    r.order, r.even, r.odd, r.difference
                ),
                json: serde_json::to_value(&r).expect("serializable"),
            })
        }
        Command::Stretch { n, lambda, smax } => {
            let probe = stretch_probe(*n, lambda, *smax)?;
            let mut text = match probe.witness {
                Some(s) => format!("k_{n}({s}·{lambda}) > 0, least witness s = {s}"),
                None => format!("no witness for s ≤ {}", probe.checked_up_to),
            };
            if probe.stopped_by_cap {
                text.push_str(" (stopped: character degree limit)");
            }
            Ok(Report {
                text,
                json: json!({"n": n, "lambda": lambda, "smax": smax, "probe": probe}),
            })
        }
    }
}

fn read_point(path: &PathBuf, n: usize) -> gct_core::Result<Vec<BigRational>> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<Value>> = serde_json::from_str(&raw)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("point must be a {n}×{n} matrix")));
    }
    rows.into_iter()
        .flatten()
        .map(|v| match v {
            Value::Number(x) => parse_rational(&x.to_string()),
            Value::String(s) => parse_rational(&s),
            other => Err(Error::InvalidInput(format!("bad matrix entry {other}"))),
        })
        .collect()
}

fn render_matrix(a: &gct_core::polynomials::AffineMatrix) -> String {
    a.entries()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| format!("{e:>6}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
