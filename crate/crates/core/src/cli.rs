//! The `tamesys` command line: argument parsing, dispatch and JSON reports.
//!
//! Exit codes: 0 on success, 1 when a checked mathematical invariant fails,
//! 2 on usage or input errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds;
use crate::error::{Error, Result};
use crate::extend;
use crate::field::Field;
use crate::format;
use crate::matrix::MatrixGF;
use crate::matroid;
use crate::search::{self, Forbid, PointSet, SearchMode};
use crate::systems;

#[derive(Parser, Debug)]
#[command(name = "tamesys", version, about = "Balanced linear systems over finite fields")]
pub struct Cli {
    /// Print JSON (the default)
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Print `path = value` lines instead of JSON
    #[arg(long, global = true)]
    pub text: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct MatrixArg {
    /// Matrix file (`q=<order>` header, one row per line)
    #[arg(long)]
    pub matrix: PathBuf,
}

/// The point set `S`: a file of codes, or all of `F_q^n`.
#[derive(Args, Debug, Clone)]
pub struct SetArg {
    /// Point set file (`n=<dim>` header, one code per line)
    #[arg(long, conflicts_with = "n")]
    pub set: Option<PathBuf>,
    /// Use the whole space `F_q^n`
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SeedArg {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exact,
    Greedy,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ForbidArg {
    Generic,
    Shape,
    Nontrivial,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide tameness, with disjoint bases or a violating set as certificate
    TameCheck(MatrixArg),
    /// Extend a tame matrix to a tame m x (2m+1) matrix
    Extend {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Perform a single extension step only
        #[arg(long)]
        single: bool,
        /// Also write the resulting matrix to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a tuple against a system
    Classify {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Tuple file (`n=<dim>` header, one point per line)
        #[arg(long)]
        tuple: PathBuf,
    },
    /// A generic solution in dimension k - m - 1
    GenericWitness(MatrixArg),
    /// Disjoint index sets of full affine rank for a low-rank solution
    DisjointSets {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        tuple: PathBuf,
    },
    /// List the solutions inside S
    Enumerate {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        set: SetArg,
        /// Report at most this many solutions (all are counted)
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Count the solutions inside S by affine rank
    Histogram {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        set: SetArg,
    },
    /// Largest subset of F_q^n without forbidden solutions
    Capfree {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "generic")]
        forbid: ForbidArg,
        /// Shuffled greedy passes in random mode
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Also write the set to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for an affine subspace inside a point set
    SubspaceFind {
        /// Field of the point set
        #[arg(long)]
        q: String,
        #[arg(long)]
        set: PathBuf,
        /// Dimension of the subspace
        #[arg(long)]
        d: usize,
    },
    /// Rank of the matrix f(a, b) for a polynomial of bounded degree
    Clp {
        #[arg(long)]
        q: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        /// Polynomial file in 2n variables; random polynomials otherwise
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Number of random polynomials
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Replay the randomized rank argument on a concrete set
    Replay {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Closed-form quantities
    #[command(subcommand)]
    Bounds(BoundsCommand),
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Monomial count m_{q,n,d}
    Mono {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: f64,
    },
    /// Growth constant c_{q,delta}
    C {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        delta: f64,
    },
    /// Slice-rank bound for an m x k system
    Slice {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    /// Gaussian binomial [n choose d]_q
    Qbin {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Supersaturation constants
    Supersat {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        delta_prime: f64,
        #[arg(long)]
        n0: u64,
    },
    /// Constants for affine subspaces in dense sets
    Subspace {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_matrix(arg: &MatrixArg) -> Result<MatrixGF> {
    format::parse_matrix(&read(&arg.matrix)?)
}

fn load_set(arg: &SetArg, field: &Field) -> Result<PointSet> {
    match (&arg.set, arg.n) {
        (Some(path), _) => format::parse_point_set(&read(path)?, field),
        (None, Some(n)) => PointSet::full(field, n),
        (None, None) => Err(Error::Parse("one of --set or --n is required".into())),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn matrix_value(a: &MatrixGF) -> Value {
    json!({ "q": a.field().order(), "rows": a.row_vecs() })
}

fn report(instantiates: &str, body: Value) -> Value {
    let mut v = body;
    v.as_object_mut()
        .expect("report bodies are objects")
        .insert("instantiates".into(), json!(instantiates));
    v
}

/// Runs one parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::TameCheck(m) => {
            let a = load_matrix(m)?;
            let cert = matroid::is_tame(&a)?;
            if !cert.verify(&a)? {
                return Err(Error::InvariantViolated("tameness certificate does not verify".into()));
            }
            Ok(report(
                "tameness-via-disjoint-bases",
                json!({ "shape": [a.rows(), a.cols()], "verdict": cert.verdict, "witnesses": cert.witnesses, "violating_set": cert.violating_set }),
            ))
        }
        Command::Extend { matrix, single, out } => {
            let a = load_matrix(matrix)?;
            let (result, body) = if *single {
                let (b, trace) = extend::extend_step(&a)?;
                let v = json!({ "steps": [trace] });
                (b, v)
            } else {
                let norm = extend::normalize_to_tame_square(&a)?;
                let v = json!({ "steps": norm.steps, "projection_checked": norm.projection_checked });
                (norm.matrix, v)
            };
            if let Some(path) = out {
                std::fs::write(path, result.to_text())?;
            }
            let mut body = body;
            body["matrix"] = matrix_value(&result);
            body["tame"] = json!(matroid::is_tame(&result)?.is_tame());
            Ok(report("extension-to-tame-square-system", body))
        }
        Command::Classify { matrix, tuple } => {
            let a = load_matrix(matrix)?;
            let x = format::parse_tuple(&read(tuple)?, a.field())?;
            let class = systems::classify_solution(&a, &x)?;
            if class.arank + class.ann_dim != x.k() {
                return Err(Error::InvariantViolated("arank + dim Ann_bal != k".into()));
            }
            Ok(report("solution-classification", to_value(&class)))
        }
        Command::GenericWitness(m) => {
            let a = load_matrix(m)?;
            let x = systems::generic_witness_lowdim(&a)?;
            if !systems::is_generic_by_annihilator(&a, &x)? {
                return Err(Error::InvariantViolated("witness is not generic".into()));
            }
            Ok(report(
                "low-dimensional-generic-solution",
                json!({ "n": x.n(), "points": x.points(), "generic": true }),
            ))
        }
        Command::DisjointSets { matrix, tuple } => {
            let a = load_matrix(matrix)?;
            let x = format::parse_tuple(&read(tuple)?, a.field())?;
            let (i, j) = systems::disjoint_rank_sets(&a, &x)?;
            Ok(report(
                "disjoint-full-rank-index-sets",
                json!({ "arank": systems::affine_rank(&x), "i": i, "j": j }),
            ))
        }
        Command::Enumerate { matrix, set, limit } => {
            let a = load_matrix(matrix)?;
            let s = load_set(set, a.field())?;
            let mut count = 0u64;
            let mut listed = Vec::new();
            for codes in search::SolutionEnumerator::new(&a, &s)? {
                if listed.len() < *limit {
                    listed.push(codes);
                }
                count += 1;
            }
            Ok(report(
                "solution-enumeration",
                json!({ "n": s.n(), "set_size": s.len(), "count": count, "solutions": listed, "truncated": count as usize > listed.len() }),
            ))
        }
        Command::Histogram { matrix, set } => {
            let a = load_matrix(matrix)?;
            let s = load_set(set, a.field())?;
            let hist = search::arank_histogram(&a, &s)?;
            Ok(report(
                "affine-rank-histogram",
                json!({ "n": s.n(), "set_size": s.len(), "counts": hist.counts, "total": hist.total }),
            ))
        }
        Command::Capfree {
            matrix,
            n,
            mode,
            forbid,
            restarts,
            seed,
            out,
        } => {
            let a = load_matrix(matrix)?;
            let mode = match mode {
                ModeArg::Exact => SearchMode::Exact,
                ModeArg::Greedy => SearchMode::Greedy,
                ModeArg::Random => SearchMode::Random,
            };
            let forbid = match forbid {
                ForbidArg::Generic => Forbid::Generic,
                ForbidArg::Shape => Forbid::Shape,
                ForbidArg::Nontrivial => Forbid::Nontrivial,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let res = search::max_solution_free_set(&a, *n, mode, forbid, *restarts, &mut rng)?;
            if let Some(path) = out {
                std::fs::write(path, format::point_set_to_text(&res.set))?;
            }
            Ok(report(
                "extremal-solution-free-set",
                json!({ "n": n, "mode": mode, "forbid": forbid, "size": res.size, "set": res.set.elements(), "certificate": res.certificate, "work": res.work }),
            ))
        }
        Command::SubspaceFind { q, set, d } => {
            let field = format::parse_field(q)?;
            let s = format::parse_point_set(&read(set)?, &field)?;
            let found = search::find_affine_subspace(&s, *d)?;
            let points = found.as_ref().map(|sub| sub.point_codes(&s));
            Ok(report(
                "affine-subspace-in-dense-set",
                json!({ "d": d, "found": found.is_some(), "subspace": found, "points": points }),
            ))
        }
        Command::Clp {
            q,
            n,
            d,
            poly,
            count,
            seed,
        } => {
            let field = format::parse_field(q)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let reports = match poly {
                Some(path) => {
                    let p = format::parse_poly(&read(path)?, &field)?;
                    vec![search::clp_rank_check(&field, *n, *d, Some(&p), &mut rng)?]
                }
                None => (0..*count)
                    .map(|_| search::clp_rank_check(&field, *n, *d, None, &mut rng))
                    .collect::<Result<Vec<_>>>()?,
            };
            let max_rank = reports.iter().map(|r| r.rank).max();
            let bound = reports.first().map(|r| r.bound.to_string());
            Ok(report(
                "polynomial-matrix-rank-bound",
                json!({ "q": field.order(), "n": n, "d": d, "ranks": reports.iter().map(|r| r.rank).collect::<Vec<_>>(), "max_rank": max_rank, "bound": bound, "holds": true }),
            ))
        }
        Command::Replay {
            matrix,
            set,
            r,
            trials,
            seed,
        } => {
            let a = load_matrix(matrix)?;
            let s = load_set(set, a.field())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let rep = search::proof_replay(&a, &s, *r, *trials, &mut rng)?;
            Ok(report("randomized-rank-argument-replay", to_value(&rep)))
        }
        Command::Bounds(b) => bounds_command(b),
    }
}

fn bounds_command(b: &BoundsCommand) -> Result<Value> {
    Ok(match *b {
        BoundsCommand::Mono { q, n, d } => report(
            "monomial-count",
            json!({ "q": q, "n": n, "d": d, "value": bounds::monomial_count(q, n, d)?.to_string() }),
        ),
        BoundsCommand::C { q, delta } => {
            let c = bounds::c_constant(q, delta)?;
            report("growth-constant", json!({ "q": q, "delta": delta, "value": c.value, "argmin": c.argmin }))
        }
        BoundsCommand::Slice { q, m, k, n } => report("slice-rank-bound", to_value(&bounds::slice_rank_bound(q, m, k, n)?)),
        BoundsCommand::Qbin { q, n, d } => report(
            "gaussian-binomial-bounds",
            json!({ "q": q, "n": n, "d": d, "value": bounds::gaussian_binomial(q, n, d).to_string(), "within_bounds": bounds::qbin_within_bounds(q, n, d) }),
        ),
        BoundsCommand::Supersat {
            q,
            r,
            delta,
            delta_prime,
            n0,
        } => report(
            "supersaturation-constants",
            to_value(&bounds::supersat_params(q, r, delta, delta_prime, n0)?),
        ),
        BoundsCommand::Subspace { q, d } => report(
            "subspace-constant-recurrence",
            json!({ "q": q, "rows": bounds::subspace_constants(q, d)? }),
        ),
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push_str(&format!("{prefix} = {v}\n")),
    }
}

/// Renders a report in the requested format.
pub fn render(v: &Value, text: bool) -> String {
    if text {
        let mut out = String::new();
        flatten("", v, &mut out);
        out
    } else {
        let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Parses `args` (program name first), runs the command, prints the report and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(v) => {
            print!("{}", render(&v, cli.text));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvariantViolated(_) => 1,
                _ => 2,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_subcommand() {
        for args in [
            "tamesys tame-check --matrix a.txt",
            "tamesys extend --matrix a.txt --single",
            "tamesys classify --matrix a.txt --tuple x.txt",
            "tamesys generic-witness --matrix a.txt",
            "tamesys disjoint-sets --matrix a.txt --tuple x.txt",
            "tamesys enumerate --matrix a.txt --n 2",
            "tamesys histogram --matrix a.txt --set s.txt",
            "tamesys capfree --matrix a.txt --n 2 --mode greedy --forbid shape --seed 3",
            "tamesys subspace-find --q 3 --set s.txt --d 1",
            "tamesys clp --q 3 --n 2 --d 2 --count 5",
            "tamesys replay --matrix a.txt --n 1 --r 1 --trials 3",
            "tamesys bounds c --q 3 --delta 0.3333333 --text",
            "tamesys bounds supersat --q 3 --r 2 --delta 0.5 --delta-prime 0.1 --n0 10",
        ] {
            let parsed = Cli::try_parse_from(args.split_whitespace());
            assert!(parsed.is_ok(), "{args}: {parsed:?}");
        }
        assert!(Cli::try_parse_from("tamesys enumerate --matrix a --n 2 --set s".split_whitespace()).is_err());
    }

    #[test]
    fn bounds_report() {
        let cli = Cli::try_parse_from("tamesys bounds c --q 3 --delta 0.3333333".split_whitespace()).unwrap();
        let v = execute(&cli).unwrap();
        assert!(v["value"].as_f64().unwrap() <= 2.756);
        assert_eq!(v["instantiates"], "growth-constant");
        assert!(render(&v, true).contains("value = "));
    }

    #[test]
    fn missing_file_is_an_input_error() {
        assert_eq!(run("tamesys tame-check --matrix /nonexistent/a.txt".split_whitespace()), 2);
        assert_eq!(run("tamesys frobnicate".split_whitespace()), 2);
    }
}
