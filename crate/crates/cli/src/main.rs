use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use ffkakeya_core::brkset::{
    generate_set, kakeya_set, proof_params, theorem_bound, verify_brk, verify_kakeya, SearchMode,
};
use ffkakeya_core::ffield::{Field, FieldSpec};
use ffkakeya_core::json::{elem_from_json, elem_to_json, parse_doc, point_from_json, point_to_json, InstanceDoc, PolyDoc, SetDoc};
use ffkakeya_core::mpoly::{MultiIndex, SparsePoly};
use ffkakeya_core::replay::{self, Certificate, Curve, Trials, DEFAULT_SEED};
use ffkakeya_core::vanish::{find_vanishing_poly, VanishProblem};
use ffkakeya_core::{selftest, Error};

#[derive(Parser)]
#[command(name = "ffkakeya", version, about = "Finite-field Kakeya and BRK-type set toolkit")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "FFKAKEYA_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for search and replay; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    jobs: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact lower bound on BRK-type sets of degree ell in F_q^n.
    Bound {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u32,
        /// Also print the proof parameters D, M for this k.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Describe a field: its parameters and elements.
    Field {
        #[arg(long, conflicts_with_all = ["p", "m"])]
        q: Option<u32>,
        #[arg(long, requires = "m")]
        p: Option<u32>,
        #[arg(long, requires = "p")]
        m: Option<u32>,
        /// Monic modulus, constant term first, comma separated.
        #[arg(long, value_delimiter = ',', requires = "p")]
        modulus: Option<Vec<u32>>,
    },
    /// Emit the point set generated by an instance.
    BuildSet {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Check that a set contains every surface of an instance.
    VerifySet {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Find a nonzero polynomial of degree <= D vanishing to order M on a set.
    Vanish {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        mult: u32,
    },
    /// Search for a small BRK-type set and compare it with the bound.
    MinSearch {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: u32,
        /// The top form g, a polynomial document in n-1 variables.
        #[arg(long)]
        g: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Restarts for greedy mode.
        #[arg(long, default_value_t = 16)]
        restarts: u32,
    },
    /// Replay one proof step on concrete instances and emit a certificate.
    Replay {
        #[arg(long, value_enum)]
        check: Check,
        /// JSON parameter document; inline flags override its fields.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        random_sets: Option<usize>,
    },
    /// A Kakeya set in F_q^n: the whole space, or a smaller construction.
    Kakeya {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        small: bool,
    },
    /// Run the invariant suites of every module.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    KeyLemma,
    DerivsZero,
    Proposition,
    Warmup,
    Existence,
    SchwartzZippel,
}

/// Parameters for `replay`; which fields are needed depends on the check.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReplayParams {
    field: Option<FieldSpec>,
    q: Option<u32>,
    n: Option<usize>,
    ell: Option<u32>,
    k: Option<u64>,
    trials: Option<usize>,
    random_sets: Option<usize>,
    #[serde(rename = "D")]
    d: Option<u64>,
    #[serde(rename = "M")]
    m: Option<u64>,
    #[serde(rename = "P")]
    p: Option<PolyDoc>,
    f: Option<PolyDoc>,
    curve: Option<CurveDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    a: Value,
    rho: Value,
    g: PolyDoc,
}

/// A usage or configuration problem; exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

/// A finished command: the document to emit and whether it is a pass.
struct Output {
    text: String,
    pass: bool,
}

impl Output {
    fn pass(text: String) -> Self {
        Output { text, pass: true }
    }

    fn json(v: &impl serde::Serialize, pass: bool) -> Self {
        let mut text = serde_json::to_string_pretty(v).expect("serializable");
        text.push('\n');
        Output { text, pass }
    }

    fn certificate(c: &Certificate) -> Self {
        Output {
            text: c.to_json_string(),
            pass: c.passed(),
        }
    }
}

fn read_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Usage> {
    let text = fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_doc(&text, &path.display().to_string())?)
}

fn field_of_order(q: u32) -> Result<Field, Usage> {
    Ok(Field::with_order(q)?)
}

fn run(cli: Cli) -> Result<Output, Usage> {
    let jobs = cli.jobs as usize;
    match cli.command {
        Command::Bound { q, n, ell, k } => {
            let b = theorem_bound(q, n, ell)?;
            let mut text = format!("{b}\n");
            if let Some(k) = k {
                let p = proof_params(q, ell, k)?;
                text.push_str(&format!("k = {k}: D = {}, M = {}\n", p.d, p.m));
            }
            Ok(Output::pass(text))
        }
        Command::Field { q, p, m, modulus } => {
            let field = match (q, p, m) {
                (Some(q), _, _) => field_of_order(q)?,
                (None, Some(p), Some(m)) => Field::new(p, m, modulus)?,
                _ => return Err(Usage("give --q, or --p and --m".into())),
            };
            let elements: Vec<Value> = field.elements().map(|e| elem_to_json(&field, e)).collect();
            Ok(Output::json(&json!({"field": field.spec(), "q": field.q(), "elements": elements}), true))
        }
        Command::BuildSet { instance } => {
            let inst = read_doc::<InstanceDoc>(&instance)?.to_instance()?;
            let set = generate_set(&inst);
            eprintln!("generated {} points", set.len());
            Ok(Output::json(&SetDoc::from_set(&set), true))
        }
        Command::VerifySet { set, instance } => {
            let s = read_doc::<SetDoc>(&set)?.to_set()?;
            let inst = read_doc::<InstanceDoc>(&instance)?.to_instance()?;
            let c = verify_brk(&s, &inst)?;
            let missing = c.missing.as_ref().map(|pt| point_to_json(s.field(), pt));
            Ok(Output::json(&json!({"holds": c.holds, "missing": missing}), c.holds))
        }
        Command::Vanish { set, degree, mult } => {
            let s = read_doc::<SetDoc>(&set)?.to_set()?;
            let prob = VanishProblem::new(s.field(), s.dim(), s.to_vec(), degree, mult)?;
            eprintln!(
                "{} unknowns, {} constraints",
                prob.unknown_count(),
                prob.constraint_count()
            );
            match find_vanishing_poly(&prob)? {
                Some(p) => Ok(Output::json(&PolyDoc::from_poly(&p), true)),
                None => Ok(Output::json(&"none", true)),
            }
        }
        Command::MinSearch { q, n, ell, g, mode, restarts } => {
            let doc: PolyDoc = read_doc(&g)?;
            let field = doc.field.build()?;
            if field.q() != q {
                return Err(Usage(format!("--q {q} does not match the field of g (q = {})", field.q())));
            }
            let g = doc.to_poly_in(&field)?;
            let mode = match mode {
                Mode::Exhaustive => SearchMode::Exhaustive,
                Mode::Greedy => SearchMode::Greedy { restarts, seed: cli.seed },
            };
            let cert = replay::check_min_search(&field, n, ell, &g, mode, jobs)?;
            Ok(Output::certificate(&cert))
        }
        Command::Replay { check, params, q, n, ell, k, trials, random_sets } => {
            let mut p: ReplayParams = match &params {
                Some(path) => read_doc(path)?,
                None => ReplayParams::default(),
            };
            p.q = q.or(p.q);
            p.n = n.or(p.n);
            p.ell = ell.or(p.ell);
            p.k = k.or(p.k);
            p.trials = trials.or(p.trials);
            p.random_sets = random_sets.or(p.random_sets);
            let cert = replay_check(check, &p, cli.seed, jobs)?;
            Ok(Output::certificate(&cert))
        }
        Command::Kakeya { q, n, small } => {
            let field = field_of_order(q)?;
            if n == 0 {
                return Err(Usage("n must be positive".into()));
            }
            let set = kakeya_set(&field, n, small);
            let failure = verify_kakeya(&set);
            eprintln!("{} points, kakeya: {}", set.len(), failure.is_none());
            Ok(Output::json(&SetDoc::from_set(&set), failure.is_none()))
        }
        Command::Selftest => {
            let reports = selftest::run_all(cli.seed);
            let mut text = String::new();
            for r in &reports {
                let tag = if r.passed { "ok" } else { "FAILED" };
                text.push_str(&format!("{:<18} {tag:<6} {} cases", r.name, r.cases));
                if let Some(f) = &r.failure {
                    text.push_str(&format!(": {f}"));
                }
                text.push('\n');
            }
            Ok(Output {
                pass: reports.iter().all(|r| r.passed),
                text,
            })
        }
    }
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T, Usage> {
    v.clone().ok_or_else(|| Usage(format!("missing parameter {name}")))
}

fn replay_field(p: &ReplayParams) -> Result<Field, Usage> {
    match (&p.field, p.q) {
        (Some(spec), q) => {
            let f = spec.build()?;
            match q {
                Some(q) if q != f.q() => Err(Usage(format!("q = {q} contradicts the field of order {}", f.q()))),
                _ => Ok(f),
            }
        }
        (None, Some(q)) => field_of_order(q),
        (None, None) => Err(Usage("missing parameter q (or field)".into())),
    }
}

fn replay_check(check: Check, p: &ReplayParams, seed: u64, jobs: usize) -> Result<Certificate, Usage> {
    let trials = |default: usize| Trials::new(p.trials.unwrap_or(default), seed).jobs(jobs);
    let cert = match check {
        Check::KeyLemma => {
            let field = replay_field(p)?;
            replay::check_key_lemma(trials(500), &field, p.n.unwrap_or(2), need(&p.k, "k")?)?
        }
        Check::Warmup => {
            let field = replay_field(p)?;
            replay::check_warmup(&field, need(&p.k, "k")?, seed, p.random_sets.unwrap_or(8))?
        }
        Check::Proposition => {
            let field = replay_field(p)?;
            let n = p.n.unwrap_or(2);
            let ell = p.ell.unwrap_or(2);
            let f = match &p.f {
                Some(doc) => doc.to_poly_in(&field)?,
                None if n >= 2 => {
                    let mut e = vec![0; n - 1];
                    e[0] = ell;
                    SparsePoly::monomial(&field, MultiIndex::new(e), field.one())
                }
                None => return Err(Usage("n must be at least 2".into())),
            };
            replay::check_proposition(trials(200), &field, n, ell, need(&p.k, "k")?, &f)?
        }
        Check::DerivsZero => {
            let poly = need(&p.p, "P")?;
            let field = poly.field.build()?;
            let poly = poly.to_poly_in(&field)?;
            let curve = p.curve.as_ref().ok_or_else(|| Usage("missing parameter curve".into()))?;
            let curve = Curve {
                a: point_from_json(&field, &curve.a, poly.arity())?,
                rho: elem_from_json(&field, &curve.rho)?,
                g: curve.g.to_poly_in(&field)?,
            };
            replay::check_derivs_zero(&poly, &curve, need(&p.k, "k")?, need(&p.d, "D")?, need(&p.m, "M")?)?
        }
        Check::Existence => replay::check_existence(trials(200))?,
        Check::SchwartzZippel => replay::check_schwartz_zippel(trials(300))?,
    };
    Ok(cert)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok(output) => {
            let written = match &out {
                Some(path) => fs::write(path, &output.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", output.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if output.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
