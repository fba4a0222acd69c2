//! `freearr`: characteristic polynomials, point counts, freeness and
//! censuses of hyperplane arrangements over finite fields.
//!
//! Exit codes: `0` success (free, or all oracles agree, or a clean census),
//! `1` a negative answer (not free, an oracle disagreement, or census
//! findings), `2` freeness undetermined, `3` any error.

use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use freearr::arrangement::{all_hyperplanes, ziegler, Arrangement};
use freearr::counting::{count_complement_extension, crapo_rota_count};
use freearr::derivations::{decide_freeness, Certificate, Verdict};
use freearr::field::{make_field, prime_power, FieldCtx};
use freearr::format::parse_arrangement;
use freearr::harness::census::{run_census, CensusMode, CensusSpec};
use freearr::lattice::char_poly;
use freearr::poly::PolyRing;

type CliResult = Result<ExitCode, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "freearr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomial, checked against complement counts at q, q^2, q^3.
    Chi(Input),
    /// Decide whether the module of logarithmic derivations is free.
    Free(Input),
    /// Complement points over F_{q^k} by direct and tuple enumeration.
    Count {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Classify every sub-arrangement of A_all(F_q^ell) in scope.
    Census(CensusArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    /// the nine planes of F_3^3 missing the line through (0,0,1)
    Ziegler,
    /// every hyperplane of F_q^ell
    All,
    /// the coordinate hyperplanes
    Boolean,
}

#[derive(Args)]
struct FieldArgs {
    /// Field cardinality, or its prime when --e is given
    #[arg(long)]
    q: Option<u64>,
    /// Extension degree over the prime field
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    ell: Option<usize>,
}

#[derive(Args)]
struct Input {
    /// Arrangement file
    file: Option<PathBuf>,
    #[arg(long, conflicts_with = "file")]
    fixture: Option<Fixture>,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    OrbitReduced,
    Sample,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: Mode,
    /// Sample size
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 0)]
    min_size: usize,
    #[arg(long)]
    max_size: Option<usize>,
    /// Directory for census.tsv, summary.json and findings/
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

impl FieldArgs {
    /// `(p, e)` from `--q` and `--e`.
    fn prime_and_degree(&self, default_q: u64) -> Result<(u64, u32), Box<dyn Error>> {
        let q = self.q.unwrap_or(default_q);
        match self.e {
            Some(e) => {
                let (p, f) = prime_power(q)?;
                if f != 1 {
                    return Err(format!("--q {q} must be prime when --e is given").into());
                }
                Ok((p as u64, e))
            }
            None => {
                let (p, e) = prime_power(q)?;
                Ok((p as u64, e))
            }
        }
    }

    fn ctx(&self, default_q: u64) -> Result<Arc<FieldCtx>, Box<dyn Error>> {
        let (p, e) = self.prime_and_degree(default_q)?;
        Ok(make_field(p, e)?)
    }

    fn is_set(&self) -> bool {
        self.q.is_some() || self.e.is_some() || self.ell.is_some()
    }
}

impl Input {
    fn load(&self) -> Result<Arrangement, Box<dyn Error>> {
        match (&self.file, self.fixture) {
            (Some(path), _) => {
                if self.field.is_set() {
                    return Err("--q, --e and --ell only apply to fixtures".into());
                }
                let text =
                    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                parse_arrangement(&text).map_err(|e| format!("{}: {e}", path.display()).into())
            }
            (None, Some(Fixture::Ziegler)) => Ok(ziegler(self.field.ctx(3)?)?),
            (None, Some(Fixture::All)) => Ok(all_hyperplanes(
                self.field.ctx(2)?,
                self.field.ell.unwrap_or(3),
            )?),
            (None, Some(Fixture::Boolean)) => Ok(Arrangement::boolean(
                self.field.ctx(2)?,
                self.field.ell.unwrap_or(3),
            )),
            (None, None) => Err("give an arrangement file or --fixture".into()),
        }
    }
}

fn describe(arr: &Arrangement) -> String {
    let ctx = arr.ctx();
    format!(
        "q={}^{} ell={} |A|={} rank={}",
        ctx.characteristic(),
        ctx.prime_degree(),
        arr.ell(),
        arr.len(),
        arr.rank()
    )
}

fn agree(ok: bool) -> &'static str {
    if ok {
        "AGREE"
    } else {
        "DISAGREE"
    }
}

fn cmd_chi(input: &Input) -> CliResult {
    let arr = input.load()?;
    let cp = char_poly(&arr)?;
    let q = arr.q() as i64;
    let mut rows = Vec::new();
    let mut all_ok = true;
    for k in 1..=3u32 {
        let t = q.pow(k);
        let value = cp.eval(t)?;
        let count = count_complement_extension(&arr, k)?;
        let ok = value == count as i64;
        all_ok &= ok;
        rows.push((k, t, value, count, ok));
    }
    if input.json {
        let evals: Vec<_> = rows
            .iter()
            .map(|&(k, t, v, c, ok)| json!({"k": k, "t": t, "chi": v, "count": c, "agree": ok}))
            .collect();
        let out = json!({
            "id": arr.id(),
            "size": arr.len(),
            "char_poly": cp.coeffs_high_first(),
            "factored": cp.factored(),
            "evaluations": evals,
            "agree": all_ok,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{}", describe(&arr));
        println!("coefficients: {:?}", cp.coeffs_high_first());
        match cp.factored() {
            Some(f) => println!("chi(A,t) = {cp} = {f}"),
            None => println!("chi(A,t) = {cp} (does not split over the integers)"),
        }
        for (k, t, v, c, ok) in rows {
            println!("k={k} chi({t}) = {v} complement = {c} {}", agree(ok));
        }
        println!("{}", agree(all_ok));
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_count(input: &Input, k: u32) -> CliResult {
    let arr = input.load()?;
    let direct = count_complement_extension(&arr, k)?;
    let tuples = crapo_rota_count(&arr, k)?;
    let poly = char_poly(&arr)?.eval((arr.q() as i64).pow(k))?;
    let ok = direct == tuples && direct as i64 == poly;
    if input.json {
        let out = json!({
            "id": arr.id(),
            "k": k,
            "direct": direct,
            "tuples": tuples,
            "char_poly": poly,
            "agree": ok,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{}", describe(&arr));
        println!("k={k}: {direct} / {tuples} / {poly} {}", agree(ok));
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_free(input: &Input) -> CliResult {
    let arr = input.load()?;
    let report = decide_freeness(&arr)?;
    if input.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        let ring = PolyRing::new(arr.ctx().clone(), arr.ell());
        println!("{}", describe(&arr));
        match report.char_poly.factored() {
            Some(f) => println!("chi(A,t) = {} = {f}", report.char_poly),
            None => println!("chi(A,t) = {}", report.char_poly),
        }
        println!("verdict: {}", report.verdict);
        if let Some(e) = &report.exponents {
            println!("exponents: {e:?}");
        }
        println!("certificate: {}", report.certificate.kind());
        match &report.certificate {
            Certificate::SaitoBasis {
                scalar,
                derivations,
            } => {
                println!("  det = {} * Q", arr.ctx().elem(*scalar));
                for d in derivations {
                    println!("  deg {}: {}", d.degree(), d.format(&ring));
                }
            }
            Certificate::GeneratorExcess { degrees }
            | Certificate::DependentGenerators { degrees } => {
                println!("  generator degrees {degrees:?}");
            }
            Certificate::TeraoObstruction { .. } | Certificate::None => {}
        }
        println!("hilbert: {:?}", report.hilbert);
    }
    Ok(match report.verdict {
        Verdict::Free => ExitCode::SUCCESS,
        Verdict::NotFree => ExitCode::from(1),
        Verdict::Undetermined => ExitCode::from(2),
    })
}

fn write_outputs(dir: &Path, report: &freearr::harness::census::CensusReport) -> CliResult {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("census.tsv"), report.tsv())?;
    fs::write(dir.join("summary.json"), report.summary_json())?;
    if report.has_findings() {
        let findings = dir.join("findings");
        fs::create_dir_all(&findings)?;
        for (i, f) in report.summary.findings.iter().enumerate() {
            let body = format!("# {}: {}\n{}", f.claim, f.detail, f.arrangement);
            fs::write(findings.join(format!("finding-{i}.arr")), body)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_census(args: &CensusArgs) -> CliResult {
    let (p, e) = args.field.prime_and_degree(2)?;
    let mode = match args.mode {
        Mode::Exhaustive => CensusMode::Exhaustive,
        Mode::OrbitReduced => CensusMode::OrbitReduced,
        Mode::Sample => CensusMode::Sample {
            n: args.n,
            seed: args.seed,
        },
    };
    let mut spec = CensusSpec::new(p, e, args.field.ell.unwrap_or(3), mode);
    spec.min_size = args.min_size;
    spec.max_size = args.max_size;
    spec.threads = args.threads;
    let report = run_census(&spec)?;
    if let Some(dir) = &args.out_dir {
        write_outputs(dir, &report)?;
    }
    let s = &report.summary;
    if args.json {
        print!("{}", report.summary_json());
    } else {
        println!(
            "q={} ell={} mode={} records={} (covering {})",
            s.q, s.ell, s.mode, s.records, s.weighted_records
        );
        for (claim, t) in &s.checks {
            println!(
                "{claim:<34} checked {:>7} violations {}",
                t.checked, t.violations
            );
        }
        for (claim, t) in &s.observations {
            println!(
                "{claim:<34} checked {:>7} disagree {} (observed)",
                t.checked, t.violations
            );
        }
        println!("verdicts: {:?}", s.verdicts);
        println!("undetermined: {}", s.undetermined.len());
        println!("findings: {}", s.findings.len());
    }
    Ok(if report.has_findings() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Chi(input) => cmd_chi(input),
        Command::Free(input) => cmd_free(input),
        Command::Count { input, k } => cmd_count(input, *k),
        Command::Census(args) => cmd_census(args),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(3)
    })
}
