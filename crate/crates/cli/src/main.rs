use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wittlab::cellular::{
    borel_cohomology_with, default_cutoff, BorelComplex, BorelOptions, DEFAULT_BUDGET_CELLS,
};
use wittlab::forms::{quadric_space_dim, KInvariantSet, LinearForm};
use wittlab::koszul::{koszul_homology, tor_dims, Coefficients};
use wittlab::milnor;
use wittlab::presets::{self, FieldPreset};
use wittlab::series::{int_json, recover_p_from_q, PoincareSeries};
use wittlab::torus::TorusModel;
use wittlab::verify::{self, Check, Status, Suite, VerifyOptions};
use wittlab::wgroup::{WGroup, SUBGROUP_SCAN_MAX_VARS};
use wittlab::Error;

mod report;

use report::{checks_json, fit_rational, overall, Format, Report};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// W-groups of fields, their torus models and cohomology.
#[derive(Parser, Debug)]
#[command(name = "wittlab", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cell budget for Borel complexes.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET_CELLS)]
    budget_cells: u64,
    /// Leave timing out of the report, so that runs compare byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Catalog key (`Q2`, `T3`), family letter with `--n` (`W`, `T`, `S`), or a preset file.
    input: String,
    #[arg(long)]
    n: Option<usize>,
    /// `[-1]` as a linear form, overriding the preset's.
    #[arg(long)]
    minus_one: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Quotient,
    Borel,
    Tor,
    Koszul,
    Milnor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CoeffArg {
    Integers,
    Rationals,
    F2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Fast,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, rank, 2C, formal reality, orderings and maximal elementary abelian subgroups.
    Wgroup(Input),
    /// A cohomology series of the torus model or the k-invariant algebra.
    Cohomology {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Method::Quotient)]
        method: Method,
        #[arg(long)]
        cutoff: Option<usize>,
        /// Coefficients for `--method koszul`.
        #[arg(long, value_enum, default_value_t = CoeffArg::Integers)]
        coefficients: CoeffArg,
    },
    /// Check recorded expectations; exit 0 only if none fail.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        /// Verify these preset files instead of the built-in suite.
        #[arg(long = "preset")]
        presets: Vec<String>,
        /// Add the randomized freeness and isotropy checks with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 500)]
        random_count: usize,
    },
    /// List the preset catalog.
    Presets,
    /// Write the Borel coboundary `∂_k` as `row col 1` triplets.
    Export {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        cutoff: Option<usize>,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::InputTooLarge { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("WITTLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        input_error(format!(
            "WITTLAB_THREADS must be a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| input_error(e.to_string()))
}

/// Preset file: JSON in the catalog schema, or one form per line (needs `--n`).
fn load_file(path: &Path, n: Option<usize>) -> CliResult<FieldPreset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        return Ok(FieldPreset::from_json(&text)?);
    }
    let n = n.ok_or_else(|| input_error("a plain forms file needs --n"))?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".into());
    Ok(FieldPreset {
        name,
        kinv: KInvariantSet::parse(n, &lines)?,
        minus_one: None,
        expected: Default::default(),
    })
}

fn resolve(input: &Input) -> CliResult<FieldPreset> {
    let path = Path::new(&input.input);
    let mut p = if path.is_file() {
        load_file(path, input.n)?
    } else {
        let p = presets::get(&input.input, input.n)?;
        if let Some(n) = input.n {
            if p.n() != n {
                return Err(input_error(format!("{} has n={}, not {n}", p.name, p.n())));
            }
        }
        p
    };
    if let Some(m) = &input.minus_one {
        p.minus_one = Some(LinearForm::parse(m, p.n())?);
    }
    Ok(p)
}

fn describe(report: &mut Report, p: &FieldPreset) {
    report.set("input", json!(p.name));
    report.set("n", json!(p.n()));
    report.set("r", json!(p.kinv.r()));
    report.set(
        "forms",
        json!(p
            .kinv
            .forms()
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()),
    );
}

fn series_csv(dims: &[u64]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["degree".to_string(), "dim".to_string()]];
    rows.extend(
        dims.iter()
            .enumerate()
            .map(|(i, d)| vec![i.to_string(), d.to_string()]),
    );
    rows
}

fn cmd_wgroup(input: &Input) -> CliResult<Report> {
    let p = resolve(input)?;
    let g = WGroup::new(p.kinv.clone())?;
    let mut report = Report::new("wgroup");
    describe(&mut report, &p);
    report.set("order_log2", json!(g.order_log2()));
    report.set(
        "order",
        match g.order() {
            Some(o) if o <= i64::MAX as u128 => json!(o as i64),
            Some(o) => json!(o.to_string()),
            None => Value::Null,
        },
    );
    report.set("two_c", json!(g.is_2c()));
    let formally_real = g.is_formally_real()?;
    report.set("formally_real", json!(formally_real));
    report.set("orderings", json!(g.count_orderings()));
    if g.n() <= SUBGROUP_SCAN_MAX_VARS {
        let subs = g.maximal_elementary_abelian()?;
        report.set(
            "max_elementary_abelian",
            json!(subs
                .iter()
                .map(|s| json!({"rank": s.rank, "cosets": s.cosets}))
                .collect::<Vec<_>>()),
        );
    }
    match TorusModel::from_kinvariants(&p.kinv) {
        Ok(m) => {
            report.set("free", json!(m.is_free()));
            report.set("isotropy", json!(m.isotropy_elements()));
        }
        Err(Error::NoProductBasis) => report.set("free", Value::Null),
        Err(e) => return Err(e.into()),
    }
    let e = &p.expected;
    let mut checks = Vec::new();
    let mut compare = |name: &str, expected: Value, computed: Value| {
        checks.push(Check {
            name: format!("{}: {name}", p.name),
            status: if expected == computed {
                Status::Pass
            } else {
                Status::Fail
            },
            expected,
            computed,
        })
    };
    if let Some(r) = e.r {
        compare("Frattini rank", json!(r), json!(p.kinv.r()));
    }
    if let Some(fr) = e.formally_real {
        compare("formally real", json!(fr), json!(formally_real));
    }
    if let Some(k) = e.orderings {
        compare("orderings", json!(k), json!(g.count_orderings()));
    }
    report.csv = vec![vec!["key".into(), "value".into()]];
    for key in [
        "input",
        "n",
        "r",
        "order_log2",
        "order",
        "two_c",
        "formally_real",
        "orderings",
        "free",
    ] {
        if let Some(v) = report.fields.get(key) {
            let v = v
                .as_str()
                .map(str::to_string)
                .unwrap_or_else(|| v.to_string());
            report.csv.push(vec![key.into(), v]);
        }
    }
    report.set("checks", checks_json(&checks));
    report.set("status", json!(overall(&checks)));
    Ok(report)
}

fn compare_series(name: String, expected: &[u64], computed: &[u64], status: Status) -> Check {
    let len = expected.len().max(computed.len());
    let pad = |v: &[u64]| {
        let mut v = v.to_vec();
        v.resize(len, 0);
        v
    };
    let same = pad(expected) == pad(computed);
    Check {
        name,
        status: match (same, status) {
            (false, Status::Pass) => Status::Fail,
            (_, s) => s,
        },
        expected: json!(expected),
        computed: json!(computed),
    }
}

fn borel_dims(model: &TorusModel, cutoff: usize, budget: u64) -> CliResult<Vec<u64>> {
    let opts = BorelOptions {
        cutoff,
        budget_cells: budget,
        reduce: true,
    };
    Ok(borel_cohomology_with(model, opts)?.dims)
}

/// Expected dims through `cutoff` from whichever expectation the preset records.
fn expected_dims(p: &FieldPreset, cutoff: usize) -> Option<Vec<u64>> {
    let e = &p.expected;
    if let Some(q) = &e.quotient {
        let mut q = q.clone();
        q.resize(cutoff + 1, 0);
        return Some(q);
    }
    e.borel.as_ref().map(|b| {
        PoincareSeries::new(b.num.iter().map(|&x| x.into()).collect(), &b.den).expand_u64(cutoff)
    })
}

fn cmd_cohomology(
    input: &Input,
    method: Method,
    cutoff: Option<usize>,
    coefficients: CoeffArg,
    budget: u64,
) -> CliResult<Report> {
    let p = resolve(input)?;
    let r = p.kinv.r();
    let mut report = Report::new("cohomology");
    describe(&mut report, &p);
    report.set("method", json!(format!("{method:?}").to_lowercase()));
    let mut checks = Vec::new();
    let dims: Vec<u64>;
    let rational: Option<PoincareSeries>;
    match method {
        Method::Quotient => {
            dims = verify::quotient_series(&p)?;
            rational = Some(PoincareSeries::polynomial(
                dims.iter().map(|&d| d.into()).collect(),
            ));
            let q: Vec<_> = dims.iter().map(|&d| d.into()).collect();
            report.set("galois_poincare", recover_p_from_q(&q, r).to_json());
            if let Some(e) = &p.expected.quotient {
                checks.push(compare_series(
                    format!("{}: quotient series", p.name),
                    e,
                    &dims,
                    Status::Pass,
                ));
            }
        }
        Method::Borel => {
            let model = TorusModel::from_kinvariants(&p.kinv)?;
            let cutoff = cutoff.unwrap_or_else(|| default_cutoff(&model));
            report.set("cutoff", json!(cutoff));
            dims = borel_dims(&model, cutoff, budget)?;
            rational = fit_rational(&dims, r);
            if let Some(b) = &p.expected.borel {
                let e = PoincareSeries::new(b.num.iter().map(|&x| x.into()).collect(), &b.den);
                checks.push(compare_series(
                    format!("{}: Borel series", p.name),
                    &e.expand_u64(cutoff),
                    &dims,
                    Status::Pass,
                ));
            }
            for &(d, v) in p.expected.borel_values.iter().filter(|(d, _)| *d <= cutoff) {
                checks.push(compare_series(
                    format!("{}: Borel degree {d}", p.name),
                    &[v],
                    &[dims[d]],
                    Status::Pass,
                ));
            }
        }
        Method::Tor => {
            let cutoff = cutoff.unwrap_or(r + p.n() + 4);
            report.set("cutoff", json!(cutoff));
            let t = tor_dims(&p.kinv, cutoff);
            report.set("tor_by_internal_degree", json!(t.dims));
            dims = t.total;
            rational = fit_rational(&dims, r);
            if let Some(e) = expected_dims(&p, cutoff) {
                checks.push(compare_series(
                    format!("{}: Tor series against expected cohomology", p.name),
                    &e,
                    &dims,
                    Status::Report,
                ));
            }
        }
        Method::Koszul => {
            let n = p.n();
            if r != quadric_space_dim(n) {
                return Err(input_error(
                    "--method koszul applies to the universal family W(n)",
                ));
            }
            let coeffs = match coefficients {
                CoeffArg::Integers => Coefficients::Integers,
                CoeffArg::Rationals => Coefficients::Rationals,
                CoeffArg::F2 => Coefficients::F2,
            };
            let table = koszul_homology(n, coeffs)?;
            report.set(
                "coefficients",
                json!(format!("{coefficients:?}").to_lowercase()),
            );
            report.set(
                "table",
                json!(table
                    .entries
                    .iter()
                    .map(|e| json!({
                        "p": e.p,
                        "q": e.q,
                        "free_rank": e.free_rank,
                        "torsion": e.torsion.iter().map(int_json).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>()),
            );
            report.set("two_torsion_at", json!(table.two_torsion_at()));
            dims = table.total_degree_dims();
            rational = Some(PoincareSeries::polynomial(
                dims.iter().map(|&d| d.into()).collect(),
            ));
            if let Some(e) = &p.expected.quotient {
                checks.push(compare_series(
                    format!("{}: quotient series", p.name),
                    e,
                    &dims,
                    Status::Pass,
                ));
            }
            report.csv = table
                .to_csv()
                .lines()
                .map(|l| l.split(',').map(str::to_string).collect())
                .collect();
        }
        Method::Milnor => {
            let cutoff = cutoff.unwrap_or_else(|| milnor::default_cutoff(&p.kinv));
            report.set("cutoff", json!(cutoff));
            dims = milnor::graded_dims(&p.kinv, cutoff)
                .iter()
                .map(|&d| d as u64)
                .collect();
            rational = None;
        }
    }
    if report.csv.is_empty() {
        report.csv = series_csv(&dims);
    }
    report.set("series", json!(dims));
    report.set(
        "rational",
        rational.map(|s| s.to_json()).unwrap_or(Value::Null),
    );
    report.set("checks", checks_json(&checks));
    report.set("status", json!(overall(&checks)));
    Ok(report)
}

fn cmd_verify(
    suite: SuiteArg,
    files: &[String],
    seed: Option<u64>,
    random_count: usize,
    budget: u64,
) -> CliResult<Report> {
    let opts = VerifyOptions {
        budget_cells: budget,
    };
    let mut checks = Vec::new();
    if files.is_empty() {
        let suite = match suite {
            SuiteArg::Fast => Suite::Fast,
            SuiteArg::All => Suite::All,
        };
        checks.extend(verify::run_suite(suite, opts)?);
    } else {
        for f in files {
            let p = load_file(Path::new(f), None)?;
            checks.extend(verify::verify_preset(&p, opts)?);
        }
    }
    if let Some(seed) = seed {
        checks.extend(verify::random_freeness_checks(seed, random_count)?);
    }
    let mut report = Report::new("verify");
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    report.set("passed", json!(count(Status::Pass)));
    report.set("failed", json!(count(Status::Fail)));
    report.set("skipped", json!(count(Status::Skipped)));
    report.csv = vec![vec!["status".into(), "name".into()]];
    report.csv.extend(checks.iter().map(|c| {
        vec![
            report::status_str(c.status).into(),
            format!("\"{}\"", c.name.replace('"', "'")),
        ]
    }));
    report.set("checks", checks_json(&checks));
    report.set("status", json!(overall(&checks)));
    Ok(report)
}

fn cmd_presets() -> CliResult<Report> {
    let mut report = Report::new("presets");
    let all = presets::catalog()?;
    report.csv = vec![vec!["name".into(), "n".into(), "r".into()]];
    report.csv.extend(
        all.iter()
            .map(|p| vec![p.name.clone(), p.n().to_string(), p.kinv.r().to_string()]),
    );
    report.set(
        "presets",
        json!(all
            .iter()
            .map(|p| json!({"name": p.name, "n": p.n(), "r": p.kinv.r()}))
            .collect::<Vec<_>>()),
    );
    Ok(report)
}

fn cmd_export(input: &Input, degree: usize, cutoff: Option<usize>, budget: u64) -> CliResult<()> {
    let p = resolve(input)?;
    let model = TorusModel::from_kinvariants(&p.kinv)?;
    let cutoff = cutoff.unwrap_or(degree + 1).max(degree + 1);
    let cx = BorelComplex::new(
        &model,
        BorelOptions {
            cutoff,
            budget_cells: budget,
            reduce: true,
        },
    )?;
    let stdout = std::io::stdout();
    cx.export_triplets(degree, &mut stdout.lock())
        .map_err(|e| input_error(e.to_string()))
}

fn run(cli: &Cli) -> CliResult<u8> {
    configure_threads()?;
    let start = Instant::now();
    let report = match &cli.command {
        Command::Wgroup(input) => cmd_wgroup(input)?,
        Command::Cohomology {
            input,
            method,
            cutoff,
            coefficients,
        } => cmd_cohomology(input, *method, *cutoff, *coefficients, cli.budget_cells)?,
        Command::Verify {
            suite,
            presets,
            seed,
            random_count,
        } => cmd_verify(*suite, presets, *seed, *random_count, cli.budget_cells)?,
        Command::Presets => cmd_presets()?,
        Command::Export {
            input,
            degree,
            cutoff,
        } => {
            cmd_export(input, *degree, *cutoff, cli.budget_cells)?;
            return Ok(0);
        }
    };
    let mut report = report;
    if !cli.no_timing {
        report.set("timing_ms", json!(start.elapsed().as_secs_f64() * 1e3));
    }
    print!("{}", report.render(cli.format));
    Ok(if report.status() == "fail" {
        EXIT_MISMATCH
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
