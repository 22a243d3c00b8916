//! `reebmult`: index calculus, common index jumps and multiplicity bounds for
//! closed Reeb orbits from the command line.
//!
//! Exit codes: 0 success or CONSISTENT, 1 failed verification or REFUTED,
//! 2 search exhausted, 3 invalid input.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reebmult::catalog::{self, CrossEntry, CrossFamily};
use reebmult::certify::{self, BoundOptions, Verdict};
use reebmult::homology::{self, BaseManifold};
use reebmult::index;
use reebmult::jump::{self, JumpParams, Strategy};
use reebmult::rational::{self, Rational};
use reebmult::record::{self, Record};
use reebmult::schema::{self, BaseSpec, CertificateSpec, PathSpec, PathsSpec, SystemSpec};
use reebmult::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "reebmult", version, about = "Multiplicity bounds for closed Reeb orbits")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conley-Zehnder and mean indices of the iterates of a path.
    Index(IndexArgs),
    /// Find or verify a common index jump certificate.
    Jump(JumpArgs),
    /// Ranks of the positive equivariant homology over a degree range.
    Hc(HcArgs),
    /// Multiplicity bounds of a base, or the bound for degenerate forms.
    Bound(BoundArgs),
    /// Run the counting argument on a system file.
    Certify(CertifyArgs),
    /// The tables of multiplicity bounds.
    Catalog(CatalogArgs),
    /// Write the system file of an irrational ellipsoid.
    Ellipsoid(EllipsoidArgs),
}

#[derive(Debug, Args)]
struct IndexArgs {
    /// Path file (TOML).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    from: u64,
    /// Last iterate; defaults to `min(10, nondeg_bound)`.
    #[arg(long)]
    to: Option<u64>,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Window half-width `η` in `(0, 1/2)`, as `p/q`.
    #[arg(long)]
    eta: Option<String>,
    /// Upper bound on the scanned `k₁`.
    #[arg(long)]
    search_bound: Option<u64>,
    /// Only accept certificates with `k₁ ≥ K`.
    #[arg(long, default_value_t = 0)]
    min_k1: u64,
    #[arg(long, default_value_t = Strategy::Direct)]
    strategy: Strategy,
}

#[derive(Debug, Args)]
struct JumpArgs {
    /// Paths file (TOML, `[[paths]]` tables).
    #[arg(long)]
    input: PathBuf,
    /// Verify this certificate file instead of searching.
    #[arg(long, value_name = "CERTFILE")]
    verify: Option<PathBuf>,
    /// Write the certificate found to this file.
    #[arg(long, conflicts_with = "verify")]
    save: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    ell0: u64,
    #[arg(long, default_value_t = 1)]
    divisor: u64,
    /// Tolerance for the auxiliary iterate of the Minkowski strategy, as `p/q`.
    #[arg(long)]
    delta: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "base_source")]
struct BaseSource {
    /// Base file (TOML).
    #[arg(long)]
    input: Option<PathBuf>,
    /// A catalog family, e.g. `cosphere-hp`.
    #[arg(long)]
    family: Option<CrossFamily>,
}

#[derive(Debug, Args)]
struct HcArgs {
    #[command(flatten)]
    base: BaseSource,
    /// Parameter of the catalog family.
    #[arg(long, requires = "family")]
    param: Option<u64>,
    #[arg(long)]
    from: Option<i64>,
    #[arg(long)]
    to: Option<i64>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// Base file (TOML).
    #[arg(long, conflicts_with = "deg")]
    input: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["deg", "input"])]
    family: Option<CrossFamily>,
    #[arg(long, requires = "family")]
    param: Option<u64>,
    /// Bound for degenerate forms with `μ₋ ≥ q`.
    #[arg(long, requires_all = ["n", "q"])]
    deg: bool,
    #[arg(short = 'n', requires = "deg")]
    n: Option<u64>,
    #[arg(short = 'q', requires = "deg", allow_negative_numbers = true)]
    q: Option<i64>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// System file (TOML).
    #[arg(long)]
    input: PathBuf,
    /// Divisibility of `d`; a positive multiple of `2c_B`, defaults to `2c_B`.
    #[arg(long)]
    divisor: Option<u64>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    /// Also list the recomputed catalog instances.
    #[arg(long)]
    entries: bool,
}

#[derive(Debug, Args)]
struct EllipsoidArgs {
    /// Comma-separated weights `a_1,…,a_{n+1}` as `p/q`.
    #[arg(long, required_unless_present = "random", conflicts_with = "random")]
    weights: Option<String>,
    /// Draw the given number `n + 1` of random weights.
    #[arg(long, value_name = "COUNT")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certified nondegeneracy bound; defaults to the largest one the weights allow.
    #[arg(long)]
    nondeg_bound: Option<u64>,
    /// Write the system here instead of standard output.
    #[arg(long)]
    save: Option<PathBuf>,
}

/// Result of a command that ran to completion.
struct Outcome {
    text: String,
    records: Vec<Record>,
    code: u8,
}

impl Outcome {
    fn ok(text: String, records: Vec<Record>) -> Self {
        Self { text, records, code: 0 }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

fn parse_opt_rational(raw: &Option<String>) -> Result<Option<Rational>> {
    raw.as_deref().map(rational::parse_rational).transpose()
}

fn load_base(input: Option<&Path>, family: Option<CrossFamily>, param: Option<u64>) -> Result<BaseManifold> {
    match (input, family) {
        (Some(path), _) => schema::from_toml::<BaseSpec>(&read(path)?)?.to_model(),
        (None, Some(family)) => CrossEntry::new(family, param)
            .map(|e| e.base)
            .ok_or_else(|| Error::Validation(format!("family {family} does not admit parameter {param:?}"))),
        (None, None) => Err(Error::Validation("no base given".into())),
    }
}

fn cmd_index(args: &IndexArgs) -> Result<Outcome> {
    let path = schema::from_toml::<PathSpec>(&read(&args.input)?)?.to_model()?;
    let to = args.to.unwrap_or_else(|| path.nondeg_bound().min(10));
    if args.from == 0 || args.from > to {
        return Err(Error::Validation(format!("empty iterate range {}..={to}", args.from)));
    }
    let mut rows = Vec::new();
    for k in args.from..=to {
        rows.push((k, index::cz_index(&path, k)?, index::mean_index(&path, k), index::is_good(&path, k)?));
    }
    let slope = index::mean_index_per_iterate(&path);
    let mut records = vec![Record::new()
        .with("record", "path")
        .with("half_dim", path.half_dim())
        .with("nondeg_bound", path.nondeg_bound())
        .with("mean_index_per_iterate", rational::fmt_rational(&slope))];
    records.extend(rows.iter().map(|(k, mu, mean, good)| {
        Record::new()
            .with("record", "iterate")
            .with("k", k)
            .with("cz", mu)
            .with("mean_index", rational::fmt_rational(mean))
            .with("good", good)
    }));
    Ok(Outcome::ok(render::index_table(&path, &slope, &rows), records))
}

fn cmd_jump(args: &JumpArgs) -> Result<Outcome> {
    let paths = schema::from_toml::<PathsSpec>(&read(&args.input)?)?.to_models()?;
    if let Some(cert_path) = &args.verify {
        let cert = schema::from_toml::<CertificateSpec>(&read(cert_path)?)?.to_model()?;
        cert.params.validate()?;
        let report = jump::verify_jump(&paths, &cert, &cert.params);
        let code = if report.passed() { 0 } else { 1 };
        let records = vec![Record::from(&cert), Record::from(&report)];
        return Ok(Outcome {
            text: render::verification(&cert, &report),
            records,
            code,
        });
    }
    let eta = parse_opt_rational(&args.solver.eta)?.unwrap_or_else(|| rational::ratio(1, 10));
    let params = JumpParams {
        delta: parse_opt_rational(&args.delta)?,
        strategy: args.solver.strategy,
        ..JumpParams::new(eta, args.ell0, args.divisor, args.solver.search_bound.unwrap_or(10_000_000))
    };
    let cert = jump::find_common_jump(&paths, &params, args.solver.min_k1)?;
    let report = jump::verify_jump(&paths, &cert, &params);
    if let Some(save) = &args.save {
        write(save, &schema::to_toml(&CertificateSpec::from_model(&cert))?)?;
    }
    let code = if report.passed() { 0 } else { 1 };
    Ok(Outcome {
        text: render::verification(&cert, &report),
        records: vec![Record::from(&cert), Record::from(&report)],
        code,
    })
}

fn cmd_hc(args: &HcArgs) -> Result<Outcome> {
    let base = load_base(args.base.input.as_deref(), args.base.family, args.param)?;
    let n = base.n() as i64;
    let period = 2 * base.chern_min() as i64;
    let from = args.from.unwrap_or(0);
    let to = args.to.unwrap_or(n + 2 * period);
    if from > to {
        return Err(Error::Validation(format!("empty degree range {from}..={to}")));
    }
    let ranks: Vec<(i64, u64)> = (from..=to).map(|m| (m, homology::hc_rank(&base, m))).collect();
    let chi = homology::mean_euler_char(&base);
    let mut head = Record::new()
        .with("record", "base")
        .with("n", n)
        .with("c_B", base.chern_min())
        .with("euler_characteristic", base.euler_characteristic())
        .with("mean_euler_char", rational::fmt_rational(&chi))
        .with("mean_euler_char_derived", homology::mean_euler_char_is_derived(&base));
    for warning in base.hypothesis_warnings() {
        head.push("warning", warning);
    }
    let mut records = vec![head];
    records.extend(
        ranks
            .iter()
            .map(|(m, r)| Record::new().with("record", "rank").with("degree", m).with("rank", r)),
    );
    Ok(Outcome::ok(render::hc_table(&base, &chi, &ranks), records))
}

fn cmd_bound(args: &BoundArgs) -> Result<Outcome> {
    if args.deg {
        let (n, q) = (args.n.unwrap_or(0), args.q.unwrap_or(0));
        let r = homology::deg_lower_bound(n, q)?;
        let record = Record::new().with("record", "deg").with("n", n).with("q", q).with("r", r);
        return Ok(Outcome::ok(format!("{r}\n"), vec![record]));
    }
    let base = load_base(args.input.as_deref(), args.family, args.param)?;
    let r_b = homology::r_bound(&base);
    let r_nonhyp = homology::r_nonhyp_bound(&base);
    let mut record = Record::new()
        .with("record", "bounds")
        .with("n", base.n())
        .with("c_B", base.chern_min())
        .with("r_B", r_b)
        .with("r_nonhyp", r_nonhyp);
    let warnings = base.hypothesis_warnings();
    for w in &warnings {
        record.push("warning", w);
    }
    let mut text = format!("r_B = {r_b}\nr_B^non-hyp = {r_nonhyp}\n");
    for w in &warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    Ok(Outcome::ok(text, vec![record]))
}

fn cmd_certify(args: &CertifyArgs) -> Result<Outcome> {
    let system = schema::from_toml::<SystemSpec>(&read(&args.input)?)?.to_model()?;
    let two_c = 2 * system.base.chern_min();
    let multiplier = match args.divisor {
        None => 1,
        Some(d) if d > 0 && d % two_c == 0 => d / two_c,
        Some(d) => {
            return Err(Error::Validation(format!("divisor {d} is not a positive multiple of 2c_B = {two_c}")));
        }
    };
    let options = BoundOptions {
        eta: parse_opt_rational(&args.solver.eta)?,
        multiplier,
        search_bound: args.solver.search_bound.unwrap_or(BoundOptions::default().search_bound),
        min_k1: args.solver.min_k1,
        strategy: args.solver.strategy,
    };
    let report = certify::verify_theorem_bound(&system, &options)?;
    let code = match report.verdict {
        Verdict::Consistent => 0,
        Verdict::Refuted => 1,
    };
    Ok(Outcome {
        text: render::bound_report(&report),
        records: record::bound_report_records(&report),
        code,
    })
}

fn cmd_catalog(args: &CatalogArgs) -> Outcome {
    let mut text = catalog::render_text();
    let mut records = catalog::table_records();
    if args.entries {
        text.push('\n');
        text.push_str(&render::catalog_entries(&catalog::cross_catalog()));
        records.extend(catalog::entry_records());
    }
    Outcome::ok(text, records)
}

/// `n + 1` weights: `1` and then `p/10¹²` with `p` uniform in `(10¹², 3·10¹²)`.
fn random_weights(count: usize, seed: u64) -> Vec<Rational> {
    let scale = 1_000_000_000_000_i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![rational::int(1)];
    while out.len() < count {
        let w = rational::ratio(rng.gen_range(scale + 1..3 * scale), scale);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

fn cmd_ellipsoid(args: &EllipsoidArgs) -> Result<Outcome> {
    let weights = match (&args.weights, args.random) {
        (Some(raw), _) => raw
            .split(',')
            .map(rational::parse_rational)
            .collect::<Result<Vec<_>>>()?,
        (None, Some(count)) => random_weights(count, args.seed),
        (None, None) => return Err(Error::Validation("no weights given".into())),
    };
    let bound = args.nondeg_bound.unwrap_or_else(|| certify::ellipsoid_nondeg_bound(&weights).clamp(1, 1 << 61));
    let system = certify::ellipsoid_system(&weights, bound)?;
    let text = schema::to_toml(&SystemSpec::from_model(&system))?;
    let record = Record::new()
        .with("record", "ellipsoid")
        .with("weights", record::join_list(weights.iter().map(rational::fmt_rational)))
        .with("nondeg_bound", bound);
    match &args.save {
        Some(path) => {
            write(path, &text)?;
            Ok(Outcome::ok(format!("wrote {}\n", path.display()), vec![record]))
        }
        None => Ok(Outcome::ok(text, vec![record])),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Index(a) => cmd_index(a),
        Command::Jump(a) => cmd_jump(a),
        Command::Hc(a) => cmd_hc(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Catalog(a) => Ok(cmd_catalog(a)),
        Command::Ellipsoid(a) => cmd_ellipsoid(a),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SearchExhausted { .. } => 2,
        Error::CertificateMismatch(_) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            // The ellipsoid system is always TOML on standard output.
            let ellipsoid_stdout = matches!(&cli.command, Command::Ellipsoid(a) if a.save.is_none());
            match cli.output {
                Output::Machine if !ellipsoid_stdout => print!("{}", record::write_records(&outcome.records)),
                _ => print!("{}", outcome.text),
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
