//! Command-line front end.
//!
//! Exit codes: 0 success, 1 negative answer or failed check, 2 usage or
//! unreadable input, 3 a search or closure hit its cap.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::braceforge::{cyclic_brace_family, rump_solution, Brace, BraceError, CyclicKind};
use crate::enumerate::{
    census_breakdown, census_limited, census_report, format_table, oracle_check, table1_report, EnumError,
    MAX_CENSUS_SIZE,
};
use crate::intlat::{AbGroup, IntLatError, IntMatrix};
use crate::permkit::PermError;
use crate::quotients::{
    enumerate_congruences, quotient_by, quotient_invariant_report, CongruenceDescriptor, DescriptorJson, QuotientError,
};
use crate::sconstruct::{build_solution, module_construction, SError, SParams, SParamsJson};
use crate::ybecore::{
    displacement_group, find_isomorphism, is_indecomposable, is_square_free, is_uniconnected, multipermutation_level,
    permutation_group, verify_braid, FinSolution, SolutionJson, YbeError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mpl2", version, about = "Indecomposable involutive solutions of multipermutation level 2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a solution file and print its invariants.
    Verify { path: PathBuf },
    /// Build a solution and write it as a solution file.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        /// Output file (stdout when omitted).
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// List every congruence of S(G×Z_n, c), one JSON descriptor per line.
    Congruences(ParamArgs),
    /// Build the quotient of S(G×Z_n, c) by a congruence.
    Quotient {
        #[command(flatten)]
        params: ParamArgs,
        /// Descriptor JSON, e.g. '{"m":3,"H":[[0]],"r":[1]}', or a path to one.
        #[arg(long)]
        descriptor: String,
        /// Print the image invariants instead of the solution.
        #[arg(long)]
        report: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exit 0 when the two solution files are isomorphic, 1 otherwise.
    Iso { a: PathBuf, b: PathBuf },
    /// Count (and optionally emit) all solutions of one size.
    Census {
        #[arg(long)]
        size: usize,
        /// Directory receiving one solution file per census entry.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Largest size accepted.
        #[arg(long, default_value_t = MAX_CENSUS_SIZE)]
        max: usize,
        #[arg(long)]
        json: bool,
    },
    /// Totals, abelian and cyclic counts for sizes 1..=max.
    Table1 {
        #[arg(long, default_value_t = 16)]
        max: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConstructKind {
    /// S(G×Z_n, c).
    S(ParamArgs),
    /// Free Z_k-module of rank r with n = 2r.
    Module {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        r: usize,
    },
    /// Rump solution of the dihedral brace on Z_{2^m}.
    BraceDihedral {
        #[arg(long)]
        m: u32,
    },
    /// Rump solution of the quaternion brace on Z_{2^m}.
    BraceQuaternion {
        #[arg(long)]
        m: u32,
    },
    /// Rump solution of the brace G⋊Z_n with (a,i)∘(b,j) = (a+α^i(b), i+j).
    Semidirect {
        #[arg(long, value_delimiter = ',')]
        factors: Vec<i64>,
        #[arg(long)]
        n: usize,
        /// Matrix of α by rows, e.g. "0,1;1,1".
        #[arg(long)]
        alpha: String,
        /// Group part of the cycle base generator.
        #[arg(long)]
        base: String,
        /// Z_n part of the cycle base generator.
        #[arg(long, default_value_t = 1)]
        shift: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Invariant factors of G, e.g. 4,2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub factors: Option<Vec<i64>>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Constants c_0..c_{n-1}: ';' between elements, ',' between coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// JSON file with {"factors", "n", "c"} instead of the three flags.
    #[arg(long, conflicts_with_all = ["factors", "n", "c"])]
    pub params: Option<PathBuf>,
}

/// A solution file: `size`, `sigma` and an optional `meta` block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub size: usize,
    pub sigma: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

impl SolutionFile {
    pub fn new(s: &FinSolution, meta: Option<Value>) -> SolutionFile {
        let j = s.to_json();
        SolutionFile {
            size: j.size,
            sigma: j.sigma,
            meta,
        }
    }

    pub fn solution(&self) -> Result<FinSolution, YbeError> {
        FinSolution::from_json(&SolutionJson {
            size: self.size,
            sigma: self.sigma.clone(),
        })
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string(self).expect("serializable") + "\n"
    }

    pub fn parse(text: &str) -> Result<SolutionFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed solution file: {e}")))
    }

    pub fn read(path: &Path) -> Result<SolutionFile, CliError> {
        Self::parse(&read_text(path)?)
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Negative(String),
    Cap(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Negative(_) => EXIT_NEGATIVE,
            CliError::Cap(_) => EXIT_CAP,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Negative(m) | CliError::Cap(m) | CliError::Io(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<YbeError> for CliError {
    fn from(e: YbeError) -> Self {
        match e {
            YbeError::Perm(PermError::CapExceeded(_)) | YbeError::TooLarge(_) => CliError::Cap(e.to_string()),
            YbeError::Json(_) => CliError::Input(e.to_string()),
            other => CliError::Negative(format!("{other:?}: {other}")),
        }
    }
}

impl From<IntLatError> for CliError {
    fn from(e: IntLatError) -> Self {
        match e {
            IntLatError::TooLarge(_) | IntLatError::Overflow => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SError> for CliError {
    fn from(e: SError) -> Self {
        match e {
            SError::TooLarge(_) => CliError::Cap(e.to_string()),
            SError::BadParams(_) => CliError::Input(e.to_string()),
            SError::Lattice(l) => l.into(),
            SError::Solution(s) => s.into(),
        }
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::CapExceeded | QuotientError::TooLarge(_) => CliError::Cap(e.to_string()),
            QuotientError::BadDescriptor(_) => CliError::Input(e.to_string()),
            QuotientError::Lattice(l) => l.into(),
            QuotientError::Construction(s) => s.into(),
            QuotientError::Solution(s) => s.into(),
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::CapExceeded | EnumError::TooLarge(_) => CliError::Cap(e.to_string()),
            EnumError::Lattice(l) => l.into(),
            EnumError::Construction(s) => s.into(),
            EnumError::Solution(s) => s.into(),
        }
    }
}

impl From<BraceError> for CliError {
    fn from(e: BraceError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Parses `"0,0;1,0"` into coordinate vectors.
pub fn parse_elements(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    text.split(';')
        .map(|part| {
            part.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|e| CliError::Input(format!("bad coordinate {x:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

impl ParamArgs {
    pub fn load(&self) -> Result<SParams, CliError> {
        if let Some(path) = &self.params {
            let j: SParamsJson = serde_json::from_str(&read_text(path)?)
                .map_err(|e| CliError::Input(format!("malformed parameter file: {e}")))?;
            return Ok(SParams::from_json(&j)?);
        }
        let (Some(factors), Some(n), Some(c)) = (&self.factors, self.n, &self.c) else {
            return Err(CliError::Input("need --factors, --n and --c, or --params".into()));
        };
        Ok(SParams::from_raw(factors, n, &parse_elements(c)?)?)
    }
}

fn params_meta(kind: &str, p: &SParams) -> Value {
    serde_json::json!({ "kind": kind, "params": p.to_json() })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, file: &SolutionFile) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, file.to_text())?,
        None => out.write_all(file.to_text().as_bytes())?,
    }
    Ok(())
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| CliError::Io(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_verify(out: &mut dyn Write, path: &Path) -> Result<i32, CliError> {
    let file = SolutionFile::read(path)?;
    let s = file.solution()?;
    let check = oracle_check(&s);
    writeln!(out, "size            {}", s.size())?;
    writeln!(out, "braid           {}", yes(check.braid))?;
    writeln!(out, "involutive      {}", yes(check.involutive))?;
    writeln!(out, "non-degenerate  {}", yes(check.nondegenerate))?;
    writeln!(out, "square-free     {}", yes(is_square_free(&s)))?;
    match multipermutation_level(&s) {
        Ok(l) => writeln!(out, "level           {l}")?,
        Err(_) => writeln!(out, "level           none")?,
    }
    writeln!(out, "indecomposable  {}", yes(is_indecomposable(&s)))?;
    writeln!(out, "uniconnected    {}", yes(is_uniconnected(&s)?))?;
    writeln!(out, "|G|             {}", permutation_group(&s)?.order())?;
    writeln!(out, "|Dis|           {}", displacement_group(&s)?.order())?;
    if let Some((x, y, z)) = verify_braid(&s) {
        return Err(CliError::Negative(format!("braid relation fails at ({x}, {y}, {z})")));
    }
    Ok(EXIT_OK)
}

fn cmd_construct(out: &mut dyn Write, kind: &ConstructKind, path: Option<&Path>) -> Result<i32, CliError> {
    let (s, meta) = match kind {
        ConstructKind::S(args) => {
            let p = args.load()?;
            (build_solution(&p)?, params_meta("s", &p))
        }
        ConstructKind::Module { k, r } => {
            let p = module_construction(*k, *r)?;
            (build_solution(&p)?, params_meta("module", &p))
        }
        ConstructKind::BraceDihedral { m } => (
            cyclic_brace_family(CyclicKind::Dihedral, *m)?,
            serde_json::json!({ "kind": "brace-dihedral", "m": m }),
        ),
        ConstructKind::BraceQuaternion { m } => (
            cyclic_brace_family(CyclicKind::Quaternion, *m)?,
            serde_json::json!({ "kind": "brace-quaternion", "m": m }),
        ),
        ConstructKind::Semidirect {
            factors,
            n,
            alpha,
            base,
            shift,
        } => {
            let g = AbGroup::new(factors.clone())?;
            let alpha_m = IntMatrix::from_rows(&parse_elements(alpha)?)?;
            let brace = Brace::semidirect_trivial(&g, *n, &alpha_m)?;
            let coords = parse_elements(base)?.concat();
            let gen = g.index_of(&g.elem(&coords)?) * n + shift % n;
            let meta = serde_json::json!({
                "kind": "semidirect", "factors": factors, "n": n,
                "alpha": alpha_m.to_rows(), "base": coords, "shift": shift,
            });
            (rump_solution(&brace, gen)?, meta)
        }
    };
    emit(out, path, &SolutionFile::new(&s, Some(meta)))?;
    Ok(EXIT_OK)
}

fn load_descriptor(p: &SParams, text: &str) -> Result<CongruenceDescriptor, CliError> {
    let raw = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        read_text(Path::new(text))?
    };
    let j: DescriptorJson =
        serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("malformed descriptor: {e}")))?;
    Ok(CongruenceDescriptor::from_json(p, &j)?)
}

fn cmd_congruences(out: &mut dyn Write, args: &ParamArgs) -> Result<i32, CliError> {
    let p = args.load()?;
    for d in enumerate_congruences(&p)? {
        writeln!(out, "{}", serde_json::to_string(&d.to_json()).expect("serializable"))?;
    }
    Ok(EXIT_OK)
}

fn cmd_quotient(
    out: &mut dyn Write,
    args: &ParamArgs,
    descriptor: &str,
    report: bool,
    path: Option<&Path>,
) -> Result<i32, CliError> {
    let p = args.load()?;
    let d = load_descriptor(&p, descriptor)?;
    if report {
        let r = quotient_invariant_report(&p, &d)?;
        writeln!(out, "{}", serde_json::to_string(&r).expect("serializable"))?;
        return Ok(if r.all_hold() { EXIT_OK } else { EXIT_NEGATIVE });
    }
    let y = quotient_by(&p, &d)?;
    let meta = serde_json::json!({ "kind": "quotient", "params": p.to_json(), "descriptor": d.to_json() });
    emit(out, path, &SolutionFile::new(&y, Some(meta)))?;
    Ok(EXIT_OK)
}

fn cmd_iso(out: &mut dyn Write, a: &Path, b: &Path) -> Result<i32, CliError> {
    let s1 = SolutionFile::read(a)?.solution()?;
    let s2 = SolutionFile::read(b)?.solution()?;
    match find_isomorphism(&s1, &s2) {
        Some(phi) => {
            writeln!(out, "isomorphic {phi:?}")?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "not isomorphic")?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_census(
    out: &mut dyn Write,
    size: usize,
    emit_dir: Option<&Path>,
    jobs: Option<usize>,
    max: usize,
    json: bool,
) -> Result<i32, CliError> {
    let report = with_jobs(jobs, || census_report(size, max))??;
    if let Some(dir) = emit_dir {
        fs::create_dir_all(dir)?;
        for e in census_limited(size, max)? {
            let meta = serde_json::to_value(e.meta()).expect("serializable");
            let file = SolutionFile::new(&e.solution()?, Some(serde_json::json!({ "kind": "census", "census": meta })));
            fs::write(dir.join(format!("{}.json", e.file_stem())), file.to_text())?;
        }
    }
    if json {
        writeln!(out, "{}", serde_json::to_string(&report).expect("serializable"))?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "{:>4} {:<10} {:>6}", "m", "G/H", "count")?;
    for ((m, g), c) in census_breakdown(size)? {
        writeln!(out, "{m:>4} {g:<10} {c:>6}")?;
    }
    writeln!(out, "total {}", report.total)?;
    writeln!(out, "abelian {}", report.abelian)?;
    writeln!(out, "cyclic {}", report.cyclic)?;
    Ok(EXIT_OK)
}

fn cmd_table1(out: &mut dyn Write, max: usize, jobs: Option<usize>, json: bool) -> Result<i32, CliError> {
    let rows = with_jobs(jobs, || table1_report(max))??;
    if json {
        for r in &rows {
            writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))?;
        }
    } else {
        write!(out, "{}", format_table(&rows))?;
    }
    Ok(EXIT_OK)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Verify { path } => cmd_verify(out, path),
        Command::Construct { kind, out: path } => cmd_construct(out, kind, path.as_deref()),
        Command::Congruences(args) => cmd_congruences(out, args),
        Command::Quotient {
            params,
            descriptor,
            report,
            out: path,
        } => cmd_quotient(out, params, descriptor, *report, path.as_deref()),
        Command::Iso { a, b } => cmd_iso(out, a, b),
        Command::Census {
            size,
            emit,
            jobs,
            max,
            json,
        } => cmd_census(out, *size, emit.as_deref(), *jobs, *max, *json),
        Command::Table1 { max, jobs, json } => cmd_table1(out, *max, *jobs, *json),
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("mpl2").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn element_syntax() {
        assert_eq!(parse_elements("0,0;1,0").unwrap(), vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(parse_elements("-1").unwrap(), vec![vec![-1]]);
        assert!(parse_elements("0;x").is_err());
    }

    #[test]
    fn construct_and_congruences() {
        let (code, text, _) = run_capture(&["construct", "s", "--factors", "4,2", "--n", "4", "--c", "0,0;1,0;1,0;2,1"]);
        assert_eq!(code, 0);
        let file = SolutionFile::parse(&text).unwrap();
        assert_eq!(file.size, 32);
        assert_eq!(file.to_text(), text);

        let (code, text, _) = run_capture(&["congruences", "--factors", "2", "--n", "6", "--c", "0;1;1;0;1;1"]);
        assert_eq!(code, 0);
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn permutation_solution_from_trivial_group() {
        let (code, text, _) = run_capture(&["construct", "s", "--factors", "1", "--n", "5", "--c", "0;0;0;0;0"]);
        assert_eq!(code, 0);
        let s = SolutionFile::parse(&text).unwrap().solution().unwrap();
        assert_eq!(s.sigma_perm(0).cycle_type(), vec![5]);
        assert!((1..5).all(|x| s.sigma_perm(x) == s.sigma_perm(0)));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["congruences", "--factors", "2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["census", "--size", "40"]).0, EXIT_CAP);
    }
}
