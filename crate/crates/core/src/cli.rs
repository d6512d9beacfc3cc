//! The `uslkit` command line.
//!
//! Exit codes are the same for every subcommand: 0 true or valid, 1 false or
//! invalid, 2 parse or format error, 3 cap exceeded (or a lattice the
//! constructions do not cover), 4 sentence outside the two-block fragment.

use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::caps::Caps;
use crate::extension::{decompose, free_extend, write_bundle, ExtensionError};
use crate::forcing::{self, DecisionTable, ForcingError, UniformTreeSpec};
use crate::order::text::{parse_pair, parse_structure, write_structure, NamedStructure};
use crate::order::{enumerate_usl_top, is_almost_end_extension, ElementId, FiniteUslTop};
use crate::sentence::decide::{decide, DecideError, PrefixClass};
use crate::sentence::{parse, PrenexError};
use crate::table::text::{parse_rep, parse_table, write_rep, write_table};
use crate::table::{build_rep_prefix, build_table, verify_coding_ready, verify_rep_prefix, verify_table, BuildError, MapId};

pub const TRUE: i32 = 0;
pub const FALSE: i32 = 1;
pub const FORMAT: i32 = 2;
pub const CAP: i32 = 3;
pub const FRAGMENT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "uslkit", version, about = "Finite reductions for the ∀∃ theory of upper semilattices with top")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Largest existential block
    #[arg(long, global = true)]
    pub max_exists: Option<NonZeroUsize>,
    /// Largest universal block
    #[arg(long, global = true)]
    pub max_forall: Option<NonZeroUsize>,
    /// Largest witness structure
    #[arg(long, global = true)]
    pub max_size: Option<NonZeroUsize>,
    /// Representation or split depth
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Wall-clock budget in seconds
    #[arg(long, global = true)]
    pub time_budget: Option<f64>,
    /// Print the certificate with the verdict
    #[arg(long, global = true)]
    pub cert: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide a Σ₂ or Π₂ sentence
    Decide { sentence: String },
    /// Is the pair in FILE an almost-end-extension?
    CheckAee { file: PathBuf },
    /// Structures of sizes 1..=N up to isomorphism
    EnumUsl { n: NonZeroUsize },
    /// Free extension of the structure in FILE
    FreeExt {
        file: PathBuf,
        /// comma-separated generator names
        #[arg(long = "gen", value_delimiter = ',', default_value = "g")]
        generators: Vec<String>,
    },
    /// Decomposition bundle for the pair in FILE
    Decompose { file: PathBuf },
    /// Differentiated tables: build and verify
    #[command(subcommand)]
    Table(TableCmd),
    /// Representation prefixes: build and verify
    #[command(subcommand)]
    Rep(RepCmd),
    /// Uniform trees over a prefix
    #[command(subcommand)]
    Tree(TreeCmd),
}

#[derive(Subcommand, Debug)]
pub enum TableCmd {
    /// Check the table in FILE
    Verify { file: PathBuf },
    /// Smallest table over the lattice in FILE
    Build { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum RepCmd {
    /// Prefix up to --depth (default 1) over the lattice in FILE
    Build {
        file: PathBuf,
        #[arg(long)]
        coding: bool,
    },
    /// Check the prefix in FILE
    Verify {
        file: PathBuf,
        /// also check the coding properties
        #[arg(long)]
        coding_ready: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum TreeCmd {
    /// Identity tree of --depth levels over the prefix in FILE
    New { file: PathBuf },
    /// Image of a string of map indices
    Apply { file: PathBuf, sigma: Vec<usize> },
    /// Shape, stage and congruence checks
    Check { file: PathBuf },
    /// Branch coding --bits through the pair
    Encode {
        file: PathBuf,
        /// `x,y` element names
        #[arg(long)]
        pair: String,
        /// e.g. `0110`
        #[arg(long, default_value = "")]
        bits: String,
    },
    /// Bits read off a branch through the pair
    Decode {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        values: Vec<usize>,
    },
    /// sp set of the decision table and, with --y, the splits modulo y
    Splits {
        file: PathBuf,
        decision: PathBuf,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, value_delimiter = ',')]
        rho: Vec<usize>,
    },
}

impl RunConfig {
    pub fn caps(&self) -> Result<Caps, Failure> {
        let mut c = Caps::default();
        if let Some(m) = self.max_exists {
            c.max_exists = m.get();
        }
        if let Some(k) = self.max_forall {
            c.max_forall = k.get();
        }
        if let Some(s) = self.max_size {
            c.max_witness_size = s.get();
        }
        if let Some(t) = self.time_budget {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Failure::new(FORMAT, "--time-budget must be a positive number of seconds"));
            }
            c.time_budget = Some(Duration::from_secs_f64(t));
        }
        Ok(c)
    }
}

/// Output value of one field.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Line(String),
    Num(usize),
    List(Vec<String>),
    /// a multi-line document, printed verbatim in text mode
    Doc(String),
    /// a JSON document shown as text in text mode
    Json(Value, String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reply {
    pub code: i32,
    pub fields: Vec<(&'static str, Field)>,
}

impl Reply {
    fn new(code: i32) -> Self {
        Reply { code, fields: vec![] }
    }

    fn with(mut self, key: &'static str, f: Field) -> Self {
        self.fields.push((key, f));
        self
    }

    fn line(self, key: &'static str, v: impl Into<String>) -> Self {
        self.with(key, Field::Line(v.into()))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                for (k, f) in &self.fields {
                    match f {
                        Field::Line(s) => out += &format!("{k}: {s}\n"),
                        Field::Num(n) => out += &format!("{k}: {n}\n"),
                        Field::List(v) => out += &format!("{k}: {}\n", v.join(" ")),
                        Field::Doc(d) | Field::Json(_, d) => out += d,
                    }
                }
                out
            }
            Format::Json => {
                let mut m = Map::new();
                for (k, f) in &self.fields {
                    let v = match f {
                        Field::Line(s) | Field::Doc(s) => json!(s),
                        Field::Num(n) => json!(n),
                        Field::List(v) => json!(v),
                        Field::Json(v, _) => v.clone(),
                    };
                    m.insert(k.to_string(), v);
                }
                m.insert("exit".into(), json!(self.code));
                serde_json::to_string_pretty(&Value::Object(m)).unwrap() + "\n"
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<crate::textfmt::FormatError> for Failure {
    fn from(e: crate::textfmt::FormatError) -> Self {
        Failure::new(FORMAT, e.to_string())
    }
}

impl From<crate::caps::CapExceeded> for Failure {
    fn from(e: crate::caps::CapExceeded) -> Self {
        Failure::new(CAP, e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        let code = match e {
            BuildError::TooFewCoatoms { .. } => FALSE,
            BuildError::CapExceeded(_) | BuildError::Unsupported { .. } => CAP,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ForcingError> for Failure {
    fn from(e: ForcingError) -> Self {
        Failure::new(FALSE, e.to_string())
    }
}

/// Parses `args` (program name first), runs, writes the reply or the error
/// and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { FORMAT } else { TRUE };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(reply) => {
            let _ = out.write_all(reply.render(cli.config.format).as_bytes());
            reply.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(FORMAT, format!("{}: {e}", path.display())))
}

fn names(l: &FiniteUslTop, xs: &[ElementId]) -> Vec<String> {
    xs.iter().map(|&x| l.name(x).to_string()).collect()
}

fn ids(v: &[usize]) -> Vec<MapId> {
    v.iter().copied().map(MapId).collect()
}

fn show(s: &[MapId]) -> Vec<String> {
    s.iter().map(|a| a.0.to_string()).collect()
}

fn verdict(ok: bool) -> i32 {
    if ok {
        TRUE
    } else {
        FALSE
    }
}

pub fn execute(cli: &Cli) -> Result<Reply, Failure> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Decide { sentence } => cmd_decide(sentence, cfg),
        Command::CheckAee { file } => {
            let w = parse_pair(&read(file)?)?;
            let aee = is_almost_end_extension(&w);
            Ok(Reply::new(verdict(aee)).line("almost-end-extension", if aee { "yes" } else { "no" }))
        }
        Command::EnumUsl { n } => {
            let caps = cfg.caps()?;
            let r = enumerate_usl_top(n.get(), &mut caps.budget())?;
            let mut doc = String::new();
            for (i, group) in r.by_size.iter().enumerate() {
                for (j, s) in group.iter().enumerate() {
                    doc += &write_structure(&format!("s{}_{j}", i + 1), s);
                }
            }
            Ok(Reply::new(TRUE)
                .with("counts", Field::List(r.counts().iter().map(usize::to_string).collect()))
                .with("total", Field::Num(r.all().count()))
                .with("structures", Field::Doc(doc)))
        }
        Command::FreeExt { file, generators } => {
            let NamedStructure { name, structure } = parse_structure(&read(file)?)?;
            let fe = free_extend(&structure, generators).map_err(|e| Failure::new(FORMAT, e.to_string()))?;
            Ok(Reply::new(TRUE)
                .with("size", Field::Num(fe.result.size()))
                .with("structure", Field::Doc(write_structure(&format!("{name}_free"), &fe.result)))
                .with("embedding", Field::List(names(&fe.result, &fe.embedding))))
        }
        Command::Decompose { file } => {
            let w = parse_pair(&read(file)?)?;
            match decompose(&w) {
                Ok(d) => Ok(Reply::new(TRUE).with("bundle", Field::Doc(write_bundle(&d)))),
                Err(ExtensionError::NotAlmostEndExtension) => {
                    Ok(Reply::new(FALSE).line("error", "NotAlmostEndExtension"))
                }
                Err(e) => Err(Failure::new(FALSE, e.to_string())),
            }
        }
        Command::Table(TableCmd::Verify { file }) => {
            let doc = parse_table(&read(file)?)?;
            let r = verify_table(&doc.table);
            Ok(Reply::new(verdict(r.passed())).with("report", Field::Doc(r.to_string())))
        }
        Command::Table(TableCmd::Build { file }) => {
            let s = parse_structure(&read(file)?)?;
            let t = build_table(&s.structure, &cfg.caps()?)?;
            Ok(Reply::new(TRUE).with("table", Field::Doc(write_table("t", &s.name, &t, None))))
        }
        Command::Rep(RepCmd::Build { file, coding }) => {
            let s = parse_structure(&read(file)?)?;
            let r = build_rep_prefix(&s.structure, cfg.depth.unwrap_or(1), *coding, &cfg.caps()?)?;
            Ok(Reply::new(TRUE).with("rep", Field::Doc(write_rep("r", &s.name, &r))))
        }
        Command::Rep(RepCmd::Verify { file, coding_ready }) => {
            let doc = parse_rep(&read(file)?)?;
            let r = if *coding_ready { verify_coding_ready(&doc.rep) } else { verify_rep_prefix(&doc.rep) };
            Ok(Reply::new(verdict(r.passed())).with("report", Field::Doc(r.to_string())))
        }
        Command::Tree(t) => cmd_tree(t, cfg),
    }
}

fn cmd_decide(sentence: &str, cfg: &RunConfig) -> Result<Reply, Failure> {
    let f = parse(sentence).map_err(|e| Failure::new(FORMAT, e.to_string()))?;
    let caps = cfg.caps()?;
    let (code, cert, cap) = match decide(&f, &caps) {
        Ok(c) => (verdict(c.verdict == Some(true)), c, None),
        Err(DecideError::CapExceeded { cap, partial }) => (CAP, *partial, Some(cap.to_string())),
        Err(DecideError::Fragment(e @ PrenexError::NotASentence(_))) => return Err(Failure::new(FORMAT, e.to_string())),
        Err(DecideError::Fragment(e)) => return Err(Failure::new(FRAGMENT, e.to_string())),
    };
    let v = match cert.verdict {
        Some(true) => "TRUE",
        Some(false) => "FALSE",
        None => "UNKNOWN",
    };
    let class = match cert.class {
        PrefixClass::Sigma2 => "sigma2",
        PrefixClass::Pi2 => "pi2",
    };
    let mut r = Reply::new(code).line("verdict", v).line("class", class);
    if let Some(c) = cap {
        r = r.line("cap", c);
    }
    if cfg.cert {
        let j: Value = serde_json::from_str(&cert.to_json()).expect("certificate JSON");
        r = r.with("certificate", Field::Json(j, cert.to_text()));
    }
    Ok(r)
}

fn load_tree(file: &Path) -> Result<(String, UniformTreeSpec), Failure> {
    Ok(forcing::parse_tree(&read(file)?)?)
}

fn element(l: &FiniteUslTop, name: &str) -> Result<ElementId, Failure> {
    l.id_of(name.trim()).ok_or_else(|| Failure::new(FORMAT, format!("unknown element `{name}`")))
}

fn pair(l: &FiniteUslTop, s: &str) -> Result<(ElementId, ElementId), Failure> {
    let (x, y) = s.split_once(',').ok_or_else(|| Failure::new(FORMAT, format!("expected `x,y`, found `{s}`")))?;
    Ok((element(l, x)?, element(l, y)?))
}

fn cmd_tree(cmd: &TreeCmd, cfg: &RunConfig) -> Result<Reply, Failure> {
    match cmd {
        TreeCmd::New { file } => {
            let doc = parse_rep(&read(file)?)?;
            let t = UniformTreeSpec::identity(&doc.rep, cfg.depth.unwrap_or(1));
            Ok(Reply::new(TRUE).with("tree", Field::Doc(forcing::write_tree("t", &doc.name, &doc.lattice_name, &t))))
        }
        TreeCmd::Apply { file, sigma } => {
            let (_, t) = load_tree(file)?;
            let sigma = ids(sigma);
            if let Some((j, &a)) = sigma.iter().enumerate().find(|(j, a)| a.0 >= t.rep.theta_len(*j)) {
                return Err(ForcingError::OutOfStage { pos: j, entry: a }.into());
            }
            Ok(Reply::new(TRUE).with("image", Field::List(show(&t.apply(&sigma)?))))
        }
        TreeCmd::Check { file } => {
            let (_, t) = load_tree(file)?;
            let mut c = t.validate();
            if c.passed() {
                c.extend("", forcing::check_branch_coding_free(&t));
                c.push("congruence-respecting", t.congruence_respecting());
            }
            Ok(Reply::new(verdict(c.passed())).with("report", Field::Doc(c.to_string())))
        }
        TreeCmd::Encode { file, pair: p, bits } => {
            let (_, t) = load_tree(file)?;
            let (x, y) = pair(t.rep.lattice(), p)?;
            let bits = parse_bits(bits)?;
            Ok(Reply::new(TRUE).with("image", Field::List(show(&forcing::encode_bits(&t, x, y, &bits)?))))
        }
        TreeCmd::Decode { file, pair: p, values } => {
            let (_, t) = load_tree(file)?;
            let (x, y) = pair(t.rep.lattice(), p)?;
            let vals = ids(values);
            if let Some(a) = vals.iter().find(|a| a.0 >= t.rep.table.len()) {
                return Err(Failure::new(FORMAT, format!("no map {a}")));
            }
            let bits = forcing::decode(&t.rep, &vals, x, y)?;
            Ok(Reply::new(TRUE).line("bits", bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>()))
        }
        TreeCmd::Splits { file, decision, y, rho } => {
            let (_, t) = load_tree(file)?;
            let q = DecisionTable::parse(&read(decision)?)?;
            let rho = ids(rho);
            let depth = cfg.depth.unwrap_or(t.depth());
            let qf = |s: &[MapId]| q.get(s);
            let l = t.rep.lattice();
            let sp = forcing::sp_set(&t, &qf, &rho, depth)?;
            let mut r = Reply::new(TRUE).with("sp", Field::List(names(l, &sp)));
            if let Some(c) = forcing::sp_meet_closed(l, &sp) {
                r = r.line("not-meet-closed", format!("{} {}", l.name(c.0), l.name(c.1)));
            }
            if let Some(y) = y {
                let y = element(l, y)?;
                let tr = t.restrict(&rho)?;
                let shifted = |s: &[MapId]| {
                    let mut full = rho.clone();
                    full.extend_from_slice(s);
                    q.get(&full)
                };
                let splits = forcing::find_splits(&tr, &shifted, y, depth);
                r = r.with("splits", Field::Num(splits.len()));
                if let Some(s) = splits.first() {
                    r = r
                        .with("sigma", Field::List(show(&s.sigma)))
                        .with("tau", Field::List(show(&s.tau)))
                        .with("n", Field::Num(s.n));
                }
                r.code = verdict(splits.is_empty());
            }
            Ok(r)
        }
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>, Failure> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Failure::new(FORMAT, format!("bits must be 0 or 1, found `{c}`"))),
        })
        .collect()
}
