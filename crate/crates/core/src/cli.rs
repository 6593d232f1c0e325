//! Ring files, element syntax and the `ringlab` command line.
//!
//! Ring file grammar (line oriented, `#` starts a comment):
//!
//! ```text
//! ring B_l(F2)
//! additive 2 2
//! mul e1 e1 = (1,0)
//! mul e1 e2 = (0,1)
//! mul e2 e1 = (0,0)
//! mul e2 e2 = (0,0)
//! ```
//!
//! `default zero` makes every undeclared product zero; without it each of the
//! `k^2` generator products must be declared.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::classify::{
    classify_finite, classify_finite_rank, classify_functions, classify_supported_sum, verify_complete_idempotents,
    Classification, Evidence, RingClass, Verdict,
};
use crate::computable::{ComputableRing, Sides};
use crate::constructions::{
    b_l, b_r, cyclic_ring, finite_corpus, matrix_ring, prime_field, twisted_semigroup_ring, zero_ring,
    ConstructionError, FiniteRankMatrices, SupportedDirectSum,
};
use crate::funring::{bump, rat, ratio, CompactSupportFunctions, PiecewisePolynomial};
use crate::ring::{Element, FiniteAbelianGroup, FiniteRing, MatrixLabels, RingError, Side};
use crate::witnesses::{self, WitnessError};

/// Probe bound used when neither `--bound` nor `RINGLAB_BOUND` is given.
pub const DEFAULT_BOUND: usize = 8;

/// Largest ring `table` will print.
const TABLE_LIMIT: u64 = 256;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    #[error("product e{0}*e{1} is not declared and `default zero` is absent")]
    MissingProduct(usize, usize),
    #[error("expected {expected} coordinates, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for a refuted witness hypothesis, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Witness(_) => 2,
            _ => 1,
        }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::SyntaxError { line, column, message: message.into() }
}

// ---------------------------------------------------------------------------
// ring files

/// Tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_generator(tok: &str, line: usize, column: usize, k: usize) -> Result<usize, CliError> {
    let idx = tok
        .strip_prefix('e')
        .and_then(|d| d.parse::<usize>().ok())
        .ok_or_else(|| syntax(line, column, format!("expected a generator like e1, found `{tok}`")))?;
    if idx == 0 || idx > k {
        return Err(syntax(line, column, format!("generator e{idx} outside e1..e{k}")));
    }
    Ok(idx - 1)
}

/// `(c1,...,ck)` as integers; whitespace inside is allowed.
fn parse_tuple(text: &str, line: usize, column: usize) -> Result<Vec<i64>, CliError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| syntax(line, column, format!("expected a tuple like (1,0), found `{}`", text.trim())))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| syntax(line, column, format!("`{}` is not an integer", c.trim())))
        })
        .collect()
}

/// Restores named matrix units for rings called `M<n>(...)` whose identity is
/// block diagonal with a common diagonal block.
fn infer_matrix_labels(ring: FiniteRing) -> FiniteRing {
    let n = ring
        .name()
        .strip_prefix('M')
        .and_then(|rest| rest.split_once('('))
        .and_then(|(digits, _)| digits.parse::<usize>().ok());
    let Some(n) = n.filter(|&n| n >= 1 && ring.rank().is_multiple_of(n * n) && ring.rank() > 0) else {
        return ring;
    };
    if ring.size() > crate::ring::MAX_ENUMERABLE {
        return ring;
    }
    let Some(one) = ring.identity() else {
        return ring;
    };
    let base_rank = ring.rank() / (n * n);
    let block = |i: usize, j: usize| &one.coords()[(i * n + j) * base_rank..(i * n + j + 1) * base_rank];
    let base_one = block(0, 0).to_vec();
    let consistent = (0..n).all(|i| {
        (0..n).all(|j| {
            let b = block(i, j);
            if i == j {
                b == base_one.as_slice()
            } else {
                b.iter().all(|&c| c == 0)
            }
        })
    });
    if consistent {
        ring.with_labels(MatrixLabels { n, base_rank, base_one })
    } else {
        ring
    }
}

pub fn parse_ring_file(text: &str) -> Result<FiniteRing, CliError> {
    let mut name: Option<String> = None;
    let mut group: Option<FiniteAbelianGroup> = None;
    let mut default_zero = false;
    let mut products: Vec<Option<Vec<u64>>> = Vec::new();
    let mut last_line = 0;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "ring" => {
                if name.is_some() {
                    return Err(syntax(line_no, col, "duplicate `ring` line"));
                }
                let rest = line[col - 1 + keyword.len()..].trim();
                if rest.is_empty() {
                    return Err(syntax(line_no, col + keyword.len(), "missing ring name"));
                }
                name = Some(rest.to_string());
            }
            "additive" => {
                if group.is_some() {
                    return Err(syntax(line_no, col, "duplicate `additive` line"));
                }
                let orders = toks[1..]
                    .iter()
                    .map(|&(c, t)| {
                        t.parse::<u64>()
                            .map_err(|_| syntax(line_no, c, format!("`{t}` is not a cyclic order")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let g = FiniteAbelianGroup::new(orders)?;
                products = vec![None; g.rank() * g.rank()];
                group = Some(g);
            }
            "default" => {
                if toks.len() != 2 || toks[1].1 != "zero" {
                    return Err(syntax(line_no, col, "expected `default zero`"));
                }
                default_zero = true;
            }
            "mul" => {
                let g = group
                    .as_ref()
                    .ok_or_else(|| syntax(line_no, col, "`mul` before `additive`"))?;
                let k = g.rank();
                if toks.len() < 5 || toks[3].1 != "=" {
                    return Err(syntax(line_no, col, "expected `mul ei ej = (c1,...,ck)`"));
                }
                let i = parse_generator(toks[1].1, line_no, toks[1].0, k)?;
                let j = parse_generator(toks[2].1, line_no, toks[2].0, k)?;
                let tuple_col = toks[4].0;
                let coords = parse_tuple(&line[tuple_col - 1..], line_no, tuple_col)?;
                if coords.len() != k {
                    return Err(syntax(
                        line_no,
                        tuple_col,
                        format!("expected {k} coordinates, got {}", coords.len()),
                    ));
                }
                let slot = &mut products[i * k + j];
                if slot.is_some() {
                    return Err(syntax(line_no, col, format!("product e{}*e{} declared twice", i + 1, j + 1)));
                }
                *slot = Some(g.reduce(&coords)?.into_coords());
            }
            other => return Err(syntax(line_no, col, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| syntax(last_line + 1, 1, "missing `ring NAME` line"))?;
    let group = group.ok_or_else(|| syntax(last_line + 1, 1, "missing `additive` line"))?;
    let k = group.rank();
    let mut table = Vec::with_capacity(k * k);
    for (idx, slot) in products.into_iter().enumerate() {
        match slot {
            Some(c) => table.push(c),
            None if default_zero => table.push(vec![0; k]),
            None => return Err(CliError::MissingProduct(idx / k + 1, idx % k + 1)),
        }
    }
    let ring = FiniteRing::new(group.orders().to_vec(), table, &name)?;
    Ok(infer_matrix_labels(ring))
}

/// The ring file for `ring`: every generator product declared explicitly.
pub fn export_ring_file(ring: &FiniteRing) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ring {}", ring.name());
    let orders: Vec<String> = ring.orders().iter().map(u64::to_string).collect();
    let _ = writeln!(out, "additive {}", orders.join(" "));
    let k = ring.rank();
    for i in 0..k {
        for j in 0..k {
            let _ = writeln!(out, "mul e{} e{} = {}", i + 1, j + 1, ring.structure_constant(i, j));
        }
    }
    out
}

/// `(c1,...,ck)` (coordinates reduced), or for matrix rings named units such
/// as `E01`, `E00+E11` or `(E01)`.
pub fn parse_element(ring: &FiniteRing, text: &str) -> Result<Element, CliError> {
    let text = text.trim();
    let inner = text.strip_prefix('(').and_then(|t| t.strip_suffix(')'));
    let numeric = inner.is_some_and(|t| t.chars().all(|c| c.is_ascii_digit() || "-, ".contains(c)));
    if numeric {
        let coords = parse_tuple(text, 1, 1)?;
        if coords.len() != ring.rank() {
            return Err(CliError::ArityMismatch { expected: ring.rank(), found: coords.len() });
        }
        return Ok(ring.group().reduce(&coords)?);
    }
    let body = inner.unwrap_or(text).trim();
    if ring.labels().is_none() {
        return Err(syntax(1, 1, format!("expected a tuple like (1,0), found `{text}`")));
    }
    if body == "0" {
        return Ok(ring.zero());
    }
    let mut acc = ring.zero();
    for term in body.split('+') {
        let term = term.trim();
        let unit = term
            .strip_prefix('E')
            .filter(|d| d.len() == 2 && d.chars().all(|c| c.is_ascii_digit()))
            .and_then(|d| {
                let b = d.as_bytes();
                ring.matrix_unit(usize::from(b[0] - b'0'), usize::from(b[1] - b'0'))
            })
            .ok_or_else(|| syntax(1, 1, format!("`{term}` is not a matrix unit of {}", ring.name())))?;
        acc = ring.add(&acc, &unit)?;
    }
    Ok(acc)
}

/// Elements separated by `;`.
pub fn parse_element_list(ring: &FiniteRing, text: &str) -> Result<Vec<Element>, CliError> {
    text.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_element(ring, t))
        .collect()
}

// ---------------------------------------------------------------------------
// command line

#[derive(Parser, Debug)]
#[command(name = "ringlab", about = "Classify finite rings and build units constructively", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a ring file.
    Validate { file: PathBuf },
    /// Classify a ring file, or an infinite construction: `sum:KEY`,
    /// `finite-rank:KEY` (KEY a corpus ring) or `functions`.
    Classify {
        target: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Probe bound for infinite constructions.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Print the addition or multiplication table.
    Table {
        file: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
    },
    /// List all idempotents.
    Idempotents { file: PathBuf },
    /// Run a unit-building algorithm.
    Witness {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Elements separated by `;`, e.g. "(1,0);(0,1)".
        #[arg(long, default_value = "")]
        elements: String,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        /// Print the full trace as JSON.
        #[arg(long)]
        trace: bool,
    },
    /// Build an example ring and print (or write) its ring file.
    Construct {
        /// zero, cyclic, field, b_l, b_r, twisted, m2, or a corpus key.
        name: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Guided tours.
    Demo {
        #[arg(value_enum)]
        topic: DemoTopic,
        #[arg(long)]
        bound: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Op {
    Add,
    Mul,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Join,
    CommonUnit,
    RegularUnit,
    Promote,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoTopic {
    Hierarchy,
}

/// Runs the command line (without the program name) and returns the exit
/// code with everything that would be printed.
pub fn run<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("ringlab")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli.command) {
        Ok((code, out)) => (code, out),
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}

fn resolve_bound(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("RINGLAB_BOUND") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("RINGLAB_BOUND={v} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BOUND),
    }
}

fn read_ring(path: &PathBuf) -> Result<FiniteRing, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_ring_file(&text)
}

fn describe(ring: &FiniteRing) -> String {
    let factors: Vec<String> = ring.orders().iter().map(|n| format!("Z{n}")).collect();
    let group = if factors.is_empty() { "0".to_string() } else { factors.join(" x ") };
    format!("{}: {} elements, additive group {group}", ring.name(), ring.size())
}

fn dispatch(command: Command) -> Result<(i32, String), CliError> {
    match command {
        Command::Validate { file } => {
            let ring = read_ring(&file)?;
            Ok((0, format!("ok {}\n", describe(&ring))))
        }
        Command::Classify { target, format, bound } => classify_target(&target, format, resolve_bound(bound)?),
        Command::Table { file, op } => {
            let ring = read_ring(&file)?;
            cayley_table(&ring, op).map(|t| (0, t))
        }
        Command::Idempotents { file } => {
            let ring = read_ring(&file)?;
            let mut out = String::new();
            for e in ring.idempotents() {
                let _ = writeln!(out, "{}", ring.render(&e));
            }
            Ok((0, out))
        }
        Command::Witness { file, kind, elements, side, trace } => {
            let ring = read_ring(&file)?;
            let elements = parse_element_list(&ring, &elements)?;
            witness(&ring, kind, &elements, side, trace).map(|o| (0, o))
        }
        Command::Construct { name, p, out } => {
            let ring = construct(&name, p)?;
            let text = export_ring_file(&ring);
            match out {
                Some(path) => {
                    std::fs::write(&path, &text)
                        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                    Ok((0, format!("wrote {} to {}\n", ring.name(), path.display())))
                }
                None => Ok((0, text)),
            }
        }
        Command::Demo { topic: DemoTopic::Hierarchy, bound } => {
            let (ok, out) = demo_hierarchy(resolve_bound(bound)?);
            Ok((if ok { 0 } else { 1 }, out))
        }
    }
}

/// A named construction; `p` defaults to 2.
pub fn construct(name: &str, p: Option<u64>) -> Result<FiniteRing, CliError> {
    let q = p.unwrap_or(2);
    let ring = match name {
        "zero" => zero_ring(&[q])?,
        "cyclic" => cyclic_ring(q)?,
        "field" => prime_field(q)?,
        "b_l" => b_l(q)?,
        "b_r" => b_r(q)?,
        "twisted" => twisted_semigroup_ring(q)?,
        "m2" => matrix_ring(&prime_field(q)?, 2)?,
        key => {
            if p.is_some() {
                return Err(CliError::Usage(format!("--p does not apply to corpus ring `{key}`")));
            }
            corpus_ring(key)?
        }
    };
    Ok(ring)
}

fn corpus_ring(key: &str) -> Result<FiniteRing, CliError> {
    let corpus = finite_corpus();
    let keys: Vec<&str> = corpus.iter().map(|e| e.key).collect();
    let known = keys.join(", ");
    corpus
        .into_iter()
        .find(|e| e.key == key)
        .map(|e| e.ring)
        .ok_or_else(|| CliError::Usage(format!("unknown ring `{key}`; corpus keys: {known}")))
}

fn cayley_table(ring: &FiniteRing, op: Op) -> Result<String, CliError> {
    if ring.size() > TABLE_LIMIT {
        return Err(CliError::Usage(format!(
            "{} has {} elements; tables are printed up to {TABLE_LIMIT}",
            ring.name(),
            ring.size()
        )));
    }
    let elements: Vec<Element> = ring.elements().collect();
    let labels: Vec<String> = elements.iter().map(|e| ring.render(e)).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(1);
    let symbol = match op {
        Op::Add => "+",
        Op::Mul => "*",
    };
    let mut out = format!("{symbol:>width$} |");
    for l in &labels {
        let _ = write!(out, " {l:>width$}");
    }
    out.push('\n');
    out.push_str(&"-".repeat(out.trim_end().chars().count()));
    out.push('\n');
    for (a, la) in elements.iter().zip(&labels) {
        let _ = write!(out, "{la:>width$} |");
        for b in &elements {
            let c = match op {
                Op::Add => ring.add_raw(a, b),
                Op::Mul => ring.mul_raw(a, b),
            };
            let _ = write!(out, " {:>width$}", ring.render(&c));
        }
        out.push('\n');
    }
    Ok(out)
}

fn witness(ring: &FiniteRing, kind: Kind, elements: &[Element], side: SideArg, trace: bool) -> Result<String, CliError> {
    let one_sided = |side: SideArg| match side {
        SideArg::Left => Ok(Side::Left),
        SideArg::Right => Ok(Side::Right),
        SideArg::Both => Err(CliError::Usage("this witness takes --side left or --side right".into())),
    };
    let pretty = |v: serde_json::Value| serde_json::to_string_pretty(&v).expect("json values serialize") + "\n";
    match kind {
        Kind::Join => {
            let [first, second] = elements else {
                return Err(CliError::Usage("join takes exactly two elements: e';e''".into()));
            };
            let report = witnesses::join_analysis(ring, first, second)?;
            if trace {
                return Ok(pretty(report.to_json(ring)));
            }
            let marks: Vec<String> = ["i", "ii", "iii", "iv", "v"]
                .iter()
                .zip(report.conditions)
                .map(|(n, c)| format!("({n}) {}", if c { "holds" } else { "fails" }))
                .collect();
            Ok(format!(
                "e = {}\ne^2 = {}\nidempotent: {}\nexpansion identity: {}\nconditions: {}\n",
                ring.render(&report.join),
                ring.render(&report.square),
                if report.square_defect.is_zero() { "yes" } else { "no" },
                if report.expansion_holds { "holds" } else { "fails" },
                marks.join(", ")
            ))
        }
        Kind::CommonUnit => {
            let mut left = |m: &Element| ring.search_unit(std::slice::from_ref(m), Sides::Left, false);
            let mut right = |m: &Element| ring.search_unit(std::slice::from_ref(m), Sides::Right, false);
            let (unit, json) = match side {
                SideArg::Both => {
                    let t = witnesses::common_two_sided_unit(ring, elements, &mut left, &mut right)?;
                    let json = json!({
                        "left": t.left.to_json(ring),
                        "right": t.right.to_json(ring),
                        "unit": ring.render(&t.unit),
                    });
                    (t.unit, json)
                }
                SideArg::Left => {
                    let t = witnesses::common_one_sided_unit(ring, elements, Side::Left, &mut left)?;
                    (t.unit.clone(), t.to_json(ring))
                }
                SideArg::Right => {
                    let t = witnesses::common_one_sided_unit(ring, elements, Side::Right, &mut right)?;
                    (t.unit.clone(), t.to_json(ring))
                }
            };
            Ok(if trace { pretty(json) } else { format!("e = {}\n", ring.render(&unit)) })
        }
        Kind::RegularUnit => {
            let side = one_sided(side)?;
            let mut qi = |r: &Element| ring.search_quasi_inverse(r);
            let t = witnesses::regular_local_unit(ring, side, elements, &mut qi)?;
            Ok(if trace { pretty(t.to_json(ring)) } else { format!("e = {}\n", ring.render(&t.unit)) })
        }
        Kind::Promote => {
            let side = one_sided(side)?;
            let e = witnesses::promote_to_identity(ring, side)?;
            Ok(format!("identity = {}\n", ring.render(&e)))
        }
    }
}

fn render_evidence<E>(e: &Evidence<E>, render: &dyn Fn(&E) -> String) -> Option<String> {
    const SHOWN: usize = 8;
    let list = |xs: Vec<String>| {
        let more = xs.len().saturating_sub(SHOWN);
        let mut s = xs.into_iter().take(SHOWN).collect::<Vec<_>>().join(", ");
        if more > 0 {
            let _ = write!(s, ", ... ({more} more)");
        }
        s
    };
    match e {
        Evidence::None => None,
        Evidence::Element(x) => Some(render(x)),
        Evidence::Elements(xs) => Some(list(xs.iter().map(render).collect())),
        Evidence::Pairs(ps) => Some(list(ps.iter().map(|(a, b)| format!("{} by {}", render(a), render(b))).collect())),
        Evidence::Note(n) => Some(n.clone()),
    }
}

fn classification_text<E>(c: &Classification<E>, render: &dyn Fn(&E) -> String) -> String {
    let mut out = match c.size {
        Some(n) => format!("ring {} ({n} elements)\n", c.ring),
        None => format!("ring {} (infinite)\n", c.ring),
    };
    for (class, v) in c.iter() {
        let detail = match v {
            Verdict::Yes(w) => render_evidence(w, render).map(|s| format!("witness: {s}")),
            Verdict::No { counterexample, bound } => {
                let s = render_evidence(counterexample, render).unwrap_or_default();
                Some(match bound {
                    Some(n) => format!("refuted up to {n}; probe: {s}"),
                    None => format!("counterexample: {s}"),
                })
            }
            Verdict::Unknown(reason) => Some(reason.clone()),
        };
        let _ = writeln!(out, "  {:<24} {:<8} {}", class.key(), v.label(), detail.unwrap_or_default());
    }
    out
}

fn emit<E>(c: &Classification<E>, format: Format, render: &dyn Fn(&E) -> String) -> Result<(i32, String), CliError> {
    if let Err(e) = c.check_hierarchy() {
        return Err(CliError::Usage(format!("classification of {} breaks the hierarchy: {e}", c.ring)));
    }
    match format {
        Format::Text => Ok((0, classification_text(c, render))),
        Format::Json => {
            let record = c.to_record(render);
            record.validate().map_err(CliError::Usage)?;
            Ok((0, serde_json::to_string_pretty(&record).expect("records serialize") + "\n"))
        }
    }
}

fn classify_target(target: &str, format: Format, bound: usize) -> Result<(i32, String), CliError> {
    if let Some(key) = target.strip_prefix("sum:") {
        let sum = SupportedDirectSum::new(corpus_ring(key)?);
        return emit(&classify_supported_sum(&sum, bound), format, &|x| sum.render(x));
    }
    if let Some(key) = target.strip_prefix("finite-rank:") {
        let m = FiniteRankMatrices::new(corpus_ring(key)?)?;
        return emit(&classify_finite_rank(&m, bound), format, &|x| m.render(x));
    }
    if target == "functions" {
        let f = CompactSupportFunctions;
        return emit(&classify_functions(&f, bound), format, &|x| one_line(&f.render(x)));
    }
    let ring = read_ring(&PathBuf::from(target))?;
    emit(&classify_finite(&ring), format, &|x| ring.render(x))
}

fn one_line(s: &str) -> String {
    s.lines().map(str::trim).collect::<Vec<_>>().join("; ")
}

// ---------------------------------------------------------------------------
// the hierarchy tour

struct Tour {
    out: String,
    ok: bool,
}

impl Tour {
    fn stage(&mut self, n: usize, title: &str) {
        let _ = writeln!(self.out, "\n== stage {n}: {title} ==");
    }

    fn check(&mut self, claim: &str, holds: bool) {
        self.ok &= holds;
        let _ = writeln!(self.out, "  [{}] {claim}", if holds { "ok" } else { "FAILED" });
    }

    fn line(&mut self, text: &str) {
        let _ = writeln!(self.out, "  {text}");
    }

    fn verdicts<E>(&mut self, c: &Classification<E>, classes: &[RingClass]) {
        let parts: Vec<String> = classes
            .iter()
            .map(|&class| {
                let v = c.get(class);
                match v.bound() {
                    Some(n) => format!("{}=no(up to {n})", class.key()),
                    None => format!("{}={}", class.key(), v.label()),
                }
            })
            .collect();
        self.line(&parts.join(" "));
        let holds = c.check_hierarchy().is_ok();
        self.check("verdicts respect the inclusion chain", holds);
    }
}

/// Walks the strict inclusions
/// `unital ⊊ enough idempotents ⊊ local unit sets ⊊ locally unital ⊊ s-unital ⊊ idempotent ⊊ rings`
/// through six example rings, checking every claim it prints. Returns whether
/// all checks passed.
pub fn demo_hierarchy(bound: usize) -> (bool, String) {
    let mut t = Tour { out: format!("hierarchy tour (probe bound N = {bound})\n"), ok: true };
    use RingClass::*;

    // 1. zero multiplication
    t.stage(1, "zero ring on Z2: not idempotent");
    let z = zero_ring(&[2]).expect("zero ring");
    let c = classify_finite(&z);
    t.verdicts(&c, &[IdempotentRing, SUnital, Regular]);
    t.check(
        "R^2 = {0} != R, counterexample 1",
        c.get(IdempotentRing) == &Verdict::no(Evidence::Element(Element::from_coords(vec![1]))),
    );

    // 2. twisted semigroup ring
    t.stage(2, "twisted semigroup ring over F2: idempotent, not s-unital");
    let tw = twisted_semigroup_ring(2).expect("twisted ring");
    let c = classify_finite(&tw);
    t.verdicts(&c, &[IdempotentRing, LeftSUnital, RightSUnital, SUnital]);
    let g = Element::from_coords(vec![0, 0, 1, 1]);
    let lacks_unit = |side: Sides| tw.elements().all(|e| !tw.fixes(&e, side, &g));
    t.check("R^2 = R", c.get(IdempotentRing).is_yes());
    t.check(
        "g = (0,0,1,1) has no left unit and no right unit (all 16 candidates checked)",
        lacks_unit(Sides::Left) && lacks_unit(Sides::Right),
    );

    // 3. supported direct sums
    t.stage(3, "supported direct sums C = sum B_l(F2), D = sum B_r(F2), I = sum F2");
    let cs = SupportedDirectSum::new(b_l(2).expect("B_l"));
    let ds = SupportedDirectSum::new(b_r(2).expect("B_r"));
    let cc = classify_supported_sum(&cs, bound);
    let dc = classify_supported_sum(&ds, bound);
    t.line("C:");
    t.verdicts(&cc, &[LeftSUnital, RightSUnital, LeftUnital]);
    t.line("D:");
    t.verdicts(&dc, &[LeftSUnital, RightSUnital, RightUnital]);
    let m = crate::constructions::SupportedElement::new([
        (0, Element::from_coords(vec![0, 1])),
        (3, Element::from_coords(vec![1, 1])),
    ]);
    let unit = cs.s_unit_for(std::slice::from_ref(&m), Side::Left);
    t.check(
        &format!(
            "left unit for {} in C: {}",
            cs.render(&m),
            unit.as_ref().map_or("none".into(), |u| cs.render(u))
        ),
        unit.is_some_and(|u| cs.mul(&u, &m) == m),
    );
    t.check(
        &format!("C left s-unital but not left unital (no left identity supported within {bound})"),
        cc.get(LeftSUnital).is_yes() && cc.get(LeftUnital).bound() == Some(bound),
    );
    t.check("C not right s-unital (component B_l is not)", cc.get(RightSUnital).is_no());
    t.check(
        &format!("D right s-unital, not right unital up to {bound}, not left s-unital"),
        dc.get(RightSUnital).is_yes() && dc.get(RightUnital).bound() == Some(bound) && dc.get(LeftSUnital).is_no(),
    );
    let is = SupportedDirectSum::new(prime_field(2).expect("F2"));
    let ic = classify_supported_sum(&is, bound);
    t.line("I:");
    t.verdicts(&ic, &[HasLocalUnitSet, HasEnoughIdempotents, Unital]);
    t.check(
        "I has a set of local units (finitely supported 0/1 functions) but no identity within the bound",
        ic.get(HasLocalUnitSet).is_yes() && ic.get(Unital).is_no(),
    );

    // 4. compactly supported functions
    t.stage(4, "compactly supported piecewise polynomials: s-unital, not locally unital");
    let fr = CompactSupportFunctions;
    let fc = classify_functions(&fr, bound);
    t.verdicts(&fc, &[SUnital, LocallyUnital, Unital]);
    let samples: Vec<PiecewisePolynomial> = [(0, 1), (-3, 2), (5, 7)]
        .iter()
        .map(|&(a, b)| bump(&rat(a), &rat(b)).expect("a < b"))
        .collect();
    let tent = fr.mul(&samples[0], &samples[1]);
    let mut family = samples.clone();
    family.push(tent);
    let e = fr.s_unit_for(&family, Side::Left);
    t.check(
        "bump unit fixes a sample family exactly on both sides",
        e.is_some_and(|e| family.iter().all(|f| fr.fixes(&e, Sides::Both, f))),
    );
    let grid: Vec<PiecewisePolynomial> = (-4..4)
        .flat_map(|a| (a + 1..=4).map(move |b| (a, b)))
        .flat_map(|(a, b)| {
            [ratio(1, 2), rat(1), rat(2)]
                .into_iter()
                .map(move |c| bump(&rat(a), &rat(b)).expect("a < b").scale(&c))
        })
        .collect();
    t.check(
        &format!("none of {} sampled nonzero functions is idempotent", grid.len()),
        grid.iter().all(|f| !fr.is_zero(f) && !fr.is_idempotent(f)),
    );

    // 5. finite-rank matrices
    t.stage(5, "finitely supported matrices over F2: local units, enough idempotents, not unital");
    let mf = FiniteRankMatrices::new(prime_field(2).expect("F2")).expect("F2 is unital");
    let mc = classify_finite_rank(&mf, bound);
    t.verdicts(&mc, &[HasLocalUnitSet, HasEnoughIdempotents, Regular, Unital]);
    let inputs = vec![mf.unit(0, 1), mf.add(&mf.unit(1, 2), &mf.unit(2, 1))];
    let mut qi = |r: &crate::constructions::FiniteMatrix| mf.quasi_inverse(r);
    match witnesses::regular_local_unit(&mf, Side::Left, &inputs, &mut qi) {
        Ok(tr) => t.check(
            &format!("regular local unit for E01, E12+E21: {}", mf.render(&tr.unit)),
            mf.is_idempotent(&tr.unit) && inputs.iter().all(|r| mf.mul(&tr.unit, r) == *r),
        ),
        Err(e) => t.check(&format!("regular local unit: {e}"), false),
    }
    let diag: Vec<_> = (0..=bound).map(|i| mf.unit(i, i)).collect();
    let probes: Vec<_> = (0..=bound)
        .flat_map(|i| (0..=bound).map(move |j| (i, j)))
        .map(|(i, j)| mf.unit(i, j))
        .collect();
    t.check(
        &format!("{{E_ii : i <= {bound}}} is orthogonal and decomposes every E_ij with i, j <= {bound}"),
        verify_complete_idempotents(&mf, &diag, &probes) == Ok(true),
    );
    t.check(
        &format!("no identity supported on indices <= {bound}"),
        mc.get(Unital).bound() == Some(bound),
    );

    // 6. unital
    t.stage(6, "M2(F2): unital");
    let m2 = matrix_ring(&prime_field(2).expect("F2"), 2).expect("M2(F2)");
    let c = classify_finite(&m2);
    t.verdicts(&c, &[Unital, HasEnoughIdempotents, Regular]);
    t.check(
        "identity E00+E11",
        m2.identity().map(|e| m2.render(&e)).as_deref() == Some("E00+E11"),
    );
    let e1 = m2.matrix_unit(0, 0).expect("E00");
    let e2 = m2.add_raw(&m2.matrix_unit(0, 1).expect("E01"), &m2.matrix_unit(1, 1).expect("E11"));
    match witnesses::join_analysis(&m2, &e1, &e2) {
        Ok(j) => t.check(
            &format!(
                "join of idempotents E00 and E01+E11 is {} with square {}: not idempotent",
                m2.render(&j.join),
                m2.render(&j.square)
            ),
            !j.square_defect.is_zero() && j.expansion_holds,
        ),
        Err(e) => t.check(&format!("join: {e}"), false),
    }

    let _ = writeln!(t.out, "\n== strict inclusions ==");
    let rows = [
        ("idempotent ⊊ rings", "witnessed", "stage 1: zero ring".to_string()),
        ("s-unital ⊊ idempotent", "witnessed", "stage 2: twisted ring".to_string()),
        ("s-unital ⊊ left s-unital", "witnessed", "stage 3: C (D for the right side)".to_string()),
        (
            "left unital ⊊ left s-unital",
            "bounded",
            format!("stage 3: C, probe refutation up to {bound}"),
        ),
        ("locally unital ⊊ s-unital", "witnessed", "stage 4: compactly supported functions".to_string()),
        (
            "local unit sets ⊊ locally unital",
            "documented",
            "regular rings without sets of local units exist; not constructed (non-constructive)".to_string(),
        ),
        (
            "enough idempotents ⊊ local unit sets",
            "documented",
            "a maximal ideal M containing all finitely supported 0/1 functions on N (needs Zorn's lemma; non-constructive)"
                .to_string(),
        ),
        (
            "unital ⊊ enough idempotents",
            "bounded",
            format!("stage 5: finitely supported matrices, probe refutation up to {bound}"),
        ),
        ("unital", "witnessed", "stage 6: M2(F2)".to_string()),
    ];
    for (inclusion, status, how) in rows {
        let _ = writeln!(t.out, "  {inclusion:<38} {status:<11} {how}");
    }
    let _ = writeln!(t.out, "\n{}", if t.ok { "all checks passed" } else { "SOME CHECKS FAILED" });
    (t.ok, t.out)
}
