//! Command-line interface. [`run`] parses arguments, writes to the given streams
//! and returns the process exit code: 0 success, 1 internal invariant
//! violation (or a failed verification), 2 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::conditions::{full_report, B2Verdict, Catalog, ConditionReport, Verdict, Witness};
use crate::coverdata::{parse_data, DatumError, PrymDatum};
use crate::abgroup::label_from_factors;
use crate::forms::{FormsError, DEFAULT_TRIALS};
use crate::search::{run_search_with, SearchError, SearchSpec};
use crate::table::{compare, json_rows, read_import, split_scope, to_csv_string, to_json_string, Comparison, TableRow};
use crate::verify::{run_examples, worked_examples};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const FLAG_NOTE: &str =
    "flags: Y established, Y* (B1) through a single self-paired summand of dimension 1, - not established";

#[derive(Parser)]
#[command(name = "abelian-prym", version, about = "Prym data of abelian covers of the projective line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Genera, eigenspaces and conditions for every datum in a file
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV of special quotient families accepted for (B2)
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Replay the worked examples
    Verify {
        #[arg(long)]
        json: bool,
        /// Corrupt one expected value of example K (1-based) to exercise the harness
        #[arg(long, hide = true, value_name = "K")]
        perturb: Option<usize>,
    },
    /// Enumerate data and classify them
    Search {
        specfile: PathBuf,
        /// Write CSV here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write rows with data and full reports as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Classification table, optionally compared with imported rows
    Table {
        specfile: PathBuf,
        /// CSV rows to match against the computed table
        #[arg(long = "import")]
        import: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

/// An error carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        message: message.into(),
    }
}

impl From<DatumError> for Failure {
    fn from(e: DatumError) -> Self {
        match e {
            DatumError::InconsistentGenus { .. } | DatumError::NonIntegralGenus(_) => internal(e.to_string()),
            _ => input(e.to_string()),
        }
    }
}

impl From<FormsError> for Failure {
    fn from(e: FormsError) -> Self {
        internal(e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Datum(d) => d.into(),
            SearchError::Forms(f) => f.into(),
            other => input(other.to_string()),
        }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(cli, out, err)));
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(f)) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
        Err(_) => {
            let _ = writeln!(err, "error: internal invariant violated");
            EXIT_INTERNAL
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Analyze {
            file,
            json,
            trials,
            seed,
            catalog,
        } => {
            let catalog = load_catalog(catalog.as_deref())?;
            cmd_analyze(&file, json, trials, seed, catalog.as_ref(), out)
        }
        Command::Verify { json, perturb } => cmd_verify(json, perturb, out),
        Command::Search {
            specfile,
            out: csv_path,
            json,
            trials,
            seed,
            threads,
            catalog,
        } => {
            let mut spec = load_spec(&specfile)?;
            if let Some(t) = trials {
                if t == 0 {
                    return Err(input("--trials must be at least 1"));
                }
                spec.trials = t;
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            if threads.is_some() {
                spec.threads = threads;
            }
            let catalog = load_catalog(catalog.as_deref())?;
            let rows = run_search_with(&spec, catalog.as_ref())?;
            let table: Vec<TableRow> = rows.iter().map(TableRow::from_search_row).collect();
            emit(csv_path.as_deref(), &to_csv_string(&table), out)?;
            if let Some(path) = json {
                write_file(&path, &to_json_string(&json_rows(&rows)))?;
            }
            let _ = writeln!(err, "{} rows; {FLAG_NOTE}", table.len());
            Ok(EXIT_OK)
        }
        Command::Table {
            specfile,
            import,
            out: csv_path,
            json,
            threads,
            catalog,
        } => {
            let mut spec = load_spec(&specfile)?;
            if threads.is_some() {
                spec.threads = threads;
            }
            let catalog = load_catalog(catalog.as_deref())?;
            let rows = run_search_with(&spec, catalog.as_ref())?;
            let table: Vec<TableRow> = rows.iter().map(TableRow::from_search_row).collect();
            let csv = to_csv_string(&table);
            match import {
                None => {
                    emit(csv_path.as_deref(), &csv, out)?;
                    if let Some(path) = json {
                        write_file(&path, &to_json_string(&json_rows(&rows)))?;
                    }
                }
                Some(path) => {
                    if let Some(p) = csv_path {
                        write_file(&p, &csv)?;
                    }
                    let file = fs::File::open(&path)
                        .map_err(|e| input(format!("{}: {e}", path.display())))?;
                    let (imported, skipped) =
                        read_import(file).map_err(|e| input(format!("{}: {e}", path.display())))?;
                    let total = imported.len();
                    let (imported, outside) = split_scope(&spec, imported);
                    let cmp = compare(&table, &imported, skipped);
                    if let Some(p) = json {
                        let mut s = serde_json::to_string_pretty(&cmp).expect("comparison serializes");
                        s.push('\n');
                        write_file(&p, &s)?;
                    }
                    write_comparison(&cmp, total, outside.len(), out);
                }
            }
            let _ = writeln!(err, "{} rows; {FLAG_NOTE}", table.len());
            Ok(EXIT_OK)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| internal(format!("writing output: {e}"))),
    }
}

fn load_spec(path: &Path) -> Result<SearchSpec, Failure> {
    SearchSpec::parse(&read_text(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_catalog(path: Option<&Path>) -> Result<Option<Catalog>, Failure> {
    path.map(|p| Catalog::from_path(p).map_err(|e| input(format!("{}: {e}", p.display()))))
        .transpose()
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenJson {
    pub character: String,
    pub dim: u64,
    pub anti_invariant: bool,
}

/// Everything `analyze` reports about one datum.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub datum: String,
    pub group: String,
    pub subgroup: String,
    pub quotient: String,
    pub g_tilde: u64,
    pub g: u64,
    pub p: u64,
    pub ram: u64,
    pub br: u64,
    pub polarization: Vec<u64>,
    pub eigenspaces: Vec<EigenJson>,
    pub report: ConditionReport,
}

pub fn analyze(
    prym: &PrymDatum,
    trials: usize,
    seed: u64,
    catalog: Option<&Catalog>,
) -> Result<Analysis, Failure> {
    let datum = prym.datum();
    let g = prym.genus_quotient()?;
    let rb = prym.ram_branch_counts();
    Ok(Analysis {
        datum: prym.to_string(),
        group: datum.group().label(),
        subgroup: prym.subgroup().label(),
        quotient: label_from_factors(&datum.group().quotient_factors(prym.subgroup())),
        g_tilde: datum.genus_total(),
        g,
        p: datum.genus_total() - g,
        ram: rb.ramification_points,
        br: rb.branch_points,
        polarization: prym.polarization_type()?,
        eigenspaces: prym
            .eigenspace_table()
            .entries()
            .iter()
            .map(|e| EigenJson {
                character: e.character.to_string(),
                dim: e.dim,
                anti_invariant: e.anti_invariant,
            })
            .collect(),
        report: full_report(prym, trials, seed, catalog)?,
    })
}

fn cmd_analyze(
    file: &Path,
    json: bool,
    trials: usize,
    seed: u64,
    catalog: Option<&Catalog>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if trials == 0 {
        return Err(input("--trials must be at least 1"));
    }
    let text = read_text(file)?;
    let specs = parse_data(&text).map_err(|e| input(format!("{}: {e}", file.display())))?;
    if specs.is_empty() {
        return Err(input(format!("{}: no datum found", file.display())));
    }
    let mut analyses = Vec::new();
    for spec in &specs {
        let prym = spec.build().map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{}: datum at line {}: {}", file.display(), spec.line, f.message);
            f
        })?;
        analyses.push(analyze(&prym, trials, seed, catalog)?);
    }
    if json {
        let mut s = serde_json::to_string_pretty(&analyses).expect("analysis serializes");
        s.push('\n');
        let _ = out.write_all(s.as_bytes());
    } else {
        for (i, a) in analyses.iter().enumerate() {
            if i > 0 {
                let _ = writeln!(out);
            }
            write_analysis(a, out);
        }
    }
    Ok(EXIT_OK)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn tuple_text(t: &[i64]) -> String {
    let parts: Vec<String> = t.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Tuple(t) => format!("injective at z = {}", tuple_text(t)),
        Witness::ImpliedByB1 => "implied by (B1)".into(),
        Witness::Catalog(label) => format!("catalog family {label}"),
    }
}

fn write_analysis(a: &Analysis, out: &mut dyn Write) {
    let r = &a.report;
    let pol: Vec<String> = a.polarization.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "datum       {}", a.datum);
    let _ = writeln!(out, "groups      G~ = {}, H = {}, G = G~/H = {}", a.group, a.subgroup, a.quotient);
    let _ = writeln!(out, "genera      g~ = {}, g = {}, p = {}", a.g_tilde, a.g, a.p);
    let _ = writeln!(out, "C~ -> C     {} ramification points over {} branch points", a.ram, a.br);
    let _ = writeln!(out, "polarization ({})", pol.join(","));
    let _ = writeln!(out, "eigenspaces (* anti-invariant)");
    for e in &a.eigenspaces {
        let mark = if e.anti_invariant { "*" } else { " " };
        let _ = writeln!(out, "  {mark} {:<12} {}", e.character, e.dim);
    }
    let _ = writeln!(out, "dim P(G~)   {} (s - 3 = {})", r.dim_pg, r.s_minus_3);
    for s in r.summand_profile.iter().filter(|s| s.dim > 0) {
        let kind = if s.self_paired { "Sym^2" } else { "tensor" };
        let _ = writeln!(
            out,
            "  {kind} {} {}: dims ({}, {}) -> {}",
            s.characters.0, s.characters.1, s.dims.0, s.dims.1, s.dim
        );
    }
    let _ = writeln!(out, "(A)         {}", yes_no(r.cond_a));
    let b1 = if r.b1_self_paired {
        "yes (single self-paired summand of dimension 1)".to_string()
    } else {
        yes_no(r.cond_b1).to_string()
    };
    let _ = writeln!(out, "(B1)        {b1}");
    let b = match &r.cond_b {
        Verdict::Established { witness } => format!("established, {}", witness_text(witness)),
        Verdict::NotEstablished { reason } => format!("not established ({reason})"),
    };
    let _ = writeln!(out, "(B)         {b}");
    let b2 = match &r.cond_b2 {
        B2Verdict::Established { subgroup, witness } => format!(
            "established with K = {{{}}}, {}",
            subgroup.join(", "),
            witness_text(witness)
        ),
        B2Verdict::NotEstablished { reason } => format!("not established ({reason})"),
    };
    let _ = writeln!(out, "(B2)        {b2}");
}

#[derive(Serialize)]
struct VerifyJson {
    passed: usize,
    total: usize,
    examples: Vec<crate::verify::ExampleOutcome>,
}

fn cmd_verify(json: bool, perturb: Option<usize>, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut examples = worked_examples();
    if let Some(k) = perturb {
        let ex = examples
            .get_mut(k.wrapping_sub(1))
            .ok_or_else(|| input(format!("no worked example {k}")))?;
        ex.g_tilde += 1;
    }
    let outcomes = run_examples(&examples);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let total = outcomes.len();
    if json {
        let v = VerifyJson {
            passed,
            total,
            examples: outcomes,
        };
        let mut s = serde_json::to_string_pretty(&v).expect("verdicts serialize");
        s.push('\n');
        let _ = out.write_all(s.as_bytes());
    } else {
        for o in &outcomes {
            let tag = if o.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "[{tag}] {:<28} {}", o.name, o.datum);
            for m in &o.mismatches {
                let _ = writeln!(out, "       {m}");
            }
        }
        let _ = writeln!(out, "{passed}/{total} worked examples pass");
    }
    Ok(if passed == total { EXIT_OK } else { EXIT_INTERNAL })
}

fn row_text(r: &TableRow) -> String {
    let flag = |f| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    format!(
        "r={} g~={} g={} p={} {} / {} ram={} br={} G={} B1={} B2={} B={}",
        r.r,
        r.g_tilde,
        r.g,
        r.p,
        r.group,
        r.subgroup,
        r.ram,
        r.br,
        r.quotient,
        flag(r.b1),
        flag(r.b2),
        flag(r.b)
    )
}

fn write_comparison(cmp: &Comparison, imported: usize, outside: usize, out: &mut dyn Write) {
    let _ = writeln!(out, "imported rows       {imported}");
    let _ = writeln!(out, "outside search      {outside}");
    let _ = writeln!(out, "matched             {}", cmp.matched.len());
    let _ = writeln!(out, "weaker flags        {}", cmp.weaker_flags.len());
    let _ = writeln!(out, "unmatched imported  {}", cmp.unmatched_imported.len());
    let _ = writeln!(out, "unmatched computed  {}", cmp.unmatched_computed.len());
    let _ = writeln!(out, "skipped             {}", cmp.skipped.len());
    if !cmp.weaker_flags.is_empty() {
        let _ = writeln!(out, "\nrows whose flags are not reproduced:");
        for m in &cmp.weaker_flags {
            let _ = writeln!(out, "  line {}: {}", m.line, row_text(&m.imported));
        }
    }
    if !cmp.unmatched_imported.is_empty() {
        let _ = writeln!(out, "\nimported rows without a computed counterpart:");
        for m in &cmp.unmatched_imported {
            let _ = writeln!(out, "  line {}: {}", m.line, row_text(&m.imported));
        }
    }
    if !cmp.skipped.is_empty() {
        let _ = writeln!(out, "\nskipped:");
        for s in &cmp.skipped {
            let _ = writeln!(out, "  line {}: {}", s.line, s.reason);
        }
    }
}
