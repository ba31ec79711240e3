//! Command-line front end: `merge`, `validate`, `stats` and `catalog`.
//!
//! Artifacts go to files or standard output, diagnostics to standard error.
//! Exit status: 0 success, 1 I/O failure, 2 invalid input, validation failure
//! or merge conflict.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytics::{export_group_csv, export_stats_csv, render_text, usage_report};
use crate::catalog::OperationCatalog;
use crate::merge::{merge_all, merge_chain, MergeError, MergeOptions, VariantSet, DEFAULT_ROOT_ID};
use crate::model::MetamodelVersion;
use crate::xml;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "procline", version, about = "Derive process variants and report operation usage")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Merge a variant's extension chain onto the reference model.
    Merge(MergeArgs),
    /// Check a reference model and its extensions without writing anything.
    Validate(InputArgs),
    /// Report defined and used operation types over a variant family.
    Stats(StatsArgs),
    /// List the operation types of a catalog.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Reference process model.
    #[arg(long, value_name = "PATH")]
    pub root: PathBuf,
    /// Extension models, any order.
    #[arg(long = "ext", value_name = "PATH", num_args = 1.., required = true)]
    pub extensions: Vec<PathBuf>,
    /// Operation catalog; the built-in catalog when absent.
    #[arg(long, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Parent id under which extensions refer to the reference model.
    #[arg(long, default_value = DEFAULT_ROOT_ID)]
    pub root_id: String,
    /// Let a later text replacement of the same field win, with a warning.
    #[arg(long)]
    pub last_wins: bool,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Variant to derive.
    #[arg(long, value_name = "ID")]
    pub leaf: String,
    /// Merged model; standard output when absent.
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Merge trace; text when the path ends in `.txt`, XML otherwise.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Grain {
    /// One row per variant and operation group.
    Group,
    /// One row per variant and operation type.
    Type,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Row grain of the CSV export.
    #[arg(long, value_enum, default_value_t = Grain::Group)]
    pub by: Grain,
    /// Report file; standard output when absent.
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Operation catalog; the built-in catalog when absent.
    #[arg(long, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Only types defined by this metamodel version.
    #[arg(long, value_parser = parse_metamodel)]
    pub metamodel: Option<MetamodelVersion>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn parse_metamodel(s: &str) -> Result<MetamodelVersion, String> {
    s.parse().map_err(|_| {
        let known: Vec<&str> = MetamodelVersion::ALL.iter().map(|m| m.as_str()).collect();
        format!("unknown metamodel `{s}` (expected one of {})", known.join(", "))
    })
}

/// A failed command: what to print and which status to exit with.
#[derive(Debug)]
struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl Failure {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure { code: EXIT_IO, lines: vec![format!("error: {}: {err}", path.display())] }
    }

    fn invalid(lines: Vec<String>) -> Self {
        Failure { code: EXIT_INVALID, lines }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

fn load_catalog(path: Option<&Path>) -> Result<OperationCatalog, Failure> {
    match path {
        None => Ok(OperationCatalog::builtin()),
        Some(p) => {
            xml::parse_catalog(&read(p)?).map_err(|e| Failure::invalid(vec![format!("error: {}: {e}", p.display())]))
        }
    }
}

fn load_set(input: &InputArgs) -> Result<VariantSet, Failure> {
    let root = xml::parse_model(&read(&input.root)?)
        .map_err(|e| Failure::invalid(vec![format!("error: {}: {e}", input.root.display())]))?;
    let mut set = VariantSet::with_root_id(input.root_id.clone(), root);
    for path in &input.extensions {
        let ext = xml::parse_extension(&read(path)?)
            .map_err(|e| Failure::invalid(vec![format!("error: {}: {e}", path.display())]))?;
        set.insert(ext).map_err(|e| Failure::invalid(vec![format!("error: {}: {e}", path.display())]))?;
    }
    Ok(set)
}

fn describe(err: &MergeError) -> Vec<String> {
    let mut lines = vec![format!("error: {err}")];
    if let MergeError::ValidationFailed { variant_id, issues } = err {
        lines.extend(issues.iter().map(|i| format!("{variant_id}: {i}")));
    }
    lines
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, bytes),
        None => out.write_all(bytes).map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn cmd_merge(args: &MergeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let catalog = load_catalog(args.input.catalog.as_deref())?;
    let set = load_set(&args.input)?;
    let options = MergeOptions { last_wins: args.input.last_wins };
    let (model, trace) =
        merge_chain(&set, &args.leaf, &catalog, options).map_err(|e| Failure::invalid(describe(&e)))?;
    emit(out, args.output.as_deref(), &xml::serialize_model(&model))?;
    if let Some(path) = &args.trace {
        let bytes = if path.extension().is_some_and(|e| e == "txt") {
            trace.to_string().into_bytes()
        } else {
            xml::serialize_trace(&trace)
        };
        write_file(path, &bytes)?;
    }
    for entry in trace.review_items() {
        let _ = writeln!(err, "review: [{}] {}", entry.variant, entry.event);
    }
    let _ = writeln!(
        err,
        "merged {} ({} elements, {} references, {} trace entries)",
        args.leaf,
        model.element_count(),
        model.reference_count(),
        trace.len()
    );
    Ok(())
}

fn cmd_validate(args: &InputArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let catalog = load_catalog(args.catalog.as_deref())?;
    let set = load_set(args)?;
    let mut lines = Vec::new();
    let mut count = 0;
    for issue in set.root().check_consistency() {
        lines.push(format!("{}: {issue}", set.root_id()));
        count += 1;
    }
    if count == 0 {
        let options = MergeOptions { last_wins: args.last_wins };
        let results = merge_all(&set, &catalog, options);
        for id in set.variant_ids() {
            match &results[id] {
                Ok(_) => {}
                // reported once, under the variant that caused it
                Err(MergeError::ValidationFailed { variant_id, .. } | MergeError::Conflict { variant_id, .. })
                    if variant_id != id => {}
                Err(MergeError::ValidationFailed { issues, .. }) => {
                    lines.extend(issues.iter().map(|i| format!("{id}: {i}")));
                    count += issues.len();
                }
                Err(e) => {
                    lines.push(format!("{id}: {e}"));
                    count += 1;
                }
            }
        }
    }
    for line in &lines {
        let _ = writeln!(err, "{line}");
    }
    let _ = writeln!(out, "{count} issue{}", if count == 1 { "" } else { "s" });
    if count == 0 {
        Ok(())
    } else {
        Err(Failure { code: EXIT_INVALID, lines: Vec::new() })
    }
}

fn cmd_stats(args: &StatsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let catalog = load_catalog(args.input.catalog.as_deref())?;
    let set = load_set(&args.input)?;
    let report = usage_report(&catalog, &set);
    let bytes = match (args.format, args.by) {
        (Format::Text, _) => render_text(&report).into_bytes(),
        (Format::Csv, Grain::Group) => export_group_csv(&report),
        (Format::Csv, Grain::Type) => export_stats_csv(&report),
    };
    emit(out, args.output.as_deref(), &bytes)
}

fn cmd_catalog(args: &CatalogArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let catalog = load_catalog(args.catalog.as_deref())?;
    let defs: Vec<_> = catalog.iter().filter(|d| args.metamodel.is_none_or(|m| d.metamodel == m)).collect();
    let bytes = match args.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .quote_style(csv::QuoteStyle::Always)
                .terminator(csv::Terminator::CRLF)
                .from_writer(Vec::new());
            let io = |e: csv::Error| Failure::io(Path::new("<csv>"), e.into());
            w.write_record(["name", "group", "targetKind", "metamodel", "synthetic"]).map_err(io)?;
            for d in &defs {
                w.write_record([
                    d.name.as_str(),
                    d.group.as_str(),
                    &d.target_kind.to_string(),
                    d.metamodel.as_str(),
                    if d.synthetic { "true" } else { "false" },
                ])
                .map_err(io)?;
            }
            w.into_inner().map_err(|e| Failure::io(Path::new("<csv>"), e.into_error()))?
        }
        Format::Text => {
            let name_w = defs.iter().map(|d| d.name.len()).max().unwrap_or(4).max(4);
            let group_w = defs.iter().map(|d| d.group.as_str().len()).max().unwrap_or(5).max(5);
            let target_w = defs.iter().map(|d| d.target_kind.to_string().len()).max().unwrap_or(6).max(6);
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<name_w$}  {:<group_w$}  {:<target_w$}  {:<9}  synthetic",
                "name", "group", "target", "metamodel"
            );
            for d in &defs {
                let _ = writeln!(
                    s,
                    "{:<name_w$}  {:<group_w$}  {:<target_w$}  {:<9}  {}",
                    d.name,
                    d.group.as_str(),
                    d.target_kind.to_string(),
                    d.metamodel.as_str(),
                    if d.synthetic { "yes" } else { "no" }
                );
            }
            s.into_bytes()
        }
    };
    emit(out, None, &bytes)?;
    let per_mm = catalog.count_by_metamodel();
    let summary: Vec<String> =
        MetamodelVersion::ALL.iter().map(|m| format!("{m}: {}", per_mm.get(m).copied().unwrap_or(0))).collect();
    let _ = writeln!(err, "{} of {} types listed ({})", defs.len(), catalog.len(), summary.join(", "));
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Merge(a) => cmd_merge(a, out, err),
        Command::Validate(a) => cmd_validate(a, out, err),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Catalog(a) => cmd_catalog(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            for line in &failure.lines {
                let _ = writeln!(err, "{line}");
            }
            failure.code
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}
