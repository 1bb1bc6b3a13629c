//! `caseflow`: checks, status reports, confirmation scores, lifecycle net
//! replay and resilience verification from the command line.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use caseflow::case::{check_wellformed, has_errors, CaseGraph, NodeId, Severity};
use caseflow::dpn::{check_net, initial_marking, parse_events, parse_net, reachable, replay};
use caseflow::resilience::{derive_requirements, emit_case, parse_catalogue, parse_records, parse_specs, verify};
use caseflow::status::StatusError;
use caseflow::{
    case_confirmation, emit_dot, parse, propagate, report, serialize, validate_blocks, CaseDocument, Status,
};

#[derive(Parser)]
#[command(name = "caseflow", version, about = "Assurance case tooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Well-formedness and block-rule diagnostics for a case.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Effective status of every claim and evidence item.
    Status {
        file: PathBuf,
        /// Also write a DOT rendering here.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Confirmation scores of the evidence recorded for one claim.
    Confirm {
        file: PathBuf,
        #[arg(long)]
        claim: String,
        #[arg(long, default_value_t = 0.9)]
        threshold: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Lifecycle net replay and reachability.
    Dpn {
        #[command(subcommand)]
        command: DpnCommand,
    },
    /// Outcome-derived requirements and their verification.
    Resilience {
        #[command(subcommand)]
        command: ResilienceCommand,
    },
}

#[derive(Subcommand)]
enum DpnCommand {
    /// Replay an event log from the net's initial marking.
    Run {
        net: PathBuf,
        #[arg(long)]
        events: PathBuf,
        /// Print one line per event.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Bounded reachable markings from the initial marking.
    Reach {
        net: PathBuf,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum ResilienceCommand {
    /// Requirements derived from an outcome catalogue for one service.
    Derive {
        #[arg(long)]
        catalogue: PathBuf,
        #[arg(long)]
        service: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Pair requirements with verification records.
    Verify {
        #[arg(long)]
        catalogue: PathBuf,
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        specs: Option<PathBuf>,
        /// Write the resulting case here.
        #[arg(long)]
        emit_case: Option<PathBuf>,
        /// Service name substituted into requirement texts.
        #[arg(long, default_value = "the service")]
        service: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Why a command stopped early. Validation failures exit 1, everything that
/// prevented the command from running exits 2.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

/// Collected stdout; written in one go so output stays whole on failure.
#[derive(Default)]
struct Out(String);

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.0.push_str(s.as_ref());
        self.0.push('\n');
    }

    fn json(&mut self, v: serde_json::Value) {
        self.line(v.to_string());
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_case(path: &Path) -> Result<CaseDocument, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|errs| {
        let lines: Vec<String> = errs.0.iter().map(|e| format!("{}:{e}", path.display())).collect();
        Failure::Input(lines.join("\n"))
    })
}

/// Like [`parse_case`] but also refuses graphs with structural errors.
fn load_case(path: &Path) -> Result<CaseDocument, Failure> {
    let doc = parse_case(path)?;
    let diags = check_wellformed(&doc.graph);
    if has_errors(&diags) {
        let lines: Vec<String> = diags
            .iter()
            .filter(|d| d.severity == Severity::Error)
            .map(|d| format!("{}: {d}", path.display()))
            .collect();
        return Err(Failure::Invalid(lines.join("\n")));
    }
    Ok(doc)
}

fn line_errors(path: &Path, errs: caseflow::lex::LineErrors) -> Failure {
    let lines: Vec<String> = errs.0.iter().map(|e| format!("{}:{e}", path.display())).collect();
    Failure::Input(lines.join("\n"))
}

fn check(file: &Path, format: Format, out: &mut Out, err: &mut Vec<String>) -> Result<(), Failure> {
    let doc = parse_case(file)?;
    let mut rows: Vec<(Severity, String, String, String)> = check_wellformed(&doc.graph)
        .into_iter()
        .map(|d| (d.severity, d.rule.id().to_string(), d.node.to_string(), d.message))
        .collect();
    rows.extend(
        validate_blocks(&doc.graph)
            .into_iter()
            .map(|d| (d.severity, d.rule.id().to_string(), d.argument.to_string(), d.message)),
    );
    let count = |s| rows.iter().filter(|r| r.0 == s).count();
    let (errors, warnings, infos) = (count(Severity::Error), count(Severity::Warning), count(Severity::Info));
    for (severity, rule, node, message) in &rows {
        match format {
            Format::Text => err.push(format!("{}: {severity}[{rule}] {node}: {message}", file.display())),
            Format::Json => out.json(json!({
                "severity": severity.to_string(), "rule": rule, "node": node, "message": message,
            })),
        }
    }
    match format {
        Format::Text => out.line(format!("errors={errors} warnings={warnings} info={infos}")),
        Format::Json => out.json(json!({"errors": errors, "warnings": warnings, "info": infos})),
    }
    if errors > 0 {
        return Err(Failure::Invalid(format!("{}: {errors} error(s)", file.display())));
    }
    Ok(())
}

fn status(file: &Path, dot: Option<&Path>, format: Format, out: &mut Out) -> Result<(), Failure> {
    let doc = load_case(file)?;
    let base = file.parent().map(Path::to_path_buf).unwrap_or_default();
    let loader = |rel: &str| -> Result<CaseGraph, String> {
        let path = base.join(rel);
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        parse(&text).map(|d| d.graph).map_err(|e| e.to_string())
    };
    let map = propagate(&doc.graph, &loader).map_err(|e| match e {
        StatusError::MissingExpansion { .. } => Failure::Input(format!("{}: {e}", file.display())),
        _ => Failure::Invalid(format!("{}: {e}", file.display())),
    })?;
    let rep = report(&map, &doc.graph);
    match format {
        Format::Text => {
            let width = rep.rows.iter().map(|r| r.id.as_str().len()).max().unwrap_or(0);
            for r in &rep.rows {
                out.line(format!(
                    "{:<width$}  {:<6}  {:<18}  {}",
                    r.id.as_str(),
                    r.status.colour(),
                    r.provenance.as_str(),
                    r.text
                ));
            }
            let counts: Vec<String> = rep.counts.iter().map(|(s, n)| format!("{}={n}", s.colour())).collect();
            out.line(counts.join(" "));
        }
        Format::Json => {
            for r in &rep.rows {
                out.json(json!({
                    "id": r.id.as_str(), "text": r.text,
                    "status": r.status.colour(), "provenance": r.provenance.as_str(),
                }));
            }
            let counts: serde_json::Map<String, serde_json::Value> =
                rep.counts.iter().map(|(s, n)| (s.colour().to_string(), json!(n))).collect();
            out.json(json!({ "counts": counts }));
        }
    }
    if let Some(path) = dot {
        write(path, &emit_dot(&doc.graph, &map))?;
    }
    Ok(())
}

fn confirm(
    file: &Path,
    claim: &str,
    threshold: f64,
    format: Format,
    out: &mut Out,
    err: &mut Vec<String>,
) -> Result<(), Failure> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Failure::Input(format!("threshold must lie in (0, 1], got {threshold}")));
    }
    let doc = load_case(file)?;
    let id = NodeId::new(claim).map_err(|_| Failure::Invalid(format!("unknown claim `{claim}`")))?;
    let result = case_confirmation(&doc.graph, &doc.probs, &id, threshold)
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    for d in &result.dangling {
        err.push(format!("{}: warning: {}", file.display(), d.message));
    }
    for r in &result.results {
        match format {
            Format::Text => out.line(format!("{} {} {:.6} {}", r.evidence, r.claim, r.value, r.grade)),
            Format::Json => out.json(json!({
                "evidence": r.evidence.as_str(), "claim": r.claim.as_str(),
                "value": r.value, "grade": r.grade.to_string(),
            })),
        }
    }
    Ok(())
}

fn load_net(path: &Path) -> Result<caseflow::dpn::Net, Failure> {
    let net = parse_net(&read(path)?).map_err(|e| line_errors(path, e))?;
    let problems = check_net(&net);
    if !problems.is_empty() {
        let lines: Vec<String> = problems.iter().map(|p| format!("{}: {p}", path.display())).collect();
        return Err(Failure::Invalid(lines.join("\n")));
    }
    Ok(net)
}

fn dpn_run(net: &Path, events: &Path, trace: bool, format: Format, out: &mut Out) -> Result<(), Failure> {
    let model = load_net(net)?;
    let log = parse_events(&read(events)?).map_err(|e| line_errors(events, e))?;
    let (marking, tr) = replay(&model, &initial_marking(&model), &log)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", events.display())))?;
    match format {
        Format::Text => {
            if trace {
                out.0.push_str(&tr.render());
            }
            for line in marking.canonical().lines() {
                out.line(format!("token {line}"));
            }
            out.line(format!("marking {}", marking.fingerprint()));
            out.line(format!("trace {}", tr.fingerprint()));
        }
        Format::Json => {
            if trace {
                for e in &tr.entries {
                    out.json(serde_json::to_value(e).expect("trace entries serialize"));
                }
            }
            let canonical = marking.canonical();
            out.json(json!({
                "tokens": canonical.lines().collect::<Vec<_>>(),
                "marking": marking.fingerprint().to_string(),
                "trace": tr.fingerprint().to_string(),
            }));
        }
    }
    Ok(())
}

fn dpn_reach(net: &Path, bound: usize, depth: usize, format: Format, out: &mut Out) -> Result<(), Failure> {
    let model = load_net(net)?;
    let result = reachable(&model, &initial_marking(&model), bound, depth).map_err(|e| Failure::Input(e.to_string()))?;
    match format {
        Format::Text => {
            for fp in &result.fingerprints {
                out.line(fp.to_string());
            }
            out.line(format!("markings={} truncated={}", result.fingerprints.len(), result.truncated));
        }
        Format::Json => {
            for fp in &result.fingerprints {
                out.json(json!({ "fingerprint": fp.to_string() }));
            }
            out.json(json!({ "markings": result.fingerprints.len(), "truncated": result.truncated }));
        }
    }
    Ok(())
}

fn derive(catalogue: &Path, service: &str, format: Format, out: &mut Out) -> Result<(), Failure> {
    let outcomes = parse_catalogue(&read(catalogue)?).map_err(|e| line_errors(catalogue, e))?;
    let reqs = derive_requirements(&outcomes, service).map_err(|e| Failure::Input(e.to_string()))?;
    for r in &reqs {
        match format {
            Format::Text => out.line(format!("{}\t{}", r.id, r.derived_text)),
            Format::Json => out.json(json!({
                "id": r.id.as_str(),
                "parent": r.parent.as_ref().map(|p| p.as_str()),
                "outcome": r.outcome_text,
                "requirement": r.derived_text,
            })),
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn resilience_verify(
    catalogue: &Path,
    records: &Path,
    specs: Option<&Path>,
    emit: Option<&Path>,
    service: &str,
    format: Format,
    out: &mut Out,
    err: &mut Vec<String>,
) -> Result<(), Failure> {
    let outcomes = parse_catalogue(&read(catalogue)?).map_err(|e| line_errors(catalogue, e))?;
    let reqs = derive_requirements(&outcomes, service).map_err(|e| Failure::Input(e.to_string()))?;
    let recs = parse_records(&read(records)?).map_err(|e| line_errors(records, e))?;
    let spec_list = match specs {
        Some(p) => Some(parse_specs(&read(p)?).map_err(|e| line_errors(p, e))?),
        None => None,
    };
    let rep = verify(&reqs, &recs, spec_list.as_deref())
        .map_err(|e| Failure::Invalid(format!("{}: {e}", records.display())))?;
    for w in &rep.warnings {
        err.push(format!("{}: warning: {}: {}", records.display(), w.requirement, w.message));
    }
    for row in &rep.rows {
        let justification = row.record.as_ref().map_or("", |r| r.justification.as_str());
        match format {
            Format::Text => out.line(format!("{}\t{}\t{}", row.requirement.id, row.status.colour(), justification)),
            Format::Json => out.json(json!({
                "id": row.requirement.id.as_str(),
                "status": row.status.colour(),
                "justification": justification,
                "specs": row.record.as_ref().map(|r| r.specs.clone()).unwrap_or_default(),
            })),
        }
    }
    let counts: Vec<(&str, usize)> = Status::ALL.iter().map(|s| (s.colour(), rep.count(*s))).collect();
    match format {
        Format::Text => {
            let parts: Vec<String> = counts.iter().map(|(c, n)| format!("{c}={n}")).collect();
            out.line(parts.join(" "));
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                counts.iter().map(|(c, n)| (c.to_string(), json!(n))).collect();
            out.json(json!({ "counts": map }));
        }
    }
    if let Some(path) = emit {
        let emitted = emit_case(&rep);
        for id in &emitted.unmapped {
            err.push(format!("{}: warning: `{id}` has no known parent; attached under the root", catalogue.display()));
        }
        let doc = CaseDocument { graph: emitted.graph, probs: Vec::new() };
        let text = serialize(&doc).map_err(|e| {
            let lines: Vec<String> = e.0.iter().map(ToString::to_string).collect();
            Failure::Invalid(format!("emitted case is malformed:\n{}", lines.join("\n")))
        })?;
        write(path, &text)?;
    }
    Ok(())
}

fn run(cli: Cli, out: &mut Out, err: &mut Vec<String>) -> Result<(), Failure> {
    match cli.command {
        Command::Check { file, format } => check(&file, format, out, err),
        Command::Status { file, dot, format } => status(&file, dot.as_deref(), format, out),
        Command::Confirm { file, claim, threshold, format } => confirm(&file, &claim, threshold, format, out, err),
        Command::Dpn { command } => match command {
            DpnCommand::Run { net, events, trace, format } => dpn_run(&net, &events, trace, format, out),
            DpnCommand::Reach { net, bound, depth, format } => dpn_reach(&net, bound, depth, format, out),
        },
        Command::Resilience { command } => match command {
            ResilienceCommand::Derive { catalogue, service, format } => derive(&catalogue, &service, format, out),
            ResilienceCommand::Verify { catalogue, records, specs, emit_case, service, format } => resilience_verify(
                &catalogue,
                &records,
                specs.as_deref(),
                emit_case.as_deref(),
                &service,
                format,
                out,
                err,
            ),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Out::default();
    let mut err = Vec::new();
    let result = run(cli, &mut out, &mut err);
    let _ = std::io::stdout().write_all(out.0.as_bytes());
    let mut stderr = std::io::stderr().lock();
    for line in &err {
        let _ = writeln!(stderr, "{line}");
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = writeln!(stderr, "error: {f}");
            ExitCode::from(f.code())
        }
    }
}
