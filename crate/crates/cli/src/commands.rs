use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::{json, Value};

use lambek_core::base::{canonical_sequent, BaseError, BaseRegistry, BaseSpec};
use lambek_core::feature::{entail_report, FeatureError, FeatureTerm};
use lambek_core::grammar::{check_equivalence, compile_out, membership, Grammar, GrammarError};
use lambek_core::layered::{layered_membership, prove_layered, Environment, LayeredConfig, LayeredError};
use lambek_core::prover::{ProverError, SearchConfig, Searcher};
use lambek_core::syntax::parse::parse_sequent;
use lambek_core::syntax::{Regime, SyntaxError};

use crate::{Cli, Command};

pub const GRAMMAR_PATH_VAR: &str = "LAMBEK_GRAMMAR_PATH";

#[derive(Debug, Default)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn answer(positive: bool, stdout: String) -> Self {
        Outcome {
            code: if positive { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }
}

/// Exit status 2 for bad input, 3 when the requested operation is not
/// available for the chosen base logic or mode.
#[derive(Debug)]
enum Failure {
    Input(String),
    Oracle(String),
}

impl Failure {
    fn into_outcome(self) -> Outcome {
        let (code, msg) = match self {
            Failure::Input(m) => (2, m),
            Failure::Oracle(m) => (3, m),
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

impl From<BaseError> for Failure {
    fn from(e: BaseError) -> Self {
        match e {
            BaseError::Unsupported { .. } | BaseError::UnknownBackend(_) => Failure::Oracle(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<SyntaxError> for Failure {
    fn from(e: SyntaxError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<FeatureError> for Failure {
    fn from(e: FeatureError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ProverError> for Failure {
    fn from(e: ProverError) -> Self {
        match e {
            ProverError::Base(b) => b.into(),
            other => Failure::Oracle(other.to_string()),
        }
    }
}

impl From<GrammarError> for Failure {
    fn from(e: GrammarError) -> Self {
        match e {
            GrammarError::NoLattice(_) | GrammarError::Compile(_) => Failure::Oracle(e.to_string()),
            GrammarError::Base(b) => b.into(),
            GrammarError::Prover(p) => p.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<LayeredError> for Failure {
    fn from(e: LayeredError) -> Self {
        match e {
            LayeredError::Base(b) => b.into(),
            LayeredError::Feature(f) => f.into(),
            LayeredError::Grammar(g) => g.into(),
            other => Failure::Oracle(other.to_string()),
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(out) => out,
        Err(f) => f.into_outcome(),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Prove {
            sequent,
            regime,
            base,
            cut,
            layered,
            max_solutions,
        } => prove(cli, sequent, regime.as_deref(), base, *cut, *layered, *max_solutions),
        Command::Member {
            sentence,
            layered,
            max_solutions,
        } => member(cli, sentence, *layered, *max_solutions),
        Command::CompileOut { check } => compile(cli, *check),
        Command::Entail { context, guard } => entail(cli, context, guard),
        Command::Batch { script, parallel } => batch(cli, script, *parallel),
    }
}

/// Finds a grammar file: the path itself, then with `.grammar` appended,
/// then both forms under each directory of the search path.
pub fn resolve_grammar(path: &Path) -> Option<PathBuf> {
    let with_ext = |p: &Path| {
        let mut s = p.as_os_str().to_owned();
        s.push(".grammar");
        PathBuf::from(s)
    };
    let mut candidates = vec![path.to_path_buf(), with_ext(path)];
    if path.is_relative() {
        if let Some(dirs) = std::env::var_os(GRAMMAR_PATH_VAR) {
            for dir in std::env::split_paths(&dirs) {
                candidates.push(dir.join(path));
                candidates.push(with_ext(&dir.join(path)));
            }
        }
    }
    candidates.into_iter().find(|p| p.is_file())
}

fn load_grammar(cli: &Cli) -> Result<Option<Grammar>, Failure> {
    let Some(path) = &cli.grammar else {
        return Ok(None);
    };
    let file = resolve_grammar(path)
        .ok_or_else(|| Failure::Input(format!("grammar `{}` not found", path.display())))?;
    let text = std::fs::read_to_string(&file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let g = Grammar::parse(&text).map_err(|e| match e {
        GrammarError::Syntax { .. } => Failure::Input(format!("{}: {e}", file.display())),
        other => other.into(),
    })?;
    Ok(Some(g))
}

fn require_grammar(cli: &Cli, what: &str) -> Result<Grammar, Failure> {
    load_grammar(cli)?.ok_or_else(|| Failure::Input(format!("`{what}` needs a grammar (--grammar)")))
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn prove(
    cli: &Cli,
    text: &str,
    regime: Option<&str>,
    base_name: &str,
    cut: Option<usize>,
    layered: bool,
    max_solutions: Option<usize>,
) -> Result<Outcome, Failure> {
    let grammar = load_grammar(cli)?;
    let regime: Regime = match (regime, &grammar) {
        (Some(r), _) => r.parse()?,
        (None, Some(g)) => g.regime,
        (None, None) => Regime::L,
    };
    let base = match &grammar {
        Some(g) => g.base.clone(),
        None => BaseRegistry::default().create(base_name, &BaseSpec::default())?,
    };
    let seq = parse_sequent(text, regime, true)?;
    let seq = canonical_sequent(&seq, &*base)?;

    if layered {
        if cut.is_some() {
            return Err(Failure::Oracle("layered search is cut-free".into()));
        }
        let cfg = LayeredConfig {
            search: SearchConfig::cut_free(regime),
            max_solutions,
        };
        let sols = prove_layered(&seq, &Environment::new(), &cfg, &*base)?;
        let out = if cli.json {
            to_json(&json!({
                "sequent": seq.display_in(regime),
                "provable": !sols.is_empty(),
                "solutions": sols.iter().map(|s| json!({
                    "proof": s.proof,
                    "environment": s.env.to_string(),
                })).collect::<Vec<_>>(),
            }))
        } else if sols.is_empty() {
            "not provable\n".to_string()
        } else {
            let mut out = String::new();
            for (i, s) in sols.iter().enumerate() {
                out.push_str(&format!("solution {}\n", i + 1));
                out.push_str(&s.proof.render_text(regime));
                out.push_str(&format!("environment:\n{}\n", indent(&s.env.to_string())));
            }
            out
        };
        return Ok(Outcome::answer(!sols.is_empty(), out));
    }

    let cfg = match cut {
        Some(d) => SearchConfig::with_cut(regime, d),
        None => SearchConfig::cut_free(regime),
    };
    let proof = Searcher::new(cfg, &*base).prove(&seq)?;
    let out = if cli.json {
        to_json(&json!({
            "sequent": seq.display_in(regime),
            "provable": proof.is_some(),
            "proof": proof,
        }))
    } else {
        match &proof {
            Some(p) => p.render_text(regime),
            None => "not provable\n".to_string(),
        }
    };
    Ok(Outcome::answer(proof.is_some(), out))
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}")).collect::<Vec<_>>().join("\n")
}

fn member(cli: &Cli, sentence: &[String], layered: bool, max_solutions: Option<usize>) -> Result<Outcome, Failure> {
    let g = require_grammar(cli, "member")?;
    let words: Vec<&str> = sentence.iter().flat_map(|s| s.split_whitespace()).collect();
    if !layered {
        let report = membership(&g, &words)?;
        let out = if cli.json {
            to_json(&serde_json::to_value(&report).expect("reports serialize"))
        } else {
            report.render_text(g.regime)
        };
        return Ok(Outcome::answer(report.accepted, out));
    }
    let cfg = LayeredConfig {
        search: SearchConfig::cut_free(g.regime),
        max_solutions,
    };
    let report = layered_membership(&g, &words, &cfg)?;
    let accepted = !report.readings.is_empty();
    let out = if cli.json {
        to_json(&json!({
            "sentence": words,
            "accepted": accepted,
            "accepted_without_features": report.accepted_plain,
            "pruned": report.pruned,
            "readings": report.readings.iter().map(|r| json!({
                "assignment": r.assignment.iter().map(|e| e.formula.to_string()).collect::<Vec<_>>(),
                "proof": r.proof,
                "environment": r.env.to_string(),
            })).collect::<Vec<_>>(),
        }))
    } else {
        let mut out = format!(
            "{}: {} ({} reading{}, {} branch{} pruned)\n",
            if accepted { "accepted" } else { "rejected" },
            words.join(" "),
            report.readings.len(),
            if report.readings.len() == 1 { "" } else { "s" },
            report.pruned,
            if report.pruned == 1 { "" } else { "es" },
        );
        if !accepted && report.accepted_plain {
            out.push_str("the categorial layer accepts; every reading has inconsistent features\n");
        }
        for (i, r) in report.readings.iter().enumerate() {
            out.push_str(&format!("reading {}\n", i + 1));
            for (w, e) in words.iter().zip(&r.assignment) {
                out.push_str(&format!("  {w} : {}\n", e.formula));
            }
            out.push_str(&indent(&r.proof.render_text(g.regime)));
            out.push_str(&format!("\nenvironment:\n{}\n", indent(&r.env.to_string())));
        }
        out
    };
    Ok(Outcome::answer(accepted, out))
}

fn compile(cli: &Cli, check: Option<usize>) -> Result<Outcome, Failure> {
    let g = require_grammar(cli, "compile-out")?;
    let family = compile_out(&g)?;
    let report = check.map(|n| check_equivalence(&g, n)).transpose()?;
    let positive = report.as_ref().map_or(true, |r| r.equivalent());
    let out = if cli.json {
        to_json(&json!({
            "family": family,
            "check": report,
        }))
    } else {
        let mut out = format!("start types ({}):", family.start_types.len());
        for s in &family.start_types {
            out.push_str(&format!(" {s}"));
        }
        out.push_str(&format!("\nlexicon ({} types):\n", family.lexicon_size()));
        for (w, fs) in &family.lexicon {
            out.push_str(&format!("  {w} ({}):", fs.len()));
            for f in fs {
                out.push_str(&format!(" {f}"));
            }
            out.push('\n');
        }
        if let Some(r) = &report {
            if r.equivalent() {
                out.push_str(&format!(
                    "equivalent on all {} strings up to length {} ({} accepted)\n",
                    r.strings_checked, r.max_len, r.accepted
                ));
            } else {
                out.push_str(&format!("{} mismatches:\n", r.mismatches.len()));
                for m in &r.mismatches {
                    out.push_str(&format!("  {}\n", m.join(" ")));
                }
            }
        }
        out
    };
    Ok(Outcome::answer(positive, out))
}

fn entail(cli: &Cli, context: &str, guard: &str) -> Result<Outcome, Failure> {
    let phi = FeatureTerm::parse(context)?;
    let psi = FeatureTerm::parse(guard)?;
    let r = entail_report(&phi, &psi)?;
    let out = if cli.json {
        to_json(&json!({
            "verdict": r.verdict,
            "trace": r.trace.iter().map(|a| format!("{a:?}")).collect::<Vec<_>>(),
            "residual": r.residual.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }))
    } else {
        format!("{}\n", r.verdict)
    };
    Ok(Outcome::answer(r.verdict.is_entailed(), out))
}

struct BatchLine {
    text: String,
    expected: u8,
    cli: Result<Cli, String>,
}

fn parse_batch_line(parent: &Cli, text: &str) -> BatchLine {
    let mut expected = 0;
    let cli = (|| {
        let mut words = shlex::split(text).ok_or("unbalanced quotes")?;
        if words.first().map(String::as_str) == Some("expect") {
            if words.len() < 3 {
                return Err("expected `expect <code> <command>`".to_string());
            }
            expected = words[1].parse().map_err(|_| format!("bad exit code `{}`", words[1]))?;
            words.drain(..2);
        }
        let mut cli = Cli::try_parse_from(std::iter::once("lambek".to_string()).chain(words))
            .map_err(|e| e.to_string().lines().next().unwrap_or_default().to_string())?;
        if matches!(cli.command, Command::Batch { .. }) {
            return Err("batch scripts cannot run batch".to_string());
        }
        if cli.grammar.is_none() {
            cli.grammar = parent.grammar.clone();
        }
        cli.json |= parent.json;
        Ok(cli)
    })();
    BatchLine {
        text: text.to_string(),
        expected,
        cli,
    }
}

fn run_line(line: &BatchLine) -> Outcome {
    match &line.cli {
        Ok(cli) => run(cli),
        Err(e) => Failure::Input(e.clone()).into_outcome(),
    }
}

fn batch(cli: &Cli, script: &Path, parallel: bool) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(script).map_err(|e| Failure::Input(format!("{}: {e}", script.display())))?;
    let lines: Vec<BatchLine> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_batch_line(cli, l))
        .collect();
    let outcomes: Vec<Outcome> = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = lines.iter().map(|l| s.spawn(|| run_line(l))).collect();
            handles.into_iter().map(|h| h.join().expect("batch command panicked")).collect()
        })
    } else {
        lines.iter().map(run_line).collect()
    };
    let passed = lines.iter().zip(&outcomes).filter(|(l, o)| l.expected == o.code).count();
    let failed = lines.len() - passed;
    let out = if cli.json {
        to_json(&json!({
            "passed": passed,
            "failed": failed,
            "commands": lines.iter().zip(&outcomes).map(|(l, o)| json!({
                "command": l.text,
                "expected": l.expected,
                "exit": o.code,
                "passed": l.expected == o.code,
                "stdout": o.stdout,
                "stderr": o.stderr,
            })).collect::<Vec<_>>(),
        }))
    } else {
        let mut out = String::new();
        for (l, o) in lines.iter().zip(&outcomes) {
            let verdict = if l.expected == o.code { "pass" } else { "FAIL" };
            out.push_str(&format!("[{verdict}] {} (exit {}, expected {})\n", l.text, o.code, l.expected));
            if l.expected != o.code {
                out.push_str(&indent(o.stdout.trim_end()));
                out.push_str(&indent(o.stderr.trim_end()));
                out.push('\n');
            }
        }
        out.push_str(&format!("{passed} passed, {failed} failed\n"));
        out
    };
    Ok(Outcome::answer(failed == 0, out))
}
