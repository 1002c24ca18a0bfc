use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use minimod::classify::{self, canonical_model, enumerate_classes, registry};
use minimod::oracle;
use minimod::{decide_symplectic, ClassCount, Error, ExteriorElement, FieldMode, MinimalAlgebra, SymplecticVerdict};

#[derive(Parser)]
#[command(name = "minimod", version, about = "Classify degree-1-generated minimal algebras of dimension at most 6")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical label, filtration signature and change of basis.
    Classify {
        file: PathBuf,
        /// Overrides the file's `field`.
        #[arg(long)]
        field: Option<FieldMode>,
    },
    /// Regenerate the table of canonical models in one dimension.
    Tables {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "R")]
        field: FieldMode,
    },
    /// Decide whether two algebras have the same homotopy type over a field.
    Homotopy {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "Q")]
        field: FieldMode,
    },
    /// Search for a closed non-degenerate 2-form.
    Symplectic {
        file: PathBuf,
        #[arg(long)]
        field: Option<FieldMode>,
    },
    /// Betti numbers of the cohomology.
    Betti {
        file: PathBuf,
        #[arg(long)]
        field: Option<FieldMode>,
    },
    /// Scramble canonical models and check that invariants and labels survive.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "Q")]
        field: FieldMode,
        #[arg(long, default_value_t = 6)]
        dim: usize,
        /// Write one JSON record per trial to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Report {
    command: Vec<String>,
    digest: Option<String>,
    results: Value,
    text: String,
}

impl Report {
    fn to_json(&self) -> Value {
        json!({"command": self.command, "input_digest": self.digest, "results": self.results})
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Field(_) | Error::BadDimension(_) => 2,
            Error::NotClosed { .. } | Error::NotNilpotent { .. } => 3,
            Error::UnreachableSignature(_) => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_failure(msg: String) -> Failure {
    Failure { code: 2, message: msg }
}

struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Inputs { hasher: Sha256::new() }
    }

    fn load(&mut self, path: &Path, mode: Option<FieldMode>) -> Result<MinimalAlgebra, Failure> {
        let bytes = std::fs::read(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
        self.hasher.update(&bytes);
        let v: Value = serde_json::from_slice(&bytes).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
        Ok(MinimalAlgebra::from_json(&v, mode)?)
    }

    fn digest(self) -> Option<String> {
        Some(format!("sha256:{:x}", self.hasher.finalize()))
    }
}

fn signature_text(sig: &[usize]) -> String {
    let parts: Vec<String> = sig.iter().map(|f| f.to_string()).collect();
    format!("({})", parts.join(","))
}

fn two_form_json(w: &ExteriorElement) -> Value {
    let terms: Vec<Value> = w
        .terms()
        .map(|(m, c)| json!({"i": m[0] as usize + 1, "j": m[1] as usize + 1, "c": c.to_string()}))
        .collect();
    Value::Array(terms)
}

fn diffs_text(alg: &MinimalAlgebra) -> String {
    let parts: Vec<String> = alg
        .diffs
        .iter()
        .enumerate()
        .filter(|(_, dx)| !dx.is_zero())
        .map(|(i, dx)| format!("dx{}={dx}", i + 1))
        .collect();
    if parts.is_empty() {
        "d=0".into()
    } else {
        parts.join(", ")
    }
}

fn symbolic_diffs_text(spec: &registry::ModelSpec) -> String {
    let mut parts = Vec::new();
    for (i, terms) in spec.diffs.iter().enumerate() {
        if terms.is_empty() {
            continue;
        }
        let mut s = String::new();
        for (t, &(j, k, c)) in terms.iter().enumerate() {
            let coef = match c {
                registry::Coef::A => "a".to_string(),
                registry::Coef::N(1) => String::new(),
                registry::Coef::N(-1) => "-".to_string(),
                registry::Coef::N(v) => v.to_string(),
            };
            if t > 0 && !coef.starts_with('-') {
                s.push('+');
            }
            s.push_str(&format!("{coef}x{j}x{k}"));
        }
        parts.push(format!("dx{}={s}", i + 1));
    }
    parts.join(", ")
}

/// `Some(true/false)`, or `None` when the decision is uncertified in the mode.
fn symplectic_of(alg: &MinimalAlgebra) -> Result<Option<bool>, Failure> {
    if alg.n() % 2 == 1 {
        return Ok(Some(false));
    }
    match decide_symplectic(alg) {
        Ok(v) => Ok(Some(v.is_symplectic())),
        Err(Error::UnsupportedMode(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn verdict_text(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "undecided",
    }
}

fn cmd_classify(file: &Path, field: Option<FieldMode>) -> Result<(Value, String, Option<String>), Failure> {
    let mut inputs = Inputs::new();
    let alg = inputs.load(file, field)?;
    let c = classify::classify(&alg)?;
    let sig = &c.label.signature;
    let rows: Vec<Vec<String>> = c
        .isomorphism
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    let parameter = c.label.parameter.as_ref().map(|p| p.representative.to_string());
    let mut text = format!("{} {}\n", c.label, signature_text(sig));
    text += &format!("field: {}\n", alg.mode);
    text += &format!("parameter: {}\n", parameter.as_deref().unwrap_or("none"));
    text += &format!("target: {}\n", diffs_text(&c.target));
    text += "isomorphism (row i = y_i in input coordinates):\n";
    for r in &rows {
        text += &format!("  [{}]\n", r.join(", "));
    }
    let results = json!({
        "field": alg.mode,
        "label": c.label,
        "name": c.label.name,
        "parameter": parameter,
        "signature": sig,
        "isomorphism": rows,
        "target": c.target.to_json(),
    });
    Ok((results, text, inputs.digest()))
}

fn table_row(label: String, alg: &MinimalAlgebra, diffs: String, symplectic: Option<bool>) -> (Value, String) {
    let sig = alg.filtration().map(|f| f.signature).unwrap_or_default();
    let betti = alg.betti().0;
    let betti_text: Vec<String> = betti.iter().map(|b| b.to_string()).collect();
    let text = format!(
        "{:<14} {:<11} b=({})  symplectic={}  {}\n",
        label,
        signature_text(&sig),
        betti_text.join(","),
        verdict_text(symplectic),
        diffs
    );
    let v = json!({
        "label": label,
        "signature": sig,
        "differentials": diffs,
        "betti": betti,
        "symplectic": symplectic,
    });
    (v, text)
}

fn cmd_tables(dim: usize, mode: FieldMode) -> Result<(Value, String), Failure> {
    let en = enumerate_classes(mode, dim)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for l in &en.labels {
        let m = canonical_model(l, mode)?;
        let (v, t) = table_row(l.to_string(), &m, diffs_text(&m), symplectic_of(&m)?);
        rows.push(v);
        text += &t;
    }
    for name in &en.families {
        let spec = registry::lookup(name).ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
        // invariants are evaluated at several parameter values
        let mut verdicts = Vec::new();
        let mut model = None;
        for a in [2i64, 3, -1, -2] {
            let m = registry::instantiate(spec, mode, Some(&mode.field().from_i64(a)))?;
            verdicts.push(symplectic_of(&m)?);
            model.get_or_insert(m);
        }
        let agreed = verdicts.iter().all(|v| *v == verdicts[0]).then_some(verdicts[0]).flatten();
        let m = model.expect("at least one parameter value");
        let (v, t) = table_row(format!("{name}[a]"), &m, symbolic_diffs_text(spec), agreed);
        rows.push(v);
        text += &t;
    }
    let count = match en.count {
        ClassCount::Finite(c) => json!(c),
        ClassCount::Infinite => json!("infinite"),
    };
    let symplectic = rows.iter().filter(|r| r["symplectic"] == json!(true)).count();
    text += &format!("rows: {}\nclasses: {}\nsymplectic rows: {symplectic}\n", rows.len(), count.to_string().trim_matches('"'));
    let results = json!({
        "dim": dim,
        "field": mode,
        "rows": rows,
        "classes": count,
        "families": en.families,
        "symplectic_rows": symplectic,
    });
    Ok((results, text))
}

fn cmd_homotopy(a: &Path, b: &Path, mode: FieldMode) -> Result<(Value, String, Option<String>), Failure> {
    let mut inputs = Inputs::new();
    let (a, b) = (inputs.load(a, None)?, inputs.load(b, None)?);
    let (ca, cb) = (
        classify::classify(&a.with_mode(mode)?)?.label,
        classify::classify(&b.with_mode(mode)?)?.label,
    );
    let equivalent = ca == cb;
    let decided_by = if ca.signature != cb.signature {
        "signature"
    } else if a.betti() != b.betti() {
        "betti"
    } else if ca.name != cb.name {
        "canonical form"
    } else if ca.parameter != cb.parameter {
        "parameter square class"
    } else {
        "canonical form"
    };
    let text = format!(
        "{} over {mode}: {} vs {} (decided by {decided_by})\n",
        if equivalent { "equivalent" } else { "not equivalent" },
        ca,
        cb
    );
    let results = json!({
        "field": mode,
        "equivalent": equivalent,
        "labels": [ca, cb],
        "decided_by": decided_by,
    });
    Ok((results, text, inputs.digest()))
}

fn cmd_symplectic(file: &Path, field: Option<FieldMode>) -> Result<(Value, String, Option<String>), Failure> {
    let mut inputs = Inputs::new();
    let alg = inputs.load(file, field)?;
    alg.validate()?;
    let (results, text) = if alg.n() % 2 == 1 {
        (
            json!({"symplectic": false, "certificate": "odd-dimension"}),
            "not symplectic (odd dimension)\n".to_string(),
        )
    } else {
        match decide_symplectic(&alg)? {
            SymplecticVerdict::Witness(w) => (
                json!({"symplectic": true, "omega": two_form_json(&w)}),
                format!("symplectic: omega = {w}\n"),
            ),
            SymplecticVerdict::None => (
                json!({"symplectic": false, "certificate": "pfaffian-cubic-zero"}),
                "not symplectic (top power vanishes on all closed 2-forms)\n".to_string(),
            ),
        }
    };
    Ok((results, text, inputs.digest()))
}

fn cmd_betti(file: &Path, field: Option<FieldMode>) -> Result<(Value, String, Option<String>), Failure> {
    let mut inputs = Inputs::new();
    let alg = inputs.load(file, field)?;
    alg.validate()?;
    let b = alg.betti();
    let parts: Vec<String> = b.0.iter().map(|x| x.to_string()).collect();
    let text = format!("({})  total {}\n", parts.join(","), b.total());
    let results = json!({"betti": b, "total": b.total(), "euler_characteristic": b.euler_characteristic()});
    Ok((results, text, inputs.digest()))
}

fn cmd_fuzz(trials: usize, seed: u64, mode: FieldMode, dim: usize, out: Option<&Path>) -> Result<(Value, String, bool), Failure> {
    let records = oracle::run_trials(mode, dim, trials, seed)?;
    if let Some(path) = out {
        std::fs::write(path, oracle::trials_to_jsonl(&records))
            .map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })?;
    }
    let passed = records.iter().filter(|r| r.fingerprint_matches && r.label_matches).count();
    let unreachable = records.iter().filter(|r| r.unreachable_signature).count();
    let failed: Vec<&oracle::TrialRecord> = records.iter().filter(|r| !(r.fingerprint_matches && r.label_matches)).collect();
    let mut text = format!(
        "fuzz over {mode}, dim {dim}, seed {seed}: {passed}/{} passed, {} failed, {unreachable} unreachable signatures\n",
        records.len(),
        failed.len()
    );
    for r in &failed {
        text += &format!("  trial {} seed {} model {}: {:?}\n", r.trial, r.seed, r.model, r.classified.as_ref().or(r.error.as_ref()));
    }
    let results = json!({
        "field": mode,
        "dim": dim,
        "seed": seed,
        "trials": records.len(),
        "passed": passed,
        "failed": failed.len(),
        "unreachable_signatures": unreachable,
        "failures": failed,
    });
    Ok((results, text, failed.is_empty()))
}

fn run(cli: &Cli, argv: Vec<String>) -> Result<(Report, bool), Failure> {
    let mut ok = true;
    let (results, text, digest) = match &cli.command {
        Command::Classify { file, field } => cmd_classify(file, *field)?,
        Command::Tables { dim, field } => {
            let (r, t) = cmd_tables(*dim, *field)?;
            (r, t, None)
        }
        Command::Homotopy { a, b, field } => cmd_homotopy(a, b, *field)?,
        Command::Symplectic { file, field } => cmd_symplectic(file, *field)?,
        Command::Betti { file, field } => cmd_betti(file, *field)?,
        Command::Fuzz { trials, seed, field, dim, out } => {
            let (r, t, passed) = cmd_fuzz(*trials, *seed, *field, *dim, out.as_deref())?;
            ok = passed;
            (r, t, None)
        }
    };
    let report = Report {
        command: argv,
        digest,
        results,
        text,
    };
    Ok((report, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli, argv) {
        Ok((report, ok)) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.text);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({"error": f.message, "exit_code": f.code}));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
