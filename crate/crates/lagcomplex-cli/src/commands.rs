//! Subcommand implementations.
//!
//! Every command produces a [`Report`]: deterministic text lines, an
//! equivalent JSON value, and an overall pass flag. Exit codes partition
//! into 0 (all contracts hold), 1 (a mathematical contract failed) and
//! 2 (input error).

use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use lagcomplex::{
    apply_d, bridge_check, cohomology_dims, covector_check, d_squared_check,
    divergence_decompose, helmholtz_check, naturality_check, stokes_check, var_deriv_all, Corpus,
    Lagrangian, Signature,
};

use crate::files::{parse_document, Document};

/// An input problem: bad file, bad flags, or a precondition violation.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug)]
pub struct Report {
    pub lines: Vec<String>,
    pub json: Value,
    pub pass: bool,
}

impl Report {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for line in &self.lines {
                let _ = writeln!(s, "{line}");
            }
            s
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "lagcomplex",
    about = "Exact checks for the complex of Lagrangians of r|s-dimensional paths",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the canonical form of every expression in the file.
    Canon { file: PathBuf },
    /// Variational derivatives of every Lagrangian, one line per coordinate.
    El { file: PathBuf },
    /// The differential of every Lagrangian (over the lifted signature).
    Diff { file: PathBuf },
    /// Check d(dL) = 0 on the file's Lagrangians or on a seeded corpus.
    D2check {
        file: Option<PathBuf>,
        /// Corpus seed (ChaCha20; a seed fixes the corpus exactly).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random Lagrangians.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Maximal derivative order of the random Lagrangians.
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Signature as `n|m r|s` (overrides --n/--m/--r/--s).
        #[arg(long)]
        sig: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: u16,
        #[arg(long, default_value_t = 0)]
        m: u16,
        #[arg(long, default_value_t = 1)]
        r: u16,
        #[arg(long, default_value_t = 0)]
        s: u16,
    },
    /// Inverse-problem obstruction of each covector block.
    Helmholtz { file: PathBuf },
    /// Covector transformation and naturality of d under each map block.
    PullbackCheck { file: PathBuf },
    /// Total-divergence certificates and residual for each Lagrangian.
    Divergence { file: PathBuf },
    /// Both sides of the generalized Stokes identity per homotopy block.
    Stokes { file: PathBuf },
    /// The form dictionary intertwines d with the exterior derivative.
    DerhamCheck { file: PathBuf },
    /// Cohomology dimensions of the truncated polynomial form complex.
    Cohomology {
        #[arg(long)]
        n: u16,
        /// Total degree bound (coefficient degree plus form degree).
        #[arg(long)]
        bound: u16,
    },
}

fn load(path: &FsPath) -> Result<Document, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| InputError(format!("{}:{e}", path.display())))
}

fn input(path: &FsPath, err: impl std::fmt::Display) -> InputError {
    InputError(format!("{}: {err}", path.display()))
}

fn coord_name(sig: &Signature, coord: u16) -> String {
    if coord <= sig.n {
        format!("x{coord}")
    } else {
        format!("th{}", coord - sig.n)
    }
}

fn time_name(sig: &Signature, index: u16) -> String {
    if index <= sig.r {
        format!("t{index}")
    } else {
        format!("tau{}", index - sig.r)
    }
}

fn need_lagrangians(doc: &Document, path: &FsPath) -> Result<(), InputError> {
    if doc.lagrangians.is_empty() {
        Err(input(path, "no Lagrangians in file"))
    } else {
        Ok(())
    }
}

pub fn run(cli: &Cli) -> Result<Report, InputError> {
    match &cli.command {
        Command::Canon { file } => canon(file),
        Command::El { file } => el(file),
        Command::Diff { file } => diff(file),
        Command::D2check { file, seed, count, order, sig, n, m, r, s } => {
            let sig = match sig {
                Some(text) => text
                    .parse::<Signature>()
                    .map_err(|e| InputError(format!("--sig: {e}")))?,
                None => Signature::new(*n, *m, *r, *s),
            };
            d2check(file.as_deref(), *seed, *count, *order, sig)
        }
        Command::Helmholtz { file } => helmholtz(file),
        Command::PullbackCheck { file } => pullback_check(file),
        Command::Divergence { file } => divergence(file),
        Command::Stokes { file } => stokes(file),
        Command::DerhamCheck { file } => derham_check(file),
        Command::Cohomology { n, bound } => cohomology(*n, *bound),
    }
}

fn canon(path: &FsPath) -> Result<Report, InputError> {
    let doc = load(path)?;
    need_lagrangians(&doc, path)?;
    let mut lines = Vec::new();
    let mut items = Vec::new();
    for l in &doc.lagrangians {
        let text = format!("{}", l.body());
        lines.push(text.clone());
        items.push(json!({ "canonical": text }));
    }
    Ok(Report {
        lines,
        json: json!({ "command": "canon", "pass": true, "items": items }),
        pass: true,
    })
}

fn el(path: &FsPath) -> Result<Report, InputError> {
    let doc = load(path)?;
    need_lagrangians(&doc, path)?;
    let sig = doc.signature();
    let mut lines = Vec::new();
    let mut items = Vec::new();
    for l in &doc.lagrangians {
        let cov = var_deriv_all(l).map_err(|e| input(path, e))?;
        let mut components = Vec::new();
        for a in sig.coord_range() {
            let text = format!("{}", cov.component(a));
            lines.push(text.clone());
            components.push(json!({ "coordinate": coord_name(&sig, a), "value": text }));
        }
        items.push(json!({ "lagrangian": format!("{l}"), "components": components }));
    }
    Ok(Report {
        lines,
        json: json!({ "command": "el", "pass": true, "items": items }),
        pass: true,
    })
}

fn diff(path: &FsPath) -> Result<Report, InputError> {
    let doc = load(path)?;
    need_lagrangians(&doc, path)?;
    let mut lines = Vec::new();
    let mut items = Vec::new();
    for l in &doc.lagrangians {
        let dl = apply_d(l).map_err(|e| input(path, e))?;
        let text = format!("{dl}");
        lines.push(text.clone());
        items.push(json!({
            "lagrangian": format!("{l}"),
            "differential": text,
            "signature": format!("{}", dl.sig()),
        }));
    }
    Ok(Report {
        lines,
        json: json!({ "command": "diff", "pass": true, "items": items }),
        pass: true,
    })
}

fn d2_items(lagrangians: &[Lagrangian]) -> Result<(Vec<String>, Vec<Value>, bool), String> {
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut pass = true;
    for (i, l) in lagrangians.iter().enumerate() {
        let square = d_squared_check(l).map_err(|e| e.to_string())?;
        if square.is_zero() {
            lines.push(format!("item {i}: PASS"));
            items.push(json!({ "lagrangian": format!("{l}"), "pass": true }));
        } else {
            pass = false;
            lines.push(format!("item {i}: FAIL {square}"));
            items.push(json!({
                "lagrangian": format!("{l}"),
                "pass": false,
                "defect": format!("{square}"),
            }));
        }
    }
    Ok((lines, items, pass))
}

fn d2check(
    file: Option<&FsPath>,
    seed: u64,
    count: usize,
    order: u32,
    sig: Signature,
) -> Result<Report, InputError> {
    let lagrangians = match file {
        Some(path) => {
            let doc = load(path)?;
            need_lagrangians(&doc, path)?;
            doc.lagrangians
        }
        None => {
            let mut corpus = Corpus::new(seed);
            (0..count).map(|_| corpus.lagrangian(sig, order, 2, 3)).collect()
        }
    };
    let total = lagrangians.len();
    let (mut lines, items, pass) = d2_items(&lagrangians).map_err(InputError)?;
    let passed = items.iter().filter(|v| v["pass"] == json!(true)).count();
    lines.push(format!("d2check: {passed}/{total} PASS"));
    Ok(Report {
        lines,
        json: json!({
            "command": "d2check",
            "pass": pass,
            "passed": passed,
            "total": total,
            "items": items,
        }),
        pass,
    })
}

fn helmholtz(path: &FsPath) -> Result<Report, InputError> {
    let doc = load(path)?;
    if doc.covectors.is_empty() {
        return Err(input(path, "no covector block in file"));
    }
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut pass = true;
    for f in &doc.covectors {
        let obstruction = helmholtz_check(f).map_err(|e| input(path, e))?;
        let zero = obstruction.is_zero();
        pass &= zero;
        lines.push(format!("{obstruction}"));
        items.push(json!({ "pass": zero, "obstruction": format!("{obstruction}") }));
    }
    Ok(Report {
        lines,
        json: json!({ "command": "helmholtz", "pass": pass, "items": items }),
        pass,
    })
}

fn pullback_check(path: &FsPath) -> Result<Report, InputError> {
    let doc = load(path)?;
    need_lagrangians(&doc, path)?;
    if doc.maps.is_empty() {
        return Err(input(path, "no map block in file"));
    }
    let sig = doc.signature();
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut pass = true;
    for l in &doc.lagrangians {
        for phi in &doc.maps {
            let entries = covector_check(l, phi).map_err(|e| input(path, e))?;
            let mut comp_json = Vec::new();
            for (a, entry) in sig.coord_range().zip(&entries) {
                let ok = entry.is_zero();
                pass &= ok;
                lines.push(format!("covector {}: {entry}", coord_name(&sig, a)));
                comp_json.push(json!({
                    "coordinate": coord_name(&sig, a),
                    "pass": ok,
                    "defect": format!("{entry}"),
                }));
            }
            let defect = naturality_check(l, phi).map_err(|e| input(path, e))?;
            let ok = defect.is_zero();
            pass &= ok;
            lines.push(format!("naturality: {defect}"));
            items.push(json!({
                "lagrangian": format!("{l}"),
                "covector": comp_json,
                "naturality": { "pass": ok, "defect": format!("{defect}") },
            }));
        }
    }
    lines.push(if pass { "pullback-check: PASS".into() } else { "pullback-check: FAIL".into() });
    Ok(Report {
        lines,
        json: json!({ "command": "pullback-check", "pass": pass, "items": items }),
        pass,
    })
}

fn divergence(path: &FsPath) -> Result<Report, InputError> {
    let doc = load(path)?;
    need_lagrangians(&doc, path)?;
    let sig = doc.signature();
    let lifted = sig.lift();
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut pass = true;
    for l in &doc.lagrangians {
        let (h, residual) = divergence_decompose(l).map_err(|e| input(path, e))?;
        let mut certs = Vec::new();
        for (f, cert) in &h {
            lines.push(format!("h[{}] = {cert}", time_name(&lifted, *f)));
            certs.push(json!({ "direction": time_name(&lifted, *f), "value": format!("{cert}") }));
        }
        let ok = residual.is_zero();
        pass &= ok;
        lines.push(format!("residual = {residual}"));
        items.push(json!({
            "lagrangian": format!("{l}"),
            "certificates": certs,
            "residual": format!("{residual}"),
            "pass": ok,
        }));
    }
    Ok(Report {
        lines,
        json: json!({ "command": "divergence", "pass": pass, "items": items }),
        pass,
    })
}

fn stokes(path: &FsPath) -> Result<Report, InputError> {
    let doc = load(path)?;
    need_lagrangians(&doc, path)?;
    if doc.homotopies.is_empty() {
        return Err(input(path, "no homotopy block in file"));
    }
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut pass = true;
    for l in &doc.lagrangians {
        for h in &doc.homotopies {
            let (lhs, rhs) = stokes_check(l, h).map_err(|e| input(path, e))?;
            let ok = lhs == rhs;
            pass &= ok;
            lines.push(format!("lhs = {lhs}"));
            lines.push(format!("rhs = {rhs}"));
            lines.push(if ok { "PASS".into() } else { "FAIL".into() });
            items.push(json!({
                "lagrangian": format!("{l}"),
                "lhs": format!("{lhs}"),
                "rhs": format!("{rhs}"),
                "pass": ok,
            }));
        }
    }
    Ok(Report {
        lines,
        json: json!({ "command": "stokes", "pass": pass, "items": items }),
        pass,
    })
}

fn derham_check(path: &FsPath) -> Result<Report, InputError> {
    let doc = load(path)?;
    if doc.forms.is_empty() {
        return Err(input(path, "no form block in file"));
    }
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut pass = true;
    for (i, form) in doc.forms.iter().enumerate() {
        let defect = bridge_check(form).map_err(|e| input(path, e))?;
        let ok = defect.is_zero();
        pass &= ok;
        if ok {
            lines.push(format!("form {i}: PASS"));
        } else {
            lines.push(format!("form {i}: FAIL {defect}"));
        }
        items.push(json!({ "form": i, "pass": ok, "defect": format!("{defect}") }));
    }
    Ok(Report {
        lines,
        json: json!({ "command": "derham-check", "pass": pass, "items": items }),
        pass,
    })
}

fn cohomology(n: u16, bound: u16) -> Result<Report, InputError> {
    let dims = cohomology_dims(n, bound).map_err(|e| InputError(e.to_string()))?;
    let rendered =
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
    Ok(Report {
        lines: vec![format!("dims = {rendered}")],
        json: json!({ "command": "cohomology", "pass": true, "n": n, "bound": bound, "dims": dims }),
        pass: true,
    })
}

/// Re-exported helpers for integration tests.
pub mod testing {
    pub use super::{Cli, Report};

    /// Runs the CLI on argument strings, returning the rendered output and
    /// the exit code the binary would produce.
    pub fn execute(args: &[&str]) -> (String, i32) {
        use clap::Parser;
        let cli = match Cli::try_parse_from(args) {
            Ok(cli) => cli,
            Err(e) => return (e.to_string(), 2),
        };
        match super::run(&cli) {
            Ok(report) => (report.render(cli.json), report.exit_code()),
            Err(e) => (format!("error: {e}\n"), 2),
        }
    }
}
