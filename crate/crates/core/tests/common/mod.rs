//! Shared fixtures: the corpus, its models and stimuli, and golden files.
#![allow(dead_code)]

pub mod ast_eval;
pub mod equiv;

use std::fs;
use std::path::{Path, PathBuf};

use mimosa::codegen::{parse_model, DeploymentModel};
use mimosa::pipeline::{self, Compiled};
use mimosa::simulator::{parse_stimulus, Stimulus};

/// The `mimosa` package directory; the acceptance package shares this module.
pub fn root() -> PathBuf {
    let here = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    if here.join("corpus").is_dir() {
        here
    } else {
        here.join("../core")
    }
}

pub struct Case {
    pub name: String,
    pub source: String,
    pub model: Option<DeploymentModel>,
    pub stimulus: Stimulus,
    pub horizon_us: u64,
}

impl Case {
    pub fn compiled(&self) -> Compiled {
        pipeline::compile(&self.source, self.model.as_ref())
            .unwrap_or_else(|d| panic!("{} does not compile: {:?}", self.name, d))
    }

    pub fn is_network(&self) -> bool {
        self.model.is_some()
    }
}

/// Simulation horizon per networked program.
fn horizon(name: &str) -> u64 {
    match name {
        "edge" => 600_000,
        "counter" => 100_000,
        "options" => 300_000,
        "filter" => 1_000_000,
        "overflow" => 1_000_000,
        _ => 0,
    }
}

fn load(path: &Path) -> Case {
    let name = path.file_stem().unwrap().to_string_lossy().to_string();
    let source = fs::read_to_string(path).unwrap();
    let sibling = |ext: &str| {
        let p = path.with_extension(ext);
        p.exists().then(|| fs::read_to_string(p).unwrap())
    };
    let model = sibling("model").map(|t| parse_model(&t).unwrap());
    let stimulus = sibling("stim").map(|t| parse_stimulus(&t).unwrap()).unwrap_or_default();
    Case { horizon_us: horizon(&name), name, source, model, stimulus }
}

/// Every corpus program plus the edge detector example, sorted by name.
pub fn corpus() -> Vec<Case> {
    let mut paths: Vec<PathBuf> = fs::read_dir(root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "mim"))
        .collect();
    paths.push(root().join("examples/edge.mim"));
    let mut cases: Vec<Case> = paths.iter().map(|p| load(p)).collect();
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    cases
}

pub fn case(name: &str) -> Case {
    corpus().into_iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no corpus program {}", name))
}

pub fn golden_dir() -> PathBuf {
    root().join("tests/golden")
}

/// Compares `actual` with the golden file, rewriting it when MIMOSA_BLESS is set.
pub fn check_golden(file: &str, actual: &str) -> Result<(), String> {
    let path = golden_dir().join(file);
    if std::env::var_os("MIMOSA_BLESS").is_some() {
        fs::create_dir_all(golden_dir()).unwrap();
        fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {} (run with MIMOSA_BLESS=1)", file, e))?;
    if expected == actual {
        Ok(())
    } else {
        let line = expected.lines().zip(actual.lines()).position(|(a, b)| a != b).unwrap_or(0);
        Err(format!(
            "{} differs from golden at line {}:\n  golden: {:?}\n  actual: {:?}",
            file,
            line + 1,
            expected.lines().nth(line),
            actual.lines().nth(line)
        ))
    }
}

/// Everything observable about a compiled program.
#[derive(Debug, PartialEq)]
pub struct Artifacts {
    pub normir: String,
    pub ooir: String,
    pub c: String,
    pub trace: Option<String>,
}

/// Checks and lowers an already parsed (possibly permuted) program.
pub fn build(program: &mimosa::frontend::ast::Program, case: &Case) -> (Compiled, Artifacts) {
    let typed = mimosa::sema::analyse(program).unwrap();
    mimosa::sema::check_network(&typed, case.model.as_ref()).unwrap();
    let compiled = pipeline::lower(typed);
    let model = case.model.clone().unwrap_or_default();
    let trace = case.model.as_ref().map(|m| compiled.simulate(m, &case.stimulus, case.horizon_us).unwrap().to_text());
    let art =
        Artifacts { normir: compiled.dump_normir(), ooir: compiled.dump_ooir(), c: c_bundle(&compiled, &model), trace };
    (compiled, art)
}

/// All files of a generated C project, concatenated with file banners.
pub fn c_bundle(compiled: &Compiled, model: &DeploymentModel) -> String {
    let project = compiled.codegen(model);
    let mut out = String::new();
    for (name, text) in &project.files {
        out.push_str(&format!("/* ==== {} ==== */\n", name));
        out.push_str(text);
    }
    out
}
