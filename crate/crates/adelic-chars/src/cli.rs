//! Command-line surface: file formats and the five subcommands.
//!
//! Systems arrive as JSON documents with sparse structure triples (given
//! for `i < j` only), generator matrices as `num/den` strings, and an
//! optional central table; characters use the [`AdeleCharacter`] JSON form.
//! All output is canonical: struct fields in a fixed order, rationals as
//! fraction strings, never floats, so golden files compare byte for byte.
//!
//! Exit codes: 0 ok, 1 parse error, 2 validation failure, 3
//! dimension/semantic error, 4 verification failure.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adelic::AdeleCharacter;
use crate::catalog::{self, CatalogFixture};
use crate::chars::{self, ClassificationReport, QuasiOrbitKey};
use crate::error::{Error, Result};
use crate::group::{CentralTable, LeviSystem};
use crate::nilpotent::LieAlgebra;
use crate::qmod1::Phase;
use crate::rat::{format_rat, parse_rat, Rat};
use crate::sample;
use crate::verify::{run_suite, CheckReport, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Exit code for an error surfaced to the command line.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::Io(_) => EXIT_PARSE,
        Error::Validation(_) => EXIT_VALIDATION,
        _ => EXIT_SEMANTIC,
    }
}

/// JSON face of a Levi system.
#[derive(Serialize, Deserialize, Clone)]
pub struct SystemDescription {
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// Sparse triples `[i, j, k, "num/den"]` for `i < j`.
    pub structure: Vec<(usize, usize, usize, String)>,
    pub levi_generators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub central_table: Option<CentralTableDoc>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct CentralTableDoc {
    pub labels: Vec<String>,
    pub actions: Vec<Vec<Vec<String>>>,
    pub table: Vec<Vec<String>>,
}

fn parse_matrix(
    doc: &[Vec<String>],
    rows: usize,
    cols: usize,
) -> Result<crate::ratlinalg::RatMatrix> {
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!("matrix must be {rows}x{cols}")));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in doc {
        for s in row {
            entries.push(parse_rat(s)?);
        }
    }
    Ok(crate::ratlinalg::RatMatrix::new(rows, cols, entries))
}

fn format_matrix(m: &crate::ratlinalg::RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(format_rat).collect())
        .collect()
}

impl SystemDescription {
    pub fn from_system(system: &LeviSystem, basis_names: &[String]) -> Self {
        let d = system.dim();
        let alg = system.algebra();
        let mut structure = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..d {
                    let c = alg.structure_constant(i, j, k);
                    if !num::Zero::is_zero(c) {
                        structure.push((i, j, k, format_rat(c)));
                    }
                }
            }
        }
        let table = system.central();
        let central_table = Some(CentralTableDoc {
            labels: (0..table.len())
                .map(|i| table.label(i).to_string())
                .collect(),
            actions: (0..table.len())
                .map(|i| format_matrix(table.action(i)))
                .collect(),
            table: (0..table.len())
                .map(|i| {
                    (0..table.len())
                        .map(|j| table.label(table.mul(i, j)).to_string())
                        .collect()
                })
                .collect(),
        });
        Self {
            dim: d,
            basis_names: basis_names.to_vec(),
            structure,
            levi_generators: system.one_param_gens().iter().map(format_matrix).collect(),
            central_table,
        }
    }

    /// Builds and validates the system; every violated axiom is reported.
    pub fn build(&self) -> Result<(Arc<LeviSystem>, Vec<String>)> {
        let d = self.dim;
        if self.basis_names.len() != d {
            return Err(Error::Parse(format!(
                "basis_names must list {d} names, got {}",
                self.basis_names.len()
            )));
        }
        let mut tensor = vec![Rat::from_integer(0.into()); d * d * d];
        for (i, j, k, v) in &self.structure {
            if *i >= *j {
                return Err(Error::Parse(format!(
                    "structure triples must have i < j, got ({i}, {j}, {k})"
                )));
            }
            if *j >= d || *k >= d {
                return Err(Error::Parse(format!(
                    "structure index out of range: ({i}, {j}, {k})"
                )));
            }
            let val = parse_rat(v)?;
            tensor[i * d * d + j * d + k] = val.clone();
            tensor[j * d * d + i * d + k] = -val;
        }
        let algebra = LieAlgebra::new(d, tensor)
            .map_err(|vs| Error::Validation(vs.iter().map(|v| v.to_string()).collect()))?;

        let mut gens = Vec::new();
        for g in &self.levi_generators {
            gens.push(parse_matrix(g, d, d)?);
        }
        let central = match &self.central_table {
            None => CentralTable::trivial(d),
            Some(doc) => {
                let mut actions = Vec::new();
                for a in &doc.actions {
                    actions.push(parse_matrix(a, d, d)?);
                }
                CentralTable::new(doc.labels.clone(), actions, &doc.table)
                    .map_err(Error::BadCentralTable)
                    .map_err(|e| Error::Validation(vec![e.to_string()]))?
            }
        };
        let system = LeviSystem::new(algebra, gens, central).map_err(Error::Validation)?;
        Ok((system, self.basis_names.clone()))
    }
}

/// Full machine-readable result of a classify run.
#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ReportDocument {
    pub tool_version: String,
    pub seed: u64,
    pub report: ClassificationReport,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct VerifyDocument {
    pub tool_version: String,
    pub suite: String,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckReport>,
}

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_system(path: &Path) -> Result<(Arc<LeviSystem>, Vec<String>)> {
    let doc: SystemDescription = read_json(path)?;
    doc.build()
}

pub fn load_lambda(path: &Path) -> Result<AdeleCharacter> {
    read_json(path)
}

/// `validate`: exit 0 iff the system file parses and passes every axiom.
pub fn cmd_validate(path: &Path) -> Result<String> {
    let (system, _) = load_system(path)?;
    Ok(format!(
        "ok: dim {}, class {}, {} one-parameter generators, central table of order {}",
        system.dim(),
        system.algebra().nil_class(),
        system.one_param_gens().len(),
        system.central().len()
    ))
}

pub struct ClassifyOutput {
    pub document: ReportDocument,
    pub text: String,
}

/// `classify`: run the engine, render text and canonical JSON.
pub fn cmd_classify(
    system_path: &Path,
    lambda_path: &Path,
    samples: usize,
    seed: u64,
) -> Result<ClassifyOutput> {
    let (system, basis_names) = load_system(system_path)?;
    let lambda = load_lambda(lambda_path)?;
    let mut rng = sample::rng_from_seed(seed);
    let elements = sample::membership_samples(&system, samples, &mut rng);
    let report = chars::classify(&lambda, &system, &elements)?;
    let text = render_report(&report, &basis_names);
    Ok(ClassifyOutput {
        document: ReportDocument {
            tool_version: tool_version(),
            seed,
            report,
        },
        text,
    })
}

fn render_subspace(s: &crate::ratlinalg::Subspace, basis_names: &[String]) -> String {
    if s.is_zero() {
        return "  {0}\n".to_string();
    }
    let mut out = String::new();
    for row in s.basis_rows() {
        let terms: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !num::Zero::is_zero(*v))
            .map(|(i, v)| {
                if *v == Rat::from_integer(1.into()) {
                    basis_names[i].clone()
                } else {
                    format!("{}·{}", format_rat(v), basis_names[i])
                }
            })
            .collect();
        out.push_str(&format!("  {}\n", terms.join(" + ")));
    }
    out
}

fn render_report(report: &ClassificationReport, basis_names: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!("lambda: {:?}\n", report.lambda));
    out.push_str(&format!("k_lambda (dim {}):\n", report.k.dim()));
    out.push_str(&render_subspace(&report.k, basis_names));
    out.push_str(&format!("p_lambda (dim {}):\n", report.p.dim()));
    out.push_str(&render_subspace(&report.p, basis_names));
    let chi: Vec<String> = report
        .chi_on_p_basis
        .iter()
        .map(|p| p.to_string())
        .collect();
    out.push_str(&format!(
        "chi_lambda on the basis of p: [{}]\n",
        chi.join(", ")
    ));
    out.push_str(&format!(
        "orbit direction V (dim {}):\n",
        report.orbit_v.dim()
    ));
    out.push_str(&render_subspace(&report.orbit_v, basis_names));
    out.push_str(&format!("duality p = V^perp: {}\n", report.duality_ok));
    out.push_str("L_lambda membership:\n");
    for (desc, member) in &report.l_lambda_samples {
        out.push_str(&format!("  {desc}: {member}\n"));
    }
    out
}

pub struct QuasiOrbitOutput {
    pub key1: QuasiOrbitKey,
    pub key2: QuasiOrbitKey,
    pub same: bool,
}

/// `quasiorbit`: compute both keys and the verdict.
pub fn cmd_quasiorbit(
    system_path: &Path,
    lambda1_path: &Path,
    lambda2_path: &Path,
) -> Result<QuasiOrbitOutput> {
    let (system, _) = load_system(system_path)?;
    let l1 = load_lambda(lambda1_path)?;
    let l2 = load_lambda(lambda2_path)?;
    let key1 = chars::quasi_orbit_key(&l1, &system)?;
    let key2 = chars::quasi_orbit_key(&l2, &system)?;
    let same = chars::same_quasi_orbit(&l1, &l2, &system)?;
    Ok(QuasiOrbitOutput { key1, key2, same })
}

/// `verify`: run the seeded suites; the caller maps failures to exit 4.
pub fn cmd_verify(system_path: &Path, suite: Suite, seed: u64) -> Result<VerifyDocument> {
    let (system, _) = load_system(system_path)?;
    let checks = run_suite(&system, suite, seed);
    let passed = checks.iter().filter(|c| c.passed()).count();
    let failed = checks.len() - passed;
    let suite_name = match suite {
        Suite::Core => "core",
        Suite::Traces => "traces",
        Suite::Duality => "duality",
        Suite::All => "all",
    };
    Ok(VerifyDocument {
        tool_version: tool_version(),
        suite: suite_name.to_string(),
        seed,
        passed,
        failed,
        checks,
    })
}

/// Pretty canonical JSON plus a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    text.push('\n');
    text
}

/// `catalog`: write the system file, one λ file per labeled character, and
/// the expected classify report for each (computed with the default seed,
/// which is what `classify` uses when none is given).
pub fn cmd_catalog(name: &str, emit_dir: &Path) -> Result<Vec<String>> {
    let fixture = catalog::by_name(name)?;
    std::fs::create_dir_all(emit_dir)?;
    let mut written = Vec::new();

    let sys_doc = SystemDescription::from_system(&fixture.system, &fixture.basis_names);
    let sys_path = emit_dir.join(format!("{name}_system.json"));
    std::fs::write(&sys_path, to_canonical_json(&sys_doc))?;
    written.push(sys_path.display().to_string());

    for (lname, lambda) in &fixture.lambdas {
        let lpath = emit_dir.join(format!("{name}_lambda_{lname}.json"));
        std::fs::write(&lpath, to_canonical_json(lambda))?;
        written.push(lpath.display().to_string());

        let mut rng = sample::rng_from_seed(DEFAULT_SEED);
        let elements = sample::membership_samples(&fixture.system, DEFAULT_SAMPLES, &mut rng);
        let report = chars::classify(lambda, &fixture.system, &elements)?;
        let doc = ReportDocument {
            tool_version: tool_version(),
            seed: DEFAULT_SEED,
            report,
        };
        let rpath = emit_dir.join(format!("{name}_expected_{lname}.json"));
        std::fs::write(&rpath, to_canonical_json(&doc))?;
        written.push(rpath.display().to_string());
    }
    Ok(written)
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 8;

/// Replays a fixture's expected table against the engine; returns every
/// discrepancy (empty = the fixture reproduces exactly).
pub fn replay_fixture(fixture: &CatalogFixture) -> Vec<String> {
    use crate::catalog::SampleElement;
    use crate::group::{central_element, one_param};
    let mut problems = Vec::new();
    for case in &fixture.expected {
        let lambda = fixture.lambda(&case.lambda_name);
        let k = match chars::compute_k(lambda, &fixture.system) {
            Ok(k) => k,
            Err(e) => {
                problems.push(format!("{}: {e}", case.lambda_name));
                continue;
            }
        };
        let p = chars::compute_p(lambda, &fixture.system).expect("dims match");
        if k.dim() != case.k_dim {
            problems.push(format!(
                "{}: k dim {} expected {}",
                case.lambda_name,
                k.dim(),
                case.k_dim
            ));
        }
        if p.dim() != case.p_dim {
            problems.push(format!(
                "{}: p dim {} expected {}",
                case.lambda_name,
                p.dim(),
                case.p_dim
            ));
        }
        for (elem, expected) in &case.memberships {
            let g = match elem {
                SampleElement::Central(label) => {
                    let idx = fixture
                        .system
                        .central()
                        .index_of(label)
                        .expect("fixture label exists");
                    central_element(&fixture.system, idx)
                }
                SampleElement::OneParam(i, t) => one_param(&fixture.system, *i, t),
            };
            let got = chars::in_l_lambda(g.levi().action(), &k);
            if got != *expected {
                problems.push(format!(
                    "{}: membership of {:?} is {got}, expected {expected}",
                    case.lambda_name, elem
                ));
            }
        }
    }
    problems
}

/// Render a quasi-orbit key for the text report.
pub fn render_key(key: &QuasiOrbitKey) -> String {
    let phases: Vec<String> = key.chi_values.iter().map(Phase::to_string).collect();
    format!(
        "p (dim {}), restriction {:?}, phases on basis [{}]",
        key.p.dim(),
        key.restriction,
        phases.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_description_round_trips_through_build() {
        let fx = catalog::heisenberg_system(1);
        let doc = SystemDescription::from_system(&fx.system, &fx.basis_names);
        let text = to_canonical_json(&doc);
        let parsed: SystemDescription = serde_json::from_str(&text).unwrap();
        let (system, names) = parsed.build().unwrap();
        assert_eq!(system.dim(), 3);
        assert_eq!(names, fx.basis_names);
        assert_eq!(system.one_param_gens(), fx.system.one_param_gens());
    }

    #[test]
    fn broken_jacobi_is_a_validation_error_naming_the_triple() {
        let doc = SystemDescription {
            dim: 4,
            basis_names: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            structure: vec![(0, 1, 2, "1/1".into()), (2, 3, 0, "1/1".into())],
            levi_generators: vec![],
            central_table: None,
        };
        match doc.build() {
            Err(Error::Validation(msgs)) => {
                assert!(msgs
                    .iter()
                    .any(|m| m.contains("Jacobi") && m.contains("k=3")));
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn structure_triples_must_be_upper_triangular() {
        let doc = SystemDescription {
            dim: 2,
            basis_names: vec!["a".into(), "b".into()],
            structure: vec![(1, 0, 0, "1/1".into())],
            levi_generators: vec![],
            central_table: None,
        };
        assert!(matches!(doc.build(), Err(Error::Parse(_))));
    }

    #[test]
    fn replay_checks_all_catalog_fixtures() {
        for name in catalog::CATALOG_NAMES {
            let fx = catalog::by_name(name).unwrap();
            let problems = replay_fixture(&fx);
            assert!(problems.is_empty(), "{name}: {problems:?}");
        }
    }

    #[test]
    fn report_document_round_trips() {
        let fx = catalog::abelian_radical_system(catalog::AbelianRep::Standard);
        let mut rng = sample::rng_from_seed(DEFAULT_SEED);
        let elements = sample::membership_samples(&fx.system, 6, &mut rng);
        let report = chars::classify(fx.lambda("e1-star"), &fx.system, &elements).unwrap();
        let doc = ReportDocument {
            tool_version: tool_version(),
            seed: DEFAULT_SEED,
            report,
        };
        let text = to_canonical_json(&doc);
        let back: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }
}
