//! Scenario ingestion, presets, and model persistence.
//!
//! A scenario document names the ambient dimension, observables, context
//! generator lists, propositions ("A in Δ"), and states; loading validates
//! every matrix against its type invariant with field-precise diagnostics.
//! A built model (poset + spectra) can be saved to a checksummed document and
//! loaded back bit-exactly: atom matrices survive the round trip at full
//! precision because floats are written in shortest round-trip decimal form.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::contexts::{ClosurePolicy, Context, ContextPoset};
use crate::error::{Error, Result};
use crate::operators::{
    spectral_decompose, CMat, CVec, DensityState, IntervalUnion, Observable, Projection,
    PureState, Tolerances,
};
use crate::spectrum::SpectralPresheaf;

pub const SCENARIO_SCHEMA_VERSION: u32 = 1;
pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Complex number as `[re, im]`; matrices are row-major lists of rows.
pub type ComplexDoc = [f64; 2];
pub type MatrixDoc = Vec<Vec<ComplexDoc>>;
pub type VectorDoc = Vec<ComplexDoc>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default)]
    pub observables: BTreeMap<String, MatrixDoc>,
    #[serde(default)]
    pub contexts: BTreeMap<String, Vec<GeneratorDoc>>,
    #[serde(default = "default_closure")]
    pub closure: ClosurePolicy,
    #[serde(default)]
    pub propositions: BTreeMap<String, PropositionDoc>,
    #[serde(default)]
    pub states: BTreeMap<String, StateDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportConfig>,
}

fn default_closure() -> ClosurePolicy {
    ClosurePolicy::Subalgebras
}

/// A context generator: the name of a declared observable (contributing its
/// eigenprojections) or an explicit projection matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorDoc {
    Observable(String),
    Projection(MatrixDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropositionDoc {
    pub observable: String,
    pub intervals: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pure: Option<VectorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<MatrixDoc>,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_num: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_cluster: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_meas: Option<f64>,
}

/// Default sampling configuration for property-suite commands.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_samples() -> u32 {
    100
}

fn default_seed() -> u64 {
    42
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            samples: default_samples(),
            seed: default_seed(),
        }
    }
}

pub fn matrix_to_doc(m: &CMat) -> MatrixDoc {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn vector_to_doc(v: &CVec) -> VectorDoc {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn matrix_from_doc(doc: &MatrixDoc, dim: usize, path: &str) -> Result<CMat> {
    if doc.len() != dim || doc.iter().any(|row| row.len() != dim) {
        return Err(Error::validation(path, format!("expected a {dim}x{dim} matrix")));
    }
    Ok(CMat::from_fn(dim, dim, |i, j| {
        Complex64::new(doc[i][j][0], doc[i][j][1])
    }))
}

fn vector_from_doc(doc: &VectorDoc, dim: usize, path: &str) -> Result<CVec> {
    if doc.len() != dim {
        return Err(Error::validation(path, format!("expected a length-{dim} vector")));
    }
    Ok(CVec::from_iterator(
        dim,
        doc.iter().map(|e| Complex64::new(e[0], e[1])),
    ))
}

/// A named proposition "A ∈ Δ".
#[derive(Debug, Clone)]
pub struct Proposition {
    pub observable: String,
    pub intervals: IntervalUnion,
}

/// A named state: pure vector or density matrix.
#[derive(Debug, Clone)]
pub enum StateSpec {
    Pure(PureState),
    Density(DensityState),
}

impl StateSpec {
    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            StateSpec::Pure(p) => Some(p),
            StateSpec::Density(_) => None,
        }
    }

    pub fn density(&self) -> DensityState {
        match self {
            StateSpec::Pure(p) => DensityState::from_pure(p),
            StateSpec::Density(d) => d.clone(),
        }
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub dim: usize,
    pub observables: BTreeMap<String, Observable>,
    pub generating_contexts: Vec<Context>,
    pub closure: ClosurePolicy,
    pub propositions: BTreeMap<String, Proposition>,
    pub states: BTreeMap<String, StateSpec>,
    pub tolerances: Tolerances,
    pub report: ReportConfig,
    doc: ScenarioDoc,
}

impl Scenario {
    /// The document this scenario was validated from (used to embed the
    /// source in model files).
    pub fn doc(&self) -> &ScenarioDoc {
        &self.doc
    }

    pub fn from_doc(doc: ScenarioDoc) -> Result<Self> {
        if doc.schema_version != SCENARIO_SCHEMA_VERSION {
            return Err(Error::SchemaVersion(doc.schema_version));
        }
        if doc.dim < 2 {
            return Err(Error::validation("dim", "dimension must be at least 2"));
        }
        let mut tol = Tolerances::default();
        if let Some(t) = &doc.tolerances {
            if let Some(v) = t.eps_num {
                tol.eps_num = v;
            }
            if let Some(v) = t.eps_cluster {
                tol.eps_cluster = v;
            }
            if let Some(v) = t.eps_meas {
                tol.eps_meas = v;
            }
        }

        let mut observables = BTreeMap::new();
        for (name, mdoc) in &doc.observables {
            let path = format!("observables.{name}");
            let m = matrix_from_doc(mdoc, doc.dim, &path)?;
            let obs = Observable::new_with(m, &tol)
                .map_err(|e| Error::validation(&path, e.to_string()))?;
            observables.insert(name.clone(), obs);
        }

        if doc.contexts.is_empty() {
            return Err(Error::validation("contexts", "at least one context is required"));
        }
        let mut generating_contexts = Vec::new();
        for (name, gens) in &doc.contexts {
            let path = format!("contexts.{name}");
            if gens.is_empty() {
                return Err(Error::validation(&path, "empty generator list"));
            }
            let mut projections = Vec::new();
            for (k, g) in gens.iter().enumerate() {
                match g {
                    GeneratorDoc::Observable(obs_name) => {
                        let obs = observables.get(obs_name).ok_or_else(|| {
                            Error::validation(
                                format!("{path}[{k}]"),
                                format!("unknown observable `{obs_name}`"),
                            )
                        })?;
                        for (_, e) in spectral_decompose(obs, &tol) {
                            projections.push(e);
                        }
                    }
                    GeneratorDoc::Projection(mdoc) => {
                        let m = matrix_from_doc(mdoc, doc.dim, &format!("{path}[{k}]"))?;
                        let p = Projection::new_with(m, &tol).map_err(|e| {
                            Error::validation(format!("{path}[{k}]"), e.to_string())
                        })?;
                        projections.push(p);
                    }
                }
            }
            let ctx = Context::generate(name.clone(), &projections, &tol)
                .map_err(|e| Error::validation(&path, e.to_string()))?;
            generating_contexts.push(ctx);
        }

        let mut propositions = BTreeMap::new();
        for (name, pdoc) in &doc.propositions {
            let path = format!("propositions.{name}");
            if !observables.contains_key(&pdoc.observable) {
                return Err(Error::validation(
                    &path,
                    format!("unknown observable `{}`", pdoc.observable),
                ));
            }
            let intervals = IntervalUnion::new(
                pdoc.intervals.iter().map(|&[a, b]| (a, b)).collect(),
            )
            .map_err(|e| Error::validation(&path, e.to_string()))?;
            propositions.insert(
                name.clone(),
                Proposition {
                    observable: pdoc.observable.clone(),
                    intervals,
                },
            );
        }

        let mut states = BTreeMap::new();
        for (name, sdoc) in &doc.states {
            let path = format!("states.{name}");
            let spec = match (&sdoc.pure, &sdoc.density) {
                (Some(v), None) => {
                    let vec = vector_from_doc(v, doc.dim, &path)?;
                    StateSpec::Pure(
                        PureState::new_with(vec, &tol)
                            .map_err(|e| Error::validation(&path, e.to_string()))?,
                    )
                }
                (None, Some(m)) => {
                    let mat = matrix_from_doc(m, doc.dim, &path)?;
                    StateSpec::Density(
                        DensityState::new_with(mat, tol.eps_num)
                            .map_err(|e| Error::validation(&path, e.to_string()))?,
                    )
                }
                _ => {
                    return Err(Error::validation(
                        &path,
                        "exactly one of `pure` or `density` must be given",
                    ))
                }
            };
            states.insert(name.clone(), spec);
        }

        Ok(Scenario {
            name: doc.name.clone().unwrap_or_else(|| "unnamed".to_string()),
            dim: doc.dim,
            observables,
            generating_contexts,
            closure: doc.closure,
            propositions,
            states,
            tolerances: tol,
            report: doc.report.unwrap_or_default(),
            doc,
        })
    }
}

/// Parses and validates a scenario document.
pub fn load_scenario(text: &str) -> Result<Scenario> {
    let doc: ScenarioDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Scenario::from_doc(doc)
}

/// Serializes a scenario back to its document form.
pub fn scenario_to_string(s: &Scenario) -> String {
    serde_json::to_string_pretty(s.doc()).expect("scenario documents serialize")
}

// ---------------------------------------------------------------------------
// presets

fn pauli(name: char) -> CMat {
    let c = Complex64::new;
    match name {
        'I' => CMat::identity(2, 2),
        'X' => CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        'Y' => CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        'Z' => CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        _ => unreachable!("unknown Pauli"),
    }
}

fn pauli_pair(a: char, b: char) -> MatrixDoc {
    matrix_to_doc(&pauli(a).kronecker(&pauli(b)))
}

fn diag_doc(entries: &[f64]) -> MatrixDoc {
    let n = entries.len();
    let m = CMat::from_fn(n, n, |i, j| {
        Complex64::new(if i == j { entries[i] } else { 0.0 }, 0.0)
    });
    matrix_to_doc(&m)
}

fn qubit_zx_doc() -> ScenarioDoc {
    let s = 1.0 / 2.0_f64.sqrt();
    ScenarioDoc {
        schema_version: SCENARIO_SCHEMA_VERSION,
        name: Some("qubit-zx".into()),
        dim: 2,
        observables: [
            ("Sz".to_string(), diag_doc(&[1.0, -1.0])),
            ("Sx".to_string(), pauli_pair_to_single('X')),
        ]
        .into_iter()
        .collect(),
        contexts: [
            ("Vz".to_string(), vec![GeneratorDoc::Observable("Sz".into())]),
            ("Vx".to_string(), vec![GeneratorDoc::Observable("Sx".into())]),
        ]
        .into_iter()
        .collect(),
        closure: ClosurePolicy::Subalgebras,
        propositions: [
            ("SzUp", "Sz", [1.0, 1.0]),
            ("SzDown", "Sz", [-1.0, -1.0]),
            ("SxUp", "Sx", [1.0, 1.0]),
            ("SxDown", "Sx", [-1.0, -1.0]),
        ]
        .into_iter()
        .map(|(n, o, iv)| {
            (
                n.to_string(),
                PropositionDoc {
                    observable: o.to_string(),
                    intervals: vec![iv],
                },
            )
        })
        .collect(),
        states: [
            (
                "up".to_string(),
                StateDoc {
                    pure: Some(vec![[1.0, 0.0], [0.0, 0.0]]),
                    density: None,
                },
            ),
            (
                "down".to_string(),
                StateDoc {
                    pure: Some(vec![[0.0, 0.0], [1.0, 0.0]]),
                    density: None,
                },
            ),
            (
                "plus".to_string(),
                StateDoc {
                    pure: Some(vec![[s, 0.0], [s, 0.0]]),
                    density: None,
                },
            ),
            (
                "mixed".to_string(),
                StateDoc {
                    pure: None,
                    density: Some(diag_doc(&[0.5, 0.5])),
                },
            ),
        ]
        .into_iter()
        .collect(),
        tolerances: None,
        report: None,
    }
}

fn pauli_pair_to_single(p: char) -> MatrixDoc {
    matrix_to_doc(&pauli(p))
}

fn qutrit_chain_doc() -> ScenarioDoc {
    ScenarioDoc {
        schema_version: SCENARIO_SCHEMA_VERSION,
        name: Some("qutrit-chain".into()),
        dim: 3,
        observables: [("A".to_string(), diag_doc(&[1.0, 2.0, 3.0]))]
            .into_iter()
            .collect(),
        contexts: [("V3".to_string(), vec![GeneratorDoc::Observable("A".into())])]
            .into_iter()
            .collect(),
        closure: ClosurePolicy::Subalgebras,
        propositions: [
            ("A1", vec![[1.0, 1.0]]),
            ("A23", vec![[2.0, 3.0]]),
            ("A12", vec![[1.0, 2.0]]),
        ]
        .into_iter()
        .map(|(n, ivs)| {
            (
                n.to_string(),
                PropositionDoc {
                    observable: "A".to_string(),
                    intervals: ivs,
                },
            )
        })
        .collect(),
        states: [
            (
                "e1".to_string(),
                StateDoc {
                    pure: Some(vec![[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]),
                    density: None,
                },
            ),
            (
                "e2".to_string(),
                StateDoc {
                    pure: Some(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]),
                    density: None,
                },
            ),
            (
                "e3".to_string(),
                StateDoc {
                    pure: Some(vec![[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]),
                    density: None,
                },
            ),
            (
                "mix".to_string(),
                StateDoc {
                    pure: None,
                    density: Some(diag_doc(&[0.5, 0.3, 0.2])),
                },
            ),
        ]
        .into_iter()
        .collect(),
        tolerances: None,
        report: None,
    }
}

fn mermin_square_doc(name: &str, report: Option<ReportConfig>) -> ScenarioDoc {
    let s = 1.0 / 2.0_f64.sqrt();
    let observables: BTreeMap<String, MatrixDoc> = [
        ("IZ", ('I', 'Z')),
        ("ZI", ('Z', 'I')),
        ("ZZ", ('Z', 'Z')),
        ("XI", ('X', 'I')),
        ("IX", ('I', 'X')),
        ("XX", ('X', 'X')),
        ("XZ", ('X', 'Z')),
        ("ZX", ('Z', 'X')),
        ("YY", ('Y', 'Y')),
    ]
    .into_iter()
    .map(|(n, (a, b))| (n.to_string(), pauli_pair(a, b)))
    .collect();
    let ctx = |names: [&str; 3]| {
        names
            .into_iter()
            .map(|n| GeneratorDoc::Observable(n.to_string()))
            .collect::<Vec<_>>()
    };
    ScenarioDoc {
        schema_version: SCENARIO_SCHEMA_VERSION,
        name: Some(name.into()),
        dim: 4,
        observables,
        contexts: [
            ("R1".to_string(), ctx(["IZ", "ZI", "ZZ"])),
            ("R2".to_string(), ctx(["XI", "IX", "XX"])),
            ("R3".to_string(), ctx(["XZ", "ZX", "YY"])),
            ("C1".to_string(), ctx(["IZ", "XI", "XZ"])),
            ("C2".to_string(), ctx(["ZI", "IX", "ZX"])),
            ("C3".to_string(), ctx(["ZZ", "XX", "YY"])),
        ]
        .into_iter()
        .collect(),
        closure: ClosurePolicy::Subalgebras,
        propositions: [
            ("ZZplus", "ZZ", [1.0, 1.0]),
            ("XXplus", "XX", [1.0, 1.0]),
            ("YYplus", "YY", [1.0, 1.0]),
        ]
        .into_iter()
        .map(|(n, o, iv)| {
            (
                n.to_string(),
                PropositionDoc {
                    observable: o.to_string(),
                    intervals: vec![iv],
                },
            )
        })
        .collect(),
        states: [(
            "bell".to_string(),
            StateDoc {
                pure: Some(vec![[s, 0.0], [0.0, 0.0], [0.0, 0.0], [s, 0.0]]),
                density: None,
            },
        )]
        .into_iter()
        .collect(),
        tolerances: None,
        report,
    }
}

pub const PRESET_NAMES: [&str; 4] = ["qubit-zx", "qutrit-chain", "mermin-square", "ks-demo"];

/// Built-in scenarios: `qubit-zx`, `qutrit-chain`, `mermin-square`, `ks-demo`.
pub fn preset(name: &str) -> Result<Scenario> {
    let doc = match name {
        "qubit-zx" => qubit_zx_doc(),
        "qutrit-chain" => qutrit_chain_doc(),
        "mermin-square" => mermin_square_doc("mermin-square", None),
        "ks-demo" => mermin_square_doc(
            "ks-demo",
            Some(ReportConfig {
                samples: 100,
                seed: 42,
            }),
        ),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Scenario::from_doc(doc)
}

// ---------------------------------------------------------------------------
// model persistence

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    schema_version: u32,
    checksum: String,
    payload: ModelPayload,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelPayload {
    scenario: ScenarioDoc,
    dim: usize,
    contexts: Vec<ContextDoc>,
    /// strict inclusion pairs (lower, upper), sorted
    order: Vec<(String, String)>,
    /// characters per context
    spectra: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextDoc {
    id: String,
    atoms: Vec<MatrixDoc>,
}

fn checksum_of(payload: &ModelPayload) -> String {
    let bytes = serde_json::to_vec(payload).expect("payload serializes");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    format!("{:x}", hasher.finalize())
}

/// A built model: the validated scenario together with the spectral presheaf
/// over its context poset.
#[derive(Debug, Clone)]
pub struct Model {
    pub scenario: Scenario,
    pub presheaf: SpectralPresheaf,
}

impl Model {
    pub fn build(scenario: Scenario) -> Result<Model> {
        let poset = ContextPoset::build(
            &scenario.generating_contexts,
            scenario.closure,
            &scenario.tolerances,
        )?;
        Ok(Model {
            scenario,
            presheaf: SpectralPresheaf::new(poset),
        })
    }

    fn payload(&self) -> ModelPayload {
        let poset = self.presheaf.poset();
        let contexts = poset
            .contexts()
            .iter()
            .map(|c| ContextDoc {
                id: c.id().to_string(),
                atoms: c.atoms().iter().map(|a| matrix_to_doc(a.matrix())).collect(),
            })
            .collect();
        let mut order = Vec::new();
        for lower in 0..poset.len() {
            for upper in 0..poset.len() {
                if lower != upper && poset.is_below_idx(lower, upper) {
                    order.push((
                        poset.context_at(lower).id().to_string(),
                        poset.context_at(upper).id().to_string(),
                    ));
                }
            }
        }
        order.sort();
        let spectra = poset
            .contexts()
            .iter()
            .map(|c| (c.id().to_string(), c.num_atoms()))
            .collect();
        ModelPayload {
            scenario: self.scenario.doc().clone(),
            dim: poset.dim(),
            contexts,
            order,
            spectra,
        }
    }

    /// Serializes the model to its checksummed document.
    pub fn to_document(&self) -> String {
        let payload = self.payload();
        let doc = ModelDoc {
            schema_version: MODEL_SCHEMA_VERSION,
            checksum: checksum_of(&payload),
            payload,
        };
        serde_json::to_string_pretty(&doc).expect("model documents serialize")
    }

    /// Parses a model document, verifying schema version, checksum, and the
    /// stored order/spectra against the reconstructed poset.
    pub fn from_document(text: &str) -> Result<Model> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::SchemaVersion(doc.schema_version));
        }
        if checksum_of(&doc.payload) != doc.checksum {
            return Err(Error::Integrity);
        }
        let scenario = Scenario::from_doc(doc.payload.scenario.clone())?;
        let tol = scenario.tolerances;
        let mut contexts = Vec::new();
        for cdoc in &doc.payload.contexts {
            let atoms: Vec<Projection> = cdoc
                .atoms
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let mat = matrix_from_doc(m, doc.payload.dim, &format!("{}[{k}]", cdoc.id))?;
                    Projection::new_with(mat, &tol)
                        .map_err(|e| Error::validation(format!("{}[{k}]", cdoc.id), e.to_string()))
                })
                .collect::<Result<_>>()?;
            contexts.push(Context::from_atoms(cdoc.id.clone(), atoms, &tol)?);
        }
        let poset = ContextPoset::from_contexts(contexts, &tol)?;

        // the stored order and spectra must match what the atoms induce
        let mut order = Vec::new();
        for lower in 0..poset.len() {
            for upper in 0..poset.len() {
                if lower != upper && poset.is_below_idx(lower, upper) {
                    order.push((
                        poset.context_at(lower).id().to_string(),
                        poset.context_at(upper).id().to_string(),
                    ));
                }
            }
        }
        order.sort();
        if order != doc.payload.order {
            return Err(Error::Integrity);
        }
        for ctx in poset.contexts() {
            if doc.payload.spectra.get(ctx.id()) != Some(&ctx.num_atoms()) {
                return Err(Error::Integrity);
            }
        }

        Ok(Model {
            scenario,
            presheaf: SpectralPresheaf::new(poset),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::global_sections;

    #[test]
    fn minimal_scenario_loads() {
        let text = r#"{
            "schema_version": 1,
            "dim": 2,
            "observables": { "Sz": [[[1,0],[0,0]],[[0,0],[-1,0]]] },
            "contexts": { "Vz": ["Sz"] }
        }"#;
        let s = load_scenario(text).unwrap();
        assert_eq!(s.dim, 2);
        assert_eq!(s.generating_contexts.len(), 1);
    }

    #[test]
    fn non_hermitian_observable_is_rejected_with_path() {
        let text = r#"{
            "schema_version": 1,
            "dim": 2,
            "observables": { "bad": [[[0,0],[1,0]],[[2,0],[0,0]]] },
            "contexts": { "V": ["bad"] }
        }"#;
        match load_scenario(text) {
            Err(Error::Validation { path, .. }) => assert_eq!(path, "observables.bad"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_observable_reference_is_rejected() {
        let text = r#"{
            "schema_version": 1,
            "dim": 2,
            "contexts": { "V": ["nope"] }
        }"#;
        match load_scenario(text) {
            Err(Error::Validation { path, reason }) => {
                assert_eq!(path, "contexts.V[0]");
                assert!(reason.contains("nope"));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn future_schema_version_is_rejected() {
        let text = r#"{ "schema_version": 99, "dim": 2, "contexts": {} }"#;
        assert!(matches!(load_scenario(text), Err(Error::SchemaVersion(99))));
    }

    #[test]
    fn preset_shapes() {
        assert_eq!(preset("qubit-zx").unwrap().dim, 2);
        assert_eq!(preset("mermin-square").unwrap().generating_contexts.len(), 6);
        let model = Model::build(preset("qutrit-chain").unwrap()).unwrap();
        assert_eq!(model.presheaf.poset().len(), 4);
        assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn qubit_preset_poset() {
        let model = Model::build(preset("qubit-zx").unwrap()).unwrap();
        assert_eq!(model.presheaf.poset().len(), 2);
        assert_eq!(model.presheaf.poset().strict_pairs(), 0);
    }

    #[test]
    fn model_round_trip_poset_b() {
        let model = Model::build(preset("qutrit-chain").unwrap()).unwrap();
        let text = model.to_document();
        let reloaded = Model::from_document(&text).unwrap();
        assert_eq!(
            model.presheaf.poset().len(),
            reloaded.presheaf.poset().len()
        );
        for a in model.presheaf.poset().contexts() {
            let b = reloaded.presheaf.poset().context(a.id()).unwrap();
            for (x, y) in a.atoms().iter().zip(b.atoms()) {
                assert_eq!(x.matrix(), y.matrix(), "atoms reload bit-exactly");
            }
        }
        for a in model.presheaf.poset().contexts() {
            for b in model.presheaf.poset().contexts() {
                assert_eq!(
                    model.presheaf.poset().is_below(a.id(), b.id()).unwrap(),
                    reloaded.presheaf.poset().is_below(a.id(), b.id()).unwrap()
                );
            }
        }
        // determinism: same scenario -> bit-identical documents
        let again = Model::build(preset("qutrit-chain").unwrap()).unwrap();
        assert_eq!(text, again.to_document());
        assert_eq!(text, reloaded.to_document());
    }

    #[test]
    fn model_round_trip_preserves_global_sections() {
        let model = Model::build(preset("mermin-square").unwrap()).unwrap();
        let before = global_sections(&model.presheaf).count;
        let reloaded = Model::from_document(&model.to_document()).unwrap();
        assert_eq!(global_sections(&reloaded.presheaf).count, before);
    }

    #[test]
    fn tampered_document_fails_integrity() {
        let model = Model::build(preset("qubit-zx").unwrap()).unwrap();
        let text = model.to_document();
        let tampered = text.replacen("\"dim\": 2", "\"dim\": 3", 1);
        assert!(matches!(
            Model::from_document(&tampered),
            Err(Error::Integrity)
        ));
        // truncation breaks the document outright
        let truncated = &text[..text.len() / 2];
        assert!(Model::from_document(truncated).is_err());
    }
}

