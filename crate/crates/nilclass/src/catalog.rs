//! Catalog files and their resolution into symbolic objects.
//!
//! A catalog is a directory of UTF-8 JSON files, each holding one entry or an
//! array of entries. Loading parses every scalar expression, resolves every
//! cross-reference, and rejects dimension mismatches, so a loaded catalog is
//! fully checkable without further validation. Indices in files are 1-based.
//!
//! Entries may carry an `erratum` annotation: a free-text justification plus
//! a patch object whose top-level fields replace the entry's before parsing.
//! The verifier downgrades a passing patched entry to "pass-with-erratum",
//! keeping the discrepancy visible instead of burying it.

use crate::algebra::AlgebraPresentation;
use crate::degeneration::ClosedSetSpec;
use crate::linalg::Matrix;
use crate::scalars::{parse_expression, Context, GaussianRational, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

/// The path parameter every degeneration basis is written in.
pub const PATH_VAR: &str = "s";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawProduct {
    left: usize,
    right: usize,
    components: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
struct RawExpected {
    #[serde(skip_serializing_if = "Option::is_none")]
    nilpotency_class: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ann_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    non_nilpotent: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawAlgebra {
    name: String,
    dimension: usize,
    #[serde(default)]
    parameters: Vec<String>,
    #[serde(default)]
    variety_tags: Vec<String>,
    products: Vec<RawProduct>,
    #[serde(default)]
    expected: RawExpected,
    #[serde(skip_serializing_if = "Option::is_none")]
    central_quotient: Option<String>,
    #[serde(default)]
    provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawEndpoint {
    name: String,
    #[serde(default)]
    parameter_values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawReparam {
    t_of_s: String,
    #[serde(default)]
    original_t_form_note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawDegeneration {
    source: RawEndpoint,
    reparametrization: RawReparam,
    limit_point: String,
    target: RawEndpoint,
    basis: Vec<Vec<String>>,
    #[serde(default)]
    aux_parameters: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default)]
    provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawFlag {
    p: usize,
    q: usize,
    r: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawNonDegeneration {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    sources: Vec<String>,
    targets: Vec<String>,
    #[serde(default)]
    flag_containments: Vec<RawFlag>,
    #[serde(default)]
    equations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    external_reason: Option<String>,
    #[serde(default)]
    provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawCohomologyDims {
    #[serde(rename = "Z2", skip_serializing_if = "Option::is_none")]
    z2: Option<usize>,
    #[serde(rename = "B2", skip_serializing_if = "Option::is_none")]
    b2: Option<usize>,
    #[serde(rename = "H2")]
    h2: usize,
    #[serde(rename = "H2_sym", skip_serializing_if = "Option::is_none")]
    h2_sym: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawCohomologyExpectation {
    algebra: String,
    variety: String,
    dims: RawCohomologyDims,
    #[serde(default)]
    listed_classes: Vec<Vec<String>>,
    #[serde(default)]
    provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawExtensionExpectation {
    base: String,
    cocycle: Vec<Vec<String>>,
    result: String,
    #[serde(default)]
    provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawCocycleStep {
    base: String,
    name: String,
    #[serde(default)]
    parameters: Vec<String>,
    theta_in: String,
    automorphism: Vec<Vec<String>>,
    theta_out: String,
    #[serde(default)]
    provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawDimensionExpectation {
    name: String,
    expected: usize,
    algebras: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(default)]
    provenance: String,
}

/// A loaded algebra entry: the symbolic presentation plus its expectations.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraEntry {
    pub presentation: AlgebraPresentation,
    pub variety_tags: Vec<String>,
    pub expected_class: Option<usize>,
    pub expected_non_nilpotent: bool,
    pub expected_ann_dim: Option<usize>,
    pub central_quotient: Option<String>,
    pub provenance: String,
    pub erratum: Option<String>,
}

/// A degeneration certificate with every expression parsed. The basis and
/// source values live over the certificate context ([`PATH_VAR`] plus the
/// auxiliary parameters); target values live over the auxiliary part.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerationEntry {
    pub id: String,
    pub source_name: String,
    pub source_values: BTreeMap<String, Scalar>,
    pub t_of_s: String,
    pub note: String,
    pub limit_point: GaussianRational,
    pub target_name: String,
    pub target_values: BTreeMap<String, Scalar>,
    pub basis: Matrix,
    pub cert_ctx: Context,
    pub aux_ctx: Context,
    pub provenance: String,
    pub erratum: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonDegenerationEntry {
    pub id: String,
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub spec: ClosedSetSpec,
    pub external_reason: Option<String>,
    pub provenance: String,
    pub erratum: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyExpectationEntry {
    pub algebra: String,
    pub variety: String,
    pub z2: Option<usize>,
    pub b2: Option<usize>,
    pub h2: usize,
    pub h2_sym: Option<usize>,
    /// Each class is a sum of the listed component expressions.
    pub listed_classes: Vec<Vec<String>>,
    pub provenance: String,
    pub erratum: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionExpectationEntry {
    pub base: String,
    /// Outer index: extension component; inner strings are summed.
    pub cocycle: Vec<Vec<String>>,
    pub result: String,
    pub provenance: String,
    pub erratum: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocycleStepEntry {
    pub base: String,
    pub name: String,
    pub parameters: Vec<String>,
    pub theta_in: String,
    /// Column j is the image of e_j in coordinates.
    pub automorphism: Vec<Vec<String>>,
    pub theta_out: String,
    pub provenance: String,
    pub erratum: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionExpectationEntry {
    pub name: String,
    pub expected: usize,
    pub algebras: Vec<String>,
    pub samples: usize,
    pub provenance: String,
    pub erratum: Option<String>,
}

/// One resolved catalog entry.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogEntry {
    Algebra(AlgebraEntry),
    Degeneration(DegenerationEntry),
    NonDegeneration(NonDegenerationEntry),
    CohomologyExpectation(CohomologyExpectationEntry),
    ExtensionExpectation(ExtensionExpectationEntry),
    CocycleStep(CocycleStepEntry),
    DimensionExpectation(DimensionExpectationEntry),
}

impl CatalogEntry {
    pub fn kind(&self) -> &'static str {
        match self {
            CatalogEntry::Algebra(_) => "algebra",
            CatalogEntry::Degeneration(_) => "degeneration",
            CatalogEntry::NonDegeneration(_) => "non-degeneration",
            CatalogEntry::CohomologyExpectation(_) => "cohomology-expectation",
            CatalogEntry::ExtensionExpectation(_) => "extension-expectation",
            CatalogEntry::CocycleStep(_) => "cocycle-step",
            CatalogEntry::DimensionExpectation(_) => "dimension-expectation",
        }
    }

    /// Stable identity used for sorting and duplicate detection.
    pub fn id(&self) -> String {
        match self {
            CatalogEntry::Algebra(a) => format!("algebra:{}", a.presentation.name()),
            CatalogEntry::Degeneration(d) => d.id.clone(),
            CatalogEntry::NonDegeneration(n) => n.id.clone(),
            CatalogEntry::CohomologyExpectation(c) => {
                format!("cohomology:{}:{}", c.algebra, c.variety)
            }
            CatalogEntry::ExtensionExpectation(e) => format!("extension:{}:{}", e.base, e.result),
            CatalogEntry::CocycleStep(c) => format!("cocycle-step:{}:{}", c.base, c.name),
            CatalogEntry::DimensionExpectation(d) => format!("dimension:{}", d.name),
        }
    }

    pub fn erratum(&self) -> Option<&str> {
        match self {
            CatalogEntry::Algebra(a) => a.erratum.as_deref(),
            CatalogEntry::Degeneration(d) => d.erratum.as_deref(),
            CatalogEntry::NonDegeneration(n) => n.erratum.as_deref(),
            CatalogEntry::CohomologyExpectation(c) => c.erratum.as_deref(),
            CatalogEntry::ExtensionExpectation(e) => e.erratum.as_deref(),
            CatalogEntry::CocycleStep(c) => c.erratum.as_deref(),
            CatalogEntry::DimensionExpectation(d) => d.erratum.as_deref(),
        }
    }
}

/// A fully resolved catalog: algebras by name plus every entry, sorted by id.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    algebras: BTreeMap<String, usize>,
}

impl Catalog {
    pub fn algebra(&self, name: &str) -> Option<&AlgebraEntry> {
        self.algebras.get(name).map(|&i| match &self.entries[i] {
            CatalogEntry::Algebra(a) => a,
            _ => unreachable!("algebra index points at a non-algebra entry"),
        })
    }

    pub fn algebra_names(&self) -> Vec<&str> {
        self.algebras.keys().map(|s| s.as_str()).collect()
    }

    /// Builds a catalog from resolved entries, with the same id-uniqueness
    /// and cross-reference validation as loading from disk.
    pub fn from_entries(entries: Vec<CatalogEntry>) -> Result<Catalog, String> {
        let mut catalog = Catalog { entries, algebras: BTreeMap::new() };
        catalog.rebuild_index()?;
        check_references(&catalog)?;
        Ok(catalog)
    }

    fn rebuild_index(&mut self) -> Result<(), String> {
        self.entries.sort_by_key(|e| e.id());
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(e.id()) {
                return Err(format!("duplicate entry id {}", e.id()));
            }
        }
        self.algebras.clear();
        for (i, e) in self.entries.iter().enumerate() {
            if let CatalogEntry::Algebra(a) = e {
                self.algebras.insert(a.presentation.name().to_string(), i);
            }
        }
        Ok(())
    }
}

fn parse_all(exprs: &[String], ctx: &Context, what: &str) -> Result<Vec<Scalar>, String> {
    exprs
        .iter()
        .map(|e| parse_expression(e, ctx).map_err(|err| format!("{what}: in {e:?}: {err}")))
        .collect()
}

fn constant_expr(expr: &str, what: &str) -> Result<GaussianRational, String> {
    let empty = Context::empty();
    let s = parse_expression(expr, &empty).map_err(|e| format!("{what}: {e}"))?;
    s.as_constant().ok_or_else(|| format!("{what}: {expr:?} is not a constant"))
}

fn resolve_algebra(raw: RawAlgebra, erratum: Option<String>) -> Result<CatalogEntry, String> {
    let ctx = Context::new(&raw.parameters.iter().map(|s| s.as_str()).collect::<Vec<_>>())
        .map_err(|e| format!("algebra {}: {e}", raw.name))?;
    let n = raw.dimension;
    if n == 0 {
        return Err(format!("algebra {}: dimension must be positive", raw.name));
    }
    for tag in &raw.variety_tags {
        if crate::identities::variety_identities(tag).is_none() {
            return Err(format!("algebra {}: unknown variety tag {tag:?}", raw.name));
        }
    }
    let mut a = AlgebraPresentation::zero_product(&raw.name, &ctx, n);
    let mut seen_pairs = BTreeSet::new();
    for p in &raw.products {
        if p.left == 0 || p.right == 0 || p.left > n || p.right > n {
            return Err(format!(
                "algebra {}: product ({},{}) is out of range for dimension {n}",
                raw.name, p.left, p.right
            ));
        }
        if !seen_pairs.insert((p.left, p.right)) {
            return Err(format!(
                "algebra {}: product ({},{}) listed twice",
                raw.name, p.left, p.right
            ));
        }
        for (k_str, expr) in &p.components {
            let k: usize = k_str
                .parse()
                .map_err(|_| format!("algebra {}: component key {k_str:?} is not an index", raw.name))?;
            if k == 0 || k > n {
                return Err(format!(
                    "algebra {}: component e_{k} is out of range for dimension {n}",
                    raw.name
                ));
            }
            let v = parse_expression(expr, &ctx)
                .map_err(|e| format!("algebra {}: product ({},{}): {e}", raw.name, p.left, p.right))?;
            a.set_c(p.left - 1, p.right - 1, k - 1, v);
        }
    }
    Ok(CatalogEntry::Algebra(AlgebraEntry {
        presentation: a,
        variety_tags: raw.variety_tags,
        expected_class: raw.expected.nilpotency_class,
        expected_non_nilpotent: raw.expected.non_nilpotent,
        expected_ann_dim: raw.expected.ann_dim,
        central_quotient: raw.central_quotient,
        provenance: raw.provenance,
        erratum,
    }))
}

fn resolve_degeneration(raw: RawDegeneration, erratum: Option<String>) -> Result<CatalogEntry, String> {
    let mut names: Vec<&str> = vec![PATH_VAR];
    names.extend(raw.aux_parameters.iter().map(|s| s.as_str()));
    let cert_ctx = Context::new(&names).map_err(|e| e.to_string())?;
    let aux_ctx = Context::new(&raw.aux_parameters.iter().map(|s| s.as_str()).collect::<Vec<_>>())
        .map_err(|e| e.to_string())?;
    let id = match &raw.name {
        Some(n) => format!("degeneration:{}:{}:{n}", raw.source.name, raw.target.name),
        None => format!("degeneration:{}:{}", raw.source.name, raw.target.name),
    };
    let mut source_values = BTreeMap::new();
    for (p, e) in &raw.source.parameter_values {
        source_values.insert(
            p.clone(),
            parse_expression(e, &cert_ctx).map_err(|err| format!("{id}: source value {p}: {err}"))?,
        );
    }
    let mut target_values = BTreeMap::new();
    for (p, e) in &raw.target.parameter_values {
        target_values.insert(
            p.clone(),
            parse_expression(e, &aux_ctx).map_err(|err| format!("{id}: target value {p}: {err}"))?,
        );
    }
    let n = raw.basis.len();
    let mut rows = Vec::with_capacity(n);
    for (i, row) in raw.basis.iter().enumerate() {
        if row.len() != n {
            return Err(format!("{id}: basis row {} has {} entries, expected {n}", i + 1, row.len()));
        }
        rows.push(parse_all(row, &cert_ctx, &format!("{id}: basis row {}", i + 1))?);
    }
    let basis = Matrix::from_rows(&cert_ctx, rows);
    let limit_point = constant_expr(&raw.limit_point, &format!("{id}: limit point"))?;
    Ok(CatalogEntry::Degeneration(DegenerationEntry {
        id,
        source_name: raw.source.name,
        source_values,
        t_of_s: raw.reparametrization.t_of_s,
        note: raw.reparametrization.original_t_form_note,
        limit_point,
        target_name: raw.target.name,
        target_values,
        basis,
        cert_ctx,
        aux_ctx,
        provenance: raw.provenance,
        erratum,
    }))
}

fn resolve_nondegeneration(raw: RawNonDegeneration, erratum: Option<String>) -> Result<CatalogEntry, String> {
    let id = match &raw.name {
        Some(n) => format!("non-degeneration:{n}"),
        None => format!(
            "non-degeneration:{}:{}",
            raw.sources.join("+"),
            raw.targets.join("+")
        ),
    };
    Ok(CatalogEntry::NonDegeneration(NonDegenerationEntry {
        id,
        sources: raw.sources,
        targets: raw.targets,
        spec: ClosedSetSpec {
            flags: raw.flag_containments.iter().map(|f| (f.p, f.q, f.r)).collect(),
            equations: raw.equations,
        },
        external_reason: raw.external_reason,
        provenance: raw.provenance,
        erratum,
    }))
}

fn split_erratum(mut v: Value) -> Result<(Value, Option<String>), String> {
    let Some(obj) = v.as_object_mut() else {
        return Err("entry is not a JSON object".into());
    };
    let Some(err) = obj.remove("erratum") else {
        return Ok((v, None));
    };
    let Some(err_obj) = err.as_object() else {
        return Err("erratum must be an object".into());
    };
    let justification = err_obj
        .get("justification")
        .and_then(|j| j.as_str())
        .ok_or_else(|| "erratum requires a free-text justification".to_string())?
        .to_string();
    if justification.trim().is_empty() {
        return Err("erratum justification must be non-empty".into());
    }
    if let Some(patch) = err_obj.get("patch") {
        let Some(patch_obj) = patch.as_object() else {
            return Err("erratum patch must be an object".into());
        };
        for (k, val) in patch_obj {
            obj.insert(k.clone(), val.clone());
        }
    }
    Ok((v, Some(justification)))
}

/// Parses one JSON object into a resolved entry, applying any erratum patch
/// first.
pub fn resolve_entry(value: Value) -> Result<CatalogEntry, String> {
    let (value, erratum) = split_erratum(value)?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| "entry has no \"kind\" field".to_string())?
        .to_string();
    let de = |e: serde_json::Error| format!("{kind} entry: {e}");
    match kind.as_str() {
        "algebra" => resolve_algebra(serde_json::from_value(value).map_err(de)?, erratum),
        "degeneration" => resolve_degeneration(serde_json::from_value(value).map_err(de)?, erratum),
        "non-degeneration" => {
            resolve_nondegeneration(serde_json::from_value(value).map_err(de)?, erratum)
        }
        "cohomology-expectation" => {
            let raw: RawCohomologyExpectation = serde_json::from_value(value).map_err(de)?;
            Ok(CatalogEntry::CohomologyExpectation(CohomologyExpectationEntry {
                algebra: raw.algebra,
                variety: raw.variety,
                z2: raw.dims.z2,
                b2: raw.dims.b2,
                h2: raw.dims.h2,
                h2_sym: raw.dims.h2_sym,
                listed_classes: raw.listed_classes,
                provenance: raw.provenance,
                erratum,
            }))
        }
        "extension-expectation" => {
            let raw: RawExtensionExpectation = serde_json::from_value(value).map_err(de)?;
            if raw.cocycle.is_empty() || raw.cocycle.iter().any(|c| c.is_empty()) {
                return Err(format!("extension {}->{}: empty cocycle", raw.base, raw.result));
            }
            Ok(CatalogEntry::ExtensionExpectation(ExtensionExpectationEntry {
                base: raw.base,
                cocycle: raw.cocycle,
                result: raw.result,
                provenance: raw.provenance,
                erratum,
            }))
        }
        "cocycle-step" => {
            let raw: RawCocycleStep = serde_json::from_value(value).map_err(de)?;
            Ok(CatalogEntry::CocycleStep(CocycleStepEntry {
                base: raw.base,
                name: raw.name,
                parameters: raw.parameters,
                theta_in: raw.theta_in,
                automorphism: raw.automorphism,
                theta_out: raw.theta_out,
                provenance: raw.provenance,
                erratum,
            }))
        }
        "dimension-expectation" => {
            let raw: RawDimensionExpectation = serde_json::from_value(value).map_err(de)?;
            Ok(CatalogEntry::DimensionExpectation(DimensionExpectationEntry {
                name: raw.name,
                expected: raw.expected,
                algebras: raw.algebras,
                samples: raw.samples.unwrap_or(3),
                provenance: raw.provenance,
                erratum,
            }))
        }
        other => Err(format!("unknown entry kind {other:?}")),
    }
}

fn check_references(catalog: &Catalog) -> Result<(), String> {
    let missing = |id: &str, name: &str| format!("{id}: references unknown algebra {name:?}");
    for e in &catalog.entries {
        match e {
            CatalogEntry::Algebra(a) => {
                if let Some(q) = &a.central_quotient {
                    if catalog.algebra(q).is_none() {
                        return Err(missing(&e.id(), q));
                    }
                }
            }
            CatalogEntry::Degeneration(d) => {
                for name in [&d.source_name, &d.target_name] {
                    let entry = catalog.algebra(name).ok_or_else(|| missing(&d.id, name))?;
                    let is_source = name == &d.source_name;
                    let values = if is_source { &d.source_values } else { &d.target_values };
                    for p in entry.presentation.ctx().names() {
                        if !values.contains_key(p) {
                            return Err(format!("{}: no value for {name} parameter {p}", d.id));
                        }
                    }
                }
                let n = catalog.algebra(&d.source_name).unwrap().presentation.dim();
                if d.basis.rows() != n {
                    return Err(format!(
                        "{}: basis is {}x{} but {} has dimension {n}",
                        d.id,
                        d.basis.rows(),
                        d.basis.cols(),
                        d.source_name
                    ));
                }
                let m = catalog.algebra(&d.target_name).unwrap().presentation.dim();
                if m != n {
                    return Err(format!(
                        "{}: source dimension {n} differs from target dimension {m}",
                        d.id
                    ));
                }
            }
            CatalogEntry::NonDegeneration(nd) => {
                if nd.external_reason.is_none()
                    && nd.spec.flags.is_empty()
                    && nd.spec.equations.is_empty()
                {
                    return Err(format!("{}: no conditions and no external reason", nd.id));
                }
                for name in nd.sources.iter().chain(nd.targets.iter()) {
                    if catalog.algebra(name).is_none() {
                        return Err(missing(&nd.id, name));
                    }
                }
            }
            CatalogEntry::CohomologyExpectation(c) => {
                if catalog.algebra(&c.algebra).is_none() {
                    return Err(missing(&e.id(), &c.algebra));
                }
            }
            CatalogEntry::ExtensionExpectation(x) => {
                for name in [&x.base, &x.result] {
                    if catalog.algebra(name).is_none() {
                        return Err(missing(&e.id(), name));
                    }
                }
                let base_dim = catalog.algebra(&x.base).unwrap().presentation.dim();
                let result_dim = catalog.algebra(&x.result).unwrap().presentation.dim();
                if base_dim + x.cocycle.len() != result_dim {
                    return Err(format!(
                        "{}: base dim {base_dim} plus {} cocycle components does not give result dim {result_dim}",
                        e.id(),
                        x.cocycle.len()
                    ));
                }
            }
            CatalogEntry::CocycleStep(c) => {
                let entry = catalog.algebra(&c.base).ok_or_else(|| missing(&e.id(), &c.base))?;
                let n = entry.presentation.dim();
                if c.automorphism.len() != n || c.automorphism.iter().any(|r| r.len() != n) {
                    return Err(format!("{}: automorphism is not {n}x{n}", e.id()));
                }
            }
            CatalogEntry::DimensionExpectation(d) => {
                if d.algebras.is_empty() {
                    return Err(format!("{}: no algebras listed", e.id()));
                }
                for name in &d.algebras {
                    if catalog.algebra(name).is_none() {
                        return Err(missing(&e.id(), name));
                    }
                }
            }
        }
    }
    Ok(())
}

fn entry_values_from_file(path: &Path) -> Result<Vec<Value>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    match v {
        Value::Array(items) => Ok(items),
        obj @ Value::Object(_) => Ok(vec![obj]),
        _ => Err(format!("{}: expected a JSON object or array", path.display())),
    }
}

/// Resolves the entries in every `.json` file under `path` (recursively;
/// `path` may also be a single file) without cross-checking references.
pub fn load_entries(path: &Path) -> Result<Vec<CatalogEntry>, String> {
    let mut files = Vec::new();
    if path.is_file() {
        files.push(path.to_path_buf());
    } else {
        for entry in walkdir::WalkDir::new(path).sort_by_file_name() {
            let entry = entry.map_err(|e| format!("{}: {e}", path.display()))?;
            if entry.file_type().is_file()
                && entry.path().extension().is_some_and(|x| x == "json")
            {
                files.push(entry.path().to_path_buf());
            }
        }
    }
    if files.is_empty() {
        return Err(format!("{}: no catalog files found", path.display()));
    }
    let mut entries = Vec::new();
    for file in files {
        for value in entry_values_from_file(&file)? {
            let entry = resolve_entry(value).map_err(|e| format!("{}: {e}", file.display()))?;
            entries.push(entry);
        }
    }
    Ok(entries)
}

/// Loads every `.json` file under `path` into a validated catalog.
pub fn load_catalog(path: &Path) -> Result<Catalog, String> {
    Catalog::from_entries(load_entries(path)?)
}

fn scalar_expr(s: &Scalar) -> String {
    s.to_string()
}

/// Serializes a resolved entry back to its file form. Loading the output
/// yields an equal entry (erratum patches are already applied, so the
/// erratum survives as justification-only).
pub fn entry_to_value(entry: &CatalogEntry) -> Value {
    let mut v = match entry {
        CatalogEntry::Algebra(a) => {
            let p = &a.presentation;
            let n = p.dim();
            let mut products = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let mut components = BTreeMap::new();
                    for k in 0..n {
                        if !p.c(i, j, k).is_zero() {
                            components.insert((k + 1).to_string(), scalar_expr(p.c(i, j, k)));
                        }
                    }
                    if !components.is_empty() {
                        products.push(RawProduct { left: i + 1, right: j + 1, components });
                    }
                }
            }
            serde_json::to_value(RawAlgebra {
                name: p.name().to_string(),
                dimension: n,
                parameters: p.ctx().names().to_vec(),
                variety_tags: a.variety_tags.clone(),
                products,
                expected: RawExpected {
                    nilpotency_class: a.expected_class,
                    ann_dim: a.expected_ann_dim,
                    non_nilpotent: a.expected_non_nilpotent,
                },
                central_quotient: a.central_quotient.clone(),
                provenance: a.provenance.clone(),
            })
            .expect("algebra serialization")
        }
        CatalogEntry::Degeneration(d) => {
            let n = d.basis.rows();
            let basis: Vec<Vec<String>> = (0..n)
                .map(|i| d.basis.row(i).iter().map(scalar_expr).collect())
                .collect();
            let name = d.id.split(':').nth(3).map(|s| s.to_string());
            serde_json::to_value(RawDegeneration {
                source: RawEndpoint {
                    name: d.source_name.clone(),
                    parameter_values: d
                        .source_values
                        .iter()
                        .map(|(k, v)| (k.clone(), scalar_expr(v)))
                        .collect(),
                },
                reparametrization: RawReparam { t_of_s: d.t_of_s.clone(), original_t_form_note: d.note.clone() },
                limit_point: d.limit_point.to_string(),
                target: RawEndpoint {
                    name: d.target_name.clone(),
                    parameter_values: d
                        .target_values
                        .iter()
                        .map(|(k, v)| (k.clone(), scalar_expr(v)))
                        .collect(),
                },
                basis,
                aux_parameters: d.aux_ctx.names().to_vec(),
                name,
                provenance: d.provenance.clone(),
            })
            .expect("degeneration serialization")
        }
        CatalogEntry::NonDegeneration(nd) => {
            let name = nd.id.strip_prefix("non-degeneration:").map(|s| s.to_string());
            serde_json::to_value(RawNonDegeneration {
                name,
                sources: nd.sources.clone(),
                targets: nd.targets.clone(),
                flag_containments: nd
                    .spec
                    .flags
                    .iter()
                    .map(|&(p, q, r)| RawFlag { p, q, r })
                    .collect(),
                equations: nd.spec.equations.clone(),
                external_reason: nd.external_reason.clone(),
                provenance: nd.provenance.clone(),
            })
            .expect("non-degeneration serialization")
        }
        CatalogEntry::CohomologyExpectation(c) => serde_json::to_value(RawCohomologyExpectation {
            algebra: c.algebra.clone(),
            variety: c.variety.clone(),
            dims: RawCohomologyDims { z2: c.z2, b2: c.b2, h2: c.h2, h2_sym: c.h2_sym },
            listed_classes: c.listed_classes.clone(),
            provenance: c.provenance.clone(),
        })
        .expect("cohomology expectation serialization"),
        CatalogEntry::ExtensionExpectation(x) => serde_json::to_value(RawExtensionExpectation {
            base: x.base.clone(),
            cocycle: x.cocycle.clone(),
            result: x.result.clone(),
            provenance: x.provenance.clone(),
        })
        .expect("extension expectation serialization"),
        CatalogEntry::CocycleStep(c) => serde_json::to_value(RawCocycleStep {
            base: c.base.clone(),
            name: c.name.clone(),
            parameters: c.parameters.clone(),
            theta_in: c.theta_in.clone(),
            automorphism: c.automorphism.clone(),
            theta_out: c.theta_out.clone(),
            provenance: c.provenance.clone(),
        })
        .expect("cocycle step serialization"),
        CatalogEntry::DimensionExpectation(d) => serde_json::to_value(RawDimensionExpectation {
            name: d.name.clone(),
            expected: d.expected,
            algebras: d.algebras.clone(),
            samples: Some(d.samples),
            provenance: d.provenance.clone(),
        })
        .expect("dimension expectation serialization"),
    };
    let obj = v.as_object_mut().expect("raw entries serialize to objects");
    obj.insert("kind".into(), Value::String(entry.kind().into()));
    if let Some(j) = entry.erratum() {
        obj.insert(
            "erratum".into(),
            serde_json::json!({ "justification": j }),
        );
    }
    v
}

/// Writes the whole catalog as one JSON file per entry kind under `dir`.
pub fn save_catalog(catalog: &Catalog, dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut by_kind: BTreeMap<&'static str, Vec<Value>> = BTreeMap::new();
    for e in &catalog.entries {
        by_kind.entry(e.kind()).or_default().push(entry_to_value(e));
    }
    for (kind, values) in by_kind {
        let path = dir.join(format!("{kind}.json"));
        let text = serde_json::to_string_pretty(&Value::Array(values))
            .map_err(|e| e.to_string())?;
        std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}
