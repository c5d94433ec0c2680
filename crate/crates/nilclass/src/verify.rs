//! Check construction and execution over a loaded catalog.
//!
//! Every verification is a [`Check`] trait object built by a per-kind builder
//! function; the registry maps kind names to builders, and `--filter` selects
//! a single kind by key. Checks are independent, so execution fans out across
//! a thread pool; the report is sorted by check id afterwards, which makes
//! the JSON output byte-identical regardless of job count.

use crate::algebra::AlgebraPresentation;
use crate::catalog::{
    Catalog, CatalogEntry, CocycleStepEntry, CohomologyExpectationEntry, DegenerationEntry,
    DimensionExpectationEntry, ExtensionExpectationEntry, NonDegenerationEntry, PATH_VAR,
};
use crate::cohomology::{central_extension, cohomology_basis, verify_orbit_step, Cochain};
use crate::degeneration::{
    change_of_basis, closure_dimension, verify_degeneration, verify_der_monotonicity,
    verify_nondegeneration,
};
use crate::identities::variety_identities;
use crate::linalg::Matrix;
use crate::scalars::{parse_cochain, parse_expression, Context, Scalar};
use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "pass-with-erratum")]
    PassWithErratum,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "external")]
    External,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PassWithErratum => "pass-with-erratum",
            Status::Fail => "fail",
            Status::External => "external",
        }
    }
}

/// Shared knobs for randomized checks.
#[derive(Debug, Clone, Copy)]
pub struct CheckEnv {
    pub seed: u64,
}

impl Default for CheckEnv {
    fn default() -> Self {
        CheckEnv { seed: 2026 }
    }
}

pub trait Check: Send + Sync {
    fn id(&self) -> String;
    fn kind(&self) -> &'static str;
    fn run(&self, catalog: &Catalog, env: &CheckEnv) -> (Status, Option<String>);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub kind: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Summary {
    pub pass: usize,
    #[serde(rename = "pass-with-erratum")]
    pub pass_with_erratum: usize,
    pub fail: usize,
    pub external: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn from_results(mut checks: Vec<CheckResult>) -> Report {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary { total: checks.len(), ..Summary::default() };
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::PassWithErratum => summary.pass_with_erratum += 1,
                Status::Fail => summary.fail += 1,
                Status::External => summary.external += 1,
            }
        }
        Report { checks, summary }
    }

    /// 0 when nothing failed, 1 otherwise; usage errors exit 2 before a
    /// report exists.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Wraps a raw verdict, downgrading a pass to pass-with-erratum when the
/// originating entry was patched.
fn finish(ok: bool, witness: Option<String>, erratum: &Option<String>) -> (Status, Option<String>) {
    match (ok, erratum) {
        (true, None) => (Status::Pass, witness),
        (true, Some(j)) => {
            let mut w = format!("erratum: {j}");
            if let Some(extra) = witness {
                w = format!("{w}; {extra}");
            }
            (Status::PassWithErratum, Some(w))
        }
        (false, _) => (Status::Fail, witness),
    }
}

struct IdentityCheck {
    algebra: String,
    tag: String,
    erratum: Option<String>,
}

impl Check for IdentityCheck {
    fn id(&self) -> String {
        format!("identity:{}:{}", self.algebra, self.tag)
    }
    fn kind(&self) -> &'static str {
        "identity"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        let entry = catalog.algebra(&self.algebra).expect("validated reference");
        let specs = variety_identities(&self.tag).expect("validated tag");
        for spec in specs {
            if let Some(w) = entry.presentation.check_identity(spec, false) {
                return finish(false, Some(format!("{}: {w}", spec.name)), &self.erratum);
            }
        }
        finish(true, None, &self.erratum)
    }
}

fn build_identity(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    let mut out: Vec<Box<dyn Check>> = Vec::new();
    for e in &catalog.entries {
        if let CatalogEntry::Algebra(a) = e {
            for tag in &a.variety_tags {
                out.push(Box::new(IdentityCheck {
                    algebra: a.presentation.name().to_string(),
                    tag: tag.clone(),
                    erratum: a.erratum.clone(),
                }));
            }
        }
    }
    out
}

struct DownstreamCheck {
    algebra: String,
    identity: &'static str,
    force_generic: bool,
    erratum: Option<String>,
}

impl Check for DownstreamCheck {
    fn id(&self) -> String {
        format!("downstream:{}:{}", self.algebra, self.identity)
    }
    fn kind(&self) -> &'static str {
        "downstream"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        let entry = catalog.algebra(&self.algebra).expect("validated reference");
        let spec = crate::identities::identity(self.identity).expect("known identity");
        match entry.presentation.check_identity(spec, self.force_generic) {
            None => finish(true, None, &self.erratum),
            Some(w) => finish(false, Some(w.to_string()), &self.erratum),
        }
    }
}

fn build_downstream(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    let mut out: Vec<Box<dyn Check>> = Vec::new();
    for e in &catalog.entries {
        if let CatalogEntry::Algebra(a) = e {
            if !a.variety_tags.iter().any(|t| t == "symmetric-leibniz") {
                continue;
            }
            for (identity, force_generic) in [
                ("flexible", false),
                ("weakly-associative", false),
                ("nil3-left", true),
                ("nil3-right", true),
            ] {
                out.push(Box::new(DownstreamCheck {
                    algebra: a.presentation.name().to_string(),
                    identity,
                    force_generic,
                    erratum: a.erratum.clone(),
                }));
            }
        }
    }
    out
}

struct NilpotencyCheck {
    algebra: String,
    expected: Option<usize>,
    erratum: Option<String>,
}

impl Check for NilpotencyCheck {
    fn id(&self) -> String {
        format!("nilpotency:{}:class", self.algebra)
    }
    fn kind(&self) -> &'static str {
        "nilpotency"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        let entry = catalog.algebra(&self.algebra).expect("validated reference");
        let got = entry.presentation.nilpotency_class();
        let ok = got == self.expected;
        let witness = if ok {
            None
        } else {
            Some(format!("expected {:?}, computed {:?}", self.expected, got))
        };
        finish(ok, witness, &self.erratum)
    }
}

fn build_nilpotency(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    let mut out: Vec<Box<dyn Check>> = Vec::new();
    for e in &catalog.entries {
        if let CatalogEntry::Algebra(a) = e {
            let expected = if a.expected_non_nilpotent {
                Some(None)
            } else {
                a.expected_class.map(Some)
            };
            if let Some(expected) = expected {
                out.push(Box::new(NilpotencyCheck {
                    algebra: a.presentation.name().to_string(),
                    expected,
                    erratum: a.erratum.clone(),
                }));
            }
        }
    }
    out
}

struct AnnihilatorCheck {
    algebra: String,
    expected: usize,
    erratum: Option<String>,
}

impl Check for AnnihilatorCheck {
    fn id(&self) -> String {
        format!("annihilator:{}:dim", self.algebra)
    }
    fn kind(&self) -> &'static str {
        "annihilator"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        let entry = catalog.algebra(&self.algebra).expect("validated reference");
        let got = entry.presentation.annihilator().dim();
        let ok = got == self.expected;
        let witness =
            if ok { None } else { Some(format!("expected {}, computed {got}", self.expected)) };
        finish(ok, witness, &self.erratum)
    }
}

fn build_annihilator(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    let mut out: Vec<Box<dyn Check>> = Vec::new();
    for e in &catalog.entries {
        if let CatalogEntry::Algebra(a) = e {
            if let Some(expected) = a.expected_ann_dim {
                out.push(Box::new(AnnihilatorCheck {
                    algebra: a.presentation.name().to_string(),
                    expected,
                    erratum: a.erratum.clone(),
                }));
            }
        }
    }
    out
}

struct ReconstructCheck {
    algebra: String,
    quotient: String,
    erratum: Option<String>,
}

impl ReconstructCheck {
    fn verify(&self, catalog: &Catalog) -> Result<(), String> {
        let entry = catalog.algebra(&self.algebra).expect("validated reference");
        let a = &entry.presentation;
        let qd = a.quotient_by_annihilator();
        let named = &catalog.algebra(&self.quotient).expect("validated reference").presentation;
        if qd.quotient.dim() != named.dim() {
            return Err(format!(
                "quotient by the annihilator has dimension {}, but {} has dimension {}",
                qd.quotient.dim(),
                self.quotient,
                named.dim()
            ));
        }
        let shrunk = qd
            .quotient
            .with_context(named.ctx())
            .map_err(|e| format!("quotient constants are not expressible over {}: {e}", self.quotient))?;
        let m = named.dim();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if shrunk.c(i, j, k) != named.c(i, j, k) {
                        return Err(format!(
                            "quotient disagrees with {} at ({},{},{}): {} vs {}",
                            self.quotient,
                            i + 1,
                            j + 1,
                            k + 1,
                            shrunk.c(i, j, k),
                            named.c(i, j, k)
                        ));
                    }
                }
            }
        }
        // rebuild the algebra from quotient and section cocycle
        let theta = Cochain::new(a.ctx(), m, qd.theta.clone());
        let rebuilt = central_extension(&qd.quotient, &theta, a.name());
        let n = a.dim();
        let mut rows = Vec::with_capacity(n);
        for &idx in &qd.complement {
            let mut row = vec![Scalar::zero(a.ctx()); n];
            row[idx] = Scalar::one(a.ctx());
            rows.push(row);
        }
        for v in qd.ann.basis() {
            rows.push(v.clone());
        }
        let b = Matrix::from_rows(a.ctx(), rows);
        let moved = change_of_basis(a, &b)?;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if rebuilt.c(i, j, k) != moved.c(i, j, k) {
                        return Err(format!(
                            "re-extension disagrees with the original at ({},{},{})",
                            i + 1,
                            j + 1,
                            k + 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Check for ReconstructCheck {
    fn id(&self) -> String {
        format!("reconstruct:{}:{}", self.algebra, self.quotient)
    }
    fn kind(&self) -> &'static str {
        "reconstruct"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        match self.verify(catalog) {
            Ok(()) => finish(true, None, &self.erratum),
            Err(e) => finish(false, Some(e), &self.erratum),
        }
    }
}

fn build_reconstruct(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    let mut out: Vec<Box<dyn Check>> = Vec::new();
    for e in &catalog.entries {
        if let CatalogEntry::Algebra(a) = e {
            if let Some(q) = &a.central_quotient {
                out.push(Box::new(ReconstructCheck {
                    algebra: a.presentation.name().to_string(),
                    quotient: q.clone(),
                    erratum: a.erratum.clone(),
                }));
            }
        }
    }
    out
}

struct CohomologyCheck {
    entry: CohomologyExpectationEntry,
}

impl CohomologyCheck {
    fn verify(&self, catalog: &Catalog) -> Result<Option<String>, String> {
        let e = &self.entry;
        let a = &catalog.algebra(&e.algebra).expect("validated reference").presentation;
        let spaces = cohomology_basis(a, &e.variety)?;
        let mut dims = vec![format!("H2 = {}", spaces.h2_dim())];
        if spaces.h2_dim() != e.h2 {
            return Err(format!("expected H2 = {}, computed {}", e.h2, spaces.h2_dim()));
        }
        if let Some(z2) = e.z2 {
            if spaces.z2.dim() != z2 {
                return Err(format!("expected Z2 = {z2}, computed {}", spaces.z2.dim()));
            }
            dims.push(format!("Z2 = {z2}"));
        }
        if let Some(b2) = e.b2 {
            if spaces.b2.dim() != b2 {
                return Err(format!("expected B2 = {b2}, computed {}", spaces.b2.dim()));
            }
            dims.push(format!("B2 = {b2}"));
        }
        if let Some(h2s) = e.h2_sym {
            if spaces.h2_sym_dim() != h2s {
                return Err(format!(
                    "expected symmetric H2 = {h2s}, computed {}",
                    spaces.h2_sym_dim()
                ));
            }
            dims.push(format!("H2_sym = {h2s}"));
        }
        if !e.listed_classes.is_empty() {
            let n = a.dim();
            let mut rows: Vec<Vec<Scalar>> = spaces.b2.basis().to_vec();
            for (c, parts) in e.listed_classes.iter().enumerate() {
                let mut total = vec![Scalar::zero(a.ctx()); n * n];
                for part in parts {
                    let v = parse_cochain(part, a.ctx(), n)
                        .map_err(|err| format!("listed class {}: {err}", c + 1))?;
                    for (t, x) in total.iter_mut().zip(v) {
                        *t = &*t + &x;
                    }
                }
                if !spaces.z2.contains(&total) {
                    return Err(format!("listed class {} is not a cocycle", c + 1));
                }
                rows.push(total);
            }
            let rank = Matrix::from_rows(a.ctx(), rows).rank();
            let want = spaces.b2.dim() + e.listed_classes.len();
            if rank != want {
                return Err(format!(
                    "listed classes are dependent modulo coboundaries: rank {rank}, expected {want}"
                ));
            }
            dims.push(format!("{} independent classes", e.listed_classes.len()));
        }
        Ok(Some(dims.join(", ")))
    }
}

impl Check for CohomologyCheck {
    fn id(&self) -> String {
        format!("cohomology:{}:{}", self.entry.algebra, self.entry.variety)
    }
    fn kind(&self) -> &'static str {
        "cohomology"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        match self.verify(catalog) {
            Ok(w) => finish(true, w, &self.entry.erratum),
            Err(e) => finish(false, Some(e), &self.entry.erratum),
        }
    }
}

fn build_cohomology(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    catalog
        .entries
        .iter()
        .filter_map(|e| match e {
            CatalogEntry::CohomologyExpectation(c) => {
                Some(Box::new(CohomologyCheck { entry: c.clone() }) as Box<dyn Check>)
            }
            _ => None,
        })
        .collect()
}

struct ExtensionCheck {
    entry: ExtensionExpectationEntry,
}

impl ExtensionCheck {
    fn verify(&self, catalog: &Catalog) -> Result<(), String> {
        let e = &self.entry;
        let base = &catalog.algebra(&e.base).expect("validated reference").presentation;
        let result = &catalog.algebra(&e.result).expect("validated reference").presentation;
        let ctx = result.ctx();
        let lifted = base
            .with_context(ctx)
            .map_err(|err| format!("base parameters do not embed in the result's: {err}"))?;
        let m = base.dim();
        let mut components = Vec::with_capacity(e.cocycle.len());
        for (ci, parts) in e.cocycle.iter().enumerate() {
            let mut total = vec![Scalar::zero(ctx); m * m];
            for part in parts {
                let v = parse_cochain(part, ctx, m)
                    .map_err(|err| format!("cocycle component {}: {err}", ci + 1))?;
                for (t, x) in total.iter_mut().zip(v) {
                    *t = &*t + &x;
                }
            }
            components.push(total);
        }
        let theta = Cochain::new(ctx, m, components);
        let ext = central_extension(&lifted, &theta, result.name());
        let n = result.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if ext.c(i, j, k) != result.c(i, j, k) {
                        return Err(format!(
                            "extension disagrees with {} at ({},{},{}): {} vs {}",
                            e.result,
                            i + 1,
                            j + 1,
                            k + 1,
                            ext.c(i, j, k),
                            result.c(i, j, k)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Check for ExtensionCheck {
    fn id(&self) -> String {
        format!("extension:{}:{}", self.entry.base, self.entry.result)
    }
    fn kind(&self) -> &'static str {
        "extension"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        match self.verify(catalog) {
            Ok(()) => finish(true, None, &self.entry.erratum),
            Err(e) => finish(false, Some(e), &self.entry.erratum),
        }
    }
}

fn build_extension(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    catalog
        .entries
        .iter()
        .filter_map(|e| match e {
            CatalogEntry::ExtensionExpectation(x) => {
                Some(Box::new(ExtensionCheck { entry: x.clone() }) as Box<dyn Check>)
            }
            _ => None,
        })
        .collect()
}

struct CocycleStepCheck {
    entry: CocycleStepEntry,
}

impl CocycleStepCheck {
    fn verify(&self, catalog: &Catalog) -> Result<String, String> {
        let e = &self.entry;
        let base = &catalog.algebra(&e.base).expect("validated reference").presentation;
        let mut names: Vec<&str> = base.ctx().names().iter().map(|s| s.as_str()).collect();
        names.extend(e.parameters.iter().map(|s| s.as_str()));
        let ctx = Context::new(&names).map_err(|err| err.to_string())?;
        let a = base.with_context(&ctx).map_err(|err| err.to_string())?;
        let n = a.dim();
        let theta_in = Cochain::single(
            &ctx,
            n,
            parse_cochain(&e.theta_in, &ctx, n).map_err(|err| format!("theta_in: {err}"))?,
        );
        let theta_out = Cochain::single(
            &ctx,
            n,
            parse_cochain(&e.theta_out, &ctx, n).map_err(|err| format!("theta_out: {err}"))?,
        );
        let mut rows = Vec::with_capacity(n);
        for (i, row) in e.automorphism.iter().enumerate() {
            let mut parsed = Vec::with_capacity(n);
            for x in row {
                parsed.push(
                    parse_expression(x, &ctx)
                        .map_err(|err| format!("automorphism row {}: {err}", i + 1))?,
                );
            }
            rows.push(parsed);
        }
        let phi = Matrix::from_rows(&ctx, rows);
        let ratio = verify_orbit_step(&a, &theta_in, &phi, &theta_out)?;
        Ok(format!("pullback = ({ratio}) * claimed"))
    }
}

impl Check for CocycleStepCheck {
    fn id(&self) -> String {
        format!("cocycle-step:{}:{}", self.entry.base, self.entry.name)
    }
    fn kind(&self) -> &'static str {
        "cocycle-step"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        match self.verify(catalog) {
            Ok(w) => finish(true, Some(w), &self.entry.erratum),
            Err(e) => finish(false, Some(e), &self.entry.erratum),
        }
    }
}

fn build_cocycle_step(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    catalog
        .entries
        .iter()
        .filter_map(|e| match e {
            CatalogEntry::CocycleStep(c) => {
                Some(Box::new(CocycleStepCheck { entry: c.clone() }) as Box<dyn Check>)
            }
            _ => None,
        })
        .collect()
}

struct DegenerationCheck {
    entry: DegenerationEntry,
}

impl Check for DegenerationCheck {
    fn id(&self) -> String {
        self.entry.id.clone()
    }
    fn kind(&self) -> &'static str {
        "degeneration"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        let e = &self.entry;
        let source = &catalog.algebra(&e.source_name).expect("validated reference").presentation;
        let target = &catalog.algebra(&e.target_name).expect("validated reference").presentation;
        match verify_degeneration(
            source,
            &e.source_values,
            &e.basis,
            PATH_VAR,
            &e.limit_point,
            target,
            &e.target_values,
        ) {
            Ok(_) => finish(true, None, &e.erratum),
            Err(err) => finish(false, Some(err), &e.erratum),
        }
    }
}

fn build_degeneration(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    catalog
        .entries
        .iter()
        .filter_map(|e| match e {
            CatalogEntry::Degeneration(d) => {
                Some(Box::new(DegenerationCheck { entry: d.clone() }) as Box<dyn Check>)
            }
            _ => None,
        })
        .collect()
}

struct DerMonotonicityCheck {
    entry: DegenerationEntry,
}

impl Check for DerMonotonicityCheck {
    fn id(&self) -> String {
        let tail = self.entry.id.strip_prefix("degeneration:").unwrap_or(&self.entry.id);
        format!("der-monotonicity:{tail}")
    }
    fn kind(&self) -> &'static str {
        "der-monotonicity"
    }
    fn run(&self, catalog: &Catalog, env: &CheckEnv) -> (Status, Option<String>) {
        let e = &self.entry;
        let source = &catalog.algebra(&e.source_name).expect("validated reference").presentation;
        let target = &catalog.algebra(&e.target_name).expect("validated reference").presentation;
        match verify_der_monotonicity(
            source,
            &e.source_values,
            &e.cert_ctx,
            PATH_VAR,
            target,
            &e.target_values,
            env.seed,
        ) {
            Ok(rep) if !rep.proper => {
                finish(true, Some("improper (same structure), exempt".into()), &e.erratum)
            }
            Ok(rep) => {
                let rule = if rep.moving { " (source moves with the path; non-strict)" } else { "" };
                finish(
                    rep.holds(),
                    Some(format!(
                        "dim Der: source {} vs target {}{rule}",
                        rep.source_der, rep.target_der
                    )),
                    &e.erratum,
                )
            }
            Err(err) => finish(false, Some(err), &e.erratum),
        }
    }
}

fn build_der_monotonicity(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    catalog
        .entries
        .iter()
        .filter_map(|e| match e {
            CatalogEntry::Degeneration(d) => {
                Some(Box::new(DerMonotonicityCheck { entry: d.clone() }) as Box<dyn Check>)
            }
            _ => None,
        })
        .collect()
}

struct NonDegenerationCheck {
    entry: NonDegenerationEntry,
}

impl Check for NonDegenerationCheck {
    fn id(&self) -> String {
        self.entry.id.clone()
    }
    fn kind(&self) -> &'static str {
        "non-degeneration"
    }
    fn run(&self, catalog: &Catalog, _env: &CheckEnv) -> (Status, Option<String>) {
        let e = &self.entry;
        if let Some(reason) = &e.external_reason {
            return (Status::External, Some(reason.clone()));
        }
        let lookup = |names: &[String]| -> Vec<&AlgebraPresentation> {
            names
                .iter()
                .map(|n| &catalog.algebra(n).expect("validated reference").presentation)
                .collect()
        };
        let sources = lookup(&e.sources);
        let targets = lookup(&e.targets);
        match verify_nondegeneration(&sources, &targets, &e.spec) {
            Ok(out) if out.holds() => {
                let brief: Vec<String> = out
                    .targets
                    .iter()
                    .map(|r| format!("{}: {}", r.name, r.violation.as_ref().expect("holds")))
                    .collect();
                finish(true, Some(brief.join("; ")), &e.erratum)
            }
            Ok(out) => finish(false, out.first_defect(), &e.erratum),
            Err(err) => finish(false, Some(err), &e.erratum),
        }
    }
}

fn build_non_degeneration(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    catalog
        .entries
        .iter()
        .filter_map(|e| match e {
            CatalogEntry::NonDegeneration(n) => {
                Some(Box::new(NonDegenerationCheck { entry: n.clone() }) as Box<dyn Check>)
            }
            _ => None,
        })
        .collect()
}

struct DimensionCheck {
    entry: DimensionExpectationEntry,
}

impl DimensionCheck {
    fn verify(&self, catalog: &Catalog, env: &CheckEnv) -> Result<(bool, String), String> {
        let e = &self.entry;
        let mut parts = Vec::new();
        let mut max_orbit = 0usize;
        let mut max_total = 0usize;
        for name in &e.algebras {
            let a = &catalog.algebra(name).expect("validated reference").presentation;
            let d = closure_dimension(a, env.seed, e.samples)?;
            parts.push(format!("{name}: orbit {} + {} params", d.orbit, d.transverse));
            max_orbit = max_orbit.max(d.orbit);
            max_total = max_total.max(d.total());
        }
        let convention = if max_total == e.expected {
            Some("orbit-plus-parameters")
        } else if max_orbit == e.expected {
            Some("orbit")
        } else {
            None
        };
        match convention {
            Some(c) => Ok((
                true,
                format!("{} under the {c} convention ({})", e.expected, parts.join("; ")),
            )),
            None => Ok((
                false,
                format!(
                    "expected {}, computed orbit {max_orbit} / with parameters {max_total} ({})",
                    e.expected,
                    parts.join("; ")
                ),
            )),
        }
    }
}

impl Check for DimensionCheck {
    fn id(&self) -> String {
        format!("dimension:{}", self.entry.name)
    }
    fn kind(&self) -> &'static str {
        "dimension"
    }
    fn run(&self, catalog: &Catalog, env: &CheckEnv) -> (Status, Option<String>) {
        match self.verify(catalog, env) {
            Ok((ok, w)) => finish(ok, Some(w), &self.entry.erratum),
            Err(e) => finish(false, Some(e), &self.entry.erratum),
        }
    }
}

fn build_dimension(catalog: &Catalog) -> Vec<Box<dyn Check>> {
    catalog
        .entries
        .iter()
        .filter_map(|e| match e {
            CatalogEntry::DimensionExpectation(d) => {
                Some(Box::new(DimensionCheck { entry: d.clone() }) as Box<dyn Check>)
            }
            _ => None,
        })
        .collect()
}

type Builder = fn(&Catalog) -> Vec<Box<dyn Check>>;

/// Check kinds in execution-report order.
pub static KIND_ORDER: &[&str] = &[
    "identity",
    "downstream",
    "nilpotency",
    "annihilator",
    "reconstruct",
    "cohomology",
    "extension",
    "cocycle-step",
    "degeneration",
    "der-monotonicity",
    "non-degeneration",
    "dimension",
];

static REGISTRY: Lazy<BTreeMap<&'static str, Builder>> = Lazy::new(|| {
    let mut m: BTreeMap<&'static str, Builder> = BTreeMap::new();
    m.insert("identity", build_identity);
    m.insert("downstream", build_downstream);
    m.insert("nilpotency", build_nilpotency);
    m.insert("annihilator", build_annihilator);
    m.insert("reconstruct", build_reconstruct);
    m.insert("cohomology", build_cohomology);
    m.insert("extension", build_extension);
    m.insert("cocycle-step", build_cocycle_step);
    m.insert("degeneration", build_degeneration);
    m.insert("der-monotonicity", build_der_monotonicity);
    m.insert("non-degeneration", build_non_degeneration);
    m.insert("dimension", build_dimension);
    m
});

/// Builds every check for the catalog, or only one kind when `filter` is
/// given. Unknown filters report the valid keys.
pub fn build_checks(catalog: &Catalog, filter: Option<&str>) -> Result<Vec<Box<dyn Check>>, String> {
    match filter {
        Some(kind) => {
            let builder = REGISTRY
                .get(kind)
                .ok_or_else(|| format!("unknown check kind {kind:?}; valid: {}", KIND_ORDER.join(", ")))?;
            Ok(builder(catalog))
        }
        None => {
            let mut out = Vec::new();
            for kind in KIND_ORDER {
                out.extend(REGISTRY[kind](catalog));
            }
            Ok(out)
        }
    }
}

/// Runs checks across `jobs` threads (0 = rayon default) and assembles the
/// id-sorted report.
pub fn run_checks(
    catalog: &Catalog,
    checks: &[Box<dyn Check>],
    env: &CheckEnv,
    jobs: usize,
) -> Report {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool construction");
    let results: Vec<CheckResult> = pool.install(|| {
        checks
            .par_iter()
            .map(|c| {
                let (status, witness) = c.run(catalog, env);
                CheckResult { id: c.id(), kind: c.kind().to_string(), status, witness }
            })
            .collect()
    });
    Report::from_results(results)
}
