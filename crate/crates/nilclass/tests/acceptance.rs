//! Acceptance checklist over the shipped catalog: one test per criterion,
//! each printing a single PASS/FAIL line (visible under --nocapture; the
//! per-test ok/FAILED lines mirror them otherwise). The full catalog run is
//! built once and shared, so the wall-clock budget is measured exactly once.

mod common;

use nilclass::catalog::{load_catalog, Catalog, CatalogEntry};
use nilclass::cohomology::cohomology_basis;
use nilclass::verify::{build_checks, run_checks, CheckEnv, CheckResult, Report, Status};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

struct FullRun {
    catalog: Catalog,
    report: Report,
    elapsed: Duration,
}

static FULL: OnceLock<FullRun> = OnceLock::new();

fn full() -> &'static FullRun {
    FULL.get_or_init(|| {
        let catalog = load_catalog(&common::catalog_dir()).expect("catalog loads");
        let checks = build_checks(&catalog, None).expect("checks build");
        let started = Instant::now();
        let report = run_checks(&catalog, &checks, &CheckEnv::default(), 0);
        FullRun { catalog, report, elapsed: started.elapsed() }
    })
}

fn by_id(report: &Report) -> BTreeMap<&str, &CheckResult> {
    report.checks.iter().map(|c| (c.id.as_str(), c)).collect()
}

fn kind_results<'a>(report: &'a Report, kind: &str) -> Vec<&'a CheckResult> {
    report.checks.iter().filter(|c| c.kind == kind).collect()
}

fn count_failures(results: &[&CheckResult], problems: &mut Vec<String>) {
    for c in results {
        if c.status == Status::Fail {
            problems.push(format!("{} failed: {:?}", c.id, c.witness));
        }
    }
}

fn conclude(number: usize, name: &str, problems: Vec<String>, detail: String) {
    if problems.is_empty() {
        println!("criterion {number}: {name}: PASS ({detail})");
    } else {
        println!("criterion {number}: {name}: FAIL ({} problems)", problems.len());
        panic!("criterion {number} ({name}) failed:\n{}", problems.join("\n"));
    }
}

#[test]
fn criterion_0_full_catalog_run() {
    let run = full();
    let mut problems = Vec::new();
    let s = &run.report.summary;
    if run.report.exit_code() != 0 {
        problems.push(format!("exit code {}", run.report.exit_code()));
    }
    if s.fail != 0 {
        problems.push(format!("{} failing checks", s.fail));
    }
    if s.total < 120 {
        problems.push(format!("only {} checks built", s.total));
    }
    if run.elapsed >= Duration::from_secs(120) {
        problems.push(format!("full run took {:.1?}, budget is 2 minutes", run.elapsed));
    }
    conclude(
        0,
        "full catalog run",
        problems,
        format!(
            "exit 0; {} checks ({} pass, {} pass-with-erratum, {} external) in {:.1?}",
            s.total, s.pass, s.pass_with_erratum, s.external, run.elapsed
        ),
    );
}

#[test]
fn criterion_1_identity_suite() {
    let run = full();
    let mut problems = Vec::new();
    let ids: BTreeSet<&str> = run.report.checks.iter().map(|c| c.id.as_str()).collect();
    let mut require = |name: &str, tag: &str| {
        let id = format!("identity:{name}:{tag}");
        if !ids.contains(id.as_str()) {
            problems.push(format!("missing check {id}"));
        }
    };
    for i in 1..=11 {
        require(&format!("W_{i:02}"), "weakly-associative");
    }
    for i in 1..=5 {
        require(&format!("S_{i:02}"), "symmetric-leibniz");
    }
    for i in 1..=49 {
        require(&format!("SS_{i:02}"), "symmetric-leibniz");
    }
    for name in ["L_02", "L_14", "L_15", "L_16", "L_24", "L_27", "L_30", "L_35", "L_36"] {
        require(name, "symmetric-leibniz");
    }
    for name in ["n_3", "n_4"] {
        require(name, "lie");
    }
    for name in ["C_01", "C_02", "C_03", "C_04", "C3_19"] {
        require(name, "commutative");
    }
    for name in
        ["C_01", "C_04", "N_01", "N_02", "n_3", "Nfrak_2", "Nfrak_3", "V_4p1", "V_3p2", "V_2p3"]
    {
        require(name, "two-step-nilpotent");
    }
    for name in ["Nfrak_2", "Nfrak_3", "V_4p1", "V_3p2", "V_2p3"] {
        require(name, "symmetric-leibniz");
    }
    require("C3_19", "weakly-associative");
    // every cataloged algebra carries at least one identity check
    for name in run.catalog.algebra_names() {
        let prefix = format!("identity:{name}:");
        if !run.report.checks.iter().any(|c| c.id.starts_with(&prefix)) {
            problems.push(format!("algebra {name} has no identity check"));
        }
    }
    let results = kind_results(&run.report, "identity");
    count_failures(&results, &mut problems);
    conclude(
        1,
        "identity suite",
        problems,
        format!(
            "{} identity checks across {} algebras, zero failures",
            results.len(),
            run.catalog.algebra_names().len()
        ),
    );
}

#[test]
fn criterion_2_downstream_identities() {
    let run = full();
    let mut problems = Vec::new();
    let ids: BTreeSet<&str> = run.report.checks.iter().map(|c| c.id.as_str()).collect();
    let mut leibniz = 0;
    for e in &run.catalog.entries {
        let CatalogEntry::Algebra(a) = e else { continue };
        if !a.variety_tags.iter().any(|t| t == "symmetric-leibniz") {
            continue;
        }
        leibniz += 1;
        for identity in ["flexible", "weakly-associative", "nil3-left", "nil3-right"] {
            let id = format!("downstream:{}:{identity}", a.presentation.name());
            if !ids.contains(id.as_str()) {
                problems.push(format!("missing check {id}"));
            }
        }
    }
    let results = kind_results(&run.report, "downstream");
    if results.len() != 4 * leibniz {
        problems.push(format!(
            "expected {} downstream checks for {leibniz} Leibniz algebras, found {}",
            4 * leibniz,
            results.len()
        ));
    }
    count_failures(&results, &mut problems);
    conclude(
        2,
        "downstream identities",
        problems,
        format!(
            "flexibility, weak associativity, and third-power vanishing on all {leibniz} \
             symmetric Leibniz algebras ({} checks)",
            results.len()
        ),
    );
}

/// (algebra, cocycle variety, pinned dim H^2), recomputed from scratch.
const PINNED_H2: &[(&str, &str, usize)] = &[
    ("C_01", "weakly-associative", 6),
    ("C_01", "commutative", 5),
    ("C_01", "symmetric-leibniz", 3),
    ("C_02", "weakly-associative", 4),
    ("C_03", "weakly-associative", 4),
    ("C_04", "weakly-associative", 6),
    ("C_04", "commutative", 5),
    ("C_04", "symmetric-leibniz", 3),
    ("N_01", "weakly-associative", 5),
    ("N_02", "weakly-associative", 3),
    ("n_3", "symmetric-leibniz", 10),
    ("n_4", "symmetric-leibniz", 5),
];

#[test]
fn criterion_3_cohomology_dimensions() {
    let run = full();
    let mut problems = Vec::new();
    let index = by_id(&run.report);
    for &(name, variety, h2) in PINNED_H2 {
        let a = &run.catalog.algebra(name).expect("cataloged").presentation;
        let spaces = cohomology_basis(a, variety).expect("computable");
        if spaces.h2_dim() != h2 {
            problems.push(format!("{name}/{variety}: recomputed H2 = {}, pinned {h2}", spaces.h2_dim()));
        }
        match index.get(format!("cohomology:{name}:{variety}").as_str()) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) => problems.push(format!("{}: status {}", c.id, c.status.as_str())),
            None => problems.push(format!("missing table check for {name}/{variety}")),
        }
    }
    let results = kind_results(&run.report, "cohomology");
    count_failures(&results, &mut problems);
    conclude(
        3,
        "cohomology dimensions",
        problems,
        format!(
            "{} pinned H2 values recomputed exactly; all {} table rows verified",
            PINNED_H2.len(),
            results.len()
        ),
    );
}

const PINNED_EXTENSIONS: &[(&str, &str)] = &[
    ("C_01", "W_03"),
    ("C_04", "W_09"),
    ("N_01", "S_05"),
    ("n_3", "SS_40"),
    ("n_4", "SS_41"),
];

#[test]
fn criterion_4_extension_reconstructions() {
    let run = full();
    let mut problems = Vec::new();
    let index = by_id(&run.report);
    for &(base, result) in PINNED_EXTENSIONS {
        match index.get(format!("extension:{base}:{result}").as_str()) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) => problems.push(format!("{}: status {}", c.id, c.status.as_str())),
            None => problems.push(format!("missing extension check {base} -> {result}")),
        }
    }
    let results = kind_results(&run.report, "extension");
    count_failures(&results, &mut problems);
    conclude(
        4,
        "extension reconstructions",
        problems,
        format!(
            "{} pinned reconstructions among {} exact structure-constant rebuilds",
            PINNED_EXTENSIONS.len(),
            results.len()
        ),
    );
}

#[test]
fn criterion_5_degeneration_suite() {
    let run = full();
    let mut problems = Vec::new();
    let mut dim4 = 0;
    let mut dim4_leibniz = 0;
    let mut dim5 = 0;
    for e in &run.catalog.entries {
        let CatalogEntry::Degeneration(d) = e else { continue };
        let src = &run.catalog.algebra(&d.source_name).expect("cataloged").presentation;
        match src.dim() {
            4 => {
                dim4 += 1;
                if d.source_name.starts_with("L_") || d.source_name.starts_with("Nfrak") {
                    dim4_leibniz += 1;
                }
            }
            5 => dim5 += 1,
            n => problems.push(format!("{}: unexpected source dimension {n}", d.id)),
        }
    }
    if dim4 != 15 || dim4_leibniz != 3 {
        problems.push(format!(
            "expected 12 + 3 four-dimensional rows, found {} with {dim4_leibniz} Leibniz rows",
            dim4
        ));
    }
    if dim5 != 47 {
        problems.push(format!("expected 47 five-dimensional rows, found {dim5}"));
    }
    let results = kind_results(&run.report, "degeneration");
    let errata: Vec<&str> = results
        .iter()
        .filter(|c| c.status == Status::PassWithErratum)
        .map(|c| c.id.as_str())
        .collect();
    for c in &results {
        if c.status == Status::PassWithErratum
            && !c.witness.as_deref().unwrap_or("").starts_with("erratum:")
        {
            problems.push(format!("{}: erratum row without a visible justification", c.id));
        }
    }
    count_failures(&results, &mut problems);
    conclude(
        5,
        "degeneration suite",
        problems,
        format!(
            "{} rows ({} four-dimensional, {dim5} five-dimensional): pole-free exact limits, \
             zero failures; {} rows pass with an explicit erratum [{}]",
            results.len(),
            dim4,
            errata.len(),
            errata.join(", ")
        ),
    );
}

fn parse_der_witness(w: &str) -> Option<(usize, usize, bool)> {
    let moving = w.contains("source moves with the path");
    let rest = &w[w.find("dim Der: source ")? + "dim Der: source ".len()..];
    let (src, rest) = rest.split_once(" vs target ")?;
    let tgt: String = rest.chars().take_while(char::is_ascii_digit).collect();
    Some((src.trim().parse().ok()?, tgt.parse().ok()?, moving))
}

#[test]
fn criterion_6_der_monotonicity() {
    let run = full();
    let mut problems = Vec::new();
    let results = kind_results(&run.report, "der-monotonicity");
    if results.len() != kind_results(&run.report, "degeneration").len() {
        problems.push("derivation check count differs from degeneration row count".into());
    }
    let mut strict = 0;
    let mut moving_rows = 0;
    let mut improper = 0;
    for c in &results {
        let w = c.witness.as_deref().unwrap_or("");
        if w.contains("improper") {
            improper += 1;
            continue;
        }
        match parse_der_witness(w) {
            Some((src, tgt, moving)) => {
                if moving {
                    moving_rows += 1;
                    if src > tgt {
                        problems.push(format!("{}: moving source has {src} > {tgt}", c.id));
                    }
                } else {
                    strict += 1;
                    if src >= tgt {
                        problems.push(format!("{}: fixed pair has {src} >= {tgt}", c.id));
                    }
                }
            }
            None => problems.push(format!("{}: unparsable witness {w:?}", c.id)),
        }
    }
    count_failures(&results, &mut problems);
    conclude(
        6,
        "derivation dimension monotonicity",
        problems,
        format!(
            "{} rows: {strict} strict increases at fixed parameter pairs, {moving_rows} \
             non-strict where the source parameters move with the path, {improper} exempt \
             as improper",
            results.len()
        ),
    );
}

#[test]
fn criterion_7_non_degenerations() {
    let run = full();
    let mut problems = Vec::new();
    let index = by_id(&run.report);
    for (name, want) in [
        ("W06-not-S01", Status::Pass),
        ("R1", Status::Pass),
        ("R2", Status::Pass),
        ("R3", Status::Pass),
        ("L15-not-N2", Status::PassWithErratum),
    ] {
        match index.get(format!("non-degeneration:{name}").as_str()) {
            Some(c) if c.status == want => {}
            Some(c) => {
                problems.push(format!("{}: status {}, expected {}", c.id, c.status.as_str(), want.as_str()))
            }
            None => problems.push(format!("missing closed-set certificate {name}")),
        }
    }
    let results = kind_results(&run.report, "non-degeneration");
    let external = results.iter().filter(|c| c.status == Status::External).count();
    if external != 6 {
        problems.push(format!("expected 6 externally-argued separations, found {external}"));
    }
    for c in &results {
        if c.status == Status::External && c.witness.as_deref().unwrap_or("").is_empty() {
            problems.push(format!("{}: external row without a stated reason", c.id));
        }
    }
    // the printed target list of the Leibniz certificate is preserved in the
    // file; the patch narrows it and a separate external row covers the rest
    let raw = std::fs::read_to_string(common::catalog_dir().join("non-degenerations/tables.json"))
        .expect("catalog file");
    let rows: serde_json::Value = serde_json::from_str(&raw).expect("valid JSON");
    let row = rows
        .as_array()
        .and_then(|a| a.iter().find(|r| r["name"] == "L15-not-N2"))
        .expect("certificate row");
    if row["targets"] != serde_json::json!(["Nfrak_2", "Nfrak_3"]) {
        problems.push("printed target list of L15-not-N2 was altered".into());
    }
    if row["erratum"]["patch"]["targets"] != serde_json::json!(["Nfrak_2"]) {
        problems.push("L15-not-N2 erratum patch does not narrow the targets".into());
    }
    if !index.contains_key("non-degeneration:L15-not-N3") {
        problems.push("no external row covering the dropped target".into());
    }
    count_failures(&results, &mut problems);
    conclude(
        7,
        "non-degeneration certificates",
        problems,
        format!(
            "5 closed-set certificates hold symbolically (one with an explicit erratum); \
             {external} separations recorded as externally argued"
        ),
    );
}

const PINNED_ORBITS: &[(&str, usize)] = &[
    ("orbit-W_06", 15),
    ("orbit-V_3p2", 24),
    ("orbit-SS_21", 21),
    ("orbit-SS_22", 21),
    ("orbit-SS_41", 20),
    ("orbit-V_4p1", 20),
    ("orbit-V_2p3", 18),
];

/// (entry, verified dimension, carries an erratum); the printed value of the
/// erratum row stays in the file and is checked below.
const PINNED_VARIETY_DIMS: &[(&str, usize, bool)] = &[
    ("4dim-nilpotent-weakly-associative-variety", 16, false),
    ("4dim-symmetric-leibniz-variety", 13, false),
    ("5dim-nilpotent-symmetric-leibniz-variety", 24, false),
    ("4dim-nilpotent-symmetric-leibniz-variety", 12, true),
];

#[test]
fn criterion_8_dimension_reconciliation() {
    let run = full();
    let mut problems = Vec::new();
    let index = by_id(&run.report);
    let entry_expected: BTreeMap<&str, usize> = run
        .catalog
        .entries
        .iter()
        .filter_map(|e| match e {
            CatalogEntry::DimensionExpectation(d) => Some((d.name.as_str(), d.expected)),
            _ => None,
        })
        .collect();
    let mut check = |name: &str, value: usize, erratum: bool| {
        match entry_expected.get(name) {
            Some(&v) if v == value => {}
            Some(&v) => problems.push(format!("{name}: catalog expects {v}, criterion pins {value}")),
            None => problems.push(format!("missing dimension entry {name}")),
        }
        match index.get(format!("dimension:{name}").as_str()) {
            Some(c) => {
                let want = if erratum { Status::PassWithErratum } else { Status::Pass };
                if c.status != want {
                    problems.push(format!("{}: status {}, expected {}", c.id, c.status.as_str(), want.as_str()));
                }
                if !c.witness.as_deref().unwrap_or("").contains("convention") {
                    problems.push(format!("{}: witness does not state the convention used", c.id));
                }
            }
            None => problems.push(format!("missing dimension check {name}")),
        }
    };
    for &(name, value) in PINNED_ORBITS {
        check(name, value, false);
    }
    for &(name, value, erratum) in PINNED_VARIETY_DIMS {
        check(name, value, erratum);
    }
    // the file keeps the printed 11 with a patch recording the verified 12
    let raw = std::fs::read_to_string(common::catalog_dir().join("dimensions/tables.json"))
        .expect("catalog file");
    let rows: serde_json::Value = serde_json::from_str(&raw).expect("valid JSON");
    let row = rows
        .as_array()
        .and_then(|a| a.iter().find(|r| r["name"] == "4dim-nilpotent-symmetric-leibniz-variety"))
        .expect("dimension row");
    if row["expected"] != serde_json::json!(11) {
        problems.push("printed dimension of the erratum row was altered".into());
    }
    if row["erratum"]["patch"]["expected"] != serde_json::json!(12) {
        problems.push("erratum patch does not record the verified dimension 12".into());
    }
    let results = kind_results(&run.report, "dimension");
    count_failures(&results, &mut problems);
    conclude(
        8,
        "dimension reconciliation",
        problems,
        format!(
            "7 orbit dimensions and 4 variety dimensions reproduced with stated conventions \
             ({} checks); the printed 11 stays in the file and reports pass-with-erratum \
             against the verified 12",
            results.len()
        ),
    );
}

#[test]
fn criterion_9_property_suites() {
    let run = full();
    let seed = CheckEnv::default().seed;
    let equivalence = common::extension_equivalence_suite(seed, 200);
    let pullback = common::pullback_action_suite(seed, 200);
    let coboundary = common::coboundary_inclusion_suite(seed, 200);
    let annihilator = common::annihilator_decomposition_suite(&run.catalog);
    let linalg = common::linalg_roundtrip_suite(seed, 200);
    let mut problems = Vec::new();
    if annihilator != 10 {
        problems.push(format!("expected 10 cataloged extensions, covered {annihilator}"));
    }
    conclude(
        9,
        "property suites",
        problems,
        format!(
            "seed {seed}: {equivalence} extension-equivalence cases, {pullback} pullback \
             action cases, {coboundary} coboundary-inclusion cases, {linalg} linear algebra \
             round-trips, {annihilator} cataloged extensions' annihilators decomposed"
        ),
    );
}
