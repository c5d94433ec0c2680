use clap::{Parser, Subcommand};
use nilclass::catalog::{load_catalog, load_entries, Catalog, CatalogEntry};
use nilclass::cohomology::{cochain_string, cohomology_basis};
use nilclass::identities::{identity, variety_identities, IdentitySpec};
use nilclass::verify::{build_checks, run_checks, CheckEnv, Report, KIND_ORDER};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "nilclass", version, about = "Exact checks for a catalog of low-dimensional nilpotent algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one algebra against a named identity (or every identity of a variety tag)
    CheckIdentity {
        /// JSON file holding a single algebra entry
        #[arg(long)]
        algebra: PathBuf,
        /// Identity name, or a variety tag standing for all its identities
        #[arg(long)]
        identity: String,
        /// Use the generic evaluator even when the identity is multilinear
        #[arg(long)]
        generic: bool,
    },
    /// Print cocycle, coboundary, and cohomology dimensions with representatives
    Cohomology {
        /// JSON file holding a single algebra entry
        #[arg(long)]
        algebra: PathBuf,
        /// Variety whose cocycle condition applies
        #[arg(long)]
        variety: String,
    },
    /// Run the checks derived from a catalog or a single certificate file
    Verify {
        /// Single certificate file; algebra references resolve against the catalog
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Catalog directory (default: $NILCLASS_CATALOG)
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Run only checks of this kind
        #[arg(long)]
        filter: Option<String>,
        /// Worker threads; 0 means one per core
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the JSON report to this path
        #[arg(long)]
        json: Option<PathBuf>,
        /// Seed for the randomized samples inside checks
        #[arg(long, default_value_t = 2026)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::CheckIdentity { algebra, identity, generic } => {
            cmd_check_identity(&algebra, &identity, generic)
        }
        Command::Cohomology { algebra, variety } => cmd_cohomology(&algebra, &variety),
        Command::Verify { cert, catalog, filter, jobs, json, seed } => {
            cmd_verify(cert.as_deref(), catalog.as_deref(), filter.as_deref(), jobs, json.as_deref(), seed)
        }
    };
    std::process::exit(code);
}

fn fail_usage(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn load_single_algebra(path: &Path) -> Result<nilclass::catalog::AlgebraEntry, String> {
    let entries = load_entries(path)?;
    let mut algebras = entries.into_iter().filter_map(|e| match e {
        CatalogEntry::Algebra(a) => Some(a),
        _ => None,
    });
    let first = algebras
        .next()
        .ok_or_else(|| format!("{}: no algebra entry found", path.display()))?;
    if algebras.next().is_some() {
        return Err(format!("{}: more than one algebra entry", path.display()));
    }
    Ok(first)
}

fn cmd_check_identity(path: &Path, name: &str, generic: bool) -> i32 {
    let entry = match load_single_algebra(path) {
        Ok(e) => e,
        Err(e) => return fail_usage(&e),
    };
    let specs: Vec<&'static IdentitySpec> = if let Some(spec) = identity(name) {
        vec![spec]
    } else if let Some(specs) = variety_identities(name) {
        specs
    } else {
        return fail_usage(&format!("unknown identity or variety tag {name:?}"));
    };
    let a = &entry.presentation;
    let mut failed = false;
    for spec in specs {
        match a.check_identity(spec, generic) {
            None => println!("pass {} satisfies {}", a.name(), spec.name),
            Some(w) => {
                failed = true;
                println!("fail {} violates {}: {w}", a.name(), spec.name);
            }
        }
    }
    if failed {
        1
    } else {
        0
    }
}

fn cmd_cohomology(path: &Path, variety: &str) -> i32 {
    let entry = match load_single_algebra(path) {
        Ok(e) => e,
        Err(e) => return fail_usage(&e),
    };
    let a = &entry.presentation;
    let spaces = match cohomology_basis(a, variety) {
        Ok(s) => s,
        Err(e) => return fail_usage(&e),
    };
    println!("algebra {} (dimension {}), variety {}", a.name(), a.dim(), variety);
    println!("dim Z2 = {}", spaces.z2.dim());
    println!("dim B2 = {}", spaces.b2.dim());
    println!("dim H2 = {}", spaces.h2_dim());
    println!("dim symmetric H2 = {}", spaces.h2_sym_dim());
    println!("H2 representatives:");
    for rep in &spaces.h2_reps {
        println!("  {}", cochain_string(rep, a.dim()));
    }
    0
}

/// Kinds whose checks are owned by an algebra entry rather than a
/// certificate; in `--cert` mode these run only for algebras defined in the
/// certificate file itself.
const ALGEBRA_KINDS: &[&str] = &["identity", "downstream", "nilpotency", "annihilator", "reconstruct"];

fn cmd_verify(
    cert: Option<&Path>,
    catalog_dir: Option<&Path>,
    filter: Option<&str>,
    jobs: usize,
    json: Option<&Path>,
    seed: u64,
) -> i32 {
    let env_dir = std::env::var_os("NILCLASS_CATALOG").map(PathBuf::from);
    let dir = catalog_dir.or(env_dir.as_deref());
    let (catalog, own_algebras) = match (cert, dir) {
        (None, None) => {
            return fail_usage("provide --cert or --catalog (or set NILCLASS_CATALOG)");
        }
        (None, Some(dir)) => match load_catalog(dir) {
            Ok(c) => (c, None),
            Err(e) => return fail_usage(&e),
        },
        (Some(cert), dir) => {
            let mut entries = match load_entries(cert) {
                Ok(e) => e,
                Err(e) => return fail_usage(&e),
            };
            let own: BTreeSet<String> = entries
                .iter()
                .filter_map(|e| match e {
                    CatalogEntry::Algebra(a) => Some(a.presentation.name().to_string()),
                    _ => None,
                })
                .collect();
            if let Some(dir) = dir {
                let support = match load_entries(dir) {
                    Ok(e) => e,
                    Err(e) => return fail_usage(&e),
                };
                for e in support {
                    if let CatalogEntry::Algebra(a) = &e {
                        if !own.contains(a.presentation.name()) {
                            entries.push(e);
                        }
                    }
                }
            }
            match Catalog::from_entries(entries) {
                Ok(c) => (c, Some(own)),
                Err(e) => return fail_usage(&e),
            }
        }
    };
    let mut checks = match build_checks(&catalog, filter) {
        Ok(c) => c,
        Err(e) => return fail_usage(&e),
    };
    if let Some(own) = &own_algebras {
        checks.retain(|c| {
            if !ALGEBRA_KINDS.contains(&c.kind()) {
                return true;
            }
            let id = c.id();
            id.split(':').nth(1).is_some_and(|subject| own.contains(subject))
        });
    }
    let report = run_checks(&catalog, &checks, &CheckEnv { seed }, jobs);
    if let Some(path) = json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            return fail_usage(&format!("{}: {e}", path.display()));
        }
    }
    print_report(&report);
    report.exit_code()
}

fn print_report(report: &Report) {
    for kind in KIND_ORDER {
        let group: Vec<_> = report.checks.iter().filter(|c| c.kind == *kind).collect();
        if group.is_empty() {
            continue;
        }
        println!("{kind} ({}):", group.len());
        for c in group {
            match &c.witness {
                Some(w) => println!("  {:<18} {}  [{w}]", c.status.as_str(), c.id),
                None => println!("  {:<18} {}", c.status.as_str(), c.id),
            }
        }
    }
    let s = &report.summary;
    println!(
        "{} checks: {} pass, {} pass-with-erratum, {} external, {} fail",
        s.total, s.pass, s.pass_with_erratum, s.external, s.fail
    );
}
