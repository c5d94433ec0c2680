//! Basis paths, contractions, and closed-set obstructions.
//!
//! A contraction certificate names a source family, a path of basis vectors
//! E_1(s),..,E_n(s) (rows of a matrix over the path parameter), and a limit
//! point s0. Verification rewrites the source structure constants in the
//! moving basis, checks every entry is pole-free at s0, evaluates there, and
//! compares the limit exactly against the claimed target. Everything happens
//! in Q(i)(s, aux); no floating point and no closure computations. Passing
//! certifies a sufficient condition for orbit-closure membership, not the
//! closure itself.
//!
//! Closed-set obstructions are conjunctions of flag containments
//! A_p A_q <= A_r (for the flag A_i = <e_i,..,e_n>) and polynomial equations
//! in the structure constants. Membership is decided symbolically: an
//! equation holds only when it reduces to the zero rational function of the
//! family parameters, and is violated when it does not (a non-constant
//! violation can still vanish at special members; the report marks which).

use crate::algebra::AlgebraPresentation;
use crate::linalg::Matrix;
use crate::scalars::{parse_constant_equation, Context, GaussianRational, Scalar, ScalarError};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

/// Rewrites `a` in the basis E_i = sum_j basis[i][j] e_j. Rows are the new
/// basis vectors. Fails when the rows do not span.
pub fn change_of_basis(a: &AlgebraPresentation, basis: &Matrix) -> Result<AlgebraPresentation, String> {
    let n = a.dim();
    if basis.rows() != n || basis.cols() != n {
        return Err(format!("basis must be {n}x{n}, got {}x{}", basis.rows(), basis.cols()));
    }
    if basis.ctx() != a.ctx() {
        return Err("basis and algebra use different parameter contexts".into());
    }
    // Coordinates of a vector v in the E-basis solve B^T x = v.
    let bt = basis.transpose();
    let btinv = bt.invert().ok_or_else(|| "basis rows are linearly dependent".to_string())?;
    let mut out = AlgebraPresentation::zero_product(a.name(), a.ctx(), n);
    for i in 0..n {
        for j in 0..n {
            let w = a.product(basis.row(i), basis.row(j));
            let coords = btinv.mul_vec(&w);
            for (k, ck) in coords.into_iter().enumerate() {
                out.set_c(i, j, k, ck);
            }
        }
    }
    Ok(out)
}

/// Specializes the source along the certificate, moves to the path basis,
/// takes the limit at `limit_point`, and compares exactly with the target.
/// `source_values` must cover every source parameter with expressions over
/// the certificate context (the path variable plus any auxiliary
/// parameters); `target_values` must cover every target parameter with
/// expressions over the auxiliary parameters alone. Returns the limit
/// presentation on success.
pub fn verify_degeneration(
    source: &AlgebraPresentation,
    source_values: &BTreeMap<String, Scalar>,
    basis: &Matrix,
    path_var: &str,
    limit_point: &GaussianRational,
    target: &AlgebraPresentation,
    target_values: &BTreeMap<String, Scalar>,
) -> Result<AlgebraPresentation, String> {
    let cert_ctx = basis.ctx().clone();
    if cert_ctx.index(path_var).is_none() {
        return Err(format!("path variable {path_var} is not in the certificate context"));
    }
    for name in source.ctx().names() {
        if !source_values.contains_key(name) {
            return Err(format!("source parameter {name} has no assigned path value"));
        }
    }
    let aux: Vec<String> = cert_ctx.names().iter().filter(|p| p.as_str() != path_var).cloned().collect();
    let aux_ctx = Context::new(&aux).map_err(|e| e.to_string())?;
    for name in target.ctx().names() {
        if !target_values.contains_key(name) {
            return Err(format!("target parameter {name} has no assigned value"));
        }
    }

    let src = source
        .map_params(&cert_ctx, source_values)
        .map_err(|e| format!("specializing source along the path: {e}"))?;
    let moved = change_of_basis(&src, basis)?;

    let n = moved.dim();
    let mut limit = AlgebraPresentation::zero_product(target.name(), &aux_ctx, n);
    let s0 = Scalar::constant(&cert_ctx, limit_point.clone());
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let at_limit = moved.c(i, j, k).substitute(path_var, &s0);
                let c = match at_limit {
                    Ok(v) => v,
                    Err(ScalarError::Pole) => {
                        return Err(format!(
                            "structure constant ({},{},{}) has a pole at the limit point: {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            moved.c(i, j, k)
                        ))
                    }
                    Err(e) => return Err(e.to_string()),
                };
                let c = c
                    .map_params(&aux_ctx, &BTreeMap::new())
                    .map_err(|e| format!("limit constant ({},{},{}): {e}", i + 1, j + 1, k + 1))?;
                limit.set_c(i, j, k, c);
            }
        }
    }

    let tgt = target
        .map_params(&aux_ctx, target_values)
        .map_err(|e| format!("specializing target: {e}"))?;
    if tgt.dim() != n {
        return Err(format!("source is {n}-dimensional but target is {}-dimensional", tgt.dim()));
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if limit.c(i, j, k) != tgt.c(i, j, k) {
                    return Err(format!(
                        "limit disagrees with target at ({},{},{}): limit has {}, target has {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        limit.c(i, j, k),
                        tgt.c(i, j, k)
                    ));
                }
            }
        }
    }
    Ok(limit)
}

/// Outcome of the derivation-dimension comparison for a contraction claim.
/// For a proper contraction (source and target structurally distinct) the
/// source must have strictly fewer derivations than the target; improper
/// claims (a family member contracting to itself) are exempt. When the
/// source parameter values move with the path variable the limit only lies
/// in the closure of a one-parameter union of orbits, so the specialized
/// source obeys the non-strict inequality instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerMonotonicity {
    pub proper: bool,
    /// Source parameter values depend on the path variable.
    pub moving: bool,
    pub source_der: usize,
    pub target_der: usize,
}

impl DerMonotonicity {
    pub fn holds(&self) -> bool {
        if !self.proper {
            return true;
        }
        if self.moving {
            self.source_der <= self.target_der
        } else {
            self.source_der < self.target_der
        }
    }
}

fn random_rational(rng: &mut StdRng) -> GaussianRational {
    let mut num: i64 = 0;
    while num == 0 {
        num = rng.gen_range(-12..=12);
    }
    let den: i64 = rng.gen_range(1..=8);
    GaussianRational::from_ratio(num, den)
}

fn sample_assignment(ctx: &Context, rng: &mut StdRng) -> BTreeMap<String, GaussianRational> {
    ctx.names().iter().map(|p| (p.clone(), random_rational(rng))).collect()
}

fn specialize_along(
    family: &AlgebraPresentation,
    values: &BTreeMap<String, Scalar>,
    assignment: &BTreeMap<String, GaussianRational>,
) -> Result<AlgebraPresentation, ScalarError> {
    let mut point = BTreeMap::new();
    for name in family.ctx().names() {
        let expr = values.get(name).ok_or_else(|| ScalarError::MissingParameter(name.clone()))?;
        point.insert(name.clone(), expr.evaluate(assignment)?);
    }
    family.specialize(&point)
}

/// Samples the certificate parameters at seeded random rationals and compares
/// generic derivation dimensions along the path. `source_values` are over the
/// certificate context and `target_values` over its auxiliary part, as in
/// [`verify_degeneration`]. Draws are retried at fresh points when a sample
/// hits a pole; the generic dimension is the minimum over the kept samples.
pub fn verify_der_monotonicity(
    source: &AlgebraPresentation,
    source_values: &BTreeMap<String, Scalar>,
    cert_ctx: &Context,
    path_var: &str,
    target: &AlgebraPresentation,
    target_values: &BTreeMap<String, Scalar>,
    seed: u64,
) -> Result<DerMonotonicity, String> {
    let moving =
        source_values.values().any(|v| v.used_params().iter().any(|p| p == path_var));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut kept = 0usize;
    let mut src_der = usize::MAX;
    let mut tgt_der = usize::MAX;
    let mut proper = false;
    let mut draws = 0usize;
    while kept < 3 {
        draws += 1;
        if draws > 60 {
            return Err("could not find enough pole-free specializations of the certificate".into());
        }
        let assignment = sample_assignment(cert_ctx, &mut rng);
        let src = match specialize_along(source, source_values, &assignment) {
            Ok(a) => a,
            Err(_) => continue,
        };
        let tgt = match specialize_along(target, target_values, &assignment) {
            Ok(a) => a,
            Err(_) => continue,
        };
        kept += 1;
        src_der = src_der.min(src.derivation_dim());
        tgt_der = tgt_der.min(tgt.derivation_dim());
        if src.fingerprint() != tgt.fingerprint() {
            proper = true;
        }
    }
    Ok(DerMonotonicity { proper, moving, source_der: src_der, target_der: tgt_der })
}

/// A Zariski-closed obstruction set: flag containments plus polynomial
/// equations in the structure constants (written with `c[i][j][k]` atoms,
/// 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSetSpec {
    /// (p, q, r), 1-based, meaning A_p A_q <= A_r with A_i = <e_i,..,e_n>
    /// and A_{n+1} = 0.
    pub flags: Vec<(usize, usize, usize)>,
    pub equations: Vec<String>,
}

/// First failed condition of a [`ClosedSetSpec`], with a witness value.
/// `constant` is true when the witness does not depend on the family
/// parameters, so every member of the family violates the condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetViolation {
    Flag { p: usize, q: usize, r: usize, i: usize, j: usize, k: usize, value: String, constant: bool },
    Equation { expr: String, value: String, constant: bool },
}

impl std::fmt::Display for SetViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SetViolation::Flag { p, q, r, i, j, k, value, .. } => write!(
                f,
                "A_{p} A_{q} <= A_{r} fails: c[{i}][{j}][{k}] = {value}"
            ),
            SetViolation::Equation { expr, value, .. } => {
                write!(f, "equation {expr} = 0 fails: value {value}")
            }
        }
    }
}

/// Decides whether `a` satisfies every condition of `spec`, symbolically in
/// the family parameters. `Ok(None)` means membership; `Ok(Some(v))` reports
/// the first violated condition. `Err` is reserved for malformed specs.
pub fn closed_set_membership(
    a: &AlgebraPresentation,
    spec: &ClosedSetSpec,
) -> Result<Option<SetViolation>, String> {
    let n = a.dim();
    for &(p, q, r) in &spec.flags {
        if p == 0 || q == 0 || r == 0 || p > n || q > n || r > n + 1 {
            return Err(format!("flag ({p},{q},{r}) is out of range for dimension {n}"));
        }
        for i in p..=n {
            for j in q..=n {
                for k in 1..r {
                    let c = a.c(i - 1, j - 1, k - 1);
                    if !c.is_zero() {
                        return Ok(Some(SetViolation::Flag {
                            p,
                            q,
                            r,
                            i,
                            j,
                            k,
                            value: c.to_string(),
                            constant: c.used_params().is_empty(),
                        }));
                    }
                }
            }
        }
    }
    for expr in &spec.equations {
        let resolve = |i: usize, j: usize, k: usize| a.c(i, j, k).clone();
        let value = parse_constant_equation(expr, a.ctx(), n, &resolve).map_err(|e| e.to_string())?;
        if !value.is_zero() {
            return Ok(Some(SetViolation::Equation {
                expr: expr.clone(),
                value: value.to_string(),
                constant: value.used_params().is_empty(),
            }));
        }
    }
    Ok(None)
}

/// Per-algebra record in a non-degeneration report.
#[derive(Debug, Clone)]
pub struct SetMembershipRecord {
    pub name: String,
    /// None when the algebra satisfies every condition.
    pub violation: Option<SetViolation>,
}

/// Verdict for a non-degeneration claim: every source lies in the closed set
/// and every target escapes it.
#[derive(Debug, Clone)]
pub struct NondegenerationOutcome {
    pub sources: Vec<SetMembershipRecord>,
    pub targets: Vec<SetMembershipRecord>,
}

impl NondegenerationOutcome {
    pub fn holds(&self) -> bool {
        self.sources.iter().all(|r| r.violation.is_none())
            && self.targets.iter().all(|r| r.violation.is_some())
    }

    pub fn first_defect(&self) -> Option<String> {
        for r in &self.sources {
            if let Some(v) = &r.violation {
                return Some(format!("source {} escapes the set: {v}", r.name));
            }
        }
        for r in &self.targets {
            if r.violation.is_none() {
                return Some(format!("target {} satisfies every condition", r.name));
            }
        }
        None
    }
}

/// Checks a separation claim: the closed set must contain every source
/// family (identically in its parameters) and exclude every target.
pub fn verify_nondegeneration(
    sources: &[&AlgebraPresentation],
    targets: &[&AlgebraPresentation],
    spec: &ClosedSetSpec,
) -> Result<NondegenerationOutcome, String> {
    let mut out = NondegenerationOutcome { sources: Vec::new(), targets: Vec::new() };
    for a in sources {
        out.sources.push(SetMembershipRecord {
            name: a.name().to_string(),
            violation: closed_set_membership(a, spec)?,
        });
    }
    for a in targets {
        out.targets.push(SetMembershipRecord {
            name: a.name().to_string(),
            violation: closed_set_membership(a, spec)?,
        });
    }
    Ok(out)
}

/// Dimension of the GL_n-orbit of a parameter-free presentation: n^2 minus
/// the derivation dimension.
pub fn orbit_dimension(a: &AlgebraPresentation) -> usize {
    a.dim() * a.dim() - a.derivation_dim()
}

/// Orbit rank together with the number of family parameters that move the
/// structure transversally to the orbit. `orbit + transverse` is the
/// dimension of the closure of the union of orbits over the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureDimension {
    pub orbit: usize,
    pub transverse: usize,
}

impl ClosureDimension {
    pub fn total(&self) -> usize {
        self.orbit + self.transverse
    }
}

/// Computes the generic orbit rank of the family and the transverse
/// parameter count, as the rank increment of the orbit-tangent matrix
/// extended with the rows d c_{ijk} / d(param) evaluated at seeded random
/// rational specializations. Rank is lower semicontinuous, so the maximum
/// over samples is the generic value.
pub fn closure_dimension(
    a: &AlgebraPresentation,
    seed: u64,
    samples: usize,
) -> Result<ClosureDimension, String> {
    let n = a.dim();
    let params = a.ctx().names().to_vec();
    if params.is_empty() {
        return Ok(ClosureDimension { orbit: orbit_dimension(a), transverse: 0 });
    }
    // d c_{ijk} / d p, symbolically, once per parameter.
    let mut deriv: Vec<Vec<Scalar>> = Vec::with_capacity(params.len());
    for p in &params {
        let mut row = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    row.push(a.c(i, j, k).derivative(p));
                }
            }
        }
        deriv.push(row);
    }

    let mut rng = StdRng::seed_from_u64(seed);
    let mut best: Option<ClosureDimension> = None;
    let mut kept = 0usize;
    let mut draws = 0usize;
    while kept < samples {
        draws += 1;
        if draws > 20 * samples + 20 {
            return Err("could not find enough pole-free specializations of the family".into());
        }
        let assignment = sample_assignment(a.ctx(), &mut rng);
        let point = match a.specialize(&assignment) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let tangent = point.orbit_tangent_matrix();
        let empty = Context::empty();
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(params.len());
        let mut ok = true;
        'outer: for row in &deriv {
            let mut evaluated = Vec::with_capacity(row.len());
            for s in row {
                match s.evaluate(&assignment) {
                    Ok(v) => evaluated.push(Scalar::constant(&empty, v)),
                    Err(_) => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            rows.push(evaluated);
        }
        if !ok {
            continue;
        }
        kept += 1;
        let r = tangent.rank();
        let extra = Matrix::from_rows(&empty, rows);
        let ext = Matrix::stack(&[&tangent, &extra]).rank();
        let cand = ClosureDimension { orbit: r, transverse: ext - r };
        best = Some(match best {
            None => cand,
            Some(b) if cand.total() > b.total() || (cand.total() == b.total() && cand.orbit > b.orbit) => cand,
            Some(b) => b,
        });
    }
    Ok(best.expect("samples > 0"))
}
