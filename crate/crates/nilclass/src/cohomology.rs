//! Second cohomology of an algebra relative to a variety's identities, and
//! the central-extension machinery built on it: cocycle and coboundary
//! spaces, annihilators of cochains, automorphism pullback, and the
//! extension construction itself.

use crate::algebra::AlgebraPresentation;
use crate::identities::{variety_identities, Brack, IdentitySpec};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Context, GaussianRational, Scalar};

/// A bilinear form tuple theta = (theta_1, ..., theta_s) on an n-dim space,
/// each component stored as a flat n^2 vector, row-major: entry i*n+j is
/// theta_l(e_i, e_j).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain {
    ctx: Context,
    dim: usize,
    components: Vec<Vec<Scalar>>,
}

impl Cochain {
    pub fn new(ctx: &Context, dim: usize, components: Vec<Vec<Scalar>>) -> Cochain {
        assert!(!components.is_empty(), "a cochain needs at least one component");
        for c in &components {
            assert_eq!(c.len(), dim * dim, "component has wrong shape");
            for v in c {
                assert!(v.ctx() == ctx, "component context mismatch");
            }
        }
        Cochain { ctx: ctx.clone(), dim, components }
    }

    pub fn single(ctx: &Context, dim: usize, values: Vec<Scalar>) -> Cochain {
        Cochain::new(ctx, dim, vec![values])
    }

    pub fn zero(ctx: &Context, dim: usize, s: usize) -> Cochain {
        Cochain::new(ctx, dim, vec![vec![Scalar::zero(ctx); dim * dim]; s])
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of components s (the dimension of the extension's new part).
    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, l: usize) -> &[Scalar] {
        &self.components[l]
    }

    pub fn value(&self, l: usize, i: usize, j: usize) -> &Scalar {
        &self.components[l][i * self.dim + j]
    }

    pub fn eval(&self, l: usize, x: &[Scalar], y: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut acc = Scalar::zero(&self.ctx);
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() || self.value(l, i, j).is_zero() {
                    continue;
                }
                acc = &acc + &(&(&x[i] * &y[j]) * self.value(l, i, j));
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.iter().all(Scalar::is_zero))
    }
}

/// The linear condition on theta equivalent to a degree-3 multilinear
/// identity holding on every annihilator-valued extension: a formal sum of
/// theta(left, right) symbols, where left/right are variables or single
/// products of variables.
pub struct CocycleCondition {
    pub terms: Vec<(GaussianRational, Brack, Brack)>,
}

/// Replaces the outermost product of each term with theta applied to the
/// (inner-evaluated) halves. Only multilinear degree-3 identities induce a
/// condition of this shape.
pub fn derive_cocycle_condition(spec: &IdentitySpec) -> Result<CocycleCondition, String> {
    if spec.degree != 3 {
        return Err(format!(
            "identity {:?} has degree {}, need 3",
            spec.name, spec.degree
        ));
    }
    if !spec.is_multilinear() {
        return Err(format!("identity {:?} is not multilinear", spec.name));
    }
    let mut terms = Vec::with_capacity(spec.terms.len());
    for (coeff, b) in &spec.terms {
        match b {
            Brack::Prod(x, y) => {
                terms.push((coeff.clone(), (**x).clone(), (**y).clone()));
            }
            Brack::Leaf(_) => return Err("degree-3 term cannot be a bare variable".into()),
        }
    }
    Ok(CocycleCondition { terms })
}

fn eval_half(a: &AlgebraPresentation, b: &Brack, args: &[Vec<Scalar>]) -> Vec<Scalar> {
    match b {
        Brack::Leaf(v) => args[*v].clone(),
        Brack::Prod(x, y) => {
            let xv = eval_half(a, x, args);
            let yv = eval_half(a, y, args);
            a.product(&xv, &yv)
        }
    }
}

/// Identity bundle whose cocycle conditions define Z^2 for a variety name,
/// plus whether the variety additionally demands symmetric cochains.
fn cocycle_identities(variety: &str) -> Option<(Vec<&'static IdentitySpec>, bool)> {
    match variety {
        "weakly-associative" => Some((variety_identities("weakly-associative").unwrap(), false)),
        // a commutative extension of a commutative base is automatically
        // weakly associative; the symmetry rows carry the real content
        "commutative" => Some((variety_identities("weakly-associative").unwrap(), true)),
        "symmetric-leibniz" => Some((variety_identities("symmetric-leibniz").unwrap(), false)),
        _ => None,
    }
}

pub fn cohomology_variety_names() -> Vec<&'static str> {
    vec!["commutative", "symmetric-leibniz", "weakly-associative"]
}

/// Renders a flat row-major bilinear form as a sum of `D[i][j]` terms.
pub fn cochain_string(v: &[Scalar], dim: usize) -> String {
    let mut out = String::new();
    for i in 0..dim {
        for j in 0..dim {
            let c = &v[i * dim + j];
            if c.is_zero() {
                continue;
            }
            let one = Scalar::one(c.ctx());
            let minus_one = -&one;
            let term = format!("D[{}][{}]", i + 1, j + 1);
            if out.is_empty() {
                if *c == one {
                    out = term;
                } else if *c == minus_one {
                    out = format!("-{term}");
                } else {
                    out = format!("({c})*{term}");
                }
            } else if *c == one {
                out.push_str(&format!(" + {term}"));
            } else if *c == minus_one {
                out.push_str(&format!(" - {term}"));
            } else {
                out.push_str(&format!(" + ({c})*{term}"));
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Constraint rows over the n^2 cochain coordinates: one row per identity
/// and basis triple, plus symmetry rows when requested.
fn constraint_rows(
    a: &AlgebraPresentation,
    conditions: &[CocycleCondition],
    symmetric: bool,
) -> Matrix {
    let n = a.dim();
    let ctx = a.ctx();
    let mut rows = Vec::new();
    for cond in conditions {
        let mut tuple = [0usize; 3];
        loop {
            let args: Vec<Vec<Scalar>> = tuple.iter().map(|&b| a.basis_vector(b)).collect();
            let mut row = vec![Scalar::zero(ctx); n * n];
            for (coeff, left, right) in &cond.terms {
                let u = eval_half(a, left, &args);
                let v = eval_half(a, right, &args);
                let c = Scalar::constant(ctx, coeff.clone());
                for p in 0..n {
                    if u[p].is_zero() {
                        continue;
                    }
                    for q in 0..n {
                        if v[q].is_zero() {
                            continue;
                        }
                        row[p * n + q] = &row[p * n + q] + &(&(&c * &u[p]) * &v[q]);
                    }
                }
            }
            rows.push(row);
            let mut pos = 3;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < n {
                    break;
                }
                tuple[pos] = 0;
            }
            if tuple == [0, 0, 0] {
                break;
            }
        }
    }
    if symmetric {
        for p in 0..n {
            for q in p + 1..n {
                let mut row = vec![Scalar::zero(ctx); n * n];
                row[p * n + q] = Scalar::one(ctx);
                row[q * n + p] = Scalar::from_int(ctx, -1);
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(ctx, rows)
}

/// Z^2 of the algebra relative to a variety, as a subspace of the n^2-dim
/// cochain coordinate space.
pub fn cocycle_space(a: &AlgebraPresentation, variety: &str) -> Result<Subspace, String> {
    let (specs, symmetric) =
        cocycle_identities(variety).ok_or_else(|| format!("unknown variety {variety:?}"))?;
    let conditions: Vec<CocycleCondition> = specs
        .iter()
        .map(|s| derive_cocycle_condition(s))
        .collect::<Result<_, _>>()?;
    let m = constraint_rows(a, &conditions, symmetric);
    Ok(Subspace::from_spanning(a.ctx(), a.dim() * a.dim(), &m.nullspace()))
}

/// B^2: the forms f(xy) over all linear functionals f. Its dimension equals
/// dim A^2.
pub fn coboundary_space(a: &AlgebraPresentation) -> Subspace {
    let n = a.dim();
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = vec![Scalar::zero(a.ctx()); n * n];
        for i in 0..n {
            for j in 0..n {
                row[i * n + j] = a.c(i, j, k).clone();
            }
        }
        rows.push(row);
    }
    Subspace::from_spanning(a.ctx(), n * n, &rows)
}

pub struct CohomologySpaces {
    pub z2: Subspace,
    pub b2: Subspace,
    /// Deterministic complement of B^2 inside Z^2: the Z^2 RREF basis rows
    /// that grow the span over B^2, in order.
    pub h2_reps: Vec<Vec<Scalar>>,
    /// The symmetric cochains inside Z^2.
    pub z2_sym: Subspace,
}

impl CohomologySpaces {
    pub fn h2_dim(&self) -> usize {
        self.h2_reps.len()
    }

    /// dim of Z^2_sym / (B^2 intersected with Z^2_sym).
    pub fn h2_sym_dim(&self) -> usize {
        // dim(U cap V) = dim U + dim V - dim(U + V)
        let inter =
            self.b2.dim() + self.z2_sym.dim() - self.b2.add(&self.z2_sym).dim();
        self.z2_sym.dim() - inter
    }
}

pub fn cohomology_basis(
    a: &AlgebraPresentation,
    variety: &str,
) -> Result<CohomologySpaces, String> {
    let z2 = cocycle_space(a, variety)?;
    let b2 = coboundary_space(a);
    if !b2.is_subspace_of(&z2) {
        return Err(format!(
            "coboundaries are not cocycles for {:?}: the base itself violates the variety",
            variety
        ));
    }
    let mut h2_reps = Vec::new();
    let mut span = b2.clone();
    for row in z2.basis() {
        if !span.contains(row) {
            h2_reps.push(row.clone());
            span = span.add(&Subspace::from_spanning(
                a.ctx(),
                a.dim() * a.dim(),
                std::slice::from_ref(row),
            ));
        }
    }
    // symmetric cocycles: impose antisymmetry-killing rows on top of Z2
    let n = a.dim();
    let sym_rows: Vec<Vec<Scalar>> = {
        let mut rows = Vec::new();
        for v in z2.basis() {
            rows.push(v.clone());
        }
        rows
    };
    let z2_sym = if sym_rows.is_empty() {
        Subspace::zero(a.ctx(), n * n)
    } else {
        // inside Z2, solve for combinations with symmetric values: x = a*B
        // with x_{pq} = x_{qp}; the residual conditions are linear in a
        let basis = z2.basis();
        let ctx = a.ctx();
        let mut cond_rows = Vec::new();
        for p in 0..n {
            for q in p + 1..n {
                cond_rows.push(
                    basis
                        .iter()
                        .map(|v| &v[p * n + q] - &v[q * n + p])
                        .collect::<Vec<_>>(),
                );
            }
        }
        let coeffs = Matrix::from_rows(ctx, cond_rows).nullspace();
        let vectors: Vec<Vec<Scalar>> = coeffs
            .iter()
            .map(|cv| {
                let mut x = vec![Scalar::zero(ctx); n * n];
                for (c, v) in cv.iter().zip(basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi = &*xi + &(c * vi);
                    }
                }
                x
            })
            .collect();
        Subspace::from_spanning(ctx, n * n, &vectors)
    };
    Ok(CohomologySpaces { z2, b2, h2_reps, z2_sym })
}

/// {x : theta_l(x, y) = theta_l(y, x) = 0 for all y and all components}.
pub fn cocycle_annihilator(theta: &Cochain) -> Subspace {
    let n = theta.dim();
    let ctx = theta.ctx();
    let mut rows = Vec::new();
    for l in 0..theta.arity() {
        for j in 0..n {
            rows.push((0..n).map(|i| theta.value(l, i, j).clone()).collect::<Vec<_>>());
            rows.push((0..n).map(|i| theta.value(l, j, i).clone()).collect::<Vec<_>>());
        }
    }
    let m = Matrix::from_rows(ctx, rows);
    Subspace::from_spanning(ctx, n, &m.nullspace())
}

/// The algebra A_theta on A + k^s: products of old basis vectors gain
/// theta-valued components on the new coordinates, and the new coordinates
/// annihilate everything.
pub fn central_extension(
    a: &AlgebraPresentation,
    theta: &Cochain,
    name: &str,
) -> AlgebraPresentation {
    assert!(theta.ctx() == a.ctx(), "cochain context mismatch");
    assert_eq!(theta.dim(), a.dim(), "cochain dimension mismatch");
    let n = a.dim();
    let s = theta.arity();
    let mut ext = AlgebraPresentation::zero_product(name, a.ctx(), n + s);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !a.c(i, j, k).is_zero() {
                    ext.set_c(i, j, k, a.c(i, j, k).clone());
                }
            }
            for l in 0..s {
                if !theta.value(l, i, j).is_zero() {
                    ext.set_c(i, j, n + l, theta.value(l, i, j).clone());
                }
            }
        }
    }
    ext
}

/// (phi* theta)_l (x, y) = theta_l(phi x, phi y); phi columns are images.
pub fn cocycle_pullback(theta: &Cochain, phi: &Matrix) -> Cochain {
    assert!(phi.ctx() == theta.ctx(), "map context mismatch");
    assert_eq!(phi.rows(), theta.dim());
    assert_eq!(phi.cols(), theta.dim());
    let n = theta.dim();
    let ctx = theta.ctx();
    let mut components = Vec::with_capacity(theta.arity());
    for l in 0..theta.arity() {
        let mut vals = vec![Scalar::zero(ctx); n * n];
        for i in 0..n {
            let phi_i: Vec<Scalar> = (0..n).map(|r| phi.at(r, i).clone()).collect();
            for j in 0..n {
                let phi_j: Vec<Scalar> = (0..n).map(|r| phi.at(r, j).clone()).collect();
                vals[i * n + j] = theta.eval(l, &phi_i, &phi_j);
            }
        }
        components.push(vals);
    }
    Cochain::new(ctx, n, components)
}

/// Verifies one normalization step of an orbit computation: phi must be an
/// automorphism of the base, and the pullback of theta_in along phi must be
/// a nonzero scalar multiple of theta_claimed (orbits of cocycle lines are
/// projective). Returns the ratio on success.
pub fn verify_orbit_step(
    a: &AlgebraPresentation,
    theta_in: &Cochain,
    phi: &Matrix,
    theta_claimed: &Cochain,
) -> Result<Scalar, String> {
    if theta_in.ctx() != a.ctx() || theta_claimed.ctx() != a.ctx() || phi.ctx() != a.ctx() {
        return Err("parameter context mismatch between base, cochains, and map".into());
    }
    if theta_in.arity() != 1 || theta_claimed.arity() != 1 {
        return Err("orbit steps compare single-component cocycle lines".into());
    }
    if theta_in.dim() != a.dim() || theta_claimed.dim() != a.dim() {
        return Err("cochain dimension mismatch".into());
    }
    if phi.invert().is_none() {
        return Err("the map is not invertible".into());
    }
    if let Some((i, j)) = a.homomorphism_failure(phi, a) {
        return Err(format!(
            "the map is not an automorphism: fails at (e{}, e{})",
            i + 1,
            j + 1
        ));
    }
    let pullback = cocycle_pullback(theta_in, phi);
    let pb = pullback.component(0);
    let cl = theta_claimed.component(0);
    let Some(first) = pb.iter().position(|v| !v.is_zero()) else {
        return Err("zero pullback".into());
    };
    let Some(first_cl) = cl.iter().position(|v| !v.is_zero()) else {
        return Err("claimed cocycle is zero".into());
    };
    if first != first_cl {
        return Err(format!(
            "not proportional: first nonzero coordinates differ ({first} vs {first_cl})"
        ));
    }
    let ratio = pb[first].checked_div(&cl[first]).unwrap();
    for (idx, (x, y)) in pb.iter().zip(cl).enumerate() {
        if x != &(&ratio * y) {
            let n = a.dim();
            return Err(format!(
                "not proportional at coordinate D[{}][{}]: pullback {}, {} * claimed {}",
                idx / n + 1,
                idx % n + 1,
                x,
                ratio,
                y
            ));
        }
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::identity;
    use crate::scalars::{parse_cochain, parse_expression};

    fn build(
        name: &str,
        params: &[&str],
        dim: usize,
        prods: &[(usize, usize, usize, &str)],
    ) -> AlgebraPresentation {
        let ctx = Context::new(params).unwrap();
        let products: Vec<(usize, usize, usize, Scalar)> = prods
            .iter()
            .map(|(i, j, k, e)| (*i, *j, *k, parse_expression(e, &ctx).unwrap()))
            .collect();
        AlgebraPresentation::from_products(name, &ctx, dim, &products)
    }

    fn c01() -> AlgebraPresentation {
        build("C_01", &[], 3, &[(0, 0, 1, "1")])
    }

    fn n01() -> AlgebraPresentation {
        build("N_01", &[], 3, &[(0, 1, 2, "1"), (1, 0, 2, "-1")])
    }

    fn n3() -> AlgebraPresentation {
        build("n_3", &[], 4, &[(0, 1, 2, "1"), (1, 0, 2, "-1")])
    }

    fn n4() -> AlgebraPresentation {
        build("n_4", &[], 4, &[
            (0, 1, 2, "1"),
            (1, 0, 2, "-1"),
            (1, 2, 3, "1"),
            (2, 1, 3, "-1"),
        ])
    }

    fn ch(a: &AlgebraPresentation, text: &str) -> Cochain {
        Cochain::single(a.ctx(), a.dim(), parse_cochain(text, a.ctx(), a.dim()).unwrap())
    }

    #[test]
    fn condition_derivation() {
        let wa = derive_cocycle_condition(identity("weakly-associative").unwrap()).unwrap();
        assert_eq!(wa.terms.len(), 6);
        let ll = derive_cocycle_condition(identity("left-leibniz").unwrap()).unwrap();
        assert_eq!(ll.terms.len(), 3);
        // each half of each term is a variable or a single product
        for (_, l, r) in &ll.terms {
            assert!(l.degree() + r.degree() == 3);
        }
        assert!(derive_cocycle_condition(identity("commutative").unwrap()).is_err());
        assert!(derive_cocycle_condition(identity("flexible").unwrap()).is_err());
    }

    #[test]
    fn cocycle_space_dims() {
        let a = c01();
        let z2 = cocycle_space(&a, "weakly-associative").unwrap();
        assert_eq!(z2.dim(), 7);
        // the two constraints are symmetry of the (1,2) and (2,3) slots
        assert!(z2.contains(&parse_cochain("D[1][2]+D[2][1]", a.ctx(), 3).unwrap()));
        assert!(!z2.contains(&parse_cochain("D[1][2]", a.ctx(), 3).unwrap()));
        // zero algebra: every form is a cocycle
        let zero = build("zero", &[], 3, &[]);
        assert_eq!(cocycle_space(&zero, "weakly-associative").unwrap().dim(), 9);
        // symmetric-Leibniz cocycles of C_01
        assert_eq!(cocycle_space(&a, "symmetric-leibniz").unwrap().dim(), 4);
        assert!(cocycle_space(&a, "frobnicated").is_err());
    }

    #[test]
    fn coboundaries() {
        let a = c01();
        let b2 = coboundary_space(&a);
        assert_eq!(b2.dim(), 1);
        assert!(b2.contains(&parse_cochain("D[1][1]", a.ctx(), 3).unwrap()));
        let b = n01();
        let b2 = coboundary_space(&b);
        assert_eq!(b2.dim(), 1);
        assert!(b2.contains(&parse_cochain("D[1][2]-D[2][1]", b.ctx(), 3).unwrap()));
        let zero = build("zero", &[], 3, &[]);
        assert!(coboundary_space(&zero).is_zero());
    }

    #[test]
    fn cohomology_dims_three_dim_bases() {
        let spaces = cohomology_basis(&c01(), "weakly-associative").unwrap();
        assert_eq!(spaces.z2.dim(), 7);
        assert_eq!(spaces.b2.dim(), 1);
        assert_eq!(spaces.h2_dim(), 6);
        // symmetric part: all 6 symmetric forms are cocycles, one coboundary
        assert_eq!(spaces.z2_sym.dim(), 6);
        assert_eq!(spaces.h2_sym_dim(), 5);

        let spaces = cohomology_basis(&c01(), "commutative").unwrap();
        assert_eq!(spaces.h2_dim(), 5);

        let spaces = cohomology_basis(&c01(), "symmetric-leibniz").unwrap();
        assert_eq!(spaces.h2_dim(), 3);

        let spaces = cohomology_basis(&n01(), "weakly-associative").unwrap();
        assert_eq!(spaces.z2.dim(), 6);
        assert_eq!(spaces.b2.dim(), 1);
        assert_eq!(spaces.h2_dim(), 5);
    }

    #[test]
    fn cohomology_dims_four_dim_bases() {
        let spaces = cohomology_basis(&n3(), "symmetric-leibniz").unwrap();
        assert_eq!(spaces.b2.dim(), 1);
        assert_eq!(spaces.h2_dim(), 10);
        let spaces = cohomology_basis(&n4(), "symmetric-leibniz").unwrap();
        assert_eq!(spaces.b2.dim(), 2);
        assert_eq!(spaces.h2_dim(), 5);
    }

    #[test]
    fn cohomology_dims_symbolic_parameter() {
        let a = build("N_02", &["lambda"], 3, &[
            (0, 0, 2, "lambda"),
            (1, 0, 2, "1"),
            (1, 1, 2, "1"),
        ]);
        let spaces = cohomology_basis(&a, "weakly-associative").unwrap();
        assert_eq!(spaces.h2_dim(), 3);
    }

    #[test]
    fn variety_violating_base_is_rejected() {
        // this base is not commutative, so B^2 contains asymmetric forms
        // outside the commutative Z^2
        let a = n01();
        assert!(cohomology_basis(&a, "commutative").is_err());
    }

    #[test]
    fn extension_reconstructs_target() {
        // C_01 extended by D[2][2] + alpha (D[1][3]+D[3][1]) + D[1][3]
        let ctx = Context::new(&["alpha"]).unwrap();
        let a = build("C_01", &["alpha"], 3, &[(0, 0, 1, "1")]);
        let theta = Cochain::single(
            &ctx,
            3,
            parse_cochain("D[2][2]+alpha*(D[1][3]+D[3][1])+D[1][3]", &ctx, 3).unwrap(),
        );
        let ext = central_extension(&a, &theta, "W_03");
        let expect = build("W_03", &["alpha"], 4, &[
            (0, 0, 1, "1"),
            (1, 1, 3, "1"),
            (0, 2, 3, "alpha+1"),
            (2, 0, 3, "alpha"),
        ]);
        assert_eq!(ext, expect);

        // n_3 extended by D[1][3]-D[3][1]+D[1][4]
        let base = n3();
        let theta = ch(&base, "D[1][3]-D[3][1]+D[1][4]");
        let ext = central_extension(&base, &theta, "S_40");
        let expect = build("S_40", &[], 5, &[
            (0, 1, 2, "1"),
            (1, 0, 2, "-1"),
            (0, 2, 4, "1"),
            (2, 0, 4, "-1"),
            (0, 3, 4, "1"),
        ]);
        assert_eq!(ext, expect);

        // zero cochain gives the split extension
        let split = central_extension(&base, &Cochain::zero(base.ctx(), 4, 2), "split");
        assert_eq!(split.dim(), 6);
        assert_eq!(split.annihilator().dim(), base.annihilator().dim() + 2);
    }

    #[test]
    fn extension_annihilator_decomposition() {
        // Ann(A_theta) = (Ann(theta) cap Ann(A)) + new coordinates
        let a = n01();
        let theta = ch(&a, "D[2][3]-D[3][2]");
        let ann_theta = cocycle_annihilator(&theta);
        assert_eq!(ann_theta.dim(), 1); // <e1>
        assert!(ann_theta.contains(&a.basis_vector(0)));
        let ann_a = a.annihilator(); // <e3>
        // intersection is zero
        assert_eq!(ann_theta.dim() + ann_a.dim() - ann_theta.add(&ann_a).dim(), 0);
        let ext = central_extension(&a, &theta, "S_05");
        assert_eq!(ext.annihilator().dim(), 1); // just the new coordinate
        assert!(ext.annihilator().contains(&ext.basis_vector(3)));
    }

    #[test]
    fn annihilator_of_single_form() {
        let ctx = Context::empty();
        let theta = Cochain::single(&ctx, 3, parse_cochain("D[1][3]", &ctx, 3).unwrap());
        let ann = cocycle_annihilator(&theta);
        assert_eq!(ann.dim(), 1);
        let mut e2 = vec![Scalar::zero(&ctx); 3];
        e2[1] = Scalar::one(&ctx);
        assert!(ann.contains(&e2));
        // zero cochain annihilates everything
        let z = Cochain::zero(&ctx, 3, 1);
        assert_eq!(cocycle_annihilator(&z).dim(), 3);
    }

    #[test]
    fn pullback_symbolic_coefficients() {
        // base with one square: the (2,2) slot of the pullback picks up x^4
        let params = ["a1", "a2", "a3", "a4", "a5", "a6", "r", "t", "x", "z"];
        let ctx = Context::new(&params).unwrap();
        let a = build("C_01", &params, 3, &[(0, 0, 1, "1")]);
        let e = |s: &str| parse_expression(s, &ctx).unwrap();
        // phi: e1 -> x e1 + z e2 + t e3, e2 -> x^2 e2, e3 -> r e2 + y e3;
        // y is pinned to x to keep the context small: e3 -> r e2 + x e3
        let phi = Matrix::from_rows(&ctx, vec![
            vec![e("x"), e("0"), e("0")],
            vec![e("z"), e("x^2"), e("r")],
            vec![e("t"), e("0"), e("x")],
        ]);
        assert_eq!(a.homomorphism_failure(&phi, &a), None);
        let theta = Cochain::single(&ctx, 3, parse_cochain(
            "a1*(D[1][2]+D[2][1])+a2*D[2][2]+a3*(D[1][3]+D[3][1])+a4*(D[2][3]+D[3][2])+a5*D[3][3]+a6*D[1][3]",
            &ctx, 3).unwrap());
        let pb = cocycle_pullback(&theta, &phi);
        assert_eq!(pb.value(0, 1, 1), &e("a2*x^4"));

        // antisymmetric base: the (1,3) slot factors through the determinant
        let params = ["a1", "a2", "a3", "a4", "a5", "r", "t", "w", "x", "y", "z"];
        let ctx = Context::new(&params).unwrap();
        let a = build("N_01", &params, 3, &[(0, 1, 2, "1"), (1, 0, 2, "-1")]);
        let e = |s: &str| parse_expression(s, &ctx).unwrap();
        let phi = Matrix::from_rows(&ctx, vec![
            vec![e("x"), e("y"), e("0")],
            vec![e("z"), e("w"), e("0")],
            vec![e("t"), e("r"), e("x*w-y*z")],
        ]);
        assert_eq!(a.homomorphism_failure(&phi, &a), None);
        let theta = Cochain::single(&ctx, 3, parse_cochain(
            "a1*D[1][1]+a2*D[1][2]+a3*D[2][2]+a4*(D[1][3]-D[3][1])+a5*(D[2][3]-D[3][2])",
            &ctx, 3).unwrap());
        let pb = cocycle_pullback(&theta, &phi);
        assert_eq!(pb.value(0, 0, 2), &e("(x*w-y*z)*(a4*x+a5*z)"));
        assert_eq!(pb.value(0, 2, 0), &e("-(x*w-y*z)*(a4*x+a5*z)"));

        // pullback along the identity is the identity
        let id = Matrix::identity(&ctx, 3);
        assert_eq!(cocycle_pullback(&theta, &id), theta);
    }

    #[test]
    fn orbit_step_exact_and_mismatch() {
        let a = n01();
        let theta_in = ch(&a, "D[1][1]+2*D[1][2]+2*D[2][2]+D[2][3]-D[3][2]");
        let claimed = ch(&a, "D[1][1]+D[2][2]+D[2][3]-D[3][2]");
        let ctx = a.ctx().clone();
        let e = |s: &str| parse_expression(s, &ctx).unwrap();
        // the e3-component of phi(e1) cancels the coboundary residue exactly
        let phi = Matrix::from_rows(&ctx, vec![
            vec![e("1"), e("-1"), e("0")],
            vec![e("0"), e("1"), e("0")],
            vec![e("1"), e("0"), e("1")],
        ]);
        let ratio = verify_orbit_step(&a, &theta_in, &phi, &claimed).unwrap();
        assert!(ratio.is_one());
        // without it the pullback differs from the claim by a coboundary
        let phi_bad = Matrix::from_rows(&ctx, vec![
            vec![e("1"), e("-1"), e("0")],
            vec![e("0"), e("1"), e("0")],
            vec![e("0"), e("0"), e("1")],
        ]);
        let err = verify_orbit_step(&a, &theta_in, &phi_bad, &claimed).unwrap_err();
        assert!(err.contains("not proportional"), "{err}");
        // zero input is an error, not a mismatch
        let zero = Cochain::zero(&ctx, 3, 1);
        let err = verify_orbit_step(&a, &zero, &phi, &claimed).unwrap_err();
        assert!(err.contains("zero pullback"), "{err}");
        // a non-automorphism is rejected even if invertible
        let not_auto = Matrix::from_rows(&ctx, vec![
            vec![e("1"), e("0"), e("0")],
            vec![e("0"), e("1"), e("0")],
            vec![e("0"), e("0"), e("2")],
        ]);
        let err = verify_orbit_step(&a, &theta_in, &not_auto, &claimed).unwrap_err();
        assert!(err.contains("automorphism"), "{err}");
    }

    #[test]
    fn orbit_step_symbolic_scaling() {
        let params = ["w", "x"];
        let ctx = Context::new(&params).unwrap();
        let a = build("N_01", &params, 3, &[(0, 1, 2, "1"), (1, 0, 2, "-1")]);
        let e = |s: &str| parse_expression(s, &ctx).unwrap();
        let phi = Matrix::from_rows(&ctx, vec![
            vec![e("x"), e("0"), e("0")],
            vec![e("0"), e("w"), e("0")],
            vec![e("0"), e("0"), e("x*w")],
        ]);
        let theta = Cochain::single(&ctx, 3, parse_cochain("D[2][3]-D[3][2]", &ctx, 3).unwrap());
        let ratio = verify_orbit_step(&a, &theta, &phi, &theta).unwrap();
        assert_eq!(ratio, e("x*w^2"));
    }

    #[test]
    fn symmetric_cocycle_gives_commutative_extension() {
        let a = c01();
        let theta = ch(&a, "D[1][2]+D[2][1]+D[3][3]+D[1][3]+D[3][1]");
        let ext = central_extension(&a, &theta, "ext");
        assert!(ext
            .check_identity(identity("commutative").unwrap(), false)
            .is_none());
        assert!(ext
            .check_identity(identity("weakly-associative").unwrap(), false)
            .is_none());
    }
}
