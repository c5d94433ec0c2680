//! Algebra presentations by structure constants, and the invariants the
//! verifier extracts from them: identity checks, the power filtration and
//! nilpotency class, annihilators, derivations, quotients by the
//! annihilator, and an isomorphism-invariant fingerprint.

use crate::identities::{identity_names, Brack, IdentitySpec};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Context, GaussianRational, Scalar, ScalarError};
use std::collections::BTreeMap;
use std::fmt;

/// An n-dimensional algebra over the scalar field, presented by the
/// structure constants of a bilinear product: e_i e_j = sum_k c_{ij}^k e_k.
/// Indexes are 0-based; entry (i,j,k) lives at ((i*n)+j)*n+k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraPresentation {
    name: String,
    ctx: Context,
    dim: usize,
    consts: Vec<Scalar>,
}

impl AlgebraPresentation {
    pub fn zero_product(name: &str, ctx: &Context, dim: usize) -> Self {
        AlgebraPresentation {
            name: name.to_string(),
            ctx: ctx.clone(),
            dim,
            consts: vec![Scalar::zero(ctx); dim * dim * dim],
        }
    }

    pub fn from_products(
        name: &str,
        ctx: &Context,
        dim: usize,
        products: &[(usize, usize, usize, Scalar)],
    ) -> Self {
        let mut a = Self::zero_product(name, ctx, dim);
        for (i, j, k, v) in products {
            assert!(*i < dim && *j < dim && *k < dim, "index out of range");
            assert!(v.ctx() == ctx, "constant context mismatch");
            let idx = ((i * dim) + j) * dim + k;
            a.consts[idx] = &a.consts[idx] + v;
        }
        a
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rename(&self, name: &str) -> Self {
        let mut a = self.clone();
        a.name = name.to_string();
        a
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.consts[((i * self.dim) + j) * self.dim + k]
    }

    pub fn set_c(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        assert!(v.ctx() == &self.ctx, "constant context mismatch");
        self.consts[((i * self.dim) + j) * self.dim + k] = v;
    }

    /// The product e_i e_j as a coordinate vector.
    pub fn product_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    /// Bilinear extension of the product to coordinate vectors.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![Scalar::zero(&self.ctx); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..self.dim {
                    if !self.c(i, j, k).is_zero() {
                        out[k] = &out[k] + &(&f * self.c(i, j, k));
                    }
                }
            }
        }
        out
    }

    /// Re-expresses every constant over a superset context.
    pub fn with_context(&self, target: &Context) -> Result<Self, ScalarError> {
        Ok(AlgebraPresentation {
            name: self.name.clone(),
            ctx: target.clone(),
            dim: self.dim,
            consts: self
                .consts
                .iter()
                .map(|v| v.with_context(target))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Substitutes scalar values for parameters in every constant.
    pub fn map_params(
        &self,
        target: &Context,
        map: &BTreeMap<String, Scalar>,
    ) -> Result<Self, ScalarError> {
        Ok(AlgebraPresentation {
            name: self.name.clone(),
            ctx: target.clone(),
            dim: self.dim,
            consts: self
                .consts
                .iter()
                .map(|v| v.map_params(target, map))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Evaluates every constant at a rational point, yielding a
    /// parameter-free presentation.
    pub fn specialize(
        &self,
        assignment: &BTreeMap<String, GaussianRational>,
    ) -> Result<Self, ScalarError> {
        let empty = Context::empty();
        Ok(AlgebraPresentation {
            name: self.name.clone(),
            ctx: empty.clone(),
            dim: self.dim,
            consts: self
                .consts
                .iter()
                .map(|v| v.evaluate(assignment).map(|q| Scalar::constant(&empty, q)))
                .collect::<Result<_, _>>()?,
        })
    }

    fn eval_brack(&self, b: &Brack, args: &[Vec<Scalar>]) -> Vec<Scalar> {
        match b {
            Brack::Leaf(v) => args[*v].clone(),
            Brack::Prod(x, y) => {
                let xv = self.eval_brack(x, args);
                let yv = self.eval_brack(y, args);
                self.product(&xv, &yv)
            }
        }
    }

    /// The identity's formal sum evaluated at concrete argument vectors.
    pub fn eval_identity(&self, spec: &IdentitySpec, args: &[Vec<Scalar>]) -> Vec<Scalar> {
        assert_eq!(args.len(), spec.nvars);
        let mut acc = vec![Scalar::zero(&self.ctx); self.dim];
        for (coeff, b) in &spec.terms {
            let term = self.eval_brack(b, args);
            let c = Scalar::constant(&self.ctx, coeff.clone());
            for k in 0..self.dim {
                acc[k] = &acc[k] + &(&c * &term[k]);
            }
        }
        acc
    }

    /// Checks the identity on every tuple of basis vectors. Sound as a proof
    /// of the identity only when the spec is multilinear.
    fn check_on_basis(&self, spec: &IdentitySpec) -> Option<IdentityWitness> {
        let mut tuple = vec![0usize; spec.nvars];
        loop {
            let args: Vec<Vec<Scalar>> = tuple.iter().map(|&b| self.basis_vector(b)).collect();
            let v = self.eval_identity(spec, &args);
            if let Some(k) = v.iter().position(|x| !x.is_zero()) {
                return Some(IdentityWitness::Basis {
                    args: tuple.clone(),
                    component: k,
                    value: v[k].clone(),
                });
            }
            // next tuple in odometer order
            let mut pos = spec.nvars;
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < self.dim {
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }

    /// Checks the identity with fully generic arguments: each variable gets
    /// fresh indeterminate coordinates, so this is a proof for any identity,
    /// multilinear or not.
    fn check_generic(&self, spec: &IdentitySpec) -> Option<IdentityWitness> {
        // fresh coordinate names, shielded from collisions with self.ctx
        let mut prefix = "g".to_string();
        let name_of = |prefix: &str, v: usize, b: usize| format!("{prefix}{v}_{b}");
        loop {
            let collides = (0..spec.nvars).any(|v| {
                (0..self.dim).any(|b| self.ctx.index(&name_of(&prefix, v, b)).is_some())
            });
            if !collides {
                break;
            }
            prefix.push('g');
        }
        let mut names: Vec<String> = self.ctx.names().to_vec();
        for v in 0..spec.nvars {
            for b in 0..self.dim {
                names.push(name_of(&prefix, v, b));
            }
        }
        let big = Context::new(&names).unwrap();
        let lifted = self.with_context(&big).unwrap();
        let args: Vec<Vec<Scalar>> = (0..spec.nvars)
            .map(|v| {
                (0..self.dim)
                    .map(|b| Scalar::param(&big, &name_of(&prefix, v, b)))
                    .collect()
            })
            .collect();
        let val = lifted.eval_identity(spec, &args);
        val.iter().position(|x| !x.is_zero()).map(|k| IdentityWitness::Generic {
            component: k,
            value: val[k].to_string(),
        })
    }

    /// None when the identity holds. Multilinear identities are decided on
    /// basis tuples; the rest (and any caller passing `force_generic`) get
    /// generic indeterminate arguments.
    pub fn check_identity(
        &self,
        spec: &IdentitySpec,
        force_generic: bool,
    ) -> Option<IdentityWitness> {
        if spec.is_multilinear() && !force_generic {
            self.check_on_basis(spec)
        } else {
            self.check_generic(spec)
        }
    }

    pub fn basis_vector(&self, b: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(&self.ctx); self.dim];
        v[b] = Scalar::one(&self.ctx);
        v
    }

    fn full_space(&self) -> Subspace {
        let rows: Vec<Vec<Scalar>> = (0..self.dim).map(|b| self.basis_vector(b)).collect();
        Subspace::from_spanning(&self.ctx, self.dim, &rows)
    }

    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut prods = Vec::new();
        for x in u.basis() {
            for y in v.basis() {
                prods.push(self.product(x, y));
            }
        }
        Subspace::from_spanning(&self.ctx, self.dim, &prods)
    }

    /// The power filtration A^1 = A, A^k = sum of A^p A^q over p+q = k.
    /// Stops at the first zero term, or after 2*dim+2 terms for a product
    /// that never dies (the chain is decreasing but may stall before
    /// dropping again, so a single repeat is not a stopping criterion).
    pub fn power_filtration(&self) -> Vec<Subspace> {
        let cap = 2 * self.dim + 2;
        let mut powers = vec![self.full_space()];
        while powers.len() < cap {
            let k = powers.len() + 1; // computing A^k
            let mut next = Subspace::zero(&self.ctx, self.dim);
            for p in 1..k {
                let q = k - p;
                next = next.add(&self.subspace_product(&powers[p - 1], &powers[q - 1]));
            }
            let dead = next.is_zero();
            powers.push(next);
            if dead {
                break;
            }
        }
        powers
    }

    /// Smallest c with A^{c+1} = 0; None when the filtration never reaches
    /// zero (the algebra is not nilpotent).
    pub fn nilpotency_class(&self) -> Option<usize> {
        let powers = self.power_filtration();
        powers.iter().position(Subspace::is_zero)
    }

    /// Matrix of y -> x y in the basis (rows = output coordinates).
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zero(&self.ctx, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.product(x, &self.basis_vector(j));
            for k in 0..self.dim {
                m.set(k, j, col[k].clone());
            }
        }
        m
    }

    /// Matrix of y -> y x in the basis.
    pub fn right_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zero(&self.ctx, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.product(&self.basis_vector(j), x);
            for k in 0..self.dim {
                m.set(k, j, col[k].clone());
            }
        }
        m
    }

    /// Two-sided annihilator {x : xA = Ax = 0}.
    pub fn annihilator(&self) -> Subspace {
        // rows: for each basis e_j and output k, the functionals
        // x -> (x e_j)_k and x -> (e_j x)_k
        let mut rows = Vec::with_capacity(2 * self.dim * self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                rows.push((0..self.dim).map(|i| self.c(i, j, k).clone()).collect());
                rows.push((0..self.dim).map(|i| self.c(j, i, k).clone()).collect());
            }
        }
        let m = Matrix::from_rows(&self.ctx, rows);
        Subspace::from_spanning(&self.ctx, self.dim, &m.nullspace())
    }

    /// Space of derivations D(xy) = D(x)y + x D(y), as flattened matrices:
    /// coordinate a*dim+b is the entry D[a][b], where column b holds the
    /// image of e_b.
    pub fn derivation_space(&self) -> Subspace {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut row = vec![Scalar::zero(&self.ctx); n * n];
                    for l in 0..n {
                        // + c_{ij}^l D[k][l]
                        row[k * n + l] = &row[k * n + l] + self.c(i, j, l);
                        // - D[l][i] c_{lj}^k
                        row[l * n + i] = &row[l * n + i] - self.c(l, j, k);
                        // - D[l][j] c_{il}^k
                        row[l * n + j] = &row[l * n + j] - self.c(i, l, k);
                    }
                    rows.push(row);
                }
            }
        }
        let m = Matrix::from_rows(&self.ctx, rows);
        Subspace::from_spanning(&self.ctx, n * n, &m.nullspace())
    }

    pub fn derivation_dim(&self) -> usize {
        self.derivation_space().dim()
    }

    /// Directly checks the derivation property of a matrix (columns are
    /// images of basis vectors).
    pub fn is_derivation(&self, d: &Matrix) -> bool {
        assert_eq!(d.rows(), self.dim);
        assert_eq!(d.cols(), self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let de_i: Vec<Scalar> = (0..self.dim).map(|a| d.at(a, i).clone()).collect();
                let de_j: Vec<Scalar> = (0..self.dim).map(|a| d.at(a, j).clone()).collect();
                let lhs = d.mul_vec(&self.product_basis(i, j));
                let mut rhs = self.product(&de_i, &self.basis_vector(j));
                let rhs2 = self.product(&self.basis_vector(i), &de_j);
                for k in 0..self.dim {
                    rhs[k] = &rhs[k] + &rhs2[k];
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Derivative of the structure tensor along each elementary matrix
    /// E_ab: row a*n+b, column ((i*n)+j)*n+k. The row space is the tangent
    /// space of the conjugation orbit at this point, so its rank is
    /// n^2 - dim Der.
    pub fn orbit_tangent_matrix(&self) -> Matrix {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut row = vec![Scalar::zero(&self.ctx); n * n * n];
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let idx = ((i * n) + j) * n + k;
                            let mut v = Scalar::zero(&self.ctx);
                            if k == a {
                                v = &v + self.c(i, j, b);
                            }
                            if b == i {
                                v = &v - self.c(a, j, k);
                            }
                            if b == j {
                                v = &v - self.c(i, a, k);
                            }
                            row[idx] = v;
                        }
                    }
                }
                rows.push(row);
            }
        }
        Matrix::from_rows(&self.ctx, rows)
    }

    /// Checks that phi (columns = images of basis vectors) is an algebra
    /// homomorphism into `target`; returns the first failing basis pair.
    pub fn homomorphism_failure(
        &self,
        phi: &Matrix,
        target: &AlgebraPresentation,
    ) -> Option<(usize, usize)> {
        assert_eq!(phi.cols(), self.dim);
        assert_eq!(phi.rows(), target.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = phi.mul_vec(&self.product_basis(i, j));
                let phi_i: Vec<Scalar> = (0..target.dim).map(|a| phi.at(a, i).clone()).collect();
                let phi_j: Vec<Scalar> = (0..target.dim).map(|a| phi.at(a, j).clone()).collect();
                let rhs = target.product(&phi_i, &phi_j);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Splits the algebra along its annihilator: picks the standard basis
    /// vectors away from the annihilator's pivot coordinates as a section,
    /// and returns the quotient product together with the annihilator-valued
    /// part of the section's products.
    pub fn quotient_by_annihilator(&self) -> QuotientData {
        let ann = self.annihilator();
        let pivot_coords: Vec<usize> = ann
            .basis()
            .iter()
            .map(|row| row.iter().position(|v| !v.is_zero()).unwrap())
            .collect();
        let complement: Vec<usize> =
            (0..self.dim).filter(|c| !pivot_coords.contains(c)).collect();
        let m = complement.len();
        let a = ann.dim();
        assert_eq!(m + a, self.dim);

        // change of basis: columns are complement vectors then ann basis
        let mut b = Matrix::zero(&self.ctx, self.dim, self.dim);
        for (col, &c) in complement.iter().enumerate() {
            b.set(c, col, Scalar::one(&self.ctx));
        }
        for (s, v) in ann.basis().iter().enumerate() {
            for r in 0..self.dim {
                b.set(r, m + s, v[r].clone());
            }
        }
        let binv = b.invert().expect("section plus annihilator spans");

        let mut quotient = AlgebraPresentation::zero_product(&self.name, &self.ctx, m);
        let mut theta = vec![vec![Scalar::zero(&self.ctx); m * m]; a];
        for (qi, &i) in complement.iter().enumerate() {
            for (qj, &j) in complement.iter().enumerate() {
                let coords = binv.mul_vec(&self.product_basis(i, j));
                for (qk, coord) in coords.iter().take(m).enumerate() {
                    quotient.set_c(qi, qj, qk, coord.clone());
                }
                for s in 0..a {
                    theta[s][qi * m + qj] = coords[m + s].clone();
                }
            }
        }
        QuotientData { quotient, complement, ann, theta }
    }

    /// Rank data of the symmetrized and antisymmetrized products: the
    /// dimensions of span{e_i e_j + e_j e_i} and span{e_i e_j - e_j e_i}.
    pub fn sym_antisym_ranks(&self) -> (usize, usize) {
        let mut sym = Vec::new();
        let mut anti = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                let pij = self.product_basis(i, j);
                let pji = self.product_basis(j, i);
                sym.push(
                    pij.iter()
                        .zip(&pji)
                        .map(|(x, y)| x + y)
                        .collect::<Vec<_>>(),
                );
                if i != j {
                    anti.push(
                        pij.iter()
                            .zip(&pji)
                            .map(|(x, y)| x - y)
                            .collect::<Vec<_>>(),
                    );
                }
            }
        }
        (
            Subspace::from_spanning(&self.ctx, self.dim, &sym).dim(),
            Subspace::from_spanning(&self.ctx, self.dim, &anti).dim(),
        )
    }

    /// Isomorphism-invariant summary used to tell specializations apart.
    pub fn fingerprint(&self) -> Fingerprint {
        let powers = self.power_filtration();
        let (sym_rank, antisym_rank) = self.sym_antisym_ranks();
        let identities = identity_names()
            .iter()
            .map(|n| {
                let spec = crate::identities::identity(n).unwrap();
                (n.to_string(), self.check_identity(spec, false).is_none())
            })
            .collect();
        Fingerprint {
            dim: self.dim,
            power_dims: powers.iter().skip(1).map(Subspace::dim).collect(),
            ann_dim: self.annihilator().dim(),
            der_dim: self.derivation_dim(),
            class: self.nilpotency_class(),
            sym_rank,
            antisym_rank,
            identities,
        }
    }
}

#[derive(Debug, Clone)]
pub enum IdentityWitness {
    /// The identity fails on this tuple of basis vectors.
    Basis {
        args: Vec<usize>,
        component: usize,
        value: Scalar,
    },
    /// The identity fails with generic arguments; `value` prints the
    /// offending component polynomial in the fresh coordinates g{var}_{basis}.
    Generic { component: usize, value: String },
}

impl fmt::Display for IdentityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityWitness::Basis { args, component, value } => {
                let names: Vec<String> = args.iter().map(|b| format!("e{}", b + 1)).collect();
                write!(
                    f,
                    "fails at ({}) with e{}-component {}",
                    names.join(", "),
                    component + 1,
                    value
                )
            }
            IdentityWitness::Generic { component, value } => {
                write!(f, "fails generically with e{}-component {}", component + 1, value)
            }
        }
    }
}

pub struct QuotientData {
    pub quotient: AlgebraPresentation,
    /// Standard basis indexes used as the section of the quotient.
    pub complement: Vec<usize>,
    pub ann: Subspace,
    /// theta[s][i*m+j] = coefficient of the s-th annihilator basis vector in
    /// the product of section vectors i and j.
    pub theta: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub dim: usize,
    pub power_dims: Vec<usize>,
    pub ann_dim: usize,
    pub der_dim: usize,
    pub class: Option<usize>,
    pub sym_rank: usize,
    pub antisym_rank: usize,
    pub identities: Vec<(String, bool)>,
}
