//! Multivariate polynomials over Q(i) with a graded lexicographic term order.
//!
//! The term order (total degree first, then lexicographic on the exponent
//! vector, earlier parameter more significant) fixes a unique leading term,
//! which is what makes monic normalization and hence canonical `Scalar`
//! representations possible.

use super::gaussian::GaussianRational;
use super::Context;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector; length equals the context arity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise division; None when some exponent would go negative.
    fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in the context's parameters. The term map never stores zero
/// coefficients; the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    ctx: Context,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly {
    pub fn zero(ctx: &Context) -> Self {
        Poly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Context, c: GaussianRational) -> Self {
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.arity()), c);
        }
        p
    }

    pub fn one(ctx: &Context) -> Self {
        Poly::constant(ctx, GaussianRational::one())
    }

    /// The parameter with the given context index, as a polynomial.
    pub fn param(ctx: &Context, idx: usize) -> Self {
        assert!(idx < ctx.arity(), "parameter index out of range");
        let mut exps = vec![0; ctx.arity()];
        exps[idx] = 1;
        let mut p = Poly::zero(ctx);
        p.terms.insert(Monomial(exps), GaussianRational::one());
        p
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.terms.is_empty() {
            return Some(GaussianRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Leading (greatest) term under the graded lex order.
    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Marks which parameters occur with nonzero exponent.
    pub fn used_vars(&self) -> Vec<bool> {
        let mut used = vec![false; self.ctx.arity()];
        for m in self.terms.keys() {
            for (u, &e) in used.iter_mut().zip(&m.0) {
                *u |= e > 0;
            }
        }
        used
    }

    fn assert_ctx(&self, other: &Poly) {
        assert!(
            self.ctx == other.ctx,
            "parameter context mismatch: {:?} vs {:?}",
            self.ctx,
            other.ctx
        );
    }

    fn insert_add(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_ctx(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_ctx(other);
        let mut out = Poly::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_add(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to the parameter at `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            out.insert_add(Monomial(exps), c * &GaussianRational::from_int(e as i64));
        }
        out
    }

    /// Exact division: Some(q) with self = q * d, None when d does not divide
    /// self (or d = 0).
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        self.assert_ctx(d);
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            let inv = c.inv()?;
            return Some(self.scale(&inv));
        }
        let (dm, dc) = d.leading().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ctx);
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(&dm)?;
            let qc = rc.checked_div(&dc).unwrap();
            let mut t = Poly::zero(&self.ctx);
            t.terms.insert(qm.clone(), qc.clone());
            quot.insert_add(qm, qc);
            rem = rem.sub(&t.mul(d));
        }
        Some(quot)
    }

    /// Divides by the leading coefficient, making the leading coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    /// Coefficients of self viewed as univariate in `var`: index = exponent.
    /// Every returned poly has `var`-degree 0.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(&self.ctx); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut exps = m.0.clone();
            exps[var] = 0;
            out[e].insert_add(Monomial(exps), c.clone());
        }
        out
    }

    fn from_coeffs_in(ctx: &Context, var: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(ctx);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                let mut exps = m.0.clone();
                exps[var] += e as u32;
                out.insert_add(Monomial(exps), k.clone());
            }
        }
        out
    }

    /// Evaluates at a full point of Q(i). `point[var] = None` is tolerated
    /// only for parameters that do not occur; otherwise Err(var index).
    pub fn eval_points(&self, point: &[Option<GaussianRational>]) -> Result<GaussianRational, usize> {
        assert_eq!(point.len(), self.ctx.arity());
        let used = self.used_vars();
        for (v, u) in used.iter().enumerate() {
            if *u && point[v].is_none() {
                return Err(v);
            }
        }
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[v].as_ref().unwrap().pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Greatest common divisor, normalized monic (or zero when both are zero).
    ///
    /// Recursive primitive-PRS: pick the highest occurring parameter as main
    /// variable, split into content and primitive part, run a primitive
    /// pseudo-remainder sequence on the primitive parts.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        a.assert_ctx(b);
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        let used_a = a.used_vars();
        let used_b = b.used_vars();
        let main = (0..a.ctx.arity()).rev().find(|&v| used_a[v] || used_b[v]);
        let main = match main {
            None => return Poly::one(&a.ctx), // both nonzero constants
            Some(v) => v,
        };
        let ca = a.coeffs_in(main);
        let cb = b.coeffs_in(main);
        let cont_a = content(&a.ctx, &ca);
        let cont_b = content(&a.ctx, &cb);
        let pa: Vec<Poly> = ca.iter().map(|c| c.exact_div(&cont_a).unwrap()).collect();
        let pb: Vec<Poly> = cb.iter().map(|c| c.exact_div(&cont_b).unwrap()).collect();
        let cont_gcd = Poly::gcd(&cont_a, &cont_b);

        // Primitive PRS on the primitive parts.
        let (mut f, mut g) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
        loop {
            if g.iter().all(|c| c.is_zero()) {
                break;
            }
            let r = prem(&a.ctx, &f, &g);
            f = g;
            g = primitive(&a.ctx, &r);
        }
        let pp_gcd = Poly::from_coeffs_in(&a.ctx, main, &f);
        cont_gcd.mul(&pp_gcd).monic()
    }
}

/// gcd of the coefficient list (content with respect to the main variable).
fn content(ctx: &Context, coeffs: &[Poly]) -> Poly {
    let mut acc = Poly::zero(ctx);
    for c in coeffs {
        if !c.is_zero() {
            acc = Poly::gcd(&acc, c);
            if acc.is_one() {
                break;
            }
        }
    }
    acc
}

fn trim(mut v: Vec<Poly>) -> Vec<Poly> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

/// Pseudo-remainder of coefficient vectors (univariate view over the poly
/// ring in the remaining parameters): repeatedly cancels the leading term
/// after scaling by the divisor's leading coefficient.
fn prem(ctx: &Context, f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let mut u = trim(f.to_vec());
    let g = trim(g.to_vec());
    let dg = g.len() - 1; // g nonzero by caller contract
    let lg = g[dg].clone();
    while u.len() >= g.len() && !u.is_empty() {
        let du = u.len() - 1;
        let lu = u[du].clone();
        // u := lg*u - lu * x^(du-dg) * g
        let shift = du - dg;
        let mut nu = vec![Poly::zero(ctx); du]; // degree drops by at least 1
        for (e, c) in u.iter().enumerate().take(du) {
            nu[e] = c.mul(&lg);
        }
        for (e, c) in g.iter().enumerate().take(dg) {
            nu[e + shift] = nu[e + shift].sub(&c.mul(&lu));
        }
        u = trim(nu);
    }
    u
}

/// Divides a coefficient vector by its content.
fn primitive(ctx: &Context, f: &[Poly]) -> Vec<Poly> {
    if f.iter().all(|c| c.is_zero()) {
        return Vec::new();
    }
    let c = content(ctx, f);
    f.iter().map(|p| p.exact_div(&c).unwrap()).collect()
}

impl fmt::Display for Poly {
    /// Terms in descending order, grammar-conformant; round-trips through the
    /// expression parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ctx.names();
        for (pos, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_display();
            if pos == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let c_abs = if neg { -c } else { c.clone() };
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        names[v].clone()
                    } else {
                        format!("{}^{}", names[v], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", c_abs)?;
            } else if c_abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else if c_abs.is_sum_display() {
                write!(f, "({})*{}", c_abs, mono.join("*"))?;
            } else {
                write!(f, "{}*{}", c_abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}
