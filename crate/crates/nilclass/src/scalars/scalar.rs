//! The rational function field Q(i)(p1,...,pm) with unique canonical forms.

use super::gaussian::GaussianRational;
use super::poly::Poly;
use super::Context;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator vanishes at the given point")]
    Pole,
    #[error("missing value for parameter {0:?}")]
    MissingParameter(String),
    #[error("parameter {0:?} is not in the target context")]
    ContextMismatch(String),
}

/// A reduced fraction num/den of polynomials. Invariants: den is nonzero,
/// gcd(num, den) = 1, and den is monic under the graded lex order. Because of
/// this, structural equality coincides with field equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    fn reduced(num: Poly, den: Poly) -> Scalar {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar { den: Poly::one(num.ctx()), num };
        }
        let g = Poly::gcd(&num, &den);
        let num = num.exact_div(&g).unwrap();
        let den = den.exact_div(&g).unwrap();
        let lc = den.leading().unwrap().1.clone();
        let lc_inv = lc.inv().unwrap();
        Scalar { num: num.scale(&lc_inv), den: den.scale(&lc_inv) }
    }

    pub fn from_poly(p: Poly) -> Scalar {
        let one = Poly::one(p.ctx());
        Scalar::reduced(p, one)
    }

    pub fn constant(ctx: &Context, c: GaussianRational) -> Scalar {
        Scalar::from_poly(Poly::constant(ctx, c))
    }

    pub fn zero(ctx: &Context) -> Scalar {
        Scalar::constant(ctx, GaussianRational::zero())
    }

    pub fn one(ctx: &Context) -> Scalar {
        Scalar::constant(ctx, GaussianRational::one())
    }

    pub fn i(ctx: &Context) -> Scalar {
        Scalar::constant(ctx, GaussianRational::i())
    }

    pub fn from_int(ctx: &Context, n: i64) -> Scalar {
        Scalar::constant(ctx, GaussianRational::from_int(n))
    }

    pub fn from_ratio(ctx: &Context, n: i64, d: i64) -> Scalar {
        Scalar::constant(ctx, GaussianRational::from_ratio(n, d))
    }

    pub fn param(ctx: &Context, name: &str) -> Scalar {
        let idx = ctx
            .index(name)
            .unwrap_or_else(|| panic!("parameter {name:?} not in context {ctx:?}"));
        Scalar::from_poly(Poly::param(ctx, idx))
    }

    pub fn ctx(&self) -> &Context {
        self.num.ctx()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Some(c) when the value is a constant of Q(i).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow_i(&self, e: i64) -> Option<Scalar> {
        if e >= 0 {
            Some(Scalar::reduced(self.num.pow(e as u32), self.den.pow(e as u32)))
        } else {
            let inv = self.inv()?;
            Some(Scalar::reduced(inv.num.pow((-e) as u32), inv.den.pow((-e) as u32)))
        }
    }

    /// Which parameters actually occur.
    pub fn used_params(&self) -> Vec<String> {
        let mut used = self.num.used_vars();
        for (u, v) in used.iter_mut().zip(self.den.used_vars()) {
            *u |= v;
        }
        used.iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(v, _)| self.ctx().names()[v].clone())
            .collect()
    }

    /// Evaluates at a point of Q(i). The assignment must cover every
    /// parameter that occurs; reduction has already happened at construction,
    /// so removable singularities cannot trigger false poles.
    pub fn evaluate(
        &self,
        assignment: &BTreeMap<String, GaussianRational>,
    ) -> Result<GaussianRational, ScalarError> {
        let point: Vec<Option<GaussianRational>> = self
            .ctx()
            .names()
            .iter()
            .map(|n| assignment.get(n).cloned())
            .collect();
        let den = self
            .den
            .eval_points(&point)
            .map_err(|v| ScalarError::MissingParameter(self.ctx().names()[v].clone()))?;
        if den.is_zero() {
            return Err(ScalarError::Pole);
        }
        let num = self
            .num
            .eval_points(&point)
            .map_err(|v| ScalarError::MissingParameter(self.ctx().names()[v].clone()))?;
        Ok(num.checked_div(&den).unwrap())
    }

    /// Rebuilds the value over `target`, sending each parameter through `map`
    /// (which must return Scalars over `target`). Parameters not remapped by
    /// `map` must exist in `target` and pass through unchanged. Errors when
    /// the substituted denominator collapses to zero.
    pub fn map_params(
        &self,
        target: &Context,
        map: &BTreeMap<String, Scalar>,
    ) -> Result<Scalar, ScalarError> {
        for s in map.values() {
            assert!(s.ctx() == target, "mapped value not over the target context");
        }
        let mut used = self.num.used_vars();
        for (u, v) in used.iter_mut().zip(self.den.used_vars()) {
            *u |= v;
        }
        let assign: Vec<Scalar> = self
            .ctx()
            .names()
            .iter()
            .enumerate()
            .map(|(v, n)| match map.get(n) {
                Some(s) => Ok(s.clone()),
                None => {
                    if target.index(n).is_some() {
                        Ok(Scalar::param(target, n))
                    } else if !used[v] {
                        // absent from the expression, any placeholder works
                        Ok(Scalar::zero(target))
                    } else {
                        Err(ScalarError::ContextMismatch(n.clone()))
                    }
                }
            })
            .collect::<Result<_, _>>()?;
        let num = eval_poly_scalars(&self.num, target, &assign);
        let den = eval_poly_scalars(&self.den, target, &assign);
        if den.is_zero() {
            return Err(ScalarError::Pole);
        }
        num.checked_div(&den).ok_or(ScalarError::Pole)
    }

    /// Exact composition: replaces parameter `name` by `value` (over the same
    /// context). Errors if the denominator becomes identically zero.
    pub fn substitute(&self, name: &str, value: &Scalar) -> Result<Scalar, ScalarError> {
        let mut map = BTreeMap::new();
        map.insert(name.to_string(), value.clone());
        self.map_params(self.ctx(), &map)
    }

    /// Re-expresses over a superset context (pure renaming of coordinates).
    pub fn with_context(&self, target: &Context) -> Result<Scalar, ScalarError> {
        if self.ctx() == target {
            return Ok(self.clone());
        }
        self.map_params(target, &BTreeMap::new())
    }

    /// Quotient-rule derivative with respect to a parameter.
    pub fn derivative(&self, name: &str) -> Scalar {
        let var = self
            .ctx()
            .index(name)
            .unwrap_or_else(|| panic!("parameter {name:?} not in context"));
        let n = self.num.derivative(var).mul(&self.den);
        let d = self.num.mul(&self.den.derivative(var));
        Scalar::reduced(n.sub(&d), self.den.mul(&self.den))
    }
}

/// Evaluates a polynomial with every parameter replaced by a Scalar.
fn eval_poly_scalars(p: &Poly, target: &Context, assign: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero(target);
    let mut pow_cache: Vec<Vec<Scalar>> = vec![vec![Scalar::one(target)]; p.ctx().arity()];
    for (m, c) in p.terms() {
        let mut t = Scalar::constant(target, c.clone());
        for (var, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let cache = &mut pow_cache[var];
            while cache.len() <= e as usize {
                let next = &cache[cache.len() - 1] * &assign[var];
                cache.push(next);
            }
            t = &t * &cache[e as usize];
        }
        acc = &acc + &t;
    }
    acc
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Scalar::reduced(num, self.den.mul(&rhs.den))
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let num = self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den));
        Scalar::reduced(num, self.den.mul(&rhs.den))
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::reduced(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
