//! Exact arithmetic for the coefficient field tower Q ⊂ Q(i) ⊂ Q(i)(p1,...,pm).
//!
//! [`GaussianRational`] is the computable base field Q(i); [`Scalar`] is a
//! canonically reduced ratio of multivariate polynomials over it. Canonical
//! form is unique, so structural equality decides field equality.

mod gaussian;
mod poly;
mod scalar;
mod parser;

pub use gaussian::GaussianRational;
pub use poly::{Monomial, Poly};
pub use scalar::{Scalar, ScalarError};
pub use parser::{parse_cochain, parse_constant_equation, parse_expression, ParseError};

use std::fmt;
use std::sync::Arc;

/// Ordered list of parameter names shared by every value in a computation.
///
/// Names are kept sorted lexicographically; "i" is reserved by the expression
/// grammar and rejected. Mixing values from different contexts is a
/// programming error, not an implicit merge.
#[derive(Clone, Eq)]
pub struct Context(Arc<Vec<String>>);

impl Context {
    pub fn empty() -> Self {
        Context(Arc::new(Vec::new()))
    }

    /// Builds a context from parameter names; sorts and deduplicates.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, String> {
        let mut v: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            validate_name(n)?;
            v.push(n.to_string());
        }
        v.sort();
        v.dedup();
        Ok(Context(Arc::new(v)))
    }

    /// Context containing this one's names plus `extra`.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Self, String> {
        let mut v: Vec<String> = self.0.as_ref().clone();
        for n in extra {
            validate_name(n.as_ref())?;
            v.push(n.as_ref().to_string());
        }
        v.sort();
        v.dedup();
        Ok(Context(Arc::new(v)))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    /// True if every name of `self` also appears in `other`.
    pub fn subset_of(&self, other: &Context) -> bool {
        self.0.iter().all(|n| other.index(n).is_some())
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Context{:?}", self.0)
    }
}

fn validate_name(n: &str) -> Result<(), String> {
    if n == "i" {
        return Err("\"i\" is reserved for the imaginary unit".into());
    }
    let mut chars = n.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return Err(format!("invalid parameter name {n:?}: must match [a-z][a-z0-9_]*")),
    }
    if !chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
        return Err(format!("invalid parameter name {n:?}: must match [a-z][a-z0-9_]*"));
    }
    Ok(())
}
