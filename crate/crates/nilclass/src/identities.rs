//! Polynomial identities on a bilinear product, written as formal sums of
//! bracketings of variables, plus the named bundles ("varieties") the
//! verifier understands.

use crate::scalars::GaussianRational;
use once_cell::sync::Lazy;
use std::collections::BTreeMap;

/// A bracketing of variables: either variable `k` or a product of two
/// bracketings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Brack {
    Leaf(usize),
    Prod(Box<Brack>, Box<Brack>),
}

impl Brack {
    pub fn leaf(k: usize) -> Brack {
        Brack::Leaf(k)
    }

    pub fn prod(a: Brack, b: Brack) -> Brack {
        Brack::Prod(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Brack::Leaf(_) => 1,
            Brack::Prod(a, b) => a.degree() + b.degree(),
        }
    }

    fn count_leaves(&self, counts: &mut [u32]) {
        match self {
            Brack::Leaf(k) => counts[*k] += 1,
            Brack::Prod(a, b) => {
                a.count_leaves(counts);
                b.count_leaves(counts);
            }
        }
    }
}

/// An identity: the formal sum of `terms` must vanish for all values of the
/// `nvars` variables.
#[derive(Clone, Debug)]
pub struct IdentitySpec {
    pub name: &'static str,
    pub degree: u32,
    pub nvars: usize,
    pub terms: Vec<(GaussianRational, Brack)>,
}

impl IdentitySpec {
    /// True when every term uses every variable exactly once; such an
    /// identity holds identically as soon as it holds on basis tuples.
    pub fn is_multilinear(&self) -> bool {
        if self.nvars as u32 != self.degree {
            return false;
        }
        self.terms.iter().all(|(_, b)| {
            let mut counts = vec![0u32; self.nvars];
            b.count_leaves(&mut counts);
            counts.iter().all(|&c| c == 1)
        })
    }
}

fn one() -> GaussianRational {
    GaussianRational::one()
}

fn minus_one() -> GaussianRational {
    GaussianRational::from_int(-1)
}

fn l(k: usize) -> Brack {
    Brack::leaf(k)
}

fn p(a: Brack, b: Brack) -> Brack {
    Brack::prod(a, b)
}

static REGISTRY: Lazy<BTreeMap<&'static str, IdentitySpec>> = Lazy::new(|| {
    let mut m = BTreeMap::new();
    let mut add = |spec: IdentitySpec| {
        assert!(m.insert(spec.name, spec).is_none());
    };

    // xy - yx
    add(IdentitySpec {
        name: "commutative",
        degree: 2,
        nvars: 2,
        terms: vec![(one(), p(l(0), l(1))), (minus_one(), p(l(1), l(0)))],
    });

    // xy + yx
    add(IdentitySpec {
        name: "anticommutative",
        degree: 2,
        nvars: 2,
        terms: vec![(one(), p(l(0), l(1))), (one(), p(l(1), l(0)))],
    });

    // (xy)z - x(yz) + (yz)x - y(zx) - (yx)z + y(xz)
    add(IdentitySpec {
        name: "weakly-associative",
        degree: 3,
        nvars: 3,
        terms: vec![
            (one(), p(p(l(0), l(1)), l(2))),
            (minus_one(), p(l(0), p(l(1), l(2)))),
            (one(), p(p(l(1), l(2)), l(0))),
            (minus_one(), p(l(1), p(l(2), l(0)))),
            (minus_one(), p(p(l(1), l(0)), l(2))),
            (one(), p(l(1), p(l(0), l(2)))),
        ],
    });

    // x(yz) - (xy)z - y(xz)
    add(IdentitySpec {
        name: "left-leibniz",
        degree: 3,
        nvars: 3,
        terms: vec![
            (one(), p(l(0), p(l(1), l(2)))),
            (minus_one(), p(p(l(0), l(1)), l(2))),
            (minus_one(), p(l(1), p(l(0), l(2)))),
        ],
    });

    // (xy)z - (xz)y - x(yz)
    add(IdentitySpec {
        name: "right-leibniz",
        degree: 3,
        nvars: 3,
        terms: vec![
            (one(), p(p(l(0), l(1)), l(2))),
            (minus_one(), p(p(l(0), l(2)), l(1))),
            (minus_one(), p(l(0), p(l(1), l(2)))),
        ],
    });

    // (xy)z + (yz)x + (zx)y
    add(IdentitySpec {
        name: "jacobi",
        degree: 3,
        nvars: 3,
        terms: vec![
            (one(), p(p(l(0), l(1)), l(2))),
            (one(), p(p(l(1), l(2)), l(0))),
            (one(), p(p(l(2), l(0)), l(1))),
        ],
    });

    // (xy)z - x(yz)
    add(IdentitySpec {
        name: "associative",
        degree: 3,
        nvars: 3,
        terms: vec![
            (one(), p(p(l(0), l(1)), l(2))),
            (minus_one(), p(l(0), p(l(1), l(2)))),
        ],
    });

    // (xy)x - x(yx); x repeats, so this one needs the generic check
    add(IdentitySpec {
        name: "flexible",
        degree: 3,
        nvars: 2,
        terms: vec![
            (one(), p(p(l(0), l(1)), l(0))),
            (minus_one(), p(l(0), p(l(1), l(0)))),
        ],
    });

    // (xx)x
    add(IdentitySpec {
        name: "nil3-left",
        degree: 3,
        nvars: 1,
        terms: vec![(one(), p(p(l(0), l(0)), l(0)))],
    });

    // x(xx)
    add(IdentitySpec {
        name: "nil3-right",
        degree: 3,
        nvars: 1,
        terms: vec![(one(), p(l(0), p(l(0), l(0))))],
    });

    // (xy)z
    add(IdentitySpec {
        name: "xyz-left",
        degree: 3,
        nvars: 3,
        terms: vec![(one(), p(p(l(0), l(1)), l(2)))],
    });

    // x(yz)
    add(IdentitySpec {
        name: "xyz-right",
        degree: 3,
        nvars: 3,
        terms: vec![(one(), p(l(0), p(l(1), l(2))))],
    });

    m
});

pub fn identity(name: &str) -> Option<&'static IdentitySpec> {
    REGISTRY.get(name)
}

pub fn identity_names() -> Vec<&'static str> {
    REGISTRY.keys().copied().collect()
}

/// The identity bundle behind each named variety tag.
pub fn variety_identities(tag: &str) -> Option<Vec<&'static IdentitySpec>> {
    let names: &[&str] = match tag {
        "weakly-associative" => &["weakly-associative"],
        "symmetric-leibniz" => &["left-leibniz", "right-leibniz"],
        "commutative" => &["commutative"],
        "anticommutative" => &["anticommutative"],
        "lie" => &["anticommutative", "jacobi"],
        "two-step-nilpotent" => &["xyz-left", "xyz-right"],
        _ => return None,
    };
    Some(names.iter().map(|n| identity(n).unwrap()).collect())
}

pub fn variety_names() -> Vec<&'static str> {
    vec![
        "anticommutative",
        "commutative",
        "lie",
        "symmetric-leibniz",
        "two-step-nilpotent",
        "weakly-associative",
    ]
}
