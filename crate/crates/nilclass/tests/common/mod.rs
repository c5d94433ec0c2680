//! Randomized suite drivers shared by the acceptance checklist and the
//! property tests. Each driver panics with a witness on the first violation
//! and returns the number of cases it covered, so callers can report counts.

// Each test binary pulls in its own subset of the drivers.
#![allow(dead_code)]

use nilclass::algebra::AlgebraPresentation;
use nilclass::catalog::{Catalog, CatalogEntry};
use nilclass::cohomology::{
    central_extension, coboundary_space, cocycle_annihilator, cocycle_pullback, cocycle_space,
    Cochain,
};
use nilclass::degeneration::change_of_basis;
use nilclass::identities::variety_identities;
use nilclass::linalg::Matrix;
use nilclass::scalars::{parse_cochain, Context, GaussianRational, Scalar};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::path::PathBuf;

pub fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

/// Small numerators and denominators keep the exact arithmetic cheap.
fn rational(rng: &mut StdRng) -> GaussianRational {
    GaussianRational::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn scalar(ctx: &Context, rng: &mut StdRng) -> Scalar {
    let mut s = Scalar::constant(ctx, rational(rng));
    if rng.gen_range(0..8) == 0 {
        s = &s + &(&Scalar::i(ctx) * &Scalar::constant(ctx, rational(rng)));
    }
    s
}

fn nonzero_scalar(ctx: &Context, rng: &mut StdRng) -> Scalar {
    let s = scalar(ctx, rng);
    if s.is_zero() {
        Scalar::one(ctx)
    } else {
        s
    }
}

/// Random algebra whose products land in an annihilating tail: generators
/// e_1..e_g multiply into e_{g+1}..e_n and everything else is zero, so all
/// triple products vanish and every degree-3 identity holds. `symmetric`
/// mirrors the products, which additionally makes the algebra commutative.
fn random_two_step(
    ctx: &Context,
    gens: usize,
    center: usize,
    symmetric: bool,
    rng: &mut StdRng,
) -> AlgebraPresentation {
    let n = gens + center;
    let mut a = AlgebraPresentation::zero_product("random", ctx, n);
    for i in 0..gens {
        for j in 0..gens {
            if symmetric && j < i {
                continue;
            }
            for k in gens..n {
                let v = scalar(ctx, rng);
                if symmetric && j > i {
                    a.set_c(j, i, k, v.clone());
                }
                a.set_c(i, j, k, v);
            }
        }
    }
    a
}

/// theta in Z^2 must be equivalent to the central extension satisfying the
/// variety's identities literally. Cases alternate between raw random
/// bilinear maps (mostly non-cocycles) and random cocycle-space elements, so
/// both directions of the equivalence are exercised.
pub fn extension_equivalence_suite(seed: u64, min_cases: usize) -> usize {
    let varieties = ["weakly-associative", "symmetric-leibniz", "commutative"];
    let ctx = Context::empty();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut done = 0;
    while done < min_cases {
        let variety = varieties[done % varieties.len()];
        let n = rng.gen_range(2..=4);
        let gens = rng.gen_range(1..=n - 1);
        let a = random_two_step(&ctx, gens, n - gens, variety == "commutative", &mut rng);
        let z2 = cocycle_space(&a, variety).expect("known variety");
        let theta_vec: Vec<Scalar> = if rng.gen_bool(0.5) && z2.dim() > 0 {
            let mut v = vec![Scalar::zero(&ctx); n * n];
            for b in z2.basis() {
                let c = scalar(&ctx, &mut rng);
                for (t, x) in v.iter_mut().zip(b) {
                    *t = &*t + &(&c * x);
                }
            }
            v
        } else {
            (0..n * n).map(|_| scalar(&ctx, &mut rng)).collect()
        };
        let in_z2 = z2.contains(&theta_vec);
        let ext = central_extension(&a, &Cochain::single(&ctx, n, theta_vec), "ext");
        let satisfies = variety_identities(variety)
            .expect("known variety")
            .iter()
            .all(|spec| ext.check_identity(spec, false).is_none());
        assert_eq!(
            in_z2, satisfies,
            "case {done}, variety {variety}, dim {n}: cocycle membership is {in_z2} \
             but the extension satisfies the identities: {satisfies}"
        );
        done += 1;
    }
    done
}

fn random_matrix(ctx: &Context, rows: usize, cols: usize, rng: &mut StdRng) -> Matrix {
    Matrix::from_rows(
        ctx,
        (0..rows).map(|_| (0..cols).map(|_| scalar(ctx, rng)).collect()).collect(),
    )
}

fn random_cochain(ctx: &Context, n: usize, arity: usize, rng: &mut StdRng) -> Cochain {
    Cochain::new(
        ctx,
        n,
        (0..arity).map(|_| (0..n * n).map(|_| scalar(ctx, rng)).collect()).collect(),
    )
}

/// Pullback is a right action: pulling back along phi.psi equals pulling
/// back along phi, then along psi; pulling back along the identity is a
/// no-op. Holds for arbitrary (not necessarily invertible) maps.
pub fn pullback_action_suite(seed: u64, min_cases: usize) -> usize {
    let ctx = Context::empty();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut done = 0;
    while done < min_cases {
        let n = rng.gen_range(2..=4);
        let arity = rng.gen_range(1..=2);
        let theta = random_cochain(&ctx, n, arity, &mut rng);
        let phi = random_matrix(&ctx, n, n, &mut rng);
        let psi = random_matrix(&ctx, n, n, &mut rng);
        let composed = cocycle_pullback(&theta, &phi.matmul(&psi));
        let staged = cocycle_pullback(&cocycle_pullback(&theta, &phi), &psi);
        for l in 0..arity {
            assert_eq!(
                composed.component(l),
                staged.component(l),
                "case {done}, dim {n}: pullback along a product differs from staged pullbacks"
            );
        }
        let id = cocycle_pullback(&theta, &Matrix::identity(&ctx, n));
        for l in 0..arity {
            assert_eq!(
                id.component(l),
                theta.component(l),
                "case {done}, dim {n}: identity pullback moved the cochain"
            );
        }
        done += 1;
    }
    done
}

/// Invertible by construction: unitriangular times a nonzero diagonal times
/// a rotation of the basis.
fn random_invertible(ctx: &Context, n: usize, rng: &mut StdRng) -> Matrix {
    let mut upper = Matrix::identity(ctx, n);
    for i in 0..n {
        for j in i + 1..n {
            upper.set(i, j, scalar(ctx, rng));
        }
    }
    let mut diag = Matrix::zero(ctx, n, n);
    for i in 0..n {
        diag.set(i, i, nonzero_scalar(ctx, rng));
    }
    let shift = rng.gen_range(0..n);
    let mut rot = Matrix::zero(ctx, n, n);
    for i in 0..n {
        rot.set(i, (i + shift) % n, Scalar::one(ctx));
    }
    upper.matmul(&diag).matmul(&rot)
}

/// Every coboundary is a cocycle, in any basis: conjugating a variety member
/// by a random invertible map keeps B^2 inside Z^2.
pub fn coboundary_inclusion_suite(seed: u64, min_cases: usize) -> usize {
    let varieties = ["weakly-associative", "symmetric-leibniz", "commutative"];
    let ctx = Context::empty();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut done = 0;
    while done < min_cases {
        let variety = varieties[done % varieties.len()];
        let n = rng.gen_range(2..=4);
        let gens = rng.gen_range(1..=n - 1);
        let a = random_two_step(&ctx, gens, n - gens, variety == "commutative", &mut rng);
        let p = random_invertible(&ctx, n, &mut rng);
        let b = change_of_basis(&a, &p).expect("invertible basis");
        let b2 = coboundary_space(&b);
        let z2 = cocycle_space(&b, variety).expect("known variety");
        assert!(
            b2.is_subspace_of(&z2),
            "case {done}, variety {variety}, dim {n}: a coboundary escaped the cocycle space"
        );
        done += 1;
    }
    done
}

/// The annihilator of a central extension splits: the adjoined coordinates
/// annihilate, and the head of any annihilating vector must kill both the
/// base products and the cocycle, so dim Ann(A_theta) is exactly
/// dim(Ann(A) /\ Ann(theta)) + arity. Runs over every extension entry in the
/// catalog.
pub fn annihilator_decomposition_suite(catalog: &Catalog) -> usize {
    let mut cases = 0;
    for e in &catalog.entries {
        let CatalogEntry::ExtensionExpectation(x) = e else { continue };
        let base = &catalog.algebra(&x.base).expect("referenced algebra").presentation;
        let result = &catalog.algebra(&x.result).expect("referenced algebra").presentation;
        let ctx = result.ctx();
        let lifted = base.with_context(ctx).expect("base parameters embed");
        let m = lifted.dim();
        let mut components = Vec::with_capacity(x.cocycle.len());
        for parts in &x.cocycle {
            let mut total = vec![Scalar::zero(ctx); m * m];
            for part in parts {
                let v = parse_cochain(part, ctx, m).expect("catalog cochain parses");
                for (t, vv) in total.iter_mut().zip(v) {
                    *t = &*t + &vv;
                }
            }
            components.push(total);
        }
        let theta = Cochain::new(ctx, m, components);
        let arity = theta.arity();
        let ext = central_extension(&lifted, &theta, "ext");
        let ann_ext = ext.annihilator();
        let ann_base = lifted.annihilator();
        let ann_theta = cocycle_annihilator(&theta);
        let meet = ann_base.dim() + ann_theta.dim() - ann_base.add(&ann_theta).dim();
        assert_eq!(
            ann_ext.dim(),
            meet + arity,
            "{} -> {}: annihilator dimension does not decompose",
            x.base,
            x.result
        );
        for l in 0..arity {
            let mut v = vec![Scalar::zero(ctx); m + arity];
            v[m + l] = Scalar::one(ctx);
            assert!(
                ann_ext.contains(&v),
                "{} -> {}: adjoined coordinate {} does not annihilate",
                x.base,
                x.result,
                l + 1
            );
        }
        for v in ann_ext.basis() {
            let head = v[..m].to_vec();
            assert!(
                ann_base.contains(&head) && ann_theta.contains(&head),
                "{} -> {}: an annihilator vector's head escapes Ann(A) /\\ Ann(theta)",
                x.base,
                x.result
            );
        }
        cases += 1;
    }
    cases
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|s| s.is_zero())
}

/// rref is idempotent, rank is transpose-invariant, kernels multiply to
/// zero, inverses invert, and consistent systems solve. A slice of the cases
/// runs over one symbolic parameter, where rank means generic rank.
pub fn linalg_roundtrip_suite(seed: u64, min_cases: usize) -> usize {
    let plain = Context::empty();
    let param = Context::new(&["p"]).expect("valid name");
    let mut rng = StdRng::seed_from_u64(seed);
    let mut done = 0;
    while done < min_cases {
        let ctx = if done % 7 == 0 { &param } else { &plain };
        let rows = rng.gen_range(2..=4);
        let cols = rng.gen_range(2..=4);
        let mut m = random_matrix(ctx, rows, cols, &mut rng);
        if ctx.arity() == 1 {
            let r = rng.gen_range(0..rows);
            let c = rng.gen_range(0..cols);
            m.set(r, c, &m.at(r, c).clone() + &Scalar::param(ctx, "p"));
        }
        let (r1, pivots) = m.rref();
        assert_eq!(r1.rref().0, r1, "case {done}: rref is not idempotent");
        let rank = m.rank();
        assert_eq!(pivots.len(), rank, "case {done}: pivot count disagrees with rank");
        assert_eq!(rank, m.transpose().rank(), "case {done}: rank changed under transpose");
        assert_eq!(m.transpose().transpose(), m, "case {done}: double transpose moved entries");
        let kernel = m.nullspace();
        assert_eq!(kernel.len(), cols - rank, "case {done}: kernel dimension is off");
        for v in &kernel {
            assert!(is_zero_vec(&m.mul_vec(v)), "case {done}: kernel vector not annihilated");
        }
        let x0: Vec<Scalar> = (0..cols).map(|_| scalar(ctx, &mut rng)).collect();
        let b = m.mul_vec(&x0);
        let x = m.solve(&b).expect("consistent system solves");
        assert_eq!(m.mul_vec(&x), b, "case {done}: solve returned a non-solution");
        if rows == cols {
            match m.invert() {
                Some(inv) => {
                    assert_eq!(rank, rows, "case {done}: singular matrix inverted");
                    let id = Matrix::identity(ctx, rows);
                    assert_eq!(m.matmul(&inv), id, "case {done}: right inverse fails");
                    assert_eq!(inv.matmul(&m), id, "case {done}: left inverse fails");
                }
                None => assert_ne!(rank, rows, "case {done}: full-rank matrix refused to invert"),
            }
        }
        done += 1;
    }
    done
}
