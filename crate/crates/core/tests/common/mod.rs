//! Strategies and property bodies shared by the proptest suite and the
//! acceptance runner.
#![allow(dead_code)]

use std::sync::OnceLock;

use milnor_core::exactla::{q, RationalMatrix};
use milnor_core::jacobian::MilnorContext;
use milnor_core::koszulss::SpectralSequence;
use milnor_core::polyforms::{index_tuples, parse_poly_auto, DiffForm, Monomial, Poly};
use milnor_core::{Rational, SparseVec};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type CaseResult = Result<(), TestCaseError>;

/// Random polynomial in `n` variables with terms of degree `≤ max_deg`.
pub fn poly(n: usize, max_deg: i32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, n), -4i64..=4),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        Poly::from_terms(
            n,
            terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<i32>() <= max_deg)
                .map(|(e, c)| (Monomial::new(e), q(c))),
        )
    })
}

/// Homogeneous polynomial of degree `deg` in `n` variables.
pub fn homogeneous(n: usize, deg: i32) -> impl Strategy<Value = Poly> {
    let monos = milnor_core::polyforms::monomials_of_degree(n, deg);
    let count = monos.len();
    prop::collection::vec(-5i64..=5, count)
        .prop_map(move |cs| Poly::from_terms(n, monos.iter().cloned().zip(cs.into_iter().map(q))))
}

/// Random form of degree `j` in `n` variables.
pub fn form(n: usize, j: usize) -> impl Strategy<Value = DiffForm> {
    let tuples = index_tuples(n, j);
    prop::collection::vec(poly(n, 4, 3), tuples.len()).prop_map(move |gs| {
        tuples
            .iter()
            .zip(gs)
            .fold(DiffForm::zero(n, j), |acc, (t, g)| {
                acc.add(&DiffForm::monomial_form(t.clone(), g).expect("valid tuple"))
            })
    })
}

pub fn d_squared_vanishes(w: &DiffForm) -> CaseResult {
    prop_assert!(w.ext_derivative().ext_derivative().is_zero());
    Ok(())
}

pub fn contraction_squared_vanishes(w: &DiffForm) -> CaseResult {
    let once = w
        .euler_contract()
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    if once.degree() > 0 {
        let twice = once
            .euler_contract()
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(twice.is_zero());
    }
    Ok(())
}

/// `ι_E df = deg f · f` for the Euler field `E`.
pub fn euler_identity(f: &Poly, deg: i32) -> CaseResult {
    let lhs = DiffForm::differential(f)
        .euler_contract()
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(lhs, DiffForm::function(f.scale(&q(deg as i64))));
    Ok(())
}

pub fn matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |xs| {
            RationalMatrix::new(r, c, xs.into_iter().map(q).collect()).expect("shape")
        })
    })
}

pub fn rank_nullity(m: &RationalMatrix) -> CaseResult {
    let ker = m.kernel_basis();
    prop_assert_eq!(m.rank() + ker.dim(), m.cols());
    for v in ker.basis_vectors() {
        let image = m
            .mul_vec(&v)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(image.iter().all(|x| *x == q(0)));
    }
    Ok(())
}

/// Mostly zero; dense cubics make exact elimination blow up.
fn sparse_coeff() -> impl Strategy<Value = i64> {
    prop_oneof![2 => Just(0i64), 1 => -2i64..=2]
}

/// Plane cubic `z·q(x, y) + c(x, y)`, singular at `[0:0:1]`.
pub fn singular_cubic() -> impl Strategy<Value = Poly> {
    (
        prop::collection::vec(sparse_coeff(), 3),
        prop::collection::vec(sparse_coeff(), 4),
    )
        .prop_map(|(qc, cc)| {
            let mut terms: Vec<(Monomial, Rational)> = Vec::new();
            for (i, c) in qc.into_iter().enumerate() {
                terms.push((Monomial::new(vec![2 - i as i32, i as i32, 1]), q(c)));
            }
            for (i, c) in cc.into_iter().enumerate() {
                terms.push((Monomial::new(vec![3 - i as i32, i as i32, 0]), q(c)));
            }
            Poly::from_terms(3, terms)
        })
}

fn isolated(f: &Poly) -> Option<MilnorContext> {
    if f.is_zero() {
        return None;
    }
    let ctx = MilnorContext::new(f.clone()).ok()?;
    ctx.isolated_sing_check().then_some(ctx)
}

/// Dimensions of every page weakly decrease with `r`.
pub fn page_monotonicity(f: &Poly) -> CaseResult {
    let Some(ctx) = isolated(f) else {
        return Err(TestCaseError::reject("singularities not isolated"));
    };
    let hi = 3 * ctx.nd();
    let ss =
        SpectralSequence::compute(&ctx, hi, 4).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for k in 0..=hi {
        for r in 1..4 {
            if let (Some(a), Some(b)) = (ss.mu_page(r, k), ss.mu_page(r + 1, k)) {
                prop_assert!(b <= a, "mu page {} -> {} at k = {}", r, r + 1, k);
            }
            if let (Some(a), Some(b)) = (ss.nu_page(r, k), ss.nu_page(r + 1, k)) {
                prop_assert!(b <= a, "nu page {} -> {} at k = {}", r, r + 1, k);
            }
        }
    }
    Ok(())
}

/// Linear form `x + t·y + t²·z`. A point lies on at most two of these, so
/// among seven of them one avoids every singular point of a cubic.
fn moment_form(t: i64) -> Vec<Rational> {
    vec![q(1), q(t), q(t * t)]
}

/// Torsion by annihilators lies in the kernel of a high power of every
/// linear form and equals it for a generic one. The built-in cross-check
/// against the two fixed forms fails only when one of them is special.
pub fn torsion_methods_agree(f: &Poly, extra: &[i64]) -> CaseResult {
    let Some(ctx) = isolated(f) else {
        return Err(TestCaseError::reject("singularities not isolated"));
    };
    let fail = |e: milnor_core::Error| TestCaseError::fail(e.to_string());
    let (lo, hi) = (0, 2 * ctx.nd());
    let t = ctx.annihilator_torsion(lo, hi).map_err(fail)?;
    let e = 2 * t.stable_n;
    let fixed = [vec![q(1), q(2), q(3)], vec![q(1), q(3), q(9)]];
    let other: Vec<Rational> = extra.iter().map(|&c| q(c)).collect();
    let mut fixed_special = false;
    for k in lo..=hi {
        let space = &t.spaces[&k];
        let mut least = usize::MAX;
        let forms = (1..=7)
            .map(moment_form)
            .chain(fixed.clone())
            .chain([other.clone()]);
        for (i, l) in forms.enumerate() {
            let ker = ctx.linear_power_kernel(&l, k, e).map_err(fail)?;
            for v in space.basis_vectors() {
                prop_assert!(ker.contains(&v).unwrap_or(false), "degree {}", k);
            }
            match i {
                0..=6 => least = least.min(ker.dim()),
                7 | 8 => fixed_special |= ker.dim() != space.dim(),
                _ => {}
            }
        }
        prop_assert_eq!(least, space.dim(), "degree {}", k);
    }
    match ctx.torsion(lo, hi) {
        Ok(checked) => {
            prop_assert!(!fixed_special);
            prop_assert_eq!(checked.dims(), t.dims());
        }
        Err(milnor_core::Error::Internal(_)) => prop_assert!(fixed_special),
        Err(e) => return Err(fail(e)),
    }
    Ok(())
}

/// `f₁` with its spectral sequence on the default window, computed once.
pub fn f1_sequence() -> &'static (MilnorContext, SpectralSequence) {
    static CELL: OnceLock<(MilnorContext, SpectralSequence)> = OnceLock::new();
    CELL.get_or_init(|| {
        let ctx = MilnorContext::new(parse_poly_auto("x^5+y^4*z+x^4*y", 3).unwrap()).unwrap();
        let ss = SpectralSequence::compute(&ctx, 45, 4).unwrap();
        (ctx, ss)
    })
}

struct Draw<'a> {
    seed: &'a [i64],
    pos: usize,
}

impl Draw<'_> {
    fn next(&mut self) -> i64 {
        let v = self.seed[self.pos % self.seed.len()];
        self.pos += 1;
        v
    }

    fn sparse(&mut self, len: usize, terms: usize) -> SparseVec {
        let mut out = SparseVec::new();
        if len == 0 {
            return out;
        }
        for _ in 0..terms {
            let i = self.next().unsigned_abs() as usize % len;
            out = out.add_scaled(&q(self.next() % 4), &SparseVec::unit(i));
        }
        out
    }
}

/// `d^(r)` of a random class of `N^(r)_k` for `f₁` does not change when the
/// zig-zag representatives are shifted by random elements: Koszul
/// boundaries on `η₀`, `df∧`-closed forms on later `η_s`.
pub fn zigzag_independent(k: i32, r: usize, seed: &[i64]) -> CaseResult {
    let (ctx, ss) = f1_sequence();
    let page = ss
        .n_page_space(r, k)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    if page.dim() == 0 {
        return Ok(());
    }
    let mut draw = Draw { seed, pos: 0 };
    let mut coords = vec![q(0); page.ambient_dim()];
    for v in page.basis_vectors() {
        let c = q(draw.next());
        for (a, b) in coords.iter_mut().zip(&v) {
            *a += &c * b;
        }
    }
    let omega = ctx.slice(k).n_lift(&coords);
    let conv = *ctx.conv();
    let plain = ss
        .zigzag_dr(ctx, k, &omega, r, &mut |_, _| SparseVec::new())
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let shifted = ss
        .zigzag_dr(ctx, k, &omega, r, &mut |s, t| {
            let slice = ctx.slice(t);
            let low = conv.graded_basis(conv.n - 2, t).len();
            let zeta = draw.sparse(low, 3);
            let boundary = slice.koszul_image(ctx.f(), &conv, &zeta);
            if s == 0 {
                return boundary;
            }
            let closed: Vec<Rational> = (0..slice.nu()).map(|_| q(draw.next())).collect();
            boundary.add_scaled(&q(1), &slice.n_lift(&closed))
        })
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(plain, shifted);
    Ok(())
}

/// Runs every property through a deterministic runner with `cases` cases
/// each, returning the first failure message per property.
pub fn run_properties(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    use proptest::test_runner::{Config, TestRunner};
    fn go<S: Strategy>(
        cases: u32,
        s: S,
        body: impl Fn(S::Value) -> CaseResult,
    ) -> Result<(), String> {
        let mut runner = TestRunner::new_with_rng(
            Config {
                failure_persistence: None,
                ..Config::with_cases(cases)
            },
            proptest::test_runner::TestRng::deterministic_rng(Default::default()),
        );
        runner.run(&s, body).map_err(|e| e.to_string())
    }
    vec![
        (
            "d o d = 0",
            go(cases, (0usize..=3).prop_flat_map(|j| form(3, j)), |w| {
                d_squared_vanishes(&w)
            }),
        ),
        (
            "contraction squared = 0",
            go(cases, (1usize..=3).prop_flat_map(|j| form(3, j)), |w| {
                contraction_squared_vanishes(&w)
            }),
        ),
        (
            "Euler identity",
            go(
                cases,
                (1i32..=5).prop_flat_map(|e| (Just(e), homogeneous(3, e))),
                |(e, f)| euler_identity(&f, e),
            ),
        ),
        ("rank-nullity", go(cases, matrix(), |m| rank_nullity(&m))),
        (
            "zig-zag choice independence",
            go(
                cases,
                (10i32..=35, 1usize..=3, prop::collection::vec(-7i64..=7, 16)),
                |(k, r, seed)| zigzag_independent(k, r, &seed),
            ),
        ),
        (
            "torsion methods agree",
            go(
                cases,
                (singular_cubic(), prop::collection::vec(1i64..=20, 3)),
                |(f, l)| torsion_methods_agree(&f, &l),
            ),
        ),
        (
            "page monotonicity",
            go(cases, singular_cubic(), |f| page_monotonicity(&f)),
        ),
    ]
}
