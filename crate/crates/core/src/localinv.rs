//! Milnor and Tjurina numbers of isolated critical points, computed as
//! `dim C[x]/(I + m^N)` once that stabilizes in `N`.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::exactla::{EchelonBasis, Rational, SparseVec};
use crate::jacobian::MilnorContext;
use crate::polyforms::{monomials_of_degree, Monomial, Poly};

/// Largest truncation order tried before giving up.
pub const MAX_ORDER: i32 = 64;

/// A germ at the origin with a critical point there.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalGerm {
    h: Poly,
}

impl LocalGerm {
    pub fn new(h: Poly) -> Result<Self> {
        if !h.is_polynomial() {
            return input("germ must be a polynomial");
        }
        let origin = vec![Rational::zero(); h.nvars()];
        if !h.eval(&origin)?.is_zero() {
            return input("germ does not vanish at the origin");
        }
        for (i, p) in h.gradient().iter().enumerate() {
            if !p.eval(&origin)?.is_zero() {
                return input(format!(
                    "origin is not a critical point (derivative {i} is nonzero)"
                ));
            }
        }
        Ok(LocalGerm { h })
    }

    /// Local equation of the projective hypersurface `f = 0` at `point`: `f`
    /// dehomogenized in the chart of the largest coordinate and moved to the
    /// origin.
    pub fn at_point(f: &Poly, point: &[Rational]) -> Result<Self> {
        let i = chart(f, point)?;
        let scaled: Vec<Rational> = point.iter().map(|x| x / &point[i]).collect();
        let mut shift = scaled;
        shift.remove(i);
        Self::new(f.dehomogenize(i).translate(&shift)?)
    }

    pub fn poly(&self) -> &Poly {
        &self.h
    }
}

fn chart(f: &Poly, point: &[Rational]) -> Result<usize> {
    if point.len() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: point.len(),
        });
    }
    let mut best: Option<usize> = None;
    for (i, x) in point.iter().enumerate() {
        if !x.is_zero() && best.is_none_or(|b| x.abs() > point[b].abs()) {
            best = Some(i);
        }
    }
    best.ok_or_else(|| Error::Input("the zero vector is not a projective point".into()))
}

/// Whether every partial derivative of `f` vanishes at the projective point.
pub fn is_singular_point(f: &Poly, point: &[Rational]) -> Result<bool> {
    chart(f, point)?;
    for p in f.gradient() {
        if !p.eval(point)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn order(p: &Poly) -> i32 {
    p.terms().map(|(m, _)| m.degree()).min().unwrap_or(i32::MAX)
}

/// `dim C[x]/(I + m^N)` for the ideal generated by `gens`.
pub fn colength_truncated(gens: &[Poly], nvars: usize, big_n: i32) -> usize {
    let monos: Vec<Monomial> = (0..big_n)
        .flat_map(|e| monomials_of_degree(nvars, e))
        .collect();
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut span = EchelonBasis::new(monos.len());
    for g in gens {
        let ord = order(g);
        if ord >= big_n {
            continue;
        }
        for m in monos.iter().filter(|m| m.degree() + ord < big_n) {
            let entries: Vec<(usize, Rational)> = g
                .terms()
                .filter_map(|(t, c)| index.get(&t.mul(m)).map(|&i| (i, c.clone())))
                .collect();
            span.insert(SparseVec::from_entries(entries));
        }
    }
    monos.len() - span.rank()
}

/// Stable value of `dim C[x]/(I + m^N)`. Equality at `N` and `N + 1` means
/// `m^N ⊆ I + m^{N+1}`, hence `m^N ⊆ I` locally, so the value is final.
pub fn local_colength(gens: &[Poly], nvars: usize) -> Result<usize> {
    let mut prev = colength_truncated(gens, nvars, 1);
    for big_n in 1..MAX_ORDER {
        let next = colength_truncated(gens, nvars, big_n + 1);
        if next == prev {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Unsupported(format!(
        "colength did not stabilize up to order {MAX_ORDER}; the critical point is probably not isolated"
    )))
}

pub fn local_milnor(g: &LocalGerm) -> Result<usize> {
    local_colength(&g.h.gradient(), g.h.nvars())
}

pub fn local_tjurina(g: &LocalGerm) -> Result<usize> {
    let mut gens = g.h.gradient();
    gens.push(g.h.clone());
    local_colength(&gens, g.h.nvars())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauReconciliation {
    pub local: Vec<usize>,
    pub local_sum: usize,
    pub global: usize,
    pub pass: bool,
}

/// Compares the sum of local Tjurina numbers with the stable value of `μ_k`.
pub fn tau_reconciliation(ctx: &MilnorContext, germs: &[LocalGerm]) -> Result<TauReconciliation> {
    let local: Vec<usize> = germs.iter().map(local_tjurina).collect::<Result<_>>()?;
    let local_sum = local.iter().sum();
    let global = ctx.global_tjurina()?;
    Ok(TauReconciliation {
        local,
        local_sum,
        global,
        pass: local_sum == global,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;
    use crate::polyforms::parse_poly_auto;

    fn germ(text: &str) -> LocalGerm {
        LocalGerm::new(parse_poly_auto(text, 2).unwrap()).unwrap()
    }

    #[test]
    fn milnor_and_tjurina() {
        let h = germ("x^5+x^4*y+y^4");
        assert_eq!(local_milnor(&h).unwrap(), 12);
        assert_eq!(local_tjurina(&h).unwrap(), 11);
        for (text, mu) in [("x^3+y^2", 2), ("x^2+y^2", 1), ("x^5+y^4", 12)] {
            let g = germ(text);
            assert_eq!(local_milnor(&g).unwrap(), mu);
            assert_eq!(local_tjurina(&g).unwrap(), mu);
        }
        let cusp_line = germ("x^2*y^2");
        assert!(matches!(
            local_milnor(&cusp_line),
            Err(Error::Unsupported(_))
        ));
        assert!(LocalGerm::new(parse_poly_auto("x+y^2", 2).unwrap()).is_err());
        assert!(LocalGerm::new(parse_poly_auto("1+x^2", 2).unwrap()).is_err());
    }

    #[test]
    fn projective_points() {
        let f1 = parse_poly_auto("x^5+x^4*y+y^4*z", 3).unwrap();
        let p = |v: [i64; 3]| v.map(q).to_vec();
        assert!(is_singular_point(&f1, &p([0, 0, 1])).unwrap());
        assert!(!is_singular_point(&f1, &p([1, 0, 0])).unwrap());
        assert!(is_singular_point(&f1, &p([0, 0, 0])).is_err());
        let fermat = parse_poly_auto("x^5+y^5+z^5", 3).unwrap();
        assert!(!is_singular_point(&fermat, &p([1, -1, 0])).unwrap());
        let h = LocalGerm::at_point(&f1, &p([0, 0, 7])).unwrap();
        assert_eq!(h.poly(), &parse_poly_auto("x^5+x^4*y+y^4", 2).unwrap());
        let ctx = MilnorContext::new(f1).unwrap();
        assert!(tau_reconciliation(&ctx, &[h]).unwrap().pass);
        let none = tau_reconciliation(&ctx, &[]).unwrap();
        assert_eq!((none.local_sum, none.global, none.pass), (0, 11, false));
        let fctx = MilnorContext::new(fermat).unwrap();
        assert!(tau_reconciliation(&fctx, &[]).unwrap().pass);
    }
}
