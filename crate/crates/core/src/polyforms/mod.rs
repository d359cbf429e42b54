//! Polynomials, differential forms and the shifted grading on forms.
//!
//! A term `g · dx_I` with `g` homogeneous of degree `deg g` has graded degree
//! `deg g + |I| + d (n - |I|)`, so that `df ∧` preserves degree while the
//! exterior derivative lowers it by exactly `d`.

mod form;
mod parse;
mod poly;

use std::collections::HashMap;

pub use form::{euler_contract, ext_derivative, wedge, DiffForm};
pub use parse::{parse_poly, parse_poly_auto};
pub use poly::{default_vars, monomial_count, monomials_of_degree, Monomial, Poly, PolyDisplay};

use num_integer::binomial;

use crate::error::{input, Error, Result};
use crate::exactla::{Rational, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradingConvention {
    pub d: i32,
    pub n: usize,
}

impl GradingConvention {
    pub fn new(d: i32, n: usize) -> Result<Self> {
        if d < 2 || n < 2 {
            return input(format!("grading needs d >= 2 and n >= 2, got d={d}, n={n}"));
        }
        Ok(GradingConvention { d, n })
    }

    /// Graded degree of `g · dx_I` for `g` of polynomial degree `poly_degree`
    /// and `|I| = form_degree`.
    pub fn graded_degree(&self, poly_degree: i32, form_degree: usize) -> i32 {
        poly_degree + form_degree as i32 + self.d * (self.n - form_degree) as i32
    }

    /// Polynomial degree of the coefficients of `Ω^j_k`.
    pub fn coefficient_degree(&self, form_degree: usize, k: i32) -> i32 {
        k - form_degree as i32 - self.d * (self.n - form_degree) as i32
    }

    pub fn graded_basis(&self, form_degree: usize, k: i32) -> GradedBasis {
        graded_basis(form_degree, k, self)
    }
}

/// `graded_degree` of a single term.
pub fn graded_degree(m: &Monomial, indices: &[usize], conv: &GradingConvention) -> i32 {
    conv.graded_degree(m.degree(), indices.len())
}

/// Canonical ordered basis of `Ω^j_k`: index tuples in lexicographic order,
/// and within each tuple the coefficient monomials in decreasing graded
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    nvars: usize,
    form_degree: usize,
    k: i32,
    elems: Vec<(Vec<usize>, Monomial)>,
    index: HashMap<(Vec<usize>, Monomial), usize>,
}

pub fn graded_basis(form_degree: usize, k: i32, conv: &GradingConvention) -> GradedBasis {
    let n = conv.n;
    let deg = conv.coefficient_degree(form_degree, k);
    let monos = monomials_of_degree(n, deg);
    let mut elems = Vec::with_capacity(binomial(n, form_degree) * monos.len());
    for tuple in index_tuples(n, form_degree) {
        for m in &monos {
            elems.push((tuple.clone(), m.clone()));
        }
    }
    let index = elems
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    GradedBasis {
        nvars: n,
        form_degree,
        k,
        elems,
        index,
    }
}

/// Strictly increasing `j`-tuples from `0..n` in lexicographic order.
pub fn index_tuples(n: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, j: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, j, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, j, 0, &mut Vec::new(), &mut out);
    out
}

impl GradedBasis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn degree(&self) -> i32 {
        self.k
    }

    pub fn form_degree(&self) -> usize {
        self.form_degree
    }

    pub fn element(&self, i: usize) -> (&Vec<usize>, &Monomial) {
        let (t, m) = &self.elems[i];
        (t, m)
    }

    pub fn position(&self, indices: &[usize], m: &Monomial) -> Option<usize> {
        self.index.get(&(indices.to_vec(), m.clone())).copied()
    }

    pub fn basis_form(&self, i: usize) -> DiffForm {
        let (t, m) = &self.elems[i];
        DiffForm::monomial_form(
            t.clone(),
            Poly::term(m.clone(), Rational::from_integer(1.into())),
        )
        .expect("basis tuples are increasing")
    }

    /// Coordinates of a form lying in this graded piece.
    pub fn coordinates(&self, form: &DiffForm) -> Result<SparseVec> {
        if form.degree() != self.form_degree || form.nvars() != self.nvars {
            return Err(Error::Input(format!(
                "form of degree {} is not in Ω^{}",
                form.degree(),
                self.form_degree
            )));
        }
        let mut entries = Vec::new();
        for (m, idx, c) in form.terms() {
            let Some(p) = self.position(idx, m) else {
                return input(format!(
                    "term with exponents {:?} on dx{:?} is not in graded degree {}",
                    m.exponents(),
                    idx,
                    self.k
                ));
            };
            entries.push((p, c.clone()));
        }
        Ok(SparseVec::from_entries(entries))
    }

    pub fn form(&self, coords: &SparseVec) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars, self.form_degree);
        for (i, c) in coords.entries() {
            let (t, m) = &self.elems[*i];
            out = out.add(
                &DiffForm::monomial_form(t.clone(), Poly::term(m.clone(), c.clone()))
                    .expect("basis tuples are increasing"),
            );
        }
        out
    }
}

/// Checks `df ∧ (g · ι_ξ ω₀) = (deg f) · f · g · ω₀`.
pub fn euler_koszul_identity_check(f: &Poly, g: &Poly) -> Result<bool> {
    let Some(d) = f.homogeneous_degree() else {
        return input("f must be a nonzero homogeneous polynomial");
    };
    let n = f.nvars();
    let contracted = DiffForm::volume(n).euler_contract()?.mul_poly(g);
    let lhs = DiffForm::differential(f).wedge(&contracted)?;
    let rhs = DiffForm::top(&f.scale(&Rational::from_integer(d.into())) * g);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conv() -> GradingConvention {
        GradingConvention::new(5, 3).unwrap()
    }

    #[test]
    fn graded_degree_anchors() {
        let c = conv();
        let x2y3 = Monomial::new(vec![2, 3, 0]);
        assert_eq!(graded_degree(&x2y3, &[0, 1, 2], &c), 8);
        assert_eq!(graded_degree(&Monomial::one(3), &[0, 1, 2], &c), 3);
        assert_eq!(graded_degree(&Monomial::new(vec![1, 1, 0]), &[0, 1], &c), 9);
    }

    #[test]
    fn graded_basis_sizes() {
        let c = conv();
        assert_eq!(c.graded_basis(3, 3).len(), 1);
        assert_eq!(c.graded_basis(3, 8).len(), 21);
        assert_eq!(c.graded_basis(2, 8).len(), 9);
        assert!(c.graded_basis(2, 6).is_empty());
    }

    #[test]
    fn coordinates_round_trip() {
        let c = conv();
        let b = c.graded_basis(2, 9);
        let form = b
            .basis_form(4)
            .add(&b.basis_form(7).scale(&crate::exactla::q(-3)));
        let coords = b.coordinates(&form).unwrap();
        assert_eq!(b.form(&coords), form);
        assert!(b.coordinates(&c.graded_basis(2, 10).basis_form(0)).is_err());
    }

    #[test]
    fn euler_identity_examples() {
        let f1 = Poly::from_int_terms(3, &[(1, &[5, 0, 0]), (1, &[0, 4, 1]), (1, &[4, 1, 0])]);
        let one = Poly::constant(3, crate::exactla::q(1));
        assert!(euler_koszul_identity_check(&f1, &one).unwrap());
        let g = Poly::from_int_terms(3, &[(1, &[2, 3, 0])]);
        assert!(euler_koszul_identity_check(&f1, &g).unwrap());
        let circle = Poly::from_int_terms(2, &[(1, &[2, 0]), (1, &[0, 2])]);
        assert!(
            euler_koszul_identity_check(&circle, &Poly::constant(2, crate::exactla::q(1))).unwrap()
        );
        let inhom = Poly::from_int_terms(2, &[(1, &[2, 0]), (1, &[0, 1])]);
        assert!(euler_koszul_identity_check(&inhom, &one.dehomogenize(2)).is_err());
    }
}
