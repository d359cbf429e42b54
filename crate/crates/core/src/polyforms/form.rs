use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::{Monomial, Poly};
use crate::error::{input, Result};
use crate::exactla::Rational;

/// Differential form `Σ_I g_I dx_I` with (Laurent) polynomial coefficients.
/// Index tuples are 0-based and strictly increasing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffForm {
    nvars: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Poly>,
}

impl DiffForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        assert!(degree <= nvars, "form degree exceeds variable count");
        DiffForm {
            nvars,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// `g · dx_I`. The tuple must be strictly increasing.
    pub fn monomial_form(indices: Vec<usize>, g: Poly) -> Result<Self> {
        let nvars = g.nvars();
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i >= nvars) {
            return input(format!("invalid index tuple {indices:?}"));
        }
        let mut out = DiffForm::zero(nvars, indices.len());
        if !g.is_zero() {
            out.comps.insert(indices, g);
        }
        Ok(out)
    }

    /// `g · dx_1 ∧ … ∧ dx_n`.
    pub fn top(g: Poly) -> Self {
        let n = g.nvars();
        Self::monomial_form((0..n).collect(), g).expect("full tuple is valid")
    }

    /// The volume form `dx_1 ∧ … ∧ dx_n`.
    pub fn volume(nvars: usize) -> Self {
        Self::top(Poly::constant(nvars, Rational::one()))
    }

    pub fn function(g: Poly) -> Self {
        Self::monomial_form(Vec::new(), g).expect("empty tuple is valid")
    }

    /// `Σ_i c_i dx_i`.
    pub fn one_form(coeffs: Vec<Poly>) -> Self {
        let n = coeffs.len();
        let mut out = DiffForm::zero(n, 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                out.comps.insert(vec![i], c);
            }
        }
        out
    }

    /// Exterior derivative of a function, `df = Σ ∂_i f dx_i`.
    pub fn differential(f: &Poly) -> Self {
        Self::one_form(f.gradient())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.comps.iter()
    }

    pub fn component(&self, indices: &[usize]) -> Poly {
        self.comps
            .get(indices)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// Coefficient of the top-degree form, i.e. `g` in `g · dx_1 ∧ … ∧ dx_n`.
    pub fn top_coefficient(&self) -> Poly {
        self.component(&(0..self.nvars).collect::<Vec<_>>())
    }

    pub fn is_polynomial(&self) -> bool {
        self.comps.values().all(Poly::is_polynomial)
    }

    fn add_component(&mut self, indices: Vec<usize>, g: Poly) {
        if g.is_zero() {
            return;
        }
        let slot = self
            .comps
            .entry(indices)
            .or_insert_with(|| Poly::zero(g.nvars()));
        *slot = &*slot + &g;
        self.comps.retain(|_, p| !p.is_zero());
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        assert_eq!(
            (self.nvars, self.degree),
            (other.nvars, other.degree),
            "adding forms of different shape"
        );
        let mut out = self.clone();
        for (i, g) in &other.comps {
            out.add_component(i.clone(), g.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> DiffForm {
        if c.is_zero() {
            return DiffForm::zero(self.nvars, self.degree);
        }
        DiffForm {
            nvars: self.nvars,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|(i, g)| (i.clone(), g.scale(c)))
                .collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> DiffForm {
        let mut out = DiffForm::zero(self.nvars, self.degree);
        for (i, g) in &self.comps {
            out.add_component(i.clone(), g * p);
        }
        out
    }

    /// `self ∧ other`. Fails when the degrees add up to more than `n`.
    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        if self.degree + other.degree > self.nvars {
            return input(format!(
                "wedge of degrees {} and {} exceeds dimension {}",
                self.degree, other.degree, self.nvars
            ));
        }
        let mut out = DiffForm::zero(self.nvars, self.degree + other.degree);
        for (i, g) in &self.comps {
            for (j, h) in &other.comps {
                if let Some((merged, sign)) = merge_indices(i, j) {
                    let mut p = g * h;
                    if sign < 0 {
                        p = -&p;
                    }
                    out.add_component(merged, p);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn ext_derivative(&self) -> DiffForm {
        if self.degree == self.nvars {
            return DiffForm::zero(self.nvars, self.degree);
        }
        let mut out = DiffForm::zero(self.nvars, self.degree + 1);
        for (idx, g) in &self.comps {
            for i in 0..self.nvars {
                if idx.contains(&i) {
                    continue;
                }
                let dg = g.derivative(i);
                if dg.is_zero() {
                    continue;
                }
                let pos = idx.iter().filter(|&&j| j < i).count();
                let mut merged = idx.clone();
                merged.insert(pos, i);
                let p = if pos % 2 == 1 { -&dg } else { dg };
                out.add_component(merged, p);
            }
        }
        out
    }

    /// Contraction with the Euler field `Σ x_i ∂/∂x_i`.
    pub fn euler_contract(&self) -> Result<DiffForm> {
        if self.degree == 0 {
            return input("cannot contract a function with a vector field");
        }
        let n = self.nvars;
        let mut out = DiffForm::zero(n, self.degree - 1);
        for (idx, g) in &self.comps {
            for (pos, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(pos);
                let mut p = g * &Poly::var(n, i);
                if pos % 2 == 1 {
                    p = -&p;
                }
                out.add_component(rest, p);
            }
        }
        Ok(out)
    }

    /// Every nonzero term as `(monomial, index tuple, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Vec<usize>, &Rational)> {
        self.comps
            .iter()
            .flat_map(|(i, g)| g.terms().map(move |(m, c)| (m, i, c)))
    }
}

/// Concatenates two increasing tuples into an increasing one and reports the
/// sign of the sorting permutation, or `None` when they overlap.
fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

pub fn wedge(a: &DiffForm, b: &DiffForm) -> Result<DiffForm> {
    a.wedge(b)
}

pub fn ext_derivative(a: &DiffForm) -> DiffForm {
    a.ext_derivative()
}

pub fn euler_contract(a: &DiffForm) -> Result<DiffForm> {
    a.euler_contract()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    fn f1() -> Poly {
        Poly::from_int_terms(3, &[(1, &[5, 0, 0]), (1, &[0, 4, 1]), (1, &[4, 1, 0])])
    }

    fn dx(n: usize, i: usize) -> DiffForm {
        DiffForm::monomial_form(vec![i], Poly::constant(n, q(1))).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let df = DiffForm::differential(&f1());
        assert!(df.wedge(&df).unwrap().is_zero());
        let xy = dx(3, 0).wedge(&dx(3, 1)).unwrap();
        let yx = dx(3, 1).wedge(&dx(3, 0)).unwrap();
        assert_eq!(xy, yx.scale(&q(-1)));
        // df ∧ (x dy∧dz) = x f_x ω₀
        let xdydz = DiffForm::monomial_form(vec![1, 2], Poly::var(3, 0)).unwrap();
        let got = df.wedge(&xdydz).unwrap();
        let want = DiffForm::top(&Poly::var(3, 0) * &f1().derivative(0));
        assert_eq!(got, want);
        let vol = DiffForm::volume(3);
        assert!(vol.wedge(&dx(3, 0)).is_err());
    }

    #[test]
    fn derivative_examples() {
        // d(x^2 dy) = 2x dx∧dy
        let a = DiffForm::monomial_form(vec![1], Poly::from_int_terms(2, &[(1, &[2, 0])])).unwrap();
        let want =
            DiffForm::monomial_form(vec![0, 1], Poly::from_int_terms(2, &[(2, &[1, 0])])).unwrap();
        assert_eq!(a.ext_derivative(), want);
        let g = Poly::from_int_terms(3, &[(3, &[1, 2, 0]), (-1, &[0, 1, 4])]);
        let b = DiffForm::monomial_form(vec![0], g.clone()).unwrap();
        assert!(b.ext_derivative().ext_derivative().is_zero());
        let top = DiffForm::top(Poly::from_int_terms(3, &[(1, &[2, 3, 0])]));
        assert!(top.ext_derivative().is_zero());
    }

    #[test]
    fn euler_examples() {
        let got = DiffForm::volume(3).euler_contract().unwrap();
        let mut want = DiffForm::monomial_form(vec![1, 2], Poly::var(3, 0)).unwrap();
        want = want.add(&DiffForm::monomial_form(vec![0, 2], -&Poly::var(3, 1)).unwrap());
        want = want.add(&DiffForm::monomial_form(vec![0, 1], Poly::var(3, 2)).unwrap());
        assert_eq!(got, want);
        let df = DiffForm::differential(&f1());
        assert_eq!(
            df.euler_contract().unwrap(),
            DiffForm::function(f1().scale(&q(5)))
        );
        assert!(got
            .euler_contract()
            .unwrap()
            .euler_contract()
            .unwrap()
            .is_zero());
        assert!(DiffForm::function(f1()).euler_contract().is_err());
    }
}
