//! Monomial criteria for the V-filtration: affine conditions on exponent
//! vectors and a bounded exhaustive search for attained values.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{input, Error, Result};
use crate::exactla::Rational;
use crate::polyforms::{parse_poly, Monomial};

/// `(c₀ + Σ c_i e_i) / D` with integer coefficients `c_i ≥ 0` and `D > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VCondition {
    pub c0: i64,
    pub coeffs: Vec<i64>,
    pub den: i64,
}

impl VCondition {
    pub fn new(c0: i64, coeffs: Vec<i64>, den: i64) -> Result<Self> {
        if den <= 0 {
            return input(format!("denominator must be positive, got {den}"));
        }
        if let Some(c) = coeffs.iter().find(|c| **c < 0) {
            return input(format!(
                "exponent coefficients must be nonnegative, got {c}"
            ));
        }
        Ok(VCondition { c0, coeffs, den })
    }

    /// Parses an affine expression such as `(4i+5j+9)/20` in the given
    /// exponent variables.
    pub fn parse(text: &str, vars: &[String]) -> Result<Self> {
        let p = parse_poly(text, vars)?;
        let n = vars.len();
        let mut den = num_bigint::BigInt::from(1);
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let mut c0 = 0i64;
        let mut coeffs = vec![0i64; n];
        for (m, c) in p.terms() {
            let scaled = (c * Rational::from_integer(den.clone())).to_integer();
            let v = scaled
                .to_i64()
                .ok_or_else(|| Error::Input(format!("coefficient in `{text}` is too large")))?;
            match m.degree() {
                0 if m.is_polynomial() => c0 = v,
                1 if m.is_polynomial() => {
                    let i = m
                        .exponents()
                        .iter()
                        .position(|&e| e == 1)
                        .expect("degree one");
                    coeffs[i] = v;
                }
                _ => return input(format!("`{text}` is not affine in {}", vars.join(", "))),
            }
        }
        let den = den
            .to_i64()
            .ok_or_else(|| Error::Input(format!("denominator in `{text}` is too large")))?;
        Self::new(c0, coeffs, den)
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    fn numerator(&self, e: &[i64]) -> i128 {
        self.c0 as i128
            + self
                .coeffs
                .iter()
                .zip(e)
                .map(|(c, x)| *c as i128 * *x as i128)
                .sum::<i128>()
    }

    pub fn value(&self, e: &[i64]) -> Rational {
        Rational::new(self.numerator(e).into(), self.den.into())
    }

    /// Smallest exponent of variable `i` past which the value exceeds
    /// `alpha` on its own, or `None` if the variable does not enter.
    fn exceed_at(&self, i: usize, alpha: &Rational) -> Option<i64> {
        let c = self.coeffs[i];
        if c == 0 {
            return None;
        }
        // c0 + c·e > α·D
        let need = alpha * Rational::from_integer(self.den.into())
            - Rational::from_integer(self.c0.into());
        let q = (need / Rational::from_integer(c.into()))
            .floor()
            .to_integer();
        Some(q.to_i64().unwrap_or(i64::MAX - 1).max(-1) + 1)
    }

    /// Smallest exponent of variable `i` at which the value reaches `alpha`
    /// on its own.
    fn reach_at(&self, i: usize, alpha: &Rational) -> Option<i64> {
        let c = self.coeffs[i];
        if c == 0 {
            return None;
        }
        let need = alpha * Rational::from_integer(self.den.into())
            - Rational::from_integer(self.c0.into());
        let q = (need / Rational::from_integer(c.into()))
            .ceil()
            .to_integer();
        Some(q.to_i64().unwrap_or(i64::MAX).max(0))
    }
}

impl fmt::Display for VCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| format!("{c}*e{i}"))
            .collect();
        parts.push(self.c0.to_string());
        write!(f, "({})/{}", parts.join("+"), self.den)
    }
}

/// The pair of conditions used for the surface germ `x^5 + x^4y + y^4` in
/// exponents `(i, j, k)`.
pub fn example_conditions() -> Vec<VCondition> {
    vec![
        VCondition::new(9, vec![4, 5, 0], 20).expect("valid"),
        VCondition::new(3, vec![1, 1, 1], 5).expect("valid"),
    ]
}

fn check_shape(conds: &[VCondition]) -> Result<usize> {
    let Some(first) = conds.first() else {
        return input("at least one condition is required");
    };
    let n = first.nvars();
    if conds.iter().any(|c| c.nvars() != n) {
        return input("conditions have different numbers of variables");
    }
    Ok(n)
}

fn exponents(m: &Monomial) -> Result<Vec<i64>> {
    if !m.is_polynomial() {
        return input("exponents must be nonnegative");
    }
    Ok(m.exponents().iter().map(|&e| e as i64).collect())
}

/// Minimum of the condition values at a monomial.
pub fn v_value(m: &Monomial, conds: &[VCondition]) -> Result<Rational> {
    let n = check_shape(conds)?;
    if m.nvars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.nvars(),
        });
    }
    let e = exponents(m)?;
    Ok(conds.iter().map(|c| c.value(&e)).min().expect("nonempty"))
}

/// Per-variable exponent bound beyond which no monomial can newly attain
/// `alpha`: every condition that involves the variable already exceeds it.
/// Variables entering no condition get bound zero.
pub fn sound_cutoff(alpha: &Rational, conds: &[VCondition]) -> Result<Vec<i64>> {
    let n = check_shape(conds)?;
    Ok((0..n)
        .map(|i| {
            conds
                .iter()
                .filter_map(|c| c.exceed_at(i, alpha))
                .max()
                .unwrap_or(0)
                .max(0)
        })
        .collect())
}

/// `⌈2·α·max D⌉`.
pub fn default_bound(alpha: &Rational, conds: &[VCondition]) -> i64 {
    let max_d = conds.iter().map(|c| c.den).max().unwrap_or(1);
    (alpha * Rational::from_integer((2 * max_d).into()))
        .ceil()
        .to_integer()
        .to_i64()
        .unwrap_or(i64::MAX)
}

fn for_each_in_box(bounds: &[i64], mut visit: impl FnMut(&[i64]) -> bool) {
    let mut e = vec![0i64; bounds.len()];
    loop {
        if visit(&e) {
            return;
        }
        let mut i = 0;
        loop {
            if i == e.len() {
                return;
            }
            if e[i] < bounds[i] {
                e[i] += 1;
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// `Gr_V^α` vanishes in the monomial sense: no exponent vector has
/// `v_value` exactly `α`. Decided by searching `[0, bound]^n`, which must
/// contain the sound cutoff region.
pub fn grv_vanishes(alpha: &Rational, conds: &[VCondition], bound: Option<i64>) -> Result<bool> {
    if !alpha.is_positive() {
        return input(format!("alpha must be positive, got {alpha}"));
    }
    let cut = sound_cutoff(alpha, conds)?;
    let bound = bound.unwrap_or_else(|| default_bound(alpha, conds));
    if let Some(c) = cut.iter().find(|&&c| c > bound) {
        return Err(Error::Diagnostic(format!(
            "search bound {bound} is below the sound cutoff {c}"
        )));
    }
    let mut attained = false;
    for_each_in_box(&cut, |e| {
        attained = conds.iter().map(|c| c.value(e)).min().as_ref() == Some(alpha);
        attained
    });
    Ok(!attained)
}

/// All values of `v_value` on `[0, bound]^n`.
pub fn attained_values(conds: &[VCondition], bound: i64) -> Result<BTreeSet<Rational>> {
    let n = check_shape(conds)?;
    if bound < 0 {
        return input(format!("bound must be nonnegative, got {bound}"));
    }
    let lcm = conds.iter().fold(1i64, |a, c| a.lcm(&c.den));
    let mut nums: BTreeSet<i128> = BTreeSet::new();
    for_each_in_box(&vec![bound; n], |e| {
        let v = conds
            .iter()
            .map(|c| c.numerator(e) * (lcm / c.den) as i128)
            .min()
            .expect("nonempty");
        nums.insert(v);
        false
    });
    Ok(nums
        .into_iter()
        .map(|v| Rational::new(v.into(), lcm.into()))
        .collect())
}

/// Checks `premise ≥ a ⟹ conclusion > b` over all exponent vectors, by an
/// exhaustive search on a box that is complete for counterexamples.
pub fn implication_holds(
    premise: &VCondition,
    a: &Rational,
    conclusion: &VCondition,
    b: &Rational,
) -> Result<bool> {
    let n = check_shape(&[premise.clone(), conclusion.clone()])?;
    // A counterexample keeps conclusion ≤ b, which bounds the variables the
    // conclusion involves; the others only need to be large enough for the
    // premise.
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            if conclusion.coeffs[i] > 0 {
                conclusion.exceed_at(i, b).map_or(0, |x| (x - 1).max(0))
            } else {
                premise.reach_at(i, a).unwrap_or(0)
            }
        })
        .collect();
    let mut counter = false;
    for_each_in_box(&bounds, |e| {
        counter = premise.value(e) >= *a && conclusion.value(e) <= *b;
        counter
    });
    Ok(!counter)
}
