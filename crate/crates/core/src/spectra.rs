//! Spectral numbers as exact rational multisets: quasi-homogeneous and
//! Puiseux-pair spectra, Thom–Sebastiani joins, monodromy eigenvalue sets
//! and the root bookkeeping around them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Error, Result};
use crate::exactla::Rational;

/// Residue of `a` in `[0, 1)`.
pub fn frac(a: &Rational) -> Rational {
    a - a.floor()
}

/// A finite multiset of rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpectrumMS {
    items: BTreeMap<Rational, usize>,
}

impl SpectrumMS {
    pub fn new() -> Self {
        SpectrumMS::default()
    }

    pub fn from_values(values: impl IntoIterator<Item = Rational>) -> Self {
        let mut s = SpectrumMS::new();
        for v in values {
            s.insert(v, 1);
        }
        s
    }

    /// From `(num, den)` pairs, each with multiplicity one.
    pub fn from_fractions(pairs: &[(i64, i64)]) -> Self {
        Self::from_values(
            pairs
                .iter()
                .map(|&(a, b)| Rational::new(BigInt::from(a), BigInt::from(b))),
        )
    }

    /// `{n / den : n ∈ nums}`.
    pub fn over(den: i64, nums: &[i64]) -> Self {
        Self::from_values(
            nums.iter()
                .map(|&a| Rational::new(BigInt::from(a), BigInt::from(den))),
        )
    }

    pub fn insert(&mut self, v: Rational, mult: usize) {
        if mult > 0 {
            *self.items.entry(v).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, v: &Rational) -> usize {
        self.items.get(v).copied().unwrap_or(0)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.items.contains_key(v)
    }

    /// Total size counted with multiplicity.
    pub fn len(&self) -> usize {
        self.items.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Distinct values with multiplicities, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (&Rational, usize)> {
        self.items.iter().map(|(v, m)| (v, *m))
    }

    /// All values with repetition, ascending.
    pub fn values(&self) -> Vec<Rational> {
        self.iter()
            .flat_map(|(v, m)| std::iter::repeat_n(v.clone(), m))
            .collect()
    }

    /// Multiset sum.
    pub fn union(&self, other: &SpectrumMS) -> SpectrumMS {
        let mut out = self.clone();
        for (v, m) in other.iter() {
            out.insert(v.clone(), m);
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&Rational) -> bool) -> SpectrumMS {
        SpectrumMS {
            items: self
                .items
                .iter()
                .filter(|(v, _)| keep(v))
                .map(|(v, m)| (v.clone(), *m))
                .collect(),
        }
    }

    /// Distinct residues mod 1.
    pub fn residues(&self) -> BTreeSet<Rational> {
        self.items.keys().map(frac).collect()
    }

    /// `{2c − α}`.
    pub fn reflect(&self, center: &Rational) -> SpectrumMS {
        let two_c = center * Rational::from_integer(2.into());
        SpectrumMS {
            items: self.items.iter().map(|(v, m)| (&two_c - v, *m)).collect(),
        }
    }
}

impl fmt::Display for SpectrumMS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(v, m)| {
                if m == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{m}")
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    num: i64,
    den: i64,
    mult: usize,
}

impl Serialize for SpectrumMS {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: std::result::Result<Vec<Entry>, _> = self
            .iter()
            .map(|(v, m)| match (v.numer().to_i64(), v.denom().to_i64()) {
                (Some(num), Some(den)) => Ok(Entry { num, den, mult: m }),
                _ => Err(serde::ser::Error::custom("spectral value exceeds 64 bits")),
            })
            .collect();
        entries?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectrumMS {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        let mut out = SpectrumMS::new();
        for e in entries {
            if e.den <= 0 {
                return Err(serde::de::Error::custom(format!(
                    "denominator must be positive, got {}",
                    e.den
                )));
            }
            if e.num.gcd(&e.den) != 1 {
                return Err(serde::de::Error::custom(format!(
                    "{}/{} is not in lowest terms",
                    e.num, e.den
                )));
            }
            out.insert(Rational::new(e.num.into(), e.den.into()), e.mult);
        }
        Ok(out)
    }
}

/// Weights `w_1, …, w_m` of a Brieskorn–Pham type germ, each `1/w_i` an
/// integer at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<Rational>,
}

impl WeightSystem {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return input("empty weight system");
        }
        for w in &weights {
            let inv = w.recip();
            if !w.is_positive() || !inv.is_integer() || inv < Rational::from_integer(2.into()) {
                return input(format!("weight {w} is not 1/m with m an integer >= 2"));
            }
        }
        Ok(WeightSystem { weights })
    }

    /// Weights `1/m_i`.
    pub fn from_exponents(ms: &[i64]) -> Result<Self> {
        Self::new(
            ms.iter()
                .map(|&m| {
                    if m == 0 {
                        Rational::zero()
                    } else {
                        Rational::new(BigInt::one(), BigInt::from(m))
                    }
                })
                .collect(),
        )
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    fn exponents(&self) -> Vec<i64> {
        self.weights
            .iter()
            .map(|w| w.recip().to_integer().to_i64().expect("validated"))
            .collect()
    }
}

/// `{Σ a_i w_i : 1 ≤ a_i ≤ 1/w_i − 1}`.
pub fn qh_spectrum(w: &WeightSystem) -> SpectrumMS {
    let mut acc = SpectrumMS::from_values([Rational::zero()]);
    for (wi, m) in w.weights().iter().zip(w.exponents()) {
        let one = SpectrumMS::from_values((1..m).map(|a| wi * Rational::from_integer(a.into())));
        acc = ts_join(&acc, &one);
    }
    acc
}

/// `∏ (1/w_i − 1)`.
pub fn qh_milnor_number(w: &WeightSystem) -> usize {
    w.exponents().iter().map(|m| (*m - 1) as usize).product()
}

/// Puiseux pairs `(k_j, n_j)` of an irreducible plane curve germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxPairs {
    pairs: Vec<(u64, u64)>,
}

impl PuiseuxPairs {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        if pairs.is_empty() {
            return input("at least one Puiseux pair is required");
        }
        for &(k, n) in &pairs {
            if k == 0 || n < 2 || k.gcd(&n) != 1 {
                return input(format!(
                    "invalid Puiseux pair ({k}, {n}): need k > 0, n > 1, gcd(k, n) = 1"
                ));
            }
        }
        Ok(PuiseuxPairs { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// `w_1 = k_1`, `w_i = w_{i-1} n_{i-1} n_i + k_i`.
    pub fn weights(&self) -> Vec<u64> {
        let mut w: Vec<u64> = Vec::with_capacity(self.pairs.len());
        for (i, &(k, n)) in self.pairs.iter().enumerate() {
            w.push(if i == 0 {
                k
            } else {
                w[i - 1] * self.pairs[i - 1].1 * n + k
            });
        }
        w
    }
}

/// Spectral numbers below 1 of an irreducible plane curve germ.
pub fn puiseux_spectrum_below1(p: &PuiseuxPairs) -> SpectrumMS {
    let pairs = p.pairs();
    let w = p.weights();
    let g = pairs.len();
    let mut out = SpectrumMS::new();
    for nu in 0..g {
        let n_nu = pairs[nu].1 as i64;
        let w_nu = w[nu] as i64;
        let tail: i64 = pairs[nu + 1..].iter().map(|&(_, n)| n as i64).product();
        for i in 1..n_nu {
            for j in 1..w_nu {
                // i/n + j/w < 1
                if i * w_nu + j * n_nu >= n_nu * w_nu {
                    continue;
                }
                let base = Rational::new(BigInt::from(i), BigInt::from(n_nu))
                    + Rational::new(BigInt::from(j), BigInt::from(w_nu));
                for r in 0..tail {
                    let v = (Rational::from_integer(r.into()) + &base)
                        / Rational::from_integer(tail.into());
                    out.insert(v, 1);
                }
            }
        }
    }
    out
}

/// `s ∪ {2c − α : α ∈ s}`; every entry must lie below `c`.
pub fn symmetrize(s: &SpectrumMS, center: &Rational) -> Result<SpectrumMS> {
    if let Some((v, _)) = s.iter().find(|(v, _)| *v >= center) {
        return input(format!("entry {v} is not below the center {center}"));
    }
    Ok(s.union(&s.reflect(center)))
}

/// `{α + β}` with multiplicities multiplied.
pub fn ts_join(a: &SpectrumMS, b: &SpectrumMS) -> SpectrumMS {
    let mut out = SpectrumMS::new();
    for (x, m) in a.iter() {
        for (y, k) in b.iter() {
            out.insert(x + y, m * k);
        }
    }
    out
}

/// Monodromy eigenvalues `exp(−2πiα)` recorded by their residue `α mod 1`.
/// The residue 0 (eigenvalue 1) is always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvSet {
    residues: BTreeSet<Rational>,
}

impl EvSet {
    pub fn trivial() -> Self {
        EvSet {
            residues: BTreeSet::from([Rational::zero()]),
        }
    }

    pub fn from_residues(values: impl IntoIterator<Item = Rational>) -> Self {
        let mut out = Self::trivial();
        out.residues.extend(values.into_iter().map(|v| frac(&v)));
        out
    }

    pub fn contains_residue(&self, alpha: &Rational) -> bool {
        self.residues.contains(&frac(alpha))
    }

    pub fn residues(&self) -> &BTreeSet<Rational> {
        &self.residues
    }
}

/// `EV(Z)` from the spectra of all singular points.
pub fn ev_set(local_spectra: &[SpectrumMS]) -> EvSet {
    EvSet::from_residues(local_spectra.iter().flat_map(|s| s.residues()))
}

/// Condition `exp(−2πik/d) ∉ EV(Z)`.
pub fn condition2(k: i64, d: i64, ev: &EvSet) -> Result<bool> {
    if d < 1 {
        return input(format!("d must be positive, got {d}"));
    }
    Ok(!ev.contains_residue(&Rational::new(k.into(), d.into())))
}

/// Roots `α` with `exp(−2πiα) ∉ EV(Z)`.
pub fn r0_from_bfunction(roots: &SpectrumMS, ev: &EvSet) -> SpectrumMS {
    roots.filter(|a| !ev.contains_residue(a))
}

/// Every `α` of `sp_p` has some `α + i`, `i ∈ ℕ`, in `sp`.
pub fn p_compat_check(sp: &SpectrumMS, sp_p: &SpectrumMS) -> bool {
    sp_p.iter()
        .all(|(a, _)| sp.iter().any(|(b, _)| b >= a && (b - a).is_integer()))
}

pub(crate) fn rational_from_str(text: &str) -> Result<Rational> {
    let text = text.trim();
    let parsed = match text.split_once('/') {
        Some((a, b)) => a
            .trim()
            .parse::<BigInt>()
            .ok()
            .zip(b.trim().parse::<BigInt>().ok())
            .filter(|(_, b)| !b.is_zero())
            .map(|(a, b)| Rational::new(a, b)),
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    };
    parsed.ok_or_else(|| Error::Input(format!("`{text}` is not a rational number")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::qf;

    fn h_spectrum() -> SpectrumMS {
        SpectrumMS::over(20, &[9, 13, 14, 17, 18, 19, 21, 22, 23, 26, 27, 31])
    }

    #[test]
    fn qh_examples() {
        let w = WeightSystem::from_exponents(&[5, 4]).unwrap();
        assert_eq!(qh_spectrum(&w), h_spectrum());
        assert_eq!(qh_milnor_number(&w), 12);
        let node = WeightSystem::from_exponents(&[2, 2]).unwrap();
        assert_eq!(qh_spectrum(&node), SpectrumMS::over(1, &[1]));
        let fermat = WeightSystem::from_exponents(&[5, 5, 5]).unwrap();
        assert_eq!(qh_spectrum(&fermat).len(), 64);
        assert!(WeightSystem::new(vec![qf(2, 5)]).is_err());
    }

    #[test]
    fn puiseux_examples() {
        let p = |k, n| PuiseuxPairs::new(vec![(k, n)]).unwrap();
        assert_eq!(
            puiseux_spectrum_below1(&p(5, 4)),
            SpectrumMS::over(20, &[9, 13, 14, 17, 18, 19])
        );
        assert_eq!(puiseux_spectrum_below1(&p(3, 2)), SpectrumMS::over(6, &[5]));
        assert_eq!(
            puiseux_spectrum_below1(&p(7, 2)),
            SpectrumMS::over(14, &[9, 11, 13])
        );
        assert!(PuiseuxPairs::new(vec![(4, 2)]).is_err());
        let two = PuiseuxPairs::new(vec![(3, 2), (1, 2)]).unwrap();
        assert_eq!(two.weights(), vec![3, 13]);
    }

    #[test]
    fn symmetrize_and_join() {
        let below = SpectrumMS::over(20, &[9, 13, 14, 17, 18, 19]);
        assert_eq!(symmetrize(&below, &Rational::one()).unwrap(), h_spectrum());
        assert!(symmetrize(&SpectrumMS::new(), &Rational::one())
            .unwrap()
            .is_empty());
        assert!(symmetrize(&h_spectrum(), &Rational::one()).is_err());
        let x5 = qh_spectrum(&WeightSystem::from_exponents(&[5]).unwrap());
        let y4 = qh_spectrum(&WeightSystem::from_exponents(&[4]).unwrap());
        assert_eq!(ts_join(&x5, &y4), h_spectrum());
        let a1 = SpectrumMS::over(2, &[1]);
        assert_eq!(ts_join(&x5, &a1), SpectrumMS::over(10, &[7, 9, 11, 13]));
    }

    #[test]
    fn ev_and_condition2() {
        let ev = ev_set(&[h_spectrum()]);
        for i in 1..5 {
            assert!(!ev.contains_residue(&qf(i, 5)));
        }
        assert!(condition2(8, 5, &ev).unwrap());
        assert!(condition2(3, 5, &ev).unwrap());
        assert!(!condition2(5, 5, &EvSet::trivial()).unwrap());
        assert_eq!(ev_set(&[SpectrumMS::over(1, &[1])]), EvSet::trivial());
    }

    #[test]
    fn r0_and_compat() {
        let ev = ev_set(&[h_spectrum()]);
        let bh = SpectrumMS::over(20, &[9, 11, 13, 14, 17, 18, 19, 21, 22, 23, 26, 27])
            .union(&SpectrumMS::over(1, &[1]));
        let bf1 = bh.union(&SpectrumMS::over(5, &[3, 4, 6, 7]));
        assert_eq!(
            r0_from_bfunction(&bf1, &ev),
            SpectrumMS::over(5, &[3, 4, 6, 7])
        );
        assert!(r0_from_bfunction(&SpectrumMS::new(), &ev).is_empty());
        let sp = SpectrumMS::over(5, &[6, 7, 8, 9]);
        let spp = SpectrumMS::over(5, &[3, 4, 6, 7]);
        assert!(p_compat_check(&sp, &spp));
        assert!(!p_compat_check(
            &SpectrumMS::over(2, &[1]),
            &SpectrumMS::over(3, &[1])
        ));
        assert!(p_compat_check(&sp, &sp));
    }

    #[test]
    fn json_round_trip() {
        let s = SpectrumMS::over(5, &[3, 3, 4]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"[{"num":3,"den":5,"mult":2},{"num":4,"den":5,"mult":1}]"#
        );
        assert_eq!(serde_json::from_str::<SpectrumMS>(&text).unwrap(), s);
        assert!(serde_json::from_str::<SpectrumMS>(r#"[{"num":2,"den":4,"mult":1}]"#).is_err());
    }
}
