//! Known b-function roots, the checks comparing them with the pole order
//! spectral sequence, and assembled verification reports.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{input, Error, Result};
use crate::exactla::{q, qf, Rational};
use crate::jacobian::MilnorContext;
use crate::koszulss::{
    dbar_rank, default_ss_hi, image_membership, pole_spectrum_from, SSTable, SpectralSequence,
    Stability, DEFAULT_R_MAX,
};
use crate::localinv::{local_milnor, local_tjurina, tau_reconciliation, LocalGerm};
use crate::polyforms::{default_vars, parse_poly, DiffForm, Poly};
use crate::spectra::{
    condition2, ev_set, frac, p_compat_check, puiseux_spectrum_below1, qh_spectrum,
    r0_from_bfunction, symmetrize, ts_join, EvSet, PuiseuxPairs, SpectrumMS, WeightSystem,
};
use crate::vfilt::{example_conditions, grv_vanishes, implication_holds};

const B_H: &str = include_str!("../fixtures/b_h.json");
const B_F1: &str = include_str!("../fixtures/b_f1.json");
const B_F2: &str = include_str!("../fixtures/b_f2.json");
const SP_F1: &str = include_str!("../fixtures/steenbrink_f1.json");

/// Roots `α > 0` of `b_f(−s)`, with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BFunctionRoots {
    roots: SpectrumMS,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootsFile {
    roots: SpectrumMS,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumFile {
    spectrum: SpectrumMS,
}

impl BFunctionRoots {
    pub fn new(roots: SpectrumMS) -> Result<Self> {
        if let Some((a, _)) = roots.iter().find(|(a, _)| *a <= &Rational::zero()) {
            return input(format!("b-function root {a} is not positive"));
        }
        Ok(BFunctionRoots { roots })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RootsFile = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("b-function fixture: {e}")))?;
        Self::new(file.roots)
    }

    /// One of the bundled fixtures: `b_h`, `b_f1` or `b_f2`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "b_h" => Self::from_json(B_H),
            "b_f1" => Self::from_json(B_F1),
            "b_f2" => Self::from_json(B_F2),
            _ => input(format!("no bundled b-function fixture named `{name}`")),
        }
    }

    pub fn roots(&self) -> &SpectrumMS {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_bfixture(path: &Path) -> Result<BFunctionRoots> {
    BFunctionRoots::from_json(&read_file(path)?)
}

/// Parses `{"spectrum": [...]}`.
pub fn spectrum_from_json(text: &str) -> Result<SpectrumMS> {
    let file: SpectrumFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("spectrum fixture: {e}")))?;
    Ok(file.spectrum)
}

pub fn load_spectrum_fixture(path: &Path) -> Result<SpectrumMS> {
    spectrum_from_json(&read_file(path)?)
}

/// `bf = bh ⊎ {i/d : i ∈ set}` as multisets.
pub fn factorization_check(bf: &BFunctionRoots, bh: &BFunctionRoots, set: &[i64], d: i64) -> bool {
    if d < 1 {
        return false;
    }
    let extra = SpectrumMS::from_values(set.iter().map(|&i| qf(i, d)));
    bh.roots.union(&extra) == bf.roots
}

/// Degree `k` with its eigenvalue residue `k/d mod 1` and Hodge-type index
/// `p = ⌊n − k/d⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrLabel {
    pub k: i64,
    pub d: i64,
    pub n: i64,
}

impl GrLabel {
    pub fn new(k: i64, d: i64, n: i64) -> Result<Self> {
        if d < 1 {
            return input(format!("d must be positive, got {d}"));
        }
        Ok(GrLabel { k, d, n })
    }

    pub fn residue(&self) -> Rational {
        frac(&qf(self.k, self.d))
    }

    pub fn p(&self) -> i64 {
        Integer::div_floor(&(self.n * self.d - self.k), &self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Inconclusive,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub computed: Value,
    pub expected: Value,
    pub provenance: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        status: Status,
        computed: Value,
        expected: Value,
        provenance: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            status,
            computed,
            expected,
            provenance: provenance.into(),
        }
    }

    /// Pass iff the two values serialize identically.
    pub fn compare<T: Serialize>(
        name: impl Into<String>,
        computed: T,
        expected: T,
        provenance: impl Into<String>,
    ) -> Self {
        let (c, e) = (json!(computed), json!(expected));
        let status = if c == e { Status::Pass } else { Status::Fail };
        Self::new(name, status, c, e, provenance)
    }

    fn error(name: impl Into<String>, err: &Error, provenance: impl Into<String>) -> Self {
        let status = match err {
            Error::Diagnostic(_) => Status::Inconclusive,
            _ => Status::Fail,
        };
        Self::new(
            name,
            status,
            json!({ "error": err.to_string() }),
            Value::Null,
            provenance,
        )
    }
}

/// Ordered list of checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    /// 0 if everything passed or was skipped, 1 on any failure, 2 if the
    /// only problems are inconclusive checks.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            1
        } else if self.count(Status::Inconclusive) > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("report: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(out, "[{:>12}] {}: {}", c.status.tag(), c.name, c.computed);
            if c.status != Status::Pass && !c.expected.is_null() {
                let _ = write!(out, " (expected {})", c.expected);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} pass, {} fail, {} skip, {} inconclusive",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip),
            self.count(Status::Inconclusive)
        );
        out
    }
}

fn rat_str(a: &Rational) -> String {
    a.to_string()
}

/// `μ^(∞)_k` when it is certified.
fn certified_mu_infinity(ss: &SpectralSequence, k: i32) -> Option<usize> {
    match ss.stability(k) {
        Stability::Settled | Stability::Clear => ss.mu_infinity(k),
        _ => None,
    }
}

/// For each `k` in the window with `exp(−2πik/d)` not a local eigenvalue,
/// compares `k/d ∈ R⁰_f` (from the roots) with `μ^(∞)_k ≠ 0`.
pub fn r0_consistency_check(
    ss: &SpectralSequence,
    bf: &BFunctionRoots,
    ev: &EvSet,
    window: RangeInclusive<i32>,
) -> Result<Vec<Check>> {
    let d = ss.d();
    let r0 = r0_from_bfunction(bf.roots(), ev);
    let prov = "bundled b-function roots minus local eigenvalues";
    let mut out = Vec::new();
    for k in window {
        let name = format!("r0_vs_pole.k={k}");
        let alpha = qf(k as i64, d as i64);
        if !condition2(k as i64, d as i64, ev)? {
            out.push(Check::new(
                name,
                Status::Skip,
                json!("residue of k/d is a local monodromy eigenvalue"),
                Value::Null,
                prov,
            ));
            continue;
        }
        let in_r0 = r0.contains(&alpha);
        match certified_mu_infinity(ss, k) {
            Some(m) => out.push(Check::compare(
                name,
                json!({ "mu_infinity_nonzero": m != 0 }),
                json!({ "mu_infinity_nonzero": in_r0 }),
                prov,
            )),
            None => out.push(Check::new(
                name,
                Status::Inconclusive,
                json!({ "stability": ss.stability(k) }),
                json!({ "mu_infinity_nonzero": in_r0 }),
                prov,
            )),
        }
    }
    Ok(out)
}

/// Smallest `k ∈ [d+1, 2d−2]` with a non-eigenvalue residue, `μ′_k ≠ 0`,
/// `μ′_{k+1} = 0` and `k/d ∉ R⁰_f`.
pub fn torsion_witness(
    d: i32,
    mu_prime: impl Fn(i32) -> usize,
    bf: &BFunctionRoots,
    ev: &EvSet,
) -> Result<Option<i32>> {
    let r0 = r0_from_bfunction(bf.roots(), ev);
    for k in d + 1..=2 * d - 2 {
        if condition2(k as i64, d as i64, ev)?
            && mu_prime(k) != 0
            && mu_prime(k + 1) == 0
            && !r0.contains(&qf(k as i64, d as i64))
        {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Sums of `μ^(∞)_k` over `n ≤ k < nd` grouped by `k mod d`, or `None` if
/// some term is not certified.
pub fn eigenspace_sums(ss: &SpectralSequence) -> Option<Vec<usize>> {
    let d = ss.d();
    let mut sums = vec![0usize; d as usize];
    for k in ss.n() as i32..ss.n() as i32 * d {
        sums[k.rem_euclid(d) as usize] += certified_mu_infinity(ss, k)?;
    }
    Some(sums)
}

pub fn eigenspace_check(ss: Option<&SpectralSequence>, expected: &[usize]) -> Check {
    let name = "eigenspace_dimensions";
    let prov = "eigenspace dimensions of the Milnor fiber cohomology";
    match ss.and_then(eigenspace_sums) {
        Some(s) => Check::compare(name, s, expected.to_vec(), prov),
        None => Check::new(
            name,
            Status::Inconclusive,
            Value::Null,
            json!(expected),
            prov,
        ),
    }
}

/// Data for the torsion-image witness: `member ∈ (∂f)`, `witness ∉ (∂f)`,
/// `[witness·ω₀] ∈ M′` and in the image of `d` from `N_{k+d}`.
#[derive(Clone, Debug)]
pub struct ImageWitness {
    pub member: Poly,
    pub witness: Poly,
    /// Further monomials with their expected membership in `(∂f)`.
    pub memberships: Vec<(Poly, bool)>,
    /// Whether to test the class of `witness` for torsion and exactness.
    pub class_checks: bool,
    /// Explicit 1-form `η` such that `df ∧ η` is polynomial; then `d(df∧η)`
    /// should be a combination of `member·ω₀` and `witness·ω₀` with
    /// nonzero coefficients.
    pub laurent: Option<DiffForm>,
    /// Expected coefficients of `member` and `witness` in `d(df∧η)`.
    pub constants: Option<(Rational, Rational)>,
}

/// Coefficients `(c₁, c₂)` of `d(df∧η) = c₁·a·ω₀ + c₂·b·ω₀`, with the
/// polynomiality of `df∧η` and the leftover terms.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentResult {
    pub xi_polynomial: bool,
    pub c1: Rational,
    pub c2: Rational,
    pub rest: Poly,
}

pub fn laurent_witness(f: &Poly, eta: &DiffForm, a: &Poly, b: &Poly) -> Result<LaurentResult> {
    let xi = DiffForm::differential(f).wedge(eta)?;
    let top = xi.ext_derivative().top_coefficient();
    let coeff_of = |p: &Poly| -> Result<Rational> {
        match (p.num_terms(), p.terms().next()) {
            (1, Some((m, _))) => Ok(top.coeff(m)),
            _ => input("expected a single monomial"),
        }
    };
    let (c1, c2) = (coeff_of(a)?, coeff_of(b)?);
    let rest = Poly::from_terms(
        top.nvars(),
        top.terms()
            .filter(|(m, _)| a.coeff(m).is_zero() && b.coeff(m).is_zero())
            .map(|(m, c)| (m.clone(), c.clone())),
    );
    Ok(LaurentResult {
        xi_polynomial: xi.is_polynomial(),
        c1,
        c2,
        rest,
    })
}

pub fn image_witness_checks(ctx: &MilnorContext, w: &ImageWitness) -> Vec<Check> {
    let vars = default_vars(ctx.n());
    let show = |p: &Poly| p.display(&vars).to_string();
    let prov = "hand computation in the Jacobian ideal";
    let mut out = Vec::new();
    let mut member = |name: &str, p: &Poly, expected: bool| match ctx.ideal_membership(p) {
        Ok(b) => out.push(Check::compare(
            format!("{name}({})", show(p)),
            b,
            expected,
            prov,
        )),
        Err(e) => out.push(Check::error(name, &e, prov)),
    };
    member("jacobian_member", &w.member, true);
    member("jacobian_member", &w.witness, false);
    for (p, expected) in &w.memberships {
        member("jacobian_member", p, *expected);
    }
    let wname = show(&w.witness);
    match ctx.class_of(&w.witness) {
        _ if !w.class_checks => {}
        Ok((k, coords)) => {
            let torsion = ctx.torsion(k, k).and_then(|t| match t.spaces.get(&k) {
                Some(s) => s.contains(&coords),
                None => Ok(false),
            });
            match torsion {
                Ok(b) => out.push(Check::compare(
                    format!("torsion_class({wname}).k={k}"),
                    b,
                    true,
                    prov,
                )),
                Err(e) => out.push(Check::error("torsion_class", &e, prov)),
            }
            let name = format!("image_of_d({wname}).from={}", k + ctx.d());
            match image_membership(ctx, &w.witness, k + ctx.d()) {
                Ok(b) => out.push(Check::compare(name, b, true, prov)),
                Err(e) => out.push(Check::error(name, &e, prov)),
            }
        }
        Err(e) => out.push(Check::error("torsion_class", &e, prov)),
    }
    if let Some(eta) = &w.laurent {
        let prov = "explicit Laurent forms, constants by hand expansion";
        match laurent_witness(ctx.f(), eta, &w.member, &w.witness) {
            Ok(r) => {
                let ok = r.xi_polynomial
                    && r.rest.is_zero()
                    && !r.c1.is_zero()
                    && !r.c2.is_zero()
                    && w.constants
                        .as_ref()
                        .is_none_or(|(a, b)| *a == r.c1 && *b == r.c2);
                let computed = json!({
                    "xi_polynomial": r.xi_polynomial,
                    "c1": rat_str(&r.c1),
                    "c2": rat_str(&r.c2),
                    "other_terms": show(&r.rest),
                });
                let expected = match &w.constants {
                    Some((a, b)) => json!({
                        "xi_polynomial": true, "c1": rat_str(a), "c2": rat_str(b), "other_terms": "0"
                    }),
                    None => {
                        json!({ "xi_polynomial": true, "c1c2_nonzero": true, "other_terms": "0" })
                    }
                };
                let status = if ok { Status::Pass } else { Status::Fail };
                out.push(Check::new(
                    "laurent_forms",
                    status,
                    computed,
                    expected,
                    prov,
                ));
            }
            Err(e) => out.push(Check::error("laurent_forms", &e, prov)),
        }
    }
    out
}

/// Spectrum and V-filtration checks for the germ `x⁵ + x⁴y + y⁴`.
pub fn germ_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let prov = "published spectrum of x^5+x^4y+y^4";
    let expected = SpectrumMS::over(20, &[9, 13, 14, 17, 18, 19, 21, 22, 23, 26, 27, 31]);
    let w = WeightSystem::new(vec![qf(1, 5), qf(1, 4)]).expect("valid weights");
    let qh = qh_spectrum(&w);
    out.push(Check::compare(
        "spectrum.quasihomogeneous",
        &qh,
        &expected,
        prov,
    ));
    let fifths: Vec<Rational> = (1..5).map(|i| qf(i, 5)).collect();
    let hits: Vec<String> = qh
        .residues()
        .iter()
        .filter(|r| fifths.contains(r))
        .map(rat_str)
        .collect();
    out.push(Check::compare(
        "spectrum.residues_avoid_fifths",
        hits,
        Vec::new(),
        "residues of the germ spectrum versus k/5",
    ));
    let puiseux = PuiseuxPairs::new(vec![(5, 4)])
        .map(|p| puiseux_spectrum_below1(&p))
        .and_then(|s| symmetrize(&s, &q(1)));
    match puiseux {
        Ok(s) => out.push(Check::compare(
            "spectrum.puiseux_symmetrized",
            &s,
            &expected,
            prov,
        )),
        Err(e) => out.push(Check::error("spectrum.puiseux_symmetrized", &e, prov)),
    }
    let one_var = |m: i64| qh_spectrum(&WeightSystem::new(vec![qf(1, m)]).expect("valid weight"));
    out.push(Check::compare(
        "spectrum.thom_sebastiani",
        &ts_join(&one_var(5), &one_var(4)),
        &expected,
        prov,
    ));
    let conds = example_conditions();
    let prov = "monomial description of the V-filtration of the germ";
    for (a, b, vanishes) in [(3, 5, true), (4, 5, true), (9, 20, false)] {
        let alpha = qf(a, b);
        let name = format!("grv_vanishes.alpha={alpha}");
        match grv_vanishes(&alpha, &conds, None) {
            Ok(v) => out.push(Check::compare(name, v, vanishes, prov)),
            Err(e) => out.push(Check::error(name, &e, prov)),
        }
    }
    for (a, b) in [(12, 3), (16, 4)] {
        let name = format!("v_implication.{a}/20_to_{b}/5");
        match implication_holds(&conds[0], &qf(a, 20), &conds[1], &qf(b, 5)) {
            Ok(v) => out.push(Check::compare(name, v, true, prov)),
            Err(e) => out.push(Check::error(name, &e, prov)),
        }
    }
    out
}

/// Published row values starting at column `start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenRow {
    pub label: String,
    pub start: i32,
    pub values: Vec<usize>,
}

impl GoldenRow {
    pub fn new(label: &str, start: i32, values: &[usize]) -> Self {
        GoldenRow {
            label: label.into(),
            start,
            values: values.to_vec(),
        }
    }

    /// Repeats the last value up to column `end`.
    pub fn stable_to(mut self, end: i32) -> Self {
        let last = *self.values.last().unwrap_or(&0);
        while self.start + (self.values.len() as i32) <= end {
            self.values.push(last);
        }
        self
    }

    pub fn end(&self) -> i32 {
        self.start + self.values.len() as i32 - 1
    }

    /// Table entries over the same columns, `None` where unknown.
    pub fn read(&self, table: &SSTable) -> Vec<Option<usize>> {
        table.slice(&self.label, self.start, self.end())
    }

    pub fn matches(&self, table: &SSTable) -> bool {
        self.read(table)
            .iter()
            .zip(&self.values)
            .all(|(a, b)| *a == Some(*b))
    }
}

/// A separation `k/d ∈ R⁰_f ∖ R⁰_g` read from two fixtures, together with
/// `μ^(∞)_k(f) ≠ 0`.
#[derive(Clone, Debug)]
pub struct Separation {
    pub k: i32,
    pub other: BFunctionRoots,
    pub other_name: String,
}

/// Expected values of a report. Absent entries are not checked.
#[derive(Clone, Debug, Default)]
pub struct Golden {
    pub provenance: String,
    pub rows: Vec<GoldenRow>,
    /// Alternative tables of which exactly one must match.
    pub candidates: Vec<Vec<GoldenRow>>,
    pub tau: Option<usize>,
    pub pole_spectrum: Option<SpectrumMS>,
    pub steenbrink: Option<SpectrumMS>,
    /// Local root fixture and the exponents `i` with `bf = bh·∏(s + i/d)`.
    pub factorization: Option<(BFunctionRoots, Vec<i64>)>,
    pub eigenspace: Option<Vec<usize>>,
    pub torsion_witness: Option<Option<i32>>,
    /// `(μ, τ)` at each configured singular point.
    pub local: Vec<(usize, usize)>,
    pub image_witness: Option<ImageWitness>,
    /// Window where `rank(d̄: N_{k+d} → M″_k) = τ − 1` whenever `ν_{k+d} = τ`.
    pub dbar_window: Option<(i32, i32)>,
    pub separation: Option<Separation>,
    pub mu_infinity: Vec<(i32, usize)>,
    pub germ_checks: bool,
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub name: String,
    pub poly: String,
    pub vars: Vec<String>,
    pub r_max: usize,
    /// Spectral sequence window top; `3nd` when absent.
    pub ss_hi: Option<i32>,
    pub points: Vec<Vec<Rational>>,
    /// Local spectra at the singular points; when absent the local
    /// eigenvalues are unknown and the root comparisons are skipped.
    pub local_spectra: Option<Vec<SpectrumMS>>,
    pub bfunction: Option<BFunctionRoots>,
    pub r0_window: (i32, i32),
    pub golden: Golden,
}

impl ReportConfig {
    pub fn new(name: &str, poly: &str, vars: &[&str]) -> Self {
        ReportConfig {
            name: name.into(),
            poly: poly.into(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            r_max: DEFAULT_R_MAX,
            ss_hi: None,
            points: Vec::new(),
            local_spectra: None,
            bfunction: None,
            r0_window: (3, 20),
            golden: Golden::default(),
        }
    }

    /// Parses and validates everything that does not need computation.
    pub fn validate(&self) -> Result<Poly> {
        let f = parse_poly(&self.poly, &self.vars)?;
        if !f.is_homogeneous() || !f.is_polynomial() {
            return input("the polynomial must be homogeneous");
        }
        if self.r_max < 2 {
            return input(format!("r_max must be at least 2, got {}", self.r_max));
        }
        if let Some(hi) = self.ss_hi {
            if hi < 0 {
                return input(format!("window top must be nonnegative, got {hi}"));
            }
        }
        if let Some(p) = self.points.iter().find(|p| p.len() != self.vars.len()) {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                found: p.len(),
            });
        }
        if !self.golden.local.is_empty() && self.golden.local.len() != self.points.len() {
            return input("local invariants must be given for every singular point");
        }
        if self.r0_window.0 > self.r0_window.1 {
            return input("empty root comparison window");
        }
        Ok(f)
    }
}

/// Preset names accepted by [`preset`].
pub const PRESETS: [&str; 4] = ["f1", "f2", "f3", "f4"];

fn hilbert_rows(mu: &[usize], mu_p: &[usize], nu: &[usize]) -> Vec<GoldenRow> {
    let gamma = [1, 3, 6, 10, 12, 12, 10, 6, 3, 1, 0];
    let mu_pp: Vec<usize> = mu.iter().zip(mu_p).map(|(a, b)| a - b).collect();
    vec![
        GoldenRow::new("gamma_k", 3, &gamma).stable_to(30),
        GoldenRow::new("mu'_k", 3, mu_p).stable_to(30),
        GoldenRow::new("mu''_k", 3, &mu_pp).stable_to(30),
        GoldenRow::new("nu_k", 3, nu).stable_to(30),
        GoldenRow::new("mu_k", 3, mu).stable_to(30),
        GoldenRow::new("nu_{k+5}", 3, &nu[5..]).stable_to(30),
    ]
}

fn f1_hilbert() -> Vec<GoldenRow> {
    hilbert_rows(
        &[1, 3, 6, 10, 12, 12, 11],
        &[0, 0, 0, 0, 1, 1, 0],
        &[0, 0, 0, 0, 0, 0, 1, 5, 8, 10, 11],
    )
}

fn remark_hilbert() -> Vec<GoldenRow> {
    hilbert_rows(
        &[1, 3, 6, 10, 12, 12, 11, 10],
        &[0, 0, 0, 1, 2, 2, 1, 0],
        &[0, 0, 0, 0, 0, 0, 1, 4, 7, 9, 10],
    )
}

/// `(x³/y) dx + (1/5)(x³/y) dy`.
fn f1_laurent_eta() -> DiffForm {
    let g = Poly::from_int_terms(3, &[(1, &[3, -1, 0])]);
    DiffForm::one_form(vec![g.clone(), g.scale(&qf(1, 5)), Poly::zero(3)])
}

fn mono(e: &[i32]) -> Poly {
    Poly::from_int_terms(e.len(), &[(1, e)])
}

fn germ_ev() -> Vec<SpectrumMS> {
    let w = WeightSystem::new(vec![qf(1, 5), qf(1, 4)]).expect("valid weights");
    vec![qh_spectrum(&w)]
}

fn sp_f1() -> SpectrumMS {
    spectrum_from_json(SP_F1).expect("bundled fixture")
}

fn origin_chart() -> Vec<Vec<Rational>> {
    vec![vec![q(0), q(0), q(1)]]
}

/// Built-in configurations for the four reference polynomials.
pub fn preset(name: &str) -> Result<ReportConfig> {
    let b = |n: &str| BFunctionRoots::builtin(n).expect("bundled fixture");
    let xyz = ["x", "y", "z"];
    let cfg = match name {
        "f1" => {
            let mut c = ReportConfig::new("f1", "x^5+y^4*z+x^4*y", &xyz);
            c.points = origin_chart();
            c.local_spectra = Some(germ_ev());
            c.bfunction = Some(b("b_f1"));
            let mut rows = f1_hilbert();
            rows.extend([
                GoldenRow::new("mu^(2)_k", 3, &[1, 2, 1, 2, 2, 1, 1]).stable_to(30),
                GoldenRow::new("nu^(2)_{k+5}", 3, &[0, 0, 0, 0, 0, 0, 1]).stable_to(30),
                GoldenRow::new("mu^(3)_k", 3, &[1, 1, 0, 1, 1, 0]).stable_to(30),
            ]);
            c.golden = Golden {
                provenance: "published table for f1".into(),
                rows,
                candidates: Vec::new(),
                tau: Some(11),
                pole_spectrum: Some(SpectrumMS::over(5, &[3, 4, 6, 7])),
                steenbrink: Some(sp_f1()),
                factorization: Some((b("b_h"), vec![3, 4, 6, 7])),
                eigenspace: Some(vec![0, 1, 1, 1, 1]),
                torsion_witness: Some(Some(8)),
                local: vec![(12, 11)],
                image_witness: Some(ImageWitness {
                    member: mono(&[3, 2, 0]),
                    witness: mono(&[2, 3, 0]),
                    memberships: [[0, 4, 0], [4, 1, 0], [5, 0, 0], [1, 3, 1]]
                        .iter()
                        .map(|e| (mono(e), true))
                        .collect(),
                    class_checks: true,
                    laurent: Some(f1_laurent_eta()),
                    constants: Some((q(-1), qf(-3, 5))),
                }),
                dbar_window: Some((3, 30)),
                separation: None,
                mu_infinity: Vec::new(),
                germ_checks: true,
            };
            c
        }
        "f2" => {
            let mut c = ReportConfig::new("f2", "x^5+y^4*z+x^3*y^2", &xyz);
            c.points = origin_chart();
            c.local_spectra = Some(germ_ev());
            c.bfunction = Some(b("b_f2"));
            let mut first = vec![
                GoldenRow::new("mu^(2)_k", 3, &[1, 2, 1, 2, 2, 1, 1]).stable_to(14),
                GoldenRow::new("nu^(2)_{k+5}", 3, &[0, 0, 0, 0, 0, 0, 1]).stable_to(14),
                GoldenRow::new("mu^(3)_k", 3, &[1, 1, 0, 1, 1, 1, 0]).stable_to(14),
                GoldenRow::new("nu^(3)_{k+5}", 3, &[0; 10]).stable_to(14),
                GoldenRow::new("mu^(4)_k", 3, &[0, 1, 0, 1, 1, 1, 0]).stable_to(14),
            ];
            // ν^(3)_{k+5} = 1 at k = 13 only
            first[3].values[10] = 1;
            let second = vec![
                GoldenRow::new("mu^(2)_k", 3, &[1, 2, 1, 2, 2, 2, 1]).stable_to(14),
                GoldenRow::new("nu^(2)_{k+5}", 3, &[0, 0, 0, 0, 0, 1]).stable_to(14),
                GoldenRow::new("mu^(3)_k", 3, &[0, 1, 0, 1, 1, 1, 0]).stable_to(14),
            ];
            c.golden = Golden {
                provenance: "published f1 table and the two alternatives for f2".into(),
                rows: f1_hilbert(),
                candidates: vec![first, second],
                tau: Some(11),
                pole_spectrum: Some(SpectrumMS::over(5, &[4, 6, 7, 8])),
                steenbrink: Some(sp_f1()),
                factorization: Some((b("b_h"), vec![4, 6, 7, 8])),
                eigenspace: Some(vec![0, 1, 1, 1, 1]),
                torsion_witness: Some(None),
                local: vec![(12, 11)],
                image_witness: Some(ImageWitness {
                    member: mono(&[3, 2, 0]),
                    witness: mono(&[2, 3, 0]),
                    memberships: [
                        ([0, 4, 0], true),
                        ([4, 1, 0], false),
                        ([5, 0, 0], true),
                        ([1, 3, 1], false),
                    ]
                    .iter()
                    .map(|(e, b)| (mono(e), *b))
                    .collect(),
                    class_checks: false,
                    laurent: None,
                    constants: None,
                }),
                dbar_window: Some((3, 30)),
                separation: Some(Separation {
                    k: 8,
                    other: b("b_f1"),
                    other_name: "b_f1".into(),
                }),
                mu_infinity: Vec::new(),
                germ_checks: false,
            };
            c
        }
        "f3" | "f4" => {
            let (poly, present) = if name == "f3" {
                ("x^5+x*y^3*z+y^4*z+x*y^4", 0)
            } else {
                ("x^5+x*y^3*z+y^4*z", 1)
            };
            let mut c = ReportConfig::new(name, poly, &xyz);
            c.points = origin_chart();
            c.golden = Golden {
                provenance: "published Hilbert table of the pair; 9/5 in R0 only without xy^4"
                    .into(),
                rows: remark_hilbert(),
                tau: Some(10),
                local: vec![(11, 10)],
                mu_infinity: vec![(9, present)],
                ..Golden::default()
            };
            c
        }
        _ => {
            return input(format!(
                "unknown preset `{name}`; expected one of {}",
                PRESETS.join(", ")
            ))
        }
    };
    Ok(cfg)
}

/// Everything computed for a report besides the checks.
pub struct Computed {
    pub ctx: MilnorContext,
    pub ss: Option<SpectralSequence>,
    pub table: Option<SSTable>,
}

/// Runs every applicable check of the configuration.
pub fn run_report(cfg: &ReportConfig) -> Result<Report> {
    run_report_with(cfg).map(|(r, _)| r)
}

pub fn run_report_with(cfg: &ReportConfig) -> Result<(Report, Computed)> {
    let f = cfg.validate()?;
    let g = &cfg.golden;
    let prov = g.provenance.as_str();
    let mut rep = Report::default();
    let ctx = MilnorContext::new(f)?;
    let isolated = ctx.isolated_sing_check();
    rep.push(Check::compare(
        "isolated_singularities",
        isolated,
        true,
        "hypothesis",
    ));
    if !isolated {
        return Ok((
            rep,
            Computed {
                ctx,
                ss: None,
                table: None,
            },
        ));
    }
    let hi = cfg.ss_hi.unwrap_or_else(|| default_ss_hi(&ctx));
    let ss = SpectralSequence::compute(&ctx, hi, cfg.r_max)?;
    let table = SSTable::build(&ctx, &ss, ctx.n() as i32)?;

    for row in &g.rows {
        let got = row.read(&table);
        let name = format!("row.{}[{}..{}]", row.label, row.start, row.end());
        if got.iter().any(Option::is_none) {
            rep.push(Check::new(
                name,
                Status::Inconclusive,
                json!(got),
                json!(row.values),
                prov,
            ));
        } else {
            let got: Vec<usize> = got.into_iter().flatten().collect();
            rep.push(Check::compare(name, got, row.values.clone(), prov));
        }
    }
    if !g.candidates.is_empty() {
        let matching: Vec<usize> = g
            .candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().all(|r| r.matches(&table)))
            .map(|(i, _)| i + 1)
            .collect();
        let mut labels: Vec<&GoldenRow> = Vec::new();
        for r in g.candidates.iter().flatten() {
            if !labels.iter().any(|x| x.label == r.label) {
                labels.push(r);
            }
        }
        let computed: Vec<Value> = labels
            .iter()
            .map(|r| json!({ "row": r.label, "from": r.start, "values": r.read(&table) }))
            .collect();
        let status = if matching.len() == 1 {
            Status::Pass
        } else {
            Status::Fail
        };
        rep.push(Check::new(
            "page_table_candidate",
            status,
            json!({ "matching": matching, "rows": computed }),
            json!("exactly one alternative matches"),
            prov,
        ));
    }

    let tau = ctx.global_tjurina()?;
    if let Some(t) = g.tau {
        rep.push(Check::compare("global_tjurina", tau, t, prov));
    }
    rep.push(Check::compare(
        "identity_violations",
        table.identity_violations(tau),
        Vec::new(),
        "mu - nu = gamma and mu'' + nu_(nd-k) = tau",
    ));
    let nd = ctx.nd();
    let mu_prime_sym: Vec<i32> = (0..=nd)
        .filter(|&k| table.get("mu'_k", k).unwrap_or(0) != table.get("mu'_k", nd - k).unwrap_or(0))
        .collect();
    rep.push(Check::compare(
        "torsion_symmetry",
        mu_prime_sym,
        Vec::new(),
        "dim M'_k = dim M'_(nd-k)",
    ));
    if let Some((a, b)) = g.dbar_window {
        let d = ctx.d();
        let ks: Vec<i32> = (a..=b)
            .filter(|&k| table.get("nu_k", k + d) == Some(tau))
            .collect();
        let ranks: Result<Vec<usize>> = ks.iter().map(|&k| dbar_rank(&ctx, k)).collect();
        match ranks {
            Ok(r) => rep.push(Check::compare(
                format!("dbar_rank[{a}..{b}]"),
                json!({ "degrees": ks, "ranks": r }),
                json!({ "degrees": ks, "ranks": vec![tau - 1; ks.len()] }),
                "rank of d to M'' is tau - 1 where nu_(k+d) = tau",
            )),
            Err(e) => rep.push(Check::error("dbar_rank", &e, prov)),
        }
    }

    let poles = pole_spectrum_from(&ss);
    if let Some(expected) = &g.pole_spectrum {
        let name = "pole_spectrum";
        if poles.is_certain() {
            rep.push(Check::compare(name, &poles.spectrum, expected, prov));
        } else {
            rep.push(Check::new(
                name,
                Status::Inconclusive,
                json!(poles),
                json!(expected),
                prov,
            ));
        }
    }
    if let Some(sp) = &g.steenbrink {
        let ok = poles.is_certain() && p_compat_check(sp, &poles.spectrum);
        rep.push(Check::compare(
            "steenbrink_vs_pole",
            ok,
            true,
            "bundled Steenbrink spectrum against the computed pole spectrum",
        ));
    }
    for &(k, m) in &g.mu_infinity {
        let name = format!("mu_infinity.k={k}");
        match certified_mu_infinity(&ss, k) {
            Some(v) => rep.push(Check::compare(name, v, m, prov)),
            None => rep.push(Check::new(
                name,
                Status::Inconclusive,
                Value::Null,
                json!(m),
                prov,
            )),
        }
    }

    let ev = cfg.local_spectra.as_ref().map(|s| ev_set(s));
    if let Some(ev) = &ev {
        let residues: Vec<String> = ev.residues().iter().map(rat_str).collect();
        rep.push(Check::new(
            "local_eigenvalues",
            Status::Pass,
            json!(residues),
            Value::Null,
            "residues of the local spectra",
        ));
    }
    match (&cfg.bfunction, &ev) {
        (Some(bf), Some(ev)) => {
            let (a, b) = cfg.r0_window;
            rep.checks.extend(r0_consistency_check(&ss, bf, ev, a..=b)?);
            if let Some(expected) = g.torsion_witness {
                let mu_p = |k| table.get("mu'_k", k).unwrap_or(0);
                let found = torsion_witness(ctx.d(), mu_p, bf, ev)?;
                rep.push(Check::compare("torsion_witness", found, expected, prov));
            }
            if let Some(sep) = &g.separation {
                let d = ctx.d() as i64;
                let alpha = qf(sep.k as i64, d);
                let here = r0_from_bfunction(bf.roots(), ev).contains(&alpha);
                let there = r0_from_bfunction(sep.other.roots(), ev).contains(&alpha);
                let mu = certified_mu_infinity(&ss, sep.k);
                rep.push(Check::compare(
                    format!("r0_separation.{}/{d}", sep.k),
                    json!({ "in_r0": here, "in_other_r0": there, "mu_infinity_nonzero": mu.map(|m| m != 0) }),
                    json!({ "in_r0": true, "in_other_r0": false, "mu_infinity_nonzero": true }),
                    format!("bundled roots of this polynomial and {}", sep.other_name),
                ));
            }
        }
        _ => rep.push(Check::new(
            "r0_vs_pole",
            Status::Skip,
            json!(if cfg.bfunction.is_none() {
                "no b-function fixture"
            } else {
                "local eigenvalues unknown"
            }),
            Value::Null,
            prov,
        )),
    }
    if let Some((bh, set)) = &g.factorization {
        let ok = cfg
            .bfunction
            .as_ref()
            .is_some_and(|bf| factorization_check(bf, bh, set, ctx.d() as i64));
        rep.push(Check::compare(
            format!("factorization{set:?}"),
            ok,
            true,
            "bundled roots of f and of the local germ",
        ));
    }
    if let Some(expected) = &g.eigenspace {
        rep.push(eigenspace_check(Some(&ss), expected));
    }

    if !cfg.points.is_empty() {
        let germs: Result<Vec<LocalGerm>> = cfg
            .points
            .iter()
            .map(|p| LocalGerm::at_point(ctx.f(), p))
            .collect();
        match germs {
            Ok(germs) => {
                for (i, h) in germs.iter().enumerate() {
                    let point: Vec<String> = cfg.points[i].iter().map(rat_str).collect();
                    let name = format!("local_invariants[{}]", point.join(":"));
                    match (local_milnor(h), local_tjurina(h)) {
                        (Ok(m), Ok(t)) => {
                            let expected = g.local.get(i).copied();
                            let c = match expected {
                                Some(e) => Check::compare(name, (m, t), e, prov),
                                None => {
                                    Check::new(name, Status::Pass, json!((m, t)), Value::Null, prov)
                                }
                            };
                            rep.push(c);
                        }
                        (Err(e), _) | (_, Err(e)) => rep.push(Check::error(name, &e, prov)),
                    }
                }
                match tau_reconciliation(&ctx, &germs) {
                    Ok(r) => rep.push(Check::new(
                        "tau_reconciliation",
                        if r.pass { Status::Pass } else { Status::Fail },
                        json!(r),
                        json!(r.global),
                        "sum of local Tjurina numbers equals the stable mu_k",
                    )),
                    Err(e) => rep.push(Check::error("tau_reconciliation", &e, prov)),
                }
            }
            Err(e) => rep.push(Check::error("local_invariants", &e, prov)),
        }
    }
    if let Some(w) = &g.image_witness {
        rep.checks.extend(image_witness_checks(&ctx, w));
    }
    if g.germ_checks {
        rep.checks.extend(germ_checks());
    }
    Ok((
        rep,
        Computed {
            ctx,
            ss: Some(ss),
            table: Some(table),
        },
    ))
}

/// Rational point from `a:b:c` notation.
pub fn parse_point(text: &str) -> Result<Vec<Rational>> {
    text.split(':')
        .map(crate::spectra::rational_from_str)
        .collect()
}
