//! The graded Milnor algebra `M = Ω^n / df∧Ω^{n-1}` of a homogeneous
//! polynomial, its torsion part and related invariants.
//!
//! Everything is computed one graded piece at a time. A [`KoszulSlice`]
//! holds the exact echelon data of `df∧: Ω^{n-2}_k → Ω^{n-1}_k → Ω^n_k`,
//! from which both `M_k` and the Koszul cohomology `N_k` are read off.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::exactla::{EchelonBasis, Rational, RationalMatrix, SparseVec, Subspace};
use crate::polyforms::{GradedBasis, GradingConvention, Monomial, Poly};

/// `df∧` applied to basis element `i` of `src`, in the coordinates of `tgt`.
fn wedge_df_basis(grad: &[Poly], src: &GradedBasis, i: usize, tgt: &GradedBasis) -> SparseVec {
    let (tuple, m) = src.element(i);
    let mut entries = Vec::new();
    for (j, dj) in grad.iter().enumerate() {
        if tuple.contains(&j) || dj.is_zero() {
            continue;
        }
        let pos = tuple.iter().filter(|&&t| t < j).count();
        let mut merged = tuple.clone();
        merged.insert(pos, j);
        for (mono, c) in dj.terms() {
            let p = tgt
                .position(&merged, &m.mul(mono))
                .expect("df∧ preserves graded degree");
            entries.push((p, if pos % 2 == 1 { -c.clone() } else { c.clone() }));
        }
    }
    SparseVec::from_entries(entries)
}

/// Graded piece `M_k` alone: an echelon basis of `df∧Ω^{n-1}_k` inside
/// `Ω^n_k`. Much cheaper than a [`KoszulSlice`]. The standard columns and
/// normal forms agree with those of the Koszul slice in the same degree,
/// since both are determined by the image subspace alone.
#[derive(Debug)]
pub struct MilnorSlice {
    k: i32,
    top: GradedBasis,
    image: EchelonBasis,
    standard: Vec<usize>,
    std_pos: HashMap<usize, usize>,
}

impl MilnorSlice {
    pub fn build(f: &Poly, conv: &GradingConvention, k: i32) -> MilnorSlice {
        let grad = f.gradient();
        let mid = conv.graded_basis(conv.n - 1, k);
        let top = conv.graded_basis(conv.n, k);
        let mut image = EchelonBasis::new(top.len());
        for i in 0..mid.len() {
            image.insert(wedge_df_basis(&grad, &mid, i, &top));
        }
        let standard = image.non_pivot_columns();
        let std_pos = standard.iter().enumerate().map(|(j, &c)| (c, j)).collect();
        MilnorSlice {
            k,
            top,
            image,
            standard,
            std_pos,
        }
    }

    pub fn degree(&self) -> i32 {
        self.k
    }

    pub fn mu(&self) -> usize {
        self.standard.len()
    }

    pub fn top_basis(&self) -> &GradedBasis {
        &self.top
    }

    pub fn standard_columns(&self) -> &[usize] {
        &self.standard
    }

    pub fn m_coords(&self, top: &SparseVec) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.mu()];
        for (c, x) in self.image.normal_form(top).entries() {
            out[self.std_pos[c]] = x.clone();
        }
        out
    }

    /// Whether a top form lies in `df∧Ω^{n-1}_k`.
    pub fn is_exact(&self, top: &SparseVec) -> bool {
        self.image.contains(top)
    }
}

/// Insertion order for the Koszul echelon: vectors whose support ends latest
/// go first. On these matrices this keeps fill-in far below the natural
/// order; the tracked jacobian echelon does better in natural order.
fn elimination_order(vs: &[SparseVec]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..vs.len()).collect();
    order.sort_by_key(|&i| {
        let v = &vs[i];
        (
            std::cmp::Reverse(v.entries().last().map(|e| e.0)),
            v.nnz(),
            i,
        )
    });
    order
}

/// Exact graded piece of the Koszul complex `(Ω^•, df∧)` in degree `k`.
///
/// Writes `K = df∧Ω^{n-2}_k ⊆ Ω^{n-1}_k`. The non-pivot columns `C` of an
/// echelon basis of `K` span a complement of `K`, and since `df∧` kills `K`,
/// the restriction of `df∧` to `span(C)` has the same image as `df∧` on all
/// of `Ω^{n-1}_k` and a kernel isomorphic to `N_k`.
#[derive(Debug)]
pub struct KoszulSlice {
    k: i32,
    top: GradedBasis,
    mid: GradedBasis,
    koszul: EchelonBasis,
    complement: Vec<usize>,
    jac: EchelonBasis,
    standard: Vec<usize>,
    std_pos: HashMap<usize, usize>,
    comp_pos: HashMap<usize, usize>,
    nreps: Vec<SparseVec>,
    nown: Vec<usize>,
}

impl KoszulSlice {
    pub fn build(f: &Poly, conv: &GradingConvention, k: i32) -> KoszulSlice {
        let n = conv.n;
        let grad = f.gradient();
        let low = conv.graded_basis(n - 2, k);
        let mid = conv.graded_basis(n - 1, k);
        let top = conv.graded_basis(n, k);

        let mut koszul = EchelonBasis::new(mid.len());
        let kgens: Vec<SparseVec> = (0..low.len())
            .map(|i| wedge_df_basis(&grad, &low, i, &mid))
            .collect();
        for i in elimination_order(&kgens) {
            koszul.insert(kgens[i].clone());
        }
        let complement = koszul.non_pivot_columns();
        let jgens: Vec<SparseVec> = complement
            .iter()
            .map(|&c| wedge_df_basis(&grad, &mid, c, &top))
            .collect();
        let comp_pos = complement
            .iter()
            .enumerate()
            .map(|(g, &c)| (c, g))
            .collect();
        let mut jac = EchelonBasis::with_tracking(top.len());
        for g in jgens {
            jac.insert(g);
        }
        let standard = jac.non_pivot_columns();
        let std_pos = standard.iter().enumerate().map(|(j, &c)| (c, j)).collect();

        let mut nreps = Vec::new();
        let mut nown = Vec::new();
        for rel in jac.kernel() {
            let own = rel.entries().last().expect("relations are nonzero").0;
            nown.push(own);
            nreps.push(SparseVec::from_entries(
                rel.entries()
                    .iter()
                    .map(|(g, x)| (complement[*g], x.clone()))
                    .collect(),
            ));
        }
        KoszulSlice {
            k,
            top,
            mid,
            koszul,
            complement,
            jac,
            standard,
            std_pos,
            comp_pos,
            nreps,
            nown,
        }
    }

    pub fn degree(&self) -> i32 {
        self.k
    }

    /// `dim M_k`.
    pub fn mu(&self) -> usize {
        self.standard.len()
    }

    /// `dim N_k`.
    pub fn nu(&self) -> usize {
        self.nreps.len()
    }

    pub fn top_basis(&self) -> &GradedBasis {
        &self.top
    }

    pub fn mid_basis(&self) -> &GradedBasis {
        &self.mid
    }

    /// Rank of `df∧: Ω^{n-2}_k → Ω^{n-1}_k`.
    pub fn koszul_rank(&self) -> usize {
        self.koszul.rank()
    }

    /// Rank of `df∧: Ω^{n-1}_k → Ω^n_k`.
    pub fn jacobian_rank(&self) -> usize {
        self.jac.rank()
    }

    /// Top-form basis columns whose classes form the basis of `M_k`, in
    /// canonical order.
    pub fn standard_columns(&self) -> &[usize] {
        &self.standard
    }

    /// Representatives in `Ω^{n-1}_k` of the basis of `N_k`.
    pub fn n_representatives(&self) -> &[SparseVec] {
        &self.nreps
    }

    /// Coordinates in `M_k` of the class of a top form.
    pub fn m_coords(&self, top: &SparseVec) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.mu()];
        for (c, x) in self.jac.normal_form(top).entries() {
            out[self.std_pos[c]] = x.clone();
        }
        out
    }

    /// The canonical top form representing the given `M_k` coordinates.
    pub fn m_lift(&self, coords: &[Rational]) -> SparseVec {
        SparseVec::from_entries(
            coords
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (self.standard[j], x.clone()))
                .collect(),
        )
    }

    /// Some `η ∈ Ω^{n-1}_k` with `df∧η = target`, if one exists.
    pub fn solve_top(&self, target: &SparseVec) -> Option<SparseVec> {
        let combo = self.jac.express(target)?;
        Some(SparseVec::from_entries(
            combo
                .entries()
                .iter()
                .map(|(g, x)| (self.complement[*g], x.clone()))
                .collect(),
        ))
    }

    /// `df∧η` for `η ∈ Ω^{n-1}_k`, in top-form coordinates.
    pub fn wedge_df(&self, f: &Poly, eta: &SparseVec) -> SparseVec {
        let grad = f.gradient();
        let mut out = SparseVec::new();
        for (i, x) in eta.entries() {
            out = out.add_scaled(x, &wedge_df_basis(&grad, &self.mid, *i, &self.top));
        }
        out
    }

    /// `df∧ζ` for `ζ ∈ Ω^{n-2}_k`, in `Ω^{n-1}_k` coordinates.
    pub fn koszul_image(&self, f: &Poly, conv: &GradingConvention, zeta: &SparseVec) -> SparseVec {
        let grad = f.gradient();
        let low = conv.graded_basis(conv.n - 2, self.k);
        let mut out = SparseVec::new();
        for (i, x) in zeta.entries() {
            out = out.add_scaled(x, &wedge_df_basis(&grad, &low, *i, &self.mid));
        }
        out
    }

    pub fn in_koszul_image(&self, eta: &SparseVec) -> bool {
        self.koszul.contains(eta)
    }

    /// Coordinates in `N_k` of the class of a `df∧`-closed `(n-1)`-form.
    pub fn n_coords(&self, eta: &SparseVec) -> Result<Vec<Rational>> {
        let residual = self.koszul.normal_form(eta);
        let mut by_gen: HashMap<usize, Rational> = HashMap::new();
        for (c, x) in residual.entries() {
            by_gen.insert(self.comp_pos[c], x.clone());
        }
        let coords: Vec<Rational> = self
            .nown
            .iter()
            .map(|g| by_gen.get(g).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let mut recon = SparseVec::new();
        for (rep, x) in self.nreps.iter().zip(&coords) {
            recon = recon.add_scaled(x, rep);
        }
        if recon != residual {
            return Err(Error::Internal(format!(
                "form in degree {} is not df∧-closed",
                self.k
            )));
        }
        Ok(coords)
    }

    /// `Σ c_i · rep_i` in `Ω^{n-1}_k`.
    pub fn n_lift(&self, coords: &[Rational]) -> SparseVec {
        let mut out = SparseVec::new();
        for (rep, x) in self.nreps.iter().zip(coords) {
            out = out.add_scaled(x, rep);
        }
        out
    }
}

/// Exterior derivative `Ω^{n-1}_k → Ω^n_{k-d}` in coordinates.
pub fn ext_derivative_coords(src: &GradedBasis, tgt: &GradedBasis, eta: &SparseVec) -> SparseVec {
    let mut entries = Vec::new();
    for (i, x) in eta.entries() {
        let (tuple, m) = src.element(*i);
        let e = m.exponents();
        for j in 0..e.len() {
            if tuple.contains(&j) || e[j] == 0 {
                continue;
            }
            let pos = tuple.iter().filter(|&&t| t < j).count();
            let mut merged = tuple.clone();
            merged.insert(pos, j);
            let mut de = e.to_vec();
            de[j] -= 1;
            let p = tgt
                .position(&merged, &Monomial::new(de))
                .expect("d lowers graded degree by d");
            let c = x * Rational::from_integer(e[j].into());
            entries.push((p, if pos % 2 == 1 { -c } else { c }));
        }
    }
    SparseVec::from_entries(entries)
}

/// Dimensions over a degree window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertRow {
    pub lo: i32,
    pub hi: i32,
    pub mu: Vec<usize>,
    pub mu_prime: Vec<usize>,
    pub mu_double_prime: Vec<usize>,
}

impl HilbertRow {
    pub fn at(&self, k: i32) -> Option<(usize, usize, usize)> {
        if k < self.lo || k > self.hi {
            return None;
        }
        let i = (k - self.lo) as usize;
        Some((self.mu[i], self.mu_prime[i], self.mu_double_prime[i]))
    }
}

/// Torsion subspaces `M′_k ⊆ M_k` over a window.
#[derive(Clone, Debug)]
pub struct Torsion {
    pub lo: i32,
    pub hi: i32,
    /// Monomial degree after which annihilation stabilized.
    pub stable_n: i32,
    pub spaces: BTreeMap<i32, Subspace>,
}

impl Torsion {
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.spaces.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    pub fn dim(&self, k: i32) -> usize {
        self.spaces.get(&k).map_or(0, Subspace::dim)
    }
}

/// A homogeneous polynomial together with a memo of its graded slices.
#[derive(Debug)]
pub struct MilnorContext {
    f: Poly,
    conv: GradingConvention,
    cache: RwLock<BTreeMap<i32, Arc<KoszulSlice>>>,
    mcache: RwLock<BTreeMap<i32, Arc<MilnorSlice>>>,
    mult: RwLock<HashMap<(usize, i32), Arc<RationalMatrix>>>,
}

impl Clone for MilnorContext {
    fn clone(&self) -> Self {
        MilnorContext {
            f: self.f.clone(),
            conv: self.conv,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
            mcache: RwLock::new(self.mcache.read().expect("cache lock").clone()),
            mult: RwLock::new(self.mult.read().expect("cache lock").clone()),
        }
    }
}

impl MilnorContext {
    pub fn new(f: Poly) -> Result<Self> {
        let Some(d) = f.homogeneous_degree() else {
            return input("f must be a nonzero homogeneous polynomial");
        };
        if !f.is_polynomial() {
            return input("f must have nonnegative exponents");
        }
        if d < 2 {
            return input(format!("f must have degree at least 2, got {d}"));
        }
        let conv = GradingConvention::new(d, f.nvars())?;
        Ok(MilnorContext {
            f,
            conv,
            cache: RwLock::new(BTreeMap::new()),
            mcache: RwLock::new(BTreeMap::new()),
            mult: RwLock::new(HashMap::new()),
        })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn d(&self) -> i32 {
        self.conv.d
    }

    pub fn n(&self) -> usize {
        self.conv.n
    }

    pub fn conv(&self) -> &GradingConvention {
        &self.conv
    }

    /// `n · d`.
    pub fn nd(&self) -> i32 {
        self.conv.d * self.conv.n as i32
    }

    /// Default window `[n, 2nd]` for Hilbert rows.
    pub fn default_window(&self) -> (i32, i32) {
        (self.conv.n as i32, 2 * self.nd())
    }

    pub fn slice(&self, k: i32) -> Arc<KoszulSlice> {
        if let Some(s) = self.cache.read().expect("cache lock").get(&k) {
            return s.clone();
        }
        let s = Arc::new(KoszulSlice::build(&self.f, &self.conv, k));
        self.cache
            .write()
            .expect("cache lock")
            .entry(k)
            .or_insert(s)
            .clone()
    }

    pub fn mslice(&self, k: i32) -> Arc<MilnorSlice> {
        if let Some(s) = self.mcache.read().expect("cache lock").get(&k) {
            return s.clone();
        }
        let s = Arc::new(MilnorSlice::build(&self.f, &self.conv, k));
        self.mcache
            .write()
            .expect("cache lock")
            .entry(k)
            .or_insert(s)
            .clone()
    }

    /// Builds all missing `M`-slices in `[lo, hi]` in parallel.
    pub fn prefetch_m(&self, lo: i32, hi: i32) {
        let missing: Vec<i32> = {
            let cache = self.mcache.read().expect("cache lock");
            (lo..=hi).filter(|k| !cache.contains_key(k)).collect()
        };
        let built: Vec<(i32, MilnorSlice)> = missing
            .into_par_iter()
            .rev()
            .map(|k| (k, MilnorSlice::build(&self.f, &self.conv, k)))
            .collect();
        let mut cache = self.mcache.write().expect("cache lock");
        for (k, s) in built {
            cache.entry(k).or_insert_with(|| Arc::new(s));
        }
    }

    /// Builds all missing Koszul slices in `[lo, hi]` in parallel.
    pub fn prefetch(&self, lo: i32, hi: i32) {
        let missing: Vec<i32> = {
            let cache = self.cache.read().expect("cache lock");
            (lo..=hi).filter(|k| !cache.contains_key(k)).collect()
        };
        // Largest degrees first: they dominate the running time.
        let built: Vec<(i32, KoszulSlice)> = missing
            .into_par_iter()
            .rev()
            .map(|k| (k, KoszulSlice::build(&self.f, &self.conv, k)))
            .collect();
        let mut cache = self.cache.write().expect("cache lock");
        for (k, s) in built {
            cache.entry(k).or_insert_with(|| Arc::new(s));
        }
    }

    pub fn mu(&self, k: i32) -> usize {
        self.mslice(k).mu()
    }

    pub fn nu(&self, k: i32) -> usize {
        self.slice(k).nu()
    }

    /// `g · ω₀` in top-form coordinates of its graded degree.
    pub fn top_form_coords(&self, g: &Poly) -> Result<(i32, SparseVec)> {
        if g.nvars() != self.n() {
            return input(format!(
                "expected a polynomial in {} variables, got {}",
                self.n(),
                g.nvars()
            ));
        }
        if !g.is_polynomial() {
            return input("class representative must have nonnegative exponents");
        }
        let deg = if g.is_zero() {
            0
        } else {
            match g.homogeneous_degree() {
                Some(e) => e,
                None => return input("class representative must be homogeneous"),
            }
        };
        let k = self.conv.graded_degree(deg, self.n());
        let slice = self.mslice(k);
        let mut entries = Vec::new();
        let full: Vec<usize> = (0..self.n()).collect();
        for (m, c) in g.terms() {
            let p = slice
                .top_basis()
                .position(&full, m)
                .expect("homogeneous term lies in its graded piece");
            entries.push((p, c.clone()));
        }
        Ok((k, SparseVec::from_entries(entries)))
    }

    /// Class of `g · ω₀` in `M_k`, with `k` its graded degree.
    pub fn class_of(&self, g: &Poly) -> Result<(i32, Vec<Rational>)> {
        let (k, v) = self.top_form_coords(g)?;
        Ok((k, self.mslice(k).m_coords(&v)))
    }

    /// Whether `g` lies in the Jacobian ideal `(∂f)`.
    pub fn ideal_membership(&self, g: &Poly) -> Result<bool> {
        if g.is_zero() {
            return Ok(true);
        }
        let (k, v) = self.top_form_coords(g)?;
        Ok(self.mslice(k).is_exact(&v))
    }

    /// Matrix of multiplication by `x_i`, `M_k → M_{k+1}`.
    pub fn multiplication_matrix(&self, i: usize, k: i32) -> Arc<RationalMatrix> {
        if let Some(m) = self.mult.read().expect("cache lock").get(&(i, k)) {
            return m.clone();
        }
        let m = Arc::new(self.build_multiplication_matrix(i, k));
        self.mult
            .write()
            .expect("cache lock")
            .entry((i, k))
            .or_insert(m)
            .clone()
    }

    fn build_multiplication_matrix(&self, i: usize, k: i32) -> RationalMatrix {
        let src = self.mslice(k);
        let tgt = self.mslice(k + 1);
        let full: Vec<usize> = (0..self.n()).collect();
        let cols: Vec<Vec<Rational>> = src
            .standard_columns()
            .iter()
            .map(|&c| {
                let (_, m) = src.top_basis().element(c);
                let p = tgt
                    .top_basis()
                    .position(&full, &m.mul(&Monomial::var(self.n(), i)))
                    .expect("x_i raises degree by one");
                tgt.m_coords(&SparseVec::unit(p))
            })
            .collect();
        RationalMatrix::from_columns(&cols, tgt.mu()).expect("consistent shapes")
    }

    /// Matrix of multiplication by the linear form `Σ c_i x_i`.
    pub fn linear_form_matrix(&self, coeffs: &[Rational], k: i32) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.mu(k + 1), self.mu(k));
        for (i, c) in coeffs.iter().enumerate() {
            let x = self.multiplication_matrix(i, k);
            for r in 0..out.rows() {
                for s in 0..out.cols() {
                    let t = &x[(r, s)] * c;
                    out[(r, s)] += t;
                }
            }
        }
        out
    }

    /// `μ_k` over `[lo, hi]`.
    pub fn mu_row(&self, lo: i32, hi: i32) -> Vec<usize> {
        self.prefetch_m(lo, hi);
        (lo..=hi).map(|k| self.mu(k)).collect()
    }

    /// True iff `μ_k` is constant on the last `n·d` degrees of `[n, 2nd]`.
    pub fn isolated_sing_check(&self) -> bool {
        self.stable_mu().is_some()
    }

    fn stable_mu(&self) -> Option<usize> {
        let (_, hi) = self.default_window();
        let row = self.mu_row(hi - self.nd() + 1, hi);
        row.iter().all(|&m| m == row[0]).then_some(row[0])
    }

    /// The stable value of `μ_k`.
    pub fn global_tjurina(&self) -> Result<usize> {
        self.stable_mu().ok_or_else(|| {
            Error::Diagnostic(format!(
                "μ_k does not stabilize over {} consecutive degrees below {}",
                self.nd(),
                2 * self.nd()
            ))
        })
    }

    pub(crate) fn require_isolated(&self) -> Result<()> {
        if self.isolated_sing_check() {
            Ok(())
        } else {
            Err(Error::Unsupported(
                "the projective hypersurface has non-isolated singularities".into(),
            ))
        }
    }

    /// `{v ∈ M_k : every monomial of degree N kills v}` for `k ∈ [lo, hi]`,
    /// by the recursion `K_N(k) = ∩_i x_i^{-1} K_{N-1}(k+1)`.
    fn annihilated(&self, lo: i32, hi: i32, big_n: i32) -> Result<BTreeMap<i32, Subspace>> {
        let n = self.n();
        self.prefetch_m(lo, hi + big_n);
        let mut layer: BTreeMap<i32, Subspace> = (lo..=hi + big_n)
            .map(|k| (k, Subspace::zero(self.mu(k))))
            .collect();
        for step in 1..=big_n {
            let mut next = BTreeMap::new();
            for k in lo..=hi + big_n - step {
                let target = &layer[&(k + 1)];
                let mut acc = Subspace::full(self.mu(k));
                for i in 0..n {
                    let x = self.multiplication_matrix(i, k);
                    acc = acc.intersection(&target.preimage(&x)?)?;
                    if acc.dim() == 0 {
                        break;
                    }
                }
                next.insert(k, acc);
            }
            layer = next;
        }
        Ok(layer)
    }

    /// Torsion part by annihilators, cross-checked against kernels of
    /// powers of two generic linear forms.
    pub fn torsion(&self, lo: i32, hi: i32) -> Result<Torsion> {
        let torsion = self.annihilator_torsion(lo, hi)?;
        self.generic_form_cross_check(&torsion)?;
        Ok(torsion)
    }

    /// Torsion part by annihilators alone.
    pub fn annihilator_torsion(&self, lo: i32, hi: i32) -> Result<Torsion> {
        if lo > hi {
            return input(format!("empty window {lo}..{hi}"));
        }
        self.require_isolated()?;
        let d = self.d();
        let mut big_n = d;
        let mut prev = self.annihilated(lo, hi, big_n)?;
        let spaces = loop {
            if big_n > 64 * d {
                return Err(Error::Diagnostic(format!(
                    "torsion did not stabilize up to monomial degree {big_n}"
                )));
            }
            let cur = self.annihilated(lo, hi, 2 * big_n)?;
            big_n *= 2;
            let same = prev.iter().all(|(k, s)| cur[k].dim() == s.dim());
            if same {
                break cur;
            }
            prev = cur;
        };
        Ok(Torsion {
            lo,
            hi,
            stable_n: big_n,
            spaces,
        })
    }

    pub fn torsion_dims(&self, lo: i32, hi: i32) -> Result<BTreeMap<i32, usize>> {
        Ok(self.torsion(lo, hi)?.dims())
    }

    /// Kernel of `ℓ^e: M_k → M_{k+e}` for a linear form `ℓ`.
    pub fn linear_power_kernel(&self, coeffs: &[Rational], k: i32, e: i32) -> Result<Subspace> {
        self.prefetch_m(k, k + e);
        let mut acc = RationalMatrix::identity(self.mu(k));
        for j in k..k + e {
            acc = self.linear_form_matrix(coeffs, j).mul(&acc)?;
        }
        Ok(acc.kernel_basis())
    }

    fn generic_form_cross_check(&self, t: &Torsion) -> Result<()> {
        let n = self.n();
        let forms: [Vec<Rational>; 2] = [
            (1..=n as i64)
                .map(|i| Rational::from_integer(i.into()))
                .collect(),
            (0..n as u32)
                .map(|i| Rational::from_integer(3i64.pow(i).into()))
                .collect(),
        ];
        let e = 2 * t.stable_n;
        for l in &forms {
            for (k, s) in &t.spaces {
                let ker = self.linear_power_kernel(l, *k, e)?;
                let agree = ker.dim() == s.dim()
                    && s.basis_vectors()
                        .iter()
                        .all(|v| ker.contains(v).unwrap_or(false));
                if !agree {
                    return Err(Error::Internal(format!(
                        "annihilator torsion (dim {}) and generic linear form kernel (dim {}) disagree in degree {k}",
                        s.dim(),
                        ker.dim()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Rows `μ, μ′, μ″` over `[lo, hi]`.
    pub fn hilbert_row(&self, lo: i32, hi: i32) -> Result<HilbertRow> {
        let mu = self.mu_row(lo, hi);
        let t = self.torsion(lo, hi)?;
        let mu_prime: Vec<usize> = (lo..=hi).map(|k| t.dim(k)).collect();
        let mu_double_prime = mu.iter().zip(&mu_prime).map(|(a, b)| a - b).collect();
        Ok(HilbertRow {
            lo,
            hi,
            mu,
            mu_prime,
            mu_double_prime,
        })
    }
}

/// Coefficients of `(t + t² + … + t^{d-1})^n`, keyed by exponent.
pub fn gamma_series(d: i32, n: usize) -> Result<BTreeMap<i32, usize>> {
    if d < 2 || n < 1 {
        return input(format!(
            "gamma series needs d >= 2 and n >= 1, got d={d}, n={n}"
        ));
    }
    let mut coeffs: BTreeMap<i32, usize> = BTreeMap::from([(0, 1)]);
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (e, c) in &coeffs {
            for j in 1..d {
                *next.entry(e + j).or_insert(0) += c;
            }
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// `γ_k`, zero outside the support.
pub fn gamma(d: i32, n: usize, k: i32) -> usize {
    gamma_series(d, n)
        .ok()
        .and_then(|g| g.get(&k).copied())
        .unwrap_or(0)
}

/// A vector that is one at position `i`.
pub(crate) fn unit_dense(len: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[i] = Rational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyforms::parse_poly_auto;

    fn ctx(text: &str) -> MilnorContext {
        MilnorContext::new(parse_poly_auto(text, 3).unwrap()).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_series(5, 3).unwrap();
        let row: Vec<usize> = (3..=12).map(|k| g[&k]).collect();
        assert_eq!(row, vec![1, 3, 6, 10, 12, 12, 10, 6, 3, 1]);
        assert_eq!(gamma_series(2, 2).unwrap(), BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn small_mu_row() {
        let c = ctx("x^5+y^4*z+x^4*y");
        assert_eq!(c.mu_row(3, 10), vec![1, 3, 6, 10, 12, 12, 11, 11]);
        assert_eq!(c.nu(9), 1);
        assert_eq!(c.nu(8), 0);
    }

    #[test]
    fn membership_examples() {
        let c = ctx("x^5+y^4*z+x^4*y");
        assert!(c
            .ideal_membership(&parse_poly_auto("x^3*y^2", 3).unwrap())
            .unwrap());
        assert!(!c
            .ideal_membership(&parse_poly_auto("x^2*y^3", 3).unwrap())
            .unwrap());
        assert!(c.ideal_membership(&Poly::zero(3)).unwrap());
        assert!(c
            .ideal_membership(&parse_poly_auto("x+y^2", 3).unwrap())
            .is_err());
    }

    #[test]
    fn milnor_and_koszul_slices_agree() {
        let c = ctx("x^5+x*y^3*z+y^4*z+x*y^4");
        for k in [3, 8, 9, 13] {
            let (m, s) = (c.mslice(k), c.slice(k));
            assert_eq!(m.standard_columns(), s.standard_columns());
            for i in 0..s.top_basis().len() {
                let v = SparseVec::unit(i);
                assert_eq!(m.m_coords(&v), s.m_coords(&v));
            }
        }
    }

    #[test]
    fn n_coords_round_trip() {
        let c = ctx("x^5+y^4*z+x^4*y");
        let s = c.slice(11);
        for (i, rep) in s.n_representatives().iter().enumerate() {
            assert!(s.wedge_df(c.f(), rep).is_zero());
            assert_eq!(s.n_coords(rep).unwrap(), unit_dense(s.nu(), i));
        }
    }
}
