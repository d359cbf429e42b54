//! Koszul cohomology `N` and the pole order spectral sequence
//! `d^(r): N^(r)_k → M^(r)_{k−rd}`.
//!
//! Page `r` keeps, for every degree `k`, a basis of `N^(r)_k ⊆ N_k` together
//! with a zig-zag chain `η_0, …, η_{r−1}` for each basis element, where
//! `η_j ∈ Ω^{n−1}_{k−jd}`, `df∧η_0 = 0` and `dη_{j−1} = df∧η_j`. The
//! differential is the class of `dη_{r−1}`. Cokernels are kept as the list
//! of image vectors in `M_t` coordinates, each with the chain that produced
//! it, so that later pages can correct chains without re-solving.

use std::fmt::Write as _;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::exactla::{EchelonBasis, Rational, RationalMatrix, SparseVec, Subspace};
use crate::jacobian::{ext_derivative_coords, gamma, MilnorContext};
use crate::spectra::SpectrumMS;

/// Default number of pages.
pub const DEFAULT_R_MAX: usize = 6;

/// `dim N_k`.
pub fn nu(ctx: &MilnorContext, k: i32) -> usize {
    ctx.nu(k)
}

/// `d: Ω^{n−1}_k → Ω^n_{k−d}` on a coordinate vector.
fn d_of(ctx: &MilnorContext, k: i32, eta: &SparseVec) -> SparseVec {
    if eta.is_zero() {
        return SparseVec::new();
    }
    let src = ctx.slice(k);
    let tgt = ctx.slice(k - ctx.d());
    ext_derivative_coords(src.mid_basis(), tgt.top_basis(), eta)
}

/// Matrix of `d: N_k → M_{k−d}` in the canonical bases.
pub fn d1_matrix(ctx: &MilnorContext, k: i32) -> Result<RationalMatrix> {
    if k < ctx.d() {
        return input(format!("d1_matrix needs k >= d = {}, got {k}", ctx.d()));
    }
    let s = ctx.slice(k);
    let t = ctx.slice(k - ctx.d());
    let cols: Vec<Vec<Rational>> = s
        .n_representatives()
        .iter()
        .map(|rep| t.m_coords(&d_of(ctx, k, rep)))
        .collect();
    RationalMatrix::from_columns(&cols, t.mu())
}

/// Whether the class of `g · ω₀` in `M_{k−d}` lies in `d(N_k)`.
pub fn image_membership(ctx: &MilnorContext, g: &crate::Poly, k: i32) -> Result<bool> {
    let (t, v) = ctx.top_form_coords(g)?;
    if t != k - ctx.d() {
        return input(format!(
            "class has degree {t}, but d maps N_{k} to degree {}",
            k - ctx.d()
        ));
    }
    let m = ctx.slice(t).m_coords(&v);
    let d1 = d1_matrix(ctx, k)?;
    Subspace::spanned_by(d1.rows(), &d1.columns())?.contains(&m)
}

/// Rank of `N_{k+d} → M_k → M″_k = M_k / M′_k`.
pub fn dbar_rank(ctx: &MilnorContext, k: i32) -> Result<usize> {
    let d1 = d1_matrix(ctx, k + ctx.d())?;
    let torsion = ctx.torsion(k, k)?;
    let t = &torsion.spaces[&k];
    let both = d1.hcat(t.basis())?;
    Ok(both.rank() - t.dim())
}

#[derive(Clone, Debug)]
struct Element {
    coeffs: Vec<Rational>,
    chain: Vec<SparseVec>,
}

#[derive(Clone, Debug)]
struct ImageVec {
    m: Vec<Rational>,
    chain: Vec<SparseVec>,
    page: usize,
}

/// Pages `1..=r_max` of the spectral sequence, computed exactly for all
/// degrees in `[0, hi]`.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    d: i32,
    n: usize,
    hi: i32,
    r_max: usize,
    mu: Vec<usize>,
    nu: Vec<usize>,
    pages: Vec<Vec<Vec<Element>>>,
    images: Vec<Vec<ImageVec>>,
}

/// What is known about `μ^(∞)_k` after `r_max` pages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    /// Reached zero on a determined page.
    Settled,
    /// Determined at `r_max`, and no later differential with source inside
    /// the window can reach it.
    Clear,
    /// Some `N^(r_max)_{k+rd}`, `r ≥ r_max`, inside the window is nonzero.
    MayChange,
    /// Differentials from beyond the window reach it before page `r_max`.
    Undetermined,
}

fn add_chain(acc: &mut [SparseVec], offset: usize, c: &Rational, chain: &[SparseVec]) {
    for (j, z) in chain.iter().enumerate() {
        acc[offset + j] = acc[offset + j].add_scaled(c, z);
    }
}

impl SpectralSequence {
    pub fn compute(ctx: &MilnorContext, hi: i32, r_max: usize) -> Result<SpectralSequence> {
        if hi < 0 {
            return input(format!("window top must be nonnegative, got {hi}"));
        }
        if r_max < 1 {
            return input("r_max must be at least 1");
        }
        ctx.require_isolated()?;
        ctx.prefetch(0, hi);
        let size = hi as usize + 1;
        let mu: Vec<usize> = (0..=hi).map(|k| ctx.slice(k).mu()).collect();
        let nu: Vec<usize> = (0..=hi).map(|k| ctx.slice(k).nu()).collect();
        let first: Vec<Vec<Element>> = (0..=hi)
            .map(|k| {
                let s = ctx.slice(k);
                s.n_representatives()
                    .iter()
                    .enumerate()
                    .map(|(i, rep)| Element {
                        coeffs: crate::jacobian::unit_dense(s.nu(), i),
                        chain: vec![rep.clone()],
                    })
                    .collect()
            })
            .collect();
        let mut ss = SpectralSequence {
            d: ctx.d(),
            n: ctx.n(),
            hi,
            r_max,
            mu,
            nu,
            pages: vec![first],
            images: vec![Vec::new(); size],
        };
        for r in 1..r_max {
            ss.advance(ctx, r)?;
        }
        Ok(ss)
    }

    /// Builds page `r + 1` from page `r`.
    fn advance(&mut self, ctx: &MilnorContext, r: usize) -> Result<()> {
        let shift = r as i32 * self.d;
        let steps: Vec<(Vec<Element>, Vec<ImageVec>)> = (0..=self.hi)
            .into_par_iter()
            .map(|k| self.step(ctx, r, k, k - shift))
            .collect::<Result<_>>()?;
        let mut next = Vec::with_capacity(steps.len());
        for (k, (elems, imgs)) in steps.into_iter().enumerate() {
            let t = k as i32 - shift;
            if t >= 0 {
                self.images[t as usize].extend(imgs);
            }
            next.push(elems);
        }
        self.pages.push(next);
        Ok(())
    }

    fn step(
        &self,
        ctx: &MilnorContext,
        r: usize,
        k: i32,
        t: i32,
    ) -> Result<(Vec<Element>, Vec<ImageVec>)> {
        let cur = &self.pages[r - 1][k as usize];
        if cur.is_empty() {
            return Ok((Vec::new(), Vec::new()));
        }
        let top_k = k - (r as i32 - 1) * self.d;
        let target = ctx.slice(t);
        let us: Vec<Vec<Rational>> = cur
            .iter()
            .map(|e| target.m_coords(&d_of(ctx, top_k, &e.chain[r - 1])))
            .collect();
        let bs: &[ImageVec] = if t >= 0 {
            &self.images[t as usize]
        } else {
            &[]
        };
        let mut cols = us.clone();
        cols.extend(bs.iter().map(|b| b.m.clone()));
        let kernel = RationalMatrix::from_columns(&cols, target.mu())?
            .kernel_basis()
            .basis_vectors();

        let mut survivors = Vec::with_capacity(kernel.len());
        for v in kernel {
            let (c, e) = v.split_at(cur.len());
            let mut coeffs = vec![Rational::zero(); cur[0].coeffs.len()];
            let mut chain = vec![SparseVec::new(); r];
            for (ci, el) in c.iter().zip(cur) {
                if ci.is_zero() {
                    continue;
                }
                for (a, x) in coeffs.iter_mut().zip(&el.coeffs) {
                    *a += ci * x;
                }
                add_chain(&mut chain, 0, ci, &el.chain);
            }
            for (el, b) in e.iter().zip(bs) {
                if !el.is_zero() {
                    add_chain(&mut chain, r - b.chain.len(), el, &b.chain);
                }
            }
            let exact = d_of(ctx, top_k, &chain[r - 1]);
            let next = target.solve_top(&exact).ok_or_else(|| {
                Error::Internal(format!(
                    "zig-zag in degree {k} does not lift at page {}",
                    r + 1
                ))
            })?;
            chain.push(next);
            survivors.push(Element { coeffs, chain });
        }

        let mut span = EchelonBasis::new(target.mu());
        for b in bs {
            span.insert(SparseVec::from_dense(&b.m));
        }
        let mut images = Vec::new();
        for (u, el) in us.into_iter().zip(cur) {
            if span.insert(SparseVec::from_dense(&u)).is_some() {
                images.push(ImageVec {
                    m: u,
                    chain: el.chain.clone(),
                    page: r,
                });
            }
        }
        if cur.len() - survivors.len() != images.len() {
            return Err(Error::Internal(format!(
                "rank of d^({r}) from degree {k} is inconsistent"
            )));
        }
        Ok((survivors, images))
    }

    pub fn d(&self) -> i32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hi(&self) -> i32 {
        self.hi
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    fn in_window(&self, k: i32) -> bool {
        (0..=self.hi).contains(&k)
    }

    pub fn mu(&self, k: i32) -> Option<usize> {
        if k < 0 {
            return Some(0);
        }
        self.in_window(k).then(|| self.mu[k as usize])
    }

    pub fn nu(&self, k: i32) -> Option<usize> {
        if k < 0 {
            return Some(0);
        }
        self.in_window(k).then(|| self.nu[k as usize])
    }

    fn image_count(&self, r: usize, t: i32) -> usize {
        self.images[t as usize]
            .iter()
            .take_while(|b| b.page < r)
            .count()
    }

    /// `dim M^(r)_k`, or `None` when a differential from beyond the window
    /// could reach degree `k` before page `r`.
    pub fn mu_page(&self, r: usize, k: i32) -> Option<usize> {
        assert!((1..=self.r_max).contains(&r), "page {r} was not computed");
        if k < 0 {
            return Some(0);
        }
        if k + (r as i32 - 1) * self.d > self.hi {
            return None;
        }
        Some(self.mu[k as usize] - self.image_count(r, k))
    }

    /// `dim N^(r)_k`.
    pub fn nu_page(&self, r: usize, k: i32) -> Option<usize> {
        assert!((1..=self.r_max).contains(&r), "page {r} was not computed");
        if k < 0 {
            return Some(0);
        }
        self.in_window(k)
            .then(|| self.pages[r - 1][k as usize].len())
    }

    /// `N^(r)_k` as a subspace of `N_k` coordinates.
    pub fn n_page_space(&self, r: usize, k: i32) -> Result<Subspace> {
        if !self.in_window(k) || !(1..=self.r_max).contains(&r) {
            return input(format!(
                "page {r}, degree {k} is outside the computed range"
            ));
        }
        let vs: Vec<Vec<Rational>> = self.pages[r - 1][k as usize]
            .iter()
            .map(|e| e.coeffs.clone())
            .collect();
        Subspace::spanned_by(self.nu[k as usize], &vs)
    }

    /// Coordinates in `M^(r)_t` of a class given in `M_t` coordinates: the
    /// normal form modulo the image vectors, read off at the non-pivot
    /// columns.
    pub fn quotient_coords(&self, r: usize, t: i32, m: &[Rational]) -> Vec<Rational> {
        if t < 0 {
            return Vec::new();
        }
        let mut span = EchelonBasis::new(self.mu[t as usize]);
        for b in self.images[t as usize].iter().take_while(|b| b.page < r) {
            span.insert(SparseVec::from_dense(&b.m));
        }
        let nf = span.normal_form(&SparseVec::from_dense(m));
        span.non_pivot_columns()
            .iter()
            .map(|&c| nf.get(c))
            .collect()
    }

    /// The class of `d^(r)` on `ω ∈ N^(r)_k`, by an explicit zig-zag.
    ///
    /// `offset(j, degree)` is added to `η_j` right after it is formed. For
    /// `j = 0` it should lie in `df∧Ω^{n−2}`, for `j ≥ 1` in the kernel of
    /// `df∧`; the result must not depend on it.
    pub fn zigzag_dr(
        &self,
        ctx: &MilnorContext,
        k: i32,
        omega: &SparseVec,
        r: usize,
        offset: &mut dyn FnMut(usize, i32) -> SparseVec,
    ) -> Result<Vec<Rational>> {
        if !(1..=self.r_max).contains(&r) || k > self.hi {
            return input(format!(
                "page {r}, degree {k} is outside the computed range"
            ));
        }
        let slice = ctx.slice(k);
        let start = omega.add_scaled(&Rational::from_integer(1.into()), &offset(0, k));
        if !slice.wedge_df(ctx.f(), &start).is_zero() {
            return input("ω is not df∧-closed");
        }
        let mut chain = vec![start];
        for s in 1..r {
            let t = k - s as i32 * self.d;
            let src = k - (s as i32 - 1) * self.d;
            let target = ctx.slice(t);
            let m = target.m_coords(&d_of(ctx, src, &chain[s - 1]));
            if t >= 0 {
                let bs: Vec<&ImageVec> = self.images[t as usize]
                    .iter()
                    .take_while(|b| b.page < s)
                    .collect();
                let cols: Vec<Vec<Rational>> = bs.iter().map(|b| b.m.clone()).collect();
                let neg: Vec<Rational> = m.iter().map(|x| -x).collect();
                let e = RationalMatrix::from_columns(&cols, m.len())?
                    .solve(&neg)?
                    .ok_or_else(|| {
                        Error::Internal(format!(
                            "class in degree {k} does not survive to page {}",
                            s + 1
                        ))
                    })?;
                for (x, b) in e.iter().zip(&bs) {
                    if !x.is_zero() {
                        add_chain(&mut chain, s - b.chain.len(), x, &b.chain);
                    }
                }
            }
            let exact = d_of(ctx, src, &chain[s - 1]);
            let eta = target.solve_top(&exact).ok_or_else(|| {
                Error::Internal(format!("zig-zag step {s} from degree {k} does not lift"))
            })?;
            chain.push(eta.add_scaled(&Rational::from_integer(1.into()), &offset(s, t)));
        }
        let t = k - r as i32 * self.d;
        let src = k - (r as i32 - 1) * self.d;
        let m = ctx.slice(t).m_coords(&d_of(ctx, src, &chain[r - 1]));
        Ok(self.quotient_coords(r, t, &m))
    }

    /// `d^(r)` applied to the stored basis of `N^(r)_k`, in `M^(r)_{k−rd}`
    /// quotient coordinates. Needs `r < r_max`.
    pub fn dr_matrix(&self, ctx: &MilnorContext, r: usize, k: i32) -> Result<RationalMatrix> {
        if r >= self.r_max || !self.in_window(k) {
            return input(format!(
                "d^({r}) from degree {k} is outside the computed range"
            ));
        }
        let t = k - r as i32 * self.d;
        let src = k - (r as i32 - 1) * self.d;
        let cols: Vec<Vec<Rational>> = self.pages[r - 1][k as usize]
            .iter()
            .map(|e| {
                let m = ctx.slice(t).m_coords(&d_of(ctx, src, &e.chain[r - 1]));
                self.quotient_coords(r, t, &m)
            })
            .collect();
        let rows = self.mu_page(r, t).unwrap_or(0);
        RationalMatrix::from_columns(&cols, rows)
    }

    /// The lowest page at which `μ^(r)_k = 0`, if any determined page has it.
    fn settled_at(&self, k: i32) -> Option<usize> {
        (1..=self.r_max).find(|&r| self.mu_page(r, k) == Some(0))
    }

    pub fn stability(&self, k: i32) -> Stability {
        if self.settled_at(k).is_some() {
            return Stability::Settled;
        }
        if self.mu_page(self.r_max, k).is_none() {
            return Stability::Undetermined;
        }
        let reachable = (self.r_max..)
            .map(|r| k + r as i32 * self.d)
            .take_while(|&src| src <= self.hi)
            .any(|src| self.nu_page(self.r_max, src).unwrap_or(0) > 0);
        if reachable {
            Stability::MayChange
        } else {
            Stability::Clear
        }
    }

    /// `μ^(r_max)_k` as the best available value of `μ^(∞)_k`.
    pub fn mu_infinity(&self, k: i32) -> Option<usize> {
        match self.stability(k) {
            Stability::Settled => Some(0),
            Stability::Undetermined => None,
            _ => self.mu_page(self.r_max, k),
        }
    }
}

/// Pole spectrum with the degrees that could not be certified.
#[derive(Clone, Debug, Serialize)]
pub struct PoleSpectrum {
    pub spectrum: SpectrumMS,
    pub undetermined: Vec<i32>,
    pub may_change: Vec<i32>,
}

impl PoleSpectrum {
    pub fn is_certain(&self) -> bool {
        self.undetermined.is_empty() && self.may_change.is_empty()
    }
}

/// Default spectral sequence window top, `3nd`.
pub fn default_ss_hi(ctx: &MilnorContext) -> i32 {
    3 * ctx.nd()
}

/// `{k/d with multiplicity μ^(∞)_k}` over `n ≤ k < nd`, where spectral
/// numbers live.
pub fn pole_spectrum_from(ss: &SpectralSequence) -> PoleSpectrum {
    let nd = ss.n() as i32 * ss.d();
    let mut spectrum = SpectrumMS::new();
    let mut undetermined = Vec::new();
    let mut may_change = Vec::new();
    for k in ss.n() as i32..nd {
        match ss.stability(k) {
            Stability::Undetermined => undetermined.push(k),
            Stability::MayChange => may_change.push(k),
            _ => {}
        }
        if let Some(m) = ss.mu_infinity(k) {
            spectrum.insert(Rational::new(k.into(), ss.d().into()), m);
        }
    }
    PoleSpectrum {
        spectrum,
        undetermined,
        may_change,
    }
}

pub fn pole_spectrum(ctx: &MilnorContext, r_max: usize) -> Result<PoleSpectrum> {
    let ss = SpectralSequence::compute(ctx, default_ss_hi(ctx), r_max)?;
    Ok(pole_spectrum_from(&ss))
}

/// One labelled row of an [`SSTable`]. `shift` is the offset of the degree
/// the value is taken at, so `values[i]` is the dimension at `ks[i] + shift`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub label: String,
    pub shift: i32,
    pub values: Vec<Option<usize>>,
}

/// Dimension table in the layout `k`, `γ`, `μ′`, `μ″`, `ν`, `μ`, `ν_{k+d}`,
/// then `μ^(r)_k`, `ν^(r)_{k+d}` for `r = 2..r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SSTable {
    pub d: i32,
    pub n: usize,
    pub r_max: usize,
    pub window_hi: i32,
    pub ks: Vec<i32>,
    pub rows: Vec<TableRow>,
    pub mu_infinity: Vec<Option<usize>>,
    pub stability: Vec<Stability>,
}

/// Builds the table over `[lo, hi]`, computing the spectral sequence on
/// `[0, hi]`.
pub fn ss_table(ctx: &MilnorContext, lo: i32, hi: i32, r_max: usize) -> Result<SSTable> {
    if lo > hi {
        return input(format!("empty window {lo}..{hi}"));
    }
    let ss = SpectralSequence::compute(ctx, hi, r_max)?;
    SSTable::build(ctx, &ss, lo)
}

fn table_from(ss: &SpectralSequence, lo: i32, mu_prime: impl Fn(i32) -> usize) -> Result<SSTable> {
    let (d, n) = (ss.d(), ss.n());
    let ks: Vec<i32> = (lo..=ss.hi()).collect();
    let row = |label: String, shift: i32, f: &dyn Fn(i32) -> Option<usize>| TableRow {
        label,
        shift,
        values: ks.iter().map(|&k| f(k + shift)).collect(),
    };
    let mut rows = vec![
        row("gamma_k".into(), 0, &|k| Some(gamma(d, n, k))),
        row("mu'_k".into(), 0, &|k| Some(mu_prime(k))),
        row("mu''_k".into(), 0, &|k| ss.mu(k).map(|m| m - mu_prime(k))),
        row("nu_k".into(), 0, &|k| ss.nu(k)),
        row("mu_k".into(), 0, &|k| ss.mu(k)),
        row(format!("nu_{{k+{d}}}"), d, &|k| ss.nu(k)),
    ];
    for r in 2..=ss.r_max() {
        rows.push(row(format!("mu^({r})_k"), 0, &|k| ss.mu_page(r, k)));
        rows.push(row(format!("nu^({r})_{{k+{d}}}"), d, &|k| ss.nu_page(r, k)));
    }
    Ok(SSTable {
        d,
        n,
        r_max: ss.r_max(),
        window_hi: ss.hi(),
        mu_infinity: ks.iter().map(|&k| ss.mu_infinity(k)).collect(),
        stability: ks.iter().map(|&k| ss.stability(k)).collect(),
        ks,
        rows,
    })
}

impl SSTable {
    /// Table over `[lo, ss.hi()]` for an already computed sequence.
    pub fn build(ctx: &MilnorContext, ss: &SpectralSequence, lo: i32) -> Result<SSTable> {
        if lo > ss.hi() {
            return input(format!("empty window {lo}..{}", ss.hi()));
        }
        let torsion = ctx.torsion(lo.max(0), ss.hi())?;
        table_from(ss, lo, |k| torsion.dim(k))
    }

    pub fn row(&self, label: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Entry of the row `label` in column `k`.
    pub fn get(&self, label: &str, k: i32) -> Option<usize> {
        let i = self.ks.iter().position(|&x| x == k)?;
        self.row(label)?.values[i]
    }

    /// Values of row `label` over columns `a..=b`.
    pub fn slice(&self, label: &str, a: i32, b: i32) -> Vec<Option<usize>> {
        (a..=b).map(|k| self.get(label, k)).collect()
    }

    /// The same table restricted to columns `a..=b`.
    pub fn restrict(&self, a: i32, b: i32) -> SSTable {
        let keep: Vec<usize> = (0..self.ks.len())
            .filter(|&i| (a..=b).contains(&self.ks[i]))
            .collect();
        let pick = |v: &Vec<Option<usize>>| keep.iter().map(|&i| v[i]).collect();
        SSTable {
            ks: keep.iter().map(|&i| self.ks[i]).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| TableRow {
                    label: r.label.clone(),
                    shift: r.shift,
                    values: pick(&r.values),
                })
                .collect(),
            mu_infinity: pick(&self.mu_infinity),
            stability: keep.iter().map(|&i| self.stability[i]).collect(),
            ..self.clone()
        }
    }

    /// Degrees where `μ_k − ν_k = γ_k` or `μ″_k + ν_{nd−k} = τ` fails.
    /// `ν` vanishes below `n + d − 1`; columns whose partner degree is
    /// outside the table are skipped for the second identity.
    pub fn identity_violations(&self, tau: usize) -> Vec<i32> {
        let nd = self.n as i32 * self.d;
        let low = self.n as i32 + self.d - 1;
        let nu_at = |k: i32| {
            if k < low {
                Some(0)
            } else {
                self.get("nu_k", k)
            }
        };
        self.ks
            .iter()
            .copied()
            .filter(|&k| {
                let g = self.get("gamma_k", k);
                let (mu, nu) = (self.get("mu_k", k), self.get("nu_k", k));
                let first = match (mu, nu, g) {
                    (Some(m), Some(v), Some(g)) => m == v + g,
                    _ => true,
                };
                let second = match (self.get("mu''_k", k), nu_at(nd - k)) {
                    (Some(a), Some(b)) => a + b == tau,
                    _ => true,
                };
                !(first && second)
            })
            .collect()
    }

    /// Aligned text, zeros left blank and unknown entries shown as `?`.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<(String, Vec<String>)> = Vec::new();
        lines.push(("k".into(), self.ks.iter().map(i32::to_string).collect()));
        let cell = |v: &Option<usize>| match v {
            None => "?".to_string(),
            Some(0) => String::new(),
            Some(x) => x.to_string(),
        };
        for r in &self.rows {
            lines.push((r.label.clone(), r.values.iter().map(cell).collect()));
        }
        lines.push((
            "mu^(inf)_k".into(),
            self.mu_infinity.iter().map(cell).collect(),
        ));
        lines.push((
            "status".into(),
            self.stability
                .iter()
                .map(|s| {
                    match s {
                        Stability::Settled | Stability::Clear => "",
                        Stability::MayChange => "~",
                        Stability::Undetermined => "?",
                    }
                    .to_string()
                })
                .collect(),
        ));
        let label_w = lines.iter().map(|l| l.0.len()).max().unwrap_or(0) + 1;
        let col_w = lines
            .iter()
            .flat_map(|l| l.1.iter().map(String::len))
            .max()
            .unwrap_or(1)
            .max(2);
        let mut out = String::new();
        for (label, cells) in lines {
            let _ = write!(out, "{:>w$}", format!("{label}:"), w = label_w);
            for c in cells {
                let _ = write!(out, " {c:>col_w$}");
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        out
    }

    /// One line per row, `label,v_lo,...,v_hi`; unknown entries are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for k in &self.ks {
            let _ = write!(out, ",{k}");
        }
        out.push('\n');
        let mut emit = |label: &str, values: &[Option<usize>]| {
            out.push_str(label);
            for v in values {
                out.push(',');
                if let Some(x) = v {
                    let _ = write!(out, "{x}");
                }
            }
            out.push('\n');
        };
        for r in &self.rows {
            emit(&r.label, &r.values);
        }
        emit("mu^(inf)_k", &self.mu_infinity);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyforms::parse_poly_auto;

    fn ctx(text: &str) -> MilnorContext {
        MilnorContext::new(parse_poly_auto(text, 3).unwrap()).unwrap()
    }

    #[test]
    fn nu_and_d1_on_f1() {
        let c = ctx("x^5+y^4*z+x^4*y");
        let row: Vec<usize> = (9..=14).map(|k| nu(&c, k)).collect();
        assert_eq!(row, vec![1, 5, 8, 10, 11, 11]);
        assert!((0..=8).all(|k| nu(&c, k) == 0));
        assert_eq!(d1_matrix(&c, 13).unwrap().rank(), 11);
        assert_eq!(d1_matrix(&c, 9).unwrap().rank(), 1);
        let empty = d1_matrix(&c, 8).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (1, 0));
        assert!(d1_matrix(&c, 4).is_err());
    }

    #[test]
    fn image_membership_examples() {
        let c = ctx("x^5+y^4*z+x^4*y");
        let p = |s: &str| parse_poly_auto(s, 3).unwrap();
        assert!(image_membership(&c, &p("x^2*y^3"), 13).unwrap());
        assert!(!image_membership(&c, &p("1"), 8).unwrap());
        assert!(image_membership(&c, &p("x^3*y^2"), 13).unwrap());
        assert!(image_membership(&c, &p("x^2*y^3"), 12).is_err());
    }

    #[test]
    fn dbar_rank_examples() {
        let c = ctx("x^5+y^4*z+x^4*y");
        assert_eq!(dbar_rank(&c, 8).unwrap(), 10);
        assert_eq!(dbar_rank(&c, 9).unwrap(), 10);
        assert_eq!(dbar_rank(&c, 3).unwrap(), 0);
    }

    #[test]
    fn small_fermat_sequence_is_trivial() {
        let c = ctx("x^3+y^3+z^3");
        let ss = SpectralSequence::compute(&c, 18, 3).unwrap();
        for k in 0..=18 {
            assert_eq!(ss.nu(k), Some(0));
        }
        for k in 0..=15 {
            assert_eq!(ss.mu_page(2, k), ss.mu(k));
        }
        assert_eq!(ss.mu_page(2, 16), None);
        let sp = pole_spectrum_from(&ss);
        assert!(sp.is_certain());
        assert_eq!(sp.spectrum.len(), 8);
    }

    #[test]
    fn table_text_layout() {
        let c = ctx("x^3+y^3+z^3");
        let t = ss_table(&c, 3, 12, 2).unwrap().restrict(3, 6);
        let text = t.to_text();
        assert!(text.starts_with("           k:  3  4  5  6\n"), "{text}");
        assert!(t.to_csv().starts_with("row,3,4,5,6\ngamma_k,1,3,3,1\n"));
        assert_eq!(t.get("mu_k", 5), Some(3));
        assert!(t.identity_violations(0).is_empty());
    }
}
