use num_traits::Zero;

use super::Rational;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, Rational::from_integer(1.into()))],
        }
    }

    /// Builds from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries(mut entries: Vec<(usize, Rational)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (i, x) in entries {
            match out.last_mut() {
                Some((j, y)) if *j == i => *y += x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); len];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c * y));
                        b.next();
                    } else {
                        let s = x + c * y;
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, c * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }
}

/// Outcome of reducing a vector against an [`EchelonBasis`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// What is left after eliminating every pivot column; supported on
    /// non-pivot columns only.
    pub residual: SparseVec,
    /// `(row, c)` pairs with `v = residual + Σ c · row`.
    pub coefficients: Vec<(usize, Rational)>,
}

/// Incremental row echelon form over the rationals.
///
/// Each stored row has its pivot (first nonzero entry) normalized to one and
/// no two rows share a pivot. Rows are not inter-reduced; full reduction
/// sweeps columns left to right, which is enough because a row's support
/// never lies left of its pivot.
///
/// With tracking enabled every row also records how it was obtained from
/// the inserted generators, so that solutions of `Σ c_g · g = v` and the
/// relations among generators (the kernel) come out as by-products.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<usize>>,
    track: bool,
    combos: Vec<SparseVec>,
    ngens: usize,
    kernel: Vec<SparseVec>,
}

impl EchelonBasis {
    pub fn new(ncols: usize) -> Self {
        EchelonBasis {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
            track: false,
            combos: Vec::new(),
            ngens: 0,
            kernel: Vec::new(),
        }
    }

    pub fn with_tracking(ncols: usize) -> Self {
        EchelonBasis {
            track: true,
            ..Self::new(ncols)
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generator_count(&self) -> usize {
        self.ngens
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn non_pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols)
            .filter(|&c| self.pivot_row[c].is_none())
            .collect()
    }

    /// Relations among the inserted generators, one per generator that
    /// reduced to zero. Only populated with tracking.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    pub fn reduce(&self, v: &SparseVec) -> Reduction {
        let mut acc: Vec<Option<Rational>> = vec![None; self.ncols];
        let mut first = self.ncols;
        for (i, x) in v.entries() {
            assert!(*i < self.ncols, "vector index out of range");
            acc[*i] = Some(x.clone());
            first = first.min(*i);
        }
        let mut coefficients = Vec::new();
        for c in first..self.ncols {
            let Some(r) = self.pivot_row[c] else { continue };
            let Some(coef) = acc[c].take() else { continue };
            for (j, y) in &self.rows[r].entries()[1..] {
                let t = &coef * y;
                let slot = &mut acc[*j];
                *slot = match slot.take() {
                    None => Some(-t),
                    Some(z) => {
                        let s = z - t;
                        (!s.is_zero()).then_some(s)
                    }
                };
            }
            coefficients.push((r, coef));
        }
        let residual = SparseVec {
            entries: acc
                .into_iter()
                .enumerate()
                .filter_map(|(i, x)| x.map(|x| (i, x)))
                .collect(),
        };
        Reduction {
            residual,
            coefficients,
        }
    }

    pub fn normal_form(&self, v: &SparseVec) -> SparseVec {
        self.reduce(v).residual
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).residual.is_zero()
    }

    /// Inserts the next generator. Returns the new row index when it was
    /// independent of everything inserted before.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let gen = self.ngens;
        self.ngens += 1;
        let red = self.reduce(&v);
        let combo = if self.track {
            let mut acc: Vec<Option<Rational>> = vec![None; self.ngens];
            acc[gen] = Some(Rational::from_integer(1.into()));
            for (r, c) in &red.coefficients {
                for (g, y) in self.combos[*r].entries() {
                    let t = c * y;
                    let slot = &mut acc[*g];
                    *slot = match slot.take() {
                        None => Some(-t),
                        Some(z) => {
                            let s = z - t;
                            (!s.is_zero()).then_some(s)
                        }
                    };
                }
            }
            SparseVec {
                entries: acc
                    .into_iter()
                    .enumerate()
                    .filter_map(|(i, x)| x.map(|x| (i, x)))
                    .collect(),
            }
        } else {
            SparseVec::new()
        };
        let Some((lead_col, lead)) = red.residual.entries().first().cloned() else {
            if self.track {
                self.kernel.push(combo);
            }
            return None;
        };
        let inv = lead.recip();
        let row = self.rows.len();
        self.rows.push(red.residual.scaled(&inv));
        if self.track {
            self.combos.push(combo.scaled(&inv));
        }
        self.pivot_row[lead_col] = Some(row);
        Some(row)
    }

    /// Generator coefficients `c` with `Σ c_g · g = v`, when `v` lies in the
    /// span. Requires tracking.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "express requires a tracking echelon basis");
        let red = self.reduce(v);
        if !red.residual.is_zero() {
            return None;
        }
        let mut out = SparseVec::new();
        for (r, c) in &red.coefficients {
            out = out.add_scaled(c, &self.combos[*r]);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    fn sv(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    #[test]
    fn echelon_rank_and_normal_form() {
        let mut e = EchelonBasis::with_tracking(3);
        assert!(e.insert(sv(&[1, 2, 0])).is_some());
        assert!(e.insert(sv(&[2, 4, 0])).is_none());
        assert!(e.insert(sv(&[0, 1, 1])).is_some());
        assert_eq!(e.rank(), 2);
        assert_eq!(e.non_pivot_columns(), vec![2]);
        assert_eq!(e.kernel().len(), 1);
        assert_eq!(e.kernel()[0], sv(&[-2, 1, 0]));
        let nf = e.normal_form(&sv(&[1, 0, 0]));
        assert_eq!(nf.entries().len(), 1);
        assert_eq!(nf.entries()[0].0, 2);
    }

    #[test]
    fn express_recovers_combination() {
        let gens = [sv(&[1, 1, 0, 0]), sv(&[0, 1, 1, 0]), sv(&[1, 0, -1, 0])];
        let mut e = EchelonBasis::with_tracking(4);
        for g in &gens {
            e.insert(g.clone());
        }
        let target = sv(&[3, 5, 2, 0]);
        let c = e.express(&target).unwrap();
        let mut sum = SparseVec::new();
        for (g, x) in c.entries() {
            sum = sum.add_scaled(x, &gens[*g]);
        }
        assert_eq!(sum, target);
        assert!(e.express(&sv(&[0, 0, 0, 1])).is_none());
    }
}
