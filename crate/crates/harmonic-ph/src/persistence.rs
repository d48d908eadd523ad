//! Filtrations, admissible functions, harmonic persistent homology and
//! harmonic barcodes with their initial and terminal subspaces.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::harmonic::harmonic_basis;
use crate::scalar::Real;
use crate::stability::StepSubspaceFunction;
use crate::subspace::{orthogonal_part, preimage_under_projection, Subspace};

/// M-spaces whose nesting residual exceeds this are treated as a failed
/// rank decision rather than roundoff.
pub const NESTING_LIMIT: f64 = 1e-6;

/// Death index of a bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Death {
    Finite(usize),
    Infinite,
}

impl Death {
    pub fn finite(self) -> Option<usize> {
        match self {
            Death::Finite(t) => Some(t),
            Death::Infinite => None,
        }
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(t) => write!(f, "{t}"),
            Death::Infinite => write!(f, "inf"),
        }
    }
}

/// A nested sequence `K_0 ⊆ ... ⊆ K_N = K` given by entry indices.
/// Faces may enter together with their cofaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    complex: SimplicialComplex,
    entry: Vec<Vec<usize>>,
    last: usize,
    values: Option<Vec<f64>>,
}

impl Filtration {
    /// Every simplex of `complex` needs exactly one entry index.
    pub fn new(complex: SimplicialComplex, entries: &[(Simplex, usize)]) -> Result<Self> {
        let dims = complex.max_dim().map_or(0, |d| d + 1);
        let mut entry: Vec<Vec<Option<usize>>> = (0..dims).map(|p| vec![None; complex.count(p)]).collect();
        for (s, t) in entries {
            let i = complex.index_of(s).ok_or_else(|| Error::SimplexNotInAmbient(s.clone()))?;
            entry[s.dim()][i] = Some(*t);
        }
        let mut out = Vec::with_capacity(dims);
        for (p, row) in entry.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (i, e) in row.into_iter().enumerate() {
                let e = e.ok_or_else(|| {
                    Error::InvalidSubcomplex(format!("no entry index for {}", complex.simplices(p)[i]))
                })?;
                r.push(e);
            }
            out.push(r);
        }
        let last = out.iter().flatten().copied().max().unwrap_or(0);
        let f = Filtration { complex, entry: out, last, values: None };
        f.check_monotone()?;
        Ok(f)
    }

    /// Step `i` adds the listed simplices; the complex is their union.
    pub fn from_steps(steps: &[Vec<Vec<usize>>]) -> Result<Self> {
        let mut entries = Vec::new();
        for (t, step) in steps.iter().enumerate() {
            for v in step {
                entries.push((Simplex::new(v.clone())?, t));
            }
        }
        let complex = SimplicialComplex::build(entries.iter().map(|(s, _)| s.clone()));
        Self::new(complex, &entries)
    }

    fn check_monotone(&self) -> Result<()> {
        for s in self.complex.iter() {
            let es = self.entry_of(s).expect("assigned");
            for (_, f) in s.facets() {
                if self.entry_of(&f).expect("assigned") > es {
                    return Err(Error::NotAdmissible { face: f, coface: s.clone() });
                }
            }
        }
        Ok(())
    }

    /// Attaches real values to the indices `0..=N`; they must increase strictly.
    pub fn with_values(mut self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.last + 1 {
            return Err(Error::DimensionMismatch { expected: self.last + 1, found: values.len() });
        }
        if values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidStepFunction("index values must increase strictly".into()));
        }
        self.values = Some(values);
        Ok(self)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// The last index `N`.
    pub fn last(&self) -> usize {
        self.last
    }

    pub fn entry_of(&self, s: &Simplex) -> Option<usize> {
        let i = self.complex.index_of(s)?;
        Some(self.entry[s.dim()][i])
    }

    /// Real value attached to index `i`: the function value for filtrations
    /// induced by a function, `i / N` otherwise.
    pub fn value_of_index(&self, i: usize) -> f64 {
        match &self.values {
            Some(v) => v[i],
            None if self.last == 0 => 0.0,
            None => i as f64 / self.last as f64,
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        (0..=self.last).map(|i| self.value_of_index(i)).collect()
    }

    /// `K_t`, with `K_t = K` for `t >= N`.
    pub fn subcomplex(&self, t: usize) -> Subcomplex {
        let mask = self.entry.iter().map(|row| row.iter().map(|&e| e <= t).collect()).collect();
        Subcomplex::from_mask(&self.complex, mask).expect("monotone entries give subcomplexes")
    }

    /// Simplices entering exactly at index `t`.
    pub fn added_at(&self, t: usize) -> Vec<&Simplex> {
        self.complex.iter().filter(|s| self.entry_of(s) == Some(t)).collect()
    }

    /// The function `σ ↦ entry(σ) / N`.
    pub fn normalized_function(&self) -> AdmissibleFunction<f64> {
        let n = self.last.max(1) as f64;
        let values = self.entry.iter().map(|row| row.iter().map(|&e| e as f64 / n).collect()).collect();
        AdmissibleFunction { complex: self.complex.clone(), values }
    }

    /// `t ↦ H_p(K_{f <= t})` using [`Filtration::breakpoints`].
    pub fn harmonic_function<T: Real>(&self, p: usize, tol: T) -> Result<StepSubspaceFunction<T>> {
        let mut values = Vec::with_capacity(self.last + 1);
        for t in 0..=self.last {
            values.push(harmonic_basis(&self.complex, &self.subcomplex(t), p, tol)?.space);
        }
        let breakpoints = self.breakpoints().into_iter().map(T::lit).collect();
        StepSubspaceFunction::new(self.complex.count(p), breakpoints, values)
    }
}

/// A real function on the simplices of a complex, stored per dimension in
/// the complex's basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleFunction<T> {
    complex: SimplicialComplex,
    values: Vec<Vec<T>>,
}

impl<T: Real> AdmissibleFunction<T> {
    /// Values for every simplex; admissibility is not checked here.
    pub fn from_pairs(complex: SimplicialComplex, pairs: &[(Simplex, T)]) -> Result<Self> {
        let dims = complex.max_dim().map_or(0, |d| d + 1);
        let mut values: Vec<Vec<Option<T>>> = (0..dims).map(|p| vec![None; complex.count(p)]).collect();
        for (s, v) in pairs {
            let i = complex.index_of(s).ok_or_else(|| Error::SimplexNotInAmbient(s.clone()))?;
            values[s.dim()][i] = Some(*v);
        }
        let mut out = Vec::with_capacity(dims);
        for (p, row) in values.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (i, v) in row.into_iter().enumerate() {
                r.push(v.ok_or_else(|| {
                    Error::InvalidSubcomplex(format!("no value for {}", complex.simplices(p)[i]))
                })?);
            }
            out.push(r);
        }
        Ok(AdmissibleFunction { complex, values: out })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn value(&self, s: &Simplex) -> Option<T> {
        let i = self.complex.index_of(s)?;
        Some(self.values[s.dim()][i])
    }

    /// Values of the `p`-simplices in basis order.
    pub fn values(&self, p: usize) -> &[T] {
        self.values.get(p).map_or(&[], Vec::as_slice)
    }

    /// Strict increase along every face relation.
    pub fn check_admissible(&self) -> Result<()> {
        for s in self.complex.iter() {
            let v = self.value(s).expect("assigned");
            for (_, f) in s.facets() {
                let fv = self.value(&f).expect("assigned");
                if !(fv < v) {
                    return Err(Error::NotAdmissible { face: f, coface: s.clone() });
                }
            }
        }
        Ok(())
    }

    /// Sorted distinct values.
    pub fn distinct_values(&self) -> Vec<T> {
        let mut all: Vec<T> = self.values.iter().flatten().copied().collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        all.dedup();
        all
    }
}

/// Integer filtration whose indices rank the distinct values of `f`.
pub fn filtration_from_function<T: Real>(f: &AdmissibleFunction<T>) -> Result<Filtration> {
    f.check_admissible()?;
    let distinct = f.distinct_values();
    let rank = |v: T| {
        distinct
            .binary_search_by(|x| x.partial_cmp(&v).unwrap_or(Ordering::Equal))
            .expect("value present")
    };
    let entry = f.values.iter().map(|row| row.iter().map(|&v| rank(v)).collect()).collect();
    let last = distinct.len().saturating_sub(1);
    let values = Some(distinct.iter().map(|v| v.to_f64_lossy()).collect());
    Ok(Filtration { complex: f.complex.clone(), entry, last, values })
}

/// `t ↦ H_p(K_{f <= t})` as a step function with breakpoints at the values of `f`.
pub fn harmonic_filtration_function<T: Real>(
    f: &AdmissibleFunction<T>,
    p: usize,
    tol: T,
) -> Result<StepSubspaceFunction<T>> {
    let filt = filtration_from_function(f)?;
    let mut values = Vec::with_capacity(filt.last + 1);
    for t in 0..=filt.last {
        values.push(harmonic_basis(&filt.complex, &filt.subcomplex(t), p, tol)?.space);
    }
    StepSubspaceFunction::new(filt.complex.count(p), f.distinct_values(), values)
}

/// Birth, death and multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bar {
    pub s: usize,
    pub t: Death,
    pub multiplicity: usize,
}

impl Bar {
    pub fn is_simple(&self) -> bool {
        self.multiplicity == 1
    }
}

/// A bar with its initial subspace `P^{s,t} ⊆ H_p(K_s)` and, for simple
/// finite bars, its terminal subspace in `H_p(K_{t-1})`.
#[derive(Clone, Debug)]
pub struct HarmonicBar<T> {
    pub p: usize,
    pub bar: Bar,
    pub initial: Subspace<T>,
    pub terminal: Option<Subspace<T>>,
}

/// Per-filtration cache of harmonic spaces `H_p(K_s)`.
#[derive(Clone, Debug)]
pub struct HarmonicPersistence<'a, T> {
    filt: &'a Filtration,
    p: usize,
    tol: T,
    harmonic: Vec<Subspace<T>>,
}

impl<'a, T: Real> HarmonicPersistence<'a, T> {
    pub fn new(filt: &'a Filtration, p: usize, tol: T) -> Result<Self> {
        let harmonic = (0..=filt.last)
            .map(|s| harmonic_basis(&filt.complex, &filt.subcomplex(s), p, tol).map(|h| h.space))
            .collect::<Result<Vec<_>>>()?;
        Ok(HarmonicPersistence { filt, p, tol, harmonic })
    }

    pub fn filtration(&self) -> &Filtration {
        self.filt
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    fn ambient(&self) -> usize {
        self.filt.complex.count(self.p)
    }

    fn check(&self, s: usize, t: usize) -> Result<()> {
        if s > t || t > self.filt.last {
            return Err(Error::IndexOutOfRange { s, t, n: self.filt.last });
        }
        Ok(())
    }

    /// `H_p(K_s)`; the zero space for `s = -1`.
    pub fn harmonic(&self, s: Option<usize>) -> Subspace<T> {
        match s {
            Some(s) => self.harmonic[s.min(self.filt.last)].clone(),
            None => Subspace::zero(self.ambient()),
        }
    }

    /// `H_p^{s,t}`, the image of `H_p(K_s)` in `H_p(K_t)`; zero for `s = -1`.
    pub fn persistent(&self, s: Option<usize>, t: usize) -> Result<Subspace<T>> {
        let Some(s) = s else {
            return Ok(Subspace::zero(self.ambient()));
        };
        self.check(s, t)?;
        if s == t {
            return Ok(self.harmonic[s].clone());
        }
        self.harmonic[s].projected_onto(&self.harmonic[t], self.tol)
    }

    /// `M^{s,t}`: vectors of `H_p(K_s)` whose image in `H_p(K_t)` lies in `H_p^{s-1,t}`.
    pub fn m_space(&self, s: usize, t: usize) -> Result<Subspace<T>> {
        self.check(s, t)?;
        let earlier = self.persistent(s.checked_sub(1), t)?;
        preimage_under_projection(&self.harmonic[s], &self.harmonic[t], &earlier, self.tol)
    }

    /// `N^{s,t} = M^{s,t-1}` for `t > s`.
    pub fn n_space(&self, s: usize, t: usize) -> Result<Subspace<T>> {
        if t <= s {
            return Err(Error::IndexOutOfRange { s, t, n: self.filt.last });
        }
        self.m_space(s, t - 1)
    }

    /// `M^{s,s}, ..., M^{s,N}` and the largest nesting residual along the chain.
    pub fn m_chain(&self, s: usize) -> Result<(Vec<Subspace<T>>, T)> {
        let mut chain = Vec::with_capacity(self.filt.last + 1 - s);
        let mut worst = T::zero();
        for t in s..=self.filt.last {
            let m = self.m_space(s, t)?;
            if let Some(prev) = chain.last() {
                let r = Subspace::containment_residual(prev, &m)?;
                worst = worst.max(r);
                if r > T::lit(NESTING_LIMIT) {
                    return Err(Error::NotASubspace { residual: r.to_f64_lossy() });
                }
            }
            chain.push(m);
        }
        Ok((chain, worst))
    }

    /// `P^{s,t} = M^{s,t} ∩ (N^{s,t})^perp`, or `H_p(K_s) ∩ (M^{s,N})^perp` for `t = ∞`.
    pub fn p_space(&self, s: usize, t: Death) -> Result<Subspace<T>> {
        match t {
            Death::Finite(t) => {
                let m = self.m_space(s, t)?;
                let n = self.n_space(s, t)?;
                Ok(orthogonal_part(&m, &n, self.tol))
            }
            Death::Infinite => {
                self.check(s, s)?;
                let m = self.m_space(s, self.filt.last)?;
                Ok(orthogonal_part(&self.harmonic[s], &m, self.tol))
            }
        }
    }

    /// `H_p^{s,t-1} ∩ (H_p^{s-1,t-1})^perp`, defined for any `s < t <= N`.
    pub fn terminal_space(&self, s: usize, t: usize) -> Result<Subspace<T>> {
        if s >= t {
            return Err(Error::IndexOutOfRange { s, t, n: self.filt.last });
        }
        self.check(s, t)?;
        let w = self.persistent(Some(s), t - 1)?;
        let u = self.persistent(s.checked_sub(1), t - 1)?;
        Ok(orthogonal_part(&w, &u, self.tol))
    }

    /// All bars with positive multiplicity, ordered by birth then death, and
    /// the largest M-nesting residual seen.
    pub fn barcode_with_residual(&self) -> Result<(Vec<HarmonicBar<T>>, T)> {
        let mut bars = Vec::new();
        let mut worst = T::zero();
        for s in 0..=self.filt.last {
            let (chain, r) = self.m_chain(s)?;
            worst = worst.max(r);
            for t in s + 1..=self.filt.last {
                let initial = orthogonal_part(&chain[t - s], &chain[t - s - 1], self.tol);
                if initial.dim() == 0 {
                    continue;
                }
                let multiplicity = initial.dim();
                let terminal = if multiplicity == 1 { Some(self.terminal_space(s, t)?) } else { None };
                bars.push(HarmonicBar {
                    p: self.p,
                    bar: Bar { s, t: Death::Finite(t), multiplicity },
                    initial,
                    terminal,
                });
            }
            let last = chain.last().expect("chain contains M^{s,s}");
            let initial = orthogonal_part(&self.harmonic[s], last, self.tol);
            if initial.dim() > 0 {
                bars.push(HarmonicBar {
                    p: self.p,
                    bar: Bar { s, t: Death::Infinite, multiplicity: initial.dim() },
                    initial,
                    terminal: None,
                });
            }
        }
        Ok((bars, worst))
    }

    pub fn barcode(&self) -> Result<Vec<HarmonicBar<T>>> {
        Ok(self.barcode_with_residual()?.0)
    }

    /// The bar with the given endpoints, if any.
    pub fn find_bar(&self, s: usize, t: Death) -> Result<Bar> {
        let dim = self.p_space(s, t)?.dim();
        if dim == 0 {
            return Err(Error::NoSuchBar { s, t: t.to_string() });
        }
        Ok(Bar { s, t, multiplicity: dim })
    }
}

/// `H_p^{s,t}` for a filtration.
pub fn persistent_harmonic_space<T: Real>(
    f: &Filtration,
    p: usize,
    s: usize,
    t: usize,
    tol: T,
) -> Result<Subspace<T>> {
    if s > t || t > f.last {
        return Err(Error::IndexOutOfRange { s, t, n: f.last });
    }
    let hs = harmonic_basis(&f.complex, &f.subcomplex(s), p, tol)?.space;
    if s == t {
        return Ok(hs);
    }
    let ht = harmonic_basis(&f.complex, &f.subcomplex(t), p, tol)?.space;
    hs.projected_onto(&ht, tol)
}

/// Harmonic barcode of `f` in dimension `p`.
pub fn barcode<T: Real>(f: &Filtration, p: usize, tol: T) -> Result<Vec<HarmonicBar<T>>> {
    HarmonicPersistence::new(f, p, tol)?.barcode()
}

/// Terminal subspace of a simple finite bar.
pub fn terminal_subspace<T: Real>(f: &Filtration, p: usize, bar: &Bar, tol: T) -> Result<Subspace<T>> {
    if bar.multiplicity != 1 {
        return Err(Error::NotSimple(bar.multiplicity));
    }
    let Death::Finite(t) = bar.t else {
        return Err(Error::InfiniteBar);
    };
    HarmonicPersistence::new(f, p, tol)?.terminal_space(bar.s, t)
}

/// Lookup from simplices to entry indices.
pub fn entry_map(f: &Filtration) -> HashMap<Simplex, usize> {
    f.complex.iter().map(|s| (s.clone(), f.entry_of(s).expect("assigned"))).collect()
}
