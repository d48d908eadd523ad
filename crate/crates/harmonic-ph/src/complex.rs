//! Finite simplicial complexes, subcomplex selectors, chains and oriented
//! boundary matrices in the standard simplex basis.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// An oriented simplex `[i_0, ..., i_p]` with `i_0 < ... < i_p`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSimplex(vertices));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces with the sign `(-1)^j` of the omitted vertex `j`.
    pub fn facets(&self) -> impl Iterator<Item = (i8, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |j| {
            let mut v = self.0.clone();
            v.remove(j);
            (if j % 2 == 0 { 1 } else { -1 }, Simplex(v))
        })
    }

    /// All non-empty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u64..(1u64 << k))
            .map(|mask| {
                Simplex(
                    (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<usize>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<usize> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite simplicial complex. Simplices of each dimension are kept in
/// lexicographic order, which fixes the basis of every chain space.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Downward closure of `simplices`.
    pub fn build<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        let mut all = BTreeSet::new();
        for s in simplices {
            if all.contains(&s) {
                continue;
            }
            all.extend(s.faces());
        }
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        let index = by_dim
            .iter()
            .flat_map(|v| v.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        SimplicialComplex { by_dim, index }
    }

    pub fn from_vertex_lists<I, V>(lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<usize>>,
    {
        let simplices = lists
            .into_iter()
            .map(|v| Simplex::new(v.into()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::build(simplices))
    }

    /// Largest simplex dimension, `None` for the empty complex.
    pub fn max_dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// `card(K^[p])`.
    pub fn count(&self, p: usize) -> usize {
        self.by_dim.get(p).map_or(0, Vec::len)
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.by_dim.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// All simplices, by dimension and then lexicographically.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn boundary_matrix(&self, p: usize) -> BoundaryMatrix {
        self.full().boundary_matrix(self, p)
    }

    pub fn full(&self) -> Subcomplex {
        Subcomplex {
            mask: self.by_dim.iter().map(|v| vec![true; v.len()]).collect(),
        }
    }

    pub fn empty_subcomplex(&self) -> Subcomplex {
        Subcomplex {
            mask: self.by_dim.iter().map(|v| vec![false; v.len()]).collect(),
        }
    }

    fn shape(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }
}

/// Dense integer boundary matrix: rows are `(p-1)`-simplices, columns `p`-simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    p: usize,
    nrows: usize,
    ncols: usize,
    entries: Vec<i8>,
}

impl BoundaryMatrix {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.ncols + col]
    }

    pub fn to_mat<T: Real>(&self) -> Mat<T> {
        Mat::from_fn(self.nrows, self.ncols, |i, j| match self.get(i, j) {
            0 => T::zero(),
            1 => T::one(),
            _ => -T::one(),
        })
    }

    /// Integer product `self * rhs`, row-major.
    pub fn mul(&self, rhs: &BoundaryMatrix) -> Result<Vec<i64>> {
        if self.ncols != rhs.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: rhs.nrows });
        }
        let mut out = vec![0i64; self.nrows * rhs.ncols];
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k) as i64;
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[i * rhs.ncols + j] += a * rhs.get(k, j) as i64;
                }
            }
        }
        Ok(out)
    }
}

/// A subcomplex of a fixed ambient complex, stored as a membership mask
/// over the ambient simplex ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    mask: Vec<Vec<bool>>,
}

impl Subcomplex {
    /// Exactly the given simplices; fails if the set is not downward closed.
    pub fn from_simplices<'a, I>(k: &SimplicialComplex, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Simplex>,
    {
        let mut sub = k.empty_subcomplex();
        for s in simplices {
            let i = k.index_of(s).ok_or_else(|| Error::SimplexNotInAmbient(s.clone()))?;
            sub.mask[s.dim()][i] = true;
        }
        sub.validate(k)?;
        Ok(sub)
    }

    /// Smallest subcomplex containing the given simplices.
    pub fn closure_of<'a, I>(k: &SimplicialComplex, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Simplex>,
    {
        let mut sub = k.empty_subcomplex();
        for s in simplices {
            if !k.contains(s) {
                return Err(Error::SimplexNotInAmbient(s.clone()));
            }
            for f in s.faces() {
                let i = k.index_of(&f).expect("complex is closed");
                sub.mask[f.dim()][i] = true;
            }
        }
        Ok(sub)
    }

    /// Builds from a raw mask, checking shape and downward closure.
    pub fn from_mask(k: &SimplicialComplex, mask: Vec<Vec<bool>>) -> Result<Self> {
        let sub = Subcomplex { mask };
        sub.validate(k)?;
        Ok(sub)
    }

    pub fn validate(&self, k: &SimplicialComplex) -> Result<()> {
        let shape: Vec<usize> = self.mask.iter().map(Vec::len).collect();
        if shape != k.shape() {
            return Err(Error::ComplexMismatch);
        }
        for (p, row) in self.mask.iter().enumerate().skip(1) {
            for (i, &m) in row.iter().enumerate() {
                if !m {
                    continue;
                }
                let s = &k.simplices(p)[i];
                for (_, f) in s.facets() {
                    let j = k.index_of(&f).expect("complex is closed");
                    if !self.mask[p - 1][j] {
                        return Err(Error::InvalidSubcomplex(format!(
                            "{s} is present but its face {f} is not"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: usize, index: usize) -> bool {
        self.mask.get(p).and_then(|v| v.get(index)).copied().unwrap_or(false)
    }

    /// Ambient indices of the member `p`-simplices, increasing.
    pub fn indices(&self, p: usize) -> Vec<usize> {
        self.mask.get(p).map_or_else(Vec::new, |v| {
            v.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect()
        })
    }

    pub fn count(&self, p: usize) -> usize {
        self.mask.get(p).map_or(0, |v| v.iter().filter(|&&m| m).count())
    }

    pub fn total(&self) -> usize {
        self.mask.iter().flatten().filter(|&&m| m).count()
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        self.mask.len() == other.mask.len()
            && self
                .mask
                .iter()
                .zip(&other.mask)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(&x, &y)| !x || y))
    }

    pub fn simplices<'k>(&self, k: &'k SimplicialComplex, p: usize) -> Vec<&'k Simplex> {
        self.indices(p).into_iter().map(|i| &k.simplices(p)[i]).collect()
    }

    /// The subcomplex as a standalone complex.
    pub fn to_complex(&self, k: &SimplicialComplex) -> SimplicialComplex {
        let all = (0..self.mask.len()).flat_map(|p| self.simplices(k, p)).cloned();
        SimplicialComplex::build(all)
    }

    /// Boundary matrix of the subcomplex in its own chain bases.
    pub fn boundary_matrix(&self, k: &SimplicialComplex, p: usize) -> BoundaryMatrix {
        let cols = self.indices(p);
        let rows = if p == 0 { Vec::new() } else { self.indices(p - 1) };
        let mut row_pos = HashMap::with_capacity(rows.len());
        for (r, &i) in rows.iter().enumerate() {
            row_pos.insert(i, r);
        }
        let mut entries = vec![0i8; rows.len() * cols.len()];
        for (c, &j) in cols.iter().enumerate() {
            for (sign, f) in k.simplices(p)[j].facets() {
                let i = k.index_of(&f).expect("complex is closed");
                let r = row_pos[&i];
                entries[r * cols.len() + c] = sign;
            }
        }
        BoundaryMatrix { p, nrows: rows.len(), ncols: cols.len(), entries }
    }

    /// Zero-pads coordinates over the member `p`-simplices into the ambient chain space.
    pub fn embed<T: Real>(&self, p: usize, local: &[T]) -> Vec<T> {
        let n = self.mask.get(p).map_or(0, Vec::len);
        let mut out = vec![T::zero(); n];
        for (x, i) in local.iter().zip(self.indices(p)) {
            out[i] = *x;
        }
        out
    }

    /// Zero-pads the rows of a matrix in local coordinates.
    pub fn embed_mat<T: Real>(&self, p: usize, local: &Mat<T>) -> Mat<T> {
        let n = self.mask.get(p).map_or(0, Vec::len);
        let idx = self.indices(p);
        let mut out = Mat::zeros(n, local.ncols());
        for (r, &i) in idx.iter().enumerate() {
            for c in 0..local.ncols() {
                out[(i, c)] = local[(r, c)];
            }
        }
        out
    }
}

/// A `p`-chain in the standard basis of some complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chain<T> {
    pub dim: usize,
    pub coeffs: Vec<T>,
}

impl<T: Real> Chain<T> {
    pub fn new(dim: usize, coeffs: Vec<T>) -> Self {
        Chain { dim, coeffs }
    }

    pub fn zero(k: &SimplicialComplex, p: usize) -> Self {
        Chain { dim: p, coeffs: vec![T::zero(); k.count(p)] }
    }

    /// Chain from `(simplex, coefficient)` pairs in `k`.
    pub fn from_terms(k: &SimplicialComplex, p: usize, terms: &[(Simplex, T)]) -> Result<Self> {
        let mut z = Self::zero(k, p);
        for (s, c) in terms {
            if s.dim() != p {
                return Err(Error::DimensionMismatch { expected: p, found: s.dim() });
            }
            let i = k.index_of(s).ok_or_else(|| Error::SimplexNotInAmbient(s.clone()))?;
            z.coeffs[i] = z.coeffs[i] + *c;
        }
        Ok(z)
    }

    pub fn norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt()
    }

    /// Indices with `|c| > tol * ||z||`.
    pub fn support(&self, tol: T) -> Vec<usize> {
        let thr = tol * self.norm();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > thr)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scale(&self, s: T) -> Self {
        Chain { dim: self.dim, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }
}

/// Re-expresses a chain of `source` in the chain basis of `target`, which must
/// contain every `p`-simplex of `source`.
pub fn restrict_chain<T: Real>(
    z: &Chain<T>,
    source: &SimplicialComplex,
    target: &SimplicialComplex,
) -> Result<Chain<T>> {
    let p = z.dim;
    if z.coeffs.len() != source.count(p) {
        return Err(Error::DimensionMismatch { expected: source.count(p), found: z.coeffs.len() });
    }
    let mut out = Chain::zero(target, p);
    for (s, &c) in source.simplices(p).iter().zip(&z.coeffs) {
        let i = target.index_of(s).ok_or_else(|| Error::SimplexNotInAmbient(s.clone()))?;
        out.coeffs[i] = c;
    }
    Ok(out)
}
