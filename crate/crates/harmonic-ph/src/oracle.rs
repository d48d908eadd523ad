//! Exact reference computations over the rationals: Betti numbers,
//! persistent Betti numbers, subquotient dimensions and intersection
//! dimensions. Meant for small instances (a few hundred simplices).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::complex::{BoundaryMatrix, SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::persistence::{Death, Filtration};

pub type Rational = BigRational;

/// Dense matrix of big rationals, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = Rational::from_integer(BigInt::from(x));
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `n`.
    pub fn from_columns(n: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(n, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n);
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_boundary(b: &BoundaryMatrix) -> Self {
        let mut m = Self::zeros(b.nrows(), b.ncols());
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                let x = b.get(i, j);
                if x != 0 {
                    m.data[i * m.cols + j] = Rational::from_integer(BigInt::from(x));
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn hstack(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(self.rows, &cols)
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Zero-pads rows: row `r` of `self` becomes row `rows[r]` of an `n`-row matrix.
    pub fn embed_rows(&self, rows: &[usize], n: usize) -> Self {
        assert_eq!(rows.len(), self.rows);
        let mut out = Self::zeros(n, self.cols);
        for (r, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.data[i * self.cols + j] = self.get(r, j).clone();
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = m.get(row, col).recip();
            for j in col..m.cols {
                let x = &m.data[row * m.cols + j] * &inv;
                m.data[row * m.cols + j] = x;
            }
            for i in 0..m.rows {
                if i == row || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let pj = m.get(row, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let delta = &factor * pj;
                    m.data[i * m.cols + j] -= delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}` as columns.
    pub fn nullspace(&self) -> RationalMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.data[f * free.len() + k] = Rational::one();
            for (prow, &pc) in pivots.iter().enumerate() {
                let x = r.get(prow, f);
                if !x.is_zero() {
                    out.data[pc * free.len() + k] = -x.clone();
                }
            }
        }
        out
    }

    /// A maximal independent subset of the columns.
    pub fn column_basis(&self) -> RationalMatrix {
        let (_, pivots) = self.rref();
        let cols: Vec<Vec<Rational>> = pivots.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols)
    }

    /// Inverse of a square non-singular matrix.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut id = Self::zeros(n, n);
        for i in 0..n {
            id.data[i * n + i] = Rational::one();
        }
        let (r, pivots) = self.hstack(&id).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = r.get(i, n + j).clone();
            }
        }
        Some(inv)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
    }
}

/// `dim(span A ∩ span B)` for integer column vectors of length `n`.
pub fn intersection_dim(a: &[Vec<i64>], b: &[Vec<i64>], n: usize) -> usize {
    let to = |cols: &[Vec<i64>]| {
        let c: Vec<Vec<Rational>> = cols
            .iter()
            .map(|v| v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
            .collect();
        RationalMatrix::from_columns(n, &c)
    };
    let (ma, mb) = (to(a), to(b));
    span_intersection_dim(&ma, &mb)
}

/// `dim(col A ∩ col B) = rank A + rank B - rank [A B]`.
pub fn span_intersection_dim(a: &RationalMatrix, b: &RationalMatrix) -> usize {
    a.rank() + b.rank() - a.hstack(b).rank()
}

/// Column space of `proj_V(P)` where the columns of `v` span `V`.
pub fn projection_image(v: &RationalMatrix, p: &RationalMatrix) -> RationalMatrix {
    let vb = v.column_basis();
    if vb.ncols() == 0 {
        return RationalMatrix::zeros(v.nrows(), 0);
    }
    let vt = vb.transpose();
    let gram_inv = vt.mul(&vb).inverse().expect("independent columns");
    vb.mul(&gram_inv).mul(&vt.mul(p))
}

/// Embedded basis of `Z_p` of a subcomplex, in ambient coordinates.
pub fn cycles(k: &SimplicialComplex, sub: &Subcomplex, p: usize) -> RationalMatrix {
    let m = RationalMatrix::from_boundary(&sub.boundary_matrix(k, p));
    m.nullspace().embed_rows(&sub.indices(p), k.count(p))
}

/// Spanning set of `B_p` of a subcomplex, in ambient coordinates.
pub fn boundaries(k: &SimplicialComplex, sub: &Subcomplex, p: usize) -> RationalMatrix {
    let m = RationalMatrix::from_boundary(&sub.boundary_matrix(k, p + 1));
    m.embed_rows(&sub.indices(p), k.count(p))
}

/// `dim Z_p - dim B_p` of a subcomplex, by exact elimination.
pub fn betti(k: &SimplicialComplex, sub: &Subcomplex, p: usize) -> Result<usize> {
    sub.validate(k)?;
    let mp = RationalMatrix::from_boundary(&sub.boundary_matrix(k, p));
    let mq = RationalMatrix::from_boundary(&sub.boundary_matrix(k, p + 1));
    Ok(mp.ncols() - mp.rank() - mq.rank())
}

fn check_range(f: &Filtration, s: usize, t: usize) -> Result<()> {
    if s > t || t > f.last() {
        return Err(Error::IndexOutOfRange { s, t, n: f.last() });
    }
    Ok(())
}

/// `dim Z_p(K_s) - dim(Z_p(K_s) ∩ B_p(K_t))`.
pub fn persistent_betti(f: &Filtration, p: usize, s: usize, t: usize) -> Result<usize> {
    check_range(f, s, t)?;
    let k = f.complex();
    let z = cycles(k, &f.subcomplex(s), p);
    let b = boundaries(k, &f.subcomplex(t), p);
    Ok(z.hstack(&b).rank() - b.rank())
}

/// Dimensions of the subquotient `P^{s,t} = M^{s,t} / N^{s,t}`.
///
/// For `t = ∞`, `m` is the Betti number of `K_s`, `n` is `dim M^{s,N}` and
/// `p = m - n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubquotientDims {
    pub m: usize,
    pub n: usize,
    pub p: usize,
}

/// `dim M^{s,t}`: classes of `K_s` whose image at `t` comes from `K_{s-1}`.
/// At chain level this is `Z_s ∩ (Z_{s-1} + B_t)` modulo `B_s`.
fn m_dim(f: &Filtration, p: usize, s: usize, t: usize) -> usize {
    let k = f.complex();
    let zs = cycles(k, &f.subcomplex(s), p);
    let bt = boundaries(k, &f.subcomplex(t), p);
    let bs_rank = boundaries(k, &f.subcomplex(s), p).rank();
    let earlier = match s.checked_sub(1) {
        Some(prev) => cycles(k, &f.subcomplex(prev), p).hstack(&bt),
        None => bt.clone(),
    };
    let chain_dim = zs.rank() + earlier.rank() - zs.hstack(&bt).rank();
    chain_dim - bs_rank
}

pub fn subquotient_dims(f: &Filtration, p: usize, s: usize, t: Death) -> Result<SubquotientDims> {
    match t {
        Death::Finite(t) => {
            if s >= t {
                return Err(Error::IndexOutOfRange { s, t, n: f.last() });
            }
            check_range(f, s, t)?;
            let m = m_dim(f, p, s, t);
            let n = m_dim(f, p, s, t - 1);
            Ok(SubquotientDims { m, n, p: m - n })
        }
        Death::Infinite => {
            check_range(f, s, s)?;
            let m = betti(f.complex(), &f.subcomplex(s), p)?;
            let n = m_dim(f, p, s, f.last());
            Ok(SubquotientDims { m, n, p: m - n })
        }
    }
}

/// All `(s, t, multiplicity)` with positive multiplicity.
pub fn barcode(f: &Filtration, p: usize) -> Result<Vec<(usize, Death, usize)>> {
    let mut out = Vec::new();
    for s in 0..=f.last() {
        for t in (s + 1..=f.last()).map(Death::Finite).chain([Death::Infinite]) {
            let d = subquotient_dims(f, p, s, t)?;
            if d.p > 0 {
                out.push((s, t, d.p));
            }
        }
    }
    Ok(out)
}
