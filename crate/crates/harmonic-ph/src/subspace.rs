//! Subspaces of Euclidean chain spaces: orthonormal bases, nullspaces,
//! projections, intersections, preimages, principal angles and the
//! Grassmann distance on subspaces of possibly different dimensions.
//!
//! Every rank decision uses one rule: a singular value counts iff it exceeds
//! `tol` times a scale. For arbitrary input matrices the scale is the largest
//! singular value. For matrices built from orthonormal bases the natural scale
//! is 1, which keeps "everything is roundoff" inputs at rank 0.

use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::{self, head_columns, hstack, rank_above, tail_columns};
use crate::scalar::Real;

/// Default relative rank tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A linear subspace of `R^n` given by an orthonormal basis (columns).
#[derive(Clone, Debug)]
pub struct Subspace<T> {
    basis: Mat<T>,
    tol: T,
}

/// Principal angles in radians, non-decreasing, each in `[0, pi/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalAngles<T> {
    pub angles: Vec<T>,
}

impl<T: Real> PrincipalAngles<T> {
    pub fn largest(&self) -> Option<T> {
        self.angles.last().copied()
    }

    pub fn sum_of_squares(&self) -> T {
        self.angles.iter().fold(T::zero(), |a, &x| a + x * x)
    }
}

impl<T: Real> Subspace<T> {
    pub fn zero(n: usize) -> Self {
        Subspace { basis: Mat::zeros(n, 0), tol: T::lit(DEFAULT_TOL) }
    }

    pub fn full(n: usize) -> Self {
        Subspace { basis: Mat::identity(n, n), tol: T::lit(DEFAULT_TOL) }
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: Mat<T>, tol: T) -> Self {
        debug_assert!(orthonormality_defect(basis.as_ref()) < T::epsilon().sqrt());
        Subspace { basis, tol }
    }

    /// Span of the given vectors (each of length `n`).
    pub fn span(n: usize, vectors: &[Vec<T>], tol: T) -> Self {
        let m = Mat::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
        orthonormalize(m.as_ref(), tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    /// Column `j` of the basis.
    pub fn vector(&self, j: usize) -> Vec<T> {
        (0..self.ambient_dim()).map(|i| self.basis[(i, j)]).collect()
    }

    pub fn vectors(&self) -> Vec<Vec<T>> {
        (0..self.dim()).map(|j| self.vector(j)).collect()
    }

    /// Orthogonal projection of a vector.
    pub fn project(&self, z: &[T]) -> Result<Vec<T>> {
        check_dim(self.ambient_dim(), z.len())?;
        let zc = Mat::from_fn(z.len(), 1, |i, _| z[i]);
        let out = self.project_mat(zc.as_ref());
        Ok((0..z.len()).map(|i| out[(i, 0)]).collect())
    }

    /// Orthogonal projection applied to every column of `m`.
    pub fn project_mat(&self, m: MatRef<'_, T>) -> Mat<T> {
        if self.dim() == 0 {
            return Mat::zeros(m.nrows(), m.ncols());
        }
        let coords = self.basis.transpose() * m;
        &self.basis * &coords
    }

    /// Largest distance of a basis vector of `self` from `other`.
    pub fn containment_residual(&self, other: &Subspace<T>) -> Result<T> {
        check_dim(other.ambient_dim(), self.ambient_dim())?;
        let diff = &self.basis - &other.project_mat(self.basis.as_ref());
        Ok(column_norms(diff.as_ref()).into_iter().fold(T::zero(), T::max))
    }

    pub fn contains(&self, other: &Subspace<T>, tol: T) -> Result<bool> {
        Ok(other.containment_residual(self)? <= tol)
    }

    /// `V^perp` inside the ambient space.
    pub fn orthogonal_complement(&self) -> Self {
        let n = self.ambient_dim();
        if self.dim() == 0 {
            return Subspace { basis: Mat::identity(n, n), tol: self.tol };
        }
        let bt = self.basis.transpose().to_owned();
        nullspace_scaled(bt.as_ref(), self.tol, Some(T::one()))
    }

    /// `A + B`.
    pub fn sum(&self, other: &Subspace<T>, tol: T) -> Result<Self> {
        check_dim(self.ambient_dim(), other.ambient_dim())?;
        let m = hstack(&self.basis, &other.basis);
        Ok(orthonormalize_scaled(m.as_ref(), tol, Some(T::one())))
    }

    /// Image of `self` under orthogonal projection onto `onto`.
    pub fn projected_onto(&self, onto: &Subspace<T>, tol: T) -> Result<Self> {
        check_dim(self.ambient_dim(), onto.ambient_dim())?;
        let img = onto.project_mat(self.basis.as_ref());
        Ok(orthonormalize_scaled(img.as_ref(), tol, Some(T::one())))
    }

    /// Image of `self` under a linear map given as a matrix. The rank rule is
    /// relative to the largest singular value of the mapped basis.
    pub fn mapped(&self, map: MatRef<'_, T>, tol: T) -> Result<Self> {
        check_dim(map.ncols(), self.ambient_dim())?;
        let img = map * &self.basis;
        Ok(orthonormalize(img.as_ref(), tol))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn column_norms<T: Real>(m: MatRef<'_, T>) -> Vec<T> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).fold(T::zero(), |a, i| a + m[(i, j)] * m[(i, j)]).sqrt())
        .collect()
}

/// `max |B^T B - I|` entrywise.
pub fn orthonormality_defect<T: Real>(b: MatRef<'_, T>) -> T {
    let g = b.transpose() * b;
    let mut worst = T::zero();
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Orthonormal basis of the column space of `vectors`; rank counts singular
/// values above `tol * sigma_max`.
pub fn orthonormalize<T: Real>(vectors: MatRef<'_, T>, tol: T) -> Subspace<T> {
    orthonormalize_scaled(vectors, tol, None)
}

/// As [`orthonormalize`], with the threshold `tol * scale` when a scale is given.
pub fn orthonormalize_scaled<T: Real>(vectors: MatRef<'_, T>, tol: T, scale: Option<T>) -> Subspace<T> {
    let (s, u) = linalg::svd_left_thin(vectors);
    let scale = scale.unwrap_or_else(|| s.first().copied().unwrap_or(T::zero()));
    let r = rank_above(&s, tol * scale);
    Subspace { basis: head_columns(&u, r), tol }
}

/// Orthonormal basis of `{x : M x = 0}`; rank counts singular values above
/// `tol * sigma_max`.
pub fn nullspace<T: Real>(m: MatRef<'_, T>, tol: T) -> Subspace<T> {
    nullspace_scaled(m, tol, None)
}

/// As [`nullspace`], with the threshold `tol * scale` when a scale is given.
pub fn nullspace_scaled<T: Real>(m: MatRef<'_, T>, tol: T, scale: Option<T>) -> Subspace<T> {
    let (s, v) = linalg::svd_right(m);
    let scale = scale.unwrap_or_else(|| s.first().copied().unwrap_or(T::zero()));
    let r = rank_above(&s, tol * scale);
    Subspace { basis: tail_columns(&v, r), tol }
}

/// Orthogonal projection of `z` onto `s`.
pub fn project<T: Real>(s: &Subspace<T>, z: &[T]) -> Result<Vec<T>> {
    s.project(z)
}

/// `A ∩ B`, as the vectors of the smaller space with no component in the
/// complement of the larger one.
pub fn intersect<T: Real>(a: &Subspace<T>, b: &Subspace<T>, tol: T) -> Result<Subspace<T>> {
    check_dim(a.ambient_dim(), b.ambient_dim())?;
    let n = a.ambient_dim();
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(Subspace { basis: Mat::zeros(n, 0), tol });
    }
    let (small, large) = if a.dim() <= b.dim() { (a, b) } else { (b, a) };
    // (I - P_large) * small
    let resid = &small.basis - &large.project_mat(small.basis.as_ref());
    let coeffs = nullspace_scaled(resid.as_ref(), tol, Some(T::one()));
    let basis = &small.basis * &coeffs.basis;
    Ok(Subspace { basis, tol })
}

/// `V ∩ W^perp` for `W ⊆ V`.
pub fn complement_within<T: Real>(w: &Subspace<T>, v: &Subspace<T>, tol: T) -> Result<Subspace<T>> {
    check_dim(v.ambient_dim(), w.ambient_dim())?;
    let residual = w.containment_residual(v)?;
    if residual > tol {
        return Err(Error::NotASubspace { residual: residual.to_f64_lossy() });
    }
    Ok(orthogonal_part(v, w, tol))
}

/// `V ∩ W^perp` without the containment check.
pub(crate) fn orthogonal_part<T: Real>(v: &Subspace<T>, w: &Subspace<T>, tol: T) -> Subspace<T> {
    if w.dim() == 0 || v.dim() == 0 {
        return Subspace { basis: v.basis.clone(), tol };
    }
    let m = w.basis.transpose() * &v.basis;
    let coeffs = nullspace_scaled(m.as_ref(), tol, Some(T::one()));
    Subspace { basis: &v.basis * &coeffs.basis, tol }
}

/// `{v ∈ source : proj_target(v) ∈ s}` for `s ⊆ target`.
pub fn preimage_under_projection<T: Real>(
    source: &Subspace<T>,
    target: &Subspace<T>,
    s: &Subspace<T>,
    tol: T,
) -> Result<Subspace<T>> {
    check_dim(target.ambient_dim(), source.ambient_dim())?;
    let r = complement_within(s, target, tol)?;
    // proj_target(v) ∈ s  iff  proj_r(v) = 0  iff  r^T v = 0
    Ok(orthogonal_part(source, &r, tol))
}

/// Principal angles between `A` and `B`. Cosines are the singular values of
/// `A^T B`, clamped to `[0, 1]`. Angles below pi/4 are taken from the sines
/// (singular values of `B - A A^T B`) since arccos loses half the digits near 1.
pub fn principal_angles<T: Real>(a: &Subspace<T>, b: &Subspace<T>) -> Result<PrincipalAngles<T>> {
    check_dim(a.ambient_dim(), b.ambient_dim())?;
    let (big, small) = if a.dim() >= b.dim() { (a, b) } else { (b, a) };
    let m = big.basis.transpose() * &small.basis;
    let cos = linalg::singular_values(m.as_ref());
    if cos.is_empty() {
        return Ok(PrincipalAngles { angles: Vec::new() });
    }
    let resid = &small.basis - &(&big.basis * &m);
    let mut sin = linalg::singular_values(resid.as_ref());
    sin.reverse();
    let half = T::lit(0.5);
    let angles = cos
        .iter()
        .zip(&sin)
        .map(|(&c, &s)| {
            let c = c.max(T::zero()).min(T::one());
            if c * c >= half {
                s.max(T::zero()).min(T::one()).asin()
            } else {
                c.acos()
            }
        })
        .collect();
    Ok(PrincipalAngles { angles })
}

/// `(|k - l| pi^2/4 + sum theta_i^2)^(1/2)`.
pub fn grassmann_distance<T: Real>(a: &Subspace<T>, b: &Subspace<T>) -> Result<T> {
    if a.basis.shape() == b.basis.shape() && a.basis == b.basis {
        return Ok(T::zero());
    }
    let th = principal_angles(a, b)?;
    let gap = T::from_count(a.dim().abs_diff(b.dim()));
    let half_pi = T::FRAC_PI_2();
    Ok((gap * half_pi * half_pi + th.sum_of_squares()).sqrt())
}
