//! Thin wrappers over the dense SVD kernels.

use std::sync::atomic::{AtomicUsize, Ordering};

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{self, ComputeSvdVectors};
use faer::{Mat, MatRef, Par};

use crate::scalar::Real;

static THREADS: AtomicUsize = AtomicUsize::new(1);

/// Caps the worker count used by dense kernels. `0` means all cores.
pub fn set_threads(n: usize) {
    THREADS.store(n, Ordering::Relaxed);
}

pub(crate) fn par() -> Par {
    match THREADS.load(Ordering::Relaxed) {
        1 => Par::Seq,
        n => Par::rayon(n),
    }
}

/// Singular values in non-increasing order (length `min(r, c)`).
pub fn singular_values<T: Real>(a: MatRef<'_, T>) -> Vec<T> {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return Vec::new();
    }
    let k = r.min(c);
    let mut s = Diag::<T>::zeros(k);
    let par = par();
    let req = svd::svd_scratch::<T>(r, c, ComputeSvdVectors::No, ComputeSvdVectors::No, par, Default::default());
    let mut buf = MemBuffer::new(req);
    svd::svd(a, s.as_mut(), None, None, par, MemStack::new(&mut buf), Default::default())
        .expect("svd converges");
    (0..k).map(|i| s[i]).collect()
}

/// Singular values together with the full `c x c` right factor.
pub(crate) fn svd_right<T: Real>(a: MatRef<'_, T>) -> (Vec<T>, Mat<T>) {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return (Vec::new(), Mat::identity(c, c));
    }
    let k = r.min(c);
    let mut s = Diag::<T>::zeros(k);
    let mut v = Mat::<T>::zeros(c, c);
    let par = par();
    let req = svd::svd_scratch::<T>(r, c, ComputeSvdVectors::No, ComputeSvdVectors::Full, par, Default::default());
    let mut buf = MemBuffer::new(req);
    svd::svd(a, s.as_mut(), None, Some(v.as_mut()), par, MemStack::new(&mut buf), Default::default())
        .expect("svd converges");
    ((0..k).map(|i| s[i]).collect(), v)
}

/// Singular values together with the thin `r x min(r, c)` left factor.
pub(crate) fn svd_left_thin<T: Real>(a: MatRef<'_, T>) -> (Vec<T>, Mat<T>) {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return (Vec::new(), Mat::zeros(r, 0));
    }
    let k = r.min(c);
    let mut s = Diag::<T>::zeros(k);
    let mut u = Mat::<T>::zeros(r, k);
    let par = par();
    let req = svd::svd_scratch::<T>(r, c, ComputeSvdVectors::Thin, ComputeSvdVectors::No, par, Default::default());
    let mut buf = MemBuffer::new(req);
    svd::svd(a, s.as_mut(), Some(u.as_mut()), None, par, MemStack::new(&mut buf), Default::default())
        .expect("svd converges");
    ((0..k).map(|i| s[i]).collect(), u)
}

/// Number of singular values above `threshold`.
pub(crate) fn rank_above<T: Real>(s: &[T], threshold: T) -> usize {
    s.iter().take_while(|&&x| x > threshold).count()
}

/// Columns `from..` of `m` as a new matrix.
pub(crate) fn tail_columns<T: Real>(m: &Mat<T>, from: usize) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols() - from, |i, j| m[(i, from + j)])
}

pub(crate) fn head_columns<T: Real>(m: &Mat<T>, n: usize) -> Mat<T> {
    Mat::from_fn(m.nrows(), n, |i, j| m[(i, j)])
}

pub(crate) fn hstack<T: Real>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    assert_eq!(a.nrows(), b.nrows());
    let ka = a.ncols();
    Mat::from_fn(a.nrows(), ka + b.ncols(), |i, j| if j < ka { a[(i, j)] } else { b[(i, j - ka)] })
}

pub(crate) fn vstack<T: Real>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    assert_eq!(a.ncols(), b.ncols());
    let ra = a.nrows();
    Mat::from_fn(ra + b.nrows(), a.ncols(), |i, j| if i < ra { a[(i, j)] } else { b[(i - ra, j)] })
}

/// Largest absolute entry.
pub fn max_abs<T: Real>(m: MatRef<'_, T>) -> T {
    let mut best = T::zero();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].abs());
        }
    }
    best
}
