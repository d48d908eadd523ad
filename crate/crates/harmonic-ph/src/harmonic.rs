//! Harmonic homology subspaces `Z_p ∩ B_p^perp`, the Hodge Laplacian and the
//! projection maps induced by inclusions of subcomplexes.

use std::collections::HashMap;

use faer::Mat;

use crate::complex::{SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::linalg::vstack;
use crate::scalar::Real;
use crate::subspace::{nullspace, orthonormalize, Subspace};

/// `H_p` of a subcomplex, expressed in the ambient chain coordinates.
#[derive(Clone, Debug)]
pub struct HarmonicSpace<T> {
    pub p: usize,
    pub space: Subspace<T>,
    pub subcomplex: Subcomplex,
}

impl<T: Real> HarmonicSpace<T> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Local chain spaces with at least this many `p`-simplices take the sparse
/// exact kernel path of [`harmonic_basis`].
pub const SPARSE_MIN_SIMPLICES: usize = 512;

/// Orthonormal basis of `ker M_p ∩ ker M_{p+1}^T`, computed as the nullspace
/// of the stacked matrix on the subcomplex's own chain space and zero-padded.
///
/// Large chain spaces first find an integer kernel basis by sparse column
/// reduction and only orthonormalize that; the dense SVD is the fallback when
/// the integer entries overflow.
pub fn harmonic_basis<T: Real>(
    k: &SimplicialComplex,
    sub: &Subcomplex,
    p: usize,
    tol: T,
) -> Result<HarmonicSpace<T>> {
    sub.validate(k)?;
    if sub.count(p) >= SPARSE_MIN_SIMPLICES {
        if let Some(space) = sparse_harmonic(k, sub, p, tol) {
            return Ok(HarmonicSpace { p, space, subcomplex: sub.clone() });
        }
    }
    Ok(HarmonicSpace { p, space: dense_harmonic(k, sub, p, tol), subcomplex: sub.clone() })
}

fn dense_harmonic<T: Real>(k: &SimplicialComplex, sub: &Subcomplex, p: usize, tol: T) -> Subspace<T> {
    let mp = sub.boundary_matrix(k, p).to_mat::<T>();
    let mq = sub.boundary_matrix(k, p + 1).to_mat::<T>();
    let stacked = vstack(&mp, &mq.transpose().to_owned());
    let local = nullspace(stacked.as_ref(), tol);
    Subspace::from_orthonormal(sub.embed_mat(p, local.basis()), tol)
}

type SparseColumn = Vec<(usize, i64)>;

fn sparse_harmonic<T: Real>(k: &SimplicialComplex, sub: &Subcomplex, p: usize, tol: T) -> Option<Subspace<T>> {
    let cols = sub.indices(p);
    let mut local = HashMap::with_capacity(cols.len());
    for (c, &i) in cols.iter().enumerate() {
        local.insert(i, c);
    }
    // rows: (p-1)-simplices by ambient index, then (p+1)-simplices shifted past them
    let shift = if p == 0 { 0 } else { k.count(p - 1) };
    let mut stacked: Vec<SparseColumn> = vec![Vec::new(); cols.len()];
    for (c, &j) in cols.iter().enumerate() {
        if p > 0 {
            for (sign, f) in k.simplices(p)[j].facets() {
                stacked[c].push((k.index_of(&f).expect("complex is closed"), sign as i64));
            }
        }
    }
    for q in sub.indices(p + 1) {
        for (sign, f) in k.simplices(p + 1)[q].facets() {
            let c = local[&k.index_of(&f).expect("complex is closed")];
            stacked[c].push((shift + q, sign as i64));
        }
    }
    for col in &mut stacked {
        col.sort_unstable();
    }
    let kernel = integer_kernel(stacked)?;
    let n = cols.len();
    let mut m = Mat::<T>::zeros(n, kernel.len());
    for (j, v) in kernel.iter().enumerate() {
        for &(i, x) in v {
            m[(i, j)] = T::from_i64(x)?;
        }
    }
    let local = orthonormalize(m.as_ref(), tol);
    Some(Subspace::from_orthonormal(sub.embed_mat(p, local.basis()), tol))
}

/// Integer basis of `{x : A x = 0}` for `A` given by sparse columns with
/// sorted rows. Columns are reduced left to right against earlier pivots on
/// their lowest row while the same operations are recorded on the identity.
/// Returns `None` when an entry leaves `i64`.
fn integer_kernel(columns: Vec<SparseColumn>) -> Option<Vec<SparseColumn>> {
    let mut pivots: HashMap<usize, (SparseColumn, SparseColumn)> = HashMap::new();
    let mut kernel = Vec::new();
    for (j, mut r) in columns.into_iter().enumerate() {
        let mut v: SparseColumn = vec![(j, 1)];
        while let Some(&(low, a)) = r.last() {
            let Some((pr, pv)) = pivots.get(&low) else { break };
            let b = pr.last().expect("pivot columns are nonzero").1;
            r = combine(b, &r, -a, pr)?;
            v = combine(b, &v, -a, pv)?;
            let g = r.iter().chain(&v).fold(0i64, |g, &(_, x)| gcd(g, x));
            if g > 1 {
                r.iter_mut().chain(v.iter_mut()).for_each(|e| e.1 /= g);
            }
        }
        match r.last() {
            Some(&(low, _)) => {
                pivots.insert(low, (r, v));
            }
            None => kernel.push(v),
        }
    }
    Some(kernel)
}

/// `a x + b y` on sparse columns.
fn combine(a: i64, x: &[(usize, i64)], b: i64, y: &[(usize, i64)]) -> Option<SparseColumn> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (row, val) = match (x.get(i), y.get(j)) {
            (Some(&(ri, xi)), Some(&(rj, _))) if ri < rj => {
                i += 1;
                (ri, a.checked_mul(xi)?)
            }
            (Some(&(ri, _)), Some(&(rj, yj))) if rj < ri => {
                j += 1;
                (rj, b.checked_mul(yj)?)
            }
            (Some(&(ri, xi)), Some(&(_, yj))) => {
                i += 1;
                j += 1;
                (ri, a.checked_mul(xi)?.checked_add(b.checked_mul(yj)?)?)
            }
            (Some(&(ri, xi)), None) => {
                i += 1;
                (ri, a.checked_mul(xi)?)
            }
            (None, Some(&(rj, yj))) => {
                j += 1;
                (rj, b.checked_mul(yj)?)
            }
            (None, None) => unreachable!(),
        };
        if val != 0 {
            out.push((row, val));
        }
    }
    Some(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// `M_{p+1} M_{p+1}^T + M_p^T M_p` on the subcomplex's chain space.
pub fn laplacian<T: Real>(k: &SimplicialComplex, sub: &Subcomplex, p: usize) -> Result<Mat<T>> {
    sub.validate(k)?;
    let mp = sub.boundary_matrix(k, p);
    let mq = sub.boundary_matrix(k, p + 1);
    let n = mp.ncols();
    let mut lap = vec![0i64; n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = 0i64;
            for r in 0..mp.nrows() {
                acc += mp.get(r, i) as i64 * mp.get(r, j) as i64;
            }
            for c in 0..mq.ncols() {
                acc += mq.get(i, c) as i64 * mq.get(j, c) as i64;
            }
            lap[i * n + j] = acc;
            lap[j * n + i] = acc;
        }
    }
    Ok(Mat::from_fn(n, n, |i, j| T::from_i64(lap[i * n + j]).expect("small integer")))
}

/// `ker Δ_p`, zero-padded into the ambient chain space.
pub fn laplacian_kernel<T: Real>(
    k: &SimplicialComplex,
    sub: &Subcomplex,
    p: usize,
    tol: T,
) -> Result<Subspace<T>> {
    let lap = laplacian::<T>(k, sub, p)?;
    let local = nullspace(lap.as_ref(), tol);
    Ok(Subspace::from_orthonormal(sub.embed_mat(p, local.basis()), tol))
}

/// `Z_p` of the subcomplex in ambient coordinates.
pub fn cycle_space<T: Real>(k: &SimplicialComplex, sub: &Subcomplex, p: usize, tol: T) -> Result<Subspace<T>> {
    sub.validate(k)?;
    let mp = sub.boundary_matrix(k, p).to_mat::<T>();
    let local = nullspace(mp.as_ref(), tol);
    Ok(Subspace::from_orthonormal(sub.embed_mat(p, local.basis()), tol))
}

/// `B_p` of the subcomplex in ambient coordinates.
pub fn boundary_space<T: Real>(k: &SimplicialComplex, sub: &Subcomplex, p: usize, tol: T) -> Result<Subspace<T>> {
    sub.validate(k)?;
    let mq = sub.boundary_matrix(k, p + 1).to_mat::<T>();
    let local = orthonormalize(mq.as_ref(), tol);
    Ok(Subspace::from_orthonormal(sub.embed_mat(p, local.basis()), tol))
}

/// Matrix of `v ↦ proj_{B_p(K_t)^perp}(v)` from coordinates in the basis of
/// `from` to ambient chain coordinates.
pub fn functorial_map<T: Real>(
    from: &HarmonicSpace<T>,
    k: &SimplicialComplex,
    to: &Subcomplex,
    tol: T,
) -> Result<Mat<T>> {
    if !from.subcomplex.is_subset_of(to) {
        return Err(Error::NotNested);
    }
    let b = boundary_space(k, to, from.p, tol)?;
    let basis = from.space.basis();
    Ok(basis - &b.project_mat(basis.as_ref()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Simplex;
    use crate::linalg::max_abs;
    use crate::oracle;
    use crate::random;
    use crate::subspace::{grassmann_distance, orthonormalize_scaled};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn example() -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(vec![vec![0, 1, 2], vec![0, 3], vec![2, 3]]).unwrap()
    }

    // Edge order in the example: [0,1]=a, [0,2]=c, [0,3]=d, [1,2]=b, [2,3]=e.
    fn edge_vector(k: &SimplicialComplex, terms: &[(&[usize], f64)]) -> Vec<f64> {
        let mut v = vec![0.0; k.count(1)];
        for (e, c) in terms {
            v[k.index_of(&s(e)).unwrap()] = *c;
        }
        v
    }

    #[test]
    fn example_full_complex() {
        let k = example();
        let h = harmonic_basis::<f64>(&k, &k.full(), 1, TOL).unwrap();
        let expected = edge_vector(&k, &[(&[0, 1], 1.0), (&[1, 2], 1.0), (&[0, 2], 2.0), (&[0, 3], -3.0), (&[2, 3], 3.0)]);
        let want = Subspace::span(5, &[expected], TOL);
        assert!(grassmann_distance(&h.space, &want).unwrap() < 1e-12);
    }

    #[test]
    fn single_vertex() {
        let k = SimplicialComplex::from_vertex_lists(vec![vec![0]]).unwrap();
        let h = harmonic_basis::<f64>(&k, &k.full(), 0, TOL).unwrap();
        assert_eq!(h.dim(), 1);
        assert!((h.space.vector(0)[0].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hollow_triangle() {
        let k = example();
        let sub = Subcomplex::closure_of(&k, [&s(&[0, 1]), &s(&[1, 2]), &s(&[0, 2])]).unwrap();
        let h = harmonic_basis::<f64>(&k, &sub, 1, TOL).unwrap();
        let want = Subspace::span(5, &[edge_vector(&k, &[(&[0, 1], 1.0), (&[1, 2], 1.0), (&[0, 2], -1.0)])], TOL);
        assert!(grassmann_distance(&h.space, &want).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_open_subcomplex() {
        let k = example();
        let mut mask: Vec<Vec<bool>> = (0..3).map(|p| vec![false; k.count(p)]).collect();
        mask[1][0] = true;
        assert!(Subcomplex::from_mask(&k, mask).is_err());
    }

    #[test]
    fn empty_laplacian() {
        let k = SimplicialComplex::empty();
        let l = laplacian::<f64>(&k, &k.full(), 0).unwrap();
        assert_eq!(l.shape(), (0, 0));
    }

    #[test]
    fn functorial_kills_filled_cycle() {
        let k = example();
        let hollow = Subcomplex::closure_of(&k, [&s(&[0, 1]), &s(&[1, 2]), &s(&[0, 2])]).unwrap();
        let filled = Subcomplex::closure_of(&k, [&s(&[0, 1, 2])]).unwrap();
        let h = harmonic_basis::<f64>(&k, &hollow, 1, TOL).unwrap();
        let img = functorial_map(&h, &k, &filled, TOL).unwrap();
        assert!(max_abs(img.as_ref()) < 1e-12);
        let same = functorial_map(&h, &k, &hollow, TOL).unwrap();
        assert!(max_abs((&same - h.space.basis()).as_ref()) < 1e-12);
        let small = harmonic_basis::<f64>(&k, &filled, 1, TOL).unwrap();
        assert!(matches!(functorial_map(&small, &k, &hollow, TOL), Err(Error::NotNested)));
    }

    #[test]
    fn integer_kernel_divides_out_common_factors() {
        // columns of [[2, 4, 0], [0, 0, 3]]
        let cols = vec![vec![(0, 2)], vec![(0, 4)], vec![(1, 3)]];
        assert_eq!(integer_kernel(cols).unwrap(), vec![vec![(0, -2), (1, 1)]]);
        assert_eq!(combine(i64::MAX, &[(0, 2)], 1, &[(0, 1)]), None);
    }

    #[test]
    fn long_cycle_takes_sparse_path() {
        let n = 2 * SPARSE_MIN_SIMPLICES;
        let k = SimplicialComplex::from_vertex_lists((0..n).map(|i| vec![i.min((i + 1) % n), i.max((i + 1) % n)])).unwrap();
        let h = harmonic_basis::<f64>(&k, &k.full(), 1, TOL).unwrap();
        assert_eq!(h.dim(), 1);
        let v = h.space.vector(0);
        let expect = 1.0 / (n as f64).sqrt();
        assert!(v.iter().all(|x| (x.abs() - expect).abs() < 1e-12));
        assert_eq!(harmonic_basis::<f64>(&k, &k.full(), 0, TOL).unwrap().dim(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn harmonic_invariants(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = random::complex(&mut rng, 7, 3, 14);
            for p in 0..3 {
                let h = harmonic_basis::<f64>(&k, &k.full(), p, TOL).unwrap();
                prop_assert_eq!(h.dim(), oracle::betti(&k, &k.full(), p).unwrap());
                let mp = k.boundary_matrix(p).to_mat::<f64>();
                let mq = k.boundary_matrix(p + 1).to_mat::<f64>();
                prop_assert!(max_abs((&mp * h.space.basis()).as_ref()) <= 1e-8);
                prop_assert!(max_abs((mq.transpose() * h.space.basis()).as_ref()) <= 1e-8);
                let ker = laplacian_kernel::<f64>(&k, &k.full(), p, TOL).unwrap();
                prop_assert!(grassmann_distance(&h.space, &ker).unwrap() <= 1e-7);
                let lap = laplacian::<f64>(&k, &k.full(), p).unwrap();
                let eig = lap.self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
                prop_assert!(eig.iter().all(|&x| x >= -1e-10));
            }
        }

        #[test]
        fn sparse_and_dense_paths_agree(seed in any::<u64>(), p in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = random::complex(&mut rng, 9, 3, 20);
            let f = random::filtration_of(&mut rng, &k);
            let sub = f.subcomplex(f.last() / 2);
            let dense = dense_harmonic::<f64>(&k, &sub, p, TOL);
            let sparse = sparse_harmonic::<f64>(&k, &sub, p, TOL).unwrap();
            prop_assert_eq!(dense.dim(), sparse.dim());
            prop_assert!(grassmann_distance(&dense, &sparse).unwrap() < 1e-9);
        }

        #[test]
        fn functorial_square_commutes(seed in any::<u64>()) {
            // proj_{B_t^perp} ∘ proj_{B_s^perp} = proj_{B_t^perp} on Z_p(K_s)
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = random::complex(&mut rng, 7, 3, 14);
            let f = random::filtration_of(&mut rng, &k);
            let s_idx = f.last() / 2;
            let (ks, kt) = (f.subcomplex(s_idx), f.subcomplex(f.last()));
            for p in 0..2 {
                let z = cycle_space::<f64>(&k, &ks, p, TOL).unwrap();
                let bs = boundary_space::<f64>(&k, &ks, p, TOL).unwrap();
                let bt = boundary_space::<f64>(&k, &kt, p, TOL).unwrap();
                let zb = z.basis();
                let once = zb - &bt.project_mat(zb.as_ref());
                let inner = zb - &bs.project_mat(zb.as_ref());
                let twice = &inner - &bt.project_mat(inner.as_ref());
                prop_assert!(max_abs((&once - &twice).as_ref()) < 1e-10);
                let hs = harmonic_basis::<f64>(&k, &ks, p, TOL).unwrap();
                let img = functorial_map(&hs, &k, &kt, TOL).unwrap();
                let ht = harmonic_basis::<f64>(&k, &kt, p, TOL).unwrap();
                let span = orthonormalize_scaled(img.as_ref(), TOL, Some(1.0));
                prop_assert!(span.containment_residual(&ht.space).unwrap() < 1e-8);
            }
        }
    }
}
