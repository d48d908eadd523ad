//! Essential simplices of simple bars, representative cycles and relative
//! essential content.

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::complex::{Chain, Simplex};
use crate::error::{Error, Result};
use crate::harmonic::boundary_space;
use crate::persistence::{Bar, Death, HarmonicPersistence};
use crate::scalar::Real;
use crate::subspace::Subspace;

/// Harmonic representative, essential simplices and content of one simple bar.
#[derive(Clone, Debug)]
pub struct EssentialReport<T> {
    pub p: usize,
    pub bar: Bar,
    /// Unit norm, first nonzero coefficient positive.
    pub harmonic_rep: Chain<T>,
    pub essential: Vec<Simplex>,
    pub content: T,
}

/// `Ñ^{s,t} = N^{s,t} ⊕ B_p(K_s)` for a finite bar, `M^{s,N} ⊕ B_p(K_s)`
/// for an infinite one. Representatives of the bar are `z0 + W` minus `W`.
pub fn chain_level_w<T: Real>(hp: &HarmonicPersistence<'_, T>, s: usize, t: Death) -> Result<Subspace<T>> {
    let f = hp.filtration();
    let inner = match t {
        Death::Finite(t) => hp.n_space(s, t)?,
        Death::Infinite => hp.m_space(s, f.last())?,
    };
    let b = boundary_space(f.complex(), &f.subcomplex(s), hp.p(), hp.tol())?;
    inner.sum(&b, hp.tol())
}

/// The unit vector spanning a one-dimensional `P^{s,t}`.
pub fn harmonic_representative<T: Real>(hp: &HarmonicPersistence<'_, T>, s: usize, t: Death) -> Result<Chain<T>> {
    let space = hp.p_space(s, t)?;
    match space.dim() {
        0 => Err(Error::NoSuchBar { s, t: t.to_string() }),
        1 => {
            let mut v = space.vector(0);
            let thr = hp.tol();
            if let Some(first) = v.iter().find(|c| c.abs() > thr) {
                if *first < T::zero() {
                    v.iter_mut().for_each(|c| *c = -*c);
                }
            }
            Ok(Chain::new(hp.p(), v))
        }
        d => Err(Error::NotSimple(d)),
    }
}

fn row_norms<T: Real>(m: &Mat<T>) -> Vec<T> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).fold(T::zero(), |a, j| a + m[(i, j)] * m[(i, j)]).sqrt())
        .collect()
}

/// Indices of `supp(z0)` whose coordinate vector is orthogonal to `w`.
pub fn essential_indices<T: Real>(z0: &Chain<T>, w: &Subspace<T>, tol: T) -> Vec<usize> {
    let norms = row_norms(w.basis());
    z0.support(tol).into_iter().filter(|&i| norms[i] <= tol).collect()
}

/// Essential simplices of a simple bar, in basis order.
pub fn essential_simplices<T: Real>(hp: &HarmonicPersistence<'_, T>, s: usize, t: Death) -> Result<Vec<Simplex>> {
    Ok(essential_report(hp, s, t)?.essential)
}

/// `(sum_{σ ∈ Σ} c_σ^2 / sum_σ c_σ^2)^(1/2)`.
pub fn content<T: Real>(z: &Chain<T>, essential: &[usize]) -> Result<T> {
    let total = z.coeffs.iter().fold(T::zero(), |a, &c| a + c * c);
    if total == T::zero() {
        return Err(Error::ZeroChain);
    }
    let part = essential.iter().fold(T::zero(), |a, &i| a + z.coeffs[i] * z.coeffs[i]);
    Ok((part / total).sqrt().min(T::one()))
}

pub fn essential_report<T: Real>(hp: &HarmonicPersistence<'_, T>, s: usize, t: Death) -> Result<EssentialReport<T>> {
    let z0 = harmonic_representative(hp, s, t)?;
    let w = chain_level_w(hp, s, t)?;
    let idx = essential_indices(&z0, &w, hp.tol());
    let k = hp.filtration().complex();
    let essential = idx.iter().map(|&i| k.simplices(hp.p())[i].clone()).collect();
    let content = content(&z0, &idx)?;
    Ok(EssentialReport {
        p: hp.p(),
        bar: Bar { s, t, multiplicity: 1 },
        harmonic_rep: z0,
        essential,
        content,
    })
}

/// Reports for every simple bar of the barcode.
pub fn essential_reports<T: Real>(hp: &HarmonicPersistence<'_, T>) -> Result<Vec<EssentialReport<T>>> {
    hp.barcode()?
        .iter()
        .filter(|b| b.bar.is_simple())
        .map(|b| essential_report(hp, b.bar.s, b.bar.t))
        .collect()
}

/// Whether `z` lies outside `w`, i.e. has a nonzero class in the quotient.
pub fn outside<T: Real>(z: &Chain<T>, w: &Subspace<T>, tol: T) -> Result<bool> {
    let proj = w.project(&z.coeffs)?;
    let r = z.coeffs.iter().zip(&proj).fold(T::zero(), |a, (&x, &y)| a + (x - y) * (x - y)).sqrt();
    Ok(r > tol * z.norm())
}

/// `count` representatives `z0 + W g` with `g` standard normal in the
/// coordinates of `W`'s basis. The first one is `z0` itself.
pub fn sample_representatives<T: Real>(
    hp: &HarmonicPersistence<'_, T>,
    s: usize,
    t: Death,
    count: usize,
    seed: u64,
) -> Result<Vec<Chain<T>>> {
    let z0 = harmonic_representative(hp, s, t)?;
    let w = chain_level_w(hp, s, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(z0.clone());
    }
    let n = z0.coeffs.len();
    while out.len() < count {
        let g: Vec<T> = (0..w.dim()).map(|_| T::lit(StandardNormal.sample(&mut rng))).collect();
        let basis = w.basis();
        let coeffs = (0..n)
            .map(|i| g.iter().enumerate().fold(z0.coeffs[i], |a, (j, &x)| a + basis[(i, j)] * x))
            .collect();
        let z = Chain::new(hp.p(), coeffs);
        if outside(&z, &w, hp.tol())? {
            out.push(z);
        }
    }
    Ok(out)
}
