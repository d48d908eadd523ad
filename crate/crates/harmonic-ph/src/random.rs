//! Random complexes, filtrations, admissible functions and subspaces for
//! property sweeps. Everything is driven by a caller-supplied RNG.

use faer::Mat;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::complex::{Simplex, SimplicialComplex};
use crate::persistence::{AdmissibleFunction, Filtration};
use crate::subspace::{orthonormalize, Subspace};

/// Downward closure of up to `max_top` random simplices on `vertices`
/// vertices, each of dimension at most `max_dim`.
pub fn complex<R: Rng>(rng: &mut R, vertices: usize, max_dim: usize, max_top: usize) -> SimplicialComplex {
    let count = rng.random_range(1..=max_top.max(1));
    let all: Vec<usize> = (0..vertices).collect();
    let tops = (0..count).map(|_| {
        let size = rng.random_range(1..=(max_dim + 1).min(vertices));
        let mut v: Vec<usize> = all.choose_multiple(rng, size).copied().collect();
        v.sort_unstable();
        Simplex::new(v).expect("distinct sorted vertices")
    });
    SimplicialComplex::build(tops.collect::<Vec<_>>())
}

/// Like [`complex`], but adds random simplices only while the closure has at
/// most `limit` simplices.
pub fn bounded_complex<R: Rng>(rng: &mut R, vertices: usize, max_dim: usize, limit: usize) -> SimplicialComplex {
    let all: Vec<usize> = (0..vertices).collect();
    let mut tops: Vec<Simplex> = Vec::new();
    let mut current = SimplicialComplex::empty();
    for _ in 0..4 * limit {
        let size = rng.random_range(1..=(max_dim + 1).min(vertices));
        let mut v: Vec<usize> = all.choose_multiple(rng, size).copied().collect();
        v.sort_unstable();
        let s = Simplex::new(v).expect("distinct sorted vertices");
        if current.contains(&s) {
            continue;
        }
        tops.push(s);
        let next = SimplicialComplex::build(tops.clone());
        if next.len() > limit {
            tops.pop();
            continue;
        }
        current = next;
    }
    current
}

/// Integer-indexed filtration in which faces may enter together with their
/// cofaces and several simplices may share an index.
pub fn filtration_of<R: Rng>(rng: &mut R, k: &SimplicialComplex) -> Filtration {
    let mut levels: Vec<(Simplex, usize)> = Vec::new();
    let mut level_of = std::collections::HashMap::new();
    for s in k.iter() {
        let base = s.facets().map(|(_, f)| level_of[&f]).max().unwrap_or(0);
        let l = base + rng.random_range(0..=2usize);
        level_of.insert(s.clone(), l);
        levels.push((s.clone(), l));
    }
    Filtration::new(k.clone(), &levels).expect("monotone by construction")
}

/// Strictly admissible function with values in `(0, 1)`: each simplex gets a
/// uniform value above the maximum over its faces.
pub fn admissible_function<R: Rng>(rng: &mut R, k: &SimplicialComplex) -> AdmissibleFunction<f64> {
    let mut values: Vec<(Simplex, f64)> = Vec::new();
    let mut value_of = std::collections::HashMap::new();
    for s in k.iter() {
        let base = s.facets().map(|(_, f)| value_of[&f]).fold(0.0f64, f64::max);
        let u: f64 = rng.random_range(0.05..0.95);
        let v = base + (1.0 - base) * u;
        value_of.insert(s.clone(), v);
        values.push((s.clone(), v));
    }
    AdmissibleFunction::from_pairs(k.clone(), &values).expect("every simplex assigned")
}

/// Strictly admissible function with values on the grid `j / 64`, so that
/// midpoint quadrature on a 1/128 grid is exact.
pub fn dyadic_function<R: Rng>(rng: &mut R, k: &SimplicialComplex) -> AdmissibleFunction<f64> {
    let mut values: Vec<(Simplex, f64)> = Vec::new();
    let mut level_of = std::collections::HashMap::new();
    for s in k.iter() {
        let base = s.facets().map(|(_, f)| level_of[&f] + 1).max().unwrap_or(0);
        let l: u32 = base + rng.random_range(0..6u32);
        level_of.insert(s.clone(), l);
        values.push((s.clone(), l.min(63) as f64 / 64.0));
    }
    AdmissibleFunction::from_pairs(k.clone(), &values).expect("every simplex assigned")
}

/// Gaussian `n x d` matrix.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, n: usize, d: usize) -> Mat<f64> {
    Mat::from_fn(n, d, |_, _| rng.sample(StandardNormal))
}

/// Uniformly distributed `d`-dimensional subspace of `R^n` (almost surely of
/// dimension `min(n, d)`).
pub fn subspace<R: Rng>(rng: &mut R, n: usize, d: usize) -> Subspace<f64> {
    orthonormalize(gaussian_matrix(rng, n, d).as_ref(), 1e-9)
}
