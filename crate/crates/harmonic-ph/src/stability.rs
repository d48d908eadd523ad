//! Distances between harmonic filtration functions, the seminorms on
//! admissible functions, and evaluators for the stability inequalities.

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::harmonic::harmonic_basis;
use crate::persistence::{harmonic_filtration_function, AdmissibleFunction, Death, Filtration, HarmonicPersistence};
use crate::scalar::Real;
use crate::subspace::{grassmann_distance, principal_angles, Subspace};

/// Piecewise constant, right-continuous map from the reals to subspaces of
/// `R^n`: the zero space before the first breakpoint, `values[i]` on
/// `[breakpoints[i], breakpoints[i + 1])`, and the last value afterwards.
#[derive(Clone, Debug)]
pub struct StepSubspaceFunction<T> {
    breakpoints: Vec<T>,
    values: Vec<Subspace<T>>,
    before: Subspace<T>,
}

impl<T: Real> StepSubspaceFunction<T> {
    pub fn new(ambient: usize, breakpoints: Vec<T>, values: Vec<Subspace<T>>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: breakpoints.len(), found: values.len() });
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidStepFunction("breakpoints must be strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| v.ambient_dim() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: v.ambient_dim() });
        }
        Ok(StepSubspaceFunction { breakpoints, values, before: Subspace::zero(ambient) })
    }

    pub fn ambient_dim(&self) -> usize {
        self.before.ambient_dim()
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Subspace<T>] {
        &self.values
    }

    /// Index of the piece containing `x`, `None` before the first breakpoint.
    pub fn piece(&self, x: T) -> Option<usize> {
        self.breakpoints.partition_point(|&b| b <= x).checked_sub(1)
    }

    pub fn at(&self, x: T) -> &Subspace<T> {
        match self.piece(x) {
            Some(i) => &self.values[i],
            None => &self.before,
        }
    }

    fn piece_value(&self, i: Option<usize>) -> &Subspace<T> {
        i.map_or(&self.before, |i| &self.values[i])
    }
}

/// One term of a distance sum: a cell `[s0, s1) x [t0, t1)` (or an interval
/// when `t` is absent), its weight and the distance on it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contribution {
    pub s: [f64; 2],
    pub t: Option<[f64; 2]>,
    pub weight: f64,
    pub distance: f64,
}

/// Result of evaluating one stability inequality `lhs <= rhs`.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub theorem: String,
    pub p: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// Middle term of a chained inequality, when there is one.
    pub intermediate: Option<f64>,
    pub detail: Vec<Contribution>,
}

impl StabilityReport {
    fn new(theorem: &str, p: usize, lhs: f64, rhs: f64, intermediate: Option<f64>, detail: Vec<Contribution>) -> Self {
        StabilityReport { theorem: theorem.to_string(), p, lhs, rhs, slack: rhs - lhs, intermediate, detail }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

/// `(sum_{σ ∈ K^[p]} |f(σ) - g(σ)|^ell)^(1/ell)`.
pub fn seminorm<T: Real>(f: &AdmissibleFunction<T>, g: &AdmissibleFunction<T>, p: usize, ell: T) -> Result<T> {
    if f.complex() != g.complex() {
        return Err(Error::ComplexMismatch);
    }
    let sum = f
        .values(p)
        .iter()
        .zip(g.values(p))
        .fold(T::zero(), |a, (&x, &y)| a + (x - y).abs().powf(ell));
    Ok(sum.powf(ell.recip()))
}

/// Sorted union of both breakpoint sets and the unit interval's endpoints.
fn merged_points<T: Real>(f: &StepSubspaceFunction<T>, g: &StepSubspaceFunction<T>) -> Vec<T> {
    let mut pts: Vec<T> = f.breakpoints.iter().chain(&g.breakpoints).copied().collect();
    pts.push(T::zero());
    pts.push(T::one());
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup();
    pts
}

fn check_same_ambient<T: Real>(f: &StepSubspaceFunction<T>, g: &StepSubspaceFunction<T>) -> Result<()> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::ComplexMismatch);
    }
    Ok(())
}

/// Per-interval terms of `dist_{K,p,ell}(F, G)^ell` over the merged partition.
/// Both functions are assumed to agree outside the hull of `[0, 1]` and
/// their breakpoints, as harmonic filtration functions of one complex do.
pub fn dist_filtration_detail<T: Real>(
    f: &StepSubspaceFunction<T>,
    g: &StepSubspaceFunction<T>,
) -> Result<Vec<Contribution>> {
    check_same_ambient(f, g)?;
    let pts = merged_points(f, g);
    let mut out = Vec::with_capacity(pts.len());
    for w in pts.windows(2) {
        let d = grassmann_distance(f.at(w[0]), g.at(w[0]))?;
        out.push(Contribution {
            s: [w[0].to_f64_lossy(), w[1].to_f64_lossy()],
            t: None,
            weight: (w[1] - w[0]).to_f64_lossy(),
            distance: d.to_f64_lossy(),
        });
    }
    Ok(out)
}

fn weighted_root(detail: &[Contribution], ell: f64) -> f64 {
    let sum: f64 = detail.iter().map(|c| c.weight * c.distance.powf(ell)).sum();
    sum.powf(1.0 / ell)
}

/// `(∫ d(F(t), G(t))^ell dt)^(1/ell)`, exact for step functions.
pub fn dist_filtration_functions<T: Real>(f: &StepSubspaceFunction<T>, g: &StepSubspaceFunction<T>, ell: f64) -> Result<f64> {
    Ok(weighted_root(&dist_filtration_detail(f, g)?, ell))
}

/// `F^{s,t}` for pieces `a <= b`, memoized.
struct PersistentCache<'a, T> {
    fun: &'a StepSubspaceFunction<T>,
    tol: T,
    memo: HashMap<(Option<usize>, Option<usize>), Subspace<T>>,
}

impl<'a, T: Real> PersistentCache<'a, T> {
    fn new(fun: &'a StepSubspaceFunction<T>, tol: T) -> Self {
        PersistentCache { fun, tol, memo: HashMap::new() }
    }

    fn get(&mut self, a: Option<usize>, b: Option<usize>) -> Result<&Subspace<T>> {
        if !self.memo.contains_key(&(a, b)) {
            let src = self.fun.piece_value(a);
            let v = if a == b { src.clone() } else { src.projected_onto(self.fun.piece_value(b), self.tol)? };
            self.memo.insert((a, b), v);
        }
        Ok(&self.memo[&(a, b)])
    }
}

/// Per-cell terms of the persistent distance over `{s <= t}`: off-diagonal
/// cells have area `len_i * len_j`, diagonal cells `len_i^2 / 2`.
pub fn dist_persistent_detail<T: Real>(
    f: &StepSubspaceFunction<T>,
    g: &StepSubspaceFunction<T>,
    tol: T,
) -> Result<Vec<Contribution>> {
    check_same_ambient(f, g)?;
    let pts = merged_points(f, g);
    let cells: Vec<(T, T)> = pts.windows(2).map(|w| (w[0], w[1])).collect();
    let (mut cf, mut cg) = (PersistentCache::new(f, tol), PersistentCache::new(g, tol));
    let mut dist_memo: HashMap<[Option<usize>; 4], f64> = HashMap::new();
    let mut out = Vec::with_capacity(cells.len() * (cells.len() + 1) / 2);
    for (i, &(s0, s1)) in cells.iter().enumerate() {
        let (fi, gi) = (f.piece(s0), g.piece(s0));
        for &(t0, t1) in &cells[i..] {
            let (fj, gj) = (f.piece(t0), g.piece(t0));
            let key = [fi, fj, gi, gj];
            let d = match dist_memo.get(&key) {
                Some(&d) => d,
                None => {
                    let a = cf.get(fi, fj)?.clone();
                    let d = grassmann_distance(&a, cg.get(gi, gj)?)?.to_f64_lossy();
                    dist_memo.insert(key, d);
                    d
                }
            };
            let (ls, lt) = ((s1 - s0).to_f64_lossy(), (t1 - t0).to_f64_lossy());
            let weight = if t0 == s0 { ls * ls / 2.0 } else { ls * lt };
            out.push(Contribution {
                s: [s0.to_f64_lossy(), s1.to_f64_lossy()],
                t: Some([t0.to_f64_lossy(), t1.to_f64_lossy()]),
                weight,
                distance: d,
            });
        }
    }
    Ok(out)
}

/// `(∫∫_{s <= t} d(F^{s,t}, G^{s,t})^ell ds dt)^(1/ell)` with
/// `F^{s,t} = proj_{F(t)} F(s)`.
pub fn dist_persistent<T: Real>(f: &StepSubspaceFunction<T>, g: &StepSubspaceFunction<T>, ell: f64, tol: T) -> Result<f64> {
    Ok(weighted_root(&dist_persistent_detail(f, g, tol)?, ell))
}

fn shift_sum<T: Real>(f: &AdmissibleFunction<T>, g: &AdmissibleFunction<T>, p: usize) -> Result<f64> {
    Ok((seminorm(f, g, p, T::one())? + seminorm(f, g, p + 1, T::one())?).to_f64_lossy())
}

fn check_pair<T: Real>(f: &AdmissibleFunction<T>, g: &AdmissibleFunction<T>) -> Result<()> {
    if f.complex() != g.complex() {
        return Err(Error::ComplexMismatch);
    }
    f.check_admissible()?;
    g.check_admissible()
}

/// `dist_{K,p,2}(F, G) <= (pi/2) (||f-g||_1^(p) + ||f-g||_1^(p+1))^(1/2)`.
pub fn check_theorem_stable<T: Real>(
    f: &AdmissibleFunction<T>,
    g: &AdmissibleFunction<T>,
    p: usize,
    tol: T,
) -> Result<StabilityReport> {
    check_pair(f, g)?;
    let ff = harmonic_filtration_function(f, p, tol)?;
    let gg = harmonic_filtration_function(g, p, tol)?;
    let detail = dist_filtration_detail(&ff, &gg)?;
    let lhs = weighted_root(&detail, 2.0);
    let rhs = std::f64::consts::FRAC_PI_2 * shift_sum(f, g, p)?.sqrt();
    Ok(StabilityReport::new("stable", p, lhs, rhs, None, detail))
}

/// `dist^persistent_{p,1}(F, G) <= pi (||f-g||_1^(p) + ||f-g||_1^(p+1))`.
pub fn check_theorem_stable_persistent<T: Real>(
    f: &AdmissibleFunction<T>,
    g: &AdmissibleFunction<T>,
    p: usize,
    tol: T,
) -> Result<StabilityReport> {
    check_pair(f, g)?;
    let ff = harmonic_filtration_function(f, p, tol)?;
    let gg = harmonic_filtration_function(g, p, tol)?;
    let detail = dist_persistent_detail(&ff, &gg, tol)?;
    let lhs = weighted_root(&detail, 1.0);
    let rhs = std::f64::consts::PI * shift_sum(f, g, p)?;
    Ok(StabilityReport::new("persistent", p, lhs, rhs, None, detail))
}

/// `t ↦ H_p(K_{⌊tN⌋})`, the harmonic filtration function of `σ ↦ entry(σ)/N`.
pub fn normalized_harmonic_function<T: Real>(f: &Filtration, p: usize, tol: T) -> Result<StepSubspaceFunction<T>> {
    let n = f.last().max(1);
    let mut values = Vec::with_capacity(f.last() + 1);
    for t in 0..=f.last() {
        values.push(harmonic_basis(f.complex(), &f.subcomplex(t), p, tol)?.space);
    }
    let breakpoints = (0..=f.last()).map(|i| T::from_count(i) / T::from_count(n)).collect();
    StepSubspaceFunction::new(f.complex().count(p), breakpoints, values)
}

/// Terminal subspaces of the finite bars, keyed by `(s, t)`. Fails when a
/// finite bar has multiplicity above one.
pub fn terminal_map<T: Real>(hp: &HarmonicPersistence<'_, T>) -> Result<HashMap<(usize, usize), Subspace<T>>> {
    let mut out = HashMap::new();
    for b in hp.barcode()? {
        if let Death::Finite(t) = b.bar.t {
            if b.bar.multiplicity > 1 {
                return Err(Error::HypothesisViolated { s: b.bar.s, t, dim: b.bar.multiplicity });
            }
            out.insert((b.bar.s, t), b.terminal.expect("simple finite bars carry a terminal subspace"));
        }
    }
    Ok(out)
}

/// Average terminal-subspace distance over `0 <= i < j <= N`, bounded by
/// twice the persistent distance of the normalized functions, bounded in
/// turn by `(pi^3/2)(||f-g||_1^(p) + ||f-g||_1^(p+1))`. Pairs where a
/// filtration has no bar contribute a zero subspace.
pub fn check_theorem_barcode<T: Real>(f: &Filtration, g: &Filtration, p: usize, tol: T) -> Result<StabilityReport> {
    if f.complex() != g.complex() || f.last() != g.last() {
        return Err(Error::ComplexMismatch);
    }
    let n = f.last();
    let ambient = f.complex().count(p);
    let hf = HarmonicPersistence::new(f, p, tol)?;
    let hg = HarmonicPersistence::new(g, p, tol)?;
    let (tf, tg) = (terminal_map(&hf)?, terminal_map(&hg)?);
    let zero = Subspace::zero(ambient);
    let pairs = n * (n + 1) / 2;
    let weight = if pairs == 0 { 0.0 } else { 1.0 / pairs as f64 };
    let mut detail = Vec::with_capacity(pairs);
    let mut lhs = 0.0;
    for i in 0..n {
        for j in i + 1..=n {
            let a = tf.get(&(i, j)).unwrap_or(&zero);
            let b = tg.get(&(i, j)).unwrap_or(&zero);
            let d = grassmann_distance(a, b)?.to_f64_lossy();
            lhs += weight * d;
            detail.push(Contribution { s: [i as f64; 2], t: Some([j as f64; 2]), weight, distance: d });
        }
    }
    let ff = normalized_harmonic_function(f, p, tol)?;
    let gg = normalized_harmonic_function(g, p, tol)?;
    let intermediate = 2.0 * dist_persistent(&ff, &gg, 1.0, tol)?;
    let (fa, ga) = (f.normalized_function(), g.normalized_function());
    let rhs = std::f64::consts::PI.powi(3) / 2.0 * shift_sum(&fa, &ga, p)?;
    Ok(StabilityReport::new("barcode", p, lhs, rhs, Some(intermediate), detail))
}

/// `max(|K1^[p] - K2^[p]| + |K2^[p+1] - K1^[p+1]|, |K2^[p] - K1^[p]| + |K1^[p+1] - K2^[p+1]|)`.
pub fn delta_p(k: &SimplicialComplex, k1: &Subcomplex, k2: &Subcomplex, p: usize) -> usize {
    let only = |a: &Subcomplex, b: &Subcomplex, q: usize| {
        (0..k.count(q)).filter(|&i| a.contains(q, i) && !b.contains(q, i)).count()
    };
    let one = only(k1, k2, p) + only(k2, k1, p + 1);
    let two = only(k2, k1, p) + only(k1, k2, p + 1);
    one.max(two)
}

/// `d(H_p(K1), H_p(K2)) <= (pi/2) Δ_p^(1/2)`; the intermediate field holds
/// the weaker bound with the full symmetric difference in degrees `p, p+1`.
pub fn check_homology_stability<T: Real>(
    k: &SimplicialComplex,
    k1: &Subcomplex,
    k2: &Subcomplex,
    p: usize,
    tol: T,
) -> Result<StabilityReport> {
    let h1 = harmonic_basis(k, k1, p, tol)?.space;
    let h2 = harmonic_basis(k, k2, p, tol)?.space;
    let lhs = grassmann_distance(&h1, &h2)?.to_f64_lossy();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let rhs = half_pi * (delta_p(k, k1, k2, p) as f64).sqrt();
    let sym: usize = [p, p + 1]
        .iter()
        .map(|&q| (0..k.count(q)).filter(|&i| k1.contains(q, i) != k2.contains(q, i)).count())
        .sum();
    let corollary = half_pi * (sym as f64).sqrt();
    Ok(StabilityReport::new("homology", p, lhs, rhs, Some(corollary), Vec::new()))
}

/// Measured and predicted cosine of the nonzero principal angle between
/// the harmonic 1-spaces of two ladders.
#[derive(Clone, Debug, Serialize)]
pub struct LadderAngle {
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub cos_measured: f64,
    pub cos_closed_form: f64,
    pub limit: f64,
    /// Number of principal angles below `1e-8`.
    pub shared_dim: usize,
}

fn check_ladder(n: usize, m: usize) -> Result<()> {
    if n < 2 || m == 0 || m >= n {
        return Err(Error::InvalidLadder { n, m });
    }
    Ok(())
}

/// Cycle on vertices `0..2n` with rungs `[m, 2n - m]` and `[⌊n/2⌋, 2n - ⌊n/2⌋]`,
/// and its two subcomplexes with one rung each.
pub fn ladder_complex(n: usize, m: usize) -> Result<(SimplicialComplex, Subcomplex, Subcomplex)> {
    check_ladder(n, m)?;
    let h = n / 2;
    let v = 2 * n;
    let mut edges: Vec<Vec<usize>> = (0..v - 1).map(|i| vec![i, i + 1]).collect();
    edges.push(vec![0, v - 1]);
    let cycle = edges.clone();
    edges.push(vec![m, v - m]);
    edges.push(vec![h, v - h]);
    let k = SimplicialComplex::from_vertex_lists(edges)?;
    let with = |r: usize| -> Result<Subcomplex> {
        let mut e = cycle.clone();
        e.push(vec![r, v - r]);
        let simplices = e.into_iter().map(crate::complex::Simplex::new).collect::<Result<Vec<_>>>()?;
        Subcomplex::closure_of(&k, simplices.iter())
    };
    let (a, b) = (with(m)?, with(h)?);
    Ok((k, a, b))
}

/// `αn / ((2αn(1-α)^2 + 2n(1-α)α^2 + 1)^(1/2) (n/2 + 1)^(1/2))` with `α = m/n`.
pub fn ladder_closed_form(n: usize, m: usize) -> f64 {
    let nf = n as f64;
    let a = m as f64 / nf;
    a * nf / ((2.0 * a * nf * (1.0 - a).powi(2) + 2.0 * nf * (1.0 - a) * a * a + 1.0).sqrt() * (nf / 2.0 + 1.0).sqrt())
}

/// `(α / (1 - α))^(1/2)`.
pub fn ladder_limit(alpha: f64) -> f64 {
    (alpha / (1.0 - alpha)).sqrt()
}

pub fn ladder_angle(n: usize, m: usize, tol: f64) -> Result<LadderAngle> {
    let (k, a, b) = ladder_complex(n, m)?;
    let ha = harmonic_basis::<f64>(&k, &a, 1, tol)?.space;
    let hb = harmonic_basis::<f64>(&k, &b, 1, tol)?.space;
    let angles = principal_angles(&ha, &hb)?;
    let largest = angles.largest().unwrap_or(0.0);
    let alpha = m as f64 / n as f64;
    Ok(LadderAngle {
        n,
        m,
        alpha,
        cos_measured: largest.cos(),
        cos_closed_form: ladder_closed_form(n, m),
        limit: ladder_limit(alpha),
        shared_dim: angles.angles.iter().filter(|&&x| x < 1e-8).count(),
    })
}
