//! Sign and braid actions on unit upper triangular matrices, bounded orbit
//! exploration, the spectrum-per-eigenvalue-stratum experiment and path
//! tracking of spectral numbers along arbitrary paths.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hor::{negate_poly_transform, poly_to_matrix, recipe_spectrum, unit_upper_inverse, HorMatrix};
use crate::linalg::Matrix;
use crate::numeric;
use crate::polycore::{RealMatrix, RealPoly};
use crate::real::Real;
use crate::seifert::{self, classify, SeifertPair};

/// Angle distance below which two tracked eigenvalues count as collided.
pub const COLLISION_TOL: f64 = 1e-6;
/// Distance from the unit circle tolerated along a path.
pub const CIRCLE_TOL: f64 = 1e-6;

pub type SignVector = Vec<i8>;

/// `diag(ε) S diag(ε)`
pub fn sign_act(eps: &[i8], s: &RealMatrix) -> RealMatrix {
    Matrix::from_fn(s.rows, s.cols, |i, j| {
        let v = s.get(i, j).clone();
        if eps[i] * eps[j] < 0 {
            -v
        } else {
            v
        }
    })
}

/// Mutation at positions `(i, i+1)` (0-based `i`): `S' = K S K^t` with the
/// block `((-s, 1), (1, 0))`, `s = S_{i,i+1}`, for `dir = +1`, and
/// `((0, 1), (1, -s))` for `dir = -1`.
pub fn braid_act(i: usize, s: &RealMatrix, dir: i8) -> Result<RealMatrix> {
    let n = s.rows;
    if i + 1 >= n {
        return Err(Error::Invalid(format!("braid index {i} out of range for n = {n}")));
    }
    let x = s.get(i, i + 1).clone();
    let mut k = RealMatrix::identity(n);
    if dir >= 0 {
        k.set(i, i, -x);
        k.set(i + 1, i + 1, Real::zero());
    } else {
        k.set(i, i, Real::zero());
        k.set(i + 1, i + 1, -x);
    }
    k.set(i, i + 1, Real::one());
    k.set(i + 1, i, Real::one());
    Ok(k.mul(s).mul(&k.transpose()))
}

/// Characteristic polynomial of `S^{-1} S^t`.
pub fn monodromy_char_poly(s: &RealMatrix) -> RealPoly {
    unit_upper_inverse(s).mul(&s.transpose()).char_poly()
}

fn cmp_upper(a: &RealMatrix, b: &RealMatrix) -> Ordering {
    let n = a.rows;
    for i in 0..n {
        for j in i + 1..n {
            let o = a.get(i, j).cmp_tol(b.get(i, j));
            if o != Ordering::Equal {
                return o;
            }
        }
    }
    Ordering::Equal
}

/// Lexicographically smallest member of the sign orbit (entries above the
/// diagonal, row by row), with the sign vector reaching it.
pub fn sign_canonical(s: &RealMatrix) -> (RealMatrix, SignVector) {
    let n = s.rows;
    let mut best = s.clone();
    let mut best_eps = vec![1i8; n];
    if n <= 1 {
        return (best, best_eps);
    }
    // ε and -ε act the same way, so ε_0 = 1
    for mask in 0u64..(1u64 << (n - 1)) {
        let eps: Vec<i8> = (0..n).map(|j| if j > 0 && mask >> (j - 1) & 1 == 1 { -1 } else { 1 }).collect();
        let t = sign_act(&eps, s);
        if cmp_upper(&t, &best) == Ordering::Less {
            best = t;
            best_eps = eps;
        }
    }
    (best, best_eps)
}

fn key(s: &RealMatrix) -> Vec<String> {
    let n = s.rows;
    let mut k = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let v = s.get(i, j);
            k.push(if v.is_exact() { v.to_string() } else { format!("{:.9}", v.to_f64()) });
        }
    }
    k
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitNode {
    pub matrix: RealMatrix,
    pub depth: usize,
    /// `(i, dir)` braid moves from the start, each followed by sign
    /// canonicalization.
    pub moves: Vec<(usize, i8)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitReport {
    pub nodes: Vec<OrbitNode>,
    /// The node budget was hit before the search finished.
    pub budget_exhausted: bool,
    /// No new node appeared at the last level: the orbit is complete.
    pub closed: bool,
    /// Every node has the monodromy characteristic polynomial of the start.
    pub char_poly_invariant: bool,
}

/// Breadth first search over braid moves up to `depth` levels or `budget`
/// nodes, on sign-canonical representatives.
pub fn orbit_explore(s: &RealMatrix, depth: usize, budget: usize) -> Result<OrbitReport> {
    if !s.is_unit_upper_triangular() {
        return Err(Error::Invalid("matrix is not unit upper triangular".into()));
    }
    let n = s.rows;
    let cp = monodromy_char_poly(s);
    let (start, _) = sign_canonical(s);
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    seen.insert(key(&start));
    let mut nodes = vec![OrbitNode { matrix: start, depth: 0, moves: vec![] }];
    let mut frontier = vec![0usize];
    let mut exhausted = false;
    let mut closed = false;
    let mut invariant = true;
    for d in 1..=depth {
        let children: Vec<Result<Vec<(OrbitNode, bool)>>> = frontier
            .par_iter()
            .map(|&idx| {
                let node = &nodes[idx];
                let mut out = Vec::new();
                for i in 0..n.saturating_sub(1) {
                    for dir in [1i8, -1] {
                        let t = braid_act(i, &node.matrix, dir)?;
                        let ok = monodromy_char_poly(&t) == cp;
                        let (c, _) = sign_canonical(&t);
                        let mut moves = node.moves.clone();
                        moves.push((i, dir));
                        out.push((OrbitNode { matrix: c, depth: d, moves }, ok));
                    }
                }
                Ok(out)
            })
            .collect();
        let mut next = Vec::new();
        for batch in children {
            for (child, ok) in batch? {
                invariant &= ok;
                if seen.insert(key(&child.matrix)) {
                    if nodes.len() >= budget {
                        exhausted = true;
                        break;
                    }
                    next.push(nodes.len());
                    nodes.push(child);
                }
            }
            if exhausted {
                break;
            }
        }
        if exhausted {
            break;
        }
        if next.is_empty() {
            closed = true;
            break;
        }
        frontier = next;
    }
    if depth == 0 {
        closed = n <= 1;
    }
    Ok(OrbitReport { nodes, budget_exhausted: exhausted, closed, char_poly_invariant: invariant })
}

fn poly_key(p: &RealPoly) -> String {
    p.coeffs
        .iter()
        .map(|c| if c.is_exact() { c.to_string() } else { format!("{:.8}", c.to_f64()) })
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoolMember {
    pub k: u8,
    pub p: Vec<String>,
    pub spectrum: Vec<String>,
    /// Per eigenvalue signatures, see [`component_invariant`].
    pub invariant: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conj16Group {
    /// Coefficients of the monodromy characteristic polynomial.
    pub char_poly: String,
    pub members: Vec<PoolMember>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conj16Report {
    pub pool_size: usize,
    pub groups: Vec<Conj16Group>,
    /// Groups with equal characteristic polynomial but different spectra.
    /// Members may still lie in different fiber components.
    pub candidates: Vec<Conj16Group>,
    /// Candidates whose disagreeing members also share the per eigenvalue
    /// signatures, so that no computed invariant separates their
    /// components; reported in full.
    pub violations: Vec<Conj16Group>,
    /// Pool members whose angles repeat, where the recipe involves a choice.
    pub collisions: Vec<PoolMember>,
}

fn sorted_spectrum(h: &HorMatrix) -> Result<Vec<Real>> {
    let mut a = recipe_spectrum(&h.scal()?);
    a.sort_by(|x, y| x.cmp_tol(y));
    Ok(a)
}

/// Signature of `S + S^t` on each generalized eigenspace with eigenvalue
/// `≠ -1`. The form is nondegenerate there, so these signatures are
/// constant along any connected set of matrices with fixed eigenvalues.
/// The unit matrix is an isolated point of its fiber and gets its own tag.
pub fn component_invariant(s: &RealMatrix) -> String {
    if *s == RealMatrix::identity(s.rows) {
        return "unit".into();
    }
    let types = SeifertPair::from_stokes(s).and_then(|p| classify(&p, seifert::CIRCLE_TOL));
    let ts = match types {
        Ok(ts) => ts,
        Err(e) => return format!("unclassified ({e})"),
    };
    let mut per: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for t in &ts {
        let z = t.eigenvalue();
        if (z + 1.0).norm() < 1e-9 {
            continue;
        }
        let sig = seifert::type_signature(t);
        let e = per.entry(format!("{:.6}{:+.6}i", z.re + 0.0, z.im + 0.0)).or_default();
        e.0 += sig.0;
        e.1 += sig.1;
        e.2 += sig.2;
    }
    per.iter().map(|(k, v)| format!("{k}:({},{},{})", v.0, v.1, v.2)).collect::<Vec<_>>().join(" ")
}

/// Groups the pool by the characteristic polynomial of `S^{-1}S^t` and
/// compares the spectra within each group.
pub fn conjecture16_check(pool: &[HorMatrix]) -> Result<Conj16Report> {
    let rows: Vec<Result<(String, PoolMember, bool, Vec<Real>)>> = pool
        .par_iter()
        .map(|h| {
            let sp = sorted_spectrum(h)?;
            let b = h.scal()?;
            let repeated = b.beta.windows(2).any(|w| w[0] == w[1]);
            let m = PoolMember {
                k: h.k,
                p: h.p.coeffs.iter().map(Real::to_string).collect(),
                spectrum: sp.iter().map(Real::to_string).collect(),
                invariant: component_invariant(&h.s),
            };
            Ok((poly_key(&monodromy_char_poly(&h.s)), m, repeated, sp))
        })
        .collect();
    let mut by_poly: BTreeMap<String, Vec<(PoolMember, Vec<Real>)>> = BTreeMap::new();
    let mut collisions = Vec::new();
    for r in rows {
        let (key, m, repeated, sp) = r?;
        if repeated {
            collisions.push(m.clone());
        }
        by_poly.entry(key).or_default().push((m, sp));
    }
    let mut groups = Vec::new();
    let mut candidates = Vec::new();
    let mut violations = Vec::new();
    for (char_poly, ms) in by_poly {
        let agree = ms.windows(2).all(|w| w[0].1 == w[1].1);
        if !agree {
            let mut by_inv: BTreeMap<&str, Vec<&(PoolMember, Vec<Real>)>> = BTreeMap::new();
            for m in &ms {
                by_inv.entry(m.0.invariant.as_str()).or_default().push(m);
            }
            for (inv, sub) in by_inv {
                if sub.windows(2).any(|w| w[0].1 != w[1].1) {
                    violations.push(Conj16Group {
                        char_poly: format!("{char_poly} | {inv}"),
                        members: sub.iter().map(|x| x.0.clone()).collect(),
                        agree: false,
                    });
                }
            }
        }
        let g = Conj16Group { char_poly, members: ms.into_iter().map(|x| x.0).collect(), agree };
        if !agree {
            candidates.push(g.clone());
        }
        groups.push(g);
    }
    Ok(Conj16Report { pool_size: pool.len(), groups, candidates, violations, collisions })
}

/// All family matrices of size `n` from products of cyclotomic polynomials,
/// with their images under the sign vector `((-1)^j)`; each image is checked
/// to be the family matrix of `(-1)^n p(-x)`.
pub fn cyclotomic_pool(n: usize) -> Result<Vec<HorMatrix>> {
    let alt: Vec<i8> = (0..n).map(|j| if j % 2 == 0 { 1 } else { -1 }).collect();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (p, k) in crate::hor::all_cyclotomic_polys(n) {
        let h = poly_to_matrix(&p, k)?;
        let (q, kt) = negate_poly_transform(&p, k)?;
        let g = poly_to_matrix(&q, kt)?;
        if sign_act(&alt, &h.s) != g.s {
            return Err(Error::Invalid("sign image differs from the transformed polynomial".into()));
        }
        for m in [h, g] {
            if seen.insert((m.k, poly_key(&m.p))) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenericTrack {
    pub r: Vec<f64>,
    /// `alphas[step][branch]`
    pub alphas: Vec<Vec<f64>>,
    /// Endpoint values, sorted.
    pub endpoint: Vec<f64>,
    /// Parameters `r > 0` where two branches meet.
    pub collisions: Vec<f64>,
    /// Set when a collision happened before the end, so that the branch
    /// labels after it depend on the matching.
    pub path_dependent: bool,
}

fn lerp(a: &Matrix<f64>, b: &Matrix<f64>, t: f64) -> Matrix<f64> {
    Matrix::from_fn(a.rows, a.cols, |i, j| (1.0 - t) * a.get(i, j) + t * b.get(i, j))
}

/// Eigenvalues of `S^{-1} S^t`, which must lie on the unit circle.
fn monodromy_eigenvalues(s: &Matrix<f64>, r: f64) -> Result<Vec<Complex64>> {
    let m = unit_upper_inverse(s).mul(&s.transpose());
    let cp = m.char_poly();
    let z = numeric::roots(&cp.coeffs);
    if z.len() != s.rows || z.iter().any(|z| (z.norm() - 1.0).abs() > CIRCLE_TOL) {
        return Err(Error::LeftT { r });
    }
    Ok(z)
}

/// Follows `α_j(r)` with `e^{-2πiα_j(r)}` the eigenvalues of the monodromy
/// along the polygon through `path` (control points at `r = i/(len-1)`),
/// starting from `α_j(0) = 0` at the unit matrix.
pub fn generic_path_track(path: &[RealMatrix], steps: usize) -> Result<GenericTrack> {
    let first = path.first().ok_or_else(|| Error::Invalid("empty path".into()))?;
    let n = first.rows;
    if *first != RealMatrix::identity(n) {
        return Err(Error::Invalid("path must start at the unit matrix".into()));
    }
    if path.iter().any(|s| s.rows != n || !s.is_unit_upper_triangular()) {
        return Err(Error::Invalid("path contains a matrix outside the unit upper triangular set".into()));
    }
    let pts: Vec<Matrix<f64>> = path.iter().map(|s| s.to_f64()).collect();
    let segs = (pts.len() - 1).max(1);
    let steps = steps.max(1);
    let at = |r: f64| -> Matrix<f64> {
        if pts.len() == 1 {
            return pts[0].clone();
        }
        let x = r * segs as f64;
        let i = (x.floor() as usize).min(segs - 1);
        lerp(&pts[i], &pts[i + 1], x - i as f64)
    };
    let mut alpha = vec![0.0f64; n];
    let mut prev: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); n];
    let mut rs = vec![0.0];
    let mut alphas = vec![alpha.clone()];
    let mut collisions: Vec<f64> = Vec::new();
    for step in 1..=steps {
        let r = step as f64 / steps as f64;
        let cur = monodromy_eigenvalues(&at(r), r)?;
        let perm = numeric::match_nearest(&prev, &cur);
        for j in 0..n {
            let a = numeric::angle_turns(cur[perm[j]]);
            alpha[j] += numeric::turn_diff(a, alpha[j]);
        }
        prev = perm.iter().map(|&i| cur[i]).collect();
        let hit = (0..n).any(|i| (i + 1..n).any(|j| numeric::turn_diff(alpha[i], alpha[j]).abs() < COLLISION_TOL));
        if hit {
            collisions.push(r);
        }
        rs.push(r);
        alphas.push(alpha.clone());
    }
    let mut endpoint = alpha.clone();
    endpoint.sort_by(f64::total_cmp);
    let path_dependent = collisions.iter().any(|&r| r < 1.0);
    Ok(GenericTrack { r: rs, alphas, endpoint, collisions, path_dependent })
}

/// Matrices of the family at evenly spaced points of the straight segment
/// from `γ` to `β` in angle coordinates.
pub fn simplex_matrix_path(target: &crate::hor::HorScal, samples: usize) -> Result<Vec<RealMatrix>> {
    let g = crate::hor::gamma(target.n(), target.k);
    let samples = samples.max(1);
    let mut out = vec![RealMatrix::identity(target.n())];
    for i in 1..=samples {
        let t = Real::frac(i as i64, samples as i64);
        let beta: Vec<Real> = g
            .beta
            .iter()
            .zip(&target.beta)
            .map(|(a, b)| a.clone() * (Real::one() - t.clone()) + b.clone() * t.clone())
            .collect();
        let b = crate::hor::HorScal { k: target.k, beta };
        out.push(crate::hor::scal_to_matrix(&b)?.s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[Vec<i64>]) -> RealMatrix {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn signs() {
        let s = m(&[vec![1, 2, 3], vec![0, 1, 4], vec![0, 0, 1]]);
        assert_eq!(sign_act(&[1, 1, 1], &s), s);
        let t = sign_act(&[1, -1, 1], &s);
        assert_eq!(t, m(&[vec![1, -2, 3], vec![0, 1, -4], vec![0, 0, 1]]));
        assert_eq!(monodromy_char_poly(&t), monodromy_char_poly(&s));
        let (c, _) = sign_canonical(&s);
        assert_eq!(c, m(&[vec![1, -2, -3], vec![0, 1, 4], vec![0, 0, 1]]));
    }

    #[test]
    fn braids() {
        let e = RealMatrix::identity(4);
        for i in 0..3 {
            assert_eq!(braid_act(i, &e, 1).unwrap(), e);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut s = RealMatrix::identity(4);
            for i in 0..4 {
                for j in i + 1..4 {
                    s.set(i, j, Real::int(rng.random_range(-3..=3)));
                }
            }
            for i in 0..3 {
                let t = braid_act(i, &s, 1).unwrap();
                assert!(t.is_unit_upper_triangular());
                assert_eq!(monodromy_char_poly(&t), monodromy_char_poly(&s));
                assert_eq!(braid_act(i, &t, -1).unwrap(), s);
                assert_eq!(braid_act(i, &braid_act(i, &s, -1).unwrap(), 1).unwrap(), s);
            }
        }
    }

    #[test]
    fn orbits() {
        let e = RealMatrix::identity(3);
        let r = orbit_explore(&e, 4, 100).unwrap();
        assert_eq!(r.nodes.len(), 1);
        assert!(r.closed);
        let a2 = m(&[vec![1, 1], vec![0, 1]]);
        let r = orbit_explore(&a2, 6, 100).unwrap();
        assert!(r.closed && !r.budget_exhausted);
        assert_eq!(r.nodes.len(), 1);
        let a3 = m(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let r = orbit_explore(&a3, 10, 1000).unwrap();
        assert!(r.closed && r.char_poly_invariant);
        let h = poly_to_matrix(&Poly::from_i64(&[1, 1, 1, 1, 1]), 1).unwrap();
        let r = orbit_explore(&h.s, 3, 2000).unwrap();
        assert!(r.char_poly_invariant);
    }

    #[test]
    fn conj16_small() {
        let pool = cyclotomic_pool(3).unwrap();
        let r = conjecture16_check(&pool).unwrap();
        assert!(r.violations.is_empty(), "{:#?}", r.violations);
        // E_3 and the 3x3 Jordan block share (x-1)^3
        assert_eq!(r.candidates.len(), 1);
        assert!(r.groups.len() < pool.len());
    }

    #[test]
    fn tracks() {
        let e = RealMatrix::identity(2);
        let t = generic_path_track(std::slice::from_ref(&e), 8).unwrap();
        assert!(t.endpoint.iter().all(|x| *x == 0.0));
        let s = m(&[vec![1, 2], vec![0, 1]]);
        let t = generic_path_track(&[e.clone(), s], 512).unwrap();
        assert!((t.endpoint[0] + 0.5).abs() < 1e-6 && (t.endpoint[1] - 0.5).abs() < 1e-6, "{:?}", t.endpoint);
        assert_eq!(t.collisions, vec![1.0]);
        assert!(!t.path_dependent);
        let out = m(&[vec![1, 3], vec![0, 1]]);
        assert!(matches!(generic_path_track(&[e, out], 64), Err(Error::LeftT { .. })));
    }

    #[test]
    fn track_matches_simplex() {
        let b = crate::hor::HorScal::new(1, vec![Real::frac(1, 10), Real::frac(1, 2), Real::frac(9, 10)]).unwrap();
        let path = simplex_matrix_path(&b, 64).unwrap();
        let t = generic_path_track(&path, 64 * 8).unwrap();
        let s = crate::hor::simplex_path_track_scal(&b, 512).unwrap();
        let mut want: Vec<f64> = s.endpoint.clone();
        want.sort_by(f64::total_cmp);
        for (x, y) in t.endpoint.iter().zip(&want) {
            assert!((x - y).abs() < 1e-8, "{:?} vs {want:?}", t.endpoint);
        }
        assert!(!t.path_dependent);
    }
}
