//! The two families of banded unit upper triangular matrices built from a
//! palindromic (k = 1) or antipalindromic (k = 2) polynomial, their
//! spectral numbers and the matrix identities they satisfy.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cyclo::{cyclotomic_poly, totient};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Poly, Scalar, I128};
use crate::numeric;
use crate::polycore::{
    companion_matrix, jordan_chain_vectors, palindrome_class, poly_from_angles, same_angle,
    unit_circle_angles, RealMatrix, RealPoly,
};
use crate::real::{Real, TOL};
use crate::seifert::{exact_inertia, type_from_ladder, IrrType};
use crate::spectra::{ladder_members, Spp, SppLadder};

/// A point `β ∈ [0,1]^n` of one of the two families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorScal {
    pub k: u8,
    pub beta: Vec<Real>,
}

impl HorScal {
    pub fn new(k: u8, beta: Vec<Real>) -> Result<Self> {
        let s = HorScal { k, beta };
        s.validate()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    pub fn is_exact(&self) -> bool {
        self.beta.iter().all(Real::is_exact)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |m: &str| Err(Error::NotInFamily(format!("k={} β={:?}: {m}", self.k, self.beta_strings())));
        if n == 0 || !(self.k == 1 || self.k == 2) {
            return bad("empty or k not in {1,2}");
        }
        if self.beta.iter().any(|b| b.sign() < 0 || (b.clone() - Real::one()).sign() > 0) {
            return bad("β outside [0,1]");
        }
        if self.beta.windows(2).any(|w| w[1] < w[0]) {
            return bad("β not nondecreasing");
        }
        let one = Real::one();
        let ok = match self.k {
            1 => (0..n).all(|j| (self.beta[j].clone() + self.beta[n - 1 - j].clone()) == one),
            _ => {
                self.beta[0].is_zero()
                    && (1..n).all(|j| (self.beta[j].clone() + self.beta[n - j].clone()) == one)
            }
        };
        if !ok {
            return bad("symmetry fails");
        }
        Ok(())
    }

    fn beta_strings(&self) -> Vec<String> {
        self.beta.iter().map(|b| b.to_string()).collect()
    }
}

/// `γ_j = (j - k/2)/n`, the point of `E_n`.
pub fn gamma(n: usize, k: u8) -> HorScal {
    let beta = (1..=n as i64).map(|j| Real::frac(2 * j - k as i64, 2 * n as i64)).collect();
    HorScal { k, beta }
}

pub fn scal_to_poly(b: &HorScal) -> Result<RealPoly> {
    b.validate()?;
    Ok(poly_from_angles(&b.beta))
}

/// Inverse of [`scal_to_poly`]: sorted angles, with the roots at 1 split
/// between `β = 0` (front) and `β = 1` (back).
pub fn poly_to_scal(p: &RealPoly, k: u8) -> Result<HorScal> {
    let class = palindrome_class(p, TOL);
    if class.k != Some(k) {
        return Err(Error::NotInFamily(format!("polynomial is not in family k={k}")));
    }
    let angles = unit_circle_angles(p, 1e-7)?;
    let ones = angles.multiplicity(&Real::zero());
    let (front, back) = if k == 1 {
        (ones / 2, ones / 2)
    } else {
        (ones.div_ceil(2), ones.saturating_sub(1) / 2)
    };
    if front + back != ones {
        return Err(Error::NotInFamily("parity of the root 1 does not match k".into()));
    }
    let mut beta = vec![Real::zero(); front];
    for (a, m) in &angles.entries {
        if !same_angle(a, &Real::zero()) {
            beta.extend(std::iter::repeat_n(a.clone(), *m));
        }
    }
    beta.extend(std::iter::repeat_n(Real::one(), back));
    let mut s = HorScal { k, beta };
    if !s.is_exact() {
        symmetrize(&mut s)?;
        return Ok(s);
    }
    s.validate()?;
    Ok(s)
}

/// Averages float angles with their mirror images so the symmetry holds to
/// rounding.
fn symmetrize(s: &mut HorScal) -> Result<()> {
    let n = s.n();
    let off = if s.k == 1 { 0 } else { 1 };
    let m = n - off;
    for j in 0..m {
        let a = s.beta[off + j].to_f64();
        let b = s.beta[n - 1 - j].to_f64();
        if (a + b - 1.0).abs() > 1e-6 {
            return Err(Error::NotInFamily("angles are not symmetric".into()));
        }
        s.beta[off + j] = Real::F((a + 1.0 - b) / 2.0);
    }
    if off == 1 {
        s.beta[0] = Real::zero();
    }
    s.validate()
}

/// A family member as a matrix: `S_ij = p_{n-(j-i)}` above the diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorMatrix {
    pub k: u8,
    pub n: usize,
    pub s: RealMatrix,
    pub p: RealPoly,
}

impl HorMatrix {
    pub fn scal(&self) -> Result<HorScal> {
        poly_to_scal(&self.p, self.k)
    }
}

impl Serialize for RealMatrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RealMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Real>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl Serialize for RealPoly {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RealPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::new(Vec::<Real>::deserialize(d)?))
    }
}

pub fn poly_to_matrix(p: &RealPoly, k: u8) -> Result<HorMatrix> {
    if palindrome_class(p, TOL).k != Some(k) {
        return Err(Error::NotInFamily(format!("polynomial is not in family k={k}")));
    }
    Ok(matrix_of_poly(p, k))
}

fn matrix_of_poly(p: &RealPoly, k: u8) -> HorMatrix {
    let n = p.degree();
    let s = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Real::one()
        } else if i < j {
            p.coeff(n - (j - i))
        } else {
            Real::zero()
        }
    });
    HorMatrix { k, n, s, p: p.clone() }
}

/// No root finding here: the angles already are the roots, and crowded
/// float angles give coefficients whose roots are not recoverable to `TOL`.
pub fn scal_to_matrix(b: &HorScal) -> Result<HorMatrix> {
    Ok(matrix_of_poly(&scal_to_poly(b)?, b.k))
}

pub fn r_matrix(h: &HorMatrix) -> RealMatrix {
    companion_matrix(&h.p)
}

/// `α_j = nβ_j - j + k/2`, in index order.
pub fn recipe_spectrum(b: &HorScal) -> Vec<Real> {
    let n = b.n() as i64;
    b.beta
        .iter()
        .enumerate()
        .map(|(j, beta)| {
            Real::int(n) * beta.clone() - Real::int(j as i64 + 1) + Real::frac(b.k as i64, 2)
        })
        .collect()
}

/// One `κ`-group of the recipe: the angle of `κ` in `[0,1)` and its ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaLadder {
    pub kappa: Real,
    pub ladder: SppLadder,
}

pub fn recipe_ladders(b: &HorScal) -> Result<Vec<KappaLadder>> {
    let alphas = recipe_spectrum(b);
    let mut groups: Vec<(Real, Vec<Real>)> = Vec::new();
    for (beta, alpha) in b.beta.iter().zip(alphas) {
        let kappa = beta.rem_euclid(&Real::one());
        match groups.iter_mut().find(|g| same_angle(&g.0, &kappa)) {
            Some(g) => g.1.push(alpha),
            None => groups.push((kappa, vec![alpha])),
        }
    }
    groups
        .into_iter()
        .map(|(kappa, mut al)| {
            al.sort_by(|x, y| x.cmp_tol(y));
            for w in al.windows(2) {
                if w[1].clone() - w[0].clone() != Real::one() {
                    return Err(Error::NotArithmeticGroup(format!("κ angle {kappa}: {w:?}")));
                }
            }
            Ok(KappaLadder { kappa, ladder: SppLadder::new(al[0].clone(), 1, al.len() - 1) })
        })
        .collect()
}

pub fn recipe_spectral_pairs(b: &HorScal) -> Result<Spp> {
    let mut out = Spp::default();
    for kl in recipe_ladders(b)? {
        out = out.union(&ladder_members(&kl.ladder));
    }
    Ok(out)
}

/// Searches an ordering of `candidate` that a family member could produce.
pub fn is_realizable_spectrum(candidate: &[Real], n: usize, k: u8) -> Option<Vec<Real>> {
    if candidate.len() != n || n == 0 {
        return None;
    }
    let mut pool: Vec<Real> = candidate.to_vec();
    pool.sort_by(|a, b| a.cmp_tol(b));
    let mut seq = vec![Real::zero(); n];
    if k == 2 {
        let i = pool.iter().position(|a| a.is_zero())?;
        pool.remove(i);
    }
    let off = if k == 2 { 1 } else { 0 };
    let half = (n - off) / 2;
    fn take(pool: &mut Vec<Real>, v: &Real) -> bool {
        match pool.iter().position(|a| a == v) {
            Some(i) => {
                pool.remove(i);
                true
            }
            None => false,
        }
    }
    fn check(seq: &[Real], k: u8) -> bool {
        seq.windows(2).all(|w| w[1] >= w[0].clone() - Real::one())
            && (k == 2 || seq[0] >= Real::frac(-1, 2))
            && (k == 1 || seq[0].is_zero())
    }
    fn dfs(pool: &mut Vec<Real>, seq: &mut Vec<Real>, pos: usize, half: usize, off: usize, k: u8) -> bool {
        let n = seq.len();
        if pos == half {
            if (n - off) % 2 == 1 {
                if pool.len() != 1 || !pool[0].is_zero() {
                    return false;
                }
                seq[off + half] = Real::zero();
            } else if !pool.is_empty() {
                return false;
            }
            return check(seq, k);
        }
        let mut tried: Vec<Real> = Vec::new();
        for v in pool.clone() {
            if tried.contains(&v) {
                continue;
            }
            tried.push(v.clone());
            let idx = off + pos;
            if idx > 0 && v < seq[idx - 1].clone() - Real::one() {
                continue;
            }
            if k == 1 && pos == 0 && v < Real::frac(-1, 2) {
                continue;
            }
            let mut next = pool.clone();
            take(&mut next, &v);
            let mirror = -v.clone();
            if !take(&mut next, &mirror) {
                continue;
            }
            seq[idx] = v.clone();
            seq[n - 1 - pos] = mirror;
            if dfs(&mut next, seq, pos + 1, half, off, k) {
                return true;
            }
        }
        false
    }
    dfs(&mut pool, &mut seq, 0, half, off, k).then_some(seq)
}

/// `((-1)^n p(-x), k~)` with `k~ ≡ k + n (mod 2)`.
pub fn negate_poly_transform(p: &RealPoly, k: u8) -> Result<(RealPoly, u8)> {
    if palindrome_class(p, TOL).k != Some(k) {
        return Err(Error::NotInFamily(format!("polynomial is not in family k={k}")));
    }
    let n = p.degree();
    let mut q = p.reflect();
    if n % 2 == 1 {
        q = q.scale(&Real::int(-1));
    }
    let kt = if (k as usize + n) % 2 == 1 { 1 } else { 2 };
    if palindrome_class(&q, TOL).k != Some(kt) {
        return Err(Error::NotInFamily("transformed polynomial left the family".into()));
    }
    Ok((q, kt))
}

/// Inverse of a unit upper triangular matrix by back substitution; works
/// over any ring.
pub fn unit_upper_inverse<T: Scalar>(s: &Matrix<T>) -> Matrix<T> {
    let n = s.rows;
    let mut inv = Matrix::<T>::identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut acc = T::zero();
            for t in i + 1..=j {
                acc = acc + s.get(i, t).clone() * inv.get(t, j).clone();
            }
            inv.set(i, j, -acc);
        }
    }
    inv
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerCheck {
    /// `(-1)^k S^{-1} S^t = R^n`
    pub power: bool,
    /// `R^t S^t R = S^t`
    pub isometry: bool,
    /// `(-1)^k S^{-1} S^t - R^n`
    pub residual: RealMatrix,
}

impl PowerCheck {
    pub fn holds(&self) -> bool {
        self.power && self.isometry
    }
}

fn sign_k<T: Scalar>(m: &Matrix<T>, k: u8) -> Matrix<T> {
    if k % 2 == 1 {
        m.neg()
    } else {
        m.clone()
    }
}

fn power_check_generic<T: Scalar>(s: &Matrix<T>, r: &Matrix<T>, k: u8) -> (Matrix<T>, bool) {
    let n = s.rows;
    let st = s.transpose();
    let lhs = sign_k(&unit_upper_inverse(s).mul(&st), k);
    let rhs = r.pow(n as u32);
    let iso = r.transpose().mul(&st).mul(r).approx_eq(&st);
    (lhs.sub(&rhs), iso)
}

pub fn verify_power_identity(h: &HorMatrix) -> PowerCheck {
    let r = r_matrix(h);
    if let (Some(si), Some(ri)) = (h.s.to_i128(), r.to_i128()) {
        let (res, iso) = power_check_generic::<I128>(&si, &ri, h.k);
        if !res.overflowed() {
            let residual = res.map(|x| Real::int(x.0.unwrap() as i64));
            return PowerCheck { power: res.data.iter().all(|x| x.is_zero()), isometry: iso, residual };
        }
    }
    let (res, iso) = power_check_generic::<Real>(&h.s, &r, h.k);
    let power = if h.s.is_exact() {
        res.data.iter().all(Real::is_zero)
    } else {
        res.max_abs() <= 1e-8 * 1f64.max(r.max_abs()).powi(h.n as i32)
    };
    PowerCheck { power, isometry: iso, residual: res }
}

/// The factors `R_(k1), ..., R_(kn)` of `(-1)^k S^{-1} S^t`.
pub fn pl_factors(s: &RealMatrix, k: u8) -> Vec<RealMatrix> {
    let n = s.rows;
    let sigma = if k == 1 { Real::int(-1) } else { Real::one() };
    (0..n)
        .map(|j| {
            let mut top: Vec<Real> = Vec::with_capacity(n);
            for c in j + 1..n {
                top.push(-s.get(j, c).clone());
            }
            for i in 0..j {
                top.push(sigma.clone() * s.get(i, j).clone());
            }
            top.push(sigma.clone());
            Matrix::from_fn(n, n, |r, c| {
                if r == 0 {
                    top[c].clone()
                } else if c + 1 == r {
                    Real::one()
                } else {
                    Real::zero()
                }
            })
        })
        .collect()
}

pub fn pl_factor_product(s: &RealMatrix, k: u8) -> Result<(Vec<RealMatrix>, bool)> {
    if !s.is_unit_upper_triangular() {
        return Err(Error::Invalid("matrix is not unit upper triangular".into()));
    }
    let factors = pl_factors(s, k);
    let n = s.rows;
    let prod = factors.iter().fold(Matrix::identity(n), |acc, f| acc.mul(f));
    let target = sign_k(&unit_upper_inverse(s).mul(&s.transpose()), k);
    let ok = prod.approx_eq(&target);
    Ok((factors, ok))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnhancementEntry {
    pub kappa: Real,
    pub ladder: SppLadder,
    pub irr_type: IrrType,
    pub phase_ok: bool,
    /// `arg L(a, N^l ā)` and the predicted `π(2α+l)/2`.
    pub phase: f64,
    pub expected: f64,
}

/// Per eigenvalue `κ` of `R`: its ladder, the induced irreducible type and
/// the phase test `L(a, N^l ā) ∈ e^{πi(2α+l)/2} R_{>0}` with `a` the top of
/// the companion Jordan chain.
pub fn hor_enhancement(h: &HorMatrix) -> Result<Vec<EnhancementEntry>> {
    let b = h.scal()?;
    let n = h.n;
    let st = h.s.transpose().to_complex();
    let mut out = Vec::new();
    for kl in recipe_ladders(&b)? {
        let l = kl.ladder.l;
        let kappa = numeric::from_turns(kl.kappa.to_f64());
        let v = jordan_chain_vectors(&h.p, kappa, l)?;
        let fact: f64 = (1..=l).map(|i| i as f64).product();
        let conj0: Vec<Complex64> = v[0].iter().map(|z| z.conj()).collect();
        let w = st.mul_vec(&conj0);
        let z: Complex64 = v[l].iter().zip(&w).map(|(a, b)| a * b).sum::<Complex64>()
            * ((n as f64).powi(l as i32) * fact);
        let expected = std::f64::consts::PI * (2.0 * kl.ladder.alpha.to_f64() + l as f64) / 2.0;
        let phase = z.arg();
        let diff = numeric::turn_diff(phase / std::f64::consts::TAU, expected / std::f64::consts::TAU);
        let phase_ok = z.norm() > 1e-9 && (diff * std::f64::consts::TAU).abs() <= 1e-6;
        out.push(EnhancementEntry {
            kappa: kl.kappa.clone(),
            irr_type: type_from_ladder(&kl.ladder, false),
            ladder: kl.ladder,
            phase_ok,
            phase,
            expected,
        });
    }
    Ok(out)
}

/// Like [`hor_enhancement`], but a failed phase test is an error.
pub fn hor_enhancement_checked(h: &HorMatrix) -> Result<Vec<EnhancementEntry>> {
    let e = hor_enhancement(h)?;
    if let Some(bad) = e.iter().find(|x| !x.phase_ok) {
        return Err(Error::PhaseViolation { kappa: bad.kappa.to_string(), got: bad.phase, expected: bad.expected });
    }
    Ok(e)
}

pub type Signature = (usize, usize, usize);

/// Predicted signature of `S + S^t` on the sum of the generalized
/// eigenspaces with eigenvalue `≠ -1`, read off from the spectrum.
pub fn predicted_signature(alphas: &[Real]) -> Signature {
    let mut plus = 0;
    let mut dim = 0;
    for a in alphas {
        let r = a.rem_euclid(&Real::int(2));
        let half = Real::frac(1, 2);
        let is_half = (r.clone() - half.clone()).is_zero() || (r.clone() - Real::frac(3, 2)).is_zero();
        if is_half {
            continue;
        }
        dim += 1;
        if r < half || r > Real::frac(3, 2) {
            plus += 1;
        }
    }
    (plus, 0, dim - plus)
}

/// Signature of `S + S^t` restricted to the image of `(M + E)^n`,
/// `M = S^{-1} S^t`, which is the sum of generalized eigenspaces `≠ -1`.
pub fn computed_signature(s: &RealMatrix) -> Signature {
    if s.is_exact() {
        return exact_restricted_signature(s);
    }
    let n = s.rows;
    let m = unit_upper_inverse(&s.to_f64()).mul(&s.to_f64().transpose());
    let mp = m.add(&Matrix::identity(n)).pow(n as u32);
    // the rank of (M + E)^n is read off the eigenvalues of M: singular
    // values collapse long before eigenvalues do when two of them crowd
    // near -1, and the coefficients of the characteristic polynomial lose
    // even more
    let near_minus_one =
        m.to_nalgebra().complex_eigenvalues().iter().filter(|z| (**z + 1.0).norm() < 1e-6).count();
    let dim = n - near_minus_one;
    if dim == 0 {
        return (0, 0, 0);
    }
    let svd = mp.to_nalgebra().svd(true, false);
    let u = svd.u.unwrap();
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let basis = Matrix::<f64>::from_fn(n, dim, |i, j| u[(i, idx[j])]);
    let sym = s.to_f64().add(&s.to_f64().transpose());
    let q = basis.transpose().mul(&sym).mul(&basis);
    // the form is nondegenerate on this subspace; near the half-integer
    // boundary its honest eigenvalues sit many orders below its norm, so
    // only round-off itself counts as zero
    numeric::real_inertia(&q, n as f64 * f64::EPSILON)
}

fn exact_restricted_signature(s: &RealMatrix) -> Signature {
    let n = s.rows;
    let m = unit_upper_inverse(s).mul(&s.transpose());
    let mp = m.add(&Matrix::identity(n)).pow(n as u32);
    let cols = mp.column_basis();
    if cols.is_empty() {
        return (0, 0, 0);
    }
    let basis = Matrix::from_cols(&cols, n);
    let q = basis.transpose().mul(&s.add(&s.transpose())).mul(&basis);
    exact_inertia(&q)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub predicted: Signature,
    pub computed: Signature,
}

pub fn is_signature(h: &HorMatrix) -> Result<SignatureReport> {
    let alphas = recipe_spectrum(&h.scal()?);
    Ok(SignatureReport { predicted: predicted_signature(&alphas), computed: computed_signature(&h.s) })
}

/// [`is_signature`] starting from the angles, which skips recovering them
/// from the coefficients.
pub fn is_signature_scal(b: &HorScal) -> Result<SignatureReport> {
    let h = scal_to_matrix(b)?;
    Ok(SignatureReport { predicted: predicted_signature(&recipe_spectrum(b)), computed: computed_signature(&h.s) })
}

/// `R^{-t}` together with its shape check: column `j < n-1` is `e_{j+1}`,
/// the last column is `(-p_0, ..., -p_{n-1})`.
pub fn dual_basis_matrix(h: &HorMatrix) -> Result<(RealMatrix, bool)> {
    let r = r_matrix(h);
    let rit = r.inverse()?.transpose();
    let n = h.n;
    let mut ok = true;
    for i in 0..n {
        for j in 0..n {
            let expect = if j + 1 < n {
                if i == j + 1 {
                    Real::one()
                } else {
                    Real::zero()
                }
            } else {
                -h.p.coeff(i)
            };
            if !(rit.get(i, j).clone() - expect).is_zero() {
                ok = false;
            }
        }
    }
    Ok((rit, ok))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathTrack {
    pub r: Vec<f64>,
    /// `alphas[step][j]`, `j` in the order of `γ`.
    pub alphas: Vec<Vec<f64>>,
    pub endpoint: Vec<f64>,
    pub expected: Vec<Real>,
    pub endpoint_ok: bool,
}

/// Follows the eigenvalues of `R` along the straight segment from `γ` to
/// the target in angle coordinates.
pub fn simplex_path_track(target: &HorMatrix, steps: usize) -> Result<PathTrack> {
    let tb = target.scal()?;
    simplex_path_track_scal(&tb, steps)
}

pub fn simplex_path_track_scal(tb: &HorScal, steps: usize) -> Result<PathTrack> {
    let n = tb.n();
    let k = tb.k;
    let g = gamma(n, k);
    let steps = steps.max(1);
    let g0: Vec<f64> = g.beta.iter().map(Real::to_f64).collect();
    let g1: Vec<f64> = tb.beta.iter().map(Real::to_f64).collect();
    let mut theta: Vec<f64> = g0.clone();
    let mut prev: Vec<Complex64> = theta.iter().map(|&t| numeric::from_turns(t)).collect();
    let to_alpha = |th: &[f64]| -> Vec<f64> {
        th.iter()
            .enumerate()
            .map(|(j, t)| n as f64 * t - (j + 1) as f64 + k as f64 / 2.0)
            .collect()
    };
    let mut rs = vec![0.0];
    let mut alphas = vec![to_alpha(&theta)];
    for step in 1..=steps {
        let r = step as f64 / steps as f64;
        let beta: Vec<Real> = g0.iter().zip(&g1).map(|(a, b)| Real::F((1.0 - r) * a + r * b)).collect();
        let p = poly_from_angles(&beta);
        let cur = numeric::roots(&p.to_f64());
        if cur.len() != n {
            return Err(Error::Invalid("root count mismatch".into()));
        }
        if step < steps {
            for i in 0..n {
                for j in i + 1..n {
                    if (cur[i] - cur[j]).norm() < 1e-7 {
                        return Err(Error::CollisionInsideSimplex { r });
                    }
                }
            }
        }
        let perm = numeric::match_nearest(&prev, &cur);
        for j in 0..n {
            let z = cur[perm[j]];
            let a = numeric::angle_turns(z);
            theta[j] += numeric::turn_diff(a, theta[j]);
        }
        prev = perm.iter().map(|&i| cur[i]).collect();
        rs.push(r);
        alphas.push(to_alpha(&theta));
    }
    let endpoint = alphas.last().unwrap().clone();
    let expected = recipe_spectrum(tb);
    let mut e_sorted: Vec<f64> = endpoint.clone();
    e_sorted.sort_by(f64::total_cmp);
    let mut x_sorted: Vec<f64> = expected.iter().map(Real::to_f64).collect();
    x_sorted.sort_by(f64::total_cmp);
    let endpoint_ok = e_sorted.iter().zip(&x_sorted).all(|(a, b)| (a - b).abs() <= 1e-8);
    Ok(PathTrack { r: rs, alphas, endpoint, expected, endpoint_ok })
}

/// Uniform sample of the simplex parametrisation: sorted uniforms in
/// `[0, 1/2]` placed by the affine maps onto `β`.
pub fn random_scal<R: Rng>(n: usize, k: u8, rng: &mut R) -> HorScal {
    let off = if k == 2 { 1 } else { 0 };
    let m = n - off;
    let h = m / 2;
    let mut t: Vec<f64> = (0..h).map(|_| rng.random_range(0.0..=0.5)).collect();
    t.sort_by(f64::total_cmp);
    let mut beta = vec![Real::zero(); n];
    for (j, &v) in t.iter().enumerate() {
        beta[off + j] = Real::F(v);
        beta[n - 1 - j] = Real::F(1.0 - v);
    }
    if m % 2 == 1 {
        beta[off + h] = Real::frac(1, 2);
    }
    HorScal { k, beta }
}

/// Random family polynomial of degree `n` made of cyclotomic factors; `k`
/// follows from the parity of the power of `x - 1`.
pub fn random_cyclotomic_poly<R: Rng>(n: usize, rng: &mut R) -> (RealPoly, u8) {
    let mut p = Poly::constant(Real::one());
    let mut left = n;
    let mut ones = 0;
    while left > 0 {
        let choices: Vec<u64> = (1..=(2 * n * n + 2) as u64).filter(|&d| totient(d) as usize <= left).collect();
        let d = choices[rng.random_range(0..choices.len())];
        if d == 1 {
            ones += 1;
        }
        left -= totient(d) as usize;
        p = p.mul(&cyclotomic_poly(d));
    }
    (p, if ones % 2 == 0 { 1 } else { 2 })
}

/// Every family polynomial of degree `n` that is a product of cyclotomic
/// polynomials.
pub fn all_cyclotomic_polys(n: usize) -> Vec<(RealPoly, u8)> {
    let ds: Vec<u64> = (1..=(2 * n * n + 2) as u64).filter(|&d| totient(d) as usize <= n).collect();
    let mut out = Vec::new();
    fn rec(ds: &[u64], start: usize, left: usize, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..ds.len() {
            let t = totient(ds[i]) as usize;
            if t <= left {
                acc.push(ds[i]);
                rec(ds, i, left - t, acc, out);
                acc.pop();
            }
        }
    }
    let mut lists = Vec::new();
    rec(&ds, 0, n, &mut Vec::new(), &mut lists);
    for l in lists {
        let p = l.iter().fold(Poly::constant(Real::one()), |acc, &d| acc.mul(&cyclotomic_poly(d)));
        let ones = l.iter().filter(|&&d| d == 1).count();
        out.push((p, if ones % 2 == 0 { 1 } else { 2 }));
    }
    out
}

/// Eigenvalues of `R(E_n)` predicted as `e^{-2πi(j-k/2)/n}`.
pub fn identity_eigen_angles(n: usize, k: u8) -> Vec<Real> {
    gamma(n, k).beta
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(a: i64, b: i64) -> Real {
        Real::frac(a, b)
    }

    #[test]
    fn scal_poly_round_trip() {
        let g = gamma(2, 2);
        assert_eq!(scal_to_poly(&g).unwrap(), Poly::from_i64(&[-1, 0, 1]));
        let b = HorScal::new(1, vec![fr(1, 3), fr(2, 3)]).unwrap();
        assert_eq!(scal_to_poly(&b).unwrap(), Poly::from_i64(&[1, 1, 1]));
        let b = HorScal::new(2, vec![fr(0, 1), fr(1, 6), fr(1, 2), fr(5, 6)]).unwrap();
        let p = scal_to_poly(&b).unwrap();
        assert_eq!(p, Poly::from_i64(&[-1, 1, 0, -1, 1]));
        assert_eq!(poly_to_scal(&p, 2).unwrap(), b);
        assert!(poly_to_scal(&p, 1).is_err());
    }

    #[test]
    fn boundary_roots_at_one() {
        // (x-1)^2 with k=1: β = (0, 1)
        let b = poly_to_scal(&Poly::from_i64(&[1, -2, 1]), 1).unwrap();
        assert_eq!(b.beta, vec![Real::zero(), Real::one()]);
        let spp = recipe_spectral_pairs(&b).unwrap();
        assert_eq!(spp, Spp::from_list(&[(fr(-1, 2), 2), (fr(1, 2), 0)]));
        let b = HorScal::new(2, vec![Real::zero(), Real::zero(), Real::one()]).unwrap();
        let spp = recipe_spectral_pairs(&b).unwrap();
        assert_eq!(spp, Spp::from_list(&[(Real::int(-1), 3), (Real::zero(), 1), (Real::one(), -1)]));
    }

    #[test]
    fn spectra_examples() {
        let b = HorScal::new(1, vec![fr(1, 3), fr(2, 3)]).unwrap();
        assert_eq!(recipe_spectrum(&b), vec![fr(1, 6), fr(-1, 6)]);
        let b = HorScal::new(2, vec![fr(0, 1), fr(1, 6), fr(1, 2), fr(5, 6)]).unwrap();
        assert_eq!(recipe_spectrum(&b), vec![fr(0, 1), fr(-1, 3), fr(0, 1), fr(1, 3)]);
        for k in [1, 2] {
            let g = gamma(5, k);
            assert!(recipe_spectrum(&g).iter().all(Real::is_zero));
        }
    }

    #[test]
    fn realizable() {
        assert!(is_realizable_spectrum(&vec![Real::zero(); 4], 4, 1).is_some());
        assert!(is_realizable_spectrum(&vec![Real::zero(); 4], 4, 2).is_some());
        assert!(is_realizable_spectrum(&[Real::int(-2), Real::int(2)], 2, 1).is_none());
        // any returned ordering must come back out of the recipe
        let w = is_realizable_spectrum(&[fr(1, 6), fr(-1, 6)], 2, 1).unwrap();
        let beta: Vec<Real> = w
            .iter()
            .enumerate()
            .map(|(j, a)| (a.clone() + Real::int(j as i64 + 1) - Real::frac(1, 2)) * Real::frac(1, 2))
            .collect();
        assert_eq!(recipe_spectrum(&HorScal::new(1, beta).unwrap()), w);
    }

    #[test]
    fn matrices() {
        let h = poly_to_matrix(&Poly::from_i64(&[1, 1, 1]), 1).unwrap();
        assert_eq!(h.s, Matrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]));
        let h = poly_to_matrix(&Poly::from_i64(&[-1, 0, 1]), 2).unwrap();
        assert_eq!(h.s, Matrix::identity(2));
        assert_eq!(r_matrix(&h), Matrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]));
        assert!(verify_power_identity(&h).holds());
        let (d, ok) = dual_basis_matrix(&h).unwrap();
        assert!(ok);
        assert_eq!(d, Matrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn negation() {
        let (q, k) = negate_poly_transform(&Poly::from_i64(&[1, 1, 1]), 1).unwrap();
        assert_eq!((q, k), (Poly::from_i64(&[1, -1, 1]), 1));
        let (q, k) = negate_poly_transform(&Poly::from_i64(&[-1, 1, 0, -1, 1]), 2).unwrap();
        assert_eq!((q, k), (Poly::from_i64(&[-1, -1, 0, 1, 1]), 2));
        let (q, k) = negate_poly_transform(&Poly::from_i64(&[-1, 1]), 2).unwrap();
        assert_eq!((q, k), (Poly::from_i64(&[1, 1]), 1));
    }

    #[test]
    fn factor_products() {
        let s = Matrix::from_i64_rows(&[vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]);
        assert!(pl_factor_product(&s, 1).unwrap().1);
        assert!(pl_factor_product(&s, 2).unwrap().1);
        for k in [1, 2] {
            assert!(pl_factor_product(&Matrix::identity(4), k).unwrap().1);
        }
    }

    #[test]
    fn n2_enhancement_phase() {
        for a in [-1i64, 1, 0, 2, -2] {
            let h = poly_to_matrix(&Poly::from_i64(&[1, a, 1]), 1).unwrap();
            let e = hor_enhancement(&h).unwrap();
            assert!(e.iter().all(|x| x.phase_ok), "a={a}: {e:?}");
        }
    }

    #[test]
    fn signatures() {
        let h = poly_to_matrix(&Poly::from_i64(&[1, 1, 1]), 1).unwrap();
        let r = is_signature(&h).unwrap();
        assert_eq!(r.predicted, (2, 0, 0));
        assert_eq!(r.computed, (2, 0, 0));
        let h = poly_to_matrix(&Poly::from_i64(&[1, 3, 3, 1]), 1).unwrap();
        let r = is_signature(&h).unwrap();
        assert_eq!(r.predicted.0, 1);
        assert_eq!(r.computed, r.predicted);
    }

    #[test]
    fn path_to_boundary() {
        let h = poly_to_matrix(&Poly::from_i64(&[1, 2, 1]), 1).unwrap();
        let t = simplex_path_track(&h, 128).unwrap();
        assert!(t.endpoint_ok, "{:?}", t.endpoint);
        let h = poly_to_matrix(&Poly::from_i64(&[1, 3, 3, 1]), 1).unwrap();
        let t = simplex_path_track(&h, 192).unwrap();
        assert!(t.endpoint_ok, "{:?}", t.endpoint);
    }
}
