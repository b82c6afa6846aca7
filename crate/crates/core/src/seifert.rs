//! Seifert form pairs `(H, L)`: monodromy, irreducible types and their
//! `I_s` signatures, enhancements by spectral pairs and semiorthogonal
//! data.
//!
//! Angles follow the convention `λ = e^{-2πiθ}` throughout, and the same
//! convention is used for `ζ`.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclo::{cyclotomic_factors, cyclotomic_poly, totient};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Poly};
use crate::numeric;
use crate::polycore::RealMatrix;
use crate::real::Real;
use crate::spectra::{decompose_into_ladders, mod2, Spp, SppLadder};

type CMat = Matrix<Complex64>;

/// Default tolerance for deciding `|λ| = 1` on floating input.
pub const CIRCLE_TOL: f64 = 1e-6;

/// `L(a, b) = a^t G b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeifertPair {
    pub g: RealMatrix,
}

impl SeifertPair {
    pub fn new(g: RealMatrix) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::Dimension(format!("Gram matrix is {}x{}", g.rows, g.cols)));
        }
        let singular = if g.is_exact() {
            g.det().is_zero()
        } else {
            let sv = numeric::singular_values(&g.to_complex());
            sv.last().copied().unwrap_or(0.0) <= 1e-12 * sv.first().copied().unwrap_or(0.0).max(1.0)
        };
        if singular {
            return Err(Error::Singular);
        }
        Ok(SeifertPair { g })
    }

    /// The pair of a matrix `S ∈ T(n,R)`: `G = S^t`.
    pub fn from_stokes(s: &RealMatrix) -> Result<Self> {
        Self::new(s.transpose())
    }

    pub fn n(&self) -> usize {
        self.g.rows
    }

    pub fn pairing(&self, a: &[Real], b: &[Real]) -> Real {
        let gb = self.g.mul_vec(b);
        a.iter().zip(&gb).fold(Real::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    /// The pair on the span of the columns of `basis`.
    pub fn restrict(&self, basis: &RealMatrix) -> Result<SeifertPair> {
        SeifertPair::new(basis.transpose().mul(&self.g).mul(basis))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forms {
    /// `L(Ma, b) = L(b, a)`
    pub m: RealMatrix,
    /// Gram matrix of `I_s(a,b) = L(b,a) + L(a,b)`.
    pub i_s: RealMatrix,
    /// Gram matrix of `I_a(a,b) = L(b,a) - L(a,b)`.
    pub i_a: RealMatrix,
}

pub fn monodromy_and_forms(p: &SeifertPair) -> Result<Forms> {
    let gt = p.g.transpose();
    let m = gt.inverse()?.mul(&p.g);
    Ok(Forms { m, i_s: gt.add(&p.g), i_a: gt.sub(&p.g) })
}

/// Irreducible Seifert form pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum IrrType {
    /// `Seif(λ,1,n,ε)`, `λ = ±1` (angle 0 or 1/2).
    F1 { lambda: Real, n: usize, eps: i8 },
    /// `Seif(λ,2,n)`, `λ = ±1`.
    F2real { lambda: Real, n: usize },
    /// `Seif(λ,2,n,ζ)` stored with `θ ∈ (0,1/2)`, i.e. `Im λ < 0`.
    F2complex { lambda: Real, n: usize, zeta: Real },
    /// `Seif(λ,2,n)` with real `|λ| > 1`.
    F2hyper { value: f64, n: usize },
    /// `Seif(λ,4,n)` with `|λ| > 1`, `Im λ > 0`.
    F4hyper { re: f64, im: f64, n: usize },
}

fn wrap(a: Real) -> Real {
    a.rem_euclid(&Real::one())
}

fn half() -> Real {
    Real::frac(1, 2)
}

/// `ζ_ref = (λ̄+1)/|λ+1| · i^{n+1}` as an angle, for `θ ∈ (0,1/2)`.
pub fn zeta_ref_angle(theta: &Real, n: usize) -> Real {
    wrap(-(theta.clone() * half()) - Real::frac(n as i64 + 1, 4))
}

impl IrrType {
    pub fn dim(&self) -> usize {
        match self {
            IrrType::F1 { n, .. } => *n,
            IrrType::F2real { n, .. } | IrrType::F2complex { n, .. } | IrrType::F2hyper { n, .. } => 2 * n,
            IrrType::F4hyper { n, .. } => 4 * n,
        }
    }

    pub fn block_size(&self) -> usize {
        match self {
            IrrType::F1 { n, .. }
            | IrrType::F2real { n, .. }
            | IrrType::F2complex { n, .. }
            | IrrType::F2hyper { n, .. }
            | IrrType::F4hyper { n, .. } => *n,
        }
    }

    /// Replaces `(λ, ζ)` by `(λ̄, ζ̄)` when `Im λ > 0`.
    pub fn canonical(self) -> Self {
        match self {
            IrrType::F2complex { lambda, n, zeta } if lambda > half() => {
                IrrType::F2complex { lambda: wrap(-lambda), n, zeta: wrap(-zeta) }
            }
            other => other,
        }
    }

    /// The parity and `ζ^2` conditions of each family.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(format!("{self}: {m}")));
        match self {
            IrrType::F1 { lambda, n, eps } => {
                let odd = n % 2 == 1;
                if !(*eps == 1 || *eps == -1) {
                    return bad("ε must be ±1");
                }
                if !((lambda.is_zero() && odd) || (*lambda == half() && !odd)) {
                    return bad("needs λ=1 with n odd or λ=-1 with n even");
                }
            }
            IrrType::F2real { lambda, n } => {
                let odd = n % 2 == 1;
                if !((lambda.is_zero() && !odd) || (*lambda == half() && odd)) {
                    return bad("needs λ=1 with n even or λ=-1 with n odd");
                }
            }
            IrrType::F2complex { lambda, n, zeta } => {
                if lambda.is_zero() || *lambda == half() {
                    return bad("λ must not be real");
                }
                let lhs = wrap(Real::int(2) * zeta.clone());
                let rhs = wrap(-lambda.clone() + Real::frac(*n as i64 + 1, 2));
                if !angle_eq(&lhs, &rhs) {
                    return bad("ζ^2 differs from λ̄·(-1)^{n+1}");
                }
            }
            IrrType::F2hyper { value, .. } => {
                if value.abs() <= 1.0 {
                    return bad("|λ| must exceed 1");
                }
            }
            IrrType::F4hyper { re, im, .. } => {
                if re.hypot(*im) <= 1.0 || *im <= 0.0 {
                    return bad("needs |λ| > 1 and Im λ > 0");
                }
            }
        }
        if self.block_size() == 0 {
            return bad("n must be positive");
        }
        Ok(())
    }

    /// The eigenvalue `λ` as a complex number.
    pub fn eigenvalue(&self) -> Complex64 {
        match self {
            IrrType::F1 { lambda, .. } | IrrType::F2real { lambda, .. } | IrrType::F2complex { lambda, .. } => {
                numeric::from_turns(lambda.to_f64())
            }
            IrrType::F2hyper { value, .. } => Complex64::new(*value, 0.0),
            IrrType::F4hyper { re, im, .. } => Complex64::new(*re, *im),
        }
    }

    fn key(&self) -> (u8, f64, f64, usize, f64) {
        match self {
            IrrType::F1 { lambda, n, eps } => (0, lambda.to_f64(), 0.0, *n, *eps as f64),
            IrrType::F2real { lambda, n } => (1, lambda.to_f64(), 0.0, *n, 0.0),
            IrrType::F2complex { lambda, n, zeta } => (2, lambda.to_f64(), 0.0, *n, zeta.to_f64()),
            IrrType::F2hyper { value, n } => (3, *value, 0.0, *n, 0.0),
            IrrType::F4hyper { re, im, n } => (4, *re, *im, *n, 0.0),
        }
    }

    pub fn sort_cmp(&self, o: &Self) -> Ordering {
        if self == o {
            return Ordering::Equal;
        }
        let (a, b) = (self.key(), o.key());
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.cmp(&b.3))
            .then(a.4.total_cmp(&b.4))
    }
}

fn angle_eq(a: &Real, b: &Real) -> bool {
    match (a, b) {
        (Real::Q(x), Real::Q(y)) => (x - y).is_integer(),
        _ => numeric::turn_diff(a.to_f64(), b.to_f64()).abs() <= 1e-6,
    }
}

fn value_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * 1f64.max(a.abs())
}

impl PartialEq for IrrType {
    fn eq(&self, o: &Self) -> bool {
        use IrrType::*;
        match (self, o) {
            (F1 { lambda: a, n: x, eps: e }, F1 { lambda: b, n: y, eps: f }) => angle_eq(a, b) && x == y && e == f,
            (F2real { lambda: a, n: x }, F2real { lambda: b, n: y }) => angle_eq(a, b) && x == y,
            (F2complex { lambda: a, n: x, zeta: z }, F2complex { lambda: b, n: y, zeta: w }) => {
                angle_eq(a, b) && x == y && angle_eq(z, w)
            }
            (F2hyper { value: a, n: x }, F2hyper { value: b, n: y }) => value_eq(*a, *b) && x == y,
            (F4hyper { re: a, im: c, n: x }, F4hyper { re: b, im: d, n: y }) => {
                value_eq(*a, *b) && value_eq(*c, *d) && x == y
            }
            _ => false,
        }
    }
}

fn fmt_sign_lambda(lambda: &Real) -> &'static str {
    if lambda.is_zero() {
        "1"
    } else {
        "-1"
    }
}

impl fmt::Display for IrrType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrType::F1 { lambda, n, eps } => write!(f, "Seif({},1,{n},{eps})", fmt_sign_lambda(lambda)),
            IrrType::F2real { lambda, n } => write!(f, "Seif({},2,{n})", fmt_sign_lambda(lambda)),
            IrrType::F2complex { lambda, n, zeta } => {
                write!(f, "Seif(e^(-2πi·{lambda}),2,{n},e^(-2πi·{zeta}))")
            }
            IrrType::F2hyper { value, n } => write!(f, "Seif({value},2,{n})"),
            IrrType::F4hyper { re, im, n } => write!(f, "Seif({re}{im:+}i,4,{n})"),
        }
    }
}

/// `"2·Seif(1,1,1,1)"`, `"Seif(1,1,1,1) + Seif(-1,2,1)"`.
pub fn format_class(types: &[IrrType]) -> String {
    let mut sorted = types.to_vec();
    sorted.sort_by(IrrType::sort_cmp);
    let mut groups: Vec<(IrrType, usize)> = Vec::new();
    for t in sorted {
        match groups.last_mut() {
            Some((u, c)) if *u == t => *c += 1,
            _ => groups.push((t, 1)),
        }
    }
    groups
        .iter()
        .map(|(t, c)| if *c == 1 { t.to_string() } else { format!("{c}·{t}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Multiset equality of two type lists.
pub fn same_class(a: &[IrrType], b: &[IrrType]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|t| match (0..b.len()).find(|&j| !used[j] && b[j] == *t) {
        Some(j) => {
            used[j] = true;
            true
        }
        None => false,
    })
}

pub type Signature = (usize, usize, usize);

/// Signature of `I_s` on an irreducible pair.
pub fn type_signature(t: &IrrType) -> Signature {
    match t {
        IrrType::F1 { lambda, n, eps } => {
            let n = *n;
            let e = *eps as i64;
            if lambda.is_zero() {
                if (n as i64 - e).rem_euclid(4) == 0 {
                    (n.div_ceil(2), 0, (n - 1) / 2)
                } else {
                    ((n - 1) / 2, 0, n.div_ceil(2))
                }
            } else if (n as i64 - 1 - e).rem_euclid(4) == 0 {
                (n / 2, 1, (n - 2) / 2)
            } else {
                ((n - 2) / 2, 1, n / 2)
            }
        }
        IrrType::F2real { lambda, n } => {
            if lambda.is_zero() {
                (*n, 0, *n)
            } else {
                (n - 1, 2, n - 1)
            }
        }
        IrrType::F2complex { lambda, n, zeta } => {
            let n = *n;
            if n % 2 == 0 {
                (n, 0, n)
            } else if angle_eq(zeta, &zeta_ref_angle(lambda, n)) {
                (n - 1, 0, n + 1)
            } else {
                (n + 1, 0, n - 1)
            }
        }
        IrrType::F2hyper { n, .. } => (*n, 0, *n),
        IrrType::F4hyper { n, .. } => (2 * n, 0, 2 * n),
    }
}

pub fn class_signature(types: &[IrrType]) -> Signature {
    types.iter().map(type_signature).fold((0, 0, 0), |a, s| (a.0 + s.0, a.1 + s.1, a.2 + s.2))
}

/// The irreducible pair that a single ladder (or either ladder of a pair)
/// with center `m` carries in a (signed) polarized enhancement.
pub fn type_from_ladder(ladder: &SppLadder, signed: bool) -> IrrType {
    let d = ladder.distance();
    let theta = wrap(ladder.alpha.clone() + Real::frac(ladder.m + 1, 2));
    let n = ladder.l + 1;
    let flip = signed && ladder.l % 2 == 1;
    match d.to_integer() {
        Some(di) if di % 2 == 0 => {
            let mut eps: i8 = if (di / 2) % 2 == 0 { 1 } else { -1 };
            if flip {
                eps = -eps;
            }
            IrrType::F1 { lambda: theta, n, eps }
        }
        Some(_) => IrrType::F2real { lambda: theta, n },
        None => {
            let mut zeta = wrap(-(d * Real::frac(1, 4)));
            if flip {
                zeta = wrap(zeta + half());
            }
            IrrType::F2complex { lambda: theta, n, zeta }.canonical()
        }
    }
}

/// Types of the pairs with polarized (or signed polarized) enhancement
/// and spectral pairs `spp` with center `m`.
pub fn class_from_spp(spp: &Spp, m: i64, signed: bool) -> Result<Vec<IrrType>> {
    let ladders: Vec<SppLadder> = decompose_into_ladders(spp, m)?.into_iter().map(|e| e.ladder).collect();
    let mut out = Vec::new();
    let mut used = vec![false; ladders.len()];
    for i in 0..ladders.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let lad = &ladders[i];
        let d = lad.distance();
        if d.to_integer().is_some_and(|x| x % 2 == 0) {
            out.push(type_from_ladder(lad, signed));
            continue;
        }
        let partner_alpha = Real::int(m - lad.l as i64 - 1) - lad.alpha.clone();
        let j = (0..ladders.len())
            .find(|&j| !used[j] && ladders[j].l == lad.l && mod2(&(ladders[j].alpha.clone() - partner_alpha.clone())).is_zero());
        match j {
            Some(j) => {
                used[j] = true;
                out.push(type_from_ladder(lad, signed));
            }
            None => {
                return Err(Error::NotLadderComposed { witness: format!("ladder ({}, {}, {}) has no partner", lad.alpha, lad.m, lad.l) })
            }
        }
    }
    out.sort_by(IrrType::sort_cmp);
    Ok(out)
}

/// `Σ_{k≥1} (-1)^{k+1} U^k / k` for nilpotent `U`.
fn log_unipotent<T: Field>(u: &Matrix<T>) -> Matrix<T> {
    let n = u.rows;
    let mut acc = Matrix::<T>::zeros(n, n);
    let mut pw = Matrix::<T>::identity(n);
    for k in 1..=n {
        pw = pw.mul(u);
        let c = T::from_i64(if k % 2 == 1 { 1 } else { -1 }) / T::from_i64(k as i64);
        acc = acc.add(&pw.scale(&c));
    }
    acc
}

pub fn poly_at_matrix<T: Field>(p: &Poly<T>, m: &Matrix<T>) -> Matrix<T> {
    let n = m.rows;
    let mut acc = Matrix::<T>::zeros(n, n);
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(m).add(&Matrix::identity(n).scale(c));
    }
    acc
}

/// `(s, c_s)` from `k_j = dim ker N^j`, `j = 0..=J`, largest `s` first.
fn blocks_from_kernel_dims(k: &[usize]) -> Vec<(usize, usize)> {
    let top = k.len() - 1;
    let at = |j: usize| k[j.min(top)] as i64;
    let mut out = Vec::new();
    for s in (1..=top).rev() {
        let c = 2 * at(s) - at(s - 1) - at(s + 1);
        if c > 0 {
            out.push((s, c as usize));
        }
    }
    out
}

fn kernel_dims_from_blocks(blocks: &[(usize, usize)], top: usize) -> Vec<usize> {
    (0..=top).map(|j| blocks.iter().map(|&(s, c)| c * s.min(j)).sum()).collect()
}

/// Signs of a real symmetric rational matrix from its characteristic
/// polynomial (real rooted, so Descartes' rule is exact).
pub fn exact_inertia(h: &RealMatrix) -> Signature {
    let p = h.char_poly();
    let c = &p.coeffs;
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    let changes = |v: &[Real]| {
        let signs: Vec<i32> = v.iter().map(Real::sign).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let rest = Poly::new(c[zeros..].to_vec());
    let pos = changes(&rest.coeffs);
    let neg = changes(&rest.reflect().coeffs);
    (pos, zeros, neg)
}

/// `X` with `B X = M B` for a basis `B` of an `M`-invariant subspace.
fn restrict_exact(m: &RealMatrix, b: &RealMatrix) -> Result<RealMatrix> {
    let bt = b.transpose();
    bt.mul(b).inverse().map(|inv| inv.mul(&bt).mul(m).mul(b))
}

#[derive(Clone, Debug)]
enum Kind {
    Pm(i8),
    /// `θ ∈ (0, 1/2)`
    Circle(Real),
    OffReal(f64),
    OffComplex(Complex64),
}

#[derive(Clone, Debug)]
struct Eigen {
    lambda: Complex64,
    kind: Kind,
    mult: usize,
    blocks: Option<Vec<(usize, usize)>>,
}

fn kind_of(z: Complex64, tol: f64) -> Option<Kind> {
    if (z.norm() - 1.0).abs() <= tol {
        if z.im.abs() <= tol {
            Some(Kind::Pm(if z.re > 0.0 { 1 } else { -1 }))
        } else if z.im < 0.0 {
            Some(Kind::Circle(Real::F(numeric::angle_turns(z))))
        } else {
            None
        }
    } else if z.norm() > 1.0 {
        if z.im.abs() <= tol {
            Some(Kind::OffReal(z.re))
        } else if z.im > 0.0 {
            Some(Kind::OffComplex(z))
        } else {
            None
        }
    } else {
        None
    }
}

fn group_numeric(vals: &[Complex64], tol: f64) -> Vec<Eigen> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &z in vals {
        match groups.iter_mut().find(|g| (g.0 - z).norm() <= 1e-9 * 1f64.max(z.norm())) {
            Some(g) => g.1 += 1,
            None => groups.push((z, 1)),
        }
    }
    groups
        .into_iter()
        .filter_map(|(z, mult)| {
            kind_of(z, tol).map(|kind| {
                let lambda = match kind {
                    Kind::Pm(s) => Complex64::new(s as f64, 0.0),
                    Kind::OffReal(v) => Complex64::new(v, 0.0),
                    _ => z,
                };
                Eigen { lambda, kind, mult, blocks: None }
            })
        })
        .collect()
}

fn exact_eigen(m: &RealMatrix, tol: f64) -> Vec<Eigen> {
    let n = m.rows;
    let chi = m.char_poly();
    let (cyc, rest) = cyclotomic_factors(&chi, (2 * n * n + 2) as u64);
    let mut out = Vec::new();
    for (d, mult) in cyc {
        let f = poly_at_matrix(&cyclotomic_poly(d), m);
        let phi = totient(d) as usize;
        let mut k = vec![0];
        let mut pw = Matrix::identity(n);
        for _ in 0..mult {
            pw = pw.mul(&f);
            k.push((n - pw.rank()) / phi);
        }
        let blocks = blocks_from_kernel_dims(&k);
        for j in 0..d {
            if num_integer::gcd(j, d) != 1 {
                continue;
            }
            let theta = Real::frac(j as i64, d as i64);
            let kind = match d {
                1 => Kind::Pm(1),
                2 => Kind::Pm(-1),
                _ if theta < half() => Kind::Circle(theta.clone()),
                _ => continue,
            };
            out.push(Eigen {
                lambda: numeric::from_turns(theta.to_f64()),
                kind,
                mult,
                blocks: Some(blocks.clone()),
            });
        }
    }
    if rest.degree() > 0 {
        for (mult, f) in rest.squarefree() {
            let roots = numeric::roots(&f.to_f64());
            for mut e in group_numeric(&roots, tol) {
                e.mult *= mult;
                out.push(e);
            }
        }
    }
    out
}

fn numeric_eigen(m: &RealMatrix, tol: f64) -> Vec<Eigen> {
    let ev = m.to_f64().to_nalgebra().complex_eigenvalues();
    let raw: Vec<Complex64> = ev.iter().copied().collect();
    group_numeric(&numeric::cluster(&raw, numeric::CLUSTER_RADIUS), tol)
}

fn cscale(m: &CMat, c: Complex64) -> CMat {
    m.map(|z| z * c)
}

/// A complement of `ker N^{s-1} + N ker N^{s+1}` inside `ker N^s`.
fn complement_numeric(nm: &CMat, s: usize, c: usize, kd: &dyn Fn(usize) -> usize) -> CMat {
    let ks = numeric::null_space(&nm.pow(s as u32), kd(s));
    let r = kd(s) - c;
    if r == 0 {
        return ks;
    }
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    if s > 1 {
        let k1 = numeric::null_space(&nm.pow(s as u32 - 1), kd(s - 1));
        cols.extend((0..k1.cols).map(|j| k1.col(j)));
    }
    if kd(s + 1) > kd(s) {
        let k2 = numeric::null_space(&nm.pow(s as u32 + 1), kd(s + 1));
        let img = numeric::cmat_mul(nm, &k2);
        cols.extend((0..img.cols).map(|j| img.col(j)));
    }
    let sub = Matrix::from_cols(&cols, nm.rows);
    let span = numeric::range_space(&sub, r);
    let z = numeric::null_space(&numeric::cmat_mul(&span.adjoint(), &ks), c);
    numeric::cmat_mul(&ks, &z)
}

fn complement_exact(nm: &RealMatrix, s: usize) -> Vec<Vec<Real>> {
    let ks = nm.pow(s as u32).kernel();
    let mut sub: Vec<Vec<Real>> = if s > 1 { nm.pow(s as u32 - 1).kernel() } else { vec![] };
    for v in nm.pow(s as u32 + 1).kernel() {
        sub.push(nm.mul_vec(&v));
    }
    let all: Vec<Vec<Real>> = sub.iter().chain(&ks).cloned().collect();
    if all.is_empty() {
        return vec![];
    }
    let (_, pivots) = Matrix::from_cols(&all, nm.rows).rref();
    pivots.into_iter().filter(|&p| p >= sub.len()).map(|p| all[p].clone()).collect()
}

fn unclassified(lambda: Complex64, blocks: &[(usize, usize)], why: &str) -> Error {
    Error::Unclassified(format!("λ={lambda:.6}, blocks (size,count)={blocks:?}: {why}"))
}

fn is_f1(sign: i8, s: usize) -> bool {
    (sign == 1 && s % 2 == 1) || (sign == -1 && s.is_multiple_of(2))
}

fn pm_angle(sign: i8) -> Real {
    if sign == 1 {
        Real::zero()
    } else {
        half()
    }
}

fn types_exact_pm(g: &RealMatrix, m: &RealMatrix, sign: i8, e: &Eigen) -> Result<Vec<IrrType>> {
    let n = m.rows;
    let lam = Real::int(sign as i64);
    let a = m.sub(&Matrix::identity(n).scale(&lam));
    let basis = a.pow(e.mult as u32).kernel();
    let b = Matrix::from_cols(&basis, n);
    let x = restrict_exact(m, &b)?;
    let u = x.scale(&lam).sub(&Matrix::identity(e.mult));
    let nm = log_unipotent(&u);
    let gb = b.transpose().mul(g).mul(&b);
    let blocks = e.blocks.clone().unwrap_or_default();
    let mut out = Vec::new();
    for &(s, c) in &blocks {
        if !is_f1(sign, s) {
            if c % 2 == 1 {
                return Err(unclassified(e.lambda, &blocks, "odd number of blocks of a paired size"));
            }
            out.extend(std::iter::repeat_n(IrrType::F2real { lambda: pm_angle(sign), n: s }, c / 2));
            continue;
        }
        let w = complement_exact(&nm, s);
        if w.len() != c {
            return Err(unclassified(e.lambda, &blocks, "complement has the wrong dimension"));
        }
        let wm = Matrix::from_cols(&w, e.mult);
        let h = wm.transpose().mul(&gb).mul(&nm.pow(s as u32 - 1)).mul(&wm);
        let sym = h.add(&h.transpose()).scale(&half());
        let (p, z, q) = exact_inertia(&sym);
        if z > 0 {
            return Err(unclassified(e.lambda, &blocks, "degenerate sign form"));
        }
        out.extend(std::iter::repeat_n(IrrType::F1 { lambda: pm_angle(sign), n: s, eps: 1 }, p));
        out.extend(std::iter::repeat_n(IrrType::F1 { lambda: pm_angle(sign), n: s, eps: -1 }, q));
    }
    Ok(out)
}

fn types_numeric(g: &RealMatrix, m: &RealMatrix, e: &Eigen) -> Result<Vec<IrrType>> {
    let n = m.rows;
    let mc = m.to_complex();
    let lam = e.lambda;
    let shifted = mc.sub(&Matrix::identity(n).scale(&lam));
    let b = numeric::null_space(&shifted.pow(e.mult as u32), e.mult);
    let x = numeric::cmat_mul(&numeric::cmat_mul(&b.adjoint(), &mc), &b);
    let mut u = cscale(&x, 1.0 / lam).sub(&Matrix::identity(e.mult));
    let drift = u.trace() / e.mult as f64;
    u = u.sub(&Matrix::identity(e.mult).scale(&drift));
    let nm = log_unipotent(&u);
    let blocks = match &e.blocks {
        Some(bl) => bl.clone(),
        None => {
            let mut k = vec![0];
            for j in 1..=e.mult {
                k.push(e.mult - numeric::rank(&nm.pow(j as u32), 1e-6));
                if k[j] == e.mult {
                    break;
                }
            }
            blocks_from_kernel_dims(&k)
        }
    };
    if blocks.iter().map(|&(s, c)| s * c).sum::<usize>() != e.mult {
        return Err(unclassified(lam, &blocks, "block sizes do not fill the eigenspace"));
    }
    let top = blocks.iter().map(|b| b.0).max().unwrap_or(0);
    let kdims = kernel_dims_from_blocks(&blocks, top);
    let kd = |j: usize| kdims[j.min(top)];
    let mut out = Vec::new();
    let gc = g.to_complex();
    let gb = numeric::cmat_mul(&numeric::cmat_mul(&b.transpose(), &gc), &b.conj());
    for &(s, c) in &blocks {
        match &e.kind {
            Kind::OffReal(v) => {
                out.extend(std::iter::repeat_n(IrrType::F2hyper { value: *v, n: s }, c));
                continue;
            }
            Kind::OffComplex(z) => {
                out.extend(std::iter::repeat_n(IrrType::F4hyper { re: z.re, im: z.im, n: s }, c));
                continue;
            }
            Kind::Pm(sign) if !is_f1(*sign, s) => {
                if c % 2 == 1 {
                    return Err(unclassified(lam, &blocks, "odd number of blocks of a paired size"));
                }
                out.extend(std::iter::repeat_n(IrrType::F2real { lambda: pm_angle(*sign), n: s }, c / 2));
                continue;
            }
            _ => {}
        }
        let w = complement_numeric(&nm, s, c, &kd);
        let nw = numeric::cmat_mul(&nm.pow(s as u32 - 1), &w);
        let mut h = numeric::cmat_mul(&numeric::cmat_mul(&w.transpose(), &gb), &nw.conj());
        if let Kind::Circle(theta) = &e.kind {
            let z0 = numeric::from_turns(zeta_ref_angle(theta, s).to_f64());
            h = cscale(&h, 1.0 / z0);
        }
        let (p, z, q) = numeric::hermitian_inertia(&h, 1e-7);
        if z > 0 {
            return Err(unclassified(lam, &blocks, "degenerate sign form"));
        }
        match &e.kind {
            Kind::Pm(sign) => {
                out.extend(std::iter::repeat_n(IrrType::F1 { lambda: pm_angle(*sign), n: s, eps: 1 }, p));
                out.extend(std::iter::repeat_n(IrrType::F1 { lambda: pm_angle(*sign), n: s, eps: -1 }, q));
            }
            Kind::Circle(theta) => {
                let zr = zeta_ref_angle(theta, s);
                let t = IrrType::F2complex { lambda: theta.clone(), n: s, zeta: zr.clone() };
                out.extend(std::iter::repeat_n(t, p));
                let t = IrrType::F2complex { lambda: theta.clone(), n: s, zeta: wrap(zr + half()) };
                out.extend(std::iter::repeat_n(t, q));
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

/// Decomposition into irreducible pairs. Exact input gets exact eigenvalue
/// angles and exact Jordan data for cyclotomic eigenvalues; the sign of
/// `λ = ±1` blocks is then exact too, other signs are read off a
/// numerically computed Hermitian form.
pub fn classify(p: &SeifertPair, tol: f64) -> Result<Vec<IrrType>> {
    let forms = monodromy_and_forms(p)?;
    let exact = p.g.is_exact();
    let eigs = if exact { exact_eigen(&forms.m, tol) } else { numeric_eigen(&forms.m, tol) };
    let mut out = Vec::new();
    for e in &eigs {
        let ts = match e.kind {
            Kind::Pm(sign) if exact && e.blocks.is_some() => types_exact_pm(&p.g, &forms.m, sign, e)?,
            _ => types_numeric(&p.g, &forms.m, e)?,
        };
        out.extend(ts);
    }
    let dim: usize = out.iter().map(IrrType::dim).sum();
    if dim != p.n() {
        return Err(Error::Unclassified(format!("types cover dimension {dim} of {}", p.n())));
    }
    out.sort_by(IrrType::sort_cmp);
    Ok(out)
}

pub fn iso_equal(a: &SeifertPair, b: &SeifertPair) -> Result<bool> {
    Ok(same_class(&classify(a, CIRCLE_TOL)?, &classify(b, CIRCLE_TOL)?))
}

/// One block of an enhancement: a basis (columns) of the subspace and the
/// ladder it carries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnhancementBlock {
    pub basis: RealMatrix,
    pub ladder: SppLadder,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enhancement {
    pub m: i64,
    pub blocks: Vec<EnhancementBlock>,
}

fn negligible(x: &RealMatrix, scale: f64) -> bool {
    if x.is_exact() {
        x.data.iter().all(Real::is_zero)
    } else {
        x.max_abs() <= 1e-7 * scale.max(1.0)
    }
}

/// Structure of `e` plus, per block, the sign data of the polarized
/// (`signed = false`) or signed polarized formula.
pub fn check_enhancement(p: &SeifertPair, e: &Enhancement, signed: bool) -> bool {
    let n = p.n();
    if e.blocks.iter().map(|b| b.basis.cols).sum::<usize>() != n || e.blocks.iter().any(|b| b.basis.rows != n) {
        return false;
    }
    let scale = p.g.max_abs();
    for (i, a) in e.blocks.iter().enumerate() {
        for b in &e.blocks[i + 1..] {
            let x = a.basis.transpose().mul(&p.g).mul(&b.basis);
            let y = b.basis.transpose().mul(&p.g).mul(&a.basis);
            if !negligible(&x, scale) || !negligible(&y, scale) {
                return false;
            }
        }
    }
    e.blocks.iter().all(|b| {
        if b.ladder.m != e.m {
            return false;
        }
        let expected = type_from_ladder(&b.ladder, signed);
        match p.restrict(&b.basis).and_then(|r| classify(&r, CIRCLE_TOL)) {
            Ok(ts) => !ts.is_empty() && ts.iter().all(|t| *t == expected),
            Err(_) => false,
        }
    })
}

/// A semiorthogonal basis `v_1..v_n`: `L(v_i, v_j) = 0` for `i < j`,
/// `L(v_j, v_j) = ε_j |L(v_j, v_j)|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Semiorthogonal {
    pub vectors: RealMatrix,
    pub eps: Vec<i8>,
}

impl Semiorthogonal {
    /// `U_j` spanned by the first `j` vectors.
    pub fn flag(&self) -> Vec<RealMatrix> {
        (1..=self.vectors.cols).map(|j| self.vectors.select_cols(&(0..j).collect::<Vec<_>>())).collect()
    }

    /// Basis with `L(v_j, v_j) = ε_j`.
    pub fn normalized(&self, p: &SeifertPair) -> Matrix<f64> {
        let v = self.vectors.to_f64();
        let g = p.g.to_f64();
        let gram = v.transpose().mul(&g).mul(&v);
        Matrix::from_fn(v.rows, v.cols, |i, j| v.get(i, j) / gram.get(j, j).abs().sqrt())
    }

    /// Same lines `H^(j)` (the basis is only defined up to scaling).
    pub fn same_splitting(&self, o: &Semiorthogonal) -> bool {
        self.vectors.rows == o.vectors.rows
            && self.vectors.cols == o.vectors.cols
            && (0..self.vectors.cols).all(|j| {
                let two = Matrix::from_cols(&[self.vectors.col(j), o.vectors.col(j)], self.vectors.rows);
                two.rank() == 1
            })
    }
}

pub fn semiorthogonal_from_basis(p: &SeifertPair, basis: &RealMatrix) -> Result<Semiorthogonal> {
    let n = p.n();
    if basis.rows != n || basis.cols != n || basis.rank() != n {
        return Err(Error::Dimension("need n independent vectors".into()));
    }
    let gram = basis.transpose().mul(&p.g).mul(basis);
    let scale = p.g.max_abs() * basis.max_abs() * basis.max_abs();
    for i in 0..n {
        for j in i + 1..n {
            let v = gram.get(i, j);
            if !(v.is_zero() || (!v.is_exact() && v.to_f64().abs() <= 1e-9 * scale.max(1.0))) {
                return Err(Error::Invalid(format!("L(v_{}, v_{}) = {v} is not zero", i + 1, j + 1)));
            }
        }
    }
    let eps = (0..n)
        .map(|j| match gram.get(j, j).sign() {
            0 => Err(Error::DegenerateFlag(j + 1)),
            s => Ok(s as i8),
        })
        .collect::<Result<Vec<i8>>>()?;
    Ok(Semiorthogonal { vectors: basis.clone(), eps })
}

/// `H^(j) = U_j ∩ U_{j-1}^{⊥R}`, `U^{⊥R} = {b : L(U, b) = 0}`. The flag
/// is given as bases of `U_1 ⊂ ... ⊂ U_n`.
pub fn semiorthogonal_from_flag(p: &SeifertPair, flag: &[RealMatrix]) -> Result<Semiorthogonal> {
    let n = p.n();
    if flag.len() != n {
        return Err(Error::Dimension(format!("a complete flag has {n} members, got {}", flag.len())));
    }
    for (j, u) in flag.iter().enumerate() {
        if u.rows != n || u.cols != j + 1 || u.rank() != j + 1 {
            return Err(Error::Dimension(format!("U_{} must have dimension {}", j + 1, j + 1)));
        }
        if j > 0 && flag[j - 1].hcat(u).rank() != j + 1 {
            return Err(Error::Invalid(format!("U_{} is not contained in U_{}", j, j + 1)));
        }
    }
    let mut cols = Vec::with_capacity(n);
    for (j, u) in flag.iter().enumerate() {
        let guu = u.transpose().mul(&p.g).mul(u);
        let degenerate = if guu.is_exact() {
            guu.det().is_zero()
        } else {
            let sv = numeric::singular_values(&guu.to_complex());
            sv.last().copied().unwrap_or(0.0) <= 1e-9 * sv.first().copied().unwrap_or(0.0).max(1.0)
        };
        if degenerate {
            return Err(Error::DegenerateFlag(j + 1));
        }
        let v = if j == 0 {
            u.col(0)
        } else {
            let cond = flag[j - 1].transpose().mul(&p.g).mul(u);
            let ker = cond.kernel();
            if ker.len() != 1 {
                return Err(Error::DegenerateFlag(j + 1));
            }
            u.mul_vec(&ker[0])
        };
        cols.push(v);
    }
    semiorthogonal_from_basis(p, &Matrix::from_cols(&cols, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Real;

    fn fr(a: i64, b: i64) -> Real {
        Real::frac(a, b)
    }

    fn stokes2(a: i64) -> SeifertPair {
        SeifertPair::from_stokes(&Matrix::from_i64_rows(&[vec![1, a], vec![0, 1]])).unwrap()
    }

    fn f1(lambda: i64, n: usize, eps: i8) -> IrrType {
        IrrType::F1 { lambda: if lambda == 1 { Real::zero() } else { half() }, n, eps }
    }

    #[test]
    fn forms_of_2x2() {
        let f = monodromy_and_forms(&stokes2(3)).unwrap();
        assert_eq!(f.m, Matrix::from_i64_rows(&[vec![1 - 9, -3], vec![3, 1]]));
        let f = monodromy_and_forms(&SeifertPair::new(Matrix::identity(3)).unwrap()).unwrap();
        assert_eq!(f.m, Matrix::identity(3));
        assert!(f.i_a.data.iter().all(Real::is_zero));
    }

    #[test]
    fn table_types() {
        let e3 = SeifertPair::new(Matrix::identity(3)).unwrap();
        assert_eq!(format_class(&classify(&e3, CIRCLE_TOL).unwrap()), "3·Seif(1,1,1,1)");
        let t = classify(&stokes2(2), CIRCLE_TOL).unwrap();
        assert_eq!(t, vec![f1(-1, 2, 1)]);
        assert_eq!(classify(&stokes2(-2), CIRCLE_TOL).unwrap(), vec![f1(-1, 2, 1)]);
        let s = Matrix::from_i64_rows(&[vec![1, 2, 2], vec![0, 1, 2], vec![0, 0, 1]]);
        let t = classify(&SeifertPair::from_stokes(&s).unwrap(), CIRCLE_TOL).unwrap();
        assert_eq!(format_class(&t), "Seif(1,1,1,1) + Seif(-1,2,1)");
    }

    #[test]
    fn elliptic_2x2() {
        // a = 1: α_1 = 1/6, type Seif(e^{-2πi/6}, 2, 1, -ζ_ref)
        let t = classify(&stokes2(1), CIRCLE_TOL).unwrap();
        assert_eq!(t.len(), 1);
        let want = type_from_ladder(&SppLadder::new(fr(1, 6), 1, 0), false);
        assert_eq!(t[0], want);
        assert_eq!(type_signature(&t[0]), (2, 0, 0));
        assert_eq!(classify(&stokes2(-1), CIRCLE_TOL).unwrap()[0], want);
    }

    #[test]
    fn hyperbolic_2x2() {
        let t = classify(&stokes2(3), CIRCLE_TOL).unwrap();
        assert!(matches!(t[0], IrrType::F2hyper { n: 1, .. }), "{t:?}");
        assert_eq!(class_signature(&t), (1, 0, 1));
    }

    #[test]
    fn signature_rows() {
        assert_eq!(type_signature(&f1(1, 1, 1)), (1, 0, 0));
        assert_eq!(type_signature(&IrrType::F2real { lambda: half(), n: 1 }), (0, 2, 0));
        assert_eq!(type_signature(&f1(-1, 2, 1)), (1, 1, 0));
        assert_eq!(type_signature(&f1(1, 3, 1)), (1, 0, 2));
        assert_eq!(type_signature(&f1(1, 3, -1)), (2, 0, 1));
    }

    #[test]
    fn ladder_types() {
        let l = SppLadder::new(fr(-1, 2), 1, 1);
        assert_eq!(type_from_ladder(&l, false), f1(-1, 2, 1));
        assert_eq!(type_from_ladder(&l, true), f1(-1, 2, -1));
        assert_eq!(type_from_ladder(&SppLadder::new(Real::zero(), 1, 0), false), f1(1, 1, 1));
        for t in [type_from_ladder(&SppLadder::new(fr(1, 6), 1, 0), false), type_from_ladder(&SppLadder::new(fr(-2, 5), 1, 2), true)] {
            t.validate().unwrap();
        }
    }

    #[test]
    fn spp_classes() {
        let spp = Spp::from_list(&[(fr(-1, 2), 2), (fr(1, 2), 0)]);
        assert_eq!(class_from_spp(&spp, 1, false).unwrap(), vec![f1(-1, 2, 1)]);
        let spp = Spp::from_list(&[(Real::zero(), 1), (Real::zero(), 1)]);
        assert_eq!(format_class(&class_from_spp(&spp, 1, false).unwrap()), "2·Seif(1,1,1,1)");
        let pair = Spp::from_list(&[(fr(-1, 3), 1), (fr(1, 3), 1)]);
        let shifted = Spp::from_list(&[(fr(5, 3), 1), (fr(1, 3), 1)]);
        assert_eq!(class_from_spp(&pair, 1, false).unwrap(), class_from_spp(&shifted, 1, false).unwrap());
        let lone = Spp::from_list(&[(fr(-1, 3), 1)]);
        assert!(matches!(class_from_spp(&lone, 1, false), Err(Error::NotLadderComposed { .. })));
    }

    #[test]
    fn enhancement_signs() {
        let p = stokes2(2);
        let e = Enhancement {
            m: 1,
            blocks: vec![EnhancementBlock { basis: Matrix::identity(2), ladder: SppLadder::new(fr(-1, 2), 1, 1) }],
        };
        assert!(check_enhancement(&p, &e, false));
        assert!(!check_enhancement(&p, &e, true));
        let p = SeifertPair::new(Matrix::identity(1)).unwrap();
        let e = Enhancement {
            m: 1,
            blocks: vec![EnhancementBlock { basis: Matrix::identity(1), ladder: SppLadder::new(Real::zero(), 1, 0) }],
        };
        assert!(check_enhancement(&p, &e, false) && check_enhancement(&p, &e, true));
    }

    #[test]
    fn semiorthogonal_data() {
        let s = Matrix::from_i64_rows(&[vec![1, 3, -1], vec![0, 1, 2], vec![0, 0, 1]]);
        let p = SeifertPair::from_stokes(&s).unwrap();
        let d = semiorthogonal_from_basis(&p, &Matrix::identity(3)).unwrap();
        assert_eq!(d.eps, vec![1, 1, 1]);
        let back = semiorthogonal_from_flag(&p, &d.flag()).unwrap();
        assert!(back.same_splitting(&d));
        let flipped = Matrix::from_i64_rows(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]);
        assert!(semiorthogonal_from_basis(&p, &flipped).unwrap().same_splitting(&d));
        let h = SeifertPair::new(Matrix::from_i64_rows(&[vec![0, 1], vec![1, 0]])).unwrap();
        let flag = vec![Matrix::from_i64_rows(&[vec![1], vec![0]]), Matrix::identity(2)];
        assert_eq!(semiorthogonal_from_flag(&h, &flag), Err(Error::DegenerateFlag(1)));
    }

    #[test]
    fn exact_inertia_counts() {
        let h = Matrix::from_i64_rows(&[vec![2, 1, 0], vec![1, -3, 0], vec![0, 0, 0]]);
        assert_eq!(exact_inertia(&h), (1, 1, 1));
    }
}
