//! Polynomials with all roots on the unit circle, companion matrices and
//! Jordan chains of companion matrices.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{cyclotomic_factors, Cyclo};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Poly};
use crate::numeric;
use crate::real::{q, qi, Rational, Real};

pub type RealPoly = Poly<Real>;
pub type RealMatrix = Matrix<Real>;

/// Angles closer than this (in turns) are merged into one root.
pub const ANGLE_MERGE: f64 = 1e-7;

/// Sorted `(β, multiplicity)` list, angles strictly increasing in `[0,1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleMultiset {
    pub entries: Vec<(Real, usize)>,
}

impl AngleMultiset {
    pub fn from_list(mut angles: Vec<Real>) -> Self {
        angles.sort_by(|a, b| a.cmp_tol(b));
        let mut entries: Vec<(Real, usize)> = Vec::new();
        for a in angles {
            match entries.last_mut() {
                Some((b, m)) if same_angle(b, &a) => *m += 1,
                _ => entries.push((a, 1)),
            }
        }
        // 0 and values just below 1 are the same point
        if entries.len() > 1 {
            let last = entries.len() - 1;
            if same_angle(&entries[0].0, &entries[last].0) {
                let m = entries.pop().unwrap().1;
                entries[0].1 += m;
            }
        }
        AngleMultiset { entries }
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Flat sorted list with repetition.
    pub fn flatten(&self) -> Vec<Real> {
        self.entries.iter().flat_map(|(a, m)| std::iter::repeat_n(a.clone(), *m)).collect()
    }

    pub fn multiplicity(&self, angle: &Real) -> usize {
        self.entries.iter().find(|(a, _)| same_angle(a, angle)).map_or(0, |e| e.1)
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|(a, _)| a.is_exact())
    }
}

/// Equality of angles modulo 1.
pub fn same_angle(a: &Real, b: &Real) -> bool {
    match (a, b) {
        (Real::Q(x), Real::Q(y)) => (x - y).is_integer(),
        _ => numeric::turn_diff(a.to_f64(), b.to_f64()).abs() <= ANGLE_MERGE,
    }
}

/// `∏ (x^r - 1)^e` for `e = ±1`, expanded with integer coefficients.
pub fn expand_signed_product(factors: &[(u64, i32)]) -> Result<RealPoly> {
    let mut c: Vec<i128> = vec![1];
    for &(r, e) in factors.iter().filter(|f| f.1 > 0) {
        assert!(r > 0 && e == 1);
        let r = r as usize;
        let mut next = vec![0i128; c.len() + r];
        for (i, &v) in c.iter().enumerate() {
            next[i] = next[i].checked_sub(v).ok_or(Error::Overflow)?;
            next[i + r] = next[i + r].checked_add(v).ok_or(Error::Overflow)?;
        }
        c = next;
    }
    for &(r, e) in factors.iter().filter(|f| f.1 < 0) {
        assert!(r > 0 && e == -1);
        let ru = r as usize;
        if c.len() <= ru {
            return Err(Error::NotPolynomial(r));
        }
        // c = qt * (x^r - 1): top-down, qt[i - r] = c[i] + qt[i]
        let qlen = c.len() - ru;
        let mut qt = vec![0i128; qlen];
        for i in (ru..c.len()).rev() {
            let above = if i < qlen { qt[i] } else { 0 };
            qt[i - ru] = c[i].checked_add(above).ok_or(Error::Overflow)?;
        }
        for i in 0..ru {
            let above = if i < qlen { qt[i] } else { 0 };
            if c[i] + above != 0 {
                return Err(Error::NotPolynomial(r));
            }
        }
        c = qt;
    }
    let coeffs: Vec<Real> = c
        .iter()
        .map(|&v| i64::try_from(v).map(Real::int).map_err(|_| Error::Overflow))
        .collect::<Result<_>>()?;
    Ok(Poly::new(coeffs))
}

/// Root angles of `∏ (x^{r_k} - 1)^{e_k}` by inclusion–exclusion over
/// residues modulo the largest `r`.
pub fn signed_product_angles(factors: &[(u64, i32)]) -> Result<AngleMultiset> {
    let rmax = factors.iter().map(|f| f.0).max().unwrap_or(1);
    let mut entries = Vec::new();
    for delta in 0..rmax {
        let mut mult: i64 = 0;
        for &(r, e) in factors {
            if rmax % r != 0 {
                return Err(Error::Invalid(format!("{r} does not divide {rmax}")));
            }
            if delta % (rmax / r) == 0 {
                mult += e as i64;
            }
        }
        if mult < 0 {
            return Err(Error::NotPolynomial(rmax));
        }
        if mult > 0 {
            entries.push((Real::Q(q(delta as i64, rmax as i64)), mult as usize));
        }
    }
    Ok(AngleMultiset { entries })
}

fn numeric_angles(p: &RealPoly, tol: f64) -> Result<Vec<Real>> {
    let c = p.to_f64();
    let mut out = Vec::new();
    for z in numeric::roots(&c) {
        let dist = (z.norm() - 1.0).abs();
        if dist > tol {
            return Err(Error::RootOffCircle { root: format!("{z}"), distance: dist });
        }
        out.push(Real::F(numeric::angle_turns(z)));
    }
    Ok(out)
}

/// Degree bound for cyclotomic trial division: `φ(d) <= n` forces `d <= 2n^2`.
fn cyclotomic_bound(n: usize) -> u64 {
    (2 * n * n + 2) as u64
}

/// All roots of `p` as angles `β` with root `e^{-2πiβ}`.
///
/// Exact polynomials get exact angles for their cyclotomic part; any
/// remaining factor is solved numerically and checked against `tol`.
pub fn unit_circle_angles(p: &RealPoly, tol: f64) -> Result<AngleMultiset> {
    if p.degree() == 0 {
        return Ok(AngleMultiset { entries: vec![] });
    }
    if !p.is_exact() {
        return Ok(AngleMultiset::from_list(numeric_angles(p, tol)?));
    }
    let (cyc, rest) = cyclotomic_factors(p, cyclotomic_bound(p.degree()));
    let mut angles = Vec::new();
    for (d, m) in cyc {
        for j in 0..d {
            if num_integer::gcd(j, d) == 1 {
                for _ in 0..m {
                    angles.push(Real::Q(q(j as i64, d as i64)));
                }
            }
        }
    }
    if rest.degree() > 0 {
        for (mult, f) in rest.squarefree() {
            for a in numeric_angles(&f, tol)? {
                for _ in 0..mult {
                    angles.push(a.clone());
                }
            }
        }
    }
    Ok(AngleMultiset::from_list(angles))
}

/// `∏ (x - e^{-2πiβ_j})`. Exact when the angles are rational and the
/// product has rational coefficients, floating otherwise.
pub fn poly_from_angles(angles: &[Real]) -> RealPoly {
    if angles.iter().all(Real::is_exact) {
        let rats: Vec<Rational> = angles.iter().map(|a| a.as_rational().unwrap().clone()).collect();
        if let Some(p) = crate::cyclo::product_of_roots(&rats) {
            return p;
        }
    }
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for a in angles {
        let k = numeric::from_turns(a.to_f64());
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, v) in c.iter().enumerate() {
            next[i + 1] += v;
            next[i] -= v * k;
        }
        c = next;
    }
    Poly::new(c.iter().map(|z| Real::F(z.re)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PalindromeClass {
    /// 1 for palindromic, 2 for antipalindromic; `None` if neither or a
    /// root leaves the circle.
    pub k: Option<u8>,
    pub p0: Real,
}

fn coeff_symmetry(p: &RealPoly, sign: i64, tol: f64) -> bool {
    let n = p.degree();
    (0..=n).all(|j| {
        let a = p.coeff(j);
        let b = p.coeff(n - j) * Real::int(sign);
        match (&a, &b) {
            (Real::Q(x), Real::Q(y)) => x == y,
            _ => (a.to_f64() - b.to_f64()).abs() <= tol * 1f64.max(a.to_f64().abs()),
        }
    })
}

/// Exact test that every root of a (anti)palindromic rational polynomial
/// lies on the unit circle: strip `x ± 1`, substitute `y = x + 1/x` and
/// count real roots of the result in `[-2, 2]` with Sturm sequences.
pub fn roots_on_circle_exact(p: &RealPoly) -> bool {
    let mut f = p.clone();
    let xm1 = Poly::from_i64(&[-1, 1]);
    let xp1 = Poly::from_i64(&[1, 1]);
    loop {
        if f.degree() == 0 {
            return true;
        }
        if let Some(g) = f.div_exact(&xm1) {
            f = g;
            continue;
        }
        if let Some(g) = f.div_exact(&xp1) {
            f = g;
            continue;
        }
        break;
    }
    if f.degree() % 2 == 1 || !coeff_symmetry(&f, 1, 0.0) {
        return false;
    }
    let d = f.degree() / 2;
    // x^{-d} f = c_d + Σ c_{d+j} P_j(y), P_0 = 2, P_1 = y, P_{j+1} = y P_j - P_{j-1}
    let y = Poly::from_i64(&[0, 1]);
    let mut h = Poly::constant(f.coeff(d));
    let (mut pm1, mut pj) = (Poly::from_i64(&[2]), y.clone());
    for j in 1..=d {
        h = h.add(&pj.scale(&f.coeff(d + j)));
        let next = y.mul(&pj).sub(&pm1);
        pm1 = pj;
        pj = next;
    }
    let mut total = 0;
    for (mult, g) in h.squarefree() {
        total += mult * real_roots_in(&g, -2, 2);
    }
    total == d
}

/// Distinct real roots of a squarefree exact polynomial in `[a, b]`.
fn real_roots_in(g: &RealPoly, a: i64, b: i64) -> usize {
    let mut g = g.clone();
    let mut count = 0;
    for end in [a, b] {
        let lin = Poly::from_i64(&[-end, 1]);
        if let Some(h) = g.div_exact(&lin) {
            g = h;
            count += 1;
        }
    }
    if g.degree() == 0 {
        return count;
    }
    let mut seq = vec![g.clone(), g.derivative()];
    while seq.last().unwrap().degree() > 0 {
        let n = seq.len();
        let r = seq[n - 2].divrem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&Real::int(-1)));
    }
    let changes = |x: i64| {
        let signs: Vec<i32> =
            seq.iter().map(|p| p.eval(&Real::int(x)).sign()).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    count + changes(a) - changes(b)
}

/// Classifies `p` as palindromic (`k = 1`) or antipalindromic (`k = 2`)
/// with all roots on the unit circle.
pub fn palindrome_class(p: &RealPoly, tol: f64) -> PalindromeClass {
    let p0 = p.coeff(0);
    let k = if coeff_symmetry(p, 1, tol) {
        Some(1)
    } else if coeff_symmetry(p, -1, tol) {
        Some(2)
    } else {
        None
    };
    let on_circle = match k {
        None => false,
        Some(_) if p.is_exact() => roots_on_circle_exact(p),
        Some(_) => unit_circle_angles(p, tol.max(1e-7)).is_ok(),
    };
    let k = if on_circle { k } else { None };
    if let Some(k) = k {
        let expect = if k == 1 { 1 } else { -1 };
        assert!(
            (p0.to_f64() - expect as f64).abs() <= 1e-6,
            "p_0 = {p0} contradicts k = {k}"
        );
    }
    PalindromeClass { k, p0 }
}

/// Top row `(-p_{n-1}, ..., -p_0)`, identity block below.
pub fn companion_matrix(p: &RealPoly) -> RealMatrix {
    let n = p.degree();
    assert!(n >= 1);
    let lead = p.lead();
    Matrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -(p.coeff(n - 1 - j) / lead.clone())
        } else if j + 1 == i {
            Real::one()
        } else {
            Real::zero()
        }
    })
}

/// `(i)_j = i (i-1) ... (i-j+1)`
pub fn falling(i: usize, j: usize) -> u128 {
    (0..j).map(|t| (i as u128).saturating_sub(t as u128)).product()
}

fn chain_entries(n: usize, l: usize) -> Vec<Vec<(usize, u128)>> {
    // v_j[row] = (n-1-row)_j κ^{n-1-row} for n-1-row >= j
    (0..=l)
        .map(|j| {
            (0..n)
                .map(|row| {
                    let e = n - 1 - row;
                    (e, if e >= j { falling(e, j) } else { 0 })
                })
                .collect()
        })
        .collect()
}

/// Jordan chain `v_0..v_l` of the companion matrix at the root `κ`,
/// verified against `(κ^{-1}R - E) v_j = j v_{j-1}`.
pub fn jordan_chain_vectors(p: &RealPoly, kappa: Complex64, l: usize) -> Result<Vec<Vec<Complex64>>> {
    let n = p.degree();
    // multiplicity check on p, p', ..., p^{(l)}
    let mut d = p.clone();
    let scale = p.coeffs.iter().map(|c| c.to_f64().abs()).fold(1.0, f64::max);
    for i in 0..=l {
        let v = d.eval_complex(kappa).norm();
        if v > 1e-6 * scale * (1 + i) as f64 * (n as f64).powi(i as i32) {
            return Err(Error::MultiplicityTooLow { kappa: format!("{kappa}"), needed: l + 1 });
        }
        d = d.derivative();
    }
    let vs: Vec<Vec<Complex64>> = chain_entries(n, l)
        .into_iter()
        .map(|v| v.into_iter().map(|(e, c)| kappa.powu(e as u32) * c as f64).collect())
        .collect();
    let r = companion_matrix(p).to_complex();
    for j in 0..=l {
        let rv = r.mul_vec(&vs[j]);
        for row in 0..n {
            let lhs = rv[row] / kappa - vs[j][row];
            let rhs = if j == 0 { Complex64::new(0.0, 0.0) } else { vs[j - 1][row] * j as f64 };
            let size = 1f64.max(rhs.norm()).max(lhs.norm());
            if (lhs - rhs).norm() > 1e-6 * size {
                return Err(Error::MultiplicityTooLow { kappa: format!("{kappa}"), needed: l + 1 });
            }
        }
    }
    Ok(vs)
}

/// Exact Jordan chain at `κ = e^{-2πiθ}` for rational `θ`, in `Q(ζ_N)`.
pub fn jordan_chain_vectors_exact(p: &RealPoly, theta: &Rational, l: usize) -> Result<Vec<Vec<Cyclo>>> {
    if !p.is_exact() {
        return Err(Error::Invalid("exact chain needs rational coefficients".into()));
    }
    let n = p.degree();
    let order = theta.denom().to_usize().ok_or(Error::Overflow)?;
    let kappa = Cyclo::exp_turns(order, theta).expect("denominator divides order");
    let kinv = Cyclo::exp_turns(order, &-theta).unwrap();
    let pow = |e: usize| (0..e).fold(Cyclo::from_rational(order, qi(1)), |acc, _| acc.mul(&kappa));
    let mut d = p.clone();
    for _ in 0..=l {
        let val = d
            .coeffs
            .iter()
            .enumerate()
            .fold(Cyclo::zero(order), |acc, (i, c)| acc.add(&pow(i).scale(c.as_rational().unwrap())));
        if !val.is_zero() {
            return Err(Error::MultiplicityTooLow { kappa: format!("e^(-2πi·{theta})"), needed: l + 1 });
        }
        d = d.derivative();
    }
    let vs: Vec<Vec<Cyclo>> = chain_entries(n, l)
        .into_iter()
        .map(|v| v.into_iter().map(|(e, c)| pow(e).scale(&qi(c as i64))).collect())
        .collect();
    let r = companion_matrix(p);
    for j in 0..=l {
        for row in 0..n {
            let mut acc = Cyclo::zero(order);
            for col in 0..n {
                let rc = r.get(row, col).as_rational().unwrap();
                if !rc.is_zero() {
                    acc = acc.add(&vs[j][col].scale(rc));
                }
            }
            let lhs = acc.mul(&kinv).sub(&vs[j][row]);
            let rhs = if j == 0 {
                Cyclo::zero(order)
            } else {
                vs[j - 1][row].scale(&qi(j as i64))
            };
            if !lhs.sub(&rhs).is_zero() {
                return Err(Error::MultiplicityTooLow { kappa: format!("e^(-2πi·{theta})"), needed: l + 1 });
            }
        }
    }
    Ok(vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ang(v: &[(i64, i64, usize)]) -> Vec<(Real, usize)> {
        v.iter().map(|&(a, b, m)| (Real::frac(a, b), m)).collect()
    }

    #[test]
    fn signed_products() {
        assert_eq!(expand_signed_product(&[(1, 1)]).unwrap(), Poly::from_i64(&[-1, 1]));
        assert_eq!(expand_signed_product(&[(1, -1), (3, 1)]).unwrap(), Poly::from_i64(&[1, 1, 1]));
        assert_eq!(
            expand_signed_product(&[(1, 1), (3, -1), (6, 1)]).unwrap(),
            Poly::from_i64(&[-1, 1, 0, -1, 1])
        );
        assert!(matches!(expand_signed_product(&[(2, -1), (3, 1)]), Err(Error::NotPolynomial(_))));
    }

    #[test]
    fn angles_of_small_polys() {
        let a = unit_circle_angles(&Poly::from_i64(&[1, 1, 1]), 1e-9).unwrap();
        assert_eq!(a.entries, ang(&[(1, 3, 1), (2, 3, 1)]));
        let a = unit_circle_angles(&Poly::from_i64(&[-1, 3, -3, 1]), 1e-9).unwrap();
        assert_eq!(a.entries, ang(&[(0, 1, 3)]));
        let a = unit_circle_angles(&Poly::from_i64(&[1, 2, 1]), 1e-9).unwrap();
        assert_eq!(a.entries, ang(&[(1, 2, 2)]));
        assert!(a.is_exact());
        let off = unit_circle_angles(&Poly::from_i64(&[1, -3, 1]), 1e-9);
        assert!(matches!(off, Err(Error::RootOffCircle { .. })));
    }

    #[test]
    fn inclusion_exclusion_matches_expansion() {
        let f = [(1, 1), (3, -1), (6, 1)];
        let a = signed_product_angles(&f).unwrap();
        let b = unit_circle_angles(&expand_signed_product(&f).unwrap(), 1e-9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn palindromes() {
        assert_eq!(palindrome_class(&Poly::from_i64(&[1, 1, 1]), 1e-9).k, Some(1));
        assert_eq!(palindrome_class(&Poly::from_i64(&[-1, 1, 0, -1, 1]), 1e-9).k, Some(2));
        assert_eq!(palindrome_class(&Poly::from_i64(&[1, -3, 1]), 1e-9).k, None);
        // palindromic but with roots off the circle
        assert_eq!(palindrome_class(&Poly::from_i64(&[1, 5, 1]), 1e-9).k, None);
        assert!(roots_on_circle_exact(&Poly::from_i64(&[1, -1, 1, -1, 1])));
    }

    #[test]
    fn companion_shape() {
        let c = companion_matrix(&Poly::from_i64(&[1, 3, 1]));
        assert_eq!(c, Matrix::from_i64_rows(&[vec![-3, -1], vec![1, 0]]));
        assert_eq!(companion_matrix(&Poly::from_i64(&[-1, 1])), Matrix::from_i64_rows(&[vec![1]]));
    }

    #[test]
    fn chains() {
        let p = Poly::from_i64(&[1, -2, 1]);
        let v = jordan_chain_vectors(&p, Complex64::new(1.0, 0.0), 1).unwrap();
        assert_eq!(v[0], vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(v[1], vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let p = Poly::from_i64(&[1, 2, 1]);
        let v = jordan_chain_vectors(&p, Complex64::new(-1.0, 0.0), 1).unwrap();
        assert_eq!(v[0], vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(v[1], vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(jordan_chain_vectors(&Poly::from_i64(&[1, 1, 1]), Complex64::new(1.0, 0.0), 0).is_err());
        let exact = jordan_chain_vectors_exact(&Poly::from_i64(&[1, 2, 1]), &q(1, 2), 1).unwrap();
        assert_eq!(exact[1][0].as_rational(), Some(qi(-1)));
        assert!(jordan_chain_vectors_exact(&Poly::from_i64(&[1, 2, 1]), &q(1, 2), 2).is_err());
    }
}
