//! Chain type singularities `x_0^{a_0} + x_0 x_1^{a_1} + ... + x_{m-1} x_m^{a_m}`:
//! weights, Milnor number, the Stokes polynomial and its spectrum, the
//! quasihomogeneous spectrum, the monomial basis of the Jacobi algebra and
//! the chain graph on it.

use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hor::{recipe_spectrum, HorScal};
use crate::polycore::{expand_signed_product, signed_product_angles, RealMatrix, RealPoly};
use crate::real::{lcm_u64, q, qi, Rational, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainInvariants {
    pub a: Vec<i64>,
    /// `r_0..r_m` (`r_{-1} = 1` omitted)
    pub r: Vec<i64>,
    /// `μ_0..μ_m`
    pub mu: Vec<i64>,
    /// `w_0..w_m`
    pub w: Vec<Real>,
    pub milnor: i64,
}

pub fn check_exponents(a: &[i64]) -> Result<()> {
    if a.is_empty() || a[0] < 2 || a[1..].iter().any(|&x| x < 1) {
        return Err(Error::BadExponents(format!("{a:?}: need a_0 >= 2 and a_j >= 1")));
    }
    Ok(())
}

pub fn chain_invariants(a: &[i64]) -> Result<ChainInvariants> {
    check_exponents(a)?;
    let mut r = Vec::with_capacity(a.len());
    let mut mu = Vec::with_capacity(a.len());
    let mut w = Vec::with_capacity(a.len());
    let (mut r_prev, mut mu_prev) = (1i64, 1i64);
    let mut w_prev = qi(0);
    for &ak in a {
        let rk = r_prev.checked_mul(ak).ok_or(Error::Overflow)?;
        let wk = q(mu_prev, rk);
        // both forms of the weight recursion
        debug_assert_eq!(wk, (qi(1) - &w_prev) / qi(ak));
        let muk = rk - mu_prev;
        r.push(rk);
        mu.push(muk);
        w.push(Real::Q(wk.clone()));
        r_prev = rk;
        mu_prev = muk;
        w_prev = wk;
    }
    let milnor = *mu.last().unwrap();
    let prod = w.iter().fold(qi(1), |acc, wk| acc * (qi(1) / wk.as_rational().unwrap() - qi(1)));
    if prod != qi(milnor) {
        return Err(Error::Invalid(format!("{a:?}: μ recursion {milnor} disagrees with weights {prod}")));
    }
    Ok(ChainInvariants { a: a.to_vec(), r, mu, w, milnor })
}

/// The alternating sum `a_0...a_{k-1} - a_1...a_{k-1} + ... + (-1)^k`.
/// It agrees with the recursion for `μ` when all exponents are equal but
/// not in general; kept for comparison only.
pub fn rho(a: &[i64]) -> i64 {
    let k = a.len();
    (0..=k)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * a[i..].iter().product::<i64>()
        })
        .sum()
}

fn weights_rational(inv: &ChainInvariants) -> Vec<Rational> {
    inv.w.iter().map(|x| x.as_rational().unwrap().clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesPoly {
    pub p: RealPoly,
    pub k: u8,
    /// Root angles `δ_j / r_m`, increasing.
    pub angles: Vec<Real>,
}

fn stokes_factors(inv: &ChainInvariants) -> Vec<(u64, i32)> {
    let m = inv.a.len() as i64 - 1;
    let mut f = vec![(1u64, if (m + 1) % 2 == 0 { 1 } else { -1 })];
    for (k, &rk) in inv.r.iter().enumerate() {
        f.push((rk as u64, if (m - k as i64) % 2 == 0 { 1 } else { -1 }));
    }
    f
}

/// `∏_{k=-1}^m (x^{r_k} - 1)^{(-1)^{m-k}}`, with `k` read off `p(0)`.
pub fn stokes_poly(a: &[i64]) -> Result<StokesPoly> {
    let inv = chain_invariants(a)?;
    let factors = stokes_factors(&inv);
    let p = expand_signed_product(&factors)?;
    let ang = signed_product_angles(&factors)?;
    if ang.entries.iter().any(|e| e.1 != 1) {
        return Err(Error::Invalid(format!("{a:?}: repeated root")));
    }
    if p.degree() as i64 != inv.milnor || ang.total() as i64 != inv.milnor {
        return Err(Error::Invalid(format!("{a:?}: degree differs from μ")));
    }
    let k = if p.coeff(0) == Real::one() { 1 } else { 2 };
    Ok(StokesPoly { p, k, angles: ang.flatten() })
}

/// Spectrum of the Stokes matrix through the recipe applied to the exact
/// root angles (sorted, so `β` is the sorted angle list).
pub fn stokes_spectrum(a: &[i64]) -> Result<Vec<Real>> {
    let sp = stokes_poly(a)?;
    let b = HorScal::new(sp.k, sp.angles)?;
    Ok(recipe_spectrum(&b))
}

/// `∏ (u^{a_i} - 1) / ∏ (u^{b_j} - 1)` as an integer polynomial.
fn binomial_ratio(num: &[u64], den: &[u64]) -> Result<Vec<i128>> {
    let dn: u64 = num.iter().sum();
    let dd: u64 = den.iter().sum();
    if dd > dn {
        return Err(Error::NotPolynomial(dd));
    }
    let mut c: Vec<i128> = vec![1];
    for &e in num {
        let mut next = vec![0i128; c.len() + e as usize];
        for (i, &v) in c.iter().enumerate() {
            next[i] -= v;
            next[i + e as usize] += v;
        }
        c = next;
    }
    // power series division by (u^e - 1) = -(1 - u^e), truncated
    let len = (dn - dd + 1) as usize;
    let mut s: Vec<i128> = c.clone();
    s.resize(c.len().max(len), 0);
    for &e in den {
        let e = e as usize;
        for i in 0..s.len() {
            if i >= e {
                s[i] = s[i].checked_add(s[i - e]).ok_or(Error::Overflow)?;
            }
        }
        for v in s.iter_mut() {
            *v = -*v;
        }
    }
    s.truncate(len);
    // multiply back to confirm exactness
    let mut back = s.clone();
    for &e in den {
        let mut next = vec![0i128; back.len() + e as usize];
        for (i, &v) in back.iter().enumerate() {
            next[i] -= v;
            next[i + e as usize] += v;
        }
        back = next;
    }
    if back != c {
        return Err(Error::NotPolynomial(dd));
    }
    Ok(s)
}

/// Spectrum of a quasihomogeneous singularity with the given weights from
/// `Σ t^{α+1} = ∏ (t - t^w)/(t^w - 1)`, expanded in `u = t^{1/D}`.
pub fn qh_spectrum(w: &[Rational]) -> Result<Vec<Real>> {
    let mut d = 1u64;
    for x in w {
        if !(x.is_positive() && *x < qi(1)) {
            return Err(Error::Invalid(format!("weight {x} not in (0,1)")));
        }
        d = lcm_u64(d, x.denom().to_u64().ok_or(Error::Overflow)?);
    }
    let e: Vec<u64> = w.iter().map(|x| (x * qi(d as i64)).to_integer().to_u64().unwrap()).collect();
    let num: Vec<u64> = e.iter().map(|&ek| d - ek).collect();
    let shift: u64 = e.iter().sum();
    let c = binomial_ratio(&num, &e)?;
    let mut out = Vec::new();
    for (i, &v) in c.iter().enumerate() {
        if v < 0 {
            return Err(Error::Invalid("negative coefficient in the generating function".into()));
        }
        for _ in 0..v {
            out.push(Real::Q(q((i as u64 + shift) as i64, d as i64) - qi(1)));
        }
    }
    Ok(out)
}

pub fn chain_qh_spectrum(a: &[i64]) -> Result<Vec<Real>> {
    let inv = chain_invariants(a)?;
    qh_spectrum(&weights_rational(&inv))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub b: Vec<i64>,
}

impl Monomial {
    pub fn degree(&self, w: &[Rational]) -> Rational {
        self.b.iter().zip(w).fold(qi(0), |acc, (&bj, wj)| acc + qi(bj) * wj)
    }

    pub fn times(&self, g: &[i64]) -> Monomial {
        Monomial { b: self.b.iter().zip(g).map(|(x, y)| x + y).collect() }
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .b
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(j, &e)| if e == 1 { format!("x{j}") } else { format!("x{j}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

fn require_reduced(a: &[i64]) -> Result<()> {
    check_exponents(a)?;
    if a[0] < 3 || a[1..].iter().any(|&x| x < 2) {
        return Err(Error::ReductionRequired(a.to_vec()));
    }
    Ok(())
}

/// Monomials representing a basis of the Jacobi algebra, for `a_0 >= 3`,
/// `a_j >= 2`.
pub fn jacobi_basis(a: &[i64]) -> Result<Vec<Monomial>> {
    require_reduced(a)?;
    let m = a.len() - 1;
    let mut out = Vec::new();
    // family t: free exponents below position m-2t, the position m-2t capped
    // at a-2, then x_{m-2t+2}^{a-1} x_{m-2t+4}^{a-1} ... x_m^{a_m-1}
    let mut top = m as i64;
    while top >= 0 {
        let t = top as usize;
        let mut fixed = vec![0i64; m + 1];
        let mut j = t + 2;
        while j <= m {
            fixed[j] = a[j] - 1;
            j += 2;
        }
        let bounds: Vec<i64> = (0..=t).map(|j| if j == t { a[j] - 2 } else { a[j] - 1 }).collect();
        let mut cur = vec![0i64; t + 1];
        'outer: loop {
            let mut b = fixed.clone();
            b[..=t].copy_from_slice(&cur);
            out.push(Monomial { b });
            for i in 0..=t {
                if cur[i] < bounds[i] {
                    cur[i] += 1;
                    continue 'outer;
                }
                cur[i] = 0;
            }
            break;
        }
        top -= 2;
    }
    if m % 2 == 1 {
        let mut b = vec![0i64; m + 1];
        let mut j = 1;
        while j <= m {
            b[j] = a[j] - 1;
            j += 2;
        }
        out.push(Monomial { b });
    }
    let inv = chain_invariants(a)?;
    if out.len() as i64 != inv.milnor {
        return Err(Error::Invalid(format!("{a:?}: {} basis monomials but μ = {}", out.len(), inv.milnor)));
    }
    Ok(out)
}

/// `α_j = -1 + Σ w_k + deg_w m_j`, in basis order.
pub fn spectrum_from_basis(a: &[i64]) -> Result<Vec<Real>> {
    let inv = chain_invariants(a)?;
    let w = weights_rational(&inv);
    let base = w.iter().fold(qi(-1), |acc, x| acc + x);
    Ok(jacobi_basis(a)?.iter().map(|mono| Real::Q(&base + mono.degree(&w))).collect())
}

/// Exponent vector of the Laurent monomial `g(j)`.
pub fn edge_monomial(a: &[i64], j: usize) -> Vec<i64> {
    let m = a.len() - 1;
    let mut g = vec![0i64; m + 1];
    let same = (m - j).is_multiple_of(2);
    g[j] = if same { -1 } else { 1 };
    for k in j + 1..=m {
        let odd = (k - j) % 2 == 1;
        let mag = a[k] - 1;
        g[k] = match (same, odd) {
            (true, true) => -mag,
            (true, false) => mag,
            (false, true) => mag,
            (false, false) => -mag,
        };
    }
    if !same {
        g[m] -= 1;
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainGraph {
    pub vertices: Vec<Monomial>,
    /// `labels[i]` is the `j` of the edge from vertex `i` to `i+1`.
    pub labels: Vec<usize>,
    /// Weighted degree increments along the edges.
    pub increments: Vec<Real>,
}

/// Claim-style endpoints: `(start, end)` of the chain.
pub fn chain_endpoints(a: &[i64]) -> (Monomial, Monomial) {
    let m = a.len() - 1;
    let mut even = vec![0i64; m + 1];
    let mut odd = vec![0i64; m + 1];
    for j in 0..=m {
        if j % 2 == 0 {
            even[j] = a[j] - 1;
        } else {
            odd[j] = a[j] - 1;
        }
    }
    if m.is_multiple_of(2) {
        even[m] -= 1;
        (Monomial { b: even }, Monomial { b: odd })
    } else {
        (Monomial { b: odd }, Monomial { b: even })
    }
}

pub fn chain_graph(a: &[i64]) -> Result<ChainGraph> {
    let basis = jacobi_basis(a)?;
    let m = a.len() - 1;
    let inv = chain_invariants(a)?;
    let w = weights_rational(&inv);
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let gs: Vec<Vec<i64>> = (0..=m).map(|j| edge_monomial(a, j)).collect();
    let mut next: Vec<Option<(usize, usize)>> = vec![None; basis.len()];
    let mut indeg = vec![0usize; basis.len()];
    for (i, v) in basis.iter().enumerate() {
        for (j, g) in gs.iter().enumerate() {
            if let Some(&t) = index.get(&v.times(g)) {
                if next[i].is_some() {
                    return Err(Error::ChainBroken(format!("{v} has two outgoing edges")));
                }
                next[i] = Some((t, j));
                indeg[t] += 1;
            }
        }
    }
    if let Some(i) = indeg.iter().position(|&d| d > 1) {
        return Err(Error::ChainBroken(format!("{} has two incoming edges", basis[i])));
    }
    let starts: Vec<usize> = (0..basis.len()).filter(|&i| indeg[i] == 0).collect();
    if starts.len() != 1 {
        return Err(Error::ChainBroken(format!("{} vertices without incoming edge", starts.len())));
    }
    let (want_start, want_end) = chain_endpoints(a);
    let mut order = vec![starts[0]];
    let mut labels = Vec::new();
    let mut cur = starts[0];
    while let Some((t, j)) = next[cur] {
        order.push(t);
        labels.push(j);
        cur = t;
        if order.len() > basis.len() {
            return Err(Error::ChainBroken("cycle".into()));
        }
    }
    if order.len() != basis.len() {
        return Err(Error::ChainBroken(format!("chain covers {} of {} monomials", order.len(), basis.len())));
    }
    let vertices: Vec<Monomial> = order.iter().map(|&i| basis[i].clone()).collect();
    if vertices[0] != want_start {
        return Err(Error::ChainBroken(format!("starts at {} instead of {want_start}", vertices[0])));
    }
    if *vertices.last().unwrap() != want_end {
        return Err(Error::ChainBroken(format!("ends at {} instead of {want_end}", vertices.last().unwrap())));
    }
    let wm = w[m].clone();
    let mut increments = Vec::new();
    for (i, &j) in labels.iter().enumerate() {
        let inc = vertices[i + 1].degree(&w) - vertices[i].degree(&w);
        let want = if (m - j).is_multiple_of(2) { -wm.clone() } else { qi(1) - qi(2) * &wm };
        if inc != want {
            return Err(Error::ChainBroken(format!("edge {} -> {} has weight {inc}, expected {want}", vertices[i], vertices[i + 1])));
        }
        increments.push(Real::Q(inc));
    }
    Ok(ChainGraph { vertices, labels, increments })
}

/// Spectral numbers of `f` read along the chain, shifted by `-(m-1)/2`.
pub fn chain_ordered_spectrum(a: &[i64]) -> Result<Vec<Real>> {
    let g = chain_graph(a)?;
    let inv = chain_invariants(a)?;
    let w = weights_rational(&inv);
    let m = a.len() as i64 - 1;
    let base = w.iter().fold(qi(-1), |acc, x| acc + x) - q(m - 1, 2);
    Ok(g.vertices.iter().map(|v| Real::Q(&base + v.degree(&w))).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub suspensions: usize,
    /// `Sp(reduced) = Sp(original) + shift`
    pub shift: Real,
    pub reduced: Vec<i64>,
}

/// Strips `a_0 = 2` (one-fold suspension each) and interior `a_j = 1`
/// (two-fold suspension each) until `a_0 >= 3, a_j >= 2` or `A_1`.
pub fn reduce_chain(a: &[i64]) -> Result<Reduction> {
    check_exponents(a)?;
    let mut cur = a.to_vec();
    let mut susp = 0;
    let mut shift = qi(0);
    loop {
        if cur.len() == 1 {
            break;
        }
        if cur[0] == 2 {
            let mut next = vec![2 * cur[1]];
            next.extend_from_slice(&cur[2..]);
            cur = next;
            susp += 1;
            shift -= q(1, 2);
            continue;
        }
        match cur[1..].iter().position(|&x| x == 1) {
            None => break,
            Some(i) => {
                let j = i + 1;
                if j + 1 >= cur.len() {
                    return Err(Error::NotReducible(a.to_vec()));
                }
                let mut next = cur[..j - 1].to_vec();
                next.push(cur[j - 1] * cur[j + 1]);
                next.extend_from_slice(&cur[j + 2..]);
                cur = next;
                susp += 2;
                shift -= qi(1);
            }
        }
    }
    Ok(Reduction { suspensions: susp, shift: Real::Q(shift), reduced: cur })
}

pub fn sorted(mut v: Vec<Real>) -> Vec<Real> {
    v.sort_by(|x, y| x.cmp_tol(y));
    v
}

pub fn shifted(v: &[Real], s: &Real) -> Vec<Real> {
    v.iter().map(|x| x.clone() + s.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub a: Vec<i64>,
    pub mu: i64,
    pub k: u8,
    /// From the Stokes polynomial, in recipe order.
    pub sp_s: Vec<Real>,
    /// Quasihomogeneous spectrum of `f`, sorted.
    pub sp_f: Vec<Real>,
    /// `Sp(S) = Sp(f) - (m-1)/2` as multisets.
    pub stokes_matches: bool,
    /// Basis route (after reduction if needed) against the generating
    /// function; `None` if the tuple cannot be reduced.
    pub basis_matches: Option<bool>,
    /// Chain order against recipe order, where the chain exists.
    pub order_matches: Option<bool>,
    pub reduction: Option<Reduction>,
    pub holds: bool,
}

pub fn verify_spectrum_shift(a: &[i64]) -> Result<ShiftReport> {
    let inv = chain_invariants(a)?;
    let m = a.len() as i64 - 1;
    let sp = stokes_poly(a)?;
    let sp_s = recipe_spectrum(&HorScal::new(sp.k, sp.angles.clone())?);
    let sp_f = sorted(qh_spectrum(&weights_rational(&inv))?);
    let target = sorted(shifted(&sp_f, &Real::frac(-(m - 1), 2)));
    let stokes_matches = sorted(sp_s.clone()) == target;
    let (basis_matches, order_matches, reduction) = match require_reduced(a) {
        Ok(()) => {
            let b = sorted(spectrum_from_basis(a)?);
            let ordered = chain_ordered_spectrum(a)?;
            (Some(b == sp_f), Some(ordered == sp_s), None)
        }
        Err(_) => match reduce_chain(a) {
            Ok(red) => {
                let want = sorted(shifted(&sp_f, &red.shift));
                let got = if red.reduced == [2] {
                    chain_qh_spectrum(&red.reduced)?
                } else {
                    sorted(spectrum_from_basis(&red.reduced)?)
                };
                let got = sorted(got);
                // the reduced Stokes polynomial has the same spectrum
                let red_s = sorted(stokes_spectrum(&red.reduced)?);
                (Some(got == want && red_s == sorted(sp_s.clone())), None, Some(red))
            }
            Err(Error::NotReducible(_)) => (None, None, None),
            Err(e) => return Err(e),
        },
    };
    let holds = stokes_matches && basis_matches != Some(false) && order_matches != Some(false);
    Ok(ShiftReport {
        a: a.to_vec(),
        mu: inv.milnor,
        k: sp.k,
        sp_s,
        sp_f,
        stokes_matches,
        basis_matches,
        order_matches,
        reduction,
        holds,
    })
}

/// All `(a_0, ..., a_m)` with `a_0 ∈ [a0_min, a0_max]`,
/// `a_j ∈ [aj_min, aj_max]`, `m <= m_max`.
pub fn exponent_grid(a0_min: i64, a0_max: i64, aj_min: i64, aj_max: i64, m_max: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = (a0_min..=a0_max).map(|a0| vec![a0]).collect();
    let mut frontier = out.clone();
    for _ in 0..m_max {
        let mut next = Vec::new();
        for t in &frontier {
            for aj in aj_min..=aj_max {
                let mut u = t.clone();
                u.push(aj);
                next.push(u);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Lexicographic tensor product of two Stokes matrices.
pub fn thom_sebastiani(s1: &RealMatrix, s2: &RealMatrix) -> RealMatrix {
    s1.kron(s2)
}

/// `S^{-1} S^t`
pub fn monodromy(s: &RealMatrix) -> Result<RealMatrix> {
    Ok(s.inverse()?.mul(&s.transpose()))
}

/// `M(S1 ⊗ S2) = M(S1) ⊗ M(S2)`.
pub fn tensor_monodromy_holds(s1: &RealMatrix, s2: &RealMatrix) -> Result<bool> {
    let lhs = monodromy(&thom_sebastiani(s1, s2))?;
    let rhs = monodromy(s1)?.kron(&monodromy(s2)?);
    Ok(lhs.approx_eq(&rhs))
}

/// `{α_i + α'_j + 1}`
pub fn qh_ts_spectrum(w1: &[Rational], w2: &[Rational]) -> Result<Vec<Real>> {
    let a = qh_spectrum(w1)?;
    let b = qh_spectrum(w2)?;
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in &a {
        for y in &b {
            out.push(x.clone() + y.clone() + Real::one());
        }
    }
    Ok(sorted(out))
}

/// HOR matrix of `(x^{k+1}-1)/(x-1)`, a Stokes matrix for `A_k`.
pub fn a_k_stokes(k: usize) -> Result<RealMatrix> {
    let p = expand_signed_product(&[(k as u64 + 1, 1), (1, -1)])?;
    Ok(crate::hor::poly_to_matrix(&p, 1)?.s)
}

pub fn is_simple_roots(p: &RealPoly) -> bool {
    let d = p.derivative();
    p.gcd(&d).degree() == 0
}

pub fn rational_weights(a: &[i64]) -> Result<Vec<Rational>> {
    Ok(weights_rational(&chain_invariants(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(a: i64, b: i64) -> Real {
        Real::frac(a, b)
    }

    #[test]
    fn invariants() {
        let i = chain_invariants(&[3]).unwrap();
        assert_eq!((i.r.clone(), i.mu.clone(), i.w.clone()), (vec![3], vec![2], vec![fr(1, 3)]));
        let i = chain_invariants(&[3, 2]).unwrap();
        assert_eq!((i.r, i.mu, i.w, i.milnor), (vec![3, 6], vec![2, 4], vec![fr(1, 3), fr(1, 3)], 4));
        assert_eq!(chain_invariants(&[2]).unwrap().milnor, 1);
        assert!(matches!(chain_invariants(&[1, 2]), Err(Error::BadExponents(_))));
        assert_eq!(rho(&[3, 3]), 9 - 3 + 1);
        assert_eq!(chain_invariants(&[3, 3]).unwrap().milnor, 7);
    }

    #[test]
    fn stokes_polys() {
        let s = stokes_poly(&[3]).unwrap();
        assert_eq!((s.p.clone(), s.k), (RealPoly::from_i64(&[1, 1, 1]), 1));
        assert_eq!(s.angles, vec![fr(1, 3), fr(2, 3)]);
        let s = stokes_poly(&[3, 2]).unwrap();
        assert_eq!((s.p.clone(), s.k), (RealPoly::from_i64(&[-1, 1, 0, -1, 1]), 2));
        assert_eq!(s.angles, vec![fr(0, 1), fr(1, 6), fr(1, 2), fr(5, 6)]);
        let s = stokes_poly(&[4]).unwrap();
        assert_eq!(s.p, RealPoly::from_i64(&[1, 1, 1, 1]));
    }

    #[test]
    fn qh_examples() {
        let s = qh_spectrum(&[q(1, 4)]).unwrap();
        assert_eq!(s, vec![fr(-3, 4), fr(-1, 2), fr(-1, 4)]);
        assert_eq!(qh_spectrum(&[q(1, 2)]).unwrap(), vec![fr(-1, 2)]);
        let e12 = qh_spectrum(&[q(1, 3), q(1, 7)]).unwrap();
        assert_eq!(e12.len(), 12);
        assert_eq!(e12[0], fr(-11, 21));
        assert_eq!(e12[11], fr(11, 21));
        let ts = qh_ts_spectrum(&[q(1, 3)], &[q(1, 3)]).unwrap();
        assert_eq!(ts, vec![fr(-1, 3), fr(0, 1), fr(0, 1), fr(1, 3)]);
    }

    #[test]
    fn bases() {
        let b = jacobi_basis(&[3, 2]).unwrap();
        let names: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, vec!["1", "x0", "x0^2", "x1"]);
        assert_eq!(sorted(spectrum_from_basis(&[3, 2]).unwrap()), vec![fr(-1, 3), fr(0, 1), fr(0, 1), fr(1, 3)]);
        assert_eq!(spectrum_from_basis(&[4]).unwrap(), vec![fr(-3, 4), fr(-1, 2), fr(-1, 4)]);
        assert_eq!(spectrum_from_basis(&[3]).unwrap(), vec![fr(-2, 3), fr(-1, 3)]);
        assert!(matches!(jacobi_basis(&[2, 3]), Err(Error::ReductionRequired(_))));
    }

    #[test]
    fn graphs() {
        let g = chain_graph(&[3, 2]).unwrap();
        let names: Vec<String> = g.vertices.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, vec!["x1", "1", "x0", "x0^2"]);
        assert_eq!(g.labels, vec![1, 0, 0]);
        assert_eq!(g.increments, vec![fr(-1, 3), fr(1, 3), fr(1, 3)]);
        let g = chain_graph(&[4]).unwrap();
        assert_eq!(g.vertices[0].to_string(), "x0^2");
        assert_eq!(g.vertices.last().unwrap().to_string(), "1");
    }

    #[test]
    fn shifts() {
        for a in [vec![3], vec![3, 2], vec![2], vec![3, 3, 2], vec![2, 3], vec![3, 2, 1, 2]] {
            let r = verify_spectrum_shift(&a).unwrap();
            assert!(r.holds, "{a:?}: {r:?}");
        }
        let r = verify_spectrum_shift(&[3]).unwrap();
        assert_eq!(sorted(r.sp_s), vec![fr(-1, 6), fr(1, 6)]);
    }

    #[test]
    fn reductions() {
        let r = reduce_chain(&[2, 3]).unwrap();
        assert_eq!((r.suspensions, r.shift.clone(), r.reduced.clone()), (1, fr(-1, 2), vec![6]));
        let r = reduce_chain(&[3, 2, 1, 2]).unwrap();
        assert_eq!((r.suspensions, r.shift.clone(), r.reduced.clone()), (2, fr(-1, 1), vec![3, 4]));
        let r = reduce_chain(&[3, 2]).unwrap();
        assert_eq!((r.suspensions, r.reduced), (0, vec![3, 2]));
        assert!(matches!(reduce_chain(&[3, 1]), Err(Error::NotReducible(_))));
    }

    #[test]
    fn tensor() {
        let a2 = a_k_stokes(2).unwrap();
        let t = thom_sebastiani(&a2, &crate::linalg::Matrix::identity(1));
        assert_eq!(t, a2);
        let t = thom_sebastiani(&a2, &a2);
        assert!(t.is_unit_upper_triangular());
        assert!(tensor_monodromy_holds(&a2, &a2).unwrap());
    }
}
