//! Closed forms for `T(2,R)` and `T(3,R)`: membership, strata, spectra and
//! Seifert types.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hor::{recipe_spectral_pairs, recipe_spectrum, HorScal};
use crate::linalg::Poly;
use crate::numeric;
use crate::polycore::{RealMatrix, RealPoly};
use crate::real::Real;
use crate::seifert::{self, exact_inertia, monodromy_and_forms, IrrType, SeifertPair, Signature};
use crate::spectra::{SpectralPair, Spp};

const FLOAT_TOL: f64 = 1e-9;

/// `4 + a1 a2 a3 - (a1^2 + a2^2 + a3^2)`
pub fn f3(a: &[Real; 3]) -> Real {
    let [a1, a2, a3] = a;
    Real::int(4) + a1.clone() * a2.clone() * a3.clone() - (a1.pow(2) + a2.pow(2) + a3.pow(2))
}

/// Sign of `x` with a float tolerance; exact for rationals.
fn sign_tol(x: &Real) -> i32 {
    match x {
        Real::Q(_) => x.sign(),
        Real::F(v) if v.abs() <= FLOAT_TOL => 0,
        _ => x.sign(),
    }
}

pub fn member3(a: &[Real; 3]) -> bool {
    let f = f3(a);
    sign_tol(&f) >= 0 && sign_tol(&(f - Real::int(4))) <= 0
}

pub fn stokes3(a: &[Real; 3]) -> RealMatrix {
    let [a1, a2, a3] = a.clone();
    let mut s = RealMatrix::identity(3);
    s.set(0, 1, a1);
    s.set(1, 2, a2);
    s.set(0, 2, a3);
    s
}

/// `(x - 1)(x^2 - (f - 2) x + 1)`
pub fn char_poly3(a: &[Real; 3]) -> RealPoly {
    let f = f3(a);
    let quad = Poly::new(vec![Real::one(), -(f - Real::int(2)), Real::one()]);
    Poly::new(vec![Real::int(-1), Real::one()]).mul(&quad)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stratum3 {
    Identity,
    InteriorPos,
    BoundaryPosSphere,
    Exceptional,
    BoundaryIndCone,
    InteriorInd,
    Jordan3Boundary,
    Outside,
}

impl fmt::Display for Stratum3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Class3 {
    pub a: [Real; 3],
    pub f: Real,
    pub stratum: Stratum3,
    /// Empty outside `T(3,R)`.
    pub types: Vec<IrrType>,
    pub char_poly: RealPoly,
    /// Signature of `S + S^t`.
    pub signature: Signature,
}

fn sym_signature(s: &RealMatrix) -> Signature {
    let h = s.add(&s.transpose());
    if h.is_exact() {
        exact_inertia(&h)
    } else {
        numeric::real_inertia(&h.to_f64(), FLOAT_TOL)
    }
}

fn is_exceptional(a: &[Real; 3]) -> bool {
    let two = Real::int(2);
    let signs: Vec<i32> = a.iter().map(|x| if x.abs() == two { x.sign() } else { 0 }).collect();
    signs.iter().all(|&s| s != 0) && signs.iter().product::<i32>() > 0
}

fn seif_one() -> IrrType {
    IrrType::F1 { lambda: Real::zero(), n: 1, eps: 1 }
}

/// `Seif(e^{-2πiθ},2,1,ζ)` with `2 cos 2πθ = f - 2`; `positive` picks the
/// sign of `ζ` for which the block is positive definite.
fn elliptic_type(f: &Real, positive: bool) -> IrrType {
    let theta = ((f.clone() - Real::int(2)) * Real::frac(1, 2)).acos_turns();
    let zeta_pos = (-(theta.clone() * Real::frac(1, 2))).rem_euclid(&Real::one());
    let zeta = if positive { zeta_pos } else { (zeta_pos + Real::frac(1, 2)).rem_euclid(&Real::one()) };
    IrrType::F2complex { lambda: theta, n: 1, zeta }.canonical()
}

pub fn classify3(a: &[Real; 3]) -> Class3 {
    let f = f3(a);
    let s = stokes3(a);
    let signature = sym_signature(&s);
    let char_poly = char_poly3(a);
    let f0 = sign_tol(&f);
    let f4 = sign_tol(&(f.clone() - Real::int(4)));
    let half = Real::frac(1, 2);
    let (stratum, types) = if f0 < 0 || f4 > 0 {
        (Stratum3::Outside, vec![])
    } else if a.iter().all(|x| sign_tol(x) == 0) {
        (Stratum3::Identity, vec![seif_one(); 3])
    } else if f4 == 0 {
        (Stratum3::Jordan3Boundary, vec![IrrType::F1 { lambda: Real::zero(), n: 3, eps: 1 }])
    } else if f0 == 0 {
        if is_exceptional(a) {
            (Stratum3::Exceptional, vec![seif_one(), IrrType::F2real { lambda: half, n: 1 }])
        } else if signature == (2, 1, 0) {
            (Stratum3::BoundaryPosSphere, vec![seif_one(), IrrType::F1 { lambda: half, n: 2, eps: 1 }])
        } else {
            (Stratum3::BoundaryIndCone, vec![seif_one(), IrrType::F1 { lambda: half, n: 2, eps: -1 }])
        }
    } else if signature == (3, 0, 0) {
        (Stratum3::InteriorPos, vec![seif_one(), elliptic_type(&f, true)])
    } else {
        (Stratum3::InteriorInd, vec![seif_one(), elliptic_type(&f, false)])
    };
    let mut types = types;
    types.sort_by(IrrType::sort_cmp);
    Class3 { a: a.clone(), f, stratum, types, char_poly, signature }
}

/// Compares the closed form with `det(x S - S^t)`.
pub fn char_poly_matches(a: &[Real; 3]) -> Result<bool> {
    let p = SeifertPair::from_stokes(&stokes3(a))?;
    let m = monodromy_and_forms(&p)?.m;
    let direct = m.char_poly();
    let closed = char_poly3(a);
    if direct.is_exact() && closed.is_exact() {
        Ok(direct == closed)
    } else {
        let (x, y) = (direct.to_f64(), closed.to_f64());
        Ok(x.len() == y.len() && x.iter().zip(&y).all(|(u, v)| (u - v).abs() <= 1e-9 * (1.0 + v.abs())))
    }
}

/// Class of `S` read off the general classification, for comparison.
pub fn classify3_generic(a: &[Real; 3]) -> Result<Vec<IrrType>> {
    seifert::classify(&SeifertPair::from_stokes(&stokes3(a))?, seifert::CIRCLE_TOL)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Solve2 {
    pub a: Real,
    pub beta1: Real,
    pub alpha1: Real,
    pub spp: Spp,
    pub types: Vec<IrrType>,
}

pub fn solve2(a: &Real) -> Result<Solve2> {
    let two = Real::int(2);
    if sign_tol(&(a.abs() - two.clone())) > 0 {
        return Err(Error::OutOfT(format!("a = {a}")));
    }
    let beta1 = (-(a.clone()) * Real::frac(1, 2)).acos_turns();
    let alpha1 = beta1.clone() * two.clone() - Real::frac(1, 2);
    let half = Real::frac(1, 2);
    let (spp, types) = if sign_tol(&(a.abs() - two)) == 0 {
        (
            Spp::from_list(&[(-half.clone(), 2), (half.clone(), 0)]),
            vec![IrrType::F1 { lambda: half, n: 2, eps: 1 }],
        )
    } else if sign_tol(a) == 0 {
        (Spp::from_list(&[(Real::zero(), 1), (Real::zero(), 1)]), vec![seif_one(); 2])
    } else {
        let zeta = (-(alpha1.clone() * half)).rem_euclid(&Real::one());
        let lambda = alpha1.rem_euclid(&Real::one());
        (
            Spp::from_list(&[(alpha1.clone(), 1), (-alpha1.clone(), 1)]),
            vec![IrrType::F2complex { lambda, n: 1, zeta }.canonical()],
        )
    };
    Ok(Solve2 { a: a.clone(), beta1, alpha1, spp, types })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Line3 {
    pub p1: Real,
    pub beta: Vec<Real>,
    pub alpha: Vec<Real>,
    pub spp: Spp,
}

/// The line `S = ((1,p1,p1),(0,1,p1),(0,0,1))`, `p1 ∈ [-1,3]`.
pub fn hor1_line3(p1: &Real) -> Result<Line3> {
    if sign_tol(&(p1.clone() + Real::one())) < 0 || sign_tol(&(p1.clone() - Real::int(3))) > 0 {
        return Err(Error::OutOfFamily(format!("p1 = {p1} not in [-1,3]")));
    }
    let beta1 = ((Real::one() - p1.clone()) * Real::frac(1, 2)).acos_turns();
    let a1 = beta1.clone() * Real::int(3) - Real::frac(1, 2);
    let beta = vec![beta1.clone(), Real::frac(1, 2), Real::one() - beta1];
    let alpha = vec![a1.clone(), Real::zero(), -a1];
    let spp = recipe_spectral_pairs(&HorScal::new(1, beta.clone())?)?;
    Ok(Line3 { p1: p1.clone(), beta, alpha, spp })
}

/// The same data through the generic path: polynomial, angles, recipe.
pub fn hor1_line3_generic(p1: &Real) -> Result<(Vec<Real>, Spp)> {
    let p = Poly::new(vec![Real::one(), p1.clone(), p1.clone(), Real::one()]);
    let b = crate::hor::poly_to_scal(&p, 1)?;
    Ok((recipe_spectrum(&b), recipe_spectral_pairs(&b)?))
}

/// Runs of equal strata along the line, in order.
pub fn line3_strata(step: &Real) -> Vec<Stratum3> {
    let mut out: Vec<Stratum3> = Vec::new();
    let mut p = Real::int(-1);
    while p <= Real::int(3) {
        let s = classify3(&[p.clone(), p.clone(), p.clone()]).stratum;
        if out.last() != Some(&s) {
            out.push(s);
        }
        p = p + step.clone();
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRow {
    pub a: [Real; 3],
    pub f: Real,
    pub stratum: Stratum3,
    pub types: String,
}

/// Points of the grid with spacing `step` over `[-lim, lim]^3`.
pub fn grid3(step: &Real, lim: &Real) -> Vec<[Real; 3]> {
    let mut axis = Vec::new();
    let mut x = -lim.clone();
    while x <= *lim {
        axis.push(x.clone());
        x = x + step.clone();
    }
    let mut out = Vec::with_capacity(axis.len().pow(3));
    for a1 in &axis {
        for a2 in &axis {
            for a3 in &axis {
                out.push([a1.clone(), a2.clone(), a3.clone()]);
            }
        }
    }
    out
}

pub fn scan3(step: &Real, lim: &Real) -> Vec<ScanRow> {
    use rayon::prelude::*;
    grid3(step, lim)
        .into_par_iter()
        .filter(member3)
        .map(|a| {
            let c = classify3(&a);
            ScanRow { a, f: c.f, stratum: c.stratum, types: seifert::format_class(&c.types) }
        })
        .collect()
}

pub fn spp_of_pairs(pairs: &[(Real, i64)]) -> Spp {
    Spp::new(pairs.iter().map(|(a, k)| SpectralPair::new(a.clone(), *k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::{class_signature, format_class, same_class};

    fn pt(a: [i64; 3]) -> [Real; 3] {
        a.map(Real::int)
    }

    fn fr(a: i64, b: i64) -> Real {
        Real::frac(a, b)
    }

    #[test]
    fn values() {
        assert_eq!(f3(&pt([0, 0, 0])), Real::int(4));
        assert_eq!(f3(&pt([2, 2, 2])), Real::int(0));
        assert_eq!(f3(&pt([1, 2, 0])), Real::int(-1));
        assert!(member3(&pt([2, 2, 2])));
        assert!(!member3(&pt([1, 2, 0])));
    }

    #[test]
    fn strata() {
        let c = classify3(&pt([1, 1, 1]));
        assert_eq!((c.stratum, c.f.clone()), (Stratum3::InteriorPos, Real::int(2)));
        let c = classify3(&pt([2, 2, 2]));
        assert_eq!(c.stratum, Stratum3::Exceptional);
        assert_eq!(format_class(&c.types), "Seif(1,1,1,1) + Seif(-1,2,1)");
        let c = classify3(&pt([3, 3, 3]));
        assert_eq!((c.stratum, format_class(&c.types)), (Stratum3::Jordan3Boundary, "Seif(1,1,3,1)".to_string()));
        assert_eq!(classify3(&pt([-1, -1, -1])).stratum, Stratum3::BoundaryPosSphere);
        assert_eq!(classify3(&pt([0, 0, 0])).stratum, Stratum3::Identity);
        assert_eq!(classify3(&pt([5, 0, 0])).stratum, Stratum3::Outside);
    }

    #[test]
    fn agrees_with_generic() {
        for a in [[1, 1, 1], [2, 2, 2], [3, 3, 3], [-1, -1, -1], [0, 1, 0], [2, 2, 1], [-2, 2, -2]] {
            let a = pt(a);
            let c = classify3(&a);
            if c.stratum == Stratum3::Outside {
                continue;
            }
            let g = classify3_generic(&a).unwrap();
            assert!(same_class(&c.types, &g), "{a:?}: {} vs {}", format_class(&c.types), format_class(&g));
            assert_eq!(class_signature(&c.types), c.signature);
            assert!(char_poly_matches(&a).unwrap());
        }
    }

    #[test]
    fn n2_tables() {
        let s = solve2(&Real::int(2)).unwrap();
        assert_eq!((s.beta1.clone(), s.alpha1.clone()), (fr(1, 2), fr(1, 2)));
        assert_eq!(s.spp.to_string(), "{(-1/2, 2), (1/2, 0)}");
        assert_eq!(format_class(&s.types), "Seif(-1,1,2,1)");
        let s = solve2(&Real::int(-2)).unwrap();
        assert_eq!((s.beta1.clone(), s.alpha1.clone()), (fr(0, 1), fr(-1, 2)));
        assert_eq!(format_class(&s.types), "Seif(-1,1,2,1)");
        let s = solve2(&Real::int(0)).unwrap();
        assert_eq!(format_class(&s.types), "2·Seif(1,1,1,1)");
        assert_eq!(solve2(&Real::int(1)).unwrap().alpha1, fr(1, 6));
        assert!(matches!(solve2(&Real::int(5)), Err(Error::OutOfT(_))));
    }

    #[test]
    fn line() {
        let l = hor1_line3(&Real::int(-1)).unwrap();
        assert_eq!(l.spp, spp_of_pairs(&[(fr(0, 1), 1), (fr(-1, 2), 2), (fr(1, 2), 0)]));
        let l = hor1_line3(&Real::int(3)).unwrap();
        assert_eq!(l.spp, spp_of_pairs(&[(fr(-1, 1), 3), (fr(0, 1), 1), (fr(1, 1), -1)]));
        let l = hor1_line3(&Real::int(1)).unwrap();
        assert_eq!(l.beta[0], fr(1, 4));
        assert_eq!(l.alpha, vec![fr(1, 4), fr(0, 1), fr(-1, 4)]);
        assert!(matches!(hor1_line3(&Real::int(4)), Err(Error::OutOfFamily(_))));
    }

    #[test]
    fn line_visits() {
        use Stratum3::*;
        let seq = line3_strata(&fr(1, 100));
        assert_eq!(
            seq,
            vec![BoundaryPosSphere, InteriorPos, Identity, InteriorPos, Exceptional, InteriorInd, Jordan3Boundary]
        );
    }
}
