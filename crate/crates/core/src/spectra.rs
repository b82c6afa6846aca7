//! Spectral pairs, ladders of spectral pairs and their partners.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPair {
    pub alpha: Real,
    pub level: i64,
}

impl SpectralPair {
    pub fn new(alpha: Real, level: i64) -> Self {
        SpectralPair { alpha, level }
    }

    fn cmp(&self, o: &Self) -> Ordering {
        self.alpha.cmp_tol(&o.alpha).then(self.level.cmp(&o.level))
    }
}

impl fmt::Display for SpectralPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.level)
    }
}

/// Multiset of spectral pairs, kept sorted by `(α, level)`. Serializes as
/// `[{"alpha": "p/q", "level": k, "mult": d}, ...]`.
#[derive(Clone, Debug, Default)]
pub struct Spp {
    pub pairs: Vec<SpectralPair>,
}

impl Spp {
    pub fn new(mut pairs: Vec<SpectralPair>) -> Self {
        pairs.sort_by(SpectralPair::cmp);
        Spp { pairs }
    }

    pub fn from_list(v: &[(Real, i64)]) -> Self {
        Self::new(v.iter().map(|(a, k)| SpectralPair::new(a.clone(), *k)).collect())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Spectral numbers with repetition, sorted.
    pub fn alphas(&self) -> Vec<Real> {
        let mut a: Vec<Real> = self.pairs.iter().map(|p| p.alpha.clone()).collect();
        a.sort_by(|x, y| x.cmp_tol(y));
        a
    }

    pub fn union(&self, o: &Spp) -> Spp {
        Spp::new(self.pairs.iter().chain(&o.pairs).cloned().collect())
    }

    /// `(pair, multiplicity)` groups.
    pub fn grouped(&self) -> Vec<(SpectralPair, usize)> {
        let mut out: Vec<(SpectralPair, usize)> = Vec::new();
        for p in &self.pairs {
            match out.last_mut() {
                Some((q, m)) if q == p => *m += 1,
                _ => out.push((p.clone(), 1)),
            }
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.pairs.iter().all(|p| p.alpha.is_exact())
    }
}

#[derive(Serialize, Deserialize)]
struct SppEntry {
    alpha: Real,
    level: i64,
    mult: usize,
}

impl Serialize for Spp {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<SppEntry> =
            self.grouped().into_iter().map(|(p, mult)| SppEntry { alpha: p.alpha, level: p.level, mult }).collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Spp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<SppEntry>::deserialize(d)?;
        let mut pairs = Vec::new();
        for e in v {
            if e.mult == 0 {
                return Err(serde::de::Error::custom("multiplicity must be positive"));
            }
            pairs.extend(std::iter::repeat_n(SpectralPair::new(e.alpha, e.level), e.mult));
        }
        Ok(Spp::new(pairs))
    }
}

impl PartialEq for Spp {
    fn eq(&self, o: &Spp) -> bool {
        self.pairs.len() == o.pairs.len() && self.pairs.iter().zip(&o.pairs).all(|(a, b)| a == b)
    }
}

impl fmt::Display for Spp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .grouped()
            .iter()
            .map(|(p, m)| if *m == 1 { p.to_string() } else { format!("{m}·{p}") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Ladder `(α+k, m+l-2k)`, `k = 0..l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SppLadder {
    pub alpha: Real,
    pub m: i64,
    pub l: usize,
}

impl SppLadder {
    pub fn new(alpha: Real, m: i64, l: usize) -> Self {
        SppLadder { alpha, m, l }
    }

    /// `2α + l + 1 - m`
    pub fn distance(&self) -> Real {
        Real::int(2) * self.alpha.clone() + Real::int(self.l as i64 + 1 - self.m)
    }

    pub fn is_single(&self) -> bool {
        self.distance().is_zero()
    }
}

pub fn ladder_members(l: &SppLadder) -> Spp {
    Spp::new(
        (0..=l.l)
            .map(|k| SpectralPair::new(l.alpha.clone() + Real::int(k as i64), l.m + l.l as i64 - 2 * k as i64))
            .collect(),
    )
}

/// Partner ladder (first α' = m-l-1-α) and the distance `2α+l+1-m`.
pub fn partner_ladder(l: &SppLadder) -> (SppLadder, Real) {
    let alpha = Real::int(l.m - l.l as i64 - 1) - l.alpha.clone();
    (SppLadder::new(alpha, l.m, l.l), l.distance())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kleinian {
    Pi1,
    Pi2,
    Pi3,
}

/// The Kleinian symmetries of spectral pairs around center `m`.
pub fn kleinian_image(p: &SpectralPair, m: i64, which: Kleinian) -> SpectralPair {
    let k = p.level - m;
    let a = &p.alpha;
    match which {
        Kleinian::Pi1 => SpectralPair::new(Real::int(m - 1) - a.clone(), m - k),
        Kleinian::Pi2 => SpectralPair::new(Real::int(m - 1 - k) - a.clone(), m + k),
        Kleinian::Pi3 => SpectralPair::new(a.clone() + Real::int(k), m - k),
    }
}

pub fn spp_image(s: &Spp, m: i64, which: Kleinian) -> Spp {
    Spp::new(s.pairs.iter().map(|p| kleinian_image(p, m, which)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LadderRole {
    Single,
    /// Index of the partner in the returned list.
    Paired(usize),
    /// Partner absent (the set is still a union of ladders).
    Unpaired,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderEntry {
    pub ladder: SppLadder,
    pub role: LadderRole,
}

/// Splits `s` into ladders with center `m`. The pair of highest level is
/// always the top of some ladder; ties go to the smallest α.
pub fn decompose_into_ladders(s: &Spp, m: i64) -> Result<Vec<LadderEntry>> {
    let mut rest: Vec<SpectralPair> = s.pairs.clone();
    let mut ladders = Vec::new();
    while !rest.is_empty() {
        let top = rest
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.level.cmp(&b.level).then(b.alpha.cmp_tol(&a.alpha)))
            .map(|(i, _)| i)
            .unwrap();
        let head = rest[top].clone();
        if head.level < m {
            return Err(Error::NotLadderComposed { witness: head.to_string() });
        }
        let lad = SppLadder::new(head.alpha.clone(), m, (head.level - m) as usize);
        for member in ladder_members(&lad).pairs {
            match rest.iter().position(|p| *p == member) {
                Some(i) => {
                    rest.swap_remove(i);
                }
                None => return Err(Error::NotLadderComposed { witness: head.to_string() }),
            }
        }
        ladders.push(lad);
    }
    let mut roles = vec![None; ladders.len()];
    for i in 0..ladders.len() {
        if roles[i].is_some() {
            continue;
        }
        if ladders[i].is_single() {
            roles[i] = Some(LadderRole::Single);
            continue;
        }
        let (partner, _) = partner_ladder(&ladders[i]);
        let j = (0..ladders.len()).find(|&j| j != i && roles[j].is_none() && ladders[j] == partner);
        match j {
            Some(j) => {
                roles[i] = Some(LadderRole::Paired(j));
                roles[j] = Some(LadderRole::Paired(i));
            }
            None => roles[i] = Some(LadderRole::Unpaired),
        }
    }
    Ok(ladders
        .into_iter()
        .zip(roles)
        .map(|(ladder, role)| LadderEntry { ladder, role: role.unwrap() })
        .collect())
}

/// Subtracts `(dα, dk)` from every pair.
pub fn spp_shift(s: &Spp, da: &Real, dk: i64) -> Spp {
    Spp::new(s.pairs.iter().map(|p| SpectralPair::new(p.alpha.clone() - da.clone(), p.level - dk)).collect())
}

pub fn mod2(a: &Real) -> Real {
    a.rem_euclid(&Real::int(2))
}

/// Multiset equality after reducing α modulo 2.
pub fn spp_mod2_equal(a: &Spp, b: &Spp) -> bool {
    let red = |s: &Spp| {
        let mut v: Vec<SpectralPair> = s
            .pairs
            .iter()
            .map(|p| {
                let r = mod2(&p.alpha);
                // values a hair below 2 belong to 0
                let r = if (r.to_f64() - 2.0).abs() <= crate::real::TOL { Real::zero() } else { r };
                SpectralPair::new(r, p.level)
            })
            .collect();
        v.sort_by(SpectralPair::cmp);
        v
    };
    let (x, y) = (red(a), red(b));
    x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| p == q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(n: i64, d: i64) -> Real {
        Real::frac(n, d)
    }

    #[test]
    fn members() {
        let s = ladder_members(&SppLadder::new(fr(-1, 2), 1, 1));
        assert_eq!(s, Spp::from_list(&[(fr(-1, 2), 2), (fr(1, 2), 0)]));
        let s = ladder_members(&SppLadder::new(Real::int(-1), 1, 2));
        assert_eq!(s, Spp::from_list(&[(Real::int(-1), 3), (Real::int(0), 1), (Real::int(1), -1)]));
    }

    #[test]
    fn partners() {
        let (p, d) = partner_ladder(&SppLadder::new(fr(-1, 3), 1, 0));
        assert_eq!(p.alpha, fr(1, 3));
        assert_eq!(d, fr(-2, 3));
        assert!(SppLadder::new(Real::zero(), 1, 0).is_single());
    }

    #[test]
    fn kleinian() {
        let p = SpectralPair::new(fr(-1, 2), 2);
        assert_eq!(kleinian_image(&p, 1, Kleinian::Pi3), SpectralPair::new(fr(1, 2), 0));
        let composed = kleinian_image(&kleinian_image(&p, 1, Kleinian::Pi2), 1, Kleinian::Pi1);
        assert_eq!(composed, kleinian_image(&p, 1, Kleinian::Pi3));
    }

    #[test]
    fn decomposition() {
        let s = Spp::from_list(&[(fr(-1, 2), 2), (fr(1, 2), 0), (Real::zero(), 1)]);
        let d = decompose_into_ladders(&s, 1).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].ladder, SppLadder::new(fr(-1, 2), 1, 1));
        assert_eq!(d[0].role, LadderRole::Single);
        assert_eq!(d[1].ladder, SppLadder::new(Real::zero(), 1, 0));
        let bad = decompose_into_ladders(&Spp::from_list(&[(Real::zero(), 2)]), 1);
        assert!(matches!(bad, Err(Error::NotLadderComposed { .. })));
        let pair = Spp::from_list(&[(fr(-1, 3), 1), (fr(1, 3), 1)]);
        let d = decompose_into_ladders(&pair, 1).unwrap();
        assert_eq!(d[0].role, LadderRole::Paired(1));
    }

    #[test]
    fn shifts() {
        let s = Spp::from_list(&[(fr(-2, 3), 1), (fr(-1, 3), 1)]);
        assert_eq!(spp_shift(&s, &fr(-1, 2), 0), Spp::from_list(&[(fr(-1, 6), 1), (fr(1, 6), 1)]));
        let one = |a: i64| Spp::from_list(&[(Real::int(a), 1)]);
        assert!(spp_mod2_equal(&one(0), &one(2)));
        assert!(!spp_mod2_equal(&one(0), &one(1)));
    }
}
