//! Cyclotomic polynomials and exact arithmetic in `Q(ζ_N)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::Poly;
use crate::real::{lcm_u64, qi, Rational, Real};

pub fn totient(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn cache() -> &'static Mutex<HashMap<u64, Vec<i64>>> {
    static C: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of `Φ_d`, low to high.
pub fn cyclotomic(d: u64) -> Vec<i64> {
    assert!(d >= 1);
    if let Some(c) = cache().lock().unwrap().get(&d) {
        return c.clone();
    }
    // x^d - 1 divided by Φ_e for every proper divisor e
    let mut num: Vec<i128> = vec![0; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if !d.is_multiple_of(e) {
            continue;
        }
        let f = cyclotomic(e);
        num = div_monic_i128(&num, &f);
    }
    let out: Vec<i64> = num.iter().map(|&v| v as i64).collect();
    cache().lock().unwrap().insert(d, out.clone());
    out
}

fn div_monic_i128(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i128; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd];
        q[i] = c;
        for (j, &b) in den.iter().enumerate() {
            r[i + j] -= c * b as i128;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

pub fn cyclotomic_poly(d: u64) -> Poly<Real> {
    Poly::from_i64(&cyclotomic(d))
}

/// Splits off cyclotomic factors `Φ_d` with `d <= max_d` from an exact
/// polynomial. Returns `(d, multiplicity)` pairs and the cofactor.
pub fn cyclotomic_factors(p: &Poly<Real>, max_d: u64) -> (Vec<(u64, usize)>, Poly<Real>) {
    let mut rest = p.clone();
    let mut out = Vec::new();
    for d in 1..=max_d {
        if totient(d) as usize > rest.degree() {
            continue;
        }
        let f = cyclotomic_poly(d);
        let mut mult = 0;
        while rest.degree() >= f.degree() {
            match rest.div_exact(&f) {
                Some(qt) => {
                    rest = qt;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            out.push((d, mult));
        }
    }
    (out, rest)
}

/// Element `Σ c_k ζ^k` of `Q(ζ_N)`, `ζ = e^{2πi/N}`, stored modulo `x^N - 1`.
#[derive(Clone, Debug)]
pub struct Cyclo {
    pub n: usize,
    pub c: Vec<Rational>,
}

impl Cyclo {
    pub fn zero(n: usize) -> Self {
        Cyclo { n, c: vec![Rational::zero(); n] }
    }

    pub fn from_rational(n: usize, r: Rational) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = r;
        z
    }

    /// `ζ^k`
    pub fn root(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.c[k.rem_euclid(n as i64) as usize] = Rational::one();
        z
    }

    /// `e^{-2πiθ}` for rational `θ` whose denominator divides `n`.
    pub fn exp_turns(n: usize, theta: &Rational) -> Option<Self> {
        let k = theta * qi(n as i64);
        if !k.is_integer() {
            return None;
        }
        let k = k.to_integer().to_i64()?;
        Some(Self::root(n, -k))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        Cyclo { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        Cyclo { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclo { n: self.n, c: self.c.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = Self::zero(self.n);
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % self.n;
                out.c[k] += a * b;
            }
        }
        out
    }

    /// Canonical representative modulo `Φ_N`, coefficients of degree `< φ(N)`.
    pub fn reduced(&self) -> Vec<Rational> {
        let phi = cyclotomic(self.n as u64);
        let dd = phi.len() - 1;
        let mut r = self.c.clone();
        for i in (dd..r.len()).rev() {
            let c = r[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, &b) in phi.iter().enumerate() {
                r[i - dd + j] -= &c * BigInt::from(b);
            }
        }
        r.truncate(dd);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        let r = self.reduced();
        r.iter().skip(1).all(Zero::is_zero).then(|| r.first().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn to_complex(&self) -> Complex64 {
        let w = std::f64::consts::TAU / self.n as f64;
        self.c.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (k, a)| {
            acc + Complex64::from_polar(crate::real::rat_to_f64(a), w * k as f64)
        })
    }
}

/// Smallest `N` such that every rational angle has denominator dividing `N`.
pub fn common_order(angles: &[Rational]) -> Option<usize> {
    let mut n = 1u64;
    for a in angles {
        let d = a.denom().to_u64()?;
        n = lcm_u64(n, d);
    }
    Some(n as usize)
}

/// `∏ (x - e^{-2πiθ_j})` computed in `Q(ζ_N)`; `Some` only if all
/// coefficients are rational.
pub fn product_of_roots(angles: &[Rational]) -> Option<Poly<Real>> {
    let n = common_order(angles)?;
    if n > 100_000 {
        return None;
    }
    let mut coeffs = vec![Cyclo::from_rational(n, Rational::one())];
    for a in angles {
        let k = Cyclo::exp_turns(n, a)?;
        let mut next = vec![Cyclo::zero(n); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&k));
        }
        coeffs = next;
    }
    let rat: Option<Vec<Real>> = coeffs.iter().map(|c| c.as_rational().map(Real::Q)).collect();
    rat.map(Poly::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::q;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic(105).iter().map(|c| c.abs()).max(), Some(2));
    }

    #[test]
    fn factor_out() {
        // Φ_1^2 Φ_3 Φ_4 times x^2 + 3x + 1
        let p = cyclotomic_poly(1)
            .pow(2)
            .mul(&cyclotomic_poly(3))
            .mul(&cyclotomic_poly(4))
            .mul(&Poly::from_i64(&[1, 3, 1]));
        let (f, rest) = cyclotomic_factors(&p, 20);
        assert_eq!(f, vec![(1, 2), (3, 1), (4, 1)]);
        assert_eq!(rest, Poly::from_i64(&[1, 3, 1]));
    }

    #[test]
    fn zeta_arithmetic() {
        // ζ_6 + ζ_6^5 = 1
        let a = Cyclo::root(6, 1).add(&Cyclo::root(6, 5));
        assert_eq!(a.as_rational(), Some(qi(1)));
        // 1 + ζ_3 + ζ_3^2 = 0
        let b = Cyclo::root(3, 0).add(&Cyclo::root(3, 1)).add(&Cyclo::root(3, 2));
        assert!(b.is_zero());
    }

    #[test]
    fn rational_products() {
        let p = product_of_roots(&[q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(p, Poly::from_i64(&[1, 1, 1]));
        assert!(product_of_roots(&[q(1, 5), q(4, 5)]).is_none());
    }
}
