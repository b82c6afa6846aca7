//! The acceptance checks, runnable from the library, the command line and
//! the test suite.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{exponent_grid, qh_spectrum, reduce_chain, verify_spectrum_shift};
use crate::hor::{
    all_cyclotomic_polys, is_realizable_spectrum, is_signature, is_signature_scal, negate_poly_transform, poly_to_matrix,
    poly_to_scal, random_cyclotomic_poly, random_scal, recipe_spectral_pairs, recipe_spectrum,
    simplex_path_track_scal, verify_power_identity,
};
use crate::linalg::Poly;
use crate::lowdim::{classify3, classify3_generic, grid3, hor1_line3, hor1_line3_generic, member3, solve2, spp_of_pairs};
use crate::orbit::{braid_act, conjecture16_check, cyclotomic_pool, monodromy_char_poly, sign_act};
use crate::polycore::RealMatrix;
use crate::real::{q, Real};
use crate::seifert::{
    class_from_spp, class_signature, classify, exact_inertia, format_class, same_class, SeifertPair, CIRCLE_TOL,
};
use crate::spectra::{decompose_into_ladders, ladder_members, Spp};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({:.2}s of {:.0}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds,
            self.limit_seconds
        )
    }
}

pub const NAMES: [&str; 9] = [
    "n=2 tables",
    "HOR1 line endpoints",
    "power identity",
    "chain spectrum shift grid",
    "E12 spectrum",
    "signature law",
    "n=3 classification consistency",
    "ladder class round trip",
    "property suites",
];

pub const LIMITS: [u64; 9] = [1, 1, 60, 300, 1, 30, 120, 60, 600];

type Check = std::result::Result<String, String>;

fn fr(a: i64, b: i64) -> Real {
    Real::frac(a, b)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Check {
    let half = fr(1, 2);
    let ladder = Spp::from_list(&[(-half.clone(), 2), (half.clone(), 0)]);
    let rows = [
        (-2, fr(0, 1), fr(-1, 2), ladder.clone(), "Seif(-1,1,2,1)"),
        (0, fr(1, 4), fr(0, 1), Spp::from_list(&[(Real::zero(), 1), (Real::zero(), 1)]), "2·Seif(1,1,1,1)"),
        (2, fr(1, 2), fr(1, 2), ladder, "Seif(-1,1,2,1)"),
    ];
    for (a, beta1, alpha1, spp, ty) in rows {
        let s = solve2(&Real::int(a)).map_err(|e| e.to_string())?;
        ensure(s.beta1 == beta1 && s.alpha1 == alpha1, || format!("a={a}: β1={} α1={}", s.beta1, s.alpha1))?;
        ensure(s.spp == spp, || format!("a={a}: Spp {}", s.spp))?;
        ensure(format_class(&s.types) == ty, || format!("a={a}: type {}", format_class(&s.types)))?;
        // the same numbers through the general code
        let p = Poly::new(vec![Real::one(), Real::int(a), Real::one()]);
        let b = poly_to_scal(&p, 1).map_err(|e| e.to_string())?;
        ensure(b.beta[0] == beta1, || format!("a={a}: generic β1 {}", b.beta[0]))?;
        let g = recipe_spectral_pairs(&b).map_err(|e| e.to_string())?;
        ensure(g == spp, || format!("a={a}: generic Spp {g}"))?;
        let h = poly_to_matrix(&p, 1).map_err(|e| e.to_string())?;
        let t = classify(&SeifertPair::from_stokes(&h.s).map_err(|e| e.to_string())?, CIRCLE_TOL)
            .map_err(|e| e.to_string())?;
        ensure(format_class(&t) == ty, || format!("a={a}: generic type {}", format_class(&t)))?;
    }
    Ok("a = -2, 0, 2 match both tables".into())
}

fn c2() -> Check {
    let rows = [
        (-1, spp_of_pairs(&[(fr(0, 1), 1), (fr(-1, 2), 2), (fr(1, 2), 0)])),
        (3, spp_of_pairs(&[(fr(-1, 1), 3), (fr(0, 1), 1), (fr(1, 1), -1)])),
    ];
    for (p1, want) in rows {
        let l = hor1_line3(&Real::int(p1)).map_err(|e| e.to_string())?;
        ensure(l.spp == want, || format!("p1={p1}: {}", l.spp))?;
        let (_, g) = hor1_line3_generic(&Real::int(p1)).map_err(|e| e.to_string())?;
        ensure(g == want, || format!("p1={p1}: generic {g}"))?;
    }
    Ok("p1 = -1 and p1 = 3 match".into())
}

fn c3() -> Check {
    let mut total = 0;
    for n in 2..=12usize {
        let bad: Vec<String> = (0..1000u64)
            .into_par_iter()
            .filter_map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 * n as u64 + i);
                let (p, k) = random_cyclotomic_poly(n, &mut rng);
                let h = poly_to_matrix(&p, k).ok()?;
                let c = verify_power_identity(&h);
                (!c.holds()).then(|| format!("n={n} k={k} p={:?}", h.p.coeffs))
            })
            .collect();
        ensure(bad.is_empty(), || format!("{} failures, first {}", bad.len(), bad[0]))?;
        total += 1000;
    }
    Ok(format!("{total} matrices, zero residual"))
}

fn c4() -> Check {
    let grid = exponent_grid(3, 6, 2, 4, 4);
    let fails: Vec<String> = grid
        .par_iter()
        .filter_map(|a| match verify_spectrum_shift(a) {
            Ok(r) if r.holds && r.basis_matches == Some(true) && r.order_matches == Some(true) => None,
            Ok(r) => Some(format!("{a:?}: stokes {} basis {:?} order {:?}", r.stokes_matches, r.basis_matches, r.order_matches)),
            Err(e) => Some(format!("{a:?}: {e}")),
        })
        .collect();
    ensure(fails.is_empty(), || format!("{} of {} fail, first {}", fails.len(), grid.len(), fails[0]))?;
    let ext: Vec<Vec<i64>> = exponent_grid(2, 6, 1, 4, 4)
        .into_iter()
        .filter(|a| a[0] == 2 || a[1..].contains(&1))
        .filter(|a| reduce_chain(a).is_ok())
        .collect();
    let mut reducible = ext.clone();
    reducible.push(vec![2]);
    let fails: Vec<String> = reducible
        .par_iter()
        .filter_map(|a| match verify_spectrum_shift(a) {
            Ok(r) if r.holds && r.stokes_matches && r.basis_matches == Some(true) => None,
            Ok(r) => Some(format!("{a:?}: stokes {} basis {:?}", r.stokes_matches, r.basis_matches)),
            Err(e) => Some(format!("{a:?}: {e}")),
        })
        .collect();
    ensure(fails.is_empty(), || format!("reducible: {} fail, first {}", fails.len(), fails[0]))?;
    Ok(format!("{} grid tuples and {} reducible tuples", grid.len(), reducible.len()))
}

fn c5() -> Check {
    let s = qh_spectrum(&[q(1, 3), q(1, 7)]).map_err(|e| e.to_string())?;
    ensure(s.len() == 12, || format!("μ = {}", s.len()))?;
    let want = [(0, fr(-11, 21)), (1, fr(-8, 21)), (10, fr(8, 21)), (11, fr(11, 21))];
    for (i, v) in want {
        ensure(s[i] == v, || format!("α_{} = {}", i + 1, s[i]))?;
    }
    ensure((0..12).all(|j| (s[j].clone() + s[11 - j].clone()).is_zero()), || "not symmetric".into())?;
    Ok("μ = 12, ends -11/21, -8/21, 8/21, 11/21, symmetric".into())
}

fn c6() -> Check {
    let mut total = 0;
    for n in 1..=8usize {
        let bad: Vec<String> = (0..500u64)
            .into_par_iter()
            .filter_map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(7919 * n as u64 + i);
                let k = if n == 1 { 1 } else { rng.random_range(1..=2u8) };
                let b = random_scal(n, k, &mut rng);
                let r = match is_signature_scal(&b) {
                    Ok(r) => r,
                    Err(e) => return Some(format!("n={n} β={:?}: {e}", b.beta)),
                };
                (r.predicted != r.computed).then(|| format!("n={n} β={:?}: {:?} vs {:?}", b.beta, r.predicted, r.computed))
            })
            .collect();
        ensure(bad.is_empty(), || format!("{} mismatches, first {}", bad.len(), bad[0]))?;
        total += 500;
    }
    // exact cyclotomic members, where -1 can carry Jordan blocks
    let mut exact = 0;
    for n in 1..=8usize {
        let polys = all_cyclotomic_polys(n);
        let bad: Vec<String> = polys
            .par_iter()
            .filter_map(|(p, k)| match poly_to_matrix(p, *k).and_then(|h| is_signature(&h)) {
                Ok(r) if r.predicted == r.computed => None,
                Ok(r) => Some(format!("p={:?}: {:?} vs {:?}", p.coeffs, r.predicted, r.computed)),
                Err(e) => Some(format!("p={:?}: {e}", p.coeffs)),
            })
            .collect();
        ensure(bad.is_empty(), || format!("{} exact mismatches, first {}", bad.len(), bad[0]))?;
        exact += polys.len();
    }
    Ok(format!("{total} samples and {exact} exact matrices agree"))
}

fn c7() -> Check {
    let pts: Vec<[Real; 3]> = grid3(&fr(1, 4), &Real::int(4)).into_iter().filter(member3).collect();
    let bad: Vec<String> = pts
        .par_iter()
        .filter_map(|a| {
            let c = classify3(a);
            let g = match classify3_generic(a) {
                Ok(g) => g,
                Err(e) => return Some(format!("{a:?}: {e}")),
            };
            if !same_class(&c.types, &g) {
                return Some(format!("{a:?}: {} vs {}", format_class(&c.types), format_class(&g)));
            }
            let s = crate::lowdim::stokes3(a);
            let direct = exact_inertia(&s.add(&s.transpose()));
            (class_signature(&c.types) != direct)
                .then(|| format!("{a:?}: signature {:?} vs {:?}", class_signature(&c.types), direct))
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} disagreements, first {}", bad.len(), bad[0]))?;
    Ok(format!("{} points of T(3,R) agree", pts.len()))
}

fn c8() -> Check {
    let mut total = 0;
    for n in 1..=8usize {
        let polys = all_cyclotomic_polys(n);
        let bad: Vec<String> = polys
            .par_iter()
            .filter_map(|(p, k)| {
                let run = || -> crate::Result<Option<String>> {
                    let h = poly_to_matrix(p, *k)?;
                    let spp = recipe_spectral_pairs(&h.scal()?)?;
                    let from_spp = class_from_spp(&spp, 1, false)?;
                    let direct = classify(&SeifertPair::from_stokes(&h.s)?, CIRCLE_TOL)?;
                    Ok((!same_class(&from_spp, &direct))
                        .then(|| format!("p={:?}: {} vs {}", p.coeffs, format_class(&from_spp), format_class(&direct))))
                };
                run().unwrap_or_else(|e| Some(format!("p={:?}: {e}", p.coeffs)))
            })
            .collect();
        ensure(bad.is_empty(), || format!("{} mismatches, first {}", bad.len(), bad[0]))?;
        total += polys.len();
    }
    Ok(format!("{total} matrices agree"))
}

fn random_unit_upper(n: usize, rng: &mut ChaCha8Rng) -> RealMatrix {
    let mut s = RealMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            s.set(i, j, Real::int(rng.random_range(-3..=3)));
        }
    }
    s
}

fn c9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // negation symmetry, realizability, gaps, ladders
    for _ in 0..300 {
        let n = rng.random_range(1..=8usize);
        let (p, k) = random_cyclotomic_poly(n, &mut rng);
        let h = poly_to_matrix(&p, k).map_err(|e| e.to_string())?;
        let b = h.scal().map_err(|e| e.to_string())?;
        let mut sp = recipe_spectrum(&b);
        let (pt, kt) = negate_poly_transform(&p, k).map_err(|e| e.to_string())?;
        let mut sp2 = recipe_spectrum(&poly_to_scal(&pt, kt).map_err(|e| e.to_string())?);
        sp.sort_by(|x, y| x.cmp_tol(y));
        sp2.sort_by(|x, y| x.cmp_tol(y));
        ensure(sp == sp2, || format!("negation changes the spectrum of {:?}", p.coeffs))?;
        ensure(is_realizable_spectrum(&sp, n, k).is_some(), || format!("{:?} not realizable", p.coeffs))?;
        ensure(sp.windows(2).all(|w| w[1].clone() - w[0].clone() <= Real::one()), || {
            format!("gap above 1 for {:?}", p.coeffs)
        })?;
        let spp = recipe_spectral_pairs(&b).map_err(|e| e.to_string())?;
        let ls = decompose_into_ladders(&spp, 1).map_err(|e| e.to_string())?;
        let back = ls.iter().fold(Spp::default(), |acc, e| acc.union(&ladder_members(&e.ladder)));
        ensure(back == spp, || format!("ladder round trip fails for {:?}", p.coeffs))?;
    }
    // braid and sign actions
    for _ in 0..200 {
        let n = rng.random_range(2..=5usize);
        let s = random_unit_upper(n, &mut rng);
        let cp = monodromy_char_poly(&s);
        let i = rng.random_range(0..n - 1);
        let eps: Vec<i8> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        let t = braid_act(i, &s, 1).map_err(|e| e.to_string())?;
        ensure(monodromy_char_poly(&t) == cp && monodromy_char_poly(&sign_act(&eps, &s)) == cp, || {
            format!("char poly moved for {:?}", s.to_rows())
        })?;
    }
    // path tracking endpoints
    for _ in 0..100 {
        let n = rng.random_range(1..=6usize);
        let k = if n == 1 { 1 } else { rng.random_range(1..=2u8) };
        let b = random_scal(n, k, &mut rng);
        let t = simplex_path_track_scal(&b, 256).map_err(|e| e.to_string())?;
        ensure(t.endpoint_ok, || format!("path endpoint {:?} vs {:?}", t.endpoint, t.expected))?;
    }
    // the experiment only has to run
    let mut groups = 0;
    let mut flagged = 0;
    for n in 2..=8 {
        let r = conjecture16_check(&cyclotomic_pool(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        groups += r.groups.len();
        flagged += r.violations.len();
    }
    Ok(format!("all properties hold; conjecture report: {groups} groups, {flagged} flagged for inspection"))
}

/// Runs criterion `id` (1 to 9).
pub fn run(id: usize) -> CriterionResult {
    let f: fn() -> Check = match id {
        1 => c1,
        2 => c2,
        3 => c3,
        4 => c4,
        5 => c5,
        6 => c6,
        7 => c7,
        8 => c8,
        9 => c9,
        _ => panic!("criterion {id} does not exist"),
    };
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    let limit = Duration::from_secs(LIMITS[id - 1]);
    let (passed, mut detail) = match out {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let in_time = el <= limit;
    if !in_time {
        detail = format!("{detail}; over the time limit");
    }
    CriterionResult {
        id,
        name: NAMES[id - 1].to_string(),
        passed: passed && in_time,
        detail,
        seconds: el.as_secs_f64(),
        limit_seconds: limit.as_secs_f64(),
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=9).map(run).collect()
}
