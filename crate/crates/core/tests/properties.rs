use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spectral_stokes::chain::{chain_invariants, jacobi_basis, qh_spectrum, stokes_spectrum};
use spectral_stokes::hor::{
    is_realizable_spectrum, negate_poly_transform, poly_to_matrix, poly_to_scal, random_cyclotomic_poly,
    recipe_spectral_pairs, recipe_spectrum, verify_power_identity,
};
use spectral_stokes::lowdim::{char_poly3, classify3, f3, member3, stokes3};
use spectral_stokes::orbit::{braid_act, monodromy_char_poly, sign_act, sign_canonical};
use spectral_stokes::polycore::RealMatrix;
use spectral_stokes::real::q;
use spectral_stokes::seifert::{class_signature, exact_inertia};
use spectral_stokes::spectra::{decompose_into_ladders, ladder_members, Spp};
use spectral_stokes::{Matrix, Real};

fn unit_upper(n: usize, entries: &[i64]) -> RealMatrix {
    let mut s = Matrix::identity(n);
    let mut it = entries.iter();
    for i in 0..n {
        for j in i + 1..n {
            s.set(i, j, Real::int(*it.next().unwrap()));
        }
    }
    s
}

fn arb_unit_upper() -> impl Strategy<Value = RealMatrix> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * (n - 1) / 2).prop_map(move |e| unit_upper(n, &e))
    })
}

fn arb_chain() -> impl Strategy<Value = Vec<i64>> {
    (2i64..=5, prop::collection::vec(1i64..=4, 0..=3)).prop_map(|(a0, rest)| {
        let mut a = vec![a0];
        a.extend(rest);
        a
    })
}

fn arb_quarter() -> impl Strategy<Value = Real> {
    (-12i64..=12).prop_map(|x| Real::frac(x, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn braid_moves_keep_char_poly(s in arb_unit_upper(), i in 0usize..4, up in any::<bool>()) {
        let i = i % (s.rows - 1);
        let t = braid_act(i, &s, if up { 1 } else { -1 }).unwrap();
        prop_assert!(t.is_unit_upper_triangular());
        prop_assert_eq!(monodromy_char_poly(&t), monodromy_char_poly(&s));
    }

    #[test]
    fn braid_moves_invert(s in arb_unit_upper(), i in 0usize..4) {
        let i = i % (s.rows - 1);
        let there = braid_act(i, &s, 1).unwrap();
        prop_assert_eq!(braid_act(i, &there, -1).unwrap(), s);
    }

    #[test]
    fn sign_changes_keep_char_poly(s in arb_unit_upper(), bits in any::<u8>()) {
        let eps: Vec<i8> = (0..s.rows).map(|j| if bits >> j & 1 == 1 { -1 } else { 1 }).collect();
        let t = sign_act(&eps, &s);
        prop_assert_eq!(monodromy_char_poly(&t), monodromy_char_poly(&s));
        prop_assert_eq!(sign_canonical(&t).0, sign_canonical(&s).0);
    }

    #[test]
    fn power_identity_is_exact(n in 2usize..=9, seed in any::<u64>()) {
        let (p, k) = random_cyclotomic_poly(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let h = poly_to_matrix(&p, k).unwrap();
        prop_assert!(verify_power_identity(&h).holds());
    }

    #[test]
    fn negation_keeps_spectrum(n in 1usize..=7, seed in any::<u64>()) {
        let (p, k) = random_cyclotomic_poly(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let (pt, kt) = negate_poly_transform(&p, k).unwrap();
        let mut a = recipe_spectrum(&poly_to_scal(&p, k).unwrap());
        let mut b = recipe_spectrum(&poly_to_scal(&pt, kt).unwrap());
        a.sort_by(|x, y| x.cmp_tol(y));
        b.sort_by(|x, y| x.cmp_tol(y));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn recipe_output_is_realizable(n in 1usize..=7, seed in any::<u64>()) {
        let (p, k) = random_cyclotomic_poly(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = poly_to_scal(&p, k).unwrap();
        let mut sp = recipe_spectrum(&b);
        sp.sort_by(|x, y| x.cmp_tol(y));
        prop_assert!(sp.windows(2).all(|w| w[1].clone() - w[0].clone() <= Real::one()));
        let witness = is_realizable_spectrum(&sp, n, k);
        prop_assert!(witness.is_some());
    }

    #[test]
    fn ladders_rebuild_the_pairs(n in 1usize..=7, seed in any::<u64>()) {
        let (p, k) = random_cyclotomic_poly(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let spp = recipe_spectral_pairs(&poly_to_scal(&p, k).unwrap()).unwrap();
        let back = decompose_into_ladders(&spp, 1)
            .unwrap()
            .iter()
            .fold(Spp::default(), |acc, e| acc.union(&ladder_members(&e.ladder)));
        prop_assert_eq!(back, spp);
    }

    #[test]
    fn milnor_number_counts_the_basis(a in arb_chain()) {
        let inv = chain_invariants(&a).unwrap();
        let basis = jacobi_basis(&a);
        if let Ok(basis) = basis {
            prop_assert_eq!(basis.len() as i64, inv.milnor);
        }
        let prod = inv.w.iter().fold(Real::one(), |acc, w| acc * (Real::one() / w.clone() - Real::one()));
        prop_assert_eq!(prod, Real::int(inv.milnor));
    }

    #[test]
    fn stokes_spectrum_is_symmetric(a in arb_chain()) {
        let mut sp = stokes_spectrum(&a).unwrap();
        sp.sort_by(|x, y| x.cmp_tol(y));
        let inv = chain_invariants(&a).unwrap();
        prop_assert_eq!(sp.len() as i64, inv.milnor);
        let m = a.len() as i64 - 1;
        for j in 0..sp.len() {
            prop_assert!((sp[j].clone() + sp[sp.len() - 1 - j].clone()).is_zero(), "m = {}", m);
        }
    }

    #[test]
    fn qh_spectrum_is_symmetric(d1 in 2i64..=7, d2 in 2i64..=7, d3 in 2i64..=5) {
        let sp = qh_spectrum(&[q(1, d1), q(1, d2), q(1, d3)]).unwrap();
        prop_assert_eq!(sp.len() as i64, (d1 - 1) * (d2 - 1) * (d3 - 1));
        for j in 0..sp.len() {
            prop_assert_eq!(sp[j].clone() + sp[sp.len() - 1 - j].clone(), Real::one());
        }
    }

    #[test]
    fn f3_ignores_paired_sign_flips(a1 in arb_quarter(), a2 in arb_quarter(), a3 in arb_quarter()) {
        let a = [a1.clone(), a2.clone(), a3.clone()];
        let b = [-a1, -a2, a3];
        prop_assert_eq!(f3(&a), f3(&b));
        prop_assert_eq!(member3(&a), member3(&b));
    }

    #[test]
    fn classify3_agrees_with_char_poly_and_signature(a1 in arb_quarter(), a2 in arb_quarter(), a3 in arb_quarter()) {
        let a = [a1, a2, a3];
        let c = classify3(&a);
        prop_assert_eq!(&c.char_poly, &char_poly3(&a));
        prop_assert_eq!(c.char_poly.clone(), monodromy_char_poly(&stokes3(&a)));
        let s = stokes3(&a);
        let direct = exact_inertia(&s.add(&s.transpose()));
        prop_assert_eq!(c.signature, direct);
        if member3(&a) {
            prop_assert_eq!(class_signature(&c.types), direct);
        }
    }
}
