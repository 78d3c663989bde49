//! Property tests for the structural invariants of the algebra layer.

use proptest::prelude::*;
use selmerlab::algebra::{factor, is_square_poly, squarefree_decomposition, Field, Poly};
use selmerlab::funcfield::{minimal_model, RatFn};
use selmerlab::quadspace::{adjoint, multiplier, tau, Mat};

fn poly_from(coeffs: Vec<u64>, q: u64) -> Poly {
    Poly::new(coeffs.into_iter().map(|c| c % q).collect())
}

proptest! {
    /// Vanishing discriminant is the same as a repeated factor.
    #[test]
    fn discriminant_vanishes_iff_gcd_nontrivial(coeffs in proptest::collection::vec(0u64..7, 2..6)) {
        let f = Field::new(7, 1).unwrap();
        let mut c = coeffs;
        c.push(1); // monic
        let p = poly_from(c, 7);
        if p.degree().unwrap() >= 2 {
            let d = p.discriminant(&f).unwrap();
            let g = p.gcd(&p.derivative(&f), &f);
            prop_assert_eq!(d == 0, g.degree() != Some(0));
        }
    }

    /// Yun recomposition and pairwise coprimality.
    #[test]
    fn squarefree_decomposition_recomposes(a in proptest::collection::vec(0u64..11, 1..3),
                                           b in proptest::collection::vec(0u64..11, 1..3),
                                           e in 1usize..3) {
        let f = Field::new(11, 1).unwrap();
        let mut am = a; am.push(1);
        let mut bm = b; bm.push(1);
        let pa = poly_from(am, 11);
        let pb = poly_from(bm, 11);
        let mut prod = pb.clone();
        for _ in 0..e {
            prod = prod.mul(&pa, &f);
        }
        if prod.degree().unwrap() < 11 {
            let dec = squarefree_decomposition(&prod, &f).unwrap();
            let mut rebuilt = Poly::one();
            for (g, m) in &dec {
                for _ in 0..*m {
                    rebuilt = rebuilt.mul(g, &f);
                }
            }
            prop_assert_eq!(rebuilt, prod);
            for i in 0..dec.len() {
                for j in (i + 1)..dec.len() {
                    prop_assert_eq!(dec[i].0.gcd(&dec[j].0, &f).degree(), Some(0));
                }
            }
        }
    }

    /// Squares of random monic polynomials are recognized, and the
    /// factorization multiplies back.
    #[test]
    fn squares_and_factor_round_trip(coeffs in proptest::collection::vec(0u64..5, 1..4)) {
        let f = Field::new(5, 1).unwrap();
        let mut c = coeffs; c.push(1);
        let g = poly_from(c, 5);
        let sq = g.mul(&g, &f);
        prop_assert!(is_square_poly(&sq, &f));
        let fac = factor(&sq, &f, 7);
        let mut rebuilt = Poly::one();
        for (h, m) in &fac {
            for _ in 0..*m {
                rebuilt = rebuilt.mul(h, &f);
            }
        }
        prop_assert_eq!(rebuilt, sq);
        prop_assert!(fac.iter().all(|(_, m)| m % 2 == 0));
    }

    /// The adjoint is an involutive anti-automorphism and the multiplier
    /// is multiplicative on similitudes.
    #[test]
    fn adjoint_and_multiplier_laws(entries in proptest::collection::vec(0u64..5, 16),
                                   a in 1u64..5, b in 1u64..5) {
        let f = Field::new(5, 1).unwrap();
        let m = Mat { n: 4, a: entries };
        prop_assert_eq!(adjoint(&adjoint(&m)), m.clone());
        let g = tau(a, 4);
        let h = tau(b, 4);
        let gh = g.mul(&h, &f);
        prop_assert_eq!(adjoint(&gh), adjoint(&h).mul(&adjoint(&g), &f));
        let mu = multiplier(&gh, &f).unwrap();
        prop_assert_eq!(mu, f.mul(multiplier(&g, &f).unwrap(), multiplier(&h, &f).unwrap()));
    }

    /// Heights are invariant under the scalar action and the minimal model
    /// is a fixed point of its own construction.
    #[test]
    fn minimal_model_scalar_invariance(c2 in proptest::collection::vec(0u64..5, 1..4),
                                       c3 in proptest::collection::vec(0u64..5, 1..4),
                                       c4 in proptest::collection::vec(0u64..5, 1..4),
                                       lam in 1u64..5) {
        let f = Field::new(5, 1).unwrap();
        let tuple = vec![
            RatFn::from_poly(poly_from(c2, 5)),
            RatFn::from_poly(poly_from(c3, 5)),
            RatFn::from_poly(poly_from(c4, 5)),
        ];
        prop_assume!(!tuple.iter().all(|c| c.is_zero()));
        let m = minimal_model(1, &tuple, &f).unwrap();
        let scaled: Vec<RatFn> = tuple
            .iter()
            .enumerate()
            .map(|(i, c)| RatFn::from_poly(c.num.scale(f.pow(lam, (i as u128) + 2), &f)))
            .collect();
        let ms = minimal_model(1, &scaled, &f).unwrap();
        prop_assert_eq!(ms.height, m.height);
        let again = minimal_model(
            1,
            &m.sections.iter().map(|s| RatFn::from_poly(s.clone())).collect::<Vec<_>>(),
            &f,
        )
        .unwrap();
        prop_assert_eq!(again.sections, m.sections);
    }
}
