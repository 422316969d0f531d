use num_rational::BigRational;
use proptest::prelude::*;
use spectral_core::catalog;
use spectral_core::dres::determinant_bareiss;
use spectral_core::poly::{gcd, Exps, MPoly};
use spectral_core::ratfunc::RatFunc;
use spectral_core::{bc_ideal, phi_l, GoodearlBasis, Monomial, Order, SpectralPolynomial, WeightedOrder};

fn poly_from(terms: &[(u32, u32, i32)]) -> MPoly {
    MPoly::from_terms(
        2,
        terms
            .iter()
            .map(|&(a, b, c)| (Exps(vec![a, b]), BigRational::from_integer(c.into()))),
    )
}

fn small_poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -6i32..=6), 1..5).prop_map(|t| poly_from(&t))
}

fn nonzero_poly() -> impl Strategy<Value = MPoly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (small_poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_finds_common_factor(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let (ac, bc) = (a.mul(&c), b.mul(&c));
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some());
        prop_assert!(bc.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c).is_some());
        prop_assert_eq!(gcd(&bc, &ac), g);
    }

    #[test]
    fn ratfunc_field_laws(x in ratfunc(), y in ratfunc(), z in ratfunc()) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
        if !y.is_zero() {
            prop_assert_eq!(x.mul(&y).div(&y).unwrap(), x.clone());
        }
    }

    #[test]
    fn bareiss_flips_sign_under_row_swap(
        entries in prop::collection::vec(-9i64..=9, 16),
        i in 0usize..4,
        j in 0usize..4,
    ) {
        prop_assume!(i != j);
        let m: Vec<Vec<num_bigint::BigInt>> =
            entries.chunks(4).map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let mut swapped = m.clone();
        swapped.swap(i, j);
        prop_assert_eq!(determinant_bareiss(&swapped).unwrap(), -determinant_bareiss(&m).unwrap());
    }
}

/// Every μ-linear monomial of weight `w`, by exhaustive search.
fn brute_force(ord: &WeightedOrder, w: usize) -> Vec<Monomial> {
    let nmu = ord.nmu();
    let mut found = Vec::new();
    for k in 0..=(w / ord.n()) as u32 {
        let mut candidates = vec![Monomial::lambda_pow(nmu, k)];
        candidates.extend((1..=nmu).map(|i| Monomial::lambda_mu(nmu, k, i)));
        found.extend(candidates.into_iter().filter(|m| ord.weight(m) == w));
    }
    found
}

/// Order of `φ_L(m)` from leading symbols: in the domain `K[∂]` orders add
/// and leading coefficients multiply, so this is exact without expanding
/// high powers of `L`.
fn symbol_order(basis: &GoodearlBasis, m: &Monomial) -> usize {
    let mut order = m.lambda as usize * basis.n();
    let mut lc = basis.field().one();
    for (i, &a) in m.mu.iter().enumerate() {
        let g = &basis.gens()[i + 1];
        for _ in 0..a {
            order += g.order().finite().unwrap();
            lc = &lc * g.lc().unwrap();
        }
    }
    assert!(!lc.is_zero());
    order
}

#[test]
fn weights_single_out_one_monomial() {
    for basis in [catalog::exponential_basis(), catalog::elliptic_basis()] {
        let ord = WeightedOrder::from_basis(&basis);
        let f = basis.field().clone();
        for w in 0..=200 {
            let all = brute_force(&ord, w);
            assert!(all.len() <= 1);
            let got = ord.monomial_of_weight(w);
            assert_eq!(got.as_ref(), all.first());
            if let Some(m) = got {
                assert_eq!(symbol_order(&basis, &m), w);
                if w <= 24 {
                    let p = SpectralPolynomial::term(f.one(), m);
                    assert_eq!(phi_l(&p, &basis).unwrap().order(), Order::Finite(w));
                }
            }
        }
    }
}

#[test]
fn weighted_order_is_a_monomial_order() {
    let basis = catalog::exponential_basis();
    let ord = WeightedOrder::from_basis(&basis);
    let mut monos = Vec::new();
    for l in 0..3 {
        for a in 0..3 {
            for b in 0..3 {
                monos.push(Monomial { lambda: l, mu: vec![a, b] });
            }
        }
    }
    let one = Monomial::one(2);
    for a in &monos {
        assert!(ord.compare(&one, a).is_le());
        for b in &monos {
            for c in &monos {
                assert_eq!(ord.compare(a, b), ord.compare(&a.mul(c), &b.mul(c)));
            }
        }
    }
    // every μ outranks every power of λ
    let mu1 = Monomial::lambda_mu(2, 0, 1);
    assert!(ord.compare(&Monomial::lambda_pow(2, 50), &mu1).is_lt());
}

#[test]
fn relations_have_constant_coefficients_in_every_catalog_basis() {
    for basis in [catalog::exponential_basis(), catalog::elliptic_basis(), catalog::elliptic_sub_basis()] {
        let bc = bc_ideal(&basis).unwrap();
        for r in bc.relations() {
            assert!(r.poly.has_constant_coeffs());
        }
    }
}
