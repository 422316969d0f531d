//! The two worked examples, built directly from field arithmetic.
//!
//! * exponential: `L = ∂³ + 6/cosh²(x)·∂` over `Q(eˣ)`, basis orders 0, 4, 5;
//! * elliptic: `L = ∂⁴ − 12℘∂² + 1` over `Q(g2, g3)(℘, ℘')`, basis orders
//!   0, 5, 6, 7.
//!
//! The elliptic operators commute for the curve `℘'² = 4℘³ + g2·℘ + g3`,
//! so the field is built with invariants `(−g2, −g3)`.

use std::sync::Arc;

use num_rational::BigRational;

use crate::diffield::{DiffField, FieldElement};
use crate::odo::{DiffOperator, GoodearlBasis};
use crate::poly::MPoly;
use crate::ratfunc::RatFunc;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn op(field: &Arc<DiffField>, coeffs: Vec<FieldElement>) -> DiffOperator {
    DiffOperator::from_coeffs(field, coeffs)
}

/// `(cosh x, sinh x)` written in `E = eˣ`.
pub fn hyperbolic(field: &Arc<DiffField>) -> (FieldElement, FieldElement) {
    let e = field.generator().expect("exponential field");
    let einv = e.invert().unwrap();
    let half = q(1, 2);
    ((&e + &einv).scale(&half), (&e - &einv).scale(&half))
}

pub fn exponential_field() -> Arc<DiffField> {
    DiffField::exponential(Vec::new())
}

/// `(L, [1, G1, G2])` of the exponential example.
pub fn exponential_operators(field: &Arc<DiffField>) -> (DiffOperator, Vec<DiffOperator>) {
    let (ch, sh) = hyperbolic(field);
    let c = |n: i64, d: i64| field.from_rational(q(n, d));
    let z = field.zero();
    let one = field.one();
    let sech2 = ch.pow(2).invert().unwrap();
    let sech4 = ch.pow(4).invert().unwrap();
    let sh_sech3 = sh.div(&ch.pow(3)).unwrap();

    let l = op(field, vec![z.clone(), &c(6, 1) * &sech2, z.clone(), one.clone()]);
    let g1 = op(
        field,
        vec![
            z.clone(),
            -&(&c(8, 1) * &sh_sech3),
            &(&c(8, 1) * &sech2) - &c(4, 3),
            z.clone(),
            one.clone(),
        ],
    );
    let g2 = op(
        field,
        vec![
            z.clone(),
            &(&c(16, 9) + &(&c(80, 3) * &sech2)) - &(&c(20, 1) * &sech4),
            -&(&c(20, 1) * &sh_sech3),
            &c(10, 1) * &sech2,
            z,
            one,
        ],
    );
    (l, vec![DiffOperator::one(field), g1, g2])
}

pub fn exponential_basis() -> GoodearlBasis {
    let field = exponential_field();
    let (l, gens) = exponential_operators(&field);
    GoodearlBasis::new(l, gens).expect("exponential catalog basis is valid")
}

/// Elliptic field over `Q(g2, g3)` with curve `℘'² = 4℘³ + g2·℘ + g3`.
pub fn elliptic_field() -> Arc<DiffField> {
    let params = vec!["g2".to_string(), "g3".to_string()];
    let g2 = RatFunc::from_poly(MPoly::var(2, 0)).neg();
    let g3 = RatFunc::from_poly(MPoly::var(2, 1)).neg();
    DiffField::elliptic_with_invariants(params, g2, g3).expect("symbolic invariants")
}

/// `(L, [1, G1, G2, G3])` of the elliptic example.
pub fn elliptic_operators(field: &Arc<DiffField>) -> (DiffOperator, Vec<DiffOperator>) {
    let c = |n: i64, d: i64| field.from_rational(q(n, d));
    let z = field.zero();
    let one = field.one();
    let wp = field.generator().unwrap();
    let wpd = field.wpd().unwrap();
    let g2 = field.param(0);
    let g3 = field.param(1);
    let wp2 = &wp * &wp;

    let l = op(field, vec![one.clone(), z.clone(), &c(-12, 1) * &wp, z.clone(), one.clone()]);
    let g1 = op(
        field,
        vec![
            z.clone(),
            &c(-3, 1) * &g2,
            &c(-15, 2) * &wpd,
            &c(-15, 1) * &wp,
            z.clone(),
            one.clone(),
        ],
    );
    let g2op = op(
        field,
        vec![
            z.clone(),
            z.clone(),
            -&(&(&c(36, 1) * &wp2) + &(&c(9, 1) * &g2)),
            &c(-18, 1) * &wpd,
            &c(-18, 1) * &wp,
            z.clone(),
            one.clone(),
        ],
    );
    let g3op = op(
        field,
        vec![
            z.clone(),
            &c(-27, 1) * &g3,
            &c(-63, 1) * &(&wp * &wpd),
            -&(&(&c(126, 1) * &wp2) + &(&c(21, 1) * &g2)),
            &c(-63, 2) * &wpd,
            &c(-21, 1) * &wp,
            z,
            one,
        ],
    );
    (l, vec![DiffOperator::one(field), g1, g2op, g3op])
}

pub fn elliptic_basis() -> GoodearlBasis {
    let field = elliptic_field();
    let (l, gens) = elliptic_operators(&field);
    GoodearlBasis::new(l, gens).expect("elliptic catalog basis is valid")
}

/// The rank-2 subalgebra `C[L, G2]` of the elliptic example.
pub fn elliptic_sub_basis() -> GoodearlBasis {
    elliptic_basis().sub_basis(&[2]).expect("{1, G2} is a valid basis")
}
