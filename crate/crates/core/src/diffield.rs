//! Differential coefficient fields.
//!
//! Three concrete towers over the constants field `C = Q(c1, ..., ck)`:
//!
//! * `Constants`: `C` itself with the zero derivation;
//! * `Exponential`: `C(E)` with `∂E = E`;
//! * `Elliptic`: `C(℘)[℘'] / (℘'² − 4℘³ + g2·℘ + g3)` with `∂℘ = ℘'` and
//!   `∂℘' = 6℘² − g2/2`, where the invariants `g2, g3` are elements of `C`.
//!
//! Every element is kept in canonical form, so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::MPoly;
use crate::ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different coefficient fields")]
    FieldMismatch,
    #[error("singular elliptic curve: g2^3 - 27*g3^2 = 0")]
    SingularCurve,
    #[error("elliptic invariants must be constants")]
    NonConstantInvariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Constants,
    Exponential,
    Elliptic,
}

/// Descriptor of one differential field in the tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffField {
    kind: FieldKind,
    params: Vec<String>,
    /// Parameter names followed by the generator name, if any.
    names: Vec<String>,
    invariants: Option<(RatFunc, RatFunc)>,
    /// `4℘³ − g2·℘ − g3`
    cubic: Option<RatFunc>,
    /// `6℘² − g2/2`
    wpd_derivative: Option<RatFunc>,
}

impl DiffField {
    pub fn constants(params: Vec<String>) -> Arc<Self> {
        Arc::new(Self::bare(FieldKind::Constants, params))
    }

    pub fn exponential(params: Vec<String>) -> Arc<Self> {
        Arc::new(Self::bare(FieldKind::Exponential, params))
    }

    /// Elliptic field whose invariants are the first two parameters, kept
    /// symbolic.
    pub fn elliptic(params: Vec<String>) -> Result<Arc<Self>, FieldError> {
        assert!(params.len() >= 2, "elliptic field needs parameters g2, g3");
        let k = params.len();
        let g2 = RatFunc::from_poly(MPoly::var(k, 0));
        let g3 = RatFunc::from_poly(MPoly::var(k, 1));
        Self::elliptic_with_invariants(params, g2, g3)
    }

    /// Elliptic field with invariants given as rational functions of the
    /// parameters (in a variable set of size `params.len()`).
    ///
    /// When the invariants are rational numbers the discriminant
    /// `g2³ − 27·g3²` must be nonzero.
    pub fn elliptic_with_invariants(
        params: Vec<String>,
        g2: RatFunc,
        g3: RatFunc,
    ) -> Result<Arc<Self>, FieldError> {
        let k = params.len();
        if g2.nvars() != k || g3.nvars() != k {
            return Err(FieldError::NonConstantInvariant);
        }
        if let (Some(a), Some(b)) = (g2.as_rational(), g3.as_rational()) {
            let disc = &a * &a * &a - BigRational::from_integer(BigInt::from(27)) * &b * &b;
            if disc.is_zero() {
                return Err(FieldError::SingularCurve);
            }
        }
        let mut field = Self::bare(FieldKind::Elliptic, params);
        let nv = k + 1;
        let lift: Vec<usize> = (0..k).collect();
        let g2 = g2.remap(nv, &lift);
        let g3 = g3.remap(nv, &lift);
        let wp = RatFunc::from_poly(MPoly::var(nv, k));
        let int = |c: i64| RatFunc::from_poly(MPoly::from_int(nv, c));
        let cubic = int(4).mul(&wp.pow(3)).sub(&g2.mul(&wp)).sub(&g3);
        let half = RatFunc::constant(nv, BigRational::new(1.into(), 2.into()));
        let dwpd = int(6).mul(&wp.pow(2)).sub(&g2.mul(&half));
        field.invariants = Some((g2, g3));
        field.cubic = Some(cubic);
        field.wpd_derivative = Some(dwpd);
        Ok(Arc::new(field))
    }

    /// Elliptic field over Q with rational invariants.
    pub fn elliptic_rational(g2: BigRational, g3: BigRational) -> Result<Arc<Self>, FieldError> {
        Self::elliptic_with_invariants(
            Vec::new(),
            RatFunc::constant(0, g2),
            RatFunc::constant(0, g3),
        )
    }

    fn bare(kind: FieldKind, params: Vec<String>) -> Self {
        let mut names = params.clone();
        match kind {
            FieldKind::Constants => {}
            FieldKind::Exponential => names.push("E".to_string()),
            FieldKind::Elliptic => names.push("wp".to_string()),
        }
        DiffField {
            kind,
            params,
            names,
            invariants: None,
            cubic: None,
            wpd_derivative: None,
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Names of the internal variables: parameters, then the generator.
    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Index of the generator variable (`E` or `℘`).
    pub fn generator_var(&self) -> Option<usize> {
        match self.kind {
            FieldKind::Constants => None,
            _ => Some(self.params.len()),
        }
    }

    /// The elliptic invariants `(g2, g3)` as rational functions of the
    /// parameters.
    pub fn invariants(&self) -> Option<(RatFunc, RatFunc)> {
        let k = self.params.len();
        let drop: Vec<usize> = (0..k).chain(std::iter::once(0)).collect();
        self.invariants
            .as_ref()
            .map(|(a, b)| (a.remap(k, &drop), b.remap(k, &drop)))
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            field: self.clone(),
            a: RatFunc::zero(self.nvars()),
            b: RatFunc::zero(self.nvars()),
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(self: &Arc<Self>, c: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_rational(self: &Arc<Self>, c: BigRational) -> FieldElement {
        self.from_ratfunc(RatFunc::constant(self.nvars(), c))
    }

    pub fn from_ratfunc(self: &Arc<Self>, a: RatFunc) -> FieldElement {
        debug_assert_eq!(a.nvars(), self.nvars());
        FieldElement {
            field: self.clone(),
            a,
            b: RatFunc::zero(self.nvars()),
        }
    }

    /// Canonicalizes a raw quotient of polynomials in the field's variables.
    pub fn canonicalize(
        self: &Arc<Self>,
        num: MPoly,
        den: MPoly,
    ) -> Result<FieldElement, FieldError> {
        RatFunc::new(num, den)
            .map(|a| self.from_ratfunc(a))
            .ok_or(FieldError::DivisionByZero)
    }

    /// Canonicalizes `Σ cᵢ·℘'^i` in the elliptic field, reducing every power
    /// of `℘'` by the curve relation.
    pub fn canonicalize_wpd_series(
        self: &Arc<Self>,
        coeffs: &[RatFunc],
    ) -> Result<FieldElement, FieldError> {
        let cubic = self.cubic.as_ref().ok_or(FieldError::FieldMismatch)?;
        let nv = self.nvars();
        let mut a = RatFunc::zero(nv);
        let mut b = RatFunc::zero(nv);
        for (i, c) in coeffs.iter().enumerate() {
            let reduced = c.mul(&cubic.pow((i / 2) as u32));
            if i % 2 == 0 {
                a = a.add(&reduced);
            } else {
                b = b.add(&reduced);
            }
        }
        Ok(FieldElement {
            field: self.clone(),
            a,
            b,
        })
    }

    /// Parameter `i` as a field element.
    pub fn param(self: &Arc<Self>, i: usize) -> FieldElement {
        self.from_ratfunc(RatFunc::from_poly(MPoly::var(self.nvars(), i)))
    }

    /// `E` in the exponential field, `℘` in the elliptic field.
    pub fn generator(self: &Arc<Self>) -> Option<FieldElement> {
        let v = self.generator_var()?;
        Some(self.from_ratfunc(RatFunc::from_poly(MPoly::var(self.nvars(), v))))
    }

    /// `℘'` in the elliptic field.
    pub fn wpd(self: &Arc<Self>) -> Option<FieldElement> {
        (self.kind == FieldKind::Elliptic).then(|| FieldElement {
            field: self.clone(),
            a: RatFunc::zero(self.nvars()),
            b: RatFunc::one(self.nvars()),
        })
    }

    /// Embeds a rational function of the parameters alone.
    pub fn from_param_ratfunc(self: &Arc<Self>, r: &RatFunc) -> FieldElement {
        let map: Vec<usize> = (0..r.nvars()).collect();
        self.from_ratfunc(r.remap(self.nvars(), &map))
    }
}

/// An element of a [`DiffField`], stored as `a + b·℘'` (`b = 0` outside the
/// elliptic field) with `a, b` canonical rational functions.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<DiffField>,
    a: RatFunc,
    b: RatFunc,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl FieldElement {
    pub fn field(&self) -> &Arc<DiffField> {
        &self.field
    }

    /// Rational part `a` of `a + b·℘'`.
    pub fn rational_part(&self) -> &RatFunc {
        &self.a
    }

    /// Coefficient `b` of `℘'`.
    pub fn wpd_part(&self) -> &RatFunc {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Membership in the constants field `C`.
    pub fn is_constant(&self) -> bool {
        self.b.is_zero()
            && self
                .field
                .generator_var()
                .is_none_or(|v| !self.a.uses_var(v))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            self.a.as_rational()
        } else {
            None
        }
    }

    /// A constant, viewed as a rational function of the parameters only.
    pub fn as_param_ratfunc(&self) -> Option<RatFunc> {
        if !self.is_constant() {
            return None;
        }
        let k = self.field.params.len();
        let map: Vec<usize> = (0..self.field.nvars()).map(|i| i.min(k.saturating_sub(1))).collect();
        if k == 0 {
            return Some(RatFunc::constant(0, self.a.as_rational()?));
        }
        Some(self.a.remap(k, &map))
    }

    fn with(&self, a: RatFunc, b: RatFunc) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            a,
            b,
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.a.add(&other.a), self.b.add(&other.b)))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn mul_unchecked(&self, other: &FieldElement) -> FieldElement {
        if self.b.is_zero() && other.b.is_zero() {
            return self.with(self.a.mul(&other.a), RatFunc::zero(self.a.nvars()));
        }
        let cubic = self.field.cubic.as_ref().expect("℘' outside elliptic field");
        let a = self.a.mul(&other.a).add(&self.b.mul(&other.b).mul(cubic));
        let b = self.a.mul(&other.b).add(&self.b.mul(&other.a));
        self.with(a, b)
    }

    pub fn scale(&self, s: &BigRational) -> FieldElement {
        self.with(self.a.scale(s), self.b.scale(s))
    }

    pub fn invert(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(self.with(self.a.recip().unwrap(), RatFunc::zero(self.a.nvars())));
        }
        // (a + b℘')⁻¹ = (a − b℘') / (a² − b²·cubic)
        let cubic = self.field.cubic.as_ref().unwrap();
        let norm = self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(cubic));
        let inv = norm.recip().ok_or(FieldError::DivisionByZero)?;
        Ok(self.with(self.a.mul(&inv), self.b.neg().mul(&inv)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.try_mul(&other.invert()?)
    }

    pub fn pow(&self, k: u32) -> FieldElement {
        let mut acc = self.field.one();
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// The derivation `∂`.
    pub fn derive(&self) -> FieldElement {
        let nv = self.field.nvars();
        match self.field.kind {
            FieldKind::Constants => self.field.zero(),
            FieldKind::Exponential => {
                let v = self.field.generator_var().unwrap();
                let e = RatFunc::from_poly(MPoly::var(nv, v));
                self.with(self.a.partial(v).mul(&e), RatFunc::zero(nv))
            }
            FieldKind::Elliptic => {
                // ∂(a + b℘') = b_℘·℘'² + b·∂℘' + a_℘·℘'
                let v = self.field.generator_var().unwrap();
                let cubic = self.field.cubic.as_ref().unwrap();
                let dwpd = self.field.wpd_derivative.as_ref().unwrap();
                let a = self.b.partial(v).mul(cubic).add(&self.b.mul(dwpd));
                let b = self.a.partial(v);
                self.with(a, b)
            }
        }
    }

    /// `∂ᵏ`
    pub fn derive_n(&self, k: usize) -> FieldElement {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.derive();
        }
        x
    }

    /// True when the rendering starts with a minus sign.
    pub fn looks_negative(&self) -> bool {
        if self.a.is_zero() {
            self.b.looks_negative()
        } else {
            self.a.looks_negative()
        }
    }

    /// Parseable plain-text rendering, e.g. `24*E^2/(E^4+2*E^2+1)` or
    /// `-12*wp + (3/2)*wpd`.
    pub fn render(&self) -> String {
        let names = self.field.var_names();
        if self.b.is_zero() {
            return self.a.render(names);
        }
        let bpart = if self.b.is_one() {
            "wpd".to_string()
        } else {
            format!("({})*wpd", self.b.render(names))
        };
        if self.a.is_zero() {
            bpart
        } else {
            format!("{} + {}", self.a.render(names), bpart)
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(&-rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.a.neg(), self.b.neg())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::poly::Exps;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// Small random polynomial in the field's variables.
    pub(crate) fn random_poly(rng: &mut StdRng, nvars: usize, max_deg: u32, terms: usize) -> MPoly {
        let mut p = MPoly::zero(nvars);
        for _ in 0..terms {
            let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
            let c = BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into());
            p = p.add(&MPoly::from_terms(nvars, [(Exps(e), c)]));
        }
        p
    }

    pub(crate) fn random_element(rng: &mut StdRng, field: &Arc<DiffField>) -> FieldElement {
        let nv = field.nvars();
        let rf = |rng: &mut StdRng| {
            let num = random_poly(rng, nv, 2, 3);
            let mut den = random_poly(rng, nv, 1, 2);
            if den.is_zero() {
                den = MPoly::one(nv);
            }
            RatFunc::new(num, den).unwrap()
        };
        match field.kind() {
            FieldKind::Elliptic => {
                let a = rf(rng);
                let b = if rng.gen_bool(0.6) { rf(rng) } else { RatFunc::zero(nv) };
                field.canonicalize_wpd_series(&[a, b]).unwrap()
            }
            _ => field.from_ratfunc(rf(rng)),
        }
    }

    /// Small coefficients: a polynomial in the generator, sometimes over
    /// `generator + k`, plus a `℘'` part in the elliptic case.
    pub(crate) fn small_element(rng: &mut StdRng, f: &Arc<DiffField>) -> FieldElement {
        let x = f.generator().unwrap();
        let poly = |rng: &mut StdRng| {
            let mut acc = f.zero();
            for k in 0..rng.gen_range(1..=3) {
                let c = f.from_rational(BigRational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into()));
                acc = &acc + &(&c * &x.pow(k));
            }
            acc
        };
        let mut c = poly(rng);
        if rng.gen_bool(0.3) {
            let shift = f.from_int(rng.gen_range(1..=4));
            c = c.div(&(&x + &shift)).unwrap();
        }
        if let Some(wpd) = f.wpd() {
            if rng.gen_bool(0.4) {
                c = &c + &(&poly(rng) * &wpd);
            }
        }
        c
    }

    fn fields() -> Vec<Arc<DiffField>> {
        vec![
            DiffField::constants(names(&["c"])),
            DiffField::exponential(vec![]),
            DiffField::elliptic(names(&["g2", "g3"])).unwrap(),
        ]
    }

    #[test]
    fn derive_constant_is_zero() {
        for f in fields() {
            let c = f.from_rational(BigRational::new(7.into(), 3.into()));
            assert!(c.derive().is_zero());
            if !f.params().is_empty() {
                assert!(f.param(0).derive().is_zero());
            }
        }
    }

    #[test]
    fn derive_e_squared() {
        let f = DiffField::exponential(vec![]);
        let e = f.generator().unwrap();
        let e2 = &e * &e;
        assert_eq!(e2.derive(), e2.scale(&BigRational::from_integer(2.into())));
    }

    #[test]
    fn derive_wpd() {
        let f = DiffField::elliptic(names(&["g2", "g3"])).unwrap();
        let wp = f.generator().unwrap();
        let g2 = f.param(0);
        let want = &(&f.from_int(6) * &(&wp * &wp)) - &g2.scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(f.wpd().unwrap().derive(), want);
    }

    #[test]
    fn curve_relation_is_a_differential_identity() {
        let f = DiffField::elliptic(names(&["g2", "g3"])).unwrap();
        let wp = f.generator().unwrap();
        let wpd = f.wpd().unwrap();
        let (g2, g3) = (f.param(0), f.param(1));
        // ℘'² − 4℘³ + g2℘ + g3 canonicalizes to zero, and so does its derivative
        let rel = &(&(&(&wpd * &wpd) - &(&f.from_int(4) * &wp.pow(3))) + &(&g2 * &wp)) + &g3;
        assert!(rel.is_zero());
        assert!(rel.derive().is_zero());
        // the unreduced relation, differentiated symbolically
        let lhs = &(&f.from_int(2) * &wpd) * &wpd.derive();
        let rhs = &(&f.from_int(12) * &(&wp * &wp)) - &g2;
        assert_eq!(lhs, &rhs * &wp.derive());
    }

    #[test]
    fn invert_examples() {
        let f = DiffField::exponential(vec![]);
        let e = f.generator().unwrap();
        let inv = e.invert().unwrap();
        assert_eq!(inv.rational_part().render(f.var_names()), "1/E");

        let f = DiffField::elliptic(names(&["g2", "g3"])).unwrap();
        let wpd = f.wpd().unwrap();
        let inv = wpd.invert().unwrap();
        let wp = f.generator().unwrap();
        let cubic = &(&(&f.from_int(4) * &wp.pow(3)) - &(&f.param(0) * &wp)) - &f.param(1);
        assert_eq!(inv, wpd.div(&cubic).unwrap());
        assert!((&inv * &wpd).is_one());

        assert_eq!(f.zero().invert(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn canonicalize_examples() {
        let f = DiffField::exponential(vec![]);
        let e = MPoly::var(1, 0);
        let one = MPoly::one(1);
        let got = f.canonicalize(e.mul(&e).sub(&one), e.sub(&one)).unwrap();
        assert_eq!(got, &f.generator().unwrap() + &f.one());
        let half = f.canonicalize(MPoly::from_int(1, 2), MPoly::from_int(1, 4)).unwrap();
        assert_eq!(half.render(), "1/2");
        assert_eq!(
            f.canonicalize(one.clone(), MPoly::zero(1)).unwrap_err(),
            FieldError::DivisionByZero
        );

        let f = DiffField::elliptic(names(&["g2", "g3"])).unwrap();
        let nv = f.nvars();
        let z = RatFunc::zero(nv);
        let sq = f.canonicalize_wpd_series(&[z.clone(), z, RatFunc::one(nv)]).unwrap();
        assert_eq!(sq.render(), "4*wp^3-g2*wp-g3");
        assert!(sq.wpd_part().is_zero());
    }

    #[test]
    fn singular_rational_curve_rejected() {
        let r = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(
            DiffField::elliptic_rational(r(3), r(1)).unwrap_err(),
            FieldError::SingularCurve
        );
        assert!(DiffField::elliptic_rational(r(4), r(1)).is_ok());
    }

    #[test]
    fn field_mismatch_detected() {
        let a = DiffField::exponential(vec![]).one();
        let b = DiffField::constants(vec![]).one();
        assert_eq!(a.try_add(&b).unwrap_err(), FieldError::FieldMismatch);
    }

    #[test]
    fn randomized_field_and_derivation_axioms() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for f in fields() {
            for _ in 0..500 {
                let x = random_element(&mut rng, &f);
                let y = random_element(&mut rng, &f);
                let z = random_element(&mut rng, &f);
                assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                assert_eq!(&x + &y, &y + &x);
                assert_eq!((&x + &y).derive(), &x.derive() + &y.derive());
                assert_eq!(
                    (&x * &y).derive(),
                    &(&x.derive() * &y) + &(&x * &y.derive())
                );
                if !x.is_zero() {
                    let inv = x.invert().unwrap();
                    assert!((&x * &inv).is_one());
                    assert_eq!(inv.derive(), -&(&x.derive() * &(&inv * &inv)));
                }
            }
        }
    }
}
