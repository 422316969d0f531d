//! Rational functions over Q in canonical form.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{gcd, primitive_scale_of, MPoly};

/// `num / den` with `gcd(num, den) = 1`, jointly primitive integer
/// coefficients and a positive leading coefficient of `den` (graded lex).
/// Two equal rational functions have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        RatFunc {
            num: MPoly::zero(nvars),
            den: MPoly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        RatFunc {
            num: MPoly::one(nvars),
            den: MPoly::one(nvars),
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let nvars = p.nvars();
        Self::finish(p, MPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    /// Canonical form of `num / den`; `None` when `den` is zero.
    pub fn new(num: MPoly, den: MPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero(num.nvars()));
        }
        if den.is_constant() || num.is_constant() {
            return Some(Self::finish(num, den));
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            return Some(Self::finish(num, den));
        }
        Some(Self::finish(
            num.div_exact(&g).unwrap(),
            den.div_exact(&g).unwrap(),
        ))
    }

    /// Applies the scalar normalization to an already coprime pair.
    fn finish(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.nvars());
        }
        let mut s = primitive_scale_of(
            num.terms().map(|(_, c)| c).chain(den.terms().map(|(_, c)| c)),
            None,
        );
        if den.leading_coeff().unwrap().is_negative() {
            s = -s;
        }
        if s.is_one() {
            return RatFunc { num, den };
        }
        RatFunc {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.num.uses_var(v) || self.den.uses_var(v)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        if self.den.is_constant() && other.den.is_constant() {
            let a = self.den.as_constant().unwrap();
            let b = other.den.as_constant().unwrap();
            let num = self.num.scale(&b).add(&other.num.scale(&a));
            return Self::finish(num, MPoly::constant(self.nvars(), a * b));
        }
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        let den = self.den.mul(&d2);
        Self::new(num, den).unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        if self.is_polynomial() && other.is_polynomial() {
            let s = self.den.as_constant().unwrap() * other.den.as_constant().unwrap();
            return Self::finish(
                self.num.mul(&other.num),
                MPoly::constant(self.nvars(), s),
            );
        }
        // cross-cancel so the product is already reduced
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        Self::finish(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, s: &BigRational) -> RatFunc {
        if s.is_zero() {
            return Self::zero(self.nvars());
        }
        Self::finish(self.num.scale(s), self.den.clone())
    }

    pub fn recip(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(Self::finish(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&other.recip()?))
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        // powers of coprime polynomials stay coprime
        Self::finish(self.num.pow(k), self.den.pow(k))
    }

    /// Partial derivative with respect to variable `v`.
    pub fn partial(&self, v: usize) -> RatFunc {
        if !self.uses_var(v) {
            return Self::zero(self.nvars());
        }
        if !self.den.uses_var(v) {
            return Self::new(self.num.derivative(v), self.den.clone()).unwrap();
        }
        // (n/d)' = (n'·(d/g) − n·(d'/g)) / (d·(d/g)) with g = gcd(d, d')
        let dd = self.den.derivative(v);
        let g = gcd(&self.den, &dd);
        let d_red = self.den.div_exact(&g).unwrap();
        let dd_red = dd.div_exact(&g).unwrap();
        let num = self
            .num
            .derivative(v)
            .mul(&d_red)
            .sub(&self.num.mul(&dd_red));
        Self::new(num, self.den.mul(&d_red)).unwrap()
    }

    pub fn remap(&self, nvars: usize, map: &[usize]) -> RatFunc {
        Self::new(self.num.remap(nvars, map), self.den.remap(nvars, map)).unwrap()
    }

    /// True when the numerator's leading coefficient is negative.
    pub fn looks_negative(&self) -> bool {
        self.num.leading_coeff().is_some_and(|c| c.is_negative())
    }

    /// Plain-text rendering such as `27*g3/4` or `(9*g2^2+15*g2+4)/4`.
    pub fn render(&self, names: &[String]) -> String {
        let num = self.num.render(names);
        if self.den.is_one() {
            return num;
        }
        let den = self.den.render(names);
        let num = if self.num.num_terms() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den = if self.den.num_terms() > 1 || !self.den.is_constant() && self.den.total_degree() > 0 && den.contains('*') {
            format!("({den})")
        } else {
            den
        };
        format!("{num}/{den}")
    }
}
