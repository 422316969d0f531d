//! Sparse multivariate polynomials over the rationals.
//!
//! This is the arithmetic substrate for the coefficient fields: every
//! rational function in the field tower is a quotient of two [`MPoly`]
//! values over a fixed, positional variable set. Terms are kept in a
//! `BTreeMap` keyed by exponent vectors ordered graded-lexicographically,
//! so the leading term is always the last entry.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::modgcd::modular_gcd;

/// Exponent vector ordered by total degree, then lexicographically
/// (variable 0 is the most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exps(pub Vec<u32>);

impl Exps {
    pub fn zero(nvars: usize) -> Self {
        Exps(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Exps) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn add(&self, other: &Exps) -> Exps {
        Exps(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Exps) -> Exps {
        Exps(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Exps {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exps {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exps, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Exps::zero(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The polynomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, i, 1, BigRational::one())
    }

    pub fn monomial(nvars: usize, i: usize, exp: u32, c: BigRational) -> Self {
        let mut e = Exps::zero(nvars);
        e.0[i] = exp;
        Self::from_terms(nvars, [(e, c)])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.0.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.degree() == 0)
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                (e.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.leading_term().map(|(_, c)| c)
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> MPoly {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    fn mul_term(&self, e: &Exps, s: &BigRational) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(f, c)| (f.add(e), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        // multiply integer numerators and divide once per result term
        let (a, da) = self.integer_terms();
        let (b, db) = other.integer_terms();
        let mut acc: HashMap<Exps, BigInt> = HashMap::with_capacity(a.len() * b.len());
        for (e1, c1) in &a {
            for (e2, c2) in &b {
                *acc.entry(e1.add(e2)).or_default() += c1 * c2;
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, BigRational::new(c, den.clone())))
            .collect();
        MPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Integer coefficients `cᵢ·d` with the common denominator `d`.
    fn integer_terms(&self) -> (Vec<(&Exps, BigInt)>, BigInt) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                if c.denom() == &den {
                    (e, c.numer().clone())
                } else {
                    (e, c.numer() * (&den / c.denom()))
                }
            })
            .collect();
        (terms, den)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e.0[v] > 0)
    }

    /// Highest-index variable that occurs.
    pub fn main_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.uses_var(v))
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e.0[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Exps::degree).max().unwrap_or(0)
    }

    /// Coefficient of `x_v^d`, as a polynomial free of `x_v`.
    pub fn coeff_in(&self, v: usize, d: u32) -> MPoly {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.0[v] == d {
                let mut f = e.clone();
                f.0[v] = 0;
                r.add_term(f, c.clone());
            }
        }
        r
    }

    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let d = f.0[v] as usize;
            f.0[v] = 0;
            out[d].add_term(f, c.clone());
        }
        out
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.0[v] > 0 {
                let mut f = e.clone();
                let k = f.0[v];
                f.0[v] -= 1;
                r.add_term(f, c * BigRational::from_integer(BigInt::from(k)));
            }
        }
        r
    }

    /// Rewrites the polynomial into a variable set of size `nvars`, sending
    /// variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> MPoly {
        let mut r = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = Exps::zero(nvars);
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    f.0[map[i]] += k;
                }
            }
            r.add_term(f, c.clone());
        }
        r
    }

    /// Substitutes `x_v := q`.
    pub fn substitute(&self, v: usize, q: &MPoly) -> MPoly {
        let coeffs = self.coeffs_in(v);
        let mut acc = Self::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = acc.mul(q).add(c);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if (0..self.nvars).any(|v| d.degree_in(v) > self.degree_in(v)) {
            return None;
        }
        let (de, dc) = d.leading_term().unwrap();
        let dinv = dc.recip();
        let mut r = self.terms.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = r.pop_last() {
            if !de.divides(&e) {
                return None;
            }
            let te = e.sub(de);
            let tc = c * &dinv;
            for (f, dcoef) in d.terms.iter().rev().skip(1) {
                let key = f.add(&te);
                let delta = dcoef * &tc;
                match r.entry(key) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(-delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        *slot.get_mut() -= delta;
                        if slot.get().is_zero() {
                            slot.remove();
                        }
                    }
                }
            }
            q.terms.insert(te, tc);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `q` with respect to `x_v`.
    fn prem(&self, q: &MPoly, v: usize) -> MPoly {
        let dq = q.degree_in(v);
        let lcq = q.coeff_in(v, dq);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dq {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            let mut shift = Exps::zero(self.nvars);
            shift.0[v] = dr - dq;
            let shifted = q.mul(&lr).mul_term(&shift, &BigRational::one());
            r = r.mul(&lcq).sub(&shifted);
        }
        r
    }

    /// Scalar `s` such that `self * s` has coprime integer coefficients and a
    /// positive leading coefficient.
    pub fn primitive_scale(&self) -> BigRational {
        primitive_scale_of(self.terms.values(), self.leading_coeff())
    }

    /// Integer-primitive associate with positive leading coefficient.
    pub fn normalized(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.primitive_scale())
    }

    /// Gcd of the coefficients with respect to `x_v`, normalized.
    fn content_in(&self, v: usize) -> MPoly {
        let mut g = Self::zero(self.nvars);
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, v: usize) -> MPoly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").normalized()
    }

    /// Renders with the given variable names, e.g. `9*g2^2+15*g2+4`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                out.push('-');
            } else if idx > 0 {
                out.push('+');
            }
            let mono = render_exps(e, names);
            if mono.is_empty() {
                let _ = write!(out, "{a}");
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{}*{}", a.numer(), mono);
                if !a.denom().is_one() {
                    let _ = write!(out, "/{}", a.denom());
                }
            }
        }
        out
    }
}

fn render_exps(e: &Exps, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.0.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], k)),
        }
    }
    parts.join("*")
}

pub(crate) fn primitive_scale_of<'a>(
    coeffs: impl Iterator<Item = &'a BigRational>,
    lead: Option<&BigRational>,
) -> BigRational {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for c in coeffs {
        den_lcm = den_lcm.lcm(c.denom());
        num_gcd = num_gcd.gcd(c.numer());
    }
    if num_gcd.is_zero() {
        return BigRational::one();
    }
    let s = BigRational::new(den_lcm, num_gcd);
    match lead {
        Some(l) if l.is_negative() => -s,
        _ => s,
    }
}

/// Greatest common divisor over Q, normalized to an integer-primitive
/// polynomial with positive leading coefficient. `gcd(0, 0) = 0`.
///
/// Recursive primitive remainder sequence in the highest occurring variable.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let nvars = a.nvars;
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(nvars);
    }
    let (a, b) = (a.normalized(), b.normalized());
    if a == b {
        return a;
    }
    match modular_gcd(&a, &b) {
        Some(g) => g.normalized(),
        None => prs_gcd(&a, &b),
    }
}

/// Recursive primitive PRS; slow on large inputs but needs no luck.
fn prs_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let nvars = a.nvars;
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(nvars);
    }
    let v = a.main_var().max(b.main_var()).unwrap();
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        if q.degree_in(v) == 0 {
            // q is primitive in x_v and free of it, hence a unit
            break MPoly::one(nvars);
        }
        let r = p.prem(&q, v);
        if r.is_zero() {
            break q.primitive_part_in(v);
        }
        p = q;
        q = r.primitive_part_in(v);
    };
    c.mul(&g).normalized()
}

pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    let g = gcd(a, b);
    a.mul(b).div_exact(&g).unwrap().normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Parses tiny test polynomials in variables x, y, z.
    fn p(terms: &[(i64, [u32; 3])]) -> MPoly {
        MPoly::from_terms(
            3,
            terms
                .iter()
                .map(|(c, e)| (Exps(e.to_vec()), q(*c, 1))),
        )
    }

    #[test]
    fn grlex_leading_term() {
        let f = p(&[(1, [2, 0, 0]), (3, [0, 1, 2]), (-1, [0, 0, 0])]);
        assert_eq!(f.leading_term().unwrap().0, &Exps(vec![0, 1, 2]));
    }

    #[test]
    fn exact_division_and_failure() {
        let a = p(&[(1, [1, 0, 0]), (1, [0, 1, 0])]);
        let b = p(&[(1, [1, 0, 0]), (-1, [0, 1, 0])]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.add(&MPoly::one(3)).div_exact(&a).is_none());
    }

    #[test]
    fn gcd_univariate_and_multivariate() {
        // x^2 - 1 and x^2 + 2x + 1 share x + 1
        let f = p(&[(1, [2, 0, 0]), (-1, [0, 0, 0])]);
        let g = p(&[(1, [2, 0, 0]), (2, [1, 0, 0]), (1, [0, 0, 0])]);
        assert_eq!(gcd(&f, &g), p(&[(1, [1, 0, 0]), (1, [0, 0, 0])]));

        let common = p(&[(2, [1, 1, 0]), (-3, [0, 0, 2]), (1, [0, 0, 0])]);
        let u = p(&[(1, [0, 1, 1]), (5, [1, 0, 0])]);
        let w = p(&[(1, [3, 0, 0]), (-1, [0, 2, 0]), (7, [0, 0, 1])]);
        let got = gcd(&common.mul(&u), &common.mul(&w).scale(&q(-3, 4)));
        assert_eq!(got, common.normalized());
        assert_eq!(gcd(&u, &w), MPoly::one(3));
    }

    #[test]
    fn gcd_with_content_only_in_lower_variable() {
        // (x + 1) y and (x + 1)(y + 1)
        let xp1 = p(&[(1, [1, 0, 0]), (1, [0, 0, 0])]);
        let a = xp1.mul(&p(&[(1, [0, 1, 0])]));
        let b = xp1.mul(&p(&[(1, [0, 1, 0]), (1, [0, 0, 0])]));
        assert_eq!(gcd(&a, &b), xp1);
    }

    #[test]
    fn normalized_is_primitive_with_positive_lead() {
        let f = MPoly::from_terms(
            3,
            [
                (Exps(vec![1, 0, 0]), q(-2, 3)),
                (Exps(vec![0, 0, 0]), q(4, 9)),
            ],
        );
        let n = f.normalized();
        assert_eq!(n, p(&[(3, [1, 0, 0]), (-2, [0, 0, 0])]));
    }

    #[test]
    fn render_uses_names() {
        let names: Vec<String> = ["g2", "g3", "x"].iter().map(|s| s.to_string()).collect();
        let f = p(&[(9, [2, 0, 0]), (15, [1, 0, 0]), (4, [0, 0, 0])]);
        assert_eq!(f.render(&names), "9*g2^2+15*g2+4");
        let g = p(&[(-1, [0, 1, 0]), (1, [0, 0, 0])]);
        assert_eq!(g.render(&names), "-g3+1");
    }

    #[test]
    fn modular_gcd_matches_prs_on_random_inputs() {
        use crate::diffield::tests::random_poly;
        use rand::{rngs::StdRng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..60 {
            let c = random_poly(&mut rng, 3, 2, 3);
            let a = random_poly(&mut rng, 3, 2, 3);
            let b = random_poly(&mut rng, 3, 2, 3);
            if [&a, &b, &c].iter().any(|f| f.is_zero()) {
                continue;
            }
            let (f, g) = (a.mul(&c), b.mul(&c));
            let got = gcd(&f, &g);
            assert_eq!(got, prs_gcd(&f.normalized(), &g.normalized()));
            assert!(f.div_exact(&got).is_some() && g.div_exact(&got).is_some());
            if !c.is_constant() {
                assert!(got.div_exact(&c).is_some());
            }
        }
    }

    #[test]
    fn gcd_of_associates_and_powers() {
        let f = p(&[(3, [1, 1, 0]), (-1, [0, 0, 1]), (2, [0, 0, 0])]);
        assert_eq!(gcd(&f.scale(&q(-7, 2)), &f), f.normalized());
        let g = p(&[(1, [0, 1, 0]), (1, [0, 0, 0])]);
        assert_eq!(gcd(&f.pow(3).mul(&g), &f.pow(2)), f.pow(2).normalized());
    }
}
