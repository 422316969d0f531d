//! Polynomials in `λ, μ1, …, μ_{t−1}` and the weighted product order.
//!
//! Monomials `λᵏμ^α` are compared by their `μ`-part first, using the weights
//! `w(μᵢ) = ord(Gᵢ)` with a lexicographic tie-break in which a `μ` of larger
//! weight is the larger variable; equal `μ`-parts fall back to the power of
//! `λ`. Every `μᵢ` therefore exceeds every power of `λ`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::diffield::{DiffField, FieldElement};
use crate::odo::GoodearlBasis;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("weights of mu{0} and mu{1} coincide modulo n")]
    DuplicateClass(usize, usize),
}

/// `λᵏμ^α`; `mu[i]` is the exponent of `μ_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub lambda: u32,
    pub mu: Vec<u32>,
}

impl Monomial {
    pub fn one(nmu: usize) -> Self {
        Monomial {
            lambda: 0,
            mu: vec![0; nmu],
        }
    }

    pub fn lambda_pow(nmu: usize, k: u32) -> Self {
        Monomial {
            lambda: k,
            mu: vec![0; nmu],
        }
    }

    /// `λᵏμᵢ` with `i` counted from 1.
    pub fn lambda_mu(nmu: usize, k: u32, i: usize) -> Self {
        let mut m = Self::lambda_pow(nmu, k);
        m.mu[i - 1] = 1;
        m
    }

    pub fn mu_degree(&self) -> u32 {
        self.mu.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.lambda == 0 && self.mu.iter().all(|&a| a == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            lambda: self.lambda + other.lambda,
            mu: self.mu.iter().zip(&other.mu).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.lambda <= other.lambda && self.mu.iter().zip(&other.mu).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            lambda: other.lambda - self.lambda,
            mu: other.mu.iter().zip(&self.mu).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            lambda: self.lambda.max(other.lambda),
            mu: self.mu.iter().zip(&other.mu).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Plain-text form such as `l^2*mu1*mu3^2`; empty for the unit.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.lambda {
            0 => {}
            1 => parts.push("l".to_string()),
            k => parts.push(format!("l^{k}")),
        }
        for (i, &a) in self.mu.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("mu{}", i + 1)),
                _ => parts.push(format!("mu{}^{}", i + 1, a)),
            }
        }
        parts.join("*")
    }
}

/// The product order `≺` with `w(μᵢ) = ord(Gᵢ)`; `w(λ) = n` is used only by
/// [`WeightedOrder::weight`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedOrder {
    n: usize,
    weights: Vec<usize>,
    /// μ indices (0-based) sorted from the largest variable down.
    lex_rank: Vec<usize>,
}

impl WeightedOrder {
    pub fn new(n: usize, weights: Vec<usize>) -> Result<Self, OrderError> {
        for (i, &w) in weights.iter().enumerate() {
            if w == 0 {
                return Err(OrderError::NonPositiveWeight);
            }
            if w % n == 0 {
                return Err(OrderError::DuplicateClass(0, i + 1));
            }
            for (j, &v) in weights.iter().enumerate().take(i) {
                if v % n == w % n {
                    return Err(OrderError::DuplicateClass(j + 1, i + 1));
                }
            }
        }
        let mut lex_rank: Vec<usize> = (0..weights.len()).collect();
        lex_rank.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
        Ok(WeightedOrder {
            n,
            weights,
            lex_rank,
        })
    }

    pub fn from_basis(basis: &GoodearlBasis) -> Self {
        Self::new(basis.n(), basis.orders()[1..].to_vec()).expect("basis orders are valid weights")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn nmu(&self) -> usize {
        self.weights.len()
    }

    fn mu_weight(&self, m: &Monomial) -> usize {
        m.mu.iter()
            .zip(&self.weights)
            .map(|(&a, &w)| a as usize * w)
            .sum()
    }

    /// `k·n + Σ αᵢ·w(μᵢ)`, the order of the operator the monomial evaluates to.
    pub fn weight(&self, m: &Monomial) -> usize {
        m.lambda as usize * self.n + self.mu_weight(m)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.mu_weight(a)
            .cmp(&self.mu_weight(b))
            .then_with(|| {
                for &i in &self.lex_rank {
                    match a.mu[i].cmp(&b.mu[i]) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            })
            .then_with(|| a.lambda.cmp(&b.lambda))
    }

    /// The unique `μ`-linear monomial of weight `w`, if any: `λ^{w/n}` when
    /// `n | w`, otherwise `λᵃμᵢ` with `w = a·n + w(μᵢ)`.
    pub fn monomial_of_weight(&self, w: usize) -> Option<Monomial> {
        let nmu = self.weights.len();
        if w % self.n == 0 {
            return Some(Monomial::lambda_pow(nmu, (w / self.n) as u32));
        }
        let i = self.weights.iter().position(|&wi| wi % self.n == w % self.n)?;
        if w < self.weights[i] {
            return None;
        }
        Some(Monomial::lambda_mu(nmu, ((w - self.weights[i]) / self.n) as u32, i + 1))
    }
}

/// Which ring the coefficients are known to lie in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoeffRing {
    /// The constants field `C`.
    Constants,
    /// The full differential field `K`.
    Full,
}

#[derive(Clone, PartialEq, Eq)]
pub struct SpectralPolynomial {
    field: Arc<DiffField>,
    nmu: usize,
    ring: CoeffRing,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl std::fmt::Debug for SpectralPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*{}", m.render()))
            .collect();
        write!(f, "[{}]", parts.join(" + "))
    }
}

impl SpectralPolynomial {
    pub fn zero(field: &Arc<DiffField>, nmu: usize, ring: CoeffRing) -> Self {
        SpectralPolynomial {
            field: field.clone(),
            nmu,
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement, nmu: usize) -> Self {
        Self::term(c, Monomial::one(nmu))
    }

    /// `c·m`; the ring tag is inferred from `c`.
    pub fn term(c: FieldElement, m: Monomial) -> Self {
        let ring = if c.is_constant() {
            CoeffRing::Constants
        } else {
            CoeffRing::Full
        };
        let field = c.field().clone();
        let mut p = Self::zero(&field, m.mu.len(), ring);
        p.add_term(m, c);
        p
    }

    pub fn lambda(field: &Arc<DiffField>, nmu: usize) -> Self {
        Self::term(field.one(), Monomial::lambda_pow(nmu, 1))
    }

    /// `μᵢ` with `i` counted from 1.
    pub fn mu(field: &Arc<DiffField>, nmu: usize, i: usize) -> Self {
        Self::term(field.one(), Monomial::lambda_mu(nmu, 0, i))
    }

    pub fn from_terms(
        field: &Arc<DiffField>,
        nmu: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let mut p = Self::zero(field, nmu, CoeffRing::Constants);
        for (m, c) in terms {
            if !c.is_constant() {
                p.ring = CoeffRing::Full;
            }
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &Arc<DiffField> {
        &self.field
    }

    pub fn nmu(&self) -> usize {
        self.nmu
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    /// Same polynomial, viewed over `K`.
    pub fn promote(&self) -> Self {
        let mut p = self.clone();
        p.ring = CoeffRing::Full;
        p
    }

    /// True when every coefficient lies in `C`.
    pub fn has_constant_coeffs(&self) -> bool {
        self.terms.values().all(FieldElement::is_constant)
    }

    /// Retags as a polynomial over `C` if every coefficient is constant.
    pub fn into_constants(mut self) -> Option<Self> {
        self.has_constant_coeffs().then(|| {
            self.ring = CoeffRing::Constants;
            self
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        debug_assert_eq!(m.mu.len(), self.nmu);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn joined_ring(&self, other: &Self) -> CoeffRing {
        self.ring.max(other.ring)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nmu, other.nmu, "variable count mismatch");
        let mut r = self.clone();
        r.ring = self.joined_ring(other);
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -&*c;
        }
        r
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        let mut r = Self::zero(&self.field, self.nmu, self.ring);
        if !s.is_constant() {
            r.ring = CoeffRing::Full;
        }
        if s.is_zero() {
            return r;
        }
        for (m, c) in &self.terms {
            r.terms.insert(m.clone(), c * s);
        }
        r
    }

    pub fn mul_term(&self, m: &Monomial, s: &FieldElement) -> Self {
        let mut r = self.scale(s);
        r.terms = r.terms.into_iter().map(|(k, c)| (k.mul(m), c)).collect();
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nmu, other.nmu, "variable count mismatch");
        let mut r = Self::zero(&self.field, self.nmu, self.joined_ring(other));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.field.one(), self.nmu);
        acc.ring = self.ring;
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading monomial and coefficient under `ord`.
    pub fn leading(&self, ord: &WeightedOrder) -> Option<(&Monomial, &FieldElement)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| ord.compare(a, b))
    }

    pub fn leading_monomial(&self, ord: &WeightedOrder) -> Option<&Monomial> {
        self.leading(ord).map(|(m, _)| m)
    }

    /// Total degree in the `μ` variables.
    pub fn mu_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::mu_degree).max().unwrap_or(0)
    }

    pub fn is_mu_linear(&self) -> bool {
        self.mu_degree() <= 1
    }

    pub fn lambda_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.lambda).max().unwrap_or(0)
    }

    /// Coefficients `q0(λ), q1(λ), …` of a `μ`-linear polynomial, as dense
    /// `λ`-coefficient lists.
    pub fn mu_linear_parts(&self) -> Option<Vec<Vec<FieldElement>>> {
        if !self.is_mu_linear() {
            return None;
        }
        let mut parts = vec![Vec::new(); self.nmu + 1];
        for (m, c) in &self.terms {
            let slot = m.mu.iter().position(|&a| a == 1).map_or(0, |i| i + 1);
            let v = &mut parts[slot];
            let k = m.lambda as usize;
            if v.len() <= k {
                v.resize(k + 1, self.field.zero());
            }
            v[k] = c.clone();
        }
        Some(parts)
    }

    /// Applies `∂` to every coefficient; `λ` and the `μᵢ` are constants.
    pub fn derive(&self) -> Self {
        let mut r = Self::zero(&self.field, self.nmu, self.ring);
        if self.ring == CoeffRing::Constants {
            return r;
        }
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.derive());
        }
        r
    }

    /// Partial derivative in `λ` (`var = 0`) or in `μ_var`.
    pub fn partial(&self, var: usize) -> Self {
        let mut r = Self::zero(&self.field, self.nmu, self.ring);
        for (m, c) in &self.terms {
            let e = if var == 0 { m.lambda } else { m.mu[var - 1] };
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            if var == 0 {
                m2.lambda -= 1;
            } else {
                m2.mu[var - 1] -= 1;
            }
            r.add_term(m2, c.scale(&num_rational::BigRational::from_integer(e.into())));
        }
        r
    }

    /// Renames `μ` variables: `μ_{i+1}` becomes `μ_{map[i]}` in a ring with
    /// `nmu` of them.
    pub fn rename_mu(&self, nmu: usize, map: &[usize]) -> Self {
        let mut r = Self::zero(&self.field, nmu, self.ring);
        for (m, c) in &self.terms {
            let mut mu = vec![0; nmu];
            for (i, &a) in m.mu.iter().enumerate() {
                mu[map[i] - 1] += a;
            }
            r.add_term(Monomial { lambda: m.lambda, mu }, c.clone());
        }
        r
    }

    /// Terms sorted by decreasing `≺`.
    pub fn sorted_terms(&self, ord: &WeightedOrder) -> Vec<(&Monomial, &FieldElement)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.compare(b.0, a.0));
        v
    }

    /// Canonical plain-text rendering with variables `l, mu1, mu2, …`,
    /// terms in decreasing `≺` order.
    pub fn render(&self, ord: &WeightedOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.sorted_terms(ord).into_iter().enumerate() {
            let neg = c.looks_negative();
            let mag = if neg { -c } else { c.clone() };
            match (idx, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mono = m.render();
            let coef = coefficient_factor(&mag.render());
            if mono.is_empty() {
                out.push_str(&coef);
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{coef}*{mono}");
            }
        }
        out
    }
}

/// Wraps a coefficient in parentheses unless it is a single product or a
/// fraction already grouped.
pub(crate) fn coefficient_factor(s: &str) -> String {
    let inner_sum = s
        .char_indices()
        .skip(1)
        .any(|(_, ch)| ch == '+' || ch == '-');
    let mut depth = 0i32;
    let mut top_level_sum = false;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => top_level_sum = true,
            _ => {}
        }
    }
    if inner_sum && top_level_sum || s.contains(' ') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Multivariate division: `p = Σ qᵢ·basisᵢ + r` where no monomial of `r` is
/// divisible by a leading monomial of the basis. The largest reducible
/// monomial is reduced first, by the first basis element that applies.
pub fn poly_divide(
    p: &SpectralPolynomial,
    basis: &[SpectralPolynomial],
    ord: &WeightedOrder,
) -> (Vec<SpectralPolynomial>, SpectralPolynomial) {
    let leads: Vec<(Monomial, FieldElement)> = basis
        .iter()
        .map(|b| {
            let (m, c) = b.leading(ord).expect("nonzero divisor");
            (m.clone(), c.invert().expect("nonzero leading coefficient"))
        })
        .collect();
    let mut quotients: Vec<SpectralPolynomial> = basis
        .iter()
        .map(|b| SpectralPolynomial::zero(&p.field, p.nmu, p.joined_ring(b)))
        .collect();
    let mut rem = SpectralPolynomial::zero(&p.field, p.nmu, p.ring);
    let mut r = p.clone();
    while let Some((m, c)) = r.leading(ord).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let qm = leads[i].0.quotient_of(&m);
                let qc = &c * &leads[i].1;
                r = r.sub(&basis[i].mul_term(&qm, &qc));
                quotients[i].add_term(qm, qc);
            }
            None => {
                r.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
    }
    rem.ring = rem.ring.max(r.ring);
    (quotients, rem)
}

/// Normal form of `p` modulo `basis`.
pub fn normal_form(
    p: &SpectralPolynomial,
    basis: &[SpectralPolynomial],
    ord: &WeightedOrder,
) -> SpectralPolynomial {
    poly_divide(p, basis, ord).1
}

/// `lcm/ℓ(f)·f·lc(g) − lcm/ℓ(g)·g·lc(f)`.
pub fn s_polynomial(
    f: &SpectralPolynomial,
    g: &SpectralPolynomial,
    ord: &WeightedOrder,
) -> SpectralPolynomial {
    let (lf, cf) = f.leading(ord).expect("nonzero f");
    let (lg, cg) = g.leading(ord).expect("nonzero g");
    let lcm = lf.lcm(lg);
    let a = f.mul_term(&lf.quotient_of(&lcm), cg);
    let b = g.mul_term(&lg.quotient_of(&lcm), cf);
    a.sub(&b)
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner(basis: &[SpectralPolynomial], ord: &WeightedOrder) -> bool {
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (i + 1..basis.len()).map(move |j| (i, j)))
        .collect();
    pairs.par_iter().all(|&(i, j)| {
        let s = s_polynomial(&basis[i], &basis[j], ord);
        normal_form(&s, basis, ord).is_zero()
    })
}
