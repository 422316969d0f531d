//! Differential resultants, an independent route to Burchnall-Chaundy
//! polynomials for low orders.
//!
//! For operators `P, Q` with coefficients in `K[λ, μ…]`, the resultant is
//! the determinant of the square matrix whose rows are `∂ⁱ·P`
//! (`i < ord Q`) followed by `∂ʲ·Q` (`j < ord P`), written in the basis
//! `∂⁰, ∂¹, …, ∂^{ord P + ord Q − 1}`. For commuting `P − λ`, `Q − μ` the
//! determinant has constant coefficients and vanishes on the spectral curve.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::diffield::{DiffField, FieldElement};
use crate::odo::DiffOperator;
use crate::poly::{gcd, lcm, MPoly};
use crate::ratfunc::RatFunc;
use crate::specpoly::{poly_divide, CoeffRing, Monomial, SpectralPolynomial, WeightedOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DresError {
    #[error("both operators must have order at least 1")]
    OrderTooSmall,
    #[error("resultant has non-constant coefficients (operators do not commute?)")]
    NonConstantResultant,
    #[error("square-free part of the zero polynomial")]
    ZeroInput,
    #[error("polynomial has coefficients outside the constants field")]
    NonConstantCoefficients,
}

/// Operator `Σ aᵢ∂ⁱ` with coefficients in `K[λ, μ…]`; the spectral
/// variables are constants for `∂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralOperator {
    field: Arc<DiffField>,
    nmu: usize,
    coeffs: Vec<SpectralPolynomial>,
}

impl SpectralOperator {
    pub fn new(field: &Arc<DiffField>, nmu: usize, mut coeffs: Vec<SpectralPolynomial>) -> Self {
        while coeffs.last().is_some_and(SpectralPolynomial::is_zero) {
            coeffs.pop();
        }
        SpectralOperator {
            field: field.clone(),
            nmu,
            coeffs,
        }
    }

    /// `op − shift`, e.g. `L − λ`.
    pub fn pencil(op: &DiffOperator, shift: &SpectralPolynomial) -> Self {
        let nmu = shift.nmu();
        let field = op.field();
        let mut coeffs: Vec<SpectralPolynomial> = op
            .coeffs()
            .iter()
            .map(|c| SpectralPolynomial::constant(c.clone(), nmu))
            .collect();
        if coeffs.is_empty() {
            coeffs.push(SpectralPolynomial::zero(field, nmu, CoeffRing::Constants));
        }
        coeffs[0] = coeffs[0].sub(shift);
        Self::new(field, nmu, coeffs)
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[SpectralPolynomial] {
        &self.coeffs
    }

    /// `∂·A`
    pub fn d_left(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut coeffs: Vec<SpectralPolynomial> =
            self.coeffs.iter().map(|c| c.promote().derive()).collect();
        coeffs.push(SpectralPolynomial::zero(&self.field, self.nmu, CoeffRing::Full));
        for i in 0..n {
            coeffs[i + 1] = coeffs[i + 1].add(&self.coeffs[i]);
        }
        Self::new(&self.field, self.nmu, coeffs)
    }
}

/// Sylvester-style matrix of `∂`-shifts: rows of `P` first, then rows of `Q`.
#[derive(Clone, Debug)]
pub struct ResultantMatrix {
    rows: Vec<Vec<SpectralPolynomial>>,
}

impl ResultantMatrix {
    pub fn new(p: &SpectralOperator, q: &SpectralOperator) -> Result<Self, DresError> {
        let (np, nq) = match (p.order(), q.order()) {
            (Some(a), Some(b)) if a >= 1 && b >= 1 => (a, b),
            _ => return Err(DresError::OrderTooSmall),
        };
        let size = np + nq;
        let zero = SpectralPolynomial::zero(&p.field, p.nmu, CoeffRing::Full);
        let mut rows = Vec::with_capacity(size);
        for (op, count) in [(p, nq), (q, np)] {
            let mut shifted = op.clone();
            for i in 0..count {
                if i > 0 {
                    shifted = shifted.d_left();
                }
                let row = (0..size)
                    .map(|k| shifted.coeffs.get(k).cloned().unwrap_or_else(|| zero.clone()))
                    .collect();
                rows.push(row);
            }
        }
        Ok(ResultantMatrix { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &SpectralPolynomial {
        &self.rows[row][col]
    }

    pub fn rows(&self) -> &[Vec<SpectralPolynomial>] {
        &self.rows
    }
}

/// Integral domain operations needed by fraction-free elimination.
pub trait DomainElement: Clone {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Quotient of an exact division.
    fn exact_div(&self, other: &Self) -> Self;
}

impl DomainElement for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)));
        self / other
    }
}

/// Any monomial order serves for exact division; this one ranks `μ`
/// variables by index.
fn division_order(nmu: usize) -> WeightedOrder {
    WeightedOrder::new(nmu + 1, (1..=nmu).collect()).unwrap()
}

impl DomainElement for SpectralPolynomial {
    fn is_zero(&self) -> bool {
        SpectralPolynomial::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        SpectralPolynomial::zero(self.field(), self.nmu(), self.ring())
    }
    fn one_like(&self) -> Self {
        SpectralPolynomial::constant(self.field().one(), self.nmu())
    }
    fn mul(&self, other: &Self) -> Self {
        SpectralPolynomial::mul(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        SpectralPolynomial::sub(self, other)
    }
    fn neg(&self) -> Self {
        SpectralPolynomial::neg(self)
    }
    fn exact_div(&self, other: &Self) -> Self {
        let (mut q, r) = poly_divide(self, std::slice::from_ref(other), &division_order(self.nmu()));
        assert!(r.is_zero(), "inexact division in fraction-free elimination");
        q.pop().unwrap()
    }
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn determinant_bareiss<T: DomainElement>(matrix: &[Vec<T>]) -> Option<T> {
    let n = matrix.len();
    let sample = matrix.first()?.first()?.clone();
    let mut m: Vec<Vec<T>> = matrix.to_vec();
    let mut sign_flip = false;
    let mut prev = sample.one_like();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Some(sample.zero_like());
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].mul(&m[k][k]);
                let b = m[i][k].mul(&m[k][j]);
                let num = a.sub(&b);
                m[i][j] = if num.is_zero() {
                    num
                } else {
                    num.exact_div(&prev)
                };
            }
            m[i][k] = sample.zero_like();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Some(if sign_flip { det.neg() } else { det })
}

/// `∂Res(P, Q)`; fails unless the determinant has constant coefficients.
pub fn diff_resultant(
    p: &SpectralOperator,
    q: &SpectralOperator,
) -> Result<SpectralPolynomial, DresError> {
    let matrix = ResultantMatrix::new(p, q)?;
    let det = determinant_bareiss(&matrix.rows).expect("non-empty matrix");
    det.into_constants().ok_or(DresError::NonConstantResultant)
}

/// Product of the distinct irreducible factors of `f ∈ C[λ, μ…]`, scaled so
/// that its largest term (lexicographic, `λ` first) has coefficient 1.
///
/// The computation clears denominators into `Q[params, λ, μ…]` and divides
/// by `gcd(f, ∂f/∂λ, ∂f/∂μ1, …)` over the variables that occur.
pub fn squarefree_part(f: &SpectralPolynomial) -> Result<SpectralPolynomial, DresError> {
    if f.is_zero() {
        return Err(DresError::ZeroInput);
    }
    let field = f.field().clone();
    let nparams = field.params().len();
    let nmu = f.nmu();
    let nv = nparams + 1 + nmu;
    let lift: Vec<usize> = (0..nparams).collect();

    let mut coeffs = Vec::new();
    for (m, c) in f.terms() {
        let rf = c
            .as_param_ratfunc()
            .ok_or(DresError::NonConstantCoefficients)?;
        coeffs.push((m.clone(), rf));
    }
    let mut den = MPoly::one(nv);
    for (_, rf) in &coeffs {
        den = lcm(&den, &rf.den().remap(nv, &lift));
    }
    let mut poly = MPoly::zero(nv);
    for (m, rf) in &coeffs {
        let num = rf.num().remap(nv, &lift);
        let scale = den.div_exact(&rf.den().remap(nv, &lift)).unwrap();
        let mut e = vec![0u32; nv];
        e[nparams] = m.lambda;
        e[nparams + 1..].copy_from_slice(&m.mu);
        let mono = MPoly::from_terms(nv, [(crate::poly::Exps(e), num_rational::BigRational::one())]);
        poly = poly.add(&num.mul(&scale).mul(&mono));
    }

    let mut g = poly.clone();
    for v in nparams..nv {
        if poly.uses_var(v) {
            g = gcd(&g, &poly.derivative(v));
        }
    }
    let radical = if (nparams..nv).any(|v| poly.uses_var(v)) {
        poly.div_exact(&g).expect("gcd divides")
    } else {
        MPoly::one(nv)
    };

    // back to C[λ, μ…]
    let mut grouped: std::collections::BTreeMap<Monomial, MPoly> = Default::default();
    for (e, c) in radical.terms() {
        let m = Monomial {
            lambda: e.0[nparams],
            mu: e.0[nparams + 1..].to_vec(),
        };
        let mut pe = e.0[..nparams].to_vec();
        pe.resize(nv, 0);
        let t = MPoly::from_terms(nv, [(crate::poly::Exps(pe), c.clone())]);
        let entry = grouped.entry(m).or_insert_with(|| MPoly::zero(nv));
        *entry = entry.add(&t);
    }
    let to_params: Vec<usize> = (0..nv).map(|i| i.min(nparams.saturating_sub(1))).collect();
    let terms: Vec<(Monomial, FieldElement)> = grouped
        .into_iter()
        .map(|(m, p)| {
            let rf = if nparams == 0 {
                RatFunc::constant(0, p.as_constant().unwrap())
            } else {
                RatFunc::from_poly(p.remap(nparams, &to_params))
            };
            (m, field.from_param_ratfunc(&rf))
        })
        .collect();
    let lead = terms.last().unwrap().1.invert().unwrap();
    Ok(SpectralPolynomial::from_terms(&field, nmu, terms).scale(&lead))
}

/// `c` such that `a = c·b`, when `a` and `b` are proportional over `C`.
pub fn proportionality_constant(
    a: &SpectralPolynomial,
    b: &SpectralPolynomial,
) -> Option<FieldElement> {
    let (m, cb) = b.terms().next()?;
    let c = a.coeff(m).div(cb).ok()?;
    if c.is_zero() || !c.is_constant() {
        return None;
    }
    (b.scale(&c) == *a).then_some(c)
}
