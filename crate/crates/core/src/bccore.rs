//! Burchnall-Chaundy ideals from a Goodearl basis.
//!
//! The evaluation `φ_L: C[λ, μ1, …] → C(L)` sends `λ ↦ L` and `μᵢ ↦ Gᵢ`.
//! Every centralizer element has unique coordinates `P = Σ pᵢ(L)·Gᵢ`, found
//! by peeling off leading terms with `L^k·Gᵢ` ([`reduce_as_module`]).
//! Expanding each product `GᵢGⱼ` this way yields the relations
//! `R_{i,j} = μᵢμⱼ − Σ p_{i,j,k}(λ)μ_k − p_{i,j,0}(λ)`, which form a
//! Gröbner basis of `ker φ_L` for the weighted order ([`bc_ideal`]).

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::diffield::FieldElement;
use crate::odo::{DiffOperator, GoodearlBasis, OdoError};
use crate::specpoly::{
    is_groebner, poly_divide, Monomial, SpectralPolynomial, WeightedOrder,
};

/// Why an operator failed to reduce against the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanFailure {
    /// No basis element has an order in this class modulo `n`.
    ClassNotInGroup { class: usize },
    /// The matching basis element `G_index` has larger order.
    BelowGenerator { index: usize, generator_order: usize },
    /// The leading coefficient is not a constant.
    NonConstantLeadingCoefficient { index: usize },
}

impl fmt::Display for SpanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanFailure::ClassNotInGroup { class } => {
                write!(f, "order class {class} is not in the order group")
            }
            SpanFailure::BelowGenerator {
                index,
                generator_order,
            } => write!(f, "order is below ord(G{index}) = {generator_order}"),
            SpanFailure::NonConstantLeadingCoefficient { index } => write!(
                f,
                "leading coefficient relative to G{index} is not a constant"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BcError {
    #[error("operator is not in the C[L]-span of the basis: residual of order {order}, {reason}")]
    NotInCentralizerSpan { order: usize, reason: SpanFailure },
    #[error("polynomial has {got} mu variables but the basis provides {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("input is not reduced modulo the Burchnall-Chaundy basis")]
    InputNotReduced,
    #[error("the basis must contain at least one generator besides 1")]
    TrivialBasis,
    #[error(transparent)]
    Operator(#[from] OdoError),
}

/// Coordinates `(p0(λ), …, p_{t−1}(λ))` of an operator in the `C[L]`-basis;
/// each coordinate is a dense list of `λ`-coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCoordinates {
    coords: Vec<Vec<FieldElement>>,
}

impl ModuleCoordinates {
    pub fn coords(&self) -> &[Vec<FieldElement>] {
        &self.coords
    }

    /// Coordinate `pᵢ` as a polynomial in `λ` alone.
    pub fn coordinate(&self, basis: &GoodearlBasis, i: usize) -> SpectralPolynomial {
        let nmu = basis.t() - 1;
        SpectralPolynomial::from_terms(
            basis.field(),
            nmu,
            self.coords[i]
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::lambda_pow(nmu, k as u32), c.clone())),
        )
    }

    /// `Σ pᵢ(λ)·μᵢ` with `μ0 = 1`.
    pub fn to_polynomial(&self, basis: &GoodearlBasis) -> SpectralPolynomial {
        let nmu = basis.t() - 1;
        let terms = self.coords.iter().enumerate().flat_map(|(i, p)| {
            p.iter().enumerate().map(move |(k, c)| {
                let m = if i == 0 {
                    Monomial::lambda_pow(nmu, k as u32)
                } else {
                    Monomial::lambda_mu(nmu, k as u32, i)
                };
                (m, c.clone())
            })
        });
        SpectralPolynomial::from_terms(basis.field(), nmu, terms)
    }
}

/// Evaluation `λ ↦ L`, `μᵢ ↦ Gᵢ`. Coefficients act by left multiplication.
pub fn phi_l(p: &SpectralPolynomial, basis: &GoodearlBasis) -> Result<DiffOperator, BcError> {
    let nmu = basis.t() - 1;
    if p.nmu() != nmu {
        return Err(BcError::ArityMismatch {
            expected: nmu,
            got: p.nmu(),
        });
    }
    let mut evaluator = Evaluator::new(basis);
    let mut acc = DiffOperator::zero(basis.field());
    for (m, c) in p.terms() {
        let op = evaluator.monomial(m);
        acc = acc.add(&op.scale_left(c))?;
    }
    Ok(acc)
}

/// Memoized images of monomials.
///
/// All factors commute, so each image is built as `factor · (smaller image)`
/// with the low-order factor on the left; `∂ⁱ·Q` then needs only a few
/// Leibniz steps on the large operator.
struct Evaluator<'a> {
    basis: &'a GoodearlBasis,
    images: HashMap<Monomial, DiffOperator>,
}

impl<'a> Evaluator<'a> {
    fn new(basis: &'a GoodearlBasis) -> Self {
        Evaluator {
            basis,
            images: HashMap::new(),
        }
    }

    fn monomial(&mut self, m: &Monomial) -> DiffOperator {
        if let Some(op) = self.images.get(m) {
            return op.clone();
        }
        let mut smaller = m.clone();
        let op = if m.lambda > 0 {
            smaller.lambda -= 1;
            let rest = self.monomial(&smaller);
            self.basis.l().mul(&rest).expect("same field")
        } else if let Some(i) = m.mu.iter().position(|&a| a > 0) {
            smaller.mu[i] -= 1;
            let rest = self.monomial(&smaller);
            self.basis.gens()[i + 1].mul(&rest).expect("same field")
        } else {
            DiffOperator::one(self.basis.field())
        };
        self.images.insert(m.clone(), op.clone());
        op
    }
}

/// Coordinates of `P` in the basis, or the reason `P` is outside the
/// `C[L]`-span.
///
/// Repeatedly cancels the leading term of `P` with a constant multiple of
/// `L^k·Gᵢ`, where `Gᵢ` serves the order class of `ord(P)`. The loop runs
/// until `P` vanishes, so operators of order below `n` (constants, low-order
/// generators) are handled like any other.
pub fn reduce_as_module(
    p: &DiffOperator,
    basis: &GoodearlBasis,
) -> Result<ModuleCoordinates, BcError> {
    let n = basis.n();
    let mut coords: Vec<Vec<FieldElement>> = vec![Vec::new(); basis.t()];
    let mut evaluator = Evaluator::new(basis);
    let mut rest = p.clone();
    while let Some(ord) = rest.order().finite() {
        let index = basis
            .index_of_class(ord % n)
            .ok_or(BcError::NotInCentralizerSpan {
                order: ord,
                reason: SpanFailure::ClassNotInGroup { class: ord % n },
            })?;
        let generator_order = basis.orders()[index];
        if ord < generator_order {
            return Err(BcError::NotInCentralizerSpan {
                order: ord,
                reason: SpanFailure::BelowGenerator {
                    index,
                    generator_order,
                },
            });
        }
        let k = (ord - generator_order) / n;
        let nmu = basis.t() - 1;
        let step = evaluator.monomial(&if index == 0 {
            Monomial::lambda_pow(nmu, k as u32)
        } else {
            Monomial::lambda_mu(nmu, k as u32, index)
        });
        let c = rest
            .lc()
            .unwrap()
            .div(step.lc().unwrap())
            .expect("nonzero leading coefficient");
        if !c.is_constant() {
            return Err(BcError::NotInCentralizerSpan {
                order: ord,
                reason: SpanFailure::NonConstantLeadingCoefficient { index },
            });
        }
        let slot = &mut coords[index];
        if slot.len() <= k {
            slot.resize(k + 1, basis.field().zero());
        }
        slot[k] = &slot[k] + &c;
        rest = rest.sub(&step.scale_left(&c))?;
    }
    let coords = ModuleCoordinates { coords };
    if cfg!(debug_assertions) {
        let back = phi_l(&coords.to_polynomial(basis), basis)?;
        assert_eq!(&back, p, "module coordinates do not re-expand to the input");
    }
    Ok(coords)
}

/// One relation `R_{i,j}` (indices counted from 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub i: usize,
    pub j: usize,
    pub poly: SpectralPolynomial,
}

/// The Gröbner basis `{R_{i,j} : 1 ≤ i ≤ j ≤ t−1}` of the Burchnall-Chaundy
/// ideal, with the order it is a Gröbner basis for.
#[derive(Clone, Debug)]
pub struct BcBasis {
    relations: Vec<Relation>,
    order: WeightedOrder,
    source: GoodearlBasis,
}

impl BcBasis {
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn polys(&self) -> Vec<SpectralPolynomial> {
        self.relations.iter().map(|r| r.poly.clone()).collect()
    }

    pub fn relation(&self, i: usize, j: usize) -> Option<&SpectralPolynomial> {
        let (i, j) = (i.min(j), i.max(j));
        self.relations
            .iter()
            .find(|r| r.i == i && r.j == j)
            .map(|r| &r.poly)
    }

    pub fn order(&self) -> &WeightedOrder {
        &self.order
    }

    pub fn source(&self) -> &GoodearlBasis {
        &self.source
    }

    pub fn is_groebner(&self) -> bool {
        is_groebner(&self.polys(), &self.order)
    }

    pub fn normal_form(&self, p: &SpectralPolynomial) -> SpectralPolynomial {
        poly_divide(p, &self.relations.iter().map(|r| r.poly.clone()).collect::<Vec<_>>(), &self.order).1
    }
}

/// Builds every `R_{i,j}` from the coordinates of `GᵢGⱼ`. The products are
/// independent and evaluated in parallel; the output is sorted by `(i, j)`.
pub fn bc_ideal(basis: &GoodearlBasis) -> Result<BcBasis, BcError> {
    let t = basis.t();
    if t < 2 {
        return Err(BcError::TrivialBasis);
    }
    let nmu = t - 1;
    let field = basis.field();
    let pairs: Vec<(usize, usize)> = (1..t).flat_map(|i| (i..t).map(move |j| (i, j))).collect();
    let mut relations = pairs
        .par_iter()
        .map(|&(i, j)| {
            let product = basis.gens()[i].mul(&basis.gens()[j])?;
            let coords = reduce_as_module(&product, basis)?;
            let mut head = Monomial::one(nmu);
            head.mu[i - 1] += 1;
            head.mu[j - 1] += 1;
            let poly = SpectralPolynomial::term(field.one(), head).sub(&coords.to_polynomial(basis));
            Ok(Relation { i, j, poly })
        })
        .collect::<Result<Vec<_>, BcError>>()?;
    relations.sort_by_key(|r| (r.i, r.j));
    Ok(BcBasis {
        relations,
        order: WeightedOrder::from_basis(basis),
        source: basis.clone(),
    })
}

/// Membership in the ideal, with the (always `μ`-linear) normal form as
/// certificate.
pub fn bc_membership(p: &SpectralPolynomial, bc: &BcBasis) -> (bool, SpectralPolynomial) {
    let nf = bc.normal_form(p);
    (nf.is_zero(), nf)
}

/// Normal form of `f1·f2` for already reduced `f1, f2` (coefficients may lie
/// in `K`). Nonzero whenever both factors are nonzero, since the quotient
/// ring is a domain.
pub fn quotient_product_normal_form(
    f1: &SpectralPolynomial,
    f2: &SpectralPolynomial,
    bc: &BcBasis,
) -> Result<SpectralPolynomial, BcError> {
    for f in [f1, f2] {
        if bc.normal_form(f) != *f {
            return Err(BcError::InputNotReduced);
        }
    }
    Ok(bc.normal_form(&f1.mul(f2)))
}
