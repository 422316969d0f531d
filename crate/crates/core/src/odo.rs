//! The ring `K[∂]` of ordinary differential operators and Goodearl bases of
//! centralizers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::diffield::{DiffField, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OdoError {
    #[error("operators live over different coefficient fields")]
    FieldMismatch,
    #[error("L is not in normal form (monic, zero subleading coefficient)")]
    NotNormalForm,
    #[error("the first basis element must be the identity operator")]
    FirstNotIdentity,
    #[error("basis element G{0} does not commute with L")]
    NotCommuting(usize),
    #[error("basis elements G{0} and G{1} have the same order class modulo n")]
    DuplicateOrderClass(usize, usize),
    #[error("order classes of the basis are not closed under addition modulo n")]
    NotSubgroup,
    #[error("basis element G{0} is the zero operator")]
    ZeroGenerator(usize),
}

/// Order of an operator; the zero operator has order `−∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    MinusInfinity,
    Finite(usize),
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::MinusInfinity => None,
            Order::Finite(n) => Some(n),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::MinusInfinity => write!(f, "-inf"),
            Order::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// `Σ aᵢ∂ⁱ` with trailing zero coefficients trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOperator {
    field: Arc<DiffField>,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl DiffOperator {
    pub fn zero(field: &Arc<DiffField>) -> Self {
        DiffOperator {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Arc<DiffField>) -> Self {
        Self::scalar(field.one())
    }

    /// The operator `∂`.
    pub fn d(field: &Arc<DiffField>) -> Self {
        Self::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn scalar(c: FieldElement) -> Self {
        let field = c.field().clone();
        Self::from_coeffs(&field, vec![c])
    }

    pub fn from_coeffs(field: &Arc<DiffField>, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        DiffOperator {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Arc<DiffField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `∂ⁱ`.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Order {
        match self.coeffs.len() {
            0 => Order::MinusInfinity,
            n => Order::Finite(n - 1),
        }
    }

    pub fn lc(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    fn check(&self, other: &DiffOperator) -> Result<(), OdoError> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(OdoError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &DiffOperator) -> Result<DiffOperator, OdoError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Ok(Self::from_coeffs(&self.field, coeffs))
    }

    pub fn sub(&self, other: &DiffOperator) -> Result<DiffOperator, OdoError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOperator {
        DiffOperator {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `c·P` for a field element `c` acting on the left.
    pub fn scale_left(&self, c: &FieldElement) -> DiffOperator {
        let coeffs = self.coeffs.iter().map(|a| c * a).collect();
        Self::from_coeffs(&self.field, coeffs)
    }

    pub fn scale_rational(&self, q: &BigRational) -> DiffOperator {
        let coeffs = self.coeffs.iter().map(|a| a.scale(q)).collect();
        Self::from_coeffs(&self.field, coeffs)
    }

    /// `∂·P = Σ (∂(aᵢ)∂ⁱ + aᵢ∂ⁱ⁺¹)`.
    pub fn d_left(&self) -> DiffOperator {
        if self.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut coeffs: Vec<FieldElement> = self.coeffs.iter().map(FieldElement::derive).collect();
        coeffs.push(self.field.zero());
        for i in 0..n {
            coeffs[i + 1] = &coeffs[i + 1] + &self.coeffs[i];
        }
        Self::from_coeffs(&self.field, coeffs)
    }

    /// Operator product `P·Q`: `P = Σ aᵢ∂ⁱ` is expanded and `∂ⁱ·Q` is
    /// obtained by repeated Leibniz steps.
    pub fn mul(&self, other: &DiffOperator) -> Result<DiffOperator, OdoError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut acc = vec![self.field.zero(); n];
        let mut shifted = other.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                shifted = shifted.d_left();
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in shifted.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[j] = &acc[j] + &(a * b);
                }
            }
        }
        Ok(Self::from_coeffs(&self.field, acc))
    }

    pub fn commutator(&self, other: &DiffOperator) -> Result<DiffOperator, OdoError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn pow(&self, k: u32) -> DiffOperator {
        let mut acc = Self::one(&self.field);
        for _ in 0..k {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// Monic with zero coefficient at order `n − 1`.
    pub fn is_normal_form(&self) -> bool {
        match self.order() {
            Order::MinusInfinity => false,
            Order::Finite(0) => self.coeffs[0].is_one(),
            Order::Finite(n) => self.coeffs[n].is_one() && self.coeffs[n - 1].is_zero(),
        }
    }

    /// Parseable rendering such as `D^3 + (24*E^2/(E^4+2*E^2+1))*D`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let dpow = match i {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{i}"),
            };
            let (neg, mag) = if c.looks_negative() { (true, -c) } else { (false, c.clone()) };
            let body = if dpow.is_empty() {
                wrap(&mag.render())
            } else if mag.is_one() {
                dpow
            } else {
                format!("{}*{}", wrap(&mag.render()), dpow)
            };
            match (parts.is_empty(), neg) {
                (true, false) => parts.push(body),
                (true, true) => parts.push(format!("-{body}")),
                (false, false) => parts.push(format!("+ {body}")),
                (false, true) => parts.push(format!("- {body}")),
            }
        }
        parts.join(" ")
    }
}

fn wrap(s: &str) -> String {
    let simple = s
        .chars()
        .all(|ch| ch.is_ascii_alphanumeric() || ch == '*' || ch == '^' || ch == '_');
    if simple {
        s.to_string()
    } else {
        format!("({s})")
    }
}

/// `L` together with a `C[L]`-module basis `{1, G1, …, G_{t−1}}` of a
/// commutative algebra containing it.
#[derive(Clone, Debug)]
pub struct GoodearlBasis {
    l: DiffOperator,
    gens: Vec<DiffOperator>,
    orders: Vec<usize>,
    n: usize,
    order_group: Vec<usize>,
    class_map: BTreeMap<usize, usize>,
}

impl GoodearlBasis {
    /// Validates commutation, distinct order classes and closure of the
    /// order classes under addition modulo `n`. Order minimality of the
    /// generators is taken on trust. Error indices refer to `gens` as
    /// given; the stored generators after `1` are sorted by order.
    pub fn new(l: DiffOperator, gens: Vec<DiffOperator>) -> Result<Self, OdoError> {
        if !l.is_normal_form() || l.order() == Order::Finite(0) {
            return Err(OdoError::NotNormalForm);
        }
        let n = l.order().finite().unwrap();
        match gens.first() {
            Some(g) if *g == DiffOperator::one(l.field()) => {}
            _ => return Err(OdoError::FirstNotIdentity),
        }
        let mut orders = Vec::with_capacity(gens.len());
        let mut class_map = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            l.check(g)?;
            let ord = g.order().finite().ok_or(OdoError::ZeroGenerator(i))?;
            if i > 0 && !l.commutator(g)?.is_zero() {
                return Err(OdoError::NotCommuting(i));
            }
            if let Some(&j) = class_map.get(&(ord % n)) {
                return Err(OdoError::DuplicateOrderClass(j, i));
            }
            class_map.insert(ord % n, i);
            orders.push(ord);
        }
        for &a in class_map.keys() {
            for &b in class_map.keys() {
                if !class_map.contains_key(&((a + b) % n)) {
                    return Err(OdoError::NotSubgroup);
                }
            }
        }
        let mut perm: Vec<usize> = (0..gens.len()).collect();
        perm[1..].sort_by_key(|&i| orders[i]);
        let mut slots: Vec<Option<DiffOperator>> = gens.into_iter().map(Some).collect();
        let gens: Vec<DiffOperator> = perm.iter().map(|&i| slots[i].take().unwrap()).collect();
        let orders: Vec<usize> = perm.iter().map(|&i| orders[i]).collect();
        let class_map: BTreeMap<usize, usize> =
            orders.iter().enumerate().map(|(i, &o)| (o % n, i)).collect();
        let order_group = class_map.keys().copied().collect();
        Ok(GoodearlBasis {
            l,
            gens,
            orders,
            n,
            order_group,
            class_map,
        })
    }

    pub fn l(&self) -> &DiffOperator {
        &self.l
    }

    pub fn field(&self) -> &Arc<DiffField> {
        self.l.field()
    }

    /// `G0 = 1, G1, …`
    pub fn gens(&self) -> &[DiffOperator] {
        &self.gens
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.gens.len()
    }

    pub fn rank(&self) -> usize {
        self.n / self.t()
    }

    /// Order classes `{[ord Gᵢ]_n}`, sorted.
    pub fn order_group(&self) -> &[usize] {
        &self.order_group
    }

    /// Basis index serving the residue class `r` modulo `n`.
    pub fn index_of_class(&self, r: usize) -> Option<usize> {
        self.class_map.get(&(r % self.n)).copied()
    }

    /// Sub-basis made of the listed generators (index 0 is always kept).
    pub fn sub_basis(&self, indices: &[usize]) -> Result<GoodearlBasis, OdoError> {
        let mut gens = vec![self.gens[0].clone()];
        gens.extend(indices.iter().filter(|&&i| i != 0).map(|&i| self.gens[i].clone()));
        GoodearlBasis::new(self.l.clone(), gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::diffield::tests::small_element;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn leibniz_base_case() {
        let f = catalog::exponential_field();
        let e = f.generator().unwrap();
        let a = e.pow(3).div(&(&e + &f.one())).unwrap();
        let d = DiffOperator::d(&f);
        let got = d.mul(&DiffOperator::scalar(a.clone())).unwrap();
        assert_eq!(got, DiffOperator::from_coeffs(&f, vec![a.derive(), a]));
    }

    #[test]
    fn d_times_e_d() {
        let f = catalog::exponential_field();
        let e = f.generator().unwrap();
        let d = DiffOperator::d(&f);
        let ed = DiffOperator::from_coeffs(&f, vec![f.zero(), e.clone()]);
        let want = DiffOperator::from_coeffs(&f, vec![f.zero(), e.clone(), e]);
        assert_eq!(d.mul(&ed).unwrap(), want);
    }

    #[test]
    fn identity_and_powers() {
        let b = catalog::exponential_basis();
        let l = b.l();
        assert_eq!(&l.mul(&DiffOperator::one(l.field())).unwrap(), l);
        assert_eq!(l.pow(0), DiffOperator::one(l.field()));
        assert_eq!(l.pow(3).order(), Order::Finite(9));
        let d = DiffOperator::d(l.field());
        let d2 = DiffOperator::from_coeffs(l.field(), vec![l.field().zero(), l.field().zero(), l.field().one()]);
        assert_eq!(d.pow(2), d2);
    }

    #[test]
    fn commutator_examples() {
        let b = catalog::exponential_basis();
        let f = b.field().clone();
        assert!(b.l().commutator(&b.gens()[1]).unwrap().is_zero());
        assert!(b.l().commutator(b.l()).unwrap().is_zero());
        let e = f.generator().unwrap();
        let got = DiffOperator::d(&f).commutator(&DiffOperator::scalar(e.clone())).unwrap();
        assert_eq!(got, DiffOperator::scalar(e));
    }

    #[test]
    fn zero_operator_order() {
        let f = catalog::exponential_field();
        let z = DiffOperator::zero(&f);
        assert_eq!(z.order(), Order::MinusInfinity);
        assert!(Order::MinusInfinity < Order::Finite(0));
        assert!(z.lc().is_none());
    }

    #[test]
    fn normal_form_predicate() {
        let b = catalog::exponential_basis();
        assert!(b.l().is_normal_form());
        let f = b.field().clone();
        let two_d2 = DiffOperator::from_coeffs(&f, vec![f.zero(), f.zero(), f.from_int(2)]);
        assert!(!two_d2.is_normal_form());
        let e = f.generator().unwrap();
        let sub = DiffOperator::from_coeffs(&f, vec![f.zero(), e, f.one()]);
        assert!(!sub.is_normal_form());
        assert!(catalog::elliptic_basis().l().is_normal_form());
    }

    #[test]
    fn catalog_basis_structure() {
        let b = catalog::exponential_basis();
        assert_eq!((b.t(), b.rank()), (3, 1));
        assert_eq!(b.order_group(), &[0, 1, 2]);
        assert_eq!(b.orders(), &[0, 4, 5]);

        let b = catalog::elliptic_basis();
        assert_eq!((b.t(), b.rank()), (4, 1));
        assert_eq!(b.orders(), &[0, 5, 6, 7]);

        let s = catalog::elliptic_sub_basis();
        assert_eq!((s.t(), s.rank()), (2, 2));
        assert_eq!(s.order_group(), &[0, 2]);
    }

    #[test]
    fn catalog_centralizers_are_commutative() {
        for b in [catalog::exponential_basis(), catalog::elliptic_basis()] {
            let mut ops = vec![b.l().clone()];
            ops.extend(b.gens()[1..].iter().cloned());
            for a in &ops {
                for c in &ops {
                    assert!(a.commutator(c).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn basis_validation_errors() {
        let c = DiffField::constants(vec![]);
        let dpow = |k: usize| {
            let mut v = vec![c.zero(); k + 1];
            v[k] = c.one();
            DiffOperator::from_coeffs(&c, v)
        };
        let one = DiffOperator::one(&c);
        assert_eq!(
            GoodearlBasis::new(dpow(4), vec![one.clone(), dpow(5)]).unwrap_err(),
            OdoError::NotSubgroup
        );
        assert_eq!(
            GoodearlBasis::new(dpow(4), vec![one.clone(), dpow(6), dpow(10)]).unwrap_err(),
            OdoError::DuplicateOrderClass(1, 2)
        );
        assert_eq!(
            GoodearlBasis::new(dpow(4), vec![dpow(6)]).unwrap_err(),
            OdoError::FirstNotIdentity
        );
        let two_d2 = dpow(2).scale_rational(&q(2, 1));
        assert_eq!(
            GoodearlBasis::new(two_d2, vec![one.clone()]).unwrap_err(),
            OdoError::NotNormalForm
        );
        let ok = GoodearlBasis::new(dpow(4), vec![one, dpow(6)]).unwrap();
        assert_eq!((ok.t(), ok.rank()), (2, 2));

        let b = catalog::exponential_basis();
        let f = b.field().clone();
        let mut d4 = vec![f.zero(); 5];
        d4[4] = f.one();
        let err = GoodearlBasis::new(
            b.l().clone(),
            vec![DiffOperator::one(&f), DiffOperator::from_coeffs(&f, d4)],
        )
        .unwrap_err();
        assert_eq!(err, OdoError::NotCommuting(1));
    }

    fn random_operator(rng: &mut StdRng, f: &Arc<DiffField>) -> DiffOperator {
        let n = rng.gen_range(0..=4);
        let coeffs = (0..=n).map(|_| small_element(rng, f)).collect();
        DiffOperator::from_coeffs(f, coeffs)
    }

    #[test]
    fn randomized_ring_axioms() {
        let mut rng = StdRng::seed_from_u64(7);
        let fields = [
            catalog::exponential_field(),
            DiffField::elliptic(vec!["g2".into(), "g3".into()]).unwrap(),
        ];
        for f in &fields {
            for _ in 0..25 {
                let a = random_operator(&mut rng, f);
                let b = random_operator(&mut rng, f);
                let c = random_operator(&mut rng, f);
                let ab = a.mul(&b).unwrap();
                assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
                assert_eq!(
                    a.mul(&b.add(&c).unwrap()).unwrap(),
                    ab.add(&a.mul(&c).unwrap()).unwrap()
                );
                if let (Order::Finite(x), Order::Finite(y)) = (a.order(), b.order()) {
                    assert_eq!(ab.order(), Order::Finite(x + y));
                    assert_eq!(ab.lc().unwrap(), &(a.lc().unwrap() * b.lc().unwrap()));
                }
                let ba = b.commutator(&a).unwrap();
                assert_eq!(a.commutator(&b).unwrap(), ba.neg());
                // [P, c0 + c1 P + c2 P^2] = 0 for constants ci
                let poly_in_a = DiffOperator::scalar(f.from_rational(q(3, 2)))
                    .add(&a.scale_rational(&q(-5, 1)))
                    .unwrap()
                    .add(&a.pow(2).scale_rational(&q(2, 7)))
                    .unwrap();
                assert!(a.commutator(&poly_in_a).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn render_is_readable() {
        let b = catalog::elliptic_basis();
        assert_eq!(b.l().render(), "D^4 - 12*wp*D^2 + 1");
    }
}
