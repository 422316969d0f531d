//! Dense modular gcd for integer polynomials (Brown's algorithm).
//!
//! Images modulo word-sized primes are computed by evaluating one variable
//! at a time and interpolating back; the integer result comes from Chinese
//! remaindering. Leading coefficients are normalized so that images agree,
//! and an image whose leading monomial is too large is discarded as
//! unlucky. A candidate is only returned after it divides both inputs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::poly::{Exps, MPoly};

/// Exponents in lexicographic order (index 0 most significant).
type Sparse = BTreeMap<Vec<u32>, u64>;
/// Dense univariate polynomial, index = degree.
type Uni = Vec<u64>;

#[derive(Clone, Copy)]
struct Field {
    p: u64,
}

impl Field {
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn reduce(self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    // dense univariate arithmetic

    fn trim(a: &mut Uni) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn ueval(self, a: &Uni, x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    fn umul(self, a: &Uni, b: &Uni) -> Uni {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = self.add(r[i + j], self.mul(x, y));
            }
        }
        r
    }

    /// `(quotient, remainder)` of `a` by a nonzero `b`.
    fn udivrem(self, a: &Uni, b: &Uni) -> (Uni, Uni) {
        let mut r = a.clone();
        Self::trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let inv = self.inv(*b.last().unwrap());
        let mut q = vec![0; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(*r.last().unwrap(), inv);
            q[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[i + shift] = self.sub(r[i + shift], self.mul(c, bi));
            }
            Self::trim(&mut r);
        }
        (q, r)
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    fn ugcd(self, a: &Uni, b: &Uni) -> Uni {
        let (mut a, mut b) = (a.clone(), b.clone());
        Self::trim(&mut a);
        Self::trim(&mut b);
        while !b.is_empty() {
            let r = self.udivrem(&a, &b).1;
            a = b;
            b = r;
        }
        self.monic(a)
    }

    fn monic(self, a: Uni) -> Uni {
        match a.last() {
            None => a,
            Some(&l) => {
                let inv = self.inv(l);
                a.into_iter().map(|c| self.mul(c, inv)).collect()
            }
        }
    }

    // sparse multivariate helpers

    fn scale(self, f: &Sparse, s: u64) -> Sparse {
        f.iter()
            .map(|(e, &c)| (e.clone(), self.mul(c, s)))
            .filter(|(_, c)| *c != 0)
            .collect()
    }

    fn make_monic(self, f: Sparse) -> Sparse {
        let lc = *f.values().next_back().unwrap();
        self.scale(&f, self.inv(lc))
    }

    /// Whether `d` divides `f` exactly.
    fn divides(self, f: &Sparse, d: &Sparse) -> bool {
        let (dm, &dc) = d.iter().next_back().unwrap();
        let dinv = self.inv(dc);
        let mut r = f.clone();
        while let Some((e, c)) = r.pop_last() {
            if dm.iter().zip(&e).any(|(a, b)| a > b) {
                return false;
            }
            let t: Vec<u32> = e.iter().zip(dm).map(|(a, b)| a - b).collect();
            let coef = self.mul(c, dinv);
            for (de, &dcoef) in d.iter().rev().skip(1) {
                let key: Vec<u32> = de.iter().zip(&t).map(|(a, b)| a + b).collect();
                let delta = self.mul(coef, dcoef);
                let slot = r.entry(key).or_insert(0);
                *slot = self.sub(*slot, delta);
                if *slot == 0 {
                    let key: Vec<u32> = de.iter().zip(&t).map(|(a, b)| a + b).collect();
                    r.remove(&key);
                }
            }
        }
        true
    }
}

/// Splits off the last variable: prefix exponents ↦ dense univariate.
fn split_last(f: &Sparse) -> BTreeMap<Vec<u32>, Uni> {
    let mut out: BTreeMap<Vec<u32>, Uni> = BTreeMap::new();
    for (e, &c) in f {
        let (last, prefix) = e.split_last().unwrap();
        let u = out.entry(prefix.to_vec()).or_default();
        let k = *last as usize;
        if u.len() <= k {
            u.resize(k + 1, 0);
        }
        u[k] = c;
    }
    out
}

fn join_last(groups: &BTreeMap<Vec<u32>, Uni>) -> Sparse {
    let mut out = Sparse::new();
    for (prefix, u) in groups {
        for (k, &c) in u.iter().enumerate() {
            if c != 0 {
                let mut e = prefix.clone();
                e.push(k as u32);
                out.insert(e, c);
            }
        }
    }
    out
}

/// Content with respect to all but the last variable.
fn content_last(fp: Field, groups: &BTreeMap<Vec<u32>, Uni>) -> Uni {
    let mut g: Uni = Vec::new();
    for u in groups.values() {
        g = fp.ugcd(&g, u);
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn eval_last(fp: Field, f: &Sparse, x: u64) -> Sparse {
    let mut out = Sparse::new();
    for (prefix, u) in split_last(f) {
        let v = fp.ueval(&u, x);
        if v != 0 {
            out.insert(prefix, v);
        }
    }
    out
}

fn degree_last(f: &Sparse) -> usize {
    f.keys().map(|e| *e.last().unwrap() as usize).max().unwrap_or(0)
}

fn is_constant(f: &Sparse) -> bool {
    f.len() == 1 && f.keys().next().unwrap().iter().all(|&k| k == 0)
}

/// Monic gcd of two nonzero polynomials in `k ≥ 1` variables over `F_p`.
/// `None` if the evaluation points run out without a verified result.
fn pgcd(fp: Field, a: &Sparse, b: &Sparse, k: usize) -> Option<Sparse> {
    if k == 1 {
        let to_uni = |f: &Sparse| split_last(f).remove(&Vec::new()).unwrap_or_default();
        let g = fp.ugcd(&to_uni(a), &to_uni(b));
        return Some(join_last(&BTreeMap::from([(Vec::new(), g)])));
    }
    let (mut ga, mut gb) = (split_last(a), split_last(b));
    let ca = content_last(fp, &ga);
    let cb = content_last(fp, &gb);
    let c = fp.ugcd(&ca, &cb);
    for u in ga.values_mut() {
        *u = fp.udivrem(u, &ca).0;
    }
    for u in gb.values_mut() {
        *u = fp.udivrem(u, &cb).0;
    }
    let la = ga.values().next_back().unwrap().clone();
    let lb = gb.values().next_back().unwrap().clone();
    let g = fp.ugcd(&la, &lb);
    let (a, b) = (join_last(&ga), join_last(&gb));
    let bound = (g.len() - 1) + degree_last(&a).min(degree_last(&b));

    let mut h: Option<BTreeMap<Vec<u32>, Uni>> = None;
    let mut q: Uni = vec![1];
    let mut points = 0usize;
    let limit = 4 * bound + 64;
    for alpha in 1..=limit as u64 {
        if fp.ueval(&la, alpha) == 0 || fp.ueval(&lb, alpha) == 0 {
            continue;
        }
        let a_img = eval_last(fp, &a, alpha);
        let b_img = eval_last(fp, &b, alpha);
        let image = pgcd(fp, &a_img, &b_img, k - 1)?;
        if is_constant(&image) {
            // the primitive parts are coprime
            let groups = BTreeMap::from([(vec![0u32; k - 1], c.clone())]);
            return Some(fp.make_monic(join_last(&groups)));
        }
        let image = fp.scale(&image, fp.ueval(&g, alpha));
        let lm = image.keys().next_back().unwrap().clone();
        let current = h.as_ref().map(|h| h.keys().next_back().unwrap().clone());
        match current.map(|cur| lm.cmp(&cur)) {
            Some(Ordering::Greater) => continue,
            Some(Ordering::Equal) => {
                let h = h.as_mut().unwrap();
                let qa_inv = fp.inv(fp.ueval(&q, alpha));
                let mut keys: Vec<Vec<u32>> = h.keys().cloned().collect();
                keys.extend(image.keys().cloned());
                keys.sort();
                keys.dedup();
                for key in keys {
                    let old = h.get(&key).map(|u| fp.ueval(u, alpha)).unwrap_or(0);
                    let new = image.get(&key).copied().unwrap_or(0);
                    let delta = fp.mul(fp.sub(new, old), qa_inv);
                    if delta == 0 {
                        continue;
                    }
                    let corr: Uni = q.iter().map(|&x| fp.mul(x, delta)).collect();
                    let slot = h.entry(key).or_default();
                    if slot.len() < corr.len() {
                        slot.resize(corr.len(), 0);
                    }
                    for (s, x) in slot.iter_mut().zip(&corr) {
                        *s = fp.add(*s, *x);
                    }
                    Field::trim(slot);
                }
                h.retain(|_, u| !u.is_empty());
                points += 1;
            }
            _ => {
                h = Some(
                    image
                        .iter()
                        .map(|(e, &c)| (e.clone(), vec![c]))
                        .collect(),
                );
                q = vec![1];
                points = 1;
            }
        }
        q = fp.umul(&q, &vec![fp.sub(0, alpha), 1]);
        if points > bound {
            let mut groups = h.clone().unwrap();
            let cont = content_last(fp, &groups);
            for u in groups.values_mut() {
                *u = fp.udivrem(u, &cont).0;
            }
            let cand = join_last(&groups);
            if fp.divides(&a, &cand) && fp.divides(&b, &cand) {
                for u in groups.values_mut() {
                    *u = fp.umul(u, &c);
                }
                return Some(fp.make_monic(join_last(&groups)));
            }
            h = None;
            points = 0;
        }
    }
    None
}

fn is_probable_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let fp = Field { p: n };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = fp.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = fp.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The largest primes below `2^61`, computed once.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        ((1u64 << 60)..(1u64 << 61))
            .rev()
            .filter(|&n| is_probable_prime(n))
            .take(64)
            .collect()
    })
}

fn symmetric(c: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    if c > half {
        c - m
    } else {
        c.clone()
    }
}

/// Gcd of two nonconstant integer polynomials, primitive up to sign.
/// `None` if no verified result was found within the prime budget.
pub(crate) fn modular_gcd(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    let nvars = a.nvars();
    let used: Vec<usize> = (0..nvars).filter(|&v| a.uses_var(v) || b.uses_var(v)).collect();
    let k = used.len();
    let local = |f: &MPoly| -> BTreeMap<Vec<u32>, BigInt> {
        f.terms()
            .map(|(e, c)| {
                debug_assert!(c.is_integer());
                (used.iter().map(|&v| e.0[v]).collect(), c.numer().clone())
            })
            .collect()
    };
    let (la, lb) = (local(a), local(b));
    let lca = la.values().next_back().unwrap().clone();
    let lcb = lb.values().next_back().unwrap().clone();
    let gamma = lca.gcd(&lcb);

    let mut acc: Option<(BTreeMap<Vec<u32>, BigInt>, BigInt)> = None;
    let mut last_lift: Option<BTreeMap<Vec<u32>, BigInt>> = None;
    for &p in primes() {
        let fp = Field { p };
        if fp.reduce(&lca) == 0 || fp.reduce(&lcb) == 0 {
            continue;
        }
        let reduce = |f: &BTreeMap<Vec<u32>, BigInt>| -> Sparse {
            f.iter()
                .map(|(e, c)| (e.clone(), fp.reduce(c)))
                .filter(|(_, c)| *c != 0)
                .collect()
        };
        let image = pgcd(fp, &reduce(&la), &reduce(&lb), k)?;
        if is_constant(&image) {
            return Some(MPoly::one(nvars));
        }
        let image = fp.scale(&image, fp.reduce(&gamma));
        let lm = image.keys().next_back().unwrap().clone();
        let current = acc.as_ref().map(|(h, _)| h.keys().next_back().unwrap().clone());
        match current.map(|cur| lm.cmp(&cur)) {
            Some(Ordering::Greater) => continue,
            Some(Ordering::Equal) => {
                let (h, m) = acc.as_mut().unwrap();
                let pb = BigInt::from(p);
                // x ≡ h (mod m), x ≡ c (mod p)
                let m_inv = BigInt::from(fp.inv(fp.reduce(m)));
                let mut keys: Vec<Vec<u32>> = h.keys().cloned().collect();
                keys.extend(image.keys().cloned());
                keys.sort();
                keys.dedup();
                for key in keys {
                    let old = h.get(&key).cloned().unwrap_or_default();
                    let new = BigInt::from(image.get(&key).copied().unwrap_or(0));
                    let t = ((new - &old) * &m_inv).mod_floor(&pb);
                    let val = old + &*m * t;
                    h.insert(key, val);
                }
                *m *= pb;
                h.retain(|_, c| !c.is_zero());
            }
            _ => {
                acc = Some((
                    image.iter().map(|(e, &c)| (e.clone(), BigInt::from(c))).collect(),
                    BigInt::from(p),
                ));
                last_lift = None;
            }
        }
        let (h, m) = acc.as_ref().unwrap();
        let half = m / 2;
        let lift: BTreeMap<Vec<u32>, BigInt> = h
            .iter()
            .map(|(e, c)| (e.clone(), symmetric(c, m, &half)))
            .collect();
        if last_lift.as_ref() == Some(&lift) {
            let cand = MPoly::from_terms(
                nvars,
                lift.iter().map(|(e, c)| {
                    let mut g = Exps::zero(nvars);
                    for (i, &v) in used.iter().enumerate() {
                        g.0[v] = e[i];
                    }
                    (g, BigRational::from_integer(c.clone()))
                }),
            )
            .normalized();
            if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                return Some(cand);
            }
        }
        last_lift = Some(lift);
    }
    None
}
