//! The ring A = F_q[t]: dense polynomials, irreducibility, factorization and
//! enumeration of the monic and irreducible sets of a given degree.
//!
//! A monic polynomial of degree n is addressed by its packed index
//! `c_0 + c_1 q + ... + c_{n-1} q^{n-1}` (the leading 1 is implicit).
//! Increasing index is the canonical lexicographic order used everywhere.

pub(crate) mod affine;
mod cache;
mod factor;
pub mod kernel;
pub mod residue;
mod sieve;
mod text;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, mobius};
use crate::error::{Error, Result};
use crate::fqfield::{Field, FieldElem};
use crate::par::Exec;

pub use factor::FactorMethod;
pub use sieve::{IrreducibleCache, IrreducibleList};

/// Default cap on the number of polynomials a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Dense polynomial over F_q, little-endian, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Build from element indices; trailing zeros are dropped.
    pub fn new(field: &Field, coeffs: Vec<u32>) -> Result<Poly> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= field.q()) {
            return Err(Error::Parse(format!(
                "{c} is not an element index of F_{}",
                field.q()
            )));
        }
        Ok(Poly::from_raw(field, coeffs))
    }

    pub(crate) fn from_raw(field: &Field, mut coeffs: Vec<u32>) -> Poly {
        kernel::trim(&mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_elems(field: &Field, elems: &[FieldElem]) -> Result<Poly> {
        if elems.iter().any(|e| e.field() != field) {
            return Err(Error::MixedFields);
        }
        Ok(Poly::from_raw(field, elems.iter().map(|e| e.rep()).collect()))
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::from_raw(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::from_raw(field, vec![1])
    }

    pub fn t(field: &Field) -> Poly {
        Poly::from_raw(field, vec![0, 1])
    }

    pub fn constant(c: &FieldElem) -> Poly {
        Poly::from_raw(c.field(), vec![c.rep()])
    }

    /// The monic polynomial of degree `n` with packed index `idx`.
    pub fn from_index(field: &Field, n: usize, idx: u64) -> Poly {
        let mut coeffs = kernel::unpack(field.q() as u64, idx, n);
        coeffs.push(1);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        let rep = self.coeffs.get(i).copied().unwrap_or(0);
        self.field.elem(rep).expect("stored coefficients are in range")
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Packed index of the non-leading coefficients.
    pub fn index(&self) -> u64 {
        let n = self.coeffs.len().saturating_sub(1);
        kernel::pack(self.field.q() as u64, &self.coeffs[..n])
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn wrap(&self, coeffs: Vec<u32>) -> Poly {
        Poly::from_raw(&self.field, coeffs)
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.wrap(kernel::add(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.wrap(kernel::sub(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn neg(&self) -> Poly {
        self.wrap(kernel::neg(&self.field, &self.coeffs))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.wrap(kernel::mul(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn scale(&self, c: &FieldElem) -> Result<Poly> {
        if c.field() != &self.field {
            return Err(Error::MixedFields);
        }
        Ok(self.wrap(kernel::scale(&self.field, &self.coeffs, c.rep())))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut result = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        result
    }

    /// `(quotient, remainder)` with `deg r < deg b`.
    pub fn divrem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = kernel::divrem(&self.field, &self.coeffs, &b.coeffs);
        Ok((self.wrap(q), self.wrap(r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(b)?.1)
    }

    /// Monic gcd; `gcd(a, 0)` is `a` made monic.
    pub fn gcd(&self, other: &Poly) -> Result<MonicPoly> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroGcd);
        }
        Ok(MonicPoly(self.wrap(kernel::gcd(
            &self.field,
            &self.coeffs,
            &other.coeffs,
        ))))
    }

    /// `self^e mod m`, for `deg m >= 1`.
    pub fn powmod(&self, e: u64, m: &Poly) -> Result<Poly> {
        self.same_field(m)?;
        match m.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            _ => {}
        }
        let inv = self.field.inv(*m.coeffs.last().unwrap()).unwrap();
        let monic = kernel::scale(&self.field, &m.coeffs, inv);
        Ok(self.wrap(kernel::powmod(&self.field, &self.coeffs, e, &monic)))
    }

    pub fn derivative(&self) -> Poly {
        self.wrap(kernel::derivative(&self.field, &self.coeffs))
    }

    pub fn to_monic(&self) -> Result<MonicPoly> {
        if self.is_zero() {
            return Err(Error::NotMonic("0".into()));
        }
        Ok(MonicPoly(
            self.wrap(kernel::make_monic(&self.field, &self.coeffs)),
        ))
    }

    /// Evaluate at a field element (Horner).
    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }
}

impl Ord for Poly {
    /// Canonical order: by degree, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format(self))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::format(self))
    }
}

/// A polynomial with leading coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonicPoly(Poly);

impl MonicPoly {
    pub fn new(p: Poly) -> Result<MonicPoly> {
        if p.is_monic() {
            Ok(MonicPoly(p))
        } else {
            Err(Error::NotMonic(p.to_string()))
        }
    }

    pub fn from_index(field: &Field, n: usize, idx: u64) -> MonicPoly {
        MonicPoly(Poly::from_index(field, n, idx))
    }

    pub fn parse(field: &Field, s: &str) -> Result<MonicPoly> {
        MonicPoly::new(Poly::parse(field, s)?)
    }

    pub fn degree(&self) -> usize {
        self.0.coeffs.len() - 1
    }

    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }
}

impl std::ops::Deref for MonicPoly {
    type Target = Poly;
    fn deref(&self) -> &Poly {
        &self.0
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `unit * prod prime^exponent`, primes sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub factors: Vec<(MonicPoly, u32)>,
}

impl Factorization {
    pub fn product(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for (p, e) in &self.factors {
            acc = acc.mul(&p.pow(*e as u64)).expect("same field");
        }
        acc
    }

    pub fn primes(&self) -> impl Iterator<Item = &MonicPoly> {
        self.factors.iter().map(|(p, _)| p)
    }
}

/// How [`PolyRing::irreducibles`] produces a degree list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IrreducibleMode {
    #[default]
    Sieve,
    Rabin,
}

/// `pi_q(n) = (1/n) sum_{d|n} mu(d) q^{n/d}`, exact.
pub fn count_irreducibles(q: u64, n: u64) -> Result<u128> {
    if n == 0 {
        return Err(Error::DegreeTooSmall);
    }
    let mut total: i128 = 0;
    for d in divisors(n) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let term = (q as i128)
            .checked_pow((n / d) as u32)
            .ok_or(Error::BudgetExceeded {
                required: u128::MAX,
                budget: u64::MAX,
            })?;
        total += mu as i128 * term;
    }
    Ok((total / n as i128) as u128)
}

/// F_q[t] together with the enumeration settings and the shared irreducible
/// cache.
#[derive(Clone)]
pub struct PolyRing {
    field: Field,
    budget: u64,
    exec: Exec,
    mode: IrreducibleMode,
    seed: u64,
    cache: Arc<IrreducibleCache>,
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[t]", self.field)
    }
}

impl PolyRing {
    pub fn new(field: Field) -> PolyRing {
        PolyRing {
            field,
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
            mode: IrreducibleMode::Sieve,
            seed: 0x5eed,
            cache: Arc::new(IrreducibleCache::default()),
        }
    }

    pub fn with_budget(mut self, budget: u64) -> PolyRing {
        self.budget = budget;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> PolyRing {
        self.exec = exec;
        self
    }

    pub fn with_mode(mut self, mode: IrreducibleMode) -> PolyRing {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> PolyRing {
        self.seed = seed;
        self
    }

    /// Share a cache between rings over the same field.
    pub fn with_cache(mut self, cache: Arc<IrreducibleCache>) -> PolyRing {
        self.cache = cache;
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cache(&self) -> &Arc<IrreducibleCache> {
        &self.cache
    }

    /// `q^n`, or the budget error if it exceeds the budget.
    pub fn check_budget(&self, n: usize) -> Result<u64> {
        let required = (self.q() as u128).checked_pow(n as u32);
        match required {
            Some(r) if r <= self.budget as u128 => Ok(r as u64),
            _ => Err(Error::BudgetExceeded {
                required: required.unwrap_or(u128::MAX),
                budget: self.budget,
            }),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        Poly::parse(&self.field, s)
    }

    pub fn parse_monic(&self, s: &str) -> Result<MonicPoly> {
        MonicPoly::parse(&self.field, s)
    }

    /// All `q^n` monic polynomials of degree `n`, in index order.
    pub fn enumerate_monic(&self, n: usize) -> Result<MonicIter> {
        let end = self.check_budget(n)?;
        Ok(MonicIter {
            field: self.field.clone(),
            n,
            next: 0,
            end,
        })
    }

    /// Packed indices of the monic irreducibles of degree `n`, from the cache.
    pub fn irreducible_list(&self, n: usize) -> Result<Arc<IrreducibleList>> {
        if n == 0 {
            return Err(Error::DegreeTooSmall);
        }
        self.cache.get_or_build(self, n)
    }

    pub fn irreducibles(&self, n: usize) -> Result<Vec<MonicPoly>> {
        let list = self.irreducible_list(n)?;
        Ok(list
            .indices()
            .iter()
            .map(|&i| MonicPoly::from_index(&self.field, n, i))
            .collect())
    }

    /// Build a degree list with an explicit mode, bypassing the cache.
    pub fn irreducibles_with_mode(&self, n: usize, mode: IrreducibleMode) -> Result<Vec<u64>> {
        if n == 0 {
            return Err(Error::DegreeTooSmall);
        }
        match mode {
            IrreducibleMode::Sieve => sieve::sieve_degree(self, n),
            IrreducibleMode::Rabin => sieve::rabin_degree(self, n),
        }
    }

    pub fn count_irreducibles(&self, n: usize) -> Result<u128> {
        count_irreducibles(self.q(), n as u64)
    }

    /// Rabin's test.
    pub fn is_irreducible(&self, f: &MonicPoly) -> Result<bool> {
        if f.field() != &self.field {
            return Err(Error::MixedFields);
        }
        if f.degree() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        Ok(sieve::rabin(&self.field, f.coeffs()))
    }

    pub fn factor(&self, f: &Poly) -> Result<Factorization> {
        self.factor_with(f, FactorMethod::Auto)
    }

    pub fn factor_with(&self, f: &Poly, method: FactorMethod) -> Result<Factorization> {
        if f.field() != &self.field {
            return Err(Error::MixedFields);
        }
        match f.degree() {
            None | Some(0) => Err(Error::ConstantPolynomial),
            Some(_) => factor::factor(self, f, method),
        }
    }
}

/// Iterator over the monic polynomials of one degree.
pub struct MonicIter {
    field: Field,
    n: usize,
    next: u64,
    end: u64,
}

impl Iterator for MonicIter {
    type Item = MonicPoly;

    fn next(&mut self) -> Option<MonicPoly> {
        if self.next == self.end {
            return None;
        }
        let f = MonicPoly::from_index(&self.field, self.n, self.next);
        self.next += 1;
        Some(f)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for MonicIter {}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(q: u64) -> PolyRing {
        PolyRing::new(Field::from_order(q).unwrap())
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(2);
        let a = r.parse("t+1").unwrap();
        assert_eq!(a.mul(&a).unwrap(), r.parse("t^2+1").unwrap());
        let r3 = ring(3);
        let s = r3
            .parse("2*t+1")
            .unwrap()
            .add(&r3.parse("t+2").unwrap())
            .unwrap();
        assert!(s.is_zero());
        assert_eq!(s.degree(), None);
        let f = r3.parse("t^2+2").unwrap();
        assert_eq!(f.mul(&Poly::one(r3.field())).unwrap(), f);
    }

    #[test]
    fn divrem_examples() {
        let r = ring(2);
        let (q, rem) = r
            .parse("t^2+t+1")
            .unwrap()
            .divrem(&r.parse("t").unwrap())
            .unwrap();
        assert_eq!((q.to_string(), rem.to_string()), ("t+1".into(), "1".into()));
        let r3 = ring(3);
        let (q, rem) = r3
            .parse("t^3")
            .unwrap()
            .divrem(&r3.parse("t+1").unwrap())
            .unwrap();
        assert_eq!(q.to_string(), "t^2+2*t+1");
        assert_eq!(rem.to_string(), "2");
        let f = r3.parse("2*t^2+t").unwrap();
        let (q, rem) = f.divrem(&f).unwrap();
        assert!(q.is_one() && rem.is_zero());
        assert_eq!(
            f.divrem(&Poly::zero(r3.field())),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn gcd_examples() {
        let r = ring(2);
        let g = r
            .parse("t^2+t")
            .unwrap()
            .gcd(&r.parse("t+1").unwrap())
            .unwrap();
        assert_eq!(g.to_string(), "t+1");
        let g = r.parse("t").unwrap().gcd(&r.parse("t+1").unwrap()).unwrap();
        assert!(g.is_one());
        let r5 = ring(5);
        let g = r5
            .parse("2*t+2")
            .unwrap()
            .gcd(&r5.parse("3*t+3").unwrap())
            .unwrap();
        assert_eq!(g.to_string(), "t+1");
        let z = Poly::zero(r5.field());
        assert_eq!(z.gcd(&z), Err(Error::ZeroGcd));
        assert_eq!(
            r5.parse("3*t").unwrap().gcd(&z).unwrap().to_string(),
            "t"
        );
    }

    #[test]
    fn powmod_examples() {
        let r = ring(2);
        let t = Poly::t(r.field());
        let m = r.parse("t^2+t+1").unwrap();
        assert_eq!(t.powmod(2, &m).unwrap().to_string(), "t+1");
        assert_eq!(t.powmod(4, &m).unwrap().to_string(), "t");
        assert!(t.powmod(0, &m).unwrap().is_one());
        assert_eq!(
            t.powmod(3, &Poly::one(r.field())),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn canonical_order() {
        let r = ring(3);
        let mut v: Vec<Poly> = ["t^2", "t+2", "2", "t^2+1", "t", "0"]
            .iter()
            .map(|s| r.parse(s).unwrap())
            .collect();
        v.sort();
        let s: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["0", "2", "t", "t+2", "t^2", "t^2+1"]);
    }

    #[test]
    fn enumerate_examples() {
        let r = ring(2);
        let one: Vec<String> = r.enumerate_monic(1).unwrap().map(|f| f.to_string()).collect();
        assert_eq!(one, ["t", "t+1"]);
        let zero: Vec<String> = r.enumerate_monic(0).unwrap().map(|f| f.to_string()).collect();
        assert_eq!(zero, ["1"]);
        assert_eq!(ring(3).enumerate_monic(2).unwrap().count(), 9);
        let small = ring(2).with_budget(1 << 10);
        assert_eq!(
            small.enumerate_monic(11).err(),
            Some(Error::BudgetExceeded {
                required: 2048,
                budget: 1024
            })
        );
    }

    #[test]
    fn irreducible_examples() {
        let r = ring(2);
        let two: Vec<String> = r.irreducibles(2).unwrap().iter().map(|f| f.to_string()).collect();
        assert_eq!(two, ["t^2+t+1"]);
        let one: Vec<String> = r.irreducibles(1).unwrap().iter().map(|f| f.to_string()).collect();
        assert_eq!(one, ["t", "t+1"]);
        assert_eq!(r.irreducibles(4).unwrap().len(), 3);
        assert_eq!(r.irreducibles(0).err(), Some(Error::DegreeTooSmall));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_irreducibles(2, 1).unwrap(), 2);
        assert_eq!(count_irreducibles(2, 4).unwrap(), 3);
        assert_eq!(count_irreducibles(3, 3).unwrap(), 8);
        assert_eq!(count_irreducibles(2, 0), Err(Error::DegreeTooSmall));
        // (2^100 - 2^50 - 2^20 + 2^10) / 100
        assert_eq!(
            count_irreducibles(2, 100).unwrap(),
            12676506002282282755967953152u128
        );
    }

    #[test]
    fn rabin_examples() {
        let r2 = ring(2);
        let irr = |r: &PolyRing, s: &str| r.is_irreducible(&r.parse_monic(s).unwrap()).unwrap();
        assert!(irr(&r2, "t^2+t+1"));
        assert!(!irr(&r2, "t^2+1"));
        assert!(irr(&ring(3), "t^2+1"));
        assert_eq!(
            r2.is_irreducible(&r2.parse_monic("1").unwrap()),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = ring(2).parse("t").unwrap();
        let b = ring(3).parse("t").unwrap();
        assert_eq!(a.add(&b), Err(Error::MixedFields));
        assert_eq!(a.mul(&b), Err(Error::MixedFields));
    }
}
