//! Exact arithmetic in the coefficient field F_q, q = p^k.
//!
//! Elements are stored as their index in the canonical enumeration: for a
//! prime field the integer itself, for an extension the base-p number
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` built from the residue
//! `c_0 + c_1 a + ...` modulo the defining polynomial. Every element has
//! exactly one index, so equality of indices is equality of elements.
//!
//! Extensions are realized with the lexicographically smallest monic
//! irreducible of degree k over F_p. Fields with q <= 256 carry full
//! addition and multiplication tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on q accepted by [`Field::new`].
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 16;

const TABLE_LIMIT: u32 = 256;

/// Serializable description of F_q.
///
/// `modulus` holds the little-endian coefficients (leading 1 included) of the
/// polynomial defining the extension, and is empty for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn q(&self) -> u32 {
        self.p.pow(self.k)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n`, ascending, without multiplicity.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Small dense polynomial helpers over F_p, used only to pick the modulus.
fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = fp_inv(b[db], p);
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let c = (lead as u64 * inv_lead as u64 % p as u64) as u32;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let t = (c as u64 * bi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn digits(mut v: u64, base: u64, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % base) as u32);
        v /= base;
    }
    out
}

/// Exhaustive trial division by every monic polynomial of degree 1..=deg/2.
fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..(p as u64).pow(d as u32) {
            let mut g = digits(low, p as u64, d);
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `k` over F_p,
/// ordering `(c_{k-1}, ..., c_0)` lexicographically.
fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    (0..count)
        .map(|low| {
            let mut f = digits(low, p as u64, k as usize);
            f.push(1);
            f
        })
        .find(|f| fp_is_irreducible(f, p))
        .expect("an irreducible of every degree exists")
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

struct Inner {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
}

/// Handle to F_q; cheap to clone and safe to share between threads.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.spec.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

impl Field {
    /// F_{p^k} with the default size bound.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        Field::with_bound(p, k, DEFAULT_FIELD_BOUND)
    }

    pub fn with_bound(p: u32, k: u32, bound: u64) -> Result<Field> {
        Field::check_params(p, k, bound)?;
        let modulus = if k == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, k)
        };
        Ok(Field::build(FieldSpec { p, k, modulus }))
    }

    /// F_q from a cardinality `q = p^k`.
    pub fn from_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::CompositeCharacteristic(q));
        }
        let p = prime_factors(q)[0];
        let mut k = 0;
        let mut m = q;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if m != 1 {
            return Err(Error::CompositeCharacteristic(q));
        }
        let p = u32::try_from(p).map_err(|_| Error::FieldTooLarge {
            p,
            k,
            bound: DEFAULT_FIELD_BOUND,
        })?;
        Field::new(p, k)
    }

    /// Rebuild a field from a serialized spec, validating an explicit modulus.
    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        Field::check_params(spec.p, spec.k, DEFAULT_FIELD_BOUND)?;
        if spec.k == 1 {
            if !spec.modulus.is_empty() {
                return Err(Error::InvalidModulus("prime fields take no modulus".into()));
            }
        } else {
            let m = &spec.modulus;
            if m.len() != spec.k as usize + 1 || m[spec.k as usize] != 1 {
                return Err(Error::InvalidModulus(format!(
                    "expected a monic polynomial of degree {}",
                    spec.k
                )));
            }
            if m.iter().any(|&c| c >= spec.p) {
                return Err(Error::InvalidModulus("coefficient out of range".into()));
            }
            if !fp_is_irreducible(m, spec.p) {
                return Err(Error::InvalidModulus(format!("{m:?} is reducible")));
            }
        }
        Ok(Field::build(spec.clone()))
    }

    fn check_params(p: u32, k: u32, bound: u64) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::CompositeCharacteristic(p as u64));
        }
        if k == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        let too_large = Error::FieldTooLarge {
            p: p as u64,
            k,
            bound,
        };
        match (p as u64).checked_pow(k) {
            Some(q) if q <= bound && q <= u32::MAX as u64 => Ok(()),
            _ => Err(too_large),
        }
    }

    fn build(spec: FieldSpec) -> Field {
        let q = spec.q();
        let mut field = Field(Arc::new(Inner {
            spec,
            q,
            tables: None,
        }));
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = field.add_slow(a, b) as u16;
                    mul[a as usize * n + b as usize] = field.mul_slow(a, b) as u16;
                }
            }
            let mut neg = vec![0u16; n];
            let mut inv = vec![0u16; n];
            for a in 0..q {
                neg[a as usize] = field.neg_slow(a) as u16;
                if a != 0 {
                    let b = (1..q)
                        .find(|&b| mul[a as usize * n + b as usize] == 1)
                        .expect("nonzero elements are invertible");
                    inv[a as usize] = b as u16;
                }
            }
            let inner = Arc::get_mut(&mut field.0).expect("unshared during construction");
            inner.tables = Some(Tables { add, mul, neg, inv });
        }
        field
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.0.spec.k
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.spec.k == 1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.add[(a * self.0.q + b) as usize] as u32,
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.neg[a as usize] as u32,
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.mul[(a * self.0.q + b) as usize] as u32,
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        Some(match &self.0.tables {
            Some(t) => t.inv[a as usize] as u32,
            None => self.pow(a, self.0.q as u64 - 2),
        })
    }

    /// `a^e` by binary exponentiation, with `0^0 = 1`.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut result = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// The unique p-th root, `a^(q/p)`.
    pub fn pth_root(&self, a: u32) -> u32 {
        self.pow(a, (self.0.q / self.0.spec.p) as u64)
    }

    /// Index of `a^b` for the generator `a` of the extension, i.e. `p^b`.
    pub fn basis(&self, b: u32) -> u32 {
        self.0.spec.p.pow(b)
    }

    /// Base-p digits of an element index (length k).
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        digits(a as u64, self.0.spec.p as u64, self.0.spec.k as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> u32 {
        c.iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.0.spec.p + d % self.0.spec.p)
    }

    /// Checked element constructor.
    pub fn elem(&self, rep: u32) -> Result<FieldElem> {
        if rep >= self.0.q {
            return Err(Error::Parse(format!(
                "{rep} is not an element index of F_{}",
                self.0.q
            )));
        }
        Ok(FieldElem {
            field: self.clone(),
            rep,
        })
    }

    /// All q elements in canonical order: 0 first, 1 second.
    pub fn elements(&self) -> Vec<FieldElem> {
        (0..self.0.q)
            .map(|rep| FieldElem {
                field: self.clone(),
                rep,
            })
            .collect()
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.0.spec.p;
        if self.0.spec.k == 1 {
            return ((a as u64 + b as u64) % p as u64) as u32;
        }
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
        self.from_coeffs(&sum)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let p = self.0.spec.p;
        if self.0.spec.k == 1 {
            return (p - a) % p;
        }
        let c: Vec<u32> = self.coeffs(a).iter().map(|&x| (p - x) % p).collect();
        self.from_coeffs(&c)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.0.spec.p as u64;
        if self.0.spec.k == 1 {
            return (a as u64 * b as u64 % p) as u32;
        }
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u32; ca.len() + cb.len() - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let r = fp_rem(&prod, &self.0.spec.modulus, p as u32);
        self.from_coeffs(&r)
    }
}

/// An element bound to its field, with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    rep: u32,
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rep(&self) -> u32 {
        self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep == 0
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn with(&self, rep: u32) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            rep,
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.rep, other.rep)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.rep, other.rep)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.rep, other.rep)))
    }

    pub fn neg(&self) -> FieldElem {
        self.with(self.field.neg(self.rep))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        self.field
            .inv(self.rep)
            .map(|r| self.with(r))
            .ok_or(Error::ZeroInverse)
    }

    /// `self^e`; `0^0 = 1`.
    pub fn pow(&self, e: u64) -> FieldElem {
        self.with(self.field.pow(self.rep, e))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}
