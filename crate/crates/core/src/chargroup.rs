//! The residue ring A/QA, its unit group and the Dirichlet characters mod Q.
//!
//! The unit group is decomposed by brute force: starting from the trivial
//! subgroup H, repeatedly take an element whose image in G/H has maximal
//! order m, correct it so that it has order exactly m in G, and close H
//! under it. Every unit then carries an exponent vector (its discrete log)
//! against the generators, and a character is an exponent vector `a` with
//! `chi(g_1^{e_1} ... g_r^{e_r}) = exp(2 pi i sum a_i e_i / d_i)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::arith::lcm;
use crate::error::{Error, Result};
use crate::fqfield::prime_factors;
use crate::polyring::affine::AffineWalk;
use crate::polyring::residue::Reducer;
use crate::polyring::{Factorization, MonicPoly, Poly, PolyRing};

/// Default cap on `|Q|` for ring construction.
pub const DEFAULT_UNIT_BUDGET: u64 = 1 << 20;

const NOT_IN_GROUP: u32 = u32::MAX;

struct RingInner {
    ring: PolyRing,
    modulus: MonicPoly,
    factorization: Factorization,
    phi: u64,
    reducer: Reducer,
    units: OnceLock<UnitGroup>,
    prime_hist: RwLock<HashMap<usize, Arc<Vec<u64>>>>,
}

/// `A/QA` for a monic `Q` of degree >= 1. Cheap to clone.
#[derive(Clone)]
pub struct ResidueRing(Arc<RingInner>);

impl PartialEq for ResidueRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}

impl fmt::Debug for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A/({})", self.0.modulus)
    }
}

impl ResidueRing {
    pub fn new(ring: &PolyRing, modulus: &MonicPoly) -> Result<ResidueRing> {
        ResidueRing::with_budget(ring, modulus, DEFAULT_UNIT_BUDGET)
    }

    pub fn with_budget(ring: &PolyRing, modulus: &MonicPoly, budget: u64) -> Result<ResidueRing> {
        if modulus.field() != ring.field() {
            return Err(Error::MixedFields);
        }
        let m = modulus.degree();
        if m == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let size = (ring.q() as u128).pow(m as u32);
        if size > budget as u128 {
            return Err(Error::BudgetExceeded {
                required: size,
                budget,
            });
        }
        let factorization = ring.factor(modulus)?;
        let q = ring.q();
        let phi = factorization.factors.iter().fold(1u64, |acc, (p, e)| {
            let norm = q.pow(p.degree() as u32);
            acc * norm.pow(e - 1) * (norm - 1)
        });
        let reducer = Reducer::new(ring.field(), modulus.coeffs());
        Ok(ResidueRing(Arc::new(RingInner {
            ring: ring.clone(),
            modulus: modulus.clone(),
            factorization,
            phi,
            reducer,
            units: OnceLock::new(),
            prime_hist: RwLock::new(HashMap::new()),
        })))
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.0.ring
    }

    pub fn modulus(&self) -> &MonicPoly {
        &self.0.modulus
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.degree()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.0.factorization
    }

    /// `Phi(Q) = |(A/QA)^x|`.
    pub fn phi(&self) -> u64 {
        self.0.phi
    }

    pub fn reducer(&self) -> &Reducer {
        &self.0.reducer
    }

    /// `|Q| = q^{deg Q}`.
    pub fn size(&self) -> u64 {
        self.0.reducer.size()
    }

    /// Packed residue of `f mod Q`.
    pub fn residue(&self, f: &Poly) -> Result<u64> {
        if f.field() != self.0.ring.field() {
            return Err(Error::MixedFields);
        }
        Ok(self.0.reducer.reduce(f.coeffs()))
    }

    pub fn residue_poly(&self, r: u64) -> Poly {
        Poly::new(self.0.ring.field(), self.0.reducer.unpack(r)).expect("packed digits are in range")
    }

    pub fn unit_group(&self) -> &UnitGroup {
        self.0.units.get_or_init(|| UnitGroup::build(self))
    }

    pub fn is_unit(&self, r: u64) -> bool {
        self.unit_group().code[r as usize] != NOT_IN_GROUP
    }

    /// Residues of the units, ascending.
    pub fn units(&self) -> Vec<u64> {
        let g = self.unit_group();
        (0..self.size())
            .filter(|&r| g.code[r as usize] != NOT_IN_GROUP)
            .collect()
    }

    /// Count of irreducibles of degree `n` per residue class, cached.
    pub fn prime_histogram(&self, n: usize) -> Result<Arc<Vec<u64>>> {
        if let Some(h) = self.0.prime_hist.read().expect("lock").get(&n) {
            return Ok(h.clone());
        }
        let h = Arc::new(self.0.ring.prime_residue_histogram(&self.0.reducer, n)?);
        Ok(self
            .0
            .prime_hist
            .write()
            .expect("lock")
            .entry(n)
            .or_insert(h)
            .clone())
    }

    /// Residues of all multiples of the prime divisors of Q.
    fn non_units(&self) -> Vec<bool> {
        let field = self.0.ring.field();
        let m = self.degree();
        let mut hit = vec![false; self.size() as usize];
        for p in self.0.factorization.primes() {
            let d = p.degree();
            // P * G for every G of degree < m - d, G = 0 included
            let slots: Vec<(usize, Vec<u32>)> = (0..m - d)
                .map(|i| {
                    let mut s = vec![0u32; i];
                    s.extend_from_slice(p.coeffs());
                    s.resize(m, 0);
                    (0, s)
                })
                .collect();
            let walk = AffineWalk::over_coefficients(field, vec![0; m], &slots);
            walk.for_each(|r| hit[r as usize] = true);
        }
        hit
    }

    /// Kronecker-delta check over every pair of unit residues, using
    /// `(1/Phi) sum_chi chi(F) conj(chi(A0)) = prod_i S_i[(e_i(F) - e_i(A0)) mod d_i]`
    /// with `S_i[k] = (1/d_i) sum_a exp(2 pi i a k / d_i)`. Returns the
    /// maximal deviation from the delta.
    pub fn orthogonality_deviation(&self, exec: crate::par::Exec) -> f64 {
        let g = self.unit_group();
        let units = self.units();
        let sums: Vec<Vec<Complex64>> = g
            .orders
            .iter()
            .map(|&d| {
                (0..d)
                    .map(|k| {
                        (0..d)
                            .map(|a| g.root(a * k % d, d))
                            .sum::<Complex64>()
                            / d as f64
                    })
                    .collect()
            })
            .collect();
        let logs: Vec<Vec<u64>> = units.iter().map(|&r| g.dlog(r).unwrap()).collect();
        let rows = exec.map_range(units.len(), |i| {
            let mut worst = 0f64;
            for (j, lj) in logs.iter().enumerate() {
                let mut v = Complex64::new(1.0, 0.0);
                for (k, &d) in g.orders.iter().enumerate() {
                    v *= sums[k][((logs[i][k] + d - lj[k]) % d) as usize];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
            worst
        });
        rows.into_iter().fold(0.0, f64::max)
    }
}

/// `(A/QA)^x = Z/d_1 x ... x Z/d_r` with explicit generators.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    generators: Vec<u64>,
    orders: Vec<u64>,
    /// Mixed-radix code of the exponent vector per residue, e_1 least
    /// significant; `NOT_IN_GROUP` for non-units.
    code: Vec<u32>,
    exponent: u64,
    roots: Vec<Complex64>,
}

impl UnitGroup {
    fn build(ring: &ResidueRing) -> UnitGroup {
        let red = ring.reducer();
        let phi = ring.phi();
        let size = ring.size() as usize;
        let non_units = ring.non_units();
        let counted = non_units.iter().filter(|&&b| !b).count() as u64;
        assert_eq!(counted, phi, "unit count disagrees with the product formula");

        // constants and the monic irreducibles of degree < deg Q generate G
        let poly_ring = ring.poly_ring();
        let q = poly_ring.q();
        let mut gens_pool: Vec<u64> = (2..q).collect();
        for d in 1..ring.degree() {
            let list = poly_ring
                .irreducible_list(d)
                .expect("degrees below deg Q fit any unit budget");
            for &idx in list.indices() {
                let r = red.pack(Poly::from_index(poly_ring.field(), d, idx).coeffs());
                if !non_units[r as usize] {
                    gens_pool.push(r);
                }
            }
        }

        let mut code = vec![NOT_IN_GROUP; size];
        code[1 % size] = 0;
        let mut members: Vec<u64> = vec![1 % size as u64];
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        let pow = |x: u64, e: u64| -> u64 {
            let v = crate::polyring::kernel::powmod(
                red.field(),
                &red.unpack(x),
                e,
                red.modulus(),
            );
            red.pack(&v)
        };
        while (members.len() as u64) < phi {
            let h = members.len() as u64;
            let quotient = phi / h;
            let in_h = |x: u64| code[x as usize] != NOT_IN_GROUP;
            let primes = prime_factors(quotient);
            let qorder = |x: u64| {
                let mut o = quotient;
                for &l in &primes {
                    while o % l == 0 && in_h(pow(x, o / l)) {
                        o /= l;
                    }
                }
                o
            };
            let mut best = (1u64, 1u64);
            for &x in &gens_pool {
                if best.1 == quotient {
                    break;
                }
                if in_h(pow(x, best.1)) {
                    continue;
                }
                let o = qorder(x);
                best = combine(&pow, red, best, (x, o));
            }
            let (y, m) = best;
            // y^m lies in H; divide out an m-th root of it inside H
            let s = decode(code[pow(y, m) as usize] as u64, &orders);
            let mut lift = y;
            for (i, &g) in generators.iter().enumerate() {
                debug_assert_eq!(s[i] % m, 0);
                let e = (orders[i] - s[i] / m) % orders[i];
                lift = red.mul(lift, pow(g, e));
            }
            debug_assert_eq!(pow(lift, m), 1 % size as u64);
            let mut step = lift;
            for j in 1..m {
                for c in 0..h {
                    let r = red.mul(members[c as usize], step);
                    code[r as usize] = (c + j * h) as u32;
                    members.push(r);
                }
                step = red.mul(step, lift);
            }
            generators.push(lift);
            orders.push(m);
        }
        let exponent = orders.iter().fold(1, |acc, &d| lcm(acc, d));
        let roots = (0..exponent).map(|k| root_of_unity(k, exponent)).collect();
        UnitGroup {
            generators,
            orders,
            code,
            exponent,
            roots,
        }
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent of the group, `lcm(d_i)`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Exponent vector of a unit residue.
    pub fn dlog(&self, r: u64) -> Option<Vec<u64>> {
        match self.code.get(r as usize) {
            Some(&c) if c != NOT_IN_GROUP => Some(decode(c as u64, &self.orders)),
            _ => None,
        }
    }

    /// `exp(2 pi i k / d)` for `d | exponent`.
    fn root(&self, k: u64, d: u64) -> Complex64 {
        self.roots[(k * (self.exponent / d)) as usize]
    }
}

fn decode(mut c: u64, orders: &[u64]) -> Vec<u64> {
    orders
        .iter()
        .map(|&d| {
            let e = c % d;
            c /= d;
            e
        })
        .collect()
}

/// An element of order `lcm(a, b)` in G/H from elements of orders a and b.
fn combine(
    pow: &impl Fn(u64, u64) -> u64,
    red: &Reducer,
    (x, a): (u64, u64),
    (y, b): (u64, u64),
) -> (u64, u64) {
    let l = lcm(a, b);
    let mut out = 1u64;
    for p in prime_factors(l) {
        let va = valuation(a, p);
        let vb = valuation(b, p);
        let part = if va >= vb {
            pow(x, a / p.pow(va))
        } else {
            pow(y, b / p.pow(vb))
        };
        out = red.mul(out, part);
    }
    (out, l)
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `exp(2 pi i k / n)`, exact at multiples of a quarter turn.
fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

/// A Dirichlet character mod Q, as an exponent vector against the unit
/// group generators.
#[derive(Clone)]
pub struct DirichletChar {
    ring: ResidueRing,
    exps: Vec<u64>,
}

impl PartialEq for DirichletChar {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.exps == other.exps
    }
}

impl fmt::Debug for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl DirichletChar {
    pub fn new(ring: &ResidueRing, exps: Vec<u64>) -> Result<DirichletChar> {
        let orders = ring.unit_group().orders();
        if exps.len() != orders.len() || exps.iter().zip(orders).any(|(a, d)| a >= d) {
            return Err(Error::Parse(format!(
                "exponents {exps:?} do not fit the unit group orders {orders:?}"
            )));
        }
        Ok(DirichletChar {
            ring: ring.clone(),
            exps,
        })
    }

    pub fn principal(ring: &ResidueRing) -> DirichletChar {
        let r = ring.unit_group().rank();
        DirichletChar {
            ring: ring.clone(),
            exps: vec![0; r],
        }
    }

    /// Character number `i` in the canonical order (principal is 0).
    pub fn from_index(ring: &ResidueRing, mut i: u64) -> Result<DirichletChar> {
        let orders = ring.unit_group().orders();
        if i >= ring.phi() {
            return Err(Error::Parse(format!("character index {i} out of range")));
        }
        let mut exps = vec![0; orders.len()];
        for (e, &d) in exps.iter_mut().zip(orders).rev() {
            *e = i % d;
            i /= d;
        }
        Ok(DirichletChar {
            ring: ring.clone(),
            exps,
        })
    }

    /// Parse `chi[a1,...,ar]`.
    pub fn parse(ring: &ResidueRing, s: &str) -> Result<DirichletChar> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = s
            .strip_prefix("chi[")
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected chi[a1,...], got {s:?}")))?;
        let exps = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|a| {
                    a.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad exponent {a:?}")))
                })
                .collect::<Result<Vec<u64>>>()?
        };
        DirichletChar::new(ring, exps)
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn index(&self) -> u64 {
        let orders = self.ring.unit_group().orders();
        self.exps
            .iter()
            .zip(orders)
            .fold(0, |acc, (&a, &d)| acc * d + a)
    }

    pub fn id(&self) -> String {
        let a: Vec<String> = self.exps.iter().map(|a| a.to_string()).collect();
        format!("chi[{}]", a.join(","))
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&a| a == 0)
    }

    /// Real-valued, i.e. of order at most 2.
    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    pub fn order(&self) -> u64 {
        let orders = self.ring.unit_group().orders();
        self.exps.iter().zip(orders).fold(1, |acc, (&a, &d)| {
            lcm(acc, d / crate::arith::gcd(a, d))
        })
    }

    pub fn mul(&self, other: &DirichletChar) -> Result<DirichletChar> {
        if self.ring != other.ring {
            return Err(Error::MixedRings);
        }
        let orders = self.ring.unit_group().orders();
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(orders)
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        Ok(DirichletChar {
            ring: self.ring.clone(),
            exps,
        })
    }

    pub fn conj(&self) -> DirichletChar {
        let orders = self.ring.unit_group().orders();
        let exps = self
            .exps
            .iter()
            .zip(orders)
            .map(|(a, d)| (d - a) % d)
            .collect();
        DirichletChar {
            ring: self.ring.clone(),
            exps,
        }
    }

    pub fn pow(&self, j: u64) -> DirichletChar {
        let orders = self.ring.unit_group().orders();
        let exps = self
            .exps
            .iter()
            .zip(orders)
            .map(|(&a, &d)| ((a as u128 * j as u128) % d as u128) as u64)
            .collect();
        DirichletChar {
            ring: self.ring.clone(),
            exps,
        }
    }

    /// `chi(r) = exp(2 pi i k / exponent)`; returns `k`, or `None` off the units.
    pub fn phase(&self, r: u64) -> Option<u64> {
        let g = self.ring.unit_group();
        let c = *g.code.get(r as usize)?;
        if c == NOT_IN_GROUP {
            return None;
        }
        let mut c = c as u64;
        let mut k = 0u64;
        for (&a, &d) in self.exps.iter().zip(&g.orders) {
            let e = c % d;
            c /= d;
            k = (k + a * e % d * (g.exponent / d)) % g.exponent;
        }
        Some(k)
    }

    /// Value at a packed residue.
    pub fn value(&self, r: u64) -> Complex64 {
        match self.phase(r) {
            Some(k) => self.ring.unit_group().roots[k as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn eval(&self, f: &Poly) -> Result<Complex64> {
        Ok(self.value(self.ring.residue(f)?))
    }

    /// Values at every residue, indexed by packed residue.
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.ring.size()).map(|r| self.value(r)).collect()
    }
}

/// All `Phi(Q)` characters, principal first, then lexicographic exponents.
pub fn characters(ring: &ResidueRing) -> Vec<DirichletChar> {
    (0..ring.phi())
        .map(|i| DirichletChar::from_index(ring, i).expect("index in range"))
        .collect()
}

/// `(1/Phi) sum_chi chi(F) conj(chi(A0))`.
pub fn orthogonality_indicator(ring: &ResidueRing, f: &Poly, a0: &Poly) -> Result<Complex64> {
    let ra = ring.residue(a0)?;
    if !ring.is_unit(ra) {
        return Err(Error::NotCoprime(a0.to_string()));
    }
    let rf = ring.residue(f)?;
    let total: Complex64 = characters(ring)
        .iter()
        .map(|chi| chi.value(rf) * chi.value(ra).conj())
        .sum();
    Ok(total / ring.phi() as f64)
}
