//! Dirichlet L-functions `L(u, chi) = sum_{F monic} chi(F) u^{deg F}`.
//!
//! For nonprincipal chi this is a polynomial of degree < deg Q, factored as
//! `prod_j (1 - alpha_j u)`. The principal L-function is kept in closed form
//! `prod_{P|Q} (1 - u^{deg P}) / (1 - q u)`.
//!
//! From the reciprocal zeros come the power sums
//! `psi_m = sum_{deg P^k = m} deg P chi(P)^k = -sum_j alpha_j^m`, and from
//! those, by Moebius-style recursion over character powers, the prime sums
//! `T(chi, k) = sum_{deg P = k} chi(P)` to any degree without enumeration.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::divisors;
use crate::chargroup::{characters, DirichletChar, ResidueRing};
use crate::error::{Error, Result};
use crate::par::Exec;

/// Extra degrees past deg Q summed directly to confirm the coefficients vanish.
pub const VANISHING_SPAN: usize = 5;
pub const COEFF_TOL: f64 = 1e-8;
pub const ZERO_CLASS_TOL: f64 = 1e-6;

/// Residue histograms of the monic polynomials of degree `0..=deg Q + 5`.
#[derive(Clone, Debug)]
pub struct MonicHistograms {
    hists: Vec<Vec<u64>>,
}

impl MonicHistograms {
    pub fn new(ring: &ResidueRing) -> Result<MonicHistograms> {
        let pr = ring.poly_ring();
        let top = ring.degree() + VANISHING_SPAN;
        let hists = (0..=top)
            .map(|n| pr.monic_residue_histogram(ring.reducer(), n))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonicHistograms { hists })
    }

    /// `sum_{F in M_n} chi(F)` from a value table indexed by residue.
    fn coeff(&self, n: usize, values: &[Complex64]) -> Complex64 {
        self.hists[n]
            .iter()
            .zip(values)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, v)| v * c as f64)
            .sum()
    }
}

/// Coefficients of `L(u, chi)`.
#[derive(Clone, Debug)]
pub struct LPolynomial {
    chi: DirichletChar,
    coeffs: Vec<Complex64>,
    principal: bool,
    stripped: usize,
    vanishing: f64,
}

impl LPolynomial {
    pub fn chi(&self) -> &DirichletChar {
        &self.chi
    }

    /// `c_0, ..., c_d`; for the principal character, the numerator
    /// `prod_{P|Q} (1 - u^{deg P})`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    /// `Some(q)` for the principal character: the denominator `1 - q u`.
    pub fn pole(&self) -> Option<u64> {
        self.principal.then(|| self.chi.ring().poly_ring().q())
    }

    /// Trailing coefficients below `deg Q` dropped as numerically zero.
    pub fn stripped(&self) -> usize {
        self.stripped
    }

    /// `max |c_n| / q^n` over `deg Q <= n <= deg Q + 5` (direct sums).
    pub fn vanishing_ratio(&self) -> f64 {
        self.vanishing
    }

    /// Coefficient of `u^n` in the power series of L.
    pub fn series_coeff(&self, n: usize) -> Complex64 {
        if !self.principal {
            return self.coeffs.get(n).copied().unwrap_or_default();
        }
        let q = self.chi.ring().poly_ring().q() as f64;
        self.coeffs
            .iter()
            .take(n + 1)
            .enumerate()
            .map(|(i, c)| c * q.powi((n - i) as i32))
            .sum()
    }

    /// Evaluate at `u` (principal: numerator over `1 - q u`).
    pub fn eval(&self, u: Complex64) -> Complex64 {
        let num = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, &c| acc * u + c);
        match self.pole() {
            Some(q) => num / (Complex64::new(1.0, 0.0) - u * q as f64),
            None => num,
        }
    }
}

/// `prod_{P|Q} (1 - u^{deg P})` with integer coefficients.
pub fn principal_numerator(ring: &ResidueRing) -> Vec<i64> {
    let mut out = vec![1i64];
    for p in ring.factorization().primes() {
        let d = p.degree();
        let mut next = vec![0i64; out.len() + d];
        for (i, &c) in out.iter().enumerate() {
            next[i] += c;
            next[i + d] -= c;
        }
        out = next;
    }
    out
}

pub fn l_coeffs(chi: &DirichletChar) -> Result<LPolynomial> {
    let hist = MonicHistograms::new(chi.ring())?;
    Ok(l_coeffs_with(chi, &hist))
}

/// L-coefficients from precomputed histograms (shared across a character
/// sweep).
pub fn l_coeffs_with(chi: &DirichletChar, hist: &MonicHistograms) -> LPolynomial {
    let ring = chi.ring();
    if chi.is_principal() {
        let coeffs = principal_numerator(ring)
            .into_iter()
            .map(|c| Complex64::new(c as f64, 0.0))
            .collect();
        return LPolynomial {
            chi: chi.clone(),
            coeffs,
            principal: true,
            stripped: 0,
            vanishing: 0.0,
        };
    }
    let m = ring.degree();
    let q = ring.poly_ring().q() as f64;
    let values = chi.value_table();
    let mut coeffs: Vec<Complex64> = (0..m).map(|n| hist.coeff(n, &values)).collect();
    let mut stripped = 0;
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() < COEFF_TOL * q.powi(coeffs.len() as i32 - 1) {
        coeffs.pop();
        stripped += 1;
    }
    let vanishing = (m..=m + VANISHING_SPAN)
        .map(|n| hist.coeff(n, &values).norm() / q.powi(n as i32))
        .fold(0.0, f64::max);
    LPolynomial {
        chi: chi.clone(),
        coeffs,
        principal: false,
        stripped,
        vanishing,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootMethod {
    #[default]
    Companion,
    Aberth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroClass {
    Critical,
    Trivial,
    Anomaly,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub value: Complex64,
    pub modulus: f64,
    pub class: ZeroClass,
}

/// Reciprocal zeros: `L(u) = prod_j (1 - alpha_j u)`.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    zeros: Vec<Zero>,
    q: u64,
    reconstruction_error: f64,
}

impl ZeroSet {
    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.zeros.iter().map(|z| z.value)
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Max relative coefficient error of `prod (1 - alpha_j u)`.
    pub fn reconstruction_error(&self) -> f64 {
        self.reconstruction_error
    }
}

pub fn classify(alpha: Complex64, q: u64) -> ZeroClass {
    classify_with(alpha, q, ZERO_CLASS_TOL)
}

/// Critical if `||alpha| - sqrt q| <= tol sqrt q`, trivial if `||alpha| - 1| <= tol`.
pub fn classify_with(alpha: Complex64, q: u64, tol: f64) -> ZeroClass {
    let r = alpha.norm();
    let sq = (q as f64).sqrt();
    if (r - sq).abs() <= tol * sq {
        ZeroClass::Critical
    } else if (r - 1.0).abs() <= tol {
        ZeroClass::Trivial
    } else {
        ZeroClass::Anomaly
    }
}

/// Expand `prod (1 - alpha_j u)`.
pub fn expand(alphas: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for &a in alphas {
        out.push(Complex64::default());
        for i in (1..out.len()).rev() {
            let prev = out[i - 1];
            out[i] -= a * prev;
        }
    }
    out
}

pub fn reciprocal_zeros(l: &LPolynomial) -> Result<ZeroSet> {
    reciprocal_zeros_with(l, RootMethod::Companion)
}

pub fn reciprocal_zeros_with(l: &LPolynomial, method: RootMethod) -> Result<ZeroSet> {
    if l.principal {
        return Err(Error::PrincipalCharacter(
            "finite zero set (L has a pole at u = 1/q)",
        ));
    }
    let q = l.chi.ring().poly_ring().q();
    let c = &l.coeffs;
    // alpha_j are the roots of u^d L(1/u) = u^d + c_1 u^{d-1} + ... + c_d
    let roots = match method {
        RootMethod::Companion => companion_roots(c)?,
        RootMethod::Aberth => aberth_roots(c)?,
    };
    let roots: Vec<Complex64> = roots.into_iter().map(|z| polish(c, z)).collect();
    let rebuilt = expand(&roots);
    let err = rebuilt
        .iter()
        .zip(c)
        .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
        .fold(0.0, f64::max);
    if err > COEFF_TOL {
        return Err(Error::NoConvergence(err));
    }
    let mut zeros: Vec<Zero> = roots
        .into_iter()
        .map(|value| Zero {
            value,
            modulus: value.norm(),
            class: classify(value, q),
        })
        .collect();
    let nominal = |z: &Zero| match z.class {
        ZeroClass::Critical => (q as f64).sqrt(),
        ZeroClass::Trivial => 1.0,
        ZeroClass::Anomaly => z.modulus,
    };
    zeros.sort_by(|a, b| {
        nominal(b)
            .total_cmp(&nominal(a))
            .then(a.value.arg().total_cmp(&b.value.arg()))
    });
    Ok(ZeroSet {
        zeros,
        q,
        reconstruction_error: err,
    })
}

/// Value of `x^d + c_1 x^{d-1} + ... + c_d` and its derivative.
fn reversed_eval(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::default();
    let mut dp = Complex64::default();
    for &ci in c {
        dp = dp * x + p;
        p = p * x + ci;
    }
    (p, dp)
}

fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (p, dp) = reversed_eval(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        let next = z - step;
        // keep the step only if it does not increase the residual
        if reversed_eval(c, next).0.norm() <= p.norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}

fn companion_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[d - i];
    }
    let schur = Schur::try_new(m, 1e-15, 10_000).ok_or(Error::NoConvergence(f64::NAN))?;
    let (_, t) = schur.unpack();
    Ok((0..d).map(|i| t[(i, i)]).collect())
}

fn aberth_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let radius = c[d].norm().powf(1.0 / d as f64).max(0.5);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / d as f64 + 0.4)
        })
        .collect();
    for _ in 0..1000 {
        let mut worst = 0f64;
        for k in 0..d {
            let (p, dp) = reversed_eval(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repel: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repel);
            z[k] -= w;
            worst = worst.max(w.norm() / z[k].norm().max(1.0));
        }
        if worst < 1e-15 {
            return Ok(z);
        }
    }
    let residual = z
        .iter()
        .map(|&x| reversed_eval(c, x).0.norm())
        .fold(0.0, f64::max);
    Err(Error::NoConvergence(residual))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhReport {
    pub critical: usize,
    pub trivial: usize,
    pub anomalies: Vec<ZeroRecord>,
    pub pass: bool,
}

pub fn rh_check(zs: &ZeroSet) -> RhReport {
    rh_check_with(zs, ZERO_CLASS_TOL)
}

/// Reclassify every zero with tolerance `tol`; anomalies are listed, never dropped.
pub fn rh_check_with(zs: &ZeroSet, tol: f64) -> RhReport {
    let classes: Vec<ZeroClass> = zs.values().map(|a| classify_with(a, zs.q, tol)).collect();
    let count = |c| classes.iter().filter(|&&k| k == c).count();
    let anomalies: Vec<ZeroRecord> = zs
        .zeros
        .iter()
        .zip(&classes)
        .filter(|(_, &c)| c == ZeroClass::Anomaly)
        .map(|(z, &class)| ZeroRecord {
            class,
            ..ZeroRecord::from(z)
        })
        .collect();
    RhReport {
        critical: count(ZeroClass::Critical),
        trivial: count(ZeroClass::Trivial),
        pass: anomalies.is_empty(),
        anomalies,
    }
}

/// `sum_{deg P = k} chi(P)` by enumeration (residue histograms).
pub fn prime_char_sum_direct(chi: &DirichletChar, k: usize) -> Result<Complex64> {
    let hist = chi.ring().prime_histogram(k)?;
    Ok(hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(r, &c)| chi.value(r as u64) * c as f64)
        .sum())
}

/// `psi_m = sum_{deg P^k = m} deg P chi(P)^k`, by enumeration.
pub fn psi_direct(m: usize, chi: &DirichletChar) -> Result<Complex64> {
    let mut total = Complex64::default();
    for d in divisors(m as u64) {
        let power = chi.pow(m as u64 / d);
        total += prime_char_sum_direct(&power, d as usize)? * d as f64;
    }
    Ok(total)
}

/// `-sum_j alpha_j^m`.
pub fn psi_from_zeros(m: usize, zs: &ZeroSet) -> Complex64 {
    -zs.values().map(|a| a.powu(m as u32)).sum::<Complex64>()
}

/// `psi_m(chi_0) = q^m - sum_{P|Q, deg P | m} deg P`.
pub fn psi_principal(m: usize, ring: &ResidueRing) -> f64 {
    let q = ring.poly_ring().q() as f64;
    let local: usize = ring
        .factorization()
        .primes()
        .map(|p| p.degree())
        .filter(|d| m % d == 0)
        .sum();
    q.powi(m as i32) - local as f64
}

/// `Theta(n, chi) = sum_{deg P <= n} chi(P) deg P`.
pub fn theta(n: usize, chi: &DirichletChar) -> Result<Complex64> {
    let mut total = Complex64::default();
    for k in 1..=n {
        total += prime_char_sum_direct(chi, k)? * k as f64;
    }
    Ok(total)
}

/// `L(u0, chi) = prod_j (1 - alpha_j u0)`.
pub fn l_value(zs: &ZeroSet, u0: f64) -> Result<Complex64> {
    let mut v = Complex64::new(1.0, 0.0);
    for a in zs.values() {
        let f = Complex64::new(1.0, 0.0) - a * u0;
        if f.norm() < 1e-12 {
            return Err(Error::ZeroAtPoint);
        }
        v *= f;
    }
    Ok(v)
}

/// `sum_j Log(1 - alpha_j u0)` with the principal branch per factor.
pub fn log_l_value(zs: &ZeroSet, u0: f64) -> Result<Complex64> {
    let mut v = Complex64::default();
    for a in zs.values() {
        let f = Complex64::new(1.0, 0.0) - a * u0;
        if f.norm() < 1e-12 {
            return Err(Error::ZeroAtPoint);
        }
        v += f.ln();
    }
    Ok(v)
}

/// L-polynomial and zeros of one character.
#[derive(Clone, Debug)]
pub struct LData {
    pub lpoly: LPolynomial,
    pub zeros: Option<ZeroSet>,
}

impl LData {
    pub fn chi(&self) -> &DirichletChar {
        self.lpoly.chi()
    }

    /// `psi_m`: closed form for the principal character, zeros otherwise.
    pub fn psi(&self, m: usize) -> Complex64 {
        match &self.zeros {
            Some(zs) => psi_from_zeros(m, zs),
            None => Complex64::new(psi_principal(m, self.chi().ring()), 0.0),
        }
    }

    pub fn report(&self) -> LReport {
        let zeros: Vec<ZeroRecord> = self
            .zeros
            .iter()
            .flat_map(|zs| zs.zeros.iter().map(ZeroRecord::from))
            .collect();
        LReport {
            char: self.chi().id(),
            degree: self.lpoly.degree(),
            principal: self.lpoly.is_principal(),
            coeffs: self.lpoly.coeffs().iter().map(|c| [c.re, c.im]).collect(),
            rh_pass: self.zeros.as_ref().is_none_or(|zs| rh_check(zs).pass),
            zeros,
        }
    }
}

/// L-data of every character mod Q, in character order.
#[derive(Clone, Debug)]
pub struct RingLData {
    ring: ResidueRing,
    chars: Vec<DirichletChar>,
    data: Vec<LData>,
}

impl RingLData {
    pub fn new(ring: &ResidueRing, method: RootMethod, exec: Exec) -> Result<RingLData> {
        let hist = MonicHistograms::new(ring)?;
        let chars = characters(ring);
        let data = exec
            .map(&chars, |chi| {
                let lpoly = l_coeffs_with(chi, &hist);
                let zeros = if lpoly.is_principal() {
                    None
                } else {
                    Some(reciprocal_zeros_with(&lpoly, method)?)
                };
                Ok(LData { lpoly, zeros })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(RingLData { ring: ring.clone(), chars, data })
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn chars(&self) -> &[DirichletChar] {
        &self.chars
    }

    pub fn data(&self) -> &[LData] {
        &self.data
    }

    pub fn get(&self, chi: &DirichletChar) -> Result<&LData> {
        self.data
            .get(chi.index() as usize)
            .filter(|d| d.chi() == chi)
            .ok_or_else(|| Error::MissingZeros(chi.id()))
    }
}

/// `T(lambda, k)` for every character and `1 <= k <= n_max`.
#[derive(Clone, Debug)]
pub struct PrimeCharSumTable {
    n_max: usize,
    /// `t[lambda][k - 1]`
    t: Vec<Vec<Complex64>>,
}

impl PrimeCharSumTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `T(lambda, k)` by character index.
    pub fn get(&self, lambda: usize, k: usize) -> Complex64 {
        self.t[lambda][k - 1]
    }

    pub fn row(&self, lambda: usize) -> &[Complex64] {
        &self.t[lambda]
    }

    /// `sum_{k <= n_max} T(lambda, k) v^k`.
    pub fn generating(&self, lambda: usize, v: f64) -> Complex64 {
        let mut acc = Complex64::default();
        let mut vk = 1.0;
        for &t in &self.t[lambda] {
            vk *= v;
            if vk == 0.0 {
                break;
            }
            acc += t * vk;
        }
        acc
    }
}

/// Solve `m T(lambda, m) = psi_m(lambda) - sum_{d | m, d < m} d T(lambda^{m/d}, d)`
/// for every character, increasing in m.
pub fn prime_char_sums_via_zeros(ld: &RingLData, n_max: usize) -> Result<PrimeCharSumTable> {
    let phi = ld.chars.len();
    for (chi, d) in ld.chars.iter().zip(&ld.data) {
        if !chi.is_principal() && d.zeros.is_none() {
            return Err(Error::MissingZeros(chi.id()));
        }
    }
    let mut t = vec![Vec::with_capacity(n_max); phi];
    let mut powers: Vec<Vec<Complex64>> = ld
        .data
        .iter()
        .map(|d| d.zeros.as_ref().map_or(Vec::new(), |z| z.values().collect()))
        .collect();
    let bases = powers.clone();
    for m in 1..=n_max {
        let divs = divisors(m as u64);
        let mut row = Vec::with_capacity(phi);
        for (lam, chi) in ld.chars.iter().enumerate() {
            let psi = if chi.is_principal() {
                Complex64::new(psi_principal(m, &ld.ring), 0.0)
            } else {
                -powers[lam].iter().sum::<Complex64>()
            };
            let mut rest = Complex64::default();
            for &d in &divs[..divs.len() - 1] {
                let p = chi.pow(m as u64 / d).index() as usize;
                rest += t[p][d as usize - 1] * d as f64;
            }
            row.push((psi - rest) / m as f64);
        }
        for (lam, v) in row.into_iter().enumerate() {
            t[lam].push(v);
            for (a, b) in powers[lam].iter_mut().zip(&bases[lam]) {
                *a *= b;
            }
        }
    }
    Ok(PrimeCharSumTable { n_max, t })
}

/// JSON form of a zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub class: ZeroClass,
}

impl From<&Zero> for ZeroRecord {
    fn from(z: &Zero) -> ZeroRecord {
        ZeroRecord {
            re: z.value.re,
            im: z.value.im,
            modulus: z.modulus,
            class: z.class,
        }
    }
}

/// L-data report: `{char, degree, coeffs, zeros, rh_pass}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LReport {
    pub char: String,
    pub degree: usize,
    pub principal: bool,
    pub coeffs: Vec<[f64; 2]>,
    pub zeros: Vec<ZeroRecord>,
    pub rh_pass: bool,
}
