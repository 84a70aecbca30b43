//! Mertens products in a residue class and the constant `C(Q, A0)` with
//!
//! ```text
//! P(n; Q, A0) (n log q)^{1/Phi(Q)} -> C(Q, A0),
//! P(n; Q, A0) = prod_{deg P <= n, P = A0 mod Q} (1 - |P|^{-1}).
//! ```
//!
//! Products are accumulated in log space from residue histograms: every prime
//! of degree k contributes the same factor `1 - q^{-k}`, so only the number of
//! primes of each degree in the class matters.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, mobius};
use crate::chargroup::{DirichletChar, ResidueRing};
use crate::error::{Error, Result};
use crate::fqfield::FieldSpec;
use crate::lfunc::{log_l_value, PrimeCharSumTable, RingLData, RootMethod};
use crate::par::Exec;
use crate::polyring::{count_irreducibles, Poly, PolyRing};

/// Euler-Mascheroni constant to 30 digits.
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082;

/// Target for discarded tails of zero-based sums.
pub const TAIL_EPS: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MertensPoint {
    pub n: usize,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none", default)]
    pub modulus: Option<String>,
    #[serde(rename = "A0", skip_serializing_if = "Option::is_none", default)]
    pub a0: Option<String>,
    pub product: f64,
    pub log_product: f64,
    pub prime_count: u128,
}

/// Packed residue of `a0`, which must be a unit mod Q.
pub fn unit_residue(ring: &ResidueRing, a0: &Poly) -> Result<u64> {
    let r = ring.residue(a0)?;
    if ring.is_unit(r) {
        Ok(r)
    } else {
        Err(Error::NotCoprime(a0.to_string()))
    }
}

/// `P(n; Q, A0)` for every `0 <= n <= n_max`.
pub fn mertens_trajectory(ring: &ResidueRing, a0: &Poly, n_max: usize) -> Result<Vec<MertensPoint>> {
    let r = unit_residue(ring, a0)? as usize;
    let q = ring.poly_ring().q() as f64;
    let modulus = Some(ring.modulus().to_string());
    let a0_text = Some(a0.to_string());
    let mut log = 0.0;
    let mut count = 0u128;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            let c = ring.prime_histogram(n)?[r];
            log += c as f64 * (-q.powi(-(n as i32))).ln_1p();
            count += c as u128;
        }
        out.push(MertensPoint {
            n,
            modulus: modulus.clone(),
            a0: a0_text.clone(),
            product: log.exp(),
            log_product: log,
            prime_count: count,
        });
    }
    Ok(out)
}

pub fn mertens_product(ring: &ResidueRing, a0: &Poly, n: usize) -> Result<MertensPoint> {
    Ok(mertens_trajectory(ring, a0, n)?.pop().expect("n + 1 points"))
}

/// `prod_{deg P <= n} (1 - |P|^{-1})` from the exact prime counts.
pub fn rosen_product(q: u64, n: usize) -> Result<MertensPoint> {
    let mut log = 0.0;
    let mut count = 0u128;
    for k in 1..=n {
        let c = count_irreducibles(q, k as u64)?;
        log += c as f64 * (-(q as f64).powi(-(k as i32))).ln_1p();
        count = count.checked_add(c).ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget: u64::MAX,
        })?;
    }
    Ok(MertensPoint {
        n,
        modulus: None,
        a0: None,
        product: log.exp(),
        log_product: log,
        prime_count: count,
    })
}

/// `pi_q(k) / q^k` without forming either number.
fn prime_density(q: f64, k: u64) -> f64 {
    divisors(k)
        .into_iter()
        .map(|d| mobius(d) as f64 * q.powf(-((k - k / d) as f64)))
        .sum::<f64>()
        / k as f64
}

/// `log(1 - x) / x`, with the limit -1 once x underflows.
fn log1m_over(x: f64) -> f64 {
    if x == 0.0 {
        -1.0
    } else {
        (-x).ln_1p() / x
    }
}

/// Log of the Rosen product for any n (no exact counts needed).
pub fn rosen_log_product(q: u64, n: usize) -> f64 {
    let qf = q as f64;
    (1..=n as u64)
        .map(|k| prime_density(qf, k) * log1m_over(qf.powf(-(k as f64))))
        .sum()
}

/// Rosen product by enumerating irreducibles (cross-check of the count form).
pub fn rosen_product_enumerated(ring: &PolyRing, n: usize) -> Result<MertensPoint> {
    let q = ring.q() as f64;
    let mut log = 0.0;
    let mut count = 0u128;
    for k in 1..=n {
        for _ in ring.irreducible_list(k)?.indices() {
            log += (-q.powi(-(k as i32))).ln_1p();
            count += 1;
        }
    }
    Ok(MertensPoint {
        n,
        modulus: None,
        a0: None,
        product: log.exp(),
        log_product: log,
        prime_count: count,
    })
}

/// Rosen's constant `kappa_q = lim n log q prod_{deg P <= n} (1 - |P|^{-1})`, as
/// `log q e^{-gamma} exp(sum_d [pi(d) log(1 - q^{-d}) + 1/d])`.
pub fn kappa_q(q: u64) -> f64 {
    let qf = q as f64;
    let mut sum = 0.0;
    let mut small = 0;
    for d in 1u64.. {
        let x = qf.powf(-(d as f64));
        // r_d - 1/d from the divisors e > 1 only, so nothing cancels
        let excess = divisors(d)
            .into_iter()
            .skip(1)
            .map(|e| mobius(e) as f64 * qf.powf(-((d - d / e) as f64)))
            .sum::<f64>()
            / d as f64;
        let r = 1.0 / d as f64 + excess;
        let term = r * (log1m_over(x) + 1.0) - excess;
        sum += term;
        small = if term.abs() < 1e-14 { small + 1 } else { 0 };
        if small == 2 {
            break;
        }
    }
    qf.ln() * (-EULER_GAMMA).exp() * sum.exp()
}

pub fn kappa_for(spec: &FieldSpec) -> f64 {
    kappa_q(spec.q() as u64)
}

/// Smallest N with `(deg Q + 2) q^{-(N+1)/2} / ((N+1)(1 - q^{-1/2})) <= 1e-15`,
/// which bounds `sum_{k > N} q^{-k} |T(chi, k)|`.
pub fn n_eff(q: u64, deg_q: usize) -> usize {
    let qf = q as f64;
    let damp = 1.0 - qf.powf(-0.5);
    (1..)
        .find(|&n: &usize| {
            let m = (n + 1) as f64;
            (deg_q as f64 + 2.0) * qf.powf(-m / 2.0) / (m * damp) <= TAIL_EPS
        })
        .unwrap()
}

/// Everything about one modulus needed by the constant and the harness: the
/// L-data of all characters, the zero-based prime sum table and kappa_q.
#[derive(Clone, Debug)]
pub struct ModulusContext {
    ldata: RingLData,
    table: PrimeCharSumTable,
    kappa: f64,
    n_eff: usize,
}

impl ModulusContext {
    pub fn new(ring: &ResidueRing, method: RootMethod, exec: Exec) -> Result<ModulusContext> {
        let q = ring.poly_ring().q();
        let n_eff = n_eff(q, ring.degree());
        // second-order terms need T(lambda, k) while q^{-k} > 1e-18
        let depth = n_eff.max((18.0 * 10f64.ln() / (q as f64).ln()).ceil() as usize + 1);
        let ldata = RingLData::new(ring, method, exec)?;
        let table = crate::lfunc::prime_char_sums_via_zeros(&ldata, depth)?;
        Ok(ModulusContext {
            ldata,
            table,
            kappa: kappa_q(q),
            n_eff,
        })
    }

    pub fn ring(&self) -> &ResidueRing {
        self.ldata.ring()
    }

    pub fn ldata(&self) -> &RingLData {
        &self.ldata
    }

    pub fn table(&self) -> &PrimeCharSumTable {
        &self.table
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n_eff(&self) -> usize {
        self.n_eff
    }

    fn q(&self) -> f64 {
        self.ring().poly_ring().q() as f64
    }

    fn phi(&self) -> f64 {
        self.ring().phi() as f64
    }

    /// `-sum_{P|Q} log(1 - |P|^{-1})`.
    fn local_correction(&self) -> f64 {
        let q = self.q();
        -self
            .ring()
            .factorization()
            .primes()
            .map(|p| (-q.powi(-(p.degree() as i32))).ln_1p())
            .sum::<f64>()
    }

    /// `Lambda_chi = sum_P chi(P) log(1 - |P|^{-1})` through
    /// `-log L(1/q, chi) + sum_{j >= 2} (1/j) [Pi_{chi^j}(q^{-j}) - Pi_chi(q^{-j})]`.
    pub fn lambda(&self, chi: &DirichletChar) -> Result<Complex64> {
        let data = self.ldata.get(chi)?;
        let zs = data
            .zeros
            .as_ref()
            .ok_or(Error::PrincipalCharacter("Lambda needs a nonprincipal character"))?;
        let q = self.q();
        let mut total = -log_l_value(zs, 1.0 / q)?;
        let own = chi.index() as usize;
        for j in 2.. {
            let v = q.powi(-(j as i32));
            if v * q < 1e-18 {
                break;
            }
            let pow = chi.pow(j as u64).index() as usize;
            total += (self.table.generating(pow, v) - self.table.generating(own, v)) / j as f64;
        }
        Ok(total)
    }

    /// `sum_{k <= N_eff} T(chi, k) log(1 - q^{-k})`: the same Lambda straight
    /// from the degree-grouped table.
    pub fn lambda_direct(&self, chi: &DirichletChar) -> Complex64 {
        let q = self.q();
        let row = self.table.row(chi.index() as usize);
        row.iter()
            .take(self.n_eff)
            .enumerate()
            .map(|(i, t)| t * (-q.powi(-(i as i32 + 1))).ln_1p())
            .sum()
    }

    /// `(log C, imaginary residual, max |Lambda - Lambda_direct|)`.
    fn log_constant(&self, a0: &Poly) -> Result<(f64, f64, f64)> {
        let r = unit_residue(self.ring(), a0)?;
        let mut chi_sum = Complex64::default();
        let mut check = 0f64;
        for chi in self.ldata.chars().iter().filter(|c| !c.is_principal()) {
            let lam = self.lambda(chi)?;
            check = check.max((lam - self.lambda_direct(chi)).norm());
            chi_sum += chi.value(r).conj() * lam;
        }
        let log_c = (self.kappa.ln() + self.local_correction() + chi_sum.re) / self.phi();
        Ok((log_c, chi_sum.im, check))
    }

    /// Canonical `C(Q, A0)` from the L-data.
    pub fn constant_via_l(&self, a0: &Poly) -> Result<f64> {
        Ok(self.log_constant(a0)?.0.exp())
    }

    /// First-order formula `exp((log kappa - sum chi-bar(A0) log L(1/q, chi)) / Phi)`,
    /// without the local factors at P | Q or the higher prime-power terms.
    pub fn constant_via_l_leading(&self, a0: &Poly) -> Result<Complex64> {
        let r = unit_residue(self.ring(), a0)?;
        let q = self.q();
        let mut sum = Complex64::default();
        for d in self.ldata.data().iter().filter(|d| !d.lpoly.is_principal()) {
            let zs = d.zeros.as_ref().expect("nonprincipal zeros");
            sum += d.chi().value(r).conj() * log_l_value(zs, 1.0 / q)?;
        }
        Ok(((Complex64::new(self.kappa.ln(), 0.0) - sum) / self.phi()).exp())
    }

    /// `sum_{k=n+1}^{N_eff} q^{-k} T(chi, k)`.
    pub fn tail_sum(&self, n: usize, chi: &DirichletChar) -> Result<Complex64> {
        if chi.is_principal() {
            return Err(Error::PrincipalCharacter("the principal tail diverges"));
        }
        self.ldata.get(chi)?;
        let q = self.q();
        let row = self.table.row(chi.index() as usize);
        Ok((n + 1..=self.n_eff)
            .map(|k| row[k - 1] * q.powi(-(k as i32)))
            .sum())
    }

    pub fn constant_report(&self, a0: &Poly, methods: &Methods) -> Result<ConstantReport> {
        let (log_c, imag, check) = self.log_constant(a0)?;
        let ring = self.ring();
        let via_euler = match methods.euler_cutoff {
            Some(c) => Some(constant_via_euler(ring, a0, c, self.kappa)?),
            None => None,
        };
        let via_limit = match methods.limit_n_max {
            Some(n) => Some(constant_via_limit(ring, a0, n)?),
            None => None,
        };
        Ok(ConstantReport {
            field: ring.poly_ring().field().spec().clone(),
            modulus: ring.modulus().to_string(),
            a0: a0.to_string(),
            phi: ring.phi(),
            kappa_q: self.kappa,
            c: Constants {
                via_l: log_c.exp(),
                via_l_leading: self.constant_via_l_leading(a0)?.re,
                via_euler,
                via_limit,
                imag_residual: imag.abs(),
                lambda_check: check,
            },
        })
    }
}

/// Which validating methods to run next to the canonical one.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Methods {
    pub euler_cutoff: Option<usize>,
    pub limit_n_max: Option<usize>,
}

impl Methods {
    /// Largest cutoff whose enumeration stays within `budget` monic polynomials.
    pub fn default_for(q: u64, budget: u64) -> Methods {
        let mut n = 1;
        while (q as u128).pow(n as u32 + 1) <= budget as u128 {
            n += 1;
        }
        Methods {
            euler_cutoff: Some(n),
            limit_n_max: Some(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerConstant {
    pub value: f64,
    pub cutoff: usize,
    /// Expected size of the oscillation, `q^{-cutoff/2}`.
    pub convergence: f64,
}

/// `C^Phi = kappa prod_{P|Q} (1 - |P|^{-1})^{-1} prod_{(P,Q)=1} (1 - |P|^{-1})^{alpha(P)}`
/// with `alpha = Phi - 1` on the class of A0 and `-1` elsewhere, truncated at
/// degree `cutoff`.
pub fn constant_via_euler(ring: &ResidueRing, a0: &Poly, cutoff: usize, kappa: f64) -> Result<EulerConstant> {
    let r = unit_residue(ring, a0)? as usize;
    let q = ring.poly_ring().q() as f64;
    let phi = ring.phi() as f64;
    let mut log = kappa.ln();
    for p in ring.factorization().primes() {
        log -= (-q.powi(-(p.degree() as i32))).ln_1p();
    }
    for k in 1..=cutoff {
        let hist = ring.prime_histogram(k)?;
        let coprime: u64 = hist
            .iter()
            .enumerate()
            .filter(|&(s, &c)| c != 0 && ring.is_unit(s as u64))
            .map(|(_, &c)| c)
            .sum();
        let weight = phi * hist[r] as f64 - coprime as f64;
        log += weight * (-q.powi(-(k as i32))).ln_1p();
    }
    Ok(EulerConstant {
        value: (log / phi).exp(),
        cutoff,
        convergence: q.powf(-(cutoff as f64) / 2.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitConstant {
    /// `P(n_max) (n_max log q)^{1/Phi}`.
    pub raw: f64,
    /// `P(n_max) (e^{H_n - gamma} log q)^{1/Phi}`.
    pub harmonic: f64,
    /// Intercept of `h(n) = C + A q^{-n/2}` fitted on the last five points.
    pub extrapolated: f64,
    pub amplitude: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub n_min: usize,
    pub n_max: usize,
}

pub const LIMIT_FIT_POINTS: usize = 5;

/// Least-squares line `y = a + b x`; returns `(a, b, rms residual)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let a = my - b * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a - b * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (a, b, rms)
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// `C` as the limit of `P(n) (n log q)^{1/Phi}`. The fit replaces n by
/// `e^{H_n - gamma}` (same limit) so that the O(1/n) Euler-Maclaurin error of
/// the unrestricted product drops out and only `q^{-n/2}` modes remain.
pub fn constant_via_limit(ring: &ResidueRing, a0: &Poly, n_max: usize) -> Result<LimitConstant> {
    if n_max < LIMIT_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: LIMIT_FIT_POINTS,
            got: n_max,
        });
    }
    let traj = mertens_trajectory(ring, a0, n_max)?;
    let q = ring.poly_ring().q() as f64;
    let inv_phi = 1.0 / ring.phi() as f64;
    let lq = q.ln();
    let h = |p: &MertensPoint| {
        (p.log_product + inv_phi * ((harmonic(p.n) - EULER_GAMMA).exp() * lq).ln()).exp()
    };
    let n_min = n_max + 1 - LIMIT_FIT_POINTS;
    let xs: Vec<f64> = (n_min..=n_max).map(|n| q.powf(-(n as f64) / 2.0)).collect();
    let ys: Vec<f64> = traj[n_min..].iter().map(h).collect();
    let (c, a, rms) = linear_fit(&xs, &ys);
    let last = &traj[n_max];
    Ok(LimitConstant {
        raw: (last.log_product + inv_phi * (n_max as f64 * lq).ln()).exp(),
        harmonic: h(last),
        extrapolated: c,
        amplitude: a,
        residual: rms,
        n_min,
        n_max,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(rename = "via_L")]
    pub via_l: f64,
    #[serde(rename = "via_L_leading")]
    pub via_l_leading: f64,
    pub via_euler: Option<EulerConstant>,
    pub via_limit: Option<LimitConstant>,
    pub imag_residual: f64,
    /// Disagreement of the two Lambda evaluations.
    pub lambda_check: f64,
}

impl Constants {
    /// Largest pairwise relative gap among via_L, via_euler and via_limit.
    pub fn max_relative_gap(&self) -> f64 {
        let mut vals = vec![self.via_l];
        vals.extend(self.via_euler.as_ref().map(|e| e.value));
        vals.extend(self.via_limit.as_ref().map(|l| l.extrapolated));
        let mut gap = 0f64;
        for (i, a) in vals.iter().enumerate() {
            for b in &vals[i + 1..] {
                gap = gap.max((a - b).abs() / a.abs().min(b.abs()));
            }
        }
        gap
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub field: FieldSpec,
    #[serde(rename = "Q")]
    pub modulus: String,
    #[serde(rename = "A0")]
    pub a0: String,
    pub phi: u64,
    pub kappa_q: f64,
    #[serde(rename = "C")]
    pub c: Constants,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub n: usize,
    pub product: f64,
    /// `P(n) (n log q)^{1/Phi} / C - 1`
    pub residual: f64,
    /// `P(n) (e^{H_n - gamma} log q)^{1/Phi} / C - 1`
    pub harmonic_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Slope of `log |R(n)|` per unit n.
    pub decay_rate: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub pass: bool,
}

impl DecayFit {
    /// Pass: decay at most `-0.4 log q` per n and `|R(n)| <= K q^{-n/2}` with
    /// `K <= 100`.
    pub fn from_residuals(q: f64, ns: &[usize], rs: &[f64]) -> DecayFit {
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let ys: Vec<f64> = rs.iter().map(|r| r.abs().max(1e-300).ln()).collect();
        let (_, slope, _) = linear_fit(&xs, &ys);
        let k = ns
            .iter()
            .zip(rs)
            .map(|(&n, r)| r.abs() * q.powf(n as f64 / 2.0))
            .fold(0.0, f64::max);
        DecayFit {
            decay_rate: slope,
            k,
            pass: slope <= -0.4 * q.ln() && k <= 100.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub field: FieldSpec,
    #[serde(rename = "Q")]
    pub modulus: String,
    #[serde(rename = "A0")]
    pub a0: String,
    pub phi: u64,
    pub kappa_q: f64,
    #[serde(rename = "C")]
    pub c: Constants,
    pub points: Vec<ResidualPoint>,
    pub fit: DecayFit,
    /// The same fit on the harmonic-normalized residuals.
    pub harmonic_fit: DecayFit,
    pub warnings: Vec<String>,
}

impl ModulusContext {
    /// Residuals `R(n)` against the canonical constant over `range`.
    pub fn verify_theorem(
        &self,
        a0: &Poly,
        range: RangeInclusive<usize>,
        methods: &Methods,
    ) -> Result<VerificationReport> {
        let (lo, hi) = (*range.start(), *range.end());
        if hi < lo || hi - lo + 1 < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: (hi + 1).saturating_sub(lo),
            });
        }
        let report = self.constant_report(a0, methods)?;
        let ring = self.ring();
        let q = self.q();
        let inv_phi = 1.0 / self.phi();
        let c = report.c.via_l;
        let traj = mertens_trajectory(ring, a0, hi)?;
        let points: Vec<ResidualPoint> = traj[lo..]
            .iter()
            .map(|p| {
                let n = p.n as f64;
                let scaled = |x: f64| (p.log_product + inv_phi * (x * q.ln()).ln()).exp() / c - 1.0;
                ResidualPoint {
                    n: p.n,
                    product: p.product,
                    residual: scaled(n),
                    harmonic_residual: scaled((harmonic(p.n) - EULER_GAMMA).exp()),
                }
            })
            .collect();
        let ns: Vec<usize> = points.iter().map(|p| p.n).collect();
        let rs: Vec<f64> = points.iter().map(|p| p.residual).collect();
        let hs: Vec<f64> = points.iter().map(|p| p.harmonic_residual).collect();
        let mut warnings = Vec::new();
        if 2 * ring.degree() > lo {
            warnings.push(format!(
                "deg Q = {} exceeds n/2 at n = {lo}; the asymptotic regime needs deg Q <= eta n",
                ring.degree()
            ));
        }
        Ok(VerificationReport {
            field: report.field,
            modulus: report.modulus,
            a0: report.a0,
            phi: report.phi,
            kappa_q: report.kappa_q,
            c: report.c,
            fit: DecayFit::from_residuals(q, &ns, &rs),
            harmonic_fit: DecayFit::from_residuals(q, &ns, &hs),
            points,
            warnings,
        })
    }
}

/// Relative defect, in log space, of
/// `prod_{A0} P(n; Q, A0) prod_{P|Q, deg P <= n} (1 - |P|^{-1}) = rosen_product(n)`.
pub fn splitting_defect(ring: &ResidueRing, n: usize) -> Result<f64> {
    let q = ring.poly_ring().q() as f64;
    let mut log = 0.0;
    for k in 1..=n {
        let hist = ring.prime_histogram(k)?;
        let coprime: u64 = ring.units().iter().map(|&r| hist[r as usize]).sum();
        log += coprime as f64 * (-q.powi(-(k as i32))).ln_1p();
    }
    for p in ring.factorization().primes().filter(|p| p.degree() <= n) {
        log += (-q.powi(-(p.degree() as i32))).ln_1p();
    }
    let rosen = rosen_product(ring.poly_ring().q(), n)?.log_product;
    Ok(if rosen == 0.0 {
        log.abs()
    } else {
        ((log - rosen) / rosen).abs()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqfield::Field;

    fn ring(q: u64, modulus: &str) -> ResidueRing {
        let pr = PolyRing::new(Field::from_order(q).unwrap());
        let m = pr.parse_monic(modulus).unwrap();
        ResidueRing::new(&pr, &m).unwrap()
    }

    fn poly(r: &ResidueRing, s: &str) -> Poly {
        r.poly_ring().parse(s).unwrap()
    }

    #[test]
    fn product_examples() {
        let r = ring(2, "t^2");
        assert_eq!(mertens_product(&r, &poly(&r, "t+1"), 0).unwrap().product, 1.0);
        assert!((mertens_product(&r, &poly(&r, "t+1"), 1).unwrap().product - 0.5).abs() < 1e-15);
        let p = mertens_product(&r, &poly(&r, "1"), 1).unwrap();
        assert_eq!((p.product, p.prime_count), (1.0, 0));
        assert!(matches!(
            mertens_product(&r, &poly(&r, "t"), 3),
            Err(Error::NotCoprime(_))
        ));
    }

    #[test]
    fn rosen_examples() {
        assert!((rosen_product(2, 1).unwrap().product - 0.25).abs() < 1e-15);
        assert!((rosen_product(2, 2).unwrap().product - 3.0 / 16.0).abs() < 1e-15);
        let pr = PolyRing::new(Field::from_order(3).unwrap());
        for n in 0..9 {
            let a = rosen_product(3, n).unwrap();
            let b = rosen_product_enumerated(&pr, n).unwrap();
            assert_eq!(a.prime_count, b.prime_count);
            assert!((a.log_product - b.log_product).abs() < 1e-12);
            assert!((rosen_log_product(3, n) - a.log_product).abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_values() {
        // mpmath, 30 digits
        let want = [
            (2, 0.38917405803302940),
            (3, 0.61682628823583064),
            (4, 0.77834811606605880),
            (5, 0.90363417914821575),
        ];
        for (q, k) in want {
            assert!((kappa_q(q) - k).abs() < 1e-13 * k, "q={q}");
        }
        // n log q Rosen(n) = kappa (1 - 1/(2n) + O(1/n^2))
        let n = 20;
        let limit = n as f64 * 2f64.ln() * rosen_product(2, n).unwrap().product;
        let rel = limit / kappa_q(2) - 1.0;
        assert!((rel + 1.0 / 40.0).abs() < 5e-3, "{rel}");
    }

    #[test]
    fn leading_formula_examples() {
        let r = ring(2, "t^2");
        let ctx = ModulusContext::new(&r, RootMethod::Companion, Exec::Sequential).unwrap();
        let k = kappa_q(2);
        let one = ctx.constant_via_l_leading(&poly(&r, "1")).unwrap();
        assert!((one.ln().re - (0.5 * k.ln() - 0.5 * 0.5f64.ln())).abs() < 1e-12);
        let t1 = ctx.constant_via_l_leading(&poly(&r, "t+1")).unwrap();
        assert!((t1.ln().re - (0.5 * k.ln() + 0.5 * 0.5f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn linear_modulus_constant_is_twice_kappa() {
        let r = ring(2, "t");
        let ctx = ModulusContext::new(&r, RootMethod::Companion, Exec::Sequential).unwrap();
        let c = ctx.constant_via_l(&poly(&r, "1")).unwrap();
        assert!((c / (2.0 * kappa_q(2)) - 1.0).abs() < 1e-12);
        let lim = constant_via_limit(&r, &poly(&r, "1"), 20).unwrap();
        assert!((lim.extrapolated / c - 1.0).abs() < 1e-4);
    }

    #[test]
    fn lambda_routes_agree() {
        let r = ring(3, "t^3+2*t+1");
        let ctx = ModulusContext::new(&r, RootMethod::Companion, Exec::Sequential).unwrap();
        for chi in ctx.ldata().chars().iter().skip(1) {
            let a = ctx.lambda(chi).unwrap();
            let b = ctx.lambda_direct(chi);
            assert!((a - b).norm() < 1e-12, "{chi}: {a} vs {b}");
        }
    }

    #[test]
    fn tail_examples() {
        let r = ring(2, "t^2");
        let ctx = ModulusContext::new(&r, RootMethod::Companion, Exec::Sequential).unwrap();
        let chi = &ctx.ldata().chars()[1];
        // L = 1 - u: T(chi, 1) = T(chi, 2) = -1
        let t = ctx.table();
        assert!((t.get(1, 1) + 1.0).norm() < 1e-12);
        assert!((t.get(1, 2) + 1.0).norm() < 1e-12);
        let tail0 = ctx.tail_sum(0, chi).unwrap();
        let want: Complex64 = (1..=ctx.n_eff()).map(|k| t.get(1, k) * 0.5f64.powi(k as i32)).sum();
        assert!((tail0 - want).norm() < 1e-15);
        assert!(ctx.tail_sum(ctx.n_eff(), chi).unwrap().norm() <= 1e-15);
        assert!(ctx.tail_sum(3, &ctx.ldata().chars()[0]).is_err());
    }

    #[test]
    fn euler_exponents() {
        // one prime, in or out of the class, moves log C^Phi by (Phi - 1) or -1 factors
        let r = ring(2, "t^2");
        let k = kappa_q(2);
        let a = constant_via_euler(&r, &poly(&r, "1"), 1, k).unwrap();
        let b = constant_via_euler(&r, &poly(&r, "t+1"), 1, k).unwrap();
        let base = k.ln() - 0.5f64.ln();
        assert!(((a.value.ln() * 2.0) - (base - 0.5f64.ln())).abs() < 1e-12);
        assert!(((b.value.ln() * 2.0) - (base + 0.5f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn methods_agree_small() {
        let r = ring(2, "t^2");
        let ctx = ModulusContext::new(&r, RootMethod::Companion, Exec::Sequential).unwrap();
        for a0 in ["1", "t+1"] {
            let rep = ctx
                .constant_report(
                    &poly(&r, a0),
                    &Methods {
                        euler_cutoff: Some(14),
                        limit_n_max: Some(20),
                    },
                )
                .unwrap();
            assert!(rep.c.imag_residual < 1e-12);
            assert!(rep.c.max_relative_gap() < 1e-3, "{:?}", rep.c);
        }
    }

    #[test]
    fn splitting_is_exact() {
        for m in ["t^2", "t^3+t", "t^2+t+1"] {
            let r = ring(2, m);
            for n in 0..12 {
                assert!(splitting_defect(&r, n).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn n_eff_bounds() {
        let n = n_eff(2, 2);
        let f = |n: usize| 4.0 * 2f64.powf(-((n + 1) as f64) / 2.0) / ((n + 1) as f64 * (1.0 - 0.5f64.sqrt()));
        assert!(f(n) <= TAIL_EPS && f(n - 1) > TAIL_EPS);
    }
}
