//! Factorization over F_q: trial division by enumerated irreducibles for
//! small degrees, otherwise square-free decomposition followed by
//! distinct-degree and equal-degree (Cantor-Zassenhaus) splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{kernel, Factorization, MonicPoly, Poly, PolyRing};
use crate::error::Result;
use crate::fqfield::Field;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FactorMethod {
    /// Trial division when `deg f <= 12` and the divisor lists are cheap,
    /// Cantor-Zassenhaus otherwise.
    #[default]
    Auto,
    TrialDivision,
    CantorZassenhaus,
}

const TRIAL_MAX_DEGREE: usize = 12;
const TRIAL_MAX_CANDIDATES: u128 = 1 << 16;

pub(super) fn factor(ring: &PolyRing, f: &Poly, method: FactorMethod) -> Result<Factorization> {
    let field = ring.field();
    let lead = *f.coeffs().last().unwrap();
    let monic = kernel::make_monic(field, f.coeffs());
    let n = monic.len() - 1;
    let use_trial = match method {
        FactorMethod::TrialDivision => true,
        FactorMethod::CantorZassenhaus => false,
        FactorMethod::Auto => {
            n <= TRIAL_MAX_DEGREE
                && (ring.q() as u128).pow((n / 2) as u32) <= TRIAL_MAX_CANDIDATES
        }
    };
    let mut factors = if use_trial {
        trial_division(ring, monic)?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ring.seed());
        cantor_zassenhaus(field, &monic, &mut rng)
    };
    factors.sort();
    // merge equal primes coming from different square-free layers
    let mut merged: Vec<(Vec<u32>, u32)> = Vec::new();
    for (p, e) in factors {
        match merged.last_mut() {
            Some((last, m)) if *last == p => *m += e,
            _ => merged.push((p, e)),
        }
    }
    let mut out: Vec<(MonicPoly, u32)> = merged
        .into_iter()
        .map(|(p, e)| (MonicPoly(Poly::from_raw(field, p)), e))
        .collect();
    out.sort();
    Ok(Factorization {
        unit: field.elem(lead)?,
        factors: out,
    })
}

fn trial_division(ring: &PolyRing, mut f: Vec<u32>) -> Result<Vec<(Vec<u32>, u32)>> {
    let field = ring.field();
    let q = ring.q();
    let mut out = Vec::new();
    let mut d = 1;
    while 2 * d < f.len() {
        for &idx in ring.irreducible_list(d)?.indices() {
            let mut p = kernel::unpack(q, idx, d);
            p.push(1);
            let mut e = 0;
            loop {
                let (quot, rem) = kernel::divrem(field, &f, &p);
                if !rem.is_empty() {
                    break;
                }
                f = quot;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            if 2 * d >= f.len() {
                break;
            }
        }
        d += 1;
    }
    if f.len() > 1 {
        out.push((f, 1));
    }
    Ok(out)
}

fn cantor_zassenhaus(field: &Field, f: &[u32], rng: &mut ChaCha8Rng) -> Vec<(Vec<u32>, u32)> {
    let mut out = Vec::new();
    for (g, mult) in square_free(field, f) {
        for (h, d) in distinct_degree(field, &g) {
            let mut pieces = Vec::new();
            equal_degree(field, &h, d, rng, &mut pieces);
            out.extend(pieces.into_iter().map(|p| (p, mult)));
        }
    }
    out
}

/// Square-free layers `(g, m)` with `f = prod g^m`, each `g` square-free.
pub(crate) fn square_free(field: &Field, f: &[u32]) -> Vec<(Vec<u32>, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let df = kernel::derivative(field, f);
    let mut c = kernel::gcd(field, f, &df);
    let mut w = kernel::divrem(field, f, &c).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = kernel::gcd(field, &w, &c);
        let z = kernel::divrem(field, &w, &y).0;
        if z.len() > 1 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = kernel::divrem(field, &c, &w).0;
    }
    if c.len() > 1 {
        // what is left is a p-th power
        let p = field.p() as usize;
        let root: Vec<u32> = c.iter().step_by(p).map(|&x| field.pth_root(x)).collect();
        for (g, m) in square_free(field, &root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Split a square-free `f` into `(h, d)` where `h` is the product of its
/// irreducible factors of degree `d`.
fn distinct_degree(field: &Field, f: &[u32]) -> Vec<(Vec<u32>, usize)> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    let mut g = f.to_vec();
    let t = vec![0u32, 1];
    let mut h = t.clone();
    kernel::rem_monic_in_place(field, &mut h, &g);
    let mut d = 1;
    while 2 * d < g.len() {
        h = kernel::powmod(field, &h, q, &g);
        let diff = kernel::sub(field, &h, &t);
        let common = kernel::gcd(field, &diff, &g);
        if common.len() > 1 {
            g = kernel::divrem(field, &g, &common).0;
            kernel::rem_monic_in_place(field, &mut h, &g);
            out.push((common, d));
        }
        d += 1;
    }
    if g.len() > 1 {
        let deg = g.len() - 1;
        out.push((g, deg));
    }
    out
}

fn equal_degree(
    field: &Field,
    f: &[u32],
    d: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Vec<u32>>,
) {
    let n = f.len() - 1;
    if n == d {
        out.push(f.to_vec());
        return;
    }
    let q = field.q() as u64;
    loop {
        let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..field.q())).collect();
        let mut a = a;
        kernel::trim(&mut a);
        if a.len() <= 1 {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^{(q^d-1)/2} = N(a)^{(q-1)/2} with N(a) = a^{1+q+...+q^{d-1}}
            let mut norm = a.clone();
            let mut conj = a.clone();
            for _ in 1..d {
                conj = kernel::powmod(field, &conj, q, f);
                norm = kernel::mulmod(field, &norm, &conj, f);
            }
            let half = kernel::powmod(field, &norm, (q - 1) / 2, f);
            kernel::sub(field, &half, &[1])
        } else {
            // absolute trace to F_2: a + a^2 + ... + a^{2^{kd-1}}
            let steps = field.k() as usize * d;
            let mut acc = a.clone();
            let mut sq = a.clone();
            for _ in 1..steps {
                sq = kernel::mulmod(field, &sq, &sq, f);
                acc = kernel::add(field, &acc, &sq);
            }
            acc
        };
        let g = kernel::gcd(field, &b, f);
        if g.len() > 1 && g.len() < f.len() {
            let rest = kernel::divrem(field, f, &g).0;
            equal_degree(field, &g, d, rng, out);
            equal_degree(field, &rest, d, rng, out);
            return;
        }
    }
}
