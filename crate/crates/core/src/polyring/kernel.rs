//! Coefficient-slice arithmetic over F_q. Inputs and outputs are
//! little-endian and trimmed (no trailing zeros) unless noted.

use crate::fqfield::Field;

pub fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn add(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    trim(&mut out);
    out
}

pub fn neg(f: &Field, a: &[u32]) -> Vec<u32> {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub fn sub(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, &s) in out.iter_mut().zip(b) {
        *o = f.sub(*o, s);
    }
    trim(&mut out);
    out
}

pub fn scale(f: &Field, a: &[u32], c: u32) -> Vec<u32> {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&x| f.mul(x, c)).collect()
}

pub fn mul(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// In-place remainder modulo a monic `m`.
pub fn rem_monic_in_place(f: &Field, r: &mut Vec<u32>, m: &[u32]) {
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            let nl = f.neg(lead);
            for (i, &mi) in m[..dm].iter().enumerate() {
                if mi != 0 {
                    r[shift + i] = f.add(r[shift + i], f.mul(nl, mi));
                }
            }
        }
        r.pop();
    }
    trim(r);
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &Field, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let inv_lead = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    let mut quot = vec![0u32; a.len() - db];
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            let c = f.mul(lead, inv_lead);
            quot[shift] = c;
            let nc = f.neg(c);
            for (i, &bi) in b[..db].iter().enumerate() {
                if bi != 0 {
                    r[shift + i] = f.add(r[shift + i], f.mul(nc, bi));
                }
            }
        }
        r.pop();
    }
    trim(&mut r);
    trim(&mut quot);
    (quot, r)
}

pub fn make_monic(f: &Field, a: &[u32]) -> Vec<u32> {
    match a.last() {
        None => Vec::new(),
        Some(&1) => a.to_vec(),
        Some(&lead) => scale(f, a, f.inv(lead).expect("nonzero")),
    }
}

/// Monic gcd; `gcd(0, 0)` is returned as the empty vector.
pub fn gcd(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

pub fn mulmod(f: &Field, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    let mut prod = mul(f, a, b);
    rem_monic_in_place(f, &mut prod, m);
    prod
}

/// `a^e mod m` for monic `m` of degree >= 1.
pub fn powmod(f: &Field, a: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut base = a.to_vec();
    rem_monic_in_place(f, &mut base, m);
    let mut result = vec![1u32];
    rem_monic_in_place(f, &mut result, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(f, &base, &base, m);
        }
    }
    result
}

pub fn derivative(f: &Field, a: &[u32]) -> Vec<u32> {
    let p = f.p() as usize;
    let mut out: Vec<u32> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| {
            // i * c computed as repeated addition of c, i mod p times
            let mut acc = 0;
            for _ in 0..(i % p) {
                acc = f.add(acc, c);
            }
            acc
        })
        .collect();
    trim(&mut out);
    out
}

/// Unpack a base-q index into `len` coefficients.
pub fn unpack(q: u64, mut idx: u64, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((idx % q) as u32);
        idx /= q;
    }
    out
}

pub fn pack(q: u64, coeffs: &[u32]) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
}
