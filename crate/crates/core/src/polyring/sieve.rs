//! Irreducible lists per degree: a multiples sieve over the packed index
//! space and a per-candidate Rabin test, plus the shared cache.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use super::affine::AffineWalk;
use super::{kernel, IrreducibleMode, PolyRing};
use crate::error::Result;
use crate::fqfield::{prime_factors, Field, FieldSpec};

/// Target number of visits per sieve job.
const JOB_SIZE: u64 = 1 << 16;
const RABIN_CHUNK: u64 = 1 << 12;

/// Sorted packed indices of the monic irreducibles of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibleList {
    degree: usize,
    indices: Vec<u64>,
}

impl IrreducibleList {
    pub fn new(degree: usize, indices: Vec<u64>) -> IrreducibleList {
        IrreducibleList { degree, indices }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Irreducible lists keyed by (field, degree). A list is inserted only once
/// fully built, so readers never see a partial degree.
#[derive(Debug, Default)]
pub struct IrreducibleCache {
    lists: RwLock<HashMap<(FieldSpec, usize), Arc<IrreducibleList>>>,
}

impl IrreducibleCache {
    pub fn get(&self, spec: &FieldSpec, n: usize) -> Option<Arc<IrreducibleList>> {
        self.lists
            .read()
            .expect("cache lock")
            .get(&(spec.clone(), n))
            .cloned()
    }

    pub fn insert(&self, spec: &FieldSpec, list: IrreducibleList) -> Arc<IrreducibleList> {
        let mut map = self.lists.write().expect("cache lock");
        map.entry((spec.clone(), list.degree))
            .or_insert_with(|| Arc::new(list))
            .clone()
    }

    /// Cached degrees for a field, ascending.
    pub fn degrees(&self, spec: &FieldSpec) -> Vec<usize> {
        let map = self.lists.read().expect("cache lock");
        let mut d: Vec<usize> = map
            .keys()
            .filter(|(s, _)| s == spec)
            .map(|&(_, n)| n)
            .collect();
        d.sort_unstable();
        d
    }

    pub(super) fn get_or_build(&self, ring: &PolyRing, n: usize) -> Result<Arc<IrreducibleList>> {
        let spec = ring.field().spec();
        if let Some(list) = self.get(spec, n) {
            return Ok(list);
        }
        let indices = match ring.mode {
            IrreducibleMode::Sieve => sieve_degree(ring, n)?,
            IrreducibleMode::Rabin => rabin_degree(ring, n)?,
        };
        Ok(self.insert(spec, IrreducibleList::new(n, indices)))
    }
}

struct Bitset {
    words: Vec<AtomicU64>,
    shared: bool,
}

impl Bitset {
    fn new(bits: u64, shared: bool) -> Bitset {
        Bitset {
            words: (0..bits.div_ceil(64)).map(|_| AtomicU64::new(0)).collect(),
            shared,
        }
    }

    #[inline]
    fn set(&self, i: u64) {
        let w = &self.words[(i >> 6) as usize];
        let bit = 1u64 << (i & 63);
        if self.shared {
            w.fetch_or(bit, Ordering::Relaxed);
        } else {
            // single writer: a plain read-modify-write is enough
            w.store(w.load(Ordering::Relaxed) | bit, Ordering::Relaxed);
        }
    }

    fn unset_below(&self, bits: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for (wi, w) in self.words.iter().enumerate() {
            let mut free = !w.load(Ordering::Relaxed);
            while free != 0 {
                let b = free.trailing_zeros() as u64;
                let i = ((wi as u64) << 6) | b;
                if i >= bits {
                    break;
                }
                out.push(i);
                free &= free - 1;
            }
        }
        out
    }
}

/// Sieve degree `n`: cross out `P * G` for every irreducible `P` of degree
/// `d <= n/2` and monic `G` of degree `n - d`.
pub(super) fn sieve_degree(ring: &PolyRing, n: usize) -> Result<Vec<u64>> {
    let size = ring.check_budget(n)?;
    let field = ring.field();
    let q = ring.q();
    let p = field.p() as u64;
    let mut primes = Vec::new();
    for d in 1..=n / 2 {
        let list = ring.irreducible_list(d)?;
        for &idx in list.indices() {
            let mut c = kernel::unpack(q, idx, d);
            c.push(1);
            primes.push(c);
        }
    }
    let mut jobs = Vec::new();
    for prime in &primes {
        let d = prime.len() - 1;
        let m = n - d;
        let mut start = vec![0u32; n];
        start[m..].copy_from_slice(&prime[..d]);
        let slots: Vec<(usize, Vec<u32>)> = (0..m).map(|i| (i, prime.clone())).collect();
        let walk = AffineWalk::over_coefficients(field, start, &slots);
        let mut top = 0;
        let mut count = walk.count();
        while count > JOB_SIZE {
            count /= p;
            top += 1;
        }
        if top == 0 {
            jobs.push(walk);
        } else {
            jobs.extend(walk.split(top));
        }
    }
    let marks = Bitset::new(size, ring.exec().is_parallel());
    ring.exec().map(&jobs, |w| w.for_each(|i| marks.set(i)));
    Ok(marks.unset_below(size))
}

/// Test every monic candidate of degree `n` with [`rabin`].
pub(super) fn rabin_degree(ring: &PolyRing, n: usize) -> Result<Vec<u64>> {
    let size = ring.check_budget(n)?;
    let field = ring.field();
    let q = ring.q();
    let chunks = size.div_ceil(RABIN_CHUNK) as usize;
    let parts = ring.exec().map_range(chunks, |c| {
        let lo = c as u64 * RABIN_CHUNK;
        let hi = (lo + RABIN_CHUNK).min(size);
        (lo..hi)
            .filter(|&idx| {
                let mut f = kernel::unpack(q, idx, n);
                f.push(1);
                rabin(field, &f)
            })
            .collect::<Vec<u64>>()
    });
    Ok(parts.concat())
}

/// Rabin's criterion for a monic `f` of degree >= 1: `t^{q^n} = t mod f`
/// and `gcd(t^{q^{n/r}} - t, f) = 1` for every prime `r | n`.
pub(crate) fn rabin(field: &Field, f: &[u32]) -> bool {
    let n = f.len() - 1;
    let q = field.q() as u64;
    let mut t = vec![0u32, 1];
    kernel::rem_monic_in_place(field, &mut t, f);
    let checkpoints: Vec<usize> = prime_factors(n as u64)
        .into_iter()
        .map(|r| n / r as usize)
        .collect();
    let mut h = t.clone();
    for j in 1..=n {
        h = kernel::powmod(field, &h, q, f);
        if checkpoints.contains(&j) {
            let diff = kernel::sub(field, &h, &t);
            if kernel::gcd(field, &diff, f) != [1] {
                return false;
            }
        }
    }
    h == t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Exec;

    #[test]
    fn sieve_matches_rabin_small() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let ring = PolyRing::new(Field::from_order(q).unwrap());
            let mut n = 1;
            while (q as u128).pow(n as u32) <= 1 << 12 {
                let s = ring.irreducibles_with_mode(n, IrreducibleMode::Sieve).unwrap();
                let r = ring.irreducibles_with_mode(n, IrreducibleMode::Rabin).unwrap();
                assert_eq!(s, r, "q={q} n={n}");
                assert_eq!(s.len() as u128, ring.count_irreducibles(n).unwrap());
                n += 1;
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = Field::new(3, 1).unwrap();
        let a = PolyRing::new(f.clone()).with_exec(Exec::Sequential);
        let b = PolyRing::new(f).with_exec(Exec::Parallel);
        assert_eq!(
            a.irreducible_list(9).unwrap().indices(),
            b.irreducible_list(9).unwrap().indices()
        );
    }

    #[test]
    fn cache_is_shared() {
        let ring = PolyRing::new(Field::new(2, 1).unwrap());
        let first = ring.irreducible_list(6).unwrap();
        let again = ring.irreducible_list(6).unwrap();
        assert!(Arc::ptr_eq(&first, &again));
        assert_eq!(ring.cache().degrees(ring.field().spec()), vec![1, 2, 3, 6]);
    }
}
