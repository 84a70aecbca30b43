//! Packed residues modulo a monic Q and residue-class histograms.
//!
//! A residue `r_0 + r_1 t + ... + r_{m-1} t^{m-1}` (m = deg Q) is stored as
//! the base-q number with digits `r_i`. Histograms of the residues of all
//! monic polynomials, or of all irreducibles, of one degree are the raw
//! material for L-coefficients and prime character sums.

use super::affine::AffineWalk;
use super::{kernel, PolyRing};
use crate::error::Result;
use crate::fqfield::Field;

/// Reduction and multiplication of packed residues mod Q.
#[derive(Clone, Debug)]
pub struct Reducer {
    field: Field,
    modulus: Vec<u32>,
    m: usize,
    size: u64,
    adder: PackedAdder,
}

impl Reducer {
    /// `modulus` must be monic of degree >= 1.
    pub fn new(field: &Field, modulus: &[u32]) -> Reducer {
        let m = modulus.len() - 1;
        let q = field.q() as u64;
        let size = q.pow(m as u32);
        Reducer {
            field: field.clone(),
            modulus: modulus.to_vec(),
            m,
            size,
            adder: PackedAdder::new(field, m),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Number of residues, `|Q| = q^{deg Q}`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn adder(&self) -> &PackedAdder {
        &self.adder
    }

    pub fn reduce(&self, f: &[u32]) -> u64 {
        let mut r = f.to_vec();
        kernel::rem_monic_in_place(&self.field, &mut r, &self.modulus);
        self.pack(&r)
    }

    pub fn pack(&self, v: &[u32]) -> u64 {
        kernel::pack(self.field.q() as u64, v)
    }

    /// Trimmed coefficients of a packed residue.
    pub fn unpack(&self, r: u64) -> Vec<u32> {
        let mut v = kernel::unpack(self.field.q() as u64, r, self.m);
        kernel::trim(&mut v);
        v
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let prod = kernel::mulmod(&self.field, &self.unpack(a), &self.unpack(b), &self.modulus);
        self.pack(&prod)
    }

    /// `t^n mod Q` as a length-m vector.
    pub fn t_power(&self, n: usize) -> Vec<u32> {
        let mut v = kernel::powmod(&self.field, &[0, 1], n as u64, &self.modulus);
        v.resize(self.m, 0);
        v
    }

    /// Walk over the residues of `start + sum_{i in positions} c_i t^i`.
    fn walk(&self, start: Vec<u32>, positions: std::ops::Range<usize>) -> AffineWalk<'_> {
        let slots: Vec<(usize, Vec<u32>)> = positions.map(|i| (0, self.t_power(i))).collect();
        AffineWalk::over_coefficients(&self.field, start, &slots)
    }

    /// Residues of the monic polynomials of degree `n`, in index order.
    pub fn monic_residues(&self, n: usize, mut visit: impl FnMut(u64)) {
        self.walk(self.t_power(n), 0..n).for_each(&mut visit);
    }

    /// Split lookup tables for residues of monic polynomials of degree `n`.
    pub fn split_table(&self, n: usize) -> SplitTable {
        let h = n / 2;
        let q = self.field.q() as u64;
        let mut lo = Vec::with_capacity(q.pow(h as u32) as usize);
        self.walk(vec![0; self.m], 0..h).for_each(|r| lo.push(r));
        let mut hi = Vec::with_capacity(q.pow((n - h) as u32) as usize);
        self.walk(self.t_power(n), h..n).for_each(|r| hi.push(r));
        SplitTable {
            modulus: q.pow(h as u32),
            lo,
            hi,
        }
    }
}

/// Addition of packed residues.
#[derive(Clone, Debug)]
pub enum PackedAdder {
    /// Characteristic 2: digits are bit strings and addition is XOR.
    Xor,
    Table { size: u64, table: Vec<u16> },
    Digits { field: Field, m: usize },
}

const ADD_TABLE_LIMIT: u64 = 1 << 10;

impl PackedAdder {
    pub fn new(field: &Field, m: usize) -> PackedAdder {
        let q = field.q() as u64;
        let size = q.pow(m as u32);
        if field.p() == 2 {
            PackedAdder::Xor
        } else if size <= ADD_TABLE_LIMIT {
            let slow = PackedAdder::Digits {
                field: field.clone(),
                m,
            };
            let mut table = vec![0u16; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    table[(a * size + b) as usize] = slow.add(a, b) as u16;
                }
            }
            PackedAdder::Table { size, table }
        } else {
            PackedAdder::Digits {
                field: field.clone(),
                m,
            }
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self {
            PackedAdder::Xor => a ^ b,
            PackedAdder::Table { size, table } => table[(a * size + b) as usize] as u64,
            PackedAdder::Digits { field, m } => {
                let q = field.q() as u64;
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for _ in 0..*m {
                    out += field.add((a % q) as u32, (b % q) as u32) as u64 * place;
                    a /= q;
                    b /= q;
                    place *= q;
                }
                out
            }
        }
    }
}

/// `residue(idx) = lo[idx mod q^h] + hi[idx / q^h]`.
#[derive(Clone, Debug)]
pub struct SplitTable {
    modulus: u64,
    lo: Vec<u64>,
    hi: Vec<u64>,
}

impl SplitTable {
    #[inline]
    pub fn residue(&self, adder: &PackedAdder, idx: u64) -> u64 {
        adder.add(
            self.lo[(idx % self.modulus) as usize],
            self.hi[(idx / self.modulus) as usize],
        )
    }
}

impl PolyRing {
    /// Count of monic polynomials of degree `n` in each residue class.
    pub fn monic_residue_histogram(&self, red: &Reducer, n: usize) -> Result<Vec<u64>> {
        self.check_budget(n)?;
        let mut hist = vec![0u64; red.size() as usize];
        red.monic_residues(n, |r| hist[r as usize] += 1);
        Ok(hist)
    }

    /// Count of monic irreducibles of degree `n` in each residue class.
    pub fn prime_residue_histogram(&self, red: &Reducer, n: usize) -> Result<Vec<u64>> {
        let list = self.irreducible_list(n)?;
        let table = red.split_table(n);
        let adder = red.adder();
        let size = red.size() as usize;
        let idx = list.indices();
        let chunks = (self.exec().threads() * 4)
            .min(idx.len().div_ceil(1 << 12))
            .max(1);
        let per = idx.len().div_ceil(chunks).max(1);
        let parts = self.exec().map_range(chunks, |c| {
            let mut h = vec![0u64; size];
            let end = ((c + 1) * per).min(idx.len());
            for &i in &idx[(c * per).min(end)..end] {
                h[table.residue(adder, i) as usize] += 1;
            }
            h
        });
        let mut hist = vec![0u64; size];
        for part in parts {
            for (a, b) in hist.iter_mut().zip(part) {
                *a += b;
            }
        }
        Ok(hist)
    }

    /// Packed residues of the irreducibles of degree `n`, in list order.
    pub fn prime_residues(&self, red: &Reducer, n: usize) -> Result<Vec<u64>> {
        let list = self.irreducible_list(n)?;
        let table = red.split_table(n);
        let adder = red.adder();
        let chunks: Vec<&[u64]> = list.indices().chunks(1 << 14).collect();
        Ok(self
            .exec()
            .map(&chunks, |c| {
                c.iter()
                    .map(|&i| table.residue(adder, i))
                    .collect::<Vec<u64>>()
            })
            .concat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Poly;

    fn direct(ring: &PolyRing, red: &Reducer, n: usize, idx: u64) -> u64 {
        let f = Poly::from_index(ring.field(), n, idx);
        red.reduce(f.coeffs())
    }

    #[test]
    fn split_table_matches_reduction() {
        for q in [2u64, 3, 4, 5, 9] {
            let ring = PolyRing::new(Field::from_order(q).unwrap());
            let modulus = ring.parse_monic(if q == 4 || q == 9 { "[1,2,1]" } else { "t^2+1" }).unwrap();
            let red = Reducer::new(ring.field(), modulus.coeffs());
            for n in 0..5 {
                let table = red.split_table(n);
                let mut walked = Vec::new();
                red.monic_residues(n, |r| walked.push(r));
                for idx in 0..q.pow(n as u32) {
                    let want = direct(&ring, &red, n, idx);
                    assert_eq!(table.residue(red.adder(), idx), want);
                    assert_eq!(walked[idx as usize], want);
                }
            }
        }
    }

    #[test]
    fn adders_agree() {
        let f = Field::new(3, 1).unwrap();
        let table = PackedAdder::new(&f, 3);
        let digits = PackedAdder::Digits { field: f, m: 3 };
        assert!(matches!(table, PackedAdder::Table { .. }));
        for a in 0..27 {
            for b in 0..27 {
                assert_eq!(table.add(a, b), digits.add(a, b));
            }
        }
    }

    #[test]
    fn histograms_count_everything() {
        let ring = PolyRing::new(Field::new(3, 1).unwrap());
        let red = Reducer::new(ring.field(), ring.parse_monic("t^2+t").unwrap().coeffs());
        let monic = ring.monic_residue_histogram(&red, 5).unwrap();
        assert!(monic.iter().all(|&c| c == 27));
        let primes = ring.prime_residue_histogram(&red, 7).unwrap();
        assert_eq!(
            primes.iter().sum::<u64>() as u128,
            ring.count_irreducibles(7).unwrap()
        );
        let residues = ring.prime_residues(&red, 7).unwrap();
        let list = ring.irreducible_list(7).unwrap();
        for (&r, &i) in residues.iter().zip(list.indices()) {
            assert_eq!(r, direct(&ring, &red, 7, i));
        }
    }
}
