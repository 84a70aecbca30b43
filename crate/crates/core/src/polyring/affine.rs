//! Odometer walk over an affine family `start + sum_s d_s * v_s`, where every
//! digit `d_s` runs through F_p. The packed base-q index of the current
//! vector is maintained incrementally, so one step costs O(len v_s) field
//! additions instead of a full product or reduction.
//!
//! Both the irreducible sieve (multiples `P * G` of a fixed prime) and the
//! residue tables (`F mod Q` over all `F`) are walks of this shape.

use crate::fqfield::Field;

pub(crate) struct AffineWalk<'a> {
    field: &'a Field,
    start: Vec<u32>,
    steps: Vec<(usize, Vec<u32>)>,
    place: Vec<u64>,
}

impl<'a> AffineWalk<'a> {
    /// `slots[i] = (offset, v)` adds `c * v` at `offset` for the i-th free
    /// coefficient `c` in F_q; the least significant slot comes first.
    pub fn over_coefficients(
        field: &'a Field,
        start: Vec<u32>,
        slots: &[(usize, Vec<u32>)],
    ) -> AffineWalk<'a> {
        let mut steps = Vec::with_capacity(slots.len() * field.k() as usize);
        for (offset, v) in slots {
            for b in 0..field.k() {
                let e = field.basis(b);
                steps.push((*offset, v.iter().map(|&c| field.mul(c, e)).collect()));
            }
        }
        let q = field.q() as u64;
        let mut place = Vec::with_capacity(start.len());
        let mut acc = 1u64;
        for _ in 0..start.len() {
            place.push(acc);
            acc = acc.wrapping_mul(q);
        }
        AffineWalk {
            field,
            start,
            steps,
            place,
        }
    }

    pub fn count(&self) -> u64 {
        (self.field.p() as u64).pow(self.steps.len() as u32)
    }

    fn index_of(&self, v: &[u32]) -> u64 {
        v.iter()
            .zip(&self.place)
            .fold(0u64, |acc, (&c, &pl)| acc.wrapping_add(c as u64 * pl))
    }

    /// Visit the packed index of every member, in increasing order of the
    /// digit vector (first step least significant).
    pub fn for_each(&self, mut visit: impl FnMut(u64)) {
        let p = self.field.p();
        let mut cur = self.start.clone();
        let mut idx = self.index_of(&cur);
        let mut counters = vec![0u32; self.steps.len()];
        visit(idx);
        loop {
            let mut s = 0;
            loop {
                if s == self.steps.len() {
                    return;
                }
                let (offset, v) = &self.steps[s];
                for (j, &c) in v.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let pos = offset + j;
                    let old = cur[pos];
                    let new = self.field.add(old, c);
                    cur[pos] = new;
                    idx = idx
                        .wrapping_add(new as u64 * self.place[pos])
                        .wrapping_sub(old as u64 * self.place[pos]);
                }
                counters[s] += 1;
                if counters[s] == p {
                    // p applications of the same step cancel out: carry
                    counters[s] = 0;
                    s += 1;
                } else {
                    break;
                }
            }
            visit(idx);
        }
    }

    /// Split off the `top` most significant digits, giving `p^top` walks that
    /// together visit the same members in the same overall order.
    pub fn split(&self, top: usize) -> Vec<AffineWalk<'a>> {
        let top = top.min(self.steps.len());
        let keep = self.steps.len() - top;
        let p = self.field.p();
        let combos = (p as u64).pow(top as u32);
        (0..combos)
            .map(|combo| {
                let mut start = self.start.clone();
                let mut rest = combo;
                for (offset, v) in &self.steps[keep..] {
                    let d = (rest % p as u64) as u32;
                    rest /= p as u64;
                    for _ in 0..d {
                        for (j, &c) in v.iter().enumerate() {
                            start[offset + j] = self.field.add(start[offset + j], c);
                        }
                    }
                }
                AffineWalk {
                    field: self.field,
                    start,
                    steps: self.steps[..keep].to_vec(),
                    place: self.place.clone(),
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::kernel;

    #[test]
    fn walk_enumerates_all_vectors_in_index_order() {
        for q in [2u64, 3, 4, 9] {
            let f = Field::from_order(q).unwrap();
            let slots: Vec<(usize, Vec<u32>)> = (0..3).map(|i| (i, vec![1])).collect();
            let walk = AffineWalk::over_coefficients(&f, vec![0; 3], &slots);
            let mut seen = Vec::new();
            walk.for_each(|i| seen.push(i));
            assert_eq!(seen, (0..q.pow(3)).collect::<Vec<_>>());
            assert_eq!(walk.count(), q.pow(3));
        }
    }

    #[test]
    fn multiples_match_direct_products() {
        let f = Field::new(3, 1).unwrap();
        let prime = vec![2u32, 1]; // t + 2
        let m = 2; // cofactors t^2 + g1 t + g0
        let mut start = vec![0u32; 3];
        start[m..m + 1].copy_from_slice(&prime[..1]);
        let slots: Vec<(usize, Vec<u32>)> = (0..m).map(|i| (i, prime.clone())).collect();
        let walk = AffineWalk::over_coefficients(&f, start, &slots);
        let mut got = Vec::new();
        walk.for_each(|i| got.push(i));
        let want: Vec<u64> = (0..9)
            .map(|g| {
                let mut cof = kernel::unpack(3, g, m);
                cof.push(1);
                let prod = kernel::mul(&f, &prime, &cof);
                kernel::pack(3, &prod[..3])
            })
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn split_preserves_order() {
        let f = Field::new(2, 2).unwrap();
        let slots: Vec<(usize, Vec<u32>)> = (0..3).map(|i| (i, vec![1])).collect();
        let walk = AffineWalk::over_coefficients(&f, vec![0; 3], &slots);
        let mut whole = Vec::new();
        walk.for_each(|i| whole.push(i));
        let mut pieces = Vec::new();
        for w in walk.split(3) {
            w.for_each(|i| pieces.push(i));
        }
        assert_eq!(whole, pieces);
    }
}
