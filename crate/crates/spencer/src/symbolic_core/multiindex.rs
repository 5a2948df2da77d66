//! Multi-indices with graded-lexicographic order.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector. Ordered by total degree, then lexicographically so that
/// a larger exponent in an earlier slot compares greater.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(pub Vec<u16>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn from_slice(v: &[u16]) -> Self {
        MultiIndex(v.to_vec())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, o: &MultiIndex) -> Option<MultiIndex> {
        let mut v = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            v.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(v))
    }

    pub fn inc(&self, i: usize) -> MultiIndex {
        let mut v = self.clone();
        v.0[i] += 1;
        v
    }

    pub fn dec(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.clone();
        v.0[i] -= 1;
        Some(v)
    }

    pub fn divides(&self, o: &MultiIndex) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// Product of binomials `binom(self_i, o_i)`.
    pub fn binom(&self, o: &MultiIndex) -> u64 {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(&a, &b)| super::rational::binomial(a as u64, b as u64))
            .product()
    }

    /// `mu!` as a product of factorials.
    pub fn factorial(&self) -> num_bigint::BigInt {
        self.0
            .iter()
            .map(|&e| super::rational::factorial(e as u64))
            .product()
    }

    /// All multi-indices `nu <= self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.0.len()))];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for base in &out {
                for k in 0..=e {
                    let mut v = base.clone();
                    v.0.push(k);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// All multi-indices in `n` variables of exactly degree `d`, ascending.
    pub fn of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<MultiIndex>) {
            let n = cur.len();
            if n == 0 {
                if left == 0 {
                    out.push(MultiIndex(Vec::new()));
                }
                return;
            }
            if i == n - 1 {
                cur[i] = left as u16;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e as u16;
                rec(i + 1, left - e, cur, out);
            }
        }
        rec(0, d, &mut cur, &mut out);
        out.sort();
        out
    }

    /// All multi-indices of degree at most `d`, ascending.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|k| Self::of_degree(n, k)).collect()
    }

    /// Sorted list of variable indices with repetition, e.g. `x1^2 x3 -> [0,0,2]`.
    pub fn to_list(&self) -> Vec<usize> {
        let mut v = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                v.push(i);
            }
        }
        v
    }

    pub fn from_list(n: usize, list: &[usize]) -> MultiIndex {
        let mut v = vec![0u16; n];
        for &i in list {
            v[i] += 1;
        }
        MultiIndex(v)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = MultiIndex::from_slice(&[2, 0]);
        let b = MultiIndex::from_slice(&[1, 1]);
        let c = MultiIndex::from_slice(&[0, 3]);
        assert!(b < a);
        assert!(a < c);
    }

    #[test]
    fn counts() {
        assert_eq!(MultiIndex::of_degree(3, 2).len(), 6);
        assert_eq!(MultiIndex::up_to_degree(3, 4).len(), 35);
        assert_eq!(MultiIndex::of_degree(0, 0).len(), 1);
    }

    #[test]
    fn sub_indices_and_binomials() {
        let m = MultiIndex::from_slice(&[2, 1]);
        assert_eq!(m.sub_indices().len(), 6);
        assert_eq!(m.binom(&MultiIndex::from_slice(&[1, 1])), 2);
    }
}
