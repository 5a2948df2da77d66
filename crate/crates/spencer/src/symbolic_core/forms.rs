//! Exterior-form index bookkeeping: increasing index sets and wedge signs.

/// All `r`-subsets of `0..n`, as increasing vectors in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

pub fn subset_index(all: &[Vec<usize>], s: &[usize]) -> usize {
    all.binary_search_by(|x| x.as_slice().cmp(s)).expect("index set present")
}

/// `dx^i ^ dx^I = sign * dx^J`, or `None` when `i` already occurs in `I`.
pub fn wedge_left(i: usize, set: &[usize]) -> Option<(i64, Vec<usize>)> {
    if set.contains(&i) {
        return None;
    }
    let before = set.iter().filter(|&&j| j < i).count();
    let mut j = set.to_vec();
    j.insert(before, i);
    Some((if before % 2 == 0 { 1 } else { -1 }, j))
}
