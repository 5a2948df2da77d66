//! Line-oriented text format.
//!
//! ```text
//! op <n> <m_in> <m_out>
//! <eq> <k> <mu_1> .. <mu_n> <coeff>
//! ```
//! Indices are 0-based and `coeff` is a single token `(num)/(den)` over `x1..xn`.

use super::{DiffOpError, LinDiffOp};
use crate::symbolic_core::{MultiIndex, Poly, RatFunc};

pub fn to_text(op: &LinDiffOp) -> String {
    let names = Poly::default_names(op.n());
    let mut s = format!("op {} {} {}\n", op.n(), op.m_in(), op.m_out());
    for ((a, k, mu), c) in op.coeffs() {
        s.push_str(&format!("{a} {k}"));
        for e in &mu.0 {
            s.push_str(&format!(" {e}"));
        }
        s.push_str(&format!(" {}\n", c.fmt_with(&names)));
    }
    s
}

pub fn from_text(src: &str) -> Result<LinDiffOp, DiffOpError> {
    let err = |line: usize, msg: &str| DiffOpError::Parse { line, msg: msg.to_string() };
    let mut lines = src.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let h: Vec<&str> = head.split_whitespace().collect();
    if h.len() != 4 || h[0] != "op" {
        return Err(err(1, "header must be 'op n m_in m_out'"));
    }
    let num = |t: &str, line| t.parse::<usize>().map_err(|_| err(line, "expected an integer"));
    let (n, m_in, m_out) = (num(h[1], 1)?, num(h[2], 1)?, num(h[3], 1)?);
    let names = Poly::default_names(n);
    let mut op = LinDiffOp::zero(n, m_in, m_out);
    for (i, l) in lines {
        let line = i + 1;
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != n + 3 {
            return Err(err(line, "wrong number of fields"));
        }
        let a = num(t[0], line)?;
        let k = num(t[1], line)?;
        if a >= m_out || k >= m_in {
            return Err(err(line, "index out of range"));
        }
        let mut mu = Vec::with_capacity(n);
        for tok in &t[2..2 + n] {
            mu.push(tok.parse::<u16>().map_err(|_| err(line, "bad exponent"))?);
        }
        let c = RatFunc::parse_with(t[n + 2], &names).map_err(|m| err(line, &m))?;
        op.add_coeff(a, k, MultiIndex(mu), c);
    }
    Ok(op)
}
