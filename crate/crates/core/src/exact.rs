//! Exact rational scalars and the small dense matrices used by the Weyl
//! group actions. Everything here is arbitrary-precision; no floats.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact rational literal: `"3"`, `"-7/2"`. Float syntax such as
/// `"3.5"` or exponents is rejected so no precision is silently lost.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() || s.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!("not an exact rational: {s:?}")));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {num:?} in rational {s:?}")))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator {d:?} in rational {s:?}")))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational as `p` or `p/q` (lowest terms, `q > 0`).
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Small dense integer matrix; rows act on coordinate column vectors.
/// Weyl group actions in the fundamental-weight basis are integral, so
/// cached action matrices stay in `i64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IMatrix {
    pub n: usize,
    /// Row-major entries, `n * n` of them.
    pub entries: Vec<i64>,
}

impl IMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IMatrix { n, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &IMatrix) -> IMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IMatrix {
            n,
            entries: vec![0; n * n],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.n {
                    let c = self.at(i, j);
                    if c != 0 {
                        acc += rat(c) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn apply_int(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IMatrix::identity(self.n)
    }
}

/// Inverts a square rational matrix by Gauss-Jordan elimination.
/// Panics on singular input; callers only invert Cartan matrices.
pub fn invert_rat_matrix(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular matrix");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    inv
}

/// Exact sign of a rational: -1, 0, or 1.
pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-7/2", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(fmt_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(fmt_rat(&parse_rat("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_floats() {
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("1e3").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn matrix_inverse() {
        // A2 Cartan matrix.
        let m = vec![
            vec![rat(2), rat(-1)],
            vec![rat(-1), rat(2)],
        ];
        let inv = invert_rat_matrix(&m);
        assert_eq!(inv[0][0], rat_frac(2, 3));
        assert_eq!(inv[0][1], rat_frac(1, 3));
        assert_eq!(inv[1][1], rat_frac(2, 3));
    }
}
