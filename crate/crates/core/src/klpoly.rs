//! Kazhdan-Lusztig polynomials for the finite and affine Weyl groups,
//! by the descent recursion with mu-coefficient correction terms.

use std::collections::HashMap;
use std::fmt;

use crate::affweyl::{BruhatSession, CoxeterGroup};

/// Integer polynomial in `q`, coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn q_pow(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        IntPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: i64) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        IntPoly { coeffs }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "q")?,
                1 => write!(f, "{a}q")?,
                _ if a == 1 => write!(f, "q^{i}")?,
                _ => write!(f, "{a}q^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Which left descent the recursion follows. The result is independent of
/// the choice; the test suite cross-checks both strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DescentChoice {
    #[default]
    Least,
    Greatest,
}

/// Session configuration. `memo_cap` bounds the number of memoized
/// polynomials; when the table would exceed the cap it is flushed whole
/// (epoch flush) and computation proceeds with an empty table.
#[derive(Debug, Clone)]
pub struct KlConfig {
    pub memo_cap: usize,
    pub descent: DescentChoice,
}

impl Default for KlConfig {
    fn default() -> Self {
        KlConfig {
            memo_cap: 1 << 20,
            descent: DescentChoice::Least,
        }
    }
}

/// Memoized Kazhdan-Lusztig computation for one Coxeter group. A session
/// owns its memo tables; use one session per thread.
pub struct KlSession<'g, G: CoxeterGroup> {
    pub group: &'g G,
    pub config: KlConfig,
    bruhat: BruhatSession<'g, G>,
    memo: HashMap<(Vec<u8>, Vec<u8>), IntPoly>,
    intervals: HashMap<Vec<u8>, Vec<G::Elem>>,
}

impl<'g, G: CoxeterGroup> KlSession<'g, G> {
    pub fn new(group: &'g G) -> Self {
        Self::with_config(group, KlConfig::default())
    }

    pub fn with_config(group: &'g G, config: KlConfig) -> Self {
        KlSession {
            group,
            config,
            bruhat: BruhatSession::new(group),
            memo: HashMap::new(),
            intervals: HashMap::new(),
        }
    }

    pub fn bruhat_leq(&mut self, x: &G::Elem, w: &G::Elem) -> bool {
        self.bruhat.leq(x, w)
    }

    /// All elements below `v` in Bruhat order: subsequence products of a
    /// reduced word of `v`.
    fn lower_interval(&mut self, v: &G::Elem) -> Vec<G::Elem> {
        let key = self.group.word_of(v).to_vec();
        if let Some(cached) = self.intervals.get(&key) {
            return cached.clone();
        }
        let word = key.clone();
        let mut set = std::collections::HashSet::new();
        for mask in 0u32..(1u32 << word.len()) {
            let mut acc = self.group.identity();
            for (i, &g) in word.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    acc = self.group.multiply(&acc, &self.group.generator(g));
                }
            }
            set.insert(acc);
        }
        let mut out: Vec<G::Elem> = set.into_iter().collect();
        out.sort();
        self.intervals.insert(key, out.clone());
        out
    }

    fn descent_of(&self, w: &G::Elem) -> u8 {
        let gens = 0..self.group.num_generators() as u8;
        match self.config.descent {
            DescentChoice::Least => gens
                .clone()
                .find(|&g| self.group.is_left_descent(w, g))
                .expect("non-identity element has a left descent"),
            DescentChoice::Greatest => gens
                .rev()
                .find(|&g| self.group.is_left_descent(w, g))
                .expect("non-identity element has a left descent"),
        }
    }

    /// The Kazhdan-Lusztig polynomial `P_{x,w}`: zero unless `x <= w`,
    /// constant term 1 when `x <= w`, and degree at most
    /// `(length(w) - length(x) - 1)/2` for `x < w`.
    pub fn kl_polynomial(&mut self, x: &G::Elem, w: &G::Elem) -> IntPoly {
        if !self.bruhat.leq(x, w) {
            return IntPoly::zero();
        }
        if x == w {
            return IntPoly::one();
        }
        let key = (
            self.group.word_of(x).to_vec(),
            self.group.word_of(w).to_vec(),
        );
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }

        // Descend on a left descent s of w; with v = s w and
        // c = [s x < x]:
        //   P_{x,w} = q^{1-c} P_{sx,v} + q^c P_{x,v}
        //             - sum_{x <= z < v, s z < z} mu(z,v) q^{(l(w)-l(z))/2} P_{x,z}
        let s = self.descent_of(w);
        let sgen = self.group.generator(s);
        let v = self.group.multiply(&sgen, w);
        let sx = self.group.multiply(&sgen, x);
        let c = self.group.is_left_descent(x, s);
        let p_sx_v = self.kl_polynomial(&sx, &v);
        let p_x_v = self.kl_polynomial(x, &v);
        let mut result = if c {
            p_sx_v.add(&p_x_v.shift(1))
        } else {
            p_sx_v.shift(1).add(&p_x_v)
        };
        let lw = self.group.length(w);
        for z in self.lower_interval(&v) {
            if !self.group.is_left_descent(&z, s) {
                continue;
            }
            let lz = self.group.length(&z);
            if (lw - lz) % 2 != 0 {
                continue;
            }
            if !self.bruhat.leq(x, &z) {
                continue;
            }
            let mu = self.mu_of(&z, &v);
            if mu == 0 {
                continue;
            }
            let p_x_z = self.kl_polynomial(x, &z);
            result = result.sub(&p_x_z.scale(mu).shift((lw - lz) / 2));
        }

        if self.memo.len() >= self.config.memo_cap {
            self.memo.clear();
        }
        self.memo.insert(key, result.clone());
        result
    }

    fn mu_of(&mut self, z: &G::Elem, v: &G::Elem) -> i64 {
        let lv = self.group.length(v);
        let lz = self.group.length(z);
        if lv <= lz || (lv - lz) % 2 == 0 {
            return 0;
        }
        let p = self.kl_polynomial(z, v);
        p.coeff((lv - lz - 1) / 2)
    }

    /// The mu-coefficient of the pair: the coefficient of
    /// `q^{(l(w)-l(x)-1)/2}` in `P_{x,w}` when that exponent is an integer,
    /// zero otherwise (including for incomparable pairs).
    pub fn mu_coefficient(&mut self, x: &G::Elem, w: &G::Elem) -> i64 {
        if x == w || !self.bruhat.leq(x, w) {
            return 0;
        }
        self.mu_of(x, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affweyl::{ball, make_level, AffineWeylGroup, LevelInput};
    use crate::exact::{rat, rat_frac};
    use crate::rootsys::RootSystem;

    #[test]
    fn poly_arithmetic_and_display() {
        let p = IntPoly::from_coeffs(vec![1, 0, -2]);
        let q = IntPoly::from_coeffs(vec![0, 1]);
        assert_eq!(p.mul(&q), IntPoly::from_coeffs(vec![0, 1, 0, -2]));
        assert_eq!(p.add(&q).coeffs(), &[1, 1, -2]);
        assert_eq!(format!("{p}"), "1 - 2q^2");
        assert_eq!(format!("{}", IntPoly::zero()), "0");
        assert_eq!(IntPoly::from_coeffs(vec![0, 0]), IntPoly::zero());
    }

    #[test]
    fn dihedral_values_are_one() {
        let rs = RootSystem::from_name("A1").unwrap();
        let (level, _) = make_level(&rs, LevelInput::Exact(rat_frac(1, 2))).unwrap();
        let group = AffineWeylGroup::new(&rs, &level).unwrap();
        let mut session = KlSession::new(&group);
        let elems = ball(&group, 8);
        for x in &elems {
            for w in &elems {
                let p = session.kl_polynomial(x, w);
                if session.bruhat_leq(x, w) {
                    assert_eq!(p, IntPoly::one(), "P({x}, {w})");
                } else {
                    assert!(p.is_zero());
                }
            }
        }
        // mu examples: covering pairs give 1, distance-3 pairs give 0.
        let e = group.identity();
        let s0s1s0 = group.from_word(&[0, 1, 0]).unwrap();
        assert_eq!(session.mu_coefficient(&e, &group.generator(0)), 1);
        assert_eq!(session.mu_coefficient(&e, &s0s1s0), 0);
        assert_eq!(session.mu_coefficient(&s0s1s0, &e), 0);
    }

    #[test]
    fn finite_a2_values_are_one() {
        let rs = RootSystem::from_name("A2").unwrap();
        let elems = ball(&rs, 3);
        assert_eq!(elems.len(), 6);
        let mut session = KlSession::new(&rs);
        let mut pairs = 0;
        for x in &elems {
            for w in &elems {
                let p = session.kl_polynomial(x, w);
                if session.bruhat_leq(x, w) {
                    assert_eq!(p, IntPoly::one());
                } else {
                    assert!(p.is_zero());
                }
                pairs += 1;
            }
        }
        assert_eq!(pairs, 36);
    }

    #[test]
    fn degree_bound_and_constant_term() {
        let rs = RootSystem::from_name("A2").unwrap();
        let (level, _) = make_level(&rs, LevelInput::Exact(rat(1))).unwrap();
        let group = AffineWeylGroup::new(&rs, &level).unwrap();
        let mut session = KlSession::new(&group);
        let elems = ball(&group, 5);
        for x in &elems {
            for w in &elems {
                let p = session.kl_polynomial(x, w);
                if !session.bruhat_leq(x, w) {
                    assert!(p.is_zero());
                    continue;
                }
                assert_eq!(p.coeff(0), 1, "constant term of P({x}, {w})");
                if x != w {
                    let bound = (group.length(w) - group.length(x) - 1) / 2;
                    assert!(p.degree().unwrap_or(0) <= bound, "P({x}, {w}) = {p}");
                }
            }
        }
    }

    #[test]
    fn descent_strategies_agree() {
        let rs = RootSystem::from_name("A2").unwrap();
        let (level, _) = make_level(&rs, LevelInput::Exact(rat(1))).unwrap();
        let group = AffineWeylGroup::new(&rs, &level).unwrap();
        let mut least = KlSession::new(&group);
        let mut greatest = KlSession::with_config(
            &group,
            KlConfig {
                descent: DescentChoice::Greatest,
                ..KlConfig::default()
            },
        );
        for x in ball(&group, 4) {
            for w in ball(&group, 5) {
                assert_eq!(
                    least.kl_polynomial(&x, &w),
                    greatest.kl_polynomial(&x, &w),
                    "({x}, {w})"
                );
            }
        }
    }

    #[test]
    fn memo_cap_flush_still_correct() {
        let rs = RootSystem::from_name("A1").unwrap();
        let (level, _) = make_level(&rs, LevelInput::Exact(rat_frac(1, 2))).unwrap();
        let group = AffineWeylGroup::new(&rs, &level).unwrap();
        let mut tiny = KlSession::with_config(
            &group,
            KlConfig {
                memo_cap: 4,
                ..KlConfig::default()
            },
        );
        let w = group.from_word(&[0, 1, 0, 1, 0]).unwrap();
        assert_eq!(tiny.kl_polynomial(&group.identity(), &w), IntPoly::one());
    }
}
