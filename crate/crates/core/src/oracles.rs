//! Independent reference implementations backing the test suite.
//!
//! Everything in this module is deliberately naive: subword search instead
//! of the lifting recursion, hyperplane counting instead of reduced words,
//! inversion of R-polynomials instead of the mu-recursion, and character
//! convolution with greedy subtraction instead of signed dominant pushing.
//! None of it shares code with the production paths it checks. Slow by
//! design; intended for tests and diagnostics at small sizes.

use std::collections::{BTreeMap, HashMap, HashSet};

use num::ToPrimitive;

use crate::affweyl::{AffineWeylElement, AffineWeylGroup, CoxeterGroup};
use crate::error::Result;
use crate::exact::{rat, Rat};
use crate::klpoly::IntPoly;
use crate::rootsys::{CharCache, RootSystem, Weight};

/// Bruhat order by the subword property: `x <= w` iff some subsequence of a
/// reduced word of `w` multiplies to `x`.
pub fn bruhat_leq_subword<G: CoxeterGroup>(group: &G, x: &G::Elem, w: &G::Elem) -> bool {
    let word = group.word_of(w).to_vec();
    assert!(word.len() <= 20, "subword oracle is exponential");
    for mask in 0u32..(1u32 << word.len()) {
        let mut acc = group.identity();
        for (i, &g) in word.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = group.multiply(&acc, &group.generator(g));
            }
        }
        if &acc == x {
            return true;
        }
    }
    false
}

/// Number of reflection hyperplanes separating the fundamental alcove from
/// its image under `w`, counted root by root. This is the Coxeter length.
/// Only valid when every root is conjugate to theta (simply-laced types),
/// which covers the affine groups the test suite measures.
pub fn separating_hyperplanes(group: &AffineWeylGroup, w: &AffineWeylElement) -> usize {
    assert!(
        group.rs.root_half_norms.iter().all(|d| *d == rat(1)),
        "hyperplane census assumes a simply-laced system"
    );
    let p = rat(group.p());
    let base = group.interior_sample();
    let image = group.dot_act(w, &base).expect("sample acts");
    let v0 = base.weight.add(&group.rs.rho);
    let v1 = image.weight.add(&group.rs.rho);
    let mut count = 0usize;
    for root in &group.rs.positive_roots {
        let a = group.rs.coroot_pairing(&v0, root) / &p;
        let b = group.rs.coroot_pairing(&v1, root) / &p;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        // Both endpoints are off every hyperplane, so they are non-integers.
        let between = (hi.floor() - lo.floor()).to_integer();
        count += between.to_usize().expect("separation count fits usize");
    }
    count
}

// ---- Kazhdan-Lusztig via R-polynomial inversion ------------------------------

/// R-polynomial by the plain descent recursion, no memoization.
fn r_polynomial<G: CoxeterGroup>(group: &G, x: &G::Elem, w: &G::Elem) -> IntPoly {
    if group.length(w) == 0 {
        return if group.length(x) == 0 {
            IntPoly::one()
        } else {
            IntPoly::zero()
        };
    }
    let s = group
        .least_left_descent(w)
        .expect("non-identity element has a descent");
    let sgen = group.generator(s);
    let v = group.multiply(&sgen, w);
    let sx = group.multiply(&sgen, x);
    if group.is_left_descent(x, s) {
        r_polynomial(group, &sx, &v)
    } else {
        // (q - 1) R_{x,v} + q R_{sx,v}
        let qm1 = IntPoly::from_coeffs(vec![-1, 1]);
        qm1.mul(&r_polynomial(group, x, &v))
            .add(&r_polynomial(group, &sx, &v).shift(1))
    }
}

/// All Kazhdan-Lusztig polynomials `P_{z,w}` for `z <= w`, obtained by
/// inverting the R-polynomial identity
/// `q^{l(w)-l(z)} P_{z,w}(1/q) = sum_{z<=y<=w} R_{z,y} P_{y,w}`
/// downward from `P_{w,w} = 1`. Entirely independent of the mu-recursion.
pub fn kl_reference_row<G: CoxeterGroup>(
    group: &G,
    w: &G::Elem,
) -> HashMap<G::Elem, IntPoly> {
    // The lower interval of w, via subsequence products of its reduced word.
    let word = group.word_of(w).to_vec();
    assert!(word.len() <= 20, "reference row is exponential in length");
    let mut interval: HashSet<G::Elem> = HashSet::new();
    for mask in 0u32..(1u32 << word.len()) {
        let mut acc = group.identity();
        for (i, &g) in word.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = group.multiply(&acc, &group.generator(g));
            }
        }
        interval.insert(acc);
    }
    let mut by_length: Vec<G::Elem> = interval.into_iter().collect();
    by_length.sort_by_key(|z| std::cmp::Reverse(group.length(z)));

    let mut table: HashMap<G::Elem, IntPoly> = HashMap::new();
    table.insert(w.clone(), IntPoly::one());
    for z in by_length {
        if z == *w {
            continue;
        }
        let n = group.length(w) - group.length(&z);
        let mut s = IntPoly::zero();
        for (y, p_y) in &table {
            if bruhat_leq_subword(group, &z, y) && z != *y {
                s = s.add(&r_polynomial(group, &z, y).mul(p_y));
            }
        }
        // q^n P-bar - P = S with deg P <= (n-1)/2 pins the low coefficients.
        let bound = (n - 1) / 2;
        let coeffs: Vec<i64> = (0..=bound).map(|j| -s.coeff(j)).collect();
        let p = IntPoly::from_coeffs(coeffs);
        // The high half of S must mirror the solved coefficients.
        for j in (bound + 1)..=n {
            assert_eq!(
                s.coeff(j),
                p.coeff(n - j),
                "inconsistent R-inversion at degree {j}"
            );
        }
        table.insert(z, p);
    }
    table
}

/// Single reference Kazhdan-Lusztig polynomial. Prefer `kl_reference_row`
/// when sweeping many `x` against one `w`.
pub fn kl_reference<G: CoxeterGroup>(group: &G, x: &G::Elem, w: &G::Elem) -> IntPoly {
    kl_reference_row(group, w)
        .remove(x)
        .unwrap_or_else(IntPoly::zero)
}

// ---- tensor decomposition by character arithmetic ----------------------------

/// Decomposes the product of two formal characters by convolution followed
/// by greedy subtraction of highest-weight characters. Panics if the
/// remainder ever fails to be a genuine character (negative multiplicity or
/// non-dominant maximal weight), which is exactly what makes it an oracle.
pub fn tensor_by_characters(
    rs: &RootSystem,
    lambda: &Weight,
    mu: &Weight,
    cache: &mut CharCache,
) -> Result<BTreeMap<Weight, u64>> {
    let left = cache.get(rs, lambda)?.clone();
    let right = cache.get(rs, mu)?.clone();

    // Key the convolution by (height, weight) so the maximum is always a
    // root-order-maximal weight.
    let height = |w: &Weight| -> Rat {
        let mut acc = Rat::zero();
        for c in rs.alpha_coords(w) {
            acc += c;
        }
        acc
    };
    let mut conv: BTreeMap<(Rat, Weight), i64> = BTreeMap::new();
    for (w1, m1) in &left.mults {
        for (w2, m2) in &right.mults {
            let sum = w1.add(w2);
            *conv.entry((height(&sum), sum)).or_insert(0) += (*m1 as i64) * (*m2 as i64);
        }
    }

    let mut out: BTreeMap<Weight, u64> = BTreeMap::new();
    while let Some(((_, top), &mult)) = conv.iter().next_back() {
        let top = top.clone();
        assert!(mult > 0, "greedy subtraction went negative at {top}");
        assert!(
            top.is_dominant(),
            "maximal remaining weight {top} is not dominant"
        );
        let ch = cache.get(rs, &top)?.clone();
        for (w, m) in &ch.mults {
            let key = (height(w), w.clone());
            let entry = conv.entry(key.clone()).or_insert(0);
            *entry -= mult * (*m as i64);
            assert!(*entry >= 0, "negative multiplicity at {w}");
            if *entry == 0 {
                conv.remove(&key);
            }
        }
        out.insert(top, mult as u64);
    }
    Ok(out)
}
