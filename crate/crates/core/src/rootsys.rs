//! Finite root systems and their Weyl groups in exact arithmetic.
//!
//! Weights are stored in fundamental-weight coordinates, so the pairing
//! `<lambda, alpha_i~>` with a simple coroot is literally coordinate `i`.
//! The invariant bilinear form is normalized so the highest root theta has
//! `(theta, theta) = 2`; with that normalization `theta~ = theta` and the
//! pairing `(v, theta)` is an integer combination of coordinates given by
//! the dual marks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, invert_rat_matrix, rat, rat_frac, sign, IMatrix, Rat};

/// Simple series letter of a finite root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Series> {
        match c.to_ascii_uppercase() {
            'A' => Some(Series::A),
            'B' => Some(Series::B),
            'C' => Some(Series::C),
            'D' => Some(Series::D),
            'E' => Some(Series::E),
            'F' => Some(Series::F),
            'G' => Some(Series::G),
            _ => None,
        }
    }
}

/// Weight in fundamental-weight coordinates, exact rational entries.
/// Equality is coordinatewise exact equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<Rat>,
}

impl Weight {
    pub fn new(coords: Vec<Rat>) -> Self {
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight {
            coords: coords.iter().map(|&c| rat(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }

    /// Dominance in the unshifted sense: `<lambda, alpha_i~> >= 0` for all
    /// simple roots, i.e. every coordinate is nonnegative.
    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Weight {
        Weight {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Weight {
        Weight {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", fmt_rat(c))?;
        }
        write!(f, "]")
    }
}

/// A positive root, carried in both coordinate systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Fundamental-weight coordinates (always integral).
    pub fw: Vec<i64>,
    /// Simple-root coordinates (nonnegative integers for a positive root).
    pub alpha: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.alpha.iter().sum()
    }

    pub fn to_weight(&self) -> Weight {
        Weight::from_ints(&self.fw)
    }
}

/// Element of the finite Weyl group: a canonical (lexicographically least)
/// reduced word over the simple reflections plus the cached action matrix
/// in fundamental-weight coordinates.
///
/// Generator index `i` is the reflection in the simple root `alpha_{i+1}`
/// (0-based storage, 1-based display as `s1 s2 ...`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWeylElement {
    pub word: Vec<u8>,
    pub mat: IMatrix,
}

impl FiniteWeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Determinant of the action, `(-1)^length`.
    pub fn det(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for FiniteWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|g| format!("s{}", g + 1)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Formal character of a finite-dimensional module: a finite multiset of
/// weights with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGCharacter {
    pub mults: BTreeMap<Weight, u64>,
}

impl FormalGCharacter {
    pub fn total_mass(&self) -> u128 {
        self.mults.values().map(|&m| m as u128).sum()
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.mults.get(w).copied().unwrap_or(0)
    }
}

/// Cartan data, positive roots, and the invariant form of a finite root
/// system, all exact.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub series: Series,
    pub rank: usize,
    /// `cartan[i][j] = 2(alpha_i, alpha_j)/(alpha_j, alpha_j)`; row `i` is
    /// `alpha_i` in fundamental-weight coordinates.
    pub cartan: IMatrix,
    /// Half squared lengths `d_i = (alpha_i, alpha_i)/2`; `1` for long roots.
    pub root_half_norms: Vec<Rat>,
    /// Gram matrix of the invariant form on the fundamental-weight basis.
    pub form: Vec<Vec<Rat>>,
    /// Inverse transpose of the Cartan matrix: converts fundamental-weight
    /// coordinates to simple-root coordinates.
    alpha_coords_mat: Vec<Vec<Rat>>,
    pub positive_roots: Vec<Root>,
    pub rho: Weight,
    /// Highest root in fundamental-weight coordinates.
    pub theta: Weight,
    /// Marks: simple-root coordinates of theta.
    pub marks: Vec<i64>,
    /// Dual marks `a_i~ = m_i d_i`; `(v, theta) = sum a_i~ v_i`.
    pub dual_marks: Vec<i64>,
    pub dual_coxeter: i64,
    pub dim_g: usize,
}

/// Cartan matrix rows and half norms for each admissible series, Bourbaki
/// numbering. Long roots have half norm 1.
fn series_data(series: Series, rank: usize) -> Result<(Vec<Vec<i64>>, Vec<Rat>)> {
    let err = || Error::UnsupportedSeries {
        series: series.letter(),
        rank,
    };
    let n = rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |c: &mut Vec<Vec<i64>>| {
        for i in 0..n - 1 {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    };
    let d = match series {
        Series::A => {
            if n < 1 {
                return Err(err());
            }
            if n > 1 {
                chain(&mut c);
            }
            vec![Rat::one(); n]
        }
        Series::B => {
            // alpha_n short.
            if n < 2 {
                return Err(err());
            }
            chain(&mut c);
            c[n - 2][n - 1] = -2;
            c[n - 1][n - 2] = -1;
            let mut d = vec![Rat::one(); n];
            d[n - 1] = rat_frac(1, 2);
            d
        }
        Series::C => {
            // alpha_n long.
            if n < 2 {
                return Err(err());
            }
            chain(&mut c);
            c[n - 2][n - 1] = -1;
            c[n - 1][n - 2] = -2;
            let mut d = vec![rat_frac(1, 2); n];
            d[n - 1] = Rat::one();
            d
        }
        Series::D => {
            if n < 4 {
                return Err(err());
            }
            chain(&mut c);
            // Detach alpha_n from alpha_{n-1}, fork it off alpha_{n-2}.
            c[n - 2][n - 1] = 0;
            c[n - 1][n - 2] = 0;
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
            vec![Rat::one(); n]
        }
        Series::E => {
            if !(6..=8).contains(&n) {
                return Err(err());
            }
            // Bourbaki: chain 1-3-4-5-...-n with node 2 attached to node 4.
            let mut edges = vec![(1usize, 3usize), (2, 4)];
            for i in 3..n {
                edges.push((i, i + 1));
            }
            for (a, b) in edges {
                c[a - 1][b - 1] = -1;
                c[b - 1][a - 1] = -1;
            }
            vec![Rat::one(); n]
        }
        Series::F => {
            if n != 4 {
                return Err(err());
            }
            chain(&mut c);
            // alpha_1, alpha_2 long; alpha_3, alpha_4 short.
            c[1][2] = -2;
            c[2][1] = -1;
            vec![Rat::one(), Rat::one(), rat_frac(1, 2), rat_frac(1, 2)]
        }
        Series::G => {
            if n != 2 {
                return Err(err());
            }
            // alpha_1 short, alpha_2 long.
            c[0][1] = -1;
            c[1][0] = -3;
            vec![rat_frac(1, 3), Rat::one()]
        }
    };
    Ok((c, d))
}

fn dim_g_table(series: Series, n: usize) -> usize {
    match series {
        Series::A => n * (n + 2),
        Series::B | Series::C => n * (2 * n + 1),
        Series::D => n * (2 * n - 1),
        Series::E => match n {
            6 => 78,
            7 => 133,
            _ => 248,
        },
        Series::F => 52,
        Series::G => 14,
    }
}

impl RootSystem {
    /// Builds the root system with Cartan data, positive roots enumerated by
    /// reflection closure, and the invariant form normalized to
    /// `(theta, theta) = 2`.
    pub fn build(series: Series, rank: usize) -> Result<RootSystem> {
        let (cartan_rows, half_norms) = series_data(series, rank)?;
        let n = rank;
        let mut cartan = IMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                cartan.set(i, j, cartan_rows[i][j]);
            }
        }

        // Reflection closure over the simple reflections, starting from the
        // simple roots. s_j(beta) = beta - beta_fw[j] * alpha_j.
        let mut seen: BTreeSet<(Vec<i64>, Vec<i64>)> = BTreeSet::new();
        let mut queue: VecDeque<(Vec<i64>, Vec<i64>)> = VecDeque::new();
        for i in 0..n {
            let fw: Vec<i64> = (0..n).map(|j| cartan.at(i, j)).collect();
            let mut alpha = vec![0i64; n];
            alpha[i] = 1;
            if seen.insert((fw.clone(), alpha.clone())) {
                queue.push_back((fw, alpha));
            }
        }
        while let Some((fw, alpha)) = queue.pop_front() {
            for j in 0..n {
                let c = fw[j];
                if c == 0 {
                    continue;
                }
                let mut nfw = fw.clone();
                for t in 0..n {
                    nfw[t] -= c * cartan.at(j, t);
                }
                let mut nalpha = alpha.clone();
                nalpha[j] -= c;
                if seen.insert((nfw.clone(), nalpha.clone())) {
                    queue.push_back((nfw, nalpha));
                }
            }
        }
        let mut positive_roots: Vec<Root> = seen
            .into_iter()
            .filter(|(_, alpha)| alpha.iter().all(|&a| a >= 0))
            .map(|(fw, alpha)| Root { fw, alpha })
            .collect();
        positive_roots.sort_by_key(|r| (r.height(), r.alpha.clone()));

        let dim_g = dim_g_table(series, n);
        if positive_roots.len() != (dim_g - n) / 2 {
            return Err(Error::Precondition(format!(
                "root enumeration produced {} positive roots, expected {}",
                positive_roots.len(),
                (dim_g - n) / 2
            )));
        }

        let theta_root = positive_roots
            .last()
            .expect("nonempty root system")
            .clone();
        let marks = theta_root.alpha.clone();
        let dual_marks: Vec<i64> = marks
            .iter()
            .zip(&half_norms)
            .map(|(&m, d)| {
                let dm = rat(m) * d;
                assert!(dm.denom().is_one(), "dual marks must be integral");
                i64::try_from(dm.numer()).expect("dual mark fits i64")
            })
            .collect();
        let dual_coxeter = 1 + dual_marks.iter().sum::<i64>();

        // Form on the fundamental-weight basis: F = C^{-1} D.
        let c_rat: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| rat(cartan.at(i, j))).collect())
            .collect();
        let c_inv = invert_rat_matrix(&c_rat);
        let form: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| &c_inv[i][j] * &half_norms[j]).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(form[i][j], form[j][i], "invariant form must be symmetric");
            }
        }
        let ct_rat: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| rat(cartan.at(j, i))).collect())
            .collect();
        let alpha_coords_mat = invert_rat_matrix(&ct_rat);

        let rs = RootSystem {
            series,
            rank: n,
            cartan,
            root_half_norms: half_norms,
            form,
            alpha_coords_mat,
            positive_roots,
            rho: Weight::from_ints(&vec![1; n]),
            theta: theta_root.to_weight(),
            marks,
            dual_marks,
            dual_coxeter,
            dim_g,
        };
        let tt = rs.form_pairing(&rs.theta, &rs.theta);
        assert_eq!(tt, rat(2), "normalization (theta, theta) = 2");
        Ok(rs)
    }

    /// Parses names like `A2`, `g2`, `B2`.
    pub fn from_name(name: &str) -> Result<RootSystem> {
        let name = name.trim();
        let mut chars = name.chars();
        let letter = chars.next().ok_or_else(|| Error::Parse("empty type".into()))?;
        let series = Series::from_letter(letter).ok_or(Error::UnsupportedSeries {
            series: letter,
            rank: 0,
        })?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in type {name:?}")))?;
        RootSystem::build(series, rank)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.series.letter(), self.rank)
    }

    pub fn check_dim(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: w.rank(),
            });
        }
        Ok(())
    }

    /// Invariant form on weights.
    pub fn form_pairing(&self, a: &Weight, b: &Weight) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            if a.coords[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if b.coords[j].is_zero() {
                    continue;
                }
                acc += &a.coords[i] * &self.form[i][j] * &b.coords[j];
            }
        }
        acc
    }

    pub fn norm_sq(&self, a: &Weight) -> Rat {
        self.form_pairing(a, a)
    }

    /// `(v, theta)` via the dual marks; theta is its own coroot here.
    pub fn theta_pairing(&self, v: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (a, c) in self.dual_marks.iter().zip(v) {
            if *a != 0 && !c.is_zero() {
                acc += rat(*a) * c;
            }
        }
        acc
    }

    /// Pairing `<lambda, alpha~>` of a weight with the coroot of a positive root.
    pub fn coroot_pairing(&self, lambda: &Weight, root: &Root) -> Rat {
        self.form_pairing(lambda, &root.to_weight())
            / &self.root_half_norms_of(root)
    }

    fn root_half_norms_of(&self, root: &Root) -> Rat {
        // (alpha, alpha)/2 from the form; roots are integral so this is exact.
        self.norm_sq(&root.to_weight()) / rat(2)
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn alpha_coords(&self, w: &Weight) -> Vec<Rat> {
        (0..self.rank)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.rank {
                    if !w.coords[j].is_zero() {
                        acc += &self.alpha_coords_mat[i][j] * &w.coords[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// True when `lower <= upper` in the root order: the difference is a
    /// nonnegative integer combination of simple roots.
    pub fn root_order_leq(&self, lower: &Weight, upper: &Weight) -> bool {
        self.alpha_coords(&upper.sub(lower))
            .iter()
            .all(|c| c.denom().is_one() && !c.is_negative())
    }

    // ---- finite Weyl group -------------------------------------------------

    pub fn simple_reflection_matrix(&self, i: usize) -> IMatrix {
        let n = self.rank;
        let mut m = IMatrix::identity(n);
        for j in 0..n {
            m.set(j, i, m.at(j, i) - self.cartan.at(i, j));
        }
        m
    }

    pub fn finite_identity(&self) -> FiniteWeylElement {
        FiniteWeylElement {
            word: Vec::new(),
            mat: IMatrix::identity(self.rank),
        }
    }

    pub fn finite_generator(&self, i: usize) -> FiniteWeylElement {
        assert!(i < self.rank);
        FiniteWeylElement {
            word: vec![i as u8],
            mat: self.simple_reflection_matrix(i),
        }
    }

    /// Canonical (lex-least) reduced word of the element with the given
    /// action matrix, by walking `mat * rho` back into the dominant chamber
    /// along least available descents.
    fn canonical_word_of_matrix(&self, mat: &IMatrix) -> Vec<u8> {
        let rho: Vec<i64> = vec![1; self.rank];
        let mut v = mat.apply_int(&rho);
        let mut word = Vec::new();
        while v != rho {
            let i = (0..self.rank)
                .find(|&i| v[i] < 0)
                .expect("regular vector off the base chamber has a descent");
            // Reflect: v := s_i(v).
            let c = v[i];
            for (t, entry) in v.iter_mut().enumerate() {
                *entry -= c * self.cartan.at(i, t);
            }
            word.push(i as u8);
        }
        word
    }

    pub fn finite_from_matrix(&self, mat: IMatrix) -> FiniteWeylElement {
        let word = self.canonical_word_of_matrix(&mat);
        FiniteWeylElement { word, mat }
    }

    pub fn finite_from_word(&self, word: &[u8]) -> Result<FiniteWeylElement> {
        let mut mat = IMatrix::identity(self.rank);
        for &g in word {
            if g as usize >= self.rank {
                return Err(Error::Parse(format!(
                    "generator s{} out of range for {}",
                    g as usize + 1,
                    self.name()
                )));
            }
            mat = mat.mul(&self.simple_reflection_matrix(g as usize));
        }
        Ok(self.finite_from_matrix(mat))
    }

    pub fn finite_mul(&self, a: &FiniteWeylElement, b: &FiniteWeylElement) -> FiniteWeylElement {
        self.finite_from_matrix(a.mat.mul(&b.mat))
    }

    pub fn finite_inv(&self, a: &FiniteWeylElement) -> FiniteWeylElement {
        let mut mat = IMatrix::identity(self.rank);
        for &g in a.word.iter().rev() {
            mat = mat.mul(&self.simple_reflection_matrix(g as usize));
        }
        self.finite_from_matrix(mat)
    }

    /// Unshifted action of a Weyl group element on a weight.
    pub fn act(&self, w: &FiniteWeylElement, lambda: &Weight) -> Result<Weight> {
        self.check_dim(lambda)?;
        Ok(Weight::new(w.mat.apply_rat(&lambda.coords)))
    }

    /// Shifted (dot) action: `w . lambda = w(lambda + rho) - rho`.
    pub fn dot_act(&self, w: &FiniteWeylElement, lambda: &Weight) -> Result<Weight> {
        self.check_dim(lambda)?;
        let shifted = lambda.add(&self.rho);
        Ok(Weight::new(w.mat.apply_rat(&shifted.coords)).sub(&self.rho))
    }

    /// Walks a weight into the closed dominant chamber (shifted or not) and
    /// returns the representative together with an element mapping the input
    /// onto it. For regular input the pair is unique.
    pub fn dominant_representative(
        &self,
        lambda: &Weight,
        shifted: bool,
    ) -> Result<(Weight, FiniteWeylElement)> {
        self.check_dim(lambda)?;
        let mut v: Vec<Rat> = if shifted {
            lambda.add(&self.rho).coords
        } else {
            lambda.coords.clone()
        };
        let mut mat = IMatrix::identity(self.rank);
        loop {
            let Some(i) = (0..self.rank).find(|&i| v[i].is_negative()) else {
                break;
            };
            let c = v[i].clone();
            for (t, entry) in v.iter_mut().enumerate() {
                let delta = &c * rat(self.cartan.at(i, t));
                *entry -= delta;
            }
            mat = self.simple_reflection_matrix(i).mul(&mat);
        }
        let rep = if shifted {
            Weight::new(v).sub(&self.rho)
        } else {
            Weight::new(v)
        };
        Ok((rep, self.finite_from_matrix(mat)))
    }

    /// Longest element of the finite Weyl group.
    pub fn longest_element(&self) -> FiniteWeylElement {
        self.dominant_representative(&self.rho.neg(), false)
            .expect("rank matches")
            .1
    }

    /// Duality involution on dominant weights: `-w_0(lambda)`.
    pub fn bar_involution(&self, lambda: &Weight) -> Result<Weight> {
        self.check_dim(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NonDominant(lambda.to_string()));
        }
        Ok(self.dominant_representative(&lambda.neg(), false)?.0)
    }

    // ---- weight multiplicities ---------------------------------------------

    fn require_dominant_integral(&self, lambda: &Weight) -> Result<()> {
        self.check_dim(lambda)?;
        if !lambda.is_integral() {
            return Err(Error::NonIntegral(lambda.to_string()));
        }
        if !lambda.is_dominant() {
            return Err(Error::NonDominant(lambda.to_string()));
        }
        Ok(())
    }

    /// True when `nu` is a weight of the simple module with highest weight
    /// `lambda`: its dominant representative lies under `lambda` in the root
    /// order.
    pub fn is_module_weight(&self, lambda: &Weight, nu: &Weight) -> bool {
        if !nu.is_integral() {
            return false;
        }
        let (dom, _) = self
            .dominant_representative(nu, false)
            .expect("rank matches");
        self.root_order_leq(&dom, lambda)
    }

    /// All weights of the module with highest weight `lambda`, found by
    /// walking simple-root strings down from `lambda`.
    fn module_weights(&self, lambda: &Weight) -> BTreeSet<Weight> {
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        let mut queue: VecDeque<Weight> = VecDeque::new();
        seen.insert(lambda.clone());
        queue.push_back(lambda.clone());
        let simple_weights: Vec<Weight> = (0..self.rank)
            .map(|i| Weight::from_ints(&(0..self.rank).map(|j| self.cartan.at(i, j)).collect::<Vec<_>>()))
            .collect();
        while let Some(nu) = queue.pop_front() {
            for alpha in &simple_weights {
                let next = nu.sub(alpha);
                if !seen.contains(&next) && self.is_module_weight(lambda, &next) {
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    /// Exact weight multiplicities of the simple highest-weight module,
    /// via the Freudenthal recursion on dominant weights followed by
    /// Weyl-orbit expansion.
    pub fn weight_mults(&self, lambda: &Weight) -> Result<FormalGCharacter> {
        self.require_dominant_integral(lambda)?;
        let weights = self.module_weights(lambda);
        let mut dominants: Vec<Weight> = weights.iter().filter(|w| w.is_dominant()).cloned().collect();
        // Freudenthal needs higher weights first; sort by depth below lambda.
        let depth = |w: &Weight| -> i64 {
            let a = self.alpha_coords(&lambda.sub(w));
            let mut s = Rat::zero();
            for c in &a {
                s += c;
            }
            assert!(s.denom().is_one());
            i64::try_from(s.numer()).expect("depth fits i64")
        };
        dominants.sort_by_key(|w| depth(w));

        let lambda_rho = lambda.add(&self.rho);
        let top_norm = self.norm_sq(&lambda_rho);
        let mut dom_mults: BTreeMap<Weight, u64> = BTreeMap::new();
        for mu in &dominants {
            if mu == lambda {
                dom_mults.insert(mu.clone(), 1);
                continue;
            }
            let mu_rho = mu.add(&self.rho);
            let denom = &top_norm - self.norm_sq(&mu_rho);
            assert!(denom.is_positive(), "Freudenthal denominator must be positive");
            let mut numer = Rat::zero();
            for root in &self.positive_roots {
                let alpha_w = root.to_weight();
                let mut j = 1i64;
                loop {
                    let shifted = mu.add(&alpha_w.scale(&rat(j)));
                    if !weights.contains(&shifted) {
                        break;
                    }
                    let (dom, _) = self.dominant_representative(&shifted, false)?;
                    let m = dom_mults.get(&dom).copied().unwrap_or(0);
                    if m > 0 {
                        numer += rat(m as i64) * rat(2) * self.form_pairing(&shifted, &alpha_w);
                    }
                    j += 1;
                }
            }
            let m = numer / denom;
            assert!(m.denom().is_one(), "Freudenthal multiplicity must be integral");
            let m = u64::try_from(m.numer()).expect("multiplicity fits u64");
            if m > 0 {
                dom_mults.insert(mu.clone(), m);
            }
        }

        // Expand each dominant multiplicity over its Weyl orbit.
        let mut mults: BTreeMap<Weight, u64> = BTreeMap::new();
        for (mu, m) in &dom_mults {
            for w in self.weyl_orbit(mu) {
                mults.insert(w, *m);
            }
        }
        Ok(FormalGCharacter { mults })
    }

    /// Weyl orbit of a weight (closure under simple reflections).
    pub fn weyl_orbit(&self, w: &Weight) -> BTreeSet<Weight> {
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        let mut queue: VecDeque<Weight> = VecDeque::new();
        seen.insert(w.clone());
        queue.push_back(w.clone());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank {
                let refl = Weight::new(self.simple_reflection_matrix(i).apply_rat(&v.coords));
                if seen.insert(refl.clone()) {
                    queue.push_back(refl);
                }
            }
        }
        seen
    }

    /// Weyl dimension formula.
    pub fn weyl_dim(&self, lambda: &Weight) -> Result<num::BigInt> {
        self.require_dominant_integral(lambda)?;
        let lambda_rho = lambda.add(&self.rho);
        let mut acc = Rat::one();
        for root in &self.positive_roots {
            let alpha_w = root.to_weight();
            acc *= self.form_pairing(&lambda_rho, &alpha_w) / self.form_pairing(&self.rho, &alpha_w);
        }
        assert!(acc.denom().is_one(), "Weyl dimension must be integral");
        Ok(acc.numer().clone())
    }
}

/// Sign of the pairing of a rational weight coordinate; used by alcove walks.
pub fn coord_sign(c: &Rat) -> i32 {
    sign(c)
}

/// Memo for weight-multiplicity characters keyed by highest weight. One
/// cache per root system; callers that decompose many tensor products reuse
/// the Freudenthal work across calls.
#[derive(Debug, Default)]
pub struct CharCache {
    map: std::collections::HashMap<Weight, FormalGCharacter>,
}

impl CharCache {
    pub fn new() -> Self {
        CharCache::default()
    }

    pub fn get(&mut self, rs: &RootSystem, lambda: &Weight) -> Result<&FormalGCharacter> {
        if !self.map.contains_key(lambda) {
            let ch = rs.weight_mults(lambda)?;
            self.map.insert(lambda.clone(), ch);
        }
        Ok(&self.map[lambda])
    }
}
