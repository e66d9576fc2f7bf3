//! Relation elements for the graded generator algebra: formal bracket
//! expressions in the generators `e_0^j.e_{2n}` and `z_{2m+1}`, the
//! substitution dictionary into special derivations, kernels of the
//! quadratic and depth-graded relation maps, the weight-12 cubic identity,
//! and the arithmetic relation heads.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::depth::{depth_basis_at_with_bound, DepthError, DEFAULT_DEGREE_BOUND};
use crate::derivation::{ad_pow, epsilon_std, sl2_triple, w_pollack, Derivation, DerivationError};
use crate::freelie::{Alphabet, MultiDegree};
use crate::linalg::{IntRowSpace, QMat};
use crate::periodpoly::{
    cuspidal_cocycles, frobenius_split, relation_coeffs, CoeffFamily, PeriodError,
};
use crate::scalar::{bernoulli, binomial, factorial, Rat};

#[derive(Error, Debug)]
pub enum RelationsError {
    #[error("arithmetic generators have no image in the derivation algebra")]
    ArithmeticGenerator,
    #[error("expression is not bidegree-homogeneous")]
    MixedBidegree,
    #[error("the two printed head presentations disagree at (m, n) = ({m}, {n})")]
    HeadPresentationMismatch { m: usize, n: usize },
    #[error("weight must be even and at least {min}; got {got}")]
    WeightRange { got: usize, min: usize },
    #[error("relation depth-degree must be at least 2; got {0}")]
    DepthDegree(usize),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Depth(#[from] DepthError),
    #[error(transparent)]
    Period(#[from] PeriodError),
}

/// Generator of the graded bracket algebra: geometric generators
/// `e_0^j.e_{2n}` (the weight-lowering operator applied `j` times to the
/// index-`2n` generator) and arithmetic generators `z_{2m+1}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum AbstractGenerator {
    E { two_n: usize, j: usize },
    Z { index: usize },
}

impl AbstractGenerator {
    /// `e_0^j.e_{two_n}`. Requires `two_n` even and `0 <= j <= two_n - 2`:
    /// the lowering string dies past the bottom of the sl2 multiplet.
    pub fn e(two_n: usize, j: usize) -> Self {
        assert!(
            two_n >= 2 && two_n % 2 == 0,
            "geometric index must be even and positive; got {two_n}"
        );
        assert!(
            j <= two_n - 2,
            "lowering exponent out of range: j = {j} at index {two_n}"
        );
        AbstractGenerator::E { two_n, j }
    }

    /// `z_{index}` with odd `index >= 3`.
    pub fn z(index: usize) -> Self {
        assert!(
            index >= 3 && index % 2 == 1,
            "arithmetic index must be odd and at least 3; got {index}"
        );
        AbstractGenerator::Z { index }
    }

    /// `(M, W)` weights: `e_0^j.e_{2n}` sits at `(-2-2j, -2n)` and
    /// `z_{2m+1}` at `(-4m-2, -4m-2)`.
    pub fn bidegree(&self) -> (i64, i64) {
        match *self {
            AbstractGenerator::E { two_n, j } => (-2 - 2 * j as i64, -(two_n as i64)),
            AbstractGenerator::Z { index } => {
                let w = -2 * index as i64;
                (w, w)
            }
        }
    }

    fn is_central(&self) -> bool {
        matches!(self, AbstractGenerator::E { two_n: 2, .. })
    }
}

impl fmt::Display for AbstractGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AbstractGenerator::E { two_n, j: 0 } => write!(f, "e{two_n}"),
            AbstractGenerator::E { two_n, j: 1 } => write!(f, "e0.e{two_n}"),
            AbstractGenerator::E { two_n, j } => write!(f, "e0^{j}.e{two_n}"),
            AbstractGenerator::Z { index } => write!(f, "z{index}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Tree {
    Leaf(AbstractGenerator),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    fn bidegree(&self) -> (i64, i64) {
        match self {
            Tree::Leaf(g) => g.bidegree(),
            Tree::Node(l, r) => {
                let (lm, lw) = l.bidegree();
                let (rm, rw) = r.bidegree();
                (lm + rm, lw + rw)
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(g) => write!(f, "{g}"),
            Tree::Node(l, r) => write!(f, "[{l}, {r}]"),
        }
    }
}

/// Anticommutative normal form: children ordered at every node with sign
/// bookkeeping. `None` when the tree vanishes: equal children, or a bracket
/// with the central generator `e2`.
fn normalize(t: Tree) -> Option<(Tree, bool)> {
    match t {
        Tree::Leaf(_) => Some((t, false)),
        Tree::Node(l, r) => {
            let (ln, ls) = normalize(*l)?;
            let (rn, rs) = normalize(*r)?;
            let central = |t: &Tree| matches!(t, Tree::Leaf(g) if g.is_central());
            if central(&ln) || central(&rn) {
                return None;
            }
            match ln.cmp(&rn) {
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Less => Some((Tree::Node(ln.into(), rn.into()), ls ^ rs)),
                std::cmp::Ordering::Greater => Some((Tree::Node(rn.into(), ln.into()), !(ls ^ rs))),
            }
        }
    }
}

/// Formal rational combination of bracket words in the generators, kept in
/// anticommutative normal form; brackets with the central `e2` are dropped.
/// Degree-two components coincide with the free Lie algebra on the
/// generators. No Jacobi rewriting is applied, so deeper comparisons are
/// termwise over the literal bracketings, which is what the printed
/// identities call for.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AbstractLieExpr {
    terms: BTreeMap<Tree, Rat>,
}

fn add_term(map: &mut BTreeMap<Tree, Rat>, t: Tree, c: Rat) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(t) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl AbstractLieExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: AbstractGenerator) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Tree::Leaf(g), Rat::one());
        AbstractLieExpr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        AbstractLieExpr {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (t, c) in &other.terms {
            add_term(&mut terms, t.clone(), c.clone());
        }
        AbstractLieExpr { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn bracket(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (l, cl) in &self.terms {
            for (r, cr) in &other.terms {
                let raw = Tree::Node(Box::new(l.clone()), Box::new(r.clone()));
                if let Some((t, neg)) = normalize(raw) {
                    let mut c = cl * cr;
                    if neg {
                        c = -c;
                    }
                    add_term(&mut terms, t, c);
                }
            }
        }
        AbstractLieExpr { terms }
    }

    /// `(M, W)` bidegree; `None` when zero or inhomogeneous.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(Tree::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// The scalar `lambda` with `self = lambda * other` termwise, when one
    /// exists. `None` when either side is zero or the supports differ.
    pub fn global_ratio(&self, other: &Self) -> Option<Rat> {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let mut ratio: Option<Rat> = None;
        for ((t1, c1), (t2, c2)) in self.terms.iter().zip(&other.terms) {
            if t1 != t2 {
                return None;
            }
            let r = c1 / c2;
            match &ratio {
                None => ratio = Some(r),
                Some(prev) if *prev == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }
}

impl fmt::Display for AbstractLieExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (t, c) in &self.terms {
            if first {
                write!(f, "{c}*{t}")?;
                first = false;
            } else {
                write!(f, " + {c}*{t}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for AbstractLieExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            word: String,
            coeff: &'a Rat,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (t, c) in &self.terms {
            seq.serialize_element(&Term {
                word: t.to_string(),
                coeff: c,
            })?;
        }
        seq.end()
    }
}

/// The canonical highest-weight bracket of two geometric generators in the
/// abstract algebra:
///
/// `(1/4) sum_{i+j=d-2} (-1)^i C(d-2,i) (2a-i)!(2b-j)!
///      [e_0^i.e_{2a+2}, e_0^j.e_{2b+2}]`
///
/// Zero when `a` or `b` is zero. Requires `2 <= d` and `d-2 <= 2 min(a,b)`.
/// Its image under `monodromy_image` is `w_pollack(d, a, b)`.
pub fn w_bold(d: usize, a: usize, b: usize) -> AbstractLieExpr {
    if a == 0 || b == 0 {
        return AbstractLieExpr::zero();
    }
    assert!(
        d >= 2 && d - 2 <= 2 * a.min(b),
        "w_bold requires 2 <= d and d-2 <= 2 min(a,b); got d={d}, a={a}, b={b}"
    );
    let quarter = Rat::frac(1, 4);
    let mut acc = AbstractLieExpr::zero();
    for i in 0..=(d - 2) {
        let j = d - 2 - i;
        let mut c = &quarter * &Rat::from_int(binomial((d - 2) as u64, i as u64));
        c *= &Rat::from_int(factorial((2 * a - i) as u64));
        c *= &Rat::from_int(factorial((2 * b - j) as u64));
        if i % 2 == 1 {
            c = -c;
        }
        let term = AbstractLieExpr::generator(AbstractGenerator::e(2 * a + 2, i)).bracket(
            &AbstractLieExpr::generator(AbstractGenerator::e(2 * b + 2, j)),
        );
        acc = acc.add(&term.scale(&c));
    }
    acc
}

/// Substitution into the special derivation algebra:
/// `e_0^j.e_{2n} -> (2/(2n-2)!) ad_lowering^j(eps_{2n})`. Arithmetic
/// generators have no image. Mixed-bidegree input is rejected because
/// derivations are stored as single homogeneous bidegree pieces.
pub fn monodromy_image(x: &AbstractLieExpr) -> Result<Derivation, RelationsError> {
    if !x.is_zero() && x.bidegree().is_none() {
        return Err(RelationsError::MixedBidegree);
    }
    let lowering = sl2_triple().lowering;
    let mut memo: BTreeMap<AbstractGenerator, Derivation> = BTreeMap::new();
    let mut acc = Derivation::zero(Alphabet::AT);
    for (t, c) in &x.terms {
        let img = eval_tree(t, &lowering, &mut memo)?;
        acc = acc.add(&img.scale(c));
    }
    Ok(acc)
}

fn eval_tree(
    t: &Tree,
    lowering: &Derivation,
    memo: &mut BTreeMap<AbstractGenerator, Derivation>,
) -> Result<Derivation, RelationsError> {
    match t {
        Tree::Leaf(g) => {
            if let Some(d) = memo.get(g) {
                return Ok(d.clone());
            }
            let AbstractGenerator::E { two_n, j } = *g else {
                return Err(RelationsError::ArithmeticGenerator);
            };
            let base = epsilon_std(two_n)?;
            let scale = Rat::frac(2, 1) / Rat::from_int(factorial((two_n - 2) as u64));
            let img = ad_pow(lowering, j, &base).scale(&scale);
            memo.insert(*g, img.clone());
            Ok(img)
        }
        Tree::Node(l, r) => {
            let li = eval_tree(l, lowering, memo)?;
            let ri = eval_tree(r, lowering, memo)?;
            Ok(li.commutator(&ri))
        }
    }
}

fn relation_weight_index(weight: usize, min: usize) -> Result<usize, RelationsError> {
    if weight < min || weight % 2 != 0 {
        return Err(RelationsError::WeightRange { got: weight, min });
    }
    Ok(weight / 2 - 1)
}

fn kernel_of_columns(cols: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    QMat::from_columns(cols).kernel()
}

fn image_coords(x: &Derivation, mu_a: MultiDegree, mu_t: MultiDegree) -> Vec<Rat> {
    for (mu, _) in x.image_of_a().components() {
        debug_assert_eq!(*mu, mu_a, "off-degree component in an evaluation");
    }
    for (mu, _) in x.image_of_t().components() {
        debug_assert_eq!(*mu, mu_t, "off-degree component in an evaluation");
    }
    let mut v = x.image_of_a().lyndon_coordinates(mu_a);
    v.extend(x.image_of_t().lyndon_coordinates(mu_t));
    v
}

/// Kernel of the quadratic relation map: antisymmetric coefficient families
/// `c` on `a + b = n` with `a, b >= 1` and
/// `sum_a c_a [eps_{2a+2}, eps_{2b+2}] = 0`, found by exact elimination of
/// the evaluations on both generators. Families are returned in canonical
/// echelon form. `weight` is `2n + 2`, even and at least 6.
pub fn pollack_quadratic_kernel(weight: usize) -> Result<Vec<CoeffFamily>, RelationsError> {
    let n = relation_weight_index(weight, 6)?;
    // One free parameter per unordered pair {a, b}, a < b; the diagonal is
    // forced to zero by antisymmetry. The ordered family doubles each
    // commutator, which does not move the kernel.
    let frees: Vec<usize> = (1..n).filter(|&a| 2 * a < n).collect();
    let mu_a = MultiDegree(3, 2 * n + 2);
    let mu_t = MultiDegree(2, 2 * n + 3);
    let mut cols = Vec::with_capacity(frees.len());
    for &a in &frees {
        let delta = epsilon_std(2 * a + 2)?.commutator(&epsilon_std(2 * (n - a) + 2)?);
        cols.push(image_coords(&delta, mu_a, mu_t));
    }
    let mut rows = IntRowSpace::empty(frees.len());
    for v in &kernel_of_columns(&cols) {
        rows.insert_rat(v);
    }
    let families = rows
        .rows_rat()
        .iter()
        .map(|row| {
            let mut c = vec![Rat::zero(); n + 1];
            for (&a, v) in frees.iter().zip(row) {
                c[a] = v.clone();
                c[n - a] = -v.clone();
            }
            let fam = CoeffFamily { d: 2, sum: n, c };
            debug_assert!(fam.sign_law_holds());
            fam
        })
        .collect();
    Ok(families)
}

/// Kernel report for the depth-`d` relation map: families `c` with
/// `sum_a c_a w_pollack(d, a, b)` in `D^3 Der^0`. `raw_dim` counts all
/// solutions over the interior support; the families that are termwise zero
/// by the `(-1)^{d+1}` mirror symmetry of `w` carry no content and are
/// quotiented away in `reduced_dim`. The returned families satisfy the sign
/// convention `c_a + (-1)^d c_b = 0` and span the reduced kernel.
#[derive(Clone, Debug, Serialize)]
pub struct DepthKernel {
    pub weight: usize,
    pub d: usize,
    pub raw_dim: usize,
    pub reduced_dim: usize,
    pub families: Vec<CoeffFamily>,
}

pub fn pollack_depth_kernel(weight: usize, d: usize) -> Result<DepthKernel, RelationsError> {
    if d < 2 {
        return Err(RelationsError::DepthDegree(d));
    }
    let n = relation_weight_index(weight, 6)?;
    // Interior support: indices whose relation element is defined and not
    // identically zero (endpoint elements bracket the central generator).
    let support: Vec<usize> = (1..n)
        .filter(|&a| 2 * a + 2 >= d && 2 * (n - a) + 2 >= d)
        .collect();
    if support.is_empty() {
        return Ok(DepthKernel {
            weight,
            d,
            raw_dim: 0,
            reduced_dim: 0,
            families: Vec::new(),
        });
    }
    let mu_a = MultiDegree(d + 1, 2 * n + 4 - d);
    let mu_t = MultiDegree(d, 2 * n + 5 - d);
    let bound = DEFAULT_DEGREE_BOUND.max(2 * n + 5);
    let space_a = depth_basis_at_with_bound(3, mu_a, bound)?;
    let space_t = depth_basis_at_with_bound(3, mu_t, bound)?;
    // One relation element per unordered pair; the mirror partner is
    // `(-1)^{d+1}` times it.
    let mut base: BTreeMap<usize, Derivation> = BTreeMap::new();
    let mut cols = Vec::with_capacity(support.len());
    for &a in &support {
        let key = a.min(n - a);
        if !base.contains_key(&key) {
            base.insert(key, w_pollack(d, key, n - key)?);
        }
        let w = &base[&key];
        let coords = image_coords(w, mu_a, mu_t);
        let (head, tail) = coords.split_at(space_a.ambient_dim());
        let mut v = space_a.row_space().residual_rat(head);
        v.extend(space_t.row_space().residual_rat(tail));
        if a > n - a && d % 2 == 0 {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
        cols.push(v);
    }
    let raw = kernel_of_columns(&cols);
    let raw_dim = raw.len();
    let mut raw_rows = IntRowSpace::empty(support.len());
    for v in &raw {
        raw_rows.insert_rat(v);
    }
    let mut trivial = IntRowSpace::empty(support.len());
    let mut convention = IntRowSpace::empty(support.len());
    for (i, &a) in support.iter().enumerate() {
        let b = n - a;
        if a > b {
            continue;
        }
        if a == b {
            let mut e = vec![Rat::zero(); support.len()];
            e[i] = Rat::one();
            if d % 2 == 0 {
                trivial.insert_rat(&e);
            } else {
                convention.insert_rat(&e);
            }
            continue;
        }
        let ib = support
            .iter()
            .position(|&x| x == b)
            .expect("support is mirror-closed");
        let sign = if d % 2 == 0 { Rat::one() } else { -Rat::one() };
        let mut t = vec![Rat::zero(); support.len()];
        t[i] = Rat::one();
        t[ib] = sign.clone();
        trivial.insert_rat(&t);
        let mut v = vec![Rat::zero(); support.len()];
        v[i] = Rat::one();
        v[ib] = -sign;
        convention.insert_rat(&v);
    }
    // Termwise-vanishing families must be solutions; with that, the raw
    // kernel splits along the mirror symmetry and the dimensions add up.
    assert!(
        trivial.is_subspace_of(&raw_rows),
        "mirror-symmetric families failed to vanish"
    );
    let reduced = raw_rows.intersect(&convention);
    let reduced_dim = reduced.rank();
    assert_eq!(raw_dim, trivial.rank() + reduced_dim);
    let families = reduced
        .rows_rat()
        .iter()
        .map(|row| {
            let mut c = vec![Rat::zero(); n + 1];
            for (&a, v) in support.iter().zip(row) {
                c[a] = v.clone();
            }
            let fam = CoeffFamily { d, sum: n, c };
            debug_assert!(fam.sign_law_holds());
            fam
        })
        .collect();
    Ok(DepthKernel {
        weight,
        d,
        raw_dim,
        reduced_dim,
        families,
    })
}

/// Coefficient families read off the sign-matched cuspidal cocycles paired
/// with `(weight, d)`: the plus part for even `d`, the minus part for odd.
pub fn cocycle_families(weight: usize, d: usize) -> Result<Vec<CoeffFamily>, RelationsError> {
    if d < 2 {
        return Err(RelationsError::DepthDegree(d));
    }
    let n = relation_weight_index(weight, 6)?;
    let Some(degree) = (2 * n + 4).checked_sub(2 * d) else {
        return Ok(Vec::new());
    };
    if degree < 2 {
        return Ok(Vec::new());
    }
    let (plus, minus) = frobenius_split(&cuspidal_cocycles(degree)?)?;
    let part = if d % 2 == 0 { plus } else { minus };
    part.iter()
        .map(|r| Ok(relation_coeffs(degree, d, r)?))
        .collect()
}

/// Span comparison between the reduced depth kernel and the matching
/// cocycle families over the interior indices. The trivial cocycle's family
/// at `d = 2` is supported entirely on the endpoints, whose relation
/// elements vanish, so it restricts to zero, exactly as the kernel does.
pub fn depth_kernel_matches_cocycles(weight: usize, d: usize) -> Result<bool, RelationsError> {
    let kernel = pollack_depth_kernel(weight, d)?;
    let families = cocycle_families(weight, d)?;
    let n = weight / 2 - 1;
    let interior = |fam: &CoeffFamily| -> Vec<Rat> {
        debug_assert_eq!(fam.sum, n);
        fam.c[1..n].to_vec()
    };
    let mut kernel_rows = IntRowSpace::empty(n - 1);
    for fam in &kernel.families {
        kernel_rows.insert_rat(&interior(fam));
    }
    let mut cocycle_rows = IntRowSpace::empty(n - 1);
    for fam in &families {
        cocycle_rows.insert_rat(&interior(fam));
    }
    Ok(kernel_rows == cocycle_rows)
}

/// The printed coefficients of the raw seven-term weight-12 cubic.
pub fn delta_cubic_printed() -> [Rat; 7] {
    [80, 16, -250, -125, 280, -462, -1725].map(Rat::from_int)
}

/// The raw seven-term combination with the given coefficients, as a
/// derivation:
///
/// `c0 [e12,[e4,e0]] + c1 [e4,[e12,e0]] + c2 [e10,[e6,e0]]
///  + c3 [e6,[e10,e0]] + c4 [e8,[e8,e0]] + c5 [e4,[e4,e8]]
///  + c6 [e6,[e6,e4]]`
///
/// in the standard derivation family.
pub fn delta_cubic_raw(coeffs: &[Rat; 7]) -> Result<Derivation, RelationsError> {
    let e0 = sl2_triple().lowering;
    let quad = |x: usize, y: usize| -> Result<Derivation, RelationsError> {
        Ok(epsilon_std(x)?.commutator(&epsilon_std(y)?.commutator(&e0)))
    };
    let cube = |x: usize, y: usize, z: usize| -> Result<Derivation, RelationsError> {
        Ok(epsilon_std(x)?.commutator(&epsilon_std(y)?.commutator(&epsilon_std(z)?)))
    };
    let terms = [
        quad(12, 4)?,
        quad(4, 12)?,
        quad(10, 6)?,
        quad(6, 10)?,
        quad(8, 8)?,
        cube(4, 4, 8)?,
        cube(6, 6, 4)?,
    ];
    let mut acc = Derivation::zero(Alphabet::AT);
    for (t, c) in terms.iter().zip(coeffs) {
        acc = acc.add(&t.scale(c));
    }
    Ok(acc)
}

/// The printed coefficients of the rewritten five-term weight-12 cubic:
/// one per group in the order `w_{1,5}+w_{5,1}`, `w_{2,4}+w_{4,2}`,
/// `w_{3,3}`, `[e4,[e4,e8]]`, `[e6,[e6,e4]]`.
pub fn delta_cubic_rewritten_printed() -> [Rat; 5] {
    [
        Rat::from_int(4),
        Rat::from_int(-25),
        Rat::from_int(42),
        Rat::frac(231, 20),
        Rat::frac(345, 8),
    ]
}

/// The rewritten combination
/// `c0 (w^3_{1,5} + w^3_{5,1})/2 + c1 (w^3_{2,4} + w^3_{4,2})/2
///  + c2 w^3_{3,3}/2 + c3 [e4,[e4,e8]] + c4 [e6,[e6,e4]]`
/// as a derivation; the halved `w` is the normalization the printed form
/// uses for its quadratic part.
pub fn delta_cubic_rewritten_with(coeffs: &[Rat; 5]) -> Result<Derivation, RelationsError> {
    let half = Rat::frac(1, 2);
    let omega = |a: usize, b: usize| -> Result<Derivation, RelationsError> {
        Ok(w_pollack(3, a, b)?.scale(&half))
    };
    let mut acc = omega(1, 5)?.add(&omega(5, 1)?).scale(&coeffs[0]);
    acc = acc.add(&omega(2, 4)?.add(&omega(4, 2)?).scale(&coeffs[1]));
    acc = acc.add(&omega(3, 3)?.scale(&coeffs[2]));
    let t1 = epsilon_std(4)?.commutator(&epsilon_std(4)?.commutator(&epsilon_std(8)?));
    let t2 = epsilon_std(6)?.commutator(&epsilon_std(6)?.commutator(&epsilon_std(4)?));
    acc = acc.add(&t1.scale(&coeffs[3]));
    acc = acc.add(&t2.scale(&coeffs[4]));
    Ok(acc)
}

/// The rewritten combination at its printed coefficients.
pub fn delta_cubic_rewritten() -> Result<Derivation, RelationsError> {
    delta_cubic_rewritten_with(&delta_cubic_rewritten_printed())
}

/// `eps_{2k}` written in the generator algebra: `((2k-2)!/2) e_{2k}`.
fn abstract_eps(two_k: usize) -> AbstractLieExpr {
    let s = Rat::from_int(factorial((two_k - 2) as u64)) * Rat::frac(1, 2);
    AbstractLieExpr::generator(AbstractGenerator::e(two_k, 0)).scale(&s)
}

/// `[eps_X, [eps_Y, eps_0]]` in the generator algebra: bracketing against
/// the weight-zero member is the lowering shift, so the inner bracket is
/// `-((Y-2)!/2) e_0.e_Y`.
fn abstract_quad(x: usize, y: usize) -> AbstractLieExpr {
    let s = -(Rat::from_int(factorial((y - 2) as u64)) * Rat::frac(1, 2));
    let inner = AbstractLieExpr::generator(AbstractGenerator::e(y, 1)).scale(&s);
    abstract_eps(x).bracket(&inner)
}

fn abstract_cube(x: usize, y: usize, z: usize) -> AbstractLieExpr {
    abstract_eps(x).bracket(&abstract_eps(y).bracket(&abstract_eps(z)))
}

fn delta_cubic_abstract_raw(coeffs: &[Rat; 7]) -> AbstractLieExpr {
    let terms = [
        abstract_quad(12, 4),
        abstract_quad(4, 12),
        abstract_quad(10, 6),
        abstract_quad(6, 10),
        abstract_quad(8, 8),
        abstract_cube(4, 4, 8),
        abstract_cube(6, 6, 4),
    ];
    let mut acc = AbstractLieExpr::zero();
    for (t, c) in terms.iter().zip(coeffs) {
        acc = acc.add(&t.scale(c));
    }
    acc
}

fn delta_cubic_abstract_rewritten() -> AbstractLieExpr {
    let half = Rat::frac(1, 2);
    let omega = |a: usize, b: usize| w_bold(3, a, b).scale(&half);
    let mut acc = omega(1, 5).add(&omega(5, 1)).scale(&Rat::from_int(4));
    acc = acc.add(&omega(2, 4).add(&omega(4, 2)).scale(&Rat::from_int(-25)));
    acc = acc.add(&omega(3, 3).scale(&Rat::from_int(42)));
    acc = acc.add(&abstract_cube(4, 4, 8).scale(&Rat::frac(231, 20)));
    acc = acc.add(&abstract_cube(6, 6, 4).scale(&Rat::frac(345, 8)));
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaCubicReport {
    pub raw_is_zero: bool,
    pub rewritten_is_zero: bool,
    /// The scalar `lambda` with `rewritten = lambda * raw` termwise as
    /// formal expressions; the raw form is the primary statement.
    pub relating_scalar: Option<Rat>,
}

impl DeltaCubicReport {
    pub fn passes(&self) -> bool {
        self.raw_is_zero && self.rewritten_is_zero
    }
}

/// Evaluates both printed seven-term combinations, applies them to the
/// generators, and reports whether each is the zero derivation, together
/// with the exact global scalar relating the two printed forms.
pub fn delta_cubic_verify() -> Result<DeltaCubicReport, RelationsError> {
    let printed = delta_cubic_printed();
    let raw = delta_cubic_raw(&printed)?;
    let rewritten = delta_cubic_rewritten()?;
    let scalar = delta_cubic_abstract_rewritten().global_ratio(&delta_cubic_abstract_raw(&printed));
    Ok(DeltaCubicReport {
        raw_is_zero: raw.is_zero(),
        rewritten_is_zero: rewritten.is_zero(),
        relating_scalar: scalar,
    })
}

/// The arithmetic relation head at indices `(m, n)`, in the rescaled
/// presentation.
#[derive(Clone, Debug, Serialize)]
pub struct ArithmeticHead {
    pub m: usize,
    pub n: usize,
    /// Scalar multiplying `w_bold(2m, m-1, n+m-1)`.
    pub scalar: Rat,
    /// The head itself: `scalar * w_bold(2m, m-1, n+m-1)`.
    pub head: AbstractLieExpr,
}

/// Builds the head of the arithmetic bracket relation in both printed
/// presentations and checks that they agree as expressions after the
/// `eps_{2k} = ((2k-2)!/2) e_{2k}` rescaling of the bracketed generator.
/// A mismatch is a bug signal, not a mathematical finding.
pub fn arithmetic_head(m: usize, n: usize) -> Result<ArithmeticHead, RelationsError> {
    assert!(
        m >= 1 && n >= 1,
        "head indices start at one; got m={m}, n={n}"
    );
    let b_ratio = bernoulli((2 * n + 2 * m) as u64) / bernoulli((2 * n + 2) as u64);
    // Plain presentation:
    // ((2m-2)!/(2n+2m)!) C(2n+2,2) (B_{2n+2m}/B_{2n+2})
    //   sum_{i+j=2m-2} (-1)^i ((2n+i)!/i!) [e_0^i.e_{2m}, e_0^j.e_{2n+2m}]
    let plain_scalar = Rat::from_int(factorial((2 * m - 2) as u64))
        / Rat::from_int(factorial((2 * n + 2 * m) as u64))
        * Rat::from_int(binomial((2 * n + 2) as u64, 2))
        * &b_ratio;
    let mut plain_sum = AbstractLieExpr::zero();
    for i in 0..=(2 * m - 2) {
        let j = 2 * m - 2 - i;
        let mut c =
            Rat::from_int(factorial((2 * n + i) as u64)) / Rat::from_int(factorial(i as u64));
        if i % 2 == 1 {
            c = -c;
        }
        let term = AbstractLieExpr::generator(AbstractGenerator::e(2 * m, i)).bracket(
            &AbstractLieExpr::generator(AbstractGenerator::e(2 * n + 2 * m, j)),
        );
        plain_sum = plain_sum.add(&term.scale(&c));
    }
    // Rescaled presentation, for the bracket against
    // eps_{2n+2} = ((2n)!/2) e_{2n+2}:
    // ((2n+2)!/(2n+2m)!) (B_{2n+2m}/B_{2n+2}) w_bold(2m, m-1, n+m-1)
    let scalar = Rat::from_int(factorial((2 * n + 2) as u64))
        / Rat::from_int(factorial((2 * n + 2 * m) as u64))
        * &b_ratio;
    let head = w_bold(2 * m, m - 1, n + m - 1).scale(&scalar);
    let rescale = Rat::from_int(factorial((2 * n) as u64)) * Rat::frac(1, 2);
    if head != plain_sum.scale(&(plain_scalar * rescale)) {
        return Err(RelationsError::HeadPresentationMismatch { m, n });
    }
    Ok(ArithmeticHead { m, n, scalar, head })
}

/// The printed `m = 2` specialization of the head scalar:
/// `(1/2) (1/C(2n+4,2)) (B_{2n+4}/B_{2n+2})`, for cross-checking against
/// `arithmetic_head(2, n)`.
pub fn arithmetic_head_m2_display(n: usize) -> Rat {
    assert!(n >= 1, "specialization needs n >= 1");
    Rat::frac(1, 2) / Rat::from_int(binomial((2 * n + 4) as u64, 2))
        * (bernoulli((2 * n + 4) as u64) / bernoulli((2 * n + 2) as u64))
}
