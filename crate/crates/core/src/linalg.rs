//! Dense exact linear algebra over the rationals, plus reduced-echelon row
//! spaces with integer rows for fast subspace arithmetic (membership, sums,
//! intersections). Everything is deterministic; no floating point anywhere.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::scalar::Rat;

/// Dense rational matrix, row major. Vectors are columns: `m.apply(&x)` is
/// the matrix-vector product.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    a: Vec<Rat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            a: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose `j`th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<Rat>]) -> Self {
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = QMat::zero(r, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, xj) in x.iter().enumerate() {
                    if !xj.is_zero() && !self.get(i, j).is_zero() {
                        acc += &(self.get(i, j) * xj);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(aik * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> QMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = QMat::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.a.swap_chunks(r, p, self.cols);
            let inv = self.get(r, c).recip().expect("pivot is nonzero");
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j) - &(&f * self.get(r, j));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel (solutions of `A x = 0`), in the canonical
    /// form produced from the reduced echelon free columns.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut x = vec![Rat::zero(); self.cols];
            x[free] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = -m.get(r, free).clone();
            }
            basis.push(x);
        }
        basis
    }

    /// Solve `A x = b`; `None` when inconsistent. When the solution is not
    /// unique the free variables are set to zero (deterministic).
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the augmented column
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, i: usize, j: usize, width: usize);
}

impl SwapChunks for Vec<Rat> {
    fn swap_chunks(&mut self, i: usize, j: usize, width: usize) {
        if i == j {
            return;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let (a, b) = self.split_at_mut(hi * width);
        a[lo * width..(lo + 1) * width].swap_with_slice(&mut b[..width]);
    }
}

fn primitive_part(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}

/// Row space in canonical reduced echelon form. Rows are primitive integer
/// vectors (content 1) with positive pivot entries and strictly increasing
/// pivot columns; every pivot column is zero in all other rows. Two equal
/// subspaces always produce identical representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntRowSpace {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl IntRowSpace {
    pub fn empty(cols: usize) -> Self {
        IntRowSpace {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(cols: usize) -> Self {
        let rows = (0..cols)
            .map(|i| {
                let mut r = vec![BigInt::zero(); cols];
                r[i] = BigInt::one();
                r
            })
            .collect();
        IntRowSpace {
            cols,
            rows,
            pivots: (0..cols).collect(),
        }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<BigInt>>>(cols: usize, rows: I) -> Self {
        let mut s = IntRowSpace::empty(cols);
        for r in rows {
            s.insert(r);
        }
        s
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn rows_rat(&self) -> Vec<Vec<Rat>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| Rat::from_int(x.clone())).collect())
            .collect()
    }

    /// Reduce `v` against the echelon rows (fraction-free), returning the
    /// primitive residual. A zero residual means membership.
    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        let mut steps = 0usize;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            // v := pivot*v - v[p]*row, which zeroes column p.
            let c = std::mem::replace(&mut v[p], BigInt::zero());
            let pv = &row[p];
            for (x, r) in v.iter_mut().zip(row) {
                let mut t = &*x * pv;
                t -= &c * r;
                *x = t;
            }
            v[p] = BigInt::zero();
            // Keep entries primitive every so often; long fraction-free
            // passes otherwise grow coefficients multiplicatively.
            steps += 1;
            if steps % 32 == 0 {
                primitive_part(&mut v);
            }
        }
        primitive_part(&mut v);
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Rational elimination of `v` against the echelon rows. Unlike `reduce`
    /// this never rescales, so the result is linear in `v`; it vanishes
    /// exactly on the row space.
    pub fn residual_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = &v[p] / &Rat::from_int(row[p].clone());
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * &Rat::from_int(r.clone()));
                }
            }
        }
        v
    }

    pub fn contains_rat(&self, v: &[Rat]) -> bool {
        self.contains(&clear_denominators(v))
    }

    /// Insert a vector; returns true when the rank grew.
    pub fn insert(&mut self, v: Vec<BigInt>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if v[p].is_negative() {
            for x in v.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        // Eliminate the new pivot column from the existing rows.
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut row[p], BigInt::zero());
            let pv = &v[p];
            for (x, r) in row.iter_mut().zip(&v) {
                let mut t = &*x * pv;
                t -= &c * r;
                *x = t;
            }
            row[p] = BigInt::zero();
            primitive_part(row);
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn insert_rat(&mut self, v: &[Rat]) -> bool {
        self.insert(clear_denominators(v))
    }

    pub fn union_with(&mut self, other: &IntRowSpace) {
        for row in &other.rows {
            self.insert(row.clone());
        }
    }

    pub fn is_subspace_of(&self, other: &IntRowSpace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Intersection of two row spaces (Zassenhaus: echelonize [A|A; B|0] and
    /// read the rows whose left half vanished).
    pub fn intersect(&self, other: &IntRowSpace) -> IntRowSpace {
        assert_eq!(self.cols, other.cols);
        let n = self.cols;
        let mut wide = IntRowSpace::empty(2 * n);
        for r in &self.rows {
            let mut w = r.clone();
            w.extend_from_slice(r);
            wide.insert(w);
        }
        for r in &other.rows {
            let mut w = r.clone();
            w.extend(std::iter::repeat_with(BigInt::zero).take(n));
            wide.insert(w);
        }
        let mut out = IntRowSpace::empty(n);
        for (row, &p) in wide.rows.iter().zip(&wide.pivots) {
            if p >= n {
                out.insert(row[n..].to_vec());
            }
        }
        out
    }

    /// Image of this row space under the linear map `m` (applied to each
    /// basis row as a vector).
    pub fn image_under(&self, m: &QMat) -> IntRowSpace {
        let mut out = IntRowSpace::empty(m.nrows());
        for r in &self.rows {
            let x: Vec<Rat> = r.iter().map(|v| Rat::from_int(v.clone())).collect();
            out.insert_rat(&m.apply(&x));
        }
        out
    }
}

/// Scale a rational vector to a primitive integer vector (same line).
pub fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive_part(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::frac(n, d)
    }

    fn qi(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn rref_and_rank() {
        let mut m = QMat::from_rows(vec![
            vec![qi(1), qi(2), qi(3)],
            vec![qi(2), qi(4), qi(6)],
            vec![qi(1), qi(0), qi(1)],
        ]);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.row(2), &[qi(0), qi(0), qi(0)]);
    }

    #[test]
    fn kernel_annihilates() {
        let m = QMat::from_rows(vec![
            vec![qi(1), qi(2), qi(3), qi(4)],
            vec![qi(0), qi(1), qi(1), qi(1)],
        ]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn solve_examples() {
        let m = QMat::from_rows(vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]]);
        let x = m.solve(&[qi(5), qi(10)]).unwrap();
        assert_eq!(m.apply(&x), vec![qi(5), qi(10)]);
        assert_eq!(x, vec![qi(1), qi(3)]);

        let sing = QMat::from_rows(vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]]);
        assert!(sing.solve(&[qi(1), qi(3)]).is_none());
        assert!(sing.solve(&[qi(1), qi(2)]).is_some());
    }

    #[test]
    fn row_space_membership_and_canonical_form() {
        let mut s = IntRowSpace::empty(3);
        assert!(s.insert_rat(&[q(1, 2), qi(1), qi(0)]));
        assert!(s.insert_rat(&[qi(0), qi(0), qi(3)]));
        assert!(!s.insert_rat(&[qi(1), qi(2), qi(5)]));
        assert_eq!(s.rank(), 2);
        assert!(s.contains_rat(&[qi(2), qi(4), qi(-7)]));
        assert!(!s.contains_rat(&[qi(1), qi(0), qi(0)]));

        // Same space from different generators gives identical representation.
        let mut t = IntRowSpace::empty(3);
        t.insert_rat(&[qi(3), qi(6), qi(1)]);
        t.insert_rat(&[qi(0), qi(0), qi(-5)]);
        assert_eq!(s, t);
    }

    #[test]
    fn intersection_examples() {
        // span{(1,0,0),(0,1,0)} ∩ span{(0,1,0),(0,0,1)} = span{(0,1,0)}
        let a = IntRowSpace::from_rows(
            3,
            vec![
                vec![1.into(), 0.into(), 0.into()],
                vec![0.into(), 1.into(), 0.into()],
            ],
        );
        let b = IntRowSpace::from_rows(
            3,
            vec![
                vec![0.into(), 1.into(), 0.into()],
                vec![0.into(), 0.into(), 1.into()],
            ],
        );
        let c = a.intersect(&b);
        assert_eq!(c.rank(), 1);
        assert!(c.contains(&[0.into(), 1.into(), 0.into()]));
    }

    #[test]
    fn residual_is_linear_and_detects_membership() {
        let mut s = IntRowSpace::empty(3);
        s.insert_rat(&[qi(2), qi(4), qi(0)]);
        s.insert_rat(&[qi(0), qi(0), qi(3)]);
        assert!(s
            .residual_rat(&[qi(1), qi(2), qi(-7)])
            .iter()
            .all(Rat::is_zero));
        let u = [qi(1), qi(0), qi(0)];
        let v = [qi(0), qi(1), qi(5)];
        let ru = s.residual_rat(&u);
        let rv = s.residual_rat(&v);
        assert!(ru.iter().any(|x| !x.is_zero()));
        // residual(3u - 2v) = 3 residual(u) - 2 residual(v)
        let mix: Vec<Rat> = u
            .iter()
            .zip(&v)
            .map(|(a, b)| &(&qi(3) * a) - &(&qi(2) * b))
            .collect();
        let rmix = s.residual_rat(&mix);
        for (m, (a, b)) in rmix.iter().zip(ru.iter().zip(&rv)) {
            assert_eq!(m, &(&(&qi(3) * a) - &(&qi(2) * b)));
        }
    }

    fn arb_vec() -> impl Strategy<Value = Vec<Rat>> {
        proptest::collection::vec((-9i64..10).prop_map(qi), 4)
    }

    proptest! {
        #[test]
        fn insert_then_contains(vs in proptest::collection::vec(arb_vec(), 1..6)) {
            let mut s = IntRowSpace::empty(4);
            for v in &vs {
                s.insert_rat(v);
            }
            for v in &vs {
                prop_assert!(s.contains_rat(v));
            }
            // Random linear combination stays inside.
            let mut comb = vec![Rat::zero(); 4];
            for (k, v) in vs.iter().enumerate() {
                for (c, x) in comb.iter_mut().zip(v) {
                    *c += &(qi(k as i64 + 1) * x);
                }
            }
            prop_assert!(s.contains_rat(&comb));
        }

        #[test]
        fn intersect_is_contained(
            vs in proptest::collection::vec(arb_vec(), 1..4),
            ws in proptest::collection::vec(arb_vec(), 1..4),
        ) {
            let mut a = IntRowSpace::empty(4);
            for v in &vs { a.insert_rat(v); }
            let mut b = IntRowSpace::empty(4);
            for w in &ws { b.insert_rat(w); }
            let c = a.intersect(&b);
            prop_assert!(c.is_subspace_of(&a));
            prop_assert!(c.is_subspace_of(&b));
            // Dimension formula: dim(a∩b) = dim a + dim b - dim(a+b).
            let mut sum = a.clone();
            sum.union_with(&b);
            prop_assert_eq!(c.rank(), a.rank() + b.rank() - sum.rank());
        }
    }
}
