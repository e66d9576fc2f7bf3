//! The SL2(Z) action on symmetric powers, cuspidal cocycle spaces, the real
//! Frobenius eigenspace split, and extraction of relation coefficient
//! families from cocycles.
//!
//! A cuspidal cocycle is identified with its value on S, a polynomial r in
//! S^{2n}H killed by both 1 + S and 1 + U + U^2 (U = ST). Spaces are
//! canonicalized by reduced echelon form over the monomial basis ordered by
//! descending a-degree.

use std::fmt;

use num::BigInt;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{IntRowSpace, QMat};
use crate::scalar::Rat;

#[derive(Debug, Error)]
pub enum PeriodError {
    #[error("symmetric power degree {0} is odd; only even powers carry these structures")]
    OddDegree(usize),
    #[error("degree {0} is too small for a cuspidal coboundary")]
    DegreeTooSmall(usize),
    #[error("span is not stable under the real Frobenius")]
    NotFrobeniusStable,
    #[error("cocycle has a monomial a^{0} b^{1} outside the depth-{2} parity support")]
    ParitySupport(usize, usize, usize),
    #[error("coboundary fails the cuspidal cocycle conditions; this signals a bug")]
    CoboundaryNotCocycle,
}

/// Element of S^{2n}H: a homogeneous polynomial in a and b of degree 2n.
/// Coefficients are stored by descending a-degree, so `coeffs[k]` belongs to
/// the monomial a^{2n-k} b^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPower {
    degree: usize,
    coeffs: Vec<Rat>,
}

impl SymPower {
    pub fn zero(degree: usize) -> SymPower {
        SymPower {
            degree,
            coeffs: vec![Rat::zero(); degree + 1],
        }
    }

    /// The monomial `coeff * a^a_deg b^(degree - a_deg)`.
    pub fn monomial(degree: usize, a_deg: usize, coeff: Rat) -> SymPower {
        assert!(a_deg <= degree);
        let mut p = SymPower::zero(degree);
        p.coeffs[degree - a_deg] = coeff;
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, a_deg: usize) -> &Rat {
        assert!(a_deg <= self.degree);
        &self.coeffs[self.degree - a_deg]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Coefficients by descending a-degree, the canonical coordinate order.
    pub fn coords(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn from_coords(degree: usize, coeffs: Vec<Rat>) -> SymPower {
        assert_eq!(coeffs.len(), degree + 1);
        SymPower { degree, coeffs }
    }

    pub fn add(&self, other: &SymPower) -> SymPower {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        SymPower {
            degree: self.degree,
            coeffs,
        }
    }

    pub fn sub(&self, other: &SymPower) -> SymPower {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SymPower {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, s: &Rat) -> SymPower {
        SymPower {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x * s).collect(),
        }
    }

    /// The real Frobenius: a fixed, b negated.
    pub fn frobenius(&self) -> SymPower {
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            if k % 2 == 1 {
                *c = -std::mem::replace(c, Rat::zero());
            }
        }
        out
    }
}

impl fmt::Display for SymPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a_deg = self.degree - k;
            if first {
                write!(f, "{}", c)?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", -c.clone())?;
            } else {
                write!(f, " + {}", c)?;
            }
            write!(f, "*a^{}*b^{}", a_deg, k)?;
        }
        Ok(())
    }
}

impl Serialize for SymPower {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let nonzero = self.coeffs.iter().filter(|c| !c.is_zero()).count();
        let mut seq = s.serialize_seq(Some(nonzero))?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = TermJson {
                monomial: format!("a^{} b^{}", self.degree - k, k),
                coeff: c.clone(),
            };
            seq.serialize_element(&term)?;
        }
        seq.end()
    }
}

#[derive(Serialize)]
struct TermJson {
    monomial: String,
    coeff: Rat,
}

/// 2x2 integer matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2Element {
    m: [[i64; 2]; 2],
}

impl Sl2Element {
    pub fn new(m: [[i64; 2]; 2]) -> Sl2Element {
        assert_eq!(
            m[0][0] * m[1][1] - m[0][1] * m[1][0],
            1,
            "determinant must be one"
        );
        Sl2Element { m }
    }

    pub fn identity() -> Sl2Element {
        Sl2Element::new([[1, 0], [0, 1]])
    }

    pub fn s() -> Sl2Element {
        Sl2Element::new([[0, -1], [1, 0]])
    }

    pub fn t() -> Sl2Element {
        Sl2Element::new([[1, 1], [0, 1]])
    }

    /// U = S*T, the order-three rotation (up to sign).
    pub fn u() -> Sl2Element {
        Sl2Element::s().mul(&Sl2Element::t())
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.m
    }

    pub fn mul(&self, other: &Sl2Element) -> Sl2Element {
        let a = &self.m;
        let b = &other.m;
        Sl2Element::new([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn pow(&self, k: usize) -> Sl2Element {
        let mut out = Sl2Element::identity();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn neg(&self) -> Sl2Element {
        let m = self.m;
        Sl2Element::new([[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]])
    }
}

/// The action on S^{2n}H: the row vector (a, -b) is multiplied on the right
/// by the matrix. For gamma = [[p,q],[r,s]] this substitutes
/// a -> p*a - r*b and b -> -q*a + s*b, extended multiplicatively.
pub fn act(gamma: &Sl2Element, p: &SymPower) -> SymPower {
    let [[mp, mq], [mr, ms]] = gamma.entries();
    let deg = p.degree();
    // Powers of the two linear images, each a dense polynomial in (a, b).
    let a_image = linear_form(mp, -mr);
    let b_image = linear_form(-mq, ms);
    let a_pows = power_table(&a_image, deg);
    let b_pows = power_table(&b_image, deg);
    let mut out = SymPower::zero(deg);
    for (k, c) in p.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (i, j) = (deg - k, k);
        let prod = poly_mul(&a_pows[i], &b_pows[j]);
        for (a_deg, v) in prod.iter().enumerate() {
            if !v.is_zero() {
                let slot = deg - a_deg;
                out.coeffs[slot] = &out.coeffs[slot] + &(c * v);
            }
        }
    }
    out
}

/// Dense coefficients of (ca*a + cb*b), indexed by a-degree.
fn linear_form(ca: i64, cb: i64) -> Vec<Rat> {
    vec![Rat::from_int(cb), Rat::from_int(ca)]
}

/// Dense polynomial product, coefficients indexed by a-degree.
fn poly_mul(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); x.len() + y.len() - 1];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                out[i + j] = &out[i + j] + &(xi * yj);
            }
        }
    }
    out
}

fn power_table(base: &[Rat], up_to: usize) -> Vec<Vec<Rat>> {
    let mut pows = Vec::with_capacity(up_to + 1);
    pows.push(vec![Rat::one()]);
    for _ in 0..up_to {
        let next = poly_mul(pows.last().unwrap(), base);
        pows.push(next);
    }
    pows
}

/// Matrix of the action of `gamma` on the descending-a coordinate basis.
fn action_matrix(gamma: &Sl2Element, degree: usize) -> QMat {
    let n = degree + 1;
    let mut m = QMat::zero(n, n);
    for j in 0..n {
        let img = act(gamma, &SymPower::monomial(degree, degree - j, Rat::one()));
        for i in 0..n {
            m.set(i, j, img.coords()[i].clone());
        }
    }
    m
}

/// Canonical basis of the cuspidal cocycle space in S^{2n}H: the kernel of
/// both 1 + S and 1 + U + U^2, with U and U^2 formed at the matrix level.
pub fn cuspidal_cocycles(two_n: usize) -> Result<Vec<SymPower>, PeriodError> {
    if two_n % 2 != 0 {
        return Err(PeriodError::OddDegree(two_n));
    }
    let n = two_n + 1;
    let id = QMat::identity(n);
    let rho_s = action_matrix(&Sl2Element::s(), two_n);
    let u = Sl2Element::u();
    let rho_u = action_matrix(&u, two_n);
    let rho_u2 = action_matrix(&u.mul(&u), two_n);
    // Stack the two conditions into one system.
    let mut sys = QMat::zero(2 * n, n);
    for i in 0..n {
        for j in 0..n {
            sys.set(i, j, id.get(i, j) + rho_s.get(i, j));
            sys.set(n + i, j, id.get(i, j) + rho_u.get(i, j) + rho_u2.get(i, j));
        }
    }
    let mut echelon = IntRowSpace::empty(n);
    for v in sys.kernel() {
        echelon.insert_rat(&v);
    }
    Ok(rows_to_sympowers(two_n, &echelon))
}

fn rows_to_sympowers(degree: usize, rows: &IntRowSpace) -> Vec<SymPower> {
    rows.rows_rat()
        .into_iter()
        .map(|coeffs| SymPower::from_coords(degree, coeffs))
        .collect()
}

/// Split a Frobenius-stable span into its plus and minus eigenspaces. The
/// plus part is the even-a-degree span, the minus part the odd one.
pub fn frobenius_split(basis: &[SymPower]) -> Result<(Vec<SymPower>, Vec<SymPower>), PeriodError> {
    if basis.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let degree = basis[0].degree();
    let n = degree + 1;
    let mut whole = IntRowSpace::empty(n);
    let mut plus = IntRowSpace::empty(n);
    let mut minus = IntRowSpace::empty(n);
    let half = Rat::new(1, 2).unwrap();
    for v in basis {
        assert_eq!(v.degree(), degree, "degree mismatch");
        whole.insert_rat(v.coords());
        let f = v.frobenius();
        plus.insert_rat(v.add(&f).scale(&half).coords());
        minus.insert_rat(v.sub(&f).scale(&half).coords());
    }
    if plus.rank() + minus.rank() != whole.rank()
        || !plus.is_subspace_of(&whole)
        || !minus.is_subspace_of(&whole)
    {
        return Err(PeriodError::NotFrobeniusStable);
    }
    Ok((
        rows_to_sympowers(degree, &plus),
        rows_to_sympowers(degree, &minus),
    ))
}

/// The unique cuspidal coboundary b^{2n} - a^{2n}, with its membership in
/// the cocycle space checked.
pub fn coboundary(two_n: usize) -> Result<SymPower, PeriodError> {
    if two_n % 2 != 0 {
        return Err(PeriodError::OddDegree(two_n));
    }
    if two_n < 2 {
        return Err(PeriodError::DegreeTooSmall(two_n));
    }
    let mut p = SymPower::monomial(two_n, 0, Rat::one());
    p = p.sub(&SymPower::monomial(two_n, two_n, Rat::one()));
    let mut span = IntRowSpace::empty(two_n + 1);
    for v in cuspidal_cocycles(two_n)? {
        span.insert_rat(v.coords());
    }
    if !span.contains_rat(p.coords()) {
        return Err(PeriodError::CoboundaryNotCocycle);
    }
    Ok(p)
}

/// Plus-part cocycles with vanishing endpoint coefficients (no a^{2n} or
/// b^{2n} monomial): one line per cusp form of weight 2n+2, the even period
/// polynomial normalized modulo the coboundary.
pub fn even_cuspidal_families(two_n: usize) -> Result<Vec<SymPower>, PeriodError> {
    let (plus, _) = frobenius_split(&cuspidal_cocycles(two_n)?)?;
    let n = two_n + 1;
    let mut plus_rows = IntRowSpace::empty(n);
    for v in &plus {
        plus_rows.insert_rat(v.coords());
    }
    // Coordinate subspace of polynomials with zero endpoint coefficients.
    let mut interior = IntRowSpace::empty(n);
    for k in 1..n.saturating_sub(1) {
        let mut e = vec![BigInt::from(0); n];
        e[k] = BigInt::from(1);
        interior.insert(e);
    }
    Ok(rows_to_sympowers(two_n, &plus_rows.intersect(&interior)))
}

/// Relation coefficient family read off a cocycle: the monomial c_A a^A b^B
/// contributes c at index a = (A+d-2)/2, so the family is indexed by
/// a + b = N + d - 2. Families satisfy c_a + (-1)^d c_b = 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeffFamily {
    /// Relation depth-degree.
    pub d: usize,
    /// Common value of a + b over the family's index pairs.
    pub sum: usize,
    /// Coefficients indexed by a = 0..=sum.
    pub c: Vec<Rat>,
}

impl CoeffFamily {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rat::is_zero)
    }

    /// The sign law c_a + (-1)^d c_b = 0 tying mirrored indices.
    pub fn sign_law_holds(&self) -> bool {
        (0..=self.sum).all(|a| {
            let twisted = if self.d % 2 == 0 {
                self.c[self.sum - a].clone()
            } else {
                -self.c[self.sum - a].clone()
            };
            &self.c[a] + &twisted == Rat::zero()
        })
    }
}

pub fn relation_coeffs(two_n: usize, d: usize, r: &SymPower) -> Result<CoeffFamily, PeriodError> {
    if two_n % 2 != 0 {
        return Err(PeriodError::OddDegree(two_n));
    }
    assert_eq!(r.degree(), two_n, "cocycle degree mismatch");
    assert!(d >= 2, "relations start at depth-degree two");
    let big_n = two_n / 2;
    let sum = big_n + d - 2;
    let mut c = vec![Rat::zero(); sum + 1];
    for a_deg in 0..=two_n {
        let coeff = r.coeff(a_deg);
        if coeff.is_zero() {
            continue;
        }
        if a_deg % 2 != d % 2 {
            return Err(PeriodError::ParitySupport(a_deg, two_n - a_deg, d));
        }
        c[(a_deg + d - 2) / 2] = coeff.clone();
    }
    Ok(CoeffFamily { d, sum, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::dim_cusp_forms;
    use proptest::prelude::*;

    fn mono(two_n: usize, a_deg: usize) -> SymPower {
        SymPower::monomial(two_n, a_deg, Rat::one())
    }

    #[test]
    fn action_on_generators_matches_convention() {
        // S swaps the letters with one sign: a -> -b, b -> a.
        let a = mono(1, 1);
        let b = mono(1, 0);
        assert_eq!(act(&Sl2Element::s(), &a), b.neg());
        assert_eq!(act(&Sl2Element::s(), &b), a);

        // T is a shear: a -> a, b -> -a + b.
        assert_eq!(act(&Sl2Element::t(), &a), a);
        assert_eq!(act(&Sl2Element::t(), &b), b.sub(&a));

        let p = mono(4, 3).scale(&Rat::new(5, 3).unwrap());
        assert_eq!(act(&Sl2Element::identity(), &p), p);
        assert_eq!(act(&Sl2Element::identity().neg(), &p), p);
    }

    #[test]
    fn s_squared_and_u_cubed_act_trivially() {
        let u = Sl2Element::u();
        assert_eq!(u.pow(3), Sl2Element::identity().neg());
        for two_n in [2usize, 6, 12] {
            for a_deg in 0..=two_n {
                let p = mono(two_n, a_deg);
                let s2 = act(&Sl2Element::s(), &act(&Sl2Element::s(), &p));
                assert_eq!(s2, p);
                let u3 = act(&u, &act(&u, &act(&u, &p)));
                assert_eq!(u3, p);
            }
        }
    }

    fn arb_sl2() -> impl Strategy<Value = Sl2Element> {
        proptest::collection::vec(0..2usize, 0..6).prop_map(|word| {
            let mut g = Sl2Element::identity();
            for step in word {
                g = g.mul(&if step == 0 {
                    Sl2Element::s()
                } else {
                    Sl2Element::t()
                });
            }
            g
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn action_is_multiplicative(
            g in arb_sl2(),
            h in arb_sl2(),
            coeffs in proptest::collection::vec(-5i64..=5, 13),
        ) {
            let p = SymPower::from_coords(
                12,
                coeffs.into_iter().map(Rat::from).collect(),
            );
            let lhs = act(&g.mul(&h), &p);
            let rhs = act(&g, &act(&h, &p));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cocycle_dimensions_match_the_cusp_form_count() {
        assert!(cuspidal_cocycles(0).unwrap().is_empty());
        for n in 1..=12usize {
            let two_n = 2 * n;
            let basis = cuspidal_cocycles(two_n).unwrap();
            let cusp = dim_cusp_forms(two_n as u64 + 2).unwrap() as usize;
            assert_eq!(basis.len(), 2 * cusp + 1, "2n = {}", two_n);
        }
    }

    #[test]
    fn weight_four_cocycles_are_the_coboundary_line() {
        let basis = cuspidal_cocycles(2).unwrap();
        assert_eq!(basis.len(), 1);
        let cob = coboundary(2).unwrap();
        assert_eq!(cob.coeff(0), &Rat::one());
        assert_eq!(cob.coeff(2), &-Rat::one());
        assert_eq!(basis[0], cob.neg());
    }

    #[test]
    fn coboundary_is_cuspidal_and_even() {
        for two_n in [2usize, 10, 16] {
            let cob = coboundary(two_n).unwrap();
            // Vanishing at T is the cuspidality of the reconstruction.
            let at_t = act(&Sl2Element::t(), &mono(two_n, two_n)).sub(&mono(two_n, two_n));
            assert!(at_t.is_zero());
            assert_eq!(cob.frobenius(), cob);
        }
        assert!(matches!(coboundary(0), Err(PeriodError::DegreeTooSmall(0))));
    }

    #[test]
    fn frobenius_split_at_weight_twelve() {
        let basis = cuspidal_cocycles(10).unwrap();
        assert_eq!(basis.len(), 3);
        let (plus, minus) = frobenius_split(&basis).unwrap();
        assert_eq!((plus.len(), minus.len()), (2, 1));

        // The minus line is the odd period polynomial of the weight-12
        // cusp form, coefficient pattern 4, -25, 42, -25, 4.
        let odd = &minus[0];
        let c = relation_coeffs(10, 3, odd).unwrap();
        assert_eq!(c.sum, 6);
        let expect: Vec<i64> = vec![0, 4, -25, 42, -25, 4, 0];
        assert_eq!(c.c, expect.into_iter().map(Rat::from).collect::<Vec<_>>());
        assert!(c.sign_law_holds());
    }

    #[test]
    fn frobenius_rejects_unstable_spans() {
        let v = mono(2, 2).add(&mono(2, 1));
        assert!(matches!(
            frobenius_split(&[v]),
            Err(PeriodError::NotFrobeniusStable)
        ));
    }

    #[test]
    fn even_family_at_weight_twelve() {
        let lines = even_cuspidal_families(10).unwrap();
        assert_eq!(lines.len(), 1);
        let c = relation_coeffs(10, 2, &lines[0]).unwrap();
        assert_eq!(c.sum, 5);
        let expect: Vec<i64> = vec![0, -1, 3, -3, 1, 0];
        assert_eq!(c.c, expect.into_iter().map(Rat::from).collect::<Vec<_>>());
        assert!(c.sign_law_holds());
    }

    #[test]
    fn coboundary_family_sits_on_the_endpoints() {
        let c = relation_coeffs(10, 2, &coboundary(10).unwrap()).unwrap();
        assert_eq!(c.sum, 5);
        let expect: Vec<i64> = vec![1, 0, 0, 0, 0, -1];
        assert_eq!(c.c, expect.into_iter().map(Rat::from).collect::<Vec<_>>());
        assert!(c.sign_law_holds());
    }

    #[test]
    fn parity_support_is_enforced() {
        let bad = mono(10, 3);
        assert!(matches!(
            relation_coeffs(10, 2, &bad),
            Err(PeriodError::ParitySupport(3, 7, 2))
        ));
    }

    #[test]
    fn serialization_shape() {
        let p =
            SymPower::monomial(10, 9, Rat::from(4)).sub(&SymPower::monomial(10, 7, Rat::from(25)));
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            "[{\"monomial\":\"a^9 b^1\",\"coeff\":\"4\"},{\"monomial\":\"a^7 b^3\",\"coeff\":\"-25\"}]"
        );
        assert_eq!(format!("{}", p), "4*a^9*b^1 - 25*a^7*b^3");
    }
}
