//! Free Lie algebras on two letters: packed words, noncommutative
//! polynomials, Lyndon bases and Lie elements.

mod element;
mod lyndon;
mod ncpoly;
mod word;

pub use element::{coordinates, dynkin_project, is_lie, parse_lie_expr, LieElement};
pub use lyndon::{
    expand_bracketing, lie_coords, lyndon_words, nc_from_coords, standard_factorization, witt_dim,
    witt_dim_total, FreeLieError,
};
pub use ncpoly::NcPoly;
pub use word::{Alphabet, MultiDegree, Word, WordError, MAX_WORD_LEN};

pub(crate) use lyndon::{cache_cap, moebius};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use proptest::prelude::*;

    /// Every Lyndon basis vector round-trips through coordinates, for all
    /// multidegrees of total degree at most `n_max`.
    #[test]
    fn lyndon_roundtrip_through_coordinates() {
        for n in 1..=10usize {
            for n0 in 0..=n {
                let mu = MultiDegree(n0, n - n0);
                let basis = lyndon_words(mu);
                for (i, w) in basis.iter().enumerate() {
                    let p = expand_bracketing(w);
                    let coords = lie_coords(mu, &p).unwrap();
                    for (j, c) in coords.iter().enumerate() {
                        assert_eq!(*c == Rat::one(), i == j, "basis vector {w:?}");
                        assert!(c.is_zero() || i == j);
                    }
                }
            }
        }
    }

    /// The left-normed bracketing map multiplies each expanded Lyndon
    /// bracket by its degree.
    #[test]
    fn dynkin_scales_lie_elements_by_degree() {
        for n in 1..=9usize {
            for n0 in 0..=n {
                let mu = MultiDegree(n0, n - n0);
                for w in lyndon_words(mu).iter() {
                    let p = expand_bracketing(w);
                    assert_eq!(p.dynkin(), p.scale(&Rat::from_int(n as i64)));
                }
            }
        }
    }

    fn arb_element(max_deg: usize) -> impl Strategy<Value = LieElement> {
        // Random small bracket expressions over {A, T}.
        let leaf = prop_oneof![
            Just(LieElement::generator(Alphabet::AT, 0)),
            Just(LieElement::generator(Alphabet::AT, 1)),
        ];
        leaf.prop_recursive(4, 16, 2, move |inner| {
            (inner.clone(), inner, -3i64..=3).prop_map(move |(x, y, c)| {
                let b = x.bracket(&y).unwrap().truncate(max_deg);
                b.add(&x.scale(&Rat::from_int(c)))
                    .unwrap()
                    .truncate(max_deg)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bracket_is_antisymmetric(x in arb_element(10), y in arb_element(10)) {
            let xy = x.bracket(&y).unwrap();
            let yx = y.bracket(&x).unwrap();
            prop_assert_eq!(xy, yx.neg());
        }

        #[test]
        fn jacobi_identity(x in arb_element(6), y in arb_element(6), z in arb_element(6)) {
            let s = x.bracket(&y.bracket(&z).unwrap()).unwrap()
                .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap()).unwrap()
                .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap()).unwrap();
            prop_assert!(s.is_zero());
        }

        #[test]
        fn brackets_stay_in_the_lie_algebra(x in arb_element(8), y in arb_element(8)) {
            let b = x.bracket(&y).unwrap();
            prop_assert!(is_lie(&b.nc()));
            // Round-trip through the checked constructor.
            let back = LieElement::from_ncpoly(Alphabet::AT, &b.nc()).unwrap();
            prop_assert_eq!(back, b);
        }
    }
}
