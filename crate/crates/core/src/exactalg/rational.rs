use num_bigint::BigInt;
use num_integer::Integer;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// `q - floor(q)`, the fractional part, in `[0, 1)`.
pub fn frac_part(q: &Rational) -> Rational {
    let floor = q.numer().div_floor(q.denom());
    q - Rational::from_integer(floor)
}

#[allow(dead_code)]
pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    #[test]
    fn fractional_part_examples() {
        assert_eq!(frac_part(&rat(-1, 6)), rat(5, 6));
        assert!(frac_part(&Rational::zero()).is_zero());
        assert_eq!(frac_part(&rat(7, 3)), rat(1, 3));
        assert_eq!(frac_part(&rat(-6, 3)), Rational::zero());
    }

    proptest! {
        #[test]
        fn frac_part_is_idempotent_and_shift_invariant(n in -1000i64..1000, d in 1i64..50, k in -20i64..20) {
            let q = rat(n, d);
            let f = frac_part(&q);
            prop_assert!(f >= Rational::zero() && f < rat(1, 1));
            prop_assert_eq!(frac_part(&f), f.clone());
            prop_assert_eq!(frac_part(&(q.clone() + rat(k, 1))), f.clone());
            let floor = q.clone() - f;
            prop_assert!(floor.is_integer());
        }
    }
}
