use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Binomial coefficient with the conventions used throughout the crate.
///
/// * `0 <= b <= a`: the usual value.
/// * `b < 0`, or `0 <= a < b`: zero.
/// * `a < 0 <= b`: the generalized value `(-1)^b * C(b - a - 1, b)`, which
///   is what the series `(1 + x)^a` has as its `x^b` coefficient.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 {
        return BigInt::zero();
    }
    if a < 0 {
        let v = binomial_nonneg((b - a - 1) as u64, b as u64);
        return if b % 2 == 0 { v } else { -v };
    }
    if a < b {
        return BigInt::zero();
    }
    binomial_nonneg(a as u64, b as u64)
}

fn binomial_nonneg(a: u64, b: u64) -> BigInt {
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `2^k` as a big integer.
pub fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn standard_and_boundary_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(1, 3), BigInt::zero());
        assert_eq!(binomial(4, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
    }

    #[test]
    fn generalized_negative_top() {
        // (1 + x^2)^{-e}: coefficient of x^{2j} is (-1)^j C(e + j - 1, j)
        let (e, j) = (2i64, 2i64);
        assert_eq!(binomial(-e, j), BigInt::from(3));
        assert_eq!(binomial(-e, j), binomial(e + j - 1, j));
        assert_eq!(binomial(-3, 1), BigInt::from(-3));
        assert_eq!(binomial(-1, 5), BigInt::from(-1));
    }

    #[test]
    fn negative_binomial_series_inverts() {
        // (1+x)^e * (1+x)^{-e} = 1, coefficientwise
        for e in 1..6i64 {
            for k in 0..10i64 {
                let s: BigInt = (0..=k).map(|i| binomial(e, i) * binomial(-e, k - i)).sum();
                let expected = if k == 0 { BigInt::one() } else { BigInt::zero() };
                assert_eq!(s, expected, "e={e} k={k}");
            }
        }
    }

    proptest! {
        #[test]
        fn hockey_stick(a in 0i64..40, k in 0i64..40) {
            let lhs: BigInt = (k..=a).map(|j| binomial(j, k)).sum();
            prop_assert_eq!(lhs, binomial(a + 1, k + 1));
        }

        #[test]
        fn pascal(a in 1i64..50, b in 1i64..50) {
            prop_assert_eq!(binomial(a, b), binomial(a - 1, b - 1) + binomial(a - 1, b));
        }
    }
}
