use crate::algebra::Prime;
use crate::error::{Error, Result};

/// Parameters shared by every computation on a quadric `Q_n ⊂ P^N`:
/// the quadric dimension `n`, `N = n + 1`, the characteristic `p` and the
/// number `s` of Frobenius iterations, `q = p^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadricContext {
    n: u32,
    p: Prime,
    s: u32,
    q: u64,
}

impl QuadricContext {
    pub fn new(n: u32, p: u32, s: u32) -> Result<Self> {
        let p = Prime::new(p)?;
        Self::with_prime(n, p, s)
    }

    pub fn with_prime(n: u32, p: Prime, s: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("quadric dimension n = {n} must be at least 2")));
        }
        let q = (p.get() as u64)
            .checked_pow(s)
            .filter(|&q| q < 1 << 31)
            .ok_or_else(|| Error::InvalidParameter(format!("q = {p}^{s} is too large")))?;
        Ok(QuadricContext { n, p, s, q })
    }

    /// Same quadric and prime, different number of Frobenius iterations.
    pub fn with_s(&self, s: u32) -> Result<Self> {
        Self::with_prime(self.n, self.p, s)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of projective coordinates minus one: `N = n + 1`.
    pub fn big_n(&self) -> u32 {
        self.n + 1
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `(M - 1)(q - 1)/2`.
    pub fn d_of(&self, m: u32) -> i64 {
        d_index(m, self.q)
    }

    /// The pivot degree `n(q - 1)/2` around which the decompositions are
    /// centred.
    pub fn d_pivot(&self) -> i64 {
        self.d_of(self.big_n())
    }

    pub(crate) fn require_single_frobenius(&self) -> Result<()> {
        if self.s != 1 {
            return Err(Error::RequiresSingleFrobenius(self.s));
        }
        Ok(())
    }

    pub(crate) fn require_n_at_least_3(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::QuadricDimension(self.n));
        }
        Ok(())
    }
}

/// `(M - 1)(q - 1)/2` for an odd `q`.
pub fn d_index(m: u32, q: u64) -> i64 {
    (m as i64 - 1) * (q as i64 - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let ctx = QuadricContext::new(3, 3, 1).unwrap();
        assert_eq!(ctx.big_n(), 4);
        assert_eq!(ctx.d_pivot(), 3);
        assert_eq!(ctx.d_of(3), 2);
        let ctx = QuadricContext::new(4, 3, 2).unwrap();
        assert_eq!(ctx.q(), 9);
        assert_eq!(ctx.d_pivot(), 16);
        assert_eq!(ctx.d_of(4), 12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(QuadricContext::new(3, 2, 1), Err(Error::CharacteristicTwo));
        assert_eq!(QuadricContext::new(3, 15, 1), Err(Error::NotPrime(15)));
        assert!(QuadricContext::new(1, 3, 1).is_err());
        assert!(QuadricContext::new(3, 3, 40).is_err());
    }
}
