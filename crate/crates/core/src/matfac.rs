//! Matrix factorizations of the split quadratic forms
//! `x_0^2 + x_1 x_2 + ... + x_{2m-1} x_{2m}` and
//! `x_1 x_2 + ... + x_{2m+1} x_{2m+2}`, built by the usual block recursion.
//! These present the spinor bundles; only their sizes and twists are
//! consumed elsewhere.

use std::fmt;

use crate::algebra::{Polynomial, Prime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Base `φ_0 = ψ_0 = (x_0)`.
    Standard,
    /// Base `φ'_0 = (x_1)`, `ψ'_0 = (x_2)`.
    Primed,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Primed => "primed",
        })
    }
}

/// Square matrix of polynomials, row-major.
pub type PolyMatrix = Vec<Vec<Polynomial>>;

/// A pair `(φ, ψ)` with `φψ = ψφ = form · I`.
#[derive(Debug, Clone, PartialEq)]
pub struct MFPair {
    pub m: u32,
    pub variant: Variant,
    pub phi: PolyMatrix,
    pub psi: PolyMatrix,
    pub form: Polynomial,
}

impl MFPair {
    pub fn size(&self) -> usize {
        self.phi.len()
    }

    pub fn nvars(&self) -> usize {
        self.form.nvars()
    }

    pub fn modulus(&self) -> Prime {
        self.form.modulus()
    }
}

/// Number of variables `x_0, ..., x_k` touched by `build(m, variant)`.
pub fn nvars_for(m: u32, variant: Variant) -> usize {
    match variant {
        Variant::Standard => 2 * m as usize + 1,
        Variant::Primed => 2 * m as usize + 3,
    }
}

/// Builds `(φ_m, ψ_m)` or `(φ'_m, ψ'_m)`. Matrices have size `2^m`.
///
/// The step `m -> m + 1` is
/// `φ_{m+1} = [[φ_m, a I], [b I, -ψ_m]]`, `ψ_{m+1} = [[ψ_m, a I], [b I, -φ_m]]`
/// with `(a, b) = (x_{2m+1}, x_{2m+2})` in the standard variant and
/// `(x_{2m+3}, x_{2m+4})` in the primed one.
pub fn build(m: u32, variant: Variant, p: Prime) -> Result<MFPair> {
    if m > 12 {
        return Err(Error::OutOfRange(format!("m = {m} gives matrices of size 2^{m}")));
    }
    let nvars = nvars_for(m, variant);
    let x = |i: usize| Polynomial::var(nvars, p, i);
    let (mut phi, mut psi, mut form, offset) = match variant {
        Variant::Standard => (vec![vec![x(0)]], vec![vec![x(0)]], &x(0) * &x(0), 1),
        Variant::Primed => (vec![vec![x(1)]], vec![vec![x(2)]], &x(1) * &x(2), 3),
    };
    for k in 0..m as usize {
        let a = x(offset + 2 * k);
        let b = x(offset + 2 * k + 1);
        let next_phi = block(&phi, &psi, &a, &b, nvars, p);
        let next_psi = block(&psi, &phi, &a, &b, nvars, p);
        form = &form + &(&a * &b);
        phi = next_phi;
        psi = next_psi;
    }
    Ok(MFPair { m, variant, phi, psi, form })
}

/// `[[top_left, a I], [b I, -bottom]]`
fn block(top_left: &PolyMatrix, bottom: &PolyMatrix, a: &Polynomial, b: &Polynomial, nvars: usize, p: Prime) -> PolyMatrix {
    let n = top_left.len();
    let zero = Polynomial::zero(nvars, p);
    let mut out = vec![vec![zero; 2 * n]; 2 * n];
    for r in 0..n {
        for c in 0..n {
            out[r][c] = top_left[r][c].clone();
            out[n + r][n + c] = -&bottom[r][c];
        }
        out[r][n + r] = a.clone();
        out[n + r][r] = b.clone();
    }
    out
}

pub fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
    let inner = b.len();
    if a.iter().any(|row| row.len() != inner) {
        return Err(Error::DimensionMismatch { left: a.first().map_or(0, Vec::len), right: inner });
    }
    let cols = b.first().map_or(0, Vec::len);
    let template = a.first().and_then(|r| r.first()).or_else(|| b.first().and_then(|r| r.first()));
    let Some(template) = template else {
        return Ok(Vec::new());
    };
    let zero = Polynomial::zero(template.nvars(), template.modulus());
    let mut out = vec![vec![zero; cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(aik * &b[k][j]);
                }
            }
        }
    }
    Ok(out)
}

fn is_scalar_multiple(m: &PolyMatrix, f: &Polynomial) -> bool {
    m.iter().enumerate().all(|(r, row)| {
        row.iter().enumerate().all(|(c, e)| if r == c { e == f } else { e.is_zero() })
    })
}

/// Whether `φψ = ψφ = form · I` holds exactly.
pub fn verify(pair: &MFPair) -> bool {
    let n = pair.size();
    if pair.psi.len() != n || pair.phi.iter().chain(&pair.psi).any(|r| r.len() != n) {
        return false;
    }
    let (Ok(left), Ok(right)) = (mat_mul(&pair.phi, &pair.psi), mat_mul(&pair.psi, &pair.phi)) else {
        return false;
    };
    is_scalar_multiple(&left, &pair.form) && is_scalar_multiple(&right, &pair.form)
}

/// Every entry is zero or `±x_i` for a single variable.
pub fn entries_are_signed_variables(pair: &MFPair) -> bool {
    pair.phi.iter().chain(&pair.psi).flatten().all(|e| {
        e.is_zero()
            || (e.len() == 1
                && e.terms().all(|(m, c)| m.degree() == 1 && (c == 1 || c == pair.modulus().get() - 1)))
    })
}

/// Substitutes `x_i -> x_i^q` in every entry and in the form.
pub fn frobenius_pullback(pair: &MFPair, q: u32) -> MFPair {
    let pull = |m: &PolyMatrix| -> PolyMatrix {
        m.iter().map(|row| row.iter().map(|e| e.substitute_power(q)).collect()).collect()
    };
    MFPair {
        m: pair.m,
        variant: pair.variant,
        phi: pull(&pair.phi),
        psi: pull(&pair.psi),
        form: pair.form.substitute_power(q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn base_and_first_step() {
        let p = f3();
        let b0 = build(0, Variant::Standard, p).unwrap();
        assert_eq!(b0.size(), 1);
        assert_eq!(b0.form, Polynomial::var_pow(1, p, 0, 2));
        assert!(verify(&b0));

        let b1 = build(1, Variant::Standard, p).unwrap();
        let x = |i| Polynomial::var(3, p, i);
        assert_eq!(b1.phi, vec![vec![x(0), x(1)], vec![x(2), -&x(0)]]);
        // direct 2x2 product
        let expected = &(&x(0) * &x(0)) + &(&x(1) * &x(2));
        let prod = mat_mul(&b1.phi, &b1.psi).unwrap();
        assert_eq!(prod[0][0], expected);
        assert_eq!(prod[1][1], expected);
        assert!(prod[0][1].is_zero() && prod[1][0].is_zero());
    }

    #[test]
    fn primed_first_step() {
        let p = Prime::new(5).unwrap();
        let b = build(1, Variant::Primed, p).unwrap();
        let x = |i| Polynomial::var(5, p, i);
        assert_eq!(b.size(), 2);
        assert_eq!(b.form, &(&x(1) * &x(2)) + &(&x(3) * &x(4)));
        assert!(verify(&b));
    }

    #[test]
    fn all_sizes_verify() {
        let p = Prime::new(7).unwrap();
        for variant in [Variant::Standard, Variant::Primed] {
            let mut prev = 0;
            for m in 0..=6 {
                let pair = build(m, variant, p).unwrap();
                assert_eq!(pair.size(), 1 << m);
                if m > 0 {
                    assert_eq!(pair.size(), 2 * prev);
                }
                prev = pair.size();
                assert!(entries_are_signed_variables(&pair));
                assert!(verify(&pair), "{variant} m={m}");
            }
        }
    }

    #[test]
    fn corrupted_entry_fails() {
        let p = f3();
        let mut pair = build(2, Variant::Standard, p).unwrap();
        pair.phi[1][2] = &pair.phi[1][2] + &Polynomial::var(5, p, 3);
        assert!(!verify(&pair));
        let mut pair = build(1, Variant::Primed, p).unwrap();
        pair.psi[0][0] = Polynomial::zero(5, p);
        assert!(!verify(&pair));
    }

    #[test]
    fn pullback() {
        let p = f3();
        let pair = build(1, Variant::Standard, p).unwrap();
        assert_eq!(frobenius_pullback(&pair, 1), pair);
        let pulled = frobenius_pullback(&pair, 3);
        let x = |i, e| Polynomial::var_pow(3, p, i, e);
        assert_eq!(pulled.form, &x(0, 6) + &(&x(1, 3) * &x(2, 3)));
        // in characteristic 3 cubing is additive, so compare over F_5
        let f5 = Prime::new(5).unwrap();
        let pair5 = build(1, Variant::Standard, f5).unwrap();
        assert_ne!(frobenius_pullback(&pair5, 3).form, pair5.form.pow(3));
        assert_eq!(pulled.form, pair.form.pow(3));
        assert!(verify(&pulled));
        for m in 0..=4 {
            for variant in [Variant::Standard, Variant::Primed] {
                for q in [3, 9] {
                    assert!(verify(&frobenius_pullback(&build(m, variant, p).unwrap(), q)));
                }
            }
        }
    }
}
