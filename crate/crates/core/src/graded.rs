//! Degree-d slices of ideals, quotients and colon ideals in
//! `S = F_p[x_0, ..., x_N]`, computed by linear algebra on Macaulay
//! matrices.
//!
//! Two constructions are used. [`ideal_piece`] builds the full Macaulay
//! matrix over every monomial of degree `d`. [`quotient_dim`] and
//! [`colon_piece`] first discard monomials that lie in the ideal generated
//! by the monomial generators (their residues are zero) and run the
//! elimination only on the remaining "standard" columns. Both compute the
//! same spaces; the second is what makes the Hilbert-function oracles
//! feasible for six variables.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::algebra::{binomial, FpMatrix, Monomial, Polynomial, Prime};
use crate::error::{Error, Result};

/// Column ceiling applied unless the caller overrides it.
pub const DEFAULT_MAX_COLUMNS: usize = 20_000;

/// A subspace of `S_d`, stored as a reduced row-echelon basis against the
/// descending graded-lex monomial basis of `S_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPiece {
    degree: u32,
    ambient: Vec<Monomial>,
    basis: FpMatrix,
}

impl GradedPiece {
    fn from_rows(degree: u32, ambient: Vec<Monomial>, rows: FpMatrix) -> Self {
        GradedPiece { degree, ambient, basis: rows.reduce() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ambient(&self) -> &[Monomial] {
        &self.ambient
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.ambient.len() - self.dim()
    }

    /// Basis vectors as polynomials.
    pub fn polynomials(&self, nvars: usize) -> Vec<Polynomial> {
        let p = self.basis.modulus();
        (0..self.basis.rows())
            .map(|r| {
                let mut poly = Polynomial::zero(nvars, p);
                for (c, &v) in self.basis.row(r).iter().enumerate() {
                    poly.add_term(self.ambient[c].clone(), v);
                }
                poly
            })
            .collect()
    }

    pub fn contains(&self, other: &GradedPiece) -> Result<bool> {
        self.check_same_ambient(other)?;
        self.basis.subspace_contains(&other.basis)
    }

    pub fn same_subspace(&self, other: &GradedPiece) -> Result<bool> {
        self.check_same_ambient(other)?;
        // both bases are canonical reduced forms
        Ok(self.basis == other.basis)
    }

    fn check_same_ambient(&self, other: &GradedPiece) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                left: self.ambient.len(),
                right: other.ambient.len(),
            });
        }
        Ok(())
    }
}

fn homogeneous_degree(g: &Polynomial) -> Result<u32> {
    g.homogeneous_degree().ok_or(Error::NonHomogeneous)
}

fn check_generators(gens: &[Polynomial]) -> Result<(usize, Prime)> {
    let first = gens.first().ok_or_else(|| Error::InvalidParameter("empty generator list".into()))?;
    let (nvars, p) = (first.nvars(), first.modulus());
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::DimensionMismatch { left: nvars, right: g.nvars() });
        }
        if g.modulus() != p {
            return Err(Error::ModulusMismatch);
        }
        if !g.is_zero() {
            homogeneous_degree(g)?;
        }
    }
    Ok((nvars, p))
}

fn monomial_count(nvars: usize, d: u32) -> BigInt {
    binomial(d as i64 + nvars as i64 - 1, nvars as i64 - 1)
}

fn ambient_basis(nvars: usize, d: u32, max_columns: usize) -> Result<Vec<Monomial>> {
    let count = monomial_count(nvars, d);
    let fits = usize::try_from(&count).map(|c| c <= max_columns).unwrap_or(false);
    if !fits {
        return Err(Error::TooLarge {
            columns: usize::try_from(&count).unwrap_or(usize::MAX),
            limit: max_columns,
        });
    }
    Ok(Monomial::all_of_degree(nvars, d))
}

fn index_of(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// `(generators)_d`: the span of `m * g` over generators `g` and monomials
/// `m` of degree `d - deg g`. Generators of degree above `d` contribute
/// nothing; zero generators are ignored.
pub fn ideal_piece(generators: &[Polynomial], d: u32, max_columns: usize) -> Result<GradedPiece> {
    let (nvars, p) = check_generators(generators)?;
    let ambient = ambient_basis(nvars, d, max_columns)?;
    let index = index_of(&ambient);
    let mut rows = FpMatrix::zeros(0, ambient.len(), p);
    let mut buf = vec![0u32; ambient.len()];
    for g in generators.iter().filter(|g| !g.is_zero()) {
        let e = homogeneous_degree(g)?;
        if e > d {
            continue;
        }
        for m in Monomial::all_of_degree(nvars, d - e) {
            buf.iter_mut().for_each(|v| *v = 0);
            for (t, c) in g.terms() {
                buf[index[&t.mul(&m)]] = c;
            }
            rows.push_row(&buf);
        }
    }
    Ok(GradedPiece::from_rows(d, ambient, rows))
}

/// Standard monomials of degree `d` (not divisible by any monomial
/// generator) together with the relation matrix spanned by the
/// non-monomial generators on those columns.
struct StandardSlice {
    standard: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    relations: FpMatrix,
}

fn split_generators(generators: &[Polynomial]) -> Result<(Vec<Monomial>, Vec<(&Polynomial, u32)>)> {
    let mut monomials = Vec::new();
    let mut others = Vec::new();
    for g in generators.iter().filter(|g| !g.is_zero()) {
        let e = homogeneous_degree(g)?;
        if g.is_monomial() {
            let (m, _) = g.terms().next().expect("nonzero");
            monomials.push(m.clone());
        } else {
            others.push((g, e));
        }
    }
    Ok((monomials, others))
}

fn standard_monomials(nvars: usize, d: u32, killers: &[Monomial]) -> Vec<Monomial> {
    Monomial::all_of_degree(nvars, d)
        .into_iter()
        .filter(|m| !killers.iter().any(|k| k.divides(m)))
        .collect()
}

impl StandardSlice {
    fn new(generators: &[Polynomial], d: u32, max_columns: usize) -> Result<Self> {
        let (nvars, p) = check_generators(generators)?;
        let (killers, others) = split_generators(generators)?;
        let standard = standard_monomials(nvars, d, &killers);
        if standard.len() > max_columns {
            return Err(Error::TooLarge { columns: standard.len(), limit: max_columns });
        }
        let index = index_of(&standard);
        let mut relations = FpMatrix::zeros(0, standard.len(), p);
        let mut buf = vec![0u32; standard.len()];
        for (g, e) in others {
            if e > d {
                continue;
            }
            // multiples of non-standard monomials already vanish
            for m in standard_monomials(nvars, d - e, &killers) {
                buf.iter_mut().for_each(|v| *v = 0);
                let mut any = false;
                for (t, c) in g.terms() {
                    if let Some(&i) = index.get(&t.mul(&m)) {
                        buf[i] = c;
                        any = true;
                    }
                }
                if any {
                    relations.push_row(&buf);
                }
            }
        }
        Ok(StandardSlice { standard, index, relations })
    }
}

/// `dim S_d - dim (generators)_d`.
pub fn quotient_dim(generators: &[Polynomial], d: u32, max_columns: usize) -> Result<BigInt> {
    let slice = StandardSlice::new(generators, d, max_columns)?;
    Ok(BigInt::from(slice.standard.len() - slice.relations.rank()))
}

/// Degree-d slice of `S/(generators)` with a normal-form map onto a basis
/// of residue classes.
struct QuotientSlice {
    standard: StandardSlice,
    reduced: FpMatrix,
    pivots: Vec<usize>,
    /// standard-column index -> coordinate in the quotient basis
    free_coord: Vec<Option<usize>>,
    free_count: usize,
}

impl QuotientSlice {
    fn new(generators: &[Polynomial], d: u32, max_columns: usize) -> Result<Self> {
        let standard = StandardSlice::new(generators, d, max_columns)?;
        let reduced = standard.relations.reduce();
        let mut pivots = Vec::with_capacity(reduced.rows());
        for r in 0..reduced.rows() {
            let c = reduced.row(r).iter().position(|&v| v != 0).expect("reduced rows are nonzero");
            pivots.push(c);
        }
        let mut free_coord = vec![None; standard.standard.len()];
        let mut next = 0;
        let mut pi = pivots.iter().peekable();
        for (c, slot) in free_coord.iter_mut().enumerate() {
            if pi.peek() == Some(&&c) {
                pi.next();
            } else {
                *slot = Some(next);
                next += 1;
            }
        }
        Ok(QuotientSlice { standard, reduced, pivots, free_coord, free_count: next })
    }

    fn dim(&self) -> usize {
        self.free_count
    }

    /// Coordinates of the residue class of `f` (homogeneous of this degree).
    fn normal_form(&self, f: &Polynomial) -> Vec<u32> {
        let p = self.reduced.modulus();
        let mut v = vec![0u32; self.standard.standard.len()];
        for (m, c) in f.terms() {
            if let Some(&i) = self.standard.index.get(m) {
                v[i] = p.add(v[i], c);
            }
        }
        for (r, &pc) in self.pivots.iter().enumerate() {
            let a = v[pc];
            if a == 0 {
                continue;
            }
            let f = p.neg(a);
            for (x, &y) in v[pc..].iter_mut().zip(&self.reduced.row(r)[pc..]) {
                if y != 0 {
                    *x = p.add(*x, p.mul(f, y));
                }
            }
        }
        let mut out = vec![0u32; self.free_count];
        for (i, coord) in self.free_coord.iter().enumerate() {
            if let Some(j) = coord {
                out[*j] = v[i];
            }
        }
        out
    }
}

/// `(generators : g)_d = { h in S_d : g h in (generators) }`, the kernel of
/// multiplication by `g` from `S_d` to `(S/(generators))_{d + deg g}`.
pub fn colon_piece(
    generators: &[Polynomial],
    g: &Polynomial,
    d: u32,
    max_columns: usize,
) -> Result<GradedPiece> {
    let (nvars, p) = check_generators(generators)?;
    if g.nvars() != nvars {
        return Err(Error::DimensionMismatch { left: nvars, right: g.nvars() });
    }
    let e = homogeneous_degree(g)?;
    let ambient = ambient_basis(nvars, d, max_columns)?;
    let target = QuotientSlice::new(generators, d + e, max_columns)?;
    let mut images = FpMatrix::zeros(0, target.dim(), p);
    for m in &ambient {
        images.push_row(&target.normal_form(&g.mul_monomial(m)));
    }
    // left kernel of the image matrix
    let kernel = images.transpose().kernel_basis().transpose();
    Ok(GradedPiece::from_rows(d, ambient, kernel))
}

/// Rank of multiplication by `g` from `(S/I)_d` to `(S/I)_{d + deg g}`.
pub fn multiplication_rank(
    generators: &[Polynomial],
    g: &Polynomial,
    d: u32,
    max_columns: usize,
) -> Result<usize> {
    let colon = colon_piece(generators, g, d, max_columns)?;
    Ok(colon.codim())
}

fn power_generators(nvars: usize, p: Prime, exponent: u32) -> Vec<Polynomial> {
    (0..nvars).map(|i| Polynomial::var_pow(nvars, p, i, exponent)).collect()
}

fn check_diff_range(p: Prime, big_n: u32, e: u32, d: u32) -> Result<()> {
    let bound = (big_n as u64 + 1) * (p.get() as u64 - 1) / 2;
    if e >= p.get() {
        return Err(Error::OutOfRange(format!("e = {e} must be below p = {p}")));
    }
    if d as u64 + e as u64 > bound {
        return Err(Error::OutOfRange(format!(
            "d + e = {} exceeds (N+1)(p-1)/2 = {bound}",
            d + e
        )));
    }
    Ok(())
}

/// The largest `d` allowed for a given `e` by the ideal-quotient
/// statements, or `None` when no degree is in range.
pub fn diff_max_degree(p: Prime, big_n: u32, e: u32) -> Option<u32> {
    let bound = (big_n as u64 + 1) * (p.get() as u64 - 1) / 2;
    (e < p.get() && (e as u64) <= bound).then(|| (bound - e as u64) as u32)
}

/// `((x_0^p, ..., x_N^p) : (sum x_i^2)^e)_d  ⊆  (x_0^p, ..., x_N^p, sum x_i^2)_d`.
pub fn verify_diff_new(p: Prime, big_n: u32, e: u32, d: u32, max_columns: usize) -> Result<bool> {
    check_diff_range(p, big_n, e, d)?;
    let nvars = big_n as usize + 1;
    let powers = power_generators(nvars, p, p.get());
    let f = Polynomial::sum_of_squares(nvars, p, 0..nvars);
    let colon = colon_piece(&powers, &f.pow(e), d, max_columns)?;
    let mut gens = powers;
    gens.push(f);
    let ideal = ideal_piece(&gens, d, max_columns)?;
    ideal.contains(&colon)
}

/// `((x_0^p, ..., x_N^p) : (sum x_i^2)^e)_d = (x_0^p, ..., x_N^p, (sum x_i^2)^(p-e))_d`
/// as subspaces.
pub fn verify_diff(p: Prime, big_n: u32, e: u32, d: u32, max_columns: usize) -> Result<bool> {
    check_diff_range(p, big_n, e, d)?;
    let nvars = big_n as usize + 1;
    let powers = power_generators(nvars, p, p.get());
    let f = Polynomial::sum_of_squares(nvars, p, 0..nvars);
    let colon = colon_piece(&powers, &f.pow(e), d, max_columns)?;
    let mut gens = powers;
    gens.push(f.pow(p.get() - e));
    let ideal = ideal_piece(&gens, d, max_columns)?;
    colon.same_subspace(&ideal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    const CAP: usize = DEFAULT_MAX_COLUMNS;

    #[test]
    fn ideal_piece_examples() {
        let f = p(3);
        let gens = vec![Polynomial::var(2, f, 0), Polynomial::var(2, f, 1)];
        assert_eq!(ideal_piece(&gens, 1, CAP).unwrap().dim(), 2);

        let q = Polynomial::sum_of_squares(2, f, 0..2);
        assert_eq!(ideal_piece(&[q], 2, CAP).unwrap().dim(), 1);
    }

    #[test]
    fn ideal_piece_matches_standard_monomial_count() {
        // I = (x0^3, x1^3, x0^2 + x1^2) over F_3 in degree 4. Oracle: every
        // degree-4 monomial x0^a x1^(4-a) has a or 4-a at least 3 except
        // x0^2 x1^2, and x0^2 x1^2 = x1^2 (x0^2 + x1^2) - x1^4, so S_4 ⊆ I.
        let f = p(3);
        let gens = vec![
            Polynomial::var_pow(2, f, 0, 3),
            Polynomial::var_pow(2, f, 1, 3),
            Polynomial::sum_of_squares(2, f, 0..2),
        ];
        let piece = ideal_piece(&gens, 4, CAP).unwrap();
        assert_eq!(piece.dim(), 5);
        assert_eq!(quotient_dim(&gens, 4, CAP).unwrap(), BigInt::from(5 - piece.dim()));
        // degree 2: only x0^2 + x1^2 lies in I, so the quotient is 2-dimensional
        assert_eq!(quotient_dim(&gens, 2, CAP).unwrap(), BigInt::from(2));
        assert_eq!(ideal_piece(&gens, 2, CAP).unwrap().dim(), 1);
    }

    #[test]
    fn quotient_dim_agrees_with_full_macaulay() {
        let f = p(3);
        let nvars = 4;
        let mut gens: Vec<Polynomial> =
            (1..nvars).map(|i| Polynomial::var_pow(nvars, f, i, 3)).collect();
        gens.push(Polynomial::sum_of_squares(nvars, f, 0..nvars));
        for d in 0..9 {
            let full = ideal_piece(&gens, d, CAP).unwrap();
            let q = quotient_dim(&gens, d, CAP).unwrap();
            assert_eq!(q, BigInt::from(full.codim()), "d = {d}");
        }
    }

    #[test]
    fn rejects_inhomogeneous() {
        let f = p(5);
        let g = Polynomial::from_terms(2, f, &[(1, vec![2, 0]), (1, vec![0, 1])]);
        assert_eq!(ideal_piece(&[g.clone()], 3, CAP), Err(Error::NonHomogeneous));
        let x = Polynomial::var(2, f, 0);
        assert_eq!(colon_piece(&[x], &g, 1, CAP).unwrap_err(), Error::NonHomogeneous);
    }

    #[test]
    fn column_cap() {
        let f = p(3);
        let g = Polynomial::var(6, f, 0);
        let err = ideal_piece(&[g], 30, 1000).unwrap_err();
        assert!(matches!(err, Error::TooLarge { limit: 1000, .. }));
    }

    #[test]
    fn colon_examples() {
        let f = p(3);
        let powers = vec![Polynomial::var_pow(2, f, 0, 3), Polynomial::var_pow(2, f, 1, 3)];
        let q = Polynomial::sum_of_squares(2, f, 0..2);
        // a x0 + b x1 times (x0^2 + x1^2) lands in (x0^3, x1^3) only for a = b = 0
        assert_eq!(colon_piece(&powers, &q, 1, CAP).unwrap().dim(), 0);

        let one = Polynomial::constant(2, f, 1);
        for d in 0..6 {
            let colon = colon_piece(&powers, &one, d, CAP).unwrap();
            let ideal = ideal_piece(&powers, d, CAP).unwrap();
            assert!(colon.same_subspace(&ideal).unwrap(), "d = {d}");
        }
    }

    #[test]
    fn ideal_inside_colon() {
        let f = p(5);
        let nvars = 3;
        let gens = vec![
            Polynomial::var_pow(nvars, f, 1, 5),
            Polynomial::var_pow(nvars, f, 2, 5),
            Polynomial::sum_of_squares(nvars, f, 0..nvars),
        ];
        let g = Polynomial::from_terms(nvars, f, &[(1, vec![1, 1, 0]), (2, vec![0, 0, 2])]);
        for d in 0..8 {
            let ideal = ideal_piece(&gens, d, CAP).unwrap();
            let colon = colon_piece(&gens, &g, d, CAP).unwrap();
            assert!(colon.contains(&ideal).unwrap(), "d = {d}");
        }
    }

    #[test]
    fn colon_by_frobenius_power_contains_it() {
        // x0^q lies in (I : x0^q) because x0^(2q) = (-sum_{i>=1} x_i^2)^q mod f
        // and the q-th power of that sum is a sum of x_i^(2q) in characteristic p.
        for (prime, q) in [(3u32, 3u32), (3, 9), (5, 5)] {
            let f = p(prime);
            let nvars = 3;
            let mut gens: Vec<Polynomial> =
                (1..nvars).map(|i| Polynomial::var_pow(nvars, f, i, q)).collect();
            gens.push(Polynomial::sum_of_squares(nvars, f, 0..nvars));
            let x0q = Polynomial::var_pow(nvars, f, 0, q);
            for d in q..q + 3 {
                let mut with_x0 = gens.clone();
                with_x0.push(x0q.clone());
                let lhs = ideal_piece(&with_x0, d, CAP).unwrap();
                let colon = colon_piece(&gens, &x0q, d, CAP).unwrap();
                assert!(colon.contains(&lhs).unwrap(), "p={prime} q={q} d={d}");
            }
        }
    }

    #[test]
    fn diff_examples() {
        let f = p(3);
        assert!(verify_diff_new(f, 1, 1, 1, CAP).unwrap());
        assert!(verify_diff(f, 1, 1, 1, CAP).unwrap());
        for d in 0..=diff_max_degree(f, 2, 0).unwrap() {
            assert!(verify_diff_new(f, 2, 0, d, CAP).unwrap());
            assert!(verify_diff(f, 2, 0, d, CAP).unwrap());
        }
    }

    #[test]
    fn diff_rejects_out_of_range() {
        let f = p(3);
        assert!(matches!(verify_diff(f, 1, 3, 0, CAP), Err(Error::OutOfRange(_))));
        assert!(matches!(verify_diff_new(f, 1, 1, 2, CAP), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn diff_fails_beyond_range_somewhere() {
        // Sanity check that the subspace comparison can say "no": just past
        // the allowed degree the equality breaks for (p, N, e) = (3, 1, 1).
        // Degree 2: colon contains x0^2 - x1^2? (x0^2 - x1^2)(x0^2 + x1^2)
        // = x0^4 - x1^4, which lies in (x0^3, x1^3); the right side in
        // degree 2 is zero since its generators have degree 3, 3, 4.
        let f = p(3);
        let powers = vec![Polynomial::var_pow(2, f, 0, 3), Polynomial::var_pow(2, f, 1, 3)];
        let q = Polynomial::sum_of_squares(2, f, 0..2);
        let colon = colon_piece(&powers, &q, 2, CAP).unwrap();
        assert!(colon.dim() >= 1);
    }
}
