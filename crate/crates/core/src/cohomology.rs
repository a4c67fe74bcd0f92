//! Cohomology of `O(t)`, `Σ(t)` and `Σ_1 ⊗ Σ_2(t)` on `Q_n`, Ext groups
//! between line and spinor summands, quasi-exceptionality, and the tilting
//! decision for `F^s_* O`.
//!
//! Everything is driven by three facts: line bundles and spinor bundles
//! are ACM, the sequences `0 -> σ -> O^r -> σ'(1) -> 0` with
//! `r = 2^{[N/2]}` (where `σ' = σ` for odd `n` and the opposite species for
//! even `n`), and stability (`Hom(Σ_1, Σ_2(t)) = 0` for `t < 0`, and for
//! `t = 0` unless `Σ_1 ≅ Σ_2`).

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{binomial, pow2};
use crate::context::QuadricContext;
use crate::error::{Error, Result};
use crate::pushforward::{self, Closure, Species, SummandKind};

fn check_n(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::QuadricDimension(n));
    }
    Ok(())
}

/// `Σ^* ≅ Σ'(1)`: returns `Σ'`.
pub fn dual_species(species: Species, n: u32) -> Result<Species> {
    species.validate(n)?;
    Ok(if n % 4 == 2 { species.swap() } else { species })
}

/// `(species', +1)` with `Σ^* ≅ Σ'(1)`.
pub fn dual_spinor(species: Species, n: u32) -> Result<(Species, i64)> {
    Ok((dual_species(species, n)?, 1))
}

/// The species `σ'` in `0 -> σ -> O^r -> σ'(1) -> 0`. An involution.
pub fn next_species(species: Species, n: u32) -> Species {
    if n % 2 == 1 {
        species
    } else {
        species.swap()
    }
}

/// `r = 2^{[N/2]}`, the rank of the trivial bundle in the spinor sequences.
pub fn sequence_rank(n: u32) -> BigInt {
    pow2((n + 1) / 2)
}

/// `h^i(Q_n, O(t))`.
pub fn h_line(n: u32, i: u32, t: i64) -> BigInt {
    let big_n = n as i64 + 1;
    let h0 = |t: i64| {
        if t < 0 {
            BigInt::zero()
        } else {
            binomial(t + big_n, big_n) - binomial(t - 2 + big_n, big_n)
        }
    };
    if i == 0 {
        h0(t)
    } else if i == n {
        h0(-t - n as i64)
    } else {
        BigInt::zero()
    }
}

/// `h^0(Q_n, Σ(t)) = 2^{[N/2]} C(t+n-1, n)` for `t >= 1`, zero otherwise.
/// The same for every species.
pub fn h0_spinor(n: u32, t: i64) -> BigInt {
    if t < 1 {
        return BigInt::zero();
    }
    sequence_rank(n) * binomial(t + n as i64 - 1, n as i64)
}

/// `h^0(Σ(t))` from the spinor sequences alone:
/// `h^0(σ'(t+1)) = r h^0(O(t)) - h^0(σ(t))`, starting from zero at `t <= 0`.
pub fn h0_spinor_by_sequences(n: u32, t: i64) -> BigInt {
    let r = sequence_rank(n);
    let mut h = BigInt::zero();
    for u in 0..t {
        h = &r * h_line(n, 0, u) - h;
    }
    h
}

/// `h^i(Q_n, Σ(t))` for a spinor bundle of the given species.
pub fn h_spinor(n: u32, species: Species, i: u32, t: i64) -> Result<BigInt> {
    check_n(n)?;
    species.validate(n)?;
    Ok(if i == 0 {
        h0_spinor(n, t)
    } else if i == n {
        // Serre duality with ω = O(-n) and Σ^* = Σ'(1)
        h0_spinor(n, 1 - t - n as i64)
    } else {
        BigInt::zero()
    })
}

/// `h^1(Σ_1 ⊗ Σ_2(t))`: nonzero only at `t = 0`, where it is
/// `h^0(σ'_1 ⊗ Σ_2(1)) = dim Hom(dual(σ'_1), Σ_2)`.
fn h1_tensor(n: u32, s1: Species, s2: Species, t: i64) -> BigInt {
    if t != 0 {
        return BigInt::zero();
    }
    let target = if n % 4 == 2 { next_species(s1, n).swap() } else { next_species(s1, n) };
    if target == s2 {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// `h^0(X ⊗ Σ_2(T))` via
/// `h^0(X ⊗ Σ_2(T)) = r h^0(Σ_2(T-1)) - h^0(X' ⊗ Σ_2(T-1)) + h^1(X' ⊗ Σ_2(T-1))`
/// where `X'` is the species with `next(X') = X`; zero for `T <= 0`.
fn h0_tensor(n: u32, x: Species, s2: Species, t: i64) -> BigInt {
    if t <= 0 {
        return BigInt::zero();
    }
    let r = sequence_rank(n);
    // chain[u] is the species paired with twist u on the way up to (x, t)
    let mut chain = vec![x; t as usize + 1];
    for u in (0..t as usize).rev() {
        chain[u] = next_species(chain[u + 1], n);
    }
    let mut h = BigInt::zero();
    for u in 1..=t {
        let below = chain[u as usize - 1];
        h = &r * h0_spinor(n, u - 1) - h + h1_tensor(n, below, s2, u - 1);
    }
    h
}

/// `h^i(Q_n, Σ_1 ⊗ Σ_2(t))`.
pub fn h_spinor_tensor(n: u32, s1: Species, s2: Species, i: u32, t: i64) -> Result<BigInt> {
    check_n(n)?;
    s1.validate(n)?;
    s2.validate(n)?;
    if i > n {
        return Ok(BigInt::zero());
    }
    Ok(if i == 0 {
        h0_tensor(n, s1, s2, t)
    } else if i == n {
        let (d1, d2) = (dual_species(s1, n)?, dual_species(s2, n)?);
        h0_tensor(n, d1, d2, 2 - t - n as i64)
    } else {
        let mut sp = s1;
        for _ in 1..i {
            sp = next_species(sp, n);
        }
        h1_tensor(n, sp, s2, t + i as i64 - 1)
    })
}

/// The objects whose cohomology is tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CohomObject {
    Line,
    Spinor(Species),
    SpinorTensor(Species, Species),
}

impl fmt::Display for CohomObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomObject::Line => f.write_str("O"),
            CohomObject::Spinor(s) => write!(f, "{s}"),
            CohomObject::SpinorTensor(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

impl CohomObject {
    /// `E^*` written as `E'(shift)`.
    pub fn dual(self, n: u32) -> Result<(CohomObject, i64)> {
        Ok(match self {
            CohomObject::Line => (CohomObject::Line, 0),
            CohomObject::Spinor(s) => (CohomObject::Spinor(dual_species(s, n)?), 1),
            CohomObject::SpinorTensor(a, b) => {
                (CohomObject::SpinorTensor(dual_species(a, n)?, dual_species(b, n)?), 2)
            }
        })
    }
}

/// `h^i(Q_n, E(t))`.
pub fn h(n: u32, object: CohomObject, i: u32, t: i64) -> Result<BigInt> {
    check_n(n)?;
    match object {
        CohomObject::Line => Ok(h_line(n, i, t)),
        CohomObject::Spinor(s) => h_spinor(n, s, i, t),
        CohomObject::SpinorTensor(a, b) => h_spinor_tensor(n, a, b, i, t),
    }
}

/// `(i, t) -> h^i(E(t))` over a twist range; zero entries are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomTable {
    pub n: u32,
    pub object: CohomObject,
    pub entries: BTreeMap<(u32, i64), BigInt>,
}

pub fn cohom_table(n: u32, object: CohomObject, twists: std::ops::RangeInclusive<i64>) -> Result<CohomTable> {
    let mut entries = BTreeMap::new();
    for i in 0..=n {
        for t in twists.clone() {
            let v = h(n, object, i, t)?;
            if !v.is_zero() {
                entries.insert((i, t), v);
            }
        }
    }
    Ok(CohomTable { n, object, entries })
}

/// `h^i(E(t)) = h^{n-i}(E^*(-t-n))` on every entry in the range.
pub fn serre_duality_closes(n: u32, object: CohomObject, twists: std::ops::RangeInclusive<i64>) -> Result<bool> {
    let (dual, shift) = object.dual(n)?;
    for i in 0..=n {
        for t in twists.clone() {
            if h(n, object, i, t)? != h(n, dual, n - i, shift - t - n as i64)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `dim Ext^i(a, b)` for line/spinor summands of `Q_n`.
pub fn ext_dim(n: u32, a: SummandKind, b: SummandKind, i: u32) -> Result<BigInt> {
    check_n(n)?;
    let d = b.twist() - a.twist();
    match (a, b) {
        (SummandKind::Line(_), SummandKind::Line(_)) => Ok(h_line(n, i, d)),
        (SummandKind::Spinor(s, _), SummandKind::Line(_)) => {
            let (ds, shift) = dual_spinor(s, n)?;
            h_spinor(n, ds, i, d + shift)
        }
        (SummandKind::Line(_), SummandKind::Spinor(s, _)) => h_spinor(n, s, i, d),
        (SummandKind::Spinor(s1, _), SummandKind::Spinor(s2, _)) => {
            let (ds, shift) = dual_spinor(s1, n)?;
            h_spinor_tensor(n, ds, s2, i, d + shift)
        }
    }
}

/// First `(a, b, i)` with `i >= 1` and `Ext^i(a, b) != 0`, scanning
/// `i = 1` across all pairs before larger `i`.
pub fn ext_obstruction<'a>(
    n: u32,
    summands: impl IntoIterator<Item = &'a SummandKind> + Clone,
) -> Result<Option<(SummandKind, SummandKind, u32)>> {
    for i in 1..=n {
        for a in summands.clone() {
            for b in summands.clone() {
                if !ext_dim(n, *a, *b, i)?.is_zero() {
                    return Ok(Some((*a, *b, i)));
                }
            }
        }
    }
    Ok(None)
}

/// `Ext^i(E, E) = 0` for all `i > 0`, `E` the direct sum of `summands`.
pub fn is_quasi_exceptional<'a>(n: u32, summands: impl IntoIterator<Item = &'a SummandKind> + Clone) -> Result<bool> {
    Ok(ext_obstruction(n, summands)?.is_none())
}

/// `n` consecutive line-bundle twists and a twist of every spinor species.
/// Sufficient for generating `D^b(Q_n)`, not necessary.
pub fn generates_sufficiently<'a>(n: u32, summands: impl IntoIterator<Item = &'a SummandKind>) -> bool {
    let mut lines = BTreeSet::new();
    let mut species = BTreeSet::new();
    for s in summands {
        match *s {
            SummandKind::Line(t) => {
                lines.insert(t);
            }
            SummandKind::Spinor(sp, _) => {
                species.insert(sp);
            }
        }
    }
    let has_run = lines.iter().any(|&t| (t..t + n as i64).all(|u| lines.contains(&u)));
    has_run && Species::all(n).iter().all(|sp| species.contains(sp))
}

/// `h^1(ψ_1 ⊗ Σ(t))` with `ψ_1 = Ω_{P^N}(1)|_{Q_n}`.
pub fn h1_psi1_spinor(n: u32, t: i64) -> BigInt {
    if t == 0 {
        sequence_rank(n)
    } else {
        BigInt::zero()
    }
}

/// `h^1(ψ_1(t))`.
pub fn h1_psi1_line(t: i64) -> BigInt {
    if t == -1 {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Tilting,
    QuasiExceptionalNotGenerating,
    NotQuasiExceptional,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Tilting => "Tilting",
            Verdict::QuasiExceptionalNotGenerating => "QuasiExceptionalNotGenerating",
            Verdict::NotQuasiExceptional => "NotQuasiExceptional",
        })
    }
}

/// The verdict for `F^s_* O_{Q_n}` together with the independent check
/// computed from the summand sets.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltingReport {
    pub n: u32,
    pub p: u32,
    pub s: u32,
    pub verdict: Verdict,
    pub closure: Closure,
    /// `Ext^i(a, b) != 0` between two certain summands, if one was found.
    pub obstruction: Option<(SummandKind, SummandKind, u32)>,
    pub possible_quasi_exceptional: bool,
    pub certain_generates: bool,
    /// Whether the summand-level evidence supports the verdict.
    pub confirmed: bool,
}

/// The case analysis for `F^s_* O_{Q_n}`:
///
/// * `s = 1`: tilting iff `p > n`, otherwise quasi-exceptional but not
///   generating;
/// * `s >= 2`: tilting iff `n = 4, p = 3, s = 2` or `n` odd with `p >= n`,
///   otherwise not quasi-exceptional.
pub fn tilting_decision(n: u32, p: u32, s: u32) -> Result<TiltingReport> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be at least 1".into()));
    }
    let ctx = QuadricContext::new(n, p, s)?;
    check_n(n)?;
    let verdict = match s {
        1 if p > n => Verdict::Tilting,
        1 => Verdict::QuasiExceptionalNotGenerating,
        2 if n == 4 && p == 3 => Verdict::Tilting,
        _ if n % 2 == 1 && p >= n => Verdict::Tilting,
        _ => Verdict::NotQuasiExceptional,
    };
    let closure = pushforward::summand_closure(&ctx, s, SummandKind::Line(0))?;
    let obstruction = ext_obstruction(n, &closure.certain)?;
    let possible_quasi_exceptional = is_quasi_exceptional(n, &closure.possible)?;
    let certain_generates = generates_sufficiently(n, &closure.certain);
    let confirmed = match verdict {
        Verdict::Tilting => possible_quasi_exceptional && certain_generates,
        Verdict::QuasiExceptionalNotGenerating => {
            // s = 1: the closure is the exact decomposition
            possible_quasi_exceptional && !certain_generates
        }
        Verdict::NotQuasiExceptional => obstruction.is_some_and(|(_, _, i)| i == 1),
    };
    Ok(TiltingReport {
        n,
        p,
        s,
        verdict,
        closure,
        obstruction,
        possible_quasi_exceptional,
        certain_generates,
        confirmed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Species::*;

    #[test]
    fn duals() {
        assert_eq!(dual_spinor(S, 3).unwrap(), (S, 1));
        assert_eq!(dual_spinor(Plus, 4).unwrap(), (Plus, 1));
        assert_eq!(dual_spinor(Plus, 6).unwrap(), (Minus, 1));
        assert!(dual_spinor(S, 4).is_err());
        assert!(dual_spinor(Plus, 5).is_err());
        for n in 3..=9 {
            for &sp in Species::all(n) {
                let (d, _) = dual_spinor(sp, n).unwrap();
                assert_eq!(dual_spinor(d, n).unwrap().0, sp);
            }
        }
    }

    #[test]
    fn line_values() {
        assert_eq!(h_line(3, 0, 1), BigInt::from(5));
        assert_eq!(h_line(3, 0, 0), BigInt::one());
        assert_eq!(h_line(3, 3, -3), BigInt::one());
        assert_eq!(h_line(3, 1, 5), BigInt::zero());
        // Hilbert function of a quadric: coefficients of (1+t)/(1-t)^N
        for n in 3..7u32 {
            for t in 0..8i64 {
                let expected = binomial(t + n as i64, n as i64) + binomial(t - 1 + n as i64, n as i64);
                assert_eq!(h_line(n, 0, t), expected);
            }
        }
    }

    #[test]
    fn spinor_values() {
        assert_eq!(h0_spinor(3, 1), BigInt::from(4));
        assert_eq!(h0_spinor(3, 0), BigInt::zero());
        assert_eq!(h0_spinor_by_sequences(3, 1), BigInt::from(4));
        for n in 3..=6 {
            for t in -10..=10 {
                assert_eq!(h0_spinor(n, t), h0_spinor_by_sequences(n, t), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn tensor_h1_table() {
        assert_eq!(h_spinor_tensor(3, S, S, 1, 0).unwrap(), BigInt::one());
        assert_eq!(h_spinor_tensor(4, Plus, Plus, 1, 0).unwrap(), BigInt::zero());
        assert_eq!(h_spinor_tensor(4, Plus, Minus, 1, 0).unwrap(), BigInt::one());
        assert_eq!(h_spinor_tensor(6, Plus, Plus, 1, 0).unwrap(), BigInt::one());
        assert_eq!(h_spinor_tensor(6, Plus, Minus, 1, 0).unwrap(), BigInt::zero());
    }

    #[test]
    fn tensor_h0_small_twists() {
        // Hom(Σ^*, Σ_2(t)) vanishes for t <= 0 and at t = 1 is 1 iff the
        // dual species matches
        for n in 3..=8 {
            for &a in Species::all(n) {
                for &b in Species::all(n) {
                    assert!(h_spinor_tensor(n, a, b, 0, 0).unwrap().is_zero());
                    let expected = if dual_species(a, n).unwrap() == b { 1 } else { 0 };
                    assert_eq!(h_spinor_tensor(n, a, b, 0, 1).unwrap(), BigInt::from(expected));
                }
            }
        }
    }

    #[test]
    fn tensor_h0_is_monotone() {
        for n in 3..=6 {
            for &a in Species::all(n) {
                for &b in Species::all(n) {
                    let mut last = BigInt::zero();
                    for t in 1..8 {
                        let v = h_spinor_tensor(n, a, b, 0, t).unwrap();
                        assert!(v >= last, "n={n} {a} {b} t={t}");
                        last = v;
                    }
                }
            }
        }
    }

    #[test]
    fn ext_examples() {
        let sp = |s, t| SummandKind::Spinor(s, t);
        assert_eq!(ext_dim(3, sp(S, 1), sp(S, 0), 1).unwrap(), BigInt::one());
        for i in 1..=3 {
            assert!(ext_dim(3, SummandKind::Line(0), SummandKind::Line(0), i).unwrap().is_zero());
        }
        assert!(ext_dim(4, sp(Plus, 1), sp(Plus, 0), 1).unwrap().is_zero());
        assert_eq!(ext_dim(4, sp(Plus, 1), sp(Minus, 0), 1).unwrap(), BigInt::one());
    }

    #[test]
    fn quasi_exceptional_examples() {
        let c = QuadricContext::new(3, 5, 1).unwrap();
        let dec = pushforward::decompose_one_step(&c, 0).unwrap();
        let kinds: Vec<SummandKind> = dec.summands.iter().map(|s| s.kind).collect();
        assert!(is_quasi_exceptional(3, &kinds).unwrap());
        let pair = [SummandKind::Spinor(S, -1), SummandKind::Spinor(S, -2)];
        assert!(!is_quasi_exceptional(5, &pair).unwrap());
        assert!(is_quasi_exceptional(5, &[SummandKind::Line(4)]).unwrap());
    }

    #[test]
    fn generation_examples() {
        let set = [SummandKind::Line(0), SummandKind::Line(-1), SummandKind::Line(-2), SummandKind::Spinor(S, -1)];
        assert!(generates_sufficiently(3, &set));
        assert!(!generates_sufficiently(3, &set[..3]));
        let short = [SummandKind::Line(0), SummandKind::Line(-1), SummandKind::Spinor(S, -1)];
        assert!(!generates_sufficiently(3, &short));
        let one_species = [
            SummandKind::Line(0),
            SummandKind::Line(-1),
            SummandKind::Line(-2),
            SummandKind::Line(-3),
            SummandKind::Spinor(Plus, -1),
        ];
        assert!(!generates_sufficiently(4, &one_species));
    }

    #[test]
    fn serre_duality() {
        for n in 3..=8 {
            assert!(serre_duality_closes(n, CohomObject::Line, -12..=12).unwrap());
            for &a in Species::all(n) {
                assert!(serre_duality_closes(n, CohomObject::Spinor(a), -12..=12).unwrap());
                for &b in Species::all(n) {
                    assert!(serre_duality_closes(n, CohomObject::SpinorTensor(a, b), -12..=12).unwrap());
                }
            }
        }
    }

    #[test]
    fn tilting_examples() {
        let expect = [
            ((3, 5, 1), Verdict::Tilting),
            ((4, 3, 2), Verdict::Tilting),
            ((4, 3, 3), Verdict::NotQuasiExceptional),
            ((3, 3, 1), Verdict::QuasiExceptionalNotGenerating),
        ];
        for ((n, p, s), v) in expect {
            let r = tilting_decision(n, p, s).unwrap();
            assert_eq!(r.verdict, v);
            assert!(r.confirmed, "{n} {p} {s}");
        }
        assert!(tilting_decision(2, 3, 1).is_err());
        assert!(tilting_decision(3, 2, 1).is_err());
    }

    #[test]
    fn tilting_grid_is_confirmed() {
        for n in 3..=6 {
            for p in [3, 5, 7] {
                for s in 1..=3 {
                    let r = tilting_decision(n, p, s).unwrap();
                    assert!(
                        r.confirmed,
                        "{n} {p} {s}: {} qe={} gen={} obs={:?}",
                        r.verdict, r.possible_quasi_exceptional, r.certain_generates, r.obstruction
                    );
                }
            }
        }
    }
}
