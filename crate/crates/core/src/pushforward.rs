//! Decomposition of `F_* O(t)` on `Q_n` into line bundles and spinor
//! bundles, the windows that decide which twists occur, and the sets of
//! summands that certainly / possibly occur in `F^s_* E` for `s >= 2`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::pow2;
use crate::context::QuadricContext;
use crate::error::{Error, Result};
use crate::hilbert;

/// Spinor bundles: `Σ` on odd-dimensional quadrics, `Σ_+` and `Σ_-` on
/// even-dimensional ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Species {
    S,
    Plus,
    Minus,
}

impl Species {
    pub fn all(n: u32) -> &'static [Species] {
        if n % 2 == 1 {
            &[Species::S]
        } else {
            &[Species::Plus, Species::Minus]
        }
    }

    pub fn validate(self, n: u32) -> Result<Species> {
        if Species::all(n).contains(&self) {
            Ok(self)
        } else {
            Err(Error::InvalidSpecies { species: self.to_string(), n })
        }
    }

    /// The other species on an even-dimensional quadric; `S` is fixed.
    pub fn swap(self) -> Species {
        match self {
            Species::S => Species::S,
            Species::Plus => Species::Minus,
            Species::Minus => Species::Plus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Species::S => "S",
            Species::Plus => "Splus",
            Species::Minus => "Sminus",
        }
    }

    pub fn parse(s: &str) -> Option<Species> {
        match s {
            "S" => Some(Species::S),
            "Splus" | "S+" | "+" => Some(Species::Plus),
            "Sminus" | "S-" | "-" => Some(Species::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Species::S => "S",
            Species::Plus => "S+",
            Species::Minus => "S-",
        })
    }
}

/// Rank of a single spinor bundle of any species on `Q_n`.
pub fn spinor_rank(n: u32) -> BigInt {
    if n % 2 == 1 {
        pow2((n - 1) / 2)
    } else {
        pow2(n / 2 - 1)
    }
}

/// `2^{[n/2]}`, the rank of `S_n` (`Σ` for odd `n`, `Σ_+ ⊕ Σ_-` for even).
pub fn s_n_rank(n: u32) -> BigInt {
    pow2(n / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummandKind {
    Line(i64),
    Spinor(Species, i64),
}

impl SummandKind {
    pub fn twist(&self) -> i64 {
        match *self {
            SummandKind::Line(t) | SummandKind::Spinor(_, t) => t,
        }
    }

    pub fn rank(&self, n: u32) -> BigInt {
        match self {
            SummandKind::Line(_) => BigInt::one(),
            SummandKind::Spinor(..) => spinor_rank(n),
        }
    }

    pub fn is_spinor(&self) -> bool {
        matches!(self, SummandKind::Spinor(..))
    }
}

impl fmt::Display for SummandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummandKind::Line(t) => write!(f, "O({t})"),
            SummandKind::Spinor(sp, t) => write!(f, "{sp}({t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Multiplicity {
    Known(BigInt),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandDescriptor {
    pub kind: SummandKind,
    pub multiplicity: Multiplicity,
}

impl fmt::Display for SummandDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.multiplicity {
            Multiplicity::Known(m) => write!(f, "{}^{}", self.kind, m),
            Multiplicity::Unknown => write!(f, "{}^?", self.kind),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub context: QuadricContext,
    /// Twist `t` of the pushed-forward line bundle `O(t)`.
    pub source: i64,
    pub summands: Vec<SummandDescriptor>,
    pub exact: bool,
}

impl Decomposition {
    /// `Σ multiplicity · rank`, or `None` when some multiplicity is unknown.
    pub fn total_rank(&self) -> Option<BigInt> {
        let n = self.context.n();
        self.summands
            .iter()
            .map(|s| match &s.multiplicity {
                Multiplicity::Known(m) => Some(m * s.kind.rank(n)),
                Multiplicity::Unknown => None,
            })
            .sum()
    }

    pub fn spinor_part(&self) -> impl Iterator<Item = &SummandDescriptor> {
        self.summands.iter().filter(|s| s.kind.is_spinor())
    }

    pub fn multiplicity_of(&self, kind: SummandKind) -> BigInt {
        self.summands
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| match &s.multiplicity {
                Multiplicity::Known(m) => m.clone(),
                Multiplicity::Unknown => BigInt::zero(),
            })
            .sum()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `t = d_N + j + p c` with `0 <= j < p`; returns `(j, c)`.
pub fn normalize_twist(ctx: &QuadricContext, t: i64) -> (i64, i64) {
    let p = ctx.q() as i64;
    let shifted = t - ctx.d_pivot();
    (shifted.rem_euclid(p), shifted.div_euclid(p))
}

/// `F_* O(t)` for `s = 1`, with exact multiplicities.
///
/// Lines `O(c - t')` occur with multiplicity `dim C_{d_N + t'p + j}` for
/// `|t'p + j| <= d_N`; the spinor part is `S_n(1 + c)^b` with
/// `b = 2^{[N/2]} γ_N(j)`. On even-dimensional quadrics `S_n(1+c)^b` is
/// listed as `Σ_+(1+c)^b ⊕ Σ_-(1+c)^b`.
pub fn decompose_one_step(ctx: &QuadricContext, t: i64) -> Result<Decomposition> {
    ctx.require_single_frobenius()?;
    ctx.require_n_at_least_3()?;
    let p = ctx.q() as i64;
    let d = ctx.d_pivot();
    let (j, c) = normalize_twist(ctx, t);
    let mut summands = Vec::new();
    let lo = (-d - j).div_euclid(p);
    let hi = (d - j).div_euclid(p);
    // descending twist order: t' ascending means twist c - t' descending
    for tp in lo..=hi {
        if (tp * p + j).abs() > d {
            continue;
        }
        let a = hilbert::dim_c(ctx, d + tp * p + j)?;
        if a.is_zero() {
            continue;
        }
        summands.push(SummandDescriptor {
            kind: SummandKind::Line(c - tp),
            multiplicity: Multiplicity::Known(a),
        });
    }
    let b = pow2(ctx.big_n() / 2) * hilbert::gamma(ctx, j)?;
    if !b.is_zero() {
        for &sp in Species::all(ctx.n()) {
            summands.push(SummandDescriptor {
                kind: SummandKind::Spinor(sp, 1 + c),
                multiplicity: Multiplicity::Known(b.clone()),
            });
        }
    }
    Ok(Decomposition { context: *ctx, source: t, summands, exact: true })
}

/// Whether `O(-t)` is a summand of `F^s_* O(j)`: `0 <= tq + j <= n(q-1)`.
pub fn line_presence(ctx: &QuadricContext, j: i64, t: i64) -> bool {
    let q = ctx.q() as i64;
    let v = t * q + j;
    0 <= v && v <= ctx.n() as i64 * (q - 1)
}

/// Whether `F_* O(j)` contains a twist `Σ(-t)` of a spinor bundle
/// (`s = 1`): `d_N - p + 1 <= tp + j <= d_N - 1`.
pub fn spinor_window_line_source(ctx: &QuadricContext, j: i64, t: i64) -> Result<bool> {
    ctx.require_single_frobenius()?;
    let (p, d) = (ctx.q() as i64, ctx.d_pivot());
    let v = t * p + j;
    Ok(d - p + 1 <= v && v <= d - 1)
}

/// Whether `F_* S_n(j)` contains `Σ(-t)` (`s = 1`):
/// `d_N - p + 1 <= tp + j <= d_N`. Exactly one `t` qualifies.
pub fn spinor_window_spinor_source(ctx: &QuadricContext, j: i64, t: i64) -> Result<bool> {
    ctx.require_single_frobenius()?;
    let (p, d) = (ctx.q() as i64, ctx.d_pivot());
    let v = t * p + j;
    Ok(d - p + 1 <= v && v <= d)
}

/// The unique `t` with `Σ(-t) ⊂ F_* S_n(j)`.
pub fn spinor_source_twist(ctx: &QuadricContext, j: i64) -> Result<i64> {
    ctx.require_single_frobenius()?;
    let (p, d) = (ctx.q() as i64, ctx.d_pivot());
    Ok((d - j).div_euclid(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceKind {
    Line,
    Spinor,
}

/// Necessary condition for `O(-t)` to be a summand of `F^s_*` of `O(j)`
/// (`0 <= tq + j <= n(q-1)`) or of a spinor bundle twisted by `j`
/// (`1 <= tq + j <= n(q-1)`).
pub fn necessary_window(ctx: &QuadricContext, source: SourceKind, j: i64, t: i64) -> bool {
    let q = ctx.q() as i64;
    let v = t * q + j;
    let lo = match source {
        SourceKind::Line => 0,
        SourceKind::Spinor => 1,
    };
    lo <= v && v <= ctx.n() as i64 * (q - 1)
}

/// Checks every summand of a one-step decomposition against the windows.
pub fn check_windows(dec: &Decomposition) -> Result<bool> {
    let ctx = &dec.context;
    for s in &dec.summands {
        let ok = match s.kind {
            SummandKind::Line(u) => {
                necessary_window(ctx, SourceKind::Line, dec.source, -u) && line_presence(ctx, dec.source, -u)
            }
            SummandKind::Spinor(_, u) => spinor_window_line_source(ctx, dec.source, -u)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Summands of `F^s_* E` that are certainly present and those that may be
/// present. Spinor entries on even-dimensional quadrics always come in
/// both species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub start: SummandKind,
    pub s: u32,
    pub certain: BTreeSet<SummandKind>,
    pub possible: BTreeSet<SummandKind>,
}

impl Closure {
    pub fn certain_spinors(&self) -> impl Iterator<Item = &SummandKind> {
        self.certain.iter().filter(|k| k.is_spinor())
    }

    pub fn certain_lines(&self) -> impl Iterator<Item = &SummandKind> {
        self.certain.iter().filter(|k| !k.is_spinor())
    }
}

fn spinors(n: u32, twist: i64) -> impl Iterator<Item = SummandKind> {
    Species::all(n).iter().map(move |&sp| SummandKind::Spinor(sp, twist))
}

/// Children of one summand under a single push-forward: `(certain, possible)`.
fn step_children(one: &QuadricContext, x: SummandKind) -> Result<(Vec<SummandKind>, Vec<SummandKind>)> {
    let n = one.n();
    let p = one.q() as i64;
    let top = n as i64 * (p - 1);
    let mut certain = Vec::new();
    let mut possible = Vec::new();
    match x {
        SummandKind::Line(j) => {
            for t in (-j).div_euclid(p) - 1..=(top - j).div_euclid(p) + 1 {
                if line_presence(one, j, t) {
                    certain.push(SummandKind::Line(-t));
                }
                if spinor_window_line_source(one, j, t)? {
                    certain.extend(spinors(n, -t));
                }
            }
            possible.extend(certain.iter().copied());
        }
        SummandKind::Spinor(_, j) => {
            let t = spinor_source_twist(one, j)?;
            certain.extend(spinors(n, -t));
            possible.extend(certain.iter().copied());
            for t in (1 - j).div_euclid(p) - 1..=(top - j).div_euclid(p) + 1 {
                if necessary_window(one, SourceKind::Spinor, j, t) {
                    possible.push(SummandKind::Line(-t));
                }
            }
        }
    }
    Ok((certain, possible))
}

/// Iterates the single-step results `s` times starting from `start`.
///
/// Certain summands propagate through the "if and only if" statements;
/// possible summands additionally pick up every line allowed by the
/// necessary windows, and lines are pruned after each step by the window
/// for the full iterate `F^k_*`.
pub fn summand_closure(ctx: &QuadricContext, s: u32, start: SummandKind) -> Result<Closure> {
    ctx.require_n_at_least_3()?;
    let n = ctx.n();
    if let SummandKind::Spinor(sp, _) = start {
        sp.validate(n)?;
    }
    let one = ctx.with_s(1)?;
    let (source_kind, j0) = match start {
        SummandKind::Line(j) => (SourceKind::Line, j),
        SummandKind::Spinor(_, j) => (SourceKind::Spinor, j),
    };
    let mut certain: BTreeSet<SummandKind> = [start].into();
    let mut possible = certain.clone();
    for k in 1..=s {
        let stage = ctx.with_s(k)?;
        let mut next_certain = BTreeSet::new();
        let mut next_possible = BTreeSet::new();
        for &x in &possible {
            let (c, poss) = step_children(&one, x)?;
            if certain.contains(&x) {
                next_certain.extend(c.iter().copied());
            }
            next_possible.extend(poss);
        }
        next_possible.retain(|y| match *y {
            SummandKind::Line(u) => necessary_window(&stage, source_kind, j0, -u),
            SummandKind::Spinor(..) => true,
        });
        if let Some(bad) = next_certain.iter().find(|y| !next_possible.contains(y)) {
            return Err(Error::InvalidParameter(format!("certain summand {bad} outside the possible set")));
        }
        certain = next_certain;
        possible = next_possible;
    }
    Ok(Closure { start, s, certain, possible })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32, p: u32, s: u32) -> QuadricContext {
        QuadricContext::new(n, p, s).unwrap()
    }

    fn known(m: i64) -> Multiplicity {
        Multiplicity::Known(BigInt::from(m))
    }

    #[test]
    fn worked_decompositions() {
        let c = ctx(3, 3, 1);
        let d = decompose_one_step(&c, 3).unwrap();
        assert_eq!(
            d.summands,
            vec![
                SummandDescriptor { kind: SummandKind::Line(1), multiplicity: known(1) },
                SummandDescriptor { kind: SummandKind::Line(0), multiplicity: known(25) },
                SummandDescriptor { kind: SummandKind::Line(-1), multiplicity: known(1) },
            ]
        );
        assert_eq!(d.total_rank(), Some(BigInt::from(27)));

        let d = decompose_one_step(&c, 4).unwrap();
        assert_eq!(
            d.summands,
            vec![
                SummandDescriptor { kind: SummandKind::Line(1), multiplicity: known(5) },
                SummandDescriptor { kind: SummandKind::Line(0), multiplicity: known(14) },
                SummandDescriptor { kind: SummandKind::Spinor(Species::S, 1), multiplicity: known(4) },
            ]
        );
        assert_eq!(d.total_rank(), Some(BigInt::from(27)));
        assert!(check_windows(&d).unwrap());
    }

    #[test]
    fn twist_shift_moves_everything() {
        let c = ctx(4, 5, 1);
        for t in -12..12 {
            let a = decompose_one_step(&c, t).unwrap();
            let b = decompose_one_step(&c, t + 5).unwrap();
            let shifted: Vec<SummandDescriptor> = a
                .summands
                .iter()
                .map(|s| SummandDescriptor {
                    kind: match s.kind {
                        SummandKind::Line(u) => SummandKind::Line(u + 1),
                        SummandKind::Spinor(sp, u) => SummandKind::Spinor(sp, u + 1),
                    },
                    multiplicity: s.multiplicity.clone(),
                })
                .collect();
            assert_eq!(shifted, b.summands);
        }
    }

    #[test]
    fn rejects_small_quadrics_and_higher_frobenius() {
        assert_eq!(decompose_one_step(&ctx(2, 3, 1), 0), Err(Error::QuadricDimension(2)));
        assert_eq!(decompose_one_step(&ctx(3, 3, 2), 0), Err(Error::RequiresSingleFrobenius(2)));
    }

    #[test]
    fn windows() {
        let c = ctx(3, 3, 1);
        for t in 0..=2 {
            assert!(line_presence(&c, 0, t));
        }
        assert!(!line_presence(&c, 0, 3));
        assert!(line_presence(&ctx(3, 3, 2), 4, 0));
        let hits: Vec<i64> = (-5..5).filter(|&t| spinor_window_line_source(&c, 4, t).unwrap()).collect();
        assert_eq!(hits, vec![-1]);
        assert!((-5..5).all(|t| !spinor_window_line_source(&c, 0, t).unwrap()));
        let hits: Vec<i64> = (-5..5).filter(|&t| spinor_window_spinor_source(&c, 0, t).unwrap()).collect();
        assert_eq!(hits, vec![1]);
        assert_eq!(spinor_source_twist(&c, 0).unwrap(), 1);
        assert!(!necessary_window(&ctx(4, 3, 2), SourceKind::Line, 0, 4));
        assert!(necessary_window(&c, SourceKind::Line, 0, 0));
        assert!(!necessary_window(&c, SourceKind::Spinor, 0, 0));
    }

    #[test]
    fn spinor_source_twist_is_unique() {
        for (n, p) in [(3, 3), (4, 5), (5, 7), (6, 3)] {
            let c = ctx(n, p, 1);
            for j in -20..20 {
                let hits: Vec<i64> =
                    (-20..20).filter(|&t| spinor_window_spinor_source(&c, j, t).unwrap()).collect();
                assert_eq!(hits, vec![spinor_source_twist(&c, j).unwrap()]);
            }
        }
    }

    #[test]
    fn one_step_closure_is_exact() {
        for (n, p) in [(3, 3), (4, 3), (5, 5), (6, 7)] {
            let c = ctx(n, p, 1);
            for t in -8..8 {
                let cl = summand_closure(&c, 1, SummandKind::Line(t)).unwrap();
                assert_eq!(cl.certain, cl.possible);
                let dec = decompose_one_step(&c, t).unwrap();
                let kinds: BTreeSet<SummandKind> = dec.summands.iter().map(|s| s.kind).collect();
                assert_eq!(cl.certain, kinds, "n={n} p={p} t={t}");
            }
        }
    }

    #[test]
    fn iterated_lines_match_strong_splitting() {
        for (n, p, s) in [(3, 3, 2), (4, 3, 3), (5, 3, 2), (3, 5, 2), (6, 3, 2)] {
            let c = ctx(n, p, s);
            for j in [-3, 0, 2] {
                let cl = summand_closure(&c, s, SummandKind::Line(j)).unwrap();
                let lines: BTreeSet<i64> = cl.certain_lines().map(|k| -k.twist()).collect();
                let possible_lines: BTreeSet<i64> =
                    cl.possible.iter().filter(|k| !k.is_spinor()).map(|k| -k.twist()).collect();
                let window: BTreeSet<i64> = (-40..40).filter(|&t| line_presence(&c, j, t)).collect();
                assert_eq!(lines, window, "n={n} p={p} s={s} j={j}");
                assert_eq!(possible_lines, window);
                assert!(cl.certain.is_subset(&cl.possible));
            }
        }
    }

    #[test]
    fn closure_examples() {
        let q4 = ctx(4, 3, 3);
        let cl = summand_closure(&q4, 2, SummandKind::Line(0)).unwrap();
        let sp: Vec<SummandKind> = cl.certain_spinors().copied().collect();
        assert_eq!(sp, vec![SummandKind::Spinor(Species::Plus, -1), SummandKind::Spinor(Species::Minus, -1)]);
        let lines: Vec<i64> = cl.certain_lines().map(|k| k.twist()).collect();
        assert_eq!(lines, vec![-3, -2, -1, 0]);
        let cl = summand_closure(&q4, 3, SummandKind::Line(0)).unwrap();
        for t in [-1, -2] {
            assert!(cl.certain.contains(&SummandKind::Spinor(Species::Plus, t)));
            assert!(cl.certain.contains(&SummandKind::Spinor(Species::Minus, t)));
        }

        let cl = summand_closure(&ctx(5, 3, 2), 2, SummandKind::Line(0)).unwrap();
        for t in [-1, -2] {
            assert!(cl.certain.contains(&SummandKind::Spinor(Species::S, t)));
        }

        let cl = summand_closure(&ctx(3, 5, 2), 2, SummandKind::Line(0)).unwrap();
        let sp: Vec<SummandKind> = cl.certain_spinors().copied().collect();
        assert_eq!(sp, vec![SummandKind::Spinor(Species::S, -1)]);
    }
}
