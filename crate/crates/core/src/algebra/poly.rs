use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::field::Prime;

/// Exponent vector of a monomial in `x_0, ..., x_{k-1}`.
///
/// Monomials are ordered graded-lexicographically: first by total degree,
/// then lexicographically with `x_0 > x_1 > ...`. The order is global and
/// fixed; basis matrices and printed output depend on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, q: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * q).collect())
    }

    /// All monomials of degree `d` in `nvars` variables, in descending
    /// graded-lex order (so `x_0^d` comes first).
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        let mut cur = vec![0u32; nvars];
        fill_descending(&mut cur, 0, d, &mut out);
        out
    }
}

fn fill_descending(cur: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(Monomial(cur.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill_descending(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over F_p. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    modulus: Prime,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(nvars: usize, modulus: Prime) -> Self {
        Polynomial { nvars, modulus, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, modulus: Prime, c: i64) -> Self {
        Self::term(modulus, c, Monomial::one(nvars))
    }

    pub fn term(modulus: Prime, c: i64, m: Monomial) -> Self {
        let mut p = Polynomial::zero(m.nvars(), modulus);
        p.add_term(m, modulus.reduce_i64(c));
        p
    }

    pub fn var(nvars: usize, modulus: Prime, i: usize) -> Self {
        Self::term(modulus, 1, Monomial::var(nvars, i))
    }

    /// `x_i^e`.
    pub fn var_pow(nvars: usize, modulus: Prime, i: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Self::term(modulus, 1, Monomial::new(exps))
    }

    /// Build from `(coefficient, exponents)` pairs; repeated monomials add up.
    pub fn from_terms(nvars: usize, modulus: Prime, terms: &[(i64, Vec<u32>)]) -> Self {
        let mut p = Polynomial::zero(nvars, modulus);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial::new(e.clone()), modulus.reduce_i64(*c));
        }
        p
    }

    /// `x_lo^2 + ... + x_hi^2` inside `nvars` variables.
    pub fn sum_of_squares(nvars: usize, modulus: Prime, vars: std::ops::Range<usize>) -> Self {
        let mut p = Polynomial::zero(nvars, modulus);
        for i in vars {
            let mut e = vec![0; nvars];
            e[i] = 2;
            p.add_term(Monomial::new(e), 1);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c == 0 {
            return;
        }
        let p = self.modulus;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = p.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree if all terms share it; `None` when inhomogeneous or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars, self.modulus);
        for (m, &a) in &self.terms {
            out.add_term(m.clone(), self.modulus.mul(a, c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            modulus: self.modulus,
            terms: self.terms.iter().map(|(t, &c)| (t.mul(m), c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.nvars, self.modulus, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replace every `x_i` by `x_i^q`: exponent vectors scale by `q`,
    /// coefficients are untouched.
    pub fn substitute_power(&self, q: u32) -> Polynomial {
        assert!(q >= 1, "substitution exponent must be positive");
        Polynomial {
            nvars: self.nvars,
            modulus: self.modulus,
            terms: self.terms.iter().map(|(m, &c)| (m.scale(q), c)).collect(),
        }
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), self.modulus.neg(c));
        }
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.modulus.neg(1))
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let p = self.modulus;
        let mut out = Polynomial::zero(self.nvars, p);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                out.add_term(a.mul(b), p.mul(ca, cb));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            let c = self.modulus.signed(c);
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
