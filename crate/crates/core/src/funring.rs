//! Continuous, compactly supported, piecewise-polynomial functions on the real
//! line with rational breakpoints and coefficients, under pointwise `+` and `*`.
//!
//! This ring is s-unital (trapezoid bumps act as local units) and has no
//! nonzero idempotents: a piece with `p^2 = p` in `Q[x]` is constantly 0 or 1,
//! and continuity together with compact support forces every piece to be 0.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::computable::{ComputableRing, Sides};
use crate::ring::Side;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunError {
    #[error("function is discontinuous at {0}")]
    Discontinuous(String),
    #[error("malformed function: {0}")]
    BadShape(String),
    #[error("bump needs a < b, got [{0}, {1}]")]
    BadInterval(String, String),
    #[error("no elements given")]
    EmptyInput,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A polynomial in `x` with rational coefficients, constant term first and no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `a x + b`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::default();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// A continuous function vanishing outside `[b_0, b_m]`, polynomial on each
/// `[b_i, b_{i+1}]`.
///
/// Canonical form: breakpoints strictly increase, adjacent pieces differ, and
/// the first and last pieces are nonzero. The zero function has no pieces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PiecewisePolynomial {
    breaks: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Validates continuity (including vanishing at both ends) and returns the
    /// canonical form.
    pub fn from_pieces(breaks: Vec<Rational>, pieces: Vec<Poly>) -> Result<Self, FunError> {
        if pieces.is_empty() {
            return if breaks.len() <= 1 {
                Ok(Self::zero())
            } else {
                Err(FunError::BadShape("breakpoints without pieces".into()))
            };
        }
        if breaks.len() != pieces.len() + 1 {
            return Err(FunError::BadShape(format!(
                "{} pieces need {} breakpoints, got {}",
                pieces.len(),
                pieces.len() + 1,
                breaks.len()
            )));
        }
        if let Some(w) = breaks.windows(2).find(|w| w[0] >= w[1]) {
            return Err(FunError::BadShape(format!("breakpoints {} and {} out of order", w[0], w[1])));
        }
        let zero = Rational::zero();
        for (i, b) in breaks.iter().enumerate() {
            let left = if i == 0 { zero.clone() } else { pieces[i - 1].eval(b) };
            let right = pieces.get(i).map_or(zero.clone(), |p| p.eval(b));
            if left != right {
                return Err(FunError::Discontinuous(b.to_string()));
            }
        }
        Ok(Self::canonical(breaks, pieces))
    }

    /// Merges equal neighbours and trims zero pieces at both ends. Assumes
    /// `breaks.len() == pieces.len() + 1`.
    fn canonical(breaks: Vec<Rational>, pieces: Vec<Poly>) -> Self {
        let end = breaks.last().cloned();
        let mut out_breaks: Vec<Rational> = Vec::with_capacity(breaks.len());
        let mut out_pieces: Vec<Poly> = Vec::with_capacity(pieces.len());
        for (start, p) in breaks.into_iter().zip(pieces) {
            if out_pieces.last() != Some(&p) {
                out_breaks.push(start);
                out_pieces.push(p);
            }
        }
        out_breaks.extend(end);
        if out_pieces.first().is_some_and(Poly::is_zero) {
            out_pieces.remove(0);
            out_breaks.remove(0);
        }
        if out_pieces.last().is_some_and(Poly::is_zero) {
            out_pieces.pop();
            out_breaks.pop();
        }
        if out_pieces.is_empty() {
            out_breaks.clear();
        }
        PiecewisePolynomial { breaks: out_breaks, pieces: out_pieces }
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    /// `[b_0, b_m]`, or `None` for the zero function.
    pub fn support(&self) -> Option<(Rational, Rational)> {
        Some((self.breaks.first()?.clone(), self.breaks.last()?.clone()))
    }

    /// The polynomial describing `self` on `[c, d]`, which must not straddle a
    /// breakpoint.
    fn piece_on(&self, c: &Rational, d: &Rational) -> Poly {
        match (self.breaks.first(), self.breaks.last()) {
            (Some(lo), Some(hi)) if d > lo && c < hi => {
                let i = self.breaks.partition_point(|b| b <= c);
                self.pieces[i.saturating_sub(1)].clone()
            }
            _ => Poly::default(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match (self.breaks.first(), self.breaks.last()) {
            (Some(lo), Some(hi)) if x >= lo && x <= hi => {
                let i = self.breaks.partition_point(|b| b <= x).clamp(1, self.pieces.len());
                self.pieces[i - 1].eval(x)
            }
            _ => Rational::zero(),
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        let mut breaks: Vec<Rational> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        breaks.sort();
        breaks.dedup();
        if breaks.len() < 2 {
            return Self::zero();
        }
        let pieces = breaks
            .windows(2)
            .map(|w| op(&self.piece_on(&w[0], &w[1]), &other.piece_on(&w[0], &w[1])))
            .collect();
        Self::canonical(breaks, pieces)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, Poly::add)
    }

    pub fn neg(&self) -> Self {
        PiecewisePolynomial { breaks: self.breaks.clone(), pieces: self.pieces.iter().map(Poly::neg).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        self.combine(other, Poly::mul)
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// `c f`.
    pub fn scale(&self, c: &Rational) -> Self {
        let pieces = self.pieces.iter().map(|p| p.mul(&Poly::constant(c.clone()))).collect();
        Self::canonical(self.breaks.clone(), pieces)
    }
}

/// Pointwise sum.
pub fn pp_add(f: &PiecewisePolynomial, g: &PiecewisePolynomial) -> PiecewisePolynomial {
    f.add(g)
}

/// Pointwise product.
pub fn pp_mul(f: &PiecewisePolynomial, g: &PiecewisePolynomial) -> PiecewisePolynomial {
    f.mul(g)
}

pub fn pp_is_idempotent(f: &PiecewisePolynomial) -> bool {
    f.is_idempotent()
}

/// The trapezoid that is 0 up to `a - 1`, rises to 1 at `a`, stays 1 on
/// `[a, b]` and falls back to 0 at `b + 1`.
pub fn bump(a: &Rational, b: &Rational) -> Result<PiecewisePolynomial, FunError> {
    if a >= b {
        return Err(FunError::BadInterval(a.to_string(), b.to_string()));
    }
    let one = Rational::one();
    let breaks = vec![a - &one, a.clone(), b.clone(), b + &one];
    let pieces = vec![
        Poly::linear(one.clone(), one.clone() - a),
        Poly::constant(one.clone()),
        Poly::linear(-one.clone(), b + &one),
    ];
    PiecewisePolynomial::from_pieces(breaks, pieces)
}

/// A bump equal to 1 on the hull of all supports; it fixes every input.
pub fn s_unit_for(elements: &[PiecewisePolynomial]) -> Result<PiecewisePolynomial, FunError> {
    if elements.is_empty() {
        return Err(FunError::EmptyInput);
    }
    let mut hull: Option<(Rational, Rational)> = None;
    for (lo, hi) in elements.iter().filter_map(PiecewisePolynomial::support) {
        hull = Some(match hull {
            None => (lo, hi),
            Some((a, b)) => (a.min(lo), b.max(hi)),
        });
    }
    match hull {
        None => bump(&rat(0), &rat(1)),
        Some((lo, hi)) if lo == hi => {
            let hi = &lo + rat(1);
            bump(&lo, &hi)
        }
        Some((lo, hi)) => bump(&lo, &hi),
    }
}

fn parse_rational(token: &str) -> Option<Rational> {
    let token = token.trim();
    match token.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => token.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Parses `piece [a,b] c0 c1 c2 ...` lines (constant term first). Gaps
/// between pieces are zero; `#` starts a comment.
pub fn parse_piecewise(text: &str) -> Result<PiecewisePolynomial, FunError> {
    let mut pieces: Vec<(Rational, Rational, Poly)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| FunError::Syntax { line: line_no, message: message.to_string() };
        let rest = line.strip_prefix("piece").ok_or_else(|| err("expected `piece [a,b] c0 c1 ...`"))?;
        let rest = rest.trim_start();
        let rest = rest.strip_prefix('[').ok_or_else(|| err("expected `[`"))?;
        let (interval, coeffs) = rest.split_once(']').ok_or_else(|| err("expected `]`"))?;
        let (a, b) = interval.split_once(',').ok_or_else(|| err("interval needs two endpoints"))?;
        let a = parse_rational(a).ok_or_else(|| err("bad left endpoint"))?;
        let b = parse_rational(b).ok_or_else(|| err("bad right endpoint"))?;
        if a >= b {
            return Err(err("interval must have a < b"));
        }
        let coeffs = coeffs
            .split_whitespace()
            .map(|t| parse_rational(t).ok_or_else(|| err(&format!("bad coefficient `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        pieces.push((a, b, Poly::new(coeffs)));
    }
    pieces.sort_by(|x, y| x.0.cmp(&y.0));
    let mut breaks = Vec::new();
    let mut polys = Vec::new();
    for (a, b, p) in pieces {
        match breaks.last() {
            Some(end) if a < *end => {
                return Err(FunError::BadShape(format!("pieces overlap at {a}")));
            }
            Some(end) if a > *end => {
                polys.push(Poly::default());
                breaks.push(a);
            }
            Some(_) => {}
            None => breaks.push(a),
        }
        polys.push(p);
        breaks.push(b);
    }
    PiecewisePolynomial::from_pieces(breaks, polys)
}

impl fmt::Display for PiecewisePolynomial {
    /// One `piece` line per nonzero piece, in the syntax [`parse_piecewise`] reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, p) in self.breaks.windows(2).zip(&self.pieces) {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str("\n")?;
            }
            first = false;
            write!(f, "piece [{},{}]", w[0], w[1])?;
            for c in p.coeffs() {
                write!(f, " {c}")?;
            }
        }
        Ok(())
    }
}

/// The ring of all such functions, as a [`ComputableRing`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CompactSupportFunctions;

impl ComputableRing for CompactSupportFunctions {
    type Elem = PiecewisePolynomial;

    fn name(&self) -> String {
        "PP_c(R)".into()
    }

    fn zero(&self) -> PiecewisePolynomial {
        PiecewisePolynomial::zero()
    }

    fn add(&self, a: &PiecewisePolynomial, b: &PiecewisePolynomial) -> PiecewisePolynomial {
        a.add(b)
    }

    fn neg(&self, a: &PiecewisePolynomial) -> PiecewisePolynomial {
        a.neg()
    }

    fn mul(&self, a: &PiecewisePolynomial, b: &PiecewisePolynomial) -> PiecewisePolynomial {
        a.mul(b)
    }

    fn render(&self, a: &PiecewisePolynomial) -> String {
        a.to_string().replace('\n', "; ")
    }

    fn is_zero(&self, a: &PiecewisePolynomial) -> bool {
        a.is_zero()
    }

    fn s_unit_for(&self, elements: &[PiecewisePolynomial], _side: Side) -> Option<PiecewisePolynomial> {
        if elements.is_empty() {
            return Some(self.zero());
        }
        s_unit_for(elements).ok()
    }

    /// Only sets of zero functions have an idempotent unit.
    fn idempotent_unit_for(&self, elements: &[PiecewisePolynomial], _sides: Sides) -> Option<PiecewisePolynomial> {
        elements.iter().all(PiecewisePolynomial::is_zero).then(PiecewisePolynomial::zero)
    }

    /// A bump supported in `[b + 1, b + 4]`, outside `[-b, b]`.
    fn probe_outside(&self, bound: usize) -> Option<PiecewisePolynomial> {
        let a = rat(bound as i64 + 2);
        let b = rat(bound as i64 + 3);
        bump(&a, &b).ok()
    }
}

impl PiecewisePolynomial {
    /// True when the support lies inside `[-bound, bound]`.
    pub fn supported_within(&self, bound: usize) -> bool {
        let bound = rat(bound as i64);
        self.support().is_none_or(|(lo, hi)| lo >= -bound.clone() && hi <= bound)
    }

    /// Largest absolute breakpoint, rounded up.
    pub fn support_radius(&self) -> usize {
        self.breaks
            .iter()
            .map(|b| b.abs().ceil().to_integer())
            .max()
            .and_then(|m| usize::try_from(m).ok())
            .unwrap_or(0)
    }
}
