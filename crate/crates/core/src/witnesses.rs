//! Constructive unit algorithms.
//!
//! Each function builds a unit (or identity) from simpler ones exactly as the
//! classical arguments do, and records the intermediate values so callers can
//! re-check every identity along the way. Oracles are explicit parameters:
//! brute-force search for finite rings, capabilities for computable ones.
//! Whatever an oracle returns is verified before it is used.

use serde_json::{json, Value};
use thiserror::Error;

use crate::computable::{ComputableRing, Sides};
use crate::ring::{Element, FiniteRing, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("oracle found no unit for {0}")]
    OracleFailed(String),
    #[error("{0} is not idempotent")]
    NotIdempotentInput(String),
    #[error("{0} and {1} do not commute")]
    NotCommuting(String, String),
    #[error("{element} is not fixed by {unit}")]
    NotFixed { unit: String, element: String },
    #[error("ring is not regular at {0}")]
    NotRegularAt(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
}

/// `a + b - ab`.
pub fn vee<R: ComputableRing>(ring: &R, a: &R::Elem, b: &R::Elem) -> R::Elem {
    ring.sub(&ring.add(a, b), &ring.mul(a, b))
}

/// The join `e = e'' v e'` of two idempotents, with its square and the five
/// sufficient conditions for `e` to be idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinReport<E> {
    pub first: E,
    pub second: E,
    pub join: E,
    pub square: E,
    /// `e^2 - e`
    pub square_defect: E,
    /// `e^2 = e + e'e'' - e'e''e' - e''e'e'' + e''e'e''e'` held exactly.
    pub expansion_holds: bool,
    /// (i) `e'e'' = e'`, (ii) `e'e'' = e''`, (iii) `e''e' = e''`,
    /// (iv) `e''e' = e'`, (v) `e'e'' = e''e'`.
    pub conditions: [bool; 5],
}

impl<E> JoinReport<E> {
    pub fn any_condition(&self) -> bool {
        self.conditions.iter().any(|&c| c)
    }
}

/// Analyses `e = second v first` for idempotents `first = e'`, `second = e''`.
pub fn join_analysis<R: ComputableRing>(
    ring: &R,
    first: &R::Elem,
    second: &R::Elem,
) -> Result<JoinReport<R::Elem>, WitnessError> {
    for x in [first, second] {
        if !ring.is_idempotent(x) {
            return Err(WitnessError::NotIdempotentInput(ring.render(x)));
        }
    }
    let (a, b) = (first, second);
    let join = vee(ring, b, a);
    let square = ring.mul(&join, &join);
    let ab = ring.mul(a, b);
    let ba = ring.mul(b, a);
    let aba = ring.mul(&ab, a);
    let bab = ring.mul(&ba, b);
    let baba = ring.mul(&bab, a);
    let expansion = ring.add(&ring.sub(&ring.sub(&ring.add(&join, &ab), &aba), &bab), &baba);
    let conditions = [ab == *a, ab == *b, ba == *b, ba == *a, ab == ba];
    let report = JoinReport {
        first: a.clone(),
        second: b.clone(),
        square_defect: ring.sub(&square, &join),
        expansion_holds: expansion == square,
        join,
        square,
        conditions,
    };
    debug_assert!(report.expansion_holds);
    debug_assert!(!report.any_condition() || ring.is_zero(&report.square_defect));
    Ok(report)
}

/// One level of the induction building a common one-sided unit.
#[derive(Debug, Clone, PartialEq)]
pub struct InductionStep<E> {
    /// `m_n`, the last element at this level.
    pub target: E,
    /// `e_n` with `e_n m_n = m_n` (left) or `m_n e_n = m_n` (right).
    pub local: E,
    /// The other elements at this level.
    pub others: Vec<E>,
    /// `v_i = m_i - e_n m_i` (left) or `m_i - m_i e_n` (right).
    pub residues: Vec<E>,
    /// `e'`, the unit returned for the residues.
    pub inner: E,
    /// `e' v e_n` (left) or `e_n v e'` (right).
    pub joined: E,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitTrace<E> {
    pub side: Side,
    pub unit: E,
    /// Innermost level first.
    pub steps: Vec<InductionStep<E>>,
}

/// A common one-sided unit for `elements` from per-element units.
///
/// With `e_n` a unit for the last element and `e'` a unit (by recursion) for the
/// residues `v_i`, the join `e' v e_n` (left) or `e_n v e'` (right) fixes all of
/// them. The empty list gets the zero element.
pub fn common_one_sided_unit<R, F>(
    ring: &R,
    elements: &[R::Elem],
    side: Side,
    oracle: &mut F,
) -> Result<UnitTrace<R::Elem>, WitnessError>
where
    R: ComputableRing,
    F: FnMut(&R::Elem) -> Option<R::Elem>,
{
    let mut steps = Vec::new();
    let unit = one_sided_step(ring, elements, side, oracle, &mut steps)?;
    debug_assert!(elements.iter().all(|m| ring.act(side, &unit, m) == *m));
    Ok(UnitTrace { side, unit, steps })
}

fn one_sided_step<R, F>(
    ring: &R,
    elements: &[R::Elem],
    side: Side,
    oracle: &mut F,
    steps: &mut Vec<InductionStep<R::Elem>>,
) -> Result<R::Elem, WitnessError>
where
    R: ComputableRing,
    F: FnMut(&R::Elem) -> Option<R::Elem>,
{
    let Some((target, others)) = elements.split_last() else {
        return Ok(ring.zero());
    };
    let local = oracle(target)
        .filter(|e| ring.act(side, e, target) == *target)
        .ok_or_else(|| WitnessError::OracleFailed(ring.render(target)))?;
    let residues: Vec<R::Elem> = others
        .iter()
        .map(|m| ring.sub(m, &ring.act(side, &local, m)))
        .collect();
    let inner = one_sided_step(ring, &residues, side, oracle, steps)?;
    debug_assert!(residues.iter().all(|v| ring.act(side, &inner, v) == *v));
    let joined = match side {
        Side::Left => vee(ring, &inner, &local),
        Side::Right => vee(ring, &local, &inner),
    };
    steps.push(InductionStep {
        target: target.clone(),
        local,
        others: others.to_vec(),
        residues,
        inner,
        joined: joined.clone(),
    });
    Ok(joined)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedTrace<E> {
    pub left: UnitTrace<E>,
    pub right: UnitTrace<E>,
    /// `e'' v e'` with `e'` the left unit and `e''` the right unit.
    pub unit: E,
}

/// A common two-sided unit: left unit `e'`, right unit `e''`, then `e'' v e'`.
pub fn common_two_sided_unit<R, L, Q>(
    ring: &R,
    elements: &[R::Elem],
    left_oracle: &mut L,
    right_oracle: &mut Q,
) -> Result<TwoSidedTrace<R::Elem>, WitnessError>
where
    R: ComputableRing,
    L: FnMut(&R::Elem) -> Option<R::Elem>,
    Q: FnMut(&R::Elem) -> Option<R::Elem>,
{
    let left = common_one_sided_unit(ring, elements, Side::Left, left_oracle)?;
    let right = common_one_sided_unit(ring, elements, Side::Right, right_oracle)?;
    let unit = vee(ring, &right.unit, &left.unit);
    debug_assert!(elements.iter().all(|m| ring.fixes(&unit, Sides::Both, m)));
    Ok(TwoSidedTrace { left, right, unit })
}

/// Joins two commuting idempotent local units; the result is an idempotent
/// fixing both lists on both sides.
pub fn merge_local_units<R: ComputableRing>(
    ring: &R,
    e1: &R::Elem,
    e2: &R::Elem,
    first: &[R::Elem],
    second: &[R::Elem],
) -> Result<R::Elem, WitnessError> {
    for e in [e1, e2] {
        if !ring.is_idempotent(e) {
            return Err(WitnessError::NotIdempotentInput(ring.render(e)));
        }
    }
    if ring.mul(e1, e2) != ring.mul(e2, e1) {
        return Err(WitnessError::NotCommuting(ring.render(e1), ring.render(e2)));
    }
    for (e, list) in [(e1, first), (e2, second)] {
        if let Some(m) = list.iter().find(|m| !ring.fixes(e, Sides::Both, m)) {
            return Err(WitnessError::NotFixed { unit: ring.render(e), element: ring.render(m) });
        }
    }
    let e = vee(ring, e1, e2);
    debug_assert!(ring.is_idempotent(&e));
    debug_assert!(first.iter().chain(second).all(|m| ring.fixes(&e, Sides::Both, m)));
    Ok(e)
}

/// One level of the regular-ring induction.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularStep<E> {
    pub target: E,
    /// `e_1`, the idempotent unit for the earlier elements.
    pub previous: E,
    /// `r_n - e_1 r_n` (left) or `r_n - r_n e_1` (right).
    pub s: E,
    /// quasi-inverse of `s`
    pub t: E,
    /// `st` (left) or `ts` (right)
    pub f: E,
    /// `f - f e_1` (left) or `f - e_1 f` (right)
    pub g: E,
    /// `e_1 + g`
    pub unit: E,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularTrace<E> {
    pub side: Side,
    pub unit: E,
    /// First element first.
    pub steps: Vec<RegularStep<E>>,
}

/// An idempotent one-sided unit for `elements` in a regular ring.
pub fn regular_local_unit<R, F>(
    ring: &R,
    side: Side,
    elements: &[R::Elem],
    quasi_inverse: &mut F,
) -> Result<RegularTrace<R::Elem>, WitnessError>
where
    R: ComputableRing,
    F: FnMut(&R::Elem) -> Option<R::Elem>,
{
    let mut e1 = ring.zero();
    let mut steps = Vec::with_capacity(elements.len());
    for r in elements {
        let s = ring.sub(r, &ring.act(side, &e1, r));
        let t = quasi_inverse(&s)
            .filter(|t| ring.mul(&ring.mul(&s, t), &s) == s)
            .ok_or_else(|| WitnessError::NotRegularAt(ring.render(&s)))?;
        let (f, g) = match side {
            Side::Left => {
                let f = ring.mul(&s, &t);
                let g = ring.sub(&f, &ring.mul(&f, &e1));
                (f, g)
            }
            Side::Right => {
                let f = ring.mul(&t, &s);
                let g = ring.sub(&f, &ring.mul(&e1, &f));
                (f, g)
            }
        };
        let unit = ring.add(&e1, &g);
        debug_assert!(ring.is_idempotent(&f));
        debug_assert!(match side {
            Side::Left => ring.is_zero(&ring.mul(&e1, &f)),
            Side::Right => ring.is_zero(&ring.mul(&f, &e1)),
        });
        debug_assert!(ring.is_idempotent(&g));
        debug_assert!(ring.is_zero(&ring.mul(&e1, &g)) && ring.is_zero(&ring.mul(&g, &e1)));
        debug_assert!(ring.is_idempotent(&unit));
        steps.push(RegularStep { target: r.clone(), previous: e1, s, t, f, g, unit: unit.clone() });
        e1 = unit;
    }
    debug_assert!(elements.iter().all(|m| ring.act(side, &e1, m) == *m));
    Ok(RegularTrace { side, unit: e1, steps })
}

/// First `s` in enumeration order with `r s r = r`.
pub fn quasi_inverse(ring: &FiniteRing, r: &Element) -> Result<Element, WitnessError> {
    ring.search_quasi_inverse(r)
        .ok_or_else(|| WitnessError::NotRegularAt(ring.render(r)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdempotentUnitTrace<E> {
    /// `e'`, an idempotent right unit for the elements.
    pub right_unit: E,
    /// `e''`, an idempotent left unit for the elements and `e'`.
    pub left_unit: E,
    /// `e' v e''`
    pub unit: E,
    pub join: JoinReport<E>,
}

/// A two-sided idempotent unit from one-sided idempotent units.
pub fn two_sided_idempotent_unit<R, L, Q>(
    ring: &R,
    elements: &[R::Elem],
    left_oracle: &mut L,
    right_oracle: &mut Q,
) -> Result<IdempotentUnitTrace<R::Elem>, WitnessError>
where
    R: ComputableRing,
    L: FnMut(&[R::Elem]) -> Option<R::Elem>,
    Q: FnMut(&[R::Elem]) -> Option<R::Elem>,
{
    let failed = || WitnessError::OracleFailed(render_list(ring, elements));
    let right_unit = right_oracle(elements)
        .filter(|e| ring.is_idempotent(e) && elements.iter().all(|m| ring.mul(m, e) == *m))
        .ok_or_else(failed)?;
    let mut extended = elements.to_vec();
    extended.push(right_unit.clone());
    let left_unit = left_oracle(&extended)
        .filter(|e| ring.is_idempotent(e) && extended.iter().all(|m| ring.mul(e, m) == *m))
        .ok_or_else(failed)?;
    // e' v e'' = second v first with first = e'', second = e'; condition (ii) is e''e' = e'
    let join = join_analysis(ring, &left_unit, &right_unit)?;
    debug_assert!(join.conditions[1]);
    let unit = join.join.clone();
    debug_assert!(ring.is_idempotent(&unit));
    debug_assert!(elements.iter().all(|m| ring.fixes(&unit, Sides::Both, m)));
    Ok(IdempotentUnitTrace { right_unit, left_unit, unit, join })
}

/// Promotes a one-sided identity to a two-sided one.
///
/// `known` names the side on which the ring is unital; the ring must also be
/// s-unital on the other side. With `f` a right identity and `e` a common left
/// unit for `{r, f}`, `e = ef = f`, so `fr = r`; symmetrically for left.
pub fn promote_to_identity(ring: &FiniteRing, known: Side) -> Result<Element, WitnessError> {
    let identities = ring.one_sided_identities(known);
    let f = identities
        .first()
        .cloned()
        .ok_or_else(|| WitnessError::HypothesisFailed(format!("{} is not {known} unital", ring.name())))?;
    let other = known.opposite();
    let elements: Vec<Element> = ring.elements().collect();
    if let Some(r) = elements
        .iter()
        .find(|r| ring.search_unit(std::slice::from_ref(r), other.into(), false).is_none())
    {
        return Err(WitnessError::HypothesisFailed(format!(
            "{} is not {other} s-unital at {}",
            ring.name(),
            ring.render(r)
        )));
    }
    let mut oracle = |m: &Element| ring.search_unit(std::slice::from_ref(m), other.into(), false);
    for r in &elements {
        let e = common_one_sided_unit(ring, &[r.clone(), f.clone()], other, &mut oracle)?.unit;
        // f is a one-sided identity on `known`, so e = e f (right) or f e (left)
        debug_assert_eq!(ring.act(known, &f, &e), e);
        if e != f || ring.act(other, &f, r) != *r {
            return Err(WitnessError::HypothesisFailed(format!(
                "unit {} for {} differs from {}",
                ring.render(&e),
                ring.render(r),
                ring.render(&f)
            )));
        }
    }
    let left = ring.one_sided_identities(Side::Left);
    let right = ring.one_sided_identities(Side::Right);
    debug_assert!(left == [f.clone()] && right == [f.clone()]);
    if left != [f.clone()] || right != [f.clone()] {
        return Err(WitnessError::HypothesisFailed("identity is not unique".into()));
    }
    Ok(f)
}

fn render_list<R: ComputableRing>(ring: &R, elements: &[R::Elem]) -> String {
    elements.iter().map(|e| ring.render(e)).collect::<Vec<_>>().join("; ")
}

impl<E> JoinReport<E> {
    pub fn to_json<R: ComputableRing<Elem = E>>(&self, ring: &R) -> Value {
        json!({
            "e_prime": ring.render(&self.first),
            "e_double_prime": ring.render(&self.second),
            "join": ring.render(&self.join),
            "square": ring.render(&self.square),
            "square_defect": ring.render(&self.square_defect),
            "idempotent": ring.is_zero(&self.square_defect),
            "expansion_holds": self.expansion_holds,
            "conditions": {
                "i": self.conditions[0],
                "ii": self.conditions[1],
                "iii": self.conditions[2],
                "iv": self.conditions[3],
                "v": self.conditions[4],
            },
        })
    }
}

impl<E> UnitTrace<E> {
    pub fn to_json<R: ComputableRing<Elem = E>>(&self, ring: &R) -> Value {
        let list = |xs: &[E]| xs.iter().map(|x| ring.render(x)).collect::<Vec<_>>();
        json!({
            "side": self.side.name(),
            "unit": ring.render(&self.unit),
            "steps": self.steps.iter().map(|s| json!({
                "m_n": ring.render(&s.target),
                "e_n": ring.render(&s.local),
                "others": list(&s.others),
                "v": list(&s.residues),
                "e_inner": ring.render(&s.inner),
                "join": ring.render(&s.joined),
            })).collect::<Vec<_>>(),
        })
    }
}

impl<E> RegularTrace<E> {
    pub fn to_json<R: ComputableRing<Elem = E>>(&self, ring: &R) -> Value {
        json!({
            "side": self.side.name(),
            "unit": ring.render(&self.unit),
            "steps": self.steps.iter().map(|s| json!({
                "r": ring.render(&s.target),
                "e1": ring.render(&s.previous),
                "s": ring.render(&s.s),
                "t": ring.render(&s.t),
                "f": ring.render(&s.f),
                "g": ring.render(&s.g),
                "e": ring.render(&s.unit),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{b_l, b_r, cyclic_ring, direct_sum, matrix_ring, prime_field, FiniteRankMatrices};

    fn el(c: &[u64]) -> Element {
        Element::from_coords(c.to_vec())
    }

    fn f2xf2() -> FiniteRing {
        direct_sum(&[prime_field(2).unwrap(), prime_field(2).unwrap()]).unwrap()
    }

    fn m2f2() -> FiniteRing {
        matrix_ring(&prime_field(2).unwrap(), 2).unwrap()
    }

    fn brute(ring: &FiniteRing, side: Side) -> impl FnMut(&Element) -> Option<Element> + '_ {
        move |m| ring.search_unit(std::slice::from_ref(m), side.into(), false)
    }

    #[test]
    fn vee_examples() {
        let r = f2xf2();
        assert_eq!(vee(&r, &el(&[1, 0]), &el(&[0, 1])), el(&[1, 1]));
        for e in r.idempotents() {
            assert_eq!(vee(&r, &e, &e), e);
        }
        let z8 = cyclic_ring(8).unwrap();
        assert_eq!(vee(&z8, &el(&[3]), &el(&[5])), el(&[1]));
    }

    #[test]
    fn non_idempotent_join_in_m2() {
        let m = m2f2();
        let e1 = m.matrix_unit(0, 0).unwrap();
        // [[0,1],[0,1]]
        let e2 = m.add(&m.matrix_unit(0, 1).unwrap(), &m.matrix_unit(1, 1).unwrap()).unwrap();
        let report = join_analysis(&m, &e1, &e2).unwrap();
        assert_eq!(report.join, el(&[1, 1, 0, 1]));
        assert_eq!(report.square, el(&[1, 0, 0, 1]));
        assert_ne!(report.square, report.join);
        assert_eq!(report.conditions, [false; 5]);
        assert!(report.expansion_holds);
        // e^2 = e + e'e''
        assert_eq!(report.square, m.add(&report.join, &m.mul(&e1, &e2).unwrap()).unwrap());
    }

    #[test]
    fn orthogonal_and_equal_joins() {
        let r = f2xf2();
        let report = join_analysis(&r, &el(&[1, 0]), &el(&[0, 1])).unwrap();
        assert!(report.conditions[4]);
        assert_eq!(report.join, el(&[1, 1]));
        assert!(report.square_defect.is_zero());
        let m = m2f2();
        for e in m.idempotents() {
            let report = join_analysis(&m, &e, &e).unwrap();
            assert_eq!(report.conditions, [true; 5]);
            assert_eq!(report.join, e);
        }
        assert!(matches!(
            join_analysis(&m, &m.matrix_unit(0, 1).unwrap(), &m.zero()),
            Err(WitnessError::NotIdempotentInput(_))
        ));
    }

    #[test]
    fn one_sided_induction_traces() {
        let r = f2xf2();
        let trace = common_one_sided_unit(&r, &[el(&[1, 0]), el(&[0, 1])], Side::Left, &mut brute(&r, Side::Left))
            .unwrap();
        assert_eq!(trace.unit, el(&[1, 1]));
        let outer = trace.steps.last().unwrap();
        assert_eq!(outer.local, el(&[0, 1]));
        assert_eq!(outer.residues, vec![el(&[1, 0])]);
        assert_eq!(outer.inner, el(&[1, 0]));

        let b = b_l(2).unwrap();
        let trace =
            common_one_sided_unit(&b, &[el(&[0, 1]), el(&[1, 1])], Side::Left, &mut brute(&b, Side::Left)).unwrap();
        assert_eq!(trace.unit, el(&[1, 0]));
        assert_eq!(trace.steps.last().unwrap().residues, vec![el(&[0, 0])]);

        let z4 = cyclic_ring(4).unwrap();
        let mut one = |_: &Element| Some(el(&[1]));
        let trace = common_one_sided_unit(&z4, &[el(&[3])], Side::Right, &mut one).unwrap();
        assert_eq!(trace.unit, el(&[1]));
        let empty = common_one_sided_unit(&z4, &[], Side::Left, &mut one).unwrap();
        assert_eq!(empty.unit, el(&[0]));
    }

    #[test]
    fn join_order_differs_between_sides() {
        // left uses e' v e_n, right uses e_n v e'; over B_r the right trace has
        // a nonzero inner unit whose product with e_n is not symmetric
        let b = b_r(2).unwrap();
        let elements = [el(&[1, 1]), el(&[0, 1])];
        let trace = common_one_sided_unit(&b, &elements, Side::Right, &mut brute(&b, Side::Right)).unwrap();
        let outer = trace.steps.last().unwrap();
        assert_eq!(outer.joined, vee(&b, &outer.local, &outer.inner));
        for m in &elements {
            assert_eq!(b.mul(m, &trace.unit).unwrap(), *m);
        }
        let failing = common_one_sided_unit(&b, &elements, Side::Left, &mut brute(&b, Side::Left));
        assert!(matches!(failing, Err(WitnessError::OracleFailed(_))));
    }

    #[test]
    fn bogus_oracle_answers_are_rejected() {
        let z4 = cyclic_ring(4).unwrap();
        let mut liar = |_: &Element| Some(el(&[2]));
        assert!(matches!(
            common_one_sided_unit(&z4, &[el(&[1])], Side::Left, &mut liar),
            Err(WitnessError::OracleFailed(_))
        ));
    }

    #[test]
    fn two_sided_units() {
        let z4 = cyclic_ring(4).unwrap();
        let t = common_two_sided_unit(
            &z4,
            &[el(&[1]), el(&[2]), el(&[3])],
            &mut brute(&z4, Side::Left),
            &mut brute(&z4, Side::Right),
        )
        .unwrap();
        assert_eq!(t.unit, el(&[1]));

        let m = m2f2();
        let id = m.identity().unwrap();
        let mut oracle = |_: &Element| Some(id.clone());
        let mut oracle2 = |_: &Element| Some(id.clone());
        let t = common_two_sided_unit(&m, &[m.matrix_unit(0, 1).unwrap()], &mut oracle, &mut oracle2).unwrap();
        assert_eq!(t.unit, id);

        let fr = FiniteRankMatrices::new(prime_field(2).unwrap()).unwrap();
        let elements = [fr.unit(0, 1), fr.unit(2, 2)];
        let mut left = |x: &_| fr.s_unit_for(std::slice::from_ref(x), Side::Left);
        let mut right = |x: &_| fr.s_unit_for(std::slice::from_ref(x), Side::Right);
        let t = common_two_sided_unit(&fr, &elements, &mut left, &mut right).unwrap();
        assert_eq!(t.unit, fr.projection([0, 1, 2]));
    }

    #[test]
    fn merging_commuting_units() {
        let fr = FiniteRankMatrices::new(prime_field(2).unwrap()).unwrap();
        let e = merge_local_units(&fr, &fr.projection([0]), &fr.projection([1]), &[fr.unit(0, 0)], &[fr.unit(1, 1)])
            .unwrap();
        assert_eq!(e, fr.projection([0, 1]));
        let same = merge_local_units(&fr, &fr.projection([3]), &fr.projection([3]), &[], &[]).unwrap();
        assert_eq!(same, fr.projection([3]));

        let m = m2f2();
        let e00 = m.matrix_unit(0, 0).unwrap();
        let e2 = m.add(&m.matrix_unit(0, 1).unwrap(), &m.matrix_unit(1, 1).unwrap()).unwrap();
        assert!(matches!(merge_local_units(&m, &e00, &e2, &[], &[]), Err(WitnessError::NotCommuting(_, _))));
        assert!(matches!(
            merge_local_units(&m, &e00, &e00, &[m.matrix_unit(1, 1).unwrap()], &[]),
            Err(WitnessError::NotFixed { .. })
        ));
    }

    #[test]
    fn regular_unit_single_step() {
        let m = m2f2();
        let e01 = m.matrix_unit(0, 1).unwrap();
        let mut q = |r: &Element| m.search_quasi_inverse(r);
        let trace = regular_local_unit(&m, Side::Left, std::slice::from_ref(&e01), &mut q).unwrap();
        let step = &trace.steps[0];
        assert_eq!(step.s, e01);
        assert_eq!(step.t, m.matrix_unit(1, 0).unwrap());
        assert_eq!(step.f, m.matrix_unit(0, 0).unwrap());
        assert_eq!(trace.unit, m.matrix_unit(0, 0).unwrap());

        let both = [e01.clone(), m.matrix_unit(1, 0).unwrap()];
        for side in [Side::Left, Side::Right] {
            let trace = regular_local_unit(&m, side, &both, &mut q).unwrap();
            assert!(m.is_idempotent(&trace.unit));
            for r in &both {
                assert_eq!(m.act(side, &trace.unit, r), *r);
            }
        }
        let z4 = cyclic_ring(4).unwrap();
        let mut q4 = |r: &Element| z4.search_quasi_inverse(r);
        assert_eq!(regular_local_unit(&z4, Side::Left, &[el(&[0])], &mut q4).unwrap().unit, el(&[0]));
    }

    #[test]
    fn quasi_inverses() {
        let m = m2f2();
        assert_eq!(quasi_inverse(&m, &m.matrix_unit(0, 1).unwrap()).unwrap(), m.matrix_unit(1, 0).unwrap());
        let z4 = cyclic_ring(4).unwrap();
        assert_eq!(quasi_inverse(&z4, &el(&[1])).unwrap(), el(&[1]));
        assert_eq!(quasi_inverse(&z4, &el(&[2])), Err(WitnessError::NotRegularAt("(2)".into())));
    }

    #[test]
    fn idempotent_units_from_one_sided_ones() {
        let fr = FiniteRankMatrices::new(prime_field(2).unwrap()).unwrap();
        let mut left = |xs: &[_]| fr.idempotent_unit_for(xs, Sides::Left);
        let mut right = |xs: &[_]| fr.idempotent_unit_for(xs, Sides::Right);
        let t = two_sided_idempotent_unit(&fr, &[fr.unit(0, 1)], &mut left, &mut right).unwrap();
        assert_eq!(t.unit, fr.projection([0, 1]));

        let m = m2f2();
        let e00 = m.matrix_unit(0, 0).unwrap();
        let mut l = |_: &[Element]| Some(e00.clone());
        let mut r = |_: &[Element]| Some(e00.clone());
        let t = two_sided_idempotent_unit(&m, std::slice::from_ref(&e00), &mut l, &mut r).unwrap();
        assert_eq!(t.unit, e00);

        let z4 = cyclic_ring(4).unwrap();
        let mut one = |_: &[Element]| Some(el(&[1]));
        let mut one2 = |_: &[Element]| Some(el(&[1]));
        let t = two_sided_idempotent_unit(&z4, &[el(&[2]), el(&[3])], &mut one, &mut one2).unwrap();
        assert_eq!(t.unit, el(&[1]));
    }

    #[test]
    fn promotion() {
        let z4 = cyclic_ring(4).unwrap();
        assert_eq!(promote_to_identity(&z4, Side::Right).unwrap(), el(&[1]));
        let m = m2f2();
        assert_eq!(promote_to_identity(&m, Side::Left).unwrap(), m.identity().unwrap());
        assert!(matches!(promote_to_identity(&b_r(2).unwrap(), Side::Right), Err(WitnessError::HypothesisFailed(_))));
        assert!(matches!(promote_to_identity(&b_l(2).unwrap(), Side::Right), Err(WitnessError::HypothesisFailed(_))));
    }
}
