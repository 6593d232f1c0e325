//! A common interface over finite rings and infinite rings whose elements
//! have finite representations.
//!
//! The optional capabilities are the only way an infinite ring can answer
//! questions like "is there a unit for these elements"; callers must verify
//! whatever a capability returns.

use std::fmt::Debug;

use crate::ring::{Element, FiniteRing, Side};

/// Left, right, or two-sided action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sides {
    Left,
    Right,
    Both,
}

impl Sides {
    pub fn includes(self, side: Side) -> bool {
        matches!(
            (self, side),
            (Sides::Both, _) | (Sides::Left, Side::Left) | (Sides::Right, Side::Right)
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Sides::Left => "left",
            Sides::Right => "right",
            Sides::Both => "both",
        }
    }
}

impl From<Side> for Sides {
    fn from(side: Side) -> Self {
        match side {
            Side::Left => Sides::Left,
            Side::Right => Sides::Right,
        }
    }
}

pub trait ComputableRing {
    type Elem: Clone + PartialEq + Debug;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// `e * m` on the left, `m * e` on the right.
    fn act(&self, side: Side, e: &Self::Elem, m: &Self::Elem) -> Self::Elem {
        match side {
            Side::Left => self.mul(e, m),
            Side::Right => self.mul(m, e),
        }
    }

    fn fixes(&self, e: &Self::Elem, sides: Sides, m: &Self::Elem) -> bool {
        [Side::Left, Side::Right]
            .into_iter()
            .filter(|&s| sides.includes(s))
            .all(|s| self.act(s, e, m) == *m)
    }

    fn is_idempotent(&self, e: &Self::Elem) -> bool {
        self.mul(e, e) == *e
    }

    /// An element fixing every input on the given side.
    fn s_unit_for(&self, _elements: &[Self::Elem], _side: Side) -> Option<Self::Elem> {
        None
    }

    /// An idempotent fixing every input on the given side(s).
    fn idempotent_unit_for(&self, _elements: &[Self::Elem], _sides: Sides) -> Option<Self::Elem> {
        None
    }

    /// A nonzero element that no element supported within `bound` can fix.
    fn probe_outside(&self, _bound: usize) -> Option<Self::Elem> {
        None
    }

    /// Some `s` with `r s r = r`.
    fn quasi_inverse(&self, _r: &Self::Elem) -> Option<Self::Elem> {
        None
    }
}

impl FiniteRing {
    /// First element (enumeration order) fixing all `elements` on `sides`,
    /// optionally restricted to idempotents.
    pub fn search_unit(&self, elements: &[Element], sides: Sides, idempotent: bool) -> Option<Element> {
        self.elements().find(|e| {
            (!idempotent || self.mul_raw(e, e) == *e)
                && elements.iter().all(|m| {
                    (!sides.includes(Side::Left) || self.mul_raw(e, m) == *m)
                        && (!sides.includes(Side::Right) || self.mul_raw(m, e) == *m)
                })
        })
    }

    /// First `s` in enumeration order with `r s r = r`.
    pub fn search_quasi_inverse(&self, r: &Element) -> Option<Element> {
        self.elements().find(|s| self.mul_raw(&self.mul_raw(r, s), r) == *r)
    }
}

impl ComputableRing for FiniteRing {
    type Elem = Element;

    fn name(&self) -> String {
        FiniteRing::name(self).to_string()
    }

    fn zero(&self) -> Element {
        FiniteRing::zero(self)
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        self.add_raw(a, b)
    }

    fn neg(&self, a: &Element) -> Element {
        self.group().neg_raw(a)
    }

    fn sub(&self, a: &Element, b: &Element) -> Element {
        self.sub_raw(a, b)
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        self.mul_raw(a, b)
    }

    fn render(&self, a: &Element) -> String {
        FiniteRing::render(self, a)
    }

    fn is_zero(&self, a: &Element) -> bool {
        a.is_zero()
    }

    fn s_unit_for(&self, elements: &[Element], side: Side) -> Option<Element> {
        self.search_unit(elements, side.into(), false)
    }

    fn idempotent_unit_for(&self, elements: &[Element], sides: Sides) -> Option<Element> {
        self.search_unit(elements, sides, true)
    }

    fn quasi_inverse(&self, r: &Element) -> Option<Element> {
        self.search_quasi_inverse(r)
    }
}
