use std::collections::{BTreeMap, BTreeSet};

use crate::computable::{ComputableRing, Sides};
use crate::ring::{Element, FiniteRing, Side};

/// A finitely supported element of a countable direct sum; absent indices
/// are zero and no stored component is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SupportedElement(BTreeMap<usize, Element>);

impl SupportedElement {
    /// Drops zero components.
    pub fn new(components: impl IntoIterator<Item = (usize, Element)>) -> Self {
        SupportedElement(components.into_iter().filter(|(_, e)| !e.is_zero()).collect())
    }

    /// `x` placed at index `i`.
    pub fn single(i: usize, x: Element) -> Self {
        Self::new([(i, x)])
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.0.keys().copied().collect()
    }

    pub fn component(&self, i: usize) -> Option<&Element> {
        self.0.get(&i)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Element)> {
        self.0.iter().map(|(&i, e)| (i, e))
    }
}

/// `C = sum_{n in N} C_n` with every `C_n` a copy of one finite ring.
#[derive(Debug, Clone)]
pub struct SupportedDirectSum {
    component: FiniteRing,
}

impl SupportedDirectSum {
    pub fn new(component: FiniteRing) -> Self {
        Self { component }
    }

    pub fn component(&self) -> &FiniteRing {
        &self.component
    }

    /// Component values of `elements` grouped by index.
    fn by_index(elements: &[SupportedElement]) -> BTreeMap<usize, Vec<Element>> {
        let mut out: BTreeMap<usize, Vec<Element>> = BTreeMap::new();
        for m in elements {
            for (i, x) in m.components() {
                out.entry(i).or_default().push(x.clone());
            }
        }
        out
    }

    fn assemble<F>(&self, elements: &[SupportedElement], mut unit: F) -> Option<SupportedElement>
    where
        F: FnMut(&[Element]) -> Option<Element>,
    {
        let mut parts = Vec::new();
        for (i, values) in Self::by_index(elements) {
            parts.push((i, unit(&values)?));
        }
        Some(SupportedElement::new(parts))
    }
}

impl ComputableRing for SupportedDirectSum {
    type Elem = SupportedElement;

    fn name(&self) -> String {
        format!("sum_N {}", self.component.name())
    }

    fn zero(&self) -> SupportedElement {
        SupportedElement::default()
    }

    fn add(&self, a: &SupportedElement, b: &SupportedElement) -> SupportedElement {
        let mut out = a.0.clone();
        for (&i, y) in &b.0 {
            let sum = match out.get(&i) {
                Some(x) => self.component.add_raw(x, y),
                None => y.clone(),
            };
            if sum.is_zero() {
                out.remove(&i);
            } else {
                out.insert(i, sum);
            }
        }
        SupportedElement(out)
    }

    fn neg(&self, a: &SupportedElement) -> SupportedElement {
        SupportedElement(a.0.iter().map(|(&i, x)| (i, self.component.group().neg_raw(x))).collect())
    }

    fn mul(&self, a: &SupportedElement, b: &SupportedElement) -> SupportedElement {
        SupportedElement::new(
            a.0.iter()
                .filter_map(|(i, x)| b.0.get(i).map(|y| (*i, self.component.mul_raw(x, y)))),
        )
    }

    fn render(&self, a: &SupportedElement) -> String {
        if a.0.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = a
            .0
            .iter()
            .map(|(i, x)| format!("{i}:{}", self.component.render(x)))
            .collect();
        format!("[{}]", parts.join(", "))
    }

    fn is_zero(&self, a: &SupportedElement) -> bool {
        a.0.is_empty()
    }

    /// Per-index component units, assembled over the union of supports.
    fn s_unit_for(&self, elements: &[SupportedElement], side: Side) -> Option<SupportedElement> {
        self.assemble(elements, |values| self.component.search_unit(values, side.into(), false))
    }

    fn idempotent_unit_for(&self, elements: &[SupportedElement], sides: Sides) -> Option<SupportedElement> {
        self.assemble(elements, |values| self.component.search_unit(values, sides, true))
    }

    /// The first nonzero component element placed at index `bound + 1`.
    fn probe_outside(&self, bound: usize) -> Option<SupportedElement> {
        let x = self.component.elements().find(|x| !x.is_zero())?;
        Some(SupportedElement::single(bound + 1, x))
    }

    fn quasi_inverse(&self, r: &SupportedElement) -> Option<SupportedElement> {
        let mut parts = Vec::new();
        for (i, x) in r.components() {
            parts.push((i, self.component.search_quasi_inverse(x)?));
        }
        Some(SupportedElement::new(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{b_l, prime_field};

    fn el(c: &[u64]) -> Element {
        Element::from_coords(c.to_vec())
    }

    #[test]
    fn left_unit_is_assembled_coordinatewise() {
        let c = SupportedDirectSum::new(b_l(2).unwrap());
        let m = SupportedElement::new([(0, el(&[0, 1])), (3, el(&[1, 1]))]);
        let e = c.s_unit_for(std::slice::from_ref(&m), Side::Left).unwrap();
        assert_eq!(e, SupportedElement::new([(0, el(&[1, 0])), (3, el(&[1, 0]))]));
        assert_eq!(c.mul(&e, &m), m);
    }

    #[test]
    fn right_unit_missing_for_b_l() {
        let c = SupportedDirectSum::new(b_l(2).unwrap());
        let m = SupportedElement::single(0, el(&[0, 1]));
        assert!(c.s_unit_for(&[m], Side::Right).is_none());
    }

    #[test]
    fn zero_components_are_dropped() {
        let c = SupportedDirectSum::new(prime_field(2).unwrap());
        let x = SupportedElement::new([(1, el(&[1])), (2, el(&[0]))]);
        assert_eq!(x.support(), BTreeSet::from([1]));
        assert!(c.is_zero(&c.add(&x, &x)));
        let y = SupportedElement::single(5, el(&[1]));
        assert!(c.is_zero(&c.mul(&x, &y)));
    }

    #[test]
    fn zero_one_functions_are_idempotent() {
        let i = SupportedDirectSum::new(prime_field(2).unwrap());
        for mask in 0u32..64 {
            let f = SupportedElement::new((0..6).filter(|b| mask >> b & 1 == 1).map(|b| (b, el(&[1]))));
            assert_eq!(i.mul(&f, &f), f);
        }
    }

    #[test]
    fn probe_sits_past_the_bound() {
        let c = SupportedDirectSum::new(b_l(2).unwrap());
        let p = c.probe_outside(8).unwrap();
        assert_eq!(p.support(), BTreeSet::from([9]));
        assert_eq!(c.render(&p), "[9:(0,1)]");
    }
}
