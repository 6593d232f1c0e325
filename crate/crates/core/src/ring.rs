//! Finite rings presented by structure constants over a product of cyclic groups.
//!
//! A ring with additive group `Z/n_1 x ... x Z/n_k` is determined by the `k x k`
//! table of generator products `c_ij = e_i e_j`; the product of arbitrary
//! elements is the bilinear extension `rs = sum_ij r_i s_j c_ij`.

use std::fmt;

use thiserror::Error;

/// Upper bound on the size of a ring that is enumerated element by element.
pub const MAX_ENUMERABLE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("structure constant e{}*e{} is not killed by both generator orders", .i + 1, .j + 1)]
    OrderIncompatible { i: usize, j: usize },
    #[error("generators e{}, e{}, e{} violate associativity", .i + 1, .j + 1, .l + 1)]
    NonAssociative { i: usize, j: usize, l: usize },
    #[error("element {0} does not belong to the additive group")]
    GroupMismatch(String),
    #[error("group too large: {0}")]
    TooLarge(String),
}

/// Which side a unit acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A coordinate vector, each coordinate reduced into `[0, n_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<u64>);

impl Element {
    /// Wraps raw coordinates; membership is checked by the ring operations.
    pub fn from_coords(coords: Vec<u64>) -> Self {
        Element(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `Z/n_1 x ... x Z/n_k`. The empty product is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
    size: u64,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self, RingError> {
        if let Some(&n) = orders.iter().find(|&&n| n < 2) {
            return Err(RingError::BadShape(format!("cyclic factor of order {n}; orders must be >= 2")));
        }
        let size = orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| RingError::TooLarge(format!("product of orders {orders:?} overflows")))?;
        Ok(Self { orders, size })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// The `i`-th generator (0-based).
    pub fn generator(&self, i: usize) -> Element {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Element(c)
    }

    pub fn contains(&self, e: &Element) -> bool {
        e.0.len() == self.rank() && e.0.iter().zip(&self.orders).all(|(&c, &n)| c < n)
    }

    /// Builds an element from arbitrary integers, reducing each coordinate.
    pub fn reduce(&self, coords: &[i64]) -> Result<Element, RingError> {
        if coords.len() != self.rank() {
            return Err(RingError::BadShape(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        Ok(Element(
            coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    /// Builds an element from coordinates that must already be reduced.
    pub fn element(&self, coords: Vec<u64>) -> Result<Element, RingError> {
        let e = Element(coords);
        if self.contains(&e) {
            Ok(e)
        } else {
            Err(RingError::GroupMismatch(e.to_string()))
        }
    }

    pub(crate) fn add_raw(&self, a: &Element, b: &Element) -> Element {
        Element(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub(crate) fn neg_raw(&self, a: &Element) -> Element {
        Element(a.0.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect())
    }

    pub(crate) fn sub_raw(&self, a: &Element, b: &Element) -> Element {
        Element(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + n - y) % n)
                .collect(),
        )
    }

    /// `k * a` for an arbitrary non-negative integer `k`.
    pub(crate) fn scale_raw(&self, k: u128, a: &Element) -> Element {
        Element(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &n)| ((k % n as u128) * x as u128 % n as u128) as u64)
                .collect(),
        )
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_raw(a, b))
    }

    pub fn neg(&self, a: &Element) -> Result<Element, RingError> {
        self.check(a)?;
        Ok(self.neg_raw(a))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub_raw(a, b))
    }

    fn check(&self, a: &Element) -> Result<(), RingError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(RingError::GroupMismatch(a.to_string()))
        }
    }

    /// Position of `e` in lexicographic enumeration order.
    pub fn index_of(&self, e: &Element) -> usize {
        e.0.iter()
            .zip(&self.orders)
            .fold(0u64, |acc, (&c, &n)| acc * n + c) as usize
    }

    pub fn element_at(&self, mut index: usize) -> Element {
        let mut coords = vec![0; self.rank()];
        for (slot, &n) in coords.iter_mut().zip(&self.orders).rev() {
            *slot = index as u64 % n;
            index /= n as usize;
        }
        Element(coords)
    }

    pub(crate) fn enumerable_size(&self) -> Result<usize, RingError> {
        if self.size > MAX_ENUMERABLE {
            Err(RingError::TooLarge(format!("{} elements exceeds enumeration limit {MAX_ENUMERABLE}", self.size)))
        } else {
            Ok(self.size as usize)
        }
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size as usize).map(move |i| self.element_at(i))
    }

    /// Additive order of `a`.
    pub fn order_of(&self, a: &Element) -> u64 {
        a.0.iter()
            .zip(&self.orders)
            .map(|(&c, &n)| n / gcd(c, n))
            .fold(1, lcm)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A subgroup of the additive group, stored as its sorted member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<Element>,
}

impl Subgroup {
    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.members.binary_search(e).is_ok()
    }
}

/// Extra naming information for matrix rings, used to print and parse
/// named matrix units such as `E01`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixLabels {
    pub n: usize,
    pub base_rank: usize,
    pub base_one: Vec<u64>,
}

/// A validated finite ring.
#[derive(Debug, Clone)]
pub struct FiniteRing {
    name: String,
    group: FiniteAbelianGroup,
    table: Vec<Element>,
    nonzero: Vec<(usize, usize, Element)>,
    labels: Option<MatrixLabels>,
}

/// Validates and builds a finite ring; see [`FiniteRing::new`].
pub fn make_finite_ring(orders: Vec<u64>, table: Vec<Vec<u64>>, name: &str) -> Result<FiniteRing, RingError> {
    FiniteRing::new(orders, table, name)
}

impl FiniteRing {
    /// `table[i * k + j]` holds the coordinates of `e_i e_j`. Coordinates must
    /// already be reduced; the table is checked for order compatibility and
    /// generator-level associativity.
    pub fn new(orders: Vec<u64>, table: Vec<Vec<u64>>, name: &str) -> Result<Self, RingError> {
        let group = FiniteAbelianGroup::new(orders)?;
        let k = group.rank();
        if table.len() != k * k {
            return Err(RingError::BadShape(format!("expected {} structure constants, got {}", k * k, table.len())));
        }
        let mut entries = Vec::with_capacity(k * k);
        for (idx, coords) in table.into_iter().enumerate() {
            let (i, j) = (idx / k, idx % k);
            if coords.len() != k {
                return Err(RingError::BadShape(format!(
                    "e{}*e{} has {} coordinates, expected {k}",
                    i + 1,
                    j + 1,
                    coords.len()
                )));
            }
            let e = Element(coords);
            if !group.contains(&e) {
                return Err(RingError::BadShape(format!(
                    "e{}*e{} = {e} has a coordinate outside its cyclic factor",
                    i + 1,
                    j + 1
                )));
            }
            entries.push(e);
        }
        let ring = Self::from_parts(name, group, entries);
        ring.validate()?;
        Ok(ring)
    }

    pub(crate) fn from_parts(name: &str, group: FiniteAbelianGroup, table: Vec<Element>) -> Self {
        let k = group.rank();
        let nonzero = table
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| (idx / k, idx % k, c.clone()))
            .collect();
        Self { name: name.to_string(), group, table, nonzero, labels: None }
    }

    pub(crate) fn with_labels(mut self, labels: MatrixLabels) -> Self {
        self.labels = Some(labels);
        self
    }

    fn validate(&self) -> Result<(), RingError> {
        let k = self.rank();
        let orders = self.group.orders();
        for i in 0..k {
            for j in 0..k {
                let c = self.structure_constant(i, j);
                if !self.group.scale_raw(orders[i] as u128, c).is_zero()
                    || !self.group.scale_raw(orders[j] as u128, c).is_zero()
                {
                    return Err(RingError::OrderIncompatible { i, j });
                }
            }
        }
        let gens: Vec<Element> = (0..k).map(|i| self.group.generator(i)).collect();
        for i in 0..k {
            for j in 0..k {
                let ij = self.structure_constant(i, j);
                for l in 0..k {
                    let left = self.mul_raw(ij, &gens[l]);
                    let right = self.mul_raw(&gens[i], self.structure_constant(j, l));
                    if left != right {
                        return Err(RingError::NonAssociative { i, j, l });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn orders(&self) -> &[u64] {
        self.group.orders()
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn size(&self) -> u64 {
        self.group.size()
    }

    pub fn labels(&self) -> Option<&MatrixLabels> {
        self.labels.as_ref()
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &Element {
        &self.table[i * self.rank() + j]
    }

    /// True when both rings share additive group and multiplication table.
    pub fn same_table(&self, other: &FiniteRing) -> bool {
        self.group == other.group && self.table == other.table
    }

    pub fn zero(&self) -> Element {
        self.group.zero()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.group.elements()
    }

    /// Elements as a vector, refusing rings too large to enumerate.
    pub fn element_list(&self) -> Result<Vec<Element>, RingError> {
        self.group.enumerable_size()?;
        Ok(self.elements().collect())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        self.group.add(a, b)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        for e in [a, b] {
            if !self.group.contains(e) {
                return Err(RingError::GroupMismatch(e.to_string()));
            }
        }
        Ok(self.mul_raw(a, b))
    }

    pub(crate) fn add_raw(&self, a: &Element, b: &Element) -> Element {
        self.group.add_raw(a, b)
    }

    pub(crate) fn sub_raw(&self, a: &Element, b: &Element) -> Element {
        self.group.sub_raw(a, b)
    }

    pub(crate) fn mul_raw(&self, a: &Element, b: &Element) -> Element {
        let orders = self.group.orders();
        let mut out = vec![0u64; orders.len()];
        for (i, j, c) in &self.nonzero {
            let coef = a.0[*i] as u128 * b.0[*j] as u128;
            if coef == 0 {
                continue;
            }
            for ((slot, &ct), &n) in out.iter_mut().zip(&c.0).zip(orders) {
                let n = n as u128;
                *slot = ((*slot as u128 + (coef % n) * ct as u128) % n) as u64;
            }
        }
        Element(out)
    }

    /// `e * m` for [`Side::Left`], `m * e` for [`Side::Right`].
    pub(crate) fn act_raw(&self, side: Side, e: &Element, m: &Element) -> Element {
        match side {
            Side::Left => self.mul_raw(e, m),
            Side::Right => self.mul_raw(m, e),
        }
    }

    /// Smallest additive subgroup containing `seed`.
    pub fn additive_closure<'a, I>(&self, seed: I) -> Subgroup
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let gens: Vec<&Element> = seed.into_iter().filter(|g| !g.is_zero()).collect();
        let mut seen = std::collections::HashSet::new();
        let zero = self.zero();
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = self.add_raw(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let mut members: Vec<Element> = seen.into_iter().collect();
        members.sort();
        Subgroup { members }
    }

    /// All `e` with `e^2 = e`, in enumeration order.
    pub fn idempotents(&self) -> Vec<Element> {
        self.elements().filter(|e| self.mul_raw(e, e) == *e).collect()
    }

    /// Every `e` with `e r = r` (left) or `r e = r` (right) for all `r`.
    pub fn one_sided_identities(&self, side: Side) -> Vec<Element> {
        let all: Vec<Element> = self.elements().collect();
        all.iter()
            .filter(|e| all.iter().all(|r| self.act_raw(side, e, r) == *r))
            .cloned()
            .collect()
    }

    /// The two-sided identity, if there is one.
    pub fn identity(&self) -> Option<Element> {
        let all: Vec<Element> = self.elements().collect();
        all.iter()
            .find(|e| all.iter().all(|r| self.mul_raw(e, r) == *r && self.mul_raw(r, e) == *r))
            .cloned()
    }

    /// Renders an element, using named matrix units when the ring carries
    /// matrix labels and the element is a sum of distinct units.
    pub fn render(&self, e: &Element) -> String {
        if let Some(labels) = &self.labels {
            if let Some(s) = render_matrix_units(labels, e) {
                return s;
            }
        }
        e.to_string()
    }

    /// Coordinates of the matrix unit `E_ij`, if this is a labeled matrix ring.
    pub fn matrix_unit(&self, i: usize, j: usize) -> Option<Element> {
        let labels = self.labels.as_ref()?;
        if i >= labels.n || j >= labels.n {
            return None;
        }
        let mut coords = vec![0; self.rank()];
        let start = (i * labels.n + j) * labels.base_rank;
        coords[start..start + labels.base_rank].copy_from_slice(&labels.base_one);
        Some(Element(coords))
    }
}

fn render_matrix_units(labels: &MatrixLabels, e: &Element) -> Option<String> {
    if e.is_zero() {
        return Some("0".into());
    }
    let mut units = Vec::new();
    for (pos, block) in e.0.chunks(labels.base_rank).enumerate() {
        if block.iter().all(|&c| c == 0) {
            continue;
        }
        if block != labels.base_one.as_slice() {
            return None;
        }
        units.push(format!("E{}{}", pos / labels.n, pos % labels.n));
    }
    Some(units.join("+"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FiniteRing {
        FiniteRing::new(vec![n], vec![vec![1]], &format!("Z{n}")).unwrap()
    }

    fn b_l2() -> FiniteRing {
        // (a,b)(c,d) = (ac, ad)
        FiniteRing::new(
            vec![2, 2],
            vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![0, 0]],
            "B_l(F2)",
        )
        .unwrap()
    }

    fn el(coords: &[u64]) -> Element {
        Element(coords.to_vec())
    }

    #[test]
    fn validates_left_ring_and_zero_ring() {
        let b = b_l2();
        assert_eq!(b.size(), 4);
        let zero = FiniteRing::new(vec![4], vec![vec![0]], "zero").unwrap();
        assert_eq!(zero.mul(&el(&[2]), &el(&[3])).unwrap(), el(&[0]));
    }

    #[test]
    fn out_of_range_structure_constant_is_bad_shape() {
        let err = FiniteRing::new(vec![2], vec![vec![3]], "bad").unwrap_err();
        assert!(matches!(err, RingError::BadShape(_)));
        let err = FiniteRing::new(vec![2, 2], vec![vec![1, 0]], "bad").unwrap_err();
        assert!(matches!(err, RingError::BadShape(_)));
    }

    #[test]
    fn order_incompatible_table_rejected() {
        // e1 has order 2 but e1*e1 = generator of Z4 has order 4.
        let err = FiniteRing::new(vec![2, 4], vec![vec![0, 1], vec![0, 0], vec![0, 0], vec![0, 0]], "bad")
            .unwrap_err();
        assert_eq!(err, RingError::OrderIncompatible { i: 0, j: 0 });
    }

    #[test]
    fn non_associative_table_rejected() {
        // e1*e1 = e2, e2*e1 = e1, everything else zero: (e1 e1) e1 = e1 but e1 (e1 e1) = 0.
        let err = FiniteRing::new(vec![2, 2], vec![vec![0, 1], vec![0, 0], vec![1, 0], vec![0, 0]], "bad")
            .unwrap_err();
        assert!(matches!(err, RingError::NonAssociative { .. }));
    }

    #[test]
    fn orders_below_two_rejected() {
        assert!(matches!(FiniteAbelianGroup::new(vec![1]), Err(RingError::BadShape(_))));
        assert!(matches!(
            FiniteAbelianGroup::new(vec![u64::MAX, u64::MAX]),
            Err(RingError::TooLarge(_))
        ));
    }

    #[test]
    fn modular_addition() {
        let z4 = z(4);
        assert_eq!(z4.add(&el(&[3]), &el(&[3])).unwrap(), el(&[2]));
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        assert_eq!(g.add(&el(&[1, 0]), &el(&[0, 1])).unwrap(), el(&[1, 1]));
        assert_eq!(g.add(&el(&[1, 0]), &g.zero()).unwrap(), el(&[1, 0]));
        assert!(matches!(g.add(&el(&[1]), &el(&[0, 1])), Err(RingError::GroupMismatch(_))));
        assert!(matches!(z4.mul(&el(&[4]), &el(&[1])), Err(RingError::GroupMismatch(_))));
    }

    #[test]
    fn left_ring_products() {
        let b = b_l2();
        assert_eq!(b.mul(&el(&[1, 1]), &el(&[0, 1])).unwrap(), el(&[0, 1]));
        assert_eq!(b.mul(&el(&[0, 1]), &el(&[1, 1])).unwrap(), el(&[0, 0]));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let all: Vec<_> = g.elements().collect();
        assert_eq!(all, vec![el(&[0, 0]), el(&[0, 1]), el(&[1, 0]), el(&[1, 1])]);
        let z4: Vec<_> = z(4).elements().collect();
        assert_eq!(z4, vec![el(&[0]), el(&[1]), el(&[2]), el(&[3])]);
        for (i, e) in g.elements().enumerate() {
            assert_eq!(g.index_of(&e), i);
        }
    }

    #[test]
    fn closure_examples() {
        let z4 = z(4);
        assert_eq!(z4.additive_closure([&el(&[2])]).members(), &[el(&[0]), el(&[2])]);
        assert_eq!(z4.additive_closure(std::iter::empty()).members(), &[el(&[0])]);
        let again = z4.additive_closure(z4.additive_closure([&el(&[2])]).members());
        assert_eq!(again, z4.additive_closure([&el(&[2])]));
    }

    #[test]
    fn idempotents_of_small_rings() {
        assert_eq!(z(4).idempotents(), vec![el(&[0]), el(&[1])]);
        let zero2 = FiniteRing::new(vec![2], vec![vec![0]], "zero").unwrap();
        assert_eq!(zero2.idempotents(), vec![el(&[0])]);
    }

    #[test]
    fn additive_orders() {
        let g = FiniteAbelianGroup::new(vec![4, 6]).unwrap();
        assert_eq!(g.order_of(&el(&[2, 3])), 2);
        assert_eq!(g.order_of(&el(&[1, 2])), 12);
        assert_eq!(g.order_of(&g.zero()), 1);
    }

    #[test]
    fn trivial_group_has_one_element() {
        let r = FiniteRing::new(vec![], vec![], "0").unwrap();
        assert_eq!(r.size(), 1);
        assert_eq!(r.elements().count(), 1);
        assert_eq!(r.idempotents().len(), 1);
    }
}
