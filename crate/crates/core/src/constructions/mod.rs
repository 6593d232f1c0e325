//! Example rings: the finite ones as [`FiniteRing`]s, the infinite ones as
//! [`ComputableRing`](crate::ComputableRing)s with finitely supported elements.

mod finite_rank;
mod supported;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::ring::{Element, FiniteAbelianGroup, FiniteRing, MatrixLabels, RingError};

pub use finite_rank::{FiniteMatrix, FiniteRankMatrices};
pub use supported::{SupportedDirectSum, SupportedElement};

/// Largest finite construction built by [`direct_sum`] and [`matrix_ring`].
pub const MAX_CONSTRUCTED: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("construction too large: {0}")]
    TooLarge(String),
    #[error("base ring {0} is not unital")]
    BaseNotUnital(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

const SMALL_PRIMES: [u64; 4] = [2, 3, 5, 7];

fn check_prime(p: u64) -> Result<(), ConstructionError> {
    if SMALL_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(ConstructionError::UnsupportedParameter(format!("p = {p}; supported primes are 2, 3, 5, 7")))
    }
}

fn table_from(k: usize, entries: &[(usize, usize, Vec<u64>)]) -> Vec<Vec<u64>> {
    let mut table = vec![vec![0; k]; k * k];
    for (i, j, c) in entries {
        table[i * k + j] = c.clone();
    }
    table
}

/// The ring on `Z/n_1 x ... x Z/n_k` with `ab = 0` for all `a, b`.
pub fn zero_ring(orders: &[u64]) -> Result<FiniteRing, ConstructionError> {
    let k = orders.len();
    let name = format!(
        "zero({})",
        orders.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x")
    );
    Ok(FiniteRing::new(orders.to_vec(), vec![vec![0; k]; k * k], &name)?)
}

/// `Z/n` with its usual multiplication.
pub fn cyclic_ring(n: u64) -> Result<FiniteRing, ConstructionError> {
    Ok(FiniteRing::new(vec![n], vec![vec![1 % n.max(1)]], &format!("Z{n}"))?)
}

/// The prime field `F_p`.
pub fn prime_field(p: u64) -> Result<FiniteRing, ConstructionError> {
    check_prime(p)?;
    Ok(FiniteRing::new(vec![p], vec![vec![1]], &format!("F{p}"))?)
}

/// `A x A` with `(a,b)(c,d) = (ac, ad)`, built over an arbitrary finite ring.
pub fn left_pair_ring(base: &FiniteRing) -> Result<FiniteRing, ConstructionError> {
    pair_ring(base, PairKind::Left)
}

/// `A x A` with `(a,b)(c,d) = (ac, bc)`.
pub fn right_pair_ring(base: &FiniteRing) -> Result<FiniteRing, ConstructionError> {
    pair_ring(base, PairKind::Right)
}

#[derive(Clone, Copy)]
enum PairKind {
    Left,
    Right,
}

fn pair_ring(base: &FiniteRing, kind: PairKind) -> Result<FiniteRing, ConstructionError> {
    let k = base.rank();
    let mut orders = base.orders().to_vec();
    orders.extend_from_slice(base.orders());
    let mut entries = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let c = base.structure_constant(i, j).coords();
            // first-block generators multiply as in the base
            let mut first = vec![0; 2 * k];
            first[..k].copy_from_slice(c);
            entries.push((i, j, first));
            let mut second = vec![0; 2 * k];
            second[k..].copy_from_slice(c);
            match kind {
                // (a,0)(0,d) = (0, ad)
                PairKind::Left => entries.push((i, k + j, second)),
                // (0,b)(c,0) = (0, bc)
                PairKind::Right => entries.push((k + i, j, second)),
            }
        }
    }
    let name = match kind {
        PairKind::Left => format!("B_l({})", base.name()),
        PairKind::Right => format!("B_r({})", base.name()),
    };
    Ok(FiniteRing::new(orders, table_from(2 * k, &entries), &name)?)
}

/// `B_l` over `F_p`.
pub fn b_l(p: u64) -> Result<FiniteRing, ConstructionError> {
    left_pair_ring(&prime_field(p)?)
}

/// `B_r` over `F_p`.
pub fn b_r(p: u64) -> Result<FiniteRing, ConstructionError> {
    right_pair_ring(&prime_field(p)?)
}

/// The twisted semigroup ring `(K x K)[G]` over `K = F_p`, `G = {e, g}` with
/// `g` absorbing.
///
/// An element `x_1 + x_2 g` with `x_1 = (a, b)`, `x_2 = (c, d)` has coordinates
/// `(a, b, c, d)`. The product is
/// `x_1 y_1 + (x_1 y_2 e_2 + x_2 y_1 e_1) g` with `e_1 = (1,0)`, `e_2 = (0,1)`.
pub fn twisted_semigroup_ring(p: u64) -> Result<FiniteRing, ConstructionError> {
    check_prime(p)?;
    let entries = [
        (0, 0, vec![1, 0, 0, 0]),
        (1, 1, vec![0, 1, 0, 0]),
        // x_2 y_1 e_1: first coordinate of x_2 times first coordinate of y_1
        (2, 0, vec![0, 0, 1, 0]),
        // x_1 y_2 e_2: second coordinate of x_1 times second coordinate of y_2
        (1, 3, vec![0, 0, 0, 1]),
    ];
    Ok(FiniteRing::new(vec![p; 4], table_from(4, &entries), &format!("twisted(F{p})"))?)
}

/// Finite direct sum with componentwise operations.
pub fn direct_sum(components: &[FiniteRing]) -> Result<FiniteRing, ConstructionError> {
    if components.is_empty() || components.len() > 4 {
        return Err(ConstructionError::TooLarge(format!(
            "direct sums take 1 to 4 components, got {}",
            components.len()
        )));
    }
    let size = components
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.size()))
        .filter(|&s| s <= MAX_CONSTRUCTED)
        .ok_or_else(|| ConstructionError::TooLarge(format!("direct sum exceeds {MAX_CONSTRUCTED} elements")))?;
    debug_assert!(size <= MAX_CONSTRUCTED);
    let orders: Vec<u64> = components.iter().flat_map(|c| c.orders().iter().copied()).collect();
    let k = orders.len();
    let mut entries = Vec::new();
    let mut offset = 0;
    for c in components {
        for i in 0..c.rank() {
            for j in 0..c.rank() {
                let mut coords = vec![0; k];
                coords[offset..offset + c.rank()].copy_from_slice(c.structure_constant(i, j).coords());
                entries.push((offset + i, offset + j, coords));
            }
        }
        offset += c.rank();
    }
    let name = components.iter().map(|c| c.name()).collect::<Vec<_>>().join("+");
    Ok(FiniteRing::new(orders, table_from(k, &entries), &name)?)
}

/// The full matrix ring `M_n(base)` for a unital base.
pub fn matrix_ring(base: &FiniteRing, n: usize) -> Result<FiniteRing, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::UnsupportedParameter("matrix size must be at least 1".into()));
    }
    let size = (0..n * n)
        .try_fold(1u64, |acc, _| acc.checked_mul(base.size()))
        .filter(|&s| s <= MAX_CONSTRUCTED)
        .ok_or_else(|| ConstructionError::TooLarge(format!("M{n}({}) exceeds {MAX_CONSTRUCTED} elements", base.name())))?;
    debug_assert!(size <= MAX_CONSTRUCTED);
    let one = base
        .identity()
        .ok_or_else(|| ConstructionError::BaseNotUnital(base.name().to_string()))?;
    let b = base.rank();
    let k = n * n * b;
    let orders: Vec<u64> = (0..n * n).flat_map(|_| base.orders().iter().copied()).collect();
    let gen = |i: usize, j: usize, a: usize| (i * n + j) * b + a;
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for a in 0..b {
                    for c in 0..b {
                        // (E_ij a)(E_jl c) = E_il (ac)
                        let mut coords = vec![0; k];
                        let start = gen(i, l, 0);
                        coords[start..start + b].copy_from_slice(base.structure_constant(a, c).coords());
                        entries.push((gen(i, j, a), gen(j, l, c), coords));
                    }
                }
            }
        }
    }
    let ring = FiniteRing::new(orders, table_from(k, &entries), &format!("M{n}({})", base.name()))?;
    Ok(ring.with_labels(MatrixLabels { n, base_rank: b, base_one: one.into_coords() }))
}

/// The two-sided ideal generated by `g`, presented as a ring on its own
/// cyclic decomposition.
pub fn principal_ideal_subring(ring: &FiniteRing, g: &Element) -> Result<FiniteRing, ConstructionError> {
    if !ring.group().contains(g) {
        return Err(RingError::GroupMismatch(g.to_string()).into());
    }
    let gens: Vec<Element> = (0..ring.rank()).map(|i| ring.group().generator(i)).collect();
    let mut seed = vec![g.clone()];
    for x in &gens {
        seed.push(ring.mul_raw(x, g));
        seed.push(ring.mul_raw(g, x));
        for y in &gens {
            seed.push(ring.mul_raw(&ring.mul_raw(x, g), y));
        }
    }
    let ideal = ring.additive_closure(&seed);
    let basis = cyclic_basis(ring.group(), ideal.members());
    let orders: Vec<u64> = basis.iter().map(|h| ring.group().order_of(h)).collect();
    let sub_group = FiniteAbelianGroup::new(orders.clone())?;

    // coordinates of every ideal element in the new basis
    let mut coords_of: HashMap<Element, Vec<u64>> = HashMap::new();
    for e in sub_group.elements() {
        let value = e
            .coords()
            .iter()
            .zip(&basis)
            .fold(ring.zero(), |acc, (&a, h)| ring.add_raw(&acc, &ring.group().scale_raw(a as u128, h)));
        coords_of.insert(value, e.into_coords());
    }
    debug_assert_eq!(coords_of.len(), ideal.len());

    let mut table = Vec::with_capacity(basis.len() * basis.len());
    for a in &basis {
        for b in &basis {
            let p = ring.mul_raw(a, b);
            let c = coords_of
                .get(&p)
                .cloned()
                .ok_or_else(|| RingError::BadShape(format!("product {p} escaped the ideal")))?;
            table.push(c);
        }
    }
    let name = format!("({}){}", ring.render(g), ring.name());
    Ok(FiniteRing::new(orders, table, &name)?)
}

/// A list of elements whose cyclic subgroups form an internal direct sum
/// equal to the subgroup `members`.
///
/// Greedy by additive order with backtracking; no normal-form computation.
fn cyclic_basis(group: &FiniteAbelianGroup, members: &[Element]) -> Vec<Element> {
    let mut by_order: Vec<&Element> = members.iter().filter(|e| !e.is_zero()).collect();
    by_order.sort_by_key(|e| std::cmp::Reverse(group.order_of(e)));
    let mut span = HashSet::new();
    span.insert(group.zero());
    let mut chosen = Vec::new();
    let found = extend_basis(group, &by_order, members.len(), &mut span, &mut chosen);
    assert!(found, "every finite abelian group is a direct sum of cyclic groups");
    chosen
}

fn extend_basis(
    group: &FiniteAbelianGroup,
    candidates: &[&Element],
    target: usize,
    span: &mut HashSet<Element>,
    chosen: &mut Vec<Element>,
) -> bool {
    if span.len() == target {
        return true;
    }
    for h in candidates {
        if span.contains(*h) {
            continue;
        }
        let order = group.order_of(h);
        let multiples: Vec<Element> = (1..order).map(|a| group.scale_raw(a as u128, h)).collect();
        if multiples.iter().any(|m| span.contains(m)) {
            continue;
        }
        let new_size = span.len() * order as usize;
        if !target.is_multiple_of(new_size) {
            continue;
        }
        let mut next: HashSet<Element> = HashSet::with_capacity(new_size);
        for s in span.iter() {
            next.insert(s.clone());
            for m in &multiples {
                next.insert(group.add_raw(s, m));
            }
        }
        let saved = std::mem::replace(span, next);
        chosen.push((*h).clone());
        if extend_basis(group, candidates, target, span, chosen) {
            return true;
        }
        chosen.pop();
        *span = saved;
    }
    false
}

/// A named finite ring with the constructor call that builds it.
pub struct CorpusEntry {
    pub key: &'static str,
    pub ring: FiniteRing,
}

/// The finite example rings used throughout tests, the CLI and the demo.
pub fn finite_corpus() -> Vec<CorpusEntry> {
    let f2 = prime_field(2).expect("F2");
    let f3 = prime_field(3).expect("F3");
    let z4 = cyclic_ring(4).expect("Z4");
    let mut out = vec![
        ("zero-z2", zero_ring(&[2])),
        ("zero-z4", zero_ring(&[4])),
        ("zero-z2z2", zero_ring(&[2, 2])),
        ("f2", Ok(f2.clone())),
        ("f3", Ok(f3.clone())),
        ("z4", Ok(z4.clone())),
        ("z6", cyclic_ring(6)),
        ("z8", cyclic_ring(8)),
        ("ideal-2-z4", principal_ideal_subring(&z4, &Element::from_coords(vec![2]))),
        ("ideal-2-z8", principal_ideal_subring(&cyclic_ring(8).expect("Z8"), &Element::from_coords(vec![2]))),
        ("b_l-f2", b_l(2)),
        ("b_r-f2", b_r(2)),
        ("b_l-f3", b_l(3)),
        ("b_r-f3", b_r(3)),
        ("b_l-z4", left_pair_ring(&z4)),
        ("twisted-f2", twisted_semigroup_ring(2)),
        ("twisted-f3", twisted_semigroup_ring(3)),
        ("f2xf2", direct_sum(&[f2.clone(), f2.clone()])),
        ("f2xf2xf2", direct_sum(&[f2.clone(), f2.clone(), f2.clone()])),
        ("b_l+b_l", direct_sum(&[b_l(2).expect("B_l"), b_l(2).expect("B_l")])),
        ("b_l+b_r", direct_sum(&[b_l(2).expect("B_l"), b_r(2).expect("B_r")])),
        ("zero+f2", direct_sum(&[zero_ring(&[2]).expect("zero"), f2.clone()])),
        ("twisted+f2", direct_sum(&[twisted_semigroup_ring(2).expect("twisted"), f2.clone()])),
        ("m1-f2", matrix_ring(&f2, 1)),
        ("m2-f2", matrix_ring(&f2, 2)),
        ("m2-f3", matrix_ring(&f3, 2)),
    ]
    .into_iter()
    .map(|(key, ring)| CorpusEntry { key, ring: ring.unwrap_or_else(|e| panic!("corpus ring {key}: {e}")) })
    .collect::<Vec<_>>();
    out.sort_by_key(|e| e.ring.size());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Side;

    fn el(c: &[u64]) -> Element {
        Element::from_coords(c.to_vec())
    }

    #[test]
    fn zero_rings_square_to_zero() {
        for orders in [vec![2], vec![4], vec![2, 2]] {
            let r = zero_ring(&orders).unwrap();
            for a in r.elements() {
                for b in r.elements() {
                    assert!(r.mul(&a, &b).unwrap().is_zero());
                }
            }
        }
        assert_eq!(zero_ring(&[2, 2]).unwrap().size(), 4);
    }

    #[test]
    fn left_pair_ring_identities() {
        let b = b_l(2).unwrap();
        for x in b.elements() {
            assert_eq!(b.mul(&el(&[1, 0]), &x).unwrap(), x);
            assert!(b.mul(&el(&[0, 1]), &x).unwrap().is_zero());
        }
        let r = b_r(2).unwrap();
        for x in r.elements() {
            assert_eq!(r.mul(&x, &el(&[1, 0])).unwrap(), x);
        }
    }

    #[test]
    fn pair_rings_match_their_formulas_over_f3() {
        let (l, r) = (b_l(3).unwrap(), b_r(3).unwrap());
        for x in l.elements() {
            for y in l.elements() {
                let (a, b, c, d) = (x.coords()[0], x.coords()[1], y.coords()[0], y.coords()[1]);
                assert_eq!(l.mul(&x, &y).unwrap(), el(&[a * c % 3, a * d % 3]));
                assert_eq!(r.mul(&x, &y).unwrap(), el(&[a * c % 3, b * c % 3]));
            }
        }
    }

    #[test]
    fn twisted_ring_products() {
        let t = twisted_semigroup_ring(2).unwrap();
        assert_eq!(t.size(), 16);
        let g = el(&[0, 0, 1, 1]);
        assert!(t.mul(&g, &g).unwrap().is_zero());
        let one = el(&[1, 1, 0, 0]);
        for k in 0..2 {
            for l in 0..2 {
                let x = el(&[k, l, 0, 0]);
                assert_eq!(t.mul(&x, &one).unwrap(), x);
            }
        }
    }

    #[test]
    fn twisted_ring_matches_formula_over_f3() {
        let t = twisted_semigroup_ring(3).unwrap();
        for x in t.elements() {
            for y in t.elements() {
                let (x1, x2) = ([x.coords()[0], x.coords()[1]], [x.coords()[2], x.coords()[3]]);
                let (y1, y2) = ([y.coords()[0], y.coords()[1]], [y.coords()[2], y.coords()[3]]);
                let expected = el(&[
                    x1[0] * y1[0] % 3,
                    x1[1] * y1[1] % 3,
                    x2[0] * y1[0] % 3,
                    x1[1] * y2[1] % 3,
                ]);
                assert_eq!(t.mul(&x, &y).unwrap(), expected);
            }
        }
    }

    #[test]
    fn unsupported_primes() {
        assert!(matches!(b_l(4), Err(ConstructionError::UnsupportedParameter(_))));
        assert!(matches!(twisted_semigroup_ring(11), Err(ConstructionError::UnsupportedParameter(_))));
    }

    #[test]
    fn direct_sum_of_left_rings_has_left_identity() {
        let s = direct_sum(&[b_l(2).unwrap(), b_l(2).unwrap()]).unwrap();
        assert_eq!(s.size(), 16);
        assert!(s.one_sided_identities(Side::Left).contains(&el(&[1, 0, 1, 0])));
        let single = direct_sum(&[prime_field(2).unwrap()]).unwrap();
        assert!(single.same_table(&prime_field(2).unwrap()));
        assert!(matches!(
            direct_sum(&vec![matrix_ring(&prime_field(2).unwrap(), 2).unwrap(); 4]),
            Err(ConstructionError::TooLarge(_))
        ));
    }

    #[test]
    fn matrix_rings() {
        let f2 = prime_field(2).unwrap();
        let m2 = matrix_ring(&f2, 2).unwrap();
        assert_eq!(m2.size(), 16);
        let identity = m2.identity().unwrap();
        assert_eq!(m2.render(&identity), "E00+E11");
        let e01 = m2.matrix_unit(0, 1).unwrap();
        let e10 = m2.matrix_unit(1, 0).unwrap();
        assert_eq!(m2.mul(&e01, &e10).unwrap(), m2.matrix_unit(0, 0).unwrap());
        assert!(matrix_ring(&f2, 1).unwrap().same_table(&f2));
        assert!(matches!(
            matrix_ring(&zero_ring(&[2]).unwrap(), 2),
            Err(ConstructionError::BaseNotUnital(_))
        ));
        assert!(matches!(matrix_ring(&f2, 4), Err(ConstructionError::TooLarge(_))));
    }

    #[test]
    fn principal_ideals() {
        let z4 = cyclic_ring(4).unwrap();
        let i = principal_ideal_subring(&z4, &el(&[2])).unwrap();
        assert_eq!(i.size(), 2);
        assert!(i.structure_constant(0, 0).is_zero());
        let whole = principal_ideal_subring(&z4, &el(&[1])).unwrap();
        assert_eq!(whole.size(), 4);
        assert!(whole.same_table(&z4));
        let trivial = principal_ideal_subring(&z4, &el(&[0])).unwrap();
        assert_eq!(trivial.size(), 1);
        assert_eq!(trivial.rank(), 0);
    }

    #[test]
    fn ideal_of_non_cyclic_group_rebases() {
        // (1,2) generates F2 x 2Z4 inside F2 x Z4
        let s = direct_sum(&[prime_field(2).unwrap(), cyclic_ring(4).unwrap()]).unwrap();
        let i = principal_ideal_subring(&s, &el(&[1, 2])).unwrap();
        assert_eq!(i.size(), 4);
        assert_eq!(i.idempotents().len(), 2);
        let m = matrix_ring(&prime_field(2).unwrap(), 2).unwrap();
        let whole = principal_ideal_subring(&m, &m.matrix_unit(0, 1).unwrap()).unwrap();
        assert_eq!(whole.size(), 16);
    }

    #[test]
    fn corpus_builds() {
        let corpus = finite_corpus();
        assert!(corpus.len() > 20);
        assert!(corpus.iter().all(|e| e.ring.size() <= 256));
    }
}
