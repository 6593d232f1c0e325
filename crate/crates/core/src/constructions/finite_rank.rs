use std::collections::{BTreeMap, BTreeSet};

use super::ConstructionError;
use crate::computable::{ComputableRing, Sides};
use crate::ring::{Element, FiniteRing, Side};

/// An `N x N` matrix with finitely many nonzero entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteMatrix(BTreeMap<(usize, usize), Element>);

impl FiniteMatrix {
    pub fn new(entries: impl IntoIterator<Item = ((usize, usize), Element)>) -> Self {
        FiniteMatrix(entries.into_iter().filter(|(_, e)| !e.is_zero()).collect())
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Element)> {
        self.0.iter().map(|(&k, v)| (k, v))
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&Element> {
        self.0.get(&(i, j))
    }

    /// Row and column indices carrying a nonzero entry.
    pub fn indices(&self) -> BTreeSet<usize> {
        self.0.keys().flat_map(|&(i, j)| [i, j]).collect()
    }
}

/// Finite-rank linear maps of a countably infinite free module over a
/// unital finite base ring, as finitely supported `N x N` matrices.
#[derive(Debug, Clone)]
pub struct FiniteRankMatrices {
    base: FiniteRing,
    one: Element,
    prime: Option<u64>,
}

impl FiniteRankMatrices {
    pub fn new(base: FiniteRing) -> Result<Self, ConstructionError> {
        let one = base
            .identity()
            .ok_or_else(|| ConstructionError::BaseNotUnital(base.name().to_string()))?;
        // Z/p with 1*1 = 1 and p prime is the field F_p
        let prime = match base.orders() {
            [p] if base.structure_constant(0, 0).coords() == [1] && is_prime(*p) => Some(*p),
            _ => None,
        };
        Ok(Self { base, one, prime })
    }

    pub fn base(&self) -> &FiniteRing {
        &self.base
    }

    /// The matrix unit `E_ij`.
    pub fn unit(&self, i: usize, j: usize) -> FiniteMatrix {
        FiniteMatrix::new([((i, j), self.one.clone())])
    }

    /// `sum_{i in indices} E_ii`.
    pub fn projection(&self, indices: impl IntoIterator<Item = usize>) -> FiniteMatrix {
        FiniteMatrix::new(indices.into_iter().map(|i| ((i, i), self.one.clone())))
    }

    /// True when generalized inverses are available (base is a prime field).
    pub fn has_quasi_inverses(&self) -> bool {
        self.prime.is_some()
    }

    fn covering_projection(&self, elements: &[FiniteMatrix]) -> FiniteMatrix {
        self.projection(elements.iter().flat_map(|m| m.indices()))
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl ComputableRing for FiniteRankMatrices {
    type Elem = FiniteMatrix;

    fn name(&self) -> String {
        format!("M_fin({})", self.base.name())
    }

    fn zero(&self) -> FiniteMatrix {
        FiniteMatrix::default()
    }

    fn add(&self, a: &FiniteMatrix, b: &FiniteMatrix) -> FiniteMatrix {
        let mut out = a.0.clone();
        for (&k, y) in &b.0 {
            let sum = match out.get(&k) {
                Some(x) => self.base.add_raw(x, y),
                None => y.clone(),
            };
            if sum.is_zero() {
                out.remove(&k);
            } else {
                out.insert(k, sum);
            }
        }
        FiniteMatrix(out)
    }

    fn neg(&self, a: &FiniteMatrix) -> FiniteMatrix {
        FiniteMatrix(a.0.iter().map(|(&k, x)| (k, self.base.group().neg_raw(x))).collect())
    }

    fn mul(&self, a: &FiniteMatrix, b: &FiniteMatrix) -> FiniteMatrix {
        let mut rows_of_b: BTreeMap<usize, Vec<(usize, &Element)>> = BTreeMap::new();
        for (&(j, l), y) in &b.0 {
            rows_of_b.entry(j).or_default().push((l, y));
        }
        let mut out: BTreeMap<(usize, usize), Element> = BTreeMap::new();
        for (&(i, j), x) in &a.0 {
            for &(l, y) in rows_of_b.get(&j).into_iter().flatten() {
                let p = self.base.mul_raw(x, y);
                let slot = out.entry((i, l)).or_insert_with(|| self.base.zero());
                *slot = self.base.add_raw(slot, &p);
            }
        }
        FiniteMatrix::new(out)
    }

    fn render(&self, a: &FiniteMatrix) -> String {
        if a.0.is_empty() {
            return "0".into();
        }
        a.0.iter()
            .map(|(&(i, j), x)| {
                if *x == self.one {
                    format!("E{i}{j}")
                } else {
                    format!("{}*E{i}{j}", self.base.render(x))
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    fn is_zero(&self, a: &FiniteMatrix) -> bool {
        a.0.is_empty()
    }

    /// The diagonal projection onto every row and column index in use.
    fn s_unit_for(&self, elements: &[FiniteMatrix], _side: Side) -> Option<FiniteMatrix> {
        Some(self.covering_projection(elements))
    }

    fn idempotent_unit_for(&self, elements: &[FiniteMatrix], _sides: Sides) -> Option<FiniteMatrix> {
        Some(self.covering_projection(elements))
    }

    /// `E_{b+1, b+1}`, which no matrix supported on indices `<= b` fixes.
    fn probe_outside(&self, bound: usize) -> Option<FiniteMatrix> {
        Some(self.unit(bound + 1, bound + 1))
    }

    fn quasi_inverse(&self, r: &FiniteMatrix) -> Option<FiniteMatrix> {
        let p = self.prime?;
        let idx: Vec<usize> = r.indices().into_iter().collect();
        let dense: Vec<Vec<u64>> = idx
            .iter()
            .map(|&i| {
                idx.iter()
                    .map(|&j| r.entry(i, j).map_or(0, |x| x.coords()[0]))
                    .collect()
            })
            .collect();
        let g = generalized_inverse_mod_p(&dense, p);
        let entries = g.iter().enumerate().flat_map(|(a, row)| {
            let idx = &idx;
            row.iter()
                .enumerate()
                .map(move |(b, &v)| ((idx[a], idx[b]), Element::from_coords(vec![v])))
        });
        Some(FiniteMatrix::new(entries))
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// `G` with `A G A = A` for a square matrix over `F_p`.
///
/// Row-reduce `[A | I]` to `[R | P]` with `PA = R` in reduced echelon form. If
/// row `k` of `R` has its pivot in column `c_k`, then `A = A[:, c] R[..r]`, and
/// `G = S P` with `S` sending row `k` to row `c_k` gives `A G A = A`.
pub(crate) fn generalized_inverse_mod_p(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut rows: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|&x| x % p).collect();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(found) = (rank..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut g = vec![vec![0; n]; n];
    for (k, &c) in pivots.iter().enumerate() {
        g[c] = rows[k][n..].to_vec();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cyclic_ring, prime_field, zero_ring};

    fn f2() -> FiniteRankMatrices {
        FiniteRankMatrices::new(prime_field(2).unwrap()).unwrap()
    }

    #[test]
    fn matrix_units_multiply() {
        let m = f2();
        assert_eq!(m.mul(&m.unit(0, 1), &m.unit(1, 0)), m.unit(0, 0));
        assert!(m.is_zero(&m.mul(&m.unit(0, 1), &m.unit(0, 1))));
    }

    #[test]
    fn projection_unit_fixes_both_sides() {
        let m = f2();
        let e01 = m.unit(0, 1);
        let e = m.idempotent_unit_for(std::slice::from_ref(&e01), Sides::Both).unwrap();
        assert_eq!(e, m.projection([0, 1]));
        assert!(m.is_idempotent(&e));
        assert_eq!(m.mul(&e, &e01), e01);
        assert_eq!(m.mul(&e01, &e), e01);
    }

    #[test]
    fn base_must_be_unital() {
        assert!(matches!(
            FiniteRankMatrices::new(zero_ring(&[2]).unwrap()),
            Err(ConstructionError::BaseNotUnital(_))
        ));
        assert!(!FiniteRankMatrices::new(cyclic_ring(4).unwrap()).unwrap().has_quasi_inverses());
    }

    #[test]
    fn generalized_inverse_satisfies_aga() {
        for p in [2u64, 3, 5] {
            // every 3x3 matrix with entries in {0, 1, p-1}
            let vals = [0, 1, p - 1];
            for code in 0..3usize.pow(9) {
                let mut c = code;
                let a: Vec<Vec<u64>> = (0..3)
                    .map(|_| {
                        (0..3)
                            .map(|_| {
                                let v = vals[c % 3];
                                c /= 3;
                                v
                            })
                            .collect()
                    })
                    .collect();
                let g = generalized_inverse_mod_p(&a, p);
                let mul = |x: &Vec<Vec<u64>>, y: &Vec<Vec<u64>>| -> Vec<Vec<u64>> {
                    (0..3)
                        .map(|i| (0..3).map(|j| (0..3).map(|k| x[i][k] * y[k][j]).sum::<u64>() % p).collect())
                        .collect()
                };
                assert_eq!(mul(&mul(&a, &g), &a), a, "p={p} a={a:?}");
            }
        }
    }

    #[test]
    fn quasi_inverse_capability() {
        let m = f2();
        let r = m.add(&m.unit(0, 1), &m.unit(2, 2));
        let s = m.quasi_inverse(&r).unwrap();
        assert_eq!(m.mul(&m.mul(&r, &s), &r), r);
    }

    #[test]
    fn render_units() {
        let m = f2();
        assert_eq!(m.render(&m.projection([0, 2])), "E00+E22");
        let m3 = FiniteRankMatrices::new(prime_field(3).unwrap()).unwrap();
        let two = FiniteMatrix::new([((0, 1), Element::from_coords(vec![2]))]);
        assert_eq!(m3.render(&two), "(2)*E01");
    }
}
