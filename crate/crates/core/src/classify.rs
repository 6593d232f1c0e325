//! Class membership for the hierarchy
//!
//! `unital ⊂ enough idempotents ⊂ local unit sets ⊂ locally unital ⊂ s-unital ⊂ idempotent`
//!
//! plus the one-sided variants and regularity. Finite rings are decided by
//! exhaustive search. Infinite constructions get verdicts from their
//! structure: capabilities for positive answers, component-level or probe
//! refutations (recorded with their bound) for negative ones.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::computable::{ComputableRing, Sides};
use crate::constructions::{FiniteMatrix, FiniteRankMatrices, SupportedDirectSum, SupportedElement};
use crate::funring::{bump, rat, CompactSupportFunctions, PiecewisePolynomial};
use crate::ring::{Element, FiniteRing, Side};

/// Largest ring for the direct search for a set of local units.
pub const DIRECT_LOCAL_UNIT_LIMIT: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("family member {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("family members {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("family member {0} is zero")]
    ZeroMember(usize),
    #[error("ring has {0} elements; direct local-unit search stops at {DIRECT_LOCAL_UNIT_LIMIT}")]
    TooLargeForDirectSearch(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingClass {
    IdempotentRing,
    LeftSUnital,
    RightSUnital,
    SUnital,
    LeftLocallyUnital,
    RightLocallyUnital,
    LocallyUnital,
    HasLocalUnitSet,
    HasEnoughIdempotents,
    LeftUnital,
    RightUnital,
    Unital,
    Regular,
}

impl RingClass {
    pub const ALL: [RingClass; 13] = [
        RingClass::IdempotentRing,
        RingClass::LeftSUnital,
        RingClass::RightSUnital,
        RingClass::SUnital,
        RingClass::LeftLocallyUnital,
        RingClass::RightLocallyUnital,
        RingClass::LocallyUnital,
        RingClass::HasLocalUnitSet,
        RingClass::HasEnoughIdempotents,
        RingClass::LeftUnital,
        RingClass::RightUnital,
        RingClass::Unital,
        RingClass::Regular,
    ];

    /// Implications `(stronger, weaker)` that every classification must respect.
    pub const IMPLICATIONS: [(RingClass, RingClass); 14] = [
        (RingClass::Unital, RingClass::HasEnoughIdempotents),
        (RingClass::HasEnoughIdempotents, RingClass::HasLocalUnitSet),
        (RingClass::HasLocalUnitSet, RingClass::LocallyUnital),
        (RingClass::LocallyUnital, RingClass::SUnital),
        (RingClass::SUnital, RingClass::IdempotentRing),
        (RingClass::Unital, RingClass::LeftUnital),
        (RingClass::Unital, RingClass::RightUnital),
        (RingClass::LeftUnital, RingClass::LeftLocallyUnital),
        (RingClass::RightUnital, RingClass::RightLocallyUnital),
        (RingClass::LeftLocallyUnital, RingClass::LeftSUnital),
        (RingClass::RightLocallyUnital, RingClass::RightSUnital),
        (RingClass::LocallyUnital, RingClass::LeftLocallyUnital),
        (RingClass::LocallyUnital, RingClass::RightLocallyUnital),
        (RingClass::Regular, RingClass::LocallyUnital),
    ];

    pub fn key(self) -> &'static str {
        match self {
            RingClass::IdempotentRing => "idempotent_ring",
            RingClass::LeftSUnital => "left_s_unital",
            RingClass::RightSUnital => "right_s_unital",
            RingClass::SUnital => "s_unital",
            RingClass::LeftLocallyUnital => "left_locally_unital",
            RingClass::RightLocallyUnital => "right_locally_unital",
            RingClass::LocallyUnital => "locally_unital",
            RingClass::HasLocalUnitSet => "has_local_unit_set",
            RingClass::HasEnoughIdempotents => "has_enough_idempotents",
            RingClass::LeftUnital => "left_unital",
            RingClass::RightUnital => "right_unital",
            RingClass::Unital => "unital",
            RingClass::Regular => "regular",
        }
    }

    pub fn from_key(key: &str) -> Option<RingClass> {
        RingClass::ALL.into_iter().find(|c| c.key() == key)
    }

    fn s_unital(side: Side) -> RingClass {
        match side {
            Side::Left => RingClass::LeftSUnital,
            Side::Right => RingClass::RightSUnital,
        }
    }

    fn locally_unital(side: Side) -> RingClass {
        match side {
            Side::Left => RingClass::LeftLocallyUnital,
            Side::Right => RingClass::RightLocallyUnital,
        }
    }

    fn unital(side: Side) -> RingClass {
        match side {
            Side::Left => RingClass::LeftUnital,
            Side::Right => RingClass::RightUnital,
        }
    }
}

/// Supporting data for a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Evidence<E> {
    None,
    Element(E),
    Elements(Vec<E>),
    /// `(r, x)` pairs: a unit or quasi-inverse `x` for each `r`.
    Pairs(Vec<(E, E)>),
    Note(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<E> {
    Yes(Evidence<E>),
    /// `bound` is set when the refutation only covers candidates supported
    /// within that bound.
    No { counterexample: Evidence<E>, bound: Option<usize> },
    Unknown(String),
}

impl<E> Verdict<E> {
    pub fn no(counterexample: Evidence<E>) -> Self {
        Verdict::No { counterexample, bound: None }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No { .. } => "no",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn bound(&self) -> Option<usize> {
        match self {
            Verdict::No { bound, .. } => *bound,
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Evidence<E>> {
        match self {
            Verdict::Yes(e) => Some(e),
            _ => None,
        }
    }

    pub fn counterexample(&self) -> Option<&Evidence<E>> {
        match self {
            Verdict::No { counterexample, .. } => Some(counterexample),
            _ => None,
        }
    }
}

/// A verdict for each [`RingClass`].
#[derive(Debug, Clone, PartialEq)]
pub struct Classification<E> {
    pub ring: String,
    pub size: Option<u64>,
    verdicts: BTreeMap<RingClass, Verdict<E>>,
}

impl<E> Classification<E> {
    fn new(ring: String, size: Option<u64>) -> Self {
        Self { ring, size, verdicts: BTreeMap::new() }
    }

    fn set(&mut self, class: RingClass, verdict: Verdict<E>) {
        self.verdicts.insert(class, verdict);
    }

    pub fn get(&self, class: RingClass) -> &Verdict<E> {
        self.verdicts.get(&class).expect("every class is decided or marked unknown")
    }

    pub fn iter(&self) -> impl Iterator<Item = (RingClass, &Verdict<E>)> {
        self.verdicts.iter().map(|(&c, v)| (c, v))
    }

    /// Checks the inclusion chain, `left ∧ right s-unital ⇔ s-unital`, and
    /// that s-unital on one side plus unital on the other gives unital.
    pub fn check_hierarchy(&self) -> Result<(), String> {
        for (strong, weak) in RingClass::IMPLICATIONS {
            if self.get(strong).is_yes() && self.get(weak).is_no() {
                return Err(format!("{} is yes but {} is no", strong.key(), weak.key()));
            }
        }
        let (l, r, s) = (
            self.get(RingClass::LeftSUnital),
            self.get(RingClass::RightSUnital),
            self.get(RingClass::SUnital),
        );
        if l.is_yes() && r.is_yes() && s.is_no() {
            return Err("left and right s-unital but not s-unital".into());
        }
        if s.is_yes() && (l.is_no() || r.is_no()) {
            return Err("s-unital but not s-unital on one side".into());
        }
        for (s_side, unital_side) in [
            (RingClass::LeftSUnital, RingClass::RightUnital),
            (RingClass::RightSUnital, RingClass::LeftUnital),
        ] {
            if self.get(s_side).is_yes() && self.get(unital_side).is_yes() && self.get(RingClass::Unital).is_no() {
                return Err(format!("{} and {} but not unital", s_side.key(), unital_side.key()));
            }
        }
        Ok(())
    }

    pub fn to_record(&self, render: impl Fn(&E) -> String) -> ClassificationRecord {
        let evidence = |e: &Evidence<E>| -> Option<Value> {
            match e {
                Evidence::None => None,
                Evidence::Element(x) => Some(Value::String(render(x))),
                Evidence::Elements(xs) => Some(xs.iter().map(|x| Value::String(render(x))).collect()),
                Evidence::Pairs(ps) => Some(
                    ps.iter()
                        .map(|(a, b)| Value::Array(vec![Value::String(render(a)), Value::String(render(b))]))
                        .collect(),
                ),
                Evidence::Note(n) => Some(Value::String(n.clone())),
            }
        };
        let classes = self
            .iter()
            .map(|(class, v)| {
                let record = match v {
                    Verdict::Yes(w) => VerdictRecord {
                        verdict: "yes".into(),
                        witness: evidence(w),
                        ..VerdictRecord::default()
                    },
                    Verdict::No { counterexample, bound } => VerdictRecord {
                        verdict: "no".into(),
                        counterexample: evidence(counterexample),
                        bound: *bound,
                        ..VerdictRecord::default()
                    },
                    Verdict::Unknown(reason) => VerdictRecord {
                        verdict: "unknown".into(),
                        reason: Some(reason.clone()),
                        ..VerdictRecord::default()
                    },
                };
                (class.key().to_string(), record)
            })
            .collect();
        ClassificationRecord { ring: self.ring.clone(), size: self.size, classes }
    }
}

/// Serialized form of one verdict.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictRecord {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Serialized classification: ring name, size (absent for infinite rings) and
/// one record per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationRecord {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<u64>,
    pub classes: BTreeMap<String, VerdictRecord>,
}

impl ClassificationRecord {
    /// Checks the record against the schema: every class present exactly
    /// once, verdict in {yes, no, unknown}, witnesses only on yes,
    /// counterexamples and bounds only on no, a reason on unknown.
    pub fn validate(&self) -> Result<(), String> {
        for class in RingClass::ALL {
            if !self.classes.contains_key(class.key()) {
                return Err(format!("missing class {}", class.key()));
            }
        }
        for (key, r) in &self.classes {
            if RingClass::from_key(key).is_none() {
                return Err(format!("unknown class {key}"));
            }
            let ok = match r.verdict.as_str() {
                "yes" => r.counterexample.is_none() && r.bound.is_none() && r.reason.is_none(),
                "no" => r.witness.is_none() && r.reason.is_none(),
                "unknown" => r.witness.is_none() && r.counterexample.is_none() && r.reason.is_some(),
                _ => false,
            };
            if !ok {
                return Err(format!("class {key} has an inconsistent record"));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// finite deciders

/// `R^2 = R`. `R^2` is spanned by the structure constants, since every
/// product `rs` is an integer combination of them.
pub fn is_idempotent_ring(ring: &FiniteRing) -> Verdict<Element> {
    let k = ring.rank();
    let products: Vec<Element> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| ring.structure_constant(i, j).clone())
        .collect();
    let square = ring.additive_closure(&products);
    match ring.elements().find(|r| !square.contains(r)) {
        None => Verdict::Yes(Evidence::None),
        Some(r) => Verdict::no(Evidence::Element(r)),
    }
}

/// For each `r`, the first `e` with `er = r` (left) or `re = r` (right).
/// On failure, every element without such an `e`, in enumeration order.
pub fn is_one_sided_s_unital(ring: &FiniteRing, side: Side) -> Verdict<Element> {
    let mut table = Vec::new();
    let mut failing = Vec::new();
    for r in ring.elements() {
        match ring.search_unit(std::slice::from_ref(&r), side.into(), false) {
            Some(e) => table.push((r, e)),
            None => failing.push(r),
        }
    }
    if failing.is_empty() {
        Verdict::Yes(Evidence::Pairs(table))
    } else {
        Verdict::no(Evidence::Elements(failing))
    }
}

/// Elements that no candidate fixes all of: for each candidate, the first
/// element it fails on.
fn blocking_set<'a>(
    candidates: impl IntoIterator<Item = &'a Element>,
    elements: &[Element],
    fixes: impl Fn(&Element, &Element) -> bool,
) -> Vec<Element> {
    let set: BTreeSet<Element> = candidates
        .into_iter()
        .filter_map(|e| elements.iter().find(|r| !fixes(e, r)).cloned())
        .collect();
    set.into_iter().collect()
}

fn locally_unital_on(ring: &FiniteRing, sides: Sides) -> Verdict<Element> {
    let elements: Vec<Element> = ring.elements().collect();
    match ring.search_unit(&elements, sides, true) {
        Some(e) => Verdict::Yes(Evidence::Element(e)),
        None => {
            let idempotents = ring.idempotents();
            Verdict::no(Evidence::Elements(blocking_set(&idempotents, &elements, |e, r| {
                ring.fixes(e, sides, r)
            })))
        }
    }
}

/// For a finite ring, taking the finite set to be all of `R`: some idempotent
/// fixes every element on `side`.
pub fn is_one_sided_locally_unital(ring: &FiniteRing, side: Side) -> Verdict<Element> {
    locally_unital_on(ring, side.into())
}

/// Some idempotent fixes every element on both sides.
pub fn is_locally_unital_am(ring: &FiniteRing) -> Verdict<Element> {
    locally_unital_on(ring, Sides::Both)
}

/// All one-sided identities, or a finite set none of the candidates fixes.
pub fn is_one_sided_unital(ring: &FiniteRing, side: Side) -> Verdict<Element> {
    let identities = ring.one_sided_identities(side);
    if identities.is_empty() {
        let elements: Vec<Element> = ring.elements().collect();
        Verdict::no(Evidence::Elements(blocking_set(&elements, &elements, |e, r| {
            ring.act_raw(side, e, r) == *r
        })))
    } else {
        Verdict::Yes(Evidence::Elements(identities))
    }
}

pub fn is_unital(ring: &FiniteRing) -> Verdict<Element> {
    match ring.identity() {
        Some(e) => {
            debug_assert_eq!(ring.one_sided_identities(Side::Left), vec![e.clone()]);
            Verdict::Yes(Evidence::Element(e))
        }
        None => {
            let elements: Vec<Element> = ring.elements().collect();
            Verdict::no(Evidence::Elements(blocking_set(&elements, &elements, |e, r| {
                ring.fixes(e, Sides::Both, r)
            })))
        }
    }
}

/// Quasi-inverse table, or the first element without one.
pub fn is_regular(ring: &FiniteRing) -> Verdict<Element> {
    let mut table = Vec::new();
    for r in ring.elements() {
        match ring.search_quasi_inverse(&r) {
            Some(s) => table.push((r, s)),
            None => return Verdict::no(Evidence::Element(r)),
        }
    }
    Verdict::Yes(Evidence::Pairs(table))
}

/// Maximal cliques of `adjacent` over `0..n` (Bron–Kerbosch with pivoting),
/// each sorted ascending, in discovery order.
fn maximal_cliques(n: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    fn expand(
        r: &mut Vec<usize>,
        p: BTreeSet<usize>,
        mut x: BTreeSet<usize>,
        adjacent: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return;
        }
        let pivot = *p.iter().chain(x.iter()).next().expect("nonempty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adjacent(pivot, v)).collect();
        let mut p = p;
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&w| adjacent(v, w)).collect();
            let nx = x.iter().copied().filter(|&w| adjacent(v, w)).collect();
            expand(r, np, nx, adjacent, out);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    expand(&mut Vec::new(), (0..n).collect(), BTreeSet::new(), adjacent, &mut out);
    out
}

/// Direct search for a set of local units among commuting idempotents.
///
/// A maximal commuting family of idempotents is closed under `∨`, and any
/// commuting `∨`-closed set of local units extends to one, so it suffices to
/// test maximal cliques of the commuting graph. A covering clique's join of
/// all members fixes everything, and the singleton of that join is reported.
pub fn local_unit_set_direct(ring: &FiniteRing) -> Result<Verdict<Element>, ClassifyError> {
    if ring.size() > DIRECT_LOCAL_UNIT_LIMIT {
        return Err(ClassifyError::TooLargeForDirectSearch(ring.size()));
    }
    let idempotents = ring.idempotents();
    let elements: Vec<Element> = ring.elements().collect();
    let commute = |a: usize, b: usize| {
        a != b && ring.mul_raw(&idempotents[a], &idempotents[b]) == ring.mul_raw(&idempotents[b], &idempotents[a])
    };
    let mut uncovered = BTreeSet::new();
    for clique in maximal_cliques(idempotents.len(), &commute) {
        let members: Vec<&Element> = clique.iter().map(|&i| &idempotents[i]).collect();
        debug_assert!(members
            .iter()
            .all(|a| members.iter().all(|b| members.contains(&&crate::witnesses::vee(ring, *a, *b)))));
        match elements
            .iter()
            .find(|r| !members.iter().any(|e| ring.fixes(e, Sides::Both, r)))
        {
            Some(r) => {
                uncovered.insert(r.clone());
            }
            None => {
                let top = members
                    .iter()
                    .fold(ring.zero(), |acc, e| crate::witnesses::vee(ring, &acc, e));
                debug_assert!(elements.iter().all(|r| ring.fixes(&top, Sides::Both, r)));
                return Ok(Verdict::Yes(Evidence::Elements(vec![top])));
            }
        }
    }
    Ok(Verdict::no(Evidence::Elements(uncovered.into_iter().collect())))
}

/// On a finite ring a set of local units contains an identity (a common unit
/// for all elements), and `{1}` is a set of local units of a unital ring.
pub fn local_unit_set_shortcut(ring: &FiniteRing) -> Verdict<Element> {
    match is_unital(ring) {
        Verdict::Yes(Evidence::Element(e)) => Verdict::Yes(Evidence::Elements(vec![e])),
        Verdict::Yes(_) => unreachable!("is_unital returns the identity"),
        Verdict::No { counterexample, bound } => Verdict::No { counterexample, bound },
        Verdict::Unknown(reason) => Verdict::Unknown(reason),
    }
}

/// Runs the direct search when the ring is small enough, the shortcut always,
/// and requires them to agree.
pub fn has_set_of_local_units(ring: &FiniteRing) -> Verdict<Element> {
    let shortcut = local_unit_set_shortcut(ring);
    match local_unit_set_direct(ring) {
        Ok(direct) if direct.is_yes() == shortcut.is_yes() => direct,
        Ok(direct) => Verdict::Unknown(format!(
            "direct search ({}) disagrees with the finite shortcut ({})",
            direct.label(),
            shortcut.label()
        )),
        Err(e) => match shortcut {
            Verdict::Yes(w) => Verdict::Yes(w),
            Verdict::No { .. } => Verdict::no(Evidence::Note(format!("{e}; decided by the unital shortcut"))),
            other => other,
        },
    }
}

/// Checks that `family` consists of nonzero, pairwise orthogonal idempotents
/// and that every probe satisfies `r = sum r e_i = sum e_i r`.
pub fn verify_complete_idempotents<R: ComputableRing>(
    ring: &R,
    family: &[R::Elem],
    probes: &[R::Elem],
) -> Result<bool, ClassifyError> {
    for (i, e) in family.iter().enumerate() {
        if ring.is_zero(e) {
            return Err(ClassifyError::ZeroMember(i));
        }
        if !ring.is_idempotent(e) {
            return Err(ClassifyError::NotIdempotent(i));
        }
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if !ring.is_zero(&ring.mul(&family[i], &family[j])) || !ring.is_zero(&ring.mul(&family[j], &family[i])) {
                return Err(ClassifyError::NotOrthogonal(i, j));
            }
        }
    }
    Ok(probes.iter().all(|r| {
        let right = family.iter().fold(ring.zero(), |acc, e| ring.add(&acc, &ring.mul(r, e)));
        let left = family.iter().fold(ring.zero(), |acc, e| ring.add(&acc, &ring.mul(e, r)));
        right == *r && left == *r
    }))
}

/// Searches families of pairwise orthogonal nonzero idempotents (at most as
/// many as the additive rank) for a complete one, preferring larger families
/// and then enumeration order.
pub fn has_enough_idempotents(ring: &FiniteRing) -> Verdict<Element> {
    let elements: Vec<Element> = ring.elements().collect();
    let nonzero: Vec<Element> = ring.idempotents().into_iter().filter(|e| !e.is_zero()).collect();
    let orthogonal = |a: usize, b: usize| {
        ring.mul_raw(&nonzero[a], &nonzero[b]).is_zero() && ring.mul_raw(&nonzero[b], &nonzero[a]).is_zero()
    };
    let max_size = ring.rank();
    let mut best: Option<Vec<usize>> = None;
    let mut stack: Vec<Vec<usize>> = (0..nonzero.len()).rev().map(|i| vec![i]).collect();
    while let Some(family) = stack.pop() {
        let members: Vec<Element> = family.iter().map(|&i| nonzero[i].clone()).collect();
        let complete = verify_complete_idempotents(ring, &members, &elements).unwrap_or(false);
        if complete && best.as_ref().is_none_or(|b| family.len() > b.len()) {
            best = Some(family.clone());
        }
        if family.len() < max_size {
            let last = *family.last().expect("nonempty");
            for next in (last + 1..nonzero.len()).rev() {
                if family.iter().all(|&i| orthogonal(i, next)) {
                    let mut extended = family.clone();
                    extended.push(next);
                    stack.push(extended);
                }
            }
        }
    }
    let verdict = match best {
        Some(family) => Verdict::Yes(Evidence::Elements(family.into_iter().map(|i| nonzero[i].clone()).collect())),
        None => Verdict::no(Evidence::Note(format!(
            "no complete family among {} nonzero idempotents",
            nonzero.len()
        ))),
    };
    debug_assert_eq!(verdict.is_yes(), ring.identity().is_some());
    verdict
}

/// Two-sided s-unitality: the first one-sided failure, or a common unit for
/// all of `R` built from one-sided units.
pub fn s_unital_from_sides(ring: &FiniteRing) -> Verdict<Element> {
    for side in [Side::Left, Side::Right] {
        if let Verdict::No { counterexample, .. } = is_one_sided_s_unital(ring, side) {
            return Verdict::no(counterexample);
        }
    }
    let elements: Vec<Element> = ring.elements().collect();
    let mut left = |m: &Element| ring.search_unit(std::slice::from_ref(m), Sides::Left, false);
    let mut right = |m: &Element| ring.search_unit(std::slice::from_ref(m), Sides::Right, false);
    match crate::witnesses::common_two_sided_unit(ring, &elements, &mut left, &mut right) {
        Ok(t) => Verdict::Yes(Evidence::Element(t.unit)),
        Err(e) => Verdict::Unknown(e.to_string()),
    }
}

/// Every decider on a finite ring.
pub fn classify_finite(ring: &FiniteRing) -> Classification<Element> {
    let mut c = Classification::new(ring.name().to_string(), Some(ring.size()));
    c.set(RingClass::IdempotentRing, is_idempotent_ring(ring));
    for side in [Side::Left, Side::Right] {
        c.set(RingClass::s_unital(side), is_one_sided_s_unital(ring, side));
        c.set(RingClass::locally_unital(side), is_one_sided_locally_unital(ring, side));
        c.set(RingClass::unital(side), is_one_sided_unital(ring, side));
    }
    let s_unital = s_unital_from_sides(ring);
    c.set(RingClass::SUnital, s_unital);
    c.set(RingClass::LocallyUnital, is_locally_unital_am(ring));
    c.set(RingClass::HasLocalUnitSet, has_set_of_local_units(ring));
    c.set(RingClass::HasEnoughIdempotents, has_enough_idempotents(ring));
    c.set(RingClass::Unital, is_unital(ring));
    c.set(RingClass::Regular, is_regular(ring));
    c
}

// ---------------------------------------------------------------------------
// infinite constructions

/// Candidates supported within `bound` never fix `probe_outside(bound)`.
///
/// The certificate is support disjointness; when the candidates within the
/// bound can be listed (`candidates` returns `Some`), each is also checked.
fn probe_refutation<R, C>(ring: &R, bound: usize, sides: Sides, mut candidates: C) -> Verdict<R::Elem>
where
    R: ComputableRing,
    C: FnMut(usize) -> Option<Vec<R::Elem>>,
{
    let mut last = None;
    for n in 0..=bound {
        let Some(probe) = ring.probe_outside(n) else {
            return Verdict::Unknown("ring offers no probe capability".into());
        };
        if ring.is_zero(&probe) {
            return Verdict::Unknown(format!("probe at bound {n} is zero"));
        }
        if let Some(list) = candidates(n) {
            if let Some(c) = list.iter().find(|c| ring.fixes(c, sides, &probe)) {
                return Verdict::Unknown(format!(
                    "candidate {} fixes probe {}",
                    ring.render(c),
                    ring.render(&probe)
                ));
            }
        }
        last = Some(probe);
    }
    Verdict::No {
        counterexample: Evidence::Element(last.expect("bound loop runs at least once")),
        bound: Some(bound),
    }
}

/// Largest number of candidates enumerated explicitly during a probe refutation.
const PROBE_ENUMERATION_LIMIT: u64 = 1 << 18;

/// Verdicts for `sum_N C` from the component `C`: positive answers come from
/// per-index assembly, negative ones from `ι_0` of a component
/// counterexample, and identities are refuted by probes up to `bound`.
pub fn classify_supported_sum(sum: &SupportedDirectSum, bound: usize) -> Classification<SupportedElement> {
    let comp = sum.component();
    let name = comp.name().to_string();
    let mut c = Classification::new(sum.name(), None);
    let lift = |v: Verdict<Element>, yes_note: String| -> Verdict<SupportedElement> {
        match v {
            Verdict::Yes(_) => Verdict::Yes(Evidence::Note(yes_note)),
            Verdict::No { counterexample: Evidence::Element(x), .. } => {
                Verdict::no(Evidence::Element(SupportedElement::single(0, x)))
            }
            Verdict::No { counterexample: Evidence::Elements(xs), .. } => {
                Verdict::no(Evidence::Elements(xs.into_iter().map(|x| SupportedElement::single(0, x)).collect()))
            }
            Verdict::No { counterexample, .. } => Verdict::no(match counterexample {
                Evidence::Note(n) => Evidence::Note(format!("component {name}: {n}")),
                _ => Evidence::Note(format!("component {name} fails")),
            }),
            Verdict::Unknown(r) => Verdict::Unknown(r),
        }
    };
    c.set(
        RingClass::IdempotentRing,
        lift(is_idempotent_ring(comp), format!("every component {name} is idempotent")),
    );
    for side in [Side::Left, Side::Right] {
        c.set(
            RingClass::s_unital(side),
            lift(
                is_one_sided_s_unital(comp, side),
                format!("{side} units of {name} assembled index by index (s_unit_for)"),
            ),
        );
        c.set(
            RingClass::locally_unital(side),
            lift(
                is_one_sided_locally_unital(comp, side),
                format!("idempotent {side} units of {name} assembled index by index"),
            ),
        );
    }
    c.set(
        RingClass::SUnital,
        lift(s_unital_from_sides(comp), format!("two-sided units of {name} assembled index by index")),
    );
    c.set(
        RingClass::LocallyUnital,
        lift(
            is_locally_unital_am(comp),
            format!("idempotent two-sided units of {name} assembled index by index"),
        ),
    );
    // a set of local units (or enough idempotents) in the sum projects to the
    // component, and a finite ring with either is unital
    let comp_unital = is_unital(comp);
    c.set(
        RingClass::HasLocalUnitSet,
        lift(
            comp_unital.clone(),
            format!("E = finite sums of identities of {name} placed at distinct indices; commuting and closed under join"),
        ),
    );
    c.set(
        RingClass::HasEnoughIdempotents,
        lift(
            comp_unital.clone(),
            format!("complete family: a complete family of {name} placed at every index"),
        ),
    );
    c.set(RingClass::Regular, lift(is_regular(comp), format!("quasi-inverses of {name} taken index by index")));

    if comp.size() == 1 {
        for class in [RingClass::LeftUnital, RingClass::RightUnital, RingClass::Unital] {
            c.set(class, Verdict::Yes(Evidence::Element(SupportedElement::default())));
        }
        return c;
    }
    let enumerable = |n: usize| -> Option<Vec<SupportedElement>> {
        let count = comp.size().checked_pow(u32::try_from(n + 1).ok()?)?;
        if count > PROBE_ENUMERATION_LIMIT {
            return None;
        }
        let elems: Vec<Element> = comp.elements().collect();
        let mut out = Vec::with_capacity(count as usize);
        for mut code in 0..count as usize {
            let mut parts = Vec::with_capacity(n + 1);
            for i in 0..=n {
                parts.push((i, elems[code % elems.len()].clone()));
                code /= elems.len();
            }
            out.push(SupportedElement::new(parts));
        }
        Some(out)
    };
    for side in [Side::Left, Side::Right] {
        c.set(RingClass::unital(side), probe_refutation(sum, bound, side.into(), enumerable));
    }
    c.set(RingClass::Unital, probe_refutation(sum, bound, Sides::Both, enumerable));
    c
}

/// Finitely supported matrices over a unital base: diagonal projections
/// `P_S` are local units closed under join, `{E_ii}` is a complete family,
/// and no matrix supported on indices `<= bound` is an identity.
pub fn classify_finite_rank(ring: &FiniteRankMatrices, bound: usize) -> Classification<FiniteMatrix> {
    let base = ring.base().name().to_string();
    let mut c = Classification::new(ring.name(), None);
    let note = |s: &str| Verdict::Yes(Evidence::Note(s.to_string()));
    c.set(RingClass::IdempotentRing, note("every matrix is fixed by a projection, so lies in R^2"));
    for side in [Side::Left, Side::Right] {
        c.set(RingClass::s_unital(side), note("diagonal projection onto the indices in use (s_unit_for)"));
        c.set(RingClass::locally_unital(side), note("diagonal projection onto the indices in use"));
    }
    c.set(RingClass::SUnital, note("diagonal projection onto the indices in use"));
    c.set(RingClass::LocallyUnital, note("diagonal projection onto the indices in use (idempotent_unit_for)"));
    c.set(
        RingClass::HasLocalUnitSet,
        note("E = {P_S : S finite}, commuting, P_S v P_T = P_(S u T)"),
    );
    c.set(
        RingClass::HasEnoughIdempotents,
        Verdict::Yes(Evidence::Elements((0..=bound).map(|i| ring.unit(i, i)).collect())),
    );
    c.set(
        RingClass::Regular,
        if ring.has_quasi_inverses() {
            note("generalized inverse over the prime field (quasi_inverse)")
        } else {
            Verdict::Unknown(format!("no generalized-inverse capability over {base}"))
        },
    );
    // the projection onto 0..=n is the largest natural candidate; more are
    // covered by the support certificate
    let candidates = |n: usize| Some(vec![ring.projection(0..=n)]);
    for side in [Side::Left, Side::Right] {
        c.set(RingClass::unital(side), probe_refutation(ring, bound, side.into(), candidates));
    }
    c.set(RingClass::Unital, probe_refutation(ring, bound, Sides::Both, candidates));
    c
}

/// The piecewise-polynomial surrogate: s-unital through bumps, with no
/// nonzero idempotent, hence none of the stronger properties.
pub fn classify_functions(ring: &CompactSupportFunctions, bound: usize) -> Classification<PiecewisePolynomial> {
    let mut c = Classification::new(ring.name(), None);
    let sample = bump(&rat(0), &rat(1)).expect("0 < 1");
    let note = |s: &str| Verdict::Yes(Evidence::Note(s.to_string()));
    c.set(RingClass::IdempotentRing, note("f = e f for a bump e, so R^2 = R"));
    for side in [Side::Left, Side::Right] {
        c.set(RingClass::s_unital(side), note("bump equal to 1 on the hull of the supports (s_unit_for)"));
    }
    c.set(RingClass::SUnital, note("bump equal to 1 on the hull of the supports (s_unit_for)"));
    let no_idempotent = || Verdict::No {
        counterexample: Evidence::Element(sample.clone()),
        bound: None,
    };
    for side in [Side::Left, Side::Right] {
        c.set(RingClass::locally_unital(side), no_idempotent());
    }
    for class in [RingClass::LocallyUnital, RingClass::HasLocalUnitSet, RingClass::HasEnoughIdempotents, RingClass::Regular] {
        c.set(class, no_idempotent());
    }
    // the widest bump supported within [-n, n], alongside zero
    let candidates = |n: usize| {
        let n = n as i64;
        let mut list = vec![PiecewisePolynomial::zero()];
        list.extend(bump(&rat(1 - n), &rat(n - 1)).ok());
        Some(list)
    };
    for side in [Side::Left, Side::Right] {
        c.set(RingClass::unital(side), probe_refutation(ring, bound, side.into(), candidates));
    }
    c.set(RingClass::Unital, probe_refutation(ring, bound, Sides::Both, candidates));
    c
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{
        b_l, b_r, direct_sum, finite_corpus, matrix_ring, prime_field, twisted_semigroup_ring, zero_ring,
    };
    use crate::funring::CompactSupportFunctions;

    fn el(c: &[u64]) -> Element {
        Element::from_coords(c.to_vec())
    }

    #[test]
    fn zero_ring_square_is_zero() {
        let z = zero_ring(&[2, 2]).unwrap();
        assert_eq!(is_idempotent_ring(&z), Verdict::no(Evidence::Element(el(&[0, 1]))));
        let c = classify_finite(&z);
        for class in RingClass::ALL {
            if class != RingClass::Regular {
                assert!(c.get(class).is_no(), "{}", class.key());
            }
        }
        c.check_hierarchy().unwrap();
    }

    #[test]
    fn b_l_is_left_unital_only() {
        let r = b_l(2).unwrap();
        let c = classify_finite(&r);
        assert_eq!(
            c.get(RingClass::LeftUnital),
            &Verdict::Yes(Evidence::Elements(vec![el(&[1, 0]), el(&[1, 1])]))
        );
        assert!(c.get(RingClass::RightSUnital).is_no());
        assert!(c.get(RingClass::LeftLocallyUnital).is_yes());
        assert!(c.get(RingClass::SUnital).is_no());
        assert!(c.get(RingClass::HasLocalUnitSet).is_no());
        assert!(c.get(RingClass::IdempotentRing).is_yes());
        c.check_hierarchy().unwrap();

        let c = classify_finite(&b_r(2).unwrap());
        assert!(c.get(RingClass::RightUnital).is_yes());
        assert!(c.get(RingClass::LeftSUnital).is_no());
    }

    #[test]
    fn twisted_ring_is_idempotent_but_not_s_unital() {
        let r = twisted_semigroup_ring(2).unwrap();
        let c = classify_finite(&r);
        assert!(c.get(RingClass::IdempotentRing).is_yes());
        let g = el(&[0, 0, 1, 1]);
        for side in [Side::Left, Side::Right] {
            match is_one_sided_s_unital(&r, side) {
                Verdict::No { counterexample: Evidence::Elements(xs), .. } => {
                    assert_eq!(xs.len(), 4);
                    assert!(xs.contains(&g));
                }
                other => panic!("{other:?}"),
            }
        }
        for class in RingClass::ALL.into_iter().filter(|&c| c != RingClass::IdempotentRing) {
            assert!(c.get(class).is_no(), "{}", class.key());
        }
        c.check_hierarchy().unwrap();
    }

    #[test]
    fn matrices_have_enough_idempotents() {
        let m = matrix_ring(&prime_field(2).unwrap(), 2).unwrap();
        match has_enough_idempotents(&m) {
            Verdict::Yes(Evidence::Elements(family)) => {
                assert_eq!(family.len(), 2);
                let rendered: Vec<String> = family.iter().map(|e| m.render(e)).collect();
                assert_eq!(rendered, ["E11", "E00"]);
            }
            other => panic!("{other:?}"),
        }
        assert!(is_regular(&m).is_yes());
    }

    #[test]
    fn complete_family_errors() {
        let f = direct_sum(&[prime_field(2).unwrap(), prime_field(2).unwrap()]).unwrap();
        let probes: Vec<Element> = f.elements().collect();
        assert_eq!(verify_complete_idempotents(&f, &[el(&[1, 0]), el(&[0, 1])], &probes), Ok(true));
        assert_eq!(verify_complete_idempotents(&f, &[el(&[1, 0])], &probes), Ok(false));
        assert_eq!(
            verify_complete_idempotents(&f, &[el(&[0, 0])], &probes),
            Err(ClassifyError::ZeroMember(0))
        );
        assert_eq!(
            verify_complete_idempotents(&f, &[el(&[1, 1]), el(&[1, 0])], &probes),
            Err(ClassifyError::NotOrthogonal(0, 1))
        );
        let z4 = crate::constructions::cyclic_ring(4).unwrap();
        assert_eq!(
            verify_complete_idempotents(&z4, &[el(&[2])], &[]),
            Err(ClassifyError::NotIdempotent(0))
        );
    }

    #[test]
    fn direct_and_shortcut_local_unit_searches_agree() {
        for entry in finite_corpus() {
            let r = &entry.ring;
            if let Ok(direct) = local_unit_set_direct(r) {
                assert_eq!(direct.is_yes(), local_unit_set_shortcut(r).is_yes(), "{}", entry.key);
            }
        }
    }

    #[test]
    fn corpus_respects_the_hierarchy() {
        for entry in finite_corpus() {
            let c = classify_finite(&entry.ring);
            c.check_hierarchy().unwrap_or_else(|e| panic!("{}: {e}", entry.key));
            c.to_record(|e| entry.ring.render(e)).validate().unwrap();
        }
    }

    #[test]
    fn supported_sums() {
        let c = SupportedDirectSum::new(b_l(2).unwrap());
        let cl = classify_supported_sum(&c, 3);
        assert!(cl.get(RingClass::LeftSUnital).is_yes());
        assert!(cl.get(RingClass::LeftLocallyUnital).is_yes());
        assert!(cl.get(RingClass::RightSUnital).is_no());
        assert_eq!(cl.get(RingClass::LeftUnital).bound(), Some(3));
        cl.check_hierarchy().unwrap();

        let i = SupportedDirectSum::new(prime_field(2).unwrap());
        let cl = classify_supported_sum(&i, 8);
        assert!(cl.get(RingClass::HasLocalUnitSet).is_yes());
        assert!(cl.get(RingClass::HasEnoughIdempotents).is_yes());
        assert!(cl.get(RingClass::Unital).is_no());
        cl.check_hierarchy().unwrap();
    }

    #[test]
    fn finite_rank_and_functions() {
        let m = FiniteRankMatrices::new(prime_field(2).unwrap()).unwrap();
        let cl = classify_finite_rank(&m, 4);
        assert!(cl.get(RingClass::HasEnoughIdempotents).is_yes());
        assert!(cl.get(RingClass::Regular).is_yes());
        assert_eq!(cl.get(RingClass::Unital).bound(), Some(4));
        cl.check_hierarchy().unwrap();

        let f = CompactSupportFunctions;
        let cl = classify_functions(&f, 8);
        assert!(cl.get(RingClass::SUnital).is_yes());
        assert!(cl.get(RingClass::LocallyUnital).is_no());
        assert_eq!(cl.get(RingClass::Unital).bound(), Some(8));
        cl.check_hierarchy().unwrap();
        let record = cl.to_record(|p| p.to_string());
        record.validate().unwrap();
    }

    #[test]
    fn record_validation_rejects_bad_shapes() {
        let r = prime_field(2).unwrap();
        let mut record = classify_finite(&r).to_record(|e| r.render(e));
        let json = serde_json::to_string(&record).unwrap();
        let back: ClassificationRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
        record.classes.get_mut("unital").unwrap().reason = Some("x".into());
        assert!(record.validate().is_err());
        record.classes.remove("unital");
        assert!(record.validate().is_err());
    }
}
