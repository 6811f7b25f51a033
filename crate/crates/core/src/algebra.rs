//! The independence-algebra contract: closure, independence, rank and basis
//! manipulation for the two shipped algebras — finite sets (where the
//! closure of a set is the set itself) and finite-dimensional vector spaces
//! over a prime field (where closure is linear span, with the zero vector
//! as the unique constant).

use crate::error::{Error, Result};
use crate::fp;

/// Default ceiling on universe sizes for operations that enumerate every
/// element (witness search, basis completion, span enumeration).
pub const DEFAULT_UNIVERSE_CAP: u64 = 1 << 20;

/// Canonical index of an algebra element.
///
/// Finite-set points are their own codes (`0..n`). Vectors are encoded
/// positionally base `p`, first coordinate most significant, so the zero
/// vector has code 0 and codes order tuples lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub u64);

impl ElementId {
    pub fn code(self) -> u64 {
        self.0
    }
}

impl From<u64> for ElementId {
    fn from(code: u64) -> Self {
        ElementId(code)
    }
}

impl std::fmt::Display for ElementId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered, duplicate-free list of elements.
///
/// Order is ascending code unless the set records an explicit construction
/// order (exchange chains do).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    elems: Vec<ElementId>,
}

impl ElementSet {
    pub fn new(elems: Vec<ElementId>) -> Result<Self> {
        for (i, e) in elems.iter().enumerate() {
            if elems[..i].contains(e) {
                return Err(Error::DuplicateElement { code: e.code() });
            }
        }
        Ok(ElementSet { elems })
    }

    pub fn from_codes(codes: &[u64]) -> Result<Self> {
        Self::new(codes.iter().copied().map(ElementId).collect())
    }

    pub fn empty() -> Self {
        ElementSet { elems: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elems
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elems.iter().copied()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.elems.contains(&x)
    }

    pub fn codes(&self) -> Vec<u64> {
        self.elems.iter().map(|e| e.code()).collect()
    }

    /// Copy with elements in ascending code order.
    pub fn sorted(&self) -> ElementSet {
        let mut elems = self.elems.clone();
        elems.sort();
        ElementSet { elems }
    }

    /// Copy with `x` removed, preserving the order of the rest.
    pub fn without(&self, x: ElementId) -> ElementSet {
        ElementSet { elems: self.elems.iter().copied().filter(|&e| e != x).collect() }
    }

    /// Copy with `x` appended at the end.
    pub fn with_appended(&self, x: ElementId) -> Result<ElementSet> {
        if self.contains(x) {
            return Err(Error::DuplicateElement { code: x.code() });
        }
        let mut elems = self.elems.clone();
        elems.push(x);
        Ok(ElementSet { elems })
    }

    /// Equality as unordered sets.
    pub fn set_eq(&self, other: &ElementSet) -> bool {
        self.len() == other.len() && self.elems.iter().all(|e| other.contains(*e))
    }

    /// Smallest element by code, if any.
    pub fn min(&self) -> Option<ElementId> {
        self.elems.iter().copied().min()
    }
}

impl std::fmt::Display for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Which concrete algebra an endomorphism lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraDescriptor {
    /// The set `{0, .., n-1}` with trivial closure; every total map is an
    /// endomorphism and every subset is independent.
    FiniteSet { n: u64 },
    /// Row vectors of length `d` over Z/pZ; endomorphisms are row-acting
    /// matrices and closure is linear span.
    VectorSpace { p: u64, d: usize },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

impl AlgebraDescriptor {
    pub fn finite_set(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidAlgebra { reason: format!("set size {n} < 2") });
        }
        Ok(AlgebraDescriptor::FiniteSet { n })
    }

    pub fn vector_space(p: u64, d: usize) -> Result<Self> {
        Self::vector_space_with_cap(p, d, DEFAULT_UNIVERSE_CAP)
    }

    pub fn vector_space_with_cap(p: u64, d: usize, cap: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidAlgebra { reason: format!("dimension {d} < 2") });
        }
        if p > 251 || !is_prime(p) {
            return Err(Error::InvalidAlgebra { reason: format!("{p} is not a prime <= 251") });
        }
        let mut size: u64 = 1;
        for _ in 0..d {
            size = size
                .checked_mul(p)
                .filter(|&s| s <= cap)
                .ok_or(Error::InvalidAlgebra {
                    reason: format!("universe p^d = {p}^{d} exceeds the cap of {cap} elements"),
                })?;
        }
        Ok(AlgebraDescriptor::VectorSpace { p, d })
    }

    /// Rank of the whole algebra: `n` for a finite set, `d` for vectors.
    pub fn rank(&self) -> usize {
        match *self {
            AlgebraDescriptor::FiniteSet { n } => n as usize,
            AlgebraDescriptor::VectorSpace { d, .. } => d,
        }
    }

    pub fn universe_size(&self) -> u64 {
        match *self {
            AlgebraDescriptor::FiniteSet { n } => n,
            AlgebraDescriptor::VectorSpace { p, d } => p.pow(d as u32),
        }
    }

    pub fn check_element(&self, x: ElementId) -> Result<()> {
        let universe = self.universe_size();
        if x.code() < universe {
            Ok(())
        } else {
            Err(Error::InvalidElement { code: x.code(), universe })
        }
    }

    pub fn check_set(&self, set: &ElementSet) -> Result<()> {
        set.iter().try_for_each(|x| self.check_element(x))
    }

    /// All elements in ascending code order.
    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        (0..self.universe_size()).map(ElementId)
    }

    /// Coordinate tuple of a vector-space element. Finite-set elements have
    /// the single "coordinate" of their own code.
    pub fn coords(&self, x: ElementId) -> Vec<u64> {
        match *self {
            AlgebraDescriptor::FiniteSet { .. } => vec![x.code()],
            AlgebraDescriptor::VectorSpace { p, d } => {
                let mut code = x.code();
                let mut out = vec![0u64; d];
                for i in (0..d).rev() {
                    out[i] = code % p;
                    code /= p;
                }
                out
            }
        }
    }

    pub fn encode(&self, coords: &[u64]) -> ElementId {
        match *self {
            AlgebraDescriptor::FiniteSet { .. } => ElementId(coords[0]),
            AlgebraDescriptor::VectorSpace { p, .. } => {
                ElementId(coords.iter().fold(0u64, |acc, &c| acc * p + c))
            }
        }
    }

    /// The canonical basis: every point of a finite set, the standard basis
    /// vectors (in coordinate order) of a vector space.
    pub fn canonical_basis(&self) -> ElementSet {
        match *self {
            AlgebraDescriptor::FiniteSet { n } => {
                ElementSet { elems: (0..n).map(ElementId).collect() }
            }
            AlgebraDescriptor::VectorSpace { p, d } => ElementSet {
                elems: (0..d).map(|i| ElementId(p.pow((d - 1 - i) as u32))).collect(),
            },
        }
    }

    fn span_of(&self, set: &ElementSet) -> fp::Span {
        let AlgebraDescriptor::VectorSpace { p, .. } = *self else {
            unreachable!("span_of is vector-space only");
        };
        let mut span = fp::Span::new(p);
        for x in set.iter() {
            span.insert(&self.coords(x));
        }
        span
    }

    /// Vector-space universes are bounded at construction; finite sets take
    /// no cap there, so element-by-element scans enforce one here.
    fn check_universe_cap(&self) -> Result<()> {
        if let AlgebraDescriptor::FiniteSet { n } = *self {
            if n > DEFAULT_UNIVERSE_CAP {
                return Err(Error::UniverseCap { size: n, cap: DEFAULT_UNIVERSE_CAP });
            }
        }
        Ok(())
    }

    /// Is `x` in the closure of `set`?
    pub fn in_closure(&self, x: ElementId, set: &ElementSet) -> Result<bool> {
        self.check_element(x)?;
        self.check_set(set)?;
        match self {
            AlgebraDescriptor::FiniteSet { .. } => Ok(set.contains(x)),
            AlgebraDescriptor::VectorSpace { .. } => {
                Ok(self.span_of(set).contains(&self.coords(x)))
            }
        }
    }

    /// No element of `set` lies in the closure of the others. For vector
    /// spaces this excludes the zero vector, which generates nothing.
    pub fn is_independent(&self, set: &ElementSet) -> Result<bool> {
        self.check_set(set)?;
        match self {
            AlgebraDescriptor::FiniteSet { .. } => Ok(true),
            AlgebraDescriptor::VectorSpace { p, .. } => {
                let mut span = fp::Span::new(*p);
                Ok(set.iter().all(|x| span.insert(&self.coords(x))))
            }
        }
    }

    /// Size of a maximal independent subset, found by a greedy scan.
    pub fn rank_set(&self, set: &ElementSet) -> Result<usize> {
        self.check_set(set)?;
        match self {
            AlgebraDescriptor::FiniteSet { .. } => Ok(set.len()),
            AlgebraDescriptor::VectorSpace { p, .. } => {
                let mut span = fp::Span::new(*p);
                Ok(set.iter().filter(|x| span.insert(&self.coords(*x))).count())
            }
        }
    }

    /// Completes an independent set to a basis of the whole algebra, with
    /// `set` as prefix and fill elements chosen smallest-first.
    pub fn extend_to_basis(&self, set: &ElementSet) -> Result<ElementSet> {
        if !self.is_independent(set)? {
            return Err(Error::DependentSet);
        }
        self.check_universe_cap()?;
        let mut out = set.elems.clone();
        match self {
            AlgebraDescriptor::FiniteSet { n } => {
                for code in 0..*n {
                    let x = ElementId(code);
                    if !set.contains(x) {
                        out.push(x);
                    }
                }
            }
            AlgebraDescriptor::VectorSpace { d, .. } => {
                let mut span = self.span_of(set);
                for x in self.elements() {
                    if span.rank() == *d {
                        break;
                    }
                    if span.insert(&self.coords(x)) {
                        out.push(x);
                    }
                }
            }
        }
        Ok(ElementSet { elems: out })
    }

    /// The smallest element outside the closure of `set`, or `None` when
    /// the closure is the whole universe.
    pub fn witness_outside(&self, set: &ElementSet) -> Result<Option<ElementId>> {
        self.check_set(set)?;
        self.check_universe_cap()?;
        match self {
            AlgebraDescriptor::FiniteSet { .. } => {
                Ok(self.elements().find(|x| !set.contains(*x)))
            }
            AlgebraDescriptor::VectorSpace { .. } => {
                let span = self.span_of(set);
                Ok(self.elements().find(|x| !span.contains(&self.coords(*x))))
            }
        }
    }
}

impl std::fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            AlgebraDescriptor::FiniteSet { n } => write!(f, "set(n={n})"),
            AlgebraDescriptor::VectorSpace { p, d } => write!(f, "vec(p={p}, dim={d})"),
        }
    }
}
