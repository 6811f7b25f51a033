//! Total and partial endomorphisms of the two shipped algebras.
//!
//! Composition is fixed globally as left-to-right application (`x` first
//! through the left factor), so a factor list composes in listing order and
//! row-acting matrices compose as matrix products in the same order.

use crate::algebra::{AlgebraDescriptor, ElementId, ElementSet};
use crate::error::{Error, Result};
use crate::fp;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Action {
    /// Image table over all points of a finite set.
    Table(Vec<u64>),
    /// Row-major d*d matrix; row i is the image of the i-th standard basis
    /// vector, acting on coordinate rows from the right.
    Matrix(Vec<u64>),
}

/// A total endomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    alg: AlgebraDescriptor,
    action: Action,
}

impl Endomorphism {
    /// Builds a finite-set transformation from its image table.
    pub fn from_table(alg: AlgebraDescriptor, table: Vec<u64>) -> Result<Self> {
        let AlgebraDescriptor::FiniteSet { n } = alg else {
            return Err(Error::Precondition {
                op: "from_table",
                reason: "image tables describe finite-set endomorphisms only".into(),
            });
        };
        if table.len() != n as usize {
            return Err(Error::Precondition {
                op: "from_table",
                reason: format!("table has {} entries, expected {n}", table.len()),
            });
        }
        for &v in &table {
            if v >= n {
                return Err(Error::InvalidElement { code: v, universe: n });
            }
        }
        Ok(Endomorphism { alg, action: Action::Table(table) })
    }

    /// Builds a linear endomorphism from row-major matrix entries.
    pub fn from_matrix(alg: AlgebraDescriptor, entries: Vec<u64>) -> Result<Self> {
        let AlgebraDescriptor::VectorSpace { p, d } = alg else {
            return Err(Error::Precondition {
                op: "from_matrix",
                reason: "matrices describe vector-space endomorphisms only".into(),
            });
        };
        if entries.len() != d * d {
            return Err(Error::Precondition {
                op: "from_matrix",
                reason: format!("matrix has {} entries, expected {}", entries.len(), d * d),
            });
        }
        for &v in &entries {
            if v >= p {
                return Err(Error::InvalidElement { code: v, universe: p });
            }
        }
        Ok(Endomorphism { alg, action: Action::Matrix(entries) })
    }

    pub fn identity(alg: AlgebraDescriptor) -> Self {
        let action = match alg {
            AlgebraDescriptor::FiniteSet { n } => Action::Table((0..n).collect()),
            AlgebraDescriptor::VectorSpace { d, .. } => {
                let mut m = vec![0u64; d * d];
                for i in 0..d {
                    m[i * d + i] = 1;
                }
                Action::Matrix(m)
            }
        };
        Endomorphism { alg, action }
    }

    pub fn algebra(&self) -> AlgebraDescriptor {
        self.alg
    }

    /// The image table, for finite-set endomorphisms.
    pub fn table(&self) -> Option<&[u64]> {
        match &self.action {
            Action::Table(t) => Some(t),
            Action::Matrix(_) => None,
        }
    }

    /// Row-major matrix entries, for vector-space endomorphisms.
    pub fn matrix(&self) -> Option<&[u64]> {
        match &self.action {
            Action::Matrix(m) => Some(m),
            Action::Table(_) => None,
        }
    }

    pub fn apply(&self, x: ElementId) -> Result<ElementId> {
        self.alg.check_element(x)?;
        match &self.action {
            Action::Table(t) => Ok(ElementId(t[x.code() as usize])),
            Action::Matrix(m) => {
                let AlgebraDescriptor::VectorSpace { p, d } = self.alg else { unreachable!() };
                let image = fp::row_apply(p, &self.alg.coords(x), m, d);
                Ok(self.alg.encode(&image))
            }
        }
    }

    /// The map `x -> (x . self) . second`; matrix kind multiplies in the
    /// same order, so certificates compose in listing order.
    pub fn compose(&self, second: &Endomorphism) -> Result<Endomorphism> {
        if self.alg != second.alg {
            return Err(Error::AlgebraMismatch);
        }
        let action = match (&self.action, &second.action) {
            (Action::Table(a), Action::Table(b)) => {
                Action::Table(a.iter().map(|&v| b[v as usize]).collect())
            }
            (Action::Matrix(a), Action::Matrix(b)) => {
                let AlgebraDescriptor::VectorSpace { p, d } = self.alg else { unreachable!() };
                Action::Matrix(fp::mat_mul(p, a, b, d))
            }
            _ => unreachable!("action kind is determined by the algebra"),
        };
        Ok(Endomorphism { alg: self.alg, action })
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self).expect("same algebra") == *self
    }

    /// A canonical independent set spanning the image: the image point set
    /// for transformations; for matrices, the basis-vector images kept by a
    /// greedy scan in row order.
    pub fn image_basis(&self) -> ElementSet {
        match &self.action {
            Action::Table(t) => {
                let mut pts: Vec<u64> = t.clone();
                pts.sort_unstable();
                pts.dedup();
                ElementSet::from_codes(&pts).expect("deduplicated")
            }
            Action::Matrix(m) => {
                let AlgebraDescriptor::VectorSpace { p, d } = self.alg else { unreachable!() };
                let mut span = fp::Span::new(p);
                let mut basis = Vec::new();
                for i in 0..d {
                    let row = &m[i * d..(i + 1) * d];
                    if span.insert(row) {
                        basis.push(self.alg.encode(row));
                    }
                }
                ElementSet::new(basis).expect("independent rows are distinct")
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.image_basis().len()
    }
}

/// A structure-preserving map defined on the subalgebra generated by an
/// independent domain basis, determined by the images of that basis.
///
/// Stored with the domain basis in ascending code order, so equal maps
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialEndomorphism {
    alg: AlgebraDescriptor,
    domain_basis: ElementSet,
    images: Vec<ElementId>,
}

impl PartialEndomorphism {
    pub fn new(
        alg: AlgebraDescriptor,
        domain_basis: ElementSet,
        images: Vec<ElementId>,
    ) -> Result<Self> {
        alg.check_set(&domain_basis)?;
        images.iter().try_for_each(|&x| alg.check_element(x))?;
        if domain_basis.len() != images.len() {
            return Err(Error::Precondition {
                op: "PartialEndomorphism::new",
                reason: format!(
                    "{} domain elements but {} images",
                    domain_basis.len(),
                    images.len()
                ),
            });
        }
        if !alg.is_independent(&domain_basis)? {
            return Err(Error::DependentSet);
        }
        let mut pairs: Vec<(ElementId, ElementId)> =
            domain_basis.iter().zip(images.iter().copied()).collect();
        pairs.sort_by_key(|(b, _)| *b);
        let domain_basis = ElementSet::new(pairs.iter().map(|(b, _)| *b).collect())?;
        let images = pairs.into_iter().map(|(_, y)| y).collect();
        Ok(PartialEndomorphism { alg, domain_basis, images })
    }

    pub fn algebra(&self) -> AlgebraDescriptor {
        self.alg
    }

    pub fn domain_basis(&self) -> &ElementSet {
        &self.domain_basis
    }

    pub fn images(&self) -> &[ElementId] {
        &self.images
    }

    pub fn is_in_domain(&self, x: ElementId) -> Result<bool> {
        self.alg.in_closure(x, &self.domain_basis)
    }

    /// Image of `x` under the unique structure-preserving extension of the
    /// basis assignment.
    pub fn apply(&self, x: ElementId) -> Result<ElementId> {
        self.alg.check_element(x)?;
        match self.alg {
            AlgebraDescriptor::FiniteSet { .. } => {
                let pos = self
                    .domain_basis
                    .elements()
                    .iter()
                    .position(|&b| b == x)
                    .ok_or(Error::OutsideDomain { code: x.code() })?;
                Ok(self.images[pos])
            }
            AlgebraDescriptor::VectorSpace { p, d } => {
                let rows: Vec<Vec<u64>> =
                    self.domain_basis.iter().map(|b| self.alg.coords(b)).collect();
                let coeffs = fp::solve_coords(p, &rows, &self.alg.coords(x))
                    .ok_or(Error::OutsideDomain { code: x.code() })?;
                let mut out = vec![0u64; d];
                for (c, img) in coeffs.iter().zip(&self.images) {
                    let img_coords = self.alg.coords(*img);
                    for j in 0..d {
                        out[j] = (out[j] + c * img_coords[j]) % p;
                    }
                }
                Ok(self.alg.encode(&out))
            }
        }
    }

    /// Greedy independent spanning set of the image, scanned in domain
    /// order.
    pub fn image_basis(&self) -> ElementSet {
        match self.alg {
            AlgebraDescriptor::FiniteSet { .. } => {
                let mut seen = Vec::new();
                for &y in &self.images {
                    if !seen.contains(&y) {
                        seen.push(y);
                    }
                }
                ElementSet::new(seen).expect("deduplicated")
            }
            AlgebraDescriptor::VectorSpace { p, .. } => {
                let mut span = fp::Span::new(p);
                let mut basis = Vec::new();
                for &y in &self.images {
                    if span.insert(&self.alg.coords(y)) {
                        basis.push(y);
                    }
                }
                ElementSet::new(basis).expect("independent vectors are distinct")
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.image_basis().len()
    }

    /// A partial map is idempotent exactly when its image lies inside its
    /// domain and it fixes a basis of that image pointwise.
    pub fn is_idempotent(&self) -> bool {
        let inside = self
            .images
            .iter()
            .all(|&y| self.is_in_domain(y).expect("validated at construction"));
        if !inside {
            return false;
        }
        self.image_basis()
            .iter()
            .all(|b| self.apply(b).expect("image basis is inside the domain") == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u64, table: &[u64]) -> Endomorphism {
        let alg = AlgebraDescriptor::finite_set(n).unwrap();
        Endomorphism::from_table(alg, table.to_vec()).unwrap()
    }

    fn m(p: u64, d: usize, entries: &[u64]) -> Endomorphism {
        let alg = AlgebraDescriptor::vector_space(p, d).unwrap();
        Endomorphism::from_matrix(alg, entries.to_vec()).unwrap()
    }

    #[test]
    fn composition_is_left_to_right() {
        let first = t(4, &[0, 0, 2, 2]);
        let second = t(4, &[1, 1, 2, 1]);
        assert_eq!(first.compose(&second).unwrap(), t(4, &[1, 1, 2, 2]));

        let a = t(3, &[1, 2, 0]);
        let id = Endomorphism::identity(a.algebra());
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(a.compose(&id).unwrap(), a);
    }

    #[test]
    fn matrix_composition_matches_row_convention() {
        let first = m(2, 2, &[1, 0, 0, 0]);
        let second = m(2, 2, &[0, 1, 0, 1]);
        assert_eq!(first.compose(&second).unwrap(), m(2, 2, &[0, 1, 0, 0]));
    }

    #[test]
    fn composition_rejects_mixed_algebras() {
        let a = t(3, &[0, 0, 0]);
        let b = t(4, &[0, 0, 0, 0]);
        assert_eq!(a.compose(&b).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn idempotency() {
        assert!(t(4, &[0, 0, 2, 0]).is_idempotent());
        assert!(!t(3, &[1, 2, 0]).is_idempotent());
        assert!(m(2, 2, &[0, 1, 0, 1]).is_idempotent());
    }

    #[test]
    fn ranks_and_image_bases() {
        let a = t(4, &[1, 1, 2, 2]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.image_basis().codes(), vec![1, 2]);

        let b = m(2, 2, &[0, 1, 0, 0]);
        assert_eq!(b.rank(), 1);
        assert_eq!(b.image_basis().codes(), vec![1]); // {(0,1)}

        let id = Endomorphism::identity(AlgebraDescriptor::finite_set(3).unwrap());
        assert_eq!(id.rank(), 3);
    }

    #[test]
    fn construction_rejects_bad_actions() {
        let alg = AlgebraDescriptor::finite_set(3).unwrap();
        assert!(Endomorphism::from_table(alg, vec![0, 3, 1]).is_err());
        assert!(Endomorphism::from_table(alg, vec![0, 1]).is_err());
        let v = AlgebraDescriptor::vector_space(2, 2).unwrap();
        assert!(Endomorphism::from_matrix(v, vec![0, 1, 2, 0]).is_err());
        assert!(Endomorphism::from_table(v, vec![0, 0]).is_err());
    }

    #[test]
    fn partial_application() {
        let alg = AlgebraDescriptor::finite_set(4).unwrap();
        let pe = PartialEndomorphism::new(
            alg,
            ElementSet::from_codes(&[0, 1, 2]).unwrap(),
            vec![ElementId(1), ElementId(1), ElementId(2)],
        )
        .unwrap();
        assert_eq!(pe.apply(ElementId(0)).unwrap(), ElementId(1));
        assert_eq!(
            pe.apply(ElementId(3)).unwrap_err(),
            Error::OutsideDomain { code: 3 }
        );
        assert!(pe.is_idempotent());
        assert_eq!(pe.image_basis().codes(), vec![1, 2]);

        // linearity: B0 = {(1,0)}, (1,0) -> (0,1), so (2,0) -> (0,2)
        let v = AlgebraDescriptor::vector_space(3, 2).unwrap();
        let pe = PartialEndomorphism::new(
            v,
            ElementSet::from_codes(&[3]).unwrap(),
            vec![ElementId(1)],
        )
        .unwrap();
        assert_eq!(pe.apply(ElementId(6)).unwrap(), ElementId(2));
        assert!(!pe.is_idempotent()); // (0,1) is not in <(1,0)>
    }

    #[test]
    fn partial_fixed_points() {
        let alg = AlgebraDescriptor::finite_set(4).unwrap();
        let pe = PartialEndomorphism::new(
            alg,
            ElementSet::from_codes(&[2, 0, 1]).unwrap(),
            vec![ElementId(2), ElementId(1), ElementId(1)],
        )
        .unwrap();
        // storage is sorted by domain code regardless of construction order
        assert_eq!(pe.domain_basis().codes(), vec![0, 1, 2]);
        assert_eq!(pe.images(), &[ElementId(1), ElementId(1), ElementId(2)]);
        assert_eq!(pe.apply(ElementId(1)).unwrap(), ElementId(1));
    }

    #[test]
    fn values_are_shareable_across_tasks() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Endomorphism>();
        assert_send_sync::<PartialEndomorphism>();
        assert_send_sync::<AlgebraDescriptor>();
        assert_send_sync::<ElementSet>();
    }

    #[test]
    fn partial_rejects_dependent_domain() {
        let v = AlgebraDescriptor::vector_space(2, 2).unwrap();
        let err = PartialEndomorphism::new(
            v,
            ElementSet::from_codes(&[1, 2, 3]).unwrap(),
            vec![ElementId(1), ElementId(2), ElementId(3)],
        )
        .unwrap_err();
        assert_eq!(err, Error::DependentSet);
    }
}
