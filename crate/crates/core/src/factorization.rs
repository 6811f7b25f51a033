//! The constructive pipeline that writes a singular endomorphism as a
//! product of idempotents of equal rank.
//!
//! The stages, in application order:
//!
//! 1. retraction: split `a = e . a'` with `e` idempotent and `a'` injective
//!    on the subalgebra generated by a preimage transversal `E`;
//! 2. exchange chain: walk `E` to the image basis `Ea` one element swap at
//!    a time, emitting one or two partial idempotents per swap;
//! 3. permutation repair: the chain may land on `Ea` in the wrong order;
//!    the discrepancy is a permutation of `Ea`, decomposed into
//!    transpositions, each realized by a gadget of three partial
//!    idempotents sharing a scratch element outside `<Ea>`;
//! 4. totalization: every partial idempotent is extended to a total one of
//!    the same rank by collapsing the rest of a full basis onto a single
//!    image element.
//!
//! Every "there exists" choice is resolved canonically smallest, so the
//! emitted certificate is byte-reproducible.

use crate::algebra::{AlgebraDescriptor, ElementId, ElementSet};
use crate::endo::{Endomorphism, PartialEndomorphism};
use crate::error::{Error, Result};
use crate::instances::is_singular;

/// A walk through equal-size independent sets in which consecutive sets
/// differ by at most one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChain {
    sets: Vec<ElementSet>,
}

impl BasisChain {
    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Number of exchange steps (one less than the number of sets).
    pub fn step_count(&self) -> usize {
        self.sets.len().saturating_sub(1)
    }
}

/// A bijection of a carrier set onto itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    carrier: ElementSet,
    images: Vec<ElementId>,
}

impl Permutation {
    pub fn new(carrier: ElementSet, images: Vec<ElementId>) -> Result<Self> {
        if carrier.len() != images.len() {
            return Err(Error::Precondition {
                op: "Permutation::new",
                reason: "carrier and image lists differ in length".into(),
            });
        }
        for (i, y) in images.iter().enumerate() {
            if !carrier.contains(*y) {
                return Err(Error::Precondition {
                    op: "Permutation::new",
                    reason: format!("image {y} is not a carrier member"),
                });
            }
            if images[..i].contains(y) {
                return Err(Error::Precondition {
                    op: "Permutation::new",
                    reason: format!("image {y} repeats; map is not injective"),
                });
            }
        }
        Ok(Permutation { carrier, images })
    }

    pub fn identity(carrier: ElementSet) -> Self {
        let images = carrier.elements().to_vec();
        Permutation { carrier, images }
    }

    pub fn carrier(&self) -> &ElementSet {
        &self.carrier
    }

    pub fn apply(&self, x: ElementId) -> Result<ElementId> {
        let pos = self
            .carrier
            .elements()
            .iter()
            .position(|&c| c == x)
            .ok_or(Error::OutsideDomain { code: x.code() })?;
        Ok(self.images[pos])
    }

    pub fn is_identity(&self) -> bool {
        self.carrier.elements() == self.images
    }
}

/// The four recomputed certificate checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateChecks {
    /// Left-to-right product of the factors equals the input.
    pub product_matches: bool,
    /// Every factor squares to itself.
    pub all_idempotent: bool,
    /// Every factor has the rank of the input.
    pub ranks_equal: bool,
    /// At most `max(1, 5 * rank)` factors.
    pub factor_bound_ok: bool,
}

impl CertificateChecks {
    pub fn all_pass(&self) -> bool {
        self.product_matches && self.all_idempotent && self.ranks_equal && self.factor_bound_ok
    }
}

/// A factorization certificate: the input, the factor list in application
/// order, and checks recomputed from those factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub input: Endomorphism,
    pub rank: usize,
    pub factors: Vec<Endomorphism>,
    /// Number of basis sets in the exchange chain (0 for the rank-0 bypass).
    pub chain_length: usize,
    pub transposition_count: usize,
    pub checks: CertificateChecks,
}

fn invariant(stage: &'static str, detail: impl Into<String>) -> Error {
    Error::Invariant { stage, detail: detail.into() }
}

/// Splits a singular `a` as `e . a'`: returns the idempotent retraction `e`
/// together with the transversal `E` (one canonically smallest preimage per
/// image-basis element, in ascending order). `e` fixes `E`, satisfies
/// `e . a = a`, and `a` is injective on `<E>`.
pub fn initial_idempotent(a: &Endomorphism) -> Result<(Endomorphism, ElementSet)> {
    if !is_singular(a) {
        return Err(Error::NotSingular);
    }
    let alg = a.algebra();
    if a.rank() == 0 {
        return Err(Error::DegenerateRank);
    }

    let (e, transversal) = match alg {
        AlgebraDescriptor::FiniteSet { n } => {
            let table = a.table().expect("finite-set endomorphism");
            // Smallest preimage of each image point.
            let mut rep = vec![u64::MAX; n as usize];
            for (x, &v) in table.iter().enumerate() {
                if rep[v as usize] == u64::MAX {
                    rep[v as usize] = x as u64;
                }
            }
            let e_table: Vec<u64> = table.iter().map(|&v| rep[v as usize]).collect();
            let mut transversal: Vec<u64> =
                rep.into_iter().filter(|&r| r != u64::MAX).collect();
            transversal.sort_unstable();
            (
                Endomorphism::from_table(alg, e_table)?,
                ElementSet::from_codes(&transversal)?,
            )
        }
        AlgebraDescriptor::VectorSpace { p, d } => {
            let entries = a.matrix().expect("vector-space endomorphism");
            // Pivot rows: basis-vector images kept by the greedy scan.
            let mut span = crate::fp::Span::new(p);
            let mut pivot_rows: Vec<Vec<u64>> = Vec::new();
            let mut pivot_indices: Vec<usize> = Vec::new();
            for i in 0..d {
                let row = entries[i * d..(i + 1) * d].to_vec();
                if span.insert(&row) {
                    pivot_rows.push(row);
                    pivot_indices.push(i);
                }
            }
            // e sends x to the unique preimage of x.a inside <E>.
            let mut e_entries = Vec::with_capacity(d * d);
            for i in 0..d {
                let row = &entries[i * d..(i + 1) * d];
                let coeffs = crate::fp::solve_coords(p, &pivot_rows, row)
                    .ok_or_else(|| invariant("retraction", "image row escapes the image span"))?;
                let mut pulled = vec![0u64; d];
                for (c, &pi) in coeffs.iter().zip(&pivot_indices) {
                    pulled[pi] = (pulled[pi] + c) % p;
                }
                e_entries.extend_from_slice(&pulled);
            }
            let mut transversal: Vec<u64> = pivot_indices
                .iter()
                .map(|&i| p.pow((d - 1 - i) as u32))
                .collect();
            transversal.sort_unstable();
            (
                Endomorphism::from_matrix(alg, e_entries)?,
                ElementSet::from_codes(&transversal)?,
            )
        }
    };

    if !e.is_idempotent() {
        return Err(invariant("retraction", "retraction is not idempotent"));
    }
    if e.compose(a)? != *a {
        return Err(invariant("retraction", "retraction does not absorb into the input"));
    }
    if e.rank() != a.rank() {
        return Err(invariant("retraction", "retraction changes rank"));
    }
    // Injectivity of the input on the transversal, hence on <E>.
    let mut images = Vec::new();
    for x in transversal.iter() {
        let y = a.apply(x)?;
        if images.contains(&y) {
            return Err(invariant("retraction", "input is not injective on the transversal"));
        }
        images.push(y);
    }
    Ok((e, transversal))
}

/// Greedy walk from `from` to `to` in which each step swaps out the
/// smallest element not yet shared and swaps in the smallest usable target
/// element, strictly growing the overlap with `to`.
pub fn basis_chain(
    alg: AlgebraDescriptor,
    from: &ElementSet,
    to: &ElementSet,
) -> Result<BasisChain> {
    if from.len() != to.len() || from.is_empty() {
        return Err(Error::Precondition {
            op: "basis_chain",
            reason: "endpoints must be nonempty sets of equal size".into(),
        });
    }
    if !alg.is_independent(from)? || !alg.is_independent(to)? {
        return Err(Error::DependentSet);
    }

    let l = from.len();
    let mut sets = vec![from.clone()];
    let mut current = from.clone();
    while !current.set_eq(to) {
        if sets.len() > l + 1 {
            return Err(invariant("basis-chain", "walk exceeded its step bound"));
        }
        let leaving = current
            .sorted()
            .iter()
            .find(|&x| !to.contains(x))
            .ok_or_else(|| invariant("basis-chain", "no element left to swap out"))?;
        let remainder = current.without(leaving);
        let mut entering = None;
        for c in to.sorted().iter() {
            if current.contains(c) {
                continue;
            }
            if !alg.in_closure(c, &remainder)? {
                entering = Some(c);
                break;
            }
        }
        let entering = entering.ok_or_else(|| {
            invariant("basis-chain", "no target element is independent of the remainder")
        })?;
        let next = remainder.with_appended(entering)?;
        if !alg.is_independent(&next)? {
            return Err(invariant("basis-chain", "swap produced a dependent set"));
        }
        current = next;
        sets.push(current.clone());
    }
    Ok(BasisChain { sets })
}

fn overlap(a: &ElementSet, b: &ElementSet) -> usize {
    a.iter().filter(|x| b.contains(*x)).count()
}

/// Realizes one chain step as one or two partial idempotents whose
/// composite carries `ei` onto `ei1` as sets.
///
/// With `D` the shared part, `x` the leaving and `y` the entering element:
/// when `y` is independent of `<D u {x}>` a single idempotent fixes
/// `D u {y}` and sends `x` to `y`; otherwise a scratch element `z` outside
/// `<D u {x,y}>` routes the swap in two hops, `x -> z` then `z -> y`.
pub fn exchange_idempotents(
    alg: AlgebraDescriptor,
    ei: &ElementSet,
    ei1: &ElementSet,
) -> Result<Vec<PartialEndomorphism>> {
    if ei.len() != ei1.len() || ei.set_eq(ei1) {
        return Err(Error::Precondition {
            op: "exchange_idempotents",
            reason: "sets must be distinct and of equal size".into(),
        });
    }
    if !alg.is_independent(ei)? || !alg.is_independent(ei1)? {
        return Err(Error::DependentSet);
    }
    if ei.len() >= alg.rank() {
        return Err(Error::Precondition {
            op: "exchange_idempotents",
            reason: "sets must have rank below the algebra's".into(),
        });
    }
    let shared: Vec<ElementId> = ei.iter().filter(|x| ei1.contains(*x)).collect();
    if shared.len() + 1 != ei.len() {
        return Err(Error::Precondition {
            op: "exchange_idempotents",
            reason: "sets must differ in exactly one element".into(),
        });
    }
    let leaving = ei
        .iter()
        .find(|x| !ei1.contains(*x))
        .expect("size difference guarantees a leaving element");
    let entering = ei1
        .iter()
        .find(|y| !ei.contains(*y))
        .expect("size difference guarantees an entering element");

    let mut shared_set = ElementSet::new(shared.clone())?;
    let direct = !alg.in_closure(entering, &shared_set.with_appended(leaving)?)?;

    let partials = if direct {
        // One idempotent on <D u {x, y}>: fix D and y, send x to y.
        let mut basis = shared.clone();
        let mut images = shared.clone();
        basis.push(leaving);
        images.push(entering);
        basis.push(entering);
        images.push(entering);
        vec![PartialEndomorphism::new(alg, ElementSet::new(basis)?, images)?]
    } else {
        shared_set = shared_set.with_appended(leaving)?;
        let blocked = shared_set.with_appended(entering)?;
        let scratch = alg.witness_outside(&blocked)?.ok_or_else(|| {
            invariant("exchange-idempotents", "no scratch element outside the swap span")
        })?;
        let mut basis1 = shared.clone();
        let mut images1 = shared.clone();
        basis1.push(leaving);
        images1.push(scratch);
        basis1.push(scratch);
        images1.push(scratch);
        let mut basis2 = shared.clone();
        let mut images2 = shared.clone();
        basis2.push(entering);
        images2.push(entering);
        basis2.push(scratch);
        images2.push(entering);
        vec![
            PartialEndomorphism::new(alg, ElementSet::new(basis1)?, images1)?,
            PartialEndomorphism::new(alg, ElementSet::new(basis2)?, images2)?,
        ]
    };

    for pe in &partials {
        if !pe.is_idempotent() {
            return Err(invariant("exchange-idempotents", "emitted factor is not idempotent"));
        }
    }
    // The composite must carry ei exactly onto ei1.
    let mut carried = Vec::new();
    for x in ei.iter() {
        let mut v = x;
        for pe in &partials {
            v = pe.apply(v).map_err(|_| {
                invariant("exchange-idempotents", "swap composite leaves a factor's domain")
            })?;
        }
        carried.push(v);
    }
    let carried = ElementSet::new(carried)
        .map_err(|_| invariant("exchange-idempotents", "swap composite is not injective"))?;
    if !carried.set_eq(ei1) {
        return Err(invariant("exchange-idempotents", "swap composite misses the target set"));
    }
    Ok(partials)
}

/// The permutation `f` of the image basis defined by `(x.h).f = x.a`,
/// where `h` is the composite of the chain factors. Bijectivity is
/// verified, not assumed.
pub fn induced_permutation(
    transversal: &ElementSet,
    chain_factors: &[PartialEndomorphism],
    a: &Endomorphism,
) -> Result<Permutation> {
    let mut pairs: Vec<(ElementId, ElementId)> = Vec::new();
    for x in transversal.iter() {
        let mut through = x;
        for pe in chain_factors {
            through = pe.apply(through).map_err(|_| {
                invariant("induced-permutation", "chain composite leaves a factor's domain")
            })?;
        }
        pairs.push((through, a.apply(x)?));
    }
    pairs.sort_by_key(|(from, _)| *from);
    let carrier = ElementSet::new(pairs.iter().map(|(from, _)| *from).collect())
        .map_err(|_| invariant("induced-permutation", "chain composite is not injective"))?;
    let images: Vec<ElementId> = pairs.into_iter().map(|(_, to)| to).collect();
    Permutation::new(carrier, images)
        .map_err(|_| invariant("induced-permutation", "induced map is not a bijection"))
}

/// Transposition list composing left-to-right to `f`: cycles are taken in
/// order of their smallest member `c1` and each cycle `(c1 c2 .. ck)`
/// contributes `(c1,c2), (c1,c3), .., (c1,ck)`.
pub fn perm_to_transpositions(f: &Permutation) -> Vec<(ElementId, ElementId)> {
    let mut out = Vec::new();
    let mut visited: Vec<ElementId> = Vec::new();
    for start in f.carrier().sorted().iter() {
        if visited.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        let mut cur = f.apply(start).expect("carrier member");
        while cur != start {
            cycle.push(cur);
            cur = f.apply(cur).expect("carrier member");
        }
        visited.extend(&cycle);
        for later in &cycle[1..] {
            out.push((start, *later));
        }
    }
    out
}

/// Realizes the transposition `(x y)` on `carrier` as three partial
/// idempotents on `<carrier u {z}>`, `z` the smallest element outside
/// `<carrier>`: route `x` to `z`, collapse `y` onto `x`, then route `z`
/// to `y`. The composite fixes the rest of the carrier pointwise.
pub fn transposition_idempotents(
    alg: AlgebraDescriptor,
    carrier: &ElementSet,
    x: ElementId,
    y: ElementId,
) -> Result<[PartialEndomorphism; 3]> {
    if x == y || !carrier.contains(x) || !carrier.contains(y) {
        return Err(Error::Precondition {
            op: "transposition_idempotents",
            reason: "x and y must be distinct carrier members".into(),
        });
    }
    if carrier.len() >= alg.rank() {
        return Err(Error::Precondition {
            op: "transposition_idempotents",
            reason: "carrier must have rank below the algebra's".into(),
        });
    }
    let z = alg
        .witness_outside(carrier)?
        .ok_or_else(|| invariant("transposition-gadget", "no scratch element outside the carrier"))?;

    let basis = carrier.with_appended(z)?;
    let map = |rule: &dyn Fn(ElementId) -> ElementId| -> Result<PartialEndomorphism> {
        let images = basis.iter().map(rule).collect();
        PartialEndomorphism::new(alg, basis.clone(), images)
    };
    let f1 = map(&|u| if u == x || u == z { z } else { u })?;
    let f2 = map(&|u| if u == y { x } else { u })?;
    let f3 = map(&|u| if u == z { y } else { u })?;

    for f in [&f1, &f2, &f3] {
        if !f.is_idempotent() {
            return Err(invariant("transposition-gadget", "gadget factor is not idempotent"));
        }
    }
    Ok([f1, f2, f3])
}

/// Extends a partial idempotent to a total idempotent of the same rank:
/// complete the domain basis to a full basis and collapse the new elements
/// onto the smallest image-basis element.
pub fn totalize(alg: AlgebraDescriptor, pe: &PartialEndomorphism) -> Result<Endomorphism> {
    if !pe.is_idempotent() {
        return Err(Error::Precondition {
            op: "totalize",
            reason: "only idempotent partial maps are extended".into(),
        });
    }
    let image_basis = pe.image_basis();
    let sink = image_basis.min().ok_or(Error::DegenerateRank)?;
    let full = alg.extend_to_basis(pe.domain_basis())?;

    // `full` keeps the domain basis as its prefix, in order.
    let assigned: Vec<ElementId> = (0..full.len())
        .map(|i| if i < pe.domain_basis().len() { pe.images()[i] } else { sink })
        .collect();

    let total = match alg {
        AlgebraDescriptor::FiniteSet { n } => {
            let mut table = vec![0u64; n as usize];
            for (b, y) in full.iter().zip(&assigned) {
                table[b.code() as usize] = y.code();
            }
            Endomorphism::from_table(alg, table)?
        }
        AlgebraDescriptor::VectorSpace { p, d } => {
            let rows: Vec<Vec<u64>> = full.iter().map(|b| alg.coords(b)).collect();
            let mut entries = Vec::with_capacity(d * d);
            for i in 0..d {
                let mut unit = vec![0u64; d];
                unit[i] = 1;
                let coeffs = crate::fp::solve_coords(p, &rows, &unit)
                    .ok_or_else(|| invariant("totalize", "completed basis does not span"))?;
                let mut image = vec![0u64; d];
                for (c, y) in coeffs.iter().zip(&assigned) {
                    let yc = alg.coords(*y);
                    for j in 0..d {
                        image[j] = (image[j] + c * yc[j]) % p;
                    }
                }
                entries.extend_from_slice(&image);
            }
            Endomorphism::from_matrix(alg, entries)?
        }
    };

    if !total.is_idempotent() {
        return Err(invariant("totalize", "total extension is not idempotent"));
    }
    for (b, y) in pe.domain_basis().iter().zip(pe.images()) {
        if total.apply(b)? != *y {
            return Err(invariant("totalize", "total extension disagrees on the domain basis"));
        }
    }
    if !spans_equal(alg, &total.image_basis(), &image_basis)? {
        return Err(invariant("totalize", "total extension changes the image"));
    }
    Ok(total)
}

fn spans_equal(alg: AlgebraDescriptor, a: &ElementSet, b: &ElementSet) -> Result<bool> {
    for x in a.iter() {
        if !alg.in_closure(x, b)? {
            return Ok(false);
        }
    }
    for y in b.iter() {
        if !alg.in_closure(y, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs the whole pipeline on a singular endomorphism and returns the
/// certificate. The zero map of a vector space is its own certificate.
pub fn factorize(a: &Endomorphism) -> Result<FactorizationReport> {
    if !is_singular(a) {
        return Err(Error::NotSingular);
    }
    let alg = a.algebra();
    let rank = a.rank();

    if rank == 0 {
        let factors = vec![a.clone()];
        let checks = verify_factorization(a, &factors)?;
        return Ok(FactorizationReport {
            input: a.clone(),
            rank,
            factors,
            chain_length: 0,
            transposition_count: 0,
            checks,
        });
    }

    let (retraction, transversal) = initial_idempotent(a)?;
    let image_basis = a.image_basis().sorted();
    let chain = basis_chain(alg, &transversal, &image_basis)?;

    // Strict +1 overlap growth per step, all sets independent of size rank.
    for (i, pair) in chain.sets().windows(2).enumerate() {
        let grown = overlap(&pair[1], &image_basis);
        if grown != overlap(&pair[0], &image_basis) + 1 {
            return Err(invariant("basis-chain", format!("step {i} does not grow the overlap by 1")));
        }
    }

    let mut partials: Vec<PartialEndomorphism> = Vec::new();
    for pair in chain.sets().windows(2) {
        partials.extend(exchange_idempotents(alg, &pair[0], &pair[1])?);
    }

    let repair = induced_permutation(&transversal, &partials, a)?;
    let transpositions = perm_to_transpositions(&repair);
    for &(x, y) in &transpositions {
        partials.extend(transposition_idempotents(alg, &image_basis, x, y)?);
    }

    // Composability: each factor's image lies inside the next one's domain,
    // and the retraction's image lies inside the first factor's domain.
    if let Some(first) = partials.first() {
        for x in transversal.iter() {
            if !first.is_in_domain(x)? {
                return Err(invariant(
                    "composability",
                    "retraction image escapes the first factor's domain",
                ));
            }
        }
    }
    for (i, pair) in partials.windows(2).enumerate() {
        for y in pair[0].images() {
            if !pair[1].is_in_domain(*y)? {
                return Err(invariant(
                    "composability",
                    format!("factor {} image escapes the domain of factor {}", i + 1, i + 2),
                ));
            }
        }
    }

    let mut factors = vec![retraction];
    for pe in &partials {
        factors.push(totalize(alg, pe)?);
    }

    let checks = verify_factorization(a, &factors)?;
    Ok(FactorizationReport {
        input: a.clone(),
        rank,
        factors,
        chain_length: chain.len(),
        transposition_count: transpositions.len(),
        checks,
    })
}

/// Recomputes the four certificate checks from scratch. Usable on factor
/// lists from any source; nothing is trusted from the pipeline.
pub fn verify_factorization(
    a: &Endomorphism,
    factors: &[Endomorphism],
) -> Result<CertificateChecks> {
    for f in factors {
        if f.algebra() != a.algebra() {
            return Err(Error::AlgebraMismatch);
        }
    }
    let mut product = Endomorphism::identity(a.algebra());
    for f in factors {
        product = product.compose(f)?;
    }
    let rank = a.rank();
    Ok(CertificateChecks {
        product_matches: product == *a,
        all_idempotent: factors.iter().all(Endomorphism::is_idempotent),
        ranks_equal: factors.iter().all(|f| f.rank() == rank),
        factor_bound_ok: factors.len() <= std::cmp::max(1, 5 * rank),
    })
}
