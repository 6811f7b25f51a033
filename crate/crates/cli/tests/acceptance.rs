//! Acceptance suite. One test per criterion; each prints a single
//! `criterion N ... PASS` line (visible with `--nocapture`) and enforces
//! its runtime budget.
//!
//! 1. exhaustive transformations, n in {2,3,4}
//! 2. 1000 random singular transformations on 6 points
//! 3. exhaustive singular matrices over (p,d) in {(2,2),(2,3),(3,2)}
//! 4. oracle concordance with the pipeline on the smallest instances
//! 5. greedy exchange chains: valid, no longer than rank, never beat by BFS
//! 6. transposition decompositions recompose; gadgets realize transpositions
//! 7. every emitted partial totalizes faithfully (inline over suites 1-3)
//! 8. byte-identical structured output across runs

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use idemfac::algebra::{AlgebraDescriptor, ElementId, ElementSet};
use idemfac::endo::{Endomorphism, PartialEndomorphism};
use idemfac::factorization::{
    basis_chain, exchange_idempotents, factorize, induced_permutation, initial_idempotent,
    perm_to_transpositions, totalize, transposition_idempotents, Permutation,
};
use idemfac::instances::{enumerate_endomorphisms, is_singular};
use idemfac::oracle::{idempotent_generated, shortest_chain_length, OracleBudget, Reachability};
use idemfac::verify_factorization;
use idemfac_cli::OutputDocument;

fn check_certificate(a: &Endomorphism) {
    let report = factorize(a).expect("singular inputs factor");
    assert!(report.checks.product_matches, "product mismatch for {a:?}");
    assert!(report.checks.all_idempotent, "non-idempotent factor for {a:?}");
    assert!(report.checks.ranks_equal, "rank drift for {a:?}");
    assert!(
        report.factors.len() <= std::cmp::max(1, 5 * report.rank),
        "factor bound exceeded for {a:?}"
    );
}

fn within(budget_secs: u64, elapsed: Duration, what: &str) {
    assert!(
        elapsed <= Duration::from_secs(budget_secs),
        "{what} took {elapsed:?}, budget {budget_secs}s"
    );
}

#[test]
fn criterion_1_exhaustive_transformations() {
    let start = Instant::now();
    let expected = [(2u64, 2usize), (3, 21), (4, 232)];
    for (n, count) in expected {
        let alg = AlgebraDescriptor::finite_set(n).unwrap();
        let singular: Vec<Endomorphism> =
            enumerate_endomorphisms(alg, true).unwrap().collect();
        assert_eq!(singular.len(), count, "singular count for n={n}");
        for a in &singular {
            check_certificate(a);
        }
    }
    let elapsed = start.elapsed();
    within(5, elapsed, "criterion 1");
    println!("criterion 1 (exhaustive T_2..T_4, 255 maps): PASS in {elapsed:?}");
}

fn random_singular_t6(count: usize) -> Vec<Endomorphism> {
    let alg = AlgebraDescriptor::finite_set(6).unwrap();
    let mut rng = StdRng::seed_from_u64(0x1defac);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let table: Vec<u64> = (0..6).map(|_| rng.gen_range(0..6)).collect();
        let a = Endomorphism::from_table(alg, table).unwrap();
        if is_singular(&a) {
            out.push(a);
        }
    }
    out
}

#[test]
fn criterion_2_random_transformations() {
    let start = Instant::now();
    for a in random_singular_t6(1000) {
        check_certificate(&a);
    }
    let elapsed = start.elapsed();
    within(10, elapsed, "criterion 2");
    println!("criterion 2 (1000 random singular maps on 6 points): PASS in {elapsed:?}");
}

#[test]
fn criterion_3_exhaustive_matrices() {
    let start = Instant::now();
    let expected = [((2u64, 2usize), 10usize), ((2, 3), 344), ((3, 2), 33)];
    for ((p, d), count) in expected {
        let alg = AlgebraDescriptor::vector_space(p, d).unwrap();
        let singular: Vec<Endomorphism> =
            enumerate_endomorphisms(alg, true).unwrap().collect();
        assert_eq!(singular.len(), count, "singular count for p={p}, d={d}");
        for a in &singular {
            check_certificate(a);
        }
    }
    let elapsed = start.elapsed();
    within(30, elapsed, "criterion 3");
    println!("criterion 3 (exhaustive singular matrices, 387 maps): PASS in {elapsed:?}");
}

#[test]
fn criterion_4_oracle_concordance() {
    let start = Instant::now();
    let budget = OracleBudget::default();
    let instances = [
        AlgebraDescriptor::finite_set(3).unwrap(),
        AlgebraDescriptor::vector_space(2, 2).unwrap(),
    ];
    let mut checked = 0usize;
    for alg in instances {
        for a in enumerate_endomorphisms(alg, true).unwrap() {
            assert_eq!(
                idempotent_generated(&a, &budget),
                Reachability::Reachable,
                "oracle misses {a:?}"
            );
            let report = factorize(&a).unwrap();
            assert!(verify_factorization(&a, &report.factors).unwrap().all_pass());
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    within(30, elapsed, "criterion 4");
    println!("criterion 4 (oracle concordance on {checked} maps): PASS in {elapsed:?}");
}

/// All independent subsets of exactly `size` elements.
fn independent_subsets(alg: AlgebraDescriptor, size: usize) -> Vec<ElementSet> {
    let universe = alg.universe_size();
    assert!(universe <= 16);
    (0u64..(1 << universe))
        .filter(|mask| mask.count_ones() as usize == size)
        .map(|mask| {
            let codes: Vec<u64> = (0..universe).filter(|i| mask >> i & 1 == 1).collect();
            ElementSet::from_codes(&codes).unwrap()
        })
        .filter(|s| alg.is_independent(s).unwrap())
        .collect()
}

fn overlap(a: &ElementSet, b: &ElementSet) -> usize {
    a.iter().filter(|x| b.contains(*x)).count()
}

#[test]
fn criterion_5_greedy_chains_are_valid_and_short() {
    let start = Instant::now();
    let budget = OracleBudget::default();
    let mut pairs = 0usize;

    let mut cases: Vec<(AlgebraDescriptor, usize)> = Vec::new();
    for n in 2..=5u64 {
        let alg = AlgebraDescriptor::finite_set(n).unwrap();
        for l in 1..=std::cmp::min(n as usize - 1, 3) {
            cases.push((alg, l));
        }
    }
    let v23 = AlgebraDescriptor::vector_space(2, 3).unwrap();
    cases.push((v23, 1));
    cases.push((v23, 2));

    for (alg, l) in cases {
        let sets = independent_subsets(alg, l);
        for from in &sets {
            for to in &sets {
                let chain = basis_chain(alg, from, to).unwrap();
                let steps = chain.step_count();
                assert!(steps <= l, "chain longer than rank for {from} -> {to}");
                for s in chain.sets() {
                    assert_eq!(s.len(), l);
                    assert!(alg.is_independent(s).unwrap());
                }
                for pair in chain.sets().windows(2) {
                    let moved =
                        pair[0].iter().filter(|x| !pair[1].contains(*x)).count();
                    assert!(moved <= 1, "consecutive sets differ by more than one");
                    assert_eq!(
                        overlap(&pair[1], to),
                        overlap(&pair[0], to) + 1,
                        "overlap with the target must grow by exactly 1"
                    );
                }
                let minimal = shortest_chain_length(alg, from, to, &budget).unwrap();
                assert!(minimal <= steps, "greedy beat the BFS minimum?");
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(60, elapsed, "criterion 5");
    println!("criterion 5 (greedy chains over {pairs} endpoint pairs): PASS in {elapsed:?}");
}

fn permutations_of(k: usize) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, rest: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..k as u64).collect(), &mut out);
    out
}

fn apply_transpositions(swaps: &[(ElementId, ElementId)], mut v: ElementId) -> ElementId {
    for &(x, y) in swaps {
        if v == x {
            v = y;
        } else if v == y {
            v = x;
        }
    }
    v
}

#[test]
fn criterion_6_transpositions_and_gadgets() {
    let start = Instant::now();

    // Every permutation of up to 5 points recomposes from its
    // transposition list under left-to-right application.
    for k in 1..=5usize {
        let carrier = ElementSet::from_codes(&(0..k as u64).collect::<Vec<_>>()).unwrap();
        for images in permutations_of(k) {
            let f = Permutation::new(
                carrier.clone(),
                images.iter().copied().map(ElementId).collect(),
            )
            .unwrap();
            let swaps = perm_to_transpositions(&f);
            assert!(swaps.len() < k, "more than carrier-1 transpositions");
            for c in carrier.iter() {
                assert_eq!(apply_transpositions(&swaps, c), f.apply(c).unwrap());
            }
        }
    }

    // Every transposition on a carrier with a free point in T_5 is realized
    // by three partial idempotents.
    let alg = AlgebraDescriptor::finite_set(5).unwrap();
    let mut gadgets = 0usize;
    for size in 2..=4usize {
        for carrier in independent_subsets(alg, size) {
            for x in carrier.iter() {
                for y in carrier.iter() {
                    if x == y {
                        continue;
                    }
                    let fs = transposition_idempotents(alg, &carrier, x, y).unwrap();
                    for f in &fs {
                        assert!(f.is_idempotent());
                    }
                    for c in carrier.iter() {
                        let mut v = c;
                        for f in &fs {
                            v = f.apply(v).unwrap();
                        }
                        let want = if c == x {
                            y
                        } else if c == y {
                            x
                        } else {
                            c
                        };
                        assert_eq!(v, want, "gadget composite is not the transposition");
                    }
                    gadgets += 1;
                }
            }
        }
    }

    let elapsed = start.elapsed();
    within(5, elapsed, "criterion 6");
    println!(
        "criterion 6 (Sym(k<=5) recomposition, {gadgets} gadgets in T_5): PASS in {elapsed:?}"
    );
}

/// Re-derives the partials the pipeline emits for `a` and checks that each
/// totalizes to an idempotent that restricts to it with the same image.
fn check_partials_totalize(a: &Endomorphism) -> usize {
    let alg = a.algebra();
    if a.rank() == 0 {
        return 0;
    }
    let (_, transversal) = initial_idempotent(a).unwrap();
    let image_basis = a.image_basis().sorted();
    let chain = basis_chain(alg, &transversal, &image_basis).unwrap();
    let mut partials: Vec<PartialEndomorphism> = Vec::new();
    for pair in chain.sets().windows(2) {
        partials.extend(exchange_idempotents(alg, &pair[0], &pair[1]).unwrap());
    }
    let repair = induced_permutation(&transversal, &partials, a).unwrap();
    for (x, y) in perm_to_transpositions(&repair) {
        partials.extend(transposition_idempotents(alg, &image_basis, x, y).unwrap());
    }

    for pe in &partials {
        let total = totalize(alg, pe).unwrap();
        assert!(total.is_idempotent(), "totalization broke idempotency");
        for (b, img) in pe.domain_basis().iter().zip(pe.images()) {
            assert_eq!(total.apply(b).unwrap(), *img, "totalization moved the domain");
        }
        for u in total.image_basis().iter() {
            assert!(alg.in_closure(u, &pe.image_basis()).unwrap());
        }
        for u in pe.image_basis().iter() {
            assert!(alg.in_closure(u, &total.image_basis()).unwrap());
        }
    }
    partials.len()
}

#[test]
fn criterion_7_totalization_is_faithful_across_suites() {
    let start = Instant::now();
    let mut partials = 0usize;
    for n in 2..=4u64 {
        let alg = AlgebraDescriptor::finite_set(n).unwrap();
        for a in enumerate_endomorphisms(alg, true).unwrap() {
            partials += check_partials_totalize(&a);
        }
    }
    for a in random_singular_t6(1000) {
        partials += check_partials_totalize(&a);
    }
    for (p, d) in [(2u64, 2usize), (2, 3), (3, 2)] {
        let alg = AlgebraDescriptor::vector_space(p, d).unwrap();
        for a in enumerate_endomorphisms(alg, true).unwrap() {
            partials += check_partials_totalize(&a);
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 7 ({partials} emitted partials totalize faithfully): PASS in {elapsed:?}");
}

fn suite_1_documents() -> String {
    let mut out = String::new();
    for n in 2..=4u64 {
        let alg = AlgebraDescriptor::finite_set(n).unwrap();
        for a in enumerate_endomorphisms(alg, true).unwrap() {
            let doc = OutputDocument::from_report(&factorize(&a).unwrap());
            out.push_str(&doc.to_json());
        }
    }
    out
}

#[test]
fn criterion_8_structured_output_is_deterministic() {
    let start = Instant::now();
    let first = suite_1_documents();
    let second = suite_1_documents();
    assert_eq!(first, second, "re-running suite 1 changed the output bytes");
    let elapsed = start.elapsed();
    println!(
        "criterion 8 (suite 1 emitted {} identical bytes twice): PASS in {elapsed:?}",
        first.len()
    );
}
