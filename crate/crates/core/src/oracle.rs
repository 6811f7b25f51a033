//! Independent brute-force verifiers. Nothing here calls into the
//! factorization pipeline: reachability is decided by breadth-first closure
//! over actual products, chains by breadth-first search over independent
//! sets, and spans by coefficient enumeration.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::algebra::{AlgebraDescriptor, ElementId, ElementSet};
use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::instances::{endomorphism_count, enumerate_endomorphisms, is_singular};

/// Resource ceilings for the brute-force searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest universe enumerated element by element.
    pub max_universe: u64,
    /// Largest endomorphism count enumerated when collecting idempotents.
    pub max_endos: u64,
    /// Largest number of distinct states a breadth-first search may visit.
    pub max_bfs_states: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_universe: 1 << 12, max_endos: 1 << 24, max_bfs_states: 1 << 22 }
    }
}

/// Three-valued search outcome. Budget exhaustion is reported as
/// [`Reachability::Indeterminate`], never coerced to a negative answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reachability {
    Reachable,
    Unreachable,
    Indeterminate,
}

/// All idempotent endomorphisms of rank exactly `r`, in enumeration order.
pub fn enumerate_idempotents(
    alg: AlgebraDescriptor,
    r: usize,
    budget: &OracleBudget,
) -> Result<Vec<Endomorphism>> {
    let count = endomorphism_count(alg);
    if count > budget.max_endos as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("{count} endomorphisms to scan, budget {}", budget.max_endos),
        });
    }
    Ok(enumerate_endomorphisms(alg, false)?
        .filter(|e| e.rank() == r && e.is_idempotent())
        .collect())
}

/// Is `a` a left-to-right product of singular idempotents of its own rank?
///
/// Breadth-first closure: seed with each such idempotent, expand by
/// right-composition with each of them, deduplicate by action. An
/// automorphism input has no singular idempotents of its rank, so the
/// answer is immediately negative.
pub fn idempotent_generated(a: &Endomorphism, budget: &OracleBudget) -> Reachability {
    let generators = match enumerate_idempotents(a.algebra(), a.rank(), budget) {
        Ok(all) => all.into_iter().filter(is_singular).collect::<Vec<_>>(),
        Err(_) => return Reachability::Indeterminate,
    };
    if generators.is_empty() {
        return Reachability::Unreachable;
    }

    let mut visited: HashSet<Endomorphism> = HashSet::new();
    let mut queue: VecDeque<Endomorphism> = VecDeque::new();
    for g in &generators {
        if g == a {
            return Reachability::Reachable;
        }
        if visited.insert(g.clone()) {
            if visited.len() as u64 > budget.max_bfs_states {
                return Reachability::Indeterminate;
            }
            queue.push_back(g.clone());
        }
    }
    while let Some(state) = queue.pop_front() {
        for g in &generators {
            let next = state.compose(g).expect("same algebra");
            if next == *a {
                return Reachability::Reachable;
            }
            if visited.insert(next.clone()) {
                if visited.len() as u64 > budget.max_bfs_states {
                    return Reachability::Indeterminate;
                }
                queue.push_back(next);
            }
        }
    }
    Reachability::Unreachable
}

/// Least number of single-element swaps turning `from` into `to` while
/// staying independent of constant size, by breadth-first search.
pub fn shortest_chain_length(
    alg: AlgebraDescriptor,
    from: &ElementSet,
    to: &ElementSet,
    budget: &OracleBudget,
) -> Result<usize> {
    if from.len() != to.len() {
        return Err(Error::Precondition {
            op: "shortest_chain_length",
            reason: "endpoint sets must have equal size".into(),
        });
    }
    if !alg.is_independent(from)? || !alg.is_independent(to)? {
        return Err(Error::DependentSet);
    }
    let universe = alg.universe_size();
    if universe > budget.max_universe {
        return Err(Error::BudgetExceeded {
            what: format!("universe of {universe} elements, budget {}", budget.max_universe),
        });
    }

    let canon = |s: &ElementSet| -> Vec<u64> {
        let mut codes = s.codes();
        codes.sort_unstable();
        codes
    };
    let start = canon(from);
    let goal = canon(to);
    if start == goal {
        return Ok(0);
    }

    let mut dist: HashMap<Vec<u64>, usize> = HashMap::new();
    dist.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        let steps = dist[&state];
        let set = ElementSet::from_codes(&state)?;
        for leaving in &state {
            let remainder = set.without(ElementId(*leaving));
            for code in 0..universe {
                let candidate = ElementId(code);
                if set.contains(candidate) {
                    continue;
                }
                let next_set = remainder.with_appended(candidate)?;
                if !alg.is_independent(&next_set)? {
                    continue;
                }
                let key = canon(&next_set);
                if key == goal {
                    return Ok(steps + 1);
                }
                if !dist.contains_key(&key) {
                    if dist.len() as u64 >= budget.max_bfs_states {
                        return Err(Error::BudgetExceeded {
                            what: format!("{} search states", dist.len()),
                        });
                    }
                    dist.insert(key.clone(), steps + 1);
                    queue.push_back(key);
                }
            }
        }
    }
    Err(Error::Invariant {
        stage: "chain-search",
        detail: "equal-size independent sets are always connected by swaps".into(),
    })
}

/// The full closure of `S` in a vector space by exhaustive coefficient
/// enumeration, as a sorted element set. This is the cross-check for
/// elimination-based membership; it never calls `in_closure`.
pub fn span_enumeration_check(
    alg: AlgebraDescriptor,
    set: &ElementSet,
    budget: &OracleBudget,
) -> Result<ElementSet> {
    let AlgebraDescriptor::VectorSpace { p, d } = alg else {
        return Err(Error::Precondition {
            op: "span_enumeration_check",
            reason: "span enumeration applies to vector spaces only".into(),
        });
    };
    alg.check_set(set)?;
    let universe = alg.universe_size();
    if universe > budget.max_universe {
        return Err(Error::BudgetExceeded {
            what: format!("universe of {universe} elements, budget {}", budget.max_universe),
        });
    }
    let mut combos: u128 = 1;
    for _ in 0..set.len() {
        combos = combos.saturating_mul(p as u128);
    }
    if combos > budget.max_endos as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("{combos} coefficient tuples, budget {}", budget.max_endos),
        });
    }

    let coords: Vec<Vec<u64>> = set.iter().map(|x| alg.coords(x)).collect();
    let mut members: HashSet<u64> = HashSet::new();
    let mut coeffs = vec![0u64; set.len()];
    loop {
        let mut v = vec![0u64; d];
        for (c, row) in coeffs.iter().zip(&coords) {
            for j in 0..d {
                v[j] = (v[j] + c * row[j]) % p;
            }
        }
        members.insert(alg.encode(&v).code());

        let mut pos = coeffs.len();
        loop {
            if pos == 0 {
                let mut out: Vec<u64> = members.into_iter().collect();
                out.sort_unstable();
                return ElementSet::from_codes(&out);
            }
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
        }
    }
}
