//! Exhaustive enumeration of small structures for brute-force oracles.

use super::structure::{tuple_count, ActionTable, FunctionTable, RelationTable, Structure};
use super::SemanticsError;
use crate::syntax::{GameSignature, QUANT};

pub const DEFAULT_CAP: u128 = 1_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of generator families for one parameter tuple: sets of at most
/// `max_gen` distinct subsets of `D^k`.
fn family_count(n: usize, k: usize, max_gen: usize) -> u128 {
    let subsets = 1u128.checked_shl(tuple_count(n, k) as u32).unwrap_or(u128::MAX);
    (0..=max_gen as u128).fold(0u128, |acc, j| acc.saturating_add(binomial(subsets, j)))
}

fn pow_sat(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

fn count_for_domain(sig: &GameSignature, n: usize, max_gen: usize) -> u128 {
    let nn = n as u128;
    let mut total = 1u128;
    for &a in sig.functions.values() {
        total = total.saturating_mul(pow_sat(nn, tuple_count(n, a)));
    }
    for &a in sig.relations.values() {
        total = total.saturating_mul(pow_sat(2, tuple_count(n, a)));
    }
    for (name, &(k, l)) in &sig.actions {
        if name != QUANT {
            total = total.saturating_mul(pow_sat(family_count(n, k, max_gen), tuple_count(n, l)));
        }
    }
    total
}

/// Closed-form number of structures over `sig` with domain sizes `1..=max_domain`.
pub fn count_structures(sig: &GameSignature, max_domain: usize, max_gen: usize) -> u128 {
    (1..=max_domain).fold(0u128, |acc, n| acc.saturating_add(count_for_domain(sig, n, max_gen)))
}

enum Slot {
    Function { name: String, arity: usize },
    Relation { name: String, arity: usize },
    Action { name: String, k: usize, l: usize },
}

/// All structures over one signature and domain size, addressable by index
/// so that workers can split the range.
pub struct DomainSpace {
    n: usize,
    slots: Vec<Slot>,
    // Generator families per action slot, shared by every parameter tuple.
    families: Vec<Vec<Vec<Vec<usize>>>>,
    count: u128,
}

impl DomainSpace {
    fn new(sig: &GameSignature, n: usize, max_gen: usize) -> DomainSpace {
        let mut slots = Vec::new();
        let mut families = Vec::new();
        for (name, &arity) in &sig.functions {
            slots.push(Slot::Function { name: name.clone(), arity });
        }
        for (name, &arity) in &sig.relations {
            slots.push(Slot::Relation { name: name.clone(), arity });
        }
        for (name, &(k, l)) in &sig.actions {
            if name == QUANT {
                continue;
            }
            slots.push(Slot::Action { name: name.clone(), k, l });
            families.push(generator_families(tuple_count(n, k), max_gen));
        }
        DomainSpace {
            n,
            slots,
            families,
            count: count_for_domain(sig, n, max_gen),
        }
    }

    pub fn len(&self) -> u128 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// The structure at mixed-radix index `idx`.
    pub fn nth(&self, mut idx: u128) -> Structure {
        let n = self.n;
        let mut st = Structure::new(n).expect("domain is non-empty");
        let mut take = |radix: usize| {
            let d = (idx % radix as u128) as usize;
            idx /= radix as u128;
            d
        };
        let mut fam = 0;
        for slot in &self.slots {
            match slot {
                Slot::Function { name, arity } => {
                    let values = (0..tuple_count(n, *arity)).map(|_| take(n)).collect();
                    st.functions
                        .insert(name.clone(), FunctionTable { arity: *arity, values });
                }
                Slot::Relation { name, arity } => {
                    let members = (0..tuple_count(n, *arity)).map(|_| take(2) == 1).collect();
                    st.relations
                        .insert(name.clone(), RelationTable { arity: *arity, members });
                }
                Slot::Action { name, k, l } => {
                    let fams = &self.families[fam];
                    fam += 1;
                    let map = (0..tuple_count(n, *l))
                        .map(|_| fams[take(fams.len())].clone())
                        .collect();
                    st.actions
                        .insert(name.clone(), ActionTable { k: *k, l: *l, map });
                }
            }
        }
        st
    }
}

/// Every set of at most `max_gen` distinct subsets of `{0..m}`, each subset a
/// sorted index list.
fn generator_families(m: usize, max_gen: usize) -> Vec<Vec<Vec<usize>>> {
    let subsets: Vec<Vec<usize>> = (0..1usize << m)
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        subsets: &[Vec<usize>],
        start: usize,
        left: usize,
        current: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        out.push(current.clone());
        if left == 0 {
            return;
        }
        for i in start..subsets.len() {
            current.push(subsets[i].clone());
            rec(subsets, i + 1, left - 1, current, out);
            current.pop();
        }
    }
    rec(&subsets, 0, max_gen, &mut current, &mut out);
    out
}

/// All structures over a signature up to a domain bound.
pub struct StructureSpace {
    pub domains: Vec<DomainSpace>,
}

impl StructureSpace {
    pub fn new(
        sig: &GameSignature,
        max_domain: usize,
        max_gen: usize,
        cap: u128,
    ) -> Result<StructureSpace, SemanticsError> {
        if max_domain == 0 {
            return Err(SemanticsError::Structure("maximum domain size must be at least 1".into()));
        }
        let count = count_structures(sig, max_domain, max_gen);
        if count > cap {
            return Err(SemanticsError::TooMany { count, cap });
        }
        for (name, &(k, _)) in &sig.actions {
            if name != QUANT && tuple_count(max_domain, k) > 16 {
                return Err(SemanticsError::TooMany { count: u128::MAX, cap });
            }
        }
        let domains = (1..=max_domain).map(|n| DomainSpace::new(sig, n, max_gen)).collect();
        Ok(StructureSpace { domains })
    }

    pub fn len(&self) -> u128 {
        self.domains.iter().map(DomainSpace::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Structure> + '_ {
        self.domains
            .iter()
            .flat_map(|d| (0..d.len()).map(move |i| d.nth(i)))
    }

    /// Materializes every structure.
    pub fn to_vec(&self) -> Vec<Structure> {
        self.iter().collect()
    }
}

/// Stream of every structure over `sig` with domain size at most
/// `max_domain` and at most `max_gen` generators per parameter tuple.
pub fn enumerate_structures(
    sig: &GameSignature,
    max_domain: usize,
    max_gen: usize,
    cap: u128,
) -> Result<Vec<Structure>, SemanticsError> {
    Ok(StructureSpace::new(sig, max_domain, max_gen, cap)?.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_enumeration() {
        let mut sig = GameSignature::new();
        sig.add_relation("R", 1).unwrap();
        assert_eq!(enumerate_structures(&sig, 1, 1, DEFAULT_CAP).unwrap().len(), 2);

        let empty = GameSignature::new();
        assert_eq!(enumerate_structures(&empty, 2, 1, DEFAULT_CAP).unwrap().len(), 2);

        let mut act = GameSignature::new();
        act.add_action("a", 1, 0).unwrap();
        let all = enumerate_structures(&act, 1, 1, DEFAULT_CAP).unwrap();
        assert_eq!(all.len() as u128, count_structures(&act, 1, 1));
        assert_eq!(all.len(), 3);

        let mut full = GameSignature::new();
        full.add_relation("R", 1).unwrap();
        full.add_action("a", 1, 1).unwrap();
        let all = enumerate_structures(&full, 2, 2, DEFAULT_CAP).unwrap();
        assert_eq!(all.len(), 492);
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn cap_is_enforced() {
        let mut sig = GameSignature::new();
        sig.add_function("f", 2).unwrap();
        assert!(matches!(
            StructureSpace::new(&sig, 4, 1, 1000),
            Err(SemanticsError::TooMany { .. })
        ));
    }
}
