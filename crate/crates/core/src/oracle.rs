//! Independent brute-force routes used to cross-check the fast paths.
//!
//! Nothing here shares search logic with the enumerator or the orbit BFS:
//! candidate tuples come from a plain odometer sweep, canonicality is tested
//! by definition, and the orbit partition is a union-find over all single
//! braid moves. Slow by design; the fast paths must agree with it exactly.

use std::sync::Arc;

use crate::braid;
use crate::group::{ElemId, PermGroup};
use crate::nielsen::{Base, ClassConstraint, Cover, Equivalence, EnumerationSpec};

/// All tuples satisfying `spec`, found by sweeping `|G|^r` raw tuples and
/// filtering by definition, in lexicographic order.
pub fn naive_nielsen_filter(g: &Arc<PermGroup>, r: usize, spec: &EnumerationSpec) -> Vec<Vec<ElemId>> {
    let n = g.order() as ElemId;
    let mut out = Vec::new();
    let mut tuple = vec![0 as ElemId; r];
    loop {
        if tuple_satisfies(g, &tuple, spec) {
            out.push(tuple.clone());
        }
        // odometer
        let mut pos = r;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
        if r == 0 {
            return out;
        }
    }
}

pub fn tuple_satisfies(g: &Arc<PermGroup>, entries: &[ElemId], spec: &EnumerationSpec) -> bool {
    if entries.iter().any(|&e| e == g.identity_id()) {
        return false;
    }
    let table = g.class_table();
    match &spec.classes {
        ClassConstraint::All => {}
        ClassConstraint::Set(ids) => {
            if entries.iter().any(|&e| !ids.contains(&table.class_of(e))) {
                return false;
            }
        }
        ClassConstraint::Profile(p) => {
            let mut counts = vec![0u64; table.class_count()];
            for &e in entries {
                counts[table.class_of(e) as usize] += 1;
            }
            for (c, want) in counts.iter().enumerate() {
                if p.count(c as u32) != *want {
                    return false;
                }
            }
        }
    }
    if matches!(spec.base, Base::Projective) {
        let prod = entries.iter().fold(g.identity_id(), |acc, &e| g.mult(acc, e));
        if prod != g.identity_id() {
            return false;
        }
    }
    if matches!(spec.equiv, Equivalence::Unmarked) {
        // Canonical by definition: no conjugate is lexicographically smaller.
        for gamma in 1..g.order() as ElemId {
            for (i, &e) in entries.iter().enumerate() {
                let c = g.conj(e, gamma);
                if c < entries[i] {
                    return false;
                }
                if c > entries[i] {
                    break;
                }
            }
        }
    }
    match spec.cover {
        Cover::Any => {}
        Cover::Galois => {
            if g.close_ids(entries).len() as u64 != g.order() {
                return false;
            }
        }
        Cover::DegreeD => {
            if !g.is_transitive_ids(entries) {
                return false;
            }
        }
    }
    true
}

/// The braid-orbit partition of `tuples` as a union-find over all single
/// moves, reported as sorted `(minimal member, orbit size)` pairs.
///
/// In unmarked equivalence the states are canonical forms and each move is
/// braid-then-recanonicalize; forward generators suffice because the sweep
/// covers every state.
pub fn union_find_partition(
    g: &Arc<PermGroup>,
    tuples: &[Vec<ElemId>],
    equiv: Equivalence,
) -> Vec<(Vec<ElemId>, u64)> {
    union_find_partition_owned(g, tuples.to_vec(), equiv)
}

pub fn union_find_partition_owned(
    g: &Arc<PermGroup>,
    tuples: Vec<Vec<ElemId>>,
    equiv: Equivalence,
) -> Vec<(Vec<ElemId>, u64)> {
    let mut sorted = tuples;
    sorted.sort_unstable();
    sorted.dedup();
    let index_of = |t: &[ElemId]| -> usize {
        sorted
            .binary_search_by(|probe| probe.as_slice().cmp(t))
            .expect("braid move left the Nielsen set")
    };
    let mut parent: Vec<u32> = (0..sorted.len() as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut scratch = Vec::new();
    for (i, t) in sorted.iter().enumerate() {
        let r = t.len();
        for pos in 1..r {
            braid::apply_forward_ids(g, t, pos, &mut scratch);
            if matches!(equiv, Equivalence::Unmarked) {
                let mut canon = Vec::new();
                crate::nielsen::canonicalize_ids_into(g, &scratch, &mut canon);
                scratch = canon;
            }
            let j = index_of(&scratch) as u32;
            let (ri, rj) = (find(&mut parent, i as u32), find(&mut parent, j));
            if ri != rj {
                parent[ri as usize] = rj;
            }
        }
    }
    let mut stats: std::collections::BTreeMap<u32, (Vec<ElemId>, u64)> = Default::default();
    for i in 0..sorted.len() as u32 {
        let root = find(&mut parent, i);
        let entry = stats
            .entry(root)
            .or_insert_with(|| (sorted[i as usize].clone(), 0));
        if sorted[i as usize] < entry.0 {
            entry.0 = sorted[i as usize].clone();
        }
        entry.1 += 1;
    }
    let mut out: Vec<(Vec<ElemId>, u64)> = stats.into_values().collect();
    out.sort_unstable();
    out
}

/// Union-find orbit partition over an exhaustively enumerated canonical set,
/// streaming the raw sweep so only canonical forms are kept. Used to check
/// component counts where the full marked set would not fit in memory.
pub fn orbit_partition_exhaustive(
    g: &Arc<PermGroup>,
    r: usize,
    spec: &EnumerationSpec,
) -> Vec<(Vec<ElemId>, u64)> {
    let tuples = exhaustive_canonical_tuples(g, r, spec);
    union_find_partition_owned(g, tuples, spec.equiv)
}

/// Equivalence-canonical tuples of `spec`, via a raw odometer over the free
/// entries with the projective completion; no search-tree pruning.
pub fn exhaustive_canonical_tuples(
    g: &Arc<PermGroup>,
    r: usize,
    spec: &EnumerationSpec,
) -> Vec<Vec<ElemId>> {
    let allowed: Vec<ElemId> = allowed_ids(g, spec);
    let free = match spec.base {
        Base::Projective => {
            if r == 0 {
                return if tuple_satisfies(g, &[], spec) { vec![vec![]] } else { vec![] };
            }
            r - 1
        }
        Base::Affine => r,
    };
    let mut out = Vec::new();
    if allowed.is_empty() && free > 0 {
        return out;
    }
    let mut idx = vec![0usize; free];
    let mut entries = vec![0 as ElemId; r];
    loop {
        for (k, &i) in idx.iter().enumerate() {
            entries[k] = allowed[i];
        }
        let complete = match spec.base {
            Base::Affine => true,
            Base::Projective => {
                let prod = entries[..free]
                    .iter()
                    .fold(g.identity_id(), |acc, &e| g.mult(acc, e));
                entries[r - 1] = g.inv(prod);
                entries[r - 1] != g.identity_id()
            }
        };
        if complete && tuple_satisfies(g, &entries, spec) {
            out.push(entries.clone());
        }
        let mut pos = free;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < allowed.len() {
                break;
            }
            idx[pos] = 0;
        }
        if free == 0 {
            return out;
        }
    }
}

fn allowed_ids(g: &Arc<PermGroup>, spec: &EnumerationSpec) -> Vec<ElemId> {
    let table = g.class_table();
    (1..g.order() as ElemId)
        .filter(|&e| match &spec.classes {
            ClassConstraint::All => true,
            ClassConstraint::Set(ids) => ids.contains(&table.class_of(e)),
            ClassConstraint::Profile(p) => p.count(table.class_of(e)) > 0,
        })
        .collect()
}
