//! Braid orbits via canonical-form BFS with content-addressed deduplication.
//!
//! States are equivalence-canonical tuples. Each state is keyed by a 128-bit
//! value: the packed entry ids themselves whenever `r * ceil(log2(|G|))` fits
//! in 128 bits (collision-free, order-preserving), and a truncated SHA-256
//! digest otherwise, in which case full tuples are kept per digest so
//! collisions are resolved exactly. Frontier expansion merges candidate
//! states in a fixed order, so results do not depend on the thread count.

use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use sha2::{Digest, Sha256};

use crate::braid::{self, Direction};
use crate::error::{Error, Phase};
use crate::group::{ElemId, PermGroup, SubgroupClassId};
use crate::lifting::LiftValue;
use crate::nielsen::{
    canonicalize_ids_into, enumerate_nielsen, ici, Base, Budget, Equivalence, EnumerationSpec,
    ICIProfile, NielsenTuple,
};

/// A braid orbit, stored by canonical representative plus computed invariants.
#[derive(Clone)]
pub struct Component {
    group: Arc<PermGroup>,
    base: Base,
    equiv: Equivalence,
    rep: NielsenTuple,
    orbit_size: u64,
    group_class: SubgroupClassId,
    group_order: u64,
    ici: ICIProfile,
    pub lifting: Option<LiftValue>,
}

impl Component {
    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn equiv(&self) -> Equivalence {
        self.equiv
    }

    pub fn rep(&self) -> &NielsenTuple {
        &self.rep
    }

    pub fn r(&self) -> usize {
        self.rep.len()
    }

    pub fn orbit_size(&self) -> u64 {
        self.orbit_size
    }

    pub fn group_class(&self) -> SubgroupClassId {
        self.group_class
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn ici(&self) -> &ICIProfile {
        &self.ici
    }

    /// Whether two components are the same orbit (same ambient data and
    /// canonical representative).
    pub fn same_component(&self, other: &Component) -> bool {
        self.base == other.base
            && self.equiv == other.equiv
            && self.group.same_group(&other.group)
            && self.rep.entries() == other.rep.entries()
    }

    /// Content-addressed id: hash of the ambient data and representative.
    pub fn content_id(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.group.name().as_bytes());
        h.update([self.group.degree() as u8, (self.group.degree() >> 8) as u8]);
        h.update(match self.base {
            Base::Projective => b"p1",
            Base::Affine => b"a1",
        });
        h.update(match self.equiv {
            Equivalence::Marked => b"m",
            Equivalence::Unmarked => b"u",
        });
        for s in self.rep.cycle_strings() {
            h.update(s.as_bytes());
            h.update(b";");
        }
        let out = h.finalize();
        out[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl std::fmt::Debug for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Component[{:?}, size {}, group order {}]",
            self.rep, self.orbit_size, self.group_order
        )
    }
}

pub(crate) struct KeyCodec {
    bits: u32,
    r: usize,
    exact: bool,
}

impl KeyCodec {
    pub(crate) fn new(order: u64, r: usize) -> Self {
        let bits = 64 - (order.max(2) - 1).leading_zeros();
        let exact = r as u32 * bits <= 128;
        KeyCodec { bits, r, exact }
    }

    pub(crate) fn is_exact(&self) -> bool {
        self.exact
    }

    pub(crate) fn key(&self, entries: &[ElemId]) -> u128 {
        debug_assert_eq!(entries.len(), self.r);
        if self.exact {
            let mut k = 0u128;
            for &e in entries {
                k = (k << self.bits) | e as u128;
            }
            k
        } else {
            let mut h = Sha256::new();
            for &e in entries {
                h.update(e.to_le_bytes());
            }
            let out = h.finalize();
            u128::from_le_bytes(out[..16].try_into().expect("16 bytes"))
        }
    }
}

enum Visited {
    Exact(FxHashSet<u128>),
    Digest(FxHashMap<u128, Vec<Box<[ElemId]>>>),
}

impl Visited {
    fn len(&self) -> u64 {
        match self {
            Visited::Exact(s) => s.len() as u64,
            Visited::Digest(m) => m.values().map(|v| v.len() as u64).sum(),
        }
    }

    /// Inserts a canonical state; true when new.
    fn insert(&mut self, key: u128, entries: &[ElemId]) -> bool {
        match self {
            Visited::Exact(s) => s.insert(key),
            Visited::Digest(m) => {
                let bucket = m.entry(key).or_default();
                if bucket.iter().any(|t| t.as_ref() == entries) {
                    false
                } else {
                    bucket.push(entries.into());
                    true
                }
            }
        }
    }
}

/// BFS engine shared by `orbit_of` and `decompose_components`.
struct OrbitEngine {
    group: Arc<PermGroup>,
    spec: EnumerationSpec,
    codec: KeyCodec,
    visited: Visited,
    budget: Budget,
    r: usize,
}

/// Frontier states are kept as flat tuples with stride `r`.
struct Flat {
    data: Vec<ElemId>,
    r: usize,
}

impl Flat {
    fn new(r: usize) -> Self {
        Flat { data: Vec::new(), r }
    }

    fn len(&self) -> usize {
        if self.r == 0 {
            0
        } else {
            self.data.len() / self.r
        }
    }

    fn push(&mut self, entries: &[ElemId]) {
        self.data.extend_from_slice(entries);
    }

    fn get(&self, i: usize) -> &[ElemId] {
        &self.data[i * self.r..(i + 1) * self.r]
    }
}

struct OrbitStats {
    size: u64,
    min_entries: Vec<ElemId>,
}

impl OrbitEngine {
    fn new(group: Arc<PermGroup>, spec: EnumerationSpec, r: usize, budget: Budget) -> Self {
        let codec = KeyCodec::new(group.order(), r);
        let visited = if codec.is_exact() {
            Visited::Exact(FxHashSet::default())
        } else {
            Visited::Digest(FxHashMap::default())
        };
        OrbitEngine { group, spec, codec, visited, budget, r }
    }

    /// Expands one frontier in bounded slices; candidate states are produced
    /// in frontier order (parallel chunks are concatenated in chunk order),
    /// so the visited set and all derived outputs are independent of the
    /// thread count.
    fn expand(&mut self, frontier: &Flat, stats: &mut OrbitStats) -> Result<Flat, Error> {
        const SLICE: usize = 1 << 16;
        let r = self.r;
        let mut next = Flat::new(r);
        if r < 2 {
            return Ok(next);
        }
        let g = self.group.clone();
        let equiv = self.spec.equiv;
        let n_states = frontier.len();
        let seed_ici = seed_class_counts(&g, frontier.get(0));
        let mut buffer: Vec<ElemId> = Vec::new();
        let mut slice_start = 0usize;
        while slice_start < n_states {
            self.budget.check_deadline(Phase::OrbitBfs)?;
            let slice_end = (slice_start + SLICE).min(n_states);
            buffer.clear();
            let threads = rayon::current_num_threads();
            if threads > 1 && slice_end - slice_start >= 1024 {
                let chunk = (slice_end - slice_start).div_ceil(threads * 4).max(1);
                let blocks: Vec<Vec<ElemId>> = (slice_start..slice_end)
                    .collect::<Vec<_>>()
                    .par_chunks(chunk)
                    .map(|states| {
                        let mut out: Vec<ElemId> = Vec::with_capacity(states.len() * (r - 1) * 2 * r);
                        let mut moved = vec![0 as ElemId; r];
                        let mut canon: Vec<ElemId> = Vec::with_capacity(r);
                        for &s in states {
                            expand_state(&g, frontier.get(s), equiv, &mut moved, &mut canon, &mut out);
                        }
                        out
                    })
                    .collect();
                for block in blocks {
                    buffer.extend_from_slice(&block);
                }
            } else {
                let mut moved = vec![0 as ElemId; r];
                let mut canon: Vec<ElemId> = Vec::with_capacity(r);
                for s in slice_start..slice_end {
                    expand_state(&g, frontier.get(s), equiv, &mut moved, &mut canon, &mut buffer);
                }
            }
            // Sequential, order-fixed merge into the visited set.
            for cand in buffer.chunks_exact(r) {
                let key = self.codec.key(cand);
                if self.visited.insert(key, cand) {
                    debug_assert_eq!(seed_class_counts(&g, cand), seed_ici);
                    stats.size += 1;
                    if cand < stats.min_entries.as_slice() {
                        stats.min_entries.clear();
                        stats.min_entries.extend_from_slice(cand);
                    }
                    next.push(cand);
                    if self.visited.len() > self.budget.max_orbit {
                        return Err(Error::Budget {
                            phase: Phase::OrbitBfs,
                            detail: format!(
                                "orbit state cap {} exceeded",
                                self.budget.max_orbit
                            ),
                        });
                    }
                }
            }
            slice_start = slice_end;
        }
        Ok(next)
    }

    /// Closes the orbit of an already-canonical unvisited seed.
    fn run_orbit(&mut self, seed: &[ElemId]) -> Result<OrbitStats, Error> {
        let key = self.codec.key(seed);
        let fresh = self.visited.insert(key, seed);
        debug_assert!(fresh, "seed must be unvisited");
        let mut stats = OrbitStats { size: 1, min_entries: seed.to_vec() };
        let mut frontier = Flat::new(self.r);
        frontier.push(seed);
        let mut class_checks = 0u64;
        while frontier.len() > 0 {
            // Spot-check the orbit invariant: the generated subgroup itself
            // in marked equivalence, its conjugacy class in unmarked (the
            // canonical form conjugates the whole tuple).
            if cfg!(debug_assertions) && class_checks < 4 {
                class_checks += 1;
                let probe = frontier.get(frontier.len() - 1);
                match self.spec.equiv {
                    Equivalence::Marked => debug_assert_eq!(
                        self.group.close_ids(probe),
                        self.group.close_ids(seed),
                        "braid moves must preserve the generated subgroup"
                    ),
                    Equivalence::Unmarked => {
                        let table = self.group.subgroup_table()?;
                        debug_assert_eq!(
                            table.class_of_subgroup(&self.group.close_ids(probe)),
                            table.class_of_subgroup(&self.group.close_ids(seed)),
                            "orbit states must generate conjugate subgroups"
                        );
                    }
                }
            }
            frontier = self.expand(&frontier, &mut stats)?;
        }
        Ok(stats)
    }
}

// Forward moves suffice to close an orbit: each generator permutes the
// finite Nielsen set, so its inverse is one of its own powers.
#[inline]
fn expand_state(
    g: &PermGroup,
    t: &[ElemId],
    equiv: Equivalence,
    moved: &mut Vec<ElemId>,
    canon: &mut Vec<ElemId>,
    out: &mut Vec<ElemId>,
) {
    let r = t.len();
    for i in 1..r {
        moved.clear();
        moved.extend_from_slice(t);
        braid::apply_ids_in_place(g, moved, i, Direction::Forward);
        match equiv {
            Equivalence::Marked => out.extend_from_slice(moved),
            Equivalence::Unmarked => {
                canonicalize_ids_into(g, moved, canon);
                out.extend_from_slice(canon);
            }
        }
    }
}

fn seed_class_counts(g: &PermGroup, entries: &[ElemId]) -> Vec<u16> {
    let table = g.class_table();
    let mut counts = vec![0u16; table.class_count()];
    for &e in entries {
        counts[table.class_of(e) as usize] += 1;
    }
    counts
}

fn make_component(
    group: &Arc<PermGroup>,
    spec: &EnumerationSpec,
    stats: OrbitStats,
) -> Result<Component, Error> {
    let rep = NielsenTuple::new(group.clone(), stats.min_entries)?;
    let sub = group.close_ids(rep.entries());
    let group_order = sub.len() as u64;
    let group_class = group
        .subgroup_table()?
        .class_of_subgroup(&sub)
        .expect("closure is a subgroup");
    let ici = ici(&rep, None)?;
    Ok(Component {
        group: group.clone(),
        base: spec.base,
        equiv: spec.equiv,
        rep,
        orbit_size: stats.size,
        group_class,
        group_order,
        ici,
        lifting: None,
    })
}

/// The braid orbit of `t` under `Q_1^±1, ..., Q_{r-1}^±1`, deduplicated by
/// equivalence-canonical form.
pub fn orbit_of(t: &NielsenTuple, spec: &EnumerationSpec, budget: Budget) -> Result<Component, Error> {
    let group = t.group().clone();
    if !crate::oracle::tuple_satisfies(&group, t.entries(), &relaxed_for_membership(spec)) {
        return Err(Error::PreconditionViolation(format!(
            "tuple {t:?} does not satisfy the enumeration constraints"
        )));
    }
    let seed = crate::nielsen::canonicalize(t, spec.equiv);
    let mut engine = OrbitEngine::new(group.clone(), spec.clone(), t.len(), budget);
    let stats = engine.run_orbit(seed.entries())?;
    make_component(&group, spec, stats)
}

/// Spec with the equivalence dropped for raw membership testing: `orbit_of`
/// accepts any member of an orbit, canonical or not.
fn relaxed_for_membership(spec: &EnumerationSpec) -> EnumerationSpec {
    EnumerationSpec { equiv: Equivalence::Marked, ..spec.clone() }
}

/// All components of the Nielsen set: tuples are consumed in enumeration
/// order and each unvisited tuple seeds a BFS. Components come out sorted by
/// canonical representative, and the orbit sizes add up to the number of
/// canonical tuples.
pub fn decompose_components(
    group: &Arc<PermGroup>,
    r: usize,
    spec: &EnumerationSpec,
    budget: Budget,
) -> Result<Vec<Component>, Error> {
    decompose_filtered(group, r, spec, budget, None)
}

pub(crate) fn decompose_filtered(
    group: &Arc<PermGroup>,
    r: usize,
    spec: &EnumerationSpec,
    budget: Budget,
    filter: Option<Arc<dyn Fn(&PermGroup, &[ElemId]) -> bool + Send + Sync>>,
) -> Result<Vec<Component>, Error> {
    let mut engine = OrbitEngine::new(group.clone(), spec.clone(), r, budget);
    let mut components = Vec::new();
    let mut total: u64 = 0;
    let mut stream = enumerate_nielsen(group, r, spec, budget)?;
    if let Some(f) = filter {
        stream = stream.with_filter(f);
    }
    for item in stream {
        let t = item?;
        total += 1;
        if r == 0 {
            // The empty tuple is its own (unit) component.
            components.push(make_component(group, spec, OrbitStats { size: 1, min_entries: vec![] })?);
            continue;
        }
        let key = engine.codec.key(t.entries());
        let already = match &engine.visited {
            Visited::Exact(s) => s.contains(&key),
            Visited::Digest(m) => m
                .get(&key)
                .is_some_and(|b| b.iter().any(|x| x.as_ref() == t.entries())),
        };
        if already {
            continue;
        }
        let stats = engine.run_orbit(t.entries())?;
        // First-in-lex-order member of an orbit is its canonical rep.
        debug_assert_eq!(stats.min_entries, t.entries());
        components.push(make_component(group, spec, stats)?);
    }
    let covered: u64 = components.iter().map(|c| c.orbit_size).sum();
    assert_eq!(
        covered, total,
        "orbit sizes must partition the enumerated Nielsen set"
    );
    Ok(components)
}

/// The full orbit as a sorted list of states; small orbits only.
pub fn orbit_states(
    t: &NielsenTuple,
    spec: &EnumerationSpec,
    budget: Budget,
) -> Result<Vec<Vec<ElemId>>, Error> {
    let group = t.group().clone();
    let seed = crate::nielsen::canonicalize(t, spec.equiv);
    let r = t.len();
    let codec = KeyCodec::new(group.order(), r);
    let mut visited: FxHashMap<u128, Vec<Box<[ElemId]>>> = FxHashMap::default();
    let mut all: Vec<Vec<ElemId>> = vec![seed.entries().to_vec()];
    visited.entry(codec.key(seed.entries())).or_default().push(seed.entries().into());
    let mut frontier = vec![seed.entries().to_vec()];
    let mut moved = vec![0 as ElemId; r];
    let mut canon: Vec<ElemId> = Vec::with_capacity(r);
    while let Some(t) = frontier.pop() {
        if all.len() as u64 > budget.max_orbit {
            return Err(Error::Budget {
                phase: Phase::OrbitBfs,
                detail: format!("orbit state cap {} exceeded", budget.max_orbit),
            });
        }
        for i in 1..r {
            for dir in [Direction::Forward, Direction::Inverse] {
                moved.clear();
                moved.extend_from_slice(&t);
                braid::apply_ids_in_place(&group, &mut moved, i, dir);
                let state: &[ElemId] = match spec.equiv {
                    Equivalence::Marked => &moved,
                    Equivalence::Unmarked => {
                        canonicalize_ids_into(&group, &moved, &mut canon);
                        &canon
                    }
                };
                let bucket = visited.entry(codec.key(state)).or_default();
                if !bucket.iter().any(|x| x.as_ref() == state) {
                    bucket.push(state.into());
                    all.push(state.to_vec());
                    frontier.push(state.to_vec());
                }
            }
        }
    }
    all.sort_unstable();
    Ok(all)
}
