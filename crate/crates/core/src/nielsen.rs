//! Nielsen tuples and their enumeration.
//!
//! A Nielsen tuple is an ordered tuple of nontrivial group elements; over the
//! projective line the entries multiply to the identity. Enumeration emits
//! tuples in lexicographic order of entry-id sequences, with the last entry
//! forced in projective mode (a pruning device, not a semantic change), and —
//! in unmarked equivalence — only conjugation-canonical representatives.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Phase};
use crate::group::{ClassId, ElemId, PermGroup};
use crate::perm::Perm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Projective,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    Marked,
    Unmarked,
}

/// Which covers a tuple must describe: anything, connected Galois covers of
/// the ambient group, or transitive degree-`d` covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cover {
    Any,
    Galois,
    DegreeD,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassConstraint {
    All,
    /// Entries must come from these classes.
    Set(Vec<ClassId>),
    /// Entries must realize exactly this class multiset.
    Profile(ICIProfile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSpec {
    pub base: Base,
    pub equiv: Equivalence,
    pub cover: Cover,
    pub classes: ClassConstraint,
}

impl EnumerationSpec {
    pub fn new(base: Base, equiv: Equivalence, cover: Cover, classes: ClassConstraint) -> Self {
        EnumerationSpec { base, equiv, cover, classes }
    }

    pub fn validate(&self, g: &PermGroup) -> Result<(), Error> {
        let check = |ids: &[ClassId]| -> Result<(), Error> {
            let count = g.class_table().class_count() as ClassId;
            for &c in ids {
                if c >= count {
                    return Err(Error::Parse(format!("class id {c} out of range for {}", g.name())));
                }
            }
            Ok(())
        };
        match &self.classes {
            ClassConstraint::All => Ok(()),
            ClassConstraint::Set(ids) => check(ids),
            ClassConstraint::Profile(p) => check(&p.class_ids()),
        }
    }
}

/// The unordered multiset of conjugacy classes of a tuple's entries
/// (the multidiscriminant), relative to a stated class table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct ICIProfile {
    multiplicities: BTreeMap<ClassId, u64>,
}

impl ICIProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (ClassId, u64)>) -> Result<Self, Error> {
        let mut multiplicities = BTreeMap::new();
        for (c, k) in counts {
            if k == 0 {
                return Err(Error::Parse("ICI multiplicities must be positive".into()));
            }
            *multiplicities.entry(c).or_insert(0) += k;
        }
        Ok(ICIProfile { multiplicities })
    }

    pub fn add(&mut self, c: ClassId) {
        *self.multiplicities.entry(c).or_insert(0) += 1;
    }

    pub fn count(&self, c: ClassId) -> u64 {
        self.multiplicities.get(&c).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.multiplicities.values().sum()
    }

    pub fn class_ids(&self) -> Vec<ClassId> {
        self.multiplicities.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClassId, u64)> + '_ {
        self.multiplicities.iter().map(|(&c, &k)| (c, k))
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    /// Disjoint union of multisets.
    pub fn union(&self, other: &ICIProfile) -> ICIProfile {
        let mut out = self.clone();
        for (c, k) in other.iter() {
            *out.multiplicities.entry(c).or_insert(0) += k;
        }
        out
    }

    /// Keys the profile by class-representative cycle strings.
    pub fn to_named(&self, g: &PermGroup) -> BTreeMap<String, u64> {
        let t = g.class_table();
        self.iter()
            .map(|(c, k)| (g.perm(t.class(c).rep()).cycle_string(), k))
            .collect()
    }
}

/// An ordered tuple of nontrivial elements of a fixed ambient group.
#[derive(Clone)]
pub struct NielsenTuple {
    group: Arc<PermGroup>,
    entries: Vec<ElemId>,
}

impl NielsenTuple {
    pub fn new(group: Arc<PermGroup>, entries: Vec<ElemId>) -> Result<Self, Error> {
        for &e in &entries {
            if e == group.identity_id() {
                return Err(Error::Degenerate("tuple entries must be nontrivial".into()));
            }
            if e as u64 >= group.order() {
                return Err(Error::ForeignElement {
                    element: format!("#{e}"),
                    group: group.name().to_string(),
                });
            }
        }
        Ok(NielsenTuple { group, entries })
    }

    pub fn from_perms(group: Arc<PermGroup>, perms: &[Perm]) -> Result<Self, Error> {
        let mut entries = Vec::with_capacity(perms.len());
        for p in perms {
            let id = group.id_of(p).ok_or_else(|| Error::ForeignElement {
                element: p.cycle_string(),
                group: group.name().to_string(),
            })?;
            entries.push(id);
        }
        Self::new(group, entries)
    }

    pub fn from_cycles(group: &Arc<PermGroup>, cycles: &[&str]) -> Result<Self, Error> {
        let perms: Vec<Perm> = cycles
            .iter()
            .map(|c| Perm::parse_cycles(c, group.degree()))
            .collect::<Result<_, _>>()?;
        Self::from_perms(group.clone(), &perms)
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn entries(&self) -> &[ElemId] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn product(&self) -> ElemId {
        self.entries
            .iter()
            .fold(self.group.identity_id(), |acc, &e| self.group.mult(acc, e))
    }

    pub fn perms(&self) -> Vec<Perm> {
        self.entries.iter().map(|&e| self.group.perm(e).clone()).collect()
    }

    pub fn cycle_strings(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|&e| self.group.perm(e).cycle_string())
            .collect()
    }

    /// Entrywise conjugation by a group element: each entry `a` becomes `a^g`.
    pub fn conjugate(&self, g: ElemId) -> NielsenTuple {
        NielsenTuple {
            group: self.group.clone(),
            entries: self.entries.iter().map(|&e| self.group.conj(e, g)).collect(),
        }
    }

    /// Concatenation; both tuples must share their ambient group.
    pub fn concat(&self, other: &NielsenTuple) -> Result<NielsenTuple, Error> {
        if !self.group.same_group(&other.group) {
            return Err(Error::MixedMode(format!(
                "cannot concatenate tuples over {} and {}",
                self.group.name(),
                other.group.name()
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(NielsenTuple { group: self.group.clone(), entries })
    }
}

impl std::fmt::Debug for NielsenTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.cycle_strings().join(", "))
    }
}

impl PartialEq for NielsenTuple {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.entries == other.entries
    }
}

impl Eq for NielsenTuple {}

/// Marked equivalence: the tuple itself. Unmarked: the lexicographically
/// minimal entrywise conjugate. Idempotent and constant on conjugation orbits.
pub fn canonicalize(t: &NielsenTuple, equiv: Equivalence) -> NielsenTuple {
    match equiv {
        Equivalence::Marked => t.clone(),
        Equivalence::Unmarked => {
            let g = &t.group;
            let mut best = t.entries.clone();
            canonicalize_ids_into(g, &t.entries, &mut best);
            NielsenTuple { group: g.clone(), entries: best }
        }
    }
}

/// Writes the minimum of `{entries^γ : γ ∈ G}` into `best` (id sequences
/// compare lexicographically, which is lex order on image sequences).
pub(crate) fn canonicalize_ids_into(g: &PermGroup, entries: &[ElemId], best: &mut Vec<ElemId>) {
    best.clear();
    best.extend_from_slice(entries);
    let n = g.order() as ElemId;
    for gamma in 1..n {
        for i in 0..entries.len() {
            let c = g.conj(entries[i], gamma);
            if c < best[i] {
                // The compared prefix matched `best`, so `best[..i]` already
                // holds the γ-conjugate prefix; rewrite the rest in place.
                best[i] = c;
                for j in i + 1..entries.len() {
                    best[j] = g.conj(entries[j], gamma);
                }
                break;
            } else if c > best[i] {
                break;
            }
        }
    }
}

/// The multiset of ambient classes of the entries; with `refine`, the classes
/// of the subgroup's own table (entries must lie in the subgroup).
pub fn ici(t: &NielsenTuple, refine: Option<&PermGroup>) -> Result<ICIProfile, Error> {
    let mut profile = ICIProfile::new();
    match refine {
        None => {
            let table = t.group.class_table();
            for &e in &t.entries {
                profile.add(table.class_of(e));
            }
        }
        Some(h) => {
            let table = h.class_table();
            for &e in &t.entries {
                let p = t.group.perm(e);
                let hid = h.id_of(p).ok_or_else(|| Error::EntryOutsideSubgroup {
                    entry: p.cycle_string(),
                })?;
                profile.add(table.class_of(hid));
            }
        }
    }
    Ok(profile)
}

/// Enumeration work/time budget shared by the long-running operations.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Max number of candidate tuples examined by one enumeration.
    pub max_tuples: u64,
    /// Max number of states held by one orbit BFS.
    pub max_orbit: u64,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_tuples: 10_000_000,
            max_orbit: 10_000_000,
            deadline: None,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_tuples: u64::MAX,
            max_orbit: u64::MAX,
            deadline: None,
        }
    }

    pub fn check_deadline(&self, phase: Phase) -> Result<(), Error> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(Error::Budget {
                    phase,
                    detail: "wall-clock budget exhausted".into(),
                });
            }
        }
        Ok(())
    }
}

/// Streaming enumerator; see [`enumerate_nielsen`].
pub struct NielsenEnum {
    group: Arc<PermGroup>,
    spec: EnumerationSpec,
    r: usize,
    free: usize,
    allowed: Vec<ElemId>,
    /// Remaining multiplicity per class when the constraint is a profile.
    remaining: Option<Vec<i64>>,
    /// Per-depth candidate position into `allowed`.
    cursor: Vec<usize>,
    chosen: Vec<ElemId>,
    /// Prefix products: products[k] = product of chosen[..k].
    products: Vec<ElemId>,
    /// Surviving conjugators per depth (unmarked only); buffers are reused
    /// across the sweep.
    survivors: Vec<Vec<ElemId>>,
    surv_scratch: Vec<ElemId>,
    /// Subgroup-closure bitmask stack for groups of order <= 64.
    masks: Option<Vec<u64>>,
    depth: usize,
    started: bool,
    done: bool,
    budget: Budget,
    nodes: u64,
    examined: u64,
    emitted: u64,
    /// Tuple filter applied before emission (used by hf counting).
    post_filter: Option<Arc<dyn Fn(&PermGroup, &[ElemId]) -> bool + Send + Sync>>,
}

/// Emits every tuple satisfying `spec` exactly once, in lexicographic order
/// of entry sequences. In unmarked equivalence only canonical representatives
/// are emitted. A budget overrun surfaces as a final `Err` item.
pub fn enumerate_nielsen(
    group: &Arc<PermGroup>,
    r: usize,
    spec: &EnumerationSpec,
    budget: Budget,
) -> Result<NielsenEnum, Error> {
    spec.validate(group)?;
    let table = group.class_table();
    let allowed: Vec<ElemId> = match &spec.classes {
        ClassConstraint::All => (1..group.order() as ElemId).collect(),
        ClassConstraint::Set(ids) => {
            let mut v: Vec<ElemId> = Vec::new();
            for e in 1..group.order() as ElemId {
                if ids.contains(&table.class_of(e)) {
                    v.push(e);
                }
            }
            v
        }
        ClassConstraint::Profile(p) => {
            if p.total() != r as u64 {
                return Err(Error::Parse(format!(
                    "profile prescribes {} entries but r = {}",
                    p.total(),
                    r
                )));
            }
            let ids = p.class_ids();
            let mut v: Vec<ElemId> = Vec::new();
            for e in 1..group.order() as ElemId {
                if ids.contains(&table.class_of(e)) {
                    v.push(e);
                }
            }
            v
        }
    };
    let remaining = match &spec.classes {
        ClassConstraint::Profile(p) => {
            let mut v = vec![0i64; table.class_count()];
            for (c, k) in p.iter() {
                v[c as usize] = k as i64;
            }
            Some(v)
        }
        _ => None,
    };
    let free = match spec.base {
        Base::Projective => r.saturating_sub(1),
        Base::Affine => r,
    };
    let masks = if group.order() <= 64 {
        Some(vec![0u64; free + 2])
    } else {
        None
    };
    Ok(NielsenEnum {
        group: group.clone(),
        spec: spec.clone(),
        r,
        free,
        allowed,
        remaining,
        cursor: vec![0; free + 1],
        chosen: Vec::with_capacity(r),
        products: vec![0; free + 2],
        survivors: vec![Vec::new(); free + 2],
        surv_scratch: Vec::new(),
        masks,
        depth: 0,
        started: false,
        done: false,
        budget,
        nodes: 0,
        examined: 0,
        emitted: 0,
        post_filter: None,
    })
}

impl NielsenEnum {
    pub(crate) fn with_filter(
        mut self,
        f: Arc<dyn Fn(&PermGroup, &[ElemId]) -> bool + Send + Sync>,
    ) -> Self {
        self.post_filter = Some(f);
        self
    }

    pub fn examined(&self) -> u64 {
        self.examined
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Closure bitmask of `⟨elems so far⟩` for small groups; used to settle
    /// the Galois cover constraint incrementally.
    fn extend_mask(&self, mask: u64, e: ElemId) -> u64 {
        let g = &self.group;
        let full = if g.order() == 64 { u64::MAX } else { (1u64 << g.order()) - 1 };
        let mut m = if mask == 0 { 1u64 } else { mask };
        if m == full || m & (1 << e) != 0 {
            return m;
        }
        let mut frontier = vec![e];
        m |= 1 << e;
        while let Some(a) = frontier.pop() {
            let mut rest = m;
            while rest != 0 {
                let b = rest.trailing_zeros() as ElemId;
                rest &= rest - 1;
                for prod in [g.mult(a, b), g.mult(b, a)] {
                    if m & (1 << prod) == 0 {
                        m |= 1 << prod;
                        frontier.push(prod);
                    }
                }
            }
        }
        m
    }

    fn cover_ok(&self, entries: &[ElemId], final_mask: u64) -> bool {
        match self.spec.cover {
            Cover::Any => true,
            Cover::Galois => {
                if self.masks.is_some() {
                    let full = if self.group.order() == 64 {
                        u64::MAX
                    } else {
                        (1u64 << self.group.order()) - 1
                    };
                    final_mask == full || (entries.is_empty() && self.group.order() == 1)
                } else {
                    self.group.close_ids(entries).len() as u64 == self.group.order()
                }
            }
            Cover::DegreeD => self.group.is_transitive_ids(entries),
        }
    }

    /// Whether appending `e` keeps the prefix canonical under the given
    /// surviving conjugators (no list is built; used for the forced entry).
    fn stays_canonical(&self, prev: &[ElemId], e: ElemId) -> bool {
        prev.iter().all(|&gamma| self.group.conj(e, gamma) >= e)
    }

    fn emit_current(&self, forced: Option<ElemId>) -> NielsenTuple {
        let mut entries = self.chosen.clone();
        if let Some(f) = forced {
            entries.push(f);
        }
        NielsenTuple {
            group: self.group.clone(),
            entries,
        }
    }
}

impl Iterator for NielsenEnum {
    type Item = Result<NielsenTuple, Error>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if matches!(self.spec.equiv, Equivalence::Unmarked) {
                self.survivors[0] = (1..self.group.order() as ElemId).collect();
            }
            self.products[0] = self.group.identity_id();
            // r = 0: the empty tuple alone, subject to the constraints.
            if self.r == 0 {
                self.done = true;
                let ok_base = true; // empty product is the identity
                let ok = ok_base && self.cover_ok(&[], 1) && self.spec_profile_exhausted();
                if ok {
                    return Some(Ok(self.emit_current(None)));
                }
                return None;
            }
            if matches!(self.spec.base, Base::Projective) && self.r == 1 {
                // A single nontrivial entry cannot multiply to the identity.
                self.done = true;
                return None;
            }
        }
        loop {
            self.nodes += 1;
            if self.nodes % 8192 == 0 {
                if let Err(e) = self.budget.check_deadline(Phase::Enumeration) {
                    self.done = true;
                    return Some(Err(e));
                }
            }
            // Backtrack when the cursor at this depth is exhausted.
            if self.cursor[self.depth] >= self.allowed.len() {
                if self.depth == 0 {
                    self.done = true;
                    return None;
                }
                self.cursor[self.depth] = 0;
                self.depth -= 1;
                let e = self.chosen.pop().expect("depth tracks chosen");
                if let Some(rem) = &mut self.remaining {
                    rem[self.group.class_table().class_of(e) as usize] += 1;
                }
                self.cursor[self.depth] += 1;
                continue;
            }
            let e = self.allowed[self.cursor[self.depth]];
            // Class-profile bookkeeping.
            if let Some(rem) = &mut self.remaining {
                let c = self.group.class_table().class_of(e) as usize;
                if rem[c] == 0 {
                    self.cursor[self.depth] += 1;
                    continue;
                }
                rem[c] -= 1;
                // Undone on backtrack or rejection below.
            }
            // Unmarked canonical-prefix pruning: refill the scratch buffer
            // with the conjugators still matching the extended prefix.
            if matches!(self.spec.equiv, Equivalence::Unmarked) {
                let prev = &self.survivors[self.depth];
                let scratch = &mut self.surv_scratch;
                scratch.clear();
                let mut pruned = false;
                for &gamma in prev {
                    let c = self.group.conj(e, gamma);
                    if c < e {
                        pruned = true;
                        break;
                    }
                    if c == e {
                        scratch.push(gamma);
                    }
                }
                if pruned {
                    if let Some(rem) = &mut self.remaining {
                        rem[self.group.class_table().class_of(e) as usize] += 1;
                    }
                    self.cursor[self.depth] += 1;
                    continue;
                }
            }
            // Descend.
            self.chosen.push(e);
            self.products[self.depth + 1] = self.group.mult(self.products[self.depth], e);
            if self.masks.is_some() {
                let prev = self.masks.as_ref().unwrap()[self.depth];
                let m = self.extend_mask(prev, e);
                self.masks.as_mut().unwrap()[self.depth + 1] = m;
            }
            self.depth += 1;
            if matches!(self.spec.equiv, Equivalence::Unmarked) {
                let d = self.depth;
                std::mem::swap(&mut self.survivors[d], &mut self.surv_scratch);
            }

            if self.depth < self.free {
                continue;
            }

            // Leaf: one candidate tuple examined against the budget.
            self.examined += 1;
            if self.examined > self.budget.max_tuples {
                self.done = true;
                return Some(Err(Error::Budget {
                    phase: Phase::Enumeration,
                    detail: format!(
                        "tuple budget {} hit after emitting {} tuples (partial output)",
                        self.budget.max_tuples, self.emitted
                    ),
                }));
            }
            let candidate = self.leaf_candidate();
            // Pop back to continue the sweep afterwards.
            self.depth -= 1;
            let e = self.chosen.pop().expect("leaf had an entry");
            if let Some(rem) = &mut self.remaining {
                rem[self.group.class_table().class_of(e) as usize] += 1;
            }
            self.cursor[self.depth] += 1;

            if let Some(t) = candidate {
                self.emitted += 1;
                return Some(Ok(t));
            }
        }
    }
}

impl NielsenEnum {
    fn spec_profile_exhausted(&self) -> bool {
        match &self.remaining {
            None => true,
            Some(rem) => rem.iter().all(|&k| k == 0),
        }
    }

    /// Validates the completed prefix as a full tuple; `None` if rejected.
    fn leaf_candidate(&mut self) -> Option<NielsenTuple> {
        let g = self.group.clone();
        let table = g.class_table();
        match self.spec.base {
            Base::Affine => {
                if !self.spec_profile_exhausted() {
                    return None;
                }
                let mask = self.masks.as_ref().map(|m| m[self.depth]).unwrap_or(0);
                if !self.cover_ok(&self.chosen, mask) {
                    return None;
                }
                if let Some(f) = &self.post_filter {
                    if !f(&g, &self.chosen) {
                        return None;
                    }
                }
                Some(self.emit_current(None))
            }
            Base::Projective => {
                let forced = g.inv(self.products[self.depth]);
                if forced == g.identity_id() {
                    return None;
                }
                // Forced entry obeys the same class constraint.
                match &self.spec.classes {
                    ClassConstraint::All => {}
                    ClassConstraint::Set(ids) => {
                        if !ids.contains(&table.class_of(forced)) {
                            return None;
                        }
                    }
                    ClassConstraint::Profile(_) => {
                        let c = table.class_of(forced) as usize;
                        let rem = self.remaining.as_ref().expect("profile has remaining");
                        if rem[c] != 1 || rem.iter().enumerate().any(|(i, &k)| i != c && k != 0) {
                            return None;
                        }
                    }
                }
                // Canonical-prefix check extends to the forced entry.
                if matches!(self.spec.equiv, Equivalence::Unmarked)
                    && !self.stays_canonical(&self.survivors[self.depth], forced)
                {
                    return None;
                }
                let mask = match &self.masks {
                    Some(m) => self.extend_mask(m[self.depth], forced),
                    None => 0,
                };
                let mut entries = self.chosen.clone();
                entries.push(forced);
                if !self.cover_ok(&entries, mask) {
                    return None;
                }
                if let Some(f) = &self.post_filter {
                    if !f(&g, &entries) {
                        return None;
                    }
                }
                Some(NielsenTuple { group: g, entries })
            }
        }
    }
}
