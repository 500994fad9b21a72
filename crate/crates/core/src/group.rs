//! Finite groups of permutations with cached element sets.
//!
//! A [`PermGroup`] is immutable after construction: the element set is the
//! closure of the generators, sorted lexicographically by image sequence, and
//! elements are addressed by their index (`ElemId`) in that order. The
//! identity is always element 0. Class and subgroup tables are built lazily
//! and cached; everything can be shared across threads without locking.

use std::sync::{Arc, OnceLock};

use rustc_hash::FxHashMap;

use crate::error::Error;
use crate::perm::Perm;

pub type ElemId = u32;
pub type ClassId = u32;
pub type SubgroupClassId = u32;

/// Default cap on the group order accepted by constructors.
pub const DEFAULT_ORDER_CAP: u64 = 20_000;
/// Default cap on the group order for full subgroup enumeration.
pub const DEFAULT_SUBGROUP_CAP: u64 = 2_000;

/// Dense lookup tables are only built for groups up to this order.
const TABLE_MAX_ORDER: usize = 2_048;

pub struct PermGroup {
    name: String,
    degree: u16,
    generators: Vec<Perm>,
    elems: Vec<Perm>,
    index: FxHashMap<Perm, ElemId>,
    inv: Vec<ElemId>,
    /// `mult[a * n + b] = a * b`; only for small groups.
    mult: Option<Vec<ElemId>>,
    /// `conj[b * n + a] = a^b = b a b^-1`; only for small groups.
    conj: OnceLock<Option<Vec<ElemId>>>,
    classes: OnceLock<ClassTable>,
    subgroups: OnceLock<Result<SubgroupTable, Error>>,
    exponent: OnceLock<u64>,
}

impl PermGroup {
    /// Closes `generators` under the product and builds the element table.
    pub fn from_generators(
        name: impl Into<String>,
        degree: u16,
        generators: Vec<Perm>,
        order_cap: u64,
    ) -> Result<Arc<Self>, Error> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Degenerate(format!(
                    "generator {} has degree {}, expected {}",
                    g,
                    g.degree(),
                    degree
                )));
            }
        }
        let elems = close_under_product(&generators, degree, order_cap)?;
        Ok(Self::from_closed_elements(name, degree, generators, elems))
    }

    /// Builds a group from an already-closed, sorted element list.
    pub(crate) fn from_closed_elements(
        name: impl Into<String>,
        degree: u16,
        generators: Vec<Perm>,
        elems: Vec<Perm>,
    ) -> Arc<Self> {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        let n = elems.len();
        let mut index = FxHashMap::default();
        for (i, e) in elems.iter().enumerate() {
            index.insert(e.clone(), i as ElemId);
        }
        let inv: Vec<ElemId> = elems.iter().map(|e| index[&e.inverse()]).collect();
        let mult = if n <= TABLE_MAX_ORDER {
            let mut table = vec![0 as ElemId; n * n];
            for (a, pa) in elems.iter().enumerate() {
                for (b, pb) in elems.iter().enumerate() {
                    table[a * n + b] = index[&pa.compose(pb)];
                }
            }
            Some(table)
        } else {
            None
        };
        Arc::new(PermGroup {
            name: name.into(),
            degree,
            generators,
            elems,
            index,
            inv,
            mult,
            conj: OnceLock::new(),
            classes: OnceLock::new(),
            subgroups: OnceLock::new(),
            exponent: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u16 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elems
    }

    pub fn perm(&self, id: ElemId) -> &Perm {
        &self.elems[id as usize]
    }

    pub fn id_of(&self, p: &Perm) -> Option<ElemId> {
        self.index.get(p).copied()
    }

    pub fn identity_id(&self) -> ElemId {
        0
    }

    #[inline]
    pub fn mult(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.mult {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => self.index[&self.elems[a as usize].compose(&self.elems[b as usize])],
        }
    }

    #[inline]
    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv[a as usize]
    }

    /// `a^b = b a b^-1`.
    #[inline]
    pub fn conj(&self, a: ElemId, b: ElemId) -> ElemId {
        if let Some(Some(t)) = self.conj.get().map(Option::as_ref) {
            return t[b as usize * self.elems.len() + a as usize];
        }
        self.conj_uncached(a, b)
    }

    fn conj_uncached(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mult(self.mult(b, a), self.inv(b))
    }

    /// Forces construction of the dense conjugation table (small groups only).
    pub fn conj_table(&self) -> Option<&[ElemId]> {
        self.conj
            .get_or_init(|| {
                let n = self.elems.len();
                if n > TABLE_MAX_ORDER {
                    return None;
                }
                let mut t = vec![0 as ElemId; n * n];
                for b in 0..n as ElemId {
                    let ib = self.inv(b);
                    for a in 0..n as ElemId {
                        t[b as usize * n + a as usize] = self.mult(self.mult(b, a), ib);
                    }
                }
                Some(t)
            })
            .as_deref()
    }

    pub fn pow(&self, a: ElemId, exp: i64) -> ElemId {
        let ord = self.perm(a).order() as i64;
        let mut e = exp.rem_euclid(ord);
        let mut acc = self.identity_id();
        let mut sq = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mult(acc, sq);
            }
            sq = self.mult(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        *self.exponent.get_or_init(|| {
            self.elems
                .iter()
                .map(|p| p.order())
                .fold(1u64, |acc, o| acc / gcd(acc, o) * o)
        })
    }

    pub fn class_table(&self) -> &ClassTable {
        self.classes.get_or_init(|| ClassTable::build(self))
    }

    /// One representative per conjugacy class of subgroups.
    pub fn subgroup_table(&self) -> Result<&SubgroupTable, Error> {
        self.subgroup_table_capped(DEFAULT_SUBGROUP_CAP)
    }

    pub fn subgroup_table_capped(&self, cap: u64) -> Result<&SubgroupTable, Error> {
        let result = self
            .subgroups
            .get_or_init(|| SubgroupTable::build(self, cap));
        match result {
            Ok(t) => Ok(t),
            Err(e) => Err(clone_cap_error(e)),
        }
    }

    /// Closure of element ids under the product. Result is sorted.
    pub fn close_ids(&self, seed: &[ElemId]) -> Vec<ElemId> {
        let n = self.elems.len();
        let mut in_set = vec![false; n];
        in_set[0] = true;
        let mut members: Vec<ElemId> = vec![0];
        let mut frontier: Vec<ElemId> = Vec::new();
        for &s in seed {
            if !in_set[s as usize] {
                in_set[s as usize] = true;
                members.push(s);
                frontier.push(s);
            }
        }
        let gens: Vec<ElemId> = frontier.clone();
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                for prod in [self.mult(a, g), self.mult(g, a)] {
                    if !in_set[prod as usize] {
                        in_set[prod as usize] = true;
                        members.push(prod);
                        frontier.push(prod);
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// The subgroup generated by `gens`, as its own group sharing this degree.
    pub fn subgroup_generated(self: &Arc<Self>, gens: &[Perm]) -> Result<Arc<PermGroup>, Error> {
        let mut ids = Vec::with_capacity(gens.len());
        for g in gens {
            match self.id_of(g) {
                Some(id) => ids.push(id),
                None => {
                    return Err(Error::ForeignElement {
                        element: g.cycle_string(),
                        group: self.name.clone(),
                    })
                }
            }
        }
        Ok(self.subgroup_from_ids(&ids))
    }

    pub fn subgroup_from_ids(self: &Arc<Self>, ids: &[ElemId]) -> Arc<PermGroup> {
        let members = self.close_ids(ids);
        let elems: Vec<Perm> = members.iter().map(|&i| self.perm(i).clone()).collect();
        let gens: Vec<Perm> = ids.iter().map(|&i| self.perm(i).clone()).collect();
        let name = format!("{}:sub{}", self.name, elems.len());
        PermGroup::from_closed_elements(name, self.degree, gens, elems)
    }

    /// Whether the natural action on `{1..degree}` is transitive.
    pub fn is_transitive_ids(&self, entries: &[ElemId]) -> bool {
        let degree = self.degree as usize;
        if degree == 0 {
            return true;
        }
        let mut seen = vec![false; degree];
        let mut stack = vec![0u16];
        seen[0] = true;
        let mut count = 1usize;
        while let Some(pt) = stack.pop() {
            for &e in entries {
                let img = self.perm(e).apply(pt);
                if !seen[img as usize] {
                    seen[img as usize] = true;
                    count += 1;
                    stack.push(img);
                }
            }
        }
        count == degree
    }

    /// Structural equality: same degree and same element set.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        std::ptr::eq(self, other)
            || (self.degree == other.degree && self.elems == other.elems)
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PermGroup({}, degree {}, order {})",
            self.name,
            self.degree,
            self.elems.len()
        )
    }
}

fn clone_cap_error(e: &Error) -> Error {
    match e {
        Error::CapExceeded { what, size, cap } => Error::CapExceeded {
            what,
            size: *size,
            cap: *cap,
        },
        other => Error::Degenerate(other.to_string()),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn close_under_product(gens: &[Perm], degree: u16, cap: u64) -> Result<Vec<Perm>, Error> {
    let identity = Perm::identity(degree);
    let mut set: FxHashMap<Perm, ()> = FxHashMap::default();
    set.insert(identity.clone(), ());
    let mut frontier = vec![identity];
    while let Some(e) = frontier.pop() {
        for g in gens {
            let prod = e.compose(g);
            if !set.contains_key(&prod) {
                if set.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        size: set.len() as u64 + 1,
                        cap,
                    });
                }
                set.insert(prod.clone(), ());
                frontier.push(prod);
            }
        }
    }
    let mut elems: Vec<Perm> = set.into_keys().collect();
    elems.sort_unstable();
    Ok(elems)
}

/// Conjugacy classes, ordered by lexicographically minimal representative.
pub struct ClassTable {
    class_of: Vec<ClassId>,
    classes: Vec<ConjClass>,
}

pub struct ConjClass {
    rep: ElemId,
    members: Vec<ElemId>,
}

impl ConjClass {
    pub fn rep(&self) -> ElemId {
        self.rep
    }

    pub fn members(&self) -> &[ElemId] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl ClassTable {
    fn build(g: &PermGroup) -> ClassTable {
        let n = g.order() as usize;
        g.conj_table();
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for e in 0..n as ElemId {
            if class_of[e as usize] != u32::MAX {
                continue;
            }
            // e is the least element of a fresh class.
            let cid = classes.len() as ClassId;
            let mut members = Vec::new();
            for b in 0..n as ElemId {
                let c = g.conj(e, b);
                if class_of[c as usize] == u32::MAX {
                    class_of[c as usize] = cid;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(ConjClass { rep: e, members });
        }
        ClassTable { class_of, classes }
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, e: ElemId) -> ClassId {
        self.class_of[e as usize]
    }

    pub fn class(&self, c: ClassId) -> &ConjClass {
        &self.classes[c as usize]
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    /// Class of `rep(c)^m`. Well-definedness is spot-checked on a second
    /// member whenever the class has one.
    pub fn class_power(&self, g: &PermGroup, c: ClassId, m: i64) -> ClassId {
        let cls = self.class(c);
        let target = self.class_of(g.pow(cls.rep, m));
        if cls.members.len() > 1 {
            let other = cls.members[1];
            debug_assert_ne!(other, cls.rep);
            assert_eq!(
                self.class_of(g.pow(other, m)),
                target,
                "class power must not depend on the chosen member"
            );
        }
        target
    }
}

/// Subgroups up to conjugacy, plus a lookup from any subgroup's element set
/// to its conjugacy-class id.
pub struct SubgroupTable {
    classes: Vec<SubgroupClass>,
    by_key: FxHashMap<Vec<ElemId>, SubgroupClassId>,
    total_subgroups: usize,
}

pub struct SubgroupClass {
    /// Sorted element ids of the chosen representative.
    rep: Vec<ElemId>,
    conjugates: usize,
}

impl SubgroupClass {
    pub fn rep_elems(&self) -> &[ElemId] {
        &self.rep
    }

    pub fn order(&self) -> u64 {
        self.rep.len() as u64
    }

    pub fn conjugate_count(&self) -> usize {
        self.conjugates
    }
}

impl SubgroupTable {
    fn build(g: &PermGroup, cap: u64) -> Result<SubgroupTable, Error> {
        if g.order() > cap {
            return Err(Error::CapExceeded {
                what: "subgroup enumeration order",
                size: g.order(),
                cap,
            });
        }
        let n = g.order() as usize;
        // Every subgroup arises by repeatedly adjoining one element, starting
        // from the cyclic ones, so a worklist closure finds them all.
        let mut known: FxHashMap<Vec<ElemId>, ()> = FxHashMap::default();
        let trivial = vec![0 as ElemId];
        known.insert(trivial.clone(), ());
        let mut work: Vec<Vec<ElemId>> = vec![trivial];
        for e in 1..n as ElemId {
            let cyc = g.close_ids(&[e]);
            if !known.contains_key(&cyc) {
                known.insert(cyc.clone(), ());
                work.push(cyc);
            }
        }
        while let Some(sub) = work.pop() {
            if sub.len() == n {
                continue;
            }
            let mut seed = sub.clone();
            for e in 1..n as ElemId {
                if sub.binary_search(&e).is_ok() {
                    continue;
                }
                seed.push(e);
                let bigger = g.close_ids(&seed);
                seed.pop();
                if !known.contains_key(&bigger) {
                    known.insert(bigger.clone(), ());
                    work.push(bigger);
                }
            }
        }
        let total_subgroups = known.len();

        // Partition into conjugacy classes of subgroups.
        let mut keys: Vec<Vec<ElemId>> = known.into_keys().collect();
        keys.sort_unstable();
        let mut assigned: FxHashMap<Vec<ElemId>, SubgroupClassId> = FxHashMap::default();
        let mut classes: Vec<SubgroupClass> = Vec::new();
        for key in &keys {
            if assigned.contains_key(key) {
                continue;
            }
            let mut orbit: Vec<Vec<ElemId>> = Vec::new();
            for b in 0..n as ElemId {
                let mut img: Vec<ElemId> = key.iter().map(|&a| g.conj(a, b)).collect();
                img.sort_unstable();
                if !orbit.contains(&img) {
                    orbit.push(img);
                }
            }
            orbit.sort_unstable();
            let rep = orbit[0].clone();
            let cid = classes.len() as SubgroupClassId;
            for member in orbit.iter() {
                assigned.insert(member.clone(), cid);
            }
            classes.push(SubgroupClass {
                rep,
                conjugates: orbit.len(),
            });
        }
        // Stable ids: sort classes by (order, representative key).
        let mut perm_order: Vec<usize> = (0..classes.len()).collect();
        perm_order.sort_by(|&a, &b| {
            (classes[a].rep.len(), &classes[a].rep).cmp(&(classes[b].rep.len(), &classes[b].rep))
        });
        let mut remap = vec![0 as SubgroupClassId; classes.len()];
        for (new_id, &old_id) in perm_order.iter().enumerate() {
            remap[old_id] = new_id as SubgroupClassId;
        }
        let mut sorted_classes: Vec<SubgroupClass> = Vec::with_capacity(classes.len());
        for &old_id in &perm_order {
            sorted_classes.push(SubgroupClass {
                rep: classes[old_id].rep.clone(),
                conjugates: classes[old_id].conjugates,
            });
        }
        let by_key = assigned
            .into_iter()
            .map(|(k, old)| (k, remap[old as usize]))
            .collect();
        Ok(SubgroupTable {
            classes: sorted_classes,
            by_key,
            total_subgroups,
        })
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn total_subgroups(&self) -> usize {
        self.total_subgroups
    }

    /// Conjugacy-class id of the subgroup with the given sorted element ids.
    pub fn class_of_subgroup(&self, sorted_elems: &[ElemId]) -> Option<SubgroupClassId> {
        self.by_key.get(sorted_elems).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_group_spec;

    #[test]
    fn s3_classes() {
        let g = parse_group_spec("S3").unwrap();
        assert_eq!(g.order(), 6);
        let t = g.class_table();
        assert_eq!(t.class_count(), 3);
        let mut sizes: Vec<usize> = t.classes().iter().map(|c| c.size()).collect();
        // Identity class first, then transpositions (rep (2 3)), then 3-cycles.
        assert_eq!(sizes, vec![1, 3, 2]);
        sizes.sort_unstable();
        assert_eq!(t.class(1).size(), 3);
        assert_eq!(g.perm(t.class(1).rep()).cycle_string(), "(2 3)");
        assert_eq!(g.perm(t.class(2).rep()).cycle_string(), "(1 2 3)");
    }

    #[test]
    fn c4_classes_are_singletons() {
        let g = parse_group_spec("C4").unwrap();
        let t = g.class_table();
        assert_eq!(t.class_count(), 4);
        assert!(t.classes().iter().all(|c| c.size() == 1));
    }

    #[test]
    fn a4_classes() {
        let g = parse_group_spec("A4").unwrap();
        assert_eq!(g.order(), 12);
        let t = g.class_table();
        let mut sizes: Vec<usize> = t.classes().iter().map(|c| c.size()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 4, 4]);
    }

    #[test]
    fn class_power_examples() {
        let s3 = parse_group_spec("S3").unwrap();
        let t = s3.class_table();
        let three_cycles = t.class_of(s3.id_of(&Perm::parse_cycles("(1 2 3)", 3).unwrap()).unwrap());
        assert_eq!(t.class_power(&s3, three_cycles, 5), three_cycles);
        assert_eq!(t.class_power(&s3, three_cycles, 1), three_cycles);

        let c3 = parse_group_spec("C3").unwrap();
        let tc = c3.class_table();
        let sigma = tc.class_of(1);
        assert_ne!(tc.class_power(&c3, sigma, 2), sigma);
    }

    #[test]
    fn class_power_well_defined_up_to_exponent() {
        for spec in ["S3", "A4", "D5"] {
            let g = parse_group_spec(spec).unwrap();
            let t = g.class_table();
            for c in 0..t.class_count() as ClassId {
                for m in 2..=g.exponent() as i64 {
                    t.class_power(&g, c, m); // asserts internally on a second member
                }
            }
        }
    }

    #[test]
    fn subgroup_generated_examples() {
        let s3 = parse_group_spec("S3").unwrap();
        let t12 = Perm::parse_cycles("(1 2)", 3).unwrap();
        let c123 = Perm::parse_cycles("(1 2 3)", 3).unwrap();
        assert_eq!(s3.subgroup_generated(&[t12.clone()]).unwrap().order(), 2);
        assert_eq!(s3.subgroup_generated(&[c123, t12]).unwrap().order(), 6);
        assert_eq!(s3.subgroup_generated(&[]).unwrap().order(), 1);

        let foreign = Perm::parse_cycles("(1 2)", 4).unwrap();
        assert!(s3.subgroup_generated(&[foreign]).is_err());
    }

    #[test]
    fn subgroup_generated_idempotent_on_closed_sets() {
        let s3 = parse_group_spec("S3").unwrap();
        let sub = s3
            .subgroup_generated(&[Perm::parse_cycles("(1 2 3)", 3).unwrap()])
            .unwrap();
        let again = s3.subgroup_generated(&sub.elements().to_vec()).unwrap();
        assert_eq!(sub.elements(), again.elements());
    }

    #[test]
    fn closure_property_small_groups() {
        for spec in ["S3", "C4", "A4", "D5"] {
            let g = parse_group_spec(spec).unwrap();
            let n = g.order() as ElemId;
            for a in 0..n {
                for b in 0..n {
                    let p = g.perm(a).compose(g.perm(b));
                    assert!(g.id_of(&p).is_some(), "{spec} not closed");
                }
            }
        }
    }

    #[test]
    fn class_soundness() {
        for spec in ["S3", "A4", "D5"] {
            let g = parse_group_spec(spec).unwrap();
            let t = g.class_table();
            for e in 0..g.order() as ElemId {
                for b in 0..g.order() as ElemId {
                    assert_eq!(t.class_of(g.conj(e, b)), t.class_of(e));
                }
            }
        }
    }

    #[test]
    fn subgroup_tables() {
        let s3 = parse_group_spec("S3").unwrap();
        let t = s3.subgroup_table().unwrap();
        assert_eq!(t.class_count(), 4);
        assert_eq!(t.total_subgroups(), 6);
        let orders: Vec<u64> = t.classes().iter().map(|c| c.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);

        let c4 = parse_group_spec("C4").unwrap();
        assert_eq!(c4.subgroup_table().unwrap().class_count(), 3);

        let a4 = parse_group_spec("A4").unwrap();
        let ta = a4.subgroup_table().unwrap();
        assert_eq!(ta.class_count(), 5);
        let orders: Vec<u64> = ta.classes().iter().map(|c| c.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 12]);
    }

    // Brute-force oracle: every subgroup found by closing generator subsets is
    // conjugate to exactly one representative in the table.
    #[test]
    fn subgroup_table_matches_generator_subset_sweep() {
        for spec in ["S3", "D5", "A4"] {
            let g = parse_group_spec(spec).unwrap();
            let table = g.subgroup_table().unwrap();
            let n = g.order() as ElemId;
            let mut seen: Vec<Vec<ElemId>> = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    let sub = g.close_ids(&[a, b]);
                    if !seen.contains(&sub) {
                        seen.push(sub);
                    }
                }
            }
            for sub in &seen {
                let cid = table.class_of_subgroup(sub);
                assert!(cid.is_some(), "{spec}: subgroup missing from table");
                // Exactly one representative class by construction of by_key.
                let class = &table.classes()[cid.unwrap() as usize];
                assert_eq!(class.order() as usize, sub.len());
            }
        }
    }

    #[test]
    fn exponent_values() {
        assert_eq!(parse_group_spec("S3").unwrap().exponent(), 6);
        assert_eq!(parse_group_spec("A4").unwrap().exponent(), 6);
        assert_eq!(parse_group_spec("C4").unwrap().exponent(), 4);
        assert_eq!(parse_group_spec("D5").unwrap().exponent(), 10);
    }
}
