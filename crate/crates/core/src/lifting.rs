//! Reduced lifting invariants in a validated central extension, the
//! component-separation probe, and global rationality of class multisets.
//!
//! The invariant of a tuple is the product of class-consistent lifts of its
//! entries in a finite central extension of the ambient group. Admissibility
//! of the chosen class lifts (every lift of every centralizer element of a
//! class representative commutes with the chosen lift) makes the per-element
//! lift well-defined, and the invariant braid-invariant and multiplicative.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ExtensionDefect};
use crate::group::{ClassId, ElemId, PermGroup};
use crate::nielsen::{Budget, EnumerationSpec, ICIProfile, NielsenTuple};
use crate::orbit::{decompose_components, Component};
use crate::perm::Perm;

/// On-disk description of a central extension.
///
/// `projection` pairs a generating set of the cover with images in the base
/// group; the map extends multiplicatively. `classes` scopes the extension to
/// the listed base classes (by any member's cycle string). `lifts` optionally
/// overrides the default lexicographically-minimal preimage per class
/// representative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub cover: String,
    pub projection: Vec<(String, String)>,
    pub classes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<Vec<(String, String)>>,
}

/// Built-in description of the order-24 cover of A4 with central kernel of
/// order 2, realized on the 8 nonzero vectors of a 2-dimensional space over
/// the field with 3 elements, scoped to the two classes of 3-cycles.
pub const BUILTIN_A4_EXTENSION: &str = include_str!("../data/a4_binary_tetrahedral.json");

pub fn builtin_extension(name: &str) -> Option<ExtensionFile> {
    match name {
        "a4" | "a4-binary-tetrahedral" => {
            Some(serde_json::from_str(BUILTIN_A4_EXTENSION).expect("builtin data parses"))
        }
        _ => None,
    }
}

/// A validated central extension of a base group, scoped to a class set.
pub struct CentralExtension {
    base: Arc<PermGroup>,
    cover: Arc<PermGroup>,
    /// cover element id -> base element id
    proj: Vec<ElemId>,
    /// sorted ids of the central kernel in the cover
    kernel: Vec<ElemId>,
    scope: Vec<ClassId>,
    /// base class id -> chosen lift (cover id) of the class representative
    class_lifts: BTreeMap<ClassId, ElemId>,
    /// base element id -> class-consistent lift, for elements in the scope
    elem_lift: Vec<Option<ElemId>>,
}

/// A lifting-invariant value: an element of the cover plus the tuple degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftValue {
    pub element: Perm,
    pub degree: usize,
}

impl LiftValue {
    pub fn cycle_string(&self) -> String {
        self.element.cycle_string()
    }
}

impl std::fmt::Debug for CentralExtension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CentralExtension({} -> {}, kernel order {})",
            self.cover.name(),
            self.base.name(),
            self.kernel.len()
        )
    }
}

impl CentralExtension {
    /// The degenerate extension: the group covering itself by the identity.
    pub fn identity(base: &Arc<PermGroup>, scope_classes: &[ClassId]) -> Result<Self, Error> {
        let gens = base.generators().to_vec();
        let pairs: Vec<(String, String)> = gens
            .iter()
            .map(|g| (g.cycle_string(), g.cycle_string()))
            .collect();
        let file = ExtensionFile {
            cover: base.name().to_string(),
            projection: pairs,
            classes: scope_classes
                .iter()
                .map(|&c| base.perm(base.class_table().class(c).rep()).cycle_string())
                .collect(),
            lifts: None,
        };
        load_central_extension(base, &file)
    }

    pub fn base(&self) -> &Arc<PermGroup> {
        &self.base
    }

    pub fn cover(&self) -> &Arc<PermGroup> {
        &self.cover
    }

    pub fn scope(&self) -> &[ClassId] {
        &self.scope
    }

    pub fn kernel_order(&self) -> u64 {
        self.kernel.len() as u64
    }

    pub fn project(&self, cover_elem: ElemId) -> ElemId {
        self.proj[cover_elem as usize]
    }

    pub fn class_lift(&self, c: ClassId) -> Option<ElemId> {
        self.class_lifts.get(&c).copied()
    }

    /// The class-consistent lift of a scoped base element.
    pub fn lift(&self, base_elem: ElemId) -> Result<ElemId, Error> {
        self.elem_lift[base_elem as usize].ok_or_else(|| Error::EntryOutsideScope {
            entry: self.base.perm(base_elem).cycle_string(),
        })
    }

    pub fn is_central_in_cover(&self, cover_elem: ElemId) -> bool {
        (0..self.cover.order() as ElemId)
            .all(|x| self.cover.mult(cover_elem, x) == self.cover.mult(x, cover_elem))
    }
}

/// Validates and loads a central extension, or reports the violated
/// invariant with a witness.
pub fn load_central_extension(
    base: &Arc<PermGroup>,
    file: &ExtensionFile,
) -> Result<CentralExtension, Error> {
    let cover = crate::dsl::parse_group_spec(&file.cover)?;
    let mut gen_ids: Vec<ElemId> = Vec::new();
    let mut img_ids: Vec<ElemId> = Vec::new();
    for (gen_text, img_text) in &file.projection {
        let gen = Perm::parse_cycles(gen_text, cover.degree())?;
        let img = Perm::parse_cycles(img_text, base.degree())?;
        let gid = cover.id_of(&gen).ok_or_else(|| Error::ForeignElement {
            element: gen.cycle_string(),
            group: cover.name().to_string(),
        })?;
        let iid = base.id_of(&img).ok_or_else(|| Error::ForeignElement {
            element: img.cycle_string(),
            group: base.name().to_string(),
        })?;
        gen_ids.push(gid);
        img_ids.push(iid);
    }
    if cover.close_ids(&gen_ids).len() as u64 != cover.order() {
        return Err(Error::ExtensionInvalid(ExtensionDefect::NotHomomorphism {
            witness: "the projection generators do not generate the cover".into(),
        }));
    }

    // Extend multiplicatively over the cover; detect inconsistency.
    let n_cover = cover.order() as usize;
    let mut proj: Vec<Option<ElemId>> = vec![None; n_cover];
    proj[0] = Some(base.identity_id());
    let mut frontier: Vec<ElemId> = vec![0];
    while let Some(e) = frontier.pop() {
        let pe = proj[e as usize].expect("assigned before queueing");
        for (k, &g) in gen_ids.iter().enumerate() {
            let prod = cover.mult(e, g);
            let img = base.mult(pe, img_ids[k]);
            match proj[prod as usize] {
                None => {
                    proj[prod as usize] = Some(img);
                    frontier.push(prod);
                }
                Some(existing) if existing != img => {
                    return Err(Error::ExtensionInvalid(ExtensionDefect::NotHomomorphism {
                        witness: format!(
                            "element {} receives two images, {} and {}",
                            cover.perm(prod),
                            base.perm(existing),
                            base.perm(img)
                        ),
                    }));
                }
                Some(_) => {}
            }
        }
    }
    let proj: Vec<ElemId> = proj
        .into_iter()
        .map(|p| p.expect("generators generate the cover"))
        .collect();

    // Full homomorphism check on the cached element sets.
    for a in 0..n_cover as ElemId {
        for b in 0..n_cover as ElemId {
            let lhs = proj[cover.mult(a, b) as usize];
            let rhs = base.mult(proj[a as usize], proj[b as usize]);
            if lhs != rhs {
                return Err(Error::ExtensionInvalid(ExtensionDefect::NotHomomorphism {
                    witness: format!(
                        "projection({} * {}) != projection({}) * projection({})",
                        cover.perm(a),
                        cover.perm(b),
                        cover.perm(a),
                        cover.perm(b)
                    ),
                }));
            }
        }
    }

    // Surjectivity.
    let mut image: Vec<bool> = vec![false; base.order() as usize];
    for &p in &proj {
        image[p as usize] = true;
    }
    let image_order = image.iter().filter(|&&b| b).count() as u64;
    if image_order != base.order() {
        return Err(Error::ExtensionInvalid(ExtensionDefect::NotSurjective {
            image_order,
            base_order: base.order(),
        }));
    }

    // Central kernel.
    let kernel: Vec<ElemId> = (0..n_cover as ElemId)
        .filter(|&e| proj[e as usize] == base.identity_id())
        .collect();
    for &k in &kernel {
        for x in 0..n_cover as ElemId {
            if cover.mult(k, x) != cover.mult(x, k) {
                return Err(Error::ExtensionInvalid(ExtensionDefect::KernelNotCentral {
                    witness: format!(
                        "kernel element {} does not commute with {}",
                        cover.perm(k),
                        cover.perm(x)
                    ),
                }));
            }
        }
    }

    // Scope classes and chosen lifts.
    let table = base.class_table();
    let mut scope: Vec<ClassId> = Vec::new();
    for text in &file.classes {
        let p = Perm::parse_cycles(text, base.degree())?;
        let id = base.id_of(&p).ok_or_else(|| Error::ForeignElement {
            element: p.cycle_string(),
            group: base.name().to_string(),
        })?;
        let c = table.class_of(id);
        if !scope.contains(&c) {
            scope.push(c);
        }
    }
    scope.sort_unstable();
    let mut preimages: Vec<Vec<ElemId>> = vec![Vec::new(); base.order() as usize];
    for (e, &p) in proj.iter().enumerate() {
        preimages[p as usize].push(e as ElemId);
    }
    let mut class_lifts: BTreeMap<ClassId, ElemId> = BTreeMap::new();
    for &c in &scope {
        // Default: lexicographically minimal preimage of the representative.
        class_lifts.insert(c, preimages[table.class(c).rep() as usize][0]);
    }
    if let Some(choices) = &file.lifts {
        for (rep_text, lift_text) in choices {
            let rep = Perm::parse_cycles(rep_text, base.degree())?;
            let rep_id = base.id_of(&rep).ok_or_else(|| Error::ForeignElement {
                element: rep.cycle_string(),
                group: base.name().to_string(),
            })?;
            let c = table.class_of(rep_id);
            if !scope.contains(&c) {
                return Err(Error::Parse(format!(
                    "lift choice for {} names a class outside the scope",
                    rep.cycle_string()
                )));
            }
            let lift = Perm::parse_cycles(lift_text, cover.degree())?;
            let lift_id = cover.id_of(&lift).ok_or_else(|| Error::ForeignElement {
                element: lift.cycle_string(),
                group: cover.name().to_string(),
            })?;
            if proj[lift_id as usize] != table.class(c).rep() {
                return Err(Error::Parse(format!(
                    "chosen lift {} does not project to the representative of its class",
                    lift.cycle_string()
                )));
            }
            class_lifts.insert(c, lift_id);
        }
    }

    // c-admissibility: every lift of every centralizer element of the class
    // representative must commute with the chosen lift.
    for &c in &scope {
        let rho = table.class(c).rep();
        let rho_lift = class_lifts[&c];
        for x in 0..base.order() as ElemId {
            if base.conj(rho, x) != rho {
                continue;
            }
            for &xl in &preimages[x as usize] {
                let conj = cover.mult(cover.mult(xl, rho_lift), cover.inv(xl));
                if conj != rho_lift {
                    return Err(Error::ExtensionInvalid(ExtensionDefect::NotCAdmissible {
                        class_rep: base.perm(rho).cycle_string(),
                        witness: format!(
                            "lift {} of centralizer element {} moves the chosen lift {}",
                            cover.perm(xl),
                            base.perm(x),
                            cover.perm(rho_lift)
                        ),
                    }));
                }
            }
        }
    }

    // Class-consistent lifts of every scoped element: g = rho^x maps to
    // xl * rho_lift * xl^-1 for any conjugator x and any lift xl; validation
    // above makes this independent of both choices, which we assert.
    let mut elem_lift: Vec<Option<ElemId>> = vec![None; base.order() as usize];
    for &c in &scope {
        let rho = table.class(c).rep();
        let rho_lift = class_lifts[&c];
        for &g in table.class(c).members() {
            let mut value: Option<ElemId> = None;
            let mut checked = 0;
            for x in 0..base.order() as ElemId {
                if base.conj(rho, x) != g {
                    continue;
                }
                let xl = preimages[x as usize][0];
                let lifted = cover.mult(cover.mult(xl, rho_lift), cover.inv(xl));
                match value {
                    None => value = Some(lifted),
                    Some(v) => assert_eq!(
                        v, lifted,
                        "class-consistent lift must be conjugator-independent"
                    ),
                }
                checked += 1;
                if checked >= 2 {
                    break;
                }
            }
            elem_lift[g as usize] = Some(value.expect("class member has a conjugator"));
        }
    }

    Ok(CentralExtension {
        base: base.clone(),
        cover,
        proj,
        kernel,
        scope,
        class_lifts,
        elem_lift,
    })
}

/// Product of the class-consistent lifts of the entries, left to right.
pub fn lifting_invariant(t: &NielsenTuple, ext: &CentralExtension) -> Result<LiftValue, Error> {
    if !t.group().same_group(&ext.base) {
        return Err(Error::ExtensionMismatch(format!(
            "tuple lives in {}, extension covers {}",
            t.group().name(),
            ext.base.name()
        )));
    }
    let mut acc = ext.cover.identity_id();
    for &e in t.entries() {
        acc = ext.cover.mult(acc, ext.lift(e)?);
    }
    // Projective tuples land in the central kernel.
    let base_prod = t.product();
    if base_prod == t.group().identity_id() && !t.is_empty() {
        debug_assert_eq!(ext.project(acc), ext.base.identity_id());
        debug_assert!(ext.kernel.binary_search(&acc).is_ok());
    }
    Ok(LiftValue {
        element: ext.cover.perm(acc).clone(),
        degree: t.len(),
    })
}

/// One row of the separation probe: a `(group, ICI, lift)` triple and the
/// components sharing it.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CpfvTriple {
    pub group_class: u32,
    pub group_order: u64,
    pub ici: BTreeMap<String, u64>,
    pub lift: String,
    pub component_reps: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CpfvRow {
    pub r: usize,
    pub components: u64,
    pub triples: Vec<CpfvTriple>,
    /// Triples shared by more than one component, over all components.
    pub collisions: u64,
    /// Collisions among components whose group is the whole base group. The
    /// separation statement only concerns these; components with a proper
    /// generated subgroup can share a triple (conjugate subgroups have the
    /// same class id and the reduced invariant lives over the base group).
    pub connected_collisions: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CpfvReport {
    pub rows: Vec<CpfvRow>,
    /// Least multiplicity threshold within the probed range at which every
    /// triple of a connected component identifies at most one component;
    /// 0 when there are no connected collisions at all.
    pub least_separating_multiplicity: Option<u64>,
}

/// Groups the components of each degree by (generated group, ICI, lifting
/// invariant) and reports collision counts.
pub fn cpfv_probe(
    g: &Arc<PermGroup>,
    ext: &CentralExtension,
    spec: &EnumerationSpec,
    r_range: std::ops::RangeInclusive<usize>,
    budget: Budget,
) -> Result<CpfvReport, Error> {
    let mut rows = Vec::new();
    for r in r_range {
        let comps = decompose_components(g, r, spec, budget)?;
        let mut by_triple: BTreeMap<(u32, String, String), Vec<&Component>> = BTreeMap::new();
        for c in &comps {
            let lift = lifting_invariant(c.rep(), ext)?;
            let ici_key = serde_json::to_string(&c.ici().to_named(g))?;
            by_triple
                .entry((c.group_class(), ici_key, lift.cycle_string()))
                .or_default()
                .push(c);
        }
        let mut triples = Vec::new();
        let mut collisions = 0u64;
        let mut connected_collisions = 0u64;
        for ((group_class, _ici_key, lift), comps_in) in &by_triple {
            if comps_in.len() > 1 {
                collisions += 1;
                if comps_in[0].group_order() == g.order() {
                    connected_collisions += 1;
                }
            }
            triples.push(CpfvTriple {
                group_class: *group_class,
                group_order: comps_in[0].group_order(),
                ici: comps_in[0].ici().to_named(g),
                lift: lift.clone(),
                component_reps: comps_in.iter().map(|c| c.rep().cycle_strings()).collect(),
            });
        }
        rows.push(CpfvRow {
            r,
            components: rows_len(&by_triple),
            triples,
            collisions,
            connected_collisions,
        });
    }
    // Least m such that, restricted to connected components whose every
    // scoped class multiplicity is >= m, triples are collision-free across
    // the whole probed range.
    let order = g.order();
    let mut least = None;
    'outer: for m in 0..=max_multiplicity(&rows) {
        for row in &rows {
            let mut seen: BTreeMap<(u32, String, String), u64> = BTreeMap::new();
            for t in &row.triples {
                if t.group_order != order {
                    continue;
                }
                let min_mult = t.ici.values().copied().min().unwrap_or(0);
                if min_mult < m {
                    continue;
                }
                let key = (
                    t.group_class,
                    serde_json::to_string(&t.ici).expect("serializable"),
                    t.lift.clone(),
                );
                *seen.entry(key).or_insert(0) += t.component_reps.len() as u64;
            }
            if seen.values().any(|&n| n > 1) {
                continue 'outer;
            }
        }
        least = Some(m);
        break;
    }
    Ok(CpfvReport {
        rows,
        least_separating_multiplicity: least,
    })
}

fn rows_len(by_triple: &BTreeMap<(u32, String, String), Vec<&Component>>) -> u64 {
    by_triple.values().map(|v| v.len() as u64).sum()
}

fn max_multiplicity(rows: &[CpfvRow]) -> u64 {
    rows.iter()
        .flat_map(|r| r.triples.iter())
        .flat_map(|t| t.ici.values().copied())
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RationalityReport {
    pub rational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_power: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moved_class: Option<String>,
}

/// Whether the class multiset is fixed by raising every class to each power
/// prime to the group order (powers reduced modulo the exponent).
pub fn is_globally_rational(g: &Arc<PermGroup>, profile: &ICIProfile) -> RationalityReport {
    let table = g.class_table();
    let exp = g.exponent();
    for m in 1..=exp {
        if gcd(m, g.order()) != 1 {
            continue;
        }
        let mut moved = ICIProfile::new();
        for (c, k) in profile.iter() {
            let d = table.class_power(g, c, m as i64);
            for _ in 0..k {
                moved.add(d);
            }
        }
        if &moved != profile {
            // Find a class that moved for the witness.
            let moved_class = profile
                .iter()
                .find(|&(c, _)| table.class_power(g, c, m as i64) != c)
                .map(|(c, _)| g.perm(table.class(c).rep()).cycle_string());
            return RationalityReport {
                rational: false,
                witness_power: Some(m),
                moved_class,
            };
        }
    }
    RationalityReport {
        rational: true,
        witness_power: None,
        moved_class: None,
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
