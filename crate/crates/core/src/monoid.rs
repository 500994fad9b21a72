//! The concatenation monoid on components, its commutation law, twisted
//! concatenations, splitting numbers and component-count growth.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::braid::{apply_braid, Direction};
use crate::error::Error;
use crate::group::{ClassId, ElemId, PermGroup};
use crate::nielsen::{
    canonicalize, Base, Budget, ClassConstraint, Cover, Equivalence, EnumerationSpec, ICIProfile,
    NielsenTuple,
};
use crate::orbit::{decompose_filtered, orbit_of, Component};
use crate::perm::Perm;

fn unconstrained(base: Base, equiv: Equivalence) -> EnumerationSpec {
    EnumerationSpec::new(base, equiv, Cover::Any, ClassConstraint::All)
}

fn check_compatible(x: &Component, y: &Component) -> Result<(), Error> {
    if !x.group().same_group(y.group()) {
        return Err(Error::MixedMode(format!(
            "components live over different groups ({} vs {})",
            x.group().name(),
            y.group().name()
        )));
    }
    if x.base() != y.base() || x.equiv() != y.equiv() {
        return Err(Error::MixedMode(
            "components mix base modes or equivalences".into(),
        ));
    }
    Ok(())
}

/// The component of the concatenated tuple. In unmarked equivalence both
/// components must parametrize connected covers (group = ambient group),
/// the regime where concatenation descends to unmarked components.
pub fn concat(x: &Component, y: &Component, budget: Budget) -> Result<Component, Error> {
    check_compatible(x, y)?;
    if x.equiv() == Equivalence::Unmarked {
        let full = x.group().order();
        if (x.group_order() != full && x.r() > 0) || (y.group_order() != full && y.r() > 0) {
            return Err(Error::PreconditionViolation(
                "unmarked concatenation needs connected components".into(),
            ));
        }
    }
    let spec = unconstrained(x.base(), x.equiv());
    let joined = x.rep().concat(y.rep())?;
    let out = orbit_of(&joined, &spec, budget)?;
    // Representative independence, sampled: replace each factor's rep by a
    // braid-perturbed orbit mate and land in the same component.
    if cfg!(debug_assertions) {
        for (px, py) in [(true, false), (false, true)] {
            let xr = perturb(x, px)?;
            let yr = perturb(y, py)?;
            let alt = orbit_of(&xr.concat(&yr)?, &spec, budget)?;
            assert!(
                alt.same_component(&out),
                "concatenation must not depend on chosen representatives"
            );
        }
    }
    Ok(out)
}

fn perturb(c: &Component, do_it: bool) -> Result<NielsenTuple, Error> {
    if !do_it || c.r() < 2 {
        return Ok(c.rep().clone());
    }
    let moved = apply_braid(c.rep(), 1, Direction::Forward)?;
    Ok(canonicalize(&moved, c.equiv()))
}

/// The component of the entrywise conjugate. Orbit size and ICI are
/// preserved; the generated subgroup is conjugated.
pub fn conjugate_component(y: &Component, gamma: &Perm, budget: Budget) -> Result<Component, Error> {
    let g = y.group();
    let gid = g.id_of(gamma).ok_or_else(|| Error::ForeignElement {
        element: gamma.cycle_string(),
        group: g.name().to_string(),
    })?;
    let spec = unconstrained(y.base(), y.equiv());
    let out = orbit_of(&y.rep().conjugate(gid), &spec, budget)?;
    debug_assert_eq!(out.orbit_size(), y.orbit_size());
    debug_assert_eq!(out.ici(), y.ici());
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommutationReport {
    pub left_rep: Vec<String>,
    pub right_rep: Vec<String>,
    pub holds: bool,
}

/// Checks `x · y = y^(Πx) · x`, the commutation law of the component monoid
/// (over the projective line Πx = 1 and this is plain commutativity).
pub fn commutation_check(x: &Component, y: &Component, budget: Budget) -> Result<CommutationReport, Error> {
    check_compatible(x, y)?;
    let left = concat(x, y, budget)?;
    let pi_x = x.group().perm(x.rep().product()).clone();
    let y_tw = conjugate_component(y, &pi_x, budget)?;
    let right = concat(&y_tw, x, budget)?;
    Ok(CommutationReport {
        left_rep: left.rep().cycle_strings(),
        right_rep: right.rep().cycle_strings(),
        holds: left.same_component(&right),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistReport {
    pub join_order: u64,
    /// Whether ⟨H,K⟩ = HK as sets.
    pub hk_equals_join: bool,
    pub base_rep: Vec<String>,
    pub twist_reps: Vec<Vec<String>>,
    pub singleton: bool,
}

/// The set of components `x^γ · y^δ` over γ, δ in ⟨H,K⟩ that preserve the
/// join `⟨H^γ, K^δ⟩ = ⟨H,K⟩`, where H and K are the generated subgroups of
/// the factors. When ⟨H,K⟩ = HK this set is the singleton {x·y}.
pub fn hm_twist_set(x: &Component, y: &Component, budget: Budget) -> Result<TwistReport, Error> {
    check_compatible(x, y)?;
    if x.equiv() != Equivalence::Marked {
        return Err(Error::PreconditionViolation(
            "twisted concatenation is defined for marked components".into(),
        ));
    }
    let g = x.group();
    let h: Vec<ElemId> = g.close_ids(x.rep().entries());
    let k: Vec<ElemId> = g.close_ids(y.rep().entries());
    let mut hk_seed: Vec<ElemId> = h.clone();
    hk_seed.extend_from_slice(&k);
    let join = g.close_ids(&hk_seed);
    // HK as a set of pairwise products.
    let mut products: Vec<ElemId> = h
        .iter()
        .flat_map(|&a| k.iter().map(move |&b| (a, b)))
        .map(|(a, b)| g.mult(a, b))
        .collect();
    products.sort_unstable();
    products.dedup();
    let hk_equals_join = products == join;

    let base = concat(x, y, budget)?;
    let mut reps: Vec<Vec<ElemId>> = Vec::new();
    for &gamma in &join {
        let h_conj: Vec<ElemId> = h.iter().map(|&a| g.conj(a, gamma)).collect();
        for &delta in &join {
            let k_conj: Vec<ElemId> = k.iter().map(|&b| g.conj(b, delta)).collect();
            let mut seed = h_conj.clone();
            seed.extend_from_slice(&k_conj);
            if g.close_ids(&seed) != join {
                continue;
            }
            let joined = x.rep().conjugate(gamma).concat(&y.rep().conjugate(delta))?;
            let comp = orbit_of(&joined, &unconstrained(x.base(), x.equiv()), budget)?;
            let rep = comp.rep().entries().to_vec();
            if !reps.contains(&rep) {
                reps.push(rep);
            }
        }
    }
    reps.sort_unstable();
    let singleton = reps.len() == 1 && reps[0] == base.rep().entries();
    let twist_reps = reps
        .iter()
        .map(|rep| {
            rep.iter()
                .map(|&e| g.perm(e).cycle_string())
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(TwistReport {
        join_order: join.len() as u64,
        hk_equals_join,
        base_rep: base.rep().cycle_strings(),
        twist_reps,
        singleton,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassSplit {
    pub ambient_class: String,
    pub subgroup_classes: Vec<String>,
}

/// The splitting number of a subgroup against a class set, with the
/// per-class decomposition table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplittingDatum {
    pub subgroup_order: u64,
    pub omega: u64,
    pub per_class: Vec<ClassSplit>,
}

/// Ω_c(H) = Σ over classes C ∈ c meeting H of (#H-classes in C∩H − 1).
/// Zero exactly when every class of c meeting H meets it in one H-class.
pub fn splitting_number(
    g: &Arc<PermGroup>,
    h: &Arc<PermGroup>,
    c: &[ClassId],
) -> Result<SplittingDatum, Error> {
    let ambient = g.class_table();
    let sub_table = h.class_table();
    let mut omega = 0u64;
    let mut per_class = Vec::new();
    for &cid in c {
        let mut parts = Vec::new();
        for hc in 0..sub_table.class_count() as ClassId {
            let rep = h.perm(sub_table.class(hc).rep());
            let amb_id = g.id_of(rep).ok_or_else(|| Error::ForeignElement {
                element: rep.cycle_string(),
                group: g.name().to_string(),
            })?;
            if ambient.class_of(amb_id) == cid {
                parts.push(rep.cycle_string());
            }
        }
        if !parts.is_empty() {
            omega += parts.len() as u64 - 1;
        }
        per_class.push(ClassSplit {
            ambient_class: g.perm(ambient.class(cid).rep()).cycle_string(),
            subgroup_classes: parts,
        });
    }
    Ok(SplittingDatum {
        subgroup_order: h.order(),
        omega,
        per_class,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonSplitWitness {
    pub subgroup_order: u64,
    pub subgroup_class: u32,
    pub subgroup_generators: Vec<String>,
    pub split: ClassSplit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonSplitReport {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<NonSplitWitness>,
}

/// Whether every subgroup meeting each class of `c` meets it in a single
/// conjugacy class of the subgroup; a witness decomposition otherwise.
pub fn is_nonsplitting(g: &Arc<PermGroup>, c: &[ClassId]) -> Result<NonSplitReport, Error> {
    let table = g.subgroup_table()?;
    for (sid, class) in table.classes().iter().enumerate() {
        let rep_elems: Vec<Perm> = class
            .rep_elems()
            .iter()
            .map(|&e| g.perm(e).clone())
            .collect();
        let h = g.subgroup_generated(&rep_elems)?;
        let datum = splitting_number(g, &h, c)?;
        for split in &datum.per_class {
            if split.subgroup_classes.len() > 1 {
                return Ok(NonSplitReport {
                    holds: false,
                    witness: Some(NonSplitWitness {
                        subgroup_order: h.order(),
                        subgroup_class: sid as u32,
                        subgroup_generators: h
                            .generators()
                            .iter()
                            .map(|p| p.cycle_string())
                            .collect(),
                        split: split.clone(),
                    }),
                });
            }
        }
    }
    Ok(NonSplitReport {
        holds: true,
        witness: None,
    })
}

/// Number of components of connected covers with group `h`, projective, with
/// entries in `c ∩ H`, whose class multiplicities satisfy the growth
/// constraint: for each ambient class C ∈ c, the total multiplicity of
/// H-classes inside C is `r·ξ_C` (collective reading). The strict reading
/// instead pins every single H-class inside C to multiplicity `r·ξ_C`.
pub fn hf_count(
    g: &Arc<PermGroup>,
    h: &Arc<PermGroup>,
    c: &[ClassId],
    xi: &BTreeMap<ClassId, u64>,
    r: u64,
    strict_per_class: bool,
    budget: Budget,
) -> Result<u64, Error> {
    for &cid in c {
        match xi.get(&cid) {
            Some(0) | None => {
                return Err(Error::Parse(
                    "xi must assign a positive count to every class in c".into(),
                ))
            }
            Some(_) => {}
        }
    }
    let ambient = g.class_table();
    let sub_table = h.class_table();
    // H-classes lying inside each ambient class of c.
    let mut h_class_to_c: Vec<Option<usize>> = vec![None; sub_table.class_count()];
    let mut per_c_h_classes: Vec<Vec<ClassId>> = vec![Vec::new(); c.len()];
    for hc in 0..sub_table.class_count() as ClassId {
        let rep = h.perm(sub_table.class(hc).rep());
        if rep.is_identity() {
            continue;
        }
        let amb = ambient.class_of(g.id_of(rep).ok_or_else(|| Error::ForeignElement {
            element: rep.cycle_string(),
            group: g.name().to_string(),
        })?);
        if let Some(pos) = c.iter().position(|&cid| cid == amb) {
            h_class_to_c[hc as usize] = Some(pos);
            per_c_h_classes[pos].push(hc);
        }
    }
    let comps = if strict_per_class {
        let mut counts: Vec<(ClassId, u64)> = Vec::new();
        for (pos, &cid) in c.iter().enumerate() {
            let want = r * xi[&cid];
            for &hc in &per_c_h_classes[pos] {
                counts.push((hc, want));
            }
        }
        if counts.iter().any(|&(_, k)| k == 0) || counts.is_empty() {
            return Ok(0);
        }
        let profile = ICIProfile::from_counts(counts)?;
        let n = profile.total() as usize;
        let spec = EnumerationSpec::new(
            Base::Projective,
            Equivalence::Marked,
            Cover::Galois,
            ClassConstraint::Profile(profile),
        );
        decompose_filtered(h, n, &spec, budget, None)?
    } else {
        let targets: Vec<u64> = c.iter().map(|cid| r * xi[cid]).collect();
        let n: u64 = targets.iter().sum();
        let allowed: Vec<ClassId> = per_c_h_classes.iter().flatten().copied().collect();
        if allowed.is_empty() {
            return Ok(0);
        }
        let spec = EnumerationSpec::new(
            Base::Projective,
            Equivalence::Marked,
            Cover::Galois,
            ClassConstraint::Set(allowed),
        );
        let map = h_class_to_c.clone();
        let filter = move |grp: &PermGroup, entries: &[ElemId]| -> bool {
            let table = grp.class_table();
            let mut got = vec![0u64; targets.len()];
            for &e in entries {
                if let Some(pos) = map[table.class_of(e) as usize] {
                    got[pos] += 1;
                }
            }
            got == targets
        };
        decompose_filtered(h, n as usize, &spec, budget, Some(Arc::new(filter)))?
    };
    Ok(comps.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_group_spec;
    use crate::orbit::decompose_components;

    fn s3_components(r: usize, base: Base) -> Vec<Component> {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(base, Equivalence::Marked);
        decompose_components(&g, r, &spec, Budget::default()).unwrap()
    }

    fn trans_class(g: &Arc<PermGroup>) -> ClassId {
        g.class_table().class_of(2)
    }

    fn threes_class(g: &Arc<PermGroup>) -> ClassId {
        g.class_table().class_of(3)
    }

    #[test]
    fn concat_examples() {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(Base::Projective, Equivalence::Marked);
        let x = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 2)", "(1 2)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let y = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 3)", "(1 3)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let xy = concat(&x, &y, Budget::default()).unwrap();
        assert_eq!(xy.r(), 4);
        // Unit laws.
        let unit = orbit_of(
            &NielsenTuple::new(g.clone(), vec![]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        assert!(concat(&unit, &x, Budget::default()).unwrap().same_component(&x));
        assert!(concat(&x, &unit, Budget::default()).unwrap().same_component(&x));
    }

    #[test]
    fn affine_single_entry_concat_is_braid_equal() {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(Base::Affine, Equivalence::Marked);
        let x = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 2)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let y = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 3)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let xy = concat(&x, &y, Budget::default()).unwrap();
        let direct = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(2 3)", "(1 2)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        assert!(xy.same_component(&direct));
    }

    #[test]
    fn unmarked_concat_requires_connected() {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(Base::Projective, Equivalence::Unmarked);
        let comps = decompose_components(&g, 2, &spec, Budget::default()).unwrap();
        let disconnected = comps.iter().find(|c| c.group_order() < 6).unwrap();
        let err = concat(disconnected, disconnected, Budget::default()).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolation(_)));
    }

    #[test]
    fn conjugate_component_identities() {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(Base::Projective, Equivalence::Marked);
        let x = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 2)", "(1 3)", "(2 3)", "(1 3)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        // Identity fixes the component.
        let same = conjugate_component(&x, &Perm::identity(3), Budget::default()).unwrap();
        assert!(same.same_component(&x));
        // Connected marked components absorb all conjugations.
        for gamma in g.elements() {
            let c = conjugate_component(&x, gamma, Budget::default()).unwrap();
            assert!(c.same_component(&x));
        }
        // In unmarked equivalence conjugation is quotiented out entirely.
        let spec = unconstrained(Base::Projective, Equivalence::Unmarked);
        for y in decompose_components(&g, 2, &spec, Budget::default()).unwrap() {
            for gamma in g.elements() {
                let c = conjugate_component(&y, gamma, Budget::default()).unwrap();
                assert!(c.same_component(&y));
            }
        }
    }

    #[test]
    fn commutation_law_exhaustive_small_projective() {
        let comps = s3_components(2, Base::Projective);
        for x in &comps {
            for y in &comps {
                let report = commutation_check(x, y, Budget::default()).unwrap();
                assert!(report.holds);
            }
        }
    }

    #[test]
    fn commutation_law_affine_example() {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(Base::Affine, Equivalence::Marked);
        let x = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 2)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let y = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 3)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let report = commutation_check(&x, &y, Budget::default()).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn twist_set_singleton_for_a3_c2() {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(Base::Projective, Equivalence::Marked);
        let x = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 2 3)", "(1 3 2)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let y = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 2)", "(1 2)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let report = hm_twist_set(&x, &y, Budget::default()).unwrap();
        assert_eq!(report.join_order, 6);
        assert!(report.hk_equals_join);
        assert!(report.singleton);
    }

    #[test]
    fn twist_set_self_product_of_connected() {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(Base::Projective, Equivalence::Marked);
        let x = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 2)", "(1 3)", "(2 3)", "(1 3)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        assert_eq!(x.group_order(), 6);
        let report = hm_twist_set(&x, &x, Budget::default()).unwrap();
        assert!(report.hk_equals_join);
        assert!(report.singleton);
    }

    #[test]
    fn twist_set_unit_factor() {
        let g = parse_group_spec("S3").unwrap();
        let spec = unconstrained(Base::Projective, Equivalence::Marked);
        let unit = orbit_of(
            &NielsenTuple::new(g.clone(), vec![]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let x = orbit_of(
            &NielsenTuple::from_cycles(&g, &["(1 2)", "(1 2)"]).unwrap(),
            &spec,
            Budget::default(),
        )
        .unwrap();
        let report = hm_twist_set(&unit, &x, Budget::default()).unwrap();
        assert!(report.singleton);
    }

    #[test]
    fn splitting_numbers_worked_examples() {
        let g = parse_group_spec("S3").unwrap();
        let trans = trans_class(&g);
        let threes = threes_class(&g);

        let c2 = g
            .subgroup_generated(&[Perm::parse_cycles("(1 2)", 3).unwrap()])
            .unwrap();
        assert_eq!(splitting_number(&g, &c2, &[trans]).unwrap().omega, 0);

        let a3 = g
            .subgroup_generated(&[Perm::parse_cycles("(1 2 3)", 3).unwrap()])
            .unwrap();
        let datum = splitting_number(&g, &a3, &[threes]).unwrap();
        assert_eq!(datum.omega, 1);
        assert_eq!(datum.per_class[0].subgroup_classes.len(), 2);

        assert_eq!(splitting_number(&g, &g, &[trans, threes]).unwrap().omega, 0);
    }

    #[test]
    fn nonsplitting_worked_examples() {
        let g = parse_group_spec("S3").unwrap();
        assert!(is_nonsplitting(&g, &[trans_class(&g)]).unwrap().holds);
        let report = is_nonsplitting(&g, &[threes_class(&g)]).unwrap();
        assert!(!report.holds);
        let w = report.witness.unwrap();
        assert_eq!(w.subgroup_order, 3);
        assert_eq!(w.split.subgroup_classes.len(), 2);

        let d5 = parse_group_spec("D5").unwrap();
        let inv = d5.class_table().class_of(
            d5.id_of(&Perm::parse_cycles("(2 5)(3 4)", 5).unwrap()).unwrap(),
        );
        assert!(is_nonsplitting(&d5, &[inv]).unwrap().holds);
    }

    #[test]
    fn hf_count_closed_form_oracle() {
        let g = parse_group_spec("S3").unwrap();
        let threes = threes_class(&g);
        let a3 = g
            .subgroup_generated(&[Perm::parse_cycles("(1 2 3)", 3).unwrap()])
            .unwrap();
        let xi: BTreeMap<ClassId, u64> = [(threes, 1)].into();
        // Oracle: orbits are multisets a·(123) + b·(132) with a+b = r and the
        // product (123)^(a-b) trivial, i.e. a ≡ 2r (mod 3).
        let closed_form = |r: u64| -> u64 { (0..=r).filter(|a| (2 * a) % 3 == r % 3).count() as u64 };
        for r in 2..=12 {
            let got = hf_count(&g, &a3, &[threes], &xi, r, false, Budget::default()).unwrap();
            assert_eq!(got, closed_form(r), "r = {r}");
        }
        assert_eq!(hf_count(&g, &a3, &[threes], &xi, 6, false, Budget::default()).unwrap(), 3);
        assert_eq!(hf_count(&g, &a3, &[threes], &xi, 9, false, Budget::default()).unwrap(), 4);
    }

    #[test]
    fn hf_count_omega_zero_control() {
        let g = parse_group_spec("S3").unwrap();
        let trans = trans_class(&g);
        let c2 = g
            .subgroup_generated(&[Perm::parse_cycles("(1 2)", 3).unwrap()])
            .unwrap();
        let xi: BTreeMap<ClassId, u64> = [(trans, 1)].into();
        for r in 2..=12 {
            let got = hf_count(&g, &c2, &[trans], &xi, r, false, Budget::default()).unwrap();
            assert_eq!(got, if r % 2 == 0 { 1 } else { 0 }, "r = {r}");
        }
    }

    #[test]
    fn hf_strict_reading_is_bounded() {
        let g = parse_group_spec("S3").unwrap();
        let threes = threes_class(&g);
        let a3 = g
            .subgroup_generated(&[Perm::parse_cycles("(1 2 3)", 3).unwrap()])
            .unwrap();
        let xi: BTreeMap<ClassId, u64> = [(threes, 1)].into();
        // Literal per-class reading: both A3-classes appear exactly r times,
        // which pins the multiset, so there is exactly one orbit.
        for r in 1..=5 {
            let got = hf_count(&g, &a3, &[threes], &xi, r, true, Budget::default()).unwrap();
            assert_eq!(got, 1, "r = {r}");
        }
    }

    #[test]
    fn hf_rejects_zero_xi() {
        let g = parse_group_spec("S3").unwrap();
        let threes = threes_class(&g);
        let a3 = g
            .subgroup_generated(&[Perm::parse_cycles("(1 2 3)", 3).unwrap()])
            .unwrap();
        let xi: BTreeMap<ClassId, u64> = [(threes, 0)].into();
        assert!(hf_count(&g, &a3, &[threes], &xi, 4, false, Budget::default()).is_err());
    }

    #[test]
    fn concat_respects_invariants() {
        let comps = s3_components(2, Base::Projective);
        let g = parse_group_spec("S3").unwrap();
        for x in &comps {
            for y in &comps {
                let xy = concat(x, y, Budget::default()).unwrap();
                assert_eq!(xy.r(), x.r() + y.r());
                assert_eq!(xy.ici(), &x.ici().union(y.ici()));
                let mut seed = x.rep().entries().to_vec();
                seed.extend_from_slice(y.rep().entries());
                assert_eq!(xy.group_order(), g.close_ids(&seed).len() as u64);
            }
        }
    }

    #[test]
    fn associativity_exhaustive_affine_r1() {
        let comps = s3_components(1, Base::Affine);
        for x in &comps {
            for y in &comps {
                for z in &comps {
                    let xy_z = concat(&concat(x, y, Budget::default()).unwrap(), z, Budget::default()).unwrap();
                    let x_yz = concat(x, &concat(y, z, Budget::default()).unwrap(), Budget::default()).unwrap();
                    assert!(xy_z.same_component(&x_yz));
                }
            }
        }
    }
}
