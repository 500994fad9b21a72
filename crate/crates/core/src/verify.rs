//! End-to-end verification suites behind `verify <suite>`.
//!
//! Each suite replays a family of property or oracle checks and reports one
//! line per check. The acceptance tests drive the same functions at their
//! full configured scale.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::braid::{apply_braid, Direction};
use crate::dsl::parse_group_spec;
use crate::error::Error;
use crate::group::{ClassId, ElemId, PermGroup};
use crate::lifting::{self, builtin_extension, lifting_invariant, load_central_extension};
use crate::monoid;
use crate::nielsen::{
    enumerate_nielsen, Base, Budget, ClassConstraint, Cover, Equivalence, EnumerationSpec,
    ICIProfile, NielsenTuple,
};
use crate::oracle;
use crate::orbit::{decompose_components, orbit_states, Component};
use crate::perm::Perm;
use crate::series;

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), passed: true, lines: Vec::new() }
    }

    fn ok(&mut self, line: impl Into<String>) {
        self.lines.push(format!("ok {}", line.into()));
    }

    fn fail(&mut self, line: impl Into<String>) {
        self.passed = false;
        self.lines.push(format!("FAIL {}", line.into()));
    }

    fn check(&mut self, cond: bool, line: impl Into<String>) {
        if cond {
            self.ok(line);
        } else {
            self.fail(line);
        }
    }
}

pub const SUITES: &[&str] = &[
    "braid-relations",
    "orbit-oracle",
    "clebsch",
    "prefix-normalization",
    "stabilization",
    "inner-conjugation",
    "monoid",
    "twist-singleton",
    "splitting-growth",
    "lifting",
    "rationality",
    "all",
];

pub struct SuiteOptions {
    pub group: Option<String>,
    pub r: Option<u32>,
    pub budget: Budget,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { group: None, r: None, budget: Budget::default() }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Vec<SuiteReport>, Error> {
    let one = |r: SuiteReport| Ok(vec![r]);
    match name {
        "braid-relations" => one(braid_relations(
            opts.group.as_deref(),
            opts.r.unwrap_or(6) as usize,
            10_000,
        )?),
        "orbit-oracle" => one(orbit_oracle(100_000, opts.budget)?),
        "clebsch" => one(clebsch(opts.budget)?),
        "prefix-normalization" => one(prefix_normalization(opts.budget)?),
        "stabilization" => one(stabilization(
            4..=opts.r.unwrap_or(10),
            opts.budget,
        )?),
        "inner-conjugation" => one(inner_conjugation(opts.budget)?),
        "monoid" => one(monoid_laws(opts.budget)?),
        "twist-singleton" => one(twist_singleton(opts.budget)?),
        "splitting-growth" => one(splitting_growth(opts.budget)?),
        "lifting" => one(lifting_suite(opts.budget)?),
        "rationality" => one(rationality()?),
        "all" => {
            let mut reports = Vec::new();
            for suite in SUITES.iter().filter(|s| **s != "all") {
                reports.extend(run_suite(suite, opts)?);
            }
            Ok(reports)
        }
        other => Err(Error::Parse(format!(
            "unknown verify suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// Deterministic tuple sample: a prefix of the affine enumeration plus
/// congruential-random tuples.
fn sample_tuples(g: &Arc<PermGroup>, r: usize, want: usize) -> Vec<NielsenTuple> {
    let spec = EnumerationSpec::new(Base::Affine, Equivalence::Marked, Cover::Any, ClassConstraint::All);
    let mut out: Vec<NielsenTuple> = enumerate_nielsen(g, r, &spec, Budget::unlimited())
        .expect("affine enumeration")
        .take(want * 3 / 4)
        .map(|t| t.expect("within budget"))
        .collect();
    let n = g.order() as ElemId;
    let mut state = 0x243f_6a88_85a3_08d3u64 ^ (g.order() << 16) ^ r as u64;
    while out.len() < want {
        let mut entries = Vec::with_capacity(r);
        for _ in 0..r {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            entries.push(1 + ((state >> 33) as ElemId % (n - 1)));
        }
        out.push(NielsenTuple::new(g.clone(), entries).expect("nontrivial entries"));
    }
    out
}

/// Braid-group axioms on sampled tuples: the braid relation, far
/// commutation, and invertibility, all exact.
pub fn braid_relations(group: Option<&str>, r: usize, min_samples: usize) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("braid-relations");
    let groups: Vec<&str> = match group {
        Some(g) => vec![g],
        None => vec!["S3", "A4", "D5"],
    };
    let per_group = min_samples.div_ceil(groups.len());
    let mut total = 0usize;
    for name in groups {
        let g = parse_group_spec(name)?;
        let mut checked = 0usize;
        for t in sample_tuples(&g, r, per_group) {
            for i in 1..r {
                let fwd = apply_braid(&t, i, Direction::Forward)?;
                if apply_braid(&fwd, i, Direction::Inverse)? != t {
                    report.fail(format!("{name}: Q_{i} not invertible on {t:?}"));
                    return Ok(report);
                }
            }
            for i in 1..r - 1 {
                let lhs = apply_braid(
                    &apply_braid(&apply_braid(&t, i, Direction::Forward)?, i + 1, Direction::Forward)?,
                    i,
                    Direction::Forward,
                )?;
                let rhs = apply_braid(
                    &apply_braid(&apply_braid(&t, i + 1, Direction::Forward)?, i, Direction::Forward)?,
                    i + 1,
                    Direction::Forward,
                )?;
                if lhs != rhs {
                    report.fail(format!("{name}: braid relation fails at {i} on {t:?}"));
                    return Ok(report);
                }
            }
            for i in 1..r {
                for j in i + 2..r {
                    let ij = apply_braid(&apply_braid(&t, i, Direction::Forward)?, j, Direction::Forward)?;
                    let ji = apply_braid(&apply_braid(&t, j, Direction::Forward)?, i, Direction::Forward)?;
                    if ij != ji {
                        report.fail(format!("{name}: far commutation fails at ({i},{j})"));
                        return Ok(report);
                    }
                }
            }
            checked += 1;
        }
        total += checked;
        report.ok(format!("{name}: relations hold on {checked} sampled tuples of length {r}"));
    }
    report.check(total >= min_samples, format!("sample size {total} >= {min_samples}"));
    Ok(report)
}

/// Canonical-form BFS partition equals the naive union-find partition on
/// every configuration of the matrix within the tuple bound.
pub fn orbit_oracle(max_tuples: usize, budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("orbit-oracle");
    let matrix: Vec<(&str, usize, Base)> = vec![
        ("S3", 2, Base::Projective),
        ("S3", 3, Base::Projective),
        ("S3", 4, Base::Projective),
        ("S3", 5, Base::Projective),
        ("S3", 3, Base::Affine),
        ("S3", 4, Base::Affine),
        ("C4", 4, Base::Projective),
        ("A4", 3, Base::Projective),
        ("A4", 4, Base::Projective),
        ("D5", 4, Base::Projective),
        ("D5", 6, Base::Projective),
        ("D5", 3, Base::Affine),
        ("S4", 4, Base::Projective),
    ];
    let mut ran = 0usize;
    for (name, r, base) in matrix {
        let g = parse_group_spec(name)?;
        for equiv in [Equivalence::Marked, Equivalence::Unmarked] {
            for cover in [Cover::Any, Cover::Galois] {
                let spec = EnumerationSpec::new(base, equiv, cover, ClassConstraint::All);
                let tuples = oracle::exhaustive_canonical_tuples(&g, r, &spec);
                if tuples.len() > max_tuples {
                    continue;
                }
                let slow = oracle::union_find_partition(&g, &tuples, equiv);
                let comps = decompose_components(&g, r, &spec, budget)?;
                let fast: Vec<(Vec<ElemId>, u64)> = comps
                    .iter()
                    .map(|c| (c.rep().entries().to_vec(), c.orbit_size()))
                    .collect();
                let tag = format!("{name} r={r} {base:?} {equiv:?} {cover:?} ({} tuples)", tuples.len());
                if fast == slow {
                    report.ok(tag);
                    ran += 1;
                } else {
                    report.fail(format!("{tag}: BFS partition differs from union-find"));
                }
            }
        }
    }
    report.check(ran > 0, format!("{ran} configurations compared"));
    Ok(report)
}

/// Degree-d covers with simple branching and transitive monodromy form a
/// single braid orbit whenever they exist at all; below the genus-zero
/// branch-point count 2d-2 the transitive locus is empty.
pub fn clebsch(budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("clebsch");
    let degree_spec = |g: &Arc<PermGroup>| {
        EnumerationSpec::new(
            Base::Projective,
            Equivalence::Marked,
            Cover::DegreeD,
            ClassConstraint::Set(vec![class_of_cycles(g, "(1 2)")]),
        )
    };
    for (d, r) in [(3u16, 4usize), (3, 6), (4, 6), (5, 8)] {
        let g = parse_group_spec(&format!("S{d}"))?;
        let comps = decompose_components(&g, r, &degree_spec(&g), budget)?;
        report.check(
            comps.len() == 1,
            format!(
                "degree {d}, r = {r}: {} component(s), orbit size {}",
                comps.len(),
                comps.first().map(|c| c.orbit_size()).unwrap_or(0)
            ),
        );
    }
    // Transitive simple branching needs at least 2d-2 branch points: a
    // 6-point degree-5 instance would have negative genus.
    let g = parse_group_spec("S5")?;
    let comps = decompose_components(&g, 6, &degree_spec(&g), budget)?;
    report.check(
        comps.is_empty(),
        format!("degree 5, r = 6: empty by the genus bound ({} components)", comps.len()),
    );
    Ok(report)
}

fn class_of_cycles(g: &Arc<PermGroup>, cycles: &str) -> ClassId {
    let p = Perm::parse_cycles(cycles, g.degree()).expect("parses");
    g.class_table().class_of(g.id_of(&p).expect("member"))
}

/// Every generating transposition tuple of length 8 over the affine base is
/// braid-equivalent to one starting with the fixed entry (1 2) whose tail
/// still generates; exhaustive over all 3^8 tuples.
pub fn prefix_normalization(budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("prefix-normalization");
    let g = parse_group_spec("S3")?;
    let trans = class_of_cycles(&g, "(1 2)");
    let fixed = g.id_of(&Perm::parse_cycles("(1 2)", 3).unwrap()).unwrap();
    let spec = EnumerationSpec::new(
        Base::Affine,
        Equivalence::Marked,
        Cover::Galois,
        ClassConstraint::Set(vec![trans]),
    );
    let r = 8usize;
    let comps = decompose_components(&g, r, &spec, budget)?;
    let mut covered: u64 = 0;
    for comp in &comps {
        let states = orbit_states(comp.rep(), &spec, budget)?;
        let witness = states.iter().find(|t| {
            t[0] == fixed && g.close_ids(&t[1..]).len() as u64 == g.order()
        });
        covered += comp.orbit_size();
        report.check(
            witness.is_some(),
            format!(
                "orbit of {:?} (size {}) reaches ((1 2), tail) with generating tail",
                comp.rep(),
                comp.orbit_size()
            ),
        );
    }
    report.check(covered == 6558, format!("{covered} generating tuples covered (expected 6558)"));
    Ok(report)
}

/// Connected projective component counts over a range, against the
/// exhaustive union-find oracle at every r, with periodicity detection.
pub fn stabilization(r_range: std::ops::RangeInclusive<u32>, budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("stabilization");
    for (name, class_rep) in [("D5", "(2 5)(3 4)"), ("S3", "(1 2)")] {
        let g = parse_group_spec(name)?;
        let c = class_of_cycles(&g, class_rep);
        let nonsplit = monoid::is_nonsplitting(&g, &[c])?;
        report.check(nonsplit.holds, format!("{name}: class {class_rep} satisfies the non-splitting condition"));
        let spec = EnumerationSpec::new(
            Base::Projective,
            Equivalence::Unmarked,
            Cover::Galois,
            ClassConstraint::Set(vec![c]),
        );
        let (series, err) = series::count_series(&g, &spec, r_range.clone(), budget);
        if let Some(e) = err {
            report.fail(format!("{name}: series failed: {e}"));
            continue;
        }
        for (&r, &count) in &series.points {
            let slow = oracle::orbit_partition_exhaustive(&g, r as usize, &spec);
            report.check(
                slow.len() as u64 == count,
                format!("{name} r={r}: {count} component(s), oracle {}", slow.len()),
            );
        }
        match series.detected_period {
            Some(p) => report.ok(format!(
                "{name}: period {} from r = {} observed within range",
                p.period, p.onset
            )),
            None => report.fail(format!("{name}: no period observed within {:?}", series.points.keys())),
        }
    }
    Ok(report)
}

/// For every connected marked tuple, entrywise conjugation stays in the
/// braid orbit; exhaustive for S3 (r <= 6) and A4 (r <= 4).
pub fn inner_conjugation(budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("inner-conjugation");
    for (name, r_max) in [("S3", 6usize), ("A4", 4)] {
        let g = parse_group_spec(name)?;
        let spec = EnumerationSpec::new(
            Base::Projective,
            Equivalence::Marked,
            Cover::Galois,
            ClassConstraint::All,
        );
        let mut orbits = 0u64;
        let mut states_total = 0u64;
        let mut failed = false;
        for r in 2..=r_max {
            let comps = decompose_components(&g, r, &spec, budget)?;
            for comp in &comps {
                let states = orbit_states(comp.rep(), &spec, budget)?;
                // Closure under generator conjugation implies closure under
                // the full group.
                for t in &states {
                    for gen in g.generators() {
                        let gid = g.id_of(gen).unwrap();
                        let conj: Vec<ElemId> = t.iter().map(|&e| g.conj(e, gid)).collect();
                        if states.binary_search(&conj).is_err() {
                            report.fail(format!(
                                "{name} r={r}: conjugate of {t:?} by {gen} escapes its orbit"
                            ));
                            failed = true;
                        }
                    }
                }
                orbits += 1;
                states_total += states.len() as u64;
            }
        }
        if !failed {
            report.ok(format!(
                "{name}: all {orbits} connected orbits (r <= {r_max}, {states_total} states) absorb conjugation"
            ));
        }
    }
    Ok(report)
}

/// Monoid unit/associativity laws and the commutation law, exhaustively at
/// small degree over S3.
pub fn monoid_laws(budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("monoid");
    let g = parse_group_spec("S3")?;

    let components_upto = |base: Base, r_max: usize| -> Result<Vec<Component>, Error> {
        let spec = EnumerationSpec::new(base, Equivalence::Marked, Cover::Any, ClassConstraint::All);
        let mut all = Vec::new();
        for r in 0..=r_max {
            all.extend(decompose_components(&g, r, &spec, budget)?);
        }
        Ok(all)
    };

    // Unit laws.
    let affine = components_upto(Base::Affine, 2)?;
    let unit = affine.iter().find(|c| c.r() == 0).expect("unit exists");
    let mut unit_ok = true;
    for x in &affine {
        let left = monoid::concat(unit, x, budget)?;
        let right = monoid::concat(x, unit, budget)?;
        unit_ok &= left.same_component(x) && right.same_component(x);
    }
    report.check(unit_ok, format!("unit laws over {} affine components", affine.len()));

    // Associativity with memoized concatenations.
    let mut memo: BTreeMap<(Vec<ElemId>, Vec<ElemId>), Component> = BTreeMap::new();
    let mut cached_concat = |a: &Component, b: &Component| -> Result<Component, Error> {
        let key = (a.rep().entries().to_vec(), b.rep().entries().to_vec());
        if let Some(c) = memo.get(&key) {
            return Ok(c.clone());
        }
        let c = monoid::concat(a, b, budget)?;
        memo.insert(key, c.clone());
        Ok(c)
    };
    let mut assoc_ok = true;
    for x in &affine {
        for y in &affine {
            for z in &affine {
                let xy = cached_concat(x, y)?;
                let yz = cached_concat(y, z)?;
                let lhs = cached_concat(&xy, z)?;
                let rhs = cached_concat(x, &yz)?;
                if !lhs.same_component(&rhs) {
                    assoc_ok = false;
                    report.fail(format!(
                        "associativity fails on {:?}, {:?}, {:?}",
                        x.rep(),
                        y.rep(),
                        z.rep()
                    ));
                }
            }
        }
    }
    report.check(
        assoc_ok,
        format!("associativity over {} affine component triples", affine.len().pow(3)),
    );

    // Commutation law.
    let mut pairs = 0usize;
    let mut comm_ok = true;
    for x in &affine {
        for y in &affine {
            let rep = monoid::commutation_check(x, y, budget)?;
            comm_ok &= rep.holds;
            pairs += 1;
        }
    }
    report.check(comm_ok, format!("commutation over {pairs} affine pairs (r <= 2)"));

    let projective = components_upto(Base::Projective, 4)?;
    let mut pairs = 0usize;
    let mut comm_ok = true;
    for x in &projective {
        for y in &projective {
            let rep = monoid::commutation_check(x, y, budget)?;
            comm_ok &= rep.holds;
            pairs += 1;
        }
    }
    report.check(comm_ok, format!("commutation over {pairs} projective pairs (r <= 4)"));
    Ok(report)
}

/// Twisted concatenation collapses to the plain product when the generated
/// subgroups satisfy ⟨H,K⟩ = HK.
pub fn twist_singleton(budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("twist-singleton");
    let g = parse_group_spec("S3")?;
    let spec = EnumerationSpec::new(
        Base::Projective,
        Equivalence::Marked,
        Cover::Any,
        ClassConstraint::All,
    );
    let x = crate::orbit::orbit_of(
        &NielsenTuple::from_cycles(&g, &["(1 2 3)", "(1 3 2)"])?,
        &spec,
        budget,
    )?;
    let y = crate::orbit::orbit_of(&NielsenTuple::from_cycles(&g, &["(1 2)", "(1 2)"])?, &spec, budget)?;
    let named = monoid::hm_twist_set(&x, &y, budget)?;
    report.check(
        named.hk_equals_join && named.singleton,
        format!(
            "A3 * C2 instance: join order {}, HK = join: {}, twist set size {}",
            named.join_order,
            named.hk_equals_join,
            named.twist_reps.len()
        ),
    );

    let comps = decompose_components(&g, 2, &spec, budget)?;
    let mut swept = 0usize;
    let mut all_ok = true;
    for a in &comps {
        for b in &comps {
            let rep = monoid::hm_twist_set(a, b, budget)?;
            if rep.hk_equals_join {
                swept += 1;
                if !rep.singleton {
                    all_ok = false;
                    report.fail(format!(
                        "pair {:?}, {:?}: HK = join but twist set has {} members",
                        a.rep(),
                        b.rep(),
                        rep.twist_reps.len()
                    ));
                }
            }
        }
    }
    report.check(all_ok, format!("sweep: {swept} pairs with HK = join, all singletons"));
    Ok(report)
}

/// Splitting numbers and the component-count growth they govern.
pub fn splitting_growth(budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("splitting-growth");
    let g = parse_group_spec("S3")?;
    let threes = class_of_cycles(&g, "(1 2 3)");
    let trans = class_of_cycles(&g, "(1 2)");
    let a3 = g.subgroup_generated(&[Perm::parse_cycles("(1 2 3)", 3).unwrap()])?;
    let c2 = g.subgroup_generated(&[Perm::parse_cycles("(1 2)", 3).unwrap()])?;

    let omega_a3 = monoid::splitting_number(&g, &a3, &[threes])?.omega;
    report.check(omega_a3 == 1, format!("omega(A3, 3-cycles) = {omega_a3} (expected 1)"));
    let omega_c2 = monoid::splitting_number(&g, &c2, &[trans])?.omega;
    report.check(omega_c2 == 0, format!("omega(C2, transpositions) = {omega_c2} (expected 0)"));

    let xi3: BTreeMap<ClassId, u64> = [(threes, 1)].into();
    let mut growth_ok = true;
    let mut max_unbounded = 0u64;
    for r in 2..=12u64 {
        let want = (0..=r).filter(|a| (2 * a) % 3 == r % 3).count() as u64;
        let got = monoid::hf_count(&g, &a3, &[threes], &xi3, r, false, budget)?;
        if got != want {
            growth_ok = false;
            report.fail(format!("hf(A3, r={r}) = {got}, closed form {want}"));
        }
        max_unbounded = max_unbounded.max(got);
    }
    report.check(growth_ok, "hf(A3, 3-cycles) matches the closed form for r = 2..12");
    report.check(max_unbounded >= 5, format!("omega = 1 family grows (max {max_unbounded})"));

    let xi2: BTreeMap<ClassId, u64> = [(trans, 1)].into();
    let mut bounded_ok = true;
    for r in 2..=12u64 {
        let got = monoid::hf_count(&g, &c2, &[trans], &xi2, r, false, budget)?;
        let want = if r % 2 == 0 { 1 } else { 0 };
        if got != want {
            bounded_ok = false;
            report.fail(format!("hf(C2, r={r}) = {got}, expected {want}"));
        }
    }
    report.check(bounded_ok, "omega = 0 control stays at 1 on its support (even r)");
    Ok(report)
}

/// Lifting invariants over the shipped extension: braid invariance,
/// multiplicativity, centrality, and the separation probe.
pub fn lifting_suite(budget: Budget) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("lifting");
    let a4 = parse_group_spec("A4")?;
    let ext = load_central_extension(&a4, &builtin_extension("a4").expect("builtin"))?;
    let spec = EnumerationSpec::new(
        Base::Projective,
        Equivalence::Marked,
        Cover::Any,
        ClassConstraint::Set(ext.scope().to_vec()),
    );

    let mut orbits = 0u64;
    let mut invariant_ok = true;
    let mut central_ok = true;
    for r in 3..=5usize {
        let comps = decompose_components(&a4, r, &spec, budget)?;
        for comp in comps.iter().filter(|c| c.orbit_size() <= 10_000) {
            let value = lifting_invariant(comp.rep(), &ext)?;
            central_ok &= ext
                .cover()
                .id_of(&value.element)
                .map(|id| ext.is_central_in_cover(id))
                .unwrap_or(false);
            for t in orbit_states(comp.rep(), &spec, budget)? {
                let member = NielsenTuple::new(a4.clone(), t)?;
                if lifting_invariant(&member, &ext)? != value {
                    invariant_ok = false;
                    report.fail(format!("value varies inside the orbit of {:?}", comp.rep()));
                    break;
                }
            }
            orbits += 1;
        }
    }
    report.check(invariant_ok, format!("braid invariance on {orbits} orbits (r = 3..5)"));
    report.check(central_ok, "projective values are central in the cover");

    // Multiplicativity on concatenations of scoped tuples.
    let mut mult_ok = true;
    let comps4 = decompose_components(&a4, 4, &spec, budget)?;
    for x in comps4.iter().take(4) {
        for y in comps4.iter().take(4) {
            let joined = x.rep().concat(y.rep())?;
            let lhs = lifting_invariant(&joined, &ext)?;
            let rhs = lifting_invariant(x.rep(), &ext)?
                .element
                .compose(&lifting_invariant(y.rep(), &ext)?.element);
            mult_ok &= lhs.element == rhs;
        }
    }
    report.check(mult_ok, "multiplicativity on concatenated representatives");

    let probe = lifting::cpfv_probe(&a4, &ext, &spec, 4..=6, budget)?;
    let connected_collisions: u64 = probe.rows.iter().map(|r| r.connected_collisions).sum();
    report.check(
        connected_collisions == 0,
        format!(
            "separation probe r = 4..6: {} connected collision(s); least separating multiplicity {:?}",
            connected_collisions, probe.least_separating_multiplicity
        ),
    );
    let again = lifting::cpfv_probe(&a4, &ext, &spec, 4..=6, budget)?;
    report.check(
        serde_json::to_vec(&probe)? == serde_json::to_vec(&again)?,
        "probe report regenerates bit-identically",
    );
    Ok(report)
}

/// The three worked rationality examples.
pub fn rationality() -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("rationality");
    let s3 = parse_group_spec("S3")?;
    let threes = class_of_cycles(&s3, "(1 2 3)");
    let p = ICIProfile::from_counts([(threes, 2)])?;
    report.check(
        lifting::is_globally_rational(&s3, &p).rational,
        "S3: two 3-cycles are globally rational",
    );

    let c3 = parse_group_spec("C3")?;
    let sigma = c3.class_table().class_of(1);
    let p = ICIProfile::from_counts([(sigma, 2)])?;
    let rep = lifting::is_globally_rational(&c3, &p);
    report.check(
        !rep.rational && rep.witness_power == Some(2),
        format!("C3: rejected with witness power {:?}", rep.witness_power),
    );

    report.check(
        lifting::is_globally_rational(&s3, &ICIProfile::new()).rational,
        "empty profile is rational",
    );
    Ok(report)
}
