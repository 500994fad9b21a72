//! Batch command-line surface: parsing, dispatch, serialization, caching.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::cache::{Cache, RequestDescriptor};
use crate::dsl::parse_group_spec;
use crate::error::Error;
use crate::group::{ClassId, PermGroup};
use crate::lifting::{self, builtin_extension, CentralExtension, ExtensionFile};
use crate::monoid;
use crate::nielsen::{
    enumerate_nielsen, ici, Base, Budget, ClassConstraint, Cover, Equivalence, EnumerationSpec,
    ICIProfile, NielsenTuple,
};
use crate::orbit::{decompose_components, orbit_of, Component};
use crate::perm::Perm;
use crate::series::count_series;
use crate::verify::{self, SuiteOptions};

#[derive(Parser)]
#[command(name = "nbl", version, about = "Nielsen classes, braid orbits and Hurwitz-space component combinatorics")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Bypass the result cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache directory (default: $NBL_CACHE or .nbl-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for orbit computations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration budget: candidate tuples examined per enumeration.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_tuples: u64,
    /// Orbit budget: states held by one orbit computation (for a full
    /// decomposition, total states across its orbits).
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_orbit: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true, default_value_t = 300)]
    timeout_secs: u64,
}

#[derive(Args, Clone)]
struct ModeArgs {
    /// Base curve: p1 (projective, product-one) or a1 (affine).
    #[arg(long, default_value = "p1")]
    base: String,
    /// Equivalence: marked or unmarked.
    #[arg(long, default_value = "marked")]
    equiv: String,
    /// Cover constraint: any, galois (connected), or degree-d (transitive).
    #[arg(long, default_value = "any")]
    cover: String,
    /// Allowed classes: `all`, `trans` (2-cycles), or a representative cycle
    /// string like `(1 2 3)`; repeat the flag for several classes.
    #[arg(long = "classes")]
    classes: Vec<String>,
    /// Exact class multiset as JSON, e.g. `{"(1 2)": 4}`; overrides --classes.
    #[arg(long)]
    profile: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Conjugacy classes of a group.
    Classes { group: String },
    /// Subgroups up to conjugacy.
    Subgroups { group: String },
    /// Enumerate Nielsen tuples.
    Nielsen {
        group: String,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Braid-orbit components of a Nielsen set.
    Components {
        group: String,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        mode: ModeArgs,
        /// Attach lifting invariants from this central extension
        /// (`builtin:a4` or a file path); entries must lie in its scope.
        #[arg(long)]
        extension: Option<String>,
    },
    /// Component counts over a range of r, as CSV.
    Series {
        group: String,
        /// Inclusive range, e.g. 4..12.
        #[arg(long)]
        r: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Concatenate two components.
    Concat {
        group: String,
        #[command(flatten)]
        mode: ModeArgs,
        /// Tuple as a JSON array of cycle strings, or `id:<hex>` with --from.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// A prior `components` JSON output to resolve `id:` references.
        #[arg(long)]
        from: Option<PathBuf>,
    },
    /// Twisted-concatenation set of two components.
    Twist {
        group: String,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        from: Option<PathBuf>,
    },
    /// Splitting number of a subgroup, or the non-splitting sweep.
    Splitting {
        group: String,
        /// Subgroup generators, semicolon-separated cycle strings; when
        /// omitted, sweeps all subgroup classes for the non-splitting test.
        #[arg(long)]
        subgroup: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Component-count of connected subgroup covers under the growth
    /// constraint derived from (classes, xi, r).
    Hf {
        group: String,
        #[arg(long)]
        subgroup: String,
        #[command(flatten)]
        mode: ModeArgs,
        /// Uniform multiplier applied to every class in --classes.
        #[arg(long, default_value_t = 1)]
        xi: u64,
        #[arg(long)]
        r: u64,
        /// Literal reading: every subgroup class inside an ambient class
        /// appears exactly r*xi times (bounded variant, for comparison).
        #[arg(long)]
        hf_strict_per_class: bool,
    },
    /// Lifting invariant of a tuple in a central extension.
    Lift {
        group: String,
        /// `builtin:a4` or a path to an extension JSON file.
        #[arg(long)]
        extension: String,
        /// Tuple as a JSON array of cycle strings.
        #[arg(long)]
        tuple: String,
    },
    /// Global rationality of a class multiset.
    Rational {
        group: String,
        /// ICI as JSON, e.g. `{"(1 2 3)": 2}`.
        #[arg(long)]
        ici: String,
    },
    /// Separation probe: group components by (group, ICI, lifting value).
    Cpfv {
        group: String,
        #[arg(long)]
        extension: String,
        /// Inclusive range, e.g. 4..6.
        #[arg(long)]
        r: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        r: Option<u32>,
    },
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exits.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // Deterministic outputs do not depend on the pool size; this only
        // sizes the worker pool. Ignore failure if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("nbl: error: {e}");
            e.exit_code()
        }
    }
}

fn budget_from(cli: &Cli) -> Budget {
    Budget {
        max_tuples: cli.max_tuples,
        max_orbit: cli.max_orbit,
        deadline: Some(Instant::now() + Duration::from_secs(cli.timeout_secs)),
    }
}

fn parse_base(text: &str) -> Result<Base, Error> {
    match text {
        "p1" | "projective" => Ok(Base::Projective),
        "a1" | "affine" => Ok(Base::Affine),
        other => Err(Error::Parse(format!("unknown base {other:?}; use p1 or a1"))),
    }
}

fn parse_equiv(text: &str) -> Result<Equivalence, Error> {
    match text {
        "marked" => Ok(Equivalence::Marked),
        "unmarked" => Ok(Equivalence::Unmarked),
        other => Err(Error::Parse(format!("unknown equivalence {other:?}"))),
    }
}

fn parse_cover(text: &str) -> Result<Cover, Error> {
    match text {
        "any" => Ok(Cover::Any),
        "galois" => Ok(Cover::Galois),
        "degree-d" | "degree" => Ok(Cover::DegreeD),
        other => Err(Error::Parse(format!("unknown cover {other:?}"))),
    }
}

/// `trans` picks every class of 2-cycles; other entries are representative
/// cycle strings.
fn resolve_classes(g: &Arc<PermGroup>, names: &[String]) -> Result<Vec<ClassId>, Error> {
    let table = g.class_table();
    let mut out: Vec<ClassId> = Vec::new();
    for name in names {
        match name.as_str() {
            "all" => return Ok((1..table.class_count() as ClassId).collect()),
            "trans" => {
                for c in 1..table.class_count() as ClassId {
                    let rep = g.perm(table.class(c).rep());
                    let moved = rep
                        .images()
                        .iter()
                        .enumerate()
                        .filter(|(i, &j)| *i as u16 != j)
                        .count();
                    if rep.order() == 2 && moved == 2 {
                        out.push(c);
                    }
                }
            }
            cycles => {
                let p = Perm::parse_cycles(cycles, g.degree())?;
                let id = g.id_of(&p).ok_or_else(|| Error::ForeignElement {
                    element: p.cycle_string(),
                    group: g.name().to_string(),
                })?;
                let c = table.class_of(id);
                if c == 0 {
                    return Err(Error::Parse("the identity class cannot be selected".into()));
                }
                out.push(c);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Parse("no classes selected".into()));
    }
    Ok(out)
}

fn parse_profile(g: &Arc<PermGroup>, text: &str) -> Result<ICIProfile, Error> {
    let named: BTreeMap<String, u64> = serde_json::from_str(text)?;
    let table = g.class_table();
    let mut counts = Vec::new();
    for (cycles, count) in named {
        let p = Perm::parse_cycles(&cycles, g.degree())?;
        let id = g.id_of(&p).ok_or_else(|| Error::ForeignElement {
            element: p.cycle_string(),
            group: g.name().to_string(),
        })?;
        counts.push((table.class_of(id), count));
    }
    ICIProfile::from_counts(counts)
}

fn build_spec(g: &Arc<PermGroup>, mode: &ModeArgs) -> Result<EnumerationSpec, Error> {
    let classes = match &mode.profile {
        Some(text) => ClassConstraint::Profile(parse_profile(g, text)?),
        None => {
            if mode.classes.is_empty() || mode.classes.iter().any(|c| c == "all") {
                ClassConstraint::All
            } else {
                ClassConstraint::Set(resolve_classes(g, &mode.classes)?)
            }
        }
    };
    Ok(EnumerationSpec::new(
        parse_base(&mode.base)?,
        parse_equiv(&mode.equiv)?,
        parse_cover(&mode.cover)?,
        classes,
    ))
}

fn spec_value(spec: &EnumerationSpec, g: &Arc<PermGroup>) -> Value {
    let classes = match &spec.classes {
        ClassConstraint::All => json!("all"),
        ClassConstraint::Set(ids) => {
            let t = g.class_table();
            json!(ids
                .iter()
                .map(|&c| g.perm(t.class(c).rep()).cycle_string())
                .collect::<Vec<_>>())
        }
        ClassConstraint::Profile(p) => json!(p.to_named(g)),
    };
    json!({
        "base": match spec.base { Base::Projective => "p1", Base::Affine => "a1" },
        "equiv": match spec.equiv { Equivalence::Marked => "marked", Equivalence::Unmarked => "unmarked" },
        "cover": match spec.cover { Cover::Any => "any", Cover::Galois => "galois", Cover::DegreeD => "degree-d" },
        "classes": classes,
    })
}

fn component_value(c: &Component, g: &Arc<PermGroup>) -> Value {
    let mut v = json!({
        "id": c.content_id(),
        "r": c.r(),
        "orbit_size": c.orbit_size(),
        "canonical_rep": c.rep().cycle_strings(),
        "group_order": c.group_order(),
        "group_class_id": c.group_class(),
        "ici": c.ici().to_named(g),
    });
    if let Some(l) = &c.lifting {
        v["lifting"] = json!({ "element": l.cycle_string(), "degree": l.degree });
    }
    v
}

/// Emits primary output, going through the cache unless disabled. Budget and
/// thread options are execution parameters, not part of the request
/// identity; only complete results are ever cached.
fn emit(cli: &Cli, descriptor: &RequestDescriptor, produce: impl FnOnce() -> Result<Vec<u8>, Error>) -> Result<(), Error> {
    let cache = match &cli.cache_dir {
        Some(dir) => Cache::new(dir.clone()),
        None => Cache::from_env(),
    };
    let bytes = if cli.no_cache {
        produce()?
    } else if let Some(hit) = cache.lookup(descriptor) {
        hit
    } else {
        let fresh = produce()?;
        cache.store(descriptor, &fresh)?;
        fresh
    };
    write_out(cli, &bytes)
}

fn write_out(cli: &Cli, bytes: &[u8]) -> Result<(), Error> {
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes)?;
            if !bytes.ends_with(b"\n") {
                lock.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn pretty(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    bytes
}

fn parse_range(text: &str) -> Result<(u32, u32), Error> {
    let Some((lo, hi)) = text.split_once("..") else {
        return Err(Error::Parse(format!("expected a range like 4..12, got {text:?}")));
    };
    let lo: u32 = lo.trim().parse().map_err(|_| Error::Parse(format!("bad range start {lo:?}")))?;
    let hi = hi.trim().trim_start_matches('=');
    let hi: u32 = hi.parse().map_err(|_| Error::Parse(format!("bad range end {hi:?}")))?;
    if hi < lo {
        return Err(Error::Parse("empty range".into()));
    }
    Ok((lo, hi))
}

/// Resolves a component argument: a JSON tuple literal or `id:<hex>` against
/// a prior `components` output.
fn resolve_component(
    g: &Arc<PermGroup>,
    spec: &EnumerationSpec,
    text: &str,
    from: &Option<PathBuf>,
    budget: Budget,
) -> Result<Component, Error> {
    let cycles: Vec<String> = if let Some(id) = text.strip_prefix("id:") {
        let Some(path) = from else {
            return Err(Error::Parse("id: references need --from <components.json>".into()));
        };
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let comps = doc["components"]
            .as_array()
            .ok_or_else(|| Error::Parse("--from file has no components array".into()))?;
        let found = comps
            .iter()
            .find(|c| c["id"].as_str() == Some(id))
            .ok_or_else(|| Error::Parse(format!("component id {id} not found in --from file")))?;
        serde_json::from_value(found["canonical_rep"].clone())?
    } else {
        serde_json::from_str(text)?
    };
    let refs: Vec<&str> = cycles.iter().map(|s| s.as_str()).collect();
    let t = NielsenTuple::from_cycles(g, &refs)?;
    orbit_of(&t, spec, budget)
}

fn load_extension(g: &Arc<PermGroup>, text: &str) -> Result<CentralExtension, Error> {
    let file: ExtensionFile = if let Some(name) = text.strip_prefix("builtin:") {
        builtin_extension(name)
            .ok_or_else(|| Error::Parse(format!("no builtin extension named {name:?}")))?
    } else {
        serde_json::from_str(&std::fs::read_to_string(text)?)?
    };
    lifting::load_central_extension(g, &file)
}

fn dispatch(cli: &Cli) -> Result<(), Error> {
    let budget = budget_from(cli);
    match &cli.command {
        Command::Classes { group } => {
            let g = parse_group_spec(group)?;
            let descriptor = RequestDescriptor::new(&json!({"cmd": "classes", "group": g.name()}));
            emit(cli, &descriptor, || {
                let t = g.class_table();
                let rows: Vec<Value> = t
                    .classes()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        json!({
                            "id": i,
                            "rep": g.perm(c.rep()).cycle_string(),
                            "size": c.size(),
                            "element_order": g.perm(c.rep()).order(),
                        })
                    })
                    .collect();
                Ok(pretty(&json!({
                    "group": g.name(),
                    "degree": g.degree(),
                    "order": g.order(),
                    "classes": rows,
                })))
            })
        }
        Command::Subgroups { group } => {
            let g = parse_group_spec(group)?;
            let descriptor = RequestDescriptor::new(&json!({"cmd": "subgroups", "group": g.name()}));
            emit(cli, &descriptor, || {
                let t = g.subgroup_table()?;
                let rows: Vec<Value> = t
                    .classes()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        json!({
                            "class_id": i,
                            "order": c.order(),
                            "conjugates": c.conjugate_count(),
                            "elements": c
                                .rep_elems()
                                .iter()
                                .map(|&e| g.perm(e).cycle_string())
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                Ok(pretty(&json!({
                    "group": g.name(),
                    "order": g.order(),
                    "subgroup_classes": rows,
                    "total_subgroups": t.total_subgroups(),
                })))
            })
        }
        Command::Nielsen { group, r, mode } => {
            let g = parse_group_spec(group)?;
            let spec = build_spec(&g, mode)?;
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "nielsen", "group": g.name(), "r": r, "spec": spec_value(&spec, &g),
            }));
            let run = || -> Result<Vec<u8>, Error> {
                let mut tuples: Vec<Value> = Vec::new();
                let mut truncated = false;
                for item in enumerate_nielsen(&g, *r, &spec, budget)? {
                    match item {
                        Ok(t) => tuples.push(json!(t.cycle_strings())),
                        Err(Error::Budget { .. }) => {
                            truncated = true;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                let doc = pretty(&json!({
                    "group": g.name(),
                    "r": r,
                    "spec": spec_value(&spec, &g),
                    "count": tuples.len(),
                    "truncated": truncated,
                    "tuples": tuples,
                }));
                if truncated {
                    // Partial output is flagged in the document and via the
                    // exit code; never cached.
                    write_out(cli, &doc)?;
                    return Err(Error::Budget {
                        phase: crate::error::Phase::Enumeration,
                        detail: "tuple budget exhausted; partial output emitted".into(),
                    });
                }
                Ok(doc)
            };
            emit(cli, &descriptor, run)
        }
        Command::Components { group, r, mode, extension } => {
            let g = parse_group_spec(group)?;
            let spec = build_spec(&g, mode)?;
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "components", "group": g.name(), "r": r, "spec": spec_value(&spec, &g),
                "extension": extension,
            }));
            emit(cli, &descriptor, || {
                let mut comps = decompose_components(&g, *r, &spec, budget)?;
                if let Some(ext_ref) = extension {
                    let ext = load_extension(&g, ext_ref)?;
                    for c in &mut comps {
                        let rep = c.rep().clone();
                        c.lifting = Some(lifting::lifting_invariant(&rep, &ext)?);
                    }
                }
                Ok(pretty(&json!({
                    "group": g.name(),
                    "r": r,
                    "spec": spec_value(&spec, &g),
                    "component_count": comps.len(),
                    "components": comps.iter().map(|c| component_value(c, &g)).collect::<Vec<_>>(),
                })))
            })
        }
        Command::Series { group, r, mode } => {
            let g = parse_group_spec(group)?;
            let spec = build_spec(&g, mode)?;
            let (lo, hi) = parse_range(r)?;
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "series", "group": g.name(), "r": [lo, hi], "spec": spec_value(&spec, &g),
            }));
            let run = || -> Result<Vec<u8>, Error> {
                let (series, err) = count_series(&g, &spec, lo..=hi, budget);
                let csv = series.to_csv().into_bytes();
                if let Some(e) = err {
                    write_out(cli, &csv)?;
                    return Err(e);
                }
                Ok(csv)
            };
            emit(cli, &descriptor, run)
        }
        Command::Concat { group, mode, x, y, from } => {
            let g = parse_group_spec(group)?;
            let spec = build_spec(&g, mode)?;
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "concat", "group": g.name(), "spec": spec_value(&spec, &g), "x": x, "y": y,
            }));
            emit(cli, &descriptor, || {
                let cx = resolve_component(&g, &spec, x, from, budget)?;
                let cy = resolve_component(&g, &spec, y, from, budget)?;
                let out = monoid::concat(&cx, &cy, budget)?;
                Ok(pretty(&json!({
                    "x": component_value(&cx, &g),
                    "y": component_value(&cy, &g),
                    "product": component_value(&out, &g),
                })))
            })
        }
        Command::Twist { group, mode, x, y, from } => {
            let g = parse_group_spec(group)?;
            let spec = build_spec(&g, mode)?;
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "twist", "group": g.name(), "spec": spec_value(&spec, &g), "x": x, "y": y,
            }));
            emit(cli, &descriptor, || {
                let cx = resolve_component(&g, &spec, x, from, budget)?;
                let cy = resolve_component(&g, &spec, y, from, budget)?;
                let report = monoid::hm_twist_set(&cx, &cy, budget)?;
                Ok(pretty(&serde_json::to_value(&report)?))
            })
        }
        Command::Splitting { group, subgroup, mode } => {
            let g = parse_group_spec(group)?;
            let classes = if mode.classes.is_empty() {
                resolve_classes(&g, &["all".to_string()])?
            } else {
                resolve_classes(&g, &mode.classes)?
            };
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "splitting", "group": g.name(), "subgroup": subgroup, "classes": classes,
            }));
            emit(cli, &descriptor, || match subgroup {
                Some(gens_text) => {
                    let h = parse_subgroup(&g, gens_text)?;
                    let datum = monoid::splitting_number(&g, &h, &classes)?;
                    Ok(pretty(&serde_json::to_value(&datum)?))
                }
                None => {
                    let report = monoid::is_nonsplitting(&g, &classes)?;
                    Ok(pretty(&serde_json::to_value(&report)?))
                }
            })
        }
        Command::Hf { group, subgroup, mode, xi, r, hf_strict_per_class } => {
            let g = parse_group_spec(group)?;
            let h = parse_subgroup(&g, subgroup)?;
            let classes = resolve_classes(&g, &mode.classes)?;
            let xi_map: BTreeMap<ClassId, u64> = classes.iter().map(|&c| (c, *xi)).collect();
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "hf", "group": g.name(), "subgroup": subgroup, "classes": classes,
                "xi": xi, "r": r, "strict": hf_strict_per_class,
            }));
            emit(cli, &descriptor, || {
                let count = monoid::hf_count(&g, &h, &classes, &xi_map, *r, *hf_strict_per_class, budget)?;
                Ok(pretty(&json!({
                    "group": g.name(),
                    "subgroup_order": h.order(),
                    "r": r,
                    "xi": xi,
                    "strict_per_class": hf_strict_per_class,
                    "count": count,
                })))
            })
        }
        Command::Lift { group, extension, tuple } => {
            let g = parse_group_spec(group)?;
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "lift", "group": g.name(), "extension": extension, "tuple": tuple,
            }));
            emit(cli, &descriptor, || {
                let ext = load_extension(&g, extension)?;
                let cycles: Vec<String> = serde_json::from_str(tuple)?;
                let refs: Vec<&str> = cycles.iter().map(|s| s.as_str()).collect();
                let t = NielsenTuple::from_cycles(&g, &refs)?;
                let value = lifting::lifting_invariant(&t, &ext)?;
                let central = ext
                    .cover()
                    .id_of(&value.element)
                    .map(|id| ext.is_central_in_cover(id))
                    .unwrap_or(false);
                Ok(pretty(&json!({
                    "element": value.cycle_string(),
                    "degree": value.degree,
                    "central": central,
                    "ici": ici(&t, None)?.to_named(&g),
                })))
            })
        }
        Command::Rational { group, ici } => {
            let g = parse_group_spec(group)?;
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "rational", "group": g.name(), "ici": ici,
            }));
            emit(cli, &descriptor, || {
                let profile = parse_profile(&g, ici)?;
                let report = lifting::is_globally_rational(&g, &profile);
                Ok(pretty(&serde_json::to_value(&report)?))
            })
        }
        Command::Cpfv { group, extension, r, mode } => {
            let g = parse_group_spec(group)?;
            let (lo, hi) = parse_range(r)?;
            let descriptor = RequestDescriptor::new(&json!({
                "cmd": "cpfv", "group": g.name(), "extension": extension, "r": [lo, hi],
                "mode": [&mode.base, &mode.equiv, &mode.cover, &mode.classes],
            }));
            emit(cli, &descriptor, || {
                let ext = load_extension(&g, extension)?;
                let spec = if mode.classes.is_empty() {
                    EnumerationSpec::new(
                        parse_base(&mode.base)?,
                        parse_equiv(&mode.equiv)?,
                        parse_cover(&mode.cover)?,
                        ClassConstraint::Set(ext.scope().to_vec()),
                    )
                } else {
                    build_spec(&g, mode)?
                };
                let report = lifting::cpfv_probe(&g, &ext, &spec, lo as usize..=hi as usize, budget)?;
                Ok(pretty(&serde_json::to_value(&report)?))
            })
        }
        Command::Verify { suite, group, r } => {
            let opts = SuiteOptions {
                group: group.clone(),
                r: *r,
                budget,
            };
            let reports = verify::run_suite(suite, &opts)?;
            let mut all_pass = true;
            let mut out = String::new();
            for report in &reports {
                out.push_str(&format!("suite {}\n", report.name));
                for line in &report.lines {
                    out.push_str(line);
                    out.push('\n');
                }
                all_pass &= report.passed;
            }
            out.push_str(if all_pass { "PASS\n" } else { "FAIL\n" });
            write_out(cli, out.as_bytes())?;
            if all_pass {
                Ok(())
            } else {
                Err(Error::PreconditionViolation("verification suite failed".into()))
            }
        }
    }
}

/// Semicolon-separated generator cycle strings, e.g. `(1 2 3); (1 2)`.
fn parse_subgroup(g: &Arc<PermGroup>, text: &str) -> Result<Arc<PermGroup>, Error> {
    let gens: Vec<Perm> = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| Perm::parse_cycles(s, g.degree()))
        .collect::<Result<_, _>>()?;
    g.subgroup_generated(&gens)
}
