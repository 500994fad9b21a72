//! C ABI over the core library.
//!
//! Groups are opaque handles created by [`nbl_group_parse`] and released by
//! [`nbl_group_free`]. Structured results come back as JSON strings owned by
//! this library; free them with [`nbl_string_free`]. Every fallible call
//! returns an [`NblStatus`]; the message for the most recent failure on the
//! current thread is available via [`nbl_last_error`].
//!
//! The matching header is maintained by hand at `include/nbl.h`; the
//! `header_matches_exports` test keeps the symbol lists in sync.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::sync::Arc;

use nbl::error::Error;
use nbl::group::PermGroup;
use nbl::nielsen::{
    Base, Budget, ClassConstraint, Cover, Equivalence, EnumerationSpec, ICIProfile,
};

/// Status codes mirrored in the header; keep the discriminants stable.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NblStatus {
    Ok = 0,
    InvalidInput = 1,
    BudgetExceeded = 2,
    InternalError = 3,
    NullPointer = 4,
}

pub struct NblGroup {
    group: Arc<PermGroup>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn status_of(err: &Error) -> NblStatus {
    match err.exit_code() {
        2 => NblStatus::BudgetExceeded,
        _ => NblStatus::InvalidInput,
    }
}

fn fail(err: &Error) -> NblStatus {
    set_error(&err.to_string());
    status_of(err)
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, NblStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(NblStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        NblStatus::InvalidInput
    })
}

fn give_string(out: *mut *mut c_char, text: String) -> NblStatus {
    if out.is_null() {
        set_error("null output pointer");
        return NblStatus::NullPointer;
    }
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            NblStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL byte");
            NblStatus::InternalError
        }
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn nbl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn nbl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses a group description (`S5`, `D7`, `GDih(3,3)`,
/// `perm(4; (1 2 3), (1 2)(3 4))`, ...) into an owned handle.
#[no_mangle]
pub unsafe extern "C" fn nbl_group_parse(spec: *const c_char, out: *mut *mut NblGroup) -> NblStatus {
    if out.is_null() {
        set_error("null output pointer");
        return NblStatus::NullPointer;
    }
    let spec = match read_str(spec) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match nbl::dsl::parse_group_spec(spec) {
        Ok(group) => {
            *out = Box::into_raw(Box::new(NblGroup { group }));
            NblStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn nbl_group_free(group: *mut NblGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

#[no_mangle]
pub unsafe extern "C" fn nbl_group_order(group: *const NblGroup) -> u64 {
    group.as_ref().map(|g| g.group.order()).unwrap_or(0)
}

#[no_mangle]
pub unsafe extern "C" fn nbl_group_degree(group: *const NblGroup) -> u32 {
    group.as_ref().map(|g| g.group.degree() as u32).unwrap_or(0)
}

#[no_mangle]
pub unsafe extern "C" fn nbl_group_class_count(group: *const NblGroup) -> u32 {
    group
        .as_ref()
        .map(|g| g.group.class_table().class_count() as u32)
        .unwrap_or(0)
}

/// Conjugacy classes as JSON: `[{"id", "rep", "size", "element_order"}, ...]`.
#[no_mangle]
pub unsafe extern "C" fn nbl_classes_json(group: *const NblGroup, out: *mut *mut c_char) -> NblStatus {
    let Some(handle) = group.as_ref() else {
        set_error("null group handle");
        return NblStatus::NullPointer;
    };
    let g = &handle.group;
    let table = g.class_table();
    let rows: Vec<serde_json::Value> = table
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            serde_json::json!({
                "id": i,
                "rep": g.perm(c.rep()).cycle_string(),
                "size": c.size(),
                "element_order": g.perm(c.rep()).order(),
            })
        })
        .collect();
    give_string(out, serde_json::json!({ "classes": rows }).to_string())
}

/// Enumeration options for [`nbl_components_json`], parsed from JSON:
/// `{"base": "p1"|"a1", "equiv": "marked"|"unmarked",
///   "cover": "any"|"galois"|"degree-d", "classes": "all"|["(1 2)", ...]}`.
fn spec_from_json(g: &Arc<PermGroup>, text: &str) -> Result<EnumerationSpec, Error> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let base = match v["base"].as_str().unwrap_or("p1") {
        "p1" => Base::Projective,
        "a1" => Base::Affine,
        other => return Err(Error::Parse(format!("bad base {other:?}"))),
    };
    let equiv = match v["equiv"].as_str().unwrap_or("marked") {
        "marked" => Equivalence::Marked,
        "unmarked" => Equivalence::Unmarked,
        other => return Err(Error::Parse(format!("bad equiv {other:?}"))),
    };
    let cover = match v["cover"].as_str().unwrap_or("any") {
        "any" => Cover::Any,
        "galois" => Cover::Galois,
        "degree-d" => Cover::DegreeD,
        other => return Err(Error::Parse(format!("bad cover {other:?}"))),
    };
    let classes = match &v["classes"] {
        serde_json::Value::Null => ClassConstraint::All,
        serde_json::Value::String(s) if s == "all" => ClassConstraint::All,
        serde_json::Value::Array(items) => {
            let table = g.class_table();
            let mut ids = Vec::new();
            for item in items {
                let cycles = item
                    .as_str()
                    .ok_or_else(|| Error::Parse("classes entries must be strings".into()))?;
                let p = nbl::perm::Perm::parse_cycles(cycles, g.degree())?;
                let id = g.id_of(&p).ok_or_else(|| Error::ForeignElement {
                    element: p.cycle_string(),
                    group: g.name().to_string(),
                })?;
                ids.push(table.class_of(id));
            }
            ids.sort_unstable();
            ids.dedup();
            ClassConstraint::Set(ids)
        }
        other => return Err(Error::Parse(format!("bad classes {other}"))),
    };
    Ok(EnumerationSpec::new(base, equiv, cover, classes))
}

/// Braid-orbit components of the degree-`r` Nielsen set under the JSON
/// options (pass NULL for the defaults). Result mirrors the CLI record:
/// `{"component_count", "components": [{"id", "r", "orbit_size",
///   "canonical_rep", "group_order", "group_class_id", "ici"}, ...]}`.
#[no_mangle]
pub unsafe extern "C" fn nbl_components_json(
    group: *const NblGroup,
    r: u32,
    options_json: *const c_char,
    out: *mut *mut c_char,
) -> NblStatus {
    let Some(handle) = group.as_ref() else {
        set_error("null group handle");
        return NblStatus::NullPointer;
    };
    let g = &handle.group;
    let spec = if options_json.is_null() {
        EnumerationSpec::new(Base::Projective, Equivalence::Marked, Cover::Any, ClassConstraint::All)
    } else {
        let text = match read_str(options_json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match spec_from_json(g, text) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        }
    };
    match nbl::orbit::decompose_components(g, r as usize, &spec, Budget::default()) {
        Ok(comps) => {
            let rows: Vec<serde_json::Value> = comps
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "id": c.content_id(),
                        "r": c.r(),
                        "orbit_size": c.orbit_size(),
                        "canonical_rep": c.rep().cycle_strings(),
                        "group_order": c.group_order(),
                        "group_class_id": c.group_class(),
                        "ici": c.ici().to_named(g),
                    })
                })
                .collect();
            give_string(
                out,
                serde_json::json!({
                    "component_count": rows.len(),
                    "components": rows,
                })
                .to_string(),
            )
        }
        Err(e) => fail(&e),
    }
}

/// Component counts for r in `[r_min, r_max]` as CSV with an `r,count`
/// header, matching the CLI `series` output.
#[no_mangle]
pub unsafe extern "C" fn nbl_series_csv(
    group: *const NblGroup,
    r_min: u32,
    r_max: u32,
    options_json: *const c_char,
    out: *mut *mut c_char,
) -> NblStatus {
    let Some(handle) = group.as_ref() else {
        set_error("null group handle");
        return NblStatus::NullPointer;
    };
    let g = &handle.group;
    let spec = if options_json.is_null() {
        EnumerationSpec::new(Base::Projective, Equivalence::Marked, Cover::Any, ClassConstraint::All)
    } else {
        let text = match read_str(options_json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match spec_from_json(g, text) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        }
    };
    let (series, err) = nbl::series::count_series(g, &spec, r_min..=r_max, Budget::default());
    if let Some(e) = err {
        return fail(&e);
    }
    give_string(out, series.to_csv())
}

/// Global rationality of a class multiset given as JSON
/// (`{"(1 2 3)": 2, ...}`); result carries the verdict and any witness.
#[no_mangle]
pub unsafe extern "C" fn nbl_rational_json(
    group: *const NblGroup,
    ici_json: *const c_char,
    out: *mut *mut c_char,
) -> NblStatus {
    let Some(handle) = group.as_ref() else {
        set_error("null group handle");
        return NblStatus::NullPointer;
    };
    let g = &handle.group;
    let text = match read_str(ici_json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let named: std::collections::BTreeMap<String, u64> = match serde_json::from_str(text) {
        Ok(m) => m,
        Err(e) => return fail(&Error::Json(e)),
    };
    let table = g.class_table();
    let mut counts = Vec::new();
    for (cycles, count) in named {
        let p = match nbl::perm::Perm::parse_cycles(&cycles, g.degree()) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        let Some(id) = g.id_of(&p) else {
            return fail(&Error::ForeignElement {
                element: p.cycle_string(),
                group: g.name().to_string(),
            });
        };
        counts.push((table.class_of(id), count));
    }
    let profile = match ICIProfile::from_counts(counts) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let report = nbl::lifting::is_globally_rational(g, &profile);
    match serde_json::to_string(&report) {
        Ok(s) => give_string(out, s),
        Err(e) => fail(&Error::Json(e)),
    }
}

/// Frees a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn nbl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_exports() {
        let header = include_str!("../include/nbl.h");
        for symbol in [
            "nbl_last_error",
            "nbl_version",
            "nbl_group_parse",
            "nbl_group_free",
            "nbl_group_order",
            "nbl_group_degree",
            "nbl_group_class_count",
            "nbl_classes_json",
            "nbl_components_json",
            "nbl_series_csv",
            "nbl_rational_json",
            "nbl_string_free",
        ] {
            assert!(header.contains(symbol), "header misses {symbol}");
        }
    }
}
