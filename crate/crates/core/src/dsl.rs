//! The group description language.
//!
//! Grammar: `S<n>`, `A<n>`, `D<n>`, `C<n>`, `GDih(n1,...,nk)`,
//! `perm(<degree>; <cycles>, <cycles>, ...)`. Whitespace inside parentheses
//! is insignificant.

use std::sync::Arc;

use crate::error::Error;
use crate::group::{PermGroup, DEFAULT_ORDER_CAP};
use crate::perm::Perm;

pub fn parse_group_spec(spec: &str) -> Result<Arc<PermGroup>, Error> {
    parse_group_spec_capped(spec, DEFAULT_ORDER_CAP)
}

pub fn parse_group_spec_capped(spec: &str, cap: u64) -> Result<Arc<PermGroup>, Error> {
    let s = spec.trim();
    if let Some(rest) = s.strip_prefix("perm") {
        return parse_explicit(rest.trim_start(), cap);
    }
    if let Some(rest) = s.strip_prefix("GDih") {
        return parse_gdih(rest.trim_start(), cap);
    }
    let mut chars = s.chars();
    let family = chars.next().ok_or_else(|| Error::Parse("empty group spec".into()))?;
    let num = chars.as_str();
    let n: u16 = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad group spec {s:?}")))?;
    match family {
        'S' => symmetric(n, cap),
        'A' => alternating(n, cap),
        'C' => cyclic(n, cap),
        'D' => dihedral(n, cap),
        _ => Err(Error::Parse(format!("unknown group family {family:?} in {s:?}"))),
    }
}

fn symmetric(n: u16, cap: u64) -> Result<Arc<PermGroup>, Error> {
    if n == 0 {
        return Err(Error::Parse("S0 is not supported; degree must be >= 1".into()));
    }
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Perm::parse_cycles("(1 2)", n)?);
    }
    if n >= 3 {
        gens.push(full_cycle(1, n));
    }
    PermGroup::from_generators(format!("S{n}"), n, gens, cap)
}

fn alternating(n: u16, cap: u64) -> Result<Arc<PermGroup>, Error> {
    if n == 0 {
        return Err(Error::Parse("A0 is not supported; degree must be >= 1".into()));
    }
    let mut gens = Vec::new();
    if n >= 3 {
        gens.push(Perm::parse_cycles("(1 2 3)", n)?);
    }
    if n >= 4 {
        // (1 2 ... n) is even iff n is odd; otherwise use (2 3 ... n).
        if n % 2 == 1 {
            gens.push(full_cycle(1, n));
        } else {
            gens.push(full_cycle(2, n));
        }
    }
    PermGroup::from_generators(format!("A{n}"), n, gens, cap)
}

fn cyclic(n: u16, cap: u64) -> Result<Arc<PermGroup>, Error> {
    if n == 0 {
        return Err(Error::Parse("C0 is not a group; order must be >= 1".into()));
    }
    let gens = if n == 1 { vec![] } else { vec![full_cycle(1, n)] };
    PermGroup::from_generators(format!("C{n}"), n, gens, cap)
}

fn dihedral(n: u16, cap: u64) -> Result<Arc<PermGroup>, Error> {
    if n < 3 {
        return Err(Error::Parse(format!(
            "D{n}: the rotation/reflection action on {n} points is not faithful; use n >= 3"
        )));
    }
    let rotation = full_cycle(1, n);
    // Reflection fixing point 1: i -> n + 2 - i.
    let mut images = vec![0u16; n as usize];
    for i in 1..=n {
        let j = if i == 1 { 1 } else { n + 2 - i };
        images[(i - 1) as usize] = j - 1;
    }
    let reflection = Perm::from_images(images)?;
    PermGroup::from_generators(format!("D{n}"), n, vec![rotation, reflection], cap)
}

/// `(C_{n1} x ... x C_{nk}) : Z/2` with the involution acting by inversion,
/// in the regular action on the abelian part.
fn parse_gdih(rest: &str, cap: u64) -> Result<Arc<PermGroup>, Error> {
    let inner = strip_parens(rest)?;
    let ns: Vec<u32> = inner
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad GDih component {tok:?}")))
        })
        .collect::<Result<_, _>>()?;
    if ns.is_empty() || ns.iter().any(|&n| n == 0) {
        return Err(Error::Parse("GDih needs positive components".into()));
    }
    if ns.iter().all(|&n| n <= 2) {
        return Err(Error::Parse(
            "GDih(...): inversion is trivial when every component has order <= 2, \
             so the action on the abelian part is not faithful; use a component > 2"
                .into(),
        ));
    }
    let degree_u32: u32 = ns.iter().product();
    if degree_u32 as u64 > cap || degree_u32 > u16::MAX as u32 {
        return Err(Error::CapExceeded {
            what: "group order",
            size: 2 * degree_u32 as u64,
            cap,
        });
    }
    let degree = degree_u32 as u16;
    // Points are mixed-radix digits over the component orders.
    let encode = |digits: &[u32]| -> u16 {
        let mut x = 0u32;
        for (d, &n) in digits.iter().zip(&ns) {
            x = x * n + d;
        }
        x as u16
    };
    let decode = |mut x: u32| -> Vec<u32> {
        let mut digits = vec![0u32; ns.len()];
        for i in (0..ns.len()).rev() {
            digits[i] = x % ns[i];
            x /= ns[i];
        }
        digits
    };
    let mut gens = Vec::new();
    for axis in 0..ns.len() {
        if ns[axis] == 1 {
            continue;
        }
        let mut images = vec![0u16; degree as usize];
        for x in 0..degree as u32 {
            let mut digits = decode(x);
            digits[axis] = (digits[axis] + 1) % ns[axis];
            images[x as usize] = encode(&digits);
        }
        gens.push(Perm::from_images(images)?);
    }
    let mut inv_images = vec![0u16; degree as usize];
    for x in 0..degree as u32 {
        let digits = decode(x);
        let neg: Vec<u32> = digits
            .iter()
            .zip(&ns)
            .map(|(&d, &n)| (n - d) % n)
            .collect();
        inv_images[x as usize] = encode(&neg);
    }
    gens.push(Perm::from_images(inv_images)?);
    let name = format!(
        "GDih({})",
        ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
    );
    PermGroup::from_generators(name, degree, gens, cap)
}

fn parse_explicit(rest: &str, cap: u64) -> Result<Arc<PermGroup>, Error> {
    let inner = strip_parens(rest)?;
    let Some((deg_text, gens_text)) = inner.split_once(';') else {
        return Err(Error::Parse("perm(...) needs `degree; generators`".into()));
    };
    let degree: u16 = deg_text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree {deg_text:?}")))?;
    if degree == 0 {
        return Err(Error::Parse("degree must be >= 1".into()));
    }
    let mut gens = Vec::new();
    for part in split_top_level(gens_text) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        gens.push(Perm::parse_cycles(part, degree)?);
    }
    let canonical = format!(
        "perm({}; {})",
        degree,
        gens.iter().map(|g| g.cycle_string()).collect::<Vec<_>>().join(", ")
    );
    PermGroup::from_generators(canonical, degree, gens, cap)
}

/// Splits on commas that are not inside parentheses.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn strip_parens(text: &str) -> Result<&str, Error> {
    let t = text.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return Err(Error::Parse(format!("expected parenthesized argument list, got {t:?}")));
    }
    Ok(&t[1..t.len() - 1])
}

fn full_cycle(from: u16, to: u16) -> Perm {
    let degree = to;
    let mut images: Vec<u16> = (0..degree).collect();
    for i in from..=to {
        let next = if i == to { from } else { i + 1 };
        images[(i - 1) as usize] = next - 1;
    }
    Perm::from_images(images).expect("full cycle is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_families() {
        assert_eq!(parse_group_spec("S3").unwrap().order(), 6);
        assert_eq!(parse_group_spec("S3").unwrap().degree(), 3);
        assert_eq!(parse_group_spec("D5").unwrap().order(), 10);
        assert_eq!(parse_group_spec("C4").unwrap().order(), 4);
        assert_eq!(parse_group_spec("A4").unwrap().order(), 12);
        assert_eq!(parse_group_spec("A5").unwrap().order(), 60);
        assert_eq!(parse_group_spec("S4").unwrap().order(), 24);
        assert_eq!(parse_group_spec("S1").unwrap().order(), 1);
        assert_eq!(parse_group_spec("C1").unwrap().order(), 1);
    }

    #[test]
    fn explicit_generators() {
        let g = parse_group_spec("perm(4; (1 2 3), (1 2)(3 4))").unwrap();
        assert_eq!(g.order(), 12); // alternating on 4 points
        assert_eq!(g.degree(), 4);
        // whitespace-insensitive inside parens
        let g2 = parse_group_spec("perm( 4 ;(1 2 3),(1 2)( 3 4 ) )").unwrap();
        assert_eq!(g2.order(), 12);
    }

    #[test]
    fn gdih_regular_action() {
        let g = parse_group_spec("GDih(5)").unwrap();
        assert_eq!(g.order(), 10); // same abstract group as D5
        let g = parse_group_spec("GDih(3,3)").unwrap();
        assert_eq!(g.order(), 18);
        assert_eq!(g.degree(), 9);
        assert!(parse_group_spec("GDih(2,2)").is_err());
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(parse_group_spec("X7").is_err());
        assert!(parse_group_spec("S").is_err());
        assert!(parse_group_spec("perm(3; (1 4))").is_err());
        assert!(parse_group_spec("perm(3 (1 2))").is_err());
        assert!(parse_group_spec("D2").is_err());
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            parse_group_spec_capped("S6", 500),
            Err(Error::CapExceeded { .. })
        ));
    }
}
