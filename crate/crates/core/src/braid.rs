//! The braid-group action on Nielsen tuples.
//!
//! The generator `Q_i` (1-based, `1 <= i <= r-1`) replaces the adjacent pair
//! `(g_i, g_{i+1})` by `(g_i g_{i+1} g_i^{-1}, g_i)`; its inverse replaces it
//! by `(g_{i+1}, g_{i+1}^{-1} g_i g_{i+1})`. Both preserve the tuple product,
//! the class multiset of the entries, and the generated subgroup.

use crate::error::Error;
use crate::group::{ElemId, PermGroup};
use crate::nielsen::NielsenTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

pub fn apply_braid(t: &NielsenTuple, i: usize, dir: Direction) -> Result<NielsenTuple, Error> {
    let r = t.len();
    if i == 0 || i + 1 > r || r < 2 {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: r.saturating_sub(1),
        });
    }
    let g = t.group();
    let mut entries = t.entries().to_vec();
    apply_ids_in_place(g, &mut entries, i, dir);
    NielsenTuple::new(g.clone(), entries)
}

#[inline]
pub(crate) fn apply_ids_in_place(g: &PermGroup, entries: &mut [ElemId], i: usize, dir: Direction) {
    let (a, b) = (entries[i - 1], entries[i]);
    match dir {
        Direction::Forward => {
            // (a, b) -> (a b a^-1, a) = (b^a, a)
            entries[i - 1] = g.conj(b, a);
            entries[i] = a;
        }
        Direction::Inverse => {
            // (a, b) -> (b, b^-1 a b) = (b, a^(b^-1))
            entries[i - 1] = b;
            entries[i] = g.conj(a, g.inv(b));
        }
    }
}

/// Forward move into a scratch buffer, avoiding reallocation in hot loops.
#[inline]
pub(crate) fn apply_forward_ids(g: &PermGroup, entries: &[ElemId], i: usize, out: &mut Vec<ElemId>) {
    out.clear();
    out.extend_from_slice(entries);
    apply_ids_in_place(g, out, i, Direction::Forward);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_group_spec;
    use crate::nielsen::{ici, NielsenTuple};
    use proptest::prelude::*;

    #[test]
    fn fixed_point_on_equal_entries() {
        let g = parse_group_spec("S3").unwrap();
        let t = NielsenTuple::from_cycles(&g, &["(1 2)", "(1 2)"]).unwrap();
        assert_eq!(apply_braid(&t, 1, Direction::Forward).unwrap(), t);
    }

    #[test]
    fn swaps_inverse_pair_of_three_cycles() {
        let g = parse_group_spec("S3").unwrap();
        let t = NielsenTuple::from_cycles(&g, &["(1 2 3)", "(1 3 2)"]).unwrap();
        let q = apply_braid(&t, 1, Direction::Forward).unwrap();
        assert_eq!(q.cycle_strings(), vec!["(1 3 2)", "(1 2 3)"]);
    }

    #[test]
    fn q2_on_transposition_tuple() {
        let g = parse_group_spec("S3").unwrap();
        let t = NielsenTuple::from_cycles(&g, &["(1 2)", "(1 3)", "(2 3)", "(1 3)"]).unwrap();
        let q = apply_braid(&t, 2, Direction::Forward).unwrap();
        assert_eq!(q.cycle_strings(), vec!["(1 2)", "(1 2)", "(1 3)", "(1 3)"]);
    }

    #[test]
    fn index_bounds() {
        let g = parse_group_spec("S3").unwrap();
        let t = NielsenTuple::from_cycles(&g, &["(1 2)", "(1 2)"]).unwrap();
        assert!(apply_braid(&t, 0, Direction::Forward).is_err());
        assert!(apply_braid(&t, 2, Direction::Forward).is_err());
    }

    fn sample_tuples(name: &str, r: usize) -> Vec<NielsenTuple> {
        use crate::nielsen::{enumerate_nielsen, Base, Budget, ClassConstraint, Cover, Equivalence, EnumerationSpec};
        let g = parse_group_spec(name).unwrap();
        let spec = EnumerationSpec::new(
            Base::Affine,
            Equivalence::Marked,
            Cover::Any,
            ClassConstraint::All,
        );
        enumerate_nielsen(&g, r, &spec, Budget::default())
            .unwrap()
            .map(|t| t.unwrap())
            .collect()
    }

    #[test]
    fn braid_relations_exhaustive_small() {
        for t in sample_tuples("S3", 3) {
            let r = t.len();
            for i in 1..r {
                let fwd = apply_braid(&t, i, Direction::Forward).unwrap();
                let back = apply_braid(&fwd, i, Direction::Inverse).unwrap();
                assert_eq!(back, t);
            }
            for i in 1..r.saturating_sub(1) {
                let lhs = apply_braid(
                    &apply_braid(&apply_braid(&t, i, Direction::Forward).unwrap(), i + 1, Direction::Forward).unwrap(),
                    i,
                    Direction::Forward,
                )
                .unwrap();
                let rhs = apply_braid(
                    &apply_braid(&apply_braid(&t, i + 1, Direction::Forward).unwrap(), i, Direction::Forward).unwrap(),
                    i + 1,
                    Direction::Forward,
                )
                .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn braid_preserves_product_ici_and_subgroup() {
        let g = parse_group_spec("A4").unwrap();
        for t in sample_tuples("A4", 3) {
            let before_prod = t.product();
            let before_ici = ici(&t, None).unwrap();
            let before_sub = g.close_ids(t.entries());
            for i in 1..t.len() {
                for dir in [Direction::Forward, Direction::Inverse] {
                    let q = apply_braid(&t, i, dir).unwrap();
                    assert_eq!(q.product(), before_prod);
                    assert_eq!(ici(&q, None).unwrap(), before_ici);
                    assert_eq!(g.close_ids(q.entries()), before_sub);
                }
            }
        }
    }

    proptest! {
        // Relations on random tuples over a couple of groups.
        #[test]
        fn braid_relations_random(seed in 0u64..500, r in 3usize..7) {
            let g = parse_group_spec(if seed % 2 == 0 { "S4" } else { "D5" }).unwrap();
            let n = g.order() as ElemId;
            let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
            let mut entries = Vec::with_capacity(r);
            for _ in 0..r {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                entries.push(1 + (state >> 33) as ElemId % (n - 1));
            }
            let t = NielsenTuple::new(g.clone(), entries).unwrap();
            for i in 1..r {
                let fwd = apply_braid(&t, i, Direction::Forward).unwrap();
                prop_assert_eq!(apply_braid(&fwd, i, Direction::Inverse).unwrap(), t.clone());
            }
            for i in 1..r - 1 {
                for j in i + 2..r {
                    let ij = apply_braid(&apply_braid(&t, i, Direction::Forward).unwrap(), j, Direction::Forward).unwrap();
                    let ji = apply_braid(&apply_braid(&t, j, Direction::Forward).unwrap(), i, Direction::Forward).unwrap();
                    prop_assert_eq!(ij, ji);
                }
            }
        }
    }
}
