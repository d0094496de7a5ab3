//! Gray code cylinders as clopen sets of the path space.

use std::collections::BTreeSet;

use crate::bratteli::{ClopenSet, Diagram, PathPrefix, Vertex};
use crate::boundary::{GraySegment, TildePoint};
use crate::error::Result;
use crate::schreier::{piece_window, PieceCode};

/// The cylinder `C_{I,p}` of points whose piece over the window
/// `[-left, right]` is isomorphic to that of `p`.
///
/// Paths are refined until every point of the cylinder has the same piece;
/// smaller windows prune branches early.
pub fn gray_cylinder(d: usize, p: &TildePoint, left: usize, right: usize) -> Result<ClopenSet> {
    let dg = Diagram::new(d)?;
    let target = piece_window(d, p, left, right)?;
    let steps = left.max(right);
    let windows: Vec<(usize, usize)> = (0..=steps).map(|k| (k.min(left), k.min(right))).collect();
    let codes: Vec<PieceCode> = windows.iter().map(|&(l, r)| target.restrict(l, r).code()).collect();
    let mut members = BTreeSet::new();
    let mut stack = vec![PathPrefix::root()];
    while let Some(eta) = stack.pop() {
        let rep = dg.representative(&eta);
        let mut refine = false;
        let mut accept = false;
        for (k, &(l, r)) in windows.iter().enumerate() {
            let seg = GraySegment::window(&rep.gray(), l, r);
            if !homogeneous(&eta, &seg) {
                refine = true;
                break;
            }
            if piece_window(d, &rep, l, r)?.code() != codes[k] {
                break;
            }
            if k == steps {
                accept = true;
            }
        }
        if accept {
            members.insert(eta);
        } else if refine {
            stack.extend(dg.children(&eta));
        }
    }
    Ok(ClopenSet::from_cylinders(&dg, members))
}

/// Every point of `C_η` has the same piece over the segment computed from
/// the cylinder's representative: all visible letters are fixed by `η`, or,
/// below an `(ab,0)` vertex, sit at the pair playing the role of `ω, ω+1`.
fn homogeneous(eta: &PathPrefix, seg: &GraySegment) -> bool {
    let depth = eta.depth();
    let (deepest, omega) = seg.deepest_visible();
    match eta.end {
        Vertex::Top => false,
        Vertex::V { star: true, .. } => !omega && deepest <= depth + 2,
        Vertex::V { star: false, .. } => deepest <= depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::sample_corpus;
    use crate::schreier::gray_piece;

    #[test]
    fn membership_matches_direct_codes() {
        let d = 5;
        let dg = Diagram::new(d).unwrap();
        let corpus = sample_corpus(d, 60, 11);
        for p in corpus.iter().take(4) {
            let cyl = gray_cylinder(d, p, 2, 2).unwrap();
            let code = gray_piece(d, p, 2).unwrap().code();
            assert!(cyl.contains_point(&dg, p));
            for q in &corpus {
                let same = gray_piece(d, q, 2).unwrap().code() == code;
                assert_eq!(cyl.contains_point(&dg, q), same, "{p} vs {q}");
            }
        }
    }
}
