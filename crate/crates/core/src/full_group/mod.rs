//! Elements of the topological full group `[[M]]` as finite tables of
//! (clopen set, group word), the `η` elements, Gray code cylinders as clopen
//! sets, and the constructive gadgets used in the simplicity and finite
//! generation arguments.

mod cylinders;
mod separation;
mod triplets;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bratteli::{ClopenSet, Diagram};
use crate::boundary::TildePoint;
use crate::error::{Error, Result};
use crate::word::GroupWord;

pub use cylinders::gray_cylinder;
pub use separation::{
    class_histogram, first_difference, fixing_letters, three_cycle_letters, move_generator, sample_pairs, SubshiftClass,
    brieussel_witness, loop_class, separation_search, stabilizer_separation, subshift_partition, BrieusselWitness,
    Separation, StabilizerWitness,
};
pub use triplets::{
    STilde,
    commutator_trick_check, convenient_pairs, generating_set_t, replay_from_t, CommutatorReport, ConvenientTriplet,
    GeneratingSetT, ReplayReport, TKey,
};

/// Default bound for order computations.
pub const ORDER_BOUND: usize = 360;

/// A homeomorphism of the path space acting on each clopen piece of a
/// partition by a group element.
#[derive(Clone)]
pub struct PiecewiseElement {
    diagram: Diagram,
    pieces: Vec<(ClopenSet, GroupWord)>,
}

impl PiecewiseElement {
    pub fn identity(d: usize) -> PiecewiseElement {
        PiecewiseElement { diagram: Diagram { d }, pieces: vec![(ClopenSet::full(), GroupWord::identity(d))] }
    }

    /// Builds and validates an element from its table.
    pub fn new(d: usize, pieces: Vec<(ClopenSet, GroupWord)>) -> Result<PiecewiseElement> {
        let el = Self::raw(d, pieces);
        el.validate()?;
        Ok(el)
    }

    fn raw(d: usize, pieces: Vec<(ClopenSet, GroupWord)>) -> PiecewiseElement {
        let mut el = PiecewiseElement { diagram: Diagram { d }, pieces: Vec::new() };
        for (u, g) in pieces {
            el.push_merged(u, g);
        }
        el
    }

    /// Adds a piece, merging it into an existing piece with an equal word.
    fn push_merged(&mut self, u: ClopenSet, g: GroupWord) {
        if u.is_empty() {
            return;
        }
        let g = if g.is_identity() { GroupWord::identity(self.diagram.d) } else { g.normalized() };
        for (v, h) in self.pieces.iter_mut() {
            if h == &g || h.equals(&g) {
                *v = v.union(&self.diagram, &u);
                return;
            }
        }
        self.pieces.push((u, g));
    }

    pub fn degree(&self) -> usize {
        self.diagram.d
    }

    pub fn pieces(&self) -> &[(ClopenSet, GroupWord)] {
        &self.pieces
    }

    /// Domains and images both partition the space.
    pub fn validate(&self) -> Result<()> {
        let dg = &self.diagram;
        let images: Vec<ClopenSet> = self.pieces.iter().map(|(u, g)| u.image(dg, g)).collect();
        for (name, sets) in [("domains", self.pieces.iter().map(|(u, _)| u.clone()).collect::<Vec<_>>()), ("images", images)] {
            let mut acc = ClopenSet::empty();
            for (i, s) in sets.iter().enumerate() {
                if !acc.is_disjoint(dg, s) {
                    return Err(Error::Input(format!("{name} overlap at piece {i}")));
                }
                acc = acc.union(dg, s);
            }
            if !acc.is_full() {
                return Err(Error::Input(format!("{name} do not cover the space; missing {}", acc.complement(dg))));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, p: &TildePoint) -> TildePoint {
        for (u, g) in &self.pieces {
            if u.contains_point(&self.diagram, p) {
                return p.act(g);
            }
        }
        unreachable!("pieces cover the space")
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &PiecewiseElement) -> PiecewiseElement {
        let dg = &self.diagram;
        let mut out = PiecewiseElement { diagram: dg.clone(), pieces: Vec::new() };
        for (u, g) in &other.pieces {
            let gu = u.image(dg, g);
            for (v, h) in &self.pieces {
                let meet = gu.intersect(dg, v);
                if meet.is_empty() {
                    continue;
                }
                out.push_merged(meet.image(dg, &g.inverse()), h.mul(g));
            }
        }
        out
    }

    pub fn inverse(&self) -> PiecewiseElement {
        let dg = &self.diagram;
        let pieces = self.pieces.iter().map(|(u, g)| (u.image(dg, g), g.inverse())).collect();
        Self::raw(dg.d, pieces)
    }

    pub fn pow(&self, k: usize) -> PiecewiseElement {
        let mut acc = Self::identity(self.diagram.d);
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &PiecewiseElement) -> PiecewiseElement {
        self.compose(other).compose(&self.inverse()).compose(&other.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.iter().all(|(u, g)| u.fixed_pointwise_by(&self.diagram, g))
    }

    /// Equality as homeomorphisms: on every overlap of pieces the two words
    /// agree pointwise.
    pub fn equals(&self, other: &PiecewiseElement) -> bool {
        let dg = &self.diagram;
        for (u, g) in &self.pieces {
            for (v, h) in &other.pieces {
                let meet = u.intersect(dg, v);
                if !meet.is_empty() && !meet.fixed_pointwise_by(dg, &h.inverse().mul(g)) {
                    return false;
                }
            }
        }
        true
    }

    /// Clopen set of points that are moved.
    pub fn support(&self) -> ClopenSet {
        let dg = &self.diagram;
        let mut fixed = ClopenSet::empty();
        for (u, g) in &self.pieces {
            for m in u.members() {
                fixed = fixed.union(dg, &dg.fixed_part(g, m));
            }
        }
        fixed.complement(dg)
    }

    /// Least `k <= bound` with `self^k = id`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = self.compose(&acc);
        }
        None
    }

    pub fn to_json(&self) -> PiecewiseJson {
        PiecewiseJson {
            d: self.diagram.d,
            pieces: self.pieces.iter().map(|(u, g)| (u.to_string(), g.to_string())).collect(),
        }
    }

    pub fn from_json(json: &PiecewiseJson) -> Result<PiecewiseElement> {
        let dg = Diagram::new(json.d)?;
        let pieces = json
            .pieces
            .iter()
            .map(|(u, g)| Ok((ClopenSet::parse(&dg, u)?, GroupWord::parse(json.d, g)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.d, pieces)
    }
}

impl fmt::Debug for PiecewiseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pieces.iter().map(|(u, g)| format!("{u} -> {g}"))).finish()
    }
}

/// Text form of a [`PiecewiseElement`]: one `(clopen set, word)` pair per piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseJson {
    pub d: usize,
    pub pieces: Vec<(String, String)>,
}

/// `(U, g, h)` is admissible when `U`, `g⁻¹U` and `hU` are disjoint.
pub fn check_admissible(dg: &Diagram, u: &ClopenSet, g: &GroupWord, h: &GroupWord) -> Result<()> {
    let gu = u.image(dg, &g.inverse());
    let hu = u.image(dg, h);
    for (a, b, what) in [(u, &gu, "U ∩ g⁻¹U"), (u, &hu, "U ∩ hU"), (&gu, &hu, "g⁻¹U ∩ hU")] {
        let meet = a.intersect(dg, b);
        if !meet.is_empty() {
            return Err(Error::Input(format!("triplet is not admissible: {what} = {meet}")));
        }
    }
    Ok(())
}

/// `η_{U,g,h}`: acts as `g`, `h`, `g⁻¹h⁻¹` on `g⁻¹U`, `U`, `hU`.
pub fn eta(d: usize, u: &ClopenSet, g: &GroupWord, h: &GroupWord) -> Result<PiecewiseElement> {
    let dg = Diagram::new(d)?;
    check_admissible(&dg, u, g, h)?;
    let gu = u.image(&dg, &g.inverse());
    let hu = u.image(&dg, h);
    let rest = gu.union(&dg, u).union(&dg, &hu).complement(&dg);
    let pieces = vec![
        (gu, g.clone()),
        (u.clone(), h.clone()),
        (hu, g.inverse().mul(&h.inverse())),
        (rest, GroupWord::identity(d)),
    ];
    Ok(PiecewiseElement::raw(d, pieces))
}

/// Exchanges `C` and `gC` for every listed pair; identity elsewhere.
pub fn build_swap(d: usize, pairs: &[(ClopenSet, GroupWord)]) -> Result<PiecewiseElement> {
    let dg = Diagram::new(d)?;
    let mut used = ClopenSet::empty();
    let mut pieces = Vec::new();
    for (c, g) in pairs {
        let gc = c.image(&dg, g);
        for s in [c, &gc] {
            if !used.is_disjoint(&dg, s) {
                return Err(Error::Input(format!("swap sets overlap at {s}")));
            }
            used = used.union(&dg, s);
        }
        pieces.push((c.clone(), g.clone()));
        pieces.push((gc, g.inverse()));
    }
    pieces.push((used.complement(&dg), GroupWord::identity(d)));
    Ok(PiecewiseElement::raw(d, pieces))
}

/// The 3-cycle `V₁ → V₂ = g₁V₁ → V₃ = g₂V₂ → V₁`.
pub fn build_3cycle(d: usize, v1: &ClopenSet, g1: &GroupWord, g2: &GroupWord) -> Result<PiecewiseElement> {
    let dg = Diagram::new(d)?;
    let v2 = v1.image(&dg, g1);
    eta(d, &v2, g1, g2)
}

/// Writes the 3-cycle built from `(V₁, g₁, g₂)` as `[k₁, k₂]` with `k₁` the
/// swap `V₁ ↔ V₂` and `k₂` the swap `V₂ ↔ V₃` (or the other way round).
pub fn three_cycle_as_commutator(
    d: usize,
    v1: &ClopenSet,
    g1: &GroupWord,
    g2: &GroupWord,
) -> Result<(PiecewiseElement, PiecewiseElement)> {
    let dg = Diagram::new(d)?;
    let c = build_3cycle(d, v1, g1, g2)?;
    let v2 = v1.image(&dg, g1);
    let k1 = build_swap(d, &[(v1.clone(), g1.clone())])?;
    let k2 = build_swap(d, &[(v2, g2.clone())])?;
    if k1.commutator(&k2).equals(&c) {
        Ok((k1, k2))
    } else if k2.commutator(&k1).equals(&c) {
        Ok((k2, k1))
    } else {
        Err(Error::Diagnostic("no ordering of the two swaps gives the 3-cycle".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bratteli::PathPrefix;
    use crate::generator::Generator;
    use crate::perm::Permutation;

    fn a(x: u8, y: u8, z: u8) -> GroupWord {
        GroupWord::from_generator(5, Generator::a(Permutation::three_cycle(5, x, y, z)).unwrap())
    }

    fn cyl(s: &str) -> ClopenSet {
        ClopenSet::parse(&Diagram { d: 5 }, s).unwrap()
    }

    #[test]
    fn eta_has_order_three() {
        // U = words starting with 1; g⁻¹U starts with 0, hU starts with 2.
        let u = ClopenSet::from_cylinders(&Diagram { d: 5 }, Diagram { d: 5 }.children(&PathPrefix::root()).into_iter().filter(|c| c.labels == [1]));
        let g = a(0, 1, 4);
        let h = a(1, 2, 3);
        let e = eta(5, &u, &g, &h).unwrap();
        e.validate().unwrap();
        assert_eq!(e.order(ORDER_BOUND), Some(3));
        let p = TildePoint::parse(5, "14|(3)").unwrap();
        assert_eq!(e.evaluate(&p), p.act(&h));
        assert!(e.compose(&e.inverse()).is_identity());
    }

    #[test]
    fn empty_eta_is_identity() {
        let e = eta(5, &ClopenSet::empty(), &a(0, 1, 2), &a(2, 3, 4)).unwrap();
        assert!(e.is_identity());
        assert!(e.support().is_empty());
    }

    #[test]
    fn non_admissible_is_rejected() {
        assert!(eta(5, &cyl("1@21*"), &a(0, 2, 3), &a(0, 2, 3)).is_err());
    }

    #[test]
    fn swaps_and_three_cycles() {
        let v1 = cyl("1@21*");
        let g1 = a(1, 2, 3);
        let g2 = a(2, 3, 4);
        let s = build_swap(5, &[(v1.clone(), g1.clone())]).unwrap();
        assert_eq!(s.order(ORDER_BOUND), Some(2));
        let c = build_3cycle(5, &v1, &g1, &g2).unwrap();
        assert_eq!(c.order(ORDER_BOUND), Some(3));
        let (k1, k2) = three_cycle_as_commutator(5, &v1, &g1, &g2).unwrap();
        assert!(k1.commutator(&k2).equals(&c));
    }

    #[test]
    fn json_round_trip() {
        let c = build_3cycle(5, &cyl("1@21*"), &a(1, 2, 3), &a(2, 3, 4)).unwrap();
        let back = PiecewiseElement::from_json(&c.to_json()).unwrap();
        assert!(back.equals(&c));
    }
}
