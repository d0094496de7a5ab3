//! Permutations of the alphabet `{0, .., d-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

pub type Letter = u8;

/// A permutation stored as its image array: `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Letter>", into = "Vec<Letter>")]
pub struct Permutation {
    images: Vec<Letter>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation { images: (0..d as Letter).collect() }
    }

    pub fn from_images(images: Vec<Letter>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if (x as usize) >= d || seen[x as usize] {
                return input(format!("not a permutation: {images:?}"));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of degree `d` from disjoint cycles.
    pub fn from_cycles(d: usize, cycles: &[&[Letter]]) -> Result<Self> {
        let mut images: Vec<Letter> = (0..d as Letter).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if (x as usize) >= d || (y as usize) >= d {
                    return input(format!("cycle {cycle:?} out of range for d={d}"));
                }
                images[x as usize] = y;
            }
        }
        Self::from_images(images)
    }

    /// The 3-cycle `x -> y -> z -> x`.
    pub fn three_cycle(d: usize, x: Letter, y: Letter, z: Letter) -> Self {
        Self::from_cycles(d, &[&[x, y, z]]).expect("valid 3-cycle")
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Letter] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: Letter) -> Letter {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as Letter;
        }
        Permutation { images }
    }

    pub fn is_even(&self) -> bool {
        let d = self.images.len();
        let mut seen = vec![false; d];
        let mut transpositions = 0;
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }

    /// An even permutation sending `x` to `y` and fixing every letter in
    /// `fixed`: the identity or a 3-cycle `(x y z)`. `None` if no free `z`.
    pub fn even_mapping(d: usize, x: Letter, y: Letter, fixed: &[Letter]) -> Option<Permutation> {
        if x == y {
            return Some(Self::identity(d));
        }
        if fixed.contains(&x) || fixed.contains(&y) {
            return None;
        }
        (0..d as Letter)
            .find(|z| *z != x && *z != y && !fixed.contains(z))
            .map(|z| Self::three_cycle(d, x, y, z))
    }

    /// All even permutations of degree `d`, in lexicographic order of images.
    pub fn alternating_group(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<Letter> = (0..d as Letter).collect();
        permute_all(&mut images, 0, &mut out);
        out.retain(|p| p.is_even());
        out.sort();
        out
    }
}

fn permute_all(images: &mut Vec<Letter>, k: usize, out: &mut Vec<Permutation>) {
    if k == images.len() {
        out.push(Permutation { images: images.clone() });
        return;
    }
    for i in k..images.len() {
        images.swap(k, i);
        permute_all(images, k + 1, out);
        images.swap(k, i);
    }
}

impl TryFrom<Vec<Letter>> for Permutation {
    type Error = crate::error::Error;
    fn try_from(v: Vec<Letter>) -> Result<Self> {
        Permutation::from_images(v)
    }
}

impl From<Permutation> for Vec<Letter> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Image-array notation, e.g. `[1 2 0 3 4]`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_images() {
        let c = Permutation::three_cycle(5, 0, 1, 2);
        assert_eq!(c.images(), &[1, 2, 0, 3, 4]);
        assert!(c.is_even());
        assert_eq!(c.compose(&c).compose(&c), Permutation::identity(5));
    }

    #[test]
    fn parity() {
        let t = Permutation::from_cycles(5, &[&[0, 1]]).unwrap();
        assert!(!t.is_even());
        assert!(t.compose(&Permutation::from_cycles(5, &[&[2, 3]]).unwrap()).is_even());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn alternating_group_order() {
        assert_eq!(Permutation::alternating_group(5).len(), 60);
        assert_eq!(Permutation::alternating_group(4).len(), 12);
    }

    #[test]
    fn even_mapping_respects_fixed() {
        let p = Permutation::even_mapping(5, 1, 3, &[0, 2]).unwrap();
        assert_eq!(p.apply(1), 3);
        assert_eq!(p.apply(0), 0);
        assert_eq!(p.apply(2), 2);
        assert!(p.is_even());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = Permutation::from_cycles(6, &[&[0, 3, 5], &[1, 2]]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
    }
}
