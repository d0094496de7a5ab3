//! Generators of the alternating mother group: the finite groups `A` and `B`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::perm::{Letter, Permutation};

/// An element of `B`: the automorphism `g = (g, σ_1, .., σ_{d-1}) ρ`.
///
/// `sigmas[i - 1]` is `σ_i`. On a ray it skips leading zeros, sends the first
/// non-zero letter `x` to `ρ(x)` and the following letter `y` to `σ_x(y)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BElement {
    pub rho: Permutation,
    pub sigmas: Vec<Permutation>,
}

impl BElement {
    pub fn new(rho: Permutation, sigmas: Vec<Permutation>) -> Result<Self> {
        let d = rho.degree();
        if sigmas.len() + 1 != d {
            return input(format!("B element needs {} sigmas, got {}", d - 1, sigmas.len()));
        }
        if rho.apply(0) != 0 {
            return input("rho must fix 0");
        }
        if !rho.is_even() {
            return input(format!("rho {rho} is odd"));
        }
        for (i, s) in sigmas.iter().enumerate() {
            if s.degree() != d {
                return input("sigma degree mismatch");
            }
            if !s.is_even() {
                return input(format!("sigma_{} = {s} is odd", i + 1));
            }
        }
        Ok(BElement { rho, sigmas })
    }

    pub fn identity(d: usize) -> Self {
        BElement { rho: Permutation::identity(d), sigmas: vec![Permutation::identity(d); d - 1] }
    }

    pub fn degree(&self) -> usize {
        self.rho.degree()
    }

    /// `σ_x` for `x != 0`.
    pub fn sigma(&self, x: Letter) -> &Permutation {
        &self.sigmas[x as usize - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.rho.is_identity() && self.sigmas.iter().all(Permutation::is_identity)
    }

    /// Action on the letter pair `(a, b)` following a run of zeros, `a != 0`.
    #[inline]
    pub fn act_pair(&self, a: Letter, b: Letter) -> (Letter, Letter) {
        (self.rho.apply(a), self.sigma(a).apply(b))
    }

    /// `self · other` (apply `other` first). `B` is a group, so this stays in `B`.
    pub fn compose(&self, other: &BElement) -> BElement {
        let d = self.degree();
        let sigmas = (1..d as Letter)
            .map(|x| self.sigma(other.rho.apply(x)).compose(other.sigma(x)))
            .collect();
        BElement { rho: self.rho.compose(&other.rho), sigmas }
    }

    pub fn inverse(&self) -> BElement {
        let d = self.degree();
        let rho_inv = self.rho.inverse();
        let sigmas = (1..d as Letter).map(|x| self.sigma(rho_inv.apply(x)).inverse()).collect();
        BElement { rho: rho_inv, sigmas }
    }
}

/// A generator in `S = A ∪ B`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    Identity,
    A { perm: Permutation },
    B { element: BElement },
}

impl Generator {
    /// An element of `A`; the trivial permutation normalizes to `Identity`.
    pub fn a(perm: Permutation) -> Result<Self> {
        if !perm.is_even() {
            return input(format!("A generator {perm} is odd"));
        }
        Ok(Self::a_unchecked(perm))
    }

    pub(crate) fn a_unchecked(perm: Permutation) -> Self {
        if perm.is_identity() {
            Generator::Identity
        } else {
            Generator::A { perm }
        }
    }

    pub fn b(rho: Permutation, sigmas: Vec<Permutation>) -> Result<Self> {
        Ok(Self::from_b(BElement::new(rho, sigmas)?))
    }

    pub(crate) fn from_b(element: BElement) -> Self {
        if element.is_identity() {
            Generator::Identity
        } else {
            Generator::B { element }
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Generator::Identity)
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            Generator::Identity => None,
            Generator::A { perm } => Some(perm.degree()),
            Generator::B { element } => Some(element.degree()),
        }
    }

    pub fn root_perm(&self, d: usize) -> Permutation {
        match self {
            Generator::Identity => Permutation::identity(d),
            Generator::A { perm } => perm.clone(),
            Generator::B { element } => element.rho.clone(),
        }
    }

    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Identity => Generator::Identity,
            Generator::A { perm } => Generator::A { perm: perm.inverse() },
            Generator::B { element } => Generator::B { element: element.inverse() },
        }
    }

    /// Image of the letter `x` and the section at `x`.
    #[inline]
    pub fn split(&self, x: Letter) -> (Letter, Generator) {
        match self {
            Generator::Identity => (x, Generator::Identity),
            Generator::A { perm } => (perm.apply(x), Generator::Identity),
            Generator::B { element } => {
                if x == 0 {
                    (0, self.clone())
                } else {
                    (element.rho.apply(x), Generator::a_unchecked(element.sigma(x).clone()))
                }
            }
        }
    }

    /// Action on a finite word.
    pub fn apply(&self, w: &[Letter]) -> Result<Vec<Letter>> {
        if let Some(d) = self.degree() {
            if let Some(&x) = w.iter().find(|&&x| x as usize >= d) {
                return Err(Error::Input(format!("letter {x} out of range for d={d}")));
            }
        }
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &[Letter]) -> Vec<Letter> {
        let mut out = w.to_vec();
        match self {
            Generator::Identity => {}
            Generator::A { perm } => {
                if let Some(first) = out.first_mut() {
                    *first = perm.apply(*first);
                }
            }
            Generator::B { element } => {
                if let Some(j) = out.iter().position(|&x| x != 0) {
                    let a = out[j];
                    out[j] = element.rho.apply(a);
                    if j + 1 < out.len() {
                        out[j + 1] = element.sigma(a).apply(out[j + 1]);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `e`, `A[images]` or `B[rho;sigma_1;..;sigma_{d-1}]`.
impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imgs(p: &Permutation) -> String {
            p.images().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        }
        match self {
            Generator::Identity => write!(f, "e"),
            Generator::A { perm } => write!(f, "A[{}]", imgs(perm)),
            Generator::B { element } => {
                write!(f, "B[{}", imgs(&element.rho))?;
                for s in &element.sigmas {
                    write!(f, ";{}", imgs(s))?;
                }
                write!(f, "]")
            }
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" {
            return Ok(Generator::Identity);
        }
        let parse_perm = |body: &str| -> Result<Permutation> {
            let images = body
                .split_whitespace()
                .map(|t| t.parse::<Letter>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_images(images)
        };
        let inner = |prefix: char| -> Result<&str> {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('['))
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("malformed generator `{s}`")))
        };
        match s.chars().next() {
            Some('A') => Generator::a(parse_perm(inner('A')?)?),
            Some('B') => {
                let mut parts = inner('B')?.split(';');
                let rho = parse_perm(parts.next().unwrap_or(""))?;
                let sigmas = parts.map(parse_perm).collect::<Result<Vec<_>>>()?;
                Generator::b(rho, sigmas)
            }
            _ => Err(Error::Parse(format!("malformed generator `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_b() -> Generator {
        let d = 5;
        let mut sigmas = vec![Permutation::identity(d); d - 1];
        sigmas[0] = Permutation::three_cycle(d, 0, 4, 2);
        Generator::b(Permutation::three_cycle(d, 1, 2, 3), sigmas).unwrap()
    }

    #[test]
    fn a_generator_moves_first_letter_only() {
        let a = Generator::a(Permutation::three_cycle(5, 0, 1, 2)).unwrap();
        assert_eq!(a.apply(&[2, 4, 0]).unwrap(), vec![0, 4, 0]);
    }

    #[test]
    fn b_generator_recurses_past_zeros() {
        assert_eq!(example_b().apply(&[0, 0, 1, 4, 3]).unwrap(), vec![0, 0, 2, 2, 3]);
    }

    #[test]
    fn identity_is_trivial() {
        assert_eq!(Generator::Identity.apply(&[3, 1, 4]).unwrap(), vec![3, 1, 4]);
        assert_eq!(Generator::a(Permutation::identity(5)).unwrap(), Generator::Identity);
    }

    #[test]
    fn out_of_range_letter_is_rejected() {
        assert!(example_b().apply(&[0, 7]).is_err());
    }

    #[test]
    fn rejects_invalid_b() {
        let d = 5;
        let ids = vec![Permutation::identity(d); d - 1];
        assert!(Generator::b(Permutation::three_cycle(d, 0, 1, 2), ids.clone()).is_err());
        let odd = Permutation::from_cycles(d, &[&[1, 2]]).unwrap();
        assert!(Generator::b(odd, ids).is_err());
    }

    #[test]
    fn sections() {
        let b = example_b();
        assert_eq!(b.split(0).1, b);
        let (img, sec) = b.split(3);
        assert_eq!(img, 1);
        assert_eq!(sec, Generator::Identity);
        let (img, sec) = b.split(1);
        assert_eq!(img, 2);
        assert_eq!(sec, Generator::a(Permutation::three_cycle(5, 0, 4, 2)).unwrap());
    }

    #[test]
    fn b_product_matches_action() {
        let b = match example_b() {
            Generator::B { element } => element,
            _ => unreachable!(),
        };
        let c = b.compose(&b);
        let bb = Generator::from_b(c);
        for w in [[0u8, 1, 4], [1, 4, 0], [0, 0, 3], [2, 2, 2]] {
            let twice = example_b().apply(&example_b().apply(&w).unwrap()).unwrap();
            assert_eq!(bb.apply(&w).unwrap(), twice);
        }
        assert!(Generator::from_b(b.compose(&b.inverse())).is_identity());
    }

    #[test]
    fn text_round_trip() {
        for g in [Generator::Identity, example_b(), Generator::a(Permutation::three_cycle(5, 0, 1, 2)).unwrap()] {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
    }
}
