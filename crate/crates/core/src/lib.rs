//! Exact computations for the alternating mother group `M` acting on the
//! rooted `d`-ary tree: wreath recursion, the modified boundary and its
//! Gray-code line, Schreier-graph pieces, the Bratteli path-space model and
//! piecewise elements of the topological full group.

pub mod boundary;
pub mod bratteli;
pub mod error;
pub mod full_group;
pub mod generator;
pub mod genset;
pub mod perm;
pub mod schreier;
pub mod word;

pub use error::{Error, Result};
pub use generator::{BElement, Generator};
pub use genset::{GeneratingSet, NamedGenerator};
pub use perm::{Letter, Permutation};
pub use word::{GroupWord, Portrait};
pub use boundary::{EdgeType, GraySegment, GrayTail, GrayWord, Position, Tail, TildePoint};
pub use schreier::{GrayPiece, Label, LevelGraph, PieceCode};
pub use bratteli::{ClopenSet, Diagram, PathPrefix, Vertex};
pub use full_group::{eta, PiecewiseElement};
