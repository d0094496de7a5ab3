//! Worked examples with hand-computed answers.

use mothergroup::boundary::{section_at_zero_ray, sample_corpus};
use mothergroup::schreier::{find_n0, gray_piece, level_graph};
use mothergroup::{
    ClopenSet, Diagram, Generator, GeneratingSet, GrayWord, GroupWord, PathPrefix, Permutation, Position, Tail,
    TildePoint, Vertex,
};

const D: usize = 5;

fn a012() -> GroupWord {
    GroupWord::parse(D, "A[1 2 0 3 4]").unwrap()
}

/// `ρ = (1 2 3)`, `σ_1 = (0 4 2)`, other `σ` trivial.
fn b() -> GroupWord {
    let id = Permutation::identity(D);
    let mut sigmas = vec![id; D - 1];
    sigmas[0] = Permutation::from_cycles(D, &[&[0, 4, 2]]).unwrap();
    let rho = Permutation::from_cycles(D, &[&[1, 2, 3]]).unwrap();
    GroupWord::from_generator(D, Generator::b(rho, sigmas).unwrap())
}

fn pt(s: &str) -> TildePoint {
    TildePoint::parse(D, s).unwrap()
}

#[test]
fn tree_action() {
    assert_eq!(a012().apply(&[2, 4, 0]).unwrap(), vec![0, 4, 0]);
    assert_eq!(b().apply(&[0, 0, 1, 4, 3]).unwrap(), vec![0, 0, 2, 2, 3]);
    assert_eq!(GroupWord::identity(D).apply(&[3, 1, 4]).unwrap(), vec![3, 1, 4]);
}

#[test]
fn sections() {
    assert!(b().section(&[0]).equals(&b()));
    let sigma3 = GroupWord::from_generator(D, Generator::a(Permutation::identity(D)).unwrap());
    assert!(b().section(&[3]).equals(&sigma3));
    assert!(b().section(&[1]).equals(&GroupWord::parse(D, "A[4 1 0 3 2]").unwrap()));
    for x in 0..D as u8 {
        assert!(a012().section(&[x]).is_identity());
    }
}

#[test]
fn wreath_decompositions() {
    let (secs, root) = GroupWord::identity(D).wreath_decompose();
    assert!(root.is_identity() && secs.iter().all(GroupWord::is_identity));
    let (secs, root) = a012().wreath_decompose();
    assert_eq!(root, Permutation::from_cycles(D, &[&[0, 1, 2]]).unwrap());
    assert!(secs.iter().all(GroupWord::is_identity));
    let ba = b().mul(&a012());
    let (secs, root) = ba.wreath_decompose();
    for i in 0..D.pow(4) {
        let w: Vec<u8> = (0..4).map(|k| ((i / D.pow(k)) % D) as u8).collect();
        assert_eq!(GroupWord::apply_recombined(&secs, &root, &w), ba.apply(&w).unwrap());
    }
}

#[test]
fn identity_and_orders() {
    assert!(b().mul(&b().inverse()).is_identity());
    assert!(!a012().is_identity());
    assert_eq!(GroupWord::identity(D).order_of(360), Some(1));
    assert_eq!(a012().order_of(360), Some(3));
    let order = b().order_of(1000).unwrap();
    assert_eq!((60u64.pow(4) * 12) % order as u64, 0);
    // Direct iteration on level 6.
    let mut k = 1;
    let w: Vec<u8> = vec![0, 0, 1, 4, 3, 2];
    let mut cur = b().apply(&w).unwrap();
    while cur != w {
        cur = b().apply(&cur).unwrap();
        k += 1;
    }
    assert_eq!(order % k, 0);
}

#[test]
fn boundary_action() {
    let p = TildePoint::new(D, vec![0, 0], Tail::ZeroPair(1, 4)).unwrap();
    let q = TildePoint::new(D, vec![0, 0], Tail::ZeroPair(2, 2)).unwrap();
    assert_eq!(p.act(&b()), q);
    let p = TildePoint::new(D, vec![2], Tail::Periodic(vec![3, 1])).unwrap();
    let q = TildePoint::new(D, vec![0], Tail::Periodic(vec![3, 1])).unwrap();
    assert_eq!(p.act(&a012()), q);
}

#[test]
fn zero_ray_sections() {
    assert!(matches!(section_at_zero_ray(&b(), &[]).unwrap(), Generator::B { .. }));
    assert_eq!(section_at_zero_ray(&a012(), &[]).unwrap(), Generator::Identity);
}

#[test]
fn gray_projection_and_neighbours() {
    assert_eq!(pt("0201|(30)").gray(), GrayWord::parse("0*0*|(*0)").unwrap());
    assert_eq!(pt("00|0*[14]").gray(), GrayWord::parse("|0[**]").unwrap());
    let g = GrayWord::parse("00*0|(*)").unwrap();
    assert_eq!(g.neighbors(), (GrayWord::parse("*0*0|(*)").unwrap(), GrayWord::parse("00**|(*)").unwrap()));
    let z = GrayWord::parse("|0[**]").unwrap();
    assert_eq!(z.neighbors(), (GrayWord::parse("*|0[**]").unwrap(), GrayWord::parse("|0[*0]").unwrap()));
}

#[test]
fn visible_positions() {
    let f = Position::Finite;
    assert_eq!(GrayWord::parse("00*0|(*)").unwrap().visible_positions(), (f(1), (f(3), f(4))));
    assert_eq!(GrayWord::parse("|(*)").unwrap().visible_positions(), (f(1), (f(1), f(2))));
    assert_eq!(
        GrayWord::parse("|0[**]").unwrap().visible_positions(),
        (f(1), (Position::Omega, Position::OmegaPlusOne))
    );
}

#[test]
fn level_graphs() {
    let gs = GeneratingSet::standard(D).unwrap();
    for (n, size) in [(1, 5), (3, 125), (5, 3125)] {
        let g = level_graph(&gs, n, 6).unwrap();
        assert_eq!(g.vertex_count(), size);
        assert!(g.is_connected());
    }
}

#[test]
fn piece_codes() {
    let p = pt("3|(14)");
    assert_eq!(gray_piece(D, &p, 0).unwrap().segment().len(), 1);
    assert_eq!(gray_piece(D, &p, 2).unwrap().code(), gray_piece(D, &p, 2).unwrap().code());
    // Differ only far beyond every visible position of the window.
    let q = pt("3141414141414141|(2)");
    let r = pt("3141414141414141|(3)");
    assert_eq!(gray_piece(D, &q, 2).unwrap().code(), gray_piece(D, &r, 2).unwrap().code());
    let s = pt("4|(14)");
    assert_ne!(p.class_key(), s.class_key());
    assert_ne!(gray_piece(D, &p, 1).unwrap().code(), gray_piece(D, &s, 1).unwrap().code());
}

#[test]
fn n0_is_monotone_in_the_radius() {
    let base = sample_corpus(D, 10, 4);
    let small = find_n0(D, &base, 1, 20).unwrap();
    let large = find_n0(D, &base, 8, 20).unwrap();
    assert_eq!(small.n0, 0);
    assert!(small.n0 <= large.n0);
}

#[test]
fn bratteli_encoding() {
    let dg = Diagram::new(D).unwrap();
    let p = TildePoint::new(D, vec![1, 3], Tail::ZeroPair(2, 0)).unwrap();
    assert_eq!(dg.encode(&p, 1), PathPrefix::new(vec![1], Vertex::new(3, 0, true)).unwrap());
    assert_eq!(dg.encode(&p, 2), PathPrefix::new(vec![1, 3], Vertex::new(2, 0, false)).unwrap());
    assert_eq!(dg.encode(&p, 3), PathPrefix::new(vec![1, 3, 0], Vertex::new(2, 0, false)).unwrap());
}

#[test]
fn cylinder_images() {
    let dg = Diagram::new(D).unwrap();
    for v in dg.level_vertices() {
        let c = PathPrefix::new(vec![2], v).unwrap();
        let expected = ClopenSet::cylinder(&dg, PathPrefix::new(vec![0], v).unwrap());
        assert_eq!(dg.image_of_cylinder(&a012(), &c), expected);
    }
    let c = PathPrefix::new(vec![0], Vertex::new(1, 0, false)).unwrap();
    let expected = ClopenSet::cylinder(&dg, PathPrefix::new(vec![0], Vertex::new(2, 4, false)).unwrap());
    assert_eq!(dg.image_of_cylinder(&b(), &c), expected);
}

#[test]
fn first_level_of_the_diagram() {
    let dg = Diagram::new(D).unwrap();
    assert_eq!(dg.level_vertices().len(), 40);
    assert!(dg.path_counts(1).iter().all(|&c| c == 5));
}

#[test]
fn regularity_examples() {
    let dg = Diagram::new(D).unwrap();
    let p = pt("3|(14)");
    assert_eq!(dg.regularity_check(&GroupWord::identity(D), &p, 0).unwrap().depth, 0);
    let a = GroupWord::parse(D, "A[1 2 0 3 4]").unwrap();
    assert_eq!(dg.regularity_check(&a, &p, 2).unwrap().depth, 1);
}
