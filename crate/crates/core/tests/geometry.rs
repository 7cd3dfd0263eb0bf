mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyreach::formula::{parse, Formula};
use polyreach::geometry::{
    evaluate_polyhedral, face_poset, path_witness_poly, realize, Maze, PolyhedralModel, Room,
    RoomWeights, SimplicialComplex, SAFE_EXIT_QUERY,
};
use polyreach::kripke::{evaluate, FormulaSampler, ModelSampler, PosetModel};
use polyreach::transforms::nerve;

use common::maze_safe_squares;

const TRIANGLE: &str = "vertex a 0 0\nvertex b 1 0\nvertex c 0 1\nsimplex a b c\nvaluation p abc\n";

fn combination(k: &SimplicialComplex, s: usize, weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    let mut x = vec![0.0; k.ambient_dimension()];
    for (&v, &w) in k.vertices_of(s).iter().zip(weights) {
        for (xi, ci) in x.iter_mut().zip(k.coordinates(v)) {
            *xi += w / total * ci;
        }
    }
    x
}

fn random_poset(rng: &mut ChaCha8Rng, max_worlds: usize) -> PosetModel {
    ModelSampler::posets(max_worlds).sample(rng).into_poset().unwrap()
}

/// Checks the partition property and the monotonicity of the cell map on
/// relative-interior points, barycenters and boundary points of every cell.
fn check_cell_map(k: &SimplicialComplex, rng: &mut ChaCha8Rng) {
    for s in 0..k.simplex_count() {
        let verts = k.vertices_of(s).to_vec();
        let n = verts.len();
        let mut samples = vec![vec![1.0; n]];
        for _ in 0..3 {
            samples.push((0..n).map(|_| rng.gen_range(0.05..1.0)).collect());
        }
        for w in samples {
            let loc = k.locate(&combination(k, s, &w)).unwrap();
            assert_eq!(loc.cell, s, "interior point of {}", k.label(s));
            let support: Vec<usize> = loc.barycentric.iter().map(|&(v, _)| v).collect();
            assert_eq!(support, verts);
            let total: f64 = w.iter().sum();
            for ((_, l), wi) in loc.barycentric.iter().zip(&w) {
                assert!((l - wi / total).abs() < 1e-7);
            }
        }
        // a point of the closed simplex lies in the interior of a face
        for _ in 0..3 {
            let mask: u32 = rng.gen_range(1..(1u32 << n));
            let w: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { rng.gen_range(0.1..1.0) } else { 0.0 }).collect();
            let cell = k.cell_of(&combination(k, s, &w)).unwrap();
            assert!(k.is_face(cell, s));
            let expected: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
            assert_eq!(k.vertices_of(cell), expected.as_slice());
        }
    }
}

#[test]
fn cell_map_partitions_realized_posets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..15 {
        let m = random_poset(&mut rng, 4);
        let x = realize(&m);
        check_cell_map(x.complex(), &mut rng);
    }
}

#[test]
fn cell_map_partitions_a_maze() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let maze = Maze::generate(3, 3, 4, &RoomWeights::default()).unwrap();
    check_cell_map(maze.polyhedral_model().complex(), &mut rng);
}

#[test]
fn triangle_cell_map_examples() {
    let x = PolyhedralModel::parse(TRIANGLE).unwrap();
    let k = x.complex();
    assert_eq!(k.label(k.cell_of(&[0.0, 0.0]).unwrap()), "a");
    assert_eq!(k.label(k.cell_of(&[0.5, 0.0]).unwrap()), "a+b");
    assert_eq!(k.label(k.cell_of(&[1.0 / 3.0, 1.0 / 3.0]).unwrap()), "a+b+c");
    assert!(k.cell_of(&[1.0, 1.0]).is_err());
    let p = parse("p").unwrap();
    let dp = parse("<>p").unwrap();
    let bp = parse("[]p").unwrap();
    let inside = [0.2, 0.3];
    assert!(evaluate_polyhedral(&x, &dp, &inside).unwrap());
    assert!(evaluate_polyhedral(&x, &bp, &inside).unwrap());
    assert!(evaluate_polyhedral(&x, &dp, &[0.0, 0.0]).unwrap());
    assert!(!evaluate_polyhedral(&x, &p, &[0.0, 0.0]).unwrap());
}

#[test]
fn two_triangles_sharing_an_edge() {
    let text = "vertex a 0 0\nvertex b 1 0\nvertex c 0 1\nvertex d 1 1\nsimplex a b c\nsimplex b c d\n";
    let x = PolyhedralModel::parse(text).unwrap();
    let k = x.complex();
    assert_eq!(k.simplex_count(), 11);
    let fp = face_poset(k);
    let shared = k.resolve("b+c").unwrap();
    let tops: Vec<usize> = fp.worlds().filter(|&s| fp.lt(shared, s)).collect();
    assert_eq!(tops, vec![k.resolve("a+b+c").unwrap(), k.resolve("b+c+d").unwrap()]);
    assert!(k.geometric_audit().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Points with the same cell agree on every formula.
    #[test]
    fn truth_is_constant_on_relative_interiors(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = realize(&random_poset(&mut rng, 4));
        let k = x.complex();
        let fs = FormulaSampler::with_depth(3);
        let s = rng.gen_range(0..k.simplex_count());
        let n = k.vertices_of(s).len();
        let w1: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let w2: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let (p1, p2) = (combination(k, s, &w1), combination(k, s, &w2));
        for _ in 0..5 {
            let f = fs.sample(&mut rng);
            prop_assert_eq!(x.evaluate_at(&f, &p1).unwrap(), x.evaluate_at(&f, &p2).unwrap());
        }
    }

    /// The face poset of the realization is the nerve, by an explicit
    /// bijection on vertex sets that preserves order and valuation.
    #[test]
    fn realization_face_poset_is_the_nerve(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_poset(&mut rng, 5);
        let x = realize(&m);
        let companion = x.companion();
        let n = nerve(&m);
        let by_chain: BTreeMap<Vec<usize>, usize> =
            n.worlds().map(|c| (n.chain(c).to_vec(), c)).collect();
        let map: Vec<usize> = (0..x.complex().simplex_count())
            .map(|s| by_chain[x.complex().vertices_of(s)])
            .collect();
        let image: BTreeSet<usize> = map.iter().copied().collect();
        prop_assert_eq!(image.len(), n.world_count());
        prop_assert_eq!(map.len(), n.world_count());
        for a in companion.worlds() {
            for b in companion.worlds() {
                prop_assert_eq!(companion.le(a, b), n.le(map[a], map[b]));
            }
            for atom in m.valuation().keys() {
                prop_assert_eq!(companion.atom(atom).contains(a), n.atom(atom).contains(map[a]));
            }
        }
        prop_assert!(x.validate().is_ok());
    }
}

#[test]
fn realized_complexes_pass_the_geometric_audit() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let x = realize(&random_poset(&mut rng, 4));
        assert!(x.complex().geometric_audit().is_empty());
    }
}

#[test]
fn realize_small_examples() {
    let m = |t: &str| polyreach::kripke::PreorderModel::parse(t).unwrap().into_poset().unwrap();
    let single = realize(&m("worlds x\n"));
    assert_eq!(single.complex().simplex_count(), 1);
    assert_eq!(single.complex().ambient_dimension(), 1);
    let chain = realize(&m("worlds x y\norder x y\n"));
    assert_eq!(chain.complex().simplex_count(), 3);
    let anti = realize(&m("worlds x y z\n"));
    assert_eq!(anti.complex().simplex_count(), 3);
    assert_eq!(anti.complex().dimension(), Some(0));
}

#[test]
fn polyline_examples() {
    let x = PolyhedralModel::parse("vertex a 0 0\nvertex b 1 0\nsimplex a b\n").unwrap();
    let k = x.complex();
    let ab = k.resolve("a+b").unwrap();
    let line = path_witness_poly(&x, &[0.0, 0.0], &[1.0, 0.0], &[ab]).unwrap();
    assert_eq!(line, vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![1.0, 0.0]]);
    let mid = [0.25, 0.0];
    let loop_line = path_witness_poly(&x, &mid, &mid, &[ab]).unwrap();
    assert_eq!(loop_line, vec![mid.to_vec(), vec![0.5, 0.0], mid.to_vec()]);
    let a = k.resolve("a").unwrap();
    assert!(path_witness_poly(&x, &[0.0, 0.0], &[1.0, 0.0], &[a]).is_err());
}

fn query() -> Formula {
    parse(SAFE_EXIT_QUERY).unwrap()
}

/// Red triangles satisfying the query, as squares.
fn satisfying_red_squares(maze: &Maze) -> BTreeSet<(usize, usize)> {
    let x = maze.polyhedral_model();
    let ext = x.extension(&query());
    let mut out = BTreeSet::new();
    for (sx, sy, room) in maze.squares() {
        let [t1, t2] = maze.triangles(x.complex(), sx, sy);
        assert_eq!(ext.contains(&t1), ext.contains(&t2), "halves of ({sx},{sy}) disagree");
        if ext.contains(&t1) {
            assert_eq!(room, Room::Red);
            out.insert((sx, sy));
        }
    }
    out
}

#[test]
fn maze_query_matches_flood_fill() {
    for seed in 0..25 {
        let maze = Maze::generate(6, 5, seed, &RoomWeights([0.25, 0.08, 0.4, 0.2, 0.07])).unwrap();
        let expected: BTreeSet<(usize, usize)> = maze_safe_squares(&maze)
            .into_iter()
            .filter(|&(x, y)| maze.get(x, y) == Room::Red)
            .collect();
        assert_eq!(satisfying_red_squares(&maze), expected, "seed {seed}\n{maze}");
    }
}

#[test]
fn maze_small_examples() {
    let next_to_green = Maze::from_rows(&["RG"]).unwrap();
    assert_eq!(satisfying_red_squares(&next_to_green), BTreeSet::from([(0, 0)]));
    let walled = Maze::from_rows(&["R#G"]).unwrap();
    assert!(satisfying_red_squares(&walled).is_empty());
    let corridor = Maze::from_rows(&["RCWG", "####"]).unwrap();
    assert_eq!(satisfying_red_squares(&corridor), BTreeSet::from([(0, 0)]));
    let white = Maze::filled(1, 1, Room::White).unwrap();
    let x = white.polyhedral_model();
    let ext = x.extension(&parse("white").unwrap());
    for t in white.triangles(x.complex(), 0, 0) {
        assert!(ext.contains(&t));
    }
}

#[test]
fn maze_generation_is_deterministic() {
    let a = Maze::generate(8, 8, 99, &RoomWeights::default()).unwrap();
    let b = Maze::generate(8, 8, 99, &RoomWeights::default()).unwrap();
    assert_eq!(a.polyhedral_model().to_text(), b.polyhedral_model().to_text());
    assert_eq!(a.to_string(), b.to_string());
}

#[test]
fn companion_evaluation_matches_poset_evaluation() {
    let x = PolyhedralModel::parse(TRIANGLE).unwrap();
    let c = x.companion();
    let f = parse("~p & gamma(T, p)").unwrap();
    let direct: BTreeSet<usize> = evaluate(&c, &f).iter().collect();
    assert_eq!(direct, x.extension(&f));
    // every proper face sees the top
    assert_eq!(direct.len(), 6);
}
