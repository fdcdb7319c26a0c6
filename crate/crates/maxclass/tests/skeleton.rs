mod common;

use std::collections::BTreeMap;

use common::*;
use maxclass::analysis::{check_skelbottom, order_d_trees, partition_trees};
use maxclass::figure::{fixture_matches, subtree_figure, FigTree, FigureFixture};
use maxclass::render::{to_dot, to_figure, SkeletonDoc};
use maxclass::session::{Session, SessionConfig};
use maxclass::skeleton::{build_skeleton, BuildOptions, SkeletonTree};

fn build(s: &Session, opts: BuildOptions) -> SkeletonTree {
    build_skeleton(s, opts).unwrap()
}

#[test]
fn s7_11_matches_order_one_figure() {
    let fx = FigureFixture::from_json(include_str!("fixtures/s7_11_order1.json")).unwrap();
    let (tree, _) = s7_11_tree();
    assert_eq!(fixture_matches(tree, &fx).unwrap().len(), 1);
}

#[test]
fn level_counts_of_s7_11() {
    let (tree, _) = s7_11_tree();
    let counts: Vec<usize> = (0..=5).map(|e| tree.count_at_depth(e)).collect();
    assert_eq!(counts, [1, 2, 5, 39, 274, 4328]);
}

#[test]
fn galois_trees_partition_the_skeleton() {
    let (tree, trees) = s7_11_tree();
    let mut seen = vec![0u32; tree.len()];
    for gt in trees {
        for &m in &gt.members {
            seen[m] += 1;
            assert_eq!(tree.nodes[m].gal, gt.order);
        }
    }
    assert!(seen.iter().all(|&c| c == 1));
}

#[test]
fn order_d_trees_number_ell_with_roots_at_depth_one() {
    let s = s7_11();
    let (tree, trees) = s7_11_tree();
    let (count, depths) = order_d_trees(s, tree, trees);
    assert_eq!(count, s.ell());
    assert_eq!(depths.into_iter().collect::<Vec<_>>(), [1]);

    let s = s11_20();
    let tree = build(s, BuildOptions::restricted(3, 10));
    let trees = partition_trees(&tree);
    let (count, depths) = order_d_trees(s, &tree, &trees);
    assert_eq!(count, s.ell());
    assert_eq!(depths.into_iter().collect::<Vec<_>>(), [1]);
}

#[test]
fn leaves_sit_at_the_bottom_for_s7_11() {
    let (tree, trees) = s7_11_tree();
    assert!(!check_skelbottom(s7_11(), tree, trees).failed());
}

#[test]
fn sequential_and_parallel_builds_agree() {
    let s = session(7, 12, 6);
    let par = build(&s, BuildOptions::full(6));
    let seq = build(&s, BuildOptions::full(6).sequential());
    let doc = |t: &SkeletonTree| SkeletonDoc::new(t, &partition_trees(t));
    assert_eq!(doc(&par), doc(&seq));
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_the_tree() {
    let s = s7_11();
    let docs: Vec<SkeletonDoc> = [1, 2, 5]
        .into_iter()
        .map(|threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let tree = pool.install(|| build(s, BuildOptions::full(5)));
            SkeletonDoc::new(&tree, &partition_trees(&tree))
        })
        .collect();
    assert!(docs.windows(2).all(|w| w[0] == w[1]));
}

fn shape_and_orders(tree: &SkeletonTree) -> (FigTree, BTreeMap<(u32, usize), usize>) {
    let mut sizes = BTreeMap::new();
    for gt in partition_trees(tree) {
        *sizes.entry((gt.order, gt.members.len())).or_insert(0) += 1;
    }
    (subtree_figure(tree, 0, &|_| true), sizes)
}

#[test]
fn another_generator_gives_the_same_labelled_tree() {
    for n in [11, 12] {
        let depth = n - 6;
        let a = build(&session(7, n, depth), BuildOptions::full(depth));
        let s5 = Session::new(SessionConfig::new(7, n, depth).with_generator(5)).unwrap();
        assert_eq!(s5.field.generator(), 5);
        let b = build(&s5, BuildOptions::full(depth));
        assert_eq!(shape_and_orders(&a), shape_and_orders(&b), "n = {n}");
    }
}

#[test]
fn json_round_trips() {
    let (tree, trees) = s7_11_tree();
    let doc = SkeletonDoc::new(tree, trees);
    let back = SkeletonDoc::from_json(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
    let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
    let gt = &v["galois_trees"][1];
    for key in ["order", "type", "root", "members", "ramification_levels"] {
        assert!(gt.get(key).is_some(), "missing {key}");
    }
    let node = &v["nodes"][0];
    for key in ["id", "depth", "gal", "parent", "children"] {
        assert!(node.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn dot_and_figure_output() {
    let s = s7_11();
    let tree = build(s, BuildOptions::full(2));
    let dot = to_dot(&tree);
    assert!(dot.starts_with("digraph skeleton {"));
    assert_eq!(dot.matches(" -> ").count(), tree.len() - 1);
    assert_eq!(to_figure(&tree), "36\n  6\n    1\n    6\n  6\n    1×2\n    6\n");
}
