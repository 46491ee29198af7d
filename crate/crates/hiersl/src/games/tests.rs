use std::sync::Arc;

use super::*;

pub(crate) fn two_position_game() -> Cgsi {
    Cgsi::from_json(
        r#"{
        "actions": ["a", "b"],
        "agents": ["p1"],
        "positions": ["v0", "v1"],
        "initial": "v0",
        "transitions": {
            "v0": [ {"act": {"p1": "a"}, "to": "v1"}, {"act": {"p1": "b"}, "to": "v0"} ],
            "v1": [ {"act": {}, "to": "v1"} ]
        },
        "labels": { "v1": ["p"] },
        "observations": { "o": [["v0", "v1"]] }
    }"#,
    )
    .expect("well-formed model")
}

fn three_position_game() -> Cgsi {
    Cgsi::from_json(
        r#"{
        "actions": ["a", "b"],
        "agents": ["p1"],
        "positions": ["v0", "v1", "v2"],
        "initial": "v0",
        "transitions": {
            "v0": [ {"act": {"p1": "a"}, "to": "v1"}, {"act": {"p1": "b"}, "to": "v2"} ],
            "v1": [ {"act": {}, "to": "v0"} ],
            "v2": [ {"act": {}, "to": "v0"} ]
        },
        "labels": {},
        "observations": {
            "blur": [["v0"], ["v1", "v2"]],
            "id": [["v0"], ["v1"], ["v2"]]
        }
    }"#,
    )
    .expect("well-formed model")
}

#[test]
fn validate_accepts_wellformed_game() {
    two_position_game().validate().expect("valid");
}

#[test]
fn validate_reports_missing_transition() {
    let err = Cgsi::from_json(
        r#"{
        "actions": ["a", "b"],
        "agents": ["p1"],
        "positions": ["v0"],
        "initial": "v0",
        "transitions": { "v0": [ {"act": {"p1": "a"}, "to": "v0"} ] },
        "labels": {},
        "observations": {}
    }"#,
    )
    .unwrap_err();
    assert!(err.iter().any(|e| matches!(
        e,
        ModelError::MissingTransition { position, joint } if position == "v0" && joint.contains("p1:b")
    )));
}

#[test]
fn validate_reports_broken_equivalence() {
    // overlapping blocks describe a relation that fails transitivity;
    // the broken triple is reported
    let err = Cgsi::from_json(
        r#"{
        "actions": ["a"],
        "agents": ["p1"],
        "positions": ["v1", "v2", "v3"],
        "initial": "v1",
        "transitions": {
            "v1": [ {"act": {}, "to": "v1"} ],
            "v2": [ {"act": {}, "to": "v2"} ],
            "v3": [ {"act": {}, "to": "v3"} ]
        },
        "labels": {},
        "observations": { "o": [["v1", "v2"], ["v2", "v3"]] }
    }"#,
    )
    .unwrap_err();
    assert!(err.iter().any(|e| matches!(
        e,
        ModelError::NotEquivalence { obs, witness, .. } if obs == "o" && witness == "v2"
    )));
}

#[test]
fn play_equivalence_is_reflexive() {
    let g = three_position_game();
    let p = Play(vec![0, 1, 0]);
    p.validate(&g).unwrap();
    assert!(play_obs_equiv(&p, &p, "blur", &g).unwrap());
}

#[test]
fn plays_of_different_length_never_equivalent() {
    let g = three_position_game();
    let a = Play(vec![0, 1]);
    let b = Play(vec![0, 1, 0]);
    assert!(!play_obs_equiv(&a, &b, "blur", &g).unwrap());
}

#[test]
fn play_equivalence_matches_brute_force_on_short_plays() {
    // enumerate every play of length <= 2 and compare against the
    // pointwise definition applied directly
    let g = three_position_game();
    let mut plays = vec![Play(vec![g.init])];
    for &w in &g.successors(g.init) {
        plays.push(Play(vec![g.init, w]));
    }
    let part = &g.obs["blur"];
    for a in &plays {
        for b in &plays {
            let direct = a.0.len() == b.0.len()
                && (0..a.0.len()).all(|i| part.class_of[a.0[i]] == part.class_of[b.0[i]]);
            assert_eq!(play_obs_equiv(a, b, "blur", &g).unwrap(), direct);
        }
    }
    // the nontrivial positive case: v0v1 and v0v2 under the blurred view
    assert!(play_obs_equiv(&Play(vec![0, 1]), &Play(vec![0, 2]), "blur", &g).unwrap());
    assert!(!play_obs_equiv(&Play(vec![0, 1]), &Play(vec![0, 2]), "id", &g).unwrap());
}

#[test]
fn identity_is_finer_than_everything() {
    let g = three_position_game();
    assert!(g.finer("id", "blur").unwrap());
    assert!(g.finer("id", "id").unwrap());
    assert!(!g.finer("blur", "id").unwrap());
    assert!(g.yields_hierarchical_observation());
}

#[test]
fn incomparable_partitions_break_total_order() {
    let mut g = three_position_game();
    // {v0 v1 | v2} vs {v0 | v1 v2} are incomparable
    g.obs.insert("left".into(), Partition::from_blocks(3, vec![vec![0, 1], vec![2]]).unwrap());
    g.obs.insert("right".into(), Partition::from_blocks(3, vec![vec![0], vec![1, 2]]).unwrap());
    assert!(!g.finer("left", "right").unwrap());
    assert!(!g.finer("right", "left").unwrap());
    assert!(!g.yields_hierarchical_observation());
}

#[test]
fn refinement_chain_is_total() {
    let mut g = three_position_game();
    g.obs.insert("coarse".into(), Partition::from_blocks(3, vec![vec![0, 1, 2]]).unwrap());
    // id ⊆ blur ⊆ coarse: check every pair both ways
    let chain = ["id", "blur", "coarse"];
    for (i, a) in chain.iter().enumerate() {
        for b in &chain[i..] {
            assert!(g.finer(a, b).unwrap(), "{a} should refine {b}");
        }
    }
    assert!(g.yields_hierarchical_observation());
}

// -- trees ------------------------------------------------------------------

fn small_components() -> Arc<Components> {
    Arc::new(Components::new(vec![vec!["l0".into(), "l1".into()]]))
}

fn blank_tree(atoms: Vec<String>, label: Label) -> RegularTree {
    let comps = Arc::new(Components::new(vec![]));
    let dirs = DirAlphabet::new(comps, IndexSet::empty());
    RegularTree::complete_constant(dirs, atoms, label, 0)
}

#[test]
fn widening_blank_tree_gives_complete_binary_tree() {
    let t = blank_tree(vec![], 0);
    let wide = DirAlphabet::new(small_components(), IndexSet::full(1));
    let w = t.widen(wide.clone(), &[0]);
    assert!(w.is_complete());
    let direct = RegularTree::complete_constant(wide, vec![], 0, 0);
    assert!(w.unroll_equal(&direct, 4));
}

#[test]
fn narrow_after_widen_recovers_the_tree() {
    let comps = Arc::new(Components::new(vec![
        vec!["a0".into(), "a1".into()],
        vec!["b0".into(), "b1".into()],
    ]));
    let narrow = DirAlphabet::new(comps.clone(), IndexSet::new(vec![1]));
    let wide = DirAlphabet::new(comps, IndexSet::full(2));
    // a two-vertex complete tree over component 1 with distinct labels
    let t = RegularTree::new(
        narrow.clone(),
        vec!["p".into()],
        vec![
            TreeVertex { dir: 0, label: 1, succs: vec![0, 1] },
            TreeVertex { dir: 1, label: 0, succs: vec![0, 1] },
        ],
        0,
    );
    for fill in 0..2u32 {
        let w = t.widen(wide.clone(), &[fill]);
        assert!(w.is_complete());
        let back = w.narrow_tree(narrow.clone()).expect("uniform labels");
        assert!(back.same_tree(&t));
    }
}

#[test]
fn widen_twice_equals_single_widen() {
    let comps = Arc::new(Components::new(vec![
        vec!["a0".into(), "a1".into()],
        vec!["b0".into(), "b1".into()],
        vec!["c0".into()],
    ]));
    let base = DirAlphabet::new(comps.clone(), IndexSet::new(vec![1]));
    let mid = DirAlphabet::new(comps.clone(), IndexSet::new(vec![1, 2]));
    let full = DirAlphabet::new(comps, IndexSet::full(3));
    let t = RegularTree::complete_constant(base, vec![], 0, 1);
    let two_step = t.widen(mid, &[1]).widen(full.clone(), &[0]);
    let one_step = t.widen(full, &[1, 0]);
    assert!(two_step.same_tree(&one_step));
}

#[test]
fn merge_with_empty_labelled_tree_retypes() {
    let g = two_position_game();
    let k = crate::compiler::build_cks(&g);
    let unfolding = k.unfold(k.init, &["p".to_string()]);
    let dirs = unfolding.dirs.clone();
    let blank = RegularTree::complete_constant(dirs, vec!["q".into()], 0, unfolding.root_dir());
    let merged = blank.merge(&unfolding);
    assert_eq!(merged.atoms, vec!["q".to_string(), "p".to_string()]);
    // domain and original labels preserved
    assert_eq!(merged.verts.len(), unfolding.verts.len());
    assert!(merged.nodes_to_depth(3).len() == unfolding.nodes_to_depth(3).len());
}

#[test]
fn merge_takes_domain_of_second_argument_and_unions_labels() {
    let comps = small_components();
    let dirs = DirAlphabet::new(comps, IndexSet::full(1));
    let complete = RegularTree::complete_constant(dirs.clone(), vec!["q".into()], 1, 0);
    // second argument: non-complete tree (only direction l0 from each node)
    let partial = RegularTree::new(
        dirs,
        vec!["p".into()],
        vec![TreeVertex { dir: 0, label: 1, succs: vec![0] }],
        0,
    );
    let merged = complete.merge(&partial);
    assert_eq!(merged.atoms, vec!["q".to_string(), "p".to_string()]);
    for depth in 0..3 {
        assert_eq!(merged.nodes_to_depth(depth).len(), partial.nodes_to_depth(depth).len());
    }
    // every node carries both labels
    assert!(merged.verts.iter().all(|v| v.label == 0b11));
}

#[test]
fn unfolding_nodes_are_exactly_finite_paths() {
    let g = three_position_game();
    let k = crate::compiler::build_cks(&g);
    let t = k.unfold(k.init, &[]);
    // enumerate plays of length <= 5 in the game; nodes of depth d must
    // biject with plays of length d+1
    let mut plays: Vec<Vec<PosId>> = vec![vec![g.init]];
    let mut count_by_len = vec![0usize; 6];
    count_by_len[1] = 1;
    for len in 2..=5 {
        let mut next = Vec::new();
        for p in &plays {
            for w in g.successors(*p.last().unwrap()) {
                let mut q = p.clone();
                q.push(w);
                next.push(q);
            }
        }
        count_by_len[len] = next.len();
        plays = next;
    }
    for depth in 0..=4usize {
        let nodes = t.nodes_to_depth(depth).iter().filter(|w| w.len() == depth + 1).count();
        assert_eq!(nodes, count_by_len[depth + 1], "depth {depth}");
    }
}
