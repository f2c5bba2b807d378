use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surf_core::cover::{flag_key, hyperedge_key, strings, Twin};
use surf_core::{
    brute_force_cover, build_ch2, build_cover_system, build_twin_sustain_system, CoverInstance,
    CoverSystem, ElementId, Subobject,
};

fn edge(key: String) -> ElementId {
    ElementId::new("E", key)
}

fn worked_instance(k: usize) -> CoverInstance {
    CoverInstance {
        m: 3,
        n: 5,
        k,
        hyperedges: vec![vec![1, 2, 3], vec![1, 3, 4], vec![1, 4, 5]],
    }
}

#[test]
fn reaction_counts_follow_the_formula() {
    for (m, n) in [(1, 2), (1, 3), (2, 3), (3, 4)] {
        let hyperedges = build_ch2(m, n).unwrap().hyperedges.len();
        let twins: usize = strings(m, n)
            .map(|u| u.iter().collect::<BTreeSet<_>>().len())
            .sum();
        let expected = n + hyperedges + n + twins;
        assert_eq!(build_cover_system(m, n).unwrap().reactions().len(), expected);
    }
    assert_eq!(build_cover_system(1, 2).unwrap().reactions().len(), 10);
}

#[test]
fn all_cover_reactions_are_uninhibited() {
    let system = build_cover_system(2, 3).unwrap();
    assert!(system.reactions().iter().all(|a| a.is_uninhibited()));
}

/// Expected result: the state itself plus the `+`-twin of every `*`-hyperedge
/// that has a flagged attachment vertex.
fn expected_twins(cs: &CoverSystem, state: &Subobject) -> Subobject {
    let bg = cs.background();
    let mut ids: Vec<ElementId> = bg.element_ids(state).cloned().collect();
    for u in strings(cs.m(), cs.n()) {
        let starred = bg.contains(state, &edge(hyperedge_key(&u, Twin::Star)));
        let flagged = u.iter().any(|&v| bg.contains(state, &edge(flag_key(v))));
        if starred && flagged {
            ids.push(edge(hyperedge_key(&u, Twin::Plus)));
        }
    }
    bg.subobject_from_ids(ids).unwrap()
}

#[test]
fn twin_creation_semantics_on_random_states() {
    let cs = CoverSystem::new(2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let t = cs.background().sample_subobject(&mut rng);
        assert_eq!(cs.system().result(&t).unwrap(), expected_twins(&cs, &t));
    }
}

#[test]
fn flag_free_plus_free_states_are_fixpoints() {
    let cs = CoverSystem::new(2, 3).unwrap();
    let bg = cs.background();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let t = bg.sample_subobject(&mut rng);
        let kept = bg
            .element_ids(&t)
            .filter(|e| !e.key.starts_with("flag") && !e.key.ends_with(",+)"))
            .cloned();
        let t = bg.subobject_from_ids(kept).unwrap();
        assert_eq!(cs.system().result(&t).unwrap(), t);
    }
}

#[test]
fn worked_run_intermediate_results() {
    let cs = CoverSystem::new(3, 5).unwrap();
    let run = cs.process(&worked_instance(2), &[2, 4]).unwrap();
    let bg = cs.background();
    let d1 = &run.trace.results()[1];
    assert!(bg.contains(d1, &edge("(1.2.3,+)".into())));
    assert!(bg.contains(d1, &edge("flag(2)".into())));
    assert!(!bg.contains(d1, &edge("flag(4)".into())));
    assert!(run.verdict);
    // the first context enables one twin reaction, the second two more
    let twins = |step: usize| -> Vec<String> {
        run.trace.enabled()[step]
            .iter()
            .filter(|id| id.starts_with("twin"))
            .cloned()
            .collect()
    };
    assert_eq!(twins(0), vec!["twin (1.2.3,*) at 2"]);
    let newly: Vec<String> = twins(1)
        .into_iter()
        .filter(|id| !twins(0).contains(id))
        .collect();
    assert_eq!(newly, vec!["twin (1.3.4,*) at 4", "twin (1.4.5,*) at 4"]);
}

#[test]
fn single_flag_at_five_leaves_a_hyperedge_uncovered() {
    let cs = CoverSystem::new(3, 5).unwrap();
    let inst = worked_instance(1);
    let run = cs.process(&inst, &[5]).unwrap();
    assert!(!run.verdict);
    assert!(!cs
        .background()
        .contains(run.trace.final_result(), &edge("(1.2.3,+)".into())));
}

#[test]
fn engine_and_oracle_agree_on_the_worked_instance() {
    let cs = CoverSystem::new(3, 5).unwrap();
    for k in 0..=5 {
        let inst = worked_instance(k);
        let verdict = cs.is_k_coverable(&inst, false).unwrap();
        assert_eq!(verdict.coverable, brute_force_cover(&inst), "k = {k}");
        assert_eq!(verdict, cs.is_k_coverable(&inst, true).unwrap());
    }
}

#[test]
fn oracle_examples() {
    let single = CoverInstance {
        m: 2,
        n: 2,
        k: 1,
        hyperedges: vec![vec![1, 2]],
    };
    assert!(brute_force_cover(&single));
    assert!(brute_force_cover(&worked_instance(1)));
    let empty = CoverInstance {
        m: 1,
        n: 3,
        k: 0,
        hyperedges: vec![],
    };
    assert!(brute_force_cover(&empty));
}

#[test]
fn twin_sustain_system() {
    let system = build_twin_sustain_system(2, 3).unwrap();
    let bg = system.background();
    assert_eq!(bg.elements_by_component()["E"].len(), 2 * (3 + 9));
    assert!(system.reactions().iter().all(|a| !a.is_uninhibited()));

    let ids = |u: &[usize], twin: Option<Twin>| -> Vec<ElementId> {
        let mut ids: Vec<ElementId> = u.iter().map(|v| ElementId::new("V", v.to_string())).collect();
        if let Some(twin) = twin {
            ids.push(edge(hyperedge_key(u, twin)));
        }
        ids
    };
    let e = bg.subobject_from_ids(ids(&[1, 3], Some(Twin::Star))).unwrap();
    assert_eq!(system.result(&e).unwrap(), e);

    let mut both = ids(&[1, 3], Some(Twin::Star));
    both.push(edge(hyperedge_key(&[1, 3], Twin::Plus)));
    let f = bg.subobject_from_ids(ids(&[2], Some(Twin::Star))).unwrap();
    let state = bg.union(&bg.subobject_from_ids(both).unwrap(), &f).unwrap();
    // (1.3,*) is dropped because its twin is present; (2,*) survives
    assert_eq!(system.result(&state).unwrap(), f);

    let empty = bg.empty_subobject();
    assert_eq!(system.result(&empty).unwrap(), empty);
}
