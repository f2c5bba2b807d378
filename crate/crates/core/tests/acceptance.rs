//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surf_core::document::{load_process, load_system, parse_document, Document};
use surf_core::laws::{random_background, run_law_suite, LawTarget};
use surf_core::universes::pair_key;
use surf_core::{
    brute_force_cover, build_cover_system, detect_cycle, induced_system, is_strong, map_reaction,
    run_process, Background, BackgroundMorphism, Carrier, CoverInstance, CoverSystem, CycleScan,
    DiagramCarrier, ElementId, Kind, Reaction, ReactionSystem, SetCarrier, StrongMode, Subobject,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))?;
    Ok(elapsed)
}

fn demo(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "demo", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn demo_run(process_file: &str) -> (ReactionSystem, Vec<Subobject>) {
    let Document::System(system) = parse_document(&demo("cover-system.json")).unwrap() else {
        panic!("cover-system.json is not a system document")
    };
    let system = load_system(&system).unwrap();
    let Document::Process(process) = parse_document(&demo(process_file)).unwrap() else {
        panic!("{process_file} is not a process document")
    };
    let (contexts, start) = load_process(&process, system.background()).unwrap();
    let trace = run_process(&system, &contexts, &start).unwrap();
    let results = trace.results().to_vec();
    (system, results)
}

fn ids(vertices: &[usize], edges: &[&str]) -> Vec<ElementId> {
    vertices
        .iter()
        .map(|v| ElementId::new("V", v.to_string()))
        .chain(edges.iter().map(|e| ElementId::new("E", *e)))
        .collect()
}

const H_EDGES: [&str; 3] = ["(1.2.3,*)", "(1.3.4,*)", "(1.4.5,*)"];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (system, results) = demo_run("cover-process.json");
    let bg = system.background();
    let expect = |edges: &[&str]| {
        let mut all: Vec<&str> = H_EDGES.to_vec();
        all.extend_from_slice(edges);
        bg.subobject_from_ids(ids(&[1, 2, 3, 4, 5], &all)).unwrap()
    };
    let d1 = expect(&["flag(2)", "(1.2.3,+)"]);
    let d2 = expect(&["flag(2)", "flag(4)", "(1.2.3,+)", "(1.3.4,+)", "(1.4.5,+)"]);
    ensure(results.len() == 3, || format!("{} results", results.len()))?;
    ensure(results[1] == d1, || format!("d1 = {:?}", bg.to_raw(&results[1])))?;
    ensure(results[2] == d2, || format!("d2 = {:?}", bg.to_raw(&results[2])))?;
    let covered = H_EDGES.iter().all(|e| {
        let twin = e.replace(",*)", ",+)");
        bg.contains(&results[2], &ElementId::new("E", twin))
    });
    ensure(covered, || "2-cover: false".into())?;
    let elapsed = within(start, Duration::from_secs(1))?;
    Ok(format!("d1, d2 exact; 2-cover: true; {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let (system, staged) = demo_run("cover-process.json");
    let (_, parallel) = demo_run("cover-process-parallel.json");
    let bg = system.background();
    let twins = |s: &Subobject| -> BTreeSet<String> {
        bg.element_ids(s)
            .filter(|e| e.key.ends_with(",+)"))
            .map(|e| e.key.clone())
            .collect()
    };
    let (a, b) = (twins(staged.last().unwrap()), twins(parallel.last().unwrap()));
    ensure(a == b, || format!("staged {a:?}, parallel {b:?}"))?;
    ensure(a.len() == 3, || format!("twins {a:?}"))?;
    // the engine's parallel variant agrees with the demo files
    let cs = CoverSystem::new(3, 5).map_err(|e| e.to_string())?;
    let inst = CoverInstance {
        m: 3,
        n: 5,
        k: 2,
        hyperedges: vec![vec![1, 2, 3], vec![1, 3, 4], vec![1, 4, 5]],
    };
    let run = cs.process_parallel(&inst, &[2, 4]).map_err(|e| e.to_string())?;
    ensure(run.trace.final_result() == parallel.last().unwrap(), || {
        "engine parallel run differs from the demo".into()
    })?;
    Ok(format!("same final twin set {a:?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut targets: Vec<LawTarget> = [
        Kind::Set,
        Kind::Graph,
        Kind::Hypergraph,
        Kind::Poset,
        Kind::Diagram,
    ]
    .into_iter()
    .map(LawTarget::Kind)
    .collect();
    targets.extend(
        surf_core::diagram::REGISTRY
            .iter()
            .map(|s| LawTarget::Scheme(s.to_string())),
    );
    let mut checked = 0;
    for (i, target) in targets.iter().enumerate() {
        let reports = run_law_suite(target, 200, 1000 + i as u64).map_err(|e| e.to_string())?;
        for report in reports {
            ensure(report.cases == 200, || format!("{target}: {} cases", report.cases))?;
            ensure(report.passed(), || {
                format!(
                    "{target}: {} failed: {:?}",
                    report.law.name(),
                    report.first_failure
                )
            })?;
            checked += report.cases;
        }
    }
    let elapsed = within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{} targets, {checked} law checks, {elapsed:.2?}",
        targets.len()
    ))
}

fn brute_lub(all: &[Subobject], family: &[Subobject]) -> Option<Subobject> {
    let above: Vec<&Subobject> = all
        .iter()
        .filter(|s| family.iter().all(|p| p.is_included_in(s).unwrap()))
        .collect();
    above
        .iter()
        .find(|s| above.iter().all(|t| s.is_included_in(t).unwrap()))
        .map(|s| (*s).clone())
}

fn brute_glb(all: &[Subobject], p: &Subobject, q: &Subobject) -> Option<Subobject> {
    let below: Vec<&Subobject> = all
        .iter()
        .filter(|s| s.is_included_in(p).unwrap() && s.is_included_in(q).unwrap())
        .collect();
    below
        .iter()
        .find(|s| below.iter().all(|t| t.is_included_in(s).unwrap()))
        .map(|s| (*s).clone())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let kinds = [
        Kind::Set,
        Kind::Graph,
        Kind::Hypergraph,
        Kind::Poset,
        Kind::Diagram,
    ];
    let mut backgrounds = 0;
    let mut attempt = 0;
    while backgrounds < 20 {
        let kind = kinds[attempt % kinds.len()];
        attempt += 1;
        let bg = random_background(&mut rng, kind, &format!("lub-{attempt}"), 4)
            .map_err(|e| e.to_string())?;
        let Ok(all) = bg.enumerate(4096) else {
            continue;
        };
        if bg.element_count() == 0 {
            continue;
        }
        backgrounds += 1;
        for _ in 0..100 {
            let size = rng.gen_range(0..4);
            let family: Vec<Subobject> = (0..size).map(|_| all[rng.gen_range(0..all.len())].clone()).collect();
            let union = bg.union_all(&family).map_err(|e| e.to_string())?;
            ensure(Some(&union) == brute_lub(&all, &family).as_ref(), || {
                format!("union differs from the least upper bound on {}", bg.id())
            })?;
            let (p, q) = (
                &all[rng.gen_range(0..all.len())],
                &all[rng.gen_range(0..all.len())],
            );
            let meet = p.intersect(q).map_err(|e| e.to_string())?;
            ensure(Some(&meet) == brute_glb(&all, p, q).as_ref(), || {
                format!("intersection differs from the greatest lower bound on {}", bg.id())
            })?;
        }
    }
    Ok(format!("{backgrounds} backgrounds x 100 families"))
}

/// Checks enabledness transfer, per-reaction results and system results
/// along `f` on `states`.
fn theorem_items(
    f: &BackgroundMorphism,
    system: &ReactionSystem,
    states: &[Subobject],
) -> Result<(), String> {
    let induced = induced_system(f, system).map_err(|e| e.to_string())?;
    let mapped: Vec<Reaction> = system
        .reactions()
        .iter()
        .map(|a| map_reaction(f, a))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for t in states {
        let ft = f.image(t).map_err(|e| e.to_string())?;
        for (a, fa) in system.reactions().iter().zip(&mapped) {
            ensure(
                a.is_enabled(t).unwrap() == fa.is_enabled(&ft).unwrap(),
                || format!("enabledness of {} differs", a.id()),
            )?;
            ensure(
                f.image(&a.result(t).unwrap()).unwrap() == fa.result(&ft).unwrap(),
                || format!("result of {} differs", a.id()),
            )?;
        }
        ensure(
            f.image(&system.result(t).unwrap()).unwrap() == induced.result(&ft).unwrap(),
            || "system results differ".into(),
        )?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let small = build_cover_system(1, 3).map_err(|e| e.to_string())?;
    let large = build_cover_system(1, 4).map_err(|e| e.to_string())?;
    let f = BackgroundMorphism::inclusion(small.background().clone(), large.background().clone())
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sampled: Vec<Subobject> = (0..500)
        .map(|_| small.background().sample_subobject(&mut rng))
        .collect();
    theorem_items(&f, &small, &sampled)?;

    let set = |id: &str, keys: &[&str]| {
        Arc::new(Background::new(id, Carrier::Set(SetCarrier::new(keys.iter().copied()))).unwrap())
    };
    let source = set("abc", &["a", "b", "c"]);
    let target = set("wxyz", &["w", "x", "y", "z"]);
    let s = |keys: &[&str]| {
        source
            .subobject_from_ids(keys.iter().map(|k| ElementId::new("X", *k)))
            .unwrap()
    };
    let system = ReactionSystem::new(
        source.clone(),
        vec![
            Reaction::uninhibited("r1", s(&["a"]), s(&["b"])).unwrap(),
            Reaction::new("r2", s(&["b"]), s(&["a", "c"]), s(&["a"]), s(&["c"])).unwrap(),
            Reaction::new("r3", s(&["a", "c"]), s(&["b"]), s(&[]), s(&["a"])).unwrap(),
        ],
    )
    .unwrap();
    let maps = BTreeMap::from([(
        "X".to_string(),
        BTreeMap::from([
            ("a".to_string(), "y".to_string()),
            ("b".to_string(), "w".to_string()),
            ("c".to_string(), "z".to_string()),
        ]),
    )]);
    let g = BackgroundMorphism::new(source.clone(), target, &maps).map_err(|e| e.to_string())?;
    let all = source.enumerate(16).map_err(|e| e.to_string())?;
    ensure(all.len() == 8, || format!("{} states", all.len()))?;
    theorem_items(&g, &system, &all)?;
    Ok("500 sampled states of B(1,3); 8 states of a 3-element set system".into())
}

fn criterion_6() -> Outcome {
    let a13 = build_cover_system(1, 3).map_err(|e| e.to_string())?;
    let mode = StrongMode::Sample {
        count: 500,
        seed: 6,
    };
    let mut lines = Vec::new();
    for (m, n) in [(1, 4), (2, 3)] {
        let target = build_cover_system(m, n).map_err(|e| e.to_string())?;
        let f = BackgroundMorphism::inclusion(a13.background().clone(), target.background().clone())
            .map_err(|e| e.to_string())?;
        let verdict = is_strong(&f, &a13, &target, mode).map_err(|e| e.to_string())?;
        ensure(verdict.strong, || format!("A(1,3) -> A({m},{n}) not strong"))?;
        ensure(verdict.states_checked == 500, || "wrong sample size".into())?;
        lines.push(format!("A(1,3)->A({m},{n}) strong"));
    }
    // one extra reaction, enabled whenever vertex 1 is present, adds its flag
    let target = build_cover_system(1, 4).map_err(|e| e.to_string())?;
    let bg = target.background().clone();
    let mut reactions = target.reactions().to_vec();
    reactions.push(
        Reaction::uninhibited(
            "extra",
            bg.subobject_from_ids(ids(&[1], &[])).unwrap(),
            bg.subobject_from_ids(ids(&[1], &["flag(1)"])).unwrap(),
        )
        .unwrap(),
    );
    let extended = ReactionSystem::new(bg.clone(), reactions).map_err(|e| e.to_string())?;
    let f = BackgroundMorphism::inclusion(a13.background().clone(), bg).map_err(|e| e.to_string())?;
    let verdict = is_strong(&f, &a13, &extended, mode).map_err(|e| e.to_string())?;
    ensure(!verdict.strong, || "counterexample system reported strong".into())?;
    ensure(verdict.counterexample.is_some(), || "no witness".into())?;
    lines.push("counterexample not strong, witness returned".into());
    Ok(lines.join("; "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut systems: HashMap<(usize, usize), CoverSystem> = HashMap::new();
    let mut checks = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=3.min(n));
        let count = rng.gen_range(0..=5);
        let hyperedges: Vec<Vec<usize>> = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=m);
                (0..len).map(|_| rng.gen_range(1..=n)).collect()
            })
            .collect();
        let cs = systems
            .entry((m, n))
            .or_insert_with(|| CoverSystem::new(m, n).expect("valid parameters"));
        for k in 0..=n {
            let inst = CoverInstance {
                m,
                n,
                k,
                hyperedges: hyperedges.clone(),
            };
            let engine = cs.is_k_coverable(&inst, true).map_err(|e| e.to_string())?;
            ensure(engine.coverable == brute_force_cover(&inst), || {
                format!("disagreement on {inst:?}")
            })?;
            checks += 1;
        }
    }
    let elapsed = within(start, Duration::from_secs(120))?;
    Ok(format!("100 instances, {checks} (instance, k) pairs agree, {elapsed:.2?}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut trajectories = 0;
    for case in 0..50 {
        let size = rng.gen_range(1..=4);
        let keys: Vec<String> = (0..size).map(|i| format!("x{i}")).collect();
        let bg = Arc::new(
            Background::new(format!("set-{case}"), Carrier::Set(SetCarrier::new(keys.clone())))
                .unwrap(),
        );
        let all = bg.enumerate(16).map_err(|e| e.to_string())?;
        let random = |rng: &mut ChaCha8Rng, non_empty: bool| loop {
            let s = all[rng.gen_range(0..all.len())].clone();
            if !non_empty || !s.is_empty() {
                return s;
            }
        };
        let reactions: Vec<Reaction> = (0..rng.gen_range(0..6))
            .map(|i| {
                let i_part = random(&mut rng, false);
                let core = i_part.intersect(&random(&mut rng, false)).unwrap();
                Reaction::new(
                    format!("r{i}"),
                    random(&mut rng, true),
                    i_part,
                    core,
                    random(&mut rng, true),
                )
                .unwrap()
            })
            .collect();
        let system = ReactionSystem::new(bg.clone(), reactions).unwrap();
        let steps = 1 << size;
        for start in &all {
            let contexts = vec![bg.empty_subobject(); steps + 1];
            let trace = run_process(&system, &contexts, start).map_err(|e| e.to_string())?;
            let states = trace.states(&system).unwrap();
            ensure(states.len() == steps + 1, || "wrong trajectory length".into())?;
            let CycleScan::Cycle(info) = detect_cycle(&states) else {
                return Err(format!("no repeat in a trajectory of {}", states.len()));
            };
            ensure(info.tail == 0, || "deterministic run left the cycle".into())?;
            let again = info.reassemble(&states[..=info.second], &[]);
            ensure(again == states, || "reassembly differs".into())?;
            trajectories += 1;
        }
    }
    Ok(format!("50 systems, {trajectories} trajectories"))
}

/// The sub-background spanned by `s`, with the same element keys.
fn restrict(bg: &Background, s: &Subobject, id: &str) -> Background {
    let has = |component: &str, key: &str| bg.contains(s, &ElementId::new(component, key));
    let carrier = match bg.carrier().clone() {
        Carrier::Set(mut c) => {
            c.elements.retain(|x| has("X", x));
            Carrier::Set(c)
        }
        Carrier::Graph(mut c) => {
            c.vertices.retain(|v| has("V", v));
            c.edges.retain(|e| has("E", &e.id));
            Carrier::Graph(c)
        }
        Carrier::Hypergraph(mut c) => {
            c.vertices.retain(|v| has("V", v));
            c.hyperedges.retain(|e| has("E", &e.id));
            Carrier::Hypergraph(c)
        }
        Carrier::Poset(mut c) => {
            c.elements.retain(|a| has("A", a));
            c.relation.retain(|(a, b)| has("R", &pair_key(a, b)));
            Carrier::Poset(c)
        }
        Carrier::Diagram(c) => {
            let sets: BTreeMap<String, Vec<String>> = c
                .sets
                .iter()
                .map(|(name, set)| {
                    (name.clone(), set.iter().filter(|x| has(name, x)).cloned().collect())
                })
                .collect();
            let maps = c
                .scheme
                .arrows
                .iter()
                .map(|arrow| {
                    let map = c.maps[&arrow.name]
                        .iter()
                        .filter(|(x, _)| has(&arrow.source, x))
                        .map(|(x, y)| (x.clone(), y.clone()))
                        .collect();
                    (arrow.name.clone(), map)
                })
                .collect();
            Carrier::Diagram(DiagramCarrier {
                scheme: c.scheme.clone(),
                sets,
                maps,
            })
        }
    };
    Background::new(id, carrier).unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let kinds = [
        Kind::Set,
        Kind::Graph,
        Kind::Hypergraph,
        Kind::Poset,
        Kind::Diagram,
    ];
    for case in 0..200 {
        let target = Arc::new(
            random_background(&mut rng, kinds[case % kinds.len()], &format!("t{case}"), 5)
                .map_err(|e| e.to_string())?,
        );
        let span = target.sample_subobject(&mut rng);
        let source = Arc::new(restrict(&target, &span, &format!("s{case}")));
        let f = BackgroundMorphism::inclusion(source.clone(), target.clone())
            .map_err(|e| e.to_string())?;
        ensure(f.is_mono(), || format!("case {case}: inclusion is not mono"))?;
        let family: Vec<Subobject> = (0..rng.gen_range(0..4))
            .map(|_| source.sample_subobject(&mut rng))
            .collect();
        let images: Vec<Subobject> = family.iter().map(|p| f.image(p).unwrap()).collect();
        ensure(
            f.image(&source.union_all(&family).unwrap()).unwrap()
                == target.union_all(&images).unwrap(),
            || format!("case {case}: image of union differs"),
        )?;
        let (p, q) = (source.sample_subobject(&mut rng), source.sample_subobject(&mut rng));
        ensure(
            f.image(&p.intersect(&q).unwrap()).unwrap()
                == f.image(&p).unwrap().intersect(&f.image(&q).unwrap()).unwrap(),
            || format!("case {case}: image of intersection differs"),
        )?;
    }
    Ok("200 sampled monos".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("demo run reproduces the worked example", criterion_1),
        ("one-step parallel context", criterion_2),
        ("lattice law suite", criterion_3),
        ("union and intersection are lub and glb", criterion_4),
        ("results transfer along monomorphisms", criterion_5),
        ("strong morphism grid", criterion_6),
        ("cover engine agrees with the oracle", criterion_7),
        ("cycle structure of trajectories", criterion_8),
        ("images commute with union and intersection", criterion_9),
    ];
    // keep failure output to the summary lines
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(message)
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({detail})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
