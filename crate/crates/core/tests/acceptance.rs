//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::Ops;
use ego_refine::graph::{
    brute_force_isomorphic, corpus, corpus_pairs, cycle, cycle_pair, grid2xn, k33, parse_graph6, prism, rook4x4,
    rs_pair, shrikhande, Graph, PointedGraph,
};
use ego_refine::he::{graph_equiv_he, he_signatures, HeParams, Radius};
use ego_refine::hom::{
    ego_rank, hom_brute, hom_cacyclic, hom_tree, hom_vector, is_acyclic, is_cacyclic, verify_dep, RootedPattern,
};
use ego_refine::logic::{
    builtin_formula, canonicalize, eliminate_at, eliminate_within, eval_all, is_canonical, phi_cycle, Formula,
};
use ego_refine::net::{
    classify_all, compile_gml, compile_hgml, multihot_over, run_hegnn_exact, walk_count_network, Embedding, HeGnnSpec,
};
use ego_refine::refine::{graph_equiv_wl, initial_coloring, wl};
use ego_refine::wlir::{canonical_key, iso_test, wlir, wlir_graph_equiv};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const PROPS: [&str; 2] = common::PROPS;
const BUILTINS: [&str; 5] = ["triangle", "psi-rs", "phi-cycle(1)", "phi-cycle(2)", "psi-triangle-cycle"];

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

/// Exact first-channel outputs of a compiled classifier.
fn outputs(spec: &HeGnnSpec, g: &Graph) -> Vec<i64> {
    run_hegnn_exact(spec, g, &multihot_over(g, &PROPS)).unwrap().rows.iter().map(|r| r[0]).collect()
}

fn truth(g: &Graph, phi: &Formula) -> Vec<i64> {
    eval_all(g, phi).into_iter().map(i64::from).collect()
}

fn he(a: &Graph, b: &Graph, d: usize, r: Radius) -> bool {
    graph_equiv_he(a, b, HeParams::new(d, r))
}

fn fig1() -> Outcome {
    let (a, b) = (prism(), k33());
    ensure!(!brute_force_isomorphic(&a, &b).unwrap(), "fig1 graphs are isomorphic");
    ensure!(graph_equiv_wl(&a, &b), "WL separates fig1");
    ensure!(!he(&a, &b, 1, Radius::Unbounded), "depth-1 refinement does not separate fig1");
    let tri = compile_hgml(&builtin_formula("triangle").unwrap(), &PROPS).unwrap();
    let (oa, ob) = (outputs(&tri, &a), outputs(&tri, &b));
    ensure!(oa == vec![1; 6] && ob == vec![0; 6], "triangle network: {oa:?} vs {ob:?}");
    let net = walk_count_network(3, None);
    let ones = |g: &Graph| Embedding::new(1, vec![vec![1.0]; g.n()]).unwrap();
    let ra = run_hegnn_exact(&net, &a, &ones(&a)).unwrap();
    let rb = run_hegnn_exact(&net, &b, &ones(&b)).unwrap();
    ensure!(sorted(ra.rows.clone()) != sorted(rb.rows.clone()), "walk-count network agrees on fig1");
    Ok(format!("walk-count rows {:?} vs {:?}", ra.row(0), rb.row(0)))
}

fn cycle_hierarchy() -> Outcome {
    for r in 1..=2usize {
        let (a, b) = cycle_pair(r);
        ensure!(he(&a, &b, 1, Radius::Bounded(r)), "r={r}: radius r separates");
        ensure!(!he(&a, &b, 1, Radius::Bounded(r + 1)), "r={r}: radius r+1 does not separate");
        let strong = compile_hgml(&phi_cycle(r as u32), &PROPS).unwrap();
        ensure!(sorted(outputs(&strong, &a)) != sorted(outputs(&strong, &b)), "r={r}: compiled radius-(r+1) formula agrees");
        let weak = compile_hgml(&phi_cycle(r as u32 - 1), &PROPS).unwrap();
        ensure!(sorted(outputs(&weak, &a)) == sorted(outputs(&weak, &b)), "r={r}: compiled radius-r formula separates");
    }
    Ok("r = 1, 2".into())
}

fn wlir_complete() -> Outcome {
    let mut rng = common::rng(3);
    let mut iso = 0;
    for i in 0..300 {
        let (a, b) = common::pair(&mut rng, 7, i % 2 == 1);
        let want = brute_force_isomorphic(&a, &b).unwrap();
        ensure!(iso_test(&a, &b).unwrap() == want, "pair {i}: iso_test disagrees with brute force");
        iso += usize::from(want);
    }
    Ok(format!("300 pairs, {iso} isomorphic"))
}

fn wlir_zero_is_wl() -> Outcome {
    let mut pairs: Vec<(Graph, Graph)> = corpus_pairs().into_iter().map(|(_, a, b)| (a, b)).collect();
    let graphs: Vec<Graph> = corpus().into_iter().map(|(_, g)| g).collect();
    for a in &graphs {
        for b in &graphs {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let mut rng = common::rng(4);
    for i in 0..200 {
        pairs.push(common::pair(&mut rng, 9, i % 2 == 0));
    }
    for (i, (a, b)) in pairs.iter().enumerate() {
        ensure!(wlir_graph_equiv(a, b, 0) == graph_equiv_wl(a, b), "pair {i}");
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn rs_separation() -> Outcome {
    let (a, b) = rs_pair();
    ensure!(wlir_graph_equiv(&a, &b, 1), "depth-1 WL-IR separates the pair");
    ensure!(!he(&a, &b, 1, Radius::Unbounded), "depth-1 refinement does not separate the pair");
    let psi = builtin_formula("psi-rs").unwrap();
    let (ca, cb) = (eval_all(&a, &psi), eval_all(&b, &psi));
    let count = |v: &[bool]| v.iter().filter(|&&x| x).count();
    ensure!(count(&ca) == 2 && count(&cb) == 0, "psi holds at {} and {} nodes", count(&ca), count(&cb));
    Ok("psi holds at 2 vs 0 nodes".into())
}

fn srg() -> Outcome {
    let (a, b) = (shrikhande(), rook4x4());
    for d in 0..=1 {
        for r in [Radius::Bounded(1), Radius::Bounded(2), Radius::Unbounded] {
            ensure!(he(&a, &b, d, r), "separated at d={d}, {r:?}");
        }
    }
    ensure!(!he(&a, &b, 2, Radius::Unbounded), "not separated at d=2, unbounded");
    ensure!(!he(&a, &b, 2, Radius::Bounded(1)), "not separated at d=2, radius 1");
    let Ok(path) = std::env::var("EGO_REFINE_SRG_FILE") else {
        return Ok("no SRG(25,12,5,6) family file given (EGO_REFINE_SRG_FILE); family check skipped".into());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let graphs: Vec<Graph> = text.lines().filter(|l| !l.trim().is_empty()).map(|l| parse_graph6(l.trim()).unwrap()).collect();
    let p = HeParams::new(2, Radius::Unbounded);
    let sigs: Vec<String> = graphs.iter().map(|g| he_signatures(g, p).histogram().digest_hex()).collect();
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            let same = iso_test(&graphs[i], &graphs[j]).unwrap();
            ensure!((sigs[i] == sigs[j]) == same, "family graphs {i} and {j}");
        }
    }
    Ok(format!("{} family graphs, one class per isomorphism class", graphs.len()))
}

fn compiler() -> Outcome {
    let mut rng = common::rng(7);
    let graphs: Vec<Graph> = (0..30).map(|_| common::graph(&mut rng, 10, true)).collect();
    for i in 0..30 {
        let phi = common::gml(&mut rng, 4);
        let spec = HeGnnSpec::Leaf(compile_gml(&phi, &PROPS).unwrap());
        for g in &graphs {
            let want = truth(g, &phi);
            ensure!(outputs(&spec, g) == want, "formula {i} {phi}: exact outputs differ");
            let float: Vec<i64> = classify_all(&spec, g, &multihot_over(g, &PROPS)).unwrap().into_iter().map(i64::from).collect();
            ensure!(float == want, "formula {i} {phi}: float classifier differs");
        }
    }
    for name in BUILTINS {
        let phi = builtin_formula(name).unwrap();
        let spec = compile_hgml(&phi, &PROPS).unwrap();
        for (g_name, g) in corpus() {
            ensure!(outputs(&spec, &g) == truth(&g, &phi), "{name} on {g_name}");
        }
    }
    Ok(format!("30 x 30 random, {} builtins x corpus", BUILTINS.len()))
}

fn rewrites() -> Outcome {
    let corpus = corpus();
    for name in BUILTINS {
        let phi = builtin_formula(name).unwrap();
        let canon = canonicalize(&phi).unwrap();
        ensure!(is_canonical(&canon), "{name}: not canonical");
        let no_w = eliminate_within(&phi).unwrap();
        for (g_name, g) in &corpus {
            let want = eval_all(g, &phi);
            ensure!(eval_all(g, &canon) == want, "{name} canonical on {g_name}");
            ensure!(eval_all(g, &no_w) == want, "{name} within-free on {g_name}");
        }
    }
    let mut rng = common::rng(8);
    let within = Ops { radius: Some(2), free_within: false, at: false, max_binders: 2 };
    let at = Ops { radius: None, free_within: false, at: true, max_binders: 2 };
    for i in 0..100 {
        let g = common::graph(&mut rng, 8, true);
        let phi = common::hybrid(&mut rng, 6, within);
        let canon = canonicalize(&phi).unwrap();
        ensure!(is_canonical(&canon), "instance {i}: not canonical");
        ensure!(eval_all(&g, &canon) == eval_all(&g, &phi), "instance {i}: canonicalize");
        let no_w = eliminate_within(&phi).unwrap();
        ensure!(no_w.stats().radii.is_empty(), "instance {i}: within remains");
        ensure!(eval_all(&g, &no_w) == eval_all(&g, &phi), "instance {i}: eliminate_within");
        let phi = common::hybrid(&mut rng, 5, at);
        let no_at = eliminate_at(&phi).unwrap();
        ensure!(no_at.down_depth() == phi.down_depth(), "instance {i}: @-elimination changes depth");
        ensure!(eval_all(&g, &no_at) == eval_all(&g, &phi), "instance {i}: eliminate_at");
    }
    Ok("corpus + 100 per rewrite".into())
}

fn pointed(rng: &mut rand::rngs::StdRng) -> PointedGraph {
    let g = common::graph(rng, 9, true);
    let v = rng.gen_range(0..g.n());
    PointedGraph::new(g, v).unwrap()
}

fn hom_dp() -> Outcome {
    let mut rng = common::rng(9);
    for i in 0..200 {
        let f = common::tree_pattern(&mut rng, 7);
        let g = pointed(&mut rng);
        ensure!(hom_tree(&f, &g).unwrap() == hom_brute(&f, &g).unwrap(), "tree instance {i}");
    }
    for i in 0..200 {
        let f = common::cacyclic_pattern(&mut rng, 7, i % 2 == 0);
        let g = pointed(&mut rng);
        ensure!(hom_cacyclic(&f, &g).unwrap() == hom_brute(&f, &g).unwrap(), "c-acyclic instance {i}");
    }
    Ok("200 + 200 instances".into())
}

fn ego_ranks() -> Outcome {
    let mut rng = common::rng(10);
    let check = |f: &RootedPattern, want: usize, what: &str| -> Result<(), String> {
        let (rank, w) = ego_rank(f).unwrap();
        let c = verify_dep(f, &w);
        ensure!(c.valid && c.max_rank == rank, "{what}: witness rejected: {c:?}");
        ensure!(rank == want, "{what}: rank {rank}, expected {want}");
        Ok(())
    };
    for i in 0..50 {
        let f = common::tree_pattern(&mut rng, 9);
        check(&f, 0, &format!("tree {i}"))?;
    }
    for i in 0..20 {
        let f = common::cacyclic_pattern(&mut rng, 8, true);
        ensure!(is_cacyclic(&f) && !is_acyclic(&f), "pattern {i} is not cyclic c-acyclic");
        check(&f, 1, &format!("c-acyclic {i}"))?;
    }
    for n in 2..=4 {
        check(&RootedPattern::new(grid2xn(n), 0).unwrap(), n - 1, &format!("grid2xn({n})"))?;
    }
    Ok("50 trees, 20 c-acyclic, grids n = 2..4".into())
}

fn invariance() -> Outcome {
    let mut rng = common::rng(11);
    let patterns = [RootedPattern::new(cycle(3), 0).unwrap(), RootedPattern::new(cycle(4), 0).unwrap()];
    let formulas: Vec<Formula> = BUILTINS.iter().map(|n| builtin_formula(n).unwrap()).collect();
    let params = [HeParams::new(1, Radius::Unbounded), HeParams::new(1, Radius::Bounded(1))];
    for (name, g) in corpus() {
        let wl_g = wl(&g, &initial_coloring(&g), g.n());
        let he_g: Vec<_> = params.iter().map(|&p| he_signatures(&g, p)).collect();
        let key_g = canonical_key(&wlir(&g, &initial_coloring(&g), 1));
        let hom_g: Vec<Vec<u64>> =
            (0..g.n()).map(|v| hom_vector(&patterns, &PointedGraph::new(g.clone(), v).unwrap()).unwrap()).collect();
        let eval_g: Vec<Vec<bool>> = formulas.iter().map(|f| eval_all(&g, f)).collect();
        for t in 0..100 {
            let perm = common::permutation(&mut rng, g.n());
            let h = g.permute(&perm);
            let wl_h = wl(&h, &initial_coloring(&h), h.n());
            ensure!(wl_g.histogram() == wl_h.histogram(), "{name} perm {t}: WL histogram");
            for (p, sg) in params.iter().zip(&he_g) {
                let sh = he_signatures(&h, *p);
                ensure!((0..g.n()).all(|v| sg.get(v) == sh.get(perm[v])), "{name} perm {t}: signatures");
            }
            ensure!(canonical_key(&wlir(&h, &initial_coloring(&h), 1)) == key_g, "{name} perm {t}: tree key");
            for v in 0..g.n() {
                let hv = hom_vector(&patterns, &PointedGraph::new(h.clone(), perm[v]).unwrap()).unwrap();
                ensure!(hv == hom_g[v], "{name} perm {t}: hom counts at {v}");
            }
            for (f, eg) in formulas.iter().zip(&eval_g) {
                let eh = eval_all(&h, f);
                ensure!((0..g.n()).all(|v| eg[v] == eh[perm[v]]), "{name} perm {t}: eval of {f}");
            }
        }
    }
    Ok("100 permutations per corpus graph".into())
}

fn orderings() -> Outcome {
    let mut pairs: Vec<(String, Graph, Graph)> = corpus_pairs();
    let graphs = corpus();
    for (i, (na, a)) in graphs.iter().enumerate() {
        for (nb, b) in &graphs[i + 1..] {
            if a.n() == b.n() {
                pairs.push((format!("{na}~{nb}"), a.clone(), b.clone()));
            }
        }
    }
    let radii = [Radius::Bounded(1), Radius::Bounded(2), Radius::Bounded(3), Radius::Unbounded];
    for (name, a, b) in &pairs {
        let wl_eq = graph_equiv_wl(a, b);
        ensure!(wl_eq == he(a, b, 0, Radius::Unbounded), "{name}: WL and depth-0 refinement disagree");
        let max_d = if a.n() > 16 { 1 } else { 2 };
        let mut prev: Option<Vec<bool>> = None;
        for d in 0..=max_d {
            let eq: Vec<bool> = radii.iter().map(|&r| he(a, b, d, r)).collect();
            if eq[3] {
                ensure!(wlir_graph_equiv(a, b, d), "{name} d={d}: refinement equal but WL-IR separates");
            }
            for i in 0..3 {
                ensure!(!eq[i + 1] || eq[i], "{name} d={d}: not monotone in radius at {:?}", radii[i]);
            }
            ensure!(!eq[3] || eq.iter().all(|&x| x), "{name} d={d}: unbounded equal but a radius separates");
            if let Some(p) = &prev {
                ensure!(eq.iter().zip(p).all(|(&now, &before)| !now || before), "{name} d={d}: not monotone in depth");
            }
            if d > 0 && wlir_graph_equiv(a, b, d) {
                ensure!(wlir_graph_equiv(a, b, d - 1), "{name} d={d}: WL-IR not monotone");
            }
            prev = Some(eq);
        }
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("fig1 reproduction", fig1, Duration::from_secs(1)),
        ("radius hierarchy on cycle pairs", cycle_hierarchy, Duration::from_secs(5)),
        ("WL-IR isomorphism completeness", wlir_complete, Duration::from_secs(120)),
        ("WL-IR depth 0 equals WL", wlir_zero_is_wl, Duration::from_secs(30)),
        ("depth-1 refinement beats depth-1 WL-IR", rs_separation, Duration::from_secs(30)),
        ("SRG separation", srg, Duration::from_secs(300)),
        ("compiler correctness", compiler, Duration::from_secs(120)),
        ("rewrite soundness", rewrites, Duration::from_secs(60)),
        ("homomorphism DP", hom_dp, Duration::from_secs(60)),
        ("ego-rank", ego_ranks, Duration::from_secs(180)),
        ("invariance suite", invariance, Duration::from_secs(120)),
        ("cross-method orderings", orderings, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > *budget => Err(format!("took {took:.2?}, budget {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(note) => println!("PASS {:>2} {name} ({took:.2?}): {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
