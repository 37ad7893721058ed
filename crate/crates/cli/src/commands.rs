use std::path::Path;

use ego_refine::graph::{builtin_names, corpus_pairs, Graph, PointedGraph};
use ego_refine::he::{he_signatures, HeParams, Radius};
use ego_refine::hom::{ego_rank, ego_rank_literal, hom_vector, is_acyclic, is_cacyclic, verify_dep, RootedPattern};
use ego_refine::logic::{builtin_formula_names, eval, Env, Formula};
use ego_refine::net::{compile_hgml, multihot, multihot_over, run_hegnn, run_hegnn_exact, Embedding, NetworkFile};
use ego_refine::refine::{graph_equiv_wl, initial_coloring, wl as run_wl, Coloring};
use ego_refine::wlir::{canonical_key, wlir as run_wlir, wlir_graph_equiv};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::envelope;
use crate::source::{self, sha_hex, Named};
use crate::{CliError, Method, Refinement};

pub type Outcome = Result<(Value, u8), CliError>;

const SAME: u8 = 0;
const DIFFERENT: u8 = 10;

fn verdict(distinguished: bool) -> u8 {
    if distinguished {
        DIFFERENT
    } else {
        SAME
    }
}

fn refine_params(method: Method, r: &Refinement, iters: usize) -> Value {
    match method {
        Method::He => json!({"method": "he", "depth": r.depth, "radius": r.radius.to_string(), "iters": iters}),
        Method::Wlir => json!({"method": "wlir", "depth": r.depth}),
        Method::Wl => json!({"method": "wl", "iters": iters}),
        m => json!({"method": m.name()}),
    }
}

/// Graph-level signature for `wl`, `he` and `wlir`: equal signatures mean
/// the method does not tell the graphs apart.
fn signature(g: &Graph, method: Method, r: &Refinement, iters: usize) -> Result<String, CliError> {
    Ok(match method {
        Method::Wl => run_wl(g, &initial_coloring(g), iters).histogram().digest_hex(),
        Method::He => {
            he_signatures(g, HeParams::new(r.depth, r.radius).with_iters(iters)).histogram().digest_hex()
        }
        Method::Wlir => canonical_key(&run_wlir(g, &initial_coloring(g), r.depth)).to_hex(),
        m => return Err(CliError::Usage(format!("method `{}` has no graph signature", m.name()))),
    })
}

fn embed(file: &NetworkFile, g: &Graph) -> Embedding<f64> {
    match &file.propositions {
        Some(p) => multihot_over(g, p),
        None => multihot(g),
    }
}

fn outputs(file: &NetworkFile, g: &Graph) -> Result<Vec<Vec<f64>>, CliError> {
    Ok(run_hegnn(&file.spec, g, &embed(file, g))?.rows)
}

fn sorted_rows(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    rows.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    rows
}

pub fn distinguish(
    left: &str,
    right: Option<&str>,
    method: Method,
    r: &Refinement,
    formula: Option<&str>,
    spec: Option<&str>,
) -> Outcome {
    let (a, b) = source::pair(left, right)?;
    let iters = r.iters.unwrap_or(a.graph.n().max(b.graph.n()));
    let mut inputs = vec![a.describe(), b.describe()];
    let mut params = refine_params(method, r, iters);
    let (distinguished, detail) = match method {
        Method::Wl | Method::He | Method::Wlir => {
            let (sa, sb) = (signature(&a.graph, method, r, iters)?, signature(&b.graph, method, r, iters)?);
            let field = if method == Method::Wlir { "tree_keys" } else { "histograms" };
            (sa != sb, json!({ field: [sa, sb] }))
        }
        Method::Net => {
            let path = spec.ok_or_else(|| CliError::Usage("--method net needs --spec".into()))?;
            let file = source::network(path)?;
            inputs.push(json!({"name": path, "digest": sha_hex(file.to_json().as_bytes())}));
            let (oa, ob) = (sorted_rows(outputs(&file, &a.graph)?), sorted_rows(outputs(&file, &b.graph)?));
            (oa != ob, json!({"output_multisets": [oa, ob]}))
        }
        Method::Formula => {
            let src = formula.ok_or_else(|| CliError::Usage("--method formula needs --formula".into()))?;
            let phi = source::formula(src)?;
            if !phi.is_sentence() {
                return Err(CliError::Usage(format!("`{phi}` has free variables")));
            }
            params["formula"] = json!(phi.to_string());
            let count = |g: &Graph| (0..g.n()).filter(|&v| eval(g, v, &Env::new(), &phi)).count();
            let (ca, cb) = (count(&a.graph), count(&b.graph));
            (a.graph.n() != b.graph.n() || ca != cb, json!({"satisfying_nodes": [ca, cb]}))
        }
    };
    let mut results = detail;
    results["distinguished"] = json!(distinguished);
    Ok((envelope("distinguish", params, inputs, results), verdict(distinguished)))
}

fn parse_env(bindings: &[String], n: usize) -> Result<Env, CliError> {
    let mut env = Env::new();
    for b in bindings {
        let (x, v) = b.split_once('=').ok_or_else(|| CliError::Usage(format!("binding `{b}` is not VAR=NODE")))?;
        let v: usize = v.trim().parse().map_err(|_| CliError::Usage(format!("binding `{b}`: node is not a number")))?;
        if v >= n {
            return Err(ego_refine::Error::NodeOutOfRange(v).into());
        }
        env = env.bind(x.trim(), v);
    }
    Ok(env)
}

pub fn check(graph: &str, formula: &str, node: Option<usize>, bindings: &[String]) -> Outcome {
    let g = source::graph(graph)?;
    let phi = source::formula(formula)?;
    let env = parse_env(bindings, g.graph.n())?;
    if let Some(x) = phi.free_vars().into_iter().find(|x| env.get(x).is_none()) {
        return Err(CliError::Usage(format!("free variable `{x}` needs --env {x}=NODE")));
    }
    let nodes: Vec<usize> = match node {
        Some(v) if v >= g.graph.n() => return Err(ego_refine::Error::NodeOutOfRange(v).into()),
        Some(v) => vec![v],
        None => (0..g.graph.n()).collect(),
    };
    let holds: Vec<bool> = nodes.iter().map(|&v| eval(&g.graph, v, &env, &phi)).collect();
    let all = holds.iter().all(|&h| h);
    let results = match node {
        Some(v) => json!({"node": v, "holds": all}),
        None => json!({"holds": holds, "all": all, "count": holds.iter().filter(|&&h| h).count()}),
    };
    let params = json!({"formula": phi.to_string(), "env": bindings});
    Ok((envelope("check", params, vec![g.describe()], results), verdict(!all)))
}

/// `↓x.φ` becomes `↓x.W^r φ` unless the body already starts with a `W`.
fn bound_binders(f: &Formula, r: u32) -> Formula {
    let go = |g: &Formula| bound_binders(g, r);
    match f {
        Formula::Top | Formula::Prop(_) | Formula::Var(_) => f.clone(),
        Formula::Not(a) => Formula::not(go(a)),
        Formula::And(a, b) => Formula::and(go(a), go(b)),
        Formula::Or(a, b) => Formula::or(go(a), go(b)),
        Formula::Dia(k, a) => Formula::dia(*k, go(a)),
        Formula::Box(a) => Formula::boxed(go(a)),
        Formula::Within(k, a) => Formula::within(*k, go(a)),
        Formula::At(x, a) => Formula::at(x.clone(), go(a)),
        Formula::Down(x, a) => match &**a {
            Formula::Within(..) => Formula::down(x.clone(), go(a)),
            _ => Formula::down(x.clone(), Formula::within(r, go(a))),
        },
    }
}

pub fn compile(formula: &str, radius: Option<u32>, props: Option<Vec<String>>, out: Option<&str>) -> Outcome {
    let mut phi = source::formula(formula)?;
    if let Some(r) = radius {
        if r == 0 {
            return Err(CliError::Usage("--radius must be at least 1".into()));
        }
        phi = bound_binders(&phi, r);
    }
    let props: Vec<String> = props.unwrap_or_else(|| phi.props().into_iter().collect());
    let spec = compile_hgml(&phi, &props)?;
    let file = NetworkFile::new(spec, Some(props.clone()));
    let text = file.to_json();
    let mut results = json!({
        "depth": file.spec.depth(),
        "input_dim": file.spec.input_dim(),
        "output_dim": file.spec.output_dim(),
        "digest": sha_hex(text.as_bytes()),
    });
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Io { path: path.into(), source: e })?;
            results["out"] = json!(path);
        }
        None => results["network"] = serde_json::from_str(&text).expect("round trip"),
    }
    let params = json!({"formula": phi.to_string(), "propositions": props, "radius": radius});
    Ok((envelope("compile", params, vec![], results), SAME))
}

pub fn run_net(spec: &str, graph: &str, exact: bool) -> Outcome {
    let file = source::network(spec)?;
    let g = source::graph(graph)?;
    let emb = embed(&file, &g.graph);
    let rows: Value = if exact {
        json!(run_hegnn_exact(&file.spec, &g.graph, &emb)?.rows)
    } else {
        json!(run_hegnn(&file.spec, &g.graph, &emb)?.rows)
    };
    let classes: Vec<u8> = rows
        .as_array()
        .expect("rows")
        .iter()
        .map(|r| u8::from(r[0].as_f64().is_some_and(|x| x > 0.5)))
        .collect();
    let inputs = vec![json!({"name": spec, "digest": sha_hex(file.to_json().as_bytes())}), g.describe()];
    let results = json!({"outputs": rows, "classes": classes});
    Ok((envelope("run-net", json!({"exact": exact}), inputs, results), SAME))
}

fn dataset(dir: &str) -> Result<Vec<Named>, CliError> {
    let io = |e| CliError::Io { path: dir.into(), source: e };
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("g6" | "graph6")))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let name = f.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        let text = std::fs::read_to_string(&f).map_err(|e| CliError::Io { path: f.display().to_string(), source: e })?;
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let many = lines.len() > 1;
        for (i, l) in lines.into_iter().enumerate() {
            let graph = ego_refine::graph::parse_graph6(l)?;
            out.push(Named { name: if many { format!("{name}#{i}") } else { name.clone() }, graph, point: 0 });
        }
    }
    Ok(out)
}

pub fn report(dir: &str, method: Method, r: &Refinement, out: Option<&str>) -> Outcome {
    let graphs = dataset(Path::new(dir).to_str().unwrap_or(dir))?;
    if graphs.is_empty() {
        return Err(CliError::Usage(format!("no graph6 files in `{dir}`")));
    }
    let sizes: std::collections::BTreeSet<usize> = graphs.iter().map(|g| g.graph.n()).collect();
    if sizes.len() > 1 {
        eprintln!("warning: graphs of different orders {sizes:?}");
    }
    let iters = r.iters.unwrap_or(*sizes.iter().last().expect("nonempty"));
    let sigs: Vec<String> = graphs
        .par_iter()
        .map(|g| signature(&g.graph, method, r, iters))
        .collect::<Result<_, _>>()?;
    let mut class_of: Vec<usize> = Vec::with_capacity(sigs.len());
    let mut reps: Vec<&String> = Vec::new();
    for s in &sigs {
        let c = reps.iter().position(|x| *x == s).unwrap_or_else(|| {
            reps.push(s);
            reps.len() - 1
        });
        class_of.push(c);
    }
    let classes: Vec<Vec<&str>> = (0..reps.len())
        .map(|c| graphs.iter().zip(&class_of).filter(|(_, &k)| k == c).map(|(g, _)| g.name.as_str()).collect())
        .collect();
    let matrix: Vec<Vec<bool>> = sigs.iter().map(|a| sigs.iter().map(|b| a != b).collect()).collect();
    let results = json!({
        "graphs": graphs.len(),
        "class_count": reps.len(),
        "classes": classes,
        "signatures": sigs,
        "distinguished": matrix,
    });
    let inputs = graphs.iter().map(Named::describe).collect();
    let v = envelope("report", refine_params(method, r, iters), inputs, results);
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&v).expect("serializable");
        std::fs::write(path, text).map_err(|e| CliError::Io { path: path.into(), source: e })?;
    }
    Ok((v, SAME))
}

fn coloring_json(col: &Coloring) -> Value {
    json!({
        "colors": col.colors().iter().map(|c| c.digest_hex()).collect::<Vec<_>>(),
        "partition": col.partition(),
        "class_count": col.class_count(),
        "histogram": col.histogram().digest_hex(),
    })
}

pub fn wl(graph: &str, iters: Option<usize>) -> Outcome {
    let g = source::graph(graph)?;
    let t = iters.unwrap_or(g.graph.n());
    let col = run_wl(&g.graph, &initial_coloring(&g.graph), t);
    Ok((envelope("wl", json!({"iters": t}), vec![g.describe()], coloring_json(&col)), SAME))
}

pub fn wlir(graph: &str, depth: usize, tree: bool) -> Outcome {
    let g = source::graph(graph)?;
    let t = run_wlir(&g.graph, &initial_coloring(&g.graph), depth);
    let mut results = json!({
        "key": canonical_key(&t).to_hex(),
        "tree_nodes": t.node_count(),
        "leaves": t.leaves().len(),
        "discrete_leaves": t.leaves().iter().filter(|l| l.coloring.is_discrete()).count(),
    });
    if tree {
        results["tree"] = t.to_json();
    }
    Ok((envelope("wlir", json!({"depth": depth}), vec![g.describe()], results), SAME))
}

fn counter(f: &RootedPattern) -> &'static str {
    if is_acyclic(f) {
        "tree"
    } else if is_cacyclic(f) {
        "c-acyclic"
    } else {
        "brute"
    }
}

pub fn homcount(pattern: &str, graph: &str, node: Option<usize>) -> Outcome {
    let (name, f) = source::pattern(pattern)?;
    let g = source::graph(graph)?;
    let nodes: Vec<usize> = match node {
        Some(v) => vec![v],
        None => (0..g.graph.n()).collect(),
    };
    let counts: Vec<u64> = nodes
        .iter()
        .map(|&v| Ok(hom_vector(std::slice::from_ref(&f), &PointedGraph::new(g.graph.clone(), v)?)?[0]))
        .collect::<Result<_, CliError>>()?;
    let results = match node {
        Some(v) => json!({"node": v, "count": counts[0], "counter": counter(&f)}),
        None => json!({"counts": counts, "counter": counter(&f)}),
    };
    let p = json!({"name": name, "n": f.n(), "root": f.root, "digest": sha_hex(ego_refine::graph::serialize_labeled_text(&f.pattern).as_bytes())});
    Ok((envelope("homcount", json!({}), vec![p, g.describe()], results), SAME))
}

pub fn egorank(pattern: &str, literal: bool) -> Outcome {
    let (name, f) = source::pattern(pattern)?;
    let (rank, w) = if literal { ego_rank_literal(&f)? } else { ego_rank(&f)? };
    let check = verify_dep(&f, &w);
    let results = json!({
        "rank": rank,
        "dep": w.dep,
        "valid": check.valid,
        "normal_form": check.normal_form,
        "acyclic": is_acyclic(&f),
        "c_acyclic": is_cacyclic(&f),
    });
    let p = json!({"name": name, "n": f.n(), "root": f.root});
    Ok((envelope("egorank", json!({"literal": literal}), vec![p], results), SAME))
}

pub fn examples(run: bool) -> Outcome {
    let mut results = json!({"graphs": builtin_names(), "formulas": builtin_formula_names()});
    if run {
        let rows: Vec<Value> = corpus_pairs()
            .into_iter()
            .map(|(name, a, b)| {
                let he = |d: usize, r: Radius| {
                    let iters = a.n().max(b.n());
                    let p = HeParams::new(d, r).with_iters(iters);
                    he_signatures(&a, p).histogram() != he_signatures(&b, p).histogram()
                };
                json!({
                    "pair": name,
                    "wl": !graph_equiv_wl(&a, &b),
                    "wlir_1": !wlir_graph_equiv(&a, &b, 1),
                    "he_1_r1": he(1, Radius::Bounded(1)),
                    "he_1": he(1, Radius::Unbounded),
                    "he_2": he(2, Radius::Unbounded),
                })
            })
            .collect();
        results["separations"] = json!(rows);
    }
    Ok((envelope("examples", json!({"run": run}), vec![], results), SAME))
}

