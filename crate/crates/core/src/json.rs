//! JSON forms of witnesses, decompositions and results. Vertex ids are
//! 1-based, as in the text digraph format.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::decomposition::{DecomposeOutcome, Outcome, PathDecomposition};
use crate::error::JsonError;
use crate::solver::SolveResult;
use crate::tree::OutTree;

pub fn tree_to_json(t: &OutTree) -> Value {
    let parent: Map<String, Value> = t
        .parent
        .iter()
        .map(|(&c, &p)| ((c + 1).to_string(), json!(p + 1)))
        .collect();
    json!({
        "type": "out-tree",
        "root": t.root + 1,
        "parent": parent,
        "leaves": t.leaf_count(),
    })
}

pub fn decomposition_to_json(pd: &PathDecomposition) -> Value {
    let bags: Vec<Vec<usize>> = pd.bags.iter().map(|b| b.iter().map(|v| v + 1).collect()).collect();
    json!({
        "type": "path-decomposition",
        "bags": bags,
        "width": pd.width(),
    })
}

/// The witness or decomposition object, extended with `k`, the stage trace
/// and stage statistics.
pub fn decompose_outcome_to_json(o: &DecomposeOutcome) -> Value {
    let mut v = match &o.outcome {
        Outcome::Witness(t) => tree_to_json(t),
        Outcome::Decomposition(pd) => decomposition_to_json(pd),
    };
    let trace: Vec<&str> = o.trace.iter().map(|s| s.tag()).collect();
    let obj = v.as_object_mut().expect("objects");
    obj.insert("k".into(), json!(o.k));
    obj.insert("trace".into(), json!(trace));
    obj.insert(
        "stats".into(),
        json!({
            "branchingLeaves": o.stats.branching_leaves,
            "paths": o.stats.paths,
            "u1": o.stats.u1,
            "u2": o.stats.u2,
            "maxForwardHeads": o.stats.max_forward_heads,
        }),
    );
    v
}

pub fn solve_result_to_json(r: &SolveResult) -> Value {
    json!({
        "problem": r.problem.tag(),
        "k": r.k,
        "answer": r.answer,
        "value": r.value,
        "atLeastK": r.at_least_k(),
        "method": r.method.tag(),
        "witness": r.witness.as_ref().map(tree_to_json),
    })
}

fn shape(msg: impl Into<String>) -> JsonError {
    JsonError::Shape(msg.into())
}

fn vertex(v: &Value, what: &str) -> Result<usize, JsonError> {
    let id = v
        .as_u64()
        .ok_or_else(|| shape(format!("{what}: expected a vertex id, got {v}")))?;
    if id == 0 {
        return Err(shape(format!("{what}: vertex ids start at 1")));
    }
    Ok(id as usize - 1)
}

/// Reads an out-tree object; ids beyond `host_size` are kept so that the
/// validator can report them.
pub fn tree_from_json(v: &Value, host_size: usize) -> Result<OutTree, JsonError> {
    let root = vertex(v.get("root").ok_or_else(|| shape("out-tree without root"))?, "root")?;
    let parents = v
        .get("parent")
        .and_then(Value::as_object)
        .ok_or_else(|| shape("out-tree without parent map"))?;
    let mut parent = BTreeMap::new();
    for (child, p) in parents {
        let c: usize = child
            .parse()
            .ok()
            .filter(|&c: &usize| c > 0)
            .ok_or_else(|| shape(format!("parent key `{child}` is not a vertex id")))?;
        parent.insert(c - 1, vertex(p, "parent")?);
    }
    Ok(OutTree { root, parent, host_size })
}

pub fn decomposition_from_json(v: &Value) -> Result<PathDecomposition, JsonError> {
    let bags = v
        .get("bags")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("path decomposition without bags"))?;
    let bags = bags
        .iter()
        .map(|b| {
            b.as_array()
                .ok_or_else(|| shape("bag is not an array"))?
                .iter()
                .map(|x| vertex(x, "bag"))
                .collect::<Result<BTreeSet<usize>, JsonError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PathDecomposition { bags })
}

/// Anything `validate` accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    Tree {
        tree: OutTree,
        k: Option<usize>,
        /// The claimed answer, when the tree came inside a solve result.
        answer: Option<bool>,
        problem: Option<String>,
    },
    Decomposition {
        pd: PathDecomposition,
        k: Option<usize>,
    },
    /// A solve result without a witness.
    Answer { k: usize, answer: bool },
}

pub fn parse_artifact(text: &str, host_size: usize) -> Result<Artifact, JsonError> {
    let v: Value = serde_json::from_str(text)?;
    let k = v.get("k").and_then(Value::as_u64).map(|k| k as usize);
    if let Some(w) = v.get("witness") {
        let answer = v
            .get("answer")
            .and_then(Value::as_bool)
            .ok_or_else(|| shape("solve result without boolean answer"))?;
        let k = k.ok_or_else(|| shape("solve result without k"))?;
        let problem = v.get("problem").and_then(Value::as_str).map(str::to_string);
        return match w {
            Value::Null => Ok(Artifact::Answer { k, answer }),
            w => Ok(Artifact::Tree {
                tree: tree_from_json(w, host_size)?,
                k: Some(k),
                answer: Some(answer),
                problem,
            }),
        };
    }
    match v.get("type").and_then(Value::as_str) {
        Some("out-tree") => Ok(Artifact::Tree {
            tree: tree_from_json(&v, host_size)?,
            k,
            answer: None,
            problem: None,
        }),
        Some("path-decomposition") => Ok(Artifact::Decomposition {
            pd: decomposition_from_json(&v)?,
            k,
        }),
        Some(other) => Err(shape(format!("unknown artifact type `{other}`"))),
        None => Err(shape("expected an out-tree, a path decomposition or a solve result")),
    }
}
