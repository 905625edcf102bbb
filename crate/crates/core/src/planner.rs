//! Assembly and disassembly planning.
//!
//! The traversal rules of a network are turned into ordering constraints
//! between steps (one step per product-to-process link) and the plan is a
//! topological order of those constraints. Among ready steps the smallest
//! `(process, product)` pair goes first, so plans are deterministic.
//!
//! Constraints, for an edge read `from -> to` in the requested mode:
//!
//! - structural: every step of `from` precedes every step of `to`;
//! - sequence: every step using process `from` precedes every step using `to`;
//! - physical: every unconditional step of `from` precedes every
//!   unconditional step of `to`. Conditionally linked steps are ordered only
//!   through sequence edges.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{EdgeId, EdgeKind, Mode, NodeId, PopanGraph, Reading, Role};
use crate::validate::{self, codes, product_process_pair, ValidationReport};

/// Largest step count accepted by [`enumerate_valid_plans`].
pub const ENUMERATION_LIMIT: usize = 10;

/// One operation: a product handled by a process with its resources.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub product: NodeId,
    pub process: NodeId,
    /// Every resource linked to `process`, sorted.
    pub resources: Vec<NodeId>,
}

impl Step {
    fn key(&self) -> (&NodeId, &NodeId) {
        (&self.process, &self.product)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.process, self.product)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    Structural,
    Sequence,
    Physical,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Structural => "structural",
            Rule::Sequence => "sequence",
            Rule::Physical => "physical",
        }
    }
}

/// `before` must precede `after`; `edge` is the network edge that imposed it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub before: usize,
    pub after: usize,
    pub edge: EdgeId,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceGraph {
    pub mode: Mode,
    /// Sorted by `(process, product)`.
    pub steps: Vec<Step>,
    /// Whether each step comes from a conditional link.
    pub conditional: Vec<bool>,
    /// One constraint per ordered pair, keeping the first rule that produced it.
    pub constraints: Vec<Constraint>,
}

impl PrecedenceGraph {
    pub fn has_pair(&self, before: usize, after: usize) -> bool {
        self.constraints
            .iter()
            .any(|c| c.before == before && c.after == after)
    }

    pub fn index_of(&self, process: &str, product: &str) -> Option<usize> {
        self.steps
            .iter()
            .position(|s| s.process.as_str() == process && s.product.as_str() == product)
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.steps.len()];
        for c in &self.constraints {
            preds[c.after].push(c.before);
        }
        preds
    }
}

/// An ordered list of steps for one mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub mode: Mode,
    pub steps: Vec<Step>,
}

impl Plan {
    /// The same steps in reverse order, for the opposite mode.
    pub fn reversed(&self) -> Plan {
        Plan {
            mode: self.mode.reversed(),
            steps: self.steps.iter().rev().cloned().collect(),
        }
    }

    pub fn position(&self, process: &str, product: &str) -> Option<usize> {
        self.steps
            .iter()
            .position(|s| s.process.as_str() == process && s.product.as_str() == product)
    }
}

/// A dependency cycle found while ordering steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    /// Steps around the cycle, each preceding the next and the last preceding the first.
    pub steps: Vec<Step>,
    /// Network edges imposing each link of the cycle.
    pub edges: Vec<EdgeId>,
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self.steps.iter().map(ToString::to_string).collect();
        let edges: Vec<&str> = self.edges.iter().map(EdgeId::as_str).collect();
        write!(
            f,
            "{} -> {} (edges: {})",
            steps.join(" -> "),
            steps.first().map_or("", String::as_str),
            edges.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("graph is not valid:\n{0}")]
    InvalidGraph(ValidationReport),
    #[error("cycle detected: {0}")]
    CycleDetected(Cycle),
    #[error("{steps} steps exceed the enumeration limit of {limit}")]
    TooLarge { steps: usize, limit: usize },
}

fn ensure_valid(graph: &PopanGraph) -> Result<(), PlanError> {
    let report = validate::validate(graph);
    if report.ok {
        Ok(())
    } else {
        Err(PlanError::InvalidGraph(report))
    }
}

/// Derives the ordering constraints for `mode`. The graph must validate.
pub fn build_precedence(graph: &PopanGraph, mode: Mode) -> Result<PrecedenceGraph, PlanError> {
    ensure_valid(graph)?;

    let mut linked: Vec<(Step, bool)> = graph
        .edges_of_kind(EdgeKind::LinkingP2P)
        .filter_map(|edge| {
            let (product, process) = product_process_pair(graph, edge)?;
            let resources: BTreeSet<NodeId> = graph
                .incident_edges(process)
                .filter(|e| e.kind == EdgeKind::LinkingP2R)
                .filter_map(|e| e.other(&NodeId::from(process)))
                .filter(|id| {
                    graph
                        .node(id.as_str())
                        .is_some_and(|n| n.role == Role::Resource)
                })
                .cloned()
                .collect();
            let step = Step {
                product: product.into(),
                process: process.into(),
                resources: resources.into_iter().collect(),
            };
            Some((step, edge.conditional))
        })
        .collect();
    linked.sort_by(|(x, _), (y, _)| x.key().cmp(&y.key()));
    let (steps, conditional): (Vec<Step>, Vec<bool>) = linked.into_iter().unzip();

    let mut by_product: BTreeMap<&NodeId, Vec<usize>> = BTreeMap::new();
    let mut by_process: BTreeMap<&NodeId, Vec<usize>> = BTreeMap::new();
    for (ix, step) in steps.iter().enumerate() {
        by_product.entry(&step.product).or_default().push(ix);
        by_process.entry(&step.process).or_default().push(ix);
    }

    let mut constraints = Vec::new();
    let mut seen = BTreeSet::new();
    let rules = [
        (EdgeKind::Structural, Rule::Structural),
        (EdgeKind::SequenceProcess, Rule::Sequence),
        (EdgeKind::Physical, Rule::Physical),
    ];
    for (kind, rule) in rules {
        let index = if rule == Rule::Sequence {
            &by_process
        } else {
            &by_product
        };
        for edge in graph.edges_of_kind(kind) {
            let Reading::Directed { from, to } = edge
                .reading(mode)
                .expect("validated graph has well-formed arrows")
            else {
                continue;
            };
            let empty = Vec::new();
            let sources = index.get(&from).unwrap_or(&empty);
            let targets = index.get(&to).unwrap_or(&empty);
            for &before in sources {
                for &after in targets {
                    if rule == Rule::Physical && (conditional[before] || conditional[after]) {
                        continue;
                    }
                    if before != after && seen.insert((before, after)) {
                        constraints.push(Constraint {
                            before,
                            after,
                            edge: edge.id.clone(),
                            rule,
                        });
                    }
                }
            }
        }
    }

    Ok(PrecedenceGraph {
        mode,
        steps,
        conditional,
        constraints,
    })
}

/// Orders all steps of the network for `mode`.
pub fn plan(graph: &PopanGraph, mode: Mode) -> Result<Plan, PlanError> {
    let precedence = build_precedence(graph, mode)?;
    order(&precedence).map_err(PlanError::CycleDetected)
}

/// Topological order of a precedence graph with smallest-index tie-breaking.
pub fn order(precedence: &PrecedenceGraph) -> Result<Plan, Cycle> {
    let n = precedence.steps.len();
    let mut successors = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for c in &precedence.constraints {
        successors[c.before].push(c.after);
        indegree[c.after] += 1;
    }

    let mut ready: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&ix| indegree[ix] == 0)
        .map(Reverse)
        .collect();
    let mut ordered = Vec::with_capacity(n);
    while let Some(Reverse(ix)) = ready.pop() {
        ordered.push(ix);
        for &next in &successors[ix] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                ready.push(Reverse(next));
            }
        }
    }

    if ordered.len() < n {
        let remaining: BTreeSet<usize> = (0..n).filter(|&ix| indegree[ix] > 0).collect();
        return Err(find_cycle(precedence, &remaining));
    }
    Ok(Plan {
        mode: precedence.mode,
        steps: ordered
            .into_iter()
            .map(|ix| precedence.steps[ix].clone())
            .collect(),
    })
}

/// Every step left over by Kahn's algorithm has a predecessor that is also
/// left over, so walking predecessors must revisit a step.
fn find_cycle(precedence: &PrecedenceGraph, remaining: &BTreeSet<usize>) -> Cycle {
    let preds = precedence.predecessors();
    let mut walk = Vec::new();
    let mut visited_at = BTreeMap::new();
    let mut current = *remaining.first().expect("non-empty remainder");
    while !visited_at.contains_key(&current) {
        visited_at.insert(current, walk.len());
        walk.push(current);
        current = preds[current]
            .iter()
            .copied()
            .filter(|p| remaining.contains(p))
            .min()
            .expect("leftover step has a leftover predecessor");
    }
    // walk[start..] follows predecessor links; reverse into precedence order.
    let mut cycle: Vec<usize> = walk[visited_at[&current]..].to_vec();
    cycle.reverse();
    let edges = (0..cycle.len())
        .map(|i| {
            let (before, after) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            precedence
                .constraints
                .iter()
                .find(|c| c.before == before && c.after == after)
                .map(|c| c.edge.clone())
                .expect("cycle follows constraints")
        })
        .collect();
    Cycle {
        steps: cycle
            .iter()
            .map(|&ix| precedence.steps[ix].clone())
            .collect(),
        edges,
    }
}

/// Checks `plan` against the constraints of `graph` for `mode`.
pub fn verify_plan(graph: &PopanGraph, mode: Mode, plan: &Plan) -> ValidationReport {
    let precedence = match build_precedence(graph, mode) {
        Ok(p) => p,
        Err(PlanError::InvalidGraph(report)) => return report,
        Err(other) => unreachable!("build_precedence only fails on invalid graphs: {other}"),
    };

    let mut findings = Vec::new();
    if plan.mode != mode {
        findings.push(validate::error(
            codes::MODE,
            validate::GRAPH_SUBJECT,
            format!("plan is for {} but {} was requested", plan.mode, mode),
        ));
    }

    let mut position: Vec<Option<usize>> = vec![None; precedence.steps.len()];
    for (pos, step) in plan.steps.iter().enumerate() {
        let Some(ix) = precedence.index_of(step.process.as_str(), step.product.as_str()) else {
            findings.push(validate::error(
                codes::UNKNOWN_STEP,
                step.to_string(),
                format!("step {} does not exist in the graph", pos + 1),
            ));
            continue;
        };
        if position[ix].is_some() {
            findings.push(validate::error(
                codes::DUPLICATE_STEP,
                step.to_string(),
                format!("step {} repeats an earlier step", pos + 1),
            ));
            continue;
        }
        position[ix] = Some(pos);
        if step.resources != precedence.steps[ix].resources {
            findings.push(validate::error(
                codes::RESOURCES,
                step.to_string(),
                format!(
                    "step {} lists resources {:?}, expected {:?}",
                    pos + 1,
                    step.resources,
                    precedence.steps[ix].resources
                ),
            ));
        }
    }

    for (ix, pos) in position.iter().enumerate() {
        if pos.is_none() {
            findings.push(validate::error(
                codes::MISSING_STEP,
                precedence.steps[ix].to_string(),
                "step is missing from the plan",
            ));
        }
    }

    for c in &precedence.constraints {
        if let (Some(b), Some(a)) = (position[c.before], position[c.after]) {
            if b > a {
                findings.push(validate::error(
                    codes::ORDER,
                    c.edge.as_str(),
                    format!(
                        "{} must precede {} ({} rule)",
                        precedence.steps[c.before],
                        precedence.steps[c.after],
                        c.rule.as_str()
                    ),
                ));
            }
        }
    }

    ValidationReport::from_findings(findings)
}

/// Every ordering of the steps that satisfies all constraints, in
/// lexicographic order of `(process, product)`, truncated to `limit`.
///
/// Exhaustive search intended as a test oracle for small networks.
pub fn enumerate_valid_plans(
    graph: &PopanGraph,
    mode: Mode,
    limit: usize,
) -> Result<Vec<Plan>, PlanError> {
    let precedence = build_precedence(graph, mode)?;
    let n = precedence.steps.len();
    if n > ENUMERATION_LIMIT {
        return Err(PlanError::TooLarge {
            steps: n,
            limit: ENUMERATION_LIMIT,
        });
    }

    let mut must_follow = vec![vec![false; n]; n];
    for c in &precedence.constraints {
        must_follow[c.before][c.after] = true;
    }

    let mut found = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    let mut used = vec![false; n];
    permute(&must_follow, &mut prefix, &mut used, limit, &mut found);

    Ok(found
        .into_iter()
        .map(|perm| Plan {
            mode,
            steps: perm
                .into_iter()
                .map(|ix| precedence.steps[ix].clone())
                .collect(),
        })
        .collect())
}

fn permute(
    must_follow: &[Vec<bool>],
    prefix: &mut Vec<usize>,
    used: &mut [bool],
    limit: usize,
    found: &mut Vec<Vec<usize>>,
) {
    if found.len() >= limit {
        return;
    }
    if prefix.len() == used.len() {
        found.push(prefix.clone());
        return;
    }
    for next in 0..used.len() {
        if used[next] {
            continue;
        }
        // Placing `next` after a step that it must precede violates a pair.
        if prefix.iter().any(|&placed| must_follow[next][placed]) {
            continue;
        }
        used[next] = true;
        prefix.push(next);
        permute(must_follow, prefix, used, limit, found);
        prefix.pop();
        used[next] = false;
    }
}
