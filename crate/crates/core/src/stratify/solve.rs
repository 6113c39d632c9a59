use std::collections::VecDeque;

use serde::Serialize;

use super::graph::ConstraintGraph;

/// Integer types for every node of a constraint graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeAssignment {
    pub labels: Vec<String>,
    pub types: Vec<i64>,
    /// Minimum of every connected component is zero.
    pub normalized: bool,
}

impl TypeAssignment {
    pub fn get(&self, label: &str) -> Option<i64> {
        self.labels.iter().position(|l| l == label).map(|i| self.types[i])
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, i64)> {
        self.labels.iter().map(String::as_str).zip(self.types.iter().copied())
    }

    pub fn satisfies(&self, graph: &ConstraintGraph) -> bool {
        graph.edges.iter().all(|e| self.types[e.to] - self.types[e.from] == e.offset)
    }

    /// Every type raised by `by`.
    pub fn shifted(&self, by: i64) -> TypeAssignment {
        TypeAssignment {
            labels: self.labels.clone(),
            types: self.types.iter().map(|t| t + by).collect(),
            normalized: by == 0 && self.normalized,
        }
    }
}

/// One traversal of an edge within a cycle; backward traversals contribute
/// the negated offset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CycleStep {
    pub edge: usize,
    pub forward: bool,
}

/// A closed walk through the graph whose signed offsets do not cancel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub steps: Vec<CycleStep>,
    pub sum: i64,
}

impl Cycle {
    /// The steps chain head to tail, close up, and sum to `self.sum != 0`.
    pub fn is_valid_in(&self, graph: &ConstraintGraph) -> bool {
        if self.steps.is_empty() || self.sum == 0 {
            return false;
        }
        let mut sum = 0;
        let mut start = None;
        let mut at = None;
        for step in &self.steps {
            let Some(e) = graph.edges.get(step.edge) else { return false };
            let (from, to, off) = if step.forward { (e.from, e.to, e.offset) } else { (e.to, e.from, -e.offset) };
            if let Some(a) = at {
                if a != from {
                    return false;
                }
            } else {
                start = Some(from);
            }
            at = Some(to);
            sum += off;
        }
        at == start && sum == self.sum
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum StratifyVerdict {
    Stratified { assignment: TypeAssignment },
    Unstratified { cycle: Cycle },
}

impl StratifyVerdict {
    pub fn is_stratified(&self) -> bool {
        matches!(self, StratifyVerdict::Stratified { .. })
    }

    pub fn assignment(&self) -> Option<&TypeAssignment> {
        match self {
            StratifyVerdict::Stratified { assignment } => Some(assignment),
            StratifyVerdict::Unstratified { .. } => None,
        }
    }

    pub fn cycle(&self) -> Option<&Cycle> {
        match self {
            StratifyVerdict::Unstratified { cycle } => Some(cycle),
            StratifyVerdict::Stratified { .. } => None,
        }
    }
}

/// Union-find where each node stores its type minus its parent's type.
struct Potentials {
    parent: Vec<usize>,
    delta: Vec<i64>,
    rank: Vec<u8>,
}

impl Potentials {
    fn new(n: usize) -> Self {
        Potentials { parent: (0..n).collect(), delta: vec![0; n], rank: vec![0; n] }
    }

    /// Root of `u` and `type(u) - type(root)`.
    fn find(&mut self, u: usize) -> (usize, i64) {
        let p = self.parent[u];
        if p == u {
            return (u, 0);
        }
        let (root, d) = self.find(p);
        self.parent[u] = root;
        self.delta[u] += d;
        (root, self.delta[u])
    }

    /// Records `type(b) - type(a) = offset`; false on contradiction.
    fn unite(&mut self, a: usize, b: usize, offset: i64) -> bool {
        let (ra, da) = self.find(a);
        let (rb, db) = self.find(b);
        if ra == rb {
            return db - da == offset;
        }
        // type(rb) - type(ra) = offset + da - db
        let shift = offset + da - db;
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
            self.delta[ra] = -shift;
        } else {
            self.parent[rb] = ra;
            self.delta[rb] = shift;
            if self.rank[ra] == self.rank[rb] {
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Decides a constraint graph: a normalized assignment, or a cycle with a
/// nonzero offset sum.
///
/// Edges are added in order; at the first contradicting edge the witness is
/// that edge closed up by a shortest path through the edges before it.
pub fn solve(graph: &ConstraintGraph) -> StratifyVerdict {
    let n = graph.nodes.len();
    let mut uf = Potentials::new(n);
    for (i, e) in graph.edges.iter().enumerate() {
        if !uf.unite(e.from, e.to, e.offset) {
            return StratifyVerdict::Unstratified { cycle: witness(graph, i) };
        }
    }
    let mut types = vec![0i64; n];
    let mut min_of_root = vec![i64::MAX; n];
    for (u, t) in types.iter_mut().enumerate() {
        let (root, d) = uf.find(u);
        *t = d;
        min_of_root[root] = min_of_root[root].min(d);
    }
    for (u, t) in types.iter_mut().enumerate() {
        let (root, _) = uf.find(u);
        *t -= min_of_root[root];
    }
    StratifyVerdict::Stratified {
        assignment: TypeAssignment {
            labels: graph.nodes.iter().map(|n| n.label.clone()).collect(),
            types,
            normalized: true,
        },
    }
}

fn witness(graph: &ConstraintGraph, bad: usize) -> Cycle {
    let e = graph.edges[bad];
    let mut steps = vec![CycleStep { edge: bad, forward: true }];
    steps.extend(shortest_path(graph, bad, e.to, e.from));
    let sum = steps
        .iter()
        .map(|s| if s.forward { graph.edges[s.edge].offset } else { -graph.edges[s.edge].offset })
        .sum();
    Cycle { steps, sum }
}

/// Breadth-first path from `from` to `to` using only edges before `limit`,
/// visiting neighbours in edge order.
fn shortest_path(graph: &ConstraintGraph, limit: usize, from: usize, to: usize) -> Vec<CycleStep> {
    if from == to {
        return Vec::new();
    }
    let n = graph.nodes.len();
    let mut adj: Vec<Vec<(usize, CycleStep)>> = vec![Vec::new(); n];
    for (i, e) in graph.edges[..limit].iter().enumerate() {
        adj[e.from].push((e.to, CycleStep { edge: i, forward: true }));
        adj[e.to].push((e.from, CycleStep { edge: i, forward: false }));
    }
    let mut prev: Vec<Option<(usize, CycleStep)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &(v, step) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                prev[v] = Some((u, step));
                queue.push_back(v);
            }
        }
    }
    let mut path = Vec::new();
    let mut at = to;
    while at != from {
        let (p, step) = prev[at].expect("contradiction implies the endpoints are connected");
        path.push(step);
        at = p;
    }
    path.reverse();
    path
}
