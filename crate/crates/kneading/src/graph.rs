//! Follower-set graph of `Σ(u, v)`.
//!
//! A vertex `[p, q]` stands for the words `w` whose longest suffix prefixing
//! `u` has length `p` and whose longest suffix prefixing `v` has length `q`.
//! Out-edges of `[p, q]`:
//!
//! * `u_p = v_q`: one edge labelled `u_p` to `[p+1, q+1]`;
//! * `u_p < v_q`: `u_p` to `[p+1, 0]`, `v_q` to `[0, q+1]`, and every
//!   `u_p < j < v_q` to `[0, 0]`.
//!
//! The follower set of `[p, q]` depends only on the tails `(σᵖu, σᵠv)`, so
//! for eventually periodic data the collapsed graph keyed by those tails is
//! finite.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::strings::{check_conditions, common_alphabet, EpString, Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GraphMode {
    /// Vertices of level `max(p, q) ≤ K`.
    Truncate(usize),
    /// Quotient by equal tails.
    Collapse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FollowerVertex {
    pub p: usize,
    pub q: usize,
    /// Index of the tail pair `(σᵖu, σᵠv)` in order of discovery.
    pub class_id: usize,
}

impl FollowerVertex {
    pub fn level(&self) -> usize {
        self.p.max(self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub label: Symbol,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FollowerGraph {
    pub k: u32,
    pub mode: GraphMode,
    pub vertices: Vec<FollowerVertex>,
    pub edges: Vec<Edge>,
    pub root: usize,
}

enum Target {
    Both,
    Upper,
    Lower,
    Root,
}

fn rule(up: Symbol, vq: Symbol) -> Result<Vec<(Symbol, Target)>> {
    if up == vq {
        return Ok(vec![(up, Target::Both)]);
    }
    if up > vq {
        return Err(Error::ConditionViolation(format!("u_p = {up} exceeds v_q = {vq}")));
    }
    let mut out = vec![(up, Target::Upper)];
    out.extend((up + 1..vq).map(|j| (j, Target::Root)));
    out.push((vq, Target::Lower));
    Ok(out)
}

type Key = (EpString, EpString);

struct Builder {
    u: EpString,
    v: EpString,
    classes: HashMap<Key, usize>,
}

impl Builder {
    fn class_of(&mut self, p: usize, q: usize) -> usize {
        let key = (self.u.shift(p), self.v.shift(q));
        let n = self.classes.len();
        *self.classes.entry(key).or_insert(n)
    }
}

/// Build `Ḡ(u, v)` truncated at a level, or its finite collapse.
pub fn build_graph(u: &EpString, v: &EpString, mode: GraphMode) -> Result<FollowerGraph> {
    let report = check_conditions(u, v);
    if !report.admissible() {
        return Err(Error::ConditionViolation(report.violations.join("; ")));
    }
    let (u, v, k) = common_alphabet(u, v);
    let mut b = Builder { u: u.clone(), v: v.clone(), classes: HashMap::new() };
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    // index by (p, q) when truncating, by class when collapsing
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let root_class = b.class_of(0, 0);
    vertices.push(FollowerVertex { p: 0, q: 0, class_id: root_class });
    index.insert(node_key(mode, 0, 0, root_class), 0);
    queue.push_back(0usize);
    while let Some(i) = queue.pop_front() {
        let FollowerVertex { p, q, .. } = vertices[i];
        for (label, t) in rule(u.symbol(p), v.symbol(q))? {
            let (p2, q2) = match t {
                Target::Both => (p + 1, q + 1),
                Target::Upper => (p + 1, 0),
                Target::Lower => (0, q + 1),
                Target::Root => (0, 0),
            };
            if let GraphMode::Truncate(kmax) = mode {
                if p2.max(q2) > kmax {
                    continue;
                }
            }
            let class = b.class_of(p2, q2);
            let nk = node_key(mode, p2, q2, class);
            let j = match index.get(&nk) {
                Some(&j) => j,
                None => {
                    let j = vertices.len();
                    vertices.push(FollowerVertex { p: p2, q: q2, class_id: class });
                    index.insert(nk, j);
                    queue.push_back(j);
                    j
                }
            };
            edges.push(Edge { from: i, label, to: j });
        }
    }
    Ok(FollowerGraph { k, mode, vertices, edges, root: 0 })
}

fn node_key(mode: GraphMode, p: usize, q: usize, class: usize) -> (usize, usize) {
    match mode {
        GraphMode::Truncate(_) => (p, q),
        GraphMode::Collapse => (class, usize::MAX),
    }
}

/// Two-sided bound on the Perron root.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerronBracket {
    pub lo: f64,
    pub hi: f64,
}

impl PerronBracket {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl FollowerGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn out_edges(&self, i: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == i)
    }

    fn adjacency(&self) -> Vec<Vec<(Symbol, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push((e.label, e.to));
        }
        adj
    }

    /// No vertex has two out-edges with the same label.
    pub fn is_right_resolving(&self) -> bool {
        self.adjacency().iter().all(|out| {
            let mut labels: Vec<Symbol> = out.iter().map(|e| e.0).collect();
            labels.sort_unstable();
            labels.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Vertex reached from the root by reading `w`.
    pub fn walk(&self, w: &[Symbol]) -> Option<usize> {
        let adj = self.adjacency();
        let mut at = self.root;
        for &s in w {
            at = adj[at].iter().find(|e| e.0 == s)?.1;
        }
        Some(at)
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for &(_, j) in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Subgraph of everything reachable from `start`, rooted there.
    pub fn subgraph_from(&self, start: usize) -> FollowerGraph {
        let seen = self.reachable_from(start);
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut vertices = vec![self.vertices[start]];
        map[start] = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            if seen[i] && i != start {
                map[i] = vertices.len();
                vertices.push(*v);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| seen[e.from])
            .map(|e| Edge { from: map[e.from], label: e.label, to: map[e.to] })
            .collect();
        FollowerGraph { k: self.k, mode: self.mode, vertices, edges, root: 0 }
    }

    /// Number of vertices on the upper (`p > q`) and lower (`p < q`) branches.
    pub fn census(&self) -> (usize, usize) {
        let upper = self.vertices.iter().filter(|v| v.p > v.q).count();
        let lower = self.vertices.iter().filter(|v| v.p < v.q).count();
        (upper, lower)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph follower {\n    rankdir=LR;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if i == self.root { ", shape=doublecircle" } else { "" };
            s.push_str(&format!("    n{i} [label=\"[{},{}] c{}\"{shape}];\n", v.p, v.q, v.class_id));
        }
        for e in &self.edges {
            s.push_str(&format!("    n{} -> n{} [label=\"{}\"];\n", e.from, e.to, e.label));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (upper, lower) = self.census();
        json!({
            "k": self.k,
            "mode": match self.mode {
                GraphMode::Collapse => json!("collapse"),
                GraphMode::Truncate(kmax) => json!({ "truncate": kmax }),
            },
            "root": self.root,
            "vertices": self.vertices,
            "edges": self.edges,
            "census": {
                "vertices": self.vertices.len(),
                "edges": self.edges.len(),
                "upper": upper,
                "lower": lower,
            },
        })
    }
}

/// Bracket on the spectral radius of the part of `g` reachable from the root.
///
/// Each strongly connected component is handled separately with power
/// iteration on `A + I`, which is primitive, and the Collatz–Wielandt ratios
/// `min (Bx)_i/x_i ≤ ρ(B) ≤ max (Bx)_i/x_i`. Components that are a single
/// cycle have radius exactly 1. An acyclic graph has radius 0.
pub fn perron_root(g: &FollowerGraph, tol: f64) -> PerronBracket {
    let seen = g.reachable_from(g.root);
    let mut pg = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..g.vertices.len()).map(|i| pg.add_node(i)).collect();
    for e in &g.edges {
        if seen[e.from] {
            pg.add_edge(nodes[e.from], nodes[e.to], ());
        }
    }
    let mut best = PerronBracket { lo: 0.0, hi: 0.0 };
    for comp in tarjan_scc(&pg) {
        let members: Vec<usize> = comp.iter().map(|n| pg[*n]).filter(|&i| seen[i]).collect();
        if members.is_empty() {
            continue;
        }
        let mut local = HashMap::new();
        for (a, &i) in members.iter().enumerate() {
            local.insert(i, a);
        }
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); members.len()];
        for e in &g.edges {
            if let (Some(&a), Some(&b)) = (local.get(&e.from), local.get(&e.to)) {
                rows[a].push(b);
            }
        }
        if rows.iter().all(|r| r.is_empty()) {
            continue;
        }
        let b = if rows.iter().all(|r| r.len() == 1) {
            PerronBracket { lo: 1.0, hi: 1.0 }
        } else {
            power_bracket(&rows, tol)
        };
        if b.mid() > best.mid() {
            best = b;
        }
    }
    best
}

fn power_bracket(rows: &[Vec<usize>], tol: f64) -> PerronBracket {
    let n = rows.len();
    let mut x = vec![1.0f64; n];
    let mut bracket = PerronBracket { lo: 0.0, hi: f64::INFINITY };
    for _ in 0..1_000_000 {
        let y: Vec<f64> = (0..n).map(|i| x[i] + rows[i].iter().map(|&j| x[j]).sum::<f64>()).collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        bracket = PerronBracket { lo: lo.max(bracket.lo + 1.0) - 1.0, hi: hi.min(bracket.hi + 1.0) - 1.0 };
        if bracket.hi - bracket.lo <= tol {
            break;
        }
        let m = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / m).collect();
    }
    bracket
}

/// `log₂ ρ`, zero when the radius does not exceed 1.
pub fn graph_entropy(g: &FollowerGraph, tol: f64) -> f64 {
    let b = perron_root(g, tol * std::f64::consts::LN_2);
    let r = b.mid();
    if r <= 1.0 {
        0.0
    } else {
        r.log2()
    }
}

/// `log₂ λ*` for the largest root of `λ^{−p} + λ^{−q} = 1`, by bisection on
/// `[1, 2]`.
pub fn two_cycle_entropy(p: u32, q: u32, tol: f64) -> f64 {
    assert!(p >= 1 && q >= 1, "cycle lengths must be positive");
    let f = |l: f64| l.powi(-(p as i32)) + l.powi(-(q as i32)) - 1.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while hi - lo > tol.max(f64::EPSILON) {
        let m = 0.5 * (lo + hi);
        if f(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    (0.5 * (lo + hi)).log2()
}

/// Number of paths of length `n` starting at the root.
pub fn word_count(g: &FollowerGraph, n: usize) -> BigUint {
    let mut counts = vec![BigUint::from(0u32); g.vertices.len()];
    counts[g.root] = BigUint::from(1u32);
    for _ in 0..n {
        let mut next = vec![BigUint::from(0u32); g.vertices.len()];
        for e in &g.edges {
            if counts[e.from] != BigUint::from(0u32) {
                next[e.to] += &counts[e.from];
            }
        }
        counts = next;
    }
    counts.into_iter().sum()
}

fn longest_suffix_prefixing(w: &[Symbol], x: &EpString) -> Word {
    for len in (1..=w.len()).rev() {
        let s = &w[w.len() - len..];
        if s.iter().enumerate().all(|(i, &c)| x.symbol(i) == c) {
            return Word(s.to_vec());
        }
    }
    Word::empty()
}

/// `u(w)`: longest suffix of `w` that is a prefix of `u`.
pub fn longest_u_suffix(w: &[Symbol], u: &EpString) -> Word {
    longest_suffix_prefixing(w, u)
}

/// `v(w)`: longest suffix of `w` that is a prefix of `v`.
pub fn longest_v_suffix(w: &[Symbol], v: &EpString) -> Word {
    longest_suffix_prefixing(w, v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parsing {
    pub factors: Vec<Word>,
}

fn common_prefix(w: &[Symbol], x: &EpString) -> usize {
    w.iter().enumerate().take_while(|(i, &c)| x.symbol(*i) == c).count()
}

/// Greedy factorisation into words that are either nonempty prefixes of `x`
/// or a letter different from `x₀` followed by a (possibly empty) prefix of
/// `x`.
fn parse_greedy(w: &[Symbol], x: &EpString) -> Parsing {
    let mut factors = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let rest = &w[i..];
        let len = if rest[0] == x.first() { common_prefix(rest, x) } else { 1 + common_prefix(&rest[1..], x) };
        factors.push(Word(rest[..len].to_vec()));
        i += len;
    }
    Parsing { factors }
}

pub fn u_parsing(w: &[Symbol], u: &EpString) -> Parsing {
    parse_greedy(w, u)
}

pub fn v_parsing(w: &[Symbol], v: &EpString) -> Parsing {
    parse_greedy(w, v)
}
