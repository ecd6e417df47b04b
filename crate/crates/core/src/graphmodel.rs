//! Coupling graphs and proper colorings with pinned vertices.
//!
//! Spins of the same color are never coupled, so they can share one row of
//! the refocussing matrix. A pinned group receives a dedicated color that no
//! other spin may use.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{Error, Result};

pub const MAX_SPINS: usize = 64;

/// Largest graph [`exact_coloring`] accepts.
pub const MAX_EXACT_COLORING_SPINS: usize = 12;

/// Named spins plus the resolved J-couplings between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    names: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl CouplingGraph {
    /// Builds a graph from names and index pairs. Duplicate edges collapse;
    /// self-loops, unknown indices and duplicate names are rejected.
    pub fn new<I>(names: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = names.len();
        if n == 0 || n > MAX_SPINS {
            return Err(Error::SpinCount(n));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let mut graph = CouplingGraph {
            adjacency: vec![BTreeSet::new(); n],
            edges: BTreeSet::new(),
            names,
        };
        for (a, b) in edges {
            graph.insert_edge(a, b)?;
        }
        Ok(graph)
    }

    /// Graph with default labels `I0`, `I1`, ….
    pub fn with_default_names<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new((0..n).map(|i| format!("I{i}")).collect(), edges)
    }

    /// Fully coupled system on `n` spins.
    pub fn complete(n: usize) -> Result<Self> {
        Self::with_default_names(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::with_default_names(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::with_default_names(n, std::iter::empty())
    }

    fn insert_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let n = self.names.len();
        for v in [a, b] {
            if v >= n {
                return Err(Error::UnknownSpin(format!("#{v}")));
            }
        }
        if a == b {
            return Err(Error::SelfLoop(self.names[a].clone()));
        }
        self.edges.insert((a.min(b), a.max(b)));
        self.adjacency[a].insert(b);
        self.adjacency[b].insert(a);
        Ok(())
    }

    pub fn spin_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, spin: usize) -> &str {
        &self.names[spin]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Edges as `(i, j)` with `i < j`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, spin: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[spin].iter().copied()
    }

    pub fn degree(&self, spin: usize) -> usize {
        self.adjacency[spin].len()
    }

    /// Copy of the graph with one edge removed (no-op if absent).
    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let mut g = self.clone();
        g.edges.remove(&(a.min(b), a.max(b)));
        if a < g.adjacency.len() && b < g.adjacency.len() {
            g.adjacency[a].remove(&b);
            g.adjacency[b].remove(&a);
        }
        g
    }
}

/// Maximum number of couplings at any spin.
pub fn max_degree(g: &CouplingGraph) -> usize {
    (0..g.spin_count()).map(|v| g.degree(v)).max().unwrap_or(0)
}

/// Color index per spin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    assignment: Vec<usize>,
    color_count: usize,
}

impl Coloring {
    /// Wraps a raw assignment. Colors must be contiguous from zero.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let color_count = assignment.iter().map(|&c| c + 1).max().unwrap_or(0);
        let used: BTreeSet<usize> = assignment.iter().copied().collect();
        if used.len() != color_count {
            return Err(Error::InvalidInput(
                "coloring leaves a color index unused".to_string(),
            ));
        }
        Ok(Coloring {
            assignment,
            color_count,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn color_of(&self, spin: usize) -> usize {
        self.assignment[spin]
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    /// Spins of each color, in ascending spin order.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.color_count];
        for (spin, &c) in self.assignment.iter().enumerate() {
            groups[c].push(spin);
        }
        groups
    }

    /// No edge of `g` joins two spins of the same color.
    pub fn is_proper(&self, g: &CouplingGraph) -> bool {
        self.assignment.len() == g.spin_count()
            && g.edges()
                .all(|(a, b)| self.assignment[a] != self.assignment[b])
    }
}

fn validate_pins(g: &CouplingGraph, pinned: &[Vec<usize>]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (k, group) in pinned.iter().enumerate() {
        if group.is_empty() {
            return Err(Error::InvalidPin(format!("pinned group {k} is empty")));
        }
        for &v in group {
            if v >= g.spin_count() {
                return Err(Error::InvalidPin(format!(
                    "pinned spin #{v} does not exist"
                )));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidPin(format!(
                    "spin `{}` appears in more than one pinned group",
                    g.name(v)
                )));
            }
        }
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                if g.has_edge(a, b) {
                    return Err(Error::InvalidPin(format!(
                        "pinned spins `{}` and `{}` are coupled",
                        g.name(a),
                        g.name(b)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Spins outside pinned groups, by descending degree then ascending index.
fn greedy_order(g: &CouplingGraph, pinned: &[Vec<usize>]) -> Vec<usize> {
    let pinned_set: BTreeSet<usize> = pinned.iter().flatten().copied().collect();
    let mut order: Vec<usize> = (0..g.spin_count())
        .filter(|v| !pinned_set.contains(v))
        .collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

/// Largest-degree-first greedy coloring.
///
/// Pinned group `k` gets color `k`, and colors `0..pinned.len()` are never
/// handed to any other spin. Every other spin takes the smallest color not
/// used by an already-colored neighbor.
pub fn greedy_coloring(g: &CouplingGraph, pinned: &[Vec<usize>]) -> Result<Coloring> {
    validate_pins(g, pinned)?;
    let reserved = pinned.len();
    let mut color: Vec<Option<usize>> = vec![None; g.spin_count()];
    for (k, group) in pinned.iter().enumerate() {
        for &v in group {
            color[v] = Some(k);
        }
    }
    for v in greedy_order(g, pinned) {
        let taken: BTreeSet<usize> = g.neighbors(v).filter_map(|u| color[u]).collect();
        let c = (reserved..)
            .find(|c| !taken.contains(c))
            .expect("unbounded range");
        color[v] = Some(c);
    }
    Coloring::new(color.into_iter().map(|c| c.expect("all colored")).collect())
}

/// Minimum-color proper coloring honoring the same pin rules as
/// [`greedy_coloring`], found by backtracking. Limited to small graphs.
pub fn exact_coloring(g: &CouplingGraph, pinned: &[Vec<usize>]) -> Result<Coloring> {
    if g.spin_count() > MAX_EXACT_COLORING_SPINS {
        return Err(Error::SizeLimit {
            what: "spin count for exact coloring",
            value: g.spin_count(),
            max: MAX_EXACT_COLORING_SPINS,
        });
    }
    validate_pins(g, pinned)?;
    let reserved = pinned.len();
    let mut color: Vec<Option<usize>> = vec![None; g.spin_count()];
    for (k, group) in pinned.iter().enumerate() {
        for &v in group {
            color[v] = Some(k);
        }
    }
    let order = greedy_order(g, pinned);
    let lower = usize::from(!order.is_empty());
    for extra in lower..=order.len() {
        if backtrack(
            g,
            &order,
            0,
            reserved,
            reserved + extra,
            reserved,
            &mut color,
        ) {
            return Coloring::new(color.into_iter().map(|c| c.expect("all colored")).collect());
        }
    }
    unreachable!("a graph can always be colored with one color per spin")
}

fn backtrack(
    g: &CouplingGraph,
    order: &[usize],
    pos: usize,
    reserved: usize,
    limit: usize,
    next_fresh: usize,
    color: &mut [Option<usize>],
) -> bool {
    let Some(&v) = order.get(pos) else {
        // every color below the limit must be used
        return next_fresh == limit;
    };
    // Symmetry breaking: only open one new color at a time.
    for c in reserved..limit.min(next_fresh + 1) {
        if g.neighbors(v).any(|u| color[u] == Some(c)) {
            continue;
        }
        color[v] = Some(c);
        let fresh = next_fresh.max(c + 1);
        if backtrack(g, order, pos + 1, reserved, limit, fresh, color) {
            return true;
        }
    }
    color[v] = None;
    false
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraphDocument {
    spins: Vec<String>,
    #[serde(default)]
    couplings: Vec<(String, String)>,
    #[serde(default)]
    shifts: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    j: Option<BTreeMap<String, f64>>,
}

/// A parsed graph document: the graph plus any numeric values it declares.
///
/// ```json
/// {"spins": ["a", "b"], "couplings": [["a", "b"]],
///  "shifts": {"a": 12.5}, "j": {"a:b": 7.0}}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDocument {
    pub graph: CouplingGraph,
    /// Chemical shift per spin (rad/s), where the document gives one.
    pub shifts: Vec<Option<f64>>,
    /// Coupling constants (Hz) keyed by `(i, j)` with `i < j`.
    pub couplings: BTreeMap<(usize, usize), f64>,
}

impl GraphDocument {
    pub fn parse(document: &str) -> Result<Self> {
        let raw: RawGraphDocument =
            serde_json::from_str(document).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        let lookup = |names: &[String], name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownSpin(name.to_string()))
        };
        let mut edges = Vec::with_capacity(raw.couplings.len());
        for (a, b) in &raw.couplings {
            let (ia, ib) = (lookup(&raw.spins, a)?, lookup(&raw.spins, b)?);
            if ia == ib {
                return Err(Error::SelfLoop(a.clone()));
            }
            edges.push((ia, ib));
        }
        let graph = CouplingGraph::new(raw.spins, edges)?;

        let mut shifts = vec![None; graph.spin_count()];
        for (name, value) in raw.shifts.unwrap_or_default() {
            let i = lookup(graph.names(), &name)?;
            if !value.is_finite() {
                return Err(Error::MalformedDocument(format!(
                    "shift of `{name}` is not finite"
                )));
            }
            shifts[i] = Some(value);
        }

        let mut couplings = BTreeMap::new();
        for (key, value) in raw.j.unwrap_or_default() {
            let (a, b) = split_pair_key(&graph, &key)?;
            if !graph.has_edge(a, b) {
                return Err(Error::MalformedDocument(format!(
                    "J given for `{key}` but the spins are not coupled"
                )));
            }
            if !value.is_finite() || value == 0.0 {
                return Err(Error::MalformedDocument(format!(
                    "J for `{key}` must be a finite nonzero number"
                )));
            }
            couplings.insert((a.min(b), a.max(b)), value);
        }
        Ok(GraphDocument {
            graph,
            shifts,
            couplings,
        })
    }
}

/// Resolves an `"a:b"` key. Names may themselves contain `:`, so every split
/// point is tried and exactly one must name two known spins.
fn split_pair_key(g: &CouplingGraph, key: &str) -> Result<(usize, usize)> {
    let mut found = None;
    for (pos, _) in key.match_indices(':') {
        if let (Some(a), Some(b)) = (g.index_of(&key[..pos]), g.index_of(&key[pos + 1..])) {
            if found.replace((a, b)).is_some() {
                return Err(Error::MalformedDocument(format!(
                    "coupling key `{key}` is ambiguous"
                )));
            }
        }
    }
    found
        .ok_or_else(|| Error::MalformedDocument(format!("coupling key `{key}` names no spin pair")))
}

/// Parses the graph JSON format, ignoring numeric fields.
pub fn parse_graph(document: &str) -> Result<CouplingGraph> {
    GraphDocument::parse(document).map(|d| d.graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Smallest k admitting a proper k-coloring, by enumerating all k^N maps.
    fn brute_force_chromatic(g: &CouplingGraph) -> usize {
        let n = g.spin_count();
        let edges: Vec<_> = g.edges().collect();
        for k in 1..=n {
            let total = k.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let colors: Vec<usize> = (0..n)
                    .map(|_| {
                        let d = c % k;
                        c /= k;
                        d
                    })
                    .collect();
                if edges.iter().all(|&(a, b)| colors[a] != colors[b]) {
                    return k;
                }
            }
        }
        n
    }

    #[test]
    fn parse_minimal() {
        let g = parse_graph(r#"{"spins":["a","b"],"couplings":[["a","b"]]}"#).unwrap();
        assert_eq!(g.spin_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn parse_complete_four() {
        let doc = r#"{"spins":["a","b","c","d"],
            "couplings":[["a","b"],["a","c"],["a","d"],["b","c"],["b","d"],["c","d"],["d","c"]]}"#;
        let g = parse_graph(doc).unwrap();
        assert_eq!(g.spin_count(), 4);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_graph(r#"{"spins":["a","b"],"couplings":[["a","a"]]}"#),
            Err(Error::SelfLoop("a".into()))
        );
        assert_eq!(
            parse_graph(r#"{"spins":["a","a"]}"#),
            Err(Error::DuplicateName("a".into()))
        );
        assert_eq!(
            parse_graph(r#"{"spins":["a"],"couplings":[["a","z"]]}"#),
            Err(Error::UnknownSpin("z".into()))
        );
        assert_eq!(parse_graph(r#"{"spins":[]}"#), Err(Error::SpinCount(0)));
        let many: Vec<String> = (0..65).map(|i| format!("\"s{i}\"")).collect();
        assert_eq!(
            parse_graph(&format!(r#"{{"spins":[{}]}}"#, many.join(","))),
            Err(Error::SpinCount(65))
        );
        assert!(matches!(parse_graph("{"), Err(Error::MalformedDocument(_))));
        assert!(matches!(
            parse_graph(r#"{"spins":["a"],"extra":1}"#),
            Err(Error::MalformedDocument(_))
        ));
    }

    #[test]
    fn parse_numeric_fields() {
        let doc = GraphDocument::parse(
            r#"{"spins":["a","b:x","c"],"couplings":[["a","b:x"]],
                "shifts":{"c":3.5},"j":{"a:b:x":7.25}}"#,
        )
        .unwrap();
        assert_eq!(doc.shifts, vec![None, None, Some(3.5)]);
        assert_eq!(doc.couplings.get(&(0, 1)), Some(&7.25));

        let err = GraphDocument::parse(r#"{"spins":["a","b"],"j":{"a:b":1.0}}"#).unwrap_err();
        assert!(matches!(err, Error::MalformedDocument(_)));
        let err =
            GraphDocument::parse(r#"{"spins":["a","b"],"couplings":[["a","b"]],"j":{"a:b":0}}"#)
                .unwrap_err();
        assert!(matches!(err, Error::MalformedDocument(_)));
        let err = GraphDocument::parse(r#"{"spins":["a"],"shifts":{"q":1}}"#).unwrap_err();
        assert_eq!(err, Error::UnknownSpin("q".into()));
    }

    #[test]
    fn degrees() {
        assert_eq!(max_degree(&CouplingGraph::complete(4).unwrap()), 3);
        assert_eq!(max_degree(&CouplingGraph::path(8).unwrap()), 2);
        assert_eq!(max_degree(&CouplingGraph::edgeless(5).unwrap()), 0);
    }

    #[test]
    fn greedy_examples() {
        let k4 = CouplingGraph::complete(4).unwrap();
        let c = greedy_coloring(&k4, &[]).unwrap();
        assert_eq!(c.color_count(), 4);
        assert!(c.is_proper(&k4));

        let p8 = CouplingGraph::path(8).unwrap();
        let c = greedy_coloring(&p8, &[]).unwrap();
        assert_eq!(c.color_count(), 2);
        assert_eq!(brute_force_chromatic(&p8), 2);
        assert!(c.is_proper(&p8));

        let e5 = CouplingGraph::edgeless(5).unwrap();
        let c = greedy_coloring(&e5, &[vec![0]]).unwrap();
        assert_eq!(c.assignment(), &[0, 1, 1, 1, 1]);
        assert_eq!(c.color_count(), 2);
    }

    #[test]
    fn greedy_order_is_degree_then_index() {
        // star centred on spin 3 plus a pendant edge 0-1
        let g = CouplingGraph::with_default_names(5, [(3, 0), (3, 2), (3, 4), (0, 1)]).unwrap();
        let c = greedy_coloring(&g, &[]).unwrap();
        // order: 3 (deg 3), 0 (deg 2), 1, 2, 4
        assert_eq!(c.assignment(), &[1, 0, 1, 0, 1]);
    }

    #[test]
    fn pinned_colors_are_reserved() {
        let k4 = CouplingGraph::complete(4).unwrap();
        let c = greedy_coloring(&k4, &[vec![2]]).unwrap();
        assert_eq!(c.color_of(2), 0);
        assert_eq!(c.color_count(), 4);
        assert!(c
            .assignment()
            .iter()
            .enumerate()
            .all(|(v, &col)| v == 2 || col != 0));

        let shared = k4.without_edge(0, 1);
        let c = greedy_coloring(&shared, &[vec![0, 1]]).unwrap();
        assert_eq!(c.assignment(), &[0, 0, 1, 2]);
    }

    #[test]
    fn invalid_pins() {
        let k4 = CouplingGraph::complete(4).unwrap();
        assert!(matches!(
            greedy_coloring(&k4, &[vec![0, 1]]),
            Err(Error::InvalidPin(_))
        ));
        assert!(matches!(
            greedy_coloring(&k4, &[vec![0], vec![0]]),
            Err(Error::InvalidPin(_))
        ));
        assert!(matches!(
            greedy_coloring(&k4, &[vec![9]]),
            Err(Error::InvalidPin(_))
        ));
        assert!(matches!(
            greedy_coloring(&k4, &[vec![]]),
            Err(Error::InvalidPin(_))
        ));
    }

    #[test]
    fn exact_matches_brute_force() {
        // 5-cycle: chromatic number 3; Petersen-like odd wheels etc.
        let c5 = CouplingGraph::with_default_names(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(exact_coloring(&c5, &[]).unwrap().color_count(), 3);
        let wheel = CouplingGraph::with_default_names(
            6,
            (0..5)
                .map(|i| (i, (i + 1) % 5))
                .chain((0..5).map(|i| (i, 5))),
        )
        .unwrap();
        assert_eq!(exact_coloring(&wheel, &[]).unwrap().color_count(), 4);
        assert_eq!(brute_force_chromatic(&wheel), 4);
        let e3 = CouplingGraph::edgeless(3).unwrap();
        let c = exact_coloring(&e3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(c.color_count(), 3);
        assert!(exact_coloring(&CouplingGraph::edgeless(13).unwrap(), &[]).is_err());
    }

    #[test]
    fn crown_graph_defeats_plain_greedy_order() {
        // bipartite crown graph on 3+3 vertices; exact finds 2 colors
        let g =
            CouplingGraph::with_default_names(6, [(0, 4), (0, 5), (1, 3), (1, 5), (2, 3), (2, 4)])
                .unwrap();
        let exact = exact_coloring(&g, &[]).unwrap();
        assert_eq!(exact.color_count(), 2);
        assert!(exact.is_proper(&g));
        let greedy = greedy_coloring(&g, &[]).unwrap();
        assert!(greedy.is_proper(&g));
        assert!(greedy.color_count() >= exact.color_count());
    }

    #[test]
    fn coloring_rejects_gaps() {
        assert!(Coloring::new(vec![0, 2]).is_err());
        assert_eq!(
            Coloring::new(vec![1, 0, 1]).unwrap().groups(),
            vec![vec![1], vec![0, 2]]
        );
    }
}
