//! Mixed graphs: directed edges `i -> j` (with `i < j`) and bidirected
//! edges `i <-> j`, on vertices `1..=m`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("directed edge {0}->{1} violates the topological order (need tail < head)")]
    OrderViolation(Vertex, Vertex),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}")]
    Duplicate(String),
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(Vertex, usize),
    #[error("invalid query: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MixedGraph {
    m: usize,
    directed: BTreeSet<(Vertex, Vertex)>,
    bidirected: BTreeSet<(Vertex, Vertex)>,
}

/// A directed path, stored as its vertex sequence. A single vertex is the
/// empty path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedPath {
    vertices: Vec<Vertex>,
}

impl DirectedPath {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn source(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn target(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }
}

impl fmt::Display for DirectedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("->"))
    }
}

impl MixedGraph {
    pub fn new(
        m: usize,
        directed: impl IntoIterator<Item = (Vertex, Vertex)>,
        bidirected: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut g = MixedGraph::empty(m);
        for (i, j) in directed {
            g.check_vertex(i)?;
            g.check_vertex(j)?;
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if i > j {
                return Err(GraphError::OrderViolation(i, j));
            }
            if !g.directed.insert((i, j)) {
                return Err(GraphError::Duplicate(format!("{i}->{j}")));
            }
        }
        for (i, j) in bidirected {
            g.check_vertex(i)?;
            g.check_vertex(j)?;
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if !g.bidirected.insert((i.min(j), i.max(j))) {
                return Err(GraphError::Duplicate(format!("{i}<->{j}")));
            }
        }
        Ok(g)
    }

    pub fn empty(m: usize) -> Self {
        MixedGraph {
            m,
            directed: BTreeSet::new(),
            bidirected: BTreeSet::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.m
    }

    pub fn directed(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.directed
    }

    pub fn bidirected(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.bidirected
    }

    pub fn has_directed(&self, i: Vertex, j: Vertex) -> bool {
        self.directed.contains(&(i, j))
    }

    pub fn has_bidirected(&self, i: Vertex, j: Vertex) -> bool {
        self.bidirected.contains(&(i.min(j), i.max(j)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v > self.m {
            return Err(GraphError::VertexOutOfRange(v, self.m));
        }
        Ok(())
    }

    pub fn children(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.directed.iter().filter(move |e| e.0 == v).map(|e| e.1)
    }

    pub fn parents(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.directed.iter().filter(move |e| e.1 == v).map(|e| e.0)
    }

    pub fn siblings(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.bidirected.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Copy of the graph with the directed edge `i -> j` removed.
    pub fn without_directed(&self, i: Vertex, j: Vertex) -> MixedGraph {
        let mut g = self.clone();
        g.directed.remove(&(i, j));
        g
    }

    /// Copy of the graph with every directed edge out of `v` removed.
    pub fn without_out_edges(&self, v: Vertex) -> MixedGraph {
        let mut g = self.clone();
        g.directed.retain(|e| e.0 != v);
        g
    }

    /// All vertices reachable from `v` along directed edges, `v` included.
    pub fn descendants(&self, v: Vertex) -> Result<BTreeSet<Vertex>, GraphError> {
        self.check_vertex(v)?;
        let mut seen = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for c in self.children(u) {
                if seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        Ok(seen)
    }

    /// Vertices with a directed path into some vertex of `set` (the set included).
    pub fn ancestors_of_set(&self, set: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
        let mut seen = set.clone();
        let mut queue: VecDeque<Vertex> = set.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            for p in self.parents(u) {
                if seen.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Every directed path from `i` to `j`. For `i == j` this is the single
    /// empty path.
    pub fn directed_paths(&self, i: Vertex, j: Vertex) -> Result<Vec<DirectedPath>, GraphError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        let mut out = Vec::new();
        let mut stack = vec![i];
        self.extend_paths(j, &mut stack, &mut out);
        Ok(out)
    }

    fn extend_paths(&self, target: Vertex, stack: &mut Vec<Vertex>, out: &mut Vec<DirectedPath>) {
        let last = *stack.last().unwrap();
        if last == target {
            out.push(DirectedPath {
                vertices: stack.clone(),
            });
            return;
        }
        if last > target {
            return;
        }
        let children: Vec<Vertex> = self.children(last).collect();
        for c in children {
            stack.push(c);
            self.extend_paths(target, stack, out);
            stack.pop();
        }
    }

    /// d-separation of `x` and `y` given `z`. A bidirected edge carries
    /// arrowheads at both ends; a vertex is a collider on a path when both
    /// incident path edges point into it.
    pub fn d_separated(
        &self,
        x: Vertex,
        y: Vertex,
        z: &BTreeSet<Vertex>,
    ) -> Result<bool, GraphError> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        for &v in z {
            self.check_vertex(v)?;
        }
        if x == y {
            return Err(GraphError::Precondition("x and y must differ".into()));
        }
        if z.contains(&x) || z.contains(&y) {
            return Err(GraphError::Precondition(
                "x and y must not be conditioned on".into(),
            ));
        }
        Ok(!self.d_connected(x, y, z))
    }

    fn d_connected(&self, x: Vertex, y: Vertex, z: &BTreeSet<Vertex>) -> bool {
        let open_colliders = self.ancestors_of_set(z);
        // State: (vertex, whether the edge we arrived on points into it).
        let mut seen = vec![[false; 2]; self.m + 1];
        let mut queue = VecDeque::new();
        // Leaving x: every edge is allowed.
        for (next, into_next, _) in self.moves(x) {
            if !seen[next][into_next as usize] {
                seen[next][into_next as usize] = true;
                queue.push_back((next, into_next));
            }
        }
        while let Some((v, arrived_into)) = queue.pop_front() {
            if v == y {
                return true;
            }
            for (next, into_next, head_at_v) in self.moves(v) {
                let collider = arrived_into && head_at_v;
                let pass = if collider {
                    open_colliders.contains(&v)
                } else {
                    !z.contains(&v)
                };
                if pass && !seen[next][into_next as usize] {
                    seen[next][into_next as usize] = true;
                    queue.push_back((next, into_next));
                }
            }
        }
        false
    }

    /// Edges incident to `v` as (neighbour, arrowhead at neighbour, arrowhead at v).
    fn moves(&self, v: Vertex) -> Vec<(Vertex, bool, bool)> {
        let mut out = Vec::new();
        for c in self.children(v) {
            out.push((c, true, false));
        }
        for p in self.parents(v) {
            out.push((p, false, true));
        }
        for s in self.siblings(v) {
            out.push((s, true, true));
        }
        out
    }
}

impl fmt::Display for MixedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self
            .directed
            .iter()
            .map(|(i, j)| format!("{i}->{j}"))
            .collect();
        let b: Vec<String> = self
            .bidirected
            .iter()
            .map(|(i, j)| format!("{i}<->{j}"))
            .collect();
        let text = format!("{}; {}; {}", self.m, d.join(" "), b.join(" "));
        f.write_str(text.trim_end())
    }
}

struct Scanner<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Scanner<'_> {
    fn skip(&mut self) {
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_whitespace() || self.s[self.pos] == b',')
        {
            self.pos += 1;
        }
    }

    fn done(&mut self) -> bool {
        self.skip();
        self.pos >= self.s.len()
    }

    fn number(&mut self) -> Result<usize, GraphError> {
        self.skip();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| GraphError::Syntax(format!("expected a vertex number at offset {start}")))
    }

    fn expect(&mut self, token: &str) -> Result<(), GraphError> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.s[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(GraphError::Syntax(format!(
                "expected '{token}' at offset {}",
                self.pos
            )))
        }
    }

    fn edges(&mut self, arrow: &str) -> Result<Vec<(Vertex, Vertex)>, GraphError> {
        let mut out = Vec::new();
        while !self.done() {
            let a = self.number()?;
            self.expect(arrow)?;
            let b = self.number()?;
            out.push((a, b));
        }
        Ok(out)
    }
}

impl FromStr for MixedGraph {
    type Err = GraphError;

    /// Grammar: `<m> ; <a->b ...> ; <a<->b ...>`, edges separated by
    /// whitespace or commas. The bidirected section may be omitted.
    fn from_str(text: &str) -> Result<Self, GraphError> {
        let sections: Vec<&str> = text.split(';').collect();
        if sections.len() < 2 || sections.len() > 3 {
            return Err(GraphError::Syntax(
                "expected '<m> ; <directed edges> ; <bidirected edges>'".into(),
            ));
        }
        let m: usize = sections[0].trim().parse().map_err(|_| {
            GraphError::Syntax(format!("bad vertex count {:?}", sections[0].trim()))
        })?;
        let directed = Scanner {
            s: sections[1].as_bytes(),
            pos: 0,
        }
        .edges("->")?;
        let bidirected = match sections.get(2) {
            Some(s) => Scanner {
                s: s.as_bytes(),
                pos: 0,
            }
            .edges("<->")?,
            None => Vec::new(),
        };
        MixedGraph::new(m, directed, bidirected)
    }
}

impl TryFrom<String> for MixedGraph {
    type Error = GraphError;
    fn try_from(s: String) -> Result<Self, GraphError> {
        s.parse()
    }
}

impl From<MixedGraph> for String {
    fn from(g: MixedGraph) -> String {
        g.to_string()
    }
}
