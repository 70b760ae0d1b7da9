//! The weighted dual graph of a hive and its canonical flow.
//!
//! The unit triangles of the hive triangulation are the vertices (faces) of
//! the dual graph:
//!
//! * `Up(p, q)`   = triangle `{(p-1,q), (p,q), (p,q+1)}`, `0 <= q < p`;
//! * `Down(p, q)` = triangle `{(p-1,q), (p-1,q+1), (p,q+1)}`, `0 <= q < p-1`.
//!
//! Every dual edge crosses one hive edge and its capacity is the difference
//! of the two hive entries at the ends of that edge. Edges fall into three
//! classes by the hive edge they cross: `Mu` (the `/` edges, including the
//! left boundary), `Nu` (horizontal, including the bottom) and `Lambda` (the
//! `\` edges, including the right boundary). Each `Up` face has exactly one
//! edge of each class and every edge touches exactly one `Up` face, so edges
//! are indexed by `(Up face, class)`. Flow runs
//!
//! ```text
//!   Mu:     Down(p,q-1) -> Up(p,q)     (left boundary stub into Up(p,0))
//!   Nu:     Down(p+1,q) -> Up(p,q)     (bottom stub into Up(r,q))
//!   Lambda: Up(p,q)     -> Down(p,q)   (Up(p,p-1) into the right stub)
//! ```
//!
//! Row `p` is the strip `Up(p,0), Down(p,0), Up(p,1), .., Up(p,p-1)`; spine
//! `c` is `Up(r,c-1), Down(r,c-1), Up(r-1,c-1), .., Up(c,c-1)`. Every face lies
//! on exactly one row and one spine. Spine `c` meets row `p >= c` at its
//! junction: `Down(p,c-1)` for `p > c`, and `Up(c,c-1)` for `p = c`.
//!
//! In the canonical flow of a filling, `μ_p` units of [`Strand::Mu`]`(p)`
//! cross row `p`, `ν_c` units of [`Strand::Content`]`(c)` climb spine `c`,
//! and exactly `k(c, p)` of them turn east into row `p` at its junction.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filling::LrFilling;
use crate::hive::Hive;
use crate::partition::Partition;

/// Direction class of an edge (dual graph) or segment (honeycomb).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Mu,
    Nu,
    Lambda,
}

impl Class {
    pub const ALL: [Class; 3] = [Class::Mu, Class::Nu, Class::Lambda];

    fn index(self) -> usize {
        match self {
            Class::Mu => 0,
            Class::Nu => 1,
            Class::Lambda => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Face {
    Up { p: usize, q: usize },
    Down { p: usize, q: usize },
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Face::Up { p, q } => write!(f, "U{p},{q}"),
            Face::Down { p, q } => write!(f, "D{p},{q}"),
        }
    }
}

/// Endpoint of a dual edge: a face, or the outside of the hive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Face(Face),
    Boundary,
}

/// A unit of flow is either part of a row's `μ` flow or carries a content label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Strand {
    Mu(usize),
    Content(usize),
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strand::Mu(p) => write!(f, "mu{p}"),
            Strand::Content(c) => write!(f, "c{c}"),
        }
    }
}

impl std::str::FromStr for Strand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Shape(format!("bad strand label {s:?}"));
        if let Some(rest) = s.strip_prefix("mu") {
            rest.parse().map(Strand::Mu).map_err(|_| bad())
        } else if let Some(rest) = s.strip_prefix('c') {
            rest.parse().map(Strand::Content).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

impl From<Strand> for String {
    fn from(s: Strand) -> Self {
        s.to_string()
    }
}

impl TryFrom<String> for Strand {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Labelled loads on one edge; zero amounts are never stored.
pub type Loads = BTreeMap<Strand, u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualEdge {
    pub class: Class,
    pub from: Node,
    pub to: Node,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDualGraph {
    r: usize,
    edges: Vec<DualEdge>,
}

fn up_index(p: usize, q: usize) -> usize {
    p * (p - 1) / 2 + q
}

impl WeightedDualGraph {
    pub fn from_hive(hive: &Hive) -> Result<Self> {
        hive.hive_type()?;
        let r = hive.r();
        let h = |p: usize, q: usize| hive.get(p, q);
        let mut edges = Vec::with_capacity(3 * r * (r + 1) / 2);
        for p in 1..=r {
            for q in 0..p {
                let up = Node::Face(Face::Up { p, q });
                let mu_from = if q == 0 { Node::Boundary } else { Node::Face(Face::Down { p, q: q - 1 }) };
                let nu_from = if p == r { Node::Boundary } else { Node::Face(Face::Down { p: p + 1, q }) };
                let lambda_to = if q == p - 1 { Node::Boundary } else { Node::Face(Face::Down { p, q }) };
                let caps = [
                    (Class::Mu, mu_from, up, h(p, q) - h(p - 1, q)),
                    (Class::Nu, nu_from, up, h(p, q + 1) - h(p, q)),
                    (Class::Lambda, up, lambda_to, h(p, q + 1) - h(p - 1, q)),
                ];
                for (class, from, to, cap) in caps {
                    let capacity = u64::try_from(cap)
                        .map_err(|_| Error::Invariant(format!("negative capacity {cap} at Up({p},{q})")))?;
                    edges.push(DualEdge { class, from, to, capacity });
                }
            }
        }
        Ok(WeightedDualGraph { r, edges })
    }

    pub fn from_filling(f: &LrFilling) -> Result<Self> {
        Self::from_hive(&Hive::from_filling(f)?)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[DualEdge] {
        &self.edges
    }

    /// The edge of `class` at `Up(p, q)`.
    pub fn edge_index(&self, p: usize, q: usize, class: Class) -> usize {
        debug_assert!(q < p && p <= self.r);
        3 * up_index(p, q) + class.index()
    }

    pub fn edge(&self, p: usize, q: usize, class: Class) -> &DualEdge {
        &self.edges[self.edge_index(p, q, class)]
    }

    /// Faces row by row, west to east.
    pub fn faces(&self) -> Vec<Face> {
        let mut out = Vec::with_capacity(self.r * self.r);
        for p in 1..=self.r {
            for q in 0..p {
                out.push(Face::Up { p, q });
                if q + 1 < p {
                    out.push(Face::Down { p, q });
                }
            }
        }
        out
    }

    /// Indices of the `(Mu, Nu, Lambda)` edges incident to `face`.
    pub fn face_edges(&self, face: Face) -> [usize; 3] {
        match face {
            Face::Up { p, q } => [
                self.edge_index(p, q, Class::Mu),
                self.edge_index(p, q, Class::Nu),
                self.edge_index(p, q, Class::Lambda),
            ],
            Face::Down { p, q } => [
                self.edge_index(p, q + 1, Class::Mu),
                self.edge_index(p - 1, q, Class::Nu),
                self.edge_index(p, q, Class::Lambda),
            ],
        }
    }

    /// `(μ, ν, λ)`-class capacities at a face; `μ + ν = λ` always.
    pub fn face_coordinates(&self, face: Face) -> (u64, u64, u64) {
        let [m, n, l] = self.face_edges(face).map(|e| self.edges[e].capacity);
        (m, n, l)
    }

    /// `(in, out)` edge indices at a face.
    pub fn face_io(&self, face: Face) -> (Vec<usize>, Vec<usize>) {
        let [m, n, l] = self.face_edges(face);
        match face {
            Face::Up { .. } => (vec![m, n], vec![l]),
            Face::Down { .. } => (vec![l], vec![m, n]),
        }
    }

    /// Boundary stub capacities: left (`μ`), bottom (`ν`), right (`λ`).
    pub fn boundary_type(&self) -> Result<(Partition, Partition, Partition)> {
        let r = self.r;
        let mu = (1..=r).map(|p| self.edge(p, 0, Class::Mu).capacity).collect();
        let nu = (1..=r).map(|c| self.edge(r, c - 1, Class::Nu).capacity).collect();
        let lambda = (1..=r).map(|p| self.edge(p, p - 1, Class::Lambda).capacity).collect();
        Ok((Partition::new(mu)?, Partition::new(nu)?, Partition::new(lambda)?))
    }

    /// The flow with every edge empty.
    pub fn empty_flow(&self) -> Flow {
        Flow { loads: vec![Loads::new(); self.edges.len()] }
    }
}

/// Labelled flow on the edges of a [`WeightedDualGraph`], indexed like
/// [`WeightedDualGraph::edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub loads: Vec<Loads>,
}

impl Flow {
    pub fn total(&self, edge: usize) -> u64 {
        self.loads[edge].values().sum()
    }

    pub fn amount(&self, edge: usize, strand: Strand) -> u64 {
        self.loads[edge].get(&strand).copied().unwrap_or(0)
    }

    pub fn add(&mut self, edge: usize, strand: Strand, amount: u64) {
        if amount > 0 {
            *self.loads[edge].entry(strand).or_insert(0) += amount;
        }
    }

    /// Removes `amount` units of `strand` from `edge`; false if not present.
    pub fn take(&mut self, edge: usize, strand: Strand, amount: u64) -> bool {
        let have = self.amount(edge, strand);
        if have < amount {
            return false;
        }
        if have == amount {
            self.loads[edge].remove(&strand);
        } else {
            self.loads[edge].insert(strand, have - amount);
        }
        true
    }
}

/// The canonical flow of a filling on the dual graph of its hive.
pub fn canonical_flow(f: &LrFilling) -> Result<(WeightedDualGraph, Flow)> {
    let g = WeightedDualGraph::from_filling(f)?;
    let mut fl = g.empty_flow();
    for p in 1..=f.r() {
        for q in 0..p {
            let mu = g.edge_index(p, q, Class::Mu);
            let nu = g.edge_index(p, q, Class::Nu);
            let lambda = g.edge_index(p, q, Class::Lambda);
            for e in [mu, lambda] {
                fl.add(e, Strand::Mu(p), f.mu().part(p));
                for i in 1..=q {
                    fl.add(e, Strand::Content(i), f.k(i, p));
                }
            }
            let climbing = f.label_count_through(q + 1, p);
            fl.add(nu, Strand::Content(q + 1), climbing);
            fl.add(lambda, Strand::Content(q + 1), climbing);
        }
    }
    Ok((g, fl))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FlowCheck {
    /// Total load exceeds capacity.
    Capacity,
    /// Total load below capacity.
    Saturation,
    /// A strand's inflow differs from its outflow at a face.
    Conservation,
    /// A strand sits on an edge canonical routing never sends it to.
    Routing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FlowSite {
    Edge(usize),
    Face(Face),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlowFailure {
    pub check: FlowCheck,
    pub site: FlowSite,
    pub strand: Option<Strand>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlowReport {
    pub failures: Vec<FlowFailure>,
}

impl FlowReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Faces with at least one conservation failure.
    pub fn conservation_faces(&self) -> Vec<Face> {
        let mut faces: Vec<Face> = self
            .failures
            .iter()
            .filter_map(|f| match (f.check, f.site) {
                (FlowCheck::Conservation, FlowSite::Face(face)) => Some(face),
                _ => None,
            })
            .collect();
        faces.sort();
        faces.dedup();
        faces
    }
}

impl fmt::Display for FlowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (n, x) in self.failures.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            match x.site {
                FlowSite::Edge(e) => write!(f, "{:?} at edge {e}", x.check)?,
                FlowSite::Face(face) => write!(f, "{:?} at {face}", x.check)?,
            }
            if let Some(s) = x.strand {
                write!(f, " ({s})")?;
            }
        }
        Ok(())
    }
}

/// Checks capacity, saturation, per-strand conservation at every face and
/// canonical routing: `ν` edges of spine `c` carry only content `c`; `μ`
/// strands stay in their own row; content `c` appears on a row edge only
/// east of its junction.
pub fn check_flow(g: &WeightedDualGraph, fl: &Flow) -> FlowReport {
    let mut report = FlowReport::default();
    if fl.loads.len() != g.edges.len() {
        report.failures.push(FlowFailure { check: FlowCheck::Capacity, site: FlowSite::Edge(g.edges.len()), strand: None });
        return report;
    }
    for (e, edge) in g.edges.iter().enumerate() {
        let total = fl.total(e);
        if total > edge.capacity {
            report.failures.push(FlowFailure { check: FlowCheck::Capacity, site: FlowSite::Edge(e), strand: None });
        } else if total < edge.capacity {
            report.failures.push(FlowFailure { check: FlowCheck::Saturation, site: FlowSite::Edge(e), strand: None });
        }
    }
    for p in 1..=g.r {
        for q in 0..p {
            for class in Class::ALL {
                let e = g.edge_index(p, q, class);
                for &strand in fl.loads[e].keys() {
                    let allowed = match (class, strand) {
                        (Class::Nu, Strand::Content(c)) => c == q + 1,
                        (Class::Nu, Strand::Mu(_)) => false,
                        (_, Strand::Mu(s)) => s == p,
                        (Class::Mu, Strand::Content(c)) => c <= q,
                        (Class::Lambda, Strand::Content(c)) => c <= q + 1,
                    };
                    if !allowed {
                        report.failures.push(FlowFailure {
                            check: FlowCheck::Routing,
                            site: FlowSite::Edge(e),
                            strand: Some(strand),
                        });
                    }
                }
            }
        }
    }
    for face in g.faces() {
        let (ins, outs) = g.face_io(face);
        let mut balance: BTreeMap<Strand, i128> = BTreeMap::new();
        for &e in &ins {
            for (&s, &a) in &fl.loads[e] {
                *balance.entry(s).or_insert(0) += a as i128;
            }
        }
        for &e in &outs {
            for (&s, &a) in &fl.loads[e] {
                *balance.entry(s).or_insert(0) -= a as i128;
            }
        }
        for (s, b) in balance {
            if b != 0 {
                report.failures.push(FlowFailure { check: FlowCheck::Conservation, site: FlowSite::Face(face), strand: Some(s) });
            }
        }
    }
    report
}

/// Units of content `c` turning east into row `p` at their junction.
pub fn junction_diversion(g: &WeightedDualGraph, fl: &Flow, c: usize, p: usize) -> u64 {
    let content = Strand::Content(c);
    let climbing = fl.amount(g.edge_index(p, c - 1, Class::Lambda), content);
    if c == p {
        climbing
    } else {
        climbing.saturating_sub(fl.amount(g.edge_index(p - 1, c - 1, Class::Nu), content))
    }
}

/// Reads the filling back off a canonical flow.
pub fn flow_to_filling(g: &WeightedDualGraph, fl: &Flow) -> Result<LrFilling> {
    let report = check_flow(g, fl);
    if !report.ok() {
        return Err(Error::NonCanonicalFlow(report.to_string()));
    }
    let (mu, nu, lambda) = g.boundary_type()?;
    let r = g.r;
    let k = (1..=r).map(|p| (1..=p).map(|c| junction_diversion(g, fl, c, p)).collect()).collect();
    let f = LrFilling::checked(mu, nu, lambda, k)?;
    for p in 1..=r {
        let stub = g.edge_index(p, p - 1, Class::Lambda);
        for c in 1..=p {
            if fl.amount(stub, Strand::Content(c)) != f.k(c, p) {
                return Err(Error::Invariant(format!("content {c} leaving row {p} disagrees with its junction")));
            }
        }
    }
    Ok(f)
}

/// One edge of the flow JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub face_a: String,
    pub face_b: String,
    pub class: Class,
    pub capacity: u64,
    pub loads: BTreeMap<String, u64>,
}

fn node_name(n: Node, stub: &str) -> String {
    match n {
        Node::Face(f) => f.to_string(),
        Node::Boundary => stub.to_string(),
    }
}

/// The flow JSON: one record per edge in index order.
pub fn flow_records(g: &WeightedDualGraph, fl: &Flow) -> Vec<FlowRecord> {
    g.edges
        .iter()
        .zip(&fl.loads)
        .map(|(e, loads)| FlowRecord {
            face_a: node_name(e.from, "stub"),
            face_b: node_name(e.to, "stub"),
            class: e.class,
            capacity: e.capacity,
            loads: loads.iter().map(|(s, a)| (s.to_string(), *a)).collect(),
        })
        .collect()
}

/// Rebuilds the graph and flow from [`flow_records`] output.
///
/// Capacities determine the hive up to its `h_00` normalization, so the
/// graph is reconstructed through the hive and compared edge by edge.
pub fn flow_from_records(records: &[FlowRecord]) -> Result<(WeightedDualGraph, Flow)> {
    let n = records.len();
    let mut r = 0;
    while 3 * r * (r + 1) / 2 < n {
        r += 1;
    }
    if 3 * r * (r + 1) / 2 != n {
        return Err(Error::Shape(format!("{n} flow records is not 3r(r+1)/2")));
    }
    let cap = |p: usize, q: usize, class: Class| records[3 * up_index(p, q) + class.index()].capacity as i64;
    // left side from μ stubs, then each row eastward through Up faces
    let mut h: Vec<Vec<i64>> = (0..=r).map(|p| vec![0; p + 1]).collect();
    for p in 1..=r {
        h[p][0] = h[p - 1][0] + cap(p, 0, Class::Mu);
        for q in 0..p {
            h[p][q + 1] = h[p][q] + cap(p, q, Class::Nu);
        }
    }
    let g = WeightedDualGraph::from_hive(&Hive::new(h)?)?;
    let mut fl = g.empty_flow();
    for (e, rec) in records.iter().enumerate() {
        let edge = &g.edges[e];
        if rec.class != edge.class || rec.capacity != edge.capacity {
            return Err(Error::Shape(format!("flow record {e} is inconsistent with the reconstructed graph")));
        }
        for (label, &amount) in &rec.loads {
            fl.add(e, label.parse()?, amount);
        }
    }
    Ok((g, fl))
}
