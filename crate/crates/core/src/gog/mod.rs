//! Graphs of groups with virtually cyclic edge groups: structural and
//! JSJ-shape validation, and the fundamental-group presentation.

pub mod tietze;

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::classify::torsion_order;
use crate::dehn::RelatorTable;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::quotients::certify_nontrivial;
use crate::verdict::{Status, Verdict};
use crate::words::{cyclic_normal_form, Letter, Word};

pub use tietze::{
    apply_certificate, eliminate_generators, same_presentation, verify_isomorphic, Replay, TietzeCertificate,
    TietzeMove,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VertexTag {
    ElementaryCyclic,
    ElementaryDihedral,
    Rigid,
}

impl VertexTag {
    pub fn is_elementary(self) -> bool {
        !matches!(self, VertexTag::Rigid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    /// `<e>`, one image per endpoint.
    InfiniteCyclic,
    /// `<p, q; p^2, q^2>`, two images per endpoint.
    InfiniteDihedral,
}

impl EdgeKind {
    pub fn generator_count(self) -> usize {
        match self {
            EdgeKind::InfiniteCyclic => 1,
            EdgeKind::InfiniteDihedral => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: String,
    pub tag: VertexTag,
    pub presentation: Presentation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
    pub images_u: Vec<Word>,
    pub images_v: Vec<Word>,
    pub in_tree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphOfGroups {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Apply the JSJ shape rules during validation.
    pub jsj_candidate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub status: Status,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

/// Degree of the symmetric groups used to certify edge images.
pub const VALIDATION_DEGREE: usize = 5;

impl GraphOfGroups {
    /// Endpoints exist, image counts match the edge kind, images live in
    /// their vertex groups.
    pub fn check_structure(&self) -> Result<()> {
        for e in &self.edges {
            for (end, vid, images) in [("u", e.u, &e.images_u), ("v", e.v, &e.images_v)] {
                let vertex = self.vertices.get(vid).ok_or_else(|| {
                    Error::Structural(format!("edge {} endpoint {end} = {vid} does not exist", e.id))
                })?;
                if images.len() != e.kind.generator_count() {
                    return Err(Error::Structural(format!(
                        "edge {} needs {} image(s) at {end}, has {}",
                        e.id,
                        e.kind.generator_count(),
                        images.len()
                    )));
                }
                for w in images {
                    w.check_rank(vertex.presentation.rank()).map_err(|err| {
                        Error::Structural(format!("edge {} image at {end}: {err}", e.id))
                    })?;
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| usize::from(e.u == v) + usize::from(e.v == v)).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.reachable(|_| true).len() == self.vertices.len()
    }

    fn reachable(&self, use_edge: impl Fn(&Edge) -> bool) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        if self.vertices.is_empty() {
            return seen;
        }
        let mut queue = VecDeque::from([0]);
        seen.insert(0);
        while let Some(x) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| use_edge(e)) {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == x && seen.insert(b) {
                        queue.push_back(b);
                    }
                }
            }
        }
        seen
    }

    pub fn tree_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].in_tree).collect()
    }

    pub fn tree_is_spanning(&self) -> bool {
        let tree = self.tree_edges();
        !self.vertices.is_empty()
            && tree.len() + 1 == self.vertices.len()
            && self.reachable(|e| e.in_tree).len() == self.vertices.len()
    }

    /// Every edge subset that forms a spanning tree, in lexicographic order.
    pub fn spanning_trees(&self) -> Vec<Vec<usize>> {
        let n = self.edges.len();
        let need = self.vertices.len().saturating_sub(1);
        let mut out = Vec::new();
        for mask in 0u64..1 << n {
            if mask.count_ones() as usize != need {
                continue;
            }
            let tree: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if self.with_tree(&tree).tree_is_spanning() {
                out.push(tree);
            }
        }
        out.sort();
        out
    }

    pub fn with_tree(&self, tree: &[usize]) -> GraphOfGroups {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            e.in_tree = tree.contains(&i);
        }
        g
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        self.check_structure()?;
        let mut violations = Vec::new();
        let mut warnings = Vec::new();

        if !self.is_connected() {
            violations.push("graph is not connected".to_string());
        }
        if !self.tree_is_spanning() {
            violations.push("tree edges do not form a spanning tree".to_string());
        }

        for e in &self.edges {
            for (end, vid, images) in [("u", e.u, &e.images_u), ("v", e.v, &e.images_v)] {
                let vertex = &self.vertices[vid];
                for (k, w) in images.iter().enumerate() {
                    let label = format!("edge {} image {} at {end} ({})", e.id, k + 1, vertex.id);
                    match check_nontrivial(&vertex.presentation, w)? {
                        Status::ProvenTrue => {}
                        Status::ProvenFalse => violations.push(format!("{label} is trivial")),
                        Status::Unknown => warnings.push(format!("{label}: nontriviality not certified")),
                    }
                    if e.kind == EdgeKind::InfiniteDihedral {
                        match check_involution(&vertex.presentation, w)? {
                            Status::ProvenTrue => {}
                            Status::ProvenFalse => violations.push(format!("{label} does not have order 2")),
                            Status::Unknown => warnings.push(format!("{label}: order 2 not decided")),
                        }
                    }
                }
            }
        }

        if self.jsj_candidate {
            for (i, v) in self.vertices.iter().enumerate() {
                if v.tag != VertexTag::ElementaryDihedral {
                    continue;
                }
                let deg = self.degree(i);
                if deg != 1 {
                    violations.push(format!("dihedral vertex {} has degree {deg}, expected 1", v.id));
                }
                for e in self.edges.iter().filter(|e| e.u == i || e.v == i) {
                    if e.kind != EdgeKind::InfiniteDihedral {
                        violations.push(format!("dihedral vertex {} meets cyclic edge {}", v.id, e.id));
                    }
                }
            }
            for e in &self.edges {
                let a = self.vertices[e.u].tag.is_elementary();
                let b = self.vertices[e.v].tag.is_elementary();
                if a == b {
                    violations.push(format!(
                        "edge {} joins two {} vertices",
                        e.id,
                        if a { "elementary" } else { "non-elementary" }
                    ));
                }
            }
        }

        let status = if !violations.is_empty() {
            Status::ProvenFalse
        } else if !warnings.is_empty() {
            Status::Unknown
        } else {
            Status::ProvenTrue
        };
        Ok(ValidationReport { status, violations, warnings })
    }

    /// Tree edges in breadth-first order from vertex 0, edges scanned by index.
    fn tree_order(&self) -> Vec<usize> {
        let mut order = Vec::new();
        let mut seen = BTreeSet::from([0]);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate().filter(|(_, e)| e.in_tree) {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == x && seen.insert(b) {
                        order.push(i);
                        queue.push_back(b);
                    }
                }
            }
        }
        order
    }

    /// Vertex generators (qualified as `vertex.name` on clashes), then one
    /// stable letter `t_<edge>` per non-tree edge. Relators: vertex relators,
    /// `image_u image_v^-1` per tree edge generator, and
    /// `t^-1 image_u t image_v^-1` per non-tree edge generator.
    pub fn fundamental_group(&self) -> Result<Presentation> {
        self.check_structure()?;
        if !self.is_connected() || !self.tree_is_spanning() {
            return Err(Error::Structural("graph must be connected with a spanning tree".into()));
        }
        let mut names = Vec::new();
        let mut offsets = Vec::new();
        for v in &self.vertices {
            offsets.push(names.len());
            for g in &v.presentation.generators {
                let clash = self
                    .vertices
                    .iter()
                    .filter(|o| o.presentation.generators.contains(g))
                    .count()
                    > 1;
                names.push(if clash { format!("{}.{g}", v.id) } else { g.clone() });
            }
        }
        let mut stable = vec![None; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate().filter(|(_, e)| !e.in_tree) {
            let mut name = format!("t_{}", e.id);
            while names.contains(&name) {
                name.push('\'');
            }
            names.push(name);
            stable[i] = Some(names.len());
        }

        let shift = |w: &Word, vid: usize| -> Word {
            Word::reduce(w.letters().iter().map(|l| Letter::new(l.gen() + offsets[vid], l.is_positive())))
        };
        let mut relators = Vec::new();
        for (vid, v) in self.vertices.iter().enumerate() {
            relators.extend(v.presentation.relators.iter().map(|r| shift(r, vid)));
        }
        for i in self.tree_order() {
            let e = &self.edges[i];
            for (a, b) in e.images_u.iter().zip(&e.images_v) {
                relators.push(shift(a, e.u).concat(&shift(b, e.v).inverse()));
            }
        }
        for (i, e) in self.edges.iter().enumerate().filter(|(_, e)| !e.in_tree) {
            let t = Word::generator(stable[i].unwrap());
            for (a, b) in e.images_u.iter().zip(&e.images_v) {
                relators.push(shift(a, e.u).conjugate_by(&t).concat(&shift(b, e.v).inverse()));
            }
        }
        Presentation::new(names, relators)
    }
}

fn check_nontrivial(p: &Presentation, w: &Word) -> Result<Status> {
    if w.is_empty() {
        return Ok(Status::ProvenFalse);
    }
    if let Verdict::ProvenTrue(_) = certify_nontrivial(p, w, VALIDATION_DEGREE)? {
        return Ok(Status::ProvenTrue);
    }
    if let Some(one) = p.as_one_relator().filter(|o| o.exponent() >= 2) {
        if RelatorTable::build(&one)?.is_trivial(w) {
            return Ok(Status::ProvenFalse);
        }
        // a complete solver said nontrivial
        return Ok(Status::ProvenTrue);
    }
    Ok(Status::Unknown)
}

fn check_involution(p: &Presentation, w: &Word) -> Result<Status> {
    match p.as_one_relator().filter(|o| o.exponent() >= 2) {
        Some(one) => Ok(match torsion_order(&one, w, 2)? {
            Verdict::ProvenTrue(c) if c.order == 2 => Status::ProvenTrue,
            Verdict::ProvenTrue(_) => Status::ProvenFalse,
            _ => {
                // w^2 != 1 by a complete solver
                if RelatorTable::build(&one)?.is_trivial(&w.pow(2)) {
                    Status::Unknown
                } else {
                    Status::ProvenFalse
                }
            }
        }),
        None => {
            // w^2 conjugate to a relator, w != 1
            let square = cyclic_normal_form(&w.pow(2));
            let square = square.clone().min(square.inverse());
            if p.relator_classes().contains(&square) && check_nontrivial(p, w)? == Status::ProvenTrue {
                Ok(Status::ProvenTrue)
            } else {
                Ok(Status::Unknown)
            }
        }
    }
}
