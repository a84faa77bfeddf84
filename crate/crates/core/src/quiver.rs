//! Quivers, paths and admissible monomial ideals.
//!
//! Vertices are 0-based internally and shown 1-based (`e1`, `P(1)`, ...).
//! A path stores its arrows in the order they are traversed, so the path
//! written `βα` (α first) is stored as `[α, β]`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Default search depth for admissibility on quivers with cycles.
pub const DEFAULT_PATH_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("ideal is not admissible: a nonzero path of length {0} exists")]
    NotAdmissible(usize),
    #[error("quiver has a directed cycle")]
    Cyclic,
    #[error("vertex {0} is not a source")]
    NotSource(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

impl Arrow {
    pub fn new(name: impl Into<String>, source: usize, target: usize) -> Self {
        Arrow {
            name: name.into(),
            source,
            target,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let mut seen = HashMap::new();
        for a in &arrows {
            if a.source >= vertex_count {
                return Err(QuiverError::VertexOutOfRange(a.source));
            }
            if a.target >= vertex_count {
                return Err(QuiverError::VertexOutOfRange(a.target));
            }
            if seen.insert(a.name.clone(), ()).is_some() {
                return Err(QuiverError::DuplicateArrow(a.name.clone()));
            }
        }
        Ok(Quiver {
            vertex_count,
            arrows,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: usize) -> &Arrow {
        &self.arrows[id]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn arrows_into(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].target == v).collect()
    }

    pub fn arrows_out_of(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].source == v).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.kahn_order().is_some()
    }

    /// Sinks first: whenever there is an arrow `j -> i`, `i` precedes `j`.
    /// Ties are broken by the smallest vertex.
    fn kahn_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count;
        let mut out_deg = vec![0usize; n];
        for a in &self.arrows {
            out_deg[a.source] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| out_deg[v] == 0).collect();
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for a in &self.arrows {
                if a.target == v {
                    out_deg[a.source] -= 1;
                    if out_deg[a.source] == 0 {
                        ready.insert(a.source);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Order in which an arrow `j -> i` always places `i` before `j`.
    pub fn topological_order(&self) -> Result<Vec<usize>, QuiverError> {
        self.kahn_order().ok_or(QuiverError::Cyclic)
    }

    /// Vertices with no arrow ending at them.
    pub fn source_vertices(&self) -> Result<Vec<usize>, QuiverError> {
        if !self.is_acyclic() {
            return Err(QuiverError::Cyclic);
        }
        Ok((0..self.vertex_count)
            .filter(|&v| self.arrows.iter().all(|a| a.target != v))
            .collect())
    }

    /// True when every arrow goes from a larger label to a smaller one.
    pub fn follows_labeling(&self) -> bool {
        self.arrows.iter().all(|a| a.source > a.target)
    }

    /// Relabels an acyclic quiver so that every arrow `j -> i` has `j > i`.
    /// Returns the new quiver and the map old label -> new label.
    pub fn relabeled(&self) -> Result<(Quiver, Vec<usize>), QuiverError> {
        let order = self.topological_order()?;
        let mut new_label = vec![0; self.vertex_count];
        for (pos, &v) in order.iter().enumerate() {
            new_label[v] = pos;
        }
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow::new(a.name.clone(), new_label[a.source], new_label[a.target]))
            .collect();
        Ok((
            Quiver {
                vertex_count: self.vertex_count,
                arrows,
            },
            new_label,
        ))
    }

    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertex_count: self.vertex_count,
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow::new(a.name.clone(), a.target, a.source))
                .collect(),
        }
    }

    /// Builds a path from arrow ids listed in traversal order (first applied first).
    pub fn path(&self, arrows: &[usize]) -> Result<Path, QuiverError> {
        let Some(&first) = arrows.first() else {
            return Err(QuiverError::InvalidRelation("empty path".into()));
        };
        for &a in arrows {
            if a >= self.arrows.len() {
                return Err(QuiverError::UnknownArrow(format!("#{a}")));
            }
        }
        for w in arrows.windows(2) {
            if self.arrows[w[0]].target != self.arrows[w[1]].source {
                return Err(QuiverError::InvalidRelation(format!(
                    "arrows `{}` and `{}` do not compose",
                    self.arrows[w[1]].name, self.arrows[w[0]].name
                )));
            }
        }
        Ok(Path {
            source: self.arrows[first].source,
            target: self.arrows[*arrows.last().unwrap()].target,
            arrows: arrows.to_vec(),
        })
    }

    /// Builds a path from arrow names written right to left, e.g. `["b", "a"]` for `ba`.
    pub fn path_from_names(&self, written: &[&str]) -> Result<Path, QuiverError> {
        let mut ids = Vec::with_capacity(written.len());
        for name in written.iter().rev() {
            ids.push(
                self.arrow_index(name)
                    .ok_or_else(|| QuiverError::UnknownArrow(name.to_string()))?,
            );
        }
        self.path(&ids)
    }
}

/// A path in a quiver; `arrows` is in traversal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// The path followed by `arrow` (written `arrow · self`). Caller checks composability.
    pub fn then(&self, arrow: usize, arrow_target: usize) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.push(arrow);
        Path {
            source: self.source,
            target: arrow_target,
            arrows,
        }
    }

    /// Contiguous subpath test on arrow sequences (nontrivial `sub`).
    pub fn contains(&self, sub: &Path) -> bool {
        if sub.is_trivial() {
            return self.is_trivial() && self.source == sub.source;
        }
        sub.len() <= self.len() && self.arrows.windows(sub.len()).any(|w| w == sub.arrows.as_slice())
    }

    pub fn reversed(&self) -> Path {
        Path {
            source: self.target,
            target: self.source,
            arrows: self.arrows.iter().rev().copied().collect(),
        }
    }

    fn order_key(&self) -> (usize, usize, &[usize]) {
        (self.len(), if self.is_trivial() { self.source } else { 0 }, &self.arrows)
    }

    /// Human-readable form in written order, e.g. `b*a` or `e2`.
    pub fn display(&self, quiver: &Quiver) -> String {
        if self.is_trivial() {
            return format!("e{}", self.source + 1);
        }
        self.arrows
            .iter()
            .rev()
            .map(|&a| quiver.arrow(a).name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Ideal generated by paths of length at least two.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MonomialIdeal {
    generators: Vec<Path>,
}

impl MonomialIdeal {
    pub fn new(generators: Vec<Path>) -> Result<Self, QuiverError> {
        for g in &generators {
            if g.len() < 2 {
                return Err(QuiverError::InvalidRelation(format!(
                    "generator of length {} (need at least 2)",
                    g.len()
                )));
            }
        }
        Ok(MonomialIdeal { generators })
    }

    pub fn zero() -> Self {
        MonomialIdeal::default()
    }

    pub fn generators(&self) -> &[Path] {
        &self.generators
    }

    /// Monomial membership: some generator occurs as a contiguous subpath.
    pub fn contains(&self, path: &Path) -> bool {
        !path.is_trivial()
            && self
                .generators
                .iter()
                .any(|g| g.len() <= path.len() && path.arrows.windows(g.len()).any(|w| w == g.arrows.as_slice()))
    }

    fn has_generator_suffix(&self, path: &Path) -> bool {
        self.generators
            .iter()
            .any(|g| g.len() <= path.len() && path.arrows.ends_with(&g.arrows))
    }

    pub fn opposite(&self) -> MonomialIdeal {
        MonomialIdeal {
            generators: self.generators.iter().map(Path::reversed).collect(),
        }
    }
}

/// A quiver with an admissible monomial ideal, together with its finite set
/// of nonzero paths in the fixed order (length, then arrow ids).
#[derive(Debug, Clone)]
pub struct BoundQuiver {
    quiver: Quiver,
    ideal: MonomialIdeal,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl PartialEq for BoundQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.quiver == other.quiver && self.ideal == other.ideal
    }
}

impl Eq for BoundQuiver {}

impl BoundQuiver {
    pub fn new(quiver: Quiver, ideal: MonomialIdeal) -> Result<Self, QuiverError> {
        Self::with_cap(quiver, ideal, DEFAULT_PATH_CAP)
    }

    /// Like [`BoundQuiver::new`] with an explicit admissibility search depth
    /// (only consulted when the quiver has cycles).
    pub fn with_cap(quiver: Quiver, ideal: MonomialIdeal, cap: usize) -> Result<Self, QuiverError> {
        for g in ideal.generators() {
            // re-validate composability against this quiver
            quiver.path(&g.arrows)?;
        }
        let acyclic = quiver.is_acyclic();
        let mut paths: Vec<Path> = (0..quiver.vertex_count()).map(Path::trivial).collect();
        let mut frontier: VecDeque<Path> = paths.iter().cloned().collect();
        while let Some(p) = frontier.pop_front() {
            for a in quiver.arrows_out_of(p.target) {
                let q = p.then(a, quiver.arrow(a).target);
                if ideal.has_generator_suffix(&q) {
                    continue;
                }
                if !acyclic && q.len() >= cap {
                    return Err(QuiverError::NotAdmissible(q.len()));
                }
                frontier.push_back(q.clone());
                paths.push(q);
            }
        }
        paths.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(BoundQuiver {
            quiver,
            ideal,
            paths,
            index,
        })
    }

    /// Like [`BoundQuiver::new`] but requires an acyclic quiver and relabels it so
    /// that arrows go from larger to smaller labels. Returns the old -> new label map.
    pub fn new_acyclic(quiver: Quiver, ideal: MonomialIdeal) -> Result<(Self, Vec<usize>), QuiverError> {
        let (relabeled, map) = quiver.relabeled()?;
        let generators = ideal
            .generators()
            .iter()
            .map(|g| Path {
                source: map[g.source],
                target: map[g.target],
                arrows: g.arrows.clone(),
            })
            .collect();
        let bq = BoundQuiver::new(relabeled, MonomialIdeal { generators })?;
        Ok((bq, map))
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    /// All paths outside the ideal, trivial ones included, in the fixed order.
    pub fn nonzero_paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path_index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn in_ideal(&self, p: &Path) -> bool {
        self.ideal.contains(p)
    }

    fn check_arrow(&self, arrow: usize) -> Result<&Arrow, QuiverError> {
        if arrow >= self.quiver.arrows().len() {
            return Err(QuiverError::UnknownArrow(format!("#{arrow}")));
        }
        Ok(self.quiver.arrow(arrow))
    }

    /// Nonzero paths `q` of length at least one ending at `s(arrow)` with `arrow · q` in the ideal.
    pub fn k_alpha(&self, arrow: usize) -> Result<Vec<Path>, QuiverError> {
        let a = self.check_arrow(arrow)?;
        Ok(self
            .paths
            .iter()
            .filter(|q| !q.is_trivial() && q.target == a.source)
            .filter(|q| self.ideal.contains(&q.then(arrow, a.target)))
            .cloned()
            .collect())
    }

    /// Nonzero paths `q` of length at least one starting at `e(arrow)` with `q · arrow` in the ideal.
    pub fn l_alpha(&self, arrow: usize) -> Result<Vec<Path>, QuiverError> {
        let a = self.check_arrow(arrow)?;
        Ok(self
            .paths
            .iter()
            .filter(|q| !q.is_trivial() && q.source == a.target)
            .filter(|q| {
                let mut arrows = vec![arrow];
                arrows.extend_from_slice(&q.arrows);
                self.ideal.contains(&Path {
                    source: a.source,
                    target: q.target,
                    arrows,
                })
            })
            .cloned()
            .collect())
    }

    pub fn opposite(&self) -> BoundQuiver {
        BoundQuiver::new(self.quiver.opposite(), self.ideal.opposite())
            .expect("opposite of an admissible bound quiver is admissible")
    }

    pub fn is_acyclic(&self) -> bool {
        self.quiver.is_acyclic()
    }

    pub fn paths_from(&self, v: usize) -> impl Iterator<Item = &Path> {
        self.paths.iter().filter(move |p| p.source == v)
    }
}

impl fmt::Display for BoundQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices, arrows [", self.quiver.vertex_count())?;
        for (i, a) in self.quiver.arrows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}->{}", a.name, a.source + 1, a.target + 1)?;
        }
        write!(f, "], relations [")?;
        for (i, g) in self.ideal.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g.display(&self.quiver))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 1 <-b- 2 <-a- 3 with the relation ba.
    fn q3() -> BoundQuiver {
        let q = Quiver::new(3, vec![Arrow::new("a", 2, 1), Arrow::new("b", 1, 0)]).unwrap();
        let rel = q.path_from_names(&["b", "a"]).unwrap();
        BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap()
    }

    fn loop_sq() -> BoundQuiver {
        let q = Quiver::new(1, vec![Arrow::new("x", 0, 0)]).unwrap();
        let rel = q.path(&[0, 0]).unwrap();
        BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap()
    }

    #[test]
    fn nonzero_paths_of_q3() {
        let bq = q3();
        let names: Vec<String> = bq.nonzero_paths().iter().map(|p| p.display(bq.quiver())).collect();
        assert_eq!(names, vec!["e1", "e2", "e3", "a", "b"]);
    }

    #[test]
    fn nonzero_paths_of_truncated_loop() {
        let bq = loop_sq();
        assert_eq!(bq.nonzero_paths().len(), 2);
    }

    #[test]
    fn arrowless_quiver() {
        let bq = BoundQuiver::new(Quiver::new(4, vec![]).unwrap(), MonomialIdeal::zero()).unwrap();
        assert_eq!(bq.nonzero_paths().len(), 4);
        assert!(bq.nonzero_paths().iter().all(Path::is_trivial));
    }

    #[test]
    fn loop_without_relations_is_not_admissible() {
        let q = Quiver::new(1, vec![Arrow::new("x", 0, 0)]).unwrap();
        assert!(matches!(
            BoundQuiver::new(q, MonomialIdeal::zero()),
            Err(QuiverError::NotAdmissible(_))
        ));
    }

    #[test]
    fn k_alpha_examples() {
        let bq = q3();
        let (a, b) = (0, 1);
        assert_eq!(bq.k_alpha(b).unwrap(), vec![bq.quiver().path(&[a]).unwrap()]);
        assert!(bq.k_alpha(a).unwrap().is_empty());
        let lp = loop_sq();
        assert_eq!(lp.k_alpha(0).unwrap(), vec![lp.quiver().path(&[0]).unwrap()]);
        assert_eq!(bq.k_alpha(7), Err(QuiverError::UnknownArrow("#7".into())));
    }

    #[test]
    fn l_alpha_examples() {
        let bq = q3();
        let (a, b) = (0, 1);
        assert_eq!(bq.l_alpha(a).unwrap(), vec![bq.quiver().path(&[b]).unwrap()]);
        assert!(bq.l_alpha(b).unwrap().is_empty());
        let lp = loop_sq();
        assert_eq!(lp.l_alpha(0).unwrap(), vec![lp.quiver().path(&[0]).unwrap()]);
    }

    #[test]
    fn opposite_reverses_everything() {
        let bq = q3();
        let op = bq.opposite();
        assert_eq!(op.quiver().arrow(0), &Arrow::new("a", 1, 2));
        assert_eq!(op.ideal().generators()[0].arrows, vec![1, 0]);
        assert_eq!(op.opposite(), bq);
        let bare = BoundQuiver::new(Quiver::new(2, vec![]).unwrap(), MonomialIdeal::zero()).unwrap();
        assert_eq!(bare.opposite(), bare);
    }

    #[test]
    fn sources_and_order() {
        let bq = q3();
        assert_eq!(bq.quiver().source_vertices().unwrap(), vec![2]);
        assert_eq!(bq.quiver().topological_order().unwrap(), vec![0, 1, 2]);
        let a2 = Quiver::new(2, vec![Arrow::new("a", 1, 0)]).unwrap();
        assert_eq!(a2.source_vertices().unwrap(), vec![1]);
        let two = Quiver::new(4, vec![Arrow::new("a", 1, 0), Arrow::new("b", 3, 2)]).unwrap();
        assert_eq!(two.source_vertices().unwrap(), vec![1, 3]);
        assert_eq!(loop_sq().quiver().source_vertices(), Err(QuiverError::Cyclic));
    }

    #[test]
    fn relabeling_enforces_convention() {
        let q = Quiver::new(3, vec![Arrow::new("a", 0, 1), Arrow::new("b", 1, 2)]).unwrap();
        assert!(!q.follows_labeling());
        let (r, map) = q.relabeled().unwrap();
        assert!(r.follows_labeling());
        assert_eq!(map, vec![2, 1, 0]);
    }

    #[test]
    fn k_alpha_recheck_and_subpath_closure() {
        let bq = q3();
        for a in 0..bq.quiver().arrows().len() {
            for q in bq.k_alpha(a).unwrap() {
                assert!(!bq.in_ideal(&q));
                assert!(bq.in_ideal(&q.then(a, bq.quiver().arrow(a).target)));
            }
        }
        for p in bq.nonzero_paths() {
            for len in 1..=p.len() {
                for start in 0..=p.len() - len {
                    let sub = bq.quiver().path(&p.arrows[start..start + len]).unwrap();
                    assert!(bq.path_index(&sub).is_some());
                }
            }
        }
    }
}
