use crate::format::InstanceFile;
use crate::graph::{validate_collection, DirectedPath, EdgeId, PathCollection, VertexId, WeightedDigraph};
use crate::score::ExactScore;

use super::labels::{ChainAnchor, EdgeRole, VertexLabel};
use super::setcover::{Cover, SetCoverInstance};
use super::{Builder, Labels, ReductionError};

use VertexLabel::{Chain, Element, Member, SetSink};

/// A generated k-IP decision instance: find edge-disjoint k-paths scoring at
/// least `target_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KipInstance {
    pub graph: WeightedDigraph,
    pub k: usize,
    pub target_t: ExactScore,
    pub labels: Labels,
}

impl KipInstance {
    pub fn to_instance_file(&self) -> InstanceFile {
        let mut file = InstanceFile::new(self.graph.clone());
        file.k = Some(self.k);
        file.target = Some(self.target_t.clone());
        self.labels.write_into(&mut file);
        file
    }

    pub fn from_instance_file(file: &InstanceFile) -> Result<Self, ReductionError> {
        let missing = |what: &str| ReductionError::BadLabels(format!("missing {what}"));
        Ok(Self {
            graph: file.graph.clone(),
            k: file.k.ok_or_else(|| missing("k"))?,
            target_t: file.target.clone().ok_or_else(|| missing("target"))?,
            labels: Labels::read_from(file)?,
        })
    }
}

/// `(k+1)!^{2n+m−τ}`.
pub fn kip_target(sc: &SetCoverInstance, k: usize) -> ExactScore {
    let count = 2 * sc.element_count() + sc.set_count() - sc.tau();
    (2..=k as u64 + 1)
        .map(|b| ExactScore::power(b, count as u64))
        .product()
}

/// Emits `k − 3` prefix edges leading into `end`.
fn prefix_chain(b: &mut Builder, anchor: ChainAnchor, end: VertexLabel, k: usize) {
    let steps = k - 3;
    for r in 1..=steps {
        let to = if r == steps { end } else { Chain(anchor, r + 1) };
        b.edge(Chain(anchor, r), to, 1, EdgeRole::Prefix);
    }
}

/// Builds the unit-weight k-IP instance of a (3,2) set-cover instance.
///
/// Element `x` gets `v1 → v3 → v4 ← v2` and `v4` feeds its member vertex in
/// both owning sets; set `j = {p < q < r}` is the chain
/// `u_{j,p} → u_{j,q} → u_{j,r} → u_j`. For `k > 3`, prefix chains of `k − 3`
/// edges lead into each `v1`, each `v2`, and each `u_{j,p}`.
pub fn setcover_to_kip(sc: &SetCoverInstance, k: usize) -> Result<KipInstance, ReductionError> {
    if k < 3 {
        return Err(ReductionError::InvalidK(k));
    }
    let mut b = Builder::default();
    for x in 1..=sc.element_count() {
        let (alpha, beta) = sc.owners(x);
        b.edge(Element(x, 1), Element(x, 3), 1, EdgeRole::ElementEdge);
        b.edge(Element(x, 3), Element(x, 4), 1, EdgeRole::ElementEdge);
        b.edge(Element(x, 2), Element(x, 4), 1, EdgeRole::ElementEdge);
        b.edge(Element(x, 4), Member(alpha, x), 1, EdgeRole::Membership);
        b.edge(Element(x, 4), Member(beta, x), 1, EdgeRole::Membership);
        prefix_chain(&mut b, ChainAnchor::First(x), Element(x, 1), k);
        prefix_chain(&mut b, ChainAnchor::Second(x), Element(x, 2), k);
    }
    for j in 1..=sc.set_count() {
        let [p, q, r] = sc.set(j);
        b.edge(Member(j, p), Member(j, q), 1, EdgeRole::SetChain);
        b.edge(Member(j, q), Member(j, r), 1, EdgeRole::SetChain);
        b.edge(Member(j, r), SetSink(j), 1, EdgeRole::SetChain);
        prefix_chain(&mut b, ChainAnchor::Set(j), Member(j, p), k);
    }
    let (graph, labels) = b.finish();
    Ok(KipInstance {
        graph,
        k,
        target_t: kip_target(sc, k),
        labels,
    })
}

fn chain_labels(anchor: ChainAnchor, k: usize) -> Vec<VertexLabel> {
    (1..=k - 3).map(|r| Chain(anchor, r)).collect()
}

fn walk(inst: &KipInstance, labels: &[VertexLabel]) -> DirectedPath {
    let ids: Vec<VertexId> = labels.iter().map(|&l| inst.labels.get(l)).collect();
    DirectedPath::new(
        ids.windows(2)
            .map(|w| inst.graph.edge_between(w[0], w[1]).expect("construction edge"))
            .collect(),
    )
}

/// Vertex after `u_{j,x}` on the chain of set `j`.
fn successor(sc: &SetCoverInstance, j: usize, x: usize) -> VertexLabel {
    let s = sc.set(j);
    match s.iter().position(|&y| y == x) {
        Some(0) => Member(j, s[1]),
        Some(1) => Member(j, s[2]),
        _ => SetSink(j),
    }
}

fn check_shape(sc: &SetCoverInstance, inst: &KipInstance) -> Result<(), ReductionError> {
    let (n, m, k) = (sc.element_count(), sc.set_count(), inst.k);
    if k < 3 {
        return Err(ReductionError::InvalidK(k));
    }
    let edges = 5 * n + 3 * m + (k - 3) * (2 * n + m);
    if inst.graph.edge_count() != edges {
        return Err(ReductionError::BadLabels(format!(
            "instance has {} edges; the set system needs {edges} at k = {k}",
            inst.graph.edge_count()
        )));
    }
    Ok(())
}

/// The packing of a cover: the chain of every set outside the cover, and two
/// paths per element, one ending inside the chain of its lowest covering set.
pub fn cover_to_kpaths(
    sc: &SetCoverInstance,
    inst: &KipInstance,
    c: &Cover,
) -> Result<PathCollection, ReductionError> {
    check_shape(sc, inst)?;
    sc.check_cover(c)?;
    let k = inst.k;
    let mut paths = Vec::new();
    for j in (1..=sc.set_count()).filter(|&j| !c.contains(j)) {
        let [p, q, r] = sc.set(j);
        let mut labels = chain_labels(ChainAnchor::Set(j), k);
        labels.extend([Member(j, p), Member(j, q), Member(j, r), SetSink(j)]);
        paths.push(walk(inst, &labels));
    }
    for x in 1..=sc.element_count() {
        let (a, b) = sc.owners(x);
        let (alpha, beta) = if c.contains(a) { (a, b) } else { (b, a) };
        let mut second = chain_labels(ChainAnchor::Second(x), k);
        second.extend([Element(x, 2), Element(x, 4), Member(alpha, x), successor(sc, alpha, x)]);
        paths.push(walk(inst, &second));
        let mut first = chain_labels(ChainAnchor::First(x), k);
        first.extend([Element(x, 1), Element(x, 3), Element(x, 4), Member(beta, x)]);
        paths.push(walk(inst, &first));
    }
    Ok(PathCollection::new(paths))
}

/// Recovers a cover from a large enough packing.
///
/// Let `J` be the sets whose three chain edges lie on a single path of the
/// packing. Every other path passes through exactly one `v4` and uses one of
/// its two out-edges, and an element with both sets in `J` supports at most
/// one such path. Hence the complement of `J`, plus one set per element it
/// misses, has at most `τ` sets whenever the packing has `2n + m − τ` paths.
pub fn kpaths_to_cover(
    sc: &SetCoverInstance,
    inst: &KipInstance,
    pc: &PathCollection,
) -> Result<Cover, ReductionError> {
    check_shape(sc, inst)?;
    let needed = 2 * sc.element_count() + sc.set_count() - sc.tau();
    if pc.len() < needed {
        return Err(ReductionError::Precondition(format!(
            "collection has {} paths, at least {needed} needed",
            pc.len()
        )));
    }
    validate_collection(&inst.graph, pc).map_err(|e| ReductionError::MalformedWitness(e.to_string()))?;
    if let Some((i, p)) = pc.paths().iter().enumerate().find(|(_, p)| p.len() != inst.k) {
        return Err(ReductionError::MalformedWitness(format!(
            "path {i} has {} edges, expected {}",
            p.len(),
            inst.k
        )));
    }
    let chain_edges = |j: usize| -> Vec<EdgeId> {
        let [p, q, r] = sc.set(j);
        let labels = [Member(j, p), Member(j, q), Member(j, r), SetSink(j)];
        walk(inst, &labels).edges().to_vec()
    };
    let in_j: Vec<bool> = (1..=sc.set_count())
        .map(|j| {
            let edges = chain_edges(j);
            pc.paths().iter().any(|p| edges.iter().all(|e| p.edges().contains(e)))
        })
        .collect();
    let mut cover = Cover::new((1..=sc.set_count()).filter(|&j| !in_j[j - 1]));
    for x in 1..=sc.element_count() {
        let (a, b) = sc.owners(x);
        if !cover.contains(a) && !cover.contains(b) {
            cover.insert(a);
        }
    }
    match sc.check_cover(&cover) {
        Ok(()) => Ok(cover),
        Err(ReductionError::CoverTooLarge { size, tau }) => Err(ReductionError::MalformedWitness(format!(
            "recovered cover has {size} sets, above tau {tau}"
        ))),
        Err(e) => Err(ReductionError::Inconsistent(e.to_string())),
    }
}
