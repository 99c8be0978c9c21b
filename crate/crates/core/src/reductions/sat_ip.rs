use crate::format::InstanceFile;
use crate::graph::{
    score_of_collection, validate_partition, DirectedPath, EdgeId, PathCollection, PathPartition,
    VertexId, WeightedDigraph,
};
use crate::score::ExactScore;

use super::cnf::{Assignment, CnfFormula};
use super::labels::{EdgeRole, Occurrence, VertexLabel};
use super::{Builder, Labels, ReductionError};

use VertexLabel::{Clause, Hub, Join, Neg, Pos, Source, Sub, Terminal};

/// A generated IP decision instance: partition the edges of `graph` into
/// paths scoring at least `target_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpInstance {
    pub graph: WeightedDigraph,
    pub target_t: ExactScore,
    pub labels: Labels,
}

impl IpInstance {
    /// Edge ids with a given role, ascending.
    pub fn edges_with_role(&self, role: EdgeRole) -> Vec<EdgeId> {
        self.graph.edge_ids().filter(|&e| self.labels.edge_role(e) == role).collect()
    }

    pub fn to_instance_file(&self) -> InstanceFile {
        let mut file = InstanceFile::new(self.graph.clone());
        file.target = Some(self.target_t.clone());
        self.labels.write_into(&mut file);
        file
    }

    pub fn from_instance_file(file: &InstanceFile) -> Result<Self, ReductionError> {
        let target_t = file
            .target
            .clone()
            .ok_or_else(|| ReductionError::BadLabels("missing target".into()))?;
        Ok(Self {
            graph: file.graph.clone(),
            target_t,
            labels: Labels::read_from(file)?,
        })
    }
}

/// `2^{5m} · 3^{2m} · (5!)^m · (6!)^{3m} · 7^{87m²}`: the value of the
/// canonical partition of a satisfiable instance with `m` clauses.
pub fn ip_target(m: usize) -> ExactScore {
    let m = m as u64;
    let mut t = ExactScore::power(2, 5 * m);
    t.mul_power(3, 2 * m);
    t.mul_power(120, m);
    t.mul_power(720, 3 * m);
    t.mul_power(7, 87 * m * m);
    t
}

/// Occurrence following `occs[j]` in the cyclic order of its variable.
fn next_occurrence(occs: &[Occurrence], j: usize) -> Occurrence {
    occs[(j + 1) % occs.len()]
}

/// Builds the IP instance of a normalized 3-CNF.
///
/// Vertices: the clause spines first, then per variable `s_i`, the six
/// vertices of each occurrence, and `t_i`. Every occurrence `α` of `x_i`
/// contributes a subdivided `s_i → v_α`, the fork `v_α → y_α, ȳ_α`,
/// `y_α → u_α`, `ȳ_α → u_{next(α)}`, and `u_α → t_i` of weight `29m`. Each
/// clause slot links `z_{j,2}` to the `y` (positive literal) or `ȳ` (negative
/// literal) of that slot's occurrence.
pub fn sat3_to_ip(f: &CnfFormula) -> IpInstance {
    let m = f.clause_count();
    let heavy = 29 * m as u64;
    let mut b = Builder::default();
    for j in 1..=m {
        for r in 0..3 {
            b.vertex(Clause(j, r));
        }
    }
    for i in 1..=f.variable_count() {
        let occs = f.occurrences(i);
        b.vertex(Source(i));
        for &a in &occs {
            for label in [Sub(i, a, 1), Sub(i, a, 2), Hub(i, a), Pos(i, a), Neg(i, a), Join(i, a)] {
                b.vertex(label);
            }
        }
        b.vertex(Terminal(i));
        for (j, &a) in occs.iter().enumerate() {
            b.edge(Source(i), Sub(i, a, 1), 1, EdgeRole::Subdivision);
            b.edge(Sub(i, a, 1), Sub(i, a, 2), 1, EdgeRole::Subdivision);
            b.edge(Sub(i, a, 2), Hub(i, a), 1, EdgeRole::Subdivision);
            b.edge(Hub(i, a), Pos(i, a), 1, EdgeRole::VToY);
            b.edge(Hub(i, a), Neg(i, a), 1, EdgeRole::VToYbar);
            b.edge(Pos(i, a), Join(i, a), 1, EdgeRole::TypeUPos);
            b.edge(Neg(i, a), Join(i, next_occurrence(&occs, j)), 1, EdgeRole::TypeUNeg);
            b.edge(Join(i, a), Terminal(i), heavy, EdgeRole::TypeT);
        }
    }
    for j in 1..=m {
        b.edge(Clause(j, 0), Clause(j, 1), 1, EdgeRole::ClauseSpine);
        b.edge(Clause(j, 1), Clause(j, 2), 1, EdgeRole::ClauseSpine);
        for slot in 1..=3 {
            let a = Occurrence { clause: j, slot };
            let lit = f.literal(a);
            let end = if lit.positive { Pos(lit.var, a) } else { Neg(lit.var, a) };
            b.edge(Clause(j, 2), end, 1, EdgeRole::ClauseConnector);
        }
    }
    let (graph, labels) = b.finish();
    IpInstance {
        graph,
        target_t: ip_target(m),
        labels,
    }
}

struct Walker<'a> {
    inst: &'a IpInstance,
}

impl Walker<'_> {
    fn path(&self, labels: &[VertexLabel]) -> DirectedPath {
        let ids: Vec<VertexId> = labels.iter().map(|&l| self.inst.labels.get(l)).collect();
        DirectedPath::new(
            ids.windows(2)
                .map(|w| self.inst.graph.edge_between(w[0], w[1]).expect("construction edge"))
                .collect(),
        )
    }
}

fn check_shape(f: &CnfFormula, inst: &IpInstance) -> Result<(), ReductionError> {
    let m = f.clause_count();
    let n = f.variable_count();
    if inst.graph.edge_count() != 29 * m || inst.graph.vertex_count() != 21 * m + 2 * n {
        return Err(ReductionError::BadLabels(format!(
            "instance has {} vertices and {} edges; the formula needs {} and {}",
            inst.graph.vertex_count(),
            inst.graph.edge_count(),
            21 * m + 2 * n,
            29 * m
        )));
    }
    Ok(())
}

/// The canonical partition of a satisfying assignment; scores exactly `t`.
///
/// A TRUE variable routes its heavy paths through the `ȳ` side, a FALSE one
/// through the `y` side, leaving the other side free for clause paths. Each
/// clause takes its lowest true slot.
pub fn assignment_to_partition(
    f: &CnfFormula,
    inst: &IpInstance,
    a: &Assignment,
) -> Result<PathPartition, ReductionError> {
    check_shape(f, inst)?;
    if a.variable_count() != f.variable_count() {
        return Err(ReductionError::AssignmentSize {
            got: a.variable_count(),
            expected: f.variable_count(),
        });
    }
    if let Some(clause) = f.first_falsified(a) {
        return Err(ReductionError::Unsatisfied { clause });
    }
    let w = Walker { inst };
    let mut paths = Vec::new();
    let mut chosen = Vec::new();
    for j in 1..=f.clause_count() {
        let slot = (1..=3)
            .find(|&p| f.literal(Occurrence { clause: j, slot: p }).holds(a))
            .expect("clause is satisfied");
        chosen.push(Occurrence { clause: j, slot });
    }
    for i in 1..=f.variable_count() {
        let occs = f.occurrences(i);
        let truth = a.value(i);
        for (j, &occ) in occs.iter().enumerate() {
            let next = next_occurrence(&occs, j);
            let head = [Source(i), Sub(i, occ, 1), Sub(i, occ, 2), Hub(i, occ)];
            let (heavy_side, free_side, free_end) = if truth {
                (vec![Neg(i, occ), Join(i, next)], Pos(i, occ), Join(i, occ))
            } else {
                (vec![Pos(i, occ), Join(i, occ)], Neg(i, occ), Join(i, next))
            };
            let mut heavy: Vec<VertexLabel> = head.to_vec();
            heavy.extend(heavy_side);
            heavy.push(Terminal(i));
            paths.push(w.path(&heavy));
            if chosen.contains(&occ) {
                paths.push(w.path(&[Clause(occ.clause, 0), Clause(occ.clause, 1), Clause(occ.clause, 2), free_side, free_end]));
                paths.push(w.path(&[Hub(i, occ), free_side]));
            } else {
                paths.push(w.path(&[Hub(i, occ), free_side, free_end]));
            }
        }
    }
    for (j, &occ) in chosen.iter().enumerate() {
        for slot in (1..=3).filter(|&p| p != occ.slot) {
            let other = Occurrence { clause: j + 1, slot };
            let lit = f.literal(other);
            let end = if lit.positive { Pos(lit.var, other) } else { Neg(lit.var, other) };
            paths.push(w.path(&[Clause(j + 1, 2), end]));
        }
    }
    let partition = validate_partition(&inst.graph, &PathCollection::new(paths))
        .map_err(|e| ReductionError::Inconsistent(format!("canonical partition invalid: {e}")))?;
    Ok(partition)
}

/// Reads the assignment off a partition scoring at least `t`.
///
/// The `ℓ_i` paths from `s_i` to `t_i` must all pass through `ȳ` vertices
/// (TRUE) or all through `y` vertices (FALSE), and every clause must own a
/// 4-path from `z_{j,0}` ending in a type-U edge. Unused variables are FALSE.
pub fn partition_to_assignment(
    f: &CnfFormula,
    inst: &IpInstance,
    p: &PathPartition,
) -> Result<Assignment, ReductionError> {
    check_shape(f, inst)?;
    let g = &inst.graph;
    let labels = &inst.labels;
    let vertex_labels = |path: &DirectedPath| -> Vec<VertexLabel> {
        g.path_vertices(path)
            .expect("validated path")
            .into_iter()
            .map(|v| labels.vertex_label(v))
            .collect()
    };
    let mut assignment = Assignment::all_false(f.variable_count());
    for i in 1..=f.variable_count() {
        let ell = f.occurrences(i).len();
        if ell == 0 {
            continue;
        }
        let heavy: Vec<Vec<VertexLabel>> = p
            .paths()
            .iter()
            .map(vertex_labels)
            .filter(|vs| vs.first() == Some(&Source(i)) && vs.last() == Some(&Terminal(i)))
            .collect();
        if heavy.len() != ell {
            return Err(ReductionError::MalformedWitness(format!(
                "variable {i}: expected {ell} paths from s({i}) to t({i}), found {}",
                heavy.len()
            )));
        }
        let via_neg = heavy.iter().filter(|vs| matches!(vs.get(4), Some(Neg(..)))).count();
        let via_pos = heavy.iter().filter(|vs| matches!(vs.get(4), Some(Pos(..)))).count();
        if via_neg == ell {
            assignment.set(i, true);
        } else if via_pos != ell {
            return Err(ReductionError::MalformedWitness(format!(
                "variable {i}: its s-t paths mix the y and ybar sides"
            )));
        }
    }
    for j in 1..=f.clause_count() {
        let start = labels.get(Clause(j, 0));
        let ok = p.paths().iter().any(|path| {
            path.len() == 4
                && g.edge(path.edges()[0]).source == start
                && matches!(
                    labels.edge_role(*path.edges().last().expect("nonempty")),
                    EdgeRole::TypeUPos | EdgeRole::TypeUNeg
                )
        });
        if !ok {
            return Err(ReductionError::MalformedWitness(format!(
                "clause {j}: no 4-path from z({j},0) ending in a type-U edge"
            )));
        }
    }
    let score = score_of_collection(&inst.graph, p.collection())
        .map_err(|e| ReductionError::MalformedWitness(e.to_string()))?;
    if score < inst.target_t {
        return Err(ReductionError::Precondition("partition scores below the target".into()));
    }
    if let Some(clause) = f.first_falsified(&assignment) {
        return Err(ReductionError::Inconsistent(format!(
            "extracted assignment falsifies clause {clause}"
        )));
    }
    Ok(assignment)
}
