//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails or overruns its time limit.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ipaths_cli::{verify_cnf, verify_cubic, verify_setcover, VerifyOptions};
use ipaths_core::oracles::{brute_force_ip, brute_force_kip, brute_force_max_ip, brute_force_sat, OracleLimit};
use ipaths_core::reductions::labels::{EdgeRole, VertexLabel};
use ipaths_core::reductions::{
    assignment_to_partition, sat3_to_ip, CnfFormula, CubicGraph, Literal, RawCnf, SetCoverInstance,
};
use ipaths_core::score::cancel_common;
use ipaths_core::solvers::{exact_ip, exact_kip, greedy_kip, max_ip_dag, SolverBudget};
use ipaths_core::{
    compare, score_of_collection, score_of_path, validate_partition, DirectedPath, EdgeId, ExactScore, VertexId,
    WeightedDigraph,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_SCORE_IDENTITY: Duration = Duration::from_secs(1);
const LIMIT_WITNESS_EQUALITY: Duration = Duration::from_secs(5);
const LIMIT_CENSUS: Duration = Duration::from_secs(5);
const LIMIT_IP_PER_INSTANCE: Duration = Duration::from_secs(600);
const LIMIT_KIP_PER_INSTANCE: Duration = Duration::from_secs(300);
const LIMIT_CUBIC_TOTAL: Duration = Duration::from_secs(600);
const LIMIT_ORACLE_EQUIVALENCE: Duration = Duration::from_secs(120);
const LIMIT_GREEDY: Duration = Duration::from_secs(120);
const LIMIT_ARITHMETIC: Duration = Duration::from_secs(30);

const CORPUS_SIZE: usize = 50;
const SETCOVER_INSTANCES: usize = 30;
const DAGS_EQUIVALENCE: usize = 200;
const DAGS_GREEDY: usize = 300;
const SCORE_PAIRS: usize = 1000;
const DECIMAL_DIGITS: usize = 30;
/// Cubic graphs (connected or not) on 4, 6, 8 vertices, up to isomorphism.
const CUBIC_COUNTS: [(usize, usize); 3] = [(4, 1), (6, 2), (8, 6)];

type Outcome = Result<String, String>;

fn criterion(id: usize, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; overran limit")),
        Err(d) => (false, d),
    };
    println!(
        "{} [{id}] {name}: {detail} ({:.2} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chain(weights: &[u64]) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(weights.len() + 1);
    for (i, &w) in weights.iter().enumerate() {
        g.add_edge(VertexId(i), VertexId(i + 1), w).unwrap();
    }
    g
}

fn score_identity() -> Outcome {
    let mut factorial = num_factorial(1);
    for k in 1..=10u64 {
        factorial = num_factorial(k + 1);
        let g = chain(&vec![1; k as usize]);
        let p = DirectedPath::new((0..k as usize).map(EdgeId).collect());
        let s = score_of_path(&g, &p).map_err(|e| e.to_string())?;
        ensure(s.materialize().to_string() == factorial, || format!("k = {k}: got {s}"))?;
    }
    Ok(format!("k = 1..10 exact, 11! = {factorial}"))
}

fn num_factorial(n: u64) -> String {
    (1..=n).product::<u64>().to_string()
}

fn random_formula(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CnfFormula {
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let c: [Literal; 3] = std::array::from_fn(|_| Literal::new(rng.gen_range(1..=n), rng.gen_bool(0.5)));
        let taut = c.iter().any(|a| c.iter().any(|b| a.var == b.var && a.positive != b.positive));
        if !taut {
            clauses.push(c);
        }
    }
    CnfFormula::new(n, clauses).unwrap()
}

/// Satisfiable formulas with n, m ≤ 5, paired with their oracle assignment.
fn satisfiable_corpus() -> Vec<(CnfFormula, ipaths_core::reductions::Assignment)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    let mut out = Vec::new();
    while out.len() < CORPUS_SIZE {
        let (n, m) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let f = random_formula(&mut rng, n, m);
        if let Some(a) = brute_force_sat(&f, OracleLimit::default()).unwrap() {
            out.push((f, a));
        }
    }
    out
}

fn witness_equality() -> Outcome {
    for (idx, (f, a)) in satisfiable_corpus().iter().enumerate() {
        let inst = sat3_to_ip(f);
        let p = assignment_to_partition(f, &inst, a).map_err(|e| format!("formula {idx}: {e}"))?;
        validate_partition(&inst.graph, p.collection()).map_err(|e| format!("formula {idx}: {e}"))?;
        let s = score_of_collection(&inst.graph, p.collection()).unwrap();
        ensure(compare(&s, &inst.target_t) == Ordering::Equal, || {
            format!("formula {idx}: score {s} vs target {}", inst.target_t)
        })?;
    }
    Ok(format!("{CORPUS_SIZE} formulas, score == target for each"))
}

fn paths_between(g: &WeightedDigraph, from: VertexId, to: VertexId) -> Vec<usize> {
    fn rec(g: &WeightedDigraph, at: VertexId, to: VertexId, len: usize, out: &mut Vec<usize>) {
        if at == to {
            out.push(len);
            return;
        }
        for &e in g.out_edges(at) {
            rec(g, g.edge(e).target, to, len + 1, out);
        }
    }
    let mut out = Vec::new();
    rec(g, from, to, 0, &mut out);
    out
}

fn census() -> Outcome {
    let mut checked_paths = 0;
    for (idx, (f, _)) in satisfiable_corpus().iter().enumerate() {
        let (n, m) = (f.variable_count(), f.clause_count());
        let inst = sat3_to_ip(f);
        let g = &inst.graph;
        let heavy = inst.edges_with_role(EdgeRole::TypeT);
        ensure(g.edge_count() == 29 * m, || format!("formula {idx}: |E| = {}", g.edge_count()))?;
        ensure(g.vertex_count() == 21 * m + 2 * n, || format!("formula {idx}: |V| = {}", g.vertex_count()))?;
        ensure(heavy.len() == 3 * m, || format!("formula {idx}: {} type-T edges", heavy.len()))?;
        ensure(heavy.iter().all(|&e| g.edge(e).weight == 29 * m as u64), || {
            format!("formula {idx}: type-T weight")
        })?;
        ensure(g.is_acyclic(), || format!("formula {idx}: cyclic"))?;
        for i in 1..=n {
            let s = inst.labels.find(VertexLabel::Source(i)).unwrap();
            let t = inst.labels.find(VertexLabel::Terminal(i)).unwrap();
            let lens = paths_between(g, s, t);
            ensure(lens.iter().all(|&l| l == 6), || format!("formula {idx}, x{i}: path lengths {lens:?}"))?;
            checked_paths += lens.len();
        }
    }
    Ok(format!("{CORPUS_SIZE} formulas, {checked_paths} s-t paths all of length 6"))
}

/// Literal index `2(var-1) + negated`, so flipping a variable is `^ 1`.
type Clause = [usize; 3];

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn canonical(formula: &[Clause], n: usize) -> Vec<Clause> {
    let mut best: Option<Vec<Clause>> = None;
    for perm in permutations(n) {
        for flips in 0..(1usize << n) {
            let map = |l: usize| 2 * perm[l / 2] + ((l & 1) ^ ((flips >> (l / 2)) & 1));
            let mut img: Vec<Clause> = formula
                .iter()
                .map(|c| {
                    let mut d = c.map(map);
                    d.sort_unstable();
                    d
                })
                .collect();
            img.sort_unstable();
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap()
}

/// Every normalized formula with `n` variables and `m` clauses, one per
/// symmetry class under variable renaming and polarity flips.
fn exhaustive_formulas(n: usize, m: usize) -> Vec<Vec<Clause>> {
    let lits = 2 * n;
    let mut clauses = Vec::new();
    for a in 0..lits {
        for b in a..lits {
            for c in b..lits {
                let cl = [a, b, c];
                if !cl.iter().any(|&x| cl.contains(&(x ^ 1))) {
                    clauses.push(cl);
                }
            }
        }
    }
    let mut classes = BTreeSet::new();
    let mut pick = vec![0usize; m];
    loop {
        let f: Vec<Clause> = pick.iter().map(|&i| clauses[i]).collect();
        classes.insert(canonical(&f, n));
        // non-decreasing index tuples enumerate clause multisets
        let Some(pos) = (0..m).rev().find(|&p| pick[p] + 1 < clauses.len()) else {
            break;
        };
        pick[pos] += 1;
        for p in pos + 1..m {
            pick[p] = pick[pos];
        }
    }
    classes.into_iter().collect()
}

fn to_raw(f: &[Clause], n: usize) -> RawCnf {
    RawCnf {
        variable_count: n,
        clauses: f
            .iter()
            .map(|c| c.iter().map(|&l| Literal::new(l / 2 + 1, l & 1 == 0)).collect())
            .collect(),
    }
}

fn ip_iff() -> Outcome {
    let opts = VerifyOptions {
        budget: SolverBudget {
            max_nodes: None,
            max_seconds: Some(LIMIT_IP_PER_INSTANCE.as_secs()),
        },
        ..VerifyOptions::default()
    };
    let (mut total, mut sat, mut slowest) = (0, 0, Duration::ZERO);
    let mut saw_contradiction = false;
    for n in 1..=2 {
        for m in 1..=2 {
            for f in exhaustive_formulas(n, m) {
                let start = Instant::now();
                let r = verify_cnf(&to_raw(&f, n), opts).map_err(|e| e.to_string())?;
                let took = start.elapsed();
                slowest = slowest.max(took);
                ensure(r.get("result") == Some("PASS") && took <= LIMIT_IP_PER_INSTANCE, || {
                    format!("n={n} m={m} {f:?}: {}", r.render())
                })?;
                total += 1;
                sat += usize::from(r.get("oracle") == Some("satisfiable"));
                if n == 1 && f == [[0, 0, 0], [1, 1, 1]] {
                    saw_contradiction = r.get("edges") == Some("58") && r.get("solver") == Some("no");
                }
            }
        }
    }
    ensure(saw_contradiction, || "x and not-x case missing or not refuted".into())?;
    Ok(format!(
        "{total} classes ({sat} sat, {} unsat), x and not-x refuted on 58 edges, slowest {:.2} s",
        total - sat,
        slowest.as_secs_f64()
    ))
}

fn random_setcover(rng: &mut ChaCha8Rng) -> SetCoverInstance {
    let m = *[2usize, 4, 6].choose(rng).unwrap();
    let n = 3 * m / 2;
    let tau = rng.gen_range(1..=m);
    loop {
        let mut slots: Vec<usize> = (1..=n).flat_map(|x| [x, x]).collect();
        slots.shuffle(rng);
        let sets: Vec<[usize; 3]> = slots.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        if let Ok(sc) = SetCoverInstance::new(n, sets, tau) {
            return sc;
        }
    }
}

fn kip_iff() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0e7);
    let (mut yes, mut runs, mut slowest) = (0, 0, Duration::ZERO);
    for idx in 0..SETCOVER_INSTANCES {
        let sc = random_setcover(&mut rng);
        for k in [3, 4] {
            let opts = VerifyOptions {
                k,
                budget: SolverBudget {
                    max_nodes: None,
                    max_seconds: Some(LIMIT_KIP_PER_INSTANCE.as_secs()),
                },
                ..VerifyOptions::default()
            };
            let start = Instant::now();
            let r = verify_setcover(&sc, opts).map_err(|e| e.to_string())?;
            let took = start.elapsed();
            slowest = slowest.max(took);
            ensure(r.get("result") == Some("PASS") && took <= LIMIT_KIP_PER_INSTANCE, || {
                format!("instance {idx}, k = {k}: {}", r.render())
            })?;
            runs += 1;
            yes += usize::from(r.get("solver") == Some("yes"));
        }
    }
    Ok(format!(
        "{runs} runs ({yes} yes, {} no), slowest {:.2} s",
        runs - yes,
        slowest.as_secs_f64()
    ))
}

type Adjacency = Vec<u16>;

/// Every labelled cubic graph on `n` vertices.
fn labelled_cubic(n: usize) -> Vec<Adjacency> {
    fn rec(adj: &mut Adjacency, out: &mut Vec<Adjacency>) {
        let n = adj.len();
        let Some(v) = (0..n).find(|&v| adj[v].count_ones() < 3) else {
            out.push(adj.clone());
            return;
        };
        let need = 3 - adj[v].count_ones() as usize;
        let cands: Vec<usize> = (v + 1..n)
            .filter(|&u| adj[v] >> u & 1 == 0 && adj[u].count_ones() < 3)
            .collect();
        choose(&cands, need, 0, &mut Vec::new(), &mut |pick| {
            for &u in pick {
                adj[v] |= 1 << u;
                adj[u] |= 1 << v;
            }
            rec(adj, out);
            for &u in pick {
                adj[v] &= !(1 << u);
                adj[u] &= !(1 << v);
            }
        });
    }
    fn choose(c: &[usize], k: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in from..c.len() {
            cur.push(c[i]);
            choose(c, k, i + 1, cur, f);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![0; n], &mut out);
    out
}

fn isomorphic(a: &Adjacency, b: &Adjacency) -> bool {
    fn extend(a: &Adjacency, b: &Adjacency, map: &mut Vec<usize>, used: u16) -> bool {
        let v = map.len();
        if v == a.len() {
            return true;
        }
        for w in (0..b.len()).filter(|&w| used >> w & 1 == 0) {
            if (0..v).all(|u| (a[v] >> u & 1) == (b[w] >> map[u] & 1)) {
                map.push(w);
                if extend(a, b, map, used | 1 << w) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    extend(a, b, &mut Vec::new(), 0)
}

fn cubic_graphs() -> Result<Vec<CubicGraph>, String> {
    let mut out = Vec::new();
    for (n, expected) in CUBIC_COUNTS {
        let mut reps: Vec<Adjacency> = Vec::new();
        for g in labelled_cubic(n) {
            if !reps.iter().any(|r| isomorphic(r, &g)) {
                reps.push(g);
            }
        }
        ensure(reps.len() == expected, || format!("{} cubic graphs on {n} vertices", reps.len()))?;
        for adj in &reps {
            let edges = (0..n)
                .flat_map(|u| (u + 1..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u + 1, v + 1)))
                .collect();
            out.push(CubicGraph::new(n, edges).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn cubic_pipeline() -> Outcome {
    let graphs = cubic_graphs()?;
    let mut taus = 0;
    for (idx, g) in graphs.iter().enumerate() {
        for k in [3, 4] {
            let opts = VerifyOptions {
                k,
                ..VerifyOptions::default()
            };
            let r = verify_cubic(g, opts).map_err(|e| e.to_string())?;
            ensure(r.get("result") == Some("PASS"), || format!("graph {idx}, k = {k}: {}", r.render()))?;
            taus += g.vertex_count();
        }
    }
    Ok(format!("{} graphs, {taus} (graph, tau, k) triples agree", graphs.len()))
}

fn random_dag(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize, max_weight: u64) -> WeightedDigraph {
    let n = rng.gen_range(2..=max_vertices);
    let m = rng.gen_range(1..=max_edges);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = WeightedDigraph::new(n);
    for _ in 0..m {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let (u, v) = (a.min(b), a.max(b));
        g.add_edge(VertexId(order[u]), VertexId(order[v]), rng.gen_range(1..=max_weight))
            .unwrap();
    }
    g
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xda6);
    let limit = OracleLimit::default();
    for idx in 0..DAGS_EQUIVALENCE {
        let g = random_dag(&mut rng, 8, 12, 3);
        let fail = |what: &str| format!("dag {idx}: {what} differs from oracle");
        let a = max_ip_dag(&g).map_err(|e| e.to_string())?;
        let b = brute_force_max_ip(&g, limit).map_err(|e| e.to_string())?;
        ensure(a.score == b.score, || fail("max_ip_dag"))?;
        let a = exact_ip(&g, SolverBudget::unlimited()).map_err(|e| e.to_string())?;
        let b = brute_force_ip(&g, limit).map_err(|e| e.to_string())?;
        ensure(a.optimal && a.score == b.score, || fail("exact_ip"))?;
        let a = exact_kip(&g, 3, SolverBudget::unlimited()).map_err(|e| e.to_string())?;
        let b = brute_force_kip(&g, 3, limit).map_err(|e| e.to_string())?;
        ensure(a.optimal && a.score == b.score, || fail("exact_kip"))?;
    }
    Ok(format!("{DAGS_EQUIVALENCE} dags, three solvers equal their oracles"))
}

fn greedy_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x97e);
    let mut strict = 0;
    for idx in 0..DAGS_GREEDY {
        let g = random_dag(&mut rng, 8, 12, 3);
        let greedy = greedy_kip(&g, 3).map_err(|e| e.to_string())?;
        let exact = exact_kip(&g, 3, SolverBudget::unlimited()).map_err(|e| e.to_string())?;
        let (lhs, rhs) = cancel_common(&greedy.score.pow(3), &exact.score);
        ensure(lhs.materialize() >= rhs.materialize(), || format!("dag {idx}: bound violated"))?;
        strict += usize::from(greedy.score < exact.score);
    }
    Ok(format!("{DAGS_GREEDY} dags, 0 violations, greedy below optimum on {strict}"))
}

fn primes_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

fn random_score(rng: &mut ChaCha8Rng, primes: &[u64]) -> ExactScore {
    let count = rng.gen_range(0..=4);
    let chosen: Vec<u64> = primes.choose_multiple(rng, count).copied().collect();
    ExactScore::from_factors(chosen.into_iter().map(|p| (p, rng.gen_range(0..=10_000)))).unwrap()
}

/// Exact order of two non-negative decimal strings.
fn decimal_cmp(a: &str, b: &str) -> Ordering {
    let split = |s: &str| {
        let (i, f) = s.split_once('.').unwrap_or((s, ""));
        (i.trim_start_matches('0').to_string(), f.to_string())
    };
    let ((ai, af), (bi, bf)) = (split(a), split(b));
    let width = af.len().max(bf.len());
    let pad = |f: &str| format!("{f:0<width$}");
    ai.len()
        .cmp(&bi.len())
        .then_with(|| ai.cmp(&bi))
        .then_with(|| pad(&af).cmp(&pad(&bf)))
}

fn arithmetic() -> Outcome {
    for (name, src) in [
        ("score", include_str!("../../core/src/score.rs")),
        ("graph", include_str!("../../core/src/graph.rs")),
    ] {
        let floats = src
            .split(|c: char| !c.is_alphanumeric() && c != '_')
            .any(|tok| tok == "f32" || tok == "f64");
        ensure(!floats, || format!("{name} module mentions a float type"))?;
    }
    let primes = primes_to(101);
    let mut rng = ChaCha8Rng::seed_from_u64(0xa41);
    let (mut decided, mut ties) = (0, 0);
    for idx in 0..SCORE_PAIRS {
        let a = random_score(&mut rng, &primes);
        let b = if idx % 10 == 0 {
            a.clone()
        } else {
            random_score(&mut rng, &primes)
        };
        let exact = compare(&a, &b);
        let (da, db) = (a.approx_decimal(DECIMAL_DIGITS), b.approx_decimal(DECIMAL_DIGITS));
        match decimal_cmp(&da, &db) {
            // rounding is monotone, so distinct renderings fix the order
            Ordering::Equal => {
                ties += 1;
                ensure(a != b || exact == Ordering::Equal, || format!("pair {idx}: equal scores compare unequal"))?;
            }
            d => {
                decided += 1;
                ensure(d == exact, || format!("pair {idx}: {da} vs {db} but compare says {exact:?}"))?;
            }
        }
    }
    Ok(format!(
        "{SCORE_PAIRS} pairs, {decided} ordered by decimals, {ties} ties, no float types in scoring code"
    ))
}

fn main() -> ExitCode {
    let results = [
        criterion(1, "score identity (k+1)!", LIMIT_SCORE_IDENTITY, score_identity),
        criterion(2, "canonical partition scores exactly t", LIMIT_WITNESS_EQUALITY, witness_equality),
        criterion(3, "IP gadget censuses", LIMIT_CENSUS, census),
        criterion(
            4,
            "IP iff-certification, n <= 2, m <= 2",
            LIMIT_IP_PER_INSTANCE * 40,
            ip_iff,
        ),
        criterion(
            5,
            "k-IP iff-certification, 30 set-cover instances",
            LIMIT_KIP_PER_INSTANCE * 60,
            kip_iff,
        ),
        criterion(6, "cubic vertex cover pipeline", LIMIT_CUBIC_TOTAL, cubic_pipeline),
        criterion(7, "solver-oracle equivalence", LIMIT_ORACLE_EQUIVALENCE, oracle_equivalence),
        criterion(8, "greedy 1/k bound", LIMIT_GREEDY, greedy_bound),
        criterion(9, "exact comparison vs certified decimals", LIMIT_ARITHMETIC, arithmetic),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
