//! Zeta functions of directed graphs of varieties.
//!
//! Each vertex `v` carries an affine variety `X_v` and a level `d_v`; each
//! edge `e` carries a morphism `f_e: X_{s(e)} -> X_{t(e)}`. `N(k)` counts the
//! tuples `(x_v)` with `x_v ∈ X_v(F_{q^(d_v k)})` and `f_e(x_{s(e)}) = x_{t(e)}`
//! for every edge. The same numbers are the partial counts of the fibred
//! product of all `X_v` over all `f_e`, which [`fibred_product_reduce`]
//! writes down explicitly.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::count::{partial_count, subfield_domain, Search};
use crate::field::{build_field_with, FieldDescriptor, FieldElement};
use crate::poly::{BaseField, CompiledPoly, MorphismSpec, SparsePoly, VarietySpec};
use crate::zeta::{auto_reconstruct, weil_weight_check, RationalFunctionData, WeightReport};
use crate::{Config, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub vars: Vec<String>,
    pub equations: Vec<SparsePoly>,
    pub level: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub morphism: MorphismSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSystem {
    base: BaseField,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl GraphSystem {
    pub fn new(base: &BaseField, vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        for v in &vertices {
            if v.level == 0 {
                return Err(Error::InvalidParameter(format!(
                    "vertex {} has level 0",
                    v.name
                )));
            }
            if let Some(eq) = v
                .equations
                .iter()
                .find(|e| e.nvars() != v.vars.len() || e.base() != base)
            {
                return Err(Error::DimensionMismatch {
                    expected: v.vars.len(),
                    got: eq.nvars(),
                });
            }
        }
        for e in &edges {
            let (Some(s), Some(t)) = (vertices.get(e.source), vertices.get(e.target)) else {
                return Err(Error::InvalidParameter(format!(
                    "edge {} -> {} names a missing vertex",
                    e.source, e.target
                )));
            };
            if e.morphism.source_dim() != s.vars.len() {
                return Err(Error::DimensionMismatch {
                    expected: s.vars.len(),
                    got: e.morphism.source_dim(),
                });
            }
            if e.morphism.target_dim() != t.vars.len() {
                return Err(Error::DimensionMismatch {
                    expected: t.vars.len(),
                    got: e.morphism.target_dim(),
                });
            }
            if e.morphism.components().iter().any(|c| c.base() != base) {
                return Err(Error::InvalidParameter(
                    "edge morphism over a different base field".into(),
                ));
            }
        }
        Ok(GraphSystem {
            base: base.clone(),
            vertices,
            edges,
        })
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `D = lcm(d_v)`.
    pub fn lcm(&self) -> u32 {
        self.vertices.iter().fold(1u32, |acc, v| acc.lcm(&v.level))
    }

    /// A copy with one more edge.
    pub fn with_edge(&self, edge: Edge) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Self::new(&self.base, self.vertices.clone(), edges)
    }

    fn ambient(&self, k: u32, cfg: &Config) -> Result<FieldDescriptor> {
        let n = self.lcm().checked_mul(k).ok_or_else(|| {
            Error::InvalidParameter(format!("level {k} overflows the ambient degree"))
        })?;
        build_field_with(self.base.p(), self.base.s(), n, &cfg.budget)
    }
}

struct CompiledEdge {
    source: usize,
    target: usize,
    components: Vec<CompiledPoly>,
}

/// Per-vertex point lists, then a backtracking search over edges.
fn direct_tuples(
    g: &GraphSystem,
    k: u32,
    cfg: &Config,
    collect: bool,
) -> Result<(u64, Vec<Vec<FieldElement>>)> {
    if k == 0 {
        return Err(Error::InvalidParameter("level k must be positive".into()));
    }
    let field = g.ambient(k, cfg)?;
    let mut points: Vec<Vec<Vec<FieldElement>>> = Vec::with_capacity(g.vertices.len());
    for v in &g.vertices {
        let dom = subfield_domain(&field, v.level * k, cfg.subfield_method)?;
        let search = Search::new(&field, &v.equations, vec![dom; v.vars.len()]);
        cfg.budget
            .check(|| format!("points of vertex {}", v.name), search.tuple_count())?;
        points.push(search.points(cfg));
    }
    let product = points
        .iter()
        .fold(1u128, |acc, p| acc.saturating_mul(p.len() as u128));
    cfg.budget.check(|| "compatible vertex tuples".into(), product)?;
    // edges grouped by the later of their endpoints
    let mut by_vertex: Vec<Vec<CompiledEdge>> = (0..g.vertices.len()).map(|_| Vec::new()).collect();
    for e in &g.edges {
        by_vertex[e.source.max(e.target)].push(CompiledEdge {
            source: e.source,
            target: e.target,
            components: e
                .morphism
                .components()
                .iter()
                .map(|c| c.compile(&field))
                .collect(),
        });
    }
    let walker = Walker {
        field: &field,
        points: &points,
        edges: &by_vertex,
        collect,
    };
    if g.vertices.is_empty() {
        return Ok((1, if collect { vec![Vec::new()] } else { Vec::new() }));
    }
    let run_from = |first: usize| {
        let mut chosen = vec![0usize; points.len()];
        chosen[0] = first;
        let mut out = (0u64, Vec::new());
        if walker.compatible(0, &chosen) {
            walker.walk(1, &mut chosen, &mut out);
        }
        out
    };
    let parts: Vec<(u64, Vec<Vec<FieldElement>>)> = if cfg.workers <= 1 {
        (0..points[0].len()).map(run_from).collect()
    } else {
        cfg.run(|| (0..points[0].len()).into_par_iter().map(run_from).collect())
    };
    let mut total = 0;
    let mut tuples = Vec::new();
    for (c, t) in parts {
        total += c;
        tuples.extend(t);
    }
    Ok((total, tuples))
}

struct Walker<'a> {
    field: &'a FieldDescriptor,
    points: &'a [Vec<Vec<FieldElement>>],
    edges: &'a [Vec<CompiledEdge>],
    collect: bool,
}

impl Walker<'_> {
    fn compatible(&self, v: usize, chosen: &[usize]) -> bool {
        self.edges[v].iter().all(|e| {
            let src = &self.points[e.source][chosen[e.source]];
            let dst = &self.points[e.target][chosen[e.target]];
            e.components
                .iter()
                .zip(dst)
                .all(|(c, &y)| c.eval(self.field, src) == y)
        })
    }

    fn walk(&self, v: usize, chosen: &mut [usize], out: &mut (u64, Vec<Vec<FieldElement>>)) {
        if v == self.points.len() {
            out.0 += 1;
            if self.collect {
                out.1.push(
                    chosen
                        .iter()
                        .enumerate()
                        .flat_map(|(u, &i)| self.points[u][i].iter().copied())
                        .collect(),
                );
            }
            return;
        }
        for i in 0..self.points[v].len() {
            chosen[v] = i;
            if self.compatible(v, chosen) {
                self.walk(v + 1, chosen, out);
            }
        }
    }
}

/// `N(k)` counted straight from the graph.
pub fn graph_count_direct(g: &GraphSystem, k: u32, cfg: &Config) -> Result<u64> {
    Ok(direct_tuples(g, k, cfg, false)?.0)
}

/// The fibred product as one variety with its coordinate blocks.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub variety: VarietySpec,
    /// `blocks[v]`: the coordinates of the reduced variety that form `x_v`.
    pub blocks: Vec<Vec<usize>>,
}

/// The fibred product in the concatenated coordinates of all vertices, in
/// vertex order: every `X_v`'s equations on its block plus
/// `f_e(x_{s(e)}) - x_{t(e)}` for every edge, with level `d_v` on `v`'s block.
pub fn fibred_product_reduce(g: &GraphSystem) -> Result<Reduction> {
    let mut blocks = Vec::with_capacity(g.vertices.len());
    let mut vars = Vec::new();
    let mut profile = Vec::new();
    for v in &g.vertices {
        let start = vars.len();
        vars.extend(v.vars.iter().map(|x| format!("{}_{}", v.name, x)));
        profile.extend(std::iter::repeat_n(v.level, v.vars.len()));
        blocks.push((start..vars.len()).collect::<Vec<_>>());
    }
    let total = vars.len();
    let mut equations = Vec::new();
    for (v, block) in g.vertices.iter().zip(&blocks) {
        for eq in &v.equations {
            equations.push(eq.substitute_rename(block, total)?);
        }
    }
    for e in &g.edges {
        for (c, &t) in e.morphism.components().iter().zip(&blocks[e.target]) {
            let image = c.substitute_rename(&blocks[e.source], total)?;
            let eq = image.sub(&SparsePoly::var(&g.base, total, t));
            if !eq.is_zero() {
                equations.push(eq);
            }
        }
    }
    Ok(Reduction {
        variety: VarietySpec::new(&g.base, vars, equations, profile)?,
        blocks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphReport {
    pub reduced_equations: Vec<String>,
    pub reduced_profile: Vec<u32>,
    pub direct: Vec<u64>,
    pub reduced: Vec<u64>,
    pub equal: bool,
    /// Up to 10 tuples found by one route only.
    pub witnesses: Vec<String>,
    pub function: Option<RationalFunctionData>,
    pub b_used: Option<usize>,
    pub weights: Option<WeightReport>,
    pub pass: bool,
}

/// Compares both routes for `k = 1..=k_max`, then reconstructs the graph
/// zeta function from the reduced variety and checks its weights.
pub fn reduction_check(
    g: &GraphSystem,
    k_max: u32,
    max_k: usize,
    holdout: usize,
    tol: f64,
    cfg: &Config,
) -> Result<GraphReport> {
    let red = fibred_product_reduce(g)?;
    let mut direct = Vec::new();
    let mut reduced = Vec::new();
    let mut witnesses = Vec::new();
    for k in 1..=k_max {
        let a = graph_count_direct(g, k, cfg)?;
        let b = partial_count(&red.variety, k, cfg)?;
        if a != b && witnesses.is_empty() {
            witnesses = mismatch_witnesses(g, &red, k, cfg)?;
        }
        direct.push(a);
        reduced.push(b);
    }
    let equal = direct == reduced;
    let rec = auto_reconstruct(&red.variety, max_k, holdout, cfg)?;
    let consistent = rec
        .counts
        .iter()
        .zip(&direct)
        .all(|(x, y)| x == y);
    let weights = weil_weight_check(&rec.function, g.base.q(), tol)?;
    let pass = equal && consistent && weights.pass;
    Ok(GraphReport {
        reduced_equations: red.variety.equation_texts(),
        reduced_profile: red.variety.profile().to_vec(),
        direct,
        reduced,
        equal,
        witnesses,
        function: Some(rec.function.data()),
        b_used: Some(rec.b_used),
        weights: Some(weights),
        pass,
    })
}

fn mismatch_witnesses(g: &GraphSystem, red: &Reduction, k: u32, cfg: &Config) -> Result<Vec<String>> {
    let (_, left) = direct_tuples(g, k, cfg, true)?;
    let field = g.ambient(k, cfg)?;
    let doms = red
        .variety
        .profile()
        .iter()
        .map(|&d| subfield_domain(&field, d * k, cfg.subfield_method))
        .collect::<Result<Vec<_>>>()?;
    let right = Search::new(&field, red.variety.equations(), doms).points(cfg);
    let show = |side: &str, p: &[FieldElement]| {
        let coords: Vec<String> = p.iter().map(|&c| field.render(c)).collect();
        format!("{side}: ({})", coords.join(", "))
    };
    Ok(left
        .iter()
        .filter(|p| !right.contains(p))
        .map(|p| show("direct only", p))
        .chain(
            right
                .iter()
                .filter(|p| !left.contains(p))
                .map(|p| show("reduction only", p)),
        )
        .take(10)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;

    fn f2() -> BaseField {
        BaseField::new(2, 1).unwrap()
    }

    fn line(name: &str, level: u32) -> Vertex {
        Vertex {
            name: name.into(),
            vars: vec!["x".into()],
            equations: vec![],
            level,
        }
    }

    fn map(text: &str) -> MorphismSpec {
        MorphismSpec::new(1, vec![parse_poly(text, &["x"], &f2()).unwrap()]).unwrap()
    }

    fn edge(s: usize, t: usize, text: &str) -> Edge {
        Edge {
            source: s,
            target: t,
            morphism: map(text),
        }
    }

    fn counts(g: &GraphSystem, kmax: u32) -> Vec<u64> {
        (1..=kmax)
            .map(|k| graph_count_direct(g, k, &Config::default()).unwrap())
            .collect()
    }

    #[test]
    fn direct_examples() {
        let single = GraphSystem::new(&f2(), vec![line("A", 2)], vec![]).unwrap();
        assert_eq!(counts(&single, 1), vec![4]);
        let pair = GraphSystem::new(&f2(), vec![line("A", 1), line("B", 2)], vec![edge(0, 1, "x")])
            .unwrap();
        assert_eq!(counts(&pair, 2), vec![2, 4]);
        let lp = GraphSystem::new(&f2(), vec![line("A", 2)], vec![edge(0, 0, "x^2")]).unwrap();
        assert_eq!(counts(&lp, 2), vec![2, 2]);
    }

    #[test]
    fn reduction_examples() {
        let pair = GraphSystem::new(&f2(), vec![line("A", 1), line("B", 2)], vec![edge(0, 1, "x")])
            .unwrap();
        let red = fibred_product_reduce(&pair).unwrap();
        assert_eq!(red.variety.equation_texts(), vec!["A_x + B_x"]);
        assert_eq!(red.variety.profile(), &[1, 2]);
        assert_eq!(red.blocks, vec![vec![0], vec![1]]);

        let lp = GraphSystem::new(&f2(), vec![line("A", 2)], vec![edge(0, 0, "x^2")]).unwrap();
        let red = fibred_product_reduce(&lp).unwrap();
        assert_eq!(red.variety.equation_texts(), vec!["A_x^2 + A_x"]);

        let two = GraphSystem::new(&f2(), vec![line("A", 1), line("B", 3)], vec![]).unwrap();
        let red = fibred_product_reduce(&two).unwrap();
        assert!(red.variety.equations().is_empty());
        assert_eq!(red.variety.n(), 2);
    }

    #[test]
    fn both_routes_agree() {
        let cfg = Config::default();
        let cycle = GraphSystem::new(
            &f2(),
            vec![line("A", 1), line("B", 1), line("C", 2)],
            vec![edge(0, 1, "x + 1"), edge(1, 2, "x + 1"), edge(2, 0, "x")],
        )
        .unwrap();
        let r = reduction_check(&cycle, 3, 8, 3, 1e-6, &cfg).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.direct, vec![2, 4, 8]);
        assert_eq!(r.function.unwrap().display, "1/(1 - 2T)");

        let lp = GraphSystem::new(&f2(), vec![line("A", 2)], vec![edge(0, 0, "x^2")]).unwrap();
        let r = reduction_check(&lp, 2, 8, 3, 1e-6, &cfg).unwrap();
        assert_eq!(r.direct, vec![2, 2]);
        assert_eq!(r.function.unwrap().display, "1/(1 - 2T + T^2)");
    }

    #[test]
    fn duplicate_and_reversed_edges() {
        let pair = GraphSystem::new(&f2(), vec![line("A", 1), line("B", 2)], vec![edge(0, 1, "x")])
            .unwrap();
        let dup = pair.with_edge(edge(0, 1, "x")).unwrap();
        let rev = GraphSystem::new(&f2(), vec![line("A", 1), line("B", 2)], vec![edge(1, 0, "x")])
            .unwrap();
        assert_eq!(counts(&pair, 3), counts(&dup, 3));
        assert_eq!(counts(&pair, 3), counts(&rev, 3));
    }

    #[test]
    fn workers_do_not_change_counts() {
        let g = GraphSystem::new(
            &f2(),
            vec![line("A", 2), line("B", 3)],
            vec![edge(0, 1, "x^3")],
        )
        .unwrap();
        for k in 1..=2 {
            assert_eq!(
                graph_count_direct(&g, k, &Config::default()).unwrap(),
                graph_count_direct(&g, k, &Config::default().with_workers(3)).unwrap()
            );
        }
    }

    #[test]
    fn validation() {
        let bad = GraphSystem::new(&f2(), vec![line("A", 1)], vec![edge(0, 1, "x")]);
        assert!(bad.is_err());
        let two_dim = MorphismSpec::new(2, vec![SparsePoly::var(&f2(), 2, 0)]).unwrap();
        let bad = GraphSystem::new(
            &f2(),
            vec![line("A", 1)],
            vec![Edge {
                source: 0,
                target: 0,
                morphism: two_dim,
            }],
        );
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }
}
