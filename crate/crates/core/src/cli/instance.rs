//! Instance files.
//!
//! Every file is one JSON object with a `kind` tag. Unknown fields are
//! rejected and every polynomial is parsed before anything is counted.
//!
//! ```json
//! {"kind": "variety", "p": 2, "vars": ["x1", "x2"],
//!  "equations": ["x1 - x2"], "profile": [1, 2]}
//! ```

use serde::{Deserialize, Serialize};

use crate::artin_schreier::ASInstance;
use crate::graph::{Edge, GraphSystem, Vertex};
use crate::poly::{
    default_var_names, parse_poly_with_generator, BaseField, MorphismSpec, VarietySpec,
    DEFAULT_GENERATOR,
};
use crate::{Budget, Error, Result};

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    Variety(VarietyInstance),
    Graph(GraphInstance),
    ArtinSchreier(ASInstanceFile),
}

/// Partial overrides of [`Budget`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetOverride {
    pub max_tuples: Option<u64>,
    pub max_field_size: Option<u64>,
}

impl BudgetOverride {
    pub fn apply(&self, mut b: Budget) -> Budget {
        if let Some(t) = self.max_tuples {
            b.max_tuples = t;
        }
        if let Some(f) = self.max_field_size {
            b.max_field_size = f;
        }
        b
    }
}

/// A rational function as integer coefficient lists, ascending in `T`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedFunction {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VarietyInstance {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub p: u32,
    #[serde(default = "one")]
    pub s: u32,
    pub vars: Vec<String>,
    pub equations: Vec<String>,
    /// All ones when absent.
    #[serde(default)]
    pub profile: Option<Vec<u32>>,
    #[serde(default)]
    pub budget: Option<BudgetOverride>,
    /// A hand-derived closed form, checked by the test suite against
    /// brute-force counts.
    #[serde(default)]
    pub expected: Option<ExpectedFunction>,
}

impl VarietyInstance {
    pub fn to_variety(&self) -> Result<VarietySpec> {
        let base = BaseField::new(self.p, self.s)?;
        let eqs = self
            .equations
            .iter()
            .map(|e| parse_poly_with_generator(e, &self.vars, &base, DEFAULT_GENERATOR))
            .collect::<Result<Vec<_>>>()?;
        let profile = self
            .profile
            .clone()
            .unwrap_or_else(|| vec![1; self.vars.len()]);
        VarietySpec::new(&base, self.vars.clone(), eqs, profile)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VertexFile {
    pub name: String,
    pub dim: usize,
    /// `x1..x{dim}` when absent.
    #[serde(default)]
    pub vars: Option<Vec<String>>,
    #[serde(default)]
    pub equations: Vec<String>,
    pub d: u32,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub src: String,
    pub dst: String,
    /// Components of the morphism in the source vertex's variables.
    pub map: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GraphInstance {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub p: u32,
    #[serde(default = "one")]
    pub s: u32,
    pub vertices: Vec<VertexFile>,
    #[serde(default)]
    pub edges: Vec<EdgeFile>,
    #[serde(default)]
    pub budget: Option<BudgetOverride>,
    #[serde(default)]
    pub expected: Option<ExpectedFunction>,
}

impl GraphInstance {
    pub fn to_graph(&self) -> Result<GraphSystem> {
        let base = BaseField::new(self.p, self.s)?;
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let vars = v
                .vars
                .clone()
                .unwrap_or_else(|| default_var_names("x", v.dim));
            if vars.len() != v.dim {
                return Err(Error::Schema(format!(
                    "vertex {} has dim {} but {} variable names",
                    v.name,
                    v.dim,
                    vars.len()
                )));
            }
            if vertices.iter().any(|u: &Vertex| u.name == v.name) {
                return Err(Error::Schema(format!("duplicate vertex name {}", v.name)));
            }
            let equations = v
                .equations
                .iter()
                .map(|e| parse_poly_with_generator(e, &vars, &base, DEFAULT_GENERATOR))
                .collect::<Result<Vec<_>>>()?;
            vertices.push(Vertex {
                name: v.name.clone(),
                vars,
                equations,
                level: v.d,
            });
        }
        let index = |name: &str| {
            vertices
                .iter()
                .position(|v| v.name == name)
                .ok_or_else(|| Error::Schema(format!("edge names unknown vertex {name}")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (source, target) = (index(&e.src)?, index(&e.dst)?);
            let vars = &vertices[source].vars;
            let components = e
                .map
                .iter()
                .map(|c| parse_poly_with_generator(c, vars, &base, DEFAULT_GENERATOR))
                .collect::<Result<Vec<_>>>()?;
            edges.push(Edge {
                source,
                target,
                morphism: MorphismSpec::new(vars.len(), components)?,
            });
        }
        GraphSystem::new(&base, vertices, edges)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ASInstanceFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub p: u32,
    #[serde(default = "one")]
    pub s: u32,
    /// `f(x, y)` as text.
    pub f: String,
    pub n: usize,
    pub n_prime: usize,
    pub d: u32,
    /// The x block then the y block; `x1..xn, y1..yn'` when absent.
    #[serde(default)]
    pub vars: Option<Vec<String>>,
    #[serde(default)]
    pub budget: Option<BudgetOverride>,
}

impl ASInstanceFile {
    pub fn to_instance(&self) -> Result<ASInstance> {
        let base = BaseField::new(self.p, self.s)?;
        let vars = self.vars.clone().unwrap_or_else(|| {
            default_var_names("x", self.n)
                .into_iter()
                .chain(default_var_names("y", self.n_prime))
                .collect()
        });
        let f = parse_poly_with_generator(&self.f, &vars, &base, DEFAULT_GENERATOR)?;
        ASInstance::with_names(f, vars, self.n, self.n_prime, self.d)
    }
}

impl Instance {
    /// Parses and validates an instance file.
    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Instance =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    /// Builds the mathematical objects once so that malformed polynomials
    /// and mismatched dimensions surface before any counting.
    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Variety(v) => v.to_variety().map(drop),
            Instance::Graph(g) => g.to_graph().map(drop),
            Instance::ArtinSchreier(a) => a.to_instance().map(drop),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Variety(_) => "variety",
            Instance::Graph(_) => "graph",
            Instance::ArtinSchreier(_) => "artin-schreier",
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Instance::Variety(v) => v.name.as_deref(),
            Instance::Graph(g) => g.name.as_deref(),
            Instance::ArtinSchreier(a) => a.name.as_deref(),
        }
    }

    pub fn budget(&self) -> Option<BudgetOverride> {
        match self {
            Instance::Variety(v) => v.budget,
            Instance::Graph(g) => g.budget,
            Instance::ArtinSchreier(a) => a.budget,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variety_round_trip() {
        let inst = Instance::from_json(
            r#"{"kind": "variety", "p": 2, "vars": ["x1", "x2"],
                "equations": ["x1 - x2"], "profile": [1, 2]}"#,
        )
        .unwrap();
        let Instance::Variety(v) = &inst else { panic!() };
        let x = v.to_variety().unwrap();
        assert_eq!(x.profile(), &[1, 2]);
        assert_eq!(inst.kind(), "variety");
    }

    #[test]
    fn rejects_unknown_fields_and_bad_polys() {
        for bad in [
            r#"{"kind": "variety", "p": 2, "vars": ["x"], "equations": [], "colour": 1}"#,
            r#"{"kind": "variety", "p": 2, "vars": ["x"], "equations": ["x +"]}"#,
            r#"{"kind": "variety", "p": 4, "vars": ["x"], "equations": []}"#,
            r#"{"kind": "variety", "p": 2, "vars": ["x"], "equations": ["y"]}"#,
            r#"{"kind": "surface", "p": 2}"#,
            r#"{"kind": "graph", "p": 2, "vertices": [{"name": "A", "dim": 1, "d": 1}],
                "edges": [{"src": "A", "dst": "B", "map": ["x1"]}]}"#,
            r#"{"kind": "artin-schreier", "p": 2, "f": "x1", "n": 1, "n_prime": 1, "d": 0}"#,
            r#"{"kind": "variety", "p": 2, "vars": ["x"], "equations": [],
                "budget": {"max_tuples": 10, "extra": 1}}"#,
        ] {
            assert!(Instance::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn graph_and_as_files() {
        let g = Instance::from_json(
            r#"{"kind": "graph", "p": 2,
                "vertices": [{"name": "A", "dim": 1, "d": 1}, {"name": "B", "dim": 1, "d": 2}],
                "edges": [{"src": "A", "dst": "B", "map": ["x1"]}]}"#,
        )
        .unwrap();
        let Instance::Graph(g) = g else { panic!() };
        assert_eq!(g.to_graph().unwrap().edges().len(), 1);
        let a = Instance::from_json(
            r#"{"kind": "artin-schreier", "p": 2, "f": "x^3 + y^3", "n": 1, "n_prime": 1,
                "d": 1, "vars": ["x", "y"], "budget": {"max_tuples": 1000}}"#,
        )
        .unwrap();
        assert_eq!(a.budget().unwrap().max_tuples, Some(1000));
    }
}
