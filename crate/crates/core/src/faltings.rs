//! The shifted-product variety `Y ⊂ X^d` and its fixed points.
//!
//! For morphisms `f_i: X -> X_i` with levels `d_i` and `d = lcm(d_i)`, a
//! point `(y_1..y_d)` of `X^d` lies on `Y` when `f_i(y_j) = f_i(y_{j+d_i})`
//! for all `i, j` (indices mod `d`, in `1..d`). For `a` prime to `d`, the
//! fixed points of `σ^a ∘ Frob^k` on `Y` are in bijection with the points
//! counted by the partial count at level `k`, where `σ` rotates blocks
//! forward by one and `Frob` raises every coordinate to the `q`-th power.
//!
//! A fixed point satisfies `y_{j+a} = Frob^k(y_j)`, so it is determined by
//! `y_1`, and `Frob^(dk)` fixes `y_1`. The fixed-point count therefore runs
//! over `y_1 ∈ X(F_{q^(dk)})`, builds the remaining blocks from that rule and
//! keeps the tuples that satisfy the equations of `Y`.

use num_integer::Integer;
use serde::Serialize;

use crate::count::{partial_count, subfield_domain, Search};
use crate::field::{build_field_with, FieldDescriptor, FieldElement};
use crate::poly::{BaseField, CompiledPoly, MorphismSpec, SparsePoly, VarietySpec};
use crate::{big_pow, Config, Error, Result};

/// One identification `f_map(y_block) = f_map(y_partner)`, 1-based blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Identification {
    pub map: usize,
    pub block: u32,
    pub partner: u32,
}

#[derive(Clone, Debug)]
pub struct FaltingsSpec {
    base: BaseField,
    x_vars: Vec<String>,
    x_equations: Vec<SparsePoly>,
    maps: Vec<MorphismSpec>,
    levels: Vec<u32>,
    /// Maps are the coordinate projections.
    projection: bool,
    d: u32,
    y_vars: Vec<String>,
    y_equations: Vec<SparsePoly>,
    identifications: Vec<Identification>,
}

/// `Y` for the coordinate projections of `x` with its profile as levels.
pub fn build_faltings(x: &VarietySpec) -> Result<FaltingsSpec> {
    let n = x.n();
    let maps = (0..n)
        .map(|i| MorphismSpec::projection(x.base(), n, i))
        .collect();
    assemble(
        x.base(),
        x.vars().to_vec(),
        x.equations().to_vec(),
        maps,
        x.profile().to_vec(),
        true,
    )
}

/// `Y` for general morphisms `f_i` out of the variety `vars, equations`.
/// The map `x -> (f_1(x), ..., f_n(x))` has to be injective on geometric
/// points for the partial count to be finite; this is not verified.
pub fn build_faltings_morphisms(
    base: &BaseField,
    vars: Vec<String>,
    equations: Vec<SparsePoly>,
    maps: Vec<MorphismSpec>,
    levels: Vec<u32>,
) -> Result<FaltingsSpec> {
    if maps.len() != levels.len() {
        return Err(Error::DimensionMismatch {
            expected: maps.len(),
            got: levels.len(),
        });
    }
    if let Some(m) = maps.iter().find(|m| m.source_dim() != vars.len()) {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            got: m.source_dim(),
        });
    }
    assemble(base, vars, equations, maps, levels, false)
}

fn assemble(
    base: &BaseField,
    x_vars: Vec<String>,
    x_equations: Vec<SparsePoly>,
    maps: Vec<MorphismSpec>,
    levels: Vec<u32>,
    projection: bool,
) -> Result<FaltingsSpec> {
    if levels.contains(&0) {
        return Err(Error::InvalidParameter("levels must be positive".into()));
    }
    let n = x_vars.len();
    let d = levels.iter().fold(1u32, |acc, &l| acc.lcm(&l));
    let total = n * d as usize;
    let y_vars: Vec<String> = (1..=d)
        .flat_map(|j| x_vars.iter().map(move |v| format!("y{j}_{v}")))
        .collect();
    let block_map = |j: u32| -> Vec<usize> { (0..n).map(|i| (j as usize - 1) * n + i).collect() };
    let mut y_equations = Vec::new();
    for j in 1..=d {
        for eq in &x_equations {
            y_equations.push(eq.substitute_rename(&block_map(j), total)?);
        }
    }
    let mut identifications = Vec::new();
    for (m, (map, &di)) in maps.iter().zip(&levels).enumerate() {
        for j in 1..=d {
            let partner = residue(j + di, d);
            identifications.push(Identification {
                map: m,
                block: j,
                partner,
            });
            for c in map.components() {
                let lhs = c.substitute_rename(&block_map(j), total)?;
                let rhs = c.substitute_rename(&block_map(partner), total)?;
                let diff = lhs.sub(&rhs);
                if !diff.is_zero() {
                    y_equations.push(diff);
                }
            }
        }
    }
    Ok(FaltingsSpec {
        base: base.clone(),
        x_vars,
        x_equations,
        maps,
        levels,
        projection,
        d,
        y_vars,
        y_equations,
        identifications,
    })
}

/// Smallest positive residue of `j` modulo `d`.
fn residue(j: u32, d: u32) -> u32 {
    (j - 1) % d + 1
}

impl FaltingsSpec {
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Coordinates per block.
    pub fn n(&self) -> usize {
        self.x_vars.len()
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn maps(&self) -> &[MorphismSpec] {
        &self.maps
    }

    pub fn y_vars(&self) -> &[String] {
        &self.y_vars
    }

    pub fn y_equations(&self) -> &[SparsePoly] {
        &self.y_equations
    }

    pub fn identifications(&self) -> &[Identification] {
        &self.identifications
    }

    /// `Y` as text, in the variables `y{j}_{x}`.
    pub fn y_equation_texts(&self) -> Vec<String> {
        self.y_equations.iter().map(|e| e.display(&self.y_vars)).collect()
    }

    /// Shifts `Y`'s equations one block forward and checks that the result
    /// is the same set.
    pub fn is_sigma_stable(&self) -> Result<bool> {
        let n = self.n();
        let d = self.d as usize;
        let total = n * d;
        let rotate: Vec<usize> = (0..total).map(|v| (v + n) % total).collect();
        for eq in &self.y_equations {
            let moved = eq.substitute_rename(&rotate, total)?;
            if !self.y_equations.contains(&moved) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn ambient(&self, k: u32, cfg: &Config) -> Result<FieldDescriptor> {
        let n = self.d.checked_mul(k).ok_or_else(|| {
            Error::InvalidParameter(format!("level {k} overflows the ambient degree"))
        })?;
        build_field_with(self.base.p(), self.base.s(), n, &cfg.budget)
    }

    /// Search over `X(F_{q^(dk)})` in the ambient field `F_{q^(dk)}`.
    fn x_points_search(&self, field: &FieldDescriptor, k: u32, cfg: &Config) -> Result<Search> {
        let cost = big_pow(self.base.q(), (self.d * k) as u64 * self.n() as u64);
        cfg.budget
            .check(|| format!("points of X over F_q^{}", self.d * k), cost)?;
        let dom = subfield_domain(field, field.n(), cfg.subfield_method)?;
        Ok(Search::new(
            field,
            &self.x_equations,
            vec![dom; self.n()],
        ))
    }

    /// The left side: points counted by the partial count at level `k`.
    /// For projections this is [`partial_count`]; for general morphisms the
    /// points of `X(F_{q^(dk)})` whose images lie in the prescribed fields.
    pub fn partial_count(&self, k: u32, cfg: &Config) -> Result<u64> {
        if self.projection {
            let x = VarietySpec::new(
                &self.base,
                self.x_vars.clone(),
                self.x_equations.clone(),
                self.levels.clone(),
            )?;
            return partial_count(&x, k, cfg);
        }
        Ok(self.partial_points(k, cfg)?.len() as u64)
    }

    fn partial_points(&self, k: u32, cfg: &Config) -> Result<Vec<Vec<FieldElement>>> {
        let field = self.ambient(k, cfg)?;
        let search = self.x_points_search(&field, k, cfg)?;
        let compiled: Vec<Vec<CompiledPoly>> = self
            .maps
            .iter()
            .map(|m| m.components().iter().map(|c| c.compile(&field)).collect())
            .collect();
        let frobs: Vec<_> = self
            .levels
            .iter()
            .map(|&l| field.frobenius_map((l * k) as u64))
            .collect();
        let keep = |pt: &[FieldElement]| {
            compiled.iter().zip(&frobs).all(|(comps, fr)| {
                comps.iter().all(|c| {
                    let v = c.eval(&field, pt);
                    fr.apply(v) == v
                })
            })
        };
        Ok(search
            .visit(cfg, Vec::new, |acc: &mut Vec<Vec<FieldElement>>, pt| {
                if keep(pt) {
                    acc.push(pt.to_vec());
                }
            })
            .into_iter()
            .flatten()
            .collect())
    }

    /// Fixed points of `σ^a ∘ Frob^k` on `Y`, each as `d` blocks.
    pub fn fixed_points(&self, a: u32, k: u32, cfg: &Config) -> Result<Vec<Vec<Vec<FieldElement>>>> {
        self.check_shift(a)?;
        let field = self.ambient(k, cfg)?;
        let search = self.x_points_search(&field, k, cfg)?;
        let y_checks: Vec<CompiledPoly> = self.y_equations.iter().map(|e| e.compile(&field)).collect();
        let frob = field.frobenius_map(k as u64);
        let (n, d) = (self.n(), self.d as usize);
        let build = |y1: &[FieldElement]| -> Option<Vec<Vec<FieldElement>>> {
            let mut blocks = vec![Vec::new(); d];
            let mut pos = 0usize;
            let mut cur = y1.to_vec();
            for _ in 0..d {
                blocks[pos] = cur.clone();
                cur = cur.iter().map(|&c| frob.apply(c)).collect();
                pos = (pos + a as usize) % d;
            }
            let flat: Vec<FieldElement> = blocks.iter().flatten().copied().collect();
            debug_assert_eq!(flat.len(), n * d);
            if !y_checks.iter().all(|c| c.eval(&field, &flat).is_zero()) {
                return None;
            }
            let moved = sigma_apply(&frobenius_blocks(&field, k, &blocks), a);
            (moved == blocks).then_some(blocks)
        };
        Ok(search
            .visit(cfg, Vec::new, |acc: &mut Vec<Vec<Vec<FieldElement>>>, y1| {
                if let Some(y) = build(y1) {
                    acc.push(y);
                }
            })
            .into_iter()
            .flatten()
            .collect())
    }

    pub fn fixed_point_count(&self, a: u32, k: u32, cfg: &Config) -> Result<u64> {
        Ok(self.fixed_points(a, k, cfg)?.len() as u64)
    }

    fn check_shift(&self, a: u32) -> Result<()> {
        if a == 0 || a.gcd(&self.d) != 1 {
            return Err(Error::NotCoprime {
                a: a as u64,
                d: self.d as u64,
            });
        }
        Ok(())
    }

    /// Shifts `a` in `1..=d` prime to `d`.
    pub fn coprime_shifts(&self) -> Vec<u32> {
        (1..=self.d).filter(|a| a.gcd(&self.d) == 1).collect()
    }
}

/// `σ^a`: block `j` of the output is block `j - a (mod d)` of the input.
pub fn sigma_apply<T: Clone>(blocks: &[T], a: u32) -> Vec<T> {
    let d = blocks.len();
    if d == 0 {
        return Vec::new();
    }
    let a = a as usize % d;
    (0..d).map(|j| blocks[(j + d - a) % d].clone()).collect()
}

/// The unique `h` in `0..d` with `a h + 1 ≡ j (mod d)`.
pub fn h_index(a: u32, d: u32, j: u32) -> Result<u32> {
    if d == 0 || a.gcd(&d) != 1 {
        return Err(Error::NotCoprime {
            a: a as u64,
            d: d as u64,
        });
    }
    let inv = mod_inverse(a % d, d);
    let target = (j as u64 + d as u64 - 1) % d as u64;
    Ok(((target * inv as u64) % d as u64) as u32)
}

fn mod_inverse(a: u32, m: u32) -> u32 {
    if m == 1 {
        return 0;
    }
    let e = (a as i64).extended_gcd(&(m as i64));
    e.x.rem_euclid(m as i64) as u32
}

fn frobenius_blocks(
    field: &FieldDescriptor,
    k: u32,
    blocks: &[Vec<FieldElement>],
) -> Vec<Vec<FieldElement>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|&c| field.frobenius(c, k as u64)).collect())
        .collect()
}

/// One `(a, k)` comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaEntry {
    pub a: u32,
    pub k: u32,
    pub partial_count: u64,
    pub fixed_point_count: u64,
    pub equal: bool,
    /// `y_j = Frob^(k h_j)(y_1)` on every fixed point.
    pub reconstruction_holds: bool,
    /// `σ(y)` is again on `Y` for every fixed point.
    pub sigma_stable: bool,
    /// `Frob ∘ σ = σ ∘ Frob` on every fixed point.
    pub commutes: bool,
    /// Up to 10 points `y_1` counted on one side only.
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub d: u32,
    pub shifts: Vec<u32>,
    pub k_max: u32,
    pub y_equations: Vec<String>,
    pub y_sigma_stable: bool,
    pub entries: Vec<LemmaEntry>,
    pub pass: bool,
}

/// Compares both sides for every shift prime to `d` and `k = 1..=k_max`.
pub fn lemma_check(spec: &FaltingsSpec, k_max: u32, cfg: &Config) -> Result<LemmaReport> {
    let mut entries = Vec::new();
    let shifts = spec.coprime_shifts();
    for k in 1..=k_max {
        let lhs = spec.partial_count(k, cfg)?;
        let field = spec.ambient(k, cfg)?;
        for &a in &shifts {
            let fixed = spec.fixed_points(a, k, cfg)?;
            let mut entry = LemmaEntry {
                a,
                k,
                partial_count: lhs,
                fixed_point_count: fixed.len() as u64,
                equal: lhs == fixed.len() as u64,
                reconstruction_holds: true,
                sigma_stable: true,
                commutes: true,
                witnesses: Vec::new(),
            };
            let y_checks: Vec<CompiledPoly> =
                spec.y_equations.iter().map(|e| e.compile(&field)).collect();
            for y in &fixed {
                for (j, block) in y.iter().enumerate() {
                    let h = h_index(a, spec.d, j as u32 + 1)?;
                    let expect: Vec<FieldElement> = y[0]
                        .iter()
                        .map(|&c| field.frobenius(c, (k * h) as u64))
                        .collect();
                    entry.reconstruction_holds &= *block == expect;
                }
                let shifted: Vec<FieldElement> = sigma_apply(y, 1).into_iter().flatten().collect();
                entry.sigma_stable &= y_checks.iter().all(|c| c.eval(&field, &shifted).is_zero());
                entry.commutes &= frobenius_blocks(&field, k, &sigma_apply(y, 1))
                    == sigma_apply(&frobenius_blocks(&field, k, y), 1);
            }
            if !entry.equal {
                entry.witnesses = mismatch_witnesses(spec, &field, k, &fixed, cfg)?;
            }
            entries.push(entry);
        }
    }
    let y_sigma_stable = spec.is_sigma_stable()?;
    let pass = y_sigma_stable
        && entries
            .iter()
            .all(|e| e.equal && e.reconstruction_holds && e.sigma_stable && e.commutes);
    Ok(LemmaReport {
        d: spec.d,
        shifts,
        k_max,
        y_equations: spec.y_equation_texts(),
        y_sigma_stable,
        entries,
        pass,
    })
}

fn mismatch_witnesses(
    spec: &FaltingsSpec,
    field: &FieldDescriptor,
    k: u32,
    fixed: &[Vec<Vec<FieldElement>>],
    cfg: &Config,
) -> Result<Vec<String>> {
    let left = spec.partial_points(k, cfg)?;
    let right: Vec<Vec<FieldElement>> = fixed.iter().map(|y| y[0].clone()).collect();
    let show = |side: &str, p: &[FieldElement]| {
        let coords: Vec<String> = p.iter().map(|&c| field.render(c)).collect();
        format!("{side}: ({})", coords.join(", "))
    };
    let out: Vec<String> = left
        .iter()
        .filter(|p| !right.contains(p))
        .map(|p| show("partial count only", p))
        .chain(
            right
                .iter()
                .filter(|p| !left.contains(p))
                .map(|p| show("fixed points only", p)),
        )
        .take(10)
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32, vars: &[&str], eqs: &[&str], profile: &[u32]) -> VarietySpec {
        VarietySpec::parse(p, 1, vars, eqs, profile).unwrap()
    }

    #[test]
    fn construction_examples() {
        let line = build_faltings(&v(2, &["x"], &[], &[1])).unwrap();
        assert_eq!(line.d(), 1);
        assert!(line.y_equations().is_empty());
        assert_eq!(
            line.identifications(),
            &[Identification {
                map: 0,
                block: 1,
                partner: 1
            }]
        );

        let diag = build_faltings(&v(2, &["x1", "x2"], &["x1 - x2"], &[1, 2])).unwrap();
        assert_eq!(diag.d(), 2);
        assert_eq!(
            diag.y_equation_texts(),
            vec![
                "y1_x1 + y1_x2",
                "y2_x1 + y2_x2",
                "y1_x1 + y2_x1",
                "y1_x1 + y2_x1",
            ]
        );
        assert!(diag.is_sigma_stable().unwrap());

        let uniform = build_faltings(&v(3, &["x", "y"], &["x*y - 1"], &[3, 3])).unwrap();
        assert_eq!(uniform.y_equations().len(), 3);
        assert!(uniform.is_sigma_stable().unwrap());
    }

    #[test]
    fn sigma_and_h_examples() {
        assert_eq!(sigma_apply(&['A', 'B', 'C'], 1), vec!['C', 'A', 'B']);
        assert_eq!(sigma_apply(&['A', 'B', 'C'], 3), vec!['A', 'B', 'C']);
        assert_eq!(sigma_apply(&['A', 'B', 'C'], 2), vec!['B', 'C', 'A']);
        assert_eq!(h_index(1, 5, 4).unwrap(), 3);
        assert_eq!(h_index(3, 5, 2).unwrap(), 2);
        for (a, d) in [(1, 1), (5, 6), (3, 4), (2, 7)] {
            assert_eq!(h_index(a, d, 1).unwrap(), 0);
            for j in 1..=d {
                let h = h_index(a, d, j).unwrap();
                assert!(h < d);
                assert_eq!((a * h + 1) % d, j % d);
            }
        }
        assert!(matches!(h_index(2, 4, 1), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn fixed_point_examples() {
        let cfg = Config::default();
        let curve = v(2, &["x", "y"], &["y^2 + y + x^3 + 1"], &[1, 1]);
        let spec = build_faltings(&curve).unwrap();
        assert_eq!(spec.fixed_point_count(1, 2, &cfg).unwrap(), 8);

        let diag = build_faltings(&v(2, &["x1", "x2"], &["x1 - x2"], &[1, 2])).unwrap();
        assert_eq!(diag.fixed_point_count(1, 1, &cfg).unwrap(), 2);
        assert!(matches!(
            diag.fixed_point_count(2, 1, &cfg),
            Err(Error::NotCoprime { .. })
        ));

        let empty = build_faltings(&v(2, &["x1", "x2"], &["1"], &[1, 2])).unwrap();
        assert_eq!(empty.fixed_point_count(1, 1, &cfg).unwrap(), 0);
    }

    /// Every point of `Y(F_{q^(dk)})`, checked for fixedness one by one.
    fn exhaustive_fixed_count(spec: &FaltingsSpec, a: u32, k: u32) -> u64 {
        let cfg = Config::default();
        let field = spec.ambient(k, &cfg).unwrap();
        let dom = subfield_domain(&field, field.n(), cfg.subfield_method).unwrap();
        let total = spec.n() * spec.d() as usize;
        let search = Search::new(&field, spec.y_equations(), vec![dom; total]);
        let n = spec.n();
        search
            .points(&cfg)
            .into_iter()
            .filter(|flat| {
                let blocks: Vec<Vec<FieldElement>> = flat.chunks(n).map(|c| c.to_vec()).collect();
                sigma_apply(&frobenius_blocks(&field, k, &blocks), a) == blocks
            })
            .count() as u64
    }

    #[test]
    fn forced_blocks_agree_with_exhaustive_search() {
        let cfg = Config::default();
        let cases = [
            v(2, &["x1", "x2"], &["x1 - x2"], &[1, 2]),
            v(2, &["x1", "x2"], &["x1*x2 - 1"], &[1, 3]),
            v(3, &["x1"], &["x1^2 + 1"], &[2]),
            v(2, &["x1", "x2"], &[], &[1, 2]),
        ];
        for x in &cases {
            let spec = build_faltings(x).unwrap();
            for a in spec.coprime_shifts() {
                assert_eq!(
                    spec.fixed_point_count(a, 1, &cfg).unwrap(),
                    exhaustive_fixed_count(&spec, a, 1),
                    "{x:?} a={a}"
                );
            }
        }
    }

    #[test]
    fn lemma_examples() {
        let cfg = Config::default();
        let diag = build_faltings(&v(2, &["x1", "x2"], &["x1 - x2"], &[1, 2])).unwrap();
        let r = lemma_check(&diag, 2, &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(
            r.entries.iter().map(|e| e.partial_count).collect::<Vec<_>>(),
            vec![2, 4]
        );

        let flat = build_faltings(&v(3, &["x", "y"], &["x^2 + y^2 - 1"], &[1, 1])).unwrap();
        let r = lemma_check(&flat, 2, &cfg).unwrap();
        assert_eq!(r.shifts, vec![1]);
        assert!(r.pass);

        let hyp = build_faltings(&v(2, &["x1", "x2"], &["x1*x2 - 1"], &[2, 3])).unwrap();
        let r = lemma_check(&hyp, 1, &cfg).unwrap();
        assert_eq!(r.shifts, vec![1, 5]);
        assert!(r.pass);
        assert!(r.entries.iter().all(|e| e.fixed_point_count == 1));
    }

    #[test]
    fn general_morphisms() {
        let cfg = Config::default();
        let base = BaseField::new(2, 1).unwrap();
        let vars = vec!["u".to_string(), "w".to_string()];
        let eq = crate::parse_poly("w - u^2 - u", &vars, &base).unwrap();
        // f_1 = u with level 1, f_2 = w with level 2: same as the graph
        // x1 -> x1^2 + x1 with a free target
        let f1 = MorphismSpec::new(2, vec![SparsePoly::var(&base, 2, 0)]).unwrap();
        let f2 = MorphismSpec::new(2, vec![SparsePoly::var(&base, 2, 1)]).unwrap();
        let spec = build_faltings_morphisms(&base, vars.clone(), vec![eq.clone()], vec![f1, f2], vec![1, 2])
            .unwrap();
        let x = VarietySpec::new(&base, vars, vec![eq], vec![1, 2]).unwrap();
        for k in 1..=2 {
            assert_eq!(
                spec.partial_count(k, &cfg).unwrap(),
                partial_count(&x, k, &cfg).unwrap()
            );
        }
        let r = lemma_check(&spec, 2, &cfg).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn witnesses_list_one_sided_points() {
        let cfg = Config::default();
        let spec = build_faltings(&v(2, &["x1", "x2"], &[], &[1, 2])).unwrap();
        let field = spec.ambient(1, &cfg).unwrap();
        let fixed = spec.fixed_points(1, 1, &cfg).unwrap();
        assert_eq!(fixed.len(), 8);
        let w = mismatch_witnesses(&spec, &field, 1, &fixed[..5], &cfg).unwrap();
        assert_eq!(w.len(), 3);
        assert!(w.iter().all(|s| s.starts_with("partial count only")));
        let w = mismatch_witnesses(&spec, &field, 1, &[], &cfg).unwrap();
        assert_eq!(w.len(), 8);
    }
}
