//! Sparse multivariate polynomials over F_q and variety specifications.
//!
//! Coefficients live in the base field F_q = F_p[a]/(m_s) where `m_s` is the
//! smallest irreducible of degree `s`; evaluation embeds them into whatever
//! ambient field the point lives in.

mod parse;
mod variety;

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{build_field, FieldDescriptor, FieldElement};
use crate::{Error, Result};

pub use parse::{parse_poly, parse_poly_with_generator, DEFAULT_GENERATOR};
pub use variety::{default_var_names, MorphismSpec, VarietySpec};

/// The field of definition F_q, q = p^s.
#[derive(Clone, PartialEq, Eq)]
pub struct BaseField {
    field: FieldDescriptor,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p(), self.s())
    }
}

impl BaseField {
    pub fn new(p: u32, s: u32) -> Result<Self> {
        Ok(BaseField {
            field: build_field(p, s, 1)?,
        })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn s(&self) -> u32 {
        self.field.s()
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// F_q itself as a field descriptor (N = 1).
    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.field
    }
}

pub type Monomial = Vec<u32>;

/// A polynomial in `nvars` variables with coefficients in F_q. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    base: BaseField,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names("x", self.nvars);
        write!(f, "SparsePoly({})", self.display(&names))
    }
}

fn degree_of(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl SparsePoly {
    pub fn zero(base: &BaseField, nvars: usize) -> Self {
        SparsePoly {
            base: base.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(base: &BaseField, nvars: usize, c: FieldElement) -> Self {
        Self::from_terms(base, nvars, [(vec![0; nvars], c)])
    }

    pub fn from_int(base: &BaseField, nvars: usize, c: i64) -> Self {
        Self::constant(base, nvars, base.descriptor().from_int(c))
    }

    /// The variable `x_i` (0-based).
    pub fn var(base: &BaseField, nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::from_terms(base, nvars, [(m, FieldElement::ONE)])
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms(
        base: &BaseField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let fq = base.descriptor();
        let mut map: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "exponent vector length");
            let e = map.entry(m).or_insert(FieldElement::ZERO);
            *e = fq.add(*e, c);
        }
        map.retain(|_, c| !c.is_zero());
        SparsePoly {
            base: base.clone(),
            nvars,
            terms: map,
        }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> FieldElement {
        self.terms.get(m).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| degree_of(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| degree_of(m));
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    /// Highest variable index that actually occurs.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.iter().rposition(|&e| e > 0))
            .max()
    }

    /// Variables that occur with a positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .collect()
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert_eq!(self.base, other.base, "base field mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        Self::from_terms(
            &self.base,
            self.nvars,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, c)| (m.clone(), *c)),
        )
    }

    pub fn neg(&self) -> Self {
        let fq = self.base.descriptor();
        Self::from_terms(
            &self.base,
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), fq.neg(*c))),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let fq = self.base.descriptor();
        Self::from_terms(
            &self.base,
            self.nvars,
            self.terms.iter().map(|(m, x)| (m.clone(), fq.mul(*x, c))),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let fq = self.base.descriptor();
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.push((m, fq.mul(*ca, *cb)));
            }
        }
        Self::from_terms(&self.base, self.nvars, out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::from_int(&self.base, self.nvars, 1);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// The top-degree homogeneous part and its degree.
    pub fn leading_form(&self) -> Result<(SparsePoly, u32)> {
        let r = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        let form = Self::from_terms(
            &self.base,
            self.nvars,
            self.terms
                .iter()
                .filter(|(m, _)| degree_of(m) == r)
                .map(|(m, c)| (m.clone(), *c)),
        );
        Ok((form, r))
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let fq = self.base.descriptor();
        Self::from_terms(
            &self.base,
            self.nvars,
            self.terms.iter().filter(|(m, _)| m[i] > 0).map(|(m, c)| {
                let mut m2 = m.clone();
                m2[i] -= 1;
                (m2, fq.mul(*c, fq.from_int(m[i] as i64)))
            }),
        )
    }

    /// Sends variable `i` to variable `map[i]` of a ring with `nvars_out`
    /// variables.
    pub fn substitute_rename(&self, map: &[usize], nvars_out: usize) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: map.len(),
            });
        }
        let mut seen = vec![false; nvars_out];
        for &t in map {
            if t >= nvars_out {
                return Err(Error::DimensionMismatch {
                    expected: nvars_out,
                    got: t + 1,
                });
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::NonInjectiveMap);
            }
        }
        Ok(Self::from_terms(
            &self.base,
            nvars_out,
            self.terms.iter().map(|(m, c)| {
                let mut m2 = vec![0; nvars_out];
                for (i, &e) in m.iter().enumerate() {
                    m2[map[i]] = e;
                }
                (m2, *c)
            }),
        ))
    }

    /// Substitutes polynomials (all in a common ring) for every variable.
    pub fn compose(&self, images: &[SparsePoly]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let Some(first) = images.first() else {
            // no variables: a constant stays a constant in a 0-variable ring
            return Ok(self.clone());
        };
        let target = first.nvars;
        let mut acc = Self::zero(&self.base, target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(&self.base, target, *c);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e));
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Exact value at a point of `ambient`.
    pub fn eval(&self, ambient: &FieldDescriptor, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self.compile(ambient).eval(ambient, point))
    }

    /// Coefficients embedded into `ambient`, ready for repeated evaluation.
    pub fn compile(&self, ambient: &FieldDescriptor) -> CompiledPoly {
        let fq = self.base.descriptor();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| CompiledTerm {
                coeff: ambient.embed_base(fq, *c),
                factors: m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e as u64))
                    .collect(),
            })
            .collect();
        CompiledPoly {
            terms,
            max_var: self.max_var(),
        }
    }

    /// Canonical text: graded lexicographic term order, coefficients as
    /// residues (or polynomials in the generator `a` when s > 1).
    pub fn display(&self, vars: &[impl AsRef<str>]) -> String {
        self.display_with_generator(vars, DEFAULT_GENERATOR)
    }

    pub fn display_with_generator(&self, vars: &[impl AsRef<str>], generator: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&Monomial, &FieldElement)> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| degree_of(b).cmp(&degree_of(a)).then_with(|| b.cmp(a)));
        let fq = self.base.descriptor();
        let parts: Vec<String> = ordered
            .into_iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let name = vars[i].as_ref();
                        if e == 1 {
                            name.to_string()
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
                let coeff = coeff_text(fq, *c, generator);
                match (mono.is_empty(), coeff.as_str()) {
                    (true, _) => coeff,
                    (false, "1") => mono.join("*"),
                    (false, _) => format!("{coeff}*{}", mono.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

fn coeff_text(fq: &FieldDescriptor, c: FieldElement, generator: &str) -> String {
    let digits = fq.coeffs(c);
    let parts: Vec<String> = digits
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| match (i, d) {
            (0, d) => d.to_string(),
            (1, 1) => generator.to_string(),
            (1, d) => format!("{d}*{generator}"),
            (i, 1) => format!("{generator}^{i}"),
            (i, d) => format!("{d}*{generator}^{i}"),
        })
        .collect();
    if parts.len() == 1 {
        parts.into_iter().next().unwrap()
    } else {
        format!("({})", parts.join(" + "))
    }
}

struct CompiledTerm {
    coeff: FieldElement,
    factors: Vec<(usize, u64)>,
}

/// A polynomial with coefficients already embedded in a fixed ambient field.
pub struct CompiledPoly {
    terms: Vec<CompiledTerm>,
    max_var: Option<usize>,
}

impl CompiledPoly {
    pub fn eval(&self, f: &FieldDescriptor, point: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for t in &self.terms {
            let mut v = t.coeff;
            for &(i, e) in &t.factors {
                if v.is_zero() {
                    break;
                }
                v = f.mul(v, f.pow(point[i], e));
            }
            acc = f.add(acc, v);
        }
        acc
    }

    /// Highest variable index the polynomial depends on.
    pub fn max_var(&self) -> Option<usize> {
        self.max_var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> BaseField {
        BaseField::new(2, 1).unwrap()
    }

    #[test]
    fn leading_form_examples() {
        let b = f2();
        let v = ["x", "y"];
        let f = parse_poly("x^3 + y^3 + x", &v, &b).unwrap();
        let (lf, r) = f.leading_form().unwrap();
        assert_eq!(r, 3);
        assert_eq!(lf, parse_poly("x^3 + y^3", &v, &b).unwrap());

        let h = parse_poly("x*y + y^2", &v, &b).unwrap();
        assert_eq!(h.leading_form().unwrap(), (h.clone(), 2));

        let one = parse_poly("1", &v, &b).unwrap();
        assert_eq!(one.leading_form().unwrap(), (one.clone(), 0));

        assert!(matches!(
            SparsePoly::zero(&b, 2).leading_form(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn rename_examples() {
        let b = f2();
        let f = parse_poly("x1^2", &["x1"], &b).unwrap();
        let g = f.substitute_rename(&[2], 3).unwrap();
        assert_eq!(g.display(&["y1", "y2", "y3"]), "y3^2");
        assert_eq!(f.substitute_rename(&[0], 1).unwrap(), f);
        let uv = parse_poly("x1*x2", &["x1", "x2"], &b).unwrap();
        assert_eq!(uv.substitute_rename(&[1, 0], 2).unwrap(), uv);
        assert!(matches!(
            uv.substitute_rename(&[0, 0], 2),
            Err(Error::NonInjectiveMap)
        ));
    }

    #[test]
    fn eval_examples() {
        let b = f2();
        let f2f = b.descriptor().clone();
        let f = parse_poly("x1 + x2", &["x1", "x2"], &b).unwrap();
        assert!(f.eval(&f2f, &[FieldElement::ONE, FieldElement::ONE]).unwrap().is_zero());
        let g = parse_poly("x1^3 + y^3", &["x1", "y"], &b).unwrap();
        assert!(g.eval(&f2f, &[FieldElement::ONE, FieldElement::ONE]).unwrap().is_zero());
        let z = SparsePoly::zero(&b, 2);
        assert!(z.eval(&f2f, &[FieldElement::ONE, FieldElement::ZERO]).unwrap().is_zero());
        assert!(matches!(
            f.eval(&f2f, &[FieldElement::ONE]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn derivative_reduces_mod_p() {
        let b = BaseField::new(5, 1).unwrap();
        let v = ["x", "y"];
        let f = parse_poly("x^2*y", &v, &b).unwrap();
        assert_eq!(f.derivative(0), parse_poly("2*x*y", &v, &b).unwrap());
        assert_eq!(f.derivative(1), parse_poly("x^2", &v, &b).unwrap());
        let g = parse_poly("x^5", &v, &b).unwrap();
        assert!(g.derivative(0).is_zero());
    }

    #[test]
    fn graded_lex_printing() {
        let b = BaseField::new(3, 1).unwrap();
        let v = ["x", "y"];
        let f = parse_poly("y + 2*x + x*y + y^2 - 1", &v, &b).unwrap();
        assert_eq!(f.display(&v), "x*y + y^2 + 2*x + y + 2");
    }

    #[test]
    fn generator_coefficients_print_and_embed() {
        let b = BaseField::new(2, 2).unwrap();
        let v = ["x"];
        let f = parse_poly("(a + 1)*x + a", &v, &b).unwrap();
        assert_eq!(f.display(&v), "(a + 1)*x + a");
        // a^2 + a + 1 = 0 must hold after embedding into F_16
        let g = parse_poly("a^2 + a + 1", &v, &b).unwrap();
        assert!(g.is_zero());
        let amb = build_field(2, 2, 2).unwrap();
        let val = f.eval(&amb, &[FieldElement::ONE]).unwrap();
        // (a+1) + a = 1
        assert_eq!(val, FieldElement::ONE);
    }

    #[test]
    fn compose_substitutes() {
        let b = f2();
        let f = parse_poly("x^2 + x", &["x"], &b).unwrap();
        let img = parse_poly("u + v", &["u", "v"], &b).unwrap();
        let g = f.compose(&[img]).unwrap();
        assert_eq!(g, parse_poly("u^2 + v^2 + u + v", &["u", "v"], &b).unwrap());
    }
}
