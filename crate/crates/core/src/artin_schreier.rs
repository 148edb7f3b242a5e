//! Artin–Schreier hypersurfaces `x_0^p - x_0 = f(x, y)` with the x-block
//! over F_{q^d} and the y-block over F_q, and the exponential sum bound
//! `|N_d - q^(dn+n')| <= (p-1)(r-1)^(dn+n') q^((dn+n')/2)`.

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Roots;
use serde::Serialize;

use crate::count::{subfield_domain, Search};
use crate::field::{build_field_with, FieldDescriptor, FieldElement};
use crate::poly::{default_var_names, parse_poly, BaseField, SparsePoly};
use crate::{big_pow, Config, Error, Result};

/// Extension degree searched by [`bound_check`] when the leading form is
/// not diagonal.
pub const DEFAULT_SEARCH_DEGREE: u32 = 2;

/// Largest ambient field for which the trace oracle tabulates traces.
const TRACE_TABLE_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASInstance {
    f: SparsePoly,
    vars: Vec<String>,
    n: usize,
    n_prime: usize,
    d: u32,
}

impl ASInstance {
    /// `f` in `n + n'` variables, the x-block first.
    pub fn new(f: SparsePoly, n: usize, n_prime: usize, d: u32) -> Result<Self> {
        let names = default_var_names("x", n)
            .into_iter()
            .chain(default_var_names("y", n_prime))
            .collect();
        Self::with_names(f, names, n, n_prime, d)
    }

    pub fn with_names(
        f: SparsePoly,
        vars: Vec<String>,
        n: usize,
        n_prime: usize,
        d: u32,
    ) -> Result<Self> {
        if n == 0 || n_prime == 0 || d == 0 {
            return Err(Error::InvalidParameter(format!(
                "need n, n', d >= 1, got n = {n}, n' = {n_prime}, d = {d}"
            )));
        }
        if f.nvars() != n + n_prime || vars.len() != n + n_prime {
            return Err(Error::DimensionMismatch {
                expected: n + n_prime,
                got: f.nvars(),
            });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(ASInstance {
            f,
            vars,
            n,
            n_prime,
            d,
        })
    }

    /// Parses `f` over F_{p^s}; `x_vars` form the x-block.
    pub fn parse(
        p: u32,
        s: u32,
        x_vars: &[&str],
        y_vars: &[&str],
        f: &str,
        d: u32,
    ) -> Result<Self> {
        let base = BaseField::new(p, s)?;
        let vars: Vec<String> = x_vars.iter().chain(y_vars).map(|v| v.to_string()).collect();
        let poly = parse_poly(f, &vars, &base)?;
        Self::with_names(poly, vars, x_vars.len(), y_vars.len(), d)
    }

    pub fn f(&self) -> &SparsePoly {
        &self.f
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_prime(&self) -> usize {
        self.n_prime
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn base(&self) -> &BaseField {
        self.f.base()
    }

    pub fn with_d(&self, d: u32) -> Result<Self> {
        Self::with_names(self.f.clone(), self.vars.clone(), self.n, self.n_prime, d)
    }

    /// `dn + n'`.
    pub fn dimension(&self) -> u64 {
        self.d as u64 * self.n as u64 + self.n_prime as u64
    }

    fn ambient(&self, cfg: &Config) -> Result<FieldDescriptor> {
        build_field_with(self.base().p(), self.base().s(), self.d, &cfg.budget)
    }

    fn xy_domains(&self, field: &FieldDescriptor, cfg: &Config) -> Result<Vec<Arc<Vec<FieldElement>>>> {
        let big = subfield_domain(field, self.d, cfg.subfield_method)?;
        let small = subfield_domain(field, 1, cfg.subfield_method)?;
        Ok(std::iter::repeat_n(big, self.n)
            .chain(std::iter::repeat_n(small, self.n_prime))
            .collect())
    }
}

/// `N_d(f)` by enumerating every `(x, y, x_0)`.
pub fn as_count_brute(inst: &ASInstance, cfg: &Config) -> Result<u64> {
    let q = inst.base().q();
    cfg.budget.check(
        || "Artin-Schreier brute count".into(),
        big_pow(q, inst.d as u64 * (inst.n as u64 + 1) + inst.n_prime as u64),
    )?;
    let field = inst.ambient(cfg)?;
    let m = inst.n + inst.n_prime;
    let base = inst.base();
    // x_0 is the last coordinate, so the equation is tested on full tuples
    let x0 = SparsePoly::var(base, m + 1, m);
    let f = inst.f.substitute_rename(&(0..m).collect::<Vec<_>>(), m + 1)?;
    let eq = x0.pow(base.p()).sub(&x0).sub(&f);
    let mut domains = inst.xy_domains(&field, cfg)?;
    domains.push(subfield_domain(&field, inst.d, cfg.subfield_method)?);
    Ok(Search::new(&field, &[eq], domains).count(cfg))
}

/// `N_d(f) = p * #{(x, y) : Tr(f(x, y)) = 0}`, the trace going down to F_p.
pub fn as_count_trace(inst: &ASInstance, cfg: &Config) -> Result<u64> {
    let q = inst.base().q();
    cfg.budget.check(
        || "Artin-Schreier trace count".into(),
        big_pow(q, inst.dimension()),
    )?;
    let field = inst.ambient(cfg)?;
    let table: Option<Vec<bool>> = (field.order() <= TRACE_TABLE_LIMIT).then(|| {
        let mut t = vec![false; field.order() as usize];
        for x in field.elements() {
            t[x.packed() as usize] = field.absolute_trace(x) == 0;
        }
        t
    });
    let f = inst.f.compile(&field);
    let domains = inst.xy_domains(&field, cfg)?;
    let parts = Search::new(&field, &[], domains).visit(
        cfg,
        || 0u64,
        |acc, pt| {
            let v = f.eval(&field, pt);
            let zero = match &table {
                Some(t) => t[v.packed() as usize],
                None => field.absolute_trace(v) == 0,
            };
            *acc += zero as u64;
        },
    );
    Ok(inst.base().p() as u64 * parts.into_iter().sum::<u64>())
}

/// `f(x_1, y) + ... + f(x_d, y)` in `dn + n'` variables: block `i` of x
/// variables at `i*n..(i+1)*n`, the shared y block last.
pub fn fibred_sum(f: &SparsePoly, n: usize, n_prime: usize, d: u32) -> Result<SparsePoly> {
    if f.nvars() != n + n_prime {
        return Err(Error::DimensionMismatch {
            expected: n + n_prime,
            got: f.nvars(),
        });
    }
    if d == 0 {
        return Err(Error::InvalidParameter("fibred sum needs d >= 1".into()));
    }
    let d = d as usize;
    let total = d * n + n_prime;
    let mut acc = SparsePoly::zero(f.base(), total);
    for i in 0..d {
        let map: Vec<usize> = (i * n..(i + 1) * n).chain(d * n..total).collect();
        acc = acc.add(&f.substitute_rename(&map, total)?);
    }
    Ok(acc)
}

/// Variable names matching [`fibred_sum`]'s layout.
pub fn fibred_sum_vars(vars: &[String], n: usize, d: u32) -> Vec<String> {
    let d = d as usize;
    let mut out = Vec::with_capacity(d * n + vars.len() - n);
    for i in 1..=d {
        out.extend(vars[..n].iter().map(|v| if d == 1 { v.clone() } else { format!("{v}_{i}") }));
    }
    out.extend(vars[n..].iter().cloned());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagonalVerdict {
    Smooth,
    Singular,
    NotDiagonal,
}

/// Exact smoothness test for diagonal forms `sum a_i x_i^r`.
///
/// Every variable of the ring has to carry a nonzero pure power; a missing
/// variable gives the singular point where only that coordinate is nonzero
/// (for `r >= 2`). Linear forms are smooth when nonzero.
pub fn diagonal_smooth_check(form: &SparsePoly, p: u32) -> Result<DiagonalVerdict> {
    if !form.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let Some(r) = form.total_degree() else {
        return Ok(DiagonalVerdict::Singular);
    };
    if r == 1 {
        return Ok(DiagonalVerdict::Smooth);
    }
    let mut seen = vec![false; form.nvars()];
    for (m, _) in form.terms() {
        let support: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0).collect();
        match support[..] {
            [i] if !seen[i] => seen[i] = true,
            _ => return Ok(DiagonalVerdict::NotDiagonal),
        }
    }
    if r % p == 0 || seen.iter().any(|&s| !s) {
        Ok(DiagonalVerdict::Singular)
    } else {
        Ok(DiagonalVerdict::Smooth)
    }
}

/// A projective point where a form and all its partial derivatives vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularWitness {
    /// The point has coordinates in F_{q^degree}.
    pub degree: u32,
    pub coords: Vec<String>,
}

/// Looks for a singular point of the projective hypersurface `form = 0`
/// over F_{q^e} for `e = 1..=e_max`. `None` only means none was found.
pub fn singular_search(form: &SparsePoly, e_max: u32, cfg: &Config) -> Result<Option<SingularWitness>> {
    if !form.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let m = form.nvars();
    let mut system = vec![form.clone()];
    system.extend((0..m).map(|i| form.derivative(i)).filter(|g| !g.is_zero()));
    let base = form.base();
    for e in 1..=e_max {
        // q^(e(m-1)) + ... + 1 representatives
        let cost = (0..m as u64).fold(0u128, |acc, j| {
            acc.saturating_add(big_pow(base.q(), e as u64 * j))
        });
        cfg.budget
            .check(|| format!("singular point search over degree {e}"), cost)?;
        let field = build_field_with(base.p(), base.s(), e, &cfg.budget)?;
        let all = subfield_domain(&field, e, cfg.subfield_method)?;
        let zero = Arc::new(vec![field.zero()]);
        let one = Arc::new(vec![field.one()]);
        // the first nonzero coordinate is normalised to 1
        for pivot in 0..m {
            let domains: Vec<_> = (0..m)
                .map(|i| match i.cmp(&pivot) {
                    std::cmp::Ordering::Less => zero.clone(),
                    std::cmp::Ordering::Equal => one.clone(),
                    std::cmp::Ordering::Greater => all.clone(),
                })
                .collect();
            let found = Search::new(&field, &system, domains)
                .visit(cfg, || None, |acc: &mut Option<Vec<FieldElement>>, pt| {
                    if acc.is_none() {
                        *acc = Some(pt.to_vec());
                    }
                })
                .into_iter()
                .flatten()
                .next();
            if let Some(pt) = found {
                return Ok(Some(SingularWitness {
                    degree: e,
                    coords: pt.iter().map(|&c| field.render(c)).collect(),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    /// Diagonal and smooth: the hypothesis holds.
    VerifiedDiagonal,
    /// Diagonal and singular, or a singular point was found.
    Singular,
    /// Not diagonal, and the search found no singular point.
    HeuristicPass,
    /// Not diagonal, and the search ran out of budget.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub p: u32,
    pub q: u64,
    pub n: usize,
    pub n_prime: usize,
    pub d: u32,
    /// Degree of `f`.
    pub r: u32,
    pub leading_form: String,
    pub fibred_leading_form: String,
    pub count_brute: u64,
    pub count_trace: u64,
    /// `N_d`.
    pub count: u64,
    pub divisible_by_p: bool,
    /// `q^(dn+n')`.
    pub main_term: String,
    /// `|N_d - q^(dn+n')|`.
    pub deviation: String,
    /// `(p-1)(r-1)^(dn+n') q^((dn+n')/2)`, exact.
    pub bound: String,
    pub bound_decimal: String,
    /// `(p-1)^2 (r-1)^(2(dn+n')) q^(dn+n')`.
    pub bound_squared: String,
    pub p_divides_r: bool,
    pub smoothness: Smoothness,
    pub smoothness_note: String,
    pub singular_witness: Option<SingularWitness>,
    /// `p ∤ r` and the leading fibred sum is verified smooth.
    pub hypotheses_hold: bool,
    /// `deviation^2 <= bound_squared`, checked whether or not the
    /// hypotheses hold.
    pub satisfied: bool,
    /// Counts agree, `p | N_d`, and the bound holds whenever the hypotheses
    /// do.
    pub pass: bool,
}

/// [`bound_check_with`] searching up to [`DEFAULT_SEARCH_DEGREE`].
pub fn bound_check(inst: &ASInstance, cfg: &Config) -> Result<BoundReport> {
    bound_check_with(inst, DEFAULT_SEARCH_DEGREE, cfg)
}

/// Counts `N_d` both ways, settles the smoothness hypothesis as far as
/// possible and compares the deviation with the bound exactly.
pub fn bound_check_with(inst: &ASInstance, e_max: u32, cfg: &Config) -> Result<BoundReport> {
    let base = inst.base();
    let (p, q) = (base.p(), base.q());
    let count_brute = as_count_brute(inst, cfg)?;
    let count_trace = as_count_trace(inst, cfg)?;
    if count_brute != count_trace {
        return Err(Error::OracleDisagreement {
            brute: count_brute,
            trace: count_trace,
        });
    }
    let (fr, r) = inst.f.leading_form()?;
    let summed = fibred_sum(&fr, inst.n, inst.n_prime, inst.d)?;
    let summed_vars = fibred_sum_vars(&inst.vars, inst.n, inst.d);
    let (smoothness, note, witness) = match diagonal_smooth_check(&summed, p)? {
        DiagonalVerdict::Smooth => (
            Smoothness::VerifiedDiagonal,
            "diagonal form with every coefficient nonzero and p not dividing r".to_string(),
            None,
        ),
        DiagonalVerdict::Singular => (
            Smoothness::Singular,
            "diagonal form with a vanishing coefficient or p dividing r".to_string(),
            singular_search(&summed, 1, cfg).ok().flatten(),
        ),
        DiagonalVerdict::NotDiagonal => match singular_search(&summed, e_max, cfg) {
            Ok(Some(w)) => (
                Smoothness::Singular,
                format!("singular point found over degree {}", w.degree),
                Some(w),
            ),
            Ok(None) => (
                Smoothness::HeuristicPass,
                format!("no singular point found up to degree {e_max}"),
                None,
            ),
            Err(Error::BudgetExceeded { .. }) => (
                Smoothness::Unknown,
                "singular point search exceeded the budget".to_string(),
                None,
            ),
            Err(e) => return Err(e),
        },
    };
    let m = inst.dimension();
    let main = BigUint::from(q).pow(m as u32);
    let count = BigUint::from(count_brute);
    let deviation = if count >= main { &count - &main } else { &main - &count };
    let coeff = BigUint::from(p - 1) * BigUint::from(r - 1).pow(m as u32);
    let bound_squared = &coeff * &coeff * &main;
    let satisfied = &deviation * &deviation <= bound_squared;
    let p_divides_r = r % p == 0;
    let hypotheses_hold = !p_divides_r && smoothness == Smoothness::VerifiedDiagonal;
    let divisible_by_p = count_brute % p as u64 == 0;
    Ok(BoundReport {
        p,
        q,
        n: inst.n,
        n_prime: inst.n_prime,
        d: inst.d,
        r,
        leading_form: fr.display(&inst.vars),
        fibred_leading_form: summed.display(&summed_vars),
        count_brute,
        count_trace,
        count: count_brute,
        divisible_by_p,
        main_term: main.to_string(),
        deviation: deviation.to_string(),
        bound: exact_bound(&coeff, q, m),
        bound_decimal: format!(
            "{:.6}",
            (p - 1) as f64 * ((r - 1) as f64).powf(m as f64) * (q as f64).powf(m as f64 / 2.0)
        ),
        bound_squared: bound_squared.to_string(),
        p_divides_r,
        smoothness,
        smoothness_note: note,
        singular_witness: witness,
        hypotheses_hold,
        satisfied,
        pass: divisible_by_p && (!hypotheses_hold || satisfied),
    })
}

/// `coeff * q^(m/2)` as an integer, or `c*sqrt(q)` when `q^m` is not a
/// square.
fn exact_bound(coeff: &BigUint, q: u64, m: u64) -> String {
    let root = q.sqrt();
    if m.is_multiple_of(2) || root * root == q {
        let half = if m.is_multiple_of(2) {
            BigUint::from(q).pow((m / 2) as u32)
        } else {
            BigUint::from(root).pow(m as u32)
        };
        return (coeff * half).to_string();
    }
    let c = coeff * BigUint::from(q).pow((m / 2) as u32);
    if c == BigUint::from(0u32) {
        "0".into()
    } else {
        format!("{c}*sqrt({q})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub d: u32,
    pub form: String,
    pub verdict: DiagonalVerdict,
    /// `p ∤ d`.
    pub expected_smooth: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalSweep {
    pub p: u32,
    pub r: u32,
    pub entries: Vec<SweepEntry>,
    pub pass: bool,
}

/// For diagonal forms `f1r(x)` and `f2r(y)` of a common degree `r` with
/// `p ∤ r`, checks that the `d`-th fibred sum of `f1r + f2r` is smooth
/// exactly when `p ∤ d`.
pub fn diagonal_sweep(f1r: &SparsePoly, f2r: &SparsePoly, d_list: &[u32]) -> Result<DiagonalSweep> {
    let base = f1r.base();
    let p = base.p();
    let (_, r1) = f1r.leading_form()?;
    let (_, r2) = f2r.leading_form()?;
    if r1 != r2 {
        return Err(Error::DegreeMismatch(format!(
            "the x form has degree {r1} and the y form degree {r2}"
        )));
    }
    for g in [f1r, f2r] {
        if diagonal_smooth_check(g, p)? != DiagonalVerdict::Smooth {
            return Err(Error::InvalidParameter(format!(
                "{} is not a smooth diagonal form",
                g.display(&default_var_names("v", g.nvars()))
            )));
        }
    }
    let (n, n_prime) = (f1r.nvars(), f2r.nvars());
    let total = n + n_prime;
    let f = f1r
        .substitute_rename(&(0..n).collect::<Vec<_>>(), total)?
        .add(&f2r.substitute_rename(&(n..total).collect::<Vec<_>>(), total)?);
    let vars: Vec<String> = default_var_names("x", n)
        .into_iter()
        .chain(default_var_names("y", n_prime))
        .collect();
    let mut entries = Vec::with_capacity(d_list.len());
    for &d in d_list {
        let g = fibred_sum(&f, n, n_prime, d)?;
        let verdict = diagonal_smooth_check(&g, p)?;
        let expected_smooth = d % p != 0;
        entries.push(SweepEntry {
            d,
            form: g.display(&fibred_sum_vars(&vars, n, d)),
            verdict,
            expected_smooth,
            agrees: (verdict == DiagonalVerdict::Smooth) == expected_smooth,
        });
    }
    let pass = entries.iter().all(|e| e.agrees);
    Ok(DiagonalSweep {
        p,
        r: r1,
        entries,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(p: u32, s: u32, f: &str, d: u32) -> ASInstance {
        ASInstance::parse(p, s, &["x"], &["y"], f, d).unwrap()
    }

    fn form(p: u32, vars: &[&str], text: &str) -> SparsePoly {
        parse_poly(text, vars, &BaseField::new(p, 1).unwrap()).unwrap()
    }

    /// Independent count: plain nested loops over explicit element lists.
    fn naive(i: &ASInstance) -> u64 {
        let field = i.ambient(&Config::default()).unwrap();
        let big = field.enumerate_subfield(i.d).unwrap();
        let small = field.enumerate_subfield(1).unwrap();
        let p = i.base().p() as u64;
        let mut total = 0;
        let mut pt = vec![field.zero(); i.n + i.n_prime];
        fn rec(
            level: usize,
            i: &ASInstance,
            field: &FieldDescriptor,
            big: &[FieldElement],
            small: &[FieldElement],
            pt: &mut Vec<FieldElement>,
            p: u64,
            total: &mut u64,
        ) {
            if level == pt.len() {
                let v = i.f.eval(field, pt).unwrap();
                for &x0 in big {
                    if field.sub(field.pow(x0, p), x0) == v {
                        *total += 1;
                    }
                }
                return;
            }
            let dom = if level < i.n { big } else { small };
            for &x in dom {
                pt[level] = x;
                rec(level + 1, i, field, big, small, pt, p, total);
            }
        }
        rec(0, i, &field, &big, &small, &mut pt, p, &mut total);
        total
    }

    #[test]
    fn count_examples() {
        let cfg = Config::default();
        let cubic = inst(2, 1, "x^3 + y^3", 1);
        assert_eq!(as_count_brute(&cubic, &cfg).unwrap(), 4);
        assert_eq!(as_count_trace(&cubic, &cfg).unwrap(), 4);
        let lin = inst(2, 1, "x", 1);
        assert_eq!(as_count_brute(&lin, &cfg).unwrap(), 4);
        assert_eq!(as_count_trace(&lin, &cfg).unwrap(), 4);
        let y = inst(2, 1, "y", 2);
        assert_eq!(naive(&y), 16);
        assert_eq!(as_count_brute(&y, &cfg).unwrap(), 16);
        assert_eq!(as_count_trace(&y, &cfg).unwrap(), 16);
    }

    #[test]
    fn oracles_agree() {
        let cfg = Config::default();
        let cases = [
            inst(2, 1, "x^3 + y^3", 2),
            inst(2, 1, "x^3 + y^3", 3),
            inst(3, 1, "x^2 + y^2", 1),
            inst(3, 1, "x^2 + y^2", 2),
            inst(3, 1, "x*y + x^2", 2),
            inst(3, 1, "x^3 + y", 1),
            inst(2, 2, "x^3 + a*y^3", 1),
            ASInstance::parse(2, 1, &["x1", "x2"], &["y"], "x1^3 + x2^3 + y^3", 1).unwrap(),
        ];
        for c in &cases {
            let b = as_count_brute(c, &cfg).unwrap();
            assert_eq!(b, naive(c), "{:?}", c.f());
            assert_eq!(b, as_count_trace(c, &cfg).unwrap());
            assert_eq!(b, as_count_trace(c, &cfg.with_workers(3)).unwrap());
            assert_eq!(b % c.base().p() as u64, 0);
        }
    }

    #[test]
    fn fibred_sum_examples() {
        let f = form(2, &["x", "y"], "x^2 + y");
        assert_eq!(fibred_sum(&f, 1, 1, 1).unwrap(), f);
        let g = fibred_sum(&f, 1, 1, 2).unwrap();
        assert_eq!(g, form(2, &["a", "b", "y"], "a^2 + b^2"));
        let f = form(3, &["x", "y"], "x^2 + y");
        let g = fibred_sum(&f, 1, 1, 2).unwrap();
        assert_eq!(g, form(3, &["a", "b", "y"], "a^2 + b^2 + 2*y"));
        let f = form(5, &["x", "y"], "x*y");
        let g = fibred_sum(&f, 1, 1, 3).unwrap();
        assert_eq!(g, form(5, &["a", "b", "c", "y"], "(a + b + c)*y"));
        assert!(fibred_sum(&f, 2, 1, 3).is_err());
    }

    #[test]
    fn fibred_sum_is_block_symmetric() {
        let f = form(3, &["x1", "x2", "y"], "x1^2*y + x2 + x1*x2*y");
        let g = fibred_sum(&f, 2, 1, 3).unwrap();
        // swap blocks 0 and 2
        let swapped = g.substitute_rename(&[4, 5, 2, 3, 0, 1, 6], 7).unwrap();
        assert_eq!(g, swapped);
    }

    #[test]
    fn diagonal_verdicts() {
        assert_eq!(
            diagonal_smooth_check(&form(2, &["x", "y"], "x^3 + y^3"), 2).unwrap(),
            DiagonalVerdict::Smooth
        );
        assert_eq!(
            diagonal_smooth_check(&form(2, &["a", "b", "y"], "a^3 + b^3 + 2*y^3"), 2).unwrap(),
            DiagonalVerdict::Singular
        );
        assert_eq!(
            diagonal_smooth_check(&form(2, &["x", "y"], "x*y"), 2).unwrap(),
            DiagonalVerdict::NotDiagonal
        );
        assert_eq!(
            diagonal_smooth_check(&form(2, &["x", "y"], "x^2 + y^2"), 2).unwrap(),
            DiagonalVerdict::Singular
        );
        assert_eq!(
            diagonal_smooth_check(&form(2, &["x", "y"], "x"), 2).unwrap(),
            DiagonalVerdict::Smooth
        );
        assert!(diagonal_smooth_check(&form(2, &["x", "y"], "x^2 + y"), 2).is_err());
    }

    #[test]
    fn singular_search_examples() {
        let cfg = Config::default();
        assert_eq!(
            singular_search(&form(2, &["x", "y"], "x^3 + y^3"), 2, &cfg).unwrap(),
            None
        );
        let w = singular_search(&form(5, &["x", "y"], "x^2*y"), 1, &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(w.coords, vec!["0", "1"]);
        assert_eq!(w.degree, 1);
        assert_eq!(
            singular_search(&form(3, &["x", "y", "z"], "x"), 2, &cfg).unwrap(),
            None
        );
        // x^2 + y^2 = (x + y)^2 over F_2 is singular along x = y
        let w = singular_search(&form(2, &["x", "y"], "x^2 + y^2"), 1, &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(w.coords, vec!["1", "1"]);
    }

    #[test]
    fn bound_examples() {
        let cfg = Config::default();
        let rep = bound_check(&inst(2, 1, "x^3 + y^3", 1), &cfg).unwrap();
        assert_eq!(rep.count, 4);
        assert_eq!(rep.deviation, "0");
        assert_eq!(rep.bound, "8");
        assert_eq!(rep.bound_squared, "64");
        assert_eq!(rep.smoothness, Smoothness::VerifiedDiagonal);
        assert!(rep.hypotheses_hold && rep.satisfied && rep.pass);

        let rep = bound_check(&inst(2, 1, "x^3 + y^3", 2), &cfg).unwrap();
        assert_eq!(rep.smoothness, Smoothness::Singular);
        assert!(!rep.hypotheses_hold);
        assert!(rep.pass);

        let rep = bound_check(&inst(2, 1, "x^3 + y^3", 3), &cfg).unwrap();
        assert_eq!(rep.smoothness, Smoothness::VerifiedDiagonal);
        assert_eq!(rep.bound, "64");
        assert!(rep.hypotheses_hold && rep.satisfied);

        let rep = bound_check(&inst(3, 1, "x*y + x^2", 1), &cfg).unwrap();
        assert_eq!(rep.smoothness, Smoothness::HeuristicPass);
        assert_eq!(rep.smoothness_note, "no singular point found up to degree 2");
    }

    #[test]
    fn exact_bound_rendering() {
        assert_eq!(exact_bound(&BigUint::from(3u32), 4, 3), "24");
        assert_eq!(exact_bound(&BigUint::from(3u32), 3, 2), "9");
        assert_eq!(exact_bound(&BigUint::from(0u32), 2, 3), "0");
    }

    #[test]
    fn sweeps() {
        let s = diagonal_sweep(
            &form(2, &["x"], "x^3"),
            &form(2, &["y"], "y^3"),
            &[1, 2, 3, 4, 5, 6],
        )
        .unwrap();
        assert!(s.pass);
        let verdicts: Vec<_> = s.entries.iter().map(|e| e.verdict).collect();
        use DiagonalVerdict::*;
        assert_eq!(verdicts, vec![Smooth, Singular, Smooth, Singular, Smooth, Singular]);
        let s = diagonal_sweep(
            &form(3, &["x"], "x^2"),
            &form(3, &["y"], "y^2"),
            &[1, 2, 3, 4, 5, 6],
        )
        .unwrap();
        assert!(s.pass);
        assert_eq!(
            s.entries.iter().map(|e| e.verdict).collect::<Vec<_>>(),
            vec![Smooth, Smooth, Singular, Smooth, Smooth, Singular]
        );
        assert!(matches!(
            diagonal_sweep(&form(2, &["x"], "x^3"), &form(2, &["y"], "y^5"), &[1]),
            Err(Error::DegreeMismatch(_))
        ));
    }
}
