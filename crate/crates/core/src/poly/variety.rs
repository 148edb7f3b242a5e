use num_integer::Integer;

use super::{parse_poly_with_generator, BaseField, SparsePoly, DEFAULT_GENERATOR};
use crate::{Error, Result};

/// `prefix1, prefix2, ..., prefix{n}`.
pub fn default_var_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// An affine variety `F_1 = ... = F_m = 0` in `n` variables over F_q, with a
/// profile `d_1..d_n` of field levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    base: BaseField,
    vars: Vec<String>,
    equations: Vec<SparsePoly>,
    profile: Vec<u32>,
    lcm: u32,
}

impl VarietySpec {
    pub fn new(
        base: &BaseField,
        vars: Vec<String>,
        equations: Vec<SparsePoly>,
        profile: Vec<u32>,
    ) -> Result<Self> {
        let n = vars.len();
        if let Some(bad) = equations.iter().find(|e| e.nvars() != n || e.base() != base) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.nvars(),
            });
        }
        if profile.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: profile.len(),
            });
        }
        if profile.contains(&0) {
            return Err(Error::InvalidParameter("profile entries must be positive".into()));
        }
        let lcm = profile.iter().fold(1u32, |acc, &d| acc.lcm(&d));
        Ok(VarietySpec {
            base: base.clone(),
            vars,
            equations,
            profile,
            lcm,
        })
    }

    /// Parses equations given as text.
    pub fn parse(
        p: u32,
        s: u32,
        vars: &[&str],
        equations: &[&str],
        profile: &[u32],
    ) -> Result<Self> {
        let base = BaseField::new(p, s)?;
        let eqs = equations
            .iter()
            .map(|e| parse_poly_with_generator(e, vars, &base, DEFAULT_GENERATOR))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            &base,
            vars.iter().map(|v| v.to_string()).collect(),
            eqs,
            profile.to_vec(),
        )
    }

    /// Same equations with another profile.
    pub fn with_profile(&self, profile: Vec<u32>) -> Result<Self> {
        Self::new(&self.base, self.vars.clone(), self.equations.clone(), profile)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn s(&self) -> u32 {
        self.base.s()
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn equations(&self) -> &[SparsePoly] {
        &self.equations
    }

    pub fn profile(&self) -> &[u32] {
        &self.profile
    }

    /// `D = lcm(d_1, ..., d_n)`, 1 for n = 0.
    pub fn lcm(&self) -> u32 {
        self.lcm
    }

    /// Equations as canonical text.
    pub fn equation_texts(&self) -> Vec<String> {
        self.equations.iter().map(|e| e.display(&self.vars)).collect()
    }

    /// Applies a permutation to variables and profile together: new
    /// variable `i` is old variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(Error::NonInjectiveMap);
            }
            inverse[old] = new;
        }
        let equations = self
            .equations
            .iter()
            .map(|e| e.substitute_rename(&inverse, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            &self.base,
            perm.iter().map(|&o| self.vars[o].clone()).collect(),
            equations,
            perm.iter().map(|&o| self.profile[o]).collect(),
        )
    }
}

/// A morphism `A^n -> A^{n'}` given by `n'` component polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSpec {
    source_dim: usize,
    components: Vec<SparsePoly>,
}

impl MorphismSpec {
    pub fn new(source_dim: usize, components: Vec<SparsePoly>) -> Result<Self> {
        if let Some(bad) = components.iter().find(|c| c.nvars() != source_dim) {
            return Err(Error::DimensionMismatch {
                expected: source_dim,
                got: bad.nvars(),
            });
        }
        Ok(MorphismSpec {
            source_dim,
            components,
        })
    }

    /// The projection to coordinate `i`.
    pub fn projection(base: &BaseField, source_dim: usize, i: usize) -> Self {
        MorphismSpec {
            source_dim,
            components: vec![SparsePoly::var(base, source_dim, i)],
        }
    }

    pub fn identity(base: &BaseField, dim: usize) -> Self {
        MorphismSpec {
            source_dim: dim,
            components: (0..dim).map(|i| SparsePoly::var(base, dim, i)).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[SparsePoly] {
        &self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_and_validation() {
        let x = VarietySpec::parse(2, 1, &["x1", "x2"], &["x1 - x2"], &[2, 3]).unwrap();
        assert_eq!(x.lcm(), 6);
        assert_eq!(x.n(), 2);
        assert!(VarietySpec::parse(2, 1, &["x1", "x2"], &["x1"], &[1]).is_err());
        assert!(VarietySpec::parse(2, 1, &["x1"], &["x1"], &[0]).is_err());
        let empty = VarietySpec::parse(2, 1, &[], &[], &[]).unwrap();
        assert_eq!(empty.lcm(), 1);
    }

    #[test]
    fn permutation_moves_profile_with_variables() {
        let x = VarietySpec::parse(2, 1, &["u", "v"], &["u*v^2 + 1"], &[1, 2]).unwrap();
        let y = x.permuted(&[1, 0]).unwrap();
        assert_eq!(y.vars(), &["v".to_string(), "u".to_string()]);
        assert_eq!(y.profile(), &[2, 1]);
        assert_eq!(y.equation_texts(), vec!["v^2*u + 1"]);
    }
}
