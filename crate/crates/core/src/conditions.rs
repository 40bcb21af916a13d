//! Non-degeneracy predicates and scaling functions for `a(x, ξ) = ξ² - V(x)`,
//! sampled on the grid nodes.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::SemiclassicalProblem;

pub const DEFAULT_EPSILON: f64 = 0.1;

/// Additive floor constant in the scaling functions.
pub const FLOOR_CONSTANT: f64 = 1.0;

/// A grid-sampled infimum test `inf expr >= threshold`.
///
/// `margin` is the sampled infimum; `None` means the test ranges over an empty set
/// (e.g. an empty energy shell) and holds vacuously.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub holds: bool,
    pub margin: Option<f64>,
}

impl Flag {
    fn from_infimum(inf: Option<f64>, threshold: f64) -> Self {
        Self {
            holds: inf.map_or(true, |m| m >= threshold),
            margin: inf,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// `inf |ξ|` over the shell `ξ² = V + τ`, tested against `√ε`.
    pub microhyperbolic_xi: Flag,
    /// `inf V`
    pub cond_2_30: Flag,
    /// `inf |V| + |V'|`
    pub cond_2_35: Flag,
    /// `inf |V| + |V'| + |V''|`
    pub cond_2_38: Flag,
    /// `inf Σ_{k≤n} |∂_ξ^k a|` over the shell, for `n = 0..=3`.
    pub cond_2_47: BTreeMap<u32, Flag>,
    pub epsilon_used: f64,
}

fn infimum(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
}

/// Evaluates every predicate on the nodes accepted by `keep`.
pub fn check_conditions_where(
    problem: &SemiclassicalProblem,
    epsilon: f64,
    keep: impl Fn(f64) -> bool,
) -> ConditionReport {
    let v = &problem.potential;
    let nodes: Vec<f64> = problem.nodes().into_iter().filter(|&x| keep(x)).collect();
    let shell: Vec<f64> = nodes
        .iter()
        .filter_map(|&x| {
            let e = v.value(x) + problem.tau;
            (e >= 0.0).then(|| e.sqrt())
        })
        .collect();

    let xi_inf = infimum(shell.iter().copied());
    let d1 = |x: f64| v.value(x).abs() + v.first_derivative(x).abs();
    let mut cond_2_47 = BTreeMap::new();
    for n in 0..=3u32 {
        // on the shell a = 0, ∂_ξ a = 2ξ, ∂²_ξ a = 2, higher derivatives vanish
        let inf = infimum(shell.iter().map(|&xi| {
            let mut s = 0.0;
            if n >= 1 {
                s += 2.0 * xi;
            }
            if n >= 2 {
                s += 2.0;
            }
            s
        }));
        cond_2_47.insert(n, Flag::from_infimum(inf, epsilon));
    }
    ConditionReport {
        microhyperbolic_xi: Flag::from_infimum(xi_inf, epsilon.sqrt()),
        cond_2_30: Flag::from_infimum(infimum(nodes.iter().map(|&x| v.value(x))), epsilon),
        cond_2_35: Flag::from_infimum(infimum(nodes.iter().map(|&x| d1(x))), epsilon),
        cond_2_38: Flag::from_infimum(
            infimum(nodes.iter().map(|&x| d1(x) + v.second_derivative(x).abs())),
            epsilon,
        ),
        cond_2_47,
        epsilon_used: epsilon,
    }
}

pub fn check_conditions(problem: &SemiclassicalProblem, epsilon: f64) -> ConditionReport {
    check_conditions_where(problem, epsilon, |_| true)
}

impl ConditionReport {
    /// The implications that hold by construction; `false` signals a bug.
    pub fn lattice_consistent(&self) -> bool {
        let implies = |a: bool, b: bool| !a || b;
        let mono = self
            .cond_2_47
            .values()
            .zip(self.cond_2_47.values().skip(1))
            .all(|(lo, hi)| implies(lo.holds, hi.holds));
        implies(self.cond_2_30.holds, self.microhyperbolic_xi.holds)
            && implies(self.cond_2_35.holds, self.cond_2_38.holds)
            && mono
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingVariant {
    Eq241,
    Eq246,
    Schrodinger24,
}

impl FromStr for ScalingVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq_2_41" => Ok(Self::Eq241),
            "eq_2_46" => Ok(Self::Eq246),
            "schrodinger_2_4" => Ok(Self::Schrodinger24),
            other => Err(Error::Unsupported(format!("scaling variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingField {
    pub variant: ScalingVariant,
    pub nodes: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub rho_values: Vec<f64>,
    pub floor: f64,
}

/// Scaling functions on the grid, with momentum placed on the shell `ξ² = max(V, 0)`.
pub fn scaling_field(problem: &SemiclassicalProblem, variant: ScalingVariant, epsilon: f64) -> ScalingField {
    let v = &problem.potential;
    let h = problem.h;
    let floor = match variant {
        ScalingVariant::Eq241 | ScalingVariant::Schrodinger24 => FLOOR_CONSTANT * h.powf(2.0 / 3.0),
        ScalingVariant::Eq246 => FLOOR_CONSTANT * h.sqrt(),
    };
    let nodes = problem.nodes();
    let gamma_values: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let vx = v.value(x);
            let xi2 = vx.max(0.0);
            // |∂_ξ a|² = 4ξ², and a = ξ² - V on the chosen momentum
            let grad2 = 4.0 * xi2;
            let a = (xi2 - vx).abs();
            match variant {
                ScalingVariant::Eq241 => epsilon * (grad2 + a) + floor,
                ScalingVariant::Eq246 => epsilon * (grad2 + v.first_derivative(x).powi(2) + a).sqrt() + floor,
                ScalingVariant::Schrodinger24 => epsilon * vx.abs() + floor,
            }
        })
        .collect();
    let rho_values = gamma_values
        .iter()
        .map(|&g| match variant {
            ScalingVariant::Eq246 => g,
            _ => g.sqrt(),
        })
        .collect();
    ScalingField {
        variant,
        nodes,
        gamma_values,
        rho_values,
        floor,
    }
}
