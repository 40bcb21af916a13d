use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::expr::PotentialExpression;

type Map = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Scalar potential `V` with its first two derivatives.
#[derive(Clone)]
pub struct Potential {
    v: Map,
    d1: Map,
    d2: Map,
    pub description: String,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

impl Potential {
    pub fn new(
        description: impl Into<String>,
        v: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            v: Arc::new(v),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
            description: description.into(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| c, |_| 0.0, |_| 0.0)
    }

    pub fn parse(source: &str) -> Result<Self> {
        Ok(Self::from_expression(PotentialExpression::parse(source)?))
    }

    pub fn from_expression(e: PotentialExpression) -> Self {
        let PotentialExpression {
            source,
            ast,
            first,
            second,
        } = e;
        Self::new(
            source,
            move |x| ast.eval(x),
            move |x| first.eval(x),
            move |x| second.eval(x),
        )
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.v)(x)
    }

    pub fn first_derivative(&self, x: f64) -> f64 {
        (self.d1)(x)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        (self.d2)(x)
    }

    /// Largest value over `count` equispaced samples of `[a, b]`.
    pub fn max_on(&self, a: f64, b: f64, count: usize) -> f64 {
        let count = count.max(2);
        (0..count)
            .map(|k| self.value(a + (b - a) * k as f64 / (count - 1) as f64))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
