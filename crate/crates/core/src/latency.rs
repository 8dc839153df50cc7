//! Edge latency functions.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_short, zero, Q};

/// Shape of a latency function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `c(x) = a·x` with `a > 0`.
    Linear { a: Q },
    /// `c(x) = a·x + b` with `a, b ≥ 0`.
    Affine { a: Q, b: Q },
    /// Nondecreasing piecewise-linear interpolation of `(x, c(x))` points.
    /// The first point has `x = 0`; the last point bounds the domain.
    Table { points: Vec<(Q, Q)> },
}

/// Which family a latency function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatencyKind {
    Linear,
    Affine,
    GeneralMonotone,
}

/// A continuous nondecreasing latency function with a Lipschitz constant `xi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatencyFunction {
    shape: Shape,
    xi: Q,
}

impl LatencyFunction {
    /// `c(x) = a·x`. Requires `a > 0`.
    pub fn linear(a: Q) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::Domain(format!("linear slope must be positive, got {}", to_short(&a))));
        }
        Ok(Self { xi: a.clone(), shape: Shape::Linear { a } })
    }

    /// `c(x) = a·x + b`. Requires `a, b ≥ 0`.
    pub fn affine(a: Q, b: Q) -> Result<Self> {
        if a.is_negative() || b.is_negative() {
            return Err(Error::Domain("affine coefficients must be nonnegative".into()));
        }
        // a zero slope still needs a positive Lipschitz constant
        let xi = if a.is_zero() { crate::rational::one() } else { a.clone() };
        Ok(Self { shape: Shape::Affine { a, b }, xi })
    }

    /// Piecewise-linear function through `points`, which must start at `x = 0`
    /// and be strictly increasing in `x` and nondecreasing in `c(x)`.
    pub fn table(points: Vec<(Q, Q)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Domain("a latency table needs at least two points".into()));
        }
        if !points[0].0.is_zero() {
            return Err(Error::Domain("a latency table must start at x = 0".into()));
        }
        if points[0].1.is_negative() {
            return Err(Error::Domain("latencies must be nonnegative".into()));
        }
        let mut xi = zero();
        for w in points.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x1 <= x0 {
                return Err(Error::Domain("latency table x-coordinates must increase".into()));
            }
            if y1 < y0 {
                return Err(Error::Domain("latency table must be nondecreasing".into()));
            }
            let slope = (y1 - y0) / (x1 - x0);
            if slope > xi {
                xi = slope;
            }
        }
        if xi.is_zero() {
            xi = crate::rational::one();
        }
        Ok(Self { shape: Shape::Table { points }, xi })
    }

    /// Replaces the Lipschitz constant. It may only be loosened.
    pub fn with_xi(mut self, xi: Q) -> Result<Self> {
        let tight = self.tightest_xi();
        if !xi.is_positive() || xi < tight {
            return Err(Error::Domain(format!(
                "Lipschitz constant {} is below the steepest slope {}",
                to_short(&xi),
                to_short(&tight)
            )));
        }
        self.xi = xi;
        Ok(self)
    }

    fn tightest_xi(&self) -> Q {
        match &self.shape {
            Shape::Linear { a } | Shape::Affine { a, .. } => a.clone(),
            Shape::Table { points } => points
                .windows(2)
                .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
                .max()
                .unwrap_or_else(zero),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn kind(&self) -> LatencyKind {
        match self.shape {
            Shape::Linear { .. } => LatencyKind::Linear,
            Shape::Affine { .. } => LatencyKind::Affine,
            Shape::Table { .. } => LatencyKind::GeneralMonotone,
        }
    }

    pub fn xi(&self) -> &Q {
        &self.xi
    }

    /// Slope of a linear function, `None` otherwise.
    pub fn linear_slope(&self) -> Option<&Q> {
        match &self.shape {
            Shape::Linear { a } => Some(a),
            _ => None,
        }
    }

    /// Upper end of the domain, if bounded.
    pub fn domain_max(&self) -> Option<&Q> {
        match &self.shape {
            Shape::Table { points } => points.last().map(|p| &p.0),
            _ => None,
        }
    }

    /// Evaluates the latency at load `x`, failing outside the domain.
    pub fn try_eval(&self, x: &Q) -> Result<Q> {
        if x.is_negative() {
            return Err(Error::Domain(format!("negative load {}", to_short(x))));
        }
        match &self.shape {
            Shape::Linear { a } => Ok(a * x),
            Shape::Affine { a, b } => Ok(a * x + b),
            Shape::Table { points } => {
                let last = points.last().expect("validated table");
                if x > &last.0 {
                    return Err(Error::Domain(format!(
                        "load {} outside latency domain [0, {}]",
                        to_short(x),
                        to_short(&last.0)
                    )));
                }
                let i = points.partition_point(|(px, _)| px <= x);
                if i == points.len() {
                    return Ok(last.1.clone());
                }
                let (x0, y0) = &points[i - 1];
                let (x1, y1) = &points[i];
                Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
            }
        }
    }

    /// Evaluates at a load known to lie in the domain.
    pub(crate) fn eval(&self, x: &Q) -> Q {
        self.try_eval(x).expect("edge load outside the latency domain")
    }

    /// `α·c(x)`.
    pub fn scaled(&self, alpha: &Q) -> Self {
        let shape = match &self.shape {
            Shape::Linear { a } => Shape::Linear { a: a * alpha },
            Shape::Affine { a, b } => Shape::Affine { a: a * alpha, b: b * alpha },
            Shape::Table { points } => Shape::Table {
                points: points.iter().map(|(x, y)| (x.clone(), y * alpha)).collect(),
            },
        };
        Self { shape, xi: &self.xi * alpha }
    }

    /// `c(r·x)`, the latency seen per unit of a rate-`r` instance rescaled to rate 1.
    pub fn rate_scaled(&self, r: &Q) -> Self {
        let shape = match &self.shape {
            Shape::Linear { a } => Shape::Linear { a: a * r },
            Shape::Affine { a, b } => Shape::Affine { a: a * r, b: b.clone() },
            Shape::Table { points } => Shape::Table {
                points: points.iter().map(|(x, y)| (x / r, y.clone())).collect(),
            },
        };
        Self { shape, xi: &self.xi * r }
    }

    /// Largest load in `[0, limit]` whose latency is at most `level`
    /// (zero when even an empty edge is above `level`).
    pub(crate) fn capacity_at(&self, level: &Q, limit: &Q) -> Q {
        let cap = match &self.shape {
            Shape::Linear { a } => level / a,
            Shape::Affine { a, b } => {
                if level < b {
                    zero()
                } else if a.is_zero() {
                    limit.clone()
                } else {
                    (level - b) / a
                }
            }
            Shape::Table { points } => {
                if level < &points[0].1 {
                    zero()
                } else {
                    // last x with c(x) <= level
                    let i = points.partition_point(|(_, y)| y <= level);
                    if i == points.len() {
                        points[i - 1].0.clone()
                    } else {
                        let (x0, y0) = &points[i - 1];
                        let (x1, y1) = &points[i];
                        x0 + (x1 - x0) * (level - y0) / (y1 - y0)
                    }
                }
            }
        };
        if cap.is_negative() {
            zero()
        } else if &cap > limit {
            limit.clone()
        } else {
            cap
        }
    }

    /// Latency levels at which [`capacity_at`](Self::capacity_at) with the given
    /// limit changes slope or jumps.
    pub(crate) fn capacity_breakpoints(&self, limit: &Q) -> Vec<Q> {
        let mut out = vec![self.eval_clamped(&zero()), self.eval_clamped(limit)];
        if let Shape::Table { points } = &self.shape {
            out.extend(points.iter().filter(|(x, _)| x <= limit).map(|(_, y)| y.clone()));
        }
        out
    }

    fn eval_clamped(&self, x: &Q) -> Q {
        match self.domain_max() {
            Some(max) if x > max => self.eval(&max.clone()),
            _ => self.eval(x),
        }
    }
}

impl std::fmt::Display for LatencyFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.shape {
            Shape::Linear { a } => write!(f, "{}x", to_short(a)),
            Shape::Affine { a, b } => write!(f, "{}x+{}", to_short(a), to_short(b)),
            Shape::Table { points } => write!(f, "table[{}]", points.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn linear_rejects_nonpositive_slope() {
        assert!(LatencyFunction::linear(qi(0)).is_err());
        assert!(LatencyFunction::linear(q(-1, 2)).is_err());
    }

    #[test]
    fn table_interpolates_and_bounds_domain() {
        let c = LatencyFunction::table(vec![(qi(0), qi(0)), (qi(1), qi(2)), (qi(3), qi(3))]).unwrap();
        assert_eq!(c.try_eval(&q(1, 2)).unwrap(), qi(1));
        assert_eq!(c.try_eval(&qi(2)).unwrap(), q(5, 2));
        assert_eq!(c.try_eval(&qi(3)).unwrap(), qi(3));
        assert!(matches!(c.try_eval(&qi(4)), Err(Error::Domain(_))));
        assert_eq!(c.xi(), &qi(2));
    }

    #[test]
    fn table_rejects_decreasing() {
        assert!(LatencyFunction::table(vec![(qi(0), qi(1)), (qi(1), qi(0))]).is_err());
        assert!(LatencyFunction::table(vec![(qi(1), qi(1)), (qi(2), qi(2))]).is_err());
    }

    #[test]
    fn xi_cannot_be_tightened() {
        let c = LatencyFunction::linear(qi(2)).unwrap();
        assert!(c.clone().with_xi(qi(1)).is_err());
        assert_eq!(c.with_xi(qi(3)).unwrap().xi(), &qi(3));
    }

    #[test]
    fn capacity_inverts_latency() {
        let lim = qi(10);
        let lin = LatencyFunction::linear(q(1, 2)).unwrap();
        assert_eq!(lin.capacity_at(&qi(1), &lim), qi(2));
        let aff = LatencyFunction::affine(qi(1), qi(2)).unwrap();
        assert_eq!(aff.capacity_at(&qi(1), &lim), qi(0));
        assert_eq!(aff.capacity_at(&qi(5), &lim), qi(3));
        let flat = LatencyFunction::affine(qi(0), qi(2)).unwrap();
        assert_eq!(flat.capacity_at(&qi(2), &lim), lim);
        let tab = LatencyFunction::table(vec![(qi(0), qi(0)), (qi(1), qi(1)), (qi(2), qi(1)), (qi(4), qi(3))])
            .unwrap();
        assert_eq!(tab.capacity_at(&q(1, 2), &lim), q(1, 2));
        assert_eq!(tab.capacity_at(&qi(1), &lim), qi(2));
        assert_eq!(tab.capacity_at(&qi(2), &lim), qi(3));
        assert_eq!(tab.capacity_at(&qi(9), &lim), qi(4));
    }

    #[test]
    fn scaling_forms() {
        let tab = LatencyFunction::table(vec![(qi(0), qi(0)), (qi(2), qi(4))]).unwrap();
        let s = tab.rate_scaled(&qi(2));
        assert_eq!(s.try_eval(&qi(1)).unwrap(), qi(4));
        assert_eq!(s.xi(), &qi(4));
        let a = tab.scaled(&q(1, 2));
        assert_eq!(a.try_eval(&qi(2)).unwrap(), qi(2));
    }
}
