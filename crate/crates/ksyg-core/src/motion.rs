//! Polynomial trajectories of moving points.

use crate::error::{Error, Result};
use crate::num::{QPoly, Rat};

pub type PointId = u32;

/// One moving point: a polynomial per coordinate, degree bounded by the
/// scenario's declared `s`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub id: PointId,
    pub coords: Vec<QPoly>,
}

impl Trajectory {
    pub fn new(id: PointId, coords: Vec<QPoly>) -> Self {
        Trajectory { id, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn max_degree(&self) -> usize {
        self.coords.iter().filter_map(|c| c.degree()).max().unwrap_or(0)
    }

    /// Exact position at time `t`.
    pub fn evaluate(&self, t: &Rat) -> Vec<Rat> {
        self.coords.iter().map(|c| c.eval(t)).collect()
    }

    pub fn evaluate_f64(&self, t: f64) -> Vec<f64> {
        self.coords.iter().map(|c| c.eval_f64(t)).collect()
    }

    /// Projection of the trajectory onto a fixed direction: the polynomial
    /// `dir . p(t)`.
    pub fn direction_poly(&self, dir: &[Rat]) -> QPoly {
        assert_eq!(dir.len(), self.coords.len());
        let mut acc = QPoly::zero();
        for (d, c) in dir.iter().zip(&self.coords) {
            acc = acc.add(&c.scale(d));
        }
        acc
    }
}

/// Squared Euclidean distance between two trajectories as a polynomial in t;
/// degree <= 2s. Distance comparisons stay exact by never taking roots.
pub fn distance_sq_polynomial(a: &Trajectory, b: &Trajectory) -> Result<QPoly> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(a.dim(), b.dim()));
    }
    let mut acc = QPoly::zero();
    for (ca, cb) in a.coords.iter().zip(&b.coords) {
        let d = ca.sub(cb);
        acc = acc.add(&d.mul(&d));
    }
    Ok(acc)
}
