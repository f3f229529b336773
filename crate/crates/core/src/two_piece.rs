//! Two-piece Gaussian likelihood for out-of-range observations.
//!
//! The density joins the left half of `N(mu, sigma_ir^2)` and the right half
//! of `N(mu, sigma_or^2)` at their common mode `mu` (the detection limit):
//!
//! ```text
//! f(x) = w exp(-(x - mu)^2 / (2 sigma_ir^2))   x <= mu
//! f(x) = w exp(-(x - mu)^2 / (2 sigma_or^2))   x >  mu
//! w    = sqrt(2/pi) / (sigma_ir + sigma_or)
//! ```

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPieceGaussian {
    mu: f64,
    sigma_ir: f64,
    sigma_or: f64,
    w: f64,
}

impl TwoPieceGaussian {
    pub fn new(mu: f64, sigma_ir: f64, sigma_or: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(invalid("mu", format!("must be finite, got {mu}")));
        }
        if !(sigma_ir > 0.0 && sigma_ir.is_finite()) {
            return Err(invalid("sigma_ir", format!("must be > 0, got {sigma_ir}")));
        }
        if !(sigma_or > 0.0 && sigma_or.is_finite()) {
            return Err(invalid("sigma_or", format!("must be > 0, got {sigma_or}")));
        }
        let w = (2.0 / PI).sqrt() / (sigma_ir + sigma_or);
        Ok(Self {
            mu,
            sigma_ir,
            sigma_or,
            w,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma_ir(&self) -> f64 {
        self.sigma_ir
    }

    pub fn sigma_or(&self) -> f64 {
        self.sigma_or
    }

    /// Normalizing constant, also the density at the mode.
    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let d = x - self.mu;
        let s = if x <= self.mu {
            self.sigma_ir
        } else {
            self.sigma_or
        };
        self.w * (-d * d / (2.0 * s * s)).exp()
    }

    /// Probability mass on the in-range side, `P(X <= mu)`.
    pub fn prob_in_range(&self) -> f64 {
        self.sigma_ir / (self.sigma_ir + self.sigma_or)
    }

    pub fn mean(&self) -> f64 {
        self.mu + (2.0 / PI).sqrt() * (self.sigma_or - self.sigma_ir)
    }

    /// Draws one value.
    ///
    /// Picks the in-range half with probability `sigma_ir / (sigma_ir + sigma_or)`
    /// and returns a half-normal offset scaled by that side's std. When both
    /// stds are equal the density is plain `N(mu, sigma^2)` and a single
    /// normal deviate is consumed, so the draw matches a Gaussian perturbation
    /// taken from the same stream.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.sigma_ir == self.sigma_or {
            let z: f64 = rng.sample(StandardNormal);
            return self.mu + self.sigma_ir * z;
        }
        let u: f64 = rng.random();
        let z: f64 = rng.sample::<f64, _>(StandardNormal).abs();
        if u < self.prob_in_range() {
            self.mu - z * self.sigma_ir
        } else {
            self.mu + z * self.sigma_or
        }
    }
}

impl Distribution<f64> for TwoPieceGaussian {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        TwoPieceGaussian::sample(self, rng)
    }
}

/// Out-of-range std from the climatological mean of values above the limit.
pub fn sigma_or_from_climatology(clim_mean_above: f64, mu: f64) -> Result<f64> {
    if !(clim_mean_above > mu) {
        return Err(invalid(
            "clim_mean_above",
            format!("must exceed the detection limit {mu}, got {clim_mean_above}"),
        ));
    }
    Ok(clim_mean_above - mu)
}
