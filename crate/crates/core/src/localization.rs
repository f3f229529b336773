//! Nearest-observation localization on the periodic grid.

use serde::{Deserialize, Serialize};

use crate::ensemble::GridSpec;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationConfig {
    radius_km: f64,
}

impl LocalizationConfig {
    pub const DEFAULT_RADIUS_KM: f64 = 300.0;

    pub fn new(radius_km: f64) -> Result<Self> {
        if !(radius_km > 0.0) {
            return Err(invalid(
                "radius_km",
                format!("must be > 0, got {radius_km}"),
            ));
        }
        Ok(Self { radius_km })
    }

    pub fn radius_km(&self) -> f64 {
        self.radius_km
    }
}

impl Default for LocalizationConfig {
    fn default() -> Self {
        Self {
            radius_km: Self::DEFAULT_RADIUS_KM,
        }
    }
}

/// Cell of the single closest observation within the influence radius.
///
/// Distance is ring distance times the cell spacing. Ties go to the lower
/// cell index.
pub fn nearest_observation(
    cell: usize,
    obs_cells: &[usize],
    cfg: &LocalizationConfig,
    grid: &GridSpec,
) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for &o in obs_cells {
        let d = grid.ring_distance(cell, o);
        if grid.distance_km(cell, o) > cfg.radius_km {
            continue;
        }
        best = match best {
            Some((bd, bo)) if (bd, bo) <= (d, o) => Some((bd, bo)),
            _ => Some((d, o)),
        };
    }
    best.map(|(_, o)| o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> GridSpec {
        GridSpec::new(100, 12.5).unwrap()
    }

    #[test]
    fn observation_at_own_cell_wins() {
        let obs: Vec<usize> = (0..100).collect();
        let cfg = LocalizationConfig::default();
        for c in [0, 17, 99] {
            assert_eq!(nearest_observation(c, &obs, &cfg, &grid()), Some(c));
        }
    }

    #[test]
    fn outside_radius_is_none() {
        let cfg = LocalizationConfig::default();
        assert_eq!(nearest_observation(0, &[30], &cfg, &grid()), None);
        // 24 cells = 300 km is inside (inclusive)
        assert_eq!(nearest_observation(0, &[24], &cfg, &grid()), Some(24));
        assert_eq!(nearest_observation(0, &[], &cfg, &grid()), None);
    }

    #[test]
    fn tie_goes_to_lower_index() {
        let cfg = LocalizationConfig::default();
        assert_eq!(nearest_observation(0, &[98, 2], &cfg, &grid()), Some(2));
        assert_eq!(nearest_observation(0, &[2, 98], &cfg, &grid()), Some(2));
    }

    #[test]
    fn rejects_nonpositive_radius() {
        assert!(LocalizationConfig::new(0.0).is_err());
        assert!(LocalizationConfig::new(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn rotation_equivariance(cell in 0usize..100, obs in proptest::collection::vec(0usize..100, 0..8), k in 0usize..100) {
            let g = grid();
            let cfg = LocalizationConfig::default();
            let base = nearest_observation(cell, &obs, &cfg, &g);
            let shifted: Vec<usize> = obs.iter().map(|o| (o + k) % 100).collect();
            let rotated = nearest_observation((cell + k) % 100, &shifted, &cfg, &g);
            match (base, rotated) {
                (None, None) => {}
                (Some(b), Some(r)) => {
                    // same distance; identity may differ only through the index tie-break
                    prop_assert_eq!(g.ring_distance(cell, b), g.ring_distance((cell + k) % 100, r));
                    let unique = obs.iter().filter(|&&o| g.ring_distance(cell, o) == g.ring_distance(cell, b)).collect::<std::collections::BTreeSet<_>>().len() == 1;
                    if unique {
                        prop_assert_eq!((b + k) % 100, r);
                    }
                }
                _ => prop_assert!(false, "rotation changed existence"),
            }
        }

        #[test]
        fn larger_radius_is_monotone(cell in 0usize..100, obs in proptest::collection::vec(0usize..100, 0..8), r in 10.0f64..600.0, extra in 0.0f64..600.0) {
            let g = grid();
            let small = nearest_observation(cell, &obs, &LocalizationConfig::new(r).unwrap(), &g);
            let large = nearest_observation(cell, &obs, &LocalizationConfig::new(r + extra).unwrap(), &g);
            if small.is_some() {
                prop_assert_eq!(small, large);
            }
        }
    }
}
