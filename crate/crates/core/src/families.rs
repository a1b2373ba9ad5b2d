//! Nested cube families used as growth probes.

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::geometry::{unravel, Cube, CubeFamily};

/// Splits `cube` into `2^(depth·n)` congruent subcubes.
pub fn dyadic_tiling(cube: &Cube, depth: u32) -> Vec<Cube> {
    let n = cube.dim();
    let per_side = 1usize << depth;
    let side = cube.side / per_side as f64;
    (0..per_side.pow(n as u32))
        .map(|k| {
            let coords = unravel(k, n, per_side);
            let corner = cube
                .corner
                .iter()
                .zip(&coords)
                .map(|(&a, &c)| a + c as f64 * side)
                .collect();
            Cube { corner, side }
        })
        .collect()
}

/// Cubes grouped by the nesting level at which they join the family.
/// The family at level `ℓ` is the union of groups `0..=ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedFamilies {
    pub groups: Vec<Vec<Cube>>,
}

impl NestedFamilies {
    /// Dyadic annuli: level 0 tiles `[-R0, R0]^n` with cubes of side
    /// `R0 / 2^depth`; level `ℓ` adds the shell between `R_{ℓ-1}` and
    /// `R_ℓ = 2^ℓ R0`, tiled with cubes of side `R_ℓ / 2^depth`.
    pub fn annular(dim: usize, r0: f64, depth: u32, levels: usize) -> Result<Self> {
        if levels == 0 {
            return precondition("at least one nesting level is required");
        }
        if depth == 0 {
            return precondition("annular families need depth >= 1");
        }
        let base = Cube::centered(dim, r0)?;
        let mut groups = vec![dyadic_tiling(&base, depth)];
        for l in 1..levels {
            let outer_r = r0 * (1u64 << l) as f64;
            let inner = Cube::centered(dim, outer_r / 2.0)?;
            // outer cube of half-width R_ℓ has 2^(depth+1) tiles per side
            let shell = dyadic_tiling(&Cube::centered(dim, outer_r)?, depth + 1)
                .into_iter()
                .filter(|c| !inner.contains_cube(c))
                .collect();
            groups.push(shell);
        }
        Ok(NestedFamilies { groups })
    }

    /// A single group per level, for probes whose levels are separate
    /// families rather than growing ones.
    pub fn from_groups(groups: Vec<Vec<Cube>>) -> Self {
        NestedFamilies { groups }
    }

    pub fn levels(&self) -> usize {
        self.groups.len()
    }

    /// The family of all cubes up to and including `level`.
    pub fn family(&self, level: usize) -> Result<CubeFamily> {
        CubeFamily::new(self.groups[..=level].iter().flatten().cloned().collect())
    }

    /// Every cube tagged with the level it joins at.
    pub fn tagged(&self) -> impl Iterator<Item = (usize, &Cube)> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(l, g)| g.iter().map(move |c| (l, c)))
    }
}

/// Radii `R0^(2^ℓ)` for `ℓ = 0..levels`: each level doubles `log R`.
pub fn log_doubling_radii(r0: f64, levels: usize) -> Result<Vec<f64>> {
    if !(r0 > 1.0) {
        return precondition(format!("log-doubling radii need R0 > 1, got {r0}"));
    }
    let radii: Vec<f64> = (0..levels).map(|l| r0.powf((1u64 << l) as f64)).collect();
    if radii.iter().any(|r| !r.is_finite()) {
        return precondition("radius overflow; use fewer levels or a smaller R0");
    }
    Ok(radii)
}

/// Shrinking cubes for the local `A_{p(·)}` probe: at level `ℓ`, cubes of
/// side `S · 2^-(depth + shrink·ℓ)` centred at the points of the lattice of
/// spacing `S / 2^depth` that lie in the domain (side `S`).
pub fn shrinking_centered(domain: &Cube, depth: u32, shrink: u32, levels: usize) -> Vec<Vec<Cube>> {
    let n = domain.dim();
    let per_side = (1usize << depth) + 1;
    let spacing = domain.side / (1u64 << depth) as f64;
    let centers: Vec<Vec<f64>> = (0..per_side.pow(n as u32))
        .map(|k| {
            unravel(k, n, per_side)
                .iter()
                .zip(&domain.corner)
                .map(|(&c, &a)| a + c as f64 * spacing)
                .collect()
        })
        .collect();
    (0..levels)
        .map(|l| {
            let side = domain.side / 2f64.powi((depth + shrink * l as u32) as i32);
            centers
                .iter()
                .map(|c| Cube { corner: c.iter().map(|x| x - side / 2.0).collect(), side })
                .filter(|q| domain.contains_cube(q))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiling_covers_cube() {
        let q = Cube::new(vec![1.0, -2.0], 4.0).unwrap();
        let tiles = dyadic_tiling(&q, 2);
        assert_eq!(tiles.len(), 16);
        let fam = CubeFamily::new(tiles).unwrap();
        assert!((fam.total_volume() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn annular_levels_are_disjoint_and_fill_the_box() {
        for dim in [1, 2] {
            let nest = NestedFamilies::annular(dim, 4.0, 2, 4).unwrap();
            let fam = nest.family(3).unwrap();
            let expected = (2.0 * 4.0 * 8.0f64).powi(dim as i32);
            assert!((fam.total_volume() - expected).abs() < 1e-9);
        }
        let nest = NestedFamilies::annular(1, 1.0, 2, 3).unwrap();
        assert_eq!(nest.groups.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 4, 4]);
    }

    #[test]
    fn radii_double_in_log() {
        let r = log_doubling_radii(16.0, 3).unwrap();
        assert_eq!(r, vec![16.0, 256.0, 65536.0]);
        assert!(log_doubling_radii(1.0, 2).is_err());
    }

    #[test]
    fn shrinking_cubes_stay_inside() {
        let dom = Cube::centered(1, 1.0).unwrap();
        let levels = shrinking_centered(&dom, 2, 1, 3);
        // lattice points -1, -0.5, 0, 0.5, 1; the end points fall outside
        assert_eq!(levels[0].len(), 3);
        assert!(levels[2].iter().any(|q| q.contains_open(&[0.0])));
        assert!((levels[2][0].side - 2.0 / 16.0).abs() < 1e-15);
    }
}
