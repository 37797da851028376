use super::ModelError;
use crate::optimize::golden_section_max;
use std::f64::consts::PI;

/// Planar ring of chromophores with alternating intra/inter-dimer spacing.
///
/// Site `i` and `i+1` form an intra-dimer pair when `i` is even.
#[derive(Debug, Clone, PartialEq)]
pub struct RingGeometry {
    pub n_sites: usize,
    /// Å
    pub radius: f64,
    /// Å
    pub intra_dimer_distance: f64,
    /// Å
    pub inter_dimer_distance: f64,
    /// degrees
    pub intra_dimer_angle: f64,
    /// degrees
    pub inter_dimer_angle: f64,
    /// Å
    pub positions: Vec<[f64; 3]>,
    /// unit vectors
    pub dipoles: Vec<[f64; 3]>,
    /// Arc angles (rad) subtended by the intra and inter bonds.
    pub arc_angles: (f64, f64),
}

impl Default for RingGeometry {
    fn default() -> Self {
        build_geometry(16, 23.0, (9.1, 8.9), (167.5, 147.5)).expect("default geometry is valid")
    }
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl RingGeometry {
    /// Euclidean distance between two sites in Å.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let r = sub(&self.positions[i], &self.positions[j]);
        dot(&r, &r).sqrt()
    }

    /// Arc length along the ring between two sites (shorter way), in Å.
    pub fn arc_distance(&self, i: usize, j: usize) -> f64 {
        let phi = |k: usize| self.positions[k][1].atan2(self.positions[k][0]);
        let mut d = (phi(i) - phi(j)).abs();
        if d > PI {
            d = 2.0 * PI - d;
        }
        self.radius * d
    }

    pub fn dipole_dot(&self, i: usize, j: usize) -> f64 {
        dot(&self.dipoles[i], &self.dipoles[j])
    }
}

/// Solve for the two arc angles, place the sites and orient the dipoles.
///
/// The arc angles sum to 4π/N. Their split is chosen so that the realized
/// chords match the requested distances in the least-squares sense; the radius
/// is kept exact. Dipoles lie in the ring plane. The even dipole points along
/// the local tangent rotated by a tilt χ₀, the odd dipole is flipped and
/// rotated so that the intra angle (even→odd) and the inter angle (odd→next
/// even) come out exactly as requested; the tilt splits the residual
/// symmetrically.
pub fn build_geometry(
    n_sites: usize,
    radius: f64,
    distances: (f64, f64),
    angles: (f64, f64),
) -> Result<RingGeometry, ModelError> {
    if n_sites < 4 || n_sites % 2 != 0 {
        return Err(ModelError::InvalidSiteCount(n_sites));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(ModelError::InvalidRadius(radius));
    }
    let (d1, d2) = distances;
    if !(d1 > 0.0 && d2 > 0.0) || !d1.is_finite() || !d2.is_finite() {
        return Err(ModelError::InvalidDistance(d1, d2));
    }
    let chords = 0.5 * n_sites as f64 * (d1 + d2);
    let circumference = 2.0 * PI * radius;
    if chords > circumference {
        return Err(ModelError::ChordsExceedCircumference { chords, circumference });
    }
    for (name, a) in [("intra_dimer_angle", angles.0), ("inter_dimer_angle", angles.1)] {
        if !a.is_finite() {
            return Err(ModelError::InvalidParameter { name, value: a });
        }
    }

    let total = 4.0 * PI / n_sites as f64;
    let chord = |theta: f64| 2.0 * radius * (0.5 * theta).sin();
    let misfit = |t1: f64| {
        let e1 = chord(t1) - d1;
        let e2 = chord(total - t1) - d2;
        -(e1 * e1 + e2 * e2)
    };
    let theta1 = golden_section_max(misfit, 0.0, total, 1e-15);
    let theta2 = total - theta1;

    let mut positions = Vec::with_capacity(n_sites);
    let mut phis = Vec::with_capacity(n_sites);
    let mut phi = 0.0f64;
    for i in 0..n_sites {
        phis.push(phi);
        positions.push([radius * phi.cos(), radius * phi.sin(), 0.0]);
        phi += if i % 2 == 0 { theta1 } else { theta2 };
    }

    // Even dipole at φ + π/2 + χ₀, odd dipole at φ + 3π/2 + χ₀ + δ.
    // intra angle = π - (θ₁ + δ), inter angle = π - (θ₂ - δ).
    let a1 = angles.0.to_radians();
    let a2 = angles.1.to_radians();
    let delta = 0.5 * ((theta2 - theta1) + (a2 - a1));
    let chi0 = -0.5 * delta;
    let dipoles = phis
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let ang = if i % 2 == 0 {
                p + 0.5 * PI + chi0
            } else {
                p + 1.5 * PI + chi0 + delta
            };
            [ang.cos(), ang.sin(), 0.0]
        })
        .collect();

    Ok(RingGeometry {
        n_sites,
        radius,
        intra_dimer_distance: d1,
        inter_dimer_distance: d2,
        intra_dimer_angle: angles.0,
        inter_dimer_angle: angles.1,
        positions,
        dipoles,
        arc_angles: (theta1, theta2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle_deg(a: &[f64; 3], b: &[f64; 3]) -> f64 {
        dot(a, b).clamp(-1.0, 1.0).acos().to_degrees()
    }

    #[test]
    fn default_angles_are_exact() {
        let g = RingGeometry::default();
        for i in 0..16 {
            let j = (i + 1) % 16;
            let want = if i % 2 == 0 { 167.5 } else { 147.5 };
            let got = angle_deg(&g.dipoles[i], &g.dipoles[j]);
            assert!((got - want).abs() < 1e-6, "bond {i}: {got}");
        }
    }

    #[test]
    fn arcs_fit_distances() {
        let g = RingGeometry::default();
        let (t1, t2) = g.arc_angles;
        assert!((t1.to_degrees() - 22.754).abs() < 1e-3);
        assert!((t2.to_degrees() - 22.246).abs() < 1e-3);
        assert!((g.distance(0, 1) - 9.074).abs() < 1e-3);
        assert!((g.distance(1, 2) - 8.874).abs() < 1e-3);
    }

    #[test]
    fn c8_symmetry() {
        let g = RingGeometry::default();
        let rot = 2.0 * (g.arc_angles.0 + g.arc_angles.1) / 2.0;
        let (c, s) = (rot.cos(), rot.sin());
        let r = |v: &[f64; 3]| [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]];
        for i in 0..16 {
            let j = (i + 2) % 16;
            let p = r(&g.positions[i]);
            let d = r(&g.dipoles[i]);
            for k in 0..3 {
                assert!((p[k] - g.positions[j][k]).abs() < 1e-9);
                assert!((d[k] - g.dipoles[j][k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build_geometry(15, 23.0, (9.1, 8.9), (167.5, 147.5)), Err(ModelError::InvalidSiteCount(15)));
        assert_eq!(build_geometry(2, 23.0, (9.1, 8.9), (167.5, 147.5)), Err(ModelError::InvalidSiteCount(2)));
        assert!(matches!(
            build_geometry(16, 10.0, (9.1, 8.9), (167.5, 147.5)),
            Err(ModelError::ChordsExceedCircumference { .. })
        ));
        assert!(matches!(build_geometry(16, -1.0, (9.1, 8.9), (0.0, 0.0)), Err(ModelError::InvalidRadius(_))));
    }
}
