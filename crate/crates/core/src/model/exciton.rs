use super::geometry::{dot, sub};
use super::{DisorderShifts, ModelError, RingGeometry};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    /// cm⁻¹
    pub j1_intra: f64,
    /// cm⁻¹
    pub j2_inter: f64,
    /// Å³·cm⁻¹
    pub dipole_constant: f64,
    /// cm⁻¹
    pub site_energy_baseline: f64,
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self { j1_intra: 594.0, j2_inter: 491.0, dipole_constant: 640_725.0, site_energy_baseline: 0.0 }
    }
}

/// Real symmetric exciton matrix K in cm⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitonMatrix {
    pub k: DMatrix<f64>,
}

impl ExcitonMatrix {
    pub fn n(&self) -> usize {
        self.k.nrows()
    }

    /// K with the same constant added to every site energy.
    pub fn shifted(&self, c: f64) -> Self {
        let mut k = self.k.clone();
        for i in 0..k.nrows() {
            k[(i, i)] += c;
        }
        Self { k }
    }
}

/// Point-dipole coupling between sites `i` and `j` in cm⁻¹.
///
/// W = C [ (d̂ᵢ·d̂ⱼ)/r³ − 3 (d̂ᵢ·r)(d̂ⱼ·r)/r⁵ ]
pub fn dipole_coupling(geom: &RingGeometry, i: usize, j: usize, c: f64) -> Result<f64, ModelError> {
    let r = sub(&geom.positions[i], &geom.positions[j]);
    let r2 = dot(&r, &r);
    if r2 == 0.0 {
        return Err(ModelError::CoincidentSites(i, j));
    }
    let rn = r2.sqrt();
    let (di, dj) = (&geom.dipoles[i], &geom.dipoles[j]);
    Ok(c * (dot(di, dj) / (r2 * rn) - 3.0 * dot(di, &r) * dot(dj, &r) / (r2 * r2 * rn)))
}

/// Assemble K: baseline plus site shifts on the diagonal, alternating J₁/J₂
/// plus bond shifts on nearest neighbours (even bond = intra-dimer), and
/// clean-geometry dipole couplings everywhere else.
pub fn build_exciton_matrix(
    geom: &RingGeometry,
    params: &CouplingParams,
    shifts: &DisorderShifts,
) -> Result<ExcitonMatrix, ModelError> {
    let n = geom.n_sites;
    if shifts.site.len() != n || shifts.bond.len() != n {
        return Err(ModelError::ShiftLength { got: shifts.site.len().min(shifts.bond.len()), expected: n });
    }
    for (name, value) in [
        ("j1_intra", params.j1_intra),
        ("j2_inter", params.j2_inter),
        ("site_energy_baseline", params.site_energy_baseline),
    ] {
        if !value.is_finite() {
            return Err(ModelError::InvalidParameter { name, value });
        }
    }
    if !(params.dipole_constant > 0.0) || !params.dipole_constant.is_finite() {
        return Err(ModelError::InvalidParameter { name: "dipole_constant", value: params.dipole_constant });
    }

    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = params.site_energy_baseline + shifts.site[i];
        for j in (i + 1)..n {
            let gap = j - i;
            let ring_gap = gap.min(n - gap);
            let v = if ring_gap == 1 {
                // bond index is the lower end going round the ring
                let b = if gap == 1 { i } else { j };
                let base = if b % 2 == 0 { params.j1_intra } else { params.j2_inter };
                base + shifts.bond[b]
            } else {
                dipole_coupling(geom, i, j, params.dipole_constant)?
            };
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(ExcitonMatrix { k })
}
