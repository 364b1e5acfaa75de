//! The discretized bundle layer over S²: a pole-free plaquettization of the
//! sphere, the ground-state line bundle of H_r = r·σ, plaquette-summed Chern
//! numbers, the tautological U(1) cocycle of chart overlaps, the fiberwise
//! GNS transition unitaries it induces, and the Gelfand-ideal trivialization
//! checks.
//!
//! Curvature is computed the lattice way: unit link variables
//! u = ⟨Ψ_a, Ψ_b⟩/|⟨Ψ_a, Ψ_b⟩| on edges, plaquette phases
//! F = Arg ∏ u ∈ (−π, π], and c = (1/2π)·Σ F. Every edge is shared by
//! exactly two plaquettes with opposite directions, so the sum telescopes to
//! an integer no matter the per-point gauge; saturation guards catch grids
//! too coarse for the branch choice to be meaningful.
//!
//! The holonomy phase of the ground band around a geodesic polygon equals
//! −½ the oriented solid angle of the traversed boundary (the Bloch vector
//! of the lowest band of r·σ is −r). Plaquette boundaries are oriented so
//! the total flux comes out at +2π for power +1, i.e. the ground bundle has
//! Chern number +1, matching the continuum convention.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{AlgebraError, CStarAlgebra, PureState};
use crate::gns::{self, GnsError, InnerAutomorphism};
use crate::kadison::{transport_unitary, KadisonError};
use crate::numerics::{eigh, CMatrix, CVector, NumericsError, C64};
use crate::projgeom::{positive_section, ProjGeomError, Ray};
use thiserror::Error;

/// Membership cutoff for the chart O_v = { ϱ : |⟨v, Ψ_ϱ⟩| > CHART_CUTOFF }.
pub const CHART_CUTOFF: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("grid {n_theta}×{n_phi} too small (need n_theta ≥ 1, n_phi ≥ 3)")]
    InvalidGrid { n_theta: usize, n_phi: usize },
    #[error("link ({a},{b}) vanishes: |overlap| = {overlap:.3e}")]
    VanishingLink { a: usize, b: usize, overlap: f64 },
    #[error("plaquette {plaquette} phase {phase:.3} too close to ±π")]
    CurvatureSaturated { plaquette: usize, phase: f64 },
    #[error("total flux / 2π = {value} is not an integer")]
    NotInteger { value: f64 },
    #[error("grid point {point} lies in no chart")]
    UncoveredPoint { point: usize },
    #[error("section has {got} states for {expected} grid points")]
    PointCount { expected: usize, got: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    ProjGeom(#[from] ProjGeomError),
    #[error(transparent)]
    Gns(#[from] GnsError),
    #[error(transparent)]
    Kadison(#[from] KadisonError),
}

/// A closed plaquettization of S²: two pole vertices plus an n_theta×n_phi
/// lattice of ring vertices at θ = (i+½)π/n_theta, φ = 2πj/n_phi. Faces are
/// the ring quads plus two polar triangle fans, every boundary oriented
/// counterclockwise from outside.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    points: Vec<[f64; 3]>,
    plaquettes: Vec<Vec<usize>>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self, BundleError> {
        if n_theta < 1 || n_phi < 3 {
            return Err(BundleError::InvalidGrid { n_theta, n_phi });
        }
        let mut points = vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
        for i in 0..n_theta {
            let theta = (i as f64 + 0.5) * std::f64::consts::PI / n_theta as f64;
            for j in 0..n_phi {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
                points.push([
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ]);
            }
        }
        let ring = |i: usize, j: usize| 2 + i * n_phi + (j % n_phi);
        let mut plaquettes = Vec::new();
        for j in 0..n_phi {
            plaquettes.push(vec![0, ring(0, j + 1), ring(0, j)]);
        }
        for i in 0..n_theta - 1 {
            for j in 0..n_phi {
                plaquettes.push(vec![
                    ring(i, j),
                    ring(i, j + 1),
                    ring(i + 1, j + 1),
                    ring(i + 1, j),
                ]);
            }
        }
        for j in 0..n_phi {
            plaquettes.push(vec![1, ring(n_theta - 1, j), ring(n_theta - 1, j + 1)]);
        }
        Ok(SphereGrid {
            n_theta,
            n_phi,
            points,
            plaquettes,
        })
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        self.points[idx]
    }

    pub fn plaquettes(&self) -> &[Vec<usize>] {
        &self.plaquettes
    }

    /// Unique undirected edges appearing in plaquette boundaries.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut edges = BTreeSet::new();
        for p in &self.plaquettes {
            for t in 0..p.len() {
                let a = p[t];
                let b = p[(t + 1) % p.len()];
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges
    }

    /// V − E + F; equals 2 for every valid grid (closed surface of genus 0).
    pub fn euler_characteristic(&self) -> i64 {
        self.num_points() as i64 - self.edges().len() as i64 + self.plaquettes.len() as i64
    }

    /// (θ, φ) of the normalized vertex centroid; for CSV and heatmaps.
    pub fn plaquette_center(&self, idx: usize) -> (f64, f64) {
        let mut c = [0.0f64; 3];
        for &v in &self.plaquettes[idx] {
            for (cd, pd) in c.iter_mut().zip(self.points[v]) {
                *cd += pd;
            }
        }
        let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        let z = (c[2] / norm).clamp(-1.0, 1.0);
        let theta = z.acos();
        let mut phi = c[1].atan2(c[0]);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        (theta, phi)
    }
}

/// H_r = x·σ_x + y·σ_y + z·σ_z.
pub fn spin_hamiltonian(r: [f64; 3]) -> CMatrix {
    let [x, y, z] = r;
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(z, 0.0),
            C64::new(x, -y),
            C64::new(x, y),
            C64::new(-z, 0.0),
        ],
    )
}

/// The lowest eigenvector of H_r, phase-pinned by the eigensolver so the
/// section is a deterministic function of r. For unit r the eigenvalue
/// is exactly −1.
pub fn ground_vector(r: [f64; 3]) -> Result<CVector, NumericsError> {
    let eig = eigh(&spin_hamiltonian(r))?;
    Ok(eig.eigenvector(0))
}

/// A pure state of the fiber algebra at every grid point.
#[derive(Clone, Debug)]
pub struct StateSection {
    pub grid: SphereGrid,
    pub states: Vec<PureState>,
}

impl StateSection {
    pub fn new(grid: SphereGrid, states: Vec<PureState>) -> Result<Self, BundleError> {
        if states.len() != grid.num_points() {
            return Err(BundleError::PointCount {
                expected: grid.num_points(),
                got: states.len(),
            });
        }
        Ok(StateSection { grid, states })
    }

    pub fn vector(&self, idx: usize) -> &CVector {
        &self.states[idx].vector
    }
}

/// The ground-state section of r ↦ H_r over the grid, fiber algebra M₂.
pub fn ground_section(grid: &SphereGrid) -> Result<StateSection, BundleError> {
    let alg = CStarAlgebra::full_matrix(2);
    let mut states = Vec::with_capacity(grid.num_points());
    for idx in 0..grid.num_points() {
        let v = ground_vector(grid.point(idx))?;
        states.push(PureState::new(alg.clone(), 0, v)?);
    }
    StateSection::new(grid.clone(), states)
}

/// Lattice curvature data of a section at a given tensor power: per-edge
/// unit links on the canonical (low, high) direction and per-plaquette
/// phases F ∈ (−π, π]. Reversed traversal uses the conjugate link, so the
/// plaquette sum telescopes exactly.
#[derive(Clone, Debug)]
pub struct CurvatureField {
    pub power: i32,
    pub links: BTreeMap<(usize, usize), C64>,
    pub plaquette_phases: Vec<f64>,
}

impl CurvatureField {
    pub fn total_flux(&self) -> f64 {
        self.plaquette_phases.iter().sum()
    }
}

pub fn curvature_field(section: &StateSection, power: i32) -> Result<CurvatureField, BundleError> {
    let grid = &section.grid;
    let mut links = BTreeMap::new();
    for &(a, b) in &grid.edges() {
        let c = section.vector(a).dotc(section.vector(b));
        let overlap = c.norm();
        if overlap <= 1e-8 {
            return Err(BundleError::VanishingLink { a, b, overlap });
        }
        links.insert((a, b), (c / C64::from(overlap)).powi(power));
    }
    let mut plaquette_phases = Vec::with_capacity(grid.plaquettes().len());
    for (idx, p) in grid.plaquettes().iter().enumerate() {
        let mut holonomy = C64::new(1.0, 0.0);
        for t in 0..p.len() {
            let a = p[t];
            let b = p[(t + 1) % p.len()];
            let u = if a < b {
                links[&(a, b)]
            } else {
                links[&(b, a)].conj()
            };
            holonomy *= u;
        }
        let phase = holonomy.im.atan2(holonomy.re);
        if phase.abs() >= std::f64::consts::PI - 0.1 {
            return Err(BundleError::CurvatureSaturated {
                plaquette: idx,
                phase,
            });
        }
        plaquette_phases.push(phase);
    }
    Ok(CurvatureField {
        power,
        links,
        plaquette_phases,
    })
}

/// (1/2π)·Σ F, checked to be an integer to 1e−9 and returned exactly.
/// power p computes the Chern number of the p-th tensor power (negative p:
/// dual powers).
pub fn chern_number(section: &StateSection, power: i32) -> Result<i64, BundleError> {
    let field = curvature_field(section, power)?;
    let value = field.total_flux() / (2.0 * std::f64::consts::PI);
    let rounded = value.round();
    if (value - rounded).abs() > 1e-9 {
        return Err(BundleError::NotInteger { value });
    }
    Ok(rounded as i64)
}

/// The tautological cocycle of a chart family {O_v}: per chart the
/// positive-gauge representative P_{v,ϱ} of the fiber ray, per ordered
/// chart pair the U(1) overlap h_{v,w}(ϱ) = ⟨P_{v,ϱ}, P_{w,ϱ}⟩ on
/// O_v ∩ O_w.
#[derive(Clone, Debug)]
pub struct U1Cocycle {
    pub chart_vectors: Vec<CVector>,
    /// sections[v][ϱ] = Some(P_{v,ϱ}) when ϱ ∈ O_v.
    pub sections: Vec<Vec<Option<CVector>>>,
    /// phases[(v,w)] = [(ϱ, h_{v,w}(ϱ))] over the overlap, point-sorted.
    pub phases: BTreeMap<(usize, usize), Vec<(usize, C64)>>,
}

impl U1Cocycle {
    pub fn value(&self, v: usize, w: usize, point: usize) -> Option<C64> {
        let pv = self.sections[v][point].as_ref()?;
        let pw = self.sections[w][point].as_ref()?;
        Some(pv.dotc(pw))
    }

    /// max |h_{v,w}·h_{w,u} − h_{v,u}| over all chart triples and points of
    /// the triple overlaps.
    pub fn cech_closure_residual(&self) -> f64 {
        let k = self.chart_vectors.len();
        let n = self.sections.first().map(|s| s.len()).unwrap_or(0);
        let mut worst = 0.0f64;
        for v in 0..k {
            for w in 0..k {
                for u in 0..k {
                    for pt in 0..n {
                        let (Some(hvw), Some(hwu), Some(hvu)) = (
                            self.value(v, w, pt),
                            self.value(w, u, pt),
                            self.value(v, u, pt),
                        ) else {
                            continue;
                        };
                        worst = worst.max((hvw * hwu - hvu).norm());
                    }
                }
            }
        }
        worst
    }

    /// max ‖P_{v,ϱ} − h̄_{v,w}(ϱ)·P_{w,ϱ}‖ over overlaps: the transition
    /// condition tying the cocycle to the sections.
    pub fn transition_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for ((v, w), pts) in &self.phases {
            for &(pt, h) in pts {
                let pv = self.sections[*v][pt].as_ref().expect("overlap member");
                let pw = self.sections[*w][pt].as_ref().expect("overlap member");
                worst = worst.max((pv - pw * h.conj()).norm());
            }
        }
        worst
    }
}

pub fn tautological_cocycle(
    section: &StateSection,
    charts: &[CVector],
) -> Result<U1Cocycle, BundleError> {
    let n = section.grid.num_points();
    let mut sections: Vec<Vec<Option<CVector>>> = vec![vec![None; n]; charts.len()];
    for (pt, state) in section.states.iter().enumerate() {
        let ray = Ray::from_vector(&state.vector)?;
        let mut covered = false;
        for (row, chart) in sections.iter_mut().zip(charts) {
            let overlap = chart.dotc(ray.representative()).norm();
            if overlap > CHART_CUTOFF {
                row[pt] = Some(positive_section(chart, &ray)?);
                covered = true;
            }
        }
        if !covered {
            return Err(BundleError::UncoveredPoint { point: pt });
        }
    }
    let mut phases = BTreeMap::new();
    for v in 0..charts.len() {
        for w in 0..charts.len() {
            if v == w {
                continue;
            }
            let mut entries = Vec::new();
            for (pt, (pv, pw)) in sections[v].iter().zip(&sections[w]).enumerate() {
                if let (Some(pv), Some(pw)) = (pv, pw) {
                    entries.push((pt, pv.dotc(pw)));
                }
            }
            phases.insert((v, w), entries);
        }
    }
    Ok(U1Cocycle {
        chart_vectors: charts.to_vec(),
        sections,
        phases,
    })
}

/// Per-overlap fiber unitaries of the GNS bundle.
#[derive(Clone, Debug)]
pub struct BundleTransitions {
    pub unitaries: BTreeMap<(usize, usize), Vec<(usize, CMatrix)>>,
}

impl BundleTransitions {
    /// max ‖U_{v,w}(ϱ) − h̄_{v,w}(ϱ)·I‖: the transitions of a line-bundle
    /// fiber must be the conjugated cocycle times the identity.
    pub fn scalar_residual(&self, cocycle: &U1Cocycle) -> f64 {
        let mut worst = 0.0f64;
        for ((v, w), entries) in &self.unitaries {
            for (pt, u) in entries {
                let h = cocycle.value(*v, *w, *pt).expect("overlap member");
                let dim = u.nrows();
                let target = CMatrix::identity(dim, dim) * h.conj();
                worst = worst.max((u - target).norm());
            }
        }
        worst
    }

    /// max ‖U_{v,w}·U_{w,u} − U_{v,u}‖ over chart triples (Čech closure at
    /// the unitary level).
    pub fn cech_closure_residual(&self) -> f64 {
        let charts: BTreeSet<usize> = self.unitaries.keys().flat_map(|&(v, w)| [v, w]).collect();
        let lookup = |v: usize, w: usize, pt: usize| -> Option<&CMatrix> {
            self.unitaries
                .get(&(v, w))?
                .iter()
                .find(|(p, _)| *p == pt)
                .map(|(_, u)| u)
        };
        let mut worst = 0.0f64;
        for &v in &charts {
            for &w in &charts {
                for &u in &charts {
                    if v == w || w == u || v == u {
                        continue;
                    }
                    let Some(vw_entries) = self.unitaries.get(&(v, w)) else {
                        continue;
                    };
                    for (pt, uvw) in vw_entries {
                        let (Some(uwu), Some(uvu)) = (lookup(w, u, *pt), lookup(v, u, *pt)) else {
                            continue;
                        };
                        worst = worst.max((uvw * uwu - uvu).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Transition unitaries of the fiberwise GNS bundle, one per chart pair and
/// overlap point, each produced by the intertwiner of the identity
/// automorphism between the two chart gauges of the same fiber state.
pub fn gns_bundle_transitions(
    section: &StateSection,
    cocycle: &U1Cocycle,
) -> Result<BundleTransitions, BundleError> {
    let alg = section.states[0].algebra.clone();
    let id = InnerAutomorphism::identity(&alg);
    let mut unitaries = BTreeMap::new();
    for ((v, w), entries) in &cocycle.phases {
        let mut out = Vec::with_capacity(entries.len());
        for &(pt, _) in entries {
            let block = section.states[pt].block_index;
            let pv = cocycle.sections[*v][pt].as_ref().expect("overlap member");
            let pw = cocycle.sections[*w][pt].as_ref().expect("overlap member");
            let omega = PureState::new(alg.clone(), block, pw.clone())?;
            let psi = PureState::new(alg.clone(), block, pv.clone())?;
            let (_, u) = gns::intertwiner(&id, &omega, &psi)?;
            out.push((pt, u));
        }
        unitaries.insert((*v, *w), out);
    }
    Ok(BundleTransitions { unitaries })
}

/// Residuals of the Gelfand-ideal bundle trivialization over a chart
/// family: transporting each fiber ideal to the reference chart state must
/// land inside the reference ideal, and chart-change maps must preserve it.
#[derive(Clone, Debug)]
pub struct IdealBundleReport {
    /// dim 𝔑_ϱ per grid point (constant n(n−1) for rank-one fibers).
    pub ideal_dims: Vec<usize>,
    pub max_trivialization_residual: f64,
    pub max_transition_residual: f64,
}

/// For every point ϱ and chart v ∋ ϱ, χ = Ad(B_v·T_{v,ϱ}) with
/// T_{v,ϱ}: ψ_ϱ → ψ_v and B_v: ψ_v → ψ_ref (ref = chart 0) must map the
/// computed basis of 𝔑_ϱ into 𝔑_ref; for chart pairs the composite
/// χ_v ∘ χ_w⁻¹ = Ad(U_v·U_w*) must preserve 𝔑_ref.
pub fn ideal_bundle_check(
    section: &StateSection,
    charts: &[CVector],
) -> Result<IdealBundleReport, BundleError> {
    let alg = section.states[0].algebra.clone();
    let chart_states: Vec<PureState> = charts
        .iter()
        .map(|v| PureState::new(alg.clone(), 0, v.clone()))
        .collect::<Result<_, _>>()?;
    let reference = &chart_states[0];
    let ref_ideal = gns::gelfand_ideal(&reference.to_state())?;

    // B_v: ψ_v → ψ_ref per chart
    let to_reference: Vec<CMatrix> = chart_states
        .iter()
        .map(|cs| transport_unitary(cs, reference))
        .collect::<Result<_, _>>()?;

    let n = section.grid.num_points();
    let mut ideal_dims = Vec::with_capacity(n);
    let mut max_trivialization = 0.0f64;
    let mut max_transition = 0.0f64;
    for pt in 0..n {
        let state = &section.states[pt];
        let ideal = gns::gelfand_ideal(&state.to_state())?;
        ideal_dims.push(ideal.len());
        let mut chis: Vec<InnerAutomorphism> = Vec::new();
        for (v, chart_state) in chart_states.iter().enumerate() {
            if charts[v].dotc(&state.vector).norm() <= CHART_CUTOFF {
                continue;
            }
            let t = transport_unitary(state, chart_state)?;
            let u = &to_reference[v] * t;
            let chi = InnerAutomorphism::new(alg.clone(), vec![u])?;
            for b in &ideal {
                let moved = chi.apply(b)?;
                max_trivialization = max_trivialization.max(gns::span_residual(&ref_ideal, &moved));
            }
            chis.push(chi);
        }
        for a in &chis {
            for b in &chis {
                // Ad(U_a U_b*) on the reference ideal
                let u = &a.unitaries[0] * b.unitaries[0].adjoint();
                let composite = InnerAutomorphism::new(alg.clone(), vec![u])?;
                for el in &ref_ideal {
                    let moved = composite.apply(el)?;
                    max_transition = max_transition.max(gns::span_residual(&ref_ideal, &moved));
                }
            }
        }
    }
    Ok(IdealBundleReport {
        ideal_dims,
        max_trivialization_residual: max_trivialization,
        max_transition_residual: max_transition,
    })
}
