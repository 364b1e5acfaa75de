//! One runner per scenario kind. Each parses its parameter record (strict
//! schema), validates ranges before computing (range failures are input
//! errors), runs the computation at the requested seed, and returns results
//! plus a checks table; library errors surfacing mid-computation are
//! internal numeric failures.

use gnslab::algebra::{evaluate, state_norm_distance, AlgebraElement, CStarAlgebra, PureState};
use gnslab::bundles::{
    chern_number, curvature_field, gns_bundle_transitions, ground_section, ground_vector,
    ideal_bundle_check, tautological_cocycle, SphereGrid,
};
use gnslab::chain::{
    ground_state_inequality, interaction_distance, local_state_distance, sector_witness,
    spectral_gap, FieldConfig, LocalOperator, ProductGroundState,
};
use gnslab::gns::gns_construct_with;
use gnslab::kadison::{
    general_interpolant, kadison_solve, rotation_unitary, Flavor, InterpolationProblem,
};
use gnslab::ktheory::{
    colimit_matrix_check, homotopy_group, k_theory, q_contains, sn_from_type, UHFType,
    UnitaryFamily,
};
use gnslab::numerics::{operator_norm, CMatrix, NumericPolicy, C64};
use gnslab::projgeom::{d_chordal, d_fubini_study, d_gap, gap_via_projection, ray_product, Ray};
use gnslab::sampling;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{check, check_eq, Check};
use crate::scenario::Kind;
use crate::svg;

pub enum Failure {
    /// Bad parameters or anything else decided before computation: exit 2.
    Input(String),
    /// The computation itself could not be completed: exit 3.
    Numeric(String),
}

pub struct RunOutcome {
    pub results: Value,
    pub checks: Vec<Check>,
    /// (file name, content) pairs written under --csv / --svg.
    pub csv: Vec<(String, String)>,
    pub svg: Vec<(String, String)>,
}

impl RunOutcome {
    fn new(results: Value, checks: Vec<Check>) -> RunOutcome {
        RunOutcome {
            results,
            checks,
            csv: Vec::new(),
            svg: Vec::new(),
        }
    }
}

pub fn run(
    kind: Kind,
    seed: u64,
    params: Value,
    policy: &NumericPolicy,
) -> Result<RunOutcome, Failure> {
    match kind {
        Kind::Metrics => run_metrics(seed, params),
        Kind::Gns => run_gns(seed, params, policy),
        Kind::Kadison => run_kadison(seed, params),
        Kind::Chern => run_chern(params),
        Kind::Gnsbundle => run_gnsbundle(params),
        Kind::Chain => run_chain(seed, params),
        Kind::Ktheory => run_ktheory(params),
    }
}

fn parse_params<T: for<'de> Deserialize<'de>>(kind: Kind, params: Value) -> Result<T, Failure> {
    let params = if params.is_null() {
        Value::Object(serde_json::Map::new())
    } else {
        params
    };
    serde_json::from_value(params)
        .map_err(|e| Failure::Input(format!("{kind} params do not match the schema: {e}")))
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn numeric(e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(e.to_string())
}

// ---------------------------------------------------------------- metrics

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricsParams {
    #[serde(default = "MetricsParams::default_dim")]
    dim: usize,
    #[serde(default = "MetricsParams::default_pairs")]
    pairs: usize,
}

impl MetricsParams {
    fn default_dim() -> usize {
        8
    }
    fn default_pairs() -> usize {
        2000
    }
}

fn run_metrics(seed: u64, params: Value) -> Result<RunOutcome, Failure> {
    let p: MetricsParams = parse_params(Kind::Metrics, params)?;
    if !(2..=32).contains(&p.dim) {
        return Err(input(format!(
            "metrics dim must be in 2..=32, got {}",
            p.dim
        )));
    }
    if !(1..=200_000).contains(&p.pairs) {
        return Err(input(format!(
            "metrics pairs must be in 1..=200000, got {}",
            p.pairs
        )));
    }
    let fs_factor = std::f64::consts::SQRT_2 * std::f64::consts::PI / 4.0;
    let alg = CStarAlgebra::full_matrix(p.dim);
    let mut rng = sampling::rng(seed);
    let mut slack_chd_fs = 0.0f64;
    let mut slack_fs_chd = 0.0f64;
    let mut slack_chd_gap = 0.0f64;
    let mut slack_gap_chd = 0.0f64;
    let mut gap_formula_dev = 0.0f64;
    let mut transition_dev = 0.0f64;
    for _ in 0..p.pairs {
        let x = sampling::random_unit_vector(&mut rng, p.dim);
        let y = sampling::random_unit_vector(&mut rng, p.dim);
        let k = Ray::new(x.clone()).map_err(numeric)?;
        let l = Ray::new(y.clone()).map_err(numeric)?;
        let chd = d_chordal(&k, &l).map_err(numeric)?;
        let fs = d_fubini_study(&k, &l).map_err(numeric)?;
        let gap = d_gap(&k, &l).map_err(numeric)?;
        slack_chd_fs = slack_chd_fs.max(chd - fs);
        slack_fs_chd = slack_fs_chd.max(fs - fs_factor * chd);
        slack_chd_gap = slack_chd_gap.max(chd / std::f64::consts::SQRT_2 - gap);
        slack_gap_chd = slack_gap_chd.max(gap - chd);
        gap_formula_dev =
            gap_formula_dev.max((gap - gap_via_projection(&k, &l).map_err(numeric)?).abs());
        let prod = ray_product(&k, &l).map_err(numeric)?;
        let sx = PureState::new(alg.clone(), 0, x)
            .map_err(numeric)?
            .to_state();
        let sy = PureState::new(alg.clone(), 0, y)
            .map_err(numeric)?
            .to_state();
        let dist = state_norm_distance(&sx, &sy).map_err(numeric)?;
        transition_dev = transition_dev.max((prod * prod - (1.0 - 0.25 * dist * dist)).abs());
    }
    let checks = vec![
        check("chordal <= fubini-study", slack_chd_fs, 1e-12),
        check("fubini-study <= (sqrt2 pi/4) chordal", slack_fs_chd, 1e-12),
        check("chordal/sqrt2 <= gap", slack_chd_gap, 1e-12),
        check("gap <= chordal", slack_gap_chd, 1e-12),
        check("gap closed form vs operator norm", gap_formula_dev, 1e-10),
        check("transition probability identity", transition_dev, 1e-10),
    ];
    let results = json!({
        "dim": p.dim,
        "pairs": p.pairs,
        "max_slack_chordal_vs_fubini_study": slack_chd_fs,
        "max_slack_fubini_study_vs_chordal": slack_fs_chd,
        "max_slack_chordal_vs_gap": slack_chd_gap,
        "max_slack_gap_vs_chordal": slack_gap_chd,
        "max_gap_formula_deviation": gap_formula_dev,
        "max_transition_identity_deviation": transition_dev,
    });
    Ok(RunOutcome::new(results, checks))
}

// -------------------------------------------------------------------- gns

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GnsParams {
    #[serde(default = "GnsParams::default_block_dims")]
    block_dims: Vec<usize>,
    #[serde(default)]
    block: usize,
    #[serde(default = "GnsParams::default_samples")]
    samples: usize,
}

impl GnsParams {
    fn default_block_dims() -> Vec<usize> {
        vec![3]
    }
    fn default_samples() -> usize {
        40
    }
}

fn run_gns(seed: u64, params: Value, policy: &NumericPolicy) -> Result<RunOutcome, Failure> {
    let p: GnsParams = parse_params(Kind::Gns, params)?;
    if p.block_dims.is_empty() || p.block_dims.contains(&0) {
        return Err(input("gns block_dims must be nonempty positive integers"));
    }
    let total: usize = p.block_dims.iter().sum();
    if total > 16 {
        return Err(input(format!(
            "gns total block dimension {total} exceeds 16"
        )));
    }
    if p.block >= p.block_dims.len() {
        return Err(input(format!(
            "gns block index {} out of range for {} blocks",
            p.block,
            p.block_dims.len()
        )));
    }
    if !(1..=1000).contains(&p.samples) {
        return Err(input("gns samples must be in 1..=1000"));
    }
    let n_block = p.block_dims[p.block];
    let alg = CStarAlgebra::new(p.block_dims.clone()).map_err(numeric)?;
    let mut rng = sampling::rng(seed);
    let vector = sampling::random_unit_vector(&mut rng, n_block);
    let state = PureState::new(alg.clone(), p.block, vector)
        .map_err(numeric)?
        .to_state();
    let data = gns_construct_with(policy, &state).map_err(numeric)?;
    let commutant = data.commutant_dimension_with(policy).map_err(numeric)?;

    let mut reproduction_dev = 0.0f64;
    for _ in 0..p.samples {
        let coeffs = sampling::random_vector(&mut rng, alg.total_dim());
        let a = AlgebraElement::from_coefficients(&alg, &coeffs).map_err(numeric)?;
        let pi_a = data.represent(&a);
        let lhs = data.cyclic.dotc(&(&pi_a * &data.cyclic));
        let rhs = evaluate(&state, &a).map_err(numeric)?;
        reproduction_dev = reproduction_dev.max((lhs - rhs).norm());
    }
    // pure state: H has the block's dimension, the ideal everything that
    // kills the vector (all other blocks free), the commutant scalars only
    let ideal_expected = alg.total_dim() - n_block;
    let checks = vec![
        check_eq(
            "hilbert_dim = block dimension",
            data.hilbert_dim as i64,
            n_block as i64,
        ),
        check_eq(
            "gelfand ideal dimension",
            data.ideal_basis.len() as i64,
            ideal_expected as i64,
        ),
        check_eq("commutant dimension (irreducible)", commutant as i64, 1),
        check(
            "cyclic vector normalized",
            (data.cyclic.norm() - 1.0).abs(),
            1e-12,
        ),
        check(
            "state reproduction <omega, pi(A) omega>",
            reproduction_dev,
            1e-10,
        ),
    ];
    let results = json!({
        "block_dims": p.block_dims,
        "block": p.block,
        "samples": p.samples,
        "hilbert_dim": data.hilbert_dim,
        "ideal_dim": data.ideal_basis.len(),
        "commutant_dim": commutant,
        "max_reproduction_deviation": reproduction_dev,
    });
    Ok(RunOutcome::new(results, checks))
}

// ---------------------------------------------------------------- kadison

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum FlavorParam {
    General,
    SelfAdjoint,
    Unitary,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KadisonParams {
    #[serde(default = "KadisonParams::default_dim")]
    dim: usize,
    #[serde(default = "KadisonParams::default_n")]
    n: usize,
    #[serde(default = "KadisonParams::default_problems")]
    problems: usize,
    #[serde(default = "KadisonParams::default_flavor")]
    flavor: FlavorParam,
}

impl KadisonParams {
    fn default_dim() -> usize {
        8
    }
    fn default_n() -> usize {
        2
    }
    fn default_problems() -> usize {
        200
    }
    fn default_flavor() -> FlavorParam {
        FlavorParam::General
    }
}

fn run_kadison(seed: u64, params: Value) -> Result<RunOutcome, Failure> {
    let p: KadisonParams = parse_params(Kind::Kadison, params)?;
    if !(2..=16).contains(&p.dim) {
        return Err(input(format!(
            "kadison dim must be in 2..=16, got {}",
            p.dim
        )));
    }
    if !(1..=4).contains(&p.n) || p.n > p.dim {
        return Err(input(format!(
            "kadison n must be in 1..=4 and <= dim, got {}",
            p.n
        )));
    }
    if !(1..=10_000).contains(&p.problems) {
        return Err(input("kadison problems must be in 1..=10000"));
    }
    let mut rng = sampling::rng(seed);
    let mut worst_residual = 0.0f64; // relative to 1 + max ||y||
    let mut chain_violation = 0.0f64;
    let mut flavor_defect = 0.0f64;
    for _ in 0..p.problems {
        let xs: Vec<_> = (0..p.n)
            .map(|_| sampling::random_unit_vector(&mut rng, p.dim))
            .collect();
        match p.flavor {
            FlavorParam::General => {
                let ys: Vec<_> = (0..p.n)
                    .map(|_| {
                        sampling::random_unit_vector(&mut rng, p.dim)
                            * C64::from(rng.random_range(0.2..1.5))
                    })
                    .collect();
                let gi = general_interpolant(&xs, &ys).map_err(numeric)?;
                let scale = 1.0 + ys.iter().map(|y| y.norm()).fold(0.0f64, f64::max);
                for (x, y) in xs.iter().zip(&ys) {
                    worst_residual = worst_residual.max((&gi.compressed * x - y).norm() / scale);
                }
                let a_norm = operator_norm(&gi.compressed).map_err(numeric)?;
                let t_norm = operator_norm(&gi.t).map_err(numeric)?;
                let z_max = gi.zs.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
                let bound = (2.0 * p.n as f64).sqrt() * z_max;
                chain_violation = chain_violation.max(a_norm - t_norm).max(t_norm - bound);
            }
            FlavorParam::SelfAdjoint => {
                let h = sampling::random_hermitian(&mut rng, p.dim);
                let ys: Vec<_> = xs.iter().map(|x| &h * x).collect();
                let problem =
                    InterpolationProblem::new(p.dim, xs.clone(), ys.clone(), Flavor::SelfAdjoint)
                        .map_err(numeric)?;
                let a = kadison_solve(&problem).map_err(numeric)?;
                let block = &a.blocks[0];
                let scale = 1.0 + ys.iter().map(|y| y.norm()).fold(0.0f64, f64::max);
                for (x, y) in xs.iter().zip(&ys) {
                    worst_residual = worst_residual.max((block * x - y).norm() / scale);
                }
                flavor_defect =
                    flavor_defect.max(operator_norm(&(block - block.adjoint())).map_err(numeric)?);
            }
            FlavorParam::Unitary => {
                let q = sampling::random_unitary(&mut rng, p.dim);
                let ys: Vec<_> = xs.iter().map(|x| &q * x).collect();
                let problem =
                    InterpolationProblem::new(p.dim, xs.clone(), ys.clone(), Flavor::Unitary)
                        .map_err(numeric)?;
                let a = kadison_solve(&problem).map_err(numeric)?;
                let block = &a.blocks[0];
                let scale = 1.0 + ys.iter().map(|y| y.norm()).fold(0.0f64, f64::max);
                for (x, y) in xs.iter().zip(&ys) {
                    worst_residual = worst_residual.max((block * x - y).norm() / scale);
                }
                let id = CMatrix::identity(p.dim, p.dim);
                flavor_defect = flavor_defect
                    .max(operator_norm(&(block.adjoint() * block - id)).map_err(numeric)?);
            }
        }
    }
    // the rotation family: U x = y with ||I - U|| = ||x - y||
    let mut rotation_dev = 0.0f64;
    for _ in 0..50 {
        let x = sampling::random_unit_vector(&mut rng, p.dim);
        let y = sampling::random_unit_vector(&mut rng, p.dim);
        let u = rotation_unitary(&x, &y);
        rotation_dev = rotation_dev.max((&u * &x - &y).norm());
        let id = CMatrix::identity(p.dim, p.dim);
        let norm_id_u = operator_norm(&(&id - &u)).map_err(numeric)?;
        rotation_dev = rotation_dev.max((norm_id_u - (&x - &y).norm()).abs());
    }
    let flavor_name = match p.flavor {
        FlavorParam::General => "general",
        FlavorParam::SelfAdjoint => "self_adjoint",
        FlavorParam::Unitary => "unitary",
    };
    let mut checks = vec![
        check("interpolation residual (relative)", worst_residual, 1e-9),
        check(
            "rotation unitary: maps x to y, ||I-U|| = ||x-y||",
            rotation_dev,
            1e-9,
        ),
    ];
    match p.flavor {
        FlavorParam::General => {
            checks.push(check(
                "norm chain ||A|| <= ||T|| <= sqrt(2n) max||z||",
                chain_violation,
                1e-10,
            ));
        }
        FlavorParam::SelfAdjoint => {
            checks.push(check("solutions Hermitian", flavor_defect, 1e-9));
        }
        FlavorParam::Unitary => {
            checks.push(check("solutions unitary", flavor_defect, 1e-9));
        }
    }
    let results = json!({
        "dim": p.dim,
        "n": p.n,
        "problems": p.problems,
        "flavor": flavor_name,
        "max_relative_residual": worst_residual,
        "max_norm_chain_violation": chain_violation,
        "max_flavor_defect": flavor_defect,
        "max_rotation_identity_deviation": rotation_dev,
    });
    Ok(RunOutcome::new(results, checks))
}

// ------------------------------------------------------------------ chern

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChernParams {
    #[serde(default = "ChernParams::default_n_theta")]
    n_theta: usize,
    #[serde(default = "ChernParams::default_n_phi")]
    n_phi: usize,
    #[serde(default = "ChernParams::default_powers")]
    powers: Vec<i32>,
}

impl ChernParams {
    fn default_n_theta() -> usize {
        20
    }
    fn default_n_phi() -> usize {
        40
    }
    fn default_powers() -> Vec<i32> {
        vec![1, -2]
    }
}

fn run_chern(params: Value) -> Result<RunOutcome, Failure> {
    let p: ChernParams = parse_params(Kind::Chern, params)?;
    if p.n_theta < 1 || p.n_phi < 3 {
        return Err(input(format!(
            "chern grid must have n_theta >= 1 and n_phi >= 3, got {}x{}",
            p.n_theta, p.n_phi
        )));
    }
    if p.n_theta * p.n_phi > 40_000 {
        return Err(input("chern grid larger than 40000 cells"));
    }
    if p.powers.is_empty() || p.powers.iter().any(|&k| k == 0 || k.abs() > 8) {
        return Err(input(
            "chern powers must be nonzero integers with |power| <= 8",
        ));
    }
    let grid = SphereGrid::new(p.n_theta, p.n_phi).map_err(numeric)?;
    let section = ground_section(&grid).map_err(numeric)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut chern_e = None;
    let mut chern_det_h = None;
    for &power in &p.powers {
        let field = curvature_field(&section, power).map_err(numeric)?;
        let flux = field.total_flux();
        let c = chern_number(&section, power).map_err(numeric)?;
        checks.push(check(
            format!("total flux / 2 pi integral at power {power}"),
            (flux / (2.0 * std::f64::consts::PI) - c as f64).abs(),
            1e-9,
        ));
        if power == 1 {
            chern_e = Some(c);
        }
        if power == -2 {
            chern_det_h = Some(c);
        }
        rows.push(json!({ "power": power, "chern": c, "total_flux": flux }));
    }
    if let Some(c) = chern_e {
        checks.push(check_eq("chern_E (power +1) = 1", c, 1));
    }
    if let Some(c) = chern_det_h {
        checks.push(check_eq("chern_detH (power -2) = -2", c, -2));
    }
    checks.push(check_eq(
        "euler characteristic",
        grid.euler_characteristic(),
        2,
    ));

    // tables and figure from the first requested power
    let field = curvature_field(&section, p.powers[0]).map_err(numeric)?;
    let mut csv = String::from("theta,phi,F\n");
    for (idx, &f) in field.plaquette_phases.iter().enumerate() {
        let (theta, phi) = grid.plaquette_center(idx);
        csv.push_str(&format!("{theta:.12e},{phi:.12e},{f:.12e}\n"));
    }
    let heat = svg::heatmap(
        &format!("plaquette curvature, power {}", p.powers[0]),
        p.n_theta + 1,
        p.n_phi,
        &field.plaquette_phases,
    );

    let mut results = serde_json::Map::new();
    results.insert("n_theta".into(), json!(p.n_theta));
    results.insert("n_phi".into(), json!(p.n_phi));
    results.insert("plaquettes".into(), json!(grid.plaquettes().len()));
    results.insert(
        "euler_characteristic".into(),
        json!(grid.euler_characteristic()),
    );
    results.insert("chern_by_power".into(), json!(rows));
    if let Some(c) = chern_e {
        results.insert("chern_E".into(), json!(c));
    }
    if let Some(c) = chern_det_h {
        results.insert("chern_detH".into(), json!(c));
    }
    let mut outcome = RunOutcome::new(Value::Object(results), checks);
    outcome.csv.push(("curvature.csv".into(), csv));
    outcome.svg.push(("heatmap.svg".into(), heat));
    Ok(outcome)
}

// -------------------------------------------------------------- gnsbundle

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GnsBundleParams {
    #[serde(default = "GnsBundleParams::default_n_theta")]
    n_theta: usize,
    #[serde(default = "GnsBundleParams::default_n_phi")]
    n_phi: usize,
}

impl GnsBundleParams {
    fn default_n_theta() -> usize {
        6
    }
    fn default_n_phi() -> usize {
        12
    }
}

fn run_gnsbundle(params: Value) -> Result<RunOutcome, Failure> {
    let p: GnsBundleParams = parse_params(Kind::Gnsbundle, params)?;
    if p.n_theta < 2 || !p.n_theta.is_multiple_of(2) {
        // chart exclusion zones sit on the equator; an even ring count
        // keeps every grid point inside at least two charts
        return Err(input(format!(
            "gnsbundle n_theta must be even and >= 2, got {}",
            p.n_theta
        )));
    }
    if p.n_phi < 3 || p.n_theta * p.n_phi > 800 {
        return Err(input(
            "gnsbundle grid must have n_phi >= 3 and at most 800 cells",
        ));
    }
    let grid = SphereGrid::new(p.n_theta, p.n_phi).map_err(numeric)?;
    let section = ground_section(&grid).map_err(numeric)?;
    let charts: Vec<_> = (0..3)
        .map(|k| {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            ground_vector([-phi.cos(), -phi.sin(), 0.0])
        })
        .collect::<Result<_, _>>()
        .map_err(numeric)?;
    let cocycle = tautological_cocycle(&section, &charts).map_err(numeric)?;
    let closure = cocycle.cech_closure_residual();
    let section_transition = cocycle.transition_residual();
    let transitions = gns_bundle_transitions(&section, &cocycle).map_err(numeric)?;
    let scalar = transitions.scalar_residual(&cocycle);
    let unitary_closure = transitions.cech_closure_residual();
    let ideal = ideal_bundle_check(&section, &charts).map_err(numeric)?;
    let dim_min = ideal.ideal_dims.iter().copied().min().unwrap_or(0);
    let dim_max = ideal.ideal_dims.iter().copied().max().unwrap_or(0);

    let checks = vec![
        check("cocycle Cech closure", closure, 1e-10),
        check("sections glued by the cocycle", section_transition, 1e-9),
        check("GNS transitions scalar (conjugate cocycle)", scalar, 1e-9),
        check("GNS transition Cech closure", unitary_closure, 1e-9),
        check(
            "ideal trivialization residual",
            ideal.max_trivialization_residual,
            1e-9,
        ),
        check(
            "ideal transition residual",
            ideal.max_transition_residual,
            1e-9,
        ),
        check_eq(
            "ideal dimension constant n(n-1) = 2 (min)",
            dim_min as i64,
            2,
        ),
        check_eq(
            "ideal dimension constant n(n-1) = 2 (max)",
            dim_max as i64,
            2,
        ),
    ];
    let results = json!({
        "n_theta": p.n_theta,
        "n_phi": p.n_phi,
        "points": grid.num_points(),
        "charts": 3,
        "cech_closure_residual": closure,
        "section_transition_residual": section_transition,
        "gns_scalar_residual": scalar,
        "gns_cech_closure_residual": unitary_closure,
        "ideal_trivialization_residual": ideal.max_trivialization_residual,
        "ideal_transition_residual": ideal.max_transition_residual,
        "ideal_dim_range": [dim_min, dim_max],
    });
    Ok(RunOutcome::new(results, checks))
}

// ------------------------------------------------------------------ chain

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainParams {
    #[serde(default = "ChainParams::default_r")]
    r: [f64; 3],
    #[serde(default = "ChainParams::default_s")]
    s: [f64; 3],
    #[serde(default = "ChainParams::default_witness_m")]
    witness_m: usize,
    #[serde(default = "ChainParams::default_truncations")]
    truncations: Vec<usize>,
    #[serde(default = "ChainParams::default_gap_sites")]
    gap_sites: usize,
    #[serde(default = "ChainParams::default_inequality_samples")]
    inequality_samples: usize,
}

impl ChainParams {
    fn default_r() -> [f64; 3] {
        [0.0, 0.0, 1.0]
    }
    fn default_s() -> [f64; 3] {
        [0.6, 0.0, 0.8]
    }
    fn default_witness_m() -> usize {
        24
    }
    fn default_truncations() -> Vec<usize> {
        vec![1, 2, 4, 8, 16, 32]
    }
    fn default_gap_sites() -> usize {
        6
    }
    fn default_inequality_samples() -> usize {
        20
    }
}

fn unit_field(label: &str, r: [f64; 3]) -> Result<[f64; 3], Failure> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if norm < 1e-9 {
        return Err(input(format!("chain field {label} is numerically zero")));
    }
    Ok([r[0] / norm, r[1] / norm, r[2] / norm])
}

fn run_chain(seed: u64, params: Value) -> Result<RunOutcome, Failure> {
    let p: ChainParams = parse_params(Kind::Chain, params)?;
    let r = unit_field("r", p.r)?;
    let s = unit_field("s", p.s)?;
    if !(1..=64).contains(&p.witness_m) {
        return Err(input("chain witness_m must be in 1..=64"));
    }
    if p.truncations.is_empty()
        || p.truncations.len() > 64
        || p.truncations.iter().any(|&m| m == 0 || m > 4096)
    {
        return Err(input(
            "chain truncations must be 1..=64 sizes, each in 1..=4096",
        ));
    }
    if !(2..=10).contains(&p.gap_sites) {
        return Err(input("chain gap_sites must be in 2..=10"));
    }
    if !(1..=1000).contains(&p.inequality_samples) {
        return Err(input("chain inequality_samples must be in 1..=1000"));
    }
    let mut truncations = p.truncations.clone();
    truncations.sort_unstable();
    truncations.dedup();

    let diff = [r[0] - s[0], r[1] - s[1], r[2] - s[2]];
    let expected_interaction = (diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2]).sqrt();
    let c_r = FieldConfig::constant(2, r).map_err(numeric)?;
    let c_s = FieldConfig::constant(2, s).map_err(numeric)?;
    let interaction = interaction_distance(&c_r, &c_s).map_err(numeric)?;

    let witness = sector_witness(r, s, p.witness_m).map_err(numeric)?;

    let mut table = Vec::new();
    let mut bound_violation = 0.0f64;
    let mut monotonicity_violation = 0.0f64;
    let mut previous_exact = 0.0f64;
    for &m in &truncations {
        let state_r = ProductGroundState::new(FieldConfig::constant(m, r).map_err(numeric)?)
            .map_err(numeric)?;
        let state_s = ProductGroundState::new(FieldConfig::constant(m, s).map_err(numeric)?)
            .map_err(numeric)?;
        let d = local_state_distance(&state_r, &state_s).map_err(numeric)?;
        bound_violation = bound_violation.max(d.exact - d.bound);
        monotonicity_violation = monotonicity_violation.max(previous_exact - d.exact);
        previous_exact = d.exact;
        table.push((m, d.exact, d.bound));
    }

    let gap_config = FieldConfig::constant(p.gap_sites, r).map_err(numeric)?;
    let gap_state = ProductGroundState::new(gap_config.clone()).map_err(numeric)?;
    let mut rng = sampling::rng(seed);
    let mut worst_inequality = f64::INFINITY;
    for _ in 0..p.inequality_samples {
        let width = rng.random_range(1..=p.gap_sites.min(3));
        let start = rng.random_range(0..=p.gap_sites - width);
        let support: Vec<usize> = (start..start + width).collect();
        let factors: Vec<CMatrix> = support
            .iter()
            .map(|_| sampling::random_matrix(&mut rng, 2, 2))
            .collect();
        let op = LocalOperator::new(support, factors).map_err(numeric)?;
        worst_inequality =
            worst_inequality.min(ground_state_inequality(&gap_state, &op).map_err(numeric)?);
    }
    let (e0, gap, multiplicity) = spectral_gap(&gap_config).map_err(numeric)?;

    let checks = vec![
        check(
            "interaction distance = sup-formula value",
            (interaction - expected_interaction).abs(),
            1e-12,
        ),
        check(
            "sector witness |1 - r.s| prefix-independent",
            witness.max_deviation(),
            1e-12,
        ),
        check(
            "exact distance <= telescoping bound",
            bound_violation,
            1e-12,
        ),
        check(
            "exact distance monotone in truncation",
            monotonicity_violation,
            1e-12,
        ),
        check(
            "derivation positivity on random local operators",
            (-worst_inequality).max(0.0),
            1e-10,
        ),
        check(
            "ground energy = -|Lambda|",
            (e0 + p.gap_sites as f64).abs(),
            1e-9,
        ),
        check("spectral gap = 2", (gap - 2.0).abs(), 1e-9),
        check_eq("ground state multiplicity", multiplicity as i64, 1),
    ];
    let results = json!({
        "r": r,
        "s": s,
        "interaction_distance": interaction,
        "witness_predicted": witness.predicted,
        "witness_max_deviation": witness.max_deviation(),
        "distance_table": table
            .iter()
            .map(|&(m, exact, bound)| json!({ "truncation": m, "exact": exact, "bound": bound }))
            .collect::<Vec<_>>(),
        "worst_inequality_value": worst_inequality,
        "ground_energy": e0,
        "spectral_gap": gap,
        "ground_multiplicity": multiplicity,
    });

    let mut csv = String::from("truncation,exact,bound\n");
    for &(m, exact, bound) in &table {
        csv.push_str(&format!("{m},{exact:.12e},{bound:.12e}\n"));
    }
    let plot = svg::line_plot(
        "product ground-state distance vs truncation",
        "truncation size",
        "distance",
        &[
            (
                "exact",
                table.iter().map(|&(m, e, _)| (m as f64, e)).collect(),
            ),
            (
                "bound",
                table.iter().map(|&(m, _, b)| (m as f64, b)).collect(),
            ),
        ],
    );
    let mut outcome = RunOutcome::new(results, checks);
    outcome.csv.push(("distances.csv".into(), csv));
    outcome.svg.push(("distances.svg".into(), plot));
    Ok(outcome)
}

// ---------------------------------------------------------------- ktheory

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MembershipProbe {
    numerator: i64,
    denominator: i64,
    #[serde(default)]
    expect: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KTheoryParams {
    type_sequence: Vec<u64>,
    #[serde(default)]
    infinity_primes: Vec<u64>,
    #[serde(default)]
    memberships: Vec<MembershipProbe>,
}

fn run_ktheory(params: Value) -> Result<RunOutcome, Failure> {
    let p: KTheoryParams = parse_params(Kind::Ktheory, params)?;
    for probe in &p.memberships {
        if probe.denominator == 0 {
            return Err(input("ktheory membership probe with zero denominator"));
        }
    }
    let uhf = UHFType {
        type_sequence: p.type_sequence.clone(),
        infinity_primes: p.infinity_primes.clone(),
    };
    // a malformed type sequence is a user error, not a numeric one
    let delta = sn_from_type(&uhf).map_err(|e| input(format!("ktheory type sequence: {e}")))?;

    let table = |k: u32| -> (String, String) {
        (
            homotopy_group(k, UnitaryFamily::Full, &delta).to_string(),
            homotopy_group(k, UnitaryFamily::Omega, &delta).to_string(),
        )
    };
    let (pi0_u, pi0_omega) = table(0);
    let (pi1_u, pi1_omega) = table(1);
    let (pi2_u, pi2_omega) = table(2);
    let (pi3_u, pi3_omega) = table(3);
    let k0 = k_theory(0, &delta).map_err(numeric)?.to_string();
    let k1 = k_theory(1, &delta).map_err(numeric)?.to_string();

    let mut checks = vec![
        check_eq("pi_2(U) trivial", (pi2_u == "0") as i64, 1),
        check_eq("pi_2(U_omega) trivial", (pi2_omega == "0") as i64, 1),
        check_eq("K_1 trivial", (k1 == "0") as i64, 1),
        check_eq("K_0 = Q(delta)", (k0 == "Q(delta)") as i64, 1),
    ];

    let mut membership_rows = Vec::new();
    for probe in &p.memberships {
        let q = BigRational::new(
            BigInt::from(probe.numerator),
            BigInt::from(probe.denominator),
        );
        let member = q_contains(&delta, &q);
        if let Some(expect) = probe.expect {
            checks.push(check_eq(
                format!(
                    "membership {}/{} in Q(delta)",
                    probe.numerator, probe.denominator
                ),
                member as i64,
                expect as i64,
            ));
        }
        membership_rows.push(json!({
            "numerator": probe.numerator,
            "denominator": probe.denominator,
            "member": member,
        }));
    }

    let mut colimit_rows = Vec::new();
    for w in p.type_sequence.windows(2) {
        let ok = colimit_matrix_check(w[0], w[1]).map_err(numeric)?;
        checks.push(check_eq(
            format!("colimit matrix identity {} -> {}", w[0], w[1]),
            ok as i64,
            1,
        ));
        colimit_rows.push(json!({ "n_i": w[0], "n_j": w[1], "identity_holds": ok }));
    }

    let results = json!({
        "delta": delta.to_string(),
        "pi0_U": pi0_u,
        "pi0_Uomega": pi0_omega,
        "pi1_U": pi1_u,
        "pi1_Uomega": pi1_omega,
        "pi2_U": pi2_u,
        "pi2_Uomega": pi2_omega,
        "pi3_U": pi3_u,
        "pi3_Uomega": pi3_omega,
        "K0": k0,
        "K1": k1,
        "memberships": membership_rows,
        "colimit_checks": colimit_rows,
    });
    Ok(RunOutcome::new(results, checks))
}
