//! Implementations of the registered checks, each a thin driver over the
//! library operations with pinned tolerances.

use crate::{CheckParams, CliError, Outcome};
use loopspin::linalg::{cmax_abs, frob, CMat, C64, RMat};
use loopspin::loopmodel::{
    self, chi_cutoff, coadjoint_form, cocycle_identity_check, covariant_derivative, dmu, jmu,
    kp_cocycle, level_check, rmu_smu, weak_strong_report, ChiProfile, SpectralData, TruncatedLoop,
};
use loopspin::pathgeom::{
    check_contraction_loop, contraction_group_convergence,
    contraction_loop_convergence, dvarpi_convergence, twisted_convergence, varpi_eval,
    varpi_twisted, Automorphism, MatrixGroup, PathFamily, TangentVariation, VariationFamily,
};
use loopspin::rootsys::{
    affine_elements_up_to_length, build_root_system, dual_coxeter, inversion_set,
    shifted_weight_sum, weyl_denominator_identity, weyl_group, LieType, RootSystem, Weight,
};
use loopspin::cliffspin::{
    commweil_check, implementer, intertwiner_space, spinor_module,
    subspace_factorization, ComplexStructureOperator, EuclideanSpace, Parity,
};
use loopspin::symplin::{
    check_compatible, hs_equivalence_identity, interpolate_cs, metric_isometry, polar_retraction,
    random_compatible_structure, random_symplectic, restricted_norm, standard_complex_structure,
    MetricPair, SymplecticForm,
};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Every runnable check name, for `loopspin list` and usage errors.
pub const CHECK_NAMES: &[&str] = &[
    "weyl-denominator",
    "shifted-weight-sum",
    "dual-coxeter",
    "clifford-relations",
    "implementer",
    "intertwiner-parity",
    "commweil",
    "subspace-factorization",
    "interp-cs",
    "polar-retraction",
    "metric-isometry",
    "hs-equivalence",
    "restricted-norm",
    "loop-operators",
    "sobolev-transition",
    "kp-cocycle",
    "coadjoint-form",
    "projections",
    "dvarpi",
    "contraction-loop",
    "contraction-group",
    "varpi-twisted",
    "varpi-invariance",
];

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn internal(err: impl std::fmt::Display) -> CliError {
    CliError::Internal(err.to_string())
}

fn parse_algebra(params: &CheckParams) -> Result<(RootSystem, String), CliError> {
    let label = params.algebra.clone().unwrap_or_else(|| "A1".to_string());
    let (ty, rank) = LieType::parse(&label).map_err(usage_from_root)?;
    let rs = build_root_system(ty, rank).map_err(usage_from_root)?;
    Ok((rs, label))
}

fn usage_from_root(e: loopspin::rootsys::RootSysError) -> CliError {
    match e {
        loopspin::rootsys::RootSysError::UnsupportedAlgebra(_) => usage(e.to_string()),
        other => internal(other),
    }
}

fn parse_loop_algebra(
    params: &CheckParams,
) -> Result<(loopspin::CompactLieAlgebra, String), CliError> {
    let label = params.algebra.clone().unwrap_or_else(|| "A1".to_string());
    let (ty, rank) = LieType::parse(&label).map_err(usage_from_root)?;
    let alg = loopmodel::compact_lie_algebra(ty, rank).map_err(|e| usage(e.to_string()))?;
    Ok((alg, label))
}

fn parse_group(params: &CheckParams) -> Result<(MatrixGroup, String), CliError> {
    let label = params.group.clone().unwrap_or_else(|| "SU2".to_string());
    let group = MatrixGroup::parse(&label).map_err(|e| usage(e.to_string()))?;
    Ok((group, label))
}

fn even_dim(params: &CheckParams, default: usize) -> Result<usize, CliError> {
    let dim = params.dim.unwrap_or(default);
    if dim == 0 || dim % 2 != 0 {
        return Err(usage(format!("--dim must be even and positive, got {dim}")));
    }
    Ok(dim)
}

pub(crate) fn dispatch(
    name: &str,
    params: &CheckParams,
    seed: u64,
) -> Result<(Outcome, CheckParams), CliError> {
    match name {
        "weyl-denominator" => weyl_denominator(params),
        "shifted-weight-sum" => shifted_sum(params),
        "dual-coxeter" => dual_coxeter_check(params),
        "clifford-relations" => clifford_relations(params, seed),
        "implementer" => implementer_check(params, seed),
        "intertwiner-parity" => intertwiner_parity(params),
        "commweil" => commweil(params, seed),
        "subspace-factorization" => subspace_check(params),
        "interp-cs" => interp_cs(params, seed),
        "polar-retraction" => polar(params, seed),
        "metric-isometry" => isometry(params, seed),
        "hs-equivalence" => hs_equivalence(params, seed),
        "restricted-norm" => restricted(params, seed),
        "loop-operators" => loop_operators(params),
        "sobolev-transition" => sobolev_transition(params),
        "kp-cocycle" => cocycle(params, seed),
        "coadjoint-form" => coadjoint(params, seed),
        "projections" => projections(params, seed),
        "dvarpi" => dvarpi(params, seed),
        "contraction-loop" => contraction_loop(params, seed),
        "contraction-group" => contraction_group(params, seed),
        "varpi-twisted" => twisted(params, seed),
        "varpi-invariance" => invariance(params, seed),
        other => Err(usage(format!(
            "unknown check '{other}'; run `loopspin list` for the registry"
        ))),
    }
}

fn weyl_denominator(params: &CheckParams) -> Result<(Outcome, CheckParams), CliError> {
    let (rs, label) = parse_algebra(params)?;
    let report = weyl_denominator_identity(&rs).map_err(internal)?;
    let mut out = Outcome::default();
    out.flag("lhs_equals_rhs", report.equal);
    out.details(json!({
        "algebra": label,
        "monomials": report.rhs.support_len(),
    }));
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    Ok((out, echoed))
}

fn shifted_sum(params: &CheckParams) -> Result<(Outcome, CheckParams), CliError> {
    let (rs, label) = parse_algebra(params)?;
    let max_len = params.max_len.unwrap_or(8);
    let elements = affine_elements_up_to_length(&rs, max_len).map_err(internal)?;
    let mut all_exact = true;
    for w in &elements {
        // shifted_weight_sum errors if Σ'α ≠ ρ − wρ
        if shifted_weight_sum(&rs, w).is_err() {
            all_exact = false;
        }
        if w.length != inversion_set(&rs, w).map_err(internal)?.len() {
            all_exact = false;
        }
    }
    let mut out = Outcome::default();
    out.flag("shifted_sum_equals_rho_minus_w_rho", all_exact);
    out.details(json!({ "elements": elements.len(), "max_length": max_len }));
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    echoed.max_len = Some(max_len);
    Ok((out, echoed))
}

fn dual_coxeter_check(params: &CheckParams) -> Result<(Outcome, CheckParams), CliError> {
    let (rs, label) = parse_algebra(params)?;
    let h = dual_coxeter(&rs).map_err(internal)?;
    let expected = match label.as_str() {
        "A1" => Some(2),
        "A2" => Some(3),
        "A3" => Some(4),
        "B2" => Some(3),
        "B3" => Some(5),
        "G2" => Some(4),
        _ => None,
    };
    let mut out = Outcome::default();
    out.flag("is_positive_integer", h > 0);
    if let Some(e) = expected {
        out.flag("matches_table", h == e);
    }
    out.details(json!({ "h_vee": h }));
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    Ok((out, echoed))
}

fn clifford_relations(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let dim = even_dim(params, 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // random SPD metric with a conjugated orthogonal structure
    let base = loopspin::symplin::random_symmetric(dim, 0.3, &mut rng);
    let g = &base * base.transpose() + RMat::identity(dim, dim);
    let s = loopspin::linalg::spd_inv_sqrt(&g);
    let si = loopspin::linalg::spd_sqrt(&g);
    let j_mat = &s * standard_complex_structure(dim) * &si;
    let space = EuclideanSpace::new(g.clone()).map_err(internal)?;
    let j = ComplexStructureOperator::new(j_mat)
        .map_err(internal)?
        .orthogonal_for(&g)
        .map_err(internal)?;
    let module = spinor_module(&space, &j).map_err(internal)?;

    let f = module.fock_dim();
    let mut worst = 0.0f64;
    for a in 0..dim {
        for b in a..dim {
            let anti = module.action(a) * module.action(b) + module.action(b) * module.action(a);
            let expected = CMat::identity(f, f) * C64::new(2.0 * g[(a, b)], 0.0);
            worst = worst.max(cmax_abs(&(anti - expected)));
        }
    }
    let gamma = module.grading_operator();
    let mut grading_worst = 0.0f64;
    for a in 0..dim {
        grading_worst =
            grading_worst.max(cmax_abs(&(&gamma * module.action(a) + module.action(a) * &gamma)));
    }
    let mut vacuum_worst = 0.0f64;
    for eps in module.plus_basis() {
        let eta = eps.map(|z| z.conj());
        vacuum_worst = vacuum_worst.max(
            module
                .apply_complex(&eta)
                .column(module.vacuum_index())
                .norm(),
        );
    }

    let mut out = Outcome::default();
    out.residual("anticommutator_defect", worst, 1e-12);
    out.residual("grading_anticommutes", grading_worst, 1e-12);
    out.residual("vacuum_annihilated", vacuum_worst, 1e-12);
    out.details(json!({ "fock_dim": f }));
    let mut echoed = CheckParams::default();
    echoed.dim = Some(dim);
    Ok((out, echoed))
}

fn standard_module(dim: usize) -> Result<loopspin::SpinorModule, CliError> {
    let space = EuclideanSpace::standard(dim).map_err(internal)?;
    let j = ComplexStructureOperator::new(standard_complex_structure(dim)).map_err(internal)?;
    spinor_module(&space, &j).map_err(internal)
}

fn implementer_check(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let dim = even_dim(params, 6)?;
    let count = params.instances.unwrap_or(10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let module = standard_module(dim)?;
    let g = RMat::identity(dim, dim);
    let mut property = 0.0f64;
    let mut unitarity = 0.0f64;
    let mut homomorphism = 0.0f64;
    for _ in 0..count {
        let a = loopspin::cliffspin::random_orthogonal(&g, 0.8, &mut rng);
        let u = implementer(&a, &module).map_err(internal)?;
        unitarity = unitarity.max(cmax_abs(
            &(u.adjoint() * &u - CMat::identity(module.fock_dim(), module.fock_dim())),
        ));
        for k in 0..dim {
            let lhs = &u * module.action(k) * u.adjoint();
            let rhs = module.apply(&a.column(k).into_owned());
            property = property.max(cmax_abs(&(lhs - rhs)));
        }
        // product property up to a unit scalar
        let b = loopspin::cliffspin::random_orthogonal(&g, 0.6, &mut rng);
        let ub = implementer(&b, &module).map_err(internal)?;
        let uab = implementer(&(&a * &b), &module).map_err(internal)?;
        let prod = &u * &ub;
        let ratio = (uab.adjoint() * &prod).trace() / C64::new(module.fock_dim() as f64, 0.0);
        homomorphism = homomorphism
            .max((ratio.norm() - 1.0).abs())
            .max(cmax_abs(&(&prod - &uab * ratio)));
    }
    let mut out = Outcome::default();
    out.residual("implementer_property", property, 1e-10);
    out.residual("unitarity", unitarity, 1e-10);
    out.residual("projective_homomorphism", homomorphism, 1e-8);
    let mut echoed = CheckParams::default();
    echoed.dim = Some(dim);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn intertwiner_parity(params: &CheckParams) -> Result<(Outcome, CheckParams), CliError> {
    let dim = even_dim(params, 6)?;
    let space = EuclideanSpace::standard(dim).map_err(internal)?;
    let j0m = standard_complex_structure(dim);
    let mut all = true;
    let mut kernel_dims = Vec::new();
    for k in 0..=dim / 2 {
        let mut j1m = j0m.clone();
        for p in 0..k {
            j1m[(2 * p, 2 * p + 1)] = 1.0;
            j1m[(2 * p + 1, 2 * p)] = -1.0;
        }
        let s0 = spinor_module(
            &space,
            &ComplexStructureOperator::new(j0m.clone()).map_err(internal)?,
        )
        .map_err(internal)?;
        let s1 = spinor_module(&space, &ComplexStructureOperator::new(j1m).map_err(internal)?)
            .map_err(internal)?;
        let iw = intertwiner_space(&s0, &s1).map_err(internal)?;
        kernel_dims.push(iw.kernel_dim);
        let expected = if k % 2 == 0 { Parity::Even } else { Parity::Odd };
        if iw.dimension != 1 || iw.kernel_dim != 2 * k || iw.parity != expected {
            all = false;
        }
    }
    let mut out = Outcome::default();
    out.flag("parity_matches_half_kernel_dim", all);
    out.details(json!({ "kernel_dims": kernel_dims }));
    let mut echoed = CheckParams::default();
    echoed.dim = Some(dim);
    Ok((out, echoed))
}

fn commweil(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (rs, label) = parse_algebra(params)?;
    let count = params.instances.unwrap_or(10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = weyl_group(&rs).map_err(internal)?;
    let mut worst = 0.0f64;
    let mut scalar_defect = 0.0f64;
    for w in &group {
        for _ in 0..count {
            let xi = random_weight(rs.rank(), &mut rng);
            let report = commweil_check(&rs, w, &xi).map_err(internal)?;
            worst = worst.max((report.scalar - report.expected).norm());
            scalar_defect = scalar_defect.max(report.scalar_defect);
        }
    }
    let mut out = Outcome::default();
    out.residual("scalar_vs_t_rho_minus_w_rho", worst, 1e-10);
    out.residual("conjugate_is_scalar", scalar_defect, 1e-8);
    out.details(json!({ "weyl_order": group.len() }));
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn random_weight(rank: usize, rng: &mut ChaCha8Rng) -> Weight {
    use num::BigInt;
    Weight(
        (0..rank)
            .map(|_| {
                let numer = rng.gen_range(-24i64..=24);
                loopspin::rootsys::Rat::new(BigInt::from(numer), BigInt::from(31))
            })
            .collect(),
    )
}

fn subspace_check(_params: &CheckParams) -> Result<(Outcome, CheckParams), CliError> {
    let space = EuclideanSpace::standard(4).map_err(internal)?;
    let j = ComplexStructureOperator::new(standard_complex_structure(4)).map_err(internal)?;
    let mut w0 = DVector::zeros(4);
    w0[0] = 1.0;
    let mut w1 = DVector::zeros(4);
    w1[1] = 1.0;
    let mut jp = RMat::zeros(4, 4);
    jp[(3, 2)] = 1.0;
    jp[(2, 3)] = -1.0;
    let fact = subspace_factorization(&space, &[w0, w1], &j, &jp).map_err(internal)?;
    let mut clifford_defect = 0.0f64;
    let dim_hom = fact.hom_basis.len();
    for a in 0..2 {
        for b in a..2 {
            let anti = &fact.clifford_w[a] * &fact.clifford_w[b]
                + &fact.clifford_w[b] * &fact.clifford_w[a];
            let expected =
                CMat::identity(dim_hom, dim_hom) * C64::new(2.0 * fact.metric_w[(a, b)], 0.0);
            clifford_defect = clifford_defect.max(cmax_abs(&(anti - expected)));
        }
    }
    let mut out = Outcome::default();
    out.flag("hom_dimension_is_2_pow_half_w", dim_hom == 2);
    out.residual("residual_clifford_relations", clifford_defect, 1e-12);
    Ok((out, CheckParams::default()))
}

fn interp_cs(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let max_dim = even_dim(params, 40)?;
    let t_steps = params.t_steps.unwrap_or(11).max(2);
    let count = params.instances.unwrap_or(100);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid: Vec<f64> = (0..t_steps)
        .map(|k| k as f64 / (t_steps - 1) as f64)
        .collect();
    let mut square_defect = 0.0f64;
    let mut endpoint_defect = 0.0f64;
    let mut spectrum_margin = f64::INFINITY;
    for _ in 0..count {
        let dim = 2 * (rng.gen_range(1..=max_dim / 2));
        let omega = SymplecticForm::standard(dim);
        let j0 = random_compatible_structure(dim, 0.35, &mut rng);
        let j1 = random_compatible_structure(dim, 0.35, &mut rng);
        let steps = interpolate_cs(&omega, &j0, &j1, &grid).map_err(internal)?;
        for step in &steps {
            square_defect = square_defect.max(step.square_defect);
            spectrum_margin = spectrum_margin.min(step.min_modulus);
        }
        endpoint_defect = endpoint_defect
            .max(frob(&(&steps[0].j - &j0)))
            .max(frob(&(&steps[t_steps - 1].j - &j1)));
    }
    let mut out = Outcome::default();
    out.residual("j_t_square_defect", square_defect, 1e-10);
    out.residual("endpoint_reproduction", endpoint_defect, 1e-10);
    out.flag("spectrum_nonzero_imaginary", spectrum_margin > 1e-10);
    out.details(json!({ "min_spectrum_modulus": spectrum_margin }));
    let mut echoed = CheckParams::default();
    echoed.dim = Some(max_dim);
    echoed.t_steps = Some(t_steps);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn polar(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let max_dim = even_dim(params, 20)?;
    let t_steps = params.t_steps.unwrap_or(11).max(2);
    let count = params.instances.unwrap_or(100);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid: Vec<f64> = (0..t_steps)
        .map(|k| k as f64 / (t_steps - 1) as f64)
        .collect();
    let mut symplectic = 0.0f64;
    let mut orthogonal = 0.0f64;
    let mut endpoint = 0.0f64;
    for _ in 0..count {
        let dim = 2 * (rng.gen_range(1..=max_dim / 2));
        let omega = SymplecticForm::standard(dim);
        let j = standard_complex_structure(dim);
        let a = random_symplectic(dim, 0.4, &mut rng);
        let path = polar_retraction(&a, &omega, &j, &grid).map_err(internal)?;
        for r in &path.symplectic_residuals {
            symplectic = symplectic.max(*r);
        }
        let a0 = &path.samples[0];
        orthogonal = orthogonal.max(frob(&(a0.transpose() * a0 - RMat::identity(dim, dim))));
        endpoint = endpoint.max(frob(&(path.endpoint() - &a)) / (1.0 + frob(&a)));
    }
    let mut out = Outcome::default();
    out.residual("symplectic_along_path", symplectic, 1e-9);
    out.residual("a0_orthogonal", orthogonal, 1e-9);
    out.residual("endpoint_reproduction", endpoint, 1e-12);
    let mut echoed = CheckParams::default();
    echoed.dim = Some(max_dim);
    echoed.t_steps = Some(t_steps);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn isometry(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let dim = even_dim(params, 8)?;
    let count = params.instances.unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut symmetry = 0.0f64;
    for _ in 0..count {
        let b0 = loopspin::symplin::random_symmetric(dim, 0.4, &mut rng);
        let g0 = &b0 * b0.transpose() + RMat::identity(dim, dim);
        let b1 = loopspin::symplin::random_symmetric(dim, 0.4, &mut rng);
        let g1 = &b1 * b1.transpose() + RMat::identity(dim, dim) * 0.7;
        let pair = MetricPair::new(g0.clone(), g1.clone()).map_err(internal)?;
        let a = metric_isometry(&pair).map_err(internal)?;
        worst = worst.max(frob(&(a.transpose() * &g1 * &a - &g0)));
        let c = g1.clone().lu().solve(&g0).ok_or_else(|| internal("singular metric"))?;
        symmetry = symmetry.max(frob(&(c.transpose() * &g1 - &g1 * &c)));
    }
    let mut out = Outcome::default();
    out.residual("isometry_defect", worst, 1e-10);
    out.residual("c_g1_symmetric", symmetry, 1e-10);
    let mut echoed = CheckParams::default();
    echoed.dim = Some(dim);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn hs_equivalence(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let dim = even_dim(params, 8)?;
    let count = params.instances.unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = SymplecticForm::standard(dim);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let j0 = random_compatible_structure(dim, 0.4, &mut rng);
        let j1 = random_compatible_structure(dim, 0.4, &mut rng);
        let report = hs_equivalence_identity(&omega, &j0, &j1).map_err(internal)?;
        worst = worst.max(report.residual);
    }
    let mut out = Outcome::default();
    out.residual("g1_inv_g0_vs_j1_inv_j0", worst, 1e-10);
    let mut echoed = CheckParams::default();
    echoed.dim = Some(dim);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn restricted(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let dim = even_dim(params, 6)?;
    let count = params.instances.unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = SymplecticForm::standard(dim);
    let mut recompute = 0.0f64;
    let mut commuting = 0.0f64;
    for _ in 0..count {
        let j = random_compatible_structure(dim, 0.3, &mut rng);
        let g = check_compatible(&omega, &j).map_err(internal)?.metric;
        let a = loopspin::symplin::random_symmetric(dim, 1.0, &mut rng);
        let n = restricted_norm(&a, &j, &g);
        // independent two-term evaluation
        let s = loopspin::linalg::spd_sqrt(&g);
        let si = loopspin::linalg::spd_inv_sqrt(&g);
        let m = &s * &a * &si;
        let op = loopspin::linalg::sym_eigen(&(m.transpose() * &m)).0.max().sqrt();
        let comm = &s * (&j * &a - &a * &j) * &si;
        let hs = (comm.transpose() * &comm).trace().sqrt();
        recompute = recompute.max((n.total - (op + hs)).abs() / (1.0 + n.total));
        // commuting operator has no HS part
        let commuting_op = RMat::identity(dim, dim) * 0.3 + &j * 1.1;
        commuting = commuting.max(restricted_norm(&commuting_op, &j, &g).hs_commutator);
    }
    let mut out = Outcome::default();
    out.residual("two_route_recomputation", recompute, 1e-12);
    out.residual("commutator_vanishes_when_commuting", commuting, 1e-10);
    let mut echoed = CheckParams::default();
    echoed.dim = Some(dim);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn loop_operators(params: &CheckParams) -> Result<(Outcome, CheckParams), CliError> {
    let (alg, label) = parse_loop_algebra(params)?;
    let modes = params.modes.unwrap_or(16).max(2);
    let eps = params.eps.unwrap_or(1.0);
    if eps <= 0.0 {
        return Err(usage("--eps must be positive"));
    }
    let chi = ChiProfile::quadratic(eps);

    // exact Fourier diagonal at μ = 0
    let zero = DVector::zeros(alg.dim());
    let d0 = covariant_derivative(&alg, &zero, modes).map_err(internal)?;
    let mut exact = true;
    for n in -(modes as i64)..=(modes as i64) {
        let block = d0.block(n);
        for r in 0..alg.dim() {
            for c in 0..alg.dim() {
                let target = if r == c {
                    C64::new(0.0, std::f64::consts::TAU * n as f64)
                } else {
                    C64::new(0.0, 0.0)
                };
                if block[(r, c)] != target {
                    exact = false;
                }
            }
        }
    }

    let mut spectral = 0.0f64;
    let mut commute = 0.0f64;
    let mut rank_ok = true;
    for grid_point in 0..5 {
        let m = 0.2 * grid_point as f64;
        let mut coords = vec![0.0; alg.rank()];
        coords[0] = m;
        let mu = alg.cartan_element(&coords);
        let spec = SpectralData::new(&alg, &mu, modes).map_err(internal)?;
        let j = jmu(&alg, &mu, modes).map_err(internal)?;
        let d = dmu(&alg, &mu, modes).map_err(internal)?;
        let del = covariant_derivative(&alg, &mu, modes).map_err(internal)?;
        let proj = spec.operator("complement", |l| {
            if l.abs() <= loopmodel::KERNEL_TOL {
                C64::new(0.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        });
        let scale = 1.0 + cmax_abs(del.matrix());
        spectral = spectral.max(cmax_abs(&(j.matrix() * j.matrix() + proj.matrix())));
        let sqrt = spec.operator("dmu_sqrt", |l| {
            C64::new(
                if l.abs() <= loopmodel::KERNEL_TOL {
                    1.0
                } else {
                    l.abs().sqrt()
                },
                0.0,
            )
        });
        spectral = spectral.max(cmax_abs(&(sqrt.matrix() * sqrt.matrix() - d.matrix())) / scale);
        let cut = chi_cutoff(&alg, &mu, modes, &chi).map_err(internal)?;
        spectral = spectral
            .max(cmax_abs(&(cut.sqrt_op.matrix() * cut.sqrt_op.matrix() - cut.op.matrix())) / scale);
        if cut.finite_rank_diff != cut.predicted_rank {
            rank_ok = false;
        }
        commute = commute
            .max(cmax_abs(&(j.matrix() * del.matrix() - del.matrix() * j.matrix())) / scale)
            .max(cmax_abs(&(d.matrix() * del.matrix() - del.matrix() * d.matrix())) / scale);
        // skew-adjointness of ∂_μ in the L² pairing
        spectral = spectral.max(cmax_abs(&(del.matrix().adjoint() + del.matrix())) / scale);
    }

    let mut out = Outcome::default();
    out.flag("d0_diagonal_exactly_2pi_i_n", exact);
    out.residual("spectral_identities", spectral, 1e-12);
    out.residual("commutators_with_derivative", commute, 1e-12);
    out.flag("chi_rank_matches_spectral_count", rank_ok);
    out.details(json!({
        "j0_convention": "minus_i_on_negative_modes",
        "mu_grid": [0.0, 0.2, 0.4, 0.6, 0.8],
    }));
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    echoed.modes = Some(modes);
    echoed.eps = Some(eps);
    Ok((out, echoed))
}

fn sobolev_transition(params: &CheckParams) -> Result<(Outcome, CheckParams), CliError> {
    let (alg, label) = parse_loop_algebra(params)?;
    let weak_s = params.sobolev.unwrap_or(1.0);
    if weak_s <= 0.5 {
        return Err(usage("--sobolev must exceed 1/2 for the weak exponent"));
    }
    let cutoffs = [8usize, 16, 32, 64];
    let mut coords = vec![0.0; alg.rank()];
    coords[0] = 0.3;
    let mu = alg.cartan_element(&coords);

    let half = weak_strong_report(&alg, &mu, 0.5, &cutoffs).map_err(internal)?;
    let mut band_variation = 0.0f64;
    for pair in half.rows.windows(2) {
        band_variation = band_variation.max((pair[1].ratio / pair[0].ratio - 1.0).abs());
    }
    let weak = weak_strong_report(&alg, &mu, weak_s, &cutoffs).map_err(internal)?;
    let mut monotone = true;
    let mut rate_ok = true;
    let expected_rate = 2f64.powf(2.0 * weak_s - 1.0);
    for pair in weak.rows.windows(2) {
        if pair[1].sigma_min >= pair[0].sigma_min {
            monotone = false;
        }
        let rate = pair[0].sigma_min / pair[1].sigma_min;
        if rate < expected_rate / 2.0 || rate > expected_rate * 2.0 {
            rate_ok = false;
        }
    }
    let mut out = Outcome::default();
    out.residual("half_band_ratio_variation", band_variation, 0.2);
    out.flag("weak_sigma_min_decreases", monotone);
    out.flag("weak_rate_within_factor_two", rate_ok);
    out.details(json!({ "half": half, "weak": weak }));
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    echoed.sobolev = Some(weak_s);
    Ok((out, echoed))
}

fn cocycle(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (alg, label) = parse_loop_algebra(params)?;
    let modes = params.modes.unwrap_or(24).max(3);
    let count = params.instances.unwrap_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut identity_residual = 0.0f64;
    for _ in 0..count {
        let budget = modes / 3;
        let x1 = TruncatedLoop::random_real(&alg, modes, budget, 0.3, &mut rng);
        let x2 = TruncatedLoop::random_real(&alg, modes, budget, 0.3, &mut rng);
        let x3 = TruncatedLoop::random_real(&alg, modes, budget, 0.3, &mut rng);
        identity_residual =
            identity_residual.max(cocycle_identity_check(&alg, &x1, &x2, &x3).map_err(internal)?);
    }

    // antisymmetry is assembled, hence bit-exact
    let xi = TruncatedLoop::random_real(&alg, modes, modes, 1.0, &mut rng);
    let zeta = TruncatedLoop::random_real(&alg, modes, modes, 1.0, &mut rng);
    let a = kp_cocycle(&alg, &xi, &zeta).map_err(internal)?;
    let b = kp_cocycle(&alg, &zeta, &xi).map_err(internal)?;
    let antisymmetric = a == -b && kp_cocycle(&alg, &xi, &xi).map_err(internal)? == C64::new(0.0, 0.0);

    // paired-mode closed form ψ(Xz^n, Yz^{−n}) = −4π²n h∨ B(X,Y)
    let hv = dual_coxeter(alg.root_system()).map_err(internal)? as f64;
    let mut paired = 0.0f64;
    for n in 1..=8i64 {
        let x = loopspin::linalg::CVec::from_fn(alg.dim(), |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let y = loopspin::linalg::CVec::from_fn(alg.dim(), |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let xi = TruncatedLoop::monomial(&alg, modes, n, &x);
        let zeta = TruncatedLoop::monomial(&alg, modes, -n, &y);
        let psi = kp_cocycle(&alg, &xi, &zeta).map_err(internal)?;
        let dot: C64 = x.iter().zip(y.iter()).map(|(p, q)| p * q).sum();
        let expected = dot * C64::new(-4.0 * std::f64::consts::PI.powi(2) * n as f64 * hv, 0.0);
        paired = paired.max((psi - expected).norm() / (1.0 + expected.norm()));
    }

    let level = level_check(&alg).map_err(internal)?;

    let mut out = Outcome::default();
    out.flag("antisymmetry_exact", antisymmetric);
    out.residual("cocycle_identity", identity_residual, 1e-10);
    out.residual("paired_mode_closed_form", paired, 1e-10);
    out.residual("killing_vs_basic_level", level.max_entry_defect, 1e-9);
    out.details(json!({ "dual_coxeter": level.dual_coxeter }));
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    echoed.modes = Some(modes);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn coadjoint(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (alg, label) = parse_loop_algebra(params)?;
    let modes = params.modes.unwrap_or(8).max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = DVector::zeros(alg.dim());

    // cosine/sine closed form at μ = 0
    let mut closed_form = 0.0f64;
    let x = loopspin::linalg::CVec::from_fn(alg.dim(), |a, _| {
        if a == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    for n in 1..=3i64 {
        let half = &x * C64::new(0.5, 0.0);
        let mut xi = TruncatedLoop::zeros(&alg, modes);
        xi.set_mode(n, &half);
        xi.set_mode(-n, &half);
        let mut zeta = TruncatedLoop::zeros(&alg, modes);
        let half_i = &x * C64::new(0.0, -0.5);
        zeta.set_mode(n, &half_i);
        zeta.set_mode(-n, &half_i.map(|z| z.conj()));
        let value = coadjoint_form(&alg, &zero, &xi, &zeta).map_err(internal)?;
        closed_form = closed_form.max((value + std::f64::consts::PI * n as f64).abs());
    }

    // antisymmetry and the D_μ-metric compatibility on the complement
    let mut coords = vec![0.0; alg.rank()];
    coords[0] = 0.31;
    let mu = alg.cartan_element(&coords);
    let spec = SpectralData::new(&alg, &mu, modes).map_err(internal)?;
    let complement = spec.operator("complement", |l| {
        if l.abs() <= loopmodel::KERNEL_TOL {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        }
    });
    let j = jmu(&alg, &mu, modes).map_err(internal)?;
    let d = dmu(&alg, &mu, modes).map_err(internal)?;
    let mut antisym = true;
    let mut compat = 0.0f64;
    for _ in 0..5 {
        let xi_raw = TruncatedLoop::random_real(&alg, modes, modes, 1.0, &mut rng);
        let zeta_raw = TruncatedLoop::random_real(&alg, modes, modes, 1.0, &mut rng);
        let fwd = coadjoint_form(&alg, &mu, &xi_raw, &zeta_raw).map_err(internal)?;
        let bwd = coadjoint_form(&alg, &mu, &zeta_raw, &xi_raw).map_err(internal)?;
        if fwd != -bwd || coadjoint_form(&alg, &mu, &xi_raw, &xi_raw).map_err(internal)? != 0.0 {
            antisym = false;
        }
        let xi = complement.apply(&xi_raw);
        let zeta = complement.apply(&zeta_raw);
        let lhs = coadjoint_form(&alg, &mu, &xi, &j.apply(&zeta)).map_err(internal)?;
        let rhs = loopmodel::l2_pairing(&d.apply(&xi), &zeta).re;
        compat = compat.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
    }

    let mut out = Outcome::default();
    out.residual("cosine_sine_closed_form", closed_form, 1e-12);
    out.flag("antisymmetry_exact", antisym);
    out.residual("dmu_metric_compatibility", compat, 1e-10);
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    echoed.modes = Some(modes);
    Ok((out, echoed))
}

fn projections(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (alg, label) = parse_loop_algebra(params)?;
    let modes = params.modes.unwrap_or(12).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rs_identity = 0.0f64;
    let mut sr_projection = 0.0f64;
    let mut annihilates = 0.0f64;
    for coords0 in [0.0f64, 0.33] {
        let mut coords = vec![0.0; alg.rank()];
        coords[0] = coords0;
        let mu = alg.cartan_element(&coords);
        let p = rmu_smu(&alg, &mu, modes).map_err(internal)?;
        let rs_product = &p.r * &p.s;
        // R∘S restricted to 𝔤_a is the identity: eigenvalues 0 or 1, trace
        // equal to the stabilizer dimension.
        let (vals, _) = loopspin::linalg::herm_eigen(&rs_product);
        for v in vals.iter() {
            rs_identity = rs_identity.max(v.abs().min((v - 1.0).abs()));
        }
        let sr = &p.s * &p.r;
        sr_projection = sr_projection
            .max(cmax_abs(&(&sr * &sr - &sr)))
            .max(cmax_abs(&(&sr - sr.adjoint())));
        let del = covariant_derivative(&alg, &mu, modes).map_err(internal)?;
        annihilates = annihilates.max(cmax_abs(&(&p.r * del.matrix())));
        // R extracts the zero mode at μ = 0
        if coords0 == 0.0 {
            let xi = TruncatedLoop::random_real(&alg, modes, modes, 1.0, &mut rng);
            let projected = &p.r * xi.coeffs();
            let zero_mode = xi.mode(0);
            for a in 0..alg.dim() {
                rs_identity = rs_identity.max((projected[a] - zero_mode[a]).norm());
            }
        }
    }
    let mut out = Outcome::default();
    out.residual("r_compose_s_identity_on_stabilizer", rs_identity, 1e-12);
    out.residual("s_compose_r_orthogonal_projection", sr_projection, 1e-10);
    out.residual("r_annihilates_complement", annihilates, 1e-9);
    let mut echoed = CheckParams::default();
    echoed.algebra = Some(label);
    echoed.modes = Some(modes);
    Ok((out, echoed))
}

fn pathgeom_setup(
    params: &CheckParams,
    default_m: usize,
    default_h: f64,
) -> Result<(MatrixGroup, String, usize, f64, usize), CliError> {
    let (group, label) = parse_group(params)?;
    let m = params.samples.unwrap_or(default_m).max(8);
    let h = params.fd_step.unwrap_or(default_h);
    if h <= 0.0 || h > 0.25 {
        return Err(usage(format!("--fd-step out of range: {h}")));
    }
    let count = params.instances.unwrap_or(3);
    Ok((group, label, m, h, count))
}

fn dvarpi(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (group, label, m, h, count) = pathgeom_setup(params, 200, 1e-3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders = Vec::new();
    let mut worst_order_dev = 0.0f64;
    for _ in 0..count {
        let pf = PathFamily::random(&group, 2, 0.35, &mut rng);
        let uf = VariationFamily::random(&group, 2, 0.4, &mut rng);
        let vf = VariationFamily::random(&group, 2, 0.4, &mut rng);
        let wf = VariationFamily::random(&group, 2, 0.4, &mut rng);
        let report = dvarpi_convergence(&pf, &uf, &vf, &wf, m, h).map_err(internal)?;
        worst_order_dev = worst_order_dev.max((report.order - 2.0).abs());
        orders.push(report.order);
    }
    let mut out = Outcome::default();
    out.residual("order_deviation_from_two", worst_order_dev, 0.3);
    out.details(json!({ "orders": orders }));
    let mut echoed = CheckParams::default();
    echoed.group = Some(label);
    echoed.samples = Some(m);
    echoed.fd_step = Some(h);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn contraction_loop(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (group, label, m, h, count) = pathgeom_setup(params, 200, 1e-3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders = Vec::new();
    let mut worst_order_dev = 0.0f64;
    for _ in 0..count {
        let pf = PathFamily::random(&group, 2, 0.35, &mut rng);
        let xif = VariationFamily::random_periodic(&group, 2, 0.45, &mut rng);
        let wf = VariationFamily::random(&group, 2, 0.45, &mut rng);
        let report = contraction_loop_convergence(&pf, &xif, &wf, m, h).map_err(internal)?;
        worst_order_dev = worst_order_dev.max((report.order - 2.0).abs());
        orders.push(report.order);
    }
    let mut out = Outcome::default();
    out.residual("order_deviation_from_two", worst_order_dev, 0.3);
    out.details(json!({ "orders": orders }));
    let mut echoed = CheckParams::default();
    echoed.group = Some(label);
    echoed.samples = Some(m);
    echoed.fd_step = Some(h);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn contraction_group(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (group, label, m, h, count) = pathgeom_setup(params, 200, 1e-2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders = Vec::new();
    let mut worst_order_dev = 0.0f64;
    for _ in 0..count {
        let pf = PathFamily::random(&group, 2, 0.35, &mut rng);
        let x = group.random_algebra_element(0.6, &mut rng);
        let wf = VariationFamily::random(&group, 2, 0.45, &mut rng);
        let report = contraction_group_convergence(&pf, &x, &wf, m, h).map_err(internal)?;
        worst_order_dev = worst_order_dev.max((report.order - 2.0).abs());
        orders.push(report.order);
    }
    let mut out = Outcome::default();
    out.residual("order_deviation_from_two", worst_order_dev, 0.3);
    out.details(json!({ "orders": orders }));
    let mut echoed = CheckParams::default();
    echoed.group = Some(label);
    echoed.samples = Some(m);
    echoed.fd_step = Some(h);
    echoed.instances = Some(count);
    Ok((out, echoed))
}

fn twisted(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (group, label, m, h, _) = pathgeom_setup(params, 150, 1e-2)?;
    let kind = params.kappa.clone().unwrap_or_else(|| "inner".to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kappa = match kind.as_str() {
        "id" | "identity" => Automorphism::Identity,
        "inner" => {
            let h_elt = group.exp(&group.random_algebra_element(0.5, &mut rng));
            Automorphism::inner(&group, h_elt).map_err(internal)?
        }
        "outer" => Automorphism::ComplexConjugation,
        other => return Err(usage(format!("unknown --kappa '{other}'"))),
    };

    let mut out = Outcome::default();

    // κ = id reproduces ϖ bit-for-bit
    let path = PathFamily::random(&group, 2, 0.35, &mut rng).sample(m);
    let v = VariationFamily::random(&group, 2, 0.4, &mut rng).sample(m);
    let w = VariationFamily::random(&group, 2, 0.4, &mut rng).sample(m);
    let plain = varpi_eval(&path, &v, &w).map_err(internal)?;
    let via_id = varpi_twisted(&path, &Automorphism::Identity, &v, &w).map_err(internal)?;
    out.flag("identity_twist_bit_identical", plain.to_bits() == via_id.to_bits());

    // inner twist matches the untwisted value through γ ↦ γσ⁻¹
    let y = group.random_algebra_element(0.5, &mut rng);
    let h_elt = group.exp(&y);
    let inner = Automorphism::inner(&group, h_elt).map_err(internal)?;
    let sigma: Vec<CMat> = (0..=m)
        .map(|j| group.exp(&(&y * C64::new(j as f64 / m as f64, 0.0))))
        .collect();
    let moved = path.transport(&sigma, &group.identity()).map_err(internal)?;
    let twisted_value = varpi_twisted(&moved, &inner, &v, &w).map_err(internal)?;
    out.residual("inner_twist_path_correspondence", (twisted_value - plain).abs(), 1e-9);

    // twisted moment condition converges
    let pf = PathFamily::random(&group, 2, 0.3, &mut rng);
    let x = group.random_algebra_element(0.5, &mut rng);
    let wf = VariationFamily::random(&group, 2, 0.4, &mut rng);
    let conv = twisted_convergence(&pf, &kappa, &x, &wf, m, h).map_err(internal)?;
    out.flag("twisted_moment_order_at_least_1_7", conv.order >= 1.7);
    out.details(json!({ "order": conv.order, "coarse": conv.coarse, "fine": conv.fine }));

    let mut echoed = CheckParams::default();
    echoed.group = Some(label);
    echoed.kappa = Some(kind);
    echoed.samples = Some(m);
    echoed.fd_step = Some(h);
    Ok((out, echoed))
}

fn invariance(params: &CheckParams, seed: u64) -> Result<(Outcome, CheckParams), CliError> {
    let (group, label, m, _, _) = pathgeom_setup(params, 80, 1e-3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let path = PathFamily::random(&group, 2, 0.4, &mut rng).sample(m);
    let v = VariationFamily::random(&group, 2, 0.5, &mut rng).sample(m);
    let w = VariationFamily::random(&group, 2, 0.5, &mut rng).sample(m);
    let lambda_profile = VariationFamily::random_periodic(&group, 2, 0.4, &mut rng);
    let lambda: Vec<CMat> = (0..=m)
        .map(|j| group.exp(&lambda_profile.eval(j as f64 / m as f64)))
        .collect();
    let left = group.exp(&group.random_algebra_element(0.7, &mut rng));

    let base = varpi_eval(&path, &v, &w).map_err(internal)?;
    let moved_path = path.transport(&lambda, &left).map_err(internal)?;
    let moved = varpi_eval(&moved_path, &v.conjugate(&left), &w.conjugate(&left))
        .map_err(internal)?;

    // gauge fields transported consistently pair the same way
    let xi = lambda_profile.sample(m);
    let field = TangentVariation::gauge_field(&path, &xi).map_err(internal)?;
    let lhs = varpi_eval(&path, &field, &w).map_err(internal)?;
    let loop_check = check_contraction_loop(&path, &xi, &w, 1e-3).map_err(internal)?;

    let mut out = Outcome::default();
    out.residual("lg_times_g_invariance", (base - moved).abs(), 1e-10);
    out.residual(
        "gauge_field_contraction_consistency",
        (lhs - loop_check.lhs).abs(),
        1e-12,
    );
    let mut echoed = CheckParams::default();
    echoed.group = Some(label);
    echoed.samples = Some(m);
    Ok((out, echoed))
}
