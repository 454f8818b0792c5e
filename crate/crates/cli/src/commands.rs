//! The five CLI commands. Each returns its process exit code:
//! 0 success, 1 validation failure, 2 invalid configuration (via
//! `ConfigError`), 3 quadrature tolerance not reached, 4 route disagreement.

use crate::config::{quadrature_spec, ConfigError};
use crate::output::{emit, fmt_f64, Json};
use aniso_emit::{
    completeness_defect, imag_greens_trace, rate_biaxial_local, rate_model, rate_numeric,
    rate_uniaxial_local, run_validation, Anisotropy, BranchShare, Direction, DipoleSplit,
    LocalFieldTensor, MaterialFrame, MethodTag, PermittivityTensor, PhysicalContext,
    PrincipalAxis, QuadratureSpec, RateError, RateResult, UniaxialMedium,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Closed,
    Numeric,
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub struct RateInputs {
    pub eps: PermittivityTensor,
    pub dipole_lab: Direction,
    pub frame: Option<MaterialFrame>,
    pub method: Method,
    pub local_field: Option<LocalFieldTensor>,
    pub tol: f64,
    pub si: Option<PhysicalContext>,
    pub output: OutputFormat,
    pub out: Option<std::path::PathBuf>,
}

fn local_field_warnings(l: &LocalFieldTensor, warnings: &mut Vec<String>) {
    if l.has_zero_entry() {
        warnings.push("local-field tensor has a zero entry; that dipole component is fully suppressed".into());
    }
    if l.has_negative_entry() {
        warnings.push("local-field tensor has a negative entry; rates depend on squares only".into());
    }
}

// Closed uniaxial evaluation; fails when the medium is biaxial or when the
// in-plane local-field entries are incompatible with the closed form.
fn closed_rate(
    eps: &PermittivityTensor,
    dipole: &Direction,
    local_field: Option<&LocalFieldTensor>,
) -> Result<RateResult, ConfigError> {
    let medium = UniaxialMedium::from_tensor(eps).map_err(|e| {
        ConfigError(format!("closed form needs an isotropic or uniaxial medium: {e}"))
    })?;
    let split = DipoleSplit::from_direction(dipole, medium.axis());
    match local_field {
        None => Ok(medium.rate_uniaxial_total(&split)),
        Some(l) => {
            let plane = match medium.axis() {
                PrincipalAxis::X => (l.l2(), l.l3()),
                PrincipalAxis::Y => (l.l3(), l.l1()),
                PrincipalAxis::Z => (l.l1(), l.l2()),
            };
            if (plane.0 - plane.1).abs() > 1e-9 * plane.0.abs().max(plane.1.abs()).max(1.0) {
                return Err(ConfigError(
                    "closed form needs equal in-plane local-field entries; use --method numeric"
                        .into(),
                ));
            }
            Ok(rate_uniaxial_local(&medium, &split, l))
        }
    }
}

fn model_rate(
    eps: &PermittivityTensor,
    dipole: &Direction,
    local_field: Option<&LocalFieldTensor>,
) -> RateResult {
    match local_field {
        None => rate_model(eps, dipole),
        Some(l) => {
            // Per-axis model values with the local-field scaling folded into
            // the decomposition weights.
            let d = [dipole.x(), dipole.y(), dipole.z()];
            let ls = [l.l1(), l.l2(), l.l3()];
            let mut shares = [0.0f64; 2];
            for axis in 0..3 {
                let w = d[axis] * d[axis] * ls[axis] * ls[axis];
                if w == 0.0 {
                    continue;
                }
                let unit = [PrincipalAxis::X, PrincipalAxis::Y, PrincipalAxis::Z][axis].unit();
                let axis_model = rate_model(eps, &unit);
                shares[0] += w * axis_model.branches[0].gamma;
                shares[1] += w * axis_model.branches[1].gamma;
            }
            RateResult::from_branches(
                [
                    BranchShare { label: "interp-x-half", gamma: shares[0] },
                    BranchShare { label: "interp-y-half", gamma: shares[1] },
                ],
                None,
                MethodTag::InterpolationModel,
            )
        }
    }
}

fn numeric_rate(
    eps: &PermittivityTensor,
    dipole: &Direction,
    local_field: Option<&LocalFieldTensor>,
    spec: &QuadratureSpec,
) -> Result<(RateResult, bool), ConfigError> {
    let outcome = match local_field {
        None => rate_numeric(eps, dipole, spec),
        Some(l) => rate_biaxial_local(eps, dipole, l, spec),
    };
    match outcome {
        Ok(r) => Ok((r, true)),
        Err(RateError::ToleranceNotReached { best }) => Ok((best, false)),
        Err(e) => Err(ConfigError(format!("quadrature setup failed: {e}"))),
    }
}

pub fn cmd_rate(inputs: RateInputs) -> Result<i32, ConfigError> {
    let mut warnings = Vec::new();
    let dipole = match &inputs.frame {
        Some(frame) => frame.to_crystal_frame(&inputs.dipole_lab),
        None => inputs.dipole_lab,
    };
    if let Some(l) = &inputs.local_field {
        local_field_warnings(l, &mut warnings);
    }

    let uniaxial_ok = !matches!(inputs.eps.classification(), Anisotropy::Biaxial);
    let closed_l_ok = inputs.local_field.is_none()
        || closed_rate(&inputs.eps, &dipole, inputs.local_field.as_ref()).is_ok();
    let method = match inputs.method {
        Method::Auto => {
            if uniaxial_ok && closed_l_ok {
                Method::Closed
            } else {
                Method::Numeric
            }
        }
        other => other,
    };

    let spec = quadrature_spec(inputs.tol)?;
    let (result, converged) = match method {
        Method::Closed => (closed_rate(&inputs.eps, &dipole, inputs.local_field.as_ref())?, true),
        Method::Numeric => numeric_rate(&inputs.eps, &dipole, inputs.local_field.as_ref(), &spec)?,
        Method::Model => (model_rate(&inputs.eps, &dipole, inputs.local_field.as_ref()), true),
        Method::Auto => unreachable!("auto resolved above"),
    };

    let si = inputs.si.map(|ctx| (ctx.gamma_vac(), aniso_emit::to_absolute_rate(&ctx, result.gamma_normalized)));

    let content = match inputs.output {
        OutputFormat::Json => {
            let mut entries = vec![
                ("command", Json::Str("rate".into())),
                ("eps", eps_json(&inputs.eps)),
                ("dipole", dir_json(&dipole)),
                ("method", Json::Str(result.method.as_str().into())),
                ("gamma", Json::Float(result.gamma_normalized)),
                ("branches", branches_json(&result)),
                ("quadrature", quad_json(&result)),
                ("converged", Json::Bool(converged)),
                (
                    "warnings",
                    Json::Array(warnings.iter().map(|w| Json::Str(w.clone())).collect()),
                ),
            ];
            if let Some((gamma_vac, gamma_si)) = si {
                entries.push(("gamma_vac_si", Json::Float(gamma_vac)));
                entries.push(("gamma_si", Json::Float(gamma_si)));
            }
            Json::Object(entries).render() + "\n"
        }
        OutputFormat::Csv => {
            let mut text = String::from(
                "gamma,method,branch_a_label,branch_a_gamma,branch_b_label,branch_b_gamma,quad_order,quad_err,gamma_si,gamma_vac_si\n",
            );
            let (qo, qe) = match result.quadrature {
                Some(q) => (q.theta_order.to_string(), fmt_f64(q.est_rel_error)),
                None => (String::new(), String::new()),
            };
            let (gsi, gvac) = match si {
                Some((gamma_vac, gamma_si)) => (fmt_f64(gamma_si), fmt_f64(gamma_vac)),
                None => (String::new(), String::new()),
            };
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                fmt_f64(result.gamma_normalized),
                result.method.as_str(),
                result.branches[0].label,
                fmt_f64(result.branches[0].gamma),
                result.branches[1].label,
                fmt_f64(result.branches[1].gamma),
                qo,
                qe,
                gsi,
                gvac,
            ));
            text
        }
    };
    emit(inputs.out.as_deref(), &content).map_err(io_err)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok(if converged { 0 } else { 3 })
}

pub struct AngularInputs {
    pub eps: PermittivityTensor,
    pub samples: usize,
    pub theta_max: f64,
    pub output: OutputFormat,
    pub out: Option<std::path::PathBuf>,
}

pub fn cmd_angular(inputs: AngularInputs) -> Result<i32, ConfigError> {
    if matches!(inputs.eps.classification(), Anisotropy::Biaxial) {
        return Err(ConfigError(
            "angular distribution is defined for isotropic or uniaxial media only".into(),
        ));
    }
    if inputs.samples < 2 {
        return Err(ConfigError("--samples must be at least 2".into()));
    }
    if !(inputs.theta_max > 0.0 && inputs.theta_max <= std::f64::consts::PI + 1e-12) {
        return Err(ConfigError("theta range must lie in (0, pi]".into()));
    }
    let medium = UniaxialMedium::from_tensor(&inputs.eps).expect("classified above");
    let thetas = crate::config::linspace(0.0, inputs.theta_max, inputs.samples);
    let values: Vec<f64> = thetas.iter().map(|&t| medium.angular_distribution(t)).collect();
    let peaks = medium.peak_emission_angles();

    let content = match inputs.output {
        OutputFormat::Csv => {
            let mut text = String::from("theta_rad,f_theta\n");
            for (t, f) in thetas.iter().zip(&values) {
                text.push_str(&format!("{},{}\n", fmt_f64(*t), fmt_f64(*f)));
            }
            text
        }
        OutputFormat::Json => Json::Object(vec![
            ("command", Json::Str("angular".into())),
            ("eps", eps_json(&inputs.eps)),
            ("theta_rad", Json::Array(thetas.iter().map(|&t| Json::Float(t)).collect())),
            ("f_theta", Json::Array(values.iter().map(|&v| Json::Float(v)).collect())),
            ("peak_angles_rad", Json::Array(peaks.iter().map(|&p| Json::Float(p)).collect())),
        ])
        .render()
            + "\n",
    };
    emit(inputs.out.as_deref(), &content).map_err(io_err)?;
    let peaks_text: Vec<String> = peaks.iter().map(|&p| fmt_f64(p)).collect();
    eprintln!("peak_theta_rad: {}", peaks_text.join(","));
    Ok(0)
}

pub struct SweepInputs {
    pub base_eps: PermittivityTensor,
    pub axis: usize,
    pub values: Vec<f64>,
    pub dipole: Direction,
    pub tol: f64,
    pub output: OutputFormat,
    pub out: Option<std::path::PathBuf>,
}

pub fn cmd_sweep(inputs: SweepInputs) -> Result<i32, ConfigError> {
    let spec = quadrature_spec(inputs.tol)?;
    let base = inputs.base_eps.as_vector();
    let mut all_converged = true;
    let mut rows = Vec::with_capacity(inputs.values.len());
    for &v in &inputs.values {
        let mut entries = [base.x, base.y, base.z];
        entries[inputs.axis] = v;
        let eps = PermittivityTensor::new(entries[0], entries[1], entries[2])
            .map_err(|e| ConfigError(format!("swept permittivity invalid: {e}")))?;
        let (numeric, converged) = numeric_rate(&eps, &inputs.dipole, None, &spec)?;
        all_converged &= converged;
        let model = rate_model(&eps, &inputs.dipole);
        let closed = match eps.classification() {
            Anisotropy::Biaxial => None,
            _ => {
                let m = UniaxialMedium::from_tensor(&eps).expect("not biaxial");
                let split = DipoleSplit::from_direction(&inputs.dipole, m.axis());
                Some(m.rate_uniaxial_total(&split).gamma_normalized)
            }
        };
        let rel_error = (model.gamma_normalized - numeric.gamma_normalized).abs()
            / numeric.gamma_normalized;
        let quad = numeric.quadrature.expect("numeric route");
        rows.push((v, numeric.gamma_normalized, model.gamma_normalized, closed, rel_error, quad));
    }

    let content = match inputs.output {
        OutputFormat::Csv => {
            let mut text = String::from(
                "eps_sweep,gamma_numeric,gamma_model,gamma_closed,rel_error,quad_order,quad_err\n",
            );
            for (v, numeric, model, closed, rel, quad) in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt_f64(*v),
                    fmt_f64(*numeric),
                    fmt_f64(*model),
                    closed.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(*rel),
                    quad.theta_order,
                    fmt_f64(quad.est_rel_error),
                ));
            }
            text
        }
        OutputFormat::Json => {
            let rows_json: Vec<Json> = rows
                .iter()
                .map(|(v, numeric, model, closed, rel, quad)| {
                    Json::Object(vec![
                        ("eps_sweep", Json::Float(*v)),
                        ("gamma_numeric", Json::Float(*numeric)),
                        ("gamma_model", Json::Float(*model)),
                        ("gamma_closed", closed.map(Json::Float).unwrap_or(Json::Null)),
                        ("rel_error", Json::Float(*rel)),
                        ("quad_order", Json::Int(quad.theta_order as i64)),
                        ("quad_err", Json::Float(quad.est_rel_error)),
                    ])
                })
                .collect();
            Json::Object(vec![
                ("command", Json::Str("sweep".into())),
                ("rows", Json::Array(rows_json)),
            ])
            .render()
                + "\n"
        }
    };
    emit(inputs.out.as_deref(), &content).map_err(io_err)?;
    Ok(if all_converged { 0 } else { 3 })
}

pub struct GreensInputs {
    pub eps: PermittivityTensor,
    pub dipole: Direction,
    pub tol: f64,
    pub output: OutputFormat,
    pub out: Option<std::path::PathBuf>,
}

pub fn cmd_greens(inputs: GreensInputs) -> Result<i32, ConfigError> {
    let spec = quadrature_spec(inputs.tol)?;
    let (fermi, fermi_ok) = numeric_rate(&inputs.eps, &inputs.dipole, None, &spec)?;
    let (greens, greens_ok) = match imag_greens_trace(&inputs.eps, &inputs.dipole, &spec) {
        Ok(r) => (r.gamma_normalized, true),
        Err(RateError::ToleranceNotReached { best }) => (best.gamma_normalized, false),
        Err(e) => return Err(ConfigError(format!("quadrature setup failed: {e}"))),
    };
    let abs_diff = (greens - fermi.gamma_normalized).abs();
    let rel_diff = abs_diff / fermi.gamma_normalized.abs();

    // 26 probe directions: the normalized 3 x 3 x 3 lattice minus the origin.
    let mut max_defect = 0.0f64;
    let mut probes = 0;
    for i in -1i32..=1 {
        for j in -1i32..=1 {
            for k in -1i32..=1 {
                if (i, j, k) == (0, 0, 0) {
                    continue;
                }
                let d = Direction::new(i as f64, j as f64, k as f64).expect("nonzero");
                max_defect = max_defect.max(completeness_defect(&inputs.eps, &d).abs().max());
                probes += 1;
            }
        }
    }

    let content = match inputs.output {
        OutputFormat::Json => Json::Object(vec![
            ("command", Json::Str("greens".into())),
            ("eps", eps_json(&inputs.eps)),
            ("dipole", dir_json(&inputs.dipole)),
            ("gamma_fermi", Json::Float(fermi.gamma_normalized)),
            ("gamma_greens", Json::Float(greens)),
            ("abs_diff", Json::Float(abs_diff)),
            ("rel_diff", Json::Float(rel_diff)),
            ("completeness_max_defect", Json::Float(max_defect)),
            ("probe_directions", Json::Int(probes)),
            ("converged", Json::Bool(fermi_ok && greens_ok)),
        ])
        .render()
            + "\n",
        OutputFormat::Csv => {
            let mut text = String::from(
                "gamma_fermi,gamma_greens,abs_diff,rel_diff,completeness_max_defect,probe_directions\n",
            );
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_f64(fermi.gamma_normalized),
                fmt_f64(greens),
                fmt_f64(abs_diff),
                fmt_f64(rel_diff),
                fmt_f64(max_defect),
                probes,
            ));
            text
        }
    };
    emit(inputs.out.as_deref(), &content).map_err(io_err)?;

    if rel_diff > 1e-8 {
        eprintln!("routes disagree: rel diff {rel_diff:e} > 1e-8");
        return Ok(4);
    }
    Ok(if fermi_ok && greens_ok { 0 } else { 3 })
}

pub struct ValidateInputs {
    pub seed: u64,
    pub inject_fault: bool,
    pub output: OutputFormat,
    pub out: Option<std::path::PathBuf>,
}

pub fn cmd_validate(inputs: ValidateInputs) -> Result<i32, ConfigError> {
    let report = run_validation(inputs.seed, inputs.inject_fault);
    for check in &report.checks {
        eprintln!(
            "{} {} (samples {}, worst defect {:e}, tol {:e})",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.samples,
            check.worst_defect,
            check.tolerance,
        );
    }
    let passed = report.all_passed();
    let content = match inputs.output {
        OutputFormat::Json => {
            let checks_json: Vec<Json> = report
                .checks
                .iter()
                .map(|c| {
                    Json::Object(vec![
                        ("name", Json::Str(c.name.into())),
                        ("samples", Json::Int(c.samples as i64)),
                        ("worst_defect", Json::Float(c.worst_defect)),
                        ("tolerance", Json::Float(c.tolerance)),
                        ("passed", Json::Bool(c.passed)),
                    ])
                })
                .collect();
            Json::Object(vec![
                ("command", Json::Str("validate".into())),
                ("seed", Json::Int(report.seed as i64)),
                ("passed", Json::Bool(passed)),
                ("checks", Json::Array(checks_json)),
            ])
            .render()
                + "\n"
        }
        OutputFormat::Csv => {
            let mut text = String::from("name,samples,worst_defect,tolerance,passed\n");
            for c in &report.checks {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.name,
                    c.samples,
                    fmt_f64(c.worst_defect),
                    fmt_f64(c.tolerance),
                    c.passed,
                ));
            }
            text
        }
    };
    emit(inputs.out.as_deref(), &content).map_err(io_err)?;
    Ok(if passed { 0 } else { 1 })
}

fn eps_json(eps: &PermittivityTensor) -> Json {
    Json::Array(vec![
        Json::Float(eps.eps_x()),
        Json::Float(eps.eps_y()),
        Json::Float(eps.eps_z()),
    ])
}

fn dir_json(d: &Direction) -> Json {
    Json::Array(vec![Json::Float(d.x()), Json::Float(d.y()), Json::Float(d.z())])
}

fn branches_json(r: &RateResult) -> Json {
    Json::Array(
        r.branches
            .iter()
            .map(|b| {
                Json::Object(vec![
                    ("label", Json::Str(b.label.into())),
                    ("gamma", Json::Float(b.gamma)),
                ])
            })
            .collect(),
    )
}

fn quad_json(r: &RateResult) -> Json {
    match r.quadrature {
        None => Json::Null,
        Some(q) => Json::Object(vec![
            ("theta_order", Json::Int(q.theta_order as i64)),
            ("phi_points", Json::Int(q.phi_points as i64)),
            ("est_rel_error", Json::Float(q.est_rel_error)),
        ]),
    }
}

fn io_err(e: std::io::Error) -> ConfigError {
    ConfigError(format!("cannot write output: {e}"))
}
