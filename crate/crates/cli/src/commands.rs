use std::path::{Path, PathBuf};

use gframe::affine::{
    affine_analysis, calderon_constant, resolution_of_identity, AffineGrid, SampledSignal,
};
use gframe::representations::{
    analysis_operator, check_admissible, check_dual_characterization,
    check_idempotent_characterization, AdmissibilityReport, IdempotentCharacterizationReport,
};
use gframe::standard_form::{
    center, central_vector, orthogonality_relations, reduced_identity_check, standard_form_axioms,
};
use gframe::synthesis::{construct_from_spectral_data, spectral_data};

use crate::input::{self, InputError};
use crate::report::{complex_list, Report};

/// How a command ended: `Pass`/`Fail` map to exit codes 0 and 1.
pub enum Outcome {
    Pass(Report),
    Fail(Report),
}

pub enum CommandError {
    Input(InputError),
    Verification(Report),
}

impl From<InputError> for CommandError {
    fn from(e: InputError) -> Self {
        CommandError::Input(e)
    }
}

/// Failed verifications inside the library are exit 1; everything else is
/// an input problem.
fn lift(command: &str, e: gframe::Error) -> CommandError {
    use gframe::Error as E;
    match e {
        E::ZeroWindow
        | E::NotAdmissible { .. }
        | E::ZeroSymbol
        | E::EmptySpectralWindow { .. }
        | E::ZeroNotIsolated { .. }
        | E::NotInvariant { .. }
        | E::NotProjection { .. }
        | E::Reducible { .. }
        | E::NonZeroMean { .. }
        | E::CoverageInsufficient { .. } => {
            let mut r = Report::new(command);
            r.set("error", e.to_string());
            CommandError::Verification(r)
        }
        other => CommandError::Input(other.into()),
    }
}

type CmdResult = std::result::Result<Outcome, CommandError>;

fn verdict(report: Report, ok: bool) -> Outcome {
    if ok {
        Outcome::Pass(report)
    } else {
        Outcome::Fail(report)
    }
}

fn admissibility_fields(r: &mut Report, a: &AdmissibilityReport) {
    r.num("admissibility_a_operator_residual", a.operator_residual)
        .num("admissibility_b_isometry_residual", a.isometry_residual)
        .num("admissibility_c_resolution_residual", a.resolution_residual)
        .num("admissibility_d_range_residual", a.range_residual)
        .set("admissibility_verdicts", a.verdicts.to_vec())
        .set("admissibility_verdicts_agree", a.agree)
        .set("admissible", a.admissible)
        .num("c_eta", a.c_eta)
        .set("rank_of_range", a.rank_of_range)
        .set("cyclic", a.cyclic);
}

fn idempotent_fields(r: &mut Report, c: &IdempotentCharacterizationReport) {
    r.num("idempotent_flat_residual", c.flat_residual)
        .num("idempotent_square_residual", c.idempotency_residual)
        .num("idempotent_factorization_residual", c.factorization_residual)
        .num("idempotent_projection_residual", c.projection_residual)
        .num("idempotent_reproducing_residual", c.reproducing_residual)
        .num("idempotent_annihilation_residual", c.annihilation_residual)
        .set("idempotent_characterization_holds", c.holds);
}

pub fn check_admissible_cmd(rep: &Path, window: &Path, tol: f64, seed: u64) -> CmdResult {
    const CMD: &str = "check-admissible";
    let rep = input::load_rep(rep)?;
    let eta = input::load_vector(window)?;
    let op = analysis_operator(&rep, &eta).map_err(|e| lift(CMD, e))?;
    let a = check_admissible(&op, tol).map_err(|e| lift(CMD, e))?;
    let mut r = Report::new(CMD);
    r.set("seed", seed).num("tol", tol).set("dim", rep.dim()).set("group_order", rep.group().order());
    admissibility_fields(&mut r, &a);
    if a.admissible {
        let c = check_idempotent_characterization(&op, tol).map_err(|e| lift(CMD, e))?;
        idempotent_fields(&mut r, &c);
        let d = check_dual_characterization(&op, tol).map_err(|e| lift(CMD, e))?;
        r.num("dual_sharp_residual", d.sharp_residual)
            .num("dual_square_residual", d.idempotency_residual)
            .num("dual_factorization_residual", d.factorization_residual)
            .num("dual_projection_residual", d.projection_residual)
            .set("dual_characterization_holds", d.holds);
    }
    Ok(verdict(r, a.admissible))
}

pub fn construct_cmd(group: &Path, seed_file: &Path, out: Option<&PathBuf>, tol: f64, seed: u64) -> CmdResult {
    const CMD: &str = "construct";
    let group = input::load_group(group)?;
    let g = input::load_function(seed_file, &group)?;
    let sd = spectral_data(&g).map_err(|e| lift(CMD, e))?;
    let mut r = Report::new(CMD);
    r.set("seed", seed)
        .num("tol", tol)
        .num("spectral_gap", sd.spectral_gap)
        .num("gap_threshold", sd.gap_threshold)
        .set("zero_isolated", sd.zero_isolated)
        .num("polar_right_residual", sd.polar_residual_right)
        .num("polar_left_residual", sd.polar_residual_left);
    if !sd.zero_isolated {
        r.set("certified", false).set(
            "error",
            gframe::Error::ZeroNotIsolated {
                eigenvalue: sd.spectral_gap,
                threshold: sd.gap_threshold,
            }
            .to_string(),
        );
        return Ok(Outcome::Fail(r));
    }
    let built = construct_from_spectral_data(&sd, tol).map_err(|e| lift(CMD, e))?;
    r.set("h0_dim", built.h0_dim)
        .num("construction_membership_residual", built.membership_residual)
        .num("construction_projection_residual", built.projection_residual)
        .set("g_adm", complex_list(built.g_adm.values()))
        .set("certified", built.certified);
    admissibility_fields(&mut r, &built.admissibility);
    idempotent_fields(&mut r, &built.characterization);
    if let Some(path) = out {
        let body = serde_json::to_string_pretty(&complex_list(built.g_adm.values())).expect("plain values");
        std::fs::write(path, body + "\n").map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok(verdict(r, built.certified))
}

pub fn standard_form_cmd(rep: &Path, window: &Path, tol: f64, seed: u64) -> CmdResult {
    const CMD: &str = "standard-form";
    let rep = input::load_rep(rep)?;
    let eta = input::load_vector(window)?;
    let op = analysis_operator(&rep, &eta).map_err(|e| lift(CMD, e))?;
    let cs = central_vector(&op, tol).map_err(|e| lift(CMD, e))?;
    let sf = standard_form_axioms(&cs, tol, seed).map_err(|e| lift(CMD, e))?;
    let reduced = reduced_identity_check(&cs, tol).map_err(|e| lift(CMD, e))?;
    let group = rep.group();
    let center_dim = center(group).dim();
    let classes = group.conjugacy_class_count();
    let d = &cs.diagnostics;
    let mut r = Report::new(CMD);
    r.set("seed", seed)
        .num("tol", tol)
        .set("central_subspace_dim", sf.dim)
        .set("cone_samples", sf.samples)
        .num("central_vector_identity_residual", d.vector_identity_residual)
        .set("left_span_dim", d.left_span_dim)
        .set("right_span_dim", d.right_span_dim)
        .num("axiom_i_residual", sf.axiom_i_residual)
        .num("axiom_ii_residual", sf.axiom_ii_residual)
        .num("axiom_iii_residual", sf.axiom_iii_residual)
        .num("axiom_iv_residual", sf.axiom_iv_residual)
        .set("axioms_hold", sf.axioms_hold)
        .num("thcon3_i_centrality_residual", sf.thcon3_i_residual)
        .num("thcon3_ii_commutant_residual", sf.thcon3_ii_residual)
        .set("thcon3_iii_cyclic_left", sf.thcon3_iii.cyclic_left)
        .set("thcon3_iii_cyclic_right", sf.thcon3_iii.cyclic_right)
        .set("thcon3_iii_separating_left", sf.thcon3_iii.separating_left)
        .set("thcon3_iii_separating_right", sf.thcon3_iii.separating_right)
        .num("thcon3_iii_left_margin", sf.thcon3_iii.left_margin)
        .num("thcon3_iii_right_margin", sf.thcon3_iii.right_margin)
        .num("thcon3_iv_restriction_residual", reduced.restriction_residual)
        .num("thcon3_iv_flat_outside_residual", reduced.flat_outside_residual)
        .num("thcon3_v_residual", sf.thcon3_v_residual)
        .num("thcon3_vi_residual", sf.thcon3_vi_residual)
        .set("thcon3_hold", sf.thcon3_hold.to_vec())
        .set("center_dim", center_dim)
        .set("conjugacy_classes", classes);
    if let Some(g) = reduced.global_residual {
        r.num("thcon3_iv_global_residual", g);
    }
    let ok = sf.axioms_hold && sf.thcon3_hold.iter().all(|&b| b) && center_dim == classes;
    Ok(verdict(r, ok))
}

pub struct WindowPair<'a> {
    pub rep: &'a Path,
    pub window: &'a Path,
}

pub fn orthogonality_cmd(first: WindowPair, second: WindowPair, tol: f64, seed: u64) -> CmdResult {
    const CMD: &str = "orthogonality";
    let rep1 = input::load_rep(first.rep)?;
    let rep2 = input::rebase(&input::load_rep(second.rep)?, rep1.group())?;
    let eta1 = input::load_vector(first.window)?;
    let eta2 = input::load_vector(second.window)?;
    let cs1 = central_vector(&analysis_operator(&rep1, &eta1).map_err(|e| lift(CMD, e))?, tol)
        .map_err(|e| lift(CMD, e))?;
    let cs2 = central_vector(&analysis_operator(&rep2, &eta2).map_err(|e| lift(CMD, e))?, tol)
        .map_err(|e| lift(CMD, e))?;
    let o = orthogonality_relations(&cs1, &cs2, tol, seed).map_err(|e| lift(CMD, e))?;
    let mut r = Report::new(CMD);
    r.set("seed", seed)
        .num("tol", tol)
        .set("vector_inner_product", o.vector_inner_product.to_vec())
        .set("vectors_orthogonal", o.vectors_orthogonal)
        .num("max_cone_pairing", o.max_cone_pairing)
        .set("cones_orthogonal", o.cones_orthogonal)
        .num("subspace_overlap", o.subspace_overlap)
        .set("subspaces_orthogonal", o.subspaces_orthogonal)
        .set("orthogonal", o.vectors_orthogonal && o.cones_orthogonal && o.subspaces_orthogonal)
        .set("criteria_agree", o.agree)
        .set("cone_samples", o.samples);
    Ok(verdict(r, o.agree))
}

pub struct WaveletArgs<'a> {
    pub signal: &'a Path,
    pub wavelet: &'a Path,
    pub scales: (f64, f64, usize),
    pub shifts: (f64, f64, usize),
    pub normalize: bool,
    pub refine: bool,
    pub coefficients: Option<&'a PathBuf>,
}

pub fn wavelet_demo_cmd(args: WaveletArgs, tol: f64, seed: u64) -> CmdResult {
    const CMD: &str = "wavelet-demo";
    let psi = input::load_signal(args.signal)?;
    let mut eta: SampledSignal = input::load_signal(args.wavelet)?;
    let (a_min, a_max, na) = args.scales;
    let (b_min, b_max, nb) = args.shifts;
    let grid = AffineGrid::log_uniform(a_min, a_max, na, b_min, b_max, nb).map_err(|e| lift(CMD, e))?;
    let before = calderon_constant(&eta).map_err(|e| lift(CMD, e))?;
    if args.normalize {
        eta = eta.scaled(before.rescale);
    }
    let roi = resolution_of_identity(&psi, &psi, &eta, &grid).map_err(|e| lift(CMD, e))?;
    let mut r = Report::new(CMD);
    r.set("seed", seed)
        .num("tol", tol)
        .num("calderon_constant_input", before.constant)
        .num("calderon_constant", roi.calderon)
        .set("normalized", args.normalize)
        .num("roi_relative_error", roi.relative_error)
        .num("roi_lhs", roi.lhs[0])
        .num("roi_rhs", roi.rhs[0])
        .num("c_eta_quadrature", roi.c_eta)
        .num("coverage_deficit", roi.coverage_deficit)
        .set("scales", roi.scales)
        .set("shifts", roi.shifts);
    let mut ok = roi.relative_error <= tol;
    if args.refine {
        let fine = resolution_of_identity(&psi, &psi, &eta, &grid.refined()).map_err(|e| lift(CMD, e))?;
        let gain = roi.relative_error / fine.relative_error;
        r.num("refined_relative_error", fine.relative_error).num("refinement_gain", gain);
        ok &= gain >= 2.0;
    }
    if let Some(path) = args.coefficients {
        let coeffs = affine_analysis(&psi, &eta, &grid).map_err(|e| lift(CMD, e))?;
        write_coefficients(path, &coeffs)?;
    }
    Ok(verdict(r, ok))
}

fn write_coefficients(path: &Path, coeffs: &gframe::affine::Coefficients) -> Result<(), InputError> {
    let err = |e: csv::Error| InputError(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["j", "k", "a", "b", "re", "im"]).map_err(err)?;
    for (j, k, a, b, re, im) in coeffs.rows() {
        w.serialize((j, k, a, b, re, im)).map_err(err)?;
    }
    w.flush().map_err(|e| InputError(format!("{}: {e}", path.display())))
}
