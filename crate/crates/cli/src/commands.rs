//! Command implementations shared by the binary and the test suite.

use std::collections::BTreeMap;

use fermibell::bell::{
    chsh_value, evaluate_pi_configuration, gisin_distinguishable, map_to_distinguishable,
    optimize_chsh_pi, paper_angles, pauli_triplet_on, pipeline_certify, stationary_angles,
    AngleChoice, BellCertificate, ChshConfiguration, Regime, Verdict,
};
use fermibell::exterior::Subspace;
use fermibell::individuation::{check_exhaustion, individuate, pi_local_filter};
use fermibell::linalg::Ket;
use fermibell::sampling::random_fermion_pair;
use fermibell::slater::{slater_decompose, FermionPairState};
use fermibell::tol;

use crate::report::{
    certificate_section, joint_section_of, AnalysisReport, Generator,
    IndividuationSection, MapSection, SlaterSection, REPORT_VERSION,
};
use crate::scenarios;
use crate::statefile::{emit_dense, ParsedState, StateFile};
use crate::CliError;

/// Which angle search backs the emitted certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizerChoice {
    /// Closed form with `η = 1/√(1+4ξ²)`.
    Paper,
    /// Closed form at the stationary point `η = 1/√(1+ξ²)`.
    Stationary,
    /// Grid search plus coordinate ascent (default; dominates both forms).
    Grid,
}

impl OptimizerChoice {
    pub fn name(self) -> &'static str {
        match self {
            OptimizerChoice::Paper => "paper",
            OptimizerChoice::Stationary => "stationary",
            OptimizerChoice::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub optimizer: OptimizerChoice,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            optimizer: OptimizerChoice::Grid,
            tolerance: tol::DEFAULT,
            seed: 0,
        }
    }
}

fn generator(opts: &Options) -> Generator {
    Generator {
        name: "fermibell".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        optimizer: opts.optimizer.name().to_string(),
        tolerance: opts.tolerance,
        seed: opts.seed,
    }
}

fn base_report(parsed: &ParsedState, opts: &Options) -> AnalysisReport {
    AnalysisReport {
        report_version: REPORT_VERSION.to_string(),
        generator: generator(opts),
        state: crate::statefile::emit(&parsed.state, parsed.labels.as_ref()),
        input_norm: parsed.input_norm,
        warnings: parsed.warnings.clone(),
        slater: None,
        gmw_entangled: None,
        individuation: None,
        bell: None,
        map_distinguishable: None,
    }
}

fn slater_section(pair: &FermionPairState) -> Result<SlaterSection, CliError> {
    let dec = slater_decompose(pair).map_err(CliError::numerical)?;
    let d = pair.single_dim();
    let basis = dec.basis_unitary().mat();
    Ok(SlaterSection {
        rank: dec.rank(),
        coefficients: dec.coefficients().iter().map(|c| [c.re, c.im]).collect(),
        magnitudes: dec.coefficients().iter().map(|c| c.norm()).collect(),
        basis_unitary: (0..d * d)
            .map(|k| {
                let z = basis[(k % d, k / d)]; // column-major
                [z.re, z.im]
            })
            .collect(),
        reconstruction_error: dec.reconstruction_error(pair),
    })
}

fn individuation_section(pair: &FermionPairState) -> Result<IndividuationSection, CliError> {
    let proj = individuate(pair).map_err(CliError::numerical)?;
    let report = check_exhaustion(pair, &proj).map_err(CliError::numerical)?;
    let (rank_e1, rank_e2) = proj.ranks();
    Ok(IndividuationSection {
        rank_e1,
        rank_e2,
        orthogonality_error: proj.orthogonality_error(),
        exhaustion_residual: report.residual(),
    })
}

/// Certificate with the requested optimizer. The closed-form optimizers
/// apply to GMW-entangled states of dimension ≥ 4 (they need ξ, γ); other
/// inputs fall back to the grid pipeline, which handles every case.
fn bell_certificate(
    pair: &FermionPairState,
    opts: &Options,
) -> Result<BellCertificate, CliError> {
    let grid_cert = pipeline_certify(pair).map_err(CliError::numerical)?;
    if opts.optimizer == OptimizerChoice::Grid {
        return Ok(grid_cert);
    }
    let d = pair.single_dim();
    if d < 4 {
        return Ok(grid_cert);
    }
    let dec = slater_decompose(pair).map_err(CliError::numerical)?;
    if dec.rank() < 2 {
        return Ok(grid_cert);
    }

    // rebuild the pipeline's filtered state and canonical triplets
    let chi = if dec.rank() > 2 {
        let mut m1 = nalgebra::DMatrix::zeros(d, d);
        let mut m2 = nalgebra::DMatrix::zeros(d, d);
        for i in 0..2 {
            let odd = dec.basis_ket(2 * i);
            let even = dec.basis_ket(2 * i + 1);
            m1 += odd.vector() * odd.vector().adjoint();
            m2 += even.vector() * even.vector().adjoint();
        }
        let pairproj = fermibell::individuation::ProjectorPair::new(
            fermibell::linalg::Operator::new(m1),
            fermibell::linalg::Operator::new(m2),
            tol::DEFAULT,
        )
        .map_err(CliError::numerical)?;
        pi_local_filter(pair, &pairproj).map_err(CliError::numerical)?
    } else {
        pair.clone()
    };
    let t1 = pauli_triplet_on(&dec.basis_ket(0), &dec.basis_ket(2)).map_err(CliError::numerical)?;
    let t2 = pauli_triplet_on(&dec.basis_ket(1), &dec.basis_ket(3)).map_err(CliError::numerical)?;

    let chi_dec = slater_decompose(&chi).map_err(CliError::numerical)?;
    let params = chi_dec.two_block_params().map_err(CliError::numerical)?;
    let choice: AngleChoice = match opts.optimizer {
        OptimizerChoice::Paper => paper_angles(&params).map_err(CliError::numerical)?,
        OptimizerChoice::Stationary => stationary_angles(&params).map_err(CliError::numerical)?,
        OptimizerChoice::Grid => unreachable!("handled above"),
    };
    let cfg = ChshConfiguration::new(
        t1,
        t2,
        [choice.a, choice.a_prime, choice.b, choice.b_prime],
    )
    .map_err(CliError::numerical)?;
    let correlations = evaluate_pi_configuration(&chi, &cfg).map_err(CliError::numerical)?;
    let value = chsh_value(correlations);
    let verdict = if value > 2.0 + tol::CERT_MARGIN {
        Verdict::Violates
    } else {
        Verdict::Satisfies
    };
    Ok(BellCertificate {
        regime: Regime::PermutationInvariant,
        value,
        verdict,
        chi: Some(chi.joint()),
        configuration: Some(cfg),
        correlations: Some(correlations),
        closed_forms: grid_cert.closed_forms,
        note: None,
    })
}

fn map_section(
    pair: &FermionPairState,
    bases: (usize, usize, usize, usize),
) -> Result<MapSection, CliError> {
    let d = pair.single_dim();
    let (lu, ld, ru, rd) = bases;
    for &i in &[lu, ld, ru, rd] {
        if i >= d {
            return Err(CliError::Input(format!(
                "location basis index {} out of range 1..={d}",
                i + 1
            )));
        }
    }
    let left = Subspace::new(d, vec![Ket::basis(d, lu), Ket::basis(d, ld)], tol::DEFAULT)
        .map_err(CliError::input_from)?;
    let right = Subspace::new(d, vec![Ket::basis(d, ru), Ket::basis(d, rd)], tol::DEFAULT)
        .map_err(CliError::input_from)?;
    let image = map_to_distinguishable(pair, &left, &right).map_err(CliError::input_from)?;
    let cert = gisin_distinguishable(&image).map_err(CliError::numerical)?;
    Ok(MapSection {
        left_basis: [lu + 1, ld + 1],
        right_basis: [ru + 1, rd + 1],
        image: joint_section_of(&image),
        image_certificate: certificate_section(&cert),
    })
}

/// Resolve `--left-basis/--right-basis` flags or fall back to labels.
pub fn resolve_location_bases(
    parsed: &ParsedState,
    left_flag: Option<(usize, usize)>,
    right_flag: Option<(usize, usize)>,
) -> Option<(usize, usize, usize, usize)> {
    match (left_flag, right_flag) {
        (Some((lu, ld)), Some((ru, rd))) => Some((lu, ld, ru, rd)),
        _ => parsed
            .labels
            .as_ref()
            .and_then(scenarios::location_bases_from_labels),
    }
}

/// Full analysis: canonical decomposition, GMW verdict, individuating pair,
/// Bell certificate, and (when location bases are known) the
/// distinguishable-map cross-check.
pub fn cmd_analyze(
    parsed: &ParsedState,
    opts: &Options,
    location_bases: Option<(usize, usize, usize, usize)>,
) -> Result<AnalysisReport, CliError> {
    let pair = parsed.pair()?;
    let mut report = base_report(parsed, opts);
    report.slater = Some(slater_section(&pair)?);
    report.gmw_entangled = Some(report.slater.as_ref().map(|s| s.rank >= 2).unwrap());
    report.individuation = Some(individuation_section(&pair)?);
    report.bell = Some(certificate_section(&bell_certificate(&pair, opts)?));
    if let Some(bases) = location_bases {
        report.map_distinguishable = Some(map_section(&pair, bases)?);
    }
    Ok(report)
}

/// Canonical decomposition only.
pub fn cmd_slater(parsed: &ParsedState, opts: &Options) -> Result<AnalysisReport, CliError> {
    let pair = parsed.pair()?;
    let mut report = base_report(parsed, opts);
    report.slater = Some(slater_section(&pair)?);
    report.gmw_entangled = Some(report.slater.as_ref().map(|s| s.rank >= 2).unwrap());
    Ok(report)
}

/// Bell certificate only.
pub fn cmd_bell(parsed: &ParsedState, opts: &Options) -> Result<AnalysisReport, CliError> {
    let pair = parsed.pair()?;
    let mut report = base_report(parsed, opts);
    report.bell = Some(certificate_section(&bell_certificate(&pair, opts)?));
    Ok(report)
}

/// Individuating projector pair only.
pub fn cmd_individuate(parsed: &ParsedState, opts: &Options) -> Result<AnalysisReport, CliError> {
    let pair = parsed.pair()?;
    let mut report = base_report(parsed, opts);
    report.individuation = Some(individuation_section(&pair)?);
    Ok(report)
}

/// Distinguishable-map cross-check only.
pub fn cmd_map_distinguishable(
    parsed: &ParsedState,
    opts: &Options,
    location_bases: Option<(usize, usize, usize, usize)>,
) -> Result<AnalysisReport, CliError> {
    let pair = parsed.pair()?;
    let bases = location_bases.ok_or_else(|| {
        CliError::Input(
            "location bases required: pass --left-basis UP,DOWN and --right-basis UP,DOWN \
             (1-based indices), or use a state file with L/R spin labels"
                .into(),
        )
    })?;
    let mut report = base_report(parsed, opts);
    report.map_distinguishable = Some(map_section(&pair, bases)?);
    Ok(report)
}

/// Reproducible random state of exactly the requested Slater rank.
pub fn cmd_random(dim: usize, rank: usize, seed: u64) -> Result<StateFile, CliError> {
    let state = random_fermion_pair(dim, rank, seed).map_err(CliError::input_from)?;
    Ok(emit_dense(&state, None))
}

/// Direct optimizer entry for library consumers of the CLI crate: used by
/// tests to cross-check emitted certificates against fresh optimizer runs.
pub fn optimize_direct(pair: &FermionPairState) -> Result<BellCertificate, CliError> {
    let dec = slater_decompose(pair).map_err(CliError::numerical)?;
    let t1 = pauli_triplet_on(&dec.basis_ket(0), &dec.basis_ket(2)).map_err(CliError::numerical)?;
    let t2 = pauli_triplet_on(&dec.basis_ket(1), &dec.basis_ket(3)).map_err(CliError::numerical)?;
    optimize_chsh_pi(pair, &t1, &t2).map_err(CliError::numerical)
}

/// Scenario states with their labels, for `--scenario`.
pub fn scenario_state(name: &str, tolerance: f64) -> Result<ParsedState, CliError> {
    let file = scenarios::by_name(name)?;
    crate::statefile::parse_file(&file, tolerance)
}

/// Labels for a report echo of generated corpora.
pub fn no_labels() -> Option<BTreeMap<String, String>> {
    None
}
