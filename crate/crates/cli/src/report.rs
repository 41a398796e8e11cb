//! Analysis report schema (versioned, stable key order) and the
//! from-scratch certificate verifier.
//!
//! Machine reports are JSON with a fixed field order so fixed inputs produce
//! byte-stable output. Every number in a report is recomputable from the
//! embedded state and configuration; `verify_report` does exactly that.

use serde::{Deserialize, Serialize};

use fermibell::bell::{
    chsh_value, evaluate_distinguishable_configuration, evaluate_pi_configuration,
    pauli_triplet_on, BellCertificate, ChshConfiguration, Regime, Verdict,
};
use fermibell::linalg::{c64, C64, JointKet, Ket};
use fermibell::slater::FermionPairState;
use fermibell::tol;

use crate::statefile::StateFile;
use crate::CliError;

pub const REPORT_VERSION: &str = "1";
/// Recomputed correlations must match the embedded ones this closely.
pub const VERIFY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub report_version: String,
    pub generator: Generator,
    pub state: StateFile,
    pub input_norm: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slater: Option<SlaterSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gmw_entangled: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub individuation: Option<IndividuationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bell: Option<CertificateSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map_distinguishable: Option<MapSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub version: String,
    pub optimizer: String,
    pub tolerance: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlaterSection {
    pub rank: usize,
    /// Wedge-normalized coefficients, descending magnitude, as [re, im].
    pub coefficients: Vec<[f64; 2]>,
    pub magnitudes: Vec<f64>,
    /// Column-major d×d congruence unitary, each entry [re, im].
    pub basis_unitary: Vec<[f64; 2]>,
    pub reconstruction_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndividuationSection {
    pub rank_e1: usize,
    pub rank_e2: usize,
    pub orthogonality_error: f64,
    pub exhaustion_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateSection {
    pub regime: String,
    pub verdict: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlations: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_forms: Option<ClosedFormsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<JointSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triplet1_span: Option<[Vec<[f64; 2]>; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triplet2_span: Option<[Vec<[f64; 2]>; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions: Option<DirectionsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedFormsSection {
    pub xi: f64,
    pub gamma: f64,
    pub eta_form_value: f64,
    pub stationary_value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointSection {
    pub single_dim: usize,
    /// Row-major amplitudes, each [re, im].
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionsSection {
    pub a: [f64; 3],
    pub a_prime: [f64; 3],
    pub b: [f64; 3],
    pub b_prime: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSection {
    /// 1-based indices (up, down) of the left location basis, matching the
    /// state-file index convention.
    pub left_basis: [usize; 2],
    pub right_basis: [usize; 2],
    /// The mapped two-qubit state.
    pub image: JointSection,
    /// CHSH certificate of the image under the distinguishable construction.
    pub image_certificate: CertificateSection,
}

fn complex_list(values: impl Iterator<Item = C64>) -> Vec<[f64; 2]> {
    values.map(|z| [z.re, z.im]).collect()
}

fn ket_entries(k: &Ket) -> Vec<[f64; 2]> {
    complex_list(k.vector().iter().copied())
}

pub fn joint_section_of(j: &JointKet) -> JointSection {
    let d = j.single_dim();
    JointSection {
        single_dim: d,
        amplitudes: complex_list((0..d * d).map(|k| j.amplitudes()[(k / d, k % d)])),
    }
}

fn joint_from_section(s: &JointSection) -> Result<JointKet, CliError> {
    let d = s.single_dim;
    if s.amplitudes.len() != d * d {
        return Err(CliError::Input(format!(
            "chi has {} amplitudes, expected {}",
            s.amplitudes.len(),
            d * d
        )));
    }
    let m = nalgebra::DMatrix::from_fn(d, d, |i, j| {
        let cell = s.amplitudes[i * d + j];
        c64(cell[0], cell[1])
    });
    JointKet::new(m).map_err(|e| CliError::Input(format!("invalid chi: {e}")))
}

fn ket_from_entries(dim: usize, entries: &[[f64; 2]]) -> Result<Ket, CliError> {
    if entries.len() != dim {
        return Err(CliError::Input(format!(
            "span vector has {} entries, expected {dim}",
            entries.len()
        )));
    }
    Ket::new(entries.iter().map(|e| c64(e[0], e[1])).collect())
        .map_err(|e| CliError::Input(format!("invalid span vector: {e}")))
}

pub fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::Distinguishable => "distinguishable",
        Regime::PermutationInvariant => "permutation_invariant",
    }
}

pub fn verdict_name(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Violates => "violates",
        Verdict::Satisfies => "satisfies",
    }
}

pub fn certificate_section(cert: &BellCertificate) -> CertificateSection {
    let (triplet1_span, triplet2_span, directions) = match &cert.configuration {
        Some(cfg) => {
            let (u1, v1) = cfg.triplet1.span();
            let (u2, v2) = cfg.triplet2.span();
            (
                Some([ket_entries(u1), ket_entries(v1)]),
                Some([ket_entries(u2), ket_entries(v2)]),
                Some(DirectionsSection {
                    a: cfg.a,
                    a_prime: cfg.a_prime,
                    b: cfg.b,
                    b_prime: cfg.b_prime,
                }),
            )
        }
        None => (None, None, None),
    };
    CertificateSection {
        regime: regime_name(cert.regime).to_string(),
        verdict: verdict_name(cert.verdict).to_string(),
        value: cert.value,
        correlations: cert.correlations,
        closed_forms: cert.closed_forms.map(|cf| ClosedFormsSection {
            xi: cf.xi,
            gamma: cf.gamma,
            eta_form_value: cf.eta_form_value,
            stationary_value: cf.stationary_value,
        }),
        chi: cert.chi.as_ref().map(joint_section_of),
        triplet1_span,
        triplet2_span,
        directions,
        note: cert.note.clone(),
    }
}

/// Outcome of re-deriving a certificate from its embedded data.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub checks: Vec<CheckLine>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub ok: bool,
    pub detail: String,
}

fn push(checks: &mut Vec<CheckLine>, check: &str, ok: bool, detail: String) {
    checks.push(CheckLine {
        check: check.to_string(),
        ok,
        detail,
    });
}

/// Recompute all four correlations and the CHSH combination from the
/// embedded state and configuration, and confirm the recorded values and
/// verdict. Certificates without a configuration verify only their verdict
/// bookkeeping.
pub fn verify_certificate(section: &CertificateSection) -> Result<Verification, CliError> {
    let mut checks = Vec::new();

    let (Some(chi), Some(t1_span), Some(t2_span), Some(dirs), Some(correlations)) = (
        &section.chi,
        &section.triplet1_span,
        &section.triplet2_span,
        &section.directions,
        &section.correlations,
    ) else {
        if section.verdict == "satisfies" && section.note.is_some() {
            push(
                &mut checks,
                "degenerate-certificate",
                true,
                "no configuration embedded; satisfaction by construction".into(),
            );
            return Ok(Verification {
                valid: true,
                checks,
            });
        }
        return Err(CliError::Input(
            "certificate is incomplete: missing state, spans, directions or correlations".into(),
        ));
    };

    // A certificate whose embedded configuration fails its own invariants
    // (non-unit directions, non-orthonormal spans, non-fermionic chi) is a
    // failed verification, not a malformed input: tampering must surface as
    // `valid: false`.
    let mut invalid = |check: &str, detail: String| -> Verification {
        push(&mut checks, check, false, detail);
        Verification {
            valid: false,
            checks: std::mem::take(&mut checks),
        }
    };

    let d = chi.single_dim;
    let joint = joint_from_section(chi)?;
    let t1 = match pauli_triplet_on(
        &ket_from_entries(d, &t1_span[0])?,
        &ket_from_entries(d, &t1_span[1])?,
    ) {
        Ok(t) => t,
        Err(e) => return Ok(invalid("triplet1-span", e.to_string())),
    };
    let t2 = match pauli_triplet_on(
        &ket_from_entries(d, &t2_span[0])?,
        &ket_from_entries(d, &t2_span[1])?,
    ) {
        Ok(t) => t,
        Err(e) => return Ok(invalid("triplet2-span", e.to_string())),
    };
    let cfg = match ChshConfiguration::new(t1, t2, [dirs.a, dirs.a_prime, dirs.b, dirs.b_prime]) {
        Ok(c) => c,
        Err(e) => return Ok(invalid("directions", e.to_string())),
    };

    let recomputed = match section.regime.as_str() {
        "permutation_invariant" => {
            let pair = match FermionPairState::from_matrix(joint.amplitudes().clone(), tol::DEFAULT)
            {
                Ok(p) => p,
                Err(e) => return Ok(invalid("chi", e.to_string())),
            };
            evaluate_pi_configuration(&pair, &cfg)
        }
        "distinguishable" => evaluate_distinguishable_configuration(&joint, &cfg),
        other => return Err(CliError::Input(format!("unknown regime {other:?}"))),
    };
    let recomputed = match recomputed {
        Ok(r) => r,
        Err(e) => return Ok(invalid("re-evaluation", e.to_string())),
    };

    let mut corr_ok = true;
    for (k, (got, want)) in recomputed.iter().zip(correlations).enumerate() {
        if (got - want).abs() > VERIFY_TOLERANCE {
            corr_ok = false;
            push(
                &mut checks,
                "correlation",
                false,
                format!("correlation {k}: recomputed {got:.12} vs recorded {want:.12}"),
            );
        }
    }
    if corr_ok {
        push(
            &mut checks,
            "correlations",
            true,
            "all four correlations reproduce".into(),
        );
    }

    let value = chsh_value(recomputed);
    let value_ok = (value - section.value).abs() <= VERIFY_TOLERANCE;
    push(
        &mut checks,
        "chsh-value",
        value_ok,
        format!("recomputed {value:.12} vs recorded {:.12}", section.value),
    );

    let expected_verdict = if value > 2.0 + tol::CERT_MARGIN {
        "violates"
    } else {
        "satisfies"
    };
    let verdict_ok = section.verdict == expected_verdict;
    push(
        &mut checks,
        "verdict",
        verdict_ok,
        format!(
            "value {value:.12} implies {expected_verdict:?}, recorded {:?}",
            section.verdict
        ),
    );

    Ok(Verification {
        valid: corr_ok && value_ok && verdict_ok,
        checks,
    })
}

pub fn to_json(report: &AnalysisReport) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

pub fn from_json(text: &str) -> Result<AnalysisReport, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed report: {e}")))
}

/// Plain-text rendering for terminals.
pub fn render_human(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let push_line = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push_line(
        &mut out,
        format!(
            "fermibell report v{} (optimizer: {}, tolerance: {:.1e})",
            report.report_version, report.generator.optimizer, report.generator.tolerance
        ),
    );
    push_line(
        &mut out,
        format!(
            "state: single_dim {}, input norm {:.12}",
            report.state.single_dim, report.input_norm
        ),
    );
    for w in &report.warnings {
        push_line(&mut out, format!("warning: {w}"));
    }
    if let Some(s) = &report.slater {
        push_line(
            &mut out,
            format!(
                "slater: rank {}, |c| = [{}], reconstruction error {:.3e}",
                s.rank,
                s.magnitudes
                    .iter()
                    .map(|m| format!("{m:.6}"))
                    .collect::<Vec<_>>()
                    .join(", "),
                s.reconstruction_error
            ),
        );
    }
    if let Some(g) = report.gmw_entangled {
        push_line(
            &mut out,
            format!("gmw-entangled: {}", if g { "yes" } else { "no" }),
        );
    }
    if let Some(i) = &report.individuation {
        push_line(
            &mut out,
            format!(
                "individuation: ranks ({}, {}), orthogonality {:.3e}, exhaustion residual {:.3e}",
                i.rank_e1, i.rank_e2, i.orthogonality_error, i.exhaustion_residual
            ),
        );
    }
    if let Some(b) = &report.bell {
        push_line(
            &mut out,
            format!(
                "bell ({}): {} with value {:.9}",
                b.regime,
                b.verdict.to_uppercase(),
                b.value
            ),
        );
        if let Some(cf) = &b.closed_forms {
            push_line(
                &mut out,
                format!(
                    "  closed forms: eta-form {:.9}, stationary {:.9} (xi {:.9}, gamma {:.9})",
                    cf.eta_form_value, cf.stationary_value, cf.xi, cf.gamma
                ),
            );
        }
        if let Some(d) = &b.directions {
            push_line(&mut out, format!("  a  = {:?}\n  a' = {:?}", d.a, d.a_prime));
            push_line(&mut out, format!("  b  = {:?}\n  b' = {:?}", d.b, d.b_prime));
        }
        if let Some(n) = &b.note {
            push_line(&mut out, format!("  note: {n}"));
        }
    }
    if let Some(m) = &report.map_distinguishable {
        push_line(
            &mut out,
            format!(
                "distinguishable image: {} with value {:.9} (left basis {:?}, right basis {:?})",
                m.image_certificate.verdict.to_uppercase(),
                m.image_certificate.value,
                m.left_basis,
                m.right_basis
            ),
        );
    }
    out
}
