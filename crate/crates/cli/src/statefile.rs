//! Versioned text format for fermionic states.
//!
//! JSON with explicit `[re, im]` pairs, hand-authorable and diffable:
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "single_dim": 4,
//!   "encoding": "wedge_terms",
//!   "payload": [ { "coefficient": [0.7071067811865476, 0.0], "indices": [1, 2] } ],
//!   "labels": { "1": "L↑", "2": "R↓" }
//! }
//! ```
//!
//! * `indices` are 1-based in files (converted internally to 0-based).
//! * `encoding = "dense_matrix"` carries the row-major `d×d` coefficient
//!   matrix as a flat list of `[re, im]` pairs; it must be antisymmetric
//!   within tolerance.
//! * Duplicate index tuples are summed (with a warning); unsorted tuples are
//!   canonicalized with the wedge sign.
//! * `labels` are cosmetic metadata only; no analysis reads them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use fermibell::exterior::{FermionState, WedgeTerm};
use fermibell::linalg::c64;
use fermibell::slater::FermionPairState;

use crate::CliError;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub format_version: String,
    pub single_dim: usize,
    pub encoding: Encoding,
    pub payload: Payload,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    WedgeTerms,
    DenseMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    WedgeTerms(Vec<WedgeEntry>),
    DenseMatrix(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeEntry {
    pub coefficient: [f64; 2],
    /// 1-based basis indices.
    pub indices: Vec<usize>,
}

/// A parsed state plus parse-time observations.
#[derive(Debug, Clone)]
pub struct ParsedState {
    pub state: FermionState,
    /// Norm of the raw input before normalization.
    pub input_norm: f64,
    pub warnings: Vec<String>,
    pub labels: Option<BTreeMap<String, String>>,
}

impl ParsedState {
    pub fn pair(&self) -> Result<FermionPairState, CliError> {
        if self.state.n_particles() != 2 {
            return Err(CliError::Input(format!(
                "this command needs a two-fermion state, got {} particles",
                self.state.n_particles()
            )));
        }
        FermionPairState::from_wedge_terms(&self.state)
            .map_err(|e| CliError::Input(format!("state is not a valid pair state: {e}")))
    }
}

pub fn parse_str(text: &str, tolerance: f64) -> Result<ParsedState, CliError> {
    let file: StateFile = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("malformed state file: {e}")))?;
    parse_file(&file, tolerance)
}

pub fn parse_file(file: &StateFile, tolerance: f64) -> Result<ParsedState, CliError> {
    if file.format_version != FORMAT_VERSION {
        return Err(CliError::Input(format!(
            "unsupported format_version {:?} (expected {FORMAT_VERSION:?})",
            file.format_version
        )));
    }
    let d = file.single_dim;
    if d == 0 {
        return Err(CliError::Input("single_dim must be >= 1".into()));
    }
    let mut warnings = Vec::new();
    let state = match (&file.encoding, &file.payload) {
        (Encoding::WedgeTerms, Payload::WedgeTerms(entries)) => {
            parse_wedge_terms(d, entries, &mut warnings)?
        }
        (Encoding::DenseMatrix, Payload::DenseMatrix(cells)) => {
            parse_dense(d, cells, tolerance)?
        }
        _ => {
            return Err(CliError::Input(
                "payload shape does not match the declared encoding".into(),
            ))
        }
    };
    let input_norm = state.norm();
    if input_norm <= f64::EPSILON {
        return Err(CliError::Input("state has zero norm".into()));
    }
    if (input_norm - 1.0).abs() > tolerance {
        warnings.push(format!(
            "input norm {input_norm:.12} differs from 1; state was renormalized"
        ));
    }
    let state = state
        .normalized()
        .map_err(|e| CliError::Input(format!("cannot normalize state: {e}")))?;
    Ok(ParsedState {
        state,
        input_norm,
        warnings,
        labels: file.labels.clone(),
    })
}

fn parse_wedge_terms(
    d: usize,
    entries: &[WedgeEntry],
    warnings: &mut Vec<String>,
) -> Result<FermionState, CliError> {
    if entries.is_empty() {
        return Err(CliError::Input("payload has no wedge terms".into()));
    }
    let n = entries[0].indices.len();
    if n < 2 {
        return Err(CliError::Input(format!(
            "payload[0]: wedge terms need at least 2 indices, got {n}"
        )));
    }
    let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut terms = Vec::with_capacity(entries.len());
    for (pos, entry) in entries.iter().enumerate() {
        if entry.indices.len() != n {
            return Err(CliError::Input(format!(
                "payload[{pos}]: expected {n} indices, got {}",
                entry.indices.len()
            )));
        }
        let mut indices = Vec::with_capacity(n);
        for &raw in &entry.indices {
            if raw == 0 || raw > d {
                return Err(CliError::Input(format!(
                    "payload[{pos}]: index {raw} out of range 1..={d}"
                )));
            }
            indices.push(raw - 1);
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            warnings.push(format!(
                "payload[{pos}]: repeated index annihilates the term; dropped"
            ));
            continue;
        }
        if let Some(first) = seen.insert(sorted, pos) {
            warnings.push(format!(
                "payload[{pos}]: duplicate index tuple (first at payload[{first}]); coefficients summed"
            ));
        }
        terms.push(WedgeTerm {
            coefficient: c64(entry.coefficient[0], entry.coefficient[1]),
            indices,
        });
    }
    FermionState::new(d, n, terms).map_err(|e| CliError::Input(format!("invalid state: {e}")))
}

fn parse_dense(d: usize, cells: &[[f64; 2]], tolerance: f64) -> Result<FermionState, CliError> {
    if cells.len() != d * d {
        return Err(CliError::Input(format!(
            "dense payload has {} cells, expected {}x{} = {}",
            cells.len(),
            d,
            d,
            d * d
        )));
    }
    let m = nalgebra::DMatrix::from_fn(d, d, |i, j| {
        let cell = cells[i * d + j];
        c64(cell[0], cell[1])
    });
    let norm = m.norm();
    let pair = FermionPairState::from_matrix(m, tolerance)
        .map_err(|e| CliError::Input(format!("dense matrix rejected: {e}")))?;
    // scale back so the caller sees the original norm before normalization
    let state = pair.to_wedge_state().scaled(c64(norm, 0.0));
    Ok(state)
}

/// Canonical emission: two-particle states as sorted wedge terms.
pub fn emit(state: &FermionState, labels: Option<&BTreeMap<String, String>>) -> StateFile {
    let entries = state
        .terms()
        .map(|t| WedgeEntry {
            coefficient: [t.coefficient.re, t.coefficient.im],
            indices: t.indices.iter().map(|&i| i + 1).collect(),
        })
        .collect();
    StateFile {
        format_version: FORMAT_VERSION.to_string(),
        single_dim: state.single_dim(),
        encoding: Encoding::WedgeTerms,
        payload: Payload::WedgeTerms(entries),
        labels: labels.cloned(),
    }
}

/// Emission in the dense encoding (used by the corpus generator).
pub fn emit_dense(pair: &FermionPairState, labels: Option<&BTreeMap<String, String>>) -> StateFile {
    let d = pair.single_dim();
    let m = pair.matrix();
    let cells = (0..d * d)
        .map(|k| {
            let z = m[(k / d, k % d)];
            [z.re, z.im]
        })
        .collect();
    StateFile {
        format_version: FORMAT_VERSION.to_string(),
        single_dim: d,
        encoding: Encoding::DenseMatrix,
        payload: Payload::DenseMatrix(cells),
        labels: labels.cloned(),
    }
}

pub fn to_json(file: &StateFile) -> String {
    serde_json::to_string_pretty(file).expect("state files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SINGLET: &str = r#"{
        "format_version": "1",
        "single_dim": 2,
        "encoding": "wedge_terms",
        "payload": [ { "coefficient": [1.0, 0.0], "indices": [1, 2] } ]
    }"#;

    #[test]
    fn parses_singlet_wedge_file() {
        let parsed = parse_str(SINGLET, 1e-9).unwrap();
        assert_eq!(parsed.state.n_particles(), 2);
        let pair = parsed.pair().unwrap();
        assert!((pair.matrix()[(0, 1)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn rejects_out_of_range_index() {
        let text = SINGLET.replace("[1, 2]", "[1, 3]");
        let err = parse_str(&text, 1e-9).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
        assert!(err.to_string().contains("payload[0]"), "{err}");
    }

    #[test]
    fn duplicate_tuples_are_summed_with_warning() {
        let text = r#"{
            "format_version": "1",
            "single_dim": 2,
            "encoding": "wedge_terms",
            "payload": [
                { "coefficient": [0.5, 0.0], "indices": [1, 2] },
                { "coefficient": [0.0, 0.5], "indices": [2, 1] }
            ]
        }"#;
        let parsed = parse_str(text, 1e-9).unwrap();
        assert_eq!(parsed.warnings.len(), 2); // duplicate + renormalization
        assert!(parsed.warnings[0].contains("duplicate"));
        // (2,1) flips sign: 0.5 − 0.5i on tuple (1,2), then normalized
        let c = parsed.state.coefficient(&[0, 1]);
        assert!((c.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((c.im + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn dense_matrix_must_be_antisymmetric() {
        let text = r#"{
            "format_version": "1",
            "single_dim": 2,
            "encoding": "dense_matrix",
            "payload": [ [0.0,0.0], [1.0,0.0], [1.0,0.0], [0.0,0.0] ]
        }"#;
        let err = parse_str(text, 1e-9).unwrap_err();
        assert!(err.to_string().contains("antisymmetric"), "{err}");
    }

    #[test]
    fn norm_deviation_is_reported() {
        let text = SINGLET.replace("[1.0, 0.0]", "[2.0, 0.0]");
        let parsed = parse_str(&text, 1e-9).unwrap();
        assert!((parsed.input_norm - 2.0).abs() < 1e-12);
        assert!(parsed.warnings.iter().any(|w| w.contains("renormalized")));
    }

    #[test]
    fn round_trip_both_encodings() {
        let parsed = parse_str(SINGLET, 1e-9).unwrap();
        let wedge_again =
            parse_file(&emit(&parsed.state, None), 1e-9).unwrap();
        let overlap = wedge_again.state.inner(&parsed.state).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);

        let pair = parsed.pair().unwrap();
        let dense_again = parse_file(&emit_dense(&pair, None), 1e-9).unwrap();
        let pair_again = dense_again.pair().unwrap();
        let overlap = pair_again.inner(&pair).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let text = SINGLET.replace("\"1\"", "\"2\"");
        assert!(parse_str(&text, 1e-9).is_err());
    }
}
