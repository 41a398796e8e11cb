//! Canned scenario states.
//!
//! Basis convention for the two-electron scenarios (location ⊗ spin packed
//! into one four-dimensional single-system space):
//! `e1 = |L↑⟩, e2 = |R↓⟩, e3 = |L↓⟩, e4 = |R↑⟩`.

use std::collections::BTreeMap;

use crate::statefile::{Encoding, Payload, StateFile, WedgeEntry, FORMAT_VERSION};
use crate::CliError;

pub const NAMES: [&str; 3] = ["singlet", "eprb", "lr-product"];

pub fn by_name(name: &str) -> Result<StateFile, CliError> {
    match name {
        "singlet" => Ok(singlet()),
        "eprb" => Ok(eprb()),
        "lr-product" => Ok(lr_product()),
        other => Err(CliError::Input(format!(
            "unknown scenario {other:?}; available: {}",
            NAMES.join(", ")
        ))),
    }
}

fn spin_labels() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("1".to_string(), "↑".to_string()),
        ("2".to_string(), "↓".to_string()),
    ])
}

fn electron_labels() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("1".to_string(), "L↑".to_string()),
        ("2".to_string(), "R↓".to_string()),
        ("3".to_string(), "L↓".to_string()),
        ("4".to_string(), "R↑".to_string()),
    ])
}

/// Spin singlet `|↑⟩∧|↓⟩` in a two-dimensional single-system space.
pub fn singlet() -> StateFile {
    StateFile {
        format_version: FORMAT_VERSION.to_string(),
        single_dim: 2,
        encoding: Encoding::WedgeTerms,
        payload: Payload::WedgeTerms(vec![WedgeEntry {
            coefficient: [1.0, 0.0],
            indices: vec![1, 2],
        }]),
        labels: Some(spin_labels()),
    }
}

/// The two-electron EPRB state
/// `(|L↑⟩∧|R↓⟩ − |L↓⟩∧|R↑⟩)/√2`.
pub fn eprb() -> StateFile {
    let c = std::f64::consts::FRAC_1_SQRT_2;
    StateFile {
        format_version: FORMAT_VERSION.to_string(),
        single_dim: 4,
        encoding: Encoding::WedgeTerms,
        payload: Payload::WedgeTerms(vec![
            WedgeEntry {
                coefficient: [c, 0.0],
                indices: vec![1, 2],
            },
            WedgeEntry {
                coefficient: [-c, 0.0],
                indices: vec![3, 4],
            },
        ]),
        labels: Some(electron_labels()),
    }
}

/// The product-form state `|L↑⟩∧|R↓⟩`: one electron on each side, definite
/// spins, not GMW-entangled.
pub fn lr_product() -> StateFile {
    StateFile {
        format_version: FORMAT_VERSION.to_string(),
        single_dim: 4,
        encoding: Encoding::WedgeTerms,
        payload: Payload::WedgeTerms(vec![WedgeEntry {
            coefficient: [1.0, 0.0],
            indices: vec![1, 2],
        }]),
        labels: Some(electron_labels()),
    }
}

/// Derive the ordered (up, down) location bases from labels of the form
/// "L↑"/"L↓"/"R↑"/"R↓", when present. Returns 0-based index quadruple
/// `(l_up, l_down, r_up, r_down)`.
pub fn location_bases_from_labels(
    labels: &BTreeMap<String, String>,
) -> Option<(usize, usize, usize, usize)> {
    let mut l_up = None;
    let mut l_down = None;
    let mut r_up = None;
    let mut r_down = None;
    for (key, label) in labels {
        let idx: usize = key.parse().ok()?;
        let slot = match (label.starts_with('L'), label.ends_with('↑')) {
            (true, true) => &mut l_up,
            (true, false) if label.ends_with('↓') => &mut l_down,
            (false, true) if label.starts_with('R') => &mut r_up,
            (false, false) if label.starts_with('R') && label.ends_with('↓') => &mut r_down,
            _ => return None,
        };
        if slot.replace(idx - 1).is_some() {
            return None; // duplicate label
        }
    }
    Some((l_up?, l_down?, r_up?, r_down?))
}
