//! Input-file schemas: a state is given as one of
//! `{"spectrum": [..]}`, `{"density": {"re": [[..]], "im": [[..]]}}` or
//! `{"bipartite": {"re": [[..]], "im": [[..]]}}`.

use num_complex::Complex64;
use serde::Deserialize;

use wehrl::{eigen_spectrum, schmidt_spectrum, BipartitePureState, HermitianState, Spectrum};

use crate::Failure;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub spectrum: Option<Vec<f64>>,
    pub density: Option<MatrixInput>,
    pub bipartite: Option<MatrixInput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixInput {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// A parsed and validated input state, with the spectrum every report is
/// computed from.
pub struct LoadedState {
    pub source: &'static str,
    pub spectrum: Spectrum,
    pub density: Option<HermitianState>,
    pub bipartite: Option<BipartitePureState>,
}

pub fn load_state(path: &std::path::Path) -> Result<LoadedState, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let parsed: InputFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    state_from_input(parsed)
}

pub fn state_from_input(input: InputFile) -> Result<LoadedState, Failure> {
    let given = [
        input.spectrum.is_some(),
        input.density.is_some(),
        input.bipartite.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if given != 1 {
        return Err(Failure::Parse(
            "exactly one of the fields `spectrum`, `density`, `bipartite` must be present"
                .to_owned(),
        ));
    }
    if let Some(values) = input.spectrum {
        let spectrum = Spectrum::new(values).map_err(invariant("spectrum"))?;
        return Ok(LoadedState {
            source: "spectrum",
            spectrum,
            density: None,
            bipartite: None,
        });
    }
    if let Some(matrix) = input.density {
        let entries = complex_entries(&matrix, "density", true)?;
        let dim = matrix.re.len();
        let rho = HermitianState::new(dim, entries).map_err(invariant("density"))?;
        let spectrum = eigen_spectrum(&rho).map_err(invariant("density"))?;
        return Ok(LoadedState {
            source: "density",
            spectrum,
            density: Some(rho),
            bipartite: None,
        });
    }
    let matrix = input.bipartite.expect("one field is present");
    let rows = complex_rows(&matrix, "bipartite")?;
    let psi = BipartitePureState::from_rows(&rows).map_err(invariant("bipartite"))?;
    let spectrum = schmidt_spectrum(&psi).map_err(invariant("bipartite"))?;
    Ok(LoadedState {
        source: "bipartite",
        spectrum,
        density: None,
        bipartite: Some(psi),
    })
}

fn invariant(field: &'static str) -> impl Fn(wehrl::Error) -> Failure {
    move |e| Failure::Invariant(format!("{field}: {e}"))
}

fn complex_rows(matrix: &MatrixInput, field: &str) -> Result<Vec<Vec<Complex64>>, Failure> {
    if matrix.re.len() != matrix.im.len() {
        return Err(Failure::Parse(format!(
            "{field}.re and {field}.im must have the same number of rows"
        )));
    }
    let mut rows = Vec::with_capacity(matrix.re.len());
    for (i, (re_row, im_row)) in matrix.re.iter().zip(&matrix.im).enumerate() {
        if re_row.len() != im_row.len() {
            return Err(Failure::Parse(format!(
                "{field}.re[{i}] and {field}.im[{i}] differ in length"
            )));
        }
        rows.push(
            re_row
                .iter()
                .zip(im_row)
                .map(|(&re, &im)| Complex64::new(re, im))
                .collect(),
        );
    }
    Ok(rows)
}

fn complex_entries(
    matrix: &MatrixInput,
    field: &str,
    square: bool,
) -> Result<Vec<Complex64>, Failure> {
    let rows = complex_rows(matrix, field)?;
    let n = rows.len();
    if square {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Failure::Parse(format!(
                    "{field}.re must be square; row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
    }
    Ok(rows.into_iter().flatten().collect())
}
