//! JSON state files.
//!
//! Pure:  `{"dims": [d1, …], "kind": "pure",  "amplitudes": [[re, im], …]}`
//! Mixed: `{"dims": [d1, …], "kind": "mixed", "matrix": [[[re, im], …], …]}`
//!
//! Amplitudes and matrix rows are row-major with the first listed party as
//! the most significant tensor factor.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::state::{DensityMatrix, PureState, State, SystemShape};

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

pub fn state_to_json(state: &State) -> Result<String> {
    let file = match state {
        State::Pure(p) => StateFile {
            dims: p.shape().dims().to_vec(),
            kind: "pure".into(),
            amplitudes: Some(p.amplitudes().iter().map(|a| [a.re, a.im]).collect()),
            matrix: None,
        },
        State::Mixed(m) => {
            let n = m.shape().total_dim();
            let rows = (0..n)
                .map(|i| (0..n).map(|j| {
                    let z = m.matrix()[(i, j)];
                    [z.re, z.im]
                }).collect())
                .collect();
            StateFile {
                dims: m.shape().dims().to_vec(),
                kind: "mixed".into(),
                amplitudes: None,
                matrix: Some(rows),
            }
        }
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn state_from_json(text: &str) -> Result<State> {
    let file: StateFile = serde_json::from_str(text)?;
    let shape = SystemShape::new(file.dims)?;
    match file.kind.as_str() {
        "pure" => {
            let amps = file
                .amplitudes
                .ok_or_else(|| Error::InvalidArgument("pure state needs 'amplitudes'".into()))?
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect();
            Ok(State::Pure(PureState::new(shape, amps)?))
        }
        "mixed" => {
            let rows = file
                .matrix
                .ok_or_else(|| Error::InvalidArgument("mixed state needs 'matrix'".into()))?;
            let n = shape.total_dim();
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::ShapeMismatch(format!("matrix must be {n}x{n}")));
            }
            let mat = CMat::from_fn(n, n, |i, j| {
                let [re, im] = rows[i][j];
                Complex64::new(re, im)
            });
            Ok(State::Mixed(DensityMatrix::new(shape, mat)?))
        }
        other => Err(Error::InvalidArgument(format!("unknown state kind '{other}'"))),
    }
}

pub fn save_state(state: &State, path: &Path) -> Result<()> {
    fs::write(path, state_to_json(state)?)?;
    Ok(())
}

pub fn load_state(path: &Path) -> Result<State> {
    state_from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn pure_roundtrip() {
        let orig = State::from(named::ghz(3, 2).unwrap());
        let text = state_to_json(&orig).unwrap();
        let back = state_from_json(&text).unwrap();
        match (&orig, &back) {
            (State::Pure(a), State::Pure(b)) => {
                assert_eq!(a.shape(), b.shape());
                for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                    assert!((x - y).norm() < 1e-15);
                }
            }
            _ => panic!("kind changed in roundtrip"),
        }
    }

    #[test]
    fn mixed_roundtrip() {
        let orig = State::from(named::w_family(0.3).unwrap());
        let text = state_to_json(&orig).unwrap();
        let back = state_from_json(&text).unwrap();
        match (&orig, &back) {
            (State::Mixed(a), State::Mixed(b)) => {
                assert!(crate::linalg::frobenius_distance(a.matrix(), b.matrix()) < 1e-14);
            }
            _ => panic!("kind changed in roundtrip"),
        }
    }

    #[test]
    fn invalid_states_rejected_on_load() {
        let bad = r#"{"dims": [2], "kind": "pure", "amplitudes": [[1.0, 0.0], [1.0, 0.0]]}"#;
        assert!(state_from_json(bad).is_err());
        let bad = r#"{"dims": [2], "kind": "funky"}"#;
        assert!(state_from_json(bad).is_err());
    }
}
