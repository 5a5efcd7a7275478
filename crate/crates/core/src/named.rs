//! Factories for the named states used throughout the toolkit, plus the
//! `name:args` mini-language the CLI exposes (`ghz:4`, `cluster:2x3`,
//! `wfamily:0.5`, ...).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::stabilizer::{cluster_group, StabilizerGroup};
use crate::state::{tensor_product, DensityMatrix, PureState, State, SystemShape};

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn cre(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Bell pair flavours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    /// (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// (|01⟩ − |10⟩)/√2, the singlet
    PsiMinus,
}

/// GHZ state of `n` parties of dimension `d`: (Σ_k |k…k⟩)/√d.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    let shape = SystemShape::qudits(n, d)?;
    let total = shape.total_dim();
    let mut amps = vec![czero(); total];
    let a = cre(1.0 / (d as f64).sqrt());
    for k in 0..d {
        let mut idx = 0usize;
        for _ in 0..n {
            idx = idx * d + k;
        }
        amps[idx] = a;
    }
    PureState::new(shape, amps)
}

/// Dicke state of `n` qubits with Hamming weight `k`: the equal
/// superposition of all weight-k bitstrings.
pub fn dicke(n: usize, k: usize) -> Result<PureState> {
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "dicke weight {k} exceeds qubit count {n}"
        )));
    }
    let shape = SystemShape::qubits(n)?;
    let mut amps = vec![czero(); shape.total_dim()];
    let mut count = 0usize;
    for (i, a) in amps.iter_mut().enumerate() {
        if (i as u64).count_ones() as usize == k {
            *a = cre(1.0);
            count += 1;
        }
    }
    let norm = cre(1.0 / (count as f64).sqrt());
    for a in &mut amps {
        *a *= norm;
    }
    PureState::new(shape, amps)
}

/// W state of `n` qubits (the weight-1 Dicke state).
pub fn w_state(n: usize) -> Result<PureState> {
    dicke(n, 1)
}

pub fn bell(kind: BellKind) -> PureState {
    let (i, j, sign) = match kind {
        BellKind::PhiPlus => (0usize, 3usize, 1.0),
        BellKind::PhiMinus => (0, 3, -1.0),
        BellKind::PsiPlus => (1, 2, 1.0),
        BellKind::PsiMinus => (1, 2, -1.0),
    };
    let mut amps = vec![czero(); 4];
    amps[i] = cre(std::f64::consts::FRAC_1_SQRT_2);
    amps[j] = cre(sign * std::f64::consts::FRAC_1_SQRT_2);
    PureState::new(SystemShape::qubits(2).unwrap(), amps).unwrap()
}

/// The four-qubit double singlet |ψ−⟩|ψ−⟩.
pub fn double_singlet() -> PureState {
    let s = bell(BellKind::PsiMinus);
    tensor_product(&[s.clone(), s]).unwrap()
}

/// Computational product state |i_0 i_1 …⟩ with uniform local dimension.
pub fn product_basis_state(digits: &[usize], d: usize) -> Result<PureState> {
    let shape = SystemShape::qudits(digits.len(), d)?;
    PureState::basis_state(shape, digits)
}

/// Superposition (|0⟩|a⟩ + |1⟩|b⟩)/√2 of two states on equal shapes.
fn branch_superposition(a: &PureState, b: &PureState) -> Result<PureState> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch("branches differ in shape".into()));
    }
    let mut dims = vec![2usize];
    dims.extend_from_slice(a.shape().dims());
    let half = cre(std::f64::consts::FRAC_1_SQRT_2);
    let mut amps = Vec::with_capacity(2 * a.amplitudes().len());
    amps.extend(a.amplitudes().iter().map(|x| x * half));
    amps.extend(b.amplitudes().iter().map(|x| x * half));
    PureState::new(SystemShape::new(dims)?, amps)
}

/// The five-qubit state (|0⟩|GHZ₄⟩ + |1⟩|D₄²⟩)/√2 whose correlation length
/// increases under a computational-basis measurement of the first qubit.
pub fn five_qubit_counterexample() -> PureState {
    branch_superposition(&ghz(4, 2).unwrap(), &dicke(4, 2).unwrap()).unwrap()
}

/// Five-qubit state (|0⟩|ψ−⟩|ψ−⟩ + |1⟩|ψ+⟩|ψ+⟩)/√2; convertible by local
/// operations to [`locc_phi`] even though its correlation length is lower.
pub fn locc_psi() -> PureState {
    let minus = bell(BellKind::PsiMinus);
    let plus = bell(BellKind::PsiPlus);
    let a = tensor_product(&[minus.clone(), minus]).unwrap();
    let b = tensor_product(&[plus.clone(), plus]).unwrap();
    branch_superposition(&a, &b).unwrap()
}

/// Five-qubit product |0⟩|ψ−⟩|ψ−⟩, the target of the conversion.
pub fn locc_phi() -> PureState {
    let zero = product_basis_state(&[0], 2).unwrap();
    let minus = bell(BellKind::PsiMinus);
    tensor_product(&[zero, minus.clone(), minus]).unwrap()
}

/// 2D cluster state on a `rows × cols` grid.
///
/// Built by the circuit route: controlled-phase across every lattice edge
/// applied to |+⟩^⊗N, followed by a Hadamard on every qubit so that the
/// node operators take the form Z on the node and X on its neighbours.
/// The construction is verified against all node stabilizer conditions
/// before being returned.
pub fn cluster(rows: usize, cols: usize) -> Result<PureState> {
    let n = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::InvalidArgument("lattice too large".into()))?;
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("lattice must be non-empty".into()));
    }
    if n > 16 {
        return Err(Error::SizeGuard(format!(
            "dense cluster construction capped at 16 qubits, got {n}"
        )));
    }
    let shape = SystemShape::qubits(n)?;
    let dim = shape.total_dim();
    let amp = cre(1.0 / (dim as f64).sqrt());
    let mut amps = vec![amp; dim];

    // controlled-phase on each edge: negate amplitudes where both bits are 1
    let group = cluster_group(rows, cols)?;
    for (a, b) in grid_edges(rows, cols) {
        let mask = (1usize << (n - 1 - a)) | (1usize << (n - 1 - b));
        for (i, v) in amps.iter_mut().enumerate() {
            if i & mask == mask {
                *v = -*v;
            }
        }
    }

    // Hadamard on every qubit
    let h = cre(std::f64::consts::FRAC_1_SQRT_2);
    for q in 0..n {
        let stride = 1usize << (n - 1 - q);
        let mut i = 0;
        while i < dim {
            for off in 0..stride {
                let lo = i + off;
                let hi = lo + stride;
                let (a, b) = (amps[lo], amps[hi]);
                amps[lo] = (a + b) * h;
                amps[hi] = (a - b) * h;
            }
            i += 2 * stride;
        }
    }
    let state = PureState::new(shape, amps)?;
    if !group.stabilizes(&state, 1e-9) {
        return Err(Error::InvalidState(
            "cluster construction failed its node stabilizer conditions".into(),
        ));
    }
    Ok(state)
}

fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let a = r * cols + c;
            if c + 1 < cols {
                edges.push((a, a + 1));
            }
            if r + 1 < rows {
                edges.push((a, a + cols));
            }
        }
    }
    edges
}

/// Rank-3 family (1−p)|W₃⟩⟨W₃| + p ρ_n, where ρ_n is the uniform mixture
/// of the three weight-1 basis states.
pub fn w_family(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p={p} outside [0, 1]")));
    }
    let w = w_state(3)?.to_density_matrix();
    let noise_parts: Vec<(f64, DensityMatrix)> = [0b100usize, 0b010, 0b001]
        .iter()
        .map(|&i| {
            let digits = [(i >> 2) & 1, (i >> 1) & 1, i & 1];
            (
                1.0 / 3.0,
                product_basis_state(&digits, 2).unwrap().to_density_matrix(),
            )
        })
        .collect();
    let noise = DensityMatrix::mixture(&noise_parts)?;
    DensityMatrix::mixture(&[(1.0 - p, w), (p, noise)])
}

/// Parsed form of the `name:args` state mini-language.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Ghz { n: usize, d: usize },
    Dicke { n: usize, k: usize },
    W { n: usize },
    Bell(BellKind),
    DoubleSinglet,
    FiveQubitCounterexample,
    LoccPsi,
    LoccPhi,
    Cluster { rows: usize, cols: usize },
    Product { digits: Vec<usize>, d: usize },
    WFamily { p: f64 },
    File(String),
}

impl StateSpec {
    /// Accepts `ghz:N[:d]`, `dicke:N:k`, `w:N`, `bell:phi+|phi-|psi+|psi-`,
    /// `double_singlet`, `five_qubit`, `locc_psi`, `locc_phi`,
    /// `cluster:RxC`, `product:i,j,k[:d]`, `wfamily:p`, `file:<path>`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidArgument(format!("state spec '{text}': {msg}"));
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (text, None),
        };
        let parse_usize = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| bad(&format!("'{s}' is not a count")))
        };
        match name {
            "ghz" => {
                let rest = rest.ok_or_else(|| bad("needs ghz:N[:d]"))?;
                let mut it = rest.split(':');
                let n = parse_usize(it.next().unwrap())?;
                let d = match it.next() {
                    Some(s) => parse_usize(s)?,
                    None => 2,
                };
                if it.next().is_some() {
                    return Err(bad("too many fields"));
                }
                Ok(StateSpec::Ghz { n, d })
            }
            "dicke" => {
                let rest = rest.ok_or_else(|| bad("needs dicke:N:k"))?;
                let (n, k) = rest.split_once(':').ok_or_else(|| bad("needs dicke:N:k"))?;
                Ok(StateSpec::Dicke {
                    n: parse_usize(n)?,
                    k: parse_usize(k)?,
                })
            }
            "w" => Ok(StateSpec::W {
                n: parse_usize(rest.ok_or_else(|| bad("needs w:N"))?)?,
            }),
            "bell" => {
                let kind = match rest.ok_or_else(|| bad("needs bell:kind"))? {
                    "phi+" => BellKind::PhiPlus,
                    "phi-" => BellKind::PhiMinus,
                    "psi+" => BellKind::PsiPlus,
                    "psi-" => BellKind::PsiMinus,
                    other => return Err(bad(&format!("unknown bell kind '{other}'"))),
                };
                Ok(StateSpec::Bell(kind))
            }
            "double_singlet" => Ok(StateSpec::DoubleSinglet),
            "five_qubit" => Ok(StateSpec::FiveQubitCounterexample),
            "locc_psi" => Ok(StateSpec::LoccPsi),
            "locc_phi" => Ok(StateSpec::LoccPhi),
            "cluster" => {
                let rest = rest.ok_or_else(|| bad("needs cluster:RxC"))?;
                let (r, c) = rest.split_once('x').ok_or_else(|| bad("needs cluster:RxC"))?;
                Ok(StateSpec::Cluster {
                    rows: parse_usize(r)?,
                    cols: parse_usize(c)?,
                })
            }
            "product" => {
                let rest = rest.ok_or_else(|| bad("needs product:i,j,k[:d]"))?;
                let (digits_part, d) = match rest.split_once(':') {
                    Some((dp, ds)) => (dp, parse_usize(ds)?),
                    None => (rest, 2),
                };
                let digits = digits_part
                    .split(',')
                    .map(parse_usize)
                    .collect::<Result<Vec<_>>>()?;
                Ok(StateSpec::Product { digits, d })
            }
            "wfamily" => {
                let p: f64 = rest
                    .ok_or_else(|| bad("needs wfamily:p"))?
                    .parse()
                    .map_err(|_| bad("p is not a number"))?;
                Ok(StateSpec::WFamily { p })
            }
            "file" => Ok(StateSpec::File(
                rest.ok_or_else(|| bad("needs file:<path>"))?.to_string(),
            )),
            other => Err(bad(&format!("unknown state name '{other}'"))),
        }
    }

    /// Build the state. `File` specs are resolved through [`crate::io`].
    pub fn build(&self) -> Result<State> {
        Ok(match self {
            StateSpec::Ghz { n, d } => ghz(*n, *d)?.into(),
            StateSpec::Dicke { n, k } => dicke(*n, *k)?.into(),
            StateSpec::W { n } => w_state(*n)?.into(),
            StateSpec::Bell(kind) => bell(*kind).into(),
            StateSpec::DoubleSinglet => double_singlet().into(),
            StateSpec::FiveQubitCounterexample => five_qubit_counterexample().into(),
            StateSpec::LoccPsi => locc_psi().into(),
            StateSpec::LoccPhi => locc_phi().into(),
            StateSpec::Cluster { rows, cols } => cluster(*rows, *cols)?.into(),
            StateSpec::Product { digits, d } => product_basis_state(digits, *d)?.into(),
            StateSpec::WFamily { p } => w_family(*p)?.into(),
            StateSpec::File(path) => crate::io::load_state(std::path::Path::new(path))?,
        })
    }
}

/// Stabilizer generators for the GHZ state of `n` qubits:
/// X on every qubit, plus Z on each adjacent pair.
pub fn ghz_group(n: usize) -> Result<StabilizerGroup> {
    crate::stabilizer::ghz_group(n)
}
