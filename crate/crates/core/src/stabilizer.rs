//! Symplectic representation of N-qubit stabilizer groups and the exact
//! fast path for the length of correlations.
//!
//! For a stabilizer state every Pauli-string expectation is ±1 (strings in
//! the group up to sign) or 0 (everything else), so the sum of squared
//! full-weight correlations is simply the number of group elements with no
//! identity tensor factor. Signs never matter for the count.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::PureState;

/// A Pauli string on up to 64 qubits as X/Z bit masks plus a sign.
///
/// Bit `n − 1 − q` of each mask refers to party `q`, matching the bit
/// layout of amplitude indices (party 0 most significant). A set x-bit and
/// z-bit together denote Y on that qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliWord {
    pub x: u64,
    pub z: u64,
    pub negative: bool,
}

impl PauliWord {
    pub fn identity() -> Self {
        Self { x: 0, z: 0, negative: false }
    }

    /// Number of qubits (out of `n`) acted on non-trivially.
    pub fn weight(&self, n: usize) -> usize {
        ((self.x | self.z) & mask_n(n)).count_ones() as usize
    }

    /// True when the two words commute (symplectic product is even).
    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        anti.is_multiple_of(2)
    }

    /// Apply to a dense amplitude vector of `n` qubits.
    pub fn apply(&self, n: usize, amps: &[Complex64]) -> Vec<Complex64> {
        let dim = 1usize << n;
        debug_assert_eq!(amps.len(), dim);
        let ny = (self.x & self.z).count_ones() as usize;
        let mut global = match ny % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if self.negative {
            global = -global;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for i in 0..dim {
            let sign = if ((i as u64 & self.z).count_ones() & 1) == 1 {
                -1.0
            } else {
                1.0
            };
            out[i ^ self.x as usize] = amps[i] * global * Complex64::new(sign, 0.0);
        }
        out
    }
}

fn mask_n(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An abelian group of 2^N Pauli strings given by N independent generators.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliWord>,
}

impl StabilizerGroup {
    /// Validates pairwise commutation and GF(2) independence of the
    /// generators; exactly `n` generators are required so the group has
    /// order 2^n.
    pub fn new(n: usize, generators: Vec<PauliWord>) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::InvalidStabilizer(format!(
                "qubit count {n} outside supported range 1..=30"
            )));
        }
        if generators.len() != n {
            return Err(Error::InvalidStabilizer(format!(
                "{} generators for {n} qubits",
                generators.len()
            )));
        }
        for (i, a) in generators.iter().enumerate() {
            if (a.x | a.z) & !mask_n(n) != 0 {
                return Err(Error::InvalidStabilizer(format!(
                    "generator {i} acts outside the {n}-qubit register"
                )));
            }
            for (j, b) in generators.iter().enumerate().skip(i + 1) {
                if !a.commutes_with(b) {
                    return Err(Error::InvalidStabilizer(format!(
                        "generators {i} and {j} anticommute"
                    )));
                }
            }
        }
        // GF(2) rank of the (x|z) rows must be n.
        let mut rows: Vec<u128> = generators
            .iter()
            .map(|g| ((g.x as u128) << 64) | g.z as u128)
            .collect();
        let mut rank = 0usize;
        for bit in (0..128).rev() {
            let pivot = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1);
            if let Some(p) = pivot {
                rows.swap(rank, p);
                for r in 0..rows.len() {
                    if r != rank && rows[r] >> bit & 1 == 1 {
                        rows[r] ^= rows[rank];
                    }
                }
                rank += 1;
            }
        }
        if rank != n {
            return Err(Error::InvalidStabilizer(format!(
                "generators are dependent (rank {rank} of {n})"
            )));
        }
        Ok(Self { n, generators })
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.generators
    }

    /// The group element for a generator subset (bit k selects generator k).
    /// Sign tracking is omitted; only the support pattern is produced.
    pub fn element_support(&self, subset: u64) -> (u64, u64) {
        let mut x = 0u64;
        let mut z = 0u64;
        for (k, g) in self.generators.iter().enumerate() {
            if subset >> k & 1 == 1 {
                x ^= g.x;
                z ^= g.z;
            }
        }
        (x, z)
    }

    /// Number of group elements acting non-trivially on every qubit.
    ///
    /// Iterates all 2^N elements in Gray-code order, so each step XORs a
    /// single generator. For a stabilizer state this equals the length of
    /// correlations exactly.
    pub fn full_weight_count(&self) -> u64 {
        let full = mask_n(self.n);
        let total: u64 = 1u64 << self.n;
        let mut x = 0u64;
        let mut z = 0u64;
        let mut count = 0u64;
        for s in 1..total {
            let g = &self.generators[s.trailing_zeros() as usize];
            x ^= g.x;
            z ^= g.z;
            if x | z == full {
                count += 1;
            }
        }
        count
    }

    /// Check that every generator fixes `state` (with its sign), i.e.
    /// `g|ψ⟩ = |ψ⟩` to within `tol` in norm.
    pub fn stabilizes(&self, state: &PureState, tol: f64) -> bool {
        if state.shape().party_count() != self.n || !state.shape().is_qubits() {
            return false;
        }
        for g in &self.generators {
            let mapped = g.apply(self.n, state.amplitudes());
            let dist_sq: f64 = mapped
                .iter()
                .zip(state.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            if dist_sq.sqrt() > tol {
                return false;
            }
        }
        true
    }
}

fn bit(n: usize, party: usize) -> u64 {
    1u64 << (n - 1 - party)
}

/// Generators of the GHZ stabilizer: X on every qubit, plus ZZ on each
/// adjacent pair.
pub fn ghz_group(n: usize) -> Result<StabilizerGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("ghz needs at least one qubit".into()));
    }
    let mut gens = vec![PauliWord {
        x: mask_n(n),
        z: 0,
        negative: false,
    }];
    for q in 0..n.saturating_sub(1) {
        gens.push(PauliWord {
            x: 0,
            z: bit(n, q) | bit(n, q + 1),
            negative: false,
        });
    }
    StabilizerGroup::new(n, gens)
}

/// Node generators of the `rows × cols` cluster state: Z on the node,
/// X on each lattice neighbour.
pub fn cluster_group(rows: usize, cols: usize) -> Result<StabilizerGroup> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("lattice must be non-empty".into()));
    }
    let n = rows * cols;
    if n > 30 {
        return Err(Error::SizeGuard(format!(
            "stabilizer enumeration capped at 30 qubits, lattice has {n}"
        )));
    }
    let mut gens = Vec::with_capacity(n);
    for r in 0..rows {
        for c in 0..cols {
            let a = r * cols + c;
            let mut x = 0u64;
            if c > 0 {
                x |= bit(n, a - 1);
            }
            if c + 1 < cols {
                x |= bit(n, a + 1);
            }
            if r > 0 {
                x |= bit(n, a - cols);
            }
            if r + 1 < rows {
                x |= bit(n, a + cols);
            }
            gens.push(PauliWord {
                x,
                z: bit(n, a),
                negative: false,
            });
        }
    }
    StabilizerGroup::new(n, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz3_group_counts_four() {
        // ⟨XXX, ZZI, IZZ⟩ has exactly {XXX, YYX, YXY, XYY} at full weight
        let g = ghz_group(3).unwrap();
        assert_eq!(g.full_weight_count(), 4);
    }

    #[test]
    fn ghz4_group_counts_nine() {
        assert_eq!(ghz_group(4).unwrap().full_weight_count(), 9);
    }

    #[test]
    fn anticommuting_generators_rejected() {
        // X and Z on the same qubit anticommute
        let x = PauliWord { x: 1, z: 0, negative: false };
        let z = PauliWord { x: 0, z: 1, negative: false };
        assert!(StabilizerGroup::new(2, vec![x, z]).is_err());
        // XZ and ZX on two qubits anticommute in both slots, hence commute
        assert!(StabilizerGroup::new(
            2,
            vec![
                PauliWord { x: 0b10, z: 0b01, negative: false },
                PauliWord { x: 0b01, z: 0b10, negative: false },
            ]
        )
        .is_ok());
    }

    #[test]
    fn dependent_generators_rejected() {
        let g1 = PauliWord { x: 0b11, z: 0, negative: false };
        let g2 = PauliWord { x: 0b11, z: 0, negative: false };
        assert!(StabilizerGroup::new(2, vec![g1, g2]).is_err());
    }

    #[test]
    fn ghz_group_stabilizes_ghz_state() {
        for n in 2..=6 {
            let g = ghz_group(n).unwrap();
            let state = crate::named::ghz(n, 2).unwrap();
            assert!(g.stabilizes(&state, 1e-10), "n={n}");
        }
    }

    #[test]
    fn word_application_tracks_phases() {
        // Y|0⟩ = i|1⟩
        let y = PauliWord { x: 1, z: 1, negative: false };
        let out = y.apply(1, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!((out[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(out[0].norm() < 1e-15);
        // −Y|0⟩ = −i|1⟩
        let minus_y = PauliWord { x: 1, z: 1, negative: true };
        let out = minus_y.apply(1, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!((out[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn signed_generators_distinguish_states() {
        // ⟨−X⟩ fixes |−⟩, not |+⟩
        let n = 1;
        let group = StabilizerGroup::new(
            n,
            vec![PauliWord { x: 1, z: 0, negative: true }],
        )
        .unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = crate::state::PureState::new(
            crate::state::SystemShape::qubits(1).unwrap(),
            vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
        )
        .unwrap();
        let minus = crate::state::PureState::new(
            crate::state::SystemShape::qubits(1).unwrap(),
            vec![Complex64::new(r, 0.0), Complex64::new(-r, 0.0)],
        )
        .unwrap();
        assert!(!group.stabilizes(&plus, 1e-10));
        assert!(group.stabilizes(&minus, 1e-10));
    }

    #[test]
    fn subset_products_agree_with_gray_code_count() {
        // independent enumeration through element_support
        for group in [ghz_group(5).unwrap(), cluster_group(2, 3).unwrap()] {
            let n = group.qubit_count();
            let full = (1u64 << n) - 1;
            let mut count = 0u64;
            for subset in 0..(1u64 << n) {
                let (x, z) = group.element_support(subset);
                if x | z == full {
                    count += 1;
                }
            }
            assert_eq!(count, group.full_weight_count());
        }
    }
}
