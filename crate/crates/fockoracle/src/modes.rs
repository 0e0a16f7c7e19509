use alloc::vec::Vec;

use fermigauss_numkernel::{ComplexMatrix, C64};

use crate::{DenseOperator, OracleError, MAX_MODE_SITES};

/// Basis index of an occupation string, site 1 (`bits[0]`) being the most significant bit.
pub fn basis_index(bits: &[bool]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

/// Inverse of [`basis_index`].
pub fn basis_bits(sites: usize, index: usize) -> Vec<bool> {
    (0..sites).map(|k| (index >> (sites - 1 - k)) & 1 == 1).collect()
}

/// Sign relating the fermionic state `prod_{i in I, increasing} c_i^dag |0>` to the spin state
/// with the same up/down pattern, when `c_l = prod_{j<l} sigma^z_j sigma^-_l` and
/// `sigma^z |down> = -|down>`: `(-1)^{sum_{i in I} (i - 1)}` with 1-based `i`.
pub fn spin_basis_sign(bits: &[bool]) -> f64 {
    let s: usize = bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k).sum();
    if s % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// One Jordan-Wigner mode operator. Kept sparse: it maps each basis state to at most one
/// basis state with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JwMode {
    pub sites: usize,
    /// 0-based site.
    pub site: usize,
    pub dagger: bool,
}

impl JwMode {
    /// Action on a basis index in the fermionic basis.
    pub fn act(&self, index: usize) -> Option<(f64, usize)> {
        let bit = 1usize << (self.sites - 1 - self.site);
        let occupied = index & bit != 0;
        if occupied == self.dagger {
            return None;
        }
        // number of occupied sites before this one: the higher-order bits
        let before = (index >> (self.sites - self.site)).count_ones();
        let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
        Some((sign, index ^ bit))
    }

    pub fn apply(&self, state: &[C64]) -> Vec<C64> {
        let mut out = alloc::vec![C64::new(0.0, 0.0); state.len()];
        for (i, &amp) in state.iter().enumerate() {
            if let Some((s, j)) = self.act(i) {
                out[j] += amp * s;
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseOperator {
        let dim = 1usize << self.sites;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            if let Some((s, j)) = self.act(i) {
                m[(j, i)] = C64::new(s, 0.0);
            }
        }
        DenseOperator::from_parts(self.sites, m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModePair {
    pub annihilation: JwMode,
    pub creation: JwMode,
}

/// The `L` Jordan-Wigner mode pairs `(c_i, c_i^dag)`, `i = 1..L`.
pub fn build_modes(sites: usize) -> Result<Vec<ModePair>, OracleError> {
    if sites > MAX_MODE_SITES {
        return Err(OracleError::TooManySites { sites, max: MAX_MODE_SITES });
    }
    Ok((0..sites).map(|site| ModePair { annihilation: JwMode { sites, site, dagger: false }, creation: JwMode { sites, site, dagger: true } }).collect())
}

/// Normalized basis vector of `|I>`, built literally as `c_{i_1}^dag c_{i_2}^dag ... |0>`.
pub fn fock_state(bits: &[bool]) -> Vec<C64> {
    let sites = bits.len();
    let mut state = alloc::vec![C64::new(0.0, 0.0); 1usize << sites];
    state[0] = C64::new(1.0, 0.0);
    for site in (0..sites).rev().filter(|&k| bits[k]) {
        state = JwMode { sites, site, dagger: true }.apply(&state);
    }
    state
}

/// Jordan-Wigner modes acting on the spin basis, with `sigma^z = diag(-1, +1)` on
/// `(|down>, |up>)` and `up` read as occupied.
pub fn spin_mode(sites: usize, site: usize, dagger: bool) -> DenseOperator {
    let dim = 1usize << sites;
    let mut m = ComplexMatrix::zeros(dim, dim);
    let bit = 1usize << (sites - 1 - site);
    for i in 0..dim {
        let up = i & bit != 0;
        if up == dagger {
            continue;
        }
        let downs_before = (0..site).filter(|&j| i & (1usize << (sites - 1 - j)) == 0).count();
        let sign = if downs_before % 2 == 0 { 1.0 } else { -1.0 };
        m[(i ^ bit, i)] = C64::new(sign, 0.0);
    }
    DenseOperator::from_parts(sites, m)
}
