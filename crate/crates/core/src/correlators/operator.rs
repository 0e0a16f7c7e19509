use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use fermigauss_numkernel::C64;

use crate::error::{Error, Result};

/// `c_site` or `c_site^dag`; `site` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeOperator {
    pub site: usize,
    pub dagger: bool,
}

impl ModeOperator {
    pub fn annihilation(site: usize) -> Self {
        Self { site, dagger: false }
    }

    pub fn creation(site: usize) -> Self {
        Self { site, dagger: true }
    }

    pub fn adjoint(self) -> Self {
        Self { dagger: !self.dagger, ..self }
    }

    /// Row of the transfer matrix acting on this mode in `s = (c; c^dag)`.
    pub fn row(&self, sites: usize) -> usize {
        if self.dagger {
            sites + self.site
        } else {
            self.site
        }
    }

    /// Coefficients in `s = (c; c^dag)`.
    pub fn vector(&self, sites: usize) -> Vec<C64> {
        let mut w = alloc::vec![C64::new(0.0, 0.0); 2 * sites];
        w[self.row(sites)] = C64::new(1.0, 0.0);
        w
    }

    fn check(&self, sites: usize) -> Result<()> {
        if self.site >= sites {
            return Err(Error::SiteOutOfRange { site: self.site + 1, sites });
        }
        Ok(())
    }
}

/// Tokens `c3` (annihilation) and `cd3` (creation), 1-based site.
impl FromStr for ModeOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidOperator(String::from(s));
        let body = s.strip_prefix('c').ok_or_else(bad)?;
        let (num, dagger) = match body.strip_prefix('d') {
            Some(n) => (n, true),
            None => (body, false),
        };
        if !num.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let site: usize = num.parse().map_err(|_| bad())?;
        if site == 0 {
            return Err(bad());
        }
        Ok(Self { site: site - 1, dagger })
    }
}

impl fmt::Display for ModeOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.dagger { "cd" } else { "c" }, self.site + 1)
    }
}

/// An ordered product `phi_1 phi_2 ... phi_n`; `phi_n` acts first on the ket.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperatorString {
    ops: Vec<ModeOperator>,
}

impl OperatorString {
    pub fn new(ops: Vec<ModeOperator>) -> Self {
        Self { ops }
    }

    /// Whitespace or comma separated tokens, e.g. `"cd1 c2 c3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let ops = s.split(|ch: char| ch.is_whitespace() || ch == ',').filter(|t| !t.is_empty()).map(str::parse).collect::<Result<Vec<_>>>()?;
        Ok(Self { ops })
    }

    pub fn ops(&self) -> &[ModeOperator] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.ops.len() % 2 == 1
    }

    pub fn check_sites(&self, sites: usize) -> Result<()> {
        self.ops.iter().try_for_each(|op| op.check(sites))
    }
}

impl FromStr for OperatorString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for OperatorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, op) in self.ops.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Sign of `s_k^{e1} s_l^{e2} |I>` relative to the resulting basis state, or `None` when the
/// product annihilates `|I>`. `e = true` is a creation operator.
///
/// For `k < l` the sign is `(-1)^{i_k + ... + i_{l-1}}`, for `k > l` it is
/// `(-1)^{i_l + ... + i_{k-1} + 1}` and for `k = l` it is `+1`.
pub fn pair_action_sign(ket: &crate::FockConfig, k: usize, e1: bool, l: usize, e2: bool) -> Option<f64> {
    let bits = ket.bits();
    if bits[l] == e2 {
        return None;
    }
    let after_l = if k == l { e2 } else { bits[k] };
    if after_l == e1 {
        return None;
    }
    let parity = |range: core::ops::Range<usize>| bits[range].iter().filter(|&&b| b).count();
    let odd = match k.cmp(&l) {
        core::cmp::Ordering::Less => parity(k..l) % 2 == 1,
        core::cmp::Ordering::Greater => (parity(l..k) + 1) % 2 == 1,
        core::cmp::Ordering::Equal => false,
    };
    Some(if odd { -1.0 } else { 1.0 })
}
