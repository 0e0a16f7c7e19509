use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Occupation bit-string `|i_1 ... i_L>`; `bits[0]` is site 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FockConfig {
    bits: Vec<bool>,
}

impl FockConfig {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn vacuum(sites: usize) -> Self {
        Self { bits: alloc::vec![false; sites] }
    }

    /// Site `k` (0-based) occupied iff bit `k` of `mask` is set.
    pub fn from_mask(sites: usize, mask: u64) -> Self {
        Self { bits: (0..sites).map(|k| (mask >> k) & 1 == 1).collect() }
    }

    /// Parses `"010"`-style strings, first character being site 1.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidConfig(String::from(s))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bits })
    }

    pub fn sites(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_occupied(&self, site: usize) -> bool {
        self.bits[site]
    }

    /// `I_1`, 0-based and increasing.
    pub fn occupied(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&k| self.bits[k]).collect()
    }

    /// `I_0`, 0-based and increasing.
    pub fn empty(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&k| !self.bits[k]).collect()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `true` for odd particle number.
    pub fn is_odd(&self) -> bool {
        self.count() % 2 == 1
    }

    /// Number of occupied sites strictly before `site`.
    pub fn occupied_before(&self, site: usize) -> usize {
        self.bits[..site].iter().filter(|&&b| b).count()
    }

    pub fn with_site(&self, site: usize, occupied: bool) -> Self {
        let mut bits = self.bits.clone();
        bits[site] = occupied;
        Self { bits }
    }

    /// Flips the occupation of every site in `sites`.
    pub fn flipped(&self, sites: &[usize]) -> Self {
        let mut bits = self.bits.clone();
        for &k in sites {
            bits[k] = !bits[k];
        }
        Self { bits }
    }

    /// The configuration with `head` prepended as a new site 0.
    pub fn prepend(&self, head: bool) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len() + 1);
        bits.push(head);
        bits.extend_from_slice(&self.bits);
        Self { bits }
    }

    /// Applies `c_site` (or its adjoint) and returns the sign `(-1)^{occupied before}`, or
    /// `None` when the result vanishes.
    pub fn act(&self, site: usize, dagger: bool) -> Option<(f64, Self)> {
        if self.bits[site] == dagger {
            return None;
        }
        let sign = if self.occupied_before(site) % 2 == 0 { 1.0 } else { -1.0 };
        Some((sign, self.with_site(site, dagger)))
    }

    /// All `2^sites` configurations, site 1 varying slowest.
    pub fn all(sites: usize) -> impl Iterator<Item = FockConfig> {
        (0..1u64 << sites).map(move |idx| Self { bits: (0..sites).map(|k| (idx >> (sites - 1 - k)) & 1 == 1).collect() })
    }
}

impl FromStr for FockConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for FockConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_display() {
        let c = FockConfig::parse("0110").unwrap();
        assert_eq!(c.occupied(), [1, 2]);
        assert_eq!(c.empty(), [0, 3]);
        assert!(!c.is_odd());
        assert_eq!(c.to_string(), "0110");
        assert!(FockConfig::parse("01x").is_err());
        assert_eq!(FockConfig::parse("").unwrap().sites(), 0);
    }

    #[test]
    fn action_signs() {
        // c_2^dag |100> = -|110>
        let c = FockConfig::parse("100").unwrap();
        let (s, out) = c.act(1, true).unwrap();
        assert_eq!((s, out.to_string().as_str()), (-1.0, "110"));
        assert!(c.act(0, true).is_none());
        assert!(c.act(2, false).is_none());
    }

    #[test]
    fn enumeration_order() {
        let all: Vec<_> = FockConfig::all(2).map(|c| c.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        assert_eq!(FockConfig::from_mask(3, 0b101).to_string(), "101");
    }
}
