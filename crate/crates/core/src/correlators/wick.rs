use alloc::vec::Vec;

use fermigauss_numkernel::C64;

/// A complete contraction of `phi_1 ... phi_n`: disjoint pairs (each in original order)
/// plus at most one singleton, with the parity of the permutation taking the string to
/// `(pair_1, pair_2, ..., singleton)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contraction {
    pub pairs: Vec<(usize, usize)>,
    pub singleton: Option<usize>,
    pub sign: f64,
}

impl Contraction {
    pub fn factors(&self) -> usize {
        self.pairs.len() + self.singleton.is_some() as usize
    }
}

/// All contractions of `n` operators into pairs and exactly `n mod 2` singletons.
pub fn contractions(n: usize) -> Vec<Contraction> {
    let mut out = Vec::new();
    let mut used = alloc::vec![false; n];
    let mut pairs = Vec::new();
    recurse(n, &mut used, &mut pairs, None, &mut out);
    out
}

fn recurse(n: usize, used: &mut [bool], pairs: &mut Vec<(usize, usize)>, singleton: Option<usize>, out: &mut Vec<Contraction>) {
    let Some(i) = (0..n).find(|&k| !used[k]) else {
        let mut order: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        order.extend(singleton);
        out.push(Contraction { pairs: pairs.clone(), singleton, sign: permutation_sign(&order) });
        return;
    };
    used[i] = true;
    if n % 2 == 1 && singleton.is_none() {
        recurse(n, used, pairs, Some(i), out);
    }
    for j in i + 1..n {
        if used[j] {
            continue;
        }
        used[j] = true;
        pairs.push((i, j));
        recurse(n, used, pairs, singleton, out);
        pairs.pop();
        used[j] = false;
    }
    used[i] = false;
}

fn permutation_sign(order: &[usize]) -> f64 {
    let inversions: usize = (0..order.len()).map(|a| (a + 1..order.len()).filter(|&b| order[a] > order[b]).count()).sum();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// One term of a contraction expansion: `sign * prod(factors)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WickTerm {
    pub contraction: Contraction,
    /// Pair values in the order of `contraction.pairs`, then the singleton value.
    pub factors: Vec<C64>,
    pub value: C64,
}

/// `sum_terms value / overlap^{factors - 1}` together with the term table.
#[derive(Clone, Debug, PartialEq)]
pub struct WickExpansion {
    pub terms: Vec<WickTerm>,
    pub overlap: C64,
    pub value: C64,
}
