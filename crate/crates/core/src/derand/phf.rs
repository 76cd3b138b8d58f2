//! Perfect hash families built by the method of conditional expectations.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Largest number of k-subsets the construction and the verifier enumerate.
pub const PHF_SUBSET_BUDGET: u128 = 1_000_000;

/// A family of colorings of {1..N} with colors {1..k}. Colors are stored
/// 1-based, one array of length N per coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectHashFamily {
    n: usize,
    k: usize,
    colorings: Vec<Vec<u32>>,
}

impl PerfectHashFamily {
    /// Checks shape and color range; does not check the covering property.
    pub fn new(n: usize, k: usize, colorings: Vec<Vec<u32>>) -> Result<PerfectHashFamily> {
        if k == 0 || k > n {
            return Err(Error::param(format!("need 1 <= k <= N, got N = {n}, k = {k}")));
        }
        for (idx, c) in colorings.iter().enumerate() {
            if c.len() != n {
                return Err(Error::Format(format!(
                    "coloring {} has {} entries, expected {n}",
                    idx + 1,
                    c.len()
                )));
            }
            if let Some(bad) = c.iter().find(|&&x| x == 0 || x as usize > k) {
                return Err(Error::Format(format!(
                    "coloring {} uses color {bad} outside 1..={k}",
                    idx + 1
                )));
            }
        }
        Ok(PerfectHashFamily { n, k, colorings })
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.k
    }

    pub fn colorings(&self) -> &[Vec<u32>] {
        &self.colorings
    }

    pub fn len(&self) -> usize {
        self.colorings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colorings.is_empty()
    }

    /// Header `N k count`, then one coloring per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.k, self.colorings.len());
        for c in &self.colorings {
            let line: Vec<String> = c.iter().map(u32::to_string).collect();
            writeln!(out, "{}", line.join(" ")).expect("writing to a String");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<PerfectHashFamily> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty hash family file".into()))?;
        let nums = parse_numbers(header)?;
        let [n, k, count] = nums[..] else {
            return Err(Error::Format(format!("header must be `N k count`, got `{header}`")));
        };
        let colorings = lines
            .map(|l| parse_numbers(l).map(|v| v.into_iter().map(|x| x as u32).collect()))
            .collect::<Result<Vec<Vec<u32>>>>()?;
        if colorings.len() != count as usize {
            return Err(Error::Format(format!(
                "header announces {count} colorings, found {}",
                colorings.len()
            )));
        }
        PerfectHashFamily::new(n as usize, k as usize, colorings)
    }
}

fn parse_numbers(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Format(format!("expected a non-negative integer, got `{t}`")))
        })
        .collect()
}

/// C(n, k), saturating at u128::MAX.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_budget(n: usize, k: usize) -> Result<()> {
    let count = binomial(n, k);
    if count > PHF_SUBSET_BUDGET {
        return Err(Error::Budget(format!(
            "C({n}, {k}) = {count} subsets exceeds the enumeration budget of {PHF_SUBSET_BUDGET}"
        )));
    }
    Ok(())
}

/// All k-subsets of {0..n} in lexicographic order, flattened.
fn subsets(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(binomial(n, k) as usize * k);
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        out.extend_from_slice(&cur);
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (cur[i] as usize) < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn injective(coloring: &[u32], subset: &[u32]) -> bool {
    let mut seen = 0u64;
    subset.iter().all(|&x| {
        let bit = 1u64 << coloring[x as usize];
        let fresh = seen & bit == 0;
        seen |= bit;
        fresh
    })
}

/// True iff every k-subset of {1..N} is injectively colored by some member.
/// Exhaustive; families beyond the subset budget are reported as unverified
/// (false).
pub fn verify_phf(family: &PerfectHashFamily) -> bool {
    let (n, k) = (family.n, family.k);
    if check_budget(n, k).is_err() {
        return false;
    }
    subsets(n, k)
        .chunks_exact(k)
        .all(|w| family.colorings.iter().any(|c| injective(c, w)))
}

/// Builds an (N, k) perfect hash family deterministically.
///
/// Each coloring is chosen item by item; the color of item i maximizes the
/// expected number of still-uncovered k-subsets that become injectively
/// colored when the remaining items get uniform random colors (ties go to
/// the smallest color). Colorings are appended until every subset is
/// covered. Expectations are compared exactly: a subset with r unassigned
/// items and no collision so far is covered with probability r!/k^r, which
/// is scaled to the integer r!·k^(k-r).
pub fn build_phf(n: usize, k: usize) -> Result<PerfectHashFamily> {
    if k == 0 || k > n {
        return Err(Error::param(format!("need 1 <= k <= N, got N = {n}, k = {k}")));
    }
    if k > 32 {
        return Err(Error::Budget(format!("k = {k} colors exceeds the cap of 32")));
    }
    check_budget(n, k)?;

    // weight[r] = r! * k^(k-r)
    let kk = k as u128;
    let mut weight = vec![0u128; k + 1];
    for r in 0..=k {
        let fact: u128 = (1..=r as u128).product();
        weight[r] = fact * kk.pow((k - r) as u32);
    }

    let mut uncovered: Vec<u32> = subsets(n, k);
    let mut colorings = Vec::new();
    while !uncovered.is_empty() {
        let count = uncovered.len() / k;
        let mut containing: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (w, items) in uncovered.chunks_exact(k).enumerate() {
            for &x in items {
                containing[x as usize].push(w as u32);
            }
        }
        // Per subset: colors used so far (bitmask), or None after a collision.
        let mut used: Vec<Option<u64>> = vec![Some(0); count];
        let mut remaining: Vec<u32> = vec![k as u32; count];
        let mut coloring = vec![0u32; n];
        let mut gain = vec![0u128; k];
        for item in 0..n {
            gain.iter_mut().for_each(|g| *g = 0);
            for &w in &containing[item] {
                let Some(mask) = used[w as usize] else { continue };
                let r = remaining[w as usize] as usize;
                for (c, g) in gain.iter_mut().enumerate() {
                    if mask & (1 << c) == 0 {
                        *g += weight[r - 1];
                    }
                }
            }
            // Subsets not containing `item` are unaffected, so comparing
            // the gains compares the full conditional expectations.
            let best = (0..k)
                .max_by(|&a, &b| gain[a].cmp(&gain[b]).then(b.cmp(&a)))
                .expect("k >= 1");
            coloring[item] = best as u32 + 1;
            for &w in &containing[item] {
                let w = w as usize;
                if let Some(mask) = used[w] {
                    used[w] = if mask & (1 << best) != 0 {
                        None
                    } else {
                        Some(mask | 1 << best)
                    };
                    remaining[w] -= 1;
                }
            }
        }
        let before = uncovered.len();
        uncovered = uncovered
            .chunks_exact(k)
            .filter(|w| !injective(&coloring, w))
            .flatten()
            .copied()
            .collect();
        debug_assert!(uncovered.len() < before, "each coloring covers a new subset");
        colorings.push(coloring);
    }
    PerfectHashFamily::new(n, k, colorings)
}

/// The size target e^k · k · ln N + k.
pub fn phf_size_target(n: usize, k: usize) -> f64 {
    (k as f64).exp() * k as f64 * (n as f64).ln() + k as f64
}
