//! Open chains with ending spins: spin/bond consistency, the bond-number
//! solver, and contiguous blocks of bulk spins.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::HalfInt;

/// `Σ_j (−1)^j S_j` over all sites.
pub fn alternating_sum(spins: &[HalfInt]) -> HalfInt {
    spins
        .iter()
        .enumerate()
        .fold(HalfInt::ZERO, |acc, (j, &s)| if j % 2 == 0 { acc + s } else { acc - s })
}

/// Bond numbers `M_{j,j+1} = 2 Σ_{l≤j} (−1)^{j−l} S_l` for `j = 0..=N`.
pub fn solve_bonds(spins: &[HalfInt]) -> Result<Vec<u32>> {
    if spins.len() < 3 {
        return Err(Error::TooShort(spins.len()));
    }
    let sum = alternating_sum(spins);
    if sum != HalfInt::ZERO {
        return Err(Error::ConditionViolated { sum });
    }
    let mut bonds = Vec::with_capacity(spins.len() - 1);
    let mut running = 0i64;
    for (j, s) in spins[..spins.len() - 1].iter().enumerate() {
        running = s.twice() - running;
        if running < 1 {
            return Err(Error::NonPositiveBond { bond: j, value: running });
        }
        bonds.push(running as u32);
    }
    Ok(bonds)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    LengthMismatch { sites: usize, bonds: usize },
    TooShort { sites: usize },
    /// `2S_j ≠ M_{j−1,j} + M_{j,j+1}` (or the single-bond form at an end).
    Relation { site: usize, twice_spin: i64, bond_sum: i64 },
    NonPositiveBond { bond: usize, value: i64 },
    AlternatingSum { sum: HalfInt },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch { sites, bonds } => {
                write!(f, "{sites} sites need {} bonds, found {bonds}", sites.saturating_sub(1))
            }
            Violation::TooShort { sites } => write!(f, "need at least 3 sites, found {sites}"),
            Violation::Relation { site, twice_spin, bond_sum } => write!(
                f,
                "site {site}: 2S = {twice_spin} but adjacent bond numbers sum to {bond_sum}"
            ),
            Violation::NonPositiveBond { bond, value } => {
                write!(f, "bond ({bond},{}): bond number {value} < 1", bond + 1)
            }
            Violation::AlternatingSum { sum } => {
                write!(f, "alternating sum of spins is {sum}, solvability condition requires 0")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Spins `S_0..S_{N+1}` (two ending spins) and bond numbers `M_{j,j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    name: Option<String>,
    spins: Vec<HalfInt>,
    bonds: Vec<i64>,
}

impl ChainSpec {
    /// A chain given by its spins; bonds are solved for.
    pub fn from_spins(spins: Vec<HalfInt>) -> Result<Self> {
        let bonds = solve_bonds(&spins)?;
        let chain = ChainSpec { name: None, spins, bonds: bonds.into_iter().map(i64::from).collect() };
        chain.ensure_valid()?;
        Ok(chain)
    }

    pub fn from_spins_twice(twice: &[i64]) -> Result<Self> {
        Self::from_spins(twice.iter().copied().map(HalfInt::from_twice).collect())
    }

    /// A chain given by its bond numbers; spins follow from `2S_j = M_{j−1,j} + M_{j,j+1}`.
    pub fn from_bonds(bonds: Vec<i64>) -> Result<Self> {
        if bonds.len() < 2 {
            return Err(Error::TooShort(bonds.len() + 1));
        }
        let n = bonds.len() + 1;
        let spins = (0..n)
            .map(|j| {
                let left = if j > 0 { bonds[j - 1] } else { 0 };
                let right = bonds.get(j).copied().unwrap_or(0);
                HalfInt::from_twice(left + right)
            })
            .collect();
        let chain = ChainSpec { name: None, spins, bonds };
        chain.ensure_valid()?;
        Ok(chain)
    }

    /// Homogeneous chain with `n_bulk` bulk spins and every bond number `m`:
    /// bulk spins `S = m`, ending spins `m/2`.
    pub fn uniform(m: u32, n_bulk: usize) -> Result<Self> {
        Self::from_bonds(vec![i64::from(m); n_bulk + 1])
    }

    /// Spins and bonds taken as given, without any checking.
    pub fn from_parts_unchecked(spins: Vec<HalfInt>, bonds: Vec<i64>) -> Self {
        ChainSpec { name: None, spins, bonds }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let sites = self.spins.len();
        if sites < 3 {
            violations.push(Violation::TooShort { sites });
        }
        if self.bonds.len() + 1 != sites {
            violations.push(Violation::LengthMismatch { sites, bonds: self.bonds.len() });
            return ValidationReport { violations };
        }
        for (bond, &value) in self.bonds.iter().enumerate() {
            if value < 1 {
                violations.push(Violation::NonPositiveBond { bond, value });
            }
        }
        for (site, s) in self.spins.iter().enumerate() {
            let left = if site > 0 { self.bonds[site - 1] } else { 0 };
            let right = self.bonds.get(site).copied().unwrap_or(0);
            if s.twice() != left + right {
                violations.push(Violation::Relation { site, twice_spin: s.twice(), bond_sum: left + right });
            }
        }
        let sum = alternating_sum(&self.spins);
        if sum != HalfInt::ZERO {
            violations.push(Violation::AlternatingSum { sum });
        }
        ValidationReport { violations }
    }

    fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(Violation::NonPositiveBond { bond, value }) => {
                Err(Error::NonPositiveBond { bond: *bond, value: *value })
            }
            Some(Violation::AlternatingSum { sum }) => Err(Error::ConditionViolated { sum: *sum }),
            Some(Violation::TooShort { sites }) => Err(Error::TooShort(*sites)),
            Some(other) => Err(Error::InvalidChain(other.to_string())),
        }
    }

    pub fn spins(&self) -> &[HalfInt] {
        &self.spins
    }

    pub fn spin(&self, site: usize) -> HalfInt {
        self.spins[site]
    }

    /// `M_{j,j+1}`. Only meaningful on a validated chain.
    pub fn bond(&self, j: usize) -> u32 {
        self.bonds[j] as u32
    }

    pub fn bonds(&self) -> Vec<u32> {
        self.bonds.iter().map(|&m| m as u32).collect()
    }

    pub fn num_sites(&self) -> usize {
        self.spins.len()
    }

    /// Number of bulk spins `N`.
    pub fn num_bulk(&self) -> usize {
        self.spins.len() - 2
    }

    /// `Π (2S_j + 1)`, the dimension of the full spin Hilbert space.
    pub fn full_dimension(&self) -> BigInt {
        self.spins.iter().map(|s| BigInt::from(s.multiplicity())).product()
    }

    /// The block of `len` bulk spins starting at site `start`.
    pub fn block(&self, start: usize, len: usize) -> Result<BlockSpec> {
        let bulk = self.num_bulk();
        if start < 1 || len < 1 || start + len - 1 > bulk {
            return Err(Error::OutOfRange { start, len, bulk });
        }
        let end = start + len - 1;
        Ok(BlockSpec {
            start,
            spins: self.spins[start..=end].to_vec(),
            interior_bonds: (start..end).map(|j| self.bond(j)).collect(),
            m_left: self.bond(start - 1),
            m_right: self.bond(end),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChainFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_chain()
    }

    pub fn to_json(&self) -> String {
        let file = ChainFile {
            name: self.name.clone(),
            spins_twice: Some(self.spins.iter().map(|s| s.twice()).collect()),
            bonds: None,
        };
        serde_json::to_string(&file).expect("chain file serializes")
    }
}

/// On-disk chain description. Exactly one of `spins_twice` or `bonds` is given.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spins_twice: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bonds: Option<Vec<i64>>,
}

impl ChainFile {
    /// Builds the chain without validating it, so callers can report violations.
    pub fn into_unchecked(self) -> Result<ChainSpec> {
        let (spins, bonds) = match (self.spins_twice, self.bonds) {
            (Some(twice), None) => {
                let spins: Vec<HalfInt> = twice.into_iter().map(HalfInt::from_twice).collect();
                if spins.iter().any(|s| s.twice() < 0) {
                    return Err(Error::Parse("spins must be nonnegative".into()));
                }
                let bonds = naive_bonds(&spins);
                (spins, bonds)
            }
            (None, Some(bonds)) => {
                let n = bonds.len() + 1;
                let spins = (0..n)
                    .map(|j| {
                        let left = if j > 0 { bonds[j - 1] } else { 0 };
                        HalfInt::from_twice(left + bonds.get(j).copied().unwrap_or(0))
                    })
                    .collect();
                (spins, bonds)
            }
            _ => return Err(Error::Parse("exactly one of \"spins_twice\" or \"bonds\" is required".into())),
        };
        let mut chain = ChainSpec::from_parts_unchecked(spins, bonds);
        chain.name = self.name;
        Ok(chain)
    }

    pub fn into_chain(self) -> Result<ChainSpec> {
        let chain = self.into_unchecked()?;
        chain.ensure_valid()?;
        Ok(chain)
    }
}

/// Bonds from the solution formula without any checks, so that a chain
/// violating the solvability condition can still be reported site by site.
fn naive_bonds(spins: &[HalfInt]) -> Vec<i64> {
    let mut running = 0i64;
    spins[..spins.len().saturating_sub(1)]
        .iter()
        .map(|s| {
            running = s.twice() - running;
            running
        })
        .collect()
}

/// A block of `L` contiguous bulk spins `[k, k+L−1]` together with the bond
/// numbers that enter its density matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    start: usize,
    spins: Vec<HalfInt>,
    interior_bonds: Vec<u32>,
    m_left: u32,
    m_right: u32,
}

impl BlockSpec {
    /// A block described by its own profile, independent of any chain.
    pub fn from_profile(spins: Vec<HalfInt>, m_left: u32, m_right: u32) -> Result<Self> {
        let chain_spins: Vec<HalfInt> = std::iter::once(HalfInt::from_twice(m_left.into()))
            .chain(spins.iter().copied())
            .chain(std::iter::once(HalfInt::from_twice(m_right.into())))
            .collect();
        let chain = ChainSpec::from_spins(chain_spins)?;
        chain.block(1, spins.len())
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    /// Last site of the block in chain coordinates.
    pub fn end(&self) -> usize {
        self.start + self.spins.len() - 1
    }

    pub fn spins(&self) -> &[HalfInt] {
        &self.spins
    }

    /// Bonds `M_{j,j+1}` for `j = k..k+L−2`.
    pub fn interior_bonds(&self) -> &[u32] {
        &self.interior_bonds
    }

    pub fn m_left(&self) -> u32 {
        self.m_left
    }

    pub fn m_right(&self) -> u32 {
        self.m_right
    }

    /// `J_− = (M_left − M_right)/2`.
    pub fn j_minus(&self) -> HalfInt {
        HalfInt::from_twice(i64::from(self.m_left) - i64::from(self.m_right))
    }

    /// `J_+ = (M_left + M_right)/2`.
    pub fn j_plus(&self) -> HalfInt {
        HalfInt::from_twice(i64::from(self.m_left) + i64::from(self.m_right))
    }

    /// Allowed total spins `|J_−|, …, J_+`.
    pub fn total_spins(&self) -> impl Iterator<Item = HalfInt> {
        self.j_minus().abs().range_to(self.j_plus())
    }

    /// `(M_left + 1)(M_right + 1)`.
    pub fn degeneracy(&self) -> u64 {
        (u64::from(self.m_left) + 1) * (u64::from(self.m_right) + 1)
    }

    pub fn check_total_spin(&self, j: HalfInt) -> Result<()> {
        let (min, max) = (self.j_minus().abs(), self.j_plus());
        if j < min || j > max || (j - min).to_int().is_none() {
            return Err(Error::SpinOutOfRange { j, min, max });
        }
        Ok(())
    }

    /// Twice-spins of the block sites, i.e. the boson capacity of each site.
    pub fn capacities(&self) -> Vec<u32> {
        self.spins.iter().map(|s| s.twice() as u32).collect()
    }
}
