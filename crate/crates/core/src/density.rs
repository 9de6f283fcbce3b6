//! Block density matrices: exact partial trace of the chain state, the
//! boundary-sum construction, sector peeling for the spectrum, and the
//! projector-structure checks.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chain::{BlockSpec, ChainSpec};
use crate::error::{Error, Result};
use crate::fock::{
    boundary_states, boundary_twice_magnetization, build_vbs, twice_magnetization, weight, Config, RationalVector,
    SpinOp,
};
use crate::linalg;
use crate::numerics::{binomial, factorial, rational_to_f64, HalfInt};

/// A rational operator on a block's occupation space. Kernel entries follow
/// the metric convention `(ρv)(P) = Σ_{P′} ρ(P, P′) w(P′) v(P′)` with
/// `w(P) = Π p! q!`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator {
    capacities: Vec<u32>,
    entries: BTreeMap<(Config, Config), BigRational>,
}

impl BlockOperator {
    fn new(capacities: Vec<u32>) -> Self {
        BlockOperator { capacities, entries: BTreeMap::new() }
    }

    fn add_entry(&mut self, row: Config, col: Config, value: BigRational) {
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry((row, col)).or_insert_with(BigRational::zero);
        *slot += value;
    }

    fn prune(&mut self) {
        self.entries.retain(|_, v| !v.is_zero());
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn get(&self, row: &Config, col: &Config) -> BigRational {
        self.entries.get(&(row.clone(), col.clone())).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Config, Config), &BigRational)> {
        self.entries.iter()
    }

    /// Number of nonzero kernel entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, v: &RationalVector) -> Result<RationalVector> {
        if v.capacities() != self.capacities.as_slice() {
            return Err(Error::SpaceMismatch);
        }
        let mut image = Vec::new();
        for ((row, col), rho) in &self.entries {
            if let Some(a) = v.get(col) {
                let w = BigRational::from_integer(weight(&self.capacities, col));
                image.push((row.clone(), rho * w * a));
            }
        }
        Ok(RationalVector::from_amplitudes(self.capacities.clone(), image))
    }

    /// `tr ρ = Σ_P ρ(P, P) w(P)`.
    pub fn trace(&self) -> BigRational {
        self.diagonal().map(|(c, v)| v * BigRational::from_integer(weight(&self.capacities, c))).sum()
    }

    fn diagonal(&self) -> impl Iterator<Item = (&Config, &BigRational)> {
        self.entries.iter().filter(|((r, c), _)| r == c).map(|((r, _), v)| (r, v))
    }

    /// Trace over monomials with total `S^z = m`.
    pub fn sector_trace(&self, m: HalfInt) -> BigRational {
        self.diagonal()
            .filter(|(c, _)| twice_magnetization(&self.capacities, c) == m.twice())
            .map(|(c, v)| v * BigRational::from_integer(weight(&self.capacities, c)))
            .sum()
    }

    /// `tr ρ² = Σ_{P,P′} ρ(P,P′) w(P′) ρ(P′,P) w(P)`.
    pub fn trace_of_square(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for ((r, c), v) in &self.entries {
            if let Some(t) = self.entries.get(&(c.clone(), r.clone())) {
                let w = weight(&self.capacities, r) * weight(&self.capacities, c);
                acc += v * t * BigRational::from_integer(w);
            }
        }
        acc
    }

    /// Symmetric kernel, i.e. self-adjoint under the metric.
    pub fn is_self_adjoint(&self) -> bool {
        self.entries
            .iter()
            .all(|((r, c), v)| self.entries.get(&(c.clone(), r.clone())) == Some(v))
    }

    /// Configurations that appear in a nonzero entry, sorted.
    pub fn support(&self) -> Vec<Config> {
        let mut s: Vec<Config> = self.entries.keys().flat_map(|(r, c)| [r.clone(), c.clone()]).collect();
        s.sort();
        s.dedup();
        s
    }

    /// Exact rank, computed sector by sector (`ρ` conserves `S^z`).
    pub fn rank(&self) -> usize {
        let mut sectors: BTreeMap<i64, Vec<Config>> = BTreeMap::new();
        for c in self.support() {
            sectors.entry(twice_magnetization(&self.capacities, &c)).or_default().push(c);
        }
        let mut rank = 0;
        for configs in sectors.values() {
            let index: HashMap<&Config, usize> = configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut m = vec![vec![BigRational::zero(); configs.len()]; configs.len()];
            let mut leaks = false;
            for ((r, c), v) in &self.entries {
                match (index.get(r), index.get(c)) {
                    (Some(&i), Some(&j)) => m[i][j] = v.clone(),
                    (Some(_), None) | (None, Some(_)) => leaks = true,
                    (None, None) => {}
                }
            }
            if leaks {
                // Mixes sectors; fall back to the whole support at once.
                return self.rank_dense();
            }
            rank += linalg::rank(&m);
        }
        rank
    }

    fn rank_dense(&self) -> usize {
        let configs = self.support();
        let index: HashMap<&Config, usize> = configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut m = vec![vec![BigRational::zero(); configs.len()]; configs.len()];
        for ((r, c), v) in &self.entries {
            m[index[r]][index[c]] = v.clone();
        }
        linalg::rank(&m)
    }

    /// Dense matrix in the orthonormal spin basis over the full block space:
    /// `⟨P̂|ρ|P̂′⟩ = √(w(P) w(P′)) ρ(P, P′)`.
    pub fn to_dense_orthonormal(&self) -> (Vec<Config>, Vec<Vec<f64>>) {
        let configs = crate::fock::all_configs(&self.capacities);
        let index: HashMap<&Config, usize> = configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut m = vec![vec![0.0; configs.len()]; configs.len()];
        for ((r, c), v) in &self.entries {
            let w = BigRational::from_integer(weight(&self.capacities, r) * weight(&self.capacities, c));
            m[index[r]][index[c]] = rational_to_f64(v) * rational_to_f64(&w).sqrt();
        }
        (configs, m)
    }
}

/// `ρ_L = Tr_outside |VBS⟩⟨VBS| / ⟨VBS|VBS⟩` by direct contraction over
/// environment configurations.
pub fn reduced_density_matrix(chain: &ChainSpec, block: &BlockSpec) -> BlockOperator {
    let psi = build_vbs(chain);
    let norm = psi.norm_squared();
    let (start, end) = (block.start(), block.end());
    let caps = psi.capacities().to_vec();
    let env_caps: Vec<u32> = caps[..start].iter().chain(&caps[end + 1..]).copied().collect();

    let mut groups: HashMap<Config, Vec<(Config, &BigRational)>> = HashMap::new();
    for (c, a) in psi.iter() {
        let env: Config = c[..start].iter().chain(&c[end + 1..]).copied().collect();
        groups.entry(env).or_default().push((c[start..=end].to_vec(), a));
    }

    let mut rho = BlockOperator::new(caps[start..=end].to_vec());
    for (env, members) in &groups {
        let w = BigRational::from_integer(weight(&env_caps, env));
        for (p, a) in members {
            let wa = &w * *a;
            for (q, b) in members {
                rho.add_entry(p.clone(), q.clone(), &wa * *b);
            }
        }
    }
    let inv = norm.recip();
    for v in rho.entries.values_mut() {
        *v *= &inv;
    }
    rho.prune();
    rho
}

/// `ρ_L = Π(M+1)/Π(2S+1)! · Σ_{p,q} C(M_left,p) C(M_right,q) |φ_pq⟩⟨φ_pq|`
/// over the boundary states.
pub fn density_from_boundary_sum(block: &BlockSpec) -> BlockOperator {
    let num: BigInt = block.interior_bonds().iter().map(|&m| BigInt::from(m + 1)).product();
    let den: BigInt = block.spins().iter().map(|s| factorial((s.twice() + 1) as u64)).product();
    let prefactor = BigRational::new(num, den);
    let mut rho = BlockOperator::new(block.capacities());
    for ((p, q), phi) in boundary_states(block) {
        let c = &prefactor
            * BigRational::from_integer(binomial(block.m_left().into(), p.into()) * binomial(block.m_right().into(), q.into()));
        for (r, a) in phi.iter() {
            let ca = &c * a;
            for (s, b) in phi.iter() {
                rho.add_entry(r.clone(), s.clone(), &ca * b);
            }
        }
    }
    rho.prune();
    rho
}

/// Eigenvalues `Λ(J)`, each with multiplicity `2J + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpectrum {
    eigenvalues: BTreeMap<HalfInt, BigRational>,
}

impl BlockSpectrum {
    pub fn new(eigenvalues: BTreeMap<HalfInt, BigRational>) -> Self {
        BlockSpectrum { eigenvalues }
    }

    pub fn get(&self, j: HalfInt) -> Option<&BigRational> {
        self.eigenvalues.get(&j)
    }

    /// `(J, Λ(J))` in increasing `J`.
    pub fn iter(&self) -> impl Iterator<Item = (HalfInt, &BigRational)> {
        self.eigenvalues.iter().map(|(j, l)| (*j, l))
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `Σ_J (2J+1) Λ(J)`.
    pub fn normalization(&self) -> BigRational {
        self.iter().map(|(j, l)| l * BigRational::from_integer(j.multiplicity().into())).sum()
    }

    /// `Σ_J (2J+1) Λ(J)²`.
    pub fn trace_of_square(&self) -> BigRational {
        self.iter().map(|(j, l)| l * l * BigRational::from_integer(j.multiplicity().into())).sum()
    }

    /// `−Σ_J (2J+1) Λ ln Λ`.
    pub fn von_neumann(&self) -> f64 {
        -self
            .iter()
            .map(|(j, l)| {
                let x = rational_to_f64(l);
                if x > 0.0 { j.multiplicity() as f64 * x * x.ln() } else { 0.0 }
            })
            .sum::<f64>()
    }

    /// `ln(Σ_J (2J+1) Λ^α) / (1 − α)`.
    pub fn renyi(&self, alpha: f64) -> Result<f64> {
        if alpha.is_nan() || alpha <= 0.0 || alpha == 1.0 || alpha.is_infinite() {
            return Err(Error::InvalidRenyiOrder(alpha));
        }
        let s: f64 = self.iter().map(|(j, l)| j.multiplicity() as f64 * rational_to_f64(l).powf(alpha)).sum();
        Ok(s.ln() / (1.0 - alpha))
    }
}

/// Von Neumann and Renyi entropies of a spectrum.
pub fn entropies(spectrum: &BlockSpectrum, alpha: f64) -> Result<(f64, f64)> {
    Ok((spectrum.von_neumann(), spectrum.renyi(alpha)?))
}

/// `Λ(J) = tr_{M=J} ρ − tr_{M=J+1} ρ` for `J = J_+` down to `|J_−|`, followed
/// by a check that every sector trace matches `Σ_{J ≥ |M|} Λ(J)`.
pub fn spectrum_by_peeling(rho: &BlockOperator, block: &BlockSpec) -> Result<BlockSpectrum> {
    let (lo, hi) = (block.j_minus().abs(), block.j_plus());
    let mut eigenvalues = BTreeMap::new();
    for j in lo.range_to(hi) {
        let lambda = rho.sector_trace(j) - rho.sector_trace(j + HalfInt::ONE);
        if lambda.is_negative() {
            return Err(Error::Consistency(format!("negative eigenvalue {lambda} at J = {j}")));
        }
        if lambda.is_zero() {
            if block.len() >= 2 {
                return Err(Error::Consistency(format!("vanishing eigenvalue at J = {j}")));
            }
            // A single site cannot host every multiplet of the boundary spins.
            continue;
        }
        eigenvalues.insert(j, lambda);
    }
    let spectrum = BlockSpectrum::new(eigenvalues);

    let total: i64 = rho.capacities().iter().map(|&n| i64::from(n)).sum();
    for tm in (-total..=total).step_by(2) {
        let m = HalfInt::from_twice(tm);
        let expected: BigRational = spectrum.iter().filter(|(j, _)| *j >= m.abs()).map(|(_, l)| l.clone()).sum();
        let actual = rho.sector_trace(m);
        if actual != expected {
            return Err(Error::Consistency(format!("sector M = {m}: trace {actual}, multiplets give {expected}")));
        }
    }
    if spectrum.normalization() != BigRational::one() {
        return Err(Error::Consistency(format!("eigenvalues sum to {}", spectrum.normalization())));
    }
    Ok(spectrum)
}

/// The highest-weight ground vector of total spin `j`: the combination of
/// boundary states in sector `M = j` annihilated by `S⁺`.
pub fn highest_weight_vector(block: &BlockSpec, j: HalfInt) -> Result<RationalVector> {
    block.check_total_spin(j)?;
    let candidates: Vec<RationalVector> = boundary_states(block)
        .into_iter()
        .filter(|((p, q), _)| boundary_twice_magnetization(block, *p, *q) == j.twice())
        .map(|(_, v)| v)
        .collect();
    let raised: Vec<RationalVector> = candidates.iter().map(|v| v.apply_total_spin(SpinOp::Raise)).collect();
    let mut rows: Vec<Config> = raised.iter().flat_map(|v| v.iter().map(|(c, _)| c.clone())).collect();
    rows.sort();
    rows.dedup();
    let matrix: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|c| raised.iter().map(|v| v.get(c).cloned().unwrap_or_else(BigRational::zero)).collect())
        .collect();
    let kernel = linalg::null_space(&matrix, candidates.len());
    if kernel.len() != 1 {
        return Err(Error::Consistency(format!(
            "highest-weight space for J = {j} has dimension {}, expected 1",
            kernel.len()
        )));
    }
    let mut v = RationalVector::zero(block.capacities());
    for (c, phi) in kernel[0].iter().zip(&candidates) {
        v.add_scaled(c, phi)?;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenCheck {
    pub j: HalfInt,
    pub m: HalfInt,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorReport {
    pub rank: usize,
    pub expected_rank: u64,
    pub spectrum: Option<BlockSpectrum>,
    pub eigen_checks: Vec<EigenCheck>,
    pub failures: Vec<String>,
}

impl ProjectorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `ρ` has rank `(M_left+1)(M_right+1)` and that every
/// highest-weight vector and its `S⁻` descendants satisfy `ρ v = Λ(J) v`.
pub fn verify_projector_structure(rho: &BlockOperator, block: &BlockSpec) -> ProjectorReport {
    let rank = rho.rank();
    let expected_rank = block.degeneracy();
    let mut failures = Vec::new();
    if rank as u64 != expected_rank {
        failures.push(format!("rank {rank}, expected {expected_rank}"));
    }
    let spectrum = match spectrum_by_peeling(rho, block) {
        Ok(s) => Some(s),
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };
    let mut eigen_checks = Vec::new();
    if let Some(spec) = &spectrum {
        for (j, lambda) in spec.iter() {
            let mut v = match highest_weight_vector(block, j) {
                Ok(v) => v,
                Err(e) => {
                    failures.push(e.to_string());
                    continue;
                }
            };
            let mut m = j;
            loop {
                let holds = !v.is_empty() && rho.apply(&v).map(|w| w == v.scale(lambda)).unwrap_or(false);
                if !holds {
                    failures.push(format!("ρ v ≠ Λ v at J = {j}, M = {m}"));
                }
                eigen_checks.push(EigenCheck { j, m, holds });
                if m == -j {
                    break;
                }
                v = v.apply_total_spin(SpinOp::Lower);
                m = m - HalfInt::ONE;
            }
            if !v.apply_total_spin(SpinOp::Lower).is_empty() {
                failures.push(format!("S⁻ does not terminate the J = {j} multiplet"));
            }
        }
    }
    ProjectorReport { rank, expected_rank, spectrum, eigen_checks, failures }
}
