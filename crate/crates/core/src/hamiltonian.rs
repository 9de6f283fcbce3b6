//! Bond projectors and the AKLT projector Hamiltonians, acting on the
//! occupation-basis coefficients of a [`FockVector`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chain::{BlockSpec, ChainSpec};
use crate::error::{Error, Result};
use crate::fock::{all_configs, twice_magnetization, Config, RationalVector};
use crate::linalg;
use crate::numerics::HalfInt;

type Matrix = Vec<Vec<BigRational>>;

fn zeros(d: usize) -> Matrix {
    vec![vec![BigRational::zero(); d]; d]
}

fn identity(d: usize) -> Matrix {
    let mut m = zeros(d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    m
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// An operator on two adjacent sites, as a dense matrix on monomial
/// coefficients indexed by `p_1 · (n_2 + 1) + p_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSiteOperator {
    capacities: (u32, u32),
    matrix: Matrix,
}

impl TwoSiteOperator {
    fn zero(capacities: (u32, u32)) -> Self {
        let d = ((capacities.0 + 1) * (capacities.1 + 1)) as usize;
        TwoSiteOperator { capacities, matrix: zeros(d) }
    }

    pub fn identity(capacities: (u32, u32)) -> Self {
        let d = ((capacities.0 + 1) * (capacities.1 + 1)) as usize;
        TwoSiteOperator { capacities, matrix: identity(d) }
    }

    pub fn capacities(&self) -> (u32, u32) {
        self.capacities
    }

    pub fn matrix(&self) -> &[Vec<BigRational>] {
        &self.matrix
    }

    fn index(&self, p1: u32, p2: u32) -> usize {
        (p1 * (self.capacities.1 + 1) + p2) as usize
    }

    fn unindex(&self, i: usize) -> (u32, u32) {
        let w = (self.capacities.1 + 1) as usize;
        ((i / w) as u32, (i % w) as u32)
    }

    /// `Ĵ² = (S⃗_1 + S⃗_2)²` built from ladder and `z` operators.
    pub fn total_spin_squared(capacities: (u32, u32)) -> Self {
        let (n1, n2) = capacities;
        let mut op = Self::zero(capacities);
        let s1 = HalfInt::from_twice(n1.into()).to_rational();
        let s2 = HalfInt::from_twice(n2.into()).to_rational();
        let casimirs = &s1 * (&s1 + BigRational::one()) + &s2 * (&s2 + BigRational::one());
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        for p1 in 0..=n1 {
            for p2 in 0..=n2 {
                let col = op.index(p1, p2);
                // 2 S1z S2z = (2p1 − n1)(2p2 − n2)/2 ; plus the two Casimirs
                let zz = BigRational::from_integer(BigInt::from(
                    (2 * i64::from(p1) - i64::from(n1)) * (2 * i64::from(p2) - i64::from(n2)),
                )) * &quarter
                    * BigRational::from_integer(BigInt::from(2));
                op.matrix[col][col] += &casimirs + zz;
                // S1⁺ S2⁻: p1 → p1+1 with weight q1, p2 → p2−1 with weight p2
                if p1 < n1 && p2 > 0 {
                    let row = op.index(p1 + 1, p2 - 1);
                    op.matrix[row][col] += BigRational::from_integer(BigInt::from((n1 - p1) * p2));
                }
                // S1⁻ S2⁺
                if p1 > 0 && p2 < n2 {
                    let row = op.index(p1 - 1, p2 + 1);
                    op.matrix[row][col] += BigRational::from_integer(BigInt::from(p1 * (n2 - p2)));
                }
            }
        }
        op
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        TwoSiteOperator {
            capacities: self.capacities,
            matrix: self.matrix.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.capacities, other.capacities);
        TwoSiteOperator {
            capacities: self.capacities,
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.capacities, other.capacities);
        TwoSiteOperator { capacities: self.capacities, matrix: matmul(&self.matrix, &other.matrix) }
    }

    pub fn trace(&self) -> BigRational {
        self.matrix.iter().enumerate().map(|(i, r)| r[i].clone()).sum()
    }
}

/// Projector of `S⃗_1 + S⃗_2` onto total spin `j`, as the Casimir polynomial
/// `Π_{J′≠j} (Ĵ² − J′(J′+1)) / (j(j+1) − J′(J′+1))`.
pub fn bond_projector(s1: HalfInt, s2: HalfInt, j: HalfInt) -> Result<TwoSiteOperator> {
    let (lo, hi) = ((s1 - s2).abs(), s1 + s2);
    if j < lo || j > hi || (j - lo).to_int().is_none() {
        return Err(Error::SpinOutOfRange { j, min: lo, max: hi });
    }
    let caps = (s1.twice() as u32, s2.twice() as u32);
    let casimir = |x: HalfInt| {
        let r = x.to_rational();
        &r * (&r + BigRational::one())
    };
    let j2 = TwoSiteOperator::total_spin_squared(caps);
    let mut p = TwoSiteOperator::identity(caps);
    for other in lo.range_to(hi).filter(|&x| x != j) {
        let shift = TwoSiteOperator::identity(caps).scaled(&-casimir(other));
        let factor = j2.plus(&shift).scaled(&(casimir(j) - casimir(other)).recip());
        p = p.compose(&factor);
    }
    Ok(p)
}

/// Penalised total spins of bond `(j, j+1)`: `S_j + S_{j+1} + 1 − M ..= S_j + S_{j+1}`.
pub fn penalised_spins(s1: HalfInt, s2: HalfInt, m: u32) -> impl Iterator<Item = HalfInt> {
    let top = s1 + s2;
    (top + HalfInt::ONE - HalfInt::from_int(m.into())).range_to(top)
}

/// `C_J(j, j+1)` keyed by the left site `j` of the bond (chain numbering) and `J`.
pub type Coefficients = BTreeMap<(usize, HalfInt), BigRational>;

/// `Σ_bonds Σ_J C_J P_J` embedded in a multi-site space.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    capacities: Vec<u32>,
    /// `(local left site, summed bond operator)`.
    terms: Vec<(usize, TwoSiteOperator)>,
}

fn build(
    spins: &[HalfInt],
    bonds: &[u32],
    first_site: usize,
    coefficients: &Coefficients,
) -> Result<Hamiltonian> {
    let mut known = Vec::new();
    let mut terms = Vec::with_capacity(bonds.len());
    for (i, &m) in bonds.iter().enumerate() {
        let (s1, s2) = (spins[i], spins[i + 1]);
        let site = first_site + i;
        let caps = (s1.twice() as u32, s2.twice() as u32);
        let mut op = TwoSiteOperator::zero(caps);
        for j in penalised_spins(s1, s2, m) {
            known.push((site, j));
            let c = coefficients.get(&(site, j)).cloned().unwrap_or_else(BigRational::one);
            if !c.is_positive() {
                return Err(Error::NonPositiveCoefficient { bond: site, j });
            }
            op = op.plus(&bond_projector(s1, s2, j)?.scaled(&c));
        }
        terms.push((i, op));
    }
    Ok(Hamiltonian { capacities: spins.iter().map(|s| s.twice() as u32).collect(), terms })
        .and_then(|h| {
            let in_range = |key: &(usize, HalfInt)| {
                key.0 >= first_site && key.0 < first_site + bonds.len()
            };
            for key in coefficients.keys().filter(|k| in_range(k)) {
                if !known.contains(key) {
                    return Err(Error::UnknownCoefficient { bond: key.0, j: key.1 });
                }
            }
            Ok(h)
        })
}

/// The full-chain Hamiltonian over bonds `j = 0..=N`.
pub fn build_full_hamiltonian(chain: &ChainSpec, coefficients: &Coefficients) -> Result<Hamiltonian> {
    build(chain.spins(), &chain.bonds(), 0, coefficients)
}

/// The block Hamiltonian over the interior bonds `j = k..=k+L−2`. Coefficient
/// keys use chain site numbering; keys for bonds outside the block are ignored.
pub fn build_block_hamiltonian(block: &BlockSpec, coefficients: &Coefficients) -> Result<Hamiltonian> {
    build(block.spins(), block.interior_bonds(), block.start(), coefficients)
}

impl Hamiltonian {
    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn apply(&self, v: &RationalVector) -> Result<RationalVector> {
        if v.capacities() != self.capacities.as_slice() {
            return Err(Error::SpaceMismatch);
        }
        let mut out = RationalVector::zero(self.capacities.clone());
        for (site, op) in &self.terms {
            let mut image = Vec::new();
            for (c, a) in v.iter() {
                let col = op.index(c[*site], c[site + 1]);
                for (row, r) in op.matrix.iter().enumerate() {
                    let t = &r[col];
                    if t.is_zero() {
                        continue;
                    }
                    let (p1, p2) = op.unindex(row);
                    let mut d = c.clone();
                    d[*site] = p1;
                    d[site + 1] = p2;
                    image.push((d, t * a));
                }
            }
            out = out.add(&RationalVector::from_amplitudes(self.capacities.clone(), image))?;
        }
        Ok(out)
    }

    /// Matrix of the restriction to the `2S^z = twice_m` sector, together
    /// with the basis configurations indexing it.
    pub fn sector_matrix(&self, twice_m: i64) -> (Vec<Config>, Vec<Vec<BigRational>>) {
        let basis: Vec<Config> = all_configs(&self.capacities)
            .into_iter()
            .filter(|c| twice_magnetization(&self.capacities, c) == twice_m)
            .collect();
        let index: BTreeMap<&Config, usize> = basis.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut m = vec![vec![BigRational::zero(); basis.len()]; basis.len()];
        for (col, c) in basis.iter().enumerate() {
            let e = RationalVector::basis(self.capacities.clone(), c.clone());
            let image = self.apply(&e).expect("same space");
            for (d, a) in image.iter() {
                m[index[d]][col] = a.clone();
            }
        }
        (basis, m)
    }

    /// `dim ker H`, summed over magnetisation sectors.
    pub fn kernel_dimension(&self) -> usize {
        let total: i64 = self.capacities.iter().map(|&n| i64::from(n)).sum();
        (-total..=total)
            .step_by(2)
            .map(|tm| {
                let (basis, m) = self.sector_matrix(tm);
                basis.len() - linalg::rank(&m)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{boundary_states, build_block_vbs, build_vbs};
    use crate::numerics::rational;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn spin_one_quintet_projector() {
        let p = bond_projector(h(2), h(2), h(4)).unwrap();
        assert_eq!(p.trace(), rational(5, 1));
        assert_eq!(p.compose(&p), p);
        assert!(bond_projector(h(2), h(2), h(6)).is_err());
        assert!(bond_projector(h(2), h(2), h(1)).is_err());
    }

    #[test]
    fn projectors_resolve_identity() {
        for (t1, t2) in [(1, 1), (2, 2), (3, 4), (4, 1), (2, 3)] {
            let (s1, s2) = (h(t1), h(t2));
            let caps = (t1 as u32, t2 as u32);
            let mut sum = TwoSiteOperator::zero(caps);
            for j in (s1 - s2).abs().range_to(s1 + s2) {
                let p = bond_projector(s1, s2, j).unwrap();
                assert_eq!(p.compose(&p), p);
                assert_eq!(p.trace(), rational(j.multiplicity(), 1));
                sum = sum.plus(&p);
            }
            assert_eq!(sum, TwoSiteOperator::identity(caps));
        }
    }

    #[test]
    fn quintet_projector_kills_two_site_valence_bond_states() {
        let chain = ChainSpec::uniform(1, 3).unwrap();
        let block = chain.block(1, 2).unwrap();
        let op = Hamiltonian { capacities: vec![2, 2], terms: vec![(0, bond_projector(h(2), h(2), h(4)).unwrap())] };
        for (_, v) in boundary_states(&block) {
            assert!(op.apply(&v).unwrap().is_empty());
        }
        assert_eq!(build_block_vbs(&block).capacities(), &[1, 1]);
    }

    #[test]
    fn vbs_is_zero_energy() {
        let chain = ChainSpec::uniform(1, 3).unwrap();
        let block = chain.block(1, 3).unwrap();
        let hb = build_block_hamiltonian(&block, &Coefficients::new()).unwrap();
        for (_, v) in boundary_states(&block) {
            assert!(hb.apply(&v).unwrap().is_empty());
        }
        let c5 = ChainSpec::from_spins_twice(&[1, 3, 4, 3, 1]).unwrap();
        let full = build_full_hamiltonian(&c5, &Coefficients::new()).unwrap();
        assert!(full.apply(&build_vbs(&c5)).unwrap().is_empty());
    }

    #[test]
    fn block_kernel_dimensions() {
        let c5 = ChainSpec::from_spins_twice(&[1, 3, 4, 3, 1]).unwrap();
        let hb = build_block_hamiltonian(&c5.block(1, 3).unwrap(), &Coefficients::new()).unwrap();
        assert_eq!(hb.kernel_dimension(), 4);
        let hb = build_block_hamiltonian(&c5.block(2, 2).unwrap(), &Coefficients::new()).unwrap();
        assert_eq!(hb.kernel_dimension(), 6);
    }

    #[test]
    fn full_kernel_is_unique_and_scale_free() {
        for n in 1..=3 {
            let chain = ChainSpec::uniform(1, n).unwrap();
            let hf = build_full_hamiltonian(&chain, &Coefficients::new()).unwrap();
            assert_eq!(hf.kernel_dimension(), 1, "N = {n}");
        }
        let chain = ChainSpec::uniform(1, 3).unwrap();
        let mut coeffs = Coefficients::new();
        for j in 0..=3 {
            let top = chain.spin(j) + chain.spin(j + 1);
            coeffs.insert((j, top), rational(2, 1));
        }
        let hf = build_full_hamiltonian(&chain, &coeffs).unwrap();
        assert_eq!(hf.kernel_dimension(), 1);
    }

    #[test]
    fn coefficient_errors() {
        let chain = ChainSpec::uniform(1, 2).unwrap();
        let mut coeffs = Coefficients::new();
        coeffs.insert((1, h(4)), rational(-1, 1));
        assert!(matches!(
            build_full_hamiltonian(&chain, &coeffs),
            Err(Error::NonPositiveCoefficient { bond: 1, .. })
        ));
        let mut coeffs = Coefficients::new();
        coeffs.insert((1, h(2)), rational(1, 1));
        assert!(matches!(build_full_hamiltonian(&chain, &coeffs), Err(Error::UnknownCoefficient { .. })));
    }
}
