//! Closed-form block eigenvalues, their large-block limit and the saturated
//! entropy.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::angular_momentum::wigner3j_zero;
use crate::chain::BlockSpec;
use crate::density::BlockSpectrum;
use crate::error::{Error, Result};
use crate::numerics::{factorial, HalfInt};

/// `λ(l, M) = (−1)^l M! (M+1)! / ((M−l)! (M+l+1)!)`, zero for `l > M`.
pub fn lambda_coeff(l: u32, m: u32) -> BigRational {
    if l > m {
        return BigRational::zero();
    }
    let (l, m) = (u64::from(l), u64::from(m));
    let value = BigRational::new(factorial(m) * factorial(m + 1), factorial(m - l) * factorial(m + l + 1));
    if l % 2 == 0 { value } else { -value }
}

fn nonnegative(x: HalfInt) -> u64 {
    x.to_int().filter(|v| *v >= 0).expect("integer combination of spins") as u64
}

/// `Λ(J)` for a block of at least two sites.
pub fn eigenvalue_closed_form(block: &BlockSpec, j: HalfInt) -> Result<BigRational> {
    if block.len() < 2 {
        return Err(Error::Unsupported(
            "closed-form eigenvalues need a block of at least two sites; use brute force for L = 1".into(),
        ));
    }
    block.check_total_spin(j)?;
    let (jm, jp) = (block.j_minus(), block.j_plus());
    let a = nonnegative(jm + j);
    let b = nonnegative(jp - j);
    let c = nonnegative(j - jm);

    let prefactor = BigRational::new(
        factorial(nonnegative(j + j) + 1) * factorial(block.m_left().into()) * factorial(block.m_right().into()),
        factorial(nonnegative(jp + j) + 1) * factorial(a + 1) * factorial(b + 1) * factorial(c + 1),
    );

    // Interior bonds enter only through Π_j λ(l, M_j); group equal bonds.
    let mut bond_counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &m in block.interior_bonds() {
        *bond_counts.entry(m).or_default() += 1;
    }
    let m_min = *bond_counts.keys().next().expect("block of two or more sites has an interior bond");
    let j_min = a.min(c) as u32;

    let mut sum = BigRational::zero();
    for l in 0..=m_min {
        let mut bulk = BigRational::one();
        for (&m, &count) in &bond_counts {
            bulk *= num_traits::pow(lambda_coeff(l, m), count as usize);
        }
        for la in 0..=b as u32 {
            let edge_a = lambda_coeff(la, b as u32);
            for lb in 0..=j_min {
                let three_j = wigner3j_zero(l, la, lb);
                if three_j.is_zero() {
                    continue;
                }
                let degeneracies = BigInt::from((2 * l + 1) * (2 * la + 1) * (2 * lb + 1));
                sum += &bulk
                    * &edge_a
                    * lambda_coeff(lb, a as u32)
                    * lambda_coeff(lb, c as u32)
                    * BigRational::from_integer(degeneracies)
                    * three_j.square();
            }
        }
    }
    Ok(prefactor * sum)
}

/// All `Λ(J)` of a block, checked against `Σ_J (2J+1) Λ(J) = 1`.
pub fn closed_form_spectrum(block: &BlockSpec) -> Result<BlockSpectrum> {
    let mut eigenvalues = BTreeMap::new();
    for j in block.total_spins() {
        eigenvalues.insert(j, eigenvalue_closed_form(block, j)?);
    }
    let spectrum = BlockSpectrum::new(eigenvalues);
    let total = spectrum.normalization();
    if !total.is_one() {
        return Err(Error::NormalizationFailure(format!("Σ (2J+1) Λ(J) = {total}")));
    }
    Ok(spectrum)
}

/// `Λ_∞ = 1 / ((S_− + 1)(S_+ + 1))`, where `S_∓` are the bond numbers at the
/// two ends of a large block. Independent of `J`.
pub fn limit_eigenvalue(s_minus: u32, s_plus: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from((u64::from(s_minus) + 1) * (u64::from(s_plus) + 1)))
}

/// `ln((S_− + 1)(S_+ + 1))`, the value every entropy saturates to.
pub fn saturated_entropy(s_minus: u32, s_plus: u32) -> f64 {
    (((u64::from(s_minus) + 1) * (u64::from(s_plus) + 1)) as f64).ln()
}
