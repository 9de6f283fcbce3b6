//! Clebsch–Gordan coefficients and Wigner 3j symbols in exact arithmetic
//! (Condon–Shortley phase convention).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{factorial, factorial_checked, sign_of, HalfInt, SignedSqrtRational};

fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.admits(m) {
        Ok(())
    } else {
        Err(Error::MalformedPair { j, m })
    }
}

/// `true` when `j3` can result from coupling `j1` and `j2`.
pub fn triangle(j1: HalfInt, j2: HalfInt, j3: HalfInt) -> bool {
    let (a, b, c) = (j1.twice(), j2.twice(), j3.twice());
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// `⟨j1 m1; j2 m2 | J M⟩` by Racah's single-sum formula.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<SignedSqrtRational> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    if j.twice() < 0 || (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::MalformedPair { j, m });
    }
    if m != m1 + m2 || !triangle(j1, j2, j) || m.abs() > j {
        return Ok(SignedSqrtRational::zero());
    }

    // Everything below is an integer: half the sum or difference of twice-values
    // with matching parity.
    let half = |x: i64| x / 2;
    let (tj1, tm1, tj2, tm2, tj, tm) = (j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice());
    let j1_plus_j2_minus_j = half(tj1 + tj2 - tj);
    let j_plus_j1_minus_j2 = half(tj + tj1 - tj2);
    let j_minus_j1_plus_j2 = half(tj - tj1 + tj2);
    let total = half(tj1 + tj2 + tj);
    let j1_minus_m1 = half(tj1 - tm1);
    let j1_plus_m1 = half(tj1 + tm1);
    let j2_minus_m2 = half(tj2 - tm2);
    let j2_plus_m2 = half(tj2 + tm2);
    let j_plus_m = half(tj + tm);
    let j_minus_m = half(tj - tm);
    let j_minus_j2_plus_m1 = half(tj - tj2 + tm1);
    let j_minus_j1_minus_m2 = half(tj - tj1 - tm2);

    let f = |n: i64| factorial(n as u64);
    let numer = BigInt::from(tj + 1)
        * f(j_plus_j1_minus_j2)
        * f(j_minus_j1_plus_j2)
        * f(j1_plus_j2_minus_j)
        * f(j_plus_m)
        * f(j_minus_m)
        * f(j1_minus_m1)
        * f(j1_plus_m1)
        * f(j2_minus_m2)
        * f(j2_plus_m2);
    let prefactor = BigRational::new(numer, f(total + 1));

    let k_min = 0.max(-j_minus_j2_plus_m1).max(-j_minus_j1_minus_m2);
    let k_max = j1_plus_j2_minus_j.min(j1_minus_m1).min(j2_plus_m2);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let denom = f(k)
            * f(j1_plus_j2_minus_j - k)
            * f(j1_minus_m1 - k)
            * f(j2_plus_m2 - k)
            * f(j_minus_j2_plus_m1 + k)
            * f(j_minus_j1_minus_m2 + k);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let sign = sign_of(sum.numer());
    Ok(SignedSqrtRational::new(sign, prefactor * &sum * &sum))
}

/// The Wigner 3j symbol, obtained from the Clebsch–Gordan coefficient
/// `(−1)^{j1−j2−m3} / √(2j3+1) · ⟨j1 m1; j2 m2 | j3 −m3⟩`.
pub fn wigner3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<SignedSqrtRational> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j3, m3)?;
    if (m1 + m2 + m3) != HalfInt::ZERO {
        return Ok(SignedSqrtRational::zero());
    }
    let cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3)?;
    if cg.is_zero() {
        return Ok(cg);
    }
    let phase = (j1 - j2 - m3).to_int().expect("integral phase for admissible triad");
    let sign = if phase.rem_euclid(2) == 0 { 1 } else { -1 };
    let norm = SignedSqrtRational::new(sign, BigRational::new(BigInt::one(), BigInt::from(j3.multiplicity())));
    Ok(cg.mul(&norm))
}

/// `(l la lb; 0 0 0)` from its closed form
///
/// ```text
/// (−1)^g √[(2g−2l)!(2g−2la)!(2g−2lb)! / (2g+1)!] · g! / ((g−l)!(g−la)!(g−lb)!)
/// ```
///
/// with `l + la + lb = 2g`; zero for odd sums or when the triangle fails.
pub fn wigner3j_zero(l: u32, la: u32, lb: u32) -> SignedSqrtRational {
    let sum = i64::from(l) + i64::from(la) + i64::from(lb);
    if sum % 2 != 0 {
        return SignedSqrtRational::zero();
    }
    let g = sum / 2;
    let (dl, da, db) = (g - i64::from(l), g - i64::from(la), g - i64::from(lb));
    let (Some(fl), Some(fa), Some(fb)) = (factorial_checked(dl), factorial_checked(da), factorial_checked(db))
    else {
        return SignedSqrtRational::zero();
    };
    let radicand = BigRational::new(
        factorial((2 * dl) as u64) * factorial((2 * da) as u64) * factorial((2 * db) as u64),
        factorial((2 * g + 1) as u64),
    );
    let coefficient = BigRational::new(factorial(g as u64), fl * fa * fb);
    let sign = if g % 2 == 0 { 1 } else { -1 };
    SignedSqrtRational::new(sign, radicand * &coefficient * &coefficient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    /// All (j, m) pairs with 2j ≤ max_twice.
    fn pairs(max_twice: i64) -> Vec<(HalfInt, HalfInt)> {
        let mut out = Vec::new();
        for tj in 0..=max_twice {
            for tm in (-tj..=tj).step_by(2) {
                out.push((h(tj), h(tm)));
            }
        }
        out
    }

    /// Two spin-½ singlet found by brute-force diagonalisation of the total
    /// spin operator, with the Condon–Shortley phase (first spin up positive).
    #[test]
    fn singlet_coefficient_matches_brute_force() {
        use nalgebra::{DMatrix, SymmetricEigen};
        // Basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
        let sx = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let sz = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]);
        // S_y ⊗ S_y is real even though S_y is not.
        let sy_sy = DMatrix::from_row_slice(4, 4, &[
            0.0, 0.0, 0.0, -0.25,
            0.0, 0.0, 0.25, 0.0,
            0.0, 0.25, 0.0, 0.0,
            -0.25, 0.0, 0.0, 0.0,
        ]);
        let dot = sx.kronecker(&sx) + sy_sy + sz.kronecker(&sz);
        let total = DMatrix::<f64>::identity(4, 4) * 1.5 + dot * 2.0;
        let eig = SymmetricEigen::new(total);
        let idx = (0..4).find(|&i| eig.eigenvalues[i].abs() < 1e-12).unwrap();
        let mut v = eig.eigenvectors.column(idx).into_owned();
        if v[1] < 0.0 {
            v = -v;
        }
        let cg = clebsch_gordan(h(1), h(1), h(1), h(-1), h(0), h(0)).unwrap();
        assert!((cg.to_f64() - v[1]).abs() < 1e-12);
        assert_eq!(cg, SignedSqrtRational::new(1, rational(1, 2)));
    }

    #[test]
    fn coupling_with_spin_zero_is_identity() {
        for (j, m) in pairs(8) {
            let cg = clebsch_gordan(j, m, HalfInt::ZERO, HalfInt::ZERO, j, m).unwrap();
            assert_eq!(cg, SignedSqrtRational::one(), "j={j} m={m}");
        }
    }

    #[test]
    fn mismatched_m_is_zero() {
        let cg = clebsch_gordan(h(1), h(1), h(1), h(1), h(0), h(0)).unwrap();
        assert!(cg.is_zero());
    }

    #[test]
    fn malformed_pair_is_rejected() {
        assert!(matches!(
            clebsch_gordan(h(2), h(1), h(1), h(1), h(1), h(2)),
            Err(Error::MalformedPair { .. })
        ));
        assert!(wigner3j(h(1), h(1), h(0), h(0), h(0), h(0)).is_err());
    }

    #[test]
    fn zero_projection_values() {
        assert_eq!(wigner3j_zero(0, 0, 0), SignedSqrtRational::one());
        assert_eq!(wigner3j_zero(1, 1, 0), SignedSqrtRational::new(-1, rational(1, 3)));
        assert!(wigner3j_zero(1, 1, 1).is_zero());
        assert!(wigner3j_zero(4, 1, 1).is_zero());
    }

    #[test]
    fn general_3j_values() {
        let v = wigner3j(h(2), h(2), h(0), h(0), h(0), h(0)).unwrap();
        assert_eq!(v, SignedSqrtRational::new(-1, rational(1, 3)));
        let v = wigner3j(h(1), h(1), h(0), h(1), h(-1), h(0)).unwrap();
        assert_eq!(v, SignedSqrtRational::new(1, rational(1, 2)));
        assert!(wigner3j(h(2), h(2), h(2), h(2), h(0), h(0)).unwrap().is_zero());
    }

    #[test]
    fn zero_projection_agrees_with_general_symbol() {
        for l in 0..=6u32 {
            for la in 0..=6u32 {
                for lb in 0..=6u32 {
                    let closed = wigner3j_zero(l, la, lb);
                    let general = wigner3j(
                        HalfInt::from_int(l.into()),
                        HalfInt::from_int(la.into()),
                        HalfInt::from_int(lb.into()),
                        HalfInt::ZERO,
                        HalfInt::ZERO,
                        HalfInt::ZERO,
                    )
                    .unwrap();
                    assert_eq!(closed, general, "({l},{la},{lb})");
                }
            }
        }
    }

    #[test]
    fn zero_projection_is_permutation_symmetric() {
        for l in 0..=5u32 {
            for la in 0..=5u32 {
                for lb in 0..=5u32 {
                    let v = wigner3j_zero(l, la, lb);
                    for p in [(la, l, lb), (lb, la, l), (l, lb, la), (la, lb, l), (lb, l, la)] {
                        assert_eq!(wigner3j_zero(p.0, p.1, p.2), v);
                    }
                }
            }
        }
    }

    #[test]
    fn completeness_is_exact() {
        for (j1, m1) in pairs(6) {
            for (j2, m2) in pairs(6) {
                let m = m1 + m2;
                let mut total = BigRational::zero();
                let lo = (j1 - j2).abs();
                for j in lo.range_to(j1 + j2) {
                    if j.admits(m) {
                        total += clebsch_gordan(j1, m1, j2, m2, j, m).unwrap().square();
                    }
                }
                assert_eq!(total, BigRational::one(), "j1={j1} m1={m1} j2={j2} m2={m2}");
            }
        }
    }

    #[test]
    fn orthogonality_in_floating_point() {
        for tj1 in 0..=6 {
            for tj2 in 0..=6 {
                let (j1, j2) = (h(tj1), h(tj2));
                let couplings: Vec<(HalfInt, HalfInt)> = (j1 - j2)
                    .abs()
                    .range_to(j1 + j2)
                    .flat_map(|j| (-j.twice()..=j.twice()).step_by(2).map(move |tm| (j, h(tm))))
                    .collect();
                for &(ja, ma) in &couplings {
                    for &(jb, mb) in &couplings {
                        let mut s = 0.0;
                        for tm1 in (-tj1..=tj1).step_by(2) {
                            for tm2 in (-tj2..=tj2).step_by(2) {
                                let a = clebsch_gordan(j1, h(tm1), j2, h(tm2), ja, ma).unwrap();
                                let b = clebsch_gordan(j1, h(tm1), j2, h(tm2), jb, mb).unwrap();
                                s += a.to_f64() * b.to_f64();
                            }
                        }
                        let expected = if (ja, ma) == (jb, mb) { 1.0 } else { 0.0 };
                        assert!((s - expected).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
