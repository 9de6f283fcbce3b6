//! Small text formats used on the command line.

use aklt_core::hamiltonian::Coefficients;
use aklt_core::{BigInt, BigRational, HalfInt};
use num_traits::{Signed, Zero};

use crate::CliError;

/// `3/2`, `2` or `1.5`.
pub fn half_int(text: &str) -> Result<HalfInt, CliError> {
    let r = rational(text)?;
    let twice = r * BigRational::from_integer(BigInt::from(2));
    if !twice.is_integer() {
        return Err(CliError::Parse(format!("{text:?} is not a multiple of 1/2")));
    }
    let twice: i64 = twice.to_integer().try_into().map_err(|_| CliError::Parse(format!("{text:?} is too large")))?;
    Ok(HalfInt::from_twice(twice))
}

/// `7/3`, `-2` or `0.125`, read exactly.
pub fn rational(text: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Parse(format!("cannot read {text:?} as a number"));
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = BigRational::new(whole.abs() * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?))
}

/// `A:B` with `A ≤ B`.
pub fn range(text: &str, what: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Parse(format!("{what} must look like A:B, got {text:?}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

pub fn coefficients(entries: &[String]) -> Result<Coefficients, CliError> {
    let mut out = Coefficients::new();
    for entry in entries {
        let parts: Vec<&str> = entry.split(',').collect();
        let [bond, j, value] = parts.as_slice() else {
            return Err(CliError::Parse(format!("--coeff expects j,J,value, got {entry:?}")));
        };
        let bond: usize =
            bond.trim().parse().map_err(|_| CliError::Parse(format!("bond index {bond:?} in {entry:?}")))?;
        out.insert((bond, half_int(j)?), rational(value)?);
    }
    Ok(out)
}

/// Twelve significant digits, trailing zeros dropped; scientific notation
/// outside `[1e-5, 1e12)`.
pub fn float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s }
    } else {
        format!("{x:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use aklt_core::numerics::rational as q;

    #[test]
    fn numbers() {
        assert_eq!(rational("7/3").unwrap(), q(7, 3));
        assert_eq!(rational("0.125").unwrap(), q(1, 8));
        assert_eq!(rational("-1.5").unwrap(), q(-3, 2));
        assert_eq!(rational("4").unwrap(), q(4, 1));
        assert!(rational("1/0").is_err());
        assert!(rational("x").is_err());
        assert_eq!(half_int("3/2").unwrap(), HalfInt::from_twice(3));
        assert_eq!(half_int("1.5").unwrap(), HalfInt::from_twice(3));
        assert!(half_int("1/3").is_err());
    }

    #[test]
    fn coefficient_entries() {
        let c = coefficients(&["1,2,7/3".into(), "0,3/2,1".into()]).unwrap();
        assert_eq!(c[&(1, HalfInt::from_int(2))], q(7, 3));
        assert!(coefficients(&["1,2".into()]).is_err());
    }

    #[test]
    fn floats() {
        assert_eq!(float(1.0 / 3.0), "0.333333333333");
        assert_eq!(float(2.0 / 9.0), "0.222222222222");
        assert_eq!(float(0.25), "0.25");
        assert_eq!(float(4f64.ln()), "1.38629436112");
        assert_eq!(float(0.0), "0");
        assert_eq!(float(1.25e-7), "1.25000000000e-7");
    }
}
