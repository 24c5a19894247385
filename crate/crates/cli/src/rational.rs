//! Exact parsing of user-supplied rates: fractions, decimals, integers.

use crate::error::CliError;
use ambx_core::Rat;
use num_bigint::BigInt;

/// Parses "3/4", "0.75", or "1" into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rat, CliError> {
    let text = text.trim();
    let bad = |detail: &str| CliError::Usage(format!("cannot parse rate '{text}': {detail}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
        let den: i64 = den.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
        if den == 0 {
            return Err(bad("denominator is zero"));
        }
        return Ok(Rat::new(BigInt::from(num), BigInt::from(den)));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let whole = if whole.is_empty() { "0" } else { whole };
        let neg = whole.starts_with('-');
        let whole_mag: u64 =
            whole.trim_start_matches('-').parse().map_err(|_| bad("bad integer part"))?;
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad fractional part"));
        }
        let scale = 10u128.pow(frac.len() as u32);
        let frac_mag: u128 = frac.parse().map_err(|_| bad("bad fractional part"))?;
        let mag = u128::from(whole_mag) * scale + frac_mag;
        let num = if neg { -BigInt::from(mag) } else { BigInt::from(mag) };
        return Ok(Rat::new(num, BigInt::from(scale)));
    }
    let int: i64 = text.parse().map_err(|_| bad("not a fraction, decimal, or integer"))?;
    Ok(Rat::from_integer(BigInt::from(int)))
}

/// Parses a comma-separated rate list.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rat>, CliError> {
    text.split(',').map(parse_rational).collect()
}

/// `ceil(k / r)` exactly.
pub fn required_n(k: u64, rate: &Rat) -> Result<u64, CliError> {
    use num_traits::{Signed, ToPrimitive};
    if !rate.is_positive() {
        return Err(CliError::Usage("rate must be positive".into()));
    }
    let q = Rat::from_integer(BigInt::from(k)) / rate;
    q.ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| CliError::Usage("required n overflows u64".into()))
}
