//! Exact rational helpers on top of `num-rational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() {
            BigInt::zero()
        } else {
            ip.parse().ok()?
        };
        let frac: BigInt = fp.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let q = Rational::new(whole * &den + frac, den);
        return Some(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Too large for the direct conversion; scale both parts down.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Renders `q` with `digits` significant decimal digits, truncated toward
/// zero and followed by `…` when the expansion does not terminate there.
pub fn decimal(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let int_part = a.to_integer();
    let mut rem = a.numer() - &int_part * a.denom();
    let den = a.denom().clone();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let int_str = int_part.to_string();
    out.push_str(&int_str);
    let mut started = !int_part.is_zero();
    let mut sig = if started { int_str.len() } else { 0 };
    if rem.is_zero() {
        return out;
    }
    out.push('.');
    let ten = BigInt::from(10);
    while !rem.is_zero() && sig < digits {
        rem *= &ten;
        let (d, r) = rem.div_rem(&den);
        rem = r;
        if !d.is_zero() {
            started = true;
        }
        if started {
            sig += 1;
        }
        out.push_str(&d.to_string());
    }
    if !rem.is_zero() {
        out.push('…');
    }
    out
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// via the continued-fraction expansion (convergents and semiconvergents).
pub fn rationalize(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let exact = Rational::from_float(x)?;
    let max_den = BigInt::from(max_den.max(1));
    if exact.denom() <= &max_den {
        return Some(exact);
    }
    // Convergents h/k of the exact binary value.
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            // Largest semiconvergent still inside the bound.
            let t = (&max_den - &k0) / &k1;
            let cand_h = &t * &h1 + &h0;
            let cand_k = &t * &k1 + &k0;
            let semi = Rational::new(cand_h, cand_k);
            let conv = Rational::new(h1.clone(), k1.clone());
            let d_semi = (&semi - &exact).abs();
            let d_conv = (&conv - &exact).abs();
            return Some(if t > BigInt::zero() && d_semi < d_conv {
                semi
            } else {
                conv
            });
        }
        let h2 = &a * &h1 + &h0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            return Some(Rational::new(h1, k1));
        }
        rest = frac.recip();
    }
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
