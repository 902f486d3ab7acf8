use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A single coefficient value: exact when the kind is rational-valued.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Real(f64),
}

impl Value {
    pub fn zero() -> Self {
        Value::Exact(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Value::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_zero(),
            Value::Real(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Real(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Real(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Real(x) => write!(f, "{x:.16e}"),
        }
    }
}

/// An explicit, finitely supported coefficient list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoefficientTable {
    entries: BTreeMap<u64, Value>,
}

impl CoefficientTable {
    /// Entries must have `n >= 1` and distinct `n`.
    pub fn new<I: IntoIterator<Item = (u64, Value)>>(entries: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, v) in entries {
            if n == 0 {
                return Err(Error::Domain("table entries need n >= 1".into()));
            }
            if let Value::Real(x) = v {
                if !x.is_finite() {
                    return Err(Error::Domain(format!("non-finite table value at n = {n}")));
                }
            }
            if map.insert(n, v).is_some() {
                return Err(Error::Domain(format!("duplicate table entry for n = {n}")));
            }
        }
        Ok(Self { entries: map })
    }

    pub fn get(&self, n: u64) -> Value {
        self.entries.get(&n).cloned().unwrap_or_else(Value::zero)
    }

    /// Nonzero entries in increasing `n`.
    pub fn support(&self) -> impl Iterator<Item = (u64, &Value)> {
        self.entries.iter().filter(|(_, v)| !v.is_zero()).map(|(n, v)| (*n, v))
    }

    pub fn support_bound(&self) -> Option<u64> {
        self.support().map(|(n, _)| n).last()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(|v| matches!(v, Value::Exact(_)))
    }
}

/// The arithmetic function `a(n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ArithmeticCoefficients {
    /// Möbius function.
    Mobius,
    /// Liouville function `(-1)^{Omega(n)}`.
    Liouville,
    /// von Mangoldt function: `ln p` at prime powers, zero elsewhere.
    VonMangoldt,
    /// `a(n) = 1`.
    Unit,
    /// `a(1) = 1`, zero elsewhere.
    Delta,
    Table(CoefficientTable),
}

impl ArithmeticCoefficients {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Mobius => "mobius",
            Self::Liouville => "liouville",
            Self::VonMangoldt => "von_mangoldt",
            Self::Unit => "unit",
            Self::Delta => "delta",
            Self::Table(_) => "table",
        }
    }

    /// Greatest `n` with `a(n) != 0`, when the support is finite.
    pub fn support_bound(&self) -> Option<u64> {
        match self {
            Self::Delta => Some(1),
            Self::Table(t) => Some(t.support_bound().unwrap_or(0)),
            _ => None,
        }
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.support_bound().is_some()
    }

    /// Real part beyond which `sum a(n) n^{-s}` converges absolutely.
    /// `None` for finitely supported coefficients, where every `s` works.
    pub fn abscissa_hint(&self) -> Option<f64> {
        match self {
            Self::Delta | Self::Table(_) => None,
            _ => Some(1.0),
        }
    }

    /// Exact rational values are available for every `n`.
    pub fn is_exact(&self) -> bool {
        match self {
            Self::VonMangoldt => false,
            Self::Table(t) => t.is_exact(),
            _ => true,
        }
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self, Self::Mobius | Self::Liouville | Self::Unit | Self::Delta)
    }

    /// Nonzero `(n, a(n))` pairs of a finitely supported sequence.
    pub fn finite_support(&self) -> Option<Vec<(u64, Value)>> {
        match self {
            Self::Delta => Some(vec![(1, Value::from_int(1))]),
            Self::Table(t) => Some(t.support().map(|(n, v)| (n, v.clone())).collect()),
            _ => None,
        }
    }

    /// `a(n)` for a single `n >= 1`, factoring `n` when needed.
    pub fn coeff(&self, n: u64) -> Result<Value> {
        if n == 0 {
            return Err(Error::Domain("arithmetic functions are indexed by n >= 1".into()));
        }
        Ok(match self {
            Self::Unit => Value::from_int(1),
            Self::Delta => Value::from_int(i64::from(n == 1)),
            Self::Table(t) => t.get(n),
            Self::Mobius => {
                let f = factorize(n);
                if f.iter().any(|&(_, e)| e > 1) {
                    Value::zero()
                } else {
                    Value::from_int(if f.len().is_multiple_of(2) { 1 } else { -1 })
                }
            }
            Self::Liouville => {
                let omega: u32 = factorize(n).iter().map(|&(_, e)| e).sum();
                Value::from_int(if omega.is_multiple_of(2) { 1 } else { -1 })
            }
            Self::VonMangoldt => {
                let f = factorize(n);
                if f.len() == 1 {
                    Value::Real((f[0].0 as f64).ln())
                } else {
                    Value::Real(0.0)
                }
            }
        })
    }

    /// `a(1..=m)` in floating point, index `n - 1`.
    pub fn values_f64(&self, m: u64) -> Result<Vec<f64>> {
        check_capacity("coefficient table", m, 1)?;
        let m = m as usize;
        Ok(match self {
            Self::Unit => vec![1.0; m],
            Self::Delta => (1..=m).map(|n| f64::from(u8::from(n == 1))).collect(),
            Self::Table(t) => (1..=m as u64).map(|n| t.get(n).to_f64()).collect(),
            Self::Mobius | Self::Liouville | Self::VonMangoldt => {
                let sieve = super::sieve::MultiplicativeSieve::new(m);
                match self {
                    Self::Mobius => sieve.mobius().iter().map(|&v| f64::from(v)).collect(),
                    Self::Liouville => sieve.liouville().iter().map(|&v| f64::from(v)).collect(),
                    _ => sieve.von_mangoldt(),
                }
            }
        })
    }

    /// `a(1..=m)` as [`Value`]s, index `n - 1`.
    pub fn values(&self, m: u64) -> Result<Vec<Value>> {
        check_capacity("coefficient table", m, 1)?;
        match self {
            Self::VonMangoldt => Ok(self.values_f64(m)?.into_iter().map(Value::Real).collect()),
            Self::Mobius | Self::Liouville => {
                let sieve = super::sieve::MultiplicativeSieve::new(m as usize);
                let src = if matches!(self, Self::Mobius) {
                    sieve.mobius()
                } else {
                    sieve.liouville()
                };
                Ok(src.iter().map(|&v| Value::from_int(i64::from(v))).collect())
            }
            _ => (1..=m).map(|n| self.coeff(n)).collect(),
        }
    }
}

/// Largest table the sieves will allocate (entries across all columns).
pub const MAX_TABLE_ENTRIES: u64 = 1 << 27;

pub(crate) fn check_capacity(what: &'static str, m: u64, columns: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain(format!("{what}: bound must be at least 1")));
    }
    let requested = m.saturating_mul(columns.max(1));
    if requested > MAX_TABLE_ENTRIES {
        return Err(Error::Capacity {
            what,
            requested,
            bound: MAX_TABLE_ENTRIES,
        });
    }
    Ok(())
}

/// Prime factorization by trial division, as `(p, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Parses an exact rational from `p/q`, an integer, or a decimal with optional exponent.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational or decimal number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -r } else { r })
}

/// Parses the `n<TAB>value` table format; `#` lines and blank lines are skipped.
pub fn parse_table(text: &str) -> Result<CoefficientTable> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (n, v) = line
            .split_once('\t')
            .or_else(|| line.trim().split_once(char::is_whitespace))
            .ok_or_else(|| Error::Parse(format!("line {}: expected n<TAB>value", lineno + 1)))?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad index {n:?}", lineno + 1)))?;
        let value = parse_rational(v)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        entries.push((n, Value::Exact(value)));
    }
    CoefficientTable::new(entries)
}

/// Renders a table in the import format (exact values as `p/q`).
pub fn format_table(table: &CoefficientTable) -> String {
    let mut out = String::new();
    for (n, v) in &table.entries {
        out.push_str(&format!("{n}\t{v}\n"));
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn builtin_values() {
        let mu = ArithmeticCoefficients::Mobius;
        assert_eq!(mu.coeff(6).unwrap(), Value::from_int(1));
        assert_eq!(mu.coeff(4).unwrap(), Value::from_int(0));
        assert_eq!(mu.coeff(1).unwrap(), Value::from_int(1));
        assert_eq!(mu.coeff(30).unwrap(), Value::from_int(-1));
        let lam = ArithmeticCoefficients::VonMangoldt;
        assert!((lam.coeff(8).unwrap().to_f64() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(lam.coeff(12).unwrap().to_f64(), 0.0);
        assert_eq!(lam.coeff(1).unwrap().to_f64(), 0.0);
        let liou = ArithmeticCoefficients::Liouville;
        assert_eq!(liou.coeff(12).unwrap(), Value::from_int(-1));
        assert_eq!(liou.coeff(36).unwrap(), Value::from_int(1));
    }

    #[test]
    fn index_zero_is_rejected() {
        for a in [ArithmeticCoefficients::Unit, ArithmeticCoefficients::Mobius] {
            assert!(matches!(a.coeff(0), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn sieve_matches_factorization() {
        for a in [
            ArithmeticCoefficients::Mobius,
            ArithmeticCoefficients::Liouville,
            ArithmeticCoefficients::VonMangoldt,
        ] {
            let v = a.values_f64(3000).unwrap();
            for n in 1..=3000u64 {
                let direct = a.coeff(n).unwrap().to_f64();
                assert!((v[n as usize - 1] - direct).abs() < 1e-15, "{} at {n}", a.name());
            }
        }
    }

    #[test]
    fn tables_validate_entries() {
        assert!(CoefficientTable::new([(0, Value::from_int(1))]).is_err());
        assert!(CoefficientTable::new([(2, Value::from_int(1)), (2, Value::from_int(3))]).is_err());
        let t = CoefficientTable::new([(3, Value::from_int(2)), (5, Value::zero())]).unwrap();
        assert_eq!(t.support_bound(), Some(3));
        let a = ArithmeticCoefficients::Table(t);
        assert_eq!(a.coeff(4).unwrap(), Value::zero());
        assert_eq!(a.coeff(3).unwrap(), Value::from_int(2));
        assert_eq!(a.support_bound(), Some(3));
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("1.5e2").unwrap(), rat(150, 1));
        assert_eq!(parse_rational("2.5E-1").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn table_format_roundtrip() {
        let text = "# coefficients\n1\t1\n2\t-1/2\n\n4\t0.125\n";
        let t = parse_table(text).unwrap();
        assert_eq!(t.get(2), Value::Exact(rat(-1, 2)));
        assert_eq!(t.get(4), Value::Exact(rat(1, 8)));
        assert_eq!(parse_table(&format_table(&t)).unwrap(), t);
        assert!(parse_table("1\t1\n1\t2\n").is_err());
        assert!(parse_table("x\t1\n").is_err());
        assert!(parse_table("1\n").is_err());
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(
            ArithmeticCoefficients::Unit.values_f64(MAX_TABLE_ENTRIES + 1),
            Err(Error::Capacity { .. })
        ));
    }
}
