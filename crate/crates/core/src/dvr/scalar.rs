use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::backend::{Backend, BackendKind};
use super::poly::FpPoly;
use super::valuation::Valuation;
use crate::error::{Error, Result};

/// An exact element of the valuation ring `O` selected by a [`Backend`].
///
/// The representation is always reduced and its denominator is a unit of
/// `O`, so structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DvrScalar {
    backend: Backend,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Int(BigRational),
    Poly(PolyFrac),
}

/// `num / den` with `gcd(num, den) = 1` and `den(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct PolyFrac {
    num: FpPoly,
    den: FpPoly,
}

impl PolyFrac {
    fn from_poly(num: FpPoly) -> Self {
        let q = num.modulus();
        Self {
            num,
            den: FpPoly::constant(q, 1),
        }
    }

    /// Reduces `num / den`; fails if the reduced denominator is divisible
    /// by `t`.
    fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = num.modulus();
        if num.is_zero() {
            return Ok(Self::from_poly(num));
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let c = den.constant_term();
        if c == 0 {
            return Err(Error::NotInRing(format!(
                "denominator {:?} is divisible by t over F_{q}",
                den.coeffs()
            )));
        }
        let inv = den.inverse_residue(c);
        Ok(Self {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    fn is_integral_poly(&self) -> bool {
        self.den.is_one()
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.is_integral_poly() && rhs.is_integral_poly() {
            return Self::from_poly(self.num.add(&rhs.num));
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Self::new(num, den).expect("product of unit denominators is a unit")
    }

    fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_integral_poly() && rhs.is_integral_poly() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        let num = self.num.mul(&rhs.num);
        let den = self.den.mul(&rhs.den);
        Self::new(num, den).expect("product of unit denominators is a unit")
    }
}

fn p_adic_order(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (quot, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return k;
        }
        n = quot;
        k += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl DvrScalar {
    pub fn zero(backend: Backend) -> Self {
        Self::from_i64(backend, 0)
    }

    pub fn one(backend: Backend) -> Self {
        Self::from_i64(backend, 1)
    }

    /// The image of an integer in `O` (reduced mod `q` for `PolyLocal`).
    pub fn from_i64(backend: Backend, n: i64) -> Self {
        let repr = match backend.kind() {
            BackendKind::IntLocal { .. } => Repr::Int(BigRational::from_integer(BigInt::from(n))),
            BackendKind::PolyLocal { q } => {
                Repr::Poly(PolyFrac::from_poly(FpPoly::from_signed(q, &[n])))
            }
        };
        Self { backend, repr }
    }

    /// `num / den` in `IntLocal`. Fails unless the reduced denominator is
    /// prime to `p`.
    pub fn from_ratio(backend: Backend, num: BigInt, den: BigInt) -> Result<Self> {
        let BackendKind::IntLocal { p } = backend.kind() else {
            return Err(Error::BackendMismatch {
                left: backend.to_string(),
                right: "int-local".into(),
            });
        };
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = BigRational::new(num, den);
        if r.denom().mod_floor(&BigInt::from(p)).is_zero() {
            return Err(Error::NotInRing(format!("denominator of {r} is divisible by {p}")));
        }
        Ok(Self {
            backend,
            repr: Repr::Int(r),
        })
    }

    /// `num(t) / den(t)` in `PolyLocal`, coefficients lowest degree first.
    pub fn from_poly_coeffs(backend: Backend, num: &[i64], den: &[i64]) -> Result<Self> {
        let BackendKind::PolyLocal { q } = backend.kind() else {
            return Err(Error::BackendMismatch {
                left: backend.to_string(),
                right: "poly-local".into(),
            });
        };
        let frac = PolyFrac::new(FpPoly::from_signed(q, num), FpPoly::from_signed(q, den))?;
        Ok(Self {
            backend,
            repr: Repr::Poly(frac),
        })
    }

    pub(crate) fn from_fp_poly(backend: Backend, num: FpPoly) -> Self {
        Self {
            backend,
            repr: Repr::Poly(PolyFrac::from_poly(num)),
        }
    }

    /// `ϖ^k`: `p^k` for `IntLocal(p)`, `t^k` for `PolyLocal(q)`.
    pub fn uniformizer_power(backend: Backend, k: u64) -> Self {
        let repr = match backend.kind() {
            BackendKind::IntLocal { p } => {
                let exp = u32::try_from(k).expect("uniformizer exponent fits in u32");
                Repr::Int(BigRational::from_integer(num_traits::pow(
                    BigInt::from(p),
                    exp as usize,
                )))
            }
            BackendKind::PolyLocal { q } => {
                let k = usize::try_from(k).expect("uniformizer exponent fits in usize");
                Repr::Poly(PolyFrac::from_poly(FpPoly::monomial(q, 1, k)))
            }
        };
        Self { backend, repr }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Int(r) => r.is_zero(),
            Repr::Poly(f) => f.num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Int(r) => r.is_one(),
            Repr::Poly(f) => f.num.is_one() && f.den.is_one(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::ZERO
    }

    /// Normalized valuation; the denominator is a unit and contributes 0.
    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Int(r) => {
                if r.is_zero() {
                    Valuation::Infinite
                } else {
                    Valuation::Finite(p_adic_order(r.numer(), self.backend.prime()))
                }
            }
            Repr::Poly(f) => match f.num.t_adic_order() {
                None => Valuation::Infinite,
                Some(k) => Valuation::Finite(k as u64),
            },
        }
    }

    /// Writes a nonzero `x` as `ϖ^k · u` with `u` a unit.
    pub fn split_uniformizer(&self) -> Option<(u64, DvrScalar)> {
        let k = self.valuation().finite()?;
        let unit = match &self.repr {
            Repr::Int(r) => {
                let pk = num_traits::pow(BigInt::from(self.backend.prime()), k as usize);
                Repr::Int(r / BigRational::from_integer(pk))
            }
            Repr::Poly(f) => Repr::Poly(PolyFrac {
                num: f.num.shift_down(k as usize),
                den: f.den.clone(),
            }),
        };
        Some((
            k,
            DvrScalar {
                backend: self.backend,
                repr: unit,
            },
        ))
    }

    pub fn arith(&self, rhs: &DvrScalar, op: ArithOp) -> Result<DvrScalar> {
        self.backend.ensure_same(&rhs.backend)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(rhs),
            ArithOp::Sub => self.add_unchecked(&rhs.neg_ref()),
            ArithOp::Mul => self.mul_unchecked(rhs),
        })
    }

    fn add_unchecked(&self, rhs: &DvrScalar) -> DvrScalar {
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Int(a), Repr::Int(b)) => Repr::Int(a + b),
            (Repr::Poly(a), Repr::Poly(b)) => Repr::Poly(a.add(b)),
            _ => unreachable!("backend checked"),
        };
        DvrScalar {
            backend: self.backend,
            repr,
        }
    }

    fn mul_unchecked(&self, rhs: &DvrScalar) -> DvrScalar {
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Int(a), Repr::Int(b)) => Repr::Int(a * b),
            (Repr::Poly(a), Repr::Poly(b)) => Repr::Poly(a.mul(b)),
            _ => unreachable!("backend checked"),
        };
        DvrScalar {
            backend: self.backend,
            repr,
        }
    }

    fn neg_ref(&self) -> DvrScalar {
        let repr = match &self.repr {
            Repr::Int(a) => Repr::Int(-a),
            Repr::Poly(a) => Repr::Poly(a.neg()),
        };
        DvrScalar {
            backend: self.backend,
            repr,
        }
    }

    pub fn unit_inverse(&self) -> Result<DvrScalar> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!(
                "{} has valuation {}",
                self,
                self.valuation()
            )));
        }
        DvrScalar::one(self.backend).checked_div(self)
    }

    /// `self / rhs` when the quotient lies in `O`, i.e. `ν(rhs) ≤ ν(self)`.
    pub fn checked_div(&self, rhs: &DvrScalar) -> Result<DvrScalar> {
        self.backend.ensure_same(&rhs.backend)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if rhs.valuation() > self.valuation() {
            return Err(Error::NotDivisible(format!("{self} / {rhs}")));
        }
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Int(a), Repr::Int(b)) => Repr::Int(a / b),
            (Repr::Poly(a), Repr::Poly(b)) => {
                if b.is_integral_poly() && b.num.degree() == Some(0) {
                    let inv = b.num.inverse_residue(b.num.constant_term());
                    Repr::Poly(PolyFrac {
                        num: a.num.scale(inv),
                        den: a.den.clone(),
                    })
                } else {
                    Repr::Poly(PolyFrac::new(a.num.mul(&b.den), a.den.mul(&b.num))?)
                }
            }
            _ => unreachable!("backend checked"),
        };
        Ok(DvrScalar {
            backend: self.backend,
            repr,
        })
    }

    pub fn pow(&self, k: u64) -> DvrScalar {
        let mut acc = DvrScalar::one(self.backend);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Parses the backend's text grammar: `[-]digits[/digits]` for
    /// `IntLocal`, a `{"num": [...], "den": [...]}` record for `PolyLocal`.
    pub fn parse(backend: Backend, text: &str) -> Result<DvrScalar> {
        match backend.kind() {
            BackendKind::IntLocal { .. } => parse_int_text(backend, text),
            BackendKind::PolyLocal { .. } => {
                let value: Value = serde_json::from_str(text)
                    .map_err(|e| Error::Parse(format!("`{text}`: {e}")))?;
                DvrScalar::from_json(backend, &value)
            }
        }
    }

    /// Accepts the JSON forms used in matrix files: strings (or bare
    /// integers) for `IntLocal`, records (or bare integers) for `PolyLocal`.
    pub fn from_json(backend: Backend, value: &Value) -> Result<DvrScalar> {
        match (backend.kind(), value) {
            (_, Value::Number(n)) => {
                let n = n
                    .as_i64()
                    .ok_or_else(|| Error::Parse(format!("scalar {n}: not an integer")))?;
                Ok(DvrScalar::from_i64(backend, n))
            }
            (BackendKind::IntLocal { .. }, Value::String(s)) => parse_int_text(backend, s),
            (BackendKind::PolyLocal { .. }, Value::String(s)) => DvrScalar::parse(backend, s),
            (BackendKind::PolyLocal { .. }, Value::Object(map)) => {
                let coeffs = |key: &str| -> Result<Option<Vec<i64>>> {
                    match map.get(key) {
                        None => Ok(None),
                        Some(Value::Array(items)) => items
                            .iter()
                            .map(|c| {
                                c.as_i64().ok_or_else(|| {
                                    Error::Parse(format!("`{key}` coefficient {c} is not an integer"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                            .map(Some),
                        Some(other) => Err(Error::Parse(format!("`{key}` must be an array, got {other}"))),
                    }
                };
                if let Some(extra) = map.keys().find(|k| *k != "num" && *k != "den") {
                    return Err(Error::Parse(format!("unexpected field `{extra}` in scalar record")));
                }
                let num = coeffs("num")?
                    .ok_or_else(|| Error::Parse("scalar record is missing `num`".into()))?;
                let den = coeffs("den")?.unwrap_or_else(|| vec![1]);
                if den.is_empty() || FpPoly::from_signed(backend.prime(), &den).is_zero() {
                    return Err(Error::Parse("scalar record has a zero denominator".into()));
                }
                DvrScalar::from_poly_coeffs(backend, &num, &den)
            }
            (_, other) => Err(Error::Parse(format!("unsupported scalar {other} for {backend}"))),
        }
    }

    /// Canonical JSON: a string for `IntLocal`, a record for `PolyLocal`.
    pub fn to_json(&self) -> Value {
        match &self.repr {
            Repr::Int(r) => Value::String(r.to_string()),
            Repr::Poly(f) => {
                let num: Vec<u64> = if f.num.is_zero() {
                    vec![0]
                } else {
                    f.num.coeffs().to_vec()
                };
                json!({ "num": num, "den": f.den.coeffs() })
            }
        }
    }

    /// Canonical text; `parse(backend, &x.to_text()) == x`.
    pub fn to_text(&self) -> String {
        match &self.repr {
            Repr::Int(r) => r.to_string(),
            Repr::Poly(_) => self.to_json().to_string(),
        }
    }

    /// The value as a small integer, when it is one.
    pub fn as_i64(&self) -> Option<i64> {
        match &self.repr {
            Repr::Int(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    pub fn is_negative_integer(&self) -> bool {
        matches!(&self.repr, Repr::Int(r) if r.is_negative())
    }
}

fn parse_int_text(backend: Backend, text: &str) -> Result<DvrScalar> {
    let bad = || Error::Parse(format!("`{text}`: expected [-]digits[/digits]"));
    let t = text.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| -> Result<BigInt> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    let num = digits(num)? * sign;
    let den = match den {
        Some(d) => digits(d)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("`{text}`: zero denominator")));
    }
    DvrScalar::from_ratio(backend, num, den)
}

impl serde::Serialize for DvrScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl fmt::Display for DvrScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// Operator forms panic on a backend mismatch; use `arith` for the checked form.
impl Add for &DvrScalar {
    type Output = DvrScalar;

    fn add(self, rhs: &DvrScalar) -> DvrScalar {
        self.arith(rhs, ArithOp::Add).expect("backend mismatch in +")
    }
}

impl Sub for &DvrScalar {
    type Output = DvrScalar;

    fn sub(self, rhs: &DvrScalar) -> DvrScalar {
        self.arith(rhs, ArithOp::Sub).expect("backend mismatch in -")
    }
}

impl Mul for &DvrScalar {
    type Output = DvrScalar;

    fn mul(self, rhs: &DvrScalar) -> DvrScalar {
        self.arith(rhs, ArithOp::Mul).expect("backend mismatch in *")
    }
}

impl Neg for &DvrScalar {
    type Output = DvrScalar;

    fn neg(self) -> DvrScalar {
        self.neg_ref()
    }
}
