use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which concrete discrete valuation ring scalars live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BackendKind", into = "BackendKind")]
pub struct Backend {
    kind: BackendKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BackendKind {
    /// The integers localized at the prime `p`; uniformizer `p`.
    IntLocal { p: u64 },
    /// `F_q[t]` localized at `(t)`; uniformizer `t`.
    PolyLocal { q: u64 },
}

impl Backend {
    pub fn int_local(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self {
            kind: BackendKind::IntLocal { p },
        })
    }

    pub fn poly_local(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Self {
            kind: BackendKind::PolyLocal { q },
        })
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    /// The prime `p` (resp. `q`) the backend was built from.
    pub fn prime(&self) -> u64 {
        match self.kind {
            BackendKind::IntLocal { p } => p,
            BackendKind::PolyLocal { q } => q,
        }
    }

    pub(crate) fn ensure_same(&self, other: &Backend) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BackendMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl TryFrom<BackendKind> for Backend {
    type Error = Error;

    fn try_from(kind: BackendKind) -> Result<Self> {
        match kind {
            BackendKind::IntLocal { p } => Backend::int_local(p),
            BackendKind::PolyLocal { q } => Backend::poly_local(q),
        }
    }
}

impl From<Backend> for BackendKind {
    fn from(b: Backend) -> Self {
        b.kind
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BackendKind::IntLocal { p } => write!(f, "int:{p}"),
            BackendKind::PolyLocal { q } => write!(f, "poly:{q}"),
        }
    }
}

/// Parses the flag grammar `int:<p>` / `poly:<q>`.
impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, prime) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("backend `{s}`: expected int:<p> or poly:<q>")))?;
        let prime: u64 = prime
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("backend `{s}`: bad prime")))?;
        match kind.trim() {
            "int" => Backend::int_local(prime),
            "poly" => Backend::poly_local(prime),
            other => Err(Error::Parse(format!("backend kind `{other}`"))),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these bases are exact for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
