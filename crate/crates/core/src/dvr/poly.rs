//! Dense univariate polynomials over the prime field `F_q`.
//!
//! Coefficients are residues in `[0, q)`, lowest degree first, with no
//! trailing zeros (the zero polynomial has no coefficients).

use super::backend::pow_mod;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    q: u64,
    coeffs: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 + b as u128) % q as u128) as u64
}

fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    add_mod(a, q - b, q)
}

impl FpPoly {
    pub fn zero(q: u64) -> Self {
        Self { q, coeffs: Vec::new() }
    }

    pub fn constant(q: u64, c: u64) -> Self {
        Self::from_residues(q, vec![c % q])
    }

    /// `c · t^k`.
    pub fn monomial(q: u64, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c % q;
        Self::from_residues(q, coeffs)
    }

    /// Builds from signed integer coefficients, reducing them mod `q`.
    pub fn from_signed(q: u64, coeffs: &[i64]) -> Self {
        let residues = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(q as i128) as u64)
            .collect();
        Self::from_residues(q, residues)
    }

    pub fn from_residues(q: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { q, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Multiplicity of `t` as a factor; `None` for zero.
    pub fn t_adic_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn inverse_residue(&self, c: u64) -> u64 {
        debug_assert!(!c.is_multiple_of(self.q));
        pow_mod(c, self.q - 2, self.q)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let q = self.q;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                add_mod(a, b, q)
            })
            .collect();
        Self::from_residues(q, coeffs)
    }

    pub fn neg(&self) -> Self {
        let q = self.q;
        let coeffs = self.coeffs.iter().map(|&c| (q - c) % q).collect();
        Self::from_residues(q, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let q = self.q;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                sub_mod(a, b, q)
            })
            .collect();
        Self::from_residues(q, coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.q);
        }
        let q = self.q;
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, q), q);
            }
        }
        Self::from_residues(q, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let q = self.q;
        let coeffs = self.coeffs.iter().map(|&a| mul_mod(a, c % q, q)).collect();
        Self::from_residues(q, coeffs)
    }

    /// Drops the lowest `k` coefficients, i.e. divides by `t^k` when `t^k`
    /// divides `self`.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_residues(self.q, self.coeffs.iter().skip(k).copied().collect())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let q = self.q;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(q), self.clone());
        }
        let inv_lead = self.inverse_residue(divisor.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv_lead, q);
            if c == 0 {
                continue;
            }
            quot[k] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = sub_mod(rem[k + i], mul_mod(c, d, q), q);
            }
        }
        rem.truncate(dd);
        (Self::from_residues(q, quot), Self::from_residues(q, rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.inverse_residue(a.leading());
            a.scale(inv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_signed(q, c)
    }

    #[test]
    fn arithmetic_mod_q() {
        // (1 + t)^2 = 1 + 2t + t^2; in F_2 the middle term vanishes
        let a = p(2, &[1, 1]);
        assert_eq!(a.mul(&a), p(2, &[1, 0, 1]));
        let a = p(5, &[1, 1]);
        assert_eq!(a.mul(&a), p(5, &[1, 2, 1]));
        assert_eq!(p(3, &[0, 1]).add(&p(3, &[0, 2])), FpPoly::zero(3));
        assert_eq!(p(7, &[-1]), p(7, &[6]));
        assert_eq!(p(7, &[3, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn division_and_gcd() {
        let q = 7;
        let f = p(q, &[1, 2, 3, 4]);
        let g = p(q, &[5, 0, 1]);
        let (quot, rem) = f.div_rem(&g);
        assert_eq!(quot.mul(&g).add(&rem), f);
        assert!(rem.degree() < g.degree());

        // gcd((t+1)(t+2), (t+1)(t+3)) = t+1
        let a = p(q, &[1, 1]).mul(&p(q, &[2, 1]));
        let b = p(q, &[1, 1]).mul(&p(q, &[3, 1]));
        assert_eq!(a.gcd(&b), p(q, &[1, 1]));
        assert_eq!(a.scale(3).gcd(&FpPoly::zero(q)), a);
    }

    #[test]
    fn t_adic_order() {
        assert_eq!(p(5, &[0, 0, 3, 1]).t_adic_order(), Some(2));
        assert_eq!(FpPoly::zero(5).t_adic_order(), None);
        assert_eq!(p(5, &[0, 0, 3, 1]).shift_down(2), p(5, &[3, 1]));
    }
}
