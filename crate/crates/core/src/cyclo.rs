//! Cyclotomic quotients Z/p^a [x] / Phi_{p^j}(x), housing character
//! values zeta_{p^j}. Level j = 0 degenerates to Z/p^a itself (the
//! trivial character).

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, PrecisionProfile, ZpRing};
use crate::ring::CoeffRing;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloScalar {
    pub coeffs: Vec<PadicScalar>,
    pub level: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycloRing {
    pub zp: ZpRing,
    pub level: u32,
}

impl CycloRing {
    pub fn new(profile: PrecisionProfile, level: u32) -> Self {
        CycloRing {
            zp: ZpRing::new(profile),
            level,
        }
    }

    /// deg Phi_{p^j} = p^(j-1)(p-1); 1 at level 0.
    pub fn degree(&self) -> usize {
        if self.level == 0 {
            1
        } else {
            (self.zp.profile.p.pow(self.level - 1) * (self.zp.profile.p - 1)) as usize
        }
    }

    /// Coefficients of Phi_{p^j}(x) = sum_i x^(i p^(j-1)), i = 0..p-1.
    fn modulus_poly(&self) -> Vec<u128> {
        let deg = self.degree();
        let mut out = vec![0u128; deg + 1];
        if self.level == 0 {
            // Phi_1(x) = x - 1
            out[0] = self.zp.profile.modulus() - 1;
            out[1] = 1;
        } else {
            let step = self.zp.profile.p.pow(self.level - 1) as usize;
            for i in 0..self.zp.profile.p as usize {
                out[i * step] = 1;
            }
        }
        out
    }

    fn canonical(&self, mut raw: Vec<PadicScalar>) -> CycloScalar {
        let deg = self.degree();
        let modp = self.modulus_poly();
        // monic reduction from the top
        while raw.len() > deg {
            let top = raw.len() - 1;
            let c = raw[top];
            if c.value % self.zp.profile.modulus() != 0 {
                for (i, &m) in modp.iter().enumerate() {
                    let idx = top - deg + i;
                    let sub = self.zp.mul(&c, &self.zp.elem(m));
                    raw[idx] = self.zp.sub(&raw[idx], &sub);
                }
            }
            debug_assert_eq!(raw[top].value % self.zp.profile.modulus(), 0);
            raw.pop();
        }
        while raw.len() < deg {
            raw.push(self.zp.elem(0));
        }
        CycloScalar {
            coeffs: raw,
            level: self.level,
        }
    }

    pub fn from_coeffs(&self, coeffs: Vec<PadicScalar>) -> CycloScalar {
        self.canonical(coeffs)
    }

    /// x^k reduced mod Phi_{p^j}.
    pub fn monomial(&self, k: usize) -> CycloScalar {
        let pj = if self.level == 0 {
            1
        } else {
            self.zp.profile.p.pow(self.level) as usize
        };
        let k = k % pj;
        let mut raw = vec![self.zp.elem(0); k + 1];
        raw[k] = self.zp.elem(1);
        self.canonical(raw)
    }

    pub fn from_zp(&self, x: PadicScalar) -> CycloScalar {
        let mut raw = vec![self.zp.elem(0); self.degree()];
        raw[0] = x;
        CycloScalar {
            coeffs: raw,
            level: self.level,
        }
    }

    /// The scalar part, defined when all higher coefficients vanish.
    pub fn as_zp(&self, x: &CycloScalar) -> Result<PadicScalar> {
        for c in &x.coeffs[1..] {
            if !self.zp.is_zero(c) {
                return Err(Error::InvalidParameter(
                    "cyclotomic element is not scalar".into(),
                ));
            }
        }
        Ok(x.coeffs[0])
    }
}

impl CoeffRing for CycloRing {
    type Elem = CycloScalar;

    fn zero(&self) -> CycloScalar {
        CycloScalar {
            coeffs: vec![self.zp.elem(0); self.degree()],
            level: self.level,
        }
    }
    fn one(&self) -> CycloScalar {
        self.from_zp(self.zp.elem(1))
    }
    fn add(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| self.zp.add(x, y))
            .collect();
        CycloScalar {
            coeffs,
            level: self.level,
        }
    }
    fn neg(&self, a: &CycloScalar) -> CycloScalar {
        CycloScalar {
            coeffs: a.coeffs.iter().map(|x| self.zp.neg(x)).collect(),
            level: self.level,
        }
    }
    fn mul(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        let deg = self.degree();
        let mut raw = vec![self.zp.elem(0); 2 * deg];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.zp.is_zero(x) && x.value == 0 {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let prod = self.zp.mul(x, y);
                raw[i + j] = self.zp.add(&raw[i + j], &prod);
            }
        }
        self.canonical(raw)
    }
    fn is_zero(&self, a: &CycloScalar) -> bool {
        a.coeffs.iter().all(|c| self.zp.is_zero(c))
    }
    fn elem_eq(&self, a: &CycloScalar, b: &CycloScalar) -> bool {
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .all(|(x, y)| self.zp.eq_at_prec(x, y))
    }
    fn from_i64(&self, n: i64) -> CycloScalar {
        self.from_zp(self.zp.from_i64(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_has_order_p_pow_j() {
        let r = CycloRing::new(PrecisionProfile::new(5, 4, 1).unwrap(), 1);
        assert_eq!(r.degree(), 4);
        let z = r.monomial(1);
        let mut acc = r.one();
        for _ in 0..5 {
            acc = r.mul(&acc, &z);
        }
        assert!(r.elem_eq(&acc, &r.one()));
        // 1 + z + z^2 + z^3 + z^4 = 0 (Phi_5(zeta) = 0)
        let mut s = r.zero();
        for k in 0..5 {
            s = r.add(&s, &r.monomial(k));
        }
        assert!(r.is_zero(&s));
    }

    #[test]
    fn level2_degree_and_relation() {
        let r = CycloRing::new(PrecisionProfile::new(5, 3, 1).unwrap(), 2);
        assert_eq!(r.degree(), 20);
        // Phi_25(zeta_25) = sum zeta^(5i) = 0
        let mut s = r.zero();
        for i in 0..5 {
            s = r.add(&s, &r.monomial(5 * i));
        }
        assert!(r.is_zero(&s));
    }

    #[test]
    fn level0_is_scalar_ring() {
        let r = CycloRing::new(PrecisionProfile::new(5, 3, 1).unwrap(), 0);
        assert_eq!(r.degree(), 1);
        // x = 1 in the level-0 quotient
        let z = r.monomial(1);
        assert!(r.elem_eq(&z, &r.one()));
    }
}
