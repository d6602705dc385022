//! The unramified quadratic extension O = Z_p[sqrt(d)] at fixed
//! precision, with d the smallest positive quadratic non-residue mod p.
//! Conjugation, norms, Teichmueller lifts and the truncated logarithm
//! on 1 + pO live here.

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, PrecisionProfile, ZpRing};
use crate::ring::CoeffRing;
use serde::{Deserialize, Serialize};

/// x + y*sqrt(d) with both coordinates at shared precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadScalar {
    pub x: PadicScalar,
    pub y: PadicScalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadRing {
    pub zp: ZpRing,
    pub d: u64,
}

/// Smallest positive quadratic non-residue mod p (p odd).
pub fn smallest_non_residue(p: u64) -> u64 {
    let residues: std::collections::HashSet<u64> =
        (1..p).map(|x| (x * x) % p).collect();
    (2..p).find(|x| !residues.contains(x)).expect("p > 2")
}

impl QuadRing {
    pub fn new(profile: PrecisionProfile) -> Self {
        let d = smallest_non_residue(profile.p);
        QuadRing {
            zp: ZpRing::new(profile),
            d,
        }
    }

    pub fn with_d(profile: PrecisionProfile, d: u64) -> Self {
        QuadRing {
            zp: ZpRing::new(profile),
            d,
        }
    }

    pub fn elem(&self, x: u128, y: u128) -> QuadScalar {
        QuadScalar {
            x: self.zp.elem(x),
            y: self.zp.elem(y),
        }
    }

    pub fn from_zp(&self, x: PadicScalar) -> QuadScalar {
        QuadScalar {
            x,
            y: PadicScalar {
                value: 0,
                prec: x.prec,
            },
        }
    }

    pub fn d_scalar(&self) -> PadicScalar {
        self.zp.elem(self.d as u128)
    }

    pub fn conj(&self, a: &QuadScalar) -> QuadScalar {
        QuadScalar {
            x: a.x,
            y: self.zp.neg(&a.y),
        }
    }

    /// Norm x^2 - d*y^2 down to Z_p.
    pub fn norm(&self, a: &QuadScalar) -> PadicScalar {
        let x2 = self.zp.mul(&a.x, &a.x);
        let dy2 = self.zp.mul(&self.d_scalar(), &self.zp.mul(&a.y, &a.y));
        self.zp.sub(&x2, &dy2)
    }

    pub fn is_unit(&self, a: &QuadScalar) -> bool {
        self.zp.is_unit(&self.norm(a))
    }

    pub fn inv(&self, a: &QuadScalar) -> Result<QuadScalar> {
        let n = self.norm(a);
        let ninv = self.zp.inv(&n)?;
        let c = self.conj(a);
        Ok(QuadScalar {
            x: self.zp.mul(&c.x, &ninv),
            y: self.zp.mul(&c.y, &ninv),
        })
    }

    pub fn pow_u(&self, a: &QuadScalar, mut e: u128) -> QuadScalar {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Teichmueller lift of a unit residue (x0, y0) mod p in O: the
    /// root of unity of order dividing p^2 - 1 congruent to it mod p,
    /// by iterating Frobenius z -> z^(p^2).
    pub fn teichmuller(&self, x0: u64, y0: u64) -> Result<QuadScalar> {
        let mut z = self.elem(x0 as u128, y0 as u128);
        if !self.is_unit(&z) {
            return Err(Error::NonUnitResidue);
        }
        let p2 = (self.zp.profile.p as u128) * (self.zp.profile.p as u128);
        for _ in 0..=self.zp.profile.a {
            let next = self.pow_u(&z, p2);
            if next == z {
                break;
            }
            z = next;
        }
        Ok(z)
    }

    /// Truncated logarithm on 1 + pO: sum of (-1)^(k+1) (u-1)^k / k.
    /// Certified to a - guard digits; the guard must absorb the p-part
    /// of the denominators k that contribute.
    pub fn log1(&self, u: &QuadScalar) -> Result<QuadScalar> {
        let prof = self.zp.profile;
        let t = self.sub(u, &self.one());
        if self.zp.val(&t.x) < 1 || self.zp.val(&t.y) < 1 {
            return Err(Error::InvalidParameter(
                "log1 requires u = 1 mod p".into(),
            ));
        }
        let target = prof.a - prof.guard;
        let mut acc = self.zero();
        let mut power = self.one();
        // terms with k >= 2a vanish mod p^a since k - v_p(k) >= k/2
        for k in 1..=(2 * prof.a) {
            power = self.mul(&power, &t);
            let vk = {
                let mut v = 0u32;
                let mut kk = k as u64;
                while kk % prof.p == 0 {
                    kk /= prof.p;
                    v += 1;
                }
                v
            };
            let pow_val = self.zp.val(&power.x).min(self.zp.val(&power.y));
            if pow_val >= prof.a {
                continue;
            }
            if vk > prof.guard {
                if pow_val >= target + vk {
                    continue; // term invisible below the target anyway
                }
                return Err(Error::InsufficientGuard);
            }
            // divide the term by k = unit * p^vk
            let unit = (k as u64) / prof.p.pow(vk);
            let unit_inv = self.zp.inv(&self.zp.elem(unit as u128))?;
            let mut term = QuadScalar {
                x: self.zp.mul(&power.x, &unit_inv),
                y: self.zp.mul(&power.y, &unit_inv),
            };
            if vk > 0 {
                term.x = self.zp.div_pow_p(&term.x, vk)?;
                term.y = self.zp.div_pow_p(&term.y, vk)?;
            }
            if k % 2 == 0 {
                term = self.neg(&term);
            }
            acc = self.add(&acc, &term);
        }
        // certify only the guarded precision
        acc.x.prec = acc.x.prec.min(target);
        acc.y.prec = acc.y.prec.min(target);
        Ok(acc)
    }
}

impl CoeffRing for QuadRing {
    type Elem = QuadScalar;

    fn zero(&self) -> QuadScalar {
        self.elem(0, 0)
    }
    fn one(&self) -> QuadScalar {
        self.elem(1, 0)
    }
    fn add(&self, a: &QuadScalar, b: &QuadScalar) -> QuadScalar {
        QuadScalar {
            x: self.zp.add(&a.x, &b.x),
            y: self.zp.add(&a.y, &b.y),
        }
    }
    fn neg(&self, a: &QuadScalar) -> QuadScalar {
        QuadScalar {
            x: self.zp.neg(&a.x),
            y: self.zp.neg(&a.y),
        }
    }
    fn mul(&self, a: &QuadScalar, b: &QuadScalar) -> QuadScalar {
        // (x1 + y1 s)(x2 + y2 s) = x1x2 + d y1y2 + (x1y2 + x2y1) s
        let d = self.d_scalar();
        let x = self.zp.add(
            &self.zp.mul(&a.x, &b.x),
            &self.zp.mul(&d, &self.zp.mul(&a.y, &b.y)),
        );
        let y = self.zp.add(&self.zp.mul(&a.x, &b.y), &self.zp.mul(&a.y, &b.x));
        QuadScalar { x, y }
    }
    fn is_zero(&self, a: &QuadScalar) -> bool {
        self.zp.is_zero(&a.x) && self.zp.is_zero(&a.y)
    }
    fn elem_eq(&self, a: &QuadScalar, b: &QuadScalar) -> bool {
        self.zp.eq_at_prec(&a.x, &b.x) && self.zp.eq_at_prec(&a.y, &b.y)
    }
    fn from_i64(&self, n: i64) -> QuadScalar {
        QuadScalar {
            x: self.zp.from_i64(n),
            y: self.zp.elem(0),
        }
    }
}
