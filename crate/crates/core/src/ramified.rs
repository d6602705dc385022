//! The ramified quadratic extension Z_p[pi]/(pi^2 + p).
//!
//! Elements are pi^e (u + v pi) with an explicit integer valuation
//! offset e, so eigenvalue data lambda = +-pi with lambda^2 = -p and
//! its negative powers stay exact. No floating representation anywhere.

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, PrecisionProfile, ZpRing};
use crate::ring::CoeffRing;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedScalar {
    pub u: PadicScalar,
    pub v: PadicScalar,
    pub e: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamifiedRing {
    pub zp: ZpRing,
    /// Bound on |e|; operations that would push the offset outside
    /// refuse instead of wrapping.
    pub window: i64,
}

impl RamifiedRing {
    pub fn new(profile: PrecisionProfile, window: i64) -> Self {
        RamifiedRing {
            zp: ZpRing::new(profile),
            window,
        }
    }

    pub fn check_window(&self, e: i64) -> Result<()> {
        if e.abs() > self.window {
            return Err(Error::ValuationWindowExceeded);
        }
        Ok(())
    }

    /// pi^e.
    pub fn pi_pow(&self, e: i64) -> RamifiedScalar {
        RamifiedScalar {
            u: self.zp.elem(1),
            v: self.zp.elem(0),
            e,
        }
    }

    pub fn from_zp(&self, x: PadicScalar) -> RamifiedScalar {
        RamifiedScalar {
            u: x,
            v: self.zp.elem(0),
            e: 0,
        }
    }

    /// Multiply the unit part (u + v pi) by pi once: (u + v pi) pi =
    /// -p v + u pi.
    fn unit_mul_pi(&self, u: &PadicScalar, v: &PadicScalar) -> (PadicScalar, PadicScalar) {
        let p = self.zp.elem(self.zp.profile.p as u128);
        (self.zp.neg(&self.zp.mul(&p, v)), *u)
    }

    /// Rewrite with offset `new_e <= a.e` (exact; pushes pi powers into
    /// the unit part).
    fn align(&self, a: &RamifiedScalar, new_e: i64) -> RamifiedScalar {
        debug_assert!(new_e <= a.e);
        let mut u = a.u;
        let mut v = a.v;
        for _ in 0..(a.e - new_e) {
            (u, v) = self.unit_mul_pi(&u, &v);
        }
        RamifiedScalar { u, v, e: new_e }
    }

    /// Divide by pi^k, shifting the offset.
    pub fn shift(&self, a: &RamifiedScalar, k: i64) -> Result<RamifiedScalar> {
        let e = a.e + k;
        self.check_window(e)?;
        Ok(RamifiedScalar { u: a.u, v: a.v, e })
    }
}

impl CoeffRing for RamifiedRing {
    type Elem = RamifiedScalar;

    fn zero(&self) -> RamifiedScalar {
        RamifiedScalar {
            u: self.zp.elem(0),
            v: self.zp.elem(0),
            e: 0,
        }
    }
    fn one(&self) -> RamifiedScalar {
        self.pi_pow(0)
    }
    fn add(&self, a: &RamifiedScalar, b: &RamifiedScalar) -> RamifiedScalar {
        let e = a.e.min(b.e);
        let a = self.align(a, e);
        let b = self.align(b, e);
        RamifiedScalar {
            u: self.zp.add(&a.u, &b.u),
            v: self.zp.add(&a.v, &b.v),
            e,
        }
    }
    fn neg(&self, a: &RamifiedScalar) -> RamifiedScalar {
        RamifiedScalar {
            u: self.zp.neg(&a.u),
            v: self.zp.neg(&a.v),
            e: a.e,
        }
    }
    fn mul(&self, a: &RamifiedScalar, b: &RamifiedScalar) -> RamifiedScalar {
        // (u1 + v1 pi)(u2 + v2 pi) = u1u2 - p v1v2 + (u1v2 + v1u2) pi
        let p = self.zp.elem(self.zp.profile.p as u128);
        let u = self.zp.sub(
            &self.zp.mul(&a.u, &b.u),
            &self.zp.mul(&p, &self.zp.mul(&a.v, &b.v)),
        );
        let v = self.zp.add(&self.zp.mul(&a.u, &b.v), &self.zp.mul(&a.v, &b.u));
        RamifiedScalar { u, v, e: a.e + b.e }
    }
    fn is_zero(&self, a: &RamifiedScalar) -> bool {
        self.zp.is_zero(&a.u) && self.zp.is_zero(&a.v)
    }
    fn elem_eq(&self, a: &RamifiedScalar, b: &RamifiedScalar) -> bool {
        let e = a.e.min(b.e);
        let a = self.align(a, e);
        let b = self.align(b, e);
        self.zp.eq_at_prec(&a.u, &b.u) && self.zp.eq_at_prec(&a.v, &b.v)
    }
    fn from_i64(&self, n: i64) -> RamifiedScalar {
        RamifiedScalar {
            u: self.zp.from_i64(n),
            v: self.zp.elem(0),
            e: 0,
        }
    }
}
