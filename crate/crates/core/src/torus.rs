//! The nonsplit torus K_p^x / Q_p^x for the unramified quadratic
//! extension K_p = Q_p(sqrt d): canonical coset representatives at
//! finite level, the group law, the embedding into GL2(Q_p), the
//! congruence filtration U_n, and the coordinate on the pro-p quotient
//! cut out by the fixed generator 1 + p sqrt(d).

use crate::error::{Error, Result};
use crate::padic::PrecisionProfile;
use crate::ring::CoeffRing;
use crate::quad::{QuadRing, QuadScalar};
use crate::tree::{Mat2, Tree};

/// Canonical coset representative at level m: either the class of
/// x + sqrt(d) with x mod p^m, or the class of 1 + p t sqrt(d) with
/// t mod p^{m-1}. The identity is `UnitLine(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TorusRep {
    /// (x : 1), the class of x + sqrt(d)
    SqrtLine(u128),
    /// (1 : p t), the class of 1 + p t sqrt(d)
    UnitLine(u128),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusElement {
    pub level: u32,
    pub rep: TorusRep,
}

/// Torus context at a fixed level m >= 1.
#[derive(Debug, Clone, Copy)]
pub struct Torus {
    pub quad: QuadRing,
    pub m: u32,
}

impl Torus {
    pub fn new(profile: PrecisionProfile, m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter("torus level must be >= 1".into()));
        }
        if m > profile.depth_budget() {
            return Err(Error::PrecisionUnderflow);
        }
        Ok(Torus {
            quad: QuadRing::new(profile),
            m,
        })
    }

    fn p(&self) -> u64 {
        self.quad.zp.profile.p
    }

    fn pow(&self, e: u32) -> u128 {
        (self.p() as u128).pow(e)
    }

    pub fn order(&self) -> u128 {
        (self.p() as u128 + 1) * self.pow(self.m - 1)
    }

    pub fn identity(&self) -> TorusElement {
        TorusElement {
            level: self.m,
            rep: TorusRep::UnitLine(0),
        }
    }

    /// All (p+1) p^{m-1} canonical cosets.
    pub fn cosets(&self) -> Vec<TorusElement> {
        let mut out = Vec::with_capacity(self.order() as usize);
        for x in 0..self.pow(self.m) {
            out.push(TorusElement {
                level: self.m,
                rep: TorusRep::SqrtLine(x),
            });
        }
        for t in 0..self.pow(self.m - 1) {
            out.push(TorusElement {
                level: self.m,
                rep: TorusRep::UnitLine(t),
            });
        }
        out
    }

    /// A lift of the coset to (O / p^a)^x.
    pub fn to_quad(&self, s: &TorusElement) -> QuadScalar {
        match s.rep {
            TorusRep::SqrtLine(x) => self.quad.elem(x, 1),
            TorusRep::UnitLine(t) => self.quad.elem(1, self.p() as u128 * t),
        }
    }

    /// Canonical coset of a unit z = x + y sqrt(d): scale by x or y to
    /// land on one of the two representative lines, then truncate.
    pub fn canonicalize(&self, z: &QuadScalar) -> Result<TorusElement> {
        let zp = &self.quad.zp;
        let rep = if zp.is_unit(&z.y) {
            let x = zp.mul(&z.x, &zp.inv(&z.y)?);
            TorusRep::SqrtLine(x.value % self.pow(self.m))
        } else if zp.is_unit(&z.x) {
            // y = p * t with t = (y / p) x^{-1}
            let y_over_p = z.y.value % zp.profile.modulus() / self.p() as u128;
            let t = y_over_p * zp.inv(&z.x)?.value % self.pow(self.m - 1);
            TorusRep::UnitLine(t)
        } else {
            return Err(Error::NonUnitResidue);
        };
        Ok(TorusElement {
            level: self.m,
            rep,
        })
    }

    pub fn group_law(&self, s: &TorusElement, t: &TorusElement) -> Result<TorusElement> {
        if s.level != self.m || t.level != self.m {
            return Err(Error::LevelMismatch(s.level, t.level));
        }
        let prod = self.quad.mul(&self.to_quad(s), &self.to_quad(t));
        self.canonicalize(&prod)
    }

    pub fn inverse(&self, s: &TorusElement) -> Result<TorusElement> {
        self.canonicalize(&self.quad.inv(&self.to_quad(s))?)
    }

    /// Regular representation on the basis {1, sqrt(d)}:
    /// x + y sqrt(d) -> [[x, y d], [y, x]].
    pub fn embed(&self, s: &TorusElement) -> Result<Mat2> {
        let tree = self.tree();
        let z = self.to_quad(s);
        let d = self.quad.zp.elem(self.quad.d as u128);
        Ok([
            [
                tree.q_from_zp(z.x)?,
                tree.q_from_zp(self.quad.zp.mul(&z.y, &d))?,
            ],
            [tree.q_from_zp(z.y)?, tree.q_from_zp(z.x)?],
        ])
    }

    pub fn tree(&self) -> Tree {
        Tree::new(self.quad.zp.profile)
    }

    /// Largest n <= m with the class in U_n: the p-valuation of the
    /// sqrt(d)-coordinate of the normalized representative.
    pub fn filtration_level(&self, s: &TorusElement) -> Result<u32> {
        if s.level != self.m {
            return Err(Error::LevelMismatch(s.level, self.m));
        }
        Ok(match s.rep {
            TorusRep::SqrtLine(_) => 0,
            TorusRep::UnitLine(0) => self.m,
            TorusRep::UnitLine(t) => {
                let p = self.p() as u128;
                let mut v = 1u32;
                let mut t = t;
                while t % p == 0 {
                    t /= p;
                    v += 1;
                }
                v.min(self.m)
            }
        })
    }

    /// Coordinate of the pro-p component in base g = 1 + p sqrt(d),
    /// as a residue mod p^{m-1}: kill the torsion part by raising to
    /// (p+1) (p+1)^{-1} mod p^{m-1}, normalize into 1 + pO, and divide
    /// sqrt(d)-coordinates of logarithms.
    pub fn cyclic_exponent(&self, s: &TorusElement) -> Result<u128> {
        if s.level != self.m {
            return Err(Error::LevelMismatch(s.level, self.m));
        }
        if self.m == 1 {
            return Ok(0);
        }
        let zp = &self.quad.zp;
        let pm1 = self.pow(self.m - 1);
        let inv_pp1 = {
            // (p+1)^{-1} mod p^{m-1} by lifting the mod-p inverse
            let mut x: u128 = 1;
            loop {
                let nx = x * (2 + pm1 - (self.p() as u128 + 1) * x % pm1) % pm1;
                if nx == x {
                    break x;
                }
                x = nx;
            }
        };
        let n = (self.p() as u128 + 1) * inv_pp1;
        let proj = |e: &TorusElement| -> Result<QuadScalar> {
            let w = self.quad.pow_u(&self.to_quad(e), n);
            // scale to x-coordinate 1; the result lies in 1 + pO
            let xinv = zp.inv(&w.x)?;
            Ok(self.quad.elem(1, zp.mul(&w.y, &xinv).value))
        };
        let lt = self.quad.log1(&proj(s)?)?;
        let lg = self.quad.log1(&self.quad.elem(1, self.p() as u128))?;
        // both sqrt(d)-coordinates are divisible by p; the generator's
        // is p * unit
        let num = lt.y.value % zp.profile.modulus() / self.p() as u128;
        let den = lg.y.value % zp.profile.modulus() / self.p() as u128;
        let den_inv = zp.inv(&zp.elem(den))?;
        Ok(num * den_inv.value % pm1)
    }
}
