//! Finite-level Iwasawa algebras R[Z/p^n] for a coefficient ring R:
//! cyclic-convolution arithmetic, the involution gamma -> gamma^{-1},
//! cyclotomic norm elements xi_k = Phi_{p^k}(gamma), the omega^{+-}
//! factors, level projections and norm lifts, linear division with
//! annihilator certificates, and character evaluation.

use crate::cyclo::{CycloRing, CycloScalar};
use crate::error::{Error, Result};
use crate::linalg::{howell, left_kernel, solve_left, HowellForm, Modulus};
use crate::padic::ZpRing;
use crate::ring::CoeffRing;

/// Element of R[Z/p^n]: a length-p^n coefficient array indexed by
/// exponents of the fixed generator gamma.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRingElement<E> {
    pub level: u32,
    pub coeffs: Vec<E>,
}

/// Ring object for R[Z/p^n].
#[derive(Debug, Clone, Copy)]
pub struct GroupRing<R: CoeffRing> {
    pub coeff: R,
    pub p: u64,
    pub level: u32,
}

/// omega element with its sign and level tag.
#[derive(Debug, Clone)]
pub struct OmegaElement<E> {
    pub sign: Sign,
    pub n: u32,
    pub elem: GroupRingElement<E>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl<R: CoeffRing> GroupRing<R> {
    pub fn new(coeff: R, p: u64, level: u32) -> Self {
        GroupRing { coeff, p, level }
    }

    pub fn at_level(&self, level: u32) -> Self
    where
        R: Copy,
    {
        GroupRing {
            coeff: self.coeff,
            p: self.p,
            level,
        }
    }

    pub fn len(&self) -> usize {
        (self.p as usize).pow(self.level)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check(&self, a: &GroupRingElement<R::Elem>) -> Result<()> {
        if a.level != self.level || a.coeffs.len() != self.len() {
            return Err(Error::LevelMismatch(a.level, self.level));
        }
        Ok(())
    }

    pub fn zero(&self) -> GroupRingElement<R::Elem> {
        GroupRingElement {
            level: self.level,
            coeffs: vec![self.coeff.zero(); self.len()],
        }
    }

    pub fn one(&self) -> GroupRingElement<R::Elem> {
        self.gamma_pow(0)
    }

    /// gamma^k with the exponent taken mod p^n.
    pub fn gamma_pow(&self, k: i64) -> GroupRingElement<R::Elem> {
        let n = self.len() as i64;
        let idx = ((k % n) + n) % n;
        let mut e = self.zero();
        e.coeffs[idx as usize] = self.coeff.one();
        e
    }

    pub fn from_coeffs(&self, coeffs: Vec<R::Elem>) -> Result<GroupRingElement<R::Elem>> {
        if coeffs.len() != self.len() {
            return Err(Error::LevelMismatch(self.level, self.level));
        }
        Ok(GroupRingElement {
            level: self.level,
            coeffs,
        })
    }

    pub fn add(
        &self,
        a: &GroupRingElement<R::Elem>,
        b: &GroupRingElement<R::Elem>,
    ) -> Result<GroupRingElement<R::Elem>> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupRingElement {
            level: self.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.coeff.add(x, y))
                .collect(),
        })
    }

    pub fn sub(
        &self,
        a: &GroupRingElement<R::Elem>,
        b: &GroupRingElement<R::Elem>,
    ) -> Result<GroupRingElement<R::Elem>> {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &GroupRingElement<R::Elem>) -> GroupRingElement<R::Elem> {
        GroupRingElement {
            level: a.level,
            coeffs: a.coeffs.iter().map(|x| self.coeff.neg(x)).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &R::Elem, a: &GroupRingElement<R::Elem>) -> GroupRingElement<R::Elem> {
        GroupRingElement {
            level: a.level,
            coeffs: a.coeffs.iter().map(|x| self.coeff.mul(c, x)).collect(),
        }
    }

    /// Cyclic convolution in R[t]/(t^{p^n} - 1).
    pub fn mul(
        &self,
        a: &GroupRingElement<R::Elem>,
        b: &GroupRingElement<R::Elem>,
    ) -> Result<GroupRingElement<R::Elem>> {
        self.check(a)?;
        self.check(b)?;
        let n = self.len();
        let mut out = vec![self.coeff.zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.coeff.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let k = (i + j) % n;
                out[k] = self.coeff.add(&out[k], &self.coeff.mul(x, y));
            }
        }
        Ok(GroupRingElement {
            level: self.level,
            coeffs: out,
        })
    }

    pub fn eq(&self, a: &GroupRingElement<R::Elem>, b: &GroupRingElement<R::Elem>) -> bool {
        a.level == b.level
            && a.coeffs
                .iter()
                .zip(&b.coeffs)
                .all(|(x, y)| self.coeff.elem_eq(x, y))
    }

    pub fn is_zero(&self, a: &GroupRingElement<R::Elem>) -> bool {
        a.coeffs.iter().all(|x| self.coeff.is_zero(x))
    }

    /// The involution gamma -> gamma^{-1}: coefficient of gamma^i moves
    /// to gamma^{-i mod p^n}.
    pub fn involution(&self, a: &GroupRingElement<R::Elem>) -> GroupRingElement<R::Elem> {
        let n = a.coeffs.len();
        let mut out = a.coeffs.clone();
        for (i, x) in a.coeffs.iter().enumerate() {
            out[(n - i) % n] = x.clone();
        }
        GroupRingElement {
            level: a.level,
            coeffs: out,
        }
    }

    /// xi_k = Phi_{p^k}(gamma) = sum_{j=0}^{p-1} gamma^{j p^{k-1}},
    /// embedded at the ring's level (1 <= k <= n).
    pub fn xi(&self, k: u32) -> Result<GroupRingElement<R::Elem>> {
        if k < 1 || k > self.level {
            return Err(Error::LevelMismatch(k, self.level));
        }
        let step = (self.p as usize).pow(k - 1);
        let mut e = self.zero();
        for j in 0..self.p as usize {
            let idx = (j * step) % self.len();
            e.coeffs[idx] = self.coeff.add(&e.coeffs[idx], &self.coeff.one());
        }
        Ok(e)
    }

    /// Product of xi_k over 1 <= k <= m of the given parity (the
    /// omega-tilde factors; empty product = 1).
    pub fn omega_tilde(&self, sign: Sign, m: u32) -> Result<GroupRingElement<R::Elem>> {
        let mut acc = self.one();
        for k in 1..=m {
            let even = k % 2 == 0;
            if (sign == Sign::Plus) == even {
                acc = self.mul(&acc, &self.xi(k)?)?;
            }
        }
        Ok(acc)
    }

    /// omega_n^+ = prod_{k even} xi_k; omega_n^- = (gamma - 1) *
    /// prod_{k odd} xi_k; omega_0^+ = 1, omega_0^- = gamma - 1.
    pub fn omega(&self, sign: Sign, m: u32) -> Result<OmegaElement<R::Elem>> {
        let mut elem = self.omega_tilde(sign, m)?;
        if sign == Sign::Minus {
            let gm1 = self.sub(&self.gamma_pow(1), &self.one())?;
            elem = self.mul(&elem, &gm1)?;
        }
        Ok(OmegaElement {
            sign,
            n: m,
            elem,
        })
    }

    /// Natural projection to level n-1: exponents map mod p^{n-1} with
    /// fiber sums.
    pub fn project(&self, a: &GroupRingElement<R::Elem>) -> Result<GroupRingElement<R::Elem>>
    where
        R: Copy,
    {
        self.check(a)?;
        if self.level == 0 {
            return Err(Error::LevelMismatch(0, 0));
        }
        let down = self.at_level(self.level - 1);
        let mut out = down.zero();
        let dn = down.len();
        for (i, x) in a.coeffs.iter().enumerate() {
            let j = i % dn;
            out.coeffs[j] = self.coeff.add(&out.coeffs[j], x);
        }
        Ok(out)
    }

    /// Norm lift to level n+1: exponent-wise lift multiplied by
    /// Phi_{p^{n+1}}(gamma). Independent of the lift choice;
    /// project(norm_lift(A)) = p * A.
    pub fn norm_lift(&self, a: &GroupRingElement<R::Elem>) -> Result<GroupRingElement<R::Elem>>
    where
        R: Copy,
    {
        self.check(a)?;
        let up = self.at_level(self.level + 1);
        let mut lifted = up.zero();
        for (i, x) in a.coeffs.iter().enumerate() {
            lifted.coeffs[i] = x.clone();
        }
        up.mul(&lifted, &up.xi(self.level + 1)?)
    }
}

/// Outcome of dividing by a zero divisor: the quotient plus the
/// annihilator of the divisor (the quotient is unique modulo it), or a
/// certified `NoSolution`.
#[derive(Debug, Clone)]
pub enum DivisionOutcome {
    Solved {
        quotient: GroupRingElement<crate::padic::PadicScalar>,
        annihilator: HowellForm,
    },
    NoSolution,
}

impl GroupRing<ZpRing> {
    pub fn modulus(&self) -> Modulus {
        Modulus {
            p: self.p,
            a: self.coeff.profile.a,
        }
    }

    pub fn to_residues(&self, a: &GroupRingElement<crate::padic::PadicScalar>) -> Vec<u128> {
        a.coeffs.iter().map(|c| c.value % self.coeff.profile.modulus()).collect()
    }

    pub fn from_residues(&self, v: &[u128]) -> GroupRingElement<crate::padic::PadicScalar> {
        GroupRingElement {
            level: self.level,
            coeffs: v.iter().map(|&x| self.coeff.elem(x)).collect(),
        }
    }

    /// Rows of the circulant matrix of `a`: row i = coefficients of
    /// gamma^i * a.
    pub fn circulant(&self, a: &GroupRingElement<crate::padic::PadicScalar>) -> Vec<Vec<u128>> {
        let n = self.len();
        let base = self.to_residues(a);
        (0..n)
            .map(|i| {
                let mut row = vec![0u128; n];
                for (j, &x) in base.iter().enumerate() {
                    row[(i + j) % n] = x;
                }
                row
            })
            .collect()
    }

    /// Solve omega * Q = L exactly, reporting the annihilator ideal of
    /// omega so that Q is unique modulo it.
    pub fn solve_multiplication(
        &self,
        omega: &GroupRingElement<crate::padic::PadicScalar>,
        l: &GroupRingElement<crate::padic::PadicScalar>,
    ) -> Result<DivisionOutcome> {
        self.check(omega)?;
        self.check(l)?;
        let md = self.modulus();
        let n = self.len();
        let rows = self.circulant(omega);
        let target = self.to_residues(l);
        match solve_left(md, &rows, n, &target) {
            None => Ok(DivisionOutcome::NoSolution),
            Some(q) => {
                let ann_rows = left_kernel(md, &rows, n);
                let annihilator = howell(md, &ann_rows, n);
                Ok(DivisionOutcome::Solved {
                    quotient: self.from_residues(&q),
                    annihilator,
                })
            }
        }
    }

    /// Evaluate at the character of conductor p^j (j = 0 is the
    /// augmentation): gamma -> x in Z/p^a [x]/Phi_{p^j}(x).
    pub fn eval_character(
        &self,
        a: &GroupRingElement<crate::padic::PadicScalar>,
        j: u32,
    ) -> Result<CycloScalar> {
        self.check(a)?;
        if j > self.level {
            return Err(Error::LevelMismatch(j, self.level));
        }
        let cy = CycloRing::new(self.coeff.profile, j);
        let mut acc = cy.zero();
        for (i, c) in a.coeffs.iter().enumerate() {
            if self.coeff.is_zero(c) {
                continue;
            }
            let term = cy.mul(&cy.from_zp(*c), &cy.monomial(i));
            acc = cy.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Matrix of eval_character as a Z/p^a-linear map, one row per
    /// gamma power.
    pub fn character_matrix(&self, j: u32) -> Result<Vec<Vec<u128>>> {
        if j > self.level {
            return Err(Error::LevelMismatch(j, self.level));
        }
        let cy = CycloRing::new(self.coeff.profile, j);
        let deg = cy.degree();
        let m = self.coeff.profile.modulus();
        Ok((0..self.len())
            .map(|i| {
                let mono = cy.monomial(i);
                let mut row = vec![0u128; deg];
                for (k, c) in mono.coeffs.iter().enumerate() {
                    row[k] = c.value % m;
                }
                row
            })
            .collect())
    }
}
