//! Theta elements attached to form oracles on the tree: the coset sum
//! over the torus at level n+1 collected into the level-n group ring,
//! the three-term recurrence check, products with the involution,
//! plus/minus extraction by dividing out omega-tilde factors, and
//! lambda-stabilization over the ramified eigenvalue ring.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group_ring::{DivisionOutcome, GroupRing, GroupRingElement, Sign};
use crate::linalg::HowellForm;
use crate::padic::{PadicScalar, PrecisionProfile, ZpRing};
use crate::ramified::{RamifiedRing, RamifiedScalar};
use crate::ring::CoeffRing;
use crate::torus::Torus;
use crate::tree::{Tree, TreeVertex};

/// Vertex-valued form oracle with a_p = 0. All values live in the
/// ramified ring Z_p[pi]/(pi^2 + p), globally rescaled by pi^scale.
#[derive(Debug, Clone)]
pub enum VertexForm {
    /// h(v) = lambda^(scale - busemann(v)) with lambda = lambda_sign * pi.
    Horocyclic { lambda_sign: i8, scale: i64 },
    /// Sphere-constant: c_r = c0 * pi^(scale - r) for even r, 0 for odd r.
    Radial { c0: i64, scale: i64 },
    /// Explicit finite table; queries beyond the radius are refused.
    Table {
        radius: u32,
        values: HashMap<TreeVertex, RamifiedScalar>,
    },
}

impl VertexForm {
    /// Constant form on a ball; a_p = p + 1, so this is the negative
    /// control for every eigen-identity.
    pub fn constant_table(tree: &Tree, radius: u32, value: RamifiedScalar) -> Result<VertexForm> {
        let mut values = HashMap::new();
        for r in 0..=radius {
            for v in tree.sphere(&tree.base_vertex(), r)? {
                values.insert(v, value);
            }
        }
        Ok(VertexForm::Table { radius, values })
    }

    pub fn eval(&self, tree: &Tree, ram: &RamifiedRing, v: &TreeVertex) -> Result<RamifiedScalar> {
        match self {
            VertexForm::Horocyclic { lambda_sign, scale } => {
                let b = tree.busemann(v, tree.budget())?;
                let e = scale - b;
                ram.check_window(e)?;
                let mut val = ram.pi_pow(e);
                if *lambda_sign < 0 && e.rem_euclid(2) == 1 {
                    val = ram.neg(&val);
                }
                Ok(val)
            }
            VertexForm::Radial { c0, scale } => {
                let r = tree.distance(&tree.base_vertex(), v)? as i64;
                if r % 2 == 1 {
                    return Ok(ram.zero());
                }
                let e = scale - r;
                ram.check_window(e)?;
                Ok(ram.mul(&ram.from_i64(*c0), &ram.pi_pow(e)))
            }
            VertexForm::Table { radius, values } => {
                let r = tree.distance(&tree.base_vertex(), v)? as u32;
                if r > *radius {
                    return Err(Error::FormRadiusExceeded(*radius));
                }
                Ok(values.get(v).copied().unwrap_or_else(|| ram.zero()))
            }
        }
    }

    /// a_p = 0 eigen-equation at one vertex: the neighbor sum vanishes.
    pub fn eigen_residual(&self, tree: &Tree, ram: &RamifiedRing, v: &TreeVertex) -> Result<RamifiedScalar> {
        let mut acc = ram.zero();
        for w in tree.neighbors(v)? {
            acc = ram.add(&acc, &self.eval(tree, ram, &w)?);
        }
        Ok(acc)
    }
}

/// Theta element at Galois level n, built from torus level m = n + 1.
#[derive(Debug, Clone)]
pub struct ThetaElement {
    pub level: u32,
    pub torus_level: u32,
    pub elem: GroupRingElement<RamifiedScalar>,
}

/// Fixed parameters for theta computations.
#[derive(Debug, Clone, Copy)]
pub struct ThetaCtx {
    pub profile: PrecisionProfile,
    /// pi-valuation window of the ramified coefficient ring.
    pub window: i64,
}

#[derive(Debug, Clone)]
pub struct RecurrenceReport {
    pub pass: bool,
    pub residual: GroupRingElement<RamifiedScalar>,
}

/// Result of dividing a theta element by its omega-tilde factor.
#[derive(Debug, Clone)]
pub enum PmExtraction {
    Extracted {
        /// The sign-normalized quotient.
        element: GroupRingElement<PadicScalar>,
        /// Divisor's annihilator: the quotient is unique modulo it.
        annihilator: HowellForm,
        sign: i64,
    },
    NoSolution,
}

impl ThetaCtx {
    pub fn new(profile: PrecisionProfile, window: i64) -> Self {
        ThetaCtx { profile, window }
    }

    pub fn tree(&self) -> Tree {
        Tree::new(self.profile)
    }

    pub fn ram(&self) -> RamifiedRing {
        RamifiedRing::new(self.profile, self.window)
    }

    pub fn ring(&self, n: u32) -> GroupRing<RamifiedRing> {
        GroupRing::new(self.ram(), self.profile.p, n)
    }

    /// Sum of h(sigma * v_m) gamma^(-exponent(sigma)) over the torus
    /// cosets at level m = n + 1.
    pub fn bd_theta(&self, h: &VertexForm, n: u32) -> Result<ThetaElement> {
        let m = n + 1;
        let torus = Torus::new(self.profile, m)?;
        let tree = self.tree();
        let ram = self.ram();
        let ring = self.ring(n);
        let vm = tree.ray_vertex(m as i64);
        let mut elem = ring.zero();
        for sigma in torus.cosets() {
            let vertex = tree.act(&torus.embed(&sigma)?, &vm)?;
            let value = h.eval(&tree, &ram, &vertex)?;
            let e = torus.cyclic_exponent(&sigma)? as usize;
            let idx = (ring.len() - e % ring.len()) % ring.len();
            elem.coeffs[idx] = ram.add(&elem.coeffs[idx], &value);
        }
        Ok(ThetaElement {
            level: n,
            torus_level: m,
            elem,
        })
    }

    /// Three-term recurrence with a_p = 0: the projection of the level
    /// n+1 element plus the norm lift of the level n-1 element must
    /// vanish.
    pub fn check_recurrence(&self, h: &VertexForm, n: u32) -> Result<RecurrenceReport> {
        if n < 1 {
            return Err(Error::InvalidParameter("recurrence needs n >= 1".into()));
        }
        let up = self.bd_theta(h, n + 1)?;
        let down = self.bd_theta(h, n - 1)?;
        let ring_up = self.ring(n + 1);
        let ring_down = self.ring(n - 1);
        let ring = self.ring(n);
        let residual = ring.add(
            &ring_up.project(&up.elem)?,
            &ring_down.norm_lift(&down.elem)?,
        )?;
        Ok(RecurrenceReport {
            pass: ring.is_zero(&residual),
            residual,
        })
    }

    /// L * iota(L); the output is iota-invariant.
    pub fn theta_product(&self, t: &ThetaElement) -> Result<GroupRingElement<RamifiedScalar>> {
        let ring = self.ring(t.level);
        ring.mul(&t.elem, &ring.involution(&t.elem))
    }

    /// L_n^lambda = lambda^-(n+1) (L_n - lambda^-1 norm_lift(L_{n-1})),
    /// lambda = lambda_sign * pi.
    pub fn lambda_stabilize(
        &self,
        l_n: &ThetaElement,
        l_prev: &ThetaElement,
        lambda_sign: i8,
    ) -> Result<GroupRingElement<RamifiedScalar>> {
        let n = l_n.level;
        if l_prev.level + 1 != n {
            return Err(Error::LevelMismatch(l_prev.level, n));
        }
        let ram = self.ram();
        let ring = self.ring(n);
        let ring_prev = self.ring(n - 1);
        let lambda_inv = {
            // 1/(s pi) = s pi^-1
            let v = ram.pi_pow(-1);
            if lambda_sign < 0 {
                ram.neg(&v)
            } else {
                v
            }
        };
        ram.check_window(-(n as i64 + 1))?;
        let lambda_pow = {
            let v = ram.pi_pow(-(n as i64 + 1));
            if lambda_sign < 0 && (n as i64 + 1) % 2 == 1 {
                ram.neg(&v)
            } else {
                v
            }
        };
        let lifted = ring_prev.norm_lift(&l_prev.elem)?;
        let bracket = ring.sub(&l_n.elem, &ring.scalar_mul(&lambda_inv, &lifted))?;
        Ok(ring.scalar_mul(&lambda_pow, &bracket))
    }

    /// project(L^lambda_{n+1}) = L^lambda_n for eigenform theta data.
    pub fn check_lambda_compat(&self, h: &VertexForm, n: u32, lambda_sign: i8) -> Result<bool> {
        let l_prev = self.bd_theta(h, n - 1)?;
        let l_n = self.bd_theta(h, n)?;
        let l_next = self.bd_theta(h, n + 1)?;
        let stab_n = self.lambda_stabilize(&l_n, &l_prev, lambda_sign)?;
        let stab_next = self.lambda_stabilize(&l_next, &l_n, lambda_sign)?;
        let ring = self.ring(n);
        Ok(ring.eq(&self.ring(n + 1).project(&stab_next)?, &stab_n))
    }
}

/// Divide out the omega-tilde factor of the opposite parity and apply
/// the sign normalization: even n divides by the odd-part product with
/// sign (-1)^(n/2); odd n divides by the even-part product with sign
/// (-1)^((n+1)/2). Non-divisibility is a value, not an error.
pub fn pm_extract(
    ring: &GroupRing<ZpRing>,
    l: &GroupRingElement<PadicScalar>,
) -> Result<PmExtraction> {
    let n = ring.level;
    let (divisor_sign, sign) = if n % 2 == 0 {
        (Sign::Minus, if (n / 2) % 2 == 0 { 1i64 } else { -1 })
    } else {
        (Sign::Plus, if ((n + 1) / 2) % 2 == 0 { 1 } else { -1 })
    };
    let divisor = ring.omega_tilde(divisor_sign, n)?;
    match ring.solve_multiplication(&divisor, l)? {
        DivisionOutcome::NoSolution => Ok(PmExtraction::NoSolution),
        DivisionOutcome::Solved { quotient, annihilator } => {
            let element = ring.scalar_mul(&ring.coeff.from_i64(sign), &quotient);
            Ok(PmExtraction::Extracted {
                element,
                annihilator,
                sign,
            })
        }
    }
}

/// Finite-level avatar of the plus/minus L-function: L^pm * iota(L^pm).
pub fn pm_l_product(
    ring: &GroupRing<ZpRing>,
    l_pm: &GroupRingElement<PadicScalar>,
) -> Result<GroupRingElement<PadicScalar>> {
    ring.mul(l_pm, &ring.involution(l_pm))
}
