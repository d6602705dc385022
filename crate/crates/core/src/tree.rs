//! The (p+1)-regular Bruhat-Tits tree of PGL2(Qp). Vertices are
//! homothety classes of rank-2 Zp-lattices in the canonical shape
//! [[p^k, b], [0, 1]] with k in Z and b = num / p^den_exp reduced mod
//! p^k Zp. Matrix entries carry explicit valuations so canonical forms
//! are certified, never guessed.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, PrecisionProfile, ZpRing};

/// Element of Qp at working precision: zero, or p^e * u with the unit
/// u certified mod p^prec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PadicQ {
    Zero,
    Val { e: i64, u: u128, prec: u32 },
}

/// 2x2 matrix over Qp, row-major.
pub type Mat2 = [[PadicQ; 2]; 2];

/// Canonical vertex: the homothety class of the lattice with basis
/// matrix [[p^k, b], [0, 1]], b = num / p^den_exp. Invariants:
/// den_exp = 0 implies 0 <= num < p^max(k,0); den_exp > 0 implies num
/// is a unit with num < p^(k + den_exp).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeVertex {
    pub p: u64,
    pub k: i64,
    pub num: u128,
    pub den_exp: u32,
}

/// Ordered adjacent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeEdge {
    pub source: TreeVertex,
    pub target: TreeVertex,
}

/// Tree context: fixes p and the certified-digit budget.
#[derive(Debug, Clone, Copy)]
pub struct Tree {
    pub profile: PrecisionProfile,
}

impl Tree {
    pub fn new(profile: PrecisionProfile) -> Self {
        Tree { profile }
    }

    pub fn p(&self) -> u64 {
        self.profile.p
    }

    /// Maximum certifiable tree depth from the base vertex.
    pub fn budget(&self) -> i64 {
        self.profile.depth_budget() as i64
    }

    pub fn base_vertex(&self) -> TreeVertex {
        TreeVertex {
            p: self.p(),
            k: 0,
            num: 0,
            den_exp: 0,
        }
    }

    /// Vertex (k = t, b = 0) on the fixed reference ray.
    pub fn ray_vertex(&self, t: i64) -> TreeVertex {
        TreeVertex {
            p: self.p(),
            k: t,
            num: 0,
            den_exp: 0,
        }
    }

    fn pow(&self, e: u32) -> u128 {
        (self.p() as u128).pow(e)
    }

    // ---- scalar layer ----------------------------------------------------

    pub fn q_zero(&self) -> PadicQ {
        PadicQ::Zero
    }

    pub fn q_from_i64(&self, x: i64) -> PadicQ {
        if x == 0 {
            return PadicQ::Zero;
        }
        let m = self.profile.modulus();
        let r = (((x as i128 % m as i128) + m as i128) % m as i128) as u128;
        self.q_strip(0, r, self.profile.a)
            .expect("nonzero i64 reduces to a certified value")
    }

    pub fn q_from_zp(&self, x: PadicScalar) -> Result<PadicQ> {
        if x.value % self.profile.modulus() == 0 {
            // indistinguishable from zero at any certifiable depth
            return Ok(PadicQ::Zero);
        }
        self.q_strip(0, x.value, x.prec.min(self.profile.a))
    }

    /// p^e exactly.
    pub fn q_pi_pow(&self, e: i64) -> PadicQ {
        PadicQ::Val {
            e,
            u: 1,
            prec: self.profile.a,
        }
    }

    /// Normalize (e, u mod p^prec) by stripping the p-part of u. A unit
    /// part that vanishes to full certified precision collapses to Zero
    /// when the residual valuation would exceed the depth budget, and is
    /// a precision error otherwise.
    fn q_strip(&self, e: i64, u: u128, prec: u32) -> Result<PadicQ> {
        let p = self.p() as u128;
        let modulus = p.pow(prec);
        let mut r = u % modulus;
        if r == 0 {
            if e + prec as i64 > self.budget() {
                return Ok(PadicQ::Zero);
            }
            return Err(Error::PrecisionUnderflow);
        }
        let mut s = 0u32;
        while r % p == 0 {
            r /= p;
            s += 1;
        }
        Ok(PadicQ::Val {
            e: e + s as i64,
            u: r,
            prec: prec - s,
        })
    }

    pub fn q_val(&self, x: &PadicQ) -> Option<i64> {
        match x {
            PadicQ::Zero => None,
            PadicQ::Val { e, .. } => Some(*e),
        }
    }

    pub fn q_mul(&self, x: &PadicQ, y: &PadicQ) -> PadicQ {
        match (x, y) {
            (PadicQ::Zero, _) | (_, PadicQ::Zero) => PadicQ::Zero,
            (
                PadicQ::Val { e: e1, u: u1, prec: p1 },
                PadicQ::Val { e: e2, u: u2, prec: p2 },
            ) => {
                let prec = (*p1).min(*p2);
                let m = self.pow(prec);
                PadicQ::Val {
                    e: e1 + e2,
                    u: (u1 % m) * (u2 % m) % m,
                    prec,
                }
            }
        }
    }

    pub fn q_neg(&self, x: &PadicQ) -> PadicQ {
        match x {
            PadicQ::Zero => PadicQ::Zero,
            PadicQ::Val { e, u, prec } => PadicQ::Val {
                e: *e,
                u: self.pow(*prec) - u % self.pow(*prec),
                prec: *prec,
            },
        }
    }

    pub fn q_inv(&self, x: &PadicQ) -> Result<PadicQ> {
        match x {
            PadicQ::Zero => Err(Error::NonUnitDivision),
            PadicQ::Val { e, u, prec } => {
                let zp = ZpRing::new(PrecisionProfile::new(self.p(), *prec, 0)?);
                let inv = zp.inv(&zp.elem(*u))?;
                Ok(PadicQ::Val {
                    e: -e,
                    u: inv.value,
                    prec: *prec,
                })
            }
        }
    }

    pub fn q_add(&self, x: &PadicQ, y: &PadicQ) -> Result<PadicQ> {
        match (x, y) {
            (PadicQ::Zero, z) | (z, PadicQ::Zero) => Ok(*z),
            (
                PadicQ::Val { e: e1, u: u1, prec: p1 },
                PadicQ::Val { e: e2, u: u2, prec: p2 },
            ) => {
                let (e1, u1, p1, e2, u2, p2) = if e1 <= e2 {
                    (*e1, *u1, *p1, *e2, *u2, *p2)
                } else {
                    (*e2, *u2, *p2, *e1, *u1, *p1)
                };
                let shift = (e2 - e1) as u32;
                // digits of the shifted addend beyond its certified
                // window are unknown; cap at the working precision
                let prec = p1.min(shift + p2).min(self.profile.a);
                let m = self.pow(prec);
                let shifted = if shift >= prec {
                    0
                } else {
                    (u2 % self.pow(prec - shift)) * self.pow(shift)
                };
                self.q_strip(e1, (u1 % m + shifted) % m, prec)
            }
        }
    }

    pub fn q_sub(&self, x: &PadicQ, y: &PadicQ) -> Result<PadicQ> {
        self.q_add(x, &self.q_neg(y))
    }

    pub fn mat_mul(&self, a: &Mat2, b: &Mat2) -> Result<Mat2> {
        let mut out = [[PadicQ::Zero; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let s = self.q_mul(&a[i][0], &b[0][j]);
                let t = self.q_mul(&a[i][1], &b[1][j]);
                out[i][j] = self.q_add(&s, &t)?;
            }
        }
        Ok(out)
    }

    pub fn mat_from_i64(&self, m: [[i64; 2]; 2]) -> Mat2 {
        [
            [self.q_from_i64(m[0][0]), self.q_from_i64(m[0][1])],
            [self.q_from_i64(m[1][0]), self.q_from_i64(m[1][1])],
        ]
    }

    // ---- vertices --------------------------------------------------------

    /// b = num / p^den_exp as an exact scalar.
    fn vertex_b(&self, v: &TreeVertex) -> PadicQ {
        if v.num == 0 {
            return PadicQ::Zero;
        }
        self.q_strip(-(v.den_exp as i64), v.num, self.profile.a)
            .expect("canonical numerator is nonzero")
    }

    pub fn vertex_matrix(&self, v: &TreeVertex) -> Mat2 {
        [
            [self.q_pi_pow(v.k), self.vertex_b(v)],
            [PadicQ::Zero, self.q_pi_pow(0)],
        ]
    }

    /// Distance to the base vertex, straight from the canonical form.
    pub fn depth(&self, v: &TreeVertex) -> i64 {
        if v.num == 0 {
            v.k.abs()
        } else {
            // v(b) = v_p(num) - den_exp < k, so min(k, v(b), 0) is
            // -den_exp when den_exp > 0 and 0 otherwise
            v.k + 2 * v.den_exp as i64
        }
    }

    fn check_depth(&self, v: &TreeVertex) -> Result<()> {
        if self.depth(v) > self.budget() {
            return Err(Error::PrecisionUnderflow);
        }
        Ok(())
    }

    /// Canonical vertex of the lattice spanned by the columns of M.
    /// Depends only on the class M * GL2(Zp) * Qp^x.
    pub fn canonicalize(&self, m: &Mat2) -> Result<TreeVertex> {
        let (a, b) = (m[0][0], m[0][1]);
        let (c, d) = (m[1][0], m[1][1]);
        // column reduction to [[x, y], [0, z]]
        let (x, y, z) = match (self.q_val(&c), self.q_val(&d)) {
            (None, None) => return Err(Error::InvalidParameter("singular matrix".into())),
            (vc, Some(vd)) if vc.map_or(true, |vc| vd <= vc) => {
                // pivot on d: col1 -= (c/d) col2
                let q = self.q_mul(&c, &self.q_inv(&d)?);
                (self.q_sub(&a, &self.q_mul(&q, &b))?, b, d)
            }
            _ => {
                // pivot on c: col2 -= (d/c) col1, then swap columns
                let q = self.q_mul(&d, &self.q_inv(&c)?);
                (self.q_sub(&b, &self.q_mul(&q, &a))?, a, c)
            }
        };
        let vx = self
            .q_val(&x)
            .ok_or_else(|| Error::InvalidParameter("singular matrix".into()))?;
        let vz = self.q_val(&z).expect("pivot is nonzero");
        let k = vx - vz;
        // b' = y / z, reduced mod p^k Zp
        let bq = self.q_mul(&y, &self.q_inv(&z)?);
        let v = match bq {
            PadicQ::Zero => TreeVertex {
                p: self.p(),
                k,
                num: 0,
                den_exp: 0,
            },
            PadicQ::Val { e, u, prec } => {
                if e >= k {
                    TreeVertex {
                        p: self.p(),
                        k,
                        num: 0,
                        den_exp: 0,
                    }
                } else {
                    // need the unit mod p^(k - e)
                    let digits = (k - e) as u32;
                    if digits > prec {
                        return Err(Error::PrecisionUnderflow);
                    }
                    if e >= 0 {
                        TreeVertex {
                            p: self.p(),
                            k,
                            num: (u % self.pow(digits)) * self.pow(e as u32),
                            den_exp: 0,
                        }
                    } else {
                        TreeVertex {
                            p: self.p(),
                            k,
                            num: u % self.pow(digits),
                            den_exp: (-e) as u32,
                        }
                    }
                }
            }
        };
        self.check_depth(&v)?;
        Ok(v)
    }

    /// The p+1 adjacent vertices.
    pub fn neighbors(&self, v: &TreeVertex) -> Result<Vec<TreeVertex>> {
        let mv = self.vertex_matrix(v);
        let mut out = Vec::with_capacity(self.p() as usize + 1);
        for j in 0..self.p() as i64 {
            let step = self.mat_from_i64([[self.p() as i64, j], [0, 1]]);
            out.push(self.canonicalize(&self.mat_mul(&mv, &step)?)?);
        }
        let down = self.mat_from_i64([[1, 0], [0, self.p() as i64]]);
        out.push(self.canonicalize(&self.mat_mul(&mv, &down)?)?);
        Ok(out)
    }

    /// Tree metric via the elementary-divisor gap of M_v^{-1} M_w.
    pub fn distance(&self, v: &TreeVertex, w: &TreeVertex) -> Result<u64> {
        self.check_depth(v)?;
        self.check_depth(w)?;
        // M_v^{-1} M_w = [[p^(kw - kv), (bw - bv)/p^kv], [0, 1]];
        // the b's are exact rationals, so the difference is exact
        let e = w.k - v.k;
        let p = self.p() as i128;
        let (m1, m2) = (v.den_exp, w.den_exp);
        let diff = w.num as i128 * p.pow(m1) - v.num as i128 * p.pow(m2);
        let vc = if diff == 0 {
            None
        } else {
            let mut t = diff.abs();
            let mut s: i64 = 0;
            while t % p == 0 {
                t /= p;
                s += 1;
            }
            Some(s - (m1 + m2) as i64 - v.k)
        };
        let floor = match vc {
            None => e.min(0),
            Some(vc) => e.min(vc).min(0),
        };
        Ok((e - 2 * floor) as u64)
    }

    /// g acting by basis change on lattice classes.
    pub fn act(&self, g: &Mat2, v: &TreeVertex) -> Result<TreeVertex> {
        let m = self.mat_mul(g, &self.vertex_matrix(v))?;
        self.canonicalize(&m)
    }

    /// All vertices at exact distance r from the center (BFS layers).
    pub fn sphere(&self, center: &TreeVertex, r: u32) -> Result<Vec<TreeVertex>> {
        if self.depth(center) + r as i64 > self.budget() {
            return Err(Error::PrecisionUnderflow);
        }
        let mut layer = vec![*center];
        let mut seen: HashSet<TreeVertex> = layer.iter().copied().collect();
        for _ in 0..r {
            let mut next = Vec::new();
            for v in &layer {
                for w in self.neighbors(v)? {
                    if seen.insert(w) {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        Ok(layer)
    }

    /// Horocycle coordinate d(v, x_T) - T along the reference ray;
    /// stable once T exceeds the distance from the base vertex.
    pub fn busemann(&self, v: &TreeVertex, end_depth: i64) -> Result<i64> {
        let d0 = self.distance(&self.base_vertex(), v)? as i64;
        if end_depth < d0 + 1 {
            return Err(Error::DepthTooSmall {
                needed: d0 + 1,
                got: end_depth,
            });
        }
        let xt = self.ray_vertex(end_depth);
        if self.depth(&xt) > self.budget() {
            return Err(Error::PrecisionUnderflow);
        }
        Ok(self.distance(v, &xt)? as i64 - end_depth)
    }

    /// BFS distances from `center` out to `radius`, for cross-checking
    /// the closed-form metric.
    pub fn bfs_distances(
        &self,
        center: &TreeVertex,
        radius: u32,
    ) -> Result<HashMap<TreeVertex, u64>> {
        let mut dist = HashMap::new();
        dist.insert(*center, 0u64);
        let mut queue = VecDeque::from([*center]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if d == radius as u64 {
                continue;
            }
            for w in self.neighbors(&v)? {
                dist.entry(w).or_insert_with(|| {
                    queue.push_back(w);
                    d + 1
                });
            }
        }
        Ok(dist)
    }
}
