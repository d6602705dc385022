//! Exact linear algebra over Z/p^a: Howell normal form, span
//! membership with reduction trails, left kernels and linear solves.
//!
//! Z/p^a is not a domain, so Hermite/Smith forms are not canonical
//! here; the Howell form is. Rows span submodules of (Z/p^a)^N and two
//! spans are equal exactly when their Howell forms agree row by row.

use serde::{Deserialize, Serialize};

/// The coefficient modulus p^a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modulus {
    pub p: u64,
    pub a: u32,
}

impl Modulus {
    pub fn m(&self) -> u128 {
        (self.p as u128).pow(self.a)
    }

    pub fn pow(&self, k: u32) -> u128 {
        (self.p as u128).pow(k)
    }

    /// Valuation of x mod p^a; `a` for zero.
    pub fn val(&self, x: u128) -> u32 {
        let mut x = x % self.m();
        if x == 0 {
            return self.a;
        }
        let p = self.p as u128;
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    }

    /// Inverse of a unit mod p^a.
    pub fn inv(&self, x: u128) -> u128 {
        let m = self.m() as i128;
        let (mut r0, mut r1) = (m, (x % self.m()) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        assert_eq!(r0, 1, "inverse of a non-unit");
        (((t0 % m) + m) % m) as u128
    }

    pub fn neg(&self, x: u128) -> u128 {
        (self.m() - x % self.m()) % self.m()
    }
}

fn row_scale(md: Modulus, row: &[u128], c: u128) -> Vec<u128> {
    row.iter().map(|&x| (x * c) % md.m()).collect()
}

fn row_sub_scaled(md: Modulus, row: &mut [u128], other: &[u128], q: u128) {
    let m = md.m();
    for (x, &y) in row.iter_mut().zip(other) {
        *x = (*x + m - (y * q) % m) % m;
    }
}

/// Rows in Howell normal form: strictly increasing pivot columns,
/// pivots are powers of p, entries above a pivot reduced modulo it,
/// and the span is saturated under annihilator multiples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HowellForm {
    pub md: Modulus,
    pub ncols: usize,
    pub rows: Vec<Vec<u128>>,
    /// (column, pivot valuation) per row.
    pub pivots: Vec<(usize, u32)>,
}

pub fn howell(md: Modulus, rows: &[Vec<u128>], ncols: usize) -> HowellForm {
    let m = md.m();
    let mut work: Vec<Vec<u128>> = rows
        .iter()
        .map(|r| {
            let mut r: Vec<u128> = r.iter().map(|&x| x % m).collect();
            r.resize(ncols, 0);
            r
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut pivot_rows: Vec<(usize, u32, Vec<u128>)> = Vec::new();

    for c in 0..ncols {
        // all surviving work rows are zero in columns < c
        let best = work
            .iter()
            .enumerate()
            .filter(|(_, r)| r[c] != 0)
            .min_by_key(|(_, r)| md.val(r[c]))
            .map(|(i, _)| i);
        let Some(i) = best else { continue };
        let mut piv = work.swap_remove(i);
        let v = md.val(piv[c]);
        let unit = piv[c] / md.pow(v);
        piv = row_scale(md, &piv, md.inv(unit));
        debug_assert_eq!(piv[c], md.pow(v));
        for r in work.iter_mut() {
            if r[c] != 0 {
                let q = r[c] / md.pow(v);
                row_sub_scaled(md, r, &piv, q);
                debug_assert_eq!(r[c], 0);
            }
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
        if v > 0 {
            let ann = row_scale(md, &piv, md.pow(md.a - v));
            if ann.iter().any(|&x| x != 0) {
                work.push(ann);
            }
        }
        pivot_rows.push((c, v, piv));
    }

    // reduce entries above each pivot modulo the pivot
    for i in 0..pivot_rows.len() {
        let (c, v, piv) = {
            let (c, v, ref piv) = pivot_rows[i];
            (c, v, piv.clone())
        };
        let pv = md.pow(v);
        for (_, _, row) in pivot_rows.iter_mut().take(i) {
            let q = row[c] / pv;
            if q != 0 {
                row_sub_scaled(md, row, &piv, q);
            }
        }
    }

    HowellForm {
        md,
        ncols,
        rows: pivot_rows.iter().map(|(_, _, r)| r.clone()).collect(),
        pivots: pivot_rows.iter().map(|(c, v, _)| (*c, *v)).collect(),
    }
}

/// One step of a reduction trail: subtract `coeff` times row `row`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailStep {
    pub row: usize,
    pub coeff: u128,
}

impl HowellForm {
    /// Reduce `v` against the basis. Returns the residual vector and
    /// the trail of subtractions; membership means a zero residual.
    pub fn reduce(&self, v: &[u128]) -> (Vec<u128>, Vec<TrailStep>) {
        let m = self.md.m();
        let mut v: Vec<u128> = v.iter().map(|&x| x % m).collect();
        v.resize(self.ncols, 0);
        let mut trail = Vec::new();
        for (i, &(c, pv)) in self.pivots.iter().enumerate() {
            let pivot = self.md.pow(pv);
            if v[c] == 0 {
                continue;
            }
            if v[c] % pivot != 0 {
                continue; // cannot clear; residual will be non-zero
            }
            let q = v[c] / pivot;
            row_sub_scaled(self.md, &mut v, &self.rows[i], q);
            trail.push(TrailStep { row: i, coeff: q });
        }
        (v, trail)
    }

    pub fn contains(&self, v: &[u128]) -> bool {
        self.reduce(v).0.iter().all(|&x| x == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Full span: every unit vector is contained.
    pub fn is_full(&self) -> bool {
        (0..self.ncols).all(|c| {
            let mut e = vec![0u128; self.ncols];
            e[c] = 1;
            self.contains(&e)
        })
    }
}

/// Left kernel: generators of { x : sum_i x_i * rows_i = 0 }.
pub fn left_kernel(md: Modulus, rows: &[Vec<u128>], ncols: usize) -> Vec<Vec<u128>> {
    let k = rows.len();
    let aug: Vec<Vec<u128>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<u128> = r.clone();
            row.resize(ncols, 0);
            let mut tail = vec![0u128; k];
            tail[i] = 1;
            row.extend(tail);
            row
        })
        .collect();
    let h = howell(md, &aug, ncols + k);
    h.rows
        .iter()
        .zip(&h.pivots)
        .filter(|(_, &(c, _))| c >= ncols)
        .map(|(r, _)| r[ncols..].to_vec())
        .collect()
}

/// Solve sum_i x_i * rows_i = b; None when inconsistent.
pub fn solve_left(md: Modulus, rows: &[Vec<u128>], ncols: usize, b: &[u128]) -> Option<Vec<u128>> {
    let k = rows.len();
    let aug: Vec<Vec<u128>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<u128> = r.clone();
            row.resize(ncols, 0);
            let mut tail = vec![0u128; k];
            tail[i] = 1;
            row.extend(tail);
            row
        })
        .collect();
    let h = howell(md, &aug, ncols + k);
    let m = md.m();
    let mut v: Vec<u128> = b.iter().map(|&x| x % m).collect();
    v.resize(ncols + k, 0);
    for (i, &(c, pv)) in h.pivots.iter().enumerate() {
        if c >= ncols {
            break;
        }
        let pivot = md.pow(pv);
        if v[c] == 0 {
            continue;
        }
        if v[c] % pivot != 0 {
            return None;
        }
        let q = v[c] / pivot;
        row_sub_scaled(md, &mut v, &h.rows[i], q);
    }
    if v[..ncols].iter().any(|&x| x != 0) {
        return None;
    }
    // b - sum q_i h_i = (0 | tail)  =>  b = (-tail) * original rows
    Some(v[ncols..].iter().map(|&x| md.neg(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustively enumerate the span of `rows` (tiny cases only).
    fn brute_span(md: Modulus, rows: &[Vec<u128>], ncols: usize) -> std::collections::BTreeSet<Vec<u128>> {
        let m = md.m();
        let mut span = std::collections::BTreeSet::new();
        span.insert(vec![0u128; ncols]);
        loop {
            let snapshot: Vec<Vec<u128>> = span.iter().cloned().collect();
            let before = span.len();
            for s in &snapshot {
                for r in rows {
                    for c in 1..m {
                        let mut t = s.clone();
                        for (x, &y) in t.iter_mut().zip(r) {
                            *x = (*x + c * y) % m;
                        }
                        span.insert(t);
                    }
                }
            }
            if span.len() == before {
                return span;
            }
        }
    }

    #[test]
    fn howell_z4_example() {
        // rows {(2,0),(0,2),(2,2)} in (Z/4)^2 -> Howell rows (2,0),(0,2)
        let md = Modulus { p: 2, a: 2 };
        let h = howell(
            md,
            &[vec![2, 0], vec![0, 2], vec![2, 2]],
            2,
        );
        assert_eq!(h.rows, vec![vec![2, 0], vec![0, 2]]);
        let brute = brute_span(md, &[vec![2, 0], vec![0, 2], vec![2, 2]], 2);
        for v in &brute {
            assert!(h.contains(v));
        }
        assert_eq!(brute.len(), 4);
    }

    #[test]
    fn howell_trivial_cases() {
        let md = Modulus { p: 2, a: 2 };
        assert!(howell(md, &[vec![0, 0]], 2).is_zero());
        let id = howell(md, &[vec![1, 0], vec![0, 1]], 2);
        assert_eq!(id.rows, vec![vec![1, 0], vec![0, 1]]);
        assert!(id.is_full());
    }

    #[test]
    fn howell_annihilator_saturation() {
        // span of (2,1) in (Z/4)^2 contains 2*(2,1) = (0,2): Howell must
        // expose the pivot in column 1
        let md = Modulus { p: 2, a: 2 };
        let h = howell(md, &[vec![2, 1]], 2);
        assert!(h.contains(&[0, 2]));
        let brute = brute_span(md, &[vec![2, 1]], 2);
        for v in &brute {
            assert!(h.contains(v));
        }
        // and nothing more
        let mut count = 0;
        for x in 0..4u128 {
            for y in 0..4u128 {
                if h.contains(&[x, y]) {
                    count += 1;
                    assert!(brute.contains(&vec![x, y]));
                }
            }
        }
        assert_eq!(count, brute.len());
    }

    #[test]
    fn howell_canonical_on_random_spans() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let md = Modulus { p: 3, a: 2 };
        for _ in 0..200 {
            let nrows = rng.gen_range(1..4);
            let ncols = 3;
            let rows: Vec<Vec<u128>> = (0..nrows)
                .map(|_| (0..ncols).map(|_| rng.gen_range(0..9u128)).collect())
                .collect();
            let h1 = howell(md, &rows, ncols);
            // shuffle + random row ops preserve the span
            let mut rows2 = rows.clone();
            if rows2.len() > 1 {
                let q = rng.gen_range(0..9u128);
                let src = rows2[0].clone();
                for (x, &y) in rows2[1].iter_mut().zip(&src) {
                    *x = (*x + q * y) % 9;
                }
                rows2.reverse();
            }
            rows2.push(h1.rows.first().cloned().unwrap_or(vec![0; ncols]));
            let h2 = howell(md, &rows2, ncols);
            assert_eq!(h1.rows, h2.rows, "span-equal inputs must share Howell form");
        }
    }

    #[test]
    fn membership_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let md = Modulus { p: 2, a: 2 };
        for _ in 0..50 {
            let rows: Vec<Vec<u128>> = (0..2)
                .map(|_| (0..3).map(|_| rng.gen_range(0..4u128)).collect())
                .collect();
            let h = howell(md, &rows, 3);
            let brute = brute_span(md, &rows, 3);
            for x in 0..4u128 {
                for y in 0..4u128 {
                    for z in 0..4u128 {
                        assert_eq!(
                            h.contains(&[x, y, z]),
                            brute.contains(&vec![x, y, z])
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_and_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let md = Modulus { p: 5, a: 2 };
        for _ in 0..50 {
            let rows: Vec<Vec<u128>> = (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(0..25u128)).collect())
                .collect();
            // kernel rows really annihilate
            for kv in left_kernel(md, &rows, 3) {
                let mut acc = vec![0u128; 3];
                for (x, r) in kv.iter().zip(&rows) {
                    for (a, &b) in acc.iter_mut().zip(r) {
                        *a = (*a + x * b) % 25;
                    }
                }
                assert_eq!(acc, vec![0, 0, 0]);
            }
            // construct-then-solve round trip
            let x: Vec<u128> = (0..3).map(|_| rng.gen_range(0..25u128)).collect();
            let mut b = vec![0u128; 3];
            for (xi, r) in x.iter().zip(&rows) {
                for (a, &v) in b.iter_mut().zip(r) {
                    *a = (*a + xi * v) % 25;
                }
            }
            let sol = solve_left(md, &rows, 3, &b).expect("constructed system is solvable");
            let mut chk = vec![0u128; 3];
            for (xi, r) in sol.iter().zip(&rows) {
                for (a, &v) in chk.iter_mut().zip(r) {
                    *a = (*a + xi * v) % 25;
                }
            }
            assert_eq!(chk, b);
        }
    }
}
