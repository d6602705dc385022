//! End-to-end acceptance gate. One criterion per test, each printing a
//! single pass/fail line; every check is exact (tolerance zero).

use std::collections::HashSet;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bdtheta_core::cyclo::CycloRing;
use bdtheta_core::fitting::{
    augmentation_order, fitting_ideal, IdealBasis, PolyRing, Presentation,
};
use bdtheta_core::group_ring::{GroupRing, Sign};
use bdtheta_core::linalg::Modulus;
use bdtheta_core::ring::CoeffRing;
use bdtheta_core::theta::{ThetaCtx, VertexForm};
use bdtheta_core::torus::Torus;
use bdtheta_core::tree::Tree;
use bdtheta_core::{PrecisionProfile, ZpRing};

fn report(id: u32, name: &str, ok: bool) {
    println!(
        "[acceptance] criterion {id} ({name}): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({name}) failed");
}

fn profile(p: u64, a: u32, guard: u32) -> PrecisionProfile {
    PrecisionProfile::new(p, a, guard).unwrap()
}

fn zp_group_ring(p: u64, a: u32, n: u32) -> GroupRing<ZpRing> {
    GroupRing::new(ZpRing::new(profile(p, a, 1)), p, n)
}

fn poly_ring(p: u64, a: u32, n: u32) -> PolyRing {
    PolyRing::full(Modulus { p, a }, n)
}

#[test]
fn criterion_01_sphere_counts_and_orbit_bijection() {
    let mut ok = true;
    for p in [5u64, 7] {
        let tree = Tree::new(profile(p, 8, 1));
        for r in 1..=3u32 {
            let got = tree.sphere(&tree.base_vertex(), r).unwrap().len() as u64;
            ok &= got == (p + 1) * p.pow(r - 1);
        }
    }
    for m in 1..=3u32 {
        let torus = Torus::new(profile(5, 8, 1), m).unwrap();
        let tree = torus.tree();
        let vm = tree.ray_vertex(m as i64);
        let orbit: HashSet<_> = torus
            .cosets()
            .iter()
            .map(|s| tree.act(&torus.embed(s).unwrap(), &vm).unwrap())
            .collect();
        let sphere: HashSet<_> = tree
            .sphere(&tree.base_vertex(), m)
            .unwrap()
            .into_iter()
            .collect();
        ok &= orbit.len() as u128 == torus.order();
        ok &= orbit == sphere;
    }
    report(1, "sphere counts and orbit bijection", ok);
}

#[test]
fn criterion_02_stabilizer_equals_filtration() {
    let mut ok = true;
    for m in 1..=2u32 {
        let torus = Torus::new(profile(5, 8, 1), m).unwrap();
        let tree = torus.tree();
        for s in torus.cosets() {
            let lvl = torus.filtration_level(&s).unwrap() as i64;
            let g = torus.embed(&s).unwrap();
            for n in 0..=m as i64 {
                let vn = tree.ray_vertex(n);
                let fixed = tree.act(&g, &vn).unwrap() == vn;
                ok &= fixed == (lvl >= n);
            }
        }
    }
    report(2, "vertex stabilizer matches filtration level", ok);
}

#[test]
fn criterion_03_projection_recurrence() {
    let ctx = ThetaCtx::new(profile(5, 8, 2), 24);
    let mut ok = true;
    let horo = VertexForm::Horocyclic { lambda_sign: 1, scale: 0 };
    let radial = VertexForm::Radial { c0: 1, scale: 0 };
    for n in 1..=2u32 {
        ok &= ctx.check_recurrence(&horo, n).unwrap().pass;
        ok &= ctx.check_recurrence(&radial, n).unwrap().pass;
    }
    // negative control: the constant form is not in the a_p = 0
    // eigenspace and must fail
    let constant = VertexForm::constant_table(&ctx.tree(), 4, ctx.ram().one()).unwrap();
    ok &= !ctx.check_recurrence(&constant, 1).unwrap().pass;
    report(3, "theta projection recurrence", ok);
}

#[test]
fn criterion_04_cyclotomic_factorization() {
    let mut ok = true;
    for p in [5u64, 7] {
        for n in 1..=3u32 {
            // compute in the level-(n+1) ring where gamma^{p^n} != 1,
            // so the identity is one of exact coefficient arrays
            let gr = zp_group_ring(p, 4, n + 1);
            let plus = gr.omega(Sign::Plus, n).unwrap().elem;
            let minus = gr.omega(Sign::Minus, n).unwrap().elem;
            let lhs = gr.mul(&plus, &minus).unwrap();
            let rhs = gr
                .sub(&gr.gamma_pow(p.pow(n) as i64), &gr.one())
                .unwrap();
            ok &= gr.to_residues(&lhs) == gr.to_residues(&rhs);
        }
        // trivial character sends each norm element to p
        let gr = zp_group_ring(p, 4, 3);
        let cy0 = CycloRing::new(gr.coeff.profile, 0);
        for k in 1..=3u32 {
            let v = gr.eval_character(&gr.xi(k).unwrap(), 0).unwrap();
            ok &= cy0.elem_eq(&v, &cy0.from_i64(p as i64));
        }
    }
    report(4, "omega factorization of gamma^(p^n) - 1", ok);
}

#[test]
fn criterion_05_lambda_stabilization_compatibility() {
    let ctx = ThetaCtx::new(profile(5, 8, 2), 24);
    let mut ok = true;
    for sign in [1i8, -1] {
        let h = VertexForm::Horocyclic { lambda_sign: sign, scale: 0 };
        ok &= ctx.check_lambda_compat(&h, 1, sign).unwrap();
    }
    report(5, "lambda-stabilized tower compatibility", ok);
}

fn all_elems(r: &PolyRing) -> Vec<Vec<u128>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r.dim() {
        let mut next = Vec::new();
        for v in &out {
            for c in 0..r.md.m() {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn brute_ideal(r: &PolyRing, gens: &[Vec<u128>]) -> HashSet<Vec<u128>> {
    let all = all_elems(r);
    let mut set: HashSet<Vec<u128>> = HashSet::new();
    set.insert(r.zero());
    for g in gens {
        let mut next = HashSet::new();
        for e in &all {
            let prod = r.mul(e, g);
            for s in &set {
                next.insert(r.add(s, &prod));
            }
        }
        set = next;
    }
    set
}

#[test]
fn criterion_06_fitting_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut ok = true;
    let mut runs = 0;
    for p in [2u64, 3] {
        let r = poly_ring(p, 1, 1);
        for _ in 0..30 {
            runs += 1;
            let l = rng.gen_range(1..=2usize);
            let k = rng.gen_range(0..=3usize);
            let rows: Vec<Vec<Vec<u128>>> = (0..k)
                .map(|_| {
                    (0..l)
                        .map(|_| (0..r.dim()).map(|_| rng.gen_range(0..r.md.m())).collect())
                        .collect()
                })
                .collect();
            let pres = Presentation::new(&r, l, rows.clone()).unwrap();
            let fitt = fitting_ideal(&pres).unwrap();
            // independent minors for l <= 2
            let mut minors = Vec::new();
            if k >= l {
                if l == 1 {
                    minors.extend(rows.iter().map(|row| row[0].clone()));
                } else {
                    for i in 0..k {
                        for j in i + 1..k {
                            minors.push(r.sub(
                                &r.mul(&rows[i][0], &rows[j][1]),
                                &r.mul(&rows[i][1], &rows[j][0]),
                            ));
                        }
                    }
                }
            }
            let brute = brute_ideal(&r, &minors);
            for e in all_elems(&r) {
                ok &= fitt.contains(&e) == brute.contains(&e);
            }
            // products and sums agree with exhaustive spans too
            let g1: Vec<u128> = (0..r.dim()).map(|_| rng.gen_range(0..r.md.m())).collect();
            let g2: Vec<u128> = (0..r.dim()).map(|_| rng.gen_range(0..r.md.m())).collect();
            let i1 = IdealBasis::from_generators(&r, &[g1.clone()]);
            let i2 = IdealBasis::from_generators(&r, &[g2.clone()]);
            let prod = i1.product(&i2).unwrap();
            let brute_prod = brute_ideal(&r, &[r.mul(&g1, &g2)]);
            for e in all_elems(&r) {
                ok &= prod.contains(&e) == brute_prod.contains(&e);
            }
        }
    }
    ok &= runs >= 50;
    report(6, "Fitting calculus vs exhaustive enumeration", ok);
}

#[test]
fn criterion_07_diagonal_omega_square() {
    let mut ok = true;
    for n in [1u32, 2] {
        let r = poly_ring(5, 4, n);
        let gr = zp_group_ring(5, 4, n);
        let om = gr.to_residues(&gr.omega(Sign::Plus, n).unwrap().elem);
        let pres = Presentation::diagonal(&r, &[om.clone(), om.clone()]);
        let fitt = fitting_ideal(&pres).unwrap();
        let expect = IdealBasis::from_generators(&r, &[r.mul(&om, &om)]);
        // canonical Howell bases compare by equality
        ok &= fitt == expect;
    }
    report(7, "Fitt(diag(omega+, omega+)) = ((omega+)^2)", ok);
}

#[test]
fn criterion_08_base_change_commutes() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let r = poly_ring(5, 3, 1);
    let m = r.md.m();
    let gamma_minus_1 = vec![m - 1, 1];
    let phi: Vec<u128> = vec![1, 1, 1, 1, 1];
    let mut ok = true;
    for omega in [gamma_minus_1, phi] {
        for _ in 0..25 {
            let l = rng.gen_range(1..=2usize);
            let k = rng.gen_range(1..=3usize);
            let rows: Vec<Vec<Vec<u128>>> = (0..k)
                .map(|_| {
                    (0..l)
                        .map(|_| (0..r.dim()).map(|_| rng.gen_range(0..m)).collect())
                        .collect()
                })
                .collect();
            let pres = Presentation::new(&r, l, rows).unwrap();
            let lhs = fitting_ideal(&pres.reduce_mod(&omega).unwrap()).unwrap();
            let rhs = fitting_ideal(&pres)
                .unwrap()
                .base_change_quotient(&omega)
                .unwrap();
            ok &= lhs == rhs;
        }
    }
    report(8, "base change commutes with Fitting ideals", ok);
}

#[test]
fn criterion_09_demo_chain_membership() {
    let out = Command::new(env!("CARGO_BIN_EXE_bdtheta"))
        .args(["demo", "chain", "--p", "5", "--n", "1"])
        .output()
        .expect("demo chain should run");
    let mut ok = out.status.success();
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("demo chain emits JSON");
    ok &= v["verdict"] == "member";
    let steps = v["steps"].as_array().expect("steps array");
    let step = |name: &str| {
        steps
            .iter()
            .find(|s| s["step"] == name)
            .unwrap_or_else(|| panic!("missing step {name}"))
            .clone()
    };
    ok &= step("product-identity")["pass"] == true;
    ok &= step("wmc-check")["verdict"] == "member";
    ok &= step("fitting-cross-check")["pass"] == true;
    report(9, "demo chain certifies the membership", ok);
}

#[test]
fn criterion_10_augmentation_order() {
    let gr = zp_group_ring(5, 6, 2);
    let gm1 = gr.sub(&gr.gamma_pow(1), &gr.one()).unwrap();
    let mut ok = true;
    for r in 0..=4u32 {
        let mut x = gr.one();
        for _ in 0..r {
            x = gr.mul(&x, &gm1).unwrap();
        }
        ok &= augmentation_order(&gr, &x, 0, 8).unwrap() == r;
    }
    report(10, "augmentation-ideal vanishing order", ok);
}
