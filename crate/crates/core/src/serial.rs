//! JSON interchange records. All residues travel as little-endian
//! base-p digit arrays so artifacts are bit-exact across platforms; no
//! decimal bigints appear anywhere.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{PolyRing, Presentation, WmcCertificate};
use crate::group_ring::{GroupRing, GroupRingElement};
use crate::linalg::{Modulus, TrailStep};
use crate::padic::{PadicScalar, ZpRing};
use crate::ramified::{RamifiedRing, RamifiedScalar};
use crate::theta::VertexForm;
use crate::tree::TreeVertex;

pub fn digits_of(mut v: u128, p: u64, a: u32) -> Vec<u64> {
    (0..a)
        .map(|_| {
            let d = (v % p as u128) as u64;
            v /= p as u128;
            d
        })
        .collect()
}

pub fn residue_from_digits(digits: &[u64], p: u64, a: u32) -> Result<u128> {
    if digits.len() > a as usize {
        return Err(Error::InvalidParameter("digit array longer than precision".into()));
    }
    let mut v: u128 = 0;
    for &d in digits.iter().rev() {
        if d >= p {
            return Err(Error::InvalidParameter("digit out of range".into()));
        }
        v = v * p as u128 + d as u128;
    }
    Ok(v)
}

// ---- scalars -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub kind: String,
    pub p: u64,
    pub a: u32,
    pub digits: Vec<u64>,
    pub prec: u32,
}

pub fn scalar_to_json(ring: &ZpRing, x: &PadicScalar) -> ScalarJson {
    let pr = ring.profile;
    ScalarJson {
        kind: "zp".into(),
        p: pr.p,
        a: pr.a,
        digits: digits_of(x.value, pr.p, pr.a),
        prec: x.prec,
    }
}

pub fn scalar_from_json(ring: &ZpRing, j: &ScalarJson) -> Result<PadicScalar> {
    let pr = ring.profile;
    if j.kind != "zp" || j.p != pr.p || j.a != pr.a {
        return Err(Error::RingMismatch);
    }
    let value = residue_from_digits(&j.digits, pr.p, pr.a)?;
    let mut x = ring.elem(value);
    x.prec = j.prec.min(pr.a);
    Ok(x)
}

/// Scalar in the ramified quadratic extension: (u + v pi) pi^e.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamScalarJson {
    pub kind: String,
    pub p: u64,
    pub a: u32,
    pub u_digits: Vec<u64>,
    pub v_digits: Vec<u64>,
    pub e: i64,
}

pub fn ram_scalar_to_json(ram: &RamifiedRing, x: &RamifiedScalar) -> RamScalarJson {
    let pr = ram.zp.profile;
    RamScalarJson {
        kind: "zp-pi".into(),
        p: pr.p,
        a: pr.a,
        u_digits: digits_of(x.u.value, pr.p, pr.a),
        v_digits: digits_of(x.v.value, pr.p, pr.a),
        e: x.e,
    }
}

pub fn ram_scalar_from_json(ram: &RamifiedRing, j: &RamScalarJson) -> Result<RamifiedScalar> {
    let pr = ram.zp.profile;
    if j.kind != "zp-pi" || j.p != pr.p || j.a != pr.a {
        return Err(Error::RingMismatch);
    }
    ram.check_window(j.e)?;
    Ok(RamifiedScalar {
        u: ram.zp.elem(residue_from_digits(&j.u_digits, pr.p, pr.a)?),
        v: ram.zp.elem(residue_from_digits(&j.v_digits, pr.p, pr.a)?),
        e: j.e,
    })
}

// ---- tree vertices -------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub p: u64,
    pub k: i64,
    pub b: Vec<u64>,
    pub b_den_exp: u32,
}

pub fn vertex_to_json(v: &TreeVertex) -> VertexJson {
    // enough digits to hold num exactly
    let mut digits = Vec::new();
    let mut n = v.num;
    while n > 0 {
        digits.push((n % v.p as u128) as u64);
        n /= v.p as u128;
    }
    VertexJson {
        p: v.p,
        k: v.k,
        b: digits,
        b_den_exp: v.den_exp,
    }
}

pub fn vertex_from_json(j: &VertexJson) -> Result<TreeVertex> {
    let num = residue_from_digits(&j.b, j.p, j.b.len() as u32)?;
    Ok(TreeVertex {
        p: j.p,
        k: j.k,
        num,
        den_exp: j.b_den_exp,
    })
}

// ---- group-ring elements -------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRingJson {
    pub p: u64,
    pub n: u32,
    pub a: u32,
    pub ring: String,
    pub coeffs: Vec<Vec<u64>>,
}

pub fn group_ring_to_json(
    gr: &GroupRing<ZpRing>,
    x: &GroupRingElement<PadicScalar>,
) -> GroupRingJson {
    let pr = gr.coeff.profile;
    GroupRingJson {
        p: gr.p,
        n: x.level,
        a: pr.a,
        ring: "zp".into(),
        coeffs: x
            .coeffs
            .iter()
            .map(|c| digits_of(c.value, pr.p, pr.a))
            .collect(),
    }
}

pub fn group_ring_from_json(
    gr: &GroupRing<ZpRing>,
    j: &GroupRingJson,
) -> Result<GroupRingElement<PadicScalar>> {
    let pr = gr.coeff.profile;
    if j.ring != "zp" || j.p != pr.p || j.a != pr.a || j.n != gr.level {
        return Err(Error::RingMismatch);
    }
    let coeffs = j
        .coeffs
        .iter()
        .map(|d| Ok(gr.coeff.elem(residue_from_digits(d, pr.p, pr.a)?)))
        .collect::<Result<Vec<_>>>()?;
    gr.from_coeffs(coeffs)
}

// ---- vertex-form tables --------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntryJson {
    pub vertex: VertexJson,
    pub value: RamScalarJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFormJson {
    pub p: u64,
    pub radius: u32,
    pub values: Vec<TableEntryJson>,
}

pub fn table_form_to_json(ram: &RamifiedRing, form: &VertexForm) -> Result<TableFormJson> {
    match form {
        VertexForm::Table { radius, values } => {
            // deterministic entry order
            let sorted: BTreeMap<(i64, u128, u32), (&TreeVertex, &RamifiedScalar)> = values
                .iter()
                .map(|(v, s)| ((v.k, v.num, v.den_exp), (v, s)))
                .collect();
            Ok(TableFormJson {
                p: ram.zp.profile.p,
                radius: *radius,
                values: sorted
                    .values()
                    .map(|(v, s)| TableEntryJson {
                        vertex: vertex_to_json(v),
                        value: ram_scalar_to_json(ram, s),
                    })
                    .collect(),
            })
        }
        _ => Err(Error::InvalidParameter("only table forms serialize as tables".into())),
    }
}

pub fn table_form_from_json(ram: &RamifiedRing, j: &TableFormJson) -> Result<VertexForm> {
    if j.p != ram.zp.profile.p {
        return Err(Error::RingMismatch);
    }
    let mut values = std::collections::HashMap::new();
    for entry in &j.values {
        values.insert(
            vertex_from_json(&entry.vertex)?,
            ram_scalar_from_json(ram, &entry.value)?,
        );
    }
    Ok(VertexForm::Table {
        radius: j.radius,
        values,
    })
}

// ---- polynomial rings, presentations, certificates -----------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRingJson {
    pub p: u64,
    pub a: u32,
    pub n: u32,
    pub modulus: Vec<Vec<u64>>,
}

pub fn poly_ring_to_json(r: &PolyRing) -> PolyRingJson {
    PolyRingJson {
        p: r.md.p,
        a: r.md.a,
        n: r.n,
        modulus: r.modulus.iter().map(|&c| digits_of(c, r.md.p, r.md.a)).collect(),
    }
}

pub fn poly_ring_from_json(j: &PolyRingJson) -> Result<PolyRing> {
    let md = Modulus { p: j.p, a: j.a };
    let modulus = j
        .modulus
        .iter()
        .map(|d| residue_from_digits(d, j.p, j.a))
        .collect::<Result<Vec<_>>>()?;
    let full = PolyRing::full(md, j.n);
    if modulus == full.modulus {
        return Ok(full);
    }
    // anything else must be a legal quotient modulus
    full.quotient(&modulus)
}

fn elem_to_digits(r: &PolyRing, e: &[u128]) -> Vec<Vec<u64>> {
    e.iter().map(|&c| digits_of(c, r.md.p, r.md.a)).collect()
}

fn elem_from_digits(r: &PolyRing, d: &[Vec<u64>]) -> Result<Vec<u128>> {
    let v = d
        .iter()
        .map(|c| residue_from_digits(c, r.md.p, r.md.a))
        .collect::<Result<Vec<_>>>()?;
    Ok(r.reduce(&v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub ring: PolyRingJson,
    pub gens: usize,
    pub rows: Vec<Vec<Vec<Vec<u64>>>>,
}

pub fn presentation_to_json(p: &Presentation) -> PresentationJson {
    PresentationJson {
        ring: poly_ring_to_json(&p.ring),
        gens: p.gens,
        rows: p
            .rows
            .iter()
            .map(|row| row.iter().map(|e| elem_to_digits(&p.ring, e)).collect())
            .collect(),
    }
}

pub fn presentation_from_json(j: &PresentationJson) -> Result<Presentation> {
    let ring = poly_ring_from_json(&j.ring)?;
    let rows = j
        .rows
        .iter()
        .map(|row| row.iter().map(|e| elem_from_digits(&ring, e)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    Presentation::new(&ring, j.gens, rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub command: String,
    pub inputs_digest: String,
    pub verdict: String,
    pub precision: u32,
    pub ring: PolyRingJson,
    pub element: Vec<Vec<u64>>,
    pub basis: Vec<Vec<Vec<u64>>>,
    pub residual: Vec<Vec<u64>>,
    pub trail: Vec<TrailStep>,
}

pub fn certificate_to_json(
    command: &str,
    inputs_digest: &str,
    cert: &WmcCertificate,
) -> CertificateJson {
    let r = &cert.ring;
    CertificateJson {
        command: command.into(),
        inputs_digest: inputs_digest.into(),
        verdict: if cert.member { "member".into() } else { "non-member".into() },
        precision: cert.precision,
        ring: poly_ring_to_json(r),
        element: elem_to_digits(r, &cert.element),
        basis: cert.basis.iter().map(|b| elem_to_digits(r, b)).collect(),
        residual: elem_to_digits(r, &cert.residual),
        trail: cert.trail.clone(),
    }
}

pub fn certificate_from_json(j: &CertificateJson) -> Result<WmcCertificate> {
    let ring = poly_ring_from_json(&j.ring)?;
    Ok(WmcCertificate {
        member: j.verdict == "member",
        element: elem_from_digits(&ring, &j.element)?,
        basis: j
            .basis
            .iter()
            .map(|b| elem_from_digits(&ring, b))
            .collect::<Result<Vec<_>>>()?,
        residual: elem_from_digits(&ring, &j.residual)?,
        trail: j.trail.clone(),
        precision: j.precision,
        ring,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitting::{wmc_check, IdealBasis};
    use crate::padic::PrecisionProfile;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn profile() -> PrecisionProfile {
        PrecisionProfile::new(5, 6, 2).unwrap()
    }

    #[test]
    fn digit_arrays_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let v = rng.gen_range(0..5u128.pow(6));
            let d = digits_of(v, 5, 6);
            assert!(d.iter().all(|&x| x < 5));
            assert_eq!(residue_from_digits(&d, 5, 6).unwrap(), v);
        }
        assert!(residue_from_digits(&[5], 5, 6).is_err());
        assert!(residue_from_digits(&[0; 7], 5, 6).is_err());
    }

    #[test]
    fn scalar_round_trip() {
        let ring = ZpRing::new(profile());
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..50 {
            let mut x = ring.elem(rng.gen_range(0..ring.profile.modulus()));
            x.prec = rng.gen_range(1..=6);
            x.value %= ring.profile.pow(x.prec);
            let j = scalar_to_json(&ring, &x);
            let back = scalar_from_json(&ring, &j).unwrap();
            assert_eq!(back, x);
            // byte-identical re-serialization
            let s = serde_json::to_string(&j).unwrap();
            let j2: ScalarJson = serde_json::from_str(&s).unwrap();
            assert_eq!(serde_json::to_string(&j2).unwrap(), s);
        }
    }

    #[test]
    fn vertex_and_table_round_trip() {
        let tree = crate::tree::Tree::new(profile());
        let ram = RamifiedRing::new(profile(), 12);
        let base = tree.base_vertex();
        for r in 0..=2u32 {
            for v in tree.sphere(&base, r).unwrap() {
                let back = vertex_from_json(&vertex_to_json(&v)).unwrap();
                assert_eq!(back, v);
            }
        }
        let form = VertexForm::constant_table(&tree, 2, ram.pi_pow(3)).unwrap();
        let j = table_form_to_json(&ram, &form).unwrap();
        let back = table_form_from_json(&ram, &j).unwrap();
        match (&form, &back) {
            (
                VertexForm::Table { radius: r1, values: v1 },
                VertexForm::Table { radius: r2, values: v2 },
            ) => {
                assert_eq!(r1, r2);
                assert_eq!(v1.len(), v2.len());
                for (k, val) in v1 {
                    assert_eq!(v2.get(k), Some(val));
                }
            }
            _ => panic!("shape changed"),
        }
        // deterministic artifact bytes
        let s1 = serde_json::to_string(&j).unwrap();
        let s2 = serde_json::to_string(&table_form_to_json(&ram, &back).unwrap()).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn group_ring_round_trip() {
        let gr = GroupRing::new(ZpRing::new(profile()), 5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let x = gr
                .from_coeffs(
                    (0..25)
                        .map(|_| gr.coeff.elem(rng.gen_range(0..gr.coeff.profile.modulus())))
                        .collect(),
                )
                .unwrap();
            let j = group_ring_to_json(&gr, &x);
            assert!(gr.eq(&group_ring_from_json(&gr, &j).unwrap(), &x));
        }
        let mut bad = group_ring_to_json(&gr, &gr.one());
        bad.p = 7;
        assert!(group_ring_from_json(&gr, &bad).is_err());
    }

    #[test]
    fn presentation_and_certificate_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let md = Modulus { p: 5, a: 2 };
        let ring = PolyRing::full(md, 1);
        let rows: Vec<Vec<Vec<u128>>> = (0..2)
            .map(|_| {
                (0..2)
                    .map(|_| (0..5).map(|_| rng.gen_range(0..25u128)).collect())
                    .collect()
            })
            .collect();
        let pres = Presentation::new(&ring, 2, rows).unwrap();
        let j = presentation_to_json(&pres);
        assert_eq!(presentation_from_json(&j).unwrap(), pres);
        // quotient-ring presentations carry their modulus
        let quot = pres.reduce_mod(&[24, 1]).unwrap();
        let jq = presentation_to_json(&quot);
        assert_eq!(presentation_from_json(&jq).unwrap(), quot);
        // a bogus modulus is refused on load
        let mut bad = jq.clone();
        bad.ring.modulus = vec![vec![2], vec![1]];
        assert!(presentation_from_json(&bad).is_err());

        let elem: Vec<u128> = (0..5).map(|_| rng.gen_range(0..25)).collect();
        let cert = wmc_check(&ring, &elem, &pres).unwrap();
        let cj = certificate_to_json("fitt member", "digest", &cert);
        let back = certificate_from_json(&cj).unwrap();
        assert_eq!(back, cert);
        assert!(crate::fitting::verify_certificate(&back));
        // ideal basis comparison survives the round trip
        let fitt = crate::fitting::fitting_ideal(&pres).unwrap();
        let rebuilt = IdealBasis::from_generators(&back.ring, &back.basis);
        assert_eq!(rebuilt, fitt);
    }
}
