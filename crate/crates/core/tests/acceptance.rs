//! Acceptance suite: one line per criterion with its measured time and limit.
//! Runs as a plain binary (`harness = false`) so the lines always print.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use descent_kit::descent_matrix::{associated_matrix, change_of_basis_check, endo_matrix, invert_descent_matrix, k_linear_bijective};
use descent_kit::input::Problem;
use descent_kit::instances::{random_d, random_family, random_field, random_instance, random_invertible};
use descent_kit::poly::{Monomial, Poly};
use descent_kit::ring::{PresentedRing, RingHom};
use descent_kit::scalar::{Scalar, ScalarField};
use descent_kit::weil::{descend_morphism, weil_descend};
use descent_kit::weil_d::descend_d_structure;

type Check = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn cli(sub: &str, name: &str, extra: &[&str]) -> Result<(i32, Value), String> {
    let path = fixture(name);
    let mut args = vec![sub, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = Command::new(env!("CARGO_BIN_EXE_descent-kit"))
        .args(&args)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("killed")?;
    let v = serde_json::from_slice(&out.stdout).map_err(|e| format!("{sub} {name}: bad report: {e}"))?;
    Ok((code, v))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn images(r: &Value) -> BTreeMap<String, Vec<String>> {
    r["presentation"]["images"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|x| {
                    (
                        x["variable"].as_str().unwrap_or_default().to_string(),
                        serde_json::from_value(x["image"].clone()).unwrap_or_default(),
                    )
                })
                .collect()
        })
        .unwrap_or_default()
}

fn cert_passed(r: &Value, name: &str) -> bool {
    r["certificates"]
        .as_array()
        .is_some_and(|a| a.iter().any(|c| c["name"] == name && c["passed"] == true))
}

fn strings(rows: &[&[&str]]) -> Value {
    serde_json::json!(rows)
}

fn problem(name: &str) -> Problem {
    Problem::parse(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn c1() -> Check {
    let (code, m) = cli("matrix", "projection.json", &[])?;
    ensure(code == 0, format!("matrix exit {code}"))?;
    ensure(m["matrix"]["rows"] == strings(&[&["1", "0"], &["0", "0"]]), format!("M = {}", m["matrix"]["rows"]))?;
    let (code, d) = cli("descend", "projection.json", &[])?;
    ensure(code == 2, format!("descend exit {code}"))?;
    ensure(d["error"]["kind"] == "NonInvertibleMatrix", format!("error {}", d["error"]))?;
    ensure(d["error"]["witness"] == "M = [[1,0],[0,0]]", "witness")?;
    Ok("M = [[1,0],[0,0]]; descend exits 2 with NonInvertibleMatrix".into())
}

fn c2() -> Check {
    let (code, r) = cli("descend", "square_map_f2.json", &[])?;
    ensure(code == 0, format!("descend exit {code}"))?;
    let im = images(&r);
    ensure(im.get("t(1)") == Some(&vec!["t(1)^2".to_string()]), format!("t(1) ↦ {:?}", im.get("t(1)")))?;
    ensure(im.get("t(2)") == Some(&vec!["0".to_string()]), format!("t(2) ↦ {:?}", im.get("t(2)")))?;

    let p = problem("square_map_f2.json");
    let w = weil_descend(&p.tower.c).map_err(|e| e.to_string())?;
    let c = p.tower.c.ring();
    let rho = RingHom::new(vec![c.var(0), c.parse("t^2", "rho").unwrap()]);
    let wr = descend_morphism(&rho, &w, &w).map_err(|e| e.to_string())?;
    let res = descend_d_structure(&p.tower).map_err(|e| e.to_string())?;
    let sigma = res.structure.associated_endomorphism(0);
    ensure(sigma.equal_on(&wr, w.ring()), "g^W differs from W(ρ)")?;
    ensure(w.ring().render(&wr.images[0]) == "t(1)^2" && wr.images[1].is_zero(), "W(ρ) values")?;
    Ok("g^W(t(1)) = t(1)^2, g^W(t(2)) = 0, equal to W(ρ)".into())
}

fn c3() -> Check {
    let (code, r) = cli("matrix", "twisted_polynomial.json", &[])?;
    ensure(code == 0, format!("matrix exit {code}"))?;
    let e = &r["associated_endomorphisms"][0];
    ensure(e["matrix"] == strings(&[&["1", "0"], &["0", "x"]]), format!("M^σ_b = {}", e["matrix"]))?;
    ensure(e["determinant"] == "x", "det")?;
    ensure(e["determinant_check"]["error"]["kind"] == "NotAUnit", format!("{}", e["determinant_check"]))?;
    ensure(r["matrix"]["invertible"] == "no", "M should not be invertible")?;
    Ok("M^σ_b = [[1,0],[0,x]], det x raises NotAUnit".into())
}

fn c4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20241014);
    let (mut yes, mut no, mut mismatches) = (0, 0, 0);
    let mut fields = BTreeMap::new();
    let n = 60;
    for _ in 0..n {
        let field = random_field(&mut rng);
        let d = random_d(&mut rng, field);
        let family = random_family(&mut rng);
        let inst = random_instance(&mut rng, field, d, family).map_err(|e| e.to_string())?;
        let a = inst.ext.base();
        let m = associated_matrix(&inst.ext, &inst.f).map_err(|e| e.to_string())?;
        let matrix_ok = invert_descent_matrix(&m, a).is_ok();
        let mut endos_ok = true;
        for i in 0..inst.f.d().factors().len() {
            let sigma = inst.f.associated_endomorphism(i);
            let det_unit = endo_matrix(&inst.ext, &sigma).and_then(|em| em.is_invertible(a)).map_err(|e| e.to_string())?;
            // Rank oracle: over A = k, invertible matrix means bijective on the staircase.
            let bij = k_linear_bijective(&inst.ext, &sigma).map_err(|e| e.to_string())?;
            if det_unit != bij {
                mismatches += 1;
            }
            endos_ok &= det_unit;
        }
        if matrix_ok != endos_ok {
            mismatches += 1;
        }
        if matrix_ok {
            yes += 1;
        } else {
            no += 1;
        }
        *fields.entry(field.to_string()).or_insert(0) += 1;
    }
    ensure(mismatches == 0, format!("{mismatches} mismatches"))?;
    ensure(yes > 0 && no > 0, format!("degenerate sample: {yes} invertible, {no} not"))?;
    Ok(format!("{n} instances ({yes} invertible, {no} not; fields {fields:?}), 0 mismatches"))
}

fn c5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 30;
    for k in 0..n {
        let field = random_field(&mut rng);
        let d = random_d(&mut rng, field);
        let family = random_family(&mut rng);
        let inst = random_instance(&mut rng, field, d, family).map_err(|e| e.to_string())?;
        let l = inst.f.d().dim();
        let r = inst.ext.rank();
        let x = random_invertible(&mut rng, field, l);
        let rep = change_of_basis_check(&inst.ext, &inst.f, &x).map_err(|e| e.to_string())?;
        // Independent conjugation: X̃ has block (p, q) equal to x_pq·I_r.
        let y = descent_kit::linalg::inverse_scalar(&x, field).ok_or("X not invertible")?;
        for i in 0..l {
            for j in 0..l {
                let xy = (0..l).fold(field.zero(), |acc, k| &acc + &(&x[i][k] * &y[k][j]));
                ensure(xy == if i == j { field.one() } else { field.zero() }, "X·Y ≠ I")?;
            }
        }
        let n2 = r * l;
        let entry = |m: &descent_kit::linalg::Matrix, i: usize, j: usize| -> Scalar {
            let p = m.get(i, j);
            if p.is_zero() {
                field.zero()
            } else {
                p.constant_value().cloned().expect("A = k")
            }
        };
        let tilde = |z: &[Vec<Scalar>], i: usize, j: usize| -> Scalar {
            if i % r == j % r {
                z[i / r][j / r].clone()
            } else {
                field.zero()
            }
        };
        for i in 0..n2 {
            for j in 0..n2 {
                let mut acc = field.zero();
                for a in 0..n2 {
                    for b in 0..n2 {
                        let t = &(&tilde(&y, i, a) * &entry(&rep.m_eps, a, b)) * &tilde(&x, b, j);
                        acc = &acc + &t;
                    }
                }
                if acc != entry(&rep.m_eta, i, j) {
                    return Err(format!("instance {k}: entry ({i},{j}) differs"));
                }
            }
        }
    }
    Ok(format!("{n} instances with random invertible X, M^η = X̃⁻¹M^εX̃ entrywise"))
}

fn c6() -> Check {
    let (code, r) = cli("adjoint-check", "adjunction_f2.json", &[])?;
    ensure(code == 0, format!("adjoint-check exit {code}"))?;
    let e = &r["enumeration"];
    // Oracle: (a + b·u)² = a² in characteristic 2 with u² = 0, so t(1) has 2 choices and t(2) has 4.
    let square_zero = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).filter(|(a, _)| a * a % 2 == 0).count();
    let expected = square_zero * 4;
    ensure(expected == 8, "oracle")?;
    ensure(e["d_homs"] == serde_json::json!([expected, expected]), format!("D-homs {}", e["d_homs"]))?;
    ensure(e["algebra_homs"] == serde_json::json!([expected, expected]), "algebra homs")?;
    ensure(
        e["forward_into"] == true && e["inverse_into"] == true && e["round_trips"] == true,
        "τ^D audit failed",
    )?;
    ensure(cert_passed(&r, "bijection"), "bijection certificate")?;
    Ok(format!("{expected} = {expected} D-homs, τ^D and its inverse round-trip on all"))
}

/// Polynomials in `t(1), t(2)` with integer coefficients for the hand-built oracle.
type Mini = BTreeMap<(u32, u32), i64>;

fn mini(terms: &[((u32, u32), i64)]) -> Mini {
    terms.iter().copied().filter(|(_, c)| *c != 0).collect()
}

fn axpy(acc: &mut Mini, c: i64, p: &Mini) {
    for (m, v) in p {
        let e = acc.entry(*m).or_insert(0);
        *e += c * v;
        if *e == 0 {
            acc.remove(m);
        }
    }
}

fn to_poly(p: &Mini, field: ScalarField) -> Poly {
    Poly::from_terms(
        p.iter()
            .map(|((a, b), c)| (Monomial::from_pairs([(0, *a), (1, *b)].into_iter().filter(|(_, e)| *e > 0)), field.from_i64(*c))),
    )
}

fn c7() -> Check {
    let (code, r) = cli("descend", "differential.json", &[])?;
    ensure(code == 0, format!("descend exit {code}"))?;
    let im = images(&r);

    // Oracle: M from Σ_k a_jkm λ_n(f_k(b_i)) for D = k[ε]/(ε²), f_0 = id, f_1(y) = y, then M·u = v.
    let (l, rk) = (2usize, 2usize);
    let a = |j: usize, k: usize, m: usize| -> i64 { i64::from(j + k == m) };
    let lam = |k: usize, i: usize, n: usize| -> i64 {
        match k {
            0 => i64::from(i == n),
            _ => i64::from(i == 1 && n == 1),
        }
    };
    let mut m = vec![vec![0i64; l * rk]; l * rk];
    for mm in 0..l {
        for n in 0..rk {
            for j in 0..l {
                for i in 0..rk {
                    m[mm * rk + n][j * rk + i] = (0..l).map(|k| a(j, k, mm) * lam(k, i, n)).sum();
                }
            }
        }
    }
    // W(t) = t(1) + t(2)·y and W(t²) = t(1)² + 2·t(1)t(2)·y.
    let mut v = [mini(&[((1, 0), 1)]),
        mini(&[((0, 1), 1)]),
        mini(&[((2, 0), 1)]),
        mini(&[((1, 1), 2)])];
    let size = l * rk;
    for col in 0..size {
        let piv = (col..size).find(|&row| m[row][col] != 0).ok_or("oracle matrix singular")?;
        m.swap(col, piv);
        v.swap(col, piv);
        let p = m[col][col];
        ensure(p == 1 || p == -1, "oracle pivot is not ±1")?;
        for x in m[col].iter_mut() {
            *x *= p;
        }
        v[col] = v[col].iter().map(|(k, c)| (*k, c * p)).collect();
        for row in 0..size {
            if row != col && m[row][col] != 0 {
                let f = m[row][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[row].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
                let pv = v[col].clone();
                axpy(&mut v[row], -f, &pv);
            }
        }
    }
    let q = ScalarField::Rationals;
    let w = PresentedRing::polynomial(q, vec!["t(1)".into(), "t(2)".into()]).unwrap();
    for i in 0..rk {
        let name = format!("t({})", i + 1);
        let got = im.get(&name).ok_or("missing image")?;
        for j in 0..l {
            let reported = w.parse(&got[j], "report").map_err(|e| e.to_string())?;
            ensure(reported == to_poly(&v[j * rk + i], q), format!("g^W_{j}({name}) = {}", got[j]))?;
        }
    }
    ensure(im["t(1)"][1] == "t(1)^2" && im["t(2)"][1] == "2*t(1)*t(2) - t(2)", "rendered images")?;

    let p = problem("differential.json");
    let res = descend_d_structure(&p.tower).map_err(|e| e.to_string())?;
    let ring = res.structure.carrier().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let random_poly = |rng: &mut ChaCha8Rng| {
        let mut acc = Poly::zero();
        for _ in 0..4 {
            let mono = ring.var(0).pow(rng.gen_range(0..3), q).mul(&ring.var(1).pow(rng.gen_range(0..3), q));
            acc = acc.add(&mono.scale(&q.from_i64(rng.gen_range(-3..=3))));
        }
        acc
    };
    let pairs = 20;
    for k in 0..pairs {
        let (a, b) = (random_poly(&mut rng), random_poly(&mut rng));
        ensure(res.leibniz_holds(1, &a, &b), format!("Leibniz fails on pair {k}"))?;
    }
    Ok(format!("δ^W(t(1)) = t(1)^2, δ^W(t(2)) = 2*t(1)*t(2) - t(2), matches the 4×4 oracle; Leibniz on {pairs} pairs"))
}

fn c8() -> Check {
    let set = [
        "square_map_f2.json",
        "differential.json",
        "adjunction_f2.json",
        "compose_difference.json",
        "compose_commuting.json",
        "jet_1_1.json",
        "jet_2_0.json",
    ];
    let mut checked = 0;
    for name in set {
        let (code, r) = cli("descend", name, &["--audit"])?;
        ensure(code == 0, format!("{name}: exit {code}"))?;
        for cert in ["ideal_is_d_ideal", "unit_is_d_hom", "uniqueness_basis"] {
            ensure(cert_passed(&r, cert), format!("{name}: {cert}"))?;
            checked += 1;
        }
        let audit = r["audit"].as_array().ok_or("no audit")?;
        ensure(audit.iter().all(|c| c["passed"] == true), format!("{name}: audit failed"))?;
        let p = problem(name);
        let res = descend_d_structure(&p.tower).map_err(|e| e.to_string())?;
        ensure(
            res.free_structure.d_ideal_check(res.classical.ideal()).map_err(|e| e.to_string())?,
            format!("{name}: I_C is not a D-ideal"),
        )?;
    }
    Ok(format!("{} fixtures, {checked} certificates and every audit passed", set.len()))
}

fn c9() -> Check {
    let (code, r) = cli("compose-check", "compose_difference.json", &[])?;
    ensure(code == 0, format!("difference pair exit {code}"))?;
    for cert in ["composite_descends", "gamma_descends", "monoid_law", "identity_preserved", "tensor_composite", "tensor_associated_endomorphisms"] {
        ensure(cert_passed(&r, cert), format!("difference pair: {cert}"))?;
    }
    let (code, r) = cli("compose-check", "compose_commuting.json", &[])?;
    ensure(code == 0, format!("commuting pair exit {code}"))?;
    ensure(r["compose"]["commutes_before"] == true, "pair should commute")?;
    for cert in ["composite_descends", "gamma_descends", "commutation_preserved", "tensor_composite", "tensor_associated_endomorphisms"] {
        ensure(cert_passed(&r, cert), format!("commuting pair: {cert}"))?;
    }
    for name in ["jet_1_1.json", "jet_2_0.json"] {
        let (code, r) = cli("compose-check", name, &[])?;
        ensure(code == 0 && cert_passed(&r, "commutation_preserved"), format!("{name}: self-commutation"))?;
    }
    Ok("difference pair, commuting σ/δ pair and jet self-commutation at (1,1), (2,0)".into())
}

fn c10() -> Check {
    let (code, r) = cli("adjoint-check", "projection.json", &[])?;
    ensure(code == 2, format!("exit {code}"))?;
    let ev = r["evidence"].as_array().ok_or("no evidence")?;
    let hit = ev.iter().find(|e| e["z"] == serde_json::json!(["eps"])).ok_or("no z = eps")?;
    ensure(hit["system"] == "[0,1]ᵀ = M·x̄ with M = [[1,0],[0,0]]", format!("system {}", hit["system"]))?;
    ensure(hit["solvable"] == false, "should be unsolvable")?;
    Ok("z = eps: [0,1]ᵀ = M·x̄ with M = [[1,0],[0,0]] is unsolvable".into())
}

fn main() {
    // `cargo test` passes harness flags; a name filter other than ours skips the suite.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("projection counterexample", 1, c1),
        ("characteristic-two example", 1, c2),
        ("twisted polynomial example", 1, c3),
        ("matrix inverse iff endomorphism inverses", 30, c4),
        ("change of basis", 30, c5),
        ("adjunction bijection over F_2", 5, c6),
        ("differential instance", 2, c7),
        ("certificate suite", 60, c8),
        ("composition suite", 10, c9),
        ("obstruction evidence", 1, c10),
    ];
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let (ok, detail) = match result {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} [{:.3}s / {}s] {}: {}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            name,
            detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
