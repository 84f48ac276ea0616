//! Acceptance checks, one line per criterion. Runs as a plain binary so the
//! lines show up in `cargo test` output; exits non-zero if any check fails.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ldcell::rates::integer_alphas;
use ldcell::{
    achievable_sum, classify_regime, construct_imac, dualize, search_best, upper_bound_ktx, upper_bound_sum, verify,
    verify_exhaustive, wcurve_sweep, CellParams, LinearScheme, Model, Rate, RegimeTag, SearchConfig,
};

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn fig2() -> CellParams {
    CellParams::new(8, 7, 9, 7, 2, 4).unwrap()
}

/// Every parameter tuple with the given direct-gain ceiling that passes validation.
fn grid(max_direct: usize) -> Vec<CellParams> {
    let mut out = Vec::new();
    for n1 in 1..=max_direct {
        for n3 in 1..=max_direct {
            for n2 in 0..=n1 {
                for n4 in 0..=n3 {
                    for nm in 0..=n1.max(n3) {
                        for nd in 0..=n1.max(n3) {
                            if let Ok(p) = CellParams::new(n1, n2, n3, n4, nm, nd) {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn very_weak(max_direct: usize) -> Vec<CellParams> {
    grid(max_direct)
        .into_iter()
        .filter(|p| classify_regime(p).tag.is_very_weak())
        .collect()
}

fn criterion_1() -> Check {
    let p = fig2();
    let s = construct_imac(&p).map_err(|e| e.to_string())?;
    let c = verify(&s);
    let ex = verify_exhaustive(&s).map_err(|e| e.to_string())?;
    let bound = upper_bound_sum(&p).map_err(|e| e.to_string())?;
    if c.pass && ex.pass && c.rate == 14 && bound == 14 {
        Ok(format!("rate {} = bound {bound}, both certificates pass", c.rate))
    } else {
        Err(format!("rate {} pass {} exhaustive {} bound {bound}", c.rate, c.pass, ex.pass))
    }
}

fn criterion_2() -> Check {
    let s = construct_imac(&fig2()).map_err(|e| e.to_string())?;
    let d = dualize(&s).map_err(|e| e.to_string())?;
    let c = verify(&d);
    let ex = verify_exhaustive(&d).map_err(|e| e.to_string())?;
    if d.model == Model::Ibc && c.pass && ex.pass && c.rate == 14 {
        Ok(format!("ibc rate {}", c.rate))
    } else {
        Err(format!("ibc rate {} pass {} exhaustive {}", c.rate, c.pass, ex.pass))
    }
}

fn criterion_3() -> Check {
    let ps = very_weak(12);
    let bad: Vec<_> = ps
        .par_iter()
        .filter(|p| {
            let imac = upper_bound_sum(p).unwrap();
            let ibc = upper_bound_sum(&p.to_record(Model::Ibc).params().unwrap()).unwrap();
            imac != ibc || upper_bound_ktx(p, 2).unwrap() != imac
        })
        .collect();
    match bad.first() {
        None => Ok(format!("{} tuples", ps.len())),
        Some(p) => Err(format!("{} mismatches, first at {p}", bad.len())),
    }
}

fn criterion_4() -> Check {
    let ps: Vec<_> = very_weak(12)
        .into_iter()
        .filter(|p| classify_regime(p).tag == RegimeTag::VeryWeakSubA && p.delta1() >= 1 && p.delta2() >= 1)
        .collect();
    let bad: Vec<String> = ps
        .par_iter()
        .filter_map(|p| {
            let target = achievable_sum(p).unwrap();
            let bound = upper_bound_sum(p).unwrap();
            match construct_imac(p) {
                Ok(s) => {
                    let c = verify(&s);
                    (!c.pass || c.rate != target || c.rate > bound).then(|| format!("{p}: rate {}", c.rate))
                }
                Err(e) => Some(format!("{p}: {e}")),
            }
        })
        .collect();
    match bad.first() {
        None => Ok(format!("{} SubA tuples", ps.len())),
        Some(first) => Err(format!("{} failures, first {first}", bad.len())),
    }
}

fn converse_violations(ps: &[CellParams]) -> Result<Vec<String>, String> {
    let config = SearchConfig::with_weight(1);
    ps.iter()
        .filter_map(|p| match search_best(p, &config) {
            Ok(o) => {
                let cap = upper_bound_sum(p).unwrap().floor();
                (o.rate > cap).then(|| Ok(format!("{p}: {} > {cap}", o.rate)))
            }
            Err(e) => Some(Err(format!("{p}: {e}"))),
        })
        .collect()
}

fn criterion_5() -> Check {
    let small: Vec<_> = very_weak(4).into_iter().filter(|p| p.q <= 4).collect();
    let fives: Vec<_> = very_weak(5).into_iter().filter(|p| p.q == 5).collect();
    let mut bad = converse_violations(&small)?;
    bad.extend(converse_violations(&fives)?);
    match bad.first() {
        None => Ok(format!("{} tuples at q <= 4, all {} at q = 5", small.len(), fives.len())),
        Some(first) => Err(format!("{} violations, first {first}", bad.len())),
    }
}

fn criterion_6() -> Check {
    let mut notes = Vec::new();
    for delta in [4usize, 8] {
        let (points, _) = wcurve_sweep(64, delta, &integer_alphas(64)).map_err(|e| e.to_string())?;
        let d = Rate::integer(delta as i64);
        let mut max = Rate::zero();
        let mut count = 0;
        for pt in points.iter().filter(|pt| pt.regime == RegimeTag::VeryWeakSubA) {
            let gap = pt.gap.ok_or_else(|| format!("SubA point ni = {} has no gap", pt.ni))?;
            count += 1;
            let even_multiple = pt.ni % delta == 0 && (pt.ni / delta) % 2 == 0;
            let odd_multiple = pt.ni % delta == 0 && (pt.ni / delta) % 2 == 1;
            if gap < 0 || gap > d {
                return Err(format!("delta {delta}, ni {}: gap {gap} outside [0, {delta}]", pt.ni));
            }
            if (gap == 0) != even_multiple {
                return Err(format!("delta {delta}, ni {}: gap {gap}", pt.ni));
            }
            if odd_multiple && gap != d {
                return Err(format!("delta {delta}, odd multiple ni {}: gap {gap}", pt.ni));
            }
            max = max.max(gap);
        }
        if max != d {
            return Err(format!("delta {delta}: max gap {max}"));
        }
        notes.push(format!("delta {delta}: {count} SubA points, max gap {max}"));
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Check {
    let p = CellParams::with_q(4, 4, 4, 4, 4, 4, 4).unwrap();
    let o = search_best(&p, &SearchConfig::with_weight(2)).map_err(|e| e.to_string())?;
    let c = verify(&o.scheme);
    if c.pass && o.rate >= 5 {
        Ok(format!("rate {}", o.rate))
    } else {
        Err(format!("best certified rate {} at {p}, needs >= 5", o.rate))
    }
}

fn criterion_8() -> Check {
    let ps = very_weak(12);
    let bad = ps.par_iter().find_any(|p| {
        (1..=64usize).any(|k| {
            let b = upper_bound_ktx(p, k).unwrap().ratio();
            let full = Ratio::from_integer((p.n1 + p.n3) as i64);
            (b - full).abs() != Ratio::new((p.nm + p.nd) as i64, k as i64)
        })
    });
    match bad {
        None => Ok(format!("{} tuples, k = 1..64", ps.len())),
        Some(p) => Err(format!("mismatch at {p}")),
    }
}

fn random_scheme(rng: &mut ChaCha8Rng) -> LinearScheme {
    let q = rng.gen_range(1..=6usize);
    let model = if rng.gen_bool(0.5) { Model::Imac } else { Model::Ibc };
    let params = loop {
        let mut g = || rng.gen_range(0..=q);
        let (n1, n3) = (q, g());
        let (n2, n4) = (rng.gen_range(0..=n1), rng.gen_range(0..=n3));
        let (nm, nd) = (rng.gen_range(0..=q), rng.gen_range(0..=q));
        if let Ok(p) = CellParams::with_q(n1, n2, n3, n4, nm, nd, q) {
            break p;
        }
    };
    let slots = ldcell::scheme::message_layout(model).len();
    let budget = rng.gen_range(0..=8usize);
    let mut columns = vec![Vec::new(); slots];
    for _ in 0..budget {
        let a = rng.gen_range(1..=q);
        let mut col = vec![a];
        if rng.gen_bool(0.35) {
            let b = rng.gen_range(1..=q);
            if b != a {
                col.push(b);
                col.sort_unstable();
            }
        }
        columns[rng.gen_range(0..slots)].push(col);
    }
    LinearScheme::from_columns(model, params, &columns).unwrap()
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let schemes: Vec<_> = (0..1000).map(|_| random_scheme(&mut rng)).collect();
    let outcomes: Vec<(bool, bool)> = schemes
        .iter()
        .map(|s| (verify(s).pass, verify_exhaustive(s).unwrap().pass))
        .collect();
    let passes = outcomes.iter().filter(|(a, _)| *a).count();
    match outcomes.iter().position(|(a, b)| a != b) {
        None => Ok(format!("1000 schemes agree ({passes} pass, {} fail)", 1000 - passes)),
        Some(i) => Err(format!("disagreement on {}", schemes[i].to_json())),
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "(8,7,9,7,2,4) construction certifies at 14", Duration::from_secs(5), criterion_1),
        (2, "dual of the (8,7,9,7,2,4) scheme certifies at 14", Duration::from_secs(5), criterion_2),
        (3, "bound duality over n1, n3 <= 12", Duration::from_secs(10), criterion_3),
        (4, "construction meets the achievable formula", Duration::from_secs(120), criterion_4),
        (5, "weight-1 search never beats floor(bound)", Duration::from_secs(600), criterion_5),
        (6, "W-curve gap law at n1 = 64", Duration::from_secs(10), criterion_6),
        (7, "multi-user gain at (4,4,4,4,4,4)", Duration::from_secs(300), criterion_7),
        (8, "k-transmitter limit, k = 1..64", Duration::from_secs(5), criterion_8),
        (9, "rank certificate matches enumeration", Duration::from_secs(120), criterion_9),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id}: {} - {name} ({detail}) [{elapsed:.2?}]",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
