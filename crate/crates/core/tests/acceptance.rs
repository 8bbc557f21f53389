//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if
//! any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use obd_floer::diagram::HeegaardDiagram;
use obd_floer::domains::Domains;
use obd_floer::floer::{compute_order, exhaustive_order, verify_zigzag, ContactClass, NiceFloer, OrderResult};
use obd_floer::nicefy::{is_nice, make_nice, DEFAULT_MOVE_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure!(t < limit, "{what} took {t:?} (limit {limit:?})");
    Ok(())
}

fn diagram(name: &str) -> Result<HeegaardDiagram, String> {
    HeegaardDiagram::build(&common::fixture(name)).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let d = diagram("not_stein")?;
    within(start, Duration::from_secs(1), "ingestion")?;
    ensure!(d.num_regions() == 22 && d.num_points == 26, "shape {}x{}", d.num_regions(), d.num_points);
    let sum: i64 = d.euler_measures_2.iter().sum();
    ensure!(sum == -8 && sum == 2 * (d.num_regions() as i64 - d.num_points as i64), "sum of 2e = {sum}");
    ensure!(d.alpha_curves.len() == d.beta_curves.len(), "{} alpha vs {} beta curves", d.alpha_curves.len(), d.beta_curves.len());
    for (i, c) in d.alpha_curves.iter().enumerate() {
        ensure!(d.contact_points[i] == *c.iter().min().unwrap(), "contact point {i} is not the curve minimum");
    }
    Ok(format!("22 regions, 26 points, sum 2e = -8, {} curves, contact points {:?}, {:?}", d.n(), d.contact_points, start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let rl = common::fixture("m12");
    let d = diagram("m12")?;
    within(start, Duration::from_secs(1), "ingestion")?;
    ensure!(!is_nice(&rl), "reported nice");
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &rl.regions[..rl.num_unpointed()] {
        if r.corner_count() > 4 {
            *sizes.entry(r.corner_count()).or_default() += 1;
        }
    }
    ensure!(sizes == BTreeMap::from([(6, 2), (8, 1)]), "bad unpointed regions by corners: {sizes:?}");
    let sum: i64 = d.euler_measures_2.iter().sum();
    ensure!(sum == -8 && sum == 2 * (d.num_regions() as i64 - d.num_points as i64), "sum of 2e = {sum}");
    Ok(format!("not nice: two hexagons and one octagon, sum 2e = -8, {:?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let d = Domains::new(diagram("not_stein")?);
    let n = d.generators.len();
    let contacts = &d.diagram.contact_points;
    let (mut violations, mut total, mut max) = (0, 0, 0);
    for x in 0..n {
        for y in 0..n {
            let k = contacts.iter().filter(|&&c| d.generators[y].contains(c) && !d.generators[x].contains(c)).count();
            let found = d.find_pos_domains(x, y).map_err(|e| e.to_string())?.len();
            total += found;
            max = max.max(found);
            if found > 1 << k {
                violations += 1;
            }
        }
    }
    within(start, Duration::from_secs(300), "enumeration")?;
    ensure!(violations == 0, "{violations} pairs exceed 2^k");
    Ok(format!("{} pairs, {total} positive domains, max {max} per pair, 0 violations, {:?}", n * n, start.elapsed()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let bases = [("not_stein", common::fixture("not_stein")), ("m12", common::fixture("m12"))];
    let (mut diagrams, mut pairs, mut domains) = (0, 0, 0);
    for i in 0..24 {
        let (name, base) = &bases[usize::from(i % 6 == 5)];
        let rl = common::random_pushes(&mut rng, base, 1 + i % 2);
        let d = Domains::new(HeegaardDiagram::build(&rl).map_err(|e| e.to_string())?);
        ensure!(d.periodic_rank() <= 3, "periodic rank {}", d.periodic_rank());
        let n = d.generators.len();
        for x in 0..n {
            for y in 0..n {
                let a = d.find_pos_domains(x, y).map_err(|e| e.to_string())?;
                let b = d.find_pos_domains_unpruned(x, y).map_err(|e| e.to_string())?;
                ensure!(a == b, "{name} diagram {i}: pair ({x}, {y}) pruned {} vs box {}", a.len(), b.len());
                domains += a.len();
            }
        }
        pairs += n * n;
        diagrams += 1;
    }
    within(start, Duration::from_secs(60), "comparison")?;
    Ok(format!("{diagrams} diagrams, {pairs} pairs, {domains} domains, exact agreement, {:?}", start.elapsed()))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let rl = common::fixture("m12");
    let res = make_nice(&rl, DEFAULT_MOVE_CAP).map_err(|e| e.to_string())?;
    let out = &res.region_list;
    let d = HeegaardDiagram::build(out).map_err(|e| format!("output invalid: {e}"))?;
    ensure!(is_nice(out), "output not nice");
    let chi = out.regions.len() as i64 - out.num_points() as i64;
    ensure!(chi == -4, "#regions - #points = {chi}");
    let again = make_nice(out, DEFAULT_MOVE_CAP).map_err(|e| e.to_string())?;
    ensure!(again.moves.is_empty() && &again.region_list == out, "not idempotent");
    let f = NiceFloer::new(d).map_err(|e| e.to_string())?;
    for c in 0..f.num_classes() {
        let cc = f.class_complex(c).map_err(|e| e.to_string())?;
        ensure!(cc.d_hat.mul(&cc.d_hat).is_zero(), "d_hat^2 != 0 in class {c}");
    }
    within(start, Duration::from_secs(10), "make_nice")?;
    Ok(format!(
        "{} pushes, {} regions / {} points, idempotent, d_hat^2 = 0 on {} classes, {:?}",
        res.moves.len(),
        out.regions.len(),
        out.num_points(),
        f.num_classes(),
        start.elapsed()
    ))
}

fn criterion_6() -> Outcome {
    let text = std::fs::read_to_string(common::fixture_path("expected")).map_err(|e| e.to_string())?;
    let expected: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for (name, want) in expected.as_object().ok_or("expected.json is not an object")? {
        let start = Instant::now();
        let d = diagram(name)?;
        let f = NiceFloer::new(d.clone()).map_err(|e| format!("{name}: {e}"))?;
        let rank: usize = (0..f.num_classes())
            .map(|c| f.class_complex(c).map(|cc| cc.homology().total))
            .sum::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let r = f.order_report().map_err(|e| format!("{name}: {e}"))?;
        let (want_rank, want_class, want_order) = (want["rank"].as_u64(), want["contact_class"].as_str(), want["order"].as_u64());
        ensure!(Some(rank as u64) == want_rank, "{name}: rank {rank}, expected {want_rank:?}");
        ensure!(Some(r.contact_class.as_str()) == want_class, "{name}: contact class {}", r.contact_class.as_str());
        ensure!(r.order.order().map(|k| k as u64) == want_order, "{name}: order {:?}", r.order.order());

        // independent reduction
        let dom = Domains::new(d);
        let m = common::brute_differential(&dom);
        let brute_rank = common::brute_homology_rank(&m);
        ensure!(brute_rank == rank, "{name}: exhaustive rank {brute_rank}");
        let x = obd_floer::linalg::BitVec::unit(dom.generators.len(), dom.contact_index().ok_or("no contact generator")?);
        let brute_zero = common::brute_is_boundary(&m, &x);
        ensure!(brute_zero == (r.contact_class == ContactClass::Zero), "{name}: exhaustive contact class disagrees");
        let cc = f.class_complex(r.class).map_err(|e| e.to_string())?;
        let split = f.sort_canonical_spinc(&cc).map_err(|e| e.to_string())?;
        ensure!(exhaustive_order(&split.d0, &split.d1, &split.x) == r.order.order(), "{name}: exhaustive order disagrees");
        within(start, Duration::from_secs(10), name)?;
        let order = r.order.order().map_or("inf".to_string(), |k| k.to_string());
        lines.push(format!("{name}: rank {rank}, {}, order {order}", r.contact_class.as_str()));
    }
    Ok(lines.join("; "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hist: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..200 {
        let (d0, d1, x) = common::random_split_complex(&mut rng, 4);
        let res = compute_order(&d0, &d1, &x).map_err(|e| format!("instance {i}: {e}"))?;
        let oracle = exhaustive_order(&d0, &d1, &x);
        ensure!(res.order() == oracle, "instance {i}: computed {:?}, exhaustive {oracle:?}", res.order());
        if let OrderResult::Finite { certificate, .. } = &res {
            ensure!(verify_zigzag(&d0, &d1, &x, certificate), "instance {i}: certificate fails");
        }
        *hist.entry(res.order().map_or("inf".into(), |k| k.to_string())).or_default() += 1;
    }
    within(start, Duration::from_secs(60), "oracle comparison")?;
    Ok(format!("200 instances agree, orders {hist:?}, {:?}", start.elapsed()))
}

fn criterion_8() -> Outcome {
    let mut processed = Vec::new();
    for name in ["tight_s3", "tight_s3_finger", "overtwisted_s3", "s1xs2"] {
        processed.push((name.to_string(), common::fixture(name)));
    }
    let m12 = common::fixture("m12");
    processed.push(("m12 (nice)".into(), make_nice(&m12, DEFAULT_MOVE_CAP).map_err(|e| e.to_string())?.region_list));
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..3 {
        let rl = common::random_pushes(&mut rng, &m12, 1);
        processed.push((format!("m12 perturbed {i} (nice)"), make_nice(&rl, DEFAULT_MOVE_CAP).map_err(|e| e.to_string())?.region_list));
    }
    let (mut domains, mut cross_checks) = (0, 0);
    for (name, rl) in &processed {
        let f = NiceFloer::new(HeegaardDiagram::build(rl).map_err(|e| e.to_string())?).map_err(|e| format!("{name}: {e}"))?;
        for c in 0..f.num_classes() {
            let cc = f.class_complex(c).map_err(|e| format!("{name}: {e}"))?;
            let z = |m: &obd_floer::linalg::F2Matrix| m.is_zero();
            ensure!(z(&cc.d_hat.mul(&cc.d_hat)), "{name}: d_hat^2");
            ensure!(z(&cc.d0.mul(&cc.d0)), "{name}: d0^2");
            ensure!(z(&cc.d1.mul(&cc.d1)), "{name}: d1^2");
            ensure!(cc.d0.mul(&cc.d1) == cc.d1.mul(&cc.d0), "{name}: d0 d1 != d1 d0");
            for d in &cc.diffs {
                for dom in &d.domains {
                    let j = f.domains.j_plus(&dom.coeffs, d.from, d.to).map_err(|e| e.to_string())?;
                    ensure!(j == 0 || j == 2, "{name}: J+ = {j}");
                    domains += 1;
                }
            }
        }
        let xi = f.contact_generator().map_err(|e| e.to_string())?;
        let cc = f.class_complex(f.canonical_class().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(cc.d_hat.column(cc.local_index(xi).ok_or("contact generator missing")?).is_zero(), "{name}: d_hat(x_xi) != 0");
        let r = f.order_report().map_err(|e| format!("{name}: {e}"))?;
        if r.contact_class == ContactClass::Zero && r.torsion && r.graded_mod_div.is_none() {
            ensure!(r.order.order().is_some(), "{name}: contact class zero but order infinite");
            cross_checks += 1;
        }
    }
    Ok(format!("{} nice diagrams, {domains} counted domains, all identities hold, {cross_checks} zero-class cross-checks", processed.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("example ingestion (22 regions)", criterion_1),
        ("example ingestion (6 regions, not nice)", criterion_2),
        ("2^k bound on positive domains", criterion_3),
        ("pruned enumeration = box scan", criterion_4),
        ("make_nice", criterion_5),
        ("known manifolds", criterion_6),
        ("order = exhaustive zigzag search", criterion_7),
        ("structural identities", criterion_8),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {title}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
