mod common;

use obd_floer::diagram::{parse_region_list, parse_tolerant, DiagramError, HeegaardDiagram, RegionList};
use obd_floer::domains::Domains;
use obd_floer::nicefy::{badness, is_nice, make_nice, DEFAULT_MOVE_CAP};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pushed(base: &str, seed: u64, pushes: usize) -> RegionList {
    common::random_pushes(&mut ChaCha8Rng::seed_from_u64(seed), &common::fixture(base), pushes)
}

#[test]
fn not_stein_shape() {
    let d = HeegaardDiagram::build(&common::fixture("not_stein")).unwrap();
    assert_eq!((d.num_points, d.num_regions(), d.num_pointed, d.n()), (26, 22, 1, 3));
    assert_eq!(d.euler_measures_2.iter().sum::<i64>(), 2 * (22 - 26));
    for (i, curve) in d.alpha_curves.iter().enumerate() {
        assert_eq!(d.contact_points[i], *curve.iter().min().unwrap());
    }
    assert_eq!(d.enumerate_generators().len(), 120);
}

#[test]
fn tolerant_reader_accepts_bare_lists() {
    let rl = parse_tolerant("rlist = [[0,1],[0,1],[[1,0],[1,0]]]\n", "s", 1).unwrap();
    let expected = common::fixture("s1xs2");
    assert_eq!((rl.name.as_str(), rl.num_pointed, &rl.regions), ("s", 1, &expected.regions));
}

#[test]
fn malformed_inputs_are_rejected() {
    for bad in [
        "",
        "{\"name\": \"x\", \"num_pointed\": 1, \"regions\": [[0,1,2]]}",
        "{\"name\": \"x\", \"num_pointed\": 1, \"regions\": [[0,1],[1,0]]}",
        "{\"name\": \"x\", \"num_pointed\": 3, \"regions\": [[0,0,0,0]]}",
    ] {
        assert!(parse_region_list(bad).and_then(|rl| HeegaardDiagram::build(&rl)).is_err(), "{bad}");
    }
    let rl = RegionList::from_flat("x", 1, &[&[0, 1], &[1, 0]]).unwrap();
    assert!(matches!(HeegaardDiagram::build(&rl), Err(DiagramError::CornerCount { .. })));
}

#[test]
fn region_list_json_round_trips() {
    for name in ["not_stein", "m12", "s1xs2", "overtwisted_s3"] {
        let rl = common::fixture(name);
        assert_eq!(parse_region_list(&rl.to_json()).unwrap(), rl);
    }
}

#[test]
fn positive_domains_obey_contact_bound() {
    let d = Domains::new(HeegaardDiagram::build(&common::fixture("not_stein")).unwrap());
    let contacts = &d.diagram.contact_points;
    let n = d.generators.len();
    for x in 0..n {
        for y in 0..n {
            let k = contacts.iter().filter(|&&c| d.generators[y].contains(c) && !d.generators[x].contains(c)).count();
            assert!(d.find_pos_domains(x, y).unwrap().len() <= 1 << k);
        }
    }
}

#[test]
fn gradings_are_consistent_with_index_one_domains() {
    let d = Domains::new(HeegaardDiagram::build(&common::fixture("not_stein")).unwrap());
    let table = d.spinc_partition().unwrap();
    let diffs = d.index1_differentials(&table).unwrap();
    assert!(diffs.total() > 0);
    for (&(x, y), doms) in &diffs.pairs {
        assert_eq!(table.class_of[x], table.class_of[y]);
        let div = table.div[table.class_of[x]];
        let diff = table.grading_difference(x, y);
        assert!(if div == 0 { diff == 1 } else { (diff - 1).rem_euclid(div) == 0 }, "gr({x}) - gr({y}) = {diff}");
        for dom in doms {
            assert!(dom.is_positive());
            assert!(d.satisfies_boundary(&dom.coeffs, x, y));
            assert_eq!(d.j_plus(&dom.coeffs, x, y).unwrap() % 2, 0);
        }
    }
    let xi = d.contact_index().unwrap();
    assert!(table.chern[xi].iter().all(|&c| c == 0));
}

#[test]
fn make_nice_on_m12() {
    let rl = common::fixture("m12");
    assert!(!is_nice(&rl));
    let res = make_nice(&rl, DEFAULT_MOVE_CAP).unwrap();
    let out = &res.region_list;
    assert!(is_nice(out));
    assert_eq!(out.regions.len() as i64 - out.num_points() as i64, -4);
    HeegaardDiagram::build(out).unwrap();
    let again = make_nice(out, DEFAULT_MOVE_CAP).unwrap();
    assert!(again.moves.is_empty());
    assert_eq!(&again.region_list, out);
}

#[test]
fn move_cap_is_enforced() {
    assert!(make_nice(&common::fixture("m12"), 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finger_pushes_preserve_the_surface(seed in any::<u64>(), pushes in 1usize..4) {
        for base in ["not_stein", "m12"] {
            let before = common::fixture(base);
            let rl = pushed(base, seed, pushes);
            let d = HeegaardDiagram::build(&rl).unwrap();
            prop_assert_eq!(rl.regions.len() as i64 - rl.num_points() as i64, before.regions.len() as i64 - before.num_points() as i64);
            prop_assert_eq!(d.euler_measures_2.iter().sum::<i64>(), 2 * d.euler_characteristic());
            prop_assert_eq!(d.n(), HeegaardDiagram::build(&before).unwrap().n());
            prop_assert_eq!(badness(&rl).len(), rl.num_unpointed());
        }
    }

    #[test]
    fn pruned_enumeration_matches_box_scan(seed in any::<u64>()) {
        let rl = pushed("not_stein", seed, 1);
        let d = Domains::new(HeegaardDiagram::build(&rl).unwrap());
        let n = d.generators.len();
        for x in (0..n).step_by(3) {
            for y in 0..n {
                prop_assert_eq!(d.find_pos_domains(x, y).unwrap(), d.find_pos_domains_unpruned(x, y).unwrap());
            }
        }
    }

    #[test]
    fn periodic_basis_is_periodic(seed in any::<u64>()) {
        let d = Domains::new(HeegaardDiagram::build(&pushed("not_stein", seed, 2)).unwrap());
        prop_assert_eq!(d.periodic_rank(), 2);
        for p in &d.periodic {
            prop_assert!(d.boundary_of(p).iter().all(|&v| v == 0));
        }
        prop_assert!(d.is_weakly_admissible());
    }
}
