use polynorm::cohomology::np_bound_from_regularity;
use polynorm::counting::dilate_count;
use polynorm::geometry::{reeve_simplex, standard_simplex, unit_cube};
use polynorm::harness::{corpus_with_fixtures, generate_corpus, run_verification, CorpusSpec};
use polynorm::normality::is_normal;
use polynorm::syzygy::{n1_probe, n1_probe_exhaustive};
use polynorm::{Containment, Error};

fn spec(dims: Vec<usize>, count: usize) -> CorpusSpec {
    CorpusSpec {
        seed: 7,
        dims,
        coord_bound: 4,
        count_per_dim: count,
        vertex_candidates: 6,
    }
}

#[test]
fn spec_round_trips_through_json() {
    let s = spec(vec![2, 3], 5);
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(CorpusSpec::from_json(&text).unwrap(), s);
    assert_eq!(
        generate_corpus(&s).unwrap(),
        generate_corpus(&CorpusSpec::from_json(&text).unwrap()).unwrap()
    );
}

#[test]
fn malformed_specs_are_input_errors() {
    for text in [
        "{}",
        r#"{"seed": 1, "dims": [5], "coord_bound": 4, "count_per_dim": 1, "vertex_candidates": 6}"#,
        r#"{"seed": 1, "dims": [2], "coord_bound": 9, "count_per_dim": 1, "vertex_candidates": 6}"#,
        r#"{"seed": 1, "dims": [3], "coord_bound": 4, "count_per_dim": 1, "vertex_candidates": 3}"#,
    ] {
        let err = CorpusSpec::from_json(text).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)), "{text}: {err}");
    }
}

#[test]
fn repo_default_config_parses() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../config/default_corpus.json"
    );
    let s = CorpusSpec::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(s.dims, vec![2, 3, 4]);
    assert_eq!(s.coord_bound, 4);
    assert_eq!(s.count_per_dim, 100);
}

#[test]
fn planar_polygons_with_many_boundary_points_are_quadratic() {
    // Polygons with more than three boundary lattice points have toric ideals
    // generated by quadrics, so degree 3 and 4 fibers are connected.
    let corpus = generate_corpus(&spec(vec![2], 40)).unwrap();
    let mut probed = 0;
    for p in &corpus {
        let boundary = dilate_count(p, 1, Containment::Closed).unwrap()
            - dilate_count(p, 1, Containment::RelativeInterior).unwrap();
        if boundary > 3 {
            probed += 1;
            let r = n1_probe(p, 1, 4).unwrap();
            assert!(
                r.is_connected(),
                "{} disconnected at {:?}",
                p.to_json(),
                r.witness_fiber
            );
        }
    }
    assert!(probed > 20);
}

#[test]
fn probe_is_monotone_in_cap() {
    for p in generate_corpus(&spec(vec![2], 10)).unwrap() {
        let full = n1_probe(&p, 1, 4).unwrap();
        for cap in 2..4 {
            let r = n1_probe(&p, 1, cap).unwrap();
            assert_eq!(r.degrees[..], full.degrees[..r.degrees.len()]);
            if full.is_connected() {
                assert!(r.is_connected());
            }
        }
    }
}

#[test]
fn fast_probe_agrees_with_explicit_fibers() {
    let mut cases = vec![unit_cube(2), standard_simplex(2), reeve_simplex(2)];
    cases.extend(generate_corpus(&spec(vec![2], 6)).unwrap());
    for p in &cases {
        for cap in 2..=3 {
            let fast = n1_probe(p, 1, cap).unwrap();
            let slow = n1_probe_exhaustive(p, 1, cap).unwrap();
            assert_eq!(fast, slow, "{}", p.to_json());
        }
    }
}

#[test]
fn reeve_fixtures_follow_the_random_corpus() {
    let c = corpus_with_fixtures(&spec(vec![3], 2)).unwrap();
    let sources: Vec<&str> = c.iter().map(|(s, _)| s.as_str()).collect();
    assert_eq!(
        sources,
        ["random-0", "random-1", "reeve-2", "reeve-3", "reeve-4", "reeve-5"]
    );
}

#[test]
fn small_planar_batch_has_no_violations() {
    let report = run_verification(&spec(vec![2], 50), 2, 4, None).unwrap();
    assert_eq!(report.summary.polytopes, 50);
    assert_eq!(report.summary.corollary_passes, 50);
    assert_eq!(report.summary.reciprocity_passes, 50);
    assert!(report.passed());
}

#[test]
fn reeve_batch_flags_non_normal_then_normal() {
    let report = run_verification(&spec(vec![3], 0), 2, 3, None).unwrap();
    assert_eq!(report.entries.len(), 4);
    for e in &report.entries {
        assert!(!e.analysis.normality.is_normal(), "{}", e.source);
        let second = e.corollary.levels.iter().find(|l| l.ell == 2).unwrap();
        assert!(second.witness.is_none(), "{}", e.source);
    }
    assert!(report.passed());
}

#[test]
fn regularity_bound_dilates_are_normal() {
    for (src, p) in corpus_with_fixtures(&spec(vec![2, 3], 15)).unwrap() {
        let ell = np_bound_from_regularity(&p, 0).unwrap();
        let r = is_normal(&p.dilate(ell).unwrap(), None).unwrap();
        assert!(r.is_normal(), "{src}: {ell}P has witness {:?}", r.witness);
    }
}
