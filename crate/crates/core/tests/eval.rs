mod common;

use common::*;
use graphmean::align::SolverConfig;
use graphmean::data::{generate, letter_prototype, Dataset, GeneratorSpec, Provenance};
use graphmean::eval::*;
use graphmean::frechet::{frechet_value, Loss, Sample};
use graphmean::means::{med, Algorithm, MeanConfig};
use graphmean::{Config, Graph};
use proptest::prelude::*;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn toy() -> PerformanceTable {
    PerformanceTable::new(
        names(&["a", "b", "c"]),
        names(&["s1", "s2", "s3", "s4"]),
        vec![vec![1.0, 2.0, 4.0, 0.0], vec![2.0, 2.0, 2.0, 0.0], vec![4.0, 1.0, 8.0, 1.0]],
    )
    .unwrap()
}

#[test]
fn ratios() {
    assert_eq!(performance_ratio(&[3.0]), vec![1.0]);
    assert_eq!(performance_ratio(&[2.0, 3.0]), vec![1.0, 1.5]);
    assert_eq!(performance_ratio(&[0.0, 0.0, 1.0]), vec![1.0, 1.0, f64::INFINITY]);
}

#[test]
fn toy_profiles_match_hand_computation() {
    let p = performance_profiles(&toy());
    assert_eq!(p[0].ratios, vec![1.0, 1.0, 2.0, 2.0]);
    assert_eq!(p[0].breakpoints(), vec![(1.0, 0.5), (2.0, 1.0)]);
    assert_eq!((p[0].wins, p[0].tau_max), (0.5, 2.0));
    assert_eq!(p[1].breakpoints(), p[0].breakpoints());
    assert_eq!(p[2].breakpoints(), vec![(1.0, 0.25), (4.0, 0.75)]);
    assert_eq!((p[2].wins, p[2].tau_max), (0.25, 4.0));
    assert_eq!(p[2].at(3.9), 0.25);
    assert_eq!(p[2].at(1e300), 0.75);
    let csv = profiles_csv(&p);
    assert!(csv.starts_with("algorithm,tau,probability\na,1,0.5\na,2,1\n"));
}

#[test]
fn profile_steps_at_each_ratio() {
    let t = PerformanceTable::new(names(&["x", "y"]), names(&["1", "2", "3"]), vec![vec![1.0, 1.1, 1.3], vec![1.0, 1.0, 1.0]]).unwrap();
    let p = performance_profiles(&t);
    assert_eq!(p[0].breakpoints(), vec![(1.0, 1.0 / 3.0), (1.1, 2.0 / 3.0), (1.3, 1.0)]);
    let single = PerformanceTable::new(names(&["x"]), names(&["1", "2"]), vec![vec![5.0, 7.0]]).unwrap();
    assert_eq!(performance_profiles(&single)[0].breakpoints(), vec![(1.0, 1.0)]);
}

#[test]
fn toy_pairwise_matches_hand_computation() {
    let c = pairwise_comparison(&toy());
    assert_eq!(c.better, vec![vec![0, 1, 3], vec![1, 0, 3], vec![1, 1, 0]]);
    assert_eq!(c.percent[0][2], 75.0);
    assert_eq!(c.wins, vec![1, 1, 0]);
    assert_eq!(c.total, vec![50.0, 50.0, 25.0]);
    assert_eq!(c.ties(0, 1), 2);
    assert!(c.to_csv().starts_with("algorithm,a,b,c,wins,total\na,0,25,75,1,50\n"));
}

#[test]
fn nine_wins_and_a_tie() {
    let mut a = vec![1.0; 10];
    let b = vec![2.0; 10];
    a[9] = 2.0;
    let t = PerformanceTable::new(names(&["i", "j"]), (0..10).map(|k| k.to_string()).collect(), vec![a, b]).unwrap();
    let c = pairwise_comparison(&t);
    assert_eq!((c.percent[0][1], c.percent[1][0], c.percent[0][0]), (90.0, 0.0, 0.0));
}

proptest! {
    #[test]
    fn ratios_are_scale_invariant(p in prop::collection::vec(0.0f64..10.0, 1..6), c in 0.01f64..100.0) {
        let scaled: Vec<f64> = p.iter().map(|x| x * c).collect();
        let (r, s) = (performance_ratio(&p), performance_ratio(&scaled));
        for (x, y) in r.iter().zip(&s) {
            prop_assert!(x >= &1.0);
            prop_assert!((x.is_infinite() && y.is_infinite()) || (x - y).abs() <= 1e-12 * x);
        }
    }

    #[test]
    fn pairwise_counts_partition_the_samples(v in prop::collection::vec(prop::collection::vec(0u8..4, 5), 3)) {
        let values: Vec<Vec<f64>> = v.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let t = PerformanceTable::new(names(&["a", "b", "c"]), names(&["1", "2", "3", "4", "5"]), values).unwrap();
        let c = pairwise_comparison(&t);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert_eq!(c.better[i][j] + c.better[j][i] + c.ties(i, j), 5);
                    let tie_pct = 100.0 * c.ties(i, j) as f64 / 5.0;
                    prop_assert!((c.percent[i][j] + c.percent[j][i] + tie_pct - 100.0).abs() < 1e-12);
                }
            }
        }
        for p in performance_profiles(&t) {
            let b = p.breakpoints();
            prop_assert!(b.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
            prop_assert!(b.iter().all(|&(_, q)| (0.0..=1.0).contains(&q)));
        }
    }
}

fn letters(seed: u64, count: usize) -> Dataset {
    generate(&GeneratorSpec { letters: "AKT".into(), count, seed, noise_sigma: 0.3, ..Default::default() }).unwrap()
}

#[test]
fn benchmark_record_counts_and_determinism() {
    let ds = letters(1, 6);
    let bench = BenchConfig {
        protocol: Protocol::RandomSamples { count: 2, size_range: (3, 5) },
        ..BenchConfig::default()
    };
    let r = benchmark(std::slice::from_ref(&ds), &[Algorithm::Mmm], &bench).unwrap();
    assert_eq!(r.len(), 2);
    let all = benchmark(std::slice::from_ref(&ds), &Algorithm::ALL, &bench).unwrap();
    assert_eq!(all.len(), 14);
    let again = benchmark(std::slice::from_ref(&ds), &Algorithm::ALL, &bench).unwrap();
    assert_eq!(records_csv(&all).unwrap(), records_csv(&again).unwrap());
    assert!(all.iter().filter(|r| r.algorithm == Algorithm::Sgg).all(|r| r.step_size.is_some()));
    let table = PerformanceTable::from_records(&all, Metric::Dispersion).unwrap();
    assert_eq!((table.algorithms.len(), table.samples.len()), (7, 2));
}

#[test]
fn benchmark_rejects_mismatched_protocols() {
    let ds = letters(1, 2);
    let too_big = BenchConfig { protocol: Protocol::RandomSamples { count: 1, size_range: (7, 9) }, ..BenchConfig::default() };
    assert!(benchmark(std::slice::from_ref(&ds), &[Algorithm::Mmm], &too_big).is_err());
    let unlabelled = Dataset::new("u", Sample::new(ds.sample.graphs().to_vec()).unwrap(), None, Provenance::default()).unwrap();
    let classes = BenchConfig { protocol: Protocol::ClassSamples { replicates: 1 }, ..BenchConfig::default() };
    assert!(benchmark(&[unlabelled], &[Algorithm::Mmm], &classes).is_err());
}

#[test]
fn class_protocol_selects_one_step_size_per_class() {
    let ds = letters(2, 4);
    let bench = BenchConfig {
        protocol: Protocol::ClassSamples { replicates: 2 },
        sgg_grid: vec![0.3, 0.03],
        eta_selection_trials: 2,
        ..BenchConfig::default()
    };
    let r = benchmark(std::slice::from_ref(&ds), &[Algorithm::Sgg, Algorithm::Mmm], &bench).unwrap();
    assert_eq!(r.len(), 3 * 2 * 2);
    for class in ["A", "K", "T"] {
        let etas: Vec<_> = r.iter().filter(|x| x.sample_id.starts_with(class) && x.algorithm == Algorithm::Sgg).map(|x| x.step_size).collect();
        assert_eq!(etas.len(), 2);
        assert_eq!(etas[0], etas[1]);
    }
}

#[test]
fn mmm_beats_its_single_pass_and_the_medoid() {
    let ds = generate(&GeneratorSpec { count: 20, seed: 4, noise_sigma: 0.5, structural_noise: 0.2, ..Default::default() }).unwrap();
    let bench = BenchConfig { protocol: Protocol::RandomSamples { count: 10, size_range: (20, 40) }, ..BenchConfig::default() };
    let algs = [Algorithm::Mmm, Algorithm::Bam, Algorithm::Med];
    let r = benchmark(std::slice::from_ref(&ds), &algs, &bench).unwrap();
    let c = pairwise_comparison(&PerformanceTable::from_records(&r, Metric::Dispersion).unwrap());
    assert!(c.percent[0][1] >= 90.0, "{}", c.to_csv());
    assert_eq!(c.percent[0][2], 100.0);
}

#[test]
fn consistency_without_noise_recovers_the_prototype() {
    let proto = letter_prototype('H').unwrap();
    let rows = consistency_simulation(&proto, 0.0, &[3, 6], 3, &Config::default()).unwrap();
    assert!(rows.iter().all(|r| r.median_distance < 1e-12 && r.median_normalized_variation < 1e-20));
}

#[test]
fn consistency_with_noise_improves_with_n() {
    let proto = letter_prototype('K').unwrap();
    let rows = consistency_simulation(&proto, 0.1, &[5, 20, 80], 10, &Config::default()).unwrap();
    assert!(rows[1].median_distance <= rows[0].median_distance);
    assert!(rows[2].median_distance <= rows[1].median_distance);
    let (v5, v20, v80) = (rows[0].median_normalized_variation, rows[1].median_normalized_variation, rows[2].median_normalized_variation);
    assert!((v80 - v20).abs() <= (v20 - v5).abs());
}

fn labelled(values: &[(f64, &str)]) -> Sample<f64> {
    Sample::with_labels(
        values.iter().map(|&(v, _)| Graph::from_nodes(&[vec![v]]).unwrap()).collect(),
        values.iter().map(|&(_, l)| l.to_string()).collect(),
    )
    .unwrap()
}

#[test]
fn nearest_neighbour_basics() {
    let train = labelled(&[(0.0, "low"), (10.0, "high")]);
    let test = labelled(&[(1.0, "low"), (10.0, "high"), (5.0, "low")]);
    let r = nn_classify(&train, &test, &SolverConfig::default()).unwrap();
    assert_eq!(r.predictions, vec!["low", "high", "high"]);
    // classes sorted: high, low; the tie at 5 goes to "high"
    assert_eq!(r.classes, vec!["high", "low"]);
    assert_eq!(r.confusion, vec![vec![1, 0], vec![1, 1]]);
    assert!((r.accuracy - 2.0 / 3.0).abs() < 1e-15);
    let same = nn_classify(&train, &train, &SolverConfig::default()).unwrap();
    assert_eq!(same.accuracy, 1.0);
}

#[test]
fn condensed_prototypes_per_class() {
    let train = labelled(&[(0.0, "a"), (2.0, "a"), (7.0, "b")]);
    let p = condensed_prototypes(&train, Algorithm::Mmm, &Config::default()).unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(p["a"].node_attr(0), &[1.0]);
    assert_eq!(p["b"].node_attr(0), &[7.0]);
    assert_eq!(prototype_sample(&p).unwrap().labels().unwrap(), ["a", "b"]);
}

#[test]
fn mmm_prototypes_are_no_more_dispersed_than_class_medoids() {
    let ds = letters(8, 8);
    let cfg = MeanConfig::default();
    let protos = condensed_prototypes(&ds.sample, Algorithm::Mmm, &cfg).unwrap();
    for (class, idx) in ds.classes().unwrap() {
        let s = ds.sample.subset(&idx).unwrap();
        let f = frechet_value(&protos[&class], &s, Loss::MEAN, &cfg.solver).unwrap().value;
        assert!(f <= med(&s, &cfg).unwrap().best_variation + 1e-9, "{class}");
    }
}

#[test]
fn condensed_classification_tracks_full_nearest_neighbour() {
    let mut gaps = Vec::new();
    for trial in 0..10 {
        let train = letters(100 + trial, 10);
        let test = letters(200 + trial, 10);
        let solver = SolverConfig::default();
        let full = nn_classify(&train.sample, &test.sample, &solver).unwrap().accuracy;
        let protos = condensed_prototypes(&train.sample, Algorithm::Mmm, &Config { seed: trial, ..Config::default() }).unwrap();
        let condensed = nn_classify(&prototype_sample(&protos).unwrap(), &test.sample, &solver).unwrap().accuracy;
        gaps.push(100.0 * (full - condensed));
    }
    gaps.sort_by(f64::total_cmp);
    let median = (gaps[4] + gaps[5]) / 2.0;
    assert!(median <= 5.0, "{gaps:?}");
}

#[test]
fn records_csv_header() {
    let csv = records_csv(&[]).unwrap();
    assert_eq!(csv, "dataset,sample_id,algorithm,seed,sample_size,dispersion,iterations,matchings,matchings_until_best,step_size\n");
    let _ = rng(0);
}
