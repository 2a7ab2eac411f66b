use super::*;
use proptest::prelude::*;

fn zero_m1(x0: f64, n: usize) -> GeneratedSeries {
    gen_m1(n, &NoiseSpec::Zero, x0, 1).unwrap()
}

#[test]
fn m1_noise_free() {
    assert!(zero_m1(0.0, 50).series.values().iter().all(|&v| v == 0.0));
    let g = zero_m1(1.0, 3);
    // 0.5 * sin(1)
    assert!((g.series.values()[0] - 0.42074).abs() < 5e-6);
}

#[test]
fn m1_uniform_noise_is_centred() {
    let g = gen_m1(100_000, &NoiseSpec::uniform(-0.7, 0.7).unwrap(), 0.5, 3).unwrap();
    let mean = g.series.values().iter().sum::<f64>() / 1e5;
    assert!(mean.abs() < 0.02, "mean = {mean}");
}

#[test]
fn m2_forced_noise() {
    let spec = NarSpec::new(MapId::M2, NoiseSpec::Bernoulli { p: 0.5 }, vec![0.0]);
    let (x, innov) = run_recursion(&spec, &[1.0, 0.0, 1.0]).unwrap();
    assert_eq!(x, vec![0.5, 0.25, 0.625]);
    assert_eq!(innov, vec![0.5, 0.0, 0.5]);
    let spec = NarSpec::new(MapId::M2, NoiseSpec::Zero, vec![1.0]);
    let (x, _) = run_recursion(&spec, &[0.0; 10]).unwrap();
    for (t, v) in x.iter().enumerate() {
        assert_eq!(*v, 2f64.powi(-(t as i32 + 1)));
    }
}

#[test]
fn m2_stays_in_unit_interval() {
    let g = gen_m2(100_000, 0.3, 9).unwrap();
    assert!(g.series.values().iter().all(|v| (0.0..=1.0).contains(v)));
    assert!(g.noise.iter().all(|&e| e == 0.0 || e == 1.0));
    assert!(gen_m2(10, 1.5, 0).is_err());
}

#[test]
fn registry_consistency() {
    let noise = NoiseSpec::uniform(-0.7, 0.7).unwrap();
    let a = gen_m1(200, &noise, 0.4, 77).unwrap();
    let b = gen_nar(&NarSpec::new(MapId::M1, noise, vec![0.4]), 200, 77).unwrap();
    assert_eq!(a.series.values(), b.series.values());
    assert_eq!(a.noise, b.noise);

    for d in 1..4 {
        let g = gen_nar(&NarSpec::new(MapId::Zero, noise, vec![0.0; d]), 50, 5).unwrap();
        assert_eq!(g.series.values(), &g.noise[..]);
    }

    let lin = NarSpec::new(MapId::Linear { coef: 0.9 }, NoiseSpec::Zero, vec![1.0]);
    let g = gen_nar(&lin, 20, 0).unwrap();
    for (t, v) in g.series.values().iter().enumerate() {
        assert!((v - 0.9f64.powi(t as i32 + 1)).abs() < 1e-14);
    }
    assert!("nope".parse::<MapId>().is_err());
    assert!("linear".parse::<MapId>().is_err());
    assert_eq!("linear:0.5".parse::<MapId>().unwrap(), MapId::Linear { coef: 0.5 });
}

#[test]
fn arx_needs_long_enough_exo() {
    let mut spec = NarSpec::new(MapId::M1Exo { gain: 1.0 }, NoiseSpec::Zero, vec![0.0]);
    assert!(gen_nar(&spec, 5, 0).is_err());
    spec.exo = Some(vec![1.0; 4]);
    assert!(gen_nar(&spec, 5, 0).is_err());
    spec.exo = Some(vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    let g = gen_nar(&spec, 5, 0).unwrap();
    assert_eq!(g.series.values()[0], 1.0);
    assert!((g.series.values()[1] - 0.5 * 1f64.sin()).abs() < 1e-15);
    let data = embed_exogenous(g.series.values(), spec.exo.as_ref().unwrap(), 1, 0).unwrap();
    assert_eq!(data.dim(), 2);
    assert_eq!(data.len(), 4);
}

#[test]
fn burn_in_drops_leading_values() {
    let noise = NoiseSpec::uniform(-0.5, 0.5).unwrap();
    let mut spec = NarSpec::new(MapId::M1, noise, vec![0.2]);
    let full = gen_nar(&spec, 30, 4).unwrap();
    spec.burn_in = 10;
    let burnt = gen_nar(&spec, 20, 4).unwrap();
    assert_eq!(burnt.series.values(), &full.series.values()[10..]);
    assert_eq!(burnt.noise, full.noise[10..].to_vec());
}

#[test]
fn embedding_examples() {
    let s = Series::inline(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let d = embed(&s, 2).unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(d.inputs().row(0), &[2.0, 1.0]);
    assert_eq!(d.inputs().row(1), &[3.0, 2.0]);
    assert_eq!(d.targets(), &[3.0, 4.0]);
    assert_eq!(embed(&s, 3).unwrap().len(), 1);
    assert!(embed(&s, 4).is_err());
    assert!(embed(&s, 0).is_err());
}

#[test]
fn embedding_d1_pairs_consecutive_values() {
    let g = gen_m1(300, &NoiseSpec::gaussian(0.0, 0.3).unwrap(), 0.1, 12).unwrap();
    let (d, innov) = embed_generated(&g, 1).unwrap();
    let v = g.series.values();
    assert_eq!(d.len(), v.len() - 1);
    for i in 0..d.len() {
        assert_eq!(d.inputs().row(i), &[v[i]]);
        assert_eq!(d.targets()[i], v[i + 1]);
        assert_eq!(innov[i], g.noise[i + 1]);
        // the denoised target is the deterministic part of the map
        assert!((d.targets()[i] - innov[i] - 0.5 * v[i].sin()).abs() < 1e-15);
    }
}

#[test]
fn noise_samplers() {
    assert!(sample_noise(&NoiseSpec::bernoulli(1.0).unwrap(), 1000, 1).unwrap().iter().all(|&v| v == 1.0));
    assert!(sample_noise(&NoiseSpec::bernoulli(0.0).unwrap(), 1000, 1).unwrap().iter().all(|&v| v == 0.0));

    let u = sample_noise(&NoiseSpec::uniform(-0.2, 0.2).unwrap(), 1_000_000, 2).unwrap();
    let (m, var) = moments(&u);
    assert!(m.abs() < 1e-3);
    assert!((var - 0.04 / 3.0).abs() <= 0.05 * 0.04 / 3.0, "var = {var}");

    let g = sample_noise(&NoiseSpec::gaussian(0.0, 0.1).unwrap(), 1_000_000, 3).unwrap();
    let (_, var) = moments(&g);
    assert!((var.sqrt() - 0.1).abs() <= 0.02 * 0.1);

    assert!(NoiseSpec::uniform(0.1, 0.1).is_err());
    assert!(NoiseSpec::bernoulli(1.5).is_err());
    assert!(NoiseSpec::gaussian(0.0, 0.0).is_err());
    assert!(sample_noise(&NoiseSpec::Uniform { low: 1.0, high: 0.0 }, 3, 0).is_err());
}

fn moments(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

#[test]
fn acf_examples() {
    let g = sample_noise(&NoiseSpec::gaussian(0.0, 1.0).unwrap(), 10_000, 8).unwrap();
    let r = acf(&g, 20).unwrap();
    assert_eq!(r[0], 1.0);
    let inside = r[1..].iter().filter(|v| v.abs() <= 3.0 / 100.0).count();
    assert!(inside >= 18, "{inside} lags inside the band");

    let alt: Vec<f64> = (0..2000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let r = acf(&alt, 1).unwrap();
    assert!((r[1] + 1.0).abs() < 1e-3);

    assert!(matches!(acf(&[2.0; 10], 3), Err(Error::DegenerateInput(_))));
    assert!(acf(&[1.0, 2.0], 2).is_err());
}

#[test]
fn csv_round_trips() {
    let g = gen_m1(25, &NoiseSpec::uniform(-0.7, 0.7).unwrap(), 0.3, 4).unwrap();
    let mut buf = Vec::new();
    write_generated_csv(&g, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("t,value,noise\n"));
    let s = read_series_csv(buf.as_slice(), SeriesOrigin::Inline).unwrap();
    assert_eq!(s.values(), g.series.values());

    let d = embed(&g.series, 2).unwrap();
    let mut buf = Vec::new();
    write_dataset_csv(&d, &mut buf).unwrap();
    assert!(String::from_utf8(buf.clone()).unwrap().starts_with("x1,x2,y\n"));
    assert_eq!(read_dataset_csv(buf.as_slice()).unwrap(), d);
}

#[test]
fn csv_errors_carry_line_numbers() {
    let bad = "t,value\n0,1.0\n1,abc\n";
    match read_series_csv(bad.as_bytes(), SeriesOrigin::Inline) {
        Err(Error::Data { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
    let gap = "t,value\n0,1.0\n2,1.0\n";
    assert!(matches!(read_series_csv(gap.as_bytes(), SeriesOrigin::Inline), Err(Error::Data { line: 3, .. })));
    assert!(read_series_csv("x,y\n".as_bytes(), SeriesOrigin::Inline).is_err());
    assert!(read_dataset_csv("x1,y\n1,2,3\n".as_bytes()).is_err());
}

proptest! {
    #[test]
    fn generation_is_reproducible(seed in any::<u64>(), n in 1usize..200, which in 0usize..3) {
        let noise = [NoiseSpec::Bernoulli { p: 0.5 }, NoiseSpec::Uniform { low: -0.2, high: 0.2 }, NoiseSpec::Gaussian { mean: 0.0, std: 0.1 }][which];
        let a = gen_m1(n, &noise, 0.5, seed).unwrap();
        let b = gen_m1(n, &noise, 0.5, seed).unwrap();
        prop_assert_eq!(a, b);
        let a = gen_m2(n, 0.5, seed).unwrap();
        prop_assert_eq!(a, gen_m2(n, 0.5, seed).unwrap());
    }

    #[test]
    fn embed_preserves_counts(values in prop::collection::vec(-5.0f64..5.0, 2..100), d in 1usize..6) {
        prop_assume!(values.len() > d);
        let data = embed_values(&values, d).unwrap();
        prop_assert_eq!(data.len(), values.len() - d);
        prop_assert_eq!(data.targets(), &values[d..]);
    }

    #[test]
    fn acf_bounded_and_shift_invariant(values in prop::collection::vec(-5.0f64..5.0, 10..200), shift in -100.0f64..100.0) {
        let max_lag = values.len() / 2;
        let Ok(a) = acf(&values, max_lag) else { return Ok(()); };
        prop_assert_eq!(a[0], 1.0);
        prop_assert!(a.iter().all(|v| (-1.0..=1.0).contains(v)));
        let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
        let b = acf(&shifted, max_lag).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}
