use clearfom_core::*;
use proptest::prelude::*;

fn factor() -> impl Strategy<Value = f64> {
    // log-uniform over the magnitudes the models produce
    (-15.0f64..12.0).prop_map(|e| 10f64.powf(e))
}

fn link_factors_strategy() -> impl Strategy<Value = ClearFactors> {
    (factor(), factor(), factor(), factor(), factor()).prop_map(|(c, l, e, a, r)| ClearFactors {
        capability_bps: c,
        latency_s: l,
        energy_j_per_bit: e,
        amount_value: a,
        amount_dim: AmountDim::AreaM2,
        resistance_usd: r,
    })
}

fn weights_strategy() -> impl Strategy<Value = WeightVector> {
    (0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0).prop_map(|(c, l, e, a, r)| WeightVector {
        capability: c,
        latency: l,
        energy: e,
        amount: a,
        resistance: r,
    })
}

fn clear(f: &ClearFactors, w: &WeightVector) -> f64 {
    compute_clear(f, w, HierarchyLevel::Link).unwrap().value()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn electrical() -> TechnologyParams {
    TechnologyParams {
        label: "electrical".into(),
        kind: LinkKind::Electrical,
        channel: ChannelSpec {
            b0: 1e10,
            year_ref: 2016.0,
            bandwidth_growth_per_year: 1.1,
            snr0: 1e3,
            rolloff_length: 1e-4,
            attenuation_db_per_m: 0.0,
        },
        energy: KoomeyParams { e_ref: 1e-12, year_ref: 2016.0, halving_period: 1.57, temperature: 300.0 },
        cost: ExperienceCurveParams {
            c_ref: 1e-6,
            year_ref: 2016.0,
            volume_growth_per_year: 1.5,
            learning_exponent: 0.15,
            overhead_onset_year: Some(2018.0),
            overhead_coeff: 2e-8,
            overhead_power: 2.0,
        },
        parallelism: Some(ParallelismParams { onset_year: 2006.0, core_doubling_period: 2.0, utilization_cap: 0.9 }),
        device_pitch: 1e-7,
        latency_per_length: 1e-7,
        latency_fixed: 1e-11,
    }
}

fn hybrid() -> TechnologyParams {
    TechnologyParams {
        label: "hybrid".into(),
        kind: LinkKind::HybridPhotonicPlasmonic,
        channel: ChannelSpec {
            b0: 1e11,
            year_ref: 2016.0,
            bandwidth_growth_per_year: 1.2,
            snr0: 1e4,
            rolloff_length: 1.0,
            attenuation_db_per_m: 10.0,
        },
        energy: KoomeyParams { e_ref: 1e-13, year_ref: 2016.0, halving_period: 1.57, temperature: 300.0 },
        cost: ExperienceCurveParams {
            c_ref: 10.0,
            year_ref: 2016.0,
            volume_growth_per_year: 2.0,
            learning_exponent: 0.32,
            overhead_onset_year: None,
            overhead_coeff: 0.0,
            overhead_power: 1.0,
        },
        parallelism: None,
        device_pitch: 1e-6,
        latency_per_length: 1e-8,
        latency_fixed: 3e-11,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn homogeneity(f in link_factors_strategy(), k in factor()) {
        let w = WeightVector::ONES;
        let base = clear(&f, &w);
        let scaled_c = ClearFactors { capability_bps: f.capability_bps * k, ..f };
        prop_assert!(rel(clear(&scaled_c, &w), base * k) < 1e-12);
        let scaled_e = ClearFactors { energy_j_per_bit: f.energy_j_per_bit * k, ..f };
        prop_assert!(rel(clear(&scaled_e, &w), base / k) < 1e-12);
        let scaled_r = ClearFactors { resistance_usd: f.resistance_usd * k, ..f };
        prop_assert!(rel(clear(&scaled_r, &w), base / k) < 1e-12);
    }

    #[test]
    fn monotonicity(f in link_factors_strategy(), w in weights_strategy(), k in 1.01f64..100.0) {
        let base = clear(&f, &w);
        let up_c = ClearFactors { capability_bps: f.capability_bps * k, ..f };
        let up_l = ClearFactors { latency_s: f.latency_s * k, ..f };
        let up_e = ClearFactors { energy_j_per_bit: f.energy_j_per_bit * k, ..f };
        let up_a = ClearFactors { amount_value: f.amount_value * k, ..f };
        let up_r = ClearFactors { resistance_usd: f.resistance_usd * k, ..f };
        prop_assert!(clear(&up_c, &w) > base);
        for down in [up_l, up_e, up_a, up_r] {
            prop_assert!(clear(&down, &w) < base);
        }
    }

    #[test]
    fn weight_identity(f in link_factors_strategy()) {
        let explicit = WeightVector::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let a = compute_clear(&f, &explicit, HierarchyLevel::Link).unwrap();
        let b = compute_clear(&f, &WeightVector::default(), HierarchyLevel::Link).unwrap();
        prop_assert_eq!(a.value().to_bits(), b.value().to_bits());
        let direct = f.capability_bps
            / (f.latency_s * f.energy_j_per_bit * f.amount_value * f.resistance_usd);
        prop_assert!(rel(a.value(), direct) < 1e-12);
    }

    #[test]
    fn rank_invariance(fs in proptest::collection::vec(link_factors_strategy(), 1..6),
                       which in 0usize..5, k in factor(), w in weights_strategy()) {
        let options: Vec<(String, ClearFactors)> =
            fs.iter().enumerate().map(|(i, f)| (format!("opt{i}"), *f)).collect();
        let scaled: Vec<(String, ClearFactors)> = options.iter().map(|(l, f)| {
            let mut f = *f;
            match which {
                0 => f.capability_bps *= k,
                1 => f.latency_s *= k,
                2 => f.energy_j_per_bit *= k,
                3 => f.amount_value *= k,
                _ => f.resistance_usd *= k,
            }
            (l.clone(), f)
        }).collect();
        let a: Vec<String> = rank_options(&options, &w, HierarchyLevel::Link).unwrap().into_iter().map(|x| x.0).collect();
        let b: Vec<String> = rank_options(&scaled, &w, HierarchyLevel::Link).unwrap().into_iter().map(|x| x.0).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cross_hierarchy_always_rejected(c in factor(), w in weights_strategy()) {
        let dev = device_clear(c, 1.0, 1.0, 1.0, 1.0, &w).unwrap();
        let sys = compute_clear(&ClearFactors {
            capability_bps: c, latency_s: 1.0, energy_j_per_bit: 1.0,
            amount_value: 1.0, amount_dim: AmountDim::VolumeM3, resistance_usd: 1.0,
        }, &w, HierarchyLevel::System).unwrap();
        prop_assert_eq!(dev.try_cmp(&sys), Err(Error::IncomparableFom));
        prop_assert_eq!(sys.try_cmp(&dev), Err(Error::IncomparableFom));
    }
}

proptest! {
    #[test]
    fn landauer_clamp(year in 1940.0f64..2200.0, e_exp in -18.0f64..-9.0,
                      period in 0.5f64..5.0, t in 1.0f64..1000.0) {
        let p = KoomeyParams { e_ref: 10f64.powf(e_exp), year_ref: 2016.0, halving_period: period, temperature: t };
        prop_assert!(energy_per_bit(year, &p).unwrap() >= landauer_limit(t).unwrap());
        prop_assert_eq!(energy_per_bit(5000.0, &p).unwrap(), landauer_limit(t).unwrap());
    }

    #[test]
    fn shannon_monotone(b in 1.0f64..1e12, snr in 1e-6f64..1e6, k in 1.001f64..10.0) {
        let c = shannon_capacity(b, snr).unwrap();
        prop_assert!(shannon_capacity(b * k, snr).unwrap() > c);
        prop_assert!(shannon_capacity(b, snr * k).unwrap() > c);
        prop_assert_eq!(shannon_capacity(b, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn link_length_dependence(len in 1e-6f64..0.5, k in 1.01f64..2.0, year in 2000.0f64..2040.0) {
        let e = electrical();
        prop_assert!(link_capability(&e, len * k, year).unwrap() < link_capability(&e, len, year).unwrap());
        let h = hybrid();
        prop_assert!(link_capability(&h, len * k, year).unwrap() <= link_capability(&h, len, year).unwrap());
        let mut lossless = hybrid();
        lossless.channel.attenuation_db_per_m = 0.0;
        prop_assert_eq!(link_capability(&lossless, len * k, year).unwrap(), link_capability(&lossless, len, year).unwrap());
    }

    #[test]
    fn hybrid_cost_declines(year in 1950.0f64..2100.0, dt in 0.01f64..10.0) {
        let h = hybrid();
        prop_assert!(cost_resistance(&h, year + dt).unwrap() < cost_resistance(&h, year).unwrap());
    }

    #[test]
    fn parallelism_shape(year in 1950.0f64..2300.0, dt in 0.0f64..20.0,
                         period in 0.5f64..5.0, cap in 0.01f64..0.99) {
        let p = ParallelismParams { onset_year: 2006.0, core_doubling_period: period, utilization_cap: cap };
        let a = parallelism_factor(year, &p).unwrap();
        let b = parallelism_factor(year + dt, &p).unwrap();
        prop_assert!(b >= a);
        prop_assert!(a >= 1.0);
        prop_assert!(a <= 1.0 / (1.0 - cap) * (1.0 + 1e-12));
        if year < 2006.0 { prop_assert_eq!(a, 1.0); }
    }

    #[test]
    fn fit_exact_on_geometric(start in 1900.0f64..2000.0, slope in 0.05f64..2.0,
                              scale in 1e-3f64..1e3, n in 2usize..80) {
        let s: Vec<(f64, f64)> = (0..n).map(|i| (start + i as f64, scale * (slope * i as f64).exp2())).collect();
        let fit = fit_trend(&s).unwrap();
        prop_assert!(rel(fit.slope_log2_per_year, slope) < 1e-9);
        prop_assert!((fit.r_squared - 1.0).abs() < 1e-9);
        for &(y, v) in &s {
            prop_assert!(rel(fit.extrapolate(y), v) < 1e-9);
        }
    }

    #[test]
    fn scaling_changes_only_intercept(ys in proptest::collection::vec(0.1f64..1e6, 3..30), k in 1e-3f64..1e3) {
        let s: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &v)| (1950.0 + i as f64, v)).collect();
        let scaled: Vec<(f64, f64)> = s.iter().map(|&(y, v)| (y, v * k)).collect();
        let a = fit_trend(&s).unwrap();
        let b = fit_trend(&scaled).unwrap();
        prop_assert!((a.slope_log2_per_year - b.slope_log2_per_year).abs() < 1e-9);
        prop_assert!((b.intercept_log2 - a.intercept_log2 - k.log2()).abs() < 1e-6);
    }

    #[test]
    fn no_deviation_on_reference(start in 1900.0f64..2000.0, slope in 0.1f64..2.0, n in 5usize..60, v0 in 1e-3f64..1e3) {
        let s: Vec<(f64, f64)> = (0..n).map(|i| (start + i as f64, v0 * (slope * i as f64).exp2())).collect();
        let cfg = DeviationReport { reference_slope_log2_per_year: slope, ..Default::default() };
        prop_assert_eq!(detect_deviation(&s, cfg).unwrap().deviation_year, None);
    }

    #[test]
    fn break_even_symmetric(root_exp in -5.5f64..-0.5, pa in 0.1f64..3.0, pb in 0.1f64..3.0, c in 1e-3f64..1e3) {
        // a rises and b falls through a common value at the root
        let root = 10f64.powf(root_exp);
        let a = move |l: f64| Ok(c * (l / root).powf(pa));
        let b = move |l: f64| Ok(c * (root / l).powf(pb));
        let range = LengthRange::default();
        let ab = break_even_length(a, b, &range, 1e-3).unwrap().length_m().unwrap();
        let ba = break_even_length(b, a, &range, 1e-3).unwrap().length_m().unwrap();
        prop_assert!(rel(ab, ba) <= 1e-3);
        prop_assert!(rel(ab, root) <= 1e-3);
    }

    #[test]
    fn dominance_swaps(c in 1e-3f64..1e3, k in 1.01f64..10.0) {
        let range = LengthRange::default();
        let hi = move |_l: f64| Ok(c * k);
        let lo = move |_l: f64| Ok(c);
        prop_assert_eq!(break_even_length(hi, lo, &range, 1e-3).unwrap(), CrossingResult::NoCrossing { dominant: Side::A });
        prop_assert_eq!(break_even_length(lo, hi, &range, 1e-3).unwrap(), CrossingResult::NoCrossing { dominant: Side::B });
    }

    #[test]
    fn prescan_density_does_not_move_root(root_exp in -5.5f64..-0.5, n in 2usize..400) {
        let root = 10f64.powf(root_exp);
        let a = move |_l: f64| Ok(1.0);
        let b = move |l: f64| Ok(root / l);
        let coarse = break_even_length(a, b, &LengthRange { n_points: n, ..Default::default() }, 1e-3).unwrap();
        let fine = break_even_length(a, b, &LengthRange::default(), 1e-3).unwrap();
        prop_assert!(rel(coarse.length_m().unwrap(), fine.length_m().unwrap()) <= 2e-3);
    }

    #[test]
    fn battery_monotone(b1 in 0.0f64..1.0, b2 in 0.0f64..1.0, gain in 0.0f64..5.0) {
        let policy = WeightPolicy { energy_gain: gain, ..Default::default() };
        let (lo, hi) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
        let w_lo = weights_from_context(&OperatingContext { battery_fraction: lo, ..Default::default() }, &policy).unwrap();
        let w_hi = weights_from_context(&OperatingContext { battery_fraction: hi, ..Default::default() }, &policy).unwrap();
        prop_assert!(w_lo.energy >= w_hi.energy);
        prop_assert!(w_hi.energy >= policy.base.energy);
    }

    #[test]
    fn selection_invariant_under_resistance_scaling(fs in proptest::collection::vec(link_factors_strategy(), 1..6),
                                                    k in factor(), battery in 0.0f64..1.0, pressure in 0.0f64..1.0) {
        let options: Vec<(String, ClearFactors)> = fs.iter().enumerate().map(|(i, f)| (format!("t{i}"), *f)).collect();
        let scaled: Vec<(String, ClearFactors)> = options.iter()
            .map(|(l, f)| (l.clone(), ClearFactors { resistance_usd: f.resistance_usd * k, ..*f }))
            .collect();
        let ctx = OperatingContext { battery_fraction: battery, footprint_pressure: pressure, ..Default::default() };
        let policy = WeightPolicy::default();
        let a = select_technology(&options, &ctx, &policy, HierarchyLevel::Link).unwrap();
        let b = select_technology(&scaled, &ctx, &policy, HierarchyLevel::Link).unwrap();
        prop_assert_eq!(&a.label, &b.label);

        // every option appears once and matches a standalone evaluation
        prop_assert_eq!(a.trace.len(), options.len());
        for (label, f) in &options {
            let hits: Vec<_> = a.trace.iter().filter(|(l, _)| l == label).collect();
            prop_assert_eq!(hits.len(), 1);
            prop_assert_eq!(&hits[0].1, &compute_clear(f, &a.weights, HierarchyLevel::Link).unwrap());
        }
    }

    #[test]
    fn zero_stimulus_matches_unweighted_ranking(fs in proptest::collection::vec(link_factors_strategy(), 1..6)) {
        let options: Vec<(String, ClearFactors)> = fs.iter().enumerate().map(|(i, f)| (format!("t{i}"), *f)).collect();
        let sel = select_technology(&options, &OperatingContext::default(), &WeightPolicy::default(), HierarchyLevel::Link).unwrap();
        prop_assert_eq!(sel.trace, rank_options(&options, &WeightVector::ONES, HierarchyLevel::Link).unwrap());
    }
}
