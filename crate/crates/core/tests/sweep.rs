use dpplab::lab::{classify_hyperuniformity, parse_config, run_sweep, write_report, Hyperuniformity};

#[test]
fn ginibre_disk_sweep_matches_series_values() {
    let cfg = parse_config("kernel = ginibre\ndomain = disk:1\nL_grid = 2, 3, 4, 5, 6, 7, 8\n").unwrap();
    let report = run_sweep(&cfg).unwrap();
    // mpmath sums over P(j+1, πL²)
    for (l, v, s) in [(2.0, 1.98997667495209, 6.36579509303418), (8.0, 7.99751204267815, 25.6047582142137)] {
        let r = report.records.iter().find(|r| r.l == l).unwrap();
        assert!((r.variance - v).abs() < 1e-9, "L={l}: {}", r.variance);
        assert!((r.entropy - s).abs() < 1e-9, "L={l}: {}", r.entropy);
    }
    let fits = report.fits.as_ref().unwrap();
    assert!(fits.area_law_holds && fits.area_law_spread < 1e-3);
    assert_eq!(fits.classification.class, Hyperuniformity::ClassOne);
    assert!((fits.variance_exponent - 1.0).abs() < 0.01);
    let top: Vec<f64> = report.records[3..].iter().map(|r| r.v_over_perimeter).collect();
    let spread = dpplab::lab::relative_spread(&top);
    assert!(spread < 0.05, "{spread}");
    assert!((report.records[6].v_over_perimeter - 0.15910544675).abs() < 1e-9);
}

#[test]
fn landau_one_sweep_regression() {
    let cfg = parse_config("kernel = landau:1\ndomain = disk:1\nL_grid = 4, 5, 6, 7, 8\n").unwrap();
    let report = run_sweep(&cfg).unwrap();
    assert_eq!(classify_hyperuniformity(&report).class, Hyperuniformity::ClassOne);
    let last = report.records.last().unwrap();
    assert!((last.s_over_perimeter - 0.83926490614).abs() < 1e-8, "{}", last.s_over_perimeter);
    assert!((last.s_over_v - 3.01583667953).abs() < 1e-8, "{}", last.s_over_v);
}

#[test]
fn reports_are_byte_identical() {
    let text = "kernel = landau:2\ndomain = rect:1x1\nL_grid = 1, 1.5, 2\nquad_order = 10\n";
    let emit = || {
        let mut buf = Vec::new();
        write_report(&run_sweep(&parse_config(text).unwrap()).unwrap(), &mut buf).unwrap();
        buf
    };
    assert_eq!(emit(), emit());
}

#[test]
fn rectangle_sweep_uses_dense_solver() {
    let cfg = parse_config("kernel = ginibre\ndomain = rect:1x1\nL_grid = 1, 1.5, 2, 2.5\nquad_order = 12\n").unwrap();
    let report = run_sweep(&cfg).unwrap();
    assert_eq!(report.records.len(), 4);
    for r in &report.records {
        assert!((r.expected_count - r.area).abs() < 1e-9 * r.area);
    }
    assert!(report.fits.is_some());
}
