use fuzzsmooth::io::{cuts_csv, level_grid, membership_csv, membership_polyline, svg_plot, FuzzyDocument};
use fuzzsmooth::smoother::parabola;
use fuzzsmooth::{convolve, fixtures, FuzzyNum};

#[test]
fn rendered_documents_are_fixed_points() {
    for (name, text) in fixtures::ALL {
        let doc = FuzzyDocument::parse(text).unwrap();
        let canonical = doc.render();
        let again = FuzzyDocument::parse(&canonical).unwrap();
        assert_eq!(again, doc, "{name}");
        assert_eq!(again.render(), canonical, "{name}");
    }
}

#[test]
fn cut_documents_of_results_round_trip() {
    let u = fixtures::load("kinked").unwrap();
    let v = convolve(&u, &parabola(1.0).unwrap());
    let doc = FuzzyDocument::from_fuzzy("kinked_smoothed", Some("kinked plus a parabola"), &v);
    let text = doc.render();
    let back = FuzzyDocument::parse(&text).unwrap();
    assert_eq!(back.render(), text);
    assert_eq!(back.to_fuzzy().unwrap(), v);
}

#[test]
fn overlapping_levels_fail_to_parse() {
    let text = "name: bad\nrepr: cuts\nleft [0, 0.6] inc: a\nleft [0.5, 1] inc: a\nright [0, 1] dec: 2 - a\n";
    let err = FuzzyDocument::parse(text).unwrap_err();
    assert_eq!(err.kind(), "parse");
}

#[test]
fn invalid_numbers_name_the_clause() {
    let text = "name: bad\nrepr: cuts\nleft [0, 1] dec: 1 - a\nright [0, 1] dec: 2 - a\n";
    let err = FuzzyDocument::parse(text).unwrap().to_fuzzy().unwrap_err();
    assert!(err.to_string().contains("(i)"), "{err}");
}

#[test]
fn csv_rows_follow_the_grid() {
    let w = parabola(1.0).unwrap();
    let csv = cuts_csv(&w, &[0.0, 0.5, 1.0]).unwrap();
    assert_eq!(
        csv,
        "alpha,lo,hi\n0,-1,1\n0.5,-0.7071067811865476,0.7071067811865476\n1,0,0\n"
    );
    let point = fixtures::load("point").unwrap();
    for row in cuts_csv(&point, &level_grid(5)).unwrap().lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!((cols[1], cols[2]), ("0", "0"));
    }
    let m = membership_csv(&w, &[-1.0, 0.0, 0.5]);
    assert_eq!(m, "x,mu\n-1,0\n0,1\n0.5,0.75\n");
}

#[test]
fn csv_bytes_are_deterministic() {
    let u = fixtures::load("plateaus").unwrap();
    let a = cuts_csv(&u, &level_grid(1025)).unwrap();
    let b = cuts_csv(&fixtures::load("plateaus").unwrap(), &level_grid(1025)).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains('\r'));
}

#[test]
fn svg_has_one_dense_polyline_per_number() {
    let u = fixtures::load("jump").unwrap();
    let v = convolve(&u, &parabola(0.5).unwrap());
    let svg = svg_plot(&[("u", &u), ("u smoothed", &v)]);
    assert_eq!(svg.matches("<polyline").count(), 2);
    let s = u.support();
    let pts = membership_polyline(&u, s.lo, s.hi, 512);
    assert!(pts.len() >= 512);
    for b in u.breakpoint_abscissae() {
        assert!(pts.iter().any(|p| p.0 == b), "breakpoint {b} missing");
    }
    // a jump shows up as stacked points at one abscissa
    let stacked = pts.windows(2).filter(|w| w[0].0 == w[1].0).count();
    assert!(stacked > 0);
}

#[test]
fn membership_pieces_match_cut_form() {
    let doc = FuzzyDocument::parse(fixtures::text("triangle").unwrap()).unwrap();
    let u: FuzzyNum = doc.to_fuzzy().unwrap();
    for (x, m) in [(-1.0, 0.0), (-0.5, 0.5), (0.0, 1.0), (0.25, 0.75), (1.0, 0.0)] {
        assert!((u.membership(x) - m).abs() < 1e-15);
    }
}
