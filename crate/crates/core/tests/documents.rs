// SPDX-License-Identifier: Apache-2.0

use facility_compat::instances::{generate, parse, serialize, Family, FamilySpec, ParseError};
use facility_compat::metric_core::ClientCost;
use facility_compat::voting::{induced_profile, OrdinalProfile};

#[test]
fn every_family_round_trips() {
    for family in Family::ALL {
        let mut spec = FamilySpec::new(family, 40).with_seed(11);
        if family == Family::Fig4 {
            spec = spec.with_k(3);
        }
        let inst = generate(&spec).unwrap();
        let text = serialize(&inst);
        assert!(text.ends_with('\n'));
        let back = parse(&text).unwrap();
        assert_eq!(back, inst, "{family}");
        assert_eq!(serialize(&back), text);
    }
}

#[test]
fn bad_metrics_are_rejected() {
    let wrap = |metric: &str| {
        format!(
            r#"{{"metric":{metric},"clients":[{{"point":0,"weight":1}}],"facilities":[{{"point":1,"mult":1}}],"k":1}}"#
        )
    };
    let negative = wrap(r#"{"type":"matrix","d":[[0,-1],[-1,0]]}"#);
    assert!(matches!(parse(&negative), Err(ParseError::Metric(_))));
    let asymmetric = wrap(r#"{"type":"matrix","d":[[0,1],[2,0]]}"#);
    assert!(matches!(parse(&asymmetric), Err(ParseError::NotMetric(_))));
    let nan = wrap(r#"{"type":"matrix","d":[[0,NaN],[NaN,0]]}"#);
    assert!(matches!(parse(&nan), Err(ParseError::Syntax { .. })));
    let triangle = wrap(r#"{"type":"matrix","d":[[0,1,5],[1,0,1],[5,1,0]]}"#);
    assert!(matches!(parse(&triangle), Err(ParseError::NotMetric(_))));
}

#[test]
fn bad_instances_are_rejected() {
    let euclid = r#"{"type":"euclidean","dim":1,"coords":[[0],[1]]}"#;
    let out_of_range = format!(
        r#"{{"metric":{euclid},"clients":[{{"point":5,"weight":1}}],"facilities":[{{"point":1,"mult":1}}],"k":1}}"#
    );
    assert!(matches!(parse(&out_of_range), Err(ParseError::Instance(_))));
    let zero_weight = format!(
        r#"{{"metric":{euclid},"clients":[{{"point":0,"weight":0}}],"facilities":[{{"point":1,"mult":1}}],"k":1}}"#
    );
    assert!(parse(&zero_weight).is_err());
    let big_k = format!(
        r#"{{"metric":{euclid},"clients":[{{"point":0,"weight":1}}],"facilities":[{{"point":1,"mult":1}}],"k":2}}"#
    );
    assert!(matches!(parse(&big_k), Err(ParseError::Instance(_))));
    let extra = format!(
        r#"{{"metric":{euclid},"clients":[{{"point":0,"weight":1,"x":1}}],"facilities":[{{"point":1,"mult":1}}],"k":1}}"#
    );
    assert!(matches!(parse(&extra), Err(ParseError::Syntax { .. })));
}

#[test]
fn induced_profile_document_round_trips() {
    let inst = generate(&FamilySpec::new(Family::Fig5, 2)).unwrap();
    let p = induced_profile(&inst, ClientCost::Max).unwrap();
    let back = OrdinalProfile::from_json(&p.to_json()).unwrap();
    assert_eq!(back, p);
    assert!(OrdinalProfile::from_json(r#"{"committees":[[0]],"rankings":[[1]]}"#).is_err());
}
