use frontier_dyn::panel_data::{
    generate_synthetic, load_dataset, parse_schema, read_csv, DataError, GeneratorSpec,
    PanelDataset, Variable, VariableRole,
};
use proptest::prelude::*;

fn csv_bytes(d: &PanelDataset) -> Vec<u8> {
    let mut out = Vec::new();
    d.write_csv(&mut out).unwrap();
    out
}

#[test]
fn bank_schema_shape() {
    let data = generate_synthetic(&GeneratorSpec::bank_ratios(531, 1)).unwrap();
    assert_eq!((data.n_dmus(), data.n_periods()), (531, 3));
    assert_eq!(data.role_count(VariableRole::Input), 2);
    assert_eq!(data.role_count(VariableRole::Output), 1);
    assert_eq!(data.role_count(VariableRole::GoodLink), 1);
    assert_eq!(data.role_count(VariableRole::BadLink), 1);
    let text = String::from_utf8(csv_bytes(&data)).unwrap();
    assert_eq!(text.lines().count(), 1 + 7965);
    for j in 0..531 {
        for t in 0..3 {
            assert!((0.0..=0.0520).contains(&data.value(j, t, 0)));
        }
    }
}

#[test]
fn generator_is_deterministic() {
    let spec = GeneratorSpec::bank_ratios(40, 7);
    let a = csv_bytes(&generate_synthetic(&spec).unwrap());
    let b = csv_bytes(&generate_synthetic(&spec).unwrap());
    assert_eq!(a, b);
}

#[test]
fn degenerate_interval_is_constant() {
    let mut spec = GeneratorSpec::bank_ratios(10, 3);
    spec.variables[2].min = 0.25;
    spec.variables[2].max = 0.25;
    let d = generate_synthetic(&spec).unwrap();
    for j in 0..10 {
        for t in 0..3 {
            assert_eq!(d.value(j, t, 2), 0.25);
        }
    }
}

#[test]
fn load_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let schema = dir.path().join("s.txt");
    std::fs::write(&schema, "# roles\na=input\nb=output\n").unwrap();
    std::fs::write(
        &data,
        "dmu,period,variable,value\nd1,p1,a,1.0\nd1,p1,b,1.0\n",
    )
    .unwrap();
    let d = load_dataset(&data, &schema).unwrap();
    assert_eq!((d.n_dmus(), d.n_periods()), (1, 1));

    std::fs::write(&data, "dmu,period,variable,value\nd1,p1,a,1.0\n").unwrap();
    match load_dataset(&data, &schema) {
        Err(DataError::MissingCell {
            dmu,
            period,
            variable,
        }) => {
            assert_eq!(
                (dmu.as_str(), period.as_str(), variable.as_str()),
                ("d1", "p1", "b")
            )
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn each_malformed_input_has_its_error() {
    let vars = parse_schema("a=input\nb=output").unwrap();
    let head = "dmu,period,variable,value\n";
    type Case = (&'static str, fn(&DataError) -> bool);
    let cases: [Case; 4] = [
        ("d,p,c,1\n", |e| matches!(e, DataError::UnknownVariable(_))),
        ("d,p,a,-1\nd,p,b,1\n", |e| {
            matches!(e, DataError::NegativeValue { .. })
        }),
        ("d,p,a,1\nd,p,a,2\nd,p,b,1\n", |e| {
            matches!(e, DataError::DuplicateTriple { .. })
        }),
        ("d,p,a,x\n", |e| matches!(e, DataError::BadValue { .. })),
    ];
    for (body, check) in cases {
        let err = read_csv(format!("{head}{body}").as_bytes(), vars.clone()).unwrap_err();
        assert!(check(&err), "{body:?} gave {err:?}");
    }
    assert!(matches!(
        parse_schema("a=input"),
        Err(DataError::NoInputOrNoOutput)
    ));
    assert!(matches!(
        parse_schema("a=sideways\nb=output"),
        Err(DataError::Schema { line: 1, .. })
    ));
}

proptest! {
    #[test]
    fn csv_round_trip(values in prop::collection::vec(0.0f64..1e6, 12)) {
        let d = PanelDataset::new(
            vec!["x".into(), "y".into()],
            vec!["2018".into(), "2019".into()],
            vec![
                Variable::new("in", VariableRole::Input),
                Variable::new("link", VariableRole::GoodLink),
                Variable::new("out", VariableRole::Output),
            ],
            values,
        ).unwrap();
        let first = csv_bytes(&d);
        let vars = d.variables().to_vec();
        let back = read_csv(first.as_slice(), vars).unwrap();
        prop_assert_eq!(&csv_bytes(&back), &first);
        for j in 0..2 { for t in 0..2 { for v in 0..3 {
            let (a, b) = (d.value(j, t, v), back.value(j, t, v));
            prop_assert!((a - b).abs() <= 1e-11 * a.abs().max(1e-300));
        }}}
    }
}
