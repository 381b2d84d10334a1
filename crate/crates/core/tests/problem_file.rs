mod common;

use common::{fig1, fig1_text};
use monouf::infer::{InferError, Sign};
use monouf::problem_file::{parse_problem, write_problem};
use monouf::Value;

const HEADER: &str = "version = 1\n\n[[variables]]\nname = \"v\"\ndomain = \"bool\"\n";

#[test]
fn fig1_shape() {
    let p = fig1();
    assert_eq!(p.variables().len(), 3);
    assert_eq!(p.regulations().len(), 6);
    assert_eq!(p.observations().len(), 3);
    let b = p.variable_index("b").unwrap();
    let a = p.variable_index("a").unwrap();
    let r = p.regulation(b, a).unwrap();
    assert_eq!(r.sign, Sign::AntiMonotone);
    assert!(r.essential);
    assert_eq!(p.observations()[2].assignments[&b], Value::Int(2));
}

#[test]
fn boolean_value_out_of_domain() {
    let text = format!("{HEADER}\n[[observations]]\nname = \"F\"\nvalues = {{ v = 5 }}\n");
    let e = parse_problem(&text).unwrap_err();
    assert!(
        matches!(e.cause, Some(InferError::DomainViolation { .. })),
        "{e}"
    );
    assert_eq!(e.position, Some((9, 10)));
    assert!(e.to_string().starts_with("line 9, column 10: "));
}

#[test]
fn boolean_values_accept_bits() {
    let text = format!("{HEADER}\n[[observations]]\nname = \"F\"\nvalues = {{ v = 1 }}\n");
    let p = parse_problem(&text).unwrap();
    assert_eq!(p.observations()[0].assignments[&0], Value::Bool(true));
}

#[test]
fn undeclared_regulation_target() {
    let text = format!("{HEADER}\n[[regulations]]\nsource = \"v\"\ntarget = \"w\"\n");
    let e = parse_problem(&text).unwrap_err();
    assert_eq!(e.cause, Some(InferError::UnknownVariable("w".into())));
    assert_eq!(e.position, Some((9, 10)));
}

#[test]
fn unknown_fields_rejected() {
    let text = format!("{HEADER}colour = \"red\"\n");
    let e = parse_problem(&text).unwrap_err();
    assert!(e.message.contains("colour"), "{e}");
    assert!(e.position.is_some());
    let text = "version = 1\nextra = 3\n";
    assert!(parse_problem(text).is_err());
}

#[test]
fn duplicate_regulations_rejected() {
    let reg = "\n[[regulations]]\nsource = \"v\"\ntarget = \"v\"\nsign = \"monotone\"\n";
    let text = format!("{HEADER}{reg}{reg}");
    let e = parse_problem(&text).unwrap_err();
    assert!(
        matches!(e.cause, Some(InferError::DuplicateRegulation { .. })),
        "{e}"
    );
    assert_eq!(e.position.map(|p| p.0), Some(13));
}

#[test]
fn other_rejections() {
    assert!(parse_problem("version = 2\n")
        .unwrap_err()
        .message
        .contains("version"));
    let bad_sign =
        format!("{HEADER}\n[[regulations]]\nsource = \"v\"\ntarget = \"v\"\nsign = \"up\"\n");
    assert!(parse_problem(&bad_sign)
        .unwrap_err()
        .message
        .contains("unknown sign"));
    let bad_domain = "version = 1\n[[variables]]\nname = \"x\"\ndomain = \"1..3\"\n";
    assert!(parse_problem(bad_domain).is_err());
    let dup = format!("{HEADER}{}", &HEADER[12..]);
    assert!(matches!(
        parse_problem(&dup).unwrap_err().cause,
        Some(InferError::DuplicateVariable(_))
    ));
    let empty = format!("{HEADER}\n[[observations]]\nname = \"F\"\nvalues = {{}}\n");
    assert!(matches!(
        parse_problem(&empty).unwrap_err().cause,
        Some(InferError::EmptyObservation(_))
    ));
    let syntax = parse_problem("version = \n").unwrap_err();
    assert_eq!(syntax.position.map(|p| p.0), Some(1));
}

#[test]
fn write_parse_round_trip() {
    let p = fig1();
    let text = write_problem(&p);
    let q = parse_problem(&text).unwrap();
    assert_eq!(write_problem(&q), text);
    assert_eq!(q.regulations(), p.regulations());
    assert_eq!(q.observations(), p.observations());
    assert!(fig1_text().contains("[[observations]]"));
}
