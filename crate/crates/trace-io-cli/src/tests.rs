use crate::format::{parse_trace, parse_trace_events, serialize_trace, ParseError, HEADER};
use exec_core::Op;
use generators::{gen_litmus, gen_random, GenParams, LITMUS_NAMES};

#[test]
fn round_trip_litmus_byte_identical() {
    for name in LITMUS_NAMES {
        let x = gen_litmus(name).unwrap();
        let text = serialize_trace(&x);
        let parsed = parse_trace(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(serialize_trace(&parsed), text, "{name}");
    }
}

#[test]
fn round_trip_random_1000() {
    for seed in 0..1000 {
        let x = gen_random(&GenParams {
            events: 24,
            threads: 3,
            locs: 3,
            rmw_prob: 0.3,
            fence_prob: 0.15,
            seed,
            max_writes_per_loc: None,
        });
        let text = serialize_trace(&x);
        let parsed = parse_trace(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(serialize_trace(&parsed), text, "seed {seed}");
    }
}

#[test]
fn empty_execution_is_header_only() {
    let x = parse_trace("mcck-trace v1\n").unwrap();
    assert_eq!(x.num_events(), 0);
    assert_eq!(serialize_trace(&x), format!("{HEADER}\n"));
}

#[test]
fn comments_and_blank_lines_ignored() {
    let text = "\n# a trace\nmcck-trace v1\n\nthread 0\nw x rel id=1 # the write\n\n# end\n";
    let x = parse_trace(text).unwrap();
    assert_eq!(x.num_events(), 1);
    assert_eq!(x.event(1).op, Op::Write);
}

#[test]
fn missing_header_rejected() {
    let err = parse_trace("thread 0\nw x rel id=1\n").unwrap_err();
    assert!(matches!(err, ParseError::Syntax { line: 1, .. }), "{err}");
}

#[test]
fn dangling_rf_is_a_validation_error() {
    let text = "mcck-trace v1\nthread 0\nr x acq id=1 from=7\n";
    let err = parse_trace(text).unwrap_err();
    assert!(matches!(err, ParseError::Invalid(_)), "{err}");
}

#[test]
fn sparse_thread_ids_rejected() {
    let text = "mcck-trace v1\nthread 0\nw x rel id=1\nthread 2\nr x acq id=2 from=1\n";
    let err = parse_trace(text).unwrap_err();
    assert!(matches!(err, ParseError::Syntax { .. }), "{err}");
}

#[test]
fn bad_order_reports_line_number() {
    let text = "mcck-trace v1\nthread 0\nw x foo id=1\n";
    match parse_trace(text).unwrap_err() {
        ParseError::Syntax { line, msg } => {
            assert_eq!(line, 3);
            assert!(msg.contains("memory order"), "{msg}");
        }
        other => panic!("{other}"),
    }
}

#[test]
fn fig5_fixture_parses_with_mixed_modes() {
    let x = gen_litmus("fig5").unwrap();
    let text = serialize_trace(&x);
    let (events, k) = parse_trace_events(&text).unwrap();
    assert_eq!(k, 4);
    assert_eq!(events.len(), 7);
    let r7 = events.iter().find(|e| e.spec.id == 7).unwrap();
    assert_eq!(r7.from, Some(1));
    let parsed = parse_trace(&text).unwrap();
    assert_eq!(parsed.event(3).ord, exec_core::MemoryOrder::Rel);
    assert_eq!(parsed.event(4).op, Op::Rmw);
}
