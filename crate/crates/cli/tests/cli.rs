use dehn_cli::{parse_word, run_with};
use dehn_core::words::{Gen, A, S, T};
use dehn_core::{Certificate, Word};
use proptest::prelude::*;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn dehn(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dehn").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

proptest! {
    #[test]
    fn printed_words_parse_back(syl in prop::collection::vec((0usize..3, -4i64..=4), 0..12)) {
        let gens = [A, S, T];
        let w = Word::from_syllables(syl.into_iter().filter(|&(_, e)| e != 0).map(|(g, e)| (gens[g], e)))
            .free_reduce();
        let parsed = parse_word(&w.to_string(), &gens).unwrap();
        prop_assert_eq!(parsed, w);
    }
}

#[test]
fn heisenberg_words_parse() {
    let w = parse_word("[a,b] c^-1", &[A, Gen('b'), Gen('c')]).unwrap();
    assert_eq!(w.to_string(), "a^-1 b^-1 a b c^-1");
}

#[test]
fn check_exit_codes() {
    assert_eq!(
        dehn(&["check", "--group", "gamma", "--word", "[a,a^(t^4)]"]).code,
        0
    );
    let r = dehn(&["check", "--word", "a t"]);
    assert_eq!((r.code, r.out.as_str()), (1, "not null\n"));
    assert_eq!(
        dehn(&["check", "--group", "gamma_m:3", "--word", "a^3"]).code,
        0
    );
    assert_eq!(
        dehn(&["check", "--group", "gamma", "--word", "a^3"]).code,
        1
    );
    assert_eq!(
        dehn(&["check", "--group", "heis", "--word", "[a,b] c^-1"]).code,
        0
    );
    assert_eq!(
        dehn(&["check", "--group", "gamma_bar", "--word", "[a,a^(t^2)]"]).code,
        1
    );
}

#[test]
fn errors_exit_two_with_codes() {
    let cases: [(&[&str], &str); 6] = [
        (
            &["check", "--word", "[x,y"],
            "error[syntax]: syntax error at offset 4",
        ),
        (&["check", "--word", "a b"], "error[unknown-generator]"),
        (
            &["check", "--group", "gamma_m:1", "--word", "a"],
            "error[config]",
        ),
        (&["check", "--group", "z3", "--word", "a"], "error[config]"),
        (&["check"], "error[usage]"),
        (&["verify", "--cert", "/nonexistent/cert.json"], "error[io]"),
    ];
    for (args, prefix) in cases {
        let r = dehn(args);
        assert_eq!(r.code, 2, "{args:?}");
        assert!(r.err.starts_with(prefix), "{args:?}: {}", r.err);
        assert!(r.out.is_empty());
    }
}

#[test]
fn distortion_table() {
    let r = dehn(&["distortion", "--max-n", "5"]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "n,fibonacci,lambda,mu");
    assert_eq!(lines[5], "5,5,5,0");
    assert_eq!(lines[4], "4,3,-3,0");
}

#[test]
fn growth_table_formats() {
    let r = dehn(&["growth", "--max-n", "3"]);
    assert_eq!(r.out.lines().next(), Some("n,length,lower,cost,budget"));
    assert_eq!(r.out.lines().nth(3), Some("3,16,2,54,64"));
    assert_eq!(
        dehn(&["growth", "--max-n", "0"]).out,
        "n,length,lower,cost,budget\n"
    );
    let json: serde_json::Value =
        serde_json::from_str(&dehn(&["growth", "--max-n", "2", "--format", "json"]).out).unwrap();
    assert_eq!(json[1]["cost"], "13");
    assert_eq!(json[1]["n"], 2);
    // Output is deterministic.
    assert_eq!(
        dehn(&["growth", "--max-n", "6"]).out,
        dehn(&["growth", "--max-n", "6"]).out
    );
}

#[test]
fn fill_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (group, word) in [
        ("gamma", "[a, a^(t^3)]"),
        ("gamma", "[a^(s), a^(t s^-1)]"),
        ("gamma_m:3", "a^3 [a^(t), a^(s^2)]"),
    ] {
        let path = dir.path().join("cert.json");
        let p = path.to_str().unwrap();
        let r = dehn(&["fill", "--group", group, "--word", word, "--out", p]);
        assert_eq!(r.code, 0, "{group} {word}: {}", r.err);
        assert!(r.out.contains("status: within budget"), "{}", r.out);

        let text = std::fs::read_to_string(&path).unwrap();
        let cert = Certificate::from_json(&text).unwrap();
        assert_eq!(format!("{}\n", cert.to_json()), text);

        let r = dehn(&["verify", "--cert", p]);
        assert_eq!(r.code, 0, "{}", r.out);
        assert!(r.out.contains("structural: valid"));
        assert!(r.out.contains("replay: valid"));
        let r = dehn(&["verify", "--cert", p, "--step-cap", "0"]);
        assert_eq!(r.code, 0);
        assert!(r.out.contains("replay: skipped"));
    }
}

#[test]
fn tampered_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_str().unwrap();
    assert_eq!(dehn(&["fill", "--word", "[a,a^(t^2)]", "--out", p]).code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"declared_cost\":\"13\""));

    std::fs::write(
        &path,
        text.replace("\"declared_cost\":\"13\"", "\"declared_cost\":\"12\""),
    )
    .unwrap();
    let r = dehn(&["verify", "--cert", p]);
    assert_eq!(r.code, 3);
    assert!(r.out.contains("declared cost 12"), "{}", r.out);

    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let r = dehn(&["verify", "--cert", p]);
    assert_eq!(r.code, 2);
    assert!(r.err.starts_with("error[certificate-format]"));
}

#[test]
fn fill_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    let p = p.to_str().unwrap();
    let r = dehn(&["fill", "--word", "a", "--out", p]);
    assert_eq!(r.code, 1);
    assert!(r.err.starts_with("error[not-null]"));
    let r = dehn(&[
        "fill",
        "--group",
        "heis",
        "--word",
        "[a,b] c^-1",
        "--out",
        p,
    ]);
    assert_eq!(r.code, 2);
}

#[test]
fn oracle_areas() {
    assert_eq!(dehn(&["oracle", "--word", "[a,a^(t)]"]).out, "area: 1\n");
    assert_eq!(
        dehn(&["oracle", "--group", "heis", "--word", "[a,b] c^-1"]).out,
        "area: 1\n"
    );
    let r = dehn(&["oracle", "--word", "[a,a^(t^3)]", "--max-cost", "2"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("area: unknown"), "{}", r.out);
    assert_eq!(dehn(&["oracle", "--word", "a"]).code, 1);
}
