use std::path::PathBuf;

use divpow::cli::{
    images_from_json, images_to_json, operator_from_json, operator_to_json, parse, run, Expr,
    EXIT_AUTOMORPHISM, EXIT_OK, EXIT_PRECISION, EXIT_USAGE,
};
use divpow::{DiffOp, ExponentVector, Fp, LaurentPoly, Prime};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn corpus() -> Vec<(u64, usize, String)> {
    std::fs::read_to_string(golden("normalize_corpus.txt"))
        .unwrap()
        .lines()
        .map(|line| {
            let mut parts = line.splitn(3, ' ');
            let p = parts.next().unwrap().parse().unwrap();
            let n = parts.next().unwrap().parse().unwrap();
            (p, n, parts.next().unwrap().to_string())
        })
        .collect()
}

fn cli(args: &[&str]) -> divpow::cli::Outcome {
    run(std::iter::once("divpow").chain(args.iter().copied()))
}

/// Acts with the expression tree directly: `x` multiplies, `d[k]` is the
/// divided partial, products compose right to left.
fn act_tree(e: &Expr, f: &LaurentPoly) -> LaurentPoly {
    let (p, n) = (f.prime(), f.nvars());
    match e {
        Expr::Int(v) => f.scale(Fp::new((*v % p.get() as u64) as i64, p)),
        Expr::X { var, exp } => &LaurentPoly::variable_power(p, n, var - 1, *exp) * f,
        Expr::D { var, order } => f.divided_partial(var - 1, *order),
        Expr::Add(a, b) => &act_tree(a, f) + &act_tree(b, f),
        Expr::Sub(a, b) => &act_tree(a, f) - &act_tree(b, f),
        Expr::Mul(a, b) => act_tree(a, &act_tree(b, f)),
        Expr::Pow(a, k) => (0..*k).fold(f.clone(), |g, _| act_tree(a, &g)),
    }
}

#[test]
fn normalize_golden_corpus() {
    let expected = std::fs::read_to_string(golden("normalize_expected.txt")).unwrap();
    let expected: Vec<&str> = expected.lines().collect();
    let cases = corpus();
    assert_eq!(cases.len(), 30);
    assert_eq!(expected.len(), 30);
    for ((p, n, expr), want) in cases.iter().zip(expected) {
        let out = cli(&[
            "normalize",
            expr,
            "--p",
            &p.to_string(),
            "--n",
            &n.to_string(),
        ]);
        assert_eq!(out.code, EXIT_OK, "{expr}");
        assert_eq!(out.output, format!("{want}\n"), "{expr} at p = {p}");
    }
}

#[test]
fn normal_forms_act_like_their_expressions() {
    for (p, n, expr) in corpus() {
        let prime = Prime::new(p).unwrap();
        let tree = parse(&expr).unwrap();
        let op = divpow::cli::eval(&tree, prime, n).unwrap();
        for seed in 0..12i64 {
            let gamma: Vec<i64> = (0..n as i64).map(|i| (seed * 7 + i * 5) % 19 - 9).collect();
            let f = LaurentPoly::monomial(Fp::one(prime), ExponentVector::new(gamma));
            assert_eq!(op.act(&f).unwrap(), act_tree(&tree, &f), "{expr} on {f}");
        }
    }
}

#[test]
fn printed_normal_forms_reparse() {
    let expected = std::fs::read_to_string(golden("normalize_expected.txt")).unwrap();
    for ((p, n, _), printed) in corpus().iter().zip(expected.lines()) {
        let prime = Prime::new(*p).unwrap();
        let once = divpow::cli::normalize(printed, prime, *n).unwrap();
        assert_eq!(once.to_string(), printed);
    }
}

#[test]
fn normalize_is_byte_stable() {
    let a = cli(&[
        "normalize",
        "(x1*d1[1] + x2*d2[1])^3 + d2[4]*x1^-2",
        "--p",
        "3",
        "--n",
        "2",
    ]);
    let b = cli(&[
        "normalize",
        "(x1*d1[1] + x2*d2[1])^3 + d2[4]*x1^-2",
        "--p",
        "3",
        "--n",
        "2",
    ]);
    assert_eq!(a, b);
}

#[test]
fn operator_interchange_golden() {
    let text = std::fs::read_to_string(golden("operator_p3.json")).unwrap();
    let op = operator_from_json(&text).unwrap();
    let p = Prime::new(3).unwrap();
    assert_eq!(
        op,
        divpow::cli::normalize("d1[2]*x1 + 2*x1^-1*d2[1]", p, 2).unwrap()
    );
    assert_eq!(operator_to_json(&op) + "\n", text);
    let out = cli(&[
        "normalize",
        "d1[2]*x1 + 2*x1^-1*d2[1]",
        "--p",
        "3",
        "--n",
        "2",
        "--format",
        "machine",
    ]);
    assert_eq!(out.output, text);
}

#[test]
fn images_interchange_golden() {
    let text = std::fs::read_to_string(golden("sigma_p2_n2.json")).unwrap();
    let g = images_from_json(&text).unwrap();
    assert_eq!(images_to_json(&g) + "\n", text);
    let out = cli(&[
        "build-sigma",
        "--digits",
        "1,1;0,1",
        "--p",
        "2",
        "--n",
        "2",
        "--precision",
        "3",
    ]);
    assert_eq!(out.output, text);
    let out = cli(&["extract", golden("sigma_p2_n2.json").to_str().unwrap()]);
    assert_eq!(out.output, "s[1] = 1 + 1*2\ns[2] = 1*2\n");
}

#[test]
fn build_then_extract_and_factor() {
    let dir = std::env::temp_dir().join(format!("divpow-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("sigma.json");
    let path = file.to_str().unwrap();
    let out = cli(&[
        "build-sigma",
        "--digits",
        "1,1",
        "--p",
        "2",
        "--output",
        path,
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.output);
    let out = cli(&["extract", path]);
    assert_eq!(
        out,
        divpow::cli::Outcome {
            code: 0,
            output: "s[1] = 1 + 1*2\n".into()
        }
    );
    let out = cli(&["factor", path]);
    assert_eq!(out.output, "s[1] = 1 + 1*2\nA = [[1]]\nlambda = [1]\n");
    let out = cli(&["extract", path, "--format", "machine"]);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(v["digits"][0][0], 1);
    assert_eq!(v["digits"][0][1], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["normalize", "d1[2]*"]).code, EXIT_USAGE);
    assert!(cli(&["normalize", "d1[2]*"]).output.contains("offset 6"));
    assert_eq!(cli(&["normalize", "x3", "--n", "2"]).code, EXIT_USAGE);
    assert_eq!(cli(&["verify"]).code, EXIT_USAGE);
    assert_eq!(cli(&["extract", "/nonexistent/file.json"]).code, EXIT_USAGE);
    assert_eq!(
        cli(&["build-sigma", "--digits", "1,0,1,1", "--precision", "3"]).code,
        EXIT_PRECISION
    );

    let dir = std::env::temp_dir().join(format!("divpow-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = Prime::new(2).unwrap();
    let id = divpow::autgroup::GeneratorImages::identity(p, 1, 2).unwrap();
    let bent = divpow::autgroup::GeneratorImages::new(
        p,
        1,
        2,
        id.x_images().to_vec(),
        id.xinv_images().to_vec(),
        vec![vec![
            &DiffOp::divided(p, 1, 0, 1) + &DiffOp::x_power(p, 1, 0, 1),
            DiffOp::divided(p, 1, 0, 2),
        ]],
    )
    .unwrap();
    let file = dir.join("bent.json");
    std::fs::write(&file, images_to_json(&bent)).unwrap();
    assert_eq!(
        cli(&["extract", file.to_str().unwrap()]).code,
        EXIT_AUTOMORPHISM
    );

    let squashed = divpow::autgroup::GeneratorImages::new(
        p,
        1,
        2,
        vec![&DiffOp::x_power(p, 1, 0, 1) + &DiffOp::one(p, 1)],
        id.xinv_images().to_vec(),
        id.d_images().to_vec(),
    )
    .unwrap();
    std::fs::write(&file, images_to_json(&squashed)).unwrap();
    assert_eq!(
        cli(&["factor", file.to_str().unwrap()]).code,
        EXIT_AUTOMORPHISM
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_all_example() {
    let out = cli(&["verify", "all", "--p", "5", "--n", "2", "--seed", "7"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.output);
    assert!(out.output.contains("summary:"));
    assert!(!out.output.contains("FAIL"));
    let machine = cli(&[
        "verify", "kernel", "--p", "3", "--n", "2", "--format", "machine",
    ]);
    let v: serde_json::Value = serde_json::from_str(&machine.output).unwrap();
    assert_eq!(v["passed"], true);
}
