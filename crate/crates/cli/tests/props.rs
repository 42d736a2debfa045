//! Randomised checks on the front end: spans of any diagnostic stay inside
//! the source, and printed sequence expressions parse back to the same tree.

use gfa_cli::ast::{BinOp, ConvSrc, Decl, DeclBody, ExperimentSpec, Item, Lit, Num, SeqExpr, Spanned};
use gfa_cli::diag::Span;
use gfa_cli::{check_spec, parser};
use proptest::prelude::*;

const BASE: &str = r#"# sample
mollifier g = gaussian;
seq d = delta g;
seq f = "n^2 + 1" certify (1, 2);
seq h = conv heaviside g - deriv d * 2;
scale r = log;
family P = power 4;
task classify f r projective mu_max=1;
task cauchy { members: geometric(4), mu_max: 2 } r nmax=1e4;
task verify-properties suite=all seed=3;
"#;

fn mutated() -> impl Strategy<Value = String> {
    let edit = (any::<prop::sample::Index>(), 0..3u8, prop::sample::select(vec!['"', ';', '{', '}', '=', '-', 'x', 'é', '\n', '1', '@', ' ']));
    prop::collection::vec(edit, 1..6).prop_map(|edits| {
        let mut chars: Vec<char> = BASE.chars().collect();
        for (at, what, c) in edits {
            let i = at.index(chars.len() + 1);
            match what {
                0 if i < chars.len() => {
                    chars.remove(i);
                }
                1 if i < chars.len() => chars[i] = c,
                _ => chars.insert(i, c),
            }
        }
        chars.into_iter().collect()
    })
}

fn span() -> Span {
    Span::default()
}

fn lit(s: &str) -> Lit {
    Lit { text: s.to_string(), span: span(), raw: true }
}

fn name(s: &str) -> Spanned<String> {
    Spanned::new(s.to_string(), span())
}

fn expr() -> impl Strategy<Value = SeqExpr> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["n", "1/n", "sin(x)/n", "n^2 + 1"]).prop_map(|s| SeqExpr::Str(lit(s))),
        (0u32..1000, 0i32..4).prop_map(|(m, e)| SeqExpr::Num(Num::new(m as f64 / 10f64.powi(e), span()))),
        prop::sample::select(vec!["a", "b"]).prop_map(|s| SeqExpr::Ref(name(s))),
        Just(SeqExpr::Delta(name("g"))),
        Just(SeqExpr::Conv { source: ConvSrc::Heaviside, mollifier: name("g") }),
        Just(SeqExpr::Conv { source: ConvSrc::Expr(lit("exp(-x^2)")), mollifier: name("g") }),
        Just(SeqExpr::Const(lit("cos(x)"))),
    ];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| SeqExpr::Neg(Box::new(e))),
            inner.clone().prop_map(|e| SeqExpr::Deriv(Box::new(e))),
            (prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul]), inner.clone(), inner)
                .prop_map(|(op, l, r)| SeqExpr::Bin { op, lhs: Box::new(l), rhs: Box::new(r) }),
        ]
    })
}

proptest! {
    #[test]
    fn diagnostic_spans_stay_in_bounds(src in mutated()) {
        let (_, diags) = check_spec(&src);
        for d in &diags {
            prop_assert!(d.span.line >= 1 && d.span.column >= 1);
            prop_assert!(d.span.end() <= src.len(), "{d} in {src:?}");
            prop_assert!(src.is_char_boundary(d.span.offset));
            let _ = d.render(&src, "x.gfa");
        }
    }

    #[test]
    fn seq_expressions_round_trip(e in expr()) {
        let spec = ExperimentSpec {
            items: vec![Item::Decl(Decl { name: name("f"), body: DeclBody::Seq { expr: e, certify: None } })],
        };
        let text = spec.to_string();
        let back = parser::parse(&text).map_err(|d| TestCaseError::fail(format!("{d}: {text}")))?;
        prop_assert_eq!(&back, &spec, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }
}
