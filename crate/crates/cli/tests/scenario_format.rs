use mulsemi::lattice::NormSpec;
use mulsemi::space::SpaceModel;
use mulsemi_cli::scenario::{
    load_scenario, Analysis, ConfigError, OutputFormat, Scenario,
};

const FULL: &str = r#"
# A scenario touching every section.
[scenario]
name = everything
domain_tolerance = 0.0001

[space]
model = interval_grid
a = 0
b = 2
step = 0.5
unbounded = false

[lattice]
dimension = 2
norm = weighted_sup
weights = 1, 0.25

[phi]
entries = "i*x", "-x^2"   # the symbol

[section]
entries = "1/(1+x)", "exp(-x)"

[analyses]
list = norm, invert, spectrum, evolve, continuity, generator, t0, recover

[invert]
tol = 0.001

[spectrum]
lambda = "i", "-0.25", "1+i"
threshold = 100000
pole_tol = 0.0000001

[evolve]
t = 0, 0.5, 1

[continuity]
t = 0.001, 0.01, 0.1

[generator]
h = 0.02, 0.01

[t0]
t0 = 0.75

[recover]
h = 0.02, 0.01, 0.005

[output]
format = csv
path = out_dir
"#;

fn load_err(text: &str) -> ConfigError {
    load_scenario(text).expect_err("scenario should be rejected")
}

fn line_of(err: &ConfigError) -> Option<usize> {
    match err {
        ConfigError::Line { line, .. } => Some(*line),
        ConfigError::Expr { line, .. } => Some(*line),
        _ => None,
    }
}

#[test]
fn a_full_scenario_parses_into_the_expected_struct() {
    let sc = load_scenario(FULL).unwrap();
    assert_eq!(sc.name, "everything");
    assert_eq!(sc.domain_tolerance, 1e-4);
    assert_eq!(
        sc.space,
        SpaceModel::interval_grid(0.0, 2.0, 0.5, false).unwrap()
    );
    assert_eq!(sc.dimension, 2);
    assert_eq!(sc.norm_spec, NormSpec::weighted_sup(vec![1.0, 0.25]).unwrap());
    assert_eq!(sc.phi.entries(), ["i*x".to_string(), "-x^2".to_string()]);
    assert_eq!(
        sc.section.as_deref(),
        Some(&["1/(1+x)".to_string(), "exp(-x)".to_string()][..])
    );
    assert_eq!(sc.analyses.len(), 8);
    assert_eq!(sc.analyses[1], Analysis::Invert { tol: 1e-3 });
    assert_eq!(
        sc.analyses[2],
        Analysis::Spectrum {
            lambdas: vec!["i".into(), "-0.25".into(), "1+i".into()],
            threshold: 1e5,
            pole_tol: 1e-7,
        }
    );
    assert_eq!(
        sc.analyses[3],
        Analysis::Evolve {
            t_grid: vec![0.0, 0.5, 1.0]
        }
    );
    assert_eq!(sc.analyses[6], Analysis::T0 { t0: 0.75 });
    let output = sc.output.as_ref().unwrap();
    assert_eq!(output.format, OutputFormat::Csv);
    assert_eq!(output.path.as_deref(), Some("out_dir"));
}

#[test]
fn defaults_fill_in_when_sections_are_omitted() {
    let sc = load_scenario(
        "[space]\nmodel = finite\npoints = 3\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n",
    )
    .unwrap();
    assert_eq!(sc.name, "scenario");
    assert_eq!(sc.domain_tolerance, 1e-6);
    assert!(sc.analyses.is_empty());
    assert!(sc.section.is_none());
    assert!(sc.output.is_none());

    // Analyses whose parameters all have defaults need no parameter section.
    let sc = load_scenario(
        "[space]\nmodel = finite\npoints = 3\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n\n\
         [section]\nentries = \"1\"\n\n\
         [analyses]\nlist = invert, generator, t0, recover\n",
    )
    .unwrap();
    assert_eq!(sc.analyses[0], Analysis::Invert { tol: 1e-12 });
    assert_eq!(
        sc.analyses[1],
        Analysis::Generator {
            h_seq: vec![1e-2, 5e-3, 2.5e-3]
        }
    );
    assert_eq!(sc.analyses[2], Analysis::T0 { t0: 1.0 });
    assert_eq!(
        sc.analyses[3],
        Analysis::Recover {
            h_seq: vec![1e-2, 5e-3, 2.5e-3]
        }
    );

    // Spectrum defaults kick in for threshold and pole_tol, not lambda.
    let sc = load_scenario(
        "[space]\nmodel = finite\npoints = 3\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n\n\
         [analyses]\nlist = spectrum\n\n\
         [spectrum]\nlambda = \"2\"\n",
    )
    .unwrap();
    assert_eq!(
        sc.analyses[0],
        Analysis::Spectrum {
            lambdas: vec!["2".into()],
            threshold: 1e6,
            pole_tol: 1e-9,
        }
    );
}

#[test]
fn canonical_text_round_trips_exactly() {
    let sc = load_scenario(FULL).unwrap();
    let text = sc.canonical_text();
    let reloaded = load_scenario(&text).unwrap();
    assert_eq!(sc, reloaded);
    // And the canonical form is a fixed point of itself.
    assert_eq!(text, reloaded.canonical_text());
}

#[test]
fn comments_and_spacing_do_not_matter() {
    let sc = load_scenario(
        "  [space]  # trailing\n  model=finite\npoints =3\n\
         [lattice]\ndimension=1\n norm = sup \n\
         [phi]\nentries = \"x\" # symbol\n",
    )
    .unwrap();
    assert_eq!(sc.space.len(), 3);
    assert_eq!(sc.phi.entries(), ["x".to_string()]);
}

#[test]
fn lambda_expressions_evaluate_to_constants() {
    let values = Scenario::eval_lambdas(&["0.5+0.5*i".into(), "-2^2".into()]).unwrap();
    assert_eq!(values[0].re, 0.5);
    assert_eq!(values[0].im, 0.5);
    assert_eq!(values[1].re, -4.0);
}

// ------------------------------------------------------------ error cases

#[test]
fn structural_errors_carry_line_numbers() {
    let e = load_err("[space\nmodel = finite\n");
    assert_eq!(line_of(&e), Some(1));
    assert!(e.to_string().contains("unterminated"));

    let e = load_err("key = 1\n");
    assert_eq!(line_of(&e), Some(1));
    assert!(e.to_string().contains("outside of any"));

    let e = load_err("[space]\nmodel finite\n");
    assert_eq!(line_of(&e), Some(2));
    assert!(e.to_string().contains("key = value"));

    let e = load_err("[space]\nmodel = finite\n[space]\npoints = 2\n");
    assert_eq!(line_of(&e), Some(3));
    assert!(e.to_string().contains("duplicate section"));

    let e = load_err("[space]\nmodel = finite\nmodel = finite\n");
    assert_eq!(line_of(&e), Some(3));
    assert!(e.to_string().contains("duplicate key"));

    let e = load_err("[phi]\nentries = \"x\n");
    assert_eq!(line_of(&e), Some(2));
    assert!(e.to_string().contains("unterminated quote"));

    let e = load_err("[phi]\nentries = \"x\", \n");
    assert_eq!(line_of(&e), Some(2));
    assert!(e.to_string().contains("trailing comma"));

    let e = load_err("[mystery]\nkey = 1\n");
    assert_eq!(line_of(&e), Some(1));
    assert!(e.to_string().contains("unknown section"));
}

const BASE: &str = "[space]\nmodel = finite\npoints = 4\n\n\
                    [lattice]\ndimension = 1\nnorm = sup\n\n\
                    [phi]\nentries = \"x\"\n";

fn with_base(extra: &str) -> String {
    format!("{BASE}\n{extra}")
}

#[test]
fn missing_required_sections_are_reported() {
    let e = load_err("[lattice]\ndimension = 1\nnorm = sup\n\n[phi]\nentries = \"x\"\n");
    assert!(e.to_string().contains("missing [space]"));

    let e = load_err("[space]\nmodel = finite\npoints = 4\n\n[phi]\nentries = \"x\"\n");
    assert!(e.to_string().contains("missing [lattice]"));

    let e = load_err("[space]\nmodel = finite\npoints = 4\n\n[lattice]\ndimension = 1\nnorm = sup\n");
    assert!(e.to_string().contains("missing [phi]"));

    let e = load_err("[space]\nmodel = finite\n\n[lattice]\ndimension = 1\nnorm = sup\n\n[phi]\nentries = \"x\"\n");
    assert!(e.to_string().contains("missing `points`"));
}

#[test]
fn dimension_mismatches_are_rejected() {
    let e = load_err(
        "[space]\nmodel = finite\npoints = 4\n\n\
         [lattice]\ndimension = 2\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n",
    );
    assert!(e.to_string().contains("expected 2 phi entries, got 1"));

    let e = load_err(
        "[space]\nmodel = finite\npoints = 4\n\n\
         [lattice]\ndimension = 2\nnorm = weighted_sup\nweights = 1\n\n\
         [phi]\nentries = \"x\", \"x\"\n",
    );
    assert!(e.to_string().contains("expected 2 weights, got 1"));

    let e = load_err(&with_base("[section]\nentries = \"1\", \"1\"\n"));
    assert!(e.to_string().contains("expected 1 section entries, got 2"));
}

#[test]
fn bad_values_are_rejected_with_context() {
    let e = load_err(
        "[space]\nmodel = warped\npoints = 4\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n",
    );
    assert_eq!(line_of(&e), Some(2));
    assert!(e.to_string().contains("unknown space model `warped`"));

    let e = load_err(
        "[space]\nmodel = finite\npoints = four\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n",
    );
    assert!(e.to_string().contains("not a whole number"));

    let e = load_err(
        "[space]\nmodel = interval_grid\na = 0\nb = 1\nstep = fast\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n",
    );
    assert_eq!(line_of(&e), Some(5));
    assert!(e.to_string().contains("not a number"));

    let e = load_err(
        "[space]\nmodel = truncated_naturals\nn = 5\nunbounded = maybe\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n",
    );
    assert!(e.to_string().contains("`maybe` is not `true` or `false`"));

    let e = load_err(
        "[space]\nmodel = finite\npoints = 4\n\n\
         [lattice]\ndimension = 1\nnorm = euclidean-ish\n\n\
         [phi]\nentries = \"x\"\n",
    );
    assert!(e.to_string().contains("unknown norm"));

    let e = load_err(
        "[space]\nmodel = finite\npoints = 4\n\n\
         [lattice]\ndimension = 0\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n",
    );
    assert!(e.to_string().contains("dimension must be at least 1"));

    let e = load_err(
        "[space]\nmodel = finite\npoints = 4\nextra = 1\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x\"\n",
    );
    assert_eq!(line_of(&e), Some(4));
    assert!(e.to_string().contains("unknown key `extra`"));
}

#[test]
fn phi_and_section_expressions_must_parse() {
    let e = load_err(
        "[space]\nmodel = finite\npoints = 4\n\n\
         [lattice]\ndimension = 1\nnorm = sup\n\n\
         [phi]\nentries = \"x+\"\n",
    );
    assert_eq!(line_of(&e), Some(10));
    assert!(e.to_string().contains("syntax error"));

    let e = load_err(&with_base("[section]\nentries = \"2^x\"\n"));
    assert!(e.to_string().contains("exponent"));
}

#[test]
fn analysis_lists_are_validated() {
    let e = load_err(&with_base("[analyses]\nlist = norm, telepathy\n"));
    assert!(e.to_string().contains("unknown analysis `telepathy`"));

    let e = load_err(&with_base("[analyses]\nlist = norm, norm\n"));
    assert!(e.to_string().contains("listed twice"));

    let e = load_err(&with_base("[spectrum]\nlambda = \"1\"\n"));
    assert!(e.to_string().contains("not listed"));

    let e = load_err(&with_base("[analyses]\nlist = spectrum\n"));
    assert!(e.to_string().contains("needs a [spectrum] section"));

    let e = load_err(&with_base("[analyses]\nlist = evolve\n\n[evolve]\nt = 1\n"));
    assert!(e.to_string().contains("needs a [section]"));

    let e = load_err(&with_base(
        "[section]\nentries = \"1\"\n\n[analyses]\nlist = evolve\n\n[evolve]\nt = 1, -2\n",
    ));
    assert!(e.to_string().contains("nonnegative"));

    let e = load_err(&with_base(
        "[section]\nentries = \"1\"\n\n[analyses]\nlist = generator\n\n[generator]\nh = 0.01, 0\n",
    ));
    assert!(e.to_string().contains("positive"));

    let e = load_err(&with_base(
        "[section]\nentries = \"1\"\n\n[analyses]\nlist = generator\n\n[generator]\nh = 0.01, 0.01\n",
    ));
    assert!(e.to_string().contains("distinct"));

    let e = load_err(&with_base("[analyses]\nlist = t0\n\n[t0]\nt0 = 0\n"));
    assert!(e.to_string().contains("t0 must be positive"));
}

#[test]
fn lambda_probes_must_be_finite_constants() {
    let e = load_err(&with_base("[analyses]\nlist = spectrum\n\n[spectrum]\nlambda = \"x+1\"\n"));
    assert!(e.to_string().contains("must be constant"));

    let e = load_err(&with_base("[analyses]\nlist = spectrum\n\n[spectrum]\nlambda = \"1/0\"\n"));
    assert!(e.to_string().contains("lambda `1/0`"));
}

#[test]
fn output_section_is_validated() {
    let e = load_err(&with_base("[output]\nformat = yaml\n"));
    assert!(e.to_string().contains("unknown format `yaml`"));

    let sc = load_scenario(&with_base("[output]\nformat = json\n")).unwrap();
    assert_eq!(sc.output.unwrap().format, OutputFormat::Json);
}
