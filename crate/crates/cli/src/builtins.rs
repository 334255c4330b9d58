//! Bundled example scenarios, usable via `--builtin <name>`.

use crate::scenario::{load_scenario, Scenario};

/// A six-point space with a rotation entry and a decay entry; every
/// analysis applies, and all difference quotients converge.
pub const COMPACT_ORBIT: &str = "\
[scenario]
name = compact_orbit

[space]
model = finite
points = 6

[lattice]
dimension = 2
norm = sup

[phi]
entries = \"i*x\", \"-x\"

[section]
entries = \"1/x\", \"1/x\"

[analyses]
list = norm, invert, spectrum, evolve, continuity, generator, t0, recover

[spectrum]
lambda = \"i\", \"2*i\", \"-1\", \"-3\", \"1\", \"2+2*i\"

[evolve]
t = 0.1, 1, 10

[continuity]
t = 0.00001, 0.0001, 0.001, 0.01, 0.1, 1

[generator]
h = 0.01, 0.005, 0.0025

[t0]
t0 = 1

[recover]
h = 0.01, 0.005, 0.0025
";

/// A one-dimensional purely imaginary symbol on a grid: isometric flow,
/// saturating growth, and a spectrum pinned to the imaginary axis.
pub const IMAGINARY_LINE: &str = "\
[scenario]
name = imaginary_line

[space]
model = interval_grid
a = 0
b = 20
step = 0.1
unbounded = true

[lattice]
dimension = 1
norm = sup

[phi]
entries = \"i*x\"

[section]
entries = \"1/(1+x^2)\"

[analyses]
list = norm, spectrum, evolve, continuity, t0

[spectrum]
lambda = \"i\", \"5*i\", \"20*i\", \"1\", \"1+i\", \"-1\"

[evolve]
t = 0.1, 0.5, 1, 2, 5

[continuity]
t = 0.00001, 0.0001, 0.001, 0.01, 0.1, 1

[t0]
t0 = 1
";

/// Unbounded growth along the naturals: one rotation entry and one
/// strongly damped entry, with quadratic decay in the section.
pub const DIAGONAL_GROWTH: &str = "\
[scenario]
name = diagonal_growth

[space]
model = truncated_naturals
n = 100
unbounded = true

[lattice]
dimension = 2
norm = sup

[phi]
entries = \"i*x\", \"-x^2\"

[section]
entries = \"1/x^2\", \"1/x^2\"

[analyses]
list = norm, invert, spectrum, evolve, continuity, generator, t0, recover

[spectrum]
lambda = \"i\", \"2*i\", \"3*i\", \"4*i\", \"5*i\", \"6*i\", \"7*i\", \"8*i\", \"9*i\", \"10*i\", \"-1\", \"-4\", \"-9\", \"-16\", \"-25\", \"-36\", \"-49\", \"-64\", \"-81\", \"-100\", \"1\", \"0.5+0.5*i\"

[evolve]
t = 0.1, 1, 10

[continuity]
t = 0.000001, 0.00001, 0.0001, 0.001, 0.01, 0.1

[generator]
h = 0.01, 0.005, 0.0025

[t0]
t0 = 1

[recover]
h = 0.01, 0.005, 0.0025
";

/// Three heterogeneous entries under a weighted sup norm on four points;
/// exercises mixed rotation, decay, and a bounded oscillatory entry.
pub const OPERATOR_MATRIX: &str = "\
[scenario]
name = operator_matrix

[space]
model = finite
points = 4

[lattice]
dimension = 3
norm = weighted_sup
weights = 1, 2, 0.5

[phi]
entries = \"i*x\", \"-x/2\", \"(cos(x)-1)/2+i*sin(x)\"

[section]
entries = \"1/x\", \"1/(x+1)\", \"1/x^2\"

[analyses]
list = norm, spectrum, evolve, t0, continuity

[spectrum]
lambda = \"i\", \"2*i\", \"-0.5\", \"-1\", \"1\", \"3\"

[evolve]
t = 0.1, 1, 10

[continuity]
t = 0.0001, 0.001, 0.01, 0.1, 1

[t0]
t0 = 2
";

pub const BUILTIN_NAMES: [&str; 4] = [
    "compact_orbit",
    "diagonal_growth",
    "imaginary_line",
    "operator_matrix",
];

pub fn builtin_text(name: &str) -> Option<&'static str> {
    match name {
        "compact_orbit" => Some(COMPACT_ORBIT),
        "diagonal_growth" => Some(DIAGONAL_GROWTH),
        "imaginary_line" => Some(IMAGINARY_LINE),
        "operator_matrix" => Some(OPERATOR_MATRIX),
        _ => None,
    }
}

pub fn builtin(name: &str) -> Option<Scenario> {
    let text = builtin_text(name)?;
    Some(load_scenario(text).expect("bundled scenarios are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_loads() {
        for name in BUILTIN_NAMES {
            let sc = builtin(name).unwrap();
            assert_eq!(sc.name, name);
        }
    }

    #[test]
    fn builtins_round_trip_through_canonical_text() {
        for name in BUILTIN_NAMES {
            let sc = builtin(name).unwrap();
            let reloaded = load_scenario(&sc.canonical_text()).unwrap();
            assert_eq!(sc, reloaded, "{name} changed across a round trip");
        }
    }
}
