//! Every example runs to completion.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            $name::main().unwrap();
        }
    };
}

example!(field_arithmetic, "../examples/field_arithmetic.rs");
example!(map_enumeration, "../examples/map_enumeration.rs");
example!(functional_graph, "../examples/functional_graph.rs");
example!(poly_census, "../examples/poly_census.rs");
example!(rational_census, "../examples/rational_census.rs");
example!(lemma_oracles, "../examples/lemma_oracles.rs");
example!(theory_formulas, "../examples/theory_formulas.rs");
example!(random_baseline, "../examples/random_baseline.rs");
example!(quadratic_graphs, "../examples/quadratic_graphs.rs");
example!(rho_experiment, "../examples/rho_experiment.rs");
