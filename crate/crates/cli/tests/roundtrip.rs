use expvolterra_cli::file::{
    ComplexValue, FamilyName, ForcingSection, GridSection, NonlinearitySection, ProblemFile,
    SolverSection,
};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = (FamilyName, Option<f64>)> {
    prop_oneof![
        Just((FamilyName::Zero, None)),
        Just((FamilyName::Linear, None)),
        (2u32..9).prop_map(|b| (FamilyName::IntegerPower, Some(f64::from(b)))),
        (2.0f64..8.0).prop_map(|b| (FamilyName::ModulusPower, Some(b))),
    ]
}

fn complex() -> impl Strategy<Value = ComplexValue> {
    (-5.0f64..5.0, -5.0f64..5.0).prop_map(|(re, im)| ComplexValue { re, im })
}

prop_compose! {
    fn problem_file()(
        a in 0.01f64..50.0,
        (family, b) in family(),
        lambda in complex(),
        amplitude in complex(),
        a1 in 0.01f64..50.0,
        horizon in 0.1f64..100.0,
        n in 1usize..100_000,
        tol in 1e-15f64..1e-3,
        max_iter in 1usize..1000,
        margin in 0.001f64..0.999,
        slack in 0.0f64..1.0,
    ) -> ProblemFile {
        ProblemFile {
            a,
            nonlinearity: NonlinearitySection { family, lambda: Some(lambda), b },
            forcing: ForcingSection { amplitude, a1 },
            grid: GridSection { horizon, n },
            solver: SolverSection { tol, max_iter, margin, slack },
        }
    }
}

proptest! {
    #[test]
    fn serialised_problem_files_parse_back_identically(file in problem_file()) {
        let text = file.to_toml();
        let back = ProblemFile::parse(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.problem().unwrap(), file.problem().unwrap());
        prop_assert_eq!(back.grid().unwrap(), file.grid().unwrap());
    }
}
