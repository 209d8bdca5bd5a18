use deacp_core::gen::Gen;
use deacp_core::oracle::{computations, EnvSteps};
use deacp_core::semantics::Label;
use deacp_core::{parse_cond, parse_proc, DataSpec, ParseCtx};
use proptest::prelude::*;

fn spec() -> DataSpec {
    DataSpec::new(&["a", "b", "c"], &[("a", "b", "c")], &["i", "j"], 0, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_terms_parse_back(seed in any::<u64>()) {
        let spec = spec();
        let ctx = ParseCtx::from_spec(&spec);
        let mut g = Gen::new(&spec, seed);
        let p = g.proc(5);
        prop_assert_eq!(parse_proc(&p.to_string(), &ctx).unwrap(), p);
        let c = g.cond(3);
        prop_assert_eq!(parse_cond(&c.to_string(), &ctx).unwrap(), c);
    }

    #[test]
    fn environment_steps_extend_computations(seed in any::<u64>()) {
        let spec = DataSpec::new(&["a", "b", "c"], &[("a", "b", "c")], &["i"], 0, 1).unwrap();
        let mut g = Gen::new(&spec, seed).without_params();
        let p = g.small_rg_proc(3);
        let rho2 = g.valuation();
        for sigma in computations(&spec, &p, 2, &EnvSteps::None).unwrap() {
            let mut longer = sigma.clone();
            let last = longer.last().0.clone();
            longer.push(Label::Env, (last, rho2.clone()));
            prop_assert!(longer.is_valid(&spec).unwrap());
        }
    }
}
