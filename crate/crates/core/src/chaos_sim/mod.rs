//! Concrete chaos elements: exact moment oracles, seeded sampling, and a
//! histogram estimate of the total-variation distance to `N(0,1)`.

mod dtv;
mod oracle;
mod sample;
mod spec;

pub use dtv::{dtv_estimate, BinSpec, DtvEstimate, MIN_DTV_SAMPLES};
pub use oracle::{
    cumulants_to_moments, hermite_combo_exact_moments, mixture_moments, second_chaos_cumulant,
    second_chaos_moments, OracleMoments, DEFAULT_TERM_BOUND,
};
pub use sample::{
    compare_with_oracle, empirical_moments, read_samples_le, sample_chaos, simulate, summarize,
    write_samples_le, EmpiricalMoment, MomentCheck, SampleReport, SimulationOptions, TvBound, ZStatus,
    NORMAL_METHOD, RNG_DESCRIPTION, SHARD_SIZE,
};
pub use spec::{lambdas, ChaosSpec, HermiteCombo, HermiteTerm, SecondChaos};
