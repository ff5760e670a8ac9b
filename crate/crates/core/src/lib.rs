//! Energy group buying with wireless load sharing for two co-located
//! cellular operators.
//!
//! Each operator buys energy for its base stations in a hybrid market: a
//! day-ahead commitment at a fixed price, plus real-time corrections that are
//! bought at a premium or sold back at a discount. The crate implements three
//! ways of running that market:
//!
//! - **non-cooperative**: each operator plans and trades alone;
//! - **full cooperation**: the operators aggregate their purchases and share
//!   wireless traffic so lightly loaded base stations can sleep;
//! - **repeated Nash bargaining**: self-interested operators reach the
//!   full-cooperation total and split the saving fairly through payments.
//!
//! The [`experiment`] module ties these together into a seeded Monte-Carlo
//! harness that emits CSV reports.

pub mod bargaining;
pub mod commitment;
pub mod error;
pub mod experiment;
pub mod model;
pub mod rng;
pub mod scenario;
pub mod sharing;
pub mod trading;

pub use bargaining::{
    dayahead_bargain, expected_upsilons, nash_cost_split, nash_transfer, realtime_bargain,
    BargainDayOutcome, BargainSlotOutcome, DayAheadAgreement, UpsilonEstimate,
};
pub use commitment::{
    approx_subgradient, optimize_commitment, plan_group, plan_noncoop, sample_average_cost,
    sample_demands_group, sample_demands_individual, CommitmentPlan, McConfig,
};
pub use error::{Error, Result};
pub use experiment::{
    emit_report, run_experiment, CostReport, ExperimentConfig, Scheme, TrafficKind,
};
pub use model::{bs_power, slot_cost, BsParams, Mno, NetworkConfig, SlotPrices, TradeDecision};
pub use scenario::{
    diurnal_profile, load_price_curve, load_theta_profile, sample_scenario, synth_traffic_model,
    ClampCounts, PriceCurve, Scenario, TrafficModel, TrafficPattern,
};
pub use sharing::{optimal_pair_share, pair_share_oracle, shared_demand, PairDecision};
pub use trading::{group_trade, individual_trade};
