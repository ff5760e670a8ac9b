//! Fixtures shared by the benchmarks.

use groupbuy::{
    synth_traffic_model, BsParams, NetworkConfig, PriceCurve, TrafficModel, TrafficPattern,
};

pub fn desk_inputs(k_pairs: usize, n_slots: usize) -> (NetworkConfig, TrafficModel, PriceCurve) {
    let net = NetworkConfig::uniform(k_pairs, n_slots, BsParams::lte_macro()).unwrap();
    let model = synth_traffic_model(TrafficPattern::Symmetric, k_pairs, n_slots, 150.0, 7).unwrap();
    (net, model, PriceCurve::builtin(n_slots).unwrap())
}
