#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "auth/decision_rules.hpp"
#include "auth/prob_core.hpp"

namespace auth {

struct BootstrapSummary {
    double lo = 0.0;
    double mean = 0.0;
    double hi = 0.0;
};

// Resample-with-replacement means; percentiles of the replicate means.
BootstrapSummary bootstrap_percentiles(const std::vector<char>& samples, std::size_t replicates,
                                       double lo_pct, double hi_pct, Rng& rng);

struct SynthConfig {
    std::size_t runs = 10000;
    std::size_t degree = 10;
    std::size_t sequence_length = 10;
    std::size_t population_size = 1000;
    double gamma_shape = 1.0;
    double gamma_scale = 1.0;
    double p_user_prior = 0.5;
    std::uint64_t seed = 0;
    std::size_t bootstrap_replicates = 100;
    double partial_weight = 0.5;
    bool refit_per_run = true;   // false: fit one world model and share it
    bool force_identical_models = false;  // test mode: adversary = user model
    std::size_t threads = 0;     // 0: hardware concurrency

    void validate() const;
};

struct CurvePoint {
    std::size_t prefix_len = 0;
    std::string rule;
    double err = 0.0;
    double lo5 = 0.0;
    double hi5 = 0.0;
};

struct PrefixErrorCurve {
    std::vector<CurvePoint> points;

    void write_csv(std::ostream& out) const;
    std::string to_json() const;
    const CurvePoint& at(std::size_t prefix_len, const std::string& rule) const;
};

std::vector<DecisionRule> synth_rule_menu(double partial_weight);

PrefixErrorCurve run_synthetic(const SynthConfig& config);

}  // namespace auth
