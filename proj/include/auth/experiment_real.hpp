#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "auth/access_log.hpp"
#include "auth/decision_rules.hpp"
#include "auth/empirical_bayes.hpp"
#include "auth/prob_core.hpp"

namespace auth {

struct RealConfig {
    std::size_t runs = 10;
    std::size_t reps_per_run = 1000;
    double world_fraction = 2.0 / 3.0;
    std::size_t min_records_per_user = 10;
    double p_user_prior = 0.5;
    std::vector<DecisionRule> rules = {DecisionRule::world(), DecisionRule::full_bias(),
                                       DecisionRule::partial_bias(0.5)};
    std::uint64_t seed = 0;
    std::size_t bootstrap_replicates = 100;
    std::size_t threads = 0;

    void validate() const;
};

struct RuleReport {
    std::string rule;
    double error_rate = 0.0;
    double bootstrap_lo5 = 0.0;
    double bootstrap_hi5 = 0.0;
    // false alarms (legitimate day rejected) over missed impostors
    // (impostor day accepted); see README for the orientation.
    std::size_t false_alarms = 0;
    std::size_t missed_impostors = 0;
    double fp_fn_ratio = 0.0;
    bool fp_fn_defined = false;
};

struct RunReport {
    std::size_t run_index = 0;
    std::vector<RuleReport> rules;

    const RuleReport& rule(const std::string& name) const;
};

// One pooled count vector per user (sum of their day vectors).
PopulationData pooled_user_counts(const DiscretizedDataset& dataset,
                                  const std::vector<std::string>& users);

std::vector<RunReport> run_real(const DiscretizedDataset& dataset, const RealConfig& config);

void write_reports_csv(const std::vector<RunReport>& reports, std::ostream& out);
std::string reports_to_json(const std::vector<RunReport>& reports);

}  // namespace auth
