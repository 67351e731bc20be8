#pragma once

#include <string>

#include "auth/prob_core.hpp"

namespace auth {

enum class RuleKind {
    Oracle,
    World,
    BiasAllButLast,
    FullBias,
    PartialBias,
    FirstHalfBias,
};

struct DecisionRule {
    RuleKind kind = RuleKind::World;
    double weight = 1.0;  // PartialBias only, in (0, 1]

    static DecisionRule oracle() { return {RuleKind::Oracle}; }
    static DecisionRule world() { return {RuleKind::World}; }
    static DecisionRule bias_all_but_last() { return {RuleKind::BiasAllButLast}; }
    static DecisionRule full_bias() { return {RuleKind::FullBias}; }
    static DecisionRule partial_bias(double weight);
    static DecisionRule first_half_bias() { return {RuleKind::FirstHalfBias}; }

    std::string name() const;
};

struct Verdict {
    double p_user = 0.0;
    bool decided_user = false;  // p_user >= 0.5, ties go to the user
    DecisionRule rule;
};

Verdict oracle_decide(const MultinomialModel& q, const MultinomialModel& w,
                      const PriorOdds& prior, const CountVector& obs);

Verdict world_decide(const DirichletBelief& user_belief, const DirichletBelief& world_belief,
                     const PriorOdds& prior, const CountVector& obs);

// Conditioning counts f(x) for the rule. World yields empty (zero) counts;
// a length-1 sequence degenerates BiasAllButLast and FirstHalfBias to World.
CountVector bias_transform(const DecisionRule& rule, const ObservationSequence& obs);

// Scores the FULL observation under the adversary posterior conditioned on
// f(x). With rule = World this is exactly world_decide.
Verdict biased_decide(const DirichletBelief& user_belief, const DirichletBelief& adversary_prior,
                      const DecisionRule& rule, const PriorOdds& prior,
                      const ObservationSequence& obs);

// Single-record variants: the observation is one count vector, not a
// sequence, so BiasAllButLast and FirstHalfBias degenerate to World.
CountVector bias_transform_single(const DecisionRule& rule, const CountVector& obs);
Verdict biased_decide_single(const DirichletBelief& user_belief,
                             const DirichletBelief& adversary_prior, const DecisionRule& rule,
                             const PriorOdds& prior, const CountVector& obs);

// ln xi'(x) - ln xi(x) with xi' = posterior_update(belief, obs); >= 0 up to
// rounding, the quantity the pessimism bound rests on.
double lemma1_gap(const DirichletBelief& belief, const CountVector& obs);

}  // namespace auth
