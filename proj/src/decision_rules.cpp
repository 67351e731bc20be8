#include "auth/decision_rules.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace auth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Verdict posterior_from_logs(double log_user, double log_adversary, const PriorOdds& prior,
                            const DecisionRule& rule) {
    const double lu = log_user + std::log(prior.p_user);
    const double la = log_adversary + std::log(1.0 - prior.p_user);
    if (lu == -kInf && la == -kInf)
        throw std::domain_error("observation impossible under both hypotheses");
    double p_user;
    if (lu == -kInf) {
        p_user = 0.0;
    } else if (la == -kInf) {
        p_user = 1.0;
    } else {
        p_user = 1.0 / (1.0 + std::exp(la - lu));
    }
    return Verdict{p_user, p_user >= 0.5, rule};
}

}  // namespace

DecisionRule DecisionRule::partial_bias(double weight) {
    if (!(weight > 0.0 && weight <= 1.0)) throw std::invalid_argument("PartialBias weight must be in (0,1]");
    return {RuleKind::PartialBias, weight};
}

std::string DecisionRule::name() const {
    switch (kind) {
        case RuleKind::Oracle: return "oracle";
        case RuleKind::World: return "world";
        case RuleKind::BiasAllButLast: return "bias";
        case RuleKind::FullBias: return "f-bias";
        case RuleKind::PartialBias: return "p-bias";
        case RuleKind::FirstHalfBias: return "n-bias";
    }
    return "?";
}

Verdict oracle_decide(const MultinomialModel& q, const MultinomialModel& w,
                      const PriorOdds& prior, const CountVector& obs) {
    return posterior_from_logs(log_likelihood(q, obs), log_likelihood(w, obs), prior,
                               DecisionRule::oracle());
}

Verdict world_decide(const DirichletBelief& user_belief, const DirichletBelief& world_belief,
                     const PriorOdds& prior, const CountVector& obs) {
    return posterior_from_logs(log_marginal(user_belief, obs), log_marginal(world_belief, obs),
                               prior, DecisionRule::world());
}

CountVector bias_transform(const DecisionRule& rule, const ObservationSequence& obs) {
    if (obs.size() == 0) throw std::invalid_argument("bias_transform needs a nonempty sequence");
    switch (rule.kind) {
        case RuleKind::World:
            return CountVector::zeros(obs.degree());
        case RuleKind::BiasAllButLast:
            return obs.prefix_counts(obs.size() - 1);
        case RuleKind::FullBias:
            return obs.counts();
        case RuleKind::PartialBias:
            return obs.counts().scaled(rule.weight);
        case RuleKind::FirstHalfBias:
            return obs.prefix_counts(obs.size() / 2);
        case RuleKind::Oracle:
            break;
    }
    throw std::invalid_argument("Oracle has no bias transform");
}

Verdict biased_decide(const DirichletBelief& user_belief, const DirichletBelief& adversary_prior,
                      const DecisionRule& rule, const PriorOdds& prior,
                      const ObservationSequence& obs) {
    if (rule.kind == RuleKind::Oracle) throw std::invalid_argument("biased_decide does not take Oracle");
    const DirichletBelief conditioned = posterior_update(adversary_prior, bias_transform(rule, obs));
    Verdict v = posterior_from_logs(log_marginal(user_belief, obs.counts()),
                                    log_marginal(conditioned, obs.counts()), prior, rule);
    v.rule = rule;
    return v;
}

CountVector bias_transform_single(const DecisionRule& rule, const CountVector& obs) {
    switch (rule.kind) {
        case RuleKind::World:
        case RuleKind::BiasAllButLast:
        case RuleKind::FirstHalfBias:
            return CountVector::zeros(obs.degree());
        case RuleKind::FullBias:
            return obs;
        case RuleKind::PartialBias:
            return obs.scaled(rule.weight);
        case RuleKind::Oracle:
            break;
    }
    throw std::invalid_argument("Oracle has no bias transform");
}

Verdict biased_decide_single(const DirichletBelief& user_belief,
                             const DirichletBelief& adversary_prior, const DecisionRule& rule,
                             const PriorOdds& prior, const CountVector& obs) {
    if (rule.kind == RuleKind::Oracle) throw std::invalid_argument("biased_decide does not take Oracle");
    const DirichletBelief conditioned =
        posterior_update(adversary_prior, bias_transform_single(rule, obs));
    return posterior_from_logs(log_marginal(user_belief, obs), log_marginal(conditioned, obs),
                               prior, rule);
}

double lemma1_gap(const DirichletBelief& belief, const CountVector& obs) {
    const DirichletBelief conditioned = posterior_update(belief, obs);
    return log_marginal(conditioned, obs) - log_marginal(belief, obs);
}

}  // namespace auth
