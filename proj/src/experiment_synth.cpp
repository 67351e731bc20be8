#include "auth/experiment_synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "auth/empirical_bayes.hpp"

namespace auth {

namespace {

double percentile_of_sorted(const std::vector<double>& sorted, double pct) {
    const std::size_t r = sorted.size();
    auto idx = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(r)));
    idx = std::min(std::max<std::size_t>(idx, 1), r) - 1;
    return sorted[idx];
}

DirichletBelief draw_prior_from_gamma(std::size_t degree, double shape, double scale, Rng& rng) {
    std::gamma_distribution<double> g(shape, scale);
    std::vector<double> phi(degree);
    for (double& v : phi) v = std::max(g(rng), 1e-6);
    return DirichletBelief(std::move(phi));
}

DirichletBelief fit_world_model(const DirichletBelief& gamma_true, std::size_t population_size,
                                std::size_t sequence_length, Rng& rng) {
    std::vector<CountVector> users;
    users.reserve(population_size);
    for (std::size_t i = 0; i < population_size; ++i) {
        const MultinomialModel mu = sample_dirichlet(gamma_true, rng);
        users.push_back(sample_counts(mu, sequence_length, rng));
    }
    return fit_dirichlet(PopulationData(std::move(users))).belief;
}

}  // namespace

BootstrapSummary bootstrap_percentiles(const std::vector<char>& samples, std::size_t replicates,
                                       double lo_pct, double hi_pct, Rng& rng) {
    if (samples.empty()) throw std::invalid_argument("bootstrap_percentiles: empty samples");
    if (replicates < 1) throw std::invalid_argument("bootstrap_percentiles: replicates >= 1 required");
    const std::size_t n = samples.size();
    double total = 0.0;
    for (char s : samples) total += s;
    const double mean = total / static_cast<double>(n);

    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> means(replicates);
    for (auto& m : means) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += samples[pick(rng)];
        m = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    BootstrapSummary out;
    out.mean = mean;
    out.lo = std::min(percentile_of_sorted(means, lo_pct), mean);
    out.hi = std::max(percentile_of_sorted(means, hi_pct), mean);
    return out;
}

void SynthConfig::validate() const {
    if (runs < 1) throw std::invalid_argument("runs >= 1 required");
    if (degree < 2) throw std::invalid_argument("degree >= 2 required");
    if (sequence_length < 1) throw std::invalid_argument("sequence_length >= 1 required");
    if (population_size < 2) throw std::invalid_argument("population_size >= 2 required");
    if (!(gamma_shape > 0.0 && gamma_scale > 0.0)) throw std::invalid_argument("Gamma parameters must be > 0");
    if (!(p_user_prior > 0.0 && p_user_prior < 1.0)) throw std::invalid_argument("p_user_prior in (0,1) required");
    if (bootstrap_replicates < 1) throw std::invalid_argument("bootstrap_replicates >= 1 required");
}

std::vector<DecisionRule> synth_rule_menu(double partial_weight) {
    return {DecisionRule::oracle(),       DecisionRule::world(),
            DecisionRule::bias_all_but_last(), DecisionRule::full_bias(),
            DecisionRule::partial_bias(partial_weight), DecisionRule::first_half_bias()};
}

PrefixErrorCurve run_synthetic(const SynthConfig& config) {
    config.validate();
    const auto rules = synth_rule_menu(config.partial_weight);
    const std::size_t n = config.sequence_length;
    const std::size_t n_rules = rules.size();
    const PriorOdds prior(config.p_user_prior);

    // errors[run][t * n_rules + rule] in {0,1}
    std::vector<std::vector<char>> errors(config.runs, std::vector<char>(n * n_rules, 0));

    // shared-fit mode pins one world model before the runs start
    DirichletBelief shared_fit(std::vector<double>(config.degree, 1.0));
    if (!config.refit_per_run) {
        Rng rng = derive_rng(config.seed, 0xfefe0001ULL);
        const DirichletBelief gamma_true =
            draw_prior_from_gamma(config.degree, config.gamma_shape, config.gamma_scale, rng);
        shared_fit = fit_world_model(gamma_true, config.population_size, n, rng);
    }

    auto run_one = [&](std::size_t run) {
        Rng rng = derive_rng(config.seed, run);
        const DirichletBelief gamma_true =
            draw_prior_from_gamma(config.degree, config.gamma_shape, config.gamma_scale, rng);
        const DirichletBelief gamma_prime =
            draw_prior_from_gamma(config.degree, config.gamma_shape, config.gamma_scale, rng);

        const DirichletBelief gamma_hat =
            config.refit_per_run
                ? fit_world_model(gamma_true, config.population_size, n, rng)
                : shared_fit;

        const MultinomialModel q = sample_dirichlet(gamma_true, rng);
        const MultinomialModel w = config.force_identical_models
                                       ? q
                                       : sample_dirichlet(gamma_prime, rng);

        const CountVector enrollment = sample_counts(q, n, rng);
        const DirichletBelief psi = user_posterior(gamma_hat, enrollment);

        std::bernoulli_distribution coin(config.p_user_prior);
        const bool is_user = coin(rng);
        const ObservationSequence seq = sample_sequence(is_user ? q : w, n, rng);

        for (std::size_t t = 1; t <= n; ++t) {
            const ObservationSequence pre = seq.prefix(t);
            const CountVector counts = pre.counts();
            for (std::size_t r = 0; r < n_rules; ++r) {
                Verdict v = rules[r].kind == RuleKind::Oracle
                                ? oracle_decide(q, w, prior, counts)
                                : biased_decide(psi, gamma_hat, rules[r], prior, pre);
                errors[run][(t - 1) * n_rules + r] = (v.decided_user != is_user) ? 1 : 0;
            }
        }
    };

    std::size_t n_threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    n_threads = std::max<std::size_t>(1, std::min(n_threads, config.runs));
    if (n_threads == 1) {
        for (std::size_t run = 0; run < config.runs; ++run) run_one(run);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t tid = 0; tid < n_threads; ++tid) {
            pool.emplace_back([&, tid] {
                for (std::size_t run = tid; run < config.runs; run += n_threads) run_one(run);
            });
        }
        for (auto& th : pool) th.join();
    }

    PrefixErrorCurve curve;
    Rng boot_rng = derive_rng(config.seed, 0xb0075ULL);
    std::vector<char> samples(config.runs);
    for (std::size_t t = 1; t <= n; ++t) {
        for (std::size_t r = 0; r < n_rules; ++r) {
            for (std::size_t run = 0; run < config.runs; ++run)
                samples[run] = errors[run][(t - 1) * n_rules + r];
            const BootstrapSummary b =
                bootstrap_percentiles(samples, config.bootstrap_replicates, 5.0, 95.0, boot_rng);
            curve.points.push_back({t, rules[r].name(), b.mean, b.lo, b.hi});
        }
    }
    return curve;
}

void PrefixErrorCurve::write_csv(std::ostream& out) const {
    out << "prefix_len,rule,err,lo5,hi5\n";
    char buf[160];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g,%.17g\n", p.prefix_len,
                      p.rule.c_str(), p.err, p.lo5, p.hi5);
        out << buf;
    }
}

std::string PrefixErrorCurve::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : points) {
        rows.push_back({{"prefix_len", p.prefix_len},
                        {"rule", p.rule},
                        {"err", p.err},
                        {"lo5", p.lo5},
                        {"hi5", p.hi5}});
    }
    return nlohmann::json{{"points", rows}}.dump(2);
}

const CurvePoint& PrefixErrorCurve::at(std::size_t prefix_len, const std::string& rule) const {
    for (const auto& p : points) {
        if (p.prefix_len == prefix_len && p.rule == rule) return p;
    }
    throw std::out_of_range("no curve point for prefix " + std::to_string(prefix_len) + ", rule " + rule);
}

}  // namespace auth
