#include "auth/experiment_real.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "auth/experiment_synth.hpp"

namespace auth {

void RealConfig::validate() const {
    if (runs < 1) throw std::invalid_argument("runs >= 1 required");
    if (reps_per_run < 1) throw std::invalid_argument("reps_per_run >= 1 required");
    if (!(world_fraction > 0.0 && world_fraction < 1.0))
        throw std::invalid_argument("world_fraction in (0,1) required");
    if (!(p_user_prior > 0.0 && p_user_prior < 1.0))
        throw std::invalid_argument("p_user_prior in (0,1) required");
    if (rules.empty()) throw std::invalid_argument("at least one rule required");
    for (const auto& r : rules) {
        if (r.kind == RuleKind::Oracle)
            throw std::invalid_argument("the oracle is not realisable on log data");
    }
}

const RuleReport& RunReport::rule(const std::string& name) const {
    for (const auto& r : rules) {
        if (r.rule == name) return r;
    }
    throw std::out_of_range("no report for rule " + name);
}

PopulationData pooled_user_counts(const DiscretizedDataset& dataset,
                                  const std::vector<std::string>& users) {
    if (users.empty()) throw std::invalid_argument("pooled_user_counts: no users");
    const std::size_t k = dataset.degree();
    std::vector<CountVector> pooled;
    pooled.reserve(users.size());
    for (const auto& user : users) {
        std::vector<double> sum(k, 0.0);
        for (const auto& [day, cells] : dataset.users.at(user))
            for (const auto& [cell, count] : cells) sum[static_cast<std::size_t>(cell)] += count;
        pooled.push_back(CountVector(std::move(sum)));
    }
    return PopulationData(std::move(pooled));
}

std::vector<RunReport> run_real(const DiscretizedDataset& dataset, const RealConfig& config) {
    config.validate();
    std::vector<std::string> all_users;
    for (const auto& [user, days] : dataset.users) all_users.push_back(user);
    if (all_users.size() < 3) throw std::runtime_error("run_real: need at least 3 users");

    std::vector<RunReport> reports(config.runs);
    auto run_one = [&](std::size_t run) {
        Rng rng = derive_rng(config.seed, run);
        std::vector<std::string> order = all_users;
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t n_world = static_cast<std::size_t>(
            std::lround(config.world_fraction * static_cast<double>(order.size())));
        std::vector<std::string> world_users(order.begin(), order.begin() + static_cast<long>(n_world));
        std::vector<std::string> test_users(order.begin() + static_cast<long>(n_world), order.end());

        std::vector<std::string> eligible;  // test users with enough day records
        for (const auto& u : test_users) {
            if (dataset.users.at(u).size() >= config.min_records_per_user) eligible.push_back(u);
        }
        if (eligible.empty())
            throw std::runtime_error("run_real: no test user has >= " +
                                     std::to_string(config.min_records_per_user) + " day records");
        if (test_users.size() < 2)
            throw std::runtime_error("run_real: need >= 2 test users for impostor draws");

        const DirichletBelief gamma_hat =
            fit_dirichlet(pooled_user_counts(dataset, world_users)).belief;
        const PriorOdds prior(config.p_user_prior);

        const std::size_t n_rules = config.rules.size();
        std::vector<std::vector<char>> errors(n_rules, std::vector<char>(config.reps_per_run, 0));
        std::vector<std::size_t> fp(n_rules, 0), fn(n_rules, 0);

        std::uniform_int_distribution<std::size_t> pick_user(0, eligible.size() - 1);
        std::bernoulli_distribution coin(config.p_user_prior);
        for (std::size_t rep = 0; rep < config.reps_per_run; ++rep) {
            const std::string& user = eligible[pick_user(rng)];
            std::vector<std::string> days;
            for (const auto& [day, cells] : dataset.users.at(user)) days.push_back(day);
            std::shuffle(days.begin(), days.end(), rng);
            const std::size_t n_enroll = days.size() / 2;

            CountVector enrollment = CountVector::zeros(dataset.degree());
            for (std::size_t i = 0; i < n_enroll; ++i)
                enrollment = enrollment + dataset.day_vector(user, days[i]);
            const DirichletBelief psi = user_posterior(gamma_hat, enrollment);

            const bool is_user = coin(rng);
            CountVector obs = CountVector::zeros(dataset.degree());
            if (is_user) {
                std::uniform_int_distribution<std::size_t> pick_day(n_enroll, days.size() - 1);
                obs = dataset.day_vector(user, days[pick_day(rng)]);
            } else {
                std::uniform_int_distribution<std::size_t> pick_other(0, test_users.size() - 1);
                std::string other = user;
                while (other == user) other = test_users[pick_other(rng)];
                std::vector<std::string> other_days;
                for (const auto& [day, cells] : dataset.users.at(other)) other_days.push_back(day);
                std::uniform_int_distribution<std::size_t> pick_day(0, other_days.size() - 1);
                obs = dataset.day_vector(other, other_days[pick_day(rng)]);
            }

            for (std::size_t r = 0; r < n_rules; ++r) {
                const Verdict v = biased_decide_single(psi, gamma_hat, config.rules[r], prior, obs);
                const bool error = v.decided_user != is_user;
                errors[r][rep] = error ? 1 : 0;
                if (error) {
                    if (is_user) ++fp[r];  // legitimate day rejected: false alarm
                    else ++fn[r];          // impostor day accepted
                }
            }
        }

        RunReport report;
        report.run_index = run;
        Rng boot_rng = derive_rng(config.seed, 0xb0075000ULL + run);
        for (std::size_t r = 0; r < n_rules; ++r) {
            const BootstrapSummary b =
                bootstrap_percentiles(errors[r], config.bootstrap_replicates, 5.0, 95.0, boot_rng);
            RuleReport rr;
            rr.rule = config.rules[r].name();
            rr.error_rate = b.mean;
            rr.bootstrap_lo5 = b.lo;
            rr.bootstrap_hi5 = b.hi;
            rr.false_alarms = fp[r];
            rr.missed_impostors = fn[r];
            rr.fp_fn_defined = fn[r] > 0;
            rr.fp_fn_ratio = rr.fp_fn_defined
                                 ? static_cast<double>(fp[r]) / static_cast<double>(fn[r])
                                 : 0.0;
            report.rules.push_back(std::move(rr));
        }
        reports[run] = std::move(report);
    };

    std::size_t n_threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    n_threads = std::max<std::size_t>(1, std::min(n_threads, config.runs));
    if (n_threads == 1) {
        for (std::size_t run = 0; run < config.runs; ++run) run_one(run);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex mu;
        for (std::size_t tid = 0; tid < n_threads; ++tid) {
            pool.emplace_back([&, tid] {
                try {
                    for (std::size_t run = tid; run < config.runs; run += n_threads) run_one(run);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return reports;
}

void write_reports_csv(const std::vector<RunReport>& reports, std::ostream& out) {
    out << "run,rule,err,lo5,hi5,fp,fn,fp_fn_ratio\n";
    char buf[256];
    for (const auto& report : reports) {
        for (const auto& r : report.rules) {
            std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g,%.17g,%zu,%zu,", report.run_index,
                          r.rule.c_str(), r.error_rate, r.bootstrap_lo5, r.bootstrap_hi5,
                          r.false_alarms, r.missed_impostors);
            out << buf;
            if (r.fp_fn_defined) {
                std::snprintf(buf, sizeof(buf), "%.17g\n", r.fp_fn_ratio);
                out << buf;
            } else {
                out << "undefined\n";
            }
        }
    }
}

std::string reports_to_json(const std::vector<RunReport>& reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& report : reports) {
        for (const auto& r : report.rules) {
            nlohmann::json row = {{"run", report.run_index},
                                  {"rule", r.rule},
                                  {"err", r.error_rate},
                                  {"lo5", r.bootstrap_lo5},
                                  {"hi5", r.bootstrap_hi5},
                                  {"fp", r.false_alarms},
                                  {"fn", r.missed_impostors}};
            if (r.fp_fn_defined) row["fp_fn_ratio"] = r.fp_fn_ratio;
            rows.push_back(std::move(row));
        }
    }
    return nlohmann::json{{"reports", rows}}.dump(2);
}

}  // namespace auth
