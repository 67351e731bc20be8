#include "auth/empirical_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <stdexcept>

namespace auth {

namespace {
constexpr double kPhiFloor = 1e-10;
}

PopulationData::PopulationData(std::vector<CountVector> u) {
    for (auto& cv : u) {
        if (cv.total() > 0.0) {
            users.push_back(std::move(cv));
        } else {
            ++dropped_empty;
        }
    }
    if (dropped_empty > 0) {
        std::cerr << "warning: dropped " << dropped_empty << " user(s) with zero total counts\n";
    }
    if (users.size() < 2) throw std::invalid_argument("PopulationData needs at least 2 non-empty users");
    const std::size_t k = users.front().degree();
    if (k < 2) throw std::invalid_argument("PopulationData needs degree >= 2");
    for (const auto& cv : users) {
        if (cv.degree() != k) throw std::invalid_argument("PopulationData users disagree on degree");
    }
}

DirichletBelief initialize_phi(const PopulationData& data) {
    const std::size_t k = data.degree();
    std::vector<double> pooled(k, 0.0);
    double total = 0.0;
    for (const auto& cv : data.users) {
        for (std::size_t i = 0; i < k; ++i) pooled[i] += cv.counts[i];
        total += cv.total();
    }
    const double floor = 1e-3 / static_cast<double>(k);
    double sum = 0.0;
    for (double& v : pooled) {
        v = std::max(v / total, floor);
        sum += v;
    }
    for (double& v : pooled) v *= static_cast<double>(k) / sum;
    return DirichletBelief(std::move(pooled));
}

double population_log_likelihood(const DirichletBelief& belief, const PopulationData& data) {
    double sum = 0.0;
    for (const auto& cv : data.users) sum += log_marginal(belief, cv);
    return sum;
}

FitReport fit_dirichlet(const PopulationData& data, const FitOptions& options) {
    if (!(options.tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    const std::size_t k = data.degree();
    const double n_users = static_cast<double>(data.users.size());

    // column-sparse view: per slot, the nonzero counts across users
    std::vector<std::vector<double>> nonzero(k);
    std::map<double, std::size_t> total_hist;  // user total -> multiplicity
    for (const auto& cv : data.users) {
        for (std::size_t i = 0; i < k; ++i) {
            if (cv.counts[i] > 0.0) nonzero[i].push_back(cv.counts[i]);
        }
        ++total_hist[cv.total()];
    }

    std::vector<double> phi = initialize_phi(data).phi;
    FitReport report{DirichletBelief(phi)};
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        double s = 0.0;
        for (double v : phi) s += v;
        double denom = -n_users * digamma(s);
        for (const auto& [n_k, mult] : total_hist) denom += static_cast<double>(mult) * digamma(n_k + s);

        double max_rel_change = 0.0;
        std::vector<double> next(k);
        for (std::size_t i = 0; i < k; ++i) {
            double numer = 0.0;
            const double d_phi = digamma(phi[i]);
            for (double c : nonzero[i]) numer += digamma(c + phi[i]) - d_phi;
            next[i] = std::max(phi[i] * numer / denom, kPhiFloor);
            max_rel_change = std::max(max_rel_change, std::abs(next[i] - phi[i]) / phi[i]);
        }
        phi = std::move(next);
        report.iterations = iter + 1;
        report.final_relative_change = max_rel_change;
        if (max_rel_change <= options.tolerance) {
            report.converged = true;
            break;
        }
    }
    report.belief = DirichletBelief(std::move(phi));
    return report;
}

DirichletBelief user_posterior(const DirichletBelief& prior, const CountVector& user_data) {
    return posterior_update(prior, user_data);
}

}  // namespace auth
