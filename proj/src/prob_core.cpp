#include "auth/prob_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace auth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_same_degree(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

MultinomialModel::MultinomialModel(std::vector<double> p) : probs(std::move(p)) {
    if (probs.size() < 2) throw std::invalid_argument("MultinomialModel needs degree >= 2");
    double sum = 0.0;
    for (double v : probs) {
        if (!(v >= 0.0)) throw std::invalid_argument("MultinomialModel entries must be >= 0");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("MultinomialModel entries must sum to 1");
}

CountVector::CountVector(std::vector<double> c) : counts(std::move(c)) {
    for (double v : counts) {
        if (!(v >= 0.0)) throw std::invalid_argument("CountVector entries must be >= 0");
    }
}

double CountVector::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

CountVector CountVector::scaled(double factor) const {
    if (!(factor >= 0.0)) throw std::invalid_argument("scale factor must be >= 0");
    std::vector<double> out(counts);
    for (double& v : out) v *= factor;
    return CountVector(std::move(out));
}

CountVector CountVector::operator+(const CountVector& other) const {
    check_same_degree(degree(), other.degree());
    std::vector<double> out(counts);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.counts[i];
    return CountVector(std::move(out));
}

DirichletBelief::DirichletBelief(std::vector<double> p) : phi(std::move(p)) {
    if (phi.size() < 2) throw std::invalid_argument("DirichletBelief needs degree >= 2");
    for (double v : phi) {
        if (!(v > 0.0)) throw std::invalid_argument("DirichletBelief entries must be > 0");
    }
}

double DirichletBelief::concentration() const { return std::accumulate(phi.begin(), phi.end(), 0.0); }

MultinomialModel DirichletBelief::mean() const {
    const double s = concentration();
    std::vector<double> p(phi);
    for (double& v : p) v /= s;
    // renormalize away rounding drift
    double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= sum;
    return MultinomialModel(std::move(p));
}

PriorOdds::PriorOdds(double p) : p_user(p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("PriorOdds requires 0 < p_user < 1");
}

ObservationSequence::ObservationSequence(std::vector<int> it, std::size_t degree)
    : items(std::move(it)), degree_(degree) {
    for (int x : items) {
        if (x < 0 || static_cast<std::size_t>(x) >= degree_)
            throw std::invalid_argument("sequence item out of range");
    }
}

CountVector ObservationSequence::counts() const { return prefix_counts(items.size()); }

CountVector ObservationSequence::prefix_counts(std::size_t t) const {
    if (t > items.size()) throw std::invalid_argument("prefix longer than sequence");
    std::vector<double> c(degree_, 0.0);
    for (std::size_t i = 0; i < t; ++i) c[static_cast<std::size_t>(items[i])] += 1.0;
    return CountVector(std::move(c));
}

ObservationSequence ObservationSequence::prefix(std::size_t t) const {
    if (t > items.size()) throw std::invalid_argument("prefix longer than sequence");
    return ObservationSequence(std::vector<int>(items.begin(), items.begin() + static_cast<long>(t)), degree_);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma requires x > 0");
    return std::lgamma(x);
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma requires x > 0");
    // recurrence up to x >= 10, then the asymptotic expansion
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli-number series
    double series = inv2 * (1.0 / 12.0
                  - inv2 * (1.0 / 120.0
                  - inv2 * (1.0 / 252.0
                  - inv2 * (1.0 / 240.0
                  - inv2 * (1.0 / 132.0)))));
    return result + std::log(x) - 0.5 * inv - series;
}

double log_likelihood(const MultinomialModel& model, const CountVector& obs) {
    check_same_degree(model.degree(), obs.degree());
    double sum = 0.0;
    for (std::size_t i = 0; i < obs.degree(); ++i) {
        const double c = obs.counts[i];
        if (c == 0.0) continue;
        if (model.probs[i] == 0.0) return -kInf;
        sum += c * std::log(model.probs[i]);
    }
    return sum;
}

DirichletBelief posterior_update(const DirichletBelief& belief, const CountVector& obs) {
    check_same_degree(belief.degree(), obs.degree());
    std::vector<double> phi(belief.phi);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] += obs.counts[i];
    return DirichletBelief(std::move(phi));
}

double log_marginal(const DirichletBelief& belief, const CountVector& obs) {
    check_same_degree(belief.degree(), obs.degree());
    const double s = belief.concentration();
    const double n = obs.total();
    double result = std::lgamma(s) - std::lgamma(s + n);
    for (std::size_t i = 0; i < obs.degree(); ++i) {
        const double c = obs.counts[i];
        if (c == 0.0) continue;  // lgamma(phi+0) - lgamma(phi) vanishes
        result += std::lgamma(belief.phi[i] + c) - std::lgamma(belief.phi[i]);
    }
    return result;
}

MultinomialModel sample_dirichlet(const DirichletBelief& belief, Rng& rng) {
    std::vector<double> draws(belief.degree());
    double sum = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        std::gamma_distribution<double> g(belief.phi[i], 1.0);
        draws[i] = g(rng);
        sum += draws[i];
    }
    if (sum <= 0.0) {
        // all Gamma draws underflowed (tiny phi); fall back to the largest phi
        std::size_t best = static_cast<std::size_t>(
            std::max_element(belief.phi.begin(), belief.phi.end()) - belief.phi.begin());
        std::fill(draws.begin(), draws.end(), 0.0);
        draws[best] = 1.0;
        sum = 1.0;
    }
    for (double& v : draws) v /= sum;
    return MultinomialModel(std::move(draws));
}

ObservationSequence sample_sequence(const MultinomialModel& model, std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_sequence requires n >= 1");
    std::discrete_distribution<int> dist(model.probs.begin(), model.probs.end());
    std::vector<int> items(n);
    for (auto& x : items) x = dist(rng);
    return ObservationSequence(std::move(items), model.degree());
}

CountVector sample_counts(const MultinomialModel& model, std::size_t n, Rng& rng) {
    return sample_sequence(model, n, rng).counts();
}

double log_sum_exp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace auth
