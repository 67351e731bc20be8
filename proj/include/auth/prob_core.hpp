#pragma once

#include <cstddef>
#include <vector>

#include "auth/rng.hpp"

namespace auth {

// A point on the probability simplex of degree K.
struct MultinomialModel {
    std::vector<double> probs;

    explicit MultinomialModel(std::vector<double> p);
    std::size_t degree() const { return probs.size(); }
};

// Event counts for a degree-K observation. Entries may be fractional
// (weighted conditioning); each entry must be nonnegative.
struct CountVector {
    std::vector<double> counts;

    CountVector() = default;
    explicit CountVector(std::vector<double> c);
    static CountVector zeros(std::size_t k) { return CountVector(std::vector<double>(k, 0.0)); }

    std::size_t degree() const { return counts.size(); }
    double total() const;
    CountVector scaled(double factor) const;
    CountVector operator+(const CountVector& other) const;
};

// Dirichlet pseudo-counts; all entries strictly positive.
struct DirichletBelief {
    std::vector<double> phi;

    explicit DirichletBelief(std::vector<double> p);
    std::size_t degree() const { return phi.size(); }
    double concentration() const;
    MultinomialModel mean() const;
};

struct PriorOdds {
    double p_user;

    explicit PriorOdds(double p);
};

// An ordered categorical sequence together with its degree. Prefix/suffix
// bias rules need the ordering, counts alone are not enough.
struct ObservationSequence {
    std::vector<int> items;  // each in [0, degree)
    std::size_t degree_ = 0;

    ObservationSequence() = default;
    ObservationSequence(std::vector<int> it, std::size_t degree);

    std::size_t size() const { return items.size(); }
    std::size_t degree() const { return degree_; }
    CountVector counts() const;
    // Counts of the first t items.
    CountVector prefix_counts(std::size_t t) const;
    ObservationSequence prefix(std::size_t t) const;
};

double log_gamma(double x);
double digamma(double x);

// Sequence log-likelihood sum_i c_i * ln mu_i (no multinomial coefficient).
// Returns -inf when some c_i > 0 has mu_i = 0.
double log_likelihood(const MultinomialModel& model, const CountVector& obs);

// Conjugate update phi'_i = phi_i + c_i.
DirichletBelief posterior_update(const DirichletBelief& belief, const CountVector& obs);

// Polya (Dirichlet-compound-multinomial) log marginal of the counts,
// without the multinomial coefficient.
double log_marginal(const DirichletBelief& belief, const CountVector& obs);

MultinomialModel sample_dirichlet(const DirichletBelief& belief, Rng& rng);

// n i.i.d. categorical draws; the ordered sequence is preserved.
ObservationSequence sample_sequence(const MultinomialModel& model, std::size_t n, Rng& rng);
CountVector sample_counts(const MultinomialModel& model, std::size_t n, Rng& rng);

double log_sum_exp(double a, double b);

}  // namespace auth
