#pragma once

#include <cstddef>
#include <vector>

#include "auth/prob_core.hpp"

namespace auth {

// One count vector per person, each drawn from that person's model.
struct PopulationData {
    std::vector<CountVector> users;
    std::size_t dropped_empty = 0;  // zero-total users removed on construction

    explicit PopulationData(std::vector<CountVector> u);
    std::size_t degree() const { return users.front().degree(); }
};

struct FitReport {
    DirichletBelief belief;
    std::size_t iterations = 0;
    double final_relative_change = 0.0;
    bool converged = false;
};

struct FitOptions {
    double tolerance = 1e-8;
    std::size_t max_iterations = 1000;
};

// Moment-matched starting point: pooled frequencies scaled to sum K,
// zero slots floored at 1e-3/K before scaling.
DirichletBelief initialize_phi(const PopulationData& data);

// Polya log-likelihood of the whole population under phi.
double population_log_likelihood(const DirichletBelief& belief, const PopulationData& data);

// Maximum-likelihood Dirichlet via the digamma fixed-point iteration.
FitReport fit_dirichlet(const PopulationData& data, const FitOptions& options = {});

DirichletBelief user_posterior(const DirichletBelief& prior, const CountVector& user_data);

}  // namespace auth
