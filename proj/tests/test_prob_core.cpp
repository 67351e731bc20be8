#include <stdexcept>
#include <cmath>
#include <limits>
#include <numbers>

#include <doctest.h>

#include "auth/prob_core.hpp"
#include "oracles.hpp"

using namespace auth;

namespace {
constexpr double kEulerMascheroni = 0.5772156649015328606;
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("log_gamma closed forms") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(0.5) == doctest::Approx(std::log(std::sqrt(std::numbers::pi))).epsilon(1e-13));
    // Gamma(10) = 9!
    double factorial = 1.0;
    for (int i = 2; i <= 9; ++i) factorial *= i;
    CHECK(log_gamma(10.0) == doctest::Approx(std::log(factorial)).epsilon(1e-13));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-1.0), std::domain_error);
}

TEST_CASE("digamma closed forms and recurrence") {
    CHECK(digamma(1.0) == doctest::Approx(-kEulerMascheroni).epsilon(1e-12));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - kEulerMascheroni).epsilon(1e-12));
    CHECK(digamma(0.5) == doctest::Approx(-kEulerMascheroni - 2.0 * std::log(2.0)).epsilon(1e-12));
    for (double x = 0.1; x <= 100.0; x += 0.37) {
        CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-10);
    }
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
}

TEST_CASE("log_likelihood") {
    const MultinomialModel half({0.5, 0.5});
    CHECK(log_likelihood(half, CountVector({1, 0})) == doctest::Approx(std::log(0.5)));
    CHECK(log_likelihood(MultinomialModel({0.8, 0.2}), CountVector({2, 1})) ==
          doctest::Approx(2 * std::log(0.8) + std::log(0.2)));
    CHECK(log_likelihood(MultinomialModel({1.0, 0.0}), CountVector({0, 1})) == -kInf);
    CHECK_THROWS_AS(log_likelihood(half, CountVector({1, 0, 0})), std::invalid_argument);
}

TEST_CASE("posterior_update") {
    const DirichletBelief uniform({1, 1});
    CHECK(posterior_update(uniform, CountVector({3, 2})).phi == std::vector<double>{4, 3});
    CHECK(posterior_update(DirichletBelief({2, 5}), CountVector({0, 0})).phi == std::vector<double>{2, 5});
    CHECK(posterior_update(uniform, CountVector({0.5, 0.5})).phi == std::vector<double>{1.5, 1.5});
    CHECK_THROWS_AS(posterior_update(uniform, CountVector({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("posterior_update composes exactly") {
    Rng rng = make_rng(11);
    // quarter-steps keep every sum exactly representable
    std::uniform_int_distribution<int> q(0, 40);
    auto draw = [&] { return static_cast<double>(q(rng)) * 0.25; };
    for (int trial = 0; trial < 100; ++trial) {
        const DirichletBelief phi({draw() + 0.25, draw() + 0.25, draw() + 0.25});
        const CountVector a({draw(), draw(), draw()});
        const CountVector b({draw(), draw(), draw()});
        CHECK(posterior_update(posterior_update(phi, a), b).phi == posterior_update(phi, a + b).phi);
    }
}

TEST_CASE("log_marginal closed forms and quadrature") {
    CHECK(log_marginal(DirichletBelief({1, 1}), CountVector({1, 0})) == doctest::Approx(std::log(0.5)));
    // uniform prior, two identical draws: int theta^2 = 1/3
    CHECK(log_marginal(DirichletBelief({1, 1}), CountVector({2, 0})) ==
          doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-12));
    CHECK(log_marginal(DirichletBelief({1, 1}), CountVector({2, 0})) ==
          doctest::Approx(oracles::log_marginal_quadrature(1, 1, 2, 0)).epsilon(1e-6));
    CHECK(log_marginal(DirichletBelief({2, 1}), CountVector({1, 1})) ==
          doctest::Approx(oracles::log_marginal_quadrature(2, 1, 1, 1)).epsilon(1e-6));
    CHECK_THROWS_AS(log_marginal(DirichletBelief({1, 1}), CountVector({1, 2, 3})),
                    std::invalid_argument);
}

TEST_CASE("log_marginal chain rule") {
    Rng rng = make_rng(12);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    for (int trial = 0; trial < 500; ++trial) {
        const DirichletBelief phi({u(rng) + 0.2, u(rng) + 0.2, u(rng) + 0.2, u(rng) + 0.2});
        const CountVector a({u(rng), u(rng), u(rng), u(rng)});
        const CountVector b({u(rng), u(rng), u(rng), u(rng)});
        const double joint = log_marginal(phi, a + b);
        const double chained = log_marginal(phi, a) + log_marginal(posterior_update(phi, a), b);
        CHECK(std::abs(joint - chained) < 1e-9);
    }
}

TEST_CASE("log_marginal converges to point-model likelihood") {
    const double total = 1e8;
    const DirichletBelief phi({0.3 * total, 0.7 * total});
    const MultinomialModel point({0.3, 0.7});
    const CountVector c({4, 6});
    CHECK(std::abs(log_marginal(phi, c) - log_likelihood(point, c)) < 1e-3);
}

TEST_CASE("sample_dirichlet moments") {
    Rng rng = make_rng(13);
    const MultinomialModel tight = sample_dirichlet(DirichletBelief({1e6, 1e6}), rng);
    CHECK(tight.probs[0] == doctest::Approx(0.5).epsilon(0.01));

    auto mean_first = [&](const DirichletBelief& b) {
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i) sum += sample_dirichlet(b, rng).probs[0];
        return sum / 1e5;
    };
    CHECK(mean_first(DirichletBelief({1, 1})) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(mean_first(DirichletBelief({9, 1})) == doctest::Approx(0.9).epsilon(0.02));
}

TEST_CASE("sample_counts") {
    Rng rng = make_rng(14);
    CHECK(sample_counts(MultinomialModel({1.0, 0.0}), 5, rng).counts == std::vector<double>{5, 0});

    const CountVector big = sample_counts(MultinomialModel({0.5, 0.5}), 100000, rng);
    CHECK(big.total() == doctest::Approx(100000.0));
    CHECK(big.counts[0] / 1e5 == doctest::Approx(0.5).epsilon(0.02));

    const CountVector one = sample_counts(MultinomialModel({0.3, 0.3, 0.4}), 1, rng);
    CHECK(one.total() == doctest::Approx(1.0));
    int nonzero = 0;
    for (double c : one.counts) {
        if (c > 0) ++nonzero;
    }
    CHECK(nonzero == 1);
}

TEST_CASE("sequence keeps ordering and prefixes") {
    Rng rng = make_rng(15);
    const ObservationSequence seq = sample_sequence(MultinomialModel({0.2, 0.5, 0.3}), 20, rng);
    CHECK(seq.size() == 20);
    CHECK(seq.counts().total() == doctest::Approx(20.0));
    const CountVector head = seq.prefix_counts(7);
    CHECK(head.total() == doctest::Approx(7.0));
    CHECK((seq.prefix(7).counts() + seq.prefix(7).counts()).degree() == 3);
}

TEST_CASE("type invariants enforced") {
    CHECK_THROWS_AS(MultinomialModel({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(MultinomialModel({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(CountVector({-1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(DirichletBelief({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PriorOdds(0.0), std::invalid_argument);
    CHECK_THROWS_AS(PriorOdds(1.0), std::invalid_argument);
}
