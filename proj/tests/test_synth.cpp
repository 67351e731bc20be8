#include <stdexcept>
#include <cmath>
#include <sstream>

#include <doctest.h>

#include "auth/experiment_synth.hpp"

using namespace auth;

TEST_CASE("bootstrap_percentiles") {
    Rng rng = make_rng(41);
    const BootstrapSummary zeros =
        bootstrap_percentiles(std::vector<char>(100, 0), 100, 5.0, 95.0, rng);
    CHECK(zeros.lo == 0.0);
    CHECK(zeros.mean == 0.0);
    CHECK(zeros.hi == 0.0);

    const BootstrapSummary ones =
        bootstrap_percentiles(std::vector<char>(100, 1), 100, 5.0, 95.0, rng);
    CHECK(ones.lo == 1.0);
    CHECK(ones.mean == 1.0);
    CHECK(ones.hi == 1.0);

    std::vector<char> coin(10000);
    std::bernoulli_distribution flip(0.5);
    for (auto& c : coin) c = flip(rng) ? 1 : 0;
    const BootstrapSummary fair = bootstrap_percentiles(coin, 100, 5.0, 95.0, rng);
    CHECK(fair.mean == doctest::Approx(0.5).epsilon(0.04));
    CHECK(fair.lo < fair.mean);
    CHECK(fair.mean < fair.hi);

    CHECK_THROWS_AS(bootstrap_percentiles({}, 100, 5.0, 95.0, rng), std::invalid_argument);
}

namespace {

SynthConfig small_config() {
    SynthConfig c;
    c.runs = 200;
    c.degree = 5;
    c.sequence_length = 5;
    c.population_size = 100;
    c.seed = 42;
    return c;
}

}  // namespace

TEST_CASE("length-1 sequences degenerate prefix rules to world") {
    SynthConfig c = small_config();
    c.sequence_length = 1;
    const PrefixErrorCurve curve = run_synthetic(c);
    CHECK(curve.at(1, "bias").err == curve.at(1, "world").err);
    CHECK(curve.at(1, "n-bias").err == curve.at(1, "world").err);
}

TEST_CASE("identical user and adversary models leave a coin flip") {
    SynthConfig c = small_config();
    c.runs = 2000;
    c.force_identical_models = true;
    const PrefixErrorCurve curve = run_synthetic(c);
    const double band = 3.0 * std::sqrt(0.25 / static_cast<double>(c.runs));
    for (const auto& p : curve.points) {
        if (p.rule == "oracle") continue;  // oracle ties break to the user class
        CHECK(std::abs(p.err - 0.5) < band);
    }
}

TEST_CASE("seed determinism, bit-identical curves") {
    const SynthConfig c = small_config();
    const PrefixErrorCurve a = run_synthetic(c);
    const PrefixErrorCurve b = run_synthetic(c);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].err == b.points[i].err);
        CHECK(a.points[i].lo5 == b.points[i].lo5);
        CHECK(a.points[i].hi5 == b.points[i].hi5);
        CHECK(a.points[i].rule == b.points[i].rule);
    }
}

TEST_CASE("error rates are proportions and the oracle leads") {
    SynthConfig c = small_config();
    c.runs = 500;
    const PrefixErrorCurve curve = run_synthetic(c);
    for (const auto& p : curve.points) {
        CHECK(p.err >= 0.0);
        CHECK(p.err <= 1.0);
        CHECK(p.lo5 <= p.err);
        CHECK(p.err <= p.hi5);
        if (p.rule != "oracle") {
            // no rule beats the oracle beyond its bootstrap band
            CHECK(curve.at(p.prefix_len, "oracle").err <= p.hi5);
        }
    }
}

TEST_CASE("oracle error shrinks with long sequences") {
    SynthConfig c;
    c.runs = 400;
    c.degree = 10;
    c.sequence_length = 50;
    c.population_size = 50;
    c.seed = 7;
    const PrefixErrorCurve curve = run_synthetic(c);
    CHECK(curve.at(50, "oracle").err < 0.05);
}

TEST_CASE("curve serialization") {
    SynthConfig c = small_config();
    c.runs = 20;
    const PrefixErrorCurve curve = run_synthetic(c);
    std::ostringstream csv;
    curve.write_csv(csv);
    CHECK(csv.str().rfind("prefix_len,rule,err,lo5,hi5\n", 0) == 0);
    // header plus one row per point
    std::size_t lines = 0;
    for (char ch : csv.str()) {
        if (ch == '\n') ++lines;
    }
    CHECK(lines == curve.points.size() + 1);
    CHECK(curve.to_json().find("\"points\"") != std::string::npos);

    CHECK_THROWS_AS(curve.at(999, "world"), std::out_of_range);
}

TEST_CASE("config validation") {
    SynthConfig c = small_config();
    c.runs = 0;
    CHECK_THROWS_AS(run_synthetic(c), std::invalid_argument);
    c = small_config();
    c.degree = 1;
    CHECK_THROWS_AS(run_synthetic(c), std::invalid_argument);
    c = small_config();
    c.p_user_prior = 1.0;
    CHECK_THROWS_AS(run_synthetic(c), std::invalid_argument);
}
