#include <stdexcept>
#include <cmath>
#include <sstream>

#include <doctest.h>

#include "auth/experiment_real.hpp"

using namespace auth;

namespace {

DiscretizedDataset make_dataset(std::size_t users, std::size_t readers, double concentration,
                                std::size_t days, std::uint64_t seed) {
    GenProfile p;
    p.n_users = users;
    p.n_readers = readers;
    p.profile_concentration = concentration;
    p.mean_accesses_per_day = 3.0;
    Rng rng = make_rng(seed);
    return discretize(generate_log(p, days, rng));
}

}  // namespace

TEST_CASE("pooled_user_counts sums day vectors") {
    DiscretizedDataset ds;
    ds.readers = {"a"};
    ds.users["u1"]["d1"][0] = 1.0;
    ds.users["u1"]["d2"][1] = 2.0;
    ds.users["u2"]["d1"][2] = 4.0;
    const PopulationData pooled = pooled_user_counts(ds, {"u1", "u2"});
    CHECK(pooled.users[0].counts[0] == 1.0);
    CHECK(pooled.users[0].counts[1] == 2.0);
    CHECK(pooled.users[1].counts[2] == 4.0);
    CHECK_THROWS_AS(pooled_user_counts(ds, {}), std::invalid_argument);
}

TEST_CASE("indistinguishable users leave a coin flip") {
    // near-uniform profiles: impostor days look exactly like user days
    const DiscretizedDataset ds = make_dataset(20, 3, 1e6, 60, 61);
    RealConfig c;
    c.runs = 2;
    c.reps_per_run = 400;
    c.min_records_per_user = 10;
    c.seed = 1;
    const auto reports = run_real(ds, c);
    for (const auto& report : reports) {
        for (const auto& r : report.rules) {
            CHECK(std::abs(r.error_rate - 0.5) < 0.12);
        }
    }
}

TEST_CASE("well-separated users are easy") {
    // sparse profiles: users prefer disjoint (hour, door) cells
    const DiscretizedDataset ds = make_dataset(30, 12, 0.2, 60, 62);
    RealConfig c;
    c.runs = 1;
    c.reps_per_run = 1000;
    c.seed = 2;
    const auto reports = run_real(ds, c);
    for (const auto& r : reports[0].rules) {
        CHECK(r.error_rate < 0.1);
    }
}

TEST_CASE("rule subset plumbing") {
    const DiscretizedDataset ds = make_dataset(12, 3, 2.0, 40, 63);
    RealConfig c;
    c.runs = 1;
    c.reps_per_run = 50;
    c.rules = {DecisionRule::world()};
    c.seed = 3;
    const auto reports = run_real(ds, c);
    REQUIRE(reports[0].rules.size() == 1);
    CHECK(reports[0].rules[0].rule == "world");
    CHECK_THROWS_AS(reports[0].rule("f-bias"), std::out_of_range);
}

TEST_CASE("seed determinism") {
    const DiscretizedDataset ds = make_dataset(12, 3, 2.0, 40, 64);
    RealConfig c;
    c.runs = 2;
    c.reps_per_run = 100;
    c.seed = 4;
    const auto a = run_real(ds, c);
    const auto b = run_real(ds, c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t r = 0; r < a[i].rules.size(); ++r) {
            CHECK(a[i].rules[r].error_rate == b[i].rules[r].error_rate);
            CHECK(a[i].rules[r].false_alarms == b[i].rules[r].false_alarms);
            CHECK(a[i].rules[r].missed_impostors == b[i].rules[r].missed_impostors);
        }
    }
}

TEST_CASE("insufficient qualifying users is a named error") {
    const DiscretizedDataset ds = make_dataset(6, 3, 2.0, 4, 65);  // nobody has 10 days
    RealConfig c;
    c.runs = 1;
    c.reps_per_run = 10;
    c.seed = 5;
    CHECK_THROWS_WITH_AS(run_real(ds, c), doctest::Contains(">= 10"), std::runtime_error);
}

TEST_CASE("oracle rule rejected for log data") {
    RealConfig c;
    c.rules = {DecisionRule::oracle()};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("report serialization") {
    const DiscretizedDataset ds = make_dataset(12, 3, 2.0, 40, 66);
    RealConfig c;
    c.runs = 1;
    c.reps_per_run = 100;
    c.seed = 6;
    const auto reports = run_real(ds, c);
    std::ostringstream csv;
    write_reports_csv(reports, csv);
    CHECK(csv.str().rfind("run,rule,err,lo5,hi5,fp,fn,fp_fn_ratio\n", 0) == 0);
    CHECK(reports_to_json(reports).find("\"reports\"") != std::string::npos);
}
