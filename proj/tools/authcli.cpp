// authcli: Bayesian decision making for authentication without adversary data.
// Subcommands drive the library end to end; all outputs are seed-reproducible.

#include <cstdint>
#include <fstream>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "auth/access_log.hpp"
#include "auth/decision_rules.hpp"
#include "auth/empirical_bayes.hpp"
#include "auth/experiment_real.hpp"
#include "auth/experiment_synth.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<auth::DecisionRule> parse_rules(const std::vector<std::string>& names) {
    std::vector<auth::DecisionRule> rules;
    for (const auto& name : names) {
        if (name == "world") rules.push_back(auth::DecisionRule::world());
        else if (name == "bias") rules.push_back(auth::DecisionRule::bias_all_but_last());
        else if (name == "f-bias") rules.push_back(auth::DecisionRule::full_bias());
        else if (name == "n-bias") rules.push_back(auth::DecisionRule::first_half_bias());
        else if (name.rfind("p-bias", 0) == 0) {
            double w = 0.5;
            if (auto pos = name.find(':'); pos != std::string::npos) w = std::stod(name.substr(pos + 1));
            rules.push_back(auth::DecisionRule::partial_bias(w));
        } else {
            throw std::runtime_error("unknown rule: " + name +
                                     " (expected world, bias, f-bias, p-bias[:w], n-bias)");
        }
    }
    return rules;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian authentication decision rules with a pessimistic adversary bound"};
    app.require_subcommand(1);
    app.set_config("--config");

    // synth
    auto* synth = app.add_subcommand("synth", "run the synthetic prefix-error study");
    auth::SynthConfig sc;
    std::string out_csv, out_json;
    synth->add_option("--runs", sc.runs, "independent experiments");
    synth->add_option("--degree", sc.degree, "multinomial degree K");
    synth->add_option("--n", sc.sequence_length, "observation sequence length");
    synth->add_option("--population", sc.population_size, "users for prior fitting");
    synth->add_option("--shape", sc.gamma_shape, "Gamma shape for true prior parameters");
    synth->add_option("--scale", sc.gamma_scale, "Gamma scale for true prior parameters");
    synth->add_option("--p-user", sc.p_user_prior, "prior probability of the user class");
    synth->add_option("--seed", sc.seed, "random seed");
    synth->add_option("--bootstrap", sc.bootstrap_replicates, "bootstrap replicates");
    synth->add_option("--partial-weight", sc.partial_weight, "p-bias weight");
    bool share_fit = false;
    synth->add_flag("--share-fit", share_fit, "fit one world model and share it across runs");
    synth->add_option("--threads", sc.threads, "worker threads (0 = all cores)");
    synth->add_option("--out", out_csv, "CSV output path");
    synth->add_option("--json-out", out_json, "JSON output path");

    // gen-log
    auto* gen = app.add_subcommand("gen-log", "generate a synthetic access-control log");
    auth::GenProfile gp;
    std::size_t gen_days = 100;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--users", gp.n_users, "number of users");
    gen->add_option("--readers", gp.n_readers, "number of door readers");
    gen->add_option("--days", gen_days, "days of log to generate");
    gen->add_option("--concentration", gp.profile_concentration, "Dirichlet mass of user profiles");
    gen->add_option("--mean-per-day", gp.mean_accesses_per_day, "mean accesses per user per day");
    gen->add_option("--start-date", gp.start_date, "first day, YYYY-MM-DD");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--out", gen_out, "log CSV output path")->required();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse a log CSV and write the discretized dataset");
    std::string ingest_in, ingest_out;
    ingest->add_option("--in", ingest_in, "log CSV input path")->required();
    ingest->add_option("--out", ingest_out, "dataset JSON output path")->required();

    // real
    auto* real = app.add_subcommand("real", "run the enrollment/impostor protocol on a dataset");
    auth::RealConfig rc;
    std::string real_data, real_out, real_json;
    std::vector<std::string> rule_names;
    real->add_option("--data", real_data, "dataset JSON path")->required();
    real->add_option("--runs", rc.runs, "independent runs");
    real->add_option("--reps", rc.reps_per_run, "repetitions per run");
    real->add_option("--world-fraction", rc.world_fraction, "fraction of users fitting the world model");
    real->add_option("--min-records", rc.min_records_per_user, "min day records for a test user");
    real->add_option("--p-user", rc.p_user_prior, "prior probability of the user class");
    real->add_option("--rules", rule_names, "rules: world, f-bias, p-bias[:w], bias, n-bias");
    real->add_option("--seed", rc.seed, "random seed");
    real->add_option("--bootstrap", rc.bootstrap_replicates, "bootstrap replicates");
    real->add_option("--threads", rc.threads, "worker threads (0 = all cores)");
    real->add_option("--out", real_out, "CSV output path");
    real->add_option("--json-out", real_json, "JSON output path");

    // verify-lemma
    auto* lemma = app.add_subcommand("verify-lemma", "randomized sweep of the pessimism inequality");
    std::size_t lemma_trials = 10000;
    std::uint64_t lemma_seed = 0;
    lemma->add_option("--trials", lemma_trials, "random (belief, counts) pairs");
    lemma->add_option("--seed", lemma_seed, "random seed");

    // fit-prior
    auto* fit = app.add_subcommand("fit-prior", "fit the Dirichlet world model from a dataset");
    std::string fit_data, fit_out;
    auth::FitOptions fo;
    bool strict = false;
    fit->add_option("--data", fit_data, "dataset JSON path")->required();
    fit->add_option("--out", fit_out, "fitted parameters JSON output path")->required();
    fit->add_option("--tolerance", fo.tolerance, "relative-change stopping tolerance");
    fit->add_option("--max-iters", fo.max_iterations, "iteration cap");
    fit->add_flag("--strict", strict, "treat non-convergence as an error");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*synth) {
            sc.refit_per_run = !share_fit;
            const auth::PrefixErrorCurve curve = auth::run_synthetic(sc);
            if (!out_csv.empty()) {
                std::ostringstream csv;
                curve.write_csv(csv);
                write_file(out_csv, csv.str());
            }
            if (!out_json.empty()) write_file(out_json, curve.to_json());
            std::cout << "synth: " << sc.runs << " runs, K=" << sc.degree << ", n=" << sc.sequence_length
                      << "; " << curve.points.size() << " curve points\n";
            for (const auto& rule : auth::synth_rule_menu(sc.partial_weight)) {
                const auto& p = curve.at(sc.sequence_length, rule.name());
                std::cout << "  " << rule.name() << " error at t=" << sc.sequence_length << ": " << p.err
                          << " [" << p.lo5 << ", " << p.hi5 << "]\n";
            }
        } else if (*gen) {
            auth::Rng rng = auth::make_rng(gen_seed);
            const auto records = auth::generate_log(gp, gen_days, rng);
            write_file(gen_out, auth::serialize_log(records));
            std::cout << "gen-log: " << records.size() << " records, " << gp.n_users << " users, "
                      << gp.n_readers << " readers, " << gen_days << " days -> " << gen_out << "\n";
        } else if (*ingest) {
            std::ifstream in(ingest_in, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open: " + ingest_in);
            const auth::ParseResult parsed = auth::parse_log(in);
            const auth::DiscretizedDataset ds = auth::discretize(parsed.records);
            write_file(ingest_out, ds.to_json());
            std::cout << "ingest: " << parsed.records.size() << " records ("
                      << parsed.rejects.size() << " rejected), " << ds.users.size() << " users, K="
                      << ds.degree() << " -> " << ingest_out << "\n";
        } else if (*real) {
            if (!rule_names.empty()) rc.rules = parse_rules(rule_names);
            const auth::DiscretizedDataset ds = auth::DiscretizedDataset::from_json(read_file(real_data));
            const auto reports = auth::run_real(ds, rc);
            if (!real_out.empty()) {
                std::ostringstream csv;
                auth::write_reports_csv(reports, csv);
                write_file(real_out, csv.str());
            }
            if (!real_json.empty()) write_file(real_json, auth::reports_to_json(reports));
            for (const auto& report : reports) {
                std::cout << "run " << report.run_index << ":";
                for (const auto& r : report.rules) std::cout << " " << r.rule << "=" << r.error_rate;
                std::cout << "\n";
            }
        } else if (*lemma) {
            auth::Rng rng = auth::make_rng(lemma_seed);
            double min_gap = std::numeric_limits<double>::infinity();
            std::uniform_int_distribution<std::size_t> deg(2, 20);
            std::uniform_int_distribution<std::size_t> len(1, 30);
            std::uniform_real_distribution<double> phi_draw(0.05, 10.0);
            for (std::size_t i = 0; i < lemma_trials; ++i) {
                const std::size_t k = deg(rng);
                std::vector<double> phi(k);
                for (double& v : phi) v = phi_draw(rng);
                const auth::DirichletBelief belief(std::move(phi));
                const auth::MultinomialModel mu = auth::sample_dirichlet(belief, rng);
                const auth::CountVector obs = auth::sample_counts(mu, len(rng), rng);
                min_gap = std::min(min_gap, auth::lemma1_gap(belief, obs));
            }
            std::cout << "verify-lemma: " << lemma_trials << " trials, min gap = " << min_gap << "\n";
            if (min_gap < -1e-12) {
                std::cerr << "pessimism inequality violated\n";
                return kExitNumeric;
            }
        } else if (*fit) {
            const auth::DiscretizedDataset ds = auth::DiscretizedDataset::from_json(read_file(fit_data));
            std::vector<std::string> users;
            for (const auto& [user, days] : ds.users) users.push_back(user);
            const auth::FitReport report = auth::fit_dirichlet(auth::pooled_user_counts(ds, users), fo);
            nlohmann::ordered_json j;
            j["format"] = "dirichlet-prior";
            j["version"] = 1;
            j["degree"] = report.belief.degree();
            j["converged"] = report.converged;
            j["iterations"] = report.iterations;
            j["final_relative_change"] = report.final_relative_change;
            j["phi"] = report.belief.phi;
            write_file(fit_out, j.dump(2));
            std::cout << "fit-prior: K=" << report.belief.degree() << ", "
                      << report.iterations << " iterations, "
                      << (report.converged ? "converged" : "NOT converged") << " -> " << fit_out << "\n";
            if (strict && !report.converged) {
                std::cerr << "fit did not converge within " << fo.max_iterations << " iterations\n";
                return kExitNumeric;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
