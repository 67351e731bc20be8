#include "auth/access_log.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace auth {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// "YYYY-MM-DDTHH:MM" (optional ":SS", space accepted for 'T')
bool parse_timestamp(const std::string& ts, std::string& date, int& hour, int& minute) {
    if (ts.size() < 16) return false;
    if (ts[4] != '-' || ts[7] != '-' || (ts[10] != 'T' && ts[10] != ' ') || ts[13] != ':') return false;
    const std::string y = ts.substr(0, 4), mo = ts.substr(5, 2), d = ts.substr(8, 2);
    const std::string h = ts.substr(11, 2), mi = ts.substr(14, 2);
    if (!all_digits(y) || !all_digits(mo) || !all_digits(d) || !all_digits(h) || !all_digits(mi)) return false;
    const int month = std::stoi(mo), day = std::stoi(d);
    hour = std::stoi(h);
    minute = std::stoi(mi);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59) return false;
    date = ts.substr(0, 10);
    return true;
}

std::string format_date(std::chrono::sys_days d) {
    const std::chrono::year_month_day ymd(d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

std::chrono::sys_days parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
        throw std::invalid_argument("bad date: " + s);
    return std::chrono::sys_days(std::chrono::year(y) / m / d);
}

}  // namespace

ParseResult parse_log(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse_log: empty or unreadable input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    int ts_col = -1, reader_col = -1, user_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "timestamp") ts_col = static_cast<int>(i);
        else if (header[i] == "reader_id") reader_col = static_cast<int>(i);
        else if (header[i] == "user_id") user_col = static_cast<int>(i);
    }
    if (ts_col < 0 || reader_col < 0 || user_col < 0)
        throw std::runtime_error("parse_log: header must name timestamp, reader_id, user_id");

    ParseResult result;
    std::size_t line_no = 1;
    const std::size_t need = static_cast<std::size_t>(std::max({ts_col, reader_col, user_col})) + 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        AccessRecord rec;
        if (fields.size() < need ||
            !parse_timestamp(fields[static_cast<std::size_t>(ts_col)], rec.date, rec.hour, rec.minute) ||
            fields[static_cast<std::size_t>(reader_col)].empty() ||
            fields[static_cast<std::size_t>(user_col)].empty()) {
            result.rejects.emplace_back(line_no, line);
            continue;
        }
        rec.reader_id = fields[static_cast<std::size_t>(reader_col)];
        rec.user_id = fields[static_cast<std::size_t>(user_col)];
        result.records.push_back(std::move(rec));
    }
    const std::size_t total = result.records.size() + result.rejects.size();
    if (total > 0 && result.rejects.size() * 2 > total)
        throw std::runtime_error("parse_log: over half the rows rejected, schema mismatch?");
    return result;
}

std::string serialize_log(const std::vector<AccessRecord>& records) {
    std::string out = "timestamp,reader_id,user_id\n";
    char buf[32];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "T%02d:%02d,", r.hour, r.minute);
        out += r.date;
        out += buf;
        out += r.reader_id;
        out += ',';
        out += r.user_id;
        out += '\n';
    }
    return out;
}

int DiscretizedDataset::cell_index(int hour, int reader) const {
    return hour * static_cast<int>(n_readers()) + reader;
}

std::pair<int, int> DiscretizedDataset::cell_decode(int cell) const {
    const int nr = static_cast<int>(n_readers());
    return {cell / nr, cell % nr};
}

double DiscretizedDataset::total_count() const {
    double total = 0.0;
    for (const auto& [user, days] : users)
        for (const auto& [day, cells] : days)
            for (const auto& [cell, count] : cells) total += count;
    return total;
}

CountVector DiscretizedDataset::day_vector(const std::string& user, const std::string& day) const {
    std::vector<double> c(degree(), 0.0);
    for (const auto& [cell, count] : users.at(user).at(day)) c[static_cast<std::size_t>(cell)] = count;
    return CountVector(std::move(c));
}

DiscretizedDataset discretize(const std::vector<AccessRecord>& records) {
    if (records.empty()) throw std::invalid_argument("discretize: no records");
    DiscretizedDataset ds;
    std::map<std::string, int> reader_idx;
    for (const auto& r : records) {
        auto [it, inserted] = reader_idx.try_emplace(r.reader_id, static_cast<int>(ds.readers.size()));
        if (inserted) ds.readers.push_back(r.reader_id);
    }
    const int nr = static_cast<int>(ds.readers.size());
    for (const auto& r : records) {
        const int cell = r.hour * nr + reader_idx.at(r.reader_id);
        ds.users[r.user_id][r.date][cell] += 1.0;
    }
    return ds;
}

std::string DiscretizedDataset::to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "discretized-dataset";
    j["version"] = 1;
    j["hours_per_day"] = kHoursPerDay;
    j["readers"] = readers;
    nlohmann::ordered_json ju = nlohmann::ordered_json::object();
    for (const auto& [user, days] : users) {
        nlohmann::ordered_json jd = nlohmann::ordered_json::object();
        for (const auto& [day, cells] : days) {
            nlohmann::ordered_json jc = nlohmann::ordered_json::object();
            for (const auto& [cell, count] : cells) jc[std::to_string(cell)] = count;
            jd[day] = std::move(jc);
        }
        ju[user] = std::move(jd);
    }
    j["users"] = std::move(ju);
    return j.dump(2);
}

DiscretizedDataset DiscretizedDataset::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "discretized-dataset")
        throw std::runtime_error("not a discretized-dataset file");
    if (j.value("version", 0) != 1) throw std::runtime_error("unsupported dataset version");
    DiscretizedDataset ds;
    ds.readers = j.at("readers").get<std::vector<std::string>>();
    for (const auto& [user, days] : j.at("users").items()) {
        for (const auto& [day, cells] : days.items()) {
            for (const auto& [cell, count] : cells.items()) {
                ds.users[user][day][std::stoi(cell)] = count.get<double>();
            }
        }
    }
    return ds;
}

std::vector<AccessRecord> generate_log(const GenProfile& profile, std::size_t days, Rng& rng) {
    if (profile.n_users < 1 || profile.n_readers < 1) throw std::invalid_argument("empty profile");
    const std::size_t k = kHoursPerDay * profile.n_readers;

    std::vector<MultinomialModel> user_profiles;
    user_profiles.reserve(profile.n_users);
    const DirichletBelief profile_prior(
        std::vector<double>(k, profile.profile_concentration / static_cast<double>(k)));
    for (std::size_t u = 0; u < profile.n_users; ++u)
        user_profiles.push_back(sample_dirichlet(profile_prior, rng));

    const auto start = parse_date(profile.start_date);
    std::poisson_distribution<int> per_day(profile.mean_accesses_per_day);
    std::uniform_int_distribution<int> minute(0, 59);

    std::vector<AccessRecord> records;
    char name[16];
    for (std::size_t d = 0; d < days; ++d) {
        const std::string date = format_date(start + std::chrono::days(static_cast<long>(d)));
        for (std::size_t u = 0; u < profile.n_users; ++u) {
            const int accesses = per_day(rng);
            if (accesses == 0) continue;
            std::discrete_distribution<int> cell_dist(user_profiles[u].probs.begin(),
                                                      user_profiles[u].probs.end());
            for (int a = 0; a < accesses; ++a) {
                const int cell = cell_dist(rng);
                const int hour = cell / static_cast<int>(profile.n_readers);
                const int reader = cell % static_cast<int>(profile.n_readers);
                AccessRecord rec;
                rec.date = date;
                rec.hour = hour;
                rec.minute = minute(rng);
                std::snprintf(name, sizeof(name), "door-%02d", reader);
                rec.reader_id = name;
                std::snprintf(name, sizeof(name), "u%04zu", u);
                rec.user_id = name;
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

}  // namespace auth
