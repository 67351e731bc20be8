#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "auth/prob_core.hpp"

namespace auth {

// One granted access: local wall-clock time, door, tag.
struct AccessRecord {
    std::string date;   // YYYY-MM-DD
    int hour = 0;       // 0..23
    int minute = 0;     // 0..59
    std::string reader_id;
    std::string user_id;

    bool operator==(const AccessRecord&) const = default;
};

struct ParseResult {
    std::vector<AccessRecord> records;
    std::vector<std::pair<std::size_t, std::string>> rejects;  // (line number, raw line)
};

// CSV with header naming timestamp, reader_id, user_id columns (any order).
// Malformed rows are collected, not fatal; >50% rejects aborts.
ParseResult parse_log(std::istream& in);

std::string serialize_log(const std::vector<AccessRecord>& records);

constexpr int kHoursPerDay = 24;

// Hour x door counts per (user, day). Cell index = hour * n_readers + reader.
struct DiscretizedDataset {
    std::vector<std::string> readers;  // index = first-appearance order
    // user -> day -> sparse (cell -> count)
    std::map<std::string, std::map<std::string, std::map<int, double>>> users;

    std::size_t n_readers() const { return readers.size(); }
    std::size_t degree() const { return kHoursPerDay * readers.size(); }
    int cell_index(int hour, int reader) const;
    std::pair<int, int> cell_decode(int cell) const;  // (hour, reader)
    double total_count() const;

    CountVector day_vector(const std::string& user, const std::string& day) const;

    std::string to_json() const;
    static DiscretizedDataset from_json(const std::string& text);
};

DiscretizedDataset discretize(const std::vector<AccessRecord>& records);

struct GenProfile {
    std::size_t n_users = 882;
    std::size_t n_readers = 55;
    double profile_concentration = 2.0;  // total Dirichlet mass over the K cells
    double mean_accesses_per_day = 2.3;
    std::string start_date = "2009-01-05";
};

// Synthetic stand-in for a real badge log: each user gets a Dirichlet-drawn
// profile over (hour, door) cells, daily access counts are Poisson.
std::vector<AccessRecord> generate_log(const GenProfile& profile, std::size_t days, Rng& rng);

}  // namespace auth
