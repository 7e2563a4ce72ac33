#include "xdrec/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace xdrec {

namespace {

struct RawTriple {
    long long user;
    long long item;
    int rating;
};

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) fields.push_back(cur);
    return fields;
}

bool parse_ll(const std::string& s, long long& out) {
    try {
        std::size_t used = 0;
        out = std::stoll(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_rating(const std::string& s, int r_max, int& out) {
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(s, &used);
        if (used != s.size()) return false;
    } catch (...) {
        return false;
    }
    double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9) return false;  // integer rating levels only
    if (rounded < 0.0 || rounded > r_max) return false;
    out = static_cast<int>(rounded);
    return true;
}

[[noreturn]] void parse_error(const std::string& path, std::size_t line_no,
                              const std::string& why) {
    throw DataError("ParseError", path + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace

SparseRatingMatrix load(const DatasetSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) throw DataError("FileNotFound", spec.path);

    const char sep = spec.format == FileFormat::Tsv ? '\t' : ',';
    std::vector<RawTriple> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_fields(line, sep);
        if (fields.size() < 3) parse_error(spec.path, line_no, "expected at least 3 fields");

        long long user = 0, item = 0;
        if (!parse_ll(fields[0], user) || !parse_ll(fields[1], item)) {
            // a CSV header line is fine, anything later is not
            if (line_no == 1 && spec.format == FileFormat::Csv) continue;
            parse_error(spec.path, line_no, "ids are not integers");
        }
        if (user < spec.id_base || item < spec.id_base) {
            parse_error(spec.path, line_no, "id below id_base " + std::to_string(spec.id_base));
        }
        int rating = 0;
        if (!parse_rating(fields[2], spec.r_max, rating)) {
            parse_error(spec.path, line_no,
                        "rating '" + fields[2] + "' not an integer in 0.." +
                            std::to_string(spec.r_max));
        }
        if (rating == 0) continue;  // 0 marks a missing value
        raw.push_back({user, item, rating});
    }

    // "first N" = the N smallest distinct original ids
    std::map<long long, int> user_index, item_index;
    for (const auto& t : raw) {
        user_index.emplace(t.user, 0);
        item_index.emplace(t.item, 0);
    }
    auto truncate = [](std::map<long long, int>& index, std::optional<int> cap) {
        if (cap && static_cast<std::size_t>(*cap) < index.size()) {
            auto it = index.begin();
            std::advance(it, *cap);
            index.erase(it, index.end());
        }
        int next = 0;
        for (auto& [id, compact] : index) compact = next++;
    };
    truncate(user_index, spec.max_users);
    truncate(item_index, spec.max_items);

    std::map<std::pair<int, int>, int> deduped;
    std::size_t duplicates = 0;
    for (const auto& t : raw) {
        auto u = user_index.find(t.user);
        auto i = item_index.find(t.item);
        if (u == user_index.end() || i == item_index.end()) continue;
        auto [it, inserted] = deduped.insert_or_assign({u->second, i->second}, t.rating);
        if (!inserted) {
            ++duplicates;
            if (duplicates <= 5) {
                std::cerr << "warning: duplicate rating for (" << t.user << "," << t.item
                          << ") in " << spec.path << ", keeping the last occurrence\n";
            }
        }
    }
    if (duplicates > 5) {
        std::cerr << "warning: " << duplicates << " duplicate ratings total in " << spec.path
                  << "\n";
    }
    if (deduped.empty()) throw DataError("EmptyAfterFilter", spec.path);

    std::vector<RatingTriple> triples;
    triples.reserve(deduped.size());
    for (const auto& [key, rating] : deduped) triples.push_back({key.first, key.second, rating});
    return build_matrix(std::move(triples), static_cast<int>(user_index.size()),
                        static_cast<int>(item_index.size()), spec.r_max);
}

DatasetStats stats(const SparseRatingMatrix& m) {
    DatasetStats s;
    s.n_users = m.n_users();
    s.n_items = m.n_items();
    s.observed_percentage = 100.0 * m.density();
    return s;
}

void save_csv(const SparseRatingMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("FileNotFound", "cannot open " + path + " for writing");
    for (const auto& t : m.triples()) {
        out << t.user << ',' << t.item << ',' << t.rating << '\n';
    }
}

}  // namespace xdrec
