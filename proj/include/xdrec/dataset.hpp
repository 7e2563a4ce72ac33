#pragma once

#include <optional>
#include <string>

#include "xdrec/ratings.hpp"

namespace xdrec {

enum class FileFormat {
    Tsv,  // "user<TAB>item<TAB>rating[<TAB>timestamp]" (MovieLens u.data)
    Csv,  // "user,item,rating[,extra]", optional header line
};

struct DatasetSpec {
    std::string path;
    FileFormat format = FileFormat::Csv;
    // When set, keep only the first N distinct user/item ids in ascending
    // original-id order, then compact.
    std::optional<int> max_users;
    std::optional<int> max_items;
    int id_base = 0;  // smallest legal id in the file (0 or 1)
    int r_max = 5;
};

// Parses the file into a compacted zero-based matrix. Ratings of 0 are
// missing markers and get skipped; duplicate (user, item) pairs keep the
// last occurrence with a warning on stderr.
// Throws DataError: FileNotFound, ParseError, EmptyAfterFilter.
SparseRatingMatrix load(const DatasetSpec& spec);

struct DatasetStats {
    int n_users = 0;
    int n_items = 0;
    double observed_percentage = 0.0;  // 100 * |observed| / (users * items)
};

DatasetStats stats(const SparseRatingMatrix& m);

// "user,item,rating" rows; load(save_csv(m)) reproduces the triple set.
void save_csv(const SparseRatingMatrix& m, const std::string& path);

}  // namespace xdrec
