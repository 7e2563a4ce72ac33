#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "helpers.hpp"
#include "xdrec/dataset.hpp"

using namespace xdrec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("xdrec-test-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        auto p = path / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }
    static inline int counter = 0;
};

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("tab-separated lines with ignored timestamps") {
    TempDir dir;
    auto path = dir.file("u.data", "196\t242\t3\t881250949\n186\t302\t3\t891717742\n");
    DatasetSpec spec{path, FileFormat::Tsv};
    auto m = load(spec);
    CHECK(m.n_users() == 2);
    CHECK(m.n_items() == 2);
    CHECK(m.n_observed() == 2);
    // ids compact in ascending original order: 186 -> 0, 196 -> 1
    CHECK(m.triples()[0].user == 0);
    CHECK(m.triples()[0].rating == 3);
}

TEST_CASE("comma-separated lines, optional header, zero means missing") {
    TempDir dir;
    auto path = dir.file("r.csv", "user,item,rating\n12,7,4\n1,2,0\n3,2,5\n");
    auto m = load({path, FileFormat::Csv});
    CHECK(m.n_observed() == 2);  // header skipped, zero-rating line skipped
    CHECK(m.n_users() == 2);     // users 3 and 12
    CHECK(m.n_items() == 2);     // items 2 and 7
    auto stats_out = stats(m);
    CHECK(stats_out.observed_percentage == doctest::Approx(50.0));
}

TEST_CASE("duplicates keep the last occurrence") {
    TempDir dir;
    auto path = dir.file("dup.csv", "0,0,2\n0,1,3\n0,0,5\n");
    auto m = load({path, FileFormat::Csv});
    CHECK(m.n_observed() == 2);
    for (const auto& t : m.triples()) {
        if (t.user == 0 && t.item == 0) CHECK(t.rating == 5);
    }
}

TEST_CASE("max_users keeps the first N ids in ascending order") {
    TempDir dir;
    auto path = dir.file("sub.csv", "9,0,1\n3,0,2\n7,1,3\n5,1,4\n9,1,5\n");
    DatasetSpec spec{path, FileFormat::Csv};
    spec.max_users = 2;  // keeps original ids 3 and 5
    auto m = load(spec);
    CHECK(m.n_users() == 2);
    std::set<int> ratings;
    for (const auto& t : m.triples()) ratings.insert(t.rating);
    CHECK(ratings == std::set<int>{2, 4});

    spec.max_users = std::nullopt;
    spec.max_items = 1;  // keeps item 0 only
    auto m2 = load(spec);
    CHECK(m2.n_items() == 1);
    CHECK(m2.n_observed() == 2);
}

TEST_CASE("stats percentage on a 2x2 matrix with one entry") {
    auto m = build_matrix({{0, 1, 4}}, 2, 2, 5);
    auto s = stats(m);
    CHECK(s.n_users == 2);
    CHECK(s.n_items == 2);
    CHECK(s.observed_percentage == doctest::Approx(25.0));
}

TEST_CASE("save/load round-trip preserves the triple set") {
    Rng rng(60);
    auto m = testing::random_matrix(rng, 9, 7, 0.4);
    TempDir dir;
    auto path = (dir.path / "roundtrip.csv").string();
    save_csv(m, path);
    auto re = load({path, FileFormat::Csv});
    REQUIRE(re.n_observed() == m.n_observed());
    for (std::size_t i = 0; i < m.triples().size(); ++i) {
        CHECK(re.triples()[i].user == m.triples()[i].user);
        CHECK(re.triples()[i].item == m.triples()[i].item);
        CHECK(re.triples()[i].rating == m.triples()[i].rating);
    }
}

TEST_CASE("error paths carry their codes") {
    TempDir dir;
    CHECK_THROWS_WITH_AS(load({(dir.path / "nope.csv").string(), FileFormat::Csv}),
                         doctest::Contains("FileNotFound"), DataError);

    auto bad = dir.file("bad.csv", "0,0,3\n0,1\n");
    CHECK_THROWS_WITH_AS(load({bad, FileFormat::Csv}), doctest::Contains(":2:"), DataError);

    auto badrating = dir.file("badrating.csv", "0,0,3\n0,1,9\n");
    CHECK_THROWS_WITH_AS(load({badrating, FileFormat::Csv}), doctest::Contains("ParseError"),
                         DataError);

    auto zeros = dir.file("zeros.csv", "0,0,0\n1,1,0\n");
    CHECK_THROWS_WITH_AS(load({zeros, FileFormat::Csv}), doctest::Contains("EmptyAfterFilter"),
                         DataError);

    auto below_base = dir.file("base.csv", "0,1,3\n");
    DatasetSpec spec{below_base, FileFormat::Csv};
    spec.id_base = 1;
    CHECK_THROWS_WITH_AS(load(spec), doctest::Contains("ParseError"), DataError);
}

TEST_CASE("load is deterministic") {
    TempDir dir;
    auto path = dir.file("det.csv", "5,5,3\n1,2,4\n2,1,2\n");
    auto a = load({path, FileFormat::Csv});
    auto b = load({path, FileFormat::Csv});
    REQUIRE(a.n_observed() == b.n_observed());
    for (std::size_t i = 0; i < a.triples().size(); ++i) {
        CHECK(a.triples()[i].user == b.triples()[i].user);
        CHECK(a.triples()[i].item == b.triples()[i].item);
    }
}

}  // TEST_SUITE
