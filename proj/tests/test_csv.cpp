#include <cstdlib>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rodimpact/csv_io.hpp"
#include "rodimpact/errors.hpp"

using namespace rodimpact;

TEST_SUITE("csv") {

TEST_CASE("doubles format as the shortest round-trip decimal") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(0.1) == "0.1");

    // Shortest means no superfluous digits even for awkward binary values.
    CHECK(format_double(1.0 / 3.0).size() <= 19);

    // Round-trip exactness over a deterministic spread of magnitudes,
    // including the benchmark's typical scales.
    std::mt19937_64 gen(20240817);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    for (int exp10 = -15; exp10 <= 15; ++exp10) {
        for (int i = 0; i < 20; ++i) {
            const double v = mant(gen) * std::pow(10.0, exp10);
            const std::string s = format_double(v);
            CHECK(std::strtod(s.c_str(), nullptr) == v);
        }
    }
    for (double v : {1e-7, -200e-6, 7.5e4, 2.5, 1.0e9, 5e-4}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("tables carry a version comment, a fixed header, and empty fields") {
    CsvTable t;
    t.schema = "rodimpact-demo v1";
    t.header = {"name", "value", "count"};
    t.rows.push_back({std::string("a"), 1.5, 3});
    t.rows.push_back({std::string("b"), std::optional<double>{}, 0});

    const std::string text = to_csv_string(t);
    CHECK(text ==
          "# rodimpact-demo v1\n"
          "name,value,count\n"
          "a,1.5,3\n"
          "b,,0\n");

    // Well-formedness is enforced: a ragged row cannot be written.
    CsvTable ragged = t;
    ragged.rows.push_back({std::string("c")});
    CHECK_THROWS_AS(ragged.validate(), ValidationError);
    std::ostringstream sink;
    CHECK_THROWS_AS(write_csv(sink, ragged), ValidationError);
}

TEST_CASE("aligned text mirrors the table with '-' for empty cells") {
    CsvTable t;
    t.schema = "rodimpact-demo v1";
    t.header = {"name", "value"};
    t.rows.push_back({std::string("run_one"), 12.5});
    t.rows.push_back({std::string("x"), std::optional<double>{}});

    const std::string text = to_aligned_text(t);
    // Header present, both rows present, empty cell rendered as '-'.
    CHECK(text.find("name") != std::string::npos);
    CHECK(text.find("value") != std::string::npos);
    CHECK(text.find("run_one") != std::string::npos);
    CHECK(text.find("12.5") != std::string::npos);
    CHECK(text.find('-') != std::string::npos);
    // Columns align: every line is equally wide before the trailing newline.
    std::istringstream lines(text);
    std::string line;
    std::size_t width = 0;
    while (std::getline(lines, line)) {
        if (width == 0) width = line.size();
        CHECK(line.size() == width);
    }
}

TEST_CASE("identical payloads serialize byte-identically") {
    auto build = [] {
        CsvTable t;
        t.schema = "rodimpact-demo v1";
        t.header = {"t", "x"};
        double x = 0.3;
        for (int i = 0; i < 200; ++i) {
            x = 3.9 * x * (1.0 - x);  // deterministic, full-precision values
            t.rows.push_back({i * 1e-7, x});
        }
        return to_csv_string(t);
    };
    CHECK(build() == build());
}

}  // TEST_SUITE
