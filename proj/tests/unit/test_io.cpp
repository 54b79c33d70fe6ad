#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "coagfrag/error.hpp"
#include "csv_io.hpp"

using namespace coagfrag;

TEST_CASE("CSV round trip is bit exact") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::uint64_t> bits;
    io::CsvTable table{{"a", "b", "c"}, {}};
    for (int r = 0; r < 500; ++r) {
        std::vector<double> row;
        for (int c = 0; c < 3; ++c) {
            double v;
            do {
                const std::uint64_t b = bits(rng);
                std::memcpy(&v, &b, sizeof v);
            } while (!std::isfinite(v));
            row.push_back(v);
        }
        table.rows.push_back(row);
    }
    table.rows.push_back({0.0, -0.0, std::numeric_limits<double>::denorm_min()});
    table.rows.push_back({1e-300, 0.1, 1.0 / 3.0});

    const auto back = io::parse_csv(io::format_csv(table));
    CHECK(back.header == table.header);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(std::memcmp(&back.rows[r][c], &table.rows[r][c], sizeof(double)) == 0);
        }
    }
}

TEST_CASE("CSV layout and tolerated variations") {
    io::CsvTable t{{"x", "y"}, {{1.0, 0.5}}};
    CHECK(io::format_csv(t) == "x,y\n1,0.5\n");
    const auto p = io::parse_csv("x, y\r\n\n 1 ,2\r\n\n3,4");
    CHECK(p.header == std::vector<std::string>{"x", "y"});
    REQUIRE(p.rows.size() == 2);
    CHECK(p.rows[1][1] == 4.0);
    CHECK(p.column("y") == 1);
    CHECK_THROWS_AS(p.column("z"), ValidationError);
    CHECK(io::parse_csv("x\n").rows.empty());
}

TEST_CASE("malformed CSV names the line") {
    auto message = [](const std::string& text) {
        try {
            (void)io::parse_csv(text, "mu.csv");
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("x,t\n1,2\n3,abc\n") == "mu.csv:3: not a number: 'abc'");
    CHECK(message("x,t\n1,2\n\n3\n") == "mu.csv:4: expected 2 fields, found 1");
    CHECK(message("x,,t\n") == "mu.csv:1: empty column name in header");
    CHECK(message("") == "mu.csv: missing header row");
}

TEST_CASE("files") {
    const auto dir = std::filesystem::temp_directory_path() / "coagfrag_io_test";
    std::filesystem::remove_all(dir);
    const auto path = dir / "nested" / "t.csv";
    io::CsvTable t{{"x"}, {{1.5}, {2.5}}};
    io::write_csv(path, t);
    const auto back = io::read_csv(path);
    CHECK(back.rows.size() == 2);
    CHECK_THROWS_AS(io::read_csv(dir / "missing.csv"), ValidationError);
    std::filesystem::remove_all(dir);
}
