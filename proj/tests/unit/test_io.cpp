#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "pinlab/environment.hpp"
#include "pinlab/io.hpp"

using namespace pinlab;

TEST_SUITE("io") {

TEST_CASE("doubles round-trip with 17 significant digits") {
    for (double x : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 1.0, 0.0}) {
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::isnan(parse_double(format_double(std::nan("")))));
    CHECK(parse_double(format_double(-std::numeric_limits<double>::infinity())) ==
          -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(parse_double("1,5"), std::invalid_argument);
}

TEST_CASE("csv quoting survives a round trip") {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", ""};
    std::istringstream in(csv_line(fields) + csv_line(fields));
    const auto records = read_csv(in);
    REQUIRE(records.size() == 2);
    CHECK(records[0] == fields);
    CHECK(records[1] == fields);
}

TEST_CASE("environment file round trip") {
    const BinaryEnvironment env = generate_markov(0.7, 0.6, 1001, 17);
    std::stringstream buf;
    write_environment(buf, env);
    const BinaryEnvironment back = read_environment(buf);
    CHECK(back.omega == env.omega);
    CHECK(back.seed == env.seed);
    CHECK(back.generator_id == "markov");
    CHECK(back.params == env.params);
}

TEST_CASE("truncated environment file is rejected") {
    const BinaryEnvironment env = generate_iid(0.5, 64, 3);
    std::stringstream buf;
    write_environment(buf, env);
    std::string text = buf.str();
    text.pop_back();
    std::istringstream in(text);
    CHECK_THROWS(read_environment(in));
}

TEST_CASE("sweep csv round trip") {
    const std::vector<SweepRow> rows{{"iid", "p_plus=0.5", 1.0, -0.25, 128, 99, 3.5, 3.5 / 128, 0.125},
                                     {"block", "theta=1.5", 0.0, 0.1, 64, 7, -0.01, -0.01 / 64, 0.0}};
    std::stringstream buf;
    write_sweep_csv(buf, rows);
    const auto back = read_sweep_csv(buf);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].generator == rows[i].generator);
        CHECK(back[i].params == rows[i].params);
        CHECK(back[i].F_N == rows[i].F_N);
        CHECK(back[i].N == rows[i].N);
        CHECK(back[i].seed == rows[i].seed);
    }
}

}
