#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "sinebeta/io.hpp"

using namespace sinebeta;

TEST_CASE("hex floats round-trip bit-exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(io::parse_double(io::hex(v)) == v);
    }
    CHECK(io::parse_double("0.5") == 0.5);
}

TEST_CASE("text and json formats round-trip") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-10, 10);
    std::vector<double> p(100);
    for (double& x : p) x = u(rng);
    const PointConfiguration c(p, -10, 10);
    std::stringstream ss;
    io::write_text(ss, c);
    CHECK(io::read_text(ss) == c);
    CHECK(io::from_json(io::to_json(c)) == c);
    CHECK(io::from_json(nlohmann::json::parse(io::to_json(c).dump())) == c);

    const auto path = std::filesystem::temp_directory_path() / "sinebeta_io_test.txt";
    io::save_text(path.string(), c);
    CHECK(io::load_text(path.string()) == c);
    std::filesystem::remove(path);
}

TEST_CASE("malformed input is rejected") {
    std::stringstream ss("0.5\n");
    CHECK_THROWS(io::read_text(ss));
    std::stringstream bad("# window -1 1\nabc\n");
    CHECK_THROWS(io::read_text(bad));
}
