#include "doctest.h"

#include "oamlab/amplitudes.hpp"
#include "oamlab/io.hpp"
#include "oamlab/parallel.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

using namespace oamlab;

TEST_CASE("shortest round-trip formatting") {
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(1e-300) == "1e-300");
    CHECK(io::format_double(-0.1) == "-0.1");
    CHECK(io::format_double(std::nan("")) == "nan");
    CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::pow(10.0, u(rng)) * (i % 2 ? -1.0 : 1.0);
        const std::string s = io::format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
        CHECK(s.find(',') == std::string::npos);
    }
}

TEST_CASE("atomic file writes") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "oamlab_test_support" / "nested";
    fs::remove_all(dir.parent_path());
    const auto path = dir / "out.txt";
    io::write_file_atomic(path, "first");
    io::write_file_atomic(path, "second");
    std::ifstream in(path);
    std::string content;
    std::getline(in, content);
    CHECK(content == "second");
    CHECK_FALSE(fs::exists(dir / "out.txt.tmp"));
}

TEST_CASE("parallel_for covers every index and rethrows") {
    setenv("OAMLAB_THREADS", "4", 1);
    CHECK(worker_count() == 4);
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                        if (i == 37) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    setenv("OAMLAB_THREADS", "junk", 1);
    CHECK(worker_count() >= 1);
    unsetenv("OAMLAB_THREADS");
}

TEST_CASE("pairwise reduction") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(pairwise_reduce<double>(v, 0.0, std::plus<>()) == 15.0);
    CHECK(pairwise_reduce<double>(std::span<const double>{}, 0.0, std::plus<>()) == 0.0);
}

TEST_CASE("method names") {
    for (auto m : {Method::quadrature, Method::asymptotic, Method::series, Method::exact_quadratic, Method::montecarlo})
        CHECK(parse_method(to_string(m)) == m);
    CHECK_FALSE(parse_method("other").has_value());
}
