#include <doctest.h>

#include <cmath>

#include "slelab/driving.hpp"
#include "slelab/types.hpp"

using namespace slelab;

TEST_CASE("zero kappa gives the zero driving path") {
    const DrivingFunction w = sample_driving(0.0, 1.0, 100, 7);
    REQUIRE(w.times.size() == 101);
    for (double v : w.values) CHECK(v == 0.0);
    CHECK(w.times.front() == 0.0);
    CHECK(w.times.back() == doctest::Approx(1.0));
}

TEST_CASE("same seed reproduces the path bit for bit") {
    const DrivingFunction a = sample_driving(6.0, 1.0, 1000, 42);
    const DrivingFunction b = sample_driving(6.0, 1.0, 1000, 42);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);

    const DrivingFunction c = sample_driving(6.0, 1.0, 1000, 43);
    CHECK(c.values.back() != a.values.back());
}

TEST_CASE("increments have variance kappa per unit time") {
    // Monte Carlo oracle over independent seeds; the acceptance suite runs
    // the full-size version of this check.
    const double kappa = 6.0;
    const std::size_t n_paths = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t s = 0; s < n_paths; ++s) {
        const DrivingFunction w = sample_driving(kappa, 1.0, 200, 1000 + s);
        const double v = w.values.back();
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n_paths;
    const double var = sum2 / n_paths - mean * mean;
    const double se = kappa * std::sqrt(2.0 / n_paths);
    CHECK(std::abs(var - kappa) <= 3.0 * se);
}

TEST_CASE("radial reinterpretation wraps angles into [0, 2 pi)") {
    const DrivingFunction w = sample_driving(4.0, 1.0, 500, 9).as_radial(1.0);
    CHECK(w.kind == TraceKind::radial);
    CHECK(w.values.front() == doctest::Approx(1.0));
    for (double v : w.values) {
        CHECK(v >= 0.0);
        CHECK(v < kTwoPi);
    }
}

TEST_CASE("linear interpolation between samples") {
    DrivingFunction w;
    w.times = {0.0, 0.5, 1.0};
    w.values = {0.0, 2.0, -1.0};
    CHECK(w.value_at(0.25) == doctest::Approx(1.0));
    CHECK(w.value_at(0.75) == doctest::Approx(0.5));
    CHECK(w.value_at(2.0) == doctest::Approx(-1.0));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(sample_driving(-1.0, 1.0, 10, 0), ParameterError);
    CHECK_THROWS_AS(sample_driving(1.0, 0.0, 10, 0), ParameterError);
    CHECK_THROWS_AS(sample_driving(1.0, 1.0, 0, 0), ParameterError);
}

TEST_CASE("csv serialization is stable") {
    const DrivingFunction w = sample_driving(2.0, 0.5, 4, 3);
    const std::string a = driving_to_csv(w);
    const std::string b = driving_to_csv(sample_driving(2.0, 0.5, 4, 3));
    CHECK(a == b);
    CHECK(a.rfind("time,value\n", 0) == 0);
}
