#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "elswap/harness.hpp"
#include "elswap/rng.hpp"

using namespace elswap;

namespace {

PathSeries make_series(long n_paths, std::vector<int> cps) {
    PathSeries s;
    s.n_paths = n_paths;
    s.checkpoints = std::move(cps);
    s.values.assign(static_cast<std::size_t>(n_paths) * s.checkpoints.size(), 0.0);
    return s;
}

}  // namespace

TEST_CASE("constant series equal to the initial value passes with z = 0") {
    PathSeries s = make_series(100, {0, 10});
    for (auto& v : s.values)
        v = 5.0;
    const auto rep = martingale_test("const", s, {0.0, 1.0}, 5.0);
    CHECK(rep.pass);
    for (const auto& r : rep.rows)
        CHECK(r.z == 0.0);
}

TEST_CASE("zero-variance series away from the initial value hard-fails") {
    PathSeries s = make_series(100, {10});
    for (auto& v : s.values)
        v = 5.0;
    const auto rep = martingale_test("const-off", s, {1.0}, 4.0);
    CHECK_FALSE(rep.pass);
    CHECK(std::isinf(rep.rows[0].z));
}

TEST_CASE("iid gaussian noise around the initial value passes") {
    const long n = 10000;
    PathSeries s = make_series(n, {5});
    const PathRng rng(1234, 0);
    for (long p = 0; p < n; ++p)
        s.values[p] = 2.0 + rng.normal(static_cast<std::uint32_t>(p), Stream::diffusion, 0);
    const auto rep = martingale_test("noise", s, {0.5}, 2.0);
    CHECK(rep.pass);
    CHECK(rep.rows[0].se == doctest::Approx(1.0 / std::sqrt(static_cast<double>(n))).epsilon(0.05));
}

TEST_CASE("a ten-standard-error shift fails") {
    const long n = 10000;
    PathSeries s = make_series(n, {5});
    const PathRng rng(1234, 1);
    const double shift = 10.0 / std::sqrt(static_cast<double>(n));
    for (long p = 0; p < n; ++p)
        s.values[p] = 2.0 + shift + rng.normal(static_cast<std::uint32_t>(p), Stream::diffusion, 0);
    CHECK_FALSE(martingale_test("shifted", s, {0.5}, 2.0).pass);
}

TEST_CASE("verdicts are stable under permutation of the path axis") {
    const long n = 5001;
    PathSeries s = make_series(n, {3});
    const PathRng rng(99, 2);
    for (long p = 0; p < n; ++p)
        s.values[p] = 1.0 + 0.3 * rng.normal(static_cast<std::uint32_t>(p), Stream::diffusion, 0);
    const auto before = martingale_test("perm", s, {0.25}, 1.0);
    std::reverse(s.values.begin(), s.values.end());
    const auto after = martingale_test("perm", s, {0.25}, 1.0);
    CHECK(before.pass == after.pass);
    CHECK(before.rows[0].mean == doctest::Approx(after.rows[0].mean).epsilon(1e-12));
}

TEST_CASE("identity test") {
    std::vector<double> lhs(50), rhs(50);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        lhs[i] = rhs[i] = 1.0 + 0.01 * static_cast<double>(i);

    CHECK(identity_test("same", lhs, rhs, 1e-10).max_rel_dev == 0.0);

    for (auto& v : rhs)
        v *= 1.0 + 5e-11;
    CHECK(identity_test("close", lhs, rhs, 1e-10).pass);

    for (auto& v : rhs)
        v *= 1.01;
    CHECK_FALSE(identity_test("far", lhs, rhs, 1e-10).pass);

    rhs.pop_back();
    CHECK_THROWS_AS(identity_test("bad-shape", lhs, rhs, 1e-10), std::invalid_argument);
}

TEST_CASE("martingale test requires at least two paths") {
    PathSeries s = make_series(1, {1});
    CHECK_THROWS_AS(martingale_test("single", s, {1.0}, 0.0), std::invalid_argument);
}
