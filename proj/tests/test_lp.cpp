#include <doctest.h>

#include <array>
#include <cmath>
#include <optional>
#include <random>

#include "wadmit/lp.hpp"

using namespace wadmit::lp;

namespace {

Problem make(std::vector<double> c) {
    Problem p(c.size());
    p.objective = std::move(c);
    return p;
}

void row(Problem& p, std::vector<double> a, Relation r, double b) { p.add(r, b).coeffs = std::move(a); }

// Oracle for 2-variable LPs: best objective over every pairwise intersection of
// constraint lines (axes included) that satisfies all constraints.
std::optional<double> brute_force_2d(const std::vector<double>& c, const std::vector<std::array<double, 3>>& le) {
    auto lines = le;
    lines.push_back({-1.0, 0.0, 0.0});  // x >= 0
    lines.push_back({0.0, -1.0, 0.0});  // y >= 0
    std::optional<double> best;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const auto& a = lines[i];
            const auto& b = lines[j];
            const double det = a[0] * b[1] - a[1] * b[0];
            if (std::abs(det) < 1e-12) continue;
            const double x = (a[2] * b[1] - a[1] * b[2]) / det;
            const double y = (a[0] * b[2] - a[2] * b[0]) / det;
            bool ok = true;
            for (const auto& l : lines) ok = ok && l[0] * x + l[1] * y <= l[2] + 1e-9;
            if (!ok) continue;
            const double v = c[0] * x + c[1] * y;
            if (!best || v > *best) best = v;
        }
    return best;
}

} // namespace

TEST_CASE("textbook maximisation") {
    auto p = make({3, 2});
    row(p, {1, 1}, Relation::LessEqual, 4);
    row(p, {1, 3}, Relation::LessEqual, 6);
    row(p, {1, 0}, Relation::LessEqual, 3);
    const auto s = maximize(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(s.x[0] == doctest::Approx(3.0));
    CHECK(s.x[1] == doctest::Approx(1.0));
}

TEST_CASE("greater-equal rows need phase one") {
    // min x + y s.t. x + 2y >= 2, 3x + y >= 3; optimum at (0.8, 0.6)
    auto p = make({-1, -1});
    row(p, {1, 2}, Relation::GreaterEqual, 2);
    row(p, {3, 1}, Relation::GreaterEqual, 3);
    const auto s = maximize(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(-1.4).epsilon(1e-12));
}

TEST_CASE("negative right-hand sides are normalised") {
    auto p = make({-1});
    row(p, {-1}, Relation::LessEqual, -2);
    const auto s = maximize(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[0] == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded problems are reported") {
    auto inf = make({1});
    row(inf, {1}, Relation::LessEqual, 1);
    row(inf, {1}, Relation::GreaterEqual, 2);
    CHECK(maximize(inf).status == Status::Infeasible);

    auto unb = make({1, 0});
    row(unb, {1, -1}, Relation::LessEqual, 1);
    CHECK(maximize(unb).status == Status::Unbounded);
}

TEST_CASE("redundant equality rows") {
    auto p = make({1, 0});
    row(p, {1, 1}, Relation::Equal, 1);
    row(p, {2, 2}, Relation::Equal, 2);
    const auto s = maximize(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("degenerate problem that cycles under Dantzig's rule") {
    // Beale's example; optimum 5/4 at x = (1, 0, 1, 0)
    auto p = make({0.75, -20, 0.5, -6});
    row(p, {0.25, -8, -1, 9}, Relation::LessEqual, 0);
    row(p, {0.5, -12, -0.5, 3}, Relation::LessEqual, 0);
    row(p, {0, 0, 1, 0}, Relation::LessEqual, 1);
    const auto s = maximize(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("property: random bounded 2-D programs match vertex brute force") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coef(0.05, 3.0);
    std::uniform_real_distribution<double> obj(-2.0, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::array<double, 3>> le;
        auto p = make({obj(rng), obj(rng)});
        const int m = 1 + trial % 5;
        for (int i = 0; i < m; ++i) {
            // positive coefficients keep the region bounded
            const std::array<double, 3> r{coef(rng), coef(rng), coef(rng)};
            le.push_back(r);
            row(p, {r[0], r[1]}, Relation::LessEqual, r[2]);
        }
        const auto expected = brute_force_2d(p.objective, le);
        const auto s = maximize(p);
        REQUIRE(expected.has_value());
        REQUIRE(s.status == Status::Optimal);
        CHECK(std::abs(s.objective - *expected) <= 1e-9);
    }
}
