#include <doctest.h>

#include <cmath>
#include <random>

#include "af/contraction.hpp"
#include "af/curves.hpp"
#include "af/errors.hpp"
#include "af/map_core.hpp"
#include "oracles.hpp"

using af::Mat2;
using af::Vec2;

TEST_CASE("most contracted direction of a diagonal matrix") {
    const af::ContractionResult r = af::most_contracted(Mat2{2.0, 0.0, 0.0, 0.05});
    CHECK(r.lambda_min == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(r.lambda_max == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(r.e.x) <= 1e-14);
    CHECK(r.e.y == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.image_e.norm() == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("rotations have no distinguished contracted direction") {
    const double t = 0.7;
    const Mat2 R{std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
    CHECK_THROWS_AS(af::most_contracted(R), af::DegenerateMatrix);
    CHECK_THROWS_AS(af::most_contracted(Mat2::identity()), af::DegenerateMatrix);
}

TEST_CASE("closed form agrees with an exhaustive angle scan") {
    const Mat2 M{1.0, 1.0, 0.0, 0.1};
    const af::ContractionResult r = af::most_contracted(M);
    const oracles::BruteResult b = oracles::brute_min(M, 1000000);
    CHECK(std::abs(r.lambda_min - b.lambda_min) <= 1e-8 * b.lambda_min);
    CHECK(oracles::direction_error(r.e, b.theta) <= 1e-6);
}

TEST_CASE("singular value identities on random matrices") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int checked = 0;
    while (checked < 300) {
        const Mat2 M{u(rng), u(rng), u(rng), u(rng)};
        af::ContractionResult r;
        try {
            r = af::most_contracted(M);
        } catch (const af::DegenerateMatrix&) {
            continue;
        }
        ++checked;
        CHECK(r.e.norm() == doctest::Approx(1.0).epsilon(1e-12));
        // e has nonnegative first component by convention
        CHECK(r.e.x >= -1e-15);
        CHECK(std::abs((M * r.e).norm() - r.lambda_min) <= 1e-10 * std::max(1.0, r.lambda_max));
        CHECK(std::abs(r.lambda_min * r.lambda_max - std::abs(M.det())) <=
              1e-10 * r.lambda_max * r.lambda_max);
        CHECK(r.lambda_max == doctest::Approx(af::op_norm(M)).epsilon(1e-12));
    }
}

TEST_CASE("unit field evaluation matches the one-step closed form") {
    const af::MapFamily m = af::henon_family(1.9, 1e-4);
    const Vec2 z{0.4, 1e-5};
    const Vec2 e = af::e_field(m, z, 1);
    const af::ContractionResult r = af::most_contracted(m.jacobian(z));
    CHECK(e.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(af::cross(e, r.e)) <= 1e-10);
}

TEST_CASE("contracted directions along an orbit converge geometrically") {
    const af::MapFamily m = af::henon_family(1.9, 1e-4);
    // settle onto the attractor first
    Vec2 z{0.3, 0.0};
    for (int i = 0; i < 400; ++i) z = m.eval(z);
    const af::OrbitContraction oc = af::e_n_along_orbit(m, z, 10);
    REQUIRE(oc.steps.size() == 10);
    REQUIRE(oc.defects.size() >= 3);
    CHECK(oc.kappa_measured > 1.0);
    // successive-direction defects fall inside a geometric envelope with
    // ratio 10 b / kappa^2, ignoring steps at the round-off floor
    const double ratio_bound = 10.0 * 1e-4 / (oc.kappa_measured * oc.kappa_measured);
    int ratios_checked = 0;
    for (std::size_t i = 0; i + 1 < oc.defects.size(); ++i) {
        if (oc.defects[i] <= 1e-14 || oc.defects[i + 1] <= 1e-14) continue;
        CHECK(oc.defects[i + 1] / oc.defects[i] <= ratio_bound);
        ++ratios_checked;
    }
    CHECK(ratios_checked >= 1);
}

TEST_CASE("orbit directions for n=1 reduce to the one-matrix answer") {
    const af::MapFamily m = af::henon_family(1.9, 1e-4);
    const Vec2 z{0.37, 2e-5};
    const af::OrbitContraction oc = af::e_n_along_orbit(m, z, 1);
    REQUIRE(oc.steps.size() == 1);
    const af::ContractionResult r = af::most_contracted(m.jacobian(z));
    CHECK(std::abs(af::cross(oc.steps[0].e, r.e)) <= 1e-12);
    CHECK(oc.steps[0].log_lambda_min == doctest::Approx(std::log(r.lambda_min)).epsilon(1e-10));
}

TEST_CASE("growth-floor verification raises on contracting orbits") {
    // at a=0.5 orbits converge to an attracting fixed point, so no
    // uniform derivative growth floor above 1 can hold
    const af::MapFamily m = af::henon_family(0.5, 1e-4);
    CHECK_THROWS_AS(af::e_n_along_orbit(m, {0.3, 0.0}, 40, 1.25), af::HyperbolicityLost);
}

TEST_CASE("singular products keep the kernel direction step after step") {
    const af::MapFamily m = af::henon_family(2.0, 0.0);
    const double x0 = 0.3;
    const af::OrbitContraction oc = af::e_n_along_orbit(m, {x0, 0.0}, 6);
    REQUIRE(oc.steps.size() == 6);
    const Vec2 kernel = Vec2{1.0, 2.0 * 2.0 * x0}.normalized();
    for (const auto& st : oc.steps) {
        CHECK(std::abs(af::cross(st.e, kernel)) <= 1e-9);
    }
}

TEST_CASE("stable curve through a point has the predicted slope") {
    const af::MapFamily m = af::henon_family(1.9, 1e-4);
    const Vec2 z0{0.5, 0.0};
    const af::SampledCurve c = af::stable_curve(m, z0, 1, 0.02);
    REQUIRE(c.size() >= 10);
    // locate the node closest to the seed
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double d = af::distance(c.points[i], z0);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    REQUIRE(best > 0);
    REQUIRE(best + 1 < c.size());
    const Vec2 dseg = c.points[best + 1] - c.points[best - 1];
    const double slope = std::abs(dseg.y / dseg.x);
    CHECK(slope == doctest::Approx(2.0 * 1.9 * 0.5).epsilon(0.1));
}

TEST_CASE("stable curve with zero length collapses to the seed") {
    const af::MapFamily m = af::henon_family(1.9, 1e-4);
    const af::SampledCurve c = af::stable_curve(m, {0.5, 0.0}, 1, 0.0);
    REQUIRE(c.size() == 1);
    CHECK(c.points[0].x == 0.5);
    CHECK(c.points[0].y == 0.0);
}

TEST_CASE("points on a stable curve approach each other under iteration") {
    const af::MapFamily m = af::henon_family(1.9, 1e-4);
    const Vec2 z0{0.5, 0.0};
    const af::SampledCurve c = af::stable_curve(m, z0, 3, 0.02);
    REQUIRE(c.size() >= 10);
    const Vec2 z = c.points.front(); // an end of the traced curve
    const double d0 = af::distance(z, z0);
    REQUIRE(d0 > 1e-4);
    const auto dist = af::co_iteration_distances(m, z, z0, 3);
    REQUIRE(dist.size() == 4);
    CHECK(dist[0] == doctest::Approx(d0));
    CHECK(dist[1] <= 0.01 * d0);
    CHECK(dist[2] <= 0.1 * dist[1] + 1e-12);
}
