#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "af/errors.hpp"
#include "af/paramscan.hpp"

namespace {

af::ScanSpec base_spec(double lo, double hi, double step, std::size_t horizon) {
    af::ScanSpec s;
    s.a_lo = lo;
    s.a_hi = hi;
    s.a_step = step;
    s.b = 1e-6;
    s.horizon = horizon;
    return s;
}

std::set<double> accepted_set(const af::ScanReport& r) {
    return {r.accepted.begin(), r.accepted.end()};
}

std::set<double> deleted_set(const af::ScanReport& r) {
    std::set<double> out;
    for (const auto& e : r.per_a)
        if (e.status == af::ScanStatus::deleted) out.insert(e.a);
    return out;
}

} // namespace

TEST_CASE("grid construction is inclusive of both endpoints") {
    const auto g = af::scan_grid(base_spec(1.5, 2.0, 1e-3, 10));
    REQUIRE(g.size() == 501);
    CHECK(g.front() == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(g.back() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(af::scan_grid(base_spec(2.0, 1.5, 1e-3, 10)), af::ConfigError);
    CHECK_THROWS_AS(af::scan_grid(base_spec(1.5, 2.0, 0.0, 10)), af::ConfigError);
}

TEST_CASE("the full-expansion parameter survives the selection") {
    const af::ScanReport r = af::scan(base_spec(2.0, 2.0, 1e-3, 30));
    REQUIRE(r.per_a.size() == 1);
    CHECK(r.per_a[0].status == af::ScanStatus::accepted);
    REQUIRE(r.accepted.size() == 1);
    CHECK(r.accepted[0] == 2.0);
}

TEST_CASE("a horizon of zero keeps every startup-sound parameter") {
    const af::ScanReport r = af::scan(base_spec(1.5, 1.6, 0.02, 0));
    for (const auto& e : r.per_a) {
        if (e.startup_ok) CHECK(e.status == af::ScanStatus::accepted);
    }
}

TEST_CASE("scans are deterministic") {
    const af::ScanSpec s = base_spec(1.92, 2.0, 0.01, 20);
    const af::ScanReport r1 = af::scan(s);
    const af::ScanReport r2 = af::scan(s);
    REQUIRE(r1.per_a.size() == r2.per_a.size());
    for (std::size_t i = 0; i < r1.per_a.size(); ++i) {
        CHECK(r1.per_a[i].a == r2.per_a[i].a);
        CHECK(r1.per_a[i].status == r2.per_a[i].status);
        CHECK(r1.per_a[i].ia2_first_fail == r2.per_a[i].ia2_first_fail);
        CHECK(r1.per_a[i].ia4_first_fail == r2.per_a[i].ia4_first_fail);
    }
}

TEST_CASE("longer horizons only grow the exclusion set") {
    const af::ScanReport r10 = af::scan(base_spec(1.9, 2.0, 0.01, 10));
    const af::ScanReport r30 = af::scan(base_spec(1.9, 2.0, 0.01, 30));
    const auto d10 = deleted_set(r10);
    const auto d30 = deleted_set(r30);
    for (double a : d10) CHECK(d30.count(a) == 1);
    // acceptance shrinks correspondingly
    const auto a30 = accepted_set(r30);
    for (double a : a30) CHECK(accepted_set(r10).count(a) == 1);
}

TEST_CASE("tightening the recurrence rate only grows the exclusion set") {
    af::ScanSpec loose = base_spec(1.9, 2.0, 0.01, 25);
    loose.cfg.alpha = 0.30;
    af::ScanSpec tight = loose;
    tight.cfg.alpha = 0.25;
    const af::ScanReport rl = af::scan(loose);
    const af::ScanReport rt = af::scan(tight);
    // set inclusions: deleted(loose) subset of deleted(tight), and
    // accepted(tight) subset of accepted(loose)
    const auto dl = deleted_set(rl);
    const auto dt = deleted_set(rt);
    for (double a : dl) CHECK(dt.count(a) == 1);
    const auto at = accepted_set(rt);
    const auto al = accepted_set(rl);
    for (double a : at) CHECK(al.count(a) == 1);
}

TEST_CASE("the deletion curve is a running fraction and never decreases") {
    const af::ScanReport r = af::scan(base_spec(1.9, 2.0, 0.005, 25));
    REQUIRE(r.deletion_curve.size() == 26);
    for (double f : r.deletion_curve) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
    for (std::size_t i = 1; i < r.deletion_curve.size(); ++i)
        CHECK(r.deletion_curve[i] >= r.deletion_curve[i - 1]);
}

TEST_CASE("the contracting regime is excluded by failed derivative growth") {
    const af::ScanReport r = af::scan(base_spec(0.5, 0.5, 1e-3, 20));
    REQUIRE(r.per_a.size() == 1);
    CHECK(r.per_a[0].status == af::ScanStatus::deleted);
    CHECK(r.per_a[0].ia4_first_fail >= 0);
}
