#pragma once

// Empirical parameter selection over a 1-D grid in a at fixed b: a
// parameter survives when the orbits of the deepest detected tangency
// points keep their distance from the critical region and their
// derivative growth at every step up to the horizon.

#include <cstddef>
#include <string>
#include <vector>

#include "af/map_core.hpp"

namespace af {

struct ScanSpec {
    double a_lo = 2.0;
    double a_hi = 2.0;
    double a_step = 1e-3;
    double b = 1e-6;            // fixed for the whole scan
    std::size_t horizon = 30;   // steps each check must satisfy
    std::size_t n0 = 1;         // start-up free iterates (distance > delta/2)
    SystemConfig cfg{};
    std::size_t threads = 1;
    MapFamily (*family)(double a, double b) = &henon_family;
};

enum class ScanStatus { accepted, deleted, indeterminate };

const char* to_string(ScanStatus s);

struct ScanEntry {
    double a = 0.0;
    ScanStatus status = ScanStatus::indeterminate;
    bool startup_ok = false;
    std::ptrdiff_t ia2_first_fail = -1; // earliest failing step over all points
    std::ptrdiff_t ia4_first_fail = -1;
    std::string note; // reason when indeterminate
};

struct ScanReport {
    ScanSpec spec{};
    std::vector<ScanEntry> per_a;        // in grid order
    std::vector<double> accepted;        // surviving a values
    std::vector<double> deletion_curve;  // deleted fraction at horizon 0..N,
                                         // over the determinate entries
};

// Grid values a_lo, a_lo + a_step, ... up to a_hi inclusive (with a
// half-step tolerance).  Throws ConfigError on an empty or invalid grid.
std::vector<double> scan_grid(const ScanSpec& spec);

ScanReport scan(const ScanSpec& spec);

// CSV: a,status,ia2_first_fail,ia4_first_fail.
void write_scan_csv(const ScanReport& r, const std::string& path);
// JSON summary: spec echo, per-a entries, accepted list, deletion curve.
void write_scan_json(const ScanReport& r, const std::string& path);

} // namespace af
