#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "af/critical.hpp"
#include "af/geometry.hpp"
#include "af/map_core.hpp"

namespace af {

// interval address of x against the r critical points of the base map: the
// interval right of critical point i carries label i, and the leftmost
// interval wraps to r+1; within tie_eps of a critical point both adjacent
// labels apply (alt is the second one, else 0)
struct Address {
    int label = 0;
    int alt = 0;
    bool ambiguous() const { return alt != 0; }
};

Address address_of(const MapFamily& m, double x, double tie_eps = 1e-9);

// labels of z0 .. T^{n-1} z0; ambiguous steps resolve to the right-side
// label. Throws OrbitEscape if the orbit blows up before n steps.
std::vector<int> itinerary(const MapFamily& m, Vec2 z0, std::size_t n,
                           double tie_eps = 1e-9);

struct SymbolSampling {
    std::size_t n_seeds = 64;      // random starts
    std::size_t orbit_len = 4096;  // recorded steps per start
    std::size_t burn_in = 10000;
    double tie_eps = 1e-9;
    std::uint64_t seed = 12345;
    std::size_t branch_cap = 1024; // fuzzy branches explored per window
    std::size_t max_restarts = 16; // extra draws allowed per escaping seed
    std::size_t threads = 1;       // seeds use independent RNG streams, so
                                   // results do not depend on this value
};

// distinct length-n windows over a family of label sequences (the shared
// counting core: orbit sampling and exhaustive shift-space enumeration both
// feed it)
std::size_t count_blocks_in_sequences(const std::vector<std::vector<int>>& seqs,
                                      std::size_t n);

// number of length-n words of the shift space with 0/1 transition matrix
// adjacency[i][j] (allowed i -> j); counts via matrix powers
std::uint64_t sft_word_count(const std::vector<std::vector<int>>& adjacency,
                             std::size_t n);

struct BlockCounts {
    std::vector<std::size_t> strict; // index k-1 holds the count for length k
    std::vector<std::size_t> fuzzy;
    std::size_t segments = 0;        // orbit segments actually recorded
    std::size_t escapes = 0;         // restarts forced by escaping orbits
    std::size_t branch_overflows = 0;
};

// strict and fuzzy distinct-block counts from one shared orbit sample.
// Fuzzy: a point within max(tie_eps, |b|^{n/4}) of a critical point
// contributes both adjacent labels, so the fuzzy words are a superset of the
// strict words of the same sample and strict[n] <= fuzzy[n] holds by
// construction.
BlockCounts count_blocks_both(const MapFamily& m, std::size_t n_max,
                              const SymbolSampling& s = {});

std::vector<std::size_t> count_blocks(const MapFamily& m, std::size_t n_max,
                                      const SymbolSampling& s = {});
std::vector<std::size_t> count_fuzzy(const MapFamily& m, std::size_t n_max,
                                     const SymbolSampling& s = {});

struct PeriodicOptions {
    std::size_t grid = 96;          // grid seeds across the box width
    std::size_t orbit_seeds = 3000; // extra seeds from an attractor sample
    std::size_t newton_iters = 60;
    double tol = 1e-11;
    double dedup_rel = 1e-8;        // cluster radius, relative to the box diameter
    std::uint64_t seed = 999;
};

struct PeriodicCount {
    std::size_t count = 0;
    std::vector<Vec2> points;    // one entry per fixed point of T^n
    std::size_t seeds_tried = 0;
};

// fixed points of T^n inside the reference box, found by damped Newton on
// T^n(z) - z from grid and orbit seeds; roots whose cycles leave the box are
// discarded, coincident roots deduplicated
PeriodicCount count_periodic(const MapFamily& m, std::size_t n,
                             const PeriodicOptions& opts = {});

// one monotone-segment count per generation 0..n_max and boundary component:
// each distinct tangency of level k creases its component from generation
// k+1 on (duplicate detections through overlapping parent windows are merged
// by source parameter); the segment count is creases + 1
struct MonotoneCounts {
    std::vector<std::size_t> m_plus;
    std::vector<std::size_t> m_minus;
};

MonotoneCounts monotone_counts(const MapFamily& m, const Hierarchy& h,
                               std::size_t n_max);

// markers + 1 on one marked curve (counts only markers on surviving nodes)
std::size_t count_monotone_segments(const SampledCurve& c);

struct EntropyRow {
    std::size_t n = 0;
    std::size_t N = 0;       // strict blocks
    std::size_t Ntilde = 0;  // fuzzy blocks
    std::size_t P = 0;       // fixed points of T^n
    std::size_t Mplus = 0;   // monotone segments, upper boundary
    std::size_t Mminus = 0;
    double logN_over_n = 0.0;
    double logNtilde_over_n = 0.0;
    double logP_over_n = 0.0;
};

struct EntropyReport {
    std::vector<EntropyRow> rows;
    double h_blocks = 0.0;    // slope of log N_n over the upper half of n
    double h_fuzzy = 0.0;
    double h_periodic = 0.0;
    bool circle_wrap_caveat = false; // base map on a circle: labels wrap
    std::vector<std::string> notes;
};

// all estimator families side by side for n = 1..n_max. Throws
// InequalityViolation if a strict count exceeds its fuzzy counterpart
// (impossible unless the counting itself is broken).
EntropyReport entropy_report(const MapFamily& m, const Hierarchy& h, std::size_t n_max,
                             const SymbolSampling& s = {},
                             const PeriodicOptions& p = {});

// CSV: n, N, Ntilde, P, Mplus, Mminus, logN_over_n, logNtilde_over_n, logP_over_n
void write_entropy_csv(const EntropyReport& r, const std::string& path);

} // namespace af
