#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collatz/bitpoly.hpp"

namespace collatz {

struct VerifyPolicy {
    unsigned workers = 0;             // 0: COLLATZ_WORKERS env or hardware default
    std::uint64_t step_limit = 1'000'000;
    std::uint64_t floor = 1;          // all odd values below this are already verified
    bool early_exit = true;           // stop once a trajectory drops below max(n, floor)
    std::optional<std::uint64_t> stop_at;  // process only [lo, stop_at) of the range
};

struct RangeRecords {
    BitPoly max_odd_peak;       // largest odd value seen on any iterated prefix
    std::uint64_t peak_origin = 0;
    std::uint64_t max_k = 0;    // most steps before convergence/early exit
    std::uint64_t k_origin = 0;
    std::uint64_t max_q = 0;    // largest single-step q
    std::uint64_t q_origin = 0;

    // Commutative, associative merge; ties keep the smaller origin.
    void merge(const RangeRecords& other);
};

struct RangeReport {
    std::uint64_t lo = 0, hi = 0;   // odd-range bounds [lo, hi)
    std::uint64_t floor = 1;
    bool verified = false;
    std::vector<std::uint64_t> counterexamples;  // step-limit hits (never expected)
    RangeRecords records;
    double elapsed_seconds = 0.0;
    std::uint64_t checkpoint = 0;   // next unprocessed odd value; == hi when complete

    std::string to_json(bool include_elapsed = true) const;
};

// Convergence sweep: every odd n in [lo, hi) is iterated until it
// reaches 1 or (with early exit) drops below max(n, floor). Bounds must
// fit in 64 bits; trajectory values themselves may grow past that and
// are promoted transparently.
RangeReport verify_range(const BitPoly& lo, const BitPoly& hi, const VerifyPolicy& policy = {});

// Checkpoint file: JSON lines; header {"version":1,"lo","hi","floor"},
// then cumulative {"done_upto","verified","counterexamples","records"}.
void checkpoint_save(const RangeReport& r, const std::string& path);

// Continues an interrupted sweep from the stored cursor; the merged
// report equals an uninterrupted run.
RangeReport checkpoint_resume(const std::string& path, const VerifyPolicy& policy = {});

}  // namespace collatz
