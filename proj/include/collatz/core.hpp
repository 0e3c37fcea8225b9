#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "collatz/bitpoly.hpp"

namespace collatz {

// One accelerated Collatz step: q is the full power of two removed from
// 3*prev + 1, value is the odd result, degree its top-bit index.
struct StepRecord {
    std::uint64_t q = 0;
    BitPoly value;
    std::uint64_t degree = 0;
};

enum class Terminated { ReachedOne, StepLimit, DegreeLimit };

struct TrajectoryRecord {
    BitPoly start;
    std::vector<StepRecord> steps;
    std::uint64_t k = 0;       // number of steps
    std::uint64_t q_sum = 0;   // total halvings
    std::uint64_t max_degree = 0;
    Terminated terminated = Terminated::ReachedOne;

    std::string to_json() const;
};

struct TrajectoryLimits {
    std::uint64_t max_steps = 1'000'000;
    std::uint64_t max_degree = std::uint64_t{1} << 32;
};

// (3n+1)/2^q with q the exact 2-adic valuation of 3n+1. Throws
// std::domain_error on even or zero input.
std::pair<BitPoly, std::uint64_t> collatz_step(const BitPoly& n);

// Iterates collatz_step until the value reaches 1 or a limit is hit.
// The trajectory of 1 is empty: the fixed point is not iterated.
TrajectoryRecord trajectory(const BitPoly& n, const TrajectoryLimits& limits = {});

// Applies collatz_step l times; returns the final value and q-sequence.
std::pair<BitPoly, std::vector<std::uint64_t>> collatz_compose(const BitPoly& n,
                                                               std::uint64_t l);

// Degree of (x+1)^l, i.e. floor(l * log2 3). Exact for all l below 2^40.
std::uint64_t u_of(std::uint64_t l);

// The leading-power-counting degree estimate p + u(l) + 1 - sum(q) for a
// length-l trajectory prefix from a degree-p start. A pure formula; its
// accuracy is a band property, not an identity.
std::int64_t degree_estimate(std::int64_t p, std::int64_t l, std::int64_t q_sum);

// Closed-form families.
BitPoly family_F(std::uint64_t p, const std::set<std::uint64_t>& inner_exps);
BitPoly family_U(std::uint64_t k);         // sum of 4^t for t <= k
BitPoly family_G(std::uint64_t p);         // 2*3^p - 1
BitPoly family_H(std::uint64_t idx);       // idx = 4 (mod 6)
BitPoly family_mersenne(std::uint64_t p);  // 2^(p+1) - 1

// True iff lifting F by j levels (prepending 1 + 4 + ... + 4^(j-1) and
// scaling by 4^j) steps to the same odd value with q increased by 2j.
bool check_corollary1(const BitPoly& f, std::uint64_t j);

// True iff the first p steps from 2^(p+1)-1 all have q = 1 and land on
// 2*3^p - 1 of degree u(p)+1.
bool mersenne_prefix_check(std::uint64_t p);

struct GRelations {
    std::uint64_t r = 0;
    bool ok = false;
};

// For even p: checks that C_2 applies to 2*3^p - 1 (q exactly 2), takes
// one further step to obtain r, and verifies the recurrence, the closed
// form (3^(p+2)-1)/2^(r+1), and the reconstruction 2*3^(p+2)-1 =
// 2^(r+2) * result + 1. Throws std::domain_error if the first step's q
// is not 2.
GRelations g_relations_check(std::uint64_t p);

// For 2k in {4, 10, 16, ...}: the H value steps with q = 1 onto the odd
// staircase sum and then with q = 2 onto the Mersenne value 2^(2k+1)-1.
bool h_chain_check(std::uint64_t k);

// True iff one step of n yields a different odd value. False only at 1.
bool fixed_point_check(const BitPoly& n);

struct CasePrediction {
    BitPoly predicted;
    std::vector<std::uint64_t> ops;  // prescribed q-sequence
};

// Matches n's exponent structure against the explicit low-term-count
// step formulas and returns the carry-normalized prediction together
// with the prescribed q-sequence, or nothing when no case applies (or
// the carries invalidate the formula for this input).
std::optional<CasePrediction> predict_case(const BitPoly& n);

}  // namespace collatz
