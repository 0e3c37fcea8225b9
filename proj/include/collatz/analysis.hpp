#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collatz/core.hpp"

namespace collatz {

// Odd residue classes by n mod 8 (low bits 001 / 011 / 101 / 111).
// Per-step law: C1 => q = 2, C2 => q = 1, C3 => q >= 3, C4 => q = 1.
enum class ResidueClass { C1, C2, C3, C4 };

ResidueClass residue_class(const BitPoly& n);
const char* residue_class_name(ResidueClass c);

struct ClassStats {
    std::uint64_t count = 0;
    std::uint64_t q_sum = 0;
    double mean_q() const { return count ? double(q_sum) / double(count) : 0.0; }
};

struct CensusReport {
    std::string lo, hi;         // decimal bounds, [lo, hi) over odd values
    ClassStats by_class[4];
    std::uint64_t total = 0;
    std::uint64_t q_total = 0;
    double mean_q() const { return total ? double(q_total) / double(total) : 0.0; }
    double fraction(ResidueClass c) const {
        return total ? double(by_class[int(c)].count) / double(total) : 0.0;
    }
    std::string to_json() const;
    std::string to_text() const;
};

// One collatz_step per odd n in [lo, hi), aggregated per residue class.
// The range is split across workers; aggregation is order-independent
// sums, so the result is deterministic for any worker count.
CensusReport census(const BitPoly& lo, const BitPoly& hi, unsigned workers = 0);

struct DriftReport {
    std::string start;
    std::uint64_t k = 0;
    bool mersenne_related = false;
    std::vector<std::uint64_t> degrees;  // observed degree after step l = 1..k
    std::vector<double> bounds;          // average upper bound at each l
    double slope = 0.0;                  // least-squares degree drift per step
    std::uint64_t violations = 0;        // steps with observed degree > bound
    std::string to_json() const;
    std::string to_text() const;
};

// Average-case degree envelope along a trajectory: the bounds are
// p + 0.5 - 0.165037 l, or the p + 0.5 + 0.58496 l branch for l <= p
// when the start is Mersenne-related. Violations are counted, not
// asserted zero: the envelope is an average, not a hard bound.
DriftReport drift_report(const TrajectoryRecord& t, bool is_mersenne_related);

struct Table1Row {
    std::uint64_t q;
    std::uint64_t degree;
    std::string poly;
};

struct Table2Row {
    std::uint64_t p;
    std::uint64_t degree;  // u(p) + 1
    std::string poly;      // 2*3^p - 1 rendered as a polynomial
    // Mean Sigma(q)/k over the trajectory from G to 1, as an exact
    // rational; from_f_* additionally counts the p leading q = 1 steps
    // from the Mersenne start (the averaging convention is ambiguous in
    // places, so both are emitted).
    std::uint64_t ratio_num, ratio_den;
    std::uint64_t from_f_num, from_f_den;
    std::string ratio_text() const;   // 4-decimal rendering of ratio
    std::string from_f_text() const;
};

struct Table3Row {
    std::uint64_t p;
    std::string p_poly;
    std::uint64_t r;
};

std::vector<Table1Row> table1(std::uint64_t max_q);
std::vector<Table2Row> table2(std::uint64_t max_p);  // even p in [2, max_p]
std::vector<Table3Row> table3(std::uint64_t max_p);  // even p in [0, max_p]

enum class TableFormat { Text, Csv, Json };
std::string render_table1(const std::vector<Table1Row>& rows, TableFormat f);
std::string render_table2(const std::vector<Table2Row>& rows, TableFormat f);
std::string render_table3(const std::vector<Table3Row>& rows, TableFormat f);

}  // namespace collatz
