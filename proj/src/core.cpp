#include "collatz/core.hpp"

#include <stdexcept>

#include <json.hpp>

namespace collatz {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

std::pair<BitPoly, u64> collatz_step(const BitPoly& n) {
    if (!n.is_odd()) throw std::domain_error("collatz_step: input must be odd and nonzero");
    BitPoly m = n.mul_small(3).add_small(1);
    const u64 q = m.two_adic_valuation();
    return {m.shr_exact(q), q};
}

TrajectoryRecord trajectory(const BitPoly& n, const TrajectoryLimits& limits) {
    if (!n.is_odd()) throw std::domain_error("trajectory: input must be odd and nonzero");
    TrajectoryRecord rec;
    rec.start = n;
    rec.max_degree = n.degree();
    BitPoly v = n;
    while (v != BitPoly{1}) {
        if (rec.k >= limits.max_steps) {
            rec.terminated = Terminated::StepLimit;
            return rec;
        }
        auto [next, q] = collatz_step(v);
        v = next;
        const u64 deg = v.degree();
        rec.steps.push_back({q, v, deg});
        ++rec.k;
        rec.q_sum += q;
        rec.max_degree = std::max(rec.max_degree, deg);
        if (deg > limits.max_degree) {
            rec.terminated = Terminated::DegreeLimit;
            return rec;
        }
    }
    rec.terminated = Terminated::ReachedOne;
    return rec;
}

std::string TrajectoryRecord::to_json() const {
    nlohmann::ordered_json j;
    j["start"] = start.to_decimal_string();
    j["steps"] = nlohmann::ordered_json::array();
    for (const auto& s : steps) {
        j["steps"].push_back({{"q", s.q},
                              {"value", s.value.to_decimal_string()},
                              {"degree", s.degree}});
    }
    j["k"] = k;
    j["q_sum"] = q_sum;
    j["max_degree"] = max_degree;
    switch (terminated) {
        case Terminated::ReachedOne: j["terminated"] = "one"; break;
        case Terminated::StepLimit: j["terminated"] = "step_limit"; break;
        case Terminated::DegreeLimit: j["terminated"] = "degree_limit"; break;
    }
    return j.dump();
}

std::pair<BitPoly, std::vector<u64>> collatz_compose(const BitPoly& n, u64 l) {
    BitPoly v = n;
    std::vector<u64> qs;
    qs.reserve(l);
    for (u64 i = 0; i < l; ++i) {
        auto [next, q] = collatz_step(v);
        v = next;
        qs.push_back(q);
    }
    return {v, qs};
}

u64 u_of(u64 l) {
    // frac64 = round((log2(3) - 1) * 2^64); u(l) = l + floor(l * frac / 2^64).
    // The approximation error stays far below the distance from l*log2(3)
    // to the nearest integer for every l in range.
    constexpr u64 kFrac64 = 10790653543520307104ULL;
    return l + static_cast<u64>((static_cast<u128>(l) * kFrac64) >> 64);
}

i64 degree_estimate(i64 p, i64 l, i64 q_sum) {
    return p + static_cast<i64>(u_of(static_cast<u64>(l))) + 1 - q_sum;
}

BitPoly family_F(u64 p, const std::set<u64>& inner_exps) {
    if (p < 1) throw std::out_of_range("family_F: p must be >= 1");
    for (u64 e : inner_exps)
        if (e < 1 || e > p - 1) throw std::out_of_range("family_F: inner exponent out of [1, p-1]");
    std::set<u64> exps = inner_exps;
    exps.insert(0);
    exps.insert(p);
    return BitPoly::from_exponents(exps);
}

BitPoly family_U(u64 k) {
    std::set<u64> exps;
    for (u64 t = 0; t <= k; ++t) exps.insert(2 * t);
    return BitPoly::from_exponents(exps);
}

BitPoly family_G(u64 p) {
    return BitPoly{3}.pow(p).mul_small(2) - BitPoly{1};
}

BitPoly family_H(u64 idx) {
    if (idx < 4 || idx % 6 != 4)
        throw std::out_of_range("family_H: index must be 4 (mod 6)");
    BitPoly h{27};  // H_4 = 1 + x + x^3 + x^4
    for (u64 t = 0; 6 * t + 4 < idx; ++t)
        h = h + BitPoly{7}.shl(6 * t + 8);
    return h;
}

BitPoly family_mersenne(u64 p) {
    if (p < 1) throw std::out_of_range("family_mersenne: p must be >= 1");
    return BitPoly{1}.shl(p + 1) - BitPoly{1};
}

bool check_corollary1(const BitPoly& f, u64 j) {
    if (!f.is_odd()) throw std::domain_error("check_corollary1: F must be odd");
    if (j < 1) throw std::out_of_range("check_corollary1: j must be >= 1");
    const BitPoly lifted = family_U(j - 1) + f.shl(2 * j);
    auto [v0, q0] = collatz_step(f);
    auto [v1, q1] = collatz_step(lifted);
    return v0 == v1 && q1 == q0 + 2 * j;
}

bool mersenne_prefix_check(u64 p) {
    if (p < 1) throw std::out_of_range("mersenne_prefix_check: p must be >= 1");
    BitPoly v = family_mersenne(p);
    for (u64 i = 0; i < p; ++i) {
        auto [next, q] = collatz_step(v);
        if (q != 1) return false;
        v = next;
    }
    return v == family_G(p) && v.degree() == u_of(p) + 1;
}

GRelations g_relations_check(u64 p) {
    if (p % 2 != 0) throw std::out_of_range("g_relations_check: p must be even");
    const BitPoly g = family_G(p);
    auto [s1, q1] = collatz_step(g);
    if (q1 != 2)
        throw std::domain_error("g_relations_check: first step q != 2 for even p");
    auto [s2, r] = collatz_step(s1);

    // (x+1) G + x at x = 2, i.e. the next family member.
    const bool recurrence_ok = family_G(p + 1) == g.mul_small(3).add_small(2);
    // Closed form (3^(p+2) - 1) / 2^(r+1).
    const BitPoly pow3 = BitPoly{3}.pow(p + 2);
    const bool closed_form_ok = s2.shl(r + 1) == pow3 - BitPoly{1};
    // Reconstruction 2*3^(p+2) - 1 = 2^(r+2) * s2 + 1.
    const bool reconstruction_ok = family_G(p + 2) == s2.shl(r + 2).add_small(1);

    return {r, recurrence_ok && closed_form_ok && reconstruction_ok};
}

bool h_chain_check(u64 k) {
    if (k < 2 || (2 * k) % 6 != 4)
        throw std::out_of_range("h_chain_check: 2k must be 4 (mod 6) with k >= 2");
    const BitPoly h = family_H(2 * k);
    auto [v1, q1] = collatz_step(h);
    std::set<u64> odd_exps;
    for (u64 mu = 1; mu <= k + 1; ++mu) odd_exps.insert(2 * mu - 1);
    const BitPoly staircase = BitPoly::from_exponents(odd_exps) - BitPoly{1};
    if (q1 != 1 || v1 != staircase) return false;
    auto [v2, q2] = collatz_step(v1);
    return q2 == 2 && v2 == family_mersenne(2 * k);
}

bool fixed_point_check(const BitPoly& n) {
    return collatz_step(n).first != n;
}

namespace {

// Sum of 2^e over a term list that may repeat exponents; carries are
// performed by plain addition, matching the x = 2 evaluation.
std::optional<BitPoly> carry_sum(const std::vector<i64>& exps) {
    BitPoly acc;
    for (i64 e : exps) {
        if (e < 0) return std::nullopt;
        acc = acc + BitPoly{1}.shl(static_cast<u64>(e));
    }
    return acc;
}

struct RawCase {
    std::vector<i64> exps;
    std::vector<u64> ops;
};

std::optional<RawCase> match_case(i64 p, const std::vector<u64>& inner) {
    const std::size_t m = inner.size();
    if (m == 0) {
        if (p == 1) return RawCase{{0}, {1, 4}};
        if (p >= 3) return RawCase{{p - 1, p - 2, 0}, {2}};
        return std::nullopt;  // p = 2: the literal formula yields an even value
    }
    if (m == 1) {
        const i64 k = static_cast<i64>(inner[0]);
        if (k == 1) return RawCase{{p - 2, p - 5, 0}, {1, 4}};
        if (k == p - 1) return RawCase{{p - 1, p - 2, p - 4, p - 5, 0}, {2, 2}};
        return RawCase{{p - 1, p - 2, k - 1, k - 2, 0}, {2}};
    }
    if (m == 2) {
        const i64 k1 = static_cast<i64>(inner[0]);
        const i64 k2 = static_cast<i64>(inner[1]);
        if (k1 == 1 && k2 == 2) return RawCase{{p + 1, p - 2, 4, 0}, {1, 1}};
        if (k1 == 1 && k2 == 3) return RawCase{{p, p - 1, 4, 0}, {1}};
        if (k1 == 1 && k2 == 4) return RawCase{{p - 1, p - 4, 3, 1, 0}, {1, 3}};
        if (k1 == 1) return RawCase{{p - 2, p - 5, k2 - 2, k2 - 5, 0}, {1, 4}};
        if (k1 == 2 && k2 == 3) return RawCase{{p - 2, p - 3, 2, 0}, {3}};
        if (k1 == 2) return RawCase{{p - 3, p - 4, k2 - 3, k2 - 4, 0}, {4}};
        return RawCase{{p - 1, p - 2, k2 - 1, k2 - 2, k1 - 1, k1 - 2, 0}, {2}};
    }
    // m >= 3: the general shifted-pair formula needs k_1 >= 2 and k_m < p - 1.
    if (inner.front() >= 2 && static_cast<i64>(inner.back()) < p - 1) {
        std::vector<i64> exps{p - 1, p - 2};
        for (u64 ki : inner) {
            exps.push_back(static_cast<i64>(ki) - 1);
            exps.push_back(static_cast<i64>(ki) - 2);
        }
        exps.push_back(0);
        return RawCase{std::move(exps), {2}};
    }
    return std::nullopt;
}

}  // namespace

std::optional<CasePrediction> predict_case(const BitPoly& n) {
    if (!n.is_odd() || n < BitPoly{3})
        throw std::domain_error("predict_case: input must be odd and >= 3");
    const auto exps = n.exponents();
    const i64 p = static_cast<i64>(exps.back());
    const std::vector<u64> inner(exps.begin() + 1, exps.end() - 1);

    auto raw = match_case(p, inner);
    if (!raw) return std::nullopt;
    auto predicted = carry_sum(raw->exps);
    if (!predicted || !predicted->is_odd()) return std::nullopt;

    // Cross-check against the actual steps: the formulas assume enough
    // room between exponents, and carries can shift q at small gaps.
    BitPoly v = n;
    for (u64 q_expected : raw->ops) {
        auto [next, q] = collatz_step(v);
        if (q != q_expected) return std::nullopt;
        v = next;
    }
    if (v != *predicted) return std::nullopt;
    return CasePrediction{std::move(*predicted), std::move(raw->ops)};
}

}  // namespace collatz
