#include "collatz/verify.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "collatz/core.hpp"

namespace collatz {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

namespace {

constexpr u64 kChunkSpan = u64{1} << 16;
constexpr u128 kPromoteLimit = (~u128{0} - 1) / 3 - 1;

BitPoly from_u128(u128 v) {
    BitPoly r{static_cast<u64>(v)};
    const u64 high = static_cast<u64>(v >> 64);
    if (high) r = BitPoly{high}.shl(64) + r;
    return r;
}

unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    if (const char* env = std::getenv("COLLATZ_WORKERS")) {
        const unsigned w = unsigned(std::strtoul(env, nullptr, 10));
        if (w != 0) return w;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct ChunkResult {
    u128 peak = 0;
    u64 peak_origin = 0;
    BitPoly peak_big;       // only set when a trajectory outgrew 128 bits
    u64 peak_big_origin = 0;
    u64 max_k = 0, k_origin = 0;
    u64 max_q = 0, q_origin = 0;
    std::vector<u64> counterexamples;
};

struct IterOutcome {
    bool converged = false;
    u64 k = 0;
    u128 peak = 0;
    BitPoly peak_big;  // nonzero only if promoted
    u64 max_q = 0;
};

// BitPoly continuation for the (rare) trajectories that outgrow 128 bits.
void iterate_big(BitPoly v, const BitPoly& stop_below, const VerifyPolicy& policy,
                 IterOutcome& out) {
    out.peak_big = v;
    while (v != BitPoly{1} && !(policy.early_exit && v < stop_below)) {
        if (out.k >= policy.step_limit) return;
        auto [next, q] = collatz_step(v);
        v = next;
        ++out.k;
        out.max_q = std::max(out.max_q, q);
        if (v > out.peak_big) out.peak_big = v;
    }
    out.converged = true;
}

IterOutcome iterate_one(u64 n, const VerifyPolicy& policy) {
    IterOutcome out;
    const u128 stop_below = std::max(n, policy.floor);
    u128 v = n;
    out.peak = v;
    while (v != 1 && !(policy.early_exit && v < stop_below)) {
        if (out.k >= policy.step_limit) return out;
        if (v > kPromoteLimit) {
            iterate_big(from_u128(v), from_u128(stop_below), policy, out);
            return out;
        }
        u128 m = 3 * v + 1;
        u64 q = 0;
        while ((m & 1) == 0) { m >>= 1; ++q; }
        v = m;
        ++out.k;
        out.max_q = std::max(out.max_q, q);
        if (v > out.peak) out.peak = v;
    }
    out.converged = true;
    return out;
}

void run_chunk(u64 lo, u64 hi, const VerifyPolicy& policy, ChunkResult& out) {
    for (u64 n = lo | 1; n < hi; n += 2) {
        const IterOutcome r = iterate_one(n, policy);
        if (!r.converged) out.counterexamples.push_back(n);
        if (r.peak > out.peak) { out.peak = r.peak; out.peak_origin = n; }
        if (!r.peak_big.is_zero() &&
            (out.peak_big.is_zero() || r.peak_big > out.peak_big)) {
            out.peak_big = r.peak_big;
            out.peak_big_origin = n;
        }
        if (r.k > out.max_k) { out.max_k = r.k; out.k_origin = n; }
        if (r.max_q > out.max_q) { out.max_q = r.max_q; out.q_origin = n; }
    }
}

}  // namespace

void RangeRecords::merge(const RangeRecords& other) {
    if (other.max_odd_peak > max_odd_peak ||
        (other.max_odd_peak == max_odd_peak && other.peak_origin < peak_origin)) {
        max_odd_peak = other.max_odd_peak;
        peak_origin = other.peak_origin;
    }
    if (other.max_k > max_k || (other.max_k == max_k && other.k_origin < k_origin)) {
        max_k = other.max_k;
        k_origin = other.k_origin;
    }
    if (other.max_q > max_q || (other.max_q == max_q && other.q_origin < q_origin)) {
        max_q = other.max_q;
        q_origin = other.q_origin;
    }
}

RangeReport verify_range(const BitPoly& lo, const BitPoly& hi, const VerifyPolicy& policy) {
    if (!lo.fits_u64() || !hi.fits_u64())
        throw std::domain_error("verify_range: bounds must fit in 64 bits (desk scale)");
    const u64 a = lo.to_u64(), b = hi.to_u64();
    if (a < 1 || a >= b) throw std::domain_error("verify_range: require 1 <= lo < hi");
    if (policy.floor > a) throw std::domain_error("verify_range: floor must be <= lo");
    const unsigned workers = resolve_workers(policy.workers);

    const u64 end = policy.stop_at ? std::min(b, *policy.stop_at) : b;
    const auto t0 = std::chrono::steady_clock::now();

    const u64 chunks = end > a ? (end - a + kChunkSpan - 1) / kChunkSpan : 0;
    std::vector<ChunkResult> results(chunks);
    std::atomic<u64> next_chunk{0};
    auto worker_fn = [&] {
        for (u64 c = next_chunk.fetch_add(1); c < chunks; c = next_chunk.fetch_add(1)) {
            const u64 c_lo = a + c * kChunkSpan;
            const u64 c_hi = std::min(end, c_lo + kChunkSpan);
            run_chunk(c_lo, c_hi, policy, results[c]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker_fn);
    worker_fn();
    for (auto& t : pool) t.join();

    RangeReport rep;
    rep.lo = a;
    rep.hi = b;
    rep.floor = policy.floor;
    rep.checkpoint = end;
    // Merge in chunk order so the report is identical for any worker count.
    for (const auto& c : results) {
        RangeRecords rr;
        rr.max_odd_peak = from_u128(c.peak);
        rr.peak_origin = c.peak_origin;
        if (!c.peak_big.is_zero() && c.peak_big > rr.max_odd_peak) {
            rr.max_odd_peak = c.peak_big;
            rr.peak_origin = c.peak_big_origin;
        }
        rr.max_k = c.max_k;
        rr.k_origin = c.k_origin;
        rr.max_q = c.max_q;
        rr.q_origin = c.q_origin;
        rep.records.merge(rr);
        rep.counterexamples.insert(rep.counterexamples.end(), c.counterexamples.begin(),
                                   c.counterexamples.end());
    }
    rep.verified = rep.checkpoint == rep.hi && rep.counterexamples.empty();
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

nlohmann::ordered_json records_json(const RangeRecords& r) {
    return {{"max_odd_peak",
             {{"value", r.max_odd_peak.to_decimal_string()},
              {"origin", std::to_string(r.peak_origin)}}},
            {"max_k", {{"k", r.max_k}, {"origin", std::to_string(r.k_origin)}}},
            {"max_q", {{"q", r.max_q}, {"origin", std::to_string(r.q_origin)}}}};
}

RangeRecords records_from_json(const nlohmann::json& j) {
    RangeRecords r;
    r.max_odd_peak = BitPoly::from_decimal_string(
        j.at("max_odd_peak").at("value").get<std::string>());
    r.peak_origin = std::stoull(j.at("max_odd_peak").at("origin").get<std::string>());
    r.max_k = j.at("max_k").at("k").get<u64>();
    r.k_origin = std::stoull(j.at("max_k").at("origin").get<std::string>());
    r.max_q = j.at("max_q").at("q").get<u64>();
    r.q_origin = std::stoull(j.at("max_q").at("origin").get<std::string>());
    return r;
}

}  // namespace

std::string RangeReport::to_json(bool include_elapsed) const {
    nlohmann::ordered_json j;
    j["lo"] = std::to_string(lo);
    j["hi"] = std::to_string(hi);
    j["floor"] = std::to_string(floor);
    j["verified"] = verified;
    j["counterexamples"] = nlohmann::ordered_json::array();
    for (u64 c : counterexamples) j["counterexamples"].push_back(std::to_string(c));
    j["records"] = records_json(records);
    j["checkpoint"] = std::to_string(checkpoint);
    if (include_elapsed) j["elapsed_seconds"] = elapsed_seconds;
    return j.dump();
}

void checkpoint_save(const RangeReport& r, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint_save: cannot open " + path);
    nlohmann::ordered_json header{{"version", 1},
                                  {"lo", std::to_string(r.lo)},
                                  {"hi", std::to_string(r.hi)},
                                  {"floor", std::to_string(r.floor)}};
    nlohmann::ordered_json line{{"done_upto", std::to_string(r.checkpoint)},
                                {"verified", r.verified},
                                {"counterexamples", nlohmann::ordered_json::array()},
                                {"records", records_json(r.records)}};
    for (u64 c : r.counterexamples) line["counterexamples"].push_back(std::to_string(c));
    out << header.dump() << "\n" << line.dump() << "\n";
}

RangeReport checkpoint_resume(const std::string& path, const VerifyPolicy& policy) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("checkpoint_resume: cannot open " + path);
    std::string header_line, record_line, line;
    if (!std::getline(in, header_line) || header_line.empty())
        throw std::runtime_error("checkpoint_resume: empty checkpoint file");
    while (std::getline(in, line))
        if (!line.empty()) record_line = line;
    if (record_line.empty())
        throw std::runtime_error("checkpoint_resume: checkpoint has no progress record");

    nlohmann::json header, record;
    try {
        header = nlohmann::json::parse(header_line);
        record = nlohmann::json::parse(record_line);
    } catch (const nlohmann::json::parse_error&) {
        throw std::runtime_error("checkpoint_resume: corrupt checkpoint file");
    }
    if (!header.contains("version") || header.at("version").get<int>() != 1)
        throw std::runtime_error("checkpoint_resume: unsupported checkpoint version");

    RangeReport rep;
    rep.lo = std::stoull(header.at("lo").get<std::string>());
    rep.hi = std::stoull(header.at("hi").get<std::string>());
    rep.floor = std::stoull(header.at("floor").get<std::string>());
    rep.checkpoint = std::stoull(record.at("done_upto").get<std::string>());
    rep.records = records_from_json(record.at("records"));
    for (const auto& c : record.at("counterexamples"))
        rep.counterexamples.push_back(std::stoull(c.get<std::string>()));

    if (rep.checkpoint < rep.hi) {
        VerifyPolicy cont = policy;
        cont.floor = rep.floor;
        cont.stop_at.reset();
        const RangeReport tail =
            verify_range(BitPoly{rep.checkpoint}, BitPoly{rep.hi}, cont);
        rep.records.merge(tail.records);
        rep.counterexamples.insert(rep.counterexamples.end(), tail.counterexamples.begin(),
                                   tail.counterexamples.end());
        rep.checkpoint = tail.checkpoint;
        rep.elapsed_seconds = tail.elapsed_seconds;
    }
    rep.verified = rep.checkpoint == rep.hi && rep.counterexamples.empty();
    return rep;
}

}  // namespace collatz
