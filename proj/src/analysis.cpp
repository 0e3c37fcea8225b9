#include "collatz/analysis.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace collatz {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

ResidueClass residue_class(const BitPoly& n) {
    if (!n.is_odd()) throw std::domain_error("residue_class: input must be odd");
    switch (n.mod_small(8)) {
        case 1: return ResidueClass::C1;
        case 3: return ResidueClass::C2;
        case 5: return ResidueClass::C3;
        default: return ResidueClass::C4;
    }
}

const char* residue_class_name(ResidueClass c) {
    static const char* names[] = {"C1", "C2", "C3", "C4"};
    return names[int(c)];
}

namespace {

int class_index_u64(u64 n) {
    switch (n & 7) {
        case 1: return 0;
        case 3: return 1;
        case 5: return 2;
        default: return 3;
    }
}

void census_chunk_u64(u64 lo, u64 hi, ClassStats out[4]) {
    for (u64 n = lo | 1; n < hi; n += 2) {
        const u128 m = u128{3} * n + 1;
        u64 q = 0;
        u128 v = m;
        while ((v & 1) == 0) { v >>= 1; ++q; }
        auto& cs = out[class_index_u64(n)];
        ++cs.count;
        cs.q_sum += q;
    }
}

}  // namespace

CensusReport census(const BitPoly& lo, const BitPoly& hi, unsigned workers) {
    if (lo >= hi) throw std::domain_error("census: empty range");
    CensusReport rep;
    rep.lo = lo.to_decimal_string();
    rep.hi = hi.to_decimal_string();

    if (workers == 0) {
        const char* env = std::getenv("COLLATZ_WORKERS");
        workers = env ? unsigned(std::strtoul(env, nullptr, 10)) : 0;
        if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    }

    if (hi.fits_u64()) {
        const u64 a = lo.to_u64(), b = hi.to_u64();
        const u64 span = b - a;
        workers = unsigned(std::min<u64>(workers, std::max<u64>(1, span / 1024)));
        std::vector<std::array<ClassStats, 4>> partial(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const u64 c_lo = a + span * w / workers;
            const u64 c_hi = a + span * (w + 1) / workers;
            pool.emplace_back([c_lo, c_hi, &partial, w] {
                census_chunk_u64(c_lo, c_hi, partial[w].data());
            });
        }
        for (auto& t : pool) t.join();
        for (auto& part : partial)
            for (int c = 0; c < 4; ++c) {
                rep.by_class[c].count += part[c].count;
                rep.by_class[c].q_sum += part[c].q_sum;
            }
    } else {
        BitPoly n = lo.is_odd() ? lo : lo.add_small(1);
        for (; n < hi; n = n.add_small(2)) {
            auto [_, q] = collatz_step(n);
            auto& cs = rep.by_class[int(residue_class(n))];
            ++cs.count;
            cs.q_sum += q;
        }
    }
    for (int c = 0; c < 4; ++c) {
        rep.total += rep.by_class[c].count;
        rep.q_total += rep.by_class[c].q_sum;
    }
    return rep;
}

std::string CensusReport::to_json() const {
    nlohmann::ordered_json j;
    j["lo"] = lo;
    j["hi"] = hi;
    for (int c = 0; c < 4; ++c) {
        const char* name = residue_class_name(ResidueClass(c));
        j["classes"][name] = {{"count", by_class[c].count},
                              {"q_sum", by_class[c].q_sum},
                              {"mean_q", by_class[c].mean_q()},
                              {"fraction", fraction(ResidueClass(c))}};
    }
    j["total"] = total;
    j["q_total"] = q_total;
    j["mean_q"] = mean_q();
    return j.dump();
}

std::string CensusReport::to_text() const {
    std::ostringstream os;
    os << "census [" << lo << ", " << hi << ")\n";
    for (int c = 0; c < 4; ++c)
        os << "  " << residue_class_name(ResidueClass(c)) << ": count=" << by_class[c].count
           << " mean_q=" << by_class[c].mean_q()
           << " fraction=" << fraction(ResidueClass(c)) << "\n";
    os << "  total=" << total << " mean_q=" << mean_q() << "\n";
    return os.str();
}

DriftReport drift_report(const TrajectoryRecord& t, bool is_mersenne_related) {
    DriftReport rep;
    rep.start = t.start.to_decimal_string();
    rep.k = t.k;
    rep.mersenne_related = is_mersenne_related;
    if (t.k == 0) return rep;

    const double p = double(t.start.degree());
    for (u64 l = 1; l <= t.k; ++l) {
        const double d = double(t.steps[l - 1].degree);
        double bound;
        if (is_mersenne_related && double(l) <= p)
            bound = p + 0.5 + 0.58496 * double(l);
        else if (is_mersenne_related)
            bound = 0.5 - 0.165037 * double(l) + 1.75 * p;
        else
            bound = p + 0.5 - 0.165037 * double(l);
        rep.degrees.push_back(t.steps[l - 1].degree);
        rep.bounds.push_back(bound);
        if (d > bound) ++rep.violations;
    }

    // Least-squares slope of degree vs step index over (0, p), (1, d1), ...
    const double n = double(t.k + 1);
    double sx = 0, sy = p, sxx = 0, sxy = 0;
    for (u64 l = 1; l <= t.k; ++l) {
        sx += double(l);
        sy += double(t.steps[l - 1].degree);
        sxx += double(l) * double(l);
        sxy += double(l) * double(t.steps[l - 1].degree);
    }
    const double den = n * sxx - sx * sx;
    rep.slope = den != 0 ? (n * sxy - sx * sy) / den : 0.0;
    return rep;
}

std::string DriftReport::to_json() const {
    nlohmann::ordered_json j;
    j["start"] = start;
    j["k"] = k;
    j["mersenne_related"] = mersenne_related;
    j["degrees"] = degrees;
    j["bounds"] = bounds;
    j["slope"] = slope;
    j["violations"] = violations;
    return j.dump();
}

std::string DriftReport::to_text() const {
    std::ostringstream os;
    os << "drift start=" << start << " k=" << k
       << " slope=" << slope << " violations=" << violations << "\n";
    for (std::size_t i = 0; i < degrees.size(); ++i)
        os << "  l=" << i + 1 << " degree=" << degrees[i] << " bound=" << bounds[i] << "\n";
    return os.str();
}

namespace {

std::string rational_4dec(u64 num, u64 den) {
    const u64 whole = num / den;
    u64 frac = ((num % den) * 10000 + den / 2) / den;
    u64 carry = frac / 10000;
    frac %= 10000;
    std::string f = std::to_string(frac);
    return std::to_string(whole + carry) + "." + std::string(4 - f.size(), '0') + f;
}

}  // namespace

std::string Table2Row::ratio_text() const { return rational_4dec(ratio_num, ratio_den); }
std::string Table2Row::from_f_text() const { return rational_4dec(from_f_num, from_f_den); }

std::vector<Table1Row> table1(u64 max_q) {
    std::vector<Table1Row> rows;
    for (u64 q = 0; q <= max_q; ++q) {
        const BitPoly v = BitPoly{3}.pow(q);
        rows.push_back({q, v.degree(), v.format_poly()});
    }
    return rows;
}

std::vector<Table2Row> table2(u64 max_p) {
    if (max_p < 2 || max_p % 2 != 0)
        throw std::out_of_range("table2: max_p must be even and >= 2");
    std::vector<Table2Row> rows;
    for (u64 p = 2; p <= max_p; p += 2) {
        const BitPoly g = family_G(p);
        const auto t = trajectory(g);
        rows.push_back({p, g.degree(), g.format_poly(),
                        t.q_sum, t.k, t.q_sum + p, t.k + p});
    }
    return rows;
}

std::vector<Table3Row> table3(u64 max_p) {
    if (max_p % 2 != 0) throw std::out_of_range("table3: max_p must be even");
    std::vector<Table3Row> rows;
    for (u64 p = 0; p <= max_p; p += 2) {
        const auto rel = g_relations_check(p);
        if (!rel.ok) throw std::runtime_error("table3: relations failed at p=" + std::to_string(p));
        rows.push_back({p, BitPoly{p}.format_poly(), rel.r});
    }
    return rows;
}

namespace {

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s += std::string(w - s.size(), ' ');
    return s;
}

}  // namespace

std::string render_table1(const std::vector<Table1Row>& rows, TableFormat f) {
    std::ostringstream os;
    switch (f) {
        case TableFormat::Csv:
            os << "q,degree,poly\n";
            for (const auto& r : rows) os << r.q << "," << r.degree << "," << r.poly << "\n";
            break;
        case TableFormat::Json: {
            nlohmann::ordered_json j = nlohmann::ordered_json::array();
            for (const auto& r : rows)
                j.push_back({{"q", r.q}, {"degree", r.degree}, {"poly", r.poly}});
            os << j.dump();
            break;
        }
        case TableFormat::Text:
            os << pad("q", 4) << pad("degree", 8) << "poly\n";
            for (const auto& r : rows)
                os << pad(std::to_string(r.q), 4) << pad(std::to_string(r.degree), 8)
                   << r.poly << "\n";
            break;
    }
    return os.str();
}

std::string render_table2(const std::vector<Table2Row>& rows, TableFormat f) {
    std::ostringstream os;
    switch (f) {
        case TableFormat::Csv:
            os << "p,degree,poly,ratio_num,ratio_den,ratio,from_f_num,from_f_den,from_f\n";
            for (const auto& r : rows)
                os << r.p << "," << r.degree << "," << r.poly << "," << r.ratio_num << ","
                   << r.ratio_den << "," << r.ratio_text() << "," << r.from_f_num << ","
                   << r.from_f_den << "," << r.from_f_text() << "\n";
            break;
        case TableFormat::Json: {
            nlohmann::ordered_json j = nlohmann::ordered_json::array();
            for (const auto& r : rows)
                j.push_back({{"p", r.p},
                             {"degree", r.degree},
                             {"poly", r.poly},
                             {"ratio_num", r.ratio_num},
                             {"ratio_den", r.ratio_den},
                             {"ratio", r.ratio_text()},
                             {"from_f_num", r.from_f_num},
                             {"from_f_den", r.from_f_den},
                             {"from_f", r.from_f_text()}});
            os << j.dump();
            break;
        }
        case TableFormat::Text:
            os << pad("p", 4) << pad("degree", 8) << pad("ratio", 10) << pad("from_f", 10)
               << "poly\n";
            for (const auto& r : rows)
                os << pad(std::to_string(r.p), 4) << pad(std::to_string(r.degree), 8)
                   << pad(r.ratio_text(), 10) << pad(r.from_f_text(), 10) << r.poly << "\n";
            break;
    }
    return os.str();
}

std::string render_table3(const std::vector<Table3Row>& rows, TableFormat f) {
    std::ostringstream os;
    switch (f) {
        case TableFormat::Csv:
            os << "p,p_poly,r\n";
            for (const auto& r : rows) os << r.p << "," << r.p_poly << "," << r.r << "\n";
            break;
        case TableFormat::Json: {
            nlohmann::ordered_json j = nlohmann::ordered_json::array();
            for (const auto& r : rows)
                j.push_back({{"p", r.p}, {"p_poly", r.p_poly}, {"r", r.r}});
            os << j.dump();
            break;
        }
        case TableFormat::Text:
            os << pad("p", 6) << pad("p_poly", 20) << "r\n";
            for (const auto& r : rows)
                os << pad(std::to_string(r.p), 6) << pad(r.p_poly, 20) << r.r << "\n";
            break;
    }
    return os.str();
}

}  // namespace collatz
