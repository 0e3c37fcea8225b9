#include "collatz/bitpoly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <stdexcept>

namespace collatz {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

BitPoly::BitPoly(u64 v) {
    if (v != 0) limbs_.push_back(v);
}

void BitPoly::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BitPoly BitPoly::from_exponents(const std::set<u64>& exps) {
    BitPoly r;
    if (exps.empty()) return r;
    r.limbs_.assign(*exps.rbegin() / 64 + 1, 0);
    for (u64 e : exps) r.limbs_[e / 64] |= u64{1} << (e % 64);
    return r;
}

bool BitPoly::bit(u64 i) const {
    const u64 limb = i / 64;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 64)) & 1;
}

u64 BitPoly::degree() const {
    if (is_zero()) throw std::domain_error("degree of zero is undefined");
    return (limbs_.size() - 1) * 64 + (63 - std::countl_zero(limbs_.back()));
}

u64 BitPoly::term_count() const {
    u64 n = 0;
    for (u64 w : limbs_) n += std::popcount(w);
    return n;
}

u64 BitPoly::two_adic_valuation() const {
    if (is_zero()) throw std::domain_error("valuation of zero is undefined");
    u64 i = 0;
    while (limbs_[i] == 0) ++i;
    return i * 64 + std::countr_zero(limbs_[i]);
}

std::vector<u64> BitPoly::exponents() const {
    std::vector<u64> out;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u64 w = limbs_[i];
        while (w) {
            out.push_back(i * 64 + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

BitPoly BitPoly::operator+(const BitPoly& rhs) const {
    const auto& a = limbs_.size() >= rhs.limbs_.size() ? limbs_ : rhs.limbs_;
    const auto& b = limbs_.size() >= rhs.limbs_.size() ? rhs.limbs_ : limbs_;
    BitPoly r;
    r.limbs_.resize(a.size() + 1, 0);
    u128 carry = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        u128 s = carry + a[i] + (i < b.size() ? b[i] : 0);
        r.limbs_[i] = static_cast<u64>(s);
        carry = s >> 64;
    }
    r.limbs_[a.size()] = static_cast<u64>(carry);
    r.trim();
    return r;
}

BitPoly BitPoly::operator-(const BitPoly& rhs) const {
    if (*this < rhs) throw std::domain_error("subtraction would go negative");
    BitPoly r;
    r.limbs_.resize(limbs_.size(), 0);
    u64 borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u64 bi = i < rhs.limbs_.size() ? rhs.limbs_[i] : 0;
        u64 d = limbs_[i] - bi;
        u64 nb = limbs_[i] < bi || (borrow && d == 0) ? 1 : 0;
        r.limbs_[i] = d - borrow;
        borrow = nb;
    }
    r.trim();
    return r;
}

BitPoly BitPoly::operator*(const BitPoly& rhs) const {
    if (is_zero() || rhs.is_zero()) return {};
    BitPoly r;
    r.limbs_.assign(limbs_.size() + rhs.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u64 carry = 0;
        for (std::size_t j = 0; j < rhs.limbs_.size(); ++j) {
            u128 s = static_cast<u128>(limbs_[i]) * rhs.limbs_[j] + r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<u64>(s);
            carry = static_cast<u64>(s >> 64);
        }
        r.limbs_[i + rhs.limbs_.size()] += carry;
    }
    r.trim();
    return r;
}

BitPoly BitPoly::pow(u64 e) const {
    BitPoly result{1};
    BitPoly base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

BitPoly BitPoly::shl(u64 k) const {
    if (is_zero() || k == 0) return *this;
    const u64 limb_shift = k / 64, bit_shift = k % 64;
    BitPoly r;
    r.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        r.limbs_[i + limb_shift] |= limbs_[i] << bit_shift;
        if (bit_shift) r.limbs_[i + limb_shift + 1] |= limbs_[i] >> (64 - bit_shift);
    }
    r.trim();
    return r;
}

BitPoly BitPoly::shr(u64 k) const {
    const u64 limb_shift = k / 64, bit_shift = k % 64;
    if (limb_shift >= limbs_.size()) return {};
    BitPoly r;
    r.limbs_.assign(limbs_.size() - limb_shift, 0);
    for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
        r.limbs_[i] = limbs_[i + limb_shift] >> bit_shift;
        if (bit_shift && i + limb_shift + 1 < limbs_.size())
            r.limbs_[i] |= limbs_[i + limb_shift + 1] << (64 - bit_shift);
    }
    r.trim();
    return r;
}

BitPoly BitPoly::shr_exact(u64 k) const {
    if (k == 0) return *this;
    if (is_zero()) return {};
    if (two_adic_valuation() < k)
        throw std::domain_error("shr_exact: value not divisible by 2^k");
    return shr(k);
}

BitPoly BitPoly::mul_small(u64 m) const {
    if (m == 0 || is_zero()) return {};
    BitPoly r;
    r.limbs_.assign(limbs_.size() + 1, 0);
    u64 carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u128 s = static_cast<u128>(limbs_[i]) * m + carry;
        r.limbs_[i] = static_cast<u64>(s);
        carry = static_cast<u64>(s >> 64);
    }
    r.limbs_[limbs_.size()] = carry;
    r.trim();
    return r;
}

BitPoly BitPoly::add_small(u64 m) const {
    return *this + BitPoly{m};
}

u64 BitPoly::mod_small(u64 m) const {
    if (m == 0) throw std::domain_error("modulo zero");
    u128 rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;)
        rem = ((rem << 64) | limbs_[i]) % m;
    return static_cast<u64>(rem);
}

u64 BitPoly::to_u64() const {
    if (limbs_.size() > 1) throw std::domain_error("value does not fit in 64 bits");
    return limbs_.empty() ? 0 : limbs_[0];
}

std::strong_ordering BitPoly::operator<=>(const BitPoly& rhs) const {
    if (limbs_.size() != rhs.limbs_.size())
        return limbs_.size() <=> rhs.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;)
        if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] <=> rhs.limbs_[i];
    return std::strong_ordering::equal;
}

BitPoly BitPoly::parse_poly(std::string_view text) {
    std::set<u64> exps;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && text[i] == ' ') ++i; };
    auto parse_term = [&]() -> u64 {
        if (i >= text.size()) throw std::invalid_argument("poly: unexpected end of input");
        if (text[i] == '1') { ++i; return 0; }
        if (text[i] != 'x') throw std::invalid_argument("poly: expected term");
        ++i;
        if (i >= text.size() || text[i] != '^') return 1;
        ++i;
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
            throw std::invalid_argument("poly: expected exponent after '^'");
        u64 e = 0;
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            e = e * 10 + (text[i] - '0');
            if (e > (u64{1} << 40)) throw std::invalid_argument("poly: exponent too large");
            ++i;
        }
        if (e < 2 || (text[start] == '0'))
            throw std::invalid_argument("poly: exponents written with '^' must be >= 2");
        return e;
    };
    skip_ws();
    while (true) {
        u64 e = parse_term();
        if (!exps.insert(e).second) throw std::invalid_argument("poly: duplicate exponent");
        skip_ws();
        if (i == text.size()) break;
        if (text[i] != '+') throw std::invalid_argument("poly: expected '+'");
        ++i;
        skip_ws();
    }
    return from_exponents(exps);
}

std::string BitPoly::format_poly() const {
    if (is_zero()) return "0";
    auto exps = exponents();
    std::string out;
    for (auto it = exps.rbegin(); it != exps.rend(); ++it) {
        if (!out.empty()) out += '+';
        if (*it == 0) out += '1';
        else if (*it == 1) out += 'x';
        else out += "x^" + std::to_string(*it);
    }
    return out;
}

BitPoly BitPoly::from_decimal_string(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("decimal: empty string");
    BitPoly r;
    std::size_t i = 0;
    while (i < s.size()) {
        u64 chunk = 0, scale = 1;
        std::size_t take = std::min<std::size_t>(19, s.size() - i);
        for (std::size_t j = 0; j < take; ++j, ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw std::invalid_argument("decimal: non-digit character");
            chunk = chunk * 10 + (s[i] - '0');
            scale *= 10;
        }
        r = r.mul_small(scale).add_small(chunk);
    }
    return r;
}

std::string BitPoly::to_decimal_string() const {
    if (is_zero()) return "0";
    constexpr u64 kBase = 10'000'000'000'000'000'000ULL;  // 10^19
    std::vector<u64> chunks;
    std::vector<u64> work = limbs_;
    while (!work.empty()) {
        u128 rem = 0;
        for (std::size_t i = work.size(); i-- > 0;) {
            u128 cur = (rem << 64) | work[i];
            work[i] = static_cast<u64>(cur / kBase);
            rem = cur % kBase;
        }
        while (!work.empty() && work.back() == 0) work.pop_back();
        chunks.push_back(static_cast<u64>(rem));
    }
    std::string out = std::to_string(chunks.back());
    for (std::size_t i = chunks.size() - 1; i-- > 0;) {
        std::string part = std::to_string(chunks[i]);
        out += std::string(19 - part.size(), '0') + part;
    }
    return out;
}

}  // namespace collatz
