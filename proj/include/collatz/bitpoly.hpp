#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace collatz {

// Arbitrary-precision unsigned integer stored as 64-bit limbs, least
// significant first. Doubles as the binary polynomial view: the value
// sum c_mu * 2^mu is the polynomial sum c_mu * x^mu evaluated at x = 2,
// so carried integer arithmetic realizes the reduction rules
// x+1 = x^2-1 and 2*x^(t-1) = x^t.
//
// Canonical form: no zero high limbs; zero is the empty limb vector.
// Values are immutable in spirit: all operations return new values and
// are safe to share across threads.
class BitPoly {
public:
    BitPoly() = default;
    BitPoly(std::uint64_t v);

    static BitPoly from_exponents(const std::set<std::uint64_t>& exps);

    // Grammar: poly := term ("+" term)*; term := "x^" INT | "x" | "1",
    // INT >= 2, optional spaces around "+", any term order, no duplicate
    // exponents. Throws std::invalid_argument on malformed or duplicate
    // terms.
    static BitPoly parse_poly(std::string_view text);

    // Canonical descending-exponent rendering; zero formats as "0".
    // Round-trips with parse_poly.
    std::string format_poly() const;

    static BitPoly from_decimal_string(std::string_view s);
    std::string to_decimal_string() const;

    bool is_zero() const { return limbs_.empty(); }
    bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1); }
    bool bit(std::uint64_t i) const;

    // Index of the highest set bit; throws std::domain_error on zero.
    std::uint64_t degree() const;
    // Number of set bits (popcount).
    std::uint64_t term_count() const;
    // Largest t with 2^t dividing the value; throws on zero.
    std::uint64_t two_adic_valuation() const;

    // Set-bit exponents, ascending.
    std::vector<std::uint64_t> exponents() const;

    BitPoly operator+(const BitPoly& rhs) const;
    // Requires *this >= rhs; throws std::domain_error otherwise.
    BitPoly operator-(const BitPoly& rhs) const;
    BitPoly operator*(const BitPoly& rhs) const;
    BitPoly pow(std::uint64_t e) const;
    BitPoly shl(std::uint64_t k) const;
    // Requires the low k bits to be zero; throws std::domain_error.
    BitPoly shr_exact(std::uint64_t k) const;

    BitPoly mul_small(std::uint64_t m) const;
    BitPoly add_small(std::uint64_t m) const;
    // Value modulo m (m >= 1); handy for residue classes.
    std::uint64_t mod_small(std::uint64_t m) const;

    bool fits_u64() const { return limbs_.size() <= 1; }
    std::uint64_t to_u64() const;  // throws if it does not fit

    std::strong_ordering operator<=>(const BitPoly& rhs) const;
    bool operator==(const BitPoly& rhs) const = default;

    const std::vector<std::uint64_t>& limbs() const { return limbs_; }

private:
    void trim();
    // Unconditional right shift by k bits (low bits discarded).
    BitPoly shr(std::uint64_t k) const;

    std::vector<std::uint64_t> limbs_;
};

}  // namespace collatz
