#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "collatz/bitpoly.hpp"

using collatz::BitPoly;
using boost::multiprecision::cpp_int;

namespace {

cpp_int to_cpp_int(const BitPoly& v) {
    return cpp_int{v.to_decimal_string()};
}

BitPoly from_cpp_int(const cpp_int& v) {
    return BitPoly::from_decimal_string(v.str());
}

BitPoly random_value(std::mt19937_64& rng, unsigned max_bits) {
    std::uniform_int_distribution<unsigned> bits_dist(0, max_bits);
    const unsigned bits = bits_dist(rng);
    if (bits == 0) return {};
    std::set<std::uint64_t> exps{bits - 1};
    std::uniform_int_distribution<std::uint64_t> exp_dist(0, bits - 1);
    for (unsigned i = 0; i < bits / 2; ++i) exps.insert(exp_dist(rng));
    return BitPoly::from_exponents(exps);
}

}  // namespace

TEST_CASE("from_exponents") {
    CHECK(BitPoly::from_exponents({4, 3, 0}) == BitPoly{25});
    CHECK(BitPoly::from_exponents({}) == BitPoly{0});
    CHECK(BitPoly::from_exponents({7, 5, 0}) == BitPoly{161});
}

TEST_CASE("parse_poly") {
    CHECK(BitPoly::parse_poly("x^3+1") == BitPoly{9});
    CHECK(BitPoly::parse_poly("1") == BitPoly{1});
    CHECK(BitPoly::parse_poly("x^4+x^3+x+1") == BitPoly{27});
    CHECK(BitPoly::parse_poly("1+x^5+x^7") == BitPoly{161});  // ascending order accepted
    CHECK(BitPoly::parse_poly(" x^2 + x + 1 ") == BitPoly{7});

    CHECK_THROWS_AS((void)BitPoly::parse_poly(""), std::invalid_argument);
    CHECK_THROWS_AS((void)BitPoly::parse_poly("x^1"), std::invalid_argument);
    CHECK_THROWS_AS((void)BitPoly::parse_poly("x^3+x^3"), std::invalid_argument);
    CHECK_THROWS_AS((void)BitPoly::parse_poly("x+"), std::invalid_argument);
    CHECK_THROWS_AS((void)BitPoly::parse_poly("2x"), std::invalid_argument);
    CHECK_THROWS_AS((void)BitPoly::parse_poly("x^"), std::invalid_argument);
}

TEST_CASE("format_poly") {
    CHECK(BitPoly{9}.format_poly() == "x^3+1");
    CHECK(BitPoly{1}.format_poly() == "1");
    CHECK(BitPoly{161}.format_poly() == "x^7+x^5+1");
    CHECK(BitPoly{0}.format_poly() == "0");
    CHECK(BitPoly{6}.format_poly() == "x^2+x");
}

TEST_CASE("poly round-trip") {
    std::mt19937_64 rng{7};
    for (int i = 0; i < 500; ++i) {
        const BitPoly v = random_value(rng, 256);
        if (v.is_zero()) continue;
        CHECK(BitPoly::parse_poly(v.format_poly()) == v);
    }
}

TEST_CASE("basic arithmetic") {
    CHECK(BitPoly{3} + BitPoly{3} == BitPoly{6});
    CHECK(BitPoly{3}.pow(5) == BitPoly{243});
    CHECK(BitPoly{243}.format_poly() == "x^7+x^6+x^5+x^4+x+1");
    const BitPoly v = BitPoly{3} * BitPoly{7} + BitPoly{1};
    CHECK(v == BitPoly{22});
    CHECK(v.shr_exact(1) == BitPoly{11});
    CHECK_THROWS_AS((void)BitPoly{22}.shr_exact(2), std::domain_error);
    CHECK_THROWS_AS((void)(BitPoly{3} - BitPoly{5}), std::domain_error);
}

TEST_CASE("degree, term_count, valuation") {
    CHECK(BitPoly{243}.degree() == 7);
    CHECK(BitPoly{31}.term_count() == 5);
    CHECK(BitPoly{16}.two_adic_valuation() == 4);
    CHECK_THROWS_AS((void)BitPoly{0}.degree(), std::domain_error);
    CHECK_THROWS_AS((void)BitPoly{0}.two_adic_valuation(), std::domain_error);
}

TEST_CASE("decimal round-trip") {
    CHECK(BitPoly::from_decimal_string("9232") == BitPoly::from_exponents({13, 10, 4}));
    CHECK(BitPoly::from_decimal_string("0") == BitPoly{0});
    CHECK(BitPoly::from_decimal_string("1457") ==
          BitPoly::parse_poly("x^10+x^8+x^7+x^5+x^4+1"));
    CHECK_THROWS_AS((void)BitPoly::from_decimal_string(""), std::invalid_argument);
    CHECK_THROWS_AS((void)BitPoly::from_decimal_string("12a"), std::invalid_argument);

    std::mt19937_64 rng{11};
    for (int i = 0; i < 300; ++i) {
        const BitPoly v = random_value(rng, 2048);
        CHECK(BitPoly::from_decimal_string(v.to_decimal_string()) == v);
    }
}

TEST_CASE("arithmetic agrees with a reference big-integer implementation") {
    std::mt19937_64 rng{42};
    for (int i = 0; i < 10'000; ++i) {
        const BitPoly a = random_value(rng, 4096);
        const BitPoly b = random_value(rng, 4096);
        const cpp_int ra = to_cpp_int(a), rb = to_cpp_int(b);
        CHECK(a + b == from_cpp_int(ra + rb));
        CHECK(a * b == from_cpp_int(ra * rb));
        if (a >= b) CHECK(a - b == from_cpp_int(ra - rb));
        const unsigned k = unsigned(i % 130);
        CHECK(a.shl(k) == from_cpp_int(ra << k));
    }
}

TEST_CASE("degree of a product") {
    std::mt19937_64 rng{13};
    for (int i = 0; i < 2000; ++i) {
        BitPoly a = random_value(rng, 300).add_small(1);
        BitPoly b = random_value(rng, 300).add_small(1);
        const auto d = (a * b).degree();
        CHECK(d >= a.degree() + b.degree());
        CHECK(d <= a.degree() + b.degree() + 1);
    }
}

TEST_CASE("valuation shifts with shl") {
    std::mt19937_64 rng{17};
    for (int i = 0; i < 1000; ++i) {
        const BitPoly v = random_value(rng, 200).add_small(1);
        const std::uint64_t k = i % 97;
        CHECK(v.shl(k).two_adic_valuation() == v.two_adic_valuation() + k);
    }
}

TEST_CASE("odd polynomial shape") {
    // Odd values >= 3 have bit 0 set and at least two terms.
    for (std::uint64_t n = 3; n < 1000; n += 2) {
        const BitPoly v{n};
        CHECK(v.term_count() >= 2);
        CHECK(v.bit(0));
    }
}
