#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "collatz/analysis.hpp"

using namespace collatz;

TEST_CASE("residue classification") {
    CHECK(residue_class(BitPoly{9}) == ResidueClass::C1);
    CHECK(residue_class(BitPoly{7}) == ResidueClass::C4);
    CHECK(residue_class(BitPoly{13}) == ResidueClass::C3);
    CHECK(residue_class(BitPoly{3}) == ResidueClass::C2);
    CHECK(residue_class(BitPoly{1}) == ResidueClass::C1);
    CHECK_THROWS_AS((void)residue_class(BitPoly{4}), std::domain_error);
}

TEST_CASE("per-class q laws, exhaustive to 2^18") {
    for (std::uint64_t n = 1; n < (1u << 18); n += 2) {
        const auto q = collatz_step(BitPoly{n}).second;
        switch (residue_class(BitPoly{n})) {
            case ResidueClass::C1: CHECK(q == 2); break;
            case ResidueClass::C2: CHECK(q == 1); break;
            case ResidueClass::C3: CHECK(q >= 3); break;
            case ResidueClass::C4: CHECK(q == 1); break;
        }
    }
}

TEST_CASE("census small ranges") {
    const auto tiny = census(BitPoly{3}, BitPoly{11}, 1);
    CHECK(tiny.total == 4);
    CHECK(tiny.by_class[int(ResidueClass::C2)].q_sum == 1);  // 3
    CHECK(tiny.by_class[int(ResidueClass::C3)].q_sum == 4);  // 5
    CHECK(tiny.by_class[int(ResidueClass::C4)].q_sum == 1);  // 7
    CHECK(tiny.by_class[int(ResidueClass::C1)].q_sum == 2);  // 9
    CHECK(tiny.mean_q() == doctest::Approx(2.0));

    const auto single = census(BitPoly{5}, BitPoly{7}, 1);
    CHECK(single.total == 1);
    CHECK(single.by_class[int(ResidueClass::C3)].count == 1);
    CHECK(single.by_class[int(ResidueClass::C3)].q_sum == 4);

    CHECK_THROWS_AS((void)census(BitPoly{7}, BitPoly{7}), std::domain_error);
}

TEST_CASE("census statistics over a large range") {
    const auto rep = census(BitPoly{3}, BitPoly{1u << 20});
    CHECK(rep.by_class[int(ResidueClass::C1)].mean_q() == doctest::Approx(2.0));
    CHECK(rep.by_class[int(ResidueClass::C2)].mean_q() == doctest::Approx(1.0));
    CHECK(rep.by_class[int(ResidueClass::C4)].mean_q() == doctest::Approx(1.0));
    CHECK(rep.by_class[int(ResidueClass::C3)].mean_q() == doctest::Approx(4.0).epsilon(0.01));
    CHECK(rep.mean_q() == doctest::Approx(2.0).epsilon(0.005));
    CHECK(rep.mean_q() >= 1.75);
    // Class counts must cover all odd values in range.
    std::uint64_t sum = 0;
    for (int c = 0; c < 4; ++c) sum += rep.by_class[c].count;
    CHECK(sum == rep.total);
    CHECK(rep.total == (1u << 19) - 1);
}

TEST_CASE("census is deterministic across worker counts") {
    const auto a = census(BitPoly{3}, BitPoly{1u << 16}, 1);
    const auto b = census(BitPoly{3}, BitPoly{1u << 16}, 4);
    const auto c = census(BitPoly{3}, BitPoly{1u << 16}, 8);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.to_json() == c.to_json());
}

TEST_CASE("drift report") {
    SUBCASE("mersenne-related branch tracks the rising envelope") {
        const auto t = trajectory(family_mersenne(20));
        const auto rep = drift_report(t, true);
        const double p = 20;
        for (std::uint64_t l = 1; l <= 20; ++l) {
            const double predicted = p + 0.58496 * double(l);
            CHECK(double(rep.degrees[l - 1]) == doctest::Approx(predicted).epsilon(0.1));
            CHECK(std::abs(double(rep.degrees[l - 1]) - predicted) <= 1.0);
        }
    }
    SUBCASE("generic trajectories drift down") {
        // 27 rises for a long stretch before collapsing, so its fitted slope
        // sits near zero; a typical start drifts clearly downward.
        const auto t27 = trajectory(BitPoly{27});
        const auto rep27 = drift_report(t27, false);
        const double expected27 = 1.5849625007 - double(t27.q_sum) / double(t27.k);
        CHECK(std::abs(rep27.slope - expected27) < 0.5);

        const auto t = trajectory(BitPoly{12345});
        const auto rep = drift_report(t, false);
        CHECK(rep.slope < 0.0);
        const double expected = 1.5849625007 - double(t.q_sum) / double(t.k);
        CHECK(std::abs(rep.slope - expected) < 0.5);
    }
    SUBCASE("empty trajectory gives an empty report") {
        const auto rep = drift_report(trajectory(BitPoly{1}), false);
        CHECK(rep.k == 0);
        CHECK(rep.degrees.empty());
        CHECK(rep.slope == 0.0);
    }
}

TEST_CASE("table 1 rows") {
    const auto rows = table1(10);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0].q == 0);
    CHECK(rows[0].degree == 0);
    CHECK(rows[0].poly == "1");
    CHECK(rows[3].degree == 4);
    CHECK(rows[3].poly == "x^4+x^3+x+1");
    CHECK(rows[7].degree == 11);
    CHECK(rows[7].poly == "x^11+x^7+x^3+x+1");
}

TEST_CASE("table 2 rows") {
    const auto rows = table2(6);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].p == 2);
    CHECK(rows[0].degree == 4);
    CHECK(rows[0].poly == "x^4+1");
    CHECK(rows[0].ratio_num == 9);
    CHECK(rows[0].ratio_den == 3);
    CHECK(rows[0].ratio_text() == "3.0000");
    CHECK(rows[1].p == 4);
    CHECK(rows[1].degree == 7);
    CHECK(rows[1].poly == "x^7+x^5+1");
    CHECK(rows[2].poly == BitPoly{1457}.format_poly());
    CHECK_THROWS_AS((void)table2(3), std::out_of_range);
}

TEST_CASE("table 3 rows") {
    const auto rows = table3(16);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].p == 0);
    CHECK(rows[0].p_poly == "0");
    CHECK(rows[0].r == 2);
    CHECK(rows[7].p == 14);
    CHECK(rows[7].p_poly == "x^3+x^2+x");
    CHECK(rows[7].r == 5);
    CHECK(rows[8].p == 16);
    CHECK(rows[8].p_poly == "x^4");
    CHECK(rows[8].r == 2);
}

TEST_CASE("table renderers") {
    const auto rows = table1(3);
    const auto csv = render_table1(rows, TableFormat::Csv);
    CHECK(csv.starts_with("q,degree,poly\n0,0,1\n"));
    const auto j = nlohmann::json::parse(render_table1(rows, TableFormat::Json));
    REQUIRE(j.size() == 4);
    CHECK(j[2]["poly"] == "x^3+1");
    const auto text = render_table1(rows, TableFormat::Text);
    CHECK(text.find("x^4+x^3+x+1") != std::string::npos);
}
