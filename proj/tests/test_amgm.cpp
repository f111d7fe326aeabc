#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "varineq/varineq.hpp"

using namespace varineq;

namespace {

const weighted_sample x14 = weighted_sample::uniform({1.0, 4.0});
const weighted_sample x04 = weighted_sample::uniform({0.0, 4.0});
const weighted_sample x28({2.0, 8.0}, {0.75, 0.25});

}  // namespace

TEST_CASE("amgm_gap fixtures", "[amgm]") {
    CHECK(amgm_gap(x14) == 0.5);
    CHECK(amgm_gap(x28) == Catch::Approx(0.67157287525380990).epsilon(1e-13));
    CHECK(amgm_gap(weighted_sample::uniform({3.0, 3.0})) == 0.0);
    SECTION("a zero value collapses the geometric mean, so gap = mean") {
        CHECK(amgm_gap(x04) == 2.0);
    }
    SECTION("needs two points and nonnegative values") {
        CHECK_THROWS_AS(amgm_gap(weighted_sample::uniform({5.0})), too_few_points_error);
        CHECK_THROWS_AS(amgm_gap(weighted_sample::uniform({-1.0, 2.0})), negative_value_error);
    }
    SECTION("gap is never negative (AM-GM)") {
        stress::splitmix64 rng(17);
        for (int it = 0; it < 500; ++it) {
            const std::size_t n = 2 + rng.next() % 12;
            std::vector<double> v(n);
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = std::pow(rng.next_unit(), -2.0);
                w[i] = rng.next_unit();
            }
            CHECK(amgm_gap(weighted_sample(v, w)) >= 0.0);
        }
    }
}

TEST_CASE("variance-power gap bounds (two-sided sandwich)", "[amgm]") {
    SECTION("two-point equal weights are the sharpness configuration at r=s=1") {
        const gap_bounds b = gap_variance_bounds(x14, 1.0, 1.0);
        CHECK(b.lower == 0.5);
        CHECK(b.upper == 0.5);

        const gap_bounds z = gap_variance_bounds(x04, 1.0, 1.0);
        CHECK(z.lower == 2.0);
        CHECK(z.upper == 2.0);
    }
    SECTION("exponent domain: r in (0,1], s in [1,inf)") {
        CHECK_THROWS_AS(gap_variance_bounds(x14, 0.0, 1.0), exponent_range_error);
        CHECK_THROWS_AS(gap_variance_bounds(x14, 1.5, 1.0), exponent_range_error);
        CHECK_THROWS_AS(gap_variance_bounds(x14, 0.5, 0.75), exponent_range_error);
        CHECK_NOTHROW(gap_variance_bounds(x14, 1.0, 8.0));
    }
    SECTION("sandwich holds on random samples for an exponent ladder") {
        stress::splitmix64 rng(23);
        for (int it = 0; it < 400; ++it) {
            const std::size_t n = 2 + rng.next() % 12;
            std::vector<double> v(n);
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = rng.next_unit();
                w[i] = rng.next_unit();
            }
            const weighted_sample x(v, w);
            const double gap = amgm_gap(x);
            for (double r : {0.25, 0.5, 1.0}) {
                for (double s : {1.0, 2.0, 8.0}) {
                    const gap_bounds b = gap_variance_bounds(x, r, s);
                    const double scale = std::max(1.0, gap);
                    CHECK(b.lower <= gap + 1e-9 * scale);
                    CHECK(gap <= b.upper + 1e-9 * scale);
                }
            }
        }
    }
    SECTION("bounds inherit curve monotonicity: r = 1 and s = 1 are tightest") {
        const weighted_sample x({0.3, 1.7, 0.9}, {0.2, 0.5, 0.3});
        const double l1 = gap_variance_bounds(x, 0.25, 1.0).lower;
        const double l2 = gap_variance_bounds(x, 1.0, 1.0).lower;
        CHECK(l1 <= l2 * (1.0 + 1e-12));
        const double u1 = gap_variance_bounds(x, 1.0, 1.0).upper;
        const double u2 = gap_variance_bounds(x, 1.0, 4.0).upper;
        CHECK(u1 <= u2 * (1.0 + 1e-12));
    }
}

TEST_CASE("Cartwright-Field bounds", "[amgm]") {
    SECTION("fixtures") {
        const gap_bounds b14 = cartwright_field_bounds(x14);
        CHECK(b14.lower == 0.28125);   // Var/(2 X_max) = 2.25/8
        CHECK(b14.upper == 1.125);     // Var/(2 X_min) = 2.25/2

        const gap_bounds b28 = cartwright_field_bounds(x28);
        CHECK(b28.lower == 0.421875);  // 6.75/16
        CHECK(b28.upper == 1.6875);    // 6.75/4
        const double gap = amgm_gap(x28);
        CHECK(b28.lower <= gap);
        CHECK(gap <= b28.upper);
    }
    SECTION("requires strictly positive values") {
        CHECK_THROWS_AS(cartwright_field_bounds(x04), nonpositive_value_error);
    }
    SECTION("sandwich on random positive samples") {
        stress::splitmix64 rng(29);
        for (int it = 0; it < 400; ++it) {
            const std::size_t n = 2 + rng.next() % 12;
            std::vector<double> v(n);
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = 0.1 + rng.next_unit();
                w[i] = rng.next_unit();
            }
            const weighted_sample x(v, w);
            const gap_bounds b = cartwright_field_bounds(x);
            const double gap = amgm_gap(x);
            CHECK(b.lower <= gap + 1e-12);
            CHECK(gap <= b.upper + 1e-12);
        }
    }
}

TEST_CASE("square-root variance lower bound", "[amgm]") {
    CHECK(sqrt_variance_lower_bound(x14) == 0.25);
    CHECK(sqrt_variance_lower_bound(x04) == 1.0);
    SECTION("it is dominated by the variance-power lower bound at r=1") {
        stress::splitmix64 rng(37);
        for (int it = 0; it < 500; ++it) {
            const std::size_t n = 2 + rng.next() % 12;
            std::vector<double> v(n);
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = rng.next_unit() * 3.0;
                w[i] = rng.next_unit();
            }
            const weighted_sample x(v, w);
            const double a2 = sqrt_variance_lower_bound(x);
            const double thm4 = gap_variance_bounds(x, 1.0, 1.0).lower;
            CHECK(a2 <= amgm_gap(x) + 1e-12);
            CHECK(thm4 >= a2);  // division by 1 - alpha_min can only increase it
        }
    }
}

TEST_CASE("full gap report", "[amgm]") {
    SECTION("positive sample: all bound families present") {
        const amgm_gap_report rep = full_gap_report(x14, 1.0, 1.0);
        CHECK(rep.gap == 0.5);
        CHECK(rep.var_lower == 0.5);
        CHECK(rep.var_upper == 0.5);
        REQUIRE(rep.cartwright_field.has_value());
        CHECK(rep.cartwright_field->lower == 0.28125);
        CHECK(rep.cartwright_field->upper == 1.125);
        CHECK(rep.sqrt_var_lower == 0.25);
        CHECK(rep.alpha_min == 0.5);
        CHECK(rep.x_min == 1.0);
        CHECK(rep.x_max == 4.0);
        CHECK(rep.tightest_lower == bound_family::variance_power);
        CHECK(rep.tightest_upper == bound_family::variance_power);
    }
    SECTION("sample touching zero: Cartwright-Field is absent") {
        const amgm_gap_report rep = full_gap_report(x04, 1.0, 1.0);
        CHECK_FALSE(rep.cartwright_field.has_value());
        CHECK(rep.gap == 2.0);
        CHECK(rep.var_lower == 2.0);
        CHECK(rep.var_upper == 2.0);
        CHECK(rep.sqrt_var_lower == 1.0);
    }
    SECTION("tightest-bound annotation picks the best family") {
        // On (2,8 ; 0.75,0.25): lower_thm4 = Var(sqrt X)/(1-1/4), lower_cf = 0.421875,
        // lower_a2; upper_thm4 = Var(sqrt X)/(1/4) vs upper_cf = 1.6875.
        const amgm_gap_report rep = full_gap_report(x28, 1.0, 1.0);
        REQUIRE(rep.cartwright_field.has_value());
        const double best_lower = std::max({rep.var_lower, rep.cartwright_field->lower,
                                            rep.sqrt_var_lower});
        const double best_upper = std::min(rep.var_upper, rep.cartwright_field->upper);
        CHECK((rep.tightest_lower == bound_family::variance_power
                   ? rep.var_lower
                   : (rep.tightest_lower == bound_family::cartwright_field
                          ? rep.cartwright_field->lower
                          : rep.sqrt_var_lower)) == best_lower);
        CHECK((rep.tightest_upper == bound_family::variance_power
                   ? rep.var_upper
                   : rep.cartwright_field->upper) == best_upper);
    }
    SECTION("bound family names") {
        CHECK(std::string(bound_family_name(bound_family::variance_power)) == "variance-power");
        CHECK(std::string(bound_family_name(bound_family::cartwright_field)) ==
              "cartwright-field");
        CHECK(std::string(bound_family_name(bound_family::sqrt_variance)) == "sqrt-variance");
    }
    SECTION("oracle agreement for the gap on random samples") {
        stress::splitmix64 rng(43);
        for (int it = 0; it < 200; ++it) {
            const std::size_t n = 2 + rng.next() % 12;
            std::vector<double> v(n);
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = 1e-2 * std::pow(1e4, rng.next_unit());
                w[i] = rng.next_unit();
            }
            const weighted_sample x(v, w);
            CHECK(oracle::agrees(amgm_gap(x), oracle::amgm_gap(v, w), 1e-11));
        }
    }
}
