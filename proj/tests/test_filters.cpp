#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ddf/filters.hpp"
#include "ddf/sampling.hpp"
#include "ddf/sequences.hpp"

using namespace ddf;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1{0.0, 1.0};

std::vector<double> log_grid(double a, double b, int n) {
    std::vector<double> z;
    for (int i = 0; i < n; ++i) z.push_back(a * std::pow(b / a, i / double(n - 1)));
    return z;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Finite-width ratio for SDD written out: (cos(z tau/2) - sin^2(z tau/4) cos(z/2D) / sin^2(z/4D))^2.
double r_sdd(int D, double tau, double z) {
    const double s = std::sin(z * tau / 4), q = std::sin(z / (4.0 * D));
    const double v = std::cos(z * tau / 2) - s * s * std::cos(z / (2.0 * D)) / (q * q);
    return v * v;
}

}  // namespace

TEST_CASE("basis label translation") {
    CHECK(basis_index(1) == 0);
    CHECK(basis_index(4) == 3);
    CHECK_THROWS_AS(basis_index(0), ValidationError);
    CHECK(basis_ket(basis_index(1), 2) == "|uu>");
    CHECK(basis_ket(basis_index(2), 2) == "|ud>");
    CHECK(basis_ket(basis_index(3), 2) == "|du>");
    CHECK(basis_ket(basis_index(4), 2) == "|dd>");
    CHECK(basis_digit(basis_index(2), 0) == 1);
    CHECK(basis_digit(basis_index(2), 1) == 0);
}

TEST_CASE("filter labels") {
    const auto f = parse_filter_label("F14c");
    CHECK(f.m == 0);
    CHECK(f.n == 3);
    CHECK(f.topology == Topology::Common);
    CHECK(f.pulse_model == PulseModel::Ideal);
    CHECK(parse_filter_label("f23i", PulseModel::FiniteWidth).pulse_model == PulseModel::FiniteWidth);
    CHECK(parse_filter_label("F23I").topology == Topology::Independent);
    for (const char* l : {"F14c", "F23c", "F14i", "F23i", "F12c", "F58i"}) CHECK(filter_label(parse_filter_label(l)) == l);
    for (const char* bad : {"F14", "F14x", "G14c", "F0 c", "F1ac", "F104c", ""})
        CHECK_THROWS_AS(parse_filter_label(bad), ValidationError);
    const auto s = sdd_schedule(2, 4, 1.0);
    CHECK_THROWS_AS(FilterEvaluator(parse_filter_label("F15c"), s), ValidationError);
    CHECK_THROWS_AS(FilterEvaluator(parse_filter_label("F14c"), custom_schedule({{0.5}}, 1.0)), ValidationError);
}

TEST_CASE("filter_common examples") {
    for (int D : {2, 4, 24})
        for (double z : {0.3, 2 * kPi, 50.0}) {
            const auto s = sdd_schedule(2, D, 1.0);
            const double f2 = std::norm(sampling_sdd_closed(D, z));
            CHECK(rel(FilterEvaluator(parse_filter_label("F14c"), s).value(z, Precision::Precise), 4 * f2) < 1e-12);
            CHECK(rel(filter_common(parse_filter_label("F14c"), s, z), 4 * f2) < 4.0 / ExpSum::kAutoFactor);
            CHECK(filter_common(parse_filter_label("F23c"), s, z) == 0.0);
        }
    CHECK(filter_common(parse_filter_label("F23c"), nudd_schedule({2, 2}, 1.0), 5.0) > 1e-3);
    CHECK_THROWS_AS(filter_common(parse_filter_label("F14i"), sdd_schedule(2, 2, 1.0), 1.0), ValidationError);
}

TEST_CASE("filter_independent examples") {
    for (const auto& s : {nudd_schedule({2, 2}, 1.0), sdd_schedule(2, 6, 1.0), custom_schedule({{0.2}, {0.3, 0.9}}, 1.0)})
        for (double z : {0.01, 1.0, 13.0, 400.0}) {
            const double a = filter_independent(parse_filter_label("F14i"), s, z);
            const double b = filter_independent(parse_filter_label("F23i"), s, z);
            CHECK(a == b);
            const double direct = std::norm(sampling_generic(s.times[0], 1.0, z)) + std::norm(sampling_generic(s.times[1], 1.0, z));
            CHECK(std::abs(a - direct) <= 1e-12 * std::max(1.0, direct));
        }
    CHECK(filter_independent(parse_filter_label("F14i"), sdd_schedule(2, 2, 1.0), 2 * kPi) == doctest::Approx(32.0).epsilon(1e-13));
    CHECK(filter_independent(parse_filter_label("F22i"), sdd_schedule(2, 2, 1.0), 2.0) == 0.0);
    CHECK(filter_common(parse_filter_label("F33c"), nudd_schedule({2, 2}, 1.0), 2.0) == 0.0);
}

TEST_CASE("modified_filter examples") {
    const auto s = sdd_schedule(2, 2, 1.0);
    CHECK(modified_filter(parse_filter_label("F14i"), s, 2 * kPi) == doctest::Approx(32.0 / (4 * kPi * kPi)).epsilon(1e-13));
    const auto free = custom_schedule({{}}, 1.0);
    for (double z : {0.1, 1.0, kPi, 20.0}) {
        const double want = 4 * std::sin(z / 2) * std::sin(z / 2) / (z * z);
        CHECK(modified_filter(parse_filter_label("F12c"), free, z) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK_THROWS_AS(modified_filter(parse_filter_label("F14i"), s, 0.0), ValidationError);
    const FilterEvaluator F(parse_filter_label("F14c"), nudd_schedule({4, 4}, 1.0));
    for (double z : log_grid(10, 1e7, 50)) CHECK(F(z) / (z * z) <= F.bound() / (z * z));
}

TEST_CASE("single differing digit: common equals the independent term") {
    const auto s2 = nudd_schedule({2, 4}, 1.0);
    const auto s3 = nudd_schedule({3, 2, 2}, 1.0);
    for (double z : log_grid(1e-2, 1e3, 40)) {
        CHECK(rel(filter_common(parse_filter_label("F12c"), s2, z), filter_independent(parse_filter_label("F12i"), s2, z)) < 1e-12);
        CHECK(rel(filter_common(parse_filter_label("F13c"), s2, z), std::norm(sampling_generic(s2.times[1], 1.0, z))) < 1e-9);
        // qubit 2 differs only: labels 1 and 5
        FilterSpec c{0, 4, Topology::Common, PulseModel::Ideal};
        FilterSpec i{0, 4, Topology::Independent, PulseModel::Ideal};
        CHECK(rel(filter_common(c, s3, z), filter_independent(i, s3, z)) < 1e-12);
    }
}

TEST_CASE("common-topology triangle bound") {
    const auto s3 = nudd_schedule({3, 2, 2}, 1.0);
    for (unsigned m = 0; m < 8; ++m)
        for (unsigned n = 0; n < 8; ++n) {
            const FilterEvaluator F(FilterSpec{m, n, Topology::Common, PulseModel::Ideal}, s3);
            for (double z : log_grid(1e-2, 1e3, 25)) {
                double mx = 0.0;
                for (int j = 0; j < 3; ++j) mx = std::max(mx, std::norm(sampling_generic(s3.times[j], 1.0, z)));
                const double v = F(z);
                CHECK(v >= 0.0);
                CHECK(v <= 9 * mx * (1 + 1e-12) + 1e-300);
            }
        }
}

TEST_CASE("SDD F23c is a machine-zero DFS") {
    for (int D = 2; D <= 40; D += 2) {
        const FilterEvaluator F(parse_filter_label("F23c"), sdd_schedule(2, D, 1.0, 1e-4));
        CHECK(F.identically_zero());
        for (double z : log_grid(1e-3, 1e8, 200)) {
            CHECK(F(z) <= 1e-20 * (2.0 * D + 2) * (2.0 * D + 2));
            CHECK(F.finite(z) == 0.0);
        }
    }
}

TEST_CASE("ratio_finite_ideal examples") {
    const auto ideal = nudd_schedule({4, 4}, 1.0);
    for (double z : {0.01, 3.0, 333.0}) {
        const auto r = ratio_finite_ideal(parse_filter_label("F14c"), ideal, z);
        REQUIRE_FALSE(is_singular(r));
        CHECK(std::get<double>(r) == 1.0);
    }
    const auto s = sdd_schedule(2, 24, 1.0, 1e-4);
    const auto low = ratio_finite_ideal(parse_filter_label("F14c"), s, 1e-6);
    REQUIRE_FALSE(is_singular(low));
    // the z -> 0 limit is (1 - D^2 tau^2)^2, 1.15e-5 below one here
    const double lim = std::pow(1 - 24.0 * 24.0 * 1e-8, 2);
    CHECK(std::get<double>(low) == doctest::Approx(lim).epsilon(1e-9));
    CHECK(std::abs(std::get<double>(low) - 1.0) < 2e-5);
    const auto sing = ratio_finite_ideal(parse_filter_label("F14c"), s, 96 * kPi);
    REQUIRE(is_singular(sing));
    CHECK(std::get<SingularityMarker>(sing).z == 96 * kPi);
    CHECK(is_singular(ratio_finite_ideal(parse_filter_label("F14i"), s, 192 * kPi)));
    CHECK_FALSE(is_singular(ratio_finite_ideal(parse_filter_label("F14i"), s, 96 * kPi + 0.05)));
}

TEST_CASE("sdd_singularity_grid") {
    const auto a = sdd_singularity_grid(24, 1);
    REQUIRE(a.size() == 1);
    CHECK(a[0] == doctest::Approx(96 * kPi));
    CHECK(a[0] == doctest::Approx(301.593).epsilon(1e-5));
    const auto b = sdd_singularity_grid(2, 3);
    REQUIRE(b.size() == 3);
    CHECK(b[0] == doctest::Approx(8 * kPi));
    CHECK(b[1] == doctest::Approx(16 * kPi));
    CHECK(b[2] == doctest::Approx(24 * kPi));
    CHECK(sdd_singularity_grid(4, 1)[0] == doctest::Approx(16 * kPi));
    CHECK_THROWS_AS(sdd_singularity_grid(3, 1), ValidationError);
    CHECK_THROWS_AS(sdd_singularity_grid(4, 0), ValidationError);
}

TEST_CASE("R_SDD matches the analytic ratio away from singular points") {
    for (int D : {2, 4, 24})
        for (double tau : {1e-4, 1e-3, 1e-2}) {
            const auto s = sdd_schedule(2, D, 1.0, tau);
            const FilterEvaluator F(parse_filter_label("F14c"), s);
            const FilterEvaluator Fi(parse_filter_label("F14i"), s);
            for (double z : log_grid(1e-3, 1e4, 300)) {
                const double k = z / (4 * D * kPi);
                if (std::abs(k - std::round(k)) < 1e-3 && std::round(k) >= 1) continue;
                const double want = r_sdd(D, tau, z);
                const auto r = F.ratio(z);
                REQUIRE_FALSE(is_singular(r));
                CHECK(rel(std::get<double>(r), want) < 1e-9);
                CHECK(rel(std::get<double>(Fi.ratio(z)), want) < 1e-9);
            }
        }
}

TEST_CASE("R_SDD converges to one quadratically in the width") {
    const int D = 4;
    auto max_dev = [&](double tau) {
        const FilterEvaluator F(parse_filter_label("F14c"), sdd_schedule(2, D, 1.0, tau));
        double m = 0.0;
        for (double z : log_grid(1e-2, 40.0, 200)) m = std::max(m, std::abs(std::get<double>(F.ratio(z)) - 1.0));
        return m;
    };
    const double a = max_dev(1e-3), b = max_dev(1e-4), c = max_dev(1e-5);
    CHECK(b / a == doctest::Approx(1e-2).epsilon(0.05));
    CHECK(c / b == doctest::Approx(1e-2).epsilon(0.05));
    CHECK(a / 1e-6 < 1e3);  // C (tau/T)^2 with a modest C
}

TEST_CASE("R_NUDD agrees with the real/imaginary decomposition") {
    // F_r = sum_j c^2 |f_j|^2 + 2 c (1 - c) Re(f_j conj(B)) + (1 - c)^2 |B|^2, c = cos(z tau / 2)
    for (int L : {2, 4, 6})
        for (double tau : {1e-4, 1e-3}) {
            const std::vector<int> counts{L, L};
            const FilterEvaluator F(parse_filter_label("F14i"), nudd_schedule(counts, 1.0, tau));
            for (double z : log_grid(0.5, 3e3, 120)) {
                const double c = std::cos(z * tau / 2);
                const cplx B = 1.0 - std::exp(-I1 * z);
                double Fi = 0.0, Fr = 0.0;
                for (int lev = 0; lev < 2; ++lev) {
                    const cplx f = sampling_nudd_closed(counts, lev, 1.0, z);
                    Fi += std::norm(f);
                    Fr += c * c * std::norm(f) + 2 * c * (1 - c) * std::real(f * std::conj(B)) + (1 - c) * (1 - c) * std::norm(B);
                }
                if (Fi < 1e-6) continue;
                CHECK(rel(std::get<double>(F.ratio(z)), Fr / Fi) < 1e-8);
            }
        }
}

TEST_CASE("FilterEvaluator bookkeeping") {
    const auto s = nudd_schedule({2, 2}, 1.0, 1e-3);
    const FilterEvaluator c(parse_filter_label("F14c", PulseModel::FiniteWidth), s);
    CHECK(c.bound() == doctest::Approx(std::pow(2.0 * 8 + 4, 2)));
    CHECK(c.total_pulses() == 8);
    CHECK(c.channel_count() == 1);
    CHECK(c.width_over_T() == 1e-3);
    CHECK(c.value(3.0) == c.finite(3.0));
    CHECK(c.value(3.0) != c.ideal(3.0));
    const FilterEvaluator i(parse_filter_label("F14i"), s);
    CHECK(i.channel_count() == 2);
    CHECK(i.mean_value() == doctest::Approx((2 + 4.0 * 2) + (2 + 4.0 * 6)));
    for (double z : {1e-4, 0.2, 7.0, 1e3}) CHECK(rel(i.value(z, Precision::Auto), i.value(z, Precision::Precise)) < 1e-5);
    for (double z : {0.2, 7.0, 1e3}) CHECK(rel(i.value(z, Precision::Double), i.value(z, Precision::Precise)) < 1e-8);
    // double alone cannot see the low-z null of an order-5 product
    CHECK(rel(i.value(1e-6, Precision::Double), i.value(1e-6, Precision::Precise)) > 1.0);
}
