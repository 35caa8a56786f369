#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "ddf/oracle.hpp"
#include "ddf/sampling.hpp"
#include "ddf/sequences.hpp"
#include "ddf/spectra.hpp"

using namespace ddf;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Exact I for non-integer alpha from the pair expansion of |sum c_a e^{-izt_a}|^2 (sum c = 0):
//   I = -2 sum_{a<b} c_a c_b |t_a - t_b|^{s-1} M(s),  M(s) = -Gamma(1-s) cos(pi (1-s) / 2),  s = alpha + 2,
// continued analytically past 1 < s < 3. Carried out in 100 digits because the terms cancel heavily.
mpreal mellin_pair_sum(const std::vector<mpreal>& t, const std::vector<double>& c, double alpha) {
    const mpreal s = mpreal(alpha) + 2;
    const mpreal pi = boost::math::constants::pi<mpreal>();
    const mpreal M = -boost::math::tgamma(mpreal(1) - s) * cos(pi * (mpreal(1) - s) / 2);
    mpreal acc = 0;
    for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = a + 1; b < t.size(); ++b) acc += mpreal(c[a]) * c[b] * pow(abs(t[a] - t[b]), s - 1);
    return -2 * acc * M;
}

// Coefficient list of one qubit's sampling function, scaled by w, appended to (t, c).
void append_qubit(const std::vector<mpreal>& q, double w, std::vector<mpreal>& t, std::vector<double>& c) {
    t.push_back(0);
    c.push_back(w);
    t.push_back(1);
    c.push_back(w * ((q.size() % 2 == 0) ? -1.0 : 1.0));
    for (std::size_t d = 0; d < q.size(); ++d) {
        t.push_back(q[d]);
        c.push_back(w * ((d % 2 == 0) ? -2.0 : 2.0));
    }
}

double mellin_reference(const FilterSpec& spec, const PulseSchedule& s, double alpha) {
    const auto ut = unit_times<mpreal>(s);
    mpreal total = 0;
    if (spec.topology == Topology::Common) {
        std::vector<mpreal> t;
        std::vector<double> c;
        for (int j = 0; j < s.num_qubits; ++j) {
            const double w = basis_digit(spec.m, j) - basis_digit(spec.n, j);
            if (w != 0.0) append_qubit(ut[j], w, t, c);
        }
        total = mellin_pair_sum(t, c, alpha);
    } else {
        for (int j = 0; j < s.num_qubits; ++j) {
            if (basis_digit(spec.m, j) == basis_digit(spec.n, j)) continue;
            std::vector<mpreal> t;
            std::vector<double> c;
            append_qubit(ut[j], 1.0, t, c);
            total += mellin_pair_sum(t, c, alpha);
        }
    }
    return static_cast<double>(total);
}

// Composite Simpson on a log grid: int_a^b f(x) dx.
template <class Fn>
double simpson_log(Fn f, double a, double b, int n) {
    const double la = std::log(a), h = (std::log(b) - la) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = std::exp(la + i * h);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * f(x) * x;
    }
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("free evolution closed form checks the reference formula") {
    // I = 2 (-Gamma(1-s) cos(pi(1-s)/2)) for F = 4 sin^2(z/2)
    const double alpha = 0.5, s = alpha + 2;
    const double exact = 2 * (-std::tgamma(1 - s) * std::cos(kPi * (1 - s) / 2));
    const auto free = custom_schedule({{}}, 1.0);
    const FilterSpec f12 = parse_filter_label("F12c");
    CHECK(mellin_reference(f12, free, alpha) == doctest::Approx(exact).epsilon(1e-14));
    const auto r = factor_I(f12, free, alpha, 1e-10);
    CHECK(r.converged);
    CHECK(r.filter_power == 2);
    CHECK(rel(r.value, exact) < 1e-8);
    CHECK(exact == doctest::Approx(4 * std::sqrt(2 * kPi) / 3).epsilon(1e-14));
}

TEST_CASE("factor_I: SDD F23c is zero") {
    for (double alpha : {0.5, 1.0, 4.0}) {
        const auto r = factor_I(parse_filter_label("F23c"), sdd_schedule(2, 8, 1.0), alpha);
        CHECK(r.value == 0.0);
        CHECK(r.converged);
        CHECK(r.tail_bound == 0.0);
    }
}

TEST_CASE("factor_I: Hahn echo against the trapezoid oracle") {
    const auto hahn = custom_schedule({{0.5}}, 1.0);
    const FilterSpec f12 = parse_filter_label("F12c");
    for (double alpha : {0.5, 1.0, 2.0, 2.5}) {
        const auto r = factor_I(f12, hahn, alpha, 1e-9);
        CHECK(r.converged);
        CHECK(r.filter_power == 4);
        CHECK(r.low_freq_exponent == doctest::Approx(4 - alpha - 2));
        const double oracle = factor_I_oracle(hahn, f12, alpha);
        CHECK(rel(r.value, oracle) < 1e-4);
        if (alpha != std::round(alpha)) CHECK(rel(r.value, mellin_reference(f12, hahn, alpha)) < 1e-7);
    }
}

TEST_CASE("factor_I against the pair-sum reference") {
    struct Case {
        PulseSchedule s;
        const char* label;
        double alpha;
    };
    const std::vector<Case> cases{
        {nudd_schedule({2, 2}, 1.0), "F14c", 1.5}, {nudd_schedule({2, 2}, 1.0), "F14i", 1.5},
        {nudd_schedule({2, 2}, 1.0), "F23c", 0.7}, {sdd_schedule(2, 4, 1.0), "F14c", 2.5},
        {sdd_schedule(2, 4, 1.0), "F14i", 0.3},    {sdd_schedule(2, 12, 1.0), "F14c", 3.5},
        {nudd_schedule({4, 4}, 1.0), "F14c", 3.5}, {nudd_schedule({4, 4}, 1.0), "F23c", 4.5},
        {nudd_schedule({6, 6}, 1.0), "F14i", 4.5}, {nudd_schedule({3, 2, 2}, 1.0), "F18c", 1.5},
        {nudd_schedule({8, 8}, 1.0), "F14c", 0.9},
    };
    for (const auto& c : cases) {
        const FilterSpec spec = parse_filter_label(c.label);
        const auto r = factor_I(spec, c.s, c.alpha, 1e-9);
        const double ref = mellin_reference(spec, c.s, c.alpha);
        INFO(c.label << " alpha=" << c.alpha << " I=" << r.value << " ref=" << ref);
        CHECK(r.converged);
        CHECK(r.abs_error_estimate <= 1e-9 * r.value);
        CHECK(rel(r.value, ref) < 1e-7);
    }
}

TEST_CASE("factor_I: two-qubit small-count values") {
    // values fixed from the oracle and the pair-sum reference
    const auto n22 = nudd_schedule({2, 2}, 1.0);
    const auto s4 = sdd_schedule(2, 4, 1.0);
    const double n14i = factor_I(parse_filter_label("F14i"), n22, 1.0).value;
    const double s14i = factor_I(parse_filter_label("F14i"), s4, 1.0).value;
    const double n14c = factor_I(parse_filter_label("F14c"), n22, 1.0).value;
    const double s14c = factor_I(parse_filter_label("F14c"), s4, 1.0).value;
    CHECK(n14i > s14i);
    CHECK(n14c < s14c);  // the (4,4) anomaly
    CHECK(n14i == doctest::Approx(0.54698).epsilon(1e-4));
    CHECK(s14i == doctest::Approx(0.40880).epsilon(1e-4));
    CHECK(n14c == doctest::Approx(0.61269).epsilon(1e-4));
    CHECK(s14c == doctest::Approx(0.81760).epsilon(1e-4));
    CHECK(rel(n14i, factor_I_oracle(n22, parse_filter_label("F14i"), 1.0)) < 1e-4);
}

TEST_CASE("factor_I divergence at the origin") {
    const auto free = custom_schedule({{}}, 1.0);
    try {
        factor_I(parse_filter_label("F12c"), free, 1.0);
        FAIL("free evolution with alpha = 1 should diverge");
    } catch (const DivergentIntegral& e) {
        CHECK(e.exponent == doctest::Approx(-1.0));
    }
    CHECK_THROWS_AS(factor_I(parse_filter_label("F12c"), custom_schedule({{0.5}}, 1.0), 3.0), DivergentIntegral);
    CHECK_NOTHROW(factor_I(parse_filter_label("F12c"), custom_schedule({{0.5}}, 1.0), 2.9));
    CHECK_THROWS_AS(factor_I(parse_filter_label("F14c"), sdd_schedule(2, 4, 1.0), 5.0), DivergentIntegral);
    CHECK_THROWS_AS(factor_I(parse_filter_label("F14c"), sdd_schedule(2, 4, 1.0), 0.0), ValidationError);
    CHECK_THROWS_AS(factor_I(parse_filter_label("F14c"), sdd_schedule(2, 4, 1.0), 1.0, 0.0), ValidationError);
}

TEST_CASE("factor_I diagnostics") {
    const FilterEvaluator F(parse_filter_label("F14c"), nudd_schedule({4, 4}, 1.0));
    const auto r = factor_I(F, 1.0, 1e-8);
    CHECK(r.filter_power == 10);
    CHECK(r.z_hi == doctest::Approx(100.0 * (4 + 20)));
    CHECK(r.tail_bound == doctest::Approx(F.bound() / (2.0 * r.z_hi * r.z_hi)));
    const FilterEvaluator H(parse_filter_label("F12c"), custom_schedule({{0.5}}, 1.0));
    CHECK(factor_I(H, 1.0).z_hi == 1e3);
    CHECK(r.z_lo > 0.0);
    CHECK(r.evaluations > 0);
    const FilterEvaluator G(parse_filter_label("F14i"), nudd_schedule({16, 16}, 1.0));
    CHECK(factor_I(G, 1.0).z_hi == doctest::Approx(100.0 * 288));
}

TEST_CASE("low-frequency power is measured, not assumed") {
    CHECK(low_frequency_fit(FilterEvaluator(parse_filter_label("F12c"), custom_schedule({{}}, 1.0))).p == 2);
    CHECK(low_frequency_fit(FilterEvaluator(parse_filter_label("F12c"), custom_schedule({{0.5}}, 1.0))).p == 4);
    for (int D : {2, 8, 40}) CHECK(low_frequency_fit(FilterEvaluator(parse_filter_label("F14c"), sdd_schedule(2, D, 1.0))).p == 6);
    for (int L : {1, 2, 5, 9, 16})
        CHECK(low_frequency_fit(FilterEvaluator(parse_filter_label("F12c"), nudd_schedule({L}, 1.0))).p == 2 * (L + 1));
    for (int L : {2, 4, 8, 16})
        CHECK(low_frequency_fit(FilterEvaluator(parse_filter_label("F14i"), nudd_schedule({L, L}, 1.0))).p == 2 * (L + 1));
}

TEST_CASE("factor_I is invariant under rescaling T") {
    for (const auto& s : {nudd_schedule({4, 2}, 1.0), sdd_schedule(2, 8, 1.0), custom_schedule({{0.25, 0.75}, {0.5}}, 1.0)})
        for (const char* l : {"F14c", "F14i"}) {
            const FilterSpec spec = parse_filter_label(l);
            const double a = factor_I(spec, s, 1.5).value;
            CHECK(rel(factor_I(spec, rescale(s, 3.7), 1.5).value, a) < 1e-10);
            CHECK(rel(factor_I(spec, rescale(s, 0.01), 1.5).value, a) < 1e-10);
        }
}

TEST_CASE("SDD factor decreases with pulse count") {
    for (double alpha : {1.0, 4.0})
        for (const char* l : {"F14c", "F14i"}) {
            double prev = INFINITY;
            for (int D = 4; D <= 32; D += 4) {
                const double v = factor_I(parse_filter_label(l), sdd_schedule(2, D, 1.0), alpha).value;
                CHECK(v < prev);
                prev = v;
            }
        }
}

TEST_CASE("factor_tail matches direct integration between two cut-offs") {
    for (const auto& [s, label] : {std::pair{nudd_schedule({2, 2}, 1.0), "F14c"}, std::pair{sdd_schedule(2, 6, 1.0), "F14i"},
                                   std::pair{nudd_schedule({2, 2}, 1.0, 1e-3), "F14c"}}) {
        const FilterSpec spec = parse_filter_label(label, s.pulse_width > 0 ? PulseModel::FiniteWidth : PulseModel::Ideal);
        const FilterEvaluator F(spec, s);
        for (double q : {3.0, 4.5, 6.0}) {
            const double Z1 = 150.0, Z2 = 400.0;
            const int n = 400000;
            const double h = (Z2 - Z1) / n;
            double sum = 0.0;
            for (int i = 0; i <= n; ++i) {
                const double z = Z1 + i * h;
                const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                sum += w * F(z) * std::pow(z, -q);
            }
            sum *= h / 3.0;
            CHECK(rel(factor_tail(F, Z1, q) - factor_tail(F, Z2, q), sum) < 1e-8);
        }
    }
}

TEST_CASE("chi power-law scaling in T") {
    const FilterEvaluator F(parse_filter_label("F14i"), nudd_schedule({2, 2}, 1.0));
    for (double alpha : {1.0, 4.0}) {
        const PowerLaw p{2.5, alpha};
        const double a = decoherence_chi(F, p, 1.0), b = decoherence_chi(F, p, 2.0);
        CHECK(b / a == doctest::Approx(std::pow(2.0, alpha + 1)).epsilon(1e-12));
        std::vector<double> x, y;
        for (int i = 0; i <= 10; ++i) {
            const double T = 0.5 * std::pow(4.0, i / 10.0);
            x.push_back(std::log(T));
            y.push_back(std::log(decoherence_chi(F, p, T)));
        }
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / x.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
        CHECK(std::abs(sxy / sxx - (alpha + 1)) < 1e-6);
        CHECK(rel(a, 2.5 * factor_I(F, alpha, 1e-9).value) < 1e-9);
    }
    // the schedule overload takes T from the schedule
    const auto s = rescale(nudd_schedule({2, 2}, 1.0), 2.0);
    CHECK(rel(decoherence_chi(parse_filter_label("F14i"), s, PowerLaw{1.0, 1.0}), decoherence_chi(F, PowerLaw{1.0, 1.0}, 2.0)) < 1e-9);
}

TEST_CASE("chi vanishes on the SDD DFS") {
    const auto s = sdd_schedule(2, 4, 3.0);
    const FilterSpec f = parse_filter_label("F23c");
    CHECK(decoherence_chi(f, s, PowerLaw{1.0, 1.0}) == 0.0);
    CHECK(decoherence_chi(f, s, Thermal{Ohmic{1.0, 1.0, 5.0}, 0.7}) == 0.0);
}

TEST_CASE("thermal chi: free evolution, ohmic, zero temperature") {
    // int_0^inf e^{-w/wc} 4 sin^2(wT/2) / w dw = ln(1 + (wc T)^2)
    const auto free = custom_schedule({{}}, 1.0);
    const FilterSpec f12 = parse_filter_label("F12c");
    for (double wc : {0.3, 2.0, 10.0, 50.0})
        for (double T : {0.5, 1.0, 4.0}) {
            const double exact = std::log1p(wc * T * wc * T);
            const FilterEvaluator F(f12, free);
            const double chi = decoherence_chi(F, Thermal{Ohmic{1.0, 1.0, wc}, 0.0}, T);
            CHECK(rel(chi, exact) < 1e-6);
            // independent fixed-grid quadrature
            auto g = [&](double w) { return std::exp(-w / wc) * 4 * std::pow(std::sin(w * T / 2), 2) / w; };
            const double quad = simpson_log(g, 1e-9, 200 * wc, 400000);
            CHECK(rel(chi, quad) < 1e-6);
        }
}

TEST_CASE("thermal chi with temperature against fixed-grid quadrature") {
    const auto s = nudd_schedule({2, 2}, 1.0);
    const FilterSpec spec = parse_filter_label("F14c");
    const FilterEvaluator F(spec, s);
    for (double Te : {0.1, 1.0, 20.0}) {
        const Ohmic J{0.2, 1.0, 8.0};
        const double chi = decoherence_chi(F, Thermal{J, Te}, 1.0);
        auto g = [&](double w) { return J(w) * coth_weight(w, Te) * F(w) / (w * w); };
        const double quad = simpson_log(g, 1e-6, 8.0 * 90, 400000);
        CHECK(rel(chi, quad) < 1e-6);
    }
    // super-ohmic density
    const Ohmic J3{1.0, 3.0, 4.0};
    const double chi3 = decoherence_chi(F, Thermal{J3, 0.5}, 1.0);
    auto g3 = [&](double w) { return J3(w) * coth_weight(w, 0.5) * F(w) / (w * w); };
    CHECK(rel(chi3, simpson_log(g3, 1e-6, 4.0 * 100, 400000)) < 1e-6);
}

TEST_CASE("tabulated spectral density") {
    TabulatedDensity t{{1.0, 2.0, 4.0}, {0.0, 2.0, 1.0}};
    CHECK(t(0.5) == 0.0);
    CHECK(t(1.5) == doctest::Approx(1.0));
    CHECK(t(3.0) == doctest::Approx(1.5));
    CHECK(t(4.0) == doctest::Approx(1.0));
    CHECK(t(4.5) == 0.0);

    const std::string path = "ddf_test_density.csv";
    {
        std::ofstream f(path);
        f << "omega,J\n";
        for (int i = 0; i <= 4000; ++i) {
            const double w = 1e-3 + i * 0.01;
            f << w << "," << Ohmic{1.0, 1.0, 5.0}(w) << "\n";
        }
    }
    const auto loaded = load_spectral_density_csv(path);
    std::remove(path.c_str());
    CHECK(loaded.omega.size() == 4001);
    const FilterEvaluator F(parse_filter_label("F14i"), sdd_schedule(2, 4, 1.0));
    const double a = decoherence_chi(F, Thermal{loaded, 0.0}, 1.0);
    const double b = decoherence_chi(F, Thermal{Ohmic{1.0, 1.0, 5.0}, 0.0}, 1.0);
    CHECK(rel(a, b) < 1e-3);  // table ends at 40 = 8 wc, and interpolation error is O(h^2)
    CHECK_THROWS_AS(validate_noise(Thermal{TabulatedDensity{{1.0, 1.0}, {0.0, 1.0}}, 0.0}), ValidationError);
    CHECK_THROWS_AS(validate_noise(Thermal{TabulatedDensity{{1.0, 2.0}, {0.0, -1.0}}, 0.0}), ValidationError);
}

TEST_CASE("noise validation and coth weight") {
    CHECK_THROWS_AS(validate_noise(PowerLaw{1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(validate_noise(PowerLaw{1.0, -1.0}), ValidationError);
    CHECK_THROWS_AS(validate_noise(Thermal{Ohmic{}, -1.0}), ValidationError);
    CHECK_NOTHROW(validate_noise(PowerLaw{1.0, 4.0}));
    CHECK(coth_weight(3.0, 0.0) == 1.0);
    CHECK(coth_weight(1e-8, 1.0) == doctest::Approx(2.0 / 1e-8).epsilon(1e-12));
    CHECK(coth_weight(1e4, 1.0) == 1.0);
    CHECK(coth_weight(1.0, 1.0) == doctest::Approx(1.0 / std::tanh(0.5)).epsilon(1e-14));
}

TEST_CASE("coherence_element") {
    CHECK(coherence_element(0.5, 0.0) == std::complex<double>(0.5));
    CHECK(std::abs(coherence_element(0.5, std::log(2.0)) - 0.25) < 1e-16);
    const std::complex<double> r{0.3, -0.2};
    CHECK(coherence_element(r, 0.0) == r);  // diagonal elements have chi = 0
    CHECK_THROWS_AS(coherence_element(r, -1.0), ValidationError);
}
