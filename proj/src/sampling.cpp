// sampling.cpp - generic, closed-form and finite-width sampling functions.
#include "ddf/sampling.hpp"

#include <cmath>
#include <numbers>

namespace ddf {

namespace {

constexpr double kPi = std::numbers::pi;

SamplingValue expi(double ph) { return {std::cos(ph), std::sin(ph)}; }

// e^{i a b} with the product and reduction carried in extended precision, so large z
// does not inherit the rounding of z*t.
SamplingValue expi_ext(long double a, long double b) {
    const long double ph = a * b;
    return {static_cast<double>(std::cos(ph)), static_cast<double>(std::sin(ph))};
}

// u_L(x) = e^{-ix/2} sum_{l=-L-1}^{L} (-1)^l e^{ix cos(l pi/(L+1))/2}: one UDD block on an
// interval of length x (in z units) starting at its own origin.
SamplingValue udd_block(int L, long double x) {
    const long double pi = std::numbers::pi_v<long double>;
    SamplingValue acc{0.0, 0.0};
    for (int l = -L - 1; l <= L; ++l) {
        const double sign = (l % 2 == 0) ? 1.0 : -1.0;
        acc += sign * expi_ext(0.5L * x, std::cos(l * pi / (L + 1)));
    }
    return expi_ext(-0.5L, x) * acc;
}

// Boundary times (fractions of T) produced by the outer levels N-1 .. n+1, cos form.
std::vector<long double> outer_bounds(const std::vector<int>& counts, int level) {
    const int N = static_cast<int>(counts.size());
    const long double pi = std::numbers::pi_v<long double>;
    std::vector<long double> b{0.0L, 1.0L};
    for (int n = N - 1; n > level; --n) {
        const int L = counts[static_cast<std::size_t>(N - 1 - n)];
        std::vector<long double> nb;
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            const long double a = b[i], w = b[i + 1] - b[i];
            nb.push_back(a);
            for (int l = 1; l <= L; ++l) nb.push_back(a + 0.5L * w * (1.0L - std::cos(l * pi / (L + 1))));
        }
        nb.push_back(1.0L);
        b.swap(nb);
    }
    return b;
}

}  // namespace

SamplingValue sampling_generic(const std::vector<double>& times, double T, double z) {
    const std::size_t D = times.size();
    SamplingValue f = 1.0 + ((D % 2 == 0) ? -1.0 : 1.0) * expi(-z);
    SamplingValue s{0.0, 0.0};
    for (std::size_t d = 0; d < D; ++d) {
        const double sign = (d % 2 == 0) ? -1.0 : 1.0;  // (-1)^(d+1) for zero-based d
        s += sign * expi_ext(-z, static_cast<long double>(times[d]) / T);
    }
    return f + 2.0 * s;
}

SamplingValue sampling_sdd_closed(int D, double z) {
    if (D <= 0 || D % 2 != 0) throw ValidationError("D must be even");
    const long double pi = std::numbers::pi_v<long double>;
    const long double zl = z;
    const long double theta = zl / (2.0L * D);
    const long double c = std::cos(theta);
    if (std::abs(c) < 1e-6L) {
        std::vector<double> t;
        for (int d = 1; d <= D; ++d) t.push_back(static_cast<double>(2 * d - 1) / (2.0 * D));
        return sampling_generic(t, 1.0, z);
    }
    long double ratio;  // sin(z/2) / cos(z/2D)
    if (std::abs(c) > 0.25L) {
        ratio = std::sin(0.5L * zl) / c;
    } else {
        // near a removable point: theta = (k + 1/2) pi + phi
        const long double k = std::round(theta / pi - 0.5L);
        const long double phi = theta - (k + 0.5L) * pi;
        const long long e = D / 2 + static_cast<long long>(k);
        const long double sgn = (e % 2 == 0) ? -1.0L : 1.0L;
        ratio = sgn * std::sin(D * phi) / std::sin(phi);
    }
    const long double s4 = std::sin(zl / (4.0L * D));
    return SamplingValue{0.0, -4.0} * expi_ext(-0.5L, zl) * static_cast<double>(ratio * s4 * s4);
}

SamplingValue sampling_nudd_closed(const std::vector<int>& counts, int level, double T, double z) {
    validate_nudd_counts(counts);
    const int N = static_cast<int>(counts.size());
    if (level < 0 || level >= N) throw ValidationError("NUDD level out of range");
    if (!(T > 0.0)) throw ValidationError("total_duration must be positive");
    const int L = counts[static_cast<std::size_t>(N - 1 - level)];
    const auto b = outer_bounds(counts, level);
    SamplingValue f{0.0, 0.0};
    const long double zt = z;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) f += expi_ext(-zt, b[i]) * udd_block(L, zt * (b[i + 1] - b[i]));
    return f;
}

SamplingValue sampling_finite_width(const PulseSchedule& s, int qubit, double z) {
    const auto& times = s.times.at(static_cast<std::size_t>(qubit));
    const double T = s.total_duration;
    const std::size_t D = times.size();
    const SamplingValue B = 1.0 + ((D % 2 == 0) ? -1.0 : 1.0) * expi(-z);
    SamplingValue P{0.0, 0.0};
    for (std::size_t d = 0; d < D; ++d) {
        const double sign = (d % 2 == 0) ? -1.0 : 1.0;
        P += sign * expi_ext(-z, static_cast<long double>(times[d]) / T);
    }
    P *= 2.0;
    return B + std::cos(z * s.pulse_width / (2.0 * T)) * P;
}

ExpSum qubit_expsum(const PulseSchedule& s, int qubit) {
    const auto ut = unit_times<mpreal>(s);
    const auto& q = ut.at(static_cast<std::size_t>(qubit));
    std::vector<mpreal> t{mpreal(0), mpreal(1)};
    std::vector<double> c{1.0, (q.size() % 2 == 0) ? -1.0 : 1.0};
    for (std::size_t d = 0; d < q.size(); ++d) {
        t.push_back(q[d]);
        c.push_back((d % 2 == 0) ? -2.0 : 2.0);
    }
    return ExpSum(t, c);
}

SamplingValue boundary_term(double beta0, double beta1, double z) {
    const double h = 0.5 * z;
    return expi(-h) * SamplingValue{(beta0 + beta1) * std::cos(h), (beta0 - beta1) * std::sin(h)};
}

SamplingValue apply_finite_width(SamplingValue f, SamplingValue boundary, double z, double width_over_T) {
    if (width_over_T == 0.0) return f;
    const double s = std::sin(0.25 * z * width_over_T);
    return f - 2.0 * s * s * (f - boundary);
}

SamplingValue sampling_value(const PulseSchedule& s, int qubit, double z, Precision p, bool finite_width) {
    const ExpSum e = qubit_expsum(s, qubit);
    const SamplingValue f = e.eval(z, p);
    if (!finite_width || s.pulse_width == 0.0) return f;
    const std::size_t D = s.times.at(static_cast<std::size_t>(qubit)).size();
    const SamplingValue B = boundary_term(1.0, (D % 2 == 0) ? -1.0 : 1.0, z);
    return apply_finite_width(f, B, z, s.pulse_width / s.total_duration);
}

FrequencyGrid FrequencyGrid::linear(double zmin, double zmax, std::size_t points) {
    FrequencyGrid g;
    g.spacing = Spacing::Linear;
    if (points < 2) throw ValidationError("grid needs at least 2 points");
    for (std::size_t i = 0; i < points; ++i)
        g.values.push_back(zmin + (zmax - zmin) * static_cast<double>(i) / static_cast<double>(points - 1));
    validate_grid(g);
    return g;
}

FrequencyGrid FrequencyGrid::logarithmic(double zmin, double zmax, std::size_t points) {
    FrequencyGrid g;
    g.spacing = Spacing::Logarithmic;
    if (points < 2) throw ValidationError("grid needs at least 2 points");
    if (!(zmin > 0.0)) throw ValidationError("logarithmic grid needs zmin > 0");
    const double l0 = std::log10(zmin), l1 = std::log10(zmax);
    for (std::size_t i = 0; i < points; ++i)
        g.values.push_back(std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1)));
    g.values.front() = zmin;
    g.values.back() = zmax;
    validate_grid(g);
    return g;
}

FrequencyGrid FrequencyGrid::custom(std::vector<double> values) {
    FrequencyGrid g;
    g.spacing = Spacing::Custom;
    g.values = std::move(values);
    validate_grid(g);
    return g;
}

FrequencyGrid FrequencyGrid::stepped(double zmin, double zmax, double step) {
    FrequencyGrid g;
    g.spacing = Spacing::Linear;
    if (!(step > 0.0) || !(zmax > zmin)) throw ValidationError("bad stepped grid");
    const auto n = static_cast<std::size_t>(std::floor((zmax - zmin) / step + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) g.values.push_back(zmin + static_cast<double>(k) * step);
    if (g.values.back() < zmax - 1e-9 * step) g.values.push_back(zmax);
    validate_grid(g);
    return g;
}

FrequencyGrid FrequencyGrid::fig4() {
    FrequencyGrid g = stepped(1e-3, 10.0, 1e-4);
    const FrequencyGrid hi = stepped(10.0, 1e8, 100.0);
    g.values.insert(g.values.end(), hi.values.begin() + 1, hi.values.end());
    g.spacing = Spacing::Custom;
    validate_grid(g);
    return g;
}

void validate_grid(const FrequencyGrid& g) {
    if (g.values.empty()) throw ValidationError("empty frequency grid");
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        if (!(g.values[i] > 0.0) || !std::isfinite(g.values[i]))
            throw ValidationError("grid values must be positive and finite");
        if (i > 0 && !(g.values[i] > g.values[i - 1])) throw ValidationError("grid must be strictly increasing");
    }
}

}  // namespace ddf
