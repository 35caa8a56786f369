// spectra.cpp - factor I, decoherence functional, noise models.
#include "ddf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "ddf/io.hpp"
#include "ddf/quadrature.hpp"

namespace ddf {

namespace {

constexpr double kPi = std::numbers::pi;

// G(x, q) = int_x^inf cos(u) u^{-q} du, x > 0, q > 1.
double cos_tail(double x, double q) {
    auto asym = [q](double X) {
        const double s = std::sin(X), c = std::cos(X), Xq = std::pow(X, -q);
        return Xq * (-s + q * c / X + q * (q + 1) * s / (X * X) - q * (q + 1) * (q + 2) * c / (X * X * X));
    };
    if (x >= 200.0) return asym(x);
    const double X = std::max(x, 1.0) + 200.0;
    std::vector<double> bp{x};
    double z = x;
    while (2.0 * z < 2.0 * kPi) bp.push_back(z *= 2.0);
    double u = std::max(bp.back(), 2.0 * kPi);
    if (u > bp.back()) bp.push_back(u);
    const int n = static_cast<int>(std::ceil((X - u) / kPi));
    for (int k = 1; k <= n; ++k) bp.push_back(u + (X - u) * k / n);
    auto f = [q](double t) { return std::cos(t) * std::pow(t, -q); };
    const QuadResult r = integrate_gk(std::function<double(double)>(f), bp, 1e-13, 0.0, 200000);
    return r.value + asym(X);
}

}  // namespace

double Ohmic::operator()(double w) const {
    if (w <= 0.0) return 0.0;
    return eta * std::pow(w, s) * std::exp(-w / omega_c);
}

double TabulatedDensity::operator()(double w) const {
    if (omega.empty() || w < omega.front() || w > omega.back()) return 0.0;
    auto it = std::upper_bound(omega.begin(), omega.end(), w);
    if (it == omega.end()) return J.back();
    const std::size_t i = static_cast<std::size_t>(it - omega.begin());
    if (i == 0) return J.front();
    const double t = (w - omega[i - 1]) / (omega[i] - omega[i - 1]);
    return J[i - 1] + t * (J[i] - J[i - 1]);
}

void validate_noise(const NoiseModel& n) {
    if (const auto* p = std::get_if<PowerLaw>(&n)) {
        if (!(p->alpha > 0.0)) throw ValidationError("power-law alpha must be positive");
        if (!(p->S0 > 0.0)) throw ValidationError("power-law S0 must be positive");
        return;
    }
    const auto& th = std::get<Thermal>(n);
    if (!(th.Te >= 0.0)) throw ValidationError("temperature must be nonnegative");
    if (const auto* o = std::get_if<Ohmic>(&th.J)) {
        if (!(o->eta >= 0.0) || !(o->omega_c > 0.0) || !(o->s > 0.0))
            throw ValidationError("ohmic density needs eta >= 0, s > 0, omega_c > 0");
    } else {
        const auto& t = std::get<TabulatedDensity>(th.J);
        if (t.omega.size() != t.J.size() || t.omega.size() < 2)
            throw ValidationError("tabulated density needs at least two (omega, J) rows");
        for (std::size_t i = 0; i < t.omega.size(); ++i) {
            if (t.J[i] < 0.0) throw ValidationError("tabulated J must be nonnegative");
            if (i > 0 && !(t.omega[i] > t.omega[i - 1]))
                throw ValidationError("tabulated omega must be strictly increasing");
        }
        if (!(t.omega.front() >= 0.0)) throw ValidationError("tabulated omega must be nonnegative");
    }
}

TabulatedDensity load_spectral_density_csv(const std::string& path) {
    TabulatedDensity t;
    for (const auto& row : read_numeric_csv(path, 2)) {
        t.omega.push_back(row[0]);
        t.J.push_back(row[1]);
    }
    validate_noise(Thermal{t, 0.0});
    return t;
}

double coth_weight(double omega, double Te) {
    if (Te == 0.0) return 1.0;
    const double x = omega / (2.0 * Te);
    // coth x = 1 + 2 / expm1(2x); overflow of expm1 gives exactly 1
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

LowFrequencyFit low_frequency_fit(const FilterEvaluator& F) {
    const double r = std::exp2(0.125);
    auto Fp = [&F](double z) { return F.value(z, Precision::Precise); };
    auto slope = [&](double z) {
        const double a = Fp(z * r), b = Fp(z / r);
        if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
            throw NumericalFailure("low-frequency filter underflow while measuring the slope");
        return std::log(a / b) / (2.0 * std::log(r));
    };
    LowFrequencyFit fit;
    double z = 1.0, prev = slope(z);
    bool ok = false;
    for (int j = 0; j < 60; ++j) {
        z *= 0.5;
        const double s = slope(z);
        const double pe = 2.0 * std::round(0.5 * s);
        if (std::abs(s - prev) < 1e-3 && std::abs(s - pe) < 1e-2 && pe >= 2.0) {
            fit.p = static_cast<int>(pe);
            fit.slope = s;
            ok = true;
            break;
        }
        prev = s;
    }
    if (!ok) throw NumericalFailure("low-frequency slope did not settle");
    const double p = fit.p;
    const double step = std::exp2(0.25);
    while (z * step < 1e3 && std::abs(slope(z * step) - p) <= 0.01 * p) z *= step;
    fit.z_1pct = z;
    fit.z_lo = z / 16.0;
    const double z1 = fit.z_lo, z2 = 0.5 * fit.z_lo;
    const double y1 = Fp(z1) / std::pow(z1, p), y2 = Fp(z2) / std::pow(z2, p);
    fit.C = (4.0 * y2 - y1) / 3.0;
    fit.b = (fit.C != 0.0) ? 4.0 * (y1 - y2) / (3.0 * z1 * z1) / fit.C : 0.0;
    return fit;
}

double factor_tail(const FilterEvaluator& F, double Z, double q) {
    double total = 0.0;
    const double w = F.width_over_T();
    const bool fin = F.spec().pulse_model == PulseModel::FiniteWidth && w > 0.0;
    std::map<double, double> gcache;
    for (std::size_t ch = 0; ch < F.channel_count(); ++ch) {
        const ExpSum& e = F.channel_sum(ch);
        std::vector<double> t, c;
        for (std::size_t a = 0; a < e.size(); ++a) {
            const double ta = e.times()[a], ca = e.coeffs()[a];
            if (fin && ta > 0.0 && ta < 1.0) {
                // cos(z w / 2) e^{-izt} = (e^{-iz(t - w/2)} + e^{-iz(t + w/2)}) / 2
                t.push_back(ta - 0.5 * w);
                c.push_back(0.5 * ca);
                t.push_back(ta + 0.5 * w);
                c.push_back(0.5 * ca);
            } else {
                t.push_back(ta);
                c.push_back(ca);
            }
        }
        double diag = 0.0, cross = 0.0;
        for (std::size_t a = 0; a < t.size(); ++a) {
            diag += c[a] * c[a];
            for (std::size_t b = a + 1; b < t.size(); ++b) {
                const double d = std::abs(t[a] - t[b]);
                if (d < 1e-300) {
                    diag += 2.0 * c[a] * c[b];
                    continue;
                }
                auto it = gcache.find(d);
                double g;
                if (it != gcache.end()) {
                    g = it->second;
                } else {
                    g = std::pow(d, q - 1.0) * cos_tail(d * Z, q);
                    gcache.emplace(d, g);
                }
                cross += 2.0 * c[a] * c[b] * g;
            }
        }
        total += F.channel_weight(ch) * (diag * std::pow(Z, 1.0 - q) / (q - 1.0) + cross);
    }
    return total;
}

FactorResult factor_I(const FilterEvaluator& F, double alpha, double tol) {
    if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
    if (!(tol > 0.0)) throw ValidationError("tol must be positive");
    FactorResult res;
    const double q = alpha + 2.0;
    const double sumD = static_cast<double>(F.total_pulses());
    res.z_hi = std::max(1e3, 100.0 * sumD);
    res.tail_bound = F.bound() / ((alpha + 1.0) * std::pow(res.z_hi, alpha + 1.0));
    if (F.identically_zero()) {
        res.value = 0.0;
        res.low_freq_exponent = std::numeric_limits<double>::infinity();
        res.tail_bound = 0.0;
        res.converged = true;
        return res;
    }
    const LowFrequencyFit fit = low_frequency_fit(F);
    const double e = fit.p - q;
    res.filter_power = fit.p;
    res.low_freq_exponent = e;
    if (e <= -1.0)
        throw DivergentIntegral("integral diverges at the origin: F ~ z^" + std::to_string(fit.p) +
                                    ", integrand exponent " + format_number(e),
                                e);
    res.z_lo = fit.z_lo;
    const double zl = fit.z_lo;
    const double low = fit.C * (std::pow(zl, e + 1.0) / (e + 1.0) + fit.b * std::pow(zl, e + 3.0) / (e + 3.0));
    const double low_err =
        std::abs(fit.C) * fit.b * fit.b * std::pow(zl, e + 5.0) / (e + 5.0) + 1e-14 * std::abs(low);

    std::vector<double> bp{zl};
    const double zsw = std::min(2.0 * kPi, res.z_hi);
    for (double z = 2.0 * zl; z < zsw; z *= 2.0) bp.push_back(z);
    if (bp.back() < zsw) bp.push_back(zsw);
    const int n = static_cast<int>(std::ceil((res.z_hi - zsw) / kPi));
    for (int k = 1; k <= n; ++k) bp.push_back(zsw + (res.z_hi - zsw) * k / n);

    auto integrand = [&F, q](double z) { return F.value(z) * std::pow(z, -q); };
    const QuadResult mid = integrate_gk(std::function<double(double)>(integrand), bp, 0.25 * tol, 0.0);
    const double tail = factor_tail(F, res.z_hi, q);

    res.value = low + mid.value + tail;
    res.abs_error_estimate = low_err + mid.error + 1e-10 * std::abs(tail);
    res.evaluations = mid.evaluations;
    res.converged = mid.converged && res.abs_error_estimate <= tol * std::abs(res.value);
    return res;
}

FactorResult factor_I(const FilterSpec& spec, const PulseSchedule& s, double alpha, double tol) {
    return factor_I(FilterEvaluator(spec, s), alpha, tol);
}

double decoherence_chi(const FilterEvaluator& F, const NoiseModel& noise, double T) {
    validate_noise(noise);
    if (!(T > 0.0)) throw ValidationError("T must be positive");
    if (F.identically_zero()) return 0.0;
    if (const auto* p = std::get_if<PowerLaw>(&noise)) {
        const FactorResult r = factor_I(F, p->alpha, 1e-9);
        return p->S0 * std::pow(T, p->alpha + 1.0) * r.value;
    }
    const auto& th = std::get<Thermal>(noise);
    auto J = [&th](double w) { return std::visit([w](const auto& d) { return d(w); }, th.J); };
    double wmax;
    std::vector<double> nodes;  // tabulated kinks (z units)
    if (const auto* o = std::get_if<Ohmic>(&th.J)) {
        wmax = o->omega_c * (80.0 + 4.0 * o->s);
    } else {
        const auto& t = std::get<TabulatedDensity>(th.J);
        wmax = t.omega.back();
        if (t.omega.size() <= 100000)
            for (double w : t.omega) nodes.push_back(w * T);
    }
    const double zmax = wmax * T;
    auto integrand = [&](double z) {
        const double w = z / T;
        return T * J(w) * coth_weight(w, th.Te) * F.value(z) / (z * z);
    };
    const double z0 = std::min(1e-8, 1e-3 * zmax);
    std::vector<double> bp{z0};
    const double zsw = std::min(2.0 * kPi, zmax);
    for (double z = 2.0 * z0; z < zsw; z *= 2.0) bp.push_back(z);
    if (bp.back() < zsw) bp.push_back(zsw);
    if (zmax > zsw) {
        const int n = static_cast<int>(std::ceil((zmax - zsw) / kPi));
        for (int k = 1; k <= n; ++k) bp.push_back(zsw + (zmax - zsw) * k / n);
    }
    for (double z : nodes)
        if (z > z0 && z < zmax) bp.push_back(z);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    const QuadResult r = integrate_gk(std::function<double(double)>(integrand), bp, 1e-10, 0.0);
    const double head = integrand(z0) * z0;  // [0, z0]: integrand is finite there
    return r.value + head;
}

double decoherence_chi(const FilterSpec& spec, const PulseSchedule& s, const NoiseModel& noise) {
    return decoherence_chi(FilterEvaluator(spec, s), noise, s.total_duration);
}

std::complex<double> coherence_element(std::complex<double> rho0_mn, double chi) {
    if (!(chi >= 0.0)) throw ValidationError("chi must be nonnegative");
    return rho0_mn * std::exp(-chi);
}

}  // namespace ddf
