// precise.cpp - ExpSum evaluation paths.
#include "ddf/precise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <mutex>

namespace ddf {

// Centred moment series:  exp(iz/2) f(z) = sum_n (-i)^n M_n z^n / n!,
// M_n = sum_a c_a (t_a - 1/2)^n.  Split into even (real) and odd (imaginary) parts.
struct ExpSum::Series {
    std::once_flag once;
    std::vector<mpreal> even;  // (-1)^m M_{2m} / (2m)!
    std::vector<mpreal> odd;   // (-1)^m M_{2m+1} / (2m+1)!
};

namespace {

constexpr double kTargetLog = -245.0;  // ~1e-106 relative truncation

int terms_needed(double z) {
    const double h = std::abs(z) / 2.0;
    if (h == 0.0) return 1;
    const double lh = std::log(h);
    int n = 1;
    while (n < 4000 && (n * lh - std::lgamma(n + 1.0)) > kTargetLog) ++n;
    return n + 1;
}

}  // namespace

ExpSum::ExpSum(const std::vector<mpreal>& t, const std::vector<double>& c) {
    // merge coincident times exactly (common-topology sums share boundary terms)
    std::map<mpreal, double> merged;
    for (std::size_t a = 0; a < t.size(); ++a) merged[t[a]] += c.at(a);
    for (const auto& [ta, ca] : merged) {
        if (ca == 0.0) continue;
        tm_.push_back(ta);
        td_.push_back(static_cast<double>(ta));
        tlo_.push_back(static_cast<double>(ta - mpreal(td_.back())));
        tmax_ = std::max(tmax_, std::abs(td_.back()));
        c_.push_back(ca);
        abs_sum_ += std::abs(ca);
    }
    series_ = std::make_shared<Series>();
}

double ExpSum::mean_square() const {
    double s = 0.0;
    for (double c : c_) s += c * c;
    return s;
}

std::complex<double> ExpSum::eval_double(double z) const {
    double re = 0.0, im = 0.0;
    if (std::abs(z) * tmax_ <= kExtendedPhase) {
        for (std::size_t a = 0; a < td_.size(); ++a) {
            const double ph = z * td_[a];
            re += c_[a] * std::cos(ph);
            im -= c_[a] * std::sin(ph);
        }
        return {re, im};
    }
    // large phases: exact product via fma, Cody-Waite reduction by a two-part 2 pi
    constexpr double inv2pi = 0.5 / std::numbers::pi;
    constexpr double c1 = 2.0 * std::numbers::pi;
    constexpr double c2 = 2.4492935982947064e-16;  // 2 pi - c1
    for (std::size_t a = 0; a < td_.size(); ++a) {
        const double hi = z * td_[a];
        const double lo = std::fma(z, td_[a], -hi) + z * tlo_[a];
        const double k = std::nearbyint(hi * inv2pi);
        const double r = (std::fma(-k, c1, hi) - k * c2) + lo;
        re += c_[a] * std::cos(r);
        im -= c_[a] * std::sin(r);
    }
    return {re, im};
}

double ExpSum::double_error(double z) const {
    const double zt = std::abs(z) * tmax_;
    if (zt <= kExtendedPhase) return 2.3e-16 * abs_sum_ * (4.0 + 2.0 * zt);
    return 2.3e-16 * abs_sum_ * (4.0 + 1e-3 * zt);
}

const ExpSum::Series& ExpSum::series() const {
    Series& s = *series_;
    std::call_once(s.once, [this, &s] {
        const int nmax = terms_needed(kSeriesLimit) + 2;
        std::vector<mpreal> d(tm_.size()), pw(tm_.size());
        const mpreal half = mpreal(1) / 2;
        for (std::size_t a = 0; a < tm_.size(); ++a) {
            d[a] = tm_[a] - half;
            pw[a] = mpreal(c_[a]);
        }
        mpreal fact = 1;
        for (int n = 0; n <= nmax; ++n) {
            if (n > 0) fact *= n;
            mpreal m = 0;
            for (std::size_t a = 0; a < tm_.size(); ++a) {
                m += pw[a];
                pw[a] *= d[a];
            }
            mpreal b = m / fact;
            if ((n / 2) % 2 == 1) b = -b;
            if (n % 2 == 0)
                s.even.push_back(b);
            else
                s.odd.push_back(b);
        }
    });
    return s;
}

std::complex<double> ExpSum::eval_precise(double z) const {
    if (td_.empty()) return {0.0, 0.0};
    const mpreal zm(z);
    if (std::abs(z) <= kSeriesLimit) {
        const Series& s = series();
        const int n = std::min<int>(terms_needed(z), static_cast<int>(s.even.size() + s.odd.size()) - 1);
        const mpreal u = zm * zm;
        const int me = n / 2 + 1, mo = (n + 1) / 2 + 1;
        mpreal re = 0, im = 0;
        for (int m = std::min<int>(me, static_cast<int>(s.even.size())) - 1; m >= 0; --m)
            re = re * u + s.even[static_cast<std::size_t>(m)];
        for (int m = std::min<int>(mo, static_cast<int>(s.odd.size())) - 1; m >= 0; --m)
            im = im * u + s.odd[static_cast<std::size_t>(m)];
        im = -zm * im;
        // f = exp(-iz/2) (re + i im)
        const double gr = static_cast<double>(re), gi = static_cast<double>(im);
        const double c = std::cos(0.5 * z), sn = std::sin(0.5 * z);
        return {c * gr + sn * gi, c * gi - sn * gr};
    }
    mpreal re = 0, im = 0;
    for (std::size_t a = 0; a < tm_.size(); ++a) {
        const mpreal ph = zm * tm_[a];
        re += c_[a] * cos(ph);
        im -= c_[a] * sin(ph);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

std::complex<double> ExpSum::eval(double z, Precision p) const {
    switch (p) {
        case Precision::Double: return eval_double(z);
        case Precision::Precise: return eval_precise(z);
        default: {
            const auto fd = eval_double(z);
            if (std::abs(fd) < kAutoFactor * double_error(z)) return eval_precise(z);
            return fd;
        }
    }
}

}  // namespace ddf
