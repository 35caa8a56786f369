// oracle.cpp - switching traces, time-domain sampling, discrete baths, trapezoid factor I.
#include "ddf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ddf/io.hpp"
#include "ddf/precise.hpp"
#include "ddf/spectra.hpp"

namespace ddf {

SwitchingTrace switching_trace(const PulseSchedule& s, int qubit) {
    const auto& t = s.times.at(static_cast<std::size_t>(qubit));
    SwitchingTrace tr;
    tr.breakpoints.push_back(0.0);
    tr.breakpoints.insert(tr.breakpoints.end(), t.begin(), t.end());
    tr.breakpoints.push_back(s.total_duration);
    for (std::size_t d = 0; d + 1 < tr.breakpoints.size(); ++d) tr.signs.push_back(d % 2 == 0 ? 1 : -1);
    return tr;
}

int switching_function(double t, const PulseSchedule& s, int qubit) {
    const SwitchingTrace tr = switching_trace(s, qubit);
    if (t < 0.0 || t > s.total_duration) throw ValidationError("switching_function: t outside [0, T]");
    for (std::size_t d = 0; d < tr.signs.size(); ++d) {
        if (t == tr.breakpoints[d] || t == tr.breakpoints[d + 1]) return 0;
        if (t > tr.breakpoints[d] && t < tr.breakpoints[d + 1]) return tr.signs[d];
    }
    return 0;
}

namespace {

using cplx = std::complex<double>;

struct MpComplex {
    mpreal re = 0, im = 0;
};

// One qubit's trace in units of T, double and multiprecision.
struct Trace {
    std::vector<double> b;
    std::vector<mpreal> bm;
    std::vector<double> sign;

    cplx eval(double z) const {
        cplx f{0.0, 0.0};
        for (std::size_t d = 0; d + 1 < b.size(); ++d) {
            const cplx e0{std::cos(z * b[d]), -std::sin(z * b[d])};
            const cplx e1{std::cos(z * b[d + 1]), -std::sin(z * b[d + 1])};
            f += sign[d] * (e0 - e1);
        }
        return f;
    }
    MpComplex eval_mp(double z) const {
        MpComplex f;
        const mpreal zm(z);
        std::vector<mpreal> c(bm.size()), s(bm.size());
        for (std::size_t a = 0; a < bm.size(); ++a) {
            const mpreal ph = zm * bm[a];
            c[a] = cos(ph);
            s[a] = sin(ph);
        }
        for (std::size_t d = 0; d + 1 < bm.size(); ++d) {
            f.re += sign[d] * (c[d] - c[d + 1]);
            f.im += sign[d] * (s[d + 1] - s[d]);
        }
        return f;
    }
    double error(double z) const { return 2.3e-16 * 2.0 * static_cast<double>(b.size()) * (4.0 + 2.0 * std::abs(z)); }
};

std::vector<Trace> make_traces(const PulseSchedule& s) {
    const auto ut = unit_times<mpreal>(s);
    std::vector<Trace> out;
    for (const auto& q : ut) {
        Trace tr;
        tr.bm.push_back(mpreal(0));
        tr.bm.insert(tr.bm.end(), q.begin(), q.end());
        tr.bm.push_back(mpreal(1));
        for (const auto& x : tr.bm) tr.b.push_back(static_cast<double>(x));
        for (std::size_t d = 0; d + 1 < tr.b.size(); ++d) tr.sign.push_back(d % 2 == 0 ? 1.0 : -1.0);
        out.push_back(std::move(tr));
    }
    return out;
}

struct SpecWeights {
    std::vector<double> w;  // digit differences per qubit
    bool common;
};

SpecWeights weights_of(const FilterSpec& spec, int N) {
    SpecWeights sw;
    sw.common = spec.topology == Topology::Common;
    for (int j = 0; j < N; ++j) sw.w.push_back(basis_digit(spec.m, j) - basis_digit(spec.n, j));
    return sw;
}

// Filter values at z for all specs. Multiprecision when an amplitude is buried in rounding noise.
void filters_at(const std::vector<Trace>& tr, const std::vector<SpecWeights>& specs, double z, bool allow_mp,
                std::vector<double>& out) {
    const std::size_t N = tr.size();
    std::vector<cplx> f(N);
    std::vector<double> err(N);
    for (std::size_t j = 0; j < N; ++j) {
        f[j] = tr[j].eval(z);
        err[j] = tr[j].error(z);
    }
    std::vector<MpComplex> fm;
    auto need_mp = [&]() {
        if (fm.empty())
            for (std::size_t j = 0; j < N; ++j) fm.push_back(tr[j].eval_mp(z));
    };
    out.assign(specs.size(), 0.0);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& sw = specs[i];
        if (sw.common) {
            cplx g{0.0, 0.0};
            double e = 0.0;
            bool any = false;
            for (std::size_t j = 0; j < N; ++j) {
                if (sw.w[j] == 0.0) continue;
                any = true;
                g += sw.w[j] * f[j];
                e += std::abs(sw.w[j]) * err[j];
            }
            if (!any) continue;
            if (allow_mp && std::abs(g) < 1e6 * e) {
                need_mp();
                mpreal re = 0, im = 0;
                for (std::size_t j = 0; j < N; ++j) {
                    re += sw.w[j] * fm[j].re;
                    im += sw.w[j] * fm[j].im;
                }
                out[i] = static_cast<double>(re * re + im * im);
            } else {
                out[i] = std::norm(g);
            }
        } else {
            double F = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                const double a = std::abs(sw.w[j]);
                if (a == 0.0) continue;
                if (allow_mp && std::abs(f[j]) < 1e6 * err[j]) {
                    need_mp();
                    F += a * static_cast<double>(fm[j].re * fm[j].re + fm[j].im * fm[j].im);
                } else {
                    F += a * std::norm(f[j]);
                }
            }
            out[i] = F;
        }
    }
}

// Exact oscillation mean of F: sum of squared coefficients over distinct times.
double mean_filter(const PulseSchedule& s, const SpecWeights& sw) {
    auto coeffs = [&](std::size_t j, double w, std::map<double, double>& m) {
        const auto& t = s.times[j];
        const double T = s.total_duration;
        m[0.0] += w;
        m[1.0] += w * ((t.size() % 2 == 0) ? -1.0 : 1.0);
        for (std::size_t d = 0; d < t.size(); ++d) m[t[d] / T] += w * ((d % 2 == 0) ? -2.0 : 2.0);
    };
    auto sq = [](const std::map<double, double>& m) {
        double a = 0.0;
        for (const auto& kv : m) a += kv.second * kv.second;
        return a;
    };
    if (sw.common) {
        std::map<double, double> m;
        for (std::size_t j = 0; j < sw.w.size(); ++j)
            if (sw.w[j] != 0.0) coeffs(j, sw.w[j], m);
        return sq(m);
    }
    double F = 0.0;
    for (std::size_t j = 0; j < sw.w.size(); ++j) {
        if (sw.w[j] == 0.0) continue;
        std::map<double, double> m;
        coeffs(j, 1.0, m);
        F += std::abs(sw.w[j]) * sq(m);
    }
    return F;
}

}  // namespace

SamplingValue sampling_time_quadrature(const PulseSchedule& s, int qubit, double z) {
    const SwitchingTrace tr = switching_trace(s, qubit);
    const double T = s.total_duration;
    cplx f{0.0, 0.0};
    for (std::size_t d = 0; d < tr.signs.size(); ++d) {
        // iz int_{a}^{b} e^{-izt/T} d(t/T) = e^{-iza/T} - e^{-izb/T}
        // phases in extended precision: z t rounding alone is ~1e-12 at z = 1e4
        const long double zl = z;
        const long double a = zl * tr.breakpoints[d] / T, b = zl * tr.breakpoints[d + 1] / T;
        const cplx ea{static_cast<double>(std::cos(a)), static_cast<double>(-std::sin(a))};
        const cplx eb{static_cast<double>(std::cos(b)), static_cast<double>(-std::sin(b))};
        f += static_cast<double>(tr.signs[d]) * (ea - eb);
    }
    return f;
}

void validate_bath(const DiscreteBath& b) {
    if (b.omega.size() != b.weight.size()) throw ValidationError("bath omega/weight length mismatch");
    if (!(b.Te >= 0.0)) throw ValidationError("bath temperature must be nonnegative");
    std::vector<double> w = b.omega;
    std::sort(w.begin(), w.end());
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(w[k] > 0.0)) throw ValidationError("bath frequencies must be positive");
        if (k > 0 && w[k] == w[k - 1]) throw ValidationError("bath frequencies must be distinct");
    }
    for (double q : b.weight)
        if (!(q >= 0.0)) throw ValidationError("bath weights must be nonnegative");
}

DiscreteBath load_discrete_bath_csv(const std::string& path, double Te) {
    DiscreteBath b;
    b.Te = Te;
    for (const auto& row : read_numeric_csv(path, 2)) {
        b.omega.push_back(row[0]);
        b.weight.push_back(row[1]);
    }
    validate_bath(b);
    return b;
}

double oracle_filter(const PulseSchedule& s, const FilterSpec& spec, double z) {
    validate_filter(spec, s);
    const auto tr = make_traces(s);
    std::vector<double> out;
    filters_at(tr, {weights_of(spec, s.num_qubits)}, z, true, out);
    return out[0];
}

double discrete_bath_decoherence(const PulseSchedule& s, const DiscreteBath& bath, const FilterSpec& spec) {
    validate_bath(bath);
    validate_filter(spec, s);
    const auto tr = make_traces(s);
    const std::vector<SpecWeights> sw{weights_of(spec, s.num_qubits)};
    std::vector<double> out;
    double chi = 0.0;
    for (std::size_t k = 0; k < bath.omega.size(); ++k) {
        const double w = bath.omega[k];
        filters_at(tr, sw, w * s.total_duration, true, out);
        chi += bath.weight[k] * coth_weight(w, bath.Te) / (w * w) * out[0];
    }
    return chi;
}

std::vector<std::vector<double>> factor_I_oracle(const PulseSchedule& s, const std::vector<FilterSpec>& specs,
                                                 const std::vector<double>& alphas, const OracleGrid& g) {
    for (const auto& sp : specs) validate_filter(sp, s);
    for (double a : alphas)
        if (!(a > 0.0)) throw ValidationError("alpha must be positive");
    const auto tr = make_traces(s);
    std::vector<SpecWeights> sw;
    for (const auto& sp : specs) sw.push_back(weights_of(sp, s.num_qubits));
    std::vector<std::vector<double>> acc(specs.size(), std::vector<double>(alphas.size(), 0.0));
    std::vector<double> F;

    // log trapezoid on [z_min, z_switch] in ln z: integrand F z^{1-q}
    const double l0 = std::log(g.z_min), l1 = std::log(g.z_switch);
    const auto nlog = static_cast<std::size_t>(std::ceil((l1 - l0) / std::log(10.0) * g.per_decade));
    const double dl = (l1 - l0) / static_cast<double>(nlog);
    std::vector<double> first;
    for (std::size_t k = 0; k <= nlog; ++k) {
        const double z = (k == nlog) ? g.z_switch : std::exp(l0 + dl * static_cast<double>(k));
        const double wt = (k == 0 || k == nlog) ? 0.5 * dl : dl;
        filters_at(tr, sw, z, true, F);
        for (std::size_t i = 0; i < specs.size(); ++i)
            for (std::size_t a = 0; a < alphas.size(); ++a)
                acc[i][a] += wt * F[i] * std::pow(z, -(alphas[a] + 1.0));
        if (k == 0) first = F;
        if (k == 1) {
            // [0, z_min]: extend the first log-interval power law analytically
            for (std::size_t i = 0; i < specs.size(); ++i) {
                if (!(first[i] > 0.0 && F[i] > 0.0)) continue;
                const double p = std::log(F[i] / first[i]) / dl;
                for (std::size_t a = 0; a < alphas.size(); ++a) {
                    const double sig = p - alphas[a] - 1.0;
                    if (sig > 0.0) acc[i][a] += first[i] * std::pow(g.z_min, -(alphas[a] + 1.0)) / sig;
                }
            }
        }
    }

    // uniform trapezoid on [z_switch, z_max]; phasors advanced by rotation, reseeded often
    const auto nuni = static_cast<std::size_t>(std::llround((g.z_max - g.z_switch) / g.step));
    const double h = (g.z_max - g.z_switch) / static_cast<double>(nuni);
    const std::size_t N = tr.size();
    std::vector<std::vector<cplx>> E(N), R(N);
    for (std::size_t j = 0; j < N; ++j) {
        E[j].resize(tr[j].b.size());
        R[j].resize(tr[j].b.size());
        for (std::size_t a = 0; a < tr[j].b.size(); ++a)
            R[j][a] = cplx{std::cos(h * tr[j].b[a]), -std::sin(h * tr[j].b[a])};
    }
    std::vector<cplx> f(N);
    std::vector<double> pw(alphas.size());
    for (std::size_t k = 0; k <= nuni; ++k) {
        const double z = g.z_switch + h * static_cast<double>(k);
        for (std::size_t j = 0; j < N; ++j) {
            auto& e = E[j];
            if (k % 64 == 0) {
                for (std::size_t a = 0; a < e.size(); ++a)
                    e[a] = cplx{std::cos(z * tr[j].b[a]), -std::sin(z * tr[j].b[a])};
            } else {
                for (std::size_t a = 0; a < e.size(); ++a) e[a] *= R[j][a];
            }
            cplx acc_f{0.0, 0.0};
            for (std::size_t d = 0; d + 1 < e.size(); ++d) acc_f += tr[j].sign[d] * (e[d] - e[d + 1]);
            f[j] = acc_f;
        }
        const double wt = (k == 0 || k == nuni) ? 0.5 * h : h;
        for (std::size_t a = 0; a < alphas.size(); ++a) pw[a] = std::pow(z, -(alphas[a] + 2.0));
        for (std::size_t i = 0; i < specs.size(); ++i) {
            double Fi = 0.0;
            if (sw[i].common) {
                cplx gsum{0.0, 0.0};
                for (std::size_t j = 0; j < N; ++j) gsum += sw[i].w[j] * f[j];
                Fi = std::norm(gsum);
            } else {
                for (std::size_t j = 0; j < N; ++j) Fi += std::abs(sw[i].w[j]) * std::norm(f[j]);
            }
            for (std::size_t a = 0; a < alphas.size(); ++a) acc[i][a] += wt * Fi * pw[a];
        }
    }

    // mean-value tail
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const double Fbar = mean_filter(s, sw[i]);
        for (std::size_t a = 0; a < alphas.size(); ++a)
            acc[i][a] += Fbar * std::pow(g.z_max, -(alphas[a] + 1.0)) / (alphas[a] + 1.0);
    }
    return acc;
}

double factor_I_oracle(const PulseSchedule& s, const FilterSpec& spec, double alpha, const OracleGrid& grid) {
    return factor_I_oracle(s, std::vector<FilterSpec>{spec}, std::vector<double>{alpha}, grid)[0][0];
}

}  // namespace ddf
