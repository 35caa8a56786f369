// sequences.cpp - schedule construction and validation.
#include "ddf/sequences.hpp"

#include "ddf/precise.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ddf {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::SDD: return "SDD";
        case Scheme::NUDD: return "NUDD";
        default: return "CUSTOM";
    }
}

Scheme parse_scheme(const std::string& name) {
    std::string u = name;
    for (auto& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u == "SDD") return Scheme::SDD;
    if (u == "NUDD") return Scheme::NUDD;
    if (u == "CUSTOM") return Scheme::CUSTOM;
    throw ValidationError("unknown scheme '" + name + "'");
}

std::size_t PulseSchedule::total_pulses() const {
    std::size_t n = 0;
    for (const auto& q : times) n += q.size();
    return n;
}

std::vector<double> udd_times(int L, double t_start, double t_end) {
    if (!(t_start < t_end)) throw ValidationError("udd_times: need t_start < t_end");
    return udd_times_t<double>(L, t_start, t_end);
}

namespace {

std::string fmt_time(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

}  // namespace

void validate(const PulseSchedule& s) {
    if (s.num_qubits < 1) throw ValidationError("num_qubits must be positive");
    if (!(s.total_duration > 0.0) || !std::isfinite(s.total_duration))
        throw ValidationError("total_duration must be positive");
    if (!(s.pulse_width >= 0.0) || !std::isfinite(s.pulse_width))
        throw ValidationError("pulse_width must be nonnegative");
    if (s.times.size() != static_cast<std::size_t>(s.num_qubits))
        throw ValidationError("times must list one entry per qubit");

    const double T = s.total_duration;
    const double tol = 1e-12 * T;
    const double w = s.pulse_width;
    for (std::size_t j = 0; j < s.times.size(); ++j) {
        const auto& q = s.times[j];
        const int jq = static_cast<int>(j);
        for (std::size_t d = 0; d < q.size(); ++d) {
            const double t = q[d];
            if (!std::isfinite(t)) throw ValidationError("qubit " + std::to_string(j) + ": non-finite time", jq, t);
            if (!(t > tol && t < T - tol))
                throw ValidationError("qubit " + std::to_string(j) + ": time " + fmt_time(t) +
                                          " outside (0, T)", jq, t);
            if (d > 0 && !(t - q[d - 1] > tol))
                throw ValidationError("qubit " + std::to_string(j) + ": times unsorted or repeated at " +
                                          fmt_time(t), jq, t);
            if (w > 0.0 && d > 0 && t - q[d - 1] < w - tol)
                throw ValidationError("qubit " + std::to_string(j) + ": pulse overlap at " + fmt_time(t), jq, t);
        }
        // overlaps are reported before pulses that stick out of [0, T]
        for (double t : q)
            if (w > 0.0 && (t - 0.5 * w < -tol || t + 0.5 * w > T + tol))
                throw ValidationError("qubit " + std::to_string(j) + ": pulse at " + fmt_time(t) +
                                          " extends outside [0, T]", jq, t);
    }
    if (s.scheme == Scheme::SDD) {
        for (std::size_t j = 1; j < s.times.size(); ++j)
            if (s.times[j] != s.times[0]) throw ValidationError("SDD qubits must share one time list");
        if (s.times[0].size() % 2 != 0) throw ValidationError("D must be even");
    }
    if (s.scheme == Scheme::NUDD && !s.nudd_counts.empty()) {
        const std::size_t N = s.times.size();
        std::size_t outer = 1;
        for (std::size_t k = 0; k < N; ++k) {
            const std::size_t level = N - 1 - k;
            const std::size_t q = s.nudd_qubit.empty() ? level : static_cast<std::size_t>(s.nudd_qubit[level]);
            const std::size_t L = static_cast<std::size_t>(s.nudd_counts[k]);
            if (s.times[q].size() != L * outer)
                throw ValidationError("NUDD pulse count mismatch on qubit " + std::to_string(q),
                                      static_cast<int>(q));
            outer *= (L + 1);
        }
    }
}

void validate_nudd_counts(const std::vector<int>& counts) {
    if (counts.empty()) throw ValidationError("NUDD counts must not be empty");
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] < 0) throw ValidationError("NUDD counts must be nonnegative");
        if (k > 0 && counts[k] % 2 != 0)
            throw ValidationError("NUDD inner level counts must be even (L_" +
                                  std::to_string(counts.size() - 1 - k) + " = " + std::to_string(counts[k]) + ")");
    }
}

PulseSchedule nudd_schedule(const std::vector<int>& counts, double T, double pulse_width,
                            const std::vector<int>& level_to_qubit) {
    validate_nudd_counts(counts);
    const int N = static_cast<int>(counts.size());
    if (!level_to_qubit.empty()) {
        if (static_cast<int>(level_to_qubit.size()) != N)
            throw ValidationError("qubit permutation must have one entry per level");
        std::vector<int> p = level_to_qubit;
        std::sort(p.begin(), p.end());
        for (int i = 0; i < N; ++i)
            if (p[static_cast<std::size_t>(i)] != i) throw ValidationError("qubit permutation is not a permutation");
    }
    if (!(T > 0.0)) throw ValidationError("total_duration must be positive");
    PulseSchedule s;
    s.num_qubits = N;
    s.total_duration = T;
    s.pulse_width = pulse_width;
    s.scheme = Scheme::NUDD;
    s.nudd_counts = counts;
    s.nudd_qubit = level_to_qubit;
    s.degenerate_levels = std::any_of(counts.begin(), counts.end(), [](int L) { return L == 0; });
    s.times.resize(static_cast<std::size_t>(N));
    // built in multiprecision, so each stored time is the correctly rounded value
    const auto frac = unit_times<mpreal>(s);
    for (std::size_t j = 0; j < frac.size(); ++j)
        for (const mpreal& f : frac[j]) s.times[j].push_back(static_cast<double>(f * T));
    validate(s);
    return s;
}

PulseSchedule sdd_schedule(int N, int D, double T, double pulse_width) {
    if (N < 1) throw ValidationError("num_qubits must be positive");
    if (D <= 0 || D % 2 != 0) throw ValidationError("D must be even");
    if (!(T > 0.0)) throw ValidationError("total_duration must be positive");
    PulseSchedule s;
    s.num_qubits = N;
    s.total_duration = T;
    s.pulse_width = pulse_width;
    s.scheme = Scheme::SDD;
    s.sdd_pulses = D;
    std::vector<double> t;
    for (int d = 1; d <= D; ++d) t.push_back(static_cast<double>(mpreal(2 * d - 1) * T / (2 * D)));
    s.times.assign(static_cast<std::size_t>(N), t);
    validate(s);
    return s;
}

PulseSchedule custom_schedule(const std::vector<std::vector<double>>& times_per_qubit, double T,
                              double pulse_width) {
    PulseSchedule s;
    s.num_qubits = static_cast<int>(times_per_qubit.size());
    s.total_duration = T;
    s.pulse_width = pulse_width;
    s.scheme = Scheme::CUSTOM;
    s.times = times_per_qubit;
    validate(s);
    return s;
}

PulseSchedule rescale(const PulseSchedule& s, double new_T) {
    if (!(new_T > 0.0)) throw ValidationError("total_duration must be positive");
    PulseSchedule r = s;
    const double k = new_T / s.total_duration;
    r.total_duration = new_T;
    r.pulse_width = s.pulse_width * k;
    if (s.scheme == Scheme::CUSTOM) {
        for (auto& q : r.times)
            for (auto& t : q) t *= k;
    } else {
        // rebuild from the recipe so fractions stay exact
        const auto frac = unit_times<mpreal>(s);
        for (std::size_t j = 0; j < frac.size(); ++j) {
            r.times[j].clear();
            for (const mpreal& f : frac[j]) r.times[j].push_back(static_cast<double>(f * new_T));
        }
    }
    validate(r);
    return r;
}

}  // namespace ddf
