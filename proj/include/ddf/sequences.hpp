// sequences.hpp - pulse schedules: UDD, nested UDD, SDD and custom timing lists.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

namespace ddf {

enum class Scheme { SDD, NUDD, CUSTOM };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

// Invalid input. qubit < 0 / time NaN when not tied to a pulse.
struct ValidationError : std::invalid_argument {
    int qubit = -1;
    double time = std::numeric_limits<double>::quiet_NaN();
    explicit ValidationError(const std::string& what, int q = -1,
                             double t = std::numeric_limits<double>::quiet_NaN())
        : std::invalid_argument(what), qubit(q), time(t) {}
};

// Times are absolute (same units as total_duration). Immutable once built.
struct PulseSchedule {
    int num_qubits = 1;
    double total_duration = 1.0;
    double pulse_width = 0.0;
    Scheme scheme = Scheme::CUSTOM;
    std::vector<std::vector<double>> times;  // times[j] for qubit j, ascending

    // Recipe, kept so times can be rebuilt at higher precision.
    int sdd_pulses = 0;                 // D (SDD only)
    std::vector<int> nudd_counts;       // [L_{N-1}, ..., L_0] (NUDD only)
    std::vector<int> nudd_qubit;        // nudd_qubit[n] = qubit carrying level n
    bool degenerate_levels = false;     // some L_n == 0

    std::size_t pulse_count(int j) const { return times.at(static_cast<std::size_t>(j)).size(); }
    std::size_t total_pulses() const;
};

// t_l = a + (b-a) sin^2(l pi / (2L+2)), l = 1..L. L = 0 gives an empty list.
template <class Real>
std::vector<Real> udd_times_t(int L, const Real& a, const Real& b) {
    using std::sin;
    std::vector<Real> out;
    if (L <= 0) return out;
    const Real pi = boost::math::constants::pi<Real>();
    out.reserve(static_cast<std::size_t>(L));
    for (int l = 1; l <= L; ++l) {
        Real s = sin(Real(l) * pi / Real(2 * L + 2));
        out.push_back(a + (b - a) * s * s);
    }
    return out;
}

std::vector<double> udd_times(int L, double t_start, double t_end);

// counts = [L_{N-1}, ..., L_0]; level n goes to qubit level_to_qubit[n] (identity if empty).
PulseSchedule nudd_schedule(const std::vector<int>& counts, double T, double pulse_width = 0.0,
                            const std::vector<int>& level_to_qubit = {});
PulseSchedule sdd_schedule(int N, int D, double T, double pulse_width = 0.0);
PulseSchedule custom_schedule(const std::vector<std::vector<double>>& times_per_qubit, double T,
                              double pulse_width = 0.0);

// Same geometry, new duration.
PulseSchedule rescale(const PulseSchedule& s, double new_T);

// Throws ValidationError on the first broken invariant.
void validate(const PulseSchedule& s);

// Check the NUDD count list itself.
void validate_nudd_counts(const std::vector<int>& counts);

// Pulse times as fractions of T, rebuilt from the recipe in Real arithmetic.
// CUSTOM schedules use the stored doubles.
template <class Real>
std::vector<std::vector<Real>> unit_times(const PulseSchedule& s) {
    const std::size_t N = static_cast<std::size_t>(s.num_qubits);
    std::vector<std::vector<Real>> out(N);
    if (s.scheme == Scheme::SDD && s.sdd_pulses > 0) {
        const int D = s.sdd_pulses;
        std::vector<Real> t;
        for (int d = 1; d <= D; ++d) t.push_back(Real(2 * d - 1) / Real(2 * D));
        for (auto& q : out) q = t;
        return out;
    }
    if (s.scheme == Scheme::NUDD && s.nudd_counts.size() == N) {
        std::vector<Real> bounds{Real(0), Real(1)};
        for (std::size_t k = 0; k < N; ++k) {  // outermost first
            const int L = s.nudd_counts[k];
            const std::size_t level = N - 1 - k;
            const std::size_t q =
                s.nudd_qubit.empty() ? level : static_cast<std::size_t>(s.nudd_qubit[level]);
            std::vector<Real> level_times;
            for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
                auto part = udd_times_t<Real>(L, bounds[i], bounds[i + 1]);
                level_times.insert(level_times.end(), part.begin(), part.end());
            }
            out[q] = level_times;
            std::vector<Real> merged;
            merged.reserve(bounds.size() + level_times.size());
            std::size_t a = 0, b = 0;
            while (a < bounds.size() || b < level_times.size()) {
                if (b == level_times.size() || (a < bounds.size() && bounds[a] < level_times[b]))
                    merged.push_back(bounds[a++]);
                else
                    merged.push_back(level_times[b++]);
            }
            bounds.swap(merged);
        }
        return out;
    }
    for (std::size_t j = 0; j < N; ++j)
        for (double t : s.times[j]) out[j].push_back(Real(t) / Real(s.total_duration));
    return out;
}

}  // namespace ddf
