// filters.hpp - coherence-element filter functions for common and independent baths.
//
// Basis index b (zero based) has qubit digits m_j = (b >> j) & 1. Two-qubit labels
// 1..4 are |up up>, |up down>, |down up>, |down down> (index = label - 1, ket written
// qubit N-1 first).
#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "ddf/precise.hpp"
#include "ddf/sampling.hpp"
#include "ddf/sequences.hpp"

namespace ddf {

enum class Topology { Common, Independent };
enum class PulseModel { Ideal, FiniteWidth };

struct FilterSpec {
    unsigned m = 0;  // zero-based basis indices
    unsigned n = 3;
    Topology topology = Topology::Common;
    PulseModel pulse_model = PulseModel::Ideal;
};

int basis_digit(unsigned index, int qubit);
// "|ud>" style ket (u = up = 0, d = down = 1), qubit N-1 first.
std::string basis_ket(unsigned index, int num_qubits);
// label is one based: label 1 -> index 0.
unsigned basis_index(int label);

// "F14c", "F23i", ... (one-based single-digit labels, c/i suffix). Case-insensitive prefix.
FilterSpec parse_filter_label(const std::string& label, PulseModel model = PulseModel::Ideal);
std::string filter_label(const FilterSpec& spec);

void validate_filter(const FilterSpec& spec, const PulseSchedule& s);

double filter_common(const FilterSpec& spec, const PulseSchedule& s, double z);
double filter_independent(const FilterSpec& spec, const PulseSchedule& s, double z);
// F / z^2 (dimensionless). z <= 0 rejected.
double modified_filter(const FilterSpec& spec, const PulseSchedule& s, double z);

struct SingularityMarker {
    double z;
};
using RatioValue = std::variant<double, SingularityMarker>;

inline bool is_singular(const RatioValue& r) { return std::holds_alternative<SingularityMarker>(r); }

// F_finite / F_ideal on the same geometry.
RatioValue ratio_finite_ideal(const FilterSpec& spec, const PulseSchedule& s, double z);

// {4 k D pi : k = 1..k_max}
std::vector<double> sdd_singularity_grid(int D, int k_max);

// Reusable evaluator: caches per-channel expansions. Thread-safe for concurrent calls.
class FilterEvaluator {
public:
    FilterEvaluator(const FilterSpec& spec, const PulseSchedule& s);

    double operator()(double z, Precision p = Precision::Auto) const { return value(z, p); }
    // Uses spec.pulse_model.
    double value(double z, Precision p = Precision::Auto) const;
    double ideal(double z, Precision p = Precision::Auto) const;
    double finite(double z, Precision p = Precision::Auto) const;
    RatioValue ratio(double z) const;

    bool identically_zero() const;
    // (2 sum_j D_j + 2N)^2, an upper bound on F.
    double bound() const { return bound_; }
    // Oscillation mean of the ideal F over z.
    double mean_value() const;
    // Per-qubit pulse counts summed.
    std::size_t total_pulses() const { return total_pulses_; }
    const FilterSpec& spec() const { return spec_; }
    std::size_t channel_count() const { return channels_.size(); }
    const ExpSum& channel_sum(std::size_t i) const { return channels_.at(i).sum; }
    double channel_weight(std::size_t i) const { return channels_.at(i).weight; }
    double width_over_T() const { return width_; }

    static constexpr double kSingularFloor = 1e-300;
    static constexpr double kSingularRelative = 1e-24;

private:
    struct Channel {
        ExpSum sum;
        double beta0 = 0.0, beta1 = 0.0;  // boundary coefficients at t = 0 and t = T
        double weight = 1.0;
    };
    double eval(double z, Precision p, bool finite) const;

    FilterSpec spec_;
    std::vector<Channel> channels_;
    double width_ = 0.0;
    double bound_ = 0.0;
    std::size_t total_pulses_ = 0;
};

}  // namespace ddf
