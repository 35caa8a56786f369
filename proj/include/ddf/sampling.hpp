// sampling.hpp - per-qubit sampling functions f(z), z = omega T.
//
//   f(z) = 1 + (-1)^(D+1) e^{-iz} + 2 sum_d (-1)^d e^{-i z t_d / T}
//
// The generic sum is the reference; closed forms are checked against it.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ddf/precise.hpp"
#include "ddf/sequences.hpp"

namespace ddf {

using SamplingValue = std::complex<double>;

SamplingValue sampling_generic(const std::vector<double>& times, double T, double z);

// Conjugate-consistent SDD closed form, -4i e^{-iz/2} sin(z/2) sin^2(z/4D) / cos(z/2D).
SamplingValue sampling_sdd_closed(int D, double z);

// Level-wise nested-UDD form. counts = [L_{N-1}, ..., L_0]; level n in 0..N-1.
SamplingValue sampling_nudd_closed(const std::vector<int>& counts, int level, double T, double z);

// Rectangular pulses of width tau: interior sum scaled by cos(z tau / 2T).
SamplingValue sampling_finite_width(const PulseSchedule& s, int qubit, double z);

// Same quantities through the multiprecision-capable path.
SamplingValue sampling_value(const PulseSchedule& s, int qubit, double z,
                             Precision p = Precision::Auto, bool finite_width = false);

// Expansion f = sum c_a e^{-i z t_a} for one qubit; t in units of T.
ExpSum qubit_expsum(const PulseSchedule& s, int qubit);

// Boundary part 1 + s e^{-iz} of a qubit with D pulses, without cancellation.
SamplingValue boundary_term(double beta0, double beta1, double z);

// 1 + cos-weight correction: f_r = f - 2 sin^2(z w / 4)(f - B), w = tau/T.
SamplingValue apply_finite_width(SamplingValue f, SamplingValue boundary, double z, double width_over_T);

enum class Spacing { Linear, Logarithmic, Custom };

struct FrequencyGrid {
    std::vector<double> values;
    Spacing spacing = Spacing::Custom;

    static FrequencyGrid linear(double zmin, double zmax, std::size_t points);
    static FrequencyGrid logarithmic(double zmin, double zmax, std::size_t points);
    static FrequencyGrid custom(std::vector<double> values);
    // step 1e-4 on [1e-3, 10] then step 100 on (10, 1e8]
    static FrequencyGrid fig4();
    // fixed step on [zmin, zmax], endpoints included
    static FrequencyGrid stepped(double zmin, double zmax, double step);
};

void validate_grid(const FrequencyGrid& g);

}  // namespace ddf
