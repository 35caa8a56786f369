// oracle.hpp - brute-force cross-checks that share no code path with the fast evaluators.
//
// Sampling values come from integrating e^{-izt} against the +-1 switching trace one
// interval at a time:  f = iz int_0^T e^{-izt} F(t) dt = sum_d s_d (e^{-iz t_d} - e^{-iz t_{d+1}}).
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ddf/filters.hpp"
#include "ddf/sampling.hpp"
#include "ddf/sequences.hpp"

namespace ddf {

struct SwitchingTrace {
    std::vector<double> breakpoints;  // 0 = T_0 < ... < T_{D+1} = T
    std::vector<int> signs;           // (-1)^d on interval d
};

SwitchingTrace switching_trace(const PulseSchedule& s, int qubit);

// (-1)^d strictly inside interval d, 0 at breakpoints (including 0 and T).
int switching_function(double t, const PulseSchedule& s, int qubit);

// Ideal pulses only.
SamplingValue sampling_time_quadrature(const PulseSchedule& s, int qubit, double z);

struct DiscreteBath {
    std::vector<double> omega;   // distinct, positive
    std::vector<double> weight;  // |q_k|^2
    double Te = 0.0;
};

void validate_bath(const DiscreteBath& b);
// Two columns (omega, weight).
DiscreteBath load_discrete_bath_csv(const std::string& path, double Te = 0.0);

// chi = sum_k |q_k|^2 coth(omega_k / 2Te) / omega_k^2 * F(omega_k T)
double discrete_bath_decoherence(const PulseSchedule& s, const DiscreteBath& bath, const FilterSpec& spec);

// Filter value from time-domain sampling values (multiprecision where double cancels).
double oracle_filter(const PulseSchedule& s, const FilterSpec& spec, double z);

struct OracleGrid {
    double z_min = 1e-6;
    double z_switch = 100.0;     // log trapezoid below, uniform trapezoid above
    double z_max = 1e6;
    int per_decade = 400;
    double step = 0.5;
};

// Fixed-step trapezoid estimate of int_0^inf F z^{-(alpha+2)} dz plus the mean-value tail
// Fbar z_max^{-(alpha+1)}/(alpha+1). result[i][k] for specs[i], alphas[k].
std::vector<std::vector<double>> factor_I_oracle(const PulseSchedule& s, const std::vector<FilterSpec>& specs,
                                                 const std::vector<double>& alphas, const OracleGrid& grid = {});

double factor_I_oracle(const PulseSchedule& s, const FilterSpec& spec, double alpha, const OracleGrid& grid = {});

}  // namespace ddf
