// spectra.hpp - noise models, decoherence functional and the factor I.
//
//   I   = int_0^inf F(z) z^{-(alpha+2)} dz
//   chi = S0 T^{alpha+1} I                                   (power law S0/omega^alpha)
//   chi = T int_0^inf J(z/T) coth(z/(2 T Te)) F(z) / z^2 dz  (thermal)
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ddf/filters.hpp"

namespace ddf {

// Low-frequency integrand exponent p - (alpha+2) <= -1.
struct DivergentIntegral : std::runtime_error {
    double exponent;
    DivergentIntegral(const std::string& what, double e) : std::runtime_error(what), exponent(e) {}
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PowerLaw {
    double S0 = 1.0;
    double alpha = 1.0;
};

// J(omega) = eta omega^s exp(-omega/omega_c)
struct Ohmic {
    double eta = 1.0;
    double s = 1.0;
    double omega_c = 1.0;
    double operator()(double w) const;
};

// Linear interpolation, zero outside [omega.front(), omega.back()].
struct TabulatedDensity {
    std::vector<double> omega, J;
    double operator()(double w) const;
};

using SpectralDensity = std::variant<Ohmic, TabulatedDensity>;

struct Thermal {
    SpectralDensity J;
    double Te = 0.0;
};

using NoiseModel = std::variant<PowerLaw, Thermal>;

void validate_noise(const NoiseModel& n);

// Two-column (omega, J) CSV; an optional non-numeric header line is skipped.
TabulatedDensity load_spectral_density_csv(const std::string& path);

// coth(omega / 2Te), with Te = 0 -> 1.
double coth_weight(double omega, double Te);

struct LowFrequencyFit {
    int p = 0;          // F ~ C z^p, p even
    double C = 0.0;
    double b = 0.0;     // F ~ C z^p (1 + b z^2)
    double z_1pct = 0.0;
    double z_lo = 0.0;
    double slope = 0.0; // unrounded slope at the converged point
};

// Measures the low-frequency power of F with multiprecision evaluation.
LowFrequencyFit low_frequency_fit(const FilterEvaluator& F);

struct FactorResult {
    double value = 0.0;
    double low_freq_exponent = 0.0;  // p - (alpha + 2)
    double abs_error_estimate = 0.0;
    double tail_bound = 0.0;
    bool converged = false;
    int filter_power = 0;            // p = 2(k+1)
    double z_lo = 0.0, z_hi = 0.0;
    std::size_t evaluations = 0;
};

// tol is relative. Throws DivergentIntegral when the origin is not integrable.
FactorResult factor_I(const FilterEvaluator& F, double alpha, double tol = 1e-8);
FactorResult factor_I(const FilterSpec& spec, const PulseSchedule& s, double alpha, double tol = 1e-8);

// int_Z^inf F(z) z^{-q} dz using the exact pair expansion of |sum c e^{-izt}|^2.
double factor_tail(const FilterEvaluator& F, double Z, double q);

double decoherence_chi(const FilterEvaluator& F, const NoiseModel& noise, double T);
double decoherence_chi(const FilterSpec& spec, const PulseSchedule& s, const NoiseModel& noise);

std::complex<double> coherence_element(std::complex<double> rho0_mn, double chi);

}  // namespace ddf
