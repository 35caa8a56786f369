// analysis.hpp - rolloff fits, spectral peaks, DFS detection, sweeps, singularity scans.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ddf/filters.hpp"
#include "ddf/spectra.hpp"

namespace ddf {

struct Curve {
    std::vector<double> z, F;
};

Curve sample_curve(const FilterEvaluator& F, const std::vector<double>& z, Precision p = Precision::Auto);

struct RolloffFit {
    double db_per_octave = 0.0;  // slope of 10 log10 F against log2 z
    double z_min = 0.0, z_max = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
    double order() const { return db_per_octave / 6.0; }
};

struct PoorFit : std::runtime_error {
    RolloffFit fit;
    PoorFit(const std::string& what, const RolloffFit& f) : std::runtime_error(what), fit(f) {}
};

struct AmbiguousPeak : std::runtime_error {
    double z_peak;
    AmbiguousPeak(const std::string& what, double z) : std::runtime_error(what), z_peak(z) {}
};

// Least squares over curve points with band_min <= z <= band_max (needs >= 8 points).
RolloffFit rolloff_db_per_octave(const Curve& curve, double band_min, double band_max);

// Two decades ending where F first reaches 1e-6 of its first-lobe maximum (scan upward
// from scan_start in multiprecision).
std::pair<double, double> default_rolloff_band(const FilterEvaluator& F, double scan_start = 1e-2);

// default band, 40 log-spaced multiprecision samples
RolloffFit measure_rolloff(const FilterEvaluator& F);

// argmax of F/z^weight_exponent, refined by a three-point parabola in log z.
double spectral_peak(const Curve& curve, double weight_exponent = 2.0);

// F sampled on [z_min, z_max] at points_per_decade (log).
Curve filter_curve(const FilterEvaluator& F, double z_min, double z_max, int points_per_decade = 2000);

// Keys are one-based label pairs (m, n), m < n. Value: F_mn below 1e-18 (2 sum D + 2N)^2 on
// the standard grid (log, 1e-3 .. 1e4, 200 points/decade).
std::map<std::pair<int, int>, bool> dfs_check(const PulseSchedule& s, Topology topology);
std::vector<double> dfs_standard_grid();

struct SingularityScan {
    std::vector<double> markers;
    std::size_t candidates = 0;
};

// Ratio scan on [z_min, z_max] at `step`; each local maximum of the ratio is refined by
// minimising the ideal filter inside its bracket, then tested for a singularity marker.
SingularityScan scan_singularities(const FilterEvaluator& F, double z_min, double z_max, double step);

struct SweepConfig {
    int num_qubits = 2;
    double T = 1.0;
    std::vector<double> alphas;
    std::vector<std::string> filters;
    std::vector<std::vector<int>> nudd;  // each [L_{N-1}, ..., L_0]
    std::vector<int> sdd;                // explicit D values
    bool pair_sdd = true;                // add SDD with the same total pulse number per NUDD entry
    double tol = 1e-6;
    int jobs = 1;
};

struct SweepRow {
    std::string scheme;
    std::vector<int> counts;  // per qubit, qubit 0 first
    std::string filter;
    double alpha = 0.0;
    double I = 0.0;
    bool converged = false;
    std::string note;
};

void validate_sweep(const SweepConfig& c);
// Paired SDD D for a NUDD entry (total pulses / N); throws if not an even integer.
int paired_sdd_pulses(const std::vector<int>& nudd_counts);
std::vector<SweepRow> factor_sweep(const SweepConfig& c);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

}  // namespace ddf
