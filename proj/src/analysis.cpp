// analysis.cpp - rolloff fits, peaks, DFS detection, singularity scans and sweeps.
#include "ddf/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "ddf/io.hpp"

namespace ddf {

Curve sample_curve(const FilterEvaluator& F, const std::vector<double>& z, Precision p) {
    Curve c;
    c.z = z;
    c.F.reserve(z.size());
    for (double x : z) c.F.push_back(F.value(x, p));
    return c;
}

RolloffFit rolloff_db_per_octave(const Curve& curve, double band_min, double band_max) {
    if (curve.z.size() != curve.F.size()) throw ValidationError("curve z/F length mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < curve.z.size(); ++i) {
        const double z = curve.z[i];
        if (z < band_min || z > band_max) continue;
        if (!(curve.F[i] > 0.0)) throw ValidationError("rolloff band contains a zero filter value");
        x.push_back(std::log2(z));
        y.push_back(10.0 * std::log10(curve.F[i]));
    }
    if (x.size() < 8) throw ValidationError("rolloff fit needs at least 8 points in the band");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    RolloffFit fit;
    fit.db_per_octave = sxy / sxx;
    fit.r_squared = (syy > 0.0) ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    fit.z_min = std::exp2(*std::min_element(x.begin(), x.end()));
    fit.z_max = std::exp2(*std::max_element(x.begin(), x.end()));
    fit.points = x.size();
    if (fit.r_squared < 0.999)
        throw PoorFit("rolloff fit r^2 = " + format_number(fit.r_squared) + " below 0.999", fit);
    return fit;
}

std::pair<double, double> default_rolloff_band(const FilterEvaluator& F, double scan_start) {
    if (F.identically_zero()) throw ValidationError("filter is identically zero; no rolloff");
    auto Fp = [&F](double z) { return F.value(z, Precision::Precise); };
    const double r = std::pow(10.0, 1.0 / 50.0);
    double z0 = scan_start, f0 = Fp(z0);
    double z1 = z0 * r, f1 = Fp(z1);
    double peak = -1.0;
    for (int k = 0; k < 50 * 8; ++k) {
        const double z2 = z1 * r, f2 = Fp(z2);
        if (f1 >= f0 && f1 > f2) {
            peak = f1;
            break;
        }
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f2;
    }
    if (peak <= 0.0) throw NumericalFailure("no first-lobe maximum found for the rolloff band");
    const double target = 1e-6 * peak;
    if (Fp(scan_start) >= target) throw NumericalFailure("scan start already above 1e-6 of the first lobe");
    double lo = scan_start, hi = scan_start;
    while (Fp(hi) < target) {
        lo = hi;
        hi *= r;
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = std::sqrt(lo * hi);
        (Fp(mid) < target ? lo : hi) = mid;
    }
    return {hi / 100.0, hi};
}

RolloffFit measure_rolloff(const FilterEvaluator& F) {
    const auto band = default_rolloff_band(F);
    std::vector<double> z;
    for (int i = 0; i < 40; ++i)
        z.push_back(band.first * std::pow(band.second / band.first, static_cast<double>(i) / 39.0));
    z.front() = band.first;
    z.back() = band.second;
    return rolloff_db_per_octave(sample_curve(F, z, Precision::Precise), band.first, band.second);
}

double spectral_peak(const Curve& curve, double weight_exponent) {
    const std::size_t n = curve.z.size();
    if (n < 3 || curve.F.size() != n) throw ValidationError("spectral_peak needs at least 3 curve points");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = curve.F[i] / std::pow(curve.z[i], weight_exponent);
    const auto imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    if (imax == 0 || imax == n - 1)
        throw AmbiguousPeak("maximum at grid boundary (no interior lobe)", curve.z[imax]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i == imax) continue;
        if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] >= 0.99 * y[imax]) {
            // a neighbouring plateau point of the same lobe is not a second lobe
            if (i + 1 == imax || imax + 1 == i) continue;
            throw AmbiguousPeak("two lobes within 1% of the maximum", curve.z[imax]);
        }
    }
    const double x0 = std::log(curve.z[imax - 1]), x1 = std::log(curve.z[imax]), x2 = std::log(curve.z[imax + 1]);
    const double y0 = y[imax - 1], y1 = y[imax], y2 = y[imax + 1];
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (!(a < 0.0)) return curve.z[imax];
    const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * a);
    return std::exp(std::clamp(xv, x0, x2));
}

Curve filter_curve(const FilterEvaluator& F, double z_min, double z_max, int ppd) {
    const auto pts = static_cast<std::size_t>(std::ceil(std::log10(z_max / z_min) * ppd)) + 1;
    return sample_curve(F, FrequencyGrid::logarithmic(z_min, z_max, pts).values);
}

std::vector<double> dfs_standard_grid() { return FrequencyGrid::logarithmic(1e-3, 1e4, 7 * 200 + 1).values; }

std::map<std::pair<int, int>, bool> dfs_check(const PulseSchedule& s, Topology topology) {
    if (s.num_qubits > 4) throw ValidationError("dfs_check supports up to 4 qubits");
    const unsigned dim = 1u << s.num_qubits;
    const auto grid = dfs_standard_grid();
    std::map<std::pair<int, int>, bool> out;
    for (unsigned m = 0; m < dim; ++m) {
        for (unsigned n = m + 1; n < dim; ++n) {
            FilterSpec spec{m, n, topology, PulseModel::Ideal};
            FilterEvaluator F(spec, s);
            const double thr = 1e-18 * F.bound();
            double mx = 0.0;
            if (!F.identically_zero())
                for (double z : grid) mx = std::max(mx, F.value(z, Precision::Double));
            out[{static_cast<int>(m) + 1, static_cast<int>(n) + 1}] = mx < thr;
        }
    }
    return out;
}

SingularityScan scan_singularities(const FilterEvaluator& F, double z_min, double z_max, double step) {
    if (!(z_max > z_min) || !(step > 0.0)) throw ValidationError("bad singularity scan range");
    SingularityScan out;
    if (F.width_over_T() == 0.0) return out;
    const auto grid = FrequencyGrid::stepped(z_min, z_max, step).values;
    std::vector<double> r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const RatioValue v = F.ratio(grid[i]);
        r[i] = is_singular(v) ? std::numeric_limits<double>::infinity() : std::get<double>(v);
    }
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (!(r[i] >= r[i - 1] && r[i] > r[i + 1])) continue;
        ++out.candidates;
        // golden-section minimum of the ideal filter on [z_{i-1}, z_{i+1}]
        double a = grid[i - 1], b = grid[i + 1];
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = F.ideal(c), fd = F.ideal(d);
        for (int it = 0; it < 200 && (b - a) > 4e-16 * b; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = F.ideal(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = F.ideal(d);
            }
        }
        const double zs = (fc < fd) ? c : d;
        if (is_singular(F.ratio(zs))) {
            if (out.markers.empty() || zs - out.markers.back() > step) out.markers.push_back(zs);
        }
    }
    return out;
}

int paired_sdd_pulses(const std::vector<int>& nudd_counts) {
    validate_nudd_counts(nudd_counts);
    std::size_t outer = 1, total = 0;
    for (int L : nudd_counts) {
        total += static_cast<std::size_t>(L) * outer;
        outer *= static_cast<std::size_t>(L + 1);
    }
    const std::size_t N = nudd_counts.size();
    if (total % N != 0 || (total / N) % 2 != 0 || total == 0)
        throw ValidationError("no even SDD pulse count matches NUDD total " + std::to_string(total));
    return static_cast<int>(total / N);
}

void validate_sweep(const SweepConfig& c) {
    std::vector<std::string> errs;
    if (c.num_qubits < 1) errs.push_back("num_qubits must be positive");
    if (!(c.T > 0.0)) errs.push_back("T must be positive");
    if (c.alphas.empty()) errs.push_back("alphas must not be empty");
    for (double a : c.alphas)
        if (!(a > 0.0)) errs.push_back("alpha must be positive");
    if (c.filters.empty()) errs.push_back("filters must not be empty");
    for (const auto& f : c.filters) {
        try {
            const FilterSpec s = parse_filter_label(f);
            if (c.num_qubits >= 1 && (s.m >= (1u << c.num_qubits) || s.n >= (1u << c.num_qubits)))
                errs.push_back("filter " + f + " needs more qubits");
        } catch (const ValidationError& e) {
            errs.push_back(e.what());
        }
    }
    if (c.nudd.empty() && c.sdd.empty()) errs.push_back("no schedules: give nudd and/or sdd entries");
    for (const auto& n : c.nudd) {
        try {
            if (static_cast<int>(n.size()) != c.num_qubits) throw ValidationError("nudd entry length must equal num_qubits");
            validate_nudd_counts(n);
            if (c.pair_sdd) paired_sdd_pulses(n);
        } catch (const ValidationError& e) {
            errs.push_back(e.what());
        }
    }
    for (int D : c.sdd)
        if (D <= 0 || D % 2 != 0) errs.push_back("D must be even (got " + std::to_string(D) + ")");
    if (!(c.tol > 0.0)) errs.push_back("tol must be positive");
    if (c.jobs < 1) errs.push_back("jobs must be at least 1");
    if (!errs.empty()) {
        std::string msg;
        for (const auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
        throw ValidationError(msg);
    }
}

std::vector<SweepRow> factor_sweep(const SweepConfig& c) {
    validate_sweep(c);
    struct Task {
        PulseSchedule s;
        std::vector<int> counts;
    };
    std::vector<Task> tasks;
    auto add_sdd = [&](int D) {
        tasks.push_back({sdd_schedule(c.num_qubits, D, c.T), std::vector<int>(static_cast<std::size_t>(c.num_qubits), D)});
    };
    for (const auto& n : c.nudd) {
        std::vector<int> per_qubit(n.rbegin(), n.rend());  // qubit 0 first
        tasks.push_back({nudd_schedule(n, c.T), per_qubit});
        if (c.pair_sdd) add_sdd(paired_sdd_pulses(n));
    }
    for (int D : c.sdd) add_sdd(D);

    const std::size_t per_task = c.filters.size() * c.alphas.size();
    std::vector<SweepRow> rows(tasks.size() * per_task);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
            const Task& task = tasks[t];
            std::size_t k = t * per_task;
            for (const auto& label : c.filters) {
                const FilterEvaluator F(parse_filter_label(label), task.s);
                for (double alpha : c.alphas) {
                    SweepRow& row = rows[k++];
                    row.scheme = scheme_name(task.s.scheme);
                    row.counts = task.counts;
                    row.filter = label;
                    row.alpha = alpha;
                    try {
                        const FactorResult r = factor_I(F, alpha, c.tol);
                        row.I = r.value;
                        row.converged = r.converged;
                    } catch (const DivergentIntegral& e) {
                        row.I = std::numeric_limits<double>::quiet_NaN();
                        row.converged = false;
                        row.note = e.what();
                    } catch (const NumericalFailure& e) {
                        row.I = std::numeric_limits<double>::quiet_NaN();
                        row.converged = false;
                        row.note = e.what();
                    }
                }
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(c.jobs, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "scheme,counts,filter,alpha,I,converged\n";
    for (const auto& r : rows) {
        std::string counts;
        for (std::size_t i = 0; i < r.counts.size(); ++i) counts += (i ? ";" : "") + std::to_string(r.counts[i]);
        out += r.scheme + "," + counts + "," + r.filter + "," + format_number(r.alpha) + "," + format_number(r.I) +
               "," + (r.converged ? "true" : "false") + "\n";
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<SweepRow> rows;
    if (!std::getline(in, line) || line != "scheme,counts,filter,alpha,I,converged")
        throw ValidationError("sweep CSV header mismatch");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 6) throw ValidationError("sweep CSV row needs 6 fields");
        SweepRow r;
        r.scheme = f[0];
        std::stringstream cs(f[1]);
        for (std::string c; std::getline(cs, c, ';');) r.counts.push_back(std::stoi(c));
        r.filter = f[2];
        r.alpha = std::stod(f[3]);
        r.I = (f[4] == "nan") ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[4]);
        r.converged = f[5] == "true";
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace ddf
