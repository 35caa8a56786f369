// cli.cpp - subcommands. Frequencies are dimensionless z = omega T unless --T is given.
#include "ddf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "ddf/analysis.hpp"
#include "ddf/filters.hpp"
#include "ddf/io.hpp"
#include "ddf/sampling.hpp"
#include "ddf/sequences.hpp"
#include "ddf/spectra.hpp"

namespace ddf {

namespace {

using nlohmann::json;

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, ',');) {
        if (cell.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            std::size_t used = 0;
            v.push_back(std::stod(cell, &used));
            if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ValidationError("not a number: '" + cell + "'");
        }
    }
    return v;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> v;
    for (double x : parse_list(text)) {
        if (x != std::floor(x)) throw ValidationError("expected integers in '" + text + "'");
        v.push_back(static_cast<int>(x));
    }
    return v;
}

// Output goes to the file if given, else to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + path + "' for writing");
    f << text;
}

struct ScheduleArgs {
    std::string scheme, counts, output, permutation;
    std::vector<std::string> times;
    int D = 0, N = 2;
    double T = 1.0, width = 0.0;
};

int cmd_schedule(const ScheduleArgs& a, std::ostream& out, std::ostream& err) {
    PulseSchedule s;
    if (a.scheme == "sdd") {
        s = sdd_schedule(a.N, a.D, a.T, a.width);
    } else if (a.scheme == "nudd") {
        if (a.counts.empty()) throw ValidationError("nudd needs --counts");
        std::vector<int> perm;
        if (!a.permutation.empty()) perm = parse_int_list(a.permutation);
        s = nudd_schedule(parse_int_list(a.counts), a.T, a.width, perm);
    } else {
        if (a.times.empty()) throw ValidationError("custom needs one --times entry per qubit");
        std::vector<std::vector<double>> t;
        for (const auto& q : a.times) t.push_back(parse_list(q));
        s = custom_schedule(t, a.T, a.width);
    }
    emit(schedule_to_json(s).dump(2) + "\n", a.output, out);
    std::ostream& summary = a.output.empty() ? err : out;
    summary << scheme_name(s.scheme) << " schedule, " << s.num_qubits << " qubit(s), pulses per qubit:";
    for (int j = 0; j < s.num_qubits; ++j) summary << " q" << j << "=" << s.pulse_count(j);
    summary << ", total " << s.total_pulses() << " pulses\n";
    if (s.degenerate_levels) summary << "note: schedule contains zero-pulse (degenerate) NUDD levels\n";
    return 0;
}

struct FilterArgs {
    std::string schedule, filter, preset, spacing = "log", output, precision = "auto";
    double zmin = 1e-2, zmax = 1e3, step = 0.0, T = 0.0;
    std::size_t points = 1000;
    bool ratio = false, finite = false;
    int jobs = 1;
};

Precision parse_precision(const std::string& p) {
    if (p == "auto") return Precision::Auto;
    if (p == "double") return Precision::Double;
    if (p == "precise") return Precision::Precise;
    throw ValidationError("unknown precision '" + p + "'");
}

int cmd_filter(const FilterArgs& a, std::ostream& out) {
    const PulseSchedule s = read_schedule_file(a.schedule);
    FilterSpec spec = parse_filter_label(a.filter, a.finite ? PulseModel::FiniteWidth : PulseModel::Ideal);
    const FilterEvaluator F(spec, s);
    const Precision prec = parse_precision(a.precision);
    const bool physical = a.T > 0.0;
    FrequencyGrid g;
    if (!a.preset.empty()) {
        if (a.preset != "fig4") throw ValidationError("unknown preset '" + a.preset + "'");
        g = FrequencyGrid::fig4();
    } else if (a.step > 0.0) {
        g = FrequencyGrid::stepped(a.zmin, a.zmax, a.step);
    } else if (a.spacing == "log") {
        g = FrequencyGrid::logarithmic(a.zmin, a.zmax, a.points);
    } else if (a.spacing == "linear") {
        g = FrequencyGrid::linear(a.zmin, a.zmax, a.points);
    } else {
        throw ValidationError("unknown spacing '" + a.spacing + "'");
    }
    const std::size_t n = g.values.size();
    std::vector<std::string> lines(n);
    std::atomic<std::size_t> next{0};
    constexpr std::size_t chunk = 4096;
    auto worker = [&]() {
        for (std::size_t c; (c = next.fetch_add(1)) * chunk < n;) {
            for (std::size_t i = c * chunk; i < std::min(n, (c + 1) * chunk); ++i) {
                const double x = g.values[i];
                const double z = physical ? x * a.T : x;
                const double Fz = F.value(z, prec);
                std::string line;
                if (physical) line = format_number(x) + ",";
                line += format_number(z) + "," + format_number(Fz) + "," + format_number(Fz / (x * x));
                if (a.ratio) {
                    const RatioValue r = F.ratio(z);
                    line += "," + (is_singular(r) ? std::string("singular") : format_number(std::get<double>(r)));
                }
                lines[i] = line + "\n";
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < a.jobs; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::string text = physical ? "omega,z,F,F_modified" : "z,F,F_modified";
    if (a.ratio) text += ",ratio";
    text += "\n";
    for (const auto& l : lines) text += l;
    emit(text, a.output, out);
    return 0;
}

SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig c;
    if (!j.is_object() || j.empty()) throw ValidationError("empty sweep config");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k == "num_qubits") c.num_qubits = it->get<int>();
            else if (k == "T") c.T = it->get<double>();
            else if (k == "alphas") c.alphas = it->get<std::vector<double>>();
            else if (k == "filters") c.filters = it->get<std::vector<std::string>>();
            else if (k == "nudd") c.nudd = it->get<std::vector<std::vector<int>>>();
            else if (k == "sdd") c.sdd = it->get<std::vector<int>>();
            else if (k == "pair_sdd") c.pair_sdd = it->get<bool>();
            else if (k == "tol") c.tol = it->get<double>();
            else throw ValidationError("unknown sweep config key '" + k + "'");
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed sweep config: ") + e.what());
    }
    return c;
}

int cmd_sweep(const std::string& config, const std::string& output, int jobs, std::ostream& out, std::ostream& err) {
    std::ifstream in(config);
    if (!in) throw ValidationError("cannot open config '" + config + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("cannot parse config: " + std::string(e.what()));
    }
    SweepConfig c = sweep_config_from_json(j);
    c.jobs = jobs;
    const auto rows = factor_sweep(c);
    emit(sweep_csv(rows), output, out);
    for (const auto& r : rows)
        if (!r.note.empty()) err << "warning: " << r.scheme << " " << r.filter << " alpha=" << r.alpha << ": " << r.note << "\n";
    return 0;
}

struct DiagnoseArgs {
    std::string schedule, topology = "common", filter, output;
    double scan_min = 250.0, scan_max = 1000.0, scan_step = 0.01;
};

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
    const PulseSchedule s = read_schedule_file(a.schedule);
    Topology topo;
    if (a.topology == "common") topo = Topology::Common;
    else if (a.topology == "independent") topo = Topology::Independent;
    else throw ValidationError("topology must be common or independent");
    std::string label = a.filter;
    if (label.empty()) label = (s.num_qubits >= 2) ? "F14" : "F12";
    if (label.size() == 3) label += (topo == Topology::Common ? "c" : "i");
    FilterSpec spec = parse_filter_label(label);
    if (spec.topology != topo) throw ValidationError("filter label topology does not match --topology");
    const FilterEvaluator F(spec, s);

    json rep;
    rep["filter"] = label;
    rep["topology"] = a.topology;
    rep["scheme"] = scheme_name(s.scheme);
    json warnings = json::array();

    try {
        const RolloffFit r = measure_rolloff(F);
        rep["rolloff"] = {{"db_per_octave", r.db_per_octave}, {"order", r.order()}, {"band", {r.z_min, r.z_max}},
                          {"r_squared", r.r_squared}};
    } catch (const PoorFit& e) {
        warnings.push_back(std::string("PoorFit: ") + e.what());
        rep["rolloff"] = {{"db_per_octave", e.fit.db_per_octave}, {"order", e.fit.order()},
                          {"band", {e.fit.z_min, e.fit.z_max}}, {"r_squared", e.fit.r_squared}};
    } catch (const std::exception& e) {
        warnings.push_back(std::string("rolloff: ") + e.what());
        rep["rolloff"] = nullptr;
    }

    if (!F.identically_zero()) {
        const double zpk_hi = std::max(100.0, 10.0 * std::numbers::pi * static_cast<double>(F.total_pulses() + 1));
        const Curve c = filter_curve(F, 0.1, zpk_hi, 2000);
        try {
            rep["peak"] = {{"z_peak", spectral_peak(c)}};
        } catch (const AmbiguousPeak& e) {
            warnings.push_back(std::string("AmbiguousPeak: ") + e.what());
            rep["peak"] = {{"z_peak", e.z_peak}};
        }
    } else {
        rep["peak"] = nullptr;
    }

    if (s.num_qubits <= 4) {
        json d = json::array();
        for (const auto& [mn, prot] : dfs_check(s, topo))
            d.push_back({{"m", mn.first}, {"n", mn.second}, {"protected", prot}});
        rep["dfs"] = d;
    }

    json sing;
    sing["scan"] = {a.scan_min, a.scan_max, a.scan_step};
    if (s.pulse_width > 0.0) {
        const SingularityScan sc = scan_singularities(F, a.scan_min, a.scan_max, a.scan_step);
        sing["detected"] = sc.markers;
    } else {
        sing["detected"] = json::array();
        warnings.push_back("ideal pulses: finite/ideal ratio is identically 1, no singularity scan");
    }
    if (s.scheme == Scheme::SDD) {
        std::vector<double> pred;
        const double base = 4.0 * s.sdd_pulses * std::numbers::pi;
        for (double z : sdd_singularity_grid(s.sdd_pulses, static_cast<int>(a.scan_max / base) + 1))
            if (z >= a.scan_min && z <= a.scan_max) pred.push_back(z);
        sing["predicted"] = pred;
    }
    rep["singularities"] = sing;
    rep["warnings"] = warnings;
    emit(rep.dump(2) + "\n", a.output, out);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamical-decoupling filter functions and decoherence factors"};
    app.require_subcommand(1);

    ScheduleArgs sa;
    auto* sch = app.add_subcommand("schedule", "build a pulse schedule (JSON)");
    sch->add_option("scheme", sa.scheme, "sdd | nudd | custom")->required()->check(CLI::IsMember({"sdd", "nudd", "custom"}));
    sch->add_option("--D", sa.D, "SDD pulses per qubit (even)");
    sch->add_option("--N", sa.N, "number of qubits (SDD)");
    sch->add_option("--counts", sa.counts, "NUDD level counts L_{N-1},...,L_0 (outermost first)");
    sch->add_option("--permutation", sa.permutation, "NUDD qubit carrying level 0,1,...");
    sch->add_option("--times", sa.times, "custom: comma separated times, once per qubit");
    sch->add_option("--T", sa.T, "total duration");
    sch->add_option("--width", sa.width, "pulse width tau_pi");
    sch->add_option("-o,--output", sa.output, "output file (default stdout)");

    FilterArgs fa;
    auto* fil = app.add_subcommand("filter", "filter function table (CSV)");
    fil->add_option("--schedule", fa.schedule, "schedule JSON")->required();
    fil->add_option("--filter", fa.filter, "label, e.g. F14c, F23c, F14i, F12c")->required();
    fil->add_option("--min", fa.zmin, "grid start");
    fil->add_option("--max", fa.zmax, "grid end");
    fil->add_option("--points", fa.points, "grid points");
    fil->add_option("--spacing", fa.spacing, "log | linear");
    fil->add_option("--step", fa.step, "fixed grid step (overrides --points)");
    fil->add_option("--preset", fa.preset, "named grid: fig4");
    fil->add_option("--T", fa.T, "grid values are physical omega; z = omega T");
    fil->add_flag("--ratio", fa.ratio, "append finite/ideal ratio column");
    fil->add_flag("--finite", fa.finite, "F column uses finite-width pulses");
    fil->add_option("--precision", fa.precision, "auto | double | precise");
    fil->add_option("--jobs", fa.jobs, "worker threads")->check(CLI::PositiveNumber);
    fil->add_option("-o,--output", fa.output, "output file (default stdout)");

    std::string sw_config, sw_output;
    int sw_jobs = 1;
    auto* swp = app.add_subcommand("sweep", "factor I sweep (CSV)");
    swp->add_option("--config", sw_config, "sweep config JSON")->required();
    swp->add_option("--jobs", sw_jobs, "worker threads")->check(CLI::PositiveNumber);
    swp->add_option("-o,--output", sw_output, "output file (default stdout)");

    DiagnoseArgs da;
    auto* dia = app.add_subcommand("diagnose", "rolloff, peak, DFS and singularity report (JSON)");
    dia->add_option("--schedule", da.schedule, "schedule JSON")->required();
    dia->add_option("--topology", da.topology, "common | independent");
    dia->add_option("--filter", da.filter, "filter label (default F14 with the topology suffix)");
    dia->add_option("--scan-min", da.scan_min, "singularity scan start");
    dia->add_option("--scan-max", da.scan_max, "singularity scan end");
    dia->add_option("--scan-step", da.scan_step, "singularity scan step");
    dia->add_option("-o,--output", da.output, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sch) return cmd_schedule(sa, out, err);
        if (*fil) return cmd_filter(fa, out);
        if (*swp) return cmd_sweep(sw_config, sw_output, sw_jobs, out, err);
        if (*dia) return cmd_diagnose(da, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DivergentIntegral& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace ddf
