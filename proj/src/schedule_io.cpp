// schedule_io.cpp - JSON schedules and CSV helpers.
#include "ddf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ddf {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json schedule_to_json(const PulseSchedule& s) {
    nlohmann::json j;
    j["num_qubits"] = s.num_qubits;
    j["total_duration"] = s.total_duration;
    j["pulse_width"] = s.pulse_width;
    j["scheme"] = scheme_name(s.scheme);
    j["times"] = s.times;
    return j;
}

namespace {

bool same_times(const PulseSchedule& a, const PulseSchedule& b) {
    const double tol = 1e-12 * a.total_duration;
    if (a.times.size() != b.times.size()) return false;
    for (std::size_t j = 0; j < a.times.size(); ++j) {
        if (a.times[j].size() != b.times[j].size()) return false;
        for (std::size_t d = 0; d < a.times[j].size(); ++d)
            if (std::abs(a.times[j][d] - b.times[j][d]) > tol) return false;
    }
    return true;
}

// Try to recover level counts (and qubit assignment) of a NUDD layout.
bool infer_nudd(PulseSchedule& s) {
    const int N = s.num_qubits;
    std::vector<int> perm(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) perm[static_cast<std::size_t>(i)] = i;
    const bool try_all = N <= 4;
    do {
        // level n on qubit perm[n]; counts outermost first
        std::vector<int> counts;
        std::size_t outer = 1;
        bool ok = true;
        for (int n = N - 1; n >= 0; --n) {
            const std::size_t c = s.times[static_cast<std::size_t>(perm[static_cast<std::size_t>(n)])].size();
            if (c % outer != 0) {
                ok = false;
                break;
            }
            const int L = static_cast<int>(c / outer);
            counts.push_back(L);
            outer *= static_cast<std::size_t>(L + 1);
        }
        if (ok) {
            try {
                bool identity = true;
                for (int i = 0; i < N; ++i) identity = identity && perm[static_cast<std::size_t>(i)] == i;
                PulseSchedule r = nudd_schedule(counts, s.total_duration, s.pulse_width,
                                                identity ? std::vector<int>{} : perm);
                if (same_times(r, s)) {
                    s.nudd_counts = r.nudd_counts;
                    s.nudd_qubit = r.nudd_qubit;
                    s.degenerate_levels = r.degenerate_levels;
                    s.times = r.times;
                    return true;
                }
            } catch (const ValidationError&) {
            }
        }
    } while (try_all && std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace

PulseSchedule schedule_from_json(const nlohmann::json& j) {
    for (const char* key : {"num_qubits", "total_duration", "pulse_width", "scheme", "times"})
        if (!j.contains(key)) throw ValidationError(std::string("schedule JSON missing field '") + key + "'");
    PulseSchedule s;
    try {
        s.num_qubits = j.at("num_qubits").get<int>();
        s.total_duration = j.at("total_duration").get<double>();
        s.pulse_width = j.at("pulse_width").get<double>();
        s.scheme = parse_scheme(j.at("scheme").get<std::string>());
        s.times = j.at("times").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed schedule JSON: ") + e.what());
    }
    validate(s);
    if (s.scheme == Scheme::SDD) {
        const int D = static_cast<int>(s.times[0].size());
        PulseSchedule r = sdd_schedule(s.num_qubits, D, s.total_duration, s.pulse_width);
        if (same_times(r, s)) return r;
        throw ValidationError("SDD schedule times do not follow the (2d-1)T/2D layout");
    }
    if (s.scheme == Scheme::NUDD && !infer_nudd(s))
        throw ValidationError("NUDD schedule times do not follow a nested UDD layout");
    return s;
}

void write_schedule_file(const PulseSchedule& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << schedule_to_json(s).dump(2) << "\n";
}

PulseSchedule read_schedule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open schedule file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("cannot parse '" + path + "': " + e.what());
    }
    return schedule_from_json(j);
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t columns) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
                row.push_back(v);
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (rows.empty() && lineno == 1) continue;  // header
            throw ValidationError(path + ":" + std::to_string(lineno) + ": non-numeric field");
        }
        if (row.size() != columns)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                                  " columns");
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ddf
