// filters.cpp - filter assembly and finite-width ratio.
#include "ddf/filters.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace ddf {

int basis_digit(unsigned index, int qubit) { return static_cast<int>((index >> qubit) & 1u); }

std::string basis_ket(unsigned index, int num_qubits) {
    std::string k = "|";
    for (int j = num_qubits - 1; j >= 0; --j) k += basis_digit(index, j) ? 'd' : 'u';
    return k + ">";
}

unsigned basis_index(int label) {
    if (label < 1) throw ValidationError("basis labels start at 1");
    return static_cast<unsigned>(label - 1);
}

FilterSpec parse_filter_label(const std::string& label, PulseModel model) {
    FilterSpec f;
    f.pulse_model = model;
    if (label.size() != 4 || (label[0] != 'F' && label[0] != 'f') || !std::isdigit(static_cast<unsigned char>(label[1])) ||
        !std::isdigit(static_cast<unsigned char>(label[2])))
        throw ValidationError("unknown filter label '" + label + "'");
    const char t = static_cast<char>(std::tolower(static_cast<unsigned char>(label[3])));
    if (t == 'c')
        f.topology = Topology::Common;
    else if (t == 'i')
        f.topology = Topology::Independent;
    else
        throw ValidationError("unknown filter label '" + label + "'");
    const int a = label[1] - '0', b = label[2] - '0';
    if (a < 1 || b < 1) throw ValidationError("unknown filter label '" + label + "'");
    f.m = basis_index(a);
    f.n = basis_index(b);
    return f;
}

std::string filter_label(const FilterSpec& spec) {
    return "F" + std::to_string(spec.m + 1) + std::to_string(spec.n + 1) +
           (spec.topology == Topology::Common ? "c" : "i");
}

void validate_filter(const FilterSpec& spec, const PulseSchedule& s) {
    const unsigned dim = 1u << s.num_qubits;
    if (spec.m >= dim || spec.n >= dim)
        throw ValidationError("basis index out of range for " + std::to_string(s.num_qubits) + " qubit(s)");
}

FilterEvaluator::FilterEvaluator(const FilterSpec& spec, const PulseSchedule& s) : spec_(spec) {
    validate_filter(spec, s);
    const int N = s.num_qubits;
    width_ = s.pulse_width / s.total_duration;
    const auto ut = unit_times<mpreal>(s);
    double amp = 0.0;
    for (int j = 0; j < N; ++j) {
        total_pulses_ += s.times[static_cast<std::size_t>(j)].size();
        amp += 2.0 * static_cast<double>(s.times[static_cast<std::size_t>(j)].size()) + 2.0;
    }
    bound_ = amp * amp;

    auto append = [&](int j, double w, std::vector<mpreal>& t, std::vector<double>& c) {
        const auto& q = ut[static_cast<std::size_t>(j)];
        t.push_back(mpreal(0));
        c.push_back(w);
        t.push_back(mpreal(1));
        c.push_back(w * ((q.size() % 2 == 0) ? -1.0 : 1.0));
        for (std::size_t d = 0; d < q.size(); ++d) {
            t.push_back(q[d]);
            c.push_back(w * ((d % 2 == 0) ? -2.0 : 2.0));
        }
    };
    auto parity = [&](int j) {
        return (s.times[static_cast<std::size_t>(j)].size() % 2 == 0) ? -1.0 : 1.0;
    };

    if (spec.topology == Topology::Common) {
        Channel ch;
        std::vector<mpreal> t;
        std::vector<double> c;
        for (int j = 0; j < N; ++j) {
            const double w = basis_digit(spec.m, j) - basis_digit(spec.n, j);
            if (w == 0.0) continue;
            append(j, w, t, c);
            ch.beta0 += w;
            ch.beta1 += w * parity(j);
        }
        ch.sum = ExpSum(t, c);
        if (!ch.sum.empty()) channels_.push_back(std::move(ch));
    } else {
        for (int j = 0; j < N; ++j) {
            const double w = std::abs(basis_digit(spec.m, j) - basis_digit(spec.n, j));
            if (w == 0.0) continue;
            Channel ch;
            std::vector<mpreal> t;
            std::vector<double> c;
            append(j, 1.0, t, c);
            ch.sum = ExpSum(t, c);
            ch.beta0 = 1.0;
            ch.beta1 = parity(j);
            ch.weight = w;
            channels_.push_back(std::move(ch));
        }
    }
}

bool FilterEvaluator::identically_zero() const { return channels_.empty(); }

double FilterEvaluator::mean_value() const {
    double m = 0.0;
    for (const auto& ch : channels_) m += ch.weight * ch.sum.mean_square();
    return m;
}

double FilterEvaluator::eval(double z, Precision p, bool fin) const {
    double F = 0.0;
    for (const auto& ch : channels_) {
        SamplingValue g = ch.sum.eval(z, p);
        if (fin && width_ > 0.0) g = apply_finite_width(g, boundary_term(ch.beta0, ch.beta1, z), z, width_);
        F += ch.weight * std::norm(g);
    }
    return F;
}

double FilterEvaluator::value(double z, Precision p) const {
    return eval(z, p, spec_.pulse_model == PulseModel::FiniteWidth);
}
double FilterEvaluator::ideal(double z, Precision p) const { return eval(z, p, false); }
double FilterEvaluator::finite(double z, Precision p) const { return eval(z, p, true); }

RatioValue FilterEvaluator::ratio(double z) const {
    if (width_ == 0.0) return 1.0;
    double Fi = 0.0, Fr = 0.0;
    for (const auto& ch : channels_) {
        const SamplingValue g = ch.sum.eval(z, Precision::Auto);
        const SamplingValue gr = apply_finite_width(g, boundary_term(ch.beta0, ch.beta1, z), z, width_);
        Fi += ch.weight * std::norm(g);
        Fr += ch.weight * std::norm(gr);
    }
    if (Fi <= kSingularFloor || Fi <= kSingularRelative * Fr) return SingularityMarker{z};
    return Fr / Fi;
}

double filter_common(const FilterSpec& spec, const PulseSchedule& s, double z) {
    if (spec.topology != Topology::Common) throw ValidationError("filter_common needs common topology");
    return FilterEvaluator(spec, s).value(z);
}

double filter_independent(const FilterSpec& spec, const PulseSchedule& s, double z) {
    if (spec.topology != Topology::Independent)
        throw ValidationError("filter_independent needs independent topology");
    return FilterEvaluator(spec, s).value(z);
}

double modified_filter(const FilterSpec& spec, const PulseSchedule& s, double z) {
    if (!(z > 0.0)) throw ValidationError("modified filter needs z > 0");
    return FilterEvaluator(spec, s).value(z) / (z * z);
}

RatioValue ratio_finite_ideal(const FilterSpec& spec, const PulseSchedule& s, double z) {
    return FilterEvaluator(spec, s).ratio(z);
}

std::vector<double> sdd_singularity_grid(int D, int k_max) {
    if (D <= 0 || D % 2 != 0) throw ValidationError("D must be even");
    if (k_max < 1) throw ValidationError("k_max must be at least 1");
    std::vector<double> z;
    for (int k = 1; k <= k_max; ++k) z.push_back(4.0 * k * D * std::numbers::pi);
    return z;
}

}  // namespace ddf
