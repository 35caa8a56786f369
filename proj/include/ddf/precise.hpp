// precise.hpp - exponential sums sum_a c_a exp(-i z t_a) with a multiprecision fallback.
//
// Double precision bottoms out near eps * sum|c_a| which hides the deep low-z nulls
// of high-order sequences. The precise path keeps the times in 100 digit floats and
// evaluates either a centred moment series (small |z|) or the direct sum.
#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

namespace ddf {

using mpreal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>,
                                             boost::multiprecision::et_off>;

enum class Precision { Double, Precise, Auto };

class ExpSum {
public:
    ExpSum() = default;
    // t in units of T (usually [0,1]); equal times are merged, zero coefficients dropped.
    ExpSum(const std::vector<mpreal>& t, const std::vector<double>& c);

    bool empty() const { return td_.empty(); }
    std::size_t size() const { return td_.size(); }
    const std::vector<double>& times() const { return td_; }
    const std::vector<double>& coeffs() const { return c_; }

    double abs_coeff_sum() const { return abs_sum_; }
    // Oscillation mean of |sum|^2 for distinct times.
    double mean_square() const;

    std::complex<double> eval_double(double z) const;
    std::complex<double> eval_precise(double z) const;
    std::complex<double> eval(double z, Precision p = Precision::Auto) const;

    // Rough absolute error of eval_double at z.
    double double_error(double z) const;

    // Threshold used by Auto: precise when |f| < kAutoFactor * double_error(z).
    static constexpr double kAutoFactor = 1e6;
    static constexpr double kSeriesLimit = 64.0;
    // Above this |z| t_max the double path reduces phases in extended precision.
    static constexpr double kExtendedPhase = 64.0;

private:
    struct Series;
    const Series& series() const;

    std::vector<double> td_, tlo_, c_;  // tlo_: t - double(t)
    double tmax_ = 0.0;
    std::vector<mpreal> tm_;
    double abs_sum_ = 0.0;
    std::shared_ptr<Series> series_;
};

}  // namespace ddf
