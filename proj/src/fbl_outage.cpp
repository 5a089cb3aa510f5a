#include "urarq/fbl_outage.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "urarq/errors.hpp"

namespace urarq {

double shannon_capacity(double snr) { return std::log1p(snr); }

double channel_dispersion(double snr) {
    const double onep = 1.0 + snr;
    return snr * (2.0 + snr) / (onep * onep);
}

double gaussian_q(double x) { return std::erfc(x / std::sqrt(2.0)) / 2.0; }

double rate_constant(double rate) { return std::expm1(rate); }

namespace {

// sinh(x)/x - 1 without cancellation near zero.
double sinhc_m1(double x) {
    const double x2 = x * x;
    if (std::fabs(x) < 1e-4) {
        return (x2 / 6.0) * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
    }
    return std::sinh(x) / x - 1.0;
}

} // namespace

double outage_fbl_integral(const ChannelCode& code, const SnrPoint& snr,
                           const QuadratureOptions& opt) {
    const double rho = snr.linear;
    const double rate = code.rate;
    const double sqrt_n = std::sqrt(static_cast<double>(code.n));

    auto integrand = [&](double z) {
        const double x = rho * z;
        const double v = channel_dispersion(x);
        if (v <= 0.0) return std::exp(-z); // z ~ 0 and capacity below rate
        const double arg = sqrt_n * (shannon_capacity(x) - rate) / std::sqrt(v);
        return std::exp(-z) * gaussian_q(arg);
    };

    // Everything beyond z_cut contributes at most exp(-z_cut) in absolute
    // terms, which is held three decades under the absolute tolerance.
    const double z_cut =
        std::min(700.0, -std::log(std::max(opt.abs_tol, 1e-300) * 1e-3));

    // The decoder error transitions from 1 to 0 around the capacity crossing
    // z0 over a width of order 1/delta; seed panel edges there so the
    // refinement does not have to discover a narrow feature on its own.
    const double phi = rate_constant(rate);
    const double z0 = phi / rho;
    const double width = std::sqrt(std::expm1(2.0 * rate)) / (sqrt_n * rho);
    std::vector<double> breaks;
    for (double t : {-6.0, -2.0, 0.0, 2.0, 6.0, 20.0}) {
        breaks.push_back(z0 + t * width);
    }
    breaks.push_back(std::max(1.0, 5.0 * z0));

    QuadratureResult res = integrate(integrand, 0.0, z_cut, opt, breaks);
    if (!res.converged) {
        const double achieved =
            res.value != 0.0 ? res.error / std::fabs(res.value) : res.error;
        throw NumericalError("outage integral did not converge", achieved);
    }
    return std::clamp(res.value, 0.0, 1.0);
}

OutageValue outage_fbl_closed(const ChannelCode& code, const SnrPoint& snr) {
    const double rho = snr.linear;
    const double kappa = rate_constant(code.rate) / rho;
    const double delta =
        rho * std::sqrt(static_cast<double>(code.n) /
                        std::expm1(2.0 * code.rate));
    const double x = std::sqrt(M_PI / 2.0) / delta;

    // 1 - exp(-kappa)*sinh(x)/x. For moderate x, group the terms so the
    // small-outage regime is a sum of like-signed small quantities instead
    // of a difference of values near one. For large x (tiny n*rho^2) sinh
    // overflows, so evaluate the product in log domain instead.
    double raw;
    if (x < 30.0) {
        raw = -std::expm1(-kappa) - std::exp(-kappa) * sinhc_m1(x);
    } else {
        const double log_term =
            -kappa + x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
        // log_term >= 0 means the raw expression is nonpositive; any
        // negative stand-in yields the same clamped, flagged result.
        raw = log_term >= 0.0 ? -1.0 : -std::expm1(log_term);
    }

    OutageValue out;
    out.probability = std::clamp(raw, 0.0, 1.0);
    out.clamped = raw < 0.0 || raw > 1.0;
    return out;
}

double outage_asymptotic(double rate, const SnrPoint& snr, bool linearized) {
    const double ratio = rate_constant(rate) / snr.linear;
    if (linearized) return std::min(ratio, 1.0);
    return -std::expm1(-ratio);
}

double outage(const ChannelCode& code, const SnrPoint& snr,
              const OutageModel& model) {
    switch (model.method) {
        case OutageMethod::Integral:
            return outage_fbl_integral(code, snr, model.quadrature);
        case OutageMethod::ClosedForm:
            return outage_fbl_closed(code, snr).probability;
        case OutageMethod::Asymptotic:
            return outage_asymptotic(code.rate, snr, model.linearized);
    }
    throw UsageError("unknown outage method");
}

SnrPoint snr_for_outage(const ChannelCode& code, double target_outage,
                        const OutageModel& model) {
    if (!(target_outage > 0.0) || !(target_outage < 1.0)) {
        throw UsageError("target outage must lie strictly inside (0,1)");
    }

    auto eval = [&](double log_rho) {
        return outage(code, SnrPoint{std::exp(log_rho)}, model);
    };

    // Start from the infinite-blocklength answer and grow the bracket
    // geometrically; outage decreases monotonically in SNR.
    double lo = std::log(rate_constant(code.rate) / target_outage);
    double hi = lo;
    int guard = 0;
    while (eval(lo) < target_outage) {
        lo -= 2.0;
        if (++guard > 600) {
            throw NumericalError("SNR bracket search failed (low side)", 0.0);
        }
    }
    guard = 0;
    while (eval(hi) > target_outage) {
        hi += 2.0;
        if (++guard > 600) {
            throw NumericalError("SNR bracket search failed (high side)", 0.0);
        }
    }

    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) > target_outage) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return SnrPoint{std::exp(0.5 * (lo + hi))};
}

} // namespace urarq
