#ifndef URARQ_CHANNEL_HPP
#define URARQ_CHANNEL_HPP

#include <cmath>
#include <cstdint>

#include "urarq/errors.hpp"

namespace urarq {

// A block code of n channel uses carrying K information nats.
// rate is always K/n; the three fields are kept consistent on construction.
struct ChannelCode {
    std::int64_t n = 0;
    double K = 0.0;
    double rate = 0.0;

    static ChannelCode from_rate(std::int64_t n, double rate) {
        if (n <= 0) throw UsageError("blocklength must be positive");
        if (!(rate > 0.0)) throw UsageError("code rate must be positive");
        ChannelCode c;
        c.n = n;
        c.rate = rate;
        c.K = rate * static_cast<double>(n);
        return c;
    }

    static ChannelCode from_payload(std::int64_t n, double K) {
        if (n <= 0) throw UsageError("blocklength must be positive");
        if (!(K > 0.0)) throw UsageError("payload size must be positive");
        ChannelCode c;
        c.n = n;
        c.K = K;
        c.rate = K / static_cast<double>(n);
        return c;
    }
};

// Average transmit SNR. Stored in linear scale; dB accessors round-trip.
struct SnrPoint {
    double linear = 0.0;

    static SnrPoint from_linear(double rho) {
        if (!(rho > 0.0)) throw UsageError("SNR must be positive");
        return SnrPoint{rho};
    }

    static SnrPoint from_db(double db) {
        return SnrPoint{std::pow(10.0, db / 10.0)};
    }

    double db() const { return 10.0 * std::log10(linear); }
};

// Unit-mean exponential power gain (Rayleigh envelope).
struct GainDistribution {
    // P[Z <= z] for the squared-envelope gain Z ~ Exp(1).
    static double cdf(double z) { return z <= 0.0 ? 0.0 : -std::expm1(-z); }
    static double pdf(double z) { return z < 0.0 ? 0.0 : std::exp(-z); }
    // Quantile transform used by the simulator: u in (0,1) -> gain.
    static double quantile(double u) { return -std::log1p(-u); }
};

} // namespace urarq

#endif
