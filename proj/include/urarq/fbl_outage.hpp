#ifndef URARQ_FBL_OUTAGE_HPP
#define URARQ_FBL_OUTAGE_HPP

#include "urarq/channel.hpp"
#include "urarq/quadrature.hpp"

namespace urarq {

// AWGN channel capacity at the given SNR, in nats per channel use.
double shannon_capacity(double snr);

// Channel dispersion V = 1 - (1+snr)^-2, evaluated in a form that keeps
// precision for small snr.
double channel_dispersion(double snr);

// Gaussian tail probability Q(x) = P[N(0,1) > x].
double gaussian_q(double x);

// phi = e^R - 1, the gain threshold scale for rate R (nats).
double rate_constant(double rate);

enum class OutageMethod { Integral, ClosedForm, Asymptotic };

struct OutageModel {
    OutageMethod method = OutageMethod::Integral;
    // Asymptotic only: phi/rho if true, else the exact Rayleigh 1-e^(-phi/rho).
    bool linearized = true;
    QuadratureOptions quadrature{};
};

struct OutageValue {
    double probability = 0.0;
    bool clamped = false; // raw expression left [0,1] and was pulled back
};

// Finite-blocklength outage over the Rayleigh fade, as an expectation of the
// normal-approximation error probability over the gain distribution.
// Throws NumericalError if the quadrature cannot reach its tolerance.
double outage_fbl_integral(const ChannelCode& code, const SnrPoint& snr,
                           const QuadratureOptions& opt = {});

// Closed-form approximation of the same expectation. The raw expression can
// go negative when n*rho^2 is small; the clamped flag reports that case.
OutageValue outage_fbl_closed(const ChannelCode& code, const SnrPoint& snr);

// High-SNR outage of an infinite-blocklength code at the given rate.
double outage_asymptotic(double rate, const SnrPoint& snr,
                         bool linearized = true);

// Dispatch on model; clamping in the closed form is applied silently here.
double outage(const ChannelCode& code, const SnrPoint& snr,
              const OutageModel& model);

// Inverse of outage() in the SNR argument: the SNR at which the model meets
// the target outage. Bisection on log-SNR; outage is monotone in SNR.
SnrPoint snr_for_outage(const ChannelCode& code, double target_outage,
                        const OutageModel& model);

} // namespace urarq

#endif
