#ifndef URARQ_COMMANDS_HPP
#define URARQ_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "urarq/fbl_outage.hpp"
#include "urarq/mc_sim.hpp"
#include "urarq/record.hpp"
#include "urarq/throughput.hpp"

namespace urarq {

// Unit of the rate/payload values crossing the CLI boundary. Internally
// everything runs in nats; bits are converted on the way in and out.
enum class Unit { Nats, Bits };

double to_nats(double value, Unit unit);
double from_nats(double value, Unit unit);

enum class OutputFormat { Csv, Structured };

void write_table(const Table& table, OutputFormat format, std::ostream& os);

struct OutageCurveOptions {
    std::int64_t n = 200;
    std::string rate_list = "1,2,3";    // per-use rates in `unit`
    std::optional<double> payload;      // fixed K overriding the rate list
    std::string snr_db_list = "0:1:45";
    // Default: all three evaluators side by side. Set to restrict to one.
    std::optional<OutageMethod> method;
    Unit unit = Unit::Nats;
    QuadratureOptions quadrature{};
};
Table run_outage_curve(const OutageCurveOptions& opt);

struct AllocateOptions {
    int rounds = 2;
    double rate = 1.0;
    std::optional<double> payload;      // with n_list: sweep n at fixed K
    std::string eps_list = "0.001";
    std::string n_list = "200";
    std::optional<double> power_cap;    // post-check only, never enforced
    Unit unit = Unit::Nats;
};
Table run_allocate(const AllocateOptions& opt);

struct ThroughputCurveOptions {
    std::string m_list = "2";
    double rate = 1.0;
    std::int64_t n = 200;
    std::string eps_list = "0.001";
    std::string delay_list = "0";
    AccountingMode accounting = AccountingMode::RoundWeighted;
    Unit unit = Unit::Nats;
};
// One row per (m, eps, delay) triple. Serves both the eps sweep (fixed
// delay) and the delay sweep (fixed eps); delay-curve is this runner with a
// delay range.
Table run_throughput_curve(const ThroughputCurveOptions& opt);

struct SimulateOptions {
    int rounds = 2;
    double rate = 1.0;
    std::int64_t n = 200;
    double eps_target = 1e-3;
    std::string rho_list;               // inline policy; bypasses allocation
    double feedback_delay = 0.0;
    AccountingMode accounting = AccountingMode::RoundWeighted;
    DecodeRule rule = DecodeRule::Threshold;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    Unit unit = Unit::Nats;
};
Table run_simulate(const SimulateOptions& opt);

} // namespace urarq

#endif
