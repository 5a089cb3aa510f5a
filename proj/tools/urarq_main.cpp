#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "urarq/commands.hpp"
#include "urarq/errors.hpp"

namespace {

struct OutputOptions {
    std::string path;
    urarq::OutputFormat format = urarq::OutputFormat::Csv;
};

void add_output_options(CLI::App* sub, OutputOptions* out) {
    sub->add_option("--out", out->path,
                    "write results to this file instead of stdout");
    sub->add_option("--format", out->format, "output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, urarq::OutputFormat>{
                {"csv", urarq::OutputFormat::Csv},
                {"structured", urarq::OutputFormat::Structured}},
            CLI::ignore_case));
}

void add_unit_option(CLI::App* sub, urarq::Unit* unit) {
    sub->add_option("--unit", *unit, "unit of rate and payload values")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, urarq::Unit>{{"nats", urarq::Unit::Nats},
                                               {"bits", urarq::Unit::Bits}},
            CLI::ignore_case));
}

void add_accounting_option(CLI::App* sub, urarq::AccountingMode* mode) {
    sub->add_option("--accounting", *mode,
                    "channel-use accounting for throughput")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, urarq::AccountingMode>{
                {"round-weighted", urarq::AccountingMode::RoundWeighted},
                {"expectation", urarq::AccountingMode::Expectation}},
            CLI::ignore_case));
}

int emit(const urarq::Table& table, const OutputOptions& out) {
    if (out.path.empty()) {
        urarq::write_table(table, out.format, std::cout);
        return 0;
    }
    std::ofstream os(out.path, std::ios::binary);
    if (!os) {
        std::cerr << "error: cannot open '" << out.path << "' for writing\n";
        return 2;
    }
    urarq::write_table(table, out.format, os);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rayleigh-fading ARQ toolkit: finite-blocklength outage, "
                 "optimal per-round power allocation, throughput with "
                 "feedback delay, and Monte Carlo validation"};
    app.require_subcommand(1);

    urarq::OutageCurveOptions oc;
    OutputOptions oc_out;
    double oc_payload = 0.0;
    std::string oc_model;
    CLI::App* oc_cmd =
        app.add_subcommand("outage-curve", "outage probability vs SNR");
    oc_cmd->add_option("--n", oc.n, "blocklength in channel uses")
        ->check(CLI::PositiveNumber);
    oc_cmd->add_option("--rate", oc.rate_list,
                       "code rates per channel use: value, list, or range");
    CLI::Option* oc_k = oc_cmd->add_option(
        "--k", oc_payload, "payload size (overrides --rate)");
    oc_cmd->add_option("--snr-db", oc.snr_db_list,
                       "SNR grid in dB: value, list, or start:step:stop");
    oc_cmd
        ->add_option("--model", oc_model,
                     "restrict to one outage model (default: all three)")
        ->check(CLI::IsMember({"integral", "closed", "asymptotic"},
                              CLI::ignore_case));
    oc_cmd->add_option("--rel-tol", oc.quadrature.rel_tol,
                       "integral model relative tolerance");
    oc_cmd->add_option("--abs-tol", oc.quadrature.abs_tol,
                       "integral model absolute tolerance");
    oc_cmd->add_option("--max-evals", oc.quadrature.max_evals,
                       "integral model evaluation budget");
    add_unit_option(oc_cmd, &oc.unit);
    add_output_options(oc_cmd, &oc_out);

    urarq::AllocateOptions al;
    OutputOptions al_out;
    double al_payload = 0.0;
    CLI::App* al_cmd = app.add_subcommand(
        "allocate", "optimal per-round power allocation for a drop target");
    al_cmd->add_option("--m", al.rounds, "number of ARQ rounds")
        ->check(CLI::PositiveNumber);
    al_cmd->add_option("--rate", al.rate, "code rate per channel use");
    CLI::Option* al_k = al_cmd->add_option(
        "--k", al_payload, "payload size; rate becomes k/n per grid point");
    al_cmd->add_option("--eps", al.eps_list,
                       "target drop probabilities: value, list, or range");
    al_cmd->add_option("--n", al.n_list,
                       "blocklengths: value, list, or range");
    al_cmd->add_option("--cap", al.power_cap,
                       "flag rounds whose SNR exceeds this cap");
    add_unit_option(al_cmd, &al.unit);
    add_output_options(al_cmd, &al_out);

    urarq::ThroughputCurveOptions tc;
    OutputOptions tc_out;
    CLI::App* tc_cmd = app.add_subcommand(
        "throughput-curve", "throughput of the optimal allocation");
    urarq::ThroughputCurveOptions dc;
    dc.delay_list = "0:10:200";
    OutputOptions dc_out;
    CLI::App* dc_cmd = app.add_subcommand(
        "delay-curve", "throughput swept over the feedback delay");
    auto add_tc_options = [](CLI::App* cmd, urarq::ThroughputCurveOptions* o) {
        cmd->add_option("--m", o->m_list,
                        "ARQ round counts: value, list, or range");
        cmd->add_option("--rate", o->rate, "code rate per channel use");
        cmd->add_option("--n", o->n, "blocklength in channel uses")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--eps", o->eps_list,
                        "target drop probabilities: value, list, or range");
        cmd->add_option("--delay", o->delay_list,
                        "feedback delays in channel uses: value, list, or range");
        add_accounting_option(cmd, &o->accounting);
        add_unit_option(cmd, &o->unit);
    };
    add_tc_options(tc_cmd, &tc);
    add_output_options(tc_cmd, &tc_out);
    add_tc_options(dc_cmd, &dc);
    add_output_options(dc_cmd, &dc_out);

    urarq::SimulateOptions si;
    OutputOptions si_out;
    CLI::App* si_cmd = app.add_subcommand(
        "simulate", "Monte Carlo run of the ARQ scheme");
    si_cmd->add_option("--m", si.rounds, "number of ARQ rounds")
        ->check(CLI::PositiveNumber);
    si_cmd->add_option("--rate", si.rate, "code rate per channel use");
    si_cmd->add_option("--n", si.n, "blocklength in channel uses")
        ->check(CLI::PositiveNumber);
    si_cmd->add_option("--eps", si.eps_target, "target drop probability");
    si_cmd->add_option("--rho", si.rho_list,
                       "explicit SNRs, one per round (skips the allocator)");
    si_cmd->add_option("--delay", si.feedback_delay,
                       "feedback delay in channel uses");
    si_cmd->add_option("--rule", si.rule, "decode rule")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, urarq::DecodeRule>{
                {"threshold", urarq::DecodeRule::Threshold},
                {"fbl", urarq::DecodeRule::FiniteBlocklength}},
            CLI::ignore_case));
    si_cmd->add_option("--trials", si.trials, "Monte Carlo trial count")
        ->check(CLI::PositiveNumber);
    si_cmd->add_option("--seed", si.seed, "random seed");
    si_cmd->add_option("--workers", si.workers, "worker thread count")
        ->check(CLI::Range(1, 256));
    add_accounting_option(si_cmd, &si.accounting);
    add_unit_option(si_cmd, &si.unit);
    add_output_options(si_cmd, &si_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (oc_cmd->parsed()) {
            if (oc_k->count() > 0) oc.payload = oc_payload;
            if (!oc_model.empty()) {
                if (oc_model == "integral") {
                    oc.method = urarq::OutageMethod::Integral;
                } else if (oc_model == "closed") {
                    oc.method = urarq::OutageMethod::ClosedForm;
                } else {
                    oc.method = urarq::OutageMethod::Asymptotic;
                }
            }
            return emit(urarq::run_outage_curve(oc), oc_out);
        }
        if (al_cmd->parsed()) {
            if (al_k->count() > 0) al.payload = al_payload;
            return emit(urarq::run_allocate(al), al_out);
        }
        if (tc_cmd->parsed()) {
            return emit(urarq::run_throughput_curve(tc), tc_out);
        }
        if (dc_cmd->parsed()) {
            return emit(urarq::run_throughput_curve(dc), dc_out);
        }
        if (si_cmd->parsed()) {
            return emit(urarq::run_simulate(si), si_out);
        }
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const urarq::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const urarq::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const urarq::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << "\n";
        return 1;
    }
}
