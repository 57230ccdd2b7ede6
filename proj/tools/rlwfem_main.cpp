#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rlwfem/errors.hpp"
#include "rlwfem/experiments.hpp"

namespace {

using CommandFn = rlwfem::RateTable (*)(const rlwfem::RunConfig&);

struct CliState {
    rlwfem::RunConfig cfg;
    std::vector<double> domain;
    CommandFn command = nullptr;
};

enum : unsigned {
    kTimeOpts = 1u << 0,
    kRelaxOpts = 1u << 1,
    kRecordOpts = 1u << 2,
    kDomainOpts = 1u << 3,
};

CLI::App* add_command(CLI::App& app, CliState& st, const char* name, const char* desc,
                      CommandFn fn, unsigned opts) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--k", st.cfg.degrees, "FE degrees (comma separated)")->delimiter(',');
    cmd->add_option("--N", st.cfg.cells, "cell counts (comma separated)")->delimiter(',');
    if (opts & kDomainOpts)
        cmd->add_option("--domain", st.domain, "periodic domain endpoints a,b")->delimiter(',');
    if (opts & kTimeOpts) {
        cmd->add_option("--dt", st.cfg.dt, "time step (default: per-command policy)");
        cmd->add_option("--t-end", st.cfg.t_end, "final time");
    }
    if (opts & kRelaxOpts) {
        cmd->add_flag_callback(
            "--relax", [&st] { st.cfg.relax = 1; }, "enable energy relaxation");
        cmd->add_flag_callback(
            "--no-relax", [&st] { st.cfg.relax = 0; }, "disable energy relaxation");
    }
    if (opts & kRecordOpts)
        cmd->add_option("--record-every", st.cfg.record_every, "record every n-th step");
    cmd->add_option("--out", st.cfg.out_path, "output CSV path (default: stdout)");
    cmd->add_flag("--paper-scale", st.cfg.paper_scale, "use the full-size study grids");
    cmd->callback([&st, fn] { st.command = fn; });
    return cmd;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Periodic Lagrange FE studies: projected-derivative defect rates and an "
        "energy-conservative RLW solver"};
    app.require_subcommand(1);

    CliState st;
    add_command(app, st, "dichotomy-rates",
                "Rates of ||P[(Pu - u)']|| for the L2 projection over (k, N)",
                rlwfem::cmd_dichotomy_rates, kDomainOpts);
    add_command(app, st, "rlw-converge",
                "Manufactured-solution convergence of the mixed RLW solver",
                rlwfem::cmd_rlw_convergence, kTimeOpts | kRelaxOpts | kDomainOpts);
    add_command(app, st, "conserve", "Invariant drift time series of one Gaussian run",
                rlwfem::cmd_conservation,
                kTimeOpts | kRelaxOpts | kRecordOpts | kDomainOpts);
    add_command(app, st, "impulse-rates", "Worst-case impulse drift rates over (k, N)",
                rlwfem::cmd_impulse_rates,
                kTimeOpts | kRelaxOpts | kRecordOpts | kDomainOpts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit clean; parse errors are config errors
    }

    try {
        if (!st.domain.empty()) {
            if (st.domain.size() != 2)
                throw std::invalid_argument("--domain expects exactly two values a,b");
            st.cfg.domain_a = st.domain[0];
            st.cfg.domain_b = st.domain[1];
            if (!(st.cfg.domain_b > st.cfg.domain_a))
                throw std::invalid_argument("--domain requires a < b");
        }
        rlwfem::RateTable table = st.command(st.cfg);
        rlwfem::write_table(table, st.cfg.out_path);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const rlwfem::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
