#pragma once

#include <string>
#include <vector>

namespace rlwfem {

/** Parsed run options shared by the study commands; unset numeric fields are negative
 *  and resolved to per-command defaults. */
struct RunConfig {
    std::vector<int> degrees;  // --k
    std::vector<int> cells;    // --N, shared across degrees when given
    double domain_a = 0.0, domain_b = 0.0;  // equal: use the command default
    double dt = -1.0;
    double t_end = -1.0;
    int relax = -1;  // -1 unset, 0 off, 1 on
    int record_every = -1;
    bool paper_scale = false;
    std::string out_path;  // empty: stdout
};

/** CSV-serializable result table: "# key: value" comment lines echoing the resolved
 *  configuration, one header row, then numeric rows (%.17g, NaN as empty field). */
struct RateTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
};

RateTable parse_csv(const std::string& text);

/// Convergence rate of the pair (e_prev, N_prev) -> (e_cur, N_cur) on a log-log scale.
double pairwise_rate(double e_prev, double e_cur, double n_prev, double n_cur);

/// Projected-derivative defect rates of the L2 projection, swept over (k, N).
RateTable cmd_dichotomy_rates(const RunConfig& cfg);
/// Forced manufactured-solution convergence of the mixed solver at the final time.
RateTable cmd_rlw_convergence(const RunConfig& cfg);
/// Invariant drift time series of one relaxed (or plain) Gaussian run.
RateTable cmd_conservation(const RunConfig& cfg);
/// Worst-case impulse drift rates over (k, N) for the Gaussian run.
RateTable cmd_impulse_rates(const RunConfig& cfg);

/// Serialize to cfg.out_path or stdout.
void write_table(const RateTable& table, const std::string& out_path);

}  // namespace rlwfem
