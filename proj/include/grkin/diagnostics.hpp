// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "grkin/phase_grid.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace grkin {

/// One row of scalar diagnostics at time t.
struct DiagnosticsRecord {
    double t = 0.0;
    double H = 0.0;
    double D1 = 0.0;
    double D2 = 0.0;
    double D3 = 0.0;
    double Gamma = 0.0;
    double dist2 = 0.0;    ///< ||F - F_inf||^2
    double micro2 = 0.0;   ///< ||(I - Pi) F||^2
    double R2 = 0.0;       ///< ||R(F)||^2
    double massdiff = 0.0; ///< int int (f1 - f2)
    double r1min = 0.0, r1max = 0.0, r2min = 0.0, r2max = 0.0;
    double coupling = 0.0; ///< <A(F - F_inf), F - F_inf>
};

/// Relative entropy sum_i int int [f_i (ln(f_i / f_i_inf) - 1) + f_i_inf].
[[nodiscard]] double entropy_H(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid);

/// Thermalization dissipations D_i = int int (f_i - rho_i chi_i) ln(f_i / (rho_i chi_i)),
/// without the sigma factor.
struct ThermalDissipation {
    double D1 = 0.0;
    double D2 = 0.0;
};
[[nodiscard]] ThermalDissipation dissipation_D12(const StatePair &F, const PhaseGrid &grid);

/// Reaction dissipation int int int (f1 f2' - chi1 chi2') ln(f1 f2' / (chi1 chi2')), evaluated
/// in O(nx n_v) through u_i = ln(f_i / chi_i):
///   D3 = int_x [rho2 int f1 u1 + rho1 int f2 u2 - int chi1 u1 - int chi2 u2].
[[nodiscard]] double dissipation_D3(const StatePair &F, const PhaseGrid &grid);

/// R(F) = (chi1 - rho2 f1, chi2 - rho1 f2).
[[nodiscard]] StatePair reaction_R(const StatePair &F, const PhaseGrid &grid);

/// Free transport T F = v . grad_x F, spectral in x.
[[nodiscard]] StatePair transport_apply(const StatePair &F, const PhaseGrid &grid);

/// A = [I + (T Pi)^*(T Pi)]^{-1} (T Pi)^*: with J_i = int v f_i, solves
/// (1 - theta_i Lap) w_i = -div J_i on the torus and returns (chi1 w1, chi2 w2).
[[nodiscard]] StatePair operator_A_apply(const StatePair &F, const PhaseGrid &grid);

/// Weighted adjoint of A: solves (1 - theta_i Lap) u_i = rho_i[G], returns (chi_i v . grad u_i).
[[nodiscard]] StatePair operator_Astar_apply(const StatePair &G, const PhaseGrid &grid);

/// Gamma = H + delta <A(F - F_inf), F - F_inf>.
[[nodiscard]] double modified_entropy_Gamma(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid,
                                            double delta);

/// Every scalar of a DiagnosticsRecord for one state.
[[nodiscard]] DiagnosticsRecord compute_record(const StatePair &F, const EquilibriumState &eq, const PhaseGrid &grid,
                                               double delta);

struct InequalityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; ///< signed slack, >= 0 (up to the stated tolerance) when passing
    bool passed = false;
};

struct InequalityReport {
    std::vector<InequalityCheck> checks;

    [[nodiscard]] bool all_passed() const noexcept;
    [[nodiscard]] const InequalityCheck &at(const std::string &name) const;
};

/// Parameter-free inequalities of the hypocoercivity argument:
///   atpi_positivity:  <A T Pi F, F - F_inf> >= 0
///   a_bound:          ||A(F - F_inf)|| <= ||F - F_inf|| / 2
///   d3_vs_r:          D3 >= c1 ||R(F)||^2, c1 = 1 / ((rho1_inf + rho2_inf) max(1, r1max r2max))
///   taf_bound:        |<T A F, F>| <= ||(I - Pi) F||^2
///   r_decomposition:  ||R(F)||^2 >= c2 int (1 - rho1 rho2)^2 + c3 ||(I - Pi) F||^2,
///                     c2 = rho1_inf + rho2_inf, c3 = min rho_i^2
[[nodiscard]] InequalityReport verify_inequalities(const StatePair &F, const EquilibriumState &eq,
                                                   const PhaseGrid &grid);

struct DecayFit {
    double lambda = 0.0;     ///< -slope of ln Gamma vs t
    double r_squared = 0.0;
    double lambda_dist = 0.0; ///< -slope of ln ||F - F_inf||^2
    double r_squared_dist = 0.0;
    std::size_t points = 0;
    bool at_equilibrium = false; ///< Gamma vanished in the window; lambda = +inf
};

/// Least-squares fit of ln Gamma (and ln dist2) against t over records with t in
/// [t_begin, t_end]. Needs at least 10 records with Gamma > zero_floor unless the
/// whole window sits at equilibrium.
[[nodiscard]] DecayFit decay_rate_fit(const std::vector<DiagnosticsRecord> &records, double t_begin, double t_end,
                                      double zero_floor = 1e-24);

/// Fit over the second half of the recorded time span.
[[nodiscard]] DecayFit decay_rate_fit_tail(const std::vector<DiagnosticsRecord> &records);

struct EntropyBalance {
    double max_relative_mismatch = 0.0;
    double max_absolute_mismatch = 0.0;
    double t_worst = 0.0;
    std::size_t points = 0;
};

/// Central-difference dH/dt against -sigma (D1 + D2) - D3 at interior records.
[[nodiscard]] EntropyBalance entropy_balance_check(const std::vector<DiagnosticsRecord> &records, double sigma,
                                                   double floor = 1e-14);

struct DeltaSweepRow {
    double delta = 0.0;
    bool monotone = false;
    double worst_increase = 0.0; ///< largest Gamma(t_{k+1}) - Gamma(t_k), <= 0 when monotone
    DecayFit fit;
};

/// Re-evaluates Gamma = H + delta * coupling along recorded rows for each delta.
[[nodiscard]] std::vector<DeltaSweepRow> delta_sweep(const std::vector<DiagnosticsRecord> &records,
                                                     const std::vector<double> &deltas);

/// True when Gamma never increases between consecutive records by more than
/// slack * |Gamma(0)| + noise_floor.
[[nodiscard]] bool gamma_monotone(const std::vector<DiagnosticsRecord> &records, double slack = 1e-12,
                                  double noise_floor = 1e-14);

// ---- record sinks --------------------------------------------------------------------

class RecordSink {
public:
    virtual ~RecordSink() = default;
    virtual void write(const DiagnosticsRecord &record) = 0;
};

class MemorySink final : public RecordSink {
public:
    void write(const DiagnosticsRecord &record) override { records.push_back(record); }
    std::vector<DiagnosticsRecord> records;
};

/// CSV with header "t,H,D1,D2,D3,Gamma,dist2,micro2,R2,massdiff,r1min,r1max,r2min,r2max,coupling"
/// and %.17g values.
class CsvSink final : public RecordSink {
public:
    explicit CsvSink(const std::string &path);
    void write(const DiagnosticsRecord &record) override;

    static const char *header();
    static std::string format_row(const DiagnosticsRecord &record);

private:
    std::ofstream out_;
};

/// Forwards to several sinks.
class TeeSink final : public RecordSink {
public:
    TeeSink(RecordSink &a, RecordSink &b) : a_(a), b_(b) {}
    void write(const DiagnosticsRecord &record) override
    {
        a_.write(record);
        b_.write(record);
    }

private:
    RecordSink &a_;
    RecordSink &b_;
};

[[nodiscard]] std::vector<DiagnosticsRecord> read_records_csv(const std::string &path);

} // namespace grkin
