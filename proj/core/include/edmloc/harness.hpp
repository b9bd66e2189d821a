#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edmloc/solver.hpp"

// Monte Carlo driver: seeded paired-trial sweeps over SNR, CSV emission
// and the replication protocol (three targets x two beams x SNR grid).

namespace edmloc {

enum class SolverKind { kEdmar1, kEdmar2, kEdmr1, kEdmr2 };

const char* solver_tag(SolverKind kind);
SolverKind parse_solver_tag(const std::string& tag);
bool solver_uses_angle_bounds(SolverKind kind);
int solver_p(SolverKind kind);

struct TrialRecord {
    SolverKind solver;
    double snr0_db;
    int trial;
    Vec3 x_hat_km;
    double err_km;
    double time_ms;
    double eigenratio;
    int iterations;
    int init_index;
    bool beam_feasible;
};

struct ReportEntry {
    SolverKind solver;
    double snr0_db;
    int trials;
    int failures;
    double rmse_km;
    double mean_time_ms;
    double mean_eigenratio;
    double feasibility_rate;
    double mean_iterations;
};

struct SweepConfig {
    std::vector<SolverKind> solvers;
    std::vector<double> snr_list_db;
    int trials = 1000;
    std::uint64_t base_seed = 1;
    bool noiseless = false;
    // When false, per-trial wall times are not recorded (written as 0),
    // which keeps every emitted byte reproducible across runs.
    bool measure_time = true;
    int threads = 0;  // 0 = hardware concurrency, capped by EDM_LOCATE_THREADS
};

struct SweepResult {
    std::vector<TrialRecord> records;  // sorted by (solver tag, snr, trial)
    std::vector<ReportEntry> report;
};

// Paired-trial sweep: every solver sees the identical MeasurementSet for
// a given (snr, trial). Per-trial solver failures are counted and
// excluded from the aggregates; the sweep never aborts.
SweepResult run_sweep(const Scenario& scenario, const SweepConfig& config);

// CSV writers; floats carry 9 significant digits. Columns for records:
// solver,snr0_db,trial,xhat_x_km,xhat_y_km,xhat_z_km,err_km,time_ms,
// eigenratio,iterations,init_index,beam_feasible
void write_records_csv(const std::vector<TrialRecord>& records, const std::string& path);
void write_report_csv(const std::vector<ReportEntry>& report, const std::string& path,
                      const std::string& extra_key = "", const std::string& extra_value = "");
std::string records_csv_string(const std::vector<TrialRecord>& records);

// Replication protocol: targets (0,0), (4,0), (6.9,4.9) deg at 20 km,
// beams (7,5) and (10,7) deg, SNR0 in {0,5,10,15} dB, all four solvers.
struct ReplicateCombo {
    double target_theta_deg, target_phi_deg;
    double beam_theta_deg, beam_phi_deg;
    SweepResult sweep;
};

struct ReplicateResult {
    std::vector<ReplicateCombo> combos;
};

ReplicateResult run_replicate(const Scenario& base, int trials, std::uint64_t base_seed,
                              bool measure_time, int threads);

// Writes records_t<theta>x<phi>_b<tb>x<pb>.csv per combo plus report.csv
// into the directory (created if missing).
void write_replicate_outputs(const ReplicateResult& result, const std::string& out_dir);

}  // namespace edmloc
