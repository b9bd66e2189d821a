#include "edmloc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "edmloc/rng.hpp"

namespace edmloc {

const char* solver_tag(SolverKind kind) {
    switch (kind) {
        case SolverKind::kEdmar1: return "edmar1";
        case SolverKind::kEdmar2: return "edmar2";
        case SolverKind::kEdmr1: return "edmr1";
        case SolverKind::kEdmr2: return "edmr2";
    }
    return "?";
}

SolverKind parse_solver_tag(const std::string& tag) {
    if (tag == "edmar1") return SolverKind::kEdmar1;
    if (tag == "edmar2") return SolverKind::kEdmar2;
    if (tag == "edmr1") return SolverKind::kEdmr1;
    if (tag == "edmr2") return SolverKind::kEdmr2;
    throw std::invalid_argument("unknown solver tag: " + tag);
}

bool solver_uses_angle_bounds(SolverKind kind) {
    return kind == SolverKind::kEdmar1 || kind == SolverKind::kEdmar2;
}

int solver_p(SolverKind kind) {
    return (kind == SolverKind::kEdmar1 || kind == SolverKind::kEdmr1) ? 1 : 2;
}

namespace {

int resolve_threads(int requested) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    if (const char* cap = std::getenv("EDM_LOCATE_THREADS")) {
        const int cap_v = std::atoi(cap);
        if (cap_v > 0) t = std::min(t, cap_v);
    }
    return t;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min(threads, count);
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

struct TrialSlot {
    bool ok = false;
    TrialRecord record;
};

}  // namespace

SweepResult run_sweep(const Scenario& scenario, const SweepConfig& config) {
    if (config.trials < 1) {
        throw std::invalid_argument("run_sweep requires trials >= 1");
    }
    if (config.solvers.empty()) {
        throw std::invalid_argument("run_sweep requires at least one solver");
    }
    const int threads = resolve_threads(config.threads);
    const Eigen::MatrixXd anchor_block = pairwise_sq_dist(scenario.anchors());
    const Vec3 target = scenario.target();

    SweepResult out;
    for (const double snr : config.snr_list_db) {
        std::vector<std::vector<TrialSlot>> slots(config.solvers.size());
        for (auto& s : slots) s.resize(config.trials);
        std::vector<std::atomic<int>> failures(config.solvers.size());

        parallel_for(config.trials, threads, [&](int trial) {
            const std::uint64_t trial_seed =
                mix_seed(config.base_seed, 0x747269616cull, static_cast<std::uint64_t>(trial));
            MeasurementSet meas;
            try {
                meas = synthesize(scenario, target, snr, trial_seed, config.noiseless);
            } catch (const std::exception&) {
                for (auto& f : failures) f.fetch_add(1);
                return;
            }

            // Bounds are shared preprocessing for the solver families.
            BoundsPair angle_bounds;
            bool have_angle_bounds = false;
            const BoundsPair no_angle = relaxed_box(meas.big_delta);

            for (std::size_t si = 0; si < config.solvers.size(); ++si) {
                const SolverKind kind = config.solvers[si];
                try {
                    if (solver_uses_angle_bounds(kind) && !have_angle_bounds) {
                        angle_bounds = compute_bounds(scenario, meas.b_km);
                        have_angle_bounds = true;
                    }
                    const BoundsPair& bounds =
                        solver_uses_angle_bounds(kind) ? angle_bounds : no_angle;
                    const BoxConstraint box = build_box(anchor_block, meas.b_km, bounds);
                    SolverConfig sc;
                    sc.p = solver_p(kind);
                    const SolveResult res =
                        multistart_solve(sc, meas, box, scenario.anchors(), scenario.beam());

                    TrialRecord rec;
                    rec.solver = kind;
                    rec.snr0_db = snr;
                    rec.trial = trial;
                    rec.x_hat_km = res.x_hat;
                    rec.err_km = (res.x_hat - target).norm();
                    rec.time_ms = config.measure_time ? res.wall_time_s * 1e3 : 0.0;
                    rec.eigenratio = res.eigenratio;
                    rec.iterations = res.iterations;
                    rec.init_index = res.init_index;
                    rec.beam_feasible = res.beam_feasible;
                    slots[si][trial] = TrialSlot{true, rec};
                } catch (const std::exception&) {
                    failures[si].fetch_add(1);
                }
            }
        });

        for (std::size_t si = 0; si < config.solvers.size(); ++si) {
            double sum_sq = 0.0, sum_time = 0.0, sum_eig = 0.0, sum_iter = 0.0;
            int feasible = 0, count = 0;
            for (const auto& slot : slots[si]) {
                if (!slot.ok) continue;
                const auto& r = slot.record;
                out.records.push_back(r);
                sum_sq += r.err_km * r.err_km;
                sum_time += r.time_ms;
                sum_eig += r.eigenratio;
                sum_iter += r.iterations;
                feasible += r.beam_feasible ? 1 : 0;
                ++count;
            }
            ReportEntry e;
            e.solver = config.solvers[si];
            e.snr0_db = snr;
            e.trials = count;
            e.failures = failures[si].load();
            e.rmse_km = count > 0 ? std::sqrt(sum_sq / count) : 0.0;
            e.mean_time_ms = count > 0 ? sum_time / count : 0.0;
            e.mean_eigenratio = count > 0 ? sum_eig / count : 0.0;
            e.feasibility_rate = count > 0 ? static_cast<double>(feasible) / count : 0.0;
            e.mean_iterations = count > 0 ? sum_iter / count : 0.0;
            out.report.push_back(e);
        }
    }

    std::sort(out.records.begin(), out.records.end(),
              [](const TrialRecord& a, const TrialRecord& b) {
                  const int cmp = std::strcmp(solver_tag(a.solver), solver_tag(b.solver));
                  if (cmp != 0) return cmp < 0;
                  if (a.snr0_db != b.snr0_db) return a.snr0_db < b.snr0_db;
                  return a.trial < b.trial;
              });
    std::sort(out.report.begin(), out.report.end(),
              [](const ReportEntry& a, const ReportEntry& b) {
                  const int cmp = std::strcmp(solver_tag(a.solver), solver_tag(b.solver));
                  if (cmp != 0) return cmp < 0;
                  return a.snr0_db < b.snr0_db;
              });
    return out;
}

std::string records_csv_string(const std::vector<TrialRecord>& records) {
    std::string out =
        "solver,snr0_db,trial,xhat_x_km,xhat_y_km,xhat_z_km,err_km,time_ms,"
        "eigenratio,iterations,init_index,beam_feasible\n";
    for (const auto& r : records) {
        out += solver_tag(r.solver);
        out += ',';
        out += fmt_double(r.snr0_db);
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += fmt_double(r.x_hat_km.x());
        out += ',';
        out += fmt_double(r.x_hat_km.y());
        out += ',';
        out += fmt_double(r.x_hat_km.z());
        out += ',';
        out += fmt_double(r.err_km);
        out += ',';
        out += fmt_double(r.time_ms);
        out += ',';
        out += fmt_double(r.eigenratio);
        out += ',';
        out += std::to_string(r.iterations);
        out += ',';
        out += std::to_string(r.init_index);
        out += ',';
        out += r.beam_feasible ? '1' : '0';
        out += '\n';
    }
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    f << content;
    if (!f) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace

void write_records_csv(const std::vector<TrialRecord>& records, const std::string& path) {
    write_file(path, records_csv_string(records));
}

void write_report_csv(const std::vector<ReportEntry>& report, const std::string& path,
                      const std::string& extra_key, const std::string& extra_value) {
    std::string out;
    if (!extra_key.empty()) out += extra_key + ",";
    out +=
        "solver,snr0_db,trials,failures,rmse_km,mean_time_ms,mean_eigenratio,"
        "feasibility_rate,mean_iterations\n";
    for (const auto& e : report) {
        if (!extra_key.empty()) out += extra_value + ",";
        out += solver_tag(e.solver);
        out += ',';
        out += fmt_double(e.snr0_db);
        out += ',';
        out += std::to_string(e.trials);
        out += ',';
        out += std::to_string(e.failures);
        out += ',';
        out += fmt_double(e.rmse_km);
        out += ',';
        out += fmt_double(e.mean_time_ms);
        out += ',';
        out += fmt_double(e.mean_eigenratio);
        out += ',';
        out += fmt_double(e.feasibility_rate);
        out += ',';
        out += fmt_double(e.mean_iterations);
        out += '\n';
    }
    write_file(path, out);
}

ReplicateResult run_replicate(const Scenario& base, int trials, std::uint64_t base_seed,
                              bool measure_time, int threads) {
    const std::pair<double, double> targets[] = {{0.0, 0.0}, {4.0, 0.0}, {6.9, 4.9}};
    const std::pair<double, double> beams[] = {{7.0, 5.0}, {10.0, 7.0}};

    SweepConfig cfg;
    cfg.solvers = {SolverKind::kEdmar1, SolverKind::kEdmar2, SolverKind::kEdmr1,
                   SolverKind::kEdmr2};
    cfg.snr_list_db = {0.0, 5.0, 10.0, 15.0};
    cfg.trials = trials;
    cfg.base_seed = base_seed;
    cfg.measure_time = measure_time;
    cfg.threads = threads;

    ReplicateResult out;
    for (const auto& [bt, bp] : beams) {
        const Scenario beamed = with_beam(base, Beam(deg2rad(bt), deg2rad(bp)));
        for (const auto& [tt, tp] : targets) {
            const Scenario scen = with_polar_target(beamed, 20.0, tt, tp);
            ReplicateCombo combo;
            combo.target_theta_deg = tt;
            combo.target_phi_deg = tp;
            combo.beam_theta_deg = bt;
            combo.beam_phi_deg = bp;
            combo.sweep = run_sweep(scen, cfg);
            out.combos.push_back(std::move(combo));
        }
    }
    return out;
}

void write_replicate_outputs(const ReplicateResult& result, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::string report;
    report =
        "target_theta_deg,target_phi_deg,beam_theta_deg,beam_phi_deg,solver,snr0_db,"
        "trials,failures,rmse_km,mean_time_ms,mean_eigenratio,feasibility_rate,"
        "mean_iterations\n";
    for (const auto& combo : result.combos) {
        char name[128];
        std::snprintf(name, sizeof(name), "records_t%gx%g_b%gx%g.csv",
                      combo.target_theta_deg, combo.target_phi_deg, combo.beam_theta_deg,
                      combo.beam_phi_deg);
        write_records_csv(combo.sweep.records,
                          (std::filesystem::path(out_dir) / name).string());
        for (const auto& e : combo.sweep.report) {
            char prefix[96];
            std::snprintf(prefix, sizeof(prefix), "%g,%g,%g,%g,", combo.target_theta_deg,
                          combo.target_phi_deg, combo.beam_theta_deg, combo.beam_phi_deg);
            report += prefix;
            report += solver_tag(e.solver);
            report += ',';
            report += fmt_double(e.snr0_db);
            report += ',';
            report += std::to_string(e.trials);
            report += ',';
            report += std::to_string(e.failures);
            report += ',';
            report += fmt_double(e.rmse_km);
            report += ',';
            report += fmt_double(e.mean_time_ms);
            report += ',';
            report += fmt_double(e.mean_eigenratio);
            report += ',';
            report += fmt_double(e.feasibility_rate);
            report += ',';
            report += fmt_double(e.mean_iterations);
            report += '\n';
        }
    }
    write_file((std::filesystem::path(out_dir) / "report.csv").string(), report);
}

}  // namespace edmloc
