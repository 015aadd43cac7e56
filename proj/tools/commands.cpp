#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <iostream>

#include "audits.hpp"
#include "emit.hpp"

namespace diracmech::cli {

namespace fs = std::filesystem;

std::string resolve_out_path(const std::string& path, const std::string& out_dir) {
  if (out_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(out_dir) / path).string();
}

namespace {

struct ReducedRun {
  RunResult result;
  double wall_ms = 0.0;
};

ReducedRun run_reduced(const SystemSetup& sys, const RunConfig& cfg) {
  ReducedState s0{sys.initial.q.x, sys.initial.w, sys.initial.mu};
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  if (cfg.variant == Variant::plus) {
    ReducedLagrangianPlus rl(sys.lagrangian, sys.connection);
    res = run_plus(rl, s0, sys.g_abs0, cfg.N, cfg.h(), cfg.solver);
  } else {
    ReducedLagrangianMinus rl(sys.lagrangian, sys.connection);
    res = run_minus(rl, s0, sys.g_abs0, cfg.N, cfg.h(), cfg.solver);
  }
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(res), std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

std::vector<std::string> header_row(const TrivializedSpace& s) {
  std::vector<std::string> h{"k", "t"};
  for (Eigen::Index i = 0; i < s.dim_sigma; ++i) h.push_back("x" + std::to_string(i));
  for (Eigen::Index i = 0; i < s.dim_g; ++i) h.push_back("g_abs" + std::to_string(i));
  for (Eigen::Index i = 0; i < s.dim_sigma; ++i) h.push_back("w" + std::to_string(i));
  for (Eigen::Index i = 0; i < s.dim_g; ++i) h.push_back("mu" + std::to_string(i));
  h.insert(h.end(), {"E_d", "struct_residual", "newton_iters"});
  return h;
}

void write_trajectory_csv(CsvWriter& csv, const TrivializedSpace& s, const ReducedTrajectory& tr) {
  csv.row(header_row(s));
  const std::size_t n_states = tr.states.size();
  for (std::size_t k = 0; k < n_states; ++k) {
    std::vector<std::string> row{std::to_string(k), num17(tr.times[k])};
    const auto& st = tr.states[k];
    for (Eigen::Index i = 0; i < s.dim_sigma; ++i) row.push_back(num17(st.x[i]));
    for (Eigen::Index i = 0; i < s.dim_g; ++i) row.push_back(num17(tr.group_abs[k][i]));
    for (Eigen::Index i = 0; i < s.dim_sigma; ++i) row.push_back(num17(st.w[i]));
    for (Eigen::Index i = 0; i < s.dim_g; ++i) row.push_back(num17(st.mu[i]));
    // diagnostic columns describe step k; the final row repeats the last step
    const std::size_t dk = std::min(k, tr.diagnostics.size() ? tr.diagnostics.size() - 1 : 0);
    if (!tr.diagnostics.empty()) {
      const auto& d = tr.diagnostics[dk];
      row.push_back(num17(d.energy));
      row.push_back(num17(d.structure_residual));
      row.push_back(std::to_string(d.newton_iters));
    } else {
      row.insert(row.end(), {"0", "0", "0"});
    }
    csv.row(row);
  }
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
  SystemSetup sys = build_system(cfg);
  ReducedRun run = run_reduced(sys, cfg);
  const auto& tr = run.result.trajectory;
  const TrivializedSpace& s = sys.lagrangian.space;

  CsvWriter csv(resolve_out_path(cfg.outputs.csv_path, out_dir));
  write_trajectory_csv(csv, s, tr);
  if (!run.result.ok()) {
    csv.row({"TRUNCATED", "step " + std::to_string(run.result.failure->step) + ": " +
                              run.result.failure->message});
    csv.flush();
    std::cerr << "solver failure at step " << run.result.failure->step << ": "
              << run.result.failure->message << "\n";
    return 3;
  }
  csv.flush();

  if (cfg.outputs.svg_path && !tr.diagnostics.empty()) {
    const std::string base = resolve_out_path(*cfg.outputs.svg_path, out_dir);
    std::vector<double> ts, es;
    for (std::size_t k = 0; k < tr.diagnostics.size(); ++k) {
      ts.push_back(tr.times[k]);
      es.push_back(tr.diagnostics[k].energy);
    }
    write_svg_series(base, "discrete energy", ts, es);
    for (int ci : cfg.outputs.svg_coords) {
      if (ci < 0 || ci >= s.dim_sigma) throw ConfigError("svg_coords: index out of range");
      std::vector<double> tall, xs;
      for (std::size_t k = 0; k < tr.states.size(); ++k) {
        tall.push_back(tr.times[k]);
        xs.push_back(tr.states[k].x[ci]);
      }
      fs::path p(base);
      fs::path coord = p.parent_path() / (p.stem().string() + "_x" + std::to_string(ci) + ".svg");
      write_svg_series(coord.string(), "x" + std::to_string(ci), tall, xs);
    }
  }
  std::cout << "simulate: " << tr.steps() << " steps, wall " << run.wall_ms << " ms\n";
  return 0;
}

int cmd_converge(const RunConfig& cfg, const std::vector<std::size_t>& Ns_arg,
                 const std::string& out_dir) {
  if (cfg.system != SystemKind::charged_particle) {
    throw ConfigError("converge: the error study needs the charged particle (an exact solution)");
  }
  std::vector<std::size_t> Ns = Ns_arg.empty() ? cfg.Ns : Ns_arg;
  if (Ns.empty()) Ns = {10, 50, 100, 200};

  // one worker per N; nothing shared; joined in input order
  std::vector<std::future<double>> workers;
  for (std::size_t N : Ns) {
    workers.push_back(std::async(std::launch::async, [N, &cfg]() {
      RunConfig local = cfg;
      local.N = N;
      SystemSetup sys = build_system(local);
      ReducedRun run = run_reduced(sys, local);
      if (!run.result.ok()) {
        throw NoConvergenceError("converge: run failed at N = " + std::to_string(N) + ": " +
                                     run.result.failure->message,
                                 0.0, 0);
      }
      return final_error(run.result.trajectory, charged_particle_exact);
    }));
  }
  std::vector<double> errors;
  for (auto& w : workers) errors.push_back(w.get());

  CsvWriter csv(resolve_out_path(cfg.outputs.csv_path, out_dir));
  csv.row({"N", "error", "observed_order"});
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    std::string order;
    if (i > 0) {
      order = num17(std::log(errors[i - 1] / errors[i]) /
                    std::log(double(Ns[i]) / double(Ns[i - 1])));
    }
    csv.row({std::to_string(Ns[i]), num17(errors[i]), order});
    std::cout << "N = " << Ns[i] << "  error = " << errors[i]
              << (order.empty() ? "" : "  order = " + order) << "\n";
  }
  return 0;
}

int cmd_compare(const RunConfig& cfg, const std::string& out_dir) {
  SystemSetup sys = build_system(cfg);
  ReducedRun red = run_reduced(sys, cfg);
  if (!red.result.ok()) {
    std::cerr << "compare: reduced run failed: " << red.result.failure->message << "\n";
    return 3;
  }
  const auto& tr = red.result.trajectory;

  // unreduced discrete Lagrange-Dirac orbit from the matched initial data
  auto [q0, p0] = hat_lambda_d_inv(sys.connection, sys.initial);
  std::vector<PointQ> qs{q0};
  std::vector<CovectorQ> ps{p0};
  std::vector<double> energies;
  const auto t0 = std::chrono::steady_clock::now();
  PointQ guess = PointQ::zero(sys.lagrangian.space);
  bool have = false;
  try {
    for (std::size_t k = 0; k < cfg.N; ++k) {
      auto st = cfg.variant == Variant::plus
                    ? step_ld_plus(sys.lagrangian, qs.back(), ps.back(), cfg.solver,
                                   have ? &guess : nullptr)
                    : step_ld_minus(sys.lagrangian, qs.back(), ps.back(), cfg.solver,
                                    have ? &guess : nullptr);
      guess = st.dq;
      have = true;
      energies.push_back(eval_increment(sys.lagrangian, qs.back(), st.dq));
      qs.push_back(st.q1);
      ps.push_back(st.p1);
    }
  } catch (const std::exception& e) {
    std::cerr << "compare: unreduced run failed: " << e.what() << "\n";
    return 3;
  }
  const auto t1 = std::chrono::steady_clock::now();
  const double unreduced_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  CsvWriter csv(resolve_out_path(cfg.outputs.csv_path, out_dir));
  csv.row({"k", "t", "state_deviation", "energy_deviation"});
  double max_dev = 0.0, max_edev = 0.0;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    auto m = hat_lambda_d(sys.connection, qs[k], ps[k]);
    double dev = std::max({vdiff(m.q.x, tr.states[k].x), vdiff(m.w, tr.states[k].w),
                           vdiff(m.mu, tr.states[k].mu), vdiff(qs[k].g, tr.group_abs[k])});
    const std::size_t dk = std::min(k, energies.size() - 1);
    double edev = std::abs(energies[dk] - tr.diagnostics[dk].energy);
    max_dev = std::max(max_dev, dev);
    max_edev = std::max(max_edev, edev);
    csv.row({std::to_string(k), num17(tr.times[k]), num17(dev), num17(edev)});
  }
  csv.flush();

  fs::path primary(resolve_out_path(cfg.outputs.csv_path, out_dir));
  fs::path timing = primary.parent_path() / (primary.stem().string() + "_timing.csv");
  CsvWriter tcsv(timing.string());
  tcsv.row({"reduced_ms", "unreduced_ms", "reduced_speedup_percent"});
  const double speedup = 100.0 * (unreduced_ms - red.wall_ms) / unreduced_ms;
  tcsv.row({num17(red.wall_ms), num17(unreduced_ms), num17(speedup)});

  std::cout << "compare: max state deviation " << max_dev << ", max energy deviation " << max_edev
            << "\n"
            << "compare: reduced " << red.wall_ms << " ms, unreduced " << unreduced_ms
            << " ms (reduced faster by " << speedup << "%)\n";
  return 0;
}

int cmd_check(const RunConfig& cfg, const std::string& out_dir) {
  (void)out_dir;
  SystemSetup sys = build_system(cfg);
  AuditRng rng(cfg.seed + 7u);
  bool all_ok = true;
  auto report = [&](const char* name, double value, double threshold) {
    const bool ok = value <= threshold;
    all_ok = all_ok && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": " << value << " (<= " << threshold
              << ")\n";
  };

  // configured connection plus randomized dense ones
  double conn = audit_connection_axioms(sys.connection, rng, 32);
  double round = audit_roundtrips(sys.connection, rng, 32);
  double tulc = audit_tulczyjew(sys.lagrangian.space, rng, 32);
  double reduced = 0.0;
  for (int t = 0; t < 16; ++t) {
    TrivializedSpace s{rng.integer(1, 6), rng.integer(1, 6)};
    DiscreteConnection c(s, rng.mat(s.dim_g, s.dim_sigma));
    conn = std::max(conn, audit_connection_axioms(c, rng, 8));
    round = std::max(round, audit_roundtrips(c, rng, 8));
    tulc = std::max(tulc, audit_tulczyjew(s, rng, 8));
    reduced = std::max(reduced, audit_reduced_maps(c, audit_oscillator(s, rng, 0.1), rng, 4));
  }
  report("connection axioms", conn, 1e-12);
  report("trivialization roundtrips and pairings", round, 1e-12);
  report("tulczyjew identities and G-invariance", tulc, 1e-12);
  report("reduced maps vs composition chains", reduced, 1e-10);

  // configured system run: structure membership, momentum, stationarity
  ReducedRun run = run_reduced(sys, cfg);
  if (!run.result.ok()) {
    std::cerr << "check: run failed: " << run.result.failure->message << "\n";
    return 3;
  }
  const auto& tr = run.result.trajectory;
  double worst_struct = 0.0;
  for (const auto& d : tr.diagnostics) worst_struct = std::max(worst_struct, d.structure_residual);
  report("structure membership along the run", worst_struct, 1e-9);

  double worst_mu = 0.0;
  for (const auto& st : tr.states) worst_mu = std::max(worst_mu, vdiff(st.mu, tr.states[0].mu));
  report("momentum conservation along the run", worst_mu, 1e-10);

  if (cfg.variant == Variant::plus) {
    ReducedLagrangianPlus rl(sys.lagrangian, sys.connection);
    report("variational stationarity of the run", variational_residual(rl, tr), 1e-6);
  }

  if (sys.lagrangian.grad) {
    DiscreteLagrangian fd_only = sys.lagrangian;
    fd_only.grad = nullptr;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      PointQ a = rng.point(sys.lagrangian.space), b = rng.point(sys.lagrangian.space);
      auto an = sys.lagrangian.grad(a, b);
      auto fd = grad_fd(fd_only, a, b);
      const double scale = std::max({1.0, vnorm(an.first.w), vnorm(an.first.r),
                                     vnorm(an.second.w), vnorm(an.second.r)});
      worst = std::max(worst, std::max(cdiff(an.first, fd.first), cdiff(an.second, fd.second)) /
                                  scale);
    }
    report("analytic vs finite-difference gradient", worst, 1e-6);
  }

  return all_ok ? 0 : 4;
}

}  // namespace diracmech::cli
