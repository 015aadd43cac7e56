#include "run_config.hpp"

#include <fstream>

#include "json.hpp"

namespace diracmech::cli {

namespace {

using nlohmann::json;

Vector to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + ": expected numbers");
    v[Eigen::Index(i)] = j[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    Vector row = to_vector(j[i], what);
    if (i == 0) {
      cols = std::size_t(row.size());
      m.resize(rows, cols);
    } else if (std::size_t(row.size()) != cols) {
      throw ConfigError(std::string(what) + ": ragged rows");
    }
    m.row(Eigen::Index(i)) = row;
  }
  return m;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }

  RunConfig cfg;
  const std::string sys = j.value("system", "charged_particle");
  if (sys == "charged_particle") {
    cfg.system = SystemKind::charged_particle;
  } else if (sys == "double_pendulum") {
    cfg.system = SystemKind::double_pendulum;
  } else if (sys == "custom_linear") {
    cfg.system = SystemKind::custom_linear;
  } else {
    throw ConfigError("unknown system: " + sys);
  }

  const std::string var = j.value("variant", "plus");
  if (var == "plus") {
    cfg.variant = Variant::plus;
  } else if (var == "minus") {
    cfg.variant = Variant::minus;
  } else {
    throw ConfigError("unknown variant: " + var);
  }

  cfg.T = j.value("T", cfg.T);
  if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");
  if (j.contains("N")) {
    const auto n = j["N"].get<long long>();
    if (n < 1) throw ConfigError("N must be >= 1");
    cfg.N = std::size_t(n);
  }
  cfg.seed = j.value("seed", 0u);

  const json params = j.value("params", json::object());
  switch (cfg.system) {
    case SystemKind::charged_particle:
      cfg.charged.m = params.value("m", 1.0);
      cfg.charged.e = params.value("e", 1.0);
      cfg.charged.B0 = params.value("B0", 1.0);
      break;
    case SystemKind::double_pendulum:
      cfg.pendulum.m1 = params.value("m1", 20.0);
      cfg.pendulum.m2 = params.value("m2", 35.0);
      cfg.pendulum.l1 = params.value("l1", 500.0);
      cfg.pendulum.l2 = params.value("l2", 800.0);
      cfg.pendulum.g = params.value("g", 9.8);
      break;
    case SystemKind::custom_linear: {
      cfg.custom.dim_sigma = params.value("dim_sigma", 2);
      cfg.custom.dim_g = params.value("dim_g", 1);
      if (cfg.custom.dim_sigma < 0 || cfg.custom.dim_g < 0 ||
          cfg.custom.dim_sigma + cfg.custom.dim_g < 1) {
        throw ConfigError("custom_linear: bad dimensions");
      }
      const Eigen::Index nq = cfg.custom.dim_sigma + cfg.custom.dim_g;
      if (params.contains("mass_matrix") && params["mass_matrix"].is_array()) {
        cfg.custom.mass = to_matrix(params["mass_matrix"], "mass_matrix");
        if (cfg.custom.mass.rows() != nq || cfg.custom.mass.cols() != nq) {
          throw ConfigError("mass_matrix must be dim_q x dim_q");
        }
      } else {
        cfg.custom.mass = Matrix::Identity(nq, nq);
      }
      if (params.contains("stiffness")) {
        cfg.custom.stiffness = to_matrix(params["stiffness"], "stiffness");
        if (cfg.custom.stiffness.rows() != cfg.custom.dim_sigma ||
            cfg.custom.stiffness.cols() != cfg.custom.dim_sigma) {
          throw ConfigError("stiffness must be dim_sigma x dim_sigma");
        }
      } else {
        cfg.custom.stiffness = Matrix::Zero(cfg.custom.dim_sigma, cfg.custom.dim_sigma);
      }
      cfg.custom.H = Matrix::Zero(cfg.custom.dim_g, cfg.custom.dim_sigma);
      break;
    }
  }

  if (j.contains("connection")) {
    const json& c = j["connection"];
    if (c.is_string()) {
      if (c.get<std::string>() != "flat") throw ConfigError("connection: expected \"flat\"");
    } else {
      if (cfg.system != SystemKind::custom_linear) {
        throw ConfigError("named systems pin the flat connection; a matrix is only valid for "
                          "custom_linear");
      }
      cfg.custom.H = to_matrix(c, "connection");
      if (cfg.custom.H.rows() != cfg.custom.dim_g ||
          cfg.custom.H.cols() != cfg.custom.dim_sigma) {
        throw ConfigError("connection matrix must be dim_g x dim_sigma");
      }
    }
  }

  if (j.contains("initial")) {
    const json& init = j["initial"];
    if (init.contains("x0")) cfg.initial.x0 = to_vector(init["x0"], "initial.x0");
    if (init.contains("g0")) cfg.initial.g0 = to_vector(init["g0"], "initial.g0");
    if (init.contains("w0")) cfg.initial.w0 = to_vector(init["w0"], "initial.w0");
    if (init.contains("mu0")) cfg.initial.mu0 = to_vector(init["mu0"], "initial.mu0");
  }

  if (j.contains("solver")) {
    const json& s = j["solver"];
    cfg.solver.tol = s.value("tol", cfg.solver.tol);
    cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
    cfg.solver.fd_jacobian_step = s.value("fd_jacobian_step", cfg.solver.fd_jacobian_step);
    try {
      cfg.solver.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("solver: ") + e.what());
    }
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    cfg.outputs.csv_path = o.value("csv_path", cfg.outputs.csv_path);
    if (o.contains("svg_path")) cfg.outputs.svg_path = o["svg_path"].get<std::string>();
    cfg.outputs.diagnostics = o.value("diagnostics", true);
    if (o.contains("svg_coords")) {
      for (const auto& v : o["svg_coords"]) cfg.outputs.svg_coords.push_back(v.get<int>());
    }
  }

  if (j.contains("Ns")) {
    for (const auto& v : j["Ns"]) {
      const auto n = v.get<long long>();
      if (n < 1) throw ConfigError("Ns entries must be >= 1");
      cfg.Ns.push_back(std::size_t(n));
    }
  }
  return cfg;
}

namespace {

SystemSetup build_custom_linear(const RunConfig& cfg) {
  const CustomLinearParams& p = cfg.custom;
  const TrivializedSpace space{p.dim_sigma, p.dim_g};
  const double h = cfg.h();
  const Matrix M = p.mass;
  const Matrix K = p.stiffness;
  const Eigen::Index ns = p.dim_sigma, ng = p.dim_g;

  DiscreteLagrangian L;
  L.space = space;
  L.declared_g_invariant = true;
  L.eval = [space, M, K, h, ns](const PointQ& q0, const PointQ& q1) {
    Vector dq(space.dim_q());
    dq << q1.x - q0.x, q1.g - q0.g;
    Vector xbar = 0.5 * (q0.x + q1.x);
    double v = ns ? 0.5 * h * xbar.dot(K * xbar) : 0.0;
    return dq.dot(M * dq) / (2.0 * h) - v;
  };
  L.grad = [space, M, K, h, ns, ng](const PointQ& q0, const PointQ& q1) {
    Vector dq(space.dim_q());
    dq << q1.x - q0.x, q1.g - q0.g;
    Vector cvec = M * dq / h;
    Vector xbar = 0.5 * (q0.x + q1.x);
    Vector pv = ns ? Vector(0.5 * h * (K * xbar)) : Vector::Zero(0);
    CovectorQ d1{-cvec.head(ns) - pv, -cvec.tail(ng)};
    CovectorQ d2{cvec.head(ns) - pv, cvec.tail(ng)};
    return std::make_pair(d1, d2);
  };

  SystemSetup out{std::move(L), DiscreteConnection(space, p.H), {}, Vector::Zero(ng)};
  out.initial =
      TrivializedMomentumPoint{PointQ::zero(space), Vector::Zero(ns), Vector::Zero(ng)};
  return out;
}

}  // namespace

namespace {

SystemSetup build_base_system(const RunConfig& cfg) {
  switch (cfg.system) {
    case SystemKind::charged_particle: {
      ChargedParticleParams p = cfg.charged;
      p.T = cfg.T;
      p.h = cfg.h();
      return charged_particle_system(p);
    }
    case SystemKind::double_pendulum: {
      PendulumParams p = cfg.pendulum;
      p.T = cfg.T;
      p.h = cfg.h();
      Vector q0(4);
      q0 << 0.0, 9.0 / 4.0, 2.0, 3.0;
      Vector w0(3);
      w0 << 0.0, 1.0, 1.0;
      Vector mu0 = Vector::Zero(1);
      if (cfg.initial.x0) {
        if (cfg.initial.x0->size() != 3) throw ConfigError("pendulum initial.x0 needs 3 entries");
        q0.tail(3) = *cfg.initial.x0;
      }
      if (cfg.initial.g0) q0[0] = (*cfg.initial.g0)[0];
      if (cfg.initial.w0) w0 = *cfg.initial.w0;
      if (cfg.initial.mu0) mu0 = *cfg.initial.mu0;
      try {
        return pendulum_system(p, q0, w0, mu0);
      } catch (const InvalidChartError& e) {
        throw ConfigError(e.what());
      }
    }
    case SystemKind::custom_linear:
      return build_custom_linear(cfg);
  }
  throw ConfigError("unreachable system kind");
}

}  // namespace

SystemSetup build_system(const RunConfig& cfg) {
  SystemSetup sys = build_base_system(cfg);
  if (cfg.system == SystemKind::double_pendulum) return sys;  // overrides applied above
  // optional overrides of the built-in initial data
  const TrivializedSpace& space = sys.lagrangian.space;
  if (cfg.initial.x0) {
    if (cfg.initial.x0->size() != space.dim_sigma) throw ConfigError("initial.x0: wrong length");
    sys.initial.q.x = *cfg.initial.x0;
  }
  if (cfg.initial.g0) {
    if (cfg.initial.g0->size() != space.dim_g) throw ConfigError("initial.g0: wrong length");
    sys.initial.q.g = *cfg.initial.g0;
    sys.g_abs0 = *cfg.initial.g0;
  }
  if (cfg.initial.w0) {
    if (cfg.initial.w0->size() != space.dim_sigma) throw ConfigError("initial.w0: wrong length");
    sys.initial.w = *cfg.initial.w0;
  }
  if (cfg.initial.mu0) {
    if (cfg.initial.mu0->size() != space.dim_g) throw ConfigError("initial.mu0: wrong length");
    sys.initial.mu = *cfg.initial.mu0;
  }
  return sys;
}

}  // namespace diracmech::cli
