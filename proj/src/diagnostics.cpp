#include "ratkrylov/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "ratkrylov/matrix_market.hpp"

namespace rk {

Matrix gen_upper_triangular(Index m, const std::vector<Complex>& eigenvalues, uint64_t seed) {
  require(m >= 1 && static_cast<Index>(eigenvalues.size()) == m,
          "gen_upper_triangular: one eigenvalue per row required");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Matrix a = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    a(i, i) = eigenvalues[i];
    for (Index j = i + 1; j < m; ++j) {
      const double re = normal(gen);
      const double im = normal(gen);
      a(i, j) = Complex(re, im) * inv_sqrt2;
    }
  }
  return a;
}

double biorthogonality_measure(const Matrix& v, const Matrix& w) {
  require(v.cols() == w.cols() && v.rows() == w.rows(), "biorthogonality_measure: size mismatch");
  const Index n = v.cols();
  return spectral_norm(w.adjoint() * v - Matrix::Identity(n, n));
}

double projection_residual(const Matrix& a, const Matrix& v, const Matrix& w,
                           const TridiagonalPencil& pencil) {
  require(pencil.rows == pencil.cols + 1, "projection_residual: extended pencil required");
  require(v.cols() == pencil.rows && w.cols() == pencil.rows,
          "projection_residual: bases must have n+1 columns");
  return spectral_norm(w.adjoint() * a * v * pencil.s_dense() - pencil.t_dense());
}

namespace {

Matrix right_divide(const Matrix& num, const Matrix& den, double& rcond) {
  Eigen::PartialPivLU<Matrix> lu(den);
  rcond = lu.rcond();
  const Matrix xt = lu.adjoint().solve(num.adjoint());
  return xt.adjoint();
}

double condition_estimate(const Matrix& m) {
  const auto sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace

std::vector<RitzValue> ritz_values(const TridiagonalPencil& square_pencil, double cond_limit) {
  require(square_pencil.rows == square_pencil.cols, "ritz_values: square pencil required");
  const Matrix t = square_pencil.t_dense();
  const Matrix s = square_pencil.s_dense();
  std::vector<RitzValue> out;

  const double cond_s = condition_estimate(s);
  const double cond_t = condition_estimate(t);
  double rc = 0.0;
  if (cond_s < cond_limit && cond_s <= cond_t) {
    Matrix z = right_divide(t, s, rc);
    Eigen::ComplexEigenSolver<Matrix> eig(z, false);
    for (Index i = 0; i < z.rows(); ++i) out.push_back({eig.eigenvalues()(i), true});
  } else if (cond_t < cond_limit) {
    // Reversed pencil: eigenvalues mu of S T^{-1} are 1/theta.
    Matrix z = right_divide(s, t, rc);
    Eigen::ComplexEigenSolver<Matrix> eig(z, false);
    double mu_scale = 0.0;
    for (Index i = 0; i < z.rows(); ++i)
      mu_scale = std::max(mu_scale, std::abs(eig.eigenvalues()(i)));
    for (Index i = 0; i < z.rows(); ++i) {
      const Complex mu = eig.eigenvalues()(i);
      if (std::abs(mu) <= 1e-14 * std::max(mu_scale, 1e-300))
        out.push_back({Complex(0, 0), false});
      else
        out.push_back({1.0 / mu, true});
    }
  } else {
    throw std::runtime_error("ritz_values: pencil is numerically singular on both sides");
  }
  std::sort(out.begin(), out.end(), [](const RitzValue& a, const RitzValue& b) {
    if (a.finite != b.finite) return a.finite;  // finite first
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

AccuracyClass classify_distance(double distance) {
  // Boundary values fall in the looser class.
  if (distance < 1e-8) return AccuracyClass::Red;
  if (distance < 1e-5) return AccuracyClass::Yellow;
  if (distance < 1e-2) return AccuracyClass::Green;
  return AccuracyClass::Blue;
}

const char* accuracy_class_name(AccuracyClass c) {
  switch (c) {
    case AccuracyClass::Red: return "red";
    case AccuracyClass::Yellow: return "yellow";
    case AccuracyClass::Green: return "green";
    case AccuracyClass::Blue: return "blue";
  }
  return "?";
}

std::vector<RitzRecord> ritz_convergence(const std::vector<Complex>& spectrum, Index n,
                                         const std::vector<RitzValue>& values) {
  require(!spectrum.empty(), "ritz_convergence: empty spectrum");
  std::vector<RitzRecord> out;
  out.reserve(values.size());
  for (const auto& th : values) {
    double d = std::numeric_limits<double>::infinity();
    if (th.finite)
      for (const Complex& lam : spectrum) d = std::min(d, std::abs(th.value - lam));
    out.push_back({n, th, d, classify_distance(d)});
  }
  return out;
}

void ExperimentConfig::validate(Index m) const {
  require(!poles_k.empty() && !poles_l.empty(), "experiment: pole lists must be nonempty");
  require(n >= 1, "experiment: n must be positive");
  require(n < m, "experiment: n must be smaller than the matrix dimension");
  if (use_generator) require(seed_set, "experiment: generator sources need a seed");
  require(start == "ones" || start == "randn", "experiment: start must be ones or randn");
}

ExperimentConfig example1_config(uint64_t seed, const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.name = "example1";
  cfg.use_generator = true;
  cfg.gen_m = 50;
  for (int i = 1; i <= 50; ++i) cfg.gen_eigenvalues.push_back(Complex(i, 0));
  cfg.seed = seed;
  cfg.seed_set = true;
  cfg.poles_k = {ProjectivePole::finite(0.0), ProjectivePole::finite(24.1)};
  cfg.poles_l = cfg.poles_k;
  cfg.n = 45;
  cfg.out_dir = out_dir;
  return cfg;
}

ExperimentConfig example2_config(uint64_t seed, const std::string& out_dir) {
  ExperimentConfig cfg = example1_config(seed, out_dir);
  cfg.name = "example2";
  cfg.poles_k = {ProjectivePole::finite(0.0), ProjectivePole::finite(24.0 + 1e-5)};
  cfg.poles_l = cfg.poles_k;
  return cfg;
}

Matrix experiment_matrix(const ExperimentConfig& cfg) {
  if (cfg.use_generator) return gen_upper_triangular(cfg.gen_m, cfg.gen_eigenvalues, cfg.seed);
  require(!cfg.matrix_path.empty(), "experiment: no matrix source given");
  Matrix a = read_matrix_market(cfg.matrix_path);
  require(a.rows() == a.cols(), "experiment: matrix must be square");
  return a;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  if (std::isinf(x))
    std::snprintf(buf, sizeof(buf), "inf");
  else
    std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_measure_csv(const std::string& path, const char* what,
                       const std::vector<double>& values, Index first_n) {
  std::ofstream out(path);
  require(out.good(), "experiment: cannot write CSV");
  out << "# ratkrylov-csv v1 " << what << "\n";
  out << "n,value\n";
  for (size_t i = 0; i < values.size(); ++i)
    out << (first_n + static_cast<Index>(i)) << "," << format_double(values[i]) << "\n";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  Matrix a = experiment_matrix(cfg);
  const Index m = a.rows();
  cfg.validate(m);

  Vector v;
  if (cfg.start == "ones") {
    v = Vector::Constant(m, Complex(1.0, 0.0));
  } else {
    std::mt19937_64 gen(cfg.seed + 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    v = Vector(m);
    for (Index i = 0; i < m; ++i) v(i) = Complex(normal(gen), normal(gen));
  }
  v /= v.norm();
  Vector w = v;

  const auto xi = cycle_poles(cfg.poles_k, cfg.n);
  const auto psi = cycle_poles(cfg.poles_l, cfg.n);

  RatLanOptions opt;
  opt.breakdown_tol = cfg.breakdown_tol;
  opt.rebiorthogonalize = cfg.rebiorthogonalize;
  RatLanResult run = rat_lan(a, v, w, cfg.n, xi, psi, opt);

  ExperimentResult res;
  res.breakdown = run.breakdown;
  res.n_completed = run.steps();
  res.vectors = run.v.cols();
  res.reached_min_n = !(run.breakdown.occurred && run.breakdown.step < cfg.min_n);

  // Spectrum for the Ritz classification.
  if (cfg.use_generator) {
    res.spectrum = cfg.gen_eigenvalues;
  } else {
    Eigen::ComplexEigenSolver<Matrix> eig(a, false);
    for (Index i = 0; i < m; ++i) res.spectrum.push_back(eig.eigenvalues()(i));
  }

  for (Index n = 1; n <= res.vectors; ++n)
    res.biorthogonality.push_back(
        biorthogonality_measure(run.v.leftCols(n), run.w.leftCols(n)));
  const bool extended = run.pencil.rows == run.pencil.cols + 1;
  for (Index n = 1; n <= res.n_completed; ++n) {
    if (n < res.n_completed || extended) {
      TridiagonalPencil pn = run.pencil.leading(n);
      // Rebuild the extended (n+1) x n slice from the stored diagonals.
      TridiagonalPencil ext;
      ext.rows = n + 1;
      ext.cols = n;
      ext.t_main = run.pencil.t_main.head(n);
      ext.s_main = run.pencil.s_main.head(n);
      ext.t_sub = run.pencil.t_sub.head(n);
      ext.s_sub = run.pencil.s_sub.head(n);
      ext.t_super = run.pencil.t_super.head(n - 1);
      ext.s_super = run.pencil.s_super.head(n - 1);
      res.projection.push_back(
          projection_residual(a, run.v.leftCols(n + 1), run.w.leftCols(n + 1), ext));
    }
    std::vector<RitzValue> th = ritz_values(run.pencil.leading(n));
    auto rec = ritz_convergence(res.spectrum, n, th);
    res.ritz.insert(res.ritz.end(), rec.begin(), rec.end());
  }

  // Pole recovery checks.
  const auto sub = recover_poles_sub(run.pencil);
  for (size_t i = 0; i < sub.size(); ++i)
    res.pole_sub_error = std::max(res.pole_sub_error, sub[i].distance(run.xi[i]));
  const auto super = recover_poles_super(run.pencil);
  for (size_t i = 0; i < super.size(); ++i)
    res.pole_super_error = std::max(res.pole_super_error, super[i].distance(run.psi[i].conj()));

  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    write_measure_csv(cfg.out_dir + "/biorthogonality.csv", "biorthogonality",
                      res.biorthogonality, 1);
    write_measure_csv(cfg.out_dir + "/projection.csv", "projection-residual", res.projection, 1);

    std::ofstream ritz(cfg.out_dir + "/ritz.csv");
    require(ritz.good(), "experiment: cannot write ritz.csv");
    ritz << "# ratkrylov-csv v1 ritz\n";
    ritz << "n,theta_re,theta_im,distance,class\n";
    for (const auto& r : res.ritz) {
      if (r.theta.finite)
        ritz << r.n << "," << format_double(r.theta.value.real()) << ","
             << format_double(r.theta.value.imag()) << "," << format_double(r.distance) << ","
             << accuracy_class_name(r.cls) << "\n";
      else
        ritz << r.n << ",inf,inf,inf," << accuracy_class_name(r.cls) << "\n";
    }

    nlohmann::json j;
    j["schema"] = "ratkrylov-summary v1";
    j["config"]["name"] = cfg.name;
    j["config"]["matrix"] =
        cfg.use_generator ? ("triangular:m=" + std::to_string(cfg.gen_m)) : cfg.matrix_path;
    j["config"]["n"] = cfg.n;
    j["config"]["min_n"] = cfg.min_n;
    j["config"]["seed"] = cfg.seed_set ? nlohmann::json(cfg.seed) : nlohmann::json();
    j["config"]["start"] = cfg.start;
    j["config"]["rebiorthogonalize"] = cfg.rebiorthogonalize;
    std::vector<std::string> pk, pl;
    for (const auto& p : cfg.poles_k) pk.push_back(p.str());
    for (const auto& p : cfg.poles_l) pl.push_back(p.str());
    j["config"]["poles_k"] = pk;
    j["config"]["poles_l"] = pl;
    j["breakdown"]["occurred"] = res.breakdown.occurred;
    if (res.breakdown.occurred) {
      j["breakdown"]["step"] = res.breakdown.step;
      j["breakdown"]["kind"] = res.breakdown.kind;
    }
    j["n_completed"] = res.n_completed;
    j["final_measures"]["biorthogonality"] =
        res.biorthogonality.empty() ? 0.0 : res.biorthogonality.back();
    j["final_measures"]["projection"] = res.projection.empty() ? 0.0 : res.projection.back();
    j["pole_recovery"]["sub_max_error"] = res.pole_sub_error;
    j["pole_recovery"]["super_max_error"] = res.pole_super_error;
    j["pole_recovery"]["ok"] = res.pole_sub_error < 1e-10 && res.pole_super_error < 1e-10;
    std::ofstream js(cfg.out_dir + "/summary.json");
    require(js.good(), "experiment: cannot write summary.json");
    js << j.dump(2) << "\n";
  }
  return res;
}

}  // namespace rk
