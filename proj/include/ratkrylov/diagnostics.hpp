#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratkrylov/lanczos.hpp"

namespace rk {

/// Upper-triangular test matrix with prescribed eigenvalues on the diagonal
/// and seeded standard complex normal entries above it. Bit-deterministic for
/// a fixed seed.
Matrix gen_upper_triangular(Index m, const std::vector<Complex>& eigenvalues, uint64_t seed);

/// ||W^H V - I||_2.
double biorthogonality_measure(const Matrix& v, const Matrix& w);

/// ||W_{n+1}^H A V_{n+1} S - T||_2 for an extended (n+1) x n pencil.
double projection_residual(const Matrix& a, const Matrix& v, const Matrix& w,
                           const TridiagonalPencil& pencil);

struct RitzValue {
  Complex value{0, 0};
  bool finite = true;
};

/// Generalized eigenvalues of a square pencil (T, S): eigenvalues of T S^{-1}
/// when S is well conditioned, otherwise of the reversed pencil with infinite
/// values reported as markers. Throws when the pencil is singular both ways.
std::vector<RitzValue> ritz_values(const TridiagonalPencil& square_pencil,
                                   double cond_limit = 1e10);

enum class AccuracyClass { Red, Yellow, Green, Blue };
AccuracyClass classify_distance(double distance);
const char* accuracy_class_name(AccuracyClass c);

struct RitzRecord {
  Index n;
  RitzValue theta;
  double distance;
  AccuracyClass cls;
};

/// Distance of each Ritz value to the nearest spectrum point, classified.
std::vector<RitzRecord> ritz_convergence(const std::vector<Complex>& spectrum, Index n,
                                         const std::vector<RitzValue>& values);

struct ExperimentConfig {
  std::string name = "custom";
  std::string matrix_path;  // Matrix Market input, or:
  bool use_generator = false;
  Index gen_m = 0;
  std::vector<Complex> gen_eigenvalues;
  bool seed_set = false;
  uint64_t seed = 0;
  std::vector<ProjectivePole> poles_k;  // cycle for Xi
  std::vector<ProjectivePole> poles_l;  // cycle for Psi
  Index n = 0;
  Index min_n = 2;
  std::string out_dir;
  std::string start = "ones";  // ones | randn
  bool rebiorthogonalize = false;
  double breakdown_tol = 1e-13;

  void validate(Index m) const;
};

ExperimentConfig example1_config(uint64_t seed, const std::string& out_dir);
ExperimentConfig example2_config(uint64_t seed, const std::string& out_dir);

struct ExperimentResult {
  Index n_completed = 0;      // pencil columns
  Index vectors = 0;          // basis vectors
  BreakdownReport breakdown;
  std::vector<double> biorthogonality;  // index n-1 holds the measure at n
  std::vector<double> projection;       // index n-1, n = 1..n_completed
  std::vector<RitzRecord> ritz;
  double pole_sub_error = 0.0;
  double pole_super_error = 0.0;
  std::vector<Complex> spectrum;
  bool reached_min_n = false;
};

/// End-to-end run: build the matrix, run the iteration, compute the three
/// monitored measures per subspace dimension, classify Ritz values, check
/// pole recovery, and (when out_dir is nonempty) write the CSV files and the
/// JSON summary.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Resolve the experiment matrix (file or generator) without running.
Matrix experiment_matrix(const ExperimentConfig& cfg);

}  // namespace rk
