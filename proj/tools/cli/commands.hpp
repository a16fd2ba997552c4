#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace uncert::cli {

struct RunConfig {
  std::string command;
  std::string action;  // mus: construct | check | classify
  std::string relation;
  std::vector<int> dims;
  std::vector<int> factors;
  int trials = 1;
  std::uint64_t seed = 0;
  bool has_seed = false;
  double tol_eq = 1e-8;
  std::string format = "json";
  std::string out_path;
  std::string state_path;
  std::vector<std::string> basis_paths;
  std::vector<std::string> povm_paths;
  std::string projector_path;
  std::string spec_path;
  std::string family;
  int factor = 1;
  int restarts = 20;
  int max_iter = 5000;
  int rank = 0;
  double grid_step = 0.0;
};

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uncert::cli
