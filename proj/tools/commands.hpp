#pragma once

#include "hierpareto/config.hpp"
#include "hierpareto/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hierpareto::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNonConvergence = 3,
  kLemmaFailure = 4,
};

// Everything a subcommand needs: the effective config (file, then
// environment, then flags) and the common flags.
struct RunContext {
  std::string subcommand;
  std::string config_path;  // empty: built-in defaults
  Config config;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;
  int threads = 0;  // 0: OpenMP default
  std::size_t paths = 100000;
  std::string command_line;

  Model model() const;
  SolverSettings solver() const { return solver_settings_from(config); }
  std::filesystem::path out(const std::string& file) const { return out_dir / file; }
};

struct SolveFlags {
  std::optional<double> restrict_to;
  std::size_t table_points = 400;
};

struct SpectrumFlags {
  std::size_t n = 100;
  std::string basis = "collocation";
};

struct SimulateFlags {
  std::string mode;
  std::vector<double> xs;      // empty: mode default
  std::vector<double> gammas = {0.5, 1.0, 2.0};
  int moments = 4;
};

struct MixtureFlags {
  double a1 = 1.0;
  double a2 = 2.0;
  std::size_t n = 4000;
  double window_lo = 1e-3;
  double window_hi = 0.1;
  std::size_t steps = 19;
};

int cmd_exponents(const RunContext& ctx);
int cmd_solve(const RunContext& ctx, const SolveFlags& flags);
int cmd_spectrum(const RunContext& ctx, const SpectrumFlags& flags);
int cmd_simulate(const RunContext& ctx, const SimulateFlags& flags);
int cmd_mixture(const RunContext& ctx, const MixtureFlags& flags);

// key = value record of the run, written next to the outputs.
void write_manifest(const RunContext& ctx);

}  // namespace hierpareto::cli
