#pragma once

#include "hierpareto/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hierpareto {

// Flat `key = value` settings with dotted keys; '#' starts a comment.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  // Every known key KEY.PART may be overridden by PREFIX + KEY_PART (upper case).
  void apply_environment(const std::string& prefix = "HIERPARETO_");

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  const std::string& origin() const noexcept { return origin_; }

 private:
  std::map<std::string, std::string> entries_;
  std::string origin_;
};

const std::vector<std::string>& known_config_keys();

// Environment variable name for a key, e.g. kernel.lambda -> HIERPARETO_KERNEL_LAMBDA.
std::string env_name(const std::string& key, const std::string& prefix = "HIERPARETO_");

ModelConfig model_config_from(const Config& cfg);

struct SolverSettings {
  std::size_t n_nodes = 401;
  double x_min = 1e-4;
  double grading = 2.0;
  double tol = 1e-8;
  int max_iter = 20000;
};

SolverSettings solver_settings_from(const Config& cfg);

}  // namespace hierpareto
