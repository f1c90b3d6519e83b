#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tennis/grnn.hpp"
#include "tennis/indicators.hpp"
#include "tennis/momentum.hpp"

namespace tennis::cli {

enum class Format { csv, json };

/// Effective settings of one invocation after the config file and flags are merged.
struct RunConfig {
  std::string command;
  std::filesystem::path data;
  std::string match;
  std::string player = "1";
  indicators::Segmentation segmentation = indicators::Segmentation::per_set;
  bool x3_as_variance = false;
  int pca_components = 10;
  std::size_t window = 20;
  momentum::TurningOptions turning{};
  momentum::VarianceKind variance = momentum::VarianceKind::sample;
  grnn::CvConfig cv{};
  double sigma_min = 0.01;
  double sigma_max = 2.0;
  std::size_t sigma_count = 40;
  std::filesystem::path out = "out";
  Format format = Format::csv;

  /// Sorted key=value lines of everything that affects output content.
  std::string canonical() const;
  /// 16 hex digits of the 64-bit FNV-1a hash of canonical().
  std::string hash() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

/// Runs one command line (without the program name). Written file paths go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tennis::cli
