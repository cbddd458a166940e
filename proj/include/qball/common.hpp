#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace qball {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::ArrayXXcd;
using Eigen::Index;
using Eigen::Vector2d;

inline constexpr const char* kVersion = "1.0.0";

/// Bad or inconsistent run configuration (CLI exit code 2).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A requested solve did not converge and --strict was set (CLI exit code 3).
struct nonconvergence_error : std::runtime_error {
  explicit nonconvergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The explicit pseudo-time stepping produced non-finite values (CLI exit code 4).
struct instability_error : std::runtime_error {
  explicit instability_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qball
