#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sstiep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Eigen::Index;

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidProblemData : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonnegativityViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotNormalized : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ShapeMismatch(what);
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace sstiep
