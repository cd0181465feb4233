#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ale {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Every library failure carries a stable kind string that the CLI reports verbatim.
class Error : public std::runtime_error {
 public:
  Error(const char* kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  const char* kind() const noexcept { return kind_; }

 private:
  const char* kind_;
};

#define ALE_DECLARE_ERROR(Name)                                        \
  struct Name : Error {                                                \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  }

ALE_DECLARE_ERROR(CenterTooClose);
ALE_DECLARE_ERROR(OnDiracString);
ALE_DECLARE_ERROR(EvaluationDomain);
ALE_DECLARE_ERROR(SingularMetric);
ALE_DECLARE_ERROR(FrameNotOrthonormal);
ALE_DECLARE_ERROR(GaugeViolation);
ALE_DECLARE_ERROR(QuadratureDivergence);
ALE_DECLARE_ERROR(NormalizationFailure);
ALE_DECLARE_ERROR(TailDominance);
ALE_DECLARE_ERROR(FitUnstable);
ALE_DECLARE_ERROR(FirstObstructionNonzero);
ALE_DECLARE_ERROR(MissingConstants);
ALE_DECLARE_ERROR(ConfigError);

#undef ALE_DECLARE_ERROR

struct SchemaError : Error {
  explicit SchemaError(const std::string& what, const char* kind = "SchemaError") : Error(kind, what) {}
};

struct SymmetryError : SchemaError {
  explicit SymmetryError(const std::string& what) : SchemaError(what, "SymmetryError") {}
};

// Worker count for node-parallel loops; ALE_LAB_THREADS caps it.
int worker_count();

// Evaluates fn(i) for i in [0, n) across workers. Results land at their own index,
// so any later reduction over the vector is order-deterministic.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn);

// Sum in fixed pairwise order.
double pairwise_sum(const double* values, std::size_t n);
inline double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum(values.data(), values.size());
}

}  // namespace ale

#include "ale/parallel_impl.hpp"
