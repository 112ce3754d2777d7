#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace wlab {

/// A gradient value in R^d, d <= 3.
template <typename Scalar>
using VecD = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1>;

/// |g|^p with the convention 0^0 = 1.
template <typename Scalar>
Scalar pow_norm(Scalar norm, Scalar p) {
  if (p == Scalar(0)) return Scalar(1);
  if (norm == Scalar(0)) return Scalar(0);
  using std::pow;
  return pow(norm, p);
}

/// b ((1 - delta) + delta |g|^{q-1}) g
template <typename Derived>
VecD<typename Derived::Scalar> damping_flux(const Eigen::MatrixBase<Derived>& g,
                                            typename Derived::Scalar b,
                                            typename Derived::Scalar delta,
                                            typename Derived::Scalar q) {
  using Scalar = typename Derived::Scalar;
  const Scalar coef = b * ((Scalar(1) - delta) + delta * pow_norm(g.norm(), q - Scalar(1)));
  return coef * g;
}

/// |g|^{(q-1)/2} g
template <typename Derived>
VecD<typename Derived::Scalar> f_transform(const Eigen::MatrixBase<Derived>& g,
                                           typename Derived::Scalar q) {
  using Scalar = typename Derived::Scalar;
  return pow_norm(g.norm(), (q - Scalar(1)) / Scalar(2)) * g;
}

/// |g|^{q-1} g
template <typename Derived>
VecD<typename Derived::Scalar> q_power(const Eigen::MatrixBase<Derived>& g,
                                       typename Derived::Scalar q) {
  using Scalar = typename Derived::Scalar;
  return pow_norm(g.norm(), q - Scalar(1)) * g;
}

/// (|x|^{q-1} x - |y|^{q-1} y) . (x - y), nonnegative for q >= 1.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar monotonicity_gap(const Eigen::MatrixBase<DerivedX>& x,
                                           const Eigen::MatrixBase<DerivedY>& y,
                                           typename DerivedX::Scalar q) {
  return (q_power(x, q) - q_power(y, q)).dot(x - y);
}

/// Identifiers of the sampled inequality checks.
///
/// The "as-stated" variants evaluate the printed forms literally and are
/// expected to fail on part of the sample space; the others must hold.
enum class InequalityId {
  lipschitz,        ///< "2.2":  ||x|^{q-1}x - |y|^{q-1}y| <= q |x-y| (|x|+|y|)^{q-1}
  chain_as_stated,  ///< "2.3-as-stated": |..| >= 1/2 |x-y|^2 (|x|+|y|)^{q-1} >= 2^{1-q}|x-y|^{q+1}
  chain_monotone,   ///< "2.3-monotone": gap >= 2^{1-q} |x-y|^{q+1}
  f_transform,      ///< "2.4":  4/(q+1)^2 |F(x)-F(y)|^2 <= gap
  split_vector,     ///< "2.5":  literal vector reading
  split_scalar,     ///< "2.5-scalar": the same bound on magnitudes
  young_as_stated,  ///< "young-as-stated": C = (r-1) r^{r/(r-1)} eps^{-1/(1-r)}
  young_standard,   ///< "young-standard":  C = (r-1) r^{-r/(r-1)} eps^{-1/(r-1)}
};

std::string to_string(InequalityId id);
/// Throws ValidationError for unknown names.
InequalityId parse_inequality_id(const std::string& name);
const std::vector<InequalityId>& all_inequalities();
/// The set gating `inequalities` exit status.
bool must_hold(InequalityId id);

/// One sampled input.
struct InequalitySample {
  int dim = 1;
  double q = 1.0;
  VecD<double> x;
  VecD<double> y;
  double eps = 1.0;  ///< Young only
  double r = 2.0;    ///< Young only
};

/// Signed residual normalized by the magnitude of the compared terms.
/// Nonnegative means the inequality holds at the sample.
struct Residual {
  double absolute = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? absolute / scale : absolute; }
};

Residual inequality_residual(InequalityId id, const InequalitySample& s);

/// Young's constant C(eps, r) in the classical form.
double young_constant_standard(double eps, double r);
/// Young's constant exactly as printed: (r-1) r^{r/(r-1)} eps^{-1/(1-r)}.
double young_constant_as_stated(double eps, double r);

struct SamplingRanges {
  double q_min = 1.0;
  double q_max = 5.0;
  double magnitude_min = 0.0;
  double magnitude_max = 10.0;
  std::vector<int> dims{1, 2, 3};
  double eps_min = 0.01;
  double eps_max = 10.0;
  double r_min = 1.05;
  double r_max = 5.0;
};

struct InequalityReport {
  InequalityId id{};
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double worst_margin = 0.0;  ///< most negative relative residual (or the smallest seen)
  InequalitySample witness;
};

/// Relative residual below which a sample counts as a violation.
inline constexpr double kInequalityTolerance = 1e-12;

/// Draws `samples` points; draw i depends only on (seed, id, i).
InequalityReport check_inequality(InequalityId id, std::uint64_t seed, std::uint64_t samples,
                                  const SamplingRanges& ranges = {});

/// Sample i of the deterministic stream used by check_inequality.
InequalitySample draw_sample(InequalityId id, std::uint64_t seed, std::uint64_t index,
                             const SamplingRanges& ranges);

/// Columns: inequality_id,samples,violations,worst_margin,dim,q,x1,x2,x3,y1,y2,y3,eps,r
std::string inequality_csv_header();
std::string csv_row(const InequalityReport& report);

}  // namespace wlab
