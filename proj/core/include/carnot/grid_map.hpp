#pragma once

#include "carnot/errors.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace carnot {

/// Axis-aligned box in R^n.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double extent(int axis) const { return hi[axis] - lo[axis]; }
};

/// Analytic mapping descriptor. Kept alongside sampled grids so rescaling
/// and refinement can re-sample exactly instead of interpolating.
struct Generator {
  enum class Kind {
    VerticalPlane,  // (u,v) -> (0, u, v)
    Graph,          // (u,v) -> (phi(u,v), u, v), phi a trig bump
    LegendrianLift, // (u,v) -> (r cos u, r sin u, r^2 u / 2)
    RandomTrig,     // seeded trigonometric polynomial map
    Constant,
    Identity,       // n == m
    AxisEmbed,      // u -> u * e_axis in R^m
  };

  Kind kind = Kind::Constant;
  int n = 0;
  int m = 0;
  std::map<std::string, double> params;

  std::vector<double> eval(const std::vector<double>& u) const;
  /// Allocation-free evaluation for streaming samplers.
  void eval_into(const double* u, double* out) const;

  static std::string kind_name(Kind k);
  static Kind kind_from_name(const std::string& name);

private:
  struct TrigCache;
  mutable std::shared_ptr<const TrigCache> trig_cache_;
};

/// Builds a generator, validating kind-specific parameters.
Generator make_generator(const std::string& kind, int n, int m,
                         const std::map<std::string, double>& params);

std::string generator_to_toml(const Generator& g);
Generator generator_from_toml(const std::string& text);

/// A mapping f: box in R^n -> R^m sampled on a tensor grid of nodes.
/// Values are immutable after sampling; all per-node operations are pure.
class GridMap {
public:
  GridMap() = default;
  GridMap(Box domain, std::vector<int> res, int m);

  static GridMap sample(const Generator& g, const Box& domain, const std::vector<int>& res);

  int n() const { return domain_.dim(); }
  int m() const { return m_; }
  const Box& domain() const { return domain_; }
  const std::vector<int>& resolution() const { return res_; }
  const std::optional<Generator>& generator() const { return generator_; }

  std::size_t node_count() const { return stride_total_; }
  double spacing(int axis) const { return spacings_[axis]; }

  std::size_t flat_index(const std::vector<int>& idx) const;
  std::vector<int> multi_index(std::size_t flat) const;
  bool is_interior(const std::vector<int>& idx) const;
  std::vector<double> node_point(const std::vector<int>& idx) const;

  const double* value(std::size_t flat) const { return values_.data() + flat * m_; }
  double* mutable_value(std::size_t flat) { return values_.data() + flat * m_; }

  /// Finite-difference Jacobian: central differences at interior nodes
  /// (O(h^2)), one-sided at the boundary (O(h)).
  Eigen::MatrixXd differential(const std::vector<int>& idx) const;

  /// Multilinear interpolation of the samples.
  std::vector<double> eval_interp(const std::vector<double>& point) const;

  /// Blow-up rescaling (f(z + r y) - f(z)) / r sampled over [-1,1]^n.
  /// Re-samples analytically when a generator is attached, interpolates
  /// otherwise; requires z + r [-1,1]^n inside the domain.
  GridMap rescale(const std::vector<double>& z, double r, const std::vector<int>& res) const;

  /// Section u^{(z)} of a scalar map over the axes in gamma (1-based).
  /// Complementary coordinates of z must sit on grid planes.
  GridMap slice(const std::vector<int>& gamma, const std::vector<double>& z) const;

  void save_csv(const std::string& path) const;
  static GridMap load_csv(const std::string& path);
  void save_binary(const std::string& path) const;
  static GridMap load_binary(const std::string& path);

private:
  Box domain_;
  std::vector<int> res_;
  int m_ = 0;
  std::vector<double> spacings_;
  std::vector<std::size_t> strides_;
  std::size_t stride_total_ = 0;
  std::vector<double> values_;
  std::optional<Generator> generator_;

  void init_geometry();
};

} // namespace carnot
