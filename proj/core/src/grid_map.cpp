#include "carnot/grid_map.hpp"

#include "carnot/toml_lite.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace carnot {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

} // namespace

// Frozen coefficients for the random_trig family, derived from the seed once
// and cached so streaming evaluation stays cheap.
struct Generator::TrigCache {
  int modes = 0;
  std::vector<double> amp;   // per (component, mode)
  std::vector<double> freq;  // per (component, mode, axis)
  std::vector<double> phase; // per (component, mode)
};

std::string Generator::kind_name(Kind k) {
  switch (k) {
    case Kind::VerticalPlane: return "vertical_plane";
    case Kind::Graph: return "graph";
    case Kind::LegendrianLift: return "legendrian_lift";
    case Kind::RandomTrig: return "random_trig";
    case Kind::Constant: return "constant";
    case Kind::Identity: return "identity";
    case Kind::AxisEmbed: return "axis_embed";
  }
  throw InternalError("unreachable generator kind");
}

Generator::Kind Generator::kind_from_name(const std::string& name) {
  if (name == "vertical_plane") return Kind::VerticalPlane;
  if (name == "graph") return Kind::Graph;
  if (name == "legendrian_lift") return Kind::LegendrianLift;
  if (name == "random_trig") return Kind::RandomTrig;
  if (name == "constant") return Kind::Constant;
  if (name == "identity") return Kind::Identity;
  if (name == "axis_embed") return Kind::AxisEmbed;
  throw UnknownName("unknown generator kind: " + name);
}

void Generator::eval_into(const double* u, double* out) const {
  for (int c = 0; c < m; ++c) out[c] = 0.0;
  switch (kind) {
    case Kind::VerticalPlane:
      // transversal coordinate plane {x1 = 0}
      out[1] = u[0];
      out[2] = u[1];
      break;
    case Kind::Graph: {
      // x3-graph over the horizontal plane; zero amplitude is the inclusion
      // (u, v) -> (u, v, 0)
      double amp = get_param(params, "amp", 0.0);
      double fx = get_param(params, "fx", 2.1);
      double fy = get_param(params, "fy", 1.7);
      double px = get_param(params, "px", 0.3);
      double py = get_param(params, "py", 0.0);
      out[0] = u[0];
      out[1] = u[1];
      out[2] = amp * std::sin(fx * u[0] + px) * std::cos(fy * u[1] + py);
      break;
    }
    case Kind::LegendrianLift: {
      double r = get_param(params, "radius", 1.0);
      out[0] = r * std::cos(u[0]);
      out[1] = r * std::sin(u[0]);
      out[2] = r * r * u[0] / 2.0;
      break;
    }
    case Kind::RandomTrig: {
      if (!trig_cache_) {
        int modes = static_cast<int>(get_param(params, "modes", 3));
        unsigned seed = static_cast<unsigned>(get_param(params, "seed", 1));
        double scale = get_param(params, "scale", 1.0);
        auto cache = std::make_shared<TrigCache>();
        cache->modes = modes;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_int_distribution<int> fdist(1, 3);
        for (int c = 0; c < m; ++c)
          for (int k = 0; k < modes; ++k) {
            cache->amp.push_back(scale * unit(rng) / modes);
            for (int a = 0; a < n; ++a) cache->freq.push_back(fdist(rng));
            cache->phase.push_back(3.14159265358979 * unit(rng));
          }
        trig_cache_ = std::move(cache);
      }
      const TrigCache& tc = *trig_cache_;
      for (int c = 0; c < m; ++c)
        for (int k = 0; k < tc.modes; ++k) {
          std::size_t t = static_cast<std::size_t>(c) * tc.modes + k;
          double arg = tc.phase[t];
          for (int a = 0; a < n; ++a) arg += tc.freq[t * n + a] * u[a];
          out[c] += tc.amp[t] * std::sin(arg);
        }
      break;
    }
    case Kind::Constant:
      for (int c = 0; c < m; ++c) out[c] = get_param(params, "c" + std::to_string(c + 1), 0.0);
      break;
    case Kind::Identity:
      for (int c = 0; c < m; ++c) out[c] = u[c];
      break;
    case Kind::AxisEmbed: {
      int axis = static_cast<int>(get_param(params, "axis", 1));
      out[axis - 1] = u[0];
      break;
    }
  }
}

std::vector<double> Generator::eval(const std::vector<double>& u) const {
  if (static_cast<int>(u.size()) != n) throw DimensionMismatch("generator input length");
  std::vector<double> out(m, 0.0);
  eval_into(u.data(), out.data());
  return out;
}

Generator make_generator(const std::string& kind, int n, int m,
                         const std::map<std::string, double>& params) {
  Generator g;
  g.kind = Generator::kind_from_name(kind);
  g.n = n;
  g.m = m;
  g.params = params;
  switch (g.kind) {
    case Generator::Kind::VerticalPlane:
    case Generator::Kind::Graph:
      if (n != 2 || m != 3) throw CarnotError("bad params: " + kind + " needs n=2, m=3");
      break;
    case Generator::Kind::LegendrianLift:
      if ((n != 1 && n != 2) || m != 3)
        throw CarnotError("bad params: legendrian_lift needs n in {1,2}, m=3");
      if (get_param(params, "radius", 1.0) <= 0)
        throw CarnotError("bad params: legendrian_lift radius must be positive");
      break;
    case Generator::Kind::RandomTrig:
      if (get_param(params, "modes", 3) < 1) throw CarnotError("bad params: modes >= 1");
      break;
    case Generator::Kind::Constant:
      break;
    case Generator::Kind::Identity:
      if (n != m) throw CarnotError("bad params: identity needs n == m");
      break;
    case Generator::Kind::AxisEmbed: {
      if (n != 1) throw CarnotError("bad params: axis_embed needs n == 1");
      int axis = static_cast<int>(get_param(params, "axis", 1));
      if (axis < 1 || axis > m) throw CarnotError("bad params: axis out of range");
      break;
    }
  }
  return g;
}

std::string generator_to_toml(const Generator& g) {
  std::ostringstream os;
  os << "kind = " << toml::escape_string(Generator::kind_name(g.kind)) << "\n";
  os << "n = " << g.n << "\n";
  os << "m = " << g.m << "\n";
  if (!g.params.empty()) {
    os << "\n[params]\n";
    for (const auto& [k, v] : g.params) os << k << " = " << toml::format_double(v) << "\n";
  }
  return os.str();
}

Generator generator_from_toml(const std::string& text) {
  toml::Table t = toml::parse(text);
  std::map<std::string, double> params;
  auto it = t.tables.find("params");
  if (it != t.tables.end())
    for (const auto& [k, v] : it->second.values) params[k] = v.as_number();
  return make_generator(t.at("kind").as_string(), static_cast<int>(t.at("n").as_int()),
                        static_cast<int>(t.at("m").as_int()), params);
}

GridMap::GridMap(Box domain, std::vector<int> res, int m)
    : domain_(std::move(domain)), res_(std::move(res)), m_(m) {
  init_geometry();
  values_.assign(stride_total_ * m_, 0.0);
}

void GridMap::init_geometry() {
  const int n = domain_.dim();
  if (static_cast<int>(res_.size()) != n) throw DimensionMismatch("resolution length");
  if (static_cast<int>(domain_.hi.size()) != n) throw DimensionMismatch("domain box");
  spacings_.resize(n);
  for (int a = 0; a < n; ++a) {
    if (res_[a] < 3) throw CarnotError("resolution must be >= 3 per axis");
    if (!(domain_.hi[a] > domain_.lo[a])) throw CarnotError("domain box must be nondegenerate");
    spacings_[a] = domain_.extent(a) / (res_[a] - 1);
  }
  strides_.assign(n, 1);
  for (int a = n - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * res_[a + 1];
  stride_total_ = strides_[0] * res_[0];
}

GridMap GridMap::sample(const Generator& g, const Box& domain, const std::vector<int>& res) {
  if (domain.dim() != g.n) throw DimensionMismatch("generator/domain dimension");
  GridMap gm(domain, res, g.m);
  gm.generator_ = g;
  const int n = gm.n();
  std::vector<int> idx(n, 0);
  std::vector<double> point(n);
  for (std::size_t flat = 0; flat < gm.stride_total_; ++flat) {
    std::size_t rem = flat;
    for (int a = 0; a < n; ++a) {
      idx[a] = static_cast<int>(rem / gm.strides_[a]);
      rem %= gm.strides_[a];
    }
    for (int a = 0; a < n; ++a) point[a] = domain.lo[a] + idx[a] * gm.spacings_[a];
    g.eval_into(point.data(), gm.mutable_value(flat));
  }
  return gm;
}

std::size_t GridMap::flat_index(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != n()) throw DimensionMismatch("grid index length");
  std::size_t flat = 0;
  for (int a = 0; a < n(); ++a) {
    if (idx[a] < 0 || idx[a] >= res_[a]) throw IndexError("grid index out of range");
    flat += strides_[a] * idx[a];
  }
  return flat;
}

std::vector<int> GridMap::multi_index(std::size_t flat) const {
  std::vector<int> idx(n());
  for (int a = 0; a < n(); ++a) {
    idx[a] = static_cast<int>(flat / strides_[a]);
    flat %= strides_[a];
  }
  return idx;
}

bool GridMap::is_interior(const std::vector<int>& idx) const {
  for (int a = 0; a < n(); ++a)
    if (idx[a] == 0 || idx[a] == res_[a] - 1) return false;
  return true;
}

std::vector<double> GridMap::node_point(const std::vector<int>& idx) const {
  std::vector<double> p(n());
  for (int a = 0; a < n(); ++a) p[a] = domain_.lo[a] + idx[a] * spacings_[a];
  return p;
}

Eigen::MatrixXd GridMap::differential(const std::vector<int>& idx) const {
  const std::size_t base = flat_index(idx);
  Eigen::MatrixXd jac(m_, n());
  std::vector<int> shifted = idx;
  for (int a = 0; a < n(); ++a) {
    const double h = spacings_[a];
    if (idx[a] > 0 && idx[a] < res_[a] - 1) {
      shifted[a] = idx[a] + 1;
      const double* fwd = value(flat_index(shifted));
      shifted[a] = idx[a] - 1;
      const double* bwd = value(flat_index(shifted));
      for (int c = 0; c < m_; ++c) jac(c, a) = (fwd[c] - bwd[c]) / (2 * h);
    } else if (idx[a] == 0) {
      shifted[a] = 1;
      const double* fwd = value(flat_index(shifted));
      const double* here = value(base);
      for (int c = 0; c < m_; ++c) jac(c, a) = (fwd[c] - here[c]) / h;
    } else {
      shifted[a] = idx[a] - 1;
      const double* bwd = value(flat_index(shifted));
      const double* here = value(base);
      for (int c = 0; c < m_; ++c) jac(c, a) = (here[c] - bwd[c]) / h;
    }
    shifted[a] = idx[a];
  }
  return jac;
}

std::vector<double> GridMap::eval_interp(const std::vector<double>& point) const {
  const int n_ = n();
  if (static_cast<int>(point.size()) != n_) throw DimensionMismatch("interp point length");
  std::vector<int> cell(n_);
  std::vector<double> frac(n_);
  for (int a = 0; a < n_; ++a) {
    double t = (point[a] - domain_.lo[a]) / spacings_[a];
    if (t < -1e-9 || t > res_[a] - 1 + 1e-9) throw IndexError("interp point outside domain");
    int i = static_cast<int>(std::floor(t));
    i = std::max(0, std::min(i, res_[a] - 2));
    cell[a] = i;
    frac[a] = t - i;
  }
  std::vector<double> out(m_, 0.0);
  const int corners = 1 << n_;
  std::vector<int> idx(n_);
  for (int mask = 0; mask < corners; ++mask) {
    double w = 1.0;
    for (int a = 0; a < n_; ++a) {
      int bit = (mask >> a) & 1;
      idx[a] = cell[a] + bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    if (w == 0.0) continue;
    const double* v = value(flat_index(idx));
    for (int c = 0; c < m_; ++c) out[c] += w * v[c];
  }
  return out;
}

GridMap GridMap::rescale(const std::vector<double>& z, double r,
                         const std::vector<int>& res) const {
  const int n_ = n();
  if (static_cast<int>(z.size()) != n_) throw DimensionMismatch("rescale center length");
  if (!(r > 0)) throw CarnotError("rescale radius must be positive");
  for (int a = 0; a < n_; ++a)
    if (z[a] - r < domain_.lo[a] - 1e-12 || z[a] + r > domain_.hi[a] + 1e-12)
      throw CarnotError("rescale ball exits the domain");

  Box unit{std::vector<double>(n_, -1.0), std::vector<double>(n_, 1.0)};
  GridMap out(unit, res, m_);
  std::vector<double> fz;
  if (generator_) {
    fz = generator_->eval(z);
  } else {
    fz = eval_interp(z);
  }
  std::vector<double> y(n_), p(n_);
  for (std::size_t flat = 0; flat < out.node_count(); ++flat) {
    std::vector<int> idx = out.multi_index(flat);
    for (int a = 0; a < n_; ++a) {
      y[a] = unit.lo[a] + idx[a] * out.spacing(a);
      p[a] = z[a] + r * y[a];
    }
    std::vector<double> fp = generator_ ? generator_->eval(p) : eval_interp(p);
    double* v = out.mutable_value(flat);
    for (int c = 0; c < m_; ++c) v[c] = (fp[c] - fz[c]) / r;
  }
  return out;
}

GridMap GridMap::slice(const std::vector<int>& gamma, const std::vector<double>& z) const {
  if (m_ != 1) throw DimensionMismatch("slice expects a scalar-valued map");
  const int n_ = n();
  if (gamma.empty() || static_cast<int>(gamma.size()) >= n_)
    throw IndexError("slice axis set must be nonempty and proper");
  std::vector<bool> in_gamma(n_, false);
  for (int a : gamma) {
    if (a < 1 || a > n_) throw IndexError("slice axis out of range");
    if (in_gamma[a - 1]) throw IndexError("duplicate slice axis");
    in_gamma[a - 1] = true;
  }
  if (static_cast<int>(z.size()) != n_) throw DimensionMismatch("slice point length");

  // complementary coordinates must land on grid planes
  std::vector<int> fixed(n_, 0);
  for (int a = 0; a < n_; ++a) {
    if (in_gamma[a]) continue;
    double t = (z[a] - domain_.lo[a]) / spacings_[a];
    int i = static_cast<int>(std::llround(t));
    if (i < 0 || i >= res_[a] || std::abs(t - i) > 1e-9)
      throw IndexError("slice point is not on the complementary grid");
    fixed[a] = i;
  }

  Box sub;
  std::vector<int> sub_res;
  std::vector<int> gamma_axes;
  for (int a = 0; a < n_; ++a)
    if (in_gamma[a]) {
      sub.lo.push_back(domain_.lo[a]);
      sub.hi.push_back(domain_.hi[a]);
      sub_res.push_back(res_[a]);
      gamma_axes.push_back(a);
    }
  GridMap out(sub, sub_res, 1);
  std::vector<int> idx(n_);
  for (std::size_t flat = 0; flat < out.node_count(); ++flat) {
    std::vector<int> sub_idx = out.multi_index(flat);
    idx = fixed;
    for (std::size_t t = 0; t < gamma_axes.size(); ++t) idx[gamma_axes[t]] = sub_idx[t];
    out.mutable_value(flat)[0] = value(flat_index(idx))[0];
  }
  return out;
}

// --- I/O --------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

void GridMap::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw CarnotError("cannot open for writing: " + path);
  out << "carnot-gridmap,1\n";
  out << "n," << n() << "\n";
  out << "m," << m_ << "\n";
  out << "lo";
  for (double v : domain_.lo) out << "," << fmt_double(v);
  out << "\nhi";
  for (double v : domain_.hi) out << "," << fmt_double(v);
  out << "\nres";
  for (int r : res_) out << "," << r;
  out << "\nvalues\n";
  for (std::size_t flat = 0; flat < stride_total_; ++flat) {
    const double* v = value(flat);
    for (int c = 0; c < m_; ++c) {
      if (c) out << ",";
      out << fmt_double(v[c]);
    }
    out << "\n";
  }
}

GridMap GridMap::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CarnotError("cannot open: " + path);
  std::string line;
  auto next_fields = [&](const std::string& tag) {
    if (!std::getline(in, line)) throw ParseError("gridmap csv truncated at " + tag);
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.empty() || fields[0] != tag)
      throw ParseError("gridmap csv expected row '" + tag + "'");
    return fields;
  };
  auto header = next_fields("carnot-gridmap");
  if (header.size() < 2 || header[1] != "1") throw ParseError("unsupported gridmap version");
  int n = std::stoi(next_fields("n").at(1));
  int m = std::stoi(next_fields("m").at(1));
  auto lo_f = next_fields("lo");
  auto hi_f = next_fields("hi");
  auto res_f = next_fields("res");
  if (static_cast<int>(lo_f.size()) != n + 1 || static_cast<int>(hi_f.size()) != n + 1 ||
      static_cast<int>(res_f.size()) != n + 1)
    throw ParseError("gridmap csv header arity");
  Box box;
  std::vector<int> res;
  for (int a = 1; a <= n; ++a) {
    box.lo.push_back(std::stod(lo_f[a]));
    box.hi.push_back(std::stod(hi_f[a]));
    res.push_back(std::stoi(res_f[a]));
  }
  next_fields("values");
  GridMap gm(box, res, m);
  for (std::size_t flat = 0; flat < gm.node_count(); ++flat) {
    if (!std::getline(in, line)) throw ParseError("gridmap csv truncated in values");
    std::stringstream ss(line);
    std::string f;
    for (int c = 0; c < m; ++c) {
      if (!std::getline(ss, f, ',')) throw ParseError("gridmap csv row arity");
      gm.mutable_value(flat)[c] = std::stod(f);
    }
  }
  return gm;
}

void GridMap::save_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CarnotError("cannot open for writing: " + path);
  const char magic[4] = {'C', 'G', 'M', '1'};
  out.write(magic, 4);
  std::int32_t n32 = n(), m32 = m_;
  out.write(reinterpret_cast<const char*>(&n32), 4);
  out.write(reinterpret_cast<const char*>(&m32), 4);
  out.write(reinterpret_cast<const char*>(domain_.lo.data()), 8 * n());
  out.write(reinterpret_cast<const char*>(domain_.hi.data()), 8 * n());
  std::vector<std::int32_t> res32(res_.begin(), res_.end());
  out.write(reinterpret_cast<const char*>(res32.data()), 4 * n());
  out.write(reinterpret_cast<const char*>(values_.data()), 8 * values_.size());
}

GridMap GridMap::load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CarnotError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CGM1", 4) != 0) throw ParseError("bad gridmap binary magic");
  std::int32_t n32 = 0, m32 = 0;
  in.read(reinterpret_cast<char*>(&n32), 4);
  in.read(reinterpret_cast<char*>(&m32), 4);
  if (!in || n32 <= 0 || m32 <= 0 || n32 > 16) throw ParseError("bad gridmap binary header");
  Box box;
  box.lo.resize(n32);
  box.hi.resize(n32);
  in.read(reinterpret_cast<char*>(box.lo.data()), 8 * n32);
  in.read(reinterpret_cast<char*>(box.hi.data()), 8 * n32);
  std::vector<std::int32_t> res32(n32);
  in.read(reinterpret_cast<char*>(res32.data()), 4 * n32);
  if (!in) throw ParseError("gridmap binary truncated");
  GridMap gm(box, std::vector<int>(res32.begin(), res32.end()), m32);
  in.read(reinterpret_cast<char*>(gm.values_.data()), 8 * gm.values_.size());
  if (!in) throw ParseError("gridmap binary truncated in values");
  return gm;
}

} // namespace carnot
