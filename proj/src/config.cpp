#include "wlab/config.hpp"

#include "wlab/errors.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace wlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string_view::npos ? s : s.substr(0, pos);
}

double to_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ValidationError(fmt::format("{}: '{}' is not a number", key, text));
  return v;
}

int to_int(const std::string& key, std::string_view text) {
  text = trim(text);
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || v < -2147483647L || v > 2147483647L)
    throw ValidationError(fmt::format("{}: '{}' is not an integer", key, text));
  return static_cast<int>(v);
}

std::vector<double> to_list(const std::string& key, std::string_view text, std::size_t max_len) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(to_double(key, text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() > max_len)
    throw ValidationError(fmt::format("{}: at most {} values expected", key, max_len));
  return out;
}

std::array<double, 2> to_pair(const std::string& key, std::string_view text) {
  const auto v = to_list(key, text, 2);
  return {v[0], v.size() > 1 ? v[1] : 0.0};
}

ProfileKind to_profile(const std::string& key, const std::string& text) {
  const auto kind = parse_profile_kind(text);
  if (!kind)
    throw ValidationError(fmt::format(
        "{}: unknown profile '{}' (zero, gaussian-bump, sine-mode, traveling-pulse)", key, text));
  return *kind;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k{
        "scenario.name", "domain.dim", "domain.extent", "lens.min", "lens.max", "physics.q",
        "grid.n", "time.dt", "time.T", "bc.type", "bc.neumann_profile", "bc.neumann_amplitude",
        "bc.neumann_center", "bc.neumann_width", "source.mms", "source.mms_amplitude",
        "solver.picard_tol", "solver.picard_max_iters", "solver.linear_tol",
        "solver.linear_max_iters", "solver.degeneracy_floor", "output.snapshot_stride"};
    for (const char* side : {"plus", "minus"})
      for (const char* f : {"lambda", "rho", "b", "delta", "k"})
        k.insert(fmt::format("materials.{}.{}", side, f));
    for (const char* p : {"u0", "u1"})
      for (const char* f : {"profile", "amplitude", "center", "width"})
        k.insert(fmt::format("initial.{}_{}", p, f));
    return k;
  }();
  return keys;
}

}  // namespace

Config parse_config(std::string_view text) {
  Config cfg;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError(fmt::format("line {}: unterminated section header", line_no));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ValidationError(fmt::format("line {}: empty section name", line_no));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError(fmt::format("line {}: expected key = value", line_no));
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ValidationError(fmt::format("line {}: missing key", line_no));
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (cfg.values.count(full))
      throw ValidationError(fmt::format("line {}: {} is set twice", line_no, full));
    cfg.values.emplace(std::move(full), std::string(trim(line.substr(eq + 1))));
  }
  return cfg;
}

Config read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_text(const Config& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.values) out += k + "=" + v + "\n";
  return out;
}

std::string config_hash(const Config& cfg) {
  const std::string text = canonical_text(cfg);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

Scenario scenario_from_config(const Config& cfg) {
  for (const auto& [k, v] : cfg.values) {
    if (!known_keys().count(k)) throw ValidationError(fmt::format("{}: unknown key", k));
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = cfg.values.find(key);
    return it == cfg.values.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& key, double& dst) {
    if (const auto* v = get(key)) dst = to_double(key, *v);
  };
  auto integer = [&](const std::string& key, int& dst) {
    if (const auto* v = get(key)) dst = to_int(key, *v);
  };
  auto profile = [&](const std::string& prefix, Profile& p) {
    if (const auto* v = get(prefix + "_profile")) p.kind = to_profile(prefix + "_profile", *v);
    num(prefix + "_amplitude", p.amplitude);
    if (const auto* v = get(prefix + "_center")) p.center = to_pair(prefix + "_center", *v);
    if (const auto* v = get(prefix + "_width")) p.width = to_double(prefix + "_width", *v);
  };

  Scenario s;
  if (const auto* v = get("scenario.name")) s.name = *v;
  integer("domain.dim", s.dimension);
  if (const auto* v = get("domain.extent")) {
    const auto e = to_list("domain.extent", *v, 2);
    s.extent = {e[0], e.size() > 1 ? e[1] : e[0]};
  }
  const auto* lens_min = get("lens.min");
  const auto* lens_max = get("lens.max");
  if ((lens_min == nullptr) != (lens_max == nullptr))
    throw ValidationError("lens: lens.min and lens.max must be given together");
  if (lens_min && !trim(*lens_min).empty()) {
    Box box;
    box.lo = to_pair("lens.min", *lens_min);
    box.hi = to_pair("lens.max", *lens_max);
    s.lens = box;
  }
  for (auto [side, params] : {std::pair{"plus", &s.plus}, std::pair{"minus", &s.minus}}) {
    const std::string base = fmt::format("materials.{}.", side);
    num(base + "lambda", params->lambda);
    num(base + "rho", params->rho);
    num(base + "b", params->b);
    num(base + "delta", params->delta);
    num(base + "k", params->k);
  }
  num("physics.q", s.q);
  integer("grid.n", s.grid_n);
  num("time.dt", s.dt);
  num("time.T", s.T);
  if (const auto* v = get("bc.type")) {
    if (*v == "dirichlet") s.bc = BoundaryKind::dirichlet;
    else if (*v == "neumann") s.bc = BoundaryKind::neumann;
    else throw ValidationError(fmt::format("bc.type: '{}' is neither dirichlet nor neumann", *v));
  }
  profile("bc.neumann", s.neumann);
  profile("initial.u0", s.u0);
  profile("initial.u1", s.u1);
  if (const auto* v = get("source.mms")) s.mms = (*v == "none") ? "" : *v;
  num("source.mms_amplitude", s.mms_amplitude);
  num("solver.picard_tol", s.solver.picard_tol);
  integer("solver.picard_max_iters", s.solver.picard_max_iters);
  num("solver.linear_tol", s.solver.linear_tol);
  integer("solver.linear_max_iters", s.solver.linear_max_iters);
  num("solver.degeneracy_floor", s.solver.degeneracy_floor);
  integer("output.snapshot_stride", s.snapshot_stride);
  return s;
}

namespace {

std::string pair_text(const std::array<double, 2>& v, int dim) {
  return dim == 2 ? fmt::format("{},{}", v[0], v[1]) : fmt::format("{}", v[0]);
}

void write_profile(std::string& out, const std::string& prefix, const Profile& p, int dim) {
  out += fmt::format("{}_profile = {}\n", prefix, to_string(p.kind));
  out += fmt::format("{}_amplitude = {}\n", prefix, p.amplitude);
  if (p.center) out += fmt::format("{}_center = {}\n", prefix, pair_text(*p.center, dim));
  if (p.width) out += fmt::format("{}_width = {}\n", prefix, *p.width);
}

}  // namespace

std::string scenario_to_config_text(const Scenario& s) {
  const int d = s.dimension;
  std::string out;
  if (!s.name.empty()) out += fmt::format("[scenario]\nname = {}\n\n", s.name);
  out += fmt::format("[domain]\ndim = {}\nextent = {}\n\n", d, pair_text(s.extent, d));
  if (s.lens) {
    out += fmt::format("[lens]\nmin = {}\nmax = {}\n\n", pair_text(s.lens->lo, d), pair_text(s.lens->hi, d));
  }
  for (auto [side, m] : {std::pair{"plus", &s.plus}, std::pair{"minus", &s.minus}}) {
    out += fmt::format("[materials.{}]\nlambda = {}\nrho = {}\nb = {}\ndelta = {}\nk = {}\n\n", side,
                       m->lambda, m->rho, m->b, m->delta, m->k);
  }
  out += fmt::format("[physics]\nq = {}\n\n", s.q);
  out += fmt::format("[grid]\nn = {}\n\n", s.grid_n);
  out += fmt::format("[time]\ndt = {}\nT = {}\n\n", s.dt, s.T);
  out += fmt::format("[bc]\ntype = {}\n", s.bc == BoundaryKind::dirichlet ? "dirichlet" : "neumann");
  if (s.bc == BoundaryKind::neumann) write_profile(out, "neumann", s.neumann, d);
  out += "\n[initial]\n";
  write_profile(out, "u0", s.u0, d);
  write_profile(out, "u1", s.u1, d);
  out += fmt::format("\n[source]\nmms = {}\n", s.mms.empty() ? "none" : s.mms);
  if (!s.mms.empty()) out += fmt::format("mms_amplitude = {}\n", s.mms_amplitude);
  const SolverConfig& c = s.solver;
  out += fmt::format("\n[solver]\npicard_tol = {}\npicard_max_iters = {}\nlinear_tol = {}\n", c.picard_tol,
                     c.picard_max_iters, c.linear_tol);
  if (c.linear_max_iters > 0) out += fmt::format("linear_max_iters = {}\n", c.linear_max_iters);
  out += fmt::format("degeneracy_floor = {}\n", c.degeneracy_floor);
  out += fmt::format("\n[output]\nsnapshot_stride = {}\n", s.snapshot_stride);
  return out;
}

}  // namespace wlab
