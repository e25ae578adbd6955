#include "ctd/config.hpp"

#include "ctd/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ctd {

namespace {

std::string trim(const std::string& s)
{
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& text, int line, const std::string& what)
{
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ParseError(line, "invalid number '" + t + "' for " + what);
  return v;
}

long parse_integer(const std::string& text, int line, const std::string& what)
{
  const std::string t = trim(text);
  long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ParseError(line, "invalid integer '" + t + "' for " + what);
  return v;
}

std::vector<double> parse_list(const std::string& text, int line, const std::string& what)
{
  std::vector<double> out;
  if (trim(text).empty())
    return out;
  for (const auto& item : split(text, ','))
    out.push_back(parse_number(item, line, what));
  return out;
}

} // namespace

std::string SurfaceSpec::label() const
{
  if (params.empty())
    return kind;
  std::ostringstream os;
  os << kind << "(";
  for (std::size_t i = 0; i < params.size(); ++i)
    os << (i ? " " : "") << params[i];
  os << ")";
  return os.str();
}

const std::vector<std::string>& experiment_names()
{
  static const std::vector<std::string> names{
      "identities", "cov",        "comparisons", "inequalities",          "symmetry",
      "korn_sweep", "korn_eigen", "counterexample_scaling"};
  return names;
}

QuadraticPolynomial parse_polynomial(const std::string& text, int line)
{
  QuadraticPolynomial p;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s += c;
  if (s.empty())
    throw ParseError(line, "empty polynomial");
  std::size_t pos = 0;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    } else if (pos != 0) {
      throw ParseError(line, "expected '+' or '-' in polynomial '" + text + "'");
    }
    std::size_t end = pos;
    while (end < s.size()) {
      const bool sign_char = s[end] == '+' || s[end] == '-';
      // keep exponent signs such as 1e-3 inside the term
      const bool exponent = end > pos + 1 && (s[end - 1] == 'e' || s[end - 1] == 'E') &&
                            (std::isdigit(static_cast<unsigned char>(s[end - 2])) || s[end - 2] == '.');
      if (sign_char && !exponent)
        break;
      ++end;
    }
    const std::string term = s.substr(pos, end - pos);
    if (term.empty())
      throw ParseError(line, "empty term in polynomial '" + text + "'");
    double coef = sign;
    std::vector<int> vars;
    for (const auto& factor : split(term, '*')) {
      if (factor.size() >= 2 && factor[0] == 'y') {
        const int idx = factor[1] - '1';
        if (idx < 0 || idx > 2)
          throw ParseError(line, "unknown variable '" + factor + "'");
        int power = 1;
        if (factor.size() > 2) {
          if (factor[2] != '^')
            throw ParseError(line, "unknown variable '" + factor + "'");
          power = static_cast<int>(parse_integer(factor.substr(3), line, "exponent"));
        }
        for (int k = 0; k < power; ++k)
          vars.push_back(idx);
      } else {
        coef *= parse_number(factor, line, "coefficient");
      }
    }
    if (vars.size() > 2)
      throw ParseError(line, "polynomial degree exceeds 2 in '" + term + "'");
    if (vars.empty())
      p.add_constant(coef);
    else if (vars.size() == 1)
      p.add_linear(vars[0], coef);
    else
      p.add_quadratic(vars[0], vars[1], coef);
    pos = end;
  }
  return p;
}

ProfilePair parse_profile(const std::string& text_in, int line)
{
  const std::string text = trim(text_in);
  if (text == "shell")
    return shell_profile();
  if (text == "as_example")
    return as_example_profile();
  if (text == "nas_example")
    return nas_example_profile();
  if (text.rfind("poly:", 0) != 0)
    throw ParseError(line, "unknown profile '" + text + "'");
  ProfilePair p;
  p.name = "poly";
  bool have[2] = {false, false};
  for (const auto& part : split(text.substr(5), ';')) {
    if (part.empty())
      continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw ParseError(line, "expected 'g0 = ...' in profile");
    const std::string key = trim(part.substr(0, eq));
    const QuadraticPolynomial poly = parse_polynomial(part.substr(eq + 1), line);
    if (key == "g0") {
      p.g0 = poly;
      have[0] = true;
    } else if (key == "g1") {
      p.g1 = poly;
      have[1] = true;
    } else {
      throw ParseError(line, "unknown profile component '" + key + "'");
    }
  }
  if (!have[0] || !have[1])
    throw ParseError(line, "profile needs both g0 and g1");
  return p;
}

Resolution parse_resolution(const std::string& text, int line)
{
  const auto parts = split(text, 'x');
  if (parts.size() != 3)
    throw ParseError(line, "resolution must look like N1xN2xNr");
  Resolution r;
  r.n1 = static_cast<int>(parse_integer(parts[0], line, "resolution"));
  r.n2 = static_cast<int>(parse_integer(parts[1], line, "resolution"));
  r.nr = static_cast<int>(parse_integer(parts[2], line, "resolution"));
  return r;
}

SurfaceSpec parse_surface(const std::string& text_in, int line)
{
  const std::string text = trim(text_in);
  SurfaceSpec spec;
  const auto open = text.find('(');
  if (open == std::string::npos) {
    spec.kind = text;
  } else {
    if (text.back() != ')')
      throw ParseError(line, "missing ')' in surface");
    spec.kind = trim(text.substr(0, open));
    spec.params = parse_list(text.substr(open + 1, text.size() - open - 2), line, "surface");
  }
  if (spec.kind != "sphere" && spec.kind != "torus" && spec.kind != "ellipsoid" &&
      spec.kind != "revolution")
    throw ParseError(line, "unknown surface '" + spec.kind + "'");
  return spec;
}

RunConfig parse_config(std::istream& in)
{
  RunConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty())
      continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "surface")
      cfg.surface = parse_surface(value, line);
    else if (key == "profile") {
      cfg.profile = parse_profile(value, line);
      cfg.profile_text = value;
    } else if (key == "eps")
      cfg.eps = parse_list(value, line, "eps");
    else if (key == "gamma0")
      cfg.gamma0 = parse_number(value, line, key);
    else if (key == "gamma1")
      cfg.gamma1 = parse_number(value, line, key);
    else if (key == "nu")
      cfg.nu = parse_number(value, line, key);
    else if (key == "experiment")
      cfg.experiment = value;
    else if (key == "resolution")
      cfg.resolution = parse_resolution(value, line);
    else if (key == "seed") {
      const long s = parse_integer(value, line, key);
      if (s < 0)
        throw ParseError(line, "seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "out")
      cfg.out = value;
    else if (key == "samples")
      cfg.samples = static_cast<int>(parse_integer(value, line, key));
    else if (key == "monte_carlo")
      cfg.monte_carlo = parse_integer(value, line, key);
    else if (key == "orthogonality") {
      if (value == "none")
        cfg.orthogonality = Orthogonality::None;
      else if (value == "against_R_eps")
        cfg.orthogonality = Orthogonality::AgainstReps;
      else if (value == "against_R_g")
        cfg.orthogonality = Orthogonality::AgainstRg;
      else if (value == "against_Kg_extension")
        cfg.orthogonality = Orthogonality::AgainstKgExtension;
      else
        throw ParseError(line, "unknown orthogonality mode '" + value + "'");
    } else if (key == "beta")
      cfg.beta = parse_number(value, line, key);
    else if (key == "degree")
      cfg.degree = static_cast<int>(parse_integer(value, line, key));
    else if (key == "killing") {
      const auto v = parse_list(value, line, key);
      if (v.size() != 3)
        throw ParseError(line, "killing axis needs three components");
      cfg.killing = Vec3(v[0], v[1], v[2]);
    } else
      throw ParseError(line, "unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ParseError(0, "cannot open '" + path + "'");
  return parse_config(in);
}

std::shared_ptr<const Surface> build_surface(const SurfaceSpec& spec, Resolution res)
{
  const auto& p = spec.params;
  auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw ValidationError("surface", spec.kind + " takes " + std::to_string(n) + " parameters");
  };
  if (spec.kind == "sphere") {
    need(0);
    return std::make_shared<const Surface>(make_sphere(res));
  }
  if (spec.kind == "torus") {
    need(2);
    if (!(p[0] > p[1] && p[1] > 0.0))
      throw ValidationError("surface", "torus needs R > a > 0");
    return std::make_shared<const Surface>(make_torus(p[0], p[1], res));
  }
  if (spec.kind == "ellipsoid") {
    need(3);
    if (!(p[0] > 0 && p[1] > 0 && p[2] > 0))
      throw ValidationError("surface", "ellipsoid axes must be positive");
    return std::make_shared<const Surface>(make_ellipsoid(p[0], p[1], p[2], res));
  }
  if (spec.kind == "revolution") {
    need(1);
    if (!(p[0] > -0.5 && p[0] < 1.0))
      throw ValidationError("surface", "revolution bump must lie in (-0.5, 1)");
    return std::make_shared<const Surface>(make_bumped_revolution(p[0], res));
  }
  throw ValidationError("surface", "unknown surface '" + spec.kind + "'");
}

void validate(const RunConfig& cfg)
{
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw ValidationError("experiment", "unknown experiment '" + cfg.experiment + "'");
  if (cfg.experiment != "identities") {
    if (cfg.eps.empty())
      throw ValidationError("eps", "at least one value is required");
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
      if (!(cfg.eps[i] > 0.0 && cfg.eps[i] <= 1.0))
        throw ValidationError("eps", "values must lie in (0, 1]");
      if (i > 0 && !(cfg.eps[i] < cfg.eps[i - 1]))
        throw ValidationError("eps", "values must be strictly decreasing");
    }
  }
  if (!(cfg.gamma0 >= 0.0))
    throw ValidationError("gamma0", "must be nonnegative");
  if (!(cfg.gamma1 >= 0.0))
    throw ValidationError("gamma1", "must be nonnegative");
  if (!(cfg.nu > 0.0))
    throw ValidationError("nu", "must be positive");
  const Resolution& r = cfg.resolution;
  if (r.n1 < 4 || r.n2 < 4 || r.nr < 1 || r.n1 > 4096 || r.n2 > 4096 || r.nr > 64)
    throw ValidationError("resolution", "out of range");
  if (cfg.samples < 1)
    throw ValidationError("samples", "must be positive");
  if (cfg.monte_carlo < 0)
    throw ValidationError("monte_carlo", "must be nonnegative");
  if (!(cfg.beta >= 0.0 && cfg.beta < 1.0))
    throw ValidationError("beta", "must lie in [0, 1)");
  if (cfg.degree < 1 || cfg.degree > 4)
    throw ValidationError("degree", "must lie in [1, 4]");

  const auto surface = build_surface(cfg.surface, cfg.resolution);
  double min_g = std::numeric_limits<double>::infinity(), max_abs = 0.0;
  for (const auto& f : surface->node_frames()) {
    const double a = cfg.profile.g0.value(f.y), b = cfg.profile.g1.value(f.y);
    min_g = std::min(min_g, b - a);
    max_abs = std::max({max_abs, std::abs(a), std::abs(b)});
  }
  if (!(min_g > 1e-6))
    throw ValidationError("profile", "g1 - g0 must stay positive, min = " + std::to_string(min_g));
  for (double e : cfg.eps)
    if (!(e * max_abs < surface->reach()))
      throw ValidationError("eps", "eps * max|g_i| reaches the tube radius");
}

} // namespace ctd
