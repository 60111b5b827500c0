// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ssflab/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ssflab/errors.hpp"

namespace ssflab {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct Cursor {
  int line = 0;
  int column = 0;
};

[[noreturn]] void fail(const Cursor& at, const std::string& msg) {
  throw ParseError(msg, at.line, at.column);
}

double parse_double(const std::string& tok, const Cursor& at) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
    fail(at, "expected a number, got '" + tok + "'");
  return v;
}

std::int64_t parse_int(const std::string& tok, const Cursor& at) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    fail(at, "expected an integer, got '" + tok + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& tok, const Cursor& at) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    fail(at, "expected an unsigned integer, got '" + tok + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string scenario_hash(const Scenario& sc) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64,
                fnv1a64(serialize_scenario(sc)));
  return buf;
}

void validate_scenario(const Scenario& sc) {
  if (sc.ambient_dim < 2)
    throw ValidationError("scenario: ambient_dim must be >= 2");
  if (sc.s_nodes < 1) throw ValidationError("scenario: s_nodes must be >= 1");
  if (sc.T <= 0.0) throw ValidationError("scenario: T must be positive");
  if (sc.t_grid_points < 1)
    throw ValidationError("scenario: t_grid_points must be >= 1");
  for (std::size_t i = 1; i < sc.epsilon_schedule.size(); ++i)
    if (!(sc.epsilon_schedule[i] < sc.epsilon_schedule[i - 1]))
      throw ValidationError(
          "scenario: epsilon_schedule must be strictly decreasing");
  for (double e : sc.epsilon_schedule)
    if (!(e > 0.0))
      throw ValidationError("scenario: epsilon_schedule entries must be > 0");
  if (!sc.slice_counts.empty() &&
      sc.slice_counts.size() != sc.epsilon_schedule.size())
    throw ValidationError(
        "scenario: slice_counts must match epsilon_schedule in length");
  for (std::int64_t n : sc.slice_counts)
    if (n < 1) throw ValidationError("scenario: slice_counts entries >= 1");
  if (sc.n_cap < 0) throw ValidationError("scenario: n_cap must be >= 0");
  if (sc.v_spec.rank < 1)
    throw ValidationError("scenario: v rank must be >= 1");
  if (sc.v_spec.hs_norm < 0.0)
    throw ValidationError("scenario: v hs_norm must be >= 0");
  if (!(sc.v_spec.decay > 0.0) || sc.v_spec.decay > 1.0)
    throw ValidationError("scenario: v decay must lie in (0, 1]");
  if (sc.h0_spec.kind == H0Spec::Kind::dense_random && sc.h0_spec.norm <= 0.0)
    throw ValidationError("scenario: h0 norm must be positive");
  for (const SchwartzSpec& s : sc.schwartz_specs) {
    if (s.sigma <= 0.0 || s.t_max <= 0.0 || s.points < 2)
      throw ValidationError("scenario: schwartz spec needs sigma > 0, "
                            "t_max > 0, points >= 2");
  }
  for (const auto& poly : sc.polynomials)
    if (poly.empty())
      throw ValidationError("scenario: polynomial without coefficients");
}

Scenario parse_scenario_text(std::string_view text) {
  Scenario sc;
  sc.epsilon_schedule.clear();

  enum class Section { top, h0, v, poly, schwartz };
  Section section = Section::top;

  std::istringstream stream{std::string(text)};
  std::string raw;
  Cursor at;
  bool have_poly = false;
  bool have_schwartz = false;

  while (std::getline(stream, raw)) {
    ++at.line;
    at.column = 1;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(at, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "h0") {
        section = Section::h0;
      } else if (name == "v") {
        section = Section::v;
      } else if (name == "poly") {
        section = Section::poly;
        sc.polynomials.emplace_back();
        have_poly = true;
      } else if (name == "schwartz") {
        section = Section::schwartz;
        sc.schwartz_specs.emplace_back();
        have_schwartz = true;
      } else {
        fail(at, "unknown section '" + name + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(at, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    at.column = static_cast<int>(raw.find(key) + 1);
    if (key.empty()) fail(at, "empty key");
    if (value.empty()) fail(at, "key '" + key + "' has no value");
    const Cursor vat{at.line,
                     static_cast<int>(raw.rfind(value) + 1)};

    switch (section) {
      case Section::top: {
        if (key == "seed") {
          sc.seed = parse_uint(value, vat);
        } else if (key == "ambient_dim") {
          sc.ambient_dim = static_cast<int>(parse_int(value, vat));
        } else if (key == "s_nodes") {
          sc.s_nodes = static_cast<int>(parse_int(value, vat));
        } else if (key == "T") {
          sc.T = parse_double(value, vat);
        } else if (key == "t_grid_points") {
          sc.t_grid_points = static_cast<int>(parse_int(value, vat));
        } else if (key == "n_cap") {
          sc.n_cap = parse_int(value, vat);
        } else if (key == "t_values") {
          sc.t_values.clear();
          for (const auto& tok : split_ws(value))
            sc.t_values.push_back(parse_double(tok, vat));
        } else if (key == "epsilon_schedule") {
          sc.epsilon_schedule.clear();
          for (const auto& tok : split_ws(value))
            sc.epsilon_schedule.push_back(parse_double(tok, vat));
        } else if (key == "slice_counts") {
          sc.slice_counts.clear();
          for (const auto& tok : split_ws(value))
            sc.slice_counts.push_back(parse_int(tok, vat));
        } else {
          fail(at, "unknown key '" + key + "'");
        }
        break;
      }
      case Section::h0: {
        if (key == "kind") {
          if (value == "dense-random")
            sc.h0_spec.kind = H0Spec::Kind::dense_random;
          else if (value == "diagonal-formula")
            sc.h0_spec.kind = H0Spec::Kind::diagonal_formula;
          else if (value == "lattice-laplacian")
            sc.h0_spec.kind = H0Spec::Kind::lattice_laplacian;
          else
            fail(vat, "unknown h0 kind '" + value + "'");
        } else if (key == "norm") {
          sc.h0_spec.norm = parse_double(value, vat);
        } else if (key == "c") {
          sc.h0_spec.c = parse_double(value, vat);
        } else if (key == "p") {
          sc.h0_spec.p = parse_double(value, vat);
        } else {
          fail(at, "unknown key '" + key + "' in [h0]");
        }
        break;
      }
      case Section::v: {
        if (key == "kind") {
          if (value == "dense-random")
            sc.v_spec.kind = VSpec::Kind::dense_random;
          else if (value == "random-hs")
            sc.v_spec.kind = VSpec::Kind::random_hs;
          else if (value == "rank-r")
            sc.v_spec.kind = VSpec::Kind::rank_r;
          else
            fail(vat, "unknown v kind '" + value + "'");
        } else if (key == "hs_norm") {
          sc.v_spec.hs_norm = parse_double(value, vat);
        } else if (key == "decay") {
          sc.v_spec.decay = parse_double(value, vat);
        } else if (key == "rank") {
          sc.v_spec.rank = static_cast<int>(parse_int(value, vat));
        } else {
          fail(at, "unknown key '" + key + "' in [v]");
        }
        break;
      }
      case Section::poly: {
        if (key == "coeffs") {
          auto& coeffs = sc.polynomials.back();
          coeffs.clear();
          for (const auto& tok : split_ws(value))
            coeffs.push_back(parse_double(tok, vat));
        } else {
          fail(at, "unknown key '" + key + "' in [poly]");
        }
        break;
      }
      case Section::schwartz: {
        SchwartzSpec& s = sc.schwartz_specs.back();
        if (key == "sigma") {
          s.sigma = parse_double(value, vat);
        } else if (key == "t_max") {
          s.t_max = parse_double(value, vat);
        } else if (key == "points") {
          s.points = static_cast<int>(parse_int(value, vat));
        } else {
          fail(at, "unknown key '" + key + "' in [schwartz]");
        }
        break;
      }
    }
  }
  (void)have_poly;
  (void)have_schwartz;
  validate_scenario(sc);
  return sc;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream os;
  os << "# ssflab scenario\n";
  os << "seed = " << sc.seed << "\n";
  os << "ambient_dim = " << sc.ambient_dim << "\n";
  os << "s_nodes = " << sc.s_nodes << "\n";
  os << "T = " << format_double(sc.T) << "\n";
  os << "t_grid_points = " << sc.t_grid_points << "\n";
  os << "n_cap = " << sc.n_cap << "\n";
  if (!sc.t_values.empty()) {
    os << "t_values =";
    for (double t : sc.t_values) os << " " << format_double(t);
    os << "\n";
  }
  if (!sc.epsilon_schedule.empty()) {
    os << "epsilon_schedule =";
    for (double e : sc.epsilon_schedule) os << " " << format_double(e);
    os << "\n";
  }
  if (!sc.slice_counts.empty()) {
    os << "slice_counts =";
    for (std::int64_t n : sc.slice_counts) os << " " << n;
    os << "\n";
  }

  os << "\n[h0]\n";
  switch (sc.h0_spec.kind) {
    case H0Spec::Kind::dense_random:
      os << "kind = dense-random\n";
      break;
    case H0Spec::Kind::diagonal_formula:
      os << "kind = diagonal-formula\n";
      break;
    case H0Spec::Kind::lattice_laplacian:
      os << "kind = lattice-laplacian\n";
      break;
  }
  os << "norm = " << format_double(sc.h0_spec.norm) << "\n";
  os << "c = " << format_double(sc.h0_spec.c) << "\n";
  os << "p = " << format_double(sc.h0_spec.p) << "\n";

  os << "\n[v]\n";
  switch (sc.v_spec.kind) {
    case VSpec::Kind::dense_random:
      os << "kind = dense-random\n";
      break;
    case VSpec::Kind::random_hs:
      os << "kind = random-hs\n";
      break;
    case VSpec::Kind::rank_r:
      os << "kind = rank-r\n";
      break;
  }
  os << "hs_norm = " << format_double(sc.v_spec.hs_norm) << "\n";
  os << "decay = " << format_double(sc.v_spec.decay) << "\n";
  os << "rank = " << sc.v_spec.rank << "\n";

  for (const auto& poly : sc.polynomials) {
    os << "\n[poly]\ncoeffs =";
    for (double c : poly) os << " " << format_double(c);
    os << "\n";
  }
  for (const SchwartzSpec& s : sc.schwartz_specs) {
    os << "\n[schwartz]\n";
    os << "sigma = " << format_double(s.sigma) << "\n";
    os << "t_max = " << format_double(s.t_max) << "\n";
    os << "points = " << s.points << "\n";
  }
  return os.str();
}

}  // namespace ssflab
