#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ihoc/error.hpp"
#include "ihoc/problem.hpp"

namespace ihoc {
namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  int value_col = 0;  // column offset of value[0] minus one
};

struct Section {
  int line = 0;
  std::vector<Entry> entries;
};

std::string trim(std::string_view s, std::size_t* lead = nullptr) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (lead) *lead = a;
  return std::string(s.substr(a, b - a));
}

const std::map<std::string, int>& known_sections() {
  static const std::map<std::string, int> names = {{"problem", 0}, {"dynamics", 1}, {"objective", 2},
                                                   {"space", 3},   {"controls", 4}, {"constraints", 5}};
  return names;
}

double constant_value(const Entry& e, std::string_view text, int col) {
  std::string s = trim(text);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  Expression c = Expression::parse(text, 0, 0, e.line, col);
  if (c.depends_on(Var::t())) throw SyntaxError("expected a constant, got '" + s + "'", e.line, col + 1);
  return c.at(0.0);
}

std::vector<double> number_list(const Entry& e) {
  std::vector<double> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= e.value.size(); ++i) {
    if (i < e.value.size() && e.value[i] == '(') ++depth;
    if (i < e.value.size() && e.value[i] == ')') --depth;
    if (i == e.value.size() || (e.value[i] == ',' && depth == 0)) {
      std::string_view piece(e.value.data() + start, i - start);
      if (trim(piece).empty())
        throw SyntaxError("empty list element", e.line, e.value_col + static_cast<int>(start) + 1);
      out.push_back(constant_value(e, piece, e.value_col + static_cast<int>(start)));
      start = i + 1;
    }
  }
  return out;
}

int integer(const Entry& e) {
  double v = constant_value(e, e.value, e.value_col);
  if (v != std::floor(v) || v < 0 || v > 1000)
    throw SyntaxError("expected a small nonnegative integer", e.line, e.value_col + 1);
  return static_cast<int>(v);
}

// Splits keys like "phi2_x1" into (2, 'x', 1); "f_u1" gives (0, 'u', 1).
struct KeyParts {
  std::string stem;
  int index = 0;
  char wrt = 0;
  int wrt_index = 0;
};

std::optional<KeyParts> split_key(const std::string& key) {
  KeyParts k;
  std::size_t i = 0;
  while (i < key.size() && std::isalpha(static_cast<unsigned char>(key[i]))) ++i;
  k.stem = key.substr(0, i);
  std::size_t j = i;
  while (j < key.size() && std::isdigit(static_cast<unsigned char>(key[j]))) ++j;
  if (j > i) k.index = std::stoi(key.substr(i, j - i));
  if (j == key.size()) return k;
  if (key[j] != '_' || j + 2 >= key.size() + 0 || (key[j + 1] != 'x' && key[j + 1] != 'u')) return std::nullopt;
  k.wrt = key[j + 1];
  std::size_t d = j + 2;
  if (d >= key.size()) return std::nullopt;
  for (std::size_t q = d; q < key.size(); ++q)
    if (!std::isdigit(static_cast<unsigned char>(key[q]))) return std::nullopt;
  k.wrt_index = std::stoi(key.substr(d));
  return k;
}

[[noreturn]] void unknown_key(const Entry& e, const std::string& section) {
  throw SyntaxError("unknown key '" + e.key + "' in [" + section + "]", e.line, 1);
}

void check_index(const Entry& e, int index, int limit, const char* what) {
  if (index < 1 || index > limit)
    throw Error(ErrorKind::DimensionMismatch, "line " + std::to_string(e.line) + ": " + what + " index " +
                                                  std::to_string(index) + " outside 1.." + std::to_string(limit));
}

// Interval literal such as "[0, 1)", "(-inf, inf)" or "[]".
void parse_interval(const Entry& e, std::string_view text, int col, double& lo, double& hi, bool& lo_open,
                    bool& hi_open) {
  std::size_t lead = 0;
  std::string s = trim(text, &lead);
  col += static_cast<int>(lead);
  if (s.size() < 2 || (s.front() != '[' && s.front() != '(') || (s.back() != ']' && s.back() != ')'))
    throw SyntaxError("expected an interval like [lo, hi]", e.line, col + 1);
  std::string inner = s.substr(1, s.size() - 2);
  if (trim(inner).empty())
    throw Error(ErrorKind::EmptyControlSet, "line " + std::to_string(e.line) + ": empty control set");
  std::size_t comma = inner.find(',');
  if (comma == std::string::npos) throw SyntaxError("expected ',' in interval", e.line, col + 2);
  lo = constant_value(e, std::string_view(inner).substr(0, comma), col + 1);
  hi = constant_value(e, std::string_view(inner).substr(comma + 1), col + 2 + static_cast<int>(comma));
  lo_open = s.front() == '(';
  hi_open = s.back() == ')';
  if (std::isinf(lo)) lo_open = true;
  if (std::isinf(hi)) hi_open = true;
  bool empty = lo > hi || (lo == hi && (lo_open || hi_open));
  if (empty)
    throw Error(ErrorKind::EmptyControlSet, "line " + std::to_string(e.line) + ": interval " + s + " is empty");
}

bool boolean(const Entry& e) {
  std::string v = trim(e.value);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw SyntaxError("expected true or false", e.line, e.value_col + 1);
}

}  // namespace

ControlProblem parse_problem(std::string_view source) {
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    std::string_view raw = source.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (std::size_t hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::size_t lead = 0;
    std::string line = trim(raw, &lead);
    if (line.empty()) {
      if (nl == source.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw SyntaxError("unterminated section header", line_no, static_cast<int>(lead) + 1);
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_sections().count(current))
        throw SyntaxError("unknown section [" + current + "]", line_no, static_cast<int>(lead) + 1);
      if (sections.count(current))
        throw SyntaxError("duplicate section [" + current + "]", line_no, static_cast<int>(lead) + 1);
      sections[current].line = line_no;
      continue;
    }
    if (current.empty()) throw SyntaxError("entry outside of any section", line_no, static_cast<int>(lead) + 1);
    std::size_t eq = raw.find('=');
    std::string key;
    std::size_t value_start = 0;
    if (eq != std::string_view::npos) {
      key = trim(raw.substr(0, eq));
      value_start = eq + 1;
    } else if (std::size_t in = raw.find(" in "); current == "controls" && in != std::string_view::npos) {
      key = trim(raw.substr(0, in));
      value_start = in + 4;
    } else {
      throw SyntaxError("expected 'key = value'", line_no, static_cast<int>(lead) + 1);
    }
    if (key.empty()) throw SyntaxError("missing key", line_no, static_cast<int>(lead) + 1);
    std::size_t vlead = 0;
    std::string value = trim(raw.substr(value_start), &vlead);
    if (value.empty()) throw SyntaxError("missing value for '" + key + "'", line_no, static_cast<int>(value_start) + 1);
    sections[current].entries.push_back({key, value, line_no, static_cast<int>(value_start + vlead)});
    if (nl == source.size()) break;
  }

  if (!sections.count("problem")) throw SyntaxError("missing [problem] section", 1, 1);
  ControlProblem prob;
  std::optional<std::vector<double>> x0;
  bool have_n = false, have_m = false;
  const Entry* x0_entry = nullptr;
  for (const Entry& e : sections["problem"].entries) {
    if (e.key == "name")
      prob.name = e.value;
    else if (e.key == "n") {
      prob.n = integer(e);
      have_n = true;
    } else if (e.key == "m") {
      prob.m = integer(e);
      have_m = true;
    } else if (e.key == "x0")
      x0_entry = &e;
    else if (e.key == "p_exp") {
      prob.p_exp = constant_value(e, e.value, e.value_col);
      if (!(prob.p_exp >= 1.0)) throw Error(ErrorKind::InvalidExponent, "p_exp must lie in [1, inf]");
    } else if (e.key == "sense") {
      if (e.value == "min")
        prob.sense = Sense::Min;
      else if (e.value == "max")
        prob.sense = Sense::Max;
      else
        throw SyntaxError("sense must be min or max", e.line, e.value_col + 1);
    } else
      unknown_key(e, "problem");
  }
  const int line0 = sections["problem"].line;
  if (!have_n) throw SyntaxError("[problem] needs n", line0, 1);
  if (!have_m) throw SyntaxError("[problem] needs m", line0, 1);
  if (!x0_entry) throw SyntaxError("[problem] needs x0", line0, 1);
  x0 = number_list(*x0_entry);
  prob.x0 = Eigen::Map<const Vec>(x0->data(), static_cast<Eigen::Index>(x0->size()));
  const int n = prob.n, m = prob.m;
  auto expr = [&](const Entry& e) { return Expression::parse(e.value, n, m, e.line, e.value_col); };

  prob.phi.resize(n);
  std::vector<bool> phi_seen(n, false);
  prob.phi_x.assign(n, std::vector<Expression>(n));
  prob.phi_u.assign(n, std::vector<Expression>(m));
  prob.phi_x_given.assign(n, std::vector<bool>(n, false));
  prob.phi_u_given.assign(n, std::vector<bool>(m, false));
  if (sections.count("dynamics")) {
    for (const Entry& e : sections["dynamics"].entries) {
      auto k = split_key(e.key);
      if (!k || k->stem != "phi" || k->index == 0) unknown_key(e, "dynamics");
      check_index(e, k->index, n, "state");
      const int i = k->index - 1;
      if (!k->wrt) {
        prob.phi[i] = expr(e);
        phi_seen[i] = true;
      } else if (k->wrt == 'x') {
        check_index(e, k->wrt_index, n, "state");
        prob.phi_x[i][k->wrt_index - 1] = expr(e);
        prob.phi_x_given[i][k->wrt_index - 1] = true;
        prob.user_jacobians.push_back(e.key);
      } else {
        check_index(e, k->wrt_index, m, "control");
        prob.phi_u[i][k->wrt_index - 1] = expr(e);
        prob.phi_u_given[i][k->wrt_index - 1] = true;
        prob.user_jacobians.push_back(e.key);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (!phi_seen[i])
      throw Error(ErrorKind::DimensionMismatch, "dynamics component phi" + std::to_string(i + 1) + " missing");

  if (!sections.count("objective")) throw SyntaxError("missing [objective] section", line_no, 1);
  bool have_f = false, have_omega = false;
  prob.f_x.assign(n, Expression());
  prob.f_u.assign(m, Expression());
  prob.f_x_given.assign(n, false);
  prob.f_u_given.assign(m, false);
  for (const Entry& e : sections["objective"].entries) {
    if (e.key == "f") {
      prob.f = expr(e);
      have_f = true;
    } else if (e.key == "omega") {
      prob.omega = parse_weight_spec(e.value, e.line, e.value_col);
      have_omega = true;
    } else {
      auto k = split_key(e.key);
      if (!k || k->stem != "f" || k->index != 0 || !k->wrt) unknown_key(e, "objective");
      if (k->wrt == 'x') {
        check_index(e, k->wrt_index, n, "state");
        prob.f_x[k->wrt_index - 1] = expr(e);
        prob.f_x_given[k->wrt_index - 1] = true;
      } else {
        check_index(e, k->wrt_index, m, "control");
        prob.f_u[k->wrt_index - 1] = expr(e);
        prob.f_u_given[k->wrt_index - 1] = true;
      }
      prob.user_jacobians.push_back(e.key);
    }
  }
  const int obj_line = sections["objective"].line;
  if (!have_f) throw SyntaxError("[objective] needs f", obj_line, 1);
  if (!have_omega) throw SyntaxError("[objective] needs omega", obj_line, 1);
  if (prob.sense == Sense::Max) {
    prob.f = prob.f.negated();
    for (auto& e : prob.f_x) e = e.negated();
    for (auto& e : prob.f_u) e = e.negated();
  }

  if (!sections.count("space")) throw SyntaxError("missing [space] section", line_no, 1);
  bool have_nu = false;
  for (const Entry& e : sections["space"].entries) {
    if (e.key == "nu") {
      prob.nu = parse_weight_spec(e.value, e.line, e.value_col);
      have_nu = true;
    } else if (e.key == "eta") {
      prob.eta = parse_weight_spec(e.value, e.line, e.value_col);
    } else
      unknown_key(e, "space");
  }
  if (!have_nu) throw SyntaxError("[space] needs nu", sections["space"].line, 1);

  prob.U = ControlBox::whole(m);
  if (sections.count("controls")) {
    const Section& sec = sections["controls"];
    if (sec.entries.empty() && m > 0)
      throw Error(ErrorKind::EmptyControlSet, "line " + std::to_string(sec.line) + ": [controls] declares no set");
    for (const Entry& e : sec.entries) {
      if (e.key == "convex") {
        prob.U.convex = boolean(e);
        continue;
      }
      auto k = split_key(e.key);
      if (!k || k->stem != "u" || k->wrt) unknown_key(e, "controls");
      check_index(e, k->index, m, "control");
      const int j = k->index - 1;
      double lo, hi;
      bool lo_open, hi_open;
      parse_interval(e, e.value, e.value_col, lo, hi, lo_open, hi_open);
      prob.U.lo[j] = lo;
      prob.U.hi[j] = hi;
      prob.U.lo_open[j] = lo_open;
      prob.U.hi_open[j] = hi_open;
    }
  }

  if (sections.count("constraints")) {
    std::map<int, Expression> gs;
    std::map<int, std::map<int, Expression>> gx;
    for (const Entry& e : sections["constraints"].entries) {
      auto k = split_key(e.key);
      if (!k || k->stem != "g" || k->index < 1 || (k->wrt && k->wrt != 'x')) unknown_key(e, "constraints");
      if (!k->wrt)
        gs[k->index] = expr(e);
      else {
        check_index(e, k->wrt_index, n, "state");
        gx[k->index][k->wrt_index - 1] = expr(e);
        prob.user_jacobians.push_back(e.key);
      }
    }
    int l = 0;
    for (const auto& [j, e] : gs) {
      if (j != l + 1) throw Error(ErrorKind::DimensionMismatch, "constraints must be numbered g1..gl without gaps");
      prob.g.push_back(e);
      ++l;
    }
    prob.g_x.assign(l, std::vector<Expression>(n));
    prob.g_x_given.assign(l, std::vector<bool>(n, false));
    for (const auto& [j, row] : gx) {
      if (j > l)
        throw Error(ErrorKind::DimensionMismatch, "Jacobian given for undefined constraint g" + std::to_string(j));
      for (const auto& [i, e] : row) {
        prob.g_x[j - 1][i] = e;
        prob.g_x_given[j - 1][i] = true;
      }
    }
  }

  prob.finalize();
  return prob;
}

}  // namespace ihoc
