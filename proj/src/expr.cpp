#include "ihoc/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ihoc/error.hpp"

namespace ihoc {
namespace detail {

enum class Op : unsigned char {
  Const,
  Time,
  State,
  Control,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Exp,
  Ln,
  Sqrt,
  Sin,
  Cos,
  Abs,
  Sign
};

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  int index = 0;
  std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Node>;

struct Instr {
  Op op;
  double value;
  int index;
};

struct Program {
  std::vector<Instr> code;
  int depth = 0;
};

namespace {

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double value = 0.0, int index = 0) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->a = std::move(a);
  node->b = std::move(b);
  node->value = value;
  node->index = index;
  return node;
}

NodePtr cnst(double v) { return make(Op::Const, nullptr, nullptr, v); }
bool is_c(const NodePtr& p) { return p->op == Op::Const; }
bool is_c(const NodePtr& p, double v) { return p->op == Op::Const && p->value == v; }

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

[[noreturn]] void domain_fail(const char* what, double t, const double* x, int n, const double* u, int m) {
  std::vector<double> xv, uv;
  if (x != nullptr) xv.assign(x, x + n);
  if (u != nullptr) uv.assign(u, u + m);
  throw DomainError(what, t, std::move(xv), std::move(uv));
}

// Applies op to operands; returns false when outside the domain.
bool apply_unary(Op op, double a, double& r, const char*& why) {
  switch (op) {
    case Op::Neg:
      r = -a;
      return true;
    case Op::Exp:
      r = std::exp(a);
      return true;
    case Op::Ln:
      if (!(a > 0.0)) {
        why = "ln of nonpositive argument";
        return false;
      }
      r = std::log(a);
      return true;
    case Op::Sqrt:
      if (!(a >= 0.0)) {
        why = "sqrt of negative argument";
        return false;
      }
      r = std::sqrt(a);
      return true;
    case Op::Sin:
      r = std::sin(a);
      return true;
    case Op::Cos:
      r = std::cos(a);
      return true;
    case Op::Abs:
      r = std::fabs(a);
      return true;
    case Op::Sign:
      r = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
      return true;
    default:
      break;
  }
  why = "bad unary op";
  return false;
}

bool apply_binary(Op op, double a, double b, double& r, const char*& why) {
  switch (op) {
    case Op::Add:
      r = a + b;
      return true;
    case Op::Sub:
      r = a - b;
      return true;
    case Op::Mul:
      r = a * b;
      return true;
    case Op::Div:
      if (b == 0.0) {
        why = "division by zero";
        return false;
      }
      r = a / b;
      return true;
    case Op::Pow:
      if (a < 0.0 && !is_integer(b)) {
        why = "negative base with non-integer exponent";
        return false;
      }
      if (a == 0.0 && b < 0.0) {
        why = "division by zero in power";
        return false;
      }
      r = b == 2.0 ? a * a : std::pow(a, b);
      return true;
    default:
      break;
  }
  why = "bad binary op";
  return false;
}

// Smart constructors: fold constants and drop neutral elements.
NodePtr neg(NodePtr a);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr dvd(NodePtr a, NodePtr b);
NodePtr pw(NodePtr a, NodePtr b);
NodePtr fn(Op op, NodePtr a);

NodePtr fold_unary(Op op, const NodePtr& a) {
  if (!is_c(a)) return nullptr;
  double r;
  const char* why = nullptr;
  if (apply_unary(op, a->value, r, why) && std::isfinite(r)) return cnst(r);
  return nullptr;
}

NodePtr fold_binary(Op op, const NodePtr& a, const NodePtr& b) {
  if (!is_c(a) || !is_c(b)) return nullptr;
  double r;
  const char* why = nullptr;
  if (apply_binary(op, a->value, b->value, r, why) && std::isfinite(r)) return cnst(r);
  return nullptr;
}

NodePtr neg(NodePtr a) {
  if (auto f = fold_unary(Op::Neg, a)) return f;
  if (a->op == Op::Neg) return a->a;
  return make(Op::Neg, std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
  if (auto f = fold_binary(Op::Add, a, b)) return f;
  if (is_c(a, 0.0)) return b;
  if (is_c(b, 0.0)) return a;
  if (b->op == Op::Neg) return sub(std::move(a), b->a);
  return make(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (auto f = fold_binary(Op::Sub, a, b)) return f;
  if (is_c(b, 0.0)) return a;
  if (is_c(a, 0.0)) return neg(std::move(b));
  return make(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (auto f = fold_binary(Op::Mul, a, b)) return f;
  if (is_c(a, 0.0) || is_c(b, 0.0)) return cnst(0.0);
  if (is_c(a, 1.0)) return b;
  if (is_c(b, 1.0)) return a;
  if (is_c(a, -1.0)) return neg(std::move(b));
  if (is_c(b, -1.0)) return neg(std::move(a));
  return make(Op::Mul, std::move(a), std::move(b));
}

NodePtr dvd(NodePtr a, NodePtr b) {
  if (auto f = fold_binary(Op::Div, a, b)) return f;
  if (is_c(a, 0.0) && !is_c(b, 0.0)) return cnst(0.0);
  if (is_c(b, 1.0)) return a;
  return make(Op::Div, std::move(a), std::move(b));
}

NodePtr pw(NodePtr a, NodePtr b) {
  if (auto f = fold_binary(Op::Pow, a, b)) return f;
  if (is_c(b, 1.0)) return a;
  if (is_c(b, 0.0)) return cnst(1.0);
  return make(Op::Pow, std::move(a), std::move(b));
}

NodePtr fn(Op op, NodePtr a) {
  if (auto f = fold_unary(op, a)) return f;
  return make(op, std::move(a));
}

bool matches(const Node& node, Var v) {
  switch (node.op) {
    case Op::Time:
      return v.kind == Var::Time;
    case Op::State:
      return v.kind == Var::State && node.index == v.index;
    case Op::Control:
      return v.kind == Var::Control && node.index == v.index;
    default:
      return false;
  }
}

NodePtr diff(const NodePtr& e, Var v) {
  const Node& n = *e;
  switch (n.op) {
    case Op::Const:
      return cnst(0.0);
    case Op::Time:
    case Op::State:
    case Op::Control:
      return cnst(matches(n, v) ? 1.0 : 0.0);
    case Op::Neg:
      return neg(diff(n.a, v));
    case Op::Add:
      return add(diff(n.a, v), diff(n.b, v));
    case Op::Sub:
      return sub(diff(n.a, v), diff(n.b, v));
    case Op::Mul:
      return add(mul(diff(n.a, v), n.b), mul(n.a, diff(n.b, v)));
    case Op::Div: {
      NodePtr da = diff(n.a, v), db = diff(n.b, v);
      NodePtr first = dvd(da, n.b);
      if (is_c(db, 0.0)) return first;
      return sub(first, dvd(mul(n.a, db), pw(n.b, cnst(2.0))));
    }
    case Op::Pow: {
      NodePtr da = diff(n.a, v), db = diff(n.b, v);
      if (is_c(db, 0.0)) {
        if (is_c(da, 0.0)) return cnst(0.0);
        return mul(mul(n.b, pw(n.a, sub(n.b, cnst(1.0)))), da);
      }
      if (is_c(da, 0.0)) return mul(mul(e, fn(Op::Ln, n.a)), db);
      return mul(e, add(mul(db, fn(Op::Ln, n.a)), dvd(mul(n.b, da), n.a)));
    }
    case Op::Exp:
      return mul(e, diff(n.a, v));
    case Op::Ln:
      return dvd(diff(n.a, v), n.a);
    case Op::Sqrt:
      return dvd(diff(n.a, v), mul(cnst(2.0), e));
    case Op::Sin:
      return mul(fn(Op::Cos, n.a), diff(n.a, v));
    case Op::Cos:
      return neg(mul(fn(Op::Sin, n.a), diff(n.a, v)));
    case Op::Abs:
      return mul(fn(Op::Sign, n.a), diff(n.a, v));
    case Op::Sign:
      return cnst(0.0);
  }
  return cnst(0.0);
}

bool depends(const NodePtr& e, Var v) {
  if (!e) return false;
  if (matches(*e, v)) return true;
  return depends(e->a, v) || depends(e->b, v);
}

bool depends_kind(const NodePtr& e, Op kind) {
  if (!e) return false;
  if (e->op == kind) return true;
  return depends_kind(e->a, kind) || depends_kind(e->b, kind);
}

int max_index(const NodePtr& e, Op kind) {
  if (!e) return -1;
  int here = e->op == kind ? e->index : -1;
  return std::max(here, std::max(max_index(e->a, kind), max_index(e->b, kind)));
}

int emit(const NodePtr& e, std::vector<Instr>& code, int depth) {
  int used = depth + 1;
  if (e->a) used = std::max(used, emit(e->a, code, depth));
  if (e->b) used = std::max(used, emit(e->b, code, depth + 1));
  code.push_back({e->op, e->value, e->index});
  return used;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Exp:
      return "exp";
    case Op::Ln:
      return "ln";
    case Op::Sqrt:
      return "sqrt";
    case Op::Sin:
      return "sin";
    case Op::Cos:
      return "cos";
    case Op::Abs:
      return "abs";
    case Op::Sign:
      return "sign";
    default:
      return "?";
  }
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

void print(const NodePtr& e, std::ostream& os, int parent_prec) {
  int prec = precedence(e->op);
  bool wrap = prec < parent_prec;
  if (wrap) os << '(';
  switch (e->op) {
    case Op::Const: {
      std::ostringstream num;
      num.precision(17);
      num << e->value;
      os << num.str();
      break;
    }
    case Op::Time:
      os << 't';
      break;
    case Op::State:
      os << 'x' << e->index + 1;
      break;
    case Op::Control:
      os << 'u' << e->index + 1;
      break;
    case Op::Neg:
      os << '-';
      print(e->a, os, 4);
      break;
    case Op::Add:
      print(e->a, os, 1);
      os << " + ";
      print(e->b, os, 2);
      break;
    case Op::Sub:
      print(e->a, os, 1);
      os << " - ";
      print(e->b, os, 2);
      break;
    case Op::Mul:
      print(e->a, os, 2);
      os << '*';
      print(e->b, os, 3);
      break;
    case Op::Div:
      print(e->a, os, 2);
      os << '/';
      print(e->b, os, 3);
      break;
    case Op::Pow:
      print(e->a, os, 5);
      os << '^';
      print(e->b, os, 4);
      break;
    default:
      os << op_name(e->op) << '(';
      print(e->a, os, 0);
      os << ')';
      break;
  }
  if (wrap) os << ')';
}

class Parser {
 public:
  Parser(std::string_view text, int n, int m, int line, int column_offset)
      : text_(text), n_(n), m_(m), line_(line), col0_(column_offset) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, line_, col0_ + static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (accept('+'))
        left = add(left, term());
      else if (accept('-'))
        left = sub(left, term());
      else
        return left;
    }
  }

  NodePtr term() {
    NodePtr left = unary_expr();
    for (;;) {
      if (accept('*'))
        left = mul(left, unary_expr());
      else if (accept('/'))
        left = dvd(left, unary_expr());
      else
        return left;
    }
  }

  NodePtr unary_expr() {
    if (accept('-')) return neg(unary_expr());
    if (accept('+')) return unary_expr();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return pw(base, unary_expr());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string lit(text_.substr(start, pos_ - start));
    char* end = nullptr;
    double v = std::strtod(lit.c_str(), &end);
    if (end == lit.c_str() || *end != '\0') {
      pos_ = start;
      fail("malformed number '" + lit + "'");
    }
    return cnst(v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    std::string id(text_.substr(start, pos_ - start));
    skip();
    bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (call) {
      ++pos_;
      if (id == "pow") {
        NodePtr a = expr();
        expect(',');
        NodePtr b = expr();
        expect(')');
        return pw(a, b);
      }
      Op op;
      if (id == "exp")
        op = Op::Exp;
      else if (id == "ln")
        op = Op::Ln;
      else if (id == "sqrt")
        op = Op::Sqrt;
      else if (id == "sin")
        op = Op::Sin;
      else if (id == "cos")
        op = Op::Cos;
      else if (id == "abs")
        op = Op::Abs;
      else if (id == "sign")
        op = Op::Sign;
      else
        unknown(id, start);
      NodePtr a = expr();
      expect(')');
      return fn(op, a);
    }
    if (id == "t") return make(Op::Time);
    if (id == "pi") return cnst(std::numbers::pi);
    if (id.size() >= 2 && (id[0] == 'x' || id[0] == 'u')) {
      bool digits = true;
      for (std::size_t k = 1; k < id.size(); ++k) digits = digits && std::isdigit(static_cast<unsigned char>(id[k]));
      if (digits && id[1] != '0') {
        int idx = std::stoi(id.substr(1));
        int limit = id[0] == 'x' ? n_ : m_;
        if (idx >= 1 && idx <= limit)
          return make(id[0] == 'x' ? Op::State : Op::Control, nullptr, nullptr, 0.0, idx - 1);
      }
    }
    unknown(id, start);
  }

  [[noreturn]] void unknown(const std::string& id, std::size_t start) const {
    std::ostringstream os;
    os << "unknown identifier '" << id << "' at line " << line_ << ", column " << col0_ + static_cast<int>(start) + 1
       << " (n=" << n_ << ", m=" << m_ << ")";
    throw Error(ErrorKind::UnknownIdentifier, os.str());
  }

  std::string_view text_;
  int n_, m_, line_, col0_;
  std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

using detail::NodePtr;
using detail::Op;

Expression::Expression() : Expression(detail::cnst(0.0), 0, 0) {}

Expression::Expression(std::shared_ptr<const detail::Node> root, int n, int m) : root_(std::move(root)), n_(n), m_(m) {
  auto program = std::make_shared<detail::Program>();
  program->depth = detail::emit(root_, program->code, 0);
  program_ = std::move(program);
}

Expression Expression::parse(std::string_view text, int n, int m, int line, int column_offset) {
  detail::Parser parser(text, n, m, line, column_offset);
  return Expression(parser.run(), n, m);
}

Expression Expression::constant(double value, int n, int m) { return Expression(detail::cnst(value), n, m); }

Expression Expression::variable(Var v, int n, int m) {
  switch (v.kind) {
    case Var::Time:
      return Expression(detail::make(Op::Time), n, m);
    case Var::State:
      return Expression(detail::make(Op::State, nullptr, nullptr, 0.0, v.index), n, m);
    case Var::Control:
      return Expression(detail::make(Op::Control, nullptr, nullptr, 0.0, v.index), n, m);
  }
  return Expression();
}

double Expression::operator()(double t, const double* x, const double* u) const {
  const auto& code = program_->code;
  if (code.size() == 1 && code[0].op == Op::Const) return code[0].value;
  double small[32];
  small[0] = 0.0;
  std::vector<double> big;
  double* stack = small;
  if (program_->depth > 32) {
    big.resize(program_->depth);
    stack = big.data();
  }
  int sp = 0;
  for (const auto& ins : code) {
    const char* why = nullptr;
    switch (ins.op) {
      case Op::Const:
        stack[sp++] = ins.value;
        break;
      case Op::Time:
        stack[sp++] = t;
        break;
      case Op::State:
        stack[sp++] = x[ins.index];
        break;
      case Op::Control:
        stack[sp++] = u[ins.index];
        break;
      case Op::Add:
        --sp;
        stack[sp - 1] += stack[sp];
        break;
      case Op::Sub:
        --sp;
        stack[sp - 1] -= stack[sp];
        break;
      case Op::Mul:
        --sp;
        stack[sp - 1] *= stack[sp];
        break;
      case Op::Div:
      case Op::Pow: {
        --sp;
        double r;
        if (!detail::apply_binary(ins.op, stack[sp - 1], stack[sp], r, why)) detail::domain_fail(why, t, x, n_, u, m_);
        stack[sp - 1] = r;
        break;
      }
      default: {
        double r;
        if (!detail::apply_unary(ins.op, stack[sp - 1], r, why)) detail::domain_fail(why, t, x, n_, u, m_);
        stack[sp - 1] = r;
        break;
      }
    }
  }
  return stack[0];
}

double Expression::eval(double t, const Vec& x, const Vec& u) const {
  return (*this)(t, x.size() ? x.data() : nullptr, u.size() ? u.data() : nullptr);
}

Expression Expression::derivative(Var v) const { return Expression(detail::diff(root_, v), n_, m_); }

bool Expression::depends_on(Var v) const { return detail::depends(root_, v); }
bool Expression::depends_on_state() const { return detail::depends_kind(root_, Op::State); }
bool Expression::depends_on_control() const { return detail::depends_kind(root_, Op::Control); }
bool Expression::is_constant() const { return root_->op == Op::Const; }
double Expression::constant_value() const { return root_->value; }

Expression Expression::negated() const { return Expression(detail::neg(root_), n_, m_); }
Expression Expression::plus(const Expression& other) const {
  return Expression(detail::add(root_, other.root_), n_, m_);
}
Expression Expression::times(const Expression& other) const {
  return Expression(detail::mul(root_, other.root_), n_, m_);
}

Expression Expression::with_dims(int n, int m) const {
  if (detail::max_index(root_, Op::State) >= n || detail::max_index(root_, Op::Control) >= m)
    throw Error(ErrorKind::DimensionMismatch, "expression '" + str() + "' references variables beyond n=" +
                                                  std::to_string(n) + ", m=" + std::to_string(m));
  return Expression(root_, n, m);
}

std::string Expression::str() const {
  std::ostringstream os;
  detail::print(root_, os, 0);
  return os.str();
}

}  // namespace ihoc
