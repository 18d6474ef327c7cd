#include "pricegame/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

namespace pricegame {

namespace {
enum class Kind : std::uint8_t { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Min, Max, Pwl };
}

struct Expr::Node {
  Kind kind;
  double value = 0.0;                                // Const
  std::string name;                                  // Var
  std::vector<std::shared_ptr<const Node>> args;     // everything else
  std::vector<std::pair<double, double>> points;     // Pwl breakpoints
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Kind k) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Kind::Const;
  n->value = v;
  return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->args = {std::move(a), std::move(b)};
  return n;
}

// ---------------------------------------------------------------------------
// Parser: expr := term (('+'|'-') term)*
//         term := unary (('*'|'/') unary)*
//         unary := '-' unary | power
//         power := atom ('^' unary)?          (right associative)
//         atom := number | ident | ident '(' expr {',' expr} ')' | '(' expr ')'
// ---------------------------------------------------------------------------
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression error at position " + std::to_string(pos_) + ": " + what +
                     " in \"" + std::string(src_) + "\"");
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = make_binary(Kind::Add, lhs, term());
      else if (eat('-'))
        lhs = make_binary(Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*'))
        lhs = make_binary(Kind::Mul, lhs, unary());
      else if (eat('/'))
        lhs = make_binary(Kind::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) {
      auto n = make_node(Kind::Neg);
      const_cast<Expr::Node*>(n.get())->args = {unary()};
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make_binary(Kind::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    double v = 0.0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{}) fail("malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - src_.data());
    return make_const(v);
  }

  NodePtr ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')
        ++pos_;
      else
        break;
    }
    std::string name(src_.substr(start, pos_ - start));
    if (peek() != '(') {
      auto n = make_node(Kind::Var);
      const_cast<Expr::Node*>(n.get())->name = std::move(name);
      return n;
    }
    eat('(');
    std::vector<NodePtr> args;
    args.push_back(expr());
    while (eat(',')) args.push_back(expr());
    if (!eat(')')) fail("expected ')' after arguments");

    if (name == "min" || name == "max") {
      if (args.size() < 2) fail(name + " needs at least two arguments");
      auto n = make_node(name == "min" ? Kind::Min : Kind::Max);
      const_cast<Expr::Node*>(n.get())->args = std::move(args);
      return n;
    }
    if (name == "pwl") {
      if (args.size() < 5 || args.size() % 2 == 0)
        fail("pwl needs an argument plus at least two (x, y) breakpoint pairs");
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 1; i + 1 < args.size(); i += 2) {
        if (args[i]->kind != Kind::Const || args[i + 1]->kind != Kind::Const)
          fail("pwl breakpoints must be constants");
        pts.emplace_back(args[i]->value, args[i + 1]->value);
      }
      for (std::size_t i = 1; i < pts.size(); ++i)
        if (!(pts[i - 1].first < pts[i].first)) fail("pwl breakpoints must be strictly increasing");
      auto n = make_node(Kind::Pwl);
      auto* m = const_cast<Expr::Node*>(n.get());
      m->args = {args[0]};
      m->points = std::move(pts);
      return n;
    }
    fail("unknown function '" + name + "'");
  }
};

void collect_vars(const NodePtr& n, std::set<std::string>& out) {
  if (!n) return;
  if (n->kind == Kind::Var) out.insert(n->name);
  for (const auto& a : n->args) collect_vars(a, out);
}

std::string render(const NodePtr& n);

std::string render_child(const NodePtr& n, bool parens_for_sum_only) {
  bool need = false;
  switch (n->kind) {
    case Kind::Add:
    case Kind::Sub:
      need = true;
      break;
    case Kind::Mul:
    case Kind::Div:
    case Kind::Neg:
      need = !parens_for_sum_only;
      break;
    default:
      break;
  }
  std::string s = render(n);
  return need ? "(" + s + ")" : s;
}

std::string render(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Const:
      return format_double(n->value);
    case Kind::Var:
      return n->name;
    case Kind::Neg:
      return "-" + render_child(n->args[0], false);
    case Kind::Add:
      return render_child(n->args[0], true) + " + " + render_child(n->args[1], true);
    case Kind::Sub:
      return render_child(n->args[0], true) + " - " + render_child(n->args[1], false);
    case Kind::Mul:
      return render_child(n->args[0], false) + " * " + render_child(n->args[1], false);
    case Kind::Div:
      return render_child(n->args[0], false) + " / " + render_child(n->args[1], false);
    case Kind::Pow:
      return render_child(n->args[0], false) + "^" + render_child(n->args[1], false);
    case Kind::Min:
    case Kind::Max: {
      std::string s = n->kind == Kind::Min ? "min(" : "max(";
      for (std::size_t i = 0; i < n->args.size(); ++i) {
        if (i) s += ", ";
        s += render(n->args[i]);
      }
      return s + ")";
    }
    case Kind::Pwl: {
      std::string s = "pwl(" + render(n->args[0]);
      for (const auto& [x, y] : n->points)
        s += ", " + format_double(x) + ", " + format_double(y);
      return s + ")";
    }
  }
  return "";
}

// Derivative over the smooth subset of the basis. Returns nullptr when the
// tree is non-smooth in `var` (min/max/pwl, or non-constant exponents).
NodePtr diff(const NodePtr& n, std::string_view var) {
  switch (n->kind) {
    case Kind::Const:
      return make_const(0.0);
    case Kind::Var:
      return make_const(n->name == var ? 1.0 : 0.0);
    case Kind::Neg: {
      NodePtr d = diff(n->args[0], var);
      if (!d) return nullptr;
      auto r = make_node(Kind::Neg);
      const_cast<Expr::Node*>(r.get())->args = {d};
      return r;
    }
    case Kind::Add:
    case Kind::Sub: {
      NodePtr da = diff(n->args[0], var);
      NodePtr db = diff(n->args[1], var);
      if (!da || !db) return nullptr;
      return make_binary(n->kind, da, db);
    }
    case Kind::Mul: {
      NodePtr da = diff(n->args[0], var);
      NodePtr db = diff(n->args[1], var);
      if (!da || !db) return nullptr;
      return make_binary(Kind::Add, make_binary(Kind::Mul, da, n->args[1]),
                         make_binary(Kind::Mul, n->args[0], db));
    }
    case Kind::Div: {
      NodePtr da = diff(n->args[0], var);
      NodePtr db = diff(n->args[1], var);
      if (!da || !db) return nullptr;
      NodePtr num = make_binary(Kind::Sub, make_binary(Kind::Mul, da, n->args[1]),
                                make_binary(Kind::Mul, n->args[0], db));
      NodePtr den = make_binary(Kind::Mul, n->args[1], n->args[1]);
      return make_binary(Kind::Div, num, den);
    }
    case Kind::Pow: {
      if (n->args[1]->kind != Kind::Const) {
        // u^v with varying v: only smooth-diffable if neither side uses var
        std::set<std::string> used;
        collect_vars(n, used);
        if (used.count(std::string(var))) return nullptr;
        return make_const(0.0);
      }
      double c = n->args[1]->value;
      NodePtr du = diff(n->args[0], var);
      if (!du) return nullptr;
      // c * u^(c-1) * u'
      NodePtr p = make_binary(Kind::Pow, n->args[0], make_const(c - 1.0));
      return make_binary(Kind::Mul, make_binary(Kind::Mul, make_const(c), p), du);
    }
    case Kind::Min:
    case Kind::Max:
    case Kind::Pwl: {
      std::set<std::string> used;
      collect_vars(n, used);
      if (used.count(std::string(var))) return nullptr;
      return make_const(0.0);
    }
  }
  return nullptr;
}

double eval_node(const NodePtr& n, std::span<const std::string> names,
                 std::span<const double> values) {
  switch (n->kind) {
    case Kind::Const:
      return n->value;
    case Kind::Var: {
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == n->name) return values[i];
      throw UsageError("unbound variable '" + n->name + "'");
    }
    case Kind::Neg:
      return -eval_node(n->args[0], names, values);
    case Kind::Add:
      return eval_node(n->args[0], names, values) + eval_node(n->args[1], names, values);
    case Kind::Sub:
      return eval_node(n->args[0], names, values) - eval_node(n->args[1], names, values);
    case Kind::Mul:
      return eval_node(n->args[0], names, values) * eval_node(n->args[1], names, values);
    case Kind::Div:
      return eval_node(n->args[0], names, values) / eval_node(n->args[1], names, values);
    case Kind::Pow:
      return std::pow(eval_node(n->args[0], names, values), eval_node(n->args[1], names, values));
    case Kind::Min: {
      double v = eval_node(n->args[0], names, values);
      for (std::size_t i = 1; i < n->args.size(); ++i)
        v = std::min(v, eval_node(n->args[i], names, values));
      return v;
    }
    case Kind::Max: {
      double v = eval_node(n->args[0], names, values);
      for (std::size_t i = 1; i < n->args.size(); ++i)
        v = std::max(v, eval_node(n->args[i], names, values));
      return v;
    }
    case Kind::Pwl:
      return pwl_eval(n->points, eval_node(n->args[0], names, values));
  }
  return 0.0;
}

}  // namespace

double pwl_eval(std::span<const std::pair<double, double>> pts, double x) {
  if (x <= pts.front().first) return pts.front().second;
  if (x >= pts.back().first) return pts.back().second;
  // invariant: abscissae strictly increasing
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (x <= pts[i].first) {
      double t = (x - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
      return pts[i - 1].second + t * (pts[i].second - pts[i - 1].second);
    }
  }
  return pts.back().second;
}

Expr::Expr(std::shared_ptr<const Node> root, std::string src)
    : root_(std::move(root)), src_(std::move(src)) {}

Expr Expr::parse(std::string_view src) {
  Parser p(src);
  return Expr(p.run(), std::string(src));
}

Expr Expr::constant(double v) { return Expr(make_const(v), format_double(v)); }

Expr Expr::variable(std::string name) {
  auto n = make_node(Kind::Var);
  const_cast<Node*>(n.get())->name = name;
  return Expr(std::move(n), name);
}

std::vector<std::string> Expr::variables() const {
  std::set<std::string> s;
  collect_vars(root_, s);
  return {s.begin(), s.end()};
}

std::optional<Expr> Expr::derivative(std::string_view var) const {
  if (!root_) throw UsageError("derivative of empty expression");
  NodePtr d = diff(root_, var);
  if (!d) return std::nullopt;
  return Expr(d, render(d));
}

double Expr::eval(std::span<const std::string> names, std::span<const double> values) const {
  if (!root_) throw UsageError("eval of empty expression");
  return eval_node(root_, names, values);
}

Expr::Bound Expr::bind(std::span<const std::string> names) const {
  if (!root_) throw UsageError("bind of empty expression");
  Bound b;
  b.src_ = src_;
  std::size_t depth = 0, max_depth = 0;
  auto push = [&](std::size_t produced_after_consuming, std::size_t consumed) {
    depth = depth - consumed + produced_after_consuming;
    max_depth = std::max(max_depth, depth);
  };
  // post-order flatten
  auto walk = [&](auto&& self, const NodePtr& n) -> void {
    switch (n->kind) {
      case Kind::Const:
        b.prog_.push_back({Bound::Op::Const, 0, n->value});
        push(1, 0);
        return;
      case Kind::Var: {
        int slot = -1;
        for (std::size_t i = 0; i < names.size(); ++i)
          if (names[i] == n->name) slot = static_cast<int>(i);
        if (slot < 0)
          throw UsageError("unbound variable '" + n->name + "' in \"" + src_ + "\"");
        b.prog_.push_back({Bound::Op::Var, slot, 0.0});
        push(1, 0);
        return;
      }
      case Kind::Neg:
        self(self, n->args[0]);
        b.prog_.push_back({Bound::Op::Neg, 0, 0.0});
        push(1, 1);
        return;
      case Kind::Add:
      case Kind::Sub:
      case Kind::Mul:
      case Kind::Div:
      case Kind::Pow: {
        self(self, n->args[0]);
        self(self, n->args[1]);
        Bound::Op op = n->kind == Kind::Add   ? Bound::Op::Add
                       : n->kind == Kind::Sub ? Bound::Op::Sub
                       : n->kind == Kind::Mul ? Bound::Op::Mul
                       : n->kind == Kind::Div ? Bound::Op::Div
                                              : Bound::Op::Pow;
        b.prog_.push_back({op, 0, 0.0});
        push(1, 2);
        return;
      }
      case Kind::Min:
      case Kind::Max: {
        for (const auto& a : n->args) self(self, a);
        b.prog_.push_back({n->kind == Kind::Min ? Bound::Op::Min : Bound::Op::Max,
                           static_cast<int>(n->args.size()), 0.0});
        push(1, n->args.size());
        return;
      }
      case Kind::Pwl: {
        self(self, n->args[0]);
        b.tables_.push_back(n->points);
        b.prog_.push_back({Bound::Op::Pwl, static_cast<int>(b.tables_.size() - 1), 0.0});
        push(1, 1);
        return;
      }
    }
  };
  walk(walk, root_);
  b.depth_ = max_depth;
  return b;
}

double Expr::Bound::eval_raw(std::span<const double> slots) const {
  double stack[64];
  stack[0] = 0.0;  // a bound program is never empty; keeps the no-op path defined
  std::vector<double> heap;
  double* sp = stack;
  if (depth_ > 64) {
    heap.resize(depth_);
    sp = heap.data();
  }
  std::size_t top = 0;
  for (const Instr& ins : prog_) {
    switch (ins.op) {
      case Op::Const:
        sp[top++] = ins.v;
        break;
      case Op::Var:
        sp[top++] = slots[static_cast<std::size_t>(ins.a)];
        break;
      case Op::Neg:
        sp[top - 1] = -sp[top - 1];
        break;
      case Op::Add:
        sp[top - 2] += sp[top - 1];
        --top;
        break;
      case Op::Sub:
        sp[top - 2] -= sp[top - 1];
        --top;
        break;
      case Op::Mul:
        sp[top - 2] *= sp[top - 1];
        --top;
        break;
      case Op::Div:
        sp[top - 2] /= sp[top - 1];
        --top;
        break;
      case Op::Pow:
        sp[top - 2] = std::pow(sp[top - 2], sp[top - 1]);
        --top;
        break;
      case Op::Min: {
        std::size_t n = static_cast<std::size_t>(ins.a);
        double v = sp[top - n];
        for (std::size_t i = 1; i < n; ++i) v = std::min(v, sp[top - n + i]);
        top -= n;
        sp[top++] = v;
        break;
      }
      case Op::Max: {
        std::size_t n = static_cast<std::size_t>(ins.a);
        double v = sp[top - n];
        for (std::size_t i = 1; i < n; ++i) v = std::max(v, sp[top - n + i]);
        top -= n;
        sp[top++] = v;
        break;
      }
      case Op::Pwl:
        sp[top - 1] = pwl_eval(tables_[static_cast<std::size_t>(ins.a)], sp[top - 1]);
        break;
    }
  }
  return sp[0];
}

double Expr::Bound::eval(std::span<const double> slots) const {
  double v = eval_raw(slots);
  if (!std::isfinite(v))
    throw EvalError("non-finite value from expression \"" + src_ + "\"");
  return v;
}

}  // namespace pricegame
