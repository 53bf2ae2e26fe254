#include "pulsesim/qasm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace pulsesim {

QasmError::QasmError(const std::string& what, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

using std::numbers::pi;

constexpr int kMaxQubits = 4096;
constexpr std::size_t kMaxGates = 1'000'000;
constexpr int kMaxExprDepth = 200;

// ---------------------------------------------------------------- lexer

enum class Tok { Ident, Number, String, Symbol, PhaseComment, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      const int l = line_;
      const int c = col_;
      const char ch = src_[pos_];
      if (ch == '/' && peek(1) == '/') {
        std::string body;
        while (pos_ < src_.size() && src_[pos_] != '\n') body += advance();
        if (auto phase = phase_comment(body)) out.push_back({Tok::PhaseComment, *phase, l, c});
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::string id;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          id += advance();
        out.push_back({Tok::Ident, id, l, c});
      } else if (std::isdigit(static_cast<unsigned char>(ch)) || (ch == '.' && is_digit(peek(1)))) {
        out.push_back({Tok::Number, number(), l, c});
      } else if (ch == '"') {
        advance();
        std::string s;
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') s += advance();
        if (pos_ >= src_.size() || src_[pos_] != '"') throw QasmError("unterminated string", l, c);
        advance();
        out.push_back({Tok::String, s, l, c});
      } else if (ch == '-' && peek(1) == '>') {
        advance();
        advance();
        out.push_back({Tok::Symbol, "->", l, c});
      } else if (ch == '=' && peek(1) == '=') {
        advance();
        advance();
        out.push_back({Tok::Symbol, "==", l, c});
      } else if (std::string_view(";,()[]{}+-*/^").find(ch) != std::string_view::npos) {
        out.push_back({Tok::Symbol, std::string(1, advance()), l, c});
      } else {
        throw QasmError("unexpected character", l, c);
      }
    }
  }

 private:
  static bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string number() {
    std::string s;
    while (is_digit(peek(0))) s += advance();
    if (peek(0) == '.') {
      s += advance();
      while (is_digit(peek(0))) s += advance();
    }
    if (peek(0) == 'e' || peek(0) == 'E') {
      const char sign = peek(1);
      if (is_digit(sign) || ((sign == '+' || sign == '-') && is_digit(peek(2)))) {
        s += advance();
        if (!is_digit(peek(0))) s += advance();
        while (is_digit(peek(0))) s += advance();
      }
    }
    return s;
  }

  // "// GLOBALPHASE <real>" written by export_qasm.
  static std::optional<std::string> phase_comment(const std::string& body) {
    std::istringstream in(body.substr(2));
    std::string word;
    std::string value;
    std::string rest;
    if (!(in >> word >> value) || word != "GLOBALPHASE" || (in >> rest)) return std::nullopt;
    return value;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------- expressions

struct Expr {
  enum class Op { Num, Param, Neg, Add, Sub, Mul, Div, Pow, Func } op = Op::Num;
  double value = 0.0;
  int param = -1;
  std::string func;
  std::vector<Expr> kids;

  double eval(const std::vector<double>& params) const {
    switch (op) {
      case Op::Num: return value;
      case Op::Param: return params.at(static_cast<std::size_t>(param));
      case Op::Neg: return -kids[0].eval(params);
      case Op::Add: return kids[0].eval(params) + kids[1].eval(params);
      case Op::Sub: return kids[0].eval(params) - kids[1].eval(params);
      case Op::Mul: return kids[0].eval(params) * kids[1].eval(params);
      case Op::Div: return kids[0].eval(params) / kids[1].eval(params);
      case Op::Pow: return std::pow(kids[0].eval(params), kids[1].eval(params));
      case Op::Func: {
        const double x = kids[0].eval(params);
        if (func == "sin") return std::sin(x);
        if (func == "cos") return std::cos(x);
        if (func == "tan") return std::tan(x);
        if (func == "exp") return std::exp(x);
        if (func == "ln") return std::log(x);
        return std::sqrt(x);
      }
    }
    return 0.0;
  }
};

// ---------------------------------------------------------------- parser

struct QubitRef {
  std::string reg;
  std::optional<int> index;
  int line;
  int col;
};

struct BodyCall {
  std::string name;
  std::vector<Expr> args;
  std::vector<int> qubits;  // formal qubit positions
  int line;
  int col;
};

struct GateDef {
  int num_params = 0;
  int num_qubits = 0;
  std::vector<BodyCall> body;
  std::optional<std::string> builtin;  // replaces the body when it reproduces a built-in gate
};

struct QelibGate {
  int params;
  int qubits;
};

const std::map<std::string, QelibGate, std::less<>>& qelib() {
  static const std::map<std::string, QelibGate, std::less<>> table = {
      {"x", {0, 1}},   {"y", {0, 1}},   {"z", {0, 1}},   {"h", {0, 1}},   {"s", {0, 1}},
      {"t", {0, 1}},   {"sdg", {0, 1}}, {"tdg", {0, 1}}, {"id", {0, 1}},  {"rx", {1, 1}},
      {"ry", {1, 1}},  {"rz", {1, 1}},  {"u1", {1, 1}},  {"u2", {2, 1}},  {"u3", {3, 1}},
      {"U", {3, 1}},   {"cx", {0, 2}},  {"CX", {0, 2}},  {"cz", {0, 2}},  {"swap", {0, 2}},
      {"ccx", {0, 3}},
  };
  return table;
}

void emit_qelib(const std::string& name, const std::vector<double>& a, const std::vector<int>& q,
                std::vector<Gate>& out) {
  auto one = [&](const char* n, std::optional<double> arg = std::nullopt) {
    out.push_back(Gate{n, {q[0]}, {}, arg});
  };
  auto u3 = [&](double theta, double phi, double lambda) {
    out.push_back(gates::rz(q[0], lambda));
    out.push_back(gates::ry(q[0], theta));
    out.push_back(gates::rz(q[0], phi));
    out.push_back(gates::globalphase((phi + lambda) / 2));
  };
  if (name == "x") one("X");
  else if (name == "y") one("Y");
  else if (name == "z") one("Z");
  else if (name == "h") one("H");
  else if (name == "s") one("S");
  else if (name == "t") one("T");
  else if (name == "sdg") one("SDG");
  else if (name == "tdg") one("TDG");
  else if (name == "id") one("ID");
  else if (name == "rx") one("RX", a[0]);
  else if (name == "ry") one("RY", a[0]);
  else if (name == "rz") one("RZ", a[0]);
  else if (name == "u1") one("PHASE", a[0]);
  else if (name == "u2") u3(pi / 2, a[0], a[1]);
  else if (name == "u3" || name == "U") u3(a[0], a[1], a[2]);
  else if (name == "cx" || name == "CX") out.push_back(gates::cnot(q[0], q[1]));
  else if (name == "cz") out.push_back(gates::cz(q[0], q[1]));
  else if (name == "swap") out.push_back(gates::swap(q[0], q[1]));
  else if (name == "ccx") out.push_back(gates::toffoli(q[0], q[1], q[2]));
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<std::string>* warnings, const std::filesystem::path* base_dir)
      : toks_(std::move(toks)), warnings_(warnings), base_dir_(base_dir) {}

  QasmProgram run() {
    QasmProgram prog;
    header(prog);
    while (cur().kind != Tok::End) statement(prog);
    int total = 0;
    for (const auto& r : prog.qregs) total += r.second;
    if (total == 0) throw QasmError("program declares no qubits", cur().line, cur().col);
    QubitCircuit circ(total);
    for (auto& [g, line, col] : gates_) {
      try {
        circ.add_gate(std::move(g));
      } catch (const std::exception& e) {
        throw QasmError(e.what(), line, col);
      }
    }
    prog.circuit = std::move(circ);
    return prog;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw QasmError(msg, cur().line, cur().col); }
  [[noreturn]] static void fail_at(const std::string& msg, int line, int col) { throw QasmError(msg, line, col); }

  bool is_sym(std::string_view s) const { return cur().kind == Tok::Symbol && cur().text == s; }
  bool is_ident(std::string_view s) const { return cur().kind == Tok::Ident && cur().text == s; }

  Token take() {
    Token t = cur();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  void expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }

  std::string expect_ident() {
    if (cur().kind != Tok::Ident) fail("expected identifier");
    return take().text;
  }

  int expect_int() {
    if (cur().kind != Tok::Number) fail("expected integer");
    const Token t = take();
    int v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) fail_at("invalid integer '" + t.text + "'", t.line, t.col);
    return v;
  }

  void warn(const std::string& msg, const Token& at) {
    if (warnings_) warnings_->push_back("line " + std::to_string(at.line) + ": " + msg);
  }

  void header(QasmProgram& prog) {
    if (!is_ident("OPENQASM")) fail("missing 'OPENQASM 2.0;' header");
    ++pos_;
    if (cur().kind != Tok::Number) fail("expected version number");
    const Token v = take();
    if (v.text != "2.0" && v.text != "2") fail_at("unsupported OpenQASM version " + v.text, v.line, v.col);
    prog.version = "2.0";
    expect_sym(";");
  }

  void statement(QasmProgram& prog) {
    const Token t = cur();
    if (t.kind == Tok::PhaseComment) {
      ++pos_;
      double v = 0.0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec == std::errc() && p == t.text.data() + t.text.size() && std::isfinite(v))
        push_gate(gates::globalphase(v), t);
      return;
    }
    if (t.kind != Tok::Ident) fail("expected statement");
    if (t.text == "include") {
      ++pos_;
      if (cur().kind != Tok::String) fail("expected file name string");
      const Token f = take();
      expect_sym(";");
      if (f.text != "qelib1.inc") fail_at("unsupported include '" + f.text + "'", f.line, f.col);
      if (base_dir_ && std::filesystem::exists(*base_dir_ / f.text))
        warn("qelib1.inc on disk is ignored; built-in definitions are used", f);
      prog.includes.push_back(f.text);
    } else if (t.text == "qreg" || t.text == "creg") {
      ++pos_;
      const std::string name = expect_ident();
      expect_sym("[");
      const int size = expect_int();
      expect_sym("]");
      expect_sym(";");
      if (size < 1) fail_at("register size must be positive", t.line, t.col);
      if (regs_.count(name) || cregs_.count(name)) fail_at("register '" + name + "' already declared", t.line, t.col);
      if (t.text == "qreg") {
        if (num_qubits_ + size > kMaxQubits) fail_at("too many qubits", t.line, t.col);
        regs_[name] = {num_qubits_, size};
        num_qubits_ += size;
        prog.qregs.emplace_back(name, size);
      } else {
        cregs_[name] = size;
        prog.cregs.emplace_back(name, size);
      }
    } else if (t.text == "gate") {
      ++pos_;
      gate_definition();
    } else if (t.text == "measure") {
      ++pos_;
      qubit_ref();
      expect_sym("->");
      expect_ident();
      if (is_sym("[")) {
        ++pos_;
        expect_int();
        expect_sym("]");
      }
      expect_sym(";");
      warn("measure dropped", t);
    } else if (t.text == "barrier") {
      ++pos_;
      qubit_list();
      expect_sym(";");
      warn("barrier dropped", t);
    } else if (t.text == "if" || t.text == "opaque" || t.text == "reset") {
      fail("'" + t.text + "' is not supported");
    } else {
      gate_call();
    }
  }

  // ---- expressions

  Expr expr(const std::vector<std::string>& params, int depth = 0) {
    if (depth > kMaxExprDepth) fail("expression nested too deeply");
    Expr lhs = term(params, depth);
    while (is_sym("+") || is_sym("-")) {
      const bool add = take().text == "+";
      Expr e;
      e.op = add ? Expr::Op::Add : Expr::Op::Sub;
      e.kids = {std::move(lhs), term(params, depth)};
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr term(const std::vector<std::string>& params, int depth) {
    Expr lhs = power(params, depth);
    while (is_sym("*") || is_sym("/")) {
      const bool mul = take().text == "*";
      Expr e;
      e.op = mul ? Expr::Op::Mul : Expr::Op::Div;
      e.kids = {std::move(lhs), power(params, depth)};
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr power(const std::vector<std::string>& params, int depth) {
    Expr base = unary(params, depth);
    if (is_sym("^")) {
      ++pos_;
      Expr e;
      e.op = Expr::Op::Pow;
      e.kids = {std::move(base), power(params, depth + 1)};
      if (depth + 1 > kMaxExprDepth) fail("expression nested too deeply");
      return e;
    }
    return base;
  }

  Expr unary(const std::vector<std::string>& params, int depth) {
    if (depth > kMaxExprDepth) fail("expression nested too deeply");
    if (is_sym("-") || is_sym("+")) {
      const bool neg = take().text == "-";
      Expr inner = unary(params, depth + 1);
      if (!neg) return inner;
      Expr e;
      e.op = Expr::Op::Neg;
      e.kids = {std::move(inner)};
      return e;
    }
    return primary(params, depth);
  }

  Expr primary(const std::vector<std::string>& params, int depth) {
    const Token t = cur();
    Expr e;
    if (t.kind == Tok::Number) {
      ++pos_;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e.value);
      if (ec != std::errc() || p != t.text.data() + t.text.size()) fail_at("invalid number '" + t.text + "'", t.line, t.col);
      return e;
    }
    if (is_sym("(")) {
      ++pos_;
      e = expr(params, depth + 1);
      expect_sym(")");
      return e;
    }
    if (t.kind == Tok::Ident) {
      ++pos_;
      if (t.text == "pi") {
        e.value = pi;
        return e;
      }
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i] == t.text) {
          e.op = Expr::Op::Param;
          e.param = static_cast<int>(i);
          return e;
        }
      }
      static const char* const funcs[] = {"sin", "cos", "tan", "exp", "ln", "sqrt"};
      for (const char* f : funcs) {
        if (t.text == f) {
          expect_sym("(");
          e.op = Expr::Op::Func;
          e.func = f;
          e.kids = {expr(params, depth + 1)};
          expect_sym(")");
          return e;
        }
      }
      fail_at("unknown identifier '" + t.text + "' in expression", t.line, t.col);
    }
    fail("expected expression");
  }

  std::vector<Expr> arg_list(const std::vector<std::string>& params) {
    std::vector<Expr> args;
    if (!is_sym("(")) return args;
    ++pos_;
    if (is_sym(")")) {
      ++pos_;
      return args;
    }
    while (true) {
      args.push_back(expr(params));
      if (is_sym(")")) break;
      expect_sym(",");
    }
    ++pos_;
    return args;
  }

  // ---- qubit references

  QubitRef qubit_ref() {
    const Token t = cur();
    QubitRef r{expect_ident(), std::nullopt, t.line, t.col};
    if (is_sym("[")) {
      ++pos_;
      r.index = expect_int();
      expect_sym("]");
    }
    return r;
  }

  std::vector<QubitRef> qubit_list() {
    std::vector<QubitRef> refs{qubit_ref()};
    while (is_sym(",")) {
      ++pos_;
      refs.push_back(qubit_ref());
    }
    return refs;
  }

  // ---- gate definitions

  void gate_definition() {
    const Token name_tok = cur();
    const std::string name = expect_ident();
    if (qelib().count(name) || defs_.count(name)) fail_at("gate '" + name + "' already defined", name_tok.line, name_tok.col);
    std::vector<std::string> params;
    if (is_sym("(")) {
      ++pos_;
      if (!is_sym(")")) {
        params.push_back(expect_ident());
        while (is_sym(",")) {
          ++pos_;
          params.push_back(expect_ident());
        }
      }
      expect_sym(")");
    }
    std::vector<std::string> formals{expect_ident()};
    while (is_sym(",")) {
      ++pos_;
      formals.push_back(expect_ident());
    }
    for (std::size_t i = 0; i < formals.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (formals[i] == formals[j]) fail_at("duplicate qubit argument '" + formals[i] + "'", name_tok.line, name_tok.col);
    GateDef def;
    def.num_params = static_cast<int>(params.size());
    def.num_qubits = static_cast<int>(formals.size());
    expect_sym("{");
    while (!is_sym("}")) {
      if (cur().kind == Tok::End) fail("unterminated gate body");
      if (cur().kind == Tok::PhaseComment) {
        ++pos_;
        continue;
      }
      const Token ct = cur();
      const std::string callee = expect_ident();
      if (callee == "barrier") {
        while (!is_sym(";")) {
          if (cur().kind == Tok::End) fail("expected ';'");
          ++pos_;
        }
        ++pos_;
        continue;
      }
      BodyCall call{callee, arg_list(params), {}, ct.line, ct.col};
      auto formal_index = [&]() {
        const Token qt = cur();
        const std::string q = expect_ident();
        for (std::size_t i = 0; i < formals.size(); ++i)
          if (formals[i] == q) return static_cast<int>(i);
        fail_at("unknown qubit argument '" + q + "'", qt.line, qt.col);
      };
      call.qubits.push_back(formal_index());
      while (is_sym(",")) {
        ++pos_;
        call.qubits.push_back(formal_index());
      }
      expect_sym(";");
      for (std::size_t i = 0; i < call.qubits.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (call.qubits[i] == call.qubits[j]) fail_at("gate '" + callee + "' uses a qubit twice", ct.line, ct.col);
      check_signature(call.name, static_cast<int>(call.args.size()), static_cast<int>(call.qubits.size()), ct);
      def.body.push_back(std::move(call));
    }
    ++pos_;
    def.builtin = match_builtin(name, def);
    defs_.emplace(name, std::move(def));
  }

  // A definition named after a built-in non-qelib gate (for instance iswap)
  // maps back to that gate when its body reproduces the unitary.
  std::optional<std::string> match_builtin(const std::string& name, const GateDef& def) {
    std::string upper;
    for (char c : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto arity = builtin_arity(upper);
    if (!arity || arity->needs_arg || def.num_params != 0 || arity->controls != 0 || arity->targets != def.num_qubits)
      return std::nullopt;
    std::vector<int> formals(static_cast<std::size_t>(def.num_qubits));
    for (int i = 0; i < def.num_qubits; ++i) formals[static_cast<std::size_t>(i)] = i;
    std::vector<Gate> body;
    expand_def(def, {}, formals, body, 0);
    QubitCircuit tmp(def.num_qubits);
    tmp.add_gates(body);
    const Matrix u = circuit_unitary(tmp).matrix();
    Gate ref{upper, formals, {}, std::nullopt};
    const Matrix v = gate_matrix(ref);
    if (unitary_fidelity(u, v) > 1.0 - 1e-9) return upper;
    return std::nullopt;
  }

  void check_signature(const std::string& name, int nargs, int nqubits, const Token& at) {
    int want_args = 0;
    int want_qubits = 0;
    if (auto it = qelib().find(name); it != qelib().end()) {
      want_args = it->second.params;
      want_qubits = it->second.qubits;
    } else if (auto d = defs_.find(name); d != defs_.end()) {
      want_args = d->second.num_params;
      want_qubits = d->second.num_qubits;
    } else {
      fail_at("unknown gate '" + name + "'", at.line, at.col);
    }
    if (nargs != want_args)
      fail_at("gate '" + name + "' expects " + std::to_string(want_args) + " parameter(s)", at.line, at.col);
    if (nqubits != want_qubits)
      fail_at("gate '" + name + "' expects " + std::to_string(want_qubits) + " qubit(s)", at.line, at.col);
  }

  void expand(const std::string& name, const std::vector<double>& args, const std::vector<int>& qubits,
              std::vector<Gate>& out, int depth) {
    if (auto it = defs_.find(name); it != defs_.end()) {
      expand_def(it->second, args, qubits, out, depth);
      return;
    }
    emit_qelib(name, args, qubits, out);
    if (out.size() > kMaxGates) throw std::length_error("circuit too large");
  }

  void expand_def(const GateDef& def, const std::vector<double>& args, const std::vector<int>& qubits,
                  std::vector<Gate>& out, int depth) {
    if (def.builtin) {
      out.push_back(Gate{*def.builtin, qubits, {}, std::nullopt});
      return;
    }
    for (const BodyCall& call : def.body) {
      std::vector<double> a;
      for (const Expr& e : call.args) a.push_back(e.eval(args));
      std::vector<int> q;
      for (int f : call.qubits) q.push_back(qubits[static_cast<std::size_t>(f)]);
      expand(call.name, a, q, out, depth + 1);
    }
  }

  // ---- gate calls

  void gate_call() {
    const Token t = cur();
    const std::string name = expect_ident();
    const std::vector<Expr> exprs = arg_list({});
    const std::vector<QubitRef> refs = qubit_list();
    expect_sym(";");
    check_signature(name, static_cast<int>(exprs.size()), static_cast<int>(refs.size()), t);
    std::vector<double> args;
    for (const Expr& e : exprs) {
      const double v = e.eval({});
      if (!std::isfinite(v)) fail_at("argument of '" + name + "' is not finite", t.line, t.col);
      args.push_back(v);
    }
    std::optional<int> width;
    for (const QubitRef& r : refs) {
      const auto reg = lookup(r);
      if (!r.index) {
        if (width && *width != reg.second) fail_at("register size mismatch in broadcast", r.line, r.col);
        width = reg.second;
      }
    }
    for (int k = 0; k < width.value_or(1); ++k) {
      std::vector<int> qubits;
      for (const QubitRef& r : refs) {
        const auto reg = lookup(r);
        qubits.push_back(reg.first + r.index.value_or(k));
      }
      std::vector<Gate> out;
      try {
        expand(name, args, qubits, out, 0);
      } catch (const std::length_error& e) {
        fail_at(e.what(), t.line, t.col);
      }
      for (Gate& g : out) push_gate(std::move(g), t);
    }
  }

  std::pair<int, int> lookup(const QubitRef& r) const {
    auto it = regs_.find(r.reg);
    if (it == regs_.end()) fail_at("unknown quantum register '" + r.reg + "'", r.line, r.col);
    if (r.index && (*r.index < 0 || *r.index >= it->second.second))
      fail_at("index " + std::to_string(*r.index) + " out of range for register '" + r.reg + "'", r.line, r.col);
    return it->second;
  }

  void push_gate(Gate g, const Token& at) {
    if (gates_.size() >= kMaxGates) fail_at("circuit too large", at.line, at.col);
    gates_.push_back({std::move(g), at.line, at.col});
  }

  struct Located {
    Gate gate;
    int line;
    int col;
  };

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string>* warnings_;
  const std::filesystem::path* base_dir_;
  std::map<std::string, std::pair<int, int>, std::less<>> regs_;  // name -> (offset, size)
  std::map<std::string, int, std::less<>> cregs_;
  std::map<std::string, GateDef, std::less<>> defs_;
  std::vector<Located> gates_;
  int num_qubits_ = 0;
};

QasmProgram parse_impl(std::string_view text, std::vector<std::string>* warnings,
                       const std::filesystem::path* base_dir) {
  Parser p(Lexer(text).run(), warnings, base_dir);
  return p.run();
}

// ---------------------------------------------------------------- export

std::string fmt(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot export a non-finite gate argument");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string qref(int q) { return "q[" + std::to_string(q) + "]"; }

}  // namespace

QasmProgram parse_qasm_program(std::string_view text, std::vector<std::string>* warnings) {
  return parse_impl(text, warnings, nullptr);
}

QubitCircuit parse_qasm(std::string_view text, std::vector<std::string>* warnings) {
  return parse_impl(text, warnings, nullptr).circuit;
}

QubitCircuit read_qasm_file(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::filesystem::path dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  return parse_impl(ss.str(), warnings, &dir).circuit;
}

std::string export_qasm(const QubitCircuit& circ) {
  static const std::map<std::string, std::string, std::less<>> names = {
      {"X", "x"},     {"Y", "y"},       {"Z", "z"},       {"H", "h"},     {"S", "s"},   {"T", "t"},
      {"SDG", "sdg"}, {"TDG", "tdg"},   {"ID", "id"},     {"RX", "rx"},   {"RY", "ry"}, {"RZ", "rz"},
      {"PHASE", "u1"}, {"CNOT", "cx"},  {"CZ", "cz"},     {"SWAP", "swap"}, {"TOFFOLI", "ccx"},
      {"ISWAP", "iswap"},
  };
  std::ostringstream body;
  bool need_iswap = false;
  for (const Gate& g : circ.gates()) {
    if (g.name == "GLOBALPHASE") {
      body << "// GLOBALPHASE " << fmt(*g.arg) << "\n";
      continue;
    }
    auto it = names.find(g.name);
    if (it == names.end()) throw std::invalid_argument("gate '" + g.name + "' has no OpenQASM 2.0 equivalent");
    need_iswap = need_iswap || g.name == "ISWAP";
    body << it->second;
    if (g.arg) body << "(" << fmt(*g.arg) << ")";
    const std::vector<int> qs = g.qubits();
    for (std::size_t i = 0; i < qs.size(); ++i) body << (i ? "," : " ") << qref(qs[i]);
    body << ";\n";
  }
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  if (need_iswap) out << "gate iswap a,b\n{\n  h b;\n  cx b,a;\n  cx a,b;\n  h a;\n  s a;\n  s b;\n}\n";
  out << "qreg q[" << circ.num_qubits() << "];\n" << body.str();
  return out.str();
}

void save_qasm(const QubitCircuit& circ, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << export_qasm(circ);
}

}  // namespace pulsesim
