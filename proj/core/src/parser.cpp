#include "stiso/syntax.hpp"

#include <cctype>

// Recursive-descent parsers for the concrete type/process/expression
// grammars. Whitespace-insensitive; errors carry line/column and the
// expected-token set.

namespace stiso {

ParseError::ParseError(std::string msg, int line, int column, std::string expected)
    : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(column) +
                         (expected.empty() ? "" : " (expected " + expected + ")")),
      line(line),
      column(column),
      expected(std::move(expected)) {}

namespace {

const std::set<std::string> kKeywords = {"end",  "unit", "bool", "int",  "case", "inl",
                                         "inr",  "if",   "then", "else", "true", "false",
                                         "l",    "r"};

struct Lexer {
  std::string src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(std::string s) : src(std::move(s)) {}

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  bool eof() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& expected) {
    skip_ws();
    std::string got = pos < src.size() ? std::string(1, src[pos]) : "end of input";
    throw ParseError("unexpected '" + got + "'", line, col, expected);
  }

  bool try_consume(const std::string& tok) {
    skip_ws();
    if (src.compare(pos, tok.size(), tok) != 0) return false;
    // keyword/identifier boundary
    if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
      std::size_t end = pos + tok.size();
      if (end < src.size() &&
          (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
        return false;
    }
    for (char c : tok) {
      (void)c;
      ++col;
    }
    pos += tok.size();
    return true;
  }

  void expect(const std::string& tok) {
    if (!try_consume(tok)) fail("'" + tok + "'");
  }

  std::optional<std::string> try_ident() {
    skip_ws();
    if (pos >= src.size()) return std::nullopt;
    char c = src[pos];
    if (!std::islower(static_cast<unsigned char>(c))) return std::nullopt;
    std::size_t end = pos;
    while (end < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
      ++end;
    std::string word = src.substr(pos, end - pos);
    if (kKeywords.count(word)) return std::nullopt;
    col += static_cast<int>(end - pos);
    pos = end;
    return word;
  }

  std::optional<std::int64_t> try_int() {
    skip_ws();
    std::size_t start = pos;
    std::size_t p = pos;
    if (p < src.size() && src[p] == '-') ++p;
    if (p >= src.size() || !std::isdigit(static_cast<unsigned char>(src[p]))) return std::nullopt;
    while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
    std::int64_t v = std::stoll(src.substr(start, p - start));
    col += static_cast<int>(p - start);
    pos = p;
    return v;
  }
};

struct TypeParser {
  Lexer& lx;

  Base parse_base() {
    if (lx.try_consume("unit")) return Base::Unit;
    if (lx.try_consume("bool")) return Base::Bool;
    if (lx.try_consume("int")) return Base::Int;
    lx.fail("'unit', 'bool' or 'int'");
  }

  TypePtr parse_atom() {
    if (lx.try_consume("end")) return tend();
    if (lx.try_consume("(")) {
      TypePtr t = parse_type();
      lx.expect(")");
      return t;
    }
    lx.fail("'end', '(', '!' or '?'");
  }

  TypePtr parse_prefix() {
    if (lx.try_consume("!")) {
      Base b = parse_base();
      lx.expect(".");
      return tout(b, parse_prefix());
    }
    if (lx.try_consume("?")) {
      Base b = parse_base();
      lx.expect(".");
      return tin(b, parse_prefix());
    }
    return parse_atom();
  }

  // Choice level: a run of the same operator, right-associated. Mixing
  // "(+)" and "+" at one level requires parentheses.
  TypePtr parse_type() {
    TypePtr head = parse_prefix();
    bool is_select;
    if (lx.try_consume("(+)")) {
      is_select = true;
    } else if (lx.try_consume("+")) {
      is_select = false;
    } else {
      return head;
    }
    std::vector<TypePtr> items{head, parse_prefix()};
    const char* op = is_select ? "(+)" : "+";
    const char* other = is_select ? "+" : "(+)";
    for (;;) {
      if (lx.try_consume(op)) {
        items.push_back(parse_prefix());
      } else if (lx.peek() == '+' || (lx.peek() == '(' && lx.src.compare(lx.pos, 3, "(+)") == 0)) {
        lx.fail(std::string("'") + op + "' (mixing with '" + other + "' needs parentheses)");
      } else {
        break;
      }
    }
    TypePtr acc = items.back();
    for (auto it = items.rbegin() + 1; it != items.rend(); ++it)
      acc = is_select ? tselect(*it, acc) : tbranch(*it, acc);
    return acc;
  }
};

struct ProcParser {
  Lexer& lx;

  Chan parse_chan() {
    if (lx.try_consume("l")) return Chan::L;
    if (lx.try_consume("r")) return Chan::R;
    lx.fail("'l' or 'r'");
  }

  Sel parse_sel() {
    if (lx.try_consume("inl")) return Sel::Inl;
    if (lx.try_consume("inr")) return Sel::Inr;
    lx.fail("'inl' or 'inr'");
  }

  ExprPtr parse_aexpr() {
    if (lx.try_consume("()")) return elit(Value::unit());
    if (lx.try_consume("true")) return elit(Value::boolean(true));
    if (lx.try_consume("false")) return elit(Value::boolean(false));
    if (auto n = lx.try_int()) return elit(Value::integer(*n));
    if (auto id = lx.try_ident()) return evar(*id);
    if (lx.try_consume("(")) {
      ExprPtr e = parse_expr();
      lx.expect(")");
      return e;
    }
    lx.fail("expression");
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_aexpr();
    while (lx.try_consume("+")) e = eadd(e, parse_aexpr());
    return e;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_sum();
    if (lx.try_consume("==")) e = eeq(e, parse_sum());
    return e;
  }

  ProcPtr parse_seq() {
    if (lx.try_consume("0")) return pidle();
    if (lx.try_consume("case")) {
      Chan c = parse_chan();
      lx.expect("{");
      lx.expect("inl");
      lx.expect(":");
      ProcPtr inl = parse_proc();
      lx.expect(",");
      lx.expect("inr");
      lx.expect(":");
      ProcPtr inr = parse_proc();
      lx.expect("}");
      return pbranch(c, inl, inr);
    }
    if (lx.try_consume("if")) {
      ExprPtr g = parse_expr();
      lx.expect("then");
      lx.expect("{");
      ProcPtr t = parse_proc();
      lx.expect("}");
      lx.expect("else");
      lx.expect("{");
      ProcPtr e = parse_proc();
      lx.expect("}");
      return pcond(g, t, e);
    }
    if (lx.try_consume("(")) {
      ProcPtr p = parse_proc();
      lx.expect(")");
      return p;
    }
    Chan c = parse_chan();
    if (lx.try_consume("?")) {
      lx.expect("(");
      auto var = lx.try_ident();
      if (!var) lx.fail("variable name");
      lx.expect(":");
      TypeParser tp{lx};
      Base b = tp.parse_base();
      lx.expect(")");
      lx.expect(".");
      return pinput(c, *var, b, parse_seq());
    }
    if (lx.try_consume("!")) {
      lx.expect("(");
      ExprPtr e = parse_expr();
      lx.expect(")");
      lx.expect(".");
      return poutput(c, e, parse_seq());
    }
    if (lx.try_consume("#")) {
      Sel s = parse_sel();
      lx.expect(".");
      return pselect(c, s, parse_seq());
    }
    lx.fail("'?', '!' or '#'");
  }

  ProcPtr parse_proc() {
    ProcPtr p = parse_seq();
    while (lx.try_consume("||")) p = ppar(p, parse_seq());
    return p;
  }
};

}  // namespace

TypePtr parse_type(const std::string& text) {
  Lexer lx(text);
  TypeParser tp{lx};
  TypePtr t = tp.parse_type();
  if (!lx.eof()) lx.fail("end of input");
  return t;
}

ProcPtr parse_process(const std::string& text) {
  Lexer lx(text);
  ProcParser pp{lx};
  ProcPtr p = pp.parse_proc();
  if (!lx.eof()) lx.fail("end of input");
  return p;
}

ExprPtr parse_expression(const std::string& text) {
  Lexer lx(text);
  ProcParser pp{lx};
  ExprPtr e = pp.parse_expr();
  if (!lx.eof()) lx.fail("end of input");
  return e;
}

}  // namespace stiso
