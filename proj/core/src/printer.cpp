#include "stiso/syntax.hpp"

namespace stiso {

namespace {

bool is_choice(const TypePtr& t) {
  return t->kind == Type::Kind::Select || t->kind == Type::Kind::Branch;
}

void print_type_rec(const TypePtr& t, bool at_choice_level, std::string& out);

void print_choice_operand(const TypePtr& t, std::string& out) {
  if (is_choice(t)) {
    out += "(";
    print_type_rec(t, true, out);
    out += ")";
  } else {
    print_type_rec(t, false, out);
  }
}

void print_type_rec(const TypePtr& t, bool at_choice_level, std::string& out) {
  switch (t->kind) {
    case Type::Kind::End: out += "end"; break;
    case Type::Kind::Out:
      out += "!";
      out += base_name(t->payload);
      out += ".";
      print_choice_operand(t->a, out);
      break;
    case Type::Kind::In:
      out += "?";
      out += base_name(t->payload);
      out += ".";
      print_choice_operand(t->a, out);
      break;
    case Type::Kind::Select:
    case Type::Kind::Branch: {
      const char* op = t->kind == Type::Kind::Select ? " (+) " : " + ";
      print_choice_operand(t->a, out);
      out += op;
      // runs of the same operator stay flat (right-associated)
      if (t->b->kind == t->kind) {
        print_type_rec(t->b, true, out);
      } else {
        print_choice_operand(t->b, out);
      }
      break;
    }
    case Type::Kind::Meta:
      out += (t->meta_dual ? "co(M" : "M") + std::to_string(t->meta) + (t->meta_dual ? ")" : "");
      break;
  }
}

void print_expr_rec(const ExprPtr& e, int parent_level, std::string& out) {
  // levels: 0 = Expr (==), 1 = Sum (+), 2 = atom
  switch (e->kind) {
    case Expr::Kind::Var: out += e->name; break;
    case Expr::Kind::Lit: out += value_text(e->lit); break;
    case Expr::Kind::Eq: {
      bool paren = parent_level > 0;
      if (paren) out += "(";
      print_expr_rec(e->a, 1, out);
      out += " == ";
      print_expr_rec(e->b, 1, out);
      if (paren) out += ")";
      break;
    }
    case Expr::Kind::Add: {
      bool paren = parent_level > 1;
      if (paren) out += "(";
      print_expr_rec(e->a, 1, out);
      out += " + ";
      print_expr_rec(e->b, 2, out);
      if (paren) out += ")";
      break;
    }
  }
}

void print_proc_rec(const ProcPtr& p, bool at_par_level, std::string& out) {
  switch (p->kind) {
    case Proc::Kind::Idle: out += "0"; break;
    case Proc::Kind::Input:
      out += chan_name(p->chan);
      out += "?(" + p->var + ":";
      out += base_name(p->base);
      out += ").";
      print_proc_rec(p->a, false, out);
      break;
    case Proc::Kind::Output:
      out += chan_name(p->chan);
      out += "!(";
      print_expr_rec(p->expr, 0, out);
      out += ").";
      print_proc_rec(p->a, false, out);
      break;
    case Proc::Kind::SelectP:
      out += chan_name(p->chan);
      out += "#";
      out += sel_name(p->sel);
      out += ".";
      print_proc_rec(p->a, false, out);
      break;
    case Proc::Kind::BranchP:
      out += "case ";
      out += chan_name(p->chan);
      out += " { inl: ";
      print_proc_rec(p->a, true, out);
      out += ", inr: ";
      print_proc_rec(p->b, true, out);
      out += " }";
      break;
    case Proc::Kind::Cond:
      out += "if ";
      print_expr_rec(p->expr, 0, out);
      out += " then { ";
      print_proc_rec(p->a, true, out);
      out += " } else { ";
      print_proc_rec(p->b, true, out);
      out += " }";
      break;
    case Proc::Kind::Par: {
      auto operand = [&](const ProcPtr& q, bool left) {
        // "||" is left-associative: a left-nested par stays flat, anything
        // else on the right gets parentheses.
        if (q->kind == Proc::Kind::Par) {
          if (left) {
            print_proc_rec(q, true, out);
          } else {
            out += "(";
            print_proc_rec(q, true, out);
            out += ")";
          }
        } else {
          print_proc_rec(q, false, out);
        }
      };
      if (!at_par_level) out += "(";
      operand(p->a, true);
      out += " || ";
      operand(p->b, false);
      if (!at_par_level) out += ")";
      break;
    }
  }
}

}  // namespace

std::string print_type(const TypePtr& t) {
  std::string out;
  print_type_rec(t, true, out);
  return out;
}

std::string print_process(const ProcPtr& p) {
  std::string out;
  print_proc_rec(p, true, out);
  return out;
}

std::string print_expr(const ExprPtr& e) {
  std::string out;
  print_expr_rec(e, 0, out);
  return out;
}

}  // namespace stiso
