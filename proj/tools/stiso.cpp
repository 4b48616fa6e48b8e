// Command-line front end: parsing, duality, type checking, identity
// processes, normalization, isomorphism decision and adapter synthesis,
// witness verification, execution, equivalence refutation, and
// isomorphism-aware library search.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stiso/library.hpp"
#include "stiso/semantics.hpp"
#include "stiso/symbolic.hpp"

using namespace stiso;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3;

struct Output {
  bool as_json = false;
  json result;
  std::vector<std::string> evidence;
  bool ok = true;
  std::ostringstream plain;

  int finish(int code) {
    if (as_json) {
      json env{{"ok", ok}, {"result", result}, {"evidence", evidence}};
      std::cout << env.dump(2) << "\n";
    } else {
      std::cout << plain.str();
      for (const auto& l : evidence) std::cout << l << "\n";
    }
    return code;
  }
};

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

InterfacePair ground_interfaces(const ProcPtr& p) {
  InterfacePair i = infer_interfaces({}, p);
  if (type_has_meta(i.left) || type_has_meta(i.right))
    throw TypeError(
        "interface is not fully determined; supply --left/--right");
  return i;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"session type isomorphism toolbox"};
  app.require_subcommand(1);
  app.fallthrough();

  Output out;
  std::size_t max_steps = 20000;
  std::size_t max_term_size = 0;  // 0: 4x initial
  int trials = 500;
  std::uint64_t seed = 0;
  bool explain = false;
  bool deterministic = false;  // single-threaded already; accepted for scripts
  std::string library_path;
  app.add_flag("--json", out.as_json, "machine-readable envelope");
  app.add_option("--max-steps", max_steps, "search node budget");
  app.add_option("--max-term-size", max_term_size,
                 "intermediate term size cap (default 4x initial)");
  app.add_option("--trials", trials, "random contexts to try");
  app.add_option("--seed", seed, "random seed");
  app.add_flag("--explain", explain, "print derivations/traces");
  app.add_flag("--deterministic", deterministic,
               "force deterministic search order (already the default)");
  app.add_option("--library", library_path, "library JSON file");

  std::string text, text2, text_a, text_b;
  std::string left_text, right_text;
  bool as_type = false, as_expr = false;

  auto* cparse = app.add_subcommand("parse", "parse and reprint");
  cparse->add_option("text", text)->required();
  cparse->add_flag("--type", as_type, "parse as a session type");
  cparse->add_flag("--expr", as_expr, "parse as an expression");

  auto* cdual = app.add_subcommand("dual", "dual of a session type");
  cdual->add_option("type", text)->required();

  auto* ccheck = app.add_subcommand("check", "type-check a process");
  ccheck->add_option("process", text)->required();
  ccheck->add_option("--left", left_text, "required left channel type");
  ccheck->add_option("--right", right_text, "required right channel type");

  auto* cid = app.add_subcommand("id", "identity process of a type");
  cid->add_option("type", text)->required();

  auto* cnorm = app.add_subcommand("normalize", "canonical normal form");
  cnorm->add_option("type", text)->required();

  auto* ciso = app.add_subcommand("iso", "decide derivable isomorphism");
  ciso->add_option("type1", text)->required();
  ciso->add_option("type2", text2)->required();

  auto* csynth = app.add_subcommand("synth", "synthesize adapter pair");
  csynth->add_option("type1", text)->required();
  csynth->add_option("type2", text2)->required();

  auto* cverify = app.add_subcommand("verify", "certify an adapter pair");
  cverify->add_option("type1", text)->required();
  cverify->add_option("type2", text2)->required();
  cverify->add_option("forward", text_a)->required();
  cverify->add_option("backward", text_b)->required();

  auto* crun = app.add_subcommand("run", "reduce a process to a stuck state");
  crun->add_option("process", text)->required();

  auto* cequiv = app.add_subcommand("equiv", "search for a refuting context");
  cequiv->add_option("process1", text)->required();
  cequiv->add_option("process2", text2)->required();

  auto* csearch = app.add_subcommand("search", "library search up to isomorphism");
  csearch->add_option("type", text)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (cparse->parsed()) {
      std::string printed;
      if (as_type)
        printed = print_type(parse_type(text));
      else if (as_expr)
        printed = print_expr(parse_expression(text));
      else
        printed = print_process(parse_process(text));
      out.result = printed;
      out.plain << printed << "\n";
      return out.finish(kOk);
    }

    if (cdual->parsed()) {
      std::string printed = print_type(dual(parse_type(text)));
      out.result = printed;
      out.plain << printed << "\n";
      return out.finish(kOk);
    }

    if (ccheck->parsed()) {
      ProcPtr p = parse_process(text);
      try {
        if (!left_text.empty() || !right_text.empty()) {
          if (left_text.empty() || right_text.empty())
            throw TypeError("--left and --right must be given together");
          InterfacePair iface{parse_type(left_text), parse_type(right_text)};
          Derivation d = check_process({}, p, iface);
          out.result = json{{"left", print_type(iface.left)},
                            {"right", print_type(iface.right)}};
          out.plain << print_type(iface.left) << " ; "
                    << print_type(iface.right) << "\n";
          if (explain) out.evidence = split_lines(derivation_text(d));
        } else {
          InterfacePair iface = ground_interfaces(p);
          Derivation d = check_process({}, p, iface);
          out.result = json{{"left", print_type(iface.left)},
                            {"right", print_type(iface.right)}};
          out.plain << print_type(iface.left) << " ; "
                    << print_type(iface.right) << "\n";
          if (explain) out.evidence = split_lines(derivation_text(d));
        }
        return out.finish(kOk);
      } catch (const TypeError& e) {
        out.ok = false;
        out.result = std::string(e.what());
        out.plain << "ill-typed: " << e.what() << "\n";
        return out.finish(kNegative);
      }
    }

    if (cid->parsed()) {
      std::string printed = print_process(id_process(parse_type(text)));
      out.result = printed;
      out.plain << printed << "\n";
      return out.finish(kOk);
    }

    if (cnorm->parsed()) {
      NormalizeResult r = normalize(parse_type(text));
      out.result = print_type(r.nf);
      out.plain << print_type(r.nf) << "\n";
      if (explain) out.evidence = split_lines(r.derivation.text());
      return out.finish(kOk);
    }

    if (ciso->parsed()) {
      TypePtr t = parse_type(text), s = parse_type(text2);
      auto d = iso_decide(t, s);
      if (!d) {
        out.ok = false;
        out.result = json{{"derivable", false},
                          {"normalForm1", print_type(normalize(t).nf)},
                          {"normalForm2", print_type(normalize(s).nf)}};
        out.plain << "not derivable from a1-a12\n"
                  << "normal form of " << print_type(t) << " : "
                  << print_type(normalize(t).nf) << "\n"
                  << "normal form of " << print_type(s) << " : "
                  << print_type(normalize(s).nf) << "\n";
        return out.finish(kNegative);
      }
      auto pair = synthesize(t, s);
      out.result = json{{"derivable", true},
                        {"forward", print_process(pair->forward)},
                        {"backward", print_process(pair->backward)}};
      out.plain << "derivable\n"
                << "forward:  " << print_process(pair->forward) << "\n"
                << "backward: " << print_process(pair->backward) << "\n";
      if (explain) out.evidence = split_lines(d->text());
      return out.finish(kOk);
    }

    if (csynth->parsed()) {
      TypePtr t = parse_type(text), s = parse_type(text2);
      auto pair = synthesize(t, s);
      if (!pair) {
        out.ok = false;
        out.result = std::string("not derivable from a1-a12");
        out.plain << "not derivable from a1-a12\n";
        return out.finish(kNegative);
      }
      out.result = json{{"forward", print_process(pair->forward)},
                        {"backward", print_process(pair->backward)}};
      out.plain << "forward:  " << print_process(pair->forward) << "\n"
                << "backward: " << print_process(pair->backward) << "\n";
      return out.finish(kOk);
    }

    if (cverify->parsed()) {
      TypePtr t = parse_type(text), s = parse_type(text2);
      ProcPtr a = parse_process(text_a), b = parse_process(text_b);
      CertifyOutcome c = certify_iso_witnesses(t, s, a, b, max_steps);
      out.ok = c.ok;
      if (c.ok) {
        out.result = std::string("certificate");
        out.plain << "certificate: all four obligations hold\n";
        if (explain && c.certificate) {
          for (auto& l : split_lines(c.certificate->left_identity.text()))
            out.evidence.push_back("A||B  " + l);
          for (auto& l : split_lines(c.certificate->right_identity.text()))
            out.evidence.push_back("B||A  " + l);
        }
        return out.finish(kOk);
      }
      out.result = c.failed_obligation;
      out.plain << "failed: " << c.failed_obligation << "\n";
      return out.finish(c.budget_exceeded ? kBudget : kNegative);
    }

    if (crun->parsed()) {
      ProcPtr p = parse_process(text);
      Trace t;
      t.initial = p;
      ProcPtr cur = canon_process(p);
      for (std::size_t k = 0; k < max_steps; ++k) {
        StepSet ss = step(cur);
        if (ss.steps.empty()) {
          if (ss.error) t.error = ss.error;
          break;
        }
        cur = ss.steps.front().next;
        t.entries.push_back({ss.steps.front().rule, ss.steps.front().position, cur});
      }
      bool terminated = congruent(cur, pidle());
      out.ok = terminated && !t.error;
      out.result = json{{"final", print_process(cur)}, {"terminated", terminated}};
      out.evidence = split_lines(t.text());
      if (!out.as_json) out.plain << "";
      return out.finish(out.ok ? kOk : kNegative);
    }

    if (cequiv->parsed()) {
      ProcPtr p = parse_process(text), q = parse_process(text2);
      InterfacePair iface = ground_interfaces(p);
      check_process({}, q, iface);
      auto r = equiv_refute(p, q, iface, trials, seed);
      if (r) {
        out.ok = false;
        out.result = json{{"refuted", true},
                          {"context", r->context_text()},
                          {"firstCorrect", r->p_correct},
                          {"secondCorrect", r->q_correct}};
        out.plain << "refuted by context: " << r->context_text() << "\n";
        return out.finish(kNegative);
      }
      out.result = json{{"refuted", false}, {"trials", trials}};
      out.plain << "no-counterexample after " << trials << " trials\n";
      return out.finish(kOk);
    }

    if (csearch->parsed()) {
      if (library_path.empty()) throw LibraryError("--library <path> is required");
      LibraryFile lib = lib_load(library_path);
      TypePtr q = parse_type(text);
      auto hits = search_by_iso(lib, q);
      json jh = json::array();
      for (const SearchHit& h : hits) {
        jh.push_back({{"name", h.record.name},
                      {"type", h.record.type_text},
                      {"exact", h.exact},
                      {"forward", print_process(h.adapters.forward)},
                      {"backward", print_process(h.adapters.backward)}});
        out.plain << (h.exact ? "= " : "~ ") << h.record.name << " : "
                  << h.record.type_text << "\n";
        if (explain) {
          out.evidence.push_back(h.record.name + " forward:  " +
                                 print_process(h.adapters.forward));
          out.evidence.push_back(h.record.name + " backward: " +
                                 print_process(h.adapters.backward));
        }
      }
      out.result = jh;
      if (hits.empty()) out.plain << "no matches\n";
      return out.finish(kOk);
    }
  } catch (const ParseError& e) {
    out.ok = false;
    out.result = std::string(e.what());
    if (out.as_json) return out.finish(kUsage);
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const LibraryError& e) {
    out.ok = false;
    out.result = std::string(e.what());
    if (out.as_json) return out.finish(kUsage);
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TypeError& e) {
    out.ok = false;
    out.result = std::string(e.what());
    if (out.as_json) return out.finish(kNegative);
    std::cerr << "type error: " << e.what() << "\n";
    return kNegative;
  } catch (const EvalError& e) {
    out.ok = false;
    out.result = std::string(e.what());
    if (out.as_json) return out.finish(kNegative);
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kNegative;
  }
  return kUsage;
}
