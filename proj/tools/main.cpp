// Command-line front end: parse operators and expressions, run the
// constructions and checks, verify named identity suites, emit JSON.
//
// Exit codes: 0 success, 1 mathematical failure (--strict check that fails,
// verify suite with failures), 2 input errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wronsky/json_io.hpp"
#include "wronsky/parse.hpp"

using namespace wronsky;

namespace {

// Arguments may be given inline or as @path to read the text from a file.
std::string read_arg(const std::string& s) {
  if (s.empty() || s[0] != '@') return s;
  std::ifstream in(s.substr(1));
  if (!in) throw PreconditionError("cannot read file " + s.substr(1));
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

Expr arg_expr(const std::string& s) { return parse_expr(read_arg(s)); }
LPDO arg_lpdo(const std::string& s) { return parse_lpdo(read_arg(s)); }
HyperbolicL arg_hyperbolic(const std::string& s) {
  return HyperbolicL::from_lpdo(arg_lpdo(s));
}
FirstOrderM arg_first_order(const std::string& s) {
  return FirstOrderM::from_lpdo(arg_lpdo(s));
}

void emit(const Json& j, bool pretty) {
  if (pretty)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << j.dump() << "\n";
}

int emit_error(const std::string& kind, const std::string& message, bool pretty,
               std::size_t position = std::string::npos) {
  Json err;
  err["kind"] = kind;
  err["message"] = message;
  if (position != std::string::npos) err["position"] = position;
  Json j;
  j["error"] = std::move(err);
  emit(j, pretty);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Darboux transformations of Dx*Dy + a*Dx + b*Dy + c"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "indent the JSON output");

  std::string a_text, b_text, l_text, m_text, psi1_text, psi2_text;
  std::string alpha_text = "0", beta_text = "0";
  std::string q_text, minv_text, h_text, r_text, z_text, z1_text;
  std::vector<std::string> solutions;
  int wm = 0, wn = 0;
  bool witness = false, strict = false, evolution = false, gauge_flag = false;
  std::string verify_id;
  std::uint64_t seed = 0;

  CLI::App* cmd_compose = app.add_subcommand("compose", "compose two operators A∘B");
  cmd_compose->add_option("--A", a_text, "left operator")->required();
  cmd_compose->add_option("--B", b_text, "right operator")->required();

  CLI::App* cmd_dar11 = app.add_subcommand(
      "darboux11", "bi-degree (1,1) transformation from two kernel elements");
  cmd_dar11->add_option("--L", l_text, "hyperbolic operator")->required();
  cmd_dar11->add_option("--psi1", psi1_text, "first kernel element")->required();
  cmd_dar11->add_option("--psi2", psi2_text, "second kernel element")->required();
  cmd_dar11->add_flag("--witness", witness, "also solve for N and L1 and emit the witness");

  CLI::App* cmd_wronskian =
      app.add_subcommand("wronskian", "determinant operator from m+n kernel elements");
  cmd_wronskian->add_option("--L", l_text, "hyperbolic operator")->required();
  cmd_wronskian->add_option("--solution", solutions, "kernel element (repeat m+n times)")
      ->required();
  cmd_wronskian->add_option("--m", wm, "Dx order")->required();
  cmd_wronskian->add_option("--n", wn, "Dy order")->required();

  CLI::App* cmd_check =
      app.add_subcommand("check", "existence conditions for a pair (L, M)");
  cmd_check->add_option("--L", l_text, "hyperbolic operator")->required();
  cmd_check->add_option("--M", m_text, "first-order operator Dx + q*Dy + r")->required();
  cmd_check->add_flag("--strict", strict, "exit 1 when no transformation exists");

  CLI::App* cmd_invariants = app.add_subcommand("invariants", "invariants of a pair (L, M)");
  cmd_invariants->add_option("--L", l_text, "hyperbolic operator")->required();
  cmd_invariants->add_option("--M", m_text, "first-order operator")->required();
  cmd_invariants->add_flag("--evolution", evolution, "gauged-evolution invariants (q, I2, I3)");
  cmd_invariants->add_flag("--gauge", gauge_flag, "gauge invariants (q, m, h, R); the default");

  CLI::App* cmd_evolve = app.add_subcommand("evolve", "gauged evolution of a pair");
  cmd_evolve->add_option("--L", l_text, "hyperbolic operator")->required();
  cmd_evolve->add_option("--M", m_text, "first-order operator")->required();
  cmd_evolve->add_option("--alpha", alpha_text, "gauge exponent");
  cmd_evolve->add_option("--beta", beta_text, "evolution coefficient");

  CLI::App* cmd_reconstruct = app.add_subcommand(
      "reconstruct", "build a pair with prescribed gauge invariants from z and z1");
  cmd_reconstruct->set_help_flag("--help", "print help");  // frees -h for the invariant
  cmd_reconstruct->add_option("--q", q_text, "target q")->required();
  cmd_reconstruct->add_option("--m", minv_text, "target m")->required();
  cmd_reconstruct->add_option("--h", h_text, "target h")->required();
  cmd_reconstruct->add_option("--R", r_text, "target R")->required();
  cmd_reconstruct->add_option("--z", z_text, "parametrizing function")->required();
  cmd_reconstruct->add_option("--z1", z1_text, "auxiliary kernel element")->required();

  CLI::App* cmd_verify = app.add_subcommand("verify", "run a named verification suite");
  cmd_verify->add_option("id", verify_id, "suite identifier")->required();
  cmd_verify->add_option("--seed", seed, "random seed for generated cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*cmd_compose) {
      emit(to_json(compose(arg_lpdo(a_text), arg_lpdo(b_text))), pretty);
    } else if (*cmd_dar11) {
      HyperbolicL l = arg_hyperbolic(l_text);
      FirstOrderM m = darboux11(l, arg_expr(psi1_text), arg_expr(psi2_text));
      if (witness) {
        emit(to_json(solve_intertwining(l, m)), pretty);
      } else {
        Json j;
        j["M"] = to_json(m.to_lpdo());
        j["q"] = m.q.str();
        j["r"] = m.r.str();
        emit(j, pretty);
      }
    } else if (*cmd_wronskian) {
      HyperbolicL l = arg_hyperbolic(l_text);
      std::vector<Expr> psis;
      for (const std::string& s : solutions) psis.push_back(arg_expr(s));
      emit(to_json(wronskian_mn(l, psis, wm, wn)), pretty);
    } else if (*cmd_check) {
      HyperbolicL l = arg_hyperbolic(l_text);
      FirstOrderM m = arg_first_order(m_text);
      auto [c1, c2] = existence_conditions(l, m);
      ZeroTest t1 = c1.test_zero(), t2 = c2.test_zero();
      bool exists = t1.zero && t2.zero;
      Json j;
      j["exists"] = exists;
      j["conditions"] = Json::array({c1.str(), c2.str()});
      if (t1.unreduced_kernels || t2.unreduced_kernels) j["unreduced_kernels"] = true;
      emit(j, pretty);
      if (strict && !exists) return 1;
    } else if (*cmd_invariants) {
      HyperbolicL l = arg_hyperbolic(l_text);
      FirstOrderM m = arg_first_order(m_text);
      if (evolution)
        emit(to_json(evolution_invariants(l, m)), pretty);
      else
        emit(to_json(gauge_invariants(l, m)), pretty);
    } else if (*cmd_evolve) {
      auto [le, me] = gauged_evolution(arg_hyperbolic(l_text), arg_first_order(m_text),
                                       arg_expr(alpha_text), arg_expr(beta_text));
      Json j;
      j["L"] = to_json(le);
      j["M"] = to_json(me);
      emit(j, pretty);
    } else if (*cmd_reconstruct) {
      GaugeInvariants targets{arg_expr(q_text), arg_expr(minv_text), arg_expr(h_text),
                              arg_expr(r_text)};
      auto [l, m] = reconstruct_pair(targets, arg_expr(z_text), arg_expr(z1_text));
      Json j;
      j["L"] = to_json(l);
      j["M"] = to_json(m);
      j["invariants"] = to_json(gauge_invariants(l, m));
      emit(j, pretty);
    } else if (*cmd_verify) {
      VerifyReport rep = run_verify(verify_id, seed);
      emit(to_json(rep), pretty);
      if (rep.failures() > 0) return 1;
    }
  } catch (const ParseError& e) {
    return emit_error("parse", e.what(), pretty, e.position());
  } catch (const PreconditionError& e) {
    return emit_error("precondition", e.what(), pretty);
  } catch (const DomainError& e) {
    return emit_error("domain", e.what(), pretty);
  }
  return 0;
}
