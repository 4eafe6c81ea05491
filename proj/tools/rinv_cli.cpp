// Command-line front end: canonicalize and simplify curvature-invariant
// expressions, build and inspect the relation database, verify it against
// exact random-metric evaluation.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "rinv/canonical.hpp"
#include "rinv/database.hpp"
#include "rinv/expr.hpp"
#include "rinv/oracle.hpp"

namespace {

// Exit codes, also documented in the README.
enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kParseError = 2,
  kUnsupportedCase = 3,
  kVerifyFailure = 4,
  kIoError = 5,
  kResourceLimit = 6,
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature-invariant canonicalization and simplification"};
  app.require_subcommand(1);

  std::string expr, db_dir = "db", case_name, step_col = "Duals", out_dir = "db";
  bool json = false, show_rounds = false;
  int max_lambda = 6, dimension = 4, signature = -1, max_slots = 16, max_deriv = 4;
  bool dual = false, nonexpanded = false, resume = false, plan = false, quiet = false;
  std::vector<std::uint64_t> seeds{424243ull, 910ull, 20240819ull};

  auto* canon = app.add_subcommand("canon", "canonical form of an expression");
  canon->add_option("expr", expr, "index-notation expression")->required();

  auto* simplify = app.add_subcommand("simplify", "reduce over the independent basis");
  simplify->add_option("expr", expr)->required();
  simplify->add_option("--db", db_dir, "database directory");
  simplify->add_flag("--json", json);
  simplify->add_flag("--rounds", show_rounds, "report the substitution count");

  auto* build = app.add_subcommand("build", "enumerate cases and build the rule database");
  build->add_option("--max-lambda", max_lambda, "largest metric-derivative order (even)");
  build->add_flag("--dual", dual, "build the dual family");
  build->add_option("--dimension", dimension);
  build->add_option("--signature", signature, "-1 Lorentzian, +1 Euclidean");
  build->add_flag("--nonexpanded", nonexpanded, "store non-expanded rule files");
  build->add_option("--out", out_dir);
  build->add_option("--max-slots", max_slots, "enumeration slot bound");
  build->add_flag("--resume", resume, "reuse complete relation files");
  build->add_flag("--plan", plan, "list cases and sizes without building");
  build->add_flag("--quiet", quiet);

  auto* counts = app.add_subcommand("counts", "independent-invariant counts per step");
  counts->add_option("--case", case_name)->required();
  counts->add_option("--step", step_col, "Canon, Invars, Cyclic, Bianchi, Commute, 4D or Duals");
  counts->add_option("--db", db_dir);
  counts->add_flag("--json", json);

  auto* verify = app.add_subcommand("verify", "evaluate every stored relation on random jets");
  verify->add_option("--db", db_dir);
  verify->add_option("--seeds", seeds, "metric seeds");
  verify->add_option("--max-deriv", max_deriv, "jet depth (relations above it are skipped)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(canon)) {
      const auto terms = rinv::parse_expression(expr);
      rinv::GroupCache groups;
      std::vector<std::pair<rinv::Rational, rinv::Monomial>> in;
      for (const auto& t : terms) in.emplace_back(t.coeff, t.mono);
      std::cout << rinv::print_combination(rinv::canonicalize_combination(in, groups)) << "\n";
      return kOk;
    }
    if (app.got_subcommand(simplify)) {
      const rinv::Database db = rinv::load_database(db_dir);
      rinv::Simplifier s(db);
      const auto result = s.simplify(rinv::parse_expression(expr));
      if (json) {
        nlohmann::ordered_json j;
        j["rounds"] = result.rounds;
        j["text"] = s.render(result.comb);
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& [id, c] : result.comb.terms)
          terms.push_back(
              {{"case", id.cs.str()}, {"index", id.index}, {"coeff", rinv::to_string(c)}});
        for (const auto& [key, c] : result.comb.products) {
          nlohmann::ordered_json factors = nlohmann::ordered_json::array();
          for (const auto& id : key)
            factors.push_back({{"case", id.cs.str()}, {"index", id.index}});
          terms.push_back({{"product", factors}, {"coeff", rinv::to_string(c)}});
        }
        j["terms"] = terms;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << s.render(result.comb) << "\n";
        if (show_rounds) std::cerr << "substitutions: " << result.rounds << "\n";
      }
      return kOk;
    }
    if (app.got_subcommand(build)) {
      rinv::BuildParams p;
      p.max_lambda = max_lambda;
      p.dual_family = dual;
      p.dimension = dimension;
      p.signature = signature;
      p.mode = nonexpanded ? rinv::StoreMode::NonExpanded : rinv::StoreMode::Expanded;
      p.max_slots = max_slots;
      p.out_dir = out_dir;
      p.resume = resume;
      if (!quiet) p.log = [](const std::string& m) { std::cerr << m << "\n"; };
      if (plan) {
        const int dual_limit = p.dual_family ? p.max_lambda : std::max(0, p.max_lambda - 2);
        const int nondual_limit = p.dual_family ? std::max(0, p.max_lambda - 2) : p.max_lambda;
        auto show = [&](const rinv::Case& c) {
          std::cout << c.str() << ": slots " << c.slot_count() << ", matchings "
                    << rinv::matching_count(c.slot_count())
                    << (c.slot_count() > p.max_slots ? "  [over the slot bound]" : "") << "\n";
        };
        for (const auto& c : rinv::cases_up_to(nondual_limit, false)) show(c);
        for (const auto& c : rinv::cases_up_to(dual_limit, true)) show(c);
        return kOk;
      }
      rinv::build_database(p);
      return kOk;
    }
    if (app.got_subcommand(counts)) {
      const rinv::Database db = rinv::load_database(db_dir);
      const rinv::Case c = rinv::Case::parse(case_name);
      auto it = db.counts.find(c);
      if (it == db.counts.end()) throw rinv::UnsupportedCaseError(c);
      const std::int64_t value = it->second.column(step_col);
      if (value < 0) throw rinv::UnsupportedCaseError(c);
      if (json) {
        nlohmann::ordered_json j;
        j["case"] = c.str();
        j["step"] = step_col;
        j["count"] = value;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << value << "\n";
      }
      return kOk;
    }
    if (app.got_subcommand(verify)) {
      const auto report = rinv::verify_database(
          db_dir, seeds, max_deriv, [](const std::string& m) { std::cerr << m << "\n"; });
      std::cout << "checked " << report.checked << " relations, skipped " << report.skipped
                << " above derivative depth, failures " << report.failures.size() << "\n";
      for (const auto& f : report.failures) std::cout << "FAIL " << f << "\n";
      return report.ok() ? kOk : kVerifyFailure;
    }
  } catch (const rinv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const rinv::UnsupportedCaseError& e) {
    std::cerr << e.what() << "\n";
    return kUnsupportedCase;
  } catch (const rinv::DependencyError& e) {
    std::cerr << e.what() << "\n";
    return kUnsupportedCase;
  } catch (const rinv::ResourceLimitError& e) {
    std::cerr << e.what() << "\n";
    return kResourceLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kUsage;
}
