#include "rinv/database.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace rinv {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::int64_t CaseCounts::column(const std::string& name) const {
  if (name == "Canon") return canon;
  if (name == "Invars") return invars;
  if (name == "Cyclic") return cyclic;
  if (name == "Bianchi") return bianchi;
  if (name == "Commute") return commute;
  if (name == "4D") return dimdep;
  if (name == "Duals") return duals;
  throw std::invalid_argument("unknown step column '" + name +
                              "' (expected Canon, Invars, Cyclic, Bianchi, Commute, 4D or Duals)");
}

const CaseTable* Database::table(const Case& c) const {
  auto it = tables.find(c);
  return it == tables.end() ? nullptr : &it->second;
}

Monomial Database::monomial_of(const InvariantId& id) const {
  const CaseTable* t = table(id.cs);
  if (!t || id.index < 1 || id.index > t->invars())
    throw std::invalid_argument("unknown invariant " + id.str());
  return Monomial{id.cs, t->entries[id.index - 1]};
}

std::vector<InvariantId> Database::survivors(const Case& c) const {
  std::vector<InvariantId> out;
  const CaseTable* t = table(c);
  if (!t) return out;
  for (std::int32_t i = 1; i <= t->invars(); ++i)
    if (!rules.reducible(InvariantId{c, i})) out.push_back(InvariantId{c, i});
  return out;
}

std::vector<Case> cases_up_to(int max_lambda, bool dual) {
  std::vector<Case> out;
  std::vector<std::uint8_t> stack;
  std::function<void(int, int)> rec = [&](int budget, int min_lambda) {
    if (!stack.empty()) {
      Case c;
      c.lambdas = stack;
      c.dual = dual;
      if (c.order() % 2 == 0) out.push_back(c);  // scalars need an even slot count
    }
    for (int l = min_lambda; l + 2 <= budget; ++l) {
      stack.push_back(static_cast<std::uint8_t>(l));
      rec(budget - 2 - l, l);
      stack.pop_back();
    }
  };
  rec(max_lambda, 0);
  std::sort(out.begin(), out.end(), [](const Case& a, const Case& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    return a.lambdas < b.lambdas;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string lincomb_to_text(const LinComb& c) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << ' ';
    first = false;
  };
  for (const auto& [id, q] : c.terms) {
    sep();
    os << "T " << id.cs.str() << ' ' << id.index << ' ' << q.get_num().get_str() << ' '
       << q.get_den().get_str();
  }
  for (const auto& [key, q] : c.products) {
    sep();
    os << "P " << key.size();
    for (const auto& id : key) os << ' ' << id.cs.str() << ' ' << id.index;
    os << ' ' << q.get_num().get_str() << ' ' << q.get_den().get_str();
  }
  return os.str();
}

LinComb lincomb_from_text(const std::string& line) {
  LinComb out;
  std::istringstream is(line);
  std::string tag;
  while (is >> tag) {
    if (tag == "T") {
      std::string cs, num, den;
      std::int32_t idx;
      if (!(is >> cs >> idx >> num >> den)) throw std::runtime_error("bad term in: " + line);
      out.add(InvariantId{Case::parse(cs), idx}, Rational(Int(num), Int(den)));
    } else if (tag == "P") {
      std::size_t k;
      if (!(is >> k)) throw std::runtime_error("bad product in: " + line);
      ProductKey key;
      for (std::size_t i = 0; i < k; ++i) {
        std::string cs;
        std::int32_t idx;
        if (!(is >> cs >> idx)) throw std::runtime_error("bad product in: " + line);
        key.push_back(InvariantId{Case::parse(cs), idx});
      }
      std::string num, den;
      if (!(is >> num >> den)) throw std::runtime_error("bad product in: " + line);
      out.add_product(std::move(key), Rational(Int(num), Int(den)));
    } else {
      throw std::runtime_error("bad lincomb tag '" + tag + "' in: " + line);
    }
  }
  return out;
}

namespace {

std::string family_dir(bool dual) { return dual ? "dual" : "nondual"; }

std::string rels_path(const Case& c, Step s) {
  std::string name = c.str();
  if (c.dual) name.pop_back();
  return family_dir(c.dual) + "/" + name + "/" + step_name(s) + ".rels";
}
std::string rules_path(const Case& c, Step s) {
  std::string name = c.str();
  if (c.dual) name.pop_back();
  return family_dir(c.dual) + "/" + name + "/" + step_name(s) + ".rules";
}
std::string table_path(const Case& c) {
  std::string name = c.str();
  if (c.dual) name.pop_back();
  return family_dir(c.dual) + "/" + name + "/table.inv";
}

std::string checksum_hex(const std::string& data) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(data.data(), data.size())));
  return buf;
}

struct Writer {
  std::string root;  // empty: no persistence
  std::map<std::string, std::string> checksums;

  void put(const std::string& rel, const std::string& content) {
    checksums[rel] = checksum_hex(content);
    if (root.empty()) return;
    const fs::path path = fs::path(root) / rel;
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      os << content;
      if (!os) throw std::runtime_error("cannot write " + path.string());
    }
    fs::rename(tmp, path);
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string mode_name(StoreMode m) {
  return m == StoreMode::Expanded ? "expanded" : "nonexpanded";
}
StoreMode mode_from_name(const std::string& s) {
  if (s == "expanded") return StoreMode::Expanded;
  if (s == "nonexpanded") return StoreMode::NonExpanded;
  throw std::runtime_error("unknown storage mode '" + s + "'");
}

// One build in progress.
struct Builder {
  const BuildParams& p;
  TableSet tables;
  RuleBase rules;
  std::map<Case, CaseCounts> counts;
  std::map<Case, std::int64_t> live;
  Writer writer;
  std::int64_t dropped_product_relations = 0;

  explicit Builder(const BuildParams& params) : p(params), rules(params.mode) {
    writer.root = p.out_dir;
  }

  void log(const std::string& msg) {
    if (p.log) p.log(msg);
  }

  void build_tables(const std::vector<Case>& cases) {
    for (const Case& c : cases) {
      auto scan = std::make_shared<CaseScan>(CaseScan::enumerate(c, p.max_slots));
      counts[c].canon = static_cast<std::int64_t>(scan->table().canon);
      counts[c].invars = scan->table().invars();
      live[c] = scan->table().invars();
      log("table " + c.str() + ": canon " + std::to_string(counts[c].canon) + ", invars " +
          std::to_string(counts[c].invars));
      tables.add(std::move(scan));
    }
  }

  void consume(Step step, const LinComb& comb, std::vector<std::string>& lines) {
    lines.push_back("R " + lincomb_to_text(comb));
    auto pivot = rules.eliminate(comb, step);
    if (pivot) {
      --live[pivot->cs];
    } else if (comb.terms.empty() && !comb.products.empty()) {
      ++dropped_product_relations;
    }
  }

  // Relations of one (case, step): reuse the stored file when resuming,
  // otherwise generate, deduplicate across the whole case and eliminate.
  void run_case_step(const Case& c, Step step) {
    const std::string rel = rels_path(c, step);
    if (p.resume && !p.out_dir.empty()) {
      const fs::path path = fs::path(p.out_dir) / rel;
      if (fs::exists(path)) {
        if (replay(rel, read_file(path), c, step)) return;
      }
    }
    const CaseScan& scan = tables.need(c);
    std::vector<std::string> lines;
    std::set<std::string> seen;
    for (std::int32_t idx = 1; idx <= scan.table().invars(); ++idx) {
      for (Relation& r : step_relations(tables, InvariantId{c, idx}, step, p.dimension)) {
        LinComb norm = r.comb;
        const Rational lead = !norm.terms.empty() ? norm.terms.rbegin()->second
                                                  : norm.products.rbegin()->second;
        norm.scale(1 / lead);
        if (!seen.insert(lincomb_to_text(norm)).second) continue;
        consume(step, r.comb, lines);
      }
    }
    write_rels(rel, c, step, lines);
  }

  bool replay(const std::string& rel, const std::string& content, const Case& c, Step step) {
    std::istringstream is(content);
    std::string header, cs, sname;
    int fmt = 0;
    std::size_t n = 0;
    is >> header >> fmt;
    std::string word;
    is >> word >> cs >> word >> sname >> word >> n;
    if (header != "relfile" || fmt != 1 || cs != c.str() || sname != step_name(step))
      return false;
    std::vector<std::string> lines;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      lines.push_back(line);
    }
    if (lines.size() != n) return false;  // incomplete file: regenerate
    log("resume " + rel + " (" + std::to_string(n) + " relations)");
    std::vector<std::string> out;
    for (const auto& l : lines) consume(step, lincomb_from_text(l.substr(2)), out);
    writer.put(rel, content);
    return true;
  }

  void write_rels(const std::string& rel, const Case& c, Step step,
                  const std::vector<std::string>& lines) {
    std::ostringstream os;
    os << "relfile 1\n";
    os << "case " << c.str() << "\n";
    os << "step " << step_name(step) << "\n";
    os << "count " << lines.size() << "\n";
    for (const auto& l : lines) os << l << "\n";
    writer.put(rel, os.str());
  }

  // Steps 2..5 for every case of one order stratum, degree-descending, one
  // step completed across the stratum before counts are recorded.
  void run_stratum(const std::vector<Case>& stratum, bool with_dual_step, int dual_limit) {
    const struct {
      Step step;
      std::int64_t CaseCounts::* column;
    } steps[] = {{Step::Cyclic, &CaseCounts::cyclic},
                 {Step::Bianchi, &CaseCounts::bianchi},
                 {Step::Commute, &CaseCounts::commute},
                 {Step::DimDep, &CaseCounts::dimdep}};
    for (const auto& [step, column] : steps) {
      for (const Case& c : stratum) run_case_step(c, step);
      for (const Case& c : stratum) counts[c].*column = live[c];
    }
    if (!with_dual_step) return;
    const int lambda = stratum.front().order();
    run_dual_step(lambda, dual_limit);
    for (const Case& c : stratum) counts[c].duals = live[c];
  }

  // Step 6 for one nondual stratum: pair the surviving dual invariants whose
  // orders add up to the stratum order, expand the epsilon pair, eliminate.
  void run_dual_step(int lambda, int dual_limit) {
    std::vector<InvariantId> survivors;
    for (const auto& [c, scan] : tables.scans()) {
      if (!c.dual || c.order() > dual_limit) continue;
      for (std::int32_t i = 1; i <= scan->table().invars(); ++i)
        if (!rules.reducible(InvariantId{c, i})) survivors.push_back(InvariantId{c, i});
    }
    std::sort(survivors.begin(), survivors.end(), GlobalOrderLess{});
    std::map<Case, std::vector<std::string>> lines;
    for (std::size_t i = 0; i < survivors.size(); ++i)
      for (std::size_t j = i; j < survivors.size(); ++j) {
        if (survivors[i].cs.order() + survivors[j].cs.order() != lambda) continue;
        Relation r = dual_pair_relation(tables, survivors[i], survivors[j], p.signature);
        Case merged;
        merged.lambdas.reserve(survivors[i].cs.degree() + survivors[j].cs.degree());
        for (auto l : survivors[i].cs.lambdas) merged.lambdas.push_back(l);
        for (auto l : survivors[j].cs.lambdas) merged.lambdas.push_back(l);
        std::sort(merged.lambdas.begin(), merged.lambdas.end());
        consume(Step::Dual, r.comb, lines[merged]);
      }
    for (const auto& [c, ls] : lines) write_rels(rels_path(c, Step::Dual), c, Step::Dual, ls);
  }

  void write_tables_and_rules() {
    for (const auto& [c, scan] : tables.scans()) {
      std::ostringstream os;
      scan->table().write(os);
      writer.put(table_path(c), os.str());
    }
    std::map<std::pair<Case, Step>, std::vector<std::string>> grouped;
    for (const auto& [pivot, rule] : rules.rules()) {
      std::ostringstream os;
      os << "V " << pivot.cs.str() << ' ' << pivot.index << " := " << lincomb_to_text(rule.rhs);
      grouped[{pivot.cs, rule.step}].push_back(os.str());
    }
    for (const auto& [key, ls] : grouped) {
      std::ostringstream os;
      os << "rulefile 1\n";
      os << "case " << key.first.str() << "\n";
      os << "step " << step_name(key.second) << "\n";
      os << "mode " << mode_name(p.mode) << "\n";
      os << "count " << ls.size() << "\n";
      for (const auto& l : ls) os << l << "\n";
      writer.put(rules_path(key.first, key.second), os.str());
    }
  }

  void write_manifest(int dual_limit) {
    ordered_json j;
    j["format"] = 1;
    j["family"] = p.dual_family ? "dual" : "nondual";
    j["max_lambda"] = p.max_lambda;
    j["dual_max_lambda"] = dual_limit;
    j["dimension"] = p.dimension;
    j["signature"] = p.signature;
    j["mode"] = mode_name(p.mode);
    ordered_json jc;
    for (const auto& [c, cc] : counts) {
      ordered_json e;
      e["canon"] = cc.canon;
      e["invars"] = cc.invars;
      e["cyclic"] = cc.cyclic;
      e["bianchi"] = cc.bianchi;
      e["commute"] = cc.commute;
      e["dimdep"] = cc.dimdep;
      if (cc.duals >= 0) e["duals"] = cc.duals;
      jc[c.str()] = e;
    }
    j["counts"] = jc;
    ordered_json jf;
    for (const auto& [rel, sum] : writer.checksums) jf[rel] = sum;
    j["files"] = jf;
    writer.put("manifest.json", j.dump(2) + "\n");
  }
};

}  // namespace

Database build_database(const BuildParams& p) {
  if (p.max_lambda < 2 || p.max_lambda % 2)
    throw std::invalid_argument("max_lambda must be an even integer >= 2");
  if (p.dimension != 4)
    throw std::invalid_argument("only dimension 4 identities are generated");
  if (p.signature != 1 && p.signature != -1)
    throw std::invalid_argument("signature must be +1 or -1");

  Builder b(p);
  // The dual pipeline (or the dual family itself) plus whatever tables the
  // other family contributes to product terms and the epsilon-pair step.
  const int dual_limit = p.dual_family ? p.max_lambda : std::max(0, p.max_lambda - 2);
  const int nondual_limit = p.dual_family ? std::max(0, p.max_lambda - 2) : p.max_lambda;
  std::vector<Case> nondual_cases = cases_up_to(nondual_limit, false);
  std::vector<Case> dual_cases = cases_up_to(dual_limit, true);

  b.build_tables(nondual_cases);
  b.build_tables(dual_cases);

  auto strata = [](const std::vector<Case>& cases) {
    std::map<int, std::vector<Case>> by_order;
    for (const Case& c : cases) by_order[c.order()].push_back(c);
    return by_order;
  };
  for (auto& [lambda, cases] : strata(dual_cases)) {
    b.log("dual stratum " + std::to_string(lambda));
    b.run_stratum(cases, false, dual_limit);
  }
  if (!p.dual_family) {
    for (auto& [lambda, cases] : strata(nondual_cases)) {
      b.log("stratum " + std::to_string(lambda));
      b.run_stratum(cases, true, dual_limit);
    }
  }

  b.write_tables_and_rules();
  b.write_manifest(dual_limit);

  Database db;
  db.max_lambda = p.max_lambda;
  db.dual_max_lambda = dual_limit;
  db.dual_family = p.dual_family;
  db.dimension = p.dimension;
  db.signature = p.signature;
  db.mode = p.mode;
  db.dir = p.out_dir;
  for (const auto& [c, scan] : b.tables.scans()) db.tables.emplace(c, scan->table());
  db.rules = std::move(b.rules);
  db.counts = std::move(b.counts);
  return db;
}

Database load_database(const std::string& dir) {
  const fs::path root(dir);
  ordered_json j = ordered_json::parse(read_file(root / "manifest.json"));
  if (j.at("format").get<int>() != 1) throw std::runtime_error("unsupported database format");
  Database db;
  db.dir = dir;
  db.max_lambda = j.at("max_lambda").get<int>();
  db.dual_max_lambda = j.at("dual_max_lambda").get<int>();
  db.dual_family = j.at("family").get<std::string>() == "dual";
  db.dimension = j.at("dimension").get<int>();
  db.signature = j.at("signature").get<int>();
  db.mode = mode_from_name(j.at("mode").get<std::string>());
  db.rules = RuleBase(db.mode);

  for (const auto& [cs, e] : j.at("counts").items()) {
    CaseCounts cc;
    cc.canon = e.at("canon").get<std::int64_t>();
    cc.invars = e.at("invars").get<std::int64_t>();
    cc.cyclic = e.at("cyclic").get<std::int64_t>();
    cc.bianchi = e.at("bianchi").get<std::int64_t>();
    cc.commute = e.at("commute").get<std::int64_t>();
    cc.dimdep = e.at("dimdep").get<std::int64_t>();
    if (e.contains("duals")) cc.duals = e.at("duals").get<std::int64_t>();
    db.counts[Case::parse(cs)] = cc;
  }

  for (const auto& [rel, sum] : j.at("files").items()) {
    const std::string content = read_file(root / rel);
    if (checksum_hex(content) != sum.get<std::string>())
      throw std::runtime_error("checksum mismatch for " + rel);
    if (rel.size() > 4 && rel.substr(rel.size() - 4) == ".inv") {
      std::istringstream is(content);
      CaseTable t = CaseTable::read(is);
      db.tables[t.cs] = std::move(t);
    }
  }
  for (const auto& [rel, sum] : j.at("files").items()) {
    if (rel.size() > 6 && rel.substr(rel.size() - 6) == ".rules") {
      std::istringstream is(read_file(root / rel));
      std::string header, word, cs, sname, mode;
      int fmt = 0;
      std::size_t n = 0;
      is >> header >> fmt >> word >> cs >> word >> sname >> word >> mode >> word >> n;
      if (header != "rulefile" || fmt != 1) throw std::runtime_error("bad rule file " + rel);
      const Step step = step_from_name(sname);
      std::string line;
      std::getline(is, line);
      std::size_t got = 0;
      while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag, pcs, assign;
        std::int32_t idx;
        ls >> tag >> pcs >> idx >> assign;
        if (tag != "V" || assign != ":=") throw std::runtime_error("bad rule line in " + rel);
        std::string rest;
        std::getline(ls, rest);
        InvariantId pivot{Case::parse(pcs), idx};
        db.rules.insert_raw(pivot, Rule{lincomb_from_text(rest), step});
        ++got;
      }
      if (got != n) throw std::runtime_error("truncated rule file " + rel);
    }
  }

  // Dependency closure: every id mentioned anywhere must resolve.
  auto check_id = [&](const InvariantId& id) {
    const CaseTable* t = db.table(id.cs);
    if (!t || id.index < 1 || id.index > t->invars())
      throw std::runtime_error("dangling reference to " + id.str());
  };
  for (const auto& [pivot, rule] : db.rules.rules()) {
    check_id(pivot);
    for (const auto& [id, c] : rule.rhs.terms) check_id(id);
    for (const auto& [key, c] : rule.rhs.products)
      for (const auto& id : key) check_id(id);
  }
  return db;
}

// ---------------------------------------------------------------------------
// Simplifier

LinComb Simplifier::canonical_combination(const std::vector<ParsedTerm>& terms) {
  LinComb out;
  for (const auto& t : terms) {
    Rational coeff = t.coeff;
    ProductKey key;
    bool zero = false;
    for (const Monomial& part : split_components(t.mono)) {
      const CaseTable* tab = db_.table(part.cs);
      if (!tab) throw UnsupportedCaseError(part.cs);
      const CanonicalMonomial c = canonicalize(part, groups_.group(part.cs));
      if (c.sign == 0) {
        zero = true;
        break;
      }
      const std::int32_t idx = tab->index_of(c.canonical.pairing);
      if (idx == 0)
        throw std::runtime_error("canonical form missing from table of case " + part.cs.str());
      coeff *= c.sign;
      key.push_back(InvariantId{part.cs, idx});
    }
    if (zero) continue;
    out.add_product(std::move(key), coeff);
  }
  return out;
}

Simplifier::Result Simplifier::simplify(const std::vector<ParsedTerm>& terms) {
  Result r;
  r.comb = db_.rules.reduce(canonical_combination(terms), &r.rounds);
  return r;
}

std::string Simplifier::render(const LinComb& comb) const {
  if (comb.empty()) return "0";
  std::string out;
  bool first = true;
  auto emit = [&](const Rational& q, const std::string& body) {
    if (!first) out += ' ';
    out += print_coefficient(q, first);
    out += body;
    first = false;
  };
  for (const auto& [id, q] : comb.terms) emit(q, print_monomial(db_.monomial_of(id)));
  for (const auto& [key, q] : comb.products) {
    int duals = 0;
    for (const auto& id : key) duals += id.cs.dual;
    if (duals <= 1) {
      std::vector<Monomial> parts;
      for (const auto& id : key) parts.push_back(db_.monomial_of(id));
      emit(q, print_monomial(merge_monomials(parts)));
    } else {
      // Two epsilon factors cannot share one expression term; fall back to
      // invariant references.
      std::string body;
      for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) body += " * ";
        body += key[i].str();
      }
      emit(q, body);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification sweep

VerifyReport verify_database(const std::string& dir, const std::vector<std::uint64_t>& seeds,
                             int max_deriv,
                             const std::function<void(const std::string&)>& log) {
  Database db = load_database(dir);
  VerifyReport report;

  PolyContext ctx(max_deriv + 2);
  std::vector<CurvatureJet> jets;
  std::vector<JetEvaluator> evals;
  for (auto seed : seeds) {
    const PolyMetric metric = PolyMetric::random(&ctx, seed, db.signature);
    jets.push_back(curvature_jet(metric, max_deriv));
  }
  for (const auto& jet : jets) {
    JetEvaluator ev(&jet);
    for (const auto& [c, t] : db.tables) ev.add_case(c, t.entries);
    evals.push_back(std::move(ev));
  }

  ordered_json j = ordered_json::parse(read_file(fs::path(dir) / "manifest.json"));
  for (const auto& [rel, sum] : j.at("files").items()) {
    if (rel.size() < 5 || rel.substr(rel.size() - 5) != ".rels") continue;
    std::istringstream is(read_file(fs::path(dir) / rel));
    std::string header, word, cs, sname;
    int fmt = 0;
    std::size_t n = 0;
    is >> header >> fmt >> word >> cs >> word >> sname >> word >> n;
    if (header != "relfile" || fmt != 1) throw std::runtime_error("bad relation file " + rel);
    std::string line;
    std::getline(is, line);
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      ++lineno;
      const LinComb comb = lincomb_from_text(line.substr(2));
      int lmax = 0;
      auto see = [&](const InvariantId& id) {
        for (auto l : id.cs.lambdas) lmax = std::max(lmax, static_cast<int>(l));
      };
      for (const auto& [id, c] : comb.terms) see(id);
      for (const auto& [key, c] : comb.products)
        for (const auto& id : key) see(id);
      if (lmax > max_deriv) {
        ++report.skipped;
        continue;
      }
      for (std::size_t m = 0; m < evals.size(); ++m) {
        const Rational v = evals[m].value(comb);
        if (v != 0)
          report.failures.push_back(rel + ":" + std::to_string(lineno) + " seed#" +
                                    std::to_string(m) + " -> " + to_string(v));
      }
      ++report.checked;
    }
    if (log) log(rel + ": " + std::to_string(lineno) + " relations");
  }
  return report;
}

}  // namespace rinv
