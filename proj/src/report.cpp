#include "coxnorm/report.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "coxnorm/category.hpp"
#include "coxnorm/diagram.hpp"
#include "coxnorm/leech.hpp"
#include "coxnorm/parabolic.hpp"
#include "coxnorm/presentation.hpp"

namespace coxnorm::cli {

namespace {

using json = nlohmann::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Refused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void progress(const RunConfig& c, const std::string& s) {
  if (c.verbose) std::cerr << "coxnorm: " << s << std::endl;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// "full", "trivial", or a file with one permutation per line: the images of d's nodes in order.
std::vector<Permutation> group_generators(const std::string& source, const CoxeterDiagram& d) {
  if (source == "full") return automorphism_group(d).generators;
  if (source == "trivial") return {};
  std::vector<Permutation> gens;
  std::istringstream in(read_file(source));
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::uint32_t> img;
    std::string name;
    while (ls >> name) {
      auto i = d.index_of(name);
      if (!i) throw InputError(source + ": unknown node " + name);
      img.push_back(static_cast<std::uint32_t>(*i));
    }
    if (img.empty()) continue;
    if (img.size() != d.size()) throw InputError(source + ": a permutation must list " + std::to_string(d.size()) + " nodes");
    std::vector<std::uint32_t> sorted = img;
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i) throw InputError(source + ": not a permutation");
    gens.emplace_back(std::move(img));
  }
  return gens;
}

json perm_json(const Permutation& p, const CoxeterDiagram& d) {
  json a = json::array();
  for (auto x : p.images()) a.push_back(d.name(x));
  return a;
}

json iso_json(const DiagramIsometry& k, const CoxeterDiagram& s) {
  json a = json::array();
  for (auto x : k.image) a.push_back(s.name(x));
  return a;
}

// ---------------------------------------------------------------------------
// classify

CoxeterDiagram std_diagram(const std::string& t) { return standard_diagram(SphericalType::parse(t)); }

json pair_report(const CoxeterDiagram& j, const CoxeterDiagram& s, const RunConfig& cfg) {
  const auto ks = isometries(j, s);
  auto name = [&](const DiagramIsometry& k) {
    return "K" + std::to_string(std::lower_bound(ks.begin(), ks.end(), k) - ks.begin() + 1);
  };
  json r;
  r["j"] = classify_spherical(j)->to_string();
  r["s"] = classify_spherical(s)->to_string();
  json isos = json::object();
  for (const auto& k : ks) isos[name(k)] = iso_json(k, s);
  r["isometries"] = isos;
  json adj = json::array(), self = json::array();
  for (const auto& k : ks) {
    bool loops = false;
    for (std::size_t v = 0; v < s.size(); ++v) {
      if (std::find(k.image.begin(), k.image.end(), v) != k.image.end()) continue;
      auto k2 = adjacent_images(s, k, v);
      if (!k2) continue;
      adj.push_back({{"from", name(k)}, {"node", s.name(v)}, {"to", name(*k2)}});
      loops = loops || *k2 == k;
    }
    if (loops) self.push_back(name(k));
  }
  r["adjacency"] = adj;
  r["self_adjacent"] = self;
  json classes = json::array();
  const auto cs = associate_classes(j, s);
  for (const auto& c : cs) {
    json m = json::array();
    for (const auto& k : c.members) m.push_back(name(k));
    classes.push_back(m);
  }
  r["classes"] = classes;
  json refl;
  for (const auto& [label, group] : {std::pair<std::string, PermutationGroup>{"trivial", PermutationGroup::trivial(j.size())},
                                     {"full", automorphisms(j)}}) {
    json per = json::object();
    for (const auto& k : ks) per[name(k)] = is_r_reflective(s, k, group);
    json pc = json::array();
    for (const auto& c : cs) pc.push_back(class_is_r_reflective(s, c, group));
    refl[label] = {{"isometries", per}, {"classes", pc}};
  }
  r["reflective"] = refl;
  try {
    auto oracle = oracle_partition(j, s, cfg.oracle_limit);
    bool same = oracle.size() == cs.size();
    for (std::size_t i = 0; same && i < cs.size(); ++i) same = oracle[i] == cs[i].members;
    r["oracle_agrees"] = same;
  } catch (const ConfigError& e) {
    r["oracle_agrees"] = nullptr;
  }
  return r;
}

const std::vector<std::string> kScanReflective = {"E6", "E7", "E8", "F4", "B2", "B3", "B4", "B5", "B6",
                                                  "D4", "D6", "E6E6", "F4B2", "D4B3", "B2B2", "D4D4"};
const std::vector<std::string> kScanWitness = {"A1", "A2", "D5"};

json classify_example(const std::string& ex, const RunConfig& cfg) {
  json r;
  r["example"] = ex;
  if (ex == "adjacency-a1-a3") {
    r["pairs"] = json::array({pair_report(std_diagram("A1"), std_diagram("A3"), cfg)});
  } else if (ex == "adjacency-d5-d6") {
    r["pairs"] = json::array({pair_report(std_diagram("D5"), std_diagram("D6"), cfg)});
  } else if (ex == "adjacency-a3-d5") {
    r["pairs"] = json::array({pair_report(std_diagram("A3"), std_diagram("D5"), cfg)});
  } else if (ex == "adjacency-a2") {
    json counts = json::object();
    const auto j = std_diagram("A2");
    for (std::string t : {"A2", "A3", "A4", "A5", "A6", "A7", "A8", "D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8"})
      counts[t] = associate_classes(j, std_diagram(t)).size();
    r["class_counts"] = counts;
  } else if (ex == "scan") {
    json rows = json::array();
    for (const auto* list : {&kScanReflective, &kScanWitness})
      for (const auto& t : *list) {
        progress(cfg, "scanning extensions of " + t);
        auto scan = all_larger_extensions_reflective(std_diagram(t));
        json row{{"j", t},
                 {"all_reflective", scan.all_reflective},
                 {"targets_checked", scan.targets_checked},
                 {"isometries_checked", scan.isometries_checked}};
        if (scan.witness)
          row["witness"] = {{"target", scan.witness->target.to_string()},
                            {"isometry", iso_json(scan.witness->isometry, standard_diagram(scan.witness->target))}};
        rows.push_back(row);
      }
    r["scan"] = rows;
  } else {
    throw InputError("unknown classify example " + ex);
  }
  return r;
}

json classify(const RunConfig& cfg) {
  if (!cfg.example.empty()) return classify_example(cfg.example, cfg);
  if (cfg.pi.empty()) throw InputError("classify needs --pi FILE or --example NAME");
  auto d = parse_diagram(read_file(cfg.pi));
  json r;
  r["nodes"] = d.names();
  auto t = classify_spherical(d);
  r["spherical"] = t.has_value();
  r["type"] = t ? json(t->to_string()) : json("NotSpherical");
  r["automorphism_order"] = automorphism_group(d).order;
  if (t) {
    r["opposition"] = perm_json(opposition_involution(d), d);
    if (auto w = weyl_group_order(*t); w <= cfg.oracle_limit) r["coxeter_group_order"] = w;
  }
  return r;
}

// ---------------------------------------------------------------------------
// normalizer

struct Setup {
  std::unique_ptr<Ambient> ambient;
  ParabolicConfig config;
  std::vector<NodeId> j_nodes;
  json description;
};

const std::map<std::string, RunConfig> kNormalizerExamples = [] {
  std::map<std::string, RunConfig> m;
  auto add = [&](const std::string& name, std::string pi, std::string j, std::string g, std::string r,
                 std::string sel = "first") {
    RunConfig c;
    c.pi = std::move(pi);
    c.j = std::move(j);
    c.gamma_j = std::move(g);
    c.r = std::move(r);
    c.selector = std::move(sel);
    m.emplace(name, c);
  };
  add("brink-a3", "builtin:a3", "a", "full", "full");
  add("brink-triangle", "builtin:triangle", "a", "full", "full");
  add("brink-b3", "builtin:b3", "a", "full", "full");
  add("e6-k3", "leech", "E6", "full", "trivial");
  add("d6-k3", "leech", "D6", "full", "trivial");
  add("a6-k3", "leech", "A6", "full", "trivial");
  add("kondo", "leech", "A3A1^6", "full", "full", "largest");
  add("i1n-d6", "leech", "D6", "full", "full");
  return m;
}();

CoxeterDiagram builtin_pi(const std::string& name) {
  if (name == "builtin:a3") return parse_diagram("nodes: a b c\nedge a b 3\nedge b c 3\n");
  if (name == "builtin:triangle") return parse_diagram("nodes: a b c\nedge a b 3\nedge b c 3\nedge a c 3\n");
  if (name == "builtin:b3") return parse_diagram("nodes: a b c\nedge a b 3\nedge b c 4\n");
  throw InputError("unknown builtin diagram " + name);
}

Setup setup(const RunConfig& cfg) {
  Setup s;
  if (cfg.pi.empty() || cfg.j.empty()) throw InputError("normalizer needs --pi and --j, or --example");
  if (cfg.pi == "leech") {
    auto t = SphericalType::parse(cfg.j);
    for (const auto& b : standard_diagram(t).bonds())
      if (b.order != 3) throw InputError("Leech subdiagrams have simply laced bonds only; " + t.to_string() + " does not embed");
    leech::FindOptions fo;
    fo.budget = cfg.budget;
    if (cfg.selector == "largest")
      fo.selector = leech::Selector::LargestStabilizer;
    else if (cfg.selector != "first")
      throw InputError("selector must be first or largest");
    progress(cfg, "looking for a " + t.to_string() + " configuration");
    leech::PointConfiguration pc;
    try {
      pc = leech::find_configuration(t, fo);
    } catch (const leech::BudgetExceeded&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw Refused(e.what());
    }
    leech::SearchOptions so;
    so.budget = cfg.budget;
    so.threads = cfg.threads;
    auto amb = std::make_unique<LeechAmbient>(so);
    for (const auto& p : pc.points) s.j_nodes.push_back(amb->add(p));
    auto jd = pc.diagram();
    s.config = ParabolicConfig::make(jd, group_generators(cfg.gamma_j, jd), group_generators(cfg.r, jd));
    s.description = {{"pi", "leech"}, {"j", t.to_string()}, {"selector", cfg.selector}};
    s.ambient = std::move(amb);
  } else {
    auto pi = cfg.pi.rfind("builtin:", 0) == 0 ? builtin_pi(cfg.pi) : parse_diagram(read_file(cfg.pi));
    std::vector<std::size_t> idx;
    for (const auto& n : split(cfg.j, ',')) {
      auto i = pi.index_of(n);
      if (!i) throw InputError("J node " + n + " is not in Pi");
      if (std::find(idx.begin(), idx.end(), *i) != idx.end()) throw InputError("J node " + n + " repeated");
      idx.push_back(*i);
    }
    if (idx.empty()) throw InputError("J is empty");
    auto jd = pi.induced(idx);
    if (!is_spherical(jd)) throw InputError("J is not spherical");
    s.config = ParabolicConfig::make(jd, group_generators(cfg.gamma_j, jd), group_generators(cfg.r, jd));
    auto gpi = group_generators(cfg.gamma_pi, pi);
    for (auto i : idx) s.j_nodes.push_back(static_cast<NodeId>(i));
    s.description = {{"pi", serialize_diagram(pi)}, {"j", split(cfg.j, ',')}, {"gamma_pi", cfg.gamma_pi}};
    s.ambient = std::make_unique<FiniteAmbient>(pi, PermutationGroup(pi.size(), gpi));
  }
  s.description["gamma_j_order"] = s.config.gamma_j.order();
  s.description["r_order"] = s.config.r.order();
  return s;
}

json node_json(const Ambient& amb, NodeId n) {
  if (const auto* l = dynamic_cast<const LeechAmbient*>(&amb)) {
    json a = json::array();
    for (auto x : l->point(n)) a.push_back(x);
    return a;
  }
  return amb.label(n);
}

json presentation_json(const Presentation& p) {
  json rel = json::array();
  for (const auto& w : p.relators) rel.push_back(word_to_string(p, w));
  return {{"generators", p.generators}, {"relators", rel}, {"base_object", p.base_object}};
}

struct NormalizerOutcome {
  json report;
  CategoryQ4 q;
};

NormalizerOutcome normalizer(const RunConfig& cfg) {
  RunConfig c = cfg;
  if (!cfg.example.empty()) {
    auto it = kNormalizerExamples.find(cfg.example);
    if (it == kNormalizerExamples.end()) throw InputError("unknown normalizer example " + cfg.example);
    const auto& e = it->second;
    c.pi = e.pi;
    c.j = e.j;
    c.gamma_j = e.gamma_j;
    c.r = e.r;
    c.selector = e.selector;
  }
  auto s = setup(c);
  progress(c, "building the component of Q4");
  auto q = build_component(s.config, *s.ambient, s.j_nodes);
  json r;
  r["config"] = s.description;
  if (!cfg.example.empty()) r["example"] = cfg.example;
  json objs = json::array();
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& o = q.objects[i];
    json nodes = json::array();
    for (auto n : o.nodes) nodes.push_back(node_json(*s.ambient, n));
    json rep = json::array();
    for (auto x : o.cls.representative().image) rep.push_back(x);
    objs.push_back({{"id", i}, {"type", o.type.to_string()}, {"nodes", nodes}, {"class_rep", rep},
                    {"class_size", o.cls.members.size()}});
  }
  r["objects"] = objs;
  json counts = json::array();
  for (std::size_t a = 0; a < q.size(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < q.size(); ++b) row.push_back(q.count(a, b));
    counts.push_back(row);
  }
  r["morphism_counts"] = counts;
  r["elements_examined"] = q.elements_examined;
  const auto chain = max_chain_length(q);
  r["chain"] = {{"max_length", chain}, {"bound", s.config.j.size() + 1}, {"ok", chain <= s.config.j.size() + 1}};

  std::optional<Presentation> p;
  try {
    progress(c, "writing the presentation");
    TreeOptions to;
    to.max_relators = c.max_relators;
    to.seed = c.tree_seed;
    p = fundamental_group(q, 0, to);
    r["presentation"] = {{"generators", p->generators.size()}, {"relators", p->relators.size()}};
  } catch (const PresentationTooLarge& e) {
    r["presentation"] = {{"skipped", true}, {"relators", e.relators()}, {"limit", c.max_relators}};
  }
  progress(c, "recognizing the group");
  auto g = recognize(q, p);
  json gj;
  gj["kind"] = kind_name(g.kind);
  gj["report"] = g.report;
  if (g.kind == GroupDescription::Kind::Finite) gj["order"] = g.order;
  if (g.kind == GroupDescription::Kind::Free) gj["rank"] = g.free_rank;
  if (g.kind == GroupDescription::Kind::Amalgam) {
    const auto& a = g.amalgam;
    gj["amalgam"] = {{"a_order", a.a_order}, {"b_order", a.b_order}, {"intersection_order", a.ab_order},
                     {"c_order", a.c_order}, {"copies", a.copies}, {"quotient_order", a.quotient_order}};
  }
  if (g.abelian) gj["abelianization"] = {{"torsion", g.abelian->torsion}, {"free_rank", g.abelian->free_rank}};
  if (g.presentation) r["presentation"]["simplified"] = presentation_json(*g.presentation);
  r["group"] = gj;
  return {r, std::move(q)};
}

std::string dot(const json& r) {
  std::ostringstream os;
  os << "digraph Q4 {\n";
  for (const auto& o : r["objects"])
    os << "  o" << o["id"].get<std::size_t>() << " [label=\"" << o["type"].get<std::string>() << "\"];\n";
  const auto& m = r["morphism_counts"];
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      if (m[a][b].get<std::uint64_t>())
        os << "  o" << a << " -> o" << b << " [label=\"" << m[a][b].get<std::uint64_t>() << "\"];\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// brink, leech-example, shells

json brink(const RunConfig& cfg) {
  CoxeterDiagram pi;
  std::string node = cfg.node;
  if (!cfg.example.empty()) {
    auto it = kNormalizerExamples.find(cfg.example);
    if (it == kNormalizerExamples.end() || it->second.pi.rfind("builtin:", 0) != 0)
      throw InputError("unknown brink example " + cfg.example);
    pi = builtin_pi(it->second.pi);
    node = it->second.j;
  } else {
    if (cfg.pi.empty() || cfg.node.empty()) throw InputError("brink needs --pi FILE and --node NAME");
    pi = parse_diagram(read_file(cfg.pi));
  }
  auto i = pi.index_of(node);
  if (!i) throw InputError("node " + node + " is not in Pi");
  auto g = brink_graph(pi, *i);
  json r;
  json vs = json::array(), es = json::array();
  for (auto v : g.vertices) vs.push_back(pi.name(v));
  for (auto [a, b] : g.edges) es.push_back({pi.name(a), pi.name(b)});
  r["vertices"] = vs;
  r["edges"] = es;
  r["free_rank"] = g.free_rank;
  // Cross-check through the category with J = A1 at the node.
  FiniteAmbient amb(pi, PermutationGroup::trivial(pi.size()));
  auto config = ParabolicConfig::with_groups(pi.induced(std::vector<std::size_t>{*i}), true, true);
  auto q = build_component(config, amb, {static_cast<NodeId>(*i)});
  auto desc = recognize(q, fundamental_group(q));
  r["category"] = {{"objects", q.size()}, {"kind", kind_name(desc.kind)}};
  if (desc.kind == GroupDescription::Kind::Free) r["category"]["free_rank"] = desc.free_rank;
  return r;
}

json leech_example(const RunConfig& cfg) {
  leech::SearchOptions so;
  so.budget = cfg.budget;
  so.threads = cfg.threads;
  leech::FindOptions fo;
  fo.budget = cfg.budget;
  json r;
  r["example"] = cfg.example;
  auto points = [](const leech::PointConfiguration& pc) {
    json a = json::array();
    for (const auto& p : pc.points) a.push_back(p);
    return a;
  };
  if (cfg.example == "e6" || cfg.example == "d6" || cfg.example == "a6") {
    std::string t = cfg.example == "e6" ? "E6" : cfg.example == "d6" ? "D6" : "A6";
    auto pc = leech::find_configuration(SphericalType::parse(t), fo);
    r["points"] = points(pc);
    std::map<std::string, std::uint64_t> hist;
    for (const auto& e : leech::extension_nodes(pc)) ++hist[e.type.to_string()];
    r["extension_types"] = hist;
    auto st = leech::stabilizer(pc, so);
    r["stabilizer"] = {{"pointwise", st.pointwise}, {"setwise", st.setwise}};
  } else if (cfg.example == "kondo") {
    const auto t = SphericalType::parse("A3A1^6");
    auto first = leech::find_configuration(t, fo);
    fo.selector = leech::Selector::LargestStabilizer;
    auto best = leech::find_configuration(t, fo);
    auto s1 = leech::stabilizer(first, so), s2 = leech::stabilizer(best, so);
    r["first_found"] = {{"points", points(first)}, {"setwise", s1.setwise}, {"pointwise", s1.pointwise}};
    r["largest"] = {{"points", points(best)}, {"setwise", s2.setwise}, {"pointwise", s2.pointwise}};
    r["equivalent"] = leech::equivalent_configurations(first, best, so);
  } else {
    throw InputError("unknown leech example " + cfg.example);
  }
  return r;
}

json shells(const RunConfig&) {
  json r;
  r["octads"] = leech::GolayCode::instance().words_of_weight(8).size();
  r["codewords"] = leech::GolayCode::instance().codewords().size();
  r["shell4"] = leech::shell(4).size();
  r["shell6"] = leech::shell(6).size();
  return r;
}

void flatten(const json& j, const std::string& path, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array()) && j.size() <= 64) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
  } else if (j.is_array() && j.size() > 64) {
    os << path << ": " << j.size() << " entries\n";
  } else {
    os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::string normalizer_text(const json& r) {
  std::ostringstream os;
  os << "objects: " << r["objects"].size() << "\n";
  for (const auto& o : r["objects"]) os << "  " << o["id"] << ": " << o["type"].get<std::string>() << "\n";
  os << "morphism counts:\n";
  for (const auto& row : r["morphism_counts"]) {
    os << " ";
    for (const auto& x : row) os << " " << x;
    os << "\n";
  }
  os << "max chain: " << r["chain"]["max_length"] << " (bound " << r["chain"]["bound"] << ")\n";
  const auto& p = r["presentation"];
  if (p.contains("skipped"))
    os << "presentation: skipped, " << p["relators"] << " relators over the limit\n";
  else
    os << "presentation: " << p["generators"] << " generators, " << p["relators"] << " relators; simplified "
       << p["simplified"]["generators"].size() << ", " << p["simplified"]["relators"].size() << "\n";
  os << r["group"]["report"].get<std::string>() << "\n";
  return os.str();
}

}  // namespace

std::vector<std::string> example_names(const std::string& command) {
  if (command == "classify") return {"adjacency-a1-a3", "adjacency-d5-d6", "adjacency-a3-d5", "adjacency-a2", "scan"};
  if (command == "normalizer") {
    std::vector<std::string> out;
    for (const auto& [k, v] : kNormalizerExamples) out.push_back(k);
    return out;
  }
  if (command == "brink") return {"brink-a3", "brink-triangle", "brink-b3"};
  if (command == "leech-example") return {"a6", "d6", "e6", "kondo"};
  return {};
}

RunResult run(const RunConfig& cfg) {
  RunResult res;
  try {
    if (cfg.threads < 1) throw InputError("--threads must be positive");
    if (cfg.format != "text" && cfg.format != "json" && cfg.format != "dot") throw InputError("unknown format " + cfg.format);
    if (cfg.format == "dot" && cfg.command != "normalizer") throw InputError("dot output is only available for normalizer");
    if (cfg.cache) leech::set_cache_dir(std::filesystem::path(*cfg.cache));
    leech::set_threads(cfg.threads);
    json r;
    if (cfg.command == "classify")
      r = classify(cfg);
    else if (cfg.command == "normalizer")
      r = normalizer(cfg).report;
    else if (cfg.command == "brink")
      r = brink(cfg);
    else if (cfg.command == "leech-example")
      r = leech_example(cfg);
    else if (cfg.command == "shells")
      r = shells(cfg);
    else
      throw InputError("unknown command " + cfg.command);
    r["command"] = cfg.command;
    if (cfg.format == "json")
      res.output = r.dump(2) + "\n";
    else if (cfg.format == "dot")
      res.output = dot(r);
    else if (cfg.command == "normalizer")
      res.output = normalizer_text(r);
    else {
      std::ostringstream os;
      flatten(r, "", os);
      res.output = os.str();
    }
  } catch (const leech::BudgetExceeded& e) {
    res.status = 2;
    res.error = e.what();
  } catch (const BuildError& e) {
    res.status = 2;
    res.error = e.what();
  } catch (const Refused& e) {
    res.status = 2;
    res.error = e.what();
  } catch (const std::exception& e) {
    res.status = 1;
    res.error = e.what();
  }
  return res;
}

}  // namespace coxnorm::cli
