#include <algorithm>
#include <cmath>
#include <set>

#include "pract/environments.hpp"
#include "pract/text.hpp"

namespace pract {

namespace {

constexpr const char* kSuiteFormat = "pract-suite/1";

// ---- schema helpers -------------------------------------------------------------

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& detail) const {
    throw SuiteError(source_, 0, path, detail);
  }

  const json& at(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(join_path(path, key), "missing field");
    return *it;
  }

  std::string str(const json& obj, const std::string& key, const std::string& path) const {
    const json& v = at(obj, key, path);
    if (!v.is_string()) fail(join_path(path, key), "expected a string");
    return v.get<std::string>();
  }

  std::string opt_str(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.contains(key)) return {};
    return str(obj, key, path);
  }

  const json& arr(const json& obj, const std::string& key, const std::string& path) const {
    const json& v = at(obj, key, path);
    if (!v.is_array()) fail(join_path(path, key), "expected an array");
    return v;
  }

  const json& obj(const json& parent, const std::string& key, const std::string& path) const {
    const json& v = at(parent, key, path);
    if (!v.is_object()) fail(join_path(path, key), "expected an object");
    return v;
  }

  double num(const json& obj, const std::string& key, const std::string& path) const {
    const json& v = at(obj, key, path);
    if (!v.is_number()) fail(join_path(path, key), "expected a number");
    return v.get<double>();
  }

  std::map<std::string, std::string> str_map(const json& parent, const std::string& key,
                                             const std::string& path) const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : obj(parent, key, path).items()) {
      if (!v.is_string()) fail(join_path(path, key) + "." + k, "expected a string");
      out[k] = v.get<std::string>();
    }
    return out;
  }

  static std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
  }

 private:
  std::string source_;
};

ParamType key_type(const Reader& r, const std::string& s, const std::string& path) {
  try {
    return param_type_from(s);
  } catch (const std::invalid_argument& e) {
    r.fail(path, e.what());
  }
}

ToolWorld read_world(const Reader& r, const json& doc, const std::string& domain) {
  ToolWorld w;
  w.domain = domain;
  const json& tools = r.arr(doc, "tools", "");
  for (std::size_t i = 0; i < tools.size(); ++i) {
    const std::string p = Reader::index("tools", i);
    ToolDef t;
    t.name = r.str(tools[i], "name", p);
    t.description = r.str(tools[i], "description", p);
    t.table = r.str(tools[i], "table", p);
    const json& keys = r.arr(tools[i], "keys", p);
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const std::string kp = Reader::index(p + ".keys", k);
      ToolKey key;
      key.param = r.str(keys[k], "param", kp);
      key.field = r.str(keys[k], "field", kp);
      key.type = key_type(r, keys[k].value("type", std::string("string")), kp + ".type");
      if (keys[k].contains("values")) key.values = keys[k]["values"].get<std::vector<std::string>>();
      t.keys.push_back(std::move(key));
    }
    for (const auto& o : r.arr(tools[i], "outputs", p)) t.outputs.push_back(o.get<std::string>());
    if (t.outputs.empty()) r.fail(p + ".outputs", "at least one output field required");
    w.tools.push_back(std::move(t));
  }

  const json& kb = r.obj(doc, "kb", "");
  for (const auto& [name, rows] : kb.items()) {
    if (!rows.is_array()) r.fail("kb." + name, "expected an array of records");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_object()) r.fail(Reader::index("kb." + name, i), "expected an object");
    }
    w.kb.tables[name] = rows.get<std::vector<json>>();
  }
  if (doc.contains("references")) {
    const json& refs = r.arr(doc, "references", "");
    for (std::size_t i = 0; i < refs.size(); ++i) {
      const std::string p = Reader::index("references", i);
      w.kb.references.push_back(ForeignKey{r.str(refs[i], "table", p), r.str(refs[i], "field", p),
                                           r.str(refs[i], "target_table", p),
                                           r.str(refs[i], "target_field", p)});
    }
  }
  for (const auto& t : w.tools) {
    if (!w.kb.tables.count(t.table)) r.fail("tools", "tool " + t.name + " reads unknown table " + t.table);
  }
  try {
    check_action_space(w.action_space());
    w.kb.check_integrity();
  } catch (const std::invalid_argument& e) {
    r.fail("kb", e.what());
  }
  return w;
}

std::vector<ToolTask> read_tool_tasks(const Reader& r, const json& doc, const ToolWorld& world) {
  const ActionSpace space = world.action_space();
  std::vector<ToolTask> tasks;
  const json& arr = r.arr(doc, "tasks", "");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = Reader::index("tasks", i);
    ToolTask t;
    t.id = r.str(arr[i], "id", p);
    t.query = r.str(arr[i], "query", p);
    t.kb_ref = r.opt_str(arr[i], "kb_ref", p);
    const json& gt = r.arr(arr[i], "ground_truth", p);
    if (gt.empty()) r.fail(p + ".ground_truth", "ground truth must be non-empty");
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const std::string gp = Reader::index(p + ".ground_truth", g);
      ActionCall call;
      call.action = r.str(gt[g], "action", gp);
      call.args = r.str_map(gt[g], "args", gp);
      const ToolDef* tool = world.find_tool(call.action);
      if (!tool) r.fail(gp + ".action", "not a tool of this environment: " + call.action);
      call.raw_text = call.render(space);
      try {
        if (parse_action(call.raw_text, space).args != call.args) r.fail(gp + ".args", "argument names do not match");
      } catch (const ParseError& e) {
        r.fail(gp, e.what());
      }
      t.ground_truth.push_back(std::move(call));
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

Catalog read_catalog(const Reader& r, const json& doc) {
  Catalog c;
  const json& arr = r.arr(doc, "catalog", "");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = Reader::index("catalog", i);
    ShopItem it;
    it.id = r.str(arr[i], "id", p);
    if (!ids.insert(it.id).second) r.fail(p + ".id", "duplicate item id " + it.id);
    it.title = r.str(arr[i], "title", p);
    it.attributes = r.str_map(arr[i], "attributes", p);
    for (const auto& [name, values] : r.obj(arr[i], "options", p).items()) {
      if (!values.is_array() || values.empty())
        r.fail(p + ".options." + name, "option values must be a non-empty array");
      it.options[name] = values.get<std::vector<std::string>>();
    }
    it.price = r.num(arr[i], "price", p);
    if (it.price < 0) r.fail(p + ".price", "price must be non-negative");
    c.items.push_back(std::move(it));
  }
  std::sort(c.items.begin(), c.items.end(), [](const ShopItem& a, const ShopItem& b) { return a.id < b.id; });
  return c;
}

std::vector<ShopTask> read_shop_tasks(const Reader& r, const json& doc) {
  std::vector<ShopTask> tasks;
  const json& arr = r.arr(doc, "tasks", "");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = Reader::index("tasks", i);
    ShopTask t;
    t.id = r.str(arr[i], "id", p);
    t.query = r.str(arr[i], "query", p);
    t.target_item = r.opt_str(arr[i], "target_item", p);
    const json& goal = r.obj(arr[i], "goal", p);
    t.goal.attributes = r.str_map(goal, "attributes", p + ".goal");
    if (goal.contains("price_max") && !goal["price_max"].is_null())
      t.goal.price_max = r.num(goal, "price_max", p + ".goal");
    t.goal.query_hint = r.opt_str(goal, "query_hint", p + ".goal");
    if (t.goal.required_count() == 0) r.fail(p + ".goal", "goal needs at least one required attribute");
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

SuiteError::SuiteError(const std::string& source, std::size_t line, const std::string& field,
                       const std::string& detail)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) +
                         (field.empty() ? std::string() : " [" + field + "]") + ": " + detail),
      line_(line), field_(field) {}

// ---- TaskSuite ------------------------------------------------------------------

std::size_t TaskSuite::size() const { return kind == EnvKind::tool ? tool_tasks.size() : shop_tasks.size(); }

const std::string& TaskSuite::query(std::size_t i) const {
  return kind == EnvKind::tool ? tool_tasks.at(i).query : shop_tasks.at(i).query;
}

const std::string& TaskSuite::task_id(std::size_t i) const {
  return kind == EnvKind::tool ? tool_tasks.at(i).id : shop_tasks.at(i).id;
}

ActionSpace TaskSuite::action_space() const {
  return kind == EnvKind::tool ? world->action_space() : shop_action_space();
}

std::unique_ptr<Environment> TaskSuite::make_env(std::size_t i) const {
  if (kind == EnvKind::tool) return std::make_unique<ToolEnv>(world, tool_tasks.at(i));
  return std::make_unique<ShopEnv>(catalog, shop_tasks.at(i));
}

TaskSuite parse_task_suite(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SuiteError(source, line_of(text, e.byte == 0 ? 0 : e.byte - 1), "", e.what());
  }
  Reader r(source);
  try {
    if (r.str(doc, "format", "") != kSuiteFormat) r.fail("format", std::string("expected ") + kSuiteFormat);
    TaskSuite s;
    s.env_id = r.str(doc, "env", "");
    const std::string kind = r.str(doc, "kind", "");
    s.seed = doc.value("seed", std::uint64_t{0});
    if (kind == "tool") {
      s.kind = EnvKind::tool;
      auto world = std::make_shared<ToolWorld>(read_world(r, doc, s.env_id));
      s.tool_tasks = read_tool_tasks(r, doc, *world);
      s.world = std::move(world);
    } else if (kind == "shop") {
      s.kind = EnvKind::shop;
      s.catalog = std::make_shared<Catalog>(read_catalog(r, doc));
      s.shop_tasks = read_shop_tasks(r, doc);
    } else {
      r.fail("kind", "expected \"tool\" or \"shop\"");
    }
    if (s.size() == 0) r.fail("tasks", "suite has no tasks");
    return s;
  } catch (const json::exception& e) {
    throw SuiteError(source, 0, "", e.what());
  }
}

TaskSuite load_task_suite(const std::string& path) { return parse_task_suite(read_file(path), path); }

json suite_to_json(const TaskSuite& s) {
  json doc{{"format", kSuiteFormat},
           {"env", s.env_id},
           {"kind", s.kind == EnvKind::tool ? "tool" : "shop"},
           {"seed", s.seed}};
  if (s.kind == EnvKind::tool) {
    json tools = json::array();
    for (const auto& t : s.world->tools) {
      json keys = json::array();
      for (const auto& k : t.keys) {
        json kj{{"param", k.param}, {"field", k.field}, {"type", to_string(k.type)}};
        if (k.type == ParamType::enumeration) kj["values"] = k.values;
        keys.push_back(std::move(kj));
      }
      tools.push_back(json{{"name", t.name},
                           {"description", t.description},
                           {"table", t.table},
                           {"keys", keys},
                           {"outputs", t.outputs}});
    }
    doc["tools"] = tools;
    json kb = json::object();
    for (const auto& [name, rows] : s.world->kb.tables) kb[name] = rows;
    doc["kb"] = kb;
    json refs = json::array();
    for (const auto& f : s.world->kb.references) {
      refs.push_back(json{{"table", f.table},
                          {"field", f.field},
                          {"target_table", f.target_table},
                          {"target_field", f.target_field}});
    }
    doc["references"] = refs;
    json tasks = json::array();
    for (const auto& t : s.tool_tasks) {
      json gt = json::array();
      for (const auto& c : t.ground_truth) gt.push_back(json{{"action", c.action}, {"args", c.args}});
      tasks.push_back(json{{"id", t.id}, {"query", t.query}, {"ground_truth", gt}, {"kb_ref", t.kb_ref}});
    }
    doc["tasks"] = tasks;
  } else {
    json items = json::array();
    for (const auto& it : s.catalog->items) {
      items.push_back(json{{"id", it.id},
                           {"title", it.title},
                           {"attributes", it.attributes},
                           {"options", it.options},
                           {"price", it.price}});
    }
    doc["catalog"] = items;
    json tasks = json::array();
    for (const auto& t : s.shop_tasks) {
      json goal{{"attributes", t.goal.attributes},
                {"price_max", t.goal.price_max ? json(*t.goal.price_max) : json(nullptr)},
                {"query_hint", t.goal.query_hint}};
      tasks.push_back(json{{"id", t.id}, {"query", t.query}, {"goal", goal}, {"target_item", t.target_item}});
    }
    doc["tasks"] = tasks;
  }
  return doc;
}

std::string suite_text(const TaskSuite& suite) { return suite_to_json(suite).dump(1) + "\n"; }

// ---- generators -------------------------------------------------------------------

namespace {

const std::vector<std::string> kLastNames = {
    "Smith", "Chen", "Garcia", "Kumar", "Okafor", "Novak", "Tanaka", "Rossi", "Larsen", "Haddad",
    "Petrov", "Silva", "Kim", "Nguyen", "Cohen", "Dubois", "Schmidt", "Ivanova", "Moreau", "Patel",
    "Yamada", "Costa", "Fischer", "Lindqvist", "Brennan", "Alvarez", "Sato", "Kowalski", "Ferreira", "Olsen"};
const std::vector<std::string> kFirstNames = {
    "Ada", "Bruno", "Carla", "Dev", "Elena", "Farid", "Greta", "Hugo", "Ines", "Jonas",
    "Keiko", "Luca", "Maya", "Nikolai", "Olga", "Pablo", "Quinn", "Rosa", "Samir", "Tessa"};

std::string pad(std::size_t n, int width) {
  std::string s = std::to_string(n);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

json call_json(const std::string& action, std::map<std::string, std::string> args) {
  return json{{"action", action}, {"args", std::move(args)}};
}

// Shared task assembly: keep drawing templated tasks until `n` distinct queries exist.
template <typename Make>
json make_tasks(Rng& rng, std::size_t n, const std::string& prefix, Make make) {
  json tasks = json::array();
  std::set<std::string> seen;
  std::size_t attempts = 0;
  while (tasks.size() < n) {
    if (++attempts > n * 200) throw std::runtime_error("generator could not produce enough distinct tasks");
    auto [query, gt] = make(rng);
    if (!seen.insert(query).second) continue;
    tasks.push_back(json{{"id", prefix + "-" + pad(tasks.size() + 1, 3)},
                         {"query", query},
                         {"ground_truth", gt},
                         {"kb_ref", prefix}});
  }
  return tasks;
}

json key(const std::string& param, const std::string& field, ParamType type = ParamType::string,
         std::vector<std::string> values = {}) {
  json k{{"param", param}, {"field", field}, {"type", to_string(type)}};
  if (type == ParamType::enumeration) k["values"] = std::move(values);
  return k;
}

json tool(const std::string& name, const std::string& description, const std::string& table,
          json keys, std::vector<std::string> outputs) {
  return json{{"name", name}, {"description", description}, {"table", table}, {"keys", std::move(keys)},
              {"outputs", std::move(outputs)}};
}

json base_doc(const std::string& env, const std::string& kind, std::uint64_t seed) {
  return json{{"format", kSuiteFormat}, {"env", env}, {"kind", kind}, {"seed", seed}};
}

json generate_academia(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> affiliations = {
      "University of Oslo", "ETH Zurich", "Tsinghua University", "MIT", "University of Toronto",
      "KAIST", "Sorbonne University", "University of Cape Town", "IIT Delhi", "University of Melbourne"};
  const std::vector<std::string> venues = {"ACL", "EMNLP", "NeurIPS", "ICML", "ICLR", "KDD", "SIGIR", "AAAI"};
  const std::vector<std::string> adjectives = {"Robust", "Efficient", "Sparse", "Contrastive", "Hierarchical",
                                               "Adaptive", "Scalable", "Interpretable", "Federated", "Causal"};
  const std::vector<std::string> methods = {"Graph Networks", "Transformers", "Retrieval", "Reinforcement Learning",
                                            "Prompt Tuning", "Distillation", "Diffusion Models", "Tree Search"};
  const std::vector<std::string> topics = {"Question Answering", "Code Generation", "Recommendation",
                                           "Machine Translation", "Protein Folding", "Web Navigation",
                                           "Dialogue Systems", "Time Series Forecasting"};

  std::vector<std::string> authors;
  std::set<std::string> used;
  while (authors.size() < 30) {
    std::string name = std::string(1, static_cast<char>('A' + rng.below(26))) + ". " + rng.pick(kLastNames);
    if (used.insert(name).second) authors.push_back(name);
  }
  json author_rows = json::array();
  for (const auto& a : authors) {
    author_rows.push_back(json{{"name", a}, {"affiliation", rng.pick(affiliations)}});
  }

  json papers = json::array();
  std::set<std::string> titles;
  while (papers.size() < 60) {
    std::string title = rng.pick(adjectives) + " " + rng.pick(methods) + " for " + rng.pick(topics);
    if (!titles.insert(title).second) continue;
    std::vector<std::string> pa;
    const auto count = 1 + rng.below(3);
    while (pa.size() < count) {
      const auto& a = rng.pick(authors);
      if (std::find(pa.begin(), pa.end(), a) == pa.end()) pa.push_back(a);
    }
    papers.push_back(json{{"title", title},
                          {"authors", pa},
                          {"venue", rng.pick(venues)},
                          {"year", 2016 + static_cast<int>(rng.below(8))},
                          {"citations", static_cast<int>(rng.below(900))}});
  }

  json doc = base_doc("academia", "tool", seed);
  doc["kb"] = json{{"papers", papers}, {"authors", author_rows}};
  doc["references"] = json::array(
      {json{{"table", "papers"}, {"field", "authors"}, {"target_table", "authors"}, {"target_field", "name"}}});
  doc["tools"] = json::array({
      tool("get_author_papers", "List the titles of all papers written by an author.", "papers",
           json::array({key("author", "authors")}), {"title"}),
      tool("get_paper_authors", "List the authors of a paper given its exact title.", "papers",
           json::array({key("title", "title")}), {"authors"}),
      tool("get_paper_venue", "Return the venue where a paper was published.", "papers",
           json::array({key("title", "title")}), {"venue"}),
      tool("get_paper_year", "Return the publication year of a paper.", "papers",
           json::array({key("title", "title")}), {"year"}),
      tool("get_paper_citations", "Return the citation count of a paper.", "papers",
           json::array({key("title", "title")}), {"citations"}),
      tool("get_author_affiliation", "Return the institution an author is affiliated with.", "authors",
           json::array({key("author", "name")}), {"affiliation"}),
      tool("get_venue_papers", "List the papers published at a venue in a given year.", "papers",
           json::array({key("venue", "venue", ParamType::enumeration, venues), key("year", "year", ParamType::integer)}),
           {"title"}),
  });

  doc["tasks"] = make_tasks(rng, kToolSuiteSize, "academia", [&](Rng& g) {
    const json& paper = papers[g.below(papers.size())];
    const std::string title = paper["title"];
    const auto pa = paper["authors"].get<std::vector<std::string>>();
    json gt = json::array();
    std::string q;
    switch (g.below(6)) {
      case 0:
        q = "Which venue published the paper '" + title + "'?";
        gt.push_back(call_json("get_paper_venue", {{"title", title}}));
        break;
      case 1:
        q = "Who wrote '" + title + "' and where do its authors work?";
        gt.push_back(call_json("get_paper_authors", {{"title", title}}));
        for (const auto& a : pa) gt.push_back(call_json("get_author_affiliation", {{"author", a}}));
        break;
      case 2:
        q = "How many citations does '" + title + "' have, and in which year was it published?";
        gt.push_back(call_json("get_paper_citations", {{"title", title}}));
        gt.push_back(call_json("get_paper_year", {{"title", title}}));
        break;
      case 3: {
        const std::string a = pa[g.below(pa.size())];
        q = "List the papers written by " + a + " and the venue of each.";
        gt.push_back(call_json("get_author_papers", {{"author", a}}));
        for (const auto& p : papers) {
          auto ps = p["authors"].get<std::vector<std::string>>();
          if (std::find(ps.begin(), ps.end(), a) != ps.end())
            gt.push_back(call_json("get_paper_venue", {{"title", p["title"].get<std::string>()}}));
        }
        break;
      }
      case 4: {
        const std::string v = paper["venue"];
        const std::string y = std::to_string(paper["year"].get<int>());
        q = "Which papers appeared at " + v + " in " + y + "?";
        gt.push_back(call_json("get_venue_papers", {{"venue", v}, {"year", y}}));
        break;
      }
      default: {
        const std::string a = pa[g.below(pa.size())];
        q = "What is the affiliation of " + a + ", and how many citations does '" + title + "' have?";
        gt.push_back(call_json("get_author_affiliation", {{"author", a}}));
        gt.push_back(call_json("get_paper_citations", {{"title", title}}));
        break;
      }
    }
    return std::pair{q, gt};
  });
  return doc;
}

json generate_movie(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> nationalities = {"American", "French", "Korean", "Nigerian", "Brazilian",
                                                  "Indian", "Japanese", "Italian", "Mexican", "Swedish"};
  const std::vector<std::string> genres = {"drama", "comedy", "thriller", "science fiction", "animation", "documentary"};
  const std::vector<std::string> adjectives = {"Silent", "Last", "Crimson", "Hidden", "Broken", "Golden",
                                               "Distant", "Electric", "Frozen", "Midnight"};
  const std::vector<std::string> nouns = {"Harbor", "Garden", "Signal", "Orchard", "Frontier", "Lantern",
                                          "Archive", "Circus", "Voyage", "Mirror"};

  std::vector<std::string> people;
  std::set<std::string> used;
  while (people.size() < 40) {
    std::string name = rng.pick(kFirstNames) + " " + rng.pick(kLastNames);
    if (used.insert(name).second) people.push_back(name);
  }
  json person_rows = json::array();
  for (const auto& p : people) {
    person_rows.push_back(json{{"name", p},
                               {"birth_year", 1940 + static_cast<int>(rng.below(60))},
                               {"nationality", rng.pick(nationalities)}});
  }
  std::vector<std::string> directors(people.begin(), people.begin() + 10);

  json movies = json::array();
  std::set<std::string> titles;
  while (movies.size() < 40) {
    std::string title = "The " + rng.pick(adjectives) + " " + rng.pick(nouns);
    if (!titles.insert(title).second) continue;
    std::vector<std::string> cast;
    while (cast.size() < 3) {
      const auto& p = people[10 + rng.below(people.size() - 10)];
      if (std::find(cast.begin(), cast.end(), p) == cast.end()) cast.push_back(p);
    }
    movies.push_back(json{{"title", title},
                          {"year", 1975 + static_cast<int>(rng.below(49))},
                          {"director", rng.pick(directors)},
                          {"cast", cast},
                          {"genre", rng.pick(genres)},
                          {"rating", static_cast<double>(40 + rng.below(56)) / 10.0}});
  }

  json doc = base_doc("movie", "tool", seed);
  doc["kb"] = json{{"movies", movies}, {"people", person_rows}};
  doc["references"] = json::array({
      json{{"table", "movies"}, {"field", "director"}, {"target_table", "people"}, {"target_field", "name"}},
      json{{"table", "movies"}, {"field", "cast"}, {"target_table", "people"}, {"target_field", "name"}},
  });
  doc["tools"] = json::array({
      tool("get_movie_cast", "List the main cast of a movie given its exact title.", "movies",
           json::array({key("title", "title")}), {"cast"}),
      tool("get_movie_director", "Return the director of a movie.", "movies", json::array({key("title", "title")}),
           {"director"}),
      tool("get_movie_rating", "Return the audience rating (0-10) of a movie.", "movies",
           json::array({key("title", "title")}), {"rating"}),
      tool("get_movie_year", "Return the release year of a movie.", "movies", json::array({key("title", "title")}),
           {"year"}),
      tool("get_person_movies", "List the movies a person acted in.", "movies", json::array({key("name", "cast")}),
           {"title"}),
      tool("get_director_movies", "List the movies directed by a person.", "movies",
           json::array({key("name", "director")}), {"title"}),
      tool("get_person_birth_year", "Return the birth year of a person.", "people",
           json::array({key("name", "name")}), {"birth_year"}),
      tool("get_person_nationality", "Return the nationality of a person.", "people",
           json::array({key("name", "name")}), {"nationality"}),
      tool("get_genre_movies", "List all movies of a genre.", "movies",
           json::array({key("genre", "genre", ParamType::enumeration, genres)}), {"title"}),
  });

  doc["tasks"] = make_tasks(rng, kToolSuiteSize, "movie", [&](Rng& g) {
    const json& m = movies[g.below(movies.size())];
    const std::string title = m["title"];
    const auto cast = m["cast"].get<std::vector<std::string>>();
    json gt = json::array();
    std::string q;
    switch (g.below(6)) {
      case 0:
        q = "Who directed '" + title + "' and in what year was the director born?";
        gt.push_back(call_json("get_movie_director", {{"title", title}}));
        gt.push_back(call_json("get_person_birth_year", {{"name", m["director"].get<std::string>()}}));
        break;
      case 1:
        q = "What rating does '" + title + "' have, and when was it released?";
        gt.push_back(call_json("get_movie_rating", {{"title", title}}));
        gt.push_back(call_json("get_movie_year", {{"title", title}}));
        break;
      case 2: {
        const std::string a = cast[g.below(cast.size())];
        q = "Which movies has " + a + " acted in?";
        gt.push_back(call_json("get_person_movies", {{"name", a}}));
        break;
      }
      case 3:
        q = "Who stars in '" + title + "', and what is the nationality of its first-billed actor?";
        gt.push_back(call_json("get_movie_cast", {{"title", title}}));
        gt.push_back(call_json("get_person_nationality", {{"name", cast[0]}}));
        break;
      case 4:
        q = "List the " + m["genre"].get<std::string>() + " movies and give the rating of '" + title + "'.";
        gt.push_back(call_json("get_genre_movies", {{"genre", m["genre"].get<std::string>()}}));
        gt.push_back(call_json("get_movie_rating", {{"title", title}}));
        break;
      default:
        q = "Which films did " + m["director"].get<std::string>() + " direct, and in what year was '" + title +
            "' released?";
        gt.push_back(call_json("get_director_movies", {{"name", m["director"].get<std::string>()}}));
        gt.push_back(call_json("get_movie_year", {{"title", title}}));
        break;
    }
    return std::pair{q, gt};
  });
  return doc;
}

json generate_weather(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::pair<std::string, int>> cities = {{"Oslo", 3},    {"Lisbon", 17}, {"Denver", 12},
                                                           {"Nairobi", 25}, {"Osaka", 14},  {"Lima", 24},
                                                           {"Toronto", 4},  {"Perth", 27}};
  json stations = json::array();
  json daily = json::array();
  for (std::size_t c = 0; c < cities.size(); ++c) {
    const auto& [city, base] = cities[c];
    stations.push_back(json{{"city", city},
                            {"station_id", "WS-" + pad(101 + c, 3)},
                            {"elevation_m", static_cast<int>(rng.below(1700))}});
    for (int d = 1; d <= 14; ++d) {
      const int high = base + static_cast<int>(rng.below(9)) - 4;
      const int low = high - 3 - static_cast<int>(rng.below(8));
      const bool wet = rng.below(3) == 0;
      const double precip = wet ? static_cast<double>(1 + rng.below(250)) / 10.0 : 0.0;
      std::string condition = wet ? (high <= 1 ? "snow" : "rain")
                                  : std::vector<std::string>{"sunny", "cloudy", "fog", "windy"}[rng.below(4)];
      daily.push_back(json{{"city", city},
                           {"date", "2024-03-" + pad(static_cast<std::size_t>(d), 2)},
                           {"high_c", high},
                           {"low_c", low},
                           {"precip_mm", precip},
                           {"condition", condition}});
    }
  }

  json doc = base_doc("weather", "tool", seed);
  doc["kb"] = json{{"stations", stations}, {"daily", daily}};
  doc["references"] = json::array(
      {json{{"table", "daily"}, {"field", "city"}, {"target_table", "stations"}, {"target_field", "city"}}});
  const json city_date = json::array({key("city", "city"), key("date", "date")});
  doc["tools"] = json::array({
      tool("get_station", "Return the weather station id and elevation for a city.", "stations",
           json::array({key("city", "city")}), {"station_id", "elevation_m"}),
      tool("get_daily_high", "Return the daily high temperature (Celsius) for a city on a date (YYYY-MM-DD).",
           "daily", city_date, {"high_c"}),
      tool("get_daily_low", "Return the daily low temperature (Celsius) for a city on a date (YYYY-MM-DD).", "daily",
           city_date, {"low_c"}),
      tool("get_precipitation", "Return the precipitation in millimetres for a city on a date (YYYY-MM-DD).",
           "daily", city_date, {"precip_mm"}),
      tool("get_condition", "Return the sky condition for a city on a date (YYYY-MM-DD).", "daily", city_date,
           {"condition"}),
  });

  doc["tasks"] = make_tasks(rng, kToolSuiteSize, "weather", [&](Rng& g) {
    const std::string city = cities[g.below(cities.size())].first;
    const std::string date = "2024-03-" + pad(1 + g.below(14), 2);
    const std::map<std::string, std::string> cd{{"city", city}, {"date", date}};
    json gt = json::array();
    std::string q;
    switch (g.below(6)) {
      case 0:
        q = "What was the high temperature in " + city + " on " + date + "?";
        gt.push_back(call_json("get_daily_high", cd));
        break;
      case 1:
        q = "What were the high and low temperatures in " + city + " on " + date + "?";
        gt.push_back(call_json("get_daily_high", cd));
        gt.push_back(call_json("get_daily_low", cd));
        break;
      case 2:
        q = "Did it rain in " + city + " on " + date + ", and what was the sky like?";
        gt.push_back(call_json("get_precipitation", cd));
        gt.push_back(call_json("get_condition", cd));
        break;
      case 3: {
        std::string other = city;
        while (other == city) other = cities[g.below(cities.size())].first;
        q = "Compare the high temperatures of " + city + " and " + other + " on " + date + ".";
        gt.push_back(call_json("get_daily_high", cd));
        gt.push_back(call_json("get_daily_high", {{"city", other}, {"date", date}}));
        break;
      }
      case 4:
        q = "Which station reports the weather for " + city + ", and what was the low there on " + date + "?";
        gt.push_back(call_json("get_station", {{"city", city}}));
        gt.push_back(call_json("get_daily_low", cd));
        break;
      default:
        q = "Summarize the weather in " + city + " on " + date + ".";
        gt.push_back(call_json("get_daily_high", cd));
        gt.push_back(call_json("get_daily_low", cd));
        gt.push_back(call_json("get_precipitation", cd));
        gt.push_back(call_json("get_condition", cd));
        break;
    }
    return std::pair{q, gt};
  });
  return doc;
}

json generate_shop(std::uint64_t seed) {
  Rng rng(seed);
  struct Category {
    std::string name;
    std::vector<std::string> styles;
    std::string option;
    std::vector<std::string> option_values;
  };
  const std::vector<Category> categories = {
      {"dress", {"long", "short", "midi", "wrap"}, "size", {"XS", "S", "M", "L", "XL", "XXL"}},
      {"shirt", {"button-down", "polo", "oversized", "slim fit"}, "size", {"XS", "S", "M", "L", "XL", "XXL"}},
      {"shoes", {"running", "loafer", "sneaker", "boot"}, "size", {"6", "7", "8", "9", "10", "11", "12"}},
      {"jacket", {"denim", "bomber", "puffer", "rain"}, "size", {"XS", "S", "M", "L", "XL", "XXL"}},
      {"pants", {"cargo", "chino", "jogger", "wide leg"}, "size", {"XS", "S", "M", "L", "XL", "XXL"}},
      {"bag", {"tote", "backpack", "crossbody", "clutch"}, "capacity", {"small", "medium", "large"}},
  };
  const std::vector<std::string> colors = {"red", "blue", "black", "white", "green",
                                           "beige", "pink", "navy", "grey", "yellow"};
  const std::vector<std::string> materials = {"cotton", "linen", "leather", "wool", "polyester", "silk", "nylon"};
  const std::vector<std::string> brands = {"Luna", "Northwind", "Vela", "Arbor", "Kestrel", "Mira", "Solace", "Tundra"};

  json items = json::array();
  for (std::size_t i = 1; i <= 240; ++i) {
    const Category& cat = categories[rng.below(categories.size())];
    const std::string color = rng.pick(colors);
    const std::string material = rng.pick(materials);
    const std::string style = rng.pick(cat.styles);
    const std::string brand = rng.pick(brands);
    const bool color_in_title = rng.below(2) == 0;
    std::string title = brand + " " + (color_in_title ? color + " " : "") + material + " " + style + " " + cat.name;

    const std::size_t n = cat.option_values.size();
    const std::size_t span = std::min<std::size_t>(n, 2 + rng.below(n - 1));
    const std::size_t start = rng.below(n - span + 1);
    std::vector<std::string> option_values(cat.option_values.begin() + static_cast<std::ptrdiff_t>(start),
                                           cat.option_values.begin() + static_cast<std::ptrdiff_t>(start + span));
    const double price = static_cast<double>(800 + rng.below(14200)) / 100.0;
    items.push_back(json{{"id", "B" + pad(i, 4)},
                         {"title", title},
                         {"attributes", {{"category", cat.name}, {"color", color}, {"material", material}, {"style", style}}},
                         {"options", {{cat.option, option_values}}},
                         {"price", price}});
  }

  json tasks = json::array();
  for (std::size_t t = 1; t <= kShopSuiteSize; ++t) {
    const json& item = items[rng.below(items.size())];
    const auto attrs = item["attributes"].get<std::map<std::string, std::string>>();
    const auto [opt_name, opt_values] = *item["options"].get<std::map<std::string, std::vector<std::string>>>().begin();
    std::map<std::string, std::string> goal{{"color", attrs.at("color")}};
    const bool want_material = rng.below(5) < 3;
    const bool want_style = rng.below(5) < 3;
    if (want_material) goal["material"] = attrs.at("material");
    if (want_style) goal["style"] = attrs.at("style");
    const std::string opt_value = rng.pick(opt_values);
    goal[opt_name] = opt_value;
    std::optional<double> price_max;
    if (rng.below(5) < 4) price_max = std::ceil(item["price"].get<double>() / 10.0) * 10.0;

    std::string q = "i am looking for a " + (want_style ? attrs.at("style") + " " : std::string()) +
                    attrs.at("color") + " " + (want_material ? attrs.at("material") + " " : std::string()) +
                    attrs.at("category");
    q += opt_name == "size" ? " in size " + opt_value : " with " + opt_value + " capacity";
    if (price_max) q += ", and price lower than " + format_fixed(*price_max, 2) + " dollars";
    tasks.push_back(json{{"id", "shop-" + pad(t, 3)},
                         {"query", q},
                         {"goal", {{"attributes", goal},
                                   {"price_max", price_max ? json(*price_max) : json(nullptr)},
                                   {"query_hint", q}}},
                         {"target_item", item["id"]}});
  }

  json doc = base_doc("shop", "shop", seed);
  doc["catalog"] = items;
  doc["tasks"] = tasks;
  return doc;
}

}  // namespace

const std::vector<std::string>& known_env_ids() {
  static const std::vector<std::string> ids = {"academia", "movie", "weather", "shop"};
  return ids;
}

TaskSuite generate_suite(const std::string& env_id, std::uint64_t seed) {
  json doc;
  if (env_id == "academia") {
    doc = generate_academia(seed);
  } else if (env_id == "movie") {
    doc = generate_movie(seed);
  } else if (env_id == "weather") {
    doc = generate_weather(seed);
  } else if (env_id == "shop") {
    doc = generate_shop(seed);
  } else {
    throw std::invalid_argument("unknown environment id: " + env_id);
  }
  return parse_task_suite(doc.dump(), "generated:" + env_id);
}

}  // namespace pract
