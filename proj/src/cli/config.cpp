#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "rdpkit/errors.hpp"
#include "rdpkit/experiment.hpp"

namespace rdpkit {

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void only_keys(const toml::table& t, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : t) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k.str() == a;
    if (!ok) throw ConfigError(join(path, k.str()), "unknown key");
  }
}

const toml::table* table_at(const toml::table& t, std::string_view key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(join(path, key), "expected a table");
  return n->as_table();
}

template <class T>
void read(const toml::table& t, std::string_view key, const std::string& path, T& out) {
  const toml::node* n = t.get(key);
  if (!n) return;
  const std::string field = join(path, key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!n->is_boolean()) throw ConfigError(field, "expected a boolean");
    out = n->as_boolean()->get();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!n->is_string()) throw ConfigError(field, "expected a string");
    out = n->as_string()->get();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (n->is_floating_point()) out = n->as_floating_point()->get();
    else if (n->is_integer()) out = static_cast<T>(n->as_integer()->get());
    else throw ConfigError(field, "expected a number");
  } else {
    if (!n->is_integer()) throw ConfigError(field, "expected an integer");
    const std::int64_t v = n->as_integer()->get();
    if constexpr (std::is_unsigned_v<T>) {
      if (v < 0) throw ConfigError(field, "must be non-negative");
    } else {
      if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) throw ConfigError(field, "out of range");
    }
    out = static_cast<T>(v);
  }
}

Cell read_cell(const toml::node& n, const std::string& field) {
  const toml::array* a = n.as_array();
  if (!a || a->size() != 2 || !(*a)[0].is_integer() || !(*a)[1].is_integer())
    throw ConfigError(field, "expected a cell [x, y]");
  return Cell{static_cast<int>((*a)[0].as_integer()->get()), static_cast<int>((*a)[1].as_integer()->get())};
}

std::vector<std::string> read_strings(const toml::table& t, std::string_view key, const std::string& path) {
  std::vector<std::string> out;
  const toml::node* n = t.get(key);
  if (!n) return out;
  const std::string field = join(path, key);
  const toml::array* a = n->as_array();
  if (!a) throw ConfigError(field, "expected an array of strings");
  for (std::size_t i = 0; i < a->size(); ++i) {
    if (!(*a)[i].is_string()) throw ConfigError(indexed(field, i), "expected a string");
    out.push_back((*a)[i].as_string()->get());
  }
  return out;
}

template <class Fn>
void each_table(const toml::table& t, std::string_view key, const std::string& path, Fn&& fn) {
  const toml::node* n = t.get(key);
  if (!n) return;
  const std::string field = join(path, key);
  const toml::array* a = n->as_array();
  if (!a) throw ConfigError(field, "expected an array of tables");
  for (std::size_t i = 0; i < a->size(); ++i) {
    if (!(*a)[i].is_table()) throw ConfigError(indexed(field, i), "expected a table");
    fn(*(*a)[i].as_table(), indexed(field, i));
  }
}

ExperimentConfig from_table(const toml::table& root) {
  ExperimentConfig c;
  only_keys(root, "", {"name", "grid", "dynamics", "step_cost", "rewards", "quadruples", "algorithm", "options"});
  read(root, "name", "", c.name);
  read(root, "step_cost", "", c.model.step_cost);

  if (const auto* g = table_at(root, "grid", "")) {
    only_keys(*g, "grid", {"width", "height", "start", "terminals"});
    read(*g, "width", "grid", c.model.width);
    read(*g, "height", "grid", c.model.height);
    if (const auto* s = g->get("start")) c.model.start = read_cell(*s, "grid.start");
    if (const auto* ts = g->get("terminals")) {
      const toml::array* a = ts->as_array();
      if (!a) throw ConfigError("grid.terminals", "expected an array of cells");
      for (std::size_t i = 0; i < a->size(); ++i) c.model.terminals.push_back(read_cell((*a)[i], indexed("grid.terminals", i)));
    }
  }
  if (const auto* d = table_at(root, "dynamics", "")) {
    only_keys(*d, "dynamics", {"success_prob"});
    read(*d, "success_prob", "dynamics", c.model.success_prob);
  }
  each_table(root, "rewards", "", [&](const toml::table& t, const std::string& path) {
    only_keys(t, path, {"guard", "value", "mode"});
    RewardSpec r;
    read(t, "guard", path, r.guard);
    read(t, "value", path, r.value);
    read(t, "mode", path, r.mode);
    if (r.guard.empty()) throw ConfigError(join(path, "guard"), "missing");
    c.model.rewards.push_back(std::move(r));
  });
  each_table(root, "quadruples", "", [&](const toml::table& t, const std::string& path) {
    only_keys(t, path, {"guard", "action", "affected", "outcomes"});
    QuadrupleSpec q;
    read(t, "guard", path, q.guard);
    read(t, "action", path, q.action);
    if (q.guard.empty()) throw ConfigError(join(path, "guard"), "missing");
    q.affected = read_strings(t, "affected", path);
    each_table(t, "outcomes", path, [&](const toml::table& o, const std::string& opath) {
      only_keys(o, opath, {"assignment", "probability"});
      OutcomeSpec spec;
      spec.assignment = read_strings(o, "assignment", opath);
      read(o, "probability", opath, spec.probability);
      q.outcomes.push_back(std::move(spec));
    });
    c.model.quadruples.push_back(std::move(q));
  });

  if (const auto* alg = table_at(root, "algorithm", "")) {
    only_keys(*alg, "algorithm", {"kind", "mc", "vi"});
    read(*alg, "kind", "algorithm", c.algorithm);
    if (c.algorithm != "mc" && c.algorithm != "vi") throw ConfigError("algorithm.kind", "expected 'mc' or 'vi'");
    if (const auto* mc = table_at(*alg, "mc", "algorithm")) {
      const std::string p = "algorithm.mc";
      only_keys(*mc, p, {"runs", "episodes", "n_step_limit", "epsilon", "gamma", "update_mode", "seed", "eval_episodes"});
      read(*mc, "runs", p, c.mc.runs);
      read(*mc, "episodes", p, c.mc.episodes);
      read(*mc, "n_step_limit", p, c.mc.n_step_limit);
      read(*mc, "epsilon", p, c.mc.epsilon);
      read(*mc, "gamma", p, c.mc.gamma);
      read(*mc, "update_mode", p, c.mc.update_mode);
      read(*mc, "seed", p, c.mc.seed);
      read(*mc, "eval_episodes", p, c.mc.eval_episodes);
    }
    if (const auto* vi = table_at(*alg, "vi", "algorithm")) {
      const std::string p = "algorithm.vi";
      only_keys(*vi, p, {"gamma", "tol", "max_iters"});
      read(*vi, "gamma", p, c.vi.gamma);
      read(*vi, "tol", p, c.vi.tol);
      read(*vi, "max_iters", p, c.vi.max_iters);
    }
  }
  if (const auto* o = table_at(root, "options", "")) {
    only_keys(*o, "options", {"shaping", "shield", "shield_enforce"});
    read(*o, "shaping", "options", c.shaping);
    c.shield = read_strings(*o, "shield", "options");
    read(*o, "shield_enforce", "options", c.shield_enforce);
  }

  const McConfig& mc = c.mc;
  if (mc.runs < 1) throw ConfigError("algorithm.mc.runs", "must be at least 1");
  if (mc.episodes < 1) throw ConfigError("algorithm.mc.episodes", "must be at least 1");
  if (mc.n_step_limit < 0) throw ConfigError("algorithm.mc.n_step_limit", "must be non-negative");
  if (!(mc.epsilon >= 0.0 && mc.epsilon <= 1.0)) throw ConfigError("algorithm.mc.epsilon", "must lie in [0, 1]");
  if (!(mc.gamma >= 0.0 && mc.gamma <= 1.0)) throw ConfigError("algorithm.mc.gamma", "must lie in [0, 1]");
  if (mc.update_mode != "average" && mc.update_mode != "overwrite")
    throw ConfigError("algorithm.mc.update_mode", "expected 'average' or 'overwrite'");
  if (mc.eval_episodes < 1) throw ConfigError("algorithm.mc.eval_episodes", "must be at least 1");
  if (!(c.vi.gamma >= 0.0 && c.vi.gamma <= 1.0)) throw ConfigError("algorithm.vi.gamma", "must lie in [0, 1]");
  if (!(c.vi.tol > 0.0)) throw ConfigError("algorithm.vi.tol", "must be positive");
  if (c.vi.max_iters < 1) throw ConfigError("algorithm.vi.max_iters", "must be at least 1");
  return c;
}

// Walks "a.b[2].c", creating tables along the way, and stores `value`.
void apply_override(toml::table& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must have the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  toml::table parsed;
  try {
    parsed = toml::parse("v = " + text);
  } catch (const toml::parse_error&) {
    parsed = toml::table{};
    parsed.insert("v", text);
  }

  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string seg; std::getline(ss, seg, '.');) parts.push_back(seg);

  toml::table* cur = &root;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::string name = parts[i];
    std::optional<std::size_t> index;
    if (auto lb = name.find('['); lb != std::string::npos && name.back() == ']') {
      std::size_t v = 0;
      auto res = std::from_chars(name.data() + lb + 1, name.data() + name.size() - 1, v);
      if (res.ec != std::errc{} || res.ptr != name.data() + name.size() - 1) throw ConfigError(key, "bad index");
      index = v;
      name = name.substr(0, lb);
    }
    const bool last = i + 1 == parts.size();
    if (index) {
      toml::array* arr = cur->get_as<toml::array>(name);
      if (!arr || *index >= arr->size() || !(*arr)[*index].is_table())
        throw ConfigError(key, "no such array element");
      if (last) throw ConfigError(key, "cannot replace a whole table");
      cur = (*arr)[*index].as_table();
      continue;
    }
    if (last) {
      cur->insert_or_assign(name, *parsed.get("v"));
    } else {
      if (!cur->contains(name)) cur->insert(name, toml::table{});
      cur = cur->get_as<toml::table>(name);
      if (!cur) throw ConfigError(key, "'" + name + "' is not a table");
    }
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string cell(Cell c) { return "[" + std::to_string(c.x) + ", " + std::to_string(c.y) + "]"; }

std::string strings(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + quote(v[i]);
  return out + "]";
}

}  // namespace

ExperimentConfig parse_config(std::string_view toml_text, const std::vector<std::string>& overrides) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    const auto& b = e.source().begin;
    throw ConfigError("<document>", "TOML error at " + std::to_string(b.line) + ":" + std::to_string(b.column) + ": " +
                                        std::string(e.description()));
  }
  for (const auto& o : overrides) apply_override(root, o);
  return from_table(root);
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string to_toml(const ExperimentConfig& c) {
  std::ostringstream os;
  const ModelSpec& m = c.model;
  os << "name = " << quote(c.name) << "\n";
  os << "step_cost = " << num(m.step_cost) << "\n\n";
  os << "[grid]\nwidth = " << m.width << "\nheight = " << m.height << "\nstart = " << cell(m.start) << "\nterminals = [";
  for (std::size_t i = 0; i < m.terminals.size(); ++i) os << (i ? ", " : "") << cell(m.terminals[i]);
  os << "]\n\n[dynamics]\nsuccess_prob = " << num(m.success_prob) << "\n";
  for (const auto& r : m.rewards)
    os << "\n[[rewards]]\nguard = " << quote(r.guard) << "\nvalue = " << num(r.value) << "\nmode = " << quote(r.mode) << "\n";
  for (const auto& q : m.quadruples) {
    os << "\n[[quadruples]]\nguard = " << quote(q.guard) << "\naction = " << quote(q.action)
       << "\naffected = " << strings(q.affected) << "\n";
    for (const auto& o : q.outcomes)
      os << "\n[[quadruples.outcomes]]\nassignment = " << strings(o.assignment) << "\nprobability = " << num(o.probability)
         << "\n";
  }
  os << "\n[algorithm]\nkind = " << quote(c.algorithm) << "\n";
  os << "\n[algorithm.mc]\nruns = " << c.mc.runs << "\nepisodes = " << c.mc.episodes << "\nn_step_limit = " << c.mc.n_step_limit
     << "\nepsilon = " << num(c.mc.epsilon) << "\ngamma = " << num(c.mc.gamma) << "\nupdate_mode = " << quote(c.mc.update_mode)
     << "\nseed = " << c.mc.seed << "\neval_episodes = " << c.mc.eval_episodes << "\n";
  os << "\n[algorithm.vi]\ngamma = " << num(c.vi.gamma) << "\ntol = " << num(c.vi.tol) << "\nmax_iters = " << c.vi.max_iters
     << "\n";
  os << "\n[options]\nshaping = " << (c.shaping ? "true" : "false") << "\nshield = " << strings(c.shield)
     << "\nshield_enforce = " << (c.shield_enforce ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace rdpkit
