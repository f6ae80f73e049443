#include "ncsattack/scenario_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "ncsattack/csv.hpp"
#include "ncsattack/errors.hpp"

namespace ncsattack::harness {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(trim(part));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

class Values {
 public:
  explicit Values(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  const std::string& raw(const std::string& key) const { return kv_.at(key); }

  double number(const std::string& key) const {
    try {
      return csv::parse_double(raw(key));
    } catch (const InvalidInput&) {
      throw InvalidInput(key + ": expected a number, got '" + raw(key) + "'");
    }
  }

  long integer(const std::string& key) const {
    const double v = number(key);
    if (v != static_cast<double>(static_cast<long>(v)))
      throw InvalidInput(key + ": expected an integer, got '" + raw(key) + "'");
    return static_cast<long>(v);
  }

  std::vector<std::vector<double>> rows(const std::string& key, std::size_t width) const {
    std::vector<std::vector<double>> out;
    for (const auto& row : split(raw(key), ';')) {
      if (row.empty()) continue;
      std::vector<double> vals;
      for (const auto& f : split(row, ',')) {
        try {
          vals.push_back(csv::parse_double(f));
        } catch (const InvalidInput&) {
          throw InvalidInput(key + ": expected a number, got '" + f + "'");
        }
      }
      if (vals.size() != width)
        throw InvalidInput(key + ": each entry needs " + std::to_string(width) + " numbers");
      out.push_back(std::move(vals));
    }
    return out;
  }

 private:
  std::map<std::string, std::string> kv_;
};

ncs::Matrix24 gain_from(const Values& v, const std::string& key) {
  const auto r = v.rows(key, ncs::kStateDim);
  if (r.size() != ncs::kInputDim) throw InvalidInput(key + ": expected 2 rows of 4 numbers");
  ncs::Matrix24 g;
  for (int i = 0; i < ncs::kInputDim; ++i)
    for (int j = 0; j < ncs::kStateDim; ++j) g(i, j) = r[i][j];
  return g;
}

std::vector<Eigen::Vector4d> vectors_from(const Values& v, const std::string& key) {
  std::vector<Eigen::Vector4d> out;
  for (const auto& r : v.rows(key, ncs::kStateDim)) out.emplace_back(r[0], r[1], r[2], r[3]);
  return out;
}

std::string join_row(std::initializer_list<double> vals) {
  std::string s;
  for (double x : vals) {
    if (!s.empty()) s += ", ";
    s += csv::format_double(x);
  }
  return s;
}

std::string format_gain(const ncs::Matrix24& g) {
  return join_row({g(0, 0), g(0, 1), g(0, 2), g(0, 3)}) + "; " +
         join_row({g(1, 0), g(1, 1), g(1, 2), g(1, 3)});
}

std::string format_vectors(const std::vector<Eigen::Vector4d>& vs) {
  std::string s;
  for (const auto& x : vs) {
    if (!s.empty()) s += "; ";
    s += join_row({x(0), x(1), x(2), x(3)});
  }
  return s;
}

const char* const kKeys[] = {
    "n_agents", "dt", "horizon_steps", "gain", "leader_gain", "edges", "formation_offsets",
    "initial_box", "initial_states", "rng_seed", "reference", "reference_point", "rho", "d_star",
    "polytope_sides", "polytope_seed", "attack_start_step", "dos_step", "dos_edge", "dmd_width",
    "svd_tol", "reach_horizon", "reach_directions", "recovery_threshold", "recovery_max_iters",
    "recovery_seed",
};

}  // namespace

void Experiment::validate() const {
  scenario.validate();
  if (attack.rho < 0.0) throw InvalidInput("rho must be non-negative");
  if (attack.rho > 0.0) attack.validate();
  if (attack.dos && attack.dos->edge) {
    const auto [i, j] = *attack.dos->edge;
    if (i < 0 || j < 0 || i >= scenario.n_agents || j >= scenario.n_agents || i == j)
      throw InvalidInput("dos_edge: not a valid agent pair");
  }
  if (dmd_width < 1) throw InvalidInput("dmd_width must be positive");
  if (!(svd_tol > 0.0 && svd_tol < 1.0)) throw InvalidInput("svd_tol must lie in (0, 1)");
  if (reach_horizon < 1) throw InvalidInput("reach_horizon must be at least 1");
  if (reach_directions < 3) throw InvalidInput("reach_directions must be at least 3");
  if (!(recovery.threshold > 0.0)) throw InvalidInput("recovery_threshold must be positive");
  if (recovery.max_iters < 1) throw InvalidInput("recovery_max_iters must be positive");
}

void Experiment::reseed(std::uint64_t seed) {
  scenario.rng_seed = seed;
  if (!explicit_initial_states)
    scenario.initial_states =
        ncs::random_initial_states(scenario.n_agents, initial_lo, initial_hi, seed);
}

Experiment default_experiment(std::uint64_t seed) {
  Experiment e;
  auto& s = e.scenario;
  s.n_agents = 5;
  s.agent = ncs::double_integrator(0.2);
  s.graph = graph::Graph(5, {{0, 1}, {0, 2}, {1, 3}, {2, 4}});
  s.gain = ncs::default_gain();
  s.leader_gain = ncs::default_gain();
  s.formation_offsets = ncs::default_formation_offsets();
  s.horizon_steps = 500;
  e.attack.dos = attack::DosEvent{};
  e.reseed(seed);
  return e;
}

Experiment parse_experiment(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw InvalidInput("unknown key '" + key + "'");
    if (kv.count(key)) throw InvalidInput("duplicate key '" + key + "'");
    kv[key] = trim(std::string_view(t).substr(eq + 1));
  }
  const Values v(std::move(kv));

  Experiment e = default_experiment();
  auto& s = e.scenario;
  if (v.has("n_agents")) {
    s.n_agents = static_cast<int>(v.integer("n_agents"));
    if (s.n_agents < 2) throw InvalidInput("n_agents must be at least 2");
    if (s.n_agents != 5) {
      if (!v.has("edges")) throw InvalidInput("edges: required when n_agents differs from 5");
      if (!v.has("formation_offsets"))
        throw InvalidInput("formation_offsets: required when n_agents differs from 5");
    }
  }
  if (v.has("dt")) s.agent = ncs::double_integrator(v.number("dt"));
  if (v.has("horizon_steps")) s.horizon_steps = static_cast<int>(v.integer("horizon_steps"));
  if (v.has("gain")) {
    s.gain = gain_from(v, "gain");
    if (!v.has("leader_gain")) s.leader_gain = s.gain;
  }
  if (v.has("leader_gain")) s.leader_gain = gain_from(v, "leader_gain");
  if (v.has("edges")) {
    try {
      s.graph = graph::Graph(s.n_agents, graph::parse_edge_list(v.raw("edges")));
    } catch (const Error& err) {
      throw InvalidInput(std::string("edges: ") + err.what());
    }
  }
  if (v.has("formation_offsets")) s.formation_offsets = vectors_from(v, "formation_offsets");
  if (v.has("initial_box")) {
    const auto r = v.rows("initial_box", 2);
    if (r.size() != 1) throw InvalidInput("initial_box: expected 'lo, hi'");
    e.initial_lo = r[0][0];
    e.initial_hi = r[0][1];
    if (!(e.initial_hi >= e.initial_lo)) throw InvalidInput("initial_box: hi below lo");
  }
  if (v.has("initial_states")) {
    s.initial_states = vectors_from(v, "initial_states");
    e.explicit_initial_states = true;
  }
  if (v.has("reference")) {
    const auto& r = v.raw("reference");
    if (r == "spiral") s.reference.kind = ncs::Reference::Kind::Spiral;
    else if (r == "constant") s.reference.kind = ncs::Reference::Kind::Constant;
    else throw InvalidInput("reference: expected spiral or constant, got '" + r + "'");
  }
  if (v.has("reference_point")) {
    const auto r = vectors_from(v, "reference_point");
    if (r.size() != 1) throw InvalidInput("reference_point: expected one 4-vector");
    s.reference.constant = r[0];
  }
  if (v.has("rho")) e.attack.rho = v.number("rho");
  if (v.has("d_star")) e.attack.d_star = v.number("d_star");
  if (v.has("polytope_sides")) e.attack.s = static_cast<int>(v.integer("polytope_sides"));
  if (v.has("polytope_seed")) {
    if (v.raw("polytope_seed") == "none") e.attack.polytope_seed.reset();
    else e.attack.polytope_seed = static_cast<std::uint64_t>(v.integer("polytope_seed"));
  }
  if (v.has("attack_start_step")) e.attack.start_step = static_cast<int>(v.integer("attack_start_step"));
  if (v.has("dos_step")) {
    if (v.raw("dos_step") == "none") e.attack.dos.reset();
    else e.attack.dos = attack::DosEvent{static_cast<int>(v.integer("dos_step")), std::nullopt};
  }
  if (v.has("dos_edge")) {
    if (!e.attack.dos) throw InvalidInput("dos_edge: given while dos_step is none");
    std::vector<graph::Edge> edges;
    try {
      edges = graph::parse_edge_list(v.raw("dos_edge"));
    } catch (const Error& err) {
      throw InvalidInput(std::string("dos_edge: ") + err.what());
    }
    if (edges.size() != 1) throw InvalidInput("dos_edge: expected exactly one link");
    e.attack.dos->edge = edges.front();
  }
  if (v.has("dmd_width")) e.dmd_width = static_cast<int>(v.integer("dmd_width"));
  if (v.has("svd_tol")) e.svd_tol = v.number("svd_tol");
  if (v.has("reach_horizon")) e.reach_horizon = static_cast<int>(v.integer("reach_horizon"));
  if (v.has("reach_directions")) e.reach_directions = static_cast<int>(v.integer("reach_directions"));
  if (v.has("recovery_threshold")) e.recovery.threshold = v.number("recovery_threshold");
  if (v.has("recovery_max_iters")) e.recovery.max_iters = static_cast<int>(v.integer("recovery_max_iters"));
  if (v.has("recovery_seed")) e.recovery.seed = static_cast<std::uint64_t>(v.integer("recovery_seed"));

  const auto seed = v.has("rng_seed") ? static_cast<std::uint64_t>(v.integer("rng_seed")) : 0;
  e.reseed(seed);
  e.validate();
  return e;
}

Experiment load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str());
}

std::string format_experiment(const Experiment& e) {
  const auto& s = e.scenario;
  std::ostringstream o;
  o << "n_agents = " << s.n_agents << '\n';
  o << "dt = " << csv::format_double(s.agent.dt) << '\n';
  o << "horizon_steps = " << s.horizon_steps << '\n';
  o << "gain = " << format_gain(s.gain) << '\n';
  o << "leader_gain = " << format_gain(s.leader_gain) << '\n';
  o << "edges = " << graph::format_edge_list(s.graph.edges()) << '\n';
  o << "formation_offsets = " << format_vectors(s.formation_offsets) << '\n';
  o << "initial_box = " << csv::format_double(e.initial_lo) << ", " << csv::format_double(e.initial_hi) << '\n';
  if (e.explicit_initial_states) o << "initial_states = " << format_vectors(s.initial_states) << '\n';
  o << "rng_seed = " << s.rng_seed << '\n';
  o << "reference = " << (s.reference.kind == ncs::Reference::Kind::Spiral ? "spiral" : "constant") << '\n';
  o << "reference_point = " << format_vectors({s.reference.constant}) << '\n';
  o << "rho = " << csv::format_double(e.attack.rho) << '\n';
  o << "d_star = " << csv::format_double(e.attack.d_star) << '\n';
  o << "polytope_sides = " << e.attack.s << '\n';
  o << "polytope_seed = " << (e.attack.polytope_seed ? std::to_string(*e.attack.polytope_seed) : "none") << '\n';
  o << "attack_start_step = " << e.attack.start_step << '\n';
  o << "dos_step = " << (e.attack.dos ? std::to_string(e.attack.dos->step) : "none") << '\n';
  if (e.attack.dos && e.attack.dos->edge) o << "dos_edge = " << graph::format_edge_list({*e.attack.dos->edge}) << '\n';
  o << "dmd_width = " << e.dmd_width << '\n';
  o << "svd_tol = " << csv::format_double(e.svd_tol) << '\n';
  o << "reach_horizon = " << e.reach_horizon << '\n';
  o << "reach_directions = " << e.reach_directions << '\n';
  o << "recovery_threshold = " << csv::format_double(e.recovery.threshold) << '\n';
  o << "recovery_max_iters = " << e.recovery.max_iters << '\n';
  o << "recovery_seed = " << e.recovery.seed << '\n';
  return o.str();
}

}  // namespace ncsattack::harness
