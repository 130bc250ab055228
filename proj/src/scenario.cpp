#include "selfdeploy/scenario.hpp"

#include "selfdeploy/learn.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace selfdeploy {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) const {
    const auto mark = n.Mark();
    if (mark.is_null()) {
      throw ScenarioError(fmt::format("{}: {}", source_, msg));
    }
    throw ScenarioError(fmt::format("{}:{}:{}: {}", source_, mark.line + 1, mark.column + 1, msg));
  }

  void expect_map(const YAML::Node& n, std::string_view what) const {
    if (!n.IsMap()) {
      fail(n, fmt::format("'{}' must be a mapping", what));
    }
  }

  void check_keys(const YAML::Node& n, std::string_view what,
                  std::initializer_list<std::string_view> allowed) const {
    expect_map(n, what);
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(kv.first, fmt::format("unknown key '{}' in '{}'", key, what));
      }
    }
  }

  YAML::Node require(const YAML::Node& parent, const char* key) const {
    const YAML::Node n = parent[key];
    if (!n) {
      fail(parent, fmt::format("missing required key '{}'", key));
    }
    return n;
  }

  template <typename T>
  T as(const YAML::Node& n, std::string_view what) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, fmt::format("invalid value for '{}'", what));
    }
  }

  double number(const YAML::Node& parent, const char* key) const {
    return as<double>(require(parent, key), key);
  }

  double number_or(const YAML::Node& parent, const char* key, double fallback) const {
    const YAML::Node n = parent[key];
    return n ? as<double>(n, key) : fallback;
  }

  int integer_or(const YAML::Node& parent, const char* key, int fallback) const {
    const YAML::Node n = parent[key];
    return n ? as<int>(n, key) : fallback;
  }

  std::size_t count_or(const YAML::Node& parent, const char* key, std::size_t fallback) const {
    const YAML::Node n = parent[key];
    if (!n) {
      return fallback;
    }
    const long v = as<long>(n, key);
    if (v < 0) {
      fail(n, fmt::format("'{}' must be non-negative", key));
    }
    return static_cast<std::size_t>(v);
  }

  std::string string_or(const YAML::Node& parent, const char* key, std::string fallback) const {
    const YAML::Node n = parent[key];
    return n ? as<std::string>(n, key) : fallback;
  }

  Point point(const YAML::Node& n, std::string_view what) const {
    if (!n.IsSequence() || n.size() != 2) {
      fail(n, fmt::format("'{}' must be a pair [x, y] in meters", what));
    }
    return {as<double>(n[0], what), as<double>(n[1], what)};
  }

 private:
  std::string source_;
};

RadioNode parse_ap(const Reader& r, const YAML::Node& n, bool managed) {
  r.check_keys(n, "ap", {"id", "location", "tx_power_dbm", "channel"});
  RadioNode ap;
  ap.id = r.string_or(n, "id", managed ? "mAP" : "");
  ap.role = NodeRole::access_point;
  ap.location = r.point(r.require(n, "location"), "location");
  ap.tx_power_dbm = r.number_or(n, "tx_power_dbm", 20.0);
  ap.channel = r.integer_or(n, "channel", 36);
  ap.managed = managed;
  return ap;
}

RadioNode parse_extender_node(const Reader& r, const YAML::Node& n, bool managed) {
  RadioNode ext;
  ext.role = NodeRole::extender;
  ext.id = r.string_or(n, "id", "");
  ext.tx_power_dbm = r.number_or(n, "tx_power_dbm", 20.0);
  ext.channel = r.integer_or(n, "backhaul_channel", 36);
  ext.fronthaul_channel = r.integer_or(n, "fronthaul_channel", ext.channel);
  ext.managed = managed;
  return ext;
}

McsTable parse_mcs_node(const Reader& r, const YAML::Node& n) {
  r.check_keys(n, "mcs table", {"bandwidth_mhz", "rows"});
  const double bw = r.number(n, "bandwidth_mhz");
  const YAML::Node rows = r.require(n, "rows");
  if (!rows.IsSequence()) {
    r.fail(rows, "'rows' must be a list of [min_snr_db, rate_mbps]");
  }
  std::vector<McsEntry> entries;
  for (const auto& row : rows) {
    if (!row.IsSequence() || row.size() != 2) {
      r.fail(row, "MCS row must be [min_snr_db, rate_mbps]");
    }
    entries.push_back({r.as<double>(row[0], "min_snr_db"), r.as<double>(row[1], "rate_mbps")});
  }
  try {
    return McsTable(std::move(entries), bw);
  } catch (const Error& e) {
    r.fail(n, e.what());
  }
}

YAML::Node load_yaml(std::string_view text, std::string_view source) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError(
        fmt::format("{}:{}:{}: {}", source, e.mark.line + 1, e.mark.column + 1, e.msg));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

McsTable parse_mcs_table(std::string_view text, std::string_view source_name) {
  const Reader r(source_name);
  return parse_mcs_node(r, load_yaml(text, source_name));
}

McsTable load_mcs_table(const std::filesystem::path& path) {
  return parse_mcs_table(read_file(path), path.string());
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                        std::string_view source_name) {
  const Reader r(source_name);
  const YAML::Node root = load_yaml(text, source_name);
  r.check_keys(root, "scenario",
               {"name", "floor_plan", "channel", "mcs", "ap", "extenders", "users",
                "user_placement", "neighbors", "cbr", "run"});

  Scenario sc{.name = r.string_or(root, "name", "scenario"),
              .env = {.plan = FloorPlan(1.0, 1.0, {}, 1.0),
                      .channel = {},
                      .mcs = McsTable::vht80(),
                      .fixed_mcs_index = {},
                      .hidden_node_penalty = 0.6},
              .ap = {},
              .extenders = {},
              .users = {},
              .neighbors = {},
              .cbr = {}};

  {
    const YAML::Node fp = r.require(root, "floor_plan");
    r.check_keys(fp, "floor_plan",
                 {"width_m", "height_m", "grid_step_m", "walls", "placement_area"});
    std::vector<WallSegment> walls;
    if (const YAML::Node ws = fp["walls"]) {
      if (!ws.IsSequence()) {
        r.fail(ws, "'walls' must be a list");
      }
      for (const auto& w : ws) {
        r.check_keys(w, "wall", {"from", "to", "loss_db"});
        walls.push_back({r.point(r.require(w, "from"), "from"), r.point(r.require(w, "to"), "to"),
                         r.number_or(w, "loss_db", 10.0)});
      }
    }
    std::optional<Rect> area;
    if (const YAML::Node pa = fp["placement_area"]) {
      r.check_keys(pa, "placement_area", {"min", "max"});
      area = Rect{r.point(r.require(pa, "min"), "min"), r.point(r.require(pa, "max"), "max")};
    }
    try {
      sc.env.plan = FloorPlan(r.number(fp, "width_m"), r.number(fp, "height_m"), std::move(walls),
                              r.number_or(fp, "grid_step_m", 1.0), area);
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      r.fail(fp, e.what());
    }
  }

  if (const YAML::Node ch = root["channel"]) {
    r.check_keys(ch, "channel",
                 {"frequency_mhz", "noise_floor_dbm", "rx_sensitivity_dbm", "cca_threshold_dbm",
                  "pathloss_exponent", "hidden_node_penalty"});
    auto& p = sc.env.channel;
    p.frequency_mhz = r.number_or(ch, "frequency_mhz", p.frequency_mhz);
    p.noise_floor_dbm = r.number_or(ch, "noise_floor_dbm", p.noise_floor_dbm);
    p.rx_sensitivity_dbm = r.number_or(ch, "rx_sensitivity_dbm", p.rx_sensitivity_dbm);
    p.cca_threshold_dbm = r.number_or(ch, "cca_threshold_dbm", p.cca_threshold_dbm);
    p.pathloss_exponent = r.number_or(ch, "pathloss_exponent", p.pathloss_exponent);
    sc.env.hidden_node_penalty = r.number_or(ch, "hidden_node_penalty", 0.6);
    try {
      p.validate();
    } catch (const Error& e) {
      r.fail(ch, e.what());
    }
    if (sc.env.hidden_node_penalty < 0.0) {
      r.fail(ch, "hidden_node_penalty must be non-negative");
    }
  }

  if (const YAML::Node mcs = root["mcs"]) {
    r.check_keys(mcs, "mcs", {"table", "bandwidth_mhz", "rows", "fixed_index"});
    if (const YAML::Node table = mcs["table"]) {
      const auto path = base_dir / r.as<std::string>(table, "table");
      sc.env.mcs = load_mcs_table(path);
    } else if (mcs["rows"]) {
      YAML::Node inline_table;
      inline_table["bandwidth_mhz"] = mcs["bandwidth_mhz"];
      inline_table["rows"] = mcs["rows"];
      sc.env.mcs = parse_mcs_node(r, inline_table);
    }
    if (const YAML::Node fixed = mcs["fixed_index"]) {
      const long idx = r.as<long>(fixed, "fixed_index");
      if (idx < 0 || static_cast<std::size_t>(idx) >= sc.env.mcs.rows().size()) {
        r.fail(fixed, "fixed_index outside the MCS table");
      }
      sc.env.fixed_mcs_index = static_cast<std::size_t>(idx);
    }
  }

  sc.ap = parse_ap(r, r.require(root, "ap"), true);

  {
    const YAML::Node exts = r.require(root, "extenders");
    if (!exts.IsSequence() || exts.size() == 0) {
      r.fail(exts, "'extenders' must be a non-empty list");
    }
    for (const auto& e : exts) {
      r.check_keys(e, "extender",
                   {"id", "tx_power_dbm", "backhaul_channel", "fronthaul_channel", "initial"});
      ManagedExtender me;
      me.node = parse_extender_node(r, e, true);
      if (me.node.id.empty()) {
        me.node.id = fmt::format("EXT{}", sc.extenders.size() + 1);
      }
      const YAML::Node init = e["initial"];
      if (!init || (init.IsScalar() && init.as<std::string>() == "midway")) {
        me.initial = InitialPlacement::midway;
      } else if (init.IsScalar() && init.as<std::string>() == "random") {
        me.initial = InitialPlacement::random;
      } else if (init.IsSequence()) {
        me.initial = InitialPlacement::fixed;
        me.node.location = r.point(init, "initial");
      } else {
        r.fail(init, "'initial' must be midway, random or [x, y]");
      }
      sc.extenders.push_back(std::move(me));
    }
  }

  {
    const YAML::Node users = r.require(root, "users");
    if (!users.IsSequence() || users.size() == 0) {
      r.fail(users, "'users' must be a non-empty list");
    }
    for (const auto& u : users) {
      r.check_keys(u, "user", {"id", "location", "demand_mbps"});
      ManagedUser mu;
      mu.id = r.string_or(u, "id", fmt::format("STA{}", sc.users.size() + 1));
      mu.location = r.point(r.require(u, "location"), "location");
      mu.demand_mbps = r.number(u, "demand_mbps");
      if (!(mu.demand_mbps > 0.0)) {
        r.fail(u, "demand_mbps must be positive");
      }
      sc.users.push_back(std::move(mu));
    }
  }

  {
    const std::string placement = r.string_or(root, "user_placement", "random");
    if (placement == "random") {
      sc.resample_users = true;
    } else if (placement == "fixed") {
      sc.resample_users = false;
    } else {
      r.fail(root["user_placement"], "user_placement must be random or fixed");
    }
  }

  if (const YAML::Node ns = root["neighbors"]) {
    if (!ns.IsSequence()) {
      r.fail(ns, "'neighbors' must be a list");
    }
    for (const auto& n : ns) {
      r.check_keys(n, "neighbor", {"ap", "extender", "users", "saturated"});
      NeighborNetwork net;
      net.ap = parse_ap(r, r.require(n, "ap"), false);
      if (net.ap.id.empty()) {
        net.ap.id = fmt::format("N{}-AP", sc.neighbors.size() + 1);
      }
      if (const YAML::Node e = n["extender"]) {
        r.check_keys(e, "extender",
                     {"id", "tx_power_dbm", "backhaul_channel", "fronthaul_channel", "location"});
        RadioNode ext = parse_extender_node(r, e, false);
        ext.location = r.point(r.require(e, "location"), "location");
        if (ext.id.empty()) {
          ext.id = fmt::format("N{}-EXT", sc.neighbors.size() + 1);
        }
        net.extender = ext;
      }
      if (const YAML::Node us = n["users"]) {
        if (!us.IsSequence()) {
          r.fail(us, "'users' must be a list of [x, y]");
        }
        for (const auto& u : us) {
          net.users.push_back(r.point(u, "user"));
        }
      }
      if (const YAML::Node s = n["saturated"]) {
        net.saturated = r.as<bool>(s, "saturated");
      }
      sc.neighbors.push_back(std::move(net));
    }
  }

  if (const YAML::Node c = root["cbr"]) {
    r.check_keys(c, "cbr",
                 {"max_match", "min_fitness", "demand_normalizer_mbps", "user_slots",
                  "initial_omega", "corridor_half_width_cells", "stall_requests",
                  "stall_tolerance"});
    auto& cbr = sc.cbr;
    cbr.thresholds.max_match = r.number_or(c, "max_match", cbr.thresholds.max_match);
    cbr.thresholds.min_fitness = r.number_or(c, "min_fitness", cbr.thresholds.min_fitness);
    cbr.demand_normalizer = r.number_or(c, "demand_normalizer_mbps", cbr.demand_normalizer);
    cbr.user_slots = r.count_or(c, "user_slots", cbr.user_slots);
    cbr.initial_omega = r.number_or(c, "initial_omega", cbr.initial_omega);
    cbr.corridor_half_width_cells =
        r.number_or(c, "corridor_half_width_cells", cbr.corridor_half_width_cells);
    cbr.stall_requests = r.count_or(c, "stall_requests", cbr.stall_requests);
    cbr.stall_tolerance = r.number_or(c, "stall_tolerance", cbr.stall_tolerance);
    if (cbr.thresholds.min_fitness < 0.0 || cbr.thresholds.min_fitness > 1.0) {
      r.fail(c, "min_fitness must lie in [0, 1]");
    }
    if (cbr.thresholds.max_match < 0.0) {
      r.fail(c, "max_match must be non-negative");
    }
    if (!(cbr.demand_normalizer > 0.0)) {
      r.fail(c, "demand_normalizer_mbps must be positive");
    }
    if (cbr.initial_omega < kOmegaMin || cbr.initial_omega > kOmegaMax) {
      r.fail(c, "initial_omega must lie in [0.1, 1]");
    }
    if (cbr.stall_requests == 0) {
      r.fail(c, "stall_requests must be positive");
    }
  }

  if (const YAML::Node run = root["run"]) {
    r.check_keys(run, "run", {"drops", "seed", "max_repositions", "max_requests"});
    sc.drops = r.count_or(run, "drops", sc.drops);
    if (const YAML::Node s = run["seed"]) {
      sc.seed = r.as<std::uint64_t>(s, "seed");
    }
    sc.max_requests = r.count_or(run, "max_requests", sc.max_requests);
    if (const YAML::Node m = run["max_repositions"]) {
      if (m.IsScalar() && m.as<std::string>() == "unlimited") {
        sc.max_repositions.reset();
      } else {
        sc.max_repositions = r.count_or(run, "max_repositions", 5);
      }
    }
    if (sc.drops == 0 || sc.max_requests == 0) {
      r.fail(run, "drops and max_requests must be positive");
    }
  }

  if (sc.users.size() > sc.cbr.user_slots) {
    r.fail(root["users"], fmt::format("{} users exceed cbr.user_slots = {}", sc.users.size(),
                                      sc.cbr.user_slots));
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.parent_path(), path.string());
}

std::vector<std::string> lint_scenario(const Scenario& sc) {
  std::vector<std::string> issues;
  const auto& plan = sc.env.plan;
  const auto check = [&](Point p, const std::string& what) {
    if (!plan.contains(p)) {
      issues.push_back(fmt::format("{} at ({}, {}) lies outside the floor plan", what, p.x, p.y));
    }
  };
  check(sc.ap.location, "mAP " + sc.ap.id);
  for (const auto& e : sc.extenders) {
    if (e.initial == InitialPlacement::fixed) {
      check(e.node.location, "extender " + e.node.id);
    }
  }
  for (const auto& u : sc.users) {
    check(u.location, "user " + u.id);
  }
  for (const auto& n : sc.neighbors) {
    check(n.ap.location, "neighbor " + n.ap.id);
    if (n.extender) {
      check(n.extender->location, "neighbor " + n.extender->id);
    }
  }
  std::set<std::string> ids{sc.ap.id};
  const auto unique = [&](const std::string& id) {
    if (!ids.insert(id).second) {
      issues.push_back("duplicate node id '" + id + "'");
    }
  };
  for (const auto& e : sc.extenders) unique(e.node.id);
  for (const auto& u : sc.users) unique(u.id);
  for (const auto& n : sc.neighbors) {
    unique(n.ap.id);
    if (n.extender) unique(n.extender->id);
  }
  if (sc.env.channel.rx_sensitivity_dbm > sc.env.channel.cca_threshold_dbm) {
    issues.push_back("receiver sensitivity exceeds the CCA threshold");
  }
  if (plan.candidates().empty()) {
    issues.push_back("floor plan has no candidate locations");
  }
  for (const auto& w : plan.walls()) {
    if (!plan.contains(w.a) || !plan.contains(w.b)) {
      issues.push_back(fmt::format("wall ({}, {})-({}, {}) leaves the floor plan", w.a.x, w.a.y,
                                   w.b.x, w.b.y));
    }
  }
  return issues;
}

std::vector<RadioNode> neighbor_nodes(const Scenario& sc) {
  std::vector<RadioNode> out;
  for (const auto& n : sc.neighbors) {
    RadioNode ap = n.ap;
    ap.active = n.saturated;
    out.push_back(ap);
    if (n.extender) {
      RadioNode ext = *n.extender;
      ext.active = n.saturated;
      out.push_back(ext);
    }
    for (std::size_t i = 0; i < n.users.size(); ++i) {
      RadioNode sta;
      sta.id = fmt::format("{}-STA{}", n.ap.id, i + 1);
      sta.role = NodeRole::station;
      sta.location = n.users[i];
      sta.managed = false;
      sta.active = false;
      out.push_back(sta);
    }
  }
  return out;
}

}  // namespace selfdeploy
