#include "selfdeploy/episode.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "selfdeploy/error.hpp"

namespace selfdeploy {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::ai_cbr: return "ai-cbr";
    case Algorithm::coverage_max: return "coverage-max";
    case Algorithm::ap_only: return "ap-only";
    case Algorithm::oracle: return "oracle";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  for (auto a : {Algorithm::ai_cbr, Algorithm::coverage_max, Algorithm::ap_only,
                 Algorithm::oracle}) {
    if (text == to_string(a)) {
      return a;
    }
  }
  throw Error("unknown algorithm '" + std::string(text) +
              "' (expected ai-cbr, coverage-max, ap-only or oracle)");
}

std::string_view to_string(ActionSource source) {
  switch (source) {
    case ActionSource::initial: return "initial";
    case ActionSource::reuse: return "reuse";
    case ActionSource::optimize: return "optimize";
    case ActionSource::settle: return "settle";
    case ActionSource::hold: return "hold";
  }
  return "?";
}

std::string_view to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::converged: return "converged";
    case TerminalStatus::budget_exhausted: return "budget-exhausted";
    case TerminalStatus::request_limit: return "request-limit";
  }
  return "?";
}

namespace {

Point centroid(std::span<const ManagedUser> users) {
  Point c;
  for (const auto& u : users) {
    c.x += u.location.x;
    c.y += u.location.y;
  }
  c.x /= static_cast<double>(users.size());
  c.y /= static_cast<double>(users.size());
  return c;
}

std::vector<Point> user_points(std::span<const ManagedUser> users) {
  std::vector<Point> out;
  out.reserve(users.size());
  for (const auto& u : users) {
    out.push_back(u.location);
  }
  return out;
}

NetworkLayout base_layout(const Scenario& sc, const DropInstance& drop) {
  NetworkLayout layout;
  layout.ap = sc.ap;
  layout.users = drop.users;
  layout.neighbors = neighbor_nodes(sc);
  return layout;
}

void place_extenders(NetworkLayout& layout, const Scenario& sc, std::span<const Point> where) {
  layout.extenders.clear();
  for (std::size_t e = 0; e < where.size(); ++e) {
    RadioNode node = sc.extenders.at(e).node;
    node.location = where[e];
    layout.extenders.push_back(std::move(node));
  }
}

// Lexicographic (min, mean) fitness; the mean only breaks ties.
struct Score {
  double min = -1.0;
  double mean = -1.0;
};

Score score_of(const PerceptionSnapshot& snap) { return {snap.min_fitness(), snap.mean_fitness()}; }

bool better(const Score& a, const Score& b) {
  return a.min > b.min || (a.min == b.min && a.mean > b.mean);
}

struct ExtenderAgent {
  KnowledgeBase kb;
  LearnedThroughputMap map;
  ExplorationState explore;
  enum class Pending { none, retain, revise } pending = Pending::retain;
  std::size_t revise_index = 0;
};

std::vector<std::size_t> users_of(const PerceptionSnapshot& snap, std::size_t e) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < snap.users.size(); ++u) {
    if (snap.users[u].serving_extender == e) {
      out.push_back(u);
    }
  }
  return out;
}

EpisodeLog hold_episode(const Scenario& sc, Algorithm algo, const DropInstance& drop,
                        std::span<const Point> placement) {
  EpisodeLog log;
  log.algorithm = algo;
  log.drop = drop.drop;
  log.seed = drop.seed;
  NetworkLayout layout = base_layout(sc, drop);
  place_extenders(layout, sc, placement);
  RequestRecord rec;
  rec.placement.assign(placement.begin(), placement.end());
  rec.snapshot = perceive(sc.env, layout, 0);
  rec.source = ActionSource::hold;
  log.requests.push_back(std::move(rec));
  log.status = TerminalStatus::converged;
  return log;
}

EpisodeLog run_ai_cbr(const Scenario& sc, const DropInstance& drop, const EpisodeOptions& opt) {
  const auto& plan = sc.env.plan;
  const auto& candidates = plan.candidates();
  const double step = plan.grid_step();
  const std::vector<Point> user_locs = user_points(drop.users);

  EpisodeLog log;
  log.algorithm = Algorithm::ai_cbr;
  log.drop = drop.drop;
  log.seed = drop.seed;

  NetworkLayout layout = base_layout(sc, drop);
  std::vector<Point> placement = drop.initial_extenders;
  place_extenders(layout, sc, placement);

  std::vector<ExtenderAgent> agents;
  for (const auto& ext : sc.extenders) {
    std::vector<double> prior_bh(candidates.size());
    std::vector<double> prior_fh(candidates.size(), 0.0);
    RadioNode probe = ext.node;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      prior_bh[i] = estimated_link_rate(sc.env, sc.ap, candidates[i]);
      probe.location = candidates[i];
      for (const auto& p : user_locs) {
        prior_fh[i] += estimated_link_rate(sc.env, probe, p);
      }
    }
    ExtenderAgent agent{
        .kb = KnowledgeBase(2 + 3 * sc.cbr.user_slots),
        .map = LearnedThroughputMap(candidates, std::move(prior_bh), std::move(prior_fh), step,
                                    sc.cbr.corridor_half_width_cells),
        .explore = {},
    };
    agent.explore.omega = sc.cbr.initial_omega;
    agents.push_back(std::move(agent));
  }

  ActionSource source = ActionSource::initial;
  Score best;
  Score previous;
  std::size_t best_request = 0;
  std::size_t unchanged = 0;  // consecutive requests with the same min fitness
  bool done = false;
  bool settle = false;

  for (std::size_t t = 0; t < opt.max_requests && !done; ++t) {
    RequestRecord rec;
    rec.request = t;
    rec.placement = placement;
    rec.snapshot = perceive(sc.env, layout, t);
    rec.source = source;
    rec.omega = agents.front().explore.omega;
    const auto& snap = rec.snapshot;

    for (std::size_t e = 0; e < agents.size(); ++e) {
      auto& agent = agents[e];
      const auto served = users_of(snap, e);
      std::vector<ManagedUser> served_users;
      std::vector<Point> served_locs;
      double served_demand = 0.0;
      double f = 1.0;
      for (auto u : served) {
        served_users.push_back(drop.users[u]);
        served_locs.push_back(drop.users[u].location);
        served_demand += drop.users[u].demand_mbps;
        f = std::min(f, snap.users[u].fitness);
      }
      const Problem problem =
          make_problem(sc.ap.location, served_users, sc.cbr.user_slots, sc.cbr.demand_normalizer);
      if (agent.pending == ExtenderAgent::Pending::retain) {
        agent.kb.retain({problem, Action{placement[e]}, f, t});
      } else if (agent.pending == ExtenderAgent::Pending::revise) {
        agent.kb.revise(agent.revise_index, f);
      }
      agent.pending = ExtenderAgent::Pending::none;

      const auto& st = snap.extenders[e];
      agent.map = update_backhaul(std::move(agent.map), placement[e], st.meas_backhaul,
                                  sc.ap.location);
      if (!served.empty()) {
        agent.map = update_fronthaul(std::move(agent.map), placement[e],
                                     st.meas_fronthaul_total(), served_locs, st.meas_backhaul,
                                     served_demand);
      }
      agent.explore.record(f);
    }

    const Score now = score_of(snap);
    if (better(now, best)) {
      best = now;
      best_request = t;
    }
    if (t > 0 && std::abs(now.min - previous.min) <= sc.cbr.stall_tolerance) {
      ++unchanged;
    } else {
      unchanged = 0;
    }
    previous = now;

    if (unsatisfied_users(snap).empty()) {
      log.status = TerminalStatus::converged;
      log.requests.push_back(std::move(rec));
      done = true;
      break;
    }
    if (unchanged >= sc.cbr.stall_requests) {
      log.status = TerminalStatus::converged;
      log.requests.push_back(std::move(rec));
      done = true;
      settle = true;
      break;
    }

    // reason and decide for every extender that serves an unsatisfied user
    source = ActionSource::hold;
    for (std::size_t e = 0; e < agents.size() && !done; ++e) {
      auto& agent = agents[e];
      const auto served = users_of(snap, e);
      const bool unhappy = std::any_of(served.begin(), served.end(), [&](std::size_t u) {
        return snap.users[u].e2e_rate < snap.users[u].demand;
      });
      if (!unhappy) {
        continue;
      }
      std::vector<ManagedUser> served_users;
      for (auto u : served) {
        served_users.push_back(drop.users[u]);
      }
      const Problem problem =
          make_problem(sc.ap.location, served_users, sc.cbr.user_slots, sc.cbr.demand_normalizer);
      const Retrieval hit = retrieve(agent.kb, problem);
      const Decision decision = decide(hit.distance, *hit.match, sc.cbr.thresholds);
      if (decision.kind == DecisionKind::reuse && !(decision.action.location == placement[e])) {
        placement[e] = decision.action.location;
        agent.pending = ExtenderAgent::Pending::revise;
        agent.revise_index = hit.index;
        source = ActionSource::reuse;
        ++log.repositions;
        continue;
      }
      // reusing the case we are standing on cannot help; compute a new action
      agent.explore.omega = update_omega(agent.explore);
      rec.omega = agent.explore.omega;
      const auto generated =
          generate_action(candidates, agent.map.backhaul(), agent.map.fronthaul(), agent.kb,
                          agent.explore.omega, step);
      rec.degenerate_action = rec.degenerate_action || generated.degenerate;
      if (opt.record_fields) {
        rec.field = generated.field;
      }
      if (opt.max_repositions && log.optimize_repositions >= *opt.max_repositions) {
        log.status = TerminalStatus::budget_exhausted;
        done = true;
        settle = true;
        break;
      }
      if (generated.action.location == placement[e]) {
        continue;
      }
      placement[e] = generated.action.location;
      agent.pending = ExtenderAgent::Pending::retain;
      source = ActionSource::optimize;
      ++log.repositions;
      ++log.optimize_repositions;
    }
    log.requests.push_back(std::move(rec));
    place_extenders(layout, sc, placement);
  }

  if (!done) {
    log.status = TerminalStatus::request_limit;
    settle = true;
  }

  if (settle) {
    const auto& target = log.requests.at(best_request).placement;
    if (target != log.requests.back().placement) {
      for (std::size_t e = 0; e < placement.size(); ++e) {
        if (!(target[e] == log.requests.back().placement[e])) {
          ++log.repositions;
        }
      }
      placement = target;
      place_extenders(layout, sc, placement);
      RequestRecord rec;
      rec.request = log.requests.size();
      rec.placement = placement;
      rec.snapshot = perceive(sc.env, layout, rec.request);
      rec.source = ActionSource::settle;
      rec.omega = agents.empty() ? 0.0 : agents.front().explore.omega;
      log.requests.push_back(std::move(rec));
    }
  }

  for (auto& agent : agents) {
    log.knowledge_bases.push_back(std::move(agent.kb));
    log.learned_maps.push_back(std::move(agent.map));
  }
  return log;
}

}  // namespace

DropInstance make_drop(const Scenario& sc, std::uint64_t master_seed, std::size_t drop) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(drop & 0xffffffffu),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(drop) >> 32)};
  std::mt19937_64 rng(seq);
  DropInstance out;
  out.drop = drop;
  out.seed = rng();
  std::mt19937_64 draw(out.seed);

  const auto& plan = sc.env.plan;
  // managed users live where the extender may go: the managed home
  const Rect area = plan.placement_area();
  std::uniform_real_distribution<double> ux(area.min.x, area.max.x);
  std::uniform_real_distribution<double> uy(area.min.y, area.max.y);
  out.users = sc.users;
  if (sc.resample_users) {
    for (auto& u : out.users) {
      const double x = ux(draw);
      const double y = uy(draw);
      u.location = {x, y};
    }
  }
  const auto& candidates = plan.candidates();
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  for (const auto& ext : sc.extenders) {
    switch (ext.initial) {
      case InitialPlacement::fixed:
        out.initial_extenders.push_back(candidates[plan.nearest_candidate(ext.node.location)]);
        break;
      case InitialPlacement::midway:
        out.initial_extenders.push_back(candidates[plan.nearest_candidate(
            midpoint(sc.ap.location, centroid(out.users)))]);
        break;
      case InitialPlacement::random:
        out.initial_extenders.push_back(candidates[pick(draw)]);
        break;
    }
  }
  return out;
}

EpisodeOptions episode_options(const Scenario& sc) {
  return {.max_repositions = sc.max_repositions, .max_requests = sc.max_requests};
}

std::size_t coverage_max_place(const Scenario& sc, std::span<const ManagedUser> users,
                               std::span<const std::size_t> excluded) {
  const auto& candidates = sc.env.plan.candidates();
  const std::vector<Point> locs = user_points(users);
  const double tx = sc.extenders.empty() ? 20.0 : sc.extenders.front().node.tx_power_dbm;
  std::size_t best = candidates.size();
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), i) != excluded.end()) {
      continue;
    }
    const double v = coverage_value(sc.env, candidates[i], sc.ap, tx, locs);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == candidates.size()) {
    throw Error("no candidate left for coverage placement");
  }
  return best;
}

LocationProblem make_location_problem(const Scenario& sc, const DropInstance& drop,
                                      std::size_t horizon) {
  LocationProblem problem;
  const auto& candidates = sc.env.plan.candidates();
  problem.candidate_count = candidates.size();
  problem.horizon = horizon;
  problem.max_extenders = sc.extenders.size();
  std::vector<double> demands;
  for (const auto& u : drop.users) {
    demands.push_back(u.demand_mbps);
  }
  problem.demands.assign(horizon, demands);
  problem.oracle = [&sc, drop, &candidates](std::size_t,
                                            std::span<const std::size_t> cells) {
    NetworkLayout layout = base_layout(sc, drop);
    std::vector<Point> where;
    for (auto c : cells) {
      where.push_back(candidates[c]);
    }
    place_extenders(layout, sc, where);
    const auto snap = perceive(sc.env, layout);
    PlacementReport report;
    for (std::size_t e = 0; e < snap.extenders.size(); ++e) {
      const auto& st = snap.extenders[e];
      report.extenders.push_back({cells[e], st.est_backhaul, st.meas_backhaul, st.backhaul_share,
                                  st.est_fronthaul_total()});
    }
    for (const auto& u : snap.users) {
      report.association.push_back(u.serving_extender);
      report.user_rates.push_back(u.e2e_rate);
    }
    return report;
  };
  return problem;
}

bool drop_feasible(const Scenario& sc, const DropInstance& drop) {
  return exhaustive_solve(make_location_problem(sc, drop)).feasible;
}

EpisodeLog run_episode(const Scenario& sc, Algorithm algo, const DropInstance& drop,
                       const EpisodeOptions& options) {
  if (sc.extenders.empty() && algo != Algorithm::ap_only) {
    throw Error("scenario has no managed extender");
  }
  switch (algo) {
    case Algorithm::ai_cbr:
      return run_ai_cbr(sc, drop, options);
    case Algorithm::ap_only:
      return hold_episode(sc, algo, drop, {});
    case Algorithm::coverage_max: {
      const auto& candidates = sc.env.plan.candidates();
      std::vector<std::size_t> used;
      std::vector<Point> where;
      for (std::size_t e = 0; e < sc.extenders.size(); ++e) {
        used.push_back(coverage_max_place(sc, drop.users, used));
        where.push_back(candidates[used.back()]);
      }
      return hold_episode(sc, algo, drop, where);
    }
    case Algorithm::oracle: {
      const auto result = exhaustive_solve(make_location_problem(sc, drop));
      const auto& candidates = sc.env.plan.candidates();
      std::vector<Point> where;
      for (auto c : result.placements.front()) {
        where.push_back(candidates[c]);
      }
      auto log = hold_episode(sc, algo, drop, where);
      if (!result.feasible) {
        spdlog::debug("drop {}: no placement meets every demand", drop.drop);
      }
      return log;
    }
  }
  throw Error("unhandled algorithm");
}

}  // namespace selfdeploy
