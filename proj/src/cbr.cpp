#include "selfdeploy/cbr.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "selfdeploy/error.hpp"

namespace selfdeploy {

namespace {

constexpr const char* kKbMagic = "selfdeploy-kb";
constexpr int kKbVersion = 1;

}  // namespace

Problem make_problem(Point ap, std::span<const ManagedUser> users, std::size_t slot_count,
                     double demand_normalizer) {
  if (users.size() > slot_count) {
    throw Error(fmt::format("{} users do not fit in {} problem slots", users.size(), slot_count));
  }
  if (!(demand_normalizer > 0.0)) {
    throw Error("demand normalizer must be positive");
  }
  std::vector<const ManagedUser*> sorted;
  sorted.reserve(users.size());
  for (const auto& u : users) {
    sorted.push_back(&u);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ManagedUser* a, const ManagedUser* b) { return a->id < b->id; });

  Problem p;
  p.values.assign(2 + 3 * slot_count, 0.0);
  p.values[0] = ap.x;
  p.values[1] = ap.y;
  for (std::size_t s = 0; s < sorted.size(); ++s) {
    p.values[2 + 3 * s] = sorted[s]->location.x;
    p.values[3 + 3 * s] = sorted[s]->location.y;
    p.values[4 + 3 * s] = sorted[s]->demand_mbps / demand_normalizer;
  }
  return p;
}

double match_distance(const Problem& a, const Problem& b) {
  if (a.dimension() != b.dimension()) {
    throw Error("problem dimensions differ");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < a.dimension(); ++j) {
    const double d = a.values[j] - b.values[j];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::size_t KnowledgeBase::retain(Case c) {
  if (dimension_ == 0 && cases_.empty()) {
    dimension_ = c.problem.dimension();
  }
  if (c.problem.dimension() != dimension_) {
    throw Error(fmt::format("case dimension {} does not match knowledge base dimension {}",
                            c.problem.dimension(), dimension_));
  }
  if (!(c.fitness >= 0.0 && c.fitness <= 1.0)) {
    throw Error("case fitness must lie in [0, 1]");
  }
  cases_.push_back(std::move(c));
  return cases_.size() - 1;
}

void KnowledgeBase::revise(std::size_t index, double new_fitness) {
  if (index >= cases_.size()) {
    throw Error(fmt::format("case index {} out of range ({} cases)", index, cases_.size()));
  }
  if (!(new_fitness >= 0.0 && new_fitness <= 1.0)) {
    throw Error("revised fitness must lie in [0, 1]");
  }
  cases_[index].fitness = new_fitness;
}

Retrieval retrieve(const KnowledgeBase& kb, const Problem& current) {
  if (kb.empty()) {
    throw Error("no cases");
  }
  Retrieval best;
  best.distance = match_distance(kb.at(0).problem, current);
  best.match = &kb.at(0);
  for (std::size_t k = 1; k < kb.size(); ++k) {
    const double d = match_distance(kb.at(k).problem, current);
    if (d < best.distance) {
      best.index = k;
      best.distance = d;
      best.match = &kb.at(k);
    }
  }
  return best;
}

Decision decide(double distance, const Case& match, const DecisionThresholds& thresholds) {
  if (distance < thresholds.max_match && match.fitness > thresholds.min_fitness) {
    return {DecisionKind::reuse, match.action};
  }
  return {};
}

void save_knowledge_base(const KnowledgeBase& kb, std::ostream& out) {
  out << fmt::format("{} v{} dimension={} cases={}\n", kKbMagic, kKbVersion, kb.dimension(),
                     kb.size());
  out << "# request_index fitness action_x action_y problem...\n";
  for (const auto& c : kb.cases()) {
    std::string line = fmt::format("{} {} {} {}", c.request_index, c.fitness,
                                   c.action.location.x, c.action.location.y);
    for (double v : c.problem.values) {
      line += fmt::format(" {}", v);
    }
    out << line << '\n';
  }
}

KnowledgeBase load_knowledge_base(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw Error("knowledge base: missing header");
  }
  std::istringstream hs(header);
  std::string magic, version, dim_field, count_field;
  hs >> magic >> version >> dim_field >> count_field;
  if (magic != kKbMagic || version != fmt::format("v{}", kKbVersion) ||
      dim_field.rfind("dimension=", 0) != 0) {
    throw Error("knowledge base: unrecognized header '" + header + "'");
  }
  const std::size_t dimension = std::stoul(dim_field.substr(10));
  KnowledgeBase kb(dimension);

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream ls(line);
    Case c;
    if (!(ls >> c.request_index >> c.fitness >> c.action.location.x >> c.action.location.y)) {
      throw Error(fmt::format("knowledge base line {}: malformed record", line_no));
    }
    double v = 0.0;
    while (ls >> v) {
      c.problem.values.push_back(v);
    }
    if (!ls.eof()) {
      throw Error(fmt::format("knowledge base line {}: malformed problem vector", line_no));
    }
    try {
      kb.retain(std::move(c));
    } catch (const Error& e) {
      throw Error(fmt::format("knowledge base line {}: {}", line_no, e.what()));
    }
  }
  return kb;
}

void save_knowledge_base(const KnowledgeBase& kb, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  save_knowledge_base(kb, out);
}

KnowledgeBase load_knowledge_base(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot read " + path.string());
  }
  return load_knowledge_base(in);
}

}  // namespace selfdeploy
