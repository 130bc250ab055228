#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "selfdeploy/geometry.hpp"
#include "selfdeploy/net_state.hpp"

namespace selfdeploy {

inline constexpr double kDefaultDemandNormalizer = 100.0;  // Mbps per unit

// Fixed-length description of an extender's situation:
// (ap.x, ap.y, then x, y, demand / normalizer per user slot).
struct Problem {
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }
  friend bool operator==(const Problem&, const Problem&) = default;
};

// Users are sorted by id and packed into slot_count slots; unused slots stay
// zero. Throws when there are more users than slots.
Problem make_problem(Point ap, std::span<const ManagedUser> users, std::size_t slot_count,
                     double demand_normalizer = kDefaultDemandNormalizer);

double match_distance(const Problem& a, const Problem& b);

struct Action {
  Point location;
  friend bool operator==(const Action&, const Action&) = default;
};

struct Case {
  Problem problem;
  Action action;
  double fitness = 0.0;
  std::size_t request_index = 0;
};

struct DecisionThresholds {
  double max_match = 2.0;    // reuse only below this distance
  double min_fitness = 0.8;  // and only above this fitness
};

// Append-only case memory of one extender. Only fitness values are revised.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  explicit KnowledgeBase(std::size_t dimension) : dimension_(dimension) {}

  // Throws on a dimension mismatch; the first case fixes the dimension of an
  // unsized base.
  std::size_t retain(Case c);
  // Throws on a bad index or a fitness outside [0, 1].
  void revise(std::size_t index, double new_fitness);

  const std::vector<Case>& cases() const { return cases_; }
  const Case& at(std::size_t index) const { return cases_.at(index); }
  std::size_t size() const { return cases_.size(); }
  bool empty() const { return cases_.empty(); }
  std::size_t dimension() const { return dimension_; }

 private:
  std::size_t dimension_ = 0;
  std::vector<Case> cases_;
};

struct Retrieval {
  std::size_t index = 0;
  double distance = 0.0;
  const Case* match = nullptr;
};

// Nearest stored problem by Euclidean distance, ties to the lowest index.
// Throws "no cases" on an empty base.
Retrieval retrieve(const KnowledgeBase& kb, const Problem& current);

enum class DecisionKind { reuse, compute_new };

struct Decision {
  DecisionKind kind = DecisionKind::compute_new;
  Action action;  // meaningful for reuse only
};

Decision decide(double distance, const Case& match, const DecisionThresholds& thresholds);

// Text persistence: a version header line, then one case per line.
void save_knowledge_base(const KnowledgeBase& kb, std::ostream& out);
KnowledgeBase load_knowledge_base(std::istream& in);
void save_knowledge_base(const KnowledgeBase& kb, const std::filesystem::path& path);
KnowledgeBase load_knowledge_base(const std::filesystem::path& path);

}  // namespace selfdeploy
