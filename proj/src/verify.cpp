#include "optassign/verify.hpp"

#include <algorithm>

namespace optassign {

StabilityResult is_weakly_stable(const Instance& instance, const Matching& matching) {
  validate_matching(instance, matching);

  std::vector<std::size_t> assigned(instance.n_students());
  std::vector<std::vector<std::size_t>> occupants(instance.n_schools());
  for (const auto& [student, school] : matching.pairs) {
    std::size_t s = instance.student_index(student);
    std::size_t h = instance.school_index(school);
    assigned[s] = h;
    occupants[h].push_back(s);
  }

  StabilityResult result;
  for (const auto& [student_id, school_id] : matching.pairs) {
    std::size_t s = instance.student_index(student_id);
    std::uint16_t current = instance.rank_or_zero(s, assigned[s]);
    if (current == 0)
      throw Error(ErrorCode::unranked_pair,
                  "matched pair (" + student_id + ", " + school_id + ") is unranked");
    for (std::size_t h = 0; h < instance.n_schools(); ++h) {
      std::uint16_t r = instance.rank_or_zero(s, h);
      if (r == 0 || r >= current) continue;  // not a strict improvement for the student
      if (occupants[h].size() < static_cast<std::size_t>(instance.schools()[h].capacity)) {
        result.blocking.push_back({student_id, instance.schools()[h].id, std::nullopt});
        continue;
      }
      // Full school: it prefers s over an occupant it ranks strictly worse.
      // Report the worst-ranked occupant, smallest id on ties.
      const std::size_t* worst = nullptr;
      std::uint16_t worst_rank = 0;
      for (const std::size_t& occupant : occupants[h]) {
        std::uint16_t or_ = instance.rank_or_zero(occupant, h);
        if (or_ > worst_rank ||
            (worst && or_ == worst_rank &&
             instance.students()[occupant].id < instance.students()[*worst].id)) {
          worst_rank = or_;
          worst = &occupant;
        }
      }
      if (worst_rank > r)
        result.blocking.push_back(
            {student_id, instance.schools()[h].id, instance.students()[*worst].id});
    }
  }
  std::sort(result.blocking.begin(), result.blocking.end(),
            [](const BlockingPair& a, const BlockingPair& b) {
              return std::tie(a.student, a.school) < std::tie(b.student, b.school);
            });
  result.stable = result.blocking.empty();
  return result;
}

namespace {

struct Enumerator {
  const Instance& instance;
  const std::function<bool(const Matching&)>& visit;
  std::vector<int> free_seats;
  std::vector<std::size_t> assigned;
  bool stopped = false;

  bool leaf() {
    Matching matching;
    for (std::size_t s = 0; s < instance.n_students(); ++s)
      matching.pairs.emplace(instance.students()[s].id,
                             instance.schools()[assigned[s]].id);
    return visit(matching);
  }

  void recurse(std::size_t s) {
    if (stopped) return;
    if (s == instance.n_students()) {
      if (!leaf()) stopped = true;
      return;
    }
    for (std::size_t h = 0; h < instance.n_schools(); ++h) {
      if (free_seats[h] == 0) continue;
      --free_seats[h];
      assigned[s] = h;
      recurse(s + 1);
      ++free_seats[h];
      if (stopped) return;
    }
  }
};

void check_enumeration_guard(const Instance& instance) {
  if (instance.total_capacity() > 9)
    throw Error(ErrorCode::instance_too_large,
                "matching enumeration is limited to 9 total seats, got " +
                    std::to_string(instance.total_capacity()));
}

}  // namespace

void enumerate_complete_matchings(const Instance& instance,
                                  const std::function<bool(const Matching&)>& visit) {
  check_enumeration_guard(instance);
  Enumerator enumerator{instance, visit,
                        std::vector<int>(instance.n_schools(), 0),
                        std::vector<std::size_t>(instance.n_students(), 0)};
  for (std::size_t h = 0; h < instance.n_schools(); ++h)
    enumerator.free_seats[h] = instance.schools()[h].capacity;
  enumerator.recurse(0);
}

OracleOptimum oracle_student_optimal(const Instance& instance) {
  check_enumeration_guard(instance);
  if (!instance.complete())
    throw Error(ErrorCode::incomplete_preferences,
                "the enumeration oracle needs complete preference lists");

  // Index-level enumeration, same order as enumerate_complete_matchings but
  // without materializing a Matching per leaf.
  const std::size_t n = instance.n_students();
  std::vector<int> free_seats(instance.n_schools());
  for (std::size_t h = 0; h < instance.n_schools(); ++h)
    free_seats[h] = instance.schools()[h].capacity;

  OracleOptimum best;
  best.profile.n_students = n;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(instance.z()), 0);
  std::vector<std::size_t> assigned(n, 0);
  std::vector<std::vector<std::size_t>> winners;
  bool any = false;

  auto recurse = [&](auto&& self, std::size_t s) -> void {
    if (s == n) {
      if (!any || counts > best.profile.counts) {
        any = true;
        best.profile.counts = counts;
        winners.clear();
      }
      if (counts == best.profile.counts) winners.push_back(assigned);
      return;
    }
    for (std::size_t h = 0; h < instance.n_schools(); ++h) {
      if (free_seats[h] == 0) continue;
      --free_seats[h];
      assigned[s] = h;
      std::size_t slot = static_cast<std::size_t>(instance.rank_or_zero(s, h)) - 1;
      ++counts[slot];
      self(self, s + 1);
      --counts[slot];
      ++free_seats[h];
    }
  };
  recurse(recurse, 0);

  for (const auto& assignment : winners) {
    Matching matching;
    for (std::size_t s = 0; s < n; ++s)
      matching.pairs.emplace(instance.students()[s].id,
                             instance.schools()[assignment[s]].id);
    best.witnesses.push_back(std::move(matching));
  }
  return best;
}

}  // namespace optassign
