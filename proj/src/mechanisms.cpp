#include "optassign/mechanisms.hpp"

#include <algorithm>

#include "optassign/lapsolve.hpp"
#include "optassign/rng.hpp"

namespace optassign {

namespace {

void require_strict(const Instance& instance, const char* mechanism) {
  for (const Student& student : instance.students())
    for (const auto& group : student.preferences.groups)
      if (group.size() > 1)
        throw Error(ErrorCode::invalid_instance,
                    std::string(mechanism) + " needs strict preferences; student '" +
                        student.id + "' has a tie");
}

std::vector<std::size_t> lottery_indices(const Instance& instance, const Lottery& lottery) {
  if (lottery.order.size() != instance.n_students())
    throw Error(ErrorCode::invalid_instance, "lottery does not cover all students");
  std::vector<std::size_t> order;
  order.reserve(lottery.order.size());
  std::vector<char> seen(instance.n_students(), 0);
  for (const StudentId& id : lottery.order) {
    std::size_t s = instance.student_index(id);
    if (seen[s])
      throw Error(ErrorCode::invalid_instance, "lottery lists student '" + id + "' twice");
    seen[s] = 1;
    order.push_back(s);
  }
  return order;
}

}  // namespace

VacantSeatTable expand_vacant_seats(const Instance& instance) {
  VacantSeatTable table;
  table.seat_to_school.reserve(instance.total_capacity());
  for (std::size_t h = 0; h < instance.n_schools(); ++h)
    for (int seat = 0; seat < instance.schools()[h].capacity; ++seat)
      table.seat_to_school.push_back(h);
  return table;
}

Lottery draw_lottery(const Instance& instance, std::uint64_t seed) {
  Lottery lottery;
  lottery.seed = seed;
  std::vector<std::size_t> perm = seeded_permutation(instance.n_students(), seed);
  lottery.order.reserve(perm.size());
  for (std::size_t s : perm) lottery.order.push_back(instance.students()[s].id);
  return lottery;
}

Instance tiebreak_preferences(const Instance& instance, const Lottery& lottery) {
  std::vector<Student> students;
  students.reserve(instance.n_students());
  for (const Student& student : instance.students()) {
    std::mt19937_64 engine(mix_seed(lottery.seed, student.id));
    Student strict;
    strict.id = student.id;
    for (std::vector<SchoolId> group : student.preferences.groups) {
      portable_shuffle(group, engine);
      for (SchoolId& id : group)
        strict.preferences.groups.push_back({std::move(id)});
    }
    students.push_back(std::move(strict));
  }
  // Preserve whatever completeness the input had; singleton groups cannot
  // introduce new unranked pairs.
  return Instance(instance.schools(), std::move(students), Completeness::allow_partial);
}

Matching student_optimal_matching(const Instance& instance, WeightKind weight_kind,
                                  std::uint64_t seed) {
  Matching matching;
  if (instance.n_students() == 0) return matching;
  RankMatrix ranks = build_rank_matrix(instance);
  WeightFn fn = WeightFn::make(weight_kind, ranks.z(), instance.n_students());
  WeightMatrix weights = build_weight_matrix(std::move(ranks), std::move(fn));
  Assignment assignment = max_weight_assignment(weights, seed);
  for (std::size_t s = 0; s < instance.n_students(); ++s) {
    std::size_t school = weights.ranks().seat_school(assignment.row_to_col[s]);
    matching.pairs.emplace(instance.students()[s].id, instance.schools()[school].id);
  }
  return matching;
}

Matching baseline_serial_dictatorship(const Instance& strict_instance, const Lottery& lottery) {
  require_strict(strict_instance, "serial dictatorship");
  std::vector<std::size_t> order = lottery_indices(strict_instance, lottery);
  std::vector<int> free_seats;
  free_seats.reserve(strict_instance.n_schools());
  for (const School& school : strict_instance.schools()) free_seats.push_back(school.capacity);

  Matching matching;
  for (std::size_t s : order) {
    const Student& student = strict_instance.students()[s];
    const School* taken = nullptr;
    for (const auto& group : student.preferences.groups) {
      std::size_t h = strict_instance.school_index(group.front());
      if (free_seats[h] > 0) {
        --free_seats[h];
        taken = &strict_instance.schools()[h];
        break;
      }
    }
    if (!taken)
      throw Error(ErrorCode::incomplete_preferences,
                  "student '" + student.id + "' exhausted their list with seats remaining");
    matching.pairs.emplace(student.id, taken->id);
  }
  return matching;
}

Matching baseline_boston_rounds(const Instance& strict_instance, const Lottery& lottery) {
  require_strict(strict_instance, "boston rounds");
  std::vector<std::size_t> order = lottery_indices(strict_instance, lottery);
  std::vector<int> free_seats;
  free_seats.reserve(strict_instance.n_schools());
  for (const School& school : strict_instance.schools()) free_seats.push_back(school.capacity);

  // position in the lottery, used to admit applicants in lottery order
  std::vector<std::size_t> priority(strict_instance.n_students());
  for (std::size_t pos = 0; pos < order.size(); ++pos) priority[order[pos]] = pos;

  Matching matching;
  std::vector<std::size_t> unassigned(order);  // kept sorted by lottery position
  std::vector<std::vector<std::size_t>> applicants(strict_instance.n_schools());
  for (std::size_t round = 0; !unassigned.empty(); ++round) {
    for (auto& list : applicants) list.clear();
    for (std::size_t s : unassigned) {
      const auto& groups = strict_instance.students()[s].preferences.groups;
      if (round >= groups.size())
        throw Error(ErrorCode::incomplete_preferences,
                    "student '" + strict_instance.students()[s].id +
                        "' exhausted their list with seats remaining");
      applicants[strict_instance.school_index(groups[round].front())].push_back(s);
    }
    std::vector<std::size_t> still_unassigned;
    for (std::size_t h = 0; h < applicants.size(); ++h) {
      // Applicants arrive in lottery order because `unassigned` is ordered;
      // admit from the front until the school is full.
      auto& list = applicants[h];
      std::size_t admitted = std::min<std::size_t>(list.size(),
                                                   static_cast<std::size_t>(free_seats[h]));
      for (std::size_t k = 0; k < admitted; ++k) {
        matching.pairs.emplace(strict_instance.students()[list[k]].id,
                               strict_instance.schools()[h].id);
        --free_seats[h];
      }
      still_unassigned.insert(still_unassigned.end(), list.begin() + admitted, list.end());
    }
    std::sort(still_unassigned.begin(), still_unassigned.end(),
              [&](std::size_t a, std::size_t b) { return priority[a] < priority[b]; });
    unassigned = std::move(still_unassigned);
  }
  return matching;
}

}  // namespace optassign
