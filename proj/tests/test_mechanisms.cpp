#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <optional>
#include <random>
#include <set>

#include "optassign/mechanisms.hpp"
#include "optassign/verify.hpp"
#include "test_util.hpp"

using namespace optassign;

namespace {

template <class F>
std::optional<ErrorCode> thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

Lottery fixed_lottery(std::initializer_list<const char*> ids, std::uint64_t seed = 0) {
  Lottery lottery;
  lottery.seed = seed;
  for (const char* id : ids) lottery.order.emplace_back(id);
  return lottery;
}

// The tie-demo instance with b's and c's first groups already broken
// b: A > B, c: B > C; the order Boston outcomes are worked out for.
Instance tiebroken_demo() {
  return Instance(
      {{"A", 1}, {"B", 1}, {"C", 1}},
      {{"a", {{{"A"}, {"B"}, {"C"}}}},
       {"b", {{{"A"}, {"B"}, {"C"}}}},
       {"c", {{{"B"}, {"C"}, {"A"}}}}});
}

std::map<SchoolId, int> occupancy(const Matching& matching) {
  std::map<SchoolId, int> counts;
  for (const auto& [student, school] : matching.pairs) ++counts[school];
  return counts;
}

}  // namespace

TEST_CASE("vacant-seat expansion follows declaration order") {
  Instance instance({{"A", 2}, {"B", 1}},
                    {{"s1", {{{"A"}, {"B"}}}}, {"s2", {{{"B"}, {"A"}}}}});
  VacantSeatTable table = expand_vacant_seats(instance);
  CHECK(table.seat_to_school == std::vector<std::size_t>{0, 0, 1});
}

TEST_CASE("lottery draws are deterministic permutations of the students") {
  Instance instance = testutil::tie_demo_instance();
  Lottery first = draw_lottery(instance, 42);
  CHECK(first.seed == 42);
  CHECK(first.order == draw_lottery(instance, 42).order);
  CHECK(std::set<StudentId>(first.order.begin(), first.order.end()) ==
        std::set<StudentId>{"a", "b", "c"});
  std::set<std::vector<StudentId>> seen;
  for (std::uint64_t seed = 0; seed < 30; ++seed)
    seen.insert(draw_lottery(instance, seed).order);
  CHECK(seen.size() > 1);  // the seed actually matters
}

TEST_CASE("tie breaking leaves strict lists untouched") {
  Instance strict = testutil::strict_demo_instance();
  for (std::uint64_t seed : {0, 7, 123}) {
    Instance broken = tiebreak_preferences(strict, draw_lottery(strict, seed));
    for (std::size_t s = 0; s < strict.n_students(); ++s)
      CHECK(broken.students()[s].preferences.groups == strict.students()[s].preferences.groups);
  }
}

TEST_CASE("tie breaking splits groups into singletons and covers both orders") {
  Instance tied = testutil::tie_demo_instance();
  bool b_ab = false, b_ba = false, c_bc = false, c_cb = false;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Instance broken = tiebreak_preferences(tied, draw_lottery(tied, seed));
    for (const Student& student : broken.students()) {
      CHECK(student.preferences.groups.size() == 3);
      for (const auto& group : student.preferences.groups) CHECK(group.size() == 1);
    }
    const auto& b = broken.students()[1].preferences.groups;
    const auto& c = broken.students()[2].preferences.groups;
    // a's strict list is never disturbed
    CHECK(broken.students()[0].preferences.groups ==
          std::vector<std::vector<SchoolId>>{{"A"}, {"B"}, {"C"}});
    // the broken first pair stays ahead of the old second group
    CHECK(b[2] == std::vector<SchoolId>{"C"});
    CHECK(c[2] == std::vector<SchoolId>{"A"});
    if (b[0] == std::vector<SchoolId>{"A"}) b_ab = true;
    if (b[0] == std::vector<SchoolId>{"B"}) b_ba = true;
    if (c[0] == std::vector<SchoolId>{"B"}) c_bc = true;
    if (c[0] == std::vector<SchoolId>{"C"}) c_cb = true;
  }
  CHECK(b_ab);
  CHECK(b_ba);
  CHECK(c_bc);
  CHECK(c_cb);
}

TEST_CASE("tie breaking does not depend on student declaration order") {
  Instance forward = testutil::tie_demo_instance();
  Instance reversed(
      {{"A", 1}, {"B", 1}, {"C", 1}},
      {{"c", {{{"B", "C"}, {"A"}}}},
       {"b", {{{"A", "B"}, {"C"}}}},
       {"a", {{{"A"}, {"B"}, {"C"}}}}});
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    Instance broken_fwd = tiebreak_preferences(forward, draw_lottery(forward, seed));
    Instance broken_rev = tiebreak_preferences(reversed, draw_lottery(reversed, seed));
    for (const Student& student : broken_fwd.students()) {
      std::size_t r = broken_rev.student_index(student.id);
      CHECK(student.preferences.groups == broken_rev.students()[r].preferences.groups);
    }
  }
}

TEST_CASE("student-optimal matching on the worked instance") {
  Instance instance = testutil::tie_demo_instance();
  Matching expected = testutil::make_matching({{"a", "A"}, {"b", "B"}, {"c", "C"}});
  for (WeightKind kind : {WeightKind::exp_minus_one, WeightKind::power_base}) {
    for (std::uint64_t seed : {0, 1, 2, 7, 99}) {
      Matching matching = student_optimal_matching(instance, kind, seed);
      CHECK(matching.pairs == expected.pairs);
      UtilityProfile profile = utility_profile(instance, matching);
      CHECK(profile.counts == std::vector<std::uint32_t>{3, 0, 0});
    }
  }
}

TEST_CASE("student-optimal collapses seats of multi-capacity schools") {
  Instance instance({{"A", 2}, {"B", 1}},
                    {{"s1", {{{"A"}, {"B"}}}},
                     {"s2", {{{"A"}, {"B"}}}},
                     {"s3", {{{"A"}, {"B"}}}}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matching matching = student_optimal_matching(instance, WeightKind::exp_minus_one, seed);
    CHECK(occupancy(matching) == std::map<SchoolId, int>{{"A", 2}, {"B", 1}});
    CHECK(utility_profile(instance, matching).counts == std::vector<std::uint32_t>{2, 1});
    CHECK(is_weakly_stable(instance, matching).stable);
  }
}

TEST_CASE("student-optimal handles an empty student list") {
  Instance instance({{"A", 1}}, {});
  CHECK(student_optimal_matching(instance, WeightKind::exp_minus_one, 0).pairs.empty());
}

TEST_CASE("serial dictatorship on the strict instance") {
  Instance instance = testutil::strict_demo_instance();
  Matching matching = baseline_serial_dictatorship(instance, fixed_lottery({"a", "b", "c"}));
  CHECK(matching.pairs == testutil::make_matching({{"a", "A"}, {"b", "B"}, {"c", "C"}}).pairs);
  // later dictators pick from what is left
  Matching reversed = baseline_serial_dictatorship(instance, fixed_lottery({"c", "b", "a"}));
  CHECK(reversed.pairs == testutil::make_matching({{"a", "C"}, {"b", "A"}, {"c", "B"}}).pairs);
}

TEST_CASE("boston rounds reproduce both worked outcomes") {
  Instance instance = tiebroken_demo();
  // a ahead of b: A admits a in round 1, b falls through to C
  Matching ab = baseline_boston_rounds(instance, fixed_lottery({"a", "b", "c"}));
  CHECK(ab.pairs == testutil::make_matching({{"a", "A"}, {"b", "C"}, {"c", "B"}}).pairs);
  // b ahead of a: A admits b, a is rejected at B in round 2 and lands at C
  Matching ba = baseline_boston_rounds(instance, fixed_lottery({"b", "a", "c"}));
  CHECK(ba.pairs == testutil::make_matching({{"a", "C"}, {"b", "A"}, {"c", "B"}}).pairs);
  // measured against the tie instance the two outcomes give the worked profiles
  Instance tied = testutil::tie_demo_instance();
  CHECK(utility_profile(tied, ab).counts == std::vector<std::uint32_t>{2, 1, 0});
  CHECK(utility_profile(tied, ba).counts == std::vector<std::uint32_t>{2, 0, 1});
}

TEST_CASE("boston admits in lottery order up to capacity") {
  Instance instance({{"A", 2}, {"B", 1}},
                    {{"s1", {{{"A"}, {"B"}}}},
                     {"s2", {{{"A"}, {"B"}}}},
                     {"s3", {{{"A"}, {"B"}}}}});
  Matching matching = baseline_boston_rounds(instance, fixed_lottery({"s3", "s1", "s2"}));
  CHECK(matching.pairs == testutil::make_matching({{"s1", "A"}, {"s2", "B"}, {"s3", "A"}}).pairs);
}

TEST_CASE("baselines require strict preferences and a full lottery") {
  Instance tied = testutil::tie_demo_instance();
  Lottery lottery = fixed_lottery({"a", "b", "c"});
  CHECK(thrown_code([&] { baseline_serial_dictatorship(tied, lottery); }) ==
        ErrorCode::invalid_instance);
  CHECK(thrown_code([&] { baseline_boston_rounds(tied, lottery); }) ==
        ErrorCode::invalid_instance);

  Instance strict = testutil::strict_demo_instance();
  CHECK(thrown_code([&] {
          baseline_serial_dictatorship(strict, fixed_lottery({"a", "b"}));
        }) == ErrorCode::invalid_instance);
  CHECK(thrown_code([&] {
          baseline_serial_dictatorship(strict, fixed_lottery({"a", "b", "b"}));
        }) == ErrorCode::invalid_instance);
  CHECK(thrown_code([&] {
          baseline_boston_rounds(strict, fixed_lottery({"a", "b", "x"}));
        }) == ErrorCode::unknown_id);
}

TEST_CASE("baselines report exhausted partial lists") {
  Instance partial({{"A", 1}, {"B", 1}},
                   {{"s1", {{{"A"}}}}, {"s2", {{{"A"}, {"B"}}}}},
                   Completeness::allow_partial);
  Lottery lottery = fixed_lottery({"s2", "s1"});
  CHECK(thrown_code([&] { baseline_serial_dictatorship(partial, lottery); }) ==
        ErrorCode::incomplete_preferences);
  CHECK(thrown_code([&] { baseline_boston_rounds(partial, lottery); }) ==
        ErrorCode::incomplete_preferences);
}

TEST_CASE("student-optimal output is weakly stable on random instances") {
  std::mt19937_64 engine(2024);
  for (int round = 0; round < 200; ++round) {
    std::size_t n_students = 2 + engine() % 15;
    std::size_t n_schools = 1 + engine() % 5;
    Instance instance = testutil::random_instance(engine, n_students, n_schools, 4, 3);
    for (WeightKind kind : {WeightKind::exp_minus_one, WeightKind::power_base}) {
      Matching matching = student_optimal_matching(instance, kind, engine());
      validate_matching(instance, matching);
      StabilityResult result = is_weakly_stable(instance, matching);
      CHECK(result.stable);
      if (!result.stable) {
        CAPTURE(instance.to_json_text());
        for (const BlockingPair& bp : result.blocking) CAPTURE(bp.student + "->" + bp.school);
      }
    }
  }
}

TEST_CASE("student-optimal profile is seed-invariant") {
  std::mt19937_64 engine(31337);
  for (int round = 0; round < 50; ++round) {
    std::size_t n_students = 2 + engine() % 10;
    std::size_t n_schools = 1 + engine() % 4;
    Instance instance = testutil::random_instance(engine, n_students, n_schools, 3, 2);
    UtilityProfile reference =
        utility_profile(instance, student_optimal_matching(instance, WeightKind::exp_minus_one, 0));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      UtilityProfile profile = utility_profile(
          instance, student_optimal_matching(instance, WeightKind::exp_minus_one, seed));
      CHECK(compare_profiles(profile, reference) == std::strong_ordering::equal);
    }
    // and the two weight functions agree on the profile
    UtilityProfile pow = utility_profile(
        instance, student_optimal_matching(instance, WeightKind::power_base, 0));
    CHECK(compare_profiles(pow, reference) == std::strong_ordering::equal);
  }
}

TEST_CASE("student-optimal weakly dominates both baselines") {
  std::mt19937_64 engine(777);
  for (int round = 0; round < 100; ++round) {
    std::size_t n_students = 2 + engine() % 12;
    std::size_t n_schools = 1 + engine() % 4;
    Instance instance = testutil::random_instance(engine, n_students, n_schools, 4, 3);
    std::uint64_t seed = engine();
    UtilityProfile best = utility_profile(
        instance, student_optimal_matching(instance, WeightKind::exp_minus_one, seed));
    Lottery lottery = draw_lottery(instance, seed);
    Instance strict = tiebreak_preferences(instance, lottery);
    for (const Matching& baseline : {baseline_serial_dictatorship(strict, lottery),
                                     baseline_boston_rounds(strict, lottery)}) {
      validate_matching(instance, baseline);
      UtilityProfile profile = utility_profile(instance, baseline);
      CHECK(compare_profiles(best, profile) >= 0);
    }
  }
}

TEST_CASE("every mechanism respects capacities and assigns everyone once") {
  std::mt19937_64 engine(4242);
  for (int round = 0; round < 60; ++round) {
    std::size_t n_students = 2 + engine() % 12;
    std::size_t n_schools = 1 + engine() % 4;
    Instance instance = testutil::random_instance(engine, n_students, n_schools, 4, 2);
    std::uint64_t seed = engine();
    Lottery lottery = draw_lottery(instance, seed);
    Instance strict = tiebreak_preferences(instance, lottery);
    for (const Matching& matching :
         {student_optimal_matching(instance, WeightKind::exp_minus_one, seed),
          baseline_serial_dictatorship(strict, lottery),
          baseline_boston_rounds(strict, lottery)}) {
      CHECK(matching.pairs.size() == n_students);
      std::map<SchoolId, int> counts = occupancy(matching);
      for (const School& school : instance.schools()) {
        auto it = counts.find(school.id);
        if (it != counts.end()) CHECK(it->second <= school.capacity);
      }
    }
  }
}
