#pragma once

// Core domain types: instances (students with tie-grouped preferences over
// schools with capacities), matchings, and the preference-utility profile.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "optassign/error.hpp"

namespace optassign {

using SchoolId = std::string;
using StudentId = std::string;

struct School {
  SchoolId id;
  int capacity = 1;
  bool operator==(const School&) const = default;
};

/// Ordered tie-groups in descending preference; schools inside one group are
/// equally preferred. The 1-based group index is the rank.
struct PreferenceList {
  std::vector<std::vector<SchoolId>> groups;
  bool operator==(const PreferenceList&) const = default;
};

struct Student {
  StudentId id;
  PreferenceList preferences;
  bool operator==(const Student&) const = default;
};

/// How to treat students whose preference list does not cover every school.
enum class Completeness {
  require_full,        // reject the instance (default)
  complete_with_tail,  // append the missing schools as one final tie-group
  allow_partial,       // keep unranked pairs; downstream consumers may reject
};

class Instance {
 public:
  Instance(std::vector<School> schools, std::vector<Student> students,
           Completeness policy = Completeness::require_full);

  static Instance from_json(const nlohmann::json& doc,
                            Completeness policy = Completeness::require_full);
  static Instance from_json_text(const std::string& text,
                                 Completeness policy = Completeness::require_full);
  nlohmann::ordered_json to_json() const;
  std::string to_json_text() const;

  const std::vector<School>& schools() const { return schools_; }
  const std::vector<Student>& students() const { return students_; }
  std::size_t n_schools() const { return schools_.size(); }
  std::size_t n_students() const { return students_.size(); }
  std::size_t total_capacity() const { return total_capacity_; }

  std::size_t school_index(const SchoolId& id) const;    // throws UNKNOWN_ID
  std::size_t student_index(const StudentId& id) const;  // throws UNKNOWN_ID

  /// Rank of (student, school) by position index, 0 when the pair is unranked.
  std::uint16_t rank_or_zero(std::size_t student, std::size_t school) const {
    return rank_table_[student * schools_.size() + school];
  }
  /// Largest rank appearing in any preference list.
  int z() const { return z_; }
  /// True when every student ranks every school.
  bool complete() const { return complete_; }

 private:
  std::vector<School> schools_;
  std::vector<Student> students_;
  std::unordered_map<std::string, std::size_t> school_index_;
  std::unordered_map<std::string, std::size_t> student_index_;
  std::vector<std::uint16_t> rank_table_;  // students x schools, 0 = unranked
  std::size_t total_capacity_ = 0;
  int z_ = 0;
  bool complete_ = true;
};

/// Rank of a school in a student's list: the 1-based index of the tie-group
/// containing it. Throws UNKNOWN_ID / UNRANKED_PAIR.
int rank(const Instance& instance, const StudentId& student, const SchoolId& school);

/// Largest rank over all (student, listed school) pairs.
int z_max(const Instance& instance);

/// Complete many-to-one assignment of students to schools.
struct Matching {
  std::map<StudentId, SchoolId> pairs;
  bool operator==(const Matching&) const = default;
};

/// Throws INVALID_MATCHING unless every student is matched exactly once, all
/// ids are known and no school exceeds its capacity.
void validate_matching(const Instance& instance, const Matching& matching);

/// Rank histogram of a matching: counts[k-1] = number of students matched at
/// rank k, for k in [1, z].
struct UtilityProfile {
  std::vector<std::uint32_t> counts;
  std::size_t n_students = 0;
  std::size_t z() const { return counts.size(); }
  bool operator==(const UtilityProfile&) const = default;
};

UtilityProfile utility_profile(const Instance& instance, const Matching& matching);

/// The profile rendered as the digits of the utility scalar in base
/// (n_students + 1), e.g. "300 (base 4)". Digits are space-separated when the
/// base exceeds 10, since a digit may then need more than one character.
std::string utility_scalar_digits(const UtilityProfile& profile);

/// Total order on profiles, identical to comparing the utility scalars.
/// Digits are bounded by n_students, so lexicographic comparison of the count
/// vectors equals numeric comparison in base (n_students + 1); no big-integer
/// arithmetic is needed. Throws PROFILE_SHAPE_MISMATCH when z or n differ.
std::strong_ordering compare_profiles(const UtilityProfile& a, const UtilityProfile& b);

/// One row of the matching CSV (`student_id,school_id,rank`).
struct MatchingRow {
  StudentId student;
  SchoolId school;
  int rank = 0;
};

/// Serializes a matching as CSV, one row per student sorted by student_id,
/// with ranks taken from the instance.
std::string write_matching_csv(const Instance& instance, const Matching& matching);

/// Parses the CSV produced by write_matching_csv. Throws PARSE_ERROR.
std::vector<MatchingRow> parse_matching_csv(const std::string& text);

/// Collects parsed rows into a Matching; duplicate students are rejected.
Matching to_matching(const std::vector<MatchingRow>& rows);

}  // namespace optassign
