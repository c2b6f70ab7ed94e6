#include "optassign/model.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace optassign {

namespace {

bool valid_id_token(const std::string& id) {
  if (id.empty()) return false;
  for (unsigned char c : id) {
    if (c == ',' || std::isspace(c)) return false;
  }
  return true;
}

}  // namespace

Instance::Instance(std::vector<School> schools, std::vector<Student> students,
                   Completeness policy)
    : schools_(std::move(schools)), students_(std::move(students)) {
  for (std::size_t h = 0; h < schools_.size(); ++h) {
    const School& school = schools_[h];
    if (!valid_id_token(school.id))
      throw Error(ErrorCode::invalid_instance, "bad school id '" + school.id + "'");
    if (school.capacity < 1)
      throw Error(ErrorCode::invalid_instance,
                  "school '" + school.id + "' must have capacity >= 1");
    if (!school_index_.emplace(school.id, h).second)
      throw Error(ErrorCode::invalid_instance, "duplicate school id '" + school.id + "'");
    total_capacity_ += static_cast<std::size_t>(school.capacity);
  }
  if (students_.size() > total_capacity_)
    throw Error(ErrorCode::invalid_instance,
                "more students than seats: " + std::to_string(students_.size()) + " > " +
                    std::to_string(total_capacity_));

  rank_table_.assign(students_.size() * schools_.size(), 0);
  for (std::size_t s = 0; s < students_.size(); ++s) {
    Student& student = students_[s];
    if (!valid_id_token(student.id))
      throw Error(ErrorCode::invalid_instance, "bad student id '" + student.id + "'");
    if (!student_index_.emplace(student.id, s).second)
      throw Error(ErrorCode::invalid_instance, "duplicate student id '" + student.id + "'");

    std::size_t listed = 0;
    auto& groups = student.preferences.groups;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].empty())
        throw Error(ErrorCode::invalid_instance,
                    "student '" + student.id + "' has an empty tie-group");
      for (const SchoolId& id : groups[g]) {
        auto it = school_index_.find(id);
        if (it == school_index_.end())
          throw Error(ErrorCode::unknown_id,
                      "student '" + student.id + "' ranks unknown school '" + id + "'");
        std::uint16_t& slot = rank_table_[s * schools_.size() + it->second];
        if (slot != 0)
          throw Error(ErrorCode::invalid_instance,
                      "student '" + student.id + "' ranks school '" + id + "' twice");
        if (g + 1 > std::numeric_limits<std::uint16_t>::max())
          throw Error(ErrorCode::instance_too_large, "more than 65535 tie-groups");
        slot = static_cast<std::uint16_t>(g + 1);
        ++listed;
      }
    }
    if (listed < schools_.size()) {
      switch (policy) {
        case Completeness::require_full:
          throw Error(ErrorCode::incomplete_preferences,
                      "student '" + student.id + "' ranks " + std::to_string(listed) +
                          " of " + std::to_string(schools_.size()) + " schools");
        case Completeness::complete_with_tail: {
          std::vector<SchoolId> tail;
          for (std::size_t h = 0; h < schools_.size(); ++h) {
            std::uint16_t& slot = rank_table_[s * schools_.size() + h];
            if (slot == 0) {
              slot = static_cast<std::uint16_t>(groups.size() + 1);
              tail.push_back(schools_[h].id);
            }
          }
          groups.push_back(std::move(tail));
          break;
        }
        case Completeness::allow_partial:
          complete_ = false;
          break;
      }
    }
    z_ = std::max<int>(z_, static_cast<int>(groups.size()));
  }
}

std::size_t Instance::school_index(const SchoolId& id) const {
  auto it = school_index_.find(id);
  if (it == school_index_.end())
    throw Error(ErrorCode::unknown_id, "unknown school '" + id + "'");
  return it->second;
}

std::size_t Instance::student_index(const StudentId& id) const {
  auto it = student_index_.find(id);
  if (it == student_index_.end())
    throw Error(ErrorCode::unknown_id, "unknown student '" + id + "'");
  return it->second;
}

Instance Instance::from_json(const nlohmann::json& doc, Completeness policy) {
  if (!doc.is_object() || !doc.contains("schools") || !doc.contains("students"))
    throw Error(ErrorCode::parse_error, "instance must have 'schools' and 'students'");
  const auto& jschools = doc.at("schools");
  const auto& jstudents = doc.at("students");
  if (!jschools.is_array() || !jstudents.is_array())
    throw Error(ErrorCode::parse_error, "'schools' and 'students' must be arrays");

  std::vector<School> schools;
  schools.reserve(jschools.size());
  for (const auto& js : jschools) {
    if (!js.is_object() || !js.contains("id") || !js.contains("capacity") ||
        !js.at("id").is_string() || !js.at("capacity").is_number_integer())
      throw Error(ErrorCode::parse_error, "school entries need a string 'id' and an integer 'capacity'");
    schools.push_back({js.at("id").get<std::string>(), js.at("capacity").get<int>()});
  }

  std::vector<Student> students;
  students.reserve(jstudents.size());
  for (const auto& js : jstudents) {
    if (!js.is_object() || !js.contains("id") || !js.contains("preferences") ||
        !js.at("id").is_string() || !js.at("preferences").is_array())
      throw Error(ErrorCode::parse_error, "student entries need a string 'id' and a 'preferences' array");
    Student student;
    student.id = js.at("id").get<std::string>();
    for (const auto& jgroup : js.at("preferences")) {
      if (!jgroup.is_array())
        throw Error(ErrorCode::parse_error, "each preference tie-group must be an array");
      std::vector<SchoolId> group;
      for (const auto& jid : jgroup) {
        if (!jid.is_string())
          throw Error(ErrorCode::parse_error, "school references must be strings");
        group.push_back(jid.get<std::string>());
      }
      student.preferences.groups.push_back(std::move(group));
    }
    students.push_back(std::move(student));
  }
  return Instance(std::move(schools), std::move(students), policy);
}

Instance Instance::from_json_text(const std::string& text, Completeness policy) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  return from_json(doc, policy);
}

nlohmann::ordered_json Instance::to_json() const {
  nlohmann::ordered_json doc;
  doc["schools"] = nlohmann::ordered_json::array();
  for (const School& school : schools_)
    doc["schools"].push_back({{"id", school.id}, {"capacity", school.capacity}});
  doc["students"] = nlohmann::ordered_json::array();
  for (const Student& student : students_) {
    nlohmann::ordered_json groups = nlohmann::ordered_json::array();
    for (const auto& group : student.preferences.groups) groups.push_back(group);
    doc["students"].push_back({{"id", student.id}, {"preferences", std::move(groups)}});
  }
  return doc;
}

std::string Instance::to_json_text() const { return to_json().dump(2) + "\n"; }

int rank(const Instance& instance, const StudentId& student, const SchoolId& school) {
  std::size_t s = instance.student_index(student);
  std::size_t h = instance.school_index(school);
  std::uint16_t r = instance.rank_or_zero(s, h);
  if (r == 0)
    throw Error(ErrorCode::unranked_pair,
                "student '" + student + "' does not rank school '" + school + "'");
  return r;
}

int z_max(const Instance& instance) { return instance.z(); }

void validate_matching(const Instance& instance, const Matching& matching) {
  if (matching.pairs.size() != instance.n_students())
    throw Error(ErrorCode::invalid_matching,
                "matching covers " + std::to_string(matching.pairs.size()) + " of " +
                    std::to_string(instance.n_students()) + " students");
  std::vector<int> load(instance.n_schools(), 0);
  for (const auto& [student, school] : matching.pairs) {
    instance.student_index(student);  // throws UNKNOWN_ID for strays
    ++load[instance.school_index(school)];
  }
  for (std::size_t h = 0; h < instance.n_schools(); ++h) {
    if (load[h] > instance.schools()[h].capacity)
      throw Error(ErrorCode::invalid_matching,
                  "school '" + instance.schools()[h].id + "' holds " +
                      std::to_string(load[h]) + " students but has capacity " +
                      std::to_string(instance.schools()[h].capacity));
  }
}

UtilityProfile utility_profile(const Instance& instance, const Matching& matching) {
  if (matching.pairs.size() != instance.n_students())
    throw Error(ErrorCode::invalid_matching,
                "matching covers " + std::to_string(matching.pairs.size()) + " of " +
                    std::to_string(instance.n_students()) + " students");
  UtilityProfile profile;
  profile.n_students = instance.n_students();
  profile.counts.assign(static_cast<std::size_t>(instance.z()), 0);
  for (const auto& [student, school] : matching.pairs) {
    int r = rank(instance, student, school);
    ++profile.counts[static_cast<std::size_t>(r - 1)];
  }
  return profile;
}

std::string utility_scalar_digits(const UtilityProfile& profile) {
  std::size_t base = profile.n_students + 1;
  std::string out;
  if (profile.counts.empty()) out = "0";
  for (std::size_t i = 0; i < profile.counts.size(); ++i) {
    if (i > 0 && base > 10) out += ' ';
    out += std::to_string(profile.counts[i]);
  }
  return out + " (base " + std::to_string(base) + ")";
}

std::strong_ordering compare_profiles(const UtilityProfile& a, const UtilityProfile& b) {
  if (a.counts.size() != b.counts.size() || a.n_students != b.n_students)
    throw Error(ErrorCode::profile_shape_mismatch,
                "profiles compare only with equal z and student count");
  return a.counts <=> b.counts;
}

std::string write_matching_csv(const Instance& instance, const Matching& matching) {
  std::string out = "student_id,school_id,rank\n";
  for (const auto& [student, school] : matching.pairs) {
    out += student;
    out += ',';
    out += school;
    out += ',';
    out += std::to_string(rank(instance, student, school));
    out += '\n';
  }
  return out;
}

std::vector<MatchingRow> parse_matching_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::parse_error, "empty matching CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "student_id,school_id,rank")
    throw Error(ErrorCode::parse_error, "bad matching CSV header: '" + line + "'");

  std::vector<MatchingRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos)
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(lineno) + ": expected 3 fields");
    MatchingRow row;
    row.student = line.substr(0, c1);
    row.school = line.substr(c1 + 1, c2 - c1 - 1);
    std::string rank_text = line.substr(c2 + 1);
    try {
      std::size_t used = 0;
      row.rank = std::stoi(rank_text, &used);
      if (used != rank_text.size()) throw std::invalid_argument(rank_text);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(lineno) + ": bad rank '" + rank_text + "'");
    }
    if (row.student.empty() || row.school.empty() || row.rank < 1)
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(lineno) + ": bad row '" + line + "'");
    rows.push_back(std::move(row));
  }
  return rows;
}

Matching to_matching(const std::vector<MatchingRow>& rows) {
  Matching matching;
  for (const MatchingRow& row : rows) {
    if (!matching.pairs.emplace(row.student, row.school).second)
      throw Error(ErrorCode::invalid_matching,
                  "student '" + row.student + "' appears twice");
  }
  return matching;
}

}  // namespace optassign
