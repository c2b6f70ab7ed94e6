#include "optassign/cli.hpp"

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optassign/bench.hpp"
#include "optassign/io.hpp"
#include "optassign/mechanisms.hpp"
#include "optassign/model.hpp"
#include "optassign/verify.hpp"

namespace optassign {

namespace {

/// Accepts "7", "1,4,9" or "0..9" (inclusive range).
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  auto parse_one = [&](const std::string& token) -> std::uint64_t {
    try {
      std::size_t used = 0;
      unsigned long long value = std::stoull(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return value;
    } catch (const std::exception&) {
      throw CLI::ValidationError("--seeds", "bad seed '" + token + "' in '" + text + "'");
    }
  };
  std::vector<std::uint64_t> seeds;
  std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    std::uint64_t lo = parse_one(text.substr(0, dots));
    std::uint64_t hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("--seeds", "range '" + text + "' is empty");
    for (std::uint64_t s = lo; s <= hi; ++s) {
      seeds.push_back(s);
      if (s == hi) break;  // guard against wraparound at UINT64_MAX
    }
    return seeds;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    seeds.push_back(parse_one(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return seeds;
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    write_text_file(out_path, content);
}

std::string ordering_name(std::strong_ordering order) {
  if (order == std::strong_ordering::greater) return "Greater";
  if (order == std::strong_ordering::less) return "Less";
  return "Equal";
}

UtilityProfile profile_from_rows(const std::vector<MatchingRow>& rows, std::size_t z) {
  UtilityProfile profile;
  profile.n_students = rows.size();
  profile.counts.assign(z, 0);
  for (const MatchingRow& row : rows)
    ++profile.counts[static_cast<std::size_t>(row.rank - 1)];
  return profile;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"School-assignment optimization engine"};
  app.require_subcommand(1);
  int exit_code = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance as JSON");
  struct {
    std::size_t students = 0, schools = 0;
    int seats = 0, tie_max = 3;
    std::uint64_t seed = 0;
    std::string tie_mode = "strict", out;
  } gen_opt;
  gen->add_option("--students", gen_opt.students, "Number of students")->required();
  gen->add_option("--schools", gen_opt.schools, "Number of schools")->required();
  gen->add_option("--seats-per-school", gen_opt.seats,
                  "Capacity of every school (default: students / schools)");
  gen->add_option("--seed", gen_opt.seed, "Generator seed");
  gen->add_option("--tie-mode", gen_opt.tie_mode, "strict or tied preference lists")
      ->check(CLI::IsMember({"strict", "tied"}));
  gen->add_option("--tie-max", gen_opt.tie_max, "Largest tie-group size in tied mode");
  gen->add_option("--out", gen_opt.out, "Output file (default: stdout)");
  gen->callback([&] {
    ExperimentConfig config;
    config.n_students = gen_opt.students;
    config.n_schools = gen_opt.schools;
    if (gen_opt.seats > 0)
      config.capacities.assign(gen_opt.schools, gen_opt.seats);
    config.seeds = {gen_opt.seed};
    config.tie_mode = gen_opt.tie_mode == "tied" ? TieMode::tied : TieMode::strict;
    config.tie_max = gen_opt.tie_max;
    write_output(generate_instance(config, gen_opt.seed).to_json_text(), gen_opt.out);
  });

  // solve
  auto* solve = app.add_subcommand("solve", "Assign students and write the matching CSV");
  struct {
    std::string instance_path, mechanism = "student-optimal";
    std::string weight_fn = "exp-minus-one", out;
    std::uint64_t seed = 0;
  } solve_opt;
  solve->add_option("instance", solve_opt.instance_path, "Instance JSON file")->required();
  solve->add_option("--mechanism", solve_opt.mechanism, "Assignment mechanism")
      ->check(CLI::IsMember({"student-optimal", "serial-dictatorship", "boston-rounds"}));
  solve->add_option("--weight-fn", solve_opt.weight_fn, "Weight function (student-optimal)")
      ->check(CLI::IsMember({"exp-minus-one", "power-base"}));
  solve->add_option("--seed", solve_opt.seed, "Solver / lottery seed");
  solve->add_option("--out", solve_opt.out, "Output file (default: stdout)");
  solve->callback([&] {
    Instance instance = Instance::from_json_text(read_text_file(solve_opt.instance_path));
    Matching matching = run_mechanism(solve_opt.mechanism, instance,
                                      weight_kind_from_string(solve_opt.weight_fn),
                                      solve_opt.seed);
    write_output(write_matching_csv(instance, matching), solve_opt.out);
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Check a matching for weak stability");
  struct {
    std::string instance_path, matching_path;
  } verify_opt;
  verify->add_option("instance", verify_opt.instance_path, "Instance JSON file")->required();
  verify->add_option("matching", verify_opt.matching_path, "Matching CSV file")->required();
  verify->callback([&] {
    Instance instance = Instance::from_json_text(read_text_file(verify_opt.instance_path));
    std::vector<MatchingRow> rows = parse_matching_csv(read_text_file(verify_opt.matching_path));
    Matching matching = to_matching(rows);
    for (const MatchingRow& row : rows) {
      if (rank(instance, row.student, row.school) != row.rank)
        throw Error(ErrorCode::invalid_matching,
                    "rank column says " + std::to_string(row.rank) + " for (" + row.student +
                        ", " + row.school + ") but the instance says " +
                        std::to_string(rank(instance, row.student, row.school)));
    }
    StabilityResult result = is_weakly_stable(instance, matching);
    if (result.stable) {
      std::cout << "Stable\n";
    } else {
      std::cout << "Unstable\n";
      for (const BlockingPair& pair : result.blocking) {
        std::cout << "  " << pair.student << " " << pair.school
                  << (pair.displaced ? " (displaces " + *pair.displaced + ")"
                                     : " (free seat)")
                  << "\n";
      }
      exit_code = 1;
    }
  });

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark protocol and write reports");
  struct {
    std::size_t students = 0, schools = 0;
    int seats = 0, tie_max = 3;
    std::string seeds, tie_mode = "strict", weight_fn = "exp-minus-one";
    std::vector<std::string> mechanisms, formats = {"csv", "json", "svg"};
    std::string config_path, out_dir = ".";
  } bench_opt;
  bench->add_option("--config", bench_opt.config_path,
                    "Experiment config JSON (overrides the flags below)");
  bench->add_option("--students", bench_opt.students, "Number of students");
  bench->add_option("--schools", bench_opt.schools, "Number of schools");
  bench->add_option("--seats-per-school", bench_opt.seats,
                    "Capacity of every school (default: students / schools)");
  bench->add_option("--seeds", bench_opt.seeds, "Seeds: '0..9' or '1,4,9'");
  bench->add_option("--tie-mode", bench_opt.tie_mode, "strict or tied preference lists")
      ->check(CLI::IsMember({"strict", "tied"}));
  bench->add_option("--tie-max", bench_opt.tie_max, "Largest tie-group size in tied mode");
  bench->add_option("--mechanisms", bench_opt.mechanisms, "Mechanisms to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"student-optimal", "serial-dictatorship", "boston-rounds"}));
  bench->add_option("--weight-fn", bench_opt.weight_fn, "Weight function (student-optimal)")
      ->check(CLI::IsMember({"exp-minus-one", "power-base"}));
  bench->add_option("--format", bench_opt.formats, "Report formats to write")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  bench->add_option("--out-dir", bench_opt.out_dir, "Report directory");
  bench->callback([&] {
    ExperimentConfig config;
    if (!bench_opt.config_path.empty()) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(read_text_file(bench_opt.config_path));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_invalid, e.what());
      }
      config = ExperimentConfig::from_json(doc);
    } else {
      if (bench_opt.students == 0 || bench_opt.schools == 0 || bench_opt.seeds.empty())
        throw CLI::RequiredError("bench needs --config or --students/--schools/--seeds");
      config.n_students = bench_opt.students;
      config.n_schools = bench_opt.schools;
      if (bench_opt.seats > 0) config.capacities.assign(bench_opt.schools, bench_opt.seats);
      config.seeds = parse_seed_list(bench_opt.seeds);
      config.tie_mode = bench_opt.tie_mode == "tied" ? TieMode::tied : TieMode::strict;
      config.tie_max = bench_opt.tie_max;
      if (!bench_opt.mechanisms.empty()) config.mechanisms = bench_opt.mechanisms;
      config.weight_fn = weight_kind_from_string(bench_opt.weight_fn);
    }
    RunReport report = run_experiment(config);
    emit_report(report, bench_opt.formats, bench_opt.out_dir);
    for (const Aggregate& agg : aggregate(report)) {
      std::cout << agg.mechanism << ": mean_duration_ms=" << agg.mean_duration_ms
                << " mean_counts=[";
      for (std::size_t k = 0; k < agg.mean_counts.size(); ++k)
        std::cout << (k ? "," : "") << agg.mean_counts[k];
      std::cout << "]\n";
    }
  });

  // compare
  auto* compare = app.add_subcommand("compare", "Compare the utility of two matchings");
  struct {
    std::string a_path, b_path, instance_path;
  } compare_opt;
  compare->add_option("first", compare_opt.a_path, "Matching CSV")->required();
  compare->add_option("second", compare_opt.b_path, "Matching CSV")->required();
  compare->add_option("--instance", compare_opt.instance_path,
                      "Instance JSON; when given, matchings are validated against it and "
                      "ranks are recomputed");
  compare->callback([&] {
    std::vector<MatchingRow> a_rows = parse_matching_csv(read_text_file(compare_opt.a_path));
    std::vector<MatchingRow> b_rows = parse_matching_csv(read_text_file(compare_opt.b_path));
    UtilityProfile a_profile, b_profile;
    if (!compare_opt.instance_path.empty()) {
      Instance instance = Instance::from_json_text(read_text_file(compare_opt.instance_path));
      Matching a = to_matching(a_rows), b = to_matching(b_rows);
      validate_matching(instance, a);
      validate_matching(instance, b);
      a_profile = utility_profile(instance, a);
      b_profile = utility_profile(instance, b);
    } else {
      std::size_t z = 0;
      for (const MatchingRow& row : a_rows) z = std::max(z, static_cast<std::size_t>(row.rank));
      for (const MatchingRow& row : b_rows) z = std::max(z, static_cast<std::size_t>(row.rank));
      a_profile = profile_from_rows(a_rows, z);
      b_profile = profile_from_rows(b_rows, z);
    }
    std::cout << ordering_name(compare_profiles(a_profile, b_profile)) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::config_invalid ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}

}  // namespace optassign
