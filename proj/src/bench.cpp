#include "optassign/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "optassign/io.hpp"
#include "optassign/mechanisms.hpp"
#include "optassign/rng.hpp"

namespace optassign {

namespace {

const std::set<std::string>& known_mechanisms() {
  static const std::set<std::string> names = {"student-optimal", "serial-dictatorship",
                                              "boston-rounds"};
  return names;
}

std::string padded_id(char prefix, std::size_t index, std::size_t total) {
  std::string digits = std::to_string(index + 1);
  std::size_t width = std::to_string(total).size();
  std::string out(1, prefix);
  out.append(width > digits.size() ? width - digits.size() : 0, '0');
  out += digits;
  return out;
}

std::string format_ms(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

std::string format_svg(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::size_t worker_count(std::size_t tasks) {
  std::size_t n = 0;
  if (const char* env = std::getenv("OPTASSIGN_THREADS")) {
    char* end = nullptr;
    unsigned long parsed = std::strtoul(env, &end, 10);
    if (end && *end == '\0') n = static_cast<std::size_t>(parsed);
  }
  if (n == 0) n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::min(std::max<std::size_t>(1, n), std::max<std::size_t>(1, tasks));
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  if (config.n_students == 0 || config.n_schools == 0)
    throw Error(ErrorCode::config_invalid, "need at least one student and one school");
  if (config.capacities.empty()) {
    if (config.n_students % config.n_schools != 0)
      throw Error(ErrorCode::config_invalid,
                  "equal split needs n_schools to divide n_students (" +
                      std::to_string(config.n_students) + " / " +
                      std::to_string(config.n_schools) + ")");
  } else {
    if (config.capacities.size() != config.n_schools)
      throw Error(ErrorCode::config_invalid, "capacities must list every school");
    long long total = 0;
    for (int capacity : config.capacities) {
      if (capacity < 1)
        throw Error(ErrorCode::config_invalid, "capacities must be >= 1");
      total += capacity;
    }
    if (total < static_cast<long long>(config.n_students))
      throw Error(ErrorCode::config_invalid, "fewer seats than students");
  }
  if (config.seeds.empty())
    throw Error(ErrorCode::config_invalid, "need at least one seed");
  if (config.tie_mode == TieMode::tied && config.tie_max < 1)
    throw Error(ErrorCode::config_invalid, "tie_max must be >= 1");
  if (config.mechanisms.empty())
    throw Error(ErrorCode::config_invalid, "need at least one mechanism");
  for (const std::string& name : config.mechanisms)
    if (!known_mechanisms().count(name))
      throw Error(ErrorCode::config_invalid, "unknown mechanism '" + name + "'");
}

std::vector<int> config_capacities(const ExperimentConfig& config) {
  if (!config.capacities.empty()) return config.capacities;
  return std::vector<int>(config.n_schools,
                          static_cast<int>(config.n_students / config.n_schools));
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::config_invalid, "config must be an object");
  ExperimentConfig config;
  try {
    config.n_students = doc.at("n_students").get<std::size_t>();
    config.n_schools = doc.at("n_schools").get<std::size_t>();
    config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    if (doc.contains("capacities"))
      config.capacities = doc.at("capacities").get<std::vector<int>>();
    if (doc.contains("tie_mode")) {
      std::string mode = doc.at("tie_mode").get<std::string>();
      if (mode == "strict")
        config.tie_mode = TieMode::strict;
      else if (mode == "tied")
        config.tie_mode = TieMode::tied;
      else
        throw Error(ErrorCode::config_invalid, "tie_mode must be 'strict' or 'tied'");
    }
    if (doc.contains("tie_max")) config.tie_max = doc.at("tie_max").get<int>();
    if (doc.contains("mechanisms"))
      config.mechanisms = doc.at("mechanisms").get<std::vector<std::string>>();
    if (doc.contains("weight_fn")) {
      std::string name = doc.at("weight_fn").get<std::string>();
      try {
        config.weight_fn = weight_kind_from_string(name);
      } catch (const Error&) {
        throw Error(ErrorCode::config_invalid, "unknown weight_fn '" + name + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config_invalid, e.what());
  }
  validate_config(config);
  return config;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json doc;
  doc["n_students"] = n_students;
  doc["n_schools"] = n_schools;
  doc["capacities"] = config_capacities(*this);
  doc["seeds"] = seeds;
  doc["tie_mode"] = tie_mode == TieMode::strict ? "strict" : "tied";
  doc["tie_max"] = tie_max;
  doc["mechanisms"] = mechanisms;
  doc["weight_fn"] = to_string(weight_fn);
  return doc;
}

Instance generate_instance(const ExperimentConfig& config, std::uint64_t seed) {
  validate_config(config);
  std::vector<int> capacities = config_capacities(config);

  std::vector<School> schools;
  schools.reserve(config.n_schools);
  for (std::size_t h = 0; h < config.n_schools; ++h)
    schools.push_back({padded_id('h', h, config.n_schools), capacities[h]});

  std::mt19937_64 engine(seed);
  std::vector<Student> students;
  students.reserve(config.n_students);
  std::vector<std::size_t> order(config.n_schools);
  for (std::size_t s = 0; s < config.n_students; ++s) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    portable_shuffle(order, engine);
    Student student;
    student.id = padded_id('s', s, config.n_students);
    std::size_t pos = 0;
    while (pos < order.size()) {
      std::size_t group_size = 1;
      if (config.tie_mode == TieMode::tied)
        group_size = 1 + static_cast<std::size_t>(engine() %
                                                  static_cast<std::uint64_t>(config.tie_max));
      group_size = std::min(group_size, order.size() - pos);
      std::vector<SchoolId> group;
      group.reserve(group_size);
      for (std::size_t k = 0; k < group_size; ++k)
        group.push_back(schools[order[pos + k]].id);
      student.preferences.groups.push_back(std::move(group));
      pos += group_size;
    }
    students.push_back(std::move(student));
  }
  return Instance(std::move(schools), std::move(students));
}

Matching run_mechanism(const std::string& mechanism, const Instance& instance,
                       WeightKind weight_fn, std::uint64_t seed) {
  if (mechanism == "student-optimal")
    return student_optimal_matching(instance, weight_fn, seed);
  if (mechanism == "serial-dictatorship" || mechanism == "boston-rounds") {
    Lottery lottery = draw_lottery(instance, seed);
    Instance strict = tiebreak_preferences(instance, lottery);
    return mechanism == "serial-dictatorship"
               ? baseline_serial_dictatorship(strict, lottery)
               : baseline_boston_rounds(strict, lottery);
  }
  throw Error(ErrorCode::config_invalid, "unknown mechanism '" + mechanism + "'");
}

RunReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  std::vector<Instance> instances;
  instances.reserve(config.seeds.size());
  for (std::uint64_t seed : config.seeds)
    instances.push_back(generate_instance(config, seed));

  const std::size_t n_tasks = config.mechanisms.size() * config.seeds.size();
  RunReport report;
  report.config = config;
  report.runs.resize(n_tasks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      std::size_t m = task / config.seeds.size();
      std::size_t k = task % config.seeds.size();
      try {
        const Instance& instance = instances[k];
        auto start = std::chrono::steady_clock::now();
        Matching matching =
            run_mechanism(config.mechanisms[m], instance, config.weight_fn, config.seeds[k]);
        auto stop = std::chrono::steady_clock::now();
        validate_matching(instance, matching);
        RunResult& run = report.runs[task];
        run.mechanism = config.mechanisms[m];
        run.seed = config.seeds[k];
        run.counts = utility_profile(instance, matching).counts;
        run.duration_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
      } catch (...) {
        std::scoped_lock lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  std::size_t n_workers = worker_count(n_tasks);
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // A baseline can never beat the student-optimal profile on the same seed;
  // treat a violation as a defect, not a reportable result.
  auto so = std::find(config.mechanisms.begin(), config.mechanisms.end(), "student-optimal");
  if (so != config.mechanisms.end()) {
    std::size_t so_index = static_cast<std::size_t>(so - config.mechanisms.begin());
    for (std::size_t k = 0; k < config.seeds.size(); ++k) {
      const auto& so_counts = report.runs[so_index * config.seeds.size() + k].counts;
      for (std::size_t m = 0; m < config.mechanisms.size(); ++m) {
        const auto& counts = report.runs[m * config.seeds.size() + k].counts;
        if (counts > so_counts)
          throw std::logic_error("dominance violated: " + config.mechanisms[m] + " beat " +
                                 "student-optimal on seed " +
                                 std::to_string(config.seeds[k]));
      }
    }
  }
  return report;
}

std::vector<Aggregate> aggregate(const RunReport& report) {
  std::vector<Aggregate> aggregates;
  for (const std::string& mechanism : report.config.mechanisms) {
    Aggregate agg;
    agg.mechanism = mechanism;
    std::size_t n_runs = 0;
    for (const RunResult& run : report.runs) {
      if (run.mechanism != mechanism) continue;
      ++n_runs;
      if (run.counts.size() > agg.mean_counts.size()) agg.mean_counts.resize(run.counts.size(), 0.0);
      for (std::size_t k = 0; k < run.counts.size(); ++k) agg.mean_counts[k] += run.counts[k];
      agg.mean_duration_ms += run.duration_ms;
    }
    if (n_runs > 0) {
      for (double& v : agg.mean_counts) v /= static_cast<double>(n_runs);
      agg.mean_duration_ms /= static_cast<double>(n_runs);
    }
    aggregates.push_back(std::move(agg));
  }
  return aggregates;
}

std::string report_csv(const RunReport& report) {
  std::string out = "mechanism,seed,rank,count,duration_ms\n";
  for (const RunResult& run : report.runs) {
    for (std::size_t k = 0; k < run.counts.size(); ++k) {
      out += run.mechanism;
      out += ',';
      out += std::to_string(run.seed);
      out += ',';
      out += std::to_string(k + 1);
      out += ',';
      out += std::to_string(run.counts[k]);
      out += ',';
      out += format_ms(run.duration_ms);
      out += '\n';
    }
  }
  return out;
}

std::string report_json(const RunReport& report) {
  nlohmann::ordered_json doc;
  doc["config"] = report.config.to_json();
  doc["runs"] = nlohmann::ordered_json::array();
  for (const RunResult& run : report.runs) {
    nlohmann::ordered_json jr;
    jr["mechanism"] = run.mechanism;
    jr["seed"] = run.seed;
    jr["counts"] = run.counts;
    jr["duration_ms"] = run.duration_ms;
    doc["runs"].push_back(std::move(jr));
  }
  doc["aggregates"] = nlohmann::ordered_json::array();
  for (const Aggregate& agg : aggregate(report)) {
    nlohmann::ordered_json ja;
    ja["mechanism"] = agg.mechanism;
    ja["mean_counts"] = agg.mean_counts;
    ja["mean_duration_ms"] = agg.mean_duration_ms;
    doc["aggregates"].push_back(std::move(ja));
  }
  return doc.dump(2) + "\n";
}

std::string report_svg(const RunReport& report) {
  const std::vector<Aggregate> aggregates = aggregate(report);
  static const char* kColors[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                  "#66ccee", "#aa3377"};
  std::size_t z = 0;
  double peak = 1.0;
  for (const Aggregate& agg : aggregates) {
    z = std::max(z, agg.mean_counts.size());
    for (double v : agg.mean_counts) peak = std::max(peak, v);
  }

  const double bar_w = 14.0, group_gap = 10.0;
  const double left = 70.0, top = 40.0, plot_h = 240.0, bottom = 60.0;
  const double group_w = bar_w * std::max<std::size_t>(1, aggregates.size()) + group_gap;
  const double plot_w = group_w * std::max<std::size_t>(1, z);
  const double width = left + plot_w + 40.0, height = top + plot_h + bottom;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    format_svg(width) + "\" height=\"" + format_svg(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + format_svg(left) + "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"14\">Mean students per preference rank</text>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    double value = peak * tick / 4.0;
    double y = top + plot_h - plot_h * tick / 4.0;
    svg += "<line x1=\"" + format_svg(left) + "\" y1=\"" + format_svg(y) + "\" x2=\"" +
           format_svg(left + plot_w) + "\" y2=\"" + format_svg(y) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + format_svg(left - 8.0) + "\" y=\"" + format_svg(y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_svg(value) + "</text>\n";
  }

  for (std::size_t k = 0; k < z; ++k) {
    double gx = left + group_w * static_cast<double>(k);
    for (std::size_t m = 0; m < aggregates.size(); ++m) {
      double value = k < aggregates[m].mean_counts.size() ? aggregates[m].mean_counts[k] : 0.0;
      double h = plot_h * value / peak;
      svg += "<rect x=\"" + format_svg(gx + bar_w * static_cast<double>(m)) + "\" y=\"" +
             format_svg(top + plot_h - h) + "\" width=\"" + format_svg(bar_w - 2.0) +
             "\" height=\"" + format_svg(h) + "\" fill=\"" +
             kColors[m % std::size(kColors)] + "\"/>\n";
    }
    svg += "<text x=\"" + format_svg(gx + (group_w - group_gap) / 2.0) + "\" y=\"" +
           format_svg(top + plot_h + 16.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           std::to_string(k + 1) + "</text>\n";
  }
  svg += "<text x=\"" + format_svg(left + plot_w / 2.0) + "\" y=\"" +
         format_svg(top + plot_h + 34.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">rank</text>\n";

  double ly = height - 16.0;
  double lx = left;
  for (std::size_t m = 0; m < aggregates.size(); ++m) {
    svg += "<rect x=\"" + format_svg(lx) + "\" y=\"" + format_svg(ly - 10.0) +
           "\" width=\"12\" height=\"12\" fill=\"" + kColors[m % std::size(kColors)] +
           "\"/>\n";
    svg += "<text x=\"" + format_svg(lx + 16.0) + "\" y=\"" + format_svg(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + aggregates[m].mechanism +
           "</text>\n";
    lx += 24.0 + 7.0 * static_cast<double>(aggregates[m].mechanism.size());
  }
  svg += "</svg>\n";
  return svg;
}

void emit_report(const RunReport& report, const std::vector<std::string>& formats,
                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + out_dir.string());
  for (const std::string& format : formats) {
    if (format == "csv")
      write_text_file(out_dir / "report.csv", report_csv(report));
    else if (format == "json")
      write_text_file(out_dir / "report.json", report_json(report));
    else if (format == "svg")
      write_text_file(out_dir / "report.svg", report_svg(report));
    else
      throw Error(ErrorCode::config_invalid, "unknown report format '" + format + "'");
  }
}

}  // namespace optassign
