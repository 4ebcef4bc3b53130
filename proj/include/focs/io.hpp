#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "focs/focs.hpp"
#include "focs/instance.hpp"
#include "focs/rational.hpp"
#include "focs/schedule.hpp"
#include "focs/verify.hpp"

namespace focs {

namespace detail {

inline Rat json_rat(const nlohmann::json& value, const std::string& field) {
  if (value.is_string()) return rat_from_string(value.get<std::string>());
  if (value.is_number_integer()) return Rat(value.get<long long>());
  if (value.is_number())
    throw ParseError(field + ": floating-point JSON numbers are not exact; use a decimal string");
  throw ParseError(field + ": expected a decimal string");
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << content;
}

}  // namespace detail

inline Instance parse_instance_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    throw ParseError(std::string("invalid JSON: ") + error.what());
  }
  if (!doc.is_object() || !doc.contains("jobs") || !doc["jobs"].is_array())
    throw ParseError("instance file must be an object with a \"jobs\" array");
  std::vector<Job> jobs;
  for (const auto& entry : doc["jobs"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string())
      throw ParseError("every job needs a string \"id\"");
    for (const char* field : {"arrival", "departure", "energy", "p_max"})
      if (!entry.contains(field))
        throw ParseError("job " + entry["id"].get<std::string>() + ": missing \"" + field + "\"");
    jobs.push_back({entry["id"].get<std::string>(), detail::json_rat(entry["arrival"], "arrival"),
                    detail::json_rat(entry["departure"], "departure"),
                    detail::json_rat(entry["energy"], "energy"),
                    detail::json_rat(entry["p_max"], "p_max")});
  }
  try {
    return Instance(std::move(jobs));
  } catch (const std::invalid_argument& error) {
    throw ParseError(error.what());
  }
}

inline Instance read_instance_json(const std::filesystem::path& path) {
  return parse_instance_json(detail::read_file(path));
}

inline std::string instance_to_json(const Instance& instance) {
  nlohmann::ordered_json doc;
  doc["jobs"] = nlohmann::ordered_json::array();
  for (const Job& job : instance.jobs()) {
    doc["jobs"].push_back({{"id", job.id},
                           {"arrival", rat_to_string(job.arrival)},
                           {"departure", rat_to_string(job.departure)},
                           {"energy", rat_to_string(job.energy)},
                           {"p_max", rat_to_string(job.power_limit)}});
  }
  return doc.dump(2) + "\n";
}

inline void write_instance_json(const std::filesystem::path& path, const Instance& instance) {
  detail::write_file(path, instance_to_json(instance));
}

// Schedule rows: one per available (interval, job) pair, zeros included, so a
// file is a complete statement of the assignment.
inline std::string schedule_to_csv(const Schedule& schedule) {
  const AtomicPartition& partition = schedule.partition();
  std::ostringstream out;
  out << "interval_start,interval_end,job_id,energy\n";
  for (int i = 0; i < partition.interval_count(); ++i)
    for (int j : partition.jobs_in(i))
      out << rat_to_string(partition.start(i)) << ',' << rat_to_string(partition.end(i)) << ','
          << schedule.instance().job(j).id << ',' << rat_to_string(schedule.energy(i, j)) << '\n';
  return out.str();
}

inline void write_schedule_csv(const std::filesystem::path& path, const Schedule& schedule) {
  detail::write_file(path, schedule_to_csv(schedule));
}

inline Schedule parse_schedule_csv(const std::string& text, const Instance& instance,
                                   const AtomicPartition& partition) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      detail::split_csv_line(line) !=
          std::vector<std::string>{"interval_start", "interval_end", "job_id", "energy"})
    throw ParseError("schedule CSV must start with interval_start,interval_end,job_id,energy");

  Schedule schedule(instance, partition);
  std::vector<std::vector<bool>> seen(static_cast<size_t>(partition.interval_count()),
                                      std::vector<bool>(static_cast<size_t>(instance.size()), false));
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != 4)
      throw ParseError("schedule row " + std::to_string(row) + ": expected 4 fields");
    Rat start = rat_from_string(fields[0]);
    Rat end = rat_from_string(fields[1]);
    int interval = -1;
    for (int i = 0; i < partition.interval_count(); ++i)
      if (partition.start(i) == start && partition.end(i) == end) {
        interval = i;
        break;
      }
    if (interval < 0)
      throw ParseError("schedule row " + std::to_string(row) + ": interval [" + fields[0] + ", " +
                       fields[1] + "] does not match the instance partition");
    int j = instance.index_of(fields[2]);
    if (j < 0)
      throw ParseError("schedule row " + std::to_string(row) + ": unknown job id " + fields[2]);
    if (seen[static_cast<size_t>(interval)][static_cast<size_t>(j)])
      throw ParseError("schedule row " + std::to_string(row) + ": duplicate cell");
    seen[static_cast<size_t>(interval)][static_cast<size_t>(j)] = true;
    try {
      schedule.set_energy(interval, j, rat_from_string(fields[3]));
    } catch (const std::invalid_argument& error) {
      throw ParseError("schedule row " + std::to_string(row) + ": " + error.what());
    }
  }
  return schedule;
}

inline Schedule read_schedule_csv(const std::filesystem::path& path, const Instance& instance,
                                  const AtomicPartition& partition) {
  return parse_schedule_csv(detail::read_file(path), instance, partition);
}

inline std::string profile_to_csv(const PowerProfile& profile, const AtomicPartition& partition) {
  std::ostringstream out;
  out << "interval_start,interval_end,power\n";
  for (int i = 0; i < partition.interval_count(); ++i)
    out << rat_to_string(partition.start(i)) << ',' << rat_to_string(partition.end(i)) << ','
        << rat_to_string(profile.power.at(static_cast<size_t>(i))) << '\n';
  return out.str();
}

inline void write_profile_csv(const std::filesystem::path& path, const PowerProfile& profile,
                              const AtomicPartition& partition) {
  detail::write_file(path, profile_to_csv(profile, partition));
}

// Line-delimited trace: one record per iteration (g over the intervals active
// at its start, flow value, what got parked) and one per round (critical set,
// its power level, per-job critical loads). Interval indices are 1-based.
inline std::string trace_to_jsonl(const FocsResult& result) {
  std::ostringstream out;
  auto interval_list = [](const std::vector<int>& intervals) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (int i : intervals) list.push_back(i + 1);
    return list;
  };
  for (const RoundRecord& round : result.rounds) {
    for (const IterationRecord& it : result.iterations) {
      if (it.round != round.round) continue;
      nlohmann::ordered_json record;
      record["type"] = "iteration";
      record["round"] = it.round;
      record["iteration"] = it.iteration;
      nlohmann::ordered_json g;
      for (const auto& [i, value] : it.g) g[std::to_string(i + 1)] = rat_to_string(value);
      record["g"] = std::move(g);
      record["flow_value"] = rat_to_string(it.flow_value);
      record["parked"] = interval_list(it.parked);
      out << record.dump() << '\n';
    }
    nlohmann::ordered_json record;
    record["type"] = "round";
    record["round"] = round.round;
    record["critical"] = interval_list(round.critical);
    record["critical_power"] =
        round.critical.empty()
            ? "0"
            : rat_to_string(result.profile.power.at(static_cast<size_t>(round.critical.front())));
    nlohmann::ordered_json loads;
    for (int j = 0; j < result.schedule.instance().size(); ++j)
      loads[result.schedule.instance().job(j).id] =
          rat_to_string(round.critical_load.at(static_cast<size_t>(j)));
    record["critical_load"] = std::move(loads);
    out << record.dump() << '\n';
  }
  return out.str();
}

inline std::string summary_to_json(const FocsResult& result, const Objective& objective) {
  nlohmann::ordered_json doc;
  doc["objective"] = rat_to_string(objective_value(result.profile, objective));
  doc["alpha"] = objective.alpha;
  doc["rounds"] = static_cast<int>(result.rounds.size());
  doc["iterations"] = result.total_iterations;
  nlohmann::ordered_json sets = nlohmann::ordered_json::array();
  for (const auto& critical : result.critical_sets) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (int i : critical) list.push_back(i + 1);
    sets.push_back(std::move(list));
  }
  doc["critical_sets"] = std::move(sets);
  nlohmann::ordered_json ranks;
  for (size_t i = 0; i < result.rank.size(); ++i)
    ranks[std::to_string(i + 1)] = result.rank[i];
  doc["ranks"] = std::move(ranks);
  return doc.dump(2) + "\n";
}

inline std::string kkt_report_to_json(const KktReport& report, const DualCertificate& cert,
                                      const Instance& instance) {
  nlohmann::ordered_json doc;
  doc["pass"] = report.pass && cert.valid;
  nlohmann::ordered_json kkt;
  kkt["pass"] = report.pass;
  nlohmann::ordered_json violations = nlohmann::ordered_json::array();
  for (const KktViolation& v : report.violations) {
    violations.push_back({{"condition", v.condition},
                          {"job", instance.job(v.job).id},
                          {"interval", v.interval + 1},
                          {"compared_interval", v.other_interval + 1},
                          {"power", rat_to_string(v.power)},
                          {"compared_power", rat_to_string(v.other_power)}});
  }
  kkt["violations"] = std::move(violations);
  doc["kkt"] = std::move(kkt);

  nlohmann::ordered_json duals;
  duals["valid"] = cert.valid;
  duals["failures"] = cert.failures;
  nlohmann::ordered_json delta, gamma, zeta;
  for (int j = 0; j < instance.size(); ++j) {
    const std::string& id = instance.job(j).id;
    delta[id] = rat_to_string(cert.delta.at(static_cast<size_t>(j)));
    nlohmann::ordered_json g, z;
    for (const auto& [i, value] : cert.gamma.at(static_cast<size_t>(j)))
      g[std::to_string(i + 1)] = rat_to_string(value);
    for (const auto& [i, value] : cert.zeta.at(static_cast<size_t>(j)))
      z[std::to_string(i + 1)] = rat_to_string(value);
    gamma[id] = std::move(g);
    zeta[id] = std::move(z);
  }
  duals["delta"] = std::move(delta);
  duals["gamma"] = std::move(gamma);
  duals["zeta"] = std::move(zeta);
  doc["duals"] = std::move(duals);
  return doc.dump(2) + "\n";
}

// Debug view of a network (optionally with a flow) for graphviz.
inline std::string to_dot(const FlowNetwork& network, const Flow* flow = nullptr) {
  std::ostringstream out;
  auto annotate = [&](const Rat& f, const Rat& cap) {
    return flow ? rat_to_string(f) + " / " + rat_to_string(cap) : rat_to_string(cap);
  };
  out << "digraph focs {\n  rankdir=LR;\n";
  out << "  s [shape=circle];\n  t [shape=circle];\n";
  for (int j = 0; j < network.job_count(); ++j)
    out << "  j" << j + 1 << " [shape=box];\n";
  for (int i = 0; i < network.interval_count(); ++i)
    out << "  I" << i + 1 << " [shape=ellipse];\n";
  for (int j = 0; j < network.job_count(); ++j)
    out << "  s -> j" << j + 1 << " [label=\""
        << annotate(flow ? flow->source.at(static_cast<size_t>(j)) : Rat(0), network.source_cap(j))
        << "\"];\n";
  for (int j = 0; j < network.job_count(); ++j)
    for (const auto& [i, cap] : network.job_edges(j))
      out << "  j" << j + 1 << " -> I" << i + 1 << " [label=\""
          << annotate(flow ? flow->job_flow(j, i) : Rat(0), cap) << "\"];\n";
  for (int i = 0; i < network.interval_count(); ++i)
    if (network.has_sink_edge(i))
      out << "  I" << i + 1 << " -> t [label=\""
          << annotate(flow ? flow->sink.at(static_cast<size_t>(i)) : Rat(0), network.sink_cap(i))
          << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace focs
