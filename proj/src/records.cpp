#include "mecbf/records.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mecbf {
namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

bool failure_flags(const std::string& flags) {
  for (const std::string& f : split(flags, '|')) {
    if (f.rfind("unconverged", 0) == 0 || f.rfind("solver-error", 0) == 0 || f == "no-link" ||
        f == "infinite-latency") {
      return true;
    }
  }
  return false;
}

// JSON cannot carry non-finite numbers; those travel as strings.
json number_json(double x) {
  if (std::isfinite(x)) return json(parse_number(format_number(x)));
  return json(format_number(x));
}

double json_number(const json& j) {
  if (j.is_string()) return parse_number(j.get<std::string>());
  return j.get<double>();
}

bool same_number(double a, double b) { return format_number(a) == format_number(b); }

}  // namespace

const char* const kSlotCsvHeader =
    "superframe,frame,slot,algorithm,rho,R1_bps,R2_bps,R3_bps,T_total_s,case,penalty,flags";
const char* const kSweepCsvHeader =
    "axis,value,algorithm,mean_T_total_s,stderr_T_total_s,mean_rho,trials,slots,failed_slots";

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown format '" + name + "'");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string emit_results(const std::vector<SlotRecord>& records, OutputFormat format) {
  return format == OutputFormat::kCsv ? slot_csv(records) : slot_json(records);
}

std::string slot_csv(const std::vector<SlotRecord>& records) {
  std::string out = std::string(kSlotCsvHeader) + "\n";
  for (const SlotRecord& r : records) {
    out += std::to_string(r.superframe) + ',' + std::to_string(r.frame) + ',' +
           std::to_string(r.slot) + ',' + r.algorithm + ',' + format_number(r.rho) + ',' +
           format_number(r.r1) + ',' + format_number(r.r2) + ',' + format_number(r.r3) + ',' +
           format_number(r.t_total) + ',' + std::to_string(r.latency_case) + ',' +
           format_number(r.penalty) + ',' + r.flags + '\n';
  }
  return out;
}

std::string slot_json(const std::vector<SlotRecord>& records) {
  json arr = json::array();
  for (const SlotRecord& r : records) {
    arr.push_back({{"superframe", r.superframe},
                   {"frame", r.frame},
                   {"slot", r.slot},
                   {"algorithm", r.algorithm},
                   {"rho", number_json(r.rho)},
                   {"R1_bps", number_json(r.r1)},
                   {"R2_bps", number_json(r.r2)},
                   {"R3_bps", number_json(r.r3)},
                   {"T_total_s", number_json(r.t_total)},
                   {"case", r.latency_case},
                   {"penalty", number_json(r.penalty)},
                   {"flags", r.flags}});
  }
  return arr.dump(1) + "\n";
}

std::vector<SlotRecord> parse_slot_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSlotCsvHeader) {
    throw std::invalid_argument("slot csv: missing or unexpected header");
  }
  std::vector<SlotRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw std::invalid_argument("slot csv: expected 12 fields");
    SlotRecord r;
    r.superframe = parse_int(f[0]);
    r.frame = parse_int(f[1]);
    r.slot = parse_int(f[2]);
    r.algorithm = f[3];
    r.rho = parse_number(f[4]);
    r.r1 = parse_number(f[5]);
    r.r2 = parse_number(f[6]);
    r.r3 = parse_number(f[7]);
    r.t_total = parse_number(f[8]);
    r.latency_case = parse_int(f[9]);
    r.penalty = parse_number(f[10]);
    r.flags = f[11];
    r.failed = failure_flags(r.flags);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SlotRecord> parse_slot_json(const std::string& text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("slot json: expected an array");
  std::vector<SlotRecord> out;
  for (const json& j : arr) {
    SlotRecord r;
    r.superframe = j.at("superframe").get<int>();
    r.frame = j.at("frame").get<int>();
    r.slot = j.at("slot").get<int>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.rho = json_number(j.at("rho"));
    r.r1 = json_number(j.at("R1_bps"));
    r.r2 = json_number(j.at("R2_bps"));
    r.r3 = json_number(j.at("R3_bps"));
    r.t_total = json_number(j.at("T_total_s"));
    r.latency_case = j.at("case").get<int>();
    r.penalty = json_number(j.at("penalty"));
    r.flags = j.at("flags").get<std::string>();
    r.failed = failure_flags(r.flags);
    out.push_back(std::move(r));
  }
  return out;
}

bool same_emitted(const SlotRecord& a, const SlotRecord& b) {
  return a.superframe == b.superframe && a.frame == b.frame && a.slot == b.slot &&
         a.algorithm == b.algorithm && same_number(a.rho, b.rho) && same_number(a.r1, b.r1) &&
         same_number(a.r2, b.r2) && same_number(a.r3, b.r3) &&
         same_number(a.t_total, b.t_total) && a.latency_case == b.latency_case &&
         same_number(a.penalty, b.penalty) && a.flags == b.flags;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const SweepRow& r : rows) {
    out += r.axis + ',' + format_number(r.value) + ',' + r.algorithm + ',' +
           format_number(r.mean_t_total) + ',' + format_number(r.stderr_t_total) + ',' +
           format_number(r.mean_rho) + ',' + std::to_string(r.trials) + ',' +
           std::to_string(r.slots) + ',' + std::to_string(r.failed_slots) + '\n';
  }
  return out;
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const SweepRow& r : rows) {
    arr.push_back({{"axis", r.axis},
                   {"value", number_json(r.value)},
                   {"algorithm", r.algorithm},
                   {"mean_T_total_s", number_json(r.mean_t_total)},
                   {"stderr_T_total_s", number_json(r.stderr_t_total)},
                   {"mean_rho", number_json(r.mean_rho)},
                   {"trials", r.trials},
                   {"slots", r.slots},
                   {"failed_slots", r.failed_slots}});
  }
  return arr.dump(1) + "\n";
}

}  // namespace mecbf
