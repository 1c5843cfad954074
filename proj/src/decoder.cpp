#include "dualrail/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dualrail {
namespace {

std::string round_label(int k) { return "round" + std::to_string(k); }

bool is_check_step(const std::string& step) {
  return step.rfind("check", 0) == 0;
}

Subsystem subsystem_from_tag(const std::string& tag) {
  if (tag == "B") return Subsystem::Bob;
  if (tag == "A") return Subsystem::Alice;
  throw std::invalid_argument("unknown subsystem tag: " + tag);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

}  // namespace

const char* class_label(DecodedClass c) {
  switch (c) {
    case DecodedClass::FPC: return "FPC";
    case DecodedClass::FMC: return "FMC";
    case DecodedClass::FA: return "FA";
    case DecodedClass::S00: return "00";
    case DecodedClass::S01: return "01";
    case DecodedClass::S10: return "10";
    case DecodedClass::S11: return "11";
  }
  return "?";
}

const char* logical_label(LogicalOutcome o) {
  switch (o) {
    case LogicalOutcome::Zero: return "0";
    case LogicalOutcome::One: return "1";
    case LogicalOutcome::Erasure: return "erasure";
    case LogicalOutcome::Discarded: return "discarded";
  }
  return "?";
}

LogicalOutcome logical_of(DecodedClass c) {
  switch (c) {
    case DecodedClass::FPC: return LogicalOutcome::Discarded;
    case DecodedClass::S01: return LogicalOutcome::Zero;
    case DecodedClass::S10: return LogicalOutcome::One;
    default: return LogicalOutcome::Erasure;
  }
}

DecodedShot decode_shot(const std::vector<OutcomeRecord>& records,
                        const DecodePlan& plan) {
  // prep-stage checks take precedence over everything
  for (const auto& r : records) {
    auto it = plan.prep_expected.find(r.step);
    if (it != plan.prep_expected.end() && r.outcome != it->second)
      return {DecodedClass::FPC, LogicalOutcome::Discarded};
  }
  // post-reset transmon checks: any excited outcome flags the whole shot
  for (const auto& r : records) {
    if (is_check_step(r.step) && r.outcome == 'E')
      return {DecodedClass::FMC, LogicalOutcome::Erasure};
  }

  auto digits_of = [&](int k) {
    const std::string label = round_label(k);
    std::optional<char> b, a;
    for (const auto& r : records) {
      if (r.step != label) continue;
      auto& slot = (r.subsystem == Subsystem::Bob) ? b : a;
      if (slot) throw std::invalid_argument("duplicate outcome in " + label);
      slot = (r.outcome == 'E') ? '1' : '0';
    }
    if (!b || !a) throw std::invalid_argument("missing outcome in " + label);
    return std::string{*b, *a};
  };

  std::map<std::string, int> votes;
  for (int k = 1; k <= plan.rounds; ++k) ++votes[digits_of(k)];

  std::string assigned;
  if (plan.rounds == 1) {
    assigned = votes.begin()->first;
  } else if (plan.rounds == 2) {
    if (votes.size() != 1) return {DecodedClass::FA, LogicalOutcome::Erasure};
    assigned = votes.begin()->first;
  } else {
    auto best = std::max_element(
        votes.begin(), votes.end(),
        [](const auto& x, const auto& y) { return x.second < y.second; });
    if (2 * best->second <= plan.rounds)
      return {DecodedClass::FA, LogicalOutcome::Erasure};
    assigned = best->first;
  }

  DecodedClass cls;
  if (assigned == "00")
    cls = DecodedClass::S00;
  else if (assigned == "01")
    cls = DecodedClass::S01;
  else if (assigned == "10")
    cls = DecodedClass::S10;
  else
    cls = DecodedClass::S11;
  return {cls, logical_of(cls)};
}

double Metrics::n_all() const {
  return n_fpc + n_fmc + n_fa + n_00 + n_01 + n_10 + n_11;
}

void Metrics::add(DecodedClass c, double weight) {
  switch (c) {
    case DecodedClass::FPC: n_fpc += weight; break;
    case DecodedClass::FMC: n_fmc += weight; break;
    case DecodedClass::FA: n_fa += weight; break;
    case DecodedClass::S00: n_00 += weight; break;
    case DecodedClass::S01: n_01 += weight; break;
    case DecodedClass::S10: n_10 += weight; break;
    case DecodedClass::S11: n_11 += weight; break;
  }
}

void Metrics::merge(const Metrics& other) {
  n_fpc += other.n_fpc;
  n_fmc += other.n_fmc;
  n_fa += other.n_fa;
  n_00 += other.n_00;
  n_01 += other.n_01;
  n_10 += other.n_10;
  n_11 += other.n_11;
}

double Metrics::misassignment_error(LogicalOutcome prepared) const {
  const double assigned = n_01 + n_10;
  if (assigned <= 0.0) return 0.0;
  const double wrong = (prepared == LogicalOutcome::Zero) ? n_10 : n_01;
  return wrong / assigned;
}

double Metrics::erasure_fraction() const {
  const double nt = n_t();
  if (nt <= 0.0) return 0.0;
  return (n_fmc + n_00 + n_11 + n_fa) / nt;
}

double Metrics::leakage_detection_error() const {
  const double nt = n_t();
  if (nt <= 0.0) return 0.0;
  return (n_01 + n_10) / nt;
}

double binomial_sigma(double p, double n) {
  if (n <= 0.0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
}

void write_shot_csv(const std::string& path,
                    const std::vector<std::vector<OutcomeRecord>>& shots) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# col: shot_id, step_label, subsystem, outcome\n";
  for (std::size_t i = 0; i < shots.size(); ++i)
    for (const auto& r : shots[i])
      out << i << ", " << r.step << ", " << subsystem_tag(r.subsystem) << ", "
          << r.outcome << "\n";
}

std::vector<std::vector<OutcomeRecord>> read_shot_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<OutcomeRecord>> shots;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_row(line);
    if (fields.size() != 4)
      throw std::runtime_error("malformed shot row: " + line);
    const auto id = static_cast<std::size_t>(std::stoull(fields[0]));
    if (id >= shots.size()) shots.resize(id + 1);
    if (fields[3].size() != 1 || (fields[3] != "G" && fields[3] != "E"))
      throw std::runtime_error("malformed outcome: " + line);
    shots[id].push_back(
        {fields[1], subsystem_from_tag(fields[2]), fields[3][0]});
  }
  return shots;
}

void write_decoded_csv(const std::string& path,
                       const std::vector<DecodedShot>& shots) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# col: shot_id, class, logical\n";
  for (std::size_t i = 0; i < shots.size(); ++i)
    out << i << ", " << class_label(shots[i].cls) << ", "
        << logical_label(shots[i].logical) << "\n";
}

}  // namespace dualrail
