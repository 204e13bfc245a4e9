#include "stratasynth/panel.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "stratasynth/errors.hpp"
#include "stratasynth/format.hpp"

namespace strata {

namespace {

struct CsvRow {
  std::vector<std::string> fields;
  int line_no;
};

// Minimal CSV: comma-delimited, no quoting (ids must not contain commas),
// '#'-prefixed comment lines and blank lines skipped.
std::vector<CsvRow> read_csv(const std::string& path,
                             const std::vector<std::string>& expected_header,
                             bool header_prefix_only = false) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::vector<CsvRow> rows;
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    CsvRow row;
    row.line_no = line_no;
    std::size_t start = 0;
    for (;;) {
      std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        row.fields.push_back(line.substr(start));
        break;
      }
      row.fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (!saw_header) {
      saw_header = true;
      std::size_t need = expected_header.size();
      bool ok = header_prefix_only ? row.fields.size() >= need
                                   : row.fields.size() == need;
      for (std::size_t i = 0; ok && i < need; ++i)
        ok = row.fields[i] == expected_header[i];
      if (!ok) {
        std::string want;
        for (std::size_t i = 0; i < need; ++i) {
          if (i) want += ",";
          want += expected_header[i];
        }
        throw ValidationError(path + ":" + std::to_string(line_no) +
                              ": expected header starting with '" + want + "'");
      }
      rows.push_back(row);  // header kept as row 0
      continue;
    }
    rows.push_back(row);
  }
  if (!saw_header)
    throw ValidationError(path + ": empty file (no header)");
  return rows;
}

double parse_double(const std::string& s, const std::string& path, int line_no) {
  if (s.empty())
    throw ValidationError(path + ":" + std::to_string(line_no) + ": empty numeric field");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw ValidationError(path + ":" + std::to_string(line_no) +
                          ": cannot parse number '" + s + "'");
  return v;
}

bool all_numeric(const std::vector<std::string>& labels) {
  for (const auto& s : labels) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) return false;
  }
  return !labels.empty();
}

}  // namespace

std::optional<int> PanelData::unit_index(const std::string& id) const {
  for (std::size_t i = 0; i < unit_ids.size(); ++i)
    if (unit_ids[i] == id) return static_cast<int>(i);
  return std::nullopt;
}

void PanelData::validate() const {
  const int n = n_units();
  const int t = n_periods();
  if (n == 0 || t == 0) throw ValidationError("panel has no units or no periods");
  if (outcomes.rows() != static_cast<std::size_t>(n) ||
      outcomes.cols() != static_cast<std::size_t>(t))
    throw ValidationError("outcome matrix shape mismatch");
  if (!covariate_names.empty() &&
      (covariates.rows() != static_cast<std::size_t>(n) ||
       covariates.cols() != covariate_names.size()))
    throw ValidationError("covariate matrix shape mismatch");
  if (t0 < 2) throw ValidationError("t0 must be >= 2 (two pre periods needed for conformal residuals)");
  if (t0 >= t) throw ValidationError("t0 must be < T (at least one post period required)");
  std::set<std::string> uniq(unit_ids.begin(), unit_ids.end());
  if (static_cast<int>(uniq.size()) != n)
    throw ValidationError("unit ids are not distinct");
  const bool numeric = all_numeric(time_labels);
  for (int i = 0; i + 1 < t; ++i) {
    bool ordered = numeric
        ? std::strtod(time_labels[i].c_str(), nullptr) < std::strtod(time_labels[i + 1].c_str(), nullptr)
        : time_labels[i] < time_labels[i + 1];
    if (!ordered)
      throw ValidationError("time labels not strictly ordered: '" + time_labels[i] +
                            "' before '" + time_labels[i + 1] + "'");
  }
  for (std::size_t r = 0; r < outcomes.rows(); ++r)
    for (std::size_t c = 0; c < outcomes.cols(); ++c)
      if (!std::isfinite(outcomes(r, c)))
        throw ValidationError("non-finite outcome for unit '" + unit_ids[r] +
                              "' at time '" + time_labels[c] + "'");
}

bool TreatmentSchedule::is_treated(int unit) const {
  return std::binary_search(treated_units.begin(), treated_units.end(), unit);
}

bool AdjacencyGraph::adjacent(int a, int b) const {
  const auto& nb = neighbor_sets[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<int> AdjacencyGraph::two_hop_neighborhood(int unit) const {
  std::set<int> out;
  for (int nb : neighbor_sets[unit]) {
    out.insert(nb);
    for (int nb2 : neighbor_sets[nb]) out.insert(nb2);
  }
  out.erase(unit);
  return std::vector<int>(out.begin(), out.end());
}

void AdjacencyGraph::validate() const {
  const int n = n_units();
  for (int i = 0; i < n; ++i) {
    for (int j : neighbor_sets[i]) {
      if (j < 0 || j >= n)
        throw ValidationError("adjacency references unknown unit index " + std::to_string(j));
      if (j == i)
        throw ValidationError("self-loop on unit index " + std::to_string(i));
      if (!adjacent(j, i))
        throw ValidationError("adjacency not symmetric between indices " +
                              std::to_string(i) + " and " + std::to_string(j));
    }
  }
}

const char* stratum_name(Stratum s) {
  switch (s) {
    case Stratum::S11: return "S11";
    case Stratum::S10: return "S10";
    case Stratum::S01: return "S01";
    case Stratum::S00: return "S00";
  }
  return "?";
}

const char* effect_kind_name(EffectKind k) {
  switch (k) {
    case EffectKind::direct: return "direct";
    case EffectKind::total: return "total";
    case EffectKind::spillover: return "spillover";
    case EffectKind::naive: return "naive";
  }
  return "?";
}

std::vector<int> ExposureTable::units_in(Stratum s) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < stratum.size(); ++i)
    if (stratum[i] == s) out.push_back(static_cast<int>(i));
  return out;
}

LoadedPanel load_panel(const std::string& outcome_file,
                       const std::string& covariate_file,
                       const std::string& treatment_file,
                       const std::string& adjacency_file, int t0) {
  LoadedPanel out;

  // --- outcomes (long format) ---
  auto rows = read_csv(outcome_file, {"unit", "time", "outcome"});
  std::vector<std::string> unit_order, time_seen;
  std::unordered_map<std::string, int> unit_idx, time_idx;
  struct Cell { double value; int line_no; };
  std::map<std::pair<int, int>, Cell> cells;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 3)
      throw ValidationError(outcome_file + ":" + std::to_string(row.line_no) +
                            ": expected 3 fields, got " + std::to_string(row.fields.size()));
    const std::string& unit = row.fields[0];
    const std::string& time = row.fields[1];
    if (!unit_idx.count(unit)) {
      unit_idx[unit] = static_cast<int>(unit_order.size());
      unit_order.push_back(unit);
    }
    if (!time_idx.count(time)) {
      time_idx[time] = static_cast<int>(time_seen.size());
      time_seen.push_back(time);
    }
    auto key = std::make_pair(unit_idx[unit], time_idx[time]);
    if (cells.count(key))
      throw ValidationError(outcome_file + ":" + std::to_string(row.line_no) +
                            ": duplicate (unit,time) row for ('" + unit + "','" + time + "')");
    cells[key] = {parse_double(row.fields[2], outcome_file, row.line_no), row.line_no};
  }
  if (unit_order.empty()) throw ValidationError(outcome_file + ": no data rows");

  // Time axis: numeric order when every label parses as a number, otherwise
  // lexicographic. Both give a strict total order or fail validation later.
  std::vector<std::string> time_labels = time_seen;
  if (all_numeric(time_labels)) {
    std::sort(time_labels.begin(), time_labels.end(), [](const std::string& a, const std::string& b) {
      return std::strtod(a.c_str(), nullptr) < std::strtod(b.c_str(), nullptr);
    });
  } else {
    std::sort(time_labels.begin(), time_labels.end());
  }
  std::unordered_map<std::string, int> time_pos;
  for (std::size_t i = 0; i < time_labels.size(); ++i) time_pos[time_labels[i]] = static_cast<int>(i);

  const int n = static_cast<int>(unit_order.size());
  const int t = static_cast<int>(time_labels.size());
  Matrix outcomes(n, t);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < t; ++j) {
      auto it = cells.find({i, time_idx[time_labels[j]]});
      if (it == cells.end())
        throw ValidationError(outcome_file + ": missing outcome for unit '" + unit_order[i] +
                              "' at time '" + time_labels[j] + "'");
      outcomes(i, j) = it->second.value;
    }
  }

  PanelData panel;
  panel.outcomes = std::move(outcomes);
  panel.unit_ids = unit_order;
  panel.time_labels = time_labels;
  panel.t0 = t0;

  // --- covariates (wide, optional) ---
  if (!covariate_file.empty()) {
    auto crows = read_csv(covariate_file, {"unit"}, /*header_prefix_only=*/true);
    const auto& header = crows[0].fields;
    if (header.size() < 2)
      throw ValidationError(covariate_file + ": covariate file has no covariate columns");
    panel.covariate_names.assign(header.begin() + 1, header.end());
    const std::size_t p = panel.covariate_names.size();
    panel.covariates = Matrix(n, p);
    std::vector<int> seen(n, 0);
    for (std::size_t r = 1; r < crows.size(); ++r) {
      const auto& row = crows[r];
      if (row.fields.size() != p + 1)
        throw ValidationError(covariate_file + ":" + std::to_string(row.line_no) +
                              ": expected " + std::to_string(p + 1) + " fields");
      auto idx = panel.unit_index(row.fields[0]);
      if (!idx)
        throw ValidationError(covariate_file + ":" + std::to_string(row.line_no) +
                              ": unknown unit id '" + row.fields[0] + "'");
      if (seen[*idx]++)
        throw ValidationError(covariate_file + ":" + std::to_string(row.line_no) +
                              ": duplicate unit '" + row.fields[0] + "'");
      for (std::size_t c = 0; c < p; ++c)
        panel.covariates(*idx, c) = parse_double(row.fields[c + 1], covariate_file, row.line_no);
    }
    for (int i = 0; i < n; ++i)
      if (!seen[i])
        throw ValidationError(covariate_file + ": missing covariate row for unit '" +
                              panel.unit_ids[i] + "'");
  }

  // --- treatment roster ---
  auto trows = read_csv(treatment_file, {"unit", "treated"});
  std::vector<int> treated_flag(n, -1);
  for (std::size_t r = 1; r < trows.size(); ++r) {
    const auto& row = trows[r];
    if (row.fields.size() != 2)
      throw ValidationError(treatment_file + ":" + std::to_string(row.line_no) + ": expected 2 fields");
    auto idx = panel.unit_index(row.fields[0]);
    if (!idx)
      throw ValidationError(treatment_file + ":" + std::to_string(row.line_no) +
                            ": unknown unit id '" + row.fields[0] + "'");
    if (treated_flag[*idx] != -1)
      throw ValidationError(treatment_file + ":" + std::to_string(row.line_no) +
                            ": duplicate unit '" + row.fields[0] + "'");
    if (row.fields[1] != "0" && row.fields[1] != "1")
      throw ValidationError(treatment_file + ":" + std::to_string(row.line_no) +
                            ": treated must be 0 or 1, got '" + row.fields[1] + "'");
    treated_flag[*idx] = row.fields[1] == "1" ? 1 : 0;
  }
  for (int i = 0; i < n; ++i)
    if (treated_flag[i] == -1)
      throw ValidationError(treatment_file + ": missing treatment row for unit '" +
                            panel.unit_ids[i] + "'");
  TreatmentSchedule schedule;
  for (int i = 0; i < n; ++i)
    if (treated_flag[i]) schedule.treated_units.push_back(i);
  schedule.adoption_time = t0;  // 0-based index of first post period

  // --- adjacency edge list, symmetrized with a warning ---
  auto arows = read_csv(adjacency_file, {"unit_a", "unit_b"});
  std::set<std::pair<int, int>> directed;
  for (std::size_t r = 1; r < arows.size(); ++r) {
    const auto& row = arows[r];
    if (row.fields.size() != 2)
      throw ValidationError(adjacency_file + ":" + std::to_string(row.line_no) + ": expected 2 fields");
    auto a = panel.unit_index(row.fields[0]);
    auto b = panel.unit_index(row.fields[1]);
    if (!a)
      throw ValidationError(adjacency_file + ":" + std::to_string(row.line_no) +
                            ": unknown unit id '" + row.fields[0] + "'");
    if (!b)
      throw ValidationError(adjacency_file + ":" + std::to_string(row.line_no) +
                            ": unknown unit id '" + row.fields[1] + "'");
    if (*a == *b)
      throw ValidationError(adjacency_file + ":" + std::to_string(row.line_no) +
                            ": self-edge on unit '" + row.fields[0] + "'");
    directed.insert({*a, *b});
  }
  AdjacencyGraph graph;
  graph.neighbor_sets.assign(n, {});
  int asymmetric = 0;
  std::set<std::pair<int, int>> undirected;
  for (const auto& e : directed) {
    if (!directed.count({e.second, e.first})) ++asymmetric;
    undirected.insert({std::min(e.first, e.second), std::max(e.first, e.second)});
  }
  for (const auto& e : undirected) {
    graph.neighbor_sets[e.first].push_back(e.second);
    graph.neighbor_sets[e.second].push_back(e.first);
  }
  for (auto& nb : graph.neighbor_sets) std::sort(nb.begin(), nb.end());
  if (asymmetric > 0)
    out.warnings.push_back(adjacency_file + ": " + std::to_string(asymmetric) +
                           " edge(s) listed one-directionally; symmetrized");

  panel.validate();
  graph.validate();
  out.panel = std::move(panel);
  out.schedule = std::move(schedule);
  out.graph = std::move(graph);
  return out;
}

void write_outcomes_csv(const PanelData& panel, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError(path + ": cannot open for writing");
  os << "unit,time,outcome\n";
  for (int i = 0; i < panel.n_units(); ++i)
    for (int j = 0; j < panel.n_periods(); ++j)
      os << panel.unit_ids[i] << ',' << panel.time_labels[j] << ','
         << format_full(panel.outcomes(i, j)) << '\n';
}

ExposureTable compute_exposure(const TreatmentSchedule& schedule,
                               const AdjacencyGraph& graph, double q_threshold) {
  if (q_threshold < 0.0 || q_threshold > 1.0)
    throw ValidationError("q_threshold must be 0 (any-neighbor rule) or in (0,1]");
  const int n = graph.n_units();
  ExposureTable table;
  table.stratum.resize(n);
  table.q_values.resize(n);
  table.n_treated_neighbors.resize(n);
  table.n_neighbors.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& nb = graph.neighbors(i);
    int treated_nb = 0;
    for (int j : nb) treated_nb += schedule.is_treated(j) ? 1 : 0;
    table.n_neighbors[i] = static_cast<int>(nb.size());
    table.n_treated_neighbors[i] = treated_nb;
    int q;
    if (q_threshold <= 0.0) {
      q = treated_nb > 0 ? 1 : 0;
    } else {
      q = (!nb.empty() &&
           static_cast<double>(treated_nb) / static_cast<double>(nb.size()) >= q_threshold)
              ? 1
              : 0;
    }
    table.q_values[i] = q;
    const bool own = schedule.is_treated(i);
    table.stratum[i] = own ? (q ? Stratum::S11 : Stratum::S10)
                           : (q ? Stratum::S01 : Stratum::S00);
  }
  return table;
}

DonorPool build_donor_pool(int target, EffectKind kind,
                           const ExposureTable& exposure,
                           const AdjacencyGraph& graph, int small_pool_floor) {
  const int n = static_cast<int>(exposure.stratum.size());
  if (target < 0 || target >= n) throw ValidationError("target unit index out of range");
  const Stratum ts = exposure.stratum[target];
  const bool treated = ts == Stratum::S11 || ts == Stratum::S10;

  DonorPool pool;
  pool.target_unit = target;
  pool.effect_kind = kind;

  switch (kind) {
    case EffectKind::direct:
      if (ts != Stratum::S11)
        throw StratumMismatchError("direct effect requires target in S11; unit " +
                                   std::to_string(target) + " is in " + stratum_name(ts));
      for (int j = 0; j < n; ++j)
        if (j != target && exposure.stratum[j] == Stratum::S01 && !graph.adjacent(target, j))
          pool.donor_indices.push_back(j);
      break;
    case EffectKind::total:
      if (ts != Stratum::S11)
        throw StratumMismatchError("total effect requires target in S11; unit " +
                                   std::to_string(target) + " is in " + stratum_name(ts));
      for (int j = 0; j < n; ++j)
        if (j != target && exposure.stratum[j] == Stratum::S00)
          pool.donor_indices.push_back(j);
      break;
    case EffectKind::naive:
      if (!treated)
        throw StratumMismatchError("naive effect requires a treated target; unit " +
                                   std::to_string(target) + " is in " + stratum_name(ts));
      for (int j = 0; j < n; ++j)
        if (j != target && (exposure.stratum[j] == Stratum::S01 ||
                            exposure.stratum[j] == Stratum::S00))
          pool.donor_indices.push_back(j);
      break;
    case EffectKind::spillover:
      throw ValidationError("spillover has no donor pool; it is total minus direct");
  }

  if (pool.donor_indices.empty())
    throw EmptyDonorPoolError(std::string("empty ") + effect_kind_name(kind) +
                              " donor pool for unit " + std::to_string(target));
  if (static_cast<int>(pool.donor_indices.size()) < small_pool_floor)
    pool.warnings.push_back(std::string(effect_kind_name(kind)) + " pool for unit " +
                            std::to_string(target) + " has only " +
                            std::to_string(pool.donor_indices.size()) +
                            " donors (floor " + std::to_string(small_pool_floor) + ")");
  return pool;
}

}  // namespace strata
