#pragma once

// Panel data model: outcome/covariate matrices, treatment schedule, the
// interference graph, exposure strata, and donor-pool construction. All types
// are immutable after construction; validation happens at the boundary.

#include <optional>
#include <string>
#include <vector>

#include "stratasynth/matrix.hpp"

namespace strata {

struct PanelData {
  Matrix outcomes;                        // N x T
  Matrix covariates;                      // N x p, p may be 0
  std::vector<std::string> unit_ids;      // N distinct ids, input order
  std::vector<std::string> time_labels;   // T strictly ordered labels
  std::vector<std::string> covariate_names;
  int t0 = 0;                             // pre-treatment periods, 2 <= t0 < T

  int n_units() const { return static_cast<int>(unit_ids.size()); }
  int n_periods() const { return static_cast<int>(time_labels.size()); }
  int n_covariates() const { return static_cast<int>(covariate_names.size()); }
  std::optional<int> unit_index(const std::string& id) const;

  // Throws ValidationError if any type invariant is violated.
  void validate() const;
};

struct TreatmentSchedule {
  std::vector<int> treated_units;  // sorted unit indices
  int adoption_time = 0;           // == t0 + 1, first post period (0-based index t0)

  bool is_treated(int unit) const;
};

struct AdjacencyGraph {
  std::vector<std::vector<int>> neighbor_sets;  // per unit, sorted

  int n_units() const { return static_cast<int>(neighbor_sets.size()); }
  bool adjacent(int a, int b) const;
  const std::vector<int>& neighbors(int unit) const { return neighbor_sets[unit]; }
  // Units reachable within two hops, excluding the unit itself. Sorted.
  std::vector<int> two_hop_neighborhood(int unit) const;
  void validate() const;  // symmetric + irreflexive
};

enum class Stratum { S11, S10, S01, S00 };
const char* stratum_name(Stratum s);

struct ExposureTable {
  std::vector<Stratum> stratum;            // per unit
  std::vector<int> q_values;               // per unit, 0/1
  std::vector<int> n_treated_neighbors;    // per unit
  std::vector<int> n_neighbors;            // per unit

  std::vector<int> units_in(Stratum s) const;  // ascending unit order
};

enum class EffectKind { direct, total, spillover, naive };
const char* effect_kind_name(EffectKind k);

struct DonorPool {
  int target_unit = -1;
  EffectKind effect_kind = EffectKind::direct;
  std::vector<int> donor_indices;  // deterministic input-unit order
  std::vector<std::string> warnings;
};

struct LoadedPanel {
  PanelData panel;
  TreatmentSchedule schedule;
  AdjacencyGraph graph;
  std::vector<std::string> warnings;
};

// Reads the four CSV inputs (covariate_file may be empty) and returns fully
// validated objects. Errors carry file/line context.
LoadedPanel load_panel(const std::string& outcome_file,
                       const std::string& covariate_file,
                       const std::string& treatment_file,
                       const std::string& adjacency_file, int t0);

// Long-format outcome CSV writer, full precision (reload reproduces the
// matrix bit-exactly).
void write_outcomes_csv(const PanelData& panel, const std::string& path);

// Classifies every unit into S11/S10/S01/S00. q_threshold = 0 means the
// "any treated neighbor" rule; a value in (0,1] switches to
// q = 1 iff treated-neighbor fraction >= q_threshold.
ExposureTable compute_exposure(const TreatmentSchedule& schedule,
                               const AdjacencyGraph& graph,
                               double q_threshold = 0.0);

// Donor pools per effect kind: direct = S01 \ N(target), total = S00,
// naive = all untreated units. Throws EmptyDonorPoolError / StratumMismatchError.
DonorPool build_donor_pool(int target, EffectKind kind,
                           const ExposureTable& exposure,
                           const AdjacencyGraph& graph,
                           int small_pool_floor = 5);

}  // namespace strata
