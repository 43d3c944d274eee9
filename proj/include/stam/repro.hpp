#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace stam {

struct ReproOptions {
  bool quick = false;          // coarser grids, doubled tolerances
  std::uint64_t seed = 20250810ULL;
  int threads = 0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool violation_expected = false;  // "found the sought violation" = success
  double elapsed_seconds = 0.0;
  double runtime_cap_seconds = 0.0;
  std::vector<std::string> notes;
  std::map<std::string, double> metrics;
};

// The thirteen pinned reproduction checks. Each runs at its stated tolerance
// and enforces its runtime cap.
CriterionResult criterion_counterexample_eps(const ReproOptions& opt,
                                             double eps = 0.1);       // 1
CriterionResult criterion_trace_example(const ReproOptions& opt);     // 2
CriterionResult criterion_det_supermodular(const ReproOptions& opt);  // 3
CriterionResult criterion_fsa_gaussian(const ReproOptions& opt);      // 4
CriterionResult criterion_extreme_points(const ReproOptions& opt);    // 5
CriterionResult criterion_bc_formula(const ReproOptions& opt);        // 6
CriterionResult criterion_dim2_ray(const ReproOptions& opt);          // 7
CriterionResult criterion_de_bruijn(const ReproOptions& opt);         // 8
CriterionResult criterion_qsup_negative(const ReproOptions& opt);     // 9
CriterionResult criterion_submodular_log(const ReproOptions& opt);    // 10
CriterionResult criterion_stacking(const ReproOptions& opt);          // 11
CriterionResult criterion_cesaro(const ReproOptions& opt);            // 12
CriterionResult criterion_dim3_gap(const ReproOptions& opt);          // 13

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids,
                                          const ReproOptions& opt);
std::vector<CriterionResult> run_all_criteria(const ReproOptions& opt);

// Criterion groups behind the `repro` subcommands.
std::vector<int> criteria_for_target(const std::string& target);  // thm1..thm5, prop-no, all

}  // namespace stam
