// Acceptance suite: runs every pinned criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is nonzero if any
// criterion fails.

#include <cstdio>
#include <cstdlib>

#include "stam/repro.hpp"

int main() {
  stam::ReproOptions opt;
  if (const char* env = std::getenv("STAM_SEED"))
    opt.seed = std::strtoull(env, nullptr, 10);

  const auto results = stam::run_all_criteria(opt);
  bool all_pass = true;
  for (const auto& c : results) {
    std::printf("%s criterion %2d: %s (%.2f s, cap %.0f s)\n",
                c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.elapsed_seconds, c.runtime_cap_seconds);
    for (const auto& note : c.notes) std::printf("      %s\n", note.c_str());
    all_pass = all_pass && c.pass;
  }
  std::printf("%s: %zu criteria\n", all_pass ? "ALL PASS" : "FAILURES",
              results.size());
  return all_pass ? 0 : 1;
}
