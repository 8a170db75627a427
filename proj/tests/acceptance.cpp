// Runs every experiment preset and prints one PASS/FAIL line per criterion.
// Usage: acceptance [criterion...] [--out DIR]

#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#include "kc/experiments.hpp"

int main(int argc, char** argv) {
  std::set<int> only;
  std::string out_dir;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out" && i + 1 < argc) {
      out_dir = argv[++i];
    } else {
      only.insert(std::atoi(arg.c_str()));
    }
  }

  int failed = 0;
  const auto& names = kc::experiment_names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    const int criterion = static_cast<int>(k) + 1;
    if (!only.empty() && only.count(criterion) == 0) continue;
    const kc::ExperimentReport r = kc::run_experiment(names[k]);
    if (!out_dir.empty()) kc::write_report(r, out_dir);
    const bool pass = r.passed();
    if (!pass) ++failed;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << " [" << r.id << "] " << r.title << " ("
              << (r.counted_rows() - r.failed_rows()) << "/" << r.counted_rows() << " checks, " << r.seconds << " s)\n";
    for (const kc::ExperimentRow& row : r.rows) {
      if (row.counted && !row.pass) {
        std::cout << "    failed: " << row.params << " | " << row.quantity << " | " << row.value << " " << row.relation
                  << " " << row.bound << "\n";
      }
    }
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
