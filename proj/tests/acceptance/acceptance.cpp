// Acceptance driver: one PASS/FAIL line per criterion.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stratawave/verify.hpp"

using namespace stratawave;

int main(int argc, char** argv) {
  CLI::App app{"stratawave acceptance criteria"};
  std::string only, report;
  VerifyOptions opt;
  app.add_option("--only", only, "comma-separated subset, e.g. AC-2,AC-7");
  app.add_option("--seed", opt.seed, "seed for the randomized criteria");
  app.add_option("--json", report, "write the full report here");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::string> ids;
  std::stringstream ss(only);
  for (std::string id; std::getline(ss, id, ',');)
    if (!id.empty()) ids.push_back(id);
  for (const auto& id : ids) {
    bool known = false;
    for (const auto& c : criterion_ids()) known = known || c == id;
    if (!known) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
  }

  const auto results = run_acceptance(ids, opt, [](const CriterionResult& r) {
    std::printf("%-5s %s  %s (%.1f s)\n", r.id.c_str(), r.pass ? "PASS" : "FAIL", r.summary.c_str(), r.seconds);
    std::fflush(stdout);
  });

  int failed = 0;
  json all = json::array();
  for (const auto& r : results) {
    failed += r.pass ? 0 : 1;
    all.push_back(to_json(r));
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  if (!report.empty()) std::ofstream(report) << all.dump(2) << '\n';
  return failed ? 1 : 0;
}
