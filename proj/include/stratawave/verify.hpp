#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stratawave/serialize.hpp"

namespace stratawave {

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string summary;  // one line
  json metrics;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20261016;
};

// "AC-1" .. "AC-9"
const std::vector<std::string>& criterion_ids();

CriterionResult run_criterion(const std::string& id, const VerifyOptions& options = {});

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& ids, const VerifyOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& progress = {});

json to_json(const CriterionResult& r);

}  // namespace stratawave
