#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wronsky {

struct VerifyCase {
  std::string name;
  bool pass;
  std::string detail;  // normalized residuals or a mismatch description
};

struct VerifyReport {
  std::string id;
  std::vector<VerifyCase> cases;

  int failures() const;
};

/// Known suite identifiers.
const std::vector<std::string>& verify_ids();

/// Runs one deterministic verification suite.  Unknown ids raise
/// PreconditionError.  All randomness comes from the given seed, so output
/// is stable for a fixed seed.
VerifyReport run_verify(const std::string& id, std::uint64_t seed);

}  // namespace wronsky
