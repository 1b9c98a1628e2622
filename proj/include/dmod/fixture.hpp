#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dmod/json_io.hpp"

namespace dmod {

// Closed-form expression over rationals: + - * / ^, unary minus, parentheses,
// poch(a, n), fact(n), binom(n, k) and bound identifiers.
Rational eval_closed_form(const std::string& text, const Bindings& bindings);

// Solver setup from the textual flags shared by the CLI and fixtures.
struct SolveRequest {
  std::string op;
  Bindings bindings;
  std::string divisor = "d";      // d | x | xd:LAMBDA | special-dc
  std::string order = "standard";  // standard | dual | graded
  std::string pair = "xd";        // xd | adag: generator pair the operator is rewritten into
  std::string seed = "1";
  unsigned precision = 16;
};

SolveConfig build_config(const SolveRequest& req);
// Seed polynomial in the raise generator of the working orientation.
QPoly seed_polynomial(const std::string& text, const Bindings& bindings, const GeneratorPair& working);

struct Fixture {
  std::string name;
  std::string note;
  SolveRequest request;
  std::string oracle;      // coefficient as a function of k
  std::string power = "k";  // exponent as a function of k
  unsigned terms = 0;      // k = 0 .. terms-1
  // Valuation band check n+1 <= nu(Phi(S_n)) <= 2n+2 instead of an oracle.
  bool band = false;
  unsigned iterations = 0;
};

struct FixtureMismatch {
  unsigned power;
  Rational expected, got;
};

struct FixtureReport {
  std::string name;
  bool passed = false;
  std::vector<FixtureMismatch> mismatches;
  std::vector<Valuation> residual_valuations;
  std::string error;
};

Fixture fixture_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Fixture load_fixture(const std::filesystem::path& path);
FixtureReport run_fixture(const Fixture& f);
Json report_to_json(const FixtureReport& r);

}  // namespace dmod
