#pragma once

// Certificates that Z is Diophantine in the ring of integers of
// K = Q(p^(1/3), sqrt(-q)): assembly from the rank rules, JSON round trip,
// and an independent verifier that recomputes every cited fact.

#include <filesystem>
#include <string>
#include <vector>

#include "h10/curvedb.hpp"
#include "h10/rank_rules.hpp"

namespace h10 {

inline constexpr int kCertificateSchemaVersion = 1;

enum class StepKind { PSV, RankZeroCubic, RankOneQuadratic, PropMainTwist, Transfer };

const char* to_string(StepKind k) noexcept;
StepKind parse_step_kind(const std::string& s);

struct Step {
  long index = 0;  // 1-based position
  StepKind kind = StepKind::PSV;
  std::vector<Fact> premises;
  std::string conclusion;
};

struct FieldDescriptor {
  long p = 0;
  long q = 0;
};

struct Certificate {
  int schema_version = kCertificateSchemaVersion;
  FieldDescriptor field;
  std::string curve_label;
  long K_disc = -7;
  std::string created;
  std::vector<Step> steps;
};

/// Heegner fixtures available to emission and verification.
class FixtureSet {
 public:
  FixtureSet() = default;
  explicit FixtureSet(std::vector<HeegnerFixture> fixtures) : fixtures_(std::move(fixtures)) {}
  static FixtureSet load_dir(const std::filesystem::path& dir);

  const HeegnerFixture* find(const std::string& label, long K_disc) const;
  const std::vector<HeegnerFixture>& all() const noexcept { return fixtures_; }

 private:
  std::vector<HeegnerFixture> fixtures_;
};

struct EmitOptions {
  std::string curve_label = "557b1";
  long K_disc = -7;
  long precision = kDefaultPadicPrecision;
  std::string created;  // empty: current UTC time
};

/// Throws SieveMembershipFailed (naming p or q and the reason),
/// MissingFixture, or IncompleteChecklist.
Certificate emit_certificate(long p, long q, const CurveDB& db, const FixtureSet& fixtures, const EmitOptions& opts = {});

std::string final_statement(long p, long q);

json to_json(const Certificate& c);
/// Pretty-printed JSON, trailing newline.
std::string serialize(const Certificate& c);
/// Serialization with `created` blanked, for determinism checks.
std::string serialize_canonical(const Certificate& c);
Certificate certificate_from_json(const json& j);
/// Throws ParseError.
Certificate parse_certificate(const std::string& text);

struct VerifyEntry {
  long step = 0;  // 0: certificate-level check
  std::string check;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  bool ok = false;
  std::vector<VerifyEntry> entries;

  std::vector<VerifyEntry> failures() const;
};

/// Never throws on bad certificates; every problem becomes a failed entry.
VerifyReport verify_certificate(const Certificate& cert, const CurveDB& db, const FixtureSet& fixtures,
                                long precision = kDefaultPadicPrecision);

json to_json(const VerifyReport& r);

}  // namespace h10
