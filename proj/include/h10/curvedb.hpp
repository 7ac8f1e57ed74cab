#pragma once

// JSON ingestion of curve records and Heegner fixtures, plus JSON views of
// the report types for the CLI.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "h10/curve.hpp"
#include "h10/gl2_density.hpp"
#include "h10/padic.hpp"
#include "h10/sieves.hpp"

namespace h10 {

using json = nlohmann::json;

class CurveDB {
 public:
  CurveDB() = default;
  /// Validates every record; rejects duplicate labels.
  explicit CurveDB(std::vector<CurveRecord> records);

  const std::vector<CurveRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  const CurveRecord* find(const std::string& label) const;
  /// Throws InvalidArgument for an unknown label.
  const CurveRecord& at(const std::string& label) const;

 private:
  std::vector<CurveRecord> records_;
};

/// Throws InvariantViolation naming the label and field at fault.
void validate_record(const CurveRecord& rec);

CurveRecord curve_from_json(const json& j);
json to_json(const CurveRecord& rec);

/// ParseError on malformed JSON or schema, InvariantViolation on bad records.
CurveDB parse_curvedb(const std::string& text);
CurveDB load_curvedb(const std::filesystem::path& path);

HeegnerFixture fixture_from_json(const json& j);
HeegnerFixture load_heegner_fixture(const std::filesystem::path& path);
/// The fixture in `dir` for (label, K_disc), if any.
std::optional<HeegnerFixture> find_heegner_fixture(const std::filesystem::path& dir, const std::string& label, long K_disc);

json to_json(const DensityReport& r);
json to_json(const SieveReport& r);
json to_json(const PadicNum& x);
json to_json(const KLReport& r);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace h10
