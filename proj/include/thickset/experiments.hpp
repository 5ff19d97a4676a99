#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "thickset/bounds.hpp"

namespace thickset {

/// A parsed experiment definition. `document` keeps the raw JSON so each
/// subcommand reads its own grids.
struct ExperimentConfig {
  std::string command;
  nlohmann::json document;
  BoundConstants constants;
  std::optional<std::uint64_t> seed_override;  // THICKSET_SEED
  int jobs = 1;
  bool verbose = false;

  /// Validates the command name and the constants block.
  static ExperimentConfig from_json(const nlohmann::json& document);
};

using Cell = std::variant<std::monostate, std::string, double, long long, bool>;

/// Rectangular result table. Reals render with 17 significant digits.
class ExperimentTable {
 public:
  explicit ExperimentTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  const std::vector<std::string>& failures() const noexcept { return failures_; }
  bool ok() const noexcept { return failures_.empty(); }

  void add_row(std::vector<Cell> row);
  /// Records a violated contract; the run then exits nonzero.
  void fail(std::string message);

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  std::string text(std::size_t row, const std::string& name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::string> failures_;
};

std::string format_real(double value);
std::string format_cell(const Cell& cell);

/// RFC-4180 CSV with LF line endings, header first.
std::string emit_csv(const ExperimentTable& table);
void write_csv(const ExperimentTable& table, const std::filesystem::path& path);

/// Dispatches to bound | thickness | concentration | verify | extremal | classify.
ExperimentTable run(const ExperimentConfig& config);

/// 0 when every asserted contract held, 1 otherwise.
int exit_status(const ExperimentTable& table);

}  // namespace thickset
