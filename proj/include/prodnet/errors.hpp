#pragma once

#include <stdexcept>
#include <string>

namespace prodnet {

// Base class for every failure the library reports deliberately.
// Anything else escaping a prodnet call is a bug.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- data and table construction ----------------------------------------

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NegativeFlow : Error {
  NegativeFlow(const std::string& where, long j, long i)
      : Error("negative value in " + where + " at (" + std::to_string(j) +
              "," + std::to_string(i) + ")") {}
};

struct MarketClearingViolation : Error {
  MarketClearingViolation(const std::string& code, double gap)
      : Error("row total of industry " + code +
              " differs from gross output by relative gap " +
              std::to_string(gap)) {}
};

struct InvalidRating : Error {
  using Error::Error;
};

struct SingularSystem : Error {
  using Error::Error;
};

// ---- calibration ----------------------------------------------------------

struct NoDataAnywhere : Error {
  using Error::Error;
};

struct NonPositiveTurnover : Error {
  NonPositiveTurnover(const std::string& code, int year)
      : Error("non-positive turnover for " + code + " in " +
              std::to_string(year)) {}
};

struct EmptyInput : Error {
  using Error::Error;
};

struct UnmappedTarget : Error {
  explicit UnmappedTarget(const std::string& code)
      : Error("crosswalk target receives no source: " + code) {}
};

struct ZeroWeightTarget : Error {
  explicit ZeroWeightTarget(const std::string& code)
      : Error("crosswalk target receives only zero weight: " + code) {}
};

struct ZeroLaborIncome : Error {
  using Error::Error;
};

// ---- production and dynamics ----------------------------------------------

struct NegativeInventory : Error {
  NegativeInventory(long j, long i)
      : Error("negative inventory at input " + std::to_string(j) +
              ", industry " + std::to_string(i)) {}
};

struct CriticalOverdraw : Error {
  CriticalOverdraw(long j, long i, double need, double have)
      : Error("usage of guaranteed input " + std::to_string(j) +
              " by industry " + std::to_string(i) + " exceeds stock: needs " +
              std::to_string(need) + ", holds " + std::to_string(have)) {}
};

struct NonPositiveIncome : Error {
  using Error::Error;
};

struct ZeroConsumption : Error {
  using Error::Error;
};

struct AllGoodsShocked : Error {
  using Error::Error;
};

// ---- shocks ----------------------------------------------------------------

struct CalendarOrder : Error {
  using Error::Error;
};

struct UnknownScenario : Error {
  explicit UnknownScenario(const std::string& s)
      : Error("unknown scenario: " + s) {}
};

struct UnknownKind : Error {
  explicit UnknownKind(const std::string& s)
      : Error("unknown production function: " + s) {}
};

struct MissingAttribute : Error {
  explicit MissingAttribute(const std::string& code)
      : Error("no attributes for industry " + code) {}
};

struct UnknownIndustry : Error {
  explicit UnknownIndustry(const std::string& code)
      : Error("unknown industry code: " + code) {}
};

struct ZeroPPI : Error {
  using Error::Error;
};

// ---- analysis ----------------------------------------------------------------

struct PanelMismatch : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  using Error::Error;
};

struct NonPositiveValue : Error {
  NonPositiveValue(const std::string& name, long row)
      : Error("log of non-positive value in " + name + " at row " +
              std::to_string(row)) {}
};

// ---- files and configuration -------------------------------------------------

struct CsvFormat : Error {
  CsvFormat(const std::string& path, long line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what) {}
};

struct MissingColumn : Error {
  MissingColumn(const std::string& path, const std::string& col)
      : Error(path + ": missing column '" + col + "'") {}
};

struct DuplicateCode : Error {
  explicit DuplicateCode(const std::string& code)
      : Error("duplicate industry code: " + code) {}
};

struct BadNumber : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace prodnet
