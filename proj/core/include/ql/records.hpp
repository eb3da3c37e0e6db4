#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace ql {

inline constexpr const char* kRecordSchemaVersion = "1";

/// One structured result: the payload of a single operation, keyed by the
/// configuration hash for the determinism contract (same hash + operation
/// implies an identical payload).
struct ResultRecord {
  std::string op;           // subcommand / operation name
  std::string config_hash;  // hex SHA-256 of the canonical config
  nlohmann::json payload;
  std::string version = kRecordSchemaVersion;

  nlohmann::json to_json() const;
  static ResultRecord from_json(const nlohmann::json& j);
};

/// Serializes records as JSON Lines (one object per record) and atomically
/// replaces the target file, so readers never observe a torn write.
void write_records(const std::string& path,
                   const std::vector<ResultRecord>& records);

/// Reads a JSON Lines record file; a trailing torn line is ignored so
/// interrupted producers can be resumed, any other malformed content throws
/// ConfigError.
std::vector<ResultRecord> read_records(const std::string& path);

/// RFC 4180 CSV: header row plus data rows, fields quoted when they contain
/// commas, quotes, or newlines. Rows must all have the header's width.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

}  // namespace ql
