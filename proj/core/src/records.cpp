#include "ql/records.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ql/errors.hpp"

namespace ql {

using nlohmann::json;

json ResultRecord::to_json() const {
  json j;
  j["op"] = op;
  j["config_hash"] = config_hash;
  j["payload"] = payload;
  j["version"] = version;
  return j;
}

ResultRecord ResultRecord::from_json(const json& j) {
  ResultRecord r;
  try {
    r.op = j.at("op").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.payload = j.at("payload");
    r.version = j.at("version").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed result record: ") + e.what());
  }
  return r;
}

void write_records(const std::string& path,
                   const std::vector<ResultRecord>& records) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot write records file: " + tmp);
    for (const auto& r : records) out << r.to_json().dump() << "\n";
    out.flush();
    if (!out) throw ConfigError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("atomic replace failed: " + path);
}

std::vector<ResultRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open records file: " + path);
  std::vector<ResultRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      if (in.eof()) break;  // torn trailing line from an interrupted writer
      throw ConfigError("malformed record line in " + path);
    }
    out.push_back(ResultRecord::from_json(j));
  }
  return out;
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += "\"\"";
      else q += ch;
    }
    q += "\"";
    return q;
  };
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    if (row.size() != header.size())
      throw std::invalid_argument("to_csv: row width differs from header");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << field(row[i]);
    }
    os << "\r\n";
  };
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) os << ",";
    os << field(header[i]);
  }
  os << "\r\n";
  for (const auto& r : rows) emit(r);
  return os.str();
}

}  // namespace ql
