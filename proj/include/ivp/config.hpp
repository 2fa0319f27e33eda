#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>

namespace ivp {

/** Flat "key = value" text with '#' comments and blank lines.  Duplicate
 *  keys are an error. */
std::map<std::string, std::string> parse_config_text(std::istream& in);
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/** Typed access that tracks which keys were consumed; finish() rejects any
 *  leftover key by name, so unknown keys never pass silently. */
class ConfigView {
 public:
  explicit ConfigView(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);

  /** Throws std::invalid_argument naming the first unconsumed key. */
  void finish() const;

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

}  // namespace ivp
