#pragma once

#include <stdexcept>
#include <string>

namespace isstealth {

/// Raised when no ν satisfies both the SNR floor and the surface-gain disk.
class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the config reader; carries the offending key and 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string key, int line, const std::string& what)
      : std::runtime_error(format(key, line, what)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string msg;
    if (line > 0) msg += "line " + std::to_string(line) + ": ";
    if (!key.empty()) msg += "key '" + key + "': ";
    return msg + what;
  }

  std::string key_;
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isstealth
