#pragma once

// Pipeline orchestration behind the nodalcert tool: a flat config file of
// `section.key = value` lines, and the solve / classify / verify / render /
// pipeline commands.

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nodalcert::cli {

// Parsed config. Keys are checked against the known set at parse time;
// values are kept as text and converted on access, with diagnostics that
// name the file, line and key.
class Config {
 public:
  // Throws ParseError.
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  // Command-line override; throws ParseError for an unknown key.
  void set(const std::string& key, const std::string& value);

  [[nodiscard]] bool has(const std::string& key) const;
  // Throw ConfigError naming the key when it is missing or malformed.
  [[nodiscard]] std::string str(const std::string& key) const;
  [[nodiscard]] std::string str(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] double number(const std::string& key, double fallback) const;
  [[nodiscard]] std::optional<double> maybe_number(const std::string& key) const;
  [[nodiscard]] int integer(const std::string& key) const;
  [[nodiscard]] int integer(const std::string& key, int fallback) const;
  [[nodiscard]] bool flag(const std::string& key, bool fallback) const;
  // Whitespace separated numbers.
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const;
  // "k:v, k:v" pairs.
  [[nodiscard]] std::map<double, double> pairs(const std::string& key) const;

  // "file:line: key" for diagnostics.
  [[nodiscard]] std::string where(const std::string& key) const;

  static const std::vector<std::string>& known_keys();

 private:
  struct Entry {
    std::string value;
    int line = 0;  // 0 = command line
  };
  std::map<std::string, Entry> entries_;
  std::string source_;
};

enum class Command { Solve, Classify, Verify, Render, Pipeline };
const char* to_string(Command c);
// Throws ConfigError.
Command parse_command(const std::string& name);

inline constexpr int kExitCertified = 0;
inline constexpr int kExitNotCertified = 2;
inline constexpr int kExitError = 1;

// Runs one command. Summary lines go to out, diagnostics to err. Returns 0
// (certified, or success for commands without a verdict), 2 (not certified)
// or 1 (error).
int run(Command command, const Config& config, std::ostream& out, std::ostream& err);

}  // namespace nodalcert::cli
