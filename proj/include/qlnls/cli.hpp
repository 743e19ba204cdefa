// Batch verification front end: flat sectioned config, subcommands, outputs.
//
// Config files are plain text:
//   # comment
//   [scaling]
//   eps = 0.4, 0.2, 0.1, 0.05
//   N = 256
// Command-line `--set key=value` (or `section.key=value`) overrides file values.
#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlnls::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  using Section = std::map<std::string, std::string>;

  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  void set(const std::string& section, const std::string& key, const std::string& value);
  /// "key=value" goes into default_section, "section.key=value" anywhere.
  void apply_override(const std::string& assignment, const std::string& default_section);

  const Section& section(const std::string& name) const;
  bool has_section(const std::string& name) const { return values_.count(name) != 0; }
  const std::map<std::string, Section>& sections() const { return values_; }

 private:
  std::map<std::string, Section> values_;
};

/// One subcommand's parameters after defaults, file and overrides are merged.
class Resolved {
 public:
  Resolved(std::string command, Config::Section values) : command_(std::move(command)), values_(std::move(values)) {}

  const std::string& command() const { return command_; }
  const Config::Section& values() const { return values_; }

  std::string str(const std::string& key) const;
  double num(const std::string& key) const;
  double positive(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma- or whitespace-separated list of numbers.
  std::vector<double> list(const std::string& key) const;

 private:
  std::string command_;
  Config::Section values_;
};

/// Defaults for a subcommand; throws ConfigError for unknown commands.
Config::Section defaults_for(const std::string& command);

/// Merges defaults with the command's section of `config`; unknown keys are errors.
Resolved resolve(const std::string& command, const Config& config);

/// %.17g
std::string format_double(double x);

/// '#'-prefixed block with the resolved config and the convention tag.
std::string header_block(const Resolved& cfg);

/// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Full entry point; returns the process exit status (0 pass, 1 failed
/// criterion or compute error, 2 usage or configuration error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlnls::cli
