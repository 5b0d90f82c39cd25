#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "grdt/enumerate.hpp"
#include "grdt/syntax.hpp"
#include "grdt/types.hpp"

namespace grdt {

enum class Command : std::uint8_t { Infer, Check, Diagnose, Principal };

std::string to_string(Command c);

struct Options {
  bool suggest = false;
  bool naive = false;
  std::string assume;
  int max_iter = 5;
  Budget budget;
};

enum class Exit : int { Ok = 0, TypeError = 1, NeedsAnnotation = 2, Usage = 3 };

/// Invalid input for the requested command: parse errors, annotations
/// given to diagnose, nested case expressions.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BindingReport {
  std::string name;
  Loc loc;
  Exit exit = Exit::Ok;
  std::string status;
  std::optional<std::string> type;
  std::vector<std::string> lines;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();
};

struct Report {
  Command command = Command::Infer;
  std::string file;
  std::vector<BindingReport> bindings;
  Exit exit = Exit::Ok;

  std::string human() const;
  nlohmann::ordered_json json() const;
};

/// Runs a subcommand over every top-level binding in source order; the
/// schemes of earlier bindings are in scope for later ones.
/// Throws UsageError.
Report run(Command cmd, const std::string& source, const std::string& file, const Options& opts);

/// Names for the variables of a binding's type: variables under a data
/// type get a, b, ...; the others t1, t2, ... in order of occurrence.
class DisplayNames {
 public:
  DisplayNames(const Environment& env, Substitution theta, const Type& t);

  std::string var(const std::string& v);
  Type show_type(const Type& t);
  std::string show(const Type& t) { return to_string(show_type(t)); }
  std::string show(const Equation& e);
  std::string show(const Constraint& c);
  /// Internal variable behind a display name.
  std::optional<std::string> internal(const std::string& display) const;
  const Substitution& theta() const { return theta_; }

 private:
  void assign(const Type& t, bool under_data);
  std::string next_plain();

  const Environment& env_;
  Substitution theta_;
  std::map<std::string, std::string> names_;
  std::map<std::string, std::string> back_;
  int letters_ = 0;
  int plain_ = 0;
};

}  // namespace grdt
