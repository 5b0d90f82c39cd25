// grdt-infer <subcommand> <file.grdt> [flags]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "grdt/driver.hpp"

namespace {

int usage_exit() { return static_cast<int>(grdt::Exit::Usage); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type inference for a functional language with guarded recursive data types"};
  app.require_subcommand(1);

  std::string file;
  bool json = false;
  grdt::Options opts;

  struct Sub {
    grdt::Command cmd;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  auto add = [&](grdt::Command cmd, const std::string& desc) {
    CLI::App* s = app.add_subcommand(grdt::to_string(cmd), desc);
    s->add_option("file", file, "program file")->required();
    s->add_flag("--json", json, "print a JSON report");
    s->add_option("--max-iter", opts.max_iter, "guess refinement rounds for recursive bindings")
        ->check(CLI::PositiveNumber);
    s->add_flag("--naive", opts.naive, "infer recursive bindings without a guessed type");
    subs.push_back({cmd, s});
    return s;
  };
  CLI::App* infer = add(grdt::Command::Infer, "infer a type for every binding");
  infer->add_flag("--suggest", opts.suggest, "on failure, report which types must be known");
  add(grdt::Command::Check, "check bindings against their annotations");
  CLI::App* diagnose = add(grdt::Command::Diagnose, "report which types must be known for inference to succeed");
  diagnose->add_option("--assume", opts.assume, "extra equations, e.g. \"t1=a\"");
  CLI::App* principal = add(grdt::Command::Principal, "search for principal types by enumerating solutions");
  principal->add_option("--max-solutions", opts.budget.max_solutions, "stop after this many solutions")
      ->check(CLI::PositiveNumber);
  principal->add_option("--max-candidates", opts.budget.max_candidates, "implied equation sets kept per alternative")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : usage_exit();
  }

  grdt::Command cmd = grdt::Command::Infer;
  for (const auto& s : subs) {
    if (s.app->parsed()) cmd = s.cmd;
  }

  std::ifstream in(file);
  if (!in) {
    std::cerr << "grdt-infer: cannot read " << file << "\n";
    return usage_exit();
  }
  std::stringstream src;
  src << in.rdbuf();

  try {
    grdt::Report report = grdt::run(cmd, src.str(), file, opts);
    if (json)
      std::cout << report.json().dump(2) << "\n";
    else
      std::cout << report.human();
    return static_cast<int>(report.exit);
  } catch (const grdt::UsageError& e) {
    if (json) {
      nlohmann::ordered_json j;
      j["schema"] = 1;
      j["command"] = grdt::to_string(cmd);
      j["file"] = file;
      j["exit_code"] = usage_exit();
      j["error"] = e.what();
      std::cout << j.dump(2) << "\n";
    }
    std::cerr << "grdt-infer: " << e.what() << "\n";
    return usage_exit();
  }
}
