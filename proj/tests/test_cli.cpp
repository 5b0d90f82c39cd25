#include <doctest.h>

#include <array>
#include <cstdio>
#include <json.hpp>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int exit = -1;
  std::string out;
};

Run grdt_infer(const std::string& args) {
  std::string cmd = std::string(GRDT_INFER) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(GRDT_FIXTURES) + "/" + name; }

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("infer prints the inferred scheme") {
  Run r = grdt_infer("infer " + fixture("erk_plus.grdt"));
  CHECK(r.exit == 0);
  CHECK(contains(r.out, "forall a. Erk a -> Int -> Int"));
}

TEST_CASE("type errors exit 1 and suggestions exit 2") {
  Run r = grdt_infer("infer " + fixture("erk_branches.grdt"));
  CHECK(r.exit == 1);
  CHECK(contains(r.out, "t1=Int, t1=Bool"));
  Run s = grdt_infer("infer --suggest " + fixture("erk_branches.grdt"));
  CHECK(s.exit == 2);
  CHECK(contains(s.out, "annotate the type t1"));
}

TEST_CASE("naive recursion fails where Rec-Guess succeeds") {
  CHECK(grdt_infer("infer --naive " + fixture("size.grdt")).exit == 1);
  Run r = grdt_infer("infer " + fixture("size.grdt"));
  CHECK(r.exit == 0);
  CHECK(contains(r.out, "forall a. R a -> Int"));
}

TEST_CASE("check accepts and rejects annotations") {
  CHECK(grdt_infer("check " + fixture("eval.grdt")).exit == 0);
  CHECK(grdt_infer("check " + fixture("eval_wrong.grdt")).exit == 1);
}

TEST_CASE("diagnose with and without assumptions") {
  Run r = grdt_infer("diagnose " + fixture("erk_branches.grdt"));
  CHECK(r.exit == 2);
  Run a = grdt_infer("diagnose --assume \"t1=a\" " + fixture("erk_branches.grdt"));
  CHECK(a.exit == 0);
  CHECK(contains(a.out, "forall a. Erk a -> a"));
  CHECK(grdt_infer("diagnose " + fixture("eval.grdt")).exit == 3);
  CHECK(grdt_infer("diagnose --assume \"t1=\" " + fixture("erk_branches.grdt")).exit == 3);
}

TEST_CASE("principal verdicts and budgets") {
  Run p = grdt_infer("principal " + fixture("erk_enumerate.grdt"));
  CHECK(p.exit == 0);
  CHECK(contains(p.out, "forall a. Erk a -> a -> a"));
  Run n = grdt_infer("principal " + fixture("erk_plus.grdt"));
  CHECK(n.exit == 2);
  CHECK(contains(n.out, "no principal type"));
  Run u = grdt_infer("principal --max-solutions 1 " + fixture("erk_plus.grdt"));
  CHECK(u.exit == 2);
  CHECK(contains(u.out, "unknown"));
}

TEST_CASE("usage errors exit 3") {
  CHECK(grdt_infer("").exit == 3);
  CHECK(grdt_infer("infer").exit == 3);
  CHECK(grdt_infer("infer " + fixture("missing.grdt")).exit == 3);
  CHECK(grdt_infer("infer --bogus " + fixture("erk_plus.grdt")).exit == 3);
  CHECK(grdt_infer("frobnicate " + fixture("erk_plus.grdt")).exit == 3);
}

TEST_CASE("JSON output carries the schema version") {
  Run r = grdt_infer("infer --json " + fixture("identity.grdt"));
  REQUIRE(r.exit == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "infer");
  CHECK(j["exit_code"] == 0);
  REQUIRE(j["bindings"].size() == 4);
  CHECK(j["bindings"][3]["name"] == "swap");
  CHECK(j["bindings"][3]["type"] == "forall a b. (a, b) -> (b, a)");
}

TEST_CASE("output is deterministic") {
  for (const char* cmd : {"infer --suggest --json", "principal --json", "diagnose --json"}) {
    std::string args = std::string(cmd) + " " + fixture("erk_branches.grdt");
    CHECK(grdt_infer(args).out == grdt_infer(args).out);
  }
}
