#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;  // stdout and stderr together
};

Run run(const std::string& args) {
  std::string cmd = std::string(BINEX_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string cat(const std::string& file) { return binex::test::catalog_path(file); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::map<std::string, std::string> porcelain(const std::string& s) {
  std::map<std::string, std::string> kv;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string temp_file(const std::string& name, const std::string& body) {
  std::string path = std::string("/tmp/binex-cli-") + name;
  std::ofstream(path) << body;
  return path;
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

}  // namespace

TEST_CASE("documented examples") {
  auto r = run("classify " + cat("k3.g") + " --budget 100");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "SC, sheets=1");
  r = run("explore " + cat("p2.g") + " --start 0 --max-moves 100000");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "Halted k=3, visited 2/2");
  r = run("cover-check " + cat("c8.g") + " " + cat("c4.g") + " " + cat("c8-to-c4.map"));
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "graph-covering: yes; simplicial-covering: yes");
}

TEST_CASE("negative verdicts exit 0") {
  auto r = run("cover-check " + cat("c6.g") + " " + cat("k3.g") + " " + cat("c6-to-k3.map"));
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "graph-covering: no; simplicial-covering: no");
  r = run("contract " + cat("c4.g") + " --loop 0,1,2,3,0 --k 20");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "contractible within 20 moves: no");
  r = run("classify " + cat("rp2.g"));
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "FNT_not_SC, sheets=2");
}

TEST_CASE("budget-exceeded reports are labelled") {
  auto r = run("explore " + cat("c4.g") + " --max-moves 2000");
  CHECK(r.status == 0);
  CHECK(first_line(r.out).rfind("BudgetExhausted after 2000 moves", 0) == 0);
  CHECK(contains(r.out, "not a negative verdict"));
  CHECK_FALSE(contains(r.out, "Halted"));
  auto kv = porcelain(run("explore " + cat("c4.g") + " --max-moves 2000 --porcelain").out);
  CHECK(kv["verdict"] == "BudgetExhausted");
  CHECK(kv["budget_exhausted"] == "1");
  CHECK(kv["moves"] == "2000");

  r = run("classify " + cat("c5.g") + " --budget 200");
  CHECK(r.status == 0);
  CHECK(first_line(r.out).rfind("ExceedsBudget", 0) == 0);
  CHECK(contains(r.out, "not a negative verdict"));
  kv = porcelain(run("classify " + cat("c5.g") + " --budget 200 --porcelain").out);
  CHECK(kv["verdict"] == "ExceedsBudget");
  CHECK(kv["budget_exceeded"] == "1");

  r = run("ucover " + cat("c4.g") + " --budget 50");
  CHECK(r.status == 0);
  CHECK(first_line(r.out).rfind("BudgetExceeded", 0) == 0);
  CHECK(contains(r.out, "not a negative verdict"));

  // a tiny state cap turns a refutation into an explicit budget report
  r = run("contract " + cat("c5.g") + " --loop 0,1,2,3,4,0 --k 30 --state-cap 50");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "budget"));
  CHECK_FALSE(contains(first_line(r.out), ": no"));
  kv = porcelain(run("contract " + cat("c5.g") + " --loop 0,1,2,3,4,0 --k 30 --state-cap 50 --porcelain").out);
  CHECK(kv["verdict"] == "budget-exceeded");
  CHECK(kv["budget_exceeded"] == "1");
  kv = porcelain(run("contract " + cat("c4.g") + " --loop 0,1,2,3,0 --k 20 --porcelain").out);
  CHECK(kv["verdict"] == "no");
  CHECK(kv["budget_exceeded"] == "0");
}

TEST_CASE("porcelain summaries") {
  auto kv = porcelain(run("explore " + cat("p2.g") + " --porcelain").out);
  CHECK(kv["verdict"] == "Halted");
  CHECK(kv["k"] == "3");
  CHECK(kv["moves"] == "24");
  CHECK(kv["visited"] == "2");
  kv = porcelain(run("classify " + cat("octahedron.g") + " --porcelain").out);
  CHECK(kv["verdict"] == "SC");
  CHECK(kv["sheets"] == "1");
  kv = porcelain(run("contract " + cat("k3.g") + " --loop 0,1,2,0 --k 3 --porcelain").out);
  CHECK(kv["verdict"] == "yes");
}

TEST_CASE("other subcommands") {
  auto r = run("ucover " + cat("k4.g") + " --base 2");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "v 4"));
  r = run("lift-check " + cat("c8.g") + " " + cat("c4.g") + " " + cat("c8-to-c4.map") + " --steps 500");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "lift-check: ok, 500 steps agree");
  r = run("enumerate --n-max 4");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "124 port graphs"));
  r = run("explore " + cat("p3.g") + " --trace /tmp/binex-cli-trace.txt");
  CHECK(r.status == 0);
  std::ifstream tr("/tmp/binex-cli-trace.txt");
  std::string head;
  std::getline(tr, head);
  CHECK(head.rfind("#", 0) == 0);
}

TEST_CASE("reports are deterministic") {
  for (const std::string args : {"explore " + cat("k3.g"), "classify " + cat("rp2.g"), "ucover " + cat("octahedron.g"),
                                 std::string("enumerate --n-max 3")})
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("usage and input errors") {
  CHECK(run("").status == 1);
  CHECK(run("frobnicate").status == 1);
  CHECK(run("explore").status == 1);
  CHECK(run("contract " + cat("k3.g") + " --k 3").status == 1);
  CHECK(run("explore " + cat("p2.g") + " --acquire sideways").status != 0);
  auto r = run("explore /nonexistent/x.g");
  CHECK(r.status == 2);
  auto bad = temp_file("bad.g", "v 2\ne 0 1 0 0\ne 0 1 x\n");
  r = run("explore " + bad);
  CHECK(r.status == 2);
  CHECK(contains(r.out, "line 3"));
  auto badmap = temp_file("bad.map", "m 0 0\nm 1 9\n");
  r = run("cover-check " + cat("p2.g") + " " + cat("p2.g") + " " + badmap);
  CHECK(r.status == 2);
  CHECK(contains(r.out, "line 2"));
  r = run("explore " + cat("p2.g") + " --start 7");
  CHECK(r.status == 2);
  r = run("contract " + cat("c4.g") + " --loop 0,2,0 --k 3");
  CHECK(r.status == 2);
}

TEST_CASE("catalog run reproduces every entry") {
  auto r = run("catalog run");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "catalog reproduced"));
  CHECK_FALSE(contains(r.out, "MISMATCH"));
}
